use crate::error::{Error, Result};
use crate::eval_classic::eval_matrix;
use crate::formula::{Classify, FragmentTag, Hyper, Matrix, Quantifier, Var};

const MAX_CLOSURE_DISJUNCTS: usize = 4096;

/// A prenex sentence occurring positively or negatively in a Boolean closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedLiteral {
    pub positive: bool,
    pub sentence: Hyper,
}

impl SignedLiteral {
    pub fn to_hyper(&self) -> Hyper {
        if self.positive {
            self.sentence.clone()
        } else {
            Hyper::not(self.sentence.clone())
        }
    }
}

/// Disjunctive normal form over the prenex sentences of a closure-level
/// formula.
pub fn bool_closure_dnf(s: &Hyper) -> Result<Vec<Vec<SignedLiteral>>> {
    closure_dnf(s, true)
}

fn closure_dnf(s: &Hyper, positive: bool) -> Result<Vec<Vec<SignedLiteral>>> {
    let conjunctive = |a: &Hyper, b: &Hyper| -> Result<Vec<Vec<SignedLiteral>>> {
        let (l, r) = (closure_dnf(a, positive)?, closure_dnf(b, positive)?);
        let count = l.len() * r.len();
        if count > MAX_CLOSURE_DISJUNCTS {
            return Err(Error::BlowUp {
                count,
                cap: MAX_CLOSURE_DISJUNCTS,
            });
        }
        Ok(l.iter()
            .flat_map(|x| r.iter().map(move |y| x.iter().chain(y).cloned().collect()))
            .collect())
    };
    let disjunctive = |a: &Hyper, b: &Hyper| -> Result<Vec<Vec<SignedLiteral>>> {
        let mut out = closure_dnf(a, positive)?;
        out.extend(closure_dnf(b, positive)?);
        Ok(out)
    };
    match s {
        Hyper::Quant(..) | Hyper::Matrix(_) => Ok(vec![vec![SignedLiteral {
            positive,
            sentence: s.clone(),
        }]]),
        Hyper::Not(a) => closure_dnf(a, !positive),
        Hyper::And(a, b) if positive => conjunctive(a, b),
        Hyper::Or(a, b) if !positive => conjunctive(a, b),
        Hyper::And(a, b) | Hyper::Or(a, b) => disjunctive(a, b),
    }
}

/// The prenex sentence equivalent to `¬s`: dual prefix, negated matrix.
pub fn negate_prenex(s: &Hyper) -> Result<Hyper> {
    let (prefix, m) = s.as_prenex().ok_or(Error::NotPrenex)?;
    Ok(Hyper::prenex(
        prefix.into_iter().map(|(q, v)| (q.dual(), v)),
        m.negated(),
    ))
}

/// A literal after pushing its sign into the sentence.
struct Block {
    prefix: Vec<(Quantifier, Var)>,
    matrix: Matrix,
}

impl Block {
    fn of(s: &Hyper) -> Result<Block> {
        let (prefix, m) = s.as_prenex().ok_or(Error::NotPrenex)?;
        Ok(Block {
            prefix,
            matrix: m.clone(),
        })
    }

    /// Truth value of a closed, quantifier-free literal.
    fn constant(&self) -> Option<bool> {
        (self.prefix.is_empty() && self.matrix.vars().is_empty()).then(|| eval_matrix(&self.matrix, &[]))
    }

    fn renamed(&self, names: &[Var]) -> Block {
        let map = |v: &Var| {
            let k = self
                .prefix
                .iter()
                .position(|(_, w)| w == v)
                .expect("sentences have no free variables");
            names[k].clone()
        };
        Block {
            prefix: self
                .prefix
                .iter()
                .zip(names)
                .map(|((q, _), n)| (*q, n.clone()))
                .collect(),
            matrix: self.matrix.rename(&map),
        }
    }
}

enum Folded {
    Constant(bool),
    Disjuncts(Vec<Vec<Block>>),
}

/// DNF with signs pushed into the sentences and closed literals folded away.
fn signed_blocks(s: &Hyper) -> Result<Folded> {
    let mut disjuncts = Vec::new();
    for conj in bool_closure_dnf(s)? {
        let mut blocks = Vec::new();
        let mut falsified = false;
        for lit in conj {
            let sentence = if lit.positive {
                lit.sentence
            } else {
                negate_prenex(&lit.sentence)?
            };
            let block = Block::of(&sentence)?;
            match block.constant() {
                Some(true) => {}
                Some(false) => falsified = true,
                None => blocks.push(block),
            }
        }
        if falsified {
            continue;
        }
        if blocks.is_empty() {
            return Ok(Folded::Constant(true));
        }
        disjuncts.push(blocks);
    }
    if disjuncts.is_empty() {
        return Ok(Folded::Constant(false));
    }
    Ok(Folded::Disjuncts(disjuncts))
}

fn constant(value: bool) -> Hyper {
    Hyper::Matrix(if value { Matrix::True } else { Matrix::False })
}

fn fresh(counter: &mut usize) -> Var {
    *counter += 1;
    Var::from(format!("pi{counter}"))
}

fn conjunction(items: impl IntoIterator<Item = Matrix>) -> Matrix {
    items.into_iter().reduce(Matrix::and).unwrap_or(Matrix::True)
}

fn disjunction(items: impl IntoIterator<Item = Matrix>) -> Matrix {
    items.into_iter().reduce(Matrix::or).unwrap_or(Matrix::False)
}

/// Prenexes a positive Boolean combination of ∀*-sentences into a single
/// ∀*-sentence.
pub fn prenex_pbc(s: &Hyper) -> Result<Hyper> {
    if !s.classify().contains(&FragmentTag::PbcForallStar) {
        return Err(Error::fragment(format!(
            "{s} is not a positive Boolean combination of forall*-sentences"
        )));
    }
    let disjuncts = match signed_blocks(s)? {
        Folded::Constant(v) => return Ok(constant(v)),
        Folded::Disjuncts(d) => d,
    };
    // per disjunct: one uniform block, named after its longest member
    let uniform: Vec<(Vec<Var>, Matrix)> = disjuncts
        .into_iter()
        .map(|blocks| {
            let names: Vec<Var> = blocks
                .iter()
                .rev()
                .max_by_key(|b| b.prefix.len())
                .map(|b| b.prefix.iter().map(|(_, v)| v.clone()).collect())
                .unwrap_or_default();
            let matrix = conjunction(blocks.iter().map(|b| b.renamed(&names).matrix));
            (names, matrix)
        })
        .collect();
    if let [(names, matrix)] = uniform.as_slice() {
        return Ok(Hyper::prenex(
            names.iter().map(|v| (Quantifier::Forall, v.clone())),
            matrix.clone(),
        ));
    }
    let mut counter = 0;
    let mut prefix = Vec::new();
    let mut matrices = Vec::new();
    for (names, matrix) in uniform {
        let renamed: Vec<Var> = names.iter().map(|_| fresh(&mut counter)).collect();
        let map = |v: &Var| renamed[names.iter().position(|w| w == v).expect("bound")].clone();
        matrices.push(matrix.rename(&map));
        prefix.extend(renamed.iter().map(|v| (Quantifier::Forall, v.clone())));
    }
    Ok(Hyper::prenex(prefix, disjunction(matrices)))
}

/// Prenexes a Boolean combination of prenex sentences.
///
/// Blocks are renamed apart and pulled out in order, except that a block
/// whose leading quantifier matches the value of the input on the empty team
/// goes first: on the empty team a prenex sentence is true exactly when it
/// starts with `∀`.
pub fn prenex_bc(s: &Hyper) -> Result<Hyper> {
    s.validate()?;
    let disjuncts = match signed_blocks(s)? {
        Folded::Constant(v) => return Ok(constant(v)),
        Folded::Disjuncts(d) => d,
    };
    if let [conj] = disjuncts.as_slice() {
        if let [only] = conj.as_slice() {
            return Ok(Hyper::prenex(only.prefix.clone(), only.matrix.clone()));
        }
    }
    let leads_forall = |b: &Block| b.prefix.first().map(|(q, _)| *q) == Some(Quantifier::Forall);
    let on_empty = disjuncts.iter().any(|conj| conj.iter().all(leads_forall));

    let mut counter = 0;
    let mut blocks: Vec<Vec<(Quantifier, Var)>> = Vec::new();
    let mut matrices = Vec::new();
    for conj in &disjuncts {
        let mut parts = Vec::new();
        for block in conj {
            let names: Vec<Var> = block.prefix.iter().map(|_| fresh(&mut counter)).collect();
            let renamed = block.renamed(&names);
            blocks.push(renamed.prefix);
            parts.push(renamed.matrix);
        }
        matrices.push(conjunction(parts));
    }
    let lead = blocks
        .iter()
        .position(|b| b.first().map(|(q, _)| *q == Quantifier::Forall) == Some(on_empty))
        .expect("the empty-team value is witnessed by some block");
    let first = blocks.remove(lead);
    let prefix = first.into_iter().chain(blocks.into_iter().flatten());
    Ok(Hyper::prenex(prefix, disjunction(matrices)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_hyper;

    fn h(text: &str) -> Hyper {
        parse_hyper(text).unwrap()
    }

    #[test]
    fn closure_dnf_examples() {
        let a = h("forall pi. p@pi");
        let b = h("forall pi. q@pi");
        let c = h("exists pi. q@pi");
        let s = Hyper::and(a.clone(), Hyper::or(b.clone(), c.clone()));
        let dnf = bool_closure_dnf(&s).unwrap();
        let pos = |x: &Hyper| SignedLiteral {
            positive: true,
            sentence: x.clone(),
        };
        let neg = |x: &Hyper| SignedLiteral {
            positive: false,
            sentence: x.clone(),
        };
        assert_eq!(dnf, vec![vec![pos(&a), pos(&b)], vec![pos(&a), pos(&c)]]);
        let s = Hyper::not(Hyper::or(a.clone(), b.clone()));
        assert_eq!(bool_closure_dnf(&s).unwrap(), vec![vec![neg(&a), neg(&b)]]);
        assert_eq!(bool_closure_dnf(&a).unwrap(), vec![vec![pos(&a)]]);
    }

    #[test]
    fn negate_prenex_examples() {
        assert_eq!(
            negate_prenex(&h("forall pi. G p@pi")).unwrap().to_string(),
            "exists pi. F !p@pi"
        );
        assert_eq!(
            negate_prenex(&h("exists pi. p@pi")).unwrap().to_string(),
            "forall pi. !p@pi"
        );
        let s = h("forall pi. exists tau. G (p@pi U !q@tau)");
        assert_eq!(negate_prenex(&negate_prenex(&s).unwrap()).unwrap(), s);
        assert!(matches!(
            negate_prenex(&h("!(forall pi. p@pi)")),
            Err(Error::NotPrenex)
        ));
    }

    #[test]
    fn prenex_pbc_examples() {
        let out = prenex_pbc(&h("(forall pi. p@pi) | (forall pi. q@pi)")).unwrap();
        assert_eq!(out.to_string(), "forall pi1. forall pi2. (p@pi1 | q@pi2)");
        let out = prenex_pbc(&h("(forall pi. p@pi) & (forall pi. q@pi)")).unwrap();
        assert_eq!(out.to_string(), "forall pi. (p@pi & q@pi)");
        let single = h("forall pi. forall tau. G (p@pi | q@tau)");
        assert_eq!(prenex_pbc(&single).unwrap(), single);
        assert!(prenex_pbc(&h("exists pi. p@pi")).is_err());
    }

    #[test]
    fn prenex_bc_examples() {
        let out = prenex_bc(&h("!(forall pi. G p@pi)")).unwrap();
        assert_eq!(out.to_string(), "exists pi. F !p@pi");
        // false on the empty team, so the existential block leads
        let out = prenex_bc(&h("(forall pi. p@pi) & !(forall pi. q@pi)")).unwrap();
        assert_eq!(out.to_string(), "exists pi2. forall pi1. (p@pi1 & !q@pi2)");
        let out = prenex_bc(&h("(forall pi. p@pi) | (forall pi. p@pi)")).unwrap();
        assert_eq!(out.to_string(), "forall pi1. forall pi2. (p@pi1 | p@pi2)");
    }

    #[test]
    fn closed_literals_fold() {
        let out = prenex_bc(&h("1 | (exists pi. p@pi)")).unwrap();
        assert_eq!(out, constant(true));
        let out = prenex_pbc(&h("0 | (forall pi. p@pi)")).unwrap();
        assert_eq!(out.to_string(), "forall pi. p@pi");
    }
}
