//! Classical LTL evaluation on lassos and HyperLTL evaluation over teams.

use crate::error::{Error, Result};
use crate::formula::{Formula, Hyper, Matrix, Quantifier, Var};
use crate::traces::{product, product_prop, LassoTrace, Team, TraceAssignment};

/// Truth values of a formula at the positions `0..|stem|+|cycle|` of a lasso;
/// the successor of the last position is `|stem|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionTable {
    values: Vec<bool>,
}

impl PositionTable {
    pub fn build(t: &LassoTrace, a: &Formula) -> Result<Self> {
        if !a.is_ltl() {
            return Err(Error::fragment("classical evaluation needs a pure LTL formula"));
        }
        Ok(PositionTable {
            values: table(t, a),
        })
    }

    pub fn at(&self, t: &LassoTrace, i: usize) -> bool {
        self.values[t.canonical_position(i)]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

pub fn eval_ltl(t: &LassoTrace, a: &Formula) -> Result<bool> {
    Ok(PositionTable::build(t, a)?.values[0])
}

fn table(t: &LassoTrace, a: &Formula) -> Vec<bool> {
    let n = t.len();
    match a {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(p) => (0..n).map(|k| t.letter(k).contains(p)).collect(),
        Formula::NegAtom(p) => (0..n).map(|k| !t.letter(k).contains(p)).collect(),
        Formula::And(x, y) => zip(table(t, x), table(t, y), |a, b| a && b),
        Formula::Or(x, y) => zip(table(t, x), table(t, y), |a, b| a || b),
        Formula::Next(x) => {
            let inner = table(t, x);
            (0..n).map(|k| inner[t.successor(k)]).collect()
        }
        Formula::Globally(x) => {
            let inner = table(t, x);
            fixpoint(t, true, |k, next| inner[k] && next)
        }
        Formula::Until(x, y) => {
            let (l, r) = (table(t, x), table(t, y));
            fixpoint(t, false, |k, next| r[k] || (l[k] && next))
        }
        Formula::Release(x, y) => {
            let (l, r) = (table(t, x), table(t, y));
            fixpoint(t, true, |k, next| r[k] && (l[k] || next))
        }
        Formula::OvOr(..) | Formula::BoolNeg(_) => unreachable!("checked in PositionTable::build"),
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// Solves `val[k] = step(k, val[succ k])` starting from `init`: two backward
/// passes over the cycle settle the wrap-around, one pass covers the stem.
fn fixpoint(t: &LassoTrace, init: bool, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
    let n = t.len();
    let s = t.stem().len();
    let mut val = vec![init; n];
    for _ in 0..2 {
        for k in (s..n).rev() {
            val[k] = step(k, val[t.successor(k)]);
        }
    }
    for k in (0..s).rev() {
        val[k] = step(k, val[k + 1]);
    }
    val
}

/// Evaluates a HyperLTL sentence with quantifiers ranging over `team`.
/// Quantification over the empty team: `∀` holds, `∃` fails.
pub fn eval_hyper(team: &Team, s: &Hyper) -> Result<bool> {
    s.validate()?;
    let traces: Vec<&LassoTrace> = team.iter().collect();
    Ok(eval_sentence(&traces, s, &mut Vec::new()))
}

fn eval_sentence<'a>(traces: &[&'a LassoTrace], s: &Hyper, env: &mut Vec<(Var, &'a LassoTrace)>) -> bool {
    match s {
        Hyper::Quant(q, v, body) => {
            let mut check = |t: &&'a LassoTrace| {
                env.push((v.clone(), *t));
                let r = eval_sentence(traces, body, env);
                env.pop();
                r
            };
            match q {
                Quantifier::Forall => traces.iter().all(&mut check),
                Quantifier::Exists => traces.iter().any(&mut check),
            }
        }
        Hyper::Matrix(m) => eval_matrix(m, env),
        Hyper::Not(a) => !eval_sentence(traces, a, env),
        Hyper::And(a, b) => eval_sentence(traces, a, env) && eval_sentence(traces, b, env),
        Hyper::Or(a, b) => eval_sentence(traces, a, env) || eval_sentence(traces, b, env),
    }
}

/// Evaluates a matrix under an assignment by running LTL on the product.
pub fn eval_matrix(m: &Matrix, env: &[(Var, &LassoTrace)]) -> bool {
    let vars = m.vars();
    let assignment: TraceAssignment = env
        .iter()
        .filter(|(v, _)| vars.contains(v))
        .map(|(v, t)| (v.clone(), (*t).clone()))
        .collect();
    let zipped = product(&assignment);
    let ltl = m.to_ltl(&product_prop);
    eval_ltl(&zipped, &ltl).expect("matrix translation is pure LTL")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::hyperify;
    use crate::harness::gen::{gen_ltl, gen_lasso, GenConfig};
    use crate::traces::letter;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Direct reading of the LTL semantics on the unrolled word. Witness
    /// searches stop after `|stem| + |cycle|` steps, past which suffixes repeat.
    fn naive(t: &LassoTrace, a: &Formula, i: usize) -> bool {
        let horizon = i..=i + t.len();
        match a {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(p) => t.letter(i).contains(p),
            Formula::NegAtom(p) => !t.letter(i).contains(p),
            Formula::And(x, y) => naive(t, x, i) && naive(t, y, i),
            Formula::Or(x, y) => naive(t, x, i) || naive(t, y, i),
            Formula::Next(x) => naive(t, x, i + 1),
            Formula::Globally(x) => horizon.into_iter().all(|j| naive(t, x, j)),
            Formula::Until(x, y) => {
                for j in horizon {
                    if naive(t, y, j) {
                        return true;
                    }
                    if !naive(t, x, j) {
                        return false;
                    }
                }
                false
            }
            Formula::Release(x, y) => {
                for j in horizon {
                    if !naive(t, y, j) {
                        return false;
                    }
                    if naive(t, x, j) {
                        return true;
                    }
                }
                true
            }
            _ => panic!("not LTL"),
        }
    }

    fn lasso(stem: &[&[&str]], cycle: &[&[&str]]) -> LassoTrace {
        LassoTrace::new(
            stem.iter().map(|s| letter(s.iter().copied())).collect(),
            cycle.iter().map(|s| letter(s.iter().copied())).collect(),
        )
        .unwrap()
    }

    #[test]
    fn eval_ltl_examples() {
        let t = lasso(&[&["p"], &[]], &[&["q"]]);
        let fq = Formula::finally(Formula::atom("q"));
        let gq = Formula::globally(Formula::atom("q"));
        assert_eq!(eval_ltl(&t, &fq).unwrap(), naive(&t, &fq, 0));
        assert!(eval_ltl(&t, &fq).unwrap());
        assert_eq!(eval_ltl(&t, &gq).unwrap(), naive(&t, &gq, 0));
        assert!(!eval_ltl(&t, &gq).unwrap());
        assert!(eval_ltl(&t, &Formula::True).unwrap());
        assert!(eval_ltl(&t, &Formula::bool_neg(Formula::True)).is_err());
    }

    #[test]
    fn table_agrees_with_naive_semantics() {
        let cfg = GenConfig {
            max_depth: 5,
            max_stem: 3,
            max_period: 3,
            ..GenConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let a = gen_ltl(&mut rng, &cfg);
            let t = gen_lasso(&mut rng, &cfg);
            let table = PositionTable::build(&t, &a).unwrap();
            for i in 0..t.len() + 3 {
                assert_eq!(table.at(&t, i), naive(&t, &a, i), "{a:?} on {t} at {i}");
            }
        }
    }

    #[test]
    fn non_canonical_representations_agree() {
        let cfg = GenConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let a = gen_ltl(&mut rng, &cfg);
            let t = gen_lasso(&mut rng, &cfg);
            // unfold once and double the cycle: same ω-word, different shape
            let mut stem = t.stem().to_vec();
            stem.extend(t.cycle().iter().cloned());
            let mut cycle = t.cycle().to_vec();
            cycle.extend(t.cycle().iter().cloned());
            cycle.rotate_left(1);
            stem.push(t.cycle()[0].clone());
            let raw = LassoTrace::raw(stem, cycle);
            assert_eq!(raw.unroll(24), t.unroll(24));
            assert_eq!(eval_ltl(&raw, &a).unwrap(), eval_ltl(&t, &a).unwrap());
        }
    }

    #[test]
    fn eval_hyper_examples() {
        let team: Team = [lasso(&[], &[&["p"]]), lasso(&[], &[&["q"]])].into_iter().collect();
        let s = Hyper::forall(
            "pi",
            Hyper::exists(
                "tau",
                Hyper::Matrix(Matrix::or(Matrix::atom("p", "pi"), Matrix::atom("q", "tau"))),
            ),
        );
        assert!(eval_hyper(&team, &s).unwrap());

        let empty = Team::new();
        assert!(eval_hyper(&empty, &Hyper::forall("pi", Hyper::Matrix(Matrix::False))).unwrap());
        assert!(!eval_hyper(&empty, &Hyper::exists("pi", Hyper::Matrix(Matrix::True))).unwrap());

        let team: Team = [lasso(&[], &[&["p"]])].into_iter().collect();
        let s = Hyper::forall("pi", Hyper::Matrix(Matrix::globally(Matrix::atom("p", "pi"))));
        assert!(eval_hyper(&team, &s).unwrap());

        let open = Hyper::Matrix(Matrix::atom("p", "pi"));
        assert!(matches!(eval_hyper(&team, &open), Err(Error::FreeVariable(_))));
    }

    #[test]
    fn hyperification_adequacy() {
        let cfg = GenConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pi = Var::new("pi");
        for _ in 0..500 {
            let a = gen_ltl(&mut rng, &cfg);
            let t = gen_lasso(&mut rng, &cfg);
            let team: Team = [t.clone()].into_iter().collect();
            let s = Hyper::forall("pi", Hyper::Matrix(hyperify(&a, &pi).unwrap()));
            assert_eq!(eval_ltl(&t, &a).unwrap(), eval_hyper(&team, &s).unwrap());
        }
    }
}
