use super::hyper::{bool_closure_dnf, negate_prenex};
use super::normal::{to_ov_dnf, to_quasi_flat};
use super::TransformConfig;
use crate::error::{Error, Result};
use crate::formula::{dehyperify, dual, hyperify, Formula, Hyper, Quantifier, Var};

fn pi() -> Var {
    Var::new("pi")
}

fn closure_or(items: impl IntoIterator<Item = Hyper>) -> Hyper {
    items.into_iter().reduce(Hyper::or).expect("normal forms are nonempty")
}

fn closure_and(items: impl IntoIterator<Item = Hyper>) -> Hyper {
    items.into_iter().reduce(Hyper::and).expect("at least one conjunct")
}

/// `⩔ᵢ αᵢ` becomes `⋁ᵢ ∀π. αᵢ(π)`.
pub fn teamov_to_pbc(phi: &Formula, cfg: &TransformConfig) -> Result<Hyper> {
    let dnf = to_ov_dnf(phi, cfg)?;
    let pi = pi();
    let literals = dnf
        .disjuncts()
        .iter()
        .map(|a| Ok(Hyper::forall(pi.clone(), Hyper::Matrix(hyperify(a, &pi)?))))
        .collect::<Result<Vec<_>>>()?;
    Ok(closure_or(literals))
}

/// Splits a one-variable literal into its quantifier and LTL body.
fn one_variable(s: &Hyper) -> Result<(Quantifier, Formula)> {
    match s.as_prenex() {
        Some((prefix, m)) if prefix.len() == 1 => {
            let (q, v) = &prefix[0];
            Ok((*q, dehyperify(m, v)?))
        }
        _ => Err(Error::fragment(format!(
            "{s} is not a sentence with exactly one quantifier"
        ))),
    }
}

/// `⋁ᵢ ⋀ⱼ ∀π. φᵢⱼ(π)` becomes `⩔ᵢ ⋀ⱼ φᵢⱼ`.
pub fn pbc_to_teamov(s: &Hyper) -> Result<Formula> {
    s.validate()?;
    let mut disjuncts = Vec::new();
    for conj in bool_closure_dnf(s)? {
        let mut parts = Vec::new();
        for lit in conj {
            if !lit.positive {
                return Err(Error::fragment("negation is not allowed in a positive Boolean combination"));
            }
            match one_variable(&lit.sentence)? {
                (Quantifier::Forall, body) => parts.push(body),
                (Quantifier::Exists, _) => {
                    return Err(Error::fragment(format!(
                        "{} is existential; expected forall-sentences only",
                        lit.sentence
                    )))
                }
            }
        }
        disjuncts.push(Formula::conjunction(parts));
    }
    Ok(Formula::ov_disjunction(disjuncts).expect("a DNF is never empty"))
}

/// `⩔ᵢ(αᵢ ∧ ⋀ⱼ ∃βᵢⱼ)` becomes `⋁ᵢ(∀π.αᵢ(π) ∧ ⋀ⱼ ∃π.βᵢⱼ(π))`; with
/// `forall_only`, `∃π.β` is written `¬∀π.βᵈ`.
pub fn leftdc_to_bc(phi: &Formula, forall_only: bool, cfg: &TransformConfig) -> Result<Hyper> {
    let qf = to_quasi_flat(phi, cfg)?;
    let pi = pi();
    let sentence = |q: Quantifier, a: &Formula| -> Result<Hyper> {
        Ok(Hyper::quant(q, pi.clone(), Hyper::Matrix(hyperify(a, &pi)?)))
    };
    let mut disjuncts = Vec::new();
    for c in qf.conjuncts() {
        let mut parts = Vec::new();
        if c.alpha != Formula::True || c.betas.is_empty() {
            parts.push(sentence(Quantifier::Forall, &c.alpha)?);
        }
        for b in &c.betas {
            parts.push(if forall_only {
                Hyper::not(sentence(Quantifier::Forall, &dual(b)?)?)
            } else {
                sentence(Quantifier::Exists, b)?
            });
        }
        disjuncts.push(closure_and(parts));
    }
    Ok(closure_or(disjuncts))
}

/// Boolean combinations of one-variable sentences become
/// `⩔ᵢ(αᵢ ∧ ⋀ⱼ ~βᵢⱼᵈ)`, where `αᵢ` conjoins the universal literals.
pub fn bc_to_leftdc(s: &Hyper) -> Result<Formula> {
    s.validate()?;
    let mut disjuncts = Vec::new();
    for conj in bool_closure_dnf(s)? {
        let mut universal = Vec::new();
        let mut existential = Vec::new();
        for lit in conj {
            let sentence = if lit.positive {
                lit.sentence
            } else {
                negate_prenex(&lit.sentence)?
            };
            match one_variable(&sentence)? {
                (Quantifier::Forall, body) => universal.push(body),
                (Quantifier::Exists, body) => existential.push(Formula::bool_neg(dual(&body)?)),
            }
        }
        let alpha = Formula::conjunction(universal);
        let parts = if alpha == Formula::True && !existential.is_empty() {
            existential
        } else {
            std::iter::once(alpha).chain(existential).collect()
        };
        disjuncts.push(Formula::conjunction(parts));
    }
    Ok(Formula::ov_disjunction(disjuncts).expect("a DNF is never empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_hyper, parse_team};

    fn cfg() -> TransformConfig {
        TransformConfig::default()
    }

    fn to_pbc(text: &str) -> String {
        teamov_to_pbc(&parse_team(text).unwrap(), &cfg()).unwrap().to_string()
    }

    fn to_team(text: &str) -> String {
        pbc_to_teamov(&parse_hyper(text).unwrap()).unwrap().to_string()
    }

    fn to_bc(text: &str, forall_only: bool) -> String {
        leftdc_to_bc(&parse_team(text).unwrap(), forall_only, &cfg())
            .unwrap()
            .to_string()
    }

    fn to_leftdc(text: &str) -> String {
        bc_to_leftdc(&parse_hyper(text).unwrap()).unwrap().to_string()
    }

    #[test]
    fn teamov_to_pbc_examples() {
        assert_eq!(to_pbc("p OR G q"), "(forall pi. p@pi) | (forall pi. G q@pi)");
        assert_eq!(to_pbc("p & q"), "forall pi. (p@pi & q@pi)");
        assert_eq!(to_pbc("G(p OR q)"), "(forall pi. G p@pi) | (forall pi. G q@pi)");
    }

    #[test]
    fn pbc_to_teamov_examples() {
        assert_eq!(to_team("(forall pi. p@pi) | (forall pi. q@pi)"), "p OR q");
        assert_eq!(to_team("(forall pi. p@pi) & (forall pi. q@pi)"), "p & q");
        assert_eq!(to_team("forall pi. !(p@pi)"), "!p");
        for bad in [
            "exists pi. p@pi",
            "forall pi. forall tau. p@pi",
            "!(forall pi. p@pi)",
            "1 | (forall pi. p@pi)",
        ] {
            let s = parse_hyper(bad).unwrap();
            assert!(matches!(pbc_to_teamov(&s), Err(Error::Fragment(_))), "{bad}");
        }
    }

    #[test]
    fn leftdc_to_bc_examples() {
        assert_eq!(
            to_bc("G p & ~(G q)", false),
            "(forall pi. G p@pi) & (exists pi. F !q@pi)"
        );
        assert_eq!(to_bc("p", false), "forall pi. p@pi");
        assert_eq!(
            to_bc("G p & ~(G q)", true),
            "(forall pi. G p@pi) & !(forall pi. G q@pi)"
        );
    }

    #[test]
    fn bc_to_leftdc_examples() {
        assert_eq!(
            to_leftdc("(forall pi. G p@pi) & !(forall pi. G q@pi)"),
            "G p & ~(G q)"
        );
        assert_eq!(to_leftdc("exists pi. p@pi"), "~(!p)");
        assert_eq!(to_leftdc("!(exists pi. F p@pi)"), "G !p");
        let two = parse_hyper("forall pi. exists tau. p@pi U q@tau").unwrap();
        assert!(matches!(bc_to_leftdc(&two), Err(Error::Fragment(_))));
        let mixed = parse_hyper("forall pi. (p@pi & exists tau. q@tau)");
        assert!(mixed.is_err());
    }
}
