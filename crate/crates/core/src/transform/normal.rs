
use super::{Fault, TransformConfig};
use crate::error::{Error, Result};
use crate::formula::{dual, Formula};

/// `⩔ᵢ αᵢ` with every `αᵢ` in LTL; never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvDnf {
    disjuncts: Vec<Formula>,
}

impl OvDnf {
    pub fn new(disjuncts: Vec<Formula>) -> Result<Self> {
        if disjuncts.is_empty() {
            return Err(Error::fragment("a ⩔-normal form needs at least one disjunct"));
        }
        if let Some(a) = disjuncts.iter().find(|a| !a.is_ltl()) {
            return Err(Error::fragment(format!("disjunct {a} is not LTL")));
        }
        Ok(OvDnf { disjuncts })
    }

    pub fn disjuncts(&self) -> &[Formula] {
        &self.disjuncts
    }

    pub fn to_formula(&self) -> Formula {
        Formula::ov_disjunction(self.disjuncts.iter().cloned()).expect("nonempty")
    }
}

/// One disjunct `α ∧ ⋀ⱼ ∃βⱼ` of a quasi-flat form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QfConjunct {
    pub alpha: Formula,
    pub betas: Vec<Formula>,
}

impl QfConjunct {
    pub fn flat(alpha: Formula) -> Self {
        QfConjunct {
            alpha,
            betas: Vec::new(),
        }
    }

    /// `α ∧ ⋀ⱼ ~βⱼᵈ`, dropping `α` when it is `1` and some `βⱼ` is present.
    pub fn to_formula(&self) -> Formula {
        let exists = self
            .betas
            .iter()
            .map(|b| Formula::bool_neg(dual(b).expect("betas are LTL")));
        if self.alpha == Formula::True && !self.betas.is_empty() {
            Formula::conjunction(exists)
        } else {
            Formula::conjunction(std::iter::once(self.alpha.clone()).chain(exists))
        }
    }
}

/// `⩔ᵢ (αᵢ ∧ ⋀ⱼ ∃βᵢⱼ)` with LTL components; never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiFlat {
    conjuncts: Vec<QfConjunct>,
}

impl QuasiFlat {
    pub fn new(conjuncts: Vec<QfConjunct>) -> Result<Self> {
        if conjuncts.is_empty() {
            return Err(Error::fragment("a quasi-flat form needs at least one disjunct"));
        }
        let all_ltl = conjuncts
            .iter()
            .all(|c| c.alpha.is_ltl() && c.betas.iter().all(Formula::is_ltl));
        if !all_ltl {
            return Err(Error::fragment("quasi-flat components must be LTL"));
        }
        Ok(QuasiFlat { conjuncts })
    }

    pub fn conjuncts(&self) -> &[QfConjunct] {
        &self.conjuncts
    }

    pub fn to_formula(&self) -> Formula {
        Formula::ov_disjunction(self.conjuncts.iter().map(QfConjunct::to_formula)).expect("nonempty")
    }
}

fn capped<T>(items: Vec<T>, cfg: &TransformConfig) -> Result<Vec<T>> {
    if items.len() > cfg.max_disjuncts {
        return Err(Error::BlowUp {
            count: items.len(),
            cap: cfg.max_disjuncts,
        });
    }
    Ok(items)
}

fn cross<A, B, T>(left: &[A], right: &[B], cfg: &TransformConfig, op: impl Fn(&A, &B) -> T) -> Result<Vec<T>> {
    let count = left.len() * right.len();
    if count > cfg.max_disjuncts {
        return Err(Error::BlowUp {
            count,
            cap: cfg.max_disjuncts,
        });
    }
    Ok(left
        .iter()
        .flat_map(|a| right.iter().map(|b| op(a, b)).collect::<Vec<_>>())
        .collect())
}

/// Pulls every `⩔` of a TeamLTL(⩔) formula to the root.
pub fn to_ov_dnf(phi: &Formula, cfg: &TransformConfig) -> Result<OvDnf> {
    if !phi.is_team_ov() {
        return Err(Error::fragment(format!("{phi} is not a TeamLTL(OR) formula")));
    }
    OvDnf::new(ov_dnf(phi, cfg)?)
}

fn ov_dnf(f: &Formula, cfg: &TransformConfig) -> Result<Vec<Formula>> {
    if f.is_ltl() {
        return Ok(vec![f.clone()]);
    }
    let out = match f {
        Formula::And(a, b) => cross(&ov_dnf(a, cfg)?, &ov_dnf(b, cfg)?, cfg, |x, y| {
            Formula::and(x.clone(), y.clone())
        })?,
        Formula::Or(a, b) => cross(&ov_dnf(a, cfg)?, &ov_dnf(b, cfg)?, cfg, |x, y| {
            Formula::or(x.clone(), y.clone())
        })?,
        Formula::Until(a, b) => cross(&ov_dnf(a, cfg)?, &ov_dnf(b, cfg)?, cfg, |x, y| {
            Formula::until(x.clone(), y.clone())
        })?,
        Formula::OvOr(a, b) => {
            let mut items = ov_dnf(a, cfg)?;
            items.extend(ov_dnf(b, cfg)?);
            items
        }
        Formula::Next(a) => ov_dnf(a, cfg)?.into_iter().map(Formula::next).collect(),
        Formula::Globally(a) => {
            let inner = ov_dnf(a, cfg)?;
            if cfg.fault == Some(Fault::GloballySplits) {
                let split = inner.into_iter().reduce(Formula::or).expect("nonempty");
                vec![Formula::globally(split)]
            } else {
                inner.into_iter().map(Formula::globally).collect()
            }
        }
        Formula::BoolNeg(_) => return Err(Error::fragment("`~` is not part of TeamLTL(OR)")),
        Formula::True
        | Formula::False
        | Formula::Atom(_)
        | Formula::NegAtom(_)
        | Formula::Release(..) => unreachable!("LTL handled above"),
    };
    capped(out, cfg)
}

/// Rewrites a left-dc TeamLTL(~) formula into quasi-flat form.
pub fn to_quasi_flat(phi: &Formula, cfg: &TransformConfig) -> Result<QuasiFlat> {
    if !phi.is_left_dc() {
        return Err(Error::fragment(format!(
            "{phi} is not left-dc: `~` occurs under G or left of U"
        )));
    }
    QuasiFlat::new(quasi_flat(phi, cfg)?)
}

fn conjoin(x: &QfConjunct, y: &QfConjunct) -> QfConjunct {
    QfConjunct {
        alpha: Formula::and_simplified(x.alpha.clone(), y.alpha.clone()),
        betas: x.betas.iter().chain(&y.betas).cloned().collect(),
    }
}

fn quasi_flat(f: &Formula, cfg: &TransformConfig) -> Result<Vec<QfConjunct>> {
    if f.is_ltl() {
        return Ok(vec![QfConjunct::flat(f.clone())]);
    }
    let out = match f {
        Formula::And(a, b) => cross(&quasi_flat(a, cfg)?, &quasi_flat(b, cfg)?, cfg, conjoin)?,
        Formula::Or(a, b) => cross(&quasi_flat(a, cfg)?, &quasi_flat(b, cfg)?, cfg, |x, y| {
            let side = |c: &QfConjunct| {
                c.betas
                    .iter()
                    .map(|b| Formula::and_simplified(c.alpha.clone(), b.clone()))
                    .collect::<Vec<_>>()
            };
            QfConjunct {
                alpha: Formula::or(x.alpha.clone(), y.alpha.clone()),
                betas: side(x).into_iter().chain(side(y)).collect(),
            }
        })?,
        Formula::OvOr(a, b) => {
            let mut items = quasi_flat(a, cfg)?;
            items.extend(quasi_flat(b, cfg)?);
            items
        }
        Formula::BoolNeg(a) => {
            // ~⩔ᵢ(αᵢ ∧ ⋀ⱼ∃βᵢⱼ) is ⋀ᵢ(∃αᵢᵈ ⩔ ⩔ⱼ βᵢⱼᵈ)
            let mut acc = vec![QfConjunct::flat(Formula::True)];
            for c in quasi_flat(a, cfg)? {
                let mut options = vec![QfConjunct {
                    alpha: Formula::True,
                    betas: vec![dual(&c.alpha)?],
                }];
                for b in &c.betas {
                    options.push(QfConjunct::flat(dual(b)?));
                }
                acc = cross(&acc, &options, cfg, conjoin)?;
            }
            acc
        }
        Formula::Next(a) => quasi_flat(a, cfg)?
            .into_iter()
            .map(|c| QfConjunct {
                alpha: Formula::next(c.alpha),
                betas: c.betas.into_iter().map(Formula::next).collect(),
            })
            .collect(),
        Formula::Globally(_) => ov_dnf(f, cfg)?.into_iter().map(QfConjunct::flat).collect(),
        Formula::Until(a, b) => cross(&ov_dnf(a, cfg)?, &quasi_flat(b, cfg)?, cfg, |l, c| QfConjunct {
            alpha: Formula::until(l.clone(), c.alpha.clone()),
            betas: c
                .betas
                .iter()
                .map(|d| Formula::until(l.clone(), Formula::and_simplified(c.alpha.clone(), d.clone())))
                .collect(),
        })?,
        Formula::True
        | Formula::False
        | Formula::Atom(_)
        | Formula::NegAtom(_)
        | Formula::Release(..) => unreachable!("LTL handled above"),
    };
    capped(out, cfg)
}
