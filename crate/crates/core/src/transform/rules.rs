//! The individual rewrite steps behind [`super::to_ov_dnf`] and
//! [`super::to_quasi_flat`], as schemas that can be instantiated and checked
//! against the exhaustive oracle one at a time.
//!
//! `∃β` is written `~βᵈ` throughout.

use crate::error::Result;
use crate::eval_team::Oracle;
use crate::formula::{dual, Formula};
use crate::syntax::parse_team;
use crate::traces::Team;

/// What a schema variable may be instantiated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetaKind {
    Ltl,
    TeamOv,
    LeftDc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    // pulling ⩔ to the root
    AndOverOvLeft,
    AndOverOvRight,
    OrOverOvLeft,
    OrOverOvRight,
    NextOverOv,
    GloballyOverOv,
    UntilLeftOverOv,
    UntilRightOverOv,
    // quasi-flat steps
    NegLtl,
    NegExists,
    NegOvOr,
    NegConj,
    ConjMerge,
    SplitOr,
    SplitOrFlat,
    SplitOrOverOv,
    AndOverOvDc,
    NextQf,
    NextOverOvDc,
    UntilQf,
    UntilQf2,
    UntilRightOverOvDc,
}

fn ex(b: &Formula) -> Result<Formula> {
    Ok(Formula::bool_neg(dual(b)?))
}

fn and(a: &Formula, b: &Formula) -> Formula {
    Formula::and(a.clone(), b.clone())
}

fn or(a: &Formula, b: &Formula) -> Formula {
    Formula::or(a.clone(), b.clone())
}

fn ov(a: Formula, b: Formula) -> Formula {
    Formula::ov_or(a, b)
}

fn until(a: &Formula, b: &Formula) -> Formula {
    Formula::until(a.clone(), b.clone())
}

impl Rule {
    pub const ALL: [Rule; 22] = [
        Rule::AndOverOvLeft,
        Rule::AndOverOvRight,
        Rule::OrOverOvLeft,
        Rule::OrOverOvRight,
        Rule::NextOverOv,
        Rule::GloballyOverOv,
        Rule::UntilLeftOverOv,
        Rule::UntilRightOverOv,
        Rule::NegLtl,
        Rule::NegExists,
        Rule::NegOvOr,
        Rule::NegConj,
        Rule::ConjMerge,
        Rule::SplitOr,
        Rule::SplitOrFlat,
        Rule::SplitOrOverOv,
        Rule::AndOverOvDc,
        Rule::NextQf,
        Rule::NextOverOvDc,
        Rule::UntilQf,
        Rule::UntilQf2,
        Rule::UntilRightOverOvDc,
    ];

    /// Schema text, with `φ ψ θ` ranging over team formulas and the other
    /// Greek letters over LTL.
    pub fn schema(self) -> &'static str {
        match self {
            Rule::AndOverOvLeft => "(φ ⩔ ψ) ∧ θ  ↦  (φ ∧ θ) ⩔ (ψ ∧ θ)",
            Rule::AndOverOvRight => "θ ∧ (φ ⩔ ψ)  ↦  (θ ∧ φ) ⩔ (θ ∧ ψ)",
            Rule::OrOverOvLeft => "(φ ⩔ ψ) ∨ θ  ↦  (φ ∨ θ) ⩔ (ψ ∨ θ)",
            Rule::OrOverOvRight => "θ ∨ (φ ⩔ ψ)  ↦  (θ ∨ φ) ⩔ (θ ∨ ψ)",
            Rule::NextOverOv => "X(φ ⩔ ψ)  ↦  Xφ ⩔ Xψ",
            Rule::GloballyOverOv => "G(φ ⩔ ψ)  ↦  Gφ ⩔ Gψ",
            Rule::UntilLeftOverOv => "(φ ⩔ ψ) U θ  ↦  (φ U θ) ⩔ (ψ U θ)",
            Rule::UntilRightOverOv => "θ U (φ ⩔ ψ)  ↦  (θ U φ) ⩔ (θ U ψ)",
            Rule::NegLtl => "~α  ↦  ∃αᵈ",
            Rule::NegExists => "~∃β  ↦  βᵈ",
            Rule::NegOvOr => "~(φ ⩔ ψ)  ↦  ~φ ∧ ~ψ",
            Rule::NegConj => "~(α ∧ ∃β)  ↦  ∃αᵈ ⩔ βᵈ",
            Rule::ConjMerge => "(α ∧ ∃β) ∧ (γ ∧ ∃δ)  ↦  (α ∧ γ) ∧ ∃β ∧ ∃δ",
            Rule::SplitOr => "(α ∧ ∃β) ∨ (γ ∧ ∃δ)  ↦  (α ∨ γ) ∧ ∃(α ∧ β) ∧ ∃(γ ∧ δ)",
            Rule::SplitOrFlat => "(α ∧ ∃β) ∨ γ  ↦  (α ∨ γ) ∧ ∃(α ∧ β)",
            Rule::SplitOrOverOv => "(φ ⩔ ψ) ∨ θ  ↦  (φ ∨ θ) ⩔ (ψ ∨ θ)   [with ~]",
            Rule::AndOverOvDc => "(φ ⩔ ψ) ∧ θ  ↦  (φ ∧ θ) ⩔ (ψ ∧ θ)   [with ~]",
            Rule::NextQf => "X(α ∧ ∃β)  ↦  Xα ∧ ∃Xβ",
            Rule::NextOverOvDc => "X(φ ⩔ ψ)  ↦  Xφ ⩔ Xψ   [with ~]",
            Rule::UntilQf => "α U (γ ∧ ∃δ)  ↦  (α U γ) ∧ ∃(α U (γ ∧ δ))",
            Rule::UntilQf2 => {
                "α U (γ ∧ ∃δ ∧ ∃ε)  ↦  (α U γ) ∧ ∃(α U (γ ∧ δ)) ∧ ∃(α U (γ ∧ ε))"
            }
            Rule::UntilRightOverOvDc => "θ U (φ ⩔ ψ)  ↦  (θ U φ) ⩔ (θ U ψ)   [with ~]",
        }
    }

    pub fn metas(self) -> &'static [MetaKind] {
        use MetaKind::*;
        match self {
            Rule::AndOverOvLeft
            | Rule::AndOverOvRight
            | Rule::OrOverOvLeft
            | Rule::OrOverOvRight
            | Rule::UntilLeftOverOv
            | Rule::UntilRightOverOv => &[TeamOv, TeamOv, TeamOv],
            Rule::NextOverOv | Rule::GloballyOverOv => &[TeamOv, TeamOv],
            Rule::NegLtl | Rule::NegExists => &[Ltl],
            Rule::NegOvOr | Rule::NextOverOvDc => &[LeftDc, LeftDc],
            Rule::NegConj | Rule::NextQf => &[Ltl, Ltl],
            Rule::ConjMerge | Rule::SplitOr | Rule::UntilQf2 => &[Ltl, Ltl, Ltl, Ltl],
            Rule::SplitOrFlat | Rule::UntilQf => &[Ltl, Ltl, Ltl],
            Rule::SplitOrOverOv | Rule::AndOverOvDc => &[LeftDc, LeftDc, LeftDc],
            // θ sits left of U, so it stays TeamOv
            Rule::UntilRightOverOvDc => &[TeamOv, LeftDc, LeftDc],
        }
    }

    /// Both sides of the rule for the given schema variables.
    pub fn instantiate(self, m: &[Formula]) -> Result<(Formula, Formula)> {
        assert_eq!(m.len(), self.metas().len(), "wrong number of schema variables");
        Ok(match self {
            Rule::AndOverOvLeft | Rule::AndOverOvDc => {
                let (f, g, t) = (&m[0], &m[1], &m[2]);
                (and(&ov(f.clone(), g.clone()), t), ov(and(f, t), and(g, t)))
            }
            Rule::AndOverOvRight => {
                let (f, g, t) = (&m[0], &m[1], &m[2]);
                (and(t, &ov(f.clone(), g.clone())), ov(and(t, f), and(t, g)))
            }
            Rule::OrOverOvLeft | Rule::SplitOrOverOv => {
                let (f, g, t) = (&m[0], &m[1], &m[2]);
                (or(&ov(f.clone(), g.clone()), t), ov(or(f, t), or(g, t)))
            }
            Rule::OrOverOvRight => {
                let (f, g, t) = (&m[0], &m[1], &m[2]);
                (or(t, &ov(f.clone(), g.clone())), ov(or(t, f), or(t, g)))
            }
            Rule::NextOverOv | Rule::NextOverOvDc => {
                let (f, g) = (&m[0], &m[1]);
                (
                    Formula::next(ov(f.clone(), g.clone())),
                    ov(Formula::next(f.clone()), Formula::next(g.clone())),
                )
            }
            Rule::GloballyOverOv => {
                let (f, g) = (&m[0], &m[1]);
                (
                    Formula::globally(ov(f.clone(), g.clone())),
                    ov(Formula::globally(f.clone()), Formula::globally(g.clone())),
                )
            }
            Rule::UntilLeftOverOv => {
                let (f, g, t) = (&m[0], &m[1], &m[2]);
                (until(&ov(f.clone(), g.clone()), t), ov(until(f, t), until(g, t)))
            }
            Rule::UntilRightOverOv | Rule::UntilRightOverOvDc => {
                let (t, f, g) = (&m[0], &m[1], &m[2]);
                (until(t, &ov(f.clone(), g.clone())), ov(until(t, f), until(t, g)))
            }
            Rule::NegLtl => (Formula::bool_neg(m[0].clone()), ex(&dual(&m[0])?)?),
            Rule::NegExists => (Formula::bool_neg(ex(&m[0])?), dual(&m[0])?),
            Rule::NegOvOr => {
                let (f, g) = (&m[0], &m[1]);
                (
                    Formula::bool_neg(ov(f.clone(), g.clone())),
                    and(&Formula::bool_neg(f.clone()), &Formula::bool_neg(g.clone())),
                )
            }
            Rule::NegConj => {
                let (a, b) = (&m[0], &m[1]);
                (
                    Formula::bool_neg(and(a, &ex(b)?)),
                    ov(ex(&dual(a)?)?, dual(b)?),
                )
            }
            Rule::ConjMerge => {
                let (a, b, c, d) = (&m[0], &m[1], &m[2], &m[3]);
                (
                    and(&and(a, &ex(b)?), &and(c, &ex(d)?)),
                    and(&and(&and(a, c), &ex(b)?), &ex(d)?),
                )
            }
            Rule::SplitOr => {
                let (a, b, c, d) = (&m[0], &m[1], &m[2], &m[3]);
                (
                    or(&and(a, &ex(b)?), &and(c, &ex(d)?)),
                    and(&and(&or(a, c), &ex(&and(a, b))?), &ex(&and(c, d))?),
                )
            }
            Rule::SplitOrFlat => {
                let (a, b, c) = (&m[0], &m[1], &m[2]);
                (or(&and(a, &ex(b)?), c), and(&or(a, c), &ex(&and(a, b))?))
            }
            Rule::NextQf => {
                let (a, b) = (&m[0], &m[1]);
                (
                    Formula::next(and(a, &ex(b)?)),
                    and(&Formula::next(a.clone()), &ex(&Formula::next(b.clone()))?),
                )
            }
            Rule::UntilQf => {
                let (a, c, d) = (&m[0], &m[1], &m[2]);
                (
                    until(a, &and(c, &ex(d)?)),
                    and(&until(a, c), &ex(&until(a, &and(c, d)))?),
                )
            }
            Rule::UntilQf2 => {
                let (a, c, d, e) = (&m[0], &m[1], &m[2], &m[3]);
                (
                    until(a, &and(&and(c, &ex(d)?), &ex(e)?)),
                    and(
                        &and(&until(a, c), &ex(&until(a, &and(c, d)))?),
                        &ex(&until(a, &and(c, e)))?,
                    ),
                )
            }
        })
    }
}

/// Formulas substituted for schema variables.
#[derive(Debug, Clone)]
pub struct RulePools {
    pub ltl: Vec<Formula>,
    /// Used when a rule has four LTL variables.
    pub ltl_small: Vec<Formula>,
    pub team_ov: Vec<Formula>,
    pub left_dc: Vec<Formula>,
}

fn parse_all(texts: &[&str]) -> Vec<Formula> {
    texts
        .iter()
        .map(|t| parse_team(t).expect("pool formulas parse"))
        .collect()
}

impl RulePools {
    pub fn standard() -> Self {
        RulePools {
            ltl: parse_all(&["p", "!q", "1", "0", "X p", "F q", "G !p", "p U q"]),
            ltl_small: parse_all(&["p", "!q", "X p", "F q"]),
            team_ov: parse_all(&["p", "!q", "0", "X q", "p OR q", "G (p OR !q)"]),
            left_dc: parse_all(&["p", "1", "~p", "~(X q)", "p OR ~q", "F q & ~(G p)"]),
        }
    }

    pub fn small() -> Self {
        RulePools {
            ltl: parse_all(&["p", "!q", "X p"]),
            ltl_small: parse_all(&["p", "F q"]),
            team_ov: parse_all(&["p", "!q", "p OR q"]),
            left_dc: parse_all(&["p", "~q", "p OR ~q"]),
        }
    }

    fn pool(&self, kind: MetaKind, arity: usize) -> &[Formula] {
        match kind {
            MetaKind::Ltl if arity >= 4 => &self.ltl_small,
            MetaKind::Ltl => &self.ltl,
            MetaKind::TeamOv => &self.team_ov,
            MetaKind::LeftDc => &self.left_dc,
        }
    }

    /// Every assignment of pool formulas to the rule's schema variables.
    pub fn instances(&self, rule: Rule) -> Vec<Vec<Formula>> {
        let metas = rule.metas();
        let mut out = vec![Vec::new()];
        for &kind in metas {
            let pool = self.pool(kind, metas.len());
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Formula>| {
                    pool.iter().map(move |f| {
                        let mut next = prefix.clone();
                        next.push(f.clone());
                        next
                    })
                })
                .collect();
        }
        out
    }
}

/// An instance of a rule whose sides disagree on a team.
#[derive(Debug, Clone)]
pub struct RuleViolation {
    pub rule: Rule,
    pub lhs: Formula,
    pub rhs: Formula,
    pub team: Team,
    pub lhs_value: bool,
}

/// Checks every pool instance of `rule` on every team with the oracle, whose
/// universe must contain the teams' traces.
pub fn check_rule(
    rule: Rule,
    pools: &RulePools,
    teams: &[Team],
    oracle: &mut Oracle,
) -> Result<Vec<RuleViolation>> {
    let mut violations = Vec::new();
    for meta in pools.instances(rule) {
        let (lhs, rhs) = rule.instantiate(&meta)?;
        let left = oracle.eval_many(teams, &lhs)?;
        let right = oracle.eval_many(teams, &rhs)?;
        if let Some(i) = (0..teams.len()).find(|&i| left[i] != right[i]) {
            violations.push(RuleViolation {
                rule,
                lhs,
                rhs,
                team: teams[i].clone(),
                lhs_value: left[i],
            });
        }
    }
    Ok(violations)
}
