//! Exhaustive enumeration of small lassos, teams and formulas.

use std::collections::BTreeSet;

use crate::formula::{Formula, Prop};
use crate::traces::{LassoTrace, Letter, Team};

pub fn all_letters(ap: &[Prop]) -> Vec<Letter> {
    (0u32..1 << ap.len())
        .map(|bits| {
            ap.iter()
                .enumerate()
                .filter(|(i, _)| bits & (1 << i) != 0)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect()
}

fn words(letters: &[Letter], len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |l| {
                    let mut w = w.clone();
                    w.push(l.clone());
                    w
                })
            })
            .collect();
    }
    out
}

/// Distinct canonical lassos over `ap` with `|stem| ≤ max_stem` and
/// `|cycle| ≤ max_period`, in sorted order.
pub fn all_lassos(ap: &[Prop], max_stem: usize, max_period: usize) -> Vec<LassoTrace> {
    lassos_where(ap, max_stem, max_period, |_, _| true)
}

/// Distinct canonical lassos over `ap` with `|stem| + |cycle| ≤ max_len`.
pub fn all_lassos_of_len(ap: &[Prop], max_len: usize) -> Vec<LassoTrace> {
    lassos_where(ap, max_len.saturating_sub(1), max_len, |s, c| s + c <= max_len)
}

fn lassos_where(
    ap: &[Prop],
    max_stem: usize,
    max_period: usize,
    keep: impl Fn(usize, usize) -> bool,
) -> Vec<LassoTrace> {
    let letters = all_letters(ap);
    let mut out = BTreeSet::new();
    for s in 0..=max_stem {
        for c in 1..=max_period {
            if !keep(s, c) {
                continue;
            }
            for stem in words(&letters, s) {
                for cycle in words(&letters, c) {
                    out.insert(LassoTrace::new(stem.clone(), cycle).expect("cycle is nonempty"));
                }
            }
        }
    }
    out.into_iter().collect()
}

/// All teams of at most `max_size` of the given traces, the empty team first.
pub fn all_teams(traces: &[LassoTrace], max_size: usize) -> Vec<Team> {
    fn go(traces: &[LassoTrace], from: usize, left: usize, cur: &mut Vec<LassoTrace>, out: &mut Vec<Team>) {
        out.push(cur.iter().cloned().collect());
        if left == 0 {
            return;
        }
        for i in from..traces.len() {
            cur.push(traces[i].clone());
            go(traces, i + 1, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(traces, 0, max_size, &mut Vec::new(), &mut out);
    out
}

/// Connectives used by [`all_formulas`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulaGrammar {
    pub next: bool,
    pub globally: bool,
    pub finally: bool,
    pub bool_neg: bool,
    pub and: bool,
    pub or: bool,
    pub ov_or: bool,
    pub until: bool,
}

impl FormulaGrammar {
    pub const TEAM_SIM_OV: FormulaGrammar = FormulaGrammar {
        next: true,
        globally: true,
        finally: true,
        bool_neg: true,
        and: true,
        or: true,
        ov_or: true,
        until: true,
    };
}

/// Formulas of depth at most `max_depth` built from `leaves`. Operands of
/// `&`, `|` and `OR` are taken in one order only.
pub fn all_formulas(leaves: &[Formula], grammar: FormulaGrammar, max_depth: usize) -> Vec<Formula> {
    if max_depth == 0 {
        return Vec::new();
    }
    // by_depth[d] holds the formulas of depth exactly d + 1
    let mut by_depth: Vec<Vec<Formula>> = vec![leaves.to_vec()];
    for d in 1..max_depth {
        let top = &by_depth[d - 1];
        let below: Vec<&Formula> = by_depth.iter().flatten().collect();
        let lower = below.len() - top.len();
        let mut next = Vec::new();
        for a in top {
            if grammar.next {
                next.push(Formula::next(a.clone()));
            }
            if grammar.globally {
                next.push(Formula::globally(a.clone()));
            }
            if grammar.finally {
                next.push(Formula::finally(a.clone()));
            }
            if grammar.bool_neg {
                next.push(Formula::bool_neg(a.clone()));
            }
        }
        // pairs with at least one operand from the top layer
        for (i, a) in below.iter().enumerate() {
            for (j, b) in below.iter().enumerate() {
                if i < lower && j < lower {
                    continue;
                }
                let (a, b) = ((*a).clone(), (*b).clone());
                if i <= j {
                    if grammar.and {
                        next.push(Formula::and(a.clone(), b.clone()));
                    }
                    if grammar.or {
                        next.push(Formula::or(a.clone(), b.clone()));
                    }
                    if grammar.ov_or {
                        next.push(Formula::ov_or(a.clone(), b.clone()));
                    }
                }
                if grammar.until {
                    next.push(Formula::until(a, b));
                }
            }
        }
        by_depth.push(next);
    }
    by_depth.into_iter().flatten().collect()
}

/// `f` with the propositions `a` and `b` exchanged.
pub fn swap_props(f: &Formula, a: &Prop, b: &Prop) -> Formula {
    let swap = |p: &Prop| {
        if p == a {
            b.clone()
        } else if p == b {
            a.clone()
        } else {
            p.clone()
        }
    };
    let go = |x: &Formula| swap_props(x, a, b);
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom(p) => Formula::Atom(swap(p)),
        Formula::NegAtom(p) => Formula::NegAtom(swap(p)),
        Formula::And(x, y) => Formula::and(go(x), go(y)),
        Formula::Or(x, y) => Formula::or(go(x), go(y)),
        Formula::OvOr(x, y) => Formula::ov_or(go(x), go(y)),
        Formula::Until(x, y) => Formula::until(go(x), go(y)),
        Formula::Release(x, y) => Formula::Release(Box::new(go(x)), Box::new(go(y))),
        Formula::BoolNeg(x) => Formula::bool_neg(go(x)),
        Formula::Next(x) => Formula::next(go(x)),
        Formula::Globally(x) => Formula::globally(go(x)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ap() -> Vec<Prop> {
        vec![Prop::new("p"), Prop::new("q")]
    }

    #[test]
    fn lasso_counts() {
        assert_eq!(all_lassos(&ap(), 0, 1).len(), 4);
        assert_eq!(all_lassos(&ap(), 0, 2).len(), 16);
        assert_eq!(all_lassos(&ap(), 1, 2).len(), 64);
        let traces = all_lassos(&ap(), 1, 2);
        assert_eq!(all_teams(&traces, 2).len(), 1 + 64 + 64 * 63 / 2);
    }

    #[test]
    fn formula_layers() {
        let leaves = [Formula::atom("p"), Formula::atom("q")];
        let g = FormulaGrammar::TEAM_SIM_OV;
        let two = all_formulas(&leaves, g, 2);
        // 2 leaves, 4 unary × 2, 3 symmetric × 3 pairs, 4 ordered pairs
        assert_eq!(two.len(), 2 + 8 + 9 + 4);
        assert!(all_formulas(&leaves, g, 3).iter().all(|f| f.depth() <= 3));
        let distinct: BTreeSet<String> = two.iter().map(|f| f.to_string()).collect();
        assert_eq!(distinct.len(), two.len());
    }
}
