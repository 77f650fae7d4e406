//! Ultimately periodic traces `u·v^ω` and finite teams of them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::formula::{Prop, Var};

/// The set of propositions true at one position.
pub type Letter = BTreeSet<Prop>;

pub fn letter<'a>(props: impl IntoIterator<Item = &'a str>) -> Letter {
    props.into_iter().map(Prop::new).collect()
}

/// A lasso `stem · cycle^ω` kept in canonical form: the cycle is primitive
/// and the last stem letter differs from the last cycle letter. Two
/// canonical lassos are equal iff they denote the same ω-word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LassoTrace {
    stem: Vec<Letter>,
    cycle: Vec<Letter>,
}

/// Builds the canonical lasso denoting `stem · cycle^ω`.
pub fn canonicalize(mut stem: Vec<Letter>, mut cycle: Vec<Letter>) -> Result<LassoTrace> {
    if cycle.is_empty() {
        return Err(Error::EmptyLoop);
    }
    let n = cycle.len();
    let root = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| (d..n).all(|i| cycle[i] == cycle[i - d]))
        .unwrap_or(n);
    cycle.truncate(root);
    while let Some(last) = stem.last() {
        if last != cycle.last().expect("cycle is nonempty") {
            break;
        }
        stem.pop();
        cycle.rotate_right(1);
    }
    Ok(LassoTrace { stem, cycle })
}

impl LassoTrace {
    pub fn new(stem: Vec<Letter>, cycle: Vec<Letter>) -> Result<Self> {
        canonicalize(stem, cycle)
    }

    /// Skips canonicalization; for checking that evaluation does not depend on it.
    #[cfg(test)]
    pub(crate) fn raw(stem: Vec<Letter>, cycle: Vec<Letter>) -> Self {
        assert!(!cycle.is_empty());
        LassoTrace { stem, cycle }
    }

    /// The constant trace `(letter)^ω`.
    pub fn constant(letter: Letter) -> Self {
        LassoTrace {
            stem: vec![],
            cycle: vec![letter],
        }
    }

    pub fn stem(&self) -> &[Letter] {
        &self.stem
    }

    pub fn cycle(&self) -> &[Letter] {
        &self.cycle
    }

    /// `|stem| + |cycle|`, the number of distinct positions.
    pub fn len(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest position whose suffix is not repeated by a smaller one.
    pub fn position_bound(&self) -> usize {
        self.len() - 1
    }

    /// Smallest position with the same suffix as `i`.
    pub fn canonical_position(&self, i: usize) -> usize {
        let s = self.stem.len();
        if i < s {
            i
        } else {
            s + (i - s) % self.cycle.len()
        }
    }

    /// Position following `i` in the folded position space `0..len()`.
    pub fn successor(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.stem.len()
        }
    }

    pub fn letter(&self, i: usize) -> &Letter {
        let i = self.canonical_position(i);
        if i < self.stem.len() {
            &self.stem[i]
        } else {
            &self.cycle[i - self.stem.len()]
        }
    }

    pub fn unroll(&self, n: usize) -> Vec<Letter> {
        (0..n).map(|i| self.letter(i).clone()).collect()
    }

    /// The canonical lasso for `t[i,∞]`.
    pub fn suffix(&self, i: usize) -> LassoTrace {
        let s = self.stem.len();
        if i < s {
            LassoTrace {
                stem: self.stem[i..].to_vec(),
                cycle: self.cycle.clone(),
            }
        } else {
            let mut cycle = self.cycle.clone();
            let k = (i - s) % cycle.len();
            cycle.rotate_left(k);
            LassoTrace { stem: vec![], cycle }
        }
    }

    pub fn props(&self) -> BTreeSet<Prop> {
        self.stem.iter().chain(&self.cycle).flatten().cloned().collect()
    }
}

fn write_letter(f: &mut fmt::Formatter<'_>, l: &Letter) -> fmt::Result {
    f.write_str("{")?;
    for (i, p) in l.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{p}")?;
    }
    f.write_str("}")
}

impl fmt::Display for LassoTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.stem {
            write_letter(f, l)?;
        }
        f.write_str("(")?;
        for l in &self.cycle {
            write_letter(f, l)?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for LassoTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite team. Set semantics: traces denoting the same ω-word collapse.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Team {
    traces: BTreeSet<LassoTrace>,
}

impl Team {
    pub fn new() -> Self {
        Team::default()
    }

    pub fn insert(&mut self, t: LassoTrace) -> bool {
        self.traces.insert(t)
    }

    pub fn contains(&self, t: &LassoTrace) -> bool {
        self.traces.contains(t)
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LassoTrace> {
        self.traces.iter()
    }

    /// All `2^|T|` subteams.
    pub fn subteams(&self) -> Vec<Team> {
        let traces: Vec<_> = self.traces.iter().collect();
        (0..1usize << traces.len())
            .map(|mask| {
                traces
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, t)| (*t).clone())
                    .collect()
            })
            .collect()
    }

    pub fn without(&self, t: &LassoTrace) -> Team {
        self.traces.iter().filter(|u| *u != t).cloned().collect()
    }
}

impl FromIterator<LassoTrace> for Team {
    fn from_iter<I: IntoIterator<Item = LassoTrace>>(iter: I) -> Self {
        Team {
            traces: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Team {
    type Item = &'a LassoTrace;
    type IntoIter = std::collections::btree_set::Iter<'a, LassoTrace>;

    fn into_iter(self) -> Self::IntoIter {
        self.traces.iter()
    }
}

impl fmt::Display for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.traces.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `T[f,∞]`: the set of chosen suffixes.
pub fn team_suffix_set(team: &Team, choice: &BTreeMap<LassoTrace, BTreeSet<usize>>) -> Result<Team> {
    let mut out = Team::new();
    for t in team {
        let positions = choice
            .get(t)
            .ok_or_else(|| Error::MissingTrace(t.to_string()))?;
        if positions.is_empty() {
            return Err(Error::EmptyPositions(t.to_string()));
        }
        for &i in positions {
            out.insert(t.suffix(i));
        }
    }
    Ok(out)
}

pub type TraceAssignment = BTreeMap<Var, LassoTrace>;

/// Name of the proposition `p` of variable `v` in a product trace.
pub fn product_prop(p: &Prop, v: &Var) -> Prop {
    Prop::from(format!("{p}@{v}"))
}

/// Zips the assigned traces into one lasso over atoms `p@π`. The stem is as
/// long as the longest stem and the cycle has the lcm of the cycle lengths;
/// the result is then canonicalized. An empty assignment gives `({})`.
pub fn product(assignment: &TraceAssignment) -> LassoTrace {
    if assignment.is_empty() {
        return LassoTrace::constant(Letter::new());
    }
    let stem_len = assignment.values().map(|t| t.stem.len()).max().unwrap_or(0);
    let cycle_len = assignment
        .values()
        .map(|t| t.cycle.len())
        .fold(1, |acc, n| acc.lcm(&n));
    let letter_at = |k: usize| -> Letter {
        assignment
            .iter()
            .flat_map(|(v, t)| t.letter(k).iter().map(move |p| product_prop(p, v)))
            .collect()
    };
    let stem = (0..stem_len).map(letter_at).collect();
    let cycle = (stem_len..stem_len + cycle_len).map(letter_at).collect();
    canonicalize(stem, cycle).expect("cycle length is at least one")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(props: &[&str]) -> Letter {
        letter(props.iter().copied())
    }

    fn lasso(stem: &[&[&str]], cycle: &[&[&str]]) -> LassoTrace {
        LassoTrace::new(
            stem.iter().map(|s| l(s)).collect(),
            cycle.iter().map(|s| l(s)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let t = lasso(&[], &[&["p"], &["p"]]);
        assert!(t.stem().is_empty());
        assert_eq!(t.cycle(), &[l(&["p"])]);

        let t = lasso(&[&["q"], &["p"]], &[&["q"], &["p"]]);
        assert!(t.stem().is_empty());
        assert_eq!(t.cycle(), &[l(&["q"]), l(&["p"])]);

        let t = lasso(&[&["p"]], &[&["q"]]);
        assert_eq!(t.stem(), &[l(&["p"])]);
        assert_eq!(t.cycle(), &[l(&["q"])]);

        assert!(matches!(LassoTrace::new(vec![], vec![]), Err(Error::EmptyLoop)));
    }

    #[test]
    fn canonicalize_preserves_denotation() {
        let stem = vec![l(&["q"]), l(&["p"])];
        let cycle = vec![l(&["q"]), l(&["p"])];
        let t = LassoTrace::new(stem.clone(), cycle.clone()).unwrap();
        // |stem| + 2·lcm(2, 2)
        let n = stem.len() + 2 * 2;
        let raw: Vec<Letter> = (0..n)
            .map(|i| {
                if i < stem.len() {
                    stem[i].clone()
                } else {
                    cycle[(i - stem.len()) % cycle.len()].clone()
                }
            })
            .collect();
        assert_eq!(t.unroll(n), raw);
    }

    #[test]
    fn suffix_examples() {
        let t = lasso(&[&["p"]], &[&["q"]]);
        assert_eq!(t.suffix(0), t);
        assert_eq!(t.suffix(1), lasso(&[], &[&["q"]]));

        let t = lasso(&[], &[&["p"], &["q"]]);
        let s = t.suffix(3);
        assert_eq!(s, lasso(&[], &[&["q"], &["p"]]));
        assert_eq!(s.unroll(10), t.unroll(13)[3..].to_vec());
    }

    #[test]
    fn product_examples() {
        let mut a = TraceAssignment::new();
        a.insert(Var::new("pi"), lasso(&[], &[&["p"]]));
        assert_eq!(product(&a), lasso(&[], &[&["p@pi"]]));

        let mut a = TraceAssignment::new();
        a.insert(Var::new("pi"), lasso(&[], &[&["p"], &[]]));
        a.insert(Var::new("tau"), lasso(&[], &[&["q"]]));
        assert_eq!(product(&a), lasso(&[], &[&["p@pi", "q@tau"], &["q@tau"]]));

        let mut a = TraceAssignment::new();
        a.insert(Var::new("pi"), lasso(&[&["a"]], &[&["b"]]));
        a.insert(Var::new("tau"), lasso(&[], &[&["c"]]));
        assert_eq!(product(&a), lasso(&[&["a@pi", "c@tau"]], &[&["b@pi", "c@tau"]]));
    }

    #[test]
    fn team_suffix_set_examples() {
        let c = lasso(&[], &[&["p"]]);
        let team: Team = [c.clone()].into_iter().collect();
        let mut choice = BTreeMap::new();
        choice.insert(c.clone(), BTreeSet::from([0, 5]));
        assert_eq!(team_suffix_set(&team, &choice).unwrap(), team);

        let t = lasso(&[&["p"]], &[&["q"]]);
        let team: Team = [t.clone()].into_iter().collect();
        let mut choice = BTreeMap::new();
        choice.insert(t.clone(), BTreeSet::from([0, 1]));
        let expected: Team = [t.clone(), lasso(&[], &[&["q"]])].into_iter().collect();
        assert_eq!(team_suffix_set(&team, &choice).unwrap(), expected);

        assert!(team_suffix_set(&Team::new(), &BTreeMap::new()).unwrap().is_empty());
        assert!(matches!(
            team_suffix_set(&team, &BTreeMap::new()),
            Err(Error::MissingTrace(_))
        ));
    }

    #[test]
    fn duplicate_words_collapse_in_teams() {
        let a = lasso(&[], &[&["p"]]);
        let b = lasso(&[], &[&["p"], &["p"]]);
        let team: Team = [a, b].into_iter().collect();
        assert_eq!(team.len(), 1);
    }
}
