//! Team semantics: an exhaustive evaluator of the lax semantics and the
//! normal-form route.
//!
//! The [`Oracle`] reads every clause of the lax semantics literally. Suffix
//! choices range over nonempty finite position sets. For `G` only the chosen
//! suffixes matter, so positions up to `|stem| + |cycle| - 1` suffice. For
//! `U` the least and greatest positions matter as well: they decide whether a
//! trace enters `T′` and which `f′` are below `f`. Every (suffix set, min,
//! max) class is realized below `|stem| + 3|cycle| - 1`, and of the choices
//! with equal suffix sets only those with Pareto-minimal (min, max) are kept,
//! since growing either bound only adds obligations. Teams are bitmasks over a
//! suffix-closed universe of lassos, and results are memoized per
//! (subformula, team), so one oracle amortizes work across many teams.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::eval_classic::eval_ltl;
use crate::formula::Formula;
use crate::traces::{LassoTrace, Team};
use crate::transform::{to_ov_dnf, to_quasi_flat, OvDnf, QuasiFlat, TransformConfig};

/// Bounds enforced by [`oracle_eval`]; its cost is multiply exponential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_team: usize,
    /// Bound on `|stem| + |cycle|` of each trace.
    pub max_lasso_len: usize,
    pub max_depth: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_team: 3,
            max_lasso_len: 4,
            max_depth: 4,
        }
    }
}

impl OracleLimits {
    pub fn check(&self, team: &Team, phi: &Formula) -> Result<()> {
        if team.len() > self.max_team {
            return Err(Error::Limits(format!(
                "team has {} traces, limit is {}",
                team.len(),
                self.max_team
            )));
        }
        if let Some(t) = team.iter().find(|t| t.len() > self.max_lasso_len) {
            return Err(Error::Limits(format!(
                "trace {t} has length {}, limit is {}",
                t.len(),
                self.max_lasso_len
            )));
        }
        if phi.depth() > self.max_depth {
            return Err(Error::Limits(format!(
                "formula depth {} exceeds limit {}",
                phi.depth(),
                self.max_depth
            )));
        }
        Ok(())
    }
}

/// Evaluates `phi` on `team` with the exhaustive oracle under default limits.
pub fn oracle_eval(team: &Team, phi: &Formula) -> Result<bool> {
    oracle_eval_with(team, phi, &OracleLimits::default())
}

pub fn oracle_eval_with(team: &Team, phi: &Formula, limits: &OracleLimits) -> Result<bool> {
    limits.check(team, phi)?;
    Oracle::new(team.iter().cloned())?.eval(team, phi)
}

const MASK_WORDS: usize = 4;

/// Largest number of lassos an oracle universe may hold.
pub const MAX_UNIVERSE: usize = 64 * MASK_WORDS;

/// A set of universe indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
struct Mask([u64; MASK_WORDS]);

impl Mask {
    fn single(i: usize) -> Self {
        let mut m = Mask::default();
        m.0[i / 64] |= 1 << (i % 64);
        m
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn union(self, other: Mask) -> Mask {
        let mut m = self;
        for (a, b) in m.0.iter_mut().zip(other.0) {
            *a |= b;
        }
        m
    }

    fn minus(self, other: Mask) -> Mask {
        let mut m = self;
        for (a, b) in m.0.iter_mut().zip(other.0) {
            *a &= !b;
        }
        m
    }

    fn is_subset(&self, other: &Mask) -> bool {
        self.minus(*other).is_empty()
    }

    fn indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.0.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                out.push(w * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }
}

/// All sub-masks of the set `items`, indexed by the bit pattern over `items`.
fn submasks(items: &[usize]) -> Vec<Mask> {
    let mut out = vec![Mask::default(); 1 << items.len()];
    for (k, &i) in items.iter().enumerate() {
        let bit = 1 << k;
        for s in bit..(bit << 1) {
            out[s] = out[s - bit].union(Mask::single(i));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    /// Literal, given by the set of universe traces satisfying it.
    Lit(Mask),
    And(usize, usize),
    Or(usize, usize),
    OvOr(usize, usize),
    Neg(usize),
    Next(usize),
    Globally(usize),
    Until(usize, usize),
}

/// One suffix choice for one trace: chosen suffixes and the least and
/// greatest chosen positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Choice {
    mask: Mask,
    min: usize,
    max: usize,
}

/// (trace, min, max) of an until choice that moved the trace.
type ChoiceKey = (usize, usize, usize);

/// Exhaustive evaluator over a fixed universe of lassos.
#[derive(Debug)]
pub struct Oracle {
    universe: Vec<LassoTrace>,
    index: HashMap<LassoTrace, usize>,
    /// `suffixes[i][s]` is the index of the suffix at position `s`, for
    /// positions up to the until bound.
    suffixes: Vec<Vec<usize>>,
    /// Number of positions `G` choices range over, per trace.
    globally_positions: Vec<usize>,
    /// `next[i]` is the index of the suffix at position 1.
    next: Vec<usize>,
    slack: usize,
    nodes: Vec<Node>,
    interned: HashMap<Node, usize>,
    memo: Vec<HashMap<Mask, bool>>,
    /// Per trace, the distinct suffix sets of nonempty position sets.
    globally_choices: Vec<Option<Vec<Mask>>>,
    until_choices: Vec<Option<Vec<Choice>>>,
    /// Per (trace, min, max): suffix sets of the admissible smaller choices.
    smaller: HashMap<(usize, usize, usize), Vec<Mask>>,
    obligations: HashMap<(usize, Vec<ChoiceKey>), bool>,
}

impl Oracle {
    /// An oracle whose universe is the suffix closure of `traces`.
    pub fn new(traces: impl IntoIterator<Item = LassoTrace>) -> Result<Self> {
        let mut universe = Vec::new();
        let mut index = HashMap::new();
        let mut queue: Vec<LassoTrace> = traces.into_iter().collect();
        while let Some(t) = queue.pop() {
            if index.contains_key(&t) {
                continue;
            }
            if universe.len() == MAX_UNIVERSE {
                return Err(Error::Limits(format!(
                    "oracle universe exceeds {MAX_UNIVERSE} lassos"
                )));
            }
            index.insert(t.clone(), universe.len());
            for s in 1..t.len() {
                queue.push(t.suffix(s));
            }
            universe.push(t);
        }
        let mut oracle = Oracle {
            universe,
            index,
            suffixes: Vec::new(),
            globally_positions: Vec::new(),
            next: Vec::new(),
            slack: 0,
            nodes: Vec::new(),
            interned: HashMap::new(),
            memo: Vec::new(),
            globally_choices: Vec::new(),
            until_choices: Vec::new(),
            smaller: HashMap::new(),
            obligations: HashMap::new(),
        };
        oracle.reset_positions();
        Ok(oracle)
    }

    /// Lets suffix choices range `slack` positions beyond the usual bound.
    /// Only used to test that the bound loses nothing.
    pub fn with_slack(mut self, slack: usize) -> Self {
        self.slack = slack;
        self.reset_positions();
        self
    }

    pub fn universe(&self) -> &[LassoTrace] {
        &self.universe
    }

    fn reset_positions(&mut self) {
        self.suffixes = self
            .universe
            .iter()
            .map(|t| {
                let bound = t.stem().len() + 3 * t.cycle().len() - 2 + self.slack;
                (0..=bound).map(|s| self.index[&t.suffix(s)]).collect()
            })
            .collect();
        self.globally_positions = self
            .universe
            .iter()
            .map(|t| t.position_bound() + self.slack + 1)
            .collect();
        self.next = self.universe.iter().map(|t| self.index[&t.suffix(1)]).collect();
        let n = self.universe.len();
        self.globally_choices = vec![None; n];
        self.until_choices = vec![None; n];
        self.smaller.clear();
        self.obligations.clear();
        for m in &mut self.memo {
            m.clear();
        }
    }

    fn team_mask(&self, team: &Team) -> Result<Mask> {
        let mut m = Mask::default();
        for t in team {
            let i = self
                .index
                .get(t)
                .ok_or_else(|| Error::MissingTrace(format!("{t} is not in the oracle universe")))?;
            m = m.union(Mask::single(*i));
        }
        Ok(m)
    }

    pub fn eval(&mut self, team: &Team, phi: &Formula) -> Result<bool> {
        let mask = self.team_mask(team)?;
        let node = self.intern(phi)?;
        Ok(self.eval_node(node, mask))
    }

    /// Evaluates `phi` on each team. Results for `phi` itself are not
    /// memoized, which keeps memory flat when sweeping many formulas.
    pub fn eval_many(&mut self, teams: &[Team], phi: &Formula) -> Result<Vec<bool>> {
        let masks = teams.iter().map(|t| self.team_mask(t)).collect::<Result<Vec<_>>>()?;
        let node = self.intern(phi)?;
        Ok(masks
            .into_iter()
            .map(|m| match self.memo[node].get(&m) {
                Some(&v) => v,
                None => self.compute(node, m),
            })
            .collect())
    }

    fn add(&mut self, node: Node) -> usize {
        if let Some(&i) = self.interned.get(&node) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(node.clone());
        self.memo.push(HashMap::new());
        self.interned.insert(node, i);
        i
    }

    fn literal(&self, p: &crate::formula::Prop, positive: bool) -> Mask {
        let mut m = Mask::default();
        for (i, t) in self.universe.iter().enumerate() {
            if t.letter(0).contains(p) == positive {
                m = m.union(Mask::single(i));
            }
        }
        m
    }

    fn intern(&mut self, f: &Formula) -> Result<usize> {
        let node = match f {
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Atom(p) => Node::Lit(self.literal(p, true)),
            Formula::NegAtom(p) => Node::Lit(self.literal(p, false)),
            Formula::And(a, b) => Node::And(self.intern(a)?, self.intern(b)?),
            Formula::Or(a, b) => Node::Or(self.intern(a)?, self.intern(b)?),
            Formula::OvOr(a, b) => Node::OvOr(self.intern(a)?, self.intern(b)?),
            Formula::BoolNeg(a) => Node::Neg(self.intern(a)?),
            Formula::Next(a) => Node::Next(self.intern(a)?),
            Formula::Globally(a) => Node::Globally(self.intern(a)?),
            Formula::Until(a, b) => Node::Until(self.intern(a)?, self.intern(b)?),
            Formula::Release(a, b) => {
                if !a.is_ltl() || !b.is_ltl() {
                    return Err(Error::fragment("release needs LTL operands"));
                }
                // a R b is G b ∨ b U (a ∧ b); both sides are flat
                let desugared = Formula::or(
                    Formula::globally((**b).clone()),
                    Formula::until((**b).clone(), Formula::and((**a).clone(), (**b).clone())),
                );
                return self.intern(&desugared);
            }
        };
        Ok(self.add(node))
    }

    fn eval_node(&mut self, node: usize, team: Mask) -> bool {
        if let Some(&v) = self.memo[node].get(&team) {
            return v;
        }
        let v = self.compute(node, team);
        self.memo[node].insert(team, v);
        v
    }

    fn compute(&mut self, node: usize, team: Mask) -> bool {
        match self.nodes[node].clone() {
            Node::True => true,
            Node::False => team.is_empty(),
            Node::Lit(sat) => team.is_subset(&sat),
            Node::And(a, b) => self.eval_node(a, team) && self.eval_node(b, team),
            Node::OvOr(a, b) => self.eval_node(a, team) || self.eval_node(b, team),
            Node::Neg(a) => !self.eval_node(a, team),
            Node::Or(a, b) => self.eval_split(a, b, team),
            Node::Next(a) => {
                let next = team
                    .indices()
                    .into_iter()
                    .fold(Mask::default(), |m, i| m.union(Mask::single(self.next[i])));
                self.eval_node(a, next)
            }
            Node::Globally(a) => self.eval_globally(a, team),
            Node::Until(a, b) => self.eval_until(a, b, team),
        }
    }

    /// Some `T₁ ∪ T₂ = team` with `T₁ ⊨ a` and `T₂ ⊨ b`; the parts may overlap.
    fn eval_split(&mut self, a: usize, b: usize, team: Mask) -> bool {
        let items = team.indices();
        let subs = submasks(&items);
        for (bits, &left) in subs.iter().enumerate() {
            if !self.eval_node(a, left) {
                continue;
            }
            let rest = team.minus(left);
            // T₂ is the rest plus any part of T₁
            let mut s = bits;
            loop {
                if self.eval_node(b, rest.union(subs[s])) {
                    return true;
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & bits;
            }
        }
        false
    }

    /// Suffix sets `⋃_{s ∈ S} t[s,∞]` for the nonempty position sets `S`.
    fn position_sets(&self, trace: usize, positions: &[usize]) -> Vec<(Mask, usize, usize)> {
        let mut out = Vec::new();
        for bits in 1u32..(1 << positions.len()) {
            let mut mask = Mask::default();
            let (mut min, mut max) = (usize::MAX, 0);
            for (k, &s) in positions.iter().enumerate() {
                if bits & (1 << k) != 0 {
                    mask = mask.union(Mask::single(self.suffixes[trace][s]));
                    min = min.min(s);
                    max = max.max(s);
                }
            }
            out.push((mask, min, max));
        }
        out
    }


    fn globally_choices(&mut self, trace: usize) -> Vec<Mask> {
        if let Some(c) = &self.globally_choices[trace] {
            return c.clone();
        }
        let mut seen = HashSet::new();
        let choices: Vec<Mask> = self
            .position_sets(trace, &(0..self.globally_positions[trace]).collect::<Vec<_>>())
            .into_iter()
            .map(|(m, _, _)| m)
            .filter(|m| seen.insert(*m))
            .collect();
        self.globally_choices[trace] = Some(choices.clone());
        choices
    }

    fn until_choices(&mut self, trace: usize) -> Vec<Choice> {
        if let Some(c) = &self.until_choices[trace] {
            return c.clone();
        }
        let all: Vec<usize> = (0..self.suffixes[trace].len()).collect();
        let mut by_mask: HashMap<Mask, Vec<(usize, usize)>> = HashMap::new();
        for (mask, min, max) in self.position_sets(trace, &all) {
            by_mask.entry(mask).or_default().push((min, max));
        }
        let mut choices = Vec::new();
        for (mask, mut bounds) in by_mask {
            bounds.sort_unstable();
            bounds.dedup();
            // max = 0 keeps the trace out of T′ and is not comparable to the rest
            let dominated = |&(m, x): &(usize, usize)| {
                x != 0
                    && bounds
                        .iter()
                        .any(|&(m2, x2)| x2 != 0 && (m2, x2) != (m, x) && m2 <= m && x2 <= x)
            };
            choices.extend(
                bounds
                    .iter()
                    .filter(|b| !dominated(b))
                    .map(|&(min, max)| Choice { mask, min, max }),
            );
        }
        choices.sort_unstable_by_key(|c| (c.max, c.min, c.mask.0));
        self.until_choices[trace] = Some(choices.clone());
        choices
    }

    /// Suffix sets of the `f′(t)` with `min f′(t) ≤ min` and `max f′(t) < max`.
    fn smaller_choices(&mut self, trace: usize, min: usize, max: usize) -> Vec<Mask> {
        if let Some(c) = self.smaller.get(&(trace, min, max)) {
            return c.clone();
        }
        let positions: Vec<usize> = (0..max).collect();
        let mut seen = HashSet::new();
        let choices: Vec<Mask> = self
            .position_sets(trace, &positions)
            .into_iter()
            .filter(|&(_, lo, _)| lo <= min)
            .map(|(m, _, _)| m)
            .filter(|m| seen.insert(*m))
            .collect();
        self.smaller.insert((trace, min, max), choices.clone());
        choices
    }

    /// Unions of one entry per list.
    fn unions(lists: &[Vec<Mask>]) -> HashSet<Mask> {
        let mut acc = HashSet::from([Mask::default()]);
        for list in lists {
            let mut next = HashSet::with_capacity(acc.len() * list.len());
            for a in &acc {
                for m in list {
                    next.insert(a.union(*m));
                }
            }
            acc = next;
        }
        acc
    }

    /// For all choices `f`, `team[f,∞] ⊨ a`.
    fn eval_globally(&mut self, a: usize, team: Mask) -> bool {
        let lists: Vec<Vec<Mask>> = team
            .indices()
            .into_iter()
            .map(|t| self.globally_choices(t))
            .collect();
        Self::unions(&lists).into_iter().all(|m| self.eval_node(a, m))
    }

    /// Some choice `f` with `team[f,∞] ⊨ b` such that every `f′ < f` on
    /// `T′ = {t : max f(t) ≠ 0}` gives `T′[f′,∞] ⊨ a` (or `T′` is empty).
    fn eval_until(&mut self, a: usize, b: usize, team: Mask) -> bool {
        let traces = team.indices();
        let lists: Vec<Vec<Choice>> = traces.iter().map(|&t| self.until_choices(t)).collect();
        let mut key = Vec::new();
        self.until_search(a, b, &traces, &lists, 0, Mask::default(), &mut key)
    }

    #[allow(clippy::too_many_arguments)]
    fn until_search(
        &mut self,
        a: usize,
        b: usize,
        traces: &[usize],
        lists: &[Vec<Choice>],
        k: usize,
        acc: Mask,
        key: &mut Vec<(usize, usize, usize)>,
    ) -> bool {
        if k == traces.len() {
            return self.eval_node(b, acc) && self.obligation(a, key);
        }
        for c in &lists[k] {
            let pushed = c.max != 0;
            if pushed {
                key.push((traces[k], c.min, c.max));
            }
            let found = self.until_search(a, b, traces, lists, k + 1, acc.union(c.mask), key);
            if pushed {
                key.pop();
            }
            if found {
                return true;
            }
        }
        false
    }

    fn obligation(&mut self, a: usize, key: &[(usize, usize, usize)]) -> bool {
        if key.is_empty() {
            return true;
        }
        let cache_key = (a, key.to_vec());
        if let Some(&v) = self.obligations.get(&cache_key) {
            return v;
        }
        let lists: Vec<Vec<Mask>> = key
            .iter()
            .map(|&(t, min, max)| self.smaller_choices(t, min, max))
            .collect();
        let v = Self::unions(&lists).into_iter().all(|m| self.eval_node(a, m));
        self.obligations.insert(cache_key, v);
        v
    }
}

/// `⩔ᵢ αᵢ` holds iff some `αᵢ` holds on every trace.
pub fn eval_ov_dnf(team: &Team, dnf: &OvDnf) -> bool {
    dnf.disjuncts()
        .iter()
        .any(|a| team.iter().all(|t| eval_ltl(t, a).expect("normal forms are LTL")))
}

/// `⩔ᵢ (αᵢ ∧ ⋀ⱼ ∃βᵢⱼ)` holds iff for some `i` every trace satisfies `αᵢ` and
/// each `βᵢⱼ` is satisfied by some trace.
pub fn eval_quasi_flat(team: &Team, qf: &QuasiFlat) -> bool {
    let holds = |t: &LassoTrace, a: &Formula| eval_ltl(t, a).expect("normal forms are LTL");
    qf.conjuncts().iter().any(|c| {
        team.iter().all(|t| holds(t, &c.alpha))
            && c.betas.iter().all(|b| team.iter().any(|t| holds(t, b)))
    })
}

/// Evaluates a TeamLTL(⩔) or left-dc TeamLTL(~) formula through its normal form.
pub fn eval_team_nf(team: &Team, phi: &Formula) -> Result<bool> {
    eval_team_nf_with(team, phi, &TransformConfig::default())
}

pub fn eval_team_nf_with(team: &Team, phi: &Formula, cfg: &TransformConfig) -> Result<bool> {
    if phi.is_team_ov() {
        Ok(eval_ov_dnf(team, &to_ov_dnf(phi, cfg)?))
    } else if phi.is_left_dc() {
        Ok(eval_quasi_flat(team, &to_quasi_flat(phi, cfg)?))
    } else {
        Err(Error::fragment(
            "normal-form evaluation needs a TeamLTL(OR) or left-dc TeamLTL(~) formula",
        ))
    }
}
