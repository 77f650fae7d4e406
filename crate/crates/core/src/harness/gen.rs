//! Random formulas, lassos and teams for the differential suites.
//!
//! All generators draw from a [`ChaCha8Rng`]: a portable, documented stream
//! cipher, so a seed reproduces the same cases on every platform. Case `i` of
//! a run uses stream `i` of the run seed, which keeps parallel runs
//! deterministic.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Formula, Hyper, Matrix, Prop, Quantifier, Var};
use crate::traces::{LassoTrace, Letter, Team};

/// Relative weights of the connectives. A zero weight disables a connective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weights {
    pub atom: u32,
    pub neg_atom: u32,
    pub constant: u32,
    pub and: u32,
    pub or: u32,
    pub ov_or: u32,
    pub bool_neg: u32,
    pub next: u32,
    pub globally: u32,
    pub finally: u32,
    pub until: u32,
    pub release: u32,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            atom: 4,
            neg_atom: 2,
            constant: 1,
            and: 3,
            or: 3,
            ov_or: 3,
            bool_neg: 2,
            next: 2,
            globally: 2,
            finally: 2,
            until: 3,
            release: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub max_team: usize,
    pub max_stem: usize,
    pub max_period: usize,
    pub max_depth: usize,
    pub ap_size: usize,
    pub weights: Weights,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_team: 3,
            max_stem: 2,
            max_period: 2,
            max_depth: 4,
            ap_size: 2,
            weights: Weights::default(),
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let bounds = [
            ("max team size", self.max_team),
            ("max stem", self.max_stem),
            ("max period", self.max_period),
            ("max depth", self.max_depth),
            ("AP size", self.ap_size),
        ];
        for (name, value) in bounds {
            if value == 0 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }

    /// The propositions `p, q, r, s, p4, p5, ...`.
    pub fn ap(&self) -> Vec<Prop> {
        (0..self.ap_size)
            .map(|i| match i {
                0 => Prop::new("p"),
                1 => Prop::new("q"),
                2 => Prop::new("r"),
                3 => Prop::new("s"),
                _ => Prop::from(format!("p{i}")),
            })
            .collect()
    }
}

/// The random generator of case `index` in a run seeded with `seed`.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    Atom,
    NegAtom,
    Constant,
    And,
    Or,
    OvOr,
    BoolNeg,
    Next,
    Globally,
    Finally,
    Until,
    Release,
}

impl Connective {
    pub const ALL: [Connective; 12] = [
        Connective::Atom,
        Connective::NegAtom,
        Connective::Constant,
        Connective::And,
        Connective::Or,
        Connective::OvOr,
        Connective::BoolNeg,
        Connective::Next,
        Connective::Globally,
        Connective::Finally,
        Connective::Until,
        Connective::Release,
    ];

    pub fn is_leaf(self) -> bool {
        matches!(self, Connective::Atom | Connective::NegAtom | Connective::Constant)
    }

    /// The connective at the root of `f`.
    pub fn of(f: &Formula) -> Connective {
        match f {
            Formula::True | Formula::False => Connective::Constant,
            Formula::Atom(_) => Connective::Atom,
            Formula::NegAtom(_) => Connective::NegAtom,
            Formula::And(..) => Connective::And,
            Formula::Or(..) => Connective::Or,
            Formula::OvOr(..) => Connective::OvOr,
            Formula::BoolNeg(_) => Connective::BoolNeg,
            Formula::Next(_) => Connective::Next,
            Formula::Globally(_) => Connective::Globally,
            Formula::Until(l, _) if **l == Formula::True => Connective::Finally,
            Formula::Until(..) => Connective::Until,
            Formula::Release(..) => Connective::Release,
        }
    }

    pub fn weight(self, w: &Weights) -> u32 {
        match self {
            Connective::Atom => w.atom,
            Connective::NegAtom => w.neg_atom,
            Connective::Constant => w.constant,
            Connective::And => w.and,
            Connective::Or => w.or,
            Connective::OvOr => w.ov_or,
            Connective::BoolNeg => w.bool_neg,
            Connective::Next => w.next,
            Connective::Globally => w.globally,
            Connective::Finally => w.finally,
            Connective::Until => w.until,
            Connective::Release => w.release,
        }
    }
}

/// Target fragment of a team-formula generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TeamKind {
    Ltl,
    TeamOv,
    LeftDc,
    TeamSim,
}

impl TeamKind {
    pub fn allows(self, c: Connective) -> bool {
        match c {
            Connective::OvOr => self != TeamKind::Ltl,
            Connective::BoolNeg => matches!(self, TeamKind::LeftDc | TeamKind::TeamSim),
            _ => true,
        }
    }
}

/// Connectives available at a node with `depth` levels left, with weights.
pub fn root_distribution(kind: TeamKind, depth: usize, w: &Weights) -> Vec<(Connective, u32)> {
    Connective::ALL
        .iter()
        .copied()
        .filter(|&c| kind.allows(c) && (depth > 1 || c.is_leaf()))
        .map(|c| (c, c.weight(w)))
        .filter(|&(_, w)| w > 0)
        .collect()
}

fn pick<T: Copy, R: Rng + ?Sized>(rng: &mut R, items: &[(T, u32)]) -> T {
    let total: u32 = items.iter().map(|&(_, w)| w).sum();
    let mut roll = rng.gen_range(0..total);
    for &(item, w) in items {
        if roll < w {
            return item;
        }
        roll -= w;
    }
    unreachable!("roll is below the total weight")
}

fn pick_prop<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Prop {
    let ap = cfg.ap();
    ap[rng.gen_range(0..ap.len())].clone()
}

/// A formula of depth at most `depth` in the fragment `kind`.
pub fn gen_team_formula<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, kind: TeamKind, depth: usize) -> Formula {
    let depth = depth.max(1);
    let choices = root_distribution(kind, depth, &cfg.weights);
    if choices.is_empty() {
        return Formula::atom(pick_prop(rng, cfg));
    }
    let d = depth - 1;
    // under G and on the left of U the left-dc fragment only admits TeamOv
    let guarded = if kind == TeamKind::LeftDc { TeamKind::TeamOv } else { kind };
    let sub = |rng: &mut R, k: TeamKind| gen_team_formula(rng, cfg, k, d);
    match pick(rng, &choices) {
        Connective::Atom => Formula::atom(pick_prop(rng, cfg)),
        Connective::NegAtom => Formula::neg_atom(pick_prop(rng, cfg)),
        Connective::Constant => {
            if rng.gen_bool(0.5) {
                Formula::True
            } else {
                Formula::False
            }
        }
        Connective::And => Formula::and(sub(rng, kind), sub(rng, kind)),
        Connective::Or => Formula::or(sub(rng, kind), sub(rng, kind)),
        Connective::OvOr => Formula::ov_or(sub(rng, kind), sub(rng, kind)),
        Connective::BoolNeg => Formula::bool_neg(sub(rng, kind)),
        Connective::Next => Formula::next(sub(rng, kind)),
        Connective::Globally => Formula::globally(sub(rng, guarded)),
        Connective::Finally => Formula::finally(sub(rng, kind)),
        Connective::Until => {
            let left = sub(rng, guarded);
            Formula::until(left, sub(rng, kind))
        }
        Connective::Release => {
            let left = sub(rng, TeamKind::Ltl);
            Formula::release(left, sub(rng, TeamKind::Ltl))
        }
    }
}

pub fn gen_ltl<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Formula {
    gen_team_formula(rng, cfg, TeamKind::Ltl, cfg.max_depth)
}

pub fn gen_teamov<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Formula {
    gen_team_formula(rng, cfg, TeamKind::TeamOv, cfg.max_depth)
}

pub fn gen_leftdc<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Formula {
    gen_team_formula(rng, cfg, TeamKind::LeftDc, cfg.max_depth)
}

pub fn gen_teamsim<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Formula {
    gen_team_formula(rng, cfg, TeamKind::TeamSim, cfg.max_depth)
}

/// A quantifier-free matrix over `vars`, built with the LTL weights.
pub fn gen_matrix<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, vars: &[Var], depth: usize) -> Matrix {
    let depth = depth.max(1);
    let w = &cfg.weights;
    let choices = root_distribution(TeamKind::Ltl, depth, w);
    let d = depth - 1;
    let var = |rng: &mut R| vars[rng.gen_range(0..vars.len())].clone();
    let sub = |rng: &mut R| gen_matrix(rng, cfg, vars, d);
    match pick(rng, &choices) {
        Connective::Atom => Matrix::Atom(pick_prop(rng, cfg), var(rng)),
        Connective::NegAtom => Matrix::not(Matrix::Atom(pick_prop(rng, cfg), var(rng))),
        Connective::Constant => {
            if rng.gen_bool(0.5) {
                Matrix::True
            } else {
                Matrix::False
            }
        }
        Connective::And => Matrix::and(sub(rng), sub(rng)),
        Connective::Or => Matrix::or(sub(rng), sub(rng)),
        Connective::Next => Matrix::next(sub(rng)),
        Connective::Globally => Matrix::globally(sub(rng)),
        Connective::Finally => Matrix::finally(sub(rng)),
        Connective::Until => {
            let left = sub(rng);
            Matrix::until(left, sub(rng))
        }
        // the release weight doubles as the weight of general negation
        Connective::Release => Matrix::not(sub(rng)),
        Connective::OvOr | Connective::BoolNeg => unreachable!("not offered for LTL"),
    }
}

/// Shape of generated Boolean closures of prenex sentences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureShape {
    /// Variables per quantifier block.
    pub max_vars: usize,
    pub max_literals: usize,
    pub allow_exists: bool,
    /// Allows `!` at the closure level.
    pub allow_negation: bool,
}

impl ClosureShape {
    /// Positive Boolean combinations of ∀*-sentences.
    pub const PBC: ClosureShape = ClosureShape {
        max_vars: 2,
        max_literals: 3,
        allow_exists: false,
        allow_negation: false,
    };
    /// Positive Boolean combinations of one-variable ∀-sentences.
    pub const PBC_FORALL_ONE: ClosureShape = ClosureShape {
        max_vars: 1,
        max_literals: 3,
        allow_exists: false,
        allow_negation: false,
    };
    /// Boolean combinations of prenex sentences.
    pub const BC: ClosureShape = ClosureShape {
        max_vars: 2,
        max_literals: 3,
        allow_exists: true,
        allow_negation: true,
    };
    /// Boolean combinations of one-variable sentences.
    pub const BC_Q_ONE: ClosureShape = ClosureShape {
        max_vars: 1,
        max_literals: 3,
        allow_exists: true,
        allow_negation: true,
    };
}

const VAR_NAMES: [&str; 3] = ["pi", "tau", "rho"];

fn gen_literal<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, shape: ClosureShape) -> Hyper {
    let n = rng.gen_range(1..=shape.max_vars.clamp(1, VAR_NAMES.len()));
    let vars: Vec<Var> = VAR_NAMES[..n].iter().map(|v| Var::new(v)).collect();
    let prefix: Vec<(Quantifier, Var)> = vars
        .iter()
        .map(|v| {
            let q = if shape.allow_exists && rng.gen_bool(0.5) {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            (q, v.clone())
        })
        .collect();
    let matrix = gen_matrix(rng, cfg, &vars, cfg.max_depth.min(3));
    Hyper::prenex(prefix, matrix)
}

fn gen_closure_tree<R: Rng + ?Sized>(rng: &mut R, literals: &mut Vec<Hyper>, negation: bool) -> Hyper {
    let node = if literals.len() == 1 {
        literals.pop().expect("nonempty")
    } else {
        let split = rng.gen_range(1..literals.len());
        let mut right_lits = literals.split_off(split);
        let left = gen_closure_tree(rng, literals, negation);
        let right = gen_closure_tree(rng, &mut right_lits, negation);
        if rng.gen_bool(0.5) {
            Hyper::and(left, right)
        } else {
            Hyper::or(left, right)
        }
    };
    if negation && rng.gen_bool(0.3) {
        Hyper::not(node)
    } else {
        node
    }
}

pub fn gen_closure<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, shape: ClosureShape) -> Hyper {
    let n = rng.gen_range(1..=shape.max_literals.max(1));
    let mut literals: Vec<Hyper> = (0..n).map(|_| gen_literal(rng, cfg, shape)).collect();
    gen_closure_tree(rng, &mut literals, shape.allow_negation)
}

pub fn gen_hyper_pbc<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Hyper {
    gen_closure(rng, cfg, ClosureShape::PBC)
}

pub fn gen_hyper_bc<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Hyper {
    gen_closure(rng, cfg, ClosureShape::BC)
}

fn gen_letter<R: Rng + ?Sized>(rng: &mut R, ap: &[Prop]) -> Letter {
    ap.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}

/// A canonical lasso with stem at most `max_stem` and period at most
/// `max_period` (canonicalization may shorten both).
pub fn gen_lasso<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> LassoTrace {
    let ap = cfg.ap();
    let stem_len = rng.gen_range(0..=cfg.max_stem);
    let period = rng.gen_range(1..=cfg.max_period.max(1));
    let stem = (0..stem_len).map(|_| gen_letter(rng, &ap)).collect();
    let cycle = (0..period).map(|_| gen_letter(rng, &ap)).collect();
    LassoTrace::new(stem, cycle).expect("period is at least one")
}

/// A team of at most `max_team` traces; may be empty.
pub fn gen_team<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Team {
    let size = rng.gen_range(0..=cfg.max_team);
    (0..size).map(|_| gen_lasso(rng, cfg)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Ltl,
    TeamOv,
    LeftDc,
    HyperPbc,
    HyperBc,
    TeamOfTraces,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generated {
    Formula(Formula),
    Hyper(Hyper),
    Team(Team),
}

/// One value of the requested kind, determined by `seed`.
pub fn gen_random(kind: GenKind, cfg: &GenConfig, seed: u64) -> Result<Generated> {
    cfg.validate()?;
    let mut rng = case_rng(seed, 0);
    Ok(match kind {
        GenKind::Ltl => Generated::Formula(gen_ltl(&mut rng, cfg)),
        GenKind::TeamOv => Generated::Formula(gen_teamov(&mut rng, cfg)),
        GenKind::LeftDc => Generated::Formula(gen_leftdc(&mut rng, cfg)),
        GenKind::HyperPbc => Generated::Hyper(gen_hyper_pbc(&mut rng, cfg)),
        GenKind::HyperBc => Generated::Hyper(gen_hyper_bc(&mut rng, cfg)),
        GenKind::TeamOfTraces => Generated::Team(gen_team(&mut rng, cfg)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Classify, FragmentTag};

    #[test]
    fn generated_formulas_lie_in_their_fragment() {
        let cfg = GenConfig::default();
        for seed in 0..300 {
            let mut rng = case_rng(7, seed);
            let f = gen_ltl(&mut rng, &cfg);
            assert!(f.classify().contains(&FragmentTag::Ltl), "{f}");
            assert!(f.depth() <= cfg.max_depth);
            let f = gen_teamov(&mut rng, &cfg);
            assert!(f.classify().contains(&FragmentTag::TeamOv), "{f}");
            let f = gen_leftdc(&mut rng, &cfg);
            assert!(f.classify().contains(&FragmentTag::TeamLeftDcSim), "{f}");
            let h = gen_hyper_pbc(&mut rng, &cfg);
            assert!(h.classify().contains(&FragmentTag::PbcForallStar), "{h}");
            let h = gen_closure(&mut rng, &cfg, ClosureShape::PBC_FORALL_ONE);
            assert!(h.classify().contains(&FragmentTag::PbcForallOne), "{h}");
            let h = gen_closure(&mut rng, &cfg, ClosureShape::BC_Q_ONE);
            assert!(h.classify().contains(&FragmentTag::BcQOne), "{h}");
            let h = gen_hyper_bc(&mut rng, &cfg);
            assert!(h.classify().contains(&FragmentTag::BcHyper), "{h}");
        }
    }

    #[test]
    fn teams_respect_bounds() {
        let cfg = GenConfig {
            max_team: 3,
            max_stem: 2,
            max_period: 2,
            ..GenConfig::default()
        };
        for seed in 0..200 {
            match gen_random(GenKind::TeamOfTraces, &cfg, seed).unwrap() {
                Generated::Team(team) => {
                    assert!(team.len() <= 3);
                    for t in &team {
                        assert!(t.stem().len() <= 2 && t.cycle().len() <= 2);
                    }
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn same_seed_same_value() {
        let cfg = GenConfig::default();
        for kind in [GenKind::Ltl, GenKind::LeftDc, GenKind::HyperBc, GenKind::TeamOfTraces] {
            assert_eq!(gen_random(kind, &cfg, 42).unwrap(), gen_random(kind, &cfg, 42).unwrap());
        }
    }

    #[test]
    fn zero_bounds_are_rejected() {
        let cfg = GenConfig {
            max_period: 0,
            ..GenConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }
}
