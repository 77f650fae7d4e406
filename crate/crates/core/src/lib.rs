//! Team semantics for LTL and its correspondence with Boolean closures of
//! one-variable HyperLTL.
//!
//! The crate parses and prints formulas of LTL, TeamLTL(⩔), TeamLTL(~) and
//! HyperLTL, evaluates them over finite teams of lasso traces, converts team
//! formulas into ⩔-disjunctive and quasi-flat normal form, and translates
//! between the team logics and the HyperLTL closures. An exhaustive bounded
//! evaluator of the lax team semantics serves as the reference the fast
//! normal-form route is tested against.

pub mod error;
pub mod eval_classic;
pub mod eval_team;
pub mod formula;
pub mod harness;
pub mod syntax;
pub mod traces;
pub mod transform;

pub use error::{Error, Result, SourceSpan};
pub use formula::{Classify, FragmentSet, FragmentTag, Formula, Hyper, Matrix, Prop, Quantifier, Var};
pub use traces::{LassoTrace, Letter, Team};
