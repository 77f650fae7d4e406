//! Formula-to-formula procedures: team normal forms, prenexing of HyperLTL
//! closures, and the translations between the team logics and the closures
//! of one-variable HyperLTL.

mod hyper;
mod normal;
pub mod rules;
mod theorems;

pub use hyper::{bool_closure_dnf, negate_prenex, prenex_bc, prenex_pbc, SignedLiteral};
pub use normal::{to_ov_dnf, to_quasi_flat, OvDnf, QfConjunct, QuasiFlat};
pub use theorems::{bc_to_leftdc, leftdc_to_bc, pbc_to_teamov, teamov_to_pbc};

/// Settings shared by the normal-form procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransformConfig {
    /// Abort with [`crate::Error::BlowUp`] past this many disjuncts.
    pub max_disjuncts: usize,
    /// Deliberately unsound rewriting, for checking that the differential
    /// harness notices.
    pub fault: Option<Fault>,
}

impl Default for TransformConfig {
    fn default() -> Self {
        TransformConfig {
            max_disjuncts: 4096,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Rewrites `G(φ ⩔ ψ)` to `G(φ ∨ ψ)` instead of `G φ ⩔ G ψ`.
    GloballySplits,
}
