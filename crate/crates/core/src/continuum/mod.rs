//! Exact-rational model of the map `Φ = φ × id : ℝ × ℚ → ℝ/ℤ × ℚ`, with
//! decision procedures and witness generators for the membership claims
//! showing that `Φ` is not a quotient map although `φ` and `id` are.
//!
//! Scope: only rational points are represented. Each predicate used here is
//! decided exactly at rational points, and each witness is rational, so no
//! claim checked by this module needs an irrational point.

mod model;
mod rat;
mod verify;

use thiserror::Error;

pub use model::{
    box_radius, decide_box_containment, membership_aq, membership_bq, membership_phi_aq,
    nearest_integer, phi, witness_product_side, BoxDecision, BoxSpec, EpsFamily, PointRQ,
    Predicates, ProductWitness, QuotPoint,
};
pub use rat::Rat;
pub use verify::{
    adversarial_points, check_preimage_identity, check_preimage_identity_with, check_product_side,
    check_quotient_side, random_eps_family, reciprocal_grid, run_paper_verification, sample_points,
    PaperConfig, SecondFactor,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContinuumError {
    #[error("invalid rational `{literal}`: {reason}")]
    RatParse { literal: String, reason: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("witness failed re-verification: {0}")]
    WitnessRejected(String),
}
