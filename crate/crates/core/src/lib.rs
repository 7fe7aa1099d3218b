//! Neighborhood spaces on finite carriers.
//!
//! A neighborhood space assigns to every point `x` a p-stack `ν(x)`: an
//! upward-closed family of subsets, any two of which intersect, each member
//! containing `x`. This crate implements the finite side of the category of
//! such spaces (continuity, initial and final lifts, products, quotients,
//! the structure lattice, the pretopological modification), an exhaustive
//! search harness over small carriers, and an exact-rational model of the
//! `ℝ × ℚ → ℝ/ℤ × ℚ` product map used to show that products of quotient
//! maps need not be quotient.
//!
//! Finite subsets are bitmasks over the carrier order, so carriers hold at
//! most [`MAX_CARRIER`] points.

pub mod constructions;
pub mod continuum;
pub mod enumerate;
mod error;
pub mod morphism;
pub mod pstack;
pub mod report;
pub mod space;

pub use constructions::{
    final_lift, first_disagreement, initial_lift, is_quotient_map, product_carrier, product_map,
    product_space, quotient_structure, Product, ProductMode, StructuredSink, StructuredSource,
};
pub use error::{Error, Result};
pub use morphism::{is_continuous, is_continuous_at, SpaceMap};
pub use pstack::{image_stack, Carrier, PStack, Subset, MAX_CARRIER};
pub use report::{Check, Status, VerificationReport};
pub use space::{structure_join, structure_meet, validate_structure, NbdStructure, Validation};
