//! Strong deformation retraction of a mapping cylinder onto its top.
//!
//! Given a homotopy equivalence `f: X -> Y` together with a homotopy inverse
//! `g`, and homotopies `F: g∘f ≃ 1_X`, `G: f∘g ≃ 1_Y`, the mapping cylinder
//! `M_f` deformation retracts onto `X × {1}` while keeping that top fixed for
//! all times. This crate evaluates that retraction `Γ` in three ways:
//!
//! * [`GammaImpl::Compositional`]: the retraction assembled from its building
//!   blocks (cylinder collapse, the two homotopies, the homotopy extension
//!   retraction of the square) by plain function calls;
//! * [`GammaImpl::Printed`]: the unfolded piecewise formula as published;
//! * [`GammaImpl::Corrected`]: the unfolded formula with the missing
//!   V-shaped region of the middle third restored.
//!
//! The [`verify`] module turns the defining properties into numerical checks
//! and differential tests between evaluators; [`bench`] times them.

pub mod bench;
pub mod closed_form;
pub mod compositional;
pub mod cylinder;
pub mod emit;
mod error;
pub mod homotopy_data;
pub mod sampling;
pub mod verify;

pub use closed_form::{gamma, GammaImpl};
pub use compositional::Construction;
pub use cylinder::{canonicalize, is_on_top, quotient_distance, CylPoint, SEAM_TOL};
pub use error::{Error, Result};
pub use homotopy_data::{
    fixture, validate_equivalence, HtpyEquivalence, SpacePoint, UnitParam, FIXTURE_NAMES,
};
pub use verify::{CheckReport, Region, Witness};
