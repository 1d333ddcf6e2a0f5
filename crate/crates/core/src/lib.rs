//! Exact dynamics of a damped two-level atom driven by a circularly polarized
//! wave, with an independent numerical integrator to check every closed form.
//!
//! * [`spectral`]: parameters, detunings, the complex frequencies and the four
//!   AC-Stark-split levels.
//! * [`dynamics`]: amplitudes, occupations, momentum transfer and force.
//! * [`dressed`]: the dressed basis, its energies and lifetimes, and drive
//!   design for long-lived dressed states.
//! * [`oracle`]: fixed-step RK4 integration of the coupled equations on the
//!   two-point momentum lattice.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dressed;
pub mod dynamics;
pub mod error;
pub mod oracle;
pub mod spectral;

pub use error::{Error, Result};
