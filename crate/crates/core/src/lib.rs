//! Bound states of the 1+1 dimensional Dirac equation with vector, scalar and
//! pseudoscalar couplings, specialised to the pseudoscalar Cornell potential
//! `-a/x + b x` on the half-line.
//!
//! * [`potential`]: symbolic potential terms and their Lorentz decomposition.
//! * [`dirac`]: the first-order operator, its residual, partner recovery and
//!   the effective potentials `U± = V_p² ± V_p'`.
//! * [`sl`]: the Sturm–Liouville eigensolver for `-u'' + U± u = ε u`.
//! * [`analytic`]: closed-form Cornell levels and eigenfunctions.
//! * [`isolated`]: threshold states at `E = ∓m`.
//! * [`audit`]: spin/pseudospin symmetry classification.
//! * [`cli`]: the `dirac1d` command-line driver.

// `!(x > 0.0)` is used on purpose: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod audit;
pub mod cli;
pub mod dirac;
pub mod error;
pub mod grid;
pub mod io;
pub mod isolated;
pub mod potential;
pub mod quadrature;
pub mod report;
pub mod sl;
pub mod tridiag;

pub use error::{Error, Result};
pub use grid::Grid;
pub use potential::{Branch, CornellParams, LorentzPotentials, PhysicalParams, PotentialTerm};
pub use report::{Provenance, SpectrumEntry, SpectrumReport};
