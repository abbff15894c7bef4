//! Forward and inverse nodal solver for the p-Laplacian energy-dependent
//! Sturm–Liouville problem
//!
//! ```text
//! -(|u'|^{p-2} u')' = (p-1) (λ² - q(x) - 2λ r(x)) |u|^{p-2} u,   u(0) = u(1) = 0.
//! ```
//!
//! The pipeline is: generalized sine ([`gentrig`]) → Prüfer phase
//! ([`pruefer`]) → eigenvalues and nodal data ([`spectrum`]) → closed-form
//! expansions ([`asymptotics`]) → potential recovery from nodal lengths
//! ([`reconstruct`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod gentrig;
pub mod potentials;
pub mod pruefer;
pub mod quadrature;
pub mod reconstruct;
pub mod spectrum;

pub use error::{Error, Result};
pub use gentrig::{PParameters, SpTable};
pub use potentials::{CoefficientPair, Potential, SampledPotential, Which};
pub use pruefer::{Pencil, PhaseOptions, PhaseSolution};
pub use spectrum::{NodalData, ShootingOptions};
