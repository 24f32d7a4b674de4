//! Divided-difference functionals of the psi and polygamma functions,
//! together with a numerical harness that checks the monotonicity,
//! convexity, complete-monotonicity and sharp-inequality claims built
//! on top of them.
//!
//! The crate is organised around six layers:
//!
//! * [`real`]: a scalar that runs either in plain `f64` or in extended
//!   precision (MPFR-backed, configurable decimal digits, at least 30).
//! * [`special`]: `ln Γ`, `ψ`, `ψ⁽ⁿ⁾`, an independent quadrature oracle
//!   for them, and the positive zero of `ψ`.
//! * [`divdiff`]: the functionals `z`, `Δ`, `Θ`, `Λ`, `Φ`, `g`, `f`, `Q`
//!   built from divided differences of `ψ` and `ln Γ`, with all
//!   coincident-shift limit branches.
//! * [`cm`]: complete-monotonicity sign certificates, telescoping step
//!   identities and finite-difference cross-checks.
//! * [`apps`]: the applied inequality checks: Wallis double-factorial
//!   bounds, the error-function sandwich, unit-ball volume ratios,
//!   Kershaw's inequality and the Γ-vs-ψ symmetric bounds.
//! * [`report`]: suite runner producing deterministic JSON/CSV reports.

pub mod apps;
pub mod bernoulli;
pub mod cm;
pub mod divdiff;
mod error;
pub mod quad;
pub mod real;
pub mod report;
pub mod special;

pub use error::{Error, Result};
pub use real::{PrecisionMode, Real};
