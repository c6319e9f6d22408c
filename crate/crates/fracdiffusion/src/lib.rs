//! Solver library for the time-fractional diffusion equation
//!
//! ```text
//! ∂ₜᵅ u − (κ(x) uₓ)ₓ = f(x,t)   on (0,1) × (0,T],   0 < α ≤ 1,
//! u(0,t) = u(1,t) = 0,           u(x,0) = u₀(x),
//! ```
//!
//! where ∂ₜᵅ is the Caputo derivative. Time is discretized by an averaged
//! scheme that integrates the equation over each slab of a graded mesh
//! tₙ = (nτ)^γ and represents the solution as a continuous piecewise-linear
//! function; at α = 1 it coincides with classical Crank–Nicolson. Space is
//! discretized with piecewise-linear Galerkin finite elements on a uniform
//! grid. The crate also ships the reference-solution machinery (truncated
//! Mittag-Leffler eigenfunction series) and the error/convergence-rate
//! bookkeeping needed to benchmark the scheme.
//!
//! Modules:
//! - [`kernel`]: fractional power kernels ω_μ, graded meshes, history weights
//! - [`fem`]: 1D P1 mass/stiffness assembly, load vectors, Ritz projection,
//!   Thomas solver
//! - [`stepper`]: the time-stepping loop producing a [`stepper::Trajectory`]
//! - [`mlf`]: evaluation of E_α(−x) on the negative real axis
//! - [`exact`]: closed-form series solutions for the benchmark problems
//! - [`metrics`]: L∞(L²)/L²(L²) errors and empirical convergence rates
//! - [`analysis`]: testable diagnostics (implicit interpolant, alternating
//!   sum identity, fractional energy positivity)
//! - [`cli`]: configuration, CSV emission and the selftest used by the binary
//!
//! See the `examples/` directory for runnable entry points to each part.

use std::fmt;
use std::sync::Arc;

pub mod analysis;
pub mod cli;
pub mod exact;
pub mod fem;
pub mod kernel;
pub mod metrics;
pub mod mlf;
pub mod quadrature;
pub mod special;
pub mod stepper;

/// Function of space alone, e.g. diffusivity κ(x) or initial data u₀(x).
pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// Function of space and time, e.g. the source term f(x,t).
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Crate-wide error type.
#[derive(Debug)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    Domain(String),
    /// A requested accuracy target could not be met.
    Accuracy(String),
    /// A linear system was singular or numerically broke down.
    Singular(String),
    /// Mismatched vector lengths.
    Length(String),
    /// Invalid run configuration; names the offending field.
    Config { field: String, reason: String },
    /// I/O failure, annotated with the path where possible.
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Accuracy(msg) => write!(f, "accuracy error: {msg}"),
            Error::Singular(msg) => write!(f, "singular system: {msg}"),
            Error::Length(msg) => write!(f, "length mismatch: {msg}"),
            Error::Config { field, reason } => write!(f, "invalid config: {field}: {reason}"),
            Error::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
