//! Certificates for the spectral regime of one-dimensional quasi-periodic
//! Schrodinger and Jacobi operators whose potential is a real trigonometric
//! polynomial.
//!
//! The decision pipeline works on the transfer cocycle of the operator,
//! continued to complex phases.  Its Lyapunov exponent as a function of the
//! strip height is convex, even and piecewise linear, which makes the regime
//! question (does the exponent vanish on a neighbourhood of zero height, or is
//! it already positive at height zero?) decidable from a handful of scalar
//! quantities:
//!
//! * [`circleopt::herman_radius`]: the largest strip height at which the
//!   distance between the energy and the complexified potential still allows a
//!   uniform-hyperbolicity certificate,
//! * [`cocycle::lyapunov`] and [`cocycle::acceleration`]: direct numerical
//!   estimates of the exponent and its quantized slope,
//! * [`criteria`]: closed-form coefficient tests that certify the vanishing
//!   regime for every energy at once,
//! * [`supercritical`]: Jensen-formula lower bounds that certify a positive
//!   exponent at real phases,
//! * [`jacobi`]: the analogous machinery when the hopping term is itself a
//!   trigonometric polynomial,
//! * [`spectrum`]: periodic-approximant spectra used as ground truth in tests
//!   and figures.
//!
//! All numerical routines are deterministic: equidistributed phase grids
//! replace Monte Carlo sampling, and parallel reductions are ordered.

pub mod circleopt;
pub mod cli;
pub mod cocycle;
pub mod criteria;
pub mod csvio;
pub mod jacobi;
pub mod roots;
pub mod spectrum;
pub mod supercritical;
pub mod trigpoly;

use num_complex::Complex64;

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Model construction or input validation failed.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// The simultaneous root iteration did not reach the residual target.
    /// `partial` carries the best available root set for diagnostics.
    #[error("root finding stalled after {iterations} iterations ({converged}/{total} roots within residual target)")]
    RootsNotConverged {
        iterations: usize,
        converged: usize,
        total: usize,
        partial: Vec<Complex64>,
    },

    /// A logarithmic circle integral was requested for a polynomial with a
    /// root too close to the unit circle for the root-based evaluation to be
    /// trustworthy.
    #[error("circle integral is near-singular: root of modulus {modulus} lies within {tol:e} of the unit circle")]
    NearSingularIntegral { modulus: f64, tol: f64 },

    /// A finite-difference slope estimate did not land near any admissible
    /// quantized value.
    #[error(
        "slope estimate {raw} is farther than 0.25*{quantum} from every multiple of {quantum}"
    )]
    UnresolvedAcceleration { raw: f64, quantum: f64 },

    /// Two independent evaluation routes for the same quantity disagreed
    /// beyond tolerance, indicating an inaccurate intermediate (usually the
    /// root set).
    #[error("independent evaluation routes disagree: {lhs} vs {rhs} (tolerance {tol:e})")]
    RouteMismatch { lhs: f64, rhs: f64, tol: f64 },

    /// No strip height satisfied the admissibility requirement of the
    /// improved lower bound.
    #[error("lower bound inapplicable at energy {energy}: {reason}")]
    BoundInapplicable { energy: f64, reason: String },

    /// The requested operation is not defined for this model class.
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    /// An exact matrix product exceeded the floating-point range.
    #[error("overflow in {0}; reduce the period or renormalize")]
    Overflow(String),

    /// A documented precondition of the routine was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The hopping symbol vanishes on the unit circle, so the requested
    /// quantity is only defined after regularization.
    #[error("singular hopping: {0}")]
    SingularHopping(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Golden mean, the default frequency in examples and tests.
pub const GOLDEN_MEAN: f64 = 0.618_033_988_749_894_9;

/// Process-wide worker pool for phase and energy parallelism.  Honors the
/// `COCYCLE_LAB_THREADS` environment variable (positive integer) at first
/// use; all parallel reductions stay ordered, so the thread count never
/// affects results.
pub fn thread_pool() -> &'static rayon::ThreadPool {
    use std::sync::OnceLock;
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(k) = std::env::var("COCYCLE_LAB_THREADS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&k| k > 0)
        {
            builder = builder.num_threads(k);
        }
        builder.build().expect("worker pool construction")
    })
}
