//! Python bindings for the cocycle analysis library.
//!
//! Exposes the two model types (`Potential` for Schrödinger operators with a
//! trigonometric-polynomial potential, `Jacobi` for models with a
//! trigonometric hopping) together with the operations the command-line tool
//! is built on: strip minima, Herman radii, Lyapunov exponents,
//! acceleration, subcriticality criteria, improved lower bounds, and
//! periodic-approximant band spectra.  Library errors surface as
//! `ValueError`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cocycle_lab::circleopt::{
    herman_radius, herman_radius_uniform, min_modulus, zero_radius, DEFAULT_GRID,
};
use cocycle_lab::cocycle::{acceleration, lyapunov};
use cocycle_lab::criteria::{subcritical_energy, subcritical_uniform};
use cocycle_lab::jacobi::{
    jacobi_acceleration, jacobi_case, jacobi_herman_bound, jacobi_herman_radius,
    jacobi_herman_radius_uniform, jacobi_lyapunov, jacobi_lyapunov_raw, jacobi_subcritical,
    jacobi_subcritical_uniform, CaseTag, JacobiModel,
};
use cocycle_lab::spectrum::band_spectrum;
use cocycle_lab::supercritical::{herman_bound_with_eps1, improved_herman_bound};
use cocycle_lab::trigpoly::{LaurentPoly, TrigPoly};

fn err(e: cocycle_lab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Criterion outcome: status string, the two compared quantities, and a
/// human-readable reason.
#[pyclass(frozen, get_all, skip_from_py_object, module = "cocycle_lab_py")]
struct Verdict {
    status: String,
    lhs: f64,
    rhs: f64,
    witness: String,
}

impl Verdict {
    fn from_lib(v: cocycle_lab::criteria::Verdict) -> Self {
        Verdict {
            status: v.status.to_string(),
            lhs: v.lhs,
            rhs: v.rhs,
            witness: v.witness,
        }
    }
}

#[pymethods]
impl Verdict {
    fn __repr__(&self) -> String {
        format!(
            "Verdict(status='{}', lhs={}, rhs={}, witness='{}')",
            self.status, self.lhs, self.rhs, self.witness
        )
    }
}

/// Improved lower bound for the exponent at real phases, with the chord data
/// it was built from.
#[pyclass(frozen, get_all, skip_from_py_object, module = "cocycle_lab_py")]
struct LowerBound {
    energy: f64,
    eps1: f64,
    eps_h: f64,
    gamma: f64,
    bound: f64,
    classical: f64,
}

impl LowerBound {
    fn from_report(r: cocycle_lab::supercritical::LowerBoundReport) -> Self {
        LowerBound {
            energy: r.energy,
            eps1: r.eps1,
            eps_h: r.eps_h,
            gamma: r.gamma,
            bound: r.bound,
            classical: r.classical_herman,
        }
    }
}

#[pymethods]
impl LowerBound {
    fn __repr__(&self) -> String {
        format!(
            "LowerBound(energy={}, eps1={}, eps_h={}, gamma={}, bound={}, classical={})",
            self.energy, self.eps1, self.eps_h, self.gamma, self.bound, self.classical
        )
    }
}

/// Asymptotic intercept data for a Jacobi model and the induced lower bound
/// at the real axis.
#[pyclass(frozen, get_all, skip_from_py_object, module = "cocycle_lab_py")]
struct JacobiBound {
    case: String,
    constant: f64,
    i_c: f64,
    bound: f64,
    singular: bool,
}

#[pymethods]
impl JacobiBound {
    fn __repr__(&self) -> String {
        format!(
            "JacobiBound(case='{}', constant={}, i_c={}, bound={}, singular={})",
            self.case,
            self.constant,
            self.i_c,
            self.bound,
            if self.singular { "True" } else { "False" }
        )
    }
}

fn case_name(tag: CaseTag) -> &'static str {
    match tag {
        CaseTag::PotentialDominant => "potential-dominant",
        CaseTag::Balanced => "balanced",
        CaseTag::HoppingDominant => "hopping-dominant",
    }
}

/// Real trigonometric polynomial `v(x) = 2 Σ_j (a_j cos(2πjx) + b_j sin(2πjx))`
/// driving a Schrödinger cocycle.
#[pyclass(frozen, module = "cocycle_lab_py")]
struct Potential {
    inner: TrigPoly,
}

#[pymethods]
impl Potential {
    /// Build from cosine coefficients `a` and optional sine coefficients `b`
    /// (defaults to all zeros); index `j` is the `j+1`-st harmonic.
    #[new]
    #[pyo3(signature = (a, b = None))]
    fn new(a: Vec<f64>, b: Option<Vec<f64>>) -> PyResult<Self> {
        let b = b.unwrap_or_else(|| vec![0.0; a.len()]);
        let inner = TrigPoly::new(a, b).map_err(err)?;
        Ok(Potential { inner })
    }

    /// Top harmonic degree `M`.
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    /// Value at a real phase.
    fn eval(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    /// Value at the complexified phase `x + iε`.
    fn eval_complex(&self, x: f64, eps: f64) -> Complex64 {
        self.inner.eval_complex(x, eps)
    }

    /// Modulus of the top coefficient `|λ_M|`.
    fn lambda_top_abs(&self) -> f64 {
        self.inner.lambda_top_abs()
    }

    /// Roots of `w^M (E − v)` as a polynomial in `w = e^{2πi(x+iε)}`.
    fn laurent_roots(&self, e: f64, eps: f64) -> PyResult<Vec<Complex64>> {
        self.inner.to_laurent(e, eps).roots().map_err(err)
    }

    /// Minimum of `|E − v(x + iε)|` over a phase grid.
    #[pyo3(signature = (e, eps, grid = DEFAULT_GRID))]
    fn min_modulus(&self, e: f64, eps: f64, grid: usize) -> f64 {
        min_modulus(&self.inner, e, eps, grid)
    }

    /// Height below which `E − v(x + iε)` keeps a zero on the strip boundary.
    fn zero_radius(&self, e: f64) -> PyResult<f64> {
        zero_radius(&self.inner, e).map_err(err)
    }

    /// Height at which the strip minimum of `|E − v|` first reaches 2.
    fn herman_radius(&self, e: f64) -> PyResult<f64> {
        herman_radius(&self.inner, e).map_err(err)
    }

    /// Energy-independent radius from the uniform threshold `4 + 2Σ|λ_j|`.
    fn herman_radius_uniform(&self) -> PyResult<f64> {
        herman_radius_uniform(&self.inner).map_err(err)
    }

    /// Monte-Carlo Lyapunov exponent of the cocycle at strip height `eps`;
    /// returns `(value, stderr)` in nats.
    #[pyo3(signature = (e, alpha, eps = 0.0, n = 100_000, phases = 32))]
    fn lyapunov(&self, e: f64, alpha: f64, eps: f64, n: usize, phases: usize) -> (f64, f64) {
        let est = lyapunov(&self.inner, e, alpha, eps, n, phases);
        (est.value, est.stderr)
    }

    /// Finite-difference slope of the exponent in `2πε`, snapped to the
    /// integer lattice; returns `(raw, snapped)`.
    #[pyo3(signature = (e, alpha, eps, h = 0.02, n = 20_000, phases = 8))]
    fn acceleration(
        &self,
        e: f64,
        alpha: f64,
        eps: f64,
        h: f64,
        n: usize,
        phases: usize,
    ) -> PyResult<(f64, i64)> {
        let acc = acceleration(&self.inner, e, alpha, eps, h, n, phases).map_err(err)?;
        Ok((acc.raw, acc.snapped))
    }

    /// Root-bound criterion at one energy.
    fn subcritical_energy(&self, e: f64) -> PyResult<Verdict> {
        subcritical_energy(&self.inner, e)
            .map(Verdict::from_lib)
            .map_err(err)
    }

    /// Root-bound criterion at the uniform level (all energies in the
    /// spectral hull at once).
    fn subcritical_uniform(&self) -> PyResult<Verdict> {
        subcritical_uniform(&self.inner)
            .map(Verdict::from_lib)
            .map_err(err)
    }

    /// Improved lower bound at one energy.  With `eps1` the chord is forced
    /// through that inner height; otherwise the smallest admissible height
    /// is found automatically.
    #[pyo3(signature = (e, eps1 = None))]
    fn herman_bound(&self, e: f64, eps1: Option<f64>) -> PyResult<LowerBound> {
        let report = match eps1 {
            Some(h) => {
                let eps_h = herman_radius(&self.inner, e).map_err(err)?;
                herman_bound_with_eps1(&self.inner, e, h, eps_h).map_err(err)?
            }
            None => improved_herman_bound(&self.inner, e).map_err(err)?,
        };
        Ok(LowerBound::from_report(report))
    }

    /// Bands of the periodic approximant at frequency `p/q` and phase `x`,
    /// as a sorted list of `(lo, hi)` pairs.
    #[pyo3(signature = (p, q, x = 0.0))]
    fn band_spectrum(&self, p: i64, q: u64, x: f64) -> PyResult<Vec<(f64, f64)>> {
        let bands = band_spectrum(&self.inner, p, q, x).map_err(err)?;
        Ok(bands.into_iter().map(|band| (band.lo, band.hi)).collect())
    }

    fn __repr__(&self) -> String {
        format!("Potential(degree={})", self.inner.degree())
    }
}

/// Jacobi model: trigonometric hopping `c` (a Laurent polynomial in
/// `w = e^{2πix}`) together with a trigonometric potential `v`.
#[pyclass(frozen, module = "cocycle_lab_py")]
struct Jacobi {
    inner: JacobiModel,
}

#[pymethods]
impl Jacobi {
    /// Build from the hopping's lowest exponent `c_lo` and contiguous
    /// coefficients `c_coeffs` (complex), plus potential coefficients as in
    /// `Potential`.
    #[new]
    #[pyo3(signature = (c_lo, c_coeffs, a, b = None))]
    fn new(
        c_lo: i64,
        c_coeffs: Vec<Complex64>,
        a: Vec<f64>,
        b: Option<Vec<f64>>,
    ) -> PyResult<Self> {
        let b = b.unwrap_or_else(|| vec![0.0; a.len()]);
        let c = LaurentPoly::new(c_lo, c_coeffs).map_err(err)?;
        let v = TrigPoly::new(a, b).map_err(err)?;
        let inner = JacobiModel::new(c, v).map_err(err)?;
        Ok(Jacobi { inner })
    }

    /// Which side of the cocycle grows faster in the strip:
    /// `"potential-dominant"`, `"balanced"`, or `"hopping-dominant"`.
    fn case(&self) -> &'static str {
        case_name(jacobi_case(&self.inner))
    }

    /// Height at which the strip minimum first crosses the contraction
    /// threshold (errors for hopping-dominant models, where it never does).
    fn herman_radius(&self, e: f64, alpha: f64) -> PyResult<f64> {
        jacobi_herman_radius(&self.inner, e, alpha).map_err(err)
    }

    /// Energy-independent variant over the spectral hull.
    fn herman_radius_uniform(&self, alpha: f64) -> PyResult<f64> {
        jacobi_herman_radius_uniform(&self.inner, alpha).map_err(err)
    }

    /// Asymptotic intercept of the strip exponent and the induced lower
    /// bound at the real axis.
    fn herman_bound(&self, alpha: f64) -> PyResult<JacobiBound> {
        let b = jacobi_herman_bound(&self.inner, alpha).map_err(err)?;
        Ok(JacobiBound {
            case: case_name(b.case).to_string(),
            constant: b.constant,
            i_c: b.i_c,
            bound: b.bound,
            singular: b.singular,
        })
    }

    /// Subcriticality criterion at one energy.
    fn subcritical(&self, e: f64, alpha: f64) -> PyResult<Verdict> {
        jacobi_subcritical(&self.inner, e, alpha)
            .map(Verdict::from_lib)
            .map_err(err)
    }

    /// Subcriticality criterion at the uniform level.
    fn subcritical_uniform(&self, alpha: f64) -> PyResult<Verdict> {
        jacobi_subcritical_uniform(&self.inner, alpha)
            .map(Verdict::from_lib)
            .map_err(err)
    }

    /// Normalized Lyapunov exponent `L − ∫log|c|` as `(value, stderr)`;
    /// errors when the hopping has unit-circle roots.
    #[pyo3(signature = (e, alpha, eps = 0.0, n = 100_000, phases = 32))]
    fn lyapunov(
        &self,
        e: f64,
        alpha: f64,
        eps: f64,
        n: usize,
        phases: usize,
    ) -> PyResult<(f64, f64)> {
        let est = jacobi_lyapunov(&self.inner, e, alpha, eps, n, phases).map_err(err)?;
        Ok((est.value, est.stderr))
    }

    /// Raw (unnormalized) exponent of the step cocycle as `(value, stderr)`.
    #[pyo3(signature = (e, alpha, eps = 0.0, n = 100_000, phases = 32))]
    fn lyapunov_raw(&self, e: f64, alpha: f64, eps: f64, n: usize, phases: usize) -> (f64, f64) {
        let est = jacobi_lyapunov_raw(&self.inner, e, alpha, eps, n, phases);
        (est.value, est.stderr)
    }

    /// Finite-difference slope of the raw exponent in `2πε`, snapped to the
    /// half-integer lattice; returns `(raw, snapped)`.
    #[pyo3(signature = (e, alpha, eps, h = 0.02, n = 20_000, phases = 8))]
    fn acceleration(
        &self,
        e: f64,
        alpha: f64,
        eps: f64,
        h: f64,
        n: usize,
        phases: usize,
    ) -> PyResult<(f64, f64)> {
        let acc = jacobi_acceleration(&self.inner, e, alpha, eps, h, n, phases).map_err(err)?;
        Ok((acc.raw, acc.snapped))
    }

    fn __repr__(&self) -> String {
        format!(
            "Jacobi(case='{}', top_degree={})",
            case_name(jacobi_case(&self.inner)),
            self.inner.top_degree()
        )
    }
}

#[pymodule]
fn cocycle_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Potential>()?;
    m.add_class::<Jacobi>()?;
    m.add_class::<Verdict>()?;
    m.add_class::<LowerBound>()?;
    m.add_class::<JacobiBound>()?;
    m.add("GOLDEN_MEAN", cocycle_lab::GOLDEN_MEAN)?;
    Ok(())
}
