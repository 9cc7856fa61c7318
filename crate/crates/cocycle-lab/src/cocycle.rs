//! Transfer-matrix cocycles: renormalized Lyapunov-exponent estimation on
//! complexified phases, finite-difference acceleration with quantized
//! snapping, and the dominated-splitting machinery (invariant section,
//! two-sided bounds for the exponent against the circle log-integral,
//! disk-contraction checks).

use crate::circleopt::{min_modulus, DEFAULT_GRID};
use crate::trigpoly::{StripEval, TrigPoly, TAU};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// 2×2 complex matrix, row-major `[m11, m12, m21, m22]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2C(pub [Complex64; 4]);

impl Mat2C {
    pub fn identity() -> Self {
        Mat2C([
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
    }

    pub fn mul(&self, rhs: &Mat2C) -> Mat2C {
        let a = &self.0;
        let b = &rhs.0;
        Mat2C([
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ])
    }

    pub fn det(&self) -> Complex64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0] + self.0[3]
    }

    /// Largest entry modulus; the renormalizer of the product estimator.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .map(|z| z.norm_sqr())
            .fold(0.0_f64, f64::max)
            .sqrt()
    }

    pub fn scale(&self, s: f64) -> Mat2C {
        Mat2C([self.0[0] * s, self.0[1] * s, self.0[2] * s, self.0[3] * s])
    }
}

/// One Schrödinger transfer step `((E − v(x+iε), −1), (1, 0))`; determinant
/// is exactly 1.
pub fn transfer_step(v: &TrigPoly, e: f64, x: f64, eps: f64) -> Mat2C {
    let t = Complex64::new(e, 0.0) - v.eval_complex(x, eps);
    Mat2C([
        t,
        Complex64::new(-1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
    ])
}

/// Numerical Lyapunov-exponent estimate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LEEstimate {
    /// Phase-averaged exponent in nats.
    pub value: f64,
    /// Sample standard error across the phase values.
    pub stderr: f64,
    pub n_iterates: usize,
    pub n_phases: usize,
    pub alpha: f64,
    pub eps: f64,
}

/// Exponent of one renormalized orbit product starting at `x0`: multiply the
/// step matrix, divide by the largest entry modulus, accumulate its log.
fn phase_exponent(se: &StripEval, e: f64, alpha: f64, x0: f64, n: usize) -> f64 {
    let mut p = Mat2C::identity();
    let mut acc = 0.0_f64;
    let mut x = x0 - x0.floor();
    for _ in 0..n {
        let t = Complex64::new(e, 0.0) - se.eval(x);
        // ((t, −1), (1, 0)) · p, fused.
        let q0 = t * p.0[0] - p.0[2];
        let q1 = t * p.0[1] - p.0[3];
        p = Mat2C([q0, q1, p.0[0], p.0[1]]);
        let s = p.max_abs();
        acc += s.ln();
        p = p.scale(1.0 / s);
        x += alpha;
        x -= x.floor();
    }
    acc / n as f64
}

pub(crate) fn summarize(per_phase: Vec<f64>, n: usize, alpha: f64, eps: f64) -> LEEstimate {
    let phases = per_phase.len();
    let mean = per_phase.iter().sum::<f64>() / phases as f64;
    let stderr = if phases > 1 {
        let var = per_phase.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (phases - 1) as f64;
        (var / phases as f64).sqrt()
    } else {
        0.0
    };
    LEEstimate {
        value: mean,
        stderr,
        n_iterates: n,
        n_phases: phases,
        alpha,
        eps,
    }
}

/// Lyapunov exponent of the complexified cocycle at height `eps`, averaged
/// over `phases` equidistributed starting points `x_k = k/phases`.
/// Deterministic: no sampling randomness, ordered reduction.
pub fn lyapunov(v: &TrigPoly, e: f64, alpha: f64, eps: f64, n: usize, phases: usize) -> LEEstimate {
    assert!(n >= 1 && phases >= 1, "estimator needs n, phases >= 1");
    let se = v.strip_evaluator(eps);
    let per_phase: Vec<f64> = crate::thread_pool().install(|| {
        (0..phases)
            .into_par_iter()
            .map(|k| phase_exponent(&se, e, alpha, k as f64 / phases as f64, n))
            .collect()
    });
    summarize(per_phase, n, alpha, eps)
}

/// Finite-difference acceleration estimate snapped to the quantization
/// lattice.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Acceleration {
    /// Raw slope `(ΔL)/(2πΔε)`.
    pub raw: f64,
    /// Nearest admissible value `snapped = k·quantum`.
    pub snapped: i64,
    /// Lattice spacing: the gcd of active harmonics.
    pub quantum: usize,
}

/// Acceleration at `eps`: central difference when `eps − h ≥ 0`, forward
/// difference otherwise (so `eps = 0` measures the right derivative).  The
/// raw slope is snapped to the nearest multiple of the gcd of active
/// harmonics; a snap distance above `0.25·gcd` is reported as an error.
pub fn acceleration(
    v: &TrigPoly,
    e: f64,
    alpha: f64,
    eps: f64,
    h: f64,
    n: usize,
    phases: usize,
) -> Result<Acceleration> {
    assert!(h > 0.0, "step h must be positive");
    let raw = if eps - h >= 0.0 {
        let hi = lyapunov(v, e, alpha, eps + h, n, phases).value;
        let lo = lyapunov(v, e, alpha, eps - h, n, phases).value;
        (hi - lo) / (2.0 * TAU * h)
    } else {
        let hi = lyapunov(v, e, alpha, eps + h, n, phases).value;
        let lo = lyapunov(v, e, alpha, eps, n, phases).value;
        (hi - lo) / (TAU * h)
    };
    let d = v.gcd_frequency();
    let k = (raw / d as f64).round();
    if (raw - k * d as f64).abs() > 0.25 * d as f64 {
        return Err(Error::UnresolvedAcceleration {
            raw,
            quantum: d as f64,
        });
    }
    Ok(Acceleration {
        raw,
        snapped: k as i64 * d as i64,
        quantum: d,
    })
}

/// `σ(ε;E) = min{1, (m−1)/(m(m−2))}`: the disk radius containing the
/// dominating section when `m > 2`.
pub fn sigma_bound(m: f64) -> f64 {
    (1.0_f64).min((m - 1.0) / (m * (m - 2.0)))
}

/// Invariant projective section sampled on a phase grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Section {
    pub e: f64,
    pub eps: f64,
    pub alpha: f64,
    /// Projective coordinates at `x_j = j/len`.
    pub samples: Vec<Complex64>,
    /// Certified sup-norm bound on the distance to the true fixed point.
    pub sup_residual: f64,
    /// Pullback depth used per sample.
    pub iterations: usize,
    /// Disk radius `σ(ε;E)` that must contain every sample.
    pub sigma: f64,
}

struct SectionCtx {
    se: StripEval,
    e: f64,
    alpha: f64,
    contraction: f64,
    depth: usize,
}

impl SectionCtx {
    fn new(v: &TrigPoly, e: f64, alpha: f64, eps: f64, max_iter: usize) -> Result<Self> {
        let m = min_modulus(v, e, eps, DEFAULT_GRID);
        if m <= 2.0 {
            return Err(Error::Precondition(format!(
                "dominating section needs min modulus > 2, got {m}"
            )));
        }
        // The pullback map z ↦ 1/(u − z) on |z| ≤ σ ≤ 1 with |u| ≥ m
        // contracts with factor 1/(m−1)².
        let contraction = 1.0 / ((m - 1.0) * (m - 1.0));
        let depth_needed =
            ((1e-10 * (1.0 - contraction)).ln() / contraction.ln()).ceil() as usize + 2;
        Ok(SectionCtx {
            se: v.strip_evaluator(eps),
            e,
            alpha,
            contraction,
            depth: depth_needed.clamp(4, max_iter),
        })
    }

    /// Depth-`k` pullback approximation at `x`: compose the Möbius steps
    /// `z ↦ 1/(u(x − jα) − z)` from `j = k` down to 1.
    fn value_at_depth(&self, x: f64, k: usize) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for j in (1..=k).rev() {
            let y = x - j as f64 * self.alpha;
            let u = Complex64::new(self.e, 0.0) - self.se.eval(y - y.floor());
            z = 1.0 / (u - z);
        }
        z
    }

    /// Section value plus a certified error bound: the max of the measured
    /// lag-6 Cauchy increment bound and the a priori contraction tail
    /// `K^depth/(1−K)` (the measured increment alone could undershoot by
    /// accidental cancellation).
    fn value_with_error(&self, x: f64) -> (Complex64, f64) {
        const LAG: usize = 6;
        let deep = self.value_at_depth(x, self.depth);
        let shallow = self.value_at_depth(x, self.depth.saturating_sub(LAG));
        let kj = self.contraction.powi(LAG as i32);
        let measured = (deep - shallow).norm() * kj / (1.0 - kj);
        let a_priori = self.contraction.powi(self.depth as i32) / (1.0 - self.contraction);
        (deep, measured.max(a_priori))
    }
}

/// Single-point evaluation of the dominating section (the projective
/// coordinate of the contracted direction).  Requires `m(ε;E) > 2`.
pub fn section_value(v: &TrigPoly, e: f64, alpha: f64, eps: f64, x: f64) -> Result<Complex64> {
    let ctx = SectionCtx::new(v, e, alpha, eps, 200)?;
    Ok(ctx.value_with_error(x).0)
}

/// Dominating section on a uniform `grid_n`-point phase grid via pullback
/// fixed-point iteration from the zero section, with a certified sup-norm
/// residual bound.  Requires `m(ε;E) > 2`; iteration depth is capped at
/// `max_iter`.
pub fn dominating_section(
    v: &TrigPoly,
    e: f64,
    alpha: f64,
    eps: f64,
    grid_n: usize,
    max_iter: usize,
) -> Result<Section> {
    let ctx = SectionCtx::new(v, e, alpha, eps, max_iter)?;
    let m = min_modulus(v, e, eps, DEFAULT_GRID);
    let pairs: Vec<(Complex64, f64)> = crate::thread_pool().install(|| {
        (0..grid_n)
            .into_par_iter()
            .map(|j| ctx.value_with_error(j as f64 / grid_n as f64))
            .collect()
    });
    let sup_residual = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(Section {
        e,
        eps,
        alpha,
        samples: pairs.into_iter().map(|p| p.0).collect(),
        sup_residual,
        iterations: ctx.depth,
        sigma: sigma_bound(m),
    })
}

/// Two-sided analytic bounds for `Ξ = L − ∫ log|E−v(x+iε)| dx`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct XiBounds {
    pub lower: f64,
    pub upper: f64,
    pub m: f64,
    pub sigma: f64,
}

/// Analytic sandwich for the exponent defect against the circle integral:
/// `lower = ½ log[((1−σ/m)² + 1/m²)/(1+σ²)]`,
/// `upper = ½ log[(1+σ/m)² + 1/m²]`.  Requires `m(ε;E) > 2`.
pub fn xi_bounds(v: &TrigPoly, e: f64, eps: f64) -> Result<XiBounds> {
    let m = min_modulus(v, e, eps, DEFAULT_GRID);
    if m <= 2.0 {
        return Err(Error::Precondition(format!(
            "xi bounds need min modulus > 2, got {m}"
        )));
    }
    let sigma = sigma_bound(m);
    let lower = 0.5 * ((((1.0 - sigma / m).powi(2) + 1.0 / (m * m)) / (1.0 + sigma * sigma)).ln());
    let upper = 0.5 * (((1.0 + sigma / m).powi(2) + 1.0 / (m * m)).ln());
    Ok(XiBounds {
        lower,
        upper,
        m,
        sigma,
    })
}

/// Numeric defect `L(ε;E) − ∫ log|E−v(x+iε)| dx` with the integral from the
/// root factorization.
pub fn xi_numeric(
    v: &TrigPoly,
    e: f64,
    alpha: f64,
    eps: f64,
    n: usize,
    phases: usize,
) -> Result<f64> {
    let le = lyapunov(v, e, alpha, eps, n, phases);
    let integral = v.to_laurent(e, eps).circle_log_integral()?;
    Ok(le.value - integral)
}

/// Analytic sandwich together with its numeric check value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct XiSandwich {
    pub lower: f64,
    pub upper: f64,
    pub numeric: f64,
    pub m: f64,
    pub sigma: f64,
}

/// Combined report: analytic two-sided bounds and the estimator-based
/// defect they must bracket (up to estimator noise).
pub fn xi_sandwich(
    v: &TrigPoly,
    e: f64,
    alpha: f64,
    eps: f64,
    n: usize,
    phases: usize,
) -> Result<XiSandwich> {
    let bounds = xi_bounds(v, e, eps)?;
    let numeric = xi_numeric(v, e, alpha, eps, n, phases)?;
    Ok(XiSandwich {
        lower: bounds.lower,
        upper: bounds.upper,
        numeric,
        m: bounds.m,
        sigma: bounds.sigma,
    })
}

/// Sampled contraction data for the Möbius map `F(z) = (c + dz)/(1 + bz)` on
/// the closed disk of radius `r`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiskSample {
    pub radius: f64,
    /// All sampled images stayed inside the disk.
    pub maps_in: bool,
    /// Max of `|F'(z)| = |d − bc|/|1+bz|²` over the samples.
    pub lipschitz_sup: f64,
}

/// Deterministic 1001-point sample (10 rings × 100 angles + center) of the
/// disk of radius `r` for the map attached to `((1, b), (c, d))`.
pub fn disk_contraction_sample(b: Complex64, c: Complex64, d: Complex64, r: f64) -> DiskSample {
    let numerator = (d - b * c).norm();
    let mut maps_in = true;
    let mut lip = 0.0_f64;
    let mut probe = |z: Complex64| {
        let denom = Complex64::new(1.0, 0.0) + b * z;
        if denom.norm() == 0.0 {
            maps_in = false;
            lip = f64::INFINITY;
            return;
        }
        let image = (c + d * z) / denom;
        if image.norm() > r + 1e-12 {
            maps_in = false;
        }
        lip = lip.max(numerator / denom.norm_sqr());
    };
    probe(Complex64::new(0.0, 0.0));
    for ring in 1..=10 {
        let rad = r * ring as f64 / 10.0;
        for a in 0..100 {
            probe(Complex64::from_polar(rad, TAU * a as f64 / 100.0));
        }
    }
    DiskSample {
        radius: r,
        maps_in,
        lipschitz_sup: lip,
    }
}

/// Class membership and sampled contraction for matrices `((1, b), (c, d))`
/// in the family `|d| ≤ δ`, `|b| < ε`, `|c|ε < (1−δ)²/4`, acting on the disk
/// of radius `r = (1−δ)/(2ε)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContractionReport {
    pub in_class: bool,
    pub radius: f64,
    pub maps_in: bool,
    pub lipschitz_sup: f64,
}

pub fn contraction_check(
    b: Complex64,
    c: Complex64,
    d: Complex64,
    eps: f64,
    delta: f64,
) -> ContractionReport {
    assert!(
        eps > 0.0 && (0.0..1.0).contains(&delta),
        "class parameters out of range"
    );
    let in_class =
        d.norm() <= delta && b.norm() < eps && c.norm() * eps < (1.0 - delta).powi(2) / 4.0;
    let r = (1.0 - delta) / (2.0 * eps);
    let sample = disk_contraction_sample(b, c, d, r);
    ContractionReport {
        in_class,
        radius: r,
        maps_in: sample.maps_in,
        lipschitz_sup: sample.lipschitz_sup,
    }
}

/// Growth-lemma verdict for random diagonals of magnitude ≥ `mu`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthCheck {
    /// `(1/n) log‖Π ((a_j, −1), (1, 0))‖`.
    pub lhs: f64,
    /// `log(μ − 1)`.
    pub rhs: f64,
    pub holds: bool,
}

/// Draws `n` diagonal entries with `|a_j| ≥ mu` (magnitudes `mu + U[0,3]`,
/// random signs, ChaCha stream from `seed`) and checks the product growth
/// bound `(1/n) log‖Π A_j‖ ≥ log(μ−1)`.
pub fn growth_bound_check(mu: f64, n: usize, seed: u64) -> GrowthCheck {
    assert!(mu > 2.0, "growth bound needs mu > 2");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut p = [1.0_f64, 0.0, 0.0, 1.0];
    let mut acc = 0.0_f64;
    for _ in 0..n {
        let magnitude = mu + rng.random_range(0.0..3.0);
        let a = if rng.random::<bool>() {
            magnitude
        } else {
            -magnitude
        };
        let q = [a * p[0] - p[2], a * p[1] - p[3], p[0], p[1]];
        let s = q.iter().fold(0.0_f64, |acc, t| acc.max(t.abs()));
        acc += s.ln();
        p = [q[0] / s, q[1] / s, q[2] / s, q[3] / s];
    }
    let lhs = acc / n as f64;
    let rhs = (mu - 1.0).ln();
    GrowthCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-9,
    }
}
