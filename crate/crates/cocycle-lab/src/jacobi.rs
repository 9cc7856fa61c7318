//! Transfer cocycles for operators with Laurent-polynomial hopping and
//! trigonometric-polynomial potential: complexified step matrices, the mean
//! log-modulus of the hopping, degree-bookkeeping case classification, the
//! auxiliary minimum function and its Herman radii, asymptotic lower bounds,
//! half-integer acceleration, and subcriticality verdicts.

use crate::circleopt::{golden_min, largest_level_crossing, zero_radius, DEFAULT_GRID};
use crate::cocycle::{summarize, LEEstimate, Mat2C};
use crate::criteria::{Status, Verdict, STRICT_SLACK};
use crate::trigpoly::{LaurentPoly, StripEval, TrigPoly, TAU, TAU_CIRCLE};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Threshold of the auxiliary minimum used for the hopping Herman radii.
pub const JACOBI_LEVEL: f64 = 4.0;

/// Operator data: hopping Laurent polynomial `c` with coefficients
/// `μ_{N1}..μ_{N2}` and trigonometric potential `v` of degree `M`.
///
/// The constructor insists on `N1 < N2`; a single-harmonic hopping has
/// constant modulus on the circle and belongs to the scalar reduction
/// ([`degenerate_lyapunov`]) instead.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "JacobiRaw", into = "JacobiRaw")]
pub struct JacobiModel {
    c: LaurentPoly,
    v: TrigPoly,
}

#[derive(Serialize, Deserialize)]
struct JacobiRaw {
    c: LaurentPoly,
    v: TrigPoly,
}

impl TryFrom<JacobiRaw> for JacobiModel {
    type Error = Error;
    fn try_from(raw: JacobiRaw) -> Result<Self> {
        JacobiModel::new(raw.c, raw.v)
    }
}

impl From<JacobiModel> for JacobiRaw {
    fn from(m: JacobiModel) -> Self {
        JacobiRaw { c: m.c, v: m.v }
    }
}

impl JacobiModel {
    pub fn new(c: LaurentPoly, v: TrigPoly) -> Result<Self> {
        if c.span() == 0 {
            return Err(Error::InvalidModel(
                "single-harmonic hopping has constant modulus; use the scalar reduction to the \
                 scalar second-order pipeline"
                    .into(),
            ));
        }
        Ok(JacobiModel { c, v })
    }

    pub fn hopping(&self) -> &LaurentPoly {
        &self.c
    }

    pub fn potential(&self) -> &TrigPoly {
        &self.v
    }

    /// Lowest hopping harmonic `N1`.
    pub fn n1(&self) -> i64 {
        self.c.lo()
    }

    /// Highest hopping harmonic `N2`.
    pub fn n2(&self) -> i64 {
        self.c.hi()
    }

    /// Potential degree `M`.
    pub fn top_degree(&self) -> usize {
        self.v.degree()
    }
}

/// Sign of `2M − (N2 − N1)`: which side of the cocycle grows faster in the
/// strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    /// `2M > N2 − N1`: the potential column dominates.
    PotentialDominant,
    /// `2M = N2 − N1`: both grow at the same exponential rate.
    Balanced,
    /// `2M < N2 − N1`: the hopping entries dominate.
    HoppingDominant,
}

/// Case classification of a model by its degree bookkeeping.
pub fn jacobi_case(m: &JacobiModel) -> CaseTag {
    let gap = 2 * m.top_degree() as i64 - (m.n2() - m.n1());
    match gap.cmp(&0) {
        std::cmp::Ordering::Greater => CaseTag::PotentialDominant,
        std::cmp::Ordering::Equal => CaseTag::Balanced,
        std::cmp::Ordering::Less => CaseTag::HoppingDominant,
    }
}

/// Strip evaluator for the two hopping entries at height `ε`.
///
/// `forward(x) = c(x+iε)` and `reflected(x) = conj(c(x−iε−α))`; the product
/// of the two is the determinant of the step matrix.
struct HoppingStrip {
    lo: i64,
    /// `μ_j e^{−2πjε}`, ascending `j`.
    fwd: Vec<Complex64>,
    /// `conj(μ_j) e^{2πjε} e^{2πijα}`, ascending `j`.
    rev: Vec<Complex64>,
}

impl HoppingStrip {
    fn new(c: &LaurentPoly, alpha: f64, eps: f64) -> Self {
        let lo = c.lo();
        let mut fwd = Vec::with_capacity(c.span() + 1);
        let mut rev = Vec::with_capacity(c.span() + 1);
        for j in lo..=c.hi() {
            let mu = c.coeff(j);
            let decay = (-TAU * j as f64 * eps).exp();
            fwd.push(mu * decay);
            rev.push(mu.conj() * Complex64::from_polar(1.0 / decay, TAU * j as f64 * alpha));
        }
        HoppingStrip { lo, fwd, rev }
    }

    /// `(c(x+iε), conj(c(x−iε−α)))`.
    fn eval(&self, x: f64) -> (Complex64, Complex64) {
        let w = Complex64::from_polar(1.0, TAU * x);
        let mut z = Complex64::from_polar(1.0, TAU * self.lo as f64 * x);
        let mut forward = Complex64::new(0.0, 0.0);
        let mut reflected = Complex64::new(0.0, 0.0);
        for (f, r) in self.fwd.iter().zip(&self.rev) {
            forward += f * z;
            reflected += r * z.conj();
            z *= w;
        }
        (forward, reflected)
    }
}

fn step_from_parts(t: Complex64, forward: Complex64, reflected: Complex64) -> Mat2C {
    Mat2C([t, -reflected, forward, Complex64::new(0.0, 0.0)])
}

/// Step matrix `((E − v(x+iε), −conj(c(x−iε−α))), (c(x+iε), 0))` for raw
/// hopping data; accepts a single-harmonic `c` (which the model type does
/// not).
pub fn jacobi_step_with(
    c: &LaurentPoly,
    v: &TrigPoly,
    e: f64,
    alpha: f64,
    x: f64,
    eps: f64,
) -> Mat2C {
    let strip = HoppingStrip::new(c, alpha, eps);
    let (forward, reflected) = strip.eval(x);
    step_from_parts(
        Complex64::new(e, 0.0) - v.eval_complex(x, eps),
        forward,
        reflected,
    )
}

/// Step matrix of a model at phase `x` and strip height `eps`.
pub fn jacobi_step(m: &JacobiModel, e: f64, alpha: f64, x: f64, eps: f64) -> Mat2C {
    jacobi_step_with(&m.c, &m.v, e, alpha, x, eps)
}

/// Mean log-modulus of the hopping over the circle, with the circle-distance
/// diagnosis of its roots.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularityReport {
    /// Some hopping root lies within `TAU_CIRCLE` of the unit circle.
    pub is_singular: bool,
    /// The offending roots (empty when regular).
    pub circle_roots: Vec<Complex64>,
    /// `∫₀¹ log|c| dx`; roots on the circle contribute zero, so the value is
    /// the regularized integral in the singular case.
    pub i_c: f64,
}

/// `∫ log|c|` via the root factorization, regularized across circle roots.
pub fn mean_log_c(m: &JacobiModel) -> Result<SingularityReport> {
    hopping_mean(&m.c)
}

fn hopping_mean(c: &LaurentPoly) -> Result<SingularityReport> {
    let roots = c.roots()?;
    let mut i_c = c.coeff(c.hi()).norm().ln();
    let mut circle_roots = Vec::new();
    for r in roots {
        let modulus = r.norm();
        if (modulus - 1.0).abs() < TAU_CIRCLE {
            circle_roots.push(r);
        } else if modulus > 1.0 {
            i_c += modulus.ln();
        }
    }
    Ok(SingularityReport {
        is_singular: !circle_roots.is_empty(),
        circle_roots,
        i_c,
    })
}

fn ratio_min(numerator: impl Fn(f64) -> f64, strip: &HoppingStrip, grid_n: usize) -> f64 {
    assert!(grid_n >= 16, "ratio minimization requires grid_n >= 16");
    let f = |x: f64| {
        let (forward, reflected) = strip.eval(x);
        let denom = forward.norm() * reflected.norm();
        if denom == 0.0 {
            f64::INFINITY
        } else {
            numerator(x) / denom
        }
    };
    let vals: Vec<f64> = (0..grid_n).map(|k| f(k as f64 / grid_n as f64)).collect();
    let mut best = f64::MAX;
    for i in 0..grid_n {
        let prev = vals[(i + grid_n - 1) % grid_n];
        let next = vals[(i + 1) % grid_n];
        best = best.min(vals[i]);
        if vals[i] <= prev && vals[i] <= next {
            let center = i as f64 / grid_n as f64;
            let h = 1.0 / grid_n as f64;
            let (_, fv) = golden_min(f, center - h, center + h, 1e-10);
            best = best.min(fv);
        }
    }
    best
}

/// Auxiliary minimum `min_x |E − v(x+iε)|² / |c(x+iε) c(x−iε−α)|`.
pub fn jacobi_m(m: &JacobiModel, e: f64, alpha: f64, eps: f64, grid_n: usize) -> f64 {
    let strip = HoppingStrip::new(&m.c, alpha, eps);
    let se = m.v.strip_evaluator(eps);
    ratio_min(
        |x| {
            let val = se.eval(x);
            (e - val.re).powi(2) + val.im.powi(2)
        },
        &strip,
        grid_n,
    )
}

/// Energy-independent variant: the numerator replaces `|E − v|` by the
/// worst-case distance `|v(x+iε)| − 2(Σ|μ_j| + Σ|λ_j|)` of `v(x+iε)` to any
/// energy in the spectral hull, clamped at zero where that distance is not
/// yet positive.
pub fn jacobi_m_uniform(m: &JacobiModel, alpha: f64, eps: f64, grid_n: usize) -> f64 {
    let strip = HoppingStrip::new(&m.c, alpha, eps);
    let se = m.v.strip_evaluator(eps);
    let hull = spectral_hull_radius(m);
    ratio_min(
        |x| (se.eval(x).norm() - hull).max(0.0).powi(2),
        &strip,
        grid_n,
    )
}

/// `2(Σ|μ_j| + Σ|λ_j|)`: every spectrum energy has modulus at most this.
pub fn spectral_hull_radius(m: &JacobiModel) -> f64 {
    let mu_sum: f64 = (m.n1()..=m.n2()).map(|j| m.c.coeff(j).norm()).sum();
    2.0 * (mu_sum + m.v.lambda_abs_sum())
}

/// Large-`ε` limit of the auxiliary minimum for balanced models:
/// `|λ_M|² / |μ_{N1} μ_{N2}|`.
pub fn balanced_limit(m: &JacobiModel) -> f64 {
    let lam = m.v.lambda_top_abs();
    lam * lam / (m.c.coeff(m.n1()).norm() * m.c.coeff(m.n2()).norm())
}

fn require_crossing_exists(m: &JacobiModel) -> Result<()> {
    match jacobi_case(m) {
        CaseTag::PotentialDominant => Ok(()),
        CaseTag::Balanced => {
            if balanced_limit(m) > JACOBI_LEVEL {
                Ok(())
            } else {
                Err(Error::UnsupportedCase(
                    "balanced model fails the gate: the auxiliary minimum saturates below the \
                     threshold"
                        .into(),
                ))
            }
        }
        CaseTag::HoppingDominant => Err(Error::UnsupportedCase(
            "hopping-dominant model: the auxiliary minimum decays and never crosses the threshold"
                .into(),
        )),
    }
}

/// Largest `ε ≥ 0` with `jacobi_m(ε) = 4`.
///
/// Errors with `UnsupportedCase` when no crossing exists: hopping-dominant
/// models, and balanced models whose limit `|λ_M|²/|μ_{N1}μ_{N2}|` stays at
/// or below the threshold.
pub fn jacobi_herman_radius(m: &JacobiModel, e: f64, alpha: f64) -> Result<f64> {
    require_crossing_exists(m)?;
    let zr = zero_radius(&m.v, e)?;
    largest_level_crossing(
        |eps| jacobi_m(m, e, alpha, eps, DEFAULT_GRID),
        JACOBI_LEVEL,
        zr,
    )
}

/// Largest `ε ≥ 0` with `jacobi_m_uniform(ε) = 4`.
pub fn jacobi_herman_radius_uniform(m: &JacobiModel, alpha: f64) -> Result<f64> {
    require_crossing_exists(m)?;
    // The clamped numerator vanishes up to the height where min |v(x+iε)|
    // clears the hull radius; bracket the final crossing from there.
    let zr_v = zero_radius(&m.v, 0.0)?;
    let hull = spectral_hull_radius(m);
    let positive_from = largest_level_crossing(
        |eps| crate::circleopt::min_modulus(&m.v, 0.0, eps, DEFAULT_GRID),
        hull,
        zr_v,
    )?;
    largest_level_crossing(
        |eps| jacobi_m_uniform(m, alpha, eps, DEFAULT_GRID),
        JACOBI_LEVEL,
        positive_from,
    )
}

/// Asymptotic intercept of the strip exponent and the induced lower bound at
/// the real axis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HermanBound {
    pub case: CaseTag,
    /// Intercept of the asymptote of the raw (unnormalized) exponent.
    pub constant: f64,
    /// Mean log-modulus of the hopping (regularized when singular).
    pub i_c: f64,
    /// Convexity bound for the normalized exponent at `ε = 0`:
    /// `max(constant − i_c, 0)`.
    pub bound: f64,
    /// The hopping has roots on the unit circle; `i_c` is regularized.
    pub singular: bool,
}

/// Intercept of the asymptote `L = (slope)·ε + constant` of the raw exponent,
/// by case: `log|λ_M|` when the potential dominates, the balanced two-branch
/// constant when the rates tie, and `(log|μ_{N1}| + log|μ_{N2}|)/2` when the
/// hopping dominates.
pub fn asymptotic_constant(m: &JacobiModel, alpha: f64) -> f64 {
    match jacobi_case(m) {
        CaseTag::PotentialDominant => m.v.lambda_top_abs().ln(),
        CaseTag::Balanced => balanced_constant(m, alpha),
        CaseTag::HoppingDominant => {
            0.5 * (m.c.coeff(m.n1()).norm().ln() + m.c.coeff(m.n2()).norm().ln())
        }
    }
}

/// Slope of the same asymptote, in units of `2π`: `M` for the potential-
/// dominant and balanced cases, `(N2 − N1)/2` for the hopping-dominant one.
pub fn asymptotic_slope(m: &JacobiModel) -> f64 {
    match jacobi_case(m) {
        CaseTag::PotentialDominant | CaseTag::Balanced => m.top_degree() as f64,
        CaseTag::HoppingDominant => 0.5 * (m.n2() - m.n1()) as f64,
    }
}

/// Balanced-case intercept: `log max_± |(λ_M ± √(λ_M² − 4 conj(μ_{N2}) μ_{N1}
/// e^{2πiMα})) / 2|`.  Depends on the frequency through the phase factor.
pub fn balanced_constant(m: &JacobiModel, alpha: f64) -> f64 {
    let lam = m.v.lambda(m.top_degree());
    let cross = 4.0
        * m.c.coeff(m.n2()).conj()
        * m.c.coeff(m.n1())
        * Complex64::from_polar(1.0, TAU * m.top_degree() as f64 * alpha);
    let disc = (lam * lam - cross).sqrt();
    let plus = (lam + disc) / 2.0;
    let minus = (lam - disc) / 2.0;
    plus.norm().max(minus.norm()).ln()
}

/// Lower bound `L(0;E) ≥ max(constant − I(c), 0)` obtained by convexity from
/// the asymptote; reported with a warning flag (never an error) for singular
/// hopping, where `I(c)` is the regularized mean.
pub fn jacobi_herman_bound(m: &JacobiModel, alpha: f64) -> Result<HermanBound> {
    let report = mean_log_c(m)?;
    let constant = asymptotic_constant(m, alpha);
    Ok(HermanBound {
        case: jacobi_case(m),
        constant,
        i_c: report.i_c,
        bound: (constant - report.i_c).max(0.0),
        singular: report.is_singular,
    })
}

/// Gate for the balanced criterion: `|μ_{N1} μ_{N2}| / |λ_M|² < 1/4`.
pub fn balanced_gate(m: &JacobiModel) -> (f64, bool) {
    let lam = m.v.lambda_top_abs();
    let ratio = m.c.coeff(m.n1()).norm() * m.c.coeff(m.n2()).norm() / (lam * lam);
    (ratio, ratio < 0.25)
}

/// Subcriticality verdict for one energy: the Herman radius of the auxiliary
/// minimum against the threshold `(I(c) − constant) / (2π(M−1))`.
///
/// Routing, in order: hopping-dominant models are unsupported; the balanced
/// gate must hold; singular hopping caps every conclusion at "the exponent
/// vanishes" and returns `Inconclusive`; `M = 1` leaves no criterion
/// denominator, so the verdict is the sign of `constant − I(c)` (flagged in
/// the witness); otherwise a positive asymptotic bound proves
/// supercriticality at every energy and the radius comparison proves
/// subcriticality.
pub fn jacobi_subcritical(m: &JacobiModel, e: f64, alpha: f64) -> Result<Verdict> {
    if jacobi_case(m) == CaseTag::HoppingDominant {
        return Err(Error::UnsupportedCase(
            "no subcriticality criterion when the hopping dominates".into(),
        ));
    }
    if jacobi_case(m) == CaseTag::Balanced {
        let (ratio, ok) = balanced_gate(m);
        if !ok {
            return Ok(Verdict {
                status: Status::Inconclusive,
                lhs: ratio,
                rhs: 0.25,
                witness: "balanced gate failed: |mu_lo mu_hi| / |lambda_M|^2 must stay below 1/4"
                    .into(),
            });
        }
    }
    let report = mean_log_c(m)?;
    let constant = asymptotic_constant(m, alpha);
    let net = constant - report.i_c;
    if report.is_singular {
        let detail = if net < -STRICT_SLACK {
            "criterion passes, but singular hopping caps the conclusion at zero Lyapunov \
             exponent only"
        } else {
            "singular hopping: only zero-exponent conclusions are available and the criterion \
             does not decide this energy"
        };
        return Ok(Verdict {
            status: Status::Inconclusive,
            lhs: net,
            rhs: 0.0,
            witness: format!("singular hopping: {detail}"),
        });
    }
    let m_deg = m.top_degree();
    if m_deg == 1 {
        let (status, tail) = if net < -STRICT_SLACK {
            (
                Status::SubcriticalProven,
                "negative, so the strip exponent vanishes",
            )
        } else if net > STRICT_SLACK {
            (
                Status::SupercriticalProven,
                "positive, so the exponent is positive at every energy",
            )
        } else {
            (Status::Inconclusive, "balanced exactly: critical boundary")
        };
        return Ok(Verdict {
            status,
            lhs: net,
            rhs: 0.0,
            witness: format!(
                "degenerate top degree: classified by the sign of the asymptotic constant, {tail}"
            ),
        });
    }
    if net > STRICT_SLACK {
        return Ok(Verdict {
            status: Status::SupercriticalProven,
            lhs: net,
            rhs: 0.0,
            witness: "asymptotic lower bound for the exponent is positive at every energy".into(),
        });
    }
    if net.abs() <= STRICT_SLACK {
        return Ok(Verdict {
            status: Status::Inconclusive,
            lhs: net,
            rhs: 0.0,
            witness: "asymptotic constant balances the hopping mean exactly: critical boundary"
                .into(),
        });
    }
    let rhs = -net / (TAU * (m_deg - 1) as f64);
    let lhs = jacobi_herman_radius(m, e, alpha)?;
    if lhs < rhs {
        Ok(Verdict {
            status: Status::SubcriticalProven,
            lhs,
            rhs,
            witness: format!(
                "radius {lhs:.6} sits below the strip-width threshold {rhs:.6}; the exponent \
                 vanishes on a neighborhood of the real axis"
            ),
        })
    } else {
        Ok(Verdict {
            status: Status::Inconclusive,
            lhs,
            rhs,
            witness: format!(
                "radius {lhs:.6} does not fall below the strip-width threshold {rhs:.6}"
            ),
        })
    }
}

/// Energy-independent analogue of [`jacobi_subcritical`] through the clamped
/// auxiliary minimum.
pub fn jacobi_subcritical_uniform(m: &JacobiModel, alpha: f64) -> Result<Verdict> {
    if jacobi_case(m) == CaseTag::HoppingDominant {
        return Err(Error::UnsupportedCase(
            "no subcriticality criterion when the hopping dominates".into(),
        ));
    }
    if jacobi_case(m) == CaseTag::Balanced {
        let (ratio, ok) = balanced_gate(m);
        if !ok {
            return Ok(Verdict {
                status: Status::Inconclusive,
                lhs: ratio,
                rhs: 0.25,
                witness: "balanced gate failed: |mu_lo mu_hi| / |lambda_M|^2 must stay below 1/4"
                    .into(),
            });
        }
    }
    let report = mean_log_c(m)?;
    let constant = asymptotic_constant(m, alpha);
    let net = constant - report.i_c;
    if report.is_singular || m.top_degree() == 1 || net >= -STRICT_SLACK {
        // Same routing as the per-energy form; delegate for the shared paths.
        return jacobi_subcritical(m, 0.0, alpha);
    }
    let rhs = -net / (TAU * (m.top_degree() - 1) as f64);
    let lhs = jacobi_herman_radius_uniform(m, alpha)?;
    if lhs < rhs {
        Ok(Verdict {
            status: Status::SubcriticalProven,
            lhs,
            rhs,
            witness: format!(
                "uniform radius {lhs:.6} sits below the strip-width threshold {rhs:.6} for every \
                 energy at once"
            ),
        })
    } else {
        Ok(Verdict {
            status: Status::Inconclusive,
            lhs,
            rhs,
            witness: format!(
                "uniform radius {lhs:.6} does not fall below the strip-width threshold {rhs:.6}"
            ),
        })
    }
}

fn hopping_phase_exponent(
    se: &StripEval,
    strip: &HoppingStrip,
    e: f64,
    alpha: f64,
    x0: f64,
    n: usize,
) -> f64 {
    let mut p = Mat2C::identity();
    let mut acc = 0.0_f64;
    let mut x = x0 - x0.floor();
    for _ in 0..n {
        let t = Complex64::new(e, 0.0) - se.eval(x);
        let (forward, reflected) = strip.eval(x);
        p = step_from_parts(t, forward, reflected).mul(&p);
        let s = p.max_abs();
        acc += s.ln();
        p = p.scale(1.0 / s);
        x += alpha;
        x -= x.floor();
    }
    acc / n as f64
}

/// Raw exponent `L(α, A_ε)` of the hopping cocycle, before subtracting the
/// hopping mean; accepts a single-harmonic `c`.
pub fn jacobi_lyapunov_with(
    c: &LaurentPoly,
    v: &TrigPoly,
    e: f64,
    alpha: f64,
    eps: f64,
    n: usize,
    phases: usize,
) -> LEEstimate {
    assert!(n >= 1 && phases >= 1, "estimator needs n, phases >= 1");
    let se = v.strip_evaluator(eps);
    let strip = HoppingStrip::new(c, alpha, eps);
    let per_phase: Vec<f64> = crate::thread_pool().install(|| {
        use rayon::prelude::*;
        (0..phases)
            .into_par_iter()
            .map(|k| hopping_phase_exponent(&se, &strip, e, alpha, k as f64 / phases as f64, n))
            .collect()
    });
    summarize(per_phase, n, alpha, eps)
}

/// Raw exponent of a model's cocycle (no hopping-mean normalization).
pub fn jacobi_lyapunov_raw(
    m: &JacobiModel,
    e: f64,
    alpha: f64,
    eps: f64,
    n: usize,
    phases: usize,
) -> LEEstimate {
    jacobi_lyapunov_with(&m.c, &m.v, e, alpha, eps, n, phases)
}

/// Normalized exponent `L(ε;E) = L(α, A_ε) − ∫log|c|`.
///
/// Errors with `SingularHopping` when the hopping has circle roots: the mean
/// is only regularized there and the normalized exponent loses its meaning.
pub fn jacobi_lyapunov(
    m: &JacobiModel,
    e: f64,
    alpha: f64,
    eps: f64,
    n: usize,
    phases: usize,
) -> Result<LEEstimate> {
    let report = mean_log_c(m)?;
    if report.is_singular {
        return Err(Error::SingularHopping(
            "hopping has roots on the unit circle; the normalized exponent is undefined".into(),
        ));
    }
    let mut est = jacobi_lyapunov_raw(m, e, alpha, eps, n, phases);
    est.value -= report.i_c;
    Ok(est)
}

/// Acceleration of the hopping cocycle, snapped to the half-integer lattice.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct JacobiAcceleration {
    /// Raw slope `(ΔL)/(2πΔε)` of the raw exponent.
    pub raw: f64,
    /// Nearest half-integer.
    pub snapped: f64,
}

/// Finite-difference acceleration at `eps` (central when `eps − h ≥ 0`,
/// forward otherwise), snapped to `½ℤ`; a snap distance above `1/8` is
/// reported as an error.  The hopping mean cancels in the difference, so the
/// raw exponent is used and singular hopping is fine.
pub fn jacobi_acceleration(
    m: &JacobiModel,
    e: f64,
    alpha: f64,
    eps: f64,
    h: f64,
    n: usize,
    phases: usize,
) -> Result<JacobiAcceleration> {
    assert!(h > 0.0, "step h must be positive");
    let raw = if eps - h >= 0.0 {
        let hi = jacobi_lyapunov_raw(m, e, alpha, eps + h, n, phases).value;
        let lo = jacobi_lyapunov_raw(m, e, alpha, eps - h, n, phases).value;
        (hi - lo) / (2.0 * TAU * h)
    } else {
        let hi = jacobi_lyapunov_raw(m, e, alpha, eps + h, n, phases).value;
        let lo = jacobi_lyapunov_raw(m, e, alpha, eps, n, phases).value;
        (hi - lo) / (TAU * h)
    };
    let snapped = (2.0 * raw).round() / 2.0;
    if (raw - snapped).abs() > 0.125 {
        return Err(Error::UnresolvedAcceleration { raw, quantum: 0.5 });
    }
    Ok(JacobiAcceleration { raw, snapped })
}

/// `Some(μ w^k)` data of a single-harmonic hopping, `None` otherwise.
pub fn degenerate_hopping(c: &LaurentPoly) -> Option<(Complex64, i64)> {
    if c.span() == 0 {
        Some((c.coeff(c.lo()), c.lo()))
    } else {
        None
    }
}

/// Scalar reduction for single-harmonic hopping `c = μ w^k`: the normalized
/// exponent equals the scalar second-order exponent of the rescaled data
/// `(v/|μ|, E/|μ|)` at the same height, because conjugation absorbs the
/// phase and the harmonic shift while `∫log|c| = log|μ|` absorbs the scale.
pub fn degenerate_lyapunov(
    c: &LaurentPoly,
    v: &TrigPoly,
    e: f64,
    alpha: f64,
    eps: f64,
    n: usize,
    phases: usize,
) -> Result<LEEstimate> {
    let Some((mu, _)) = degenerate_hopping(c) else {
        return Err(Error::Precondition(
            "scalar reduction requires a single-harmonic hopping".into(),
        ));
    };
    let rho = mu.norm();
    let scaled = TrigPoly::new(
        v.cos_coeffs().iter().map(|a| a / rho).collect(),
        v.sin_coeffs().iter().map(|b| b / rho).collect(),
    )?;
    Ok(crate::cocycle::lyapunov(
        &scaled,
        e / rho,
        alpha,
        eps,
        n,
        phases,
    ))
}
