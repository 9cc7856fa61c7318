//! Decidable regime criteria: the Herman-radius comparison for individual
//! energies and uniformly over the spectrum, plus the closed-form sufficient
//! conditions obtained from root bounds on the associated real polynomial.

use crate::circleopt::{herman_radius, herman_radius_uniform};
use crate::trigpoly::{TrigPoly, TAU};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Strict-inequality slack: a closed-form check only claims a proof when the
/// margin beats floating-point noise.
pub(crate) const STRICT_SLACK: f64 = 1e-12;

/// Outcome of a decidable criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    SubcriticalProven,
    Inconclusive,
    SupercriticalProven,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::SubcriticalProven => "SubcriticalProven",
            Status::Inconclusive => "Inconclusive",
            Status::SupercriticalProven => "SupercriticalProven",
        })
    }
}

/// Criterion verdict: the compared quantities and a human-readable reason.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub lhs: f64,
    pub rhs: f64,
    pub witness: String,
}

/// Classification when only one frequency is active (`d = M`): the decision
/// is exact in the top-coefficient modulus.
fn single_frequency_verdict(lam: f64) -> Verdict {
    if (lam - 1.0).abs() <= STRICT_SLACK {
        Verdict {
            status: Status::Inconclusive,
            lhs: lam,
            rhs: 1.0,
            witness: "single active frequency at modulus one: critical case, not decided here"
                .into(),
        }
    } else if lam > 1.0 {
        Verdict {
            status: Status::SupercriticalProven,
            lhs: lam,
            rhs: 1.0,
            witness: "single active frequency with top-coefficient modulus above one".into(),
        }
    } else {
        Verdict {
            status: Status::SubcriticalProven,
            lhs: lam,
            rhs: 1.0,
            witness: "single active frequency with top-coefficient modulus below one".into(),
        }
    }
}

fn supercritical_top_verdict(lam: f64) -> Verdict {
    Verdict {
        status: Status::SupercriticalProven,
        lhs: lam,
        rhs: 1.0,
        witness:
            "top-coefficient modulus above one: the exponent is at least log of that modulus at every energy"
                .into(),
    }
}

/// Subcriticality criterion at a single energy: compare the Herman radius
/// `ε_H(E)` against `−log|λ_M| / (2π(M−d))`.  Degenerate `d = M` routes to
/// the exact single-frequency classification; a top modulus above one is
/// supercritical outright.
pub fn subcritical_energy(v: &TrigPoly, e: f64) -> Result<Verdict> {
    let lam = v.lambda_top_abs();
    let m = v.degree();
    let d = v.gcd_frequency();
    if d == m {
        return Ok(single_frequency_verdict(lam));
    }
    if lam > 1.0 {
        return Ok(supercritical_top_verdict(lam));
    }
    let lhs = herman_radius(v, e)?;
    let rhs = -lam.ln() / (TAU * (m - d) as f64);
    let status = if lhs < rhs {
        Status::SubcriticalProven
    } else {
        Status::Inconclusive
    };
    Ok(Verdict {
        status,
        lhs,
        rhs,
        witness: format!(
            "herman radius at energy {e} vs -log(top modulus)/(2pi*(degree - frequency gcd)) with degree {m}, gcd {d}"
        ),
    })
}

/// Uniform criterion over the whole spectrum: same comparison with the
/// uniform Herman radius.
pub fn subcritical_uniform(v: &TrigPoly) -> Result<Verdict> {
    let lam = v.lambda_top_abs();
    let m = v.degree();
    let d = v.gcd_frequency();
    if d == m {
        return Ok(single_frequency_verdict(lam));
    }
    if lam > 1.0 {
        return Ok(supercritical_top_verdict(lam));
    }
    let lhs = herman_radius_uniform(v)?;
    let rhs = -lam.ln() / (TAU * (m - d) as f64);
    let status = if lhs < rhs {
        Status::SubcriticalProven
    } else {
        Status::Inconclusive
    };
    Ok(Verdict {
        status,
        lhs,
        rhs,
        witness: format!(
            "uniform herman radius vs -log(top modulus)/(2pi*(degree - frequency gcd)) with degree {m}, gcd {d}"
        ),
    })
}

/// Real polynomial with ascending coefficients `p(y) = Σ c_k y^k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl RealPoly {
    /// Ascending coefficients; trailing zeros are trimmed.  The zero
    /// polynomial is rejected.
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self> {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() || coeffs.iter().all(|c| *c == 0.0) {
            return Err(Error::InvalidModel("zero polynomial".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidModel(
                "non-finite polynomial coefficient".into(),
            ));
        }
        Ok(RealPoly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, y: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c)
    }
}

/// The radius-comparison polynomial
/// `p(y) = |λ_M| y^M − |λ_{M−1}| y^{M−1} − … − |λ_1| y − (4 + 3 Σ|λ_j|)`,
/// returned with ascending coefficients.  Its unique positive root bounds
/// the uniform Herman radius via `ε ≤ log(R_p)/(2π)`.
pub fn root_poly(v: &TrigPoly) -> RealPoly {
    let m = v.degree();
    let mut coeffs = Vec::with_capacity(m + 1);
    coeffs.push(-(4.0 + 3.0 * v.lambda_abs_sum()));
    for j in 1..m {
        coeffs.push(-v.lambda(j).norm());
    }
    coeffs.push(v.lambda(m).norm());
    RealPoly::new(coeffs).expect("top coefficient is nonzero by construction")
}

/// Upper bound for the positive roots of a polynomial whose leading
/// coefficient is positive: with the monic normalization, if the negative
/// coefficients are `−b_i` at distance `m_i` below the leading term and
/// there are `k` of them, the bound is `max_i (k·b_i)^{1/m_i}`.  Returns 0
/// when no coefficient is negative (then there is no positive root for the
/// single-sign-change shapes this feeds).
pub fn stefanescu_bound(p: &RealPoly) -> f64 {
    let n = p.degree();
    let lead = p.coeffs()[n];
    assert!(
        lead > 0.0,
        "positive-root bound needs a positive leading coefficient"
    );
    let negatives: Vec<(usize, f64)> = p
        .coeffs()
        .iter()
        .take(n)
        .enumerate()
        .filter(|(_, c)| **c < 0.0)
        .map(|(i, c)| (n - i, -c / lead))
        .collect();
    let k = negatives.len() as f64;
    negatives
        .iter()
        .map(|(gap, b)| (k * b).powf(1.0 / *gap as f64))
        .fold(0.0, f64::max)
}

/// Unique positive root of a single-sign-change polynomial (positive
/// leading coefficient, every other coefficient ≤ 0, at least one negative,
/// and `p(1) < 0` so the root exceeds 1): bracketed bisection on
/// `[1, stefanescu_bound]` to 1e−10 relative width.
pub fn largest_positive_root(p: &RealPoly) -> Result<f64> {
    let n = p.degree();
    let cs = p.coeffs();
    if n == 0 || cs[n] <= 0.0 {
        return Err(Error::Precondition(
            "positive-root solve needs a positive leading coefficient and degree >= 1".into(),
        ));
    }
    if cs[..n].iter().any(|c| *c > 0.0) || cs[..n].iter().all(|c| *c == 0.0) {
        return Err(Error::Precondition(
            "positive-root solve needs all lower coefficients <= 0 with at least one negative"
                .into(),
        ));
    }
    if p.eval(1.0) >= 0.0 {
        return Err(Error::Precondition(
            "positive-root solve expects p(1) < 0 so the root lies beyond 1".into(),
        ));
    }
    let mut hi = stefanescu_bound(p).max(1.0 + 1e-9);
    // The bound dominates the root in exact arithmetic; absorb rounding.
    let mut guard = 0;
    while p.eval(hi) < 0.0 {
        hi *= 1.0 + 1e-7;
        guard += 1;
        if guard > 200 {
            return Err(Error::Precondition(
                "positive-root bracket failed to close above the upper bound".into(),
            ));
        }
    }
    let mut lo = 1.0_f64;
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if p.eval(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Closed form for the positive root when `p(y) = l2 y² − l1 y − (4+3(l1+l2))`.
pub fn m2_root(l1: f64, l2: f64) -> f64 {
    assert!(l2 > 0.0 && l1 >= 0.0);
    (l1 + (l1 * l1 + 16.0 * l2 + 12.0 * l1 * l2 + 12.0 * l2 * l2).sqrt()) / (2.0 * l2)
}

/// Two-coefficient sufficient condition (`M = 2`, moduli `l1`, `l2`):
/// uniform subcriticality whenever `l1 + 4 l2 + 3 l2² + 3 l1 l2 < 1`.
pub fn closed_form_m2(l1: f64, l2: f64) -> bool {
    assert!(l1 >= 0.0 && l2 > 0.0);
    l1 + 4.0 * l2 + 3.0 * l2 * l2 + 3.0 * l1 * l2 < 1.0 - STRICT_SLACK
}

/// Boundary of the two-coefficient region: the `l1` where the condition
/// turns exact for a given `l2` (so `l2 → 0` gives `l1 → 1`).
pub fn m2_boundary_l1(l2: f64) -> f64 {
    (1.0 - 4.0 * l2 - 3.0 * l2 * l2) / (1.0 + 3.0 * l2)
}

/// Two-frequency generalized-Harper condition on the moduli of the first
/// and top coefficients: `2 l1 < 1` and
/// `8 lM^{1/(M−1)} + 6 l1 lM^{1/(M−1)} + 6 lM^{M/(M−1)} < 1`.
pub fn ghm_condition(l1: f64, l_m: f64, m: usize) -> bool {
    assert!(m >= 2 && l_m > 0.0 && l1 >= 0.0);
    let root = l_m.powf(1.0 / (m as f64 - 1.0));
    let second = 8.0 * root + 6.0 * l1 * root + 6.0 * l_m.powf(m as f64 / (m as f64 - 1.0));
    2.0 * l1 < 1.0 - STRICT_SLACK && second < 1.0 - STRICT_SLACK
}

/// Near-single-frequency box: for `l1 = 1 − δ₁ − δ₂`, any potential with
/// first modulus `l1`, top modulus `lM ≤ μ = (δ₁/(4+3M))^{M−1}` and middle
/// moduli at most `κ = (δ₂/(M−2))·(lM/(2(M−2)))^{M−2}` (for `M > 2`; no
/// middle coefficients exist at `M = 2`) is uniformly subcritical.  Returns
/// `(μ, κ)`.
pub fn amo_limit_params(
    l1: f64,
    m: usize,
    delta1: f64,
    delta2: f64,
    l_m: f64,
) -> Result<(f64, Option<f64>)> {
    if m < 2 {
        return Err(Error::Precondition(
            "box parameters need degree >= 2".into(),
        ));
    }
    if delta1 <= 0.0 || delta2 <= 0.0 {
        return Err(Error::Precondition(
            "box parameters need positive margins".into(),
        ));
    }
    let expect = 1.0 - delta1 - delta2;
    if !(0.0..1.0).contains(&expect) || (l1 - expect).abs() > 1e-9 {
        return Err(Error::Precondition(format!(
            "first modulus must equal 1 - delta1 - delta2 in [0,1); got {l1} vs {expect}"
        )));
    }
    let mu = (delta1 / (4.0 + 3.0 * m as f64)).powi(m as i32 - 1);
    if l_m > mu {
        return Err(Error::Precondition(format!(
            "top modulus {l_m} exceeds the admissible ceiling {mu}"
        )));
    }
    if l_m <= 0.0 {
        return Err(Error::Precondition("top modulus must be positive".into()));
    }
    let kappa = if m == 2 {
        None
    } else {
        let gap = (m - 2) as f64;
        Some((delta2 / gap) * (l_m / (2.0 * gap)).powi(m as i32 - 2))
    };
    Ok((mu, kappa))
}

/// Odd two-term condition at energy zero for
/// `v = 2 b_N sin(2πNx) + 2 b_M sin(2πMx)`:
/// `|b_M|^{1/(M−N)} · max{ (2|b_N|/|b_M|)^{1/(M−N)}, ((4+2|b_N|)/|b_M| + 2)^{1/M} } < 1`.
pub fn odd_two_term_condition(b_n: f64, b_m: f64, n: usize, m: usize) -> Result<bool> {
    if n < 1 || n >= m {
        return Err(Error::Precondition(
            "odd two-term check needs frequencies 1 <= N < M".into(),
        ));
    }
    if b_m == 0.0 {
        return Err(Error::Precondition(
            "top coefficient must be nonzero".into(),
        ));
    }
    let (bn, bm) = (b_n.abs(), b_m.abs());
    let gap = (m - n) as f64;
    let first = (2.0 * bn / bm).powf(1.0 / gap);
    let second = ((4.0 + 2.0 * bn) / bm + 2.0).powf(1.0 / m as f64);
    Ok(bm.powf(1.0 / gap) * first.max(second) < 1.0 - STRICT_SLACK)
}

/// Quadratic-specific sharper form of the odd condition at `(N,M) = (1,2)`:
/// `b2² + b1 b2 + 2 b2 + b1 < 1`.  Implied by the general condition.
pub fn odd_quadratic_condition(b1: f64, b2: f64) -> bool {
    let (b1, b2) = (b1.abs(), b2.abs());
    b2 * b2 + b1 * b2 + 2.0 * b2 + b1 < 1.0 - STRICT_SLACK
}
