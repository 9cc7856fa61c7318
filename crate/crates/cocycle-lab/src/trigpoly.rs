//! Real trigonometric polynomials, their complexified evaluation on
//! horizontal lines, and the Laurent-polynomial form used for root-based
//! quantities (zero radii, Jensen/Mahler circle integrals).

use crate::roots::polynomial_roots;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Relative distance to the unit circle below which root-based circle
/// integrals are refused.
pub const TAU_CIRCLE: f64 = 1e-9;

/// A real trigonometric polynomial
/// `v(x) = 2 Σ_{n=1..M} (a_n cos(2πnx) + b_n sin(2πnx))`,
/// stored by its cosine and sine coefficient lists.  The equivalent complex
/// form is `v(x) = Σ_{1≤|j|≤M} λ_j e^{2πijx}` with `λ_j = a_j − i·b_j` and
/// `λ_{−j} = conj(λ_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TrigPolyRaw", into = "TrigPolyRaw")]
pub struct TrigPoly {
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TrigPolyRaw {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TryFrom<TrigPolyRaw> for TrigPoly {
    type Error = Error;
    fn try_from(raw: TrigPolyRaw) -> Result<Self> {
        TrigPoly::new(raw.a, raw.b)
    }
}

impl From<TrigPoly> for TrigPolyRaw {
    fn from(v: TrigPoly) -> Self {
        TrigPolyRaw { a: v.a, b: v.b }
    }
}

impl TrigPoly {
    /// Validates the coefficient lists: equal length ≥ 1, finite entries, and
    /// a non-vanishing top harmonic `|a_M| + |b_M| > 0`.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidModel(format!(
                "coefficient lists differ in length: {} vs {}",
                a.len(),
                b.len()
            )));
        }
        if a.is_empty() {
            return Err(Error::InvalidModel("empty coefficient lists".into()));
        }
        if a.iter().chain(b.iter()).any(|t| !t.is_finite()) {
            return Err(Error::InvalidModel("non-finite coefficient".into()));
        }
        let m = a.len();
        if a[m - 1] == 0.0 && b[m - 1] == 0.0 {
            return Err(Error::InvalidModel(
                "top harmonic has zero coefficients; drop it from the lists".into(),
            ));
        }
        Ok(TrigPoly { a, b })
    }

    /// Cosine-only convenience constructor.
    pub fn from_cos(a: Vec<f64>) -> Result<Self> {
        let b = vec![0.0; a.len()];
        TrigPoly::new(a, b)
    }

    /// Degree M (index of the top harmonic).
    pub fn degree(&self) -> usize {
        self.a.len()
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.a
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.b
    }

    /// Complex coefficient `λ_j = a_j − i·b_j` for `1 ≤ j ≤ M`.
    pub fn lambda(&self, j: usize) -> Complex64 {
        Complex64::new(self.a[j - 1], -self.b[j - 1])
    }

    /// `|λ_M|`, the modulus of the top coefficient.
    pub fn lambda_top_abs(&self) -> f64 {
        self.lambda(self.degree()).norm()
    }

    /// `Σ_{n=1..M} |λ_n|`.
    pub fn lambda_abs_sum(&self) -> f64 {
        (1..=self.degree()).map(|j| self.lambda(j).norm()).sum()
    }

    /// Greatest common divisor of the active harmonics
    /// `{ n : |a_n| + |b_n| > 0 }`.  Always ≥ 1 and divides the degree.
    pub fn gcd_frequency(&self) -> usize {
        let mut d = 0usize;
        for j in 1..=self.degree() {
            if self.a[j - 1] != 0.0 || self.b[j - 1] != 0.0 {
                d = gcd(d, j);
            }
        }
        d.max(1)
    }

    /// Evaluates `v(x + iε)` from the complex form.
    pub fn eval_complex(&self, x: f64, eps: f64) -> Complex64 {
        self.strip_evaluator(eps).eval(x)
    }

    /// Evaluates the real `v(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_complex(x, 0.0).re
    }

    /// Precomputes the height-dependent coefficient products so that repeated
    /// evaluations along one horizontal line cost one `sin_cos` plus `2M`
    /// complex multiply-adds.
    pub fn strip_evaluator(&self, eps: f64) -> StripEval {
        let m = self.degree();
        let mut fwd = Vec::with_capacity(m);
        let mut bwd = Vec::with_capacity(m);
        for j in 1..=m {
            let lj = self.lambda(j);
            let decay = (-TAU * j as f64 * eps).exp();
            fwd.push(lj * decay);
            bwd.push(lj.conj() / decay);
        }
        StripEval { fwd, bwd }
    }

    /// Laurent polynomial `P` with `P(e^{2πix}) = E − v(x + iε)`; the span of
    /// its exponents is exactly `[−M, M]`.
    pub fn to_laurent(&self, e: f64, eps: f64) -> LaurentPoly {
        let m = self.degree();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * m + 1];
        coeffs[m] = Complex64::new(e, 0.0);
        for j in 1..=m {
            let lj = self.lambda(j);
            let decay = (-TAU * j as f64 * eps).exp();
            coeffs[m + j] -= lj * decay;
            coeffs[m - j] -= lj.conj() / decay;
        }
        // Ends are nonzero by the top-harmonic invariant.
        LaurentPoly::new(-(m as i64), coeffs).expect("span 2M with nonzero ends")
    }
}

/// Reusable evaluator for `v(· + iε)` at a fixed height ε.
#[derive(Debug, Clone)]
pub struct StripEval {
    /// `λ_j e^{−2πjε}`, j = 1..M.
    fwd: Vec<Complex64>,
    /// `conj(λ_j) e^{2πjε}`, j = 1..M.
    bwd: Vec<Complex64>,
}

impl StripEval {
    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        let (s, c) = (TAU * x).sin_cos();
        let w = Complex64::new(c, s);
        let winv = w.conj(); // |w| = 1
        let mut wj = Complex64::new(1.0, 0.0);
        let mut wnj = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (f, b) in self.fwd.iter().zip(&self.bwd) {
            wj *= w;
            wnj *= winv;
            acc += f * wj + b * wnj;
        }
        acc
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A Laurent polynomial `P(w) = Σ_{k=lo..hi} coeffs[k−lo] w^k`, normalized so
/// the first and last stored coefficients are nonzero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LaurentRaw", into = "LaurentRaw")]
pub struct LaurentPoly {
    lo: i64,
    coeffs: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct LaurentRaw {
    lo: i64,
    coeffs: Vec<[f64; 2]>,
}

impl TryFrom<LaurentRaw> for LaurentPoly {
    type Error = Error;
    fn try_from(raw: LaurentRaw) -> Result<Self> {
        let coeffs = raw
            .coeffs
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        LaurentPoly::new(raw.lo, coeffs)
    }
}

impl From<LaurentPoly> for LaurentRaw {
    fn from(p: LaurentPoly) -> Self {
        LaurentRaw {
            lo: p.lo,
            coeffs: p.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl LaurentPoly {
    /// Normalizing constructor: trims exactly-zero end coefficients, adjusting
    /// `lo`; rejects the zero polynomial and non-finite coefficients.
    pub fn new(lo: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidModel("non-finite Laurent coefficient".into()));
        }
        let first = coeffs.iter().position(|c| c.norm() != 0.0);
        let Some(first) = first else {
            return Err(Error::InvalidModel("zero Laurent polynomial".into()));
        };
        let last = coeffs
            .iter()
            .rposition(|c| c.norm() != 0.0)
            .expect("nonzero entry");
        Ok(LaurentPoly {
            lo: lo + first as i64,
            coeffs: coeffs[first..=last].to_vec(),
        })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    /// Number of roots in `C \ {0}` (degree of the ordinary part).
    pub fn span(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `w^k`, zero outside the stored range.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k < self.lo || k > self.hi() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k - self.lo) as usize]
        }
    }

    /// Ascending coefficients of the ordinary part `w^{−lo} P(w)`.
    pub fn ordinary_coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * w + c;
        }
        acc * w.powi(self.lo as i32)
    }

    /// Roots of the ordinary part; none of them are zero because the constant
    /// term is nonzero after normalization.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        polynomial_roots(&self.coeffs)
    }

    /// `∫₀¹ log|P(e^{2πix})| dx` through the root factorization: the integral
    /// equals `log|coeffs[hi]| + Σ_{|r|>1} log|r|` (the `w^{lo}` factor has
    /// zero mean on the circle).
    ///
    /// Errors when any root is within [`TAU_CIRCLE`] of the unit circle,
    /// where the identity degrades.
    pub fn circle_log_integral(&self) -> Result<f64> {
        let roots = self.roots()?;
        let mut acc = self.coeffs.last().expect("nonempty").norm().ln();
        for r in roots {
            let modulus = r.norm();
            if (modulus - 1.0).abs() < TAU_CIRCLE {
                return Err(Error::NearSingularIntegral {
                    modulus,
                    tol: TAU_CIRCLE,
                });
            }
            if modulus > 1.0 {
                acc += modulus.ln();
            }
        }
        Ok(acc)
    }
}
