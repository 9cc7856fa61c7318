//! Periodic-approximant spectra: discriminants of rational-frequency
//! transfer products, their band sets, continued-fraction spectrum
//! approximation, the odd-potential parity symmetry of the discriminant, the
//! spectral-radius bound, Weyl slopes from truncated half-line resolvents,
//! and the angle-formula consistency check.

use crate::trigpoly::TrigPoly;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Guard on the exact (unrenormalized) discriminant product length.
pub const MAX_PERIOD: u64 = 10_000;

/// Magnitude at which the exact product is declared overflowing.
const OVERFLOW_GUARD: f64 = 1e290;

/// Tolerance for band-edge root location in the energy variable.
const EDGE_TOL: f64 = 1e-9;

/// Energy interval on which the periodic discriminant stays in `[−2, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// CSV with header `lo,hi`.
pub fn write_bands_csv<W: Write>(bands: &[Band], w: &mut W) -> std::io::Result<()> {
    crate::csvio::write_row(w, &["lo", "hi"])?;
    for b in bands {
        crate::csvio::write_row(
            w,
            &[&crate::csvio::fmt_sig6(b.lo), &crate::csvio::fmt_sig6(b.hi)],
        )?;
    }
    Ok(())
}

/// `2 + 2Σ|λ_n|`: every spectrum energy (any frequency, any phase) has
/// modulus at most this.
pub fn spectral_radius_bound(v: &TrigPoly) -> f64 {
    2.0 + 2.0 * v.lambda_abs_sum()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn validate_rational(p: i64, q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::Precondition("period q must be at least 1".into()));
    }
    if q > MAX_PERIOD {
        return Err(Error::Precondition(format!(
            "period q = {q} exceeds the exact-product guard {MAX_PERIOD}; use a smaller \
             convergent"
        )));
    }
    if gcd(p.unsigned_abs(), q) != 1 {
        return Err(Error::Precondition(format!(
            "p/q = {p}/{q} is not in lowest terms"
        )));
    }
    Ok(())
}

/// Trace of the exact `q`-fold real transfer product at frequency `p/q` and
/// phase `x`: the discriminant whose `[−2, 2]` preimage is the periodic
/// spectrum.
///
/// No renormalization is applied; entries beyond `1e290` error out with a
/// hint to shrink `q` or rescale the energy.
pub fn discriminant(v: &TrigPoly, p: i64, q: u64, x: f64, e: f64) -> Result<f64> {
    validate_rational(p, q)?;
    let beta = p as f64 / q as f64;
    // Real 2x2 product, row-major.
    let (mut m11, mut m12, mut m21, mut m22) = (1.0_f64, 0.0_f64, 0.0_f64, 1.0_f64);
    for j in 0..q {
        let xj = x + j as f64 * beta;
        let t = e - v.eval(xj - xj.floor());
        let (n11, n12) = (t * m11 - m21, t * m12 - m22);
        m21 = m11;
        m22 = m12;
        m11 = n11;
        m12 = n12;
        let mag = m11.abs().max(m12.abs()).max(m21.abs()).max(m22.abs());
        if mag > OVERFLOW_GUARD {
            return Err(Error::Overflow(format!(
                "transfer product exceeded 1e290 after {} of {q} steps; reduce q or rescale the \
                 energy",
                j + 1
            )));
        }
    }
    Ok(m11 + m22)
}

/// Golden-section minimization of a fallible function on `[a, b]`.
fn golden_dip(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > EDGE_TOL {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Deepest dip of a fallible function on `[a, b]`: coarse scan plus golden
/// refinement around the best sample.
fn scan_dip(f: &impl Fn(f64) -> Result<f64>, a: f64, b: f64) -> Result<(f64, f64)> {
    const SAMPLES: usize = 33;
    let mut best = (0usize, f64::MAX);
    let mut nodes = [0.0_f64; SAMPLES];
    for (k, node) in nodes.iter_mut().enumerate() {
        *node = a + (b - a) * k as f64 / (SAMPLES - 1) as f64;
        let val = f(*node)?;
        if val < best.1 {
            best = (k, val);
        }
    }
    let lo = nodes[best.0.saturating_sub(1)];
    let hi = nodes[(best.0 + 1).min(SAMPLES - 1)];
    let (arg, val) = golden_dip(f, lo, hi)?;
    Ok(if val < best.1 {
        (arg, val)
    } else {
        (nodes[best.0], best.1)
    })
}

/// Boundary of `{|Δ| ≤ 2}` between an inside point and an outside end.
///
/// Only midpoints are ever evaluated, so the outside end needs no invariant:
/// when the band reaches the end (touching or interior separator) every
/// midpoint stays inside and the iteration converges to the end itself, and
/// when a gap intervenes the first midpoint beyond the band pulls the
/// bracket back to the true edge.
fn edge_bisect(f: &impl Fn(f64) -> Result<f64>, inside: f64, outside: f64) -> Result<f64> {
    let (mut lo, mut hi) = (inside, outside);
    while (hi - lo).abs() > EDGE_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid)? <= 2.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Eigenvalues of the `n`-site Dirichlet tridiagonal on the orbit sites
/// `x0, x0+β, …`, by Sturm-count bisection.
fn dirichlet_eigenvalues(v: &TrigPoly, beta: f64, x0: f64, n: usize, r: f64) -> Vec<f64> {
    (1..=n)
        .map(|j| {
            let (mut lo, mut hi) = (-r, r);
            while hi - lo > EDGE_TOL {
                let mid = 0.5 * (lo + hi);
                if sturm_count_below(v, beta, x0, n, mid) >= j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Band set `{E : |Δ(E)| ≤ 2}` for one periodic approximant.
///
/// The corner entry of the monodromy matrix vanishes exactly at the
/// eigenvalues of the one-site-short Dirichlet truncation, and the
/// determinant identity forces `|Δ| ≥ 2` there, so those `q−1` energies
/// separate the `q` bands.  Each separator interval is scanned for its
/// single dip of `|Δ|` below 2 and the edges are bisected to `1e−9`; bands
/// meeting at a closed gap are merged.
pub fn band_spectrum(v: &TrigPoly, p: i64, q: u64, x: f64) -> Result<Vec<Band>> {
    validate_rational(p, q)?;
    let r = spectral_radius_bound(v);
    let outer = r + 1e-9;
    let beta = p as f64 / q as f64;
    let absd = |e: f64| discriminant(v, p, q, x, e).map(f64::abs);
    let mut cuts = vec![-outer];
    cuts.extend(dirichlet_eigenvalues(
        v,
        beta,
        x + beta,
        q as usize - 1,
        outer,
    ));
    cuts.push(outer);
    let mut bands: Vec<Band> = Vec::new();
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b - a < 10.0 * EDGE_TOL {
            continue;
        }
        let (e_star, dip) = scan_dip(&absd, a, b)?;
        if dip > 2.0 + EDGE_TOL {
            continue;
        }
        let lo = edge_bisect(&absd, e_star, a)?;
        let hi = edge_bisect(&absd, e_star, b)?;
        match bands.last_mut() {
            Some(last) if lo - last.hi < 20.0 * EDGE_TOL => last.hi = last.hi.max(hi),
            _ => bands.push(Band { lo, hi }),
        }
    }
    Ok(bands)
}

/// Continued-fraction convergents `p_n/q_n` of `alpha`, stopping at `depth`
/// of them or when the denominator would exceed `q_guard`.
///
/// Returns the convergents together with a flag saying whether the guard cut
/// the list short.
pub fn convergents(alpha: f64, depth: usize, q_guard: u64) -> (Vec<(i64, u64)>, bool) {
    let mut out = Vec::new();
    let (mut p_prev, mut q_prev): (i64, u64) = (1, 0);
    let (mut p_cur, mut q_cur): (i64, u64) = (alpha.floor() as i64, 1);
    let mut frac = alpha - alpha.floor();
    for _ in 0..depth {
        if q_cur > q_guard {
            return (out, true);
        }
        out.push((p_cur, q_cur));
        if frac.abs() < 1e-14 {
            return (out, false);
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let a = a as i64;
        let p_next = a * p_cur + p_prev;
        let q_next = a as u64 * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
    (out, false)
}

/// Interval union of possibly overlapping bands.
fn merge_bands(mut bands: Vec<Band>) -> Vec<Band> {
    bands.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("finite"));
    let mut out: Vec<Band> = Vec::new();
    for b in bands {
        match out.last_mut() {
            Some(last) if b.lo <= last.hi + 1e-12 => last.hi = last.hi.max(b.hi),
            _ => out.push(b),
        }
    }
    out
}

fn dilate(bands: &[Band], r: f64) -> Vec<Band> {
    merge_bands(
        bands
            .iter()
            .map(|b| Band {
                lo: b.lo - r,
                hi: b.hi + r,
            })
            .collect(),
    )
}

fn intersect(a: &[Band], b: &[Band]) -> Vec<Band> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = a[i].lo.max(b[j].lo);
        let hi = a[i].hi.min(b[j].hi);
        if lo < hi {
            out.push(Band { lo, hi });
        }
        if a[i].hi < b[j].hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Spectrum approximation through successive periodic approximants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumApprox {
    pub bands: Vec<Band>,
    /// Convergents actually used.
    pub convergents: Vec<(i64, u64)>,
    /// Refinement stopped early because a denominator exceeded the guard.
    pub truncated: bool,
}

/// Hausdorff-style approximation of the spectrum at irrational frequency:
/// for each convergent `p_n/q_n` up to `depth`, union the periodic bands
/// over a phase grid, dilate by `2/q_n²` (the scale of the convergent's
/// frequency error), and intersect across convergents.
pub fn spectrum_approx(
    v: &TrigPoly,
    alpha: f64,
    depth: usize,
    x_samples: usize,
) -> Result<SpectrumApprox> {
    if depth < 1 || x_samples < 1 {
        return Err(Error::Precondition(
            "spectrum approximation needs depth >= 1 and x_samples >= 1".into(),
        ));
    }
    let (convs, truncated) = convergents(alpha, depth, 2000);
    if convs.is_empty() {
        return Err(Error::Precondition(
            "no admissible convergent below the period guard".into(),
        ));
    }
    let mut acc: Option<Vec<Band>> = None;
    for &(p, q) in &convs {
        if q == 0 {
            continue;
        }
        let mut union: Vec<Band> = Vec::new();
        for j in 0..x_samples {
            let x = j as f64 / x_samples as f64;
            union.extend(band_spectrum(v, p, q, x)?);
        }
        let dilated = dilate(&merge_bands(union), 2.0 / (q * q) as f64);
        acc = Some(match acc {
            None => dilated,
            Some(prev) => intersect(&prev, &dilated),
        });
    }
    Ok(SpectrumApprox {
        bands: acc.expect("at least one convergent"),
        convergents: convs,
        truncated,
    })
}

/// Parity symmetry of the discriminant for a potential odd about `x0`:
/// `Δ(p/q, x0; E)` against `(−1)^q Δ(p/q, x0; −E)`, with agreement to
/// `1e−9 · max(1, |lhs|)`.
///
/// In particular `Δ(0) = 0` for odd `q`, so zero energy lies in every odd-
/// period approximant spectrum.
pub fn odd_symmetry_check(
    v: &TrigPoly,
    x0: f64,
    p: i64,
    q: u64,
    e: f64,
) -> Result<(f64, f64, bool)> {
    // Oddness about x0, sampled: v(x0 + t) + v(x0 − t) must vanish.
    let worst = (0..64)
        .map(|k| {
            let t = (k as f64 + 0.3) / 64.0;
            (v.eval(x0 + t) + v.eval(x0 - t)).abs()
        })
        .fold(0.0, f64::max);
    if worst > 1e-9 {
        return Err(Error::Precondition(format!(
            "potential is not odd about x0 = {x0} (sampled defect {worst:.3e})"
        )));
    }
    let lhs = discriminant(v, p, q, x0, e)?;
    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
    let rhs = sign * discriminant(v, p, q, x0, -e)?;
    let ok = (lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0);
    Ok((lhs, rhs, ok))
}

/// Complex-tridiagonal solve `T g = e_mid` by elimination; `T` has diagonal
/// `diag` and unit off-diagonals.  Returns the middle entry of `g`.
fn tridiag_center_entry(diag: &[Complex64]) -> Result<Complex64> {
    let n = diag.len();
    let mid = n / 2;
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    let mut piv = diag[0];
    if piv.norm() < 1e-280 {
        return Err(Error::Precondition(
            "truncated operator is numerically singular".into(),
        ));
    }
    c[0] = Complex64::new(1.0, 0.0) / piv;
    d[0] = if mid == 0 {
        Complex64::new(1.0, 0.0) / piv
    } else {
        Complex64::new(0.0, 0.0)
    };
    for k in 1..n {
        piv = diag[k] - c[k - 1];
        if piv.norm() < 1e-280 {
            return Err(Error::Precondition(
                "truncated operator is numerically singular".into(),
            ));
        }
        let rhs = if k == mid {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        c[k] = Complex64::new(1.0, 0.0) / piv;
        d[k] = (rhs - d[k - 1]) / piv;
    }
    // Back substitution, only the middle entry is needed.
    let mut g = d[n - 1];
    for k in (mid..n - 1).rev() {
        g = d[k] - c[k] * g;
    }
    Ok(g)
}

/// Weyl slopes `(s₋, s₊)` of the two half-line resolvents at the origin
/// site, from depth-`trunc_n` continued fractions: `s₋ = −m₋` over the past
/// sites and `s₊ = −1/m₊` with the future fraction anchored at the origin.
pub fn weyl_slopes(
    v: &TrigPoly,
    e: f64,
    alpha: f64,
    x: f64,
    eps: f64,
    trunc_n: usize,
) -> (Complex64, Complex64) {
    let se = v.strip_evaluator(eps);
    let site = |k: i64| {
        let y = x + k as f64 * alpha;
        se.eval(y - y.floor()) - e
    };
    // m₋ = 1/((V(−1)−E) − 1/((V(−2)−E) − ⋯)), innermost site −trunc_n.
    let mut m_minus = Complex64::new(0.0, 0.0);
    for k in -(trunc_n as i64)..=-1 {
        m_minus = (site(k) - m_minus).inv();
    }
    // Future fraction anchored at site 0: 1/((V(0)−E) − 1/((V(1)−E) − ⋯)).
    let mut m_plus = Complex64::new(0.0, 0.0);
    for k in (0..trunc_n as i64).rev() {
        m_plus = (site(k) - m_plus).inv();
    }
    (-m_minus, -m_plus.inv())
}

/// Angle-formula consistency: `|s₋ − s₊|` from the Weyl slopes against
/// `1/|g(0)|` from the `(2·trunc_n+1)`-site truncated resolvent, both at the
/// complexified phase `x + iε`.
///
/// The tolerance halves as `trunc_n` doubles and equals `1e−6` at
/// `trunc_n = 64`; the precondition is the uniform-hyperbolicity margin
/// `min_x |E − v(x+iε)| > 2`.
pub fn angle_formula_check(
    v: &TrigPoly,
    e: f64,
    alpha: f64,
    x: f64,
    eps: f64,
    trunc_n: usize,
) -> Result<(f64, f64, bool)> {
    if trunc_n < 2 {
        return Err(Error::Precondition("trunc_n must be at least 2".into()));
    }
    let m = crate::circleopt::min_modulus(v, e, eps, crate::circleopt::DEFAULT_GRID);
    if m <= 2.0 {
        return Err(Error::Precondition(format!(
            "angle formula needs min |E − v| > 2 on the strip line; found {m:.6}"
        )));
    }
    let (s_minus, s_plus) = weyl_slopes(v, e, alpha, x, eps, trunc_n);
    let lhs = (s_minus - s_plus).norm();
    let se = v.strip_evaluator(eps);
    let n = 2 * trunc_n + 1;
    let diag: Vec<Complex64> = (0..n)
        .map(|i| {
            let k = i as i64 - trunc_n as i64;
            let y = x + k as f64 * alpha;
            se.eval(y - y.floor()) - e
        })
        .collect();
    let g0 = tridiag_center_entry(&diag)?;
    let rhs = 1.0 / g0.norm();
    let tol = 6.4e-5 / trunc_n as f64;
    Ok((lhs, rhs, (lhs - rhs).abs() <= tol))
}

/// Number of eigenvalues of the `n`-site truncation (diagonal `v(x+kα)`,
/// unit off-diagonals, Dirichlet cut) strictly below `t`, by the sign count
/// of the `LDLᵀ` pivots.
fn sturm_count_below(v: &TrigPoly, alpha: f64, x: f64, n: usize, t: f64) -> usize {
    let mut count = 0;
    let mut d = 0.0_f64;
    let mut first = true;
    for k in 0..n {
        let y = x + k as f64 * alpha;
        let a = v.eval(y - y.floor());
        d = if first {
            first = false;
            a - t
        } else {
            a - t - 1.0 / d
        };
        if d == 0.0 {
            d = -1e-300;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Extreme eigenvalues `(min, max)` of the `n`-site truncated operator at
/// phase `x`, each located by Sturm-count bisection to `1e−6`.
pub fn truncation_extremes(v: &TrigPoly, alpha: f64, x: f64, n: usize) -> (f64, f64) {
    assert!(n >= 1, "truncation needs at least one site");
    let r = spectral_radius_bound(v);
    let locate = |target: usize| {
        // Smallest t with count_below(t) >= target.
        let (mut lo, mut hi) = (-r - 1.0, r + 1.0);
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            if sturm_count_below(v, alpha, x, n, mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    (locate(1), locate(n))
}
