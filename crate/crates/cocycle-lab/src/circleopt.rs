//! Minimization of `|E − v(x+iε)|` over the circle and the Herman radii: the
//! largest strip heights at which that minimum hits the uniform-hyperbolicity
//! threshold (2 for the energy-dependent variant, `4 + 2Σ|λ_n|` for the
//! energy-independent one).

use crate::trigpoly::TrigPoly;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Default circle sampling resolution; enough to isolate every basin of
/// `|E − v|` for degrees up to ~20.
pub const DEFAULT_GRID: usize = 4096;

const X_TOL: f64 = 1e-10;
const EPS_TOL: f64 = 1e-10;

/// Golden-section minimization of a unimodal-on-bracket function.
pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > xtol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `min_x |E − v(x+iε)|`: coarse sampling on `grid_n` points followed by
/// golden-section refinement around every sampled local minimum.
///
/// Panics if `grid_n < 16` (documented precondition).
pub fn min_modulus(v: &TrigPoly, e: f64, eps: f64, grid_n: usize) -> f64 {
    assert!(grid_n >= 16, "min_modulus requires grid_n >= 16");
    let se = v.strip_evaluator(eps);
    let f = |x: f64| {
        let val = se.eval(x);
        ((e - val.re).powi(2) + val.im.powi(2)).sqrt()
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
            let (_, fv) = golden_min(f, center - h, center + h, X_TOL);
            best = best.min(fv);
        }
    }
    best
}

/// `min_x |v(x+iε)|` together with the threshold `4 + 2Σ|λ_n|`.
pub fn min_modulus_uniform(v: &TrigPoly, eps: f64) -> (f64, f64) {
    let value = min_modulus(v, 0.0, eps, DEFAULT_GRID);
    (value, uniform_threshold(v))
}

/// Threshold `4 + 2Σ_{n=1..M} |λ_n|` of the energy-independent criterion.
pub fn uniform_threshold(v: &TrigPoly) -> f64 {
    4.0 + 2.0 * v.lambda_abs_sum()
}

/// Largest `|Im z|` over the zeros of `E − v(z)`, obtained from the roots `w`
/// of the Laurent form via `|Im z| = |log|w|| / 2π`.
pub fn zero_radius(v: &TrigPoly, e: f64) -> Result<f64> {
    let roots = v.to_laurent(e, 0.0).roots()?;
    Ok(roots
        .iter()
        .map(|r| r.norm().ln().abs() / crate::trigpoly::TAU)
        .fold(0.0, f64::max))
}

/// Largest `ε ≥ 0` with `min_x |E − v(x+iε)| = 2`.
///
/// Beyond the zero radius the minimum is strictly increasing, so the largest
/// crossing lives in `[zero_radius, ∞)` and bisection applies; the minimum
/// vanishes at the zero radius itself (a zero of `E − v` sits on that line),
/// which makes the bracket valid whenever the root finder succeeds.  Should
/// the sampled minimum at the zero radius nevertheless exceed the level, the
/// largest crossing is searched on a descending grid and `0` is returned if
/// none exists.
pub fn herman_radius(v: &TrigPoly, e: f64) -> Result<f64> {
    let zr = zero_radius(v, e)?;
    largest_level_crossing(|eps| min_modulus(v, e, eps, DEFAULT_GRID), 2.0, zr)
}

/// Largest `ε ≥ 0` with `min_x |v(x+iε)|` equal to the threshold
/// `4 + 2Σ|λ_n|` (energy-independent criterion).
pub fn herman_radius_uniform(v: &TrigPoly) -> Result<f64> {
    let zr = zero_radius(v, 0.0)?;
    let level = uniform_threshold(v);
    largest_level_crossing(|eps| min_modulus(v, 0.0, eps, DEFAULT_GRID), level, zr)
}

/// Largest crossing of `curve(ε) = level` for a curve that is strictly
/// increasing beyond `zr` and unbounded.
pub(crate) fn largest_level_crossing(
    curve: impl Fn(f64) -> f64,
    level: f64,
    zr: f64,
) -> Result<f64> {
    let (mut lo, lo_val) = (zr, curve(zr));
    if lo_val > level {
        // Defensive path: scan downward for the last sub-level point.
        let n = 4096;
        let mut found = None;
        for k in (0..n).rev() {
            let eps = zr * k as f64 / n as f64;
            if curve(eps) <= level {
                found = Some(eps);
                break;
            }
        }
        match found {
            Some(eps) => lo = eps,
            None => return Ok(0.0),
        }
    }
    let mut hi = lo + 0.5;
    let mut doublings = 0;
    while curve(hi) <= level {
        hi = lo + 2.0 * (hi - lo);
        doublings += 1;
        if doublings > 60 {
            return Err(Error::Precondition(
                "minimum-modulus curve failed to exceed the level; model out of range".into(),
            ));
        }
    }
    while hi - lo > EPS_TOL {
        let mid = 0.5 * (lo + hi);
        if curve(mid) <= level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Sampled curve `ε ↦ min_x |E − v(x+iε)|` for reports and figures.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinCurve {
    pub e: f64,
    pub zero_radius: f64,
    pub eps_grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl MinCurve {
    /// Samples `n` points of the minimum-modulus curve on `[0, eps_max]`.
    pub fn sample(v: &TrigPoly, e: f64, eps_max: f64, n: usize) -> Result<Self> {
        let zr = zero_radius(v, e)?;
        let mut eps_grid = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        for k in 0..n {
            let eps = eps_max * k as f64 / (n - 1).max(1) as f64;
            eps_grid.push(eps);
            values.push(min_modulus(v, e, eps, DEFAULT_GRID));
        }
        Ok(MinCurve {
            e,
            zero_radius: zr,
            eps_grid,
            values,
        })
    }

    /// CSV with header `eps,value`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        crate::csvio::write_row(w, &["eps", "value"])?;
        for (eps, val) in self.eps_grid.iter().zip(&self.values) {
            crate::csvio::write_row(
                w,
                &[&crate::csvio::fmt_sig6(*eps), &crate::csvio::fmt_sig6(*val)],
            )?;
        }
        Ok(())
    }
}
