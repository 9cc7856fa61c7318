//! Simultaneous polynomial root finding (Aberth–Ehrlich iteration) with a
//! Newton-plus-deflation fallback.  No external linear algebra: the degrees
//! seen here are small (≤ ~40) and the iteration is robust at that scale.

use crate::{Error, Result};
use num_complex::Complex64;

const MAX_ITER: usize = 120;
const CORRECTION_TOL: f64 = 1e-13;
/// Accepted relative backward error: |p(z)| ≤ RESIDUAL_TOL · Σ|c_k||z|^k.
const RESIDUAL_TOL: f64 = 1e-9;

/// Roots of `Σ coeffs[k] w^k` (ascending order, arbitrary complex
/// coefficients).  Returns exactly `degree` roots counted with multiplicity.
///
/// Fails with [`Error::RootsNotConverged`] carrying the best available
/// estimates if the iteration stalls and the deflation fallback cannot rescue
/// it.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|t| t.norm() == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        if coeffs.iter().all(|t| t.norm() == 0.0) {
            return Err(Error::Precondition("roots of the zero polynomial".into()));
        }
        return Ok(Vec::new());
    }
    // w = 0 roots: strip leading zero coefficients.
    let mut zeros_at_origin = 0;
    while c[zeros_at_origin].norm() == 0.0 {
        zeros_at_origin += 1;
    }
    let c = &c[zeros_at_origin..];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    roots.extend(nonzero_roots(c)?);
    Ok(roots)
}

/// Roots of a polynomial with nonzero constant and leading coefficients.
fn nonzero_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![-c[0] / c[1]]);
    }
    // Scale for conditioning; roots are scale-invariant.
    let scale = c.iter().map(|t| t.norm()).fold(0.0_f64, f64::max);
    let c: Vec<Complex64> = c.iter().map(|t| t / scale).collect();

    let mut z = initial_guesses(&c);
    let mut iterations = 0;
    let mut all_converged = false;
    while iterations < MAX_ITER {
        iterations += 1;
        let mut max_step = 0.0_f64;
        for i in 0..n {
            let (p, dp) = horner(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 {
                p / dp
            } else {
                Complex64::new(1e-3, 1e-3)
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 1e-300 {
                        repulsion += 1.0 / d;
                    } else {
                        // Coincident guesses: split deterministically.
                        z[i] += Complex64::new(1e-6 * (i as f64 + 1.0), 1e-6);
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[i] -= step;
            if !z[i].is_finite() {
                z[i] = Complex64::from_polar(1.0 + i as f64 / n as f64, 2.7 * (i as f64 + 0.3));
            }
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < CORRECTION_TOL {
            all_converged = true;
            break;
        }
    }
    for zi in z.iter_mut() {
        polish(&c, zi, 3);
    }
    let bad = z.iter().filter(|&&zi| !residual_ok(&c, zi)).count();
    if bad == 0 {
        return Ok(z);
    }
    if let Some(rescued) = deflation_fallback(&c) {
        return Ok(rescued);
    }
    Err(Error::RootsNotConverged {
        iterations: if all_converged { iterations } else { MAX_ITER },
        converged: n - bad,
        total: n,
        partial: z,
    })
}

/// Starting points on a circle of the geometric-mean root modulus, angularly
/// offset so no guess sits on a symmetry axis of real-coefficient inputs.
fn initial_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let r0 = (c[0].norm() / c[n].norm())
        .powf(1.0 / n as f64)
        .clamp(1e-8, 1e8);
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.37) / n as f64 + 0.39;
            Complex64::from_polar(r0 * (1.0 + 0.05 * (k as f64) / n as f64), theta)
        })
        .collect()
}

/// Value and derivative by Horner's rule.
fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

fn polish(c: &[Complex64], z: &mut Complex64, steps: usize) {
    for _ in 0..steps {
        let (p, dp) = horner(c, *z);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            return;
        }
        let step = p / dp;
        if !(*z - step).is_finite() {
            return;
        }
        *z -= step;
    }
}

fn residual_ok(c: &[Complex64], z: Complex64) -> bool {
    if !z.is_finite() {
        return false;
    }
    let (p, _) = horner(c, z);
    let mut mag = 0.0;
    let mut zp = 1.0;
    for ck in c {
        mag += ck.norm() * zp;
        zp *= z.norm();
    }
    p.norm() <= RESIDUAL_TOL * mag.max(f64::MIN_POSITIVE)
}

/// Last resort: pull roots out one at a time by multi-start Newton, deflating
/// after each success.  Linear in cost, quadratic in rounding accumulation,
/// so only used when the simultaneous iteration fails.
fn deflation_fallback(c: &[Complex64]) -> Option<Vec<Complex64>> {
    let mut work: Vec<Complex64> = c.to_vec();
    let mut found = Vec::new();
    while work.len() > 2 {
        let mut root = None;
        'starts: for s in 0..24 {
            let r = 0.25 * 1.6_f64.powi(s / 4);
            let theta = 0.9 * s as f64 + 0.23;
            let mut z = Complex64::from_polar(r, theta);
            for _ in 0..200 {
                let (p, dp) = horner(&work, z);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                z -= step;
                if !z.is_finite() {
                    break;
                }
                if step.norm() < 1e-14 * (1.0 + z.norm()) {
                    break;
                }
            }
            if residual_ok(&work, z) {
                root = Some(z);
                break 'starts;
            }
        }
        let z = root?;
        // Polish against the undeflated polynomial to curb drift.
        let mut z_full = z;
        polish(c, &mut z_full, 4);
        let z = if residual_ok(c, z_full) { z_full } else { z };
        found.push(z);
        work = synthetic_division(&work, z);
    }
    if work.len() == 2 {
        found.push(-work[0] / work[1]);
    }
    for z in found.iter_mut() {
        polish(c, z, 3);
    }
    if found.iter().all(|&z| residual_ok(c, z)) {
        Some(found)
    } else {
        None
    }
}

/// Divides by (w − z), dropping the remainder.
fn synthetic_division(c: &[Complex64], z: Complex64) -> Vec<Complex64> {
    let n = c.len() - 1;
    let mut q = vec![Complex64::new(0.0, 0.0); n];
    let mut carry = c[n];
    for k in (0..n).rev() {
        q[k] = carry;
        carry = c[k] + carry * z;
    }
    q
}
