//! End-to-end acceptance checks: the showcase model's published numbers, the
//! exponent asymptote on random instances, the almost-Mathieu sanity values,
//! acceleration quantization, the defect sandwich, the contraction
//! counterexample, discriminant parity, the closed-form criteria, the Jacobi
//! regimes, and the boundary-angle identity.  One test per criterion, each
//! printing a PASS line at its stated tolerance.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use std::f64::consts::{LN_2, PI};
use std::time::Instant;

use cocycle_lab::circleopt::{herman_radius, herman_radius_uniform, min_modulus};
use cocycle_lab::cocycle::{acceleration, disk_contraction_sample, lyapunov, xi_sandwich};
use cocycle_lab::criteria::{
    largest_positive_root, m2_boundary_l1, m2_root, root_poly, stefanescu_bound,
    subcritical_uniform, Status,
};
use cocycle_lab::jacobi::{
    balanced_constant, jacobi_herman_radius, jacobi_lyapunov_raw, jacobi_lyapunov_with, JacobiModel,
};
use cocycle_lab::spectrum::{angle_formula_check, odd_symmetry_check};
use cocycle_lab::supercritical::{herman_bound_with_eps1, supercritical_sweep};
use cocycle_lab::trigpoly::{LaurentPoly, TrigPoly};
use cocycle_lab::GOLDEN_MEAN;

const TAU: f64 = 2.0 * PI;

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn worked() -> TrigPoly {
    TrigPoly::from_cos(vec![9.0, 0.8]).unwrap()
}

fn random_potential(rng: &mut ChaCha12Rng, max_degree: usize, scale: f64) -> TrigPoly {
    loop {
        let m = rng.random_range(1..=max_degree);
        let mut a: Vec<f64> = (0..m).map(|_| rng.random_range(-scale..scale)).collect();
        let b: Vec<f64> = (0..m).map(|_| rng.random_range(-scale..scale)).collect();
        if a[m - 1].hypot(b[m - 1]) < 0.05 * scale {
            a[m - 1] += 0.1 * scale;
        }
        if let Ok(v) = TrigPoly::new(a, b) {
            return v;
        }
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[test]
fn acceptance_01_showcase_model_reproduction() {
    let start = Instant::now();
    let v = worked();

    let dist = min_modulus(&v, 0.0, 0.2, 4096);
    assert!(
        (dist - 24.242).abs() <= 0.01,
        "min distance at height 0.2: {dist}"
    );

    let eps_h = herman_radius(&v, -2.0).unwrap();
    assert!((eps_h - 0.3864).abs() <= 1e-3, "per-energy radius {eps_h}");

    let eps_u = herman_radius_uniform(&v).unwrap();
    assert!((eps_u - 0.4142).abs() <= 1e-3, "uniform radius {eps_u}");

    let roots = v.to_laurent(-2.0, 0.2).roots().unwrap();
    let expected = [
        Complex64::new(-39.055, 0.0),
        Complex64::new(-0.3161, 0.0),
        Complex64::new(-0.07839, 3.51271),
        Complex64::new(-0.07839, -3.51271),
    ];
    assert_eq!(roots.len(), expected.len());
    let mut used = vec![false; roots.len()];
    for want in &expected {
        let hit = roots
            .iter()
            .enumerate()
            .find(|(k, r)| !used[*k] && (*r - want).norm() <= 1e-3);
        let (k, _) = hit.unwrap_or_else(|| panic!("no root near {want}: {roots:?}"));
        used[k] = true;
    }

    let report = herman_bound_with_eps1(&v, -2.0, 0.2, eps_h).unwrap();
    assert!(
        (report.gamma - 0.458).abs() <= 0.01,
        "gamma {}",
        report.gamma
    );
    assert!(
        (report.bound - 0.727).abs() <= 0.01,
        "bound {}",
        report.bound
    );
    assert!(
        (report.classical_herman - (-0.223)).abs() <= 1e-3,
        "classical bound {}",
        report.classical_herman
    );
    assert!(
        start.elapsed().as_secs_f64() < 30.0,
        "single-energy reproduction too slow"
    );

    let sweep_start = Instant::now();
    let mut sink = Vec::new();
    let summary = supercritical_sweep(&v, -21.6, 21.6, 0.1, true, &mut sink).unwrap();
    assert_eq!(summary.failures, 0, "sweep rows failed");
    assert_eq!(summary.rows, 433);
    let min_bound = summary.min_bound.unwrap();
    assert!(min_bound > 0.0, "weakest sweep bound {min_bound}");
    assert!(
        sweep_start.elapsed().as_secs_f64() < 120.0,
        "sweep too slow"
    );
    println!("acceptance 1 showcase-model-reproduction: PASS");
}

#[test]
fn acceptance_02_exponent_asymptote_on_random_instances() {
    let start = Instant::now();
    let mut r = rng(0xacce_0002);
    let mut done = 0;
    while done < 10 {
        let v = random_potential(&mut r, 4, 2.0);
        let e = r.random_range(-5.0..5.0);
        let eps_h = herman_radius(&v, e).unwrap();
        if eps_h < 0.05 {
            continue;
        }
        let eps = 1.2 * eps_h;
        let le = lyapunov(&v, e, GOLDEN_MEAN, eps, 100_000, 32);
        let expected = v.lambda_top_abs().ln() + TAU * v.degree() as f64 * eps;
        let tol = (3.0 * le.stderr).max(0.02);
        assert!(
            (le.value - expected).abs() <= tol,
            "exponent {} vs asymptote {} (tol {tol}) at degree {} E={e}",
            le.value,
            expected,
            v.degree()
        );
        done += 1;
    }
    assert!(
        start.elapsed().as_secs_f64() < 60.0,
        "asymptote check too slow"
    );
    println!("acceptance 2 exponent-asymptote: PASS");
}

#[test]
fn acceptance_03_almost_mathieu_values() {
    let sub = TrigPoly::from_cos(vec![0.5]).unwrap();
    let le = lyapunov(&sub, 0.0, GOLDEN_MEAN, 0.0, 100_000, 32);
    assert!(le.value.abs() < 0.01, "coupling 1/2 exponent {}", le.value);

    let sup = TrigPoly::from_cos(vec![2.0]).unwrap();
    let le = lyapunov(&sup, 0.0, GOLDEN_MEAN, 1.0, 100_000, 32);
    let expected = 2.0f64.ln() + TAU;
    assert!(
        (le.value - expected).abs() < 0.02,
        "coupling 2 exponent {} vs {}",
        le.value,
        expected
    );
    println!("acceptance 3 almost-mathieu-values: PASS");
}

#[test]
fn acceptance_04_acceleration_quantization() {
    let mut r = rng(0xacce_0004);
    // Past the radius the snapped acceleration equals the degree, exactly.
    let mut done = 0;
    while done < 20 {
        let v = random_potential(&mut r, 3, 1.5);
        let e = r.random_range(-4.0..4.0);
        let eps_h = herman_radius(&v, e).unwrap();
        if eps_h < 0.12 {
            continue;
        }
        let acc = acceleration(&v, e, GOLDEN_MEAN, 1.2 * eps_h, 0.02, 20_000, 8).unwrap();
        assert_eq!(
            acc.snapped,
            v.degree() as i64,
            "snapped {} (raw {}) vs degree {} at E={e}",
            acc.snapped,
            acc.raw,
            v.degree()
        );
        done += 1;
    }
    // Proven-subcritical instances have vanishing acceleration at the axis.
    done = 0;
    while done < 10 {
        let m = r.random_range(1..=2usize);
        let mut a: Vec<f64> = (0..m).map(|_| r.random_range(-0.2..0.2)).collect();
        let b: Vec<f64> = (0..m).map(|_| r.random_range(-0.2..0.2)).collect();
        if a[m - 1].hypot(b[m - 1]) < 0.02 {
            a[m - 1] += 0.05;
        }
        let v = TrigPoly::new(a, b).unwrap();
        if subcritical_uniform(&v).unwrap().status != Status::SubcriticalProven {
            continue;
        }
        let hull = 2.0 + 2.0 * v.lambda_abs_sum();
        let e = r.random_range(-hull..hull);
        let acc = acceleration(&v, e, GOLDEN_MEAN, 0.02, 0.02, 20_000, 8).unwrap();
        assert_eq!(
            acc.snapped, 0,
            "snapped {} (raw {}) should vanish at E={e}",
            acc.snapped, acc.raw
        );
        done += 1;
    }
    println!("acceptance 4 acceleration-quantization: PASS");
}

#[test]
fn acceptance_05_defect_sandwich() {
    let mut r = rng(0xacce_0005);
    let mut done = 0;
    while done < 20 {
        let v = random_potential(&mut r, 2, 1.2);
        let e = r.random_range(-5.0..5.0);
        let eps = 0.15;
        if min_modulus(&v, e, eps, 4096) <= 2.2 {
            continue;
        }
        let s = xi_sandwich(&v, e, GOLDEN_MEAN, eps, 40_000, 16).unwrap();
        assert!(
            s.numeric >= s.lower - 0.01 && s.numeric <= s.upper + 0.01,
            "defect {} outside [{}, {}] (m = {})",
            s.numeric,
            s.lower,
            s.upper,
            s.m
        );
        assert!(
            s.lower >= -LN_2 - 1e-12,
            "analytic floor violated: {}",
            s.lower
        );
        done += 1;
    }
    println!("acceptance 5 defect-sandwich: PASS");
}

#[test]
fn acceptance_06_contraction_counterexample() {
    // Möbius data of ((1, −1/2), (1/2, 0)): never a sampled contraction.
    let b = Complex64::new(-0.5, 0.0);
    let c = Complex64::new(0.5, 0.0);
    let d = Complex64::new(0.0, 0.0);
    for k in 1..=20 {
        let r = 0.1 * k as f64;
        let s = disk_contraction_sample(b, c, d, r);
        assert!(
            !(s.maps_in && s.lipschitz_sup < 1.0),
            "unexpectedly contracts at radius {r}: maps_in={} lip={}",
            s.maps_in,
            s.lipschitz_sup
        );
    }
    println!("acceptance 6 contraction-counterexample: PASS");
}

#[test]
fn acceptance_07_discriminant_parity() {
    let mut r = rng(0xacce_0007);
    for _ in 0..1000 {
        let m = r.random_range(1..=3usize);
        let mut b: Vec<f64> = (0..m).map(|_| r.random_range(-1.2..1.2)).collect();
        if b[m - 1].abs() < 0.02 {
            b[m - 1] += 0.1;
        }
        // A sine series is odd about zero; shifting it by x0 gives a
        // potential odd about x0 with mixed coefficients.
        let x0 = r.random_range(0.0..1.0);
        let mut sa = Vec::with_capacity(m);
        let mut sb = Vec::with_capacity(m);
        for (j, bj) in b.iter().enumerate() {
            let phi = TAU * (j + 1) as f64 * x0;
            sa.push(-bj * phi.sin());
            sb.push(bj * phi.cos());
        }
        let v = TrigPoly::new(sa, sb).unwrap();
        let q = r.random_range(1..=9u64);
        let p = loop {
            let p = r.random_range(1..=q.max(2) as i64);
            if gcd_u64(p.unsigned_abs(), q) == 1 {
                break p;
            }
        };
        let e = r.random_range(-4.0..4.0);
        let (lhs, rhs, ok) = odd_symmetry_check(&v, x0, p, q, e).unwrap();
        assert!(ok, "parity defect: {lhs} vs {rhs} at p={p} q={q} E={e}");
        if q % 2 == 1 {
            let (center, _, _) = odd_symmetry_check(&v, x0, p, q, 0.0).unwrap();
            assert!(
                center.abs() <= 1e-9,
                "odd period must pin zero energy: {center}"
            );
        }
    }
    println!("acceptance 7 discriminant-parity: PASS");
}

#[test]
fn acceptance_08_closed_forms_and_root_bounds() {
    // Two-coefficient boundary collapses to coupling one as the second
    // coefficient vanishes.
    assert!((m2_boundary_l1(0.0) - 1.0).abs() <= 1e-12);

    let mut r = rng(0xacce_0008);
    for _ in 0..1000 {
        let v = random_potential(&mut r, 4, 1.5);
        let p = root_poly(&v);
        let bound = stefanescu_bound(&p);
        let root = largest_positive_root(&p).unwrap();
        assert!(bound >= root - 1e-9, "bound {bound} below root {root}");
    }
    for _ in 0..1000 {
        let l1 = r.random_range(0.0..2.0);
        let l2 = r.random_range(0.01..2.0);
        let closed = m2_root(l1, l2);
        let v = TrigPoly::from_cos(vec![l1, l2]).unwrap();
        let bisected = largest_positive_root(&root_poly(&v)).unwrap();
        assert!(
            (closed - bisected).abs() <= 1e-8 * (1.0 + closed),
            "closed root {closed} vs bisected {bisected}"
        );
    }
    println!("acceptance 8 closed-forms-and-root-bounds: PASS");
}

#[test]
fn acceptance_09_jacobi_regimes() {
    // Constant hopping modulus reduces to the scalar second-order exponent.
    let mut r = rng(0xacce_0009);
    for (k, eps) in [(0i64, 0.0f64), (1, 0.25)] {
        let mu = Complex64::from_polar(1.7, r.random_range(0.0..TAU));
        let c = LaurentPoly::new(k, vec![mu]).unwrap();
        let v = random_potential(&mut r, 2, 1.0);
        let e = r.random_range(-2.0..2.0);
        let full = jacobi_lyapunov_with(&c, &v, e, GOLDEN_MEAN, eps, 50_000, 16);
        let scaled = TrigPoly::new(
            v.cos_coeffs().iter().map(|a| a / 1.7).collect(),
            v.sin_coeffs().iter().map(|b| b / 1.7).collect(),
        )
        .unwrap();
        let schr = lyapunov(&scaled, e / 1.7, GOLDEN_MEAN, eps, 50_000, 16);
        let tol = 3.0 * (full.stderr + schr.stderr) + 1e-3;
        assert!(
            (full.value - 1.7f64.ln() - schr.value).abs() <= tol,
            "scalar reduction defect {} at harmonic {k} height {eps}",
            (full.value - 1.7f64.ln() - schr.value).abs()
        );
    }

    // Potential-dominant regime: asymptotic slope is the potential degree.
    let c = LaurentPoly::new(0, vec![Complex64::new(1.0, 0.0), Complex64::new(0.2, 0.0)]).unwrap();
    let v = TrigPoly::from_cos(vec![0.4, 0.9]).unwrap();
    let m = JacobiModel::new(c, v).unwrap();
    let eps_h = jacobi_herman_radius(&m, 0.7, GOLDEN_MEAN).unwrap();
    let lo = jacobi_lyapunov_raw(&m, 0.7, GOLDEN_MEAN, eps_h + 0.1, 50_000, 16);
    let hi = jacobi_lyapunov_raw(&m, 0.7, GOLDEN_MEAN, eps_h + 0.5, 50_000, 16);
    let slope = (hi.value - lo.value) / 0.4;
    let want = TAU * m.top_degree() as f64;
    assert!(
        (slope - want).abs() <= 0.02 * want,
        "potential-dominant slope {slope} vs {want}"
    );

    // Hopping-dominant regime: asymptotic slope is pi times the exponent
    // spread of the hopping.
    let c = LaurentPoly::new(
        0,
        vec![
            Complex64::new(0.8, 0.0),
            Complex64::new(0.1, 0.1),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.1, 0.0),
        ],
    )
    .unwrap();
    let v = TrigPoly::from_cos(vec![0.7]).unwrap();
    let m = JacobiModel::new(c, v).unwrap();
    // No radius notion here (the auxiliary minimum decays); fixed heights
    // deep in the asymptotic regime measure the slope instead.
    let lo = jacobi_lyapunov_raw(&m, 0.3, GOLDEN_MEAN, 0.5, 50_000, 16);
    let hi = jacobi_lyapunov_raw(&m, 0.3, GOLDEN_MEAN, 0.9, 50_000, 16);
    let slope = (hi.value - lo.value) / 0.4;
    let want = PI * (m.n2() - m.n1()) as f64;
    assert!(
        (slope - want).abs() <= 0.02 * want,
        "hopping-dominant slope {slope} vs {want}"
    );

    // Balanced regime: the limiting constant genuinely depends on the
    // frequency, witnessed half a rotation apart.
    let c = LaurentPoly::new(
        0,
        vec![
            Complex64::new(0.3, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ],
    )
    .unwrap();
    let v = TrigPoly::from_cos(vec![1.2]).unwrap();
    let m = JacobiModel::new(c, v).unwrap();
    let here = balanced_constant(&m, GOLDEN_MEAN);
    let shifted = balanced_constant(&m, GOLDEN_MEAN - 0.5);
    assert!(
        (here - shifted).abs() > 1e-3,
        "balanced constant must differ across half a rotation: {here} vs {shifted}"
    );
    println!("acceptance 9 jacobi-regimes: PASS");
}

#[test]
fn acceptance_10_boundary_angle_identity() {
    let mut r = rng(0xacce_000a);
    let mut done = 0;
    while done < 10 {
        let v = random_potential(&mut r, 2, 1.0);
        let sign = if r.random::<bool>() { 1.0 } else { -1.0 };
        let e = sign * (2.0 * v.lambda_abs_sum() + 2.5 + r.random_range(0.0..3.0));
        let eps = 0.1;
        if min_modulus(&v, e, eps, 4096) <= 2.05 {
            continue;
        }
        let x = r.random_range(0.0..1.0);
        let mut errs = Vec::new();
        for &n in &[16usize, 32, 64, 128] {
            let (lhs, rhs, ok) = angle_formula_check(&v, e, GOLDEN_MEAN, x, eps, n).unwrap();
            errs.push((lhs - rhs).abs());
            if n == 128 {
                assert!(ok, "identity check failed at window 128");
                assert!(
                    (lhs - rhs).abs() < 1e-6,
                    "identity defect {} at window 128",
                    (lhs - rhs).abs()
                );
            }
        }
        assert!(
            errs.windows(2).all(|w| w[1] <= w[0] + 1e-12),
            "defect must shrink with the window: {errs:?}"
        );
        done += 1;
    }
    println!("acceptance 10 boundary-angle-identity: PASS");
}
