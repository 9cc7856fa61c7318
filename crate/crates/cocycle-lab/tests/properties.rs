//! Randomized cross-checks of the library invariants: analytic identities
//! between independent evaluation routes, monotonicity and soundness of the
//! closed-form criteria, estimator consistency, and output determinism.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use std::f64::consts::{LN_2, PI};

use cocycle_lab::circleopt::{herman_radius, herman_radius_uniform, min_modulus, zero_radius};
use cocycle_lab::cocycle::{contraction_check, lyapunov, section_value, transfer_step};
use cocycle_lab::criteria::{
    amo_limit_params, closed_form_m2, ghm_condition, largest_positive_root, m2_root,
    odd_two_term_condition, root_poly, stefanescu_bound, subcritical_energy, subcritical_uniform,
    Status, Verdict,
};
use cocycle_lab::jacobi::{
    balanced_constant, degenerate_lyapunov, jacobi_acceleration, jacobi_herman_radius,
    jacobi_lyapunov_raw, jacobi_lyapunov_with, jacobi_step, JacobiModel,
};
use cocycle_lab::spectrum::{band_spectrum, discriminant, spectral_radius_bound, spectrum_approx};
use cocycle_lab::supercritical::{
    find_eps1, herman_bound_with_eps1, jensen_gamma, supercritical_sweep,
};
use cocycle_lab::trigpoly::{LaurentPoly, TrigPoly};
use cocycle_lab::GOLDEN_MEAN;

const TAU: f64 = 2.0 * PI;

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random potential of degree up to `max_degree` with coefficients bounded by
/// `scale` and a top harmonic kept away from zero.
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

/// Strategy for potentials with bounded degree and coefficients.
fn potential_strategy(max_degree: usize) -> impl Strategy<Value = TrigPoly> {
    (1..=max_degree).prop_flat_map(|m| {
        (
            prop::collection::vec(-2.0..2.0f64, m),
            prop::collection::vec(-2.0..2.0f64, m),
        )
            .prop_filter_map("top harmonic must stay away from zero", move |(a, b)| {
                if a[m - 1].hypot(b[m - 1]) < 0.05 {
                    return None;
                }
                TrigPoly::new(a, b).ok()
            })
    })
}

proptest! {
    /// The Laurent encoding evaluates, on the unit circle, to the distance
    /// function `E − v(x+iε)` it encodes.
    #[test]
    fn laurent_evaluation_matches_potential(
        v in potential_strategy(3),
        e in -5.0..5.0f64,
        eps in 0.0..0.6f64,
        x in 0.0..1.0f64,
    ) {
        let p = v.to_laurent(e, eps);
        let w = Complex64::from_polar(1.0, TAU * x);
        let direct = c64(e, 0.0) - v.eval_complex(x, eps);
        let scale = 1.0 + e.abs() + v.lambda_abs_sum() * (TAU * v.degree() as f64 * eps).exp();
        prop_assert!((p.eval(w) - direct).norm() <= 1e-10 * scale);
    }

    /// The transfer step has unit determinant regardless of inputs.
    #[test]
    fn transfer_step_has_unit_determinant(
        v in potential_strategy(3),
        e in -10.0..10.0f64,
        eps in 0.0..1.0f64,
        x in 0.0..1.0f64,
    ) {
        let det = transfer_step(&v, e, x, eps).det();
        prop_assert!((det - c64(1.0, 0.0)).norm() <= 1e-12);
    }

    /// Criterion verdicts survive a JSON round trip unchanged.
    #[test]
    fn verdict_serialization_round_trips(
        lhs in -10.0..10.0f64,
        rhs in -10.0..10.0f64,
        idx in 0..3usize,
        witness in "[a-z ]{0,40}",
    ) {
        let status = [Status::SubcriticalProven, Status::Inconclusive, Status::SupercriticalProven][idx];
        let v = Verdict { status, lhs, rhs, witness };
        let json = serde_json::to_string(&v).unwrap();
        let back: Verdict = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.status, v.status);
        prop_assert_eq!(back.lhs, v.lhs);
        prop_assert_eq!(back.rhs, v.rhs);
        prop_assert_eq!(back.witness, v.witness);
    }

    /// Möbius maps inside the contraction class map the certified disk into
    /// itself with derivative below one.
    #[test]
    fn contraction_class_members_contract(
        delta in 0.1..0.8f64,
        eps in 0.05..2.0f64,
        tb in 0.0..0.95f64,
        tc in 0.0..0.95f64,
        td in 0.0..1.0f64,
        phb in 0.0..TAU,
        phc in 0.0..TAU,
        phd in 0.0..TAU,
    ) {
        let b = Complex64::from_polar(tb * eps, phb);
        let c = Complex64::from_polar(tc * (1.0 - delta).powi(2) / (4.0 * eps), phc);
        let d = Complex64::from_polar(td * delta, phd);
        let report = contraction_check(b, c, d, eps, delta);
        prop_assert!(report.in_class);
        prop_assert!(report.maps_in);
        prop_assert!(report.lipschitz_sup < 1.0);
    }
}

#[test]
fn laurent_roots_reconstruct_the_polynomial() {
    let mut r = rng(0x5eed_0001);
    for _ in 0..200 {
        let span = r.random_range(2..=6usize);
        let lo = r.random_range(-3..=1i64);
        let coeffs: Vec<Complex64> = (0..span)
            .map(|k| {
                let floor = if k == 0 || k == span - 1 { 0.2 } else { 0.0 };
                Complex64::from_polar(floor + r.random_range(0.0..1.0), r.random_range(0.0..TAU))
            })
            .collect();
        let p = LaurentPoly::new(lo, coeffs).unwrap();
        let roots = p.roots().unwrap();
        // Exponent span (hi − lo) is the ordinary degree after clearing w^lo.
        assert_eq!(roots.len(), p.span());
        let lead = p.coeff(p.hi());
        for k in 0..8 {
            let radius = if k % 2 == 0 { 1.3 } else { 0.7 };
            let w = Complex64::from_polar(radius, TAU * k as f64 / 8.0 + 0.13);
            let direct = p.eval(w);
            let product = roots
                .iter()
                .fold(lead * w.powi(p.lo() as i32), |acc, root| acc * (w - root));
            assert!(
                (direct - product).norm() <= 1e-7 * (1.0 + direct.norm()),
                "reconstruction defect {} at span {span}",
                (direct - product).norm()
            );
        }
    }
}

#[test]
fn circle_integral_matches_trapezoid_quadrature() {
    let mut r = rng(0x5eed_0002);
    for _ in 0..50 {
        // Build the polynomial from known roots kept away from the circle.
        let n_in = r.random_range(0..=3usize);
        let n_out = r.random_range(0..=3usize);
        let mut roots: Vec<Complex64> = Vec::new();
        for _ in 0..n_in {
            roots.push(Complex64::from_polar(
                r.random_range(0.2..0.7),
                r.random_range(0.0..TAU),
            ));
        }
        for _ in 0..n_out {
            roots.push(Complex64::from_polar(
                r.random_range(1.4..3.0),
                r.random_range(0.0..TAU),
            ));
        }
        let lead = Complex64::from_polar(r.random_range(0.2..2.0), r.random_range(0.0..TAU));
        let mut coeffs = vec![lead];
        for root in &roots {
            // Multiply by (w − root).
            let mut next = vec![c64(0.0, 0.0); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k] -= c * root;
                next[k + 1] += c;
            }
            coeffs = next;
        }
        coeffs.reverse(); // ascending powers
        let p = LaurentPoly::new(0, coeffs).unwrap();
        let integral = p.circle_log_integral().unwrap();
        const N: usize = 8192;
        let quad = (0..N)
            .map(|k| {
                let w = Complex64::from_polar(1.0, TAU * k as f64 / N as f64);
                p.eval(w).norm().ln()
            })
            .sum::<f64>()
            / N as f64;
        assert!(
            (integral - quad).abs() <= 1e-9 * (1.0 + integral.abs()),
            "integral {integral} vs quadrature {quad}"
        );
    }
}

#[test]
fn min_distance_strictly_increases_past_the_zero_radius() {
    let mut r = rng(0x5eed_0003);
    for _ in 0..100 {
        let v = random_potential(&mut r, 3, 2.0);
        let e = r.random_range(-5.0..5.0);
        let zr = zero_radius(&v, e).unwrap();
        let mut prev = min_modulus(&v, e, zr + 0.04, 2048);
        for k in 2..=21 {
            let next = min_modulus(&v, e, zr + 0.04 * k as f64, 2048);
            assert!(
                next > prev * (1.0 - 1e-12),
                "distance curve not increasing at eps {} for energy {e}",
                zr + 0.04 * k as f64
            );
            prev = next;
        }
    }
}

#[test]
fn uniform_radius_dominates_per_energy_radii() {
    let mut r = rng(0x5eed_0004);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 50 {
        attempts += 1;
        assert!(
            attempts < 2_000,
            "uniform radius kept failing on random draws"
        );
        let v = random_potential(&mut r, 3, 1.5);
        let Ok(uniform) = herman_radius_uniform(&v) else {
            continue;
        };
        let hull = 2.0 + v.lambda_abs_sum();
        for _ in 0..5 {
            let e = r.random_range(-hull..hull);
            let per_energy = herman_radius(&v, e).unwrap();
            assert!(
                per_energy <= uniform + 1e-3,
                "per-energy radius {per_energy} exceeds uniform {uniform} at E={e}"
            );
            checked += 1;
        }
    }
}

#[test]
fn exponent_is_even_and_convex_in_the_strip_height() {
    let mut r = rng(0x5eed_0005);
    for _ in 0..5 {
        let v = random_potential(&mut r, 2, 1.5);
        let e = r.random_range(-3.0..3.0);
        let grab = |eps: f64| lyapunov(&v, e, GOLDEN_MEAN, eps, 20_000, 8);
        let lo = grab(0.15);
        let mid = grab(0.3);
        let hi = grab(0.45);
        let neg = grab(-0.3);
        let noise = 3.0 * (mid.stderr + neg.stderr) + 1e-3;
        assert!(
            (mid.value - neg.value).abs() <= noise,
            "evenness defect {} above noise {noise}",
            (mid.value - neg.value).abs()
        );
        let convexity = lo.value + hi.value - 2.0 * mid.value;
        let noise = 3.0 * (lo.stderr + hi.stderr + 2.0 * mid.stderr) + 1e-3;
        assert!(
            convexity >= -noise,
            "convexity defect {convexity} below -{noise}"
        );
    }
}

#[test]
fn section_satisfies_its_pullback_equation() {
    let mut r = rng(0x5eed_0006);
    for _ in 0..10 {
        let v = random_potential(&mut r, 2, 0.2);
        let e = 2.0 * v.lambda_abs_sum() + r.random_range(3.6..4.6);
        let eps = 0.05;
        let x = r.random_range(0.0..1.0);
        let here = section_value(&v, e, GOLDEN_MEAN, eps, x).unwrap();
        let back = section_value(&v, e, GOLDEN_MEAN, eps, x - GOLDEN_MEAN).unwrap();
        let u = c64(e, 0.0) - v.eval_complex(x - GOLDEN_MEAN, eps);
        let predicted = (u - back).inv();
        assert!(
            (here - predicted).norm() <= 1e-9,
            "pullback equation defect {}",
            (here - predicted).norm()
        );
    }
}

/// Draws until `count` members of each closed-form family pass the condition
/// with a small relative margin, then checks that the numeric uniform
/// criterion proves each of them.
#[test]
fn closed_forms_imply_the_uniform_criterion() {
    let mut r = rng(0x5eed_0007);
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    // Two-coefficient family (degree 2).
    while accepted < 340 {
        attempts += 1;
        assert!(
            attempts < 200_000,
            "two-coefficient family rejected too often"
        );
        let l1 = r.random_range(0.0..1.0);
        let l2 = r.random_range(0.001..0.3);
        if !closed_form_m2(l1 * 1.001, l2 * 1.001) {
            continue;
        }
        let ph1 = r.random_range(0.0..TAU);
        let ph2 = r.random_range(0.0..TAU);
        let v = TrigPoly::new(
            vec![l1 * ph1.cos(), l2 * ph2.cos()],
            vec![l1 * ph1.sin(), l2 * ph2.sin()],
        )
        .unwrap();
        let verdict = subcritical_uniform(&v).unwrap();
        assert_eq!(
            verdict.status,
            Status::SubcriticalProven,
            "two-coefficient form passed ({l1},{l2}) but criterion said {:?}",
            verdict.status
        );
        accepted += 1;
    }
    // First-plus-top family at degrees 3 and 4.
    accepted = 0;
    attempts = 0;
    while accepted < 330 {
        attempts += 1;
        assert!(
            attempts < 200_000,
            "first-plus-top family rejected too often"
        );
        let m = if r.random::<bool>() { 3 } else { 4 };
        let l1 = r.random_range(0.0..0.5);
        let lm = r.random_range(1e-6..0.02);
        if !ghm_condition(l1 * 1.001, lm * 1.001, m) {
            continue;
        }
        let mut a = vec![0.0; m];
        a[0] = l1;
        a[m - 1] = lm;
        let v = TrigPoly::from_cos(a).unwrap();
        let verdict = subcritical_uniform(&v).unwrap();
        assert_eq!(
            verdict.status,
            Status::SubcriticalProven,
            "first-plus-top form passed ({l1},{lm},{m}) but criterion said {:?}",
            verdict.status
        );
        accepted += 1;
    }
    // Odd two-term family at frequency pairs (1,2), (2,4), (3,6).
    accepted = 0;
    attempts = 0;
    while accepted < 330 {
        attempts += 1;
        assert!(attempts < 200_000, "odd two-term family rejected too often");
        let pairs = [(1usize, 2usize), (2, 4), (3, 6)];
        let (n, m) = pairs[r.random_range(0..pairs.len())];
        let bn = r.random_range(0.0..0.4);
        let bm = r.random_range(1e-6..0.3);
        if !odd_two_term_condition(bn * 1.001, bm * 1.001, n, m).unwrap() {
            continue;
        }
        let mut b = vec![0.0; m];
        b[n - 1] = bn;
        b[m - 1] = bm;
        let v = TrigPoly::new(vec![0.0; m], b).unwrap();
        // The odd form certifies the center energy, which always belongs to
        // the spectrum for odd potentials.
        let verdict = subcritical_energy(&v, 0.0).unwrap();
        assert_eq!(
            verdict.status,
            Status::SubcriticalProven,
            "odd form passed ({bn},{bm},{n},{m}) but criterion said {:?}",
            verdict.status
        );
        accepted += 1;
    }
}

#[test]
fn stefanescu_bound_dominates_the_largest_positive_root() {
    let mut r = rng(0x5eed_0008);
    for _ in 0..1000 {
        let v = random_potential(&mut r, 4, 1.5);
        let p = root_poly(&v);
        let bound = stefanescu_bound(&p);
        let root = largest_positive_root(&p).unwrap();
        assert!(
            bound >= root - 1e-9,
            "bound {bound} fell below the root {root}"
        );
    }
}

#[test]
fn quadratic_root_closed_form_matches_bisection() {
    let mut r = rng(0x5eed_0009);
    for _ in 0..1000 {
        let l1 = r.random_range(0.0..2.0);
        let l2 = r.random_range(0.01..2.0);
        let closed = m2_root(l1, l2);
        let v = TrigPoly::from_cos(vec![l1, l2]).unwrap();
        let bisected = largest_positive_root(&root_poly(&v)).unwrap();
        assert!(
            (closed - bisected).abs() <= 1e-8 * (1.0 + closed),
            "closed form {closed} vs bisection {bisected} at ({l1},{l2})"
        );
    }
}

#[test]
fn shrinking_lower_coefficients_preserves_the_uniform_proof() {
    let mut r = rng(0x5eed_000a);
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < 100 {
        attempts += 1;
        assert!(attempts < 20_000, "draw scheme rejected too often");
        let m = r.random_range(2..=4usize);
        // Top modulus small enough that proofs are plausible; lower
        // coefficients stay modest so thresholds barely move.
        let top = 4.4f64.powi(1 - m as i32) * r.random_range(0.1..0.5);
        let phase = r.random_range(0.0..TAU);
        let mut a: Vec<f64> = (0..m).map(|_| r.random_range(-0.05..0.05)).collect();
        let mut b: Vec<f64> = (0..m).map(|_| r.random_range(-0.05..0.05)).collect();
        a[m - 1] = top * phase.cos();
        b[m - 1] = top * phase.sin();
        let v = TrigPoly::new(a.clone(), b.clone()).unwrap();
        if subcritical_uniform(&v).unwrap().status != Status::SubcriticalProven {
            continue;
        }
        for t in [0.8, 0.5, 0.2] {
            let mut at = a.clone();
            let mut bt = b.clone();
            for j in 0..m - 1 {
                at[j] *= t;
                bt[j] *= t;
            }
            let vt = TrigPoly::new(at, bt).unwrap();
            assert_eq!(
                subcritical_uniform(&vt).unwrap().status,
                Status::SubcriticalProven,
                "proof lost after shrinking lower coefficients by {t}"
            );
        }
        accepted += 1;
    }
}

#[test]
fn jensen_routes_agree_to_eight_digits() {
    let mut r = rng(0x5eed_000b);
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < 100 {
        attempts += 1;
        assert!(attempts < 5_000, "admissible inner heights too rare");
        let v = random_potential(&mut r, 3, 2.0);
        let hull = 2.0 + v.lambda_abs_sum();
        let e = r.random_range(-hull..hull);
        let Ok(Some(eps1)) = find_eps1(&v, e, 0.05) else {
            continue;
        };
        let laurent = v.to_laurent(e, eps1);
        let Ok(roots) = laurent.roots() else { continue };
        if roots.iter().any(|root| (root.norm() - 1.0).abs() < 1e-7) {
            continue;
        }
        let disk: f64 = roots
            .iter()
            .filter(|root| root.norm() < 1.0)
            .map(|root| -root.norm().ln())
            .sum::<f64>()
            - LN_2;
        let direct = laurent.circle_log_integral().unwrap()
            - LN_2
            - v.lambda_top_abs().ln()
            - TAU * v.degree() as f64 * eps1;
        assert!(
            (disk - direct).abs() <= 1e-8 * (1.0 + disk.abs()),
            "disk route {disk} vs direct route {direct}"
        );
        let gamma = jensen_gamma(&v, e, eps1).unwrap();
        assert!((gamma - disk).abs() <= 1e-9);
        accepted += 1;
    }
}

#[test]
fn lower_bound_report_satisfies_its_chord_identity() {
    let mut r = rng(0x5eed_000c);
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < 30 {
        attempts += 1;
        assert!(attempts < 2_000, "admissible chord configurations too rare");
        let v = random_potential(&mut r, 3, 2.0);
        let hull = 2.0 + v.lambda_abs_sum();
        let e = r.random_range(-hull..hull);
        let Ok(Some(eps1)) = find_eps1(&v, e, 0.05) else {
            continue;
        };
        let eps_h = herman_radius(&v, e).unwrap();
        if eps1 >= eps_h {
            continue;
        }
        let Ok(report) = herman_bound_with_eps1(&v, e, eps1, eps_h) else {
            continue;
        };
        let gamma = jensen_gamma(&v, e, eps1).unwrap();
        let expected = v.lambda_top_abs().ln() + gamma * eps_h / (eps_h - eps1);
        assert!(
            (report.bound - expected).abs() <= 1e-12 * (1.0 + expected.abs()),
            "chord identity defect {}",
            (report.bound - expected).abs()
        );
        // Rebuilding the report must give bitwise-identical numbers.
        let again = herman_bound_with_eps1(&v, e, eps1, eps_h).unwrap();
        assert_eq!(report.bound.to_bits(), again.bound.to_bits());
        assert_eq!(report.gamma.to_bits(), again.gamma.to_bits());
        accepted += 1;
    }
}

#[test]
fn certified_lower_bound_holds_for_the_measured_exponent() {
    let v = TrigPoly::from_cos(vec![9.0, 0.8]).unwrap();
    let mut r = rng(0x5eed_000d);
    for _ in 0..10 {
        let e = r.random_range(-20.0..20.0);
        let eps_h = herman_radius(&v, e).unwrap();
        let eps1 = find_eps1(&v, e, 0.05).unwrap().expect("admissible height");
        let report = herman_bound_with_eps1(&v, e, eps1, eps_h).unwrap();
        let le = lyapunov(&v, e, GOLDEN_MEAN, 0.0, 100_000, 32);
        let slack = (3.0 * le.stderr).max(0.02);
        assert!(
            le.value >= report.bound - slack,
            "measured exponent {} fell below certified bound {} at E={e}",
            le.value,
            report.bound
        );
    }
}

#[test]
fn sweep_output_is_byte_deterministic() {
    let v = TrigPoly::from_cos(vec![9.0, 0.8]).unwrap();
    let mut first = Vec::new();
    let mut second = Vec::new();
    supercritical_sweep(&v, -3.0, 3.0, 0.5, true, &mut first).unwrap();
    supercritical_sweep(&v, -3.0, 3.0, 0.5, true, &mut second).unwrap();
    assert_eq!(first, second);
    assert!(first.starts_with(b"E,eps1,epsH,gamma,bound,status\n"));
}

#[test]
fn cli_sweep_is_byte_deterministic() {
    let dir = std::env::temp_dir().join(format!("cocycle-lab-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let model = dir.join("model.json");
    std::fs::write(&model, r#"{"a": [9.0, 0.8], "b": [0.0, 0.0]}"#).unwrap();
    let run = |out: &std::path::Path| {
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_cocycle-lab"))
            .args([
                "sweep",
                "--model",
                model.to_str().unwrap(),
                "--emin",
                "-1",
                "--emax",
                "1",
                "--step",
                "0.5",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .expect("binary runs");
        assert!(status.success());
    };
    let out1 = dir.join("sweep1.csv");
    let out2 = dir.join("sweep2.csv");
    run(&out1);
    run(&out2);
    let b1 = std::fs::read(&out1).unwrap();
    let b2 = std::fs::read(&out2).unwrap();
    assert_eq!(b1, b2);
    assert!(b1.starts_with(b"E,epsH,threshold,verdict,accel0,bound\n"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn jacobi_determinant_factorizes_over_the_hopping() {
    let mut r = rng(0x5eed_000e);
    for _ in 0..100 {
        let span = r.random_range(2..=4usize);
        let lo = r.random_range(-2..=1i64);
        let coeffs: Vec<Complex64> = (0..span)
            .map(|k| {
                let floor = if k == 0 || k == span - 1 { 0.2 } else { 0.0 };
                Complex64::from_polar(floor + r.random_range(0.0..1.0), r.random_range(0.0..TAU))
            })
            .collect();
        let c = LaurentPoly::new(lo, coeffs).unwrap();
        let v = random_potential(&mut r, 2, 1.0);
        let m = JacobiModel::new(c.clone(), v).unwrap();
        let (e, alpha, x, eps) = (
            r.random_range(-3.0..3.0),
            r.random_range(0.1..0.9),
            r.random_range(0.0..1.0),
            r.random_range(0.0..0.5),
        );
        let det = jacobi_step(&m, e, alpha, x, eps).det();
        let w_f = Complex64::from_polar((-TAU * eps).exp(), TAU * x);
        let w_r = Complex64::from_polar((TAU * eps).exp(), TAU * (x - alpha));
        let expected = c.eval(w_r).conj() * c.eval(w_f);
        assert!(
            (det - expected).norm() <= 1e-10 * (1.0 + expected.norm()),
            "determinant defect {}",
            (det - expected).norm()
        );
    }
}

#[test]
fn single_harmonic_hopping_reduces_to_the_scalar_cocycle() {
    let mut r = rng(0x5eed_000f);
    for _ in 0..3 {
        let k = r.random_range(-2..=2i64);
        let mu = Complex64::from_polar(r.random_range(0.3..2.0), r.random_range(0.0..TAU));
        let c = LaurentPoly::new(k, vec![mu]).unwrap();
        let v = random_potential(&mut r, 2, 1.0);
        let (e, eps) = (r.random_range(-2.0..2.0), r.random_range(0.0..0.4));
        let full = jacobi_lyapunov_with(&c, &v, e, GOLDEN_MEAN, eps, 20_000, 8);
        let reduced = degenerate_lyapunov(&c, &v, e, GOLDEN_MEAN, eps, 20_000, 8).unwrap();
        let tol = 3.0 * (full.stderr + reduced.stderr) + 1e-3;
        assert!(
            (full.value - (mu.norm().ln() + reduced.value)).abs() <= tol,
            "reduction defect {}",
            (full.value - (mu.norm().ln() + reduced.value)).abs()
        );
    }
}

#[test]
fn jacobi_acceleration_snaps_to_half_integers() {
    let mut r = rng(0x5eed_0010);
    let c = LaurentPoly::new(0, vec![c64(1.0, 0.0), c64(0.3, 0.1)]).unwrap();
    for _ in 0..5 {
        let v = random_potential(&mut r, 2, 1.5);
        let m = JacobiModel::new(c.clone(), v).unwrap();
        let e = r.random_range(-2.0..2.0);
        let a = jacobi_acceleration(&m, e, GOLDEN_MEAN, 1.5, 0.02, 20_000, 8).unwrap();
        assert_eq!(
            (2.0 * a.snapped).fract(),
            0.0,
            "snapped {} not in half-integers",
            a.snapped
        );
        assert!((a.raw - a.snapped).abs() <= 0.125);
    }
}

#[test]
fn potential_dominant_exponent_slope_is_the_top_degree() {
    let c = LaurentPoly::new(0, vec![c64(1.0, 0.0), c64(0.2, 0.0)]).unwrap();
    let v = TrigPoly::from_cos(vec![0.4, 0.9]).unwrap();
    let m = JacobiModel::new(c, v).unwrap();
    let e = 0.7;
    let eps_h = jacobi_herman_radius(&m, e, GOLDEN_MEAN).unwrap();
    let lo = jacobi_lyapunov_raw(&m, e, GOLDEN_MEAN, eps_h + 0.1, 50_000, 16);
    let hi = jacobi_lyapunov_raw(&m, e, GOLDEN_MEAN, eps_h + 0.5, 50_000, 16);
    let slope = (hi.value - lo.value) / (TAU * 0.4);
    let top = m.top_degree() as f64;
    assert!(
        (slope - top).abs() <= 0.02 * top,
        "asymptotic slope {slope} vs top degree {top}"
    );
}

#[test]
fn balanced_constant_depends_on_the_frequency() {
    let c = LaurentPoly::new(0, vec![c64(0.3, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]).unwrap();
    let v = TrigPoly::from_cos(vec![1.2]).unwrap();
    let m = JacobiModel::new(c, v).unwrap();
    let here = balanced_constant(&m, GOLDEN_MEAN);
    let shifted = balanced_constant(&m, GOLDEN_MEAN - 0.5);
    assert!(
        (here - shifted).abs() > 1e-3,
        "balanced constant failed to distinguish frequencies: {here} vs {shifted}"
    );
}

#[test]
fn box_parameters_certify_subcriticality_end_to_end() {
    // Degree 3 with explicit middle-coefficient budget.
    let (mu, kappa) = amo_limit_params(0.8, 3, 0.1, 0.1, 5e-5).unwrap();
    assert!(5e-5 <= mu);
    let kappa = kappa.expect("degree 3 has a middle coefficient");
    let v = TrigPoly::from_cos(vec![0.8, 0.999 * kappa, 5e-5]).unwrap();
    assert_eq!(
        subcritical_uniform(&v).unwrap().status,
        Status::SubcriticalProven
    );
    // Degree 2 has no middle coefficients.
    let (mu2, kappa2) = amo_limit_params(0.8, 2, 0.1, 0.1, 1e-3).unwrap();
    assert!(kappa2.is_none());
    assert!(1e-3 <= mu2);
    let v2 = TrigPoly::from_cos(vec![0.8, 1e-3]).unwrap();
    assert_eq!(
        subcritical_uniform(&v2).unwrap().status,
        Status::SubcriticalProven
    );
}

#[test]
fn band_sets_are_sorted_disjoint_bounded_and_nonempty() {
    let mut r = rng(0x5eed_0011);
    for _ in 0..50 {
        let v = random_potential(&mut r, 2, 1.5);
        let q = r.random_range(1..=12u64);
        let p = loop {
            let p = r.random_range(1..=q.max(2) as i64);
            if gcd_u64(p.unsigned_abs(), q) == 1 {
                break p;
            }
        };
        let x = r.random_range(0.0..1.0);
        let bands = band_spectrum(&v, p, q, x).unwrap();
        assert!(!bands.is_empty(), "empty spectrum at q={q}");
        assert!(bands.len() <= q as usize, "more than q bands at q={q}");
        let radius = spectral_radius_bound(&v) + 1e-6;
        let mut prev_hi = f64::NEG_INFINITY;
        for band in &bands {
            assert!(band.lo <= band.hi);
            assert!(band.lo >= -radius && band.hi <= radius);
            assert!(band.lo > prev_hi - 1e-7, "bands overlap at q={q}");
            prev_hi = band.hi;
            let mid = 0.5 * (band.lo + band.hi);
            let delta = discriminant(&v, p, q, x, mid).unwrap();
            assert!(delta.abs() <= 2.0 + 1e-6, "midpoint outside band at q={q}");
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
fn deeper_convergents_refine_the_spectrum_approximation() {
    let amo = TrigPoly::from_cos(vec![0.5]).unwrap();
    let shallow = spectrum_approx(&amo, GOLDEN_MEAN, 4, 16).unwrap();
    let deep = spectrum_approx(&amo, GOLDEN_MEAN, 6, 16).unwrap();
    assert!(deep.convergents.len() > shallow.convergents.len());
    for band in &deep.bands {
        assert!(
            shallow
                .bands
                .iter()
                .any(|outer| outer.lo - 1e-9 <= band.lo && band.hi <= outer.hi + 1e-9),
            "deep band [{}, {}] escapes the shallow approximation",
            band.lo,
            band.hi
        );
    }
}
