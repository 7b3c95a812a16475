use std::f64::consts::{FRAC_PI_2, PI};

use hall_core::kernels::*;
use hall_core::quad::{integrate_adaptive, integrate_iterated_1d, AdaptiveConfig};

fn cfg(rel: f64) -> AdaptiveConfig {
    AdaptiveConfig::with_rel_tol(rel)
}

/// Integral of `f` over the box `[0, hi_0] x ... x [0, hi_k]`.
fn integrate_box(hi: &[f64], rel: f64, f: impl Fn(&[f64]) -> f64 + Sync) -> f64 {
    let volume: f64 = hi.iter().product();
    integrate_adaptive(
        hi.len(),
        |u| {
            let mut x = [0.0; 8];
            for (i, (&ui, &h)) in u.iter().zip(hi).enumerate() {
                x[i] = ui * h;
            }
            f(&x[..hi.len()])
        },
        &cfg(rel),
    )
    .unwrap()
    .value
        * volume
}

#[test]
fn two_level_bures_density_is_normalized() {
    let total = integrate_box(&[FRAC_PI_2, 2.0 * PI, PI], 1e-12, |x| {
        bures_density_n2(x[0], x[1], x[2]).unwrap()
    });
    assert!((total - 1.0).abs() < 1e-10, "{total}");
}

#[test]
fn two_level_quasi_density_is_normalized_to_quoted_precision() {
    let total = integrate_box(&[FRAC_PI_2, 2.0 * PI, PI], 1e-8, |x| {
        quasi_density_n2(x[0], x[1], x[2]).unwrap()
    });
    assert!((total - 1.0).abs() < 1e-4, "{total}");
}

#[test]
fn conditional_su3_weight_volume() {
    let h = FRAC_PI_2;
    let total = integrate_box(&[PI, h, PI, h, PI, h], 1e-8, |x| {
        haar_weight(
            3,
            &HaarAngles::Su3 {
                alpha: x[0],
                beta: x[1],
                gamma: x[2],
                kappa: x[3],
                a: x[4],
                b: x[5],
            },
        )
        .unwrap()
    });
    assert!((total / SU3_CONDITIONAL_HAAR_VOLUME - 1.0).abs() < 1e-8, "{total}");
}

#[test]
fn three_level_density_factorizes_over_haar_angles() {
    let haar = HaarAngles::Su3 {
        alpha: 0.3,
        beta: 0.7,
        gamma: 2.0,
        kappa: 1.1,
        a: 2.9,
        b: 0.4,
    };
    let w = haar_weight(3, &haar).unwrap();
    for (t, p) in [(0.5, 0.3), (2.0, 1.0), (3.0, 2.5)] {
        let full = bures_density_n3(t, p, &haar).unwrap();
        let expected = bures_bivariate_n3(t, p) * w / SU3_CONDITIONAL_HAAR_VOLUME;
        assert!((full - expected).abs() <= 1e-14 * expected.abs().max(1e-300));
        let full = quasi_density_n3(t, p, &haar).unwrap();
        let expected = quasi_bivariate_n3(t, p) * w / SU3_CONDITIONAL_HAAR_VOLUME;
        assert!((full - expected).abs() <= 1e-14 * expected.abs().max(1e-300));
    }
}

#[test]
fn three_level_bures_density_is_normalized() {
    let total = integrate_box(&[PI, PI], 1e-10, |x| bures_bivariate_n3(x[0], x[1]));
    assert!((total - 1.0).abs() < 1e-6, "{total}");
}

#[test]
fn three_level_marginals_are_normalized() {
    let theta = integrate_iterated_1d(bures_marginal_theta_n3, 0.0, PI, &cfg(1e-13)).unwrap();
    assert!((theta.value - 1.0).abs() < 1e-10, "{}", theta.value);
    let phi = integrate_iterated_1d(bures_marginal_phi_n3, 0.0, PI, &cfg(1e-12)).unwrap();
    assert!((phi.value - 1.0).abs() < 1e-6, "{}", phi.value);
}

#[test]
fn numerical_marginalization_matches_theta_marginal() {
    for i in 0..50 {
        let theta = PI * (i as f64 + 0.5) / 50.0;
        let numeric = PI * integrate_adaptive(1, |u| bures_bivariate_n3(theta, PI * u[0]), &cfg(1e-11)).unwrap().value;
        let closed = bures_marginal_theta_n3(theta);
        assert!((numeric - closed).abs() < 1e-5, "theta = {theta}: {numeric} vs {closed}");
    }
}

#[test]
fn numerical_marginalization_matches_phi_marginal() {
    for i in 0..20 {
        let phi = PI * (i as f64 + 0.5) / 20.0;
        let numeric = PI * integrate_adaptive(1, |u| bures_bivariate_n3(PI * u[0], phi), &cfg(1e-11)).unwrap().value;
        let closed = bures_marginal_phi_n3(phi);
        assert!((numeric - closed).abs() < 1e-5, "phi = {phi}: {numeric} vs {closed}");
    }
}

#[test]
fn three_level_quasi_density_is_normalized_to_quoted_precision() {
    let total = integrate_box(&[PI, PI], 1e-7, |x| quasi_bivariate_n3(x[0], x[1]));
    assert!((total - 1.0).abs() < 1e-3, "{total}");
}

fn grid_argmax(f: impl Fn(f64, f64) -> f64) -> (f64, f64) {
    let m = 400;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..m {
        for j in 0..m {
            let (t, p) = (PI * (i as f64 + 0.5) / m as f64, PI * (j as f64 + 0.5) / m as f64);
            let v = f(t, p);
            if v > best.0 {
                best = (v, t, p);
            }
        }
    }
    (best.1, best.2)
}

#[test]
fn quasi_and_bures_bivariate_maxima_are_close() {
    let (tb, pb) = grid_argmax(bures_bivariate_n3);
    let (tq, pq) = grid_argmax(quasi_bivariate_n3);
    // the surfaces are symmetric in φ -> π - φ; compare the folded location
    let fold = |p: f64| p.min(PI - p);
    assert!((tb - tq).abs() < 0.05 && (fold(pb) - fold(pq)).abs() < 0.05, "({tb}, {pb}) vs ({tq}, {pq})");
}

#[test]
fn phi_marginal_endpoint_limits() {
    let limit = 20.0 / (9.0 * PI);
    for phi in [0.0, 1e-6, PI - 1e-6, PI] {
        assert!((bures_marginal_phi_n3(phi) - limit).abs() < 1e-5);
    }
}

#[test]
fn theta_marginal_extrema() {
    let e = bures_marginal_theta_n3_extrema();
    let close = |xs: &[f64], x: f64| xs.iter().any(|y| (y - x).abs() < 1e-3);
    for x in [0.914793, 2.2795, PI] {
        assert!(close(&e.maxima, x), "{x} not in {:?}", e.maxima);
    }
    for x in [0.0, 1.59995, 2.61732] {
        assert!(close(&e.minima, x), "{x} not in {:?}", e.minima);
    }
}

#[test]
fn redundancy_shifts_with_copy_count() {
    let w = bloch_volume_density(bures_marginal_theta_n2(0.6), 0.6);
    let a = redundancy_n2(0.6, 100.0, w).unwrap();
    let b = redundancy_n2(0.6, 200.0, w).unwrap();
    assert!((b - a - 1.5 * 2f64.ln()).abs() < 1e-13);
    assert!(redundancy_n2(0.0, 1.0, w).is_err());
    assert!(redundancy_n2(FRAC_PI_2, 1.0, w).is_err());
}
