mod common;

use dyndiv::engine::map_is_positive_qubit;
use dyndiv::linalg::{c, max_abs_diff, pauli, ComplexMatrix};
use dyndiv::phasecov::*;
use dyndiv::rates::RateFunction;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{phase_rotation, random_density};

fn bloch(rho: &ComplexMatrix) -> [f64; 3] {
    [1, 2, 3].map(|k| (rho * pauli(k)).trace().re)
}

/// Classic RK4 on `ż = −(γ₊+γ₋) z + (γ₊ − γ₋)`.
fn z_ode(r: &PhaseCovRates, z0: f64, t: f64, steps: usize) -> f64 {
    let f = |tau: f64, z: f64| {
        let [gp, gm, _] = r.at(tau);
        -(gp + gm) * z + (gp - gm)
    };
    let h = t / steps as f64;
    let mut z = z0;
    for i in 0..steps {
        let s = i as f64 * h;
        let k1 = f(s, z);
        let k2 = f(s + 0.5 * h, z + 0.5 * h * k1);
        let k3 = f(s + 0.5 * h, z + 0.5 * h * k2);
        let k4 = f(s + h, z + h * k3);
        z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    z
}

fn params() -> impl Strategy<Value = PhaseCovParams> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(lambda1, lambda3, lambda_star)| {
        PhaseCovParams {
            lambda1,
            lambda3,
            lambda_star,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sqrt_condition_is_sufficient(g in prop::array::uniform3(-2.0f64..2.0)) {
        let [gp, gm, g3] = g;
        if p_divisible_pointwise(gp, gm, g3) {
            prop_assert!(p_divisible_generator(gp, gm, g3));
        }
    }

    /// Between `−2√(γ₊γ₋)` and `−√(γ₊γ₋)` the short-time propagators stay positive.
    #[test]
    fn band_below_sqrt_condition_is_positive(gp in 0.3f64..2.0, gm in 0.3f64..2.0, s in 0.05f64..0.95) {
        let root = (gp * gm).sqrt();
        let g3 = -root * (1.0 + s);
        prop_assert!(!p_divisible_pointwise(gp, gm, g3));
        let r = PhaseCovRates::constant(gp, gm, g3);
        for h in [0.01, 0.05, 0.1] {
            let v = params_between(&r, 0.0, h, 1e-12).unwrap();
            prop_assert!(map_is_positive_qubit(&superoperator(&v)).unwrap());
        }
    }

    #[test]
    fn map_is_covariant(p in params(), phi in -3.2f64..3.2, seed in any::<u64>()) {
        let rho = random_density(&mut ChaCha8Rng::seed_from_u64(seed), 2);
        let u = phase_rotation(phi);
        let lhs = apply_map(&p, &(&u * &rho * u.adjoint())).unwrap();
        let rhs = &u * apply_map(&p, &rho).unwrap() * u.adjoint();
        prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn map_is_tp_and_hermiticity_preserving(p in params(), seed in any::<u64>()) {
        let rho = random_density(&mut ChaCha8Rng::seed_from_u64(seed), 2);
        let out = apply_map(&p, &rho).unwrap();
        prop_assert!((out.trace().re - 1.0).abs() < 1e-14);
        prop_assert!(max_abs_diff(&out, &out.adjoint()) < 1e-14);
        let [x, y, z] = bloch(&rho);
        let expected = p.bloch_image([x, y, z]);
        let got = bloch(&out);
        for k in 0..3 {
            prop_assert!((got[k] - expected[k]).abs() < 1e-13);
        }
    }

    #[test]
    fn superoperator_matches_apply(p in params(), seed in any::<u64>()) {
        let rho = random_density(&mut ChaCha8Rng::seed_from_u64(seed), 2);
        prop_assert!(max_abs_diff(&superoperator(&p).apply(&rho), &apply_map(&p, &rho).unwrap()) < 1e-14);
    }

    #[test]
    fn stationary_state_is_fixed(l3 in -0.9f64..0.9, ls in -0.5f64..0.5) {
        let p = PhaseCovParams { lambda1: 0.3, lambda3: l3, lambda_star: ls };
        let rho = stationary_state(l3, ls).unwrap();
        prop_assert!(max_abs_diff(&apply_map(&p, &rho).unwrap(), &rho) < 1e-12);
    }

    #[test]
    fn beta_round_trip(g in prop::array::uniform3(-2.0f64..2.0)) {
        let back = rates_from_beta(&beta_from_rates(g[0], g[1], g[2]));
        for k in 0..3 {
            prop_assert!((back[k] - g[k]).abs() <= 1e-14);
        }
    }

    #[test]
    fn equal_pumping_has_no_shift(a in -1.0f64..2.0, b in 0.1f64..2.0, t in 0.0f64..3.0) {
        let rate = RateFunction::tanh(a, b, 0.5);
        let r = PhaseCovRates::new(rate.clone(), rate, RateFunction::constant(0.3)).unwrap();
        prop_assert!(params_at(&r, t, 1e-12).unwrap().lambda_star.abs() < 1e-12);
    }

    #[test]
    fn amplitude_damping_closed_form(a in 0.0f64..3.0, t in 0.0f64..5.0) {
        let p = params_at(&PhaseCovRates::constant(a, 0.0, 0.0), t, 1e-12).unwrap();
        let e = (-a * t).exp();
        prop_assert!((p.lambda3 - e).abs() < 1e-12);
        prop_assert!((p.lambda1 - e.sqrt()).abs() < 1e-12);
        prop_assert!((p.lambda_star - (1.0 - e)).abs() < 1e-10);
    }

    #[test]
    fn quadrature_matches_bloch_ode(
        a in 0.0f64..1.5, b in -1.0f64..1.0, w in 0.2f64..2.0, m in 0.0f64..1.0, z0 in -1.0f64..1.0,
    ) {
        let r = PhaseCovRates::new(
            RateFunction::tanh(b, w, a + b.abs()),
            RateFunction::polynomial(vec![m, 0.1]),
            RateFunction::constant(0.2),
        ).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let p = params_at(&r, t, 1e-12).unwrap();
            let z = z_ode(&r, z0, t, 2000);
            prop_assert!((p.lambda3 * z0 + p.lambda_star - z).abs() < 1e-6);
        }
    }

    /// For constant rates the generator criterion decides whether short-time
    /// propagators keep the Bloch ball.
    #[test]
    fn p_criterion_matches_short_time_positivity(g in prop::array::uniform3(-1.0f64..2.0)) {
        let [gp, gm, g3] = g;
        let margin = [gp, gm, g3 + 2.0 * (gp * gm).max(0.0).sqrt()]
            .iter()
            .fold(f64::INFINITY, |acc, x| if *x < 0.0 { acc.min(-x) } else { acc });
        prop_assume!(margin == f64::INFINITY || margin > 0.2);
        let r = PhaseCovRates::constant(gp, gm, g3);
        let expected = p_divisible_generator(gp, gm, g3);
        for h in [0.05, 0.1] {
            let v = params_between(&r, 0.0, h, 1e-12).unwrap();
            let positive = map_is_positive_qubit(&superoperator(&v)).unwrap();
            if expected {
                prop_assert!(positive);
            } else if h == 0.05 {
                prop_assert!(!positive);
            }
        }
    }
}

#[test]
fn cp_region_is_inside_p_and_d_regions() {
    let axis: Vec<f64> = (0..=20).map(|i| -2.0 + 0.2 * i as f64).collect();
    for &gp in &axis {
        for &gm in &axis {
            for &g3 in &axis {
                if cp_divisible_pointwise(gp, gm, g3) {
                    assert!(p_divisible_pointwise(gp, gm, g3));
                    assert!(p_divisible_generator(gp, gm, g3));
                    assert!(d_sufficient_pointwise(gp, gm, g3));
                }
                if beta_region(gp, gm, g3) {
                    assert!(p_divisible_generator(gp, gm, g3), "{gp} {gm} {g3}");
                }
            }
        }
    }
}

#[test]
fn beta_region_leaves_the_sqrt_condition() {
    assert!(beta_region(0.2, 0.2, -0.4));
    assert!(!p_divisible_pointwise(0.2, 0.2, -0.4));
    let v = params_between(&PhaseCovRates::constant(0.2, 0.2, -0.4), 0.0, 0.1, 1e-12).unwrap();
    assert!(map_is_positive_qubit(&superoperator(&v)).unwrap());
}

#[test]
fn amplitude_damping_saturates_cp_boundary() {
    let r = PhaseCovRates::constant(1.0, 0.0, 0.0);
    for i in 0..=50 {
        let p = params_at(&r, 0.1 * i as f64, 1e-12).unwrap();
        assert!(cp_static(&p));
        let gap = 4.0 * p.lambda1 * p.lambda1 + p.lambda_star * p.lambda_star - (1.0 + p.lambda3).powi(2);
        assert!(gap.abs() < 1e-12);
    }
}

#[test]
fn amplitude_damping_limit_state() {
    let r = PhaseCovRates::constant(1.0, 0.0, 0.0);
    let p = params_at(&r, 30.0, 1e-12).unwrap();
    let rho = stationary_state(p.lambda3, p.lambda_star).unwrap();
    let ground = (ComplexMatrix::identity(2, 2) + pauli(3)) * c(0.5);
    assert!(max_abs_diff(&rho, &ground) < 1e-12);
}
