mod common;

use dyndiv::engine::{map_is_cp, map_is_positive_qubit};
use dyndiv::linalg::{c, max_abs_diff, pauli, ComplexMatrix, SuperOperator, PSD_TOL};
use dyndiv::qubit_pauli::*;
use dyndiv::rates::RateFunction;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rates() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-2.0f64..2.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn j_round_trip(g in rates()) {
        let back = rates_from_j(&j_from_rates(g));
        for (a, b) in back.iter().zip(g) {
            prop_assert!((a - b).abs() <= 1e-14);
        }
    }

    #[test]
    fn d_and_p_verdicts_coincide(g in rates()) {
        let v = classify_pointwise(g);
        prop_assert_eq!(v.p, v.d);
        if v.cp {
            prop_assert!(v.d);
        }
    }

    #[test]
    fn eigenvalues_act_on_paulis(l in prop::array::uniform3(-1.0f64..1.0)) {
        let m = map_from_eigenvalues(&PauliEigenvalues(l));
        for k in 1..=3 {
            let s = pauli(k);
            prop_assert!(max_abs_diff(&m.apply(&s), &(&s * c(l[k - 1]))) < 1e-14);
        }
        let id = ComplexMatrix::identity(2, 2);
        prop_assert!(max_abs_diff(&m.apply(&id), &id) < 1e-14);
    }

    #[test]
    fn probabilities_sum_to_one(l in prop::array::uniform3(-1.5f64..1.5)) {
        let p = probabilities_from_eigenvalues(&PauliEigenvalues(l));
        prop_assert!((p.0.iter().sum::<f64>() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn channel_cp_iff_probabilities_nonnegative(l in prop::array::uniform3(-1.0f64..1.0)) {
        let p = probabilities_from_eigenvalues(&PauliEigenvalues(l));
        let m = channel_superoperator(&p);
        let margin = p.0.iter().fold(f64::INFINITY, |a, &b| a.min(b.abs()));
        prop_assume!(margin > 1e-6);
        prop_assert_eq!(map_is_cp(&m, PSD_TOL).unwrap(), !p.has_negative());
    }

    #[test]
    fn constant_rate_eigenvalues(g in prop::array::uniform3(-1.0f64..2.0), t in 0.0f64..2.0) {
        let r = PauliRates::constant(g);
        let l = eigenvalues_at(&r, t, 1e-12).unwrap();
        let total: f64 = g.iter().sum();
        for (lk, gk) in l.0.iter().zip(g) {
            prop_assert!((lk - (-(total - gk) * t).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn propagator_eigenvalues_are_ratios(s in 0.0f64..2.0, dt in 0.0f64..2.0, a in 0.1f64..2.0) {
        let r = PauliRates::new(
            RateFunction::constant(1.0),
            RateFunction::tanh(-a, 1.0, 0.5),
            RateFunction::polynomial(vec![0.2, 0.3]),
        ).unwrap();
        let t = s + dt;
        let ls = eigenvalues_at(&r, s, 1e-12).unwrap();
        let lt = eigenvalues_at(&r, t, 1e-12).unwrap();
        let v = eigenvalues_between(&r, s, t, 1e-12).unwrap();
        for k in 0..3 {
            prop_assert!((v.0[k] - lt.0[k] / ls.0[k]).abs() < 1e-9 * (1.0 + v.0[k].abs()));
        }
    }

    /// `L = Σ_α j_α · ½(φ_α − id)` with coCP `φ_α`, whatever the sign of `j`.
    #[test]
    fn generator_in_cocp_form(g in rates()) {
        let j = j_from_rates(g);
        let id = SuperOperator::identity(2);
        let rebuilt = cocp_generator_parts()
            .iter()
            .zip(j.0)
            .fold(SuperOperator::zeros(2), |acc, (phi, ja)| &acc + &(phi - &id).scale(0.5 * ja));
        prop_assert!(rebuilt.max_abs_diff(&generator(g)) < 1e-13);
    }

    /// Short-time propagators of constant generators are positive exactly when
    /// the pairwise rate sums are nonnegative.
    #[test]
    fn pairwise_sums_decide_short_time_positivity(g in rates()) {
        let sums = [g[0] + g[1], g[0] + g[2], g[1] + g[2]];
        let margin = sums.iter().fold(f64::INFINITY, |a, &b| a.min(b.abs()));
        prop_assume!(margin > 1e-3);
        let r = PauliRates::constant(g);
        let v = map_from_eigenvalues(&eigenvalues_between(&r, 0.3, 0.35, 1e-12).unwrap());
        prop_assert_eq!(map_is_positive_qubit(&v).unwrap(), classify_pointwise(g).p);
    }
}

#[test]
fn cocp_parts_are_copositive() {
    for phi in cocp_generator_parts() {
        assert!(dyndiv::engine::map_is_cocp(&phi, PSD_TOL).unwrap());
        assert!(!map_is_cp(&phi, PSD_TOL).unwrap());
    }
}

#[test]
fn channels_preserve_trace_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = probabilities_from_eigenvalues(&PauliEigenvalues([0.3, -0.2, 0.6]));
    for _ in 0..20 {
        let rho = common::random_density(&mut rng, 2);
        let out = apply_channel(&p, &rho).unwrap();
        assert!((out.trace().re - 1.0).abs() < 1e-14);
        assert!(max_abs_diff(&out, &out.adjoint()) < 1e-14);
    }
}
