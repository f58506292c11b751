use dw_exterior::data::{bump, DataSpec};
use dw_exterior::grid::{grad_norm_sq, integrate, norm, Measure, RadialField, RadialGrid};
use dw_exterior::harness::checks::fuzz_field;
use dw_exterior::heat::{heat_trajectory, HeatConfig};
use dw_exterior::inequalities::{gn_ratio, hardy_ratio, log_gn_ratio};
use dw_exterior::semilinear::{semilinear_evolve, SemilinearConfig};
use dw_exterior::wave::{dw_linear_evolve, WaveConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid() -> RadialGrid {
    RadialGrid::with_spacing(8.0, 0.05).unwrap()
}

prop_compose! {
    fn bump_field()(a in 1.0f64..4.0, w in 0.5f64..3.0, k in 2i32..5) -> RadialField {
        bump(grid(), a, a + w, k)
    }
}

/// Common grid wide enough for every wave run below (T <= 10).
fn padded(f: &RadialField) -> RadialField {
    f.extended_to(25.0)
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn close(a: &RadialField, b: &RadialField, rel: f64) -> bool {
    let scale = a.max_abs().max(b.max_abs()).max(1e-300);
    a.values().iter().zip(b.values()).all(|(x, y)| (x - y).abs() <= rel * scale)
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn linear_wave_is_linear(f in bump_field(), g in bump_field(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let cfg = WaveConfig::default();
        let times = [0.5, 2.0];
        let (f, g) = (padded(&f), padded(&g));
        let mix = f.lin_comb(a, &g, b).unwrap();
        let sf = dw_linear_evolve(&f, &times, &cfg).unwrap();
        let sg = dw_linear_evolve(&g, &times, &cfg).unwrap();
        let sm = dw_linear_evolve(&mix, &times, &cfg).unwrap();
        for i in 0..times.len() {
            let expect = sf.states[i].u.lin_comb(a, &sg.states[i].u, b).unwrap();
            prop_assert!(close(&sm.states[i].u, &expect, 1e-11));
        }
    }

    #[test]
    fn ratios_are_scale_invariant(f in bump_field(), c in prop_oneof![-1e3f64..-1e-3, 1e-3f64..1e3], q in 1.1f64..4.0) {
        let g = f.scaled(c);
        let pairs = [
            (hardy_ratio(&f).unwrap(), hardy_ratio(&g).unwrap()),
            (gn_ratio(&f, q).unwrap(), gn_ratio(&g, q).unwrap()),
            (log_gn_ratio(&f, q).unwrap(), log_gn_ratio(&g, q).unwrap()),
        ];
        for (x, y) in pairs {
            prop_assert!((x - y).abs() <= 1e-11 * x);
        }
    }

    #[test]
    fn weighted_norm_dominates_plain(f in bump_field(), q in 1.0f64..6.0) {
        let w = norm(&f, q, Measure::LogWeighted).unwrap();
        let p = norm(&f, q, Measure::Lebesgue).unwrap();
        prop_assert!(w >= p * (1.0 - 1e-14));
    }

    #[test]
    fn holder_inequality(f in bump_field(), g in bump_field(), p in 1.1f64..8.0) {
        let p_conj = p / (p - 1.0);
        let fg = RadialField::from_values(grid(), f.values().iter().zip(g.values()).map(|(a, b)| (a * b).abs()).collect()).unwrap();
        let lhs = integrate(&fg, Measure::Lebesgue);
        let rhs = norm(&f, p, Measure::Lebesgue).unwrap() * norm(&g, p_conj, Measure::Lebesgue).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn hardy_holds_for_fuzzed_fields(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = fuzz_field(&mut rng, 0.02).unwrap();
        prop_assert!(f.is_dirichlet());
        prop_assert!(hardy_ratio(&f).unwrap() <= 1.001);
    }

    #[test]
    fn linear_energy_does_not_grow(f in bump_field()) {
        let times: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        let traj = dw_linear_evolve(&padded(&f), &times, &WaveConfig::default()).unwrap();
        for w in traj.states.windows(2) {
            prop_assert!(w[1].energy() <= w[0].energy() * (1.0 + 1e-3));
        }
    }

    #[test]
    fn heat_flow_contracts_l2(f in bump_field()) {
        let states = heat_trajectory(&f.extended_to(30.0), &[0.5, 1.0, 2.0, 4.0], &HeatConfig::default()).unwrap();
        let norms: Vec<f64> = states.iter().map(|s| norm(s, 2.0, Measure::Lebesgue).unwrap()).collect();
        prop_assert!(norms.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(states.iter().all(|s| grad_norm_sq(s).is_finite()));
    }
}

proptest! {
    #![proptest_config(cases(8))]

    #[test]
    fn xt_is_monotone(eps in 0.0f64..200.0, p in 1.5f64..3.0) {
        let g = DataSpec::default().build(0.1);
        let run = semilinear_evolve(&g, eps, p, 10.0, &SemilinearConfig::default()).unwrap();
        prop_assert!(run.functionals.windows(2).all(|w| w[1].xt >= w[0].xt && w[1].t > w[0].t));
    }
}
