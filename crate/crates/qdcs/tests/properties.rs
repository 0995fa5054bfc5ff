//! Property tests over the scalar closed forms, grid plumbing, and
//! serialization round-trips.

use num_complex::Complex64;
use proptest::prelude::*;

use qdcs::algebra::Deformation;
use qdcs::entangle::{
    concurrence_general, concurrence_pair, concurrence_symmetric, validity_margin,
    BipartitePairSpec,
};
use qdcs::records::{parse_pair_spec, parse_state_record, PairSpecRecord, StateRecord};
use qdcs::states::{overlap_closed_form, BuildMethod, OverlapKind};
use qdcs::sweep::{linspace, run_sweep, SweepKind, SweepSpec};

fn complex_label() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn strength() -> impl Strategy<Value = f64> {
    -0.4..0.4f64
}

proptest! {
    // Swapping bra and ket conjugates the overlap bit-for-bit; the
    // mixed kinds swap into each other.
    #[test]
    fn overlap_conjugate_symmetry_is_bitwise(
        alpha in complex_label(),
        beta in complex_label(),
        eps in strength(),
    ) {
        let d = Deformation::new(eps).unwrap();
        for kind in [OverlapKind::DeformedBoth, OverlapKind::Undeformed] {
            let forward = overlap_closed_form(alpha, beta, d, kind);
            let backward = overlap_closed_form(beta, alpha, d, kind);
            prop_assert_eq!(forward, backward.conj());
        }
        let ket_side = overlap_closed_form(alpha, beta, d, OverlapKind::DeformedKet);
        let bra_side = overlap_closed_form(beta, alpha, d, OverlapKind::DeformedBra);
        prop_assert_eq!(ket_side, bra_side.conj());
    }

    #[test]
    fn symmetric_concurrence_stays_in_range(
        alpha_abs in 0.0..2.5f64,
        theta in 0.0..(2.0 * std::f64::consts::PI),
        eps in -0.5..0.5f64,
    ) {
        let value = concurrence_symmetric(alpha_abs, theta, Deformation::new(eps).unwrap());
        prop_assert!(value.c.is_finite());
        prop_assert!((0.0..=1.0).contains(&value.c));
        prop_assert!(value.margin >= 0.0);
        prop_assert_eq!(value.valid, value.margin < 0.1);
        prop_assert_eq!(value.within(0.3), value.margin < 0.3);
    }

    // The general formula does not care which branch is called first.
    #[test]
    fn general_concurrence_is_swap_symmetric(
        mu_abs in 0.2..2.0f64,
        mu_arg in 0.0..(2.0 * std::f64::consts::PI),
        nu_abs in 0.2..2.0f64,
        nu_arg in 0.0..(2.0 * std::f64::consts::PI),
        p1_abs in 0.0..0.9f64,
        p1_arg in 0.0..(2.0 * std::f64::consts::PI),
        p2_abs in 0.0..0.9f64,
        p2_arg in 0.0..(2.0 * std::f64::consts::PI),
    ) {
        let mu = Complex64::from_polar(mu_abs, mu_arg);
        let nu = Complex64::from_polar(nu_abs, nu_arg);
        let p1 = Complex64::from_polar(p1_abs, p1_arg);
        let p2 = Complex64::from_polar(p2_abs, p2_arg);
        let forward = concurrence_general(mu, nu, p1, p2).unwrap();
        let swapped = concurrence_general(nu, mu, p2, p1).unwrap();
        prop_assert!((0.0..=1.0).contains(&forward.c));
        prop_assert!((forward.c - swapped.c).abs() <= 1e-12 * forward.c.max(1.0));
    }

    #[test]
    fn validity_margin_scales_as_fourth_power(
        alpha_abs in 0.1..1.5f64,
        eps in strength(),
    ) {
        let base = validity_margin(alpha_abs, eps);
        prop_assert!(base >= 0.0);
        let doubled = validity_margin(2.0 * alpha_abs, eps);
        prop_assert!((doubled - 16.0 * base).abs() <= 1e-12 * doubled.max(1.0));
        prop_assert!(validity_margin(alpha_abs, eps / 2.0) <= base);
    }

    // The exchange superposition at θ = π is maximally entangled for
    // every label scale and strength, exactly.
    #[test]
    fn antisymmetric_exchange_concurrence_is_exactly_one(
        alpha_abs in 0.05..2.0f64,
        eps in strength(),
    ) {
        let d = Deformation::new(eps).unwrap();
        let spec = BipartitePairSpec::exchange_superposition(
            Complex64::new(alpha_abs, 0.0),
            std::f64::consts::PI,
        );
        prop_assert_eq!(concurrence_pair(&spec, d).unwrap().c, 1.0);
        prop_assert_eq!(concurrence_symmetric(alpha_abs, std::f64::consts::PI, d).c, 1.0);
    }

    #[test]
    fn linspace_covers_the_range(
        min in -5.0..5.0f64,
        width in 0.1..10.0f64,
        steps in 2..100usize,
    ) {
        let max = min + width;
        let grid = linspace(min, max, steps);
        prop_assert_eq!(grid.len(), steps);
        prop_assert_eq!(grid[0], min);
        prop_assert!((grid[steps - 1] - max).abs() <= 4.0 * f64::EPSILON * max.abs().max(1.0));
        prop_assert!(grid.windows(2).all(|w| w[1] > w[0]));
    }

    // Row order is |α| outer, ε inner, and the table shape is the grid
    // product, regardless of the strength list.
    #[test]
    fn alpha_sweep_shape_and_order(
        steps in 2..8usize,
        eps_list in proptest::collection::vec(-0.5..0.5f64, 1..4),
    ) {
        let mut spec = SweepSpec::alpha_default();
        spec.kind = SweepKind::AlphaSweep;
        spec.alpha_range = (0.0, 1.2, steps);
        spec.eps_list = eps_list.clone();
        let table = run_sweep(&spec).unwrap();
        prop_assert_eq!(table.rows.len(), steps * eps_list.len());
        let alphas = linspace(0.0, 1.2, steps);
        for (i, row) in table.rows.iter().enumerate() {
            prop_assert_eq!(row.alpha_abs, alphas[i / eps_list.len()]);
            prop_assert_eq!(row.eps, eps_list[i % eps_list.len()]);
            prop_assert!((0.0..=1.0).contains(&row.concurrence));
            prop_assert_eq!(row.allowed, row.margin < spec.threshold);
        }
    }

    #[test]
    fn state_record_json_round_trip_is_bit_exact(
        alpha_re in -2.0..2.0f64,
        alpha_im in -2.0..2.0f64,
        eps in strength(),
        raw_amp in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2..9),
    ) {
        let record = StateRecord {
            alpha_re,
            alpha_im,
            eps,
            dim: raw_amp.len(),
            method: BuildMethod::Perturbative,
            amp: raw_amp.iter().map(|&(re, im)| [re, im]).collect(),
        };
        let text = serde_json::to_string(&record).unwrap();
        let back = parse_state_record(&text).unwrap();
        prop_assert_eq!(back.alpha_re, record.alpha_re);
        prop_assert_eq!(back.alpha_im, record.alpha_im);
        prop_assert_eq!(back.eps, record.eps);
        prop_assert_eq!(back.amp, record.amp);
    }

    #[test]
    fn pair_spec_json_round_trip_is_bit_exact(
        mu in complex_label(),
        nu in complex_label(),
        a1 in complex_label(),
        a2 in complex_label(),
        b1 in complex_label(),
        b2 in complex_label(),
    ) {
        prop_assume!(mu.norm() > 0.0 || nu.norm() > 0.0);
        let spec = BipartitePairSpec { mu, nu, first: (a1, a2), second: (b1, b2) };
        let text = serde_json::to_string(&PairSpecRecord::from_spec(&spec)).unwrap();
        let back = parse_pair_spec(&text).unwrap();
        prop_assert_eq!(back.mu, spec.mu);
        prop_assert_eq!(back.nu, spec.nu);
        prop_assert_eq!(back.first, spec.first);
        prop_assert_eq!(back.second, spec.second);
    }

    // Generated TOML text with an arbitrary subset of keys parses back
    // to exactly those values.
    #[test]
    fn config_text_parses_field_subsets(
        threshold in proptest::option::of(0.01..1.0f64),
        state_eps in proptest::option::of(-0.4..0.4f64),
        state_dim in proptest::option::of(2..128usize),
        sweep_steps in proptest::option::of(2..300usize),
        grid in proptest::option::of(proptest::collection::vec(0.01..0.5f64, 1..4)),
    ) {
        let mut text = String::new();
        if let Some(t) = threshold {
            text.push_str(&format!("threshold = {t}\n"));
        }
        text.push_str("[state]\n");
        if let Some(e) = state_eps {
            text.push_str(&format!("eps = {e}\n"));
        }
        if let Some(d) = state_dim {
            text.push_str(&format!("dim = {d}\n"));
        }
        text.push_str("[sweep.alpha]\n");
        if let Some(s) = sweep_steps {
            text.push_str(&format!("steps = {s}\n"));
        }
        text.push_str("[verify]\n");
        if let Some(g) = &grid {
            let items: Vec<String> = g.iter().map(|x| x.to_string()).collect();
            text.push_str(&format!("eps_grid = [{}]\n", items.join(", ")));
        }
        let config = qdcs::config::parse_config(&text).unwrap();
        prop_assert_eq!(config.threshold, threshold);
        prop_assert_eq!(config.state.eps, state_eps);
        prop_assert_eq!(config.state.dim, state_dim);
        prop_assert_eq!(config.sweep.alpha.steps, sweep_steps);
        prop_assert_eq!(config.verify.eps_grid, grid);
    }
}
