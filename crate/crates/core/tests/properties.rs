//! Property tests over randomized physical parameters.

use approx::assert_relative_eq;
use hulthen::cli::config::{parse_float_list, Settings};
use hulthen::model::{derive_params, PhysicalParams, QuantumNumbers};
use hulthen::qrule::{appendix_integral, appendix_quadrature, solve_quantization, turning_points, AppendixId};
use hulthen::spectrum::{count_bound_states, degeneracy_partner, evaluate_level};
use hulthen::wavefn::quantum_condition_residual;
use hulthen::oracle::quad::QuadOptions;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = (PhysicalParams, QuantumNumbers)> {
    (0.005f64..0.3, 2u32..8, 0u32..6, 0u32..4, 0.0f64..0.2).prop_map(|(alpha, dim, n, l, c0)| {
        (
            PhysicalParams::paper_units(alpha, dim).with_c0(c0),
            QuantumNumbers::new(n, l),
        )
    })
}

/// Bound by construction: in paper units a level binds iff α < 1/N²,
/// N = n + l + (D−1)/2. `extra` more levels above n are bound too.
fn bound_params(extra: u32) -> impl Strategy<Value = (PhysicalParams, QuantumNumbers)> {
    (0.05f64..0.95, 2u32..8, 0u32..8, 0u32..5, 0.0f64..0.2).prop_map(move |(u, dim, n, l, c0)| {
        let big_n = f64::from(n + extra + l) + (f64::from(dim) - 1.0) / 2.0;
        (
            PhysicalParams::paper_units(u / (big_n * big_n), dim).with_c0(c0),
            QuantumNumbers::new(n, l),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn interdimensional_degeneracy_is_exact((p, q) in params()) {
        if let Ok(partner) = degeneracy_partner(q, p.dim, 1) {
            let a = evaluate_level(&p, q);
            let b = evaluate_level(&p.with_dim(partner.dim), partner.q);
            prop_assert_eq!(a.energy, b.energy);
            prop_assert_eq!(a.bound, b.bound);
        }
    }

    #[test]
    fn quantization_root_matches_closed_form((p, q) in bound_params(0)) {
        let lv = evaluate_level(&p, q);
        prop_assert!(lv.bound);
        let e = solve_quantization(&p, q).unwrap();
        prop_assert!((e - lv.energy).abs() <= 1e-10 * lv.energy.abs().max(p.alpha * p.alpha));
    }

    #[test]
    fn quantum_condition_holds((p, q) in bound_params(0)) {
        prop_assert!(evaluate_level(&p, q).bound);
        prop_assert!(quantum_condition_residual(&p, q).abs() <= 1e-12 * (1.0 + p.coupling().sqrt()));
    }

    #[test]
    fn energy_increases_with_n((p, q) in bound_params(1)) {
        let a = evaluate_level(&p, q);
        let b = evaluate_level(&p, QuantumNumbers::new(q.n + 1, q.l));
        prop_assert!(a.bound && b.bound);
        prop_assert!(b.energy > a.energy);
    }

    #[test]
    fn bound_count_is_consistent((p, q) in params()) {
        let count = count_bound_states(&p, q.l, p.dim);
        let inside = u64::from(q.n) < count;
        prop_assert_eq!(evaluate_level(&p, q).bound, inside);
    }

    #[test]
    fn vieta_identities((p, q) in bound_params(0)) {
        let lv = evaluate_level(&p, q);
        let dp = derive_params(&p, q);
        prop_assume!(dp.b > 0.0);
        let tp = turning_points(&p, &dp, lv.energy).unwrap();
        assert_relative_eq!(tp.z_a + tp.z_b, dp.a / dp.b - 1.0, max_relative = 1e-12);
        assert_relative_eq!(tp.z_a * tp.z_b, -lv.energy / dp.b + p.c0, max_relative = 1e-12, epsilon = 1e-15);
    }

    #[test]
    fn appendix_formulas(ra in 0.01f64..50.0, width in 0.01f64..50.0, b in -1.0f64..1.0, a0 in 0.1f64..5.0) {
        let rb = ra + width;
        let a = a0 + (-b * rb).max(0.0);
        let opts = QuadOptions::relative(1e-12);
        for id in AppendixId::ALL {
            let closed = appendix_integral(id, ra, rb, Some((a, b))).unwrap();
            let quad = appendix_quadrature(id, ra, rb, Some((a, b)), &opts).unwrap();
            prop_assert!((closed - quad).abs() <= 1e-8 * closed.abs(), "{:?}: {} vs {}", id, closed, quad);
        }
    }

    #[test]
    fn float_list_round_trip(v in prop::collection::vec(-1e6f64..1e6, 1..8)) {
        let text: Vec<String> = v.iter().map(|x| format!("{x:e}")).collect();
        prop_assert_eq!(parse_float_list(&text.join(", ")).unwrap(), v);
    }

    #[test]
    fn config_parser_never_panics(s in "\\PC{0,200}") {
        let _ = Settings::parse_file(&s);
    }
}
