#![no_main]

use hulthen::model::{derive_params, PhysicalParams, QuantumNumbers};
use hulthen::qrule::{momentum_integral, solve_quantization, turning_points, Method};
use hulthen::spectrum::{count_bound_states, evaluate_level};
use hulthen::wavefn::{radial_r, wavefunction};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() < 19 {
        return;
    }
    let f = |i: usize| f64::from_le_bytes(data[i..i + 8].try_into().unwrap());
    let (alpha, c0) = if data.len() > 19 && data[19] & 1 == 1 {
        // typical magnitudes: α in [1e-6, 10], c0 in [0, 1]
        let u = |i: usize| f64::from(u32::from_le_bytes(data[i..i + 4].try_into().unwrap())) / f64::from(u32::MAX);
        (10f64.powf(-6.0 + 7.0 * u(0)), u(8))
    } else {
        (f(0), f(8))
    };
    let dim = u32::from(data[16] % 12);
    let n = u32::from(data[17] % 16);
    let l = u32::from(data[18] % 16);
    let p = PhysicalParams::paper_units(alpha, dim).with_c0(c0);
    if p.validate().is_err() {
        return;
    }
    let q = QuantumNumbers::new(n, l);
    let level = evaluate_level(&p, q);
    let _ = count_bound_states(&p, l, dim);
    if !level.bound {
        return;
    }
    assert!(level.energy.is_finite(), "{p:?} {q:?}");
    let _ = solve_quantization(&p, q);
    let dp = derive_params(&p, q);
    let _ = turning_points(&p, &dp, level.energy);
    if let Ok(v) = momentum_integral(&p, &dp, level.energy, Method::Closed) {
        assert!(v.is_finite());
    }
    if wavefunction(&p, q, false).is_ok() {
        let _ = radial_r(&p, q, 1.0, false);
    }
});
