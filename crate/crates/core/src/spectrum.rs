//! Closed-form bound-state energies of the D-dimensional Hulthén potential
//! under the exponential centrifugal approximation.
//!
//! With N = n + l + (D−1)/2 and ε̃ = μZe²/(ħ²Nα) − N/2,
//!
//! ```text
//! E = (ħ²α²/2μ) [ (l + (D−1)/2)(l + (D−3)/2) c₀ − ε̃² ]
//! ```
//!
//! A level is bound iff ε̃ > 0.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{derive_params, PhysicalParams, QuantumNumbers, Validity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproxMode {
    /// c₀ > 0 (default 1/12).
    C0Improved,
    /// c₀ = 0: the plain Pekeris-type replacement.
    C0Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyLevel {
    pub n: u32,
    pub l: u32,
    pub dim: u32,
    pub energy: f64,
    pub eps_tilde: f64,
    pub mode: ApproxMode,
    pub bound: bool,
    pub validity: Validity,
}

/// n + l + (D−1)/2
pub fn principal(p: &PhysicalParams, q: QuantumNumbers) -> f64 {
    f64::from(q.n) + f64::from(q.l) + (f64::from(p.dim) - 1.0) / 2.0
}

/// ε̃ = μZe²/(ħ²(n+ν)α) − (n+ν)/2.
pub fn epsilon_tilde(p: &PhysicalParams, q: QuantumNumbers) -> f64 {
    let big_n = principal(p, q);
    p.coupling() / (2.0 * big_n) - big_n / 2.0
}

/// Evaluates the spectrum formula without rejecting unbound states.
pub fn evaluate_level(p: &PhysicalParams, q: QuantumNumbers) -> EnergyLevel {
    let dp = derive_params(p, q);
    let eps = epsilon_tilde(p, q);
    // α·ε̃ formed without g = O(1/α), which overflows for tiny α
    let big_n = principal(p, q);
    let a_eps = p.mu * p.z * p.e2 / (p.hbar * p.hbar * big_n) - p.alpha * big_n / 2.0;
    let energy = p.kinetic_scale() * (p.alpha * p.alpha * dp.lambda_sq * p.c0 - a_eps * a_eps);
    EnergyLevel {
        n: q.n,
        l: q.l,
        dim: p.dim,
        energy,
        eps_tilde: eps,
        mode: if p.c0 == 0.0 {
            ApproxMode::C0Zero
        } else {
            ApproxMode::C0Improved
        },
        bound: eps > 0.0,
        validity: dp.validity,
    }
}

/// Bound-state energy; `NotBound` when the level has dissolved into the
/// continuum (ε̃ ≤ 0). D = 2, l = 0 succeeds with `validity` flagged.
pub fn energy_level(p: &PhysicalParams, q: QuantumNumbers) -> Result<EnergyLevel> {
    p.validate()?;
    let level = evaluate_level(p, q);
    if !level.bound {
        return Err(Error::NotBound {
            n: q.n,
            l: q.l,
            dim: p.dim,
            eps_tilde: level.eps_tilde,
        });
    }
    Ok(level)
}

/// Screening at which the c₀ = 0 level reaches E = 0:
/// α_c = 2μZe²/(ħ²(n + l + (D−1)/2)²).
pub fn critical_alpha(p: &PhysicalParams, q: QuantumNumbers) -> f64 {
    let big_n = principal(p, q);
    2.0 * p.mu * p.z * p.e2 / (p.hbar * p.hbar * big_n * big_n)
}

/// Number of n ≥ 0 for which ε̃(n, l) > 0.
pub fn count_bound_states(p: &PhysicalParams, l: u32, dim: u32) -> u64 {
    let p = p.with_dim(dim);
    let nu = f64::from(l) + (f64::from(dim) - 1.0) / 2.0;
    let bound = |n: u64| -> bool {
        let big_n = n as f64 + nu;
        p.coupling() / (2.0 * big_n) - big_n / 2.0 > 0.0
    };
    // n + ν < √g; start from the real-valued estimate and fix rounding at the edge
    let edge = p.coupling().sqrt() - nu;
    if !edge.is_finite() || edge <= 0.0 {
        return if bound(0) { 1 } else { 0 };
    }
    // beyond 2^53 consecutive n are no longer distinct doubles; saturate
    if edge >= 2f64.powi(53) {
        return edge.ceil() as u64;
    }
    let mut count = edge.ceil() as u64;
    while count > 0 && !bound(count - 1) {
        count -= 1;
    }
    while bound(count) {
        count += 1;
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegeneracyPartner {
    pub q: QuantumNumbers,
    pub dim: u32,
}

/// (n, l, D) → (n, l ± 1, D ∓ 2). `direction` is +1 or −1.
pub fn degeneracy_partner(q: QuantumNumbers, dim: u32, direction: i32) -> Result<DegeneracyPartner> {
    let (l, d) = match direction {
        1 => (i64::from(q.l) + 1, i64::from(dim) - 2),
        -1 => (i64::from(q.l) - 1, i64::from(dim) + 2),
        other => {
            return Err(Error::OutOfRange(format!(
                "direction must be +1 or -1, got {other}"
            )))
        }
    };
    if l < 0 {
        return Err(Error::OutOfRange(format!("partner l = {l} < 0")));
    }
    if d < 2 {
        return Err(Error::OutOfRange(format!("partner D = {d} < 2")));
    }
    Ok(DegeneracyPartner {
        q: QuantumNumbers::new(q.n, l as u32),
        dim: d as u32,
    })
}

/// −μZ²e⁴/(2ħ²(n+l+(D−1)/2)²), the α → 0 limit.
pub fn coulomb_limit(p: &PhysicalParams, q: QuantumNumbers) -> f64 {
    let big_n = principal(p, q);
    let ze2 = p.z * p.e2;
    -p.mu * ze2 * ze2 / (2.0 * p.hbar * p.hbar * big_n * big_n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qn(n: u32, l: u32) -> QuantumNumbers {
        QuantumNumbers::new(n, l)
    }

    #[test]
    fn ground_state_anchor() {
        let p = PhysicalParams::paper_units(0.2, 3);
        let e = energy_level(&p, qn(0, 0)).unwrap();
        assert!((e.energy + 0.16).abs() < 1e-15);
        assert!((e.energy + (1.0 - 0.2f64).powi(2) / 4.0).abs() < 1e-15);
        assert_eq!(e.eps_tilde, 2.0);
        assert_eq!(e.mode, ApproxMode::C0Improved);
    }

    #[test]
    fn tiny_screening_reaches_coulomb_limit() {
        let p = PhysicalParams::paper_units(9.0e-188, 7).with_c0(1e16);
        let e = evaluate_level(&p, qn(9, 10));
        assert!(e.bound);
        assert!((e.energy + 1.0 / (4.0 * 22.0 * 22.0)).abs() < 1e-15);
        assert_eq!(count_bound_states(&p, 10, 7), u64::MAX);
    }

    #[test]
    fn subnormal_screening_is_finite() {
        let p = PhysicalParams::paper_units(8.3e-310, 3);
        let e = evaluate_level(&p, qn(0, 0));
        assert!(e.bound);
        assert_eq!(e.energy, -0.25);
    }

    #[test]
    fn p_wave_anchor() {
        let p = PhysicalParams::paper_units(0.1, 3);
        let e = energy_level(&p, qn(0, 1)).unwrap();
        let want = 0.01 * (2.0 / 12.0 - 1.5f64.powi(2));
        assert!((e.energy - want).abs() < 1e-15);
        assert!((e.energy + 0.020_833_333_333_333_33).abs() < 1e-15);
    }

    #[test]
    fn critical_screening_gives_zero() {
        let p = PhysicalParams::paper_units(1.0, 3);
        let e = evaluate_level(&p, qn(0, 0));
        assert_eq!(e.energy, 0.0);
        assert!(!e.bound);
        assert!(matches!(energy_level(&p, qn(0, 0)), Err(Error::NotBound { .. })));
    }

    #[test]
    fn critical_alpha_values() {
        let p = PhysicalParams::paper_units(0.1, 3);
        assert!((critical_alpha(&p, qn(0, 0)) - 1.0).abs() < 1e-15);
        assert!((critical_alpha(&p, qn(1, 0)) - 0.25).abs() < 1e-15);
        let p5 = PhysicalParams::paper_units(0.1, 5);
        let ac = critical_alpha(&p5, qn(0, 0));
        assert!((ac - 0.25).abs() < 1e-15);
        let e = evaluate_level(&p5.with_alpha(ac).with_c0(0.0), qn(0, 0));
        assert!(e.energy.abs() < 1e-15);
    }

    #[test]
    fn bound_state_counts() {
        let p = PhysicalParams::paper_units(0.04, 3);
        assert_eq!(count_bound_states(&p, 0, 3), 4);
        assert_eq!(count_bound_states(&p.with_alpha(2.0), 0, 3), 0);
        let mut last = 0;
        for alpha in [0.5, 0.1, 0.05, 0.01, 0.001] {
            let c = count_bound_states(&p.with_alpha(alpha), 1, 3);
            assert!(c >= last);
            last = c;
        }
        assert!(last > 20);
    }

    #[test]
    fn count_matches_bound_flag() {
        for &alpha in &[0.025, 0.05, 0.1, 0.0625, 1.0 / 9.0, 0.3] {
            for dim in 2..6 {
                for l in 0..4 {
                    let p = PhysicalParams::paper_units(alpha, dim);
                    let c = count_bound_states(&p, l, dim) as u32;
                    for n in 0..c + 3 {
                        assert_eq!(evaluate_level(&p, qn(n, l)).bound, n < c, "{alpha} {dim} {l} {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn degeneracy_mapping() {
        let pa = degeneracy_partner(qn(2, 0), 5, 1).unwrap();
        assert_eq!((pa.q, pa.dim), (qn(2, 1), 3));
        let pb = degeneracy_partner(qn(0, 1), 3, -1).unwrap();
        assert_eq!((pb.q, pb.dim), (qn(0, 0), 5));
        assert!(matches!(degeneracy_partner(qn(0, 0), 3, 1), Err(Error::OutOfRange(_))));
        assert!(matches!(degeneracy_partner(qn(0, 0), 3, -1), Err(Error::OutOfRange(_))));
        assert!(degeneracy_partner(qn(0, 0), 3, 0).is_err());
    }

    #[test]
    fn degenerate_pairs_share_energy_exactly() {
        for &alpha in &[0.025, 0.05, 0.1] {
            for dim in 4..9 {
                for l in 0..4 {
                    for n in 0..4 {
                        let p = PhysicalParams::paper_units(alpha, dim);
                        let pa = degeneracy_partner(qn(n, l), dim, 1).unwrap();
                        let e1 = evaluate_level(&p, qn(n, l));
                        let e2 = evaluate_level(&p.with_dim(pa.dim), pa.q);
                        assert_eq!(e1.energy, e2.energy);
                    }
                }
            }
        }
    }

    #[test]
    fn reductions() {
        let p = PhysicalParams::paper_units(0.07, 3);
        let k = p.kinetic_scale() * p.alpha * p.alpha;
        let m = p.mu * p.z * p.e2 / (p.hbar * p.hbar * p.alpha);
        for n in 0..3u32 {
            for l in 0..3u32 {
                let nn = f64::from(n + l + 1);
                let three_d = k * (f64::from(l * (l + 1)) / 12.0 - (m / nn - nn / 2.0).powi(2));
                let e = evaluate_level(&p, qn(n, l)).energy;
                assert!((e - three_d).abs() <= 4.0 * f64::EPSILON * three_d.abs().max(k));
                let e0 = evaluate_level(&p.with_c0(0.0), qn(n, l)).energy;
                let coulomb_like = -k * (m / nn - nn / 2.0).powi(2);
                assert!((e0 - coulomb_like).abs() <= 4.0 * f64::EPSILON * coulomb_like.abs().max(k));
            }
        }
    }

    #[test]
    fn energy_increases_with_n() {
        let p = PhysicalParams::paper_units(0.025, 4);
        for l in 0..3 {
            let c = count_bound_states(&p, l, 4) as u32;
            let es: Vec<f64> = (0..c).map(|n| evaluate_level(&p, qn(n, l)).energy).collect();
            assert!(es.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn coulomb_limit_is_linear_in_alpha() {
        // E − E_C = αZe²/2 + O(α²): the slope converges linearly
        let q = qn(1, 1);
        let slope_err: Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&a| {
                let p = PhysicalParams::paper_units(a, 3);
                let dev = evaluate_level(&p, q).energy - coulomb_limit(&p, q);
                (dev / (a * 0.5) - 1.0).abs()
            })
            .collect();
        for w in slope_err.windows(2) {
            let ratio = w[0] / w[1];
            assert!(ratio > 9.0 && ratio < 11.0, "ratio {ratio}");
        }
    }

    #[test]
    fn two_dimensional_s_wave_is_flagged() {
        let p = PhysicalParams::paper_units(0.1, 2);
        let e = energy_level(&p, qn(0, 0)).unwrap();
        assert_eq!(e.validity, Validity::OutsideStatedValidity);
    }
}
