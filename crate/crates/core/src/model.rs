//! Problem definition: physical constants, quantum numbers, the derived
//! algebraic parameters, and the Hulthén / effective potentials.
//!
//! The effective potential of the D-dimensional radial equation is
//!
//! ```text
//! V_eff(r) = -Z e² α e^{-αr} / (1 - e^{-αr}) + L² / r²,
//! L² = (ħ²/2μ)(l + (D-1)/2)(l + (D-3)/2)
//! ```
//!
//! In approximated mode the `1/r²` is replaced by the exponential form
//! `α²(c₀ + e^{-αr}/(1-e^{-αr})²)`, which turns `V_eff` into a quadratic in
//! `z = e^{-αr}/(1-e^{-αr})`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Default centrifugal constant c₀ of the exponential approximation.
pub const C0_DEFAULT: f64 = 1.0 / 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParams {
    pub alpha: f64,
    pub z: f64,
    pub mu: f64,
    pub hbar: f64,
    pub e2: f64,
    pub dim: u32,
    pub c0: f64,
}

impl PhysicalParams {
    /// ħ = 1, μ = 1/2, e² = 1, Z = 1 with the default c₀.
    pub fn paper_units(alpha: f64, dim: u32) -> Self {
        Self {
            alpha,
            z: 1.0,
            mu: 0.5,
            hbar: 1.0,
            e2: 1.0,
            dim,
            c0: C0_DEFAULT,
        }
    }

    pub fn with_c0(mut self, c0: f64) -> Self {
        self.c0 = c0;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_dim(mut self, dim: u32) -> Self {
        self.dim = dim;
        self
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and > 0, got {v}"),
                })
            }
        }
        positive("alpha", self.alpha)?;
        positive("Z", self.z)?;
        positive("mu", self.mu)?;
        positive("hbar", self.hbar)?;
        positive("e2", self.e2)?;
        if self.dim < 2 {
            return Err(Error::InvalidParameter {
                name: "D",
                reason: format!("dimension must be >= 2, got {}", self.dim),
            });
        }
        if !(self.c0.is_finite() && self.c0 >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "c0",
                reason: format!("must be finite and >= 0, got {}", self.c0),
            });
        }
        Ok(())
    }

    /// ħ²/(2μ): converts dimensionless wave-number² to energy.
    pub fn kinetic_scale(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mu)
    }

    /// g = 2μZe²/(ħ²α), the dimensionless coupling of the Hulthén well.
    pub fn coupling(&self) -> f64 {
        2.0 * self.mu * self.z * self.e2 / (self.hbar * self.hbar * self.alpha)
    }

    /// κ = 2μ/(ħ²α²); multiplies an energy into the dimensionless scale of `g`.
    pub fn energy_to_dimless(&self) -> f64 {
        2.0 * self.mu / (self.hbar * self.hbar * self.alpha * self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: u32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32) -> Self {
        Self { n, l }
    }
}

/// Whether a parameter combination lies inside the range where the closed
/// forms are claimed to hold (ν ≥ 1, L² ≥ 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    Within,
    /// D = 2, l = 0: ν = 1/2 and L² < 0. Results are computed formally.
    OutsideStatedValidity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    /// Z e² α
    pub a: f64,
    /// α² L²
    pub b: f64,
    /// (ħ²/2μ)(l + (D-1)/2)(l + (D-3)/2)
    pub l2: f64,
    /// 2l + D - 2
    pub lambda_cap: f64,
    /// l + (D-1)/2
    pub nu: f64,
    /// (l + (D-1)/2)(l + (D-3)/2); λ² in dimensionless form (may be negative)
    pub lambda_sq: f64,
    pub validity: Validity,
}

impl DerivedParams {
    /// √(2μ)L/ħ. Zero when λ² < 0; check `validity` first.
    pub fn lambda_dimless(&self) -> f64 {
        self.lambda_sq.max(0.0).sqrt()
    }
}

pub fn derive_params(p: &PhysicalParams, q: QuantumNumbers) -> DerivedParams {
    let l = f64::from(q.l);
    let d = f64::from(p.dim);
    let nu = l + (d - 1.0) / 2.0;
    let lambda_sq = nu * (l + (d - 3.0) / 2.0);
    let l2 = p.kinetic_scale() * lambda_sq;
    let validity = if lambda_sq < 0.0 {
        Validity::OutsideStatedValidity
    } else {
        Validity::Within
    };
    DerivedParams {
        a: p.z * p.e2 * p.alpha,
        b: p.alpha * p.alpha * l2,
        l2,
        lambda_cap: 2.0 * l + d - 2.0,
        nu,
        lambda_sq,
        validity,
    }
}

/// ν from the Riccati ground-state condition, (1 + √(1 + 8μL²/ħ²))/2.
/// Agrees with l + (D-1)/2 whenever L² ≥ 0.
pub fn nu_from_l2(p: &PhysicalParams, l2: f64) -> f64 {
    0.5 * (1.0 + (1.0 + 8.0 * p.mu * l2 / (p.hbar * p.hbar)).sqrt())
}

fn check_r(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must be finite and > 0, got {r}")))
    }
}

/// z = e^{-αr}/(1 - e^{-αr}) = 1/(e^{αr} - 1), evaluated with expm1 so that
/// small αr keeps full precision.
pub(crate) fn screening_factor(alpha: f64, r: f64) -> f64 {
    1.0 / (alpha * r).exp_m1()
}

/// Hulthén potential −Z e² α e^{−αr}/(1 − e^{−αr}).
pub fn hulthen_v(p: &PhysicalParams, r: f64) -> Result<f64> {
    check_r(r)?;
    Ok(-p.z * p.e2 * p.alpha * screening_factor(p.alpha, r))
}

/// α²(c₀ + e^{−αr}/(1 − e^{−αr})²), the exponential stand-in for 1/r².
pub fn centrifugal_approx(alpha: f64, c0: f64, r: f64) -> Result<f64> {
    check_r(r)?;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Domain(format!("alpha must be > 0, got {alpha}")));
    }
    let z = screening_factor(alpha, r);
    // e^{-x}/(1-e^{-x})² = z(1+z)
    Ok(alpha * alpha * (c0 + z * (1.0 + z)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CentrifugalMode {
    /// True L²/r² barrier.
    Exact,
    /// Exponential approximation with constant c₀.
    Approx,
}

pub fn effective_v(
    p: &PhysicalParams,
    q: QuantumNumbers,
    r: f64,
    mode: CentrifugalMode,
) -> Result<f64> {
    let dp = derive_params(p, q);
    effective_v_derived(p, &dp, r, mode)
}

pub(crate) fn effective_v_derived(
    p: &PhysicalParams,
    dp: &DerivedParams,
    r: f64,
    mode: CentrifugalMode,
) -> Result<f64> {
    check_r(r)?;
    let z = screening_factor(p.alpha, r);
    let coulomb = -dp.a * z;
    Ok(match mode {
        CentrifugalMode::Exact => coulomb + dp.l2 / (r * r),
        CentrifugalMode::Approx => coulomb + dp.b * (p.c0 + z * (1.0 + z)),
    })
}

/// Large-r limit of the effective potential: 0 for the exact barrier,
/// b·c₀ for the approximated one.
pub fn asymptote(p: &PhysicalParams, dp: &DerivedParams, mode: CentrifugalMode) -> f64 {
    match mode {
        CentrifugalMode::Exact => 0.0,
        CentrifugalMode::Approx => dp.b * p.c0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_params_s_wave_three_dimensions() {
        let p = PhysicalParams::paper_units(0.2, 3);
        let dp = derive_params(&p, QuantumNumbers::new(0, 0));
        assert_eq!(dp.lambda_cap, 1.0);
        assert_eq!(dp.nu, 1.0);
        assert_eq!(dp.l2, 0.0);
        assert_eq!(dp.b, 0.0);
        assert_eq!(dp.validity, Validity::Within);
    }

    #[test]
    fn derived_params_p_wave() {
        let p = PhysicalParams::paper_units(0.1, 3);
        let dp = derive_params(&p, QuantumNumbers::new(0, 1));
        assert_eq!(dp.nu, 2.0);
        assert!((dp.l2 - 2.0).abs() < 1e-15);
        assert!((dp.b - 0.02).abs() < 1e-15);
        assert!((dp.a - 0.1).abs() < 1e-15);
        assert!((dp.lambda_dimless() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn derived_params_five_dimensions() {
        let p = PhysicalParams::paper_units(0.1, 5);
        let dp = derive_params(&p, QuantumNumbers::new(0, 0));
        assert_eq!(dp.lambda_cap, 3.0);
        assert_eq!(dp.nu, 2.0);
    }

    #[test]
    fn two_dimensional_s_wave_is_flagged() {
        let p = PhysicalParams::paper_units(0.1, 2);
        let dp = derive_params(&p, QuantumNumbers::new(0, 0));
        assert_eq!(dp.nu, 0.5);
        assert!(dp.l2 < 0.0);
        assert_eq!(dp.validity, Validity::OutsideStatedValidity);
        let dp1 = derive_params(&p, QuantumNumbers::new(0, 1));
        assert_eq!(dp1.validity, Validity::Within);
    }

    #[test]
    fn nu_two_routes_agree() {
        for dim in 2..8 {
            for l in 0..5 {
                let p = PhysicalParams::paper_units(0.3, dim);
                let dp = derive_params(&p, QuantumNumbers::new(0, l));
                if dp.l2 >= 0.0 {
                    assert!((nu_from_l2(&p, dp.l2) - dp.nu).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn scale_consistency_in_alpha() {
        let q = QuantumNumbers::new(0, 2);
        let p = PhysicalParams::paper_units(0.07, 4);
        let dp = derive_params(&p, q);
        let s = 3.5;
        let ds = derive_params(&p.with_alpha(0.07 * s), q);
        assert!((ds.a - s * dp.a).abs() < 1e-14);
        assert!((ds.b - s * s * dp.b).abs() < 1e-14);
    }

    #[test]
    fn hulthen_value_and_limits() {
        let p = PhysicalParams::paper_units(0.2, 3);
        let v = hulthen_v(&p, 5.0).unwrap();
        let e1 = (-1.0f64).exp();
        assert!((v - (-0.2 * e1 / (1.0 - e1))).abs() < 1e-15);
        assert!((v + 0.116_395_341_373_865_3).abs() < 1e-15);
        // Coulomb behaviour near the origin: V·r → −Ze²
        let r = 1e-9;
        assert!((hulthen_v(&p, r).unwrap() * r + 1.0).abs() < 1e-8);
        assert!(hulthen_v(&p, 500.0).unwrap().abs() < 1e-40);
        assert!(hulthen_v(&p, 0.0).is_err());
        assert!(hulthen_v(&p, -1.0).is_err());
    }

    #[test]
    fn tiny_radius_stays_finite() {
        let p = PhysicalParams::paper_units(0.2, 3);
        let v = hulthen_v(&p, 1e-12).unwrap();
        assert!(v.is_finite());
        assert!((v * 1e-12 + 1.0).abs() < 1e-10);
    }

    #[test]
    fn centrifugal_approx_small_alpha() {
        let v = centrifugal_approx(0.01, C0_DEFAULT, 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-4);
        // substitution form at r = x/α
        let (alpha, x) = (0.37, 1.3);
        let ex = (-x as f64).exp();
        let direct = alpha * alpha * (C0_DEFAULT + ex / (1.0 - ex).powi(2));
        let v = centrifugal_approx(alpha, C0_DEFAULT, x / alpha).unwrap();
        assert!((v - direct).abs() < 1e-14 * direct);
        assert!(centrifugal_approx(0.1, C0_DEFAULT, 0.0).is_err());
    }

    #[test]
    fn centrifugal_approx_converges_monotonically() {
        let r = 2.0;
        let errs: Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&a| (centrifugal_approx(a, C0_DEFAULT, r).unwrap() * r * r - 1.0).abs())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
        assert!(errs[2] < 1e-6);
    }

    #[test]
    fn effective_potential_modes_for_s_wave_coincide() {
        let p = PhysicalParams::paper_units(0.2, 3);
        let q = QuantumNumbers::new(0, 0);
        for r in [0.01, 0.5, 3.0, 40.0] {
            let h = hulthen_v(&p, r).unwrap();
            let ex = effective_v(&p, q, r, CentrifugalMode::Exact).unwrap();
            let ap = effective_v(&p, q, r, CentrifugalMode::Approx).unwrap();
            assert_eq!(h, ex);
            assert_eq!(h, ap);
        }
    }

    #[test]
    fn effective_potential_difference_is_centrifugal_error() {
        let p = PhysicalParams::paper_units(0.1, 3);
        let q = QuantumNumbers::new(0, 1);
        let dp = derive_params(&p, q);
        let coeff = p.hbar.powi(2) * (dp.lambda_cap.powi(2) - 1.0) / (8.0 * p.mu);
        for r in [0.05, 1.0, 7.0, 60.0] {
            let ex = effective_v(&p, q, r, CentrifugalMode::Exact).unwrap();
            let ap = effective_v(&p, q, r, CentrifugalMode::Approx).unwrap();
            let want = coeff * (1.0 / (r * r) - centrifugal_approx(p.alpha, p.c0, r).unwrap());
            assert!((ex - ap - want).abs() <= 1e-12 * (1.0 + ex.abs()));
        }
        let d1 = effective_v(&p, q, 1.0, CentrifugalMode::Exact).unwrap()
            - effective_v(&p, q, 1.0, CentrifugalMode::Approx).unwrap();
        // the c₀ = 1/12 form overshoots 1/r² by ≈ α⁴r²/240
        let x: f64 = 0.1;
        assert!(d1 < 0.0 && (d1 + coeff * p.alpha.powi(2) * x * x / 240.0).abs() < 1e-9);
        // α → 0 at fixed r
        let small = p.with_alpha(1e-4);
        let d = effective_v(&small, q, 1.0, CentrifugalMode::Exact).unwrap()
            - effective_v(&small, q, 1.0, CentrifugalMode::Approx).unwrap();
        assert!(d.abs() < 1e-8);
    }

    #[test]
    fn validation_rejects_bad_params() {
        let good = PhysicalParams::paper_units(0.1, 3);
        assert!(good.validate().is_ok());
        assert!(good.with_alpha(0.0).validate().is_err());
        assert!(good.with_alpha(f64::NAN).validate().is_err());
        assert!(good.with_dim(1).validate().is_err());
        assert!(good.with_c0(-0.1).validate().is_err());
        assert!(good.with_c0(0.0).validate().is_ok());
    }
}
