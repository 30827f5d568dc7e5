//! Improved quantization rule for the approximated effective potential.
//!
//! In `z = 1/(e^{αr} − 1)` the approximated potential is the quadratic
//! `V(z) = b z² + (b − a) z + b c₀`, so the classical region is bounded by the
//! two roots of `V(z) = E`. The rule reads
//!
//! ```text
//! ∫_{rA}^{rB} k dr = (n + 1)π + Q_c,    Q_c = ∫ k₀′ φ₀/φ₀′ dr
//! ```
//!
//! with the correction evaluated once on the ground state. Every closed form
//! here has a quadrature twin so the two can be checked against each other.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{effective_v_derived, CentrifugalMode, DerivedParams, PhysicalParams, QuantumNumbers};
use crate::oracle::quad::{integrate_between_turning_points, QuadOptions};
use crate::roots::bisect;
use crate::spectrum::{evaluate_level, principal};

/// Tolerance used by the quadrature branches unless the caller overrides it.
pub const DEFAULT_QUAD_TOL: f64 = 1e-12;

pub fn transform_z(alpha: f64, r: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("r must be finite and > 0, got {r}")));
    }
    Ok(1.0 / (alpha * r).exp_m1())
}

pub fn inverse_z(alpha: f64, z: f64) -> Result<f64> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Domain(format!("z must be finite and > 0, got {z}")));
    }
    Ok((1.0 / z).ln_1p() / alpha)
}

/// dz/dr = −αz(1 + z)
pub fn dz_dr(alpha: f64, z: f64) -> f64 {
    -alpha * z * (1.0 + z)
}

/// Approximated effective potential as a function of z.
pub fn potential_z(p: &PhysicalParams, dp: &DerivedParams, z: f64) -> f64 {
    dp.b * z * z + (dp.b - dp.a) * z + dp.b * p.c0
}

/// Bottom of the approximated well; `None` when there is no well at z > 0.
pub fn well_minimum(p: &PhysicalParams, dp: &DerivedParams) -> Option<f64> {
    if dp.b > 0.0 && dp.a > dp.b {
        Some(dp.b * p.c0 - (dp.a - dp.b).powi(2) / (4.0 * dp.b))
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoints {
    pub z_a: f64,
    pub z_b: f64,
    /// image of z_b (inner turning point)
    pub r_a: f64,
    /// image of z_a; infinite when z_a = 0
    pub r_b: f64,
}

fn require_positive_b(dp: &DerivedParams) -> Result<()> {
    if dp.b == 0.0 {
        Err(Error::CentrifugalFree)
    } else if dp.b < 0.0 {
        Err(Error::OutsideValidity)
    } else {
        Ok(())
    }
}

/// Roots z_a ≤ z_b of `V(z) = E`.
pub fn turning_points(p: &PhysicalParams, dp: &DerivedParams, energy: f64) -> Result<TurningPoints> {
    require_positive_b(dp)?;
    let big_b = dp.b - dp.a;
    let c = dp.b * p.c0 - energy;
    let disc = big_b * big_b - 4.0 * dp.b * c;
    if !(disc >= 0.0) {
        return Err(Error::NoClassicalRegion { energy });
    }
    // cancellation-free quadratic roots
    let qq = -0.5 * (big_b + disc.sqrt().copysign(big_b));
    let (r1, r2) = if qq == 0.0 { (0.0, 0.0) } else { (c / qq, qq / dp.b) };
    let (z_a, z_b) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    if z_b <= 0.0 || z_a < 0.0 {
        return Err(Error::Domain(format!(
            "E = {energy} is not below the potential's asymptote b·c0 = {}",
            dp.b * p.c0
        )));
    }
    let r_of = |z: f64| (1.0 / z).ln_1p() / p.alpha;
    Ok(TurningPoints {
        z_a,
        z_b,
        r_a: r_of(z_b),
        r_b: r_of(z_a),
    })
}

fn in_region(tp: &TurningPoints, z: f64) -> Result<()> {
    if z >= tp.z_a && z <= tp.z_b {
        Ok(())
    } else {
        Err(Error::Domain(format!("z = {z} outside [{}, {}]", tp.z_a, tp.z_b)))
    }
}

/// k(z) = (√(2μb)/ħ)√((z_b − z)(z − z_a))
pub fn momentum_k(p: &PhysicalParams, dp: &DerivedParams, tp: &TurningPoints, z: f64) -> Result<f64> {
    require_positive_b(dp)?;
    in_region(tp, z)?;
    let pref = (2.0 * p.mu * dp.b).sqrt() / p.hbar;
    Ok(pref * ((tp.z_b - z) * (z - tp.z_a)).sqrt())
}

/// dk/dz = (√(2μb)/2ħ)(z_a + z_b − 2z)/√((z_b − z)(z − z_a)); open interval only.
pub fn momentum_dk_dz(p: &PhysicalParams, dp: &DerivedParams, tp: &TurningPoints, z: f64) -> Result<f64> {
    require_positive_b(dp)?;
    if !(z > tp.z_a && z < tp.z_b) {
        return Err(Error::Domain(format!("dk/dz diverges at or beyond the turning points (z = {z})")));
    }
    let pref = (2.0 * p.mu * dp.b).sqrt() / p.hbar;
    Ok(0.5 * pref * (tp.z_a + tp.z_b - 2.0 * z) / ((tp.z_b - z) * (z - tp.z_a)).sqrt())
}

/// φ₀ = c1·z + c2, the ground-state logarithmic derivative R₀′/R₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundLogDeriv {
    pub c1: f64,
    pub c2: f64,
    pub alpha: f64,
    /// ε̃ of the n = 0 level
    pub eps0: f64,
    /// Ẽ₀ = E₀ − b c₀
    pub shifted_energy: f64,
    pub energy: f64,
}

impl GroundLogDeriv {
    pub fn eval(&self, z: f64) -> f64 {
        self.c1 * z + self.c2
    }

    /// dφ₀/dr
    pub fn derivative_r(&self, z: f64) -> f64 {
        self.c1 * dz_dr(self.alpha, z)
    }
}

pub fn ground_phi(p: &PhysicalParams, dp: &DerivedParams) -> GroundLogDeriv {
    // sign of c2 fixed by the Riccati equation (the z¹ coefficient)
    let eps0 = p.coupling() / (2.0 * dp.nu) - dp.nu / 2.0;
    let shifted = -p.kinetic_scale() * p.alpha * p.alpha * eps0 * eps0;
    GroundLogDeriv {
        c1: dp.nu * p.alpha,
        c2: -p.alpha * eps0,
        alpha: p.alpha,
        eps0,
        shifted_energy: shifted,
        energy: shifted + dp.b * p.c0,
    }
}

/// Residual of `φ₀′ + φ₀² = (2μ/ħ²)(V − E₀)` at `z`, divided by the largest
/// term so that it is a relative measure.
pub fn ground_riccati_residual(p: &PhysicalParams, dp: &DerivedParams, z: f64) -> f64 {
    let g = ground_phi(p, dp);
    let phi = g.eval(z);
    let dphi = g.derivative_r(z);
    let rhs = 2.0 * p.mu / (p.hbar * p.hbar) * (potential_z(p, dp, z) - g.energy);
    let scale = dphi.abs().max(phi * phi).max(rhs.abs()).max(f64::MIN_POSITIVE);
    (dphi + phi * phi - rhs).abs() / scale
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Closed,
    Quadrature,
}

/// dV/dr of the approximated potential.
fn potential_derivative_r(p: &PhysicalParams, dp: &DerivedParams, z: f64) -> f64 {
    (2.0 * dp.b * z + dp.b - dp.a) * dz_dr(p.alpha, z)
}

fn local_k(p: &PhysicalParams, dp: &DerivedParams, energy: f64, r: f64) -> Result<f64> {
    let v = effective_v_derived(p, dp, r, CentrifugalMode::Approx)?;
    Ok((2.0 * p.mu * (energy - v)).max(0.0).sqrt() / p.hbar)
}

/// Classical region in r for an energy: both turning points when b > 0,
/// `(0, r_B]` for the centrifugal-free well.
fn classical_interval(p: &PhysicalParams, dp: &DerivedParams, energy: f64) -> Result<(f64, f64)> {
    if dp.b < 0.0 {
        return Err(Error::OutsideValidity);
    }
    if dp.b == 0.0 {
        if !(energy < 0.0 && energy > f64::NEG_INFINITY) {
            return Err(Error::NoClassicalRegion { energy });
        }
        let z_t = -energy / dp.a;
        return Ok((0.0, (1.0 / z_t).ln_1p() / p.alpha));
    }
    let tp = turning_points(p, dp, energy)?;
    if !tp.r_b.is_finite() {
        return Err(Error::Domain("outer turning point at infinity".into()));
    }
    Ok((tp.r_a, tp.r_b))
}

/// q with Q_c = πq.
///
/// Closed form ν − 1 − λ; the quadrature branch integrates k₀′φ₀/φ₀′ over the
/// ground-state classical region in r.
pub fn quantum_correction(p: &PhysicalParams, dp: &DerivedParams, method: Method) -> Result<f64> {
    if dp.b < 0.0 {
        return Err(Error::OutsideValidity);
    }
    match method {
        Method::Closed => Ok(dp.nu - 1.0 - dp.lambda_dimless()),
        // q vanishes for the s-wave, so an absolute floor is needed
        Method::Quadrature => quantum_correction_quadrature(p, dp, &QuadOptions::new(1e-10, DEFAULT_QUAD_TOL)),
    }
}

pub fn quantum_correction_quadrature(p: &PhysicalParams, dp: &DerivedParams, opts: &QuadOptions) -> Result<f64> {
    let ground = ground_phi(p, dp);
    let e0 = ground.energy;
    let (lo, hi) = classical_interval(p, dp, e0)?;
    let res = integrate_between_turning_points(
        |r, _, _| {
            let k = match local_k(p, dp, e0, r) {
                Ok(k) if k > 0.0 => k,
                _ => return 0.0,
            };
            let z = 1.0 / (p.alpha * r).exp_m1();
            let dk = -p.mu * potential_derivative_r(p, dp, z) / (p.hbar * p.hbar * k);
            dk * ground.eval(z) / ground.derivative_r(z)
        },
        lo,
        hi,
        opts,
    )?;
    Ok(res.value / PI)
}

/// u = κ(b c₀ − E), the dimensionless depth below the asymptote.
fn depth(p: &PhysicalParams, dp: &DerivedParams, energy: f64) -> f64 {
    p.energy_to_dimless() * (dp.b * p.c0 - energy)
}

/// ∫ k dr over the classical region at energy `energy` (positive action).
///
/// Closed: π(√(u+g) − √u − λ) ≡ πλ(s₂ − s₁ − 1) with s₁ = √(c₀ − E/b),
/// s₂ = √(c₀ + (a − E)/b).
pub fn momentum_integral(p: &PhysicalParams, dp: &DerivedParams, energy: f64, method: Method) -> Result<f64> {
    match method {
        Method::Closed => momentum_integral_closed(p, dp, energy),
        Method::Quadrature => momentum_integral_quadrature(p, dp, energy, &QuadOptions::relative(DEFAULT_QUAD_TOL)),
    }
}

fn momentum_integral_closed(p: &PhysicalParams, dp: &DerivedParams, energy: f64) -> Result<f64> {
    let v = momentum_integral_closed_raw(p, dp, energy)?;
    if !v.is_finite() {
        return Err(Error::Domain(format!("momentum integral is not finite at E = {energy}")));
    }
    Ok(v)
}

fn momentum_integral_closed_raw(p: &PhysicalParams, dp: &DerivedParams, energy: f64) -> Result<f64> {
    if dp.b < 0.0 {
        return Err(Error::OutsideValidity);
    }
    if dp.b > 0.0 {
        // existence check only
        turning_points(p, dp, energy)?;
        let lam = dp.lambda_dimless();
        let s1 = (p.c0 - energy / dp.b).sqrt();
        let s2 = (p.c0 + (dp.a - energy) / dp.b).sqrt();
        return Ok(PI * lam * (s2 - s1 - 1.0));
    }
    if !(energy < 0.0) {
        return Err(Error::NoClassicalRegion { energy });
    }
    let u = depth(p, dp, energy);
    Ok(PI * ((u + p.coupling()).sqrt() - u.sqrt()))
}

pub fn momentum_integral_quadrature(
    p: &PhysicalParams,
    dp: &DerivedParams,
    energy: f64,
    opts: &QuadOptions,
) -> Result<f64> {
    let (lo, hi) = classical_interval(p, dp, energy)?;
    let res = integrate_between_turning_points(|r, _, _| local_k(p, dp, energy, r).unwrap_or(0.0), lo, hi, opts)?;
    Ok(res.value)
}

/// The same action integrated in z: ∫_{z_a}^{z_b} k(z)/(αz(1+z)) dz.
pub fn momentum_integral_z(p: &PhysicalParams, dp: &DerivedParams, energy: f64, opts: &QuadOptions) -> Result<f64> {
    let tp = turning_points(p, dp, energy)?;
    if tp.z_a <= 0.0 {
        return Err(Error::Domain("outer turning point at infinity".into()));
    }
    let pref = (2.0 * p.mu * dp.b).sqrt() / p.hbar;
    let res = integrate_between_turning_points(
        |z, d_lo, d_hi| pref * (d_lo * d_hi).sqrt() / (p.alpha * z * (1.0 + z)),
        tp.z_a,
        tp.z_b,
        opts,
    )?;
    Ok(res.value)
}

/// λ(s₂ − s₁) − (n + ν); vanishes at the level energy.
pub fn quantization_residual(p: &PhysicalParams, dp: &DerivedParams, q: QuantumNumbers, energy: f64) -> Result<f64> {
    require_positive_b(dp)?;
    let lam = dp.lambda_dimless();
    // at the asymptote E = b·c₀ the first radicand may round below zero
    let s1 = (p.c0 - energy / dp.b).max(0.0).sqrt();
    let s2 = (p.c0 + (dp.a - energy) / dp.b).sqrt();
    Ok(lam * (s2 - s1) - principal(p, q))
}

/// Energy from the quantization condition by bracketed bisection.
pub fn solve_quantization(p: &PhysicalParams, q: QuantumNumbers) -> Result<f64> {
    p.validate()?;
    let dp = crate::model::derive_params(p, q);
    let big_n = principal(p, q);
    if dp.b == 0.0 {
        // single turning point: the closed s-wave level
        let level = evaluate_level(p, q);
        if !level.bound {
            return Err(Error::NoRoot(format!("no s-wave level n = {} at alpha = {}", q.n, p.alpha)));
        }
        return Ok(level.energy);
    }
    if dp.b < 0.0 {
        // λ-free form √(u+g) − √u = n + ν, monotone decreasing in u ≥ 0
        let g = p.coupling();
        let f = |u: f64| (u + g).sqrt() - u.sqrt() - big_n;
        let u_hi = (g / (2.0 * big_n)).powi(2) + 1.0;
        let u = bisect(f, 0.0, u_hi)?;
        return Ok(dp.b * p.c0 - u / p.energy_to_dimless());
    }
    let lo = well_minimum(p, &dp).ok_or_else(|| Error::NoRoot(format!("no well for l = {} at alpha = {}", q.l, p.alpha)))?;
    let hi = dp.b * p.c0;
    bisect(
        |e| quantization_residual(p, &dp, q, e).unwrap_or(f64::NAN),
        lo,
        hi,
    )
}

/// ε̃ recovered from a solved energy, for cross-checks.
pub fn eps_from_energy(p: &PhysicalParams, dp: &DerivedParams, energy: f64) -> f64 {
    depth(p, dp, energy).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AppendixId {
    A1,
    A2,
    A3,
    A4,
    A5,
}

impl AppendixId {
    pub const ALL: [AppendixId; 5] = [Self::A1, Self::A2, Self::A3, Self::A4, Self::A5];
}

fn check_appendix_args(id: AppendixId, r_a: f64, r_b: f64, extra: Option<(f64, f64)>) -> Result<(f64, f64)> {
    if !(r_a.is_finite() && r_b.is_finite() && r_a > 0.0 && r_b > r_a) {
        return Err(Error::Domain(format!("need 0 < rA < rB, got rA = {r_a}, rB = {r_b}")));
    }
    if id != AppendixId::A5 {
        return Ok((0.0, 0.0));
    }
    let (a, b) = extra.ok_or_else(|| Error::Domain("A5 needs the (a, b) pair".into()))?;
    if !(a + b * r_a > 0.0 && a + b * r_b > 0.0) {
        return Err(Error::Domain(format!("a + b·r must stay positive on [rA, rB] (a = {a}, b = {b})")));
    }
    Ok((a, b))
}

/// Closed-form right-hand sides of the two-turning-point integrals.
pub fn appendix_integral(id: AppendixId, r_a: f64, r_b: f64, extra: Option<(f64, f64)>) -> Result<f64> {
    let (a, b) = check_appendix_args(id, r_a, r_b, extra)?;
    Ok(match id {
        AppendixId::A1 => 0.5 * PI * (r_a + r_b),
        AppendixId::A2 => PI / (r_a * r_b).sqrt(),
        AppendixId::A3 => PI,
        // (rA + rB)/2 − √(rA rB) written without cancellation
        AppendixId::A4 => 0.5 * PI * (r_b.sqrt() - r_a.sqrt()).powi(2),
        AppendixId::A5 => PI / ((a + b * r_a) * (a + b * r_b)).sqrt(),
    })
}

/// Left-hand sides by adaptive quadrature.
pub fn appendix_quadrature(
    id: AppendixId,
    r_a: f64,
    r_b: f64,
    extra: Option<(f64, f64)>,
    opts: &QuadOptions,
) -> Result<f64> {
    let (a, b) = check_appendix_args(id, r_a, r_b, extra)?;
    let res = integrate_between_turning_points(
        |r, d_lo, d_hi| {
            let s = (d_lo * d_hi).sqrt();
            match id {
                AppendixId::A1 => r / s,
                AppendixId::A2 => 1.0 / (r * s),
                AppendixId::A3 => 1.0 / s,
                AppendixId::A4 => s / r,
                AppendixId::A5 => 1.0 / ((a + b * r) * s),
            }
        },
        r_a,
        r_b,
        opts,
    )?;
    Ok(res.value)
}
