//! Radial eigenfunctions of the approximated problem.
//!
//! With y = e^{−αr},
//!
//! ```text
//! R(r) = 𝒩 y^{ε̃} (1 − y)^{ν} ₂F₁(−n, n + 2(ε̃ + ν); 1 + 2ε̃; y)
//! ```
//!
//! The polynomial factor is also a Jacobi polynomial P_n^{(2ε̃, 2ν−1)}(1 − 2y),
//! which is what the closed-form normalization expands.

pub mod special;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{derive_params, effective_v, CentrifugalMode, PhysicalParams, QuantumNumbers};
use crate::oracle::quad::{integrate, QuadOptions};
use crate::spectrum::evaluate_level;

pub use crate::spectrum::epsilon_tilde;
use special::{hyp2f1_coefficients, hyp2f1_truncated_d2, jacobi_weights, ln_beta};

/// Starting size of the node-scan grid.
pub const NODE_SCAN_POINTS: usize = 2048;
const NODE_SCAN_MAX_POINTS: usize = 1 << 20;
/// |F| below this fraction of its term magnitude counts as "at a node"; closer
/// in, the cancelling (F′/F)² terms of the Riccati form lose accuracy.
const NODE_PROXIMITY: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialWavefunction {
    pub n: u32,
    pub l: u32,
    pub dim: u32,
    pub alpha: f64,
    pub eps_tilde: f64,
    pub nu: f64,
    pub energy: f64,
    /// power-series coefficients of the ₂F₁ factor in y
    pub coeffs: Vec<f64>,
    /// upper and lower ₂F₁ parameters, n + 2(ε̃ + ν) and 1 + 2ε̃
    pub series_b: f64,
    pub series_c: f64,
    /// 𝒩, or `None` for the unnormalized function (𝒩 = 1)
    pub norm: Option<f64>,
}

/// ε̃ + ν − √(ε̃² + 2μZe²/(ħ²α)) + n; zero when ε̃ satisfies the quantum condition.
pub fn quantum_condition_residual(p: &PhysicalParams, q: QuantumNumbers) -> f64 {
    let eps = epsilon_tilde(p, q);
    let nu = derive_params(p, q).nu;
    eps + nu - (eps * eps + p.coupling()).sqrt() + f64::from(q.n)
}

pub fn wavefunction(p: &PhysicalParams, q: QuantumNumbers, normalized: bool) -> Result<RadialWavefunction> {
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
    let eps = level.eps_tilde;
    let nu = derive_params(p, q).nu;
    let nf = f64::from(q.n);
    let (series_b, series_c) = (nf + 2.0 * (eps + nu), 1.0 + 2.0 * eps);
    let coeffs = hyp2f1_coefficients(q.n, series_b, series_c)?;
    let norm = if normalized {
        Some(normalization_closed(p, q)?)
    } else {
        None
    };
    Ok(RadialWavefunction {
        n: q.n,
        l: q.l,
        dim: p.dim,
        alpha: p.alpha,
        eps_tilde: eps,
        nu,
        energy: level.energy,
        coeffs,
        series_b,
        series_c,
        norm,
    })
}

fn check_r(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("r must be finite and > 0, got {r}")))
    }
}

impl RadialWavefunction {
    pub fn quantum_numbers(&self) -> QuantumNumbers {
        QuantumNumbers::new(self.n, self.l)
    }

    /// The ₂F₁ factor and its first two y-derivatives.
    pub fn polynomial(&self, y: f64) -> (f64, f64, f64) {
        hyp2f1_truncated_d2(self.n, self.series_b, self.series_c, y).unwrap_or((f64::NAN, f64::NAN, f64::NAN))
    }

    /// y^{ε̃}(1 − y)^{ν} evaluated as an exponential of logs (no underflow
    /// of the intermediate factors before the product).
    fn envelope(&self, r: f64) -> f64 {
        let ar = self.alpha * r;
        (-self.eps_tilde * ar + self.nu * (-(-ar).exp_m1()).ln()).exp()
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        check_r(r)?;
        let y = (-self.alpha * r).exp();
        Ok(self.norm.unwrap_or(1.0) * self.envelope(r) * self.polynomial(y).0)
    }

    /// φ = R′/R and φ′ from the analytic derivatives of the closed form.
    pub fn log_derivative(&self, r: f64) -> Result<(f64, f64)> {
        check_r(r)?;
        let a = self.alpha;
        let y = (-a * r).exp();
        let z = 1.0 / (a * r).exp_m1();
        let (f, df, ddf) = self.polynomial(y);
        let scale: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (c * y.powi(k as i32)).abs())
            .sum();
        if f.abs() <= NODE_PROXIMITY * scale {
            return Err(Error::NodeProximity {
                r,
                value: self.norm.unwrap_or(1.0) * self.envelope(r) * f,
            });
        }
        let g = df / f;
        let phi = -a * self.eps_tilde + self.nu * a * z - a * y * g;
        let dphi = -self.nu * a * a * z * (1.0 + z) + a * a * y * (g + y * ddf / f - y * g * g);
        Ok((phi, dphi))
    }

    /// Sign of the polynomial factor through the Jacobi form, which is free
    /// of cancellation near both y → 0 and y → 1.
    fn node_sign(&self, weights: &[f64], r: f64) -> f64 {
        let y = (-self.alpha * r).exp();
        let one_minus_y = -(-self.alpha * r).exp_m1();
        let n = self.n as i32;
        weights
            .iter()
            .enumerate()
            .map(|(p, w)| w * (-y).powi(n - p as i32) * one_minus_y.powi(p as i32))
            .sum()
    }
}

/// R(r) for the closed-form level; `normalized = false` uses 𝒩 = 1.
pub fn radial_r(p: &PhysicalParams, q: QuantumNumbers, r: f64, normalized: bool) -> Result<f64> {
    wavefunction(p, q, normalized)?.value(r)
}

/// Sum of signed terms `sign·exp(log)` scaled by the largest log.
fn signed_log_sum(terms: &[(f64, f64)]) -> (f64, f64) {
    let top = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    // Neumaier compensated summation
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &(sign, log) in terms {
        let x = sign * (log - top).exp();
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    (sum + comp, top)
}

/// 𝒩 from the Jacobi expansion of the polynomial and Beta integrals:
///
/// ```text
/// 𝒩⁻² = (1/α) (n!/(1+A)_n)² Σ_{p,q} w_p w_q (−1)^{p+q} B(A+2n−p−q, 2ν+1+p+q)
/// ```
///
/// with A = 2ε̃, B = 2ν − 1 and w_p the Jacobi weights.
pub fn normalization_closed(p: &PhysicalParams, q: QuantumNumbers) -> Result<f64> {
    let eps = epsilon_tilde(p, q);
    if !(eps > 0.0) {
        return Err(Error::NotBound {
            n: q.n,
            l: q.l,
            dim: p.dim,
            eps_tilde: eps,
        });
    }
    let nu = derive_params(p, q).nu;
    let n = q.n;
    let a_par = 2.0 * eps;
    let b_par = 2.0 * nu - 1.0;
    let log_w: Vec<f64> = jacobi_weights(n, a_par, b_par).iter().map(|w| w.ln()).collect();
    let mut terms = Vec::with_capacity(((n + 1) * (n + 1)) as usize);
    for (pi, lwp) in log_w.iter().enumerate() {
        for (qi, lwq) in log_w.iter().enumerate() {
            let s = (pi + qi) as f64;
            let lb = ln_beta(a_par + 2.0 * f64::from(n) - s, 2.0 * nu + 1.0 + s)?;
            let sign = if (pi + qi) % 2 == 0 { 1.0 } else { -1.0 };
            terms.push((sign, lwp + lwq + lb));
        }
    }
    let (sum, top) = signed_log_sum(&terms);
    if !(sum > 0.0) {
        return Err(Error::ConvergenceFailure(format!(
            "normalization double sum lost all precision (scaled sum {sum})"
        )));
    }
    // ln((1+A)_n / n!)
    let ln_ratio: f64 = (0..n).map(|j| ((1.0 + a_par + f64::from(j)) / f64::from(j + 1)).ln()).sum();
    let ln_inv_sq = -p.alpha.ln() - 2.0 * ln_ratio + sum.ln() + top;
    Ok((-0.5 * ln_inv_sq).exp())
}

/// ∫₀¹ y^{s−1}(1−y)^{2ν} G(y) dy; for s < 1 the endpoint power is removed by
/// t = y^s.
fn power_weighted_integral<G: Fn(f64) -> f64>(s: f64, two_nu: f64, g: G, opts: &QuadOptions) -> Result<f64> {
    if s >= 1.0 {
        let res = integrate(|y| y.powf(s - 1.0) * (1.0 - y).powf(two_nu) * g(y), 0.0, 1.0, opts)?;
        Ok(res.value)
    } else {
        let res = integrate(
            |t| {
                let y = t.powf(1.0 / s);
                (1.0 - y).powf(two_nu) * g(y)
            },
            0.0,
            1.0,
            opts,
        )?;
        Ok(res.value / s)
    }
}

/// 𝒩 = (∫₀^∞ R_unnorm² dr)^{−1/2}, integrated in y = e^{−αr} where
/// dr = −dy/(αy).
pub fn normalization_numeric(p: &PhysicalParams, q: QuantumNumbers) -> Result<f64> {
    let wf = wavefunction(p, q, false)?;
    let integral = power_weighted_integral(
        2.0 * wf.eps_tilde,
        2.0 * wf.nu,
        |y| wf.polynomial(y).0.powi(2),
        &QuadOptions::relative(1e-13),
    )? / p.alpha;
    Ok(integral.powf(-0.5))
}

/// ∫ R₁R₂ dr between two normalized levels with the same (l, D).
pub fn overlap(p: &PhysicalParams, q1: QuantumNumbers, q2: QuantumNumbers) -> Result<f64> {
    if q1.l != q2.l {
        return Err(Error::OutOfRange(format!(
            "overlap needs a shared Hamiltonian (same l); got l = {} and {}",
            q1.l, q2.l
        )));
    }
    let w1 = wavefunction(p, q1, true)?;
    let w2 = wavefunction(p, q2, true)?;
    let integral = power_weighted_integral(
        w1.eps_tilde + w2.eps_tilde,
        2.0 * w1.nu,
        |y| w1.polynomial(y).0 * w2.polynomial(y).0,
        &QuadOptions::new(1e-14, 1e-12),
    )?;
    Ok(w1.norm.unwrap_or(1.0) * w2.norm.unwrap_or(1.0) * integral / p.alpha)
}

fn scan_sign_changes(wf: &RadialWavefunction, weights: &[f64], points: usize) -> (usize, Vec<(f64, f64)>) {
    // y from 1 − 1e-8 down to e^{−700}
    let lo = (1e-8 / wf.alpha).ln();
    let hi = (700.0 / wf.alpha).ln();
    let mut brackets = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..points {
        let r = (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp();
        let s = wf.node_sign(weights, r);
        if s == 0.0 {
            continue;
        }
        if let Some((r0, s0)) = prev {
            if s0.signum() != s.signum() {
                brackets.push((r0, r));
            }
        }
        prev = Some((r, s));
    }
    (brackets.len(), brackets)
}

fn stable_scan(wf: &RadialWavefunction, start: usize, max: usize) -> Result<Vec<(f64, f64)>> {
    let weights = jacobi_weights(wf.n, 2.0 * wf.eps_tilde, 2.0 * wf.nu - 1.0);
    let mut points = start.max(2);
    let (mut last, mut brackets) = scan_sign_changes(wf, &weights, points);
    let mut agreements = 0;
    while agreements < 2 {
        points *= 2;
        if points > max {
            return Err(Error::GridTooCoarse);
        }
        let (count, b) = scan_sign_changes(wf, &weights, points);
        if count == last {
            agreements += 1;
        } else {
            agreements = 0;
        }
        last = count;
        brackets = b;
    }
    Ok(brackets)
}

/// Strict sign changes of R on (0, ∞), from a log-spaced scan that is
/// doubled until the count is unchanged by two successive refinements.
pub fn count_nodes(p: &PhysicalParams, q: QuantumNumbers) -> Result<usize> {
    count_nodes_with(p, q, NODE_SCAN_POINTS, NODE_SCAN_MAX_POINTS)
}

pub fn count_nodes_with(p: &PhysicalParams, q: QuantumNumbers, start: usize, max_points: usize) -> Result<usize> {
    let wf = wavefunction(p, q, false)?;
    Ok(stable_scan(&wf, start, max_points)?.len())
}

/// Node radii, each bracket refined by bisection.
pub fn node_positions(p: &PhysicalParams, q: QuantumNumbers) -> Result<Vec<f64>> {
    let wf = wavefunction(p, q, false)?;
    let weights = jacobi_weights(wf.n, 2.0 * wf.eps_tilde, 2.0 * wf.nu - 1.0);
    stable_scan(&wf, NODE_SCAN_POINTS, NODE_SCAN_MAX_POINTS)?
        .into_iter()
        .map(|(a, b)| crate::roots::bisect(|r| wf.node_sign(&weights, r), a, b))
        .collect()
}

/// |φ′ + φ² + (2μ/ħ²)(E − V_eff)| at r, with E the closed-form level and V_eff
/// in the requested centrifugal mode. Small in approximated mode; in exact
/// mode it measures the centrifugal approximation error.
pub fn riccati_residual_mode(p: &PhysicalParams, q: QuantumNumbers, r: f64, mode: CentrifugalMode) -> Result<f64> {
    let wf = wavefunction(p, q, false)?;
    let (phi, dphi) = wf.log_derivative(r)?;
    let v = effective_v(p, q, r, mode)?;
    Ok((dphi + phi * phi + 2.0 * p.mu / (p.hbar * p.hbar) * (wf.energy - v)).abs())
}

pub fn riccati_residual(p: &PhysicalParams, q: QuantumNumbers, r: f64) -> Result<f64> {
    riccati_residual_mode(p, q, r, CentrifugalMode::Approx)
}
