//! Verification suites: each cross-checks a closed form against an
//! independent evaluation (quadrature, root solve, series identity, ...).
//!
//! Every check carries its own tolerance; a suite's `max_error` and
//! `tolerance` describe its worst check (largest error-to-tolerance ratio).
//! `perturb_c0` scales c₀ on one side of the dual-route checks, so a value
//! other than 1 must make the run fail.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::config::{RunConfig, Suite};
use super::table::Table;
use crate::error::Error;
use crate::model::{derive_params, CentrifugalMode, PhysicalParams, QuantumNumbers};
use crate::oracle::quad::QuadOptions;
use crate::qrule::{
    appendix_integral, appendix_quadrature, ground_riccati_residual, momentum_integral, momentum_integral_quadrature,
    quantum_correction, quantum_correction_quadrature, solve_quantization, turning_points, AppendixId, Method,
};
use crate::spectrum::{coulomb_limit, critical_alpha, degeneracy_partner, evaluate_level, EnergyLevel};
use crate::wavefn::special::{factorial, hyp2f1_truncated, jacobi_p, pochhammer};
use crate::wavefn::{
    count_nodes, normalization_closed, normalization_numeric, overlap, quantum_condition_residual,
    riccati_residual_mode,
};

/// Samples per appendix formula.
pub const APPENDIX_PAIRS: usize = 100;
/// Randomized (n, A, B, x) draws for the Jacobi identity.
pub const JACOBI_SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub first_failure: Option<String>,
}

struct Acc {
    checks: usize,
    failures: usize,
    worst: Option<(f64, f64)>,
    first_failure: Option<String>,
}

impl Acc {
    fn new() -> Self {
        Acc {
            checks: 0,
            failures: 0,
            worst: None,
            first_failure: None,
        }
    }

    fn check(&mut self, error: f64, tol: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        let error = if error.is_nan() { f64::INFINITY } else { error };
        let ratio = if tol > 0.0 { error / tol } else if error == 0.0 { 0.0 } else { f64::INFINITY };
        if !(error <= tol) {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(format!("{}: error {error:.3e} > {tol:.1e}", what()));
            }
        }
        let worse = match self.worst {
            None => true,
            Some((e, t)) => {
                let r = if t > 0.0 { e / t } else if e == 0.0 { 0.0 } else { f64::INFINITY };
                ratio > r
            }
        };
        if worse {
            self.worst = Some((error, tol));
        }
    }

    fn fail(&mut self, what: String, e: &Error) {
        self.check(f64::INFINITY, 0.0, || format!("{what}: {e}"));
    }

    fn finish(self, suite: Suite) -> SuiteReport {
        let (max_error, tolerance) = self.worst.unwrap_or((0.0, 0.0));
        SuiteReport {
            suite,
            passed: self.failures == 0 && self.checks > 0,
            checks: self.checks,
            failures: self.failures,
            max_error,
            tolerance,
            first_failure: self.first_failure.or_else(|| (self.checks == 0).then(|| "no checks ran".into())),
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    /// bound closed-form levels on the configured grid
    states: Vec<(PhysicalParams, EnergyLevel)>,
}

impl Ctx<'_> {
    fn perturbed(&self, p: &PhysicalParams) -> PhysicalParams {
        p.with_c0(p.c0 * self.cfg.perturb_c0)
    }

    fn quad(&self) -> QuadOptions {
        QuadOptions::relative(self.cfg.tol)
    }

    /// (α, D, l) combinations with a bound ground state.
    fn ground_states(&self) -> impl Iterator<Item = &(PhysicalParams, EnergyLevel)> {
        self.states.iter().filter(|(_, lv)| lv.n == 0)
    }
}

fn label(p: &PhysicalParams, lv: &EnergyLevel) -> String {
    format!("n={} l={} D={} alpha={}", lv.n, lv.l, lv.dim, p.alpha)
}

fn vieta(ctx: &Ctx) -> Acc {
    let mut acc = Acc::new();
    for (p, lv) in &ctx.states {
        let q = QuantumNumbers::new(lv.n, lv.l);
        let dp = derive_params(p, q);
        if dp.b <= 0.0 {
            continue;
        }
        let alt = ctx.perturbed(p);
        match turning_points(&alt, &derive_params(&alt, q), lv.energy) {
            Ok(tp) => {
                let sum = dp.a / dp.b - 1.0;
                let prod = -lv.energy / dp.b + p.c0;
                acc.check((tp.z_a + tp.z_b - sum).abs() / sum.abs().max(1.0), 1e-12, || {
                    format!("sum, {}", label(p, lv))
                });
                acc.check((tp.z_a * tp.z_b - prod).abs() / prod.abs().max(1.0), 1e-12, || {
                    format!("product, {}", label(p, lv))
                });
            }
            Err(e) => acc.fail(label(p, lv), &e),
        }
    }
    acc
}

fn riccati(ctx: &Ctx) -> Acc {
    let mut acc = Acc::new();
    for (p, lv) in ctx.ground_states() {
        let dp = derive_params(p, QuantumNumbers::new(0, lv.l));
        for i in 0..=50 {
            let z = 1e-3 * 1e5f64.powf(f64::from(i) / 50.0);
            acc.check(ground_riccati_residual(p, &dp, z), 1e-12, || {
                format!("ground phi at z={z}, {}", label(p, lv))
            });
        }
    }
    for (p, lv) in &ctx.states {
        let q = QuantumNumbers::new(lv.n, lv.l);
        for i in 0..=60 {
            let r = 0.1 * 500f64.powf(f64::from(i) / 60.0);
            match riccati_residual_mode(p, q, r, CentrifugalMode::Approx) {
                Ok(res) => acc.check(res, 1e-8, || format!("r={r}, {}", label(p, lv))),
                Err(Error::NodeProximity { .. }) => {}
                Err(e) => acc.fail(label(p, lv), &e),
            }
        }
    }
    acc
}

fn nodes(ctx: &Ctx) -> Acc {
    let mut acc = Acc::new();
    for (p, lv) in &ctx.states {
        match count_nodes(p, QuantumNumbers::new(lv.n, lv.l)) {
            Ok(k) => acc.check((k as f64 - f64::from(lv.n)).abs(), 0.0, || {
                format!("{k} nodes, {}", label(p, lv))
            }),
            Err(e) => acc.fail(label(p, lv), &e),
        }
    }
    acc
}

fn jacobi(rng: &mut ChaCha8Rng) -> Acc {
    let mut acc = Acc::new();
    for _ in 0..JACOBI_SAMPLES {
        let n: u32 = rng.random_range(0..=10);
        let a: f64 = rng.random_range(0.0..5.0);
        let b: f64 = rng.random_range(0.0..5.0);
        let x: f64 = rng.random_range(0.0..1.0);
        let lhs = jacobi_p(n, a, b, 1.0 - 2.0 * x);
        match hyp2f1_truncated(n, f64::from(n) + a + b + 1.0, a + 1.0, x) {
            Ok(f) => {
                let rhs = pochhammer(a + 1.0, n) / factorial(n) * f;
                acc.check((lhs - rhs).abs() / lhs.abs().max(1.0), 1e-12, || {
                    format!("n={n} A={a} B={b} x={x}")
                });
            }
            Err(e) => acc.fail(format!("n={n} A={a} B={b} x={x}"), &e),
        }
    }
    acc
}

fn quantum_condition(ctx: &Ctx) -> Acc {
    let mut acc = Acc::new();
    for (p, lv) in &ctx.states {
        let res = quantum_condition_residual(p, QuantumNumbers::new(lv.n, lv.l));
        acc.check(res.abs(), 1e-12, || label(p, lv));
    }
    acc
}

fn quantum_correction_suite(ctx: &Ctx) -> Acc {
    let mut acc = Acc::new();
    let opts = QuadOptions::new(1e-10, ctx.cfg.tol);
    for (p, lv) in ctx.ground_states() {
        let q = QuantumNumbers::new(0, lv.l);
        let dp = derive_params(p, q);
        if dp.b < 0.0 {
            continue;
        }
        let closed = quantum_correction(p, &dp, Method::Closed);
        let quad = quantum_correction_quadrature(p, &dp, &opts);
        match (closed, quad) {
            (Ok(c), Ok(n)) => acc.check((c - n).abs(), 1e-6, || label(p, lv)),
            (Err(e), _) | (_, Err(e)) => acc.fail(label(p, lv), &e),
        }
    }
    acc
}

fn momentum_integral_suite(ctx: &Ctx) -> Acc {
    let mut acc = Acc::new();
    let opts = ctx.quad();
    for (p, lv) in &ctx.states {
        let q = QuantumNumbers::new(lv.n, lv.l);
        let dp = derive_params(p, q);
        if dp.b < 0.0 {
            continue;
        }
        let alt = ctx.perturbed(p);
        let closed = momentum_integral(p, &dp, lv.energy, Method::Closed);
        let quad = momentum_integral_quadrature(&alt, &derive_params(&alt, q), lv.energy, &opts);
        match (closed, quad) {
            (Ok(c), Ok(n)) => acc.check(rel(n, c), 1e-8, || label(p, lv)),
            (Err(e), _) | (_, Err(e)) => acc.fail(label(p, lv), &e),
        }
    }
    acc
}

fn quantization(ctx: &Ctx) -> Acc {
    let mut acc = Acc::new();
    for (p, lv) in &ctx.states {
        match solve_quantization(&ctx.perturbed(p), QuantumNumbers::new(lv.n, lv.l)) {
            Ok(e) => acc.check(rel(e, lv.energy), 1e-10, || label(p, lv)),
            Err(e) => acc.fail(label(p, lv), &e),
        }
    }
    acc
}

/// Random 0 < rA < rB ≤ 100 and, for A5, (a, b) with a + b·r > 0 on [rA, rB].
pub fn appendix_sample(rng: &mut ChaCha8Rng) -> (f64, f64, (f64, f64)) {
    let (r_a, r_b) = loop {
        let u: f64 = rng.random_range(0.0..100.0);
        let v: f64 = rng.random_range(0.0..100.0);
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        if lo > 0.0 && hi > lo {
            break (lo, hi);
        }
    };
    let b: f64 = rng.random_range(-1.0..1.0);
    let a = rng.random_range(0.1..10.0) + (-b * r_b).max(0.0);
    (r_a, r_b, (a, b))
}

fn appendix(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Acc {
    let mut acc = Acc::new();
    let opts = ctx.quad();
    for id in AppendixId::ALL {
        for _ in 0..APPENDIX_PAIRS {
            let (r_a, r_b, extra) = appendix_sample(rng);
            let what = || format!("{id:?} rA={r_a} rB={r_b} a,b={extra:?}");
            let closed = appendix_integral(id, r_a, r_b, Some(extra));
            let quad = appendix_quadrature(id, r_a, r_b, Some(extra), &opts);
            match (closed, quad) {
                (Ok(c), Ok(n)) => acc.check(rel(n, c), 1e-8, what),
                (Err(e), _) | (_, Err(e)) => acc.fail(what(), &e),
            }
        }
    }
    // fixed anchors
    for (id, r_a, r_b, want) in [
        (AppendixId::A1, 1.0, 3.0, 2.0 * PI),
        (AppendixId::A2, 1.0, 4.0, PI / 2.0),
        (AppendixId::A3, 1.0, 3.0, PI),
    ] {
        match appendix_quadrature(id, r_a, r_b, None, &opts) {
            Ok(v) => acc.check(rel(v, want), 1e-8, || format!("{id:?} anchor")),
            Err(e) => acc.fail(format!("{id:?} anchor"), &e),
        }
    }
    acc
}

fn normalization(ctx: &Ctx) -> Acc {
    let mut acc = Acc::new();
    for (p, lv) in &ctx.states {
        let q = QuantumNumbers::new(lv.n, lv.l);
        match (normalization_closed(p, q), normalization_numeric(p, q)) {
            (Ok(c), Ok(n)) => acc.check(rel(c, n), 1e-8, || label(p, lv)),
            (Err(e), _) | (_, Err(e)) => acc.fail(label(p, lv), &e),
        }
    }
    let anchor = PhysicalParams::paper_units(0.2, 3);
    match normalization_closed(&anchor, QuantumNumbers::new(0, 0)) {
        Ok(v) => acc.check(rel(v, 12f64.sqrt()), 1e-12, || "sqrt(12) anchor".into()),
        Err(e) => acc.fail("sqrt(12) anchor".into(), &e),
    }
    acc
}

fn orthogonality(ctx: &Ctx) -> Acc {
    let mut acc = Acc::new();
    for (p, lv) in &ctx.states {
        for (p2, lv2) in &ctx.states {
            let same = p.alpha == p2.alpha && lv.dim == lv2.dim && lv.l == lv2.l;
            if !same || lv2.n <= lv.n {
                continue;
            }
            let what = || format!("<{}|{}>, {}", lv.n, lv2.n, label(p, lv));
            match overlap(p, QuantumNumbers::new(lv.n, lv.l), QuantumNumbers::new(lv2.n, lv2.l)) {
                Ok(v) => acc.check(v.abs(), 1e-6, what),
                Err(e) => acc.fail(what(), &e),
            }
        }
    }
    acc
}

fn degeneracy(ctx: &Ctx) -> Acc {
    let mut acc = Acc::new();
    for (p, lv) in &ctx.states {
        let q = QuantumNumbers::new(lv.n, lv.l);
        let Ok(partner) = degeneracy_partner(q, lv.dim, 1) else {
            continue;
        };
        let other = evaluate_level(&p.with_dim(partner.dim), partner.q);
        acc.check(rel(other.energy, lv.energy), f64::EPSILON, || label(p, lv));
    }
    acc
}

fn limits(ctx: &Ctx) -> Acc {
    let mut acc = Acc::new();
    let cfg = ctx.cfg;
    let base = cfg.params(1.0, cfg.dims[0]);
    let slope = base.z * base.e2 / 2.0;
    for &dim in &cfg.dims {
        for l in 0..=cfg.lmax.min(2) {
            for n in 0..=cfg.nmax.unwrap_or(0).min(2) {
                let q = QuantumNumbers::new(n, l);
                if !evaluate_level(&cfg.params(1e-1, dim), q).bound {
                    continue;
                }
                // E − E_C = αZe²/2 + O(α²): the slope error shrinks tenfold per decade
                let slope_err: Vec<f64> = [1e-1, 1e-2, 1e-3]
                    .iter()
                    .map(|&a| {
                        let p = cfg.params(a, dim);
                        let dev = evaluate_level(&p, q).energy - coulomb_limit(&p, q);
                        (dev / (a * slope) - 1.0).abs()
                    })
                    .collect();
                for w in slope_err.windows(2) {
                    let err = if w[1] == 0.0 && w[0] == 0.0 { 0.0 } else { (w[0] / w[1] - 10.0).abs() };
                    acc.check(err, 1.0, || format!("Coulomb slope, n={n} l={l} D={dim}"));
                }
                let pc = cfg.params(1.0, dim).with_c0(0.0);
                let ac = critical_alpha(&pc, q);
                let e = evaluate_level(&pc.with_alpha(ac), q).energy;
                acc.check(e.abs(), 1e-12, || format!("critical alpha, n={n} l={l} D={dim}"));
            }
        }
    }
    acc
}

fn run_suite(ctx: &Ctx, suite: Suite) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed ^ (suite as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let acc = match suite {
        Suite::Vieta => vieta(ctx),
        Suite::Riccati => riccati(ctx),
        Suite::Nodes => nodes(ctx),
        Suite::Jacobi => jacobi(&mut rng),
        Suite::QuantumCondition => quantum_condition(ctx),
        Suite::QuantumCorrection => quantum_correction_suite(ctx),
        Suite::MomentumIntegral => momentum_integral_suite(ctx),
        Suite::Quantization => quantization(ctx),
        Suite::Appendix => appendix(ctx, &mut rng),
        Suite::Normalization => normalization(ctx),
        Suite::Orthogonality => orthogonality(ctx),
        Suite::Degeneracy => degeneracy(ctx),
        Suite::Limits => limits(ctx),
    };
    acc.finish(suite)
}

/// Runs the configured suites; reports are in suite order.
pub fn run_suites(cfg: &RunConfig) -> Vec<SuiteReport> {
    let mut states = Vec::new();
    for &alpha in &cfg.alpha {
        for &dim in &cfg.dims {
            let p = cfg.params(alpha, dim);
            for l in 0..=cfg.lmax {
                for n in 0..=cfg.nmax.unwrap_or(0) {
                    let lv = evaluate_level(&p, QuantumNumbers::new(n, l));
                    if lv.bound {
                        states.push((p, lv));
                    }
                }
            }
        }
    }
    let ctx = Ctx { cfg, states };
    cfg.suites.par_iter().map(|&s| run_suite(&ctx, s)).collect()
}

pub fn cmd_verify(cfg: &RunConfig) -> (Table, bool) {
    let reports = run_suites(cfg);
    let mut t = Table::new(["suite", "passed", "checks", "failures", "max_error", "tolerance", "first_failure"]);
    for r in &reports {
        t.push(vec![
            r.suite.name().into(),
            r.passed.into(),
            r.checks.into(),
            r.failures.into(),
            r.max_error.into(),
            r.tolerance.into(),
            r.first_failure.clone().unwrap_or_default().into(),
        ]);
    }
    let all = reports.iter().all(|r| r.passed);
    t.extra.insert("passed".into(), Value::Bool(all));
    if cfg.perturb_c0 != 1.0 {
        t.warn(format!("c0 perturbed by a factor {} on one side of dual-route checks", cfg.perturb_c0));
    }
    for r in reports.iter().filter(|r| !r.passed) {
        t.warn(format!(
            "suite {} failed: {}",
            r.suite.name(),
            r.first_failure.as_deref().unwrap_or("")
        ));
    }
    (t, all)
}
