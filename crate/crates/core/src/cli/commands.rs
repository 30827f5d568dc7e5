//! The table-producing subcommands. Each returns a [`Table`] whose rows are
//! already in the deterministic (n, l, D, α) order.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde_json::Value;

use super::config::{CompareMode, RunConfig, MAX_STATES_PER_L};
use super::table::{Cell, Table};
use super::CliError;
use crate::model::{CentrifugalMode, QuantumNumbers, Validity};
use crate::oracle::{solve_level, OracleLevel, OracleOptions};
use crate::spectrum::{count_bound_states, degeneracy_partner, evaluate_level, EnergyLevel};
use crate::wavefn::{normalization_numeric, wavefunction};

/// (n, l, D, α) ordering used by every table.
fn tuple_order(a: (u32, u32, u32, f64), b: (u32, u32, u32, f64)) -> Ordering {
    (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)).then(a.3.total_cmp(&b.3))
}

fn validity_label(v: Validity) -> &'static str {
    match v {
        Validity::Within => "within",
        Validity::OutsideStatedValidity => "outside_stated_validity",
    }
}

/// Every (α, D, n, l) on the configured ranges whose closed-form level is
/// bound; the number of unbound tuples is returned alongside.
fn bound_tuples(cfg: &RunConfig) -> Result<(Vec<(f64, EnergyLevel)>, usize), CliError> {
    let mut out = Vec::new();
    let mut unbound = 0;
    for &alpha in &cfg.alpha {
        for &dim in &cfg.dims {
            let p = cfg.params(alpha, dim);
            for l in 0..=cfg.lmax {
                let count = match cfg.nmax {
                    Some(n) => u64::from(n) + 1,
                    None => count_bound_states(&p, l, dim),
                };
                if count > u64::from(MAX_STATES_PER_L) {
                    return Err(CliError::Usage(format!(
                        "{count} bound states for l = {l}, D = {dim}, alpha = {alpha}; pass --nmax to limit the range"
                    )));
                }
                for n in 0..count as u32 {
                    let level = evaluate_level(&p, QuantumNumbers::new(n, l));
                    if level.bound {
                        out.push((alpha, level));
                    } else {
                        unbound += 1;
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| tuple_order((a.1.n, a.1.l, a.1.dim, a.0), (b.1.n, b.1.l, b.1.dim, b.0)));
    Ok((out, unbound))
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new(["n", "l", "D", "alpha", "c0", "energy", "eps_tilde", "bound", "validity"]);
    let (levels, unbound) = bound_tuples(cfg)?;
    for (alpha, lv) in &levels {
        t.push(vec![
            lv.n.into(),
            lv.l.into(),
            lv.dim.into(),
            (*alpha).into(),
            cfg.c0.into(),
            lv.energy.into(),
            lv.eps_tilde.into(),
            lv.bound.into(),
            validity_label(lv.validity).into(),
        ]);
    }
    if levels.is_empty() {
        t.warn("no bound states for the requested parameters");
    } else if cfg.nmax.is_some() && unbound > 0 {
        t.notes.push(format!("{unbound} unbound (n, l, D, alpha) tuples omitted"));
    }
    if levels.iter().any(|(_, lv)| lv.validity != Validity::Within) {
        t.notes
            .push("D = 2, l = 0 rows lie outside the stated validity range (nu = 1/2)".into());
    }
    Ok(t)
}

pub fn cmd_wavefunction(cfg: &RunConfig) -> Result<Table, CliError> {
    let p = cfg.params(cfg.alpha[0], cfg.dims[0]);
    let q = QuantumNumbers::new(cfg.n, cfg.l);
    let wf = wavefunction(&p, q, true)?;
    let r_end = cfg
        .r_end
        .unwrap_or_else(|| (40.0 / (p.alpha * wf.eps_tilde)).max(10.0));
    let dr = r_end / cfg.points as f64;
    let mut t = Table::new(["r", "R", "R2"]);
    let mut trapezoid = 0.0;
    let mut prev = 0.0; // R(0) = 0
    for i in 1..=cfg.points {
        let r = dr * i as f64;
        let v = wf.value(r)?;
        trapezoid += 0.5 * dr * (prev * prev + v * v);
        prev = v;
        t.push(vec![r.into(), v.into(), (v * v).into()]);
    }
    let closed = wf.norm.unwrap_or(1.0);
    let mut norm = serde_json::Map::new();
    norm.insert("method".into(), Value::from("closed"));
    norm.insert("closed".into(), Value::from(closed));
    match normalization_numeric(&p, q) {
        Ok(numeric) => {
            let rel = (closed - numeric).abs() / numeric.abs();
            norm.insert("numeric".into(), Value::from(numeric));
            norm.insert("relative_difference".into(), Value::from(rel));
            t.notes.push(format!(
                "normalized with the closed-form constant {closed:.16e}; numeric quadrature gives {numeric:.16e} (relative difference {rel:.3e})"
            ));
        }
        Err(e) => t.warn(format!("numeric normalization check failed: {e}")),
    }
    norm.insert("sample_integral".into(), Value::from(trapezoid));
    t.extra.insert("normalization".into(), Value::Object(norm));
    t.extra.insert("energy".into(), Value::from(wf.energy));
    t.extra.insert("eps_tilde".into(), Value::from(wf.eps_tilde));
    Ok(t)
}

fn oracle_options(cfg: &RunConfig) -> OracleOptions {
    OracleOptions {
        points: cfg.grid_m,
        r_max: cfg.r_max,
        ..OracleOptions::default()
    }
}

struct CompareRow {
    alpha: f64,
    level: EnergyLevel,
    c0zero: f64,
    approx: Option<OracleLevel>,
    exact: Option<OracleLevel>,
}

pub fn cmd_compare(cfg: &RunConfig) -> Result<Table, CliError> {
    let (levels, unbound) = bound_tuples(cfg)?;
    let opts = oracle_options(cfg);
    let want = |m: CompareMode| cfg.modes.contains(&m);
    let rows = levels
        .par_iter()
        .map(|&(alpha, level)| -> Result<CompareRow, CliError> {
            let p = cfg.params(alpha, level.dim);
            let q = QuantumNumbers::new(level.n, level.l);
            let approx = if want(CompareMode::OracleApprox) {
                Some(solve_level(&p, q, CentrifugalMode::Approx, &opts)?)
            } else {
                None
            };
            let exact = if want(CompareMode::OracleExact) {
                Some(solve_level(&p, q, CentrifugalMode::Exact, &opts)?)
            } else {
                None
            };
            Ok(CompareRow {
                alpha,
                level,
                c0zero: evaluate_level(&p.with_c0(0.0), q).energy,
                approx,
                exact,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut columns: Vec<String> = ["n", "l", "D", "alpha"].iter().map(|s| s.to_string()).collect();
    for m in &cfg.modes {
        columns.push(m.name().into());
    }
    let have_exact = want(CompareMode::OracleExact);
    let closed: Vec<CompareMode> = [CompareMode::ClosedC0, CompareMode::ClosedC0zero]
        .into_iter()
        .filter(|m| want(*m))
        .collect();
    if have_exact {
        columns.push("oracle_exact_bound".into());
        for m in &closed {
            columns.push(format!("{}_abs_dev", m.name()));
            columns.push(format!("{}_rel_dev", m.name()));
        }
    }
    let both_closed = closed.len() == 2;
    if have_exact && both_closed {
        columns.push("improvement_ratio".into());
        columns.push("improved".into());
    }
    let approx_check = want(CompareMode::OracleApprox) && want(CompareMode::ClosedC0);
    if approx_check {
        columns.push("closed_c0_vs_oracle_approx_rel".into());
    }
    let mut t = Table::new(columns);

    let mut not_improved = 0;
    let mut exact_unbound = 0;
    for r in &rows {
        let lv = &r.level;
        let value = |m: CompareMode| match m {
            CompareMode::ClosedC0 => lv.energy,
            CompareMode::ClosedC0zero => r.c0zero,
            CompareMode::OracleApprox => r.approx.map_or(f64::NAN, |o| o.energy),
            CompareMode::OracleExact => r.exact.map_or(f64::NAN, |o| o.energy),
        };
        let mut row: Vec<Cell> = vec![lv.n.into(), lv.l.into(), lv.dim.into(), r.alpha.into()];
        for m in &cfg.modes {
            row.push(value(*m).into());
        }
        if let Some(ex) = r.exact {
            if !ex.bound {
                exact_unbound += 1;
            }
            row.push(ex.bound.into());
            for m in &closed {
                let dev = (value(*m) - ex.energy).abs();
                row.push(dev.into());
                row.push((dev / ex.energy.abs()).into());
            }
            if both_closed {
                let d_c0 = (lv.energy - ex.energy).abs();
                let d_zero = (r.c0zero - ex.energy).abs();
                let improved = d_c0 <= d_zero;
                if !improved {
                    not_improved += 1;
                }
                row.push((d_c0 / d_zero).into());
                row.push(improved.into());
            }
        }
        if approx_check {
            let o = value(CompareMode::OracleApprox);
            row.push(((lv.energy - o).abs() / o.abs()).into());
        }
        t.push(row);
    }
    if rows.is_empty() {
        t.warn("no bound states for the requested parameters");
    }
    if unbound > 0 {
        t.notes.push(format!("{unbound} unbound (n, l, D, alpha) tuples omitted"));
    }
    if exact_unbound > 0 {
        t.warn(format!(
            "{exact_unbound} rows have an exact-centrifugal oracle level at or above threshold"
        ));
    }
    if have_exact && both_closed {
        t.notes.push(format!(
            "c0 = {} closer to the exact-centrifugal oracle than c0 = 0 on {} of {} rows",
            cfg.c0,
            rows.len() - not_improved,
            rows.len()
        ));
    }
    Ok(t)
}

pub fn cmd_degeneracy(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new([
        "n",
        "l",
        "D",
        "partner_n",
        "partner_l",
        "partner_D",
        "alpha",
        "energy",
        "partner_energy",
        "difference",
    ]);
    let mut rows = Vec::new();
    let mut omitted = 0;
    let nmax = cfg.nmax.unwrap_or(0);
    for &alpha in &cfg.alpha {
        for &dim in &cfg.dims {
            for l in 0..=cfg.lmax {
                for n in 0..=nmax {
                    let q = QuantumNumbers::new(n, l);
                    let Ok(partner) = degeneracy_partner(q, dim, 1) else {
                        omitted += 1;
                        continue;
                    };
                    let lv = evaluate_level(&cfg.params(alpha, dim), q);
                    if !lv.bound {
                        continue;
                    }
                    let pl = evaluate_level(&cfg.params(alpha, partner.dim), partner.q);
                    rows.push((alpha, lv, pl));
                }
            }
        }
    }
    rows.sort_by(|a, b| tuple_order((a.1.n, a.1.l, a.1.dim, a.0), (b.1.n, b.1.l, b.1.dim, b.0)));
    for (alpha, lv, pl) in &rows {
        t.push(vec![
            lv.n.into(),
            lv.l.into(),
            lv.dim.into(),
            pl.n.into(),
            pl.l.into(),
            pl.dim.into(),
            (*alpha).into(),
            lv.energy.into(),
            pl.energy.into(),
            (lv.energy - pl.energy).into(),
        ]);
    }
    if omitted > 0 {
        t.notes.push(format!(
            "{omitted} tuples omitted: partner dimension D - 2 < 2"
        ));
    }
    if rows.is_empty() {
        t.warn("no bound states for the requested parameters");
    }
    Ok(t)
}
