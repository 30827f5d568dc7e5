//! Independent numerical ground truth.
//!
//! The radial equation `−(ħ²/2μ)R″ + V_eff R = E R` with Dirichlet ends at
//! `r = 0` and `r = r_max` is discretized by the three-point second
//! difference on a uniform grid, giving a symmetric tridiagonal matrix whose
//! eigenvalues are extracted by Sturm bisection. Two grids (h, h/2) are
//! combined by Richardson extrapolation.

pub mod quad;
pub mod tridiag;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{asymptote, derive_params, effective_v_derived, CentrifugalMode, PhysicalParams, QuantumNumbers};
use crate::spectrum::epsilon_tilde;

pub use quad::{adaptive_quad, integrate, integrate_between_turning_points, QuadOptions, QuadResult};

pub const DEFAULT_POINTS: usize = 20_000;
pub const MIN_POINTS: usize = 100;
const MIN_R_MAX: f64 = 60.0;
const TAIL_DECAY_LENGTHS: f64 = 40.0;
/// Lower clamp for the decay-exponent estimate used to size the box.
const MIN_EPS_ESTIMATE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub r_max: f64,
    /// interior points
    pub m: usize,
    pub h: f64,
}

impl Grid {
    pub fn new(r_max: f64, m: usize) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::InvalidParameter {
                name: "r_max",
                reason: format!("must be finite and > 0, got {r_max}"),
            });
        }
        if m < MIN_POINTS {
            return Err(Error::InvalidParameter {
                name: "grid points",
                reason: format!("need at least {MIN_POINTS}, got {m}"),
            });
        }
        Ok(Self {
            r_max,
            m,
            h: r_max / (m as f64 + 1.0),
        })
    }

    /// r_i = i·h for i = 1..=m
    pub fn point(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.h
    }

    /// Same box with spacing h/2.
    pub fn halved(&self) -> Self {
        Self {
            r_max: self.r_max,
            m: 2 * self.m + 1,
            h: self.h / 2.0,
        }
    }

    pub fn doubled_box(&self) -> Self {
        Self {
            r_max: 2.0 * self.r_max,
            m: 2 * self.m + 1,
            h: self.h,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagHamiltonian {
    pub grid: Grid,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub mode: CentrifugalMode,
    /// V_eff(∞) for this mode; eigenvalues below it are bound.
    pub threshold: f64,
}

pub fn assemble(p: &PhysicalParams, q: QuantumNumbers, grid: &Grid, mode: CentrifugalMode) -> Result<TridiagHamiltonian> {
    p.validate()?;
    let dp = derive_params(p, q);
    let kin = p.kinetic_scale() / (grid.h * grid.h);
    let diag = (0..grid.m)
        .map(|i| effective_v_derived(p, &dp, grid.point(i), mode).map(|v| 2.0 * kin + v))
        .collect::<Result<Vec<_>>>()?;
    Ok(TridiagHamiltonian {
        grid: *grid,
        diag,
        offdiag: vec![-kin; grid.m - 1],
        mode,
        threshold: asymptote(p, &dp, mode),
    })
}

pub fn lowest_eigenvalues(h: &TridiagHamiltonian, count: usize) -> Result<Vec<f64>> {
    tridiag::smallest_eigenvalues(&h.diag, &h.offdiag, count)
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub points: usize,
    /// Overrides the automatic box size.
    pub r_max: Option<f64>,
    pub richardson: bool,
    /// Box doubling kicks in when |R(r_max)|/max|R| exceeds this.
    pub tail_tol: f64,
    pub max_doublings: u32,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            points: DEFAULT_POINTS,
            r_max: None,
            richardson: true,
            tail_tol: 1e-8,
            max_doublings: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleLevel {
    pub n: u32,
    pub l: u32,
    pub dim: u32,
    pub mode: CentrifugalMode,
    /// Richardson-extrapolated value when enabled, else the fine-grid value.
    pub energy: f64,
    pub coarse: f64,
    pub fine: f64,
    /// below the potential's large-r limit
    pub bound: bool,
    pub nodes: usize,
    pub r_max: f64,
    pub points: usize,
}

/// Box size: `max(60, 40/(α ε̃))` with ε̃ from the closed form.
pub fn default_r_max(p: &PhysicalParams, q: QuantumNumbers) -> f64 {
    let eps = epsilon_tilde(p, q).max(MIN_EPS_ESTIMATE);
    MIN_R_MAX.max(TAIL_DECAY_LENGTHS / (p.alpha * eps))
}

/// The `q.n`-th eigenvalue (0-based) of the discretized radial Hamiltonian
/// for angular number `q.l`, whether or not it lies below the threshold.
pub fn solve_level(p: &PhysicalParams, q: QuantumNumbers, mode: CentrifugalMode, opts: &OracleOptions) -> Result<OracleLevel> {
    let r_max = opts.r_max.unwrap_or_else(|| default_r_max(p, q));
    let mut grid = Grid::new(r_max, opts.points)?;
    let k = q.n as usize;
    let mut doublings = 0;
    let (ham, coarse, nodes) = loop {
        let ham = assemble(p, q, &grid, mode)?;
        let e = tridiag::kth_eigenvalue(&ham.diag, &ham.offdiag, k)?;
        let v = tridiag::eigenvector(&ham.diag, &ham.offdiag, e)?;
        let nodes = tridiag::sign_changes(&v, 1e-9);
        let tail = v.last().map_or(0.0, |x| x.abs());
        let bound = e < ham.threshold;
        if bound && tail > opts.tail_tol && doublings < opts.max_doublings && opts.r_max.is_none() {
            grid = grid.doubled_box();
            doublings += 1;
            continue;
        }
        break (ham, e, nodes);
    };
    let (fine, energy) = if opts.richardson {
        let fine_ham = assemble(p, q, &grid.halved(), mode)?;
        let fine = tridiag::kth_eigenvalue(&fine_ham.diag, &fine_ham.offdiag, k)?;
        (fine, (4.0 * fine - coarse) / 3.0)
    } else {
        (coarse, coarse)
    };
    Ok(OracleLevel {
        n: q.n,
        l: q.l,
        dim: p.dim,
        mode,
        energy,
        coarse,
        fine,
        bound: energy < ham.threshold && coarse < ham.threshold,
        nodes,
        r_max: grid.r_max,
        points: grid.m,
    })
}

/// Levels n = 0..count for angular number `l`; `NoBoundState` if any of
/// them is not below the threshold.
pub fn solve_bound_states(
    p: &PhysicalParams,
    l: u32,
    mode: CentrifugalMode,
    count: usize,
    opts: &OracleOptions,
) -> Result<Vec<OracleLevel>> {
    let levels = (0..count as u32)
        .into_par_iter()
        .map(|n| solve_level(p, QuantumNumbers::new(n, l), mode, opts))
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = levels.iter().position(|lv| !lv.bound) {
        return Err(Error::NoBoundState { index: bad });
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::evaluate_level;

    #[test]
    fn grid_geometry() {
        let g = Grid::new(20.0, 199).unwrap();
        assert!((g.h - 0.1).abs() < 1e-15);
        assert!((g.point(0) - 0.1).abs() < 1e-15);
        assert!((g.point(198) - 19.9).abs() < 1e-12);
        let f = g.halved();
        assert!((f.h - 0.05).abs() < 1e-15);
        assert_eq!(f.r_max, 20.0);
        assert!(Grid::new(10.0, 10).is_err());
        assert!(Grid::new(-1.0, 1000).is_err());
    }

    #[test]
    fn assembled_matrix_structure() {
        let p = PhysicalParams::paper_units(0.1, 3);
        let q = QuantumNumbers::new(0, 1);
        let g = Grid::new(50.0, 200).unwrap();
        let ex = assemble(&p, q, &g, CentrifugalMode::Exact).unwrap();
        let ap = assemble(&p, q, &g, CentrifugalMode::Approx).unwrap();
        assert_eq!(ex.offdiag, ap.offdiag);
        assert!(ex.offdiag.iter().all(|&e| e == ex.offdiag[0]));
        let dp = derive_params(&p, q);
        for i in [0, 10, 150] {
            let r = g.point(i);
            let want = dp.l2 * (1.0 / (r * r) - crate::model::centrifugal_approx(p.alpha, p.c0, r).unwrap());
            assert!((ex.diag[i] - ap.diag[i] - want).abs() < 1e-10 * (1.0 + want.abs()));
        }
        assert_eq!(ex.threshold, 0.0);
        assert!((ap.threshold - dp.b * p.c0).abs() < 1e-18);
    }

    #[test]
    fn particle_in_box_second_order() {
        // V ≈ 0: tiny coupling and huge screening kill the well
        let p = PhysicalParams {
            alpha: 50.0,
            z: 1e-12,
            ..PhysicalParams::paper_units(1.0, 3)
        };
        let q = QuantumNumbers::new(0, 0);
        let r_max = 1.0;
        let exact = p.kinetic_scale() * (std::f64::consts::PI / r_max).powi(2);
        let errs: Vec<f64> = [200usize, 401, 803]
            .iter()
            .map(|&m| {
                let h = assemble(&p, q, &Grid::new(r_max, m).unwrap(), CentrifugalMode::Exact).unwrap();
                lowest_eigenvalues(&h, 1).unwrap()[0] - exact
            })
            .collect();
        let r1 = errs[0] / errs[1];
        let r2 = errs[1] / errs[2];
        assert!((r1 - 4.0).abs() < 0.05 && (r2 - 4.0).abs() < 0.05, "{r1} {r2}");
    }

    #[test]
    fn s_wave_ground_state_matches_closed_form() {
        let p = PhysicalParams::paper_units(0.2, 3);
        let lv = solve_level(&p, QuantumNumbers::new(0, 0), CentrifugalMode::Approx, &OracleOptions::default()).unwrap();
        assert!((lv.energy + 0.16).abs() < 1e-6, "{}", lv.energy);
        assert!(lv.bound);
        assert_eq!(lv.nodes, 0);
    }

    #[test]
    fn p_wave_approx_matches_closed_form() {
        let p = PhysicalParams::paper_units(0.1, 3);
        let q = QuantumNumbers::new(0, 1);
        let lv = solve_level(&p, q, CentrifugalMode::Approx, &OracleOptions::default()).unwrap();
        let e = evaluate_level(&p, q).energy;
        assert!(((lv.energy - e) / e).abs() < 1e-5);
        // raw fine-grid value carries the O(h²) error, extrapolation removes most of it
        assert!((lv.energy - e).abs() < (lv.fine - e).abs());
    }

    #[test]
    fn near_coulomb_ground_state() {
        let p = PhysicalParams::paper_units(1e-3, 3);
        let lv = solve_level(&p, QuantumNumbers::new(0, 0), CentrifugalMode::Exact, &OracleOptions::default()).unwrap();
        assert!((lv.energy + 0.25).abs() < 1e-3);
    }

    #[test]
    fn bound_state_list_and_nodes() {
        let p = PhysicalParams::paper_units(0.05, 3);
        let levels = solve_bound_states(&p, 0, CentrifugalMode::Approx, 3, &OracleOptions::default()).unwrap();
        for (n, lv) in levels.iter().enumerate() {
            assert_eq!(lv.nodes, n);
            let e = evaluate_level(&p, QuantumNumbers::new(n as u32, 0)).energy;
            assert!(((lv.energy - e) / e).abs() < 1e-4);
        }
        // α = 0.05, l = 0 binds 4 levels; the fifth is a box state
        let err = solve_bound_states(&p, 0, CentrifugalMode::Approx, 5, &OracleOptions::default());
        assert!(matches!(err, Err(Error::NoBoundState { index: 4 })));
    }
}
