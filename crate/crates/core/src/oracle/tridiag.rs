//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection, and
//! eigenvectors by inverse iteration.

use crate::error::{Error, Result};

const PIVOT_GUARD: f64 = 1e-300;

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(diag: &[f64], offdiag: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q: f64 = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        let e2 = if i == 0 { 0.0 } else { offdiag[i - 1] * offdiag[i - 1] };
        let prev = if q.abs() < PIVOT_GUARD {
            PIVOT_GUARD.copysign(q)
        } else {
            q
        };
        q = (d - x) - if i == 0 { 0.0 } else { e2 / prev };
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the whole spectrum.
pub fn gershgorin_bounds(diag: &[f64], offdiag: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { offdiag[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { offdiag[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

/// The `k`-th smallest eigenvalue (0-based) by bisection on the Sturm count.
pub fn kth_eigenvalue(diag: &[f64], offdiag: &[f64], k: usize) -> Result<f64> {
    let n = diag.len();
    if k >= n {
        return Err(Error::OutOfRange(format!("eigenvalue index {k} >= dimension {n}")));
    }
    let (glo, ghi) = gershgorin_bounds(diag, offdiag);
    let pad = 1e-12 * (glo.abs().max(ghi.abs()) + 1.0);
    let (mut lo, mut hi) = (glo - pad, ghi + pad);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if sturm_count(diag, offdiag, mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::ConvergenceFailure(format!(
        "bisection for eigenvalue {k} did not collapse: [{lo}, {hi}]"
    )))
}

/// The `count` smallest eigenvalues in ascending order.
pub fn smallest_eigenvalues(diag: &[f64], offdiag: &[f64], count: usize) -> Result<Vec<f64>> {
    if count > diag.len() {
        return Err(Error::OutOfRange(format!(
            "requested {count} eigenvalues of a {}x{} matrix",
            diag.len(),
            diag.len()
        )));
    }
    (0..count).map(|k| kth_eigenvalue(diag, offdiag, k)).collect()
}

/// Eigenvector for an (already converged) eigenvalue, normalized to unit
/// maximum amplitude with a positive first lobe.
pub fn eigenvector(diag: &[f64], offdiag: &[f64], eigenvalue: f64) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = diag.iter().fold(0.0f64, |m, d| m.max(d.abs())) + 1.0;
    // nudge off the exact eigenvalue so the shifted system is solvable
    let shift = eigenvalue + 1e-13 * scale;
    let mut v = vec![1.0; n];
    let mut c = vec![0.0; n];
    let mut dprime = vec![0.0; n];
    for _ in 0..3 {
        // Thomas algorithm on (T − shift·I) x = v
        let guard = |x: f64| if x.abs() < PIVOT_GUARD { PIVOT_GUARD } else { x };
        dprime[0] = guard(diag[0] - shift);
        let mut rhs = v.clone();
        for i in 1..n {
            c[i - 1] = offdiag[i - 1] / dprime[i - 1];
            dprime[i] = guard(diag[i] - shift - c[i - 1] * offdiag[i - 1]);
            rhs[i] -= c[i - 1] * rhs[i - 1];
        }
        rhs[n - 1] /= dprime[n - 1];
        for i in (0..n - 1).rev() {
            rhs[i] = (rhs[i] - offdiag[i] * rhs[i + 1]) / dprime[i];
        }
        let norm = rhs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::ConvergenceFailure("inverse iteration broke down".into()));
        }
        v = rhs.into_iter().map(|x| x / norm).collect();
    }
    let first = v.iter().copied().find(|x| x.abs() > 1e-6).unwrap_or(1.0);
    if first < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(v)
}

/// Sign changes of a sampled function, ignoring entries below
/// `floor · max|v|` (numerical noise in decaying tails).
pub fn sign_changes(v: &[f64], floor: f64) -> usize {
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let cut = floor * peak;
    let mut last = 0.0f64;
    let mut changes = 0;
    for &x in v {
        if x.abs() <= cut {
            continue;
        }
        if last != 0.0 && x.signum() != last.signum() {
            changes += 1;
        }
        last = x;
    }
    changes
}
