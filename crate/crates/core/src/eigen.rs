//! Eigenvalues of diagonally symmetrizable real tridiagonal matrices.
//!
//! A tridiagonal matrix with `sub[k]·sup[k] ≥ 0` (and both zero together) is
//! similar, via a positive diagonal scaling, to the symmetric tridiagonal
//! matrix with off-diagonal `√(sub[k]·sup[k])`. The symmetric form is split at
//! zero off-diagonals and every eigenvalue is located by bisection on the
//! Sturm count, starting from Gershgorin brackets.

use serde::{Deserialize, Serialize};

use crate::blocks::DiracBlock;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetrizedTridiagonal {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    /// Start indices of the irreducible sub-blocks (always begins with 0).
    pub block_starts: Vec<usize>,
}

/// Scale-aware absolute tolerance `1e-12·(1 + max|entry|)`.
pub fn default_tol(max_abs: f64) -> f64 {
    1e-12 * (1.0 + max_abs)
}

pub fn symmetrize(block: &DiracBlock) -> Result<SymmetrizedTridiagonal> {
    let mut offdiag = Vec::with_capacity(block.sub.len());
    let mut block_starts = vec![0];
    for (k, (&lo, &up)) in block.sub.iter().zip(&block.sup).enumerate() {
        let product = lo * up;
        if product < 0.0 || ((lo == 0.0) != (up == 0.0)) {
            return Err(Error::NotSymmetrizable {
                n: block.level,
                tag: block.tag,
                k,
                sub: lo,
                sup: up,
            });
        }
        if product == 0.0 {
            block_starts.push(k + 1);
        }
        offdiag.push(product.sqrt());
    }
    Ok(SymmetrizedTridiagonal {
        diag: block.diag.clone(),
        offdiag,
        block_starts,
    })
}

impl SymmetrizedTridiagonal {
    pub fn from_symmetric(diag: Vec<f64>, offdiag: Vec<f64>) -> Self {
        assert_eq!(diag.len(), offdiag.len() + 1);
        let mut block_starts = vec![0];
        block_starts.extend(
            offdiag
                .iter()
                .enumerate()
                .filter(|(_, e)| **e == 0.0)
                .map(|(k, _)| k + 1),
        );
        SymmetrizedTridiagonal {
            diag,
            offdiag,
            block_starts,
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn max_abs(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.offdiag)
            .fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        sturm_count(&self.diag, &self.offdiag, x)
    }

    /// Union of the Gershgorin intervals.
    pub fn gershgorin_interval(&self) -> (f64, f64) {
        gershgorin_interval(&self.diag, &self.offdiag)
    }

    /// All eigenvalues in ascending order, each within `tol` of the true value.
    pub fn eigenvalues(&self, tol: f64) -> Vec<f64> {
        assert!(tol > 0.0, "tolerance must be positive");
        let mut out = Vec::with_capacity(self.dim());
        let mut ends: Vec<usize> = self.block_starts[1..].to_vec();
        ends.push(self.dim());
        for (&start, &end) in self.block_starts.iter().zip(&ends) {
            let d = &self.diag[start..end];
            let e = &self.offdiag[start..end - 1];
            bisect_all(d, e, tol, &mut out);
        }
        out.sort_by(f64::total_cmp);
        out
    }
}

fn gershgorin_interval(d: &[f64], e: &[f64]) -> (f64, f64) {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - left - right);
        hi = hi.max(d[i] + left + right);
    }
    (lo, hi)
}

fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let emax = e.iter().fold(1.0_f64, |m, v| m.max(v * v));
    let pivmin = f64::MIN_POSITIVE * emax;
    let mut count = 0;
    let mut q = d[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        q = d[i] - x - e[i - 1] * e[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect_all(d: &[f64], e: &[f64], tol: f64, out: &mut Vec<f64>) {
    let n = d.len();
    if n == 1 {
        out.push(d[0]);
        return;
    }
    let (glo, ghi) = gershgorin_interval(d, e);
    let pad = tol + f64::EPSILON * glo.abs().max(ghi.abs());
    let (glo, ghi) = (glo - pad, ghi + pad);
    // Bracket (lo, hi) for eigenvalue index j: count(lo) <= j < count(hi).
    for j in 0..n {
        let mut lo = glo;
        let mut hi = ghi;
        // Cap iterations; the interval halves every step.
        for _ in 0..200 {
            let width_floor = 2.0 * f64::EPSILON * lo.abs().max(hi.abs());
            if hi - lo <= tol.max(width_floor) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if sturm_count(d, e, mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
}

/// Eigenvalues of a block in ascending order.
pub fn block_eigenvalues(block: &DiracBlock, tol: f64) -> Result<Vec<f64>> {
    Ok(symmetrize(block)?.eigenvalues(tol))
}

/// Eigenvalues with the default tolerance.
pub fn block_eigenvalues_default(block: &DiracBlock) -> Result<Vec<f64>> {
    block_eigenvalues(block, default_tol(block.max_abs()))
}

pub fn min_abs_eigenvalue(block: &DiracBlock, tol: f64) -> Result<f64> {
    Ok(block_eigenvalues(block, tol)?
        .into_iter()
        .map(f64::abs)
        .fold(f64::INFINITY, f64::min))
}
