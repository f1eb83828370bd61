//! Dense two-phase primal simplex for small standard-form programs
//!   min cᵀx  s.t.  A x = b,  x ≥ 0.
//! Used by the gauge column generation and by decomposition weight polishing,
//! where A has at most a few hundred rows and a few thousand columns.

use alloc::{vec, vec::Vec};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
    /// Total mass left on artificial variables; > 0 means the equality system
    /// could not be met exactly (callers decide how much slack is acceptable).
    pub residual: f64,
    /// Dual prices y with yᵀcolumns[j] ≤ cost[j] at optimality; used by
    /// column generation to price candidate atoms.
    pub duals: Vec<f64>,
}

/// Solve min cᵀx s.t. Σ_j x_j·columns[j] = rhs, x ≥ 0.
/// `columns[j]` has length `rhs.len()`.
pub fn solve_min_cost(columns: &[Vec<f64>], cost: &[f64], rhs: &[f64]) -> Result<LpSolution> {
    let m = rhs.len();
    let n = columns.len();
    assert_eq!(cost.len(), n);
    for col in columns {
        assert_eq!(col.len(), m);
    }
    if m == 0 {
        return Ok(LpSolution {
            value: 0.0,
            x: vec![0.0; n],
            residual: 0.0,
            duals: Vec::new(),
        });
    }
    let total = n + m; // original + artificial
    // Tableau rows: [A | I | b] with b ≥ 0 (rows sign-flipped as needed).
    let mut t = vec![0.0_f64; m * (total + 1)];
    for i in 0..m {
        let sign = if rhs[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i * (total + 1) + j] = sign * columns[j][i];
        }
        t[i * (total + 1) + n + i] = 1.0;
        t[i * (total + 1) + total] = sign * rhs[i];
    }
    let mut basis: Vec<usize> = (n..total).collect();

    // Phase 1: minimize the artificial sum.
    let mut phase1_cost = vec![0.0; total];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = 1.0;
    }
    run_simplex(&mut t, &mut basis, &phase1_cost, m, total, n + m)?;
    let mut residual = 0.0;
    for (i, &b) in basis.iter().enumerate() {
        if b >= n {
            residual += t[i * (total + 1) + total];
        }
    }
    // Drive remaining artificial basics out where a nonzero original entry
    // exists; rows that stay artificial are (near-)redundant equalities.
    for i in 0..m {
        if basis[i] >= n && t[i * (total + 1) + total].abs() <= 1e-9 {
            if let Some(j) = (0..n).find(|&j| t[i * (total + 1) + j].abs() > 1e-7) {
                pivot(&mut t, &mut basis, i, j, m, total);
            }
        }
    }

    // Phase 2: original costs; artificial columns are barred from entering
    // (allowed = n) and carry zero cost while parked at value ~0.
    let mut phase2_cost = vec![0.0; total];
    phase2_cost[..n].copy_from_slice(cost);
    run_simplex(&mut t, &mut basis, &phase2_cost, m, n, total)?;

    let mut x = vec![0.0; n];
    let mut value = 0.0;
    for (i, &b) in basis.iter().enumerate() {
        let v = t[i * (total + 1) + total];
        if b < n {
            x[b] = v.max(0.0);
            value += cost[b] * v;
        }
    }
    // Duals y = c_B B⁻¹: the artificial columns started as the identity, so
    // their final tableau entries hold B⁻¹; undo the row sign flips.
    let mut duals = vec![0.0; m];
    for i in 0..m {
        let mut y = 0.0;
        for (k, &b) in basis.iter().enumerate() {
            y += phase2_cost[b] * t[k * (total + 1) + n + i];
        }
        duals[i] = if rhs[i] < 0.0 { -y } else { y };
    }
    Ok(LpSolution {
        value,
        x,
        residual,
        duals,
    })
}

/// Primal simplex over columns 0..allowed (columns ≥ allowed never enter).
fn run_simplex(
    t: &mut [f64],
    basis: &mut [usize],
    cost: &[f64],
    m: usize,
    allowed: usize,
    total: usize,
) -> Result<()> {
    let width = total + 1;
    let max_iters = 200 * (m + total) + 2000;
    for iter in 0..max_iters {
        // Reduced costs r_j = c_j − c_Bᵀ B⁻¹ A_j, computed from the tableau.
        let mut entering = None;
        let mut best = -PIVOT_TOL;
        let bland = iter > max_iters / 2;
        for j in 0..allowed {
            if basis.contains(&j) {
                continue;
            }
            let mut r = cost[j];
            for i in 0..m {
                r -= cost[basis[i]] * t[i * width + j];
            }
            if r < best {
                if bland {
                    entering = Some(j);
                    break;
                }
                best = r;
                entering = Some(j);
            }
        }
        let Some(j) = entering else {
            return Ok(());
        };
        // Ratio test, smallest basis index on ties (anti-cycling).
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..m {
            let a = t[i * width + j];
            if a > PIVOT_TOL {
                let ratio = t[i * width + total] / a;
                if ratio < best_ratio - 1e-12
                    || (ratio < best_ratio + 1e-12
                        && leave.map_or(true, |l| basis[i] < basis[l]))
                {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(i) = leave else {
            return Err(Error::NonConvergence("LP is unbounded".into()));
        };
        pivot(t, basis, i, j, m, total);
    }
    Err(Error::NonConvergence("simplex iteration cap reached".into()))
}

fn pivot(t: &mut [f64], basis: &mut [usize], row: usize, col: usize, m: usize, total: usize) {
    let width = total + 1;
    let p = t[row * width + col];
    for v in t[row * width..(row + 1) * width].iter_mut() {
        *v /= p;
    }
    for i in 0..m {
        if i == row {
            continue;
        }
        let f = t[i * width + col];
        if f == 0.0 {
            continue;
        }
        for j in 0..width {
            t[i * width + j] -= f * t[row * width + j];
        }
        t[i * width + col] = 0.0;
    }
    basis[row] = col;
}
