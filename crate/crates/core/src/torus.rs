//! Maximization of quadratic and bilinear forms over the unit torus
//! T^n = { u : |u_i| = 1 }. These maxima (the B norm and the squared F norm)
//! are NP-hard in general, so each routine returns a certified bracket:
//! the lower end is attained by an explicit torus witness, the upper end is
//! an SDP relaxation value.

use alloc::{vec, vec::Vec};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::hermitian_eig_tol;
use crate::mat::{Complex, DenseMatrix};
use crate::sdp::{solve_diag_dominance, solve_two_sided_scaling, ScalingMode};
use crate::Tolerances;

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// Iteration/search budget for every heuristic in the crate.
#[derive(Clone, Debug)]
pub struct Budget {
    /// Number of random restarts for phase fixed-point iterations.
    pub multistarts: usize,
    /// Iteration cap per restart.
    pub max_iters: usize,
    /// Relative gain below which a fixed-point run stops.
    pub gain_tol: f64,
    /// Exhaustive phase grids run when the number of free phases is at most
    /// this; set to 0 to disable grids entirely.
    pub grid_limit: usize,
    /// Grid resolution per phase.
    pub grid_points: usize,
    /// Master seed for restart streams.
    pub seed: u64,
    /// Frank-Wolfe iteration cap (elliptope decompositions).
    pub fw_max_iters: usize,
    /// Golden-section probes per Frank-Wolfe line search.
    pub fw_line_probes: usize,
    /// Atom-pool cap factor for column generation: pool ≤ factor·(m+n).
    pub pool_factor: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            multistarts: 32,
            max_iters: 10_000,
            gain_tol: 1e-12,
            grid_limit: 4,
            grid_points: 72,
            seed: 0,
            fw_max_iters: 2_000,
            fw_line_probes: 40,
            pool_factor: 64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketStatus {
    /// Lower end confirmed by an exhaustive phase grid (up to grid spacing).
    Certified,
    /// Lower end from multistart local search only.
    Heuristic,
    /// An iteration cap was hit before the stopping rule fired.
    BudgetExhausted,
    /// The bracket violates a proven relation (e.g. upper/lower > 4/π for a
    /// PSD quadratic form); reported, never silently repaired.
    Inconsistent,
}

/// Certified two-sided estimate lower ≤ value ≤ upper.
#[derive(Clone, Copy, Debug)]
pub struct NormBracket {
    pub lower: f64,
    pub upper: f64,
    pub status: BracketStatus,
}

impl NormBracket {
    pub fn exact(v: f64) -> Self {
        NormBracket {
            lower: v,
            upper: v,
            status: BracketStatus::Certified,
        }
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lower - tol && v <= self.upper + tol
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// A point of the unit torus, stored as phases with the first fixed to 0
/// (the objective values are invariant under a global phase).
#[derive(Clone, Debug, PartialEq)]
pub struct TorusVector {
    phases: Vec<f64>,
}

fn wrap(theta: f64) -> f64 {
    let mut t = theta % TWO_PI;
    if t < 0.0 {
        t += TWO_PI;
    }
    // -0.0 and values rounding to 2π both normalize to 0.
    if t >= TWO_PI {
        t = 0.0;
    }
    t
}

/// z/|z|, defined as 1 at z = 0.
pub fn phase(z: Complex) -> Complex {
    let r = z.norm();
    if r == 0.0 {
        Complex::new(1.0, 0.0)
    } else {
        z / r
    }
}

impl TorusVector {
    pub fn from_phases(phases: &[f64]) -> Self {
        assert!(!phases.is_empty());
        let base = phases[0];
        TorusVector {
            phases: phases.iter().map(|&p| wrap(p - base)).collect(),
        }
    }

    /// Phases of the entries, normalized so the first coordinate is 1.
    pub fn from_complex(u: &[Complex]) -> Self {
        assert!(!u.is_empty());
        let base = u[0].arg();
        TorusVector {
            phases: u.iter().map(|z| wrap(z.arg() - base)).collect(),
        }
    }

    pub fn ones(n: usize) -> Self {
        TorusVector {
            phases: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn to_complex(&self) -> Vec<Complex> {
        self.phases
            .iter()
            .map(|&t| Complex64::new(t.cos(), t.sin()))
            .collect()
    }

    /// max_i distance between coordinates on the circle.
    pub fn distance(&self, other: &TorusVector) -> f64 {
        self.phases
            .iter()
            .zip(&other.phases)
            .map(|(&a, &b)| {
                let d = (a - b).abs() % TWO_PI;
                d.min(TWO_PI - d)
            })
            .fold(0.0, f64::max)
    }
}

/// Result of a torus maximization: the bracket plus the maximizing point(s).
#[derive(Clone, Debug)]
pub struct QuadraticMax {
    pub bracket: NormBracket,
    pub witness: TorusVector,
}

#[derive(Clone, Debug)]
pub struct BilinearMax {
    pub bracket: NormBracket,
    pub left: TorusVector,
    pub right: TorusVector,
}

fn quad_value(h: &DenseMatrix, u: &[Complex]) -> f64 {
    let hu = h.mul_vec(u);
    u.iter().zip(&hu).map(|(ui, hui)| (ui.conj() * hui).re).sum()
}

/// max { u*Hu : u ∈ T^n } for Hermitian H, as a certified bracket.
///
/// The iteration u ← phase(Hu) is run on the PSD shift H + cI
/// (c = max(0, -λ_min)), where each step is monotone; the shift adds the
/// constant c·n on the torus. The upper end is ‖H + cI‖_cbB - c·n. For PSD
/// input the bracket must satisfy upper ≤ (4/π)·lower; a violation is
/// reported as `Inconsistent`.
pub fn max_quadratic_torus(
    h: &DenseMatrix,
    budget: &Budget,
    tol: &Tolerances,
) -> Result<QuadraticMax> {
    if !h.is_square() {
        return Err(Error::Dimension("quadratic form needs a square matrix".into()));
    }
    let n = h.rows();
    let scale = h.hs_norm();
    if scale == 0.0 {
        return Ok(QuadraticMax {
            bracket: NormBracket::exact(0.0),
            witness: TorusVector::ones(n),
        });
    }
    if h.asymmetry() > tol.hermitian_reject * (1.0 + scale) {
        return Err(Error::Domain("quadratic form needs a Hermitian matrix".into()));
    }
    let hsym = h.symmetrize();
    let eig = hermitian_eig_tol(&hsym, tol)?;
    let lmin = eig.values[0];
    let shift = (-lmin).max(0.0);
    let was_psd = lmin >= -tol.psd_reject * (1.0 + scale);
    let mut hp = hsym.clone();
    if shift > 0.0 {
        for i in 0..n {
            hp[(i, i)] += Complex::new(shift, 0.0);
        }
    }

    let mut best_val = f64::NEG_INFINITY;
    let mut best_u: Vec<Complex> = vec![Complex::new(1.0, 0.0); n];
    let mut exhausted = false;

    // Multistart phase fixed point.
    for s in 0..budget.multistarts.max(1) {
        let mut u: Vec<Complex> = if s == 0 {
            vec![Complex::new(1.0, 0.0); n]
        } else {
            let mut rng = crate::rng::SplitMix64::substream(budget.seed, s as u64);
            (0..n)
                .map(|_| {
                    let t = rng.angle();
                    Complex::new(t.cos(), t.sin())
                })
                .collect()
        };
        let mut val = quad_value(&hp, &u);
        let mut converged = false;
        for _ in 0..budget.max_iters {
            let hu = hp.mul_vec(&u);
            let next: Vec<Complex> = hu.iter().map(|&z| phase(z)).collect();
            let nval = quad_value(&hp, &next);
            debug_assert!(nval >= val - 1e-9 * (1.0 + val.abs()));
            if nval - val <= budget.gain_tol * (1.0 + val.abs()) {
                u = next;
                val = nval;
                converged = true;
                break;
            }
            u = next;
            val = nval;
        }
        if !converged {
            exhausted = true;
        }
        if val > best_val {
            best_val = val;
            best_u = u;
        }
    }

    // Exhaustive phase grid when small enough, then polish the winner.
    let mut certified = false;
    let free = n.saturating_sub(1);
    if free >= 1 && free <= budget.grid_limit && budget.grid_points >= 2 {
        let (gval, gu) = quad_grid(&hp, free, budget.grid_points);
        let (pval, pu) = polish_quadratic(&hp, gu, budget);
        if pval > best_val {
            best_val = pval;
            best_u = pu;
        } else if gval > best_val {
            best_val = gval;
        }
        certified = true;
    }

    let lower = best_val - shift * n as f64;
    let sdp = solve_diag_dominance(&hp, tol)?;
    let upper = (sdp.primal_value - shift * n as f64).max(lower);

    let mut status = if certified {
        BracketStatus::Certified
    } else if exhausted {
        BracketStatus::BudgetExhausted
    } else {
        BracketStatus::Heuristic
    };
    if was_psd && shift == 0.0 && certified {
        // For PSD forms the relaxation is provably within 4/π of the true
        // maximum, so a certified lower end further away signals a bug.
        let ratio_cap = 4.0 / core::f64::consts::PI + 1e-6;
        if upper > ratio_cap * lower.max(0.0) + 1e-9 * scale {
            status = BracketStatus::Inconsistent;
        }
    }
    Ok(QuadraticMax {
        bracket: NormBracket {
            lower,
            upper,
            status,
        },
        witness: TorusVector::from_complex(&best_u),
    })
}

fn polish_quadratic(
    hp: &DenseMatrix,
    start: Vec<Complex>,
    budget: &Budget,
) -> (f64, Vec<Complex>) {
    let mut u = start;
    let mut val = quad_value(hp, &u);
    for _ in 0..budget.max_iters {
        let hu = hp.mul_vec(&u);
        let next: Vec<Complex> = hu.iter().map(|&z| phase(z)).collect();
        let nval = quad_value(hp, &next);
        if nval - val <= budget.gain_tol * (1.0 + val.abs()) {
            return (nval.max(val), next);
        }
        u = next;
        val = nval;
    }
    (val, u)
}

/// Exhaustive grid over the free phases 1..n with incremental evaluation of
/// u*Hu (w = Hu is maintained; updating one coordinate costs O(n)).
fn quad_grid(hp: &DenseMatrix, free: usize, points: usize) -> (f64, Vec<Complex>) {
    let n = hp.rows();
    let step = TWO_PI / points as f64;
    let circle: Vec<Complex> = (0..points)
        .map(|k| {
            let t = step * k as f64;
            Complex::new(t.cos(), t.sin())
        })
        .collect();
    let mut idx = vec![0usize; free];
    let mut u: Vec<Complex> = vec![Complex::new(1.0, 0.0); n];
    let mut w = hp.mul_vec(&u);
    let mut val: f64 = u.iter().zip(&w).map(|(ui, wi)| (ui.conj() * wi).re).sum();
    let mut best_val = val;
    let mut best_u = u.clone();
    loop {
        // Odometer increment over idx; apply each coordinate change to (u, w, val).
        let mut pos = free;
        loop {
            if pos == 0 {
                return (best_val, best_u);
            }
            pos -= 1;
            let coord = pos + 1; // phase 0 is pinned
            let old = u[coord];
            idx[pos] += 1;
            let rolled = idx[pos] == points;
            if rolled {
                idx[pos] = 0;
            }
            let new = circle[idx[pos]];
            let delta = new - old;
            // val(u + δ e_k) = val + 2 Re(δ̄ w_k) + |δ|² H_kk
            val += 2.0 * (delta.conj() * w[coord]).re
                + delta.norm_sqr() * hp[(coord, coord)].re;
            for p in 0..n {
                w[p] += hp[(p, coord)] * delta;
            }
            u[coord] = new;
            if !rolled {
                break;
            }
        }
        if val > best_val {
            best_val = val;
            best_u = u.clone();
        }
    }
}

/// max { |sᵀXt| : s ∈ T^m, t ∈ T^n }, i.e. the B norm, as a certified
/// bracket. Lower end: alternating exact phase maximization with multistart,
/// plus a grid over the smaller side (the other side has the closed form
/// s = phase(conj(Xt))). Upper end: ‖X‖_cbB.
pub fn max_bilinear_torus(
    x: &DenseMatrix,
    budget: &Budget,
    tol: &Tolerances,
) -> Result<BilinearMax> {
    let (m, n) = (x.rows(), x.cols());
    if x.hs_norm() == 0.0 {
        return Ok(BilinearMax {
            bracket: NormBracket::exact(0.0),
            left: TorusVector::ones(m),
            right: TorusVector::ones(n),
        });
    }
    let mut best_val = f64::NEG_INFINITY;
    let mut best_s: Vec<Complex> = vec![Complex::new(1.0, 0.0); m];
    let mut best_t: Vec<Complex> = vec![Complex::new(1.0, 0.0); n];
    let mut exhausted = false;
    let xt = x.transpose();

    for run in 0..budget.multistarts.max(1) {
        let mut t: Vec<Complex> = if run == 0 {
            vec![Complex::new(1.0, 0.0); n]
        } else {
            let mut rng = crate::rng::SplitMix64::substream(budget.seed ^ 0xB1, run as u64);
            (0..n)
                .map(|_| {
                    let a = rng.angle();
                    Complex::new(a.cos(), a.sin())
                })
                .collect()
        };
        let mut s: Vec<Complex>;
        let mut val = f64::NEG_INFINITY;
        let mut converged = false;
        for _ in 0..budget.max_iters {
            // s_i = phase(conj((Xt)_i)) maximizes Re sᵀ(Xt) = Σ|（Xt)_i|.
            let q = x.mul_vec(&t);
            s = q.iter().map(|&z| phase(z.conj())).collect();
            // t_j = phase(conj((Xᵀs)_j)).
            let p = xt.mul_vec(&s);
            t = p.iter().map(|&z| phase(z.conj())).collect();
            let nval: f64 = x.mul_vec(&t).iter().zip(&s).map(|(qi, si)| (si * qi).re).sum();
            debug_assert!(nval >= val - 1e-9 * (1.0 + val.abs()) || val == f64::NEG_INFINITY);
            let gain = if val.is_finite() { nval - val } else { f64::INFINITY };
            val = nval;
            if gain <= budget.gain_tol * (1.0 + val.abs()) {
                converged = true;
                break;
            }
        }
        if !converged {
            exhausted = true;
        }
        let q = x.mul_vec(&t);
        let s_final: Vec<Complex> = q.iter().map(|&z| phase(z.conj())).collect();
        if val > best_val {
            best_val = val;
            best_s = s_final;
            best_t = t;
        }
    }

    // Grid over the smaller side; the other side is maximized exactly.
    let mut certified = false;
    let small_is_cols = n <= m;
    let free = if small_is_cols { n - 1 } else { m - 1 };
    if free <= budget.grid_limit && budget.grid_points >= 2 && free >= 1 {
        let (gval, gvec) = if small_is_cols {
            bilinear_grid(x, budget.grid_points)
        } else {
            bilinear_grid(&xt, budget.grid_points)
        };
        if gval > best_val {
            best_val = gval;
            if small_is_cols {
                best_t = gvec;
                best_s = x.mul_vec(&best_t).iter().map(|&z| phase(z.conj())).collect();
            } else {
                best_s = gvec;
                best_t = xt.mul_vec(&best_s).iter().map(|&z| phase(z.conj())).collect();
            }
        }
        certified = true;
    } else if free == 0 {
        certified = true;
    }

    let sdp = solve_two_sided_scaling(x, ScalingMode::Cbb, tol)?;
    let upper = sdp.primal_value.max(best_val);
    let status = if certified {
        BracketStatus::Certified
    } else if exhausted {
        BracketStatus::BudgetExhausted
    } else {
        BracketStatus::Heuristic
    };
    Ok(BilinearMax {
        bracket: NormBracket {
            lower: best_val,
            upper,
            status,
        },
        left: TorusVector::from_complex(&best_s),
        right: TorusVector::from_complex(&best_t),
    })
}

/// Grid over the free phases of t, scoring ‖Xt‖₁ (the exact maximum over s).
/// q = Xt is maintained incrementally.
fn bilinear_grid(x: &DenseMatrix, points: usize) -> (f64, Vec<Complex>) {
    let (m, n) = (x.rows(), x.cols());
    let free = n - 1;
    let step = TWO_PI / points as f64;
    let circle: Vec<Complex> = (0..points)
        .map(|k| {
            let a = step * k as f64;
            Complex::new(a.cos(), a.sin())
        })
        .collect();
    let mut idx = vec![0usize; free];
    let mut t: Vec<Complex> = vec![Complex::new(1.0, 0.0); n];
    let mut q = x.mul_vec(&t);
    let score = |q: &[Complex]| q.iter().map(|z| z.norm()).sum::<f64>();
    let mut best_val = score(&q);
    let mut best_t = t.clone();
    loop {
        let mut pos = free;
        loop {
            if pos == 0 {
                return (best_val, best_t);
            }
            pos -= 1;
            let coord = pos + 1;
            let old = t[coord];
            idx[pos] += 1;
            let rolled = idx[pos] == points;
            if rolled {
                idx[pos] = 0;
            }
            let new = circle[idx[pos]];
            let delta = new - old;
            for i in 0..m {
                q[i] += x[(i, coord)] * delta;
            }
            t[coord] = new;
            if !rolled {
                break;
            }
        }
        let v = score(&q);
        if v > best_val {
            best_val = v;
            best_t = t.clone();
        }
    }
}
