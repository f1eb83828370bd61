//! Small dense SDP engine: a log-det barrier path-following method over
//! linear matrix inequality blocks, plus the three problem families the norm
//! calculators need (diagonal dominance, two-sided scaling, linear
//! maximization over the cbF ball). Problems here have at most a few hundred
//! scalar variables, so every linear system is solved densely.

use alloc::{vec, vec::Vec};
#[allow(unused_imports)]
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, hermitian_eig_tol, hpd_inverse, operator_norm, real_spd_solve};
use crate::mat::{Complex, DenseMatrix};
use crate::Tolerances;

/// One Hermitian entry of a coefficient matrix: A[i][j] = v, A[j][i] = conj(v).
type Entry = (usize, usize, Complex);

struct LmiBlock {
    size: usize,
    c0: DenseMatrix,
    /// terms[k] lists the Hermitian entries contributed by variable k.
    terms: Vec<Vec<Entry>>,
}

impl LmiBlock {
    fn assemble(&self, x: &[f64]) -> DenseMatrix {
        let mut f = self.c0.clone();
        for (k, entries) in self.terms.iter().enumerate() {
            let xv = x[k];
            if xv == 0.0 {
                continue;
            }
            for &(i, j, v) in entries {
                f[(i, j)] += v * xv;
                if i != j {
                    f[(j, i)] += v.conj() * xv;
                }
            }
        }
        f
    }

    fn pair(&self, m: &DenseMatrix, k: usize) -> f64 {
        // Re Tr(M A_k) for Hermitian M.
        let mut acc = 0.0;
        for &(i, j, v) in &self.terms[k] {
            if i == j {
                acc += (m[(j, i)] * v).re;
            } else {
                acc += (m[(j, i)] * v).re + (m[(i, j)] * v.conj()).re;
            }
        }
        acc
    }
}

struct LmiProblem {
    nvars: usize,
    objective: Vec<f64>,
    blocks: Vec<LmiBlock>,
}

struct BarrierOutcome {
    x: Vec<f64>,
    /// Dual multiplier Z_j = F_j^{-1} / t for each block, PSD by construction.
    duals: Vec<DenseMatrix>,
    primal_value: f64,
}

impl LmiProblem {
    fn total_dim(&self) -> f64 {
        self.blocks.iter().map(|b| b.size as f64).sum()
    }

    fn feasible(&self, x: &[f64]) -> Option<f64> {
        // log det of all blocks, None if any block is not PD.
        let mut logdet = 0.0;
        for b in &self.blocks {
            let f = b.assemble(x);
            let l = cholesky(&f).ok()?;
            for i in 0..b.size {
                logdet += l[(i, i)].re.ln();
            }
        }
        Some(2.0 * logdet)
    }

    fn solve(&self, x0: Vec<f64>, tol: &Tolerances) -> Result<BarrierOutcome> {
        let nu = self.total_dim();
        let mut x = x0;
        if self.feasible(&x).is_none() {
            return Err(Error::NonConvergence("initial point not feasible".into()));
        }
        let obj0: f64 = dot(&self.objective, &x);
        let mut t = 10.0 * nu / (1.0 + obj0.abs());
        let mut newton_used = 0usize;
        loop {
            self.center(&mut x, t, 1e-2, 200, &mut newton_used, tol)?;
            let obj = dot(&self.objective, &x);
            if nu / t <= 0.5 * tol.sdp_rel_gap * (1.0 + obj.abs()) {
                break;
            }
            t *= 5.0;
        }
        // High-accuracy final centering: the dual multiplier F⁻¹/t is only
        // feasible (⟨Z, A_k⟩ = c_k) up to the Newton decrement, so drive it
        // to machine precision before reading duals off.
        self.center(&mut x, t, 1e-18, 40, &mut newton_used, tol)?;
        // Duals from the final central point.
        let mut duals = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let f = b.assemble(&x);
            let z = hpd_inverse(&f)?.scale_real(1.0 / t);
            duals.push(z);
        }
        let primal_value = dot(&self.objective, &x);
        Ok(BarrierOutcome {
            x,
            duals,
            primal_value,
        })
    }

    /// Damped Newton centering for min t·cᵀx − Σ logdet F_j(x).
    fn center(
        &self,
        x: &mut Vec<f64>,
        t: f64,
        decrement_tol: f64,
        max_steps: usize,
        newton_used: &mut usize,
        tol: &Tolerances,
    ) -> Result<()> {
        let n = self.nvars;
        let mut prev_decrement = f64::INFINITY;
        for _ in 0..max_steps {
            if *newton_used >= tol.sdp_max_newton {
                return Err(Error::NonConvergence(
                    "Newton iteration budget exhausted".into(),
                ));
            }
            *newton_used += 1;
            let mut grad: Vec<f64> = self.objective.iter().map(|&c| t * c).collect();
            let mut hess = vec![0.0; n * n];
            for b in &self.blocks {
                let f = b.assemble(x);
                let finv = hpd_inverse(&f)?;
                // M_k = Finv A_k Finv, built from outer products of Finv slices.
                let mut mk: Vec<DenseMatrix> = Vec::with_capacity(n);
                for k in 0..n {
                    let mut m = DenseMatrix::zeros(b.size, b.size);
                    for &(i, j, v) in &b.terms[k] {
                        for p in 0..b.size {
                            let fpi = finv[(p, i)];
                            let fpj = finv[(p, j)];
                            for q in 0..b.size {
                                m[(p, q)] += v * fpi * finv[(j, q)];
                                if i != j {
                                    m[(p, q)] += v.conj() * fpj * finv[(i, q)];
                                }
                            }
                        }
                    }
                    grad[k] -= b.pair(&finv, k);
                    mk.push(m);
                }
                for k in 0..n {
                    if b.terms[k].is_empty() {
                        continue;
                    }
                    for l in 0..=k {
                        let h = b.pair(&mk[k], l);
                        hess[k * n + l] += h;
                        if l != k {
                            hess[l * n + k] += h;
                        }
                    }
                }
            }
            // Tiny relative Tikhonov term so degenerate faces stay solvable
            // without disturbing the small-curvature directions.
            for k in 0..n {
                hess[k * n + k] *= 1.0 + 1e-13;
                hess[k * n + k] += 1e-300;
            }
            let mut step: Vec<f64> = grad.iter().map(|&g| -g).collect();
            real_spd_solve(&mut hess, &mut step, n)?;
            let decrement: f64 = -dot(&grad, &step);
            if decrement <= decrement_tol {
                return Ok(());
            }
            // Rounding noise floor: deep in the quadratic region the
            // decrement stops improving; the point is centered.
            if decrement < 1e-6 && decrement >= prev_decrement {
                return Ok(());
            }
            prev_decrement = decrement;
            // In the quadratic-convergence region the full Newton step is
            // accepted on feasibility alone: at this scale the barrier value
            // is dominated by floating-point noise, so an Armijo test would
            // reject genuine progress.
            if decrement <= 0.09 {
                let cand: Vec<f64> = x
                    .iter()
                    .zip(&step)
                    .map(|(&xi, &di)| xi + di)
                    .collect();
                if self.feasible(&cand).is_some() {
                    *x = cand;
                    continue;
                }
            }
            // Backtracking line search on the barrier objective.
            let phi0 = t * dot(&self.objective, x)
                - self
                    .feasible(x)
                    .ok_or_else(|| Error::NonConvergence("lost feasibility".into()))?;
            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                let cand: Vec<f64> = x
                    .iter()
                    .zip(&step)
                    .map(|(&xi, &di)| xi + alpha * di)
                    .collect();
                if let Some(logdet) = self.feasible(&cand) {
                    let phi = t * dot(&self.objective, &cand) - logdet;
                    if phi <= phi0 - 0.25 * alpha * decrement {
                        *x = cand;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted {
                // Step too small to improve: already at the center numerically.
                return Ok(());
            }
        }
        // Per-centering step cap: accept the point reached so far.
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Certified primal/dual pair from the SDP engine.
#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    /// Diagonal primal vectors: λ for diagonal dominance; a then b for scalings.
    pub diag_vars: Vec<Vec<f64>>,
    /// Full PSD primal blocks where the problem has them (Schur / T modes).
    pub psd_vars: Vec<DenseMatrix>,
    /// Dual multiplier of the main LMI block (PSD).
    pub dual_matrix: DenseMatrix,
    /// Problem-specific witness (e.g. the maximizing Y for the T norm).
    pub witness: Option<DenseMatrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingMode {
    Schur,
    Cbb,
}

/// min Σλ s.t. Δ(λ) ⪰ P. Primal value is ‖P‖_cbB for PSD P; the dual matrix
/// Q is PSD with unit diagonal and Tr(PQ) = ‖P‖_cbB.
pub fn solve_diag_dominance(p: &DenseMatrix, tol: &Tolerances) -> Result<SdpSolution> {
    if !p.is_square() {
        return Err(Error::Dimension("diagonal dominance needs a square matrix".into()));
    }
    let n = p.rows();
    let scale = p.hs_norm();
    if scale == 0.0 {
        // P = 0: λ = 0 is optimal, dual Q = I.
        return Ok(SdpSolution {
            primal_value: 0.0,
            dual_value: 0.0,
            gap: 0.0,
            diag_vars: vec![vec![0.0; n]],
            psd_vars: vec![],
            dual_matrix: DenseMatrix::identity(n),
            witness: None,
        });
    }
    let psym = p.symmetrize();
    if p.asymmetry() > tol.hermitian_reject * (1.0 + scale) {
        return Err(Error::Domain("diagonal dominance input is not Hermitian".into()));
    }
    let eig = hermitian_eig_tol(&psym, tol)?;
    let lmax = eig.values.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    if eig.values[0] < -tol.psd_reject * (1.0 + lmax) {
        return Err(Error::Domain("diagonal dominance input is not PSD".into()));
    }
    let pn = psym.scale_real(1.0 / scale);
    let mut terms = Vec::with_capacity(n);
    for k in 0..n {
        terms.push(vec![(k, k, Complex::new(1.0, 0.0))]);
    }
    let problem = LmiProblem {
        nvars: n,
        objective: vec![1.0; n],
        blocks: vec![LmiBlock {
            size: n,
            c0: pn.scale_real(-1.0),
            terms,
        }],
    };
    let start = vec![operator_norm(&pn) + 1.0; n];
    let out = problem.solve(start, tol)?;
    let lambda: Vec<f64> = out.x.iter().map(|&l| l * scale).collect();
    let q = normalize_unit_diagonal(&out.duals[0]);
    // Dual value from the exactly-feasible Q (unit diagonal, PSD): Tr(PQ).
    let dual_value = pn.inner_re(&q) * scale;
    let primal_value = out.primal_value * scale;
    Ok(SdpSolution {
        primal_value,
        dual_value,
        gap: (primal_value - dual_value).abs(),
        diag_vars: vec![lambda],
        psd_vars: vec![],
        dual_matrix: q,
        witness: None,
    })
}

fn normalize_unit_diagonal(z: &DenseMatrix) -> DenseMatrix {
    force_diagonal(z, 1.0)
}

/// PSD-preserving diagonal congruence DZD setting every diagonal entry to
/// `target`. The barrier center satisfies the diagonal dual constraints only
/// up to rounding at large t; this enforces them exactly.
fn force_diagonal(z: &DenseMatrix, target: f64) -> DenseMatrix {
    let n = z.rows();
    let mut d = vec![0.0; n];
    for i in 0..n {
        d[i] = (target / z[(i, i)].re.max(1e-300)).sqrt();
    }
    let mut q = z.clone();
    for i in 0..n {
        for j in 0..n {
            q[(i, j)] = z[(i, j)] * (d[i] * d[j]);
        }
    }
    q.symmetrize()
}

/// Two-sided diagonal scaling with the block constraint on [[·, X], [X*, ·]].
///
/// mode = Cbb: diagonal corner blocks Δ(a), Δ(b), tied sums; the value is
/// ‖X‖_cbB = min ‖B‖_∞ over X = Δ(η)BΔ(ξ).
///
/// mode = Schur: full Hermitian corner blocks with every diagonal entry ≤ t;
/// the value is ‖X‖_S = min ‖L‖_c ‖R‖_c over X = L*R. (Diagonal corner
/// blocks would overestimate the Schur norm; the Gram factor of the optimal
/// block needs full corners.)
pub fn solve_two_sided_scaling(
    x: &DenseMatrix,
    mode: ScalingMode,
    tol: &Tolerances,
) -> Result<SdpSolution> {
    let scale = x.hs_norm();
    if scale == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let xn = x.scale_real(1.0 / scale);
    let sol = match mode {
        ScalingMode::Cbb => solve_cbb(&xn, tol)?,
        ScalingMode::Schur => solve_schur(&xn, tol)?,
    };
    Ok(rescale_solution(sol, scale))
}

fn rescale_solution(mut s: SdpSolution, scale: f64) -> SdpSolution {
    s.primal_value *= scale;
    s.dual_value *= scale;
    s.gap *= scale;
    for v in &mut s.diag_vars {
        for e in v.iter_mut() {
            *e *= scale;
        }
    }
    s.psd_vars = s.psd_vars.iter().map(|m| m.scale_real(scale)).collect();
    s
}

fn solve_cbb(x: &DenseMatrix, tol: &Tolerances) -> Result<SdpSolution> {
    let (m, n) = (x.rows(), x.cols());
    // Zero rows/columns force the matching scaling entry to zero; restrict to
    // the support and reinsert zeros afterwards.
    let row_live: Vec<usize> = (0..m)
        .filter(|&i| x.row(i).iter().any(|z| z.norm() > 0.0))
        .collect();
    let col_live: Vec<usize> = (0..n)
        .filter(|&j| (0..m).any(|i| x[(i, j)].norm() > 0.0))
        .collect();
    if row_live.len() < m || col_live.len() < n {
        let sub = restrict(x, &row_live, &col_live);
        let inner = solve_cbb(&sub, tol)?;
        return Ok(expand_cbb(inner, m, n, &row_live, &col_live));
    }
    let nv = m + n;
    let mut terms = Vec::with_capacity(nv);
    for k in 0..nv {
        terms.push(vec![(k, k, Complex::new(1.0, 0.0))]);
    }
    let mut c0 = DenseMatrix::zeros(m + n, m + n);
    for i in 0..m {
        for j in 0..n {
            c0[(i, m + j)] = x[(i, j)];
            c0[(m + j, i)] = x[(i, j)].conj();
        }
    }
    let problem = LmiProblem {
        nvars: nv,
        objective: vec![0.5; nv],
        blocks: vec![LmiBlock {
            size: m + n,
            c0,
            terms,
        }],
    };
    let start = vec![operator_norm(x) + 1.0; nv];
    let out = problem.solve(start, tol)?;
    // Rebalance so that Σa = Σb exactly (scaling (sa, b/s) stays feasible).
    let sa: f64 = out.x[..m].iter().sum();
    let sb: f64 = out.x[m..].iter().sum();
    let s = (sb / sa).sqrt();
    let a: Vec<f64> = out.x[..m].iter().map(|&v| v * s).collect();
    let b: Vec<f64> = out.x[m..].iter().map(|&v| v / s).collect();
    let value = (sa * sb).sqrt();
    // Project the dual onto its exact diagonal constraints (Z_kk = 1/2) by a
    // PSD-preserving congruence, then read the witness off: Y = -2·Z12 has
    // ‖Y‖_S ≤ 1 and Tr(Y*X) equal to the dual value.
    let z = force_diagonal(&out.duals[0], 0.5);
    let mut y = DenseMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            y[(i, j)] = z[(i, m + j)] * (-2.0);
        }
    }
    let dual_value = x.inner_re(&y);
    Ok(SdpSolution {
        primal_value: value,
        dual_value,
        gap: (value - dual_value).abs(),
        diag_vars: vec![a, b],
        psd_vars: vec![],
        dual_matrix: z.scale_real(2.0),
        witness: Some(y),
    })
}

fn restrict(x: &DenseMatrix, rows: &[usize], cols: &[usize]) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(rows.len(), cols.len());
    for (i, &ri) in rows.iter().enumerate() {
        for (j, &cj) in cols.iter().enumerate() {
            out[(i, j)] = x[(ri, cj)];
        }
    }
    out
}

fn expand_cbb(
    inner: SdpSolution,
    m: usize,
    n: usize,
    rows: &[usize],
    cols: &[usize],
) -> SdpSolution {
    let mut a = vec![0.0; m];
    let mut b = vec![0.0; n];
    for (i, &ri) in rows.iter().enumerate() {
        a[ri] = inner.diag_vars[0][i];
    }
    for (j, &cj) in cols.iter().enumerate() {
        b[cj] = inner.diag_vars[1][j];
    }
    let witness = inner.witness.map(|w| {
        let mut y = DenseMatrix::zeros(m, n);
        for (i, &ri) in rows.iter().enumerate() {
            for (j, &cj) in cols.iter().enumerate() {
                y[(ri, cj)] = w[(i, j)];
            }
        }
        y
    });
    let k = rows.len() + cols.len();
    let mut dual = DenseMatrix::identity(m + n);
    for p in 0..k {
        for q in 0..k {
            let ip = if p < rows.len() { rows[p] } else { m + cols[p - rows.len()] };
            let iq = if q < rows.len() { rows[q] } else { m + cols[q - rows.len()] };
            dual[(ip, iq)] = inner.dual_matrix[(p, q)];
        }
    }
    SdpSolution {
        primal_value: inner.primal_value,
        dual_value: inner.dual_value,
        gap: inner.gap,
        diag_vars: vec![a, b],
        psd_vars: vec![],
        dual_matrix: dual,
        witness,
    }
}

/// Index map for a Hermitian matrix variable packed as real parameters:
/// diagonal entries first conventions are handled by the closure below.
fn hermitian_terms(
    dim: usize,
    var_base: usize,
    row_offset: usize,
    col_offset: usize,
    terms: &mut [Vec<Entry>],
) {
    // Parameter layout: for i ≤ j: one real parameter for (i,i); for i < j a
    // real-part and an imaginary-part parameter.
    let mut k = var_base;
    for i in 0..dim {
        terms[k].push((row_offset + i, col_offset + i, Complex::new(1.0, 0.0)));
        k += 1;
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            terms[k].push((row_offset + i, col_offset + j, Complex::new(1.0, 0.0)));
            k += 1;
            terms[k].push((row_offset + i, col_offset + j, Complex::new(0.0, 1.0)));
            k += 1;
        }
    }
}

fn hermitian_from_params(dim: usize, params: &[f64]) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(dim, dim);
    let mut k = 0;
    for i in 0..dim {
        a[(i, i)] = Complex::new(params[k], 0.0);
        k += 1;
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = Complex::new(params[k], params[k + 1]);
            k += 2;
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
    a
}

fn herm_param_count(dim: usize) -> usize {
    dim * dim
}

fn solve_schur(x: &DenseMatrix, tol: &Tolerances) -> Result<SdpSolution> {
    let (m, n) = (x.rows(), x.cols());
    // Variables: t, then Hermitian A (m×m), then Hermitian B (n×n).
    let na = herm_param_count(m);
    let nb = herm_param_count(n);
    let nv = 1 + na + nb;
    let big = m + n;
    let mut big_terms: Vec<Vec<Entry>> = vec![Vec::new(); nv];
    hermitian_terms(m, 1, 0, 0, &mut big_terms);
    hermitian_terms(n, 1 + na, m, m, &mut big_terms);
    let mut c0 = DenseMatrix::zeros(big, big);
    for i in 0..m {
        for j in 0..n {
            c0[(i, m + j)] = x[(i, j)];
            c0[(m + j, i)] = x[(i, j)].conj();
        }
    }
    let mut blocks = vec![LmiBlock {
        size: big,
        c0,
        terms: big_terms,
    }];
    // 1×1 blocks: t − A_ii ≥ 0 and t − B_jj ≥ 0.
    for i in 0..m {
        let mut terms: Vec<Vec<Entry>> = vec![Vec::new(); nv];
        terms[0].push((0, 0, Complex::new(1.0, 0.0)));
        terms[1 + i].push((0, 0, Complex::new(-1.0, 0.0)));
        blocks.push(LmiBlock {
            size: 1,
            c0: DenseMatrix::zeros(1, 1),
            terms,
        });
    }
    for j in 0..n {
        let mut terms: Vec<Vec<Entry>> = vec![Vec::new(); nv];
        terms[0].push((0, 0, Complex::new(1.0, 0.0)));
        terms[1 + na + j].push((0, 0, Complex::new(-1.0, 0.0)));
        blocks.push(LmiBlock {
            size: 1,
            c0: DenseMatrix::zeros(1, 1),
            terms,
        });
    }
    let mut objective = vec![0.0; nv];
    objective[0] = 1.0;
    let problem = LmiProblem {
        nvars: nv,
        objective,
        blocks,
    };
    let op = operator_norm(x);
    let mut start = vec![0.0; nv];
    start[0] = op + 2.0;
    for i in 0..m {
        start[1 + i] = op + 1.0;
    }
    for j in 0..n {
        start[1 + na + j] = op + 1.0;
    }
    let out = problem.solve(start, tol)?;
    let a = hermitian_from_params(m, &out.x[1..1 + na]);
    let b = hermitian_from_params(n, &out.x[1 + na..]);
    // The t-variable's dual constraint is Tr(Z) + (1×1 duals) = 1 with the
    // 1×1 duals pinned to diag(Z); normalize the trace exactly and recompute
    // the dual value -⟨Z, C0⟩ from the projected multiplier.
    let tau = out.duals[0].trace().re.max(1e-300);
    let zn = out.duals[0].scale_real(1.0 / tau);
    let mut pairing = 0.0;
    for i in 0..m {
        for j in 0..n {
            pairing += (x[(i, j)] * zn[(m + j, i)]).re;
        }
    }
    let dual_value = -2.0 * pairing;
    Ok(SdpSolution {
        primal_value: out.x[0],
        dual_value,
        gap: (out.x[0] - dual_value).abs(),
        diag_vars: vec![
            (0..m).map(|i| a[(i, i)].re).collect(),
            (0..n).map(|j| b[(j, j)].re).collect(),
        ],
        psd_vars: vec![a, b],
        dual_matrix: zn,
        witness: None,
    })
}

/// ‖X‖_T = max { |Tr(Y*X)| : ‖Y‖_cbF ≤ 1 }, solved through the conic dual
/// min Tr(A) + t over [[A, X/2], [X*/2, B]] ⪰ 0, diag(B) ≤ t. The witness Y
/// with Tr(Y*X) = ‖X‖_T is read off the dual multiplier.
pub fn maximize_over_cbf_ball(x: &DenseMatrix, tol: &Tolerances) -> Result<SdpSolution> {
    let scale = x.hs_norm();
    if scale == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let xn = x.scale_real(1.0 / scale);
    let (m, n) = (x.rows(), x.cols());
    let na = herm_param_count(m);
    let nb = herm_param_count(n);
    let nv = 1 + na + nb;
    let big = m + n;
    let mut big_terms: Vec<Vec<Entry>> = vec![Vec::new(); nv];
    hermitian_terms(m, 1, 0, 0, &mut big_terms);
    hermitian_terms(n, 1 + na, m, m, &mut big_terms);
    let mut c0 = DenseMatrix::zeros(big, big);
    for i in 0..m {
        for j in 0..n {
            c0[(i, m + j)] = xn[(i, j)] * 0.5;
            c0[(m + j, i)] = xn[(i, j)].conj() * 0.5;
        }
    }
    let mut blocks = vec![LmiBlock {
        size: big,
        c0,
        terms: big_terms,
    }];
    for j in 0..n {
        let mut terms: Vec<Vec<Entry>> = vec![Vec::new(); nv];
        terms[0].push((0, 0, Complex::new(1.0, 0.0)));
        terms[1 + na + j].push((0, 0, Complex::new(-1.0, 0.0)));
        blocks.push(LmiBlock {
            size: 1,
            c0: DenseMatrix::zeros(1, 1),
            terms,
        });
    }
    let mut objective = vec![0.0; nv];
    objective[0] = 1.0;
    for i in 0..m {
        objective[1 + i] = 1.0; // Tr(A)
    }
    let problem = LmiProblem {
        nvars: nv,
        objective,
        blocks,
    };
    let op = operator_norm(&xn);
    let mut start = vec![0.0; nv];
    start[0] = op + 2.0;
    for i in 0..m {
        start[1 + i] = op + 1.0;
    }
    for j in 0..n {
        start[1 + na + j] = op + 1.0;
    }
    let out = problem.solve(start, tol)?;
    // Stationarity pins Z11 = I and Z22 = Δ(λ) with Σλ = 1; enforce the
    // diagonal of Z11 exactly by congruence, then read Y = -Z12 off.
    let mut z = out.duals[0].clone();
    let mut d = vec![1.0; m + n];
    for (i, di) in d.iter_mut().enumerate().take(m) {
        *di = 1.0 / z[(i, i)].re.max(1e-300).sqrt();
    }
    for i in 0..m + n {
        for j in 0..m + n {
            z[(i, j)] = out.duals[0][(i, j)] * (d[i] * d[j]);
        }
    }
    let mut y = DenseMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            y[(i, j)] = -z[(i, m + j)];
        }
    }
    let dual_value = xn.inner_re(&y) * scale;
    let a = hermitian_from_params(m, &out.x[1..1 + na]).scale_real(scale);
    let b = hermitian_from_params(n, &out.x[1 + na..]).scale_real(scale);
    let primal_value = out.primal_value * scale;
    Ok(SdpSolution {
        primal_value,
        dual_value,
        gap: (primal_value - dual_value).abs(),
        diag_vars: vec![(0..n).map(|j| z[(m + j, m + j)].re).collect()],
        psd_vars: vec![a, b],
        dual_matrix: z,
        witness: Some(y),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{vec_l1, vec_linf};
    use crate::rng::SplitMix64;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn rank_one(mu: &[Complex], nu: &[Complex]) -> DenseMatrix {
        DenseMatrix::outer(mu, nu)
    }

    #[test]
    fn diag_dominance_identity() {
        let sol = solve_diag_dominance(&DenseMatrix::identity(3), &tols()).unwrap();
        assert!((sol.primal_value - 3.0).abs() < 1e-7);
        for &l in &sol.diag_vars[0] {
            assert!((l - 1.0).abs() < 1e-6);
        }
        assert!(sol.dual_matrix.sub(&DenseMatrix::identity(3)).hs_norm() < 1e-5);
    }

    #[test]
    fn diag_dominance_all_ones() {
        // 2x2 closed form: min λ1+λ2 s.t. (λ1-1)(λ2-1) ≥ 1 gives 4.
        let p = DenseMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let sol = solve_diag_dominance(&p, &tols()).unwrap();
        assert!((sol.primal_value - 4.0).abs() < 1e-6, "{}", sol.primal_value);
        assert!((sol.diag_vars[0][0] - 2.0).abs() < 1e-5);
        // dual pairing Tr(PQ) = value
        assert!((p.inner_re(&sol.dual_matrix) - 4.0).abs() < 1e-6);
    }

    #[test]
    fn diag_dominance_diagonal_input() {
        let p = DenseMatrix::diag_real(&[0.5, 2.0, 3.0]);
        let sol = solve_diag_dominance(&p, &tols()).unwrap();
        assert!((sol.primal_value - 5.5).abs() < 1e-6);
    }

    #[test]
    fn diag_dominance_rejects_non_psd() {
        let p = DenseMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        assert!(matches!(
            solve_diag_dominance(&p, &tols()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn schur_matrix_unit() {
        let x = rank_one(
            &[Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)],
            &[Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)],
        );
        let sol = solve_two_sided_scaling(&x, ScalingMode::Schur, &tols()).unwrap();
        assert!((sol.primal_value - 1.0).abs() < 1e-6, "{}", sol.primal_value);
    }

    #[test]
    fn schur_rank_one_cross_norm() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..5 {
            let mu: Vec<Complex> = (0..3)
                .map(|_| Complex::new(rng.standard_normal(), rng.standard_normal()))
                .collect();
            let nu: Vec<Complex> = (0..2)
                .map(|_| Complex::new(rng.standard_normal(), rng.standard_normal()))
                .collect();
            let x = rank_one(&mu, &nu);
            let want = vec_linf(&mu) * vec_linf(&nu);
            let sol = solve_two_sided_scaling(&x, ScalingMode::Schur, &tols()).unwrap();
            assert!(
                (sol.primal_value - want).abs() < 1e-6 * (1.0 + want),
                "{} vs {}",
                sol.primal_value,
                want
            );
        }
    }

    #[test]
    fn cbb_rank_one_cross_norm() {
        let mut rng = SplitMix64::new(100);
        for _ in 0..5 {
            let mu: Vec<Complex> = (0..2)
                .map(|_| Complex::new(rng.standard_normal(), rng.standard_normal()))
                .collect();
            let nu: Vec<Complex> = (0..3)
                .map(|_| Complex::new(rng.standard_normal(), rng.standard_normal()))
                .collect();
            let x = rank_one(&mu, &nu);
            let want = vec_l1(&mu) * vec_l1(&nu);
            let sol = solve_two_sided_scaling(&x, ScalingMode::Cbb, &tols()).unwrap();
            assert!(
                (sol.primal_value - want).abs() < 1e-6 * (1.0 + want),
                "{} vs {}",
                sol.primal_value,
                want
            );
            // witness pairing
            let y = sol.witness.as_ref().unwrap();
            assert!((x.inner_re(y) - want).abs() < 1e-5 * (1.0 + want));
        }
    }

    #[test]
    fn cbb_handles_zero_column() {
        let x = DenseMatrix::from_real(2, 2, &[1.0, 0.0, 1.0, 0.0]).unwrap();
        let sol = solve_two_sided_scaling(&x, ScalingMode::Cbb, &tols()).unwrap();
        assert!((sol.primal_value - 2.0).abs() < 1e-6, "{}", sol.primal_value);
        assert!(sol.diag_vars[1][1].abs() < 1e-12);
    }

    #[test]
    fn t_norm_rank_one() {
        let mut rng = SplitMix64::new(101);
        for _ in 0..5 {
            let mu: Vec<Complex> = (0..2)
                .map(|_| Complex::new(rng.standard_normal(), rng.standard_normal()))
                .collect();
            let nu: Vec<Complex> = (0..3)
                .map(|_| Complex::new(rng.standard_normal(), rng.standard_normal()))
                .collect();
            let x = rank_one(&mu, &nu);
            let want = crate::mat::vec_l2(&mu) * vec_linf(&nu);
            let sol = maximize_over_cbf_ball(&x, &tols()).unwrap();
            assert!(
                (sol.primal_value - want).abs() < 1e-6 * (1.0 + want),
                "{} vs {}",
                sol.primal_value,
                want
            );
            let y = sol.witness.as_ref().unwrap();
            assert!((x.inner_re(y) - want).abs() < 1e-5 * (1.0 + want));
        }
    }

    #[test]
    fn t_norm_single_column() {
        let mu = [Complex::new(3.0, 0.0), Complex::new(4.0, 0.0)];
        let x = rank_one(&mu, &[Complex::new(1.0, 0.0)]);
        let sol = maximize_over_cbf_ball(&x, &tols()).unwrap();
        assert!((sol.primal_value - 5.0).abs() < 1e-6);
    }

    #[test]
    fn positive_homogeneity() {
        let mut rng = SplitMix64::new(102);
        let mut x = DenseMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                x[(i, j)] = Complex::new(rng.standard_normal(), rng.standard_normal());
            }
        }
        let base = solve_two_sided_scaling(&x, ScalingMode::Cbb, &tols())
            .unwrap()
            .primal_value;
        let scaled = solve_two_sided_scaling(&x.scale_real(3.5), ScalingMode::Cbb, &tols())
            .unwrap()
            .primal_value;
        assert!((scaled - 3.5 * base).abs() < 1e-7 * (1.0 + scaled));
    }

    #[test]
    fn strong_duality_gap() {
        let mut rng = SplitMix64::new(103);
        let mut x = DenseMatrix::zeros(3, 4);
        for i in 0..3 {
            for j in 0..4 {
                x[(i, j)] = Complex::new(rng.standard_normal(), rng.standard_normal());
            }
        }
        for sol in [
            solve_two_sided_scaling(&x, ScalingMode::Cbb, &tols()).unwrap(),
            solve_two_sided_scaling(&x, ScalingMode::Schur, &tols()).unwrap(),
            maximize_over_cbf_ball(&x, &tols()).unwrap(),
            solve_diag_dominance(&x.gram(), &tols()).unwrap(),
        ] {
            assert!(
                sol.gap <= 1e-8 * (1.0 + sol.primal_value.abs()),
                "gap {} at value {}",
                sol.gap,
                sol.primal_value
            );
        }
    }
}
