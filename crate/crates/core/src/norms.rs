//! The user-facing norm calculators. Each returns a `NormBracket`:
//! op and HS are exact, the SDP-backed kinds (cbF, cbB, S, T) are tight to
//! the duality gap, and the torus/gauge kinds (F, B, the projective gauges
//! ∧(∞,∞) and ∧(2,∞)) are genuine two-sided brackets.

use alloc::{format, string::String, vec::Vec};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::operator_norm;
use crate::mat::{vec_l1, vec_l2, vec_linf, Complex, DenseMatrix};
use crate::sdp::{
    maximize_over_cbf_ball, solve_diag_dominance, solve_two_sided_scaling, ScalingMode,
};
use crate::simplex::solve_min_cost;
use crate::torus::{
    max_bilinear_torus, max_quadratic_torus, phase, BracketStatus, Budget, NormBracket,
    TorusVector,
};
use crate::Tolerances;

/// The ten norm families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    Op,
    Hs,
    F,
    CbF,
    B,
    CbB,
    S,
    T,
    ProjInfInf,
    Proj2Inf,
}

impl NormKind {
    pub const ALL: [NormKind; 10] = [
        NormKind::Op,
        NormKind::Hs,
        NormKind::F,
        NormKind::CbF,
        NormKind::B,
        NormKind::CbB,
        NormKind::S,
        NormKind::T,
        NormKind::ProjInfInf,
        NormKind::Proj2Inf,
    ];

    pub fn parse(s: &str) -> Result<NormKind> {
        match s {
            "op" => Ok(NormKind::Op),
            "hs" | "HS" => Ok(NormKind::Hs),
            "f" | "F" => Ok(NormKind::F),
            "cbf" | "cbF" => Ok(NormKind::CbF),
            "b" | "B" => Ok(NormKind::B),
            "cbb" | "cbB" => Ok(NormKind::CbB),
            "s" | "S" => Ok(NormKind::S),
            "t" | "T" => Ok(NormKind::T),
            "proj_inf_inf" => Ok(NormKind::ProjInfInf),
            "proj_2_inf" => Ok(NormKind::Proj2Inf),
            other => Err(Error::UnknownKind(String::from(other))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NormKind::Op => "op",
            NormKind::Hs => "hs",
            NormKind::F => "F",
            NormKind::CbF => "cbF",
            NormKind::B => "B",
            NormKind::CbB => "cbB",
            NormKind::S => "S",
            NormKind::T => "T",
            NormKind::ProjInfInf => "proj_inf_inf",
            NormKind::Proj2Inf => "proj_2_inf",
        }
    }
}

impl core::fmt::Display for NormKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// One atom of the set 𝒱: coeff · s t^T with s, t unimodular.
#[derive(Clone, Debug)]
pub struct VAtom {
    pub s: TorusVector,
    pub t: TorusVector,
    pub coeff: Complex,
}

/// A finite mixture Σ coeff_k · s_k t_k^T of 𝒱-atoms.
#[derive(Clone, Debug)]
pub struct AtomMixtureV {
    pub atoms: Vec<VAtom>,
}

impl AtomMixtureV {
    pub fn implied_matrix(&self, m: usize, n: usize) -> DenseMatrix {
        let mut x = DenseMatrix::zeros(m, n);
        for atom in &self.atoms {
            let s = atom.s.to_complex();
            let t = atom.t.to_complex();
            for i in 0..m {
                for j in 0..n {
                    x[(i, j)] += atom.coeff * s[i] * t[j];
                }
            }
        }
        x
    }

    /// Σ|coeff_k|, the mixture's certificate for the gauge value.
    pub fn gauge_value(&self) -> f64 {
        self.atoms.iter().map(|a| a.coeff.norm()).sum()
    }
}

/// Thm 2.1 closed forms for X = μ ν^T.
#[derive(Clone, Copy, Debug)]
pub struct RankOneNorms {
    pub op: f64,
    pub hs: f64,
    pub f: f64,
    pub cbf: f64,
    pub b: f64,
    pub cbb: f64,
    pub s: f64,
    pub t: f64,
    pub proj_inf_inf: f64,
    pub proj_2_inf: f64,
}

impl RankOneNorms {
    pub fn value(&self, kind: NormKind) -> f64 {
        match kind {
            NormKind::Op => self.op,
            NormKind::Hs => self.hs,
            NormKind::F => self.f,
            NormKind::CbF => self.cbf,
            NormKind::B => self.b,
            NormKind::CbB => self.cbb,
            NormKind::S => self.s,
            NormKind::T => self.t,
            NormKind::ProjInfInf => self.proj_inf_inf,
            NormKind::Proj2Inf => self.proj_2_inf,
        }
    }
}

/// Closed-form values of all ten norms on the rank-one matrix μ ν^T.
pub fn rank_one_closed_forms(mu: &[Complex], nu: &[Complex]) -> Result<RankOneNorms> {
    if vec_l2(mu) == 0.0 || vec_l2(nu) == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let (l1m, l2m, lim) = (vec_l1(mu), vec_l2(mu), vec_linf(mu));
    let (l1n, l2n, lin) = (vec_l1(nu), vec_l2(nu), vec_linf(nu));
    Ok(RankOneNorms {
        op: l2m * l2n,
        hs: l2m * l2n,
        f: l2m * l1n,
        cbf: l2m * l1n,
        b: l1m * l1n,
        cbb: l1m * l1n,
        s: lim * lin,
        t: l2m * lin,
        proj_inf_inf: lim * lin,
        proj_2_inf: l2m * lin,
    })
}

fn sdp_bracket(primal: f64, dual: f64) -> NormBracket {
    NormBracket {
        lower: primal.min(dual),
        upper: primal.max(dual),
        status: BracketStatus::Certified,
    }
}

/// ‖X‖ for the given kind, as a certified bracket.
pub fn norm(
    x: &DenseMatrix,
    kind: NormKind,
    budget: &Budget,
    tol: &Tolerances,
) -> Result<NormBracket> {
    if x.hs_norm() == 0.0 {
        return Ok(NormBracket::exact(0.0));
    }
    match kind {
        NormKind::Op => Ok(NormBracket::exact(operator_norm(x))),
        NormKind::Hs => Ok(NormBracket::exact(x.hs_norm())),
        NormKind::F => {
            // ‖X‖_F² = ‖X*X‖_B (quadratic torus maximum).
            let q = max_quadratic_torus(&x.gram(), budget, tol)?;
            // Prop 3.1: ‖X‖_F ≤ √(Σ_i ‖row_i‖₁²) always; keep the upper end
            // below the closed-form cap (they agree up to solver tolerance).
            let cap = x
                .row_l1_norms()
                .iter()
                .map(|r| r * r)
                .sum::<f64>()
                .sqrt();
            let lower = q.bracket.lower.max(0.0).sqrt();
            let upper = q.bracket.upper.max(0.0).sqrt().min(cap + 1e-12).max(lower);
            Ok(NormBracket {
                lower,
                upper,
                status: q.bracket.status,
            })
        }
        NormKind::CbF => {
            let sol = solve_diag_dominance(&x.gram(), tol)?;
            Ok(sdp_bracket(
                sol.primal_value.max(0.0).sqrt(),
                sol.dual_value.max(0.0).sqrt(),
            ))
        }
        NormKind::B => Ok(max_bilinear_torus(x, budget, tol)?.bracket),
        NormKind::CbB => {
            let sol = solve_two_sided_scaling(x, ScalingMode::Cbb, tol)?;
            Ok(sdp_bracket(sol.primal_value, sol.dual_value))
        }
        NormKind::S => {
            let sol = solve_two_sided_scaling(x, ScalingMode::Schur, tol)?;
            Ok(sdp_bracket(sol.primal_value, sol.dual_value))
        }
        NormKind::T => {
            let sol = maximize_over_cbf_ball(x, tol)?;
            Ok(sdp_bracket(sol.primal_value, sol.dual_value))
        }
        NormKind::ProjInfInf => Ok(gauge_inf_inf(x, budget, tol)?.0),
        NormKind::Proj2Inf => Ok(gauge_2_inf(x, budget, tol)?.0),
    }
}

/// All ten norms at once (used by reports).
pub fn norm_table(
    x: &DenseMatrix,
    budget: &Budget,
    tol: &Tolerances,
) -> Result<Vec<(NormKind, NormBracket)>> {
    NormKind::ALL
        .iter()
        .map(|&k| Ok((k, norm(x, k, budget, tol)?)))
        .collect()
}

// ---------------------------------------------------------------------------
// Column generation for the projective gauges.
// ---------------------------------------------------------------------------

/// Stack a complex m×n matrix as 2mn reals (Re entries then Im entries).
fn realify(a: &DenseMatrix) -> Vec<f64> {
    let mut v = Vec::with_capacity(2 * a.rows() * a.cols());
    for z in a.entries() {
        v.push(z.re);
    }
    for z in a.entries() {
        v.push(z.im);
    }
    v
}

/// The four nonnegative-coefficient columns representing a complex
/// coefficient on atom A: +A, -A, +iA, -iA.
fn four_columns(a: &DenseMatrix) -> [Vec<f64>; 4] {
    let re = realify(a);
    let neg: Vec<f64> = re.iter().map(|&v| -v).collect();
    let ia = a.scale(Complex::new(0.0, 1.0));
    let imc = realify(&ia);
    let negi: Vec<f64> = imc.iter().map(|&v| -v).collect();
    [re, neg, imc, negi]
}

/// DFT-vector torus atoms s^(k) ⊗ t^(l): mn unimodular rank-ones whose
/// complex span is all of M_{m,n}, so the pool LP always has a solution.
fn dft_atoms(m: usize, n: usize) -> Vec<(Vec<Complex>, Vec<Complex>)> {
    let col = |dim: usize, k: usize| -> Vec<Complex> {
        (0..dim)
            .map(|i| {
                let th = 2.0 * core::f64::consts::PI * (k * i) as f64 / dim as f64;
                Complex64::new(th.cos(), th.sin())
            })
            .collect()
    };
    let mut out = Vec::with_capacity(m * n);
    for k in 0..m {
        for l in 0..n {
            out.push((col(m, k), col(n, l)));
        }
    }
    out
}

struct GaugeState {
    /// (left factor, right factor); left is unimodular for ∧(∞,∞), ‖·‖₂ ≤ 1
    /// for ∧(2,∞); right is always unimodular.
    atoms: Vec<(Vec<Complex>, Vec<Complex>)>,
    columns: Vec<Vec<f64>>,
    cost: Vec<f64>,
}

impl GaugeState {
    fn push(&mut self, s: Vec<Complex>, t: Vec<Complex>) {
        let a = DenseMatrix::outer(&s, &t);
        for c in four_columns(&a) {
            self.columns.push(c);
            self.cost.push(1.0);
        }
        self.atoms.push((s, t));
    }

    fn coefficient(&self, x: &[f64], k: usize) -> Complex {
        Complex::new(x[4 * k] - x[4 * k + 1], x[4 * k + 2] - x[4 * k + 3])
    }
}

fn dual_gradient(duals: &[f64], m: usize, n: usize) -> DenseMatrix {
    // G with Re⟨A, G⟩_HS = yᵀ·realify(A): G_ij = y_re + i·y_im.
    let mut g = DenseMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            g[(i, j)] = Complex::new(duals[i * n + j], duals[m * n + i * n + j]);
        }
    }
    g
}

/// A mixture of ∧(2,∞)-atoms: coeff · μ ν^T with ‖μ‖₂ ≤ 1, ν unimodular.
#[derive(Clone, Debug)]
pub struct AtomMixture2Inf {
    pub atoms: Vec<(Vec<Complex>, Vec<Complex>, Complex)>,
}

impl AtomMixture2Inf {
    pub fn implied_matrix(&self, m: usize, n: usize) -> DenseMatrix {
        let mut x = DenseMatrix::zeros(m, n);
        for (s, t, coeff) in &self.atoms {
            for i in 0..m {
                for j in 0..n {
                    x[(i, j)] += coeff * s[i] * t[j];
                }
            }
        }
        x
    }

    pub fn gauge_value(&self) -> f64 {
        self.atoms.iter().map(|a| a.2.norm()).sum()
    }
}

/// Gauge of 𝒱 (the norm ∧(∞,∞)) by column generation. Returns the bracket
/// and the achieving mixture. The pricing oracle maximizes |⟨G, s t^T⟩| =
/// |sᵀ Ḡ t| over the torus; its cbB upper bound, together with the S-norm
/// seed (valid since B ≤ cbB on the dual ball), certifies the lower end.
pub fn gauge_inf_inf(
    x: &DenseMatrix,
    budget: &Budget,
    tol: &Tolerances,
) -> Result<(NormBracket, AtomMixtureV)> {
    let (bracket, raw) = gauge_column_generation(x, budget, tol, false)?;
    // Left factors are unimodular here; `TorusVector::from_complex` drops
    // each side's global phase, so fold both phases into the coefficient.
    let atoms = raw
        .atoms
        .into_iter()
        .map(|(s, t, coeff)| VAtom {
            coeff: coeff * phase(s[0]) * phase(t[0]),
            s: TorusVector::from_complex(&s),
            t: TorusVector::from_complex(&t),
        })
        .collect();
    Ok((bracket, AtomMixtureV { atoms }))
}

/// Gauge over atoms μ ν^T with ‖μ‖₂ ≤ 1 and ν unimodular (the norm ∧(2,∞)).
/// The lower end is seeded with the T-norm (valid since F ≤ cbF).
pub fn gauge_2_inf(
    x: &DenseMatrix,
    budget: &Budget,
    tol: &Tolerances,
) -> Result<(NormBracket, AtomMixture2Inf)> {
    gauge_column_generation(x, budget, tol, true)
}

fn gauge_column_generation(
    x: &DenseMatrix,
    budget: &Budget,
    tol: &Tolerances,
    left_l2: bool,
) -> Result<(NormBracket, AtomMixture2Inf)> {
    let (m, n) = (x.rows(), x.cols());
    let scale = x.hs_norm();
    if scale == 0.0 {
        return Ok((
            NormBracket::exact(0.0),
            AtomMixture2Inf { atoms: Vec::new() },
        ));
    }
    let xn = x.scale_real(1.0 / scale);
    let rhs = realify(&xn);
    let mut state = GaugeState {
        atoms: Vec::new(),
        columns: Vec::new(),
        cost: Vec::new(),
    };
    // Spanning seed pool; for ∧(2,∞) the left DFT factors are rescaled to
    // unit ℓ₂ norm.
    for (mut s, t) in dft_atoms(m, n) {
        if left_l2 {
            let norm = vec_l2(&s);
            for z in &mut s {
                *z /= norm;
            }
        }
        state.push(s, t);
    }
    // Also seed with the aligned top atom of X itself.
    {
        let top = max_bilinear_torus(&xn.conj(), budget, tol)?;
        let (s, t) = aligned_atom(&xn, top.left.to_complex(), top.right.to_complex(), left_l2);
        state.push(s, t);
    }

    let pool_cap = budget.pool_factor * (m + n);
    // Rigorous lower seed: the gauge's dual ball {G : B(Ḡ) ≤ 1} (resp.
    // {G : F(Ḡ) ≤ 1}) contains the cbB-dual (resp. cbF-dual) ball, so the
    // gauge dominates the S-norm (resp. T-norm). Exactly tight on rank ones.
    let mut lower = if left_l2 {
        let sol = maximize_over_cbf_ball(&xn, tol)?;
        sol.primal_value.min(sol.dual_value)
    } else {
        let sol = solve_two_sided_scaling(&xn, ScalingMode::Schur, tol)?;
        sol.primal_value.min(sol.dual_value)
    };
    let mut upper = f64::INFINITY;
    let mut best_x: Vec<f64> = Vec::new();
    let mut best_len = 0usize;
    let max_rounds = 25usize;
    for _ in 0..max_rounds {
        let lp = solve_min_cost(&state.columns, &state.cost, &rhs)?;
        if lp.residual > 1e-7 {
            return Err(Error::NonConvergence(format!(
                "gauge pool LP residual {:.3e}",
                lp.residual
            )));
        }
        let mut pool_upper = 0.0;
        for k in 0..state.atoms.len() {
            pool_upper += state.coefficient(&lp.x, k).norm();
        }
        if pool_upper < upper {
            upper = pool_upper;
            best_x = lp.x.clone();
            best_len = state.atoms.len();
        }
        // Price atoms against the dual gradient.
        let g = dual_gradient(&lp.duals, m, n);
        let gbar = g.conj();
        let (orac_lower, orac_upper, s_new, t_new) = if left_l2 {
            // max over ‖μ‖₂ ≤ 1, ν torus of |μᵀ Ḡ ν| = ‖Ḡ‖_F-type maximum.
            let q = max_quadratic_torus(&gbar.gram(), budget, tol)?;
            let t = q.witness.to_complex();
            let w = gbar.mul_vec(&t);
            let wn = vec_l2(&w).max(1e-300);
            let mu: Vec<Complex> = w.iter().map(|z| z.conj() / wn).collect();
            (
                q.bracket.lower.max(0.0).sqrt(),
                q.bracket.upper.max(0.0).sqrt(),
                mu,
                t,
            )
        } else {
            let b = max_bilinear_torus(&gbar, budget, tol)?;
            (
                b.bracket.lower,
                b.bracket.upper,
                b.left.to_complex(),
                b.right.to_complex(),
            )
        };
        // Weak-duality certificate: gauge ≥ ⟨y, x⟩ / max_atoms ⟨y, atom⟩.
        let pairing: f64 = lp.duals.iter().zip(&rhs).map(|(a, b)| a * b).sum();
        if orac_upper > 1e-12 {
            lower = lower.max(pairing / orac_upper.max(1.0));
        }
        if upper <= lower * (1.0 + tol.feas_tol) + 1e-12 {
            break;
        }
        if orac_lower <= 1.0 + 1e-9 || state.atoms.len() >= pool_cap {
            // Oracle can no longer improve the pool (or pool is full).
            break;
        }
        let (s, t) = aligned_atom(&gbar, s_new, t_new, left_l2);
        state.push(s, t);
    }
    let lower = lower.min(upper) * scale;
    let upper = upper * scale;
    // Both ends carry certificates (a feasible dual point and an explicit
    // decomposition); Certified means they agree to the working tolerance.
    let status = if upper <= lower * (1.0 + tol.feas_tol) + 1e-12 {
        BracketStatus::Certified
    } else {
        BracketStatus::Heuristic
    };
    let mut atoms = Vec::new();
    for k in 0..best_len {
        let coeff = state.coefficient(&best_x, k) * scale;
        if coeff.norm() > 1e-12 * scale {
            atoms.push((state.atoms[k].0.clone(), state.atoms[k].1.clone(), coeff));
        }
    }
    Ok((
        NormBracket {
            lower,
            upper,
            status,
        },
        AtomMixture2Inf { atoms },
    ))
}

fn aligned_atom(
    g: &DenseMatrix,
    s: Vec<Complex>,
    t: Vec<Complex>,
    left_l2: bool,
) -> (Vec<Complex>, Vec<Complex>) {
    // Rotate s so that sᵀ G t is real nonnegative (phase absorbed into the
    // left factor, keeping coefficients effectively real in the LP), and
    // rescale it to the unit ℓ₂ ball when required.
    let mut val = Complex::new(0.0, 0.0);
    let gt = g.mul_vec(&t);
    for (si, gi) in s.iter().zip(&gt) {
        val += si * gi;
    }
    let mut ph = phase(val).conj();
    if left_l2 {
        let norm = vec_l2(&s);
        if norm > 0.0 {
            ph /= norm;
        }
    }
    let s2: Vec<Complex> = s.iter().map(|z| z * ph).collect();
    (s2, t)
}
