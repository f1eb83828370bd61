//! Convex geometry of the elliptope Q_n, the hull R_n of unimodular
//! Hermitian rank-ones, and the set 𝒱: Frank-Wolfe decompositions
//! Q = αR − P, the two-sided series Q = (1/(2−α))R₊ − ((α−1)/(2−α))R₋,
//! 𝒱-membership through the Schur block embedding, and α-feasibility runs.

use alloc::{string::String, vec, vec::Vec};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fact::schur_factorization;
use crate::linalg::{hermitian_eig, psd_clamp};
use crate::mat::{Complex, DenseMatrix};
use crate::norms::{AtomMixtureV, VAtom};
use crate::simplex::solve_min_cost;
use crate::torus::{phase, Budget, TorusVector};
use crate::Tolerances;

/// Default α: the complex little Grothendieck constant 4/π.
pub const K_LITTLE: f64 = 4.0 / core::f64::consts::PI;

/// Convex mixture of unimodular Hermitian rank-ones; the implied matrix has
/// entries R_{ij} = Σ_k w_k·conj(u_{k,i})·u_{k,j}.
#[derive(Clone, Debug)]
pub struct RAtomMixture {
    pub atoms: Vec<TorusVector>,
    pub weights: Vec<f64>,
}

impl RAtomMixture {
    pub fn identity(n: usize) -> Self {
        // n Fourier atoms average exactly to I.
        let atoms: Vec<TorusVector> = (0..n)
            .map(|k| {
                TorusVector::from_phases(
                    &(0..n)
                        .map(|j| 2.0 * core::f64::consts::PI * (k * j) as f64 / n as f64)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        RAtomMixture {
            weights: vec![1.0 / n as f64; n],
            atoms,
        }
    }

    pub fn single(u: TorusVector) -> Self {
        RAtomMixture {
            atoms: vec![u],
            weights: vec![1.0],
        }
    }

    pub fn implied_matrix(&self, n: usize) -> DenseMatrix {
        let mut r = DenseMatrix::zeros(n, n);
        for (u, &w) in self.atoms.iter().zip(&self.weights) {
            accumulate_atom(&mut r, u, w);
        }
        r
    }

    /// Blend in a uniform sub-mixture: R ← (1−θ)R + (θ/L)·Σ atoms.
    fn blend_set(&mut self, atoms: &[TorusVector], theta: f64) {
        for w in &mut self.weights {
            *w *= 1.0 - theta;
        }
        let share = theta / atoms.len() as f64;
        'outer: for atom in atoms {
            for (u, w) in self.atoms.iter().zip(self.weights.iter_mut()) {
                if u.distance(atom) < 1e-6 {
                    *w += share;
                    continue 'outer;
                }
            }
            self.atoms.push(atom.clone());
            self.weights.push(share);
        }
    }
}

fn accumulate_atom(r: &mut DenseMatrix, u: &TorusVector, w: f64) {
    let uc = u.to_complex();
    let n = uc.len();
    for i in 0..n {
        for j in 0..n {
            r[(i, j)] += uc[i].conj() * uc[j] * w;
        }
    }
}

#[cfg(test)]
fn atom_matrix(u: &TorusVector) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(u.len(), u.len());
    accumulate_atom(&mut a, u, 1.0);
    a
}

/// Result of the one-sided decomposition Q = αR − P.
#[derive(Clone, Debug)]
pub struct GeoDecomposition {
    pub alpha: f64,
    pub r: RAtomMixture,
    pub p: DenseMatrix,
    pub min_eig_achieved: f64,
    pub success: bool,
}

fn check_elliptope(q: &DenseMatrix, tol: &Tolerances) -> Result<()> {
    if !q.is_square() || !q.is_hermitian(tol.hermitian_reject) {
        return Err(Error::Domain(String::from(
            "elliptope member must be Hermitian",
        )));
    }
    for i in 0..q.rows() {
        if (q[(i, i)].re - 1.0).abs() > 1e-8 {
            return Err(Error::Domain(String::from(
                "elliptope member needs a unit diagonal",
            )));
        }
    }
    let eig = hermitian_eig(&q.symmetrize())?;
    if eig.values[0] < -tol.psd_reject * (1.0 + q.rows() as f64) {
        return Err(Error::Domain(String::from("elliptope member must be PSD")));
    }
    Ok(())
}

fn min_eig_with_vector(m: &DenseMatrix) -> Result<(f64, Vec<Complex>)> {
    let eig = hermitian_eig(&m.symmetrize())?;
    let n = m.rows();
    let v: Vec<Complex> = (0..n).map(|i| eig.vectors[(i, 0)]).collect();
    Ok((eig.values[0], v))
}

/// Frank-Wolfe maximization of λ_min(αR − Q) over R ∈ R_n. The linear
/// oracle is exact: for bottom eigenvector v, the atom maximizing the
/// eigenvalue derivative v*Av has u_j = phase(conj(v_j)) and value ‖v‖₁².
pub fn decompose_geo(
    q: &DenseMatrix,
    alpha: f64,
    budget: &Budget,
    tol: &Tolerances,
) -> Result<GeoDecomposition> {
    if alpha < 1.0 {
        return Err(Error::Domain(String::from("alpha must be at least 1")));
    }
    check_elliptope(q, tol)?;
    let n = q.rows();
    let mut rng = crate::rng::SplitMix64::new(budget.seed ^ 0x9E33_779B_97F4_A7C5);
    let mut mix = RAtomMixture::identity(n);
    let mut m = mix.implied_matrix(n).scale_real(alpha).sub(q);
    let mut min_eig = min_eig_with_vector(&m)?.0;
    for _ in 0..budget.fw_max_iters {
        if min_eig >= 0.0 {
            break;
        }
        // λ_min is nonsmooth where the bottom eigenvalue is degenerate, so a
        // single-eigenvector oracle can stall. Offer atoms from every
        // direction in the near-bottom eigenspace plus random combinations
        // inside it, and keep the line search winner.
        let eig = hermitian_eig(&m.symmetrize())?;
        let band = (min_eig + 1e-9 + 0.5 * min_eig.abs()).min(0.0);
        let kdim = (0..n).take_while(|&i| eig.values[i] <= band).count().max(1);
        let mut directions: Vec<Vec<Complex>> = (0..kdim.min(4))
            .map(|k| (0..n).map(|i| eig.vectors[(i, k)]).collect())
            .collect();
        if kdim > 1 {
            for _ in 0..6 {
                let mut v = vec![Complex64::new(0.0, 0.0); n];
                for k in 0..kdim.min(4) {
                    let c = Complex64::new(rng.standard_normal(), rng.standard_normal());
                    for i in 0..n {
                        v[i] += c * eig.vectors[(i, k)];
                    }
                }
                directions.push(v);
            }
        }
        let atoms: Vec<TorusVector> = directions
            .iter()
            .map(|v| {
                TorusVector::from_complex(
                    &v.iter().map(|z| phase(z.conj())).collect::<Vec<_>>(),
                )
            })
            .collect();
        // Candidate sub-mixtures: each atom alone, and — because a rank-one
        // atom can only lift one direction of a degenerate eigenspace — the
        // uniform composite of the eigenbasis atoms.
        let mut candidate_sets: Vec<Vec<TorusVector>> =
            atoms.iter().map(|a| vec![a.clone()]).collect();
        if kdim > 1 {
            candidate_sets.push(atoms[..kdim.min(4)].to_vec());
            candidate_sets.push(atoms.clone());
        }
        let mut best: Option<(f64, f64, Vec<TorusVector>, DenseMatrix)> = None;
        for set in candidate_sets {
            let mut s = DenseMatrix::zeros(n, n);
            for a in &set {
                accumulate_atom(&mut s, a, 1.0 / set.len() as f64);
            }
            let cand = s.scale_real(alpha).sub(q);
            // Exact line search on the concave λ_min((1−θ)M + θN).
            let theta = golden_section_max(
                |t| {
                    let blend = m.scale_real(1.0 - t).add(&cand.scale_real(t));
                    min_eig_with_vector(&blend).map(|e| e.0).unwrap_or(f64::NEG_INFINITY)
                },
                budget.fw_line_probes,
            );
            let next = m.scale_real(1.0 - theta).add(&cand.scale_real(theta));
            let next_eig = min_eig_with_vector(&next)?.0;
            if best.as_ref().map_or(true, |b| next_eig > b.0) {
                best = Some((next_eig, theta, set, next));
            }
        }
        let (next_eig, theta, set, next) = best.unwrap();
        if next_eig <= min_eig + budget.gain_tol {
            break;
        }
        mix.blend_set(&set, theta);
        m = next;
        min_eig = next_eig;
    }
    let p = psd_clamp(&m)?;
    Ok(GeoDecomposition {
        alpha,
        r: mix,
        p,
        min_eig_achieved: min_eig,
        success: min_eig >= -tol.feas_tol,
    })
}

fn golden_section_max(f: impl Fn(f64) -> f64, probes: usize) -> f64 {
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0_f64, 1.0_f64);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..probes {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    // Endpoints are candidates too (λ_min may peak at θ = 1).
    let f0 = f(0.0);
    let f1 = f(1.0);
    let fm = f(mid);
    if f1 >= fm && f1 >= f0 {
        1.0
    } else if f0 >= fm {
        0.0
    } else {
        mid
    }
}

/// Result of the alternating series Q = (1/(2−α))R₊ − ((α−1)/(2−α))R₋.
#[derive(Clone, Debug)]
pub struct Geo2Decomposition {
    pub alpha: f64,
    pub r_plus: RAtomMixture,
    pub r_minus: RAtomMixture,
    pub residual: f64,
    pub failure_depth: Option<usize>,
}

/// Run the induction: Q_{k−1} = αR_k − P_k, Q_k = P_k/(α−1) renormalized,
/// collecting odd steps into R₊ (weights α(α−1)^{2(k−1)}) and even steps
/// into R₋ (weights α(α−1)^{2k−1}).
pub fn decompose_geo2(
    q: &DenseMatrix,
    alpha: f64,
    depth: usize,
    budget: &Budget,
    tol: &Tolerances,
) -> Result<Geo2Decomposition> {
    if !(1.0 < alpha && alpha < 2.0) {
        return Err(Error::Domain(String::from("geo2 needs 1 < alpha < 2")));
    }
    let n = q.rows();
    let mut current = q.clone();
    let mut plus: Vec<(TorusVector, f64)> = Vec::new();
    let mut minus: Vec<(TorusVector, f64)> = Vec::new();
    let mut failure_depth = None;
    for k in 1..=depth {
        let geo = decompose_geo(&current, alpha, budget, tol)?;
        let coeff = alpha * (alpha - 1.0).powi(k as i32 - 1);
        let bucket = if k % 2 == 1 { &mut plus } else { &mut minus };
        for (u, &w) in geo.r.atoms.iter().zip(&geo.r.weights) {
            bucket.push((u.clone(), w * coeff));
        }
        if !geo.success {
            failure_depth = Some(k);
            break;
        }
        // Next elliptope member: P/(α−1) with the diagonal forced to 1.
        let mut next = geo.p.scale_real(1.0 / (alpha - 1.0));
        for i in 0..n {
            let d = next[(i, i)].re;
            let s = if d > 1e-12 { 1.0 / d.sqrt() } else { 0.0 };
            for j in 0..n {
                next[(i, j)] *= s;
                let nji = next[(j, i)] * s;
                next[(j, i)] = nji;
            }
            next[(i, i)] = Complex64::new(1.0, 0.0);
        }
        current = next.symmetrize();
    }
    let r_plus = normalize_mixture(plus, n);
    let r_minus = normalize_mixture(minus, n);
    let c_plus = 1.0 / (2.0 - alpha);
    let c_minus = (alpha - 1.0) / (2.0 - alpha);
    let rec = r_plus
        .implied_matrix(n)
        .scale_real(c_plus)
        .sub(&r_minus.implied_matrix(n).scale_real(c_minus));
    let residual = rec.sub(q).hs_norm();
    Ok(Geo2Decomposition {
        alpha,
        r_plus,
        r_minus,
        residual,
        failure_depth,
    })
}

fn normalize_mixture(raw: Vec<(TorusVector, f64)>, n: usize) -> RAtomMixture {
    if raw.is_empty() {
        return RAtomMixture::identity(n);
    }
    let total: f64 = raw.iter().map(|(_, w)| w).sum();
    let mut mix = RAtomMixture {
        atoms: Vec::new(),
        weights: Vec::new(),
    };
    'outer: for (u, w) in raw {
        for (v, wv) in mix.atoms.iter().zip(mix.weights.iter_mut()) {
            if v.distance(&u) < 1e-6 {
                *wv += w / total;
                continue 'outer;
            }
        }
        mix.atoms.push(u);
        mix.weights.push(w / total);
    }
    mix
}

/// 𝒱-membership certificate for ‖X‖_S = 1: ρ and the mixture with
/// X = Σ c_k·conj(s_k)·t_kᵀ and ρ = Σ|c_k| ≤ α/(2−α).
#[derive(Clone, Debug)]
pub struct VMembership {
    pub rho: f64,
    pub mixture: AtomMixtureV,
    pub residual: f64,
}

pub fn v_membership(
    x: &DenseMatrix,
    alpha: f64,
    depth: usize,
    budget: &Budget,
    tol: &Tolerances,
) -> Result<VMembership> {
    let (m, n) = (x.rows(), x.cols());
    // Build the Schur block Gram Q = [[L*L, L*R],[R*L, R*R]] and pad each
    // column of [L | R] to unit length so Q sits in the elliptope; the
    // off-diagonal corner (which is X) is unchanged by the padding.
    let fac = schur_factorization(x, tol)?;
    if (fac.s_norm - 1.0).abs() > 1e-6 {
        return Err(Error::Domain(String::from(
            "v_membership expects ‖X‖_S = 1 (caller normalizes)",
        )));
    }
    let f = stack_columns(&fac.l, &fac.r);
    let mut q = f.gram();
    for i in 0..(m + n) {
        let d = q[(i, i)].re.min(1.0);
        q[(i, i)] = Complex64::new(1.0, 0.0);
        let _ = d;
    }
    let q = q.symmetrize();
    let geo2 = decompose_geo2(&q, alpha, depth, budget, tol)?;
    // Corner of each atom ū u^T with u = (s; t) is the 𝒱-atom conj(s)·tᵀ.
    let c_plus = 1.0 / (2.0 - alpha);
    let c_minus = -(alpha - 1.0) / (2.0 - alpha);
    let mut atoms: Vec<VAtom> = Vec::new();
    for (sign, mixr) in [(c_plus, &geo2.r_plus), (c_minus, &geo2.r_minus)] {
        for (u, &w) in mixr.atoms.iter().zip(&mixr.weights) {
            let uc = u.to_complex();
            let s: Vec<Complex> = uc[..m].iter().map(|z| z.conj()).collect();
            let t: Vec<Complex> = uc[m..].to_vec();
            atoms.push(VAtom {
                coeff: Complex64::new(sign * w, 0.0) * phase(s[0]) * phase(t[0]),
                s: TorusVector::from_complex(&s),
                t: TorusVector::from_complex(&t),
            });
        }
    }
    // Polish with an exact-reconstruction LP over the collected corners plus
    // a spanning Fourier pool; this both enforces X = Σ c_k·atom_k exactly
    // and shrinks ρ when the series is wasteful (e.g. matrix units).
    let polished = polish_v_mixture(x, &atoms, tol)?;
    let rec = polished.implied_matrix(m, n);
    let residual = rec.sub(x).hs_norm();
    Ok(VMembership {
        rho: polished.gauge_value(),
        mixture: polished,
        residual,
    })
}

fn stack_columns(l: &DenseMatrix, r: &DenseMatrix) -> DenseMatrix {
    let k = l.rows();
    let (m, n) = (l.cols(), r.cols());
    let mut f = DenseMatrix::zeros(k, m + n);
    for i in 0..k {
        for j in 0..m {
            f[(i, j)] = l[(i, j)];
        }
        for j in 0..n {
            f[(i, m + j)] = r[(i, j)];
        }
    }
    f
}

fn polish_v_mixture(
    x: &DenseMatrix,
    seeds: &[VAtom],
    _tol: &Tolerances,
) -> Result<AtomMixtureV> {
    let (m, n) = (x.rows(), x.cols());
    // Real LP: stack X as 2mn reals; 4 nonnegative columns (±A, ±iA) per atom.
    let mut rhs = Vec::with_capacity(2 * m * n);
    for z in x.entries() {
        rhs.push(z.re);
    }
    for z in x.entries() {
        rhs.push(z.im);
    }
    let mut pool: Vec<(Vec<Complex>, Vec<Complex>)> = Vec::new();
    for atom in seeds {
        pool.push((atom.s.to_complex(), atom.t.to_complex()));
    }
    let fourier = |dim: usize, k: usize| -> Vec<Complex> {
        (0..dim)
            .map(|i| {
                let th = 2.0 * core::f64::consts::PI * (k * i) as f64 / dim as f64;
                Complex64::new(th.cos(), th.sin())
            })
            .collect()
    };
    for k in 0..m {
        for l in 0..n {
            pool.push((fourier(m, k), fourier(n, l)));
        }
    }
    // 16 phase directions per atom: the LP cost Σw_p then tracks the true
    // coefficient modulus within sec(π/16) ≈ 1.02, so the simplex prefers
    // concentrated mixtures over spread ties (the 4-direction version has
    // degenerate optima with Σ|c_k| up to √2 times the gauge).
    const PHASES: usize = 16;
    let mults: Vec<Complex> = (0..PHASES)
        .map(|p| {
            let th = 2.0 * core::f64::consts::PI * p as f64 / PHASES as f64;
            Complex64::new(th.cos(), th.sin())
        })
        .collect();
    let mut columns = Vec::with_capacity(PHASES * pool.len());
    let mut cost = Vec::with_capacity(PHASES * pool.len());
    for (s, t) in &pool {
        let a = DenseMatrix::outer(s, t);
        for mult in &mults {
            let sa = a.scale(*mult);
            let mut col = Vec::with_capacity(2 * m * n);
            for z in sa.entries() {
                col.push(z.re);
            }
            for z in sa.entries() {
                col.push(z.im);
            }
            columns.push(col);
            cost.push(1.0);
        }
    }
    let lp = solve_min_cost(&columns, &cost, &rhs)?;
    if lp.residual > 1e-7 {
        return Err(Error::NonConvergence(String::from(
            "V-mixture LP could not reconstruct X",
        )));
    }
    let mut atoms = Vec::new();
    for (k, (s, t)) in pool.iter().enumerate() {
        let mut coeff = Complex64::new(0.0, 0.0);
        for (p, mult) in mults.iter().enumerate() {
            coeff += mult * lp.x[PHASES * k + p];
        }
        if coeff.norm() > 1e-12 {
            atoms.push(VAtom {
                coeff: coeff * phase(s[0]) * phase(t[0]),
                s: TorusVector::from_complex(s),
                t: TorusVector::from_complex(t),
            });
        }
    }
    Ok(AtomMixtureV { atoms })
}

/// One-sided (and exploratory two-sided) feasibility of Q ∈ αR_n − PSD.
#[derive(Clone, Debug)]
pub struct AlphaFeasibility {
    pub feasible: bool,
    pub min_eig_achieved: f64,
    /// Two-sided variant: min_eig of the follow-up R_n-membership attempt
    /// for P/(α−1), recorded but never asserted.
    pub two_sided_min_eig: Option<f64>,
}

pub fn alpha_feasibility(
    q: &DenseMatrix,
    alpha: f64,
    two_sided: bool,
    budget: &Budget,
    tol: &Tolerances,
) -> Result<AlphaFeasibility> {
    let geo = decompose_geo(q, alpha, budget, tol)?;
    let two = if two_sided && alpha > 1.0 {
        let n = q.rows();
        let mut next = geo.p.scale_real(1.0 / (alpha - 1.0));
        for i in 0..n {
            let d = next[(i, i)].re;
            let s = if d > 1e-12 { 1.0 / d.sqrt() } else { 0.0 };
            for j in 0..n {
                next[(i, j)] *= s;
                let nji = next[(j, i)] * s;
                next[(j, i)] = nji;
            }
            next[(i, i)] = Complex64::new(1.0, 0.0);
        }
        // α = 1 probes whether the remainder itself sits in R_n.
        decompose_geo(&next.symmetrize(), 1.0, budget, tol)
            .ok()
            .map(|g| g.min_eig_achieved)
    } else {
        None
    };
    Ok(AlphaFeasibility {
        feasible: geo.success,
        min_eig_achieved: geo.min_eig_achieved,
        two_sided_min_eig: two,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn random_elliptope(seed: u64, n: usize, k: usize) -> DenseMatrix {
        // Gram of random unit columns.
        let mut rng = SplitMix64::new(seed);
        let mut f = DenseMatrix::zeros(k, n);
        for j in 0..n {
            let mut col: Vec<Complex> = (0..k)
                .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
                .collect();
            let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for (i, z) in col.iter_mut().enumerate() {
                f[(i, j)] = *z / norm;
            }
        }
        f.gram().symmetrize()
    }

    #[test]
    fn identity_mixture_is_exact() {
        for n in 1..5 {
            let r = RAtomMixture::identity(n).implied_matrix(n);
            assert!(r.sub(&DenseMatrix::identity(n)).hs_norm() < 1e-12);
        }
    }

    #[test]
    fn decompose_identity_alpha_one() {
        let q = DenseMatrix::identity(3);
        let d = decompose_geo(&q, 1.0, &Budget::default(), &tols()).unwrap();
        assert!(d.success, "min_eig {}", d.min_eig_achieved);
        assert!(d.p.hs_norm() < 1e-6);
    }

    #[test]
    fn decompose_atom_alpha_one() {
        let u = TorusVector::from_phases(&[0.0, 1.1, 2.3, 4.0]);
        let q = atom_matrix(&u).symmetrize();
        let d = decompose_geo(&q, 1.0, &Budget::default(), &tols()).unwrap();
        assert!(d.success, "min_eig {}", d.min_eig_achieved);
        assert!(d.p.hs_norm() < 1e-3);
    }

    #[test]
    fn decompose_random_elliptope() {
        let q = random_elliptope(3, 4, 4);
        let mut budget = Budget::default();
        budget.fw_max_iters = 5000;
        let d = decompose_geo(&q, 1.35, &budget, &tols()).unwrap();
        assert!(d.min_eig_achieved >= -1e-3, "{}", d.min_eig_achieved);
        // Reconstruction and mixture sanity.
        let n = 4;
        let rec = d.r.implied_matrix(n).scale_real(1.35).sub(&d.p);
        assert!(rec.sub(&q).hs_norm() < 2e-3 * (1.0 + q.hs_norm()));
        let wsum: f64 = d.r.weights.iter().sum();
        assert!((wsum - 1.0).abs() < 1e-12);
        let r = d.r.implied_matrix(n);
        for i in 0..n {
            assert!((r[(i, i)].re - 1.0).abs() < 1e-9);
        }
        assert!(crate::linalg::min_eigenvalue(&r).unwrap() > -1e-9);
    }

    #[test]
    fn oracle_beats_random_probes() {
        let mut rng = SplitMix64::new(7);
        let n = 5;
        let v: Vec<Complex> = (0..n)
            .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
            .collect();
        let best: f64 = v.iter().map(|z| z.norm()).sum::<f64>().powi(2);
        for _ in 0..1000 {
            let u: Vec<Complex> = (0..n)
                .map(|_| {
                    let a = rng.angle();
                    Complex64::new(a.cos(), a.sin())
                })
                .collect();
            let s: Complex = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!(s.norm_sqr() <= best + 1e-9);
        }
    }

    #[test]
    fn geo2_identity_and_atom() {
        let tol = tols();
        let q = DenseMatrix::identity(2);
        let d = decompose_geo2(&q, K_LITTLE, 8, &Budget::default(), &tol).unwrap();
        assert!(d.residual < 1e-6, "residual {}", d.residual);
        let u = TorusVector::from_phases(&[0.0, 2.0, 4.5]);
        let q = atom_matrix(&u).symmetrize();
        let d = decompose_geo2(&q, 1.35, 30, &Budget::default(), &tol).unwrap();
        assert!(d.residual < 1e-3, "residual {}", d.residual);
    }

    #[test]
    fn geo2_random_elliptope() {
        let q = random_elliptope(11, 3, 3);
        let mut budget = Budget::default();
        budget.fw_max_iters = 3000;
        let d = decompose_geo2(&q, 1.35, 40, &budget, &tols()).unwrap();
        assert!(d.failure_depth.is_none(), "failed at {:?}", d.failure_depth);
        assert!(d.residual <= 1e-3, "residual {}", d.residual);
    }

    #[test]
    fn v_membership_unimodular_atom() {
        let s = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let t = [Complex64::new(0.6, 0.8), Complex64::new(-1.0, 0.0)];
        let x = DenseMatrix::outer(&s, &t); // ‖X‖_S = 1 for unimodular atoms
        let v = v_membership(&x, K_LITTLE, 25, &Budget::default(), &tols()).unwrap();
        assert!(v.residual < 1e-7, "residual {}", v.residual);
        assert!(v.rho <= 1.0 + 1e-6, "rho {}", v.rho);
    }

    #[test]
    fn v_membership_matrix_unit() {
        let x = DenseMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let v = v_membership(&x, K_LITTLE, 25, &Budget::default(), &tols()).unwrap();
        assert!(v.rho <= 1.01, "rho {}", v.rho);
        assert!(v.residual < 1e-7);
    }

    #[test]
    fn v_membership_random() {
        let mut rng = SplitMix64::new(29);
        let mut x = DenseMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                x[(i, j)] = Complex64::new(rng.standard_normal(), rng.standard_normal());
            }
        }
        let tol = tols();
        let s = crate::sdp::solve_two_sided_scaling(&x, crate::sdp::ScalingMode::Cbb, &tol);
        let _ = s;
        let snorm = crate::sdp::solve_two_sided_scaling(
            &x,
            crate::sdp::ScalingMode::Schur,
            &tol,
        )
        .unwrap()
        .primal_value;
        let xn = x.scale_real(1.0 / snorm);
        let mut budget = Budget::default();
        budget.fw_max_iters = 3000;
        let v = v_membership(&xn, K_LITTLE, 30, &budget, &tol).unwrap();
        assert!(v.rho <= 1.762, "rho {}", v.rho);
        assert!(v.residual <= 1e-3, "residual {}", v.residual);
    }

    #[test]
    fn alpha_feasibility_identity() {
        let q = DenseMatrix::identity(4);
        for alpha in [1.0, 1.2, 2.0] {
            let r = alpha_feasibility(&q, alpha, false, &Budget::default(), &tols()).unwrap();
            assert!(r.feasible);
        }
        let r = alpha_feasibility(&q, 1.3, true, &Budget::default(), &tols()).unwrap();
        assert!(r.two_sided_min_eig.is_some());
    }

    #[test]
    fn rejects_non_elliptope() {
        let bad = DenseMatrix::from_real(2, 2, &[1.0, 3.0, 3.0, 1.0]).unwrap();
        assert!(decompose_geo(&bad, 1.5, &Budget::default(), &tols()).is_err());
        let bad_diag = DenseMatrix::from_real(2, 2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(decompose_geo(&bad_diag, 1.5, &Budget::default(), &tols()).is_err());
    }
}
