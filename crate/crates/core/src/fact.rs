//! Optimal factorizations attached to the scaled norms: the cbB triple
//! (η, B, ξ), the cbF scaling vector, the Schur pair (L, R), the split
//! X = DC with both factors of cbF-norm √cbB, and duality witnesses.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, polar_rect, psd_sqrt_tol};
use crate::mat::DenseMatrix;
use crate::sdp::{
    maximize_over_cbf_ball, solve_diag_dominance, solve_two_sided_scaling, ScalingMode,
};
use crate::Tolerances;

/// X = Δ(η)·B·Δ(ξ) with ‖η‖₂ = ‖ξ‖₂ = 1 and ‖B‖_∞ = ‖X‖_cbB.
#[derive(Clone, Debug)]
pub struct CbBFactorization {
    pub eta: Vec<f64>,
    pub b: DenseMatrix,
    pub xi: Vec<f64>,
    pub cbb: f64,
}

/// X = L*R with max column norms ‖L‖_c·‖R‖_c = ‖X‖_S; L is k×m, R is k×n.
#[derive(Clone, Debug)]
pub struct SchurFactorization {
    pub l: DenseMatrix,
    pub r: DenseMatrix,
    pub s_norm: f64,
}

/// X = D·C with ‖C‖_cbF = ‖D*‖_cbF = √(‖X‖_cbB); W, P from the polar of B.
#[derive(Clone, Debug)]
pub struct FactSplit {
    pub c: DenseMatrix,
    pub d: DenseMatrix,
    pub w: DenseMatrix,
    pub p: DenseMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualityPair {
    /// Y with ‖Y‖_S ≤ 1 and Tr(Y*X) = ‖X‖_cbB.
    CbbS,
    /// Y with ‖Y‖_cbF ≤ 1 and Tr(Y*X) = ‖X‖_T.
    TCbf,
}

fn support_tol(v: &[f64]) -> f64 {
    let top = v.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    1e-14 * (1.0 + top)
}

/// The Thm 4.1 cbB-factorization: η_i = √(a_i/Σa), ξ_j = √(b_j/Σb) from the
/// two-sided scaling SDP, B = Δ(η)⁻·X·Δ(ξ)⁻ with the pseudo-inverse
/// convention (zero stays zero off the support).
pub fn cbb_factorization(x: &DenseMatrix, tol: &Tolerances) -> Result<CbBFactorization> {
    if x.hs_norm() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let sol = solve_two_sided_scaling(x, ScalingMode::Cbb, tol)?;
    let a = &sol.diag_vars[0];
    let b = &sol.diag_vars[1];
    let sa: f64 = a.iter().sum();
    let sb: f64 = b.iter().sum();
    let eta: Vec<f64> = a.iter().map(|&v| (v.max(0.0) / sa).sqrt()).collect();
    let xi: Vec<f64> = b.iter().map(|&v| (v.max(0.0) / sb).sqrt()).collect();
    let mid = DenseMatrix::diag_pseudo_inv(&eta, support_tol(&eta))
        .mul(x)
        .mul(&DenseMatrix::diag_pseudo_inv(&xi, support_tol(&xi)));
    Ok(CbBFactorization {
        eta,
        b: mid,
        xi,
        cbb: sol.primal_value,
    })
}

/// Thm 3.2 cbF scaling: λ from the diagonal-dominance SDP on X*X,
/// ξ_j = √(λ_j/Σλ), Z = X·Δ(ξ)⁻ with ‖Z‖_∞ = ‖X‖_cbF.
pub fn cbf_vector(x: &DenseMatrix, tol: &Tolerances) -> Result<(Vec<f64>, DenseMatrix)> {
    if x.hs_norm() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let sol = solve_diag_dominance(&x.gram(), tol)?;
    let lambda = &sol.diag_vars[0];
    let total: f64 = lambda.iter().sum();
    let xi: Vec<f64> = lambda.iter().map(|&l| (l.max(0.0) / total).sqrt()).collect();
    let z = x.mul(&DenseMatrix::diag_pseudo_inv(&xi, support_tol(&xi)));
    Ok((xi, z))
}

/// Thm 5.6 Schur pair: Gram-decompose the PSD block [[Δ-dominated A, X],
/// [X*, B]] at the Schur-SDP optimum. Rows of the Gram factor give L and R.
pub fn schur_factorization(x: &DenseMatrix, tol: &Tolerances) -> Result<SchurFactorization> {
    if x.hs_norm() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let (m, n) = (x.rows(), x.cols());
    let sol = solve_two_sided_scaling(x, ScalingMode::Schur, tol)?;
    let a = sol.psd_vars[0].clone();
    let b = sol.psd_vars[1].clone();
    // Balance the two corners (congruence by diag(√c·I, I/√c) preserves the
    // LMI) so the max column norms split evenly.
    let amax = (0..m).fold(0.0_f64, |acc, i| acc.max(a[(i, i)].re));
    let bmax = (0..n).fold(0.0_f64, |acc, j| acc.max(b[(j, j)].re));
    let c = (bmax / amax.max(1e-300)).sqrt();
    let mut block = DenseMatrix::zeros(m + n, m + n);
    for i in 0..m {
        for k in 0..m {
            block[(i, k)] = a[(i, k)] * c;
        }
    }
    for j in 0..n {
        for k in 0..n {
            block[(m + j, m + k)] = b[(j, k)] / c;
        }
    }
    for i in 0..m {
        for j in 0..n {
            block[(i, m + j)] = x[(i, j)];
            block[(m + j, i)] = x[(i, j)].conj();
        }
    }
    // Gram factor F with F*F = block; truncate eigenvalues below 1e-10·λmax.
    let eig = hermitian_eig(&block.symmetrize())?;
    let lmax = eig.values.iter().fold(0.0_f64, |acc, &l| acc.max(l));
    let keep: Vec<usize> = (0..eig.values.len())
        .filter(|&k| eig.values[k] > 1e-10 * lmax)
        .collect();
    let kdim = keep.len();
    let mut f = DenseMatrix::zeros(kdim, m + n);
    for (r, &k) in keep.iter().enumerate() {
        let root = eig.values[k].sqrt();
        for cidx in 0..(m + n) {
            f[(r, cidx)] = eig.vectors[(cidx, k)].conj() * root;
        }
    }
    // Global phase per Gram row: make the first column of L real nonnegative.
    for r in 0..kdim {
        let ph = crate::torus::phase(f[(r, 0)]).conj();
        for cidx in 0..(m + n) {
            f[(r, cidx)] *= ph;
        }
    }
    let l = f.block(0, kdim, 0, m);
    let r = f.block(0, kdim, m, m + n);
    Ok(SchurFactorization {
        l,
        r,
        s_norm: sol.primal_value,
    })
}

fn max_col_norm(a: &DenseMatrix) -> f64 {
    (0..a.cols())
        .map(|j| {
            (0..a.rows())
                .map(|i| a[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

impl SchurFactorization {
    /// Product of the max column norms of L and R (equals ‖X‖_S at optimum).
    pub fn column_norm_product(&self) -> f64 {
        max_col_norm(&self.l) * max_col_norm(&self.r)
    }
}

/// Thm 4.1 split X = DC from the cbB factorization and the polar B = W P:
/// C = P^{1/2}·Δ(ξ), D = Δ(η)·W·P^{1/2}.
pub fn fact_split(x: &DenseMatrix, tol: &Tolerances) -> Result<FactSplit> {
    let fac = cbb_factorization(x, tol)?;
    let polar = polar_rect(&fac.b)?;
    let root = psd_sqrt_tol(&polar.p, tol)?;
    let c = root.mul(&DenseMatrix::diag_real(&fac.xi));
    let d = DenseMatrix::diag_real(&fac.eta).mul(&polar.w).mul(&root);
    Ok(FactSplit {
        c,
        d,
        w: polar.w,
        p: polar.p,
    })
}

/// Duality witness Y from the SDP dual multiplier. For cbB-S: ‖Y‖_S ≤ 1 and
/// Tr(Y*X) = ‖X‖_cbB; for T-cbF: ‖Y‖_cbF ≤ 1 and Tr(Y*X) = ‖X‖_T.
pub fn duality_witness(x: &DenseMatrix, pair: DualityPair, tol: &Tolerances) -> Result<DenseMatrix> {
    if x.hs_norm() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let sol = match pair {
        DualityPair::CbbS => solve_two_sided_scaling(x, ScalingMode::Cbb, tol)?,
        DualityPair::TCbf => maximize_over_cbf_ball(x, tol)?,
    };
    sol.witness
        .ok_or_else(|| Error::NonConvergence("SDP returned no witness".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::operator_norm;
        use num_complex::Complex64;
    use crate::mat::{vec_l1, vec_l2, vec_linf};
    use crate::rng::SplitMix64;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn random_matrix(rng: &mut SplitMix64, m: usize, n: usize) -> DenseMatrix {
        let mut x = DenseMatrix::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                x[(i, j)] = Complex64::new(rng.standard_normal(), rng.standard_normal());
            }
        }
        x
    }

    fn reconstruct_cbb(x: &DenseMatrix, f: &CbBFactorization) -> f64 {
        let rec = DenseMatrix::diag_real(&f.eta)
            .mul(&f.b)
            .mul(&DenseMatrix::diag_real(&f.xi));
        rec.sub(x).hs_norm() / x.hs_norm()
    }

    #[test]
    fn cbb_all_ones_rank_one() {
        let x = DenseMatrix::from_real(2, 2, &[1.0; 4]).unwrap();
        let f = cbb_factorization(&x, &tols()).unwrap();
        for v in f.eta.iter().chain(&f.xi) {
            assert!((v - 1.0 / 2.0_f64.sqrt()).abs() < 1e-6, "{:?}", f.eta);
        }
        assert!((operator_norm(&f.b) - 4.0).abs() < 1e-5);
        assert!(reconstruct_cbb(&x, &f) < 1e-7);
    }

    #[test]
    fn cbb_trivial_one_by_one() {
        let x = DenseMatrix::from_real(1, 1, &[3.0]).unwrap();
        let f = cbb_factorization(&x, &tols()).unwrap();
        assert!((f.eta[0] - 1.0).abs() < 1e-9 && (f.xi[0] - 1.0).abs() < 1e-9);
        assert!(f.b.sub(&x).hs_norm() < 1e-7);
    }

    #[test]
    fn cbb_random_invariants() {
        let mut rng = SplitMix64::new(31);
        let x = random_matrix(&mut rng, 4, 3);
        let f = cbb_factorization(&x, &tols()).unwrap();
        assert!(reconstruct_cbb(&x, &f) < 1e-7);
        assert!(
            (operator_norm(&f.b) - f.cbb).abs() <= 1e-6 * (1.0 + f.cbb),
            "op {} vs cbb {}",
            operator_norm(&f.b),
            f.cbb
        );
        assert!((vec_l2(&f.eta.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>()) - 1.0).abs() < 1e-10);
        assert!((vec_l2(&f.xi.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>()) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cbf_vector_rank_one_and_identity() {
        // rank-one: ξ_j = √(|ν_j|/‖ν‖₁).
        let mu = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)];
        let nu = [
            Complex64::new(3.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 0.0),
        ];
        let x = DenseMatrix::outer(&mu, &nu);
        let (xi, z) = cbf_vector(&x, &tols()).unwrap();
        let l1 = vec_l1(&nu);
        for (j, &v) in nu.iter().enumerate() {
            // Entries on the boundary of the SDP face resolve only to about
            // the square root of the duality-gap tolerance.
            assert!(
                (xi[j] - (v.norm() / l1).sqrt()).abs() < 1e-4,
                "xi {:?}",
                xi
            );
        }
        let want = vec_l2(&mu) * vec_l1(&nu);
        assert!((operator_norm(&z) - want).abs() < 1e-5 * (1.0 + want));
        // identity: uniform ξ, ‖Z‖ = √n.
        let (xi, z) = cbf_vector(&DenseMatrix::identity(3), &tols()).unwrap();
        for &v in &xi {
            assert!((v - (1.0 / 3.0_f64).sqrt()).abs() < 1e-6);
        }
        assert!((operator_norm(&z) - 3.0_f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn cbf_vector_is_optimal_among_perturbations() {
        let mut rng = SplitMix64::new(37);
        let x = random_matrix(&mut rng, 3, 3);
        let (xi, z) = cbf_vector(&x, &tols()).unwrap();
        let cbf = operator_norm(&z);
        for _ in 0..20 {
            let mut p: Vec<f64> = xi
                .iter()
                .map(|&v| (v + 0.05 * rng.standard_normal()).abs().max(1e-6))
                .collect();
            let norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            for v in &mut p {
                *v /= norm;
            }
            let zp = x.mul(&DenseMatrix::diag_pseudo_inv(&p, 1e-14));
            assert!(operator_norm(&zp) >= cbf - 1e-6 * (1.0 + cbf));
        }
    }

    #[test]
    fn schur_factorization_cases() {
        // e₁₁: value 1, exact reconstruction.
        let e = DenseMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let f = schur_factorization(&e, &tols()).unwrap();
        assert!((f.s_norm - 1.0).abs() < 1e-6);
        assert!(f.l.adjoint().mul(&f.r).sub(&e).hs_norm() < 1e-6);
        // rank one: product of max column norms = ‖μ‖∞‖ν‖∞.
        let mu = [Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)];
        let nu = [Complex64::new(1.0, 1.0), Complex64::new(0.5, 0.0)];
        let x = DenseMatrix::outer(&mu, &nu);
        let f = schur_factorization(&x, &tols()).unwrap();
        let want = vec_linf(&mu) * vec_linf(&nu);
        assert!(
            (f.column_norm_product() - want).abs() < 1e-5 * (1.0 + want),
            "{} vs {}",
            f.column_norm_product(),
            want
        );
        assert!(f.l.adjoint().mul(&f.r).sub(&x).hs_norm() < 1e-6 * x.hs_norm());
        // random: invariants.
        let mut rng = SplitMix64::new(41);
        let x = random_matrix(&mut rng, 3, 4);
        let f = schur_factorization(&x, &tols()).unwrap();
        assert!(f.l.rows() <= 7);
        assert!(f.l.adjoint().mul(&f.r).sub(&x).hs_norm() < 1e-6 * x.hs_norm());
        assert!(
            (f.column_norm_product() - f.s_norm).abs() < 1e-5 * (1.0 + f.s_norm),
            "{} vs {}",
            f.column_norm_product(),
            f.s_norm
        );
        // phase convention: first column of L real nonnegative.
        for rrow in 0..f.l.rows() {
            assert!(f.l[(rrow, 0)].im.abs() < 1e-10 && f.l[(rrow, 0)].re >= -1e-12);
        }
    }

    #[test]
    fn fact_split_identities() {
        let tol = tols();
        // identity.
        let x = DenseMatrix::identity(2);
        let f = fact_split(&x, &tol).unwrap();
        assert!(f.d.mul(&f.c).sub(&x).hs_norm() < 1e-8);
        // random 4×4: both cbF values equal √cbB.
        let mut rng = SplitMix64::new(43);
        let x = random_matrix(&mut rng, 4, 4);
        let f = fact_split(&x, &tol).unwrap();
        assert!(f.d.mul(&f.c).sub(&x).hs_norm() < 1e-7 * x.hs_norm());
        let cbb = solve_two_sided_scaling(&x, ScalingMode::Cbb, &tol)
            .unwrap()
            .primal_value;
        let cbf_c = solve_diag_dominance(&f.c.gram(), &tol)
            .unwrap()
            .primal_value
            .sqrt();
        let cbf_dstar = solve_diag_dominance(&f.d.adjoint().gram(), &tol)
            .unwrap()
            .primal_value
            .sqrt();
        let want = cbb.sqrt();
        assert!((cbf_c - want).abs() < 1e-5 * (1.0 + want), "{cbf_c} vs {want}");
        assert!(
            (cbf_dstar - want).abs() < 1e-5 * (1.0 + want),
            "{cbf_dstar} vs {want}"
        );
    }

    #[test]
    fn fact_split_rank_one() {
        let mu = [Complex64::new(1.0, 0.0), Complex64::new(0.0, -2.0)];
        let nu = [Complex64::new(2.0, 0.0), Complex64::new(1.0, 1.0)];
        let x = DenseMatrix::outer(&mu, &nu);
        let f = fact_split(&x, &tols()).unwrap();
        let want = (vec_l1(&mu) * vec_l1(&nu)).sqrt();
        let cbf_c = solve_diag_dominance(&f.c.gram(), &tols())
            .unwrap()
            .primal_value
            .sqrt();
        assert!((cbf_c - want).abs() < 1e-5 * (1.0 + want));
    }

    #[test]
    fn duality_witnesses() {
        let mut rng = SplitMix64::new(47);
        let tol = tols();
        let x = random_matrix(&mut rng, 3, 3);
        // cbB-S pair.
        let y = duality_witness(&x, DualityPair::CbbS, &tol).unwrap();
        let s_of_y = solve_two_sided_scaling(&y, ScalingMode::Schur, &tol)
            .unwrap()
            .primal_value;
        assert!(s_of_y <= 1.0 + 1e-7, "S(Y) = {s_of_y}");
        let cbb = solve_two_sided_scaling(&x, ScalingMode::Cbb, &tol)
            .unwrap()
            .primal_value;
        assert!(x.inner_re(&y) >= cbb * (1.0 - 1e-6));
        // T-cbF pair.
        let y = duality_witness(&x, DualityPair::TCbf, &tol).unwrap();
        let cbf_y = solve_diag_dominance(&y.gram(), &tol)
            .unwrap()
            .primal_value
            .sqrt();
        assert!(cbf_y <= 1.0 + 1e-6, "cbF(Y) = {cbf_y}");
        let t = maximize_over_cbf_ball(&x, &tol).unwrap().primal_value;
        assert!(x.inner_re(&y) >= t * (1.0 - 1e-6));
        // e₁₁ gives back e₁₁.
        let e = DenseMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let y = duality_witness(&e, DualityPair::CbbS, &tol).unwrap();
        assert!((y[(0, 0)].re - 1.0).abs() < 1e-5 && y.hs_norm() < 1.0 + 1e-5);
    }

    #[test]
    fn zero_matrix_rejected() {
        let z = DenseMatrix::zeros(2, 2);
        assert!(cbb_factorization(&z, &tols()).is_err());
        assert!(cbf_vector(&z, &tols()).is_err());
        assert!(schur_factorization(&z, &tols()).is_err());
        assert!(duality_witness(&z, DualityPair::CbbS, &tols()).is_err());
    }
}
