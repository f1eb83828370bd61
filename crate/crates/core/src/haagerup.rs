//! The §-style scaled-norm construction end-to-end: optimal phase vector u,
//! state masses λ, the scaling vector ξ, the contraction Z with ‖Z‖_∞ ≤ √2,
//! nonnegative-matrix closed forms, the trace/cbB bound chain, and the
//! eigenpair / determinant-locus checks.

use alloc::{string::String, vec::Vec};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fact::cbb_factorization;
use crate::linalg::hermitian_eig;
use crate::mat::{Complex, DenseMatrix};
use crate::rng::SplitMix64;
use crate::sdp::{solve_two_sided_scaling, ScalingMode};
use crate::torus::{max_quadratic_torus, BracketStatus, Budget, NormBracket, TorusVector};
use crate::Tolerances;

/// Output of the construction. λ sums to the F-norm lower bracket squared;
/// ξ_j = √λ_j / ‖X‖_F; Z = X·Δ(u)·Δ(ξ)⁻ is a √2-contraction at the true
/// maximizer u.
#[derive(Clone, Debug)]
pub struct HaagerupData {
    pub u: TorusVector,
    pub lambda: Vec<f64>,
    pub xi: Vec<f64>,
    pub z: DenseMatrix,
    pub f_norm_bracket: NormBracket,
}

impl HaagerupData {
    /// Whether u is exhaustively certified (grid or nonnegative input).
    pub fn certified(&self) -> bool {
        self.f_norm_bracket.status == BracketStatus::Certified
    }
}

fn is_nonnegative(x: &DenseMatrix) -> bool {
    x.entries().iter().all(|z| z.im == 0.0 && z.re >= 0.0)
}

/// λ = Δ(u)*·X*X·Δ(u)·Ω for a given phase vector u.
fn lambda_of(x: &DenseMatrix, u: &TorusVector) -> Vec<f64> {
    let p = x.gram();
    let uc = u.to_complex();
    let n = x.cols();
    (0..n)
        .map(|j| {
            let mut s = Complex64::new(0.0, 0.0);
            for t in 0..n {
                s += uc[j].conj() * p[(j, t)] * uc[t];
            }
            s.re
        })
        .collect()
}

/// Run the construction: u maximizes Ω*Δ(u)*X*XΔ(u)Ω over the torus (the
/// F-norm square), λ reads off the column masses at u, ξ_j = √λ_j/‖X‖_F and
/// Z = X·Δ(u)·Δ(ξ)⁻. For nonnegative X the all-ones u is optimal and is used
/// exactly.
pub fn haagerup_construction(
    x: &DenseMatrix,
    budget: &Budget,
    tol: &Tolerances,
) -> Result<HaagerupData> {
    let scale = x.hs_norm();
    if scale == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let xn = x.scale_real(1.0 / scale);
    let n = xn.cols();
    let (u, bracket) = if is_nonnegative(x) {
        // The optimal phase vector is the unit: evaluate the closed form.
        let u = TorusVector::ones(n);
        let f2 = lambda_of(&xn, &u).iter().sum::<f64>();
        (
            u,
            NormBracket {
                lower: f2,
                upper: f2,
                status: BracketStatus::Certified,
            },
        )
    } else {
        let q = max_quadratic_torus(&xn.gram(), budget, tol)?;
        (q.witness, q.bracket)
    };
    let lambda_n = lambda_of(&xn, &u);
    let f_lower = bracket.lower.max(0.0).sqrt();
    let xi: Vec<f64> = lambda_n
        .iter()
        .map(|&l| l.max(0.0).sqrt() / f_lower.max(1e-300))
        .collect();
    let xi_inv = DenseMatrix::diag_pseudo_inv(&xi, 1e-12);
    // Z is taken at ‖X‖_F = 1 normalization, where eq. (3) gives ‖Z‖ ≤ √2.
    let z = xn
        .scale_real(1.0 / f_lower.max(1e-300))
        .mul(&DenseMatrix::diag(&u.to_complex()))
        .mul(&xi_inv);
    // Rescale back: λ scales with ‖X‖²; ξ and Z are scale-invariant.
    let lambda: Vec<f64> = lambda_n.iter().map(|&l| l * scale * scale).collect();
    Ok(HaagerupData {
        u,
        lambda,
        xi,
        z,
        f_norm_bracket: NormBracket {
            lower: bracket.lower.max(0.0).sqrt() * scale,
            upper: bracket.upper.max(0.0).sqrt() * scale,
            status: bracket.status,
        },
    })
}

/// Monte-Carlo verification of the two quadratic inequalities at the
/// maximizer: for real a, ‖XΔ(u)Δ(a)Ω‖₂² ≤ ‖X‖_F²·‖Δ(a)ξ‖₂², and for
/// complex a the same with an extra factor 2.
#[derive(Clone, Debug)]
pub struct InequalityReport {
    pub skipped: bool,
    pub samples: usize,
    pub violations: usize,
    pub max_slack_real: f64,
    pub max_slack_complex: f64,
}

pub fn verify_haagerup_inequalities(
    x: &DenseMatrix,
    data: &HaagerupData,
    sample_count: usize,
    seed: u64,
) -> InequalityReport {
    if !data.certified() {
        return InequalityReport {
            skipped: true,
            samples: 0,
            violations: 0,
            max_slack_real: 0.0,
            max_slack_complex: 0.0,
        };
    }
    let n = x.cols();
    let f2 = data.f_norm_bracket.lower * data.f_norm_bracket.lower;
    let xdu = x.mul(&DenseMatrix::diag(&data.u.to_complex()));
    let mut violations = 0usize;
    let mut max_r = f64::NEG_INFINITY;
    let mut max_c = f64::NEG_INFINITY;
    let tol = 1e-9 * (1.0 + f2);
    for k in 0..sample_count {
        let mut rng = SplitMix64::substream(seed, k as u64);
        // Real sample.
        let a: Vec<Complex> = (0..n)
            .map(|_| Complex64::new(rng.standard_normal(), 0.0))
            .collect();
        let lhs = vec_norm_sqr(&xdu.mul_vec(&a));
        let rhs = f2 * weighted_norm_sqr(&a, &data.xi);
        let slack = lhs - rhs;
        max_r = max_r.max(slack);
        if slack > tol * (1.0 + rhs) {
            violations += 1;
        }
        // Complex sample.
        let a: Vec<Complex> = (0..n)
            .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
            .collect();
        let lhs = vec_norm_sqr(&xdu.mul_vec(&a));
        let rhs = 2.0 * f2 * weighted_norm_sqr(&a, &data.xi);
        let slack = lhs - rhs;
        max_c = max_c.max(slack);
        if slack > tol * (1.0 + rhs) {
            violations += 1;
        }
    }
    InequalityReport {
        skipped: false,
        samples: sample_count,
        violations,
        max_slack_real: max_r,
        max_slack_complex: max_c,
    }
}

fn vec_norm_sqr(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn weighted_norm_sqr(a: &[Complex], xi: &[f64]) -> f64 {
    a.iter()
        .zip(xi)
        .map(|(z, w)| z.norm_sqr() * w * w)
        .sum()
}

/// Closed forms for nonnegative matrices: ‖X‖_F = ‖X‖_cbF =
/// √(Σ_i ‖row_i‖₁²) and λ_j = Σ_s Σ_t x_{sj} x_{st}.
#[derive(Clone, Debug)]
pub struct NonnegClosedForms {
    pub f_norm: f64,
    pub cbf_norm: f64,
    pub lambda: Vec<f64>,
}

pub fn nonneg_closed_forms(x: &DenseMatrix) -> Result<NonnegClosedForms> {
    if !is_nonnegative(x) {
        return Err(Error::Domain(String::from(
            "closed forms require a real nonnegative matrix",
        )));
    }
    let rows = x.row_l1_norms();
    let f = rows.iter().map(|r| r * r).sum::<f64>().sqrt();
    let n = x.cols();
    let m = x.rows();
    let lambda: Vec<f64> = (0..n)
        .map(|j| {
            let mut s = 0.0;
            for i in 0..m {
                s += x[(i, j)].re * rows[i];
            }
            s
        })
        .collect();
    Ok(NonnegClosedForms {
        f_norm: f,
        cbf_norm: f,
        lambda,
    })
}

/// The Cor 3.3 chain on P = X*X:
/// Tr(P) ≤ ‖P‖_cbB ≤ Σ_j Σ_s Σ_t |x_sj||x_st| ≤ (Tr diag(P)^{1/2})².
#[derive(Clone, Debug)]
pub struct CbbBoundChain {
    pub trace: f64,
    pub cbb: f64,
    pub middle_sum: f64,
    pub upper: f64,
    pub equality: bool,
}

pub fn cbb_bound_chain(x: &DenseMatrix, tol: &Tolerances) -> Result<CbbBoundChain> {
    if x.hs_norm() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let p = x.gram();
    let n = p.rows();
    let trace = p.trace().re;
    let cbb = solve_two_sided_scaling(&p, ScalingMode::Cbb, tol)?.primal_value;
    let rows = x.row_l1_norms();
    let middle: f64 = (0..n)
        .map(|j| {
            (0..x.rows())
                .map(|s| x[(s, j)].norm() * rows[s])
                .sum::<f64>()
        })
        .sum();
    let upper: f64 = (0..n)
        .map(|j| p[(j, j)].re.max(0.0).sqrt())
        .sum::<f64>()
        .powi(2);
    let equality = is_nonnegative(x) && (cbb - middle).abs() <= 1e-6 * middle;
    Ok(CbbBoundChain {
        trace,
        cbb,
        middle_sum: middle,
        upper,
        equality,
    })
}

/// Eigenpair and determinant-locus checks at the construction's optimum:
/// γ = Δ(u)ξ is an eigenvector of Δ(ξ)⁻X*XΔ(ξ)⁻ scaled data, and both
/// scaled diagonals make det(X*X − D) vanish.
#[derive(Clone, Debug)]
pub struct EigenDetReport {
    pub eigen_residual: f64,
    pub det_f: f64,
    pub det_cbb: f64,
    pub det_scale: f64,
    pub support_degenerate: bool,
}

pub fn eigen_and_determinant_checks(
    x: &DenseMatrix,
    data: &HaagerupData,
    tol: &Tolerances,
) -> Result<EigenDetReport> {
    let p = x.gram();
    let n = p.rows();
    let f2 = data.f_norm_bracket.lower * data.f_norm_bracket.lower;
    let total: f64 = data.lambda.iter().sum();
    let support_degenerate = data.lambda.iter().any(|&l| l <= 1e-12 * total);

    // Eigen check: M = Δ(ξ)⁻ P Δ(ξ)⁻, γ = Δ(u)ξ, residual ‖Mγ − f²γ‖₂.
    let xi_inv = DenseMatrix::diag_pseudo_inv(&data.xi, 1e-12);
    let msc = xi_inv.mul(&p).mul(&xi_inv);
    let uc = data.u.to_complex();
    let gamma: Vec<Complex> = (0..n).map(|j| uc[j] * data.xi[j]).collect();
    let mg = msc.mul_vec(&gamma);
    let eigen_residual = mg
        .iter()
        .zip(&gamma)
        .map(|(a, g)| (a - g * f2).norm_sqr())
        .sum::<f64>()
        .sqrt();

    // Determinant loci: det(P − f²·Δ(λ/Σλ)) and det(P − cbB(P)·Δ(η²)).
    let lam_prob: Vec<f64> = data.lambda.iter().map(|&l| l / total).collect();
    let d1 = DenseMatrix::diag_real(&lam_prob.iter().map(|&l| l * f2).collect::<Vec<_>>());
    let fac = cbb_factorization(&p, tol)?;
    let eta2: Vec<f64> = fac.eta.iter().map(|&e| e * e * fac.cbb).collect();
    let d2 = DenseMatrix::diag_real(&eta2);
    let det_f = hermitian_det_of(&p.sub(&d1))?;
    let det_cbb = hermitian_det_of(&p.sub(&d2))?;
    // Conditioning guard: compare against the product of diagonal magnitudes.
    let det_scale: f64 = (0..n).map(|j| p[(j, j)].re.abs().max(1e-30)).product();
    Ok(EigenDetReport {
        eigen_residual,
        det_f,
        det_cbb,
        det_scale,
        support_degenerate,
    })
}

fn hermitian_det_of(a: &DenseMatrix) -> Result<f64> {
    let eig = hermitian_eig(&a.symmetrize())?;
    Ok(eig.values.iter().product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::operator_norm;
    use crate::sdp::solve_diag_dominance;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn random_nonneg(seed: u64, m: usize, n: usize) -> DenseMatrix {
        let mut rng = SplitMix64::new(seed);
        let mut x = DenseMatrix::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                x[(i, j)] = Complex64::new(rng.uniform(), 0.0);
            }
        }
        x
    }

    #[test]
    fn all_ones_construction() {
        let x = DenseMatrix::from_real(2, 2, &[1.0; 4]).unwrap();
        let d = haagerup_construction(&x, &Budget::default(), &tols()).unwrap();
        assert!(d.certified());
        for &l in &d.lambda {
            assert!((l - 4.0).abs() < 1e-9, "{:?}", d.lambda);
        }
        for &v in &d.xi {
            assert!((v - 1.0 / 2.0_f64.sqrt()).abs() < 1e-9);
        }
        let f = d.f_norm_bracket.lower;
        assert!((f - 8.0_f64.sqrt()).abs() < 1e-9);
        // ‖X·Δ(ξ)⁻‖_∞ = 2√2 = ‖X‖_F for this matrix.
        let zin = x.mul(&DenseMatrix::diag_pseudo_inv(&d.xi, 1e-12));
        assert!((operator_norm(&zin) - f).abs() < 1e-8);
        assert!(operator_norm(&d.z) <= 2.0_f64.sqrt() + 1e-9);
    }

    #[test]
    fn nonneg_diagonal_and_rank_one() {
        let x = DenseMatrix::from_real(3, 3, &[2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.5])
            .unwrap();
        let d = haagerup_construction(&x, &Budget::default(), &tols()).unwrap();
        let want = [4.0, 1.0, 0.25];
        for (a, b) in d.lambda.iter().zip(want) {
            assert!((a - b).abs() < 1e-9);
        }
        let norm = (4.0 + 1.0 + 0.25_f64).sqrt();
        for (j, &v) in d.xi.iter().enumerate() {
            assert!((v - want[j].sqrt() / norm).abs() < 1e-9);
        }
        // rank-one nonnegative: ξ_j = √(ν_j/‖ν‖₁).
        let mu = [Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)];
        let nu = [Complex64::new(3.0, 0.0), Complex64::new(1.0, 0.0)];
        let x = DenseMatrix::outer(&mu, &nu);
        let d = haagerup_construction(&x, &Budget::default(), &tols()).unwrap();
        for (j, &v) in nu.iter().enumerate() {
            assert!((d.xi[j] - (v.re / 4.0).sqrt()).abs() < 1e-9, "{:?}", d.xi);
        }
    }

    #[test]
    fn lambda_identity_and_sum() {
        let x = random_nonneg(5, 4, 5);
        let d = haagerup_construction(&x, &Budget::default(), &tols()).unwrap();
        let want = lambda_of(&x, &d.u);
        for (a, b) in d.lambda.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()));
        }
        let f2 = d.f_norm_bracket.lower * d.f_norm_bracket.lower;
        let total: f64 = d.lambda.iter().sum();
        assert!((total - f2).abs() < 1e-9 * (1.0 + f2));
    }

    #[test]
    fn closed_forms_match_sdp() {
        let x = random_nonneg(7, 5, 4);
        let cf = nonneg_closed_forms(&x).unwrap();
        let sdp = solve_diag_dominance(&x.gram(), &tols())
            .unwrap()
            .primal_value
            .sqrt();
        assert!((cf.cbf_norm - sdp).abs() < 1e-6 * (1.0 + sdp));
        // all-ones and e11 examples.
        let ones = DenseMatrix::from_real(2, 2, &[1.0; 4]).unwrap();
        assert!((nonneg_closed_forms(&ones).unwrap().f_norm - 8.0_f64.sqrt()).abs() < 1e-12);
        let e = DenseMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((nonneg_closed_forms(&e).unwrap().f_norm - 1.0).abs() < 1e-12);
        // negative entry rejected.
        let bad = DenseMatrix::from_real(1, 2, &[1.0, -1.0]).unwrap();
        assert!(nonneg_closed_forms(&bad).is_err());
    }

    #[test]
    fn haagerup_xi_matches_cbf_vector_for_nonneg() {
        let x = random_nonneg(9, 4, 4);
        let d = haagerup_construction(&x, &Budget::default(), &tols()).unwrap();
        let (xi, _) = crate::fact::cbf_vector(&x, &tols()).unwrap();
        for (a, b) in d.xi.iter().zip(&xi) {
            assert!((a - b).abs() < 1e-5, "{:?} vs {:?}", d.xi, xi);
        }
    }

    #[test]
    fn inequalities_hold_for_nonneg() {
        let x = random_nonneg(11, 4, 5);
        let d = haagerup_construction(&x, &Budget::default(), &tols()).unwrap();
        let rep = verify_haagerup_inequalities(&x, &d, 200, 123);
        assert!(!rep.skipped);
        assert_eq!(rep.violations, 0);
    }

    #[test]
    fn inequalities_skip_uncertified() {
        // Complex 6×6 exceeds the default grid limit → heuristic u → skipped.
        let mut rng = SplitMix64::new(13);
        let mut x = DenseMatrix::zeros(6, 6);
        for i in 0..6 {
            for j in 0..6 {
                x[(i, j)] = Complex64::new(rng.standard_normal(), rng.standard_normal());
            }
        }
        let d = haagerup_construction(&x, &Budget::default(), &tols()).unwrap();
        if !d.certified() {
            let rep = verify_haagerup_inequalities(&x, &d, 10, 1);
            assert!(rep.skipped);
        }
    }

    #[test]
    fn bound_chain_identity_and_random() {
        let chain = cbb_bound_chain(&DenseMatrix::identity(3), &tols()).unwrap();
        assert!((chain.trace - 3.0).abs() < 1e-9);
        assert!((chain.upper - 9.0).abs() < 1e-9);
        assert!(chain.trace <= chain.cbb + 1e-8);
        assert!(chain.cbb <= chain.middle_sum + 1e-8 * (1.0 + chain.middle_sum));
        assert!(chain.middle_sum <= chain.upper + 1e-8 * (1.0 + chain.upper));
        // Nonnegative: equality in the middle.
        let x = random_nonneg(15, 4, 4);
        let chain = cbb_bound_chain(&x, &tols()).unwrap();
        assert!(chain.equality, "{:?}", chain);
        // Complex: chain ordering only.
        let mut rng = SplitMix64::new(17);
        let mut x = DenseMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                x[(i, j)] = Complex64::new(rng.standard_normal(), rng.standard_normal());
            }
        }
        let chain = cbb_bound_chain(&x, &tols()).unwrap();
        assert!(chain.trace <= chain.cbb + 1e-8 * (1.0 + chain.cbb));
        assert!(chain.cbb <= chain.middle_sum + 1e-8 * (1.0 + chain.middle_sum));
        assert!(chain.middle_sum <= chain.upper + 1e-8 * (1.0 + chain.upper));
    }

    #[test]
    fn eigen_and_det_checks() {
        // all-ones: residual ~0.
        let x = DenseMatrix::from_real(2, 2, &[1.0; 4]).unwrap();
        let d = haagerup_construction(&x, &Budget::default(), &tols()).unwrap();
        let rep = eigen_and_determinant_checks(&x, &d, &tols()).unwrap();
        assert!(rep.eigen_residual < 1e-10 * (1.0 + 8.0));
        // nonnegative random 4×4.
        let x = random_nonneg(19, 4, 4);
        let d = haagerup_construction(&x, &Budget::default(), &tols()).unwrap();
        let rep = eigen_and_determinant_checks(&x, &d, &tols()).unwrap();
        let f2 = d.f_norm_bracket.lower * d.f_norm_bracket.lower;
        assert!(rep.eigen_residual <= 1e-6 * f2, "{:?}", rep);
        assert!(rep.det_f.abs() <= 1e-6 * rep.det_scale, "{:?}", rep);
        assert!(rep.det_cbb.abs() <= 1e-6 * rep.det_scale, "{:?}", rep);
        // diagonal: determinants exactly zero (within eig noise).
        let x = DenseMatrix::from_real(2, 2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        let d = haagerup_construction(&x, &Budget::default(), &tols()).unwrap();
        let rep = eigen_and_determinant_checks(&x, &d, &tols()).unwrap();
        assert!(rep.det_f.abs() <= 1e-9 * rep.det_scale);
    }

    #[test]
    fn z_contraction_certified_chain() {
        // Small complex matrix within grid certification: the §3 chain
        // F ≤ cbF ≤ ‖XΔ(ξ)⁻‖ ≤ √2·F.
        let mut rng = SplitMix64::new(23);
        let mut x = DenseMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                x[(i, j)] = Complex64::new(rng.standard_normal(), rng.standard_normal());
            }
        }
        let d = haagerup_construction(&x, &Budget::default(), &tols()).unwrap();
        assert!(d.certified());
        let f = d.f_norm_bracket.lower;
        let cbf = solve_diag_dominance(&x.gram(), &tols())
            .unwrap()
            .primal_value
            .sqrt();
        let zval = operator_norm(&x.mul(&DenseMatrix::diag_pseudo_inv(&d.xi, 1e-12)));
        assert!(f <= cbf + 1e-7 * (1.0 + cbf));
        assert!(cbf <= zval + 1e-6 * (1.0 + zval));
        assert!(zval <= 2.0_f64.sqrt() * f + 1e-6 * (1.0 + f));
        assert!(operator_norm(&d.z) <= 2.0_f64.sqrt() + 1e-3);
    }

    #[test]
    fn zero_matrix_rejected() {
        let z = DenseMatrix::zeros(2, 2);
        assert!(haagerup_construction(&z, &Budget::default(), &tols()).is_err());
        assert!(cbb_bound_chain(&z, &tols()).is_err());
    }
}
