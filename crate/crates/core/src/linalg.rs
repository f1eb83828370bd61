//! Dense complex kernels: cyclic Jacobi Hermitian eigendecomposition,
//! one-sided Jacobi SVD, polar decomposition, PSD square root and the
//! Cholesky helpers the SDP engine builds on. Sizes up to ~200.

use alloc::{format, vec, vec::Vec};
#[allow(unused_imports)]
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mat::{Complex, DenseMatrix};
use crate::Tolerances;

/// Eigenvalues ascending, eigenvectors as orthonormal columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

/// Thin SVD X = U Σ V*. Columns of U belonging to zero singular values are
/// zero (minimal partial isometry convention).
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
}

/// B = W P with P = (B*B)^{1/2} PSD and W the minimal partial isometry.
#[derive(Clone, Debug)]
pub struct PolarDecomposition {
    pub w: DenseMatrix,
    pub p: DenseMatrix,
}

fn rotation(app: f64, aqq: f64, apq: Complex) -> (f64, f64, Complex) {
    // Unitary (c, s, e) zeroing the (p,q) entry of [[app, apq], [conj, aqq]]:
    // columns u_p = (c, -s*conj(e)), u_q = (s*e, c).
    let beta = apq.norm();
    let e = apq / beta;
    let tau = (aqq - app) / (2.0 * beta);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, e)
}

fn off_diag_hs(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Deterministic phase convention: each eigenvector's first coordinate of
/// magnitude above 1e-12 is made real nonnegative.
pub fn hermitian_eig(a: &DenseMatrix) -> Result<HermitianEig> {
    hermitian_eig_tol(a, &Tolerances::default())
}

pub fn hermitian_eig_tol(a: &DenseMatrix, tol: &Tolerances) -> Result<HermitianEig> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "hermitian_eig needs square input, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let scale = a.hs_norm();
    if a.asymmetry() > tol.hermitian_reject * (1.0 + scale) {
        return Err(Error::Domain("matrix is not Hermitian".into()));
    }
    let n = a.rows();
    let mut m = a.symmetrize();
    let mut v = DenseMatrix::identity(n);
    let stop = tol.jacobi_off * (1.0 + scale);
    for _sweep in 0..100 {
        if off_diag_hs(&m) <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.norm() <= stop / (n as f64) * 1e-2 {
                    continue;
                }
                let (c, s, e) = rotation(m[(p, p)].re, m[(q, q)].re, apq);
                let se = s * e;
                let sec = Complex::new(s, 0.0) * e.conj();
                // M <- U* M U, acting on columns p,q then rows p,q.
                for k in 0..n {
                    let (kp, kq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = kp * c - kq * sec;
                    m[(k, q)] = kp * se + kq * c;
                }
                for k in 0..n {
                    let (pk, qk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = pk * c - qk * se;
                    m[(q, k)] = pk * sec + qk * c;
                }
                m[(p, q)] = Complex::new(0.0, 0.0);
                m[(q, p)] = Complex::new(0.0, 0.0);
                for k in 0..n {
                    let (kp, kq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = kp * c - kq * sec;
                    v[(k, q)] = kp * se + kq * c;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (jnew, &jold) in order.iter().enumerate() {
        // phase convention
        let mut phase = Complex::new(1.0, 0.0);
        for k in 0..n {
            let z = v[(k, jold)];
            if z.norm() > 1e-12 {
                phase = (z / z.norm()).conj();
                break;
            }
        }
        for k in 0..n {
            vectors[(k, jnew)] = v[(k, jold)] * phase;
        }
    }
    Ok(HermitianEig { values, vectors })
}

/// One-sided Jacobi SVD.
pub fn svd(x: &DenseMatrix) -> Result<Svd> {
    if x.rows() < x.cols() {
        let s = svd(&x.adjoint())?;
        return Ok(Svd {
            u: s.v,
            sigma: s.sigma,
            v: s.u,
        });
    }
    let (m, n) = (x.rows(), x.cols());
    let mut b = x.clone();
    let mut v = DenseMatrix::identity(n);
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = Complex::new(0.0, 0.0);
                for k in 0..m {
                    app += b[(k, p)].norm_sqr();
                    aqq += b[(k, q)].norm_sqr();
                    apq += b[(k, p)].conj() * b[(k, q)];
                }
                if apq.norm() <= 1e-300 + 1e-15 * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s, e) = rotation(app, aqq, apq);
                let se = s * e;
                let sec = Complex::new(s, 0.0) * e.conj();
                for k in 0..m {
                    let (kp, kq) = (b[(k, p)], b[(k, q)]);
                    b[(k, p)] = kp * c - kq * sec;
                    b[(k, q)] = kp * se + kq * c;
                }
                for k in 0..n {
                    let (kp, kq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = kp * c - kq * sec;
                    v[(k, q)] = kp * se + kq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|k| b[(k, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let scale = x.hs_norm();
    let mut u = DenseMatrix::zeros(m, n);
    let mut vv = DenseMatrix::zeros(n, n);
    let mut sigma = vec![0.0; n];
    for (jnew, &jold) in order.iter().enumerate() {
        let s = norms[jold];
        sigma[jnew] = s;
        if s > 1e-14 * (1.0 + scale) {
            for k in 0..m {
                u[(k, jnew)] = b[(k, jold)] / s;
            }
        } else {
            sigma[jnew] = 0.0;
        }
        for k in 0..n {
            vv[(k, jnew)] = v[(k, jold)];
        }
    }
    Ok(Svd { u, sigma, v: vv })
}

/// Operator norm ‖X‖_∞ (largest singular value).
pub fn operator_norm(x: &DenseMatrix) -> f64 {
    svd(x).map(|s| s.sigma.first().copied().unwrap_or(0.0)).unwrap_or(0.0)
}

/// Polar decomposition of a square matrix.
pub fn polar(b: &DenseMatrix) -> Result<PolarDecomposition> {
    if !b.is_square() {
        return Err(Error::Dimension(format!(
            "polar needs square input, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    polar_rect(b)
}

/// Polar decomposition B = W P for general m×n B; P is n×n.
pub fn polar_rect(b: &DenseMatrix) -> Result<PolarDecomposition> {
    let s = svd(b)?;
    let w = s.u.mul(&s.v.adjoint());
    let p = s.v.mul(&DenseMatrix::diag_real(&s.sigma)).mul(&s.v.adjoint());
    Ok(PolarDecomposition {
        w,
        p: p.symmetrize(),
    })
}

/// PSD square root with eigenvalue clamping per the shared tolerance policy.
pub fn psd_sqrt(p: &DenseMatrix) -> Result<DenseMatrix> {
    psd_sqrt_tol(p, &Tolerances::default())
}

pub fn psd_sqrt_tol(p: &DenseMatrix, tol: &Tolerances) -> Result<DenseMatrix> {
    let eig = hermitian_eig_tol(p, tol)?;
    let lmax = eig.values.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    let floor = -tol.psd_reject * (1.0 + lmax);
    let mut roots = Vec::with_capacity(eig.values.len());
    for &l in &eig.values {
        if l < floor {
            return Err(Error::Domain(format!("matrix is not PSD: eigenvalue {l}")));
        }
        roots.push(l.max(0.0).sqrt());
    }
    let d = DenseMatrix::diag_real(&roots);
    Ok(eig.vectors.mul(&d).mul(&eig.vectors.adjoint()).symmetrize())
}

/// Clamp a Hermitian matrix to the PSD cone (negative eigenvalues to zero).
pub fn psd_clamp(a: &DenseMatrix) -> Result<DenseMatrix> {
    let eig = hermitian_eig(a)?;
    let vals: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0)).collect();
    let d = DenseMatrix::diag_real(&vals);
    Ok(eig.vectors.mul(&d).mul(&eig.vectors.adjoint()).symmetrize())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &DenseMatrix) -> Result<f64> {
    Ok(hermitian_eig(a)?.values[0])
}

/// Determinant of a Hermitian matrix as the product of its eigenvalues.
pub fn hermitian_det(a: &DenseMatrix) -> Result<f64> {
    Ok(hermitian_eig(a)?.values.iter().product())
}

/// Cholesky factor L (lower) with A = L L*. Fails if A is not positive
/// definite; this is the strict-feasibility test inside the SDP engine.
pub fn cholesky(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::Dimension("cholesky needs square input".into()));
    }
    let mut l = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[(i, j)];
            for k in 0..j {
                sum -= l[(i, k)] * l[(j, k)].conj();
            }
            if i == j {
                let d = sum.re;
                if d <= 0.0 || !d.is_finite() {
                    return Err(Error::Domain("not positive definite".into()));
                }
                l[(i, i)] = Complex::new(d.sqrt(), 0.0);
            } else {
                l[(i, j)] = sum / l[(j, j)].re;
            }
        }
    }
    Ok(l)
}

/// Inverse of a Hermitian positive definite matrix via Cholesky.
pub fn hpd_inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.rows();
    let l = cholesky(a)?;
    // Solve L Y = I, then L* X = Y.
    let mut y = DenseMatrix::identity(n);
    for col in 0..n {
        for i in 0..n {
            let mut sum = y[(i, col)];
            for k in 0..i {
                sum -= l[(i, k)] * y[(k, col)];
            }
            y[(i, col)] = sum / l[(i, i)].re;
        }
        for i in (0..n).rev() {
            let mut sum = y[(i, col)];
            for k in (i + 1)..n {
                sum -= l[(k, i)].conj() * y[(k, col)];
            }
            y[(i, col)] = sum / l[(i, i)].re;
        }
    }
    Ok(y.symmetrize())
}

/// Solve the real symmetric positive definite system H x = g in place.
pub fn real_spd_solve(h: &mut [f64], g: &mut [f64], n: usize) -> Result<()> {
    // In-place lower Cholesky of the row-major n×n matrix.
    for i in 0..n {
        for j in 0..=i {
            let mut sum = h[i * n + j];
            for k in 0..j {
                sum -= h[i * n + k] * h[j * n + k];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return Err(Error::NonConvergence("Newton system not SPD".into()));
                }
                h[i * n + i] = sum.sqrt();
            } else {
                h[i * n + j] = sum / h[j * n + j];
            }
        }
    }
    for i in 0..n {
        let mut sum = g[i];
        for k in 0..i {
            sum -= h[i * n + k] * g[k];
        }
        g[i] = sum / h[i * n + i];
    }
    for i in (0..n).rev() {
        let mut sum = g[i];
        for k in (i + 1)..n {
            sum -= h[k * n + i] * g[k];
        }
        g[i] = sum / h[i * n + i];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_matrix(rng: &mut SplitMix64, m: usize, n: usize) -> DenseMatrix {
        let mut x = DenseMatrix::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                x[(i, j)] = Complex::new(rng.standard_normal(), rng.standard_normal());
            }
        }
        x
    }

    fn random_unitary(rng: &mut SplitMix64, n: usize) -> DenseMatrix {
        let x = random_matrix(rng, n, n);
        let g = x.gram();
        let eig = hermitian_eig(&g).unwrap();
        // columns of the Gram eigenbasis are orthonormal
        let _ = eig.values;
        eig.vectors
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = hermitian_eig(&DenseMatrix::identity(3)).unwrap();
        for &l in &eig.values {
            assert!((l - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn swap_matrix_eigenvalues() {
        let a = DenseMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let eig = hermitian_eig(&a).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-12);
        assert!((eig.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn known_spectrum_recovered() {
        let mut rng = SplitMix64::new(7);
        let v = random_unitary(&mut rng, 3);
        let d = DenseMatrix::diag_real(&[1.0, 2.0, 5.0]);
        let a = v.mul(&d).mul(&v.adjoint()).symmetrize();
        let eig = hermitian_eig(&a).unwrap();
        for (got, want) in eig.values.iter().zip([1.0, 2.0, 5.0]) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
        // reconstruction invariant
        let recon = eig
            .vectors
            .mul(&DenseMatrix::diag_real(&eig.values))
            .mul(&eig.vectors.adjoint());
        assert!(a.sub(&recon).hs_norm() <= 1e-10 * (1.0 + a.hs_norm()));
        let vtv = eig.vectors.adjoint().mul(&eig.vectors);
        assert!(vtv.sub(&DenseMatrix::identity(3)).hs_norm() < 1e-10);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let a = DenseMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eig(&a), Err(Error::Domain(_))));
    }

    #[test]
    fn svd_diag() {
        let x = DenseMatrix::from_real(2, 2, &[3.0, 0.0, 0.0, -4.0]).unwrap();
        let s = svd(&x).unwrap();
        assert!((s.sigma[0] - 4.0).abs() < 1e-12);
        assert!((s.sigma[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn svd_rank_one() {
        let a = [Complex::new(1.0, 2.0), Complex::new(0.0, -1.0)];
        let b = [Complex::new(2.0, 0.0), Complex::new(1.0, 1.0)];
        let x = DenseMatrix::outer(&a, &b);
        let s = svd(&x).unwrap();
        let want = crate::mat::vec_l2(&a) * crate::mat::vec_l2(&b);
        assert!((s.sigma[0] - want).abs() < 1e-12);
        assert!(s.sigma[1].abs() < 1e-12);
    }

    #[test]
    fn svd_reconstruction() {
        let mut rng = SplitMix64::new(11);
        let x = random_matrix(&mut rng, 4, 3);
        let s = svd(&x).unwrap();
        let recon = s.u.mul(&DenseMatrix::diag_real(&s.sigma)).mul(&s.v.adjoint());
        assert!(x.sub(&recon).hs_norm() <= 1e-10 * (1.0 + x.hs_norm()));
    }

    #[test]
    fn polar_identity_and_sign() {
        let p = polar(&DenseMatrix::identity(2)).unwrap();
        assert!(p.w.sub(&DenseMatrix::identity(2)).hs_norm() < 1e-12);
        let neg = DenseMatrix::from_real(1, 1, &[-2.0]).unwrap();
        let p = polar(&neg).unwrap();
        assert!((p.w[(0, 0)].re + 1.0).abs() < 1e-12);
        assert!((p.p[(0, 0)].re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn polar_reconstructs_random() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..100 {
            let b = random_matrix(&mut rng, 5, 5);
            let pd = polar(&b).unwrap();
            assert!(pd.w.mul(&pd.p).sub(&b).hs_norm() <= 1e-9 * (1.0 + b.hs_norm()));
        }
    }

    #[test]
    fn polar_rejects_rectangular() {
        let mut rng = SplitMix64::new(5);
        let b = random_matrix(&mut rng, 2, 3);
        assert!(matches!(polar(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn sqrt_diag() {
        let p = DenseMatrix::from_real(2, 2, &[4.0, 0.0, 0.0, 9.0]).unwrap();
        let s = psd_sqrt(&p).unwrap();
        assert!((s[(0, 0)].re - 2.0).abs() < 1e-12);
        assert!((s[(1, 1)].re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_of_gram_squares_back() {
        let mut rng = SplitMix64::new(17);
        let g = random_matrix(&mut rng, 4, 4).gram();
        let s = psd_sqrt(&g).unwrap();
        assert!(s.mul(&s).sub(&g).hs_norm() <= 1e-9 * (1.0 + g.hs_norm()));
    }

    #[test]
    fn sqrt_rejects_negative() {
        let p = DenseMatrix::from_real(1, 1, &[-1.0]).unwrap();
        assert!(matches!(psd_sqrt(&p), Err(Error::Domain(_))));
    }

    #[test]
    fn max_eig_matches_operator_norm() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 4, 4).symmetrize();
            let eig = hermitian_eig(&a).unwrap();
            let lmax = eig.values.iter().fold(0.0_f64, |m, &l| m.max(l.abs()));
            assert!((lmax - operator_norm(&a)).abs() <= 1e-9 * (1.0 + lmax));
        }
    }

    #[test]
    fn hpd_inverse_roundtrip() {
        let mut rng = SplitMix64::new(29);
        let a = random_matrix(&mut rng, 4, 4)
            .gram()
            .add(&DenseMatrix::identity(4));
        let inv = hpd_inverse(&a).unwrap();
        assert!(a.mul(&inv).sub(&DenseMatrix::identity(4)).hs_norm() < 1e-10);
    }
}
