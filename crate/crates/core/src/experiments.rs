//! Desk-scale experiments: the block embedding bounding the Grothendieck
//! constant by k/(2−k), constant-ratio scans over random ensembles, and the
//! consolidated inequality suite used for reproducible reports.

use alloc::{format, string::String, vec, vec::Vec};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fact::{cbb_factorization, duality_witness, schur_factorization, DualityPair};
use crate::geometry::{v_membership, K_LITTLE};
use crate::haagerup::cbb_bound_chain;
use crate::linalg::min_eigenvalue;
use crate::mat::{vec_l2, Complex, DenseMatrix};
use crate::norms::{norm, rank_one_closed_forms, NormKind};
use crate::rng::SplitMix64;
use crate::sdp::{solve_diag_dominance, solve_two_sided_scaling, ScalingMode};
use crate::torus::{max_bilinear_torus, max_quadratic_torus, Budget};
use crate::Tolerances;

/// The Thm 4.2 embedding of a cbB-normalized X into a PSD (m+n)-block P
/// with ‖P‖_cbB = 4 and the dual block Q with ‖Q‖_S = 1, Tr(QP) = 4.
#[derive(Clone, Debug)]
pub struct BlockEmbedding {
    pub p: DenseMatrix,
    pub q: DenseMatrix,
    pub x: DenseMatrix,
    pub gamma: Vec<f64>,
}

/// Assemble the embedding. X is internally normalized to ‖X‖_cbB = 1; rows
/// and columns that vanish are rejected (the paper's standing assumption).
pub fn block_embedding(x: &DenseMatrix, tol: &Tolerances) -> Result<BlockEmbedding> {
    let (m, n) = (x.rows(), x.cols());
    for i in 0..m {
        if x.row(i).iter().all(|z| z.norm() == 0.0) {
            return Err(Error::Domain(format!("row {i} of X vanishes")));
        }
    }
    for j in 0..n {
        if (0..m).all(|i| x[(i, j)].norm() == 0.0) {
            return Err(Error::Domain(format!("column {j} of X vanishes")));
        }
    }
    let fac = cbb_factorization(x, tol)?;
    let xn = x.scale_real(1.0 / fac.cbb);
    // P = [[Δ(η)², X],[X*, Δ(ξ)²]]: PSD because X = Δ(η)BΔ(ξ) with ‖B‖ ≤ 1,
    // with ‖P‖_cbB = 4 (λ = 2(η², ξ²) is feasible and Q below certifies it).
    let mut p = DenseMatrix::zeros(m + n, m + n);
    for i in 0..m {
        p[(i, i)] = Complex64::new(fac.eta[i] * fac.eta[i], 0.0);
    }
    for j in 0..n {
        p[(m + j, m + j)] = Complex64::new(fac.xi[j] * fac.xi[j], 0.0);
    }
    for i in 0..m {
        for j in 0..n {
            p[(i, m + j)] = xn[(i, j)];
            p[(m + j, i)] = xn[(i, j)].conj();
        }
    }
    // Q from the Schur factorization of the cbB duality witness Y
    // (‖Y‖_S = 1, Tr(Y*X̃) = 1): Q = [[L*L, L*R],[R*L, R*R]].
    let y = duality_witness(&xn, DualityPair::CbbS, tol)?;
    let sf = schur_factorization(&y, tol)?;
    let k = sf.l.rows();
    let mut f = DenseMatrix::zeros(k, m + n);
    for r in 0..k {
        for c in 0..m {
            f[(r, c)] = sf.l[(r, c)];
        }
        for c in 0..n {
            f[(r, m + c)] = sf.r[(r, c)];
        }
    }
    let q = f.gram().symmetrize();
    let mut gamma = Vec::with_capacity(m + n);
    let s = 1.0 / 2.0_f64.sqrt();
    for &e in &fac.eta {
        gamma.push(s * e);
    }
    for &e in &fac.xi {
        gamma.push(s * e);
    }
    Ok(BlockEmbedding {
        p: p.symmetrize(),
        q,
        x: xn,
        gamma,
    })
}

/// Which inequality family a scan exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanKind {
    /// cbB(P)/B(P) on PSD P; bounded by 4/π.
    Positive,
    /// cbB(X)/B(X) on general X; bounded by our constructive 1.752.
    General,
    /// cbF(X)/F(X); bounded by √(4/π).
    Little,
}

impl ScanKind {
    pub fn parse(s: &str) -> Result<ScanKind> {
        match s {
            "positive" => Ok(ScanKind::Positive),
            "general" => Ok(ScanKind::General),
            "little" => Ok(ScanKind::Little),
            other => Err(Error::UnknownKind(String::from(other))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScanKind::Positive => "positive",
            ScanKind::General => "general",
            ScanKind::Little => "little",
        }
    }
}

/// Random matrix ensembles for the scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ensemble {
    /// Independent complex Gaussian entries.
    Ginibre,
    /// Gram matrix of n random complex unit columns (PSD, elliptope-like).
    GramUnitColumns,
    /// Independent uniform [0,1) entries.
    NonnegUniform,
    /// Rank-one μν^T with Gaussian μ, ν.
    RankOnePlanted,
}

impl Ensemble {
    pub fn parse(s: &str) -> Result<Ensemble> {
        match s {
            "ginibre" => Ok(Ensemble::Ginibre),
            "gram" => Ok(Ensemble::GramUnitColumns),
            "nonneg" => Ok(Ensemble::NonnegUniform),
            "rank_one" => Ok(Ensemble::RankOnePlanted),
            other => Err(Error::UnknownKind(String::from(other))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Ensemble::Ginibre => "ginibre",
            Ensemble::GramUnitColumns => "gram",
            Ensemble::NonnegUniform => "nonneg",
            Ensemble::RankOnePlanted => "rank_one",
        }
    }

    /// Draw one m×n sample (GramUnitColumns ignores m and returns n×n).
    pub fn sample(&self, rng: &mut SplitMix64, m: usize, n: usize) -> DenseMatrix {
        match self {
            Ensemble::Ginibre => {
                let mut x = DenseMatrix::zeros(m, n);
                for i in 0..m {
                    for j in 0..n {
                        x[(i, j)] =
                            Complex64::new(rng.standard_normal(), rng.standard_normal());
                    }
                }
                x
            }
            Ensemble::GramUnitColumns => {
                let mut f = DenseMatrix::zeros(n, n);
                for j in 0..n {
                    let col: Vec<Complex> = (0..n)
                        .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
                        .collect();
                    let norm = vec_l2(&col).max(1e-300);
                    for i in 0..n {
                        f[(i, j)] = col[i] / norm;
                    }
                }
                f.gram().symmetrize()
            }
            Ensemble::NonnegUniform => {
                let mut x = DenseMatrix::zeros(m, n);
                for i in 0..m {
                    for j in 0..n {
                        x[(i, j)] = Complex64::new(rng.uniform(), 0.0);
                    }
                }
                x
            }
            Ensemble::RankOnePlanted => {
                let mu: Vec<Complex> = (0..m)
                    .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
                    .collect();
                let nu: Vec<Complex> = (0..n)
                    .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
                    .collect();
                DenseMatrix::outer(&mu, &nu)
            }
        }
    }
}

pub const HISTOGRAM_BUCKETS: usize = 64;

#[derive(Clone, Debug)]
pub struct RatioScanReport {
    pub kind: ScanKind,
    pub ensemble: Ensemble,
    pub samples: usize,
    pub max_ratio: f64,
    pub argmax_index: usize,
    /// 64 uniform buckets over [1, 1.8]; out-of-range clamps to the ends.
    pub histogram: Vec<u32>,
}

fn scan_ratio(
    kind: ScanKind,
    x: &DenseMatrix,
    budget: &Budget,
    tol: &Tolerances,
) -> Result<f64> {
    match kind {
        ScanKind::Positive => {
            let cbb = solve_diag_dominance(x, tol)?.primal_value;
            let b = max_quadratic_torus(x, budget, tol)?.bracket.lower;
            Ok(cbb / b.max(1e-300))
        }
        ScanKind::General => {
            let cbb = solve_two_sided_scaling(x, ScalingMode::Cbb, tol)?.primal_value;
            let b = max_bilinear_torus(x, budget, tol)?.bracket.lower;
            Ok(cbb / b.max(1e-300))
        }
        ScanKind::Little => {
            let cbf = solve_diag_dominance(&x.gram(), tol)?.primal_value.sqrt();
            let f = max_quadratic_torus(&x.gram(), budget, tol)?
                .bracket
                .lower
                .max(0.0)
                .sqrt();
            Ok(cbf / f.max(1e-300))
        }
    }
}

/// Scan `count` samples, reporting the max ratio and a histogram. Sample k
/// uses the counter-derived stream substream(seed, k), so the report does
/// not depend on evaluation order.
pub fn ratio_scan(
    kind: ScanKind,
    ensemble: Ensemble,
    m: usize,
    n: usize,
    count: usize,
    seed: u64,
    budget: &Budget,
    tol: &Tolerances,
) -> Result<RatioScanReport> {
    let mut histogram = vec![0u32; HISTOGRAM_BUCKETS];
    let mut max_ratio = f64::NEG_INFINITY;
    let mut argmax = 0usize;
    for k in 0..count {
        let mut rng = SplitMix64::substream(seed, k as u64);
        let x = match kind {
            ScanKind::Positive => {
                // Positive scans need a PSD sample with nonzero diagonal.
                let g = ensemble.sample(&mut rng, n, n);
                if matches!(ensemble, Ensemble::GramUnitColumns) {
                    g
                } else {
                    g.gram().symmetrize()
                }
            }
            _ => ensemble.sample(&mut rng, m, n),
        };
        if x.hs_norm() == 0.0 {
            continue;
        }
        let mut b = budget.clone();
        b.seed = SplitMix64::substream(seed, k as u64).next_u64();
        let ratio = scan_ratio(kind, &x, &b, tol)?;
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax = k;
        }
        let pos = (ratio - 1.0) / 0.8 * HISTOGRAM_BUCKETS as f64;
        let bucket = (pos.max(0.0) as usize).min(HISTOGRAM_BUCKETS - 1);
        histogram[bucket] += 1;
    }
    Ok(RatioScanReport {
        kind,
        ensemble,
        samples: count,
        max_ratio,
        argmax_index: argmax,
        histogram,
    })
}

/// One named inequality outcome.
#[derive(Clone, Debug)]
pub struct InequalityResult {
    pub name: String,
    pub pass: bool,
    /// How far inside the inequality the worst sample sat (≥ 0 means pass).
    pub slack: f64,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub seed: u64,
    pub results: Vec<InequalityResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

fn record(results: &mut Vec<InequalityResult>, name: &str, slack: f64) {
    results.push(InequalityResult {
        name: String::from(name),
        pass: slack >= 0.0,
        slack,
    });
}

/// Run every inequality family at desk scale with counter-derived seeds.
/// Deterministic: the same seed yields the same report.
pub fn inequality_suite(seed: u64, budget: &Budget, tol: &Tolerances) -> Result<SuiteReport> {
    let mut results = Vec::new();
    let k_little = K_LITTLE;

    // Thm 2.1: rank-one closed forms by bracket containment / SDP match.
    {
        let mut worst = f64::INFINITY;
        for k in 0..6u64 {
            let mut rng = SplitMix64::substream(seed ^ 0xA1, k);
            let m = 2 + (rng.range(3));
            let n = 2 + (rng.range(3));
            let mu: Vec<Complex> = (0..m)
                .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
                .collect();
            let nu: Vec<Complex> = (0..n)
                .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
                .collect();
            let x = DenseMatrix::outer(&mu, &nu);
            let closed = rank_one_closed_forms(&mu, &nu)?;
            for kind in [NormKind::CbF, NormKind::CbB, NormKind::S, NormKind::T] {
                let b = norm(&x, kind, budget, tol)?;
                let want = closed.value(kind);
                let err = (0.5 * (b.lower + b.upper) - want).abs() / (1.0 + want);
                worst = worst.min(1e-6 - err);
            }
            for kind in [NormKind::F, NormKind::B] {
                let b = norm(&x, kind, budget, tol)?;
                let want = closed.value(kind);
                let slack = (b.upper + 1e-7 * (1.0 + want) - want)
                    .min(want - b.lower + 1e-7 * (1.0 + want));
                worst = worst.min(slack);
            }
        }
        record(&mut results, "thm21_rank_one_closed_forms", worst);
    }

    // Thm 1.2: cbF ≤ √(4/π)·F.
    {
        let mut worst = f64::INFINITY;
        for k in 0..6u64 {
            let mut rng = SplitMix64::substream(seed ^ 0xA2, k);
            let x = Ensemble::Ginibre.sample(&mut rng, 3, 3);
            let cbf = solve_diag_dominance(&x.gram(), tol)?.primal_value.sqrt();
            let f = norm(&x, NormKind::F, budget, tol)?.upper;
            worst = worst.min(k_little.sqrt() * f + 1e-6 * (1.0 + f) - cbf);
        }
        record(&mut results, "thm12_little_grothendieck", worst);
    }

    // eq. (2): cbB(P) ≤ (4/π)·B(P) for PSD P (B upper end keeps it rigorous).
    {
        let mut worst = f64::INFINITY;
        for k in 0..6u64 {
            let mut rng = SplitMix64::substream(seed ^ 0xA3, k);
            let p = Ensemble::GramUnitColumns.sample(&mut rng, 3, 3);
            let cbb = solve_diag_dominance(&p, tol)?.primal_value;
            let b = max_quadratic_torus(&p, budget, tol)?.bracket.upper;
            worst = worst.min(k_little * b + 1e-6 * (1.0 + b) - cbb);
        }
        record(&mut results, "eq2_positive_grothendieck", worst);
    }

    // Cor 3.3 chain: Tr ≤ cbB ≤ middle ≤ upper; equality for nonnegative.
    {
        let mut worst = f64::INFINITY;
        for k in 0..4u64 {
            let mut rng = SplitMix64::substream(seed ^ 0xA4, k);
            let x = Ensemble::Ginibre.sample(&mut rng, 3, 3);
            let c = cbb_bound_chain(&x, tol)?;
            let s = 1e-8 * (1.0 + c.upper);
            worst = worst
                .min(c.cbb - c.trace + s)
                .min(c.middle_sum - c.cbb + s)
                .min(c.upper - c.middle_sum + s);
            let xp = Ensemble::NonnegUniform.sample(&mut rng, 3, 3);
            let c = cbb_bound_chain(&xp, tol)?;
            worst = worst.min(1e-6 * c.middle_sum - (c.cbb - c.middle_sum).abs());
        }
        record(&mut results, "cor33_bound_chain", worst);
    }

    // Lemma 5.2 / Thm 4.1: duality pairings.
    {
        let mut worst = f64::INFINITY;
        for k in 0..4u64 {
            let mut rng = SplitMix64::substream(seed ^ 0xA5, k);
            let x = Ensemble::Ginibre.sample(&mut rng, 3, 3);
            let cbb = solve_two_sided_scaling(&x, ScalingMode::Cbb, tol)?.primal_value;
            let y = duality_witness(&x, DualityPair::CbbS, tol)?;
            let s_of_y = solve_two_sided_scaling(&y, ScalingMode::Schur, tol)?.primal_value;
            worst = worst
                .min(1.0 + 1e-7 - s_of_y)
                .min(x.inner_re(&y) - cbb * (1.0 - 1e-6));
        }
        record(&mut results, "duality_witness_cbb_s", worst);
    }

    // Thm 4.1: split reconstruction and cbF of both factors.
    {
        let mut worst = f64::INFINITY;
        for k in 0..3u64 {
            let mut rng = SplitMix64::substream(seed ^ 0xA6, k);
            let x = Ensemble::Ginibre.sample(&mut rng, 3, 3);
            let split = crate::fact::fact_split(&x, tol)?;
            let cbb = solve_two_sided_scaling(&x, ScalingMode::Cbb, tol)?.primal_value;
            let cbf_c = solve_diag_dominance(&split.c.gram(), tol)?.primal_value;
            let rel = (cbf_c - cbb).abs() / (1.0 + cbb);
            worst = worst
                .min(1e-7 - split.d.mul(&split.c).sub(&x).hs_norm() / x.hs_norm())
                .min(1e-5 - rel);
        }
        record(&mut results, "thm41_split", worst);
    }

    // Thm 4.2 embedding: ‖P‖_cbB = 4, Tr(QP) = 4, 4 ≤ (4/π)(2 + 2‖X‖_B).
    {
        let mut worst = f64::INFINITY;
        for k in 0..2u64 {
            let mut rng = SplitMix64::substream(seed ^ 0xA7, k);
            let x = Ensemble::Ginibre.sample(&mut rng, 3, 3);
            let emb = block_embedding(&x, tol)?;
            let cbb_p = solve_diag_dominance(&emb.p, tol)?.primal_value;
            worst = worst.min(1e-5 - (cbb_p - 4.0).abs() / 4.0);
            worst = worst.min(1e-5 - (emb.p.inner_re(&emb.q) - 4.0).abs() / 4.0);
            worst = worst.min(min_eigenvalue(&emb.p)? + 1e-9);
            let bx = max_bilinear_torus(&emb.x, budget, tol)?.bracket;
            worst = worst.min(k_little * (2.0 + 2.0 * bx.upper) + 1e-5 - 4.0);
        }
        record(&mut results, "thm42_block_embedding", worst);
    }

    // Thm 1.1 constructive form: X/‖X‖_S ∈ (4/π)/(2−4/π)·𝒱, i.e. ρ < 1.752.
    {
        let mut worst = f64::INFINITY;
        for k in 0..2u64 {
            let mut rng = SplitMix64::substream(seed ^ 0xA8, k);
            let x = Ensemble::Ginibre.sample(&mut rng, 2, 2);
            let s = solve_two_sided_scaling(&x, ScalingMode::Schur, tol)?.primal_value;
            let v = v_membership(&x.scale_real(1.0 / s), k_little, 25, budget, tol)?;
            worst = worst.min(1.752 + 1e-2 - v.rho).min(1e-3 - v.residual);
        }
        record(&mut results, "thm11_v_membership", worst);
    }

    Ok(SuiteReport {
        seed,
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::operator_norm;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn fast_budget() -> Budget {
        Budget {
            multistarts: 12,
            grid_limit: 2,
            ..Budget::default()
        }
    }

    #[test]
    fn embedding_invariants_rank_one() {
        let mu = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let nu = [Complex64::new(1.0, 1.0), Complex64::new(0.5, 0.0)];
        let x = DenseMatrix::outer(&mu, &nu);
        let emb = block_embedding(&x, &tols()).unwrap();
        assert!(min_eigenvalue(&emb.p).unwrap() > -1e-8);
        let cbb_p = solve_diag_dominance(&emb.p, &tols()).unwrap().primal_value;
        assert!((cbb_p - 4.0).abs() < 1e-5 * 4.0, "cbB(P) = {cbb_p}");
        let tr = emb.p.inner_re(&emb.q);
        assert!((tr - 4.0).abs() < 1e-4, "Tr(QP) = {tr}");
        let s_q = solve_two_sided_scaling(&emb.q, ScalingMode::Schur, &tols())
            .unwrap()
            .primal_value;
        assert!((s_q - 1.0).abs() < 1e-5, "S(Q) = {s_q}");
        // Rank one: ‖X̃‖_B = 1 so the B-bracket of P contains 4.
        let b = max_bilinear_torus(&emb.x, &Budget::default(), &tols())
            .unwrap()
            .bracket;
        assert!(b.contains(1.0, 1e-5));
        // γ is a unit vector.
        let g: f64 = emb.gamma.iter().map(|v| v * v).sum();
        assert!((g - 1.0).abs() < 1e-9);
    }

    #[test]
    fn embedding_random_bound_chain() {
        let mut rng = SplitMix64::new(51);
        let x = Ensemble::Ginibre.sample(&mut rng, 3, 2);
        let emb = block_embedding(&x, &tols()).unwrap();
        let b = max_bilinear_torus(&emb.x, &Budget::default(), &tols())
            .unwrap()
            .bracket;
        // ‖P‖_B bracket must contain 2 + 2‖X‖_B.
        let pb = max_bilinear_torus(&emb.p, &fast_budget(), &tols())
            .unwrap()
            .bracket;
        assert!(
            pb.lower <= 2.0 + 2.0 * b.upper + 1e-5 && 2.0 + 2.0 * b.lower <= pb.upper + 1e-5,
            "P_B {:?} vs X_B {:?}",
            pb,
            b
        );
        // Displayed inequality 4 ≤ (4/π)(2 + 2‖X‖_B).
        assert!(4.0 <= K_LITTLE * (2.0 + 2.0 * b.upper) + 1e-5);
    }

    #[test]
    fn embedding_rejects_zero_column() {
        let x = DenseMatrix::from_real(2, 2, &[1.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(block_embedding(&x, &tols()).is_err());
    }

    #[test]
    fn scan_rank_one_ratio_is_one() {
        let rep = ratio_scan(
            ScanKind::General,
            Ensemble::RankOnePlanted,
            3,
            3,
            4,
            7,
            &fast_budget(),
            &tols(),
        )
        .unwrap();
        assert!(rep.max_ratio >= 1.0 - 1e-9);
        assert!(rep.max_ratio <= 1.0 + 1e-5, "{}", rep.max_ratio);
    }

    #[test]
    fn scan_positive_bounded() {
        let rep = ratio_scan(
            ScanKind::Positive,
            Ensemble::GramUnitColumns,
            3,
            3,
            8,
            11,
            &Budget::default(),
            &tols(),
        )
        .unwrap();
        assert!(rep.max_ratio >= 1.0 - 1e-9);
        assert!(rep.max_ratio <= 4.0 / core::f64::consts::PI + 1e-3, "{}", rep.max_ratio);
        assert_eq!(rep.histogram.iter().sum::<u32>() as usize, rep.samples);
    }

    #[test]
    fn scan_all_ones_psd() {
        // cbB = B = 4 for the all-ones 2×2 (ratio exactly 1).
        let p = DenseMatrix::from_real(2, 2, &[1.0; 4]).unwrap();
        let r = scan_ratio(ScanKind::Positive, &p, &Budget::default(), &tols()).unwrap();
        assert!((r - 1.0).abs() < 1e-6, "{r}");
    }

    #[test]
    fn little_scan_bounded() {
        let rep = ratio_scan(
            ScanKind::Little,
            Ensemble::Ginibre,
            3,
            3,
            6,
            13,
            &Budget::default(),
            &tols(),
        )
        .unwrap();
        assert!(rep.max_ratio <= (4.0 / core::f64::consts::PI).sqrt() + 1e-3);
    }

    #[test]
    fn suite_deterministic_and_passing() {
        let budget = fast_budget();
        let a = inequality_suite(42, &budget, &tols()).unwrap();
        let b = inequality_suite(42, &budget, &tols()).unwrap();
        assert_eq!(a.results.len(), b.results.len());
        for (x, y) in a.results.iter().zip(&b.results) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.pass, y.pass);
            assert_eq!(x.slack.to_bits(), y.slack.to_bits());
        }
        for r in &a.results {
            assert!(r.pass, "{} failed with slack {}", r.name, r.slack);
        }
    }

    #[test]
    fn ensembles_have_expected_shapes() {
        let mut rng = SplitMix64::new(3);
        let g = Ensemble::GramUnitColumns.sample(&mut rng, 9, 4);
        assert_eq!(g.rows(), 4);
        assert!(operator_norm(&g) > 0.0);
        for i in 0..4 {
            assert!((g[(i, i)].re - 1.0).abs() < 1e-12);
        }
        let x = Ensemble::NonnegUniform.sample(&mut rng, 2, 3);
        assert!(x.entries().iter().all(|z| z.im == 0.0 && z.re >= 0.0));
    }
}
