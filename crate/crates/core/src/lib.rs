//! Matrix norms from the Grothendieck inequality family on complex m×n
//! matrices: op, HS, F, cbF, B, cbB, S, T and the projective gauges
//! ∧(∞,∞), ∧(2,∞), together with the factorizations that realize them,
//! Haagerup's constructive cbF-factorization, elliptope decompositions
//! Q = αR − P, and reproducible ratio experiments.
//!
//! Everything that is NP-hard to evaluate exactly (the torus maxima B and F,
//! the gauges) is reported as a certified bracket `[lower, upper]` with the
//! witness achieving the lower bound. SDP-representable norms (cbF, cbB, S, T)
//! are solved to high accuracy by a small dense interior-point engine.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod experiments;
pub mod fact;
pub mod geometry;
pub mod haagerup;
pub mod linalg;
pub mod mat;
pub mod norms;
pub mod rng;
pub mod sdp;
pub mod simplex;
pub mod torus;

pub use error::Error;
pub use mat::{Complex, DenseMatrix};
pub use torus::{Budget, BracketStatus, NormBracket, TorusVector};

/// All numeric thresholds in one place. Defaults match the module contracts.
#[derive(Clone, Debug)]
pub struct Tolerances {
    /// Hermitian symmetry rejection threshold (HS norm, relative).
    pub hermitian_reject: f64,
    /// Off-diagonal HS mass at which the Jacobi sweep stops.
    pub jacobi_off: f64,
    /// Eigenvalues in [-psd_clamp, 0] are treated as 0 for PSD operations.
    pub psd_clamp: f64,
    /// Eigenvalues below -psd_reject fail the PSD precondition.
    pub psd_reject: f64,
    /// Relative duality-gap target for the SDP engine.
    pub sdp_rel_gap: f64,
    /// Maximum Newton iterations across the whole barrier path.
    pub sdp_max_newton: usize,
    /// Frank-Wolfe feasibility floor for elliptope decompositions.
    pub feas_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian_reject: 1e-8,
            jacobi_off: 1e-13,
            psd_clamp: 1e-9,
            psd_reject: 1e-6,
            sdp_rel_gap: 1e-8,
            sdp_max_newton: 500,
            feas_tol: 1e-3,
        }
    }
}
