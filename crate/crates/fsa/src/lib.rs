//! Deciders for functional properties of LTI systems.
//!
//! Given a quadruple (A, B, C, F) describing ẋ = Ax + Bu, y = Cx and a
//! functional z = Fx, this crate decides seven properties — functional
//! controllability (FC), functional stabilizability (FS), their intrinsic
//! variants (IFC, IFS), functional observability (FO), functional
//! detectability (FD) and target output controllability (TOC) — by two
//! independent routes: exact subspace rank identities and
//! eigenvalue/Jordan-chain PBH tests. It also synthesizes the augmentation
//! matrices R1, R2 that realize independent functional controller and
//! observer design.
//!
//! All core arithmetic is exact over arbitrary-precision rationals; a
//! numeric complex fallback with documented tolerances handles irrational
//! spectra at desk scale.

pub mod ratlin;
pub mod spectra;
pub mod numeric;
pub mod deciders;
pub mod synth;
pub mod harness;
pub mod report;
pub mod cli;

use thiserror::Error;

/// Errors from the exact linear-algebra layer.
#[derive(Debug, Error)]
pub enum RatlinError {
    #[error("matrix is not full row rank")]
    NotFullRowRank,
    #[error("shape mismatch: {what}")]
    ShapeMismatch { what: String },
}

/// Errors from the spectral layer.
#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("value is not an eigenvalue of the matrix")]
    NotAnEigenvalue,
    #[error("exact path does not support numeric eigenvalues")]
    NumericEigenvalueUnsupportedExact,
    #[error(
        "cannot split the irrational spectral factor into stable/unstable parts exactly"
    )]
    UnstableSplitUnsupported,
    #[error(transparent)]
    Ratlin(#[from] RatlinError),
}

/// Errors from the property deciders.
#[derive(Debug, Error)]
pub enum DecideError {
    #[error("matrix {which} is required for this property but missing")]
    MissingMatrix { which: &'static str },
    #[error("F is not full row rank")]
    FNotFullRowRank,
    #[error("dual-path verdicts disagree for {property}: this is an implementation bug")]
    InconsistencyDetected { property: String },
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Ratlin(#[from] RatlinError),
}

/// Errors from the random-system generator.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("infeasible generation request: {what}")]
    InfeasibleSpec { what: String },
    #[error(transparent)]
    Decide(#[from] DecideError),
}

/// Errors from augmentation synthesis.
#[derive(Debug, Error)]
pub enum SynthError {
    #[error("system is not intrinsically functional controllable")]
    NotIFC {
        certificates: Vec<deciders::Certificate>,
    },
    #[error("system is not functional observable")]
    NotFO {
        certificates: Vec<deciders::Certificate>,
    },
    #[error("matrix is not full row rank")]
    NotFullRowRank,
    #[error("Fbar is not annihilated on the unobservable block: FO violated")]
    FbarNotObservableFunctional,
    #[error("decomposition does not admit the requested completion")]
    InvalidDecomposition,
    #[error("pole placement supports single-input reduced pairs only")]
    MultiInputUnsupported,
    #[error("controller rank conditions not met: {what}")]
    ConditionsNotMet { what: String },
    #[error(transparent)]
    Decide(#[from] DecideError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Ratlin(#[from] RatlinError),
}
