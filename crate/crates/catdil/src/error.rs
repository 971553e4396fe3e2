use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix entries must be finite, found NaN/Inf at index {0}")]
    NonFinite(usize),
    #[error("not Hermitian: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },
    #[error("trace deviates from 1 by {residual:.3e} (tolerance {tol:.3e})")]
    NotUnitTrace { residual: f64, tol: f64 },
    #[error("not positive semidefinite: min eigenvalue {min_eig:.3e}")]
    NotPositive { min_eig: f64 },
    #[error("not unitary: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { residual: f64, tol: f64 },
    #[error("environment spectrum is degenerate within gap {gap:.3e}")]
    Degeneracy { gap: f64 },
    #[error("dilation is not equilibrating: residual {residual:.3e}")]
    NotEquilibrating { residual: f64 },
    #[error("unitary is not catalytic: partial-transpose unitarity residual {residual:.3e}")]
    NotCatalyticUnitary { residual: f64 },
    #[error("not dual-unitary: reshuffle unitarity residual {residual:.3e}")]
    NotDualUnitary { residual: f64 },
    #[error("state is rank deficient (min eigenvalue {min_eig:.3e})")]
    Rank { min_eig: f64 },
    #[error("catalyst is not robust: max basis-element residual {witness:.3e}")]
    NotRobust { witness: f64 },
    #[error("thermal premise violated: commutator residual {residual:.3e}")]
    NotThermal { residual: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal consistency failure in {context}: residual {residual:.3e}")]
    Internal { context: String, residual: f64 },
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
