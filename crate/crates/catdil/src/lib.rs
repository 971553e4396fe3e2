//! Construction and verification of unitary dilations of finite-dimensional
//! quantum channels: equilibrating dilations (thermal operations), catalytic
//! dilations, Schur-multiplier constructions, and the dual-unitary
//! correspondence, together with a certificate-based classifier for the
//! doubly-stochastic channel hierarchy.

pub mod channel;
pub mod dual;
pub mod entropy;
pub mod families;
pub mod error;
pub mod matrix;
pub mod report;
pub mod schur;
pub mod spectral;
pub mod states;
pub mod tensor;
pub mod thermal;
pub mod verify;

pub use channel::{ChannelChoi, Dilation, MixedUnitaryDecomposition};
pub use error::{Error, Result};
pub use matrix::{C64, ComplexMatrix};
pub use report::VerificationReport;
pub use states::{DensityMatrix, ToleranceSpec, UnitaryMatrix};
pub use tensor::FactoredDims;
