//! Exact algebra for finite symmetry groups of smooth cubic hypersurfaces.
//!
//! The core types are generic over a [`Field`]; the aliases below fix the
//! scalar to [`CycNum`], the cyclotomic field element used for all
//! characteristic-zero work. [`Fp`] is the modular image used for fast
//! certificates.

pub mod corpus;
pub mod cyclo;
pub mod diffrank;
pub mod expr;
pub mod field;
pub mod forms;
pub mod groebner;
pub mod groups;
pub mod invariants;
pub mod matrix;
pub mod modular;
pub mod monomial;
pub mod poly;
pub mod reps;
pub mod smooth;
pub mod snf;
pub mod verify;

pub use cyclo::{consts, CycContext, CycNum};
pub use field::{Field, Fp};
pub use matrix::Matrix;
pub use poly::{Mono, Poly};

/// Homogeneous form with cyclotomic coefficients.
pub type Form = Poly<CycNum>;
/// Square matrix with cyclotomic entries.
pub type CycMatrix = Matrix<CycNum>;
/// Forms reduced modulo a prime.
pub type ModForm = Poly<Fp>;
pub type ModMatrix = Matrix<Fp>;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{0}")]
    Domain(String),
    #[error("cap exceeded after {0} elements")]
    CapExceeded(usize),
    #[error("budget exhausted")]
    Exhausted,
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
