//! Convolution products with singular kernels, admissibility and weight
//! constants from the invariance estimates, and the Weyl-Liouville and
//! Caputo fractional derivatives.

mod config;
mod conv;
mod frac;

pub use config::{
    admissibility, c_zeta_integral, holder_weight_norm, zeta_constant, Admissibility,
    ConvolutionConfig, ZetaConstant,
};
pub use conv::{finite_convolution, infinite_convolution, Convolution};
pub use frac::{caputo, weyl_liouville, WeylMode};

/// Errors from convolution and fractional-derivative operators.
#[derive(Debug, thiserror::Error)]
pub enum ConvError {
    /// A theorem hypothesis or configuration precondition failed.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    /// The certified kernel tail bound cannot meet the tolerance.
    #[error("tail bound {bound} exceeds tol_tail {tol}; required v_tail ~ {required_v_tail}")]
    TailBound {
        bound: String,
        tol: String,
        required_v_tail: String,
    },
    /// The stored window is too small for the requested operation.
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    /// A zero frequency where the defining integral diverges.
    #[error("zero frequency present: the defining integral diverges for constants")]
    ZeroFrequency,
    #[error(transparent)]
    FuncSpace(#[from] crate::funcspace::FuncSpaceError),
    #[error(transparent)]
    SpecFun(#[from] crate::specfun::SpecFunError),
}
