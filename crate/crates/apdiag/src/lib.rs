//! Numerical diagnostics for generalized almost-periodic functions and
//! convolution products with singular kernels.
//!
//! The crate provides, generically over the scalar type (`f32`/`f64`):
//!
//! * special functions underlying fractional kernels (Gamma, `g_zeta`,
//!   two-parameter Mittag-Leffler, scalar resolvent families) in
//!   [`specfun`],
//! * grid representations of locally p-integrable functions with Stepanov
//!   and Besicovitch seminorm estimators in [`funcspace`],
//! * the Doss / Besicovitch-Doss almost-periodicity diagnostics in
//!   [`apanalysis`],
//! * convolution products with singular kernels and Weyl-Liouville / Caputo
//!   fractional derivatives in [`convops`],
//! * a verification harness for the invariance theorems and mild-solution
//!   constructions in [`harness`].

pub mod apanalysis;
pub mod convops;
pub mod funcspace;
pub mod harness;
pub mod scalar;
pub mod specfun;

pub use scalar::{real, Real};

/// `f64` aliases, the working precision for the large-window estimators.
pub type SampledFunction64 = funcspace::SampledFunction<f64>;
pub type TrigPolynomial64 = funcspace::TrigPolynomial<f64>;
pub type KernelSpec64 = specfun::KernelSpec<f64>;
pub type SeminormEstimate64 = funcspace::SeminormEstimate<f64>;

/// `f32` aliases, suitable for short windows.
pub type SampledFunction32 = funcspace::SampledFunction<f32>;
pub type KernelSpec32 = specfun::KernelSpec<f32>;
