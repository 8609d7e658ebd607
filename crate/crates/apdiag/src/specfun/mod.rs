//! Special functions underlying the fractional kernels: Gamma, the
//! `g_zeta` kernel, the two-parameter Mittag-Leffler function, scalar
//! resolvent families, and envelope fitting.

mod gamma;
mod kernel;
mod mittag;

pub use gamma::{g_kernel, gamma_fn};
pub use kernel::{
    envelope_check, gamma_full, resolvent_kernel, resolvent_kernel_raw, solution_family,
    EnvelopeFit, KernelKind, KernelSpec,
};
pub use mittag::{mittag_leffler, mittag_leffler_real, MlValue};

pub(crate) use gamma::{g_kernel_unchecked, recip_gamma};

/// Errors from special-function evaluation.
#[derive(Debug, Clone, thiserror::Error)]
pub enum SpecFunError {
    /// Input outside the function's domain.
    #[error("domain error: {0}")]
    Domain(String),
}
