//! Grid representation of locally p-integrable functions, test-function
//! generators, and the Stepanov / Besicovitch seminorm estimators.

mod csv;
mod generate;
mod sampled;
mod seminorm;

pub use csv::{read_csv, read_csv_path, write_csv, write_csv_path};
pub use generate::{make_trig_polynomial, make_vanishing, TrigPolynomial, VanishingKind};
pub use sampled::{DomainKind, GridSpec, SampledFunction};
pub use seminorm::{
    besicovitch_seminorm, default_schedule, geometric_schedule, stepanov_norm, SeminormEstimate,
    DEFAULT_RTOL,
};

pub(crate) use seminorm::norm_power;

/// Errors from grid construction, estimators, and serialization.
#[derive(Debug, thiserror::Error)]
pub enum FuncSpaceError {
    #[error("grid error: {0}")]
    Grid(String),
    #[error("window error: {0}")]
    Window(String),
    #[error("row {row}: {message}")]
    Csv { row: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
