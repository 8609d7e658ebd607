//! Verification harness: theorem-level invariance checks and mild-solution
//! constructions, emitting machine-readable reports.

mod report;
mod solve;
mod verify;

pub use report::{write_atomic, write_defect_csv, write_report_json, ArtifactSink, TheoremReport};
pub use solve::{
    solve_dfp, solve_relaxation, DfpParams, DfpSolution, RelaxationParams, RelaxationSolution,
};
pub use verify::{
    doss_input_half_width, verify_bd_invariance, verify_doss_invariance, verify_perturbation,
    BdInvarianceParams, DossInvarianceParams, PerturbationParams,
};

/// Errors from harness orchestration.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Conv(#[from] crate::convops::ConvError),
    #[error(transparent)]
    FuncSpace(#[from] crate::funcspace::FuncSpaceError),
    #[error(transparent)]
    SpecFun(#[from] crate::specfun::SpecFunError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
