//! Doss and Besicovitch-Doss almost-periodicity diagnostics: translation
//! defects, epsilon-period scans with relative-density certificates, the
//! oscillatory-mean condition, and the aggregate classifier.

mod bd;
mod classify;
mod defect;
pub(crate) mod weights;

pub use bd::{bd_condition, montenegro_check, BDReport, MontenegroReport};
pub use classify::{classify, Classification, ClassifyConfig, ClassifyOutcome};
pub use defect::{bp_continuity_modulus, doss_defect, period_scan, ContinuityReport, DossReport};
