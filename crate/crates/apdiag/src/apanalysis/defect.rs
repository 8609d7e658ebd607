//! Translation defects, the epsilon-period scan, and the continuity modulus.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::funcspace::{
    DomainKind, FuncSpaceError, SampledFunction, SeminormEstimate,
};
use crate::scalar::{real, Real};

use super::weights::defect_estimate;

/// Translation defect: the Besicovitch seminorm estimator of
/// `f(. + tau) - f` on the common window after shifting.
///
/// `tau` must be an integer multiple of the grid step; no interpolation is
/// performed. The schedule is measured against the window that remains
/// after trimming the shift.
pub fn doss_defect<T: Real>(
    f: &SampledFunction<T>,
    tau: T,
    p: T,
    schedule: &[T],
    rtol: T,
) -> Result<SeminormEstimate<T>, FuncSpaceError> {
    let steps = f.steps_of(tau)?;
    defect_estimate(f, steps, p, schedule, rtol)
}

/// Result of an epsilon-period scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct DossReport<T: Real> {
    pub p: T,
    pub epsilon: T,
    pub tau_grid: Vec<T>,
    /// Defect estimate for each tau in `tau_grid`.
    pub defects: Vec<T>,
    /// Subset of `tau_grid` with defect < epsilon.
    pub period_set: Vec<T>,
    /// Largest gap between consecutive epsilon-periods, including the
    /// boundary gaps to the scan-range endpoints.
    pub max_gap: T,
    /// The empirical relative-density certificate, equal to `max_gap`.
    pub relatively_dense_at: T,
    /// Total length of the scanned tau range.
    pub scan_range: T,
    /// True when the period set is empty and `max_gap` degenerated to the
    /// full scan range.
    pub degenerate: bool,
}

/// Scan translation defects over a uniform tau grid and report the
/// epsilon-period set with its relative-density certificate.
///
/// Whole-line functions scan `[-tau_max, tau_max]`, half-line functions
/// `[0, tau_max]`. `dtau` must be an integer multiple of the grid step.
pub fn period_scan<T: Real>(
    f: &SampledFunction<T>,
    p: T,
    epsilon: T,
    tau_max: T,
    dtau: T,
    schedule: &[T],
    rtol: T,
) -> Result<DossReport<T>, FuncSpaceError> {
    if epsilon <= T::zero() || !epsilon.is_finite() {
        return Err(FuncSpaceError::Window(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let step = f.steps_of(dtau)?;
    if step <= 0 {
        return Err(FuncSpaceError::Grid("dtau must be positive".into()));
    }
    let k_max = (tau_max / dtau)
        .floor()
        .to_i64()
        .ok_or_else(|| FuncSpaceError::Grid("tau_max out of range".into()))?;
    if k_max < 1 {
        return Err(FuncSpaceError::Window(
            "tau_max must cover at least one dtau".into(),
        ));
    }
    let ks: Vec<i64> = match f.domain() {
        DomainKind::WholeLine => (-k_max..=k_max).collect(),
        DomainKind::HalfLine => (0..=k_max).collect(),
    };
    // validate the largest shift once so the parallel loop cannot fail
    defect_estimate(f, step * k_max, p, schedule, rtol)?;

    let defects: Vec<T> = ks
        .par_iter()
        .map(|&k| {
            defect_estimate(f, step * k, p, schedule, rtol)
                .map(|e| e.value)
                .expect("validated shift")
        })
        .collect();

    let tau_grid: Vec<T> = ks
        .iter()
        .map(|&k| real::<T>(k as f64) * f.dt() * real(step as f64))
        .collect();
    let lo = tau_grid[0];
    let hi = *tau_grid.last().unwrap();
    let scan_range = hi - lo;

    let period_set: Vec<T> = tau_grid
        .iter()
        .zip(&defects)
        .filter(|&(_, d)| *d < epsilon)
        .map(|(&t, _)| t)
        .collect();

    let (max_gap, degenerate) = if period_set.is_empty() {
        (scan_range, true)
    } else {
        let mut g = (period_set[0] - lo).max(hi - *period_set.last().unwrap());
        for w in period_set.windows(2) {
            g = g.max(w[1] - w[0]);
        }
        (g, false)
    };

    Ok(DossReport {
        p,
        epsilon,
        tau_grid,
        defects,
        period_set,
        max_gap,
        relatively_dense_at: max_gap,
        scan_range,
        degenerate,
    })
}

/// Continuity modulus report: defects along a decreasing tau schedule.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct ContinuityReport<T: Real> {
    /// `(tau, defect)` pairs in the order given.
    pub modulus: Vec<(T, T)>,
    /// True when the defect at the smallest tau is below `tol`.
    pub continuous_at_tol: bool,
    pub tol: T,
}

/// Evaluate the defect along a schedule of shifts decreasing towards the
/// grid step, reporting whether the modulus drops below `tol`.
pub fn bp_continuity_modulus<T: Real>(
    f: &SampledFunction<T>,
    p: T,
    tau_schedule: &[T],
    schedule: &[T],
    rtol: T,
    tol: T,
) -> Result<ContinuityReport<T>, FuncSpaceError> {
    if tau_schedule.is_empty() {
        return Err(FuncSpaceError::Window("empty tau schedule".into()));
    }
    let mut modulus = Vec::with_capacity(tau_schedule.len());
    for &tau in tau_schedule {
        let est = doss_defect(f, tau, p, schedule, rtol)?;
        modulus.push((tau, est.value));
    }
    let smallest = modulus
        .iter()
        .cloned()
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
        .unwrap();
    Ok(ContinuityReport {
        modulus,
        continuous_at_tol: smallest.1 < tol,
        tol,
    })
}
