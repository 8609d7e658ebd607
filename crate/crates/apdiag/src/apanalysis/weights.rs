//! Streaming window averages of shifted-difference weights.

use crate::funcspace::norm_power;
use crate::funcspace::{DomainKind, FuncSpaceError, SampledFunction, SeminormEstimate};
use crate::scalar::{real, Real};

/// Seminorm estimator of `f(. + steps dt) - f` on the common window,
/// without materializing the difference function.
pub(crate) fn defect_estimate<T: Real>(
    f: &SampledFunction<T>,
    steps: i64,
    p: T,
    schedule: &[T],
    rtol: T,
) -> Result<SeminormEstimate<T>, FuncSpaceError> {
    if p < T::one() {
        return Err(FuncSpaceError::Window(format!("p must be >= 1, got {p}")));
    }
    let n = f.len() as i64;
    let dim = f.dim();
    let dt = f.dt();
    let data = f.data();

    let diff_weight = |j: i64| -> T {
        let a = (j as usize) * dim;
        let b = ((j + steps) as usize) * dim;
        let mut s = T::zero();
        for k in 0..dim {
            s += (data[b + k] - data[a + k]).norm_sqr();
        }
        norm_power(s, p)
    };

    match f.domain() {
        DomainKind::WholeLine => {
            let c = f.index_of_zero()? as i64;
            let lo = 0.max(-steps);
            let hi = n - 1 - 0.max(steps);
            let max_radius = (c - lo).min(hi - c);
            if max_radius < 1 {
                return Err(FuncSpaceError::Window(
                    "shift leaves no usable window".into(),
                ));
            }
            let radii = radii_for(schedule, dt, max_radius as usize)?;
            let max_m = radii.last().unwrap().0 as i64;
            let mut means = Vec::with_capacity(radii.len());
            let half = real::<T>(0.5);
            let mut sum = T::zero();
            let mut wl_prev = diff_weight(c);
            let mut wr_prev = wl_prev;
            let mut next = 0usize;
            for m in 1..=max_m {
                let wl = diff_weight(c - m);
                let wr = diff_weight(c + m);
                sum += dt * half * (wl + wl_prev) + dt * half * (wr + wr_prev);
                wl_prev = wl;
                wr_prev = wr;
                if next < radii.len() && radii[next].0 as i64 == m {
                    means.push((radii[next].1, sum / (real::<T>(2.0) * radii[next].1)));
                    next += 1;
                }
            }
            Ok(SeminormEstimate::from_window_means(means, p, rtol))
        }
        DomainKind::HalfLine => {
            if steps < 0 {
                return Err(FuncSpaceError::Grid(
                    "half-line defect requires tau >= 0".into(),
                ));
            }
            let max_m = n - 1 - steps;
            if max_m < 1 {
                return Err(FuncSpaceError::Window(
                    "shift leaves no usable window".into(),
                ));
            }
            let radii = radii_for(schedule, dt, max_m as usize)?;
            let max_m = radii.last().unwrap().0 as i64;
            let mut means = Vec::with_capacity(radii.len());
            let half = real::<T>(0.5);
            let mut sum = T::zero();
            let mut w_prev = diff_weight(0);
            let mut next = 0usize;
            for m in 1..=max_m {
                let w = diff_weight(m);
                sum += dt * half * (w + w_prev);
                w_prev = w;
                if next < radii.len() && radii[next].0 as i64 == m {
                    means.push((radii[next].1, sum / radii[next].1));
                    next += 1;
                }
            }
            Ok(SeminormEstimate::from_window_means(means, p, rtol))
        }
    }
}

/// Snap schedule times to grid radii, validating against the available
/// half-width and dropping duplicates.
pub(crate) fn radii_for<T: Real>(
    schedule: &[T],
    dt: T,
    max_radius: usize,
) -> Result<Vec<(usize, T)>, FuncSpaceError> {
    if schedule.is_empty() {
        return Err(FuncSpaceError::Window("empty window schedule".into()));
    }
    let mut out: Vec<(usize, T)> = Vec::with_capacity(schedule.len());
    for &t in schedule {
        if !t.is_finite() || t <= T::zero() {
            return Err(FuncSpaceError::Window(format!(
                "window sizes must be positive, got {t}"
            )));
        }
        let m = (t / dt)
            .round()
            .to_usize()
            .ok_or_else(|| FuncSpaceError::Window("window size overflows the grid".into()))?;
        if m == 0 {
            return Err(FuncSpaceError::Window(format!(
                "window {t} is below the grid resolution {dt}"
            )));
        }
        if m > max_radius {
            return Err(FuncSpaceError::Window(format!(
                "window {t} exceeds the usable half-width {}",
                dt * real::<T>(max_radius as f64)
            )));
        }
        if out.last().is_some_and(|&(prev, _)| m <= prev) {
            continue;
        }
        out.push((m, dt * real::<T>(m as f64)));
    }
    Ok(out)
}
