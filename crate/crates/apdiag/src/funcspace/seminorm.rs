//! Stepanov and Besicovitch seminorm estimators.
//!
//! The Besicovitch seminorm is a limsup over window averages; on finite data
//! the estimator reports the maximum of the averages over the tail half of a
//! growing window schedule. This is conservative: it never under-reports the
//! limsup of the data it sees.

use serde::{Deserialize, Serialize};

use super::sampled::{DomainKind, SampledFunction};
use super::FuncSpaceError;
use crate::scalar::{real, Real};

/// Default relative tolerance for the convergence diagnostic.
pub const DEFAULT_RTOL: f64 = 1e-3;

/// A limsup-type average with its window schedule and convergence flag.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct SeminormEstimate<T: Real> {
    /// Maximum of the window averages over the tail half of the schedule.
    pub value: T,
    /// `(T_k, A_k)` pairs of window sizes and averages.
    pub schedule: Vec<(T, T)>,
    /// True when the tail maxima with and without the final window differ
    /// by less than `rtol * (1 + value)`.
    pub converged: bool,
    pub p: T,
}

impl<T: Real> SeminormEstimate<T> {
    pub(crate) fn from_window_means(means: Vec<(T, T)>, p: T, rtol: T) -> Self {
        let k = means.len();
        let tail_start = k / 2;
        let tail = &means[tail_start..];
        let root = |m: T| m.max(T::zero()).powf(p.recip());
        let value = tail
            .iter()
            .map(|&(_, m)| root(m))
            .fold(T::zero(), T::max);
        let converged = if tail.len() >= 2 {
            let prev = tail[..tail.len() - 1]
                .iter()
                .map(|&(_, m)| root(m))
                .fold(T::zero(), T::max);
            (value - prev).abs() < rtol * (T::one() + value)
        } else {
            false
        };
        let schedule = means.into_iter().map(|(t, m)| (t, root(m))).collect();
        SeminormEstimate {
            value,
            schedule,
            converged,
            p,
        }
    }
}

/// Geometric default schedule `T_k = t_max 2^{k-12}`, `k = 1..=12`.
pub fn default_schedule<T: Real>(t_max: T) -> Vec<T> {
    (1..=12)
        .map(|k| t_max * real::<T>(2.0_f64.powi(k - 12)))
        .collect()
}

/// Geometric schedule with `k` points from `t_min` to `t_max` inclusive.
pub fn geometric_schedule<T: Real>(t_min: T, t_max: T, k: usize) -> Vec<T> {
    assert!(k >= 2, "schedule needs at least two windows");
    let ratio = (t_max / t_min).powf(real::<T>(1.0 / (k as f64 - 1.0)));
    let mut t = t_min;
    let mut out = Vec::with_capacity(k);
    for _ in 0..k - 1 {
        out.push(t);
        t = t * ratio;
    }
    out.push(t_max);
    out
}

/// p-th power of the Euclidean norm with fast paths for p = 1 and p = 2.
#[inline]
pub(crate) fn norm_power<T: Real>(norm_sq: T, p: T) -> T {
    if p == real(2.0) {
        norm_sq
    } else if p == T::one() {
        norm_sq.sqrt()
    } else {
        norm_sq.powf(p / real(2.0))
    }
}

/// Convert schedule times into grid radii, validated against the available
/// half-width `max_radius`, and dropping duplicates after snapping.
fn schedule_radii<T: Real>(
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
        let m = (t / dt).round();
        let m = m
            .to_usize()
            .ok_or_else(|| FuncSpaceError::Window("window size overflows the grid".into()))?;
        if m == 0 {
            return Err(FuncSpaceError::Window(format!(
                "window {t} is below the grid resolution {dt}"
            )));
        }
        if m > max_radius {
            return Err(FuncSpaceError::Window(format!(
                "window {t} exceeds the stored half-width {}",
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

/// Windowed p-means of a weight sequence around a center (whole line) or
/// from the left edge (half line), computed by streaming trapezoid sums.
///
/// `weight(j)` must return the integrand value at grid index `j`.
pub(crate) fn windowed_means<T: Real>(
    weight: &mut dyn FnMut(usize) -> T,
    center: Option<usize>,
    radii: &[(usize, T)],
    dt: T,
) -> Vec<T> {
    debug_assert!(!radii.is_empty());
    let mut means = Vec::with_capacity(radii.len());
    match center {
        Some(c) => {
            // symmetric windows [c - m, c + m]
            let mut sum = T::zero();
            let mut next = 0usize;
            let mut w_left_prev = weight(c);
            let mut w_right_prev = w_left_prev;
            let half = real::<T>(0.5);
            let max_m = radii.last().unwrap().0;
            for m in 1..=max_m {
                let wl = weight(c - m);
                let wr = weight(c + m);
                sum += dt * half * (wl + w_left_prev) + dt * half * (wr + w_right_prev);
                w_left_prev = wl;
                w_right_prev = wr;
                if next < radii.len() && radii[next].0 == m {
                    let t_k = radii[next].1;
                    means.push(sum / (real::<T>(2.0) * t_k));
                    next += 1;
                }
            }
            means
        }
        None => {
            // one-sided windows [0, m]
            let mut sum = T::zero();
            let mut next = 0usize;
            let mut w_prev = weight(0);
            let half = real::<T>(0.5);
            let max_m = radii.last().unwrap().0;
            for m in 1..=max_m {
                let w = weight(m);
                sum += dt * half * (w + w_prev);
                w_prev = w;
                if next < radii.len() && radii[next].0 == m {
                    let t_k = radii[next].1;
                    means.push(sum / t_k);
                    next += 1;
                }
            }
            means
        }
    }
}

/// Besicovitch seminorm estimator.
///
/// Whole-line inputs use `((1/(2T)) int_{-T}^{T} |f|^p)^{1/p}`, half-line
/// inputs `((1/T) int_0^T |f|^p)^{1/p}`, over the given window schedule.
pub fn besicovitch_seminorm<T: Real>(
    f: &SampledFunction<T>,
    p: T,
    schedule: &[T],
    rtol: T,
) -> Result<SeminormEstimate<T>, FuncSpaceError> {
    if p < T::one() {
        return Err(FuncSpaceError::Window(format!("p must be >= 1, got {p}")));
    }
    let dt = f.dt();
    let (center, max_radius) = match f.domain() {
        DomainKind::WholeLine => {
            let c = f.index_of_zero()?;
            (Some(c), c.min(f.len() - 1 - c))
        }
        DomainKind::HalfLine => (None, f.len() - 1),
    };
    let radii = schedule_radii(schedule, dt, max_radius)?;
    let mut weight = |j: usize| norm_power(f.norm_sq_at(j), p);
    let means = windowed_means(&mut weight, center, &radii, dt);
    let pairs = radii
        .iter()
        .map(|&(_, t)| t)
        .zip(means)
        .collect::<Vec<_>>();
    Ok(SeminormEstimate::from_window_means(pairs, p, rtol))
}

/// Stepanov norm estimator: sup over unit subintervals inside the stored
/// window of the local L^p norm, by a sliding window at grid resolution.
pub fn stepanov_norm<T: Real>(f: &SampledFunction<T>, p: T) -> Result<T, FuncSpaceError> {
    if p < T::one() {
        return Err(FuncSpaceError::Window(format!("p must be >= 1, got {p}")));
    }
    let dt = f.dt();
    let m = (T::one() / dt).round();
    let m = m
        .to_usize()
        .ok_or_else(|| FuncSpaceError::Window("grid too coarse for unit windows".into()))?;
    if m == 0 || m > f.len() - 1 {
        return Err(FuncSpaceError::Window(
            "stored window is shorter than one unit interval".into(),
        ));
    }
    let n = f.len();
    let w: Vec<T> = (0..n).map(|j| norm_power(f.norm_sq_at(j), p)).collect();
    let half = real::<T>(0.5);
    // initial window [0, m]
    let mut sum = T::zero();
    for j in 0..m {
        sum += dt * half * (w[j] + w[j + 1]);
    }
    let mut best = sum;
    for i in 0..n - 1 - m {
        sum += dt * half * (w[i + m] + w[i + m + 1]) - dt * half * (w[i] + w[i + 1]);
        best = best.max(sum);
    }
    Ok(best.max(T::zero()).powf(p.recip()))
}
