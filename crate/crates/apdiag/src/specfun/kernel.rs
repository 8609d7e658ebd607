//! Convolution kernels and the scalar resolvent families.
//!
//! A [`KernelSpec`] describes a solution-operator kernel `R(t)` together
//! with the envelope data `M t^{beta-1} / (1 + t^{gamma_decay})` that the
//! convolution operators use for admissibility and tail bounds. The scalar
//! resolvent realization is
//! `R_gamma(t; lambda) = t^{gamma-1} E_{gamma,gamma}(-lambda t^gamma)` with
//! solution family `S_gamma(t; lambda) = E_gamma(-lambda t^gamma)`; it obeys
//! `|R_gamma(t)| <= M1 t^{gamma-1}` on (0,1] and
//! `|R_gamma(t)| <= M2 t^{-1-gamma}` on [1,inf).

use serde::{Deserialize, Serialize};

use super::gamma::{gamma_any, recip_gamma};
use super::mittag::mittag_leffler_real;
use super::SpecFunError;
use crate::scalar::{real, Real};

/// Kernel family. `Envelope` means the envelope profile itself is the kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelKind<T: Real> {
    Envelope,
    Exponential { rate: T },
    Resolvent { gamma_frac: T, lambda: T },
    CustomSampled { times: Vec<T>, values: Vec<T> },
}

/// A convolution kernel with its admissibility parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec<T: Real> {
    kind: KernelKind<T>,
    m: T,
    beta: T,
    gamma_decay: T,
    /// For resolvent kernels: fitted constants of the two-sided estimate,
    /// `|R| <= m1 t^{gamma-1}` on (0,1] and `|R| <= m2 t^{-1-gamma}` on [1,inf).
    resolvent_bounds: Option<(T, T)>,
}

impl<T: Real> KernelSpec<T> {
    /// Envelope kernel `R(t) = M t^{beta-1} / (1 + t^{gamma_decay})`.
    pub fn envelope(m: T, beta: T, gamma_decay: T) -> Result<Self, SpecFunError> {
        validate_envelope(m, beta, gamma_decay)?;
        Ok(Self {
            kind: KernelKind::Envelope,
            m,
            beta,
            gamma_decay,
            resolvent_bounds: None,
        })
    }

    /// Exponential kernel `R(t) = e^{-rate t}`, enveloped with beta = 1.
    pub fn exponential(rate: T) -> Result<Self, SpecFunError> {
        if !rate.is_finite() || rate <= T::zero() {
            return Err(SpecFunError::Domain(format!(
                "exponential kernel requires rate > 0, got {rate}"
            )));
        }
        // smallest M with e^{-rt} <= M / (1 + t^2): maximize e^{-rt}(1+t^2)
        let two = real::<T>(2.0);
        let m = if rate >= T::one() {
            T::one()
        } else {
            let t_star = (T::one() + (T::one() - rate * rate).sqrt()) / rate;
            ((-rate * t_star).exp() * (T::one() + t_star * t_star)).max(T::one())
        };
        Ok(Self {
            kind: KernelKind::Exponential { rate },
            m,
            beta: T::one(),
            gamma_decay: two,
            resolvent_bounds: None,
        })
    }

    /// Scalar resolvent kernel `R_gamma(t; lambda)` for the spectral
    /// surrogate `lambda > 0`, `gamma_frac` in (0,1).
    pub fn resolvent(gamma_frac: T, lambda: T) -> Result<Self, SpecFunError> {
        if !gamma_frac.is_finite() || gamma_frac <= T::zero() || gamma_frac >= T::one() {
            return Err(SpecFunError::Domain(format!(
                "resolvent kernel requires gamma_frac in (0,1), got {gamma_frac}"
            )));
        }
        if !lambda.is_finite() || lambda <= T::zero() {
            return Err(SpecFunError::Domain(format!(
                "resolvent kernel requires lambda > 0, got {lambda}"
            )));
        }
        // m1 is analytic: E_{g,g}(-x) <= 1/Gamma(g) for x >= 0.
        let m1 = recip_gamma(gamma_frac);
        // m2 by grid maximization of R(t) t^{1+gamma} on [1, inf); the limit
        // at infinity is lambda^{-2} / |Gamma(-gamma)|.
        let limit = (lambda * lambda).recip() * recip_gamma(-gamma_frac).abs();
        let mut m2 = limit;
        let mut t = T::one();
        let step = real::<T>(1.12);
        while t < real(1e5) {
            let r = resolvent_kernel_raw(gamma_frac, lambda, t)?;
            m2 = m2.max(r.abs() * t.powf(T::one() + gamma_frac));
            t = t * step;
        }
        Ok(Self {
            kind: KernelKind::Resolvent { gamma_frac, lambda },
            m: m1.max(m2),
            beta: gamma_frac,
            gamma_decay: T::one() + gamma_frac,
            resolvent_bounds: Some((m1, m2)),
        })
    }

    /// Kernel given by samples on a positive grid, with envelope parameters
    /// supplied by the caller.
    pub fn custom_sampled(
        times: Vec<T>,
        values: Vec<T>,
        m: T,
        beta: T,
        gamma_decay: T,
    ) -> Result<Self, SpecFunError> {
        validate_envelope(m, beta, gamma_decay)?;
        if times.len() != values.len() || times.len() < 2 {
            return Err(SpecFunError::Domain(
                "custom kernel needs at least two samples".into(),
            ));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) || times[0] <= T::zero() {
            return Err(SpecFunError::Domain(
                "custom kernel times must be positive and increasing".into(),
            ));
        }
        Ok(Self {
            kind: KernelKind::CustomSampled { times, values },
            m,
            beta,
            gamma_decay,
            resolvent_bounds: None,
        })
    }

    pub fn kind(&self) -> &KernelKind<T> {
        &self.kind
    }

    pub fn m(&self) -> T {
        self.m
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn gamma_decay(&self) -> T {
        self.gamma_decay
    }

    /// Kernel value `R(t)` for t > 0.
    pub fn eval(&self, t: T) -> Result<T, SpecFunError> {
        if !t.is_finite() || t <= T::zero() {
            return Err(SpecFunError::Domain(format!(
                "kernel evaluation requires t > 0, got {t}"
            )));
        }
        Ok(match &self.kind {
            KernelKind::Envelope => {
                self.m * t.powf(self.beta - T::one()) / (T::one() + t.powf(self.gamma_decay))
            }
            KernelKind::Exponential { rate } => (-*rate * t).exp(),
            KernelKind::Resolvent { gamma_frac, lambda } => {
                resolvent_kernel_raw(*gamma_frac, *lambda, t)?
            }
            KernelKind::CustomSampled { times, values } => interp_or_zero(times, values, t),
        })
    }

    /// Graded-variable kernel density: with the substitution `v = w^{1/beta}`
    /// the singular integral `int_0^c R(v) f(v) dv` becomes
    /// `int_0^{c^beta} eval_graded(w) f(w^{1/beta}) dw` with a bounded
    /// integrand.
    pub(crate) fn eval_graded(&self, w: T) -> Result<T, SpecFunError> {
        if w < T::zero() {
            return Err(SpecFunError::Domain("graded variable must be >= 0".into()));
        }
        let beta = self.beta;
        Ok(match &self.kind {
            KernelKind::Envelope => {
                self.m / beta / (T::one() + w.powf(self.gamma_decay / beta))
            }
            // beta = 1: the substitution is the identity
            KernelKind::Exponential { rate } => (-*rate * w).exp(),
            KernelKind::Resolvent { gamma_frac, lambda } => {
                // exact cancellation of the t^{gamma-1} singularity
                let ml = mittag_leffler_real(*gamma_frac, *gamma_frac, -*lambda * w)?;
                ml.value.re / *gamma_frac
            }
            KernelKind::CustomSampled { times, values } => {
                if w == T::zero() {
                    // limit c/beta with c = R(t0) t0^{1-beta}
                    let c = values[0] * times[0].powf(T::one() - beta);
                    c / beta
                } else {
                    let v = w.powf(beta.recip());
                    interp_or_zero(times, values, v) * v.powf(T::one() - beta) / beta
                }
            }
        })
    }

    /// Pointwise envelope dominating `|R(t)|`, used for tail bounds.
    pub fn envelope_at(&self, t: T) -> T {
        match &self.kind {
            KernelKind::Exponential { rate } => (-*rate * t).exp(),
            KernelKind::Resolvent { gamma_frac, lambda } => {
                let _ = lambda;
                let (m1, m2) = self.resolvent_bounds.expect("resolvent bounds present");
                let near = m1 * t.powf(*gamma_frac - T::one());
                let far = m2 * t.powf(-T::one() - *gamma_frac);
                near.min(far)
            }
            _ => self.m * t.powf(self.beta - T::one()) / (T::one() + t.powf(self.gamma_decay)),
        }
    }

    /// Upper bound for `sum_{n >= n0} sup_{[n, n+1]} envelope`, `n0 >= 1`.
    /// This is the per-unit-window Holder factor of the convolution tail.
    pub(crate) fn envelope_window_sum_from(&self, n0: T) -> T {
        debug_assert!(n0 >= T::one());
        match &self.kind {
            KernelKind::Exponential { rate } => {
                // sum e^{-r n} = e^{-r n0} / (1 - e^{-r})
                (-*rate * n0).exp() / (T::one() - (-*rate).exp())
            }
            KernelKind::Resolvent { gamma_frac, .. } => {
                let (_, m2) = self.resolvent_bounds.expect("resolvent bounds present");
                let g = *gamma_frac;
                // sum n^{-1-g} <= n0^{-1-g} + n0^{-g}/g
                m2 * (n0.powf(-T::one() - g) + n0.powf(-g) / g)
            }
            _ => {
                // envelope decreasing on [1, inf): sup over [n,n+1] is at n;
                // sum_{n>=n0} env(n) <= env(n0) + int_{n0}^inf M t^{beta-1-gamma} dt
                self.envelope_at(n0)
                    + self.m * n0.powf(self.beta - self.gamma_decay)
                        / (self.gamma_decay - self.beta)
            }
        }
    }

    /// Smallest grid-free tail start `v` with
    /// `envelope_window_sum_from(v) * stepanov <= tol`, by doubling then
    /// bisection. Errors when no tail below `hard_cap` works.
    pub(crate) fn required_tail_start(&self, stepanov: T, tol: T, hard_cap: T) -> Option<T> {
        let ok = |v: T| self.envelope_window_sum_from(v) * stepanov <= tol;
        let mut hi = T::one();
        while !ok(hi) {
            hi = hi * real(2.0);
            if hi > hard_cap {
                return None;
            }
        }
        let mut lo = (hi / real(2.0)).max(T::one());
        for _ in 0..60 {
            let mid = (lo + hi) / real(2.0);
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }
}

fn validate_envelope<T: Real>(m: T, beta: T, gamma_decay: T) -> Result<(), SpecFunError> {
    if !m.is_finite() || m <= T::zero() {
        return Err(SpecFunError::Domain(format!("envelope requires M > 0, got {m}")));
    }
    if !beta.is_finite() || beta <= T::zero() || beta > T::one() {
        return Err(SpecFunError::Domain(format!(
            "envelope requires beta in (0,1], got {beta}"
        )));
    }
    if !gamma_decay.is_finite() || gamma_decay <= T::one() {
        return Err(SpecFunError::Domain(format!(
            "envelope requires gamma_decay > 1, got {gamma_decay}"
        )));
    }
    Ok(())
}

fn interp_or_zero<T: Real>(times: &[T], values: &[T], t: T) -> T {
    if t <= times[0] {
        return values[0];
    }
    if t >= *times.last().unwrap() {
        return T::zero();
    }
    // uniform-ish grids are the common case but search is robust either way
    let idx = match times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
        Ok(i) => return values[i],
        Err(i) => i,
    };
    let (t0, t1) = (times[idx - 1], times[idx]);
    let w = (t - t0) / (t1 - t0);
    values[idx - 1] * (T::one() - w) + values[idx] * w
}

/// Scalar resolvent kernel `t^{gamma-1} E_{gamma,gamma}(-lambda t^gamma)`.
/// `lambda = 0` is allowed and reduces to `g_gamma(t)`.
pub fn resolvent_kernel_raw<T: Real>(gamma_frac: T, lambda: T, t: T) -> Result<T, SpecFunError> {
    if !t.is_finite() || t <= T::zero() {
        return Err(SpecFunError::Domain(format!(
            "resolvent kernel requires t > 0, got {t}"
        )));
    }
    if gamma_frac <= T::zero() || gamma_frac > T::one() {
        return Err(SpecFunError::Domain(format!(
            "resolvent kernel requires gamma_frac in (0,1], got {gamma_frac}"
        )));
    }
    let ml = mittag_leffler_real(gamma_frac, gamma_frac, -lambda * t.powf(gamma_frac))?;
    Ok(t.powf(gamma_frac - T::one()) * ml.value.re)
}

/// Resolvent kernel of a [`KernelSpec`] with `kind = Resolvent`.
pub fn resolvent_kernel<T: Real>(spec: &KernelSpec<T>, t: T) -> Result<T, SpecFunError> {
    match spec.kind() {
        KernelKind::Resolvent { gamma_frac, lambda } => {
            resolvent_kernel_raw(*gamma_frac, *lambda, t)
        }
        _ => Err(SpecFunError::Domain(
            "resolvent_kernel requires a resolvent kernel spec".into(),
        )),
    }
}

/// Solution family `S_gamma(t; lambda) = E_gamma(-lambda t^gamma)`,
/// defined for t >= 0, equal to 1 at t = 0 and decaying to 0.
/// `gamma_frac = 1` gives the exponential exactly.
pub fn solution_family<T: Real>(gamma_frac: T, lambda: T, t: T) -> Result<T, SpecFunError> {
    if gamma_frac <= T::zero() || gamma_frac > T::one() {
        return Err(SpecFunError::Domain(format!(
            "solution_family requires gamma_frac in (0,1], got {gamma_frac}"
        )));
    }
    if !t.is_finite() || t < T::zero() {
        return Err(SpecFunError::Domain(format!(
            "solution_family requires t >= 0, got {t}"
        )));
    }
    if lambda < T::zero() {
        return Err(SpecFunError::Domain(format!(
            "solution_family requires lambda >= 0, got {lambda}"
        )));
    }
    if t == T::zero() {
        return Ok(T::one());
    }
    let ml = mittag_leffler_real(gamma_frac, T::one(), -lambda * t.powf(gamma_frac))?;
    Ok(ml.value.re)
}

/// Result of an envelope fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct EnvelopeFit<T: Real> {
    /// Smallest M with `|R(t)| <= M t^{beta-1} / (1 + t^{gamma_decay})`
    /// on the grid.
    pub m_fit: T,
    pub ok: bool,
    /// For resolvent kernels, the two constants of the split estimate
    /// fitted on the grid: (M1 on (0,1], M2 on [1, inf)).
    pub eq_two_sided: Option<(T, T)>,
}

/// Fit the envelope constant by grid maximization of
/// `|R(t)| (1 + t^{gamma_decay}) t^{1-beta}`.
pub fn envelope_check<T: Real>(
    spec: &KernelSpec<T>,
    t_grid: &[T],
) -> Result<EnvelopeFit<T>, SpecFunError> {
    if t_grid.is_empty() || t_grid.iter().any(|&t| t <= T::zero() || !t.is_finite()) {
        return Err(SpecFunError::Domain(
            "envelope_check requires a nonempty strictly positive grid".into(),
        ));
    }
    let mut m_fit = T::zero();
    let mut m1 = T::zero();
    let mut m2 = T::zero();
    for &t in t_grid {
        let r = spec.eval(t)?.abs();
        m_fit = m_fit.max(r * (T::one() + t.powf(spec.gamma_decay())) * t.powf(T::one() - spec.beta()));
        if let KernelKind::Resolvent { gamma_frac, .. } = spec.kind() {
            if t <= T::one() {
                m1 = m1.max(r * t.powf(T::one() - *gamma_frac));
            } else {
                m2 = m2.max(r * t.powf(T::one() + *gamma_frac));
            }
        }
    }
    let eq_two_sided = match spec.kind() {
        KernelKind::Resolvent { .. } => Some((m1, m2)),
        _ => None,
    };
    Ok(EnvelopeFit {
        m_fit,
        ok: m_fit.is_finite(),
        eq_two_sided,
    })
}

/// `Gamma(x)` on the full line except poles; re-exported for the harness.
pub fn gamma_full<T: Real>(x: T) -> T {
    gamma_any(x)
}
