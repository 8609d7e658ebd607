//! Test-function generators: trigonometric polynomials and the two
//! Besicovitch-vanishing families.

use num_complex::Complex;

use super::sampled::{DomainKind, GridSpec, SampledFunction};
use super::FuncSpaceError;
use crate::scalar::{real, Real};

/// A finite trigonometric polynomial `sum_k c_k e^{i omega_k t}` with
/// d-dimensional complex coefficient vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial<T: Real> {
    freqs: Vec<T>,
    coeffs: Vec<Vec<Complex<T>>>,
    dim: usize,
}

impl<T: Real> TrigPolynomial<T> {
    pub fn new(freqs: Vec<T>, coeffs: Vec<Vec<Complex<T>>>) -> Result<Self, FuncSpaceError> {
        if freqs.len() != coeffs.len() {
            return Err(FuncSpaceError::Grid(
                "frequency and coefficient lists must have the same length".into(),
            ));
        }
        // the empty polynomial is the zero function, one-dimensional
        let dim = coeffs.first().map_or(1, Vec::len);
        if dim == 0 || coeffs.iter().any(|c| c.len() != dim) {
            return Err(FuncSpaceError::Grid(
                "coefficient vectors must share a positive dimension".into(),
            ));
        }
        if freqs.iter().any(|w| !w.is_finite())
            || coeffs
                .iter()
                .flatten()
                .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(FuncSpaceError::Grid("non-finite polynomial data".into()));
        }
        Ok(Self { freqs, coeffs, dim })
    }

    /// Scalar (1-dimensional) polynomial from plain complex coefficients.
    pub fn scalar(freqs: Vec<T>, coeffs: Vec<Complex<T>>) -> Result<Self, FuncSpaceError> {
        let coeffs = coeffs.into_iter().map(|c| vec![c]).collect();
        Self::new(freqs, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn freqs(&self) -> &[T] {
        &self.freqs
    }

    pub fn coeffs(&self) -> &[Vec<Complex<T>>] {
        &self.coeffs
    }

    pub fn has_zero_freq(&self) -> bool {
        self.freqs.iter().any(|w| w.abs() < real(1e-12))
    }

    /// Evaluate into a caller-provided slice of length `dim`.
    pub fn eval_into(&self, t: T, out: &mut [Complex<T>]) {
        for slot in out.iter_mut() {
            *slot = Complex::new(T::zero(), T::zero());
        }
        for (w, c) in self.freqs.iter().zip(&self.coeffs) {
            let e = Complex::new(T::zero(), *w * t).exp();
            for (slot, ck) in out.iter_mut().zip(c) {
                *slot = *slot + *ck * e;
            }
        }
    }

    /// The translate `t -> f(t + tau)`: coefficients rotate by `e^{i w tau}`.
    pub fn shifted(&self, tau: T) -> Self {
        let coeffs = self
            .freqs
            .iter()
            .zip(&self.coeffs)
            .map(|(w, c)| {
                let e = Complex::new(T::zero(), *w * tau).exp();
                c.iter().map(|ck| *ck * e).collect()
            })
            .collect();
        Self {
            freqs: self.freqs.clone(),
            coeffs,
            dim: self.dim,
        }
    }

    pub fn scaled(&self, a: Complex<T>) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.iter().map(|ck| *ck * a).collect())
            .collect();
        Self {
            freqs: self.freqs.clone(),
            coeffs,
            dim: self.dim,
        }
    }

    /// k-th order bounded antiderivative: coefficients divided by
    /// `(i omega)^k`. Requires every frequency to be nonzero.
    pub fn antiderivative(&self, order: u32) -> Result<Self, FuncSpaceError> {
        if self.has_zero_freq() {
            return Err(FuncSpaceError::Grid(
                "bounded antiderivative requires nonzero frequencies".into(),
            ));
        }
        let coeffs = self
            .freqs
            .iter()
            .zip(&self.coeffs)
            .map(|(w, c)| {
                let iw = Complex::new(T::zero(), *w);
                let div = iw.powu(order);
                c.iter().map(|ck| *ck / div).collect()
            })
            .collect();
        Ok(Self {
            freqs: self.freqs.clone(),
            coeffs,
            dim: self.dim,
        })
    }

    /// `sum_k |c_k|` (Euclidean norms), a crude sup bound.
    pub fn coeff_norm_sum(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt())
            .fold(T::zero(), |a, b| a + b)
    }

    /// Sample the polynomial on a grid, tagging the result.
    pub fn sample(&self, grid: &GridSpec<T>) -> Result<SampledFunction<T>, FuncSpaceError> {
        grid.validate()?;
        let n = grid.len();
        let t0 = grid.t_lo();
        let f = SampledFunction::from_fn(grid.domain, t0, grid.dt, n, self.dim, |t, out| {
            self.eval_into(t, out)
        })?;
        Ok(f.with_tag(self.clone()))
    }

    /// Sample on an explicit uniform grid `t0 + i dt`, `i < n`.
    pub fn sample_range(
        &self,
        domain: DomainKind,
        t0: T,
        dt: T,
        n: usize,
    ) -> Result<SampledFunction<T>, FuncSpaceError> {
        let f = SampledFunction::from_fn(domain, t0, dt, n, self.dim, |t, out| {
            self.eval_into(t, out)
        })?;
        Ok(f.with_tag(self.clone()))
    }
}

/// Sample `sum_k c_k e^{i omega_k t}` on the grid. An empty frequency list
/// yields the zero function.
pub fn make_trig_polynomial<T: Real>(
    freqs: &[T],
    coeffs: &[Vec<Complex<T>>],
    grid: &GridSpec<T>,
) -> Result<SampledFunction<T>, FuncSpaceError> {
    TrigPolynomial::new(freqs.to_vec(), coeffs.to_vec())?.sample(grid)
}

/// The two Besicovitch-vanishing test families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishingKind {
    /// `q(t) = 1 / (1 + |t|)`: bounded, decaying, vanishing seminorm.
    ReciprocalDecay,
    /// Triangular spikes at integer centers `n` with p-mass `n^{-p}`:
    /// pointwise unbounded (when the grid resolves the analytic widths
    /// `n^{-2p}`), Stepanov p-bounded, Besicovitch p-vanishing.
    ShrinkingSpikes,
}

/// Generate a vanishing test function for the exponent `p`.
///
/// Spike widths narrower than two grid cells are clamped to `2 dt` with the
/// height rescaled so the p-mass of each spike stays `n^{-p}`; any pointwise
/// sampling of a sub-grid spike would otherwise misrepresent exactly the
/// integrals the estimators consume.
pub fn make_vanishing<T: Real>(
    kind: VanishingKind,
    grid: &GridSpec<T>,
    p: T,
) -> Result<SampledFunction<T>, FuncSpaceError> {
    grid.validate()?;
    if p < T::one() {
        return Err(FuncSpaceError::Grid(format!("p must be >= 1, got {p}")));
    }
    match kind {
        VanishingKind::ReciprocalDecay => {
            let n = grid.len();
            SampledFunction::from_fn(grid.domain, grid.t_lo(), grid.dt, n, 1, |t, out| {
                out[0] = Complex::new((T::one() + t.abs()).recip(), T::zero());
            })
        }
        VanishingKind::ShrinkingSpikes => {
            let n = grid.len();
            let t0 = grid.t_lo();
            let dt = grid.dt;
            let mut data = vec![Complex::new(T::zero(), T::zero()); n];
            let mut times = Vec::with_capacity(n);
            for i in 0..n {
                times.push(t0 + real::<T>(i as f64) * dt);
            }
            let t_end = times[n - 1];
            // spikes at every integer center with |center| >= 1 inside the window
            let mut c = t0.ceil();
            while c <= t_end {
                if c.abs() >= T::one() {
                    add_spike(&mut data, &times, dt, c, p);
                }
                c = c + T::one();
            }
            SampledFunction::from_parts(grid.domain, times, dt, 1, data, None)
        }
    }
}

fn add_spike<T: Real>(data: &mut [Complex<T>], times: &[T], dt: T, center: T, p: T) {
    let n_abs = center.abs();
    let two = real::<T>(2.0);
    // analytic width n^{-2p}, clamped to two grid cells
    let width = n_abs.powf(-two * p).max(two * dt);
    // height keeps the spike's p-mass at n^{-p}: int |q|^p = h^p w / (p+1)
    let height = ((p + T::one()) * n_abs.powf(-p) / width).powf(p.recip());
    let half = width / two;
    let t0 = times[0];
    let lo = ((center - half - t0) / dt).ceil().max(T::zero());
    let hi = ((center + half - t0) / dt).floor();
    let (Some(lo), Some(hi)) = (lo.to_usize(), hi.to_usize()) else {
        return;
    };
    for i in lo..=hi.min(times.len() - 1) {
        let frac = T::one() - (times[i] - center).abs() / half;
        if frac > T::zero() {
            data[i] = data[i] + Complex::new(height * frac, T::zero());
        }
    }
}
