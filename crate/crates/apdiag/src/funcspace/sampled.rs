//! Uniform-grid representation of vector-valued functions.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::generate::TrigPolynomial;
use super::FuncSpaceError;
use crate::scalar::{real, Real};

/// Domain of definition: the whole line or the half line `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainKind {
    WholeLine,
    HalfLine,
}

/// Uniform grid specification. Whole-line grids are symmetric around zero,
/// half-line grids start at zero.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec<T: Real> {
    pub domain: DomainKind,
    pub t_max: T,
    pub dt: T,
}

impl<T: Real> GridSpec<T> {
    pub fn whole_line(t_max: T, dt: T) -> Self {
        Self {
            domain: DomainKind::WholeLine,
            t_max,
            dt,
        }
    }

    pub fn half_line(t_max: T, dt: T) -> Self {
        Self {
            domain: DomainKind::HalfLine,
            t_max,
            dt,
        }
    }

    pub fn validate(&self) -> Result<(), FuncSpaceError> {
        if !self.dt.is_finite() || self.dt <= T::zero() {
            return Err(FuncSpaceError::Grid(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !self.t_max.is_finite() || self.t_max < self.dt {
            return Err(FuncSpaceError::Grid(format!(
                "t_max must be at least dt, got {}",
                self.t_max
            )));
        }
        Ok(())
    }

    /// Number of half-steps from 0 to `t_max` (snapping `t_max` to the grid).
    pub(crate) fn steps(&self) -> usize {
        (self.t_max / self.dt)
            .round()
            .to_usize()
            .expect("grid size must fit in usize")
    }

    pub fn t_lo(&self) -> T {
        match self.domain {
            DomainKind::WholeLine => -real::<T>(self.steps() as f64) * self.dt,
            DomainKind::HalfLine => T::zero(),
        }
    }

    pub fn len(&self) -> usize {
        match self.domain {
            DomainKind::WholeLine => 2 * self.steps() + 1,
            DomainKind::HalfLine => self.steps() + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A locally p-integrable function sampled on a uniform grid.
///
/// Values are d-dimensional complex vectors stored row-major. Instances are
/// immutable after construction; all operators return new functions.
#[derive(Debug, Clone)]
pub struct SampledFunction<T: Real> {
    domain: DomainKind,
    times: Vec<T>,
    dt: T,
    dim: usize,
    data: Vec<Complex<T>>,
    trig_tag: Option<TrigPolynomial<T>>,
}

impl<T: Real> SampledFunction<T> {
    pub(crate) fn from_parts(
        domain: DomainKind,
        times: Vec<T>,
        dt: T,
        dim: usize,
        data: Vec<Complex<T>>,
        trig_tag: Option<TrigPolynomial<T>>,
    ) -> Result<Self, FuncSpaceError> {
        if times.is_empty() || dim == 0 || data.len() != times.len() * dim {
            return Err(FuncSpaceError::Grid(
                "values must be nonempty with len = n * dim".into(),
            ));
        }
        if !dt.is_finite() || dt <= T::zero() {
            return Err(FuncSpaceError::Grid("dt must be positive".into()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(FuncSpaceError::Grid("non-finite sample value".into()));
        }
        Ok(Self {
            domain,
            times,
            dt,
            dim,
            data,
            trig_tag,
        })
    }

    /// Build from a closure evaluated on an explicit uniform grid
    /// `t_i = t0 + i dt`, `i = 0..n`.
    pub fn from_fn(
        domain: DomainKind,
        t0: T,
        dt: T,
        n: usize,
        dim: usize,
        mut f: impl FnMut(T, &mut [Complex<T>]),
    ) -> Result<Self, FuncSpaceError> {
        if n == 0 || dim == 0 {
            return Err(FuncSpaceError::Grid("empty grid".into()));
        }
        let mut times = Vec::with_capacity(n);
        let mut data = vec![Complex::new(T::zero(), T::zero()); n * dim];
        for i in 0..n {
            let t = t0 + real::<T>(i as f64) * dt;
            times.push(t);
            f(t, &mut data[i * dim..(i + 1) * dim]);
        }
        Self::from_parts(domain, times, dt, dim, data, None)
    }

    pub(crate) fn with_tag(mut self, tag: TrigPolynomial<T>) -> Self {
        self.trig_tag = Some(tag);
        self
    }

    pub fn domain(&self) -> DomainKind {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn t0(&self) -> T {
        self.times[0]
    }

    pub fn t_end(&self) -> T {
        *self.times.last().unwrap()
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn trig_tag(&self) -> Option<&TrigPolynomial<T>> {
        self.trig_tag.as_ref()
    }

    /// Squared Euclidean norm of the value at grid index `i`.
    #[inline]
    pub fn norm_sq_at(&self, i: usize) -> T {
        let mut s = T::zero();
        for z in self.row(i) {
            s += z.norm_sqr();
        }
        s
    }

    /// Grid index of time zero, if it lies on the grid.
    pub fn index_of_zero(&self) -> Result<usize, FuncSpaceError> {
        self.index_of_time(T::zero())
    }

    /// Grid index of time `t`, validated against the stored times.
    pub fn index_of_time(&self, t: T) -> Result<usize, FuncSpaceError> {
        let r = (t - self.t0()) / self.dt;
        let i = r.round();
        if (r - i).abs() > real(1e-6) {
            return Err(FuncSpaceError::Grid(format!(
                "time {t} is not on the grid (dt = {})",
                self.dt
            )));
        }
        let i = i
            .to_isize()
            .filter(|&i| i >= 0 && (i as usize) < self.len())
            .ok_or_else(|| {
                FuncSpaceError::Grid(format!("time {t} outside the stored window"))
            })?;
        Ok(i as usize)
    }

    /// Number of grid steps equivalent to the shift `tau`; errors when `tau`
    /// is not an integer multiple of `dt` (no interpolation is performed).
    pub fn steps_of(&self, tau: T) -> Result<i64, FuncSpaceError> {
        let r = tau / self.dt;
        let s = r.round();
        if (r - s).abs() > real(1e-6) {
            return Err(FuncSpaceError::Grid(format!(
                "shift {tau} is not an integer multiple of dt = {}",
                self.dt
            )));
        }
        s.to_i64()
            .ok_or_else(|| FuncSpaceError::Grid("shift out of range".into()))
    }

    /// Linear interpolation of the value at an off-grid time inside the
    /// window, written into `out`.
    pub fn interp_into(&self, t: T, out: &mut [Complex<T>]) -> Result<(), FuncSpaceError> {
        let r = (t - self.t0()) / self.dt;
        if r < T::zero() || r > real::<T>((self.len() - 1) as f64) {
            return Err(FuncSpaceError::Window(format!(
                "time {t} outside the stored window [{}, {}]",
                self.t0(),
                self.t_end()
            )));
        }
        if self.len() == 1 {
            out.copy_from_slice(self.row(0));
            return Ok(());
        }
        let i = r.floor().to_usize().unwrap().min(self.len() - 2);
        let frac = r - real::<T>(i as f64);
        let a = self.row(i);
        let b = self.row(i + 1);
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = a[k] * (T::one() - frac) + b[k] * frac;
        }
        Ok(())
    }

    /// The translate `t -> f(t + tau)` with `tau = steps * dt`, restricted to
    /// the stored window. Whole-line functions are trimmed symmetrically so
    /// the result stays centered; half-line functions require `steps >= 0`.
    pub fn shift_on_grid(&self, steps: i64) -> Result<Self, FuncSpaceError> {
        let n = self.len() as i64;
        let tau = real::<T>(steps as f64) * self.dt;
        let (lo, hi) = match self.domain {
            DomainKind::WholeLine => {
                let k = steps.abs();
                if 2 * k >= n {
                    return Err(FuncSpaceError::Window(
                        "shift exceeds half the stored window".into(),
                    ));
                }
                (k, n - k)
            }
            DomainKind::HalfLine => {
                if steps < 0 {
                    return Err(FuncSpaceError::Grid(
                        "half-line translation requires tau >= 0".into(),
                    ));
                }
                if steps >= n {
                    return Err(FuncSpaceError::Window("shift exceeds the window".into()));
                }
                (0, n - steps)
            }
        };
        let mut times = Vec::with_capacity((hi - lo) as usize);
        let mut data = Vec::with_capacity(((hi - lo) as usize) * self.dim);
        for j in lo..hi {
            let src = (j + steps) as usize;
            times.push(self.times[j as usize]);
            data.extend_from_slice(self.row(src));
        }
        let tag = self.trig_tag.as_ref().map(|p| p.shifted(tau));
        Self::from_parts(self.domain, times, self.dt, self.dim, data, tag)
    }

    /// Restriction of a whole-line function to `[0, inf)`.
    pub fn restrict_to_half_line(&self) -> Result<Self, FuncSpaceError> {
        let i0 = self.index_of_zero()?;
        let times = self.times[i0..].to_vec();
        let data = self.data[i0 * self.dim..].to_vec();
        Self::from_parts(
            DomainKind::HalfLine,
            times,
            self.dt,
            self.dim,
            data,
            self.trig_tag.clone(),
        )
    }

    /// Pointwise scaling by a complex constant.
    pub fn scaled(&self, c: Complex<T>) -> Self {
        let mut out = self.clone();
        for z in &mut out.data {
            *z = *z * c;
        }
        out.trig_tag = self.trig_tag.as_ref().map(|p| p.scaled(c));
        out
    }

    /// Pointwise sum; both functions must live on the identical grid.
    pub fn try_add(&self, other: &Self) -> Result<Self, FuncSpaceError> {
        self.check_same_grid(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| *a + *b)
            .collect();
        Self::from_parts(self.domain, self.times.clone(), self.dt, self.dim, data, None)
    }

    /// Pointwise difference; both functions must live on the identical grid.
    pub fn try_sub(&self, other: &Self) -> Result<Self, FuncSpaceError> {
        self.check_same_grid(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| *a - *b)
            .collect();
        Self::from_parts(self.domain, self.times.clone(), self.dt, self.dim, data, None)
    }

    fn check_same_grid(&self, other: &Self) -> Result<(), FuncSpaceError> {
        let tol = self.dt * real(1e-9);
        if self.domain != other.domain
            || self.dim != other.dim
            || self.len() != other.len()
            || (self.dt - other.dt).abs() > tol
            || (self.t0() - other.t0()).abs() > tol
        {
            return Err(FuncSpaceError::Grid(
                "functions live on different grids".into(),
            ));
        }
        Ok(())
    }

    /// Largest jump between adjacent samples, a grid-level continuity probe.
    pub fn max_adjacent_jump(&self) -> T {
        let mut m = T::zero();
        for i in 1..self.len() {
            let mut s = T::zero();
            for k in 0..self.dim {
                s += (self.data[i * self.dim + k] - self.data[(i - 1) * self.dim + k]).norm_sqr();
            }
            m = m.max(s.sqrt());
        }
        m
    }

    /// Pointwise sup of the Euclidean norm over the window.
    pub fn sup_norm(&self) -> T {
        (0..self.len()).fold(T::zero(), |m, i| m.max(self.norm_sq_at(i).sqrt()))
    }
}
