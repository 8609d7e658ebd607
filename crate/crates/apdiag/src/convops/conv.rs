//! Infinite and finite convolution products against singular kernels.
//!
//! `G(t) = int_0^{v_tail} R(v) g(t - v) dv` with
//! * the kernel singularity at `v = 0` handled by the graded substitution
//!   `v = w^{1/beta}` (bounded transformed integrand, trapezoid in `w`),
//! * the composite trapezoid rule on `[v_cut, v_tail]` aligned with the
//!   input grid (no interpolation there),
//! * a certified kernel tail bound
//!   `sum_{n >= v_tail} sup_{[n,n+1]} env(R) * ||g||_{S^p} <= tol_tail`
//!   (the per-unit-window Holder pairing of the invariance proofs).

use num_complex::Complex;
use rayon::prelude::*;

use crate::funcspace::{stepanov_norm, DomainKind, SampledFunction};
use crate::scalar::{real, Real};
use crate::specfun::KernelSpec;

use super::config::{admissibility, power_singular_integral, ConvolutionConfig};
use super::ConvError;

/// A convolution output together with its certified error/bound data.
#[derive(Debug, Clone)]
pub struct Convolution<T: Real> {
    pub function: SampledFunction<T>,
    /// Certified bound on the dropped kernel tail, uniform in t.
    pub tail_bound: T,
    /// Kernel support truncation actually used.
    pub v_tail: T,
    /// Holder bound constant: `sup ||G|| <= c_kernel * ||g||_{S^p}`.
    pub c_kernel: T,
    /// Stepanov norm of the input, as used in the bounds.
    pub stepanov_input: T,
}

/// Shared quadrature tables for one kernel/config pair.
struct KernelTables<T: Real> {
    /// Graded nodes: `(abscissa v_j, transformed weight, trapezoid factor)`.
    graded: Vec<(T, T)>,
    h_w: T,
    v_cut: T,
    cut_steps: usize,
    /// Kernel values on `v_cut + k dt`.
    main: Vec<T>,
}

impl<T: Real> KernelTables<T> {
    fn build(
        spec: &KernelSpec<T>,
        cfg: &ConvolutionConfig<T>,
        dt: T,
        main_len_cap: usize,
    ) -> Result<Self, ConvError> {
        let cut_steps = (cfg.v_singular_cut / dt)
            .round()
            .to_usize()
            .filter(|&m| m >= 1)
            .ok_or_else(|| ConvError::Hypothesis("v_singular_cut below grid step".into()))?;
        let v_cut = dt * real::<T>(cut_steps as f64);
        let beta = spec.beta();
        // enough graded nodes that the outer panels resolve dv ~ dt
        let m_w = ((v_cut / (dt * beta)).ceil().to_usize().unwrap_or(64)).max(64);
        let w_up = v_cut.powf(beta);
        let h_w = w_up / real(m_w as f64);
        let mut graded = Vec::with_capacity(m_w + 1);
        for j in 0..=m_w {
            let w = h_w * real(j as f64);
            let weight = spec.eval_graded(w).map_err(ConvError::SpecFun)?;
            let v = w.powf(beta.recip());
            graded.push((v, weight));
        }
        let mut main = Vec::with_capacity(main_len_cap + 1);
        for k in 0..=main_len_cap {
            let v = v_cut + dt * real(k as f64);
            main.push(spec.eval(v).map_err(ConvError::SpecFun)?);
        }
        Ok(Self {
            graded,
            h_w,
            v_cut,
            cut_steps,
            main,
        })
    }
}

/// Evaluate the singular part `int_0^{v_cut} R(v) f(t - v) dv` via the
/// graded tables, interpolating `f` linearly at the graded abscissae.
fn singular_part<T: Real>(
    tables: &KernelTables<T>,
    f: &SampledFunction<T>,
    t: T,
    scratch: &mut [Complex<T>],
    acc: &mut [Complex<T>],
) {
    let m = tables.graded.len() - 1;
    for a in acc.iter_mut() {
        *a = Complex::new(T::zero(), T::zero());
    }
    for (j, &(v, weight)) in tables.graded.iter().enumerate() {
        f.interp_into(t - v, scratch)
            .expect("graded abscissa inside the validated window");
        let trap = if j == 0 || j == m {
            real::<T>(0.5)
        } else {
            T::one()
        };
        let w = weight * trap * tables.h_w;
        for (a, s) in acc.iter_mut().zip(scratch.iter()) {
            *a = *a + *s * w;
        }
    }
}

/// Trapezoid over `[v_cut, v_cut + steps dt]` using exact grid rows of `f`;
/// `i_of_t_minus_cut` is the grid index of `t - v_cut`.
fn main_part<T: Real>(
    tables: &KernelTables<T>,
    f: &SampledFunction<T>,
    i_of_t_minus_cut: usize,
    steps: usize,
    dt: T,
    acc: &mut [Complex<T>],
) {
    let dim = f.dim();
    let data = f.data();
    for k in 0..=steps {
        let r = tables.main[k];
        let trap = if k == 0 || k == steps {
            real::<T>(0.5)
        } else {
            T::one()
        };
        let w = r * trap * dt;
        let row = (i_of_t_minus_cut - k) * dim;
        for (d, a) in acc.iter_mut().enumerate() {
            *a = *a + data[row + d] * w;
        }
    }
}

/// Holder bound constant `c_kernel`: unit-window norms of the kernel,
/// `||R||_{L^q[0,1]} + sum_{n>=1} sup_{[n,n+1]} env(R)`.
fn kernel_bound_constant<T: Real>(spec: &KernelSpec<T>, p: T) -> Result<T, ConvError> {
    let head = if p == T::one() {
        // q = infinity: admissibility enforces beta = 1, so R is bounded
        let mut sup = T::zero();
        let mut v = real::<T>(1e-4);
        while v <= T::one() {
            sup = sup.max(spec.eval(v).map_err(ConvError::SpecFun)?.abs());
            v += real(1e-3);
        }
        sup
    } else {
        let q = p / (p - T::one());
        let beta = spec.beta();
        let g = move |v: T| {
            spec.eval(v)
                .map(|r| r.abs().powf(q))
                .unwrap_or(T::zero())
        };
        power_singular_integral(&g, q * (beta - T::one()), T::one(), 4_000).powf(q.recip())
    };
    Ok(head + spec.envelope_window_sum_from(T::one()))
}

fn validate_and_tail<T: Real>(
    spec: &KernelSpec<T>,
    cfg: &ConvolutionConfig<T>,
    f: &SampledFunction<T>,
    dt: T,
) -> Result<(T, T, usize), ConvError> {
    let adm = admissibility(cfg.p, spec);
    if !adm.ok {
        return Err(ConvError::Hypothesis(adm.reason));
    }
    let sn = stepanov_norm(f, cfg.p).map_err(ConvError::FuncSpace)?;
    let tail_steps = (cfg.v_tail_cut / dt)
        .ceil()
        .to_usize()
        .ok_or_else(|| ConvError::Hypothesis("v_tail_cut out of range".into()))?;
    let v_tail = dt * real::<T>(tail_steps as f64);
    let tail_bound = spec.envelope_window_sum_from(v_tail.max(T::one())) * sn;
    if tail_bound > cfg.tol_tail {
        let required = spec
            .required_tail_start(sn, cfg.tol_tail, real(1e9))
            .map(|v| format!("{v:.3e}"))
            .unwrap_or_else(|| "beyond 1e9".into());
        return Err(ConvError::TailBound {
            bound: format!("{tail_bound:.3e}"),
            tol: format!("{:.3e}", cfg.tol_tail),
            required_v_tail: required,
        });
    }
    Ok((sn, tail_bound, tail_steps))
}

/// Infinite convolution product `G(t) = int_{-inf}^t R(t-s) g(s) ds`
/// evaluated on the grid times of `g` in `[t_lo, t_hi]`.
///
/// Preconditions: `g` is a whole-line function whose window covers
/// `[t_lo - v_tail, t_hi]`, both endpoints lie on the grid of `g`, and the
/// kernel/exponent pair is admissible.
pub fn infinite_convolution<T: Real>(
    spec: &KernelSpec<T>,
    g: &SampledFunction<T>,
    t_lo: T,
    t_hi: T,
    cfg: &ConvolutionConfig<T>,
) -> Result<Convolution<T>, ConvError> {
    if g.domain() != DomainKind::WholeLine {
        return Err(ConvError::Hypothesis(
            "infinite convolution needs a whole-line input".into(),
        ));
    }
    let dt = g.dt();
    let (sn, tail_bound, tail_steps) = validate_and_tail(spec, cfg, g, dt)?;

    let i_lo = g.index_of_time(t_lo).map_err(ConvError::FuncSpace)?;
    let i_hi = g.index_of_time(t_hi).map_err(ConvError::FuncSpace)?;
    if i_hi < i_lo {
        return Err(ConvError::Hypothesis("empty output grid".into()));
    }
    if i_lo < tail_steps {
        return Err(ConvError::WindowTooSmall(format!(
            "input must cover t_lo - v_tail = {}",
            t_lo - dt * real::<T>(tail_steps as f64)
        )));
    }
    let cut_probe = (cfg.v_singular_cut / dt).round().to_usize().unwrap_or(1);
    if cut_probe > tail_steps {
        return Err(ConvError::Hypothesis(
            "v_singular_cut exceeds v_tail_cut".into(),
        ));
    }

    let tables = KernelTables::build(spec, cfg, dt, (tail_steps - cut_probe).max(1))?;
    let main_steps = tail_steps - tables.cut_steps;
    let dim = g.dim();

    let rows: Vec<Complex<T>> = (i_lo..=i_hi)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut acc = vec![Complex::new(T::zero(), T::zero()); dim];
            let mut acc2 = vec![Complex::new(T::zero(), T::zero()); dim];
            let mut scratch = vec![Complex::new(T::zero(), T::zero()); dim];
            let t = g.times()[i];
            singular_part(&tables, g, t, &mut scratch, &mut acc);
            main_part(&tables, g, i - tables.cut_steps, main_steps, dt, &mut acc2);
            (0..dim).map(move |d| acc[d] + acc2[d]).collect::<Vec<_>>()
        })
        .collect();

    let times = g.times()[i_lo..=i_hi].to_vec();
    let function = SampledFunction::from_parts(DomainKind::WholeLine, times, dt, dim, rows, None)
        .map_err(ConvError::FuncSpace)?;
    Ok(Convolution {
        function,
        tail_bound,
        v_tail: dt * real::<T>(tail_steps as f64),
        c_kernel: kernel_bound_constant(spec, cfg.p)?,
        stepanov_input: sn,
    })
}

/// Finite convolution product `H(t) = int_0^t R(t-s) h(s) ds` on the grid
/// of the half-line input `h`, for `t <= t_hi`. `H(0) = 0` exactly.
pub fn finite_convolution<T: Real>(
    spec: &KernelSpec<T>,
    h: &SampledFunction<T>,
    t_hi: T,
    cfg: &ConvolutionConfig<T>,
) -> Result<Convolution<T>, ConvError> {
    if h.domain() != DomainKind::HalfLine {
        return Err(ConvError::Hypothesis(
            "finite convolution needs a half-line input".into(),
        ));
    }
    let dt = h.dt();
    let (sn, tail_bound, tail_steps) = validate_and_tail(spec, cfg, h, dt)?;
    let i_hi = h.index_of_time(t_hi).map_err(ConvError::FuncSpace)?;

    let cut_probe = (cfg.v_singular_cut / dt).round().to_usize().unwrap_or(1);
    if cut_probe > tail_steps {
        return Err(ConvError::Hypothesis(
            "v_singular_cut exceeds v_tail_cut".into(),
        ));
    }
    // kernel values are only needed out to min(v_tail, t_hi)
    let main_cap = (tail_steps - cut_probe).min(i_hi.saturating_sub(cut_probe)).max(1);
    let tables = KernelTables::build(spec, cfg, dt, main_cap)?;
    let cut_steps = tables.cut_steps;
    let max_main_steps = tail_steps - cut_steps;
    let dim = h.dim();
    let beta = spec.beta();

    let rows: Vec<Complex<T>> = (0..=i_hi)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut acc = vec![Complex::new(T::zero(), T::zero()); dim];
            let mut scratch = vec![Complex::new(T::zero(), T::zero()); dim];
            let t = h.times()[i];
            if i == 0 {
                return acc;
            }
            if i <= cut_steps {
                // whole integral sits inside the singular region:
                // graded rule on [0, t] with a per-point node set
                let m = tables.graded.len() - 1;
                let w_up = t.powf(beta);
                let h_w = w_up / real::<T>(m as f64);
                for j in 0..=m {
                    let w = h_w * real::<T>(j as f64);
                    let weight = spec.eval_graded(w).expect("validated kernel");
                    let v = w.powf(beta.recip());
                    h.interp_into((t - v).max(T::zero()), &mut scratch)
                        .expect("inside window");
                    let trap = if j == 0 || j == m {
                        real::<T>(0.5)
                    } else {
                        T::one()
                    };
                    let wq = weight * trap * h_w;
                    for (a, s) in acc.iter_mut().zip(scratch.iter()) {
                        *a = *a + *s * wq;
                    }
                }
            } else {
                singular_part(&tables, h, t, &mut scratch, &mut acc);
                let steps = (i - cut_steps).min(max_main_steps).min(tables.main.len() - 1);
                let mut acc2 = vec![Complex::new(T::zero(), T::zero()); dim];
                main_part(&tables, h, i - cut_steps, steps, dt, &mut acc2);
                for (a, b) in acc.iter_mut().zip(acc2.iter()) {
                    *a = *a + *b;
                }
            }
            acc
        })
        .collect();

    let times = h.times()[..=i_hi].to_vec();
    let function = SampledFunction::from_parts(DomainKind::HalfLine, times, dt, dim, rows, None)
        .map_err(ConvError::FuncSpace)?;
    Ok(Convolution {
        function,
        tail_bound,
        v_tail: dt * real::<T>(tail_steps as f64),
        c_kernel: kernel_bound_constant(spec, cfg.p)?,
        stepanov_input: sn,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg_for(spec: &KernelSpec<f64>, p: f64, tol: f64) -> ConvolutionConfig<f64> {
        ConvolutionConfig::for_kernel(p, spec, tol).unwrap()
    }

    fn sin_on(t_lo: f64, t_hi: f64, dt: f64) -> SampledFunction<f64> {
        let half_i = Complex::new(0.0, -0.5);
        crate::funcspace::TrigPolynomial::scalar(vec![1.0, -1.0], vec![half_i, -half_i])
            .unwrap()
            .sample_range(DomainKind::WholeLine, t_lo, dt, ((t_hi - t_lo) / dt).round() as usize + 1)
            .unwrap()
    }

    #[test]
    fn exponential_kernel_against_sin() {
        // oracle: int_0^inf e^{-v} sin(t-v) dv = Im(e^{it}/(1+i))
        //       = (sin t - cos t)/2, confirmed by adaptive quadrature.
        let spec = KernelSpec::exponential(1.0_f64).unwrap();
        let mut cfg = cfg_for(&spec, 2.0, 1e-5);
        cfg.tol_tail = 1e-5;
        let g = sin_on(-40.0, 20.0, 0.005);
        let conv = infinite_convolution(&spec, &g, 0.0, 20.0, &cfg).unwrap();
        let f = &conv.function;
        for i in (0..f.len()).step_by(97) {
            let t = f.times()[i];
            let oracle = (t.sin() - t.cos()) / 2.0;
            assert_abs_diff_eq!(f.row(i)[0].re, oracle, epsilon = 1e-4);
            assert!(f.row(i)[0].im.abs() < 1e-4);
        }
    }

    #[test]
    fn constant_against_resolvent_is_one_over_lambda() {
        // oracle: int_0^inf R_gamma(v) dv = 1/lambda (Laplace transform at 0,
        // confirmed numerically with Richardson extrapolation beforehand)
        let lambda = 2.0;
        let spec = KernelSpec::resolvent(0.7_f64, lambda).unwrap();
        let mut cfg = cfg_for(&spec, 2.0, 2e-3);
        cfg.tol_tail = 2e-3;
        let c = Complex::new(1.0, 0.0);
        let dt = 0.05;
        let lo_steps = ((cfg.v_tail_cut + 5.0) / dt).ceil() as i64;
        let t_lo_in = -(lo_steps as f64) * dt;
        let grid_n = (lo_steps + 120) as usize + 1;
        let g = crate::funcspace::TrigPolynomial::scalar(vec![0.0], vec![c])
            .unwrap()
            .sample_range(DomainKind::WholeLine, t_lo_in, dt, grid_n)
            .unwrap();
        let t_hi = g.t_end();
        let t_lo = t_hi - 1.0;
        let conv = infinite_convolution(&spec, &g, t_lo, t_hi, &cfg).unwrap();
        for i in 0..conv.function.len() {
            assert_abs_diff_eq!(conv.function.row(i)[0].re, 1.0 / lambda, epsilon = 3e-3);
        }
    }

    #[test]
    fn zero_input_gives_zero_output() {
        let spec = KernelSpec::envelope(1.0_f64, 0.6, 2.0).unwrap();
        let cfg = cfg_for(&spec, 2.0, 1e-3);
        let dt = 0.02;
        let lo_steps = ((cfg.v_tail_cut + 10.0) / dt).ceil() as i64;
        let n = (lo_steps as usize) + 500;
        let g = crate::funcspace::TrigPolynomial::scalar(vec![], vec![])
            .unwrap()
            .sample_range(DomainKind::WholeLine, -(lo_steps as f64) * dt, dt, n)
            .unwrap();
        let conv = infinite_convolution(&spec, &g, 0.0, 5.0, &cfg).unwrap();
        assert!(conv.function.sup_norm() == 0.0);
    }

    #[test]
    fn inadmissible_pair_is_rejected() {
        let spec = KernelSpec::envelope(1.0_f64, 0.5, 2.0).unwrap();
        let cfg = ConvolutionConfig {
            p: 2.0,
            q_conj: Some(2.0),
            zeta: 1.2,
            v_singular_cut: 1.0,
            v_tail_cut: 100.0,
            tol_tail: 1.0,
        };
        let g = sin_on(-150.0, 10.0, 0.01);
        let err = infinite_convolution(&spec, &g, 0.0, 5.0, &cfg).unwrap_err();
        assert!(format!("{err}").contains("q(beta-1)"));
    }

    #[test]
    fn tail_error_names_required_window() {
        let spec = KernelSpec::envelope(1.0_f64, 0.6, 2.0).unwrap();
        let cfg = ConvolutionConfig {
            p: 2.0,
            q_conj: Some(2.0),
            zeta: 1.2,
            v_singular_cut: 1.0,
            v_tail_cut: 5.0, // far too small for this tolerance
            tol_tail: 1e-4,
            };
        let g = sin_on(-20.0, 10.0, 0.01);
        let err = infinite_convolution(&spec, &g, 0.0, 5.0, &cfg).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("required"), "message: {msg}");
    }

    #[test]
    fn finite_exponential_against_constant() {
        // H(t) = int_0^t e^{-v} dv = 1 - e^{-t}
        let spec = KernelSpec::exponential(1.0_f64).unwrap();
        let mut cfg = cfg_for(&spec, 2.0, 1e-6);
        cfg.tol_tail = 1e-6;
        let h = crate::funcspace::TrigPolynomial::scalar(vec![0.0], vec![Complex::new(1.0, 0.0)])
            .unwrap()
            .sample_range(DomainKind::HalfLine, 0.0, 0.005, 4001)
            .unwrap();
        let conv = finite_convolution(&spec, &h, 20.0, &cfg).unwrap();
        assert_eq!(conv.function.row(0)[0].re, 0.0);
        for i in (0..conv.function.len()).step_by(211) {
            let t = conv.function.times()[i];
            assert_abs_diff_eq!(conv.function.row(i)[0].re, 1.0 - (-t).exp(), epsilon = 1e-5);
        }
    }

    #[test]
    fn finite_resolvent_against_constant_is_mittag_leffler() {
        // oracle (term-by-term integration of the series, frozen with
        // 60-digit arithmetic): H(t) = 1 - E_{1/2}(-sqrt(t))
        let spec = KernelSpec::resolvent(0.5_f64, 1.0).unwrap();
        let p = ConvolutionConfig::auto_p(&spec);
        let mut cfg = ConvolutionConfig::for_kernel(p, &spec, 0.02).unwrap();
        cfg.tol_tail = 0.02;
        let h = crate::funcspace::TrigPolynomial::scalar(vec![0.0], vec![Complex::new(1.0, 0.0)])
            .unwrap()
            .sample_range(DomainKind::HalfLine, 0.0, 0.01, 2601)
            .unwrap();
        let conv = finite_convolution(&spec, &h, 26.0, &cfg).unwrap();
        for (t, expect) in [
            (1.0, 0.572416423844193),
            (4.0, 0.74460432368949426),
            (25.0, 0.88929536226693137),
        ] {
            let i = conv.function.index_of_time(t).unwrap();
            assert_abs_diff_eq!(conv.function.row(i)[0].re, expect, epsilon = 1e-3);
        }
    }

    #[test]
    fn linearity_and_boundedness() {
        let spec = KernelSpec::envelope(1.0_f64, 0.6, 2.0).unwrap();
        let cfg = cfg_for(&spec, 2.0, 2e-3)
            .with_tail_for_norm(&spec, 2.0)
            .unwrap();
        let dt = 0.01;
        let t_lo_in = -((cfg.v_tail_cut + 15.0) / dt).ceil() * dt;
        let n = ((15.0 - t_lo_in) / dt).round() as usize + 1;
        let mk = |c1: Complex<f64>, c2: Complex<f64>| {
            crate::funcspace::TrigPolynomial::scalar(
                vec![1.0, std::f64::consts::SQRT_2],
                vec![c1, c2],
            )
            .unwrap()
            .sample_range(DomainKind::WholeLine, t_lo_in, dt, n)
            .unwrap()
        };
        let a = Complex::new(0.7, 0.0);
        let b = Complex::new(-0.3, 0.4);
        let g1 = mk(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0));
        let g2 = mk(Complex::new(0.0, 0.0), Complex::new(1.0, 0.0));
        let gsum = g1.scaled(a).try_add(&g2.scaled(b)).unwrap();
        let c1 = infinite_convolution(&spec, &g1, 0.0, 10.0, &cfg).unwrap();
        let c2 = infinite_convolution(&spec, &g2, 0.0, 10.0, &cfg).unwrap();
        let cs = infinite_convolution(&spec, &gsum, 0.0, 10.0, &cfg).unwrap();
        for i in (0..cs.function.len()).step_by(53) {
            let lin = c1.function.row(i)[0] * a + c2.function.row(i)[0] * b;
            let got = cs.function.row(i)[0];
            assert_abs_diff_eq!(lin.re, got.re, epsilon = 1e-9);
            assert_abs_diff_eq!(lin.im, got.im, epsilon = 1e-9);
        }
        // Holder boundedness: sup ||G|| <= c_kernel ||g||_{S^p} + tail slack
        assert!(
            cs.function.sup_norm() <= cs.c_kernel * cs.stepanov_input + cs.tail_bound,
            "sup {} vs bound {}",
            cs.function.sup_norm(),
            cs.c_kernel * cs.stepanov_input
        );
    }

    #[test]
    fn translation_equivariance_on_matching_grid_points() {
        let spec = KernelSpec::envelope(1.0_f64, 0.6, 2.0).unwrap();
        let cfg = cfg_for(&spec, 2.0, 2e-3)
            .with_tail_for_norm(&spec, 2.0)
            .unwrap();
        let dt = 0.01;
        let t_lo_in = -((cfg.v_tail_cut + 15.0) / dt).ceil() * dt;
        let n = ((15.0 - t_lo_in) / dt).round() as usize + 1;
        let g = crate::funcspace::TrigPolynomial::scalar(
            vec![1.0, std::f64::consts::SQRT_2],
            vec![Complex::new(1.0, 0.0), Complex::new(0.5, -0.5)],
        )
        .unwrap()
        .sample_range(DomainKind::WholeLine, t_lo_in, dt, n)
        .unwrap();
        // shift by 100 grid steps
        let tau = 1.0;
        let g_shift = g.shift_on_grid(100).unwrap();
        let c0 = infinite_convolution(&spec, &g, 0.0, 8.0, &cfg).unwrap();
        let cs = infinite_convolution(&spec, &g_shift, 0.0, 7.0, &cfg).unwrap();
        // G_shift(t) = G(t + tau) exactly at matching grid points
        for i in (0..cs.function.len()).step_by(31) {
            let t = cs.function.times()[i];
            let j = c0.function.index_of_time(t + tau).unwrap();
            let a = cs.function.row(i)[0];
            let b = c0.function.row(j)[0];
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn halving_tol_tail_moves_output_less_than_the_old_bound() {
        let spec = KernelSpec::envelope(1.0_f64, 0.6, 2.0).unwrap();
        let cfg1 = cfg_for(&spec, 2.0, 5e-3);
        let cfg2 = cfg_for(&spec, 2.0, 2.5e-3);
        let dt = 0.02;
        let t_lo_in = -((cfg2.v_tail_cut + 12.0) / dt).ceil() * dt;
        let n = ((12.0 - t_lo_in) / dt).round() as usize + 1;
        let g = sin_on(t_lo_in, t_lo_in + (n - 1) as f64 * dt, dt);
        let a = infinite_convolution(&spec, &g, 0.0, 10.0, &cfg1).unwrap();
        let b = infinite_convolution(&spec, &g, 0.0, 10.0, &cfg2).unwrap();
        let old_bound = a.tail_bound;
        for i in 0..a.function.len() {
            let d = (a.function.row(i)[0] - b.function.row(i)[0]).norm();
            assert!(d <= old_bound, "pointwise change {d} above old bound {old_bound}");
        }
    }
}
