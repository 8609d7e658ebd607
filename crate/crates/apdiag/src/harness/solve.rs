//! Mild solutions of the scalar fractional relaxation problems.

use num_complex::Complex;

use crate::convops::{
    finite_convolution, infinite_convolution, weyl_liouville, ConvolutionConfig, WeylMode,
};
use crate::funcspace::{DomainKind, SampledFunction, TrigPolynomial};
use crate::scalar::{real, Real};
use crate::specfun::{solution_family, KernelSpec};

use super::HarnessError;

/// Parameters for [`solve_relaxation`].
#[derive(Debug, Clone)]
pub struct RelaxationParams<T: Real> {
    pub dt: T,
    /// Residual is evaluated on `[0, t_max]`.
    pub t_max: T,
    /// Truncation of the Weyl-derivative quadrature.
    pub v_weyl: T,
    pub tol_tail: T,
}

impl<T: Real> Default for RelaxationParams<T> {
    fn default() -> Self {
        Self {
            dt: real(0.01),
            t_max: real(20.0),
            v_weyl: real(200.0),
            tol_tail: real(0.02),
        }
    }
}

/// Mild solution of the whole-line fractional relaxation problem and its
/// residual.
#[derive(Debug, Clone)]
pub struct RelaxationSolution<T: Real> {
    pub u: SampledFunction<T>,
    /// Sup over the interior evaluation grid of
    /// `|| D^gamma u + lambda u - f ||`.
    pub residual: T,
    pub tail_bound: T,
}

/// Solve `D^gamma u + lambda u = f` on the line by the mild-solution
/// formula `u = int_{-inf}^t R_gamma(t - s) f(s) ds`, then measure the
/// residual with the quadrature Weyl derivative (`gamma = 1` uses the
/// ordinary central difference).
pub fn solve_relaxation<T: Real>(
    lambda: T,
    gamma_frac: T,
    f: &TrigPolynomial<T>,
    params: &RelaxationParams<T>,
) -> Result<RelaxationSolution<T>, HarnessError> {
    if f.has_zero_freq() {
        return Err(HarnessError::Conv(crate::convops::ConvError::ZeroFrequency));
    }
    if gamma_frac <= T::zero() || gamma_frac > T::one() {
        return Err(HarnessError::Config(format!(
            "gamma_frac must lie in (0, 1], got {gamma_frac}"
        )));
    }
    let dt = params.dt;
    // gamma = 1: the resolvent kernel is exactly the exponential
    let spec = if gamma_frac == T::one() {
        KernelSpec::exponential(lambda)?
    } else {
        KernelSpec::resolvent(gamma_frac, lambda)?
    };
    let p = ConvolutionConfig::auto_p(&spec);
    let sup_bound = f.coeff_norm_sum().max(real(1e-6));
    let cfg = ConvolutionConfig::for_kernel(p, &spec, params.tol_tail)?
        .with_tail_for_norm(&spec, sup_bound)?;

    // u on [-(v_weyl + 1), t_max + 1], f sampled far enough left for the
    // convolution tail
    let pad = T::one();
    let u_lo = -((params.v_weyl + pad) / dt).ceil() * dt;
    let u_hi = ((params.t_max + pad) / dt).ceil() * dt;
    let f_lo = u_lo - (cfg.v_tail_cut / dt).ceil() * dt - dt;
    let n = ((u_hi - f_lo) / dt).round().to_usize().unwrap() + 1;
    let f_sampled = f.sample_range(DomainKind::WholeLine, f_lo, dt, n)?;

    let conv = infinite_convolution(&spec, &f_sampled, u_lo, u_hi, &cfg)?;
    let u = conv.function;

    // residual: D^gamma u + lambda u - f on [0, t_max]
    let du = if gamma_frac == T::one() {
        weyl_liouville(&u, T::one(), WeylMode::Quadrature {
            v_max: real(1.0),
        })?
    } else {
        weyl_liouville(&u, gamma_frac, WeylMode::Quadrature {
            v_max: params.v_weyl,
        })?
    };
    let dim = u.dim();
    let mut f_val = vec![Complex::new(T::zero(), T::zero()); dim];
    let mut residual = T::zero();
    for i in 0..du.len() {
        let t = du.times()[i];
        if t < T::zero() || t > params.t_max {
            continue;
        }
        let j = u.index_of_time(t)?;
        f.eval_into(t, &mut f_val);
        let mut s = T::zero();
        for d in 0..dim {
            let r = du.row(i)[d] + u.row(j)[d] * lambda - f_val[d];
            s += r.norm_sqr();
        }
        residual = residual.max(s.sqrt());
    }
    Ok(RelaxationSolution {
        u,
        residual,
        tail_bound: conv.tail_bound,
    })
}

/// Parameters for [`solve_dfp`].
#[derive(Debug, Clone)]
pub struct DfpParams<T: Real> {
    pub dt: T,
    pub t_max: T,
    pub tol_tail: T,
    /// The homogeneous part must fall below this at the window end.
    pub tol_decay: T,
}

impl<T: Real> Default for DfpParams<T> {
    fn default() -> Self {
        Self {
            dt: real(0.01),
            t_max: real(100.0),
            tol_tail: real(0.02),
            tol_decay: real(0.06),
        }
    }
}

/// Mild solution of the initial-value problem on the half line.
#[derive(Debug, Clone)]
pub struct DfpSolution<T: Real> {
    pub u: SampledFunction<T>,
    /// True when `S_gamma(t_end) ||x0||` fell below `tol_decay`.
    pub decay_check: bool,
    /// The homogeneous factor at the window end.
    pub s_end: T,
}

/// Solve the fractional initial-value problem on `[0, t_max]` via
/// `u(t) = S_gamma(t) x0 + int_0^t R_gamma(t-s) f(s) ds`; `u(0) = x0`
/// exactly. `f = None` means a zero forcing term.
pub fn solve_dfp<T: Real>(
    lambda: T,
    gamma_frac: T,
    x0: &[Complex<T>],
    f: Option<&SampledFunction<T>>,
    params: &DfpParams<T>,
) -> Result<DfpSolution<T>, HarnessError> {
    if gamma_frac <= T::zero() || gamma_frac > T::one() {
        return Err(HarnessError::Config(format!(
            "gamma_frac must lie in (0, 1], got {gamma_frac}"
        )));
    }
    if lambda <= T::zero() {
        return Err(HarnessError::Config(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let dim = x0.len().max(1);
    let dt = params.dt;
    let n = (params.t_max / dt).round().to_usize().unwrap() + 1;

    // forced part
    let forced = match f {
        Some(h) => {
            if h.domain() != DomainKind::HalfLine {
                return Err(HarnessError::Config(
                    "forcing term must be a half-line function".into(),
                ));
            }
            if h.dim() != dim {
                return Err(HarnessError::Config("x0/forcing dimension mismatch".into()));
            }
            let spec = if gamma_frac == T::one() {
                KernelSpec::exponential(lambda)?
            } else {
                KernelSpec::resolvent(gamma_frac, lambda)?
            };
            let p = ConvolutionConfig::auto_p(&spec);
            let cfg = ConvolutionConfig::for_kernel(p, &spec, params.tol_tail)?
                .with_tail_for_norm(&spec, crate::funcspace::stepanov_norm(h, p)?)?;
            Some(finite_convolution(&spec, h, params.t_max, &cfg)?.function)
        }
        None => None,
    };

    let mut data = Vec::with_capacity(n * dim);
    let mut times = Vec::with_capacity(n);
    let mut s_end = T::one();
    for i in 0..n {
        let t = dt * real::<T>(i as f64);
        times.push(t);
        let s = solution_family(gamma_frac, lambda, t)?;
        if i == n - 1 {
            s_end = s;
        }
        for d in 0..dim {
            let mut v = x0[d] * s;
            if let Some(h) = &forced {
                v = v + h.row(i)[d];
            }
            data.push(v);
        }
    }
    let u = SampledFunction::from_parts(DomainKind::HalfLine, times, dt, dim, data, None)?;
    let x0_norm = x0.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    Ok(DfpSolution {
        u,
        decay_check: s_end * x0_norm < params.tol_decay,
        s_end,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn relaxation_gamma_one_is_classical_ode() {
        // oracle (elementary ODE): u' + u = sin has the bounded solution
        // u = (sin t - cos t)/2
        let half_i = Complex::new(0.0, -0.5);
        let f = TrigPolynomial::scalar(vec![1.0, -1.0], vec![half_i, -half_i]).unwrap();
        let params = RelaxationParams {
            dt: 0.005,
            t_max: 15.0,
            v_weyl: 30.0,
            tol_tail: 1e-5,
        };
        let sol = solve_relaxation(1.0, 1.0, &f, &params).unwrap();
        assert!(sol.residual <= 1e-4, "residual {}", sol.residual);
        let i = sol.u.index_of_time(3.0).unwrap();
        let oracle = (3.0_f64.sin() - 3.0_f64.cos()) / 2.0;
        assert_abs_diff_eq!(sol.u.row(i)[0].re, oracle, epsilon = 1e-4);
    }

    #[test]
    fn relaxation_fractional_matches_spectral_coefficient() {
        // oracle (Laplace-transform identity, verified numerically ahead of
        // the build): u = e^{it} / ((i)^gamma + lambda)
        let f = TrigPolynomial::scalar(vec![1.0], vec![Complex::new(1.0, 0.0)]).unwrap();
        let params = RelaxationParams {
            dt: 0.01,
            t_max: 15.0,
            v_weyl: 150.0,
            tol_tail: 0.02,
        };
        let (lambda, gamma) = (1.0, 0.5);
        let sol = solve_relaxation(lambda, gamma, &f, &params).unwrap();
        assert!(sol.residual <= 1e-2, "residual {}", sol.residual);
        let coeff = (Complex::new(0.0, 1.0).powf(gamma) + lambda).finv();
        // frozen: 1/(i^0.5 + 1) = 0.5 - 0.2071067811865475 i
        assert_abs_diff_eq!(coeff.re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(coeff.im, -0.2071067811865475, epsilon = 1e-12);
        let i = sol.u.index_of_time(5.0).unwrap();
        let oracle = Complex::new(0.0, 5.0).exp() * coeff;
        assert_abs_diff_eq!(sol.u.row(i)[0].re, oracle.re, epsilon = 3e-3);
        assert_abs_diff_eq!(sol.u.row(i)[0].im, oracle.im, epsilon = 3e-3);
    }

    #[test]
    fn relaxation_rejects_zero_frequency() {
        let f = TrigPolynomial::scalar(vec![0.0], vec![Complex::new(1.0, 0.0)]).unwrap();
        assert!(solve_relaxation(1.0, 0.5, &f, &RelaxationParams::default()).is_err());
    }

    #[test]
    fn dfp_homogeneous_gamma_one_is_exponential() {
        let params = DfpParams {
            dt: 0.01,
            t_max: 30.0,
            tol_tail: 1e-4,
            tol_decay: 1e-8,
        };
        let sol = solve_dfp(2.0, 1.0, &[Complex::new(1.5, 0.0)], None, &params).unwrap();
        assert_eq!(sol.u.row(0)[0].re, 1.5);
        for i in (0..sol.u.len()).step_by(301) {
            let t: f64 = sol.u.times()[i];
            assert_abs_diff_eq!(sol.u.row(i)[0].re, 1.5 * (-2.0 * t).exp(), epsilon = 1e-9);
        }
        assert!(sol.decay_check);
    }

    #[test]
    fn dfp_forced_fractional_matches_mittag_leffler() {
        // x0 = 0, f = 1, gamma = 1/2, lambda = 1:
        // u(t) = 1 - E_{1/2}(-sqrt(t)) (series-integration oracle)
        let h = TrigPolynomial::scalar(vec![0.0], vec![Complex::new(1.0, 0.0)])
            .unwrap()
            .sample_range(DomainKind::HalfLine, 0.0, 0.01, 2501)
            .unwrap();
        let params = DfpParams {
            dt: 0.01,
            t_max: 25.0,
            tol_tail: 0.02,
            tol_decay: 0.06,
        };
        let sol = solve_dfp(1.0, 0.5, &[Complex::new(0.0, 0.0)], Some(&h), &params).unwrap();
        assert_eq!(sol.u.row(0)[0].re, 0.0);
        for (t, expect) in [(1.0, 0.572416423844193), (25.0, 0.88929536226693137)] {
            let i = sol.u.index_of_time(t).unwrap();
            assert_abs_diff_eq!(sol.u.row(i)[0].re, expect, epsilon = 1e-3);
        }
    }

    #[test]
    fn dfp_homogeneous_fractional_decays() {
        // x0 = 1, f = 0, gamma = 1/2: u = E_{1/2}(-lambda sqrt(t)), u(0) = 1;
        // tail via the asymptotic oracle E ~ 1/(lambda sqrt(t) Gamma(1/2))
        let params = DfpParams {
            dt: 0.01,
            t_max: 100.0,
            tol_tail: 0.02,
            tol_decay: 0.06,
        };
        let sol = solve_dfp(1.0, 0.5, &[Complex::new(1.0, 0.0)], None, &params).unwrap();
        assert_eq!(sol.u.row(0)[0].re, 1.0);
        assert!(sol.decay_check);
        // frozen: E_{1/2}(-10) = 0.056140992743822586
        assert_abs_diff_eq!(sol.s_end, 0.056140992743822586, epsilon = 1e-8);
    }
}
