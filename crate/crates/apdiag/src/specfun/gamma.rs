//! Gamma function via the Lanczos approximation.
//!
//! Coefficients follow "An Analysis of the Lanczos Gamma Approximation",
//! Glendon Ralph Pugh, 2004 p. 116 (the statrs parameter set), giving close
//! to 16 correct digits in `f64`.

use super::SpecFunError;
use crate::scalar::{real, Real};

const GAMMA_R: f64 = 10.900511;

const GAMMA_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657173362492472666631120594218414085755;

fn lanczos_series<T: Real>(x: T) -> T {
    let mut s = real::<T>(GAMMA_DK[0]);
    for (i, &dk) in GAMMA_DK.iter().enumerate().skip(1) {
        s = s + real::<T>(dk) / (x + real::<T>(i as f64) - T::one());
    }
    s
}

/// Gamma for x >= 0.5 where the Lanczos series applies directly.
fn gamma_positive<T: Real>(x: T) -> T {
    let s = lanczos_series(x);
    let half = real::<T>(0.5);
    s * real::<T>(TWO_SQRT_E_OVER_PI) * ((x - half + real::<T>(GAMMA_R)) / T::E()).powf(x - half)
}

/// `sin(pi * x)` with argument reduction, accurate for large |x|.
pub(crate) fn sin_pi<T: Real>(x: T) -> T {
    let m = x.floor();
    let mut r = x - m;
    // reflect r in [0,1) to [0,0.5] where sin(pi r) is well conditioned
    if r > real::<T>(0.5) {
        r = T::one() - r;
    }
    let s = (T::PI() * r).sin();
    // sin(pi(m+r)) = (-1)^m sin(pi r)
    if (m / real::<T>(2.0)).fract() != T::zero() {
        -s
    } else {
        s
    }
}

/// Gamma on the full real line except the poles at 0, -1, -2, ...
/// Returns infinity at the poles.
pub(crate) fn gamma_any<T: Real>(x: T) -> T {
    if x >= real::<T>(0.5) {
        gamma_positive(x)
    } else {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let s = sin_pi(x);
        if s == T::zero() {
            return T::infinity();
        }
        T::PI() / (s * gamma_positive(T::one() - x))
    }
}

/// `1 / Gamma(x)` as an entire function: zero at the poles of Gamma.
///
/// Used by the Mittag-Leffler asymptotic series where the argument walks far
/// into the left half line. Overflow of the reflected Gamma is mapped to 0
/// (the reciprocal's true limit is not zero there, but the series code caps
/// term counts well before that point).
pub(crate) fn recip_gamma<T: Real>(x: T) -> T {
    if x >= real::<T>(0.5) {
        gamma_positive(x).recip()
    } else {
        // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
        let g = gamma_positive(T::one() - x);
        if !g.is_finite() {
            return T::zero();
        }
        sin_pi(x) * g / T::PI()
    }
}

/// Euler Gamma function on the positive half line.
pub fn gamma_fn<T: Real>(x: T) -> Result<T, SpecFunError> {
    if !x.is_finite() || x <= T::zero() {
        return Err(SpecFunError::Domain(format!(
            "gamma_fn requires x > 0, got {x}"
        )));
    }
    Ok(gamma_any(x))
}

/// `g_zeta(t) = t^{zeta-1} / Gamma(zeta)`, the standard fractional kernel.
pub fn g_kernel<T: Real>(zeta: T, t: T) -> Result<T, SpecFunError> {
    if !zeta.is_finite() || zeta <= T::zero() {
        return Err(SpecFunError::Domain(format!(
            "g_kernel requires zeta > 0, got {zeta}"
        )));
    }
    if t < T::zero() || !t.is_finite() {
        return Err(SpecFunError::Domain(format!(
            "g_kernel requires t >= 0, got {t}"
        )));
    }
    if t == T::zero() {
        // limit at the origin exists only for zeta >= 1
        if zeta < T::one() {
            return Err(SpecFunError::Domain(
                "g_kernel is singular at t = 0 for zeta < 1".into(),
            ));
        }
        return Ok(if zeta == T::one() { T::one() } else { T::zero() });
    }
    Ok(g_kernel_unchecked(zeta, t))
}

/// `g_zeta(t)` for t > 0 with zeta allowed anywhere Gamma is defined
/// (negative non-integer zeta appears in tail corrections of the
/// Weyl derivative).
pub(crate) fn g_kernel_unchecked<T: Real>(zeta: T, t: T) -> T {
    t.powf(zeta - T::one()) * recip_gamma(zeta)
}
