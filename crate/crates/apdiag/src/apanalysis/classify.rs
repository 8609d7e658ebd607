//! Aggregate classification: boundedness, continuity, the epsilon-period
//! scan, and the oscillatory-mean condition over a list of frequencies.

use serde::{Deserialize, Serialize};

use crate::funcspace::{besicovitch_seminorm, FuncSpaceError, SampledFunction, SeminormEstimate};
use crate::scalar::{real, Real};

use super::bd::{bd_condition, BDReport};
use super::defect::{bp_continuity_modulus, period_scan, ContinuityReport, DossReport};

/// Parameters for [`classify`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct ClassifyConfig<T: Real> {
    pub p: T,
    pub epsilon: T,
    /// Frequencies for the oscillatory-mean condition.
    pub lambdas: Vec<T>,
    pub tau_max: T,
    pub dtau: T,
    /// Shifts for the continuity modulus, decreasing towards the grid step.
    pub continuity_taus: Vec<T>,
    pub l_schedule: Vec<T>,
    /// Window schedule shared by every estimator.
    pub schedule: Vec<T>,
    pub rtol: T,
    /// Threshold for the oscillatory-mean values at the largest l.
    pub tol_bd: T,
    /// Threshold for the continuity modulus at the smallest tau.
    pub tol_continuity: T,
}

/// Overall verdict. `Inconclusive` flags an epsilon at or below the
/// estimator noise floor instead of risking a false negative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassifyOutcome {
    Positive,
    Negative(Vec<String>),
    Inconclusive(String),
}

/// Full classification record.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct Classification<T: Real> {
    pub bp_bounded: bool,
    pub bp_bounded_value: T,
    pub seminorm: SeminormEstimate<T>,
    pub bp_continuous: bool,
    pub continuity: ContinuityReport<T>,
    pub doss: DossReport<T>,
    pub bd_iv: Vec<BDReport<T>>,
    pub outcome: ClassifyOutcome,
}

/// Run the four diagnostics and aggregate the verdict. The
/// Besicovitch-Doss label requires all four to pass.
pub fn classify<T: Real>(
    f: &SampledFunction<T>,
    cfg: &ClassifyConfig<T>,
) -> Result<Classification<T>, FuncSpaceError> {
    let seminorm = besicovitch_seminorm(f, cfg.p, &cfg.schedule, cfg.rtol)?;
    let bp_bounded = seminorm.value.is_finite();

    let continuity = bp_continuity_modulus(
        f,
        cfg.p,
        &cfg.continuity_taus,
        &cfg.schedule,
        cfg.rtol,
        cfg.tol_continuity,
    )?;
    let bp_continuous = continuity.continuous_at_tol;

    let doss = period_scan(
        f,
        cfg.p,
        cfg.epsilon,
        cfg.tau_max,
        cfg.dtau,
        &cfg.schedule,
        cfg.rtol,
    )?;

    let mut bd_iv = Vec::with_capacity(cfg.lambdas.len());
    for &lambda in &cfg.lambdas {
        bd_iv.push(bd_condition(
            f,
            lambda,
            &cfg.l_schedule,
            cfg.p,
            &cfg.schedule,
            cfg.rtol,
            cfg.tol_bd,
        )?);
    }

    let noise_floor = real::<T>(5.0) * cfg.rtol * (T::one() + seminorm.value);
    let outcome = if cfg.epsilon <= noise_floor {
        ClassifyOutcome::Inconclusive(format!(
            "epsilon {} at or below the estimator noise floor {}",
            cfg.epsilon, noise_floor
        ))
    } else {
        let mut reasons = Vec::new();
        if !bp_bounded {
            reasons.push("seminorm estimate not finite".to_string());
        }
        if !bp_continuous {
            reasons.push(format!(
                "continuity modulus {} at the smallest shift exceeds {}",
                continuity
                    .modulus
                    .iter()
                    .cloned()
                    .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
                    .map(|(_, d)| d)
                    .unwrap_or(T::nan()),
                cfg.tol_continuity
            ));
        }
        if doss.degenerate {
            reasons.push("empty epsilon-period set within the scan range".to_string());
        }
        for rep in &bd_iv {
            if !rep.tends_to_zero {
                reasons.push(format!(
                    "oscillatory-mean condition not tending to zero at lambda = {}",
                    rep.lambda
                ));
            }
        }
        if reasons.is_empty() {
            ClassifyOutcome::Positive
        } else {
            ClassifyOutcome::Negative(reasons)
        }
    };

    Ok(Classification {
        bp_bounded,
        bp_bounded_value: seminorm.value,
        seminorm,
        bp_continuous,
        continuity,
        doss,
        bd_iv,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{
        geometric_schedule, make_trig_polynomial, make_vanishing, GridSpec, VanishingKind,
        DEFAULT_RTOL,
    };
    use num_complex::Complex;

    fn config(eps: f64) -> ClassifyConfig<f64> {
        ClassifyConfig {
            p: 2.0,
            epsilon: eps,
            lambdas: vec![0.0, 1.0],
            tau_max: 15.0,
            dtau: 0.1,
            continuity_taus: vec![1.0, 0.3, 0.1, 0.02],
            l_schedule: vec![10.0, 20.0, 40.0, 80.0],
            schedule: geometric_schedule(150.0, 500.0, 6),
            rtol: DEFAULT_RTOL,
            tol_bd: 0.06,
            tol_continuity: 0.05,
        }
    }

    #[test]
    fn constant_function_is_besicovitch_doss() {
        let grid = GridSpec::whole_line(700.0, 0.02);
        let f = make_trig_polynomial(&[0.0], &[vec![Complex::new(1.0, 0.0)]], &grid).unwrap();
        let c = classify(&f, &config(0.1)).unwrap();
        assert!(c.bp_bounded && c.bp_continuous);
        assert_eq!(c.doss.period_set.len(), c.doss.tau_grid.len());
        assert_eq!(c.outcome, ClassifyOutcome::Positive);
    }

    #[test]
    fn quasi_periodic_function_passes() {
        let grid = GridSpec::whole_line(700.0, 0.02);
        let f = make_trig_polynomial(
            &[1.0, std::f64::consts::SQRT_2],
            &[vec![Complex::new(1.0, 0.0)], vec![Complex::new(1.0, 0.0)]],
            &grid,
        )
        .unwrap();
        let c = classify(&f, &config(0.35)).unwrap();
        assert_eq!(c.outcome, ClassifyOutcome::Positive, "doss: {:?}", c.doss.period_set.len());
    }

    #[test]
    fn vanishing_spikes_pass_doss_trivially() {
        // defect <= 2 * vanishing estimate, so every tau qualifies once
        // epsilon exceeds twice the seminorm estimate. Continuity at desk
        // scale is a separate matter: the finite-window estimate of the
        // spikes decays only like T^{-1/2}, so it is not asserted here.
        let grid = GridSpec::whole_line(700.0, 0.02);
        let q = make_vanishing(VanishingKind::ShrinkingSpikes, &grid, 2.0).unwrap();
        let c = classify(&q, &config(0.2)).unwrap();
        assert!(c.bp_bounded);
        assert!(2.0 * c.bp_bounded_value < 0.2, "est {}", c.bp_bounded_value);
        assert_eq!(c.doss.period_set.len(), c.doss.tau_grid.len());
        assert!(!c.doss.degenerate);
        for (tau, d) in c.doss.tau_grid.iter().zip(&c.doss.defects) {
            assert!(
                *d <= 2.0 * c.bp_bounded_value + 5.0 * DEFAULT_RTOL,
                "defect {d} at tau {tau} above twice the vanishing estimate"
            );
        }
    }

    #[test]
    fn noise_floor_is_flagged_inconclusive() {
        let grid = GridSpec::whole_line(700.0, 0.02);
        let f = make_trig_polynomial(&[1.0], &[vec![Complex::new(1.0, 0.0)]], &grid).unwrap();
        let c = classify(&f, &config(0.005)).unwrap();
        assert!(matches!(c.outcome, ClassifyOutcome::Inconclusive(_)));
    }
}
