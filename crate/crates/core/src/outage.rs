//! Outage probability of a Nakagami-m link under co-channel interference.
//!
//! With integer shape `m` the desired SNR is Gamma(m, γ̄_d/m), whose survival
//! function is a finite Poisson sum. Conditioning on the aggregate interference
//! `X` and setting `p = mγ/γ̄_d`:
//!
//! ```text
//! 1 - OP_NI(γ) = E[e^{-p(X+1)} Σ_{i<m} (p(X+1))^i / i!]
//!              = e^{-p} Σ_{i<m} p^i/i! Σ_{j≤i} C(i,j) T_j
//! 1 - OP_I(γ)  = E[e^{-pX} Σ_{i<m} (pX)^i / i!]
//!              = Σ_{i<m} p^i/i! T_i
//! ```
//!
//! where `T_j = E[X^j e^{-pX}]` are the tilted moments of `X` from
//! [`crate::mgf_product`]. Every summand is nonnegative, and the sum is
//! accumulated in log space before the single `-expm1` that yields the outage.

use alloc::vec::Vec;

use crate::fading::{FadingModel, ScaledModel};
use crate::mgf_product::{factor_series, product_series, TiltedMomentSeries};
use crate::logspace::log_sum_exp;
use crate::special::{ln_binomial, ln_factorial};
use crate::{Error, Result, DEFAULT_MAX_ORDER};

/// Values with magnitude below this are reported as 0 with `underflow` set.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probability {
    pub value: f64,
    /// The true value is positive but below [`UNDERFLOW_FLOOR`].
    pub underflow: bool,
    /// The value is a lower bound rather than the exact probability.
    pub lower_bound: bool,
}

impl Probability {
    pub fn new(value: f64) -> Self {
        if value.abs() < UNDERFLOW_FLOOR {
            Probability { value: 0.0, underflow: value != 0.0, lower_bound: false }
        } else {
            Probability { value, underflow: false, lower_bound: false }
        }
    }

    /// `1 - self`, keeping the flags.
    pub fn complement(self) -> Self {
        Probability { value: 1.0 - self.value, ..self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceScenario {
    desired: FadingModel,
    interferers: Vec<ScaledModel>,
}

impl InterferenceScenario {
    pub fn new<I, M>(desired: FadingModel, interferers: I) -> Result<Self>
    where
        I: IntoIterator<Item = M>,
        M: Into<ScaledModel>,
    {
        let interferers: Vec<ScaledModel> = interferers.into_iter().map(Into::into).collect();
        if interferers.is_empty() {
            return Err(Error::InvalidParameter { name: "interferers", reason: "at least one interferer is required" });
        }
        Ok(InterferenceScenario { desired, interferers })
    }

    pub fn desired(&self) -> &FadingModel {
        &self.desired
    }

    pub fn interferers(&self) -> &[ScaledModel] {
        &self.interferers
    }

    fn shape(&self) -> Result<usize> {
        let m = self.desired.integer_shape().ok_or(Error::Unsupported(
            "analytic outage needs a Nakagami desired link with integer m; use the Monte Carlo estimator",
        ))?;
        if m - 1 > DEFAULT_MAX_ORDER {
            return Err(Error::OrderTooHigh { order: m - 1, max: DEFAULT_MAX_ORDER });
        }
        Ok(m)
    }

    /// `(p, T)` for threshold `gamma`: `p = mγ/γ̄_d` and the tilted moments of
    /// the aggregate interference up to order `m - 1`.
    pub fn tilted_moments(&self, gamma: f64) -> Result<(usize, TiltedMomentSeries)> {
        check_threshold(gamma)?;
        let m = self.shape()?;
        let p = m as f64 * gamma / self.desired.mean_snr();
        let factors = self
            .interferers
            .iter()
            .map(|i| factor_series(i, p, m - 1))
            .collect::<Result<Vec<_>>>()?;
        Ok((m, product_series(&factors, m - 1)?))
    }
}

fn check_threshold(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "gamma", reason: "threshold must be positive and finite" })
    }
}

/// Noise-limited outage `Pr{γ_d < γ}`.
pub fn op_n(desired: &FadingModel, gamma: f64) -> Result<Probability> {
    check_threshold(gamma)?;
    desired.cdf(gamma).map(Probability::new)
}

/// Interference-plus-noise outage `Pr{γ_d < γ(γ_i + 1)}`.
pub fn op_ni(scenario: &InterferenceScenario, gamma: f64) -> Result<Probability> {
    let (m, t) = scenario.tilted_moments(gamma)?;
    let p = t.p();
    let ln_p = libm::log(p);
    let mut terms = Vec::with_capacity(m * (m + 1) / 2);
    for i in 0..m {
        let base = i as f64 * ln_p - ln_factorial(i);
        for j in 0..=i {
            terms.push(base + ln_binomial(i, j) + t.ln_term(j));
        }
    }
    let ln_survival = log_sum_exp(&terms) - p;
    Ok(Probability::new(-libm::expm1(ln_survival)))
}

/// Interference-limited outage `Pr{γ_d < γ·γ_i}`.
pub fn op_i(scenario: &InterferenceScenario, gamma: f64) -> Result<Probability> {
    let (m, t) = scenario.tilted_moments(gamma)?;
    let ln_p = libm::log(t.p());
    let terms: Vec<f64> = (0..m).map(|i| i as f64 * ln_p - ln_factorial(i) + t.ln_term(i)).collect();
    Ok(Probability::new(-libm::expm1(log_sum_exp(&terms))))
}
