//! Secrecy outage metrics through the interference duality.
//!
//! With `γ = 2^{R_s} - 1` and each eavesdropper branch rescaled by
//! `c = 2^{R_s}/(2^{R_s} - 1)`, the secrecy-outage event
//! `log2((1+γ_d)/(1+γ_e)) < R_s` is exactly the interference-plus-noise
//! outage event `γ_d < γ(cγ_e + 1)`. Likewise `γ_d > γ_e` is the complement of
//! the interference-limited outage at `γ = 1`. MRC at the eavesdropper sums the
//! branch SNRs, which maps to a sum of independent interferers.

use alloc::vec::Vec;

use crate::fading::{FadingModel, ScaledModel};
use crate::outage::{op_i, op_n, op_ni, InterferenceScenario, Probability};
use crate::{Error, Result};

/// Translation of a secrecy problem into an interference problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityMap {
    /// Outage threshold `γ`.
    pub gamma: f64,
    /// Scale applied to every eavesdropper branch.
    pub scale: f64,
}

impl DualityMap {
    /// The map for strictly positive secrecy capacity: `γ = 1`, unscaled.
    pub const POSITIVE_CAPACITY: DualityMap = DualityMap { gamma: 1.0, scale: 1.0 };
}

/// `(2^{R_s} - 1, 2^{R_s}/(2^{R_s} - 1))` for a secrecy rate in bits per
/// channel use.
pub fn duality_map(rate: f64) -> Result<DualityMap> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::InvalidParameter { name: "rate", reason: "secrecy rate must be positive and finite" });
    }
    let pow2 = libm::exp2(rate);
    let gamma = if rate < 1.0 { libm::expm1(rate * core::f64::consts::LN_2) } else { pow2 - 1.0 };
    Ok(DualityMap { gamma, scale: pow2 / gamma })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecrecyScenario {
    desired: FadingModel,
    eavesdroppers: Vec<FadingModel>,
    rate: f64,
    mu: f64,
}

impl SecrecyScenario {
    /// `rate` is `R_s` in bits per channel use (0 allowed, for `P_s⁺` only);
    /// `mu` is the linear transmission threshold.
    pub fn new(desired: FadingModel, eavesdroppers: Vec<FadingModel>, rate: f64, mu: f64) -> Result<Self> {
        if eavesdroppers.is_empty() {
            return Err(Error::InvalidParameter { name: "eavesdroppers", reason: "at least one branch is required" });
        }
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::InvalidParameter { name: "rate", reason: "must be nonnegative and finite" });
        }
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::InvalidParameter { name: "mu", reason: "must be nonnegative and finite" });
        }
        Ok(SecrecyScenario { desired, eavesdroppers, rate, mu })
    }

    pub fn desired(&self) -> &FadingModel {
        &self.desired
    }

    pub fn eavesdroppers(&self) -> &[FadingModel] {
        &self.eavesdroppers
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn with_rate(&self, rate: f64) -> Result<Self> {
        Self::new(self.desired, self.eavesdroppers.clone(), rate, self.mu)
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.desired, self.eavesdroppers.clone(), self.rate, mu)
    }

    pub fn with_desired(&self, desired: FadingModel) -> Result<Self> {
        Self::new(desired, self.eavesdroppers.clone(), self.rate, self.mu)
    }

    /// The dual interference scenario, each branch wrapped in `map.scale`.
    pub fn mapped(&self, map: &DualityMap) -> Result<InterferenceScenario> {
        let interferers = self
            .eavesdroppers
            .iter()
            .map(|&e| ScaledModel::new(e, map.scale))
            .collect::<Result<Vec<_>>>()?;
        InterferenceScenario::new(self.desired, interferers)
    }

    /// The dual interference scenario without rescaling.
    pub fn unmapped(&self) -> Result<InterferenceScenario> {
        InterferenceScenario::new(self.desired, self.eavesdroppers.iter().copied())
    }
}

/// Secrecy outage `Pr{C_s < R_s}`, evaluated as `OP_NI(γ)` on the mapped
/// scenario.
pub fn p_s(scenario: &SecrecyScenario) -> Result<Probability> {
    let map = duality_map(scenario.rate)?;
    op_ni(&scenario.mapped(&map)?, map.gamma)
}

/// Probability of strictly positive secrecy capacity `Pr{γ_d > γ_e}`,
/// evaluated as `1 - OP_I(1)`. Rate and `mu` are ignored.
pub fn p_s_plus(scenario: &SecrecyScenario) -> Result<Probability> {
    let map = DualityMap::POSITIVE_CAPACITY;
    op_i(&scenario.unmapped()?, map.gamma).map(Probability::complement)
}

/// Secrecy outage conditioned on transmission, `[P_s - F(μ)]⁺ / (1 - F(μ))`.
///
/// Exact for `μ ≤ γ`. For `μ > γ` the transmission event no longer nests
/// inside the outage event and the value is only a lower bound on the
/// conditional probability, reported with `lower_bound` set.
pub fn p_so(scenario: &SecrecyScenario) -> Result<Probability> {
    let map = duality_map(scenario.rate)?;
    let ps = op_ni(&scenario.mapped(&map)?, map.gamma)?;
    let f_mu = if scenario.mu == 0.0 { 0.0 } else { op_n(&scenario.desired, scenario.mu)?.value };
    let denom = 1.0 - f_mu;
    if !(denom > f64::EPSILON) {
        return Err(Error::DegenerateThreshold { cdf: f_mu });
    }
    let numer = (ps.value - f_mu).max(0.0);
    let mut out = Probability::new(numer / denom);
    out.underflow |= ps.underflow;
    out.lower_bound = scenario.mu > map.gamma;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ray(g: f64) -> FadingModel {
        FadingModel::rayleigh(g).unwrap()
    }

    fn rayleigh_ps(gd: f64, ge: f64, rate: f64) -> f64 {
        let t = 2f64.powf(rate);
        1.0 - gd / (gd + t * ge) * (-(t - 1.0) / gd).exp()
    }

    #[test]
    fn duality_map_rows() {
        assert_eq!(duality_map(1.0).unwrap(), DualityMap { gamma: 1.0, scale: 2.0 });
        let m = duality_map(2.0).unwrap();
        assert_eq!(m.gamma, 3.0);
        assert!((m.scale - 4.0 / 3.0).abs() < 1e-15);
        assert!((duality_map(60.0).unwrap().scale - 1.0).abs() < 1e-15);
        assert!(duality_map(0.0).is_err());
        assert!(duality_map(-1.0).is_err());
        let small = duality_map(1e-9).unwrap();
        assert!((small.gamma / (1e-9 * core::f64::consts::LN_2) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn p_s_rayleigh_example() {
        let ge = 10f64.powf(0.5);
        let scn = SecrecyScenario::new(ray(10.0), alloc::vec![ray(ge)], 1.0, 1.0).unwrap();
        let got = p_s(&scn).unwrap().value;
        let want = rayleigh_ps(10.0, ge, 1.0);
        assert!((got - want).abs() < 1e-14 * want);
        assert!((got - 0.44572).abs() < 1e-5);
    }

    #[test]
    fn p_s_equals_op_ni_on_mapped_scenario() {
        let scn = SecrecyScenario::new(
            FadingModel::nakagami(3.0, 20.0).unwrap(),
            alloc::vec![ray(2.0), FadingModel::rice(2.0, 1.0).unwrap()],
            1.3,
            0.0,
        )
        .unwrap();
        let map = duality_map(1.3).unwrap();
        assert_eq!(p_s(&scn).unwrap(), op_ni(&scn.mapped(&map).unwrap(), map.gamma).unwrap());
        assert_eq!(p_s_plus(&scn).unwrap().value, 1.0 - op_i(&scn.unmapped().unwrap(), 1.0).unwrap().value);
    }

    #[test]
    fn p_s_vanishing_eavesdropper() {
        let d = FadingModel::nakagami(2.0, 5.0).unwrap();
        let scn = SecrecyScenario::new(d, alloc::vec![ray(1e-10)], 1.5, 0.0).unwrap();
        let want = op_n(&d, 2f64.powf(1.5) - 1.0).unwrap().value;
        assert!((p_s(&scn).unwrap().value - want).abs() < 1e-6);
    }

    #[test]
    fn p_s_plus_values() {
        let s = SecrecyScenario::new(ray(4.0), alloc::vec![ray(4.0)], 0.0, 0.0).unwrap();
        assert!((p_s_plus(&s).unwrap().value - 0.5).abs() < 1e-12);
        let s = SecrecyScenario::new(FadingModel::nakagami(2.0, 10.0).unwrap(), alloc::vec![ray(5.0)], 0.0, 0.0).unwrap();
        assert!((p_s_plus(&s).unwrap().value - 0.75).abs() < 1e-12);
        let s = SecrecyScenario::new(ray(10.0), alloc::vec![ray(5.0)], 0.0, 0.0).unwrap();
        assert!((p_s_plus(&s).unwrap().value - 10.0 / 15.0).abs() < 1e-12);
        // rate 0 leaves P_s undefined
        assert!(p_s(&s).is_err());
        assert!(p_so(&s).is_err());
    }

    #[test]
    fn p_so_properties() {
        let d = FadingModel::nakagami(2.0, 10.0).unwrap();
        let base = SecrecyScenario::new(d, alloc::vec![ray(3.0), ray(3.0)], 1.0, 0.0).unwrap();
        assert_eq!(p_so(&base).unwrap().value, p_s(&base).unwrap().value);
        assert!(!p_so(&base).unwrap().lower_bound);
        for &mu in &[0.1, 0.5, 1.0, 2.0, 4.0] {
            let s = base.with_mu(mu).unwrap();
            let so = p_so(&s).unwrap();
            assert!(so.value <= p_s(&s).unwrap().value);
            assert_eq!(so.lower_bound, mu > 1.0);
        }
    }

    #[test]
    fn p_so_degenerate_threshold() {
        let s = SecrecyScenario::new(ray(0.01), alloc::vec![ray(1.0)], 1.0, 1e5).unwrap();
        assert!(matches!(p_so(&s), Err(Error::DegenerateThreshold { .. })));
    }

    #[test]
    fn scenario_validation() {
        assert!(SecrecyScenario::new(ray(1.0), alloc::vec![], 1.0, 0.0).is_err());
        assert!(SecrecyScenario::new(ray(1.0), alloc::vec![ray(1.0)], -1.0, 0.0).is_err());
        assert!(SecrecyScenario::new(ray(1.0), alloc::vec![ray(1.0)], 1.0, -0.1).is_err());
    }
}
