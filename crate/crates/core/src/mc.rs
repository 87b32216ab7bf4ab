//! Seeded Monte Carlo estimation of every outage metric from its defining
//! event.
//!
//! Nothing here uses the duality: each sample draws `γ_d` and every branch
//! SNR explicitly, sums the branches, and tests the event as written. Sample
//! `i` always uses its own ChaCha8 stream (`seed`, stream `i`), so a tally
//! over any partition of `0..N` merges to the same counts regardless of how
//! the ranges were scheduled.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

use crate::fading::{FadingModel, FadingSampler, ScaledModel};
use crate::outage::InterferenceScenario;
use crate::secrecy::{duality_map, SecrecyScenario};
use crate::{Error, Result};

/// Minimum number of conditioning-event hits for a `P_so` estimate.
pub const MIN_CONDITIONING_HITS: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    OpN,
    OpI,
    OpNi,
    Ps,
    Pso,
    PsPlus,
}

impl Metric {
    pub const ALL: [Metric; 6] = [Metric::OpN, Metric::OpI, Metric::OpNi, Metric::Ps, Metric::Pso, Metric::PsPlus];

    pub fn name(self) -> &'static str {
        match self {
            Metric::OpN => "op_n",
            Metric::OpI => "op_i",
            Metric::OpNi => "op_ni",
            Metric::Ps => "p_s",
            Metric::Pso => "p_so",
            Metric::PsPlus => "p_s_plus",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or(Error::InvalidParameter { name: "metric", reason: "unknown metric name" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; does not affect results.
    pub workers: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { samples: 1_000_000, seed: 0, workers: 1 }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidParameter { name: "samples", reason: "must be at least 1" });
        }
        if self.workers == 0 {
            return Err(Error::InvalidParameter { name: "workers", reason: "must be at least 1" });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub p_hat: f64,
    pub std_err: f64,
    /// Number of trials behind `p_hat` (conditioning hits for `P_so`).
    pub n_effective: u64,
}

impl Estimate {
    pub fn from_counts(hits: u64, trials: u64) -> Self {
        let n = trials as f64;
        let p_hat = hits as f64 / n;
        Estimate { p_hat, std_err: libm::sqrt(p_hat * (1.0 - p_hat) / n), n_effective: trials }
    }
}

/// Thresholds and samplers for the defining events.
///
/// Built from an interference scenario (all outage thresholds equal) or from a
/// secrecy scenario, in which case the outage metrics are its duals:
/// `OP_N` at `μ`, `OP_I` at 1, and `OP_NI` at `2^{R_s}-1` on branches scaled
/// by `2^{R_s}/(2^{R_s}-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct McScenario {
    desired: FadingModel,
    branches: Vec<ScaledModel>,
    op_n_threshold: Option<f64>,
    op_i_threshold: Option<f64>,
    op_ni_threshold: Option<(f64, f64)>,
    /// `(2^{R_s}, μ)`
    secrecy: Option<(f64, f64)>,
}

impl McScenario {
    pub fn from_interference(scenario: &InterferenceScenario, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter { name: "gamma", reason: "threshold must be positive and finite" });
        }
        Ok(McScenario {
            desired: *scenario.desired(),
            branches: scenario.interferers().to_vec(),
            op_n_threshold: Some(gamma),
            op_i_threshold: Some(gamma),
            op_ni_threshold: Some((gamma, 1.0)),
            secrecy: None,
        })
    }

    pub fn from_secrecy(scenario: &SecrecyScenario) -> Self {
        let positive_rate = scenario.rate() > 0.0;
        let map = duality_map(scenario.rate()).ok();
        McScenario {
            desired: *scenario.desired(),
            branches: scenario.eavesdroppers().iter().map(|&e| e.into()).collect(),
            op_n_threshold: Some(scenario.mu()).filter(|&mu| mu > 0.0),
            op_i_threshold: Some(1.0),
            op_ni_threshold: map.map(|m| (m.gamma, m.scale)),
            secrecy: positive_rate.then(|| (libm::exp2(scenario.rate()), scenario.mu())),
        }
    }

    pub fn supports(&self, metric: Metric) -> bool {
        match metric {
            Metric::OpN => self.op_n_threshold.is_some(),
            Metric::OpI => self.op_i_threshold.is_some(),
            Metric::OpNi => self.op_ni_threshold.is_some(),
            Metric::Ps | Metric::Pso => self.secrecy.is_some(),
            Metric::PsPlus => true,
        }
    }

    /// Counts event hits for samples `range` of the stream family `seed`.
    pub fn tally_range(&self, seed: u64, range: Range<u64>) -> Tally {
        let desired = self.desired.sampler();
        let branches: Vec<FadingSampler> = self.branches.iter().map(ScaledModel::sampler).collect();
        let base = ChaCha8Rng::seed_from_u64(seed);
        let mut tally = Tally::empty(self);
        for index in range {
            let mut rng = base.clone();
            rng.set_stream(index);
            let gd = desired.sample(&mut rng);
            let sum: f64 = branches.iter().map(|b| b.sample(&mut rng)).sum();
            self.record(&mut tally, gd, sum);
        }
        tally
    }

    fn record(&self, tally: &mut Tally, gd: f64, sum: f64) {
        tally.samples += 1;
        let mut hit = |metric: Metric, event: bool| tally.hits[metric.index()] += u64::from(event);
        if let Some(t) = self.op_n_threshold {
            hit(Metric::OpN, gd < t);
        }
        if let Some(t) = self.op_i_threshold {
            hit(Metric::OpI, gd < t * sum);
        }
        if let Some((t, c)) = self.op_ni_threshold {
            hit(Metric::OpNi, gd < t * (c * sum + 1.0));
        }
        hit(Metric::PsPlus, gd > sum);
        if let Some((pow2, mu)) = self.secrecy {
            let outage = 1.0 + gd < pow2 * (1.0 + sum);
            let transmit = gd > mu;
            hit(Metric::Ps, outage);
            hit(Metric::Pso, outage && transmit);
            tally.conditioning += u64::from(transmit);
        }
    }
}

/// Raw event counts; merging is exact integer addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tally {
    pub samples: u64,
    pub hits: [u64; 6],
    /// Samples with `γ_d > μ`.
    pub conditioning: u64,
    supported: [bool; 6],
}

impl Tally {
    pub fn empty(scenario: &McScenario) -> Self {
        Tally { samples: 0, hits: [0; 6], conditioning: 0, supported: Metric::ALL.map(|m| scenario.supports(m)) }
    }

    pub fn merge(mut self, other: &Tally) -> Self {
        self.samples += other.samples;
        self.conditioning += other.conditioning;
        for (a, b) in self.hits.iter_mut().zip(other.hits) {
            *a += b;
        }
        self
    }

    pub fn hits(&self, metric: Metric) -> u64 {
        self.hits[metric.index()]
    }

    pub fn estimate(&self, metric: Metric) -> Result<Estimate> {
        if !self.supported[metric.index()] {
            return Err(Error::Unsupported("metric is not defined for this scenario"));
        }
        if self.samples == 0 {
            return Err(Error::InvalidParameter { name: "samples", reason: "must be at least 1" });
        }
        let hits = self.hits(metric);
        if metric == Metric::Pso {
            if self.conditioning < MIN_CONDITIONING_HITS {
                return Err(Error::InsufficientConditioning {
                    hits: self.conditioning,
                    required: MIN_CONDITIONING_HITS,
                });
            }
            return Ok(Estimate::from_counts(hits, self.conditioning));
        }
        Ok(Estimate::from_counts(hits, self.samples))
    }
}

/// Single-threaded estimate over samples `0..cfg.samples`.
pub fn estimate(metric: Metric, scenario: &McScenario, cfg: &McConfig) -> Result<Estimate> {
    cfg.validate()?;
    scenario.tally_range(cfg.seed, 0..cfg.samples).estimate(metric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ray(g: f64) -> FadingModel {
        FadingModel::rayleigh(g).unwrap()
    }

    #[test]
    fn partition_invariance() {
        let s = SecrecyScenario::new(FadingModel::nakagami(2.0, 10.0).unwrap(), vec![ray(3.0), ray(2.0)], 1.0, 1.0)
            .unwrap();
        let mc = McScenario::from_secrecy(&s);
        let whole = mc.tally_range(5, 0..3000);
        let parts = mc.tally_range(5, 0..1000).merge(&mc.tally_range(5, 1000..1001)).merge(&mc.tally_range(5, 1001..3000));
        assert_eq!(whole, parts);
    }

    #[test]
    fn complementary_counts() {
        let s = SecrecyScenario::new(ray(3.0), vec![ray(2.0), FadingModel::rice(3.0, 1.0).unwrap()], 1.0, 1.0).unwrap();
        let t = McScenario::from_secrecy(&s).tally_range(11, 0..20_000);
        assert_eq!(t.hits(Metric::OpI), t.samples - t.hits(Metric::PsPlus));
    }

    #[test]
    fn nesting_on_shared_samples() {
        let scn = InterferenceScenario::new(ray(5.0), [ray(1.0), ray(2.0)]).unwrap();
        let mc = McScenario::from_interference(&scn, 1.5).unwrap();
        let desired = scn.desired().sampler();
        let base = ChaCha8Rng::seed_from_u64(3);
        for i in 0..5000u64 {
            let mut rng = base.clone();
            rng.set_stream(i);
            let gd = desired.sample(&mut rng);
            let sum: f64 = scn.interferers().iter().map(|b| b.sampler().sample(&mut rng)).sum();
            let mut t = Tally::empty(&mc);
            mc.record(&mut t, gd, sum);
            assert!(t.hits(Metric::OpI) <= t.hits(Metric::OpNi));
        }
    }

    #[test]
    fn unsupported_metrics() {
        let s = SecrecyScenario::new(ray(3.0), vec![ray(2.0)], 0.0, 0.0).unwrap();
        let t = McScenario::from_secrecy(&s).tally_range(0, 0..10);
        assert!(t.estimate(Metric::Ps).is_err());
        assert!(t.estimate(Metric::OpNi).is_err());
        assert!(t.estimate(Metric::PsPlus).is_ok());
    }

    #[test]
    fn insufficient_conditioning() {
        let s = SecrecyScenario::new(ray(0.1), vec![ray(2.0)], 1.0, 5.0).unwrap();
        let t = McScenario::from_secrecy(&s).tally_range(0, 0..1000);
        assert!(matches!(t.estimate(Metric::Pso), Err(Error::InsufficientConditioning { .. })));
    }

    #[test]
    fn estimate_std_err() {
        let e = Estimate::from_counts(25, 100);
        assert_eq!(e.p_hat, 0.25);
        assert!((e.std_err - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-16);
        assert_eq!(Estimate::from_counts(0, 10).std_err, 0.0);
    }

    #[test]
    fn metric_names_round_trip() {
        for m in Metric::ALL {
            assert_eq!(m.name().parse::<Metric>().unwrap(), m);
        }
        assert!("bogus".parse::<Metric>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(estimate(Metric::PsPlus, &McScenario::from_secrecy(
            &SecrecyScenario::new(ray(1.0), vec![ray(1.0)], 0.0, 0.0).unwrap()),
            &McConfig { samples: 0, ..McConfig::default() }).is_err());
    }
}
