//! Parallel Monte Carlo and the analytic-versus-simulation check.
//!
//! Samples are split into fixed index chunks; each chunk draws from its own
//! per-sample streams and the chunk tallies are summed as integers, so the
//! result does not depend on how many workers ran or in which order.

use std::fmt;

use rayon::prelude::*;

use secout_core::mc::{McScenario, Tally};
use secout_core::{
    duality_map, op_i, op_n, op_ni, p_s, p_s_plus, p_so, Estimate, McConfig, Metric, Probability, SecrecyScenario,
};

use crate::format::number;

/// Samples per work item.
pub const CHUNK: u64 = 1 << 15;

/// Below `RESOLUTION_HITS / n` a binomial estimate cannot resolve a
/// probability, so the comparison is reported as inconclusive.
pub const RESOLUTION_HITS: f64 = 25.0;

pub fn tally(scenario: &McScenario, cfg: &McConfig) -> secout_core::Result<Tally> {
    cfg.validate()?;
    let chunks: Vec<(u64, u64)> = (0..cfg.samples.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(cfg.samples)))
        .collect();
    let run = || {
        chunks
            .par_iter()
            .map(|&(a, b)| scenario.tally_range(cfg.seed, a..b))
            .reduce(|| Tally::empty(scenario), |x, y| x.merge(&y))
    };
    match rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build() {
        Ok(pool) => Ok(pool.install(run)),
        // no threads available: the sequential sum is the same number
        Err(_) => Ok(chunks.iter().fold(Tally::empty(scenario), |t, &(a, b)| t.merge(&scenario.tally_range(cfg.seed, a..b)))),
    }
}

pub fn estimate(metric: Metric, scenario: &McScenario, cfg: &McConfig) -> secout_core::Result<Estimate> {
    tally(scenario, cfg)?.estimate(metric)
}

/// The analytic value of `metric` for a secrecy scenario. Outage metrics are
/// the duals the simulation checks: `OP_N(μ)`, `OP_I(1)` and `OP_NI` on the
/// mapped branches. `None` when the metric is undefined for the scenario.
pub fn analytic(metric: Metric, scenario: &SecrecyScenario) -> secout_core::Result<Option<Probability>> {
    let positive_rate = scenario.rate() > 0.0;
    Ok(match metric {
        Metric::OpN if scenario.mu() > 0.0 => Some(op_n(scenario.desired(), scenario.mu())?),
        Metric::OpN => None,
        Metric::OpI => Some(op_i(&scenario.unmapped()?, 1.0)?),
        Metric::OpNi if positive_rate => {
            let map = duality_map(scenario.rate())?;
            Some(op_ni(&scenario.mapped(&map)?, map.gamma)?)
        }
        Metric::Ps if positive_rate => Some(p_s(scenario)?),
        Metric::Pso if positive_rate => Some(p_so(scenario)?),
        Metric::OpNi | Metric::Ps | Metric::Pso => None,
        Metric::PsPlus => Some(p_s_plus(scenario)?),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    TwoSided,
    /// The analytic value only bounds the truth from below.
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The simulation cannot resolve the value at this sample size.
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// `(|Δ|/σ, status)` for one comparison.
pub fn judge(analytic: f64, est: &Estimate, k_sigma: f64, check: Check) -> (f64, Status) {
    let diff = analytic - est.p_hat;
    let z = if est.std_err > 0.0 {
        diff.abs() / est.std_err
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    if analytic.min(1.0 - analytic) < RESOLUTION_HITS / est.n_effective as f64 {
        return (z, Status::Inconclusive);
    }
    let ok = match check {
        Check::TwoSided => z <= k_sigma,
        Check::LowerBound => diff <= k_sigma * est.std_err,
    };
    (z, if ok { Status::Pass } else { Status::Fail })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRow {
    pub metric: Metric,
    pub analytic: f64,
    /// `None` when the conditioning event was hit too rarely to estimate.
    pub estimate: Option<Estimate>,
    pub z: f64,
    pub check: Check,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub rows: Vec<VerificationRow>,
    pub k_sigma: f64,
    pub samples: u64,
    pub seed: u64,
}

impl VerificationReport {
    /// No comparison failed (inconclusive rows do not count against it).
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != Status::Fail)
    }

    pub fn inconclusive(&self) -> impl Iterator<Item = &VerificationRow> {
        self.rows.iter().filter(|r| r.status == Status::Inconclusive)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,analytic,mc,std_err,n_effective,z,check,status\n");
        for r in &self.rows {
            let (p, se, n) = match &r.estimate {
                Some(e) => (number(e.p_hat), number(e.std_err), e.n_effective.to_string()),
                None => ("NA".into(), "NA".into(), "NA".into()),
            };
            let check = match r.check {
                Check::TwoSided => "two_sided",
                Check::LowerBound => "lower_bound",
            };
            out += &format!(
                "{},{},{p},{se},{n},{},{check},{}\n",
                r.metric,
                number(r.analytic),
                number(r.z),
                r.status.name()
            );
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Monte Carlo check: N = {}, seed = {}, k = {}", self.samples, self.seed, self.k_sigma)?;
        writeln!(f, "{:<9} {:>16} {:>16} {:>14} {:>9}  status", "metric", "analytic", "mc", "std_err", "|z|")?;
        for r in &self.rows {
            let (p, se) = r.estimate.map_or(("NA".into(), "NA".into()), |e| (number(e.p_hat), number(e.std_err)));
            let note = if r.check == Check::LowerBound { " (lower bound)" } else { "" };
            writeln!(
                f,
                "{:<9} {:>16} {:>16} {:>14} {:>9}  {}{note}",
                r.metric.name(),
                number(r.analytic),
                p,
                se,
                format!("{:.2}", r.z),
                r.status.name()
            )?;
        }
        write!(f, "overall: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

/// Compares every requested metric that is defined for `scenario` against
/// one shared simulation.
pub fn verify(
    scenario: &SecrecyScenario,
    metrics: &[Metric],
    cfg: &McConfig,
    k_sigma: f64,
) -> secout_core::Result<VerificationReport> {
    if !(k_sigma > 0.0) {
        return Err(secout_core::Error::InvalidParameter { name: "k_sigma", reason: "must be positive" });
    }
    let sim = McScenario::from_secrecy(scenario);
    let counts = tally(&sim, cfg)?;
    let mut rows = Vec::new();
    for &metric in metrics {
        let Some(a) = analytic(metric, scenario)? else { continue };
        let check = if a.lower_bound { Check::LowerBound } else { Check::TwoSided };
        let row = match counts.estimate(metric) {
            Ok(est) => {
                let (z, status) = judge(a.value, &est, k_sigma, check);
                VerificationRow { metric, analytic: a.value, estimate: Some(est), z, check, status }
            }
            Err(secout_core::Error::InsufficientConditioning { .. }) => VerificationRow {
                metric,
                analytic: a.value,
                estimate: None,
                z: f64::NAN,
                check,
                status: Status::Inconclusive,
            },
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    Ok(VerificationReport { rows, k_sigma, samples: cfg.samples, seed: cfg.seed })
}
