//! Single evaluations and parameter sweeps.

use secout_core::{duality_map, McConfig, Metric, Probability, SecrecyScenario};
use secout_core::mc::McScenario;

use crate::config::{ScenarioConfig, SweepField};
use crate::format::{as_printed, number, optional};
use crate::oracle::{analytic, tally};
use crate::AppError;

/// Metrics reported by `eval` and `sweep`, in column order.
pub const SECRECY_METRICS: [Metric; 3] = [Metric::Ps, Metric::Pso, Metric::PsPlus];

/// Analytic value of a metric, or the reason it has none.
pub type Outcome = Result<Probability, String>;

pub fn evaluate(metric: Metric, scenario: &SecrecyScenario) -> Outcome {
    match analytic(metric, scenario) {
        Ok(Some(p)) => Ok(p),
        Ok(None) => Err("not applicable".to_string()),
        Err(e) => Err(e.to_string()),
    }
}

/// MC estimate as `(p_hat, std_err)`, `None` where the metric is undefined or
/// its conditioning event was too rare.
fn simulate(scenario: &SecrecyScenario, metrics: &[Metric], cfg: &McConfig) -> Result<Vec<Option<(f64, f64)>>, AppError> {
    let counts = tally(&McScenario::from_secrecy(scenario), cfg)?;
    Ok(metrics.iter().map(|&m| counts.estimate(m).ok().map(|e| (e.p_hat, e.std_err))).collect())
}

/// `from, from + step, …` up to `to`, each value as it will be printed.
pub fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, AppError> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) {
        return Err(AppError::Usage("sweep bounds must be finite".into()));
    }
    if !(step > 0.0) {
        return Err(AppError::Usage("--step must be positive".into()));
    }
    if to < from {
        return Err(AppError::Usage(format!("empty grid: --to {to} is below --from {from}")));
    }
    let tol = 1e-9 * step;
    let mut out = Vec::new();
    for k in 0u64.. {
        let v = from + k as f64 * step;
        if v > to + tol {
            break;
        }
        out.push(as_printed(v));
        if out.len() > 1_000_000 {
            return Err(AppError::Usage("grid has more than a million points".into()));
        }
    }
    Ok(out)
}

/// CSV for a sweep of `field` over `values`. Analytic columns always; MC
/// columns when `mc` is given.
pub fn sweep_csv(base: &ScenarioConfig, field: SweepField, values: &[f64], mc: Option<&McConfig>) -> Result<String, AppError> {
    if values.is_empty() {
        return Err(AppError::Usage("empty grid".into()));
    }
    let mut out = String::from("sweep_field,sweep_value");
    for m in SECRECY_METRICS {
        out += &format!(",{m}");
    }
    if mc.is_some() {
        for m in SECRECY_METRICS {
            out += &format!(",mc_{m},mc_stderr_{m}");
        }
    }
    out.push('\n');
    for &v in values {
        let cfg = base.with_field(field, v)?;
        let scenario = cfg.scenario()?;
        out += &format!("{field},{}", number(v));
        for m in SECRECY_METRICS {
            out += &format!(",{}", optional(evaluate(m, &scenario).ok().map(|p| p.value)));
        }
        if let Some(mc) = mc {
            for est in simulate(&scenario, &SECRECY_METRICS, mc)? {
                out += &format!(",{},{}", optional(est.map(|e| e.0)), optional(est.map(|e| e.1)));
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// Human-readable table of the secrecy metrics and their interference duals.
pub fn eval_table(cfg: &ScenarioConfig, mc: Option<&McConfig>) -> Result<String, AppError> {
    let scenario = cfg.scenario()?;
    let mut out = String::new();
    out += &format!("desired:      {}\n", cfg.desired.describe());
    for (i, b) in cfg.eavesdroppers.iter().enumerate() {
        out += &format!("eavesdropper: branch {} {}\n", i + 1, b.describe());
    }
    out += &format!("secrecy:      R_s = {} bit/s/Hz, mu = {} (linear)\n", number(cfg.rate_bits), number(cfg.mu_linear()));
    match duality_map(cfg.rate_bits) {
        Ok(map) => out += &format!("duality:      gamma = {}, branch scale c = {}\n", number(map.gamma), number(map.scale)),
        Err(_) => out += "duality:      undefined at R_s = 0\n",
    }
    out.push('\n');

    let rows: [(Metric, String); 6] = [
        (Metric::Ps, "Pr{C_s < R_s}".into()),
        (Metric::Pso, "Pr{C_s < R_s | gamma_d > mu}".into()),
        (Metric::PsPlus, "Pr{C_s > 0}".into()),
        (Metric::OpN, format!("OP_N at mu = {}", number(cfg.mu_linear()))),
        (Metric::OpI, "OP_I at gamma = 1".into()),
        (Metric::OpNi, "OP_NI at gamma = 2^R_s - 1, scaled branches".into()),
    ];
    let metrics: Vec<Metric> = rows.iter().map(|r| r.0).collect();
    let sim = mc.map(|c| simulate(&scenario, &metrics, c)).transpose()?;
    out += &format!("{:<9} {:>20}", "metric", "analytic");
    if sim.is_some() {
        out += &format!(" {:>20} {:>20}", "mc", "mc_stderr");
    }
    out += "  meaning\n";
    for (i, (metric, meaning)) in rows.iter().enumerate() {
        let outcome = evaluate(*metric, &scenario);
        let value = optional(outcome.as_ref().ok().map(|p| p.value));
        out += &format!("{:<9} {:>20}", metric.name(), value);
        if let Some(sim) = &sim {
            out += &format!(" {:>20} {:>20}", optional(sim[i].map(|e| e.0)), optional(sim[i].map(|e| e.1)));
        }
        out += &format!("  {meaning}");
        match &outcome {
            Ok(p) if p.lower_bound => out += " [lower bound: mu > gamma]",
            Ok(p) if p.underflow => out += " [below 1e-300]",
            Err(reason) if reason != "not applicable" => out += &format!(" [{reason}]"),
            _ => {}
        }
        out.push('\n');
    }
    Ok(out)
}
