//! Scenario files.
//!
//! A scenario is a small TOML document with four sections:
//!
//! ```toml
//! [desired]
//! model = "nakagami"      # rayleigh | nakagami | rice
//! m = 2
//! mean_snr_db = 15
//!
//! [eavesdropper]
//! count = 3               # L_e; every branch shares the keys below
//! model = "rayleigh"
//! mean_snr_db = 5
//!
//! [secrecy]
//! rate_bits = 1
//! mu_db = "gamma"         # a number in dB, or "gamma" for μ = 2^R_s - 1
//!
//! [mc]
//! samples = 1000000
//! seed = 0
//! enabled = false
//! ```
//!
//! Branches that differ are listed as `[[eavesdropper.branch]]` tables; any
//! key a branch leaves out is taken from `[eavesdropper]`. Without `mu_db`
//! the transmission threshold is 0. All SNRs are given in dB and converted
//! once, here.

use std::fmt;
use std::ops::Range;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use secout_core::{duality_map, Family, FadingModel, McConfig, SecrecyScenario};

/// A problem in a scenario file, with the line it was found on when known.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "{field}: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { line: None, field: Some(field.into()), message: message.into() }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub family: Family,
    pub mean_snr_db: f64,
}

impl ModelSpec {
    pub fn model(&self) -> secout_core::Result<FadingModel> {
        FadingModel::new(self.family, db_to_linear(self.mean_snr_db))
    }

    pub fn describe(&self) -> String {
        let family = match self.family {
            Family::Rayleigh => "rayleigh".to_string(),
            Family::NakagamiM { m } => format!("nakagami(m={m})"),
            Family::Rice { k } => format!("rice(K={k})"),
        };
        format!("{family} at {} dB", self.mean_snr_db)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuSpec {
    Zero,
    Db(f64),
    /// `μ = 2^{R_s} - 1`, resolved against the current rate.
    Gamma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub desired: ModelSpec,
    pub eavesdroppers: Vec<ModelSpec>,
    pub rate_bits: f64,
    pub mu: MuSpec,
    pub mc: McConfig,
    pub mc_enabled: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    desired: Option<Spanned<RawModel>>,
    eavesdropper: Option<Spanned<RawEavesdropper>>,
    secrecy: Option<Spanned<RawSecrecy>>,
    mc: Option<RawMc>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    model: Option<Spanned<String>>,
    m: Option<Spanned<f64>>,
    k: Option<Spanned<f64>>,
    mean_snr_db: Option<Spanned<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEavesdropper {
    count: Option<Spanned<i64>>,
    model: Option<Spanned<String>>,
    m: Option<Spanned<f64>>,
    k: Option<Spanned<f64>>,
    mean_snr_db: Option<Spanned<f64>>,
    branch: Option<Vec<Spanned<RawModel>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSecrecy {
    rate_bits: Option<Spanned<f64>>,
    mu_db: Option<Spanned<toml::Value>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMc {
    samples: Option<Spanned<i64>>,
    seed: Option<Spanned<i64>>,
    enabled: Option<bool>,
    workers: Option<Spanned<i64>>,
}

/// Maps byte offsets to 1-based line numbers.
struct Lines<'a>(&'a str);

impl Lines<'_> {
    fn of(&self, span: Range<usize>) -> usize {
        self.0[..span.start.min(self.0.len())].matches('\n').count() + 1
    }

    fn err<T>(&self, value: &Spanned<T>, field: &str, message: impl Into<String>) -> ConfigError {
        ConfigError { line: Some(self.of(value.span())), field: Some(field.to_string()), message: message.into() }
    }

    fn missing<T>(&self, section: Option<&Spanned<T>>, field: &str) -> ConfigError {
        ConfigError {
            line: section.map(|s| self.of(s.span())),
            field: Some(field.to_string()),
            message: "required value is missing".to_string(),
        }
    }
}

/// Shared and per-branch keys for one model, the innermost set first.
struct ModelKeys<'a> {
    model: Option<&'a Spanned<String>>,
    m: Option<&'a Spanned<f64>>,
    k: Option<&'a Spanned<f64>>,
    mean_snr_db: Option<&'a Spanned<f64>>,
}

fn resolve_model<T>(
    lines: &Lines<'_>,
    keys: ModelKeys<'_>,
    prefix: &str,
    section: Option<&Spanned<T>>,
) -> Result<ModelSpec, ConfigError> {
    let model = keys.model.ok_or_else(|| lines.missing(section, &format!("{prefix}.model")))?;
    let family = match model.get_ref().to_ascii_lowercase().as_str() {
        "rayleigh" => Family::Rayleigh,
        "nakagami" | "nakagami-m" => {
            let m = keys.m.ok_or_else(|| lines.missing(section, &format!("{prefix}.m")))?;
            if !(*m.get_ref() >= 0.5) || !m.get_ref().is_finite() {
                return Err(lines.err(m, &format!("{prefix}.m"), "Nakagami shape must be at least 0.5"));
            }
            Family::NakagamiM { m: *m.get_ref() }
        }
        "rice" | "rician" => {
            let k = keys.k.ok_or_else(|| lines.missing(section, &format!("{prefix}.k")))?;
            if !(*k.get_ref() >= 0.0) || !k.get_ref().is_finite() {
                return Err(lines.err(k, &format!("{prefix}.k"), "Rician factor must be nonnegative"));
            }
            Family::Rice { k: *k.get_ref() }
        }
        other => {
            return Err(lines.err(
                model,
                &format!("{prefix}.model"),
                format!("unknown model \"{other}\" (expected rayleigh, nakagami or rice)"),
            ))
        }
    };
    let mean = keys.mean_snr_db.ok_or_else(|| lines.missing(section, &format!("{prefix}.mean_snr_db")))?;
    if !mean.get_ref().is_finite() || db_to_linear(*mean.get_ref()) <= 0.0 || !db_to_linear(*mean.get_ref()).is_finite() {
        return Err(lines.err(mean, &format!("{prefix}.mean_snr_db"), "mean SNR in dB is out of range"));
    }
    Ok(ModelSpec { family, mean_snr_db: *mean.get_ref() })
}

fn nonnegative_int(lines: &Lines<'_>, v: &Spanned<i64>, field: &str, min: i64) -> Result<u64, ConfigError> {
    if *v.get_ref() < min {
        return Err(lines.err(v, field, format!("must be at least {min}")));
    }
    Ok(*v.get_ref() as u64)
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let lines = Lines(text);
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError {
            line: e.span().map(|s| lines.of(s)),
            field: None,
            message: e.message().trim().to_string(),
        })?;

        let empty = RawModel::default();
        let desired_raw = raw.desired.as_ref().map(|d| d.get_ref()).unwrap_or(&empty);
        let desired = resolve_model(
            &lines,
            ModelKeys {
                model: desired_raw.model.as_ref(),
                m: desired_raw.m.as_ref(),
                k: desired_raw.k.as_ref(),
                mean_snr_db: desired_raw.mean_snr_db.as_ref(),
            },
            "desired",
            raw.desired.as_ref(),
        )?;

        let eve = raw.eavesdropper.as_ref().ok_or_else(|| ConfigError::field("eavesdropper", "section is missing"))?;
        let shared = eve.get_ref();
        let count = shared.count.as_ref().map(|c| nonnegative_int(&lines, c, "eavesdropper.count", 1)).transpose()?;
        let eavesdroppers = match &shared.branch {
            Some(branches) => {
                if let (Some(c), Some(span)) = (count, shared.count.as_ref()) {
                    if c as usize != branches.len() {
                        return Err(lines.err(
                            span,
                            "eavesdropper.count",
                            format!("count is {c} but {} branch tables are listed", branches.len()),
                        ));
                    }
                }
                if branches.is_empty() {
                    return Err(ConfigError::field("eavesdropper.branch", "at least one branch is required"));
                }
                branches
                    .iter()
                    .enumerate()
                    .map(|(i, b)| {
                        let r = b.get_ref();
                        resolve_model(
                            &lines,
                            ModelKeys {
                                model: r.model.as_ref().or(shared.model.as_ref()),
                                m: r.m.as_ref().or(shared.m.as_ref()),
                                k: r.k.as_ref().or(shared.k.as_ref()),
                                mean_snr_db: r.mean_snr_db.as_ref().or(shared.mean_snr_db.as_ref()),
                            },
                            &format!("eavesdropper.branch[{}]", i + 1),
                            Some(b),
                        )
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
            None => {
                let spec = resolve_model(
                    &lines,
                    ModelKeys {
                        model: shared.model.as_ref(),
                        m: shared.m.as_ref(),
                        k: shared.k.as_ref(),
                        mean_snr_db: shared.mean_snr_db.as_ref(),
                    },
                    "eavesdropper",
                    Some(eve),
                )?;
                vec![spec; count.unwrap_or(1) as usize]
            }
        };

        let sec = raw.secrecy.as_ref().ok_or_else(|| ConfigError::field("secrecy", "section is missing"))?;
        let rate = sec.get_ref().rate_bits.as_ref().ok_or_else(|| lines.missing(Some(sec), "secrecy.rate_bits"))?;
        if !(*rate.get_ref() >= 0.0) || !rate.get_ref().is_finite() {
            return Err(lines.err(rate, "secrecy.rate_bits", "must be a nonnegative number of bits"));
        }
        let mu = match &sec.get_ref().mu_db {
            None => MuSpec::Zero,
            Some(v) => match v.get_ref() {
                toml::Value::String(s) if s.eq_ignore_ascii_case("gamma") => MuSpec::Gamma,
                toml::Value::Float(x) if x.is_finite() => MuSpec::Db(*x),
                toml::Value::Integer(x) => MuSpec::Db(*x as f64),
                _ => return Err(lines.err(v, "secrecy.mu_db", "expected a number in dB or the string \"gamma\"")),
            },
        };

        let mut mc = McConfig::default();
        let mut mc_enabled = false;
        if let Some(raw_mc) = &raw.mc {
            if let Some(s) = &raw_mc.samples {
                mc.samples = nonnegative_int(&lines, s, "mc.samples", 1)?;
            }
            if let Some(s) = &raw_mc.seed {
                mc.seed = nonnegative_int(&lines, s, "mc.seed", 0)?;
            }
            if let Some(w) = &raw_mc.workers {
                mc.workers = nonnegative_int(&lines, w, "mc.workers", 1)? as usize;
            }
            mc_enabled = raw_mc.enabled.unwrap_or(false);
        }

        let cfg = ScenarioConfig { desired, eavesdroppers, rate_bits: *rate.get_ref(), mu, mc, mc_enabled };
        cfg.scenario()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: None,
            field: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    /// Linear transmission threshold μ.
    pub fn mu_linear(&self) -> f64 {
        match self.mu {
            MuSpec::Zero => 0.0,
            MuSpec::Db(db) => db_to_linear(db),
            MuSpec::Gamma => duality_map(self.rate_bits).map(|m| m.gamma).unwrap_or(0.0),
        }
    }

    pub fn scenario(&self) -> Result<SecrecyScenario, ConfigError> {
        let desired = self.desired.model().map_err(|e| ConfigError::field("desired", e.to_string()))?;
        let eves = self
            .eavesdroppers
            .iter()
            .enumerate()
            .map(|(i, b)| b.model().map_err(|e| ConfigError::field(format!("eavesdropper.branch[{}]", i + 1), e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        SecrecyScenario::new(desired, eves, self.rate_bits, self.mu_linear())
            .map_err(|e| ConfigError::field("secrecy", e.to_string()))
    }

    /// A copy with one sweepable field replaced.
    pub fn with_field(&self, field: SweepField, value: f64) -> Result<Self, ConfigError> {
        let mut out = self.clone();
        match field {
            SweepField::DesiredMeanSnrDb => out.desired.mean_snr_db = value,
            SweepField::RateBits => {
                if !(value >= 0.0) {
                    return Err(ConfigError::field(field.name(), format!("{value} is not a nonnegative rate")));
                }
                out.rate_bits = value
            }
            SweepField::EavesdropperMeanSnrDb => out.eavesdroppers.iter_mut().for_each(|b| b.mean_snr_db = value),
            SweepField::EavesdropperCount => {
                if !(value >= 1.0) || value.fract() != 0.0 {
                    return Err(ConfigError::field(field.name(), format!("{value} is not a positive whole number")));
                }
                let first = out.eavesdroppers[0];
                if out.eavesdroppers.iter().any(|b| *b != first) {
                    return Err(ConfigError::field(field.name(), "cannot be swept when branches differ"));
                }
                out.eavesdroppers = vec![first; value as usize];
            }
        }
        out.scenario()?;
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepField {
    DesiredMeanSnrDb,
    RateBits,
    EavesdropperMeanSnrDb,
    EavesdropperCount,
}

impl SweepField {
    pub const ALL: [SweepField; 4] = [
        SweepField::DesiredMeanSnrDb,
        SweepField::RateBits,
        SweepField::EavesdropperMeanSnrDb,
        SweepField::EavesdropperCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepField::DesiredMeanSnrDb => "desired.mean_snr_db",
            SweepField::RateBits => "secrecy.rate_bits",
            SweepField::EavesdropperMeanSnrDb => "eavesdropper.mean_snr_db",
            SweepField::EavesdropperCount => "eavesdropper.count",
        }
    }
}

impl fmt::Display for SweepField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SweepField {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| ConfigError {
            line: None,
            field: None,
            message: format!(
                "unknown sweep field \"{s}\" (expected one of {})",
                Self::ALL.map(SweepField::name).join(", ")
            ),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "\
[desired]
model = \"nakagami\"
m = 2
mean_snr_db = 10

[eavesdropper]
count = 3
model = \"rayleigh\"
mean_snr_db = 5

[secrecy]
rate_bits = 1
mu_db = \"gamma\"
";

    #[test]
    fn parses_shared_branches() {
        let cfg = ScenarioConfig::parse(BASE).unwrap();
        assert_eq!(cfg.desired.family, Family::NakagamiM { m: 2.0 });
        assert_eq!(cfg.eavesdroppers.len(), 3);
        assert_eq!(cfg.mu, MuSpec::Gamma);
        assert_eq!(cfg.mu_linear(), 1.0);
        let s = cfg.scenario().unwrap();
        assert_eq!(s.desired().mean_snr(), 10.0);
        assert!((s.eavesdroppers()[2].mean_snr() - 10f64.powf(0.5)).abs() < 1e-15);
        assert!(!cfg.mc_enabled);
    }

    #[test]
    fn branch_overrides_inherit_shared_keys() {
        let text = "\
[desired]
model = \"rayleigh\"
mean_snr_db = 5
[eavesdropper]
model = \"rice\"
k = 5
mean_snr_db = 0
[[eavesdropper.branch]]
[[eavesdropper.branch]]
model = \"nakagami\"
m = 5
[[eavesdropper.branch]]
mean_snr_db = 3
[secrecy]
rate_bits = 0.5
mu_db = -3
[mc]
samples = 1000
seed = 7
enabled = true
";
        let cfg = ScenarioConfig::parse(text).unwrap();
        assert_eq!(
            cfg.eavesdroppers,
            vec![
                ModelSpec { family: Family::Rice { k: 5.0 }, mean_snr_db: 0.0 },
                ModelSpec { family: Family::NakagamiM { m: 5.0 }, mean_snr_db: 0.0 },
                ModelSpec { family: Family::Rice { k: 5.0 }, mean_snr_db: 3.0 },
            ]
        );
        assert_eq!(cfg.mu, MuSpec::Db(-3.0));
        assert_eq!((cfg.mc.samples, cfg.mc.seed, cfg.mc_enabled), (1000, 7, true));
    }

    #[test]
    fn missing_field_is_named_with_its_section_line() {
        let err = ScenarioConfig::parse(&BASE.replace("mean_snr_db = 10\n", "")).unwrap_err();
        assert_eq!(err.field.as_deref(), Some("desired.mean_snr_db"));
        assert_eq!(err.line, Some(1));
        assert!(err.to_string().contains("desired.mean_snr_db"));
    }

    #[test]
    fn bad_values_point_at_their_line() {
        let err = ScenarioConfig::parse(&BASE.replace("m = 2", "m = 0.2")).unwrap_err();
        assert_eq!((err.line, err.field.as_deref()), (Some(3), Some("desired.m")));
        let err = ScenarioConfig::parse(&BASE.replace("\"rayleigh\"", "\"hoyt\"")).unwrap_err();
        assert_eq!((err.line, err.field.as_deref()), (Some(8), Some("eavesdropper.model")));
        let err = ScenarioConfig::parse(&BASE.replace("\"gamma\"", "\"beta\"")).unwrap_err();
        assert_eq!(err.field.as_deref(), Some("secrecy.mu_db"));
        let err = ScenarioConfig::parse(&BASE.replace("count = 3", "count = 0")).unwrap_err();
        assert_eq!(err.field.as_deref(), Some("eavesdropper.count"));
        let err = ScenarioConfig::parse(&BASE.replace("rate_bits = 1", "rate_bits = -1")).unwrap_err();
        assert_eq!(err.field.as_deref(), Some("secrecy.rate_bits"));
    }

    #[test]
    fn syntax_and_unknown_keys_are_rejected() {
        let err = ScenarioConfig::parse("[desired\nmodel = 1").unwrap_err();
        assert_eq!(err.line, Some(1));
        let err = ScenarioConfig::parse(&format!("{BASE}\n[mc]\nsamplez = 3\n")).unwrap_err();
        assert!(err.message.contains("samplez"), "{err}");
        assert!(err.line.is_some());
    }

    #[test]
    fn count_must_match_branch_list() {
        let text = BASE.replace("count = 3\n", "count = 2\n[[eavesdropper.branch]]\n");
        assert_eq!(ScenarioConfig::parse(&text).unwrap_err().field.as_deref(), Some("eavesdropper.count"));
    }

    #[test]
    fn gamma_token_follows_rate() {
        let cfg = ScenarioConfig::parse(BASE).unwrap().with_field(SweepField::RateBits, 2.0).unwrap();
        assert_eq!(cfg.mu_linear(), 3.0);
        let zero = cfg.with_field(SweepField::RateBits, 0.0).unwrap();
        assert_eq!(zero.mu_linear(), 0.0);
    }

    #[test]
    fn sweep_fields() {
        let cfg = ScenarioConfig::parse(BASE).unwrap();
        assert_eq!(cfg.with_field(SweepField::EavesdropperCount, 5.0).unwrap().eavesdroppers.len(), 5);
        assert!(cfg.with_field(SweepField::EavesdropperCount, 1.5).is_err());
        assert!(cfg.with_field(SweepField::EavesdropperCount, 0.0).is_err());
        let e = cfg.with_field(SweepField::EavesdropperMeanSnrDb, -2.0).unwrap();
        assert!(e.eavesdroppers.iter().all(|b| b.mean_snr_db == -2.0));
        assert_eq!(cfg.with_field(SweepField::DesiredMeanSnrDb, 30.0).unwrap().desired.mean_snr_db, 30.0);
        assert!(cfg.with_field(SweepField::RateBits, -1.0).is_err());
        for f in SweepField::ALL {
            assert_eq!(f.name().parse::<SweepField>().unwrap(), f);
        }
        assert!("desired.m".parse::<SweepField>().is_err());
    }
}
