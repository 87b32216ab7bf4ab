//! Fading laws for a single link's instantaneous SNR.
//!
//! Each [`FadingModel`] knows its MGF `Φ(s) = E[e^{sX}]`, the closed-form
//! n-th derivative of that MGF, its CDF, and how to draw samples:
//!
//! | family     | Φ(s)                                   | CDF                          |
//! |------------|----------------------------------------|------------------------------|
//! | Rayleigh   | `(1 - sγ̄)^-1`                          | `1 - e^{-x/γ̄}`               |
//! | Nakagami-m | `(1 - sγ̄/m)^-m`                        | `P(m, m x/γ̄)`                |
//! | Rice       | `(1+K)/(1+K-sγ̄) · e^{sKγ̄/(1+K-sγ̄)}`    | `1 - Q_1(√(2K), √(2(1+K)x/γ̄))` |
//!
//! Derivatives are produced as [`SignedLog`] values so that `γ̄ⁿ n!` growth
//! never overflows before the caller decides how to combine terms.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};

use crate::logspace::{log_sum_exp, SignedLog};
use crate::special::{gamma_p, ln_factorial, ln_gamma, noncentral_chi2_2dof};
use crate::{Error, Result, DEFAULT_MAX_ORDER};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Rayleigh,
    NakagamiM { m: f64 },
    Rice { k: f64 },
}

/// A fading law together with its mean SNR (linear, not dB).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingModel {
    family: Family,
    mean_snr: f64,
}

fn check_mean(mean_snr: f64) -> Result<()> {
    if mean_snr > 0.0 && mean_snr.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "mean_snr", reason: "must be positive and finite" })
    }
}

fn check_order(n: usize) -> Result<()> {
    if n > DEFAULT_MAX_ORDER {
        Err(Error::OrderTooHigh { order: n, max: DEFAULT_MAX_ORDER })
    } else {
        Ok(())
    }
}

impl FadingModel {
    pub fn rayleigh(mean_snr: f64) -> Result<Self> {
        check_mean(mean_snr)?;
        Ok(FadingModel { family: Family::Rayleigh, mean_snr })
    }

    pub fn nakagami(m: f64, mean_snr: f64) -> Result<Self> {
        check_mean(mean_snr)?;
        if !(m >= 0.5) || !m.is_finite() {
            return Err(Error::InvalidParameter { name: "m", reason: "Nakagami shape must be at least 0.5" });
        }
        Ok(FadingModel { family: Family::NakagamiM { m }, mean_snr })
    }

    pub fn rice(k: f64, mean_snr: f64) -> Result<Self> {
        check_mean(mean_snr)?;
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::InvalidParameter { name: "K", reason: "Rician factor must be nonnegative" });
        }
        Ok(FadingModel { family: Family::Rice { k }, mean_snr })
    }

    pub fn new(family: Family, mean_snr: f64) -> Result<Self> {
        match family {
            Family::Rayleigh => Self::rayleigh(mean_snr),
            Family::NakagamiM { m } => Self::nakagami(m, mean_snr),
            Family::Rice { k } => Self::rice(k, mean_snr),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn mean_snr(&self) -> f64 {
        self.mean_snr
    }

    /// Same family and shape, different mean.
    pub fn with_mean_snr(&self, mean_snr: f64) -> Result<Self> {
        Self::new(self.family, mean_snr)
    }

    /// Integer Nakagami shape, with Rayleigh read as `m = 1`.
    pub fn integer_shape(&self) -> Option<usize> {
        match self.family {
            Family::Rayleigh => Some(1),
            Family::NakagamiM { m } if libm::trunc(m) == m && m >= 1.0 => Some(m as usize),
            _ => None,
        }
    }

    /// Cumulative distribution `Pr{X <= x}`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::InvalidParameter { name: "x", reason: "CDF argument must be nonnegative" });
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let g = self.mean_snr;
        match self.family {
            Family::Rayleigh => Ok(-libm::expm1(-x / g)),
            Family::NakagamiM { m } => gamma_p(m, m * x / g),
            Family::Rice { k } => noncentral_chi2_2dof(k, (1.0 + k) * x / g).map(|(p, _)| p),
        }
    }

    pub fn sampler(&self) -> FadingSampler {
        let g = self.mean_snr;
        match self.family {
            Family::Rayleigh => FadingSampler::Exponential { mean: g },
            Family::NakagamiM { m } => {
                // shape >= 0.5 and scale > 0 were validated on construction
                FadingSampler::Gamma(Gamma::new(m, g / m).expect("validated gamma parameters"))
            }
            Family::Rice { k } => FadingSampler::Rice {
                los: libm::sqrt(k / (k + 1.0)),
                sigma: libm::sqrt(0.5 / (k + 1.0)),
                mean: g,
            },
        }
    }

    /// One SNR draw. Prefer [`FadingModel::sampler`] in loops.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sampler().sample(rng)
    }

    fn ln_derivative_closed_form(&self, n: usize, s: f64) -> f64 {
        let g = self.mean_snr;
        let nf = n as f64;
        let ln_g = libm::log(g);
        match self.family {
            Family::Rayleigh => nf * ln_g + ln_factorial(n) - (nf + 1.0) * libm::log1p(-s * g),
            Family::NakagamiM { m } => {
                nf * ln_g + m * libm::log(m) + ln_gamma(m + nf)
                    - ln_gamma(m)
                    - (nf + m) * libm::log(m - s * g)
            }
            Family::Rice { k } => {
                let d = 1.0 + k - s * g;
                let ln_d = libm::log(d);
                let exponent = s * k * g / d;
                let ln_sum = if k == 0.0 {
                    -ln_factorial(n)
                } else {
                    let ln_a = libm::log(k * (1.0 + k)) - ln_d;
                    let terms: alloc::vec::Vec<f64> = (0..=n)
                        .map(|i| i as f64 * ln_a - 2.0 * ln_factorial(i) - ln_factorial(n - i))
                        .collect();
                    log_sum_exp(&terms)
                };
                nf * ln_g + 2.0 * ln_factorial(n) + libm::log1p(k) - (nf + 1.0) * ln_d + exponent + ln_sum
            }
        }
    }
}

/// Shared MGF interface of plain and scaled fading laws.
pub trait MomentGenerating {
    /// Supremum of the MGF's domain.
    fn s_max(&self) -> f64;

    /// `Φ(s) = E[e^{sX}]`.
    fn mgf(&self, s: f64) -> Result<f64>;

    /// `Φ^{(n)}(s)` as a signed-log value.
    fn ln_mgf_derivative(&self, n: usize, s: f64) -> Result<SignedLog>;

    /// `Φ^{(n)}(s)` as a plain float; `n = 0` is exactly [`Self::mgf`].
    fn mgf_derivative(&self, n: usize, s: f64) -> Result<f64> {
        if n == 0 {
            check_order(n)?;
            return self.mgf(s);
        }
        self.ln_mgf_derivative(n, s)?.to_f64()
    }

    fn check_domain(&self, s: f64) -> Result<()> {
        let s_max = self.s_max();
        if s < s_max {
            Ok(())
        } else {
            Err(Error::Domain { s, s_max })
        }
    }
}

impl MomentGenerating for FadingModel {
    fn s_max(&self) -> f64 {
        let g = self.mean_snr;
        match self.family {
            Family::Rayleigh => 1.0 / g,
            Family::NakagamiM { m } => m / g,
            Family::Rice { k } => (1.0 + k) / g,
        }
    }

    fn mgf(&self, s: f64) -> Result<f64> {
        self.check_domain(s)?;
        let g = self.mean_snr;
        Ok(match self.family {
            Family::Rayleigh => 1.0 / (1.0 - s * g),
            Family::NakagamiM { m } => libm::pow(1.0 - s * g / m, -m),
            Family::Rice { k } => {
                let d = 1.0 + k - s * g;
                (1.0 + k) / d * libm::exp(s * k * g / d)
            }
        })
    }

    fn ln_mgf_derivative(&self, n: usize, s: f64) -> Result<SignedLog> {
        check_order(n)?;
        self.check_domain(s)?;
        Ok(SignedLog::from_ln(self.ln_derivative_closed_form(n, s)))
    }
}

/// The law of `c · X` for a base law `X` and a positive scale `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledModel {
    base: FadingModel,
    scale: f64,
}

impl ScaledModel {
    pub fn new(base: FadingModel, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidParameter { name: "scale", reason: "must be positive and finite" });
        }
        Ok(ScaledModel { base, scale })
    }

    pub fn base(&self) -> &FadingModel {
        &self.base
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn sampler(&self) -> FadingSampler {
        match self.base.sampler() {
            FadingSampler::Exponential { mean } => FadingSampler::Exponential { mean: mean * self.scale },
            FadingSampler::Rice { los, sigma, mean } => FadingSampler::Rice { los, sigma, mean: mean * self.scale },
            other => FadingSampler::Scaled { inner: alloc::boxed::Box::new(other), scale: self.scale },
        }
    }
}

impl From<FadingModel> for ScaledModel {
    fn from(base: FadingModel) -> Self {
        ScaledModel { base, scale: 1.0 }
    }
}

impl MomentGenerating for ScaledModel {
    fn s_max(&self) -> f64 {
        self.base.s_max() / self.scale
    }

    fn mgf(&self, s: f64) -> Result<f64> {
        self.base.mgf(self.scale * s)
    }

    fn ln_mgf_derivative(&self, n: usize, s: f64) -> Result<SignedLog> {
        let inner = self.base.ln_mgf_derivative(n, self.scale * s)?;
        Ok(SignedLog::from_ln(n as f64 * libm::log(self.scale)) * inner)
    }

    /// `cⁿ Φ^{(n)}(cs)` in plain floats when that stays finite, so the chain
    /// rule holds exactly; otherwise through the log form.
    fn mgf_derivative(&self, n: usize, s: f64) -> Result<f64> {
        if n == 0 {
            check_order(n)?;
            return self.mgf(s);
        }
        if let Ok(inner) = self.base.mgf_derivative(n, self.scale * s) {
            let v = (0..n).fold(1.0, |acc, _| acc * self.scale) * inner;
            if v.is_finite() && v > 0.0 {
                return Ok(v);
            }
        }
        self.ln_mgf_derivative(n, s)?.to_f64()
    }
}

/// Precomputed sampler for one fading law.
#[derive(Debug, Clone)]
pub enum FadingSampler {
    Exponential { mean: f64 },
    Gamma(Gamma<f64>),
    /// `mean · |los + sigma·(N1 + j N2)|²`
    Rice { los: f64, sigma: f64, mean: f64 },
    Scaled { inner: alloc::boxed::Box<FadingSampler>, scale: f64 },
}

impl Distribution<f64> for FadingSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            FadingSampler::Exponential { mean } => {
                let e: f64 = rng.sample(Exp1);
                mean * e
            }
            FadingSampler::Gamma(g) => g.sample(rng),
            FadingSampler::Rice { los, sigma, mean } => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let re = los + sigma * re;
                let im = sigma * im;
                mean * (re * re + im * im)
            }
            FadingSampler::Scaled { inner, scale } => scale * inner.sample(rng),
        }
    }
}
