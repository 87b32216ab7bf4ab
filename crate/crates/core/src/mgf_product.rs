//! Derivative series of a product of MGFs.
//!
//! For `X ≥ 0` with MGF `Φ`, the j-th derivative of `p ↦ Φ(-p)` alternates in
//! sign. Working instead with the tilted moments
//!
//! ```text
//! T_j(p) = E[X^j e^{-pX}] = (-1)^j d^j/dp^j Φ(-p)
//! ```
//!
//! keeps every quantity nonnegative. For independent `X = ΣX_k` the tilted
//! moments of the sum follow from the binomial convolution
//! `T_j = Σ_{a+b=j} C(j,a) A_a B_b`, which is the Leibniz rule for
//! `∏Φ_k(-p)` with the signs cancelled term by term.

use alloc::vec::Vec;

use crate::fading::MomentGenerating;
use crate::logspace::log_sum_exp;
use crate::special::LnBinomialTable;
use crate::{Error, Result, DEFAULT_MAX_ORDER};

/// Tilted moments `T_0..=T_n` at one evaluation point, stored as natural logs.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltedMomentSeries {
    p: f64,
    ln_terms: Vec<f64>,
}

impl TiltedMomentSeries {
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Highest order held.
    pub fn order(&self) -> usize {
        self.ln_terms.len() - 1
    }

    pub fn ln_terms(&self) -> &[f64] {
        &self.ln_terms
    }

    pub fn ln_term(&self, j: usize) -> f64 {
        self.ln_terms[j]
    }

    /// `T_j` as a plain float (may be `inf` for extreme orders).
    pub fn term(&self, j: usize) -> f64 {
        libm::exp(self.ln_terms[j])
    }

    /// Keeps only `T_0..=T_n`.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n > self.order() {
            return Err(Error::SeriesTooShort { len: self.ln_terms.len(), needed: n + 1 });
        }
        Ok(TiltedMomentSeries { p: self.p, ln_terms: self.ln_terms[..=n].to_vec() })
    }
}

/// Tilted moments `T_0..=T_n` of one fading law at `p > 0`.
pub fn factor_series<M: MomentGenerating + ?Sized>(model: &M, p: f64, n: usize) -> Result<TiltedMomentSeries> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidParameter { name: "p", reason: "evaluation point must be positive and finite" });
    }
    if n > DEFAULT_MAX_ORDER {
        return Err(Error::OrderTooHigh { order: n, max: DEFAULT_MAX_ORDER });
    }
    let ln_terms = (0..=n)
        .map(|j| {
            if j == 0 {
                // keep T_0 bit-identical to the closed-form MGF
                model.mgf(-p).map(libm::log)
            } else {
                model.ln_mgf_derivative(j, -p).map(|d| d.ln_abs())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TiltedMomentSeries { p, ln_terms })
}

/// Tilted moments of the sum of independent variables, one series per term.
pub fn product_series(factors: &[TiltedMomentSeries], n: usize) -> Result<TiltedMomentSeries> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyProduct)?;
    for f in factors {
        if f.p != first.p {
            return Err(Error::EvaluationPointMismatch(first.p, f.p));
        }
        if f.ln_terms.len() < n + 1 {
            return Err(Error::SeriesTooShort { len: f.ln_terms.len(), needed: n + 1 });
        }
    }
    let binom = LnBinomialTable::new(n);
    let mut acc = first.ln_terms[..=n].to_vec();
    let mut scratch = Vec::with_capacity(n + 1);
    for f in rest {
        let next: Vec<f64> = (0..=n)
            .map(|j| {
                scratch.clear();
                scratch.extend((0..=j).map(|a| binom.get(j, a) + acc[a] + f.ln_terms[j - a]));
                log_sum_exp(&scratch)
            })
            .collect();
        acc = next;
    }
    Ok(TiltedMomentSeries { p: first.p, ln_terms: acc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::{FadingModel, ScaledModel};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn zeroth_term_is_mgf() {
        let m = FadingModel::rice(1.5, 3.0).unwrap();
        let s = factor_series(&m, 0.7, 4).unwrap();
        assert_eq!(s.term(0), m.mgf(-0.7).unwrap());
        assert_eq!(s.order(), 4);
    }

    #[test]
    fn rayleigh_first_tilted_moment() {
        let m = FadingModel::rayleigh(1.0).unwrap();
        let s = factor_series(&m, 1.0, 3).unwrap();
        assert!(rel(s.term(1), 0.25) < 1e-15);
    }

    #[test]
    fn single_factor_unchanged() {
        let m = FadingModel::nakagami(2.5, 4.0).unwrap();
        let s = factor_series(&m, 0.3, 6).unwrap();
        assert_eq!(product_series(core::slice::from_ref(&s), 6).unwrap(), s);
    }

    #[test]
    fn two_exponentials_make_an_erlang() {
        for &g in &[0.5, 2.0, 30.0] {
            for &p in &[0.01, 0.8, 5.0] {
                let r = factor_series(&FadingModel::rayleigh(g).unwrap(), p, 10).unwrap();
                let prod = product_series(&[r.clone(), r], 10).unwrap();
                let erlang = factor_series(&FadingModel::nakagami(2.0, 2.0 * g).unwrap(), p, 10).unwrap();
                for j in 0..=10 {
                    assert!(rel(prod.term(j), erlang.term(j)) < 1e-12, "g={g} p={p} j={j}");
                }
            }
        }
    }

    #[test]
    fn errors() {
        let m = FadingModel::rayleigh(1.0).unwrap();
        let a = factor_series(&m, 1.0, 3).unwrap();
        let b = factor_series(&m, 2.0, 3).unwrap();
        assert!(matches!(product_series(&[a.clone(), b], 3), Err(Error::EvaluationPointMismatch(..))));
        assert!(matches!(product_series(core::slice::from_ref(&a), 4), Err(Error::SeriesTooShort { .. })));
        assert!(matches!(product_series(&[], 1), Err(Error::EmptyProduct)));
        assert!(factor_series(&m, 0.0, 2).is_err());
        assert!(factor_series(&m, 1.0, 129).is_err());
        assert!(a.truncated(5).is_err());
        assert_eq!(a.truncated(1).unwrap().order(), 1);
    }

    #[test]
    fn permutation_invariance() {
        let p = 0.6;
        let ms: [ScaledModel; 3] = [
            FadingModel::rayleigh(2.0).unwrap().into(),
            ScaledModel::new(FadingModel::nakagami(3.0, 1.0).unwrap(), 2.0).unwrap(),
            FadingModel::rice(4.0, 0.5).unwrap().into(),
        ];
        let s: Vec<_> = ms.iter().map(|m| factor_series(m, p, 12).unwrap()).collect();
        let fwd = product_series(&s, 12).unwrap();
        let rev: Vec<_> = s.iter().rev().cloned().collect();
        let rev = product_series(&rev, 12).unwrap();
        let mid = product_series(&[s[1].clone(), s[0].clone(), s[2].clone()], 12).unwrap();
        for j in 0..=12 {
            assert!(rel(fwd.term(j), rev.term(j)) < 1e-12);
            assert!(rel(fwd.term(j), mid.term(j)) < 1e-12);
        }
    }
}
