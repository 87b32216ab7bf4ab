//! Independent oracles shared by the integration tests. Nothing here calls
//! into the closed-form derivative or series code under test.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode};
use secout_core::{FadingModel, Family, ScaledModel};

/// Working precision of the high-precision oracle, in bits.
const PREC: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

pub fn big(x: f64) -> BigFloat {
    BigFloat::from_f64(x, PREC)
}

pub fn to_f64(x: &BigFloat) -> f64 {
    x.to_string().parse().expect("finite BigFloat")
}

/// MGF of a fading law at a high-precision point, written straight from the
/// textbook forms of the three families.
pub fn mgf_hp(model: &FadingModel, s: &BigFloat, cc: &mut Consts) -> BigFloat {
    let one = big(1.0);
    let g = big(model.mean_snr());
    let sg = s.mul(&g, PREC, RM);
    match model.family() {
        Family::Rayleigh => one.div(&one.sub(&sg, PREC, RM), PREC, RM),
        Family::NakagamiM { m } => {
            let m = big(m);
            let base = one.sub(&sg.div(&m, PREC, RM), PREC, RM);
            base.pow(&m.neg(), PREC, RM, cc)
        }
        Family::Rice { k } => {
            let k1 = big(1.0 + k);
            let den = k1.sub(&sg, PREC, RM);
            let arg = big(k).mul(&sg, PREC, RM).div(&den, PREC, RM);
            k1.div(&den, PREC, RM).mul(&arg.exp(PREC, RM, cc), PREC, RM)
        }
    }
}

pub fn scaled_mgf_hp(model: &ScaledModel, s: &BigFloat, cc: &mut Consts) -> BigFloat {
    mgf_hp(model.base(), &s.mul(&big(model.scale()), PREC, RM), cc)
}

/// n-th derivative of `f` at `x` by central differences with Richardson
/// extrapolation in `h²` (Ridders' scheme: the step shrinks by `ratio` each
/// row and the tableau entry with the smallest error estimate is returned).
///
/// The stencil is summed in 256-bit arithmetic so the cancellation that ruins
/// double-precision differences at order 5 or 6 never happens; only the
/// extrapolation runs in `f64`. `radius` is the distance from `x` to the
/// nearest singularity of `f`.
pub fn richardson_derivative<F>(f: F, x: f64, n: usize, radius: f64) -> f64
where
    F: Fn(&BigFloat, &mut Consts) -> BigFloat,
{
    let mut cc = Consts::new().expect("constants cache");
    let xb = big(x);
    if n == 0 {
        return to_f64(&f(&xb, &mut cc));
    }
    let binom = |n: usize, k: usize| -> u64 { (0..k as u64).fold(1, |acc, i| acc * (n as u64 - i) / (i + 1)) };
    let mut central = |h: f64| -> f64 {
        let hb = big(h);
        let mut acc = big(0.0);
        for k in 0..=n {
            let offset = BigFloat::from_i64(n as i64 - 2 * k as i64, PREC).mul(&hb, PREC, RM).div(&big(2.0), PREC, RM);
            let term = f(&xb.add(&offset, PREC, RM), &mut cc).mul(&BigFloat::from_u64(binom(n, k), PREC), PREC, RM);
            acc = if k % 2 == 0 { acc.add(&term, PREC, RM) } else { acc.sub(&term, PREC, RM) };
        }
        to_f64(&acc.div(&hb.powi(n, PREC, RM), PREC, RM))
    };
    ridders(&mut central, radius / n as f64, 1.4, 12).0
}

fn ridders(central: &mut dyn FnMut(f64) -> f64, h0: f64, ratio: f64, rows: usize) -> (f64, f64) {
    let mut table = vec![vec![0.0; rows]; rows];
    let mut best = f64::NAN;
    let mut best_err = f64::INFINITY;
    let mut h = h0;
    let r2 = ratio * ratio;
    for i in 0..rows {
        table[i][0] = central(h);
        let mut fac = r2;
        for j in 1..=i {
            table[i][j] = table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (fac - 1.0);
            fac *= r2;
            let err = (table[i][j] - table[i][j - 1]).abs().max((table[i][j] - table[i - 1][j - 1]).abs());
            if err <= best_err {
                best_err = err;
                best = table[i][j];
            }
        }
        h /= ratio;
    }
    (best, best_err)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_statistic(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
