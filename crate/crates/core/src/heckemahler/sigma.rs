//! The series `sigma`, its finite part `S` and the single-variable
//! Hecke-Mahler series `Psi`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::numeric::{pow2, CompensatedSum};
use crate::params::{check_lambda_mu, decay_rate, r_bound};
use crate::rational::RationalRot;
use crate::side::Side;

use super::tolerance::{SeriesEval, SeriesTolerance};

/// Validates `(lambda, mu, rho)` for series that need `0 < rho < r_bound`.
/// Returns the decay rate `lambda * mu^rho`.
pub(crate) fn check_rho(lambda: f64, mu: f64, rho: f64) -> Result<f64> {
    check_lambda_mu(lambda, mu)?;
    let bound = r_bound(lambda, mu);
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::RhoOutOfRange { rho, r_bound: bound });
    }
    let decay = decay_rate(lambda, mu, rho);
    if decay >= 1.0 {
        return Err(Error::ConvergenceViolated(decay));
    }
    if rho >= bound {
        return Err(Error::RhoOutOfRange { rho, r_bound: bound });
    }
    Ok(decay)
}

/// Validates `p/q < r_bound`, i.e. `lambda^q * mu^p < 1`.
pub(crate) fn check_rational(lambda: f64, mu: f64, rot: RationalRot) -> Result<()> {
    check_lambda_mu(lambda, mu)?;
    let log_period = rot.q() as f64 * lambda.ln() + rot.p() as f64 * mu.ln();
    if log_period >= 0.0 {
        return Err(Error::RhoOutOfRange {
            rho: rot.to_f64(),
            r_bound: r_bound(lambda, mu),
        });
    }
    Ok(())
}

/// `lambda^q * mu^p`, the contraction over one period of a `p/q` orbit.
pub fn period_factor(lambda: f64, mu: f64, rot: RationalRot) -> f64 {
    pow2(lambda, rot.q() as i64, mu, rot.p() as i64)
}

fn floor_mul(k: u64, rho: f64) -> i64 {
    (k as f64 * rho).floor() as i64
}

/// `sum_{k>=1} (floor((k+1)rho) - floor(k rho)) lambda^k mu^floor(k rho)`.
///
/// Floors are taken in double precision, so `rho` within a few ulps of a
/// rational with small denominator may misplace a jump; use
/// [`sigma_rational`] for rational input.
pub fn sigma(lambda: f64, mu: f64, rho: f64, tol: SeriesTolerance) -> Result<SeriesEval> {
    let decay = check_rho(lambda, mu, rho)?;
    let scale = 1.0_f64.max(1.0 / mu);
    let mut acc = CompensatedSum::default();
    let mut power = 1.0;
    let mut floor_k = 0_i64;
    let mut decay_pow = decay;
    for k in 1..=tol.max_terms() as u64 {
        power *= lambda;
        let next = floor_mul(k, rho);
        if next > floor_k {
            power *= mu.powi((next - floor_k) as i32);
            floor_k = next;
        }
        if floor_mul(k + 1, rho) > floor_k {
            acc.add(power);
        }
        decay_pow *= decay;
        let tail = scale * decay_pow / (1.0 - decay);
        if tail < tol.abs_tol() {
            return Ok(SeriesEval {
                value: acc.value(),
                terms: k as usize,
                tail_bound: tail,
            });
        }
    }
    Err(Error::MaxTermsExhausted {
        max_terms: tol.max_terms(),
        tail: scale * decay_pow / (1.0 - decay),
        abs_tol: tol.abs_tol(),
    })
}

/// `S = sum_{k=1}^{q-2} (floor((k+1)p/q) - floor(kp/q)) lambda^k mu^floor(kp/q)`
/// with exact integer floors. Zero for `q = 2`.
pub fn s_sum(lambda: f64, mu: f64, rot: RationalRot) -> f64 {
    let mut acc = CompensatedSum::default();
    let mut power = 1.0;
    let mut floor_k = 0_i64;
    for k in 1..rot.q().saturating_sub(1) as i64 {
        power *= lambda;
        let next = rot.floor_mul(k);
        if next > floor_k {
            power *= mu;
            floor_k = next;
        }
        if rot.floor_mul(k + 1) > floor_k {
            acc.add(power);
        }
    }
    acc.value()
}

/// Order of `sigma(rho_a)` against `sigma(rho_b)`, even when the difference
/// is far below double resolution.
///
/// With `lo < hi` the two rotation numbers, both series agree up to the
/// first `j` with `floor(j lo) != floor(j hi)`. From `j - 1` on, the terms of each series are divided
/// by their common value `lambda^(j-1) mu^floor((j-1) rho)` and the two
/// rescaled sums are compared, together with a bound on both tails.
/// Returns `None` when the rescaled difference is within the tail and
/// rounding bounds, or when no floor differs within `max_terms`.
pub(crate) fn sigma_order(lambda: f64, mu: f64, rho_a: f64, rho_b: f64, max_terms: usize) -> Result<Option<Ordering>> {
    let decay = check_rho(lambda, mu, rho_a)?.max(check_rho(lambda, mu, rho_b)?);
    if rho_a == rho_b {
        return Ok(Some(Ordering::Equal));
    }
    let (lo, hi, a_is_hi) = if rho_a < rho_b { (rho_a, rho_b, false) } else { (rho_b, rho_a, true) };
    let Some(first) = (1..=max_terms as u64).find(|&k| floor_mul(k, lo) != floor_mul(k, hi)) else {
        return Ok(None);
    };
    let start = first - 1;
    let base = floor_mul(start, lo);
    let scale = mu.max(1.0 / mu);
    let mut diff = CompensatedSum::default();
    let mut decay_pow = 1.0;
    for k in start..start + max_terms as u64 {
        let n = (k - start) as i64;
        for (rho, sign) in [(hi, 1.0), (lo, -1.0)] {
            if floor_mul(k + 1, rho) > floor_mul(k, rho) {
                diff.add(sign * pow2(lambda, n, mu, floor_mul(k, rho) - base));
            }
        }
        decay_pow *= decay;
        let tail = 2.0 * scale * decay_pow / (1.0 - decay);
        let d = diff.value();
        if tail < 0.25 * d.abs() {
            // sign of sigma(hi) - sigma(lo)
            let hi_vs_lo = if d > 0.0 { Ordering::Greater } else { Ordering::Less };
            return Ok(Some(if a_is_hi { hi_vs_lo } else { hi_vs_lo.reverse() }));
        }
    }
    Ok(None)
}

/// Closed forms of `sigma` at `p/q` (`AtPoint`, equal to the right limit)
/// and of its left limit (`LeftLimit`).
pub fn sigma_rational(lambda: f64, mu: f64, rot: RationalRot, side: Side) -> Result<f64> {
    check_rational(lambda, mu, rot)?;
    let (p, q) = (rot.p() as i64, rot.q() as i64);
    let s = s_sum(lambda, mu, rot);
    let extra = match side {
        Side::AtPoint | Side::RightLimit => pow2(lambda, q - 1, mu, p - 1),
        Side::LeftLimit => pow2(lambda, q, mu, p - 1),
    };
    Ok((s + extra) / (1.0 - period_factor(lambda, mu, rot)))
}

/// `Psi_rho(lambda, mu) = sum_{k>=1} sum_{1<=h<=k rho} lambda^k mu^h`, summed
/// in the single-index form `(1/(1-lambda)) sum_{h>=1} lambda^ceil(h/rho) mu^h`.
///
/// Needs only `rho > 0` and `lambda * mu^rho < 1`.
pub fn psi(lambda: f64, mu: f64, rho: f64, tol: SeriesTolerance) -> Result<SeriesEval> {
    check_lambda_mu(lambda, mu)?;
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::RhoOutOfRange {
            rho,
            r_bound: r_bound(lambda, mu),
        });
    }
    let decay = decay_rate(lambda, mu, rho);
    if decay >= 1.0 {
        return Err(Error::ConvergenceViolated(decay));
    }
    let ratio = lambda.powf(1.0 / rho) * mu;
    let scale = 1.0 / ((1.0 - ratio) * (1.0 - lambda));
    let mut acc = CompensatedSum::default();
    let mut ratio_pow = 1.0;
    for h in 1..=tol.max_terms() as i64 {
        let k = (h as f64 / rho).ceil() as i64;
        acc.add(pow2(lambda, k, mu, h));
        ratio_pow *= ratio;
        let tail = ratio_pow * ratio * scale;
        if tail < tol.abs_tol() {
            return Ok(SeriesEval {
                value: acc.value() / (1.0 - lambda),
                terms: h as usize,
                tail_bound: tail,
            });
        }
    }
    Err(Error::MaxTermsExhausted {
        max_terms: tol.max_terms(),
        tail: ratio_pow * ratio * scale,
        abs_tol: tol.abs_tol(),
    })
}
