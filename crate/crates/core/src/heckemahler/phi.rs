//! The two-variable Hecke-Mahler series
//! `Phi_rho(lambda, mu, x) = sum_{k>=0} sum_{0<=l<k rho + x} lambda^k mu^l`.
//!
//! The inner sum is the geometric sum `G(n) = 1 + mu + ... + mu^(n-1)` with
//! `n` the number of integers `l >= 0` below `k rho + x`. `Phi` is
//! left-continuous in `x`; the right limit counts `floor(t) + 1` integers.

use crate::error::{Error, Result};
use crate::numeric::{pow2, CompensatedSum};
use crate::params::{check_lambda_mu, decay_rate, r_bound};
use crate::rational::{ceil_div, floor_div, RationalRot};
use crate::side::{Side, SideReal};

use super::sigma::check_rational;
use super::tolerance::{SeriesEval, SeriesTolerance};

/// `G(n) = (1 - mu^n)/(1 - mu)`, or `n` when `mu = 1`.
pub(crate) fn geometric_count(mu: f64, n: i64) -> f64 {
    if n <= 0 {
        return 0.0;
    }
    if mu == 1.0 {
        return n as f64;
    }
    let log_mu = mu.ln();
    (n as f64 * log_mu).exp_m1() / log_mu.exp_m1()
}

/// Number of integers `l >= 0` with `l < t` (or `l < t+` on the right side).
fn count_below(t: f64, side: Side) -> i64 {
    let n = match side {
        Side::AtPoint | Side::LeftLimit => t.ceil(),
        Side::RightLimit => t.floor() + 1.0,
    };
    n.max(0.0) as i64
}

/// Truncated evaluation of `Phi_rho(lambda, mu, x)` for real `rho > 0`.
pub fn phi_series(lambda: f64, mu: f64, rho: f64, x: SideReal, tol: SeriesTolerance) -> Result<SeriesEval> {
    check_lambda_mu(lambda, mu)?;
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::RhoOutOfRange {
            rho,
            r_bound: r_bound(lambda, mu),
        });
    }
    if !x.value.is_finite() {
        return Err(Error::NotFinite { name: "x" });
    }
    let decay = decay_rate(lambda, mu, rho);
    if decay >= 1.0 {
        return Err(Error::ConvergenceViolated(decay));
    }
    let tail_after = |k: u64| -> f64 {
        // bound on sum_{j>k} lambda^j G(n_j) with n_j <= j rho + x + 1
        let next = k + 1;
        if mu < 1.0 {
            lambda.powf(next as f64) / ((1.0 - lambda) * (1.0 - mu))
        } else if mu == 1.0 {
            let base = (x.value + 1.0).max(0.0);
            let l = lambda.powf(next as f64);
            l * base / (1.0 - lambda)
                + rho * l * (next as f64 * (1.0 - lambda) + lambda) / (1.0 - lambda).powi(2)
        } else {
            mu.powf(x.value + 1.0) / (mu - 1.0) * decay.powf(next as f64) / (1.0 - decay)
        }
    };
    let mut acc = CompensatedSum::default();
    let mut lambda_pow = 1.0;
    for k in 0..=tol.max_terms() as u64 {
        let n = count_below(k as f64 * rho + x.value, x.side);
        if n > 0 {
            acc.add(lambda_pow * geometric_count(mu, n));
        }
        lambda_pow *= lambda;
        let tail = tail_after(k);
        if tail < tol.abs_tol() {
            return Ok(SeriesEval {
                value: acc.value(),
                terms: k as usize + 1,
                tail_bound: tail,
            });
        }
    }
    Err(Error::MaxTermsExhausted {
        max_terms: tol.max_terms(),
        tail: tail_after(tol.max_terms() as u64),
        abs_tol: tol.abs_tol(),
    })
}

/// Exact evaluation of `Phi_{p/q}(lambda, mu, x)` at `x = x_num/q`.
///
/// Terms are grouped by `k mod q`: shifting `k` by `q` multiplies the outer
/// weight by `lambda^q` and adds `p` to the count, so each residue class sums
/// in closed form and no truncation is needed.
pub fn phi_series_rational(lambda: f64, mu: f64, rot: RationalRot, x_num: i64, side: Side) -> Result<f64> {
    check_rational(lambda, mu, rot)?;
    let (p, q) = (rot.p() as i128, rot.q() as i128);
    let x = x_num as i128;
    let raw_count = |k: i128| -> i128 {
        match side {
            Side::AtPoint | Side::LeftLimit => ceil_div(k * p + x, q),
            Side::RightLimit => floor_div(k * p + x, q) + 1,
        }
    };
    // first k whose count is non-negative; counts only grow afterwards
    let k0 = match side {
        Side::AtPoint | Side::LeftLimit => ceil_div(1 - q - x, p),
        Side::RightLimit => ceil_div(-q - x, p),
    }
    .max(0);
    let lambda_q = pow2(lambda, q as i64, 1.0, 0);
    let period = pow2(lambda, q as i64, mu, p as i64);
    let cross = geometric_count(mu, p as i64) * lambda_q / ((1.0 - lambda_q) * (1.0 - period));

    let n0 = raw_count(k0) as i64;
    let mut lambda_pow = pow2(lambda, k0 as i64, 1.0, 0);
    let mut mu_pow = pow2(mu, n0, 1.0, 0);
    let mut g = geometric_count(mu, n0);
    let mut n = n0;
    let mut acc = CompensatedSum::default();
    for j in 0..q {
        let next = raw_count(k0 + j) as i64;
        while n < next {
            g += mu_pow;
            mu_pow *= mu;
            n += 1;
        }
        acc.add(lambda_pow * (g / (1.0 - lambda_q) + mu_pow * cross));
        lambda_pow *= lambda;
    }
    Ok(acc.value())
}
