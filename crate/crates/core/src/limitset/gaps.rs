//! Gaps of the Cantor-like limit set for irrational rotation numbers.
//!
//! The `l`-th gap is `[f^l(1-), f^l(0))`; its right end has the closed form
//!
//! ```text
//! xi_l = eta + sum_{k=0}^{l} lambda^(l-k) mu^(floor(l rho) - floor(k rho))
//!                * (c + floor((k-1) rho) - floor(k rho))
//! ```
//!
//! and its width is `lambda^(l-1) mu^floor(l rho) (delta - mu(lambda + delta - 1))`.

use serde::Serialize;

use crate::dynamics::{step, step_left};
use crate::error::{Error, Result};
use crate::heckemahler::{delta_of_rho, SeriesTolerance};
use crate::heckemahler::extended::{ext_from_f64, ExtFloat};
use crate::numeric::CompensatedSum;
use crate::params::MapParams;

/// Largest accepted `|delta - delta(lambda, mu, rho)|`.
pub const HYPOTHESIS_TOL: f64 = 1e-6;

/// Largest accepted disagreement between closed form and iteration.
pub const ITERATION_CHECK_TOL: f64 = 1e-8;

/// The half-open gap `[left, right)` of index `l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gap {
    pub index: u64,
    /// `f^l(1-)`.
    pub left: f64,
    /// `f^l(0)`.
    pub right: f64,
}

impl Gap {
    pub fn width(&self) -> f64 {
        self.right - self.left
    }

    pub fn contains(&self, x: f64) -> bool {
        self.left <= x && x < self.right
    }
}

/// Checks that `delta` matches `rho` within [`HYPOTHESIS_TOL`].
pub fn check_gap_hypothesis(params: &MapParams, rho: f64, tol: SeriesTolerance) -> Result<()> {
    let expected = delta_of_rho(params.lambda(), params.mu(), rho, tol)?.value;
    if (params.delta() - expected).abs() > HYPOTHESIS_TOL {
        return Err(Error::HypothesisViolated(format!(
            "delta = {} differs from delta(lambda, mu, {rho}) = {expected}",
            params.delta()
        )));
    }
    Ok(())
}

fn floor_mul(k: i64, rho: f64) -> i64 {
    (k as f64 * rho).floor() as i64
}

/// Working precision of the closed-form sum, rounded once at the end.
const SUM_BITS: usize = 128;

/// Closed-form gap without the hypothesis check.
///
/// Summed at [`SUM_BITS`] from `k = l` down, carrying
/// `lambda^(l-k) mu^(floor(l rho) - floor(k rho))` along; the single final
/// rounding makes `xi_1 = delta` exact.
fn gap_closed_form(params: &MapParams, rho: f64, l: u64) -> Result<Gap> {
    let ext = |x: f64| ext_from_f64(x, SUM_BITS);
    let (lambda, mu, delta) = (ext(params.lambda())?, ext(params.mu())?, ext(params.delta())?);
    let one = ExtFloat::ONE.with_precision(SUM_BITS).value();
    let coefficient = (&lambda + &delta - &one) / &lambda;
    let mut right = (&one - &delta) / &lambda;
    let l = l as i64;
    let mut power = one.clone();
    for k in (0..=l).rev() {
        let here = floor_mul(k, rho);
        let before = floor_mul(k - 1, rho);
        let jump = ExtFloat::from(before - here);
        right += &power * (&coefficient + &jump);
        power = &power * &lambda;
        for _ in before..here {
            power = &power * &mu;
        }
    }
    let mut width = &delta - &mu * (&lambda + &delta - &one);
    for _ in 0..l - 1 {
        width = &width * &lambda;
    }
    for _ in 0..floor_mul(l, rho) {
        width = &width * &mu;
    }
    let left = &right - &width;
    Ok(Gap {
        index: l as u64,
        left: left.to_f64().value(),
        right: right.to_f64().value(),
    })
}

fn iterate_gap(params: &MapParams, l: u64) -> (f64, f64) {
    let mut zero = 0.0;
    let mut one = 1.0;
    for _ in 0..l {
        zero = step(params, zero).1;
        one = step_left(params, one).1;
    }
    (one, zero)
}

fn verified_gap(params: &MapParams, rho: f64, l: u64) -> Result<Gap> {
    let gap = gap_closed_form(params, rho, l)?;
    let (left_it, right_it) = iterate_gap(params, l);
    let err = (gap.left - left_it).abs().max((gap.right - right_it).abs());
    if err > ITERATION_CHECK_TOL {
        return Err(Error::PrecisionExhausted(format!(
            "gap {l}: closed form [{}, {}) vs iteration [{left_it}, {right_it})",
            gap.left, gap.right
        )));
    }
    if !(0.0 < gap.left && gap.left < gap.right && gap.right < 1.0) {
        return Err(Error::PrecisionExhausted(format!(
            "gap {l} = [{}, {}) is not inside (0, 1)",
            gap.left, gap.right
        )));
    }
    Ok(gap)
}

/// The gap of index `l >= 1`, cross-checked against `f^l(0)` and
/// `(f-)^l(1)`.
///
/// Requires `delta = delta(lambda, mu, rho)` within [`HYPOTHESIS_TOL`];
/// `rho` is taken as irrational.
pub fn gap_endpoints(params: &MapParams, rho: f64, l: u64, tol: SeriesTolerance) -> Result<Gap> {
    if l == 0 {
        return Err(Error::OutsideDomain {
            x: 0.0,
            domain: "gap index l >= 1",
        });
    }
    check_gap_hypothesis(params, rho, tol)?;
    verified_gap(params, rho, l)
}

/// Gaps `1..=depth` sorted by left endpoint, checked pairwise disjoint.
pub fn gaps_up_to(params: &MapParams, rho: f64, depth: u64, tol: SeriesTolerance) -> Result<Vec<Gap>> {
    check_gap_hypothesis(params, rho, tol)?;
    let mut gaps = (1..=depth)
        .map(|l| verified_gap(params, rho, l))
        .collect::<Result<Vec<_>>>()?;
    gaps.sort_by(|a, b| a.left.total_cmp(&b.left));
    for pair in gaps.windows(2) {
        if pair[0].right >= pair[1].left {
            return Err(Error::PrecisionExhausted(format!(
                "gaps {} = [{}, {}) and {} = [{}, {}) overlap",
                pair[0].index, pair[0].left, pair[0].right, pair[1].index, pair[1].left, pair[1].right
            )));
        }
    }
    Ok(gaps)
}

/// Sum of the gap widths.
pub fn total_gap_length(gaps: &[Gap]) -> f64 {
    let mut acc = CompensatedSum::default();
    for g in gaps {
        acc.add(g.width());
    }
    acc.value()
}
