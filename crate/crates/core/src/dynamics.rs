//! The map `f`, its left-limit variant `f-`, the lift `F`, orbits and the
//! closed-form orbit reconstruction from an itinerary.

use bitvec::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::MapParams;
use crate::side::Side;

/// Largest double below 1.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// One step of `f` on a fractional part in `[0, 1)`: returns the winding
/// increment (the itinerary bit) and the new fractional part.
///
/// The branch test `x < eta` is a raw comparison; outputs are clamped to
/// `[0, 1)` against rounding.
#[inline]
pub(crate) fn step(params: &MapParams, x: f64) -> (bool, f64) {
    let (lambda, mu, delta) = (params.lambda(), params.mu(), params.delta());
    if x < params.eta() {
        (false, (lambda * x + delta).min(BELOW_ONE))
    } else {
        (true, (mu * (lambda * x + delta - 1.0)).max(0.0))
    }
}

/// One step of `f-` on `(0, 1]`: the winding increment and the new point.
#[inline]
pub(crate) fn step_left(params: &MapParams, x: f64) -> (bool, f64) {
    let (lambda, mu, delta) = (params.lambda(), params.mu(), params.delta());
    if x <= params.eta() {
        (false, (lambda * x + delta).min(1.0))
    } else {
        (true, (mu * (lambda * x + delta - 1.0)).max(f64::MIN_POSITIVE))
    }
}

/// `f(x)` for `x` in `[0, 1)`.
pub fn f_apply(params: &MapParams, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::OutsideDomain { x, domain: "[0, 1)" });
    }
    Ok(step(params, x).1)
}

/// `f-(x) = f(x-)` for `x` in `(0, 1]`. Differs from `f` only at `eta`,
/// where `f-(eta) = 1`, and extends to `f-(1) = mu*(lambda + delta - 1)`.
pub fn f_left(params: &MapParams, x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::OutsideDomain { x, domain: "(0, 1]" });
    }
    Ok(step_left(params, x).1)
}

/// The lift `F` (at-point) or `F-` (left limit) at any real `x`.
///
/// `F(x) = floor(x) + [frac(x) >= eta] + f(frac(x))`. `F` is continuous
/// except at integers, where `F-(n) = n + mu*(lambda + delta - 1)`. `F` is
/// right-continuous, so `RightLimit` is the same as `AtPoint`.
pub fn lift_f(params: &MapParams, x: f64, side: Side) -> f64 {
    let fl = x.floor();
    let frac = x - fl;
    if side == Side::LeftLimit && frac == 0.0 {
        return fl + params.f_one_minus();
    }
    let (bit, y) = step(params, frac);
    fl + bit as u8 as f64 + y
}

/// The unique preimage of `x` under `f`.
///
/// Fails with [`Error::OutsideImage`] when `x` lies in the hole
/// `[mu*(lambda + delta - 1), delta)`.
pub fn f_inverse(params: &MapParams, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::OutsideDomain { x, domain: "[0, 1)" });
    }
    let (lambda, mu, delta) = (params.lambda(), params.mu(), params.delta());
    if x >= delta {
        Ok((x - delta) / lambda)
    } else if x < params.f_one_minus() {
        Ok(((x / mu + 1.0 - delta) / lambda).max(params.eta()))
    } else {
        Err(Error::OutsideImage {
            x,
            gap_left: params.f_one_minus(),
            gap_right: delta,
        })
    }
}

/// A point of the lifted orbit, kept as integer winding plus fractional
/// part so long orbits do not lose precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiftPoint {
    pub winding: i64,
    pub frac: f64,
}

impl LiftPoint {
    pub fn from_real(x: f64) -> Self {
        let fl = x.floor();
        Self {
            winding: fl as i64,
            frac: x - fl,
        }
    }

    pub fn value(&self) -> f64 {
        self.winding as f64 + self.frac
    }
}

/// Streaming lifted orbit `x, F(x), F^2(x), ...`.
#[derive(Debug, Clone)]
pub struct OrbitIter<'a> {
    params: &'a MapParams,
    current: LiftPoint,
}

impl<'a> OrbitIter<'a> {
    pub fn new(params: &'a MapParams, x0: f64) -> Self {
        Self {
            params,
            current: LiftPoint::from_real(x0),
        }
    }

    /// Advances one step and returns the itinerary bit.
    pub fn advance(&mut self) -> bool {
        let (bit, frac) = step(self.params, self.current.frac);
        self.current = LiftPoint {
            winding: self.current.winding + bit as i64,
            frac,
        };
        bit
    }

    pub fn current(&self) -> LiftPoint {
        self.current
    }
}

impl Iterator for OrbitIter<'_> {
    type Item = LiftPoint;

    /// Yields the current point, then advances.
    fn next(&mut self) -> Option<LiftPoint> {
        let here = self.current;
        self.advance();
        Some(here)
    }
}

/// The lifted orbit `x_0, ..., x_n` of `F` and its itinerary
/// `b_k = floor(x_{k+1}) - floor(x_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitTrace {
    pub start: f64,
    windings: Vec<i64>,
    fracs: Vec<f64>,
    itinerary: BitVec,
}

impl OrbitTrace {
    /// Number of steps `n`; there are `n + 1` points.
    pub fn len(&self) -> usize {
        self.itinerary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.itinerary.is_empty()
    }

    pub fn point(&self, k: usize) -> f64 {
        self.windings[k] as f64 + self.fracs[k]
    }

    pub fn lift_point(&self, k: usize) -> LiftPoint {
        LiftPoint {
            winding: self.windings[k],
            frac: self.fracs[k],
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.fracs.len()).map(|k| self.point(k))
    }

    pub fn fracs(&self) -> &[f64] {
        &self.fracs
    }

    pub fn floor_at(&self, k: usize) -> i64 {
        self.windings[k]
    }

    pub fn itinerary(&self) -> &BitSlice {
        &self.itinerary
    }
}

/// Iterates the lift `n` times from `x0`.
pub fn forward_orbit(params: &MapParams, x0: f64, n: usize) -> OrbitTrace {
    let mut iter = OrbitIter::new(params, x0);
    let mut windings = Vec::with_capacity(n + 1);
    let mut fracs = Vec::with_capacity(n + 1);
    let mut itinerary = BitVec::with_capacity(n);
    windings.push(iter.current().winding);
    fracs.push(iter.current().frac);
    for _ in 0..n {
        itinerary.push(iter.advance());
        windings.push(iter.current().winding);
        fracs.push(iter.current().frac);
    }
    OrbitTrace {
        start: x0,
        windings,
        fracs,
        itinerary,
    }
}

/// Slack allowed when checking that a reconstructed fractional part lies in
/// `[0, 1)`.
const ITINERARY_SLACK: f64 = 1e-9;

/// Closed-form `x_{start+n}` from `x_start` and the floors along the way.
fn closed_form_step(params: &MapParams, x_start: f64, floors: &[i64]) -> f64 {
    let (lambda, mu) = (params.lambda(), params.mu());
    let c1 = params.orbit_coefficient();
    let eta = params.eta();
    let n = floors.len() - 1;
    let top = floors[n];
    let frac_start = x_start - floors[0] as f64;
    let mut acc = crate::numeric::CompensatedSum::default();
    acc.add(top as f64);
    acc.add(eta);
    let lead = lambda.powi(n as i32) * mu.powi((top - floors[0]) as i32);
    acc.add(lead * (frac_start - eta));
    let mut lambda_pow = 1.0;
    for k in 0..n {
        let here = floors[n - k];
        let before = floors[n - k - 1];
        let weight = lambda_pow * mu.powi((top - here) as i32);
        acc.add(weight * (c1 + (before - here) as f64));
        lambda_pow *= lambda;
    }
    acc.value()
}

/// Reconstructs `x_{l+n}` for the lifted orbit of `x` from its itinerary
/// (bits `b_0, b_1, ...` starting at `x`), without iterating `F`.
///
/// `x_l` is itself obtained from `x` by the closed form. The itinerary must
/// cover indices `0..l+n`. Every point `x_{l+1}, ..., x_{l+n}` is
/// reconstructed, and a fractional part outside `[0, 1)` (beyond a `1e-9`
/// rounding slack) reports an inconsistent itinerary.
pub fn orbit_closed_form(params: &MapParams, x: f64, itinerary: &BitSlice, l: usize, n: usize) -> Result<f64> {
    let needed = l + n;
    if itinerary.len() < needed {
        return Err(Error::InconsistentItinerary(format!(
            "itinerary has {} bits, {needed} needed",
            itinerary.len()
        )));
    }
    let mut floors = Vec::with_capacity(needed + 1);
    let mut fl = x.floor() as i64;
    floors.push(fl);
    for bit in itinerary[..needed].iter().by_vals() {
        fl += bit as i64;
        floors.push(fl);
    }
    let check = |value: f64, index: usize| -> Result<f64> {
        let frac = value - floors[index] as f64;
        if !(-ITINERARY_SLACK..1.0 + ITINERARY_SLACK).contains(&frac) {
            return Err(Error::InconsistentItinerary(format!(
                "fractional part {frac} at index {index}"
            )));
        }
        Ok(value)
    };
    let x_l = if l == 0 {
        x
    } else {
        check(closed_form_step(params, x, &floors[..=l]), l)?
    };
    if n == 0 {
        return Ok(x_l);
    }
    // every intermediate point is reconstructed too, so a wrong bit anywhere
    // shows up as a fractional part out of range (quadratic in n)
    for m in 1..n {
        check(closed_form_step(params, x_l, &floors[l..=l + m]), l + m)?;
    }
    check(closed_form_step(params, x_l, &floors[l..=needed]), needed)
}
