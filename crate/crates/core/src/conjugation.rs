//! The conjugation `phi` with `F(phi(y)) = phi(y + rho)` and its left limit.
//!
//! ```text
//! phi(y) = floor(y) + eta
//!        + sum_{k>=0} lambda^k mu^(floor(y) - floor(y - k rho))
//!                     * (c + floor(y - (k+1) rho) - floor(y - k rho))
//! ```
//!
//! with `c = (lambda + delta - 1)/lambda`. The left limit replaces every
//! `floor(t)` by `ceil(t) - 1`. `phi` is non-decreasing with
//! `phi(y + 1) = phi(y) + 1`; for rational `rho = p/q` it is constant on each
//! cell `[n/q, (n+1)/q)`.

use serde::Serialize;

use crate::dynamics::lift_f;
use crate::error::{Error, Result};
use crate::heckemahler::{check_rational, check_rho, phi_series, phi_series_rational, SeriesEval, SeriesTolerance};
use crate::numeric::{pow2, CompensatedSum};
use crate::params::MapParams;
use crate::rational::{floor_div, RationalRot};
use crate::rotation::RotationValue;
use crate::side::{Side, SideReal};

/// Everything `phi` depends on: map parameters, rotation number and the
/// truncation policy for irrational `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjugationSpec {
    params: MapParams,
    rho: RotationValue,
    tol: SeriesTolerance,
}

impl ConjugationSpec {
    /// Checks `0 < rho < r_bound`. Whether `delta` matches `rho` is not
    /// checked here.
    pub fn new(params: MapParams, rho: RotationValue, tol: SeriesTolerance) -> Result<Self> {
        match rho {
            RotationValue::Exact { rot } => check_rational(params.lambda(), params.mu(), rot)?,
            RotationValue::Approx { value, .. } => {
                check_rho(params.lambda(), params.mu(), value)?;
            }
        }
        Ok(Self { params, rho, tol })
    }

    pub fn params(&self) -> &MapParams {
        &self.params
    }

    pub fn rho(&self) -> RotationValue {
        self.rho
    }

    pub fn tol(&self) -> SeriesTolerance {
        self.tol
    }
}

/// Snaps `q*y` to an integer when it is within rounding of one, so that
/// decimal inputs such as `1 - p/q` land on cell boundaries.
fn scaled_cell_coordinate(y: f64, q: u64) -> (f64, bool) {
    let t = y * q as f64;
    let r = t.round();
    let on_boundary = (t - r).abs() <= 4.0 * f64::EPSILON * t.abs().max(1.0);
    (if on_boundary { r } else { t }, on_boundary)
}

/// Index `N` of the cell `[N/q, (N+1)/q)` whose value `phi(y)` (or `phi(y-)`)
/// takes.
pub fn cell_index(y: f64, rot: RationalRot, side: Side) -> i64 {
    let (t, on_boundary) = scaled_cell_coordinate(y, rot.q());
    match side {
        Side::LeftLimit if on_boundary => t as i64 - 1,
        _ => t.floor() as i64,
    }
}

/// Exact `phi` on the cell `[cell/q, (cell+1)/q)` for rational `rho = p/q`.
///
/// The series is grouped by `k mod q`: the exponent grows by `p` and the
/// bracket repeats, giving a factor `1/(1 - lambda^q mu^p)`.
pub fn phi_on_cell(params: &MapParams, rot: RationalRot, cell: i64) -> Result<f64> {
    check_rational(params.lambda(), params.mu(), rot)?;
    let (lambda, mu) = (params.lambda(), params.mu());
    let (p, q) = (rot.p() as i128, rot.q() as i128);
    let whole = floor_div(cell as i128, q);
    let n = cell as i128 - whole * q;
    let c1 = params.orbit_coefficient();
    let floor_shift = |k: i128| floor_div(n - k * p, q);
    let mut acc = CompensatedSum::default();
    let mut lambda_pow = 1.0;
    let mut exponent = 0_i64;
    let mut mu_pow = 1.0;
    for k in 0..q {
        let here = floor_shift(k);
        let next = floor_shift(k + 1);
        let e = -here as i64;
        while exponent < e {
            mu_pow *= mu;
            exponent += 1;
        }
        acc.add(lambda_pow * mu_pow * (c1 + (next - here) as f64));
        lambda_pow *= lambda;
    }
    let period = pow2(lambda, q as i64, mu, p as i64);
    Ok(whole as f64 + params.eta() + acc.value() / (1.0 - period))
}

/// Truncated series for real (irrational) `rho`.
fn phi_real(params: &MapParams, rho: f64, y: SideReal, tol: SeriesTolerance) -> Result<SeriesEval> {
    let decay = check_rho(params.lambda(), params.mu(), rho)?;
    let (lambda, mu) = (params.lambda(), params.mu());
    let c1 = params.orbit_coefficient();
    // floor for the point itself, ceil - 1 for the left limit
    let lower: fn(f64) -> f64 = match y.side {
        Side::LeftLimit => |t: f64| t.ceil() - 1.0,
        _ => f64::floor,
    };
    let base = lower(y.value);
    let scale = mu.max(1.0 / mu);
    let mut acc = CompensatedSum::default();
    acc.add(base);
    acc.add(params.eta());
    let mut lambda_pow = 1.0;
    let mut decay_pow = 1.0;
    let mut here = base;
    for k in 0..tol.max_terms() {
        let next = lower(y.value - (k as f64 + 1.0) * rho);
        let weight = lambda_pow * mu.powf(base - here);
        acc.add(weight * (c1 + next - here));
        here = next;
        lambda_pow *= lambda;
        decay_pow *= decay;
        let tail = scale * decay_pow * decay / (1.0 - decay);
        if tail < tol.abs_tol() {
            return Ok(SeriesEval {
                value: acc.value(),
                terms: k + 1,
                tail_bound: tail,
            });
        }
    }
    Err(Error::MaxTermsExhausted {
        max_terms: tol.max_terms(),
        tail: scale * decay_pow * decay / (1.0 - decay),
        abs_tol: tol.abs_tol(),
    })
}

/// `phi(y)` or `phi(y-)`, with diagnostics.
///
/// For rational `rho` the value is the exact cell value; a `y` within
/// rounding of a cell boundary `n/q` is treated as lying on it.
pub fn phi_eval_detailed(spec: &ConjugationSpec, y: SideReal) -> Result<SeriesEval> {
    if !y.value.is_finite() {
        return Err(Error::NotFinite { name: "y" });
    }
    match spec.rho {
        RotationValue::Exact { rot } => {
            let cell = cell_index(y.value, rot, y.side);
            phi_on_cell(&spec.params, rot, cell).map(|v| SeriesEval {
                value: v,
                terms: rot.q() as usize,
                tail_bound: 0.0,
            })
        }
        RotationValue::Approx { value, .. } => phi_real(&spec.params, value, y, spec.tol),
    }
}

/// `phi(y)` or `phi(y-)`.
pub fn phi_eval(spec: &ConjugationSpec, y: SideReal) -> Result<f64> {
    phi_eval_detailed(spec, y).map(|e| e.value)
}

/// `phi(y)` through the two-variable Hecke-Mahler series:
/// `floor(y) + delta/(1-lambda) - ((delta - mu(lambda+delta-1))/lambda) * Phi(-frac(y))`.
pub fn phi_eval_via_hm(spec: &ConjugationSpec, y: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::NotFinite { name: "y" });
    }
    let p = &spec.params;
    let (lambda, mu) = (p.lambda(), p.mu());
    let coeff = p.hole_width() / lambda;
    let phi = match spec.rho {
        RotationValue::Exact { rot } => {
            let cell = cell_index(y, rot, Side::AtPoint);
            let n = cell.rem_euclid(rot.q() as i64);
            let whole = cell.div_euclid(rot.q() as i64) as f64;
            let v = phi_series_rational(lambda, mu, rot, -n, Side::AtPoint)?;
            return Ok(whole + p.delta() / (1.0 - lambda) - coeff * v);
        }
        RotationValue::Approx { value, .. } => {
            let frac = y - y.floor();
            phi_series(lambda, mu, value, SideReal::at(-frac), spec.tol)?.value
        }
    };
    Ok(y.floor() + p.delta() / (1.0 - lambda) - coeff * phi)
}

/// `|F(phi(y)) - phi(y + rho)|`.
///
/// Only meaningful when `delta` matches `rho` (equal to `delta(rho)` for
/// irrational `rho`, in the plateau otherwise); this is not checked. With a
/// matching `delta` the residual stays within `10 * abs_tol` for irrational
/// `rho` and at rounding level for rational `rho`.
pub fn conjugacy_residual(spec: &ConjugationSpec, y: f64) -> Result<f64> {
    let here = phi_eval(spec, SideReal::at(y))?;
    let shifted = match spec.rho {
        RotationValue::Exact { rot } => {
            let cell = cell_index(y, rot, Side::AtPoint) + rot.p() as i64;
            phi_on_cell(&spec.params, rot, cell)?
        }
        RotationValue::Approx { value, .. } => phi_eval(spec, SideReal::at(y + value))?,
    };
    Ok((lift_f(&spec.params, here, Side::AtPoint) - shifted).abs())
}
