//! Periodic cycles in the rational regime.
//!
//! For `delta` in the plateau of `p/q` the points `zeta_m = phi(m/q)` form an
//! `f`-cycle with `f(zeta_m) = zeta_{m+p mod q}`. At the right end of the
//! plateau `f` has no cycle; the same construction gives a cycle of the
//! left-limit map `f-` that contains `1`.

use std::cmp::Ordering;

use serde::Serialize;

use crate::conjugation::phi_on_cell;
use crate::dynamics::{step, step_left};
use crate::error::{Error, Result};
use crate::numeric::circle_distance;
use crate::params::MapParams;
use crate::rational::RationalRot;
use crate::rotation::{classify_boundary, PlateauPosition};

/// Which map a cycle belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleMap {
    /// `f` on `[0, 1)`.
    F,
    /// `f-` on `(0, 1]`.
    FLeft,
}

/// A cycle `zeta_0 < ... < zeta_{q-1}` with `map(zeta_m) = zeta_{m+p mod q}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cycle {
    pub rot: RationalRot,
    pub map: CycleMap,
    pub points: Vec<f64>,
}

impl Cycle {
    pub fn order(&self) -> usize {
        self.points.len()
    }
}

fn apply(params: &MapParams, map: CycleMap, x: f64) -> f64 {
    match map {
        CycleMap::F => step(params, x).1,
        CycleMap::FLeft => step_left(params, x).1,
    }
}

fn verify(params: &MapParams, cycle: &Cycle, tol: f64) -> Result<()> {
    let q = cycle.points.len();
    let p = cycle.rot.p() as usize;
    for pair in cycle.points.windows(2) {
        if pair[0].partial_cmp(&pair[1]) != Some(Ordering::Less) {
            return Err(Error::PrecisionExhausted(format!(
                "cycle points {} and {} are not strictly ordered",
                pair[0], pair[1]
            )));
        }
    }
    for (m, &z) in cycle.points.iter().enumerate() {
        let image = apply(params, cycle.map, z);
        let target = cycle.points[(m + p) % q];
        if circle_distance(image, target) > tol {
            return Err(Error::PrecisionExhausted(format!(
                "image of zeta_{m} = {z} is {image}, expected zeta_{} = {target}",
                (m + p) % q
            )));
        }
    }
    Ok(())
}

fn cell_values(params: &MapParams, rot: RationalRot) -> Result<Vec<f64>> {
    (0..rot.q() as i64).map(|m| phi_on_cell(params, rot, m)).collect()
}

/// The `f`-cycle `zeta_m = phi(m/q)`, `m = 0..q`.
///
/// Requires `delta` in `[delta_left, delta_right)` of the plateau of `rot`.
/// At the left endpoint `zeta_0` is set to exactly `0` once it is within
/// `tol`. The cycle relation is verified within `tol`.
pub fn cycle_points(params: &MapParams, rot: RationalRot, tol: f64) -> Result<Cycle> {
    let pos = classify_boundary(params, rot);
    match pos {
        PlateauPosition::RightEndpoint => {
            return Err(Error::NoCycle(format!(
                "delta = {} is the right end of the {rot} plateau; f has no periodic orbit there, only f- has",
                params.delta()
            )))
        }
        PlateauPosition::Outside => {
            return Err(Error::HypothesisViolated(format!(
                "delta = {} is not in the plateau of {rot}",
                params.delta()
            )))
        }
        _ => {}
    }
    let mut points = cell_values(params, rot)?;
    if pos == PlateauPosition::LeftEndpoint || points[0] < 0.0 {
        if points[0].abs() > tol {
            return Err(Error::PrecisionExhausted(format!("phi(0) = {} should vanish", points[0])));
        }
        points[0] = 0.0;
    }
    let cycle = Cycle {
        rot,
        map: CycleMap::F,
        points,
    };
    if cycle.points[cycle.order() - 1] >= 1.0 {
        return Err(Error::PrecisionExhausted("largest cycle point is not below 1".into()));
    }
    verify(params, &cycle, tol)?;
    Ok(cycle)
}

/// The `f-`-cycle `phi-(j/q)`, `j = 1..=q`, in increasing order.
///
/// Requires `delta` in `(delta_left, delta_right]`. At the right endpoint the
/// largest point is `1`, set exactly once it is within `tol`.
pub fn fminus_cycle(params: &MapParams, rot: RationalRot, tol: f64) -> Result<Cycle> {
    let pos = classify_boundary(params, rot);
    if !matches!(pos, PlateauPosition::Interior | PlateauPosition::RightEndpoint) {
        return Err(Error::HypothesisViolated(format!(
            "delta = {} is not in the half-open plateau (delta_left, delta_right] of {rot}",
            params.delta()
        )));
    }
    // phi-(j/q) takes the value of the cell j-1
    let mut points = cell_values(params, rot)?;
    let last = points.len() - 1;
    if pos == PlateauPosition::RightEndpoint || points[last] > 1.0 {
        if (points[last] - 1.0).abs() > tol {
            return Err(Error::PrecisionExhausted(format!(
                "phi(1-) = {} should equal 1",
                points[last]
            )));
        }
        points[last] = 1.0;
    }
    if points[0] <= 0.0 {
        return Err(Error::PrecisionExhausted("smallest f- cycle point is not positive".into()));
    }
    let cycle = Cycle {
        rot,
        map: CycleMap::FLeft,
        points,
    };
    verify(params, &cycle, tol)?;
    Ok(cycle)
}

/// Rounding slack at the domain ends and at `eta` in [`find_periodic_orbit`].
const DOMAIN_SLACK: f64 = 64.0 * f64::EPSILON;

/// Settings for [`find_periodic_orbit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSearch {
    /// Transient iterations before the period test.
    pub steps: usize,
    pub max_period: usize,
    pub tol: f64,
    pub map: CycleMap,
}

impl Default for CycleSearch {
    fn default() -> Self {
        Self {
            steps: 10_000,
            max_period: 200,
            tol: 1e-12,
            map: CycleMap::F,
        }
    }
}

/// A periodic orbit found by [`find_periodic_orbit`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicOrbit {
    pub map: CycleMap,
    pub period: usize,
    /// Sorted cycle points.
    pub points: Vec<f64>,
}

/// Looks for a periodic orbit of `f` (or `f-`) near the tail of the orbit
/// of `x0`.
///
/// After `steps` iterations the branch word of each candidate period `P` is
/// read off the orbit; the fixed point of the composed affine branch maps is
/// solved exactly and accepted only if its whole orbit follows the same
/// word, stays in the map's domain and closes up within `tol`. The smallest
/// such `P` is returned. Candidates within `tol` of the excluded endpoint
/// (1 for `f`, 0 for `f-`) are rejected: in double precision an orbit
/// creeping towards a missing fixed point closes up into spurious long
/// cycles.
pub fn find_periodic_orbit(params: &MapParams, x0: f64, search: CycleSearch) -> Option<PeriodicOrbit> {
    let (lambda, mu, delta, eta) = (params.lambda(), params.mu(), params.delta(), params.eta());
    let upper_branch = |x: f64| match search.map {
        CycleMap::F => x >= eta,
        CycleMap::FLeft => x > eta,
    };
    let in_domain = |x: f64| match search.map {
        CycleMap::F => x >= -DOMAIN_SLACK && x < 1.0 - search.tol,
        CycleMap::FLeft => x > search.tol && x <= 1.0 + DOMAIN_SLACK,
    };
    let mut x = x0;
    for _ in 0..search.steps {
        x = apply(params, search.map, x);
    }
    let mut word = Vec::with_capacity(search.max_period);
    let mut y = x;
    for _ in 0..search.max_period {
        word.push(upper_branch(y));
        y = apply(params, search.map, y);
    }
    for period in 1..=search.max_period {
        // compose x -> a x + b along the word
        let (mut a, mut b) = (1.0, 0.0);
        for &upper in &word[..period] {
            let (slope, offset) = if upper {
                (lambda * mu, mu * (delta - 1.0))
            } else {
                (lambda, delta)
            };
            a *= slope;
            b = slope * b + offset;
        }
        if a >= 1.0 {
            continue;
        }
        let start = b / (1.0 - a);
        let mut points = Vec::with_capacity(period);
        let mut z = start;
        let mut consistent = true;
        for &upper in &word[..period] {
            let branch_ok = upper_branch(z) == upper || (z - eta).abs() <= DOMAIN_SLACK;
            if !in_domain(z) || !branch_ok {
                consistent = false;
                break;
            }
            points.push(z);
            z = if upper {
                mu * (lambda * z + delta - 1.0)
            } else {
                lambda * z + delta
            };
        }
        if consistent && (z - start).abs() <= search.tol {
            points.sort_by(f64::total_cmp);
            return Some(PeriodicOrbit {
                map: search.map,
                period,
                points,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heckemahler::delta_plateau;

    fn rot(p: u64, q: u64) -> RationalRot {
        RationalRot::new(p, q).unwrap()
    }

    #[test]
    fn worked_two_cycle() {
        // oracle: zeta_1 = lambda zeta_0 + delta, zeta_0 = mu (lambda zeta_1 + delta - 1)
        let (l, m, d) = (0.5, 0.5, 0.75);
        let z0 = m * (l * d + d - 1.0) / (1.0 - l * l * m);
        let z1 = l * z0 + d;
        let p = MapParams::new(l, m, d).unwrap();
        let c = cycle_points(&p, rot(1, 2), 1e-12).unwrap();
        assert!((c.points[0] - z0).abs() < 1e-15 && (c.points[1] - z1).abs() < 1e-15);
        assert!((z0 - 1.0 / 14.0).abs() < 1e-15 && (z1 - 11.0 / 14.0).abs() < 1e-15);
        let found = find_periodic_orbit(&p, 0.3, CycleSearch::default()).unwrap();
        assert_eq!(found.period, 2);
        assert!((found.points[0] - z0).abs() < 1e-12);
    }

    #[test]
    fn left_endpoint_contains_zero() {
        let p = MapParams::new(0.5, 0.5, 2.0 / 3.0).unwrap();
        let c = cycle_points(&p, rot(1, 2), 1e-12).unwrap();
        assert_eq!(c.points[0], 0.0);
        assert!((step(&p, 0.0).1 - c.points[1]).abs() < 1e-12);
    }

    #[test]
    fn eta_sits_between_cycle_points() {
        for &(lambda, mu) in &[(0.5, 0.5), (0.9, 0.8), (0.9, 2.0)] {
            for &(pp, q) in &[(1, 3), (2, 5), (3, 7), (1, 6)] {
                let r = rot(pp, q);
                let Ok(pl) = delta_plateau(lambda, mu, r) else { continue };
                let p = MapParams::new(lambda, mu, pl.delta_left + 0.5 * pl.width()).unwrap();
                let c = cycle_points(&p, r, 1e-10).unwrap();
                let i = (q - pp - 1) as usize;
                assert!(c.points[i] < p.eta() && p.eta() <= c.points[i + 1]);
                let found = find_periodic_orbit(&p, 0.1, CycleSearch::default()).unwrap();
                assert_eq!(found.period as u64, q);
                for (a, b) in found.points.iter().zip(&c.points) {
                    assert!((a - b).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn right_endpoint() {
        let p = MapParams::new(0.5, 0.5, 0.9).unwrap();
        assert!(matches!(cycle_points(&p, rot(1, 2), 1e-12), Err(Error::NoCycle(_))));
        let c = fminus_cycle(&p, rot(1, 2), 1e-12).unwrap();
        assert_eq!(c.points.len(), 2);
        assert_eq!(c.points[1], 1.0);
        // oracle: iterate f- from 1
        let mut x = 1.0;
        for _ in 0..1000 {
            x = step_left(&p, x).1;
        }
        assert!((x - 1.0).abs() < 1e-12);
        assert!((step_left(&p, x).1 - c.points[0]).abs() < 1e-12);
        assert!(find_periodic_orbit(&p, 0.3, CycleSearch::default()).is_none());
        let left = CycleSearch {
            map: CycleMap::FLeft,
            ..CycleSearch::default()
        };
        let found = find_periodic_orbit(&p, 0.3, left).unwrap();
        assert_eq!(found.period, 2);
        assert!((found.points[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interior_fminus_cycle_equals_f_cycle() {
        let p = MapParams::new(0.5, 0.5, 0.8).unwrap();
        let a = cycle_points(&p, rot(1, 2), 1e-12).unwrap();
        let b = fminus_cycle(&p, rot(1, 2), 1e-12).unwrap();
        assert_eq!(a.points, b.points);
        let p = MapParams::new(0.5, 0.5, 2.0 / 3.0).unwrap();
        assert!(matches!(fminus_cycle(&p, rot(1, 2), 1e-12), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn outside_plateau() {
        let p = MapParams::new(0.5, 0.5, 0.75).unwrap();
        assert!(matches!(cycle_points(&p, rot(1, 3), 1e-12), Err(Error::HypothesisViolated(_))));
    }
}
