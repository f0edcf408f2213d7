//! Iterated images `f^n([0, 1))` as finite unions of circle arcs.
//!
//! Arcs are pushed forward piece by piece: a piece inside one branch maps
//! affinely and its length is multiplied by the branch slope, so measures
//! never come from subtracting nearby endpoints. The holes between arcs are
//! matched against `[f^l(1-), f^l(0))` computed by direct iteration.

use serde::Serialize;

use crate::dynamics::{step, step_left};
use crate::error::{Error, Result};
use crate::limitset::cycles::Cycle;
use crate::limitset::gaps::Gap;
use crate::numeric::{powi64, CompensatedSum};
use crate::params::MapParams;
use crate::rational::RationalRot;

/// Largest accepted distance between a hole endpoint and its iterated value.
pub const HOLE_MATCH_TOL: f64 = 1e-10;

/// Pieces closer than this to `eta` are not split.
const SPLIT_SLACK: f64 = 8.0 * f64::EPSILON;

/// A half-open circle arc `[start, end)`; wraps through `0` when
/// `start > end`. The full circle is `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
    /// Tracked multiplicatively, not as `end - start`.
    pub length: f64,
}

impl Arc {
    pub fn wraps(&self) -> bool {
        self.start > self.end
    }

    pub fn contains(&self, x: f64) -> bool {
        if self.wraps() {
            x >= self.start || x < self.end
        } else {
            self.start <= x && x < self.end
        }
    }
}

/// `f^n(I)` together with its holes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalDecomposition {
    pub n: u64,
    /// Disjoint arcs sorted by start.
    pub intervals: Vec<Arc>,
    /// Holes `[f^l(1-), f^l(0))` between consecutive arcs, sorted by left end.
    pub holes: Vec<Gap>,
    pub measure: f64,
}

impl IntervalDecomposition {
    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|a| a.contains(x))
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    start: f64,
    end: f64,
    length: f64,
}

fn push_forward(params: &MapParams, pieces: &[Piece]) -> Vec<Piece> {
    let (lambda, mu, delta, eta) = (params.lambda(), params.mu(), params.delta(), params.eta());
    let lower = |start: f64, end: f64, ends_at_eta: bool, length: f64| Piece {
        start: (lambda * start + delta).min(1.0),
        end: if ends_at_eta { 1.0 } else { (lambda * end + delta).min(1.0) },
        length: lambda * length,
    };
    let upper = |start: f64, end: f64, starts_at_eta: bool, length: f64| Piece {
        start: if starts_at_eta { 0.0 } else { (mu * (lambda * start + delta - 1.0)).max(0.0) },
        end: (mu * (lambda * end + delta - 1.0)).max(0.0),
        length: lambda * mu * length,
    };
    let mut out = Vec::with_capacity(pieces.len() + 1);
    for p in pieces {
        if p.end <= eta + SPLIT_SLACK {
            out.push(lower(p.start, p.end, (p.end - eta).abs() <= SPLIT_SLACK, p.length));
        } else if p.start >= eta - SPLIT_SLACK {
            out.push(upper(p.start, p.end, (p.start - eta).abs() <= SPLIT_SLACK, p.length));
        } else {
            let below = eta - p.start;
            out.push(lower(p.start, eta, true, below));
            out.push(upper(eta, p.end, true, p.length - below));
        }
    }
    out.retain(|p| p.length > 0.0);
    out.sort_by(|a, b| a.start.total_cmp(&b.start));
    out
}

/// Joins linear pieces into arcs; a piece ending at `1` absorbs one
/// starting at `0`.
fn assemble(pieces: &[Piece]) -> Vec<Arc> {
    let mut arcs: Vec<Arc> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match arcs.last_mut() {
            Some(last) if last.end == p.start => {
                last.end = p.end;
                last.length += p.length;
            }
            _ => arcs.push(Arc {
                start: p.start,
                end: p.end,
                length: p.length,
            }),
        }
    }
    if arcs.len() > 1 && arcs[0].start == 0.0 && arcs[arcs.len() - 1].end == 1.0 {
        let first = arcs.remove(0);
        let last = arcs.last_mut().expect("at least one arc left");
        last.end = first.end;
        last.length += first.length;
    }
    arcs
}

/// `f^l(1-)` and `f^l(0)` for `l = 0..=n`.
fn hole_orbits(params: &MapParams, n: u64) -> (Vec<f64>, Vec<f64>) {
    let mut ones = Vec::with_capacity(n as usize + 1);
    let mut zeros = Vec::with_capacity(n as usize + 1);
    let (mut one, mut zero) = (1.0, 0.0);
    ones.push(one);
    zeros.push(zero);
    for _ in 0..n {
        one = step_left(params, one).1;
        zero = step(params, zero).1;
        ones.push(one);
        zeros.push(zero);
    }
    (ones, zeros)
}

fn identify_holes(params: &MapParams, n: u64, arcs: &[Arc]) -> Result<Vec<Gap>> {
    if arcs.len() == 1 && arcs[0].start == 0.0 && arcs[0].end == 1.0 {
        return Ok(Vec::new());
    }
    let (ones, zeros) = hole_orbits(params, n);
    let mut holes = Vec::with_capacity(arcs.len());
    for (i, arc) in arcs.iter().enumerate() {
        let next = &arcs[(i + 1) % arcs.len()];
        let (left, right) = (arc.end, next.start);
        // newest holes first: older ones are swallowed by later iterates
        let index = (1..=n)
            .rev()
            .find(|&l| {
                let l = l as usize;
                (ones[l] - left).abs() <= HOLE_MATCH_TOL && (zeros[l] - right).abs() <= HOLE_MATCH_TOL
            })
            .ok_or_else(|| {
                Error::PrecisionExhausted(format!(
                    "hole [{left}, {right}) of f^{n}(I) matches no [f^l(1-), f^l(0))"
                ))
            })?;
        holes.push(Gap { index, left, right });
    }
    holes.sort_by(|a, b| a.left.total_cmp(&b.left));
    Ok(holes)
}

/// `f^n(I)` for `I = [0, 1)`.
///
/// Works for any rotation number. In the rational regime the result has
/// `min(n, q)` holes; for irrational rotation numbers it is `I` minus the
/// first `n` gaps.
pub fn iterated_image(params: &MapParams, n: u64) -> Result<IntervalDecomposition> {
    let mut pieces = vec![Piece {
        start: 0.0,
        end: 1.0,
        length: 1.0,
    }];
    for _ in 0..n {
        pieces = push_forward(params, &pieces);
    }
    let intervals = assemble(&pieces);
    let holes = identify_holes(params, n, &intervals)?;
    let mut acc = CompensatedSum::default();
    for a in &intervals {
        acc.add(a.length);
    }
    Ok(IntervalDecomposition {
        n,
        intervals,
        holes,
        measure: acc.value(),
    })
}

/// `(lambda^q mu^p)^floor(n/q)`, the upper bound on `|f^n(I)|` for
/// rotation number `p/q`.
pub fn measure_bound(params: &MapParams, rot: RationalRot, n: u64) -> f64 {
    let per_period = powi64(params.lambda(), rot.q() as i64) * powi64(params.mu(), rot.p() as i64);
    powi64(per_period, (n / rot.q()) as i64)
}

/// For `n >= q`, pairs each arc with the cycle point it contains.
///
/// Returns `(arc index, m)` for every arc. The arc starting at `f^l(0)`
/// must contain `zeta_{lp mod q}`, and `l` must be congruent to `m` times
/// the inverse of `p` modulo `q`.
pub fn cycle_pairing(decomp: &IntervalDecomposition, cycle: &Cycle) -> Result<Vec<(usize, usize)>> {
    let q = cycle.rot.q();
    let p = cycle.rot.p();
    let p_inv = cycle.rot.inverse_p_mod_q();
    if decomp.intervals.len() as u64 != q || decomp.holes.len() as u64 != q {
        return Err(Error::HypothesisViolated(format!(
            "f^{}(I) has {} arcs, expected q = {q}",
            decomp.n,
            decomp.intervals.len()
        )));
    }
    let mut pairs = Vec::with_capacity(q as usize);
    for hole in &decomp.holes {
        let (arc_index, arc) = decomp
            .intervals
            .iter()
            .enumerate()
            .find(|(_, a)| a.start == hole.right)
            .ok_or_else(|| Error::PrecisionExhausted(format!("no arc starts at f^{}(0)", hole.index)))?;
        let inside: Vec<usize> = (0..q as usize).filter(|&m| arc.contains(cycle.points[m])).collect();
        let m = ((hole.index % q) * p % q) as usize;
        if inside != [m] || (m as u64 * p_inv) % q != hole.index % q {
            return Err(Error::PrecisionExhausted(format!(
                "arc after hole {} contains cycle points {inside:?}, expected [{m}]",
                hole.index
            )));
        }
        pairs.push((arc_index, m));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limitset::cycles::cycle_points;
    use proptest::prelude::*;

    fn worked() -> MapParams {
        MapParams::new(0.5, 0.5, 0.75).unwrap()
    }

    #[test]
    fn first_image_has_one_hole() {
        let p = worked();
        let d = iterated_image(&p, 1).unwrap();
        assert_eq!(d.intervals.len(), 1);
        assert_eq!(d.holes.len(), 1);
        assert_eq!(d.holes[0].left, p.f_one_minus());
        assert_eq!(d.holes[0].right, p.delta());
        assert!(d.intervals[0].wraps());
        assert!((d.measure - (1.0 - p.hole_width())).abs() < 1e-15);
        let d0 = iterated_image(&p, 0).unwrap();
        assert_eq!(d0.measure, 1.0);
        assert!(d0.holes.is_empty());
    }

    #[test]
    fn worked_example_by_hand() {
        // f^2(I) = [1/16, 1/8) u [3/4, 13/16)
        let d = iterated_image(&worked(), 2).unwrap();
        let ends: Vec<(f64, f64)> = d.intervals.iter().map(|a| (a.start, a.end)).collect();
        assert_eq!(ends, vec![(0.0625, 0.125), (0.75, 0.8125)]);
        assert_eq!(d.measure, 0.125);
    }

    #[test]
    fn measure_recursion() {
        let p = worked();
        let rot = RationalRot::new(1, 2).unwrap();
        for n in 0..=20 {
            let a = iterated_image(&p, n).unwrap().measure;
            let b = iterated_image(&p, n + 2).unwrap().measure;
            assert!((b / a - 0.125).abs() < 1e-12, "n={n}");
            assert!(a <= measure_bound(&p, rot, n) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn pairing_with_cycle() {
        for &(lambda, mu, pp, q) in &[(0.5, 0.5, 1, 2), (0.9, 0.8, 2, 5), (0.9, 0.8, 3, 7), (0.9, 2.0, 1, 9)] {
            let rot = RationalRot::new(pp, q).unwrap();
            let pl = crate::heckemahler::delta_plateau(lambda, mu, rot).unwrap();
            let p = MapParams::new(lambda, mu, pl.midpoint()).unwrap();
            let cycle = cycle_points(&p, rot, 1e-10).unwrap();
            for n in q..q + 12 {
                let d = iterated_image(&p, n).unwrap();
                assert_eq!(d.intervals.len() as u64, q);
                for h in &d.holes {
                    assert!(h.index + q > n && h.index <= n);
                }
                let pairs = cycle_pairing(&d, &cycle).unwrap();
                assert_eq!(pairs.len() as u64, q);
            }
            for n in 1..q {
                assert_eq!(iterated_image(&p, n).unwrap().holes.len() as u64, n);
            }
        }
    }

    #[test]
    fn eta_leaves_the_image_after_q_steps() {
        let p = MapParams::new(0.9, 0.8, 0.5).unwrap();
        let r = crate::rotation::rho_exact(&p, 1000).unwrap();
        let q = r.value.as_rational().unwrap().q();
        assert!(!iterated_image(&p, q).unwrap().contains(p.eta()));
    }

    proptest! {
        #[test]
        fn arcs_are_disjoint_and_lengths_match(t in 0.01f64..0.99, n in 0u64..40) {
            let p = MapParams::new(0.9, 0.8, 0.1 + 0.9 * t).unwrap();
            let d = iterated_image(&p, n).unwrap();
            let mut total = 0.0;
            for (i, a) in d.intervals.iter().enumerate() {
                let span = if a.wraps() { 1.0 - a.start + a.end } else { a.end - a.start };
                prop_assert!((span - a.length).abs() < 1e-12);
                if i + 1 < d.intervals.len() {
                    prop_assert!(a.end < d.intervals[i + 1].start);
                }
                total += a.length;
            }
            prop_assert!((total - d.measure).abs() < 1e-14);
            prop_assert!(d.intervals.len() <= n as usize + 1);
        }
    }
}
