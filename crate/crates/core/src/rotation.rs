//! Rotation numbers: orbit estimates and exact classification by a
//! Stern-Brocot search against plateau endpoints.

use std::cmp::Ordering;

use serde::Serialize;

use crate::dynamics::OrbitIter;
use crate::error::Result;
use crate::heckemahler::extended::plateau_extended;
use crate::heckemahler::{delta_plateau, Plateau};
use crate::params::MapParams;
use crate::rational::{farey_mediant, Fraction, RationalRot};

/// A rotation number, either exactly rational or a real approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RotationValue {
    Exact { rot: RationalRot },
    Approx { value: f64, error_bound: f64 },
}

impl RotationValue {
    pub fn exact(rot: RationalRot) -> Self {
        RotationValue::Exact { rot }
    }

    /// A real value assumed irrational, with no error bound.
    pub fn real(value: f64) -> Self {
        RotationValue::Approx {
            value,
            error_bound: 0.0,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            RotationValue::Exact { rot } => rot.to_f64(),
            RotationValue::Approx { value, .. } => *value,
        }
    }

    pub fn error_bound(&self) -> f64 {
        match self {
            RotationValue::Exact { .. } => 0.0,
            RotationValue::Approx { error_bound, .. } => *error_bound,
        }
    }

    pub fn as_rational(&self) -> Option<RationalRot> {
        match self {
            RotationValue::Exact { rot } => Some(*rot),
            RotationValue::Approx { .. } => None,
        }
    }
}

/// Where `delta` sits relative to the plateau of the returned rotation number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Interior,
    LeftEndpoint,
    RightEndpoint,
    NotRational,
}

/// Position of `delta` relative to the plateau of a given rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlateauPosition {
    Interior,
    LeftEndpoint,
    RightEndpoint,
    Outside,
}

/// How a [`RotationResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evidence {
    pub orbit_steps: usize,
    /// Number of plateau evaluations in the search.
    pub search_depth: usize,
    /// The final Farey bracket when no plateau matched.
    pub bracket: Option<(Fraction, Fraction)>,
    /// Set when the matched plateau is narrower than a few ulps of `delta`,
    /// so rounding in `delta` alone could have moved it to a neighbour.
    pub resolution_limited: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationResult {
    pub value: RotationValue,
    pub plateau: Option<Plateau>,
    pub boundary: Boundary,
    pub evidence: Evidence,
}

/// `floor(x_n)/n` along the lifted orbit of `0`, with error bound `2/n`.
pub fn rho_orbit_estimate(params: &MapParams, n: usize) -> RotationValue {
    let n = n.max(1);
    let mut orbit = OrbitIter::new(params, 0.0);
    for _ in 0..n {
        orbit.advance();
    }
    RotationValue::Approx {
        value: orbit.current().winding as f64 / n as f64,
        error_bound: 2.0 / n as f64,
    }
}

/// Options for [`rho_exact_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactOptions {
    pub max_den: u64,
    /// Relative tolerance for endpoint equality; 0 means bit-exact.
    pub endpoint_rel_tol: f64,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            max_den: 1_000_000,
            endpoint_rel_tol: 0.0,
        }
    }
}

fn same(a: f64, b: f64, rel_tol: f64) -> bool {
    a == b || (a - b).abs() <= rel_tol * a.abs().max(b.abs())
}

/// Compares `delta` with the plateau of `rot`.
pub fn classify_boundary(params: &MapParams, rot: RationalRot) -> PlateauPosition {
    classify_with(params, rot, 0.0)
}

fn classify_with(params: &MapParams, rot: RationalRot, rel_tol: f64) -> PlateauPosition {
    match locate(params, rot, rel_tol) {
        Ok(Probe::Inside(_, pos)) => pos,
        _ => PlateauPosition::Outside,
    }
}

/// `delta` closer than this to a double-precision endpoint triggers an
/// extended-precision recheck.
const REFINE_MARGIN: f64 = 1e-12;
/// Largest denominator rechecked at extended precision.
const REFINE_MAX_Q: u64 = 4096;
const REFINE_BITS: usize = 192;

/// Outcome of comparing `delta` with one plateau.
enum Probe {
    /// `delta` lies left of the plateau (the rotation number is smaller).
    Below,
    /// `delta` lies right of the plateau.
    Above,
    Inside(Plateau, PlateauPosition),
}

/// Places `delta` relative to the plateau of `rot`.
///
/// Endpoints are bit-exact matches against the correctly rounded endpoint,
/// or within `rel_tol` when it is positive. Near an endpoint the plateau is
/// recomputed at extended precision: a double strictly inside the exact
/// plateau is interior even if it also rounds an endpoint.
fn locate(params: &MapParams, rot: RationalRot, rel_tol: f64) -> Result<Probe> {
    let (lambda, mu, delta) = (params.lambda(), params.mu(), params.delta());
    let pl = delta_plateau(lambda, mu, rot)?;
    if rel_tol > 0.0 {
        if same(delta, pl.delta_left, rel_tol) {
            return Ok(Probe::Inside(pl, PlateauPosition::LeftEndpoint));
        }
        if same(delta, pl.delta_right, rel_tol) {
            return Ok(Probe::Inside(pl, PlateauPosition::RightEndpoint));
        }
    }
    let near = (delta - pl.delta_left).abs() <= REFINE_MARGIN || (delta - pl.delta_right).abs() <= REFINE_MARGIN;
    if near && rot.q() <= REFINE_MAX_Q {
        let bounds = plateau_extended(lambda, mu, rot, REFINE_BITS)?;
        let pl = bounds.to_plateau();
        return Ok(if bounds.strictly_contains(delta) {
            Probe::Inside(pl, PlateauPosition::Interior)
        } else if delta == pl.delta_left {
            Probe::Inside(pl, PlateauPosition::LeftEndpoint)
        } else if delta == pl.delta_right {
            Probe::Inside(pl, PlateauPosition::RightEndpoint)
        } else if bounds.lies_below(delta) {
            Probe::Below
        } else {
            Probe::Above
        });
    }
    Ok(match position(delta, &pl, 0.0) {
        PlateauPosition::Outside if delta < pl.delta_left => Probe::Below,
        PlateauPosition::Outside => Probe::Above,
        pos => Probe::Inside(pl, pos),
    })
}

fn position(delta: f64, pl: &Plateau, rel_tol: f64) -> PlateauPosition {
    if same(delta, pl.delta_left, rel_tol) {
        PlateauPosition::LeftEndpoint
    } else if same(delta, pl.delta_right, rel_tol) {
        PlateauPosition::RightEndpoint
    } else if pl.delta_left < delta && delta < pl.delta_right {
        PlateauPosition::Interior
    } else {
        PlateauPosition::Outside
    }
}

struct Search<'a> {
    params: &'a MapParams,
    opts: ExactOptions,
    probes: usize,
}

impl Search<'_> {
    fn probe(&mut self, f: Fraction) -> Result<Probe> {
        self.probes += 1;
        let rot = RationalRot::try_from(f)?;
        let (lambda, mu) = (self.params.lambda(), self.params.mu());
        // p/q at or beyond r_bound cannot be a rotation number
        if f.denom() as f64 * lambda.ln() + f.numer() as f64 * mu.ln() >= 0.0 {
            return Ok(Probe::Below);
        }
        locate(self.params, rot, self.opts.endpoint_rel_tol)
    }
}

/// [`rho_exact_with`] with default options and the given `max_den`.
pub fn rho_exact(params: &MapParams, max_den: u64) -> Result<RotationResult> {
    rho_exact_with(
        params,
        ExactOptions {
            max_den,
            ..ExactOptions::default()
        },
    )
}

/// Exact rotation number by Stern-Brocot search.
///
/// Mediants of the current Farey bracket are probed against their plateaus.
/// Runs of consecutive moves in one direction are found by exponential and
/// binary search, so the number of plateau evaluations grows with the number
/// of partial quotients rather than their size. The search stops with
/// `not_rational` when the next denominator would exceed `max_den`; the
/// result value is then the bracket midpoint with half its width as error
/// bound.
pub fn rho_exact_with(params: &MapParams, opts: ExactOptions) -> Result<RotationResult> {
    let mut search = Search {
        params,
        opts,
        probes: 0,
    };
    let (mut lo, mut hi) = (Fraction::ZERO, Fraction::ONE);
    let found = |pl: Plateau, pos: PlateauPosition, probes: usize| RotationResult {
        value: RotationValue::exact(pl.rot),
        plateau: Some(pl),
        boundary: match pos {
            PlateauPosition::LeftEndpoint => Boundary::LeftEndpoint,
            PlateauPosition::RightEndpoint => Boundary::RightEndpoint,
            _ => Boundary::Interior,
        },
        evidence: Evidence {
            orbit_steps: 0,
            search_depth: probes,
            bracket: None,
            resolution_limited: pl.width().partial_cmp(&(4.0 * f64::EPSILON * params.delta())) != Some(Ordering::Greater),
        },
    };

    loop {
        if lo.denom() + hi.denom() > opts.max_den {
            break;
        }
        let right = match search.probe(farey_mediant(lo, hi)?)? {
            Probe::Inside(pl, pos) => return Ok(found(pl, pos, search.probes)),
            Probe::Above => true,
            Probe::Below => false,
        };
        // a run of moves in one direction visits near + k*far for k = 1, 2, ...
        let (near, far) = if right { (lo, hi) } else { (hi, lo) };
        let at = |k: u64| Fraction::new(near.numer() + k * far.numer(), near.denom() + k * far.denom());
        let keeps_going = |p: &Probe| matches!((p, right), (Probe::Above, true) | (Probe::Below, false));
        let k_max = (opts.max_den - near.denom()) / far.denom();

        let mut good = 1_u64;
        let mut bad: Option<(u64, Probe)> = None;
        let mut stride = 1_u64;
        while good < k_max {
            let k = good.saturating_add(stride).min(k_max);
            let pr = search.probe(at(k))?;
            if keeps_going(&pr) {
                good = k;
                stride = stride.saturating_mul(2);
            } else {
                bad = Some((k, pr));
                break;
            }
        }
        let Some((mut bad_k, mut bad_probe)) = bad else {
            // every in-range step continues the run
            if right {
                lo = at(good);
            } else {
                hi = at(good);
            }
            break;
        };
        while bad_k - good > 1 {
            let mid = good + (bad_k - good) / 2;
            let pr = search.probe(at(mid))?;
            if keeps_going(&pr) {
                good = mid;
            } else {
                bad_k = mid;
                bad_probe = pr;
            }
        }
        let (new_near, new_far) = (at(good), at(bad_k));
        let (near_ref, far_ref) = if right { (&mut lo, &mut hi) } else { (&mut hi, &mut lo) };
        *near_ref = new_near;
        match bad_probe {
            Probe::Inside(pl, pos) => return Ok(found(pl, pos, search.probes)),
            _ => *far_ref = new_far,
        }
    }

    let mid = 0.5 * (lo.to_f64() + hi.to_f64());
    let half = 0.5 * (hi.to_f64() - lo.to_f64());
    Ok(RotationResult {
        value: RotationValue::Approx {
            value: mid,
            error_bound: half,
        },
        plateau: None,
        boundary: Boundary::NotRational,
        evidence: Evidence {
            orbit_steps: 0,
            search_depth: search.probes,
            bracket: Some((lo, hi)),
            resolution_limited: false,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heckemahler::{delta_of_rho, SeriesTolerance};
    use proptest::prelude::*;

    fn rot(p: u64, q: u64) -> RationalRot {
        RationalRot::new(p, q).unwrap()
    }

    #[test]
    fn worked_examples() {
        let p = MapParams::new(0.5, 0.5, 0.75).unwrap();
        let r = rho_exact(&p, 1_000_000).unwrap();
        assert_eq!(r.value, RotationValue::exact(rot(1, 2)));
        assert_eq!(r.boundary, Boundary::Interior);
        let pl = r.plateau.unwrap();
        assert!((pl.delta_left - 2.0 / 3.0).abs() < 1e-15 && (pl.delta_right - 0.9).abs() < 1e-15);

        let p = MapParams::new(0.5, 0.5, 0.9).unwrap();
        let r = rho_exact(&p, 1_000_000).unwrap();
        assert_eq!(r.value, RotationValue::exact(rot(1, 2)));
        assert_eq!(r.boundary, Boundary::RightEndpoint);

        let est = rho_orbit_estimate(&MapParams::new(0.5, 0.5, 0.75).unwrap(), 1_000_000);
        assert!((est.value() - 0.5).abs() <= 2e-6);
    }

    #[test]
    fn truncated_golden_delta() {
        let p = MapParams::new(0.95, 0.9, 0.6617).unwrap();
        let r = rho_exact(&p, 100_000).unwrap();
        let est = rho_orbit_estimate(&p, 1_000_000);
        match r.value {
            RotationValue::Approx { value, error_bound } => {
                let (lo, hi) = r.evidence.bracket.unwrap();
                assert!(lo.to_f64() <= est.value() + est.error_bound());
                assert!(est.value() - est.error_bound() <= hi.to_f64());
                assert!((value - est.value()).abs() <= error_bound + est.error_bound());
            }
            RotationValue::Exact { rot } => {
                assert!((rot.to_f64() - est.value()).abs() <= est.error_bound());
            }
        }
        assert!((est.value() - 0.618034).abs() < 1e-3);
    }

    #[test]
    fn classify_examples() {
        let at = |d: f64, r| classify_boundary(&MapParams::new(0.5, 0.5, d).unwrap(), r);
        assert_eq!(at(2.0 / 3.0, rot(1, 2)), PlateauPosition::LeftEndpoint);
        assert_eq!(at(0.75, rot(1, 2)), PlateauPosition::Interior);
        assert_eq!(at(0.9, rot(1, 2)), PlateauPosition::RightEndpoint);
        assert_eq!(at(0.75, rot(1, 3)), PlateauPosition::Outside);
    }

    #[test]
    fn golden_delta_is_not_rational() {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        // the default 1e-12 tail leaves delta inside the 55/89 plateau, which
        // ends about 1e-13 below the true value
        let tol = SeriesTolerance::new(1e-17, 1_000_000).unwrap();
        let d = delta_of_rho(0.95, 0.9, g, tol).unwrap().value;
        let r = rho_exact(&MapParams::new(0.95, 0.9, d).unwrap(), 1_000_000).unwrap();
        match r.value {
            RotationValue::Approx { .. } => {
                assert_eq!(r.boundary, Boundary::NotRational);
                let (lo, hi) = r.evidence.bracket.unwrap();
                assert!(lo.to_f64() < g && g < hi.to_f64());
                assert_eq!(Fraction::determinant(&lo, &hi), 1);
            }
            // plateaus beyond q ~ 400 are below double resolution here
            RotationValue::Exact { rot } => {
                assert!(rot.q() >= 233, "{rot}");
                assert!((rot.to_f64() - g).abs() < 1.0 / (rot.q() as f64).powi(2));
            }
        }
    }

    #[test]
    fn long_runs_are_cheap() {
        // rho near 1/200 needs a run of ~200 left moves
        let pl = delta_plateau(0.9, 0.8, rot(1, 200)).unwrap();
        let p = MapParams::new(0.9, 0.8, pl.midpoint());
        if let Ok(p) = p {
            let r = rho_exact(&p, 1_000_000).unwrap();
            if pl.width() > 4.0 * f64::EPSILON {
                assert_eq!(r.value, RotationValue::exact(rot(1, 200)));
            }
            assert!(r.evidence.search_depth < 60, "{}", r.evidence.search_depth);
        }
    }

    #[test]
    fn beyond_r_bound_goes_left() {
        // lambda*mu > 1: r_bound(0.9, 2) ~ 0.152, so 1/2 is never probed as a match
        let p = MapParams::new(0.9, 2.0, 0.15).unwrap();
        let r = rho_exact(&p, 1_000_000).unwrap();
        assert!(r.value.value() < crate::params::r_bound(0.9, 2.0));
        let est = rho_orbit_estimate(&p, 200_000);
        assert!((r.value.value() - est.value()).abs() <= est.error_bound() + r.value.error_bound());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn plateau_midpoints_round_trip(q in 2u64..30, p0 in 1u64..30, which in 0usize..3) {
            let (lambda, mu) = [(0.5, 0.5), (0.9, 0.8), (0.9, 2.0)][which];
            let p = 1 + p0 % (q - 1);
            prop_assume!(num_integer::gcd(p, q) == 1);
            let r = rot(p, q);
            let Ok(bounds) = plateau_extended(lambda, mu, r, 192) else { return Ok(()) };
            // a few plateaus near 1 at (0.5, 0.5) contain no double at all
            prop_assume!(bounds.strictly_contains(bounds.midpoint()));
            let params = MapParams::new(lambda, mu, bounds.midpoint()).unwrap();
            let res = rho_exact(&params, 1_000_000).unwrap();
            prop_assert_eq!(res.value, RotationValue::exact(r));
            prop_assert_eq!(res.boundary, Boundary::Interior);
        }
    }
}
