//! The omega-limit set of an orbit.

use serde::Serialize;

use crate::dynamics::{step, step_left};
use crate::error::{Error, Result};
use crate::heckemahler::SeriesTolerance;
use crate::limitset::cycles::{cycle_points, fminus_cycle, Cycle};
use crate::limitset::gaps::{gaps_up_to, Gap};
use crate::numeric::circle_distance;
use crate::params::MapParams;
use crate::rotation::{rho_exact, Boundary};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaOptions {
    pub orbit_steps: usize,
    /// Number of gaps in the Cantor approximation.
    pub gap_depth: u64,
    /// Final distance the orbit must reach.
    pub tol: f64,
    pub max_den: u64,
    pub series: SeriesTolerance,
}

impl Default for OmegaOptions {
    fn default() -> Self {
        Self {
            orbit_steps: 2_000,
            gap_depth: 200,
            tol: 1e-9,
            max_den: 1_000_000,
            series: SeriesTolerance::default(),
        }
    }
}

/// The limit set an orbit accumulates on.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OmegaLimit {
    /// Rational rotation number, `delta` in `[delta_left, delta_right)`.
    Cycle(Cycle),
    /// Irrational rotation number: the complement of the listed gaps.
    Cantor { rho: f64, gaps: Vec<Gap> },
    /// Right end of a plateau: the `f-`-cycle, which contains `1`.
    FiniteSet { points: Vec<f64> },
}

impl OmegaLimit {
    /// Circle distance from `x` to the set (to its depth-limited
    /// approximation in the Cantor case).
    pub fn distance(&self, x: f64) -> f64 {
        match self {
            OmegaLimit::Cycle(c) => nearest(&c.points, x),
            OmegaLimit::FiniteSet { points } => nearest(points, x),
            OmegaLimit::Cantor { gaps, .. } => gaps
                .iter()
                .find(|g| g.contains(x))
                .map_or(0.0, |g| (x - g.left).min(g.right - x)),
        }
    }
}

fn nearest(points: &[f64], x: f64) -> f64 {
    points.iter().map(|&z| circle_distance(x, z)).fold(f64::INFINITY, f64::min)
}

/// The omega-limit of `x` with the distances that certify the approach.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Omega {
    pub limit: OmegaLimit,
    pub final_distance: f64,
    /// Sampling stride of the monotonicity check.
    pub stride: usize,
}

/// Classifies the omega-limit of `x` in `[0, 1)`.
///
/// Approach is accepted when the distance sampled every `stride` steps
/// (`q` for rational rotation numbers, `1` otherwise) does not increase
/// over the last tenth of the orbit and ends below `opts.tol`. Increases
/// at rounding level are ignored.
pub fn omega_limit(params: &MapParams, x: f64, opts: OmegaOptions) -> Result<Omega> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::OutsideDomain { x, domain: "[0, 1)" });
    }
    let rot = rho_exact(params, opts.max_den)?;
    let check_tol = opts.tol.max(1e-12);
    let (limit, stride, left_map) = match (rot.value.as_rational(), rot.boundary) {
        (Some(r), Boundary::RightEndpoint) => {
            let c = fminus_cycle(params, r, check_tol)?;
            (OmegaLimit::FiniteSet { points: c.points }, r.q() as usize, true)
        }
        (Some(r), _) => (OmegaLimit::Cycle(cycle_points(params, r, check_tol)?), r.q() as usize, false),
        (None, _) => {
            let rho = rot.value.value();
            let gaps = gaps_up_to(params, rho, opts.gap_depth, opts.series)?;
            (OmegaLimit::Cantor { rho, gaps }, 1, false)
        }
    };

    let mut y = x;
    let mut distances = Vec::with_capacity(opts.orbit_steps + 1);
    distances.push(limit.distance(y));
    for k in 0..opts.orbit_steps {
        // 0 has no f- image; it occurs at most once, at the start
        y = if left_map && !(k == 0 && y == 0.0) {
            step_left(params, y).1
        } else {
            step(params, y).1
        };
        distances.push(limit.distance(y));
    }
    let final_distance = *distances.last().expect("non-empty");
    let tail_start = distances.len() - (distances.len() / 10).max(stride + 1);
    let noise = 64.0 * f64::EPSILON;
    let monotone = distances[tail_start..]
        .iter()
        .step_by(stride)
        .zip(distances[tail_start + stride..].iter().step_by(stride))
        .all(|(a, b)| b <= a || *b <= noise);
    if !monotone || final_distance > opts.tol {
        return Err(Error::NoApproach {
            steps: opts.orbit_steps,
            distance: final_distance,
        });
    }
    Ok(Omega {
        limit,
        final_distance,
        stride,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugation::{phi_eval, ConjugationSpec};
    use crate::dynamics::forward_orbit;
    use crate::heckemahler::delta_of_rho;
    use crate::rotation::RotationValue;
    use crate::side::SideReal;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn worked_cycle_attracts() {
        let p = MapParams::new(0.5, 0.5, 0.75).unwrap();
        let opts = OmegaOptions {
            orbit_steps: 100,
            ..OmegaOptions::default()
        };
        let om = omega_limit(&p, 0.3, opts).unwrap();
        assert!(om.final_distance < 1e-9);
        let OmegaLimit::Cycle(c) = &om.limit else { panic!("expected a cycle") };
        assert!((c.points[0] - 1.0 / 14.0).abs() < 1e-15);
        assert_eq!(om.stride, 2);
    }

    #[test]
    fn right_endpoint_gives_finite_set() {
        let p = MapParams::new(0.5, 0.5, 0.9).unwrap();
        for x in [0.0, 0.3, 0.95] {
            let om = omega_limit(&p, x, OmegaOptions::default()).unwrap();
            let OmegaLimit::FiniteSet { points } = &om.limit else { panic!("expected a finite set") };
            assert_eq!(points.len(), 2);
            assert!(points.contains(&1.0));
        }
    }

    #[test]
    fn cantor_case() {
        // doubles resolve the plateaus of the golden staircase up to q = 89
        let rho = (5f64.sqrt() - 1.0) / 2.0;
        let d = delta_of_rho(0.95, 0.9, rho, SeriesTolerance::default()).unwrap().value;
        let p = MapParams::new(0.95, 0.9, d).unwrap();
        let opts = OmegaOptions {
            max_den: 55,
            gap_depth: 60,
            ..OmegaOptions::default()
        };
        let om = omega_limit(&p, 0.4, opts).unwrap();
        assert!(matches!(om.limit, OmegaLimit::Cantor { .. }));
        assert!(om.final_distance <= 1e-9);
        assert!(om.limit.distance(p.delta() - 1e-6) > 0.0);
    }

    #[test]
    fn bad_start() {
        let p = MapParams::new(0.5, 0.5, 0.75).unwrap();
        assert!(matches!(
            omega_limit(&p, 1.0, OmegaOptions::default()),
            Err(Error::OutsideDomain { .. })
        ));
        let short = OmegaOptions {
            orbit_steps: 3,
            ..OmegaOptions::default()
        };
        assert!(matches!(omega_limit(&p, 0.3, short), Err(Error::NoApproach { .. })));
    }

    #[test]
    fn exponential_approach_from_a_gap() {
        let rho = (5f64.sqrt() - 1.0) / 2.0;
        let tol = SeriesTolerance::default();
        let d = delta_of_rho(0.95, 0.9, rho, tol).unwrap().value;
        let p = MapParams::new(0.95, 0.9, d).unwrap();
        let spec = ConjugationSpec::new(p, RotationValue::real(rho), tol).unwrap();
        let gaps = gaps_up_to(&p, rho, 8, tol).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in &gaps {
            let y0 = (g.index as f64 * rho).fract();
            for _ in 0..5 {
                let x = rng.gen_range(g.left..g.right);
                let orbit = forward_orbit(&p, x, 50);
                for k in 0..=50usize {
                    let y = y0 + k as f64 * rho;
                    // phi jumps at y itself; nudge right of the rounded argument
                    let target = phi_eval(&spec, SideReal::at(y + 1e-11)).unwrap();
                    let bound = 0.95f64.powi(k as i32) * 0.9f64.powi(y.floor() as i32) * (g.right - x);
                    let got = orbit.lift_point(k).value();
                    assert!((got - target).abs() <= bound + 1e-10, "l={} k={k}", g.index);
                }
            }
        }
    }
}
