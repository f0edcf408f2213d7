//! The staircase `rho -> delta(lambda, mu, rho)` and its plateaus.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::Result;
use crate::numeric::pow2;
use crate::rational::RationalRot;
use crate::side::Side;

use super::sigma::{check_rational, s_sum, sigma, sigma_order};
use super::tolerance::{SeriesEval, SeriesTolerance};

/// The closed interval of `delta` on which the rotation number is `rot`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plateau {
    pub rot: RationalRot,
    /// `delta(lambda, mu, (p/q)-)`.
    pub delta_left: f64,
    /// `delta(lambda, mu, p/q)`.
    pub delta_right: f64,
}

impl Plateau {
    pub fn contains(&self, delta: f64) -> bool {
        self.delta_left <= delta && delta <= self.delta_right
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.delta_left + self.delta_right)
    }

    pub fn width(&self) -> f64 {
        self.delta_right - self.delta_left
    }
}

/// `(1 - lambda)(1 + mu*sigma)/(1 + (mu - 1)*sigma)`.
pub fn delta_from_sigma(lambda: f64, mu: f64, sigma: f64) -> f64 {
    (1.0 - lambda) * (1.0 + mu * sigma) / (1.0 + (mu - 1.0) * sigma)
}

/// `delta(lambda, mu, rho)` for real `0 < rho < r_bound`.
///
/// The returned diagnostics are those of the underlying `sigma` evaluation.
pub fn delta_of_rho(lambda: f64, mu: f64, rho: f64, tol: SeriesTolerance) -> Result<SeriesEval> {
    let s = sigma(lambda, mu, rho, tol)?;
    Ok(SeriesEval {
        value: delta_from_sigma(lambda, mu, s.value),
        ..s
    })
}

/// Certified order of `delta(lambda, mu, rho_a)` and `delta(lambda, mu,
/// rho_b)`.
///
/// `delta` increases with `sigma`, and the `sigma` values are compared
/// after rescaling by the first term where the two series differ, so
/// differences below `1e-300` are still resolved. `None` means undecided
/// within `max_terms` terms.
pub fn delta_order(lambda: f64, mu: f64, rho_a: f64, rho_b: f64, max_terms: usize) -> Result<Option<Ordering>> {
    sigma_order(lambda, mu, rho_a, rho_b, max_terms)
}

/// `delta` at a rational rotation number from the closed forms: `AtPoint`
/// (equal to the right limit) gives `delta_right`, `LeftLimit` gives
/// `delta_left`.
pub fn delta_rational(lambda: f64, mu: f64, rot: RationalRot, side: Side) -> Result<f64> {
    let plateau = delta_plateau(lambda, mu, rot)?;
    Ok(match side {
        Side::LeftLimit => plateau.delta_left,
        Side::AtPoint | Side::RightLimit => plateau.delta_right,
    })
}

/// Both plateau endpoints of `rot`, with exact integer floors in `S`.
pub fn delta_plateau(lambda: f64, mu: f64, rot: RationalRot) -> Result<Plateau> {
    check_rational(lambda, mu, rot)?;
    let (p, q) = (rot.p() as i64, rot.q() as i64);
    let s = s_sum(lambda, mu, rot);
    let a = pow2(lambda, q - 1, mu, p - 1);
    let delta_right = (1.0 - lambda) * (1.0 + mu * s + a * mu * (1.0 - lambda))
        / (1.0 + (mu - 1.0) * s + a * (mu - lambda * mu - 1.0));
    let delta_left = (1.0 - lambda) * (1.0 + mu * s) / (1.0 + (mu - 1.0) * s - a * lambda);
    Ok(Plateau {
        rot,
        delta_left,
        delta_right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{d_bound, r_bound};
    use crate::heckemahler::sigma_rational;
    use proptest::prelude::*;

    fn rot(p: u64, q: u64) -> RationalRot {
        RationalRot::new(p, q).unwrap()
    }

    #[test]
    fn order_below_double_resolution() {
        // the two series first differ at k = 256: about 2^-300 apart
        let (a, b) = (1.0 / 256.5, 1.0 / 255.5);
        let tol = SeriesTolerance::default();
        let da = delta_of_rho(0.5, 0.5, a, tol).unwrap().value;
        let db = delta_of_rho(0.5, 0.5, b, tol).unwrap().value;
        assert_eq!(da, db);
        assert_eq!(delta_order(0.5, 0.5, a, b, 100_000).unwrap(), Some(Ordering::Less));
        assert_eq!(delta_order(0.5, 0.5, b, a, 100_000).unwrap(), Some(Ordering::Greater));
        assert_eq!(delta_order(0.5, 0.5, a, a, 10).unwrap(), Some(Ordering::Equal));
        assert_eq!(delta_order(0.9, 0.8, 0.3, 0.31, 100_000).unwrap(), Some(Ordering::Less));
    }

    proptest! {
        #[test]
        fn order_agrees_with_resolved_values(a in 0.05f64..0.95, b in 0.05f64..0.95) {
            let tol = SeriesTolerance::new(1e-17, 10_000_000).unwrap();
            let da = delta_of_rho(0.9, 0.8, a, tol).unwrap().value;
            let db = delta_of_rho(0.9, 0.8, b, tol).unwrap().value;
            prop_assume!((da - db).abs() > 1e-13);
            let ord = delta_order(0.9, 0.8, a, b, 1_000_000).unwrap();
            prop_assert_eq!(ord, da.partial_cmp(&db));
        }
    }

    #[test]
    fn half_plateau_for_half_half() {
        let pl = delta_plateau(0.5, 0.5, rot(1, 2)).unwrap();
        assert!((pl.delta_left - 2.0 / 3.0).abs() < 1e-15);
        assert!((pl.delta_right - 0.9).abs() < 1e-15);
        // oracle: the real-argument staircase just below and just above 1/2
        let tol = SeriesTolerance::default();
        let below = delta_of_rho(0.5, 0.5, 0.5 - 1e-9, tol).unwrap().value;
        let above = delta_of_rho(0.5, 0.5, 0.5 + 1e-9, tol).unwrap().value;
        assert!((below - 2.0 / 3.0).abs() < 1e-9);
        assert!((above - 0.9).abs() < 1e-9);
    }

    #[test]
    fn golden_ratio_value() {
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let d = delta_of_rho(0.95, 0.9, golden, SeriesTolerance::default()).unwrap();
        assert!((d.value - 0.6617).abs() < 5e-5);
        assert!(d.tail_bound < 1e-12);
    }

    #[test]
    fn mu_one_is_contracted_rotation() {
        let tol = SeriesTolerance::default();
        let s = sigma(0.7, 1.0, 0.3, tol).unwrap().value;
        let d = delta_of_rho(0.7, 1.0, 0.3, tol).unwrap().value;
        assert!((d - 0.3 * (1.0 + s)).abs() < 1e-15);
    }

    #[test]
    fn left_endpoint_via_left_sigma() {
        for &(lambda, mu) in &[(0.5, 0.5), (0.9, 0.8), (0.9, 2.0)] {
            for &(p, q) in &[(1, 3), (1, 8), (2, 13)] {
                let r = rot(p, q);
                let Ok(pl) = delta_plateau(lambda, mu, r) else { continue };
                let s_left = sigma_rational(lambda, mu, r, Side::LeftLimit).unwrap();
                let s_at = sigma_rational(lambda, mu, r, Side::AtPoint).unwrap();
                assert!((pl.delta_left - delta_from_sigma(lambda, mu, s_left)).abs() < 1e-14);
                assert!((pl.delta_right - delta_from_sigma(lambda, mu, s_at)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn left_discontinuity() {
        let tol = SeriesTolerance::default();
        let pl = delta_plateau(0.9, 0.8, rot(1, 3)).unwrap();
        let below = delta_of_rho(0.9, 0.8, 1.0 / 3.0 - 1e-10, tol).unwrap().value;
        assert!((below - pl.delta_left).abs() < 1e-8);
        assert!(pl.delta_right - below > 1e-3);
    }

    fn farey(max_q: u64) -> Vec<RationalRot> {
        (2..=max_q)
            .flat_map(|q| (1..q).filter_map(move |p| RationalRot::new(p, q).ok()))
            .collect()
    }

    proptest! {
        #[test]
        fn delta_in_range(lambda in 0.05f64..0.95, mu in 0.1f64..3.0, t in 0.01f64..0.95) {
            let rho = t * r_bound(lambda, mu);
            let tol = SeriesTolerance::new(1e-12, 5_000_000).unwrap();
            let d = delta_of_rho(lambda, mu, rho, tol).unwrap().value;
            prop_assert!(d >= 1.0 - lambda && d < d_bound(lambda, mu));
            // strictness on the left is only visible once sigma is above rounding level
            if sigma(lambda, mu, rho, tol).unwrap().value > 1e-12 {
                prop_assert!(d > 1.0 - lambda);
            }
        }

        #[test]
        fn plateaus_ordered_by_rotation(
            lambda in 0.2f64..0.95,
            mu in 0.2f64..2.5,
            a in proptest::sample::select(farey(12)),
            b in proptest::sample::select(farey(12)),
        ) {
            prop_assume!(a != b);
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            let (Ok(lo), Ok(hi)) = (delta_plateau(lambda, mu, a), delta_plateau(lambda, mu, b)) else {
                return Ok(());
            };
            prop_assert!(lo.delta_left < lo.delta_right);
            prop_assert!(lo.delta_right < hi.delta_left);
        }
    }
}
