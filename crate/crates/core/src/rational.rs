//! Exact fractions for rotation numbers and Stern-Brocot search.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// A non-negative reduced fraction `p/q` with `q >= 1`.
///
/// Used for Farey interval endpoints, which include `0/1` and `1/1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Fraction {
    p: u64,
    q: u64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { p: 0, q: 1 };
    pub const ONE: Fraction = Fraction { p: 1, q: 1 };

    /// Builds `p/q` in lowest terms. Panics on `q == 0`.
    pub fn new(p: u64, q: u64) -> Self {
        assert!(q > 0, "zero denominator");
        let g = p.gcd(&q);
        Self { p: p / g, q: q / g }
    }

    pub fn numer(&self) -> u64 {
        self.p
    }

    pub fn denom(&self) -> u64 {
        self.q
    }

    pub fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `b.p*a.q - a.p*b.q`, equal to 1 for Stern-Brocot neighbours `a < b`.
    pub fn determinant(a: &Fraction, b: &Fraction) -> i128 {
        b.p as i128 * a.q as i128 - a.p as i128 * b.q as i128
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p as u128 * other.q as u128).cmp(&(other.p as u128 * self.q as u128))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// A rotation number `p/q` in lowest terms with `0 < p/q < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "RotSer")]
pub struct RationalRot(Fraction);

#[derive(Serialize)]
struct RotSer {
    p: u64,
    q: u64,
}

impl From<RationalRot> for RotSer {
    fn from(r: RationalRot) -> Self {
        RotSer { p: r.p(), q: r.q() }
    }
}

impl RationalRot {
    /// Requires `gcd(p, q) = 1` and `0 < p < q`.
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q <= p || p.gcd(&q) != 1 {
            return Err(Error::InvalidRational { p, q });
        }
        Ok(Self(Fraction { p, q }))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn fraction(&self) -> Fraction {
        self.0
    }

    /// `floor(k*p/q)` computed exactly.
    pub fn floor_mul(&self, k: i64) -> i64 {
        floor_div(k as i128 * self.p() as i128, self.q() as i128) as i64
    }

    /// The inverse of `p` modulo `q` in `[0, q)`.
    pub fn inverse_p_mod_q(&self) -> u64 {
        let e = (self.p() as i64).extended_gcd(&(self.q() as i64));
        e.x.rem_euclid(self.q() as i64) as u64
    }
}

impl TryFrom<Fraction> for RationalRot {
    type Error = Error;

    fn try_from(f: Fraction) -> Result<Self> {
        RationalRot::new(f.p, f.q)
    }
}

impl fmt::Display for RationalRot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl std::str::FromStr for RationalRot {
    type Err = Error;

    /// Parses `"p/q"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRational { p: 0, q: 0 };
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        RationalRot::new(p, q)
    }
}

/// `floor(a/b)` for `b > 0`.
pub fn floor_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

/// `ceil(a/b)` for `b > 0`.
pub fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

/// The Farey mediant `(a.p + b.p)/(a.q + b.q)` of `a < b`, in lowest terms.
pub fn farey_mediant(a: Fraction, b: Fraction) -> Result<Fraction> {
    if a >= b {
        return Err(Error::UnorderedFarey {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let p = a.p.checked_add(b.p).ok_or(Error::Overflow)?;
    let q = a.q.checked_add(b.q).ok_or(Error::Overflow)?;
    Ok(Fraction::new(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mediant_examples() {
        let m = |a: (u64, u64), b: (u64, u64)| {
            farey_mediant(Fraction::new(a.0, a.1), Fraction::new(b.0, b.1)).unwrap()
        };
        assert_eq!(m((0, 1), (1, 1)), Fraction::new(1, 2));
        assert_eq!(m((1, 3), (1, 2)), Fraction::new(2, 5));
        assert_eq!(m((1, 2), (1, 1)), Fraction::new(2, 3));
    }

    #[test]
    fn mediant_errors() {
        assert!(matches!(
            farey_mediant(Fraction::ONE, Fraction::ZERO),
            Err(Error::UnorderedFarey { .. })
        ));
        let big = Fraction::new(u64::MAX - 1, u64::MAX);
        assert_eq!(farey_mediant(Fraction::new(1, 2), big), Err(Error::Overflow));
    }

    #[test]
    fn rational_rot_validation() {
        assert!(RationalRot::new(1, 2).is_ok());
        assert!(RationalRot::new(2, 4).is_err());
        assert!(RationalRot::new(0, 1).is_err());
        assert!(RationalRot::new(1, 1).is_err());
        assert!(RationalRot::new(3, 2).is_err());
        assert_eq!("3/7".parse::<RationalRot>().unwrap(), RationalRot::new(3, 7).unwrap());
        assert!("3:7".parse::<RationalRot>().is_err());
    }

    #[test]
    fn floors_and_inverse() {
        let r = RationalRot::new(2, 3).unwrap();
        assert_eq!(r.floor_mul(4), 2);
        assert_eq!(r.floor_mul(-1), -1);
        assert_eq!(ceil_div(-2, 3), 0);
        assert_eq!(ceil_div(4, 3), 2);
        assert_eq!(RationalRot::new(3, 8).unwrap().inverse_p_mod_q(), 3);
        assert_eq!(RationalRot::new(1, 2).unwrap().inverse_p_mod_q(), 1);
    }

    proptest! {
        // Walk the Stern-Brocot tree along random left/right choices.
        #[test]
        fn mediant_keeps_unit_determinant(path in proptest::collection::vec(any::<bool>(), 1..40)) {
            let (mut lo, mut hi) = (Fraction::ZERO, Fraction::ONE);
            for go_right in path {
                let m = farey_mediant(lo, hi).unwrap();
                prop_assert!(lo < m && m < hi);
                prop_assert_eq!(Fraction::determinant(&lo, &m), 1);
                prop_assert_eq!(Fraction::determinant(&m, &hi), 1);
                if go_right { lo = m } else { hi = m }
            }
        }
    }
}
