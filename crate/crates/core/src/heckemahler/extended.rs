//! Extended-precision evaluation of `sigma` and `delta(lambda, mu, rho)`.
//!
//! Near the convergence boundary the series need many terms and the floors
//! `floor(k rho)` need `rho` to more than 53 bits. Here `rho`, the partial
//! sums and the powers carry a configurable binary precision; `lambda` and
//! `mu` are taken exactly from their doubles.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

use crate::error::{Error, Result};
use crate::rational::RationalRot;

use super::sigma::{check_rational, check_rho};
use super::staircase::Plateau;
use super::tolerance::{SeriesEval, SeriesTolerance};

/// Binary floating point with round-half-even.
pub type ExtFloat = FBig<HalfEven>;

/// Smallest accepted precision in bits.
pub const MIN_PRECISION: usize = 53;

fn check_precision(bits: usize) -> Result<()> {
    if bits < MIN_PRECISION {
        return Err(Error::InvalidTolerance(format!(
            "precision must be at least {MIN_PRECISION} bits (got {bits})"
        )));
    }
    Ok(())
}

/// Exact conversion of a double, widened to `bits`.
pub fn ext_from_f64(x: f64, bits: usize) -> Result<ExtFloat> {
    let v = ExtFloat::try_from(x).map_err(|_| Error::NotFinite { name: "value" })?;
    Ok(v.with_precision(bits).value())
}

/// `(sqrt(5) - 1)/2` to `bits` of precision.
pub fn golden_conjugate(bits: usize) -> ExtFloat {
    let five = ExtFloat::from(5u8).with_precision(bits + 8).value();
    let g = (five.sqrt() - ExtFloat::ONE) / ExtFloat::from(2u8);
    g.with_precision(bits).value()
}

fn sigma_ext(lambda: f64, mu: f64, rho: &ExtFloat, bits: usize, tol: SeriesTolerance) -> Result<(ExtFloat, usize, f64)> {
    check_precision(bits)?;
    let rho_f = rho.to_f64().value();
    let decay = check_rho(lambda, mu, rho_f)?;
    let scale = 1.0_f64.max(1.0 / mu);
    let lam = ext_from_f64(lambda, bits)?;
    let mu_e = ext_from_f64(mu, bits)?;
    let rho = rho.clone().with_precision(bits).value();
    let floor_of = |t: &ExtFloat| -> Result<i64> {
        i64::try_from(t.floor().to_int().value())
            .map_err(|_| Error::PrecisionExhausted("floor(k rho) exceeds i64".into()))
    };

    let mut sum = ExtFloat::ZERO.with_precision(bits).value();
    let mut power = ExtFloat::ONE.with_precision(bits).value();
    let mut k_rho = rho.clone();
    let mut floor_k = 0_i64;
    let mut decay_pow = decay;
    for k in 1..=tol.max_terms() {
        power = &power * &lam;
        let next = floor_of(&k_rho)?;
        for _ in floor_k..next {
            power = &power * &mu_e;
        }
        floor_k = next;
        k_rho = &k_rho + &rho;
        if floor_of(&k_rho)? > floor_k {
            sum = &sum + &power;
        }
        decay_pow *= decay;
        let tail = scale * decay_pow / (1.0 - decay);
        if tail < tol.abs_tol() {
            return Ok((sum, k, tail));
        }
    }
    Err(Error::MaxTermsExhausted {
        max_terms: tol.max_terms(),
        tail: scale * decay_pow / (1.0 - decay),
        abs_tol: tol.abs_tol(),
    })
}

/// `sigma(lambda, mu, rho)` summed at `bits` of precision.
pub fn sigma_extended(lambda: f64, mu: f64, rho: &ExtFloat, bits: usize, tol: SeriesTolerance) -> Result<SeriesEval> {
    let (value, terms, tail_bound) = sigma_ext(lambda, mu, rho, bits, tol)?;
    Ok(SeriesEval {
        value: value.to_f64().value(),
        terms,
        tail_bound,
    })
}

/// `delta(lambda, mu, rho)` with `sigma` and the final quotient at `bits` of
/// precision, rounded once to a double.
pub fn delta_of_rho_extended(lambda: f64, mu: f64, rho: &ExtFloat, bits: usize, tol: SeriesTolerance) -> Result<SeriesEval> {
    let (s, terms, tail_bound) = sigma_ext(lambda, mu, rho, bits, tol)?;
    let lam = ext_from_f64(lambda, bits)?;
    let mu_e = ext_from_f64(mu, bits)?;
    let one = ExtFloat::ONE.with_precision(bits).value();
    let num = (&one - &lam) * (&one + &mu_e * &s);
    let den = &one + (&mu_e - &one) * &s;
    Ok(SeriesEval {
        value: (num / den).to_f64().value(),
        terms,
        tail_bound,
    })
}

/// Plateau endpoints of a rational rotation number at extended precision.
#[derive(Debug, Clone, PartialEq)]
pub struct PlateauBounds {
    pub rot: RationalRot,
    pub left: ExtFloat,
    pub right: ExtFloat,
}

impl PlateauBounds {
    /// The plateau with both endpoints correctly rounded to doubles.
    pub fn to_plateau(&self) -> Plateau {
        Plateau {
            rot: self.rot,
            delta_left: self.left.to_f64().value(),
            delta_right: self.right.to_f64().value(),
        }
    }

    /// The double nearest to the midpoint.
    pub fn midpoint(&self) -> f64 {
        ((&self.left + &self.right) / ExtFloat::from(2u8)).to_f64().value()
    }

    /// Whether the double `delta` lies strictly inside, compared exactly.
    pub fn strictly_contains(&self, delta: f64) -> bool {
        let Ok(d) = ExtFloat::try_from(delta) else { return false };
        self.left < d && d < self.right
    }

    /// Whether the double `delta` is at most the left endpoint, compared exactly.
    pub fn lies_below(&self, delta: f64) -> bool {
        ExtFloat::try_from(delta).is_ok_and(|d| d <= self.left)
    }
}

/// [`delta_plateau`](super::delta_plateau) at `bits` of precision. Costs
/// `O(q)` extended operations.
pub fn plateau_extended(lambda: f64, mu: f64, rot: RationalRot, bits: usize) -> Result<PlateauBounds> {
    check_precision(bits)?;
    check_rational(lambda, mu, rot)?;
    let lam = ext_from_f64(lambda, bits)?;
    let mu_e = ext_from_f64(mu, bits)?;
    let one = ExtFloat::ONE.with_precision(bits).value();
    let (p, q) = (rot.p() as i64, rot.q() as i64);

    let mut s = ExtFloat::ZERO.with_precision(bits).value();
    let mut power = one.clone();
    let mut floor_k = 0_i64;
    for k in 1..q - 1 {
        power = &power * &lam;
        let next = rot.floor_mul(k);
        if next > floor_k {
            power = &power * &mu_e;
            floor_k = next;
        }
        if rot.floor_mul(k + 1) > floor_k {
            s = &s + &power;
        }
    }
    let mut a = one.clone();
    for _ in 0..q - 1 {
        a = &a * &lam;
    }
    for _ in 0..p - 1 {
        a = &a * &mu_e;
    }
    let one_minus_lam = &one - &lam;
    let mu_s = &mu_e * &s;
    let shifted_s = (&mu_e - &one) * &s;
    let right = &one_minus_lam * (&one + &mu_s + &a * &mu_e * &one_minus_lam)
        / (&one + &shifted_s + &a * (&mu_e - &lam * &mu_e - &one));
    let left = &one_minus_lam * (&one + &mu_s) / (&one + &shifted_s - &a * &lam);
    Ok(PlateauBounds { rot, left, right })
}
