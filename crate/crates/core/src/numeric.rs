//! Small floating-point helpers shared by the series code.

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `x^n` for a signed integer exponent.
pub(crate) fn powi64(x: f64, n: i64) -> f64 {
    match i32::try_from(n) {
        Ok(n) => x.powi(n),
        Err(_) => x.powf(n as f64),
    }
}

/// `lambda^a * mu^b` through logarithms, which avoids spurious under- and
/// overflow when one factor is huge and the other tiny.
pub(crate) fn pow2(lambda: f64, a: i64, mu: f64, b: i64) -> f64 {
    if a.unsigned_abs() < 1000 && b.unsigned_abs() < 1000 {
        powi64(lambda, a) * powi64(mu, b)
    } else {
        (a as f64 * lambda.ln() + b as f64 * mu.ln()).exp()
    }
}

/// Distance between `a` and `b` on the circle `R/Z`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}
