//! The parameter triple `(lambda, mu, delta)` and its derived quantities.
//!
//! The map is
//!
//! ```text
//! f(x) = lambda*x + delta            for 0 <= x < eta
//! f(x) = mu*(lambda*x + delta - 1)   for eta <= x < 1
//! ```
//!
//! with `eta = (1 - delta)/lambda`. Both branches are increasing, with slopes
//! `lambda` and `lambda*mu`, and `f` is injective on `[0, 1)` exactly when
//! `delta` stays below [`d_bound`].

use serde::Serialize;

use crate::error::{Error, Result};

/// Validated map parameters. Construct through [`MapParams::new`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapParams {
    lambda: f64,
    mu: f64,
    delta: f64,
    #[serde(skip)]
    eta: f64,
}

impl MapParams {
    /// Validates `0 < lambda < 1`, `mu > 0` and `1 - lambda < delta < d_bound(lambda, mu)`.
    ///
    /// All comparisons are exact: there is no slack on either side.
    pub fn new(lambda: f64, mu: f64, delta: f64) -> Result<Self> {
        check_lambda_mu(lambda, mu)?;
        if !delta.is_finite() {
            return Err(Error::NotFinite { name: "delta" });
        }
        let lower = 1.0 - lambda;
        if delta <= lower {
            return Err(Error::DeltaTooSmall { delta, lower });
        }
        let upper = d_bound(lambda, mu);
        if delta == upper && lambda * mu > 1.0 {
            return Err(Error::BijectiveBoundary(delta));
        }
        if delta >= upper {
            return Err(Error::DeltaTooLarge { delta, upper });
        }
        Ok(Self {
            lambda,
            mu,
            delta,
            eta: (1.0 - delta) / lambda,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The break point `(1 - delta)/lambda`, always in `(0, 1)`.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn d_bound(&self) -> f64 {
        d_bound(self.lambda, self.mu)
    }

    pub fn r_bound(&self) -> f64 {
        r_bound(self.lambda, self.mu)
    }

    /// `mu*(lambda + delta - 1)`, the left limit `f(1-)` and the left end of the
    /// hole `[f(1-), f(0))` missed by `f`.
    pub fn f_one_minus(&self) -> f64 {
        self.mu * (self.lambda + self.delta - 1.0)
    }

    /// `(lambda + delta - 1)/lambda`, the coefficient shared by the conjugation
    /// series and the closed-form orbit.
    pub fn orbit_coefficient(&self) -> f64 {
        (self.lambda + self.delta - 1.0) / self.lambda
    }

    /// Width of the hole `delta - mu*(lambda + delta - 1)`; positive by injectivity.
    pub fn hole_width(&self) -> f64 {
        self.delta - self.f_one_minus()
    }
}

/// Shorthand for [`MapParams::new`].
pub fn validate_params(lambda: f64, mu: f64, delta: f64) -> Result<MapParams> {
    MapParams::new(lambda, mu, delta)
}

/// `(1 - delta)/lambda`.
pub fn eta(params: &MapParams) -> f64 {
    params.eta()
}

pub(crate) fn check_lambda_mu(lambda: f64, mu: f64) -> Result<()> {
    if !lambda.is_finite() {
        return Err(Error::NotFinite { name: "lambda" });
    }
    if !mu.is_finite() {
        return Err(Error::NotFinite { name: "mu" });
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    if mu <= 0.0 {
        return Err(Error::MuOutOfRange(mu));
    }
    Ok(())
}

/// Upper bound on `delta` for injectivity: `1` when `lambda*mu < 1`, otherwise
/// `mu*(1 - lambda)/(mu - 1)`.
///
/// `lambda*mu >= 1` forces `mu > 1`, so the division is safe.
pub fn d_bound(lambda: f64, mu: f64) -> f64 {
    if lambda * mu < 1.0 {
        1.0
    } else {
        mu * (1.0 - lambda) / (mu - 1.0)
    }
}

/// Supremum of admissible rotation numbers: `1` when `lambda*mu < 1`, otherwise
/// `-ln(lambda)/ln(mu)`. The series converge exactly for `rho < r_bound`.
pub fn r_bound(lambda: f64, mu: f64) -> f64 {
    if lambda * mu < 1.0 {
        1.0
    } else {
        -lambda.ln() / mu.ln()
    }
}

/// `lambda * mu^rho`, the geometric decay rate of every series in this crate.
pub fn decay_rate(lambda: f64, mu: f64, rho: f64) -> f64 {
    lambda * mu.powf(rho)
}
