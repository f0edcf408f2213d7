use serde::Serialize;

use crate::error::{Error, Result};

/// Truncation policy for the infinite series.
///
/// Summation stops once a rigorous bound on the remaining tail drops below
/// `abs_tol`; reaching `max_terms` first is an error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesTolerance {
    abs_tol: f64,
    max_terms: usize,
}

impl SeriesTolerance {
    pub const DEFAULT_ABS_TOL: f64 = 1e-12;
    pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol.is_finite() && abs_tol > 0.0) {
            return Err(Error::InvalidTolerance(format!(
                "abs_tol must be positive and finite (got {abs_tol})"
            )));
        }
        if max_terms == 0 {
            return Err(Error::InvalidTolerance("max_terms must be positive".into()));
        }
        Ok(Self { abs_tol, max_terms })
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for SeriesTolerance {
    fn default() -> Self {
        Self {
            abs_tol: Self::DEFAULT_ABS_TOL,
            max_terms: Self::DEFAULT_MAX_TERMS,
        }
    }
}

/// A truncated series value with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesEval {
    pub value: f64,
    /// Number of terms summed (0 for closed forms).
    pub terms: usize,
    /// Rigorous bound on the neglected tail (0 for closed forms).
    pub tail_bound: f64,
}
