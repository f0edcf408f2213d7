//! Hecke-Mahler series and the staircase `delta(lambda, mu, rho)`.

pub mod extended;
mod phi;
mod sigma;
mod staircase;
mod tolerance;

pub use phi::{phi_series, phi_series_rational};
pub use sigma::{period_factor, psi, s_sum, sigma, sigma_rational};
pub use staircase::{delta_from_sigma, delta_of_rho, delta_order, delta_plateau, delta_rational, Plateau};
pub use tolerance::{SeriesEval, SeriesTolerance};

pub(crate) use sigma::{check_rational, check_rho};
