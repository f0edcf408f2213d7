//! Dynamics of the two-interval piecewise affine map
//! `f(x) = lambda*x + delta` on `[0, eta)`, `mu*(lambda*x + delta - 1)` on
//! `[eta, 1)`: rotation numbers, the staircase `delta(lambda, mu, rho)`, the
//! conjugation to a rotation, and the limit set.

pub mod conjugation;
pub mod dynamics;
pub mod error;
pub mod heckemahler;
pub mod limitset;
pub mod numeric;
pub mod params;
pub mod rational;
pub mod rotation;
pub mod side;

pub use error::{Error, Result};
pub use params::{d_bound, decay_rate, eta, r_bound, validate_params, MapParams};
pub use rational::{farey_mediant, Fraction, RationalRot};
pub use side::{Side, SideReal};
