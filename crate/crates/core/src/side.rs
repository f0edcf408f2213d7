//! One-sided evaluation points.

use serde::{Deserialize, Serialize};

/// Which value of a piecewise function to take at a point.
///
/// Several functions in this crate jump at rational or integer points; the
/// side selects `g(x)`, `g(x-)` or `g(x+)` without nudging `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    #[default]
    AtPoint,
    LeftLimit,
    RightLimit,
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "at" | "at-point" => Ok(Side::AtPoint),
            "left" | "left-limit" => Ok(Side::LeftLimit),
            "right" | "right-limit" => Ok(Side::RightLimit),
            other => Err(format!("unknown side {other:?}; expected at, left or right")),
        }
    }
}

/// A real number together with the side from which it is approached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideReal {
    pub value: f64,
    pub side: Side,
}

impl SideReal {
    pub fn at(value: f64) -> Self {
        Self { value, side: Side::AtPoint }
    }

    pub fn left(value: f64) -> Self {
        Self { value, side: Side::LeftLimit }
    }

    pub fn right(value: f64) -> Self {
        Self { value, side: Side::RightLimit }
    }
}

impl From<f64> for SideReal {
    fn from(value: f64) -> Self {
        SideReal::at(value)
    }
}
