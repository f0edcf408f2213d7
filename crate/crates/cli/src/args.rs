//! Command-line grammar.

use clap::{Args, Parser, Subcommand};
use serde::{Serialize, Serializer};

use pwaffine::heckemahler::extended::{ext_from_f64, golden_conjugate, ExtFloat};
use pwaffine::heckemahler::SeriesTolerance;
use pwaffine::{RationalRot, Side};

use crate::error::CliError;
use crate::output::Format;

/// Named constants accepted wherever a real is expected.
const NAMED: &[(&str, Named)] = &[("sqrt5m1over2", Named::GoldenConjugate)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Named {
    GoldenConjugate,
}

/// A real from the command line: a decimal, or a named constant that can
/// be expanded beyond double precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real {
    pub value: f64,
    pub named: Option<Named>,
}

impl Real {
    pub fn decimal(value: f64) -> Self {
        Self { value, named: None }
    }

    pub fn golden() -> Self {
        Self {
            value: (5f64.sqrt() - 1.0) / 2.0,
            named: Some(Named::GoldenConjugate),
        }
    }

    pub fn extended(&self, bits: usize) -> pwaffine::Result<ExtFloat> {
        match self.named {
            Some(Named::GoldenConjugate) => Ok(golden_conjugate(bits)),
            None => ext_from_f64(self.value, bits),
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.value)
    }
}

fn parse_real(s: &str) -> Result<Real, String> {
    let s = s.trim();
    if let Some((_, named)) = NAMED.iter().find(|(name, _)| *name == s) {
        return Ok(match named {
            Named::GoldenConjugate => Real::golden(),
        });
    }
    let value: f64 = s
        .parse()
        .map_err(|_| format!("{s:?} is neither a decimal nor one of: sqrt5m1over2"))?;
    if !value.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(Real::decimal(value))
}

fn parse_rational(s: &str) -> Result<RationalRot, String> {
    s.parse::<RationalRot>().map_err(|e| format!("{s:?}: {e}"))
}

#[derive(Debug, Parser)]
#[command(name = "pwaffine", version, about = "Rotation numbers, conjugacies and limit sets of two-interval piecewise affine maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Report wall-clock time in the diagnostics (breaks byte-identical output).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rotation number of f, exact when rational.
    Rho(RhoArgs),
    /// delta(lambda, mu, rho), or the plateau of a rational rho.
    Delta(DeltaArgs),
    /// The conjugacy phi at the given points.
    Phi(PhiArgs),
    /// Lifted orbit and itinerary.
    Orbit(OrbitArgs),
    /// Gaps of the limit set for irrational rho.
    Gaps(GapsArgs),
    /// The periodic cycle for rational rho.
    Cycle(CycleArgs),
    /// The iterated image f^n([0, 1)).
    Images(ImagesArgs),
    /// Samples of rho -> delta(lambda, mu, rho).
    PlotDelta(PlotDeltaArgs),
    /// Samples of y -> phi(y) on [0, 1].
    PlotPhi(PlotPhiArgs),
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct MapArgs {
    #[arg(long, value_parser = parse_real)]
    pub lambda: Real,
    #[arg(long, value_parser = parse_real)]
    pub mu: Real,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct SeriesArgs {
    /// Absolute truncation tolerance of the series.
    #[arg(long, default_value_t = SeriesTolerance::DEFAULT_ABS_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = SeriesTolerance::DEFAULT_MAX_TERMS)]
    pub max_terms: usize,
}

impl SeriesArgs {
    pub fn tolerance(&self) -> Result<SeriesTolerance, CliError> {
        Ok(SeriesTolerance::new(self.tol, self.max_terms)?)
    }
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct RotationArgs {
    /// Irrational rotation number.
    #[arg(long, visible_alias = "rho", value_parser = parse_real, conflicts_with = "rho_rational")]
    pub rho_real: Option<Real>,
    /// Rational rotation number p/q.
    #[arg(long, value_parser = parse_rational)]
    pub rho_rational: Option<RationalRot>,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct RhoArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub map: MapArgs,
    #[arg(long, value_parser = parse_real, required_unless_present = "sweep")]
    pub delta: Option<Real>,
    /// Largest denominator tried before reporting a bracket.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_den: u64,
    /// Orbit length of the floor(x_n)/n estimate.
    #[arg(long, visible_alias = "orbit-steps", default_value_t = 100_000)]
    pub steps: usize,
    /// Evaluate N values of delta evenly spread over the admissible range, in parallel.
    #[arg(long, value_name = "N", conflicts_with = "delta")]
    pub sweep: Option<usize>,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct DeltaArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub rotation: RotationArgs,
    /// One-sided value at a rational rho: at (right end of the plateau) or left.
    #[arg(long, default_value = "at")]
    pub side: Side,
    #[command(flatten)]
    #[serde(flatten)]
    pub series: SeriesArgs,
    /// Sum the series at this many bits instead of double precision.
    #[arg(long, value_name = "BITS")]
    pub precision: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PhiArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub map: MapArgs,
    /// Defaults to delta(rho), or the plateau midpoint for rational rho.
    #[arg(long, value_parser = parse_real)]
    pub delta: Option<Real>,
    #[command(flatten)]
    #[serde(flatten)]
    pub rotation: RotationArgs,
    /// Points to evaluate at.
    #[arg(long, required = true, num_args = 1.., allow_negative_numbers = true, value_parser = parse_real)]
    pub y: Vec<Real>,
    /// Evaluate phi(y-) instead of phi(y) with "left".
    #[arg(long, default_value = "at")]
    pub side: Side,
    /// Used when rho is derived from delta.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_den: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub series: SeriesArgs,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct OrbitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub map: MapArgs,
    #[arg(long, value_parser = parse_real)]
    pub delta: Real,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct GapsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub map: MapArgs,
    /// Defaults to delta(rho).
    #[arg(long, value_parser = parse_real)]
    pub delta: Option<Real>,
    #[arg(long, visible_alias = "rho", value_parser = parse_real)]
    pub rho_real: Real,
    #[arg(long, default_value_t = 20)]
    pub depth: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub series: SeriesArgs,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct CycleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub map: MapArgs,
    #[arg(long, value_parser = parse_real)]
    pub delta: Real,
    /// Found by exact search when omitted.
    #[arg(long, value_parser = parse_rational)]
    pub rho_rational: Option<RationalRot>,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_den: u64,
    /// Closure tolerance of the cycle check.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct ImagesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub map: MapArgs,
    #[arg(long, value_parser = parse_real)]
    pub delta: Real,
    #[arg(long, default_value_t = 4)]
    pub n: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_den: u64,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct PlotDeltaArgs {
    #[arg(long, value_parser = parse_real, default_value = "0.9")]
    pub lambda: Real,
    #[arg(long, value_parser = parse_real, default_value = "0.8")]
    pub mu: Real,
    /// Number of rho values, spread evenly inside (0, r_bound).
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub series: SeriesArgs,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct PlotPhiArgs {
    #[arg(long, value_parser = parse_real, default_value = "0.95")]
    pub lambda: Real,
    #[arg(long, value_parser = parse_real, default_value = "0.9")]
    pub mu: Real,
    /// Defaults to delta(rho), or the plateau midpoint for rational rho.
    #[arg(long, value_parser = parse_real)]
    pub delta: Option<Real>,
    #[arg(long, visible_alias = "rho", value_parser = parse_real, default_value = "sqrt5m1over2", conflicts_with = "rho_rational")]
    pub rho_real: Real,
    #[arg(long, value_parser = parse_rational)]
    pub rho_rational: Option<RationalRot>,
    /// Number of y values, spread evenly over [0, 1].
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub series: SeriesArgs,
}
