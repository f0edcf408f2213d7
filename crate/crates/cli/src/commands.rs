//! One function per subcommand, each returning a [`Report`].

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use pwaffine::conjugation::{phi_eval_detailed, ConjugationSpec};
use pwaffine::dynamics::forward_orbit;
use pwaffine::heckemahler::extended::{delta_of_rho_extended, plateau_extended};
use pwaffine::heckemahler::{delta_of_rho, delta_plateau, delta_rational, SeriesEval, SeriesTolerance};
use pwaffine::limitset::{
    cycle_points, fminus_cycle, gaps_up_to, iterated_image, measure_bound, total_gap_length, Arc, Gap,
    ITERATION_CHECK_TOL,
};
use pwaffine::rotation::{classify_boundary, rho_exact, rho_orbit_estimate, Boundary, PlateauPosition, RotationValue};
use pwaffine::{d_bound, r_bound, Fraction, MapParams, RationalRot, Side, SideReal};

use crate::args::{
    CycleArgs, DeltaArgs, GapsArgs, ImagesArgs, MapArgs, OrbitArgs, PhiArgs, PlotDeltaArgs, PlotPhiArgs, Real,
    RhoArgs,
};
use crate::error::CliError;
use crate::output::{fmt_f64, to_value, Diagnostics, Envelope, Report, Table};

type Outcome = Result<Report, CliError>;

fn params(map: &MapArgs, delta: Real) -> Result<MapParams, CliError> {
    Ok(MapParams::new(map.lambda.value, map.mu.value, delta.value)?)
}

fn report<P: Serialize, R: Serialize>(
    command: &'static str,
    params: &P,
    result: &R,
    diagnostics: Diagnostics,
    table: Table,
) -> Outcome {
    Ok(Report {
        envelope: Envelope {
            command,
            params: to_value(params)?,
            result: to_value(result)?,
            diagnostics,
        },
        table,
    })
}

fn opt_f64(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, Serialize)]
struct Estimate {
    value: f64,
    error_bound: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
struct RhoRow {
    delta: f64,
    /// `null` when no rational with denominator up to `max_den` matched.
    rotation: Option<RationalRot>,
    value: f64,
    error_bound: f64,
    plateau: Option<[f64; 2]>,
    boundary: Boundary,
    bracket: Option<[Fraction; 2]>,
    orbit_estimate: Estimate,
    search_depth: usize,
    resolution_limited: bool,
}

impl RhoRow {
    fn cells(&self) -> Vec<String> {
        vec![
            fmt_f64(self.delta),
            self.rotation.map(|r| r.p().to_string()).unwrap_or_default(),
            self.rotation.map(|r| r.q().to_string()).unwrap_or_default(),
            fmt_f64(self.value),
            to_value(&self.boundary)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default(),
            opt_f64(self.plateau.map(|p| p[0])),
            opt_f64(self.plateau.map(|p| p[1])),
        ]
    }
}

const RHO_HEADER: &[&str] = &["delta", "p", "q", "rho", "boundary", "delta_left", "delta_right"];

fn rho_row(map: &MapArgs, delta: f64, args: &RhoArgs) -> Result<RhoRow, CliError> {
    let p = MapParams::new(map.lambda.value, map.mu.value, delta)?;
    let res = rho_exact(&p, args.max_den)?;
    let est = rho_orbit_estimate(&p, args.steps);
    Ok(RhoRow {
        delta,
        rotation: res.value.as_rational(),
        value: res.value.value(),
        error_bound: res.value.error_bound(),
        plateau: res.plateau.map(|pl| [pl.delta_left, pl.delta_right]),
        boundary: res.boundary,
        bracket: res.evidence.bracket.map(|(lo, hi)| [lo, hi]),
        orbit_estimate: Estimate {
            value: est.value(),
            error_bound: est.error_bound(),
        },
        search_depth: res.evidence.search_depth,
        resolution_limited: res.evidence.resolution_limited,
    })
}

pub fn rho(args: &RhoArgs) -> Outcome {
    let mut table = Table::new(RHO_HEADER);
    let result = match (args.sweep, args.delta) {
        (Some(0), _) => return Err(CliError::Usage("--sweep needs at least one point".into())),
        (Some(n), _) => {
            let (lambda, mu) = (args.map.lambda.value, args.map.mu.value);
            let (lo, hi) = (1.0 - lambda, d_bound(lambda, mu));
            let rows = (1..=n)
                .into_par_iter()
                .map(|i| rho_row(&args.map, lo + (hi - lo) * i as f64 / (n + 1) as f64, args))
                .collect::<Result<Vec<_>, _>>()?;
            rows.iter().for_each(|r| table.push(r.cells()));
            to_value(&json!({ "points": rows }))?
        }
        (None, Some(delta)) => {
            let row = rho_row(&args.map, delta.value, args)?;
            table.push(row.cells());
            to_value(&row)?
        }
        (None, None) => return Err(CliError::Usage("--delta or --sweep is required".into())),
    };
    report("rho", args, &result, Diagnostics::default(), table)
}

pub fn delta(args: &DeltaArgs) -> Outcome {
    let (lambda, mu) = (args.map.lambda.value, args.map.mu.value);
    let tol = args.series.tolerance()?;
    let mut diag = Diagnostics::series(tol);
    diag.precision_bits = args.precision;
    match (args.rotation.rho_real, args.rotation.rho_rational) {
        (Some(rho), _) => {
            let eval = match args.precision {
                Some(bits) => delta_of_rho_extended(lambda, mu, &rho.extended(bits)?, bits, tol)?,
                None => delta_of_rho(lambda, mu, rho.value, tol)?,
            };
            diag.record(&eval);
            let mut table = Table::new(&["rho", "delta"]);
            table.push(vec![fmt_f64(rho.value), fmt_f64(eval.value)]);
            report("delta", args, &json!({ "rho": rho, "delta": eval.value }), diag, table)
        }
        (None, Some(rot)) => {
            let (plateau, value) = match args.precision {
                Some(bits) => {
                    let pl = plateau_extended(lambda, mu, rot, bits)?.to_plateau();
                    let v = match args.side {
                        Side::LeftLimit => pl.delta_left,
                        _ => pl.delta_right,
                    };
                    (pl, v)
                }
                None => (delta_plateau(lambda, mu, rot)?, delta_rational(lambda, mu, rot, args.side)?),
            };
            let mut table = Table::new(&["rho", "delta", "delta_left", "delta_right"]);
            table.push(vec![
                fmt_f64(rot.to_f64()),
                fmt_f64(value),
                fmt_f64(plateau.delta_left),
                fmt_f64(plateau.delta_right),
            ]);
            let result = json!({
                "rho": rot,
                "side": args.side,
                "delta": value,
                "plateau": [plateau.delta_left, plateau.delta_right],
            });
            report("delta", args, &result, diag, table)
        }
        (None, None) => Err(CliError::Usage("--rho-real or --rho-rational is required".into())),
    }
}

/// Fills in whichever of `delta` and `rho` is missing.
fn resolve(
    map: &MapArgs,
    delta: Option<Real>,
    rho_real: Option<Real>,
    rho_rational: Option<RationalRot>,
    max_den: u64,
    tol: SeriesTolerance,
    diag: &mut Diagnostics,
) -> Result<(MapParams, RotationValue), CliError> {
    let (lambda, mu) = (map.lambda.value, map.mu.value);
    match (delta, rho_real, rho_rational) {
        (d, Some(rho), _) => {
            let d = match d {
                Some(d) => d.value,
                None => {
                    let eval = delta_of_rho(lambda, mu, rho.value, tol)?;
                    diag.record(&eval);
                    eval.value
                }
            };
            Ok((MapParams::new(lambda, mu, d)?, RotationValue::real(rho.value)))
        }
        (d, None, Some(rot)) => {
            let d = match d {
                Some(d) => d.value,
                None => delta_plateau(lambda, mu, rot)?.midpoint(),
            };
            Ok((MapParams::new(lambda, mu, d)?, RotationValue::exact(rot)))
        }
        (Some(d), None, None) => {
            let p = params(map, d)?;
            match rho_exact(&p, max_den)?.value {
                exact @ RotationValue::Exact { .. } => Ok((p, exact)),
                RotationValue::Approx { .. } => Err(CliError::Usage(format!(
                    "no rational rotation number with denominator up to {max_den}; pass --rho-real"
                ))),
            }
        }
        (None, None, None) => Err(CliError::Usage("--delta or a rotation number is required".into())),
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
struct PhiPoint {
    y: f64,
    phi: f64,
}

/// Evaluates `phi` on sorted, deduplicated `ys` in parallel.
fn phi_points(spec: &ConjugationSpec, ys: &[f64], side: Side, diag: &mut Diagnostics) -> Result<Vec<PhiPoint>, CliError> {
    let evals = ys
        .par_iter()
        .map(|&y| phi_eval_detailed(spec, SideReal { value: y, side }))
        .collect::<Result<Vec<SeriesEval>, _>>()?;
    evals.iter().for_each(|e| diag.record(e));
    Ok(ys.iter().zip(&evals).map(|(&y, e)| PhiPoint { y, phi: e.value }).collect())
}

fn phi_report(
    command: &'static str,
    args: &impl Serialize,
    spec: &ConjugationSpec,
    points: Vec<PhiPoint>,
    diag: Diagnostics,
) -> Outcome {
    let mut table = Table::new(&["y", "phi"]);
    points.iter().for_each(|p| table.push(vec![fmt_f64(p.y), fmt_f64(p.phi)]));
    let result = json!({
        "rho": spec.rho(),
        "delta": spec.params().delta(),
        "eta": spec.params().eta(),
        "points": points,
    });
    report(command, args, &result, diag, table)
}

pub fn phi(args: &PhiArgs) -> Outcome {
    let tol = args.series.tolerance()?;
    let mut diag = Diagnostics::series(tol);
    let (p, rho) = resolve(
        &args.map,
        args.delta,
        args.rotation.rho_real,
        args.rotation.rho_rational,
        args.max_den,
        tol,
        &mut diag,
    )?;
    let spec = ConjugationSpec::new(p, rho, tol)?;
    let mut ys: Vec<f64> = args.y.iter().map(|r| r.value).collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let points = phi_points(&spec, &ys, args.side, &mut diag)?;
    phi_report("phi", args, &spec, points, diag)
}

#[derive(Debug, Clone, Copy, Serialize)]
struct OrbitPoint {
    k: usize,
    x: f64,
    /// `floor(x_{k+1}) - floor(x_k)`; absent for the last point.
    bit: Option<u8>,
}

pub fn orbit(args: &OrbitArgs) -> Outcome {
    let p = params(&args.map, args.delta)?;
    if !args.x0.is_finite() {
        return Err(pwaffine::Error::NotFinite { name: "x0" }.into());
    }
    let trace = forward_orbit(&p, args.x0, args.steps);
    let bits = trace.itinerary();
    let points: Vec<OrbitPoint> = (0..=trace.len())
        .map(|k| OrbitPoint {
            k,
            x: trace.point(k),
            bit: bits.get(k).map(|b| *b as u8),
        })
        .collect();
    let mut table = Table::new(&["k", "x", "bit"]);
    for pt in &points {
        table.push(vec![
            pt.k.to_string(),
            fmt_f64(pt.x),
            pt.bit.map(|b| b.to_string()).unwrap_or_default(),
        ]);
    }
    let n = trace.len().max(1);
    let winding = trace.floor_at(trace.len()) - trace.floor_at(0);
    let result = json!({
        "eta": p.eta(),
        "rotation_estimate": winding as f64 / n as f64,
        "points": points,
    });
    report("orbit", args, &result, Diagnostics::default(), table)
}

#[derive(Debug, Clone, Copy, Serialize)]
struct GapRow {
    #[serde(flatten)]
    gap: Gap,
    width: f64,
}

pub fn gaps(args: &GapsArgs) -> Outcome {
    let tol = args.series.tolerance()?;
    let mut diag = Diagnostics::series(tol);
    diag.check_tol = Some(ITERATION_CHECK_TOL);
    let (p, _) = resolve(&args.map, args.delta, Some(args.rho_real), None, 0, tol, &mut diag)?;
    let mut gaps = gaps_up_to(&p, args.rho_real.value, args.depth, tol)?;
    let total = total_gap_length(&gaps);
    gaps.sort_by_key(|g| g.index);
    let mut table = Table::new(&["l", "xi_left", "xi_right"]);
    gaps.iter()
        .for_each(|g| table.push(vec![g.index.to_string(), fmt_f64(g.left), fmt_f64(g.right)]));
    let rows: Vec<GapRow> = gaps.iter().map(|&gap| GapRow { gap, width: gap.width() }).collect();
    let result = json!({
        "rho": args.rho_real,
        "delta": p.delta(),
        "total_length": total,
        "gaps": rows,
    });
    report("gaps", args, &result, diag, table)
}

pub fn cycle(args: &CycleArgs) -> Outcome {
    let p = params(&args.map, args.delta)?;
    let rot = match args.rho_rational {
        Some(r) => r,
        None => rho_exact(&p, args.max_den)?.value.as_rational().ok_or_else(|| {
            pwaffine::Error::NoCycle(format!(
                "no rational rotation number with denominator up to {}",
                args.max_den
            ))
        })?,
    };
    let position = classify_boundary(&p, rot);
    let c = match position {
        PlateauPosition::RightEndpoint => fminus_cycle(&p, rot, args.tol)?,
        _ => cycle_points(&p, rot, args.tol)?,
    };
    let mut table = Table::new(&["m", "zeta"]);
    c.points
        .iter()
        .enumerate()
        .for_each(|(m, z)| table.push(vec![m.to_string(), fmt_f64(*z)]));
    let diag = Diagnostics {
        check_tol: Some(args.tol),
        ..Diagnostics::default()
    };
    let result = json!({
        "rotation": rot,
        "position": position,
        "map": c.map,
        "zeta": c.points,
    });
    report("cycle", args, &result, diag, table)
}

pub fn images(args: &ImagesArgs) -> Outcome {
    let p = params(&args.map, args.delta)?;
    let decomp = iterated_image(&p, args.n)?;
    let rotation = rho_exact(&p, args.max_den)?.value;
    let bound = rotation.as_rational().map(|r| measure_bound(&p, r, args.n));
    let mut table = Table::new(&["start", "end", "length"]);
    decomp.intervals.iter().for_each(|a: &Arc| {
        table.push(vec![fmt_f64(a.start), fmt_f64(a.end), fmt_f64(a.length)]);
    });
    let result = json!({
        "n": decomp.n,
        "rotation": rotation,
        "measure": decomp.measure,
        "measure_bound": bound,
        "intervals": decomp.intervals,
        "holes": decomp.holes,
    });
    report("images", args, &result, Diagnostics::default(), table)
}

pub fn plot_delta(args: &PlotDeltaArgs) -> Outcome {
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let (lambda, mu) = (args.lambda.value, args.mu.value);
    let tol = args.series.tolerance()?;
    let mut diag = Diagnostics::series(tol);
    let rb = r_bound(lambda, mu);
    let n = args.samples;
    let rhos: Vec<f64> = (1..=n).map(|i| rb * i as f64 / (n + 1) as f64).collect();
    let evals = rhos
        .par_iter()
        .map(|&rho| delta_of_rho(lambda, mu, rho, tol))
        .collect::<Result<Vec<_>, _>>()?;
    evals.iter().for_each(|e| diag.record(e));
    let mut table = Table::new(&["rho", "delta"]);
    let points: Vec<_> = rhos
        .iter()
        .zip(&evals)
        .map(|(&rho, e)| {
            table.push(vec![fmt_f64(rho), fmt_f64(e.value)]);
            json!({ "rho": rho, "delta": e.value })
        })
        .collect();
    report("plot-delta", args, &json!({ "points": points }), diag, table)
}

pub fn plot_phi(args: &PlotPhiArgs) -> Outcome {
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let tol = args.series.tolerance()?;
    let mut diag = Diagnostics::series(tol);
    let map = MapArgs {
        lambda: args.lambda,
        mu: args.mu,
    };
    let rho_real = args.rho_rational.is_none().then_some(args.rho_real);
    let (p, rho) = resolve(&map, args.delta, rho_real, args.rho_rational, 0, tol, &mut diag)?;
    let spec = ConjugationSpec::new(p, rho, tol)?;
    let n = args.samples;
    let ys: Vec<f64> = if n == 1 {
        vec![0.0]
    } else {
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    };
    let points = phi_points(&spec, &ys, Side::AtPoint, &mut diag)?;
    phi_report("plot-phi", args, &spec, points, diag)
}

