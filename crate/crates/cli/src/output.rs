//! Envelope, number formatting and the two output formats.

use std::io::Write;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Number, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Numerical bookkeeping attached to every result.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_terms: Option<usize>,
    /// Largest number of series terms over all evaluations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    /// Largest tail bound over all evaluations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
    /// Tolerance of a non-series check (cycle closure, gap cross-check).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl Diagnostics {
    pub fn series(tol: pwaffine::heckemahler::SeriesTolerance) -> Self {
        Self {
            abs_tol: Some(tol.abs_tol()),
            max_terms: Some(tol.max_terms()),
            ..Self::default()
        }
    }

    /// Folds one evaluation into the running maxima.
    pub fn record(&mut self, eval: &pwaffine::heckemahler::SeriesEval) {
        self.terms = Some(self.terms.unwrap_or(0).max(eval.terms));
        self.tail_bound = Some(self.tail_bound.unwrap_or(0.0).max(eval.tail_bound));
    }
}

#[derive(Debug, Serialize)]
pub struct Envelope {
    pub command: &'static str,
    pub params: Value,
    pub result: Value,
    pub diagnostics: Diagnostics,
}

/// Header plus rows, already formatted.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// A command's output in both renderings.
pub struct Report {
    pub envelope: Envelope,
    pub table: Table,
}

/// `x` with 17 significant digits, trailing zeros dropped.
///
/// Plain notation for exponents in `-5..17`, scientific otherwise; the
/// result always parses back to the same double.
pub fn fmt_f64(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0" } else { "0.0" }.into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = mantissa.strip_prefix('-').map_or(("", mantissa), |m| ("-", m));
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    if !(-5..17).contains(&exp) {
        let (lead, rest) = digits.split_at(1);
        let rest = if rest.is_empty() { "0" } else { rest };
        return format!("{sign}{lead}.{rest}e{exp}");
    }
    if exp < 0 {
        let zeros = "0".repeat((-exp - 1) as usize);
        return format!("{sign}0.{zeros}{digits}");
    }
    let int_len = exp as usize + 1;
    if digits.len() <= int_len {
        format!("{sign}{digits}{}.0", "0".repeat(int_len - digits.len()))
    } else {
        let (int, frac) = digits.split_at(int_len);
        format!("{sign}{int}.{frac}")
    }
}

/// Rewrites every floating-point number in `value` through [`fmt_f64`].
fn normalize(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("finite float");
            Value::Number(Number::from_str(&fmt_f64(x)).expect("valid JSON number"))
        }
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Output(e.to_string()))
}

pub fn render_json(envelope: &Envelope) -> Result<String, CliError> {
    let value = normalize(to_value(envelope)?);
    serde_json::to_string_pretty(&value).map_err(|e| CliError::Output(e.to_string()))
}

pub fn write_csv<W: Write>(table: &Table, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let fail = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(&table.header).map_err(fail)?;
    for row in &table.rows {
        w.write_record(row).map_err(fail)?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))
}

pub fn emit(report: &Report, format: Format) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    match format {
        Format::Json => {
            let text = render_json(&report.envelope)?;
            writeln!(stdout.lock(), "{text}").map_err(|e| CliError::Output(e.to_string()))
        }
        Format::Csv => write_csv(&report.table, stdout.lock()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formatting_examples() {
        assert_eq!(fmt_f64(0.5), "0.5");
        assert_eq!(fmt_f64(0.9), "0.90000000000000002");
        assert_eq!(fmt_f64(1.0 / 14.0), "0.071428571428571425");
        assert_eq!(fmt_f64(-3.0), "-3.0");
        assert_eq!(fmt_f64(1e-12), "9.9999999999999998e-13");
        assert_eq!(fmt_f64(1e20), "1.0e20");
        assert_eq!(fmt_f64(123.25), "123.25");
    }

    #[test]
    fn normalize_leaves_integers() {
        let v = normalize(serde_json::json!({"p": 1, "x": [0.25, 2.0]}));
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"p":1,"x":[0.25,2.0]}"#);
    }

    proptest! {
        #[test]
        fn round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }
}
