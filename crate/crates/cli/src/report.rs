//! Report schema and its JSON / CSV encodings.
//!
//! Every report has the same top-level keys: `command`, `inputs`, `steps`,
//! `stokes`, `reconstruction`, `metrics`, `seed`. Keys that do not apply to a
//! command are `null`. Floats are written with 17 significant digits.

use std::io::{self, Write};

use qtomo_core::{ComplexMatrix, SampleEstimate, Strategy};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Inputs,
    pub steps: Option<Vec<StepReport>>,
    pub stokes: Option<StokesReport>,
    pub reconstruction: Option<ReconstructionReport>,
    pub metrics: Option<Metrics>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Inputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s3: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct StrategyReport {
    pub beta: f64,
    pub alpha: f64,
}

impl From<Strategy> for StrategyReport {
    fn from(s: Strategy) -> Self {
        Self {
            beta: s.beta(),
            alpha: s.alpha(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub label: &'static str,
    pub step: usize,
    pub strategy_a: StrategyReport,
    pub strategy_b: StrategyReport,
    pub payoff_matrix_a: [f64; 4],
    pub payoff_matrix_b: [f64; 4],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payoff_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payoff_b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<EstimateReport>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EstimateReport {
    pub value: f64,
    pub shots: u64,
    pub std_error: f64,
    pub seed: u64,
}

impl From<&SampleEstimate> for EstimateReport {
    fn from(e: &SampleEstimate) -> Self {
        Self {
            value: e.value,
            shots: e.shots,
            std_error: e.std_error,
            seed: e.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StokesReport {
    pub source: &'static str,
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionReport {
    /// Rows of `[re, im]` pairs.
    pub rho: Vec<Vec<[f64; 2]>>,
    pub projected: bool,
    pub bloch_norm: f64,
}

pub fn matrix_entries(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Planes {
    pub z: f64,
    pub y: f64,
    pub x: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialSummary {
    pub count: u32,
    pub fidelity_median: f64,
    pub fidelity_mean: f64,
    pub fidelity_min: f64,
    pub trace_distance_median: f64,
}

/// One sweep grid cell.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub phi: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s1_hat: f64,
    pub s2_hat: f64,
    pub s3_hat: f64,
    pub fidelity: f64,
}

pub const SWEEP_HEADER: [&str; 9] = ["theta", "phi", "s1", "s2", "s3", "s1_hat", "s2_hat", "s3_hat", "fidelity"];

impl SweepRow {
    fn values(&self) -> [f64; 9] {
        [
            self.theta,
            self.phi,
            self.s1,
            self.s2,
            self.s3,
            self.s1_hat,
            self.s2_hat,
            self.s3_hat,
            self.fidelity,
        ]
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Metrics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_vs_stokes_of: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planes: Option<Planes>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<TrialSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual_vs_angles: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<SweepRow>>,
}

/// Formats a float with 17 significant digits: fixed notation for decimal
/// exponents in `-5..=15`, scientific otherwise. Non-finite values become `null`.
pub fn format_sig17(x: f64) -> String {
    if !x.is_finite() {
        return "null".to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..=15).contains(&exp) {
        return sci;
    }
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = String::with_capacity(24);
    if negative {
        out.push('-');
    }
    if exp >= 0 {
        let split = exp as usize + 1;
        out.push_str(&digits[..split]);
        out.push('.');
        out.push_str(&digits[split..]);
    } else {
        out.push_str("0.");
        for _ in 0..(-exp - 1) {
            out.push('0');
        }
        out.push_str(&digits);
    }
    out
}

/// Pretty JSON with floats in [`format_sig17`].
struct Sig17Formatter<'a>(PrettyFormatter<'a>);

impl Formatter for Sig17Formatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_sig17(value).as_bytes())
    }
    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }
    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }
    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

pub fn to_json(report: &Report) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17Formatter(PrettyFormatter::new()));
    report
        .serialize(&mut ser)
        .map_err(|e| CliError::Io(io::Error::other(e)))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

fn csv_writer(buf: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(buf)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.to_string(),
            (None, Some(i)) => i.to_string(),
            _ => format_sig17(n.as_f64().expect("finite float")),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Flattens a JSON tree into `(column, cell)` pairs. Density matrices under a
/// `rho` key become `rhoIJ_re` / `rhoIJ_im` columns.
fn flatten(prefix: &str, key: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let name = if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}_{key}")
    };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&name, k, child, out);
            }
        }
        Value::Array(rows) if key == "rho" => {
            for (i, row) in rows.iter().enumerate() {
                for (j, pair) in row.as_array().into_iter().flatten().enumerate() {
                    let pair = pair.as_array().expect("[re, im] pair");
                    out.push((format!("rho{i}{j}_re"), cell(&pair[0])));
                    out.push((format!("rho{i}{j}_im"), cell(&pair[1])));
                }
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&name, &i.to_string(), child, out);
            }
        }
        leaf => out.push((name, cell(leaf))),
    }
}

/// CSV encoding. Sweeps emit one row per grid cell with the fixed
/// [`SWEEP_HEADER`]; every other report is a single flattened row.
pub fn to_csv(report: &Report) -> Result<String, CliError> {
    let mut buf = Vec::new();
    {
        let mut w = csv_writer(&mut buf);
        if let Some(rows) = report.metrics.as_ref().and_then(|m| m.rows.as_ref()) {
            w.write_record(SWEEP_HEADER)?;
            for row in rows {
                w.write_record(row.values().map(format_sig17))?;
            }
        } else {
            let tree = serde_json::to_value(report).map_err(|e| CliError::Io(io::Error::other(e)))?;
            let mut fields = Vec::new();
            let Value::Object(top) = &tree else {
                unreachable!("reports serialize as objects")
            };
            for (k, v) in top {
                match (k.as_str(), v) {
                    // Keeps the density columns named rho00_re, rho00_im, ...
                    ("reconstruction", Value::Object(map)) => {
                        for (kk, vv) in map {
                            flatten("", kk, vv, &mut fields);
                        }
                    }
                    _ => flatten("", k, v, &mut fields),
                }
            }
            w.write_record(fields.iter().map(|(k, _)| k))?;
            w.write_record(fields.iter().map(|(_, v)| v))?;
        }
        w.flush()?;
    }
    Ok(String::from_utf8(buf).expect("CSV cells are UTF-8"))
}
