//! CSV and JSON emission for time series and sweep fields.
//!
//! All floats are written with 12 significant digits.

use std::io::Write;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::energetics::EnergeticsRecord;
use crate::error::{Error, Result};
use crate::sweep::SweepField;

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EnergyUnit {
    /// Multiples of the battery splitting ω₀.
    #[serde(rename = "w0")]
    Omega0,
    #[serde(rename = "ueV")]
    MicroEv,
}

impl EnergyUnit {
    pub fn label(&self) -> &'static str {
        match self {
            EnergyUnit::Omega0 => "w0",
            EnergyUnit::MicroEv => "ueV",
        }
    }

    /// Factor from ω₀ units to this unit.
    pub fn factor(&self, omega0_uev: f64) -> f64 {
        match self {
            EnergyUnit::Omega0 => 1.0,
            EnergyUnit::MicroEv => omega0_uev,
        }
    }
}

impl FromStr for EnergyUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "w0" | "omega0" => Ok(EnergyUnit::Omega0),
            "ueV" | "uev" => Ok(EnergyUnit::MicroEv),
            other => Err(Error::Config(format!("unknown unit `{other}` (w0|ueV)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format `{other}` (csv|json)"))),
        }
    }
}

pub fn fmt_sig(x: f64) -> String {
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
}

pub fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        fmt_sig(x).parse().unwrap_or(x)
    } else {
        x
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

/// One row per sample: time, energies in `unit`, coherence in bits.
pub fn write_series_csv<W: Write>(out: W, series: &[EnergeticsRecord], unit: EnergyUnit, omega0_uev: f64) -> Result<()> {
    write_runs_csv(out, None, &[(0.0, series)], unit, omega0_uev)
}

/// Several runs stacked in one table, distinguished by a leading `label` column.
pub fn write_runs_csv<W: Write>(
    out: W,
    label: Option<&str>,
    runs: &[(f64, &[EnergeticsRecord])],
    unit: EnergyUnit,
    omega0_uev: f64,
) -> Result<()> {
    let k = unit.factor(omega0_uev);
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = label.into_iter().collect();
    header.extend(["t_us", "E", "W", "Wi", "Wc", "C", "ratio_coh", "p_e"]);
    w.write_record(&header)?;
    for (value, series) in runs {
        for r in series.iter() {
            let mut row: Vec<String> = label.map(|_| fmt_sig(*value)).into_iter().collect();
            row.extend([
                fmt_sig(r.t),
                fmt_sig(k * r.energy),
                fmt_sig(k * r.ergotropy),
                fmt_sig(k * r.incoherent),
                fmt_sig(k * r.coherent),
                fmt_sig(r.coherence),
                opt(r.ratio_coh),
                fmt_sig(r.excited),
            ]);
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Long format: one column per axis, then the observable.
pub fn write_field_csv<W: Write>(out: W, field: &SweepField) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = field.axes.iter().map(|a| a.name.as_str().to_string()).collect();
    header.push(field.observable.clone());
    w.write_record(&header)?;
    for (k, v) in field.values.iter().enumerate() {
        let mut row: Vec<String> = field.coordinates(k).into_iter().map(fmt_sig).collect();
        row.push(fmt_sig(*v));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn series_json(series: &[EnergeticsRecord], unit: EnergyUnit, omega0_uev: f64, metadata: Map<String, Value>) -> Value {
    let k = unit.factor(omega0_uev);
    let col = |f: &dyn Fn(&EnergeticsRecord) -> f64| series.iter().map(|r| round_sig(f(r))).collect::<Vec<f64>>();
    json!({
        "metadata": metadata,
        "units": { "time": "us", "energy": unit.label(), "coherence": "bits" },
        "t": col(&|r| r.t),
        "energy": col(&|r| k * r.energy),
        "ergotropy": col(&|r| k * r.ergotropy),
        "incoherent": col(&|r| k * r.incoherent),
        "coherent": col(&|r| k * r.coherent),
        "coherence": col(&|r| r.coherence),
        "ratio_coh": series.iter().map(|r| r.ratio_coh.map(round_sig)).collect::<Vec<_>>(),
        "excited": col(&|r| r.excited),
    })
}

pub fn field_json(field: &SweepField, metadata: Map<String, Value>) -> Value {
    let axes: Vec<Value> = field
        .axes
        .iter()
        .map(|a| {
            json!({
                "name": a.name.as_str(),
                "values": a.values().into_iter().map(round_sig).collect::<Vec<f64>>(),
            })
        })
        .collect();
    json!({
        "metadata": metadata,
        "observable": field.observable,
        "shape": field.shape(),
        "axes": axes,
        "values": field.values.iter().copied().map(round_sig).collect::<Vec<f64>>(),
        "audit": field.audit,
    })
}

/// Recursively rounds every float in `v` to 12 significant digits.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| serde_json::Number::from_f64(round_sig(x)))
            .map(Value::Number)
            .unwrap_or(Value::Null),
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

pub fn write_json<W: Write>(mut out: W, value: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}
