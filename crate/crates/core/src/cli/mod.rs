//! The `qb` command line: argument parsing, config merging and dispatch.

pub mod config;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::energetics::{ergotropy_decomposition, BatteryHamiltonian};
use crate::error::{Error, Result};
use crate::lindblad::steady_state_reduced;
use crate::mhz;
use crate::nv_model::qb_splitting;
use crate::output::{
    field_json, fmt_sig, round_json, series_json, write_field_csv, write_json, write_runs_csv, write_series_csv,
    EnergyUnit, Format,
};
use crate::protocol::{run_two_stage, storage_time};
use crate::reproduce::{reproduce, Payload, Target};
use crate::sweep::{find_coherence_optimum, stable_coherence_map, AxisName, MapOptions, SweepAxis, SweepBase, SweepField};

pub use config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "qb", version, about = "NV-center quantum battery simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Charge, hand off and store; writes the energetics time series.
    Simulate {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        protocol: ProtocolArgs,
    },
    /// Steady state of the driven battery.
    Steady {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Stable-coherence map over one or two axes.
    Sweep {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// name:min:max:n with name in omega|delta|psi (MHz for frequencies, rad for psi)
        #[arg(long = "axis", required = true, num_args = 1)]
        axes: Vec<String>,
        /// Coherence at this time (μs) instead of the t → ∞ limit
        #[arg(long)]
        at_time: Option<f64>,
    },
    /// Maximize the stable coherence along one axis.
    Optimize {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// name:min:max:n, as for `sweep`
        #[arg(long)]
        axis: String,
    },
    /// Regenerate a figure dataset or report with fixed parameters.
    Reproduce {
        #[command(flatten)]
        io: IoArgs,
        /// fig2a..fig2e, fig3a, fig3b, fig4a, fig4b, discussion, optima, regimes, winf
        target: String,
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

#[derive(Args, Debug, Default)]
pub struct IoArgs {
    /// Flat key = value file; flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when absent)
    #[arg(long, short = 'o', visible_alias = "out")]
    pub output: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// w0 or ueV
    #[arg(long)]
    pub units: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct ModelArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub omega_mhz: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_mhz: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta_mhz: Option<f64>,
    /// Initial nuclear angle, rad
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub bz_gauss: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct ProtocolArgs {
    /// Pulse area Ωt at handoff, rad
    #[arg(long, allow_hyphen_values = true)]
    pub theta_end: Option<f64>,
    /// Storage duration, μs
    #[arg(long, allow_hyphen_values = true)]
    pub t_storage: Option<f64>,
    #[arg(long)]
    pub charge_samples: Option<usize>,
    #[arg(long)]
    pub storage_samples: Option<usize>,
    /// Charge without decay
    #[arg(long)]
    pub ideal_charging: bool,
    /// Storage-time threshold, fraction of ω₀
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
}

/// Process exit status for each error class.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) => 3,
        Error::OutOfRange { .. } => 4,
        Error::NoSteadyState => 5,
        Error::BelowLevelCrossing { .. } => 6,
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => 8,
        _ => 7,
    }
}

fn load(io: &IoArgs) -> Result<RunConfig> {
    let mut cfg = match &io.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(f) = &io.format {
        cfg.format = Some(f.parse()?);
    }
    if let Some(u) = &io.units {
        cfg.units = u.parse()?;
    }
    Ok(cfg)
}

fn merge_model(cfg: &mut RunConfig, m: &ModelArgs) {
    let pairs = [
        (&mut cfg.omega_mhz, m.omega_mhz),
        (&mut cfg.gamma_mhz, m.gamma_mhz),
        (&mut cfg.delta_mhz, m.delta_mhz),
        (&mut cfg.psi, m.psi),
        (&mut cfg.bz_gauss, m.bz_gauss),
    ];
    for (slot, v) in pairs {
        if let Some(v) = v {
            *slot = v;
        }
    }
}

fn merge_protocol(cfg: &mut RunConfig, p: &ProtocolArgs) {
    if let Some(v) = p.theta_end {
        cfg.theta_end = v;
    }
    if let Some(v) = p.t_storage {
        cfg.t_storage_us = v;
    }
    if let Some(v) = p.charge_samples {
        cfg.charge_samples = v;
    }
    if let Some(v) = p.storage_samples {
        cfg.storage_samples = v;
    }
    if let Some(v) = p.epsilon {
        cfg.epsilon = v;
    }
    cfg.ideal_charging |= p.ideal_charging;
}

/// Parses `name:min:max:n`; frequencies in MHz.
pub fn parse_axis(spec: &str) -> Result<SweepAxis> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [name, min, max, n] = parts[..] else {
        return Err(Error::Config(format!("axis `{spec}` is not name:min:max:n")));
    };
    let name: AxisName = name.parse()?;
    let num = |s: &str| -> Result<f64> { s.parse().map_err(|_| Error::Config(format!("bad number `{s}` in axis `{spec}`"))) };
    let n: usize = n.parse().map_err(|_| Error::Config(format!("bad point count `{n}` in axis `{spec}`")))?;
    let scale = if name == AxisName::Psi { 1.0 } else { mhz(1.0) };
    SweepAxis::new(name, scale * num(min)?, scale * num(max)?, n)
}

fn sweep_base(cfg: &RunConfig) -> Result<SweepBase> {
    let drive = cfg.drive()?;
    cfg.constants().validate()?;
    Ok(SweepBase {
        delta: drive.detuning,
        omega_rabi: drive.omega_rabi,
        gamma: drive.gamma,
        psi: cfg.nuclear()?.psi(),
        a_par: cfg.constants().a_par,
    })
}

struct Sink {
    path: Option<PathBuf>,
}

impl Sink {
    fn open(&self, suffix: Option<&str>) -> Result<Box<dyn Write>> {
        Ok(match (&self.path, suffix) {
            (Some(p), None) => Box::new(BufWriter::new(File::create(p)?)),
            (Some(p), Some(s)) => Box::new(BufWriter::new(File::create(suffixed(p, s))?)),
            (None, _) => Box::new(std::io::stdout().lock()),
        })
    }
}

/// `out.csv` + `W_coh(t)` → `out.W_coh_t.csv`
fn suffixed(path: &Path, tag: &str) -> PathBuf {
    let clean: String = tag
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect::<String>()
        .trim_matches('_')
        .to_string();
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}.{clean}.{ext}"),
        None => format!("{stem}.{clean}"),
    };
    path.with_file_name(name)
}

fn scale_field(mut f: SweepField, unit: EnergyUnit, w0: f64) -> SweepField {
    if f.observable.starts_with('W') {
        let k = unit.factor(w0);
        f.values.iter_mut().for_each(|v| *v *= k);
    }
    f
}

fn emit_fields(sink: &Sink, fields: Vec<SweepField>, format: Format, metadata: Map<String, Value>) -> Result<()> {
    match format {
        Format::Csv => {
            let many = fields.len() > 1;
            for (k, f) in fields.iter().enumerate() {
                let mut w = sink.open(many.then_some(f.observable.as_str()))?;
                if many && sink.path.is_none() && k > 0 {
                    writeln!(w)?;
                }
                write_field_csv(&mut w, f)?;
            }
            Ok(())
        }
        Format::Json => {
            let value = if fields.len() == 1 {
                field_json(&fields[0], metadata)
            } else {
                json!({
                    "metadata": metadata,
                    "fields": fields.iter().map(|f| field_json(f, Map::new())).collect::<Vec<_>>(),
                })
            };
            write_json(sink.open(None)?, &value)
        }
    }
}

/// Runs a parsed command and returns the one-line summary.
pub fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Simulate { io, model, protocol } => {
            let mut cfg = load(&io)?;
            merge_model(&mut cfg, &model);
            merge_protocol(&mut cfg, &protocol);
            let spec = cfg.protocol()?;
            let res = run_two_stage(&spec)?;
            let w0 = res.splitting.energy_uev;
            let mut all = res.charging_series.clone();
            all.extend_from_slice(&res.storage_series[1..]);
            let peak = all.iter().map(|r| r.ergotropy).fold(0.0, f64::max);
            let t_star = match storage_time(&res.storage_series, cfg.epsilon, 1.0) {
                Ok(t) => format!("{t:.4} us"),
                Err(Error::SeriesTooShort { .. }) => "not reached".to_string(),
                Err(e) => return Err(e),
            };
            let sink = Sink { path: io.output };
            match cfg.format.unwrap_or(Format::Csv) {
                Format::Csv => write_series_csv(sink.open(None)?, &all, cfg.units, w0)?,
                Format::Json => {
                    let meta = json!({
                        "spec": spec,
                        "omega0_uev": w0,
                        "handoff_time_us": spec.charge_duration(),
                        "epsilon": cfg.epsilon,
                    });
                    let Value::Object(meta) = round_json(meta) else { unreachable!() };
                    write_json(sink.open(None)?, &series_json(&all, cfg.units, w0, meta))?
                }
            }
            Ok(format!(
                "peak W = {} {}, t* = {t_star}",
                fmt_sig(peak * cfg.units.factor(w0)),
                cfg.units.label()
            ))
        }
        Command::Steady { io, model } => {
            let mut cfg = load(&io)?;
            merge_model(&mut cfg, &model);
            let base = sweep_base(&cfg)?;
            let splitting = qb_splitting(&cfg.constants(), cfg.bz_gauss)?;
            splitting.operational()?;
            let w0_uev = splitting.energy_uev;
            let rho = steady_state_reduced(&cfg.nuclear()?, base.delta, base.omega_rabi, base.gamma, base.a_par)?;
            let rec = ergotropy_decomposition(f64::INFINITY, &rho, &BatteryHamiltonian::unit())?;
            let k = cfg.units.factor(w0_uev);
            let sink = Sink { path: io.output };
            match cfg.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let eg = rho.matrix()[(0, 1)];
                    let v = round_json(json!({
                        "omega_mhz": cfg.omega_mhz,
                        "gamma_mhz": cfg.gamma_mhz,
                        "delta_mhz": cfg.delta_mhz,
                        "psi": cfg.psi,
                        "units": cfg.units.label(),
                        "p_e": rec.excited,
                        "rho_eg": [eg.re, eg.im],
                        "energy": k * rec.energy,
                        "ergotropy": k * rec.ergotropy,
                        "incoherent": k * rec.incoherent,
                        "coherent": k * rec.coherent,
                        "coherence_bits": rec.coherence,
                        "ratio_coh": rec.ratio_coh,
                    }));
                    write_json(sink.open(None)?, &v)?;
                }
                Format::Csv => write_series_csv(sink.open(None)?, &[rec], cfg.units, w0_uev)?,
            }
            Ok(format!(
                "p_e = {:.6}, C = {:.6} bits, ratio_coh = {}",
                rec.excited,
                rec.coherence,
                rec.ratio_coh.map_or("undefined".into(), |r| format!("{r:.6}"))
            ))
        }
        Command::Sweep { io, model, axes, at_time } => {
            let mut cfg = load(&io)?;
            merge_model(&mut cfg, &model);
            let base = sweep_base(&cfg)?;
            let axes = axes.iter().map(|a| parse_axis(a)).collect::<Result<Vec<_>>>()?;
            let options = MapOptions {
                at_time,
                ..MapOptions::default()
            };
            let field = stable_coherence_map(&axes, &base, &options)?;
            let k = field.argmax();
            let summary = format!(
                "max {} = {:.6} bits at {:?}; {} audit points passed",
                field.observable,
                field.values[k],
                field.coordinates(k),
                field.audit.len()
            );
            let meta = match round_json(json!({ "base": base })) {
                Value::Object(m) => m,
                _ => Map::new(),
            };
            emit_fields(&Sink { path: io.output }, vec![field], cfg.format.unwrap_or(Format::Csv), meta)?;
            Ok(summary)
        }
        Command::Optimize { io, model, axis } => {
            let mut cfg = load(&io)?;
            merge_model(&mut cfg, &model);
            let base = sweep_base(&cfg)?;
            let axis = parse_axis(&axis)?;
            let opt = find_coherence_optimum(&axis, &base)?;
            let v = round_json(json!({ "base": base, "optimum": opt }));
            write_json(Sink { path: io.output }.open(None)?, &v)?;
            Ok(match opt.unimodal() {
                Some((x, c)) => match axis.name {
                    AxisName::Psi => format!("optimum psi = {x:.6} rad, C = {c:.6} bits"),
                    name => format!("optimum {} = {:.6} MHz, C = {c:.6} bits", name.as_str(), x / mhz(1.0)),
                },
                None => format!("multimodal: {} local maxima {:?}", opt.maxima.len(), opt.maxima),
            })
        }
        Command::Reproduce { io, target, epsilon } => {
            let mut cfg = load(&io)?;
            if let Some(e) = epsilon {
                cfg.epsilon = e;
            }
            let target: Target = target.parse()?;
            let rep = reproduce(target, cfg.epsilon)?;
            let sink = Sink { path: io.output };
            let mut meta = rep.metadata.clone();
            meta.insert("target".into(), json!(target.name()));
            meta.insert("omega0_uev".into(), json!(rep.omega0_uev));
            match rep.payload {
                Payload::Series { label, runs } => match cfg.format.unwrap_or(Format::Csv) {
                    Format::Csv => {
                        let refs: Vec<(f64, &[_])> = runs.iter().map(|r| (r.label, r.series.as_slice())).collect();
                        write_runs_csv(sink.open(None)?, label, &refs, cfg.units, rep.omega0_uev)?
                    }
                    Format::Json => {
                        let v = json!({
                            "metadata": round_json(Value::Object(meta)),
                            "runs": runs.iter().map(|r| json!({
                                "label": r.label,
                                "series": series_json(&r.series, cfg.units, rep.omega0_uev, Map::new()),
                            })).collect::<Vec<_>>(),
                        });
                        write_json(sink.open(None)?, &v)?
                    }
                },
                Payload::Fields(fields) => {
                    let fields = fields.into_iter().map(|f| scale_field(f, cfg.units, rep.omega0_uev)).collect();
                    emit_fields(&sink, fields, cfg.format.unwrap_or(Format::Csv), meta)?
                }
                Payload::Report(v) => {
                    if cfg.format == Some(Format::Csv) {
                        log::warn!("`{}` is a structured report; writing JSON", target.name());
                    }
                    write_json(sink.open(None)?, &round_json(json!({ "metadata": meta, "report": v })))?
                }
            }
            Ok(format!("{}: {}", target.name(), rep.summary))
        }
    }
}

/// Parses `args`, runs the command, prints the summary and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let to_stdout = match &cli.command {
        Command::Simulate { io, .. }
        | Command::Steady { io, .. }
        | Command::Sweep { io, .. }
        | Command::Optimize { io, .. }
        | Command::Reproduce { io, .. } => io.output.is_some(),
    };
    match execute(cli) {
        Ok(summary) => {
            // keep stdout clean for data when no output file was given
            if to_stdout {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_spec_converts_mhz() {
        let a = parse_axis("delta:-1:2:4").unwrap();
        assert_eq!(a.name, AxisName::Delta);
        assert!((a.min + mhz(1.0)).abs() < 1e-15);
        assert!((a.max - mhz(2.0)).abs() < 1e-15);
        let p = parse_axis("psi:0:3.14:3").unwrap();
        assert_eq!(p.max, 3.14);
        assert!(parse_axis("delta:0:1").is_err());
        assert!(parse_axis("time:0:1:3").is_err());
    }

    #[test]
    fn suffixes_keep_extension() {
        assert_eq!(suffixed(Path::new("/tmp/a.csv"), "W_coh(t)"), PathBuf::from("/tmp/a.W_coh_t.csv"));
    }

    #[test]
    fn exit_codes_are_distinct() {
        let errs = [
            Error::Config("x".into()),
            Error::OutOfRange {
                name: "x",
                value: 0.0,
                reason: "",
            },
            Error::NoSteadyState,
            Error::BelowLevelCrossing { omega0: -1.0 },
            Error::PositivityLost {
                t: 0.0,
                min_eigenvalue: -1.0,
            },
            Error::Io(std::io::Error::other("x")),
        ];
        let mut codes: Vec<i32> = errs.iter().map(exit_code).collect();
        assert!(codes.iter().all(|&c| c != 0 && c != 2));
        codes.sort_unstable();
        codes.dedup();
        assert_eq!(codes.len(), errs.len());
    }
}
