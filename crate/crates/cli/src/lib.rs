//! `shorcost` command line: build circuits, verify them against integer
//! references, schedule them on an architecture, and query the cost models.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use shorcost::architecture::{check_conformance, lower_for, ArchModel};
use shorcost::arithmetic::{
    build_adder, build_const_modadd, build_controlled_adder, build_modexp, build_modmul_const,
    AdderKind, ModexpSpec,
};
use shorcost::oracle::{exhaustive_check, randomized_check, reference, CheckOutcome};
use shorcost::scaling::{
    crossover_bits, log_spaced, required_clock, series, write_csv, ClassicalModel, QuantumModel,
    SeriesModel, SeriesRow, MONTH_SECONDS,
};
use shorcost::scheduler::metrics;
use shorcost::Circuit;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "shorcost",
    version,
    about = "Modular exponentiation circuit and cost tool"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize a circuit and write it as JSON.
    Build(BuildArgs),
    /// Check a circuit against its integer reference.
    Verify(VerifyArgs),
    /// Schedule a circuit on an architecture and print its metrics.
    Estimate(EstimateArgs),
    /// Emit time-versus-bits curves for plotting.
    Scale(ScaleArgs),
    /// Clock rate a model needs to finish within a wall time.
    ClockFor(ClockForArgs),
    /// Smallest bit length where a quantum model beats the sieve.
    Crossover(CrossoverArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum BuildKind {
    Adder,
    CtrlAdder,
    Modadd,
    Modmul,
    Modexp,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AdderArg {
    Vbe,
    Cdkm,
    Condsum,
}

impl From<AdderArg> for AdderKind {
    fn from(a: AdderArg) -> AdderKind {
        match a {
            AdderArg::Vbe => AdderKind::VbeRipple,
            AdderArg::Cdkm => AdderKind::CdkmRipple,
            AdderArg::Condsum => AdderKind::ConditionalSum,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SpecArg {
    Adder,
    Modadd,
    Modmul,
    Modexp,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ArchArg {
    Ac,
    Ntc,
}

impl ArchArg {
    fn model(self) -> ArchModel {
        match self {
            ArchArg::Ac => ArchModel::AC,
            ArchArg::Ntc => ArchModel::NTC,
        }
    }
}

#[derive(clap::Args, Debug)]
struct BuildArgs {
    #[arg(long, value_enum)]
    kind: BuildKind,
    #[arg(long, value_enum)]
    adder: AdderArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    modulus: Option<u64>,
    /// Base of the exponentiation; also the default multiplier constant.
    #[arg(long)]
    base: Option<u64>,
    /// Constant added (modadd) or multiplied (modmul).
    #[arg(long)]
    constant: Option<u64>,
    /// Control qubits for modadd (0, 1 or 2) and modmul (0 or 1).
    #[arg(long, default_value_t = 0)]
    controls: usize,
    /// Concurrent multiplier units for modexp.
    #[arg(long = "mult", default_value_t = 1)]
    multipliers: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long, value_enum)]
    spec: SpecArg,
    #[arg(long, conflicts_with_all = ["trials", "seed"])]
    exhaustive: bool,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Overrides the parameters recorded when the circuit was built.
    #[arg(long)]
    modulus: Option<u64>,
    #[arg(long)]
    base: Option<u64>,
    #[arg(long)]
    constant: Option<u64>,
}

#[derive(clap::Args, Debug)]
struct EstimateArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long, value_enum)]
    arch: ArchArg,
    /// Write the lowered circuit here.
    #[arg(long)]
    emit_routed: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct ScaleArgs {
    /// Comma-separated: bcdp, d, f, nfs.
    #[arg(long, value_delimiter = ',', default_value = "bcdp,d,f,nfs")]
    models: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "1,1e3,1e6,1e9")]
    clocks: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    compute_factors: Vec<f64>,
    #[arg(long, default_value_t = 512.0)]
    from: f64,
    #[arg(long, default_value_t = 65536.0)]
    to: f64,
    #[arg(long, default_value_t = 32)]
    points: usize,
    /// Write CSV here; JSON goes to standard output otherwise.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct ClockForArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    bits: f64,
    /// Seconds, or a number with suffix s, h, d or mo (30 days).
    #[arg(long)]
    wall: String,
}

#[derive(clap::Args, Debug)]
struct CrossoverArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    clock: f64,
    #[arg(long, default_value_t = 1.0)]
    compute_factor: f64,
}

/// Parameters kept next to a built circuit so `verify` can rebuild its
/// reference without repeating them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildRecord {
    pub kind: String,
    pub adder: AdderKind,
    pub n: usize,
    pub modulus: Option<u64>,
    pub base: Option<u64>,
    pub constant: Option<u64>,
    pub controls: usize,
    pub multipliers: usize,
}

/// Path of the parameter record written beside `circuit`.
pub fn sidecar_path(circuit: &Path) -> PathBuf {
    let mut s = circuit.as_os_str().to_owned();
    s.push(".build.json");
    PathBuf::from(s)
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

/// Parses `argv` (program name first), writes results to `out` and one-line
/// diagnostics to `err`, and returns the exit status.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{}", text.lines().next().unwrap_or("usage error"))
                    .and_then(|_| writeln!(err))
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Build(a) => cmd_build(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Estimate(a) => cmd_estimate(a, out),
        Command::Scale(a) => cmd_scale(a, out),
        Command::ClockFor(a) => cmd_clock_for(a, out),
        Command::Crossover(a) => cmd_crossover(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    writeln!(out, "{text}").map_err(|e| Failure::Io(format!("stdout: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Circuit::from_json(&text).map_err(|e| io_err(path, e))
}

fn cmd_build(a: BuildArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let adder: AdderKind = a.adder.into();
    let need = |v: Option<u64>, flag: &str| {
        v.ok_or_else(|| usage(format!("--{flag} is required for this kind")))
    };
    let constant = a.constant.or(a.base);
    let circuit = match a.kind {
        BuildKind::Adder => build_adder(adder, a.n),
        BuildKind::CtrlAdder => build_controlled_adder(adder, a.n),
        BuildKind::Modadd => build_const_modadd(
            adder,
            a.n,
            need(constant, "constant")?,
            need(a.modulus, "modulus")?,
            a.controls,
        ),
        BuildKind::Modmul => {
            if a.controls > 1 {
                return Err(usage("modmul takes at most one control"));
            }
            build_modmul_const(
                adder,
                a.n,
                need(constant, "constant")?,
                need(a.modulus, "modulus")?,
                a.controls == 1,
            )
        }
        BuildKind::Modexp => build_modexp(&ModexpSpec {
            n: a.n,
            modulus: need(a.modulus, "modulus")?,
            base: need(a.base, "base")?,
            multipliers: a.multipliers,
            adder,
        }),
    }
    .map_err(usage)?;
    let record = BuildRecord {
        kind: serde_json::to_value(a.kind)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default(),
        adder,
        n: a.n,
        modulus: a.modulus,
        base: a.base,
        constant,
        controls: a.controls,
        multipliers: a.multipliers,
    };
    write_file(&a.out, &circuit.to_json())?;
    let sidecar = sidecar_path(&a.out);
    write_file(
        &sidecar,
        &serde_json::to_string_pretty(&record).expect("record serializes"),
    )?;
    let census = circuit.census();
    write_out(
        out,
        &serde_json::json!({
            "out": a.out.display().to_string(),
            "width": circuit.width(),
            "total_gates": census.total,
        })
        .to_string(),
    )?;
    Ok(EXIT_OK)
}

fn register_len(c: &Circuit, name: &str) -> Result<usize, Failure> {
    c.register(name)
        .map(|r| r.length)
        .ok_or_else(|| usage(format!("circuit has no `{name}` register")))
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let circuit = read_circuit(&a.circuit)?;
    let sidecar = sidecar_path(&a.circuit);
    let record: Option<BuildRecord> = match fs::read_to_string(&sidecar) {
        Ok(text) => Some(serde_json::from_str(&text).map_err(|e| io_err(&sidecar, e))?),
        Err(e) if e.kind() == io::ErrorKind::NotFound => None,
        Err(e) => return Err(io_err(&sidecar, e)),
    };
    let param = |flag: Option<u64>, recorded: Option<u64>, name: &str| {
        flag.or(recorded)
            .ok_or_else(|| usage(format!("--{name} is required (no build record found)")))
    };
    let rec = |f: fn(&BuildRecord) -> Option<u64>| record.as_ref().and_then(f);
    let controls = circuit.register("ctl").map_or(0, |r| r.length);
    let r = match a.spec {
        SpecArg::Adder => reference::adder(register_len(&circuit, "a")?, controls == 1),
        SpecArg::Modadd => {
            let modulus = param(a.modulus, rec(|r| r.modulus), "modulus")?;
            let constant = param(a.constant, rec(|r| r.constant), "constant")?;
            reference::const_modadd(constant, modulus, controls)
        }
        SpecArg::Modmul => {
            let modulus = param(a.modulus, rec(|r| r.modulus), "modulus")?;
            let constant = param(a.constant, rec(|r| r.constant), "constant")?;
            reference::modmul(constant, modulus, controls == 1)
        }
        SpecArg::Modexp => {
            let modulus = param(a.modulus, rec(|r| r.modulus), "modulus")?;
            let base = param(a.base, rec(|r| r.base), "base")?;
            reference::modexp(register_len(&circuit, "r")?, modulus, base)
        }
    };
    let outcome = match a.trials {
        Some(trials) if !a.exhaustive => {
            randomized_check(&circuit, &*r.function, &r.domain, trials, a.seed)
        }
        _ => exhaustive_check(&circuit, &*r.function, &r.domain),
    }
    .map_err(usage)?;
    write_out(
        out,
        &serde_json::to_string(&outcome).expect("outcome serializes"),
    )?;
    Ok(match outcome {
        CheckOutcome::Pass { .. } => EXIT_OK,
        CheckOutcome::Counterexample(_) => EXIT_COUNTEREXAMPLE,
    })
}

fn cmd_estimate(a: EstimateArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let circuit = read_circuit(&a.circuit)?;
    let model = a.arch.model();
    let lowered = lower_for(&circuit, &model).map_err(usage)?;
    let conf = check_conformance(&lowered, &model);
    if !conf.conforms {
        return Err(usage(format!(
            "lowered circuit violates {model} at gate {:?}",
            conf.first_offending
        )));
    }
    if let Some(path) = &a.emit_routed {
        write_file(path, &lowered.to_json())?;
    }
    write_out(out, &metrics(&lowered).to_json())?;
    Ok(EXIT_OK)
}

fn cmd_scale(a: ScaleArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let models = a
        .models
        .iter()
        .filter(|m| !m.is_empty())
        .map(|m| m.parse::<SeriesModel>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    let ns = log_spaced(a.from, a.to, a.points).map_err(usage)?;
    let rows = series(&models, &a.clocks, &a.compute_factors, &ns).map_err(usage)?;
    match &a.csv {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
            write_csv(&rows, io::BufWriter::new(file)).map_err(|e| io_err(path, e))?;
            write_out(
                out,
                &serde_json::json!({ "csv": path.display().to_string(), "rows": rows.len() })
                    .to_string(),
            )?;
        }
        None => {
            let json: Vec<_> = rows.iter().map(row_json).collect();
            write_out(out, &serde_json::Value::Array(json).to_string())?;
        }
    }
    Ok(EXIT_OK)
}

fn row_json(r: &SeriesRow<f64>) -> serde_json::Value {
    serde_json::json!({
        "n": r.n,
        "series": r.series,
        "clock_hz": r.clock_hz,
        "compute_factor": r.compute_factor,
        "seconds": r.seconds,
    })
}

/// Seconds from `"2592000"`, `"90s"`, `"3h"`, `"30d"` or `"1mo"`.
pub fn parse_wall(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (num, unit) = s.split_at(s.trim_end_matches(|c: char| c.is_ascii_alphabetic()).len());
    let scale = match unit {
        "" | "s" => 1.0,
        "h" => 3600.0,
        "d" => 86_400.0,
        "mo" => MONTH_SECONDS,
        other => {
            return Err(format!(
                "unknown wall-time suffix `{other}` (use s, h, d or mo)"
            ))
        }
    };
    let v: f64 = num.parse().map_err(|_| format!("bad wall time `{s}`"))?;
    if !v.is_finite() || v <= 0.0 {
        return Err(format!("wall time must be positive, got `{s}`"));
    }
    Ok(v * scale)
}

/// Five significant figures, no exponent for ordinary magnitudes.
pub fn format_hz(hz: f64) -> String {
    if hz == 0.0 || !hz.is_finite() {
        return format!("{hz} Hz");
    }
    let mag = hz.abs().log10().floor() as i32;
    if !(-4..15).contains(&mag) {
        return format!("{hz:.4e} Hz");
    }
    let decimals = (4 - mag).max(0) as usize;
    format!("{hz:.decimals$} Hz")
}

fn cmd_clock_for(a: ClockForArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let model: QuantumModel = a.model.parse().map_err(usage)?;
    let wall = parse_wall(&a.wall).map_err(usage)?;
    let hz = required_clock(model, a.bits, wall).map_err(usage)?;
    write_out(out, &format_hz(hz))?;
    Ok(EXIT_OK)
}

fn cmd_crossover(a: CrossoverArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let model: QuantumModel = a.model.parse().map_err(usage)?;
    let classical = ClassicalModel::new(a.compute_factor).map_err(usage)?;
    let bits = crossover_bits(model, a.clock, &classical).map_err(usage)?;
    write_out(
        out,
        &bits.map_or_else(|| "none".to_string(), |b| b.to_string()),
    )?;
    Ok(EXIT_OK)
}
