//! Closed-form factoring cost models: the classical number field sieve
//! extrapolated from a measured record, and quantum modular exponentiation
//! depth for three published algorithm families. Generic over the float
//! type; [`crate::ClassicalModelF64`] and friends fix it to `f64`.

// Negated comparisons below also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;
use std::io;
use std::str::FromStr;

use num_traits::Float;
use serde::Serialize;
use thiserror::Error;

use crate::architecture::{lower_for, ArchError, ArchModel};
use crate::arithmetic::{build_modexp, AdderKind, ArithmeticError, ModexpSpec};
use crate::scheduler;

/// Thirty days.
pub const MONTH_SECONDS: f64 = 2_592_000.0;
/// 365.25 days.
pub const YEAR_SECONDS: f64 = 31_557_600.0;
/// Bit length of the classical record the NFS curve is anchored to.
pub const NFS_ANCHOR_BITS: f64 = 530.0;
/// Wall time of that record.
pub const NFS_ANCHOR_SECONDS: f64 = MONTH_SECONDS;
/// Crossover scan range, inclusive.
pub const CROSSOVER_RANGE: (u64, u64) = (8, 1 << 20);
/// Largest exponent width `empirical_bridge` will build.
pub const BRIDGE_MAX_BITS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("bit length must be at least 2")]
    TooFewBits,
    #[error("clock rate must be positive")]
    NonPositiveClock,
    #[error("wall time must be positive")]
    NonPositiveWall,
    #[error("compute factor must be positive")]
    NonPositiveComputeFactor,
    #[error("point count must be at least 2 and the range increasing")]
    BadRange,
    #[error("empirical comparison is limited to n <= {BRIDGE_MAX_BITS}")]
    BridgeTooLarge,
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
    #[error(transparent)]
    Arch(#[from] ArchError),
}

#[inline]
fn c<T: Float>(x: f64) -> T {
    T::from(x).expect("constant representable in the float type")
}

/// The logarithm inside the NFS exponent. Natural, as in L-notation.
#[inline]
fn nfs_log<T: Float>(x: T) -> T {
    x.ln()
}

/// Number field sieve time, scaled from the anchor record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalModel<T> {
    /// Throughput relative to the anchor record's machines.
    pub compute_factor: T,
}

impl<T: Float> ClassicalModel<T> {
    pub fn new(compute_factor: T) -> Result<Self, ModelError> {
        if !(compute_factor > T::zero()) {
            return Err(ModelError::NonPositiveComputeFactor);
        }
        Ok(ClassicalModel { compute_factor })
    }

    pub fn baseline() -> Self {
        ClassicalModel {
            compute_factor: T::one(),
        }
    }

    /// `(64/9) ln 2`.
    pub fn k() -> T {
        c::<T>(64.0 / 9.0) * c::<T>(2.0).ln()
    }

    /// `E(n) = (k n log^2 n)^(1/3)`.
    pub fn exponent(n: T) -> T {
        let l = nfs_log(n);
        (Self::k() * n * l * l).cbrt()
    }

    /// Natural log of [`ClassicalModel::seconds`]; finite far beyond the
    /// range where the seconds overflow.
    pub fn ln_seconds(&self, n: T) -> T {
        c::<T>(NFS_ANCHOR_SECONDS).ln() + Self::exponent(n)
            - Self::exponent(c(NFS_ANCHOR_BITS))
            - self.compute_factor.ln()
    }

    pub fn seconds(&self, n: T) -> Result<T, ModelError> {
        if !(n >= c(2.0)) {
            return Err(ModelError::TooFewBits);
        }
        let delta = Self::exponent(n) - Self::exponent(c(NFS_ANCHOR_BITS));
        Ok(c::<T>(NFS_ANCHOR_SECONDS) * delta.exp() / self.compute_factor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum QuantumModel {
    /// Ripple-carry reference construction: depth `54 n^3`, `5n + 3` qubits.
    Bcdp,
    /// Conditional-sum adders on AC: depth `9 n log2^2 n`, `2 n^2` qubits.
    AlgD,
    /// CDKM adders on NTC: depth `20 n^2 log2 n`, `2 n^2` qubits.
    AlgF,
}

impl QuantumModel {
    pub const ALL: [QuantumModel; 3] = [QuantumModel::Bcdp, QuantumModel::AlgD, QuantumModel::AlgF];

    pub fn id(self) -> &'static str {
        match self {
            QuantumModel::Bcdp => "bcdp",
            QuantumModel::AlgD => "d",
            QuantumModel::AlgF => "f",
        }
    }

    /// Circuit depth in gate times.
    pub fn depth<T: Float>(self, n: T) -> T {
        match self {
            QuantumModel::Bcdp => c::<T>(54.0) * n * n * n,
            QuantumModel::AlgD => {
                let l = n.log2();
                c::<T>(9.0) * n * l * l
            }
            QuantumModel::AlgF => c::<T>(20.0) * n * n * n.log2(),
        }
    }

    /// Logical qubits.
    pub fn space<T: Float>(self, n: T) -> T {
        match self {
            QuantumModel::Bcdp => c::<T>(5.0) * n + c(3.0),
            QuantumModel::AlgD | QuantumModel::AlgF => c::<T>(2.0) * n * n,
        }
    }

    /// Approximate gates in flight per timestep.
    pub fn concurrency<T: Float>(self, n: T) -> T {
        match self {
            QuantumModel::Bcdp => c(2.0),
            QuantumModel::AlgD => n * n,
            QuantumModel::AlgF => c::<T>(0.75) * n,
        }
    }

    /// Concurrent multiplier units.
    pub fn multipliers<T: Float>(self, n: T) -> T {
        match self {
            QuantumModel::Bcdp => T::one(),
            QuantumModel::AlgD | QuantumModel::AlgF => n / c(4.0),
        }
    }

    pub fn adder(self) -> AdderKind {
        match self {
            QuantumModel::Bcdp => AdderKind::VbeRipple,
            QuantumModel::AlgD => AdderKind::ConditionalSum,
            QuantumModel::AlgF => AdderKind::CdkmRipple,
        }
    }

    /// Model whose adder matches `kind`.
    pub fn for_adder(kind: AdderKind) -> QuantumModel {
        match kind {
            AdderKind::VbeRipple => QuantumModel::Bcdp,
            AdderKind::ConditionalSum => QuantumModel::AlgD,
            AdderKind::CdkmRipple => QuantumModel::AlgF,
        }
    }
}

impl fmt::Display for QuantumModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for QuantumModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bcdp" => Ok(QuantumModel::Bcdp),
            "d" | "alg_d" | "alg-d" => Ok(QuantumModel::AlgD),
            "f" | "alg_f" | "alg-f" => Ok(QuantumModel::AlgF),
            other => Err(format!("unknown model `{other}` (expected bcdp, d or f)")),
        }
    }
}

pub fn nfs_seconds<T: Float>(model: &ClassicalModel<T>, n: T) -> Result<T, ModelError> {
    model.seconds(n)
}

/// `depth(n) / clock`.
pub fn quantum_seconds<T: Float>(q: QuantumModel, n: T, clock_hz: T) -> Result<T, ModelError> {
    if !(n >= c(2.0)) {
        return Err(ModelError::TooFewBits);
    }
    if !(clock_hz > T::zero()) {
        return Err(ModelError::NonPositiveClock);
    }
    Ok(q.depth(n) / clock_hz)
}

/// Clock rate finishing in `wall_seconds`: `depth(n) / wall`.
pub fn required_clock<T: Float>(q: QuantumModel, n: T, wall_seconds: T) -> Result<T, ModelError> {
    if !(n >= c(2.0)) {
        return Err(ModelError::TooFewBits);
    }
    if !(wall_seconds > T::zero()) {
        return Err(ModelError::NonPositiveWall);
    }
    Ok(q.depth(n) / wall_seconds)
}

/// How many times fewer gate times `faster` needs than `slower`.
pub fn speedup<T: Float>(
    slower: QuantumModel,
    faster: QuantumModel,
    n: T,
) -> Result<T, ModelError> {
    if !(n >= c(2.0)) {
        return Err(ModelError::TooFewBits);
    }
    Ok(slower.depth(n) / faster.depth(n))
}

/// Smallest bit length in [`CROSSOVER_RANGE`] where the quantum machine
/// beats the classical one.
pub fn crossover_bits<T: Float>(
    q: QuantumModel,
    clock_hz: T,
    classical: &ClassicalModel<T>,
) -> Result<Option<u64>, ModelError> {
    crossover_bits_in(q, clock_hz, classical, CROSSOVER_RANGE.0, CROSSOVER_RANGE.1)
}

/// [`crossover_bits`] over `lo..=hi`. Compares in log space so neither
/// curve overflows.
pub fn crossover_bits_in<T: Float>(
    q: QuantumModel,
    clock_hz: T,
    classical: &ClassicalModel<T>,
    lo: u64,
    hi: u64,
) -> Result<Option<u64>, ModelError> {
    if !(clock_hz > T::zero()) {
        return Err(ModelError::NonPositiveClock);
    }
    let ln_clock = clock_hz.ln();
    Ok((lo.max(2)..=hi).find(|&n| {
        let n = T::from(n).expect("bit length representable");
        q.depth(n).ln() - ln_clock < classical.ln_seconds(n)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesModel {
    Quantum(QuantumModel),
    Classical,
}

impl SeriesModel {
    pub fn id(self) -> &'static str {
        match self {
            SeriesModel::Quantum(q) => q.id(),
            SeriesModel::Classical => "nfs",
        }
    }
}

impl FromStr for SeriesModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("nfs") {
            Ok(SeriesModel::Classical)
        } else {
            s.parse().map(SeriesModel::Quantum)
        }
    }
}

/// One point of a plotted curve. Quantum rows carry a clock, classical
/// rows a compute factor.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow<T> {
    pub n: T,
    pub series: String,
    pub clock_hz: Option<T>,
    pub compute_factor: Option<T>,
    pub seconds: T,
}

/// `points` log-spaced bit lengths from `from` to `to` inclusive.
pub fn log_spaced<T: Float>(from: T, to: T, points: usize) -> Result<Vec<T>, ModelError> {
    if points < 2 || !(from >= c(2.0)) || !(to > from) {
        return Err(ModelError::BadRange);
    }
    let (lf, lt) = (from.ln(), to.ln());
    let last = T::from(points - 1).unwrap();
    Ok((0..points)
        .map(|i| {
            if i == 0 {
                from
            } else if i == points - 1 {
                to
            } else {
                (lf + (lt - lf) * T::from(i).unwrap() / last).exp()
            }
        })
        .collect())
}

/// Curves for every model: quantum models once per clock, the classical
/// model once per compute factor. Rows are ordered by model, then
/// parameter, then increasing `n`.
pub fn series<T: Float>(
    models: &[SeriesModel],
    clocks: &[T],
    compute_factors: &[T],
    n_values: &[T],
) -> Result<Vec<SeriesRow<T>>, ModelError> {
    let mut rows = Vec::new();
    for &m in models {
        match m {
            SeriesModel::Quantum(q) => {
                for &clock in clocks {
                    for &n in n_values {
                        rows.push(SeriesRow {
                            n,
                            series: q.id().to_string(),
                            clock_hz: Some(clock),
                            compute_factor: None,
                            seconds: quantum_seconds(q, n, clock)?,
                        });
                    }
                }
            }
            SeriesModel::Classical => {
                for &cf in compute_factors {
                    let model = ClassicalModel::new(cf)?;
                    for &n in n_values {
                        rows.push(SeriesRow {
                            n,
                            series: "nfs".to_string(),
                            clock_hz: None,
                            compute_factor: Some(cf),
                            seconds: model.seconds(n)?,
                        });
                    }
                }
            }
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: [&str; 5] = ["n", "series", "clock_hz", "compute_factor", "seconds"];

/// Writes rows with every number in shortest round-trip scientific form.
pub fn write_csv<T, W>(rows: &[SeriesRow<T>], out: W) -> io::Result<()>
where
    T: Float + fmt::LowerExp,
    W: io::Write,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let sci = |v: Option<T>| v.map(|x| format!("{x:e}")).unwrap_or_default();
    for r in rows {
        w.write_record([
            format!("{:e}", r.n),
            r.series.clone(),
            sci(r.clock_hz),
            sci(r.compute_factor),
            format!("{:e}", r.seconds),
        ])?;
    }
    w.flush()
}

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("unexpected header {0:?}")]
    Header(Vec<String>),
    #[error("line {line}: bad number `{value}`")]
    Number { line: usize, value: String },
}

pub fn read_csv<T: Float + FromStr>(input: impl io::Read) -> Result<Vec<SeriesRow<T>>, CsvError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(CsvError::Header(header));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let num = |s: &str| -> Result<T, CsvError> {
            s.parse().map_err(|_| CsvError::Number {
                line,
                value: s.to_string(),
            })
        };
        let opt = |s: &str| -> Result<Option<T>, CsvError> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        };
        rows.push(SeriesRow {
            n: num(&rec[0])?,
            series: rec[1].to_string(),
            clock_hz: opt(&rec[2])?,
            compute_factor: opt(&rec[3])?,
            seconds: num(&rec[4])?,
        });
    }
    Ok(rows)
}

/// Scheduler measurement of a built circuit next to the matching model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BridgeRecord {
    pub n: usize,
    pub multipliers: usize,
    pub adder: AdderKind,
    pub arch: String,
    pub width: usize,
    pub total_gates: usize,
    pub measured_depth: usize,
    pub model: QuantumModel,
    pub model_depth: f64,
    /// `measured_depth / model_depth`; reported, never expected to be 1.
    pub ratio: f64,
    /// `measured_depth / n^3`, the stand-in for the leading constant.
    pub depth_per_cubic: f64,
}

pub fn empirical_bridge(spec: &ModexpSpec, arch: &ArchModel) -> Result<BridgeRecord, ModelError> {
    if spec.n > BRIDGE_MAX_BITS {
        return Err(ModelError::BridgeTooLarge);
    }
    let circuit = lower_for(&build_modexp(spec)?, arch)?;
    let measured = scheduler::depth(&circuit);
    let model = QuantumModel::for_adder(spec.adder);
    let n = spec.n as f64;
    let model_depth = model.depth(n);
    Ok(BridgeRecord {
        n: spec.n,
        multipliers: spec.multipliers,
        adder: spec.adder,
        arch: arch.to_string(),
        width: circuit.width(),
        total_gates: circuit.len(),
        measured_depth: measured,
        model,
        model_depth,
        ratio: measured as f64 / model_depth,
        depth_per_cubic: measured as f64 / (n * n * n),
    })
}
