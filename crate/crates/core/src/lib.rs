//! Reversible circuits for modular exponentiation, their depth on two
//! abstract architectures, and the closed-form cost models they calibrate.

pub mod architecture;
pub mod arithmetic;
pub mod circuit;
pub mod oracle;
pub mod scaling;
pub mod scheduler;

pub use architecture::{check_conformance, lower_for, route_linear, ArchModel, ArchName};
pub use arithmetic::{
    build_adder, build_const_modadd, build_controlled_adder, build_modexp, build_modmul_const,
    AdderKind, ModexpSpec,
};
pub use circuit::{Circuit, Gate, GateKind, QubitId, Register};
pub use oracle::{simulate, BasisState, CheckOutcome};
pub use scaling::{ClassicalModel, QuantumModel};
pub use scheduler::{asap_schedule, metrics, Metrics, Schedule};

/// Exact scalar for matrix identities.
pub type Exact = num_rational::Ratio<i64>;
pub type ClassicalModelF64 = scaling::ClassicalModel<f64>;
pub type SeriesRowF64 = scaling::SeriesRow<f64>;
