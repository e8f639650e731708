// SPDX-License-Identifier: Apache-2.0

//! Monotone circuits over dual-rail ("flattened") inputs.
//!
//! - [`circuit`]: gate-level IR, netlist format, evaluation and statistics.
//! - [`dual_rail`]: bit flattening and the NOT-eliminating rail transform.
//! - [`tm`]: Turing machine descriptions and a reference simulator.
//! - [`tableau`]: tableau compilation of a machine into a circuit.
//! - [`transducer`]: streaming flattener with working-memory accounting.
//! - [`verifier`]: exhaustive equivalence, monotonicity and census checks.
//! - [`cli`]: the `monoflat` command-line front end.

pub mod circuit;
pub mod cli;
pub mod dual_rail;
pub mod fixtures;
pub mod random;
pub mod report;
pub mod tableau;
pub mod tm;
pub mod transducer;
pub mod verifier;

pub use circuit::{parse_netlist, Circuit, CircuitBuilder, CircuitError, CircuitStats, GateKind, WireId};
pub use dual_rail::{build_eq_classifier, dual_rail_transform, flatten_bits, unflatten_bits, DualRailError};
pub use report::{CounterexampleReport, ReportKind};
pub use tableau::{compile, compile_flattened, compile_with, tableau_trace, CompileOptions, InputMode, TableauError};
pub use tm::{parse_tm, TmError, TuringMachine, Verdict};
pub use transducer::{stream_flatten, TransducerStats};
pub use verifier::{exhaustive_equiv, EquivMode, VerifyError};
