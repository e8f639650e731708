// SPDX-License-Identifier: Apache-2.0

//! `monoflat` command-line front end.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 usage or input error.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{assignment_from_index, format_bits, parse_bits, parse_netlist, Circuit};
use crate::dual_rail::{dual_rail_transform, flatten_bits};
use crate::random::{random_circuit, RandomCircuitParams};
use crate::tableau::{compile_with, CompileOptions, InputMode, DEFAULT_GATE_CAP};
use crate::tm::{parse_tm, TuringMachine, Verdict};
use crate::transducer::stream_flatten_io;
use crate::verifier::{
    check_semantic_monotone, enumerate_monotone_functions, exhaustive_equiv, refute_eq_monotone, size_report, EquivMode,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "monoflat", version, about = "Monotone circuits over dual-rail inputs")]
struct Cli {
    /// Upper bound on the number of gates a compiled tableau may have.
    #[arg(long, global = true, default_value_t = DEFAULT_GATE_CAP)]
    gate_cap: usize,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a Turing machine into a circuit via its tableau.
    CompileTm(CompileArgs),
    /// Flatten a bit string, or dual-rail transform a netlist.
    Flatten(FlattenArgs),
    /// Run an exhaustive check.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Flatten bits from stdin to stdout; stats go to stderr.
    StreamFlatten,
    /// Print gate statistics of a netlist.
    Stats { circuit: PathBuf },
    /// Print a Graphviz description of a netlist.
    EmitDot { circuit: PathBuf },
    /// Print the decoded tableau of a machine run.
    Trace {
        machine: PathBuf,
        #[arg(long)]
        bits: String,
        #[arg(short = 't', long)]
        steps: usize,
    },
}

#[derive(Debug, Args)]
struct CompileArgs {
    machine: PathBuf,
    /// Input length.
    #[arg(short = 'n', long = "inputs")]
    n: usize,
    /// Step bound.
    #[arg(short = 't', long = "steps")]
    t: usize,
    /// Emit the NOT-free circuit over rail-pair inputs.
    #[arg(long)]
    flattened: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FlattenArgs {
    #[arg(required_unless_present = "bits", conflicts_with = "bits")]
    circuit: Option<PathBuf>,
    #[arg(long)]
    bits: Option<String>,
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Exhaustive equivalence of two netlists.
    Equiv {
        /// The candidate reads flattened assignments.
        #[arg(long)]
        flattened: bool,
        reference: PathBuf,
        candidate: PathBuf,
    },
    /// Exhaustive semantic monotonicity of a netlist.
    Monotone { circuit: PathBuf },
    /// List all monotone truth tables of the given arity.
    Census {
        #[arg(short = 'n', long = "arity")]
        n: usize,
    },
    /// Show that equality is not a monotone function.
    EqRefute {
        #[arg(short = 'n', long = "pairs", default_value_t = 1)]
        n: usize,
    },
    /// Dual-rail transform random circuits and check each against its source.
    DualRail {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        max_inputs: usize,
        #[arg(long, default_value_t = 60)]
        max_gates: usize,
    },
    /// Compare a compiled tableau with the simulator on every input.
    Tableau {
        machine: PathBuf,
        #[arg(short = 'n', long = "inputs")]
        n: usize,
        #[arg(short = 't', long = "steps")]
        t: usize,
    },
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

/// Failure of a command; maps to an exit code.
enum Failure {
    Usage(String),
    Property,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io { stdin, stdout, stderr };
    let result = dispatch(&cli, &mut io);
    let _ = io.stdout.flush();
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Property) => EXIT_PROPERTY_FAILED,
        Err(Failure::Usage(message)) => {
            let _ = writeln!(io.stderr, "error: {message}");
            EXIT_USAGE
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    parse_netlist(&read_text(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_machine(path: &Path) -> Result<TuringMachine, Failure> {
    parse_tm(&read_text(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn dispatch(cli: &Cli, io: &mut Io<'_>) -> Outcome {
    let options = CompileOptions { gate_cap: cli.gate_cap };
    match &cli.command {
        Command::CompileTm(args) => {
            let tm = load_machine(&args.machine)?;
            let mode = if args.flattened {
                InputMode::Flattened
            } else {
                InputMode::Standard
            };
            let (circuit, _) = compile_with(&tm, args.n, args.t, mode, &options)?;
            let text = circuit.to_netlist();
            match &args.out {
                Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => io.stdout.write_all(text.as_bytes())?,
            }
            writeln!(io.stderr, "{}", circuit.stats())?;
        }
        Command::Flatten(args) => match (&args.bits, &args.circuit) {
            (Some(bits), _) => {
                let bits = parse_bits(bits)?;
                writeln!(io.stdout, "{}", flatten_bits(&bits))?;
            }
            (None, Some(path)) => {
                let m = dual_rail_transform(&load_circuit(path)?)?;
                io.stdout.write_all(m.to_netlist().as_bytes())?;
            }
            (None, None) => return Err(Failure::Usage("expected a netlist path or --bits".into())),
        },
        Command::Verify(cmd) => verify(cmd, cli, &options, io)?,
        Command::StreamFlatten => {
            let stats = stream_flatten_io(&mut *io.stdin, &mut *io.stdout)?;
            writeln!(io.stderr, "{stats}")?;
        }
        Command::Stats { circuit } => {
            writeln!(io.stdout, "{}", load_circuit(circuit)?.stats())?;
        }
        Command::EmitDot { circuit } => {
            io.stdout.write_all(load_circuit(circuit)?.to_dot().as_bytes())?;
        }
        Command::Trace { machine, bits, steps } => {
            let tm = load_machine(machine)?;
            let x = parse_bits(bits)?;
            let (circuit, schema) = compile_with(&tm, x.len(), *steps, InputMode::Standard, &options)?;
            let rows = schema.decode(&circuit.evaluate_all(&x)?)?;
            for row in rows {
                let cells: Vec<String> = row.iter().map(|c| c.display(&tm).to_string()).collect();
                writeln!(io.stdout, "{}", cells.join(" "))?;
            }
        }
    }
    Ok(())
}

fn verify(cmd: &VerifyCommand, cli: &Cli, options: &CompileOptions, io: &mut Io<'_>) -> Outcome {
    match cmd {
        VerifyCommand::Equiv {
            flattened,
            reference,
            candidate,
        } => {
            let (b, m) = (load_circuit(reference)?, load_circuit(candidate)?);
            let mode = if *flattened {
                EquivMode::Flattened
            } else {
                EquivMode::Raw
            };
            match exhaustive_equiv(&b, &m, mode)? {
                None => writeln!(
                    io.stdout,
                    "equivalent on all {} assignments ({mode})",
                    1u64 << b.input_count()
                )?,
                Some(report) => {
                    writeln!(io.stdout, "{report}")?;
                    return Err(Failure::Property);
                }
            }
        }
        VerifyCommand::Monotone { circuit } => match check_semantic_monotone(&load_circuit(circuit)?)? {
            None => writeln!(io.stdout, "monotone")?,
            Some(report) => {
                writeln!(io.stdout, "{report}")?;
                return Err(Failure::Property);
            }
        },
        VerifyCommand::Census { n } => {
            let census = enumerate_monotone_functions(*n)?;
            for table in &census {
                writeln!(io.stdout, "{table}")?;
            }
            writeln!(io.stderr, "{} monotone functions of {n} inputs", census.len())?;
        }
        VerifyCommand::EqRefute { n } => {
            let refutation = refute_eq_monotone(*n)?;
            writeln!(io.stdout, "{refutation}")?;
            if !refutation.holds() {
                return Err(Failure::Property);
            }
        }
        VerifyCommand::DualRail {
            samples,
            max_inputs,
            max_gates,
        } => {
            if *max_inputs > 16 {
                return Err(Failure::Usage("--max-inputs must be at most 16".into()));
            }
            let params = RandomCircuitParams {
                max_inputs: *max_inputs,
                max_gates: *max_gates,
                ..RandomCircuitParams::default()
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let mut worst: f64 = 0.0;
            for sample in 0..*samples {
                let b = random_circuit(&mut rng, &params);
                let m = dual_rail_transform(&b)?;
                let size = size_report(&b, &m);
                worst = worst.max(size.ratio);
                let failure = if let Some(report) = exhaustive_equiv(&b, &m, EquivMode::Flattened)? {
                    Some(report.to_string())
                } else if !m.is_structurally_monotone() {
                    Some(format!("transform contains {} NOT gates", m.not_count()))
                } else if size.ratio > 2.0 {
                    Some(format!("gate ratio {:.4} exceeds 2", size.ratio))
                } else {
                    None
                };
                if let Some(message) = failure {
                    writeln!(io.stdout, "sample {sample} (seed {}): {message}", cli.seed)?;
                    io.stdout.write_all(b.to_netlist().as_bytes())?;
                    return Err(Failure::Property);
                }
            }
            writeln!(io.stdout, "{samples} samples ok, worst gate ratio {worst:.4}")?;
        }
        VerifyCommand::Tableau { machine, n, t } => {
            let tm = load_machine(machine)?;
            if *n > MAX_TABLEAU_CHECK_INPUTS {
                return Err(Failure::Usage(format!(
                    "exhaustive tableau check supports at most {MAX_TABLEAU_CHECK_INPUTS} inputs"
                )));
            }
            let (circuit, schema) = compile_with(&tm, *n, *t, InputMode::Standard, options)?;
            for index in 0..1u64 << n {
                let x = assignment_from_index(index, *n);
                let values = circuit.evaluate_all(&x)?;
                if let Some(report) = schema.one_hot_violation(&x, &values) {
                    writeln!(io.stdout, "{report}")?;
                    return Err(Failure::Property);
                }
                let got = values[circuit.outputs()[0].index()];
                let (verdict, _) = tm.run(&x, *t);
                if got != (verdict == Verdict::Accept) {
                    writeln!(
                        io.stdout,
                        "input {} simulator {verdict} circuit {}",
                        format_bits(&x),
                        u8::from(got)
                    )?;
                    return Err(Failure::Property);
                }
            }
            writeln!(
                io.stdout,
                "circuit agrees with the simulator on all {} inputs",
                1u64 << n
            )?;
        }
    }
    Ok(())
}

const MAX_TABLEAU_CHECK_INPUTS: usize = 20;
