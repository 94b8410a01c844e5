use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qecft::bounds::bound_report;
use qecft::codes::{css_code, ClassicalLinearCode};
use qecft::decoder::DecoderTable;
use qecft::gadgets::{
    cat_measurement_circuit, check_transversal_clifford, pi8_ancilla_check_circuit, pi8_injection_circuit,
    shor_ec_round_with, steane_ec_circuit, ShorOptions, TransversalGate, VoteRule,
};
use qecft::io::{load_pcm, load_stab, write_stab};
use qecft::montecarlo::{concatenated_rate, estimate_logical_rate, levels_needed, Protocol, Sweep};
use qecft::{Distance, Error, PauliOperator, StabilizerCode};

#[derive(Parser)]
#[command(
    name = "qecft",
    version,
    about = "Stabilizer codes, fault-tolerant gadgets and logical error rates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a code given as a .stab file
    #[command(subcommand)]
    Code(CodeCmd),
    /// Build CSS codes from parity check matrices
    #[command(subcommand)]
    Css(CssCmd),
    /// Singleton, Hamming and Gilbert-Varshamov bounds for [[n,k,d]]
    Bounds {
        n: usize,
        k: usize,
        d: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Transversal gate checks
    #[command(subcommand)]
    Ft(FtCmd),
    /// Emit gadget circuits
    #[command(subcommand)]
    Gadget(GadgetCmd),
    /// Monte Carlo simulation
    #[command(subcommand)]
    Sim(SimCmd),
    /// Concatenated code predictions
    #[command(subcommand)]
    Concat(ConcatCmd),
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Check that the generators commute and are independent
    Validate { path: PathBuf },
    /// Minimum weight of a logical operator, searched up to --cap
    Distance {
        path: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Print the lookup decoder table
    Table {
        path: PathBuf,
        /// Correct all errors up to this weight
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
}

#[derive(Subcommand)]
enum CssCmd {
    /// Z checks from H1, X checks from H2
    Build {
        h1: PathBuf,
        h2: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FtCmd {
    Check {
        path: PathBuf,
        /// h, s, cnot, t, or a Pauli such as XXXXXXX
        #[arg(long)]
        gate: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetKind {
    ShorEc,
    SteaneEc,
    Cat,
    Pi8Inject,
    Pi8Check,
}

#[derive(Clone, Copy, ValueEnum)]
enum Vote {
    Whole,
    Bitwise,
}

#[derive(Subcommand)]
enum GadgetCmd {
    Emit {
        /// Code file; not needed for the pi/8 gadgets
        path: Option<PathBuf>,
        #[arg(long, value_enum)]
        gadget: GadgetKind,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Generator index measured by the cat gadget
        #[arg(long, default_value_t = 0)]
        generator: usize,
        /// Cat verification checks; defaults to weight - 1
        #[arg(long)]
        verify_rounds: Option<usize>,
        #[arg(long, value_enum, default_value_t = Vote::Whole)]
        vote: Vote,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Ron,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    CodeCapacity,
    CircuitShor,
    CircuitSteane,
}

#[derive(Args)]
struct SweepArgs {
    path: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Physical error rates; repeat or separate with commas
    #[arg(long = "p", value_delimiter = ',', required = true)]
    p: Vec<f64>,
    #[arg(long)]
    shots: u64,
    #[arg(long)]
    seed: u64,
    /// Thread count; 0 uses all cores. Never changes results.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum SimCmd {
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum ConcatCmd {
    Predict {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        pt: f64,
        #[arg(long, conflicts_with = "epsilon", required_unless_present = "epsilon")]
        levels: Option<u32>,
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

enum Failure {
    Lib(Error),
    Usage(String),
    Capped(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<(), Failure>;

fn emit(text: &str, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Lib(Error::Io(format!("{}: {e}", path.display())))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn code_label(code: &StabilizerCode) -> String {
    format!("[[{},{}]]", code.n(), code.k())
}

fn run_code(cmd: CodeCmd) -> CmdResult {
    match cmd {
        CodeCmd::Validate { path } => {
            let code = load_stab(&path)?;
            println!(
                "valid {} code, {} generators{}",
                code_label(&code),
                code.num_generators(),
                if code.is_css() { ", CSS" } else { "" }
            );
        }
        CodeCmd::Distance { path, cap } => {
            let code = load_stab(&path)?;
            let cap = cap.unwrap_or(code.n());
            match code.distance(cap)? {
                Distance::Exact(d) => println!("{d}"),
                Distance::ExceedsCap(c) => {
                    return Err(Failure::Capped(format!(
                        "exceeds cap: no logical operator of weight <= {c}"
                    )))
                }
            }
        }
        CodeCmd::Table { path, t } => {
            let code = load_stab(&path)?;
            let table = DecoderTable::build(&code, t);
            for (s, p, tie) in table.entries() {
                println!("{s} {p}{}", if tie { " tie" } else { "" });
            }
        }
    }
    Ok(())
}

fn parse_gate(gate: &str) -> Result<TransversalGate, Failure> {
    Ok(match gate.to_ascii_lowercase().as_str() {
        "h" => TransversalGate::H,
        "s" => TransversalGate::S,
        "cnot" | "cx" => TransversalGate::Cnot,
        "t" => TransversalGate::T,
        _ => TransversalGate::Pauli(
            gate.parse::<PauliOperator>()
                .map_err(|_| Failure::Usage(format!("unknown gate `{gate}`")))?,
        ),
    })
}

fn run_gadget(cmd: GadgetCmd) -> CmdResult {
    let GadgetCmd::Emit {
        path,
        gadget,
        reps,
        generator,
        verify_rounds,
        vote,
        out,
    } = cmd;
    let code = || -> Result<StabilizerCode, Failure> {
        let p = path
            .as_ref()
            .ok_or_else(|| Failure::Usage("this gadget needs a code file".into()))?;
        Ok(load_stab(p)?)
    };
    let circuit = match gadget {
        GadgetKind::ShorEc => shor_ec_round_with(
            &code()?,
            &ShorOptions {
                repetitions: reps,
                verify_rounds,
                vote: match vote {
                    Vote::Whole => VoteRule::WholeSyndrome,
                    Vote::Bitwise => VoteRule::Bitwise,
                },
            },
        )?,
        GadgetKind::SteaneEc => steane_ec_circuit(&code()?)?,
        GadgetKind::Cat => {
            let code = code()?;
            let g = code
                .generators()
                .get(generator)
                .ok_or_else(|| Failure::Usage(format!("no generator {generator}")))?;
            cat_measurement_circuit(&code, g, verify_rounds.unwrap_or(g.weight().saturating_sub(1)))?
        }
        GadgetKind::Pi8Inject => pi8_injection_circuit()?,
        GadgetKind::Pi8Check => pi8_ancilla_check_circuit()?,
    };
    emit(&circuit.to_text(), out.as_deref())
}

fn run_sweep(a: SweepArgs) -> CmdResult {
    let code = load_stab(&a.path)?;
    let protocol = match a.mode {
        Mode::CodeCapacity => Protocol::CodeCapacity,
        Mode::CircuitShor => Protocol::CircuitShor,
        Mode::CircuitSteane => Protocol::CircuitSteane,
    };
    let report = estimate_logical_rate(
        &code,
        &Sweep {
            protocol,
            ps: a.p,
            shots: a.shots,
            seed: a.seed,
            workers: a.workers,
        },
    )?;
    let text = match a.format {
        Format::Csv => report.to_csv(),
        Format::Ron => report.to_ron()? + "\n",
        Format::Text => {
            let mut s = format!("{protocol} sweep on {} seed {}\n", code_label(&code), report.seed);
            s.push_str("p          shots      failures  aborts  p_L          95% interval\n");
            for pt in &report.points {
                s.push_str(&format!(
                    "{:<10} {:<10} {:<9} {:<7} {:<12.4e} [{:.4e}, {:.4e}]\n",
                    pt.p, pt.shots, pt.failures, pt.aborts, pt.p_l, pt.ci_low, pt.ci_high
                ));
            }
            match (report.fit_exponent, report.fit_c, report.pseudothreshold) {
                (Some(e), Some(c), Some(pt)) => {
                    s.push_str(&format!("fit: exponent {e:.3}, C {c:.4e}, pseudothreshold {pt:.4e}\n"))
                }
                _ => s.push_str("fit: needs at least 3 points with failures\n"),
            }
            s
        }
    };
    emit(&text, a.out.as_deref())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Code(cmd) => run_code(cmd),
        Command::Css(CssCmd::Build { h1, h2, out }) => {
            let c1 = ClassicalLinearCode::new(load_pcm(&h1)?);
            let c2 = ClassicalLinearCode::new(load_pcm(&h2)?);
            let code = css_code(&c1, &c2)?;
            if out.is_some() {
                eprintln!("built {} CSS code", code_label(&code));
            }
            emit(&write_stab(&code), out.as_deref())
        }
        Command::Bounds { n, k, d, format } => {
            let r = bound_report(n, k, d)?;
            match format {
                Format::Ron => {
                    let text = ron::ser::to_string_pretty(&r, Default::default())
                        .map_err(|e| Error::Internal(e.to_string()))?;
                    println!("{text}");
                }
                Format::Csv => {
                    println!(
                        "n,k,d,singleton_ok,singleton_slack,hamming_packing_slack,hamming_rate_bound,gv_rate_bound"
                    );
                    println!(
                        "{n},{k},{d},{},{},{},{},{}",
                        r.singleton_ok,
                        r.singleton_slack,
                        r.hamming_packing_slack,
                        r.hamming_rate_bound,
                        r.gv_rate_bound
                    );
                }
                Format::Text => {
                    println!("[[{n},{k},{d}]]");
                    println!(
                        "Singleton: {} (slack {})",
                        if r.singleton_ok { "satisfied" } else { "violated" },
                        r.singleton_slack
                    );
                    println!("Hamming packing slack: {}", r.hamming_packing_slack);
                    println!("Hamming rate bound: {:.6}", r.hamming_rate_bound);
                    println!("Gilbert-Varshamov rate: {:.6}", r.gv_rate_bound);
                    println!("{}", r.notes);
                }
            }
            Ok(())
        }
        Command::Ft(FtCmd::Check { path, gate }) => {
            let code = load_stab(&path)?;
            let action = check_transversal_clifford(&code, &parse_gate(&gate)?)?;
            println!("{action}");
            Ok(())
        }
        Command::Gadget(cmd) => run_gadget(cmd),
        Command::Sim(SimCmd::Sweep(a)) => run_sweep(a),
        Command::Concat(ConcatCmd::Predict { p, pt, levels, epsilon }) => {
            if let Some(l) = levels {
                println!("L  p_L");
                for level in 0..=l {
                    println!("{level}  {:.6e}", concatenated_rate(p, pt, level)?);
                }
            }
            if let Some(eps) = epsilon {
                let l = levels_needed(p, pt, eps)?;
                println!("levels needed: {l} (p_L = {:.6e})", concatenated_rate(p, pt, l)?);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Capped(msg)) => {
            println!("{msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e @ Error::Capacity { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
