use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcsa::registry::{build, check_probe, Built, Construction, Params, DEFAULT_SAMPLES};
use qcsa::resources::{measure, measure_built, render_scaling, scaling_report, ResourceReport};
use qcsa::sim::{truth_table_with_limit, EXHAUSTIVE_LIMIT};
use qcsa::verify::DEFAULT_SEED;
use qcsa::{netlist, qasm, run, BasisState, Circuit, Domain, WireRole};

#[derive(Parser)]
#[command(
    name = "qcsa",
    version,
    about = "Reversible carry-save arithmetic circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the netlist of a construction.
    Build {
        construction: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run one basis state through a netlist file or construction.
    Simulate {
        target: String,
        #[command(flatten)]
        params: ParamArgs,
        /// Register value, e.g. --set A=3 (repeatable).
        #[arg(long = "set", value_name = "REG=VAL")]
        set: Vec<String>,
    },
    /// Print the full truth table (small circuits only).
    Truthtable {
        target: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Check a construction against its integer oracle.
    Verify {
        construction: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
    },
    /// Qubit, gate and depth counts; `--scaling` prints the asymptotic table instead.
    Resources {
        target: Option<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long, value_delimiter = ',', value_name = "N,N,...")]
        scaling: Vec<u64>,
    },
    /// OpenQASM 2.0 text of a netlist file or construction.
    Export {
        target: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Kv,
}

#[derive(Args, Clone, Default)]
struct ParamArgs {
    /// Operand width for ripple, csa32, csa42, csmul.
    #[arg(short = 'n')]
    n: Option<usize>,
    /// Number of tree inputs.
    #[arg(long)]
    inputs: Option<usize>,
    /// Bit width of each tree input.
    #[arg(short = 'L')]
    l: Option<usize>,
    /// Modular data width N.
    #[arg(long)]
    bits: Option<u32>,
    #[arg(long)]
    modulus: Option<u64>,
    #[arg(long)]
    base: Option<u64>,
    #[arg(long)]
    expwidth: Option<usize>,
}

impl ParamArgs {
    fn params(&self) -> Params {
        Params {
            n: self.n,
            inputs: self.inputs,
            width: self.l,
            bits: self.bits,
            modulus: self.modulus,
            base: self.base,
            expwidth: self.expwidth,
        }
    }
}

enum Failure {
    Usage(String),
    Verification,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn construct(name: &str, args: &ParamArgs) -> Result<Built, Failure> {
    let c: Construction = name.parse()?;
    if c.is_modular() {
        if let Some(m) = args.modulus {
            if m % 2 == 0 {
                return Err(Failure::Usage(format!("modulus {m} must be odd")));
            }
        }
    }
    Ok(build(c, &args.params())?)
}

/// A construction name or a netlist path.
fn load(target: &str, args: &ParamArgs) -> Result<(Circuit, Option<Built>), Failure> {
    if target.parse::<Construction>().is_ok() {
        let b = construct(target, args)?;
        return Ok((b.circuit.clone(), Some(b)));
    }
    let text = fs::read_to_string(target).map_err(|e| Failure::Usage(format!("{target}: {e}")))?;
    let c = netlist::parse(&text).map_err(|e| Failure::Usage(format!("{target}: {e}")))?;
    Ok((c, None))
}

fn write_out(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_set(items: &[String]) -> Result<Vec<(String, u128)>, Failure> {
    items
        .iter()
        .map(|s| {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| Failure::Usage(format!("expected REG=VAL, got `{s}`")))?;
            let v = v
                .parse::<u128>()
                .map_err(|e| Failure::Usage(format!("{s}: {e}")))?;
            Ok((k.to_string(), v))
        })
        .collect()
}

fn simulate(c: &Circuit, set: &[(String, u128)]) -> Outcome {
    let mut state = BasisState::zeros(c.width());
    for (name, v) in set {
        let wires = c
            .register(name)
            .ok_or_else(|| Failure::Usage(format!("no register `{name}`")))?;
        if wires.len() < 128 && v >> wires.len() != 0 {
            return Err(Failure::Usage(format!(
                "{name}={v} does not fit in {} bits",
                wires.len()
            )));
        }
        state.write(wires, *v);
    }
    for (name, wires) in c.registers() {
        let is_input = wires
            .iter()
            .any(|&w| matches!(c.role(w), WireRole::Operand { .. }));
        if is_input && !set.iter().any(|(k, _)| k == name) {
            return Err(Failure::Usage(format!(
                "missing value for register `{name}`"
            )));
        }
    }
    let out = run(c, &state)?;
    for (name, wires) in c.registers() {
        println!("{name}={}", out.read(wires));
    }
    let dirty: Vec<String> = (0..c.width())
        .filter(|&w| c.role(w).is_clean() && out.get(w))
        .map(|w| w.to_string())
        .collect();
    if dirty.is_empty() {
        println!("ancillas clean");
    } else {
        println!("ancillas dirty: {}", dirty.join(" "));
    }
    Ok(())
}

fn verify(b: &Built, seed: u64, samples: u64) -> Outcome {
    let domain = b.default_domain(samples, seed);
    let how = match domain {
        Domain::Exhaustive => "exhaustive".to_string(),
        Domain::Sample { seed, .. } => format!("sampled, seed {seed}"),
    };
    let report = b.verify(domain)?;
    let what = [
        b.construction.to_string(),
        describe(&b.params, b.construction),
    ]
    .join(" ");
    println!("{}: {report} [{how}]", what.trim_end());
    let mut ok = report.passed;
    if let Some(probe) = &b.probe {
        match check_probe(&b.circuit, probe) {
            Ok(p) => {
                println!(
                    "probe wires {} {} at gate {}: both set in {} of {} cases",
                    probe.wires[0], probe.wires[1], probe.gate, p.both_set, p.cases
                );
                ok &= p.both_set == 0;
            }
            Err(e) => println!("probe not checked: {e}"),
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn describe(p: &Params, c: Construction) -> String {
    match c {
        Construction::Qfa | Construction::Qmg | Construction::Qha | Construction::Sum => {
            String::new()
        }
        Construction::Tree => format!(
            "inputs {} width {}",
            p.inputs.unwrap_or(0),
            p.width.unwrap_or(0)
        ),
        Construction::Modexp => format!(
            "N {} M {} base {} expwidth {}",
            p.bits.unwrap_or(0),
            p.modulus.unwrap_or(0),
            p.base.unwrap_or(0),
            p.expwidth.unwrap_or(0)
        ),
        c if c.is_modular() => format!("N {} M {}", p.bits.unwrap_or(0), p.modulus.unwrap_or(0)),
        _ => format!("n {}", p.n.unwrap_or(0)),
    }
}

fn print_report(r: &ResourceReport, format: Format) {
    match format {
        Format::Table => print!("{r}"),
        Format::Kv => print!("{}", r.render_key_values()),
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Build {
            construction,
            params,
            output,
        } => {
            let b = construct(&construction, &params)?;
            write_out(output.as_deref(), &netlist::emit(&b.circuit))
        }
        Command::Simulate {
            target,
            params,
            set,
        } => {
            let (c, _) = load(&target, &params)?;
            simulate(&c, &parse_set(&set)?)
        }
        Command::Truthtable { target, params } => {
            let (c, _) = load(&target, &params)?;
            let t = truth_table_with_limit(&c, EXHAUSTIVE_LIMIT)?;
            print!("{}", t.render());
            Ok(())
        }
        Command::Verify {
            construction,
            params,
            seed,
            samples,
        } => verify(&construct(&construction, &params)?, seed, samples),
        Command::Resources {
            target,
            params,
            format,
            scaling,
        } => {
            if !scaling.is_empty() {
                if let Some(&n) = scaling.iter().find(|&&n| n < 2) {
                    return Err(Failure::Usage(format!(
                        "scaling sizes must be >= 2, got {n}"
                    )));
                }
                print!("{}", render_scaling(&scaling_report(&scaling)));
                return Ok(());
            }
            let target = target
                .ok_or_else(|| Failure::Usage("resources needs a target or --scaling".into()))?;
            let report = match load(&target, &params)? {
                (_, Some(b)) => measure_built(&b),
                (c, None) => measure(&c),
            };
            print_report(&report, format);
            Ok(())
        }
        Command::Export {
            target,
            params,
            output,
        } => {
            let (c, _) = load(&target, &params)?;
            write_out(output.as_deref(), &qasm::export(&c))
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
