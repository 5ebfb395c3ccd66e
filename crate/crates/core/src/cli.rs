//! The `ptmtopo` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::env::{build_env, distance_spectrum, invariant_delta, parse_rational, render_rational};
use crate::its::{
    bisim_check, bisim_witness, env_classify, extract_its, iso_check, render_partition,
    render_trace, separating_trace, Its, ObservationEnv,
};
use crate::machine::{run_stream, InputSpace, Policy, PtMachine};
use crate::path::{h1_class, EdgePath, Loop};
use crate::topo::{betti, persistence, Filtration, SimplicialComplex};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DIVERGED: i32 = 2;
pub const EXIT_DISTINGUISHABLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ptmtopo", version, about = "Persistent Turing machines and their topological environments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    Deterministic,
    LexFirst,
    Seeded,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Iso,
    Bisim,
    Stream,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EnvKind {
    Tm,
    Stream,
}

#[derive(clap::Args, Debug)]
struct RunOpts {
    /// Comma-separated input strings; `_` or an empty item is the empty string
    #[arg(long, allow_hyphen_values = true)]
    inputs: String,
    #[arg(long, default_value_t = 1000)]
    fuel: usize,
    #[arg(long, value_enum, default_value = "deterministic")]
    policy: PolicyArg,
    /// Required with `--policy seeded`
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a machine on a sequence of inputs
    Simulate {
        machine: PathBuf,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Unfold a machine into a finite ITS
    ExtractIts {
        machine: PathBuf,
        /// Longest input string
        #[arg(long, default_value_t = 1)]
        bound: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
        /// Input symbols (defaults to the machine alphabet)
        #[arg(long)]
        symbols: Option<String>,
    },
    /// Compare two ITS files
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Trace depth for `--mode stream`
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Partition ITS files by an observation environment
    Classify {
        #[arg(required = true)]
        systems: Vec<PathBuf>,
        #[arg(long, value_enum)]
        env: EnvKind,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Build the environment complexes of a run
    BuildEnv {
        machine: PathBuf,
        #[command(flatten)]
        run: RunOpts,
        /// Scale, as a decimal or `p/q`
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 2)]
        maxdim: usize,
        /// Write one complex file per snapshot here
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Betti numbers of a complex file
    Homology {
        complex: PathBuf,
        #[arg(long)]
        maxdim: Option<usize>,
    },
    /// Barcode of a filtration file
    Persistence {
        filtration: PathBuf,
        #[arg(long)]
        maxdim: Option<usize>,
    },
    /// Feasibility and homology class of a path file
    ClassifyPath { complex: PathBuf, path: PathBuf },
    /// Configurations of a run and their distinct pairwise distances
    Distances {
        machine: PathBuf,
        #[command(flatten)]
        run: RunOpts,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(String, i32), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn in_file<T, E: std::fmt::Display>(path: &Path, r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_machine(path: &Path) -> Result<PtMachine, Failure> {
    in_file(path, PtMachine::parse(&read(path)?))
}

fn load_its(path: &Path) -> Result<Its, Failure> {
    in_file(path, Its::parse(&read(path)?))
}

fn load_complex(path: &Path) -> Result<SimplicialComplex, Failure> {
    in_file(path, SimplicialComplex::parse(&read(path)?))
}

fn inputs(raw: &str) -> Vec<String> {
    raw.split(',').map(crate::machine::parse_word).collect()
}

fn policy(run: &RunOpts) -> Result<Policy, Failure> {
    match (run.policy, run.seed) {
        (PolicyArg::Seeded, Some(seed)) => Ok(Policy::Seeded(seed)),
        (PolicyArg::Seeded, None) => Err(Failure("--policy seeded needs --seed".into())),
        (_, Some(_)) => Err(Failure("--seed only applies to --policy seeded".into())),
        (PolicyArg::Deterministic, None) => Ok(Policy::Deterministic),
        (PolicyArg::LexFirst, None) => Ok(Policy::LexFirst),
    }
}

fn simulate(machine: &Path, run: &RunOpts) -> Outcome {
    let m = load_machine(machine)?;
    let stream = run_stream(&m, &inputs(&run.inputs), run.fuel, policy(run)?)?;
    let mut out = String::new();
    for (i, o) in stream.pairs() {
        out.push_str(&format!("{} / {o}\n", crate::machine::render_word(&i)));
    }
    let code = if stream.diverged() { EXIT_DIVERGED } else { EXIT_OK };
    Ok((out, code))
}

fn compare(a: &Path, b: &Path, mode: Mode, depth: Option<usize>) -> Outcome {
    let (x, y) = (load_its(a)?, load_its(b)?);
    let verdict = |eq: bool, body: String| {
        let head = if eq { "equivalent\n" } else { "distinguishable\n" };
        let code = if eq { EXIT_OK } else { EXIT_DISTINGUISHABLE };
        Ok((format!("{head}{body}"), code))
    };
    match mode {
        Mode::Iso => match iso_check(&x, &y) {
            Some(f) => verdict(
                true,
                f.iter().map(|(s, t)| format!("{s} -> {t}\n")).collect(),
            ),
            None => verdict(false, "no root-preserving bijection\n".into()),
        },
        Mode::Bisim => match bisim_check(&x, &y) {
            Some(rel) => verdict(true, format!("relation: {} pairs\n", rel.len())),
            None => {
                let phi = bisim_witness(&x, &y).expect("roots are separated");
                verdict(false, format!("formula: {phi}\n"))
            }
        },
        Mode::Stream => {
            let depth = depth.ok_or_else(|| Failure("--mode stream needs --depth".into()))?;
            match separating_trace(&x, &y, depth)? {
                None => verdict(true, format!("depth: {depth}\n")),
                Some(t) => verdict(false, format!("trace: {}\n", render_trace(&t))),
            }
        }
    }
}

fn classify(systems: &[PathBuf], env: EnvKind, depth: Option<usize>) -> Outcome {
    let its = systems.iter().map(|p| load_its(p)).collect::<Result<Vec<_>, _>>()?;
    let env = match (env, depth) {
        (EnvKind::Tm, None) => ObservationEnv::tm_style(),
        (EnvKind::Tm, Some(_)) => return Err(Failure("--env tm has fixed depth 1".into())),
        (EnvKind::Stream, Some(d)) => ObservationEnv::stream_style(d)?,
        (EnvKind::Stream, None) => return Err(Failure("--env stream needs --depth".into())),
    };
    let names: Vec<String> = systems.iter().map(|p| p.display().to_string()).collect();
    Ok((render_partition(&env_classify(&its, &env)?, &names), EXIT_OK))
}

fn build(
    machine: &Path,
    run: &RunOpts,
    eps: &str,
    maxdim: usize,
    out_dir: Option<&Path>,
) -> Outcome {
    let m = load_machine(machine)?;
    let eps = parse_rational(eps)
        .filter(|e| *e >= num_rational::Rational64::from_integer(0))
        .ok_or_else(|| Failure(format!("bad --eps {eps:?}")))?;
    let trace = build_env(&m, &inputs(&run.inputs), eps, maxdim, run.fuel, policy(run)?)?;
    let mut out = String::new();
    for s in &trace.snapshots {
        out.push_str(&s.summary());
        out.push('\n');
        if let Some(dir) = out_dir {
            let file = dir.join(format!("{}.cplx", s.time));
            fs::write(&file, s.complex.to_text())
                .map_err(|e| Failure(format!("{}: {e}", file.display())))?;
        }
    }
    for row in invariant_delta(&trace) {
        out.push_str(&row.render());
        out.push('\n');
    }
    Ok((out, EXIT_OK))
}

fn classify_path(complex: &Path, path: &Path) -> Outcome {
    let host = Arc::new(load_complex(complex)?);
    let p = in_file(path, EdgePath::parse(host, &read(path)?))?;
    if let Some(v) = p.violation() {
        return Ok((format!("{v}\n"), EXIT_OK));
    }
    if p.first() != p.last() {
        return Ok((format!("feasible: open path {} -> {}\n", p.first(), p.last()), EXIT_OK));
    }
    let class = h1_class(&Loop::new(p)?)?;
    Ok((class.to_text(), EXIT_OK))
}

fn distances(machine: &Path, run: &RunOpts) -> Outcome {
    let m = load_machine(machine)?;
    let zero = num_rational::Rational64::from_integer(0);
    let trace = build_env(&m, &inputs(&run.inputs), zero, 0, run.fuel, policy(run)?)?;
    let points = &trace.last().points;
    let mut out = String::new();
    for (i, p) in points.iter().enumerate() {
        out.push_str(&format!("{i} {} {}\n", p.time, p.payload));
    }
    let spectrum: Vec<String> = distance_spectrum(points).into_iter().map(render_rational).collect();
    out.push_str(&format!("spectrum: {}\n", spectrum.join(" ")));
    Ok((out, EXIT_OK))
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Simulate { machine, run } => simulate(&machine, &run),
        Command::ExtractIts {
            machine,
            bound,
            depth,
            fuel,
            symbols,
        } => {
            let m = load_machine(&machine)?;
            let space = match symbols {
                Some(s) => InputSpace::new(s.chars(), bound),
                None => InputSpace::over_alphabet(&m, bound),
            };
            Ok((extract_its(&m, &space, depth, fuel)?.to_text(), EXIT_OK))
        }
        Command::Compare { a, b, mode, depth } => compare(&a, &b, mode, depth),
        Command::Classify {
            systems,
            env,
            depth,
        } => classify(&systems, env, depth),
        Command::BuildEnv {
            machine,
            run,
            eps,
            maxdim,
            out_dir,
        } => build(&machine, &run, &eps, maxdim, out_dir.as_deref()),
        Command::Homology { complex, maxdim } => {
            let k = load_complex(&complex)?;
            let maxdim = maxdim.unwrap_or_else(|| k.dim().unwrap_or(0));
            Ok((betti(&k, maxdim).to_text(), EXIT_OK))
        }
        Command::Persistence { filtration, maxdim } => {
            let f = in_file(&filtration, Filtration::parse(&read(&filtration)?))?;
            let maxdim = maxdim.unwrap_or_else(|| f.complex().dim().unwrap_or(0));
            Ok((persistence(&f, maxdim).to_text(), EXIT_OK))
        }
        Command::ClassifyPath { complex, path } => classify_path(&complex, &path),
        Command::Distances { machine, run } => distances(&machine, &run),
    }
}

/// Runs one invocation and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match dispatch(cli.command) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}
