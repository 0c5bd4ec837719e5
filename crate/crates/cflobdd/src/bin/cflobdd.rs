//! Command-line front end: benchmark construction, quantum-algorithm runs,
//! and diagram export.
//!
//! Exit codes: 0 success, 2 bad arguments or unparsable input, 3 resource
//! guard breached, 4 Simon's algorithm ran out of sample budget.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use cflobdd::{
    add_relation, apply_boolean, apply_numeric, bv, count_paths, dj, eq_relation, ghz, grover,
    hadamard, identity, kronecker_v1, matrix_mult, measure_bits, not_matrix, parse_text,
    projection, qft, sample_assignment, serialize_text, simon, to_dot, AmpMode, BoolOp,
    CflobddError, CflobddId, DjOracle, DjVerdict, Level, Manager, NumOp, StepTrace,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

const EXIT_BAD_ARGS: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;
const DEFAULT_MAX_LEVEL: Level = 24;
const DEFAULT_MAX_SHOTS: u64 = 1_000_000;

#[derive(Parser)]
#[command(name = "cflobdd", version, about = "CFLOBDD benchmarks, quantum runs, and exports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a benchmark structure and report its size and build time.
    Bench(BenchArgs),
    /// Run a quantum algorithm and report sizes, traces, and measurements.
    Quantum(QuantumArgs),
    /// Print a structure in DOT or the stable text format.
    Dump(DumpArgs),
}

#[derive(Args)]
struct BenchArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Structure level (see each suite's help for what it parameterizes).
    #[arg(long)]
    level: Option<Level>,
    /// Total variable count; the suite maps it to a level.
    #[arg(long)]
    nvars: Option<u64>,
    #[arg(long)]
    json: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Echoed into the report; benchmarks are deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Level guard (default 24, or the CFLOBDD_MAX_LEVEL environment
    /// variable when set).
    #[arg(long)]
    max_level: Option<Level>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    /// Exclusive-or of all variables, folded from projections.
    Xor,
    /// Pairwise equality of interleaved x/y registers.
    Eq,
    /// The addition relation X + Y = Z (level counts triple blocks).
    Add,
    /// Walsh-Hadamard matrix.
    Hadamard,
    /// H*I + X*H + I*X via symbolic matrix multiplication.
    Matmult,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Xor => "xor",
            Suite::Eq => "eq",
            Suite::Add => "add",
            Suite::Hadamard => "hadamard",
            Suite::Matmult => "matmult",
        }
    }
}

#[derive(Args)]
struct QuantumArgs {
    #[arg(value_enum)]
    algo: Algo,
    /// Data qubits (problem size, before any padding).
    #[arg(long)]
    qubits: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Measurements to draw from the final state.
    #[arg(long, default_value_t = 1)]
    shots: u64,
    #[arg(long)]
    json: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Planted secret for bv or simon (default: drawn from the seed).
    #[arg(long)]
    secret: Option<u64>,
    /// Marked index for grover (default: drawn from the seed).
    #[arg(long)]
    marked: Option<u64>,
    /// Basis-state input for qft (default: drawn from the seed).
    #[arg(long)]
    input: Option<u64>,
    /// Oracle kind for dj.
    #[arg(long, value_enum)]
    oracle: Option<OracleKind>,
    /// Amplitude arithmetic for qft.
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Level guard (default 24, or CFLOBDD_MAX_LEVEL when set).
    #[arg(long)]
    max_level: Option<Level>,
    /// Shot guard (default one million).
    #[arg(long)]
    max_shots: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Ghz,
    Bv,
    Dj,
    Simon,
    Grover,
    Qft,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Ghz => "ghz",
            Algo::Bv => "bv",
            Algo::Dj => "dj",
            Algo::Simon => "simon",
            Algo::Grover => "grover",
            Algo::Qft => "qft",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    /// f(x) = 0.
    Constant0,
    /// f(x) = 1.
    Constant1,
    /// f(x) = x0: balanced.
    Balanced,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Grid,
}

#[derive(Args)]
struct DumpArgs {
    /// Emit DOT.
    #[arg(long)]
    dot: bool,
    /// Emit the stable text serialization.
    #[arg(long)]
    text: bool,
    /// Build one of the library structures.
    #[arg(long, value_enum)]
    structure: Option<Structure>,
    /// Level for --structure.
    #[arg(long)]
    level: Option<Level>,
    /// Variable index for --structure projection.
    #[arg(long)]
    index: Option<u64>,
    /// Parse a previously dumped text file instead of building.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Level guard (default 24, or CFLOBDD_MAX_LEVEL when set).
    #[arg(long)]
    max_level: Option<Level>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Structure {
    Hadamard,
    Identity,
    Eq,
    Add,
    Xor,
    Projection,
}

#[derive(Serialize)]
struct StepRow {
    label: String,
    groupings: u64,
    vertices: u64,
    edges: u64,
    value_edges: u64,
}

impl StepRow {
    fn from_trace(t: &StepTrace) -> StepRow {
        StepRow {
            label: t.label.clone(),
            groupings: t.size.groupings,
            vertices: t.size.vertices,
            edges: t.size.edges,
            value_edges: t.size.value_edges,
        }
    }
}

#[derive(Serialize)]
struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    algo: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    suite: Option<String>,
    params: BTreeMap<String, serde_json::Value>,
    groupings: u64,
    vertices: u64,
    edges: u64,
    value_edges: u64,
    time_ms: f64,
    seed: u64,
    steps: Vec<StepRow>,
    samples: Vec<String>,
    success: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn bad_args(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_BAD_ARGS, message: message.into() }
    }

    fn guard(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_GUARD, message: message.into() }
    }
}

impl From<CflobddError> for Failure {
    fn from(err: CflobddError) -> Failure {
        let code = match &err {
            CflobddError::LevelGuard { .. } => EXIT_GUARD,
            CflobddError::Inconclusive(_) => EXIT_INCONCLUSIVE,
            CflobddError::Range(_) | CflobddError::Parse { .. } => EXIT_BAD_ARGS,
            _ => 1,
        };
        Failure { code, message: err.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bench(args) => cmd_bench(args),
        Command::Quantum(args) => cmd_quantum(args),
        Command::Dump(args) => cmd_dump(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Level guard: explicit flag beats the CFLOBDD_MAX_LEVEL environment
/// variable, which beats the default of 24.
fn level_guard(flag: Option<Level>) -> Result<Level, Failure> {
    if let Some(l) = flag {
        return Ok(l);
    }
    match std::env::var("CFLOBDD_MAX_LEVEL") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::bad_args(format!("CFLOBDD_MAX_LEVEL is not a level: {:?}", v))),
        Err(_) => Ok(DEFAULT_MAX_LEVEL),
    }
}

fn check_level(level: Level, guard: Level) -> Result<(), Failure> {
    if level > guard {
        return Err(Failure::guard(format!(
            "structure level {} exceeds the guard {} (raise --max-level or CFLOBDD_MAX_LEVEL)",
            level, guard
        )));
    }
    Ok(())
}

fn log2_exact(n: u64, what: &str) -> Result<Level, Failure> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Failure::bad_args(format!("{} must be a power of two, got {}", what, n)));
    }
    Ok(n.trailing_zeros())
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Failure::bad_args(format!("cannot write {}: {}", path.display(), e))),
        None => {
            print!("{}", content);
            Ok(())
        }
    }
}

fn render(report: &Report, json: bool, out: Option<&PathBuf>) -> Result<(), Failure> {
    let content = if json {
        let mut s = serde_json::to_string_pretty(report).expect("report serializes");
        s.push('\n');
        s
    } else {
        render_human(report)
    };
    emit(out, &content)
}

fn render_human(r: &Report) -> String {
    let mut s = String::new();
    match (&r.algo, &r.suite) {
        (Some(a), _) => writeln!(s, "algo: {}", a).unwrap(),
        (_, Some(b)) => writeln!(s, "suite: {}", b).unwrap(),
        _ => unreachable!(),
    }
    for (k, v) in &r.params {
        writeln!(s, "  {}: {}", k, v).unwrap();
    }
    writeln!(s, "  seed: {}", r.seed).unwrap();
    if !r.steps.is_empty() {
        writeln!(s, "steps:").unwrap();
        let width = r.steps.iter().map(|t| t.label.len()).max().unwrap_or(0);
        for t in &r.steps {
            writeln!(
                s,
                "  {:width$}  groupings={} vertices={} edges={} value_edges={}",
                t.label, t.groupings, t.vertices, t.edges, t.value_edges,
            )
            .unwrap();
        }
    }
    writeln!(
        s,
        "size: groupings={} vertices={} edges={} value_edges={}",
        r.groupings, r.vertices, r.edges, r.value_edges
    )
    .unwrap();
    if !r.samples.is_empty() {
        let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
        for sample in &r.samples {
            *counts.entry(sample).or_insert(0) += 1;
        }
        write!(s, "samples:").unwrap();
        for (bits, n) in counts {
            write!(s, " {}x{}", bits, n).unwrap();
        }
        writeln!(s).unwrap();
    }
    writeln!(s, "success: {}", r.success).unwrap();
    writeln!(s, "time: {:.3} ms", r.time_ms).unwrap();
    s
}

fn param(n: u64) -> serde_json::Value {
    serde_json::Value::from(n)
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let guard = level_guard(args.max_level)?;
    let (level, nvars) = bench_size(args.suite, args.level, args.nvars)?;
    let structure_level = match args.suite {
        Suite::Add => level + 2,
        _ => level,
    };
    check_level(structure_level, guard)?;

    let mut mgr = Manager::with_seed(args.seed);
    mgr.set_max_level(guard);
    let start = Instant::now();
    let c = build_bench(&mut mgr, args.suite, level)?;
    let time_ms = start.elapsed().as_secs_f64() * 1e3;
    let size = mgr.size_report(c);

    let mut params = BTreeMap::new();
    params.insert("level".to_string(), param(u64::from(level)));
    params.insert("nvars".to_string(), param(nvars));
    let report = Report {
        algo: None,
        suite: Some(args.suite.name().to_string()),
        params,
        groupings: size.groupings,
        vertices: size.vertices,
        edges: size.edges,
        value_edges: size.value_edges,
        time_ms,
        seed: args.seed,
        steps: Vec::new(),
        samples: Vec::new(),
        success: true,
    };
    render(&report, args.json, args.out.as_ref())
}

/// Resolve --level/--nvars to the suite's level parameter plus the variable
/// count it implies.
fn bench_size(
    suite: Suite,
    level: Option<Level>,
    nvars: Option<u64>,
) -> Result<(Level, u64), Failure> {
    let from_level = |l: Level| -> Result<(Level, u64), Failure> {
        if l >= 63 {
            return Err(Failure::bad_args(format!("level {} is out of range", l)));
        }
        let vars = match suite {
            Suite::Xor | Suite::Eq | Suite::Hadamard | Suite::Matmult => 1u64 << l,
            Suite::Add => 1u64 << (l + 2),
        };
        Ok((l, vars))
    };
    match (level, nvars) {
        (Some(_), Some(_)) => {
            Err(Failure::bad_args("give only one of --level and --nvars"))
        }
        (None, None) => Err(Failure::bad_args("one of --level or --nvars is required")),
        (Some(l), None) => {
            let min = match suite {
                Suite::Xor | Suite::Add => 0,
                Suite::Eq | Suite::Hadamard | Suite::Matmult => 1,
            };
            if l < min {
                return Err(Failure::bad_args(format!(
                    "{} needs --level at least {}",
                    suite.name(),
                    min
                )));
            }
            from_level(l)
        }
        (None, Some(n)) => match suite {
            // XOR takes any variable count; it folds n projections at the
            // smallest level that holds them.
            Suite::Xor => {
                if n == 0 {
                    return Err(Failure::bad_args("--nvars must be positive"));
                }
                let l = n.next_power_of_two().trailing_zeros();
                Ok((l, n))
            }
            Suite::Eq | Suite::Hadamard | Suite::Matmult => {
                let l = log2_exact(n, "--nvars")?;
                if l < 1 {
                    return Err(Failure::bad_args(format!(
                        "{} needs at least 2 variables",
                        suite.name()
                    )));
                }
                Ok((l, n))
            }
            Suite::Add => {
                let l = log2_exact(n, "--nvars")?;
                if l < 2 {
                    return Err(Failure::bad_args(
                        "add needs at least 4 variables (one x, y, z, dummy block)",
                    ));
                }
                Ok((l - 2, n))
            }
        },
    }
}

fn build_bench(mgr: &mut Manager, suite: Suite, level: Level) -> Result<CflobddId, Failure> {
    match suite {
        Suite::Xor => {
            // Fold of binary apply, as the micro-benchmark prescribes, not
            // the direct parity construction.
            let mut acc = projection(mgr, level, 0)?;
            for i in 1..1usize << level {
                let p = projection(mgr, level, i)?;
                acc = apply_boolean(mgr, acc, p, BoolOp::Xor)?;
            }
            Ok(acc)
        }
        Suite::Eq => Ok(eq_relation(mgr, level)?),
        Suite::Add => Ok(add_relation(mgr, level)?),
        Suite::Hadamard => Ok(hadamard(mgr, level)?),
        Suite::Matmult => {
            let h = hadamard(mgr, level)?;
            let id = identity(mgr, level)?;
            let mut x = not_matrix(mgr)?;
            for _ in 1..level {
                x = kronecker_v1(mgr, x, x)?;
            }
            let hi = matrix_mult(mgr, h, id)?;
            let xh = matrix_mult(mgr, x, h)?;
            let ix = matrix_mult(mgr, id, x)?;
            let sum = apply_numeric(mgr, hi, xh, NumOp::Plus)?;
            Ok(apply_numeric(mgr, sum, ix, NumOp::Plus)?)
        }
    }
}

// ---------------------------------------------------------------------------
// quantum
// ---------------------------------------------------------------------------

fn cmd_quantum(args: QuantumArgs) -> Result<(), Failure> {
    let guard = level_guard(args.max_level)?;
    let shots_guard = args.max_shots.unwrap_or(DEFAULT_MAX_SHOTS);
    if args.shots > shots_guard {
        return Err(Failure::guard(format!(
            "{} shots exceed the guard {} (raise --max-shots)",
            args.shots, shots_guard
        )));
    }
    check_flag_scope(&args)?;

    let n = args.qubits;
    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
    let mut mgr = Manager::with_seed(args.seed);
    mgr.set_max_level(guard);

    let mut params = BTreeMap::new();
    params.insert("qubits".to_string(), param(n as u64));
    params.insert("shots".to_string(), param(args.shots));

    let start = Instant::now();
    let (run, success_planted) = match args.algo {
        Algo::Ghz => {
            let run = ghz(&mut mgr, n)?;
            (run, None)
        }
        Algo::Bv => {
            if n == 0 || n > 63 {
                return Err(Failure::bad_args("bv supports 1..=63 qubits"));
            }
            let secret = match args.secret {
                Some(s) => s,
                None => rng.gen_range(0..1u64 << n),
            };
            params.insert("secret".to_string(), param(secret));
            let run = bv(&mut mgr, n, secret)?;
            params.insert("recovered".to_string(), param(run.recovered));
            let ok = run.recovered == secret;
            (run.run, Some(ok))
        }
        Algo::Dj => {
            let kind = args.oracle.unwrap_or(OracleKind::Balanced);
            let oracle = match kind {
                OracleKind::Constant0 => DjOracle::Constant0,
                OracleKind::Constant1 => DjOracle::Constant1,
                OracleKind::Balanced => DjOracle::BalancedFirstBit,
            };
            params.insert(
                "oracle".to_string(),
                serde_json::Value::from(oracle.name()),
            );
            let run = dj(&mut mgr, n, oracle)?;
            let verdict = match run.verdict {
                DjVerdict::Constant => "constant",
                DjVerdict::Balanced => "balanced",
            };
            params.insert("verdict".to_string(), serde_json::Value::from(verdict));
            let ok = match kind {
                OracleKind::Balanced => run.verdict == DjVerdict::Balanced,
                _ => run.verdict == DjVerdict::Constant,
            };
            (run.run, Some(ok))
        }
        Algo::Simon => {
            if n == 0 || n > 63 {
                return Err(Failure::bad_args("simon supports 1..=8 qubits"));
            }
            let secret = match args.secret {
                Some(s) => s,
                None => rng.gen_range(1..1u64 << n),
            };
            params.insert("secret".to_string(), param(secret));
            let run = simon(&mut mgr, n, secret)?;
            params.insert("recovered".to_string(), param(run.recovered));
            params.insert("samples_used".to_string(), param(run.samples_used as u64));
            let ok = run.recovered == secret;
            (run.run, Some(ok))
        }
        Algo::Grover => {
            if n == 0 || n > 63 {
                return Err(Failure::bad_args("grover supports power-of-two qubit counts"));
            }
            let marked = match args.marked {
                Some(w) => w,
                None => rng.gen_range(0..1u64 << n),
            };
            params.insert("marked".to_string(), param(marked));
            let run = grover(&mut mgr, n, marked)?;
            params.insert("iterations".to_string(), param(run.iterations));
            (run.run, None)
        }
        Algo::Qft => {
            if n == 0 || n > 63 {
                return Err(Failure::bad_args("qft supports 1..=63 qubits"));
            }
            let input = match args.input {
                Some(x) => x,
                None => rng.gen_range(0..1u64 << n),
            };
            params.insert("input".to_string(), param(input));
            let mode_name = match args.mode {
                Mode::Exact => "exact",
                Mode::Grid => "grid",
            };
            params.insert("mode".to_string(), serde_json::Value::from(mode_name));
            let mode = match args.mode {
                Mode::Exact => AmpMode::Exact,
                Mode::Grid => AmpMode::Grid,
            };
            let run = qft(&mut mgr, n, input, mode)?;
            (run.run, None)
        }
    };
    let time_ms = start.elapsed().as_secs_f64() * 1e3;

    params.insert("wires".to_string(), param(run.total_qubits as u64));
    let size = mgr.size_report(run.state);
    let samples = draw_samples(&mut mgr, &run, args.algo, args.shots)?;

    let success = match args.algo {
        Algo::Ghz => {
            let zeros = "0".repeat(n);
            let ones = "1".repeat(n);
            samples.iter().all(|s| *s == zeros || *s == ones)
        }
        Algo::Grover => {
            let marked = params["marked"].as_u64().expect("marked was set");
            let target = bit_string(marked, n);
            plurality(&samples).map_or(false, |top| top == target)
        }
        Algo::Qft => state_norm_is_one(&mut mgr, run.state, args.mode)?,
        _ => success_planted.expect("planted algorithms decide success"),
    };

    let report = Report {
        algo: Some(args.algo.name().to_string()),
        suite: None,
        params,
        groupings: size.groupings,
        vertices: size.vertices,
        edges: size.edges,
        value_edges: size.value_edges,
        time_ms,
        seed: args.seed,
        steps: run.steps.iter().map(StepRow::from_trace).collect(),
        samples,
        success,
    };
    render(&report, args.json, args.out.as_ref())
}

/// Reject flags that belong to a different algorithm, so typos fail loudly
/// instead of being ignored.
fn check_flag_scope(args: &QuantumArgs) -> Result<(), Failure> {
    let deny = |cond: bool, flag: &str| {
        if cond {
            Err(Failure::bad_args(format!(
                "--{} does not apply to {}",
                flag,
                args.algo.name()
            )))
        } else {
            Ok(())
        }
    };
    deny(
        args.secret.is_some() && !matches!(args.algo, Algo::Bv | Algo::Simon),
        "secret",
    )?;
    deny(args.marked.is_some() && args.algo != Algo::Grover, "marked")?;
    deny(args.input.is_some() && args.algo != Algo::Qft, "input")?;
    deny(args.oracle.is_some() && args.algo != Algo::Dj, "oracle")?;
    deny(args.mode == Mode::Grid && args.algo != Algo::Qft, "mode")?;
    Ok(())
}

fn bit_string(x: u64, n: usize) -> String {
    (0..n).map(|k| if x >> (n - 1 - k) & 1 == 1 { '1' } else { '0' }).collect()
}

fn draw_samples(
    mgr: &mut Manager,
    run: &cflobdd::QuantumRun,
    algo: Algo,
    shots: u64,
) -> Result<Vec<String>, Failure> {
    let n = run.data_qubits;
    let mut samples = Vec::with_capacity(shots as usize);
    for _ in 0..shots {
        let bits: Vec<bool> = if algo == Algo::Simon {
            // Simon interleaves the two registers: x_k sits on qubit 2k.
            let assignment = sample_assignment(mgr, run.state)?;
            (0..n).map(|k| assignment[4 * k]).collect()
        } else {
            measure_bits(mgr, run.state, n)?
        };
        samples.push(bits.iter().map(|&b| if b { '1' } else { '0' }).collect());
    }
    Ok(samples)
}

fn plurality(samples: &[String]) -> Option<&str> {
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for s in samples {
        *counts.entry(s).or_insert(0) += 1;
    }
    let best = counts.iter().max_by_key(|(_, &n)| n)?;
    let top = counts.values().filter(|&&n| n == *best.1).count();
    if top == 1 {
        Some(best.0)
    } else {
        None
    }
}

/// Total measurement probability of the state. Exact mode demands exactly
/// one; grid mode tolerates the rounding the grid introduces.
fn state_norm_is_one(
    mgr: &mut Manager,
    state: CflobddId,
    mode: Mode,
) -> Result<bool, Failure> {
    let counts = count_paths(mgr, state);
    let weights: Vec<(BigUint, u32)> =
        mgr.values_of(state).iter().map(|v| v.weight()).collect();
    let common = weights.iter().map(|&(_, h)| h).max().unwrap_or(0);
    let mut total = BigUint::ZERO;
    for (count, (num, h)) in counts.iter().zip(&weights) {
        total += count * (num << (common - h));
    }
    match mode {
        Mode::Exact => Ok(total == BigUint::one() << common),
        Mode::Grid => {
            let total = total.to_f64().unwrap_or(f64::NAN);
            let norm = total / 2f64.powi(common as i32);
            Ok((norm - 1.0).abs() < 1e-9)
        }
    }
}

// ---------------------------------------------------------------------------
// dump
// ---------------------------------------------------------------------------

fn cmd_dump(args: DumpArgs) -> Result<(), Failure> {
    if args.dot == args.text {
        return Err(Failure::bad_args("pick exactly one of --dot and --text"));
    }
    let guard = level_guard(args.max_level)?;
    let mut mgr = Manager::new();
    mgr.set_max_level(guard);

    let c = match (&args.structure, &args.input) {
        (Some(_), Some(_)) => {
            return Err(Failure::bad_args("give only one of --structure and --in"))
        }
        (None, None) => {
            return Err(Failure::bad_args("one of --structure or --in is required"))
        }
        (Some(s), None) => build_structure(&mut mgr, *s, args.level, args.index, guard)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Failure::bad_args(format!("cannot read {}: {}", path.display(), e))
            })?;
            parse_text(&mut mgr, &text)?
        }
    };

    let mut content =
        if args.dot { to_dot(&mgr, c) } else { serialize_text(&mgr, c) };
    if !content.ends_with('\n') {
        content.push('\n');
    }
    emit(args.out.as_ref(), &content)
}

fn build_structure(
    mgr: &mut Manager,
    s: Structure,
    level: Option<Level>,
    index: Option<u64>,
    guard: Level,
) -> Result<CflobddId, Failure> {
    let level = level.ok_or_else(|| Failure::bad_args("--structure needs --level"))?;
    check_level(level, guard)?;
    if index.is_some() && s != Structure::Projection {
        return Err(Failure::bad_args("--index only applies to projection"));
    }
    match s {
        Structure::Hadamard => Ok(hadamard(mgr, level)?),
        Structure::Identity => Ok(identity(mgr, level)?),
        Structure::Eq => Ok(eq_relation(mgr, level)?),
        Structure::Add => {
            check_level(level + 2, guard)?;
            Ok(add_relation(mgr, level)?)
        }
        Structure::Xor => {
            if level >= 63 {
                return Err(Failure::bad_args(format!("level {} is out of range", level)));
            }
            build_bench(mgr, Suite::Xor, level)
        }
        Structure::Projection => Ok(projection(mgr, level, index.unwrap_or(0) as usize)?),
    }
}
