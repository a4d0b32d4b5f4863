//! `cayley-walk`: tables, curves, verification suites and oracle experiments for
//! coined walks on Cayley graphs of `Z_2^n`.
//!
//! Exit codes: 0 on success, 1 when a check fails, 2 on a usage error.

mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cayley_walk::math::WalkSpec;
use cayley_walk::oracle::{self, OracleGraph, VertexName, MAX_ORACLE_N};
use cayley_walk::{layers, measured, spectral, verify};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use table::{Cell, Format, Table};

const MAX_CURVE_ROWS: u64 = 10_000_000;
const MAX_MEASURED_T: usize = 20_000;
const MAX_TRIALS: u64 = 10_000_000;

#[derive(Parser)]
#[command(name = "cayley-walk", version, about = "Coined quantum walks on Cayley graphs of Z_2^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output encoding.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct SpecArgs {
    /// Cube dimension.
    #[arg(long)]
    n: usize,
    /// Generator weight.
    #[arg(long)]
    s: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral table: weight coefficients, Kravchuk values and eigenphases per layer.
    Spectrum(SpecArgs),
    /// Return and hitting probabilities for every t in a range.
    Curve {
        #[command(flatten)]
        spec: SpecArgs,
        /// Last time step.
        #[arg(long = "t-max", visible_alias = "t")]
        t_max: u64,
        /// First time step.
        #[arg(long = "t-min", default_value_t = 0)]
        t_min: u64,
    },
    /// Run a verification suite, or `all` of them.
    Verify {
        /// Suite name.
        #[arg(long)]
        suite: String,
        /// Size cap; each suite has its own default.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Black-box antipode search through a randomly named neighbor oracle.
    Oracle(OracleArgs),
    /// Walk measured at the origin after every step from T0 on.
    Measured {
        #[command(flatten)]
        spec: SpecArgs,
        /// First measured step; must be even.
        #[arg(long, default_value_t = 0)]
        t0: usize,
        /// Last time step.
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value = "recursion")]
        method: Method,
    },
    /// Layer table: sizes, component membership, adjacent layers and connection counts.
    Layers(SpecArgs),
}

#[derive(Args)]
struct OracleArgs {
    /// Search algorithm; omit with --replay.
    #[arg(value_enum, required_unless_present = "replay", conflicts_with = "replay")]
    mode: Option<Mode>,
    #[command(flatten)]
    spec: SpecArgs,
    /// Master seed; trial i uses stream i of this seed.
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Quantum walk length; predicted from --beta when omitted.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, default_value_t = spectral::DEFAULT_BETA)]
    beta: f64,
    /// Directory receiving one query transcript per trial.
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// Transcript to check against the oracle of trial --trial.
    #[arg(long)]
    replay: Option<PathBuf>,
    #[arg(long, default_value_t = 0, requires = "replay")]
    trial: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Classical,
    Quantum,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Spectral amplitudes fed through the renewal recursion.
    Recursion,
    /// Dense simulation with the origin projected out.
    Projective,
}

enum Failure {
    Usage(String),
    Check(String),
    Io(String),
}

impl From<cayley_walk::Error> for Failure {
    fn from(e: cayley_walk::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<Output, Failure>;

/// Rendered table plus an optional human-readable summary and check verdict.
struct Output {
    table: Table,
    summary: Option<String>,
    check_failed: Option<String>,
}

impl Output {
    fn plain(table: Table) -> Self {
        Output { table, summary: None, check_failed: None }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(path) = &cli.out {
        if path.is_dir() {
            return report(Failure::Usage(format!("--out {} is a directory", path.display())));
        }
    }
    let outcome = match &cli.command {
        Command::Spectrum(a) => spectrum(*a),
        Command::Curve { spec, t_max, t_min } => curve(*spec, *t_min, *t_max),
        Command::Verify { suite, n } => verify_cmd(suite, *n),
        Command::Oracle(a) => oracle_cmd(a),
        Command::Measured { spec, t0, t, method } => measured_cmd(*spec, *t0, *t, *method),
        Command::Layers(a) => layers_cmd(*a),
    };
    let output = match outcome {
        Ok(o) => o,
        Err(f) => return report(f),
    };
    let bytes = output.table.render(cli.format);
    let written = match &cli.out {
        Some(path) => table::write_atomic(path, &bytes),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(&bytes)
        }
    };
    if let Err(e) = written {
        return report(Failure::Io(e.to_string()));
    }
    if let Some(s) = output.summary {
        eprintln!("{s}");
    }
    match output.check_failed {
        Some(reason) => report(Failure::Check(reason)),
        None => ExitCode::SUCCESS,
    }
}

fn report(f: Failure) -> ExitCode {
    match f {
        Failure::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Failure::Check(msg) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Failure::Io(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn walk_spec(a: SpecArgs) -> Result<WalkSpec, Failure> {
    Ok(WalkSpec::new(a.n, a.s)?)
}

fn spectrum(a: SpecArgs) -> Outcome {
    let spec = walk_spec(a)?;
    let mut t = Table::new(vec!["k", "d", "phi", "cos_omega", "omega", "parity"]);
    for row in spec.spectral_table().rows() {
        t.push(vec![
            Cell::int(row.k),
            Cell::int(&row.d),
            Cell::int(&row.kravchuk),
            Cell::Float(row.cos_omega),
            Cell::Float(row.omega),
            Cell::int(row.d_parity),
        ]);
    }
    Ok(Output::plain(t))
}

fn curve(a: SpecArgs, t_min: u64, t_max: u64) -> Outcome {
    let spec = walk_spec(a)?;
    if t_min > t_max {
        return Err(Failure::Usage(format!("empty time range {t_min}..={t_max}")));
    }
    if t_max - t_min >= MAX_CURVE_ROWS {
        return Err(Failure::Usage(format!("time range longer than {MAX_CURVE_ROWS} rows")));
    }
    let mut t = Table::new(vec!["t", "return_prob", "hit_prob"]);
    for p in spectral::probability_curve(&spec, t_min..=t_max)? {
        t.push(vec![Cell::int(p.t), Cell::Float(p.return_prob), Cell::Float(p.hit_prob)]);
    }
    Ok(Output::plain(t))
}

fn verify_cmd(suite: &str, cap: Option<usize>) -> Outcome {
    let suites: Vec<&str> = if suite == "all" {
        verify::SUITES.to_vec()
    } else if verify::SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(Failure::Usage(format!(
            "unknown suite {suite:?}; expected one of: all, {}",
            verify::SUITES.join(", ")
        )));
    };
    if cap == Some(0) {
        return Err(Failure::Usage("size cap --n must be at least 1".into()));
    }
    let mut t = Table::new(vec!["suite", "n_max", "checks", "failed", "status", "case", "detail"]);
    let mut failing = Vec::new();
    let mut summary = Vec::new();
    for name in suites {
        let n_max = cap.or_else(|| verify::default_cap(name)).expect("known suite");
        let r = verify::run_suite(name, n_max)?;
        let status = if r.passed() { "pass" } else { "fail" };
        summary.push(format!("{status} {name} (n <= {n_max}): {} checks, {} failed", r.checks, r.failed));
        t.push(vec![
            Cell::Text(r.suite.clone()),
            Cell::int(r.n_max),
            Cell::int(r.checks),
            Cell::int(r.failed),
            Cell::Text(status.into()),
            Cell::Null,
            Cell::Null,
        ]);
        for f in &r.failures {
            t.push(vec![
                Cell::Text(r.suite.clone()),
                Cell::int(r.n_max),
                Cell::Null,
                Cell::Null,
                Cell::Text("counterexample".into()),
                Cell::Text(f.case.clone()),
                Cell::Text(f.detail.clone()),
            ]);
        }
        if !r.passed() {
            failing.push(name);
        }
    }
    Ok(Output {
        table: t,
        summary: Some(summary.join("\n")),
        check_failed: (!failing.is_empty()).then(|| format!("failing suites: {}", failing.join(", "))),
    })
}

/// Oracle seed, start vertex and search randomness of one trial.
fn trial_rng(seed: u64, trial: u64, n: usize) -> (ChaCha8Rng, u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let oracle_seed = rng.random::<u64>();
    let start = rng.random_range(0..1u64 << n);
    (rng, oracle_seed, start)
}

fn check_oracle_args(a: &OracleArgs) -> Result<WalkSpec, Failure> {
    let spec = walk_spec(a.spec)?;
    let (n, s) = (a.spec.n, a.spec.s);
    if 6 * s >= n {
        return Err(cayley_walk::Error::AntipodalityPremise { n, s }.into());
    }
    if n > MAX_ORACLE_N {
        return Err(Failure::Usage(format!("oracle graphs support n <= {MAX_ORACLE_N}, got n={n}")));
    }
    if a.trials == 0 || a.trials > MAX_TRIALS {
        return Err(Failure::Usage(format!("--trials must lie in 1..={MAX_TRIALS}")));
    }
    if let Some(dir) = &a.transcript {
        if dir.exists() && !dir.is_dir() {
            return Err(Failure::Usage(format!("--transcript {} is not a directory", dir.display())));
        }
    }
    Ok(spec)
}

fn oracle_cmd(a: &OracleArgs) -> Outcome {
    let spec = check_oracle_args(a)?;
    if let Some(path) = &a.replay {
        return replay(a, path);
    }
    let t = match (a.mode, a.t) {
        (Some(Mode::Quantum), Some(t)) => Some(t),
        (Some(Mode::Quantum), None) => {
            let p = spectral::predict_time(&spec, spectral::TimeKind::HitAtHalfPiM, a.beta)?;
            Some(usize::try_from(p.t).map_err(|_| Failure::Usage("predicted time overflows".into()))?)
        }
        _ => None,
    };
    if let Some(dir) = &a.transcript {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    }
    match a.mode.expect("mode or replay") {
        Mode::Classical => classical_trials(a, &spec),
        Mode::Quantum => quantum_trials(a, t.expect("quantum time")),
    }
}

fn hex(name: Option<VertexName>, bits: usize) -> Cell {
    name.map_or(Cell::Null, |v| Cell::Text(v.to_hex(bits)))
}

fn save_transcript(a: &OracleArgs, trial: u64, o: &mut OracleGraph) -> Result<(), Failure> {
    if let Some(dir) = &a.transcript {
        let text = oracle::format_transcript(&o.take_transcript(), o.name_bits());
        let path = dir.join(format!("trial-{trial:06}.tsv"));
        table::write_atomic(&path, text.as_bytes()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn classical_trials(a: &OracleArgs, spec: &WalkSpec) -> Outcome {
    let (n, s) = (a.spec.n, a.spec.s);
    let mut t = Table::new(vec!["trial", "start", "answer", "antipode", "success", "queries", "target_reachable"]);
    let (mut wins, mut queries) = (0u64, 0u64);
    for trial in 0..a.trials {
        let (mut rng, oracle_seed, v0) = trial_rng(a.seed, trial, n);
        let mut o = OracleGraph::new(n, s, oracle_seed)?;
        o.record_transcript(a.transcript.is_some());
        let start = o.reveal_name(v0);
        let r = oracle::classical_search(&mut o, start, &mut rng)?;
        save_transcript(a, trial, &mut o)?;
        wins += r.success as u64;
        queries += r.queries;
        let bits = o.name_bits();
        t.push(vec![
            Cell::int(trial),
            hex(Some(start), bits),
            hex(r.answer, bits),
            hex(o.reveal_antipode(start), bits),
            Cell::Bool(r.success),
            Cell::int(r.queries),
            Cell::Bool(r.target_reachable),
        ]);
    }
    let budget = oracle::classical_budget(spec).map_or("unbounded".to_string(), |b| b.to_string());
    let summary = format!(
        "classical n={n} s={s}: success rate {} over {} trials, mean queries {} (budget {budget}), 1/m = {}",
        table::float(wins as f64 / a.trials as f64),
        a.trials,
        table::float(queries as f64 / a.trials as f64),
        table::float(1.0 / spec.m_f64()),
    );
    Ok(Output { table: t, summary: Some(summary), check_failed: None })
}

fn quantum_trials(a: &OracleArgs, steps: usize) -> Outcome {
    let (n, s) = (a.spec.n, a.spec.s);
    let mut t = Table::new(vec!["trial", "start", "antipode", "t", "success_probability", "queries"]);
    let mut total = 0.0;
    for trial in 0..a.trials {
        let (_, oracle_seed, v0) = trial_rng(a.seed, trial, n);
        let mut o = OracleGraph::new(n, s, oracle_seed)?;
        o.record_transcript(a.transcript.is_some());
        let start = o.reveal_name(v0);
        let r = oracle::quantum_search(&mut o, start, steps)?;
        save_transcript(a, trial, &mut o)?;
        total += r.success_probability;
        let bits = o.name_bits();
        t.push(vec![
            Cell::int(trial),
            hex(Some(start), bits),
            hex(o.reveal_antipode(start), bits),
            Cell::int(r.t),
            Cell::Float(r.success_probability),
            Cell::int(r.queries),
        ]);
    }
    let summary = format!(
        "quantum n={n} s={s} T={steps}: mean success probability {} over {} trials",
        table::float(total / a.trials as f64),
        a.trials
    );
    Ok(Output { table: t, summary: Some(summary), check_failed: None })
}

fn replay(a: &OracleArgs, path: &Path) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let records = oracle::parse_transcript(&text)?;
    let (_, oracle_seed, _) = trial_rng(a.seed, a.trial, a.spec.n);
    let mut o = OracleGraph::new(a.spec.n, a.spec.s, oracle_seed)?;
    let r = oracle::replay_transcript(&mut o, &records);
    let mut t = Table::new(vec!["trial", "records", "mismatches", "faithful"]);
    t.push(vec![
        Cell::int(a.trial),
        Cell::int(r.total),
        Cell::List(r.mismatches.iter().map(Cell::int).collect()),
        Cell::Bool(r.is_faithful()),
    ]);
    let check_failed =
        (!r.is_faithful()).then(|| format!("{} of {} transcript records disagree with the oracle", r.mismatches.len(), r.total));
    Ok(Output { table: t, summary: None, check_failed })
}

fn measured_cmd(a: SpecArgs, t0: usize, t_end: usize, method: Method) -> Outcome {
    let spec = walk_spec(a)?;
    if t_end > MAX_MEASURED_T {
        return Err(Failure::Usage(format!("--t must be at most {MAX_MEASURED_T}")));
    }
    let trace = match method {
        Method::Recursion => measured::recursion_trace(&spec, t0, t_end)?,
        Method::Projective => measured::projective_simulation(&spec, t0, t_end)?,
    };
    let mut t = Table::new(vec!["t", "alpha", "beta", "q", "p"]);
    for r in trace.records() {
        t.push(vec![
            Cell::int(r.t),
            Cell::Float(r.alpha),
            r.beta.map_or(Cell::Null, Cell::Float),
            Cell::Float(r.q),
            Cell::Float(r.p),
        ]);
    }
    let summary = format!("stop probability by t={t_end}: {}", table::float(trace.stop_probability()));
    Ok(Output { table: t, summary: Some(summary), check_failed: None })
}

fn layers_cmd(a: SpecArgs) -> Outcome {
    let spec = walk_spec(a)?;
    let mut t = Table::new(vec!["layer", "size", "in_origin_component", "neighbors", "connection_counts"]);
    for row in layers::layer_table(&spec) {
        t.push(vec![
            Cell::int(row.layer),
            Cell::int(&row.size),
            Cell::Bool(row.in_origin_component),
            Cell::List(row.neighbors.iter().map(Cell::int).collect()),
            Cell::List(row.connection_counts.iter().map(Cell::int).collect()),
        ]);
    }
    Ok(Output::plain(t))
}
