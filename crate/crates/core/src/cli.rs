//! The `symcycle` command line. [`run`] parses, dispatches and maps outcomes
//! to the exit codes 0 (success), 1 (a check or comparison failed) and
//! 2 (usage error or refused request).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::counting::{smirnov_bruteforce, smirnov_count, ParikhVector, BRUTEFORCE_MAX_LEN};
use crate::cycle::{Decomposition, SymmetricCycle};
use crate::error::{invalid, Error, Result};
use crate::family::{self, FamilyKind, OracleBound, DEFAULT_ORACLE_BOUND};
use crate::hypercube::{GroundSet, GroundSubset, SignVector};
use crate::identities::{self, Suite, SuiteConfig, DEFAULT_SEED};
use crate::pairs::{self, PairQuery, PairRow, PairStatistic};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Bounds on `t` for single-vertex commands.
pub const DECOMPOSE_T_RANGE: (usize, usize) = (3, 16);

#[derive(Debug, Parser)]
#[command(name = "symcycle", version, about = "Symmetric-cycle decompositions of hypercube vertices")]
pub struct Cli {
    /// Worker threads for parallel sweeps; output does not depend on it.
    #[arg(long, global = true, env = "SYMCYCLE_WORKERS")]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose one vertex with respect to a symmetric cycle.
    Decompose(DecomposeArgs),
    /// Compare closed-form family statistics with brute force.
    Stats(StatsArgs),
    /// Run identity suites and emit a JSON report.
    Verify(VerifyArgs),
    /// Count Smirnov words with a given Parikh vector and end letters.
    Smirnov(SmirnovArgs),
    /// Evaluate pair statistics, sweeping any omitted parameter.
    Pairs(PairsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub t: usize,
    /// Sign string such as `-+-`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "set", required_unless_present = "set")]
    pub vertex: Option<String>,
    /// Comma-separated negative part, e.g. `1,3`; empty for the all-plus vertex.
    #[arg(long)]
    pub set: Option<String>,
    /// First vertex of the cycle; defaults to the distinguished cycle.
    #[arg(long, allow_hyphen_values = true, requires = "flip_order")]
    pub start: Option<String>,
    /// Coordinates flipped along the first half of the cycle, e.g. `2,1,3`.
    #[arg(long, requires = "start")]
    pub flip_order: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub t: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Largest t the brute-force oracle may enumerate.
    #[arg(long, default_value_t = DEFAULT_ORACLE_BOUND)]
    pub oracle_bound: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name, comma-separated list, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 3)]
    pub t_min: usize,
    #[arg(long, default_value_t = 6)]
    pub t_max: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub random_cycles: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SmirnovArgs {
    #[arg(long)]
    pub alphabet: usize,
    /// Letter multiplicities, e.g. `2,1,1`.
    #[arg(long)]
    pub parikh: String,
    #[arg(long)]
    pub first: usize,
    #[arg(long)]
    pub last: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PairsArgs {
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub statistic: String,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub j_prime: Option<usize>,
    #[arg(long)]
    pub j_dblprime: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    // Commands write to a buffer so the sweep can run on a dedicated pool.
    let mut buf = Vec::new();
    let result = match cli.workers {
        Some(0) => Err(invalid("--workers must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(&cli.command, &mut buf))),
        None => dispatch(&cli.command, &mut buf),
    };
    let result = result.and_then(|ok| out.write_all(&buf).and_then(|_| out.flush()).map(|_| ok).map_err(io_err));
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InvalidArgument(_) | Error::Refused(_) => EXIT_USAGE,
                Error::Internal(_) => EXIT_FAILED,
            }
        }
    }
}

/// Returns whether every comparison or check passed.
fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Decompose(a) => decompose(a, out),
        Command::Stats(a) => stats(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Smirnov(a) => smirnov(a, out),
        Command::Pairs(a) => pairs_cmd(a, out),
    }
}

fn io_err(e: io::Error) -> Error {
    Error::Internal(format!("write failed: {e}"))
}

/// Output goes to `path` when given, else to `out`.
fn with_sink(path: &Option<PathBuf>, out: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| invalid(format!("cannot create {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(io_err)
        }
        None => f(out),
    }
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Error::Internal(e.to_string()))?;
    writeln!(out).map_err(io_err)
}

fn parse_list(s: &str, what: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| invalid(format!("{what}: {p:?} is not a nonnegative integer"))))
        .collect()
}

fn decompose(a: &DecomposeArgs, out: &mut dyn Write) -> Result<bool> {
    let (lo, hi) = DECOMPOSE_T_RANGE;
    if !(lo..=hi).contains(&a.t) {
        return Err(invalid(format!("t = {} outside [{lo}, {hi}]", a.t)));
    }
    let g = GroundSet::new(a.t)?;
    let tope = match (&a.vertex, &a.set) {
        (Some(v), _) => SignVector::parse(v)?,
        (None, Some(s)) => SignVector::from_mask(g, GroundSubset::from_members(g, &parse_list(s, "--set")?)?.mask()),
        (None, None) => return Err(invalid("one of --vertex or --set is required")),
    };
    if tope.t() != a.t {
        return Err(invalid(format!("vertex has length {}, expected t = {}", tope.t(), a.t)));
    }
    let cycle = match (&a.start, &a.flip_order) {
        (Some(s), Some(f)) => SymmetricCycle::make(SignVector::parse(s)?, &parse_list(f, "--flip-order")?)?,
        _ => SymmetricCycle::distinguished(g),
    };
    if cycle.t() != a.t {
        return Err(invalid("cycle and vertex have different lengths"));
    }
    let dec = cycle.decompose(&tope)?;
    match a.format {
        Format::Json => write_json(out, &decomposition_json(&dec, &cycle))?,
        _ => write_decomposition_text(out, &dec, &cycle).map_err(io_err)?,
    }
    Ok(true)
}

fn decomposition_json(dec: &Decomposition, cycle: &SymmetricCycle) -> serde_json::Value {
    json!({
        "t": cycle.t(),
        "vertex": dec.owner.to_string(),
        "cycle": { "start": cycle.vertex(0).to_string(), "flip_order": cycle.flip_order() },
        "x": dec.x.coords(),
        "q": dec.q(),
        "members": dec.q_indices.iter().zip(&dec.members)
            .map(|(i, m)| json!({ "index": i, "vertex": m.to_string() }))
            .collect::<Vec<_>>(),
    })
}

fn write_decomposition_text(out: &mut dyn Write, dec: &Decomposition, cycle: &SymmetricCycle) -> io::Result<()> {
    let x: Vec<String> = dec.x.coords().iter().map(i8::to_string).collect();
    writeln!(out, "vertex  {}", dec.owner)?;
    writeln!(out, "x       ({})", x.join(", "))?;
    writeln!(out, "q       {}", dec.q())?;
    let width = (2 * cycle.t() - 1).to_string().len();
    for (i, m) in dec.q_indices.iter().zip(&dec.members) {
        writeln!(out, "D^{i:<width$}  {m}")?;
    }
    Ok(())
}

fn stats(a: &StatsArgs, out: &mut dyn Write) -> Result<bool> {
    let kind: FamilyKind = a.family.parse()?;
    let bound = OracleBound::new(a.oracle_bound)?;
    let report = family::full_sweep(a.t, kind, bound)?;
    with_sink(&a.output, out, |w| match a.format {
        Format::Json => write_json(w, &report),
        _ => family::write_csv(&report.rows, w),
    })?;
    Ok(report.all_match())
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    let suites = Suite::parse_list(&a.suite)?;
    let cfg = SuiteConfig {
        t_min: a.t_min,
        t_max: a.t_max,
        seed: a.seed,
        random_cycles: a.random_cycles,
        ..Default::default()
    };
    let reports = identities::run_suites(&suites, &cfg)?;
    with_sink(&a.output, out, |w| write_json(w, &reports))?;
    Ok(reports.iter().all(|r| r.passed()))
}

fn smirnov(a: &SmirnovArgs, out: &mut dyn Write) -> Result<bool> {
    let parikh = ParikhVector::new(parse_list(&a.parikh, "--parikh")?.into_iter().map(|c| c as u32).collect());
    let closed = smirnov_count(a.alphabet, &parikh, a.first, a.last)?;
    let oracle = if parikh.total() <= BRUTEFORCE_MAX_LEN {
        Some(smirnov_bruteforce(a.alphabet, &parikh, a.first, a.last)?)
    } else {
        None
    };
    let matches = oracle.as_ref().map(|o| *o == closed);
    match a.format {
        Format::Json => write_json(
            out,
            &json!({
                "alphabet": a.alphabet,
                "parikh": parikh.0,
                "first": a.first,
                "last": a.last,
                "closed_form": closed,
                "oracle": oracle,
                "match": matches,
            }),
        )?,
        _ => {
            let oracle_cell = oracle.map_or_else(|| "-".to_string(), |o| o.to_string());
            writeln!(out, "closed_form {closed}\noracle      {oracle_cell}").map_err(io_err)?;
        }
    }
    Ok(matches != Some(false))
}

const PAIRS_HEADER: [&str; 10] =
    ["t", "statistic", "k", "j_prime", "j_dblprime", "s", "i", "closed_form", "oracle", "match"];

fn pair_cells(r: &PairRow) -> Vec<String> {
    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    let q = &r.query;
    vec![
        q.t.to_string(),
        r.statistic.name().to_string(),
        opt(q.k),
        opt(q.j_prime),
        opt(q.j_dblprime),
        opt(q.s),
        opt(q.i),
        r.closed_form.to_string(),
        r.oracle.as_ref().map(|o| o.to_string()).unwrap_or_default(),
        r.matches.map(|m| m.to_string()).unwrap_or_default(),
    ]
}

fn pairs_cmd(a: &PairsArgs, out: &mut dyn Write) -> Result<bool> {
    let stat: PairStatistic = a.statistic.parse()?;
    GroundSet::new(a.t)?;
    let partial = PairQuery { t: a.t, k: a.k, j_prime: a.j_prime, j_dblprime: a.j_dblprime, s: a.s, i: a.i };
    let queries = pairs::sweep_queries(stat, &partial);
    if queries.is_empty() {
        // Surface the reason, e.g. an odd t for an orthogonality count.
        pairs::evaluate(stat, &partial)?;
    }
    let with_oracle = a.t <= pairs::ORACLE_MAX_T;
    let rows: Vec<PairRow> = queries.iter().map(|q| pairs::pair_row(stat, q, with_oracle)).collect::<Result<_>>()?;
    with_sink(&a.output, out, |w| match a.format {
        Format::Json => write_json(w, &rows),
        _ => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(PAIRS_HEADER).map_err(|e| Error::Internal(e.to_string()))?;
            for r in &rows {
                csv.write_record(pair_cells(r)).map_err(|e| Error::Internal(e.to_string()))?;
            }
            csv.flush().map_err(io_err)
        }
    })?;
    Ok(rows.iter().all(|r| r.matches != Some(false)))
}
