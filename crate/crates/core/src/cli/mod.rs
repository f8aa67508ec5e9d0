//! Command-line front end.
//!
//! Every command writes [`ResultRecord`]s as CSV (default) or JSON Lines to
//! stdout or `--output`. Exit codes: 0 success, 1 a constraint or
//! verification failure, 2 a usage or parse error.

mod config;
mod record;

use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::actors::Lobby;
use crate::bargaining::{nash_oracle, NashProblem, OracleGrid, OracleSolution};
use crate::error::Error;
use crate::lab::{self, Interval, SamplingBounds, Scenario, SweepAxis, SweepSpec};

pub use config::{ConfigError, Polity, Resolved, ScenarioFile};
pub use record::{format_sig, header, read_records, write_records, Format, RecordError, ResultRecord, CSV_DIGITS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "electoral-tariffs",
    version,
    about = "Tariff bargaining under majoritarian and coalition governments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the scenario in a TOML file.
    Solve {
        file: PathBuf,
        /// Report both regimes side by side (needs a coalition).
        #[arg(long)]
        both: bool,
        /// Cross-check against the numerical Nash oracle.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check the regime comparison on seeded random scenarios.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate a Cartesian grid of parameter values.
    Sweep {
        /// Swept parameter, `name=start:stop:step` (stop inclusive). Repeatable;
        /// the first varies slowest.
        #[arg(long = "vary", value_name = "SPEC", required = true)]
        vary: Vec<String>,
        /// Fixed parameter, `name=value`. Repeatable.
        #[arg(long = "fix", value_name = "NAME=VALUE")]
        fix: Vec<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Derive medians from a voter population file.
    Population {
        file: PathBuf,
        /// Also solve the derived scenario.
        #[arg(long)]
        solve: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare oracle and closed forms on a file or on seeded scenarios.
    OracleCompare {
        /// Scenario file; without it scenarios are sampled.
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 42, conflicts_with = "file")]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..), conflicts_with = "file")]
        n: u64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Oracle grid points per axis.
    #[arg(long, default_value_t = 2001)]
    pub grid: usize,
    /// Largest accepted oracle deviation from the closed forms.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
}

impl GridArgs {
    fn grid(&self) -> Result<OracleGrid, Failure> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Failure::usage(format!("--tolerance must be positive, got {}", self.tolerance)));
        }
        let grid = OracleGrid { points: self.grid, tolerance: self.tolerance };
        grid.validate().map_err(Failure::usage)?;
        Ok(grid)
    }
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Sampling box for t_f, `lo:hi`.
    #[arg(long = "t-f", value_name = "LO:HI", value_parser = parse_interval)]
    pub t_f: Option<Interval>,
    #[arg(long = "t-m", value_name = "LO:HI", value_parser = parse_interval)]
    pub t_m: Option<Interval>,
    #[arg(long = "t-s", value_name = "LO:HI", value_parser = parse_interval)]
    pub t_s: Option<Interval>,
    #[arg(long = "t-l", value_name = "LO:HI", value_parser = parse_interval)]
    pub t_l: Option<Interval>,
    #[arg(long = "alpha", value_name = "LO:HI", value_parser = parse_interval)]
    pub alpha: Option<Interval>,
    /// Draws allowed before giving up.
    #[arg(long, default_value_t = lab::DEFAULT_BUDGET)]
    pub budget: u64,
}

impl BoundsArgs {
    fn bounds(&self) -> SamplingBounds {
        let d = SamplingBounds::default();
        SamplingBounds {
            t_f: self.t_f.unwrap_or(d.t_f),
            t_m: self.t_m.unwrap_or(d.t_m),
            t_s: self.t_s.unwrap_or(d.t_s),
            t_l: self.t_l.unwrap_or(d.t_l),
            alpha: self.alpha.unwrap_or(d.alpha),
        }
    }
}

fn parse_interval(s: &str) -> Result<Interval, String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got `{s}`"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    Ok(Interval::new(num(lo)?, num(hi)?))
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write records here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Overwrite an existing output file.
    #[arg(long)]
    pub force: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// A command that stopped early, with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }

    fn failed(e: impl ToString) -> Self {
        Failure { code: EXIT_FAILURE, message: e.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Bounds(_) | Error::Sweep(_) | Error::GridTooCoarse { .. } => Failure::usage(e),
            _ => Failure::failed(e),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Model { .. } => Failure::failed(e),
            _ => Failure::usage(e),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
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
    execute(&cli, out, err)
}

/// Runs an already parsed command.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Solve { file, both, oracle, grid, out: o } => solve(file, *both, oracle.then_some(grid), o, out, err),
        Command::Verify { seed, n, bounds, out: o } => verify(*seed, *n, bounds, o, out, err),
        Command::Sweep { vary, fix, out: o } => run_sweep(vary, fix, o, out, err),
        Command::Population { file, solve, out: o } => population(file, *solve, o, out),
        Command::OracleCompare { file, seed, n, grid, out: o } => {
            oracle_compare(file.as_ref(), *seed, *n, grid, o, out, err)
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load(file: &std::path::Path) -> Result<Resolved, Failure> {
    let path = file.display().to_string();
    Ok(ScenarioFile::load(&path)?.resolve(&path)?)
}

fn emit(records: &[ResultRecord], o: &OutputArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let write = |w: &mut dyn Write| write_records(w, records, o.format);
    match &o.output {
        None => write(stdout).map_err(Failure::failed),
        Some(path) => {
            let mut options = OpenOptions::new();
            options.write(true);
            if o.force {
                options.create(true).truncate(true);
            } else {
                options.create_new(true);
            }
            let file = options.open(path).map_err(|e| match e.kind() {
                io::ErrorKind::AlreadyExists => {
                    Failure::usage(format!("{} exists; pass --force to overwrite", path.display()))
                }
                _ => Failure::failed(format!("{}: {e}", path.display())),
            })?;
            write(&mut io::BufWriter::new(file)).map_err(|e| Failure::failed(format!("{}: {e}", path.display())))
        }
    }
}

/// Oracle solutions for the SMD game and, with a coalition, the PR game.
/// The PR oracle maximizes over the coalition's own payoff function.
fn oracles(s: &Scenario, grid: &OracleGrid) -> Result<(OracleSolution, Option<OracleSolution>), Failure> {
    let smd = nash_oracle(s.t_m, s.t_f, grid)?;
    let pr = match &s.coalition {
        Some(c) => Some(NashProblem::new(c, c.ideal(), &Lobby { t_f: s.t_f })?.solve(grid)?),
        None => None,
    };
    Ok((smd, pr))
}

fn oracle_verdict(worst: f64, grid: &OracleGrid, err: &mut dyn Write) -> i32 {
    let ok = worst <= grid.tolerance;
    let _ = writeln!(
        err,
        "oracle max delta {} ({} tolerance {})",
        format_sig(worst),
        if ok { "within" } else { "EXCEEDS" },
        grid.tolerance
    );
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn solve(
    file: &std::path::Path,
    both: bool,
    oracle: Option<&GridArgs>,
    o: &OutputArgs,
    stdout: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let grid = oracle.map(GridArgs::grid).transpose()?;
    let resolved = load(file)?;
    let s = &resolved.scenario;
    if both && s.coalition.is_none() {
        return Err(Failure::usage("--both needs t_l/t_s (or labels) and alpha in the scenario file"));
    }
    let (smd, pr) = match (both, resolved.polity) {
        (true, _) => (true, true),
        (false, Polity::Smd) => (true, false),
        (false, Polity::Pr) => (false, true),
    };
    let mut rec = ResultRecord::from_evaluation(&s.evaluate(), smd, pr);
    let mut code = EXIT_OK;
    if let Some(grid) = &grid {
        let (o_smd, o_pr) = oracles(s, grid)?;
        let worst = rec.attach_oracle(smd.then_some(&o_smd), o_pr.as_ref().filter(|_| pr));
        code = oracle_verdict(worst, grid, err);
    }
    emit(&[rec], o, stdout)?;
    Ok(code)
}

fn verify(
    seed: u64,
    n: u64,
    bounds: &BoundsArgs,
    o: &OutputArgs,
    stdout: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let sampled = lab::random_scenarios(seed, n as usize, &bounds.bounds(), bounds.budget)?;
    let records: Vec<ResultRecord> =
        sampled.scenarios.iter().map(|s| ResultRecord::from_evaluation(&s.evaluate(), true, true)).collect();
    emit(&records, o, stdout)?;

    let held = records.iter().filter(|r| r.holds == Some(true)).count();
    let range = |get: fn(&ResultRecord) -> Option<f64>| {
        records.iter().filter_map(get).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
    };
    let (tg_lo, tg_hi) = range(|r| r.tariff_gap);
    let (mg_lo, mg_hi) = range(|r| r.transfer_gap);
    let _ = writeln!(
        err,
        "{held}/{n} hold; tariff gap in [{}, {}], transfer gap in [{}, {}]; {} draws",
        format_sig(tg_lo),
        format_sig(tg_hi),
        format_sig(mg_lo),
        format_sig(mg_hi),
        sampled.draws
    );
    Ok(if held as u64 == n { EXIT_OK } else { EXIT_FAILURE })
}

fn parse_fixed(s: &str) -> Result<(lab::Param, f64), Failure> {
    let (name, value) =
        s.split_once('=').ok_or_else(|| Failure::usage(format!("--fix expects NAME=VALUE, got `{s}`")))?;
    let param = name.trim().parse().map_err(Failure::usage)?;
    let value = value.trim().parse().map_err(|e| Failure::usage(format!("--fix {name}: `{value}`: {e}")))?;
    Ok((param, value))
}

fn run_sweep(
    vary: &[String],
    fix: &[String],
    o: &OutputArgs,
    stdout: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let axes = vary.iter().map(|v| SweepAxis::parse(v)).collect::<Result<Vec<_>, _>>().map_err(Failure::usage)?;
    let mut spec = SweepSpec::new(axes);
    for f in fix {
        let (p, v) = parse_fixed(f)?;
        spec = spec.fix(p, v);
    }
    let table = lab::sweep(&spec)?;
    let records: Vec<ResultRecord> = table.records.iter().map(ResultRecord::from_sweep).collect();
    emit(&records, o, stdout)?;
    let skipped = table.records.iter().filter(|r| r.result.is_err()).count();
    let _ = writeln!(err, "{} points, {skipped} skipped", records.len());
    Ok(EXIT_OK)
}

fn population(file: &std::path::Path, solve: bool, o: &OutputArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let resolved = load(file)?;
    if resolved.population.is_none() {
        return Err(Failure::usage(format!("{}: population needs a `peaks` list", file.display())));
    }
    let s = &resolved.scenario;
    let mut rec = if solve {
        let pr = s.coalition.is_some();
        ResultRecord::from_evaluation(&s.evaluate(), true, pr)
    } else {
        ResultRecord::from_evaluation(&s.evaluate(), false, false)
    };
    rec.pr_ideal = s.coalition.map(|c| c.ideal());
    emit(&[rec], o, stdout)?;
    Ok(EXIT_OK)
}

fn oracle_compare(
    file: Option<&PathBuf>,
    seed: u64,
    n: u64,
    grid: &GridArgs,
    o: &OutputArgs,
    stdout: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let grid = grid.grid()?;
    let scenarios = match file {
        Some(f) => vec![load(f)?.scenario],
        None => lab::random_scenarios(seed, n as usize, &SamplingBounds::default(), lab::DEFAULT_BUDGET)?.scenarios,
    };
    let mut worst: f64 = 0.0;
    let mut records = Vec::with_capacity(scenarios.len());
    for s in &scenarios {
        let mut rec = ResultRecord::from_evaluation(&s.evaluate(), true, s.coalition.is_some());
        let (o_smd, o_pr) = oracles(s, &grid)?;
        worst = worst.max(rec.attach_oracle(Some(&o_smd), o_pr.as_ref()));
        records.push(rec);
    }
    emit(&records, o, stdout)?;
    Ok(oracle_verdict(worst, &grid, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("electoral-tariffs").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn scenario_file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path.display().to_string()
    }

    fn parse_one(csv: &str) -> ResultRecord {
        let mut recs = read_records(csv.as_bytes(), Format::Csv).unwrap();
        assert_eq!(recs.len(), 1);
        recs.remove(0)
    }

    #[test]
    fn solve_smd_file() {
        let dir = tempfile::tempdir().unwrap();
        let f = scenario_file(&dir, "smd.toml", "polity = \"smd\"\nt_m = 2\nt_f = 0\n");
        let (code, out, _) = run_args(&["solve", &f]);
        assert_eq!(code, 0);
        let r = parse_one(&out);
        assert_eq!((r.smd_t_star, r.smd_m_star), (Some(1.0), Some(2.0)));
        assert_eq!(r.pr_t_star, None);
    }

    #[test]
    fn solve_pr_with_oracle() {
        let dir = tempfile::tempdir().unwrap();
        let f = scenario_file(&dir, "pr.toml", "polity = \"pr\"\nt_m = 2\nt_f = 0\nt_l = 3\nt_s = 1\nalpha = 0.6\n");
        let (code, out, err) = run_args(&["solve", &f, "--oracle", "--format", "json"]);
        assert_eq!(code, 0, "{err}");
        let r = read_records(out.as_bytes(), Format::Json).unwrap().remove(0);
        assert!((r.pr_t_star.unwrap() - 1.1).abs() < 1e-12);
        assert!(r.oracle_max_delta.unwrap() <= 1e-6);
        assert!(r.smd_oracle_t.is_none());

        let (code, out, _) = run_args(&["solve", &f, "--both"]);
        assert_eq!(code, 0);
        let r = parse_one(&out);
        assert_eq!(r.holds, Some(true));
        assert_eq!(r.smd_t_star, Some(1.0));
    }

    #[test]
    fn solve_errors() {
        let dir = tempfile::tempdir().unwrap();
        let f = scenario_file(&dir, "bad.toml", "polity = \"smd\"\nt_m = 2\nt_f = 3\n");
        let (code, out, err) = run_args(&["solve", &f]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert!(err.contains("0 < t_f < t_m"), "{err}");

        let f = scenario_file(&dir, "typo.toml", "polity = \"smd\"\nt_m = 2\nt_ff = 0\n");
        let (code, _, err) = run_args(&["solve", &f]);
        assert_eq!(code, 2);
        assert!(err.contains("t_ff"), "{err}");

        let f = scenario_file(&dir, "smd.toml", "polity = \"smd\"\nt_m = 2\nt_f = 0\n");
        assert_eq!(run_args(&["solve", &f, "--both"]).0, 2);
        assert_eq!(run_args(&["solve", &f, "--oracle", "--grid", "10"]).0, 2);
        assert_eq!(run_args(&["solve", "/nonexistent/x.toml"]).0, 2);
    }

    #[test]
    fn verify_counts() {
        let (code, out, err) = run_args(&["verify", "--seed", "7", "--n", "1"]);
        assert_eq!(code, 0);
        assert_eq!(read_records(out.as_bytes(), Format::Csv).unwrap().len(), 1);
        assert!(err.starts_with("1/1 hold"), "{err}");

        let (code, _, err) = run_args(&["verify", "--n", "0"]);
        assert_eq!(code, 2, "{err}");
        let (code, _, _) = run_args(&["verify", "--n", "3", "--t-f", "6:8", "--t-m", "1:5", "--budget", "1000"]);
        assert_eq!(code, 1);
        let (code, _, _) = run_args(&["verify", "--alpha", "0.9:0.1"]);
        assert_eq!(code, 2);
        assert_eq!(run_args(&["verify", "--alpha", "nope"]).0, 2);
    }

    #[test]
    fn sweep_output_and_overwrite() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv").display().to_string();
        let args = [
            "sweep",
            "--vary",
            "alpha=0.45:0.95:0.1",
            "--fix",
            "t_m=2",
            "--fix",
            "t_f=0",
            "--fix",
            "t_l=3",
            "--fix",
            "t_s=1",
            "--output",
            &path,
        ];
        let (code, _, err) = run_args(&args);
        assert_eq!(code, 0, "{err}");
        let recs = read_records(std::fs::read(&path).unwrap().as_slice(), Format::Csv).unwrap();
        assert_eq!(recs.len(), 6);
        assert_eq!(recs[0].status, "skipped: ideal<=t_m");
        assert!(recs[1..].iter().all(|r| r.status == "ok" && r.holds == Some(true)));

        let (code, _, err) = run_args(&args);
        assert_eq!(code, 2);
        assert!(err.contains("--force"), "{err}");
        let mut forced = args.to_vec();
        forced.push("--force");
        assert_eq!(run_args(&forced).0, 0);

        assert_eq!(run_args(&["sweep", "--vary", "alpha=1:0:0.1", "--fix", "t_m=2", "--fix", "t_f=0"]).0, 2);
        assert_eq!(run_args(&["sweep", "--vary", "t_m=2:3:0.5"]).0, 2);
        assert_eq!(run_args(&["sweep", "--vary", "t_m=2:3:0.5", "--fix", "t_f"]).0, 2);
        let missing = dir.path().join("no/such/dir.csv").display().to_string();
        assert_eq!(run_args(&["sweep", "--vary", "t_m=2:3:0.5", "--fix", "t_f=0", "-o", &missing]).0, 1);
    }

    #[test]
    fn population_files() {
        let dir = tempfile::tempdir().unwrap();
        let text = "polity = \"pr\"\nt_f = 0.5\nalpha = 0.6\npeaks = [1, 2, 3, 4, 5]\n\
                    labels = [\"small\", \"small\", \"large\", \"large\", \"large\"]\n";
        let f = scenario_file(&dir, "pop6.toml", text);
        let (code, _, err) = run_args(&["population", &f]);
        assert_eq!(code, 1);
        assert!(err.contains("ideal = 3") && err.contains("t_m = 3"), "{err}");

        let f = scenario_file(&dir, "pop7.toml", &text.replace("0.6", "0.7"));
        let (code, out, _) = run_args(&["population", &f]);
        assert_eq!(code, 0);
        let r = parse_one(&out);
        assert_eq!((r.t_m, r.t_l, r.t_s, r.pr_ideal), (Some(3.0), Some(4.0), Some(1.5), Some(3.25)));
        assert_eq!(r.pr_t_star, None);
        let (_, out, _) = run_args(&["population", &f, "--solve"]);
        assert_eq!(parse_one(&out).pr_t_star, Some(1.875));

        let f = scenario_file(&dir, "empty.toml", "polity = \"smd\"\nt_f = 0\npeaks = []\n");
        assert_eq!(run_args(&["population", &f]).0, 2);
        let f = scenario_file(&dir, "nopeaks.toml", "polity = \"smd\"\nt_m = 2\nt_f = 0\n");
        assert_eq!(run_args(&["population", &f]).0, 2);
    }

    #[test]
    fn oracle_compare_sampled() {
        let (code, out, err) = run_args(&["oracle-compare", "--n", "3", "--grid", "201", "--format", "json"]);
        assert_eq!(code, 0, "{err}");
        let recs = read_records(out.as_bytes(), Format::Json).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(recs.iter().all(|r| r.oracle_max_delta.unwrap() <= 1e-6 && r.pr_oracle_m.is_some()));
        assert_eq!(run_args(&["oracle-compare", "--tolerance", "0"]).0, 2);
    }

    #[test]
    fn help_is_not_an_error() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("oracle-compare"));
        assert_eq!(run_args(&["frobnicate"]).0, 2);
    }
}
