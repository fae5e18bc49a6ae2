//! Command-line front end: argument definitions, the four commands, and
//! the exit-code contract (0 success, 1 usage or parse error, 2 cell
//! budget exceeded, 2 + number of failed checks for `verify`, capped at 125).

mod format;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::closure::{Aggregation, ClosureEngine, SampleScheme, Separation};
use crate::exactnum::{Rat, RatVector};
use crate::knapsack::{hull_of, Instance};
use crate::polyhedron::Polyhedron;
use crate::verify::{run_suite, summarize, to_json, to_tsv, CheckReport, Status};
use crate::{Error, DEFAULT_CELL_BUDGET};

pub use format::{parse_instance, serialize_instance, InstanceFile};

#[derive(Parser, Debug)]
#[command(
    name = "aggclosure",
    version,
    about = "Exact aggregation closures of packing and covering programs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Maximum number of lattice cells a single enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_CELL_BUDGET)]
    pub budget: u64,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file (`verify`: output directory for report.tsv and report.json).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct SchemeArgs {
    /// Grid denominator D of the multiplier sample.
    #[arg(long, default_value_t = 4)]
    pub grid: u32,
    /// Number of simultaneously aggregated rows.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Local refinement rounds used by separation.
    #[arg(long, default_value_t = 1)]
    pub refine: u32,
}

impl SchemeArgs {
    pub fn scheme(&self) -> Result<SampleScheme, Error> {
        let s = SampleScheme {
            grid_denominator: self.grid,
            include_units: true,
            k: self.k,
            refinement_rounds: self.refine,
        };
        s.validate()?;
        Ok(s)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integer hull of one aggregation.
    Hull {
        instance: PathBuf,
        /// Multipliers, e.g. "1/2 1/2"; separate columns with "|".
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
    },
    /// Closure construction with all intermediate objects.
    Closure {
        instance: PathBuf,
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Search the sampled hulls for an inequality cutting off a point.
    Separate {
        instance: PathBuf,
        /// Point coordinates, e.g. "3/2 1/2".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Run every applicable check on each instance file of a directory.
    Verify {
        dir: PathBuf,
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Record check timings (makes reports run-dependent).
        #[arg(long)]
        timing: bool,
    },
}

/// Text produced by a command and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } => 2,
        _ => 1,
    }
}

pub fn read_instance(path: &Path) -> Result<InstanceFile, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn hrep_lines(p: &Polyhedron) -> String {
    if !p.is_feasible() {
        return format!("{}(empty)\n", p.hrep_text());
    }
    p.hrep_text()
}

fn parse_rats(text: &str, what: &str) -> Result<RatVector, Error> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<Rat>()
                .map_err(|_| Error::Usage(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

pub fn parse_lambda(text: &str, m: usize) -> Result<Aggregation, Error> {
    let columns = text
        .split('|')
        .map(|c| parse_rats(c, "lambda"))
        .collect::<Result<Vec<_>, _>>()?;
    if columns.iter().any(|c| c.dim() != m) {
        return Err(Error::Usage(format!("lambda needs {m} entries per column")));
    }
    Aggregation::from_columns(columns).map_err(|e| match e {
        Error::InvalidInstance(msg) => Error::Usage(msg),
        other => other,
    })
}

pub fn cmd_hull(inst: &Instance, lambda: &str, budget: u64) -> Result<String, Error> {
    let agg = parse_lambda(lambda, inst.m())?;
    Ok(hrep_lines(&hull_of(inst, &agg, budget)?))
}

pub fn cmd_closure(inst: &Instance, scheme: SampleScheme, budget: u64) -> Result<String, Error> {
    let engine = ClosureEngine::with_budget(scheme, budget);
    let art = engine.aggregation_closure(inst)?;
    let mut out = String::new();
    out.push_str("[closure]\n");
    out.push_str(&hrep_lines(&art.closure));
    out.push_str("[L]\n");
    out.push_str(&hrep_lines(&art.l));
    out.push_str("[K]\n");
    out.push_str(&hrep_lines(&art.k));
    out.push_str("[S]\n");
    for t in &art.s {
        let pts: Vec<String> = t.points.iter().map(|p| format!("({p})")).collect();
        out.push_str(&format!("{}  lambda {}\n", pts.join(" "), t.source_lambda));
    }
    out.push_str("[summary]\n");
    out.push_str(&format!("T {}\nS {}\n", art.t_sample.len(), art.s.len()));
    if inst.sense() == crate::knapsack::Sense::Covering {
        match art.gamma {
            Some(g) => out.push_str(&format!("gamma {g}\n")),
            None => out.push_str("gamma -\n"),
        }
    }
    out.push_str(&format!("saturated {}\n", art.saturated));
    Ok(out)
}

pub fn cmd_separate(inst: &Instance, point: &str, scheme: SampleScheme, budget: u64) -> Result<String, Error> {
    let x = parse_rats(point, "point")?;
    if x.dim() != inst.n() {
        return Err(Error::Usage(format!("point needs {} coordinates", inst.n())));
    }
    if x.iter().any(Rat::is_negative) {
        return Err(Error::Usage("point coordinates must be nonnegative".into()));
    }
    let engine = ClosureEngine::with_budget(scheme, budget);
    Ok(match engine.separate(inst, &x)? {
        Separation::Cut {
            inequality,
            violation,
            lambda,
        } => format!("{inequality}  violation {violation}  lambda {lambda}\n"),
        Separation::Inside => "inside\n".into(),
    })
}

/// Reports for every instance file in `dir` (sorted by file name). Files
/// that cannot be read or parsed produce a skipped `parse` report.
pub fn verify_dir(dir: &Path, scheme: SampleScheme, budget: u64) -> Result<Vec<CheckReport>, Error> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    let mut parsed = Vec::new();
    let mut broken = Vec::new();
    for (pos, p) in paths.iter().enumerate() {
        let stem = p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        match read_instance(p) {
            Ok(f) => parsed.push((pos, (f.id.unwrap_or(stem), f.instance))),
            Err(e) => broken.push((pos, stem, e.to_string())),
        }
    }
    let engine = ClosureEngine::with_budget(scheme, budget);
    let named: Vec<(String, Instance)> = parsed.iter().map(|(_, x)| x.clone()).collect();
    let reports = run_suite(&engine, &named);
    // interleave the parse failures at their file positions
    let mut out = Vec::with_capacity(reports.len() + broken.len());
    let mut reports = reports.into_iter().peekable();
    let mut broken = broken.into_iter().peekable();
    for (pos, (id, _)) in &parsed {
        while broken.peek().is_some_and(|b| b.0 < *pos) {
            out.push(parse_report(broken.next().expect("peeked")));
        }
        while reports.peek().is_some_and(|r| &r.instance_id == id) {
            out.push(reports.next().expect("peeked"));
        }
    }
    out.extend(broken.map(parse_report));
    out.extend(reports);
    Ok(out)
}

fn parse_report((_, stem, reason): (usize, String, String)) -> CheckReport {
    CheckReport {
        check_name: "parse".into(),
        instance_id: stem,
        status: Status::Skipped,
        witness: None,
        timing_ms: 0,
        detail: reason,
    }
}

pub fn verify_exit_code(reports: &[CheckReport]) -> i32 {
    let failures = summarize(reports).fail;
    if failures == 0 {
        0
    } else {
        (2 + failures).min(125) as i32
    }
}

fn run_command(cli: &Cli) -> Result<Outcome, Error> {
    let ok = |stdout: String| Outcome { stdout, exit_code: 0 };
    match &cli.command {
        Command::Hull { instance, lambda } => {
            let f = read_instance(instance)?;
            cmd_hull(&f.instance, lambda, cli.budget).map(ok)
        }
        Command::Closure { instance, scheme } => {
            let f = read_instance(instance)?;
            cmd_closure(&f.instance, scheme.scheme()?, cli.budget).map(ok)
        }
        Command::Separate {
            instance,
            point,
            scheme,
        } => {
            let f = read_instance(instance)?;
            cmd_separate(&f.instance, point, scheme.scheme()?, cli.budget).map(ok)
        }
        Command::Verify { dir, scheme, timing } => {
            let reports = verify_dir(dir, scheme.scheme()?, cli.budget)?;
            let tsv = to_tsv(&reports, *timing);
            if let Some(out) = &cli.out {
                fs::create_dir_all(out)?;
                fs::write(out.join("report.tsv"), &tsv)?;
                fs::write(out.join("report.json"), to_json(&reports, *timing))?;
            }
            let s = summarize(&reports);
            let mut stdout = tsv;
            stdout.push_str(&format!("pass {} fail {} skipped {}\n", s.pass, s.fail, s.skipped));
            Ok(Outcome {
                stdout,
                exit_code: verify_exit_code(&reports),
            })
        }
    }
}

/// Runs a parsed command line. Output goes to `--out` when given (except
/// for `verify`, whose reports go there while the table still prints).
pub fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(t) = cli.threads {
            b = b.num_threads(t);
        }
        b.build()
            .map_err(|e| Error::Usage(format!("cannot start worker threads: {e}")))?
    };
    let outcome = pool.install(|| run_command(cli))?;
    match (&cli.out, &cli.command) {
        (Some(path), Command::Hull { .. } | Command::Closure { .. } | Command::Separate { .. }) => {
            fs::write(path, &outcome.stdout)?;
            Ok(Outcome {
                stdout: String::new(),
                exit_code: outcome.exit_code,
            })
        }
        _ => Ok(outcome),
    }
}

/// Parses `args` (program name first) and runs them, returning standard
/// output, standard error and the exit code.
pub fn run<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (
                if code == 0 { e.to_string() } else { String::new() },
                if code == 0 { String::new() } else { e.to_string() },
                code,
            );
        }
    };
    match execute(&cli) {
        Ok(o) => (o.stdout, String::new(), o.exit_code),
        Err(e) => (String::new(), format!("error: {e}\n"), exit_code_for(&e)),
    }
}
