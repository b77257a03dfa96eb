//! Argument parsing, command dispatch, exit codes and error records.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use quadkit::fixtures::seeded_polynomial;
use quadkit::oracle::OracleError;
use quadkit::{
    baselines, metrics, quadratize_n, truth_table_to_multilinear, verify_perfect, Polynomial, Quadratization,
    Step, Tolerance, VerificationReport,
};
use serde_json::json;
use thiserror::Error;

use crate::formats::{self, ParseError, Qubo, QuboError};
use crate::report::{self, Report};
use crate::reproduce::{self, Status};

pub const THREADS_ENV: &str = "QUADKIT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "quadkit", version, about = "Perfect quadratization of pseudo-Boolean polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quadratize a polynomial and write a QUBO, polynomial or report.
    Quadratize(QuadratizeArgs),
    /// Check that a QUBO reproduces a polynomial after minimizing auxiliaries.
    Verify(VerifyArgs),
    /// Compare the group method with the baselines.
    Compare(CompareArgs),
    /// Convert a value table (bit j of the row = variable j+1) to a polynomial.
    Truth2poly(IoArgs),
    /// Rerun the built-in worked examples.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Method {
    #[default]
    Theorem1,
    Rosenberg,
    Termwise,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Theorem1 => "theorem1",
            Method::Rosenberg => "rosenberg",
            Method::Termwise => "termwise",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Qubo,
    Poly,
    Report,
}

/// Polynomial source: a file, or a seeded random instance.
#[derive(Debug, Args)]
pub struct Source {
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Generate a random degree-<=4 polynomial on this many variables instead.
    #[arg(long, conflicts_with = "input")]
    pub random: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct QuadratizeArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Method::Theorem1)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Format::Qubo)]
    pub format: Format,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Also write the report as a JSON object here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// The original polynomial.
    #[arg(long)]
    pub input: PathBuf,
    /// The quadratic to check, in QUBO format.
    #[arg(long)]
    pub qubo: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct IoArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Config(String),
    #[error("verification budget exceeded: {0}")]
    Budget(OracleError),
    #[error("verification failed: {message}")]
    Verification { message: String, witness: Option<String> },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification { .. } => 1,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Config(_) => "config",
            CliError::Budget(_) => "budget",
            CliError::Verification { .. } => "verification",
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> String {
        let mut v = json!({
            "error": self.kind(),
            "code": self.exit_code(),
            "message": self.to_string(),
        });
        match self {
            CliError::Parse { path, source } => {
                v["path"] = json!(path.display().to_string());
                v["line"] = json!(source.line);
            }
            CliError::Io { path, .. } => v["path"] = json!(path.display().to_string()),
            CliError::Verification {
                witness: Some(w), ..
            } => v["witness"] = json!(w),
            _ => {}
        }
        v.to_string()
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn parsed<T>(path: &Path, r: Result<T, ParseError>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

/// Writes via a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_owned(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, text),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn tolerance(t: f64) -> Result<Tolerance, CliError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(CliError::Config(format!("tolerance must be positive, got {t}")));
    }
    Ok(Tolerance::new(t, t))
}

fn load(src: &Source) -> Result<Polynomial, CliError> {
    match (&src.input, src.random) {
        (Some(path), None) => parsed(path, formats::parse_polynomial(&read(path)?)),
        (None, Some(n)) if (1..=16).contains(&n) => Ok(seeded_polynomial(n, 4, 0.5, src.seed)),
        (None, Some(n)) => Err(CliError::Config(format!("--random takes 1..=16 variables, got {n}"))),
        _ => Err(CliError::Config("need --input or --random".into())),
    }
}

fn build(p: &Polynomial, method: Method) -> Result<Quadratization, CliError> {
    let cfg = |e: &dyn std::fmt::Display| CliError::Config(format!("{}: {e}", method.name()));
    match method {
        Method::Theorem1 => quadratize_n(p).map_err(|e| cfg(&e)),
        Method::Rosenberg => baselines::rosenberg(p, None).map_err(|e| cfg(&e)),
        Method::Termwise => baselines::termwise(p).map_err(|e| cfg(&e)),
    }
}

fn check(f: &Polynomial, q: &Polynomial, tol: Tolerance) -> Result<VerificationReport, CliError> {
    verify_perfect(f, q, tol).map_err(|e| match e {
        OracleError::BudgetExceeded { .. } => CliError::Budget(e),
        e => CliError::Config(e.to_string()),
    })
}

fn fail(r: &VerificationReport, n: u32) -> CliError {
    CliError::Verification {
        message: format!("worst gap {:e}", r.worst_gap),
        witness: Some(report::witness_bits(r, n)),
    }
}

fn provenance(q: &Quadratization, method: Method, n: u32) -> Report {
    let m = metrics(q);
    let mut rep = Report::default();
    rep.push("method", method.name())
        .push("original_vars", n)
        .push("aux_vars", m.aux_count)
        .push("new_quadratic_terms", m.new_quadratic_terms)
        .push("coeff_min", format!("{:.16e}", m.coeff_min))
        .push("coeff_max", format!("{:.16e}", m.coeff_max));
    for (k, c) in q.components.iter().enumerate() {
        let label = |vs: &[quadkit::VarId]| {
            vs.iter()
                .map(|&v| formats::dense_index(v, n).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let line = match &c.step {
            Step::Group { support, plan, aux } => {
                let row = plan.case_row.map_or("search".to_string(), |r| r.to_string());
                format!(
                    "group {} aux {} lemma {} row {} flips {:?} pre_flip {}",
                    label(support),
                    formats::dense_index(*aux, n),
                    plan.lemma,
                    row,
                    plan.flips(),
                    plan.pre_flip
                )
            }
            Step::Body => "substituted body".into(),
            Step::Substitution { pair, aux, weight } => format!(
                "pair {} aux {} weight {weight}",
                label(&[pair.0, pair.1]),
                formats::dense_index(*aux, n)
            ),
            Step::Monomial { support, lemma, aux } => {
                format!("monomial {} aux {} lemma {lemma}", label(support), formats::dense_index(*aux, n))
            }
            Step::Transcribed => "transcribed".into(),
        };
        rep.push(format!("component.{k}"), line);
    }
    rep
}

fn cmd_quadratize(a: &QuadratizeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let tol = tolerance(a.tolerance)?;
    let f = load(&a.source)?;
    let n = f.original_count() as u32;
    let q = build(&f, a.method)?;
    let qubo = Qubo::from_polynomial(&q.quadratic, n).map_err(|e| CliError::Config(e.to_string()))?;
    let text = qubo.to_text();
    // the exported text, not the in-memory polynomial, is what gets verified
    let back = Qubo::parse(&text).map_err(|e| CliError::Config(e.to_string()))?;
    let r = check(&f, &back.to_polynomial(), tol)?;

    let mut rep = provenance(&q, a.method, n);
    if a.source.random.is_some() {
        rep.push("seed", a.source.seed);
    }
    rep.push("verified", r.ok).push("points", r.points);
    if !r.ok {
        return Err(fail(&r, n));
    }
    let artifact = match a.format {
        Format::Qubo => text,
        Format::Poly => formats::print_polynomial(&q.quadratic, n),
        Format::Report => rep.to_text(),
    };
    emit(out, a.output.as_deref(), &artifact)?;
    if a.output.is_some() && a.format != Format::Report {
        emit(out, None, &rep.to_text())?;
    }
    if let Some(j) = &a.json {
        write_atomic(j, &rep.to_json())?;
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let tol = tolerance(a.tolerance)?;
    let f = parsed(&a.input, formats::parse_polynomial(&read(&a.input)?))?;
    let qubo = match Qubo::parse(&read(&a.qubo)?) {
        Ok(q) => q,
        Err(QuboError::Parse(source)) => {
            return Err(CliError::Parse {
                path: a.qubo.clone(),
                source,
            })
        }
        Err(e) => return Err(CliError::Config(e.to_string())),
    };
    let n = qubo.n;
    if f.original_count() as u32 > n {
        return Err(CliError::Config(format!(
            "polynomial uses b{} but the QUBO has {n} original variables",
            f.original_count()
        )));
    }
    let r = check(&f, &qubo.to_polynomial(), tol)?;
    emit(out, a.output.as_deref(), &report::verification(&r, n).to_text())?;
    if r.ok {
        Ok(())
    } else {
        Err(fail(&r, n))
    }
}

fn cmd_compare(a: &CompareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let tol = tolerance(a.tolerance)?;
    let f = load(&a.source)?;
    let mut rows = Vec::new();
    let mut bad = None;
    for method in [Method::Theorem1, Method::Rosenberg, Method::Termwise] {
        let q = build(&f, method)?;
        let r = check(&f, &q.quadratic, tol)?;
        if !r.ok && bad.is_none() {
            bad = Some(fail(&r, f.original_count() as u32));
        }
        rows.push((method.name(), metrics(&q)));
    }
    emit(out, a.output.as_deref(), &report::metrics_table(&rows))?;
    bad.map_or(Ok(()), Err)
}

fn cmd_truth2poly(a: &IoArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (values, n) = parsed(&a.input, formats::parse_table(&read(&a.input)?))?;
    let p = truth_table_to_multilinear(&values, n).map_err(|e| CliError::Config(e.to_string()))?;
    emit(out, a.output.as_deref(), &formats::print_polynomial(&p, n as u32))
}

fn cmd_reproduce(a: &ReproduceArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let checks = reproduce::run_all();
    let mut text: String = checks.iter().map(|c| format!("{c}\n")).collect();
    let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
    let deviations = checks.iter().filter(|c| c.status == Status::Deviation).count();
    text.push_str(&format!(
        "summary: {} checks, {failed} failed, {deviations} deviations\n",
        checks.len()
    ));
    emit(out, a.output.as_deref(), &text)?;
    if failed > 0 {
        return Err(CliError::Verification {
            message: format!("{failed} reproduction checks failed"),
            witness: None,
        });
    }
    Ok(())
}

/// Applies `QUADKIT_THREADS` to the global pool.
pub fn configure_threads(value: Option<&str>) -> Result<(), CliError> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
    #[cfg(feature = "parallel")]
    {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    configure_threads(std::env::var(THREADS_ENV).ok().as_deref())?;
    match &cli.command {
        Command::Quadratize(a) => cmd_quadratize(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Compare(a) => cmd_compare(a, out),
        Command::Truth2poly(a) => cmd_truth2poly(a, out),
        Command::Reproduce(a) => cmd_reproduce(a, out),
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let _ = e.print();
            let rec = json!({"error": "usage", "code": 2, "message": e.kind().to_string()});
            eprintln!("{rec}");
            return 2;
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("{}", e.record());
            e.exit_code()
        }
    }
}
