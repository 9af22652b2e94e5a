//! The `qcoord` command line: argument handling, suite dispatch and report
//! rendering. [`run`] is the whole program minus process exit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcoord::coeff::CyclotomicRing;
use qcoord::expr::{eval_classical, eval_noncommutative, parse_expression};
use qcoord::qmatrix::QMatrixAlgebra;
use qcoord::qsln::SlnAlgebra;
use qcoord::report::CheckReport;
use qcoord::{classical, Error};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub mod suites;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qcoord", version, about = "Exact checks for O_q(SL_n) and its classical limit")]
pub struct Cli {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock timings (makes output run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduce an expression to normal form.
    Normalize(NormalizeArgs),
    /// Run one identity suite.
    Check {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Root-of-unity identities, injectivity and spanning count.
    Frobenius(FrobeniusArgs),
    /// The skein constants c_i, t, a and their identities.
    Constants(RankArg),
    /// O_q(SL_n) basis monomials up to a degree.
    Basis {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        degree: u32,
    },
    /// Spanning-set count, formula against enumeration.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
    },
    /// Every suite at its default parameters.
    Report(ReportArgs),
}

#[derive(Subcommand, Debug)]
pub enum Suite {
    Hopf(RankArg),
    Constants(RankArg),
    Permsum {
        #[arg(long)]
        n: usize,
        /// Largest permutation size.
        #[arg(long, default_value_t = 6)]
        k: usize,
    },
    Frobenius(FrobeniusArgs),
    Classical(ClassicalArgs),
    Detexp(NumericArgs),
    Cap(NumericArgs),
    /// Relation count and graded dimensions of O_q(M(n)).
    Frt {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
    /// Row/column det_q agreement and centrality.
    Det(RankArg),
    /// Height-exchange coefficients at v = 1.
    Height(RankArg),
}

#[derive(Args, Debug)]
pub struct RankArg {
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct FrobeniusArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: u32,
    /// Degree bound for the injectivity check.
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
}

#[derive(Args, Debug)]
pub struct NumericArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
}

#[derive(Args, Debug)]
pub struct ClassicalArgs {
    #[command(flatten)]
    pub numeric: NumericArgs,
    /// Evaluate a web description file at a seeded representation.
    #[arg(long)]
    pub web: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgebraKind {
    Mq,
    Sln,
    Classical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingKind {
    Laurent,
    Cyclotomic(u32),
}

fn parse_ring(s: &str) -> std::result::Result<RingKind, String> {
    if s == "laurent" {
        return Ok(RingKind::Laurent);
    }
    match s.strip_prefix("cyclotomic:").map(str::parse::<u32>) {
        Some(Ok(m)) if m >= 1 => Ok(RingKind::Cyclotomic(m)),
        _ => Err(format!("expected `laurent` or `cyclotomic:<m>`, got `{s}`")),
    }
}

#[derive(Args, Debug)]
pub struct NormalizeArgs {
    pub expression: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "laurent", value_parser = parse_ring)]
    pub ring: RingKind,
    #[arg(long, value_enum, default_value_t = AlgebraKind::Mq)]
    pub algebra: AlgebraKind,
}

/// Everything a subcommand emits.
#[derive(Debug, Serialize)]
pub struct Output {
    pub command: String,
    pub passed: bool,
    pub reports: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl Output {
    fn new(command: &str, reports: Vec<CheckReport>, result: Option<Value>) -> Self {
        let passed = reports.iter().all(|r| r.passed);
        Output { command: command.to_string(), passed, reports, result, timings_ms: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.reports {
            let status = if r.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{status} {} {} ({}/{})", r.check, r.params, r.num_passed(), r.outcomes.len());
            for o in &r.outcomes {
                if !o.passed {
                    let _ = writeln!(s, "  FAIL {}: {}", o.name, o.detail.as_deref().unwrap_or(""));
                }
            }
        }
        if let Some(v) = &self.result {
            match v.get("text").and_then(Value::as_str) {
                Some(t) => {
                    let _ = writeln!(s, "{t}");
                }
                None => {
                    let _ = writeln!(s, "{}", serde_json::to_string_pretty(v).expect("values serialize"));
                }
            }
        }
        if let Some(t) = &self.timings_ms {
            for (k, ms) in t {
                let _ = writeln!(s, "time {k}: {ms:.1} ms");
            }
        }
        let _ = writeln!(s, "{}", if self.passed { "all checks passed" } else { "some checks FAILED" });
        s
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

/// A finished run: exit status plus what goes to stdout and stderr.
#[derive(Debug)]
pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name) and executes it.
pub fn run<I, T>(argv: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            return if code == EXIT_PASS {
                Run { code, stdout: text, stderr: String::new() }
            } else {
                Run { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let stdout = if cli.json { out.to_json() + "\n" } else { out.to_text() };
            Run { code: out.exit_code(), stdout, stderr: String::new() }
        }
        Err(e) => Run { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

type Job<'a> = (&'a str, Box<dyn Fn() -> qcoord::Result<Vec<CheckReport>> + Send + Sync + 'a>);

/// Runs independent suites in parallel; results come back in job order.
fn run_jobs(jobs: Vec<Job<'_>>, timings: &mut BTreeMap<String, f64>) -> qcoord::Result<Vec<CheckReport>> {
    let results: Vec<(String, f64, qcoord::Result<Vec<CheckReport>>)> = jobs
        .par_iter()
        .map(|(name, f)| {
            let t = Instant::now();
            let r = f();
            (name.to_string(), t.elapsed().as_secs_f64() * 1e3, r)
        })
        .collect();
    let mut out = Vec::new();
    for (name, ms, r) in results {
        timings.insert(name, ms);
        out.extend(r?);
    }
    Ok(out)
}

pub fn execute(cli: &Cli) -> qcoord::Result<Output> {
    let start = Instant::now();
    let mut timings = BTreeMap::new();
    let mut out = match &cli.command {
        Command::Normalize(a) => normalize(a)?,
        Command::Check { suite } => check(suite)?,
        Command::Frobenius(a) => Output::new("frobenius", suites::frobenius(a.n, a.m, a.degree)?, None),
        Command::Constants(a) => {
            let (r, v) = suites::constants_report(a.n)?;
            Output::new("constants", vec![r], Some(v))
        }
        Command::Basis { n, degree } => {
            let (r, v) = suites::basis(*n, *degree)?;
            Output::new("basis", vec![r], Some(v))
        }
        Command::Count { n, m } => {
            let (r, v) = suites::count(*n, *m)?;
            Output::new("count", vec![r], Some(v))
        }
        Command::Report(a) => Output::new("report", full_report(a.seed, a.trials, &mut timings)?, None),
    };
    if cli.timings {
        timings.insert("total".into(), start.elapsed().as_secs_f64() * 1e3);
        out.timings_ms = Some(timings);
    }
    Ok(out)
}

fn check(suite: &Suite) -> qcoord::Result<Output> {
    let (name, reports, result) = match suite {
        Suite::Hopf(a) => ("check hopf", vec![suites::hopf(a.n)?], None),
        Suite::Constants(a) => {
            let (r, v) = suites::constants_report(a.n)?;
            ("check constants", vec![r], Some(v))
        }
        Suite::Permsum { n, k } => ("check permsum", vec![suites::permsum(*n, *k)?], None),
        Suite::Frobenius(a) => ("check frobenius", suites::frobenius(a.n, a.m, a.degree)?, None),
        Suite::Classical(a) => {
            let NumericArgs { n, seed, trials } = a.numeric;
            let mut reports = suites::classical(n, seed, trials)?;
            let mut result = None;
            if let Some(path) = &a.web {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Web(format!("cannot read {}: {e}", path.display())))?;
                let desc = classical::parse_web(&text)?;
                let value = classical::eval_web_description(&desc, n, seed)?;
                result = Some(json!({ "web": path.display().to_string(), "value": [value.re, value.im] }));
                let finite = value.re.is_finite() && value.im.is_finite();
                reports.push(CheckReport::new(
                    "web",
                    json!({ "n": n, "seed": seed }),
                    vec![qcoord::report::CheckOutcome::from_bool("value is finite", finite, || format!("{value}"))],
                ));
            }
            ("check classical", reports, result)
        }
        Suite::Detexp(a) => ("check detexp", vec![suites::detexp(a.n, a.seed, a.trials)?], None),
        Suite::Cap(a) => ("check cap", vec![suites::cap(a.n, a.seed, a.trials)?], None),
        Suite::Frt { n, degree } => ("check frt", vec![suites::frt(*n, *degree)?], None),
        Suite::Det(a) => ("check det", vec![suites::det(a.n)?], None),
        Suite::Height(a) => ("check height", vec![suites::height(a.n)?], None),
    };
    Ok(Output::new(name, reports, result))
}

/// The fast tier of every suite.
pub fn full_report(seed: u64, trials: u64, timings: &mut BTreeMap<String, f64>) -> qcoord::Result<Vec<CheckReport>> {
    let mut jobs: Vec<Job<'_>> = Vec::new();
    for n in [2usize, 3] {
        jobs.push(("frt", Box::new(move || Ok(vec![suites::frt(n, if n == 2 { 5 } else { 4 })?]))));
        jobs.push(("det", Box::new(move || Ok(vec![suites::det(n)?]))));
        jobs.push(("hopf", Box::new(move || Ok(vec![suites::hopf(n)?]))));
    }
    jobs.push((
        "constants",
        Box::new(|| (1..=6).map(|n| suites::constants_report(n).map(|r| r.0)).collect()),
    ));
    jobs.push(("permsum", Box::new(|| (1..=6).map(|n| suites::permsum(n, 6)).collect())));
    jobs.push(("height", Box::new(|| (1..=5).map(suites::height).collect())));
    for m in [3u32, 5, 7] {
        let degree = if m == 7 { 2 } else { 3 };
        jobs.push(("frobenius", Box::new(move || suites::frobenius(2, m, degree))));
    }
    jobs.push((
        "count",
        Box::new(|| {
            let mut v = Vec::new();
            for n in 1..=3 {
                for m in 1..=5 {
                    v.push(suites::count(n, m)?.0);
                }
            }
            Ok(v)
        }),
    ));
    for n in [2usize, 3, 4] {
        jobs.push(("classical", Box::new(move || suites::classical(n, seed, trials))));
    }
    for n in [2usize, 3] {
        jobs.push(("detexp", Box::new(move || Ok(vec![suites::detexp(n, seed, trials)?]))));
        jobs.push(("cap", Box::new(move || Ok(vec![suites::cap(n, seed, trials)?]))));
    }
    let mut per_job = BTreeMap::new();
    let reports = run_jobs(jobs, &mut per_job)?;
    // Jobs sharing a name are summed.
    for (k, v) in per_job {
        *timings.entry(k).or_insert(0.0) += v;
    }
    Ok(reports)
}

fn normalize(a: &NormalizeArgs) -> qcoord::Result<Output> {
    let expr = parse_expression(&a.expression, a.n)?;
    let (text, value) = match a.algebra {
        AlgebraKind::Classical => {
            if a.ring != RingKind::Laurent {
                return Err(Error::Precondition("the classical algebra has rational coefficients only".into()));
            }
            let p = eval_classical(&expr, a.n)?;
            let terms: Vec<Value> = p
                .terms()
                .map(|(m, c)| json!({ "exponents": m, "coeff": suites::rational_json(c) }))
                .collect();
            (p.to_string(), json!(terms))
        }
        AlgebraKind::Mq | AlgebraKind::Sln => {
            let mq = QMatrixAlgebra::build(a.n)?;
            let sln = a.algebra == AlgebraKind::Sln;
            match a.ring {
                RingKind::Laurent if sln => {
                    let alg = SlnAlgebra::new(mq)?;
                    let p = eval_noncommutative(&expr, &|p| alg.sln_normal_form(p))?;
                    (p.to_string(), p.to_json())
                }
                RingKind::Laurent => {
                    let p = eval_noncommutative(&expr, &|p| Ok(mq.normal_form(p)))?;
                    (p.to_string(), p.to_json())
                }
                RingKind::Cyclotomic(m) => {
                    let p = eval_noncommutative(&expr, &|p| Ok(mq.normal_form(p)))?;
                    let cyc = mq.change_ring(CyclotomicRing::new(m))?;
                    let p = cyc.embed(&p);
                    let p = if sln { SlnAlgebra::new(cyc)?.sln_normal_form(&p)? } else { cyc.normal_form(&p) };
                    (p.to_string(), p.to_json())
                }
            }
        }
    };
    let ring = match a.ring {
        RingKind::Laurent => "laurent".to_string(),
        RingKind::Cyclotomic(m) => format!("cyclotomic:{m}"),
    };
    let algebra = format!("{:?}", a.algebra).to_lowercase();
    let result = json!({
        "input": expr.to_string(),
        "n": a.n,
        "ring": ring,
        "algebra": algebra,
        "normal_form": value,
        "text": text,
    });
    Ok(Output::new("normalize", Vec::new(), Some(result)))
}
