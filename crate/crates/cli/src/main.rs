//! `bensonkit`: exact efficiency and proper-efficiency checks from the
//! command line.
//!
//! Exit status: 0 success, 1 a `check` verdict was "not member", 2 input
//! error, 3 internal consistency failure (including failed suites).

mod plot;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use bensonkit::efficiency::{self, CriterionForm, Verdict};
use bensonkit::harness::{self, CandidateSet, ClassificationRow, DichotomyReport, Provenance, Strategy, SuiteReport};
use bensonkit::lp;
use bensonkit::polyhedron::WitnessBranch;
use bensonkit::rational::{self, format_vector, parse_rational, parse_vector, serde_q, Rational};
use bensonkit::vop::OrthantTest;
use bensonkit::{Error, LinearVop, Perturbation, PerturbationKind, QueryPoint};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "bensonkit", version, about = "Exact efficiency and proper-efficiency certificates for linear vector optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide (approximate) efficiency and proper efficiency at one point.
    Check {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Query point, e.g. "0,1/2".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, value_enum, default_value_t = FormArg::Both)]
        form: FormArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Classify a generated candidate set and run the dichotomy check.
    Analyze {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Lattice spacing for candidate generation.
        #[arg(long, default_value = "1/2")]
        grid_step: String,
        /// Maximum number of lattice candidates.
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the random-instance property suites.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Instances per suite (the classical-case and orthant suites use half).
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Reproduce the built-in worked examples.
    Examples {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Write an SVG of a 2-D problem.
    Plot {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Adds a panel with the criterion cone at this point.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// "xmin,xmax,ymin,ymax".
        #[arg(long, default_value = "-4,4,-4,4", allow_hyphen_values = true)]
        viewport: String,
        #[arg(long, default_value = "1/2")]
        grid_step: String,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ProblemArgs {
    /// Problem file in the JSON problem format.
    #[arg(long)]
    problem: PathBuf,
    /// Perturbation vector; zero when omitted.
    #[arg(long, allow_hyphen_values = true)]
    perturbation: Option<String>,
    /// Defaults to epsilon when K is the orthant and e otherwise.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindArg {
    Epsilon,
    E,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormArg {
    Plain,
    #[value(name = "plusK")]
    PlusK,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum OutputArg {
    Text,
    Json,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Internal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

struct Loaded {
    problem: LinearVop,
    pert: Perturbation,
}

fn load(args: &ProblemArgs) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(&args.problem)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", args.problem.display())))?;
    let problem = LinearVop::from_json(&text)?;
    let kind = match args.kind {
        Some(KindArg::Epsilon) => PerturbationKind::Epsilon,
        Some(KindArg::E) => PerturbationKind::E,
        None if problem.cone_is_orthant(OrthantTest::Structural) => PerturbationKind::Epsilon,
        None => PerturbationKind::E,
    };
    let vector = match &args.perturbation {
        Some(t) => parse_vector(t)?,
        None => rational::zeros(problem.m()),
    };
    let pert = Perturbation { vector, kind };
    problem.validate_perturbation(&pert)?;
    Ok(Loaded { problem, pert })
}

fn emit_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

/// Machine-readable result of `check`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    #[serde(with = "serde_q::vec")]
    pub point: Vec<Rational>,
    pub perturbation: Perturbation,
    pub eps_efficient: Verdict,
    /// Keyed by criterion form: "plain" and/or "plusK".
    pub proper: BTreeMap<String, Verdict>,
    pub properly_efficient: bool,
}

fn describe(v: &Verdict) -> String {
    use efficiency::Certificate::*;
    match &v.certificate {
        DominationWitness { point, image } => {
            format!("dominated by y = {} with f(y) = {}", format_vector(point), format_vector(image))
        }
        ConeWitness(w) => {
            let branch = match &w.witness.branch {
                WitnessBranch::Base { lambda, .. } => format!("base branch, lambda = {lambda}"),
                WitnessBranch::Recession => "recession branch".to_string(),
            };
            format!("cone witness w = {} ({branch}), preimage {}", format_vector(&w.witness.ray), format_vector(&w.preimage))
        }
        VacuousOrProven(e) => format!("{} ({} LPs)", e.summary, e.lps.len()),
    }
}

fn form_name(f: CriterionForm) -> &'static str {
    match f {
        CriterionForm::Plain => "plain",
        CriterionForm::PlusK => "plusK",
    }
}

fn run_check(problem: &ProblemArgs, point: &str, form: FormArg, output: OutputArg) -> Result<(String, u8), Failure> {
    let Loaded { problem: p, pert } = load(problem)?;
    let x = QueryPoint::new(&p, parse_vector(point)?)?;
    let eff = efficiency::is_eps_efficient(&p, &x, &pert)?;
    let forms: &[CriterionForm] = match form {
        FormArg::Plain => &[CriterionForm::Plain],
        FormArg::PlusK => &[CriterionForm::PlusK],
        FormArg::Both => &[CriterionForm::Plain, CriterionForm::PlusK],
    };
    let mut proper = BTreeMap::new();
    for &f in forms {
        proper.insert(form_name(f).to_string(), efficiency::is_benson_proper(&p, &x, &pert, f)?);
    }
    let answers: Vec<bool> = proper.values().map(|v| v.member).collect();
    if answers.windows(2).any(|w| w[0] != w[1]) {
        return Err(Failure::Internal("plain and plusK criterion forms disagree".into()));
    }
    let report = CheckReport {
        point: x.coords().to_vec(),
        perturbation: pert,
        eps_efficient: eff,
        properly_efficient: answers[0],
        proper,
    };
    let status = if report.eps_efficient.member && report.properly_efficient { 0 } else { 1 };
    let text = match output {
        OutputArg::Json => emit_json(&report),
        OutputArg::Text => {
            let mut s = String::new();
            let kind = match report.perturbation.kind {
                PerturbationKind::Epsilon => "epsilon",
                PerturbationKind::E => "e",
            };
            let _ = writeln!(s, "point:              {}", format_vector(&report.point));
            let _ = writeln!(s, "perturbation:       {kind} = {}", format_vector(&report.perturbation.vector));
            let _ = writeln!(s, "eps_efficient:      {}  {}", report.eps_efficient.member, describe(&report.eps_efficient));
            for (name, v) in &report.proper {
                let _ = writeln!(s, "properly_efficient: {}  [{name}] {}", v.member, describe(v));
            }
            s
        }
    };
    Ok((text, status))
}

#[derive(Serialize)]
struct AnalyzeReport<'a> {
    perturbation: &'a Perturbation,
    candidates: usize,
    rows: &'a [ClassificationRow],
    dichotomy: &'a DichotomyReport,
    note: &'static str,
}

const SAMPLE_NOTE: &str = "all checks are pointwise over the listed candidates; unsampled points are not covered";

fn provenance_name(p: Option<Provenance>) -> &'static str {
    match p {
        Some(Provenance::Vertex) => "vertex",
        Some(Provenance::EdgeMidpoint) => "edge midpoint",
        Some(Provenance::Anchor) => "anchor",
        Some(Provenance::RayProbe) => "ray probe",
        Some(Provenance::Lattice) => "lattice",
        None => "-",
    }
}

fn run_analyze(problem: &ProblemArgs, grid_step: &str, budget: usize, output: OutputArg) -> Result<(String, u8), Failure> {
    let Loaded { problem: p, pert } = load(problem)?;
    let step = parse_rational(grid_step)?;
    if step <= Rational::from_integer(0.into()) {
        return Err(Failure::Input("grid step must be positive".into()));
    }
    let strategy = Strategy { grid_step: step, max_lattice_points: budget, ..Strategy::default() };
    let candidates = harness::enumerate_candidates(&p, &strategy)?;
    let rows = harness::classify(&p, &pert, &candidates)?;
    let dichotomy = harness::dichotomy_check(&rows);
    let text = match output {
        OutputArg::Json => emit_json(&AnalyzeReport {
            perturbation: &pert,
            candidates: rows.len(),
            rows: &rows,
            dichotomy: &dichotomy,
            note: SAMPLE_NOTE,
        }),
        OutputArg::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{:<24} {:<14} {:<10} {:<10}", "point", "source", "efficient", "proper");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:<24} {:<14} {:<10} {:<10}",
                    format_vector(&r.point),
                    provenance_name(r.provenance),
                    r.eps_efficient,
                    r.benson_proper
                );
            }
            let outcome = match &dichotomy.outcome {
                harness::DichotomyOutcome::AllProper => "all efficient candidates proper".to_string(),
                harness::DichotomyOutcome::NoneProper => "no efficient candidate proper".to_string(),
                harness::DichotomyOutcome::Violation { proper, improper } => format!(
                    "VIOLATION: proper at {} but not at {}",
                    format_vector(&proper.point),
                    format_vector(&improper.point)
                ),
            };
            let _ = writeln!(s, "\n{} candidates, {} efficient, {} proper", rows.len(), dichotomy.efficient_rows, dichotomy.proper_rows);
            let _ = writeln!(s, "dichotomy: {outcome}");
            let _ = writeln!(s, "note: {SAMPLE_NOTE}");
            s
        }
    };
    let status = if matches!(dichotomy.outcome, harness::DichotomyOutcome::Violation { .. }) { 3 } else { 0 };
    Ok((text, status))
}

#[derive(Serialize)]
struct VerifyReport {
    seed: u64,
    suites: Vec<SuiteReport>,
    lp_solves: u64,
    lp_certificates_failed: u64,
    note: &'static str,
}

fn run_verify(seed: u64, budget: usize, output: OutputArg) -> Result<(String, u8), Failure> {
    let half = budget.div_ceil(2);
    let suites = vec![
        harness::form_agreement_suite(seed, budget),
        harness::isermann_suite(seed, half),
        harness::dichotomy_suite(seed, budget, false),
        harness::dichotomy_suite(seed, half, true),
    ];
    let stats = lp::stats();
    let ok = suites.iter().all(SuiteReport::passed) && stats.failed == 0;
    let report = VerifyReport { seed, suites, lp_solves: stats.solves, lp_certificates_failed: stats.failed, note: SAMPLE_NOTE };
    let text = match output {
        OutputArg::Json => emit_json(&report),
        OutputArg::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "seed {seed}");
            for r in &report.suites {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                let tally: Vec<String> = r.tally.iter().map(|(k, v)| format!("{k}: {v}")).collect();
                let _ = writeln!(s, "[{status}] {}: {} instances, {} checks ({})", r.name, r.instances, r.checks, tally.join(", "));
                for f in &r.failures {
                    let _ = writeln!(s, "    {f}");
                }
            }
            let _ = writeln!(s, "LP solves: {}, certificate failures: {}", report.lp_solves, report.lp_certificates_failed);
            s
        }
    };
    Ok((text, if ok { 0 } else { 3 }))
}

fn run_examples(output: OutputArg) -> Result<(String, u8), Failure> {
    let report = harness::reproduce_examples()?;
    let text = match output {
        OutputArg::Json => emit_json(&report),
        OutputArg::Text => report.render_text(),
    };
    Ok((text, if report.passed() { 0 } else { 3 }))
}

fn run_plot(problem: &ProblemArgs, point: Option<&str>, viewport: &str, grid_step: &str, out: Option<&PathBuf>) -> Result<(String, u8), Failure> {
    let Loaded { problem: p, pert } = load(problem)?;
    if p.n() != 2 || p.m() != 2 {
        return Err(Failure::Input(format!("plot needs n = m = 2, got n = {}, m = {}", p.n(), p.m())));
    }
    let view = plot::Viewport::parse(viewport)?;
    let step = parse_rational(grid_step)?;
    if step <= Rational::from_integer(0.into()) {
        return Err(Failure::Input("grid step must be positive".into()));
    }
    let mut points = Vec::new();
    let mut x = (&view.xmin / &step).ceil() * &step;
    while x <= view.xmax {
        let mut y = (&view.ymin / &step).ceil() * &step;
        while y <= view.ymax {
            points.push(vec![x.clone(), y.clone()]);
            y += &step;
        }
        x += &step;
    }
    let candidates = CandidateSet::from_points(&p, points, Provenance::Lattice);
    let rows = harness::classify(&p, &pert, &candidates)?;
    let cone_panel = match point {
        Some(text) => {
            let q = QueryPoint::new(&p, parse_vector(text)?)?;
            let s = efficiency::criterion_set(&p, &q, &pert, CriterionForm::Plain)?;
            let cone = s.generated_cone_closure()?.to_cone();
            let verdict = efficiency::is_benson_proper(&p, &q, &pert, CriterionForm::Plain)?;
            let ray = verdict.cone_witness().map(|w| w.witness.ray.clone());
            Some((cone.carrier().clone(), p.cone().negate().carrier().clone(), ray))
        }
        None => None,
    };
    let title = format!("{} with perturbation {}", problem.problem.display(), format_vector(&pert.vector));
    let svg = plot::render(&plot::PlotData { title, feasible: p.constraints(), rows: &rows, cone_panel }, &view);
    match out {
        Some(path) => {
            std::fs::write(path, &svg).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
            Ok((String::new(), 0))
        }
        None => Ok((svg, 0)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { problem, point, form, out } => run_check(problem, point, *form, out.output),
        Command::Analyze { problem, grid_step, budget, out } => run_analyze(problem, grid_step, *budget, out.output),
        Command::Verify { seed, budget, out } => run_verify(*seed, *budget, out.output),
        Command::Examples { out } => run_examples(out.output),
        Command::Plot { problem, point, viewport, grid_step, out } => {
            run_plot(problem, point.as_deref(), viewport, grid_step, out.as_ref())
        }
    };
    match result {
        Ok((text, status)) => {
            print!("{text}");
            ExitCode::from(status)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
