use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use massey_lab::cache::Cache;
use massey_lab::cochain::{cup_form, Cohomology};
use massey_lab::config::{OutputFormat, RunConfig};
use massey_lab::embedding::{lift_policies, lift_solvers, unitri_solvers, ProblemFile, UnitriHom};
use massey_lab::error::Error;
use massey_lab::group::{
    fixture_names, load_group, lookup_fixture, parse_group_spec, write_group_spec, FiniteGroup,
};
use massey_lab::massey::{for_each_tuple, lift_problem, massey_strategies, MasseyQuery, QueryFile};
use massey_lab::report::{Record, Report, Verdict};
use massey_lab::search::Budget;
use massey_lab::unitri::{UniTriMatrix, UnitriQuotient};
use massey_lab::verification::{verify_suites, Scope, SuiteContext};

#[derive(Parser, Debug)]
#[command(
    name = "massey-lab",
    version,
    about = "Massey products and unitriangular embedding problems over Z/p"
)]
struct Cli {
    /// Search nodes allowed per checked item.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: u64,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// `text` or `records` (line-delimited JSON).
    #[arg(long, global = true, default_value = "text")]
    format: String,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Cache directory; defaults to $MASSEY_LAB_CACHE.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    group: Option<String>,
    #[arg(long, global = true)]
    p: Option<u8>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true, default_value = "layered")]
    unitri_solver: String,
    #[arg(long, global = true, default_value = "fiber")]
    lift_solver: String,
    /// Append wall-clock time to the report (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Built-in groups and group spec files.
    Group {
        #[command(subcommand)]
        action: GroupAction,
    },
    /// dim H^1, dim H^2, the cup form and the Demushkin verdict.
    Cohomology,
    /// Massey products for the classes in a query file.
    Massey {
        file: PathBuf,
        #[arg(long, default_value = "hom-lift")]
        strategy: String,
    },
    /// Run a verification suite.
    Verify { suite: String },
    /// Solve the embedding problem in a problem file.
    Solve { file: PathBuf },
    /// Order and superdiagonal of a unitriangular matrix literal.
    Matrix { literal: String },
    /// Registered suites, strategies, solvers and lift policies.
    List,
}

#[derive(Subcommand, Debug)]
enum GroupAction {
    List,
    Show { group: Option<String> },
    Check { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let command: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let config = match config(&cli) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    match run(&cli, &config) {
        Ok(records) => {
            let mut report = Report::new(command, records);
            if cli.timing {
                report.timing_ms = Some(start.elapsed().as_millis() as u64);
            }
            let out = match config.format {
                OutputFormat::Text => report.to_text(),
                OutputFormat::Records => report.to_records(),
            };
            print!("{out}");
            if let Some(first) = report
                .records
                .iter()
                .find(|r| matches!(r.verdict, Verdict::Fails { .. }))
            {
                if config.format == OutputFormat::Text {
                    eprintln!("first failure: {} {}", first.suite, first.item);
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::BudgetExceeded { .. } => ExitCode::from(2),
        _ => ExitCode::from(3),
    }
}

fn config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut c = RunConfig {
        budget: cli.budget,
        jobs: cli.jobs,
        format: cli.format.parse()?,
        seed: cli.seed,
        no_cache: cli.no_cache,
        unitri_solver: cli.unitri_solver.clone(),
        lift_solver: cli.lift_solver.clone(),
        ..RunConfig::default()
    };
    if cli.cache_dir.is_some() {
        c.cache_dir = cli.cache_dir.clone();
    }
    c.validate()?;
    Ok(c)
}

fn run(cli: &Cli, config: &RunConfig) -> Result<Vec<Record>, Error> {
    match &cli.command {
        Command::Group { action } => group(action, cli),
        Command::Cohomology => cohomology(cli, config),
        Command::Massey { file, strategy } => massey(file, strategy, config),
        Command::Verify { suite } => {
            let scope = Scope {
                group: cli.group.clone(),
                p: cli.p,
                n: cli.n,
            };
            let suites = verify_suites();
            let suite = suites.get(suite)?;
            suite.run(&SuiteContext::new(config.clone(), scope))
        }
        Command::Solve { file } => solve(file, config),
        Command::Matrix { literal } => matrix(literal),
        Command::List => Ok(list()),
    }
}

fn group_details(g: &FiniteGroup) -> serde_json::Value {
    json!({
        "order": g.order(),
        "abelian": g.is_abelian(),
        "generators": g.generators(),
        "order_profile": g.order_profile(),
    })
}

fn group(action: &GroupAction, cli: &Cli) -> Result<Vec<Record>, Error> {
    match action {
        GroupAction::List => fixture_names()
            .into_iter()
            .map(|name| {
                let g = lookup_fixture(name)?;
                Ok(Record::new(
                    "group",
                    name,
                    Verdict::Holds,
                    group_details(&g),
                ))
            })
            .collect(),
        GroupAction::Show { group } => {
            let name = group
                .as_deref()
                .or(cli.group.as_deref())
                .ok_or_else(|| Error::BadParameter("no group given".into()))?;
            let g = load_group(name, None)?;
            let mut details = group_details(&g);
            details["spec"] = json!(write_group_spec(&g));
            Ok(vec![Record::new("group", name, Verdict::Holds, details)])
        }
        GroupAction::Check { file } => {
            let text = std::fs::read_to_string(file)?;
            let item = file.display().to_string();
            match parse_group_spec(&text) {
                Ok(g) => Ok(vec![Record::new(
                    "group",
                    item,
                    Verdict::Holds,
                    group_details(&g),
                )]),
                Err(e @ Error::Parse { .. }) => Err(e),
                Err(e) => Ok(vec![Record::new(
                    "group",
                    item,
                    Verdict::fails(e.to_string()),
                    (),
                )]),
            }
        }
    }
}

fn cohomology(cli: &Cli, config: &RunConfig) -> Result<Vec<Record>, Error> {
    let name = cli
        .group
        .as_deref()
        .ok_or_else(|| Error::BadParameter("--group is required".into()))?;
    let p = cli
        .p
        .ok_or_else(|| Error::BadParameter("--p is required".into()))?;
    let g = Arc::new(load_group(name, None)?);
    let cache = Cache::from_dir(config.cache_dir());
    let key = Cache::key(&g.fingerprint(), p, "cohomology");
    let details: serde_json::Value = cache.get_or_compute(&key, || {
        let coh = Cohomology::compute(g.clone(), p)?;
        let form = cup_form(&coh).ok();
        let nondegenerate = form.as_ref().map(|f| f.is_nondegenerate());
        Ok(json!({
            "dim_h1": coh.h1_dim(),
            "dim_h2": coh.h2_dim(),
            "cup_form": form.map(|f| f.gram),
            "demushkin": nondegenerate == Some(true),
        }))
    })?;
    Ok(vec![Record::new(
        "cohomology",
        format!("{name} p={p}"),
        Verdict::Holds,
        details,
    )])
}

fn lift_literals(f: &UnitriHom) -> Vec<String> {
    f.generator_images()
        .iter()
        .map(UniTriMatrix::to_literal)
        .collect()
}

fn massey(file: &Path, strategy: &str, config: &RunConfig) -> Result<Vec<Record>, Error> {
    let query = QueryFile::load(file)?;
    let coh = query.cohomology(file.parent())?;
    let strategies = massey_strategies();
    let strategy = strategies.get(strategy)?;
    let unitri = unitri_solvers();
    let solver = unitri.get(&config.unitri_solver)?;
    let mut queries = Vec::new();
    match query.query(&coh)? {
        Some(q) => queries.push(q),
        None => {
            for_each_tuple(&coh, query.n, &mut |q| {
                queries.push(q);
                Ok(std::ops::ControlFlow::Continue(()))
            })?;
        }
    }
    queries
        .iter()
        .map(|q: &MasseyQuery| {
            let item = format!("{:?}", q.coords());
            let mut budget = Budget::new(config.budget);
            let set = match strategy.product_set(q, &mut budget) {
                Ok(s) => s,
                Err(e) => match Verdict::from_error(&e) {
                    Some(v) => return Ok(Record::new("massey", item, v, ())),
                    None => return Err(e),
                },
            };
            let e = lift_problem(q, UnitriQuotient::full(q.n() + 1, q.modulus())?)?;
            let witness = match solver.solve(&e, &mut budget) {
                Ok(f) => f.map(|f| lift_literals(&f)),
                Err(Error::BudgetExceeded { .. }) => None,
                Err(e) => return Err(e),
            };
            let details = json!({
                "tuple": q.coords(),
                "defined": set.is_defined(),
                "vanishes": set.vanishes(),
                "values": set.values,
                "witness_lift": witness,
            });
            Ok(Record::new("massey", item, Verdict::Holds, details))
        })
        .collect()
}

fn solve(file: &Path, config: &RunConfig) -> Result<Vec<Record>, Error> {
    let pf = ProblemFile::load(file)?;
    let problem = pf.problem(file.parent())?;
    let solvers = lift_solvers();
    let solver = solvers.get(&config.lift_solver)?;
    let mut budget = Budget::new(config.budget);
    let item = file.display().to_string();
    let record = match solver.solve(&problem, &mut budget) {
        Ok(Some(f)) => Record::new(
            "solve",
            item,
            Verdict::Holds,
            json!({"witness": f.generator_images(), "nodes": budget.used(), "real": problem.is_real().is_ok()}),
        ),
        Ok(None) => Record::new(
            "solve",
            item,
            Verdict::fails(json!({"exhausted_nodes": budget.used()})),
            json!({"real": problem.is_real().is_ok()}),
        ),
        Err(e) => match Verdict::from_error(&e) {
            Some(v) => Record::new("solve", item, v, ()),
            None => return Err(e),
        },
    };
    Ok(vec![record])
}

fn matrix(literal: &str) -> Result<Vec<Record>, Error> {
    let m = UniTriMatrix::parse_literal(literal)?;
    Ok(vec![Record::new(
        "matrix",
        m.to_literal(),
        Verdict::Holds,
        json!({"order": m.order(), "superdiagonal": m.superdiagonal()}),
    )])
}

fn list() -> Vec<Record> {
    fn entry(kind: &str, name: &str, describe: &str) -> Record {
        Record::new(
            "list",
            format!("{kind} {name}"),
            Verdict::Holds,
            json!({"describe": describe}),
        )
    }
    let mut out = Vec::new();
    out.extend(
        verify_suites()
            .iter()
            .map(|s| entry("suite", s.name(), s.describe())),
    );
    out.extend(
        massey_strategies()
            .iter()
            .map(|s| entry("strategy", s.name(), s.describe())),
    );
    out.extend(
        lift_solvers()
            .iter()
            .map(|s| entry("lift-solver", s.name(), s.describe())),
    );
    out.extend(
        unitri_solvers()
            .iter()
            .map(|s| entry("unitri-solver", s.name(), s.describe())),
    );
    out.extend(
        lift_policies()
            .iter()
            .map(|s| entry("lift-policy", s.name(), s.describe())),
    );
    out
}
