use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cylinder::{build_closed_digraphs, build_cylinder, label_string, to_dot};
use formula_core::{brute_force_sat_with_cap, parse_dimacs, CnfFormula, Status, Valuation, Verdict};
use harness::{run_campaign, CampaignConfig, CampaignReport, HarnessError};
use linearize::linearize_traced;
use nested::{decide, decide_pivoted, lin_search, ClosedReport, Combine, DecideConfig, Decision, NestedDigraph};
use pivot_transform::{certify_equisat, complete, fixtures, parse_pcnf, to_pivoted, write_pcnf, PivotedFormula};
use serde::Serialize;
use serde_json::json;

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_ABORT: u8 = 2;
const EXIT_FAILURE: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Pivoted 3-SAT pipeline with oracle-backed differential checks.
#[derive(Debug, Parser)]
#[command(name = "pivsat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for campaigns (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest atom count the brute-force oracle attempts.
    #[arg(long, global = true)]
    oracle_cap: Option<u32>,
    /// Multiplier on the linearization rewrite budget.
    #[arg(long, global = true)]
    budget_scale: Option<f64>,
    /// Treat failures of the known-sound checks as errors (exit 3).
    #[arg(long, global = true)]
    strict: bool,
    /// Directory for DOT files written by `trace`.
    #[arg(long, global = true)]
    trace_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// How per-closed-digraph results combine: all or any.
    #[arg(long, global = true)]
    combine: Option<Combine>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide a DIMACS (or PCNF) formula with the pipeline.
    Solve { input: Option<PathBuf> },
    /// Decide a DIMACS formula with the brute-force oracle.
    Oracle { input: Option<PathBuf> },
    /// Print the pivoted form of a DIMACS formula as PCNF.
    Transform {
        input: Option<PathBuf>,
        /// Also certify equisatisfiability with the oracle.
        #[arg(long)]
        check: bool,
        /// Replace one-literal pairs before printing.
        #[arg(long)]
        complete: bool,
    },
    /// Write DOT files for every stage of the pipeline.
    Trace { input: Option<PathBuf> },
    /// Run a differential campaign.
    Fuzz {
        config: Option<PathBuf>,
        #[arg(long)]
        instances: Option<usize>,
        /// Also write the scoreboard as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the pipeline over a campaign's instances and print the bound scoreboard.
    Bench {
        config: Option<PathBuf>,
        #[arg(long)]
        instances: Option<usize>,
    },
    /// Run the hand-written fixtures and compare with their stated verdicts.
    Fixtures,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("io error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Harness(#[from] HarnessError),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Harness(HarnessError::Strict(_)) => EXIT_FAILURE,
            _ => EXIT_USAGE,
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            buf = fs::read(p).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })?;
        }
        _ => {
            io::stdin().read_to_end(&mut buf).map_err(|source| CliError::Io {
                path: "<stdin>".into(),
                source,
            })?;
        }
    }
    Ok(buf)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

enum Input {
    Cnf(CnfFormula),
    Pivoted(PivotedFormula),
}

fn parse_input(bytes: &[u8]) -> Result<Input, CliError> {
    let text = String::from_utf8_lossy(bytes);
    if text.lines().any(|l| l.trim_start().starts_with("p pcnf")) {
        return parse_pcnf(&text).map(Input::Pivoted).map_err(|e| CliError::Usage(format!("PCNF parse error: {e}")));
    }
    parse_dimacs(bytes).map(Input::Cnf).map_err(|e| CliError::Usage(format!("DIMACS parse error: {e}")))
}

fn read_cnf(path: &Option<PathBuf>) -> Result<CnfFormula, CliError> {
    parse_dimacs(&read_input(path)?).map_err(|e| CliError::Usage(format!("DIMACS parse error: {e}")))
}

fn decide_config(cli: &Cli) -> DecideConfig {
    let d = DecideConfig::default();
    DecideConfig {
        combine: cli.combine.unwrap_or(d.combine),
        budget_scale: cli.budget_scale.unwrap_or(d.budget_scale),
        witness: true,
    }
}

fn witness_dimacs(w: &Option<Valuation>) -> Option<Vec<i64>> {
    w.as_ref().map(|w| w.to_dimacs())
}

#[derive(Serialize)]
struct SolveReport<'a> {
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abort_reason: Option<&'a str>,
    counters: &'a formula_core::Counters,
    per_closed_digraph: &'a [ClosedReport],
    claim_checks: serde_json::Value,
}

fn print_verdict_text(v: &Verdict) {
    println!("s {}", v.status);
    if let Some(w) = &v.witness {
        let lits: Vec<String> = w.to_dimacs().iter().map(ToString::to_string).collect();
        println!("v {} 0", lits.join(" "));
    }
    if let Some(r) = &v.abort_reason {
        println!("c abort: {r}");
    }
    for (k, n) in v.counters.iter() {
        println!("c {k} = {n}");
    }
}

fn solve(cli: &Cli, input: &Option<PathBuf>) -> Result<u8, CliError> {
    let cfg = decide_config(cli);
    let (d, original): (Decision, Option<CnfFormula>) = match parse_input(&read_input(input)?)? {
        Input::Cnf(f) => (decide(&f, &cfg), Some(f)),
        Input::Pivoted(pf) => (decide_pivoted(&pf, &cfg), None),
    };
    let mut code = if d.verdict.status == Status::Abort { EXIT_ABORT } else { EXIT_OK };
    let mut checks = serde_json::Map::new();
    checks.insert("witness_failed".into(), json!(d.verdict.counters.get("decide.witness_failed") == 1));
    if cli.strict {
        if let Some(f) = &original {
            let cert = certify_equisat(f, &d.pivoted, 128);
            checks.insert("equisat".into(), json!(cert.agree));
            if !cert.agree {
                code = EXIT_FAILURE;
            }
        }
    }
    match cli.format {
        Format::Json => {
            let report = SolveReport {
                status: d.verdict.status,
                witness: witness_dimacs(&d.verdict.witness),
                abort_reason: d.verdict.abort_reason.as_deref(),
                counters: &d.verdict.counters,
                per_closed_digraph: &d.reports,
                claim_checks: serde_json::Value::Object(checks),
            };
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Format::Text => {
            print_verdict_text(&d.verdict);
            for r in &d.reports {
                println!(
                    "c closed {}: {} vertices, {} edges, {} columns, antichain {:?}",
                    r.nec, r.vertices, r.edges, r.columns, r.antichain
                );
            }
        }
    }
    Ok(code)
}

fn oracle(cli: &Cli, input: &Option<PathBuf>) -> Result<u8, CliError> {
    let f = read_cnf(input)?;
    let v = brute_force_sat_with_cap(&f, cli.oracle_cap.unwrap_or(formula_core::DEFAULT_ORACLE_CAP));
    match cli.format {
        Format::Json => println!("{}", v.to_json()),
        Format::Text => print_verdict_text(&v),
    }
    Ok(if v.status == Status::Abort { EXIT_ABORT } else { EXIT_OK })
}

fn transform(cli: &Cli, input: &Option<PathBuf>, check: bool, completed: bool) -> Result<u8, CliError> {
    let f = read_cnf(input)?;
    let mut pf = to_pivoted(&f);
    if completed {
        pf = complete(&pf);
    }
    let pcnf = write_pcnf(&pf);
    let cert = check.then(|| certify_equisat(&f, &pf, cli.oracle_cap.unwrap_or(128).max(pf.num_atoms())));
    match cli.format {
        Format::Json => {
            let mut out = json!({ "pcnf": pcnf });
            if let Some(c) = &cert {
                out["certificate"] = json!({
                    "original_status": c.original_status,
                    "pivoted_status": c.pivoted_status,
                    "agree": c.agree,
                    "abort_reason": c.abort_reason,
                });
            }
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
        Format::Text => {
            print!("{pcnf}");
            if let Some(c) = &cert {
                println!("c certificate original={} pivoted={} agree={}", c.original_status, c.pivoted_status, c.agree);
            }
        }
    }
    Ok(match cert {
        Some(c) if !c.agree && cli.strict => EXIT_FAILURE,
        _ => EXIT_OK,
    })
}

fn nested_dot(name: &str, d: &NestedDigraph, labels: &[cylinder::Label]) -> String {
    let vertex = |v: usize| {
        if v == d.root() {
            "root".to_string()
        } else {
            format!("e{v} {}", label_string(&labels[v]))
        }
    };
    let mut s = format!("digraph \"{name}\" {{\n");
    for (u, v, l) in d.edges() {
        let set: Vec<String> = l.ones().map(|x| format!("e{x}")).collect();
        let _ = writeln!(s, "  \"{}\" -> \"{}\" [label=\"{{{}}}\"];", vertex(u), vertex(v), set.join(","));
    }
    s.push_str("}\n");
    s
}

fn trace(cli: &Cli, input: &Option<PathBuf>) -> Result<u8, CliError> {
    let dir = cli
        .trace_dir
        .clone()
        .ok_or_else(|| CliError::Usage("trace needs --trace-dir".into()))?;
    fs::create_dir_all(&dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let pf = match parse_input(&read_input(input)?)? {
        Input::Cnf(f) => to_pivoted(&f),
        Input::Pivoted(pf) => pf,
    };
    let pf = complete(&pf);
    let scale = cli.budget_scale.unwrap_or(1.0);
    let mut files = Vec::new();
    let mut emit = |name: String, text: String| -> Result<(), CliError> {
        write_file(&dir.join(&name), &text)?;
        files.push(name);
        Ok(())
    };
    emit("00-pivoted.pcnf".into(), write_pcnf(&pf))?;
    let cyl = build_cylinder(&pf).expect("completed formula");
    emit("01-cylinder.dot".into(), to_dot("cylinder", &cyl))?;
    let mut aborted = false;
    for (i, closed) in build_closed_digraphs(&cyl).iter().enumerate() {
        let tag = closed.nec.map(|l| l.to_string()).unwrap_or_else(|| i.to_string());
        emit(format!("02-closed-{i}-{tag}.dot"), to_dot(&format!("closed {tag}"), &closed.graph))?;
        let lin = match linearize_traced(closed, pf.m(), scale, true) {
            Ok(lin) => lin,
            Err(e) => {
                log::warn!("closed digraph {tag}: {e}");
                aborted = true;
                continue;
            }
        };
        for (k, (step, g)) in lin.steps.iter().enumerate() {
            emit(format!("03-lin-{i}-{k:02}-{step}.dot"), to_dot(step, g))?;
        }
        let cols: Vec<Vec<cylinder::Label>> = lin.columns.iter().map(|c| c.labels.clone()).collect();
        match lin_search(&cols) {
            Ok(out) => {
                for (w, d) in &out.finals {
                    emit(format!("04-nested-{i}-e{w}.dot"), nested_dot(&format!("final e{w}"), d, &out.labels))?;
                }
            }
            Err(e) => {
                log::warn!("closed digraph {tag}: {e}");
                aborted = true;
            }
        }
    }
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&json!({ "dir": dir, "files": files })).expect("json")),
        Format::Text => {
            for f in &files {
                println!("{}", dir.join(f).display());
            }
        }
    }
    Ok(if aborted { EXIT_ABORT } else { EXIT_OK })
}

fn campaign_config(cli: &Cli, path: &Option<PathBuf>, instances: Option<usize>) -> Result<CampaignConfig, CliError> {
    let mut cfg = match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })?;
            CampaignConfig::parse(&text)?
        }
        None => CampaignConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(c) = cli.oracle_cap {
        cfg.oracle_cap = c;
    }
    if let Some(b) = cli.budget_scale {
        cfg.budget_scale = b;
    }
    if let Some(c) = cli.combine {
        cfg.combine = c;
    }
    if let Some(n) = instances {
        cfg.instances = n;
    }
    cfg.strict |= cli.strict;
    cfg.validate()?;
    Ok(cfg)
}

fn summary_text(r: &CampaignReport) {
    let t = &r.totals;
    println!(
        "instances {} agree {} mismatches {} aborts {} findings {} agreement-rate {:.4}",
        t.instances, t.agreements, t.mismatches, t.aborts, t.findings, r.agreement_rate
    );
    for row in &r.scoreboard {
        println!("claim {} pass {} fail {} untested {}", row.claim, row.pass, row.fail, row.untested);
    }
    for s in &r.suites {
        println!("suite {} cases {} failures {}", s.name, s.cases, s.failures);
    }
}

fn fuzz(cli: &Cli, config: &Option<PathBuf>, instances: Option<usize>, csv: &Option<PathBuf>) -> Result<u8, CliError> {
    let cfg = campaign_config(cli, config, instances)?;
    let report = run_campaign(&cfg)?;
    if let Some(path) = csv {
        write_file(path, &report.scoreboard_csv())?;
    }
    match cli.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => summary_text(&report),
    }
    let suite_failed = report.suites.iter().any(|s| s.strict && s.failures > 0);
    Ok(if cfg.strict && suite_failed { EXIT_FAILURE } else { EXIT_OK })
}

fn bench(cli: &Cli, config: &Option<PathBuf>, instances: Option<usize>) -> Result<u8, CliError> {
    let mut cfg = campaign_config(cli, config, instances)?;
    cfg.shrink = false;
    cfg.properties = false;
    cfg.suites = vec![harness::Suite::Differential];
    let report = run_campaign(&cfg)?;
    match cli.format {
        Format::Json => {
            let rows: Vec<_> = report.scoreboard.iter().filter(|r| is_bound(&r.claim)).collect();
            let out = json!({ "scoreboard": rows, "rows": report.bound_rows });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
        Format::Text => print!("{}", report.bound_rows_csv()),
    }
    Ok(EXIT_OK)
}

fn is_bound(claim: &str) -> bool {
    [harness::CLAIM_CYLINDER, harness::CLAIM_LIFTING, harness::CLAIM_FILTER].contains(&claim)
}

fn run_fixtures(cli: &Cli) -> Result<u8, CliError> {
    let cfg = decide_config(cli);
    let cap = cli.oracle_cap.unwrap_or(formula_core::DEFAULT_ORACLE_CAP);
    let mut rows = Vec::new();
    for (name, pf, expected) in [
        ("psi1", fixtures::psi1(), Status::Unsat),
        ("psi2", fixtures::psi2(), Status::Sat),
    ] {
        let oracle = brute_force_sat_with_cap(&pivot_transform::expand(&pf), cap).status;
        let pipeline = decide_pivoted(&pf, &cfg).verdict.status;
        let pass = oracle == expected && pipeline == expected;
        rows.push(json!({
            "fixture": name,
            "expected": expected,
            "oracle": oracle,
            "pipeline": pipeline,
            "result": if pass { "PASS" } else { "FAIL" },
        }));
    }
    let all = rows.iter().all(|r| r["result"] == "PASS");
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).expect("json")),
        Format::Text => {
            for r in &rows {
                println!(
                    "{} expected {} oracle {} pipeline {} {}",
                    r["fixture"].as_str().unwrap_or_default(),
                    r["expected"].as_str().unwrap_or_default(),
                    r["oracle"].as_str().unwrap_or_default(),
                    r["pipeline"].as_str().unwrap_or_default(),
                    r["result"].as_str().unwrap_or_default()
                );
            }
        }
    }
    Ok(if all { EXIT_OK } else { EXIT_FAILURE })
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Solve { input } => solve(cli, input),
        Command::Oracle { input } => oracle(cli, input),
        Command::Transform { input, check, complete } => transform(cli, input, *check, *complete),
        Command::Trace { input } => trace(cli, input),
        Command::Fuzz { config, instances, csv } => fuzz(cli, config, *instances, csv),
        Command::Bench { config, instances } => bench(cli, config, *instances),
        Command::Fixtures => run_fixtures(cli),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("pivsat: {e}");
            ExitCode::from(e.code())
        }
    }
}
