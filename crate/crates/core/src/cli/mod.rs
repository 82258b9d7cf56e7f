//! Command-line surface. Every command produces one [`OutputEnvelope`],
//! rendered either as a JSON object or as CSV with a header row.

pub mod envelope;
pub mod grid;

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::density::{self, ProbeStatus};
use crate::error::Error;
use crate::oracle;
use crate::rational::Rational;
use crate::sieve::{self, SieveConfig};
use crate::strategies::{approximate, ApproxQuery, Mode, ReturnPolicy};
use crate::worked_examples;
pub use envelope::{csv_line, OutputEnvelope, Status};

#[derive(Debug, Parser)]
#[command(
    name = "prime-ratio",
    version,
    about = "Approximate numbers in (0, 1) by (p - q) / (p + q) for primes p > q"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find primes p > q with |(p - q)/(p + q) - T| < EPS.
    Approximate(ApproximateArgs),
    /// Gap statistics of S_N over a window.
    Density(DensityArgs),
    /// Scan Bertrand's postulate and the pi(x) >= x / (2 ln x) bound.
    Checks(ChecksArgs),
    /// Re-derive the two worked example traces exactly.
    #[command(name = "verify-paper-examples", visible_alias = "verify-examples")]
    VerifyPaperExamples(OutputArgs),
    /// Measure search effort over a grid of targets and tolerances.
    Probe(ProbeArgs),
    /// Enumerate or count primes up to a limit.
    Primes(PrimesArgs),
    /// Print the oracle fixture table.
    OracleFixtures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Object,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "object")]
    pub format: Format,
    /// Add wall-clock timings to the telemetry (output is then not reproducible).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Targeted,
    Direct,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    First,
    Best,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = crate::strategies::DEFAULT_Q_START)]
    pub q_start: u64,
    #[arg(long, default_value_t = crate::strategies::DEFAULT_Q_CAP)]
    pub q_cap: u64,
    #[arg(long, default_value_t = crate::strategies::DEFAULT_DIRECT_N0)]
    pub n0: u64,
    #[arg(long, default_value_t = crate::strategies::DEFAULT_DIRECT_N_CAP)]
    pub n_cap: u64,
    #[arg(long, value_enum, default_value = "first")]
    pub policy: PolicyArg,
}

#[derive(Debug, Clone, Args)]
pub struct ApproximateArgs {
    /// Target in (0, 1): decimal, fraction or scientific notation.
    pub t: String,
    /// Tolerance > 0.
    pub eps: String,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    pub n: u64,
    /// Window [A, B] with 0 < A < B < 1.
    #[arg(long, num_args = 2, value_names = ["A", "B"], default_values = ["0.05", "0.95"])]
    pub window: Vec<String>,
    /// Largest N accepted.
    #[arg(long, default_value_t = density::DEFAULT_SN_CAP)]
    pub cap: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ChecksArgs {
    /// Check Bertrand's postulate for every n in [2, N].
    #[arg(long, default_value_t = 100_000)]
    pub bertrand: u64,
    /// Check pi(x) >= x / (2 ln x) for every x in [25, X].
    #[arg(long = "pi", default_value_t = 1_000_000)]
    pub pi: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ProbeArgs {
    /// Target grid, e.g. "0.1:0.9:0.1" or "1/3,0.5".
    pub t_grid: String,
    /// Tolerance grid, e.g. "1e-2,1e-3".
    pub eps_grid: String,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PrimesArgs {
    pub limit: u64,
    /// Emit every prime instead of just the count.
    #[arg(long)]
    pub list: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// What a command hands back before formatting.
struct Report {
    status: Status,
    parameters: Value,
    result: Value,
    telemetry: Value,
    message: Option<String>,
    table: Vec<Vec<String>>,
}

impl Report {
    fn ok(parameters: Value, result: Value, telemetry: Value, table: Vec<Vec<String>>) -> Self {
        Report {
            status: Status::Ok,
            parameters,
            result,
            telemetry,
            message: None,
            table,
        }
    }

    fn error(parameters: Value, e: &Error) -> Self {
        let msg = e.to_string();
        Report {
            status: Status::Error,
            parameters,
            result: Value::Null,
            telemetry: json!({}),
            table: vec![
                vec!["status".into(), "message".into()],
                vec!["error".into(), msg.clone()],
            ],
            message: Some(msg),
        }
    }
}

/// Rendered output and process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: Option<String>,
    pub exit_code: i32,
}

fn parse_arg(name: &str, s: &str) -> Result<Rational, Error> {
    s.parse()
        .map_err(|e: crate::rational::ParseRationalError| Error::Parse {
            arg: name.into(),
            input: s.into(),
            reason: e.0,
        })
}

fn exact(x: &Rational) -> Value {
    json!({ "exact": x.to_string(), "decimal": x.to_decimal() })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize to JSON")
}

fn search_params(s: &SearchArgs) -> Value {
    json!({
        "mode": format!("{:?}", s.mode).to_lowercase(),
        "q_start": s.q_start,
        "q_cap": s.q_cap,
        "n0": s.n0,
        "n_cap": s.n_cap,
        "policy": format!("{:?}", s.policy).to_lowercase(),
    })
}

fn template_query(
    s: &SearchArgs,
    t: Rational,
    eps: Rational,
    sieve: SieveConfig,
) -> Result<ApproxQuery, Error> {
    let q = ApproxQuery {
        t,
        epsilon: eps,
        mode: match s.mode {
            ModeArg::Targeted => Mode::Targeted,
            ModeArg::Direct => Mode::Direct,
            ModeArg::Auto => Mode::Auto,
        },
        q_start: s.q_start,
        q_cap: s.q_cap,
        direct_n0: s.n0,
        direct_n_cap: s.n_cap,
        return_policy: match s.policy {
            PolicyArg::First => ReturnPolicy::First,
            PolicyArg::Best => ReturnPolicy::BestWithinCap,
        },
        sieve,
    };
    q.validate()?;
    Ok(q)
}

fn cmd_approximate(a: &ApproximateArgs) -> Report {
    let mut params = json!({ "t": a.t, "eps": a.eps });
    params["search"] = search_params(&a.search);
    let run = || -> Result<Report, Error> {
        let t = parse_arg("t", &a.t)?;
        let eps = parse_arg("eps", &a.eps)?;
        let query = template_query(&a.search, t, eps, SieveConfig::from_env()?)?;
        let header = [
            "status",
            "p",
            "q",
            "value",
            "value_decimal",
            "error",
            "error_decimal",
            "strategy",
            "candidates_examined",
            "max_prime_touched",
        ];
        match approximate(&query) {
            Ok(r) => {
                let result = json!({
                    "p": r.pair.p(),
                    "q": r.pair.q(),
                    "value": exact(&r.value),
                    "error": exact(&r.error),
                    "strategy": r.strategy_used,
                });
                let telemetry = json!({
                    "candidates_examined": r.candidates_examined,
                    "max_prime_touched": r.max_prime_touched,
                });
                let row = vec![
                    "ok".into(),
                    r.pair.p().to_string(),
                    r.pair.q().to_string(),
                    r.value.to_string(),
                    r.value.to_decimal(),
                    r.error.to_string(),
                    r.error.to_decimal(),
                    r.strategy_used.to_string(),
                    r.candidates_examined.to_string(),
                    r.max_prime_touched.to_string(),
                ];
                Ok(Report::ok(
                    Value::Null,
                    result,
                    telemetry,
                    vec![header.map(String::from).to_vec(), row],
                ))
            }
            Err(Error::CapExceeded(c)) => {
                let best = c.best.as_ref().map(|b| {
                    json!({
                        "p": b.pair.p(),
                        "q": b.pair.q(),
                        "error": exact(&b.error),
                    })
                });
                let result = json!({ "best": best, "strategy": c.strategy_used });
                let telemetry = json!({
                    "candidates_examined": c.candidates_examined,
                    "max_prime_touched": c.max_prime_touched,
                });
                let (p, q, e, ed) = match &c.best {
                    Some(b) => (
                        b.pair.p().to_string(),
                        b.pair.q().to_string(),
                        b.error.to_string(),
                        b.error.to_decimal(),
                    ),
                    None => Default::default(),
                };
                let row = vec![
                    "cap_exceeded".into(),
                    p,
                    q,
                    String::new(),
                    String::new(),
                    e,
                    ed,
                    c.strategy_used.to_string(),
                    c.candidates_examined.to_string(),
                    c.max_prime_touched.to_string(),
                ];
                Ok(Report {
                    status: Status::CapExceeded,
                    parameters: Value::Null,
                    result,
                    telemetry,
                    message: Some(c.to_string()),
                    table: vec![header.map(String::from).to_vec(), row],
                })
            }
            Err(e) => Err(e),
        }
    };
    match run() {
        Ok(mut r) => {
            r.parameters = params;
            r
        }
        Err(e) => Report::error(params, &e),
    }
}

fn cmd_density(a: &DensityArgs) -> Report {
    let params = json!({ "n": a.n, "window": a.window, "cap": a.cap });
    let run = || -> Result<Report, Error> {
        let wa = parse_arg("window A", &a.window[0])?;
        let wb = parse_arg("window B", &a.window[1])?;
        let rep = density::density_report_with_cap(a.n, &wa, &wb, a.cap)?;
        let bound = format!("{:.12e}", rep.log_spacing_bound);
        let result = json!({
            "n": rep.n,
            "pair_count": rep.pair_count,
            "distinct_count": rep.distinct_count,
            "window": [rep.window_a.to_string(), rep.window_b.to_string()],
            "points_in_window": rep.points_in_window,
            "max_gap_in_window": exact(&rep.max_gap_in_window),
            "avg_spacing": exact(&rep.avg_spacing),
            "log_spacing_bound": bound,
        });
        let header = [
            "n",
            "pair_count",
            "distinct_count",
            "window_a",
            "window_b",
            "points_in_window",
            "max_gap",
            "max_gap_decimal",
            "avg_spacing",
            "avg_spacing_decimal",
            "log_spacing_bound",
        ];
        let row = vec![
            rep.n.to_string(),
            rep.pair_count.to_string(),
            rep.distinct_count.to_string(),
            rep.window_a.to_string(),
            rep.window_b.to_string(),
            rep.points_in_window.to_string(),
            rep.max_gap_in_window.to_string(),
            rep.max_gap_in_window.to_decimal(),
            rep.avg_spacing.to_string(),
            rep.avg_spacing.to_decimal(),
            bound,
        ];
        Ok(Report::ok(
            Value::Null,
            result,
            json!({}),
            vec![header.map(String::from).to_vec(), row],
        ))
    };
    match run() {
        Ok(mut r) => {
            r.parameters = params;
            r
        }
        Err(e) => Report::error(params, &e),
    }
}

fn cmd_checks(a: &ChecksArgs) -> Report {
    let params = json!({ "bertrand_n_max": a.bertrand, "pi_x_max": a.pi });
    let run = || -> Result<Report, Error> {
        let bertrand = sieve::bertrand_scan(a.bertrand)?;
        let pi = sieve::pi_lower_bound_scan(a.pi)?;
        let result = json!({
            "bertrand": { "range": [2, a.bertrand], "counterexample": bertrand },
            "pi_lower_bound": { "range": [25, a.pi], "first_failure": pi },
        });
        let cell = |v: Option<u64>| v.map_or(String::new(), |x| x.to_string());
        let table = vec![
            vec![
                "check".into(),
                "from".into(),
                "to".into(),
                "holds".into(),
                "counterexample".into(),
            ],
            vec![
                "bertrand".into(),
                "2".into(),
                a.bertrand.to_string(),
                bertrand.is_none().to_string(),
                cell(bertrand),
            ],
            vec![
                "pi_lower_bound".into(),
                "25".into(),
                a.pi.to_string(),
                pi.is_none().to_string(),
                cell(pi),
            ],
        ];
        let mut rep = Report::ok(Value::Null, result, json!({}), table);
        if bertrand.is_some() || pi.is_some() {
            rep.status = Status::Error;
            rep.message = Some("a counterexample was found".into());
        }
        Ok(rep)
    };
    match run() {
        Ok(mut r) => {
            r.parameters = params;
            r
        }
        Err(e) => Report::error(params, &e),
    }
}

fn cmd_verify() -> Report {
    let rep = worked_examples::verify_examples();
    let mut table = vec![[
        "example", "q", "p", "quantity", "exact", "printed", "derived", "verdict",
    ]
    .map(String::from)
    .to_vec()];
    let cell = |v: Option<u64>| v.map_or(String::new(), |x| x.to_string());
    for c in &rep.checks {
        let verdict = to_value(&c.verdict)
            .as_str()
            .unwrap_or_default()
            .to_string();
        table.push(vec![
            c.example.to_string(),
            cell(c.q),
            cell(c.p),
            c.quantity.clone(),
            c.exact.clone(),
            c.printed.clone(),
            c.derived.clone(),
            verdict,
        ]);
    }
    let mut out = Report::ok(
        json!({}),
        to_value(&rep),
        json!({ "checks": rep.checks.len() }),
        table,
    );
    if rep.mismatches > 0 {
        out.status = Status::Error;
        out.message = Some(format!(
            "{} printed values were not reproduced",
            rep.mismatches
        ));
    }
    out
}

fn cmd_probe(a: &ProbeArgs) -> Report {
    let mut params = json!({ "t_grid": a.t_grid, "eps_grid": a.eps_grid });
    params["search"] = search_params(&a.search);
    let run = || -> Result<Report, Error> {
        let parse = |name: &str, s: &str| {
            grid::parse_grid(s).map_err(|reason| Error::Parse {
                arg: name.into(),
                input: s.into(),
                reason,
            })
        };
        let ts = parse("t_grid", &a.t_grid)?;
        let es = parse("eps_grid", &a.eps_grid)?;
        let template = template_query(
            &a.search,
            Rational::frac(1, 2),
            Rational::frac(1, 2),
            SieveConfig::from_env()?,
        )?;
        let rows = density::complexity_probe_with(&ts, &es, &template)?;
        let trend = density::probe_trend(&rows);
        let (monotone, comparisons) = density::monotone_comparisons(&rows);
        let ok_rows = rows.iter().filter(|r| r.status == ProbeStatus::Ok).count();
        let mut table = vec![[
            "t",
            "epsilon",
            "status",
            "p",
            "q",
            "error",
            "max_prime_touched",
            "candidates_examined",
            "strategy",
        ]
        .map(String::from)
        .to_vec()];
        for r in &rows {
            table.push(vec![
                r.t.to_string(),
                r.epsilon.to_string(),
                to_value(&r.status).as_str().unwrap_or_default().to_string(),
                r.pair.map_or(String::new(), |p| p.p().to_string()),
                r.pair.map_or(String::new(), |p| p.q().to_string()),
                r.error.as_ref().map_or(String::new(), |e| e.to_string()),
                r.max_prime_touched.to_string(),
                r.candidates_examined.to_string(),
                r.strategy_used.to_string(),
            ]);
        }
        let result = json!({
            "rows": to_value(&rows),
            "trend": to_value(&trend),
            "monotone_comparisons": monotone,
            "comparisons": comparisons,
        });
        let telemetry = json!({ "rows": rows.len(), "ok_rows": ok_rows });
        let mut rep = Report::ok(Value::Null, result, telemetry, table);
        if ok_rows < rows.len() {
            rep.status = Status::CapExceeded;
            rep.message = Some(format!(
                "{} of {} runs exhausted their caps",
                rows.len() - ok_rows,
                rows.len()
            ));
        }
        Ok(rep)
    };
    match run() {
        Ok(mut r) => {
            r.parameters = params;
            r
        }
        Err(e) => Report::error(params, &e),
    }
}

fn cmd_primes(a: &PrimesArgs) -> Report {
    let params = json!({ "limit": a.limit, "list": a.list });
    let run = || -> Result<Report, Error> {
        let table = sieve::primes_up_to_with(a.limit, &SieveConfig::from_env()?)?;
        let largest = table.primes().last().copied();
        let mut result = json!({ "limit": a.limit, "count": table.len(), "largest": largest });
        let rows = if a.list {
            result["primes"] = to_value(&table.primes());
            let mut rows = vec![vec!["prime".to_string()]];
            rows.extend(table.primes().iter().map(|p| vec![p.to_string()]));
            rows
        } else {
            vec![
                vec!["limit".into(), "count".into(), "largest".into()],
                vec![
                    a.limit.to_string(),
                    table.len().to_string(),
                    largest.map_or(String::new(), |p| p.to_string()),
                ],
            ]
        };
        Ok(Report::ok(Value::Null, result, json!({}), rows))
    };
    match run() {
        Ok(mut r) => {
            r.parameters = params;
            r
        }
        Err(e) => Report::error(params, &e),
    }
}

fn render(command: &str, out: &OutputArgs, mut rep: Report, started: Instant) -> Outcome {
    if out.timings {
        let ms = started.elapsed().as_secs_f64() * 1e3;
        match rep.telemetry.as_object_mut() {
            Some(obj) => {
                obj.insert("elapsed_ms".into(), json!(ms));
            }
            None => rep.telemetry = json!({ "elapsed_ms": ms }),
        }
    }
    let stderr = rep.message.clone().filter(|_| rep.status != Status::Ok);
    let exit_code = rep.status.exit_code();
    let stdout = match out.format {
        Format::Object => OutputEnvelope {
            command: command.into(),
            version: crate::VERSION.into(),
            parameters: rep.parameters,
            status: rep.status,
            result: rep.result,
            telemetry: rep.telemetry,
            message: rep.message,
        }
        .to_json(),
        Format::Table => rep
            .table
            .iter()
            .map(|r| csv_line(r))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Outcome {
        stdout,
        stderr,
        exit_code,
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let started = Instant::now();
    match &cli.command {
        Command::Approximate(a) => render("approximate", &a.out, cmd_approximate(a), started),
        Command::Density(a) => render("density", &a.out, cmd_density(a), started),
        Command::Checks(a) => render("checks", &a.out, cmd_checks(a), started),
        Command::VerifyPaperExamples(o) => {
            render("verify-paper-examples", o, cmd_verify(), started)
        }
        Command::Probe(a) => render("probe", &a.out, cmd_probe(a), started),
        Command::Primes(a) => render("primes", &a.out, cmd_primes(a), started),
        Command::OracleFixtures => match oracle::fixture_table(&oracle::default_fixtures()) {
            Ok(s) => Outcome {
                stdout: s.trim_end().to_string(),
                stderr: None,
                exit_code: 0,
            },
            Err(e) => Outcome {
                stdout: String::new(),
                stderr: Some(e.to_string()),
                exit_code: 1,
            },
        },
    }
}

/// Parses `args` (including the program name) and runs. Argument errors
/// exit with 1; `--help` and `--version` exit with 0.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            if informational {
                Outcome {
                    stdout: text.trim_end().to_string(),
                    stderr: None,
                    exit_code: 0,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: Some(text.trim_end().to_string()),
                    exit_code: 1,
                }
            }
        }
    }
}
