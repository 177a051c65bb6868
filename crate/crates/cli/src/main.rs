use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use linea_core::arrangements::{
    defining_ideal, named, random_generic, staircase, LineArrangement, NamedId, Provenance,
};
use linea_core::betti::graded_betti;
use linea_core::exactnum::{reciprocal_series, BigInt};
use linea_core::hilbert::{hh_series, profile_closed_form, profile_gb, profile_linalg, regularity_alpha};
use linea_core::ideal_ops::Ideal;
use linea_core::koszul::{
    classification_grid, classify, construct_filtration_thm43, five_p6_filtration, five_p6_specializations,
    hilbert_claims_check, verify_filtration, Filtration, Verdict,
};
use linea_core::Error;

#[derive(Parser)]
#[command(name = "linea", version, about = "Exact algebra for coordinate rings of line arrangements")]
struct Cli {
    /// Seed for random arrangements and parameter draws.
    #[arg(long, global = true, env = "LINEA_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads for independent cells and steps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an arrangement (or its defining ideal) as JSON.
    Arrangement(ArrangementArgs),
    /// Hilbert function values and series.
    Hilbert(HilbertArgs),
    /// Graded Betti table of S/J.
    Betti(BettiArgs),
    /// Koszul verdict for m generic lines in P^n.
    Classify(Size),
    /// First negative coefficient of 1/H(-t).
    Froberg(FrobergArgs),
    /// Koszul filtrations: verify, construct, check intermediate series.
    #[command(subcommand)]
    Filtration(FiltrationCommand),
    /// Classification grid.
    Table(TableArgs),
}

#[derive(Args, Clone)]
struct Size {
    #[arg(long)]
    lines: u64,
    #[arg(long)]
    dim: u64,
}

/// Where an ideal comes from: a file, a named configuration, or seeded
/// generic lines.
#[derive(Args)]
struct Source {
    /// Ideal JSON file.
    #[arg(long, conflicts_with_all = ["arrangement", "named", "lines"])]
    ideal: Option<String>,
    /// Arrangement JSON file.
    #[arg(long, conflicts_with_all = ["named", "lines"])]
    arrangement: Option<String>,
    /// Bundled configuration: three_p4, four_p3_special, five_p6, five_p6(a,b).
    #[arg(long, conflicts_with = "lines")]
    named: Option<String>,
    /// Number of seeded generic lines.
    #[arg(long, requires = "dim")]
    lines: Option<u64>,
    /// Ambient dimension for --lines.
    #[arg(long, requires = "lines")]
    dim: Option<u64>,
}

#[derive(Args)]
struct ArrangementArgs {
    #[command(flatten)]
    source: Source,
    /// Use the coordinate staircase layout instead of random lines.
    #[arg(long, requires = "lines")]
    staircase: bool,
    #[arg(long, value_enum, default_value_t = Emit::Arrangement)]
    emit: Emit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Arrangement,
    Ideal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Formula,
    Gb,
    Linalg,
}

#[derive(Args)]
struct HilbertArgs {
    #[command(flatten)]
    source: Source,
    /// Defaults to `formula` for --lines/--dim and `gb` otherwise.
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long, default_value_t = 5)]
    max_deg: u32,
    /// Fraction-free elimination instead of modular ranks.
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct BettiArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    imax: Option<usize>,
    #[arg(long)]
    jmax: Option<u32>,
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct FrobergArgs {
    #[command(flatten)]
    size: Size,
    #[arg(long, default_value_t = 20)]
    terms: usize,
}

#[derive(Subcommand)]
enum FiltrationCommand {
    /// Check every step of a filtration against an arrangement.
    Verify(VerifyArgs),
    /// Emit the constructed filtration (or its arrangement) for m lines in P^n.
    Construct(ConstructArgs),
    /// Compare the intermediate Hilbert series of the construction.
    Claims(Size),
}

#[derive(Args)]
struct VerifyArgs {
    /// Arrangement JSON file or bundled id.
    #[arg(long)]
    arrangement: String,
    /// Filtration JSON file; defaults to the bundled one for five_p6.
    #[arg(long)]
    filtration: Option<String>,
    /// Parameter specializations for templates with parameters.
    #[arg(long, default_value_t = 3)]
    seeds: usize,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    size: Size,
    #[arg(long, value_enum, default_value_t = ConstructEmit::Filtration)]
    emit: ConstructEmit,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructEmit {
    Filtration,
    Arrangement,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    max_lines: u64,
    #[arg(long)]
    max_dim: u64,
}

/// Failures, split by exit code.
enum Failure {
    Input(String),
    Computation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Genericity(_) | Error::Truncated(_) | Error::ZeroDivisor => Failure::Computation(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn read_json(path: &str) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read `{path}`: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("`{path}` is not valid JSON: {e}")))
}

fn render(value: &Value) -> String {
    serde_json::to_string(value).expect("serializable")
}

fn load_arrangement(spec: &str) -> Result<LineArrangement, Failure> {
    if Path::new(spec).is_file() {
        return Ok(LineArrangement::from_json(&read_json(spec)?)?);
    }
    match NamedId::parse(spec) {
        Ok(id) => Ok(named(&id)?),
        Err(_) => Err(Failure::Input(format!("`{spec}` is neither a readable file nor a bundled id"))),
    }
}

fn source_arrangement(source: &Source, seed: u64, stair: bool) -> Result<Option<LineArrangement>, Failure> {
    if let Some(path) = &source.arrangement {
        return Ok(Some(LineArrangement::from_json(&read_json(path)?)?));
    }
    if let Some(id) = &source.named {
        return Ok(Some(named(&NamedId::parse(id)?)?));
    }
    if let (Some(m), Some(n)) = (source.lines, source.dim) {
        let a = if stair {
            staircase(m as usize, n as usize)?
        } else {
            random_generic(m as usize, n as usize, seed)?
        };
        return Ok(Some(a));
    }
    Ok(None)
}

fn source_ideal(source: &Source, seed: u64) -> Result<Ideal, Failure> {
    if let Some(path) = &source.ideal {
        return Ok(Ideal::from_json(&read_json(path)?)?);
    }
    match source_arrangement(source, seed, false)? {
        Some(a) => Ok(defining_ideal(&a)?),
        None => Err(Failure::Input(
            "no input: give --ideal, --arrangement, --named or --lines/--dim".into(),
        )),
    }
}

fn arrangement_cmd(args: &ArrangementArgs, seed: u64) -> Outcome {
    if args.source.ideal.is_some() {
        return Err(Failure::Input("`--ideal` is not an arrangement source".into()));
    }
    let a = source_arrangement(&args.source, seed, args.staircase)?
        .ok_or_else(|| Failure::Input("no input: give --arrangement, --named or --lines/--dim".into()))?;
    let value = match args.emit {
        Emit::Arrangement => a.to_json(),
        Emit::Ideal => defining_ideal(&a)?.to_json(),
    };
    Ok((serde_json::to_string_pretty(&value).expect("serializable"), true))
}

fn hilbert_cmd(args: &HilbertArgs, seed: u64, pretty: bool) -> Outcome {
    let method = args.method.unwrap_or(if args.source.lines.is_some() { Method::Formula } else { Method::Gb });
    let profile = match method {
        Method::Formula => {
            let (Some(m), Some(n)) = (args.source.lines, args.source.dim) else {
                return Err(Failure::Input("`--method formula` needs --lines and --dim".into()));
            };
            profile_closed_form(m, n, args.max_deg)?
        }
        Method::Gb => profile_gb(&source_ideal(&args.source, seed)?, args.max_deg),
        Method::Linalg => profile_linalg(&source_ideal(&args.source, seed)?, args.max_deg, args.exact)?,
    };
    let out = if pretty {
        let vals: Vec<String> = profile.values.iter().map(|v| v.to_string()).collect();
        match &profile.series {
            Some(s) => format!("values: {}\nseries: {s}", vals.join(" ")),
            None => format!("values: {}", vals.join(" ")),
        }
    } else {
        render(&profile.to_json())
    };
    Ok((out, true))
}

fn betti_cmd(args: &BettiArgs, seed: u64, pretty: bool) -> Outcome {
    let ideal = source_ideal(&args.source, seed)?;
    let (imax_default, jmax_default) = match (args.source.lines, args.source.dim) {
        (Some(m), Some(n)) => (n as usize + 1, (n + regularity_alpha(m, n)? + 2) as u32),
        _ => (ideal.nvars(), ideal.nvars() as u32 + 3),
    };
    let table = graded_betti(
        &ideal,
        args.imax.unwrap_or(imax_default),
        args.jmax.unwrap_or(jmax_default),
        args.exact,
    )?;
    let out = if pretty {
        let mut s = table.render();
        if table.truncated() {
            s.push_str("(truncated: raise --imax/--jmax)\n");
        }
        s.trim_end().to_string()
    } else {
        let mut v = table.to_json();
        v["layout"] = Value::String(table.render());
        render(&v)
    };
    Ok((out, true))
}

fn classify_cmd(size: &Size, pretty: bool) -> Outcome {
    let c = classify(size.lines, size.dim)?;
    let out = if pretty {
        match c.reason {
            Some(r) => format!("{:?} ({r})", c.verdict),
            None => format!("{:?}", c.verdict),
        }
    } else {
        render(&c.to_json())
    };
    Ok((out, true))
}

fn number(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => Value::String(v.to_string()),
    }
}

fn froberg_cmd(args: &FrobergArgs, pretty: bool) -> Outcome {
    let (m, n) = (args.size.lines, args.size.dim);
    let h = hh_series(m, n)?;
    let seq = reciprocal_series(&h, args.terms)?;
    let first = seq.first_negative();
    let out = if pretty {
        match first {
            Some(i) => format!("1/H(-t) for m={m}, n={n}: first negative coefficient at t^{i}"),
            None => format!("1/H(-t) for m={m}, n={n}: no negative coefficient through t^{}", args.terms),
        }
    } else {
        render(&json!({
            "m": m,
            "n": n,
            "terms": args.terms,
            "first_negative": first,
            "coefficients": seq.as_slice().iter().map(number).collect::<Vec<_>>(),
        }))
    };
    Ok((out, true))
}

/// Pairs each arrangement to check with its filtration.
fn verify_jobs(args: &VerifyArgs, seed: u64) -> Result<Vec<(Value, LineArrangement, Filtration)>, Failure> {
    let template = match &args.filtration {
        Some(path) => Some(read_json(path)?),
        None => None,
    };
    let params = match &template {
        Some(t) => Filtration::template_params(t)?,
        None => vec!["a".into(), "b".into()],
    };
    let five = args.arrangement.trim().starts_with("five_p6") && !Path::new(&args.arrangement).is_file();
    if params.is_empty() {
        let a = load_arrangement(&args.arrangement)?;
        let f = Filtration::from_json(template.as_ref().expect("params come from a file"), a.n(), &Default::default())?;
        return Ok(vec![(Value::Null, a, f)]);
    }
    if !five || params != ["a", "b"] {
        return Err(Failure::Input(format!(
            "filtration parameters [{}] need the `five_p6` arrangement, got `{}`",
            params.join(", "),
            args.arrangement
        )));
    }
    let fixed = match NamedId::parse(&args.arrangement)? {
        NamedId::FiveP6 { a, b } if args.arrangement.contains('(') => Some((a, b)),
        _ => None,
    };
    let specs = match fixed {
        Some(p) => vec![p],
        None => five_p6_specializations(args.seeds.max(1), seed),
    };
    specs
        .into_iter()
        .map(|(a, b)| {
            let arr = named(&NamedId::FiveP6 { a: a.clone(), b: b.clone() })?;
            let f = match &template {
                Some(t) => {
                    let map = [("a".to_string(), a.clone()), ("b".to_string(), b.clone())].into_iter().collect();
                    Filtration::from_json(t, 6, &map)?
                }
                None => five_p6_filtration(&a, &b)?,
            };
            let label = match arr.provenance() {
                Provenance::Named { params, .. } => json!({"a": params[0], "b": params[1]}),
                _ => Value::Null,
            };
            Ok((label, arr, f))
        })
        .collect()
}

fn verify_cmd(args: &VerifyArgs, seed: u64, pretty: bool) -> Outcome {
    let jobs = verify_jobs(args, seed)?;
    let mut runs = Vec::new();
    let mut lines = Vec::new();
    let mut all = true;
    for (label, arr, f) in jobs {
        let j = defining_ideal(&arr)?;
        let report = verify_filtration(&j, &f)?;
        all &= report.accepted();
        if pretty {
            let at = if label.is_null() { String::new() } else { format!(" at a={}, b={}", label["a"].as_str().unwrap_or(""), label["b"].as_str().unwrap_or("")) };
            let verdict = if report.accepted() { "accepted" } else { "rejected" };
            lines.push(format!(
                "{} ideals verified, {} steps{at}: {verdict}",
                report.ideals,
                report.steps.len()
            ));
            lines.extend(report.failures.iter().map(|f| format!("  {f}")));
        }
        let mut v = report.to_json();
        if !label.is_null() {
            v["params"] = label;
        }
        runs.push(v);
    }
    let out = if pretty { lines.join("\n") } else { render(&json!({"accepted": all, "runs": runs})) };
    Ok((out, all))
}

fn construct_cmd(args: &ConstructArgs, seed: u64) -> Outcome {
    let c = construct_filtration_thm43(args.size.lines, args.size.dim, seed)?;
    let value = match args.emit {
        ConstructEmit::Filtration => c.filtration.to_json(),
        ConstructEmit::Arrangement => c.arrangement.to_json(),
    };
    Ok((serde_json::to_string_pretty(&value).expect("serializable"), true))
}

fn claims_cmd(size: &Size, seed: u64, pretty: bool) -> Outcome {
    let report = hilbert_claims_check(size.lines, size.dim, seed)?;
    let ok = report.all_match();
    let out = if pretty {
        let mut s = format!("m={}, n={} ({})", report.m, report.n, report.route);
        for c in &report.claims {
            let mark = if c.matches { "ok" } else { "MISMATCH" };
            s.push_str(&format!("\n  {mark:8} {}: expected {}, computed {}", c.name, c.expected, c.computed));
        }
        s
    } else {
        render(&json!({"all_match": ok, "report": report}))
    };
    Ok((out, ok))
}

fn table_cmd(args: &TableArgs, pretty: bool) -> Outcome {
    let grid = classification_grid(args.max_lines, args.max_dim)?;
    if !pretty {
        let cells: Vec<Value> = grid
            .iter()
            .map(|(m, n, c)| {
                let mut v = c.to_json();
                v["m"] = json!(m);
                v["n"] = json!(n);
                v
            })
            .collect();
        return Ok((render(&json!({"max_lines": args.max_lines, "max_dim": args.max_dim, "cells": cells})), true));
    }
    let mut out = String::from("m\\n");
    for n in 2..=args.max_dim {
        out.push_str(&format!("{n:>4}"));
    }
    for m in 1..=args.max_lines {
        out.push_str(&format!("\n{m:>3}"));
        for (_, _, c) in grid.iter().filter(|(mm, _, _)| *mm == m) {
            let mark = match c.verdict {
                Verdict::Koszul => "K",
                Verdict::NotKoszul => "N",
                Verdict::Unknown => "?",
            };
            out.push_str(&format!("{mark:>4}"));
        }
    }
    out.push_str("\nK Koszul, N not Koszul, ? unknown");
    Ok((out, true))
}

fn run(cli: &Cli) -> Outcome {
    let (seed, pretty) = (cli.seed, cli.pretty);
    match &cli.command {
        Command::Arrangement(a) => arrangement_cmd(a, seed),
        Command::Hilbert(a) => hilbert_cmd(a, seed, pretty),
        Command::Betti(a) => betti_cmd(a, seed, pretty),
        Command::Classify(s) => classify_cmd(s, pretty),
        Command::Froberg(a) => froberg_cmd(a, pretty),
        Command::Filtration(FiltrationCommand::Verify(a)) => verify_cmd(a, seed, pretty),
        Command::Filtration(FiltrationCommand::Construct(a)) => construct_cmd(a, seed),
        Command::Filtration(FiltrationCommand::Claims(s)) => claims_cmd(s, seed, pretty),
        Command::Table(a) => table_cmd(a, pretty),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.jobs {
        if k == 0 {
            eprintln!("error: `--jobs 0`: need at least one thread");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global().expect("pool is built once");
    }
    match run(&cli) {
        Ok((out, ok)) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
