//! `equirobust`: exact equilibrium analysis of finite normal-form games.
//!
//! Games come from JSON files or the built-in example registry; analyses
//! are selected with `--run` and reported both as human-readable text and,
//! with `--json`, as a machine-readable report file. All numbers are exact
//! rationals in `p/q` form.
//!
//! Exit codes: 0 success, 1 input error, 2 analysis precondition failure.

use clap::{Args, Parser, Subcommand};
use equirobust_core::rational::{format_rational, parse_rational, Rational};
use equirobust_core::{ce, dual, equilibrium, nash, registry, robustness, zerosum};
use equirobust_core::{Game, MixedProfile};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "equirobust", version, about = "Exact equilibrium analysis for finite games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in example games and their parameters.
    Examples {
        /// Write the listing as JSON to this path ("-" for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Load a game and run one or more analyses on it.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Name of a built-in example game.
    #[arg(long, conflicts_with = "file")]
    example: Option<String>,
    /// Path of a game JSON file.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Example parameter, e.g. `--param eps=1/10`. Repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Analysis to run: ce-unique | ce-vertices | nash | symmetric-nash |
    /// quasi-strict | dual-reduce | hs-aux | zerosum | probe-unique-ce |
    /// probe-count | probe-unique-strict | probe-symmetric-unique.
    /// Repeatable.
    #[arg(long = "run", value_name = "ANALYSIS", required = true)]
    runs: Vec<String>,
    /// Write the full report as JSON to this path ("-" for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Seed for perturbation sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Perturbation radius as an exact rational.
    #[arg(long, default_value = "1/100")]
    delta: String,
    /// Number of perturbation samples.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Perturbations are multiples of 1/GRID.
    #[arg(long, default_value_t = 100)]
    grid: u64,
    /// Counter for probe-count: nash | extreme-ce | symmetric-nash.
    #[arg(long)]
    counter: Option<String>,
    /// Mixed profile to verify, per player `;`-separated, per strategy
    /// `,`-separated: e.g. `1/2,1/2;1,0`.
    #[arg(long)]
    profile: Option<String>,
}

/// Report envelope: the command echo, a content hash of the input game,
/// and one result object per analysis. Round-trips losslessly through
/// serde_json.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct Report {
    command: String,
    fingerprint: String,
    results: Map<String, Value>,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Analysis(String),
}

impl CliError {
    fn input<E: std::fmt::Display>(e: E) -> Self {
        CliError::Input(e.to_string())
    }

    fn analysis<E: std::fmt::Display>(e: E) -> Self {
        CliError::Analysis(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("input error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Analysis(msg)) => {
            eprintln!("analysis error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Examples { json } => cmd_examples(json),
        Command::Analyze(args) => cmd_analyze(args),
    }
}

fn cmd_examples(json_path: Option<PathBuf>) -> Result<(), CliError> {
    let mut listing = Vec::new();
    for info in registry::list_examples() {
        let params = match info.param {
            Some((name, default)) => json!([{ "name": name, "default": default }]),
            None => json!([]),
        };
        listing.push(json!({
            "name": info.name,
            "params": params,
            "interesting_params": info.interesting_params,
            "description": info.description,
        }));
        let param_sig = match info.param {
            Some((name, default)) => format!("({name}={default})"),
            None => String::new(),
        };
        println!("{}{}  {}", info.name, param_sig, info.description);
    }
    let mut results = Map::new();
    results.insert("examples".into(), Value::Array(listing));
    let report = Report {
        command: "examples".into(),
        fingerprint: fnv1a64(b""),
        results,
    };
    write_json(&report, json_path)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let game = load_game(&args)?;
    let fingerprint = fnv1a64(game.to_json_string().as_bytes());
    let mut results = Map::new();
    for name in &args.runs {
        let value = run_analysis(name, &game, &args)?;
        print_human(name, &value);
        results.insert(name.clone(), value);
    }
    let report = Report {
        command: command_echo(&args),
        fingerprint,
        results,
    };
    write_json(&report, args.json)
}

fn command_echo(args: &AnalyzeArgs) -> String {
    let mut parts = vec!["analyze".to_string()];
    if let Some(e) = &args.example {
        parts.push(format!("--example {e}"));
    }
    if let Some(f) = &args.file {
        parts.push(format!("--file {}", f.display()));
    }
    for p in &args.params {
        parts.push(format!("--param {p}"));
    }
    for r in &args.runs {
        parts.push(format!("--run {r}"));
    }
    parts.join(" ")
}

fn load_game(args: &AnalyzeArgs) -> Result<Game, CliError> {
    match (&args.example, &args.file) {
        (Some(name), None) => {
            let mut params: BTreeMap<String, Rational> = BTreeMap::new();
            for p in &args.params {
                let (k, v) = p
                    .split_once('=')
                    .ok_or_else(|| CliError::Input(format!("bad --param {p:?}, expected NAME=VALUE")))?;
                let value = parse_rational(v).map_err(CliError::input)?;
                params.insert(k.trim().to_string(), value);
            }
            registry::build_example(name, &params).map_err(CliError::input)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            Game::from_json_str(&text).map_err(CliError::input)
        }
        _ => Err(CliError::Input(
            "exactly one of --example or --file is required".into(),
        )),
    }
}

fn run_analysis(name: &str, game: &Game, args: &AnalyzeArgs) -> Result<Value, CliError> {
    match name {
        "ce-unique" => ce_unique(game),
        "ce-vertices" => ce_vertices(game),
        "nash" => nash_analysis(game),
        "symmetric-nash" => symmetric_nash(game),
        "quasi-strict" => quasi_strict(game, args),
        "dual-reduce" => dual_reduce(game),
        "hs-aux" => hs_aux(game),
        "zerosum" => zerosum_analysis(game),
        "probe-unique-ce" => {
            let spec = spec_from(args)?;
            let report = robustness::probe_unique_ce(game, &spec).map_err(CliError::analysis)?;
            serde_json::to_value(report).map_err(CliError::analysis)
        }
        "probe-count" => {
            let spec = spec_from(args)?;
            let counter = match args.counter.as_deref() {
                Some("nash") => robustness::Counter::Nash,
                Some("extreme-ce") => robustness::Counter::ExtremeCe,
                Some("symmetric-nash") => robustness::Counter::SymmetricNash,
                Some(other) => {
                    return Err(CliError::Input(format!("unknown counter {other:?}")))
                }
                None => return Err(CliError::Input("probe-count requires --counter".into())),
            };
            let report =
                robustness::probe_count(game, &spec, counter).map_err(CliError::analysis)?;
            serde_json::to_value(report).map_err(CliError::analysis)
        }
        "probe-unique-strict" => {
            let spec = spec_from(args)?;
            let report =
                robustness::probe_unique_strict(game, &spec).map_err(CliError::analysis)?;
            serde_json::to_value(report).map_err(CliError::analysis)
        }
        "probe-symmetric-unique" => {
            let spec = spec_from(args)?;
            let sym = nash::SymmetricGame::new(game.clone()).map_err(CliError::analysis)?;
            let report =
                robustness::probe_symmetric_unique(&sym, &spec).map_err(CliError::analysis)?;
            serde_json::to_value(report).map_err(CliError::analysis)
        }
        other => Err(CliError::Input(format!("unknown analysis {other:?}"))),
    }
}

fn spec_from(args: &AnalyzeArgs) -> Result<robustness::PerturbationSpec, CliError> {
    let radius = parse_rational(&args.delta).map_err(CliError::input)?;
    Ok(robustness::PerturbationSpec::random(
        radius,
        args.samples,
        args.seed,
        args.grid,
    ))
}

fn rvec(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(format_rational(r))).collect())
}

fn profile_value(p: &MixedProfile) -> Value {
    Value::Array((0..p.num_players()).map(|i| rvec(p.strategy(i))).collect())
}

fn ce_unique(game: &Game) -> Result<Value, CliError> {
    let (unique, mu) = ce::is_ce_unique(game).map_err(CliError::analysis)?;
    Ok(match mu {
        Some(mu) => {
            let binding = ce::binding_constraints(game, &mu).map_err(CliError::analysis)?;
            json!({
                "unique": unique,
                "ce": rvec(mu.probs()),
                "support": mu.support_profiles().into_iter().collect::<Vec<_>>(),
                "binding": binding.labels,
            })
        }
        None => json!({ "unique": unique, "ce": Value::Null }),
    })
}

fn ce_vertices(game: &Game) -> Result<Value, CliError> {
    let poly = ce::build_ce_polytope(game);
    let verts = poly.vertices().map_err(CliError::analysis)?;
    Ok(json!({
        "count": verts.len(),
        "vertices": verts.iter().map(|v| rvec(v)).collect::<Vec<_>>(),
    }))
}

fn nash_analysis(game: &Game) -> Result<Value, CliError> {
    if game.num_players() == 2 {
        let report = nash::enumerate_nash_bimatrix(game).map_err(CliError::analysis)?;
        Ok(json!({
            "kind": "bimatrix",
            "count": report.equilibria.len(),
            "equilibria": report.equilibria.iter().map(profile_value).collect::<Vec<_>>(),
            "degenerate": report.degenerate,
            "complete": report.complete,
        }))
    } else if game.strategy_counts() == [2, 2, 2] {
        let analysis = nash::analyze_2x2x2(game).map_err(CliError::analysis)?;
        Ok(cube_value(&analysis))
    } else {
        let pure = nash::enumerate_pure_nash(game).map_err(CliError::analysis)?;
        Ok(json!({
            "kind": "pure-only",
            "count": pure.len(),
            "equilibria": pure.iter().map(|p| json!(p.0)).collect::<Vec<_>>(),
            "complete": false,
        }))
    }
}

fn cube_value(analysis: &nash::CubeAnalysis) -> Value {
    let components: Vec<Value> = analysis
        .components
        .iter()
        .map(|c| match c {
            nash::Component::FullCube => json!({ "kind": "full-cube" }),
            nash::Component::Interval {
                player,
                prob_second,
                others,
            } => json!({
                "kind": "interval",
                "player": player,
                "prob_second_min": format_rational(&prob_second.0),
                "prob_second_max": format_rational(&prob_second.1),
                "others": others,
            }),
        })
        .collect();
    let quad = &analysis.quadratic;
    json!({
        "kind": "2x2x2",
        "count": analysis.report.equilibria.len(),
        "equilibria": analysis.report.equilibria.iter().map(profile_value).collect::<Vec<_>>(),
        "components": components,
        "degenerate": analysis.report.degenerate,
        "complete": analysis.report.complete,
        "unique": analysis.unique,
        "quadratic": quad.quadratic.as_ref().map(|q| rvec(&q[..])),
        "quadratic_status": format!("{:?}", quad.status),
        "certified_intervals": quad
            .certified
            .iter()
            .map(|(lo, hi)| json!([format_rational(lo), format_rational(hi)]))
            .collect::<Vec<_>>(),
    })
}

fn symmetric_nash(game: &Game) -> Result<Value, CliError> {
    let sym = nash::SymmetricGame::new(game.clone()).map_err(CliError::analysis)?;
    let eqs = nash::enumerate_symmetric_nash(&sym).map_err(CliError::analysis)?;
    Ok(json!({
        "count": eqs.len(),
        "equilibria": eqs.iter().map(|e| rvec(e.strategy(0))).collect::<Vec<_>>(),
    }))
}

fn quasi_strict(game: &Game, args: &AnalyzeArgs) -> Result<Value, CliError> {
    if let Some(text) = &args.profile {
        let profile = parse_profile(game, text)?;
        let is_nash = equilibrium::is_nash(game, &profile).map_err(CliError::analysis)?;
        let quasi = equilibrium::is_quasi_strict(game, &profile).map_err(CliError::analysis)?;
        let strict = equilibrium::is_strict(game, &profile).map_err(CliError::analysis)?;
        return Ok(json!({
            "profile": profile_value(&profile),
            "nash": is_nash,
            "quasi_strict": quasi,
            "strict": strict,
        }));
    }
    // no profile given: classify every enumerated equilibrium
    let equilibria: Vec<MixedProfile> = if game.num_players() == 2 {
        nash::enumerate_nash_bimatrix(game)
            .map_err(CliError::analysis)?
            .equilibria
    } else if game.strategy_counts() == [2, 2, 2] {
        nash::analyze_2x2x2(game)
            .map_err(CliError::analysis)?
            .report
            .equilibria
    } else {
        return Err(CliError::Analysis(
            "quasi-strict without --profile needs a bimatrix or 2x2x2 game".into(),
        ));
    };
    let mut items = Vec::new();
    for e in &equilibria {
        items.push(json!({
            "profile": profile_value(e),
            "quasi_strict": equilibrium::is_quasi_strict(game, e).map_err(CliError::analysis)?,
            "strict": equilibrium::is_strict(game, e).map_err(CliError::analysis)?,
        }));
    }
    Ok(json!({ "equilibria": items }))
}

fn parse_profile(game: &Game, text: &str) -> Result<MixedProfile, CliError> {
    let strategies: Vec<Vec<Rational>> = text
        .split(';')
        .map(|per_player| {
            per_player
                .split(',')
                .map(|s| parse_rational(s).map_err(CliError::input))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let profile = MixedProfile::new(strategies).map_err(CliError::input)?;
    profile.matches(game).map_err(CliError::input)?;
    Ok(profile)
}

fn dual_reduce(game: &Game) -> Result<Value, CliError> {
    let (alpha, slacks) = dual::find_strong_dual_vector(game).map_err(CliError::analysis)?;
    let reduced = dual::reduce_game(game, &alpha).map_err(CliError::analysis)?;
    let max_probs = ce::max_profile_probabilities(game).map_err(CliError::analysis)?;
    let zero_profiles: Vec<usize> = max_probs
        .iter()
        .enumerate()
        .filter(|(_, p)| p == &&Rational::from_integer(0.into()))
        .map(|(f, _)| f)
        .collect();
    let claim = match ce::is_ce_unique(game).map_err(CliError::analysis)? {
        (true, Some(_)) => Some(dual::check_claim_invariance(game).map_err(CliError::analysis)?),
        _ => None,
    };
    let transitions: Vec<Value> = alpha
        .transitions()
        .iter()
        .map(|t| Value::Array(t.iter().map(|row| rvec(row)).collect()))
        .collect();
    let classes: Vec<Value> = reduced
        .classes
        .iter()
        .map(|per_player| {
            Value::Array(
                per_player
                    .iter()
                    .map(|(class, stationary)| {
                        json!({ "class": class, "stationary": rvec(stationary) })
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(json!({
        "dual_vector": transitions,
        "slacks": rvec(slacks.slacks()),
        "strict_slack_profiles": slacks.strict_profiles(),
        "zero_probability_profiles": zero_profiles,
        "reduced_strategy_counts": reduced.game.strategy_counts(),
        "reduced_classes": classes,
        "reduced_game": reduced.game.to_json(),
        "claim_invariance": claim,
    }))
}

fn hs_aux(game: &Game) -> Result<Value, CliError> {
    let aux = zerosum::build_auxiliary_game(game);
    let value = aux.value().map_err(CliError::analysis)?;
    let equal = zerosum::maximizer_optimal_equals_ce(game).map_err(CliError::analysis)?;
    let columns: Vec<Value> = aux
        .col_triples
        .iter()
        .map(|(i, a, b)| json!([i, a, b]))
        .collect();
    let row_labels: Vec<Value> = aux.row_profiles.iter().map(|p| json!(p.0)).collect();
    Ok(json!({
        "rows": aux.matrix.rows(),
        "cols": aux.matrix.cols(),
        "value": format_rational(&value),
        "maximizer_optimal_equals_ce": equal,
        "matrix": aux.matrix.to_json(),
        "row_labels": row_labels,
        "columns": columns,
    }))
}

fn zerosum_analysis(game: &Game) -> Result<Value, CliError> {
    if game.num_players() != 2 || !game.is_zero_sum() {
        return Err(CliError::Analysis(
            "zerosum analysis requires a two-player zero-sum game".into(),
        ));
    }
    let m = zerosum::MatrixGame::new(game.matrix_of(0)).map_err(CliError::analysis)?;
    let sol = zerosum::solve_zero_sum(&m).map_err(CliError::analysis)?;
    let row_verts = zerosum::optimal_strategy_vertices(&m, zerosum::Side::Row)
        .map_err(CliError::analysis)?;
    let col_verts = zerosum::optimal_strategy_vertices(&m, zerosum::Side::Column)
        .map_err(CliError::analysis)?;
    Ok(json!({
        "value": format_rational(&sol.value),
        "row_strategy": rvec(&sol.row_strategy),
        "col_strategy": rvec(&sol.col_strategy),
        "row_face_dimension": sol.row_face_dimension,
        "col_face_dimension": sol.col_face_dimension,
        "row_optimal_vertices": row_verts.iter().map(|v| rvec(v)).collect::<Vec<_>>(),
        "col_optimal_vertices": col_verts.iter().map(|v| rvec(v)).collect::<Vec<_>>(),
    }))
}

fn print_human(name: &str, value: &Value) {
    println!("== {name} ==");
    match name {
        "ce-unique" => {
            let unique = value["unique"].as_bool().unwrap_or(false);
            if unique {
                println!("unique correlated equilibrium: {}", value["ce"]);
            } else {
                println!("correlated equilibrium is not unique");
            }
        }
        "ce-vertices" => println!("extreme correlated equilibria: {}", value["count"]),
        "nash" | "symmetric-nash" => {
            println!(
                "equilibria: {}{}",
                value["count"],
                if value["degenerate"].as_bool() == Some(true) {
                    " (degenerate: extreme points of components listed)"
                } else {
                    ""
                }
            );
            if let Some(items) = value["equilibria"].as_array() {
                for e in items {
                    println!("  {e}");
                }
            }
            if let Some(components) = value["components"].as_array() {
                for c in components {
                    println!("  component: {c}");
                }
            }
        }
        "zerosum" => {
            println!(
                "value {} | optimal-face dimensions: row {} column {}",
                value["value"], value["row_face_dimension"], value["col_face_dimension"]
            );
        }
        "hs-aux" => {
            println!(
                "auxiliary game {}x{} value {} | maximizer-optimal set equals CE set: {}",
                value["rows"], value["cols"], value["value"], value["maximizer_optimal_equals_ce"]
            );
        }
        _ if name.starts_with("probe-") => {
            println!(
                "samples {} | persistence {} | witnesses {}",
                value["sample_count"],
                value["persistence_fraction"],
                value["witnesses"].as_array().map_or(0, Vec::len)
            );
        }
        _ => println!("{value}"),
    }
}

fn write_json(report: &Report, path: Option<PathBuf>) -> Result<(), CliError> {
    let Some(path) = path else { return Ok(()) };
    let text = serde_json::to_string_pretty(report).map_err(CliError::analysis)?;
    if path.as_os_str() == "-" {
        println!("{text}");
        Ok(())
    } else {
        std::fs::write(&path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
    }
}

fn fnv1a64(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fingerprint_is_stable() {
        assert_eq!(fnv1a64(b""), "cbf29ce484222325");
        assert_eq!(fnv1a64(b"a"), fnv1a64(b"a"));
        assert_ne!(fnv1a64(b"a"), fnv1a64(b"b"));
    }

    #[test]
    fn report_roundtrip() {
        let mut results = Map::new();
        results.insert("x".into(), json!({"a": ["1/2", "1/2"]}));
        let report = Report {
            command: "analyze --example matching-pennies --run nash".into(),
            fingerprint: "00".into(),
            results,
        };
        let text = serde_json::to_string(&report).unwrap();
        let parsed: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn profile_parsing() {
        let g = registry::matching_pennies();
        let p = parse_profile(&g, "1/2,1/2;1,0").unwrap();
        assert_eq!(p.strategy(1)[0], Rational::from_integer(1.into()));
        assert!(parse_profile(&g, "1/2,1/3;1,0").is_err());
        assert!(parse_profile(&g, "1/2,1/2").is_err());
    }
}
