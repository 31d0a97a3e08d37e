//! Command-line front end: every operation with file-based inputs and
//! machine-readable JSON output on stdout.
//!
//! Exit codes: 0 = success / verdict pass, 1 = verdict fail (a claim,
//! audit, bound, or snake check did not hold), 2 = usage or precondition
//! error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use percube::construction::{self, SnakeSource};
use percube::dsl;
use percube::engine;
use percube::extremal;
use percube::hypercube::{Dimension, WordSet};
use percube::snake::{self, SearchMode};
use percube::Error;

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "percube", version, about = "Bootstrap percolation on the hypercube")]
struct Cli {
    /// Cap on worker threads for parallel sweeps (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct LetBindings {
    /// Integer binding for the expression language, as name=value. Repeatable.
    #[arg(long = "let", value_name = "NAME=INT")]
    lets: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a subcube expression and print one vertex per line.
    Eval {
        expr: String,
        /// Shorthand for `--let d=N`.
        #[arg(long)]
        d: Option<i64>,
        #[command(flatten)]
        lets: LetBindings,
    },
    /// Run the r-neighbour process from a vertex-set file.
    Run {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u32,
        /// Vertex-set file with the initial infected sites.
        #[arg(long)]
        initial: PathBuf,
        /// Include per-vertex infection times in the report.
        #[arg(long)]
        times: bool,
        #[arg(long)]
        allow_large: bool,
    },
    /// Test whether a set is stable (one round infects nothing).
    Stable {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        initial: PathBuf,
        #[arg(long)]
        allow_large: bool,
    },
    /// Longest-snake search with symmetry breaking.
    SnakeSearch {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: u32,
        /// Explore the whole canonical tree (guarded for large d).
        #[arg(long, conflicts_with = "node_limit")]
        exhaustive: bool,
        /// Budgeted search: stop after this many extension attempts.
        #[arg(long)]
        node_limit: Option<u64>,
        /// Write the snake file here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        allow_large: bool,
    },
    /// Verify a snake file.
    SnakeVerify {
        snake: PathBuf,
    },
    /// Full witness pipeline: build, audit, check both claims, report time.
    Construct {
        #[arg(long)]
        d: u32,
        /// exhaustive | budget:<node_limit> | file:<path>
        #[arg(long, default_value = "exhaustive")]
        snake_mode: String,
        /// Directory for part files and the optional trajectory CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the round-by-round trajectory (needs --out).
        #[arg(long)]
        trajectory: bool,
        #[arg(long)]
        allow_large: bool,
    },
    /// Exhaustive maximal percolation time over all subsets.
    BruteMaxTime {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        allow_large: bool,
    },
    /// Check a time against the (4r+2)·2^d/d upper bound.
    CheckBound {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        t: u64,
    },
    /// Monte Carlo percolation-time statistics.
    McTime {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the time histogram as CSV here.
        #[arg(long)]
        hist_csv: Option<PathBuf>,
        #[arg(long)]
        allow_large: bool,
    },
    /// Double a configuration into one higher dimension ([*]A).
    Double {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        initial: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pad a 3-neighbour configuration for an r-neighbour run.
    PadR {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        initial: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_lets(lets: &LetBindings) -> Result<Vec<(String, i64)>, Error> {
    lets.lets
        .iter()
        .map(|s| {
            let (name, value) = s.split_once('=').ok_or_else(|| {
                Error::Precondition(format!("binding {s:?} is not of the form name=int"))
            })?;
            let value = value
                .parse::<i64>()
                .map_err(|e| Error::Precondition(format!("binding {s:?}: {e}")))?;
            Ok((name.to_string(), value))
        })
        .collect()
}

fn parse_snake_mode(s: &str) -> Result<SnakeSource, Error> {
    if s == "exhaustive" {
        return Ok(SnakeSource::Search(SearchMode::Exhaustive));
    }
    if let Some(limit) = s.strip_prefix("budget:") {
        let node_limit = limit
            .parse::<u64>()
            .map_err(|e| Error::Precondition(format!("bad node limit {limit:?}: {e}")))?;
        return Ok(SnakeSource::Search(SearchMode::Budget { node_limit }));
    }
    if let Some(path) = s.strip_prefix("file:") {
        return Ok(SnakeSource::File(PathBuf::from(path)));
    }
    Err(Error::Precondition(format!(
        "snake mode {s:?} is not exhaustive, budget:<n>, or file:<path>"
    )))
}

/// Verdict-style subcommands return Ok(false) for a failed verdict.
fn dispatch(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Eval { expr, d, lets } => {
            let mut env = dsl::Env::new();
            if let Some(d) = d {
                env.bind_int("d", *d);
            }
            for (name, value) in parse_lets(lets)? {
                env.bind_int(name, value);
            }
            let set = dsl::eval_str(expr, &env)?;
            for v in set.vertices() {
                println!("{v}");
            }
            Ok(true)
        }
        Command::Run {
            d,
            r,
            initial,
            times,
            allow_large,
        } => {
            let d = Dimension::new(*d)?;
            let initial_set = WordSet::from_file(initial, Some(d.get()))?;
            let out = engine::run(d, *r, &initial_set, *allow_large)?;
            let mut report = out.to_report(*times);
            report["config"] = json!({
                "subcommand": "run", "d": d.get(), "r": r,
                "initial": initial.display().to_string(), "allow_large": allow_large,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(true)
        }
        Command::Stable {
            d,
            r,
            initial,
            allow_large,
        } => {
            let d = Dimension::new(*d)?;
            let initial_set = WordSet::from_file(initial, Some(d.get()))?;
            let stable = engine::is_stable(d, *r, &initial_set, *allow_large)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "config": {"subcommand": "stable", "d": d.get(), "r": r,
                               "initial": initial.display().to_string()},
                    "stable": stable,
                }))?
            );
            Ok(true)
        }
        Command::SnakeSearch {
            d,
            k,
            exhaustive,
            node_limit,
            out,
            allow_large,
        } => {
            let d = Dimension::new(*d)?;
            let mode = match (exhaustive, node_limit) {
                (_, Some(limit)) => SearchMode::Budget { node_limit: *limit },
                (true, None) => SearchMode::Exhaustive,
                (false, None) => {
                    return Err(Error::Precondition(
                        "pass --exhaustive or --node-limit <n>".into(),
                    ))
                }
            };
            let res = snake::search_longest(d, *k, mode, *allow_large)?;
            if let Some(path) = out {
                res.snake.write_file(path)?;
            }
            let reference = (d.get() >= 3).then(|| snake::reference_lower_bound(d).unwrap());
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "config": {"subcommand": "snake-search", "d": d.get(), "k": k,
                               "mode": format!("{mode:?}"), "allow_large": allow_large},
                    "length": res.snake.length(),
                    "exhaustive": res.exhaustive,
                    "nodes": res.nodes,
                    "reference_lower_bound_log2": reference,
                    "sites": res.snake.vertices().map(|v| v.to_string()).collect::<Vec<_>>(),
                }))?
            );
            Ok(true)
        }
        Command::SnakeVerify { snake: path } => {
            let text = std::fs::read_to_string(path)?;
            // Parse the header and sites without the constructor's built-in
            // verification, then report the verdict.
            let mut lines = text.lines();
            let header = lines
                .next()
                .ok_or_else(|| Error::Snake("missing snake file header".into()))?;
            let k: u32 = header
                .split_whitespace()
                .find_map(|f| f.strip_prefix("k="))
                .ok_or_else(|| Error::Snake("header missing k=".into()))?
                .parse()
                .map_err(|e| Error::Snake(format!("bad k: {e}")))?;
            let mut sites = Vec::new();
            for line in lines {
                let line = line.split('#').next().unwrap_or("").trim();
                if !line.is_empty() {
                    sites.push(percube::hypercube::Vertex::parse_text(line)?);
                }
            }
            let verdict = snake::verify(&sites, k)?;
            let pass = verdict.is_ok();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "config": {"subcommand": "snake-verify", "snake": path.display().to_string()},
                    "ok": pass,
                    "violation": verdict.err().map(|v| v.to_string()),
                }))?
            );
            Ok(pass)
        }
        Command::Construct {
            d,
            snake_mode,
            out,
            trajectory,
            allow_large,
        } => run_construct(*d, snake_mode, out.as_deref(), *trajectory, *allow_large),
        Command::BruteMaxTime { d, r, allow_large } => {
            let d = Dimension::new(*d)?;
            let res = extremal::brute_force_max_time(d, *r, *allow_large)?;
            let mut report = res.to_report();
            report["config"] = json!({"subcommand": "brute-max-time", "d": d.get(), "r": r});
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(true)
        }
        Command::CheckBound { d, r, t } => {
            let d = Dimension::new(*d)?;
            let holds = extremal::check_upper_bound(d, *r, *t)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "config": {"subcommand": "check-bound", "d": d.get(), "r": r, "t": t},
                    "holds": holds,
                }))?
            );
            Ok(holds)
        }
        Command::McTime {
            d,
            r,
            p,
            samples,
            seed,
            hist_csv,
            allow_large,
        } => {
            let d = Dimension::new(*d)?;
            let stats = extremal::mc_percolation_time(d, *r, *p, *samples, *seed, *allow_large)?;
            if let Some(path) = hist_csv {
                std::fs::write(path, stats.histogram_csv())?;
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "config": {"subcommand": "mc-time", "d": d.get(), "r": r, "p": p,
                               "samples": samples, "seed": seed},
                    "stats": stats,
                }))?
            );
            Ok(true)
        }
        Command::Double { d, initial, out } => {
            let set = WordSet::from_file(initial, Some(*d))?;
            let doubled = construction::double_config(&set)?;
            if let Some(path) = out {
                doubled.write_file(path)?;
            } else {
                print!("{}", doubled.to_lines());
            }
            Ok(true)
        }
        Command::PadR {
            d,
            r,
            initial,
            out,
        } => {
            let set = WordSet::from_file(initial, Some(*d))?;
            let padded = construction::pad_for_r(&set, *r)?;
            if let Some(path) = out {
                padded.write_file(path)?;
            } else {
                print!("{}", padded.to_lines());
            }
            Ok(true)
        }
    }
}

fn run_construct(
    d: u32,
    snake_mode: &str,
    out_dir: Option<&std::path::Path>,
    trajectory: bool,
    allow_large: bool,
) -> Result<bool, Error> {
    let d = Dimension::new(d)?;
    let source = parse_snake_mode(snake_mode)?;
    let res = construction::lower_bound_witness(d, &source, allow_large)?;
    let audit = construction::audit_structure(&res.parts);
    let claim1 = construction::verify_claim1(&res.parts, allow_large)?;
    let claim2 = construction::verify_claim2(&res.parts, allow_large)?;
    let pass = audit.all_pass() && claim1.pass && claim2.percolated && res.meets_bound();

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        res.parts.snake.write_file(&dir.join("snake.txt"))?;
        let seed_set =
            WordSet::from_vertices(d.get(), [res.parts.seed]).expect("seed dimension");
        seed_set.write_file(&dir.join("seed.txt"))?;
        res.parts.i0.write_file(&dir.join("i0.txt"))?;
        res.parts.j1.write_file(&dir.join("j1.txt"))?;
        res.parts.j2.write_file(&dir.join("j2.txt"))?;
        res.parts.j3.write_file(&dir.join("j3.txt"))?;
        res.parts.initial_set().write_file(&dir.join("initial.txt"))?;
        if trajectory {
            let mut csv = String::from("round,newly_infected_count,new_vertices\n");
            let mut state = engine::InfectionState::init(
                d,
                3,
                &res.parts.initial_set(),
                allow_large,
            )?;
            loop {
                let newly = state.step();
                if newly.is_empty() {
                    break;
                }
                let verts: Vec<String> = newly.vertices().map(|v| v.to_string()).collect();
                csv.push_str(&format!(
                    "{},{},{}\n",
                    state.clock(),
                    newly.len(),
                    verts.join(" ")
                ));
            }
            std::fs::write(dir.join("trajectory.csv"), csv)?;
        }
    } else if trajectory {
        return Err(Error::Precondition("--trajectory needs --out <dir>".into()));
    }

    let report = json!({
        "config": {"subcommand": "construct", "d": d.get(), "snake_mode": snake_mode,
                   "allow_large": allow_large},
        "d": d.get(),
        "T": res.parts.snake.length(),
        "snake_exhaustive": res.snake_exhaustive,
        "sizes": {
            "i0": res.parts.i0.len(),
            "j1": res.parts.j1.len(),
            "j2": res.parts.j2.len(),
            "j3": res.parts.j3.len(),
            "initial": res.parts.initial_set().len(),
        },
        "audit": audit,
        "claim1": if claim1.pass { "pass" } else { "fail" },
        "claim1_detail": claim1,
        "claim2": if claim2.percolated { "pass" } else { "fail" },
        "claim2_total_time": claim2.total_time,
        "total_time": res.outcome.total_time,
        "meets_lower_bound": res.meets_bound(),
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // Best effort: the global pool can only be set once.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
