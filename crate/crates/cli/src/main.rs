//! `nilrand` command-line front end. Every subcommand parses its inputs,
//! calls one library entry point and writes JSON or CSV to stdout.
//! Diagnostics go to stderr.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use nilrand::diophantine::{
    bounded_solve_group, compile_system, verify_correspondence, z_in_g_templates, Ambient,
    GroupSolver, GroupSystem, RingSystem, SolveOptions,
};
use nilrand::presentation::{classify, normalize, NilPresentation};
use nilrand::randwalk::{
    coordinate_clt_stats, csv_with_config, decay_slope, escape_probability, rank_experiment,
    return_probability_exact, schwartz_zippel_check, ExperimentConfig, DEFAULT_SZ_LIMIT,
};
use nilrand::words::parse_word;
use nilrand::{Error, MalcevElement};

#[derive(Parser)]
#[command(name = "nilrand", version, about = "Random nilpotent groups: presentations, experiments, equation compiler")]
struct Cli {
    /// Worker threads for parallel experiments (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output format where a command supports both.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Regime of a presentation file (header `m s`, one relator per line).
    Classify { file: PathBuf },
    /// Normalized relators, Smith form and Nielsen log.
    Normalize { file: PathBuf },
    /// Word problem in the class-2 image of the presented group.
    IsTrivial { file: PathBuf, word: String },
    /// Malcev coordinates of a word in the free 2-step nilpotent group.
    WordEval {
        word: String,
        /// Rank; defaults to the largest generator index in the word (at least 2).
        #[arg(short, long)]
        rank: Option<usize>,
    },
    /// Full-rank frequency of random exponent-sum matrices.
    RankExp {
        config: PathBuf,
        /// Overrides the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Per-coordinate CLT statistics of the simple random walk on ℤ^m.
    Clt {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Probability that an n-step walk leaves the ball of radius threshold.
    Escape {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Radius; defaults to √n.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Exact return probabilities p_n(0) + p_{n+1}(0) for n ≤ n-max.
    ReturnProb {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Log-log decay slope of return probabilities over even n.
    Slope {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 50)]
        n_lo: usize,
        #[arg(long, default_value_t = 200)]
        n_hi: usize,
    },
    /// Exhaustive Schwartz–Zippel check for the minor polynomial.
    SzCheck {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value_t = DEFAULT_SZ_LIMIT)]
        limit: u64,
    },
    /// Translates an integer equation system into a group equation system.
    Compile {
        ring: PathBuf,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// All solutions of a group system with coordinates in [−B, B].
    SolveBounded {
        system: PathBuf,
        #[arg(long = "box")]
        bound: i64,
        /// Solve in a quotient given by a presentation file instead of the free group.
        #[arg(long)]
        presentation: Option<PathBuf>,
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Checks that ring and compiled group solutions correspond on bounded boxes.
    Verify {
        ring: PathBuf,
        #[arg(long)]
        box_ring: i64,
        #[arg(long)]
        box_group: i64,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
}

/// Failure with the process exit code it maps to.
struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::InvalidSystem(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

fn usage(kind: &str, message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        kind: kind.to_string(),
        message: message.into(),
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| usage("io", format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> CliResult<Value> {
    serde_json::from_str(&read(path)?).map_err(|e| usage("json", format!("{}: {e}", path.display())))
}

fn read_presentation(path: &Path) -> CliResult<NilPresentation> {
    Ok(NilPresentation::parse(&read(path)?)?)
}

fn json_only(format: Option<Format>) -> CliResult<()> {
    match format {
        Some(Format::Csv) => Err(usage("format", "this command only produces JSON")),
        _ => Ok(()),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

/// CSV with a `# config:` line by default, or `{config, rows}` as JSON.
fn table<C: Serialize, S: Serialize>(format: Option<Format>, config: &C, rows: &[S]) -> String {
    match format {
        Some(Format::Json) => pretty(&json!({"config": config, "rows": rows})),
        _ => csv_with_config(config, rows),
    }
}

/// Largest `k` among the letters `a<k>` of a word.
fn infer_rank(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 2;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'a' {
            let digits: String = text[i + 1..].chars().take_while(char::is_ascii_digit).collect();
            if let Ok(k) = digits.parse::<usize>() {
                best = best.max(k);
            }
            i += 1 + digits.len();
        } else {
            i += 1;
        }
    }
    best
}

fn run(cli: Cli) -> CliResult<String> {
    let format = cli.format;
    match cli.command {
        Command::Classify { file } => {
            json_only(format)?;
            let report = classify(&normalize(&read_presentation(&file)?));
            eprintln!("regime: {}", report.regime);
            Ok(pretty(&serde_json::to_value(&report).expect("report serializes")))
        }
        Command::Normalize { file } => {
            json_only(format)?;
            Ok(pretty(&normalize(&read_presentation(&file)?).to_json()))
        }
        Command::IsTrivial { file, word } => {
            json_only(format)?;
            let np = normalize(&read_presentation(&file)?);
            let w = parse_word(&word, np.rank())?;
            let h = MalcevElement::from_word(&w);
            let trivial = np.is_trivial_in_G(&h)?;
            Ok(pretty(&json!({
                "word": word,
                "malcev": h.to_json(),
                "trivial": trivial,
            })))
        }
        Command::WordEval { word, rank } => {
            json_only(format)?;
            let m = rank.unwrap_or_else(|| infer_rank(&word));
            let w = parse_word(&word, m)?;
            let g = MalcevElement::from_word(&w);
            Ok(pretty(&json!({"rank": m, "word": word, "malcev": g.to_json()})))
        }
        Command::RankExp { config, seed } => {
            let mut raw = read_json(&config)?;
            if let Some(s) = seed {
                raw["seed"] = json!(s);
            }
            if raw.get("seed").is_none() {
                return Err(usage("seed", "a seed is required: set \"seed\" in the config or pass --seed"));
            }
            let cfg: ExperimentConfig = serde_json::from_value(raw)
                .map_err(|e| usage("json", format!("{}: {e}", config.display())))?;
            let rows = rank_experiment(&cfg)?;
            for r in &rows {
                eprintln!("length {:>6}: p_hat = {:.4} ± {:.4}", r.length, r.p_hat, r.stderr);
            }
            Ok(table(format, &cfg, &rows))
        }
        Command::Clt { m, n, trials, seed } => {
            let s = coordinate_clt_stats(m, n, trials, seed)?;
            let config = json!({"m": m, "n": n, "trials": trials, "seed": seed});
            Ok(table(format, &config, &s.coordinates))
        }
        Command::Escape {
            m,
            n,
            trials,
            seed,
            threshold,
        } => {
            let e = escape_probability(m, n, trials, seed, threshold)?;
            let config = json!({"m": m, "n": n, "trials": trials, "seed": seed, "threshold": e.threshold});
            Ok(table(format, &config, &[e]))
        }
        Command::ReturnProb { m, n_max } => {
            let t = return_probability_exact(m, n_max)?;
            Ok(table(format, &json!({"m": m, "n_max": n_max}), &t.rows))
        }
        Command::Slope { m, n_lo, n_hi } => {
            let fit = decay_slope(m, n_lo, n_hi)?;
            eprintln!("slope {:.4} (reference {:.1})", fit.slope, -(m as f64) / 2.0);
            Ok(table(format, &json!({"m": m, "n_lo": n_lo, "n_hi": n_hi}), &[fit]))
        }
        Command::SzCheck { r, m, b, limit } => {
            let rep = schwartz_zippel_check(r, m, b, limit)?;
            Ok(table(format, &json!({"r": r, "m": m, "b": b}), &[rep]))
        }
        Command::Compile { ring, rank } => {
            json_only(format)?;
            let sys = RingSystem::from_json(&read_json(&ring)?)?;
            if rank < 2 {
                return Err(Error::Precondition("the encoding needs rank at least 2".into()).into());
            }
            Ok(pretty(&compile_system(&z_in_g_templates(rank), &sys).to_json()))
        }
        Command::SolveBounded {
            system,
            bound,
            presentation,
            node_limit,
        } => {
            json_only(format)?;
            let sys = GroupSystem::from_json(&read_json(&system)?)?;
            let ambient = match presentation {
                Some(p) => Ambient::quotient(normalize(&read_presentation(&p)?))?,
                None => Ambient::free(sys.rank),
            };
            let solutions = match node_limit {
                None => bounded_solve_group(&sys, &ambient, bound)?,
                Some(limit) => {
                    let opts = SolveOptions {
                        node_limit: limit,
                        ..SolveOptions::with_bound(bound)
                    };
                    let solver = GroupSolver::new(&sys, &ambient, opts)?;
                    let project = sys.projection_vars();
                    solver
                        .solve(&project, &BTreeMap::new())?
                        .into_iter()
                        .map(|vals| project.iter().cloned().zip(vals).collect())
                        .collect()
                }
            };
            eprintln!("{} solutions with coordinates in [-{bound}, {bound}]", solutions.len());
            let rendered: Vec<BTreeMap<String, String>> = solutions
                .iter()
                .map(|s| s.iter().map(|(k, g)| (k.clone(), g.to_string())).collect())
                .collect();
            Ok(pretty(&json!({
                "box": bound,
                "variables": sys.projection_vars(),
                "count": solutions.len(),
                "solutions": rendered,
            })))
        }
        Command::Verify {
            ring,
            box_ring,
            box_group,
            rank,
        } => {
            json_only(format)?;
            let sys = RingSystem::from_json(&read_json(&ring)?)?;
            if rank < 2 {
                return Err(Error::Precondition("the encoding needs rank at least 2".into()).into());
            }
            let report = verify_correspondence(
                &sys,
                &z_in_g_templates(rank),
                &Ambient::free(rank),
                box_ring,
                box_group,
            )?;
            eprintln!(
                "{} ring solutions, {} extended; {} group solutions, {} decoded; {} counterexamples",
                report.ring_solutions,
                report.extended,
                report.group_solutions,
                report.projected,
                report.counterexamples.len()
            );
            Ok(pretty(&serde_json::to_value(&report).expect("report serializes")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not configure {n} workers: {e}");
        }
    }
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            println!("{}", json!({"error": {"kind": f.kind, "message": f.message}}));
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
