mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use circuitlab::circuit::{enumerate_circuits, is_circuit, CircuitVerdict, DEFAULT_BUDGET};
use circuitlab::fstab::{fstab_walk, graph_center};
use circuitlab::verify::{run_suite, VerifyOptions};
use circuitlab::walk::{
    circuit_diameter, circuit_distance, circuit_step, distance_bounds, DEFAULT_DEPTH_LIMIT,
};
use circuitlab::Error;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use input::{parse_vector, Family, Loaded};

const EXIT_FAILURE: u8 = 1;
const EXIT_NOT_A_CIRCUIT: u8 = 3;
const EXIT_NO_STEP: u8 = 4;
const EXIT_BUDGET: u8 = 5;
const EXIT_INCOMPLETE: u8 = 6;

#[derive(Parser)]
#[command(
    name = "circuitlab",
    version,
    about = "Exact circuits, circuit walks and circuit diameters of H-polytopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default)]
pub struct Source {
    /// Polytope family.
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Number of nodes of the host graph.
    #[arg(long)]
    pub n: Option<usize>,
    /// Add comb inequalities (tsp, n >= 6).
    #[arg(long)]
    pub combs: bool,
    /// Graph file for the fstab family: JSON or "i j" edge lines.
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// H-representation JSON file; "-" reads stdin.
    #[arg(long, value_name = "FILE")]
    pub polytope: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the H-representation of a family member.
    Gen(Source),
    /// List vertices as arrays of rational strings.
    Vertices(Source),
    /// Enumerate all circuits.
    Circuits {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Test whether a direction is a circuit.
    IsCircuit {
        #[command(flatten)]
        source: Source,
        /// Comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Take one maximal circuit step.
    Step {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Circuit distance between two vertices.
    Distance {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH_LIMIT)]
        depth_limit: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Circuit diameter over all vertex pairs.
    Diameter {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_DEPTH_LIMIT)]
        depth_limit: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Two-phase circuit walk on a fractional stable set polytope.
    FstabWalk {
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Root node; defaults to a center of the graph.
        #[arg(long)]
        root: Option<usize>,
    },
    /// Run a named verification suite.
    Verify {
        suite: String,
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        depth_limit: Option<usize>,
    },
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotACircuit => EXIT_NOT_A_CIRCUIT,
            Error::NoStep => EXIT_NO_STEP,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::IncompleteDescription => EXIT_INCOMPLETE,
            _ => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Text for stdout, optional JSON payload, and the exit code.
struct Output {
    text: String,
    json: Option<String>,
    code: u8,
}

impl Output {
    fn json(s: String) -> Self {
        Output {
            text: s.clone(),
            json: Some(s),
            code: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = std::env::var("CIRCUITLAB_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global();
    }
    match run(cli.command) {
        Ok(out) => {
            match (&cli.json, &out.json) {
                (Some(path), Some(j)) => {
                    if let Err(e) = std::fs::write(path, format!("{j}\n")) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(EXIT_FAILURE);
                    }
                    if out.text != *j {
                        print!("{}", out.text);
                    }
                }
                _ => println!("{}", out.text.trim_end()),
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Gen(src) => Ok(Output::json(Loaded::from_source(&src)?.polytope.to_json())),
        Command::Vertices(src) => {
            let verts = Loaded::from_source(&src)?.vertices()?;
            Ok(Output::json(
                serde_json::to_string_pretty(&verts).expect("serializable"),
            ))
        }
        Command::Circuits { source, budget } => {
            let l = Loaded::from_source(&source)?;
            let mut set = enumerate_circuits(&l.polytope, budget)?;
            set.sort();
            Ok(Output::json(set.to_json(&l.polytope)))
        }
        Command::IsCircuit { source, vector } => {
            let l = Loaded::from_source(&source)?;
            let g = parse_vector(&vector)?;
            let verdict = is_circuit(&l.polytope, &g)?;
            let code = match verdict {
                CircuitVerdict::Circuit { .. } => 0,
                CircuitVerdict::NotCircuit => EXIT_NOT_A_CIRCUIT,
                CircuitVerdict::NotCertified => EXIT_INCOMPLETE,
            };
            let answer = match verdict {
                CircuitVerdict::Circuit { .. } => "true",
                CircuitVerdict::NotCircuit => "false",
                CircuitVerdict::NotCertified => "not-certified",
            };
            let j = json!({ "vector": g, "verdict": verdict.as_str() }).to_string();
            Ok(Output {
                text: answer.into(),
                json: Some(j),
                code,
            })
        }
        Command::Step {
            source,
            from,
            vector,
        } => {
            let l = Loaded::from_source(&source)?;
            let x = l.point(&from)?;
            let s = circuit_step(&l.polytope, &x, &parse_vector(&vector)?)?;
            Ok(Output::json(
                serde_json::to_string_pretty(&s).expect("serializable"),
            ))
        }
        Command::Distance {
            source,
            from,
            to,
            depth_limit,
            budget,
        } => {
            let l = Loaded::from_source(&source)?;
            let (x, y) = (l.point(&from)?, l.point(&to)?);
            distance(&l, &x, &y, depth_limit, budget)
        }
        Command::Diameter {
            source,
            depth_limit,
            budget,
        } => {
            let l = Loaded::from_source(&source)?;
            let verts = l.vertices()?;
            let set = enumerate_circuits(&l.polytope, budget)?;
            let d = circuit_diameter(&l.polytope, &verts, &set, depth_limit)?;
            let j = json!({ "diameter": d, "vertices": verts.len(), "circuits": set.len() })
                .to_string();
            Ok(Output {
                text: d.to_string(),
                json: Some(j),
                code: 0,
            })
        }
        Command::FstabWalk {
            graph,
            from,
            to,
            root,
        } => {
            let l = Loaded::from_source(&Source {
                graph: Some(graph),
                ..Default::default()
            })?;
            let g = l.graph.as_ref().expect("fstab source has a graph");
            let (x, y) = (l.point(&from)?, l.point(&to)?);
            let root = match root {
                Some(r) => r,
                None => graph_center(g)?,
            };
            let (w, stats) = fstab_walk(g, &x, &y, root)?;
            let walk: serde_json::Value = serde_json::from_str(&w.to_json()).expect("walk json");
            let j = serde_json::to_string_pretty(&json!({
                "root": root,
                "length": stats.length,
                "eccentricity": stats.eccentricity,
                "bound": stats.bound,
                "walk": walk,
            }))
            .expect("serializable");
            let text = format!(
                "{j}\nlength {} <= bound {} (4*{} + {})\n",
                stats.length,
                stats.bound,
                stats.eccentricity,
                circuitlab::fstab::C_WALK
            );
            Ok(Output {
                text,
                json: Some(j),
                code: 0,
            })
        }
        Command::Verify {
            suite,
            sample,
            seed,
            budget,
            depth_limit,
        } => {
            let mut opts = VerifyOptions {
                sample,
                seed,
                budget,
                ..Default::default()
            };
            if let Some(d) = depth_limit {
                opts.depth_limit = d;
            }
            let report = run_suite(&suite, &opts)?;
            let code = if report.pass { 0 } else { EXIT_FAILURE };
            Ok(Output {
                text: report.to_text(),
                json: Some(report.to_json()),
                code,
            })
        }
    }
}

/// BFS over the enumerated circuits when they fit the budget; otherwise
/// one-step bounds through the vertex set.
fn distance(
    l: &Loaded,
    x: &circuitlab::RationalVector,
    y: &circuitlab::RationalVector,
    depth_limit: usize,
    budget: u64,
) -> Result<Output, Failure> {
    let p = &l.polytope;
    let verts = l.vertices().unwrap_or_default();
    if !verts.is_empty() {
        let b = distance_bounds(p, x, y, &verts)?;
        if let Some(d) = b.exact() {
            let j = json!({ "distance": d, "method": "bounds", "walk": b.witness }).to_string();
            return Ok(Output {
                text: d.to_string(),
                json: Some(j),
                code: 0,
            });
        }
    }
    let set = enumerate_circuits(p, budget)?;
    match circuit_distance(p, x, y, &set, depth_limit)? {
        Some(d) => {
            let j = json!({ "distance": d, "method": "bfs" }).to_string();
            Ok(Output {
                text: d.to_string(),
                json: Some(j),
                code: 0,
            })
        }
        None => Err(Error::DepthLimit { limit: depth_limit }.into()),
    }
}
