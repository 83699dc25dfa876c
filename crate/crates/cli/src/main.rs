use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bowtie_lab::amalgam::AmalgamCheck;
use bowtie_lab::dot::to_dot;
use bowtie_lab::graph::{embedding_from_json, find_bowtie};
use bowtie_lab::structure::bad_vertices;
use bowtie_lab::*;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "bowtie-lab",
    version,
    about = "Combinatorics of bowtie-free graphs"
)]
struct Cli {
    /// Output format for graph-valued results.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Report whether a graph is bowtie-free and special.
    Check { graph: PathBuf },
    /// Split a special graph into K4 blocks, chimneys and cross edges.
    Decompose { graph: PathBuf },
    /// Embed a bowtie-free graph into a special one.
    Specialize { graph: PathBuf },
    /// List special graphs on `n` vertices up to isomorphism.
    Enumerate { n: u32 },
    /// Free amalgam of LEFT and RIGHT over BASE, checked against the special class.
    Amalgamate {
        base: PathBuf,
        left: PathBuf,
        right: PathBuf,
        map_left: PathBuf,
        map_right: PathBuf,
    },
    /// Disjoint union of two graphs.
    Union { first: PathBuf, second: PathBuf },
    /// Edges lying in at least two triangles.
    SpecialEdges { graph: PathBuf },
    /// Algebraic closure of a vertex set.
    Acl {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        set: Vec<Vertex>,
    },
    /// Extend a partial automorphism to an automorphism of a special supergraph.
    Necklace {
        graph: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Enlarge a partial automorphism until its domain and range are special.
    CloseSystem {
        graph: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Amalgamate 1-systems given as {"graph", "automorphism"} files.
    AmalgamateSystems {
        base: PathBuf,
        left: PathBuf,
        right: PathBuf,
        map_left: PathBuf,
        map_right: PathBuf,
    },
    /// Build a finite approximant of the universal special graph.
    Build {
        #[arg(long, default_value_t = 4)]
        cap: u32,
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the extension property of a snapshot against the final graph.
    Certify {
        approximant: PathBuf,
        #[arg(long, default_value_t = 0)]
        snapshot: usize,
        #[arg(long, default_value_t = 4)]
        cap: u32,
    },
    /// Generate the non-homogenisability witness.
    Witness {
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Also write the witness graph as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Verify a witness file.
    VerifyWitness { witness: PathBuf },
    /// Render a graph as DOT, dashing cross edges when the graph is special.
    ExportDot { graph: PathBuf },
}

enum Failure {
    /// Exit 1 with a JSON report on stdout.
    Domain(Value),
    /// Exit 2 with a message on stderr.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_domain_error() {
            Failure::Domain(error_report(&e))
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn error_report(e: &Error) -> Value {
    json!({ "error": e.kind(), "message": e.to_string(), "witness": e.witness() })
}

type Outcome = std::result::Result<String, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> std::result::Result<Graph, Failure> {
    Graph::from_json(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_map(path: &Path) -> std::result::Result<Embedding, Failure> {
    embedding_from_json(&read(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_system(path: &Path) -> std::result::Result<OneSystem, Failure> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Repr {
        graph: Graph,
        automorphism: Embedding,
    }
    let repr: Repr = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    OneSystem::new(repr.graph, repr.automorphism)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output serialisation is infallible")
}

fn json_only(format: Format, command: &str) -> std::result::Result<(), Failure> {
    match format {
        Format::Json => Ok(()),
        Format::Dot => Err(Failure::Usage(format!("{command} has no DOT output"))),
    }
}

fn emit_graph(g: &Graph, format: Format) -> String {
    match format {
        Format::Json => g.to_json(),
        Format::Dot => render_dot(g),
    }
}

fn render_dot(g: &Graph) -> String {
    match decompose(g) {
        Ok(d) => d.to_dot(),
        Err(_) => to_dot(g, &BTreeSet::new()),
    }
}

fn run(cli: Cli) -> Outcome {
    let format = cli.format;
    match cli.command {
        Command::Check { graph } => {
            json_only(format, "check")?;
            let g = read_graph(&graph)?;
            if let Some(w) = find_bowtie(&g) {
                let e = Error::ContainsBowtie {
                    witness: w.vertices(),
                };
                return Err(Failure::Domain(error_report(&e)));
            }
            let bad = bad_vertices(&g);
            Ok(to_json(
                &json!({ "bowtie_free": true, "special": bad.is_empty(), "bad_vertices": bad }),
            ))
        }
        Command::Decompose { graph } => {
            let d = decompose(&read_graph(&graph)?)?;
            Ok(match format {
                Format::Json => to_json(&d),
                Format::Dot => d.to_dot(),
            })
        }
        Command::Specialize { graph } => {
            let (s, _) = specialize(&read_graph(&graph)?)?;
            Ok(emit_graph(&s, format))
        }
        Command::Enumerate { n } => {
            json_only(format, "enumerate")?;
            Ok(to_json(&enumerate_special(n)))
        }
        Command::Amalgamate {
            base,
            left,
            right,
            map_left,
            map_right,
        } => {
            let spec = AmalgamSpec::new(
                read_graph(&base)?,
                read_graph(&left)?,
                read_graph(&right)?,
                read_map(&map_left)?,
                read_map(&map_right)?,
            )?;
            match check_special_amalgam(&spec) {
                AmalgamCheck::Verified(a) => Ok(emit_graph(&a.graph, format)),
                AmalgamCheck::Rejected {
                    amalgam,
                    violations,
                } => {
                    let first = &violations[0];
                    Err(Failure::Domain(json!({
                        "violation": first.violation,
                        "witness": first.witness,
                        "violations": violations,
                        "amalgam": amalgam,
                    })))
                }
            }
        }
        Command::Union { first, second } => {
            let u = disjoint_union(&read_graph(&first)?, &read_graph(&second)?);
            Ok(emit_graph(&u.graph, format))
        }
        Command::SpecialEdges { graph } => {
            json_only(format, "special-edges")?;
            let edges = special_edges(&read_graph(&graph)?)?;
            Ok(to_json(
                &edges.iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>(),
            ))
        }
        Command::Acl { graph, set } => {
            json_only(format, "acl")?;
            let set: BTreeSet<Vertex> = set.into_iter().collect();
            Ok(to_json(&acl(&read_graph(&graph)?, &set)?))
        }
        Command::Necklace { graph, map } => {
            let p = PartialAutomorphism::new(read_graph(&graph)?, read_map(&map)?)?;
            let r = necklace(&p)?;
            Ok(match format {
                Format::Json => to_json(&r),
                Format::Dot => render_dot(&r.extended),
            })
        }
        Command::CloseSystem { graph, map } => {
            json_only(format, "close-system")?;
            let p = PartialAutomorphism::new(read_graph(&graph)?, read_map(&map)?)?;
            Ok(to_json(&close_system(&p)?))
        }
        Command::AmalgamateSystems {
            base,
            left,
            right,
            map_left,
            map_right,
        } => {
            json_only(format, "amalgamate-systems")?;
            let (system, l, r) = amalgamate_1systems(
                &read_system(&base)?,
                &read_system(&left)?,
                &read_system(&right)?,
                &read_map(&map_left)?,
                &read_map(&map_right)?,
            )?;
            Ok(to_json(&json!({
                "graph": system.structure,
                "automorphism": system.automorphism,
                "left": l,
                "right": r,
            })))
        }
        Command::Build { cap, budget, seed } => {
            json_only(format, "build")?;
            Ok(build_approximant(cap, budget, seed)?.to_json())
        }
        Command::Certify {
            approximant,
            snapshot,
            cap,
        } => {
            json_only(format, "certify")?;
            let approx = Approximant::from_json(&read(&approximant)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", approximant.display())))?;
            Ok(to_json(&check_extension_property(&approx, snapshot, cap)?))
        }
        Command::Witness { k, dot } => {
            let w = homogenisability_witness(WitnessConfig { k })?;
            if let Some(path) = dot {
                write_file(&path, &render_dot(&w.graph)).map_err(Failure::Usage)?;
            }
            Ok(match format {
                Format::Json => w.to_json(),
                Format::Dot => render_dot(&w.graph),
            })
        }
        Command::VerifyWitness { witness } => {
            json_only(format, "verify-witness")?;
            let w = Witness::from_json(&read(&witness)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", witness.display())))?;
            let report = verify_witness(&w);
            if report.passed {
                Ok(to_json(&report))
            } else {
                Err(Failure::Domain(
                    serde_json::to_value(&report).expect("report serialises"),
                ))
            }
        }
        Command::ExportDot { graph } => Ok(render_dot(&read_graph(&graph)?)),
    }
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn with_newline(mut text: String) -> String {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var("BOWTIE_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("BOWTIE_LAB_THREADS must be a non-negative integer, got {raw:?}"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let out = cli.out.clone();
    match run(cli) {
        Ok(text) => {
            let text = with_newline(text);
            match out {
                Some(path) => match write_file(&path, &text) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(msg) => {
                        eprintln!("error: {msg}");
                        ExitCode::from(2)
                    }
                },
                None => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
            }
        }
        Err(Failure::Domain(report)) => {
            println!("{}", to_json(&report));
            if let Some(msg) = report.get("message").and_then(Value::as_str) {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
