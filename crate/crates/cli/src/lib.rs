//! Command-line front end for `gh-generic`. [`run`] does all the work and
//! returns the exit code with the text to print, so it can be tested
//! without spawning a process.
//!
//! Success documents go to stdout, error documents to stderr; nothing is
//! printed to stdout on failure.

use clap::{Parser, Subcommand};
use gh_generic::document::{DocumentError, GraphDocument, SpaceDocument};
use gh_generic::*;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_BOUNDS: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ghgen", version, about = "Exact Gromov-Hausdorff tooling for finite metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a file holds a finite metric space.
    Validate { file: PathBuf },
    /// Print diam, s, t, e and whether the space is generic.
    Info {
        file: PathBuf,
        /// Largest point count for the isometry-defect search.
        #[arg(long, default_value_t = DEFAULT_PERMUTATION_BUDGET)]
        budget: usize,
    },
    /// Exact Gromov-Hausdorff distance between two spaces.
    Gh {
        a: PathBuf,
        b: PathBuf,
        /// Largest #A * #B for the correspondence search.
        #[arg(long, default_value_t = DEFAULT_GH_BUDGET)]
        budget: usize,
    },
    /// Hausdorff distance between two subsets of one space.
    Hausdorff {
        file: PathBuf,
        /// Comma-separated point labels.
        #[arg(long)]
        a: String,
        /// Comma-separated point labels.
        #[arg(long)]
        b: String,
    },
    /// Shortest-path metric of a weighted graph.
    Project {
        graph: PathBuf,
        /// Also report whether every edge weight survives.
        #[arg(long)]
        check_weights: bool,
    },
    /// Apply a metrically convex transform, e.g. `ladder:1,shift:2`.
    Transform {
        file: PathBuf,
        #[arg(long)]
        spec: String,
    },
    /// Perturb a space into a nearby generic one.
    Perturb {
        file: PathBuf,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        c: String,
        /// Attach a certificate; exits 3 if a bound fails.
        #[arg(long)]
        certify: bool,
        /// Largest point count for the isometry-defect search in the certificate.
        #[arg(long, default_value_t = DEFAULT_PERMUTATION_BUDGET)]
        budget: usize,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
    witness: Value,
}

impl Failure {
    fn invalid(kind: &'static str, message: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID, kind, message: message.into(), witness: Value::Null }
    }

    fn with(mut self, witness: Value) -> Self {
        self.witness = witness;
        self
    }
}

fn metric_failure(e: &MetricError) -> Failure {
    let f = Failure::invalid("metric", e.to_string());
    match *e {
        MetricError::Asymmetry { i, j } | MetricError::ZeroOffDiagonal { i, j } | MetricError::NegativeEntry { i, j } => {
            f.with(json!({ "i": i, "j": j }))
        }
        MetricError::NonzeroDiagonal { i } => f.with(json!({ "i": i })),
        MetricError::TriangleViolation { i, j, k } => f.with(json!({ "i": i, "j": j, "k": k })),
        MetricError::NotSquare { row, len, expected } => f.with(json!({ "row": row, "len": len, "expected": expected })),
        MetricError::SearchBudgetExceeded { points, budget } => Failure {
            code: EXIT_BUDGET,
            kind: "budget",
            ..f
        }
        .with(json!({ "points": points, "budget": budget })),
        _ => f,
    }
}

fn graph_failure(e: &GraphError) -> Failure {
    match e {
        GraphError::Metric(m) => metric_failure(m),
        GraphError::Disconnected(u, v) => Failure::invalid("graph", e.to_string()).with(json!({ "u": u, "v": v })),
        _ => Failure::invalid("graph", e.to_string()),
    }
}

fn document_failure(e: &DocumentError) -> Failure {
    match e {
        DocumentError::BadEntry { row, col, text } => {
            Failure::invalid("parse", e.to_string()).with(json!({ "row": row, "col": col, "text": text }))
        }
        DocumentError::BadWeight { index, text } => {
            Failure::invalid("parse", e.to_string()).with(json!({ "edge": index, "text": text }))
        }
        DocumentError::Metric(m) => metric_failure(m),
        DocumentError::Graph(g) => graph_failure(g),
    }
}

fn genericity_failure(e: &GenericityError) -> Failure {
    match e {
        GenericityError::Metric(m) => metric_failure(m),
        GenericityError::Graph(g) => graph_failure(g),
        _ => Failure::invalid("genericity", e.to_string()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid("io", format!("{}: {e}", path.display())).with(json!({ "path": path.display().to_string() })))
}

/// JSON `SpaceDocument` if the first non-blank character is `{`, otherwise
/// a headerless square CSV matrix with points labeled `0, 1, ...`.
fn load_space(path: &Path) -> Result<FiniteMetricSpace, Failure> {
    let text = read(path)?;
    let doc = if text.trim_start().starts_with('{') {
        serde_json::from_str::<SpaceDocument>(&text).map_err(|e| Failure::invalid("parse", e.to_string()))?
    } else {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut matrix = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Failure::invalid("parse", e.to_string()))?;
            matrix.push(record.iter().map(str::to_string).collect::<Vec<_>>());
        }
        SpaceDocument { points: (0..matrix.len()).map(|i| i.to_string()).collect(), matrix }
    };
    doc.to_space().map_err(|e| document_failure(&e))
}

fn load_graph(path: &Path) -> Result<WeightedGraph, Failure> {
    let text = read(path)?;
    let doc: GraphDocument = serde_json::from_str(&text).map_err(|e| Failure::invalid("parse", e.to_string()))?;
    doc.to_graph().map_err(|e| document_failure(&e))
}

fn positive(flag: &str, text: &str) -> Result<Rational, Failure> {
    let v = parse_rational(text).map_err(|e| Failure::invalid("argument", format!("--{flag}: {e}")))?;
    if v <= Rational::from_integer(0.into()) {
        return Err(Failure::invalid("argument", format!("--{flag} must be positive")));
    }
    Ok(v)
}

fn subset(space: &FiniteMetricSpace, flag: &str, ids: &str) -> Result<Vec<usize>, Failure> {
    ids.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|id| {
            space
                .index_of(id)
                .ok_or_else(|| Failure::invalid("argument", format!("--{flag}: unknown point `{id}`")).with(json!({ "point": id })))
        })
        .collect()
}

fn doc(space: &FiniteMetricSpace) -> Value {
    serde_json::to_value(SpaceDocument::from_space(space)).expect("documents serialize")
}

fn execute(command: Command) -> Result<(i32, Value), Failure> {
    let ok = |v| Ok((EXIT_OK, v));
    match command {
        Command::Validate { file } => {
            let x = load_space(&file)?;
            ok(json!({ "valid": true, "points": x.len() }))
        }
        Command::Info { file, budget } => {
            let x = load_space(&file)?;
            ok(serde_json::to_value(report(&x, budget)).expect("reports serialize"))
        }
        Command::Gh { a, b, budget } => {
            let (a, b) = (load_space(&a)?, load_space(&b)?);
            let r = gh_exact(&a, &b, budget).map_err(|e| match e {
                CorrespondenceError::SearchBudgetExceeded { cells, budget } => Failure {
                    code: EXIT_BUDGET,
                    ..Failure::invalid("budget", e.to_string())
                }
                .with(json!({ "cells": cells, "budget": budget })),
                other => Failure::invalid("correspondence", other.to_string()),
            })?;
            let witness: Vec<[&str; 2]> = r
                .optimal
                .pairs()
                .into_iter()
                .map(|(i, j)| [a.label(i), b.label(j)])
                .collect();
            ok(json!({
                "two_dgh": format_rational(&r.two_dgh),
                "d_gh": format_rational(&r.dgh()),
                "witness": witness,
                "explored": r.explored,
            }))
        }
        Command::Hausdorff { file, a, b } => {
            let x = load_space(&file)?;
            let (sa, sb) = (subset(&x, "a", &a)?, subset(&x, "b", &b)?);
            let h = hausdorff(&sa, &sb, &x).map_err(|e| Failure::invalid("argument", e.to_string()))?;
            ok(json!({ "hausdorff": format_rational(&h) }))
        }
        Command::Project { graph, check_weights } => {
            let g = load_graph(&graph)?;
            let x = canonical_projection(&g).map_err(|e| graph_failure(&e))?;
            let mut out = json!({ "space": doc(&x) });
            if check_weights {
                let (preserved, witness) = match preserves_weights(&g) {
                    Ok(()) => (true, Value::Null),
                    Err(v) => (
                        false,
                        json!({
                            "edge": [g.vertex(v.edge.u), g.vertex(v.edge.v), format_rational(&v.edge.weight)],
                            "walk": v.walk.labels(&g),
                            "length": format_rational(v.walk.length()),
                        }),
                    ),
                };
                out["preserves_weights"] = json!(preserved);
                out["witness"] = witness;
            }
            ok(out)
        }
        Command::Transform { file, spec } => {
            let x = load_space(&file)?;
            let f: MetricTransform = spec.parse().map_err(|e: TransformError| Failure::invalid("argument", e.to_string()))?;
            let y = apply(&f, &x);
            let bound = if x.len() >= 2 {
                Value::String(format_rational(&image_gh_bound(&x, &f).expect("at least two points")))
            } else {
                json!("0")
            };
            ok(json!({ "transform": f.to_string(), "space": doc(&y), "image_gh_bound": bound }))
        }
        Command::Perturb { file, delta, c, certify: want_certificate, budget } => {
            let x = load_space(&file)?;
            let (delta, c) = (positive("delta", &delta)?, positive("c", &c)?);
            let p = perturb(&x, &delta, &c).map_err(|e| genericity_failure(&e))?;
            let new_points: serde_json::Map<String, Value> = p
                .new_points()
                .iter()
                .map(|(k, (l, r))| (k.clone(), json!({ "left": l, "right": r })))
                .collect();
            let mut out = json!({
                "space": doc(p.space()),
                "epsilon": format_rational(p.epsilon()),
                "old_points": p.old_points(),
                "new_points": new_points,
            });
            let mut code = EXIT_OK;
            if want_certificate {
                let cert = certify(&x, &p, budget).map_err(|e| genericity_failure(&e))?;
                if !cert.bounds_met {
                    code = EXIT_BOUNDS;
                }
                out["certificate"] = serde_json::to_value(cert).expect("certificates serialize");
            }
            Ok((code, out))
        }
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: EXIT_OK, stdout: e.to_string(), stderr: String::new() };
            }
            let f = Failure::invalid("usage", e.to_string());
            return render_failure(f);
        }
    };
    match execute(cli.command) {
        Ok((code, value)) => Outcome {
            code,
            stdout: serde_json::to_string_pretty(&value).expect("json") + "\n",
            stderr: String::new(),
        },
        Err(f) => render_failure(f),
    }
}

fn render_failure(f: Failure) -> Outcome {
    let body = json!({ "error": { "kind": f.kind, "message": f.message, "witness": f.witness } });
    Outcome {
        code: f.code,
        stdout: String::new(),
        stderr: serde_json::to_string_pretty(&body).expect("json") + "\n",
    }
}
