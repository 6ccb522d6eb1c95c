mod gen;
mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dimerlab::error::Error;
use dimerlab::graph::{EdgeId, EmbeddedGraph};
use dimerlab::kasteleyn::KasteleynSystem;
use dimerlab::moves::{contract, leaf_trim, parallel_reduce, square_move, verify_all_untouched, MoveCertificate};
use dimerlab::oracle::{Oracle, OracleCaps};
use dimerlab::scalar::Rational;
use dimerlab::spec::{parse_graph, GraphSpec};
use dimerlab::stats::{
    covariance, edge_distribution, expected_multiplicity, probability_matrix, product_expectation, variance,
};
use num_traits::Signed;
use serde_json::{json, Map, Value};

use gen::GenArgs;
use report::{exact, exact_list, Report};

type Q = Rational;

#[derive(Debug, Parser)]
#[command(name = "dimerlab", version, about = "Exact statistics of matrix-weighted dimer models")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Source {
    /// Graph file (JSON).
    #[arg(value_name = "FILE", conflicts_with = "graph")]
    file: Option<PathBuf>,
    /// Graph file (JSON), same as the positional argument.
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
    #[command(flatten)]
    gen: GenArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Partition function and edge statistics.
    Stats {
        #[command(flatten)]
        source: Source,
        /// Edge to report on; repeatable. Defaults to every edge.
        #[arg(long)]
        edge: Vec<String>,
        /// Covariance of two edges given as `e1,e2`; repeatable.
        #[arg(long)]
        covariance: Vec<String>,
        /// Product expectation `E[m_e1 ... m_ek]` for `e1,...,ek`; repeatable.
        #[arg(long)]
        product: Vec<String>,
    },
    /// Compare determinantal formulas with brute-force enumeration.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Transpose every weight on the determinant side only (negative control).
        #[arg(long)]
        transpose_weights: bool,
    },
    /// Apply one local move.
    Move {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        kind: MoveArg,
        /// Face for `square`, as `f<index>` or `<edge>:<white|black>`.
        #[arg(long)]
        face: Option<String>,
        /// Degree-2 center for `contract`.
        #[arg(long)]
        vertex: Option<String>,
        /// Pendant edge for `leaf-trim`.
        #[arg(long = "edge")]
        edge: Option<String>,
        /// White endpoint for `parallel-reduce`.
        #[arg(long)]
        white: Option<String>,
        /// Black endpoint for `parallel-reduce`.
        #[arg(long)]
        black: Option<String>,
        /// Write the transformed graph here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw covers from the dimer measure (by enumeration).
    Sample {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a generated graph as JSON.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MoveArg {
    #[value(alias = "leaf_trim")]
    LeafTrim,
    #[value(alias = "parallel_reduce")]
    ParallelReduce,
    Contract,
    Square,
}

/// Failures and their exit codes.
#[derive(Debug)]
enum Failure {
    /// Verification ran and failed (exit 1).
    Verify(Report),
    /// Bad input (exit 2).
    Input(String),
    /// A required inverse did not exist (exit 3).
    Singular(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Singular(_) => Failure::Singular(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<(Report, Option<String>), Failure>;

fn load(source: &Source) -> Result<EmbeddedGraph<Q>, Failure> {
    let path = source.file.as_ref().or(source.graph.as_ref());
    match (path, source.gen.generator) {
        (Some(_), Some(_)) => Err(Failure::Input("give either a graph file or --gen, not both".into())),
        (Some(p), None) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
            Ok(parse_graph(&text)?)
        }
        (None, Some(kind)) => Ok(source.gen.build(kind)?),
        (None, None) => Err(Failure::Input("no graph: pass a file or --gen".into())),
    }
}

fn edge(g: &EmbeddedGraph<Q>, source: &Source, name: &str) -> Result<EdgeId, Failure> {
    Ok(g.edge_by_name(&source.gen.resolve_edge(name)?)?)
}

fn edge_list(g: &EmbeddedGraph<Q>, source: &Source, list: &str) -> Result<Vec<EdgeId>, Failure> {
    list.split(',').map(|s| edge(g, source, s.trim())).collect()
}

fn echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn stats(source: &Source, edges: &[String], covs: &[String], products: &[String]) -> Outcome {
    let g = load(source)?;
    let sys = KasteleynSystem::new(&g)?;
    let mut r = Report::new(&echo());
    r.digest(&g);
    r.push("Z", exact(&sys.partition_function()));
    let ids: Vec<EdgeId> = if edges.is_empty() {
        (0..g.num_edges()).map(EdgeId).collect()
    } else {
        edges.iter().map(|e| edge(&g, source, e)).collect::<Result<_, _>>()?
    };
    let mut per_edge = Map::new();
    for e in ids {
        let p = probability_matrix(&sys, e)?;
        let dist = edge_distribution(&sys, e)?;
        per_edge.insert(
            g.edge(e).name.clone(),
            json!({
                "char_coeffs": exact_list(&p.char_coeffs()?),
                "pmf": exact_list(&dist.masses),
                "mean": exact(&expected_multiplicity(&p)),
                "variance": exact(&variance(&p)),
            }),
        );
    }
    r.push("edges", Value::Object(per_edge));
    if !covs.is_empty() {
        let mut m = Map::new();
        for c in covs {
            let es = edge_list(&g, source, c)?;
            if es.len() != 2 {
                return Err(Failure::Input(format!("--covariance expects two edges, got `{c}`")));
            }
            m.insert(c.clone(), exact(&covariance(&sys, es[0], es[1])?));
        }
        r.push("covariance", Value::Object(m));
    }
    if !products.is_empty() {
        let mut m = Map::new();
        for p in products {
            let es = edge_list(&g, source, p)?;
            m.insert(p.clone(), exact(&product_expectation(&sys, &es)?));
        }
        r.push("product_expectation", Value::Object(m));
    }
    Ok((r, None))
}

fn verify(source: &Source, transpose: bool) -> Outcome {
    let g = load(source)?;
    let det_graph = if transpose {
        if g.edges().iter().any(|e| !e.weight.is_square()) {
            return Err(Failure::Input("--transpose-weights needs square edge weights".into()));
        }
        g.map_weights(|w| w.transpose())
    } else {
        g.clone()
    };
    let sys = KasteleynSystem::new(&det_graph)?;
    let oracle = Oracle::new(&g, OracleCaps::from_env())?;
    let mut r = Report::new(&echo());
    r.digest(&g);
    let det = sys.partition_function();
    let z = oracle.partition_function().abs();
    let z_ok = det == z;
    r.push("abs_det_K", exact(&det));
    r.push("oracle_Z", exact(&z));
    let mut bad_edges = Vec::new();
    for i in 0..g.num_edges() {
        let e = EdgeId(i);
        if edge_distribution(&sys, e)?.masses != oracle.distribution(&g, e)? {
            bad_edges.push(g.edge(e).name.clone());
        }
    }
    let mut pairs = 0;
    let mut bad_pairs = Vec::new();
    for i in 0..g.num_edges() {
        for j in i + 1..g.num_edges() {
            let es = [EdgeId(i), EdgeId(j)];
            if product_expectation(&sys, &es)? != oracle.product_expectation(&es)? {
                bad_pairs.push(format!("({},{})", g.edge(es[0]).name, g.edge(es[1]).name));
            }
            pairs += 1;
        }
    }
    r.push("covers", oracle.covers().len());
    r.push("partition_function", if z_ok { "pass" } else { "fail" });
    r.push("distribution_mismatches", json!(bad_edges));
    r.push("pairs_checked", pairs);
    r.push("pair_mismatches", json!(bad_pairs));
    let pass = z_ok && bad_edges.is_empty() && bad_pairs.is_empty();
    r.push("verdict", if pass { "pass" } else { "fail" });
    if pass {
        Ok((r, None))
    } else {
        Err(Failure::Verify(r))
    }
}

#[allow(clippy::too_many_arguments)]
fn apply_move(
    source: &Source,
    kind: MoveArg,
    face: Option<&str>,
    vertex: Option<&str>,
    edge_name: Option<&str>,
    white: Option<&str>,
    black: Option<&str>,
    out: Option<&PathBuf>,
) -> Outcome {
    let g = load(source)?;
    fn need<'a>(v: Option<&'a str>, flag: &str) -> Result<&'a str, Failure> {
        v.ok_or_else(|| Failure::Input(format!("this move needs --{flag}")))
    }
    let cert: MoveCertificate<Q> = match kind {
        MoveArg::Square => square_move(&g, g.face_by_name(need(face, "face")?)?)?,
        MoveArg::Contract => contract(&g, g.vertex_by_name(need(vertex, "vertex")?)?)?,
        MoveArg::LeafTrim => leaf_trim(&g, edge(&g, source, need(edge_name, "edge")?)?)?,
        MoveArg::ParallelReduce => parallel_reduce(
            &g,
            g.vertex_by_name(need(white, "white")?)?,
            g.vertex_by_name(need(black, "black")?)?,
        )?,
    };
    let mut r = Report::new(&echo());
    r.push("move", cert.kind.as_str());
    r.push("picture", json!(cert.picture));
    r.digest(&cert.after);
    r.push("factor", exact(&cert.factor));
    let z_before = KasteleynSystem::new(&cert.before)?.partition_function();
    let z_after = KasteleynSystem::new(&cert.after)?.partition_function();
    r.push("Z_before", exact(&z_before));
    r.push("Z_after", exact(&z_after));
    let z_ok = z_after == cert.factor.abs() * z_before;
    r.push("factor_relation", if z_ok { "pass" } else { "fail" });
    let reports = verify_all_untouched(&cert)?;
    let verdicts: BTreeMap<String, &str> = reports
        .iter()
        .map(|x| (x.edge.clone(), if x.passed { "pass" } else { "fail" }))
        .collect();
    let pass = z_ok && reports.iter().all(|x| x.passed);
    r.push("untouched_edges", json!(verdicts));
    r.push("verdict", if pass { "pass" } else { "fail" });
    if let Some(path) = out {
        std::fs::write(path, GraphSpec::from_graph(&cert.after).to_json() + "\n")
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        r.push("written", path.display().to_string());
    }
    if pass {
        Ok((r, None))
    } else {
        Err(Failure::Verify(r))
    }
}

fn sample(source: &Source, count: usize, seed: u64, json: bool) -> Outcome {
    let g = load(source)?;
    let oracle = Oracle::new(&g, OracleCaps::from_env())?;
    if oracle.covers().is_empty() {
        return Err(Failure::Input("the graph has no covers".into()));
    }
    let picks = oracle.sample(count, seed)?;
    let cover_map = |idx: usize| -> Value {
        let m: Map<String, Value> = oracle.covers()[idx]
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(e, &m)| (g.edges()[e].name.clone(), m.into()))
            .collect();
        Value::Object(m)
    };
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &p in &picks {
        *counts.entry(p).or_default() += 1;
    }
    let z = oracle.partition_function().clone();
    let freq: Vec<Value> = counts
        .iter()
        .map(|(&idx, &c)| {
            json!({
                "cover": cover_map(idx),
                "count": c,
                "frequency": dimerlab::scalar::format_decimal(c as f64 / count as f64),
                "probability": exact(&(oracle.weights()[idx].clone() / z.clone())),
            })
        })
        .collect();
    let mut r = Report::new(&echo());
    r.digest(&g);
    r.push("count", count);
    r.push("seed", seed);
    r.push("frequencies", Value::Array(freq));
    let covers: Vec<Value> = picks.iter().map(|&p| cover_map(p)).collect();
    if json {
        r.push("samples", Value::Array(covers));
        return Ok((r, None));
    }
    // text mode prints the covers one per line ahead of the report
    let lines: String = covers.iter().map(|c| format!("{c}\n")).collect();
    Ok((r, Some(lines)))
}

fn generate(gen: &GenArgs, out: Option<&PathBuf>) -> Outcome {
    let kind = gen.generator.ok_or_else(|| Failure::Input("gen needs --gen <kind>".into()))?;
    let g = gen.build(kind)?;
    let text = GraphSpec::from_graph(&g).to_json() + "\n";
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let mut r = Report::new(&echo());
            r.digest(&g);
            r.push("written", path.display().to_string());
            Ok((r, None))
        }
        None => Ok((Report::default(), Some(text))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Stats {
            source,
            edge,
            covariance,
            product,
        } => stats(source, edge, covariance, product),
        Command::Verify {
            source,
            transpose_weights,
        } => verify(source, *transpose_weights),
        Command::Move {
            source,
            kind,
            face,
            vertex,
            edge,
            white,
            black,
            out,
        } => apply_move(
            source,
            *kind,
            face.as_deref(),
            vertex.as_deref(),
            edge.as_deref(),
            white.as_deref(),
            black.as_deref(),
            out.as_ref(),
        ),
        Command::Sample { source, count, seed } => sample(source, *count, *seed, cli.json),
        Command::Gen { gen, out } => generate(gen, out.as_ref()),
    };
    match outcome {
        Ok((report, raw)) => {
            let is_gen = matches!(cli.command, Command::Gen { out: None, .. });
            match raw {
                Some(text) if is_gen => print!("{text}"),
                Some(text) if !cli.json => print!("{text}{}", report.render(false)),
                _ => print!("{}", report.render(cli.json)),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Verify(report)) => {
            print!("{}", report.render(cli.json));
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Singular(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
