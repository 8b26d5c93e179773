use std::fmt;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use trisparse::defect::{has_k_dense_set, has_k_sparse_set, recoloring_bound, sparse_bound_witness};
use trisparse::driver::{self, ProbeRow, RunLimits, RunReport, RunStatus};
use trisparse::enumerator::{default_workers, ProblemSpec, StepOptions};
use trisparse::formats::graph6;
use trisparse::formats::report::{self, RenderOptions};
use trisparse::graph::{Graph, MAX_N};
use trisparse::oracle;

const VERDICT_FALSE: u8 = 1;
const USAGE: u8 = 2;
const CAPPED: u8 = 3;

/// Exhaustive search for defective Ramsey numbers of triangle-free graphs.
#[derive(Parser)]
#[command(name = "trisparse", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute T_k(j), or R_k(i,j) when --i is given.
    Compute(ComputeArgs),
    /// Check a graph for triangles and forbidden sets.
    Check {
        /// Graph in graph6.
        #[arg(long)]
        graph: String,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Recolouring lower bound on the largest k-sparse set.
    Bound {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        k: usize,
    },
    /// Compare T_k(k+i) against k+2i-1 and look for a K_{i-1,k+i-1} extremal.
    ProbeConjecture {
        #[arg(long)]
        k_max: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Edge lists (`N u-v u-v ...`) from arguments or stdin to graph6.
    Encode { graphs: Vec<String> },
    /// graph6 from arguments or stdin to edge lists.
    Decode { graphs: Vec<String> },
    /// Compare enumerator levels with the brute-force oracle up to order N.
    OracleVerify {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long)]
    k: usize,
    /// Dense-set size; selects R-mode.
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    j: usize,
}

impl SpecArgs {
    fn spec(&self) -> Result<ProblemSpec, Failure> {
        ProblemSpec::new(self.k, self.i, self.j).map_err(Failure::usage)
    }
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long, default_value_t = MAX_N)]
    max_order: usize,
    #[arg(long)]
    max_level_cardinality: Option<usize>,
    /// Defaults to the available hardware parallelism.
    #[arg(long)]
    workers: Option<usize>,
}

impl LimitArgs {
    fn limits(&self, checkpoint_dir: Option<PathBuf>) -> RunLimits {
        RunLimits {
            max_order: self.max_order,
            max_level_cardinality: self.max_level_cardinality.unwrap_or(usize::MAX),
            workers: self.workers.unwrap_or_else(default_workers),
            checkpoint_dir,
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    limits: LimitArgs,
    /// Directory receiving one level file per completed order.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from this level file.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Also write the full report (timings and extremal graphs) here.
    #[arg(long)]
    report: Option<PathBuf>,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(e: impl fmt::Display) -> Self {
        Failure { code: USAGE, msg: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Result<u8, Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match cmd {
        Command::Compute(args) => compute(args, &mut out)?,
        Command::Check { graph, spec } => check(&graph, &spec.spec()?, &mut out)?,
        Command::Bound { graph, k } => bound(&graph, k, &mut out)?,
        Command::ProbeConjecture { k_max, limits } => probe(k_max, &limits, &mut out)?,
        Command::Encode { graphs } => codec(graphs, encode_line, &mut out)?,
        Command::Decode { graphs } => codec(graphs, decode_line, &mut out)?,
        Command::OracleVerify { n, spec, workers } => oracle_verify(n, &spec.spec()?, workers, &mut out)?,
    };
    out.flush().map_err(Failure::usage)?;
    Ok(code)
}

fn parse_graph(g6: &str) -> Result<Graph, Failure> {
    graph6::decode(g6).map_err(|e| Failure::usage(format!("malformed graph6 `{g6}`: {e}")))
}

fn compute(args: ComputeArgs, out: &mut impl Write) -> Result<u8, Failure> {
    let spec = args.spec.spec()?;
    let limits = args.limits.limits(args.checkpoint);
    let mut log = |order: usize, count: usize, secs: f64| eprintln!("order {order:2}: {count} graphs ({secs:.3}s)");
    let result = match &args.resume {
        Some(file) => driver::checkpoint_resume_with(&spec, file, &limits, &mut log),
        None => driver::compute_number_with(&spec, &limits, &mut log),
    };
    let report = result.map_err(Failure::usage)?;
    if let Some(path) = &args.report {
        let text = report::render(&report, RenderOptions::default()).map_err(Failure::usage)?;
        std::fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    print_report(&report, out).map_err(Failure::usage)?;
    Ok(if report.is_complete() { 0 } else { CAPPED })
}

/// The report without timings, then one graph6 line per extremal graph.
fn print_report(report: &RunReport, out: &mut impl Write) -> io::Result<()> {
    let opts = RenderOptions { extremal: false, timing: false };
    let text = report::render(report, opts).map_err(io::Error::other)?;
    write!(out, "{text}")?;
    if report.extremal_count.is_some() {
        writeln!(out, "\n# extremal graphs")?;
        for g in &report.extremal {
            writeln!(out, "{}", graph6::encode(g))?;
        }
    }
    Ok(())
}

fn show(set: trisparse::VertexSet) -> String {
    let vs: Vec<String> = set.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", vs.join(", "))
}

fn check(g6: &str, spec: &ProblemSpec, out: &mut impl Write) -> Result<u8, Failure> {
    let g = parse_graph(g6)?;
    let w = |r: io::Result<()>| r.map_err(Failure::usage);
    let mut ok = true;
    if !g.is_triangle_free() {
        w(writeln!(out, "contains a triangle"))?;
        ok = false;
    }
    let k = spec.k();
    match has_k_sparse_set(&g, k, spec.j()) {
        Some(s) => {
            w(writeln!(out, "found {k}-sparse {}-set {}", spec.j(), show(s.set)))?;
            ok = false;
        }
        None => w(writeln!(out, "no {k}-sparse {}-set", spec.j()))?,
    }
    if let Some(i) = spec.i() {
        match has_k_dense_set(&g, k, i) {
            Some(d) => {
                w(writeln!(out, "found {k}-dense {i}-set {}", show(d.set)))?;
                ok = false;
            }
            None => w(writeln!(out, "no {k}-dense {i}-set"))?,
        }
    }
    Ok(if ok { 0 } else { VERDICT_FALSE })
}

fn bound(g6: &str, k: usize, out: &mut impl Write) -> Result<u8, Failure> {
    let g = parse_graph(g6)?;
    let w = sparse_bound_witness(&g, k);
    let b = recoloring_bound(g.order(), g.max_degree(), k);
    writeln!(out, "bound {b}\nsize {}\nwitness {}", w.set.len(), show(w.set)).map_err(Failure::usage)?;
    Ok(0)
}

fn probe(k_max: usize, limits: &LimitArgs, out: &mut impl Write) -> Result<u8, Failure> {
    let limits = limits.limits(None);
    let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
    let w = |r: io::Result<()>| r.map_err(Failure::usage);
    w(writeln!(out, "k\ti\tpredicted\tvalue\textremal\twitness\tverdict"))?;
    let mut code = 0;
    for k in 2..=k_max {
        for i in 2..=k {
            let row: ProbeRow = driver::probe_cell(k, i, &limits).map_err(Failure::usage)?;
            let verdict = match row.status {
                RunStatus::Capped { .. } => {
                    code = CAPPED;
                    "capped"
                }
                _ if row.agrees() => "agree",
                _ => {
                    if code == 0 {
                        code = VERDICT_FALSE;
                    }
                    "disagree"
                }
            };
            w(writeln!(
                out,
                "{k}\t{i}\t{}\t{}\t{}\t{}\t{verdict}",
                row.predicted,
                opt(row.value),
                opt(row.extremal_count),
                if row.bipartite_witness_found { "yes" } else { "no" },
            ))?;
        }
    }
    Ok(code)
}

/// `N u-v u-v ...` to graph6.
fn encode_line(line: &str) -> Result<String, String> {
    let mut parts = line.split_whitespace();
    let order: usize =
        parts.next().ok_or("empty edge list")?.parse().map_err(|_| format!("`{line}`: expected the order first"))?;
    let mut edges = Vec::new();
    for e in parts {
        let (u, v) = e
            .split_once('-')
            .and_then(|(u, v)| Some((u.parse().ok()?, v.parse().ok()?)))
            .ok_or_else(|| format!("`{e}` is not an edge `u-v`"))?;
        edges.push((u, v));
    }
    let g = Graph::from_edges(order, &edges).map_err(|e| e.to_string())?;
    Ok(graph6::encode(&g))
}

fn decode_line(line: &str) -> Result<String, String> {
    let g = graph6::decode(line).map_err(|e| format!("malformed graph6 `{line}`: {e}"))?;
    let mut s = g.order().to_string();
    for (u, v) in g.edges() {
        s.push_str(&format!(" {u}-{v}"));
    }
    Ok(s)
}

fn codec(args: Vec<String>, f: fn(&str) -> Result<String, String>, out: &mut impl Write) -> Result<u8, Failure> {
    let lines: Vec<String> = if args.is_empty() {
        io::stdin().lock().lines().collect::<Result<_, _>>().map_err(Failure::usage)?
    } else {
        args
    };
    for line in lines.iter().map(|l| l.trim()).filter(|l| !l.is_empty()) {
        let converted = f(line).map_err(Failure::usage)?;
        writeln!(out, "{converted}").map_err(Failure::usage)?;
    }
    Ok(0)
}

fn oracle_verify(n: usize, spec: &ProblemSpec, workers: Option<usize>, out: &mut impl Write) -> Result<u8, Failure> {
    let opts = StepOptions { workers: workers.unwrap_or_else(default_workers), ..StepOptions::default() };
    let rows = oracle::compare_levels(n, spec, &opts).map_err(Failure::usage)?;
    let mut code = 0;
    for c in &rows {
        let verdict = if c.agrees() { "ok" } else { "MISMATCH" };
        if !c.agrees() {
            code = VERDICT_FALSE;
        }
        writeln!(out, "order {}: oracle {} enumerator {} {verdict}", c.order, c.oracle_count, c.enumerator_count)
            .map_err(Failure::usage)?;
    }
    Ok(code)
}
