use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use liebra::counting::{count_by_increasing_edges, increasing_edge_polynomial};
use liebra::eil::{eil_basis, eil_normalize};
use liebra::graph::{
    enumerate_trees, graph_text, oriented_to_json, oriented_tree, parse_graph,
    OrientedGraph, TwoColoredTree,
};
use liebra::lie::lc_normalize;
use liebra::lincombo::LinCombo;
use liebra::monomial::{basis_monomial, enumerate_monomials, parse_monomial, Monomial};
use liebra::orders::{index_vector, op_reachability, OrderRegistry};
use liebra::pairing::{pair, pairing_matrix};
use liebra::poisson::{
    com_matrix, enumerate_forests, pair_com, parse_poisson, poisson_basis, poisson_normalize,
    PoissonMonomial,
};
use liebra::rooted::enumerate_rooted_trees;
use liebra::verify::{SuiteRegistry, VerifyConfig};
use liebra::LiebraError;

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "liebra", version, about = "Bases and pairing certificates for algebras with two compatible Lie brackets")]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List trees, monomials or forests on x1..xn.
    Enumerate {
        #[arg(value_enum)]
        what: EnumerateWhat,
        #[arg(long)]
        n: usize,
    },
    /// Counting checks.
    Count {
        #[arg(value_enum)]
        what: CountWhat,
        #[arg(long)]
        n: usize,
    },
    /// Print a basis.
    Basis {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
    },
    /// Normalize an expression or graph into the basis.
    Normalize {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        input: Input,
    },
    /// Pair a graph with a monomial.
    Pair {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        expr: String,
    },
    /// Build a pairing matrix and check its shape.
    Matrix {
        /// `com` for the commutative matrix; omit for the Lie one.
        #[arg(value_enum)]
        which: Option<MatrixWhich>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "ind")]
        order: String,
        #[arg(long = "check", value_enum)]
        checks: Vec<Check>,
    },
    /// Inspect the orders on trees.
    Order {
        #[arg(value_enum)]
        what: OrderWhat,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Run invariant suites: `all`, `list`, or suite names.
    Verify {
        #[arg(default_value = "all")]
        suites: Vec<String>,
        #[arg(long = "max-n", alias = "n", default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    #[arg(long)]
    expr: Option<String>,
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumerateWhat {
    Trees,
    Rooted,
    Monomials,
    Forests,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountWhat {
    IncEdges,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Lie,
    Eil,
    Poisson,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixWhich {
    Com,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Triangular,
    Unimodular,
    Blocks,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderWhat {
    Ind,
    Lex,
    Op,
    Opdag,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

impl From<LiebraError> for CliError {
    fn from(e: LiebraError) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// What a command produced: text lines, a JSON body, and whether every
/// requested check passed.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output { text, json, ok: true }
    }
}

fn read_graph(path: &PathBuf) -> Result<OrientedGraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Domain(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_graph(&text)?)
}

fn combo_lines<K: Ord + std::fmt::Display>(c: &LinCombo<K>) -> String {
    if c.is_empty() {
        return "0".into();
    }
    c.iter().map(|(k, v)| format!("{v:+} * {k}")).collect::<Vec<_>>().join("\n")
}

fn combo_json<K: Ord>(c: &LinCombo<K>, key: impl Fn(&K) -> Value) -> Value {
    c.iter().map(|(k, v)| json!({"coeff": v, "term": key(k)})).collect()
}

fn tree_json(g: &TwoColoredTree) -> Value {
    json!({"root": g.root().index(), "graph": oriented_to_json(&oriented_tree(g))})
}

fn enumerate(what: EnumerateWhat, n: usize) -> Result<Output, CliError> {
    let (lines, items): (Vec<String>, Vec<Value>) = match what {
        EnumerateWhat::Trees => enumerate_trees(n)?
            .iter()
            .map(|g| (format!("{g}  root x{}", g.root().index()), tree_json(g)))
            .unzip(),
        EnumerateWhat::Rooted => enumerate_rooted_trees(n)?
            .iter()
            .map(|t| {
                let edges: Vec<String> = t.edges().map(|(p, c)| format!("{}>{}", p.index(), c.index())).collect();
                let s = format!("root x{}: {}", t.root().index(), edges.join(" "));
                (s.clone(), json!(s))
            })
            .unzip(),
        EnumerateWhat::Monomials => enumerate_monomials(n)?.iter().map(|m| (m.to_string(), m.to_json())).unzip(),
        EnumerateWhat::Forests => enumerate_forests(n)?
            .iter()
            .map(|f| (f.to_string(), json!(f.to_string())))
            .unzip(),
    };
    let count = lines.len();
    Ok(Output::new(
        format!("{}\n{count} items", lines.join("\n")),
        json!({"n": n, "count": count, "items": items}),
    ))
}

fn count(n: usize) -> Result<Output, CliError> {
    let table = count_by_increasing_edges(n)?;
    let poly = increasing_edge_polynomial(n)?;
    let matched = table.a == poly;
    let show = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    let mut out = Output::new(
        format!("{} | poly: {} | {}", show(&table.a), show(&poly), if matched { "MATCH" } else { "MISMATCH" }),
        json!({"n": n, "counts": table.a, "polynomial": poly, "match": matched}),
    );
    out.ok = matched;
    Ok(out)
}

fn basis(kind: Kind, n: usize) -> Result<Output, CliError> {
    let (lines, items): (Vec<String>, Vec<Value>) = match kind {
        Kind::Lie => enumerate_trees(n)?
            .iter()
            .map(|g| {
                let b = basis_monomial(g);
                (format!("{b}  <-  {g}"), json!({"monomial": b.to_json(), "text": b.to_string(), "tree": tree_json(g)}))
            })
            .unzip(),
        Kind::Eil => eil_basis(n)?.iter().map(|g| (g.to_string(), oriented_to_json(g))).unzip(),
        Kind::Poisson => poisson_basis(n)?.iter().map(|m| (m.to_string(), m.to_json())).unzip(),
    };
    let count = lines.len();
    Ok(Output::new(
        format!("{}\n{count} elements", lines.join("\n")),
        json!({"n": n, "count": count, "basis": items}),
    ))
}

fn within(letters: liebra::LetterSet, n: Option<usize>) -> Result<(), CliError> {
    match (letters.max(), n) {
        (Some(x), Some(n)) if x.index() as usize > n => Err(LiebraError::LetterOutOfRange { letter: x, n }.into()),
        _ => Ok(()),
    }
}

/// `--n` bounds the alphabet; the expression may use a subset of it.
fn normalize(kind: Kind, n: Option<usize>, input: &Input) -> Result<Output, CliError> {
    match (kind, &input.expr, &input.graph) {
        (Kind::Lie, Some(e), _) => {
            let m = parse_monomial(e, None)?;
            within(m.letters(), n)?;
            let c = lc_normalize(&m)?;
            Ok(Output::new(combo_lines(&c), json!({"input": m.to_string(), "result": combo_json(&c, Monomial::to_json)})))
        }
        (Kind::Poisson, Some(e), _) => {
            let m = parse_poisson(e, None)?;
            within(m.letters(), n)?;
            let c = poisson_normalize(&m)?;
            Ok(Output::new(
                combo_lines(&c),
                json!({"input": m.to_string(), "result": combo_json(&c, PoissonMonomial::to_json)}),
            ))
        }
        (Kind::Eil, _, Some(path)) => {
            let g = read_graph(path)?;
            if let Some(n) = n {
                if g.n() != n {
                    return Err(CliError::Domain(format!("graph has {} vertices, expected {n}", g.n())));
                }
            }
            let c = eil_normalize(&g)?;
            Ok(Output::new(combo_lines(&c), json!({"input": graph_text(&g), "result": combo_json(&c, oriented_to_json)})))
        }
        (Kind::Eil, Some(_), None) => Err(CliError::Usage("normalize eil takes --graph".into())),
        (_, None, Some(_)) => Err(CliError::Usage("normalize lie/poisson takes --expr".into())),
        (_, None, None) => Err(CliError::Usage("missing --expr or --graph".into())),
    }
}

fn pair_cmd(graph: &PathBuf, expr: &str) -> Result<Output, CliError> {
    let g = read_graph(graph)?;
    let value = match parse_monomial(expr, None) {
        Ok(m) => pair(&g, &m),
        Err(LiebraError::Syntax { .. }) => pair_com(&g, &parse_poisson(expr, None)?),
        Err(e) => return Err(e.into()),
    };
    Ok(Output::new(value.to_string(), json!({"graph": graph_text(&g), "expr": expr, "value": value})))
}

fn lie_matrix(n: usize, order: &str, checks: &[Check]) -> Result<Output, CliError> {
    let registry = OrderRegistry::new();
    let strategy = registry.get(order).ok_or_else(|| {
        CliError::Usage(format!("unknown order '{order}' (expected one of {})", registry.names().join(", ")))
    })?;
    if checks.contains(&Check::Blocks) {
        return Err(CliError::Usage("--check blocks applies to `matrix com`".into()));
    }
    let m = pairing_matrix(n, &strategy.order(n)?)?;
    let d = m.dim();
    let lower = m.lower_violations();
    let nonunit = m.nonunit_diagonal();
    let checks: Vec<Check> = if checks.is_empty() { vec![Check::Triangular, Check::Unimodular] } else { checks.to_vec() };
    let mut ok = true;
    let mut violations = Vec::new();
    if checks.contains(&Check::Triangular) && !lower.is_empty() {
        ok = false;
        violations.extend(lower.iter().map(|&(i, j)| format!("({i},{j}) row {} column {}", m.order[i], m.columns[j])));
    }
    if checks.contains(&Check::Unimodular) && !nonunit.is_empty() {
        ok = false;
        violations.extend(nonunit.iter().map(|&i| format!("({i},{i}) {}", m.order[i])));
    }
    let shape = if lower.is_empty() {
        "upper triangular".to_string()
    } else {
        format!("not triangular ({} entries below the diagonal)", lower.len())
    };
    let diagonal = if nonunit.is_empty() {
        "diagonal ±1".to_string()
    } else {
        format!("{} non-unit diagonal entries", nonunit.len())
    };
    let parts = [format!("{d}×{d} {shape}"), diagonal];
    let mut text = parts.join(", ");
    for v in &violations {
        text.push_str("\n  ");
        text.push_str(v);
    }
    let mut out = Output::new(
        text,
        json!({
            "n": n,
            "order": order,
            "dim": d,
            "rows": m.order.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "columns": m.columns.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "upper_triangular": lower.is_empty(),
            "unit_diagonal": nonunit.is_empty(),
            "determinant": m.triangular_determinant(),
            "violations": violations,
        }),
    );
    out.ok = ok;
    Ok(out)
}

fn com_matrix_cmd(n: usize) -> Result<Output, CliError> {
    let r = com_matrix(n)?;
    let mut lines = Vec::new();
    let mut blocks = Vec::new();
    for b in &r.blocks {
        lines.push(format!(
            "{}  {}×{}  kronecker {}  cross-zero {}  det {}",
            b.partition,
            b.dim(),
            b.dim(),
            if b.matches_kronecker() { "yes" } else { "NO" },
            if b.cross_nonzero.is_empty() { "yes" } else { "NO" },
            b.det_mod_p
        ));
        blocks.push(json!({
            "partition": b.partition.to_string(),
            "dim": b.dim(),
            "matches_kronecker": b.matches_kronecker(),
            "cross_nonzero": b.cross_nonzero.len(),
            "det": b.det_mod_p,
            "passes": b.passes(),
        }));
    }
    let d = r.dim();
    lines.push(format!(
        "{d}×{d} in {} blocks: {}",
        r.blocks.len(),
        if r.passes() { "block diagonal, Kronecker blocks, nonsingular" } else { "FAILED" }
    ));
    let mut out = Output::new(lines.join("\n"), json!({"n": n, "dim": d, "blocks": blocks, "passes": r.passes()}));
    out.ok = r.passes();
    Ok(out)
}

fn order_cmd(what: OrderWhat, n: usize, list: bool, dot: bool) -> Result<Output, CliError> {
    let name = match what {
        OrderWhat::Opdag => {
            let reach = op_reachability(n)?;
            if !dot {
                let text = format!("{} trees, {} moves, acyclic: {}", reach.trees.len(), reach.move_count(), reach.is_acyclic());
                return Ok(Output::new(
                    text,
                    json!({"n": n, "trees": reach.trees.len(), "moves": reach.move_count(), "acyclic": reach.is_acyclic()}),
                ));
            }
            let d = reach.to_dot();
            return Ok(Output::new(d.trim_end().to_string(), json!({"n": n, "dot": d})));
        }
        OrderWhat::Ind => "ind",
        OrderWhat::Lex => "lex",
        OrderWhat::Op => "op",
    };
    let registry = OrderRegistry::new();
    let strategy = registry.get(name).expect("built-in order");
    let order = strategy.order(n)?;
    let rows: Vec<(String, String)> = order.iter().map(|g| (g.to_string(), index_vector(g).to_string())).collect();
    let text = if list {
        rows.iter().enumerate().map(|(i, (g, iv))| format!("{i:>4}  {iv}  {g}")).collect::<Vec<_>>().join("\n")
    } else {
        format!("{}: {} trees", strategy.description(), rows.len())
    };
    Ok(Output::new(
        text,
        json!({"n": n, "order": name, "trees": rows.iter().map(|(g, iv)| json!({"tree": g, "index": iv})).collect::<Vec<_>>()}),
    ))
}

fn verify(suites: &[String], cfg: VerifyConfig) -> Result<Output, CliError> {
    let registry = SuiteRegistry::new();
    if suites.iter().any(|s| s == "list") {
        let lines: Vec<String> = registry
            .names()
            .iter()
            .map(|n| format!("{n:<10} {}", registry.get(n).expect("listed").description()))
            .collect();
        return Ok(Output::new(lines.join("\n"), json!({"suites": registry.names()})));
    }
    let names: Vec<&str> = if suites.iter().any(|s| s == "all") {
        registry.names()
    } else {
        for s in suites {
            if registry.get(s).is_none() {
                return Err(CliError::Usage(format!(
                    "unknown suite '{s}' (expected all, list, or one of {})",
                    registry.names().join(", ")
                )));
            }
        }
        suites.iter().map(String::as_str).collect()
    };
    let reports = registry.run(&names, &cfg);
    let ok = reports.iter().all(|r| r.passed());
    let mut lines: Vec<String> = reports.iter().map(|r| r.to_string()).collect();
    lines.push(format!(
        "{} suites, {} checks, {} failures (max-n {}, seed {}, samples {})",
        reports.len(),
        reports.iter().map(|r| r.checks).sum::<u64>(),
        reports.iter().map(|r| r.failure_count).sum::<u64>(),
        cfg.max_n,
        cfg.seed,
        cfg.samples
    ));
    let mut out = Output::new(
        lines.join("\n"),
        json!({
            "max_n": cfg.max_n, "seed": cfg.seed, "samples": cfg.samples,
            "passed": ok,
            "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        }),
    );
    out.ok = ok;
    Ok(out)
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Enumerate { what, n } => enumerate(*what, *n),
        Command::Count { what: CountWhat::IncEdges, n } => count(*n),
        Command::Basis { kind, n } => basis(*kind, *n),
        Command::Normalize { kind, n, input } => normalize(*kind, *n, input),
        Command::Pair { graph, expr } => pair_cmd(graph, expr),
        Command::Matrix { which: Some(MatrixWhich::Com), n, checks, .. } => {
            if checks.iter().any(|c| *c != Check::Blocks) {
                return Err(CliError::Usage("`matrix com` supports only --check blocks".into()));
            }
            com_matrix_cmd(*n)
        }
        Command::Matrix { which: None, n, order, checks } => lie_matrix(*n, order, checks),
        Command::Order { what, n, list, dot } => order_cmd(*what, *n, *list, *dot),
        Command::Verify { suites, max_n, seed, samples } => verify(
            suites,
            VerifyConfig {
                max_n: *max_n,
                seed: *seed,
                samples: *samples,
            },
        ),
    }
}

fn configure_threads() {
    let Ok(v) = std::env::var("LIEBRA_THREADS") else {
        return;
    };
    match v.trim().parse::<usize>() {
        Ok(k) if k > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
        _ => eprintln!("warning: ignoring LIEBRA_THREADS={v:?}"),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                let mut body = json!({"schema": SCHEMA});
                if let (Value::Object(dst), Value::Object(src)) = (&mut body, out.json) {
                    dst.extend(src);
                }
                body["ok"] = json!(out.ok);
                emit(&serde_json::to_string_pretty(&body).expect("json"));
            } else {
                emit(&out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            if cli.json {
                emit(&json!({"schema": SCHEMA, "ok": false, "error": msg}).to_string());
            }
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
