//! Named invariant suites and the reports they produce.
//!
//! Every suite checks one module's invariants for alphabets up to
//! `max_n` (capped per suite where the exhaustive check would blow up) and
//! collects failures with a serialization of the offending object.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::counting::{count_by_increasing_edges, increasing_edge_polynomial};
use crate::eil::{eil_basis, EilNormalizer};
use crate::graph::{
    color_map, enumerate_trees, graph_text, inverse_color_map, oriented_tree, pattern_violations,
    OrientedGraph,
};
use crate::lie::{generate_relations, relation_audit_with, LieNormalizer, RelationKind};
use crate::lincombo::LinCombo;
use crate::monomial::{basis_monomial, enumerate_monomials, is_basis_monomial, random_monomial, tree_of_monomial};
use crate::orders::{ind_compare, linear_extension, op_reachability, respects, OrderVerdict};
use crate::pairing::{
    gamma_relations_at, graphs_with_edges, monomial_fibres, pair, pair_combo, pairing_matrix,
    pairing_matrix_with_columns, random_graph, random_section, random_theta_relation,
    theta_relation_generators, PlaneIndex,
};
use crate::poisson::{
    com_block, com_matrix, enumerate_forests, exp_formula_check, pair_com, partitions_of,
    poisson_basis, random_poisson, Forest, PoissonNormalizer,
};
use crate::rooted::enumerate_rooted_trees;
use crate::LetterSet;

/// Failures kept per suite; the count beyond this is still reported.
const MAX_RECORDED: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_n: usize,
    pub seed: u64,
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_n: 4,
            seed: 7,
            samples: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub check: String,
    pub reproducer: String,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub suite: String,
    pub n_range: (usize, usize),
    pub checks: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suite": self.suite,
            "n_range": [self.n_range.0, self.n_range.1],
            "checks": self.checks,
            "failure_count": self.failure_count,
            "failures": self.failures.iter().map(|f| serde_json::json!({
                "check": f.check, "reproducer": f.reproducer,
            })).collect::<Vec<_>>(),
            "wall_ms": self.wall_time.as_millis() as u64,
            "passed": self.passed(),
        })
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<10} n={}..{}  {:>9} checks  {:>3} failures  {:>8.2?}  {}",
            self.suite,
            self.n_range.0,
            self.n_range.1,
            self.checks,
            self.failure_count,
            self.wall_time,
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        for x in &self.failures {
            write!(f, "\n    {}: {}", x.check, x.reproducer.replace('\n', "\\n"))?;
        }
        Ok(())
    }
}

/// Accumulates checks for one suite.
pub struct Tally {
    checks: u64,
    failure_count: u64,
    failures: Vec<Failure>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failure_count: 0,
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, check: &str, reproducer: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_RECORDED {
                self.failures.push(Failure {
                    check: check.to_string(),
                    reproducer: reproducer(),
                });
            }
        }
    }

    pub fn error(&mut self, check: &str, e: impl fmt::Display) {
        self.check(false, check, || e.to_string());
    }
}

/// A named battery of invariant checks.
pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Largest alphabet the suite will touch, given the requested one.
    fn cap(&self, max_n: usize) -> usize;
    fn check(&self, cfg: &VerifyConfig, t: &mut Tally);
}

/// Runs a suite and times it.
pub fn run_suite(suite: &dyn Suite, cfg: &VerifyConfig) -> VerificationReport {
    let start = Instant::now();
    let mut t = Tally::new();
    suite.check(cfg, &mut t);
    VerificationReport {
        suite: suite.name().to_string(),
        n_range: (1, suite.cap(cfg.max_n)),
        checks: t.checks,
        failure_count: t.failure_count,
        failures: t.failures,
        wall_time: start.elapsed(),
    }
}

fn rng_for(cfg: &VerifyConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

struct TreesSuite;

impl Suite for TreesSuite {
    fn name(&self) -> &'static str {
        "trees"
    }
    fn description(&self) -> &'static str {
        "rooted trees, the color map bijection and the rank n^(n-1) of the tree basis"
    }
    fn cap(&self, max_n: usize) -> usize {
        max_n.min(6)
    }
    fn check(&self, cfg: &VerifyConfig, t: &mut Tally) {
        for n in 1..=self.cap(cfg.max_n) {
            let rooted = match enumerate_rooted_trees(n) {
                Ok(r) => r,
                Err(e) => return t.error("enumerate", e),
            };
            t.check(rooted.len() == n.pow(n as u32 - 1), "rooted count", || format!("n {n}: {}", rooted.len()));
            let mut image = BTreeSet::new();
            for r in &rooted {
                let g = color_map(r);
                t.check(pattern_violations(&g.to_graph()).is_empty(), "pattern avoidance", || g.to_string());
                t.check(inverse_color_map(&g).as_ref() == Ok(r), "inverse color map", || g.to_string());
                image.insert(g);
            }
            t.check(image.len() == rooted.len(), "color map injective", || format!("n {n}"));
            for g in &image {
                let b = basis_monomial(g);
                t.check(is_basis_monomial(&b), "b_G is a basis monomial", || b.to_string());
                t.check(tree_of_monomial(&b) == *g, "tree of b_G", || b.to_string());
            }
        }
    }
}

struct CountingSuite;

impl Suite for CountingSuite {
    fn name(&self) -> &'static str {
        "counting"
    }
    fn description(&self) -> &'static str {
        "trees by increasing edges against the product formula"
    }
    fn cap(&self, max_n: usize) -> usize {
        max_n.min(8)
    }
    fn check(&self, cfg: &VerifyConfig, t: &mut Tally) {
        let mut fact = 1u64;
        for n in 1..=self.cap(cfg.max_n) {
            if n > 1 {
                fact *= n as u64 - 1;
            }
            match (count_by_increasing_edges(n), increasing_edge_polynomial(n)) {
                (Ok(c), Ok(p)) => {
                    t.check(c.a == p, "count = polynomial", || format!("n {n}: {:?} vs {p:?}", c.a));
                    t.check(c.is_symmetric(), "symmetry", || format!("n {n}: {:?}", c.a));
                    t.check(c.a[n - 1] == fact, "a(n,n-1) = (n-1)!", || format!("n {n}: {}", c.a[n - 1]));
                }
                (Err(e), _) | (_, Err(e)) => t.error("count", e),
            }
        }
    }
}

struct LcSuite;

impl Suite for LcSuite {
    fn name(&self) -> &'static str {
        "lc"
    }
    fn description(&self) -> &'static str {
        "Algorithm LC outputs basis monomials and preserves every pairing"
    }
    fn cap(&self, max_n: usize) -> usize {
        max_n.min(5)
    }
    fn check(&self, cfg: &VerifyConfig, t: &mut Tally) {
        let mut lc = LieNormalizer::new();
        let mut rng = rng_for(cfg, 3);
        for n in 1..=self.cap(cfg.max_n) {
            let rows: Vec<OrientedGraph> = match enumerate_trees(n) {
                Ok(ts) => ts.iter().map(oriented_tree).collect(),
                Err(e) => return t.error("enumerate", e),
            };
            let monomials = if n <= 4 {
                enumerate_monomials(n).unwrap_or_default()
            } else {
                (0..cfg.samples).map(|_| random_monomial(LetterSet::full(n), &mut rng)).collect()
            };
            for m in monomials {
                let out = match lc.normalize(&m) {
                    Ok(o) => o,
                    Err(e) => {
                        t.check(false, "lc terminates", || format!("{m}: {e}"));
                        continue;
                    }
                };
                t.check(out.keys().all(is_basis_monomial), "lc outputs basis", || m.to_string());
                let idx = PlaneIndex::new(&m);
                let ok = rows.iter().all(|g| idx.pair(g) == out.iter().map(|(b, c)| c * pair(g, b)).sum::<i64>());
                t.check(ok, "lc pairing oracle", || m.to_string());
            }
        }
    }
}

struct MatrixSuite;

impl Suite for MatrixSuite {
    fn name(&self) -> &'static str {
        "matrix"
    }
    fn description(&self) -> &'static str {
        "the pairing matrix is upper triangular with unit diagonal under <=_ind"
    }
    fn cap(&self, max_n: usize) -> usize {
        max_n.min(5)
    }
    fn check(&self, cfg: &VerifyConfig, t: &mut Tally) {
        for n in 1..=self.cap(cfg.max_n) {
            match linear_extension(n).and_then(|o| pairing_matrix(n, &o)) {
                Ok(m) => {
                    let low = m.lower_violations();
                    t.check(low.is_empty(), "triangular", || {
                        let (i, j) = low[0];
                        format!("n {n}: row {} column {}", m.order[i], m.columns[j])
                    });
                    let bad = m.nonunit_diagonal();
                    t.check(bad.is_empty(), "unit diagonal", || format!("n {n}: {}", m.order[bad[0]]));
                }
                Err(e) => t.error("matrix", e),
            }
        }
    }
}

struct RelationsSuite;

impl RelationsSuite {
    fn check_theta(t: &mut Tally, alpha: &LinCombo<crate::monomial::Monomial>, graphs: &[OrientedGraph]) {
        for g in graphs {
            let v = pair_combo(&LinCombo::single(g.clone(), 1), alpha);
            t.check(v == 0, "theta relation vanishes", || format!("{alpha} against {}", graph_text(g)));
        }
    }

    fn check_gamma(t: &mut Tally, beta: &LinCombo<OrientedGraph>, monomials: &[crate::monomial::Monomial]) {
        for m in monomials {
            let v = pair_combo(beta, &LinCombo::single(m.clone(), 1));
            t.check(v == 0, "gamma relation vanishes", || format!("{beta} against {m}"));
        }
    }
}

impl Suite for RelationsSuite {
    fn name(&self) -> &'static str {
        "relations"
    }
    fn description(&self) -> &'static str {
        "the pairing kills the relation spaces on both sides"
    }
    fn cap(&self, max_n: usize) -> usize {
        max_n.min(5)
    }
    fn check(&self, cfg: &VerifyConfig, t: &mut Tally) {
        let mut rng = rng_for(cfg, 5);
        for n in 2..=self.cap(cfg.max_n) {
            let full = LetterSet::full(n);
            for kind in RelationKind::ALL {
                if n <= 3 {
                    let graphs = graphs_with_edges(full, n - 1);
                    for alpha in theta_relation_generators(n, kind).unwrap_or_default() {
                        Self::check_theta(t, &alpha, &graphs);
                    }
                    let monomials = enumerate_monomials(n).unwrap_or_default();
                    let gens: BTreeSet<_> = graphs.iter().flat_map(|g| gamma_relations_at(g, kind)).collect();
                    for beta in &gens {
                        Self::check_gamma(t, beta, &monomials);
                    }
                    continue;
                }
                let per_kind = cfg.samples.div_ceil(RelationKind::ALL.len()).max(1);
                for _ in 0..per_kind {
                    let graphs: Vec<OrientedGraph> = (0..8).map(|_| random_graph(full, n - 1, &mut rng)).collect();
                    if let Some(alpha) = random_theta_relation(n, kind, &mut rng) {
                        Self::check_theta(t, &alpha, &graphs);
                    }
                    let g = random_graph(full, n - 1, &mut rng);
                    let sites = gamma_relations_at(&g, kind);
                    if let Some(beta) = sites.choose(&mut rng) {
                        let monomials: Vec<_> = (0..8).map(|_| random_monomial(full, &mut rng)).collect();
                        Self::check_gamma(t, beta, &monomials);
                    }
                }
            }
        }
    }
}

struct AuditSuite;

impl Suite for AuditSuite {
    fn name(&self) -> &'static str {
        "audit"
    }
    fn description(&self) -> &'static str {
        "LC sends sampled relation instances of every kind to zero"
    }
    fn cap(&self, max_n: usize) -> usize {
        max_n.min(5)
    }
    fn check(&self, cfg: &VerifyConfig, t: &mut Tally) {
        let mut lc = LieNormalizer::new();
        for n in 2..=self.cap(cfg.max_n) {
            for (i, kind) in RelationKind::ALL.into_iter().enumerate() {
                let seed = cfg.seed.wrapping_add(100 * n as u64 + i as u64);
                for r in generate_relations(n, kind, n, seed).take(cfg.samples) {
                    t.check(relation_audit_with(&mut lc, &r), "relation normalizes to zero", || {
                        format!("{kind} in {}: {}", r.context, r.combo)
                    });
                }
            }
        }
    }
}

struct EilSuite;

impl Suite for EilSuite {
    fn name(&self) -> &'static str {
        "eil"
    }
    fn description(&self) -> &'static str {
        "Eil normalization kills degenerate graphs, fixes O_n and preserves pairings"
    }
    fn cap(&self, max_n: usize) -> usize {
        max_n.min(5)
    }
    fn check(&self, cfg: &VerifyConfig, t: &mut Tally) {
        let mut rng = rng_for(cfg, 7);
        let mut eil = EilNormalizer::new();
        for n in 2..=self.cap(cfg.max_n) {
            let full = LetterSet::full(n);
            let basis = eil_basis(n).unwrap_or_default();
            for b in &basis {
                let out = eil.normalize(b);
                t.check(out == Ok(LinCombo::single(b.clone(), 1)), "basis fixed", || graph_text(b));
            }
            let columns: Vec<_> = enumerate_trees(n).unwrap_or_default().iter().map(basis_monomial).collect();
            for _ in 0..cfg.samples {
                let k = rng.gen_range(0..=n + 1);
                let g = random_graph(full, k, &mut rng);
                let out = match eil.normalize(&g) {
                    Ok(o) => o,
                    Err(e) => {
                        t.check(false, "eil terminates", || format!("{}: {e}", graph_text(&g)));
                        continue;
                    }
                };
                if !g.is_tree() {
                    t.check(out.is_empty(), "degenerate graph vanishes", || graph_text(&g));
                    continue;
                }
                t.check(out.keys().all(OrientedGraph::is_basis_graph), "eil outputs basis", || graph_text(&g));
                let ok = columns
                    .iter()
                    .all(|c| pair(&g, c) == out.iter().map(|(h, k)| k * pair(h, c)).sum::<i64>());
                t.check(ok, "eil pairing oracle", || graph_text(&g));
            }
        }
    }
}

struct OrdersSuite;

impl Suite for OrdersSuite {
    fn name(&self) -> &'static str {
        "orders"
    }
    fn description(&self) -> &'static str {
        "<=_ind is a partial order refining <=_op; the linear extension respects it"
    }
    fn cap(&self, max_n: usize) -> usize {
        max_n.min(4)
    }
    fn check(&self, cfg: &VerifyConfig, t: &mut Tally) {
        for n in 1..=self.cap(cfg.max_n) {
            let trees = enumerate_trees(n).unwrap_or_default();
            let m = trees.len();
            let verdict: Vec<Vec<OrderVerdict>> =
                trees.iter().map(|g| trees.iter().map(|h| ind_compare(g, h)).collect()).collect();
            for i in 0..m {
                for j in 0..m {
                    let ok = match verdict[i][j] {
                        OrderVerdict::Less => verdict[j][i] == OrderVerdict::Greater,
                        OrderVerdict::Equal => i == j,
                        _ => true,
                    };
                    t.check(ok, "antisymmetry", || format!("{} vs {}", trees[i], trees[j]));
                    if verdict[i][j] != OrderVerdict::Less {
                        continue;
                    }
                    for k in 0..m {
                        if verdict[j][k] == OrderVerdict::Less {
                            t.check(verdict[i][k] == OrderVerdict::Less, "transitivity", || {
                                format!("{} < {} < {}", trees[i], trees[j], trees[k])
                            });
                        }
                    }
                }
            }
            match op_reachability(n) {
                Ok(reach) => {
                    t.check(reach.is_acyclic(), "op graph acyclic", || format!("n {n}"));
                    for g in &trees {
                        for h in &trees {
                            if g != h && reach.le(g, h) {
                                t.check(ind_compare(g, h) == OrderVerdict::Less, "ind refines op", || {
                                    format!("{g} vs {h}")
                                });
                            }
                        }
                    }
                }
                Err(e) => t.error("op reachability", e),
            }
            match linear_extension(n) {
                Ok(order) => t.check(
                    respects(&order, |a, b| ind_compare(a, b) == OrderVerdict::Less),
                    "linear extension",
                    || format!("n {n}"),
                ),
                Err(e) => t.error("linear extension", e),
            }
        }
    }
}

struct SectionsSuite;

impl Suite for SectionsSuite {
    fn name(&self) -> &'static str {
        "sections"
    }
    fn description(&self) -> &'static str {
        "random sections of the tree map pair triangularly against O_n"
    }
    fn cap(&self, max_n: usize) -> usize {
        max_n.min(4)
    }
    fn check(&self, cfg: &VerifyConfig, t: &mut Tally) {
        let mut rng = rng_for(cfg, 11);
        for n in 2..=self.cap(cfg.max_n) {
            let (order, fibres) = match (linear_extension(n), monomial_fibres(n)) {
                (Ok(o), Ok(f)) => (o, f),
                (Err(e), _) | (_, Err(e)) => return t.error("setup", e),
            };
            for _ in 0..20 {
                let section = random_section(&order, &fibres, &mut rng)
                    .and_then(|s| pairing_matrix_with_columns(n, &order, s));
                match section {
                    Ok(m) => t.check(m.is_upper_triangular() && m.nonunit_diagonal().is_empty(), "section triangular", || {
                        m.columns.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
                    }),
                    Err(e) => t.error("section", e),
                }
            }
        }
    }
}

struct PoissonSuite;

impl Suite for PoissonSuite {
    fn name(&self) -> &'static str {
        "poisson"
    }
    fn description(&self) -> &'static str {
        "forest basis rank, the exponential formula and Poisson normalization"
    }
    fn cap(&self, max_n: usize) -> usize {
        max_n.min(5)
    }
    fn check(&self, cfg: &VerifyConfig, t: &mut Tally) {
        let cap = self.cap(cfg.max_n);
        for n in 1..=cap {
            match poisson_basis(n) {
                Ok(b) => t.check(b.len() == (n + 1).pow(n as u32 - 1), "rank", || format!("n {n}: {}", b.len())),
                Err(e) => t.error("basis", e),
            }
        }
        match exp_formula_check(cfg.max_n.clamp(8, 20)) {
            Ok(rows) => {
                for r in rows {
                    t.check(r.ok(), "exponential formula", || format!("n {}: {} vs {}", r.n, r.convolution, r.closed_form));
                }
            }
            Err(e) => t.error("exponential formula", e),
        }
        let mut rng = rng_for(cfg, 13);
        let mut norm = PoissonNormalizer::new();
        for n in 2..=cap.min(4) {
            let rows: Vec<OrientedGraph> = enumerate_forests(n).unwrap_or_default().iter().map(Forest::graph).collect();
            for _ in 0..cfg.samples.min(500) {
                let m = random_poisson(LetterSet::full(n), &mut rng);
                match norm.normalize(&m) {
                    Ok(out) => {
                        let ok = rows
                            .iter()
                            .all(|g| pair_com(g, &m) == out.iter().map(|(b, k)| k * pair_com(g, b)).sum::<i64>());
                        t.check(ok, "poisson pairing oracle", || m.to_string());
                    }
                    Err(e) => t.check(false, "poisson terminates", || format!("{m}: {e}")),
                }
            }
        }
    }
}

struct ComSuite;

impl Suite for ComSuite {
    fn name(&self) -> &'static str {
        "com"
    }
    fn description(&self) -> &'static str {
        "the commutative pairing matrix is block diagonal with Kronecker blocks"
    }
    fn cap(&self, max_n: usize) -> usize {
        max_n.min(4)
    }
    fn check(&self, cfg: &VerifyConfig, t: &mut Tally) {
        let cap = self.cap(cfg.max_n);
        for n in 1..=cap.min(3) {
            match com_matrix(n) {
                Ok(r) => {
                    for b in &r.blocks {
                        t.check(b.passes(), "block", || b.partition.to_string());
                    }
                }
                Err(e) => t.error("com matrix", e),
            }
        }
        if cap >= 4 {
            let mut rng = rng_for(cfg, 17);
            let parts = partitions_of(LetterSet::full(4));
            for p in parts.choose_multiple(&mut rng, 5) {
                match com_block(p) {
                    Ok(b) => t.check(b.passes(), "block", || p.to_string()),
                    Err(e) => t.error("com block", e),
                }
            }
        }
    }
}

/// Suites by name.
pub struct SuiteRegistry {
    suites: BTreeMap<&'static str, Box<dyn Suite>>,
}

impl Default for SuiteRegistry {
    fn default() -> Self {
        let mut r = SuiteRegistry {
            suites: BTreeMap::new(),
        };
        r.register(Box::new(TreesSuite));
        r.register(Box::new(CountingSuite));
        r.register(Box::new(LcSuite));
        r.register(Box::new(MatrixSuite));
        r.register(Box::new(RelationsSuite));
        r.register(Box::new(AuditSuite));
        r.register(Box::new(EilSuite));
        r.register(Box::new(OrdersSuite));
        r.register(Box::new(SectionsSuite));
        r.register(Box::new(PoissonSuite));
        r.register(Box::new(ComSuite));
        r
    }
}

impl SuiteRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, s: Box<dyn Suite>) {
        self.suites.insert(s.name(), s);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Suite> {
        self.suites.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.suites.keys().copied().collect()
    }

    /// Runs the named suites in parallel; reports come back in name order.
    pub fn run(&self, names: &[&str], cfg: &VerifyConfig) -> Vec<VerificationReport> {
        let picked: Vec<&dyn Suite> = names.iter().filter_map(|n| self.get(n)).collect();
        picked.par_iter().map(|s| run_suite(*s, cfg)).collect()
    }

    pub fn run_all(&self, cfg: &VerifyConfig) -> Vec<VerificationReport> {
        self.run(&self.names(), cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lists_every_suite() {
        let r = SuiteRegistry::new();
        assert_eq!(
            r.names(),
            vec!["audit", "com", "counting", "eil", "lc", "matrix", "orders", "poisson", "relations", "sections", "trees"]
        );
        assert!(r.get("nope").is_none());
    }

    #[test]
    fn small_run_passes() {
        let cfg = VerifyConfig {
            max_n: 3,
            seed: 1,
            samples: 50,
        };
        for rep in SuiteRegistry::new().run_all(&cfg) {
            assert!(rep.passed(), "{rep}");
            assert!(rep.checks > 0, "{rep}");
        }
    }

    #[test]
    fn failures_are_capped_and_counted() {
        let mut t = Tally::new();
        for i in 0..30 {
            t.check(i % 2 == 0, "parity", || i.to_string());
        }
        assert_eq!((t.checks, t.failure_count, t.failures.len()), (30, 15, 15));
        for _ in 0..30 {
            t.check(false, "x", String::new);
        }
        assert_eq!(t.failures.len(), MAX_RECORDED);
        assert_eq!(t.failure_count, 45);
    }

    #[test]
    fn report_json_shape() {
        let rep = run_suite(&CountingSuite, &VerifyConfig { max_n: 3, ..Default::default() });
        let j = rep.to_json();
        assert_eq!(j["suite"], "counting");
        assert_eq!(j["passed"], true);
        assert_eq!(j["n_range"], serde_json::json!([1, 3]));
    }
}
