//! Orders on pattern-avoiding trees: the index vector, the partial order
//! `<=_ind`, the move relation `->_op` with its closure `<=_op`, and linear
//! extensions used to index pairing matrices.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, VecDeque};
use std::fmt;

use crate::error::{LiebraError, Result};
use crate::graph::{enumerate_trees, TwoColoredTree};
use crate::letter::{Color, Letter};

/// Per-vertex incoming edge colors: `+1` red, `-1` blue, `0` at the root.
/// Entries follow the vertex set in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexVector(pub Vec<i8>);

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| format!("{v:+}").replace("+0", "0")).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn index_vector(g: &TwoColoredTree) -> IndexVector {
    IndexVector(
        g.vertices()
            .iter()
            .map(|x| match g.parent(x) {
                None => 0,
                Some((_, Color::Red)) => 1,
                Some((_, Color::Blue)) => -1,
            })
            .collect(),
    )
}

/// Whether the rightmost nonzero entry of `a - b` is negative.
pub fn rlex_less(a: &IndexVector, b: &IndexVector) -> bool {
    assert_eq!(a.0.len(), b.0.len(), "index vectors of different lengths");
    match a.0.iter().zip(&b.0).rev().find(|(x, y)| x != y) {
        Some((x, y)) => x < y,
        None => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderVerdict {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// How the third clause of `<=_ind` pairs up 1-level subgraphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SubgraphMatching {
    /// Pair subgraphs with the same vertex set; the two families of vertex
    /// sets must coincide.
    #[default]
    VertexSet,
    /// Pair subgraphs in increasing order of their roots; paired subgraphs
    /// must have the same vertex set.
    RootLabel,
}

fn one_level_subgraphs(g: &TwoColoredTree, matching: SubgraphMatching) -> Vec<TwoColoredTree> {
    let mut subs: Vec<TwoColoredTree> =
        g.children(g.root()).into_iter().map(|(c, _)| g.subtree(c)).collect();
    match matching {
        SubgraphMatching::VertexSet => subs.sort_by_key(|s| s.vertices()),
        SubgraphMatching::RootLabel => subs.sort_by_key(|s| s.root()),
    }
    subs
}

/// `g <=_ind h`. Trees on different vertex sets are never related.
pub fn ind_le(g: &TwoColoredTree, h: &TwoColoredTree, matching: SubgraphMatching) -> bool {
    if g.vertices() != h.vertices() {
        return false;
    }
    if g.n() == 1 {
        return true;
    }
    let (ig, ih) = (index_vector(g), index_vector(h));
    if g.red_count() == h.red_count() && rlex_less(&ig, &ih) {
        return true;
    }
    if ig != ih {
        return false;
    }
    let (sg, sh) = (one_level_subgraphs(g, matching), one_level_subgraphs(h, matching));
    if sg.len() != sh.len() {
        return sg.len() < sh.len();
    }
    sg.iter()
        .zip(&sh)
        .all(|(a, b)| a.vertices() == b.vertices() && ind_le(a, b, matching))
}

pub fn ind_compare(g: &TwoColoredTree, h: &TwoColoredTree) -> OrderVerdict {
    ind_compare_with(g, h, SubgraphMatching::default())
}

pub fn ind_compare_with(
    g: &TwoColoredTree,
    h: &TwoColoredTree,
    matching: SubgraphMatching,
) -> OrderVerdict {
    if g == h {
        OrderVerdict::Equal
    } else if ind_le(g, h, matching) {
        OrderVerdict::Less
    } else if ind_le(h, g, matching) {
        OrderVerdict::Greater
    } else {
        OrderVerdict::Incomparable
    }
}

/// Detaches the subtree at `y` and hangs it directly below the root by an
/// edge `{r, y}` of the color of the edge above `y`. A 1-level `y` gives `g`
/// back.
pub fn operated_from(g: &TwoColoredTree, y: Letter) -> Result<TwoColoredTree> {
    if !g.vertices().contains(y) {
        return Err(LiebraError::LetterAbsent(y));
    }
    let Some((_, color)) = g.parent(y) else {
        return Err(LiebraError::RootVertex(y));
    };
    if g.level(y) == 1 {
        return Ok(*g);
    }
    g.without_subtree(y)
        .join(&g.subtree(y), g.root(), y, color)
        .map_err(|e| LiebraError::Internal(format!("operating on {g} at {y}: {e}")))
}

/// All `h != g` with `g ->_op h`.
pub fn op_moves(g: &TwoColoredTree) -> Result<BTreeSet<TwoColoredTree>> {
    let r = g.root();
    let mut out = BTreeSet::new();
    for y in g.vertices().iter() {
        if y != r && g.level(y) >= 2 {
            out.insert(operated_from(g, y)?);
        }
    }
    for (x, color) in g.children(r) {
        let rest = g.without_subtree(x);
        for h in op_moves(&g.subtree(x))? {
            let joined = rest.join(&h, r, h.root(), color).map_err(|e| {
                LiebraError::Internal(format!("splicing {h} into {g} below {r}: {e}"))
            })?;
            out.insert(joined);
        }
    }
    out.remove(g);
    Ok(out)
}

/// The relation `<=_op` on all trees on `x1..xn`, as explicit reachability.
#[derive(Debug, Clone)]
pub struct OpReachability {
    pub trees: Vec<TwoColoredTree>,
    index: HashMap<TwoColoredTree, usize>,
    /// Direct moves, by index.
    pub moves: Vec<Vec<usize>>,
    reach: Vec<Vec<bool>>,
}

impl OpReachability {
    pub fn position(&self, g: &TwoColoredTree) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// `g <=_op h`.
    pub fn le(&self, g: &TwoColoredTree, h: &TwoColoredTree) -> bool {
        match (self.position(g), self.position(h)) {
            (Some(a), Some(b)) => self.reach[a][b],
            _ => false,
        }
    }

    pub fn le_index(&self, a: usize, b: usize) -> bool {
        self.reach[a][b]
    }

    pub fn move_count(&self) -> usize {
        self.moves.iter().map(Vec::len).sum()
    }

    /// Whether the move graph has no directed cycle.
    pub fn is_acyclic(&self) -> bool {
        (0..self.trees.len())
            .all(|a| (0..self.trees.len()).all(|b| a == b || !(self.reach[a][b] && self.reach[b][a])))
    }

    /// The move graph in DOT syntax.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph op {\n");
        for (a, t) in self.trees.iter().enumerate() {
            s.push_str(&format!("  n{a} [label=\"{t}\"];\n"));
        }
        for (a, targets) in self.moves.iter().enumerate() {
            for b in targets {
                s.push_str(&format!("  n{a} -> n{b};\n"));
            }
        }
        s.push_str("}\n");
        s
    }
}

pub fn op_reachability(n: usize) -> Result<OpReachability> {
    let trees = enumerate_trees(n)?;
    let index: HashMap<TwoColoredTree, usize> =
        trees.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let mut moves = Vec::with_capacity(trees.len());
    for t in &trees {
        let targets = op_moves(t)?
            .iter()
            .map(|h| {
                index
                    .get(h)
                    .copied()
                    .ok_or_else(|| LiebraError::Internal(format!("move target {h} not a tree")))
            })
            .collect::<Result<Vec<_>>>()?;
        moves.push(targets);
    }
    let mut reach = vec![vec![false; trees.len()]; trees.len()];
    for (start, row) in reach.iter_mut().enumerate() {
        let mut queue = VecDeque::from([start]);
        row[start] = true;
        while let Some(a) = queue.pop_front() {
            for &b in &moves[a] {
                if !row[b] {
                    row[b] = true;
                    queue.push_back(b);
                }
            }
        }
    }
    Ok(OpReachability {
        trees,
        index,
        moves,
        reach,
    })
}

/// Kahn's algorithm on the strict relation `less`, always emitting the
/// available tree with the smallest canonical key.
fn topological_order(
    trees: Vec<TwoColoredTree>,
    less: impl Fn(usize, usize) -> bool,
) -> Result<Vec<TwoColoredTree>> {
    let m = trees.len();
    let mut succ = vec![Vec::new(); m];
    let mut indegree = vec![0usize; m];
    for a in 0..m {
        for b in 0..m {
            if a != b && less(a, b) {
                succ[a].push(b);
                indegree[b] += 1;
            }
        }
    }
    let keys: Vec<String> = trees.iter().map(|t| t.canonical_key()).collect();
    let mut ready: BinaryHeap<Reverse<(&str, usize)>> = (0..m)
        .filter(|&a| indegree[a] == 0)
        .map(|a| Reverse((keys[a].as_str(), a)))
        .collect();
    let mut out = Vec::with_capacity(m);
    while let Some(Reverse((_, a))) = ready.pop() {
        out.push(trees[a]);
        for &b in &succ[a] {
            indegree[b] -= 1;
            if indegree[b] == 0 {
                ready.push(Reverse((keys[b].as_str(), b)));
            }
        }
    }
    if out.len() != m {
        return Err(LiebraError::Internal("order relation has a cycle".into()));
    }
    Ok(out)
}

/// A linear extension of `<=_ind` on the trees on `x1..xn`; ties are broken
/// by the canonical edge-list text.
pub fn linear_extension(n: usize) -> Result<Vec<TwoColoredTree>> {
    linear_extension_with(n, SubgraphMatching::default())
}

pub fn linear_extension_with(n: usize, matching: SubgraphMatching) -> Result<Vec<TwoColoredTree>> {
    let trees = enumerate_trees(n)?;
    let t = trees.clone();
    topological_order(trees, move |a, b| {
        ind_compare_with(&t[a], &t[b], matching) == OrderVerdict::Less
    })
}

/// Whether `order` never lists a tree after one it is strictly below.
pub fn respects(order: &[TwoColoredTree], less: impl Fn(&TwoColoredTree, &TwoColoredTree) -> bool) -> bool {
    (0..order.len()).all(|i| (0..i).all(|j| !less(&order[i], &order[j])))
}

/// A named way of ordering the trees on `x1..xn`.
pub trait OrderStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn order(&self, n: usize) -> Result<Vec<TwoColoredTree>>;
}

struct IndOrder;

impl OrderStrategy for IndOrder {
    fn name(&self) -> &'static str {
        "ind"
    }
    fn description(&self) -> &'static str {
        "linear extension of <=_ind, ties broken by canonical edge list"
    }
    fn order(&self, n: usize) -> Result<Vec<TwoColoredTree>> {
        linear_extension(n)
    }
}

struct OpOrder;

impl OrderStrategy for OpOrder {
    fn name(&self) -> &'static str {
        "op"
    }
    fn description(&self) -> &'static str {
        "linear extension of the move closure <=_op (explicit reachability; small n only)"
    }
    fn order(&self, n: usize) -> Result<Vec<TwoColoredTree>> {
        let reach = op_reachability(n)?;
        let trees = reach.trees.clone();
        topological_order(trees, |a, b| reach.le_index(a, b))
    }
}

struct LexOrder;

impl OrderStrategy for LexOrder {
    fn name(&self) -> &'static str {
        "lex"
    }
    fn description(&self) -> &'static str {
        "enumeration order (Prüfer sequence, then root); not an extension of <=_ind"
    }
    fn order(&self, n: usize) -> Result<Vec<TwoColoredTree>> {
        enumerate_trees(n)
    }
}

/// Order strategies by name.
pub struct OrderRegistry {
    strategies: BTreeMap<&'static str, Box<dyn OrderStrategy>>,
}

impl Default for OrderRegistry {
    fn default() -> Self {
        let mut r = OrderRegistry {
            strategies: BTreeMap::new(),
        };
        r.register(Box::new(IndOrder));
        r.register(Box::new(OpOrder));
        r.register(Box::new(LexOrder));
        r
    }
}

impl OrderRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, s: Box<dyn OrderStrategy>) {
        self.strategies.insert(s.name(), s);
    }

    pub fn get(&self, name: &str) -> Option<&dyn OrderStrategy> {
        self.strategies.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.keys().copied().collect()
    }
}
