//! Two-colored graphs, pattern-avoiding two-colored trees and oriented graphs.
//!
//! A two-colored tree avoiding the three patterns `1r3r2`, `2b1b3`, `1r2b3`
//! is the same thing as a rooted tree in which every red edge is increasing
//! and every blue edge is decreasing. [`TwoColoredTree`] stores such a tree
//! by its parent map; edge colors are implied by the labels.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LiebraError, Result};
use crate::letter::{check_alphabet, Color, Letter, LetterSet, MAX_LETTERS};
use crate::rooted::RootedTree;

/// Undirected colored edge, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: Letter,
    pub v: Letter,
    pub color: Color,
}

impl Edge {
    /// Normalizes the endpoint order. Panics on a loop.
    pub fn new(a: Letter, b: Letter, color: Color) -> Edge {
        assert_ne!(a, b, "loops are not edges");
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Edge { u, v, color }
    }

    /// The consistent orientation: red `u -> v`, blue `v -> u`.
    pub fn consistent(self) -> DirectedEdge {
        match self.color {
            Color::Red => DirectedEdge::new(self.u, self.v, Color::Red),
            Color::Blue => DirectedEdge::new(self.v, self.u, Color::Blue),
        }
    }
}

/// Oriented colored edge `src -> dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedEdge {
    pub src: Letter,
    pub dst: Letter,
    pub color: Color,
}

impl DirectedEdge {
    pub fn new(src: Letter, dst: Letter, color: Color) -> Self {
        assert_ne!(src, dst, "loops are not edges");
        DirectedEdge { src, dst, color }
    }

    pub fn reversed(self) -> Self {
        DirectedEdge {
            src: self.dst,
            dst: self.src,
            color: self.color,
        }
    }

    pub fn is_consistent(self) -> bool {
        match self.color {
            Color::Red => self.src < self.dst,
            Color::Blue => self.src > self.dst,
        }
    }

    pub fn undirected(self) -> Edge {
        Edge::new(self.src, self.dst, self.color)
    }

    pub fn touches(self, x: Letter) -> bool {
        self.src == x || self.dst == x
    }

    pub fn other_end(self, x: Letter) -> Letter {
        if self.src == x {
            self.dst
        } else {
            self.src
        }
    }
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}>{}", self.color, self.src.index(), self.dst.index())
    }
}

/// The three forbidden patterns on `i < j < k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pattern {
    /// `{i,k}` and `{j,k}` both red.
    #[serde(rename = "1r3r2")]
    P1r3r2,
    /// `{i,j}` and `{i,k}` both blue.
    #[serde(rename = "2b1b3")]
    P2b1b3,
    /// `{i,j}` red and `{j,k}` blue.
    #[serde(rename = "1r2b3")]
    P1r2b3,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pattern::P1r3r2 => "1r3r2",
            Pattern::P2b1b3 => "2b1b3",
            Pattern::P1r2b3 => "1r2b3",
        })
    }
}

/// One occurrence of a forbidden pattern at letters `i < j < k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub pattern: Pattern,
    pub triple: (Letter, Letter, Letter),
}

impl Violation {
    pub fn into_error(self) -> LiebraError {
        let (i, j, k) = self.triple;
        LiebraError::PatternViolation {
            pattern: self.pattern,
            i: i.index(),
            j: j.index(),
            k: k.index(),
        }
    }
}

/// An undirected edge-colored graph; parallel edges are kept.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredGraph {
    vertices: LetterSet,
    edges: Vec<Edge>,
}

impl ColoredGraph {
    pub fn new(vertices: LetterSet, mut edges: Vec<Edge>) -> Result<Self> {
        for e in &edges {
            for x in [e.u, e.v] {
                if !vertices.contains(x) {
                    return Err(LiebraError::LetterOutOfRange {
                        letter: x,
                        n: vertices.max().map_or(0, |m| m.index() as usize),
                    });
                }
            }
        }
        edges.sort();
        Ok(ColoredGraph { vertices, edges })
    }

    /// Graph on the full alphabet `{x_1, ..., x_n}`.
    pub fn on_alphabet(n: usize, edges: Vec<Edge>) -> Result<Self> {
        check_alphabet(n)?;
        Self::new(LetterSet::full(n), edges)
    }

    pub fn vertices(&self) -> LetterSet {
        self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertices.len()
            && connected(self.vertices, self.edges.iter().map(|e| (e.u, e.v)))
    }
}

impl fmt::Display for ColoredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_edge_list(
            f,
            self.vertices,
            self.edges
                .iter()
                .map(|e| format!("{} {} {}", e.color, e.u.index(), e.v.index())),
        )
    }
}

fn write_edge_list(
    f: &mut fmt::Formatter<'_>,
    vertices: LetterSet,
    items: impl Iterator<Item = String>,
) -> fmt::Result {
    let items: Vec<String> = items.collect();
    if items.is_empty() {
        let vs: Vec<String> = vertices.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", vs.join(" "))
    } else {
        write!(f, "({})", items.join("; "))
    }
}

pub(crate) fn connected(
    vertices: LetterSet,
    edges: impl Iterator<Item = (Letter, Letter)> + Clone,
) -> bool {
    let Some(start) = vertices.min() else {
        return true;
    };
    let mut reached = LetterSet::singleton(start);
    loop {
        let mut grew = false;
        for (a, b) in edges.clone() {
            let (ha, hb) = (reached.contains(a), reached.contains(b));
            if ha != hb {
                reached.insert(a);
                reached.insert(b);
                grew = true;
            }
        }
        if !grew {
            return reached == vertices;
        }
    }
}

/// All occurrences of the forbidden patterns, sorted.
///
/// Two edges form a pattern exactly when both point into a common vertex
/// under the consistent orientation.
pub fn pattern_violations(g: &ColoredGraph) -> Vec<Violation> {
    let arcs: Vec<DirectedEdge> = g.edges.iter().map(|e| e.consistent()).collect();
    let mut out = Vec::new();
    for (a_idx, a) in arcs.iter().enumerate() {
        for b in &arcs[a_idx + 1..] {
            if a.dst != b.dst || a.src == b.src {
                continue;
            }
            let v = a.dst;
            let (lo, hi) = if a.src < b.src { (a, b) } else { (b, a) };
            let violation = match (lo.color, hi.color) {
                (Color::Red, Color::Red) => Violation {
                    pattern: Pattern::P1r3r2,
                    triple: (lo.src, hi.src, v),
                },
                (Color::Blue, Color::Blue) => Violation {
                    pattern: Pattern::P2b1b3,
                    triple: (v, lo.src, hi.src),
                },
                // A red edge comes from below and a blue one from above.
                _ => Violation {
                    pattern: Pattern::P1r2b3,
                    triple: (lo.src, v, hi.src),
                },
            };
            out.push(violation);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// A pattern-avoiding two-colored tree on an arbitrary finite letter set,
/// i.e. a rooted tree whose red edges increase and blue edges decrease.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoColoredTree {
    vertices: LetterSet,
    root: Letter,
    /// `parent[i]` is the index of the parent of `x_i`, or 0.
    parent: [u8; MAX_LETTERS + 1],
}

impl TwoColoredTree {
    /// The single-vertex tree.
    pub fn singleton(x: Letter) -> Self {
        TwoColoredTree {
            vertices: LetterSet::singleton(x),
            root: x,
            parent: [0; MAX_LETTERS + 1],
        }
    }

    /// Validates a colored graph as a pattern-avoiding tree.
    pub fn from_graph(g: &ColoredGraph) -> Result<Self> {
        if g.vertices.is_empty() {
            return Err(LiebraError::EmptyAlphabet);
        }
        if !g.is_tree() {
            return Err(LiebraError::NotATree(format!(
                "{} edges on {} vertices{}",
                g.edges.len(),
                g.vertices.len(),
                if connected(g.vertices, g.edges.iter().map(|e| (e.u, e.v))) {
                    ""
                } else {
                    ", disconnected"
                }
            )));
        }
        if let Some(v) = pattern_violations(g).first() {
            return Err(v.into_error());
        }
        let mut parent = [0u8; MAX_LETTERS + 1];
        let mut heads = LetterSet::EMPTY;
        for e in &g.edges {
            let a = e.consistent();
            parent[a.dst.index() as usize] = a.src.index();
            heads.insert(a.dst);
        }
        let root = g
            .vertices
            .difference(heads)
            .min()
            .ok_or_else(|| LiebraError::Internal("tree without a source".into()))?;
        Ok(TwoColoredTree {
            vertices: g.vertices,
            root,
            parent,
        })
    }

    /// Builds a tree on the full alphabet from colored edges.
    pub fn from_edges(n: usize, edges: Vec<Edge>) -> Result<Self> {
        Self::from_graph(&ColoredGraph::on_alphabet(n, edges)?)
    }

    /// Builds a tree from a parent map given as `(child, parent)` pairs.
    pub fn from_parent_pairs(
        vertices: LetterSet,
        root: Letter,
        pairs: impl IntoIterator<Item = (Letter, Letter)>,
    ) -> Self {
        let mut parent = [0u8; MAX_LETTERS + 1];
        for (c, p) in pairs {
            parent[c.index() as usize] = p.index();
        }
        let t = TwoColoredTree {
            vertices,
            root,
            parent,
        };
        debug_assert!(t.check_shape());
        t
    }

    fn check_shape(&self) -> bool {
        self.vertices.contains(self.root)
            && self.parent[self.root.index() as usize] == 0
            && self.vertices.iter().all(|x| {
                x == self.root || {
                    let p = self.parent[x.index() as usize];
                    p != 0 && self.vertices.contains(Letter::new(p))
                }
            })
    }

    pub fn vertices(&self) -> LetterSet {
        self.vertices
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn root(&self) -> Letter {
        self.root
    }

    /// Parent of `x` and the color of the edge joining them.
    pub fn parent(&self, x: Letter) -> Option<(Letter, Color)> {
        match self.parent[x.index() as usize] {
            0 => None,
            p => {
                let p = Letter::new(p);
                Some((p, if p < x { Color::Red } else { Color::Blue }))
            }
        }
    }

    /// Children of `x` in increasing order, with edge colors.
    pub fn children(&self, x: Letter) -> Vec<(Letter, Color)> {
        self.vertices
            .iter()
            .filter(|c| self.parent[c.index() as usize] == x.index())
            .map(|c| (c, if x < c { Color::Red } else { Color::Blue }))
            .collect()
    }

    /// The colored edges, sorted.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .vertices
            .iter()
            .filter_map(|c| self.parent(c).map(|(p, col)| Edge::new(p, c, col)))
            .collect();
        out.sort();
        out
    }

    pub fn to_graph(&self) -> ColoredGraph {
        ColoredGraph {
            vertices: self.vertices,
            edges: self.edges(),
        }
    }

    pub fn red_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|&c| matches!(self.parent(c), Some((_, Color::Red))))
            .count()
    }

    pub fn blue_count(&self) -> usize {
        self.n() - 1 - self.red_count()
    }

    /// Vertices of the subtree hanging at `x` (including `x`).
    pub fn descendants(&self, x: Letter) -> LetterSet {
        let mut set = LetterSet::singleton(x);
        loop {
            let mut grew = false;
            for c in self.vertices.difference(set).iter() {
                let p = self.parent[c.index() as usize];
                if p != 0 && set.contains(Letter::new(p)) {
                    set.insert(c);
                    grew = true;
                }
            }
            if !grew {
                return set;
            }
        }
    }

    /// The subtree rooted at `x`.
    pub fn subtree(&self, x: Letter) -> TwoColoredTree {
        let vs = self.descendants(x);
        self.restrict(vs, x)
    }

    /// The tree with the subtree rooted at the non-root vertex `x` removed.
    pub fn without_subtree(&self, x: Letter) -> TwoColoredTree {
        debug_assert_ne!(x, self.root);
        let vs = self.vertices.difference(self.descendants(x));
        self.restrict(vs, self.root)
    }

    fn restrict(&self, vertices: LetterSet, root: Letter) -> TwoColoredTree {
        let mut parent = [0u8; MAX_LETTERS + 1];
        for c in vertices.iter() {
            if c != root {
                parent[c.index() as usize] = self.parent[c.index() as usize];
            }
        }
        TwoColoredTree {
            vertices,
            root,
            parent,
        }
    }

    /// Joins two disjoint trees by an edge between `a` (in `self`) and `b`
    /// (in `other`); fails if the result is not pattern-avoiding.
    pub fn join(&self, other: &TwoColoredTree, a: Letter, b: Letter, color: Color) -> Result<Self> {
        let mut edges = self.edges();
        edges.extend(other.edges());
        edges.push(Edge::new(a, b, color));
        TwoColoredTree::from_graph(&ColoredGraph::new(self.vertices.union(other.vertices), edges)?)
    }

    /// Depth of `x` below the root.
    pub fn level(&self, x: Letter) -> usize {
        let mut d = 0;
        let mut v = x;
        while let Some((p, _)) = self.parent(v) {
            v = p;
            d += 1;
        }
        d
    }

    /// Moves the tree onto `to` along the order-preserving bijection
    /// between the two vertex sets. Colors are unchanged.
    pub fn transport(&self, to: LetterSet) -> TwoColoredTree {
        assert_eq!(to.len(), self.vertices.len(), "vertex sets differ in size");
        let mut map = [0u8; MAX_LETTERS + 1];
        for (a, b) in self.vertices.iter().zip(to.iter()) {
            map[a.index() as usize] = b.index();
        }
        let mut parent = [0u8; MAX_LETTERS + 1];
        for x in self.vertices.iter() {
            let p = self.parent[x.index() as usize];
            if p != 0 {
                parent[map[x.index() as usize] as usize] = map[p as usize];
            }
        }
        TwoColoredTree {
            vertices: to,
            root: Letter::new(map[self.root.index() as usize]),
            parent,
        }
    }

    /// Stable text form `(r 1 2; b 1 3)` used for tie-breaks and display.
    pub fn canonical_key(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for TwoColoredTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_graph().fmt(f)
    }
}

/// Colors each increasing edge red and each decreasing edge blue.
pub fn color_map(t: &RootedTree) -> TwoColoredTree {
    TwoColoredTree::from_parent_pairs(
        LetterSet::full(t.n()),
        t.root(),
        t.edges().map(|(p, c)| (c, p)),
    )
}

/// Recovers the rooted tree; the root is the unique source.
pub fn inverse_color_map(g: &TwoColoredTree) -> Result<RootedTree> {
    if !g.vertices.is_initial() {
        return Err(LiebraError::NotATree(format!(
            "vertex set {} is not an initial segment of the alphabet",
            g.vertices
        )));
    }
    RootedTree::from_parents(g.vertices.iter().map(|x| g.parent(x).map(|(p, _)| p)).collect())
}

/// Validates an arbitrary colored graph and recovers its rooted tree.
pub fn inverse_color_map_graph(g: &ColoredGraph) -> Result<RootedTree> {
    inverse_color_map(&TwoColoredTree::from_graph(g)?)
}

/// All pattern-avoiding trees on `{x_1..x_n}`, in rooted-tree enumeration order.
pub fn enumerate_trees(n: usize) -> Result<Vec<TwoColoredTree>> {
    Ok(crate::rooted::rooted_trees(n)?.map(|t| color_map(&t)).collect())
}

/// All pattern-avoiding trees on an arbitrary letter set, transported from
/// `{x_1..x_k}` by the order-preserving relabeling.
pub fn trees_on(letters: LetterSet) -> Result<Vec<TwoColoredTree>> {
    Ok(enumerate_trees(letters.len())?
        .into_iter()
        .map(|t| t.transport(letters))
        .collect())
}

/// A uniformly random pattern-avoiding tree on `letters` (random Prüfer
/// sequence and random root).
pub fn random_tree<R: Rng + ?Sized>(letters: LetterSet, rng: &mut R) -> TwoColoredTree {
    let k = letters.len();
    assert!(k >= 1, "random_tree needs a nonempty letter set");
    if k == 1 {
        return TwoColoredTree::singleton(letters.min().expect("nonempty"));
    }
    let seq: Vec<u8> = (0..k - 2).map(|_| rng.gen_range(1..=k as u8)).collect();
    let edges = crate::rooted::prufer_decode(k, &seq);
    let root = Letter::new(rng.gen_range(1..=k as u8));
    let t = RootedTree::from_edges(k, &edges, root).expect("decoded tree is valid");
    color_map(&t).transport(letters)
}

/// An oriented two-colored graph. Parallel edges and disconnection are allowed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedGraph {
    vertices: LetterSet,
    edges: Vec<DirectedEdge>,
}

impl OrientedGraph {
    pub fn new(vertices: LetterSet, mut edges: Vec<DirectedEdge>) -> Result<Self> {
        for e in &edges {
            for x in [e.src, e.dst] {
                if !vertices.contains(x) {
                    return Err(LiebraError::LetterOutOfRange {
                        letter: x,
                        n: vertices.max().map_or(0, |m| m.index() as usize),
                    });
                }
            }
        }
        edges.sort();
        Ok(OrientedGraph { vertices, edges })
    }

    pub fn on_alphabet(n: usize, edges: Vec<DirectedEdge>) -> Result<Self> {
        check_alphabet(n)?;
        Self::new(LetterSet::full(n), edges)
    }

    /// Skips validation; callers guarantee endpoints lie in `vertices`.
    pub(crate) fn from_parts(vertices: LetterSet, mut edges: Vec<DirectedEdge>) -> Self {
        edges.sort();
        OrientedGraph { vertices, edges }
    }

    pub fn vertices(&self) -> LetterSet {
        self.vertices
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    /// Per-edge consistency flags, in edge order.
    pub fn consistency(&self) -> Vec<bool> {
        self.edges.iter().map(|e| e.is_consistent()).collect()
    }

    pub fn is_consistent(&self) -> bool {
        self.edges.iter().all(|e| e.is_consistent())
    }

    pub fn has_multi_edge(&self) -> bool {
        let mut pairs: Vec<(Letter, Letter)> = self
            .edges
            .iter()
            .map(|e| {
                let u = e.undirected();
                (u.u, u.v)
            })
            .collect();
        pairs.sort();
        pairs.windows(2).any(|w| w[0] == w[1])
    }

    pub fn is_connected(&self) -> bool {
        connected(self.vertices, self.edges.iter().map(|e| (e.src, e.dst)))
    }

    /// Connected with acyclic unoriented copy.
    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertices.len() && self.is_connected()
    }

    /// Vertices without incoming edges.
    pub fn sources(&self) -> LetterSet {
        let heads: LetterSet = self.edges.iter().map(|e| e.dst).collect();
        self.vertices.difference(heads)
    }

    /// Whether this graph is the oriented copy of a pattern-avoiding tree:
    /// a consistent tree with a unique source.
    pub fn is_basis_graph(&self) -> bool {
        self.is_consistent() && self.is_tree() && self.sources().len() == 1
    }

    pub fn degree(&self, x: Letter) -> usize {
        self.edges.iter().filter(|e| e.touches(x)).count()
    }

    pub fn with_edges(&self, edges: Vec<DirectedEdge>) -> OrientedGraph {
        OrientedGraph::from_parts(self.vertices, edges)
    }
}

impl fmt::Display for OrientedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_edge_list(f, self.vertices, self.edges.iter().map(|e| e.to_string()))
    }
}

/// The unique consistent orientation of a colored graph.
pub fn oriented_copy(g: &ColoredGraph) -> OrientedGraph {
    OrientedGraph::from_parts(g.vertices, g.edges.iter().map(|e| e.consistent()).collect())
}

/// `o_G` for a pattern-avoiding tree.
pub fn oriented_tree(g: &TwoColoredTree) -> OrientedGraph {
    oriented_copy(&g.to_graph())
}

/// Forgets orientations, keeping colors and parallel edges.
pub fn unoriented_copy(g: &OrientedGraph) -> ColoredGraph {
    let mut edges: Vec<Edge> = g.edges.iter().map(|e| e.undirected()).collect();
    edges.sort();
    ColoredGraph {
        vertices: g.vertices,
        edges,
    }
}

/// Recovers the tree from a basis graph (consistent tree with one source).
pub fn tree_of_basis_graph(g: &OrientedGraph) -> Result<TwoColoredTree> {
    if !g.is_consistent() {
        return Err(LiebraError::NotATree("graph has inconsistent edges".into()));
    }
    TwoColoredTree::from_graph(&unoriented_copy(g))
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    src: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dst: Option<u32>,
    c: Color,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    #[serde(default)]
    n: Option<usize>,
    edges: Vec<JsonEdge>,
}

/// JSON form `{"n":3,"edges":[{"src":1,"dst":2,"c":"r"}]}`.
pub fn oriented_to_json(g: &OrientedGraph) -> serde_json::Value {
    serde_json::json!({
        "n": g.vertices.max().map_or(0, |m| m.index()),
        "edges": g.edges.iter().map(|e| serde_json::json!({
            "src": e.src.index(), "dst": e.dst.index(), "c": e.color
        })).collect::<Vec<_>>(),
    })
}

/// JSON form `{"n":3,"edges":[{"u":1,"v":2,"c":"r"}]}`.
pub fn colored_to_json(g: &ColoredGraph) -> serde_json::Value {
    serde_json::json!({
        "n": g.vertices.max().map_or(0, |m| m.index()),
        "edges": g.edges.iter().map(|e| serde_json::json!({
            "u": e.u.index(), "v": e.v.index(), "c": e.color
        })).collect::<Vec<_>>(),
    })
}

/// Text form accepted by [`parse_graph`]: an `n` line, then one arc per line.
pub fn graph_text(g: &OrientedGraph) -> String {
    let mut out = format!("n {}", g.vertices.max().map_or(0, |m| m.index()));
    for e in &g.edges {
        out.push('\n');
        out.push_str(&e.to_string());
    }
    out
}

enum RawEdge {
    Undirected(Letter, Letter, Color),
    Directed(DirectedEdge),
}

fn finish_graph(n: Option<usize>, raw: Vec<RawEdge>) -> Result<OrientedGraph> {
    let max_letter = raw
        .iter()
        .map(|e| match e {
            RawEdge::Undirected(a, b, _) => a.max(b).index() as usize,
            RawEdge::Directed(d) => d.src.max(d.dst).index() as usize,
        })
        .max()
        .unwrap_or(0);
    let n = n.unwrap_or(max_letter.max(1));
    check_alphabet(n)?;
    if max_letter > n {
        return Err(LiebraError::LetterOutOfRange {
            letter: Letter::new(max_letter as u8),
            n,
        });
    }
    let edges = raw
        .into_iter()
        .map(|e| match e {
            RawEdge::Undirected(a, b, c) => Edge::new(a, b, c).consistent(),
            RawEdge::Directed(d) => d,
        })
        .collect();
    OrientedGraph::on_alphabet(n, edges)
}

/// Parses a graph description. Undirected edges are given their consistent
/// orientation.
///
/// Text lines: `n 4`, `r 1 2` (undirected) or `b 3>1` (oriented); `#` starts
/// a comment. A description starting with `{` is read as JSON.
pub fn parse_graph(text: &str) -> Result<OrientedGraph> {
    if text.trim_start().starts_with('{') {
        return parse_graph_json(text);
    }
    let mut n = None;
    let mut raw = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| LiebraError::GraphFormat {
            line: lineno + 1,
            message,
        };
        let (head, rest) = line.split_at(1);
        if head == "n" {
            let v: usize = rest
                .trim()
                .parse()
                .map_err(|_| err(format!("bad alphabet size '{}'", rest.trim())))?;
            n = Some(v);
            continue;
        }
        let color = Color::from_code(head.chars().next().unwrap_or(' '))
            .ok_or_else(|| err(format!("unknown color '{head}'")))?;
        let letter = |s: &str| -> Result<Letter> {
            let s = s.trim().trim_start_matches('x');
            let i: u32 = s.parse().map_err(|_| err(format!("bad vertex '{s}'")))?;
            Letter::try_new(i).map_err(|_| err(format!("vertex {i} out of range")))
        };
        let rest = rest.trim().replace("->", ">");
        let edge = if let Some((a, b)) = rest.split_once('>') {
            let (a, b) = (letter(a)?, letter(b)?);
            if a == b {
                return Err(err("loop edge".into()));
            }
            RawEdge::Directed(DirectedEdge::new(a, b, color))
        } else {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(err(format!("expected two vertices, got '{rest}'")));
            }
            let (a, b) = (letter(parts[0])?, letter(parts[1])?);
            if a == b {
                return Err(err("loop edge".into()));
            }
            RawEdge::Undirected(a, b, color)
        };
        raw.push(edge);
    }
    finish_graph(n, raw)
}

fn parse_graph_json(text: &str) -> Result<OrientedGraph> {
    let json: JsonGraph = serde_json::from_str(text).map_err(|e| LiebraError::GraphFormat {
        line: e.line(),
        message: e.to_string(),
    })?;
    let mut raw = Vec::new();
    for (i, e) in json.edges.iter().enumerate() {
        let bad = |message: &str| LiebraError::GraphFormat {
            line: 1,
            message: format!("edge {i}: {message}"),
        };
        let pair = match (e.u, e.v, e.src, e.dst) {
            (Some(u), Some(v), None, None) => (u, v, false),
            (None, None, Some(s), Some(d)) => (s, d, true),
            _ => return Err(bad("expected either u/v or src/dst")),
        };
        let a = Letter::try_new(pair.0)?;
        let b = Letter::try_new(pair.1)?;
        if a == b {
            return Err(bad("loop edge"));
        }
        raw.push(if pair.2 {
            RawEdge::Directed(DirectedEdge::new(a, b, e.c))
        } else {
            RawEdge::Undirected(a, b, e.c)
        });
    }
    finish_graph(json.n, raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rooted::enumerate_rooted_trees;
    use std::collections::HashSet;

    fn x(i: u8) -> Letter {
        Letter::new(i)
    }

    fn red(a: u8, b: u8) -> Edge {
        Edge::new(x(a), x(b), Color::Red)
    }

    fn blue(a: u8, b: u8) -> Edge {
        Edge::new(x(a), x(b), Color::Blue)
    }

    #[test]
    fn color_map_examples() {
        let t = RootedTree::from_parents(vec![None, Some(x(1))]).unwrap();
        assert_eq!(color_map(&t).edges(), vec![red(1, 2)]);
        let t = RootedTree::from_parents(vec![Some(x(2)), None]).unwrap();
        assert_eq!(color_map(&t).edges(), vec![blue(1, 2)]);
        // Path x3 - x1 - x2 rooted at x3.
        let t = RootedTree::from_parents(vec![Some(x(3)), Some(x(1)), None]).unwrap();
        let g = color_map(&t);
        assert_eq!(g.edges(), vec![red(1, 2), blue(1, 3)]);
        let o = oriented_tree(&g);
        assert_eq!(
            o.edges(),
            &[
                DirectedEdge::new(x(1), x(2), Color::Red),
                DirectedEdge::new(x(3), x(1), Color::Blue)
            ]
        );
    }

    #[test]
    fn inverse_color_map_examples() {
        let g = TwoColoredTree::from_edges(2, vec![red(1, 2)]).unwrap();
        assert_eq!(inverse_color_map(&g).unwrap().root(), x(1));
        let g = TwoColoredTree::from_edges(2, vec![blue(1, 2)]).unwrap();
        assert_eq!(inverse_color_map(&g).unwrap().root(), x(2));
        let err = TwoColoredTree::from_edges(3, vec![red(1, 3), red(2, 3)]).unwrap_err();
        assert_eq!(
            err,
            LiebraError::PatternViolation {
                pattern: Pattern::P1r3r2,
                i: 1,
                j: 2,
                k: 3
            }
        );
        assert!(matches!(
            TwoColoredTree::from_edges(3, vec![red(1, 2)]),
            Err(LiebraError::NotATree(_))
        ));
    }

    #[test]
    fn pattern_examples() {
        let g = ColoredGraph::on_alphabet(3, vec![red(1, 2), blue(2, 3)]).unwrap();
        assert_eq!(
            pattern_violations(&g),
            vec![Violation {
                pattern: Pattern::P1r2b3,
                triple: (x(1), x(2), x(3))
            }]
        );
        let g = ColoredGraph::on_alphabet(3, vec![blue(1, 2), blue(1, 3)]).unwrap();
        assert_eq!(
            pattern_violations(&g),
            vec![Violation {
                pattern: Pattern::P2b1b3,
                triple: (x(1), x(2), x(3))
            }]
        );
    }

    /// Literal reading of the three patterns over all triples.
    fn brute_force_avoids(g: &ColoredGraph) -> bool {
        let has = |a: u8, b: u8, c: Color| g.edges().contains(&Edge::new(x(a), x(b), c));
        let vs: Vec<u8> = g.vertices().iter().map(Letter::index).collect();
        for &i in &vs {
            for &j in &vs {
                for &k in &vs {
                    if !(i < j && j < k) {
                        continue;
                    }
                    if has(i, k, Color::Red) && has(j, k, Color::Red) {
                        return false;
                    }
                    if has(i, j, Color::Blue) && has(i, k, Color::Blue) {
                        return false;
                    }
                    if has(i, j, Color::Red) && has(j, k, Color::Blue) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn color_map_is_a_bijection_onto_avoiding_trees() {
        for n in 1..=5usize {
            let trees = enumerate_rooted_trees(n).unwrap();
            let images: HashSet<TwoColoredTree> = trees.iter().map(color_map).collect();
            assert_eq!(images.len(), trees.len());
            for t in &trees {
                let g = color_map(t);
                assert!(pattern_violations(&g.to_graph()).is_empty());
                assert!(brute_force_avoids(&g.to_graph()));
                assert_eq!(&inverse_color_map(&g).unwrap(), t);
            }
            if n == 1 {
                continue;
            }
            // Every avoiding colored tree on the alphabet is hit.
            let avoiding = crate::rooted::FreeTrees::new(n)
                .flat_map(|edges| {
                    let m = edges.len();
                    (0..1u32 << m).map(move |mask| {
                        let es: Vec<Edge> = edges
                            .iter()
                            .enumerate()
                            .map(|(i, &(a, b))| {
                                let c = if mask >> i & 1 == 1 { Color::Blue } else { Color::Red };
                                Edge::new(a, b, c)
                            })
                            .collect();
                        ColoredGraph::on_alphabet(n, es).unwrap()
                    })
                })
                .filter(brute_force_avoids)
                .count();
            assert_eq!(avoiding, trees.len());
        }
    }

    #[test]
    fn orientation_round_trip() {
        for n in 1..=5 {
            for g in enumerate_trees(n).unwrap() {
                let o = oriented_tree(&g);
                assert!(o.is_consistent());
                assert!(o.is_basis_graph());
                assert_eq!(o.sources(), LetterSet::singleton(g.root()));
                assert_eq!(unoriented_copy(&o), g.to_graph());
            }
        }
    }

    #[test]
    fn consistency_examples() {
        let g = OrientedGraph::on_alphabet(2, vec![DirectedEdge::new(x(1), x(2), Color::Red)]).unwrap();
        assert!(g.is_consistent());
        let g = OrientedGraph::on_alphabet(2, vec![DirectedEdge::new(x(2), x(1), Color::Red)]).unwrap();
        assert!(!g.is_consistent());
        assert_eq!(unoriented_copy(&g).edges(), &[red(1, 2)]);
        let m = OrientedGraph::on_alphabet(
            2,
            vec![
                DirectedEdge::new(x(1), x(2), Color::Red),
                DirectedEdge::new(x(2), x(1), Color::Blue),
            ],
        )
        .unwrap();
        assert!(m.has_multi_edge());
        assert_eq!(unoriented_copy(&m).edges().len(), 2);
    }

    #[test]
    fn subtree_surgery() {
        // Root x1 with red child x3, which has blue child x2.
        let g = TwoColoredTree::from_edges(3, vec![red(1, 3), blue(2, 3)]).unwrap();
        assert_eq!(g.root(), x(1));
        assert_eq!(g.children(x(1)), vec![(x(3), Color::Red)]);
        let s = g.subtree(x(3));
        assert_eq!(s.root(), x(3));
        assert_eq!(s.edges(), vec![blue(2, 3)]);
        let rest = g.without_subtree(x(3));
        assert_eq!(rest, TwoColoredTree::singleton(x(1)));
        let back = rest.join(&s, x(1), x(3), Color::Red).unwrap();
        assert_eq!(back, g);
        assert_eq!(g.level(x(2)), 2);
    }

    #[test]
    fn text_and_json_formats() {
        let g = parse_graph("n 3\nr 1 2\nb 3>1 # comment\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(
            g.edges(),
            &[
                DirectedEdge::new(x(1), x(2), Color::Red),
                DirectedEdge::new(x(3), x(1), Color::Blue)
            ]
        );
        let j = parse_graph(&oriented_to_json(&g).to_string()).unwrap();
        assert_eq!(j, g);
        let u = parse_graph(r#"{"n":3,"edges":[{"u":1,"v":2,"c":"r"}]}"#).unwrap();
        assert_eq!(u.edges(), &[DirectedEdge::new(x(1), x(2), Color::Red)]);
        assert!(matches!(parse_graph("q 1 2"), Err(LiebraError::GraphFormat { line: 1, .. })));
        assert!(parse_graph("n 2\nr 1 3").is_err());
    }

    #[test]
    fn graph_text_round_trips() {
        for text in ["n 3\nr 1>2\nb 3>1", "n 4\nr 2>3\nr 2>3", "n 2"] {
            let g = parse_graph(text).unwrap();
            assert_eq!(graph_text(&g), text);
            assert_eq!(parse_graph(&graph_text(&g)).unwrap(), g);
        }
    }
}
