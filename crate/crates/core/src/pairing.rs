//! The pairing between oriented two-colored graphs and plane binary trees,
//! pairing matrices, and the relation generators on both sides.
//!
//! Sign convention: a path `i -> j` counts as counterclockwise at its nadir
//! when `i` lies in the right subtree of the nadir and `j` in the left one.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{LiebraError, Result};
use crate::graph::{enumerate_trees, DirectedEdge, OrientedGraph, TwoColoredTree};
use crate::letter::{Color, Letter, LetterSet, MAX_LETTERS};
use crate::lie::RelationKind;
use crate::lincombo::LinCombo;
use crate::monomial::{basis_monomial, enumerate_monomials, monomials_on, random_monomial, tree_of_monomial, Monomial};

/// Root-to-leaf paths of a plane binary tree. Internal vertices are
/// numbered in preorder, the root being 0.
#[derive(Debug, Clone)]
pub struct PlaneIndex {
    letters: LetterSet,
    colors: Vec<Color>,
    /// For each letter index, the internal vertices above the leaf and
    /// whether the path turns right there.
    paths: Vec<Vec<(u16, bool)>>,
}

impl PlaneIndex {
    pub fn new(t: &Monomial) -> Self {
        let mut idx = PlaneIndex {
            letters: t.letters(),
            colors: Vec::new(),
            paths: vec![Vec::new(); MAX_LETTERS + 1],
        };
        let mut stack = Vec::new();
        idx.walk(t, &mut stack);
        idx
    }

    fn walk(&mut self, t: &Monomial, stack: &mut Vec<(u16, bool)>) {
        match t {
            Monomial::Leaf(x) => self.paths[x.index() as usize] = stack.clone(),
            Monomial::Node(c, l, r) => {
                let id = self.colors.len() as u16;
                self.colors.push(*c);
                stack.push((id, false));
                self.walk(l, stack);
                stack.last_mut().expect("pushed").1 = true;
                self.walk(r, stack);
                stack.pop();
            }
        }
    }

    pub fn letters(&self) -> LetterSet {
        self.letters
    }

    /// Number of internal vertices.
    pub fn internal_count(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, node: usize) -> Color {
        self.colors[node]
    }

    /// The nadir of the path from `i` to `j` and whether the path is
    /// counterclockwise there.
    pub fn nadir(&self, i: Letter, j: Letter) -> Result<(usize, bool)> {
        for x in [i, j] {
            if !self.letters.contains(x) {
                return Err(LiebraError::LetterAbsent(x));
            }
        }
        if i == j {
            return Err(LiebraError::Internal(format!("path from {i} to itself")));
        }
        let (pi, pj) = (&self.paths[i.index() as usize], &self.paths[j.index() as usize]);
        let k = pi
            .iter()
            .zip(pj)
            .position(|(a, b)| a.1 != b.1)
            .expect("distinct leaves split somewhere");
        Ok((pi[k].0 as usize, pi[k].1))
    }

    /// `pair(G, T)` against the indexed tree.
    pub fn pair(&self, g: &OrientedGraph) -> i64 {
        if g.vertices() != self.letters || g.edges().len() != self.colors.len() {
            return 0;
        }
        let mut used = vec![false; self.colors.len()];
        let mut ccw = 0;
        for e in g.edges() {
            let (node, turned) = self.nadir(e.src, e.dst).expect("same letters");
            if used[node] || self.colors[node] != e.color {
                return 0;
            }
            used[node] = true;
            ccw += turned as u32;
        }
        if ccw % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// The lowest common ancestor of leaves `i` and `j`, as a preorder id.
pub fn path_nadir(t: &Monomial, i: Letter, j: Letter) -> Result<usize> {
    PlaneIndex::new(t).nadir(i, j).map(|(node, _)| node)
}

/// The edge-to-nadir map of a graph against a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaResult {
    /// Nadir of each edge, in the graph's edge order.
    pub assignment: Vec<usize>,
    pub is_bijection: bool,
    pub color_preserving: bool,
    pub ccw_count: usize,
}

pub fn beta_map(g: &OrientedGraph, t: &Monomial) -> Result<BetaResult> {
    let idx = PlaneIndex::new(t);
    let mut assignment = Vec::with_capacity(g.edges().len());
    let mut color_preserving = true;
    let mut ccw_count = 0;
    for e in g.edges() {
        let (node, turned) = idx.nadir(e.src, e.dst)?;
        color_preserving &= idx.color(node) == e.color;
        ccw_count += turned as usize;
        assignment.push(node);
    }
    let distinct: BTreeSet<usize> = assignment.iter().copied().collect();
    let is_bijection =
        distinct.len() == assignment.len() && assignment.len() == idx.internal_count();
    Ok(BetaResult {
        assignment,
        is_bijection,
        color_preserving,
        ccw_count,
    })
}

/// `(-1)^N` for a color-preserving bijection, 0 otherwise (also 0 when the
/// letter sets differ).
pub fn pair(g: &OrientedGraph, t: &Monomial) -> i64 {
    PlaneIndex::new(t).pair(g)
}

/// Bilinear extension of [`pair`].
pub fn pair_combo(beta: &LinCombo<OrientedGraph>, alpha: &LinCombo<Monomial>) -> i64 {
    alpha
        .iter()
        .map(|(t, a)| {
            let idx = PlaneIndex::new(t);
            a * beta.iter().map(|(g, b)| b * idx.pair(g)).sum::<i64>()
        })
        .sum()
}

/// Dense matrix of `pair(o_{G_i}, c_j)` for an ordered list of trees and one
/// column monomial per tree.
#[derive(Debug, Clone)]
pub struct PairingMatrix {
    pub order: Vec<TwoColoredTree>,
    pub columns: Vec<Monomial>,
    entries: Vec<i8>,
}

impl PairingMatrix {
    pub fn dim(&self) -> usize {
        self.order.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.dim() + j]
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.dim()..(i + 1) * self.dim()]
    }

    /// Nonzero entries strictly below the diagonal.
    pub fn lower_violations(&self) -> Vec<(usize, usize)> {
        let d = self.dim();
        (0..d)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j) != 0)
            .collect()
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.lower_violations().is_empty()
    }

    /// Diagonal positions whose entry is not a unit.
    pub fn nonunit_diagonal(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.get(i, i).abs() != 1).collect()
    }

    /// The determinant when the matrix is triangular.
    pub fn triangular_determinant(&self) -> Option<i64> {
        self.is_upper_triangular()
            .then(|| (0..self.dim()).map(|i| self.get(i, i) as i64).product())
    }

    /// Entries as `i64` rows.
    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.dim())
            .map(|i| self.row(i).iter().map(|&v| v as i64).collect())
            .collect()
    }
}

fn check_permutation(n: usize, order: &[TwoColoredTree]) -> Result<()> {
    let all: BTreeSet<TwoColoredTree> = enumerate_trees(n)?.into_iter().collect();
    let given: BTreeSet<TwoColoredTree> = order.iter().copied().collect();
    if given.len() != order.len() {
        return Err(LiebraError::NotAPermutation("a tree occurs twice".into()));
    }
    if given != all {
        let stray = given.symmetric_difference(&all).next().expect("sets differ");
        return Err(LiebraError::NotAPermutation(format!(
            "{} trees given, {} expected; first mismatch {stray}",
            order.len(),
            all.len()
        )));
    }
    Ok(())
}

/// The matrix with `(i,j)` entry `pair(o_{G_i}, b_{G_j})`.
pub fn pairing_matrix(n: usize, order: &[TwoColoredTree]) -> Result<PairingMatrix> {
    let columns = order.iter().map(basis_monomial).collect();
    pairing_matrix_with_columns(n, order, columns)
}

/// Like [`pairing_matrix`] with arbitrary column monomials.
pub fn pairing_matrix_with_columns(
    n: usize,
    order: &[TwoColoredTree],
    columns: Vec<Monomial>,
) -> Result<PairingMatrix> {
    check_permutation(n, order)?;
    if columns.len() != order.len() {
        return Err(LiebraError::NotAPermutation(format!(
            "{} columns for {} rows",
            columns.len(),
            order.len()
        )));
    }
    let full = LetterSet::full(n);
    if let Some(c) = columns.iter().find(|c| c.letters() != full) {
        return Err(LiebraError::Internal(format!("column {c} is not on x1..x{n}")));
    }
    let rows: Vec<OrientedGraph> = order.iter().map(crate::graph::oriented_tree).collect();
    let idx: Vec<PlaneIndex> = columns.iter().map(PlaneIndex::new).collect();
    let entries = rows
        .par_iter()
        .flat_map_iter(|g| idx.iter().map(move |t| t.pair(g) as i8))
        .collect();
    Ok(PairingMatrix {
        order: order.to_vec(),
        columns,
        entries,
    })
}

/// Two-edge patterns for a Jacobi-type relation on the path `i -> j -> k`
/// whose first and second edges have the given colors. Same colors give
/// the three rotations; different colors give the six graphs of the mixed
/// relation (both color assignments, three rotations each).
pub fn cycle_terms(
    i: Letter,
    j: Letter,
    k: Letter,
    first: Color,
    second: Color,
) -> Vec<[DirectedEdge; 2]> {
    let rot = [(i, j, k), (j, k, i), (k, i, j)];
    let assignments: Vec<(Color, Color)> = if first == second {
        vec![(first, second)]
    } else {
        vec![(Color::Blue, Color::Red), (Color::Red, Color::Blue)]
    };
    assignments
        .into_iter()
        .flat_map(|(cf, cs)| {
            rot.map(|(a, b, c)| [DirectedEdge::new(a, b, cf), DirectedEdge::new(b, c, cs)])
        })
        .collect()
}

/// Relation combinations in `Theta_n` of the given kind at every eligible
/// vertex of `t`.
pub fn theta_relations_at(t: &Monomial, kind: RelationKind) -> Vec<LinCombo<Monomial>> {
    let mut out = Vec::new();
    theta_collect(t, kind, &mut out);
    out
}

fn theta_local(s: &Monomial, kind: RelationKind) -> Option<LinCombo<Monomial>> {
    let Monomial::Node(c, a, rest) = s else {
        return None;
    };
    match kind {
        RelationKind::S1 | RelationKind::S2 => {
            let want = if kind == RelationKind::S1 { Color::Red } else { Color::Blue };
            (*c == want).then(|| kind.instantiate(&[(**a).clone(), (**rest).clone()]))
        }
        _ => {
            let Monomial::Node(c2, b, d) = &**rest else {
                return None;
            };
            let fits = match kind {
                RelationKind::J1 => *c == Color::Red && *c2 == Color::Red,
                RelationKind::J2 => *c == Color::Blue && *c2 == Color::Blue,
                _ => c != c2,
            };
            fits.then(|| kind.instantiate(&[(**a).clone(), (**b).clone(), (**d).clone()]))
        }
    }
}

fn theta_collect(t: &Monomial, kind: RelationKind, out: &mut Vec<LinCombo<Monomial>>) {
    if let Some(local) = theta_local(t, kind) {
        out.push(local);
    }
    if let Monomial::Node(c, l, r) = t {
        let mut below = Vec::new();
        theta_collect(l, kind, &mut below);
        out.extend(below.into_iter().map(|combo| {
            combo
                .into_iter()
                .map(|(m, k)| (Monomial::node(*c, m, (**r).clone()), k))
                .collect()
        }));
        let mut below = Vec::new();
        theta_collect(r, kind, &mut below);
        out.extend(below.into_iter().map(|combo| {
            combo
                .into_iter()
                .map(|(m, k)| (Monomial::node(*c, (**l).clone(), m), k))
                .collect()
        }));
    }
}

/// Every relation combination of `kind` in `Theta_n`, over all trees and all
/// eligible vertices, without repetition.
pub fn theta_relation_generators(n: usize, kind: RelationKind) -> Result<Vec<LinCombo<Monomial>>> {
    crate::letter::check_alphabet(n)?;
    let set: BTreeSet<LinCombo<Monomial>> = monomials_on(LetterSet::full(n))
        .iter()
        .flat_map(|t| theta_relations_at(t, kind))
        .collect();
    Ok(set.into_iter().collect())
}

/// A relation combination of `kind` at a random vertex of a random tree, or
/// `None` if none was found after a bounded number of tries.
pub fn random_theta_relation<R: Rng + ?Sized>(
    n: usize,
    kind: RelationKind,
    rng: &mut R,
) -> Option<LinCombo<Monomial>> {
    if n < kind.arity() {
        return None;
    }
    for _ in 0..1000 {
        let t = random_monomial(LetterSet::full(n), rng);
        let sites = theta_relations_at(&t, kind);
        if !sites.is_empty() {
            return Some(sites[rng.gen_range(0..sites.len())].clone());
        }
    }
    None
}

/// Relation combinations of `kind` in `Gamma_n` at every eligible edge or
/// pair of edges of `g`.
pub fn gamma_relations_at(g: &OrientedGraph, kind: RelationKind) -> Vec<LinCombo<OrientedGraph>> {
    let edges = g.edges();
    let mut out = Vec::new();
    match kind {
        RelationKind::S1 | RelationKind::S2 => {
            let want = if kind == RelationKind::S1 { Color::Red } else { Color::Blue };
            for (idx, e) in edges.iter().enumerate() {
                if e.color != want {
                    continue;
                }
                let mut flipped = edges.to_vec();
                flipped[idx] = e.reversed();
                let mut c = LinCombo::single(g.clone(), 1);
                c.add_term(g.with_edges(flipped), 1);
                out.push(c);
            }
        }
        _ => {
            for (a, e1) in edges.iter().enumerate() {
                for (b, e2) in edges.iter().enumerate() {
                    if a == b || e1.dst != e2.src || e2.dst == e1.src {
                        continue;
                    }
                    let fits = match kind {
                        RelationKind::J1 => e1.color == Color::Red && e2.color == Color::Red,
                        RelationKind::J2 => e1.color == Color::Blue && e2.color == Color::Blue,
                        _ => e1.color != e2.color,
                    };
                    if !fits {
                        continue;
                    }
                    let rest: Vec<DirectedEdge> = edges
                        .iter()
                        .enumerate()
                        .filter(|&(x, _)| x != a && x != b)
                        .map(|(_, e)| *e)
                        .collect();
                    let c: LinCombo<OrientedGraph> =
                        cycle_terms(e1.src, e1.dst, e2.dst, e1.color, e2.color)
                            .into_iter()
                            .map(|pair| {
                                let mut es = rest.clone();
                                es.extend(pair);
                                (g.with_edges(es), 1)
                            })
                            .collect();
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Graphs that are generators on their own: parallel edges or disconnected.
pub fn is_degenerate_generator(g: &OrientedGraph) -> bool {
    g.has_multi_edge() || !g.is_connected()
}

/// All oriented graphs on `vertices` with exactly `k` edges (as multisets
/// of colored arcs).
pub fn graphs_with_edges(vertices: LetterSet, k: usize) -> Vec<OrientedGraph> {
    let mut arcs = Vec::new();
    for a in vertices.iter() {
        for b in vertices.iter() {
            if a != b {
                for c in Color::BOTH {
                    arcs.push(DirectedEdge::new(a, b, c));
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(k);
    fn rec(
        arcs: &[DirectedEdge],
        start: usize,
        k: usize,
        pick: &mut Vec<DirectedEdge>,
        vertices: LetterSet,
        out: &mut Vec<OrientedGraph>,
    ) {
        if pick.len() == k {
            out.push(OrientedGraph::from_parts(vertices, pick.clone()));
            return;
        }
        for i in start..arcs.len() {
            pick.push(arcs[i]);
            rec(arcs, i, k, pick, vertices, out);
            pick.pop();
        }
    }
    rec(&arcs, 0, k, &mut pick, vertices, &mut out);
    out
}

/// A random oriented graph on `vertices` with `k` independent random arcs.
pub fn random_graph<R: Rng + ?Sized>(vertices: LetterSet, k: usize, rng: &mut R) -> OrientedGraph {
    let vs: Vec<Letter> = vertices.iter().collect();
    assert!(vs.len() >= 2 || k == 0, "edges need two vertices");
    let edges = (0..k)
        .map(|_| {
            let a = vs[rng.gen_range(0..vs.len())];
            let mut b = a;
            while b == a {
                b = vs[rng.gen_range(0..vs.len())];
            }
            let c = if rng.gen_bool(0.5) { Color::Red } else { Color::Blue };
            DirectedEdge::new(a, b, c)
        })
        .collect();
    OrientedGraph::from_parts(vertices, edges)
}

/// Every relation combination of `kind` in `Gamma_n` based at graphs with
/// `n - 1` edges, without repetition. Exhaustive, so only for small `n`.
pub fn gamma_relation_generators(
    n: usize,
    kind: RelationKind,
) -> Result<Vec<LinCombo<OrientedGraph>>> {
    crate::letter::check_alphabet(n)?;
    let set: BTreeSet<LinCombo<OrientedGraph>> = graphs_with_edges(LetterSet::full(n), n - 1)
        .iter()
        .flat_map(|g| gamma_relations_at(g, kind))
        .collect();
    Ok(set.into_iter().collect())
}

/// The monomials on `x1..xn` grouped by their tree, i.e. the fibres of
/// `tree_of_monomial`. Exhaustive, so only for small `n`.
pub fn monomial_fibres(n: usize) -> Result<BTreeMap<TwoColoredTree, Vec<Monomial>>> {
    let mut out: BTreeMap<TwoColoredTree, Vec<Monomial>> = BTreeMap::new();
    for m in enumerate_monomials(n)? {
        out.entry(tree_of_monomial(&m)).or_default().push(m);
    }
    Ok(out)
}

/// One uniformly chosen monomial from the fibre of each tree in `order`.
pub fn random_section<R: Rng + ?Sized>(
    order: &[TwoColoredTree],
    fibres: &BTreeMap<TwoColoredTree, Vec<Monomial>>,
    rng: &mut R,
) -> Result<Vec<Monomial>> {
    order
        .iter()
        .map(|g| {
            let fibre = fibres
                .get(g)
                .filter(|f| !f.is_empty())
                .ok_or_else(|| LiebraError::Internal(format!("empty fibre over {g}")))?;
            Ok(fibre[rng.gen_range(0..fibre.len())].clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{oriented_tree, parse_graph};
    use crate::monomial::{enumerate_monomials, parse_monomial};

    fn p(s: &str) -> Monomial {
        parse_monomial(s, None).unwrap()
    }

    fn g(s: &str) -> OrientedGraph {
        parse_graph(s).unwrap()
    }

    fn x(i: u8) -> Letter {
        Letter::new(i)
    }

    #[test]
    fn nadir_examples() {
        assert_eq!(path_nadir(&p("[x1,x2]"), x(1), x(2)).unwrap(), 0);
        let t = p("<[x2,x3],x1>");
        assert_eq!(path_nadir(&t, x(2), x(3)).unwrap(), 1);
        assert_eq!(path_nadir(&t, x(2), x(1)).unwrap(), 0);
        assert!(matches!(path_nadir(&t, x(2), x(4)), Err(LiebraError::LetterAbsent(_))));
    }

    #[test]
    fn beta_examples() {
        let b = beta_map(&g("r 1>2"), &p("[x1,x2]")).unwrap();
        assert!(b.is_bijection && b.color_preserving);
        assert_eq!(b.ccw_count, 0);
        let b = beta_map(&g("r 2>1"), &p("[x1,x2]")).unwrap();
        assert!(b.is_bijection && b.color_preserving);
        assert_eq!(b.ccw_count, 1);
        let b = beta_map(&g("r 1>2"), &p("<x1,x2>")).unwrap();
        assert!(b.is_bijection && !b.color_preserving);
    }

    #[test]
    fn pair_examples() {
        assert_eq!(pair(&g("r 1>2"), &p("[x1,x2]")), 1);
        assert_eq!(pair(&g("r 2>1"), &p("[x1,x2]")), -1);
        assert_eq!(pair(&g("r 1>2"), &p("<x1,x2>")), 0);
        let multi = g("r 1>2\nr 1>2");
        let single = g("n 3\nr 1>2");
        for t in enumerate_monomials(2).unwrap() {
            assert_eq!(pair(&multi, &t), 0);
        }
        for t in enumerate_monomials(3).unwrap() {
            assert_eq!(pair(&single, &t), 0);
        }
    }

    /// Direct reading of the definition: nadir by explicit ancestor sets.
    fn pair_oracle(g: &OrientedGraph, t: &Monomial) -> i64 {
        fn nodes<'a>(t: &'a Monomial, out: &mut Vec<&'a Monomial>) {
            if let Monomial::Node(_, l, r) = t {
                out.push(t);
                nodes(l, out);
                nodes(r, out);
            }
        }
        let mut all = Vec::new();
        nodes(t, &mut all);
        let mut hit = vec![false; all.len()];
        let mut sign = 1;
        for e in g.edges() {
            // The deepest vertex whose leaves contain both ends.
            let (pos, v) = all
                .iter()
                .enumerate()
                .filter(|(_, v)| v.letters().contains(e.src) && v.letters().contains(e.dst))
                .min_by_key(|(_, v)| v.degree())
                .unwrap();
            let Monomial::Node(c, l, _) = v else { unreachable!() };
            if *c != e.color || hit[pos] {
                return 0;
            }
            hit[pos] = true;
            if l.letters().contains(e.dst) {
                sign = -sign;
            }
        }
        if hit.iter().all(|&h| h) {
            sign
        } else {
            0
        }
    }

    #[test]
    fn pairing_agrees_with_definition_oracle() {
        let ts = enumerate_monomials(3).unwrap();
        for gr in graphs_with_edges(LetterSet::full(3), 2) {
            for t in &ts {
                assert_eq!(pair(&gr, t), pair_oracle(&gr, t), "{gr} vs {t}");
            }
        }
    }

    #[test]
    fn diagonal_is_unit_and_combo_is_bilinear() {
        for n in 1..=4 {
            for tree in enumerate_trees(n).unwrap() {
                assert_eq!(pair(&oriented_tree(&tree), &basis_monomial(&tree)).abs(), 1);
            }
        }
        let beta = LinCombo::single(g("r 1>2"), 1);
        let alpha = LinCombo::single(p("[x1,x2]"), 1);
        assert_eq!(pair_combo(&beta, &alpha), 1);
    }

    #[test]
    fn small_matrices() {
        let order = enumerate_trees(2).unwrap();
        let m = pairing_matrix(2, &order).unwrap();
        assert_eq!(m.dim(), 2);
        assert!(m.nonunit_diagonal().is_empty());
        assert!(m.is_upper_triangular());
        let mut bad = order.clone();
        bad.pop();
        assert!(matches!(pairing_matrix(2, &bad), Err(LiebraError::NotAPermutation(_))));
        bad.push(order[0]);
        assert!(pairing_matrix(2, &bad).is_err());
    }

    #[test]
    fn theta_examples() {
        let s1 = theta_relation_generators(2, RelationKind::S1).unwrap();
        assert_eq!(s1.len(), 1);
        assert_eq!(s1[0].len(), 2);
        let j2 = theta_relation_generators(3, RelationKind::J2).unwrap();
        assert!(j2.iter().all(|c| c.len() == 3));
        let mj = theta_relation_generators(3, RelationKind::MJ).unwrap();
        assert!(!mj.is_empty() && mj.iter().all(|c| c.len() == 6));
    }

    #[test]
    fn theta_generators_vanish_exhaustively_at_three() {
        let graphs = graphs_with_edges(LetterSet::full(3), 2);
        for kind in RelationKind::ALL {
            for alpha in theta_relation_generators(3, kind).unwrap() {
                for gr in &graphs {
                    let beta = LinCombo::single(gr.clone(), 1);
                    assert_eq!(pair_combo(&beta, &alpha), 0, "{kind} {alpha} vs {gr}");
                }
            }
        }
    }

    #[test]
    fn gamma_examples() {
        let s = gamma_relations_at(&g("r 1>2"), RelationKind::S1);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].len(), 2);
        let j = gamma_relations_at(&g("r 1>2\nr 2>3"), RelationKind::J1);
        assert_eq!(j.len(), 1);
        assert_eq!(j[0].len(), 3);
        let mj = gamma_relations_at(&g("b 1>2\nr 2>3"), RelationKind::MJ);
        assert_eq!(mj.len(), 1);
        assert_eq!(mj[0].len(), 6);
        assert!(is_degenerate_generator(&g("n 3\nr 1>2")));
        assert!(is_degenerate_generator(&g("r 1>2\nb 2>1")));
        assert_eq!(graphs_with_edges(LetterSet::full(3), 2).len(), 78);
    }

    #[test]
    fn gamma_generators_vanish_exhaustively_at_three() {
        let ts = enumerate_monomials(3).unwrap();
        for kind in RelationKind::ALL {
            let gens = gamma_relation_generators(3, kind).unwrap();
            assert!(!gens.is_empty());
            for beta in gens {
                for t in &ts {
                    assert_eq!(pair_combo(&beta, &LinCombo::single(t.clone(), 1)), 0);
                }
            }
        }
        for gr in graphs_with_edges(LetterSet::full(3), 2) {
            if is_degenerate_generator(&gr) {
                assert!(ts.iter().all(|t| pair(&gr, t) == 0));
            }
        }
    }
}
