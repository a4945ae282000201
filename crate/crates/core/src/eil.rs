//! The graph side: the basis of consistent oriented trees with a unique
//! source, and the reduction of any oriented two-colored graph onto it.
//!
//! Trees are reduced by induction on the alphabet. Cut an edge `e`, reduce
//! both halves, reconnect. The edge is chosen as follows:
//!
//! * (i) a leaf whose consistent edge points into it;
//! * (ii) otherwise a red edge at the largest letter;
//! * (iii) otherwise a blue edge at the largest letter.
//!
//! In cases (ii) and (iii) a reconnected tree can have two sources. Its two
//! edges into the joint vertex are then rewritten with a Jacobi or mixed
//! Jacobi relation. Graphs with a cycle are reduced on a shortest cycle
//! until a parallel pair appears.

use std::collections::HashMap;

use crate::error::{LiebraError, Result};
use crate::graph::{enumerate_trees, oriented_tree, trees_on, DirectedEdge, OrientedGraph};
use crate::letter::{Color, Letter, LetterSet};
use crate::lie::DEFAULT_MAX_DEPTH;
use crate::lincombo::LinCombo;
use crate::pairing::cycle_terms;

pub type EilCombo = LinCombo<OrientedGraph>;

/// `o_G` for every tree on `x1..xn`, in enumeration order.
pub fn eil_basis(n: usize) -> Result<Vec<OrientedGraph>> {
    Ok(enumerate_trees(n)?.iter().map(oriented_tree).collect())
}

pub fn eil_basis_on(letters: LetterSet) -> Result<Vec<OrientedGraph>> {
    Ok(trees_on(letters)?.iter().map(oriented_tree).collect())
}

/// Flips every inconsistent edge; returns the flipped graph and `(-1)^flips`.
pub fn consistent_form(g: &OrientedGraph) -> (OrientedGraph, i64) {
    let mut sign = 1;
    let edges = g
        .edges()
        .iter()
        .map(|e| {
            if e.is_consistent() {
                *e
            } else {
                sign = -sign;
                e.reversed()
            }
        })
        .collect();
    (g.with_edges(edges), sign)
}

/// Memoizing reducer. The memo is keyed on consistent graphs.
#[derive(Debug, Default)]
pub struct EilNormalizer {
    memo: HashMap<OrientedGraph, EilCombo>,
    depth: usize,
    max_depth: usize,
}

impl EilNormalizer {
    pub fn new() -> Self {
        Self::with_max_depth(DEFAULT_MAX_DEPTH)
    }

    pub fn with_max_depth(max_depth: usize) -> Self {
        EilNormalizer {
            memo: HashMap::new(),
            depth: 0,
            max_depth,
        }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn normalize(&mut self, g: &OrientedGraph) -> Result<EilCombo> {
        if g.has_multi_edge() || !g.is_connected() {
            return Ok(EilCombo::new());
        }
        let (c, sign) = consistent_form(g);
        Ok(self.normalize_consistent(&c)?.scaled(sign))
    }

    pub fn normalize_combo(&mut self, c: &EilCombo) -> Result<EilCombo> {
        let mut out = EilCombo::new();
        for (g, k) in c.iter() {
            out.add_scaled(&self.normalize(g)?, k);
        }
        Ok(out)
    }

    fn normalize_consistent(&mut self, g: &OrientedGraph) -> Result<EilCombo> {
        if let Some(hit) = self.memo.get(g) {
            return Ok(hit.clone());
        }
        if self.depth >= self.max_depth {
            return Err(LiebraError::Internal(format!(
                "graph reduction exceeded depth {} at {g}",
                self.max_depth
            )));
        }
        self.depth += 1;
        let out = if g.is_tree() {
            self.reduce_tree(g)
        } else {
            self.reduce_cycle(g)
        };
        self.depth -= 1;
        let out = out?;
        self.memo.insert(g.clone(), out.clone());
        Ok(out)
    }

    fn reduce_tree(&mut self, g: &OrientedGraph) -> Result<EilCombo> {
        if g.sources().len() == 1 {
            return Ok(EilCombo::single(g.clone(), 1));
        }
        let edges = g.edges();
        if let Some(&e) = edges.iter().find(|e| g.degree(e.dst) == 1) {
            let rest = without_vertex(g, e.dst);
            let reduced = self.normalize_consistent(&rest)?;
            return Ok(reduced.into_iter().map(|(k, c)| (attach(&k, g.vertices(), e), c)).collect());
        }
        let top = g.vertices().max().expect("nonempty alphabet");
        let at_top = |c: Color| edges.iter().copied().find(|e| e.touches(top) && e.color == c);
        let e = at_top(Color::Red)
            .or_else(|| at_top(Color::Blue))
            .ok_or_else(|| LiebraError::Internal(format!("{top} is isolated in {g}")))?;
        let (side_a, side_b) = split(g, e);
        let left = self.normalize_consistent(&side_a)?;
        let right = self.normalize_consistent(&side_b)?;
        let mut out = EilCombo::new();
        for (k1, a) in left.iter() {
            for (k2, b) in right.iter() {
                let mut es = k1.edges().to_vec();
                es.extend_from_slice(k2.edges());
                es.push(e);
                let h = g.with_edges(es);
                out.add_scaled(&self.resolve_join(&h, e)?, a * b);
            }
        }
        Ok(out)
    }

    /// Reduces a tree made of two basis trees joined by `e`.
    fn resolve_join(&mut self, h: &OrientedGraph, e: DirectedEdge) -> Result<EilCombo> {
        if h.sources().len() == 1 {
            return Ok(EilCombo::single(h.clone(), 1));
        }
        if h.edges().iter().any(|x| h.degree(x.dst) == 1) {
            return self.normalize_consistent(h);
        }
        let j = e.dst;
        let other = *h
            .edges()
            .iter()
            .find(|x| x.dst == j && **x != e)
            .ok_or_else(|| LiebraError::Internal(format!("{j} has one incoming edge in {h}")))?;
        // Reversing `e` gives the path `other.src -> j -> e.src`, one term of
        // a relation whose remaining terms sum to `h`.
        let rest: Vec<DirectedEdge> =
            h.edges().iter().copied().filter(|x| *x != e && *x != other).collect();
        let flipped = [other, e.reversed()];
        let mut out = EilCombo::new();
        for pair in cycle_terms(other.src, j, e.src, other.color, e.color) {
            if pair == flipped {
                continue;
            }
            let mut es = rest.clone();
            es.extend(pair);
            out.add_scaled(&self.normalize(&h.with_edges(es))?, 1);
        }
        Ok(out)
    }

    fn reduce_cycle(&mut self, g: &OrientedGraph) -> Result<EilCombo> {
        let cycle = shortest_cycle(g)
            .ok_or_else(|| LiebraError::Internal(format!("no cycle in non-tree {g}")))?;
        // Orient the cycle head to tail.
        let mut sign = 1;
        let mut es: Vec<DirectedEdge> = Vec::with_capacity(g.edges().len());
        let mut on_cycle = vec![false; g.edges().len()];
        for &(idx, from) in &cycle {
            on_cycle[idx] = true;
            let e = g.edges()[idx];
            if e.src == from {
                es.push(e);
            } else {
                sign = -sign;
                es.push(e.reversed());
            }
        }
        let rest: Vec<DirectedEdge> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|&(i, _)| !on_cycle[i])
            .map(|(_, e)| *e)
            .collect();
        Ok(self.reduce_directed_cycle(g, rest, es)?.scaled(sign))
    }

    /// `path` is a directed cycle `i1 -> i2 -> ... -> i1`; `rest` holds the
    /// other edges.
    fn reduce_directed_cycle(
        &mut self,
        g: &OrientedGraph,
        rest: Vec<DirectedEdge>,
        mut path: Vec<DirectedEdge>,
    ) -> Result<EilCombo> {
        let k = path.len();
        let same = (0..k).find(|&t| path[t].color == path[(t + 1) % k].color);
        if let Some(t) = same {
            path.rotate_left(t);
        }
        let (e1, e2) = (path[0], path[1]);
        let tail = &path[2..];
        let mut out = EilCombo::new();
        for pair in cycle_terms(e1.src, e1.dst, e2.dst, e1.color, e2.color) {
            if pair == [e1, e2] {
                continue;
            }
            let mut es = rest.clone();
            if same.is_none() && pair[0].src == e1.src && pair[0].dst == e1.dst {
                // Same cycle with the two colors exchanged; now two
                // consecutive edges agree, so reduce it on the spot.
                let mut swapped = vec![pair[0], pair[1]];
                swapped.extend_from_slice(tail);
                out.add_scaled(&self.reduce_directed_cycle(g, rest.clone(), swapped)?, -1);
                continue;
            }
            es.extend(pair);
            es.extend_from_slice(tail);
            out.add_scaled(&self.normalize(&g.with_edges(es))?, -1);
        }
        Ok(out)
    }
}

fn without_vertex(g: &OrientedGraph, x: Letter) -> OrientedGraph {
    let mut vs = g.vertices();
    vs.remove(x);
    OrientedGraph::from_parts(vs, g.edges().iter().copied().filter(|e| !e.touches(x)).collect())
}

fn attach(k: &OrientedGraph, vertices: LetterSet, e: DirectedEdge) -> OrientedGraph {
    let mut es = k.edges().to_vec();
    es.push(e);
    OrientedGraph::from_parts(vertices, es)
}

/// The two trees left after removing `e`, the one holding `e.src` first.
fn split(g: &OrientedGraph, e: DirectedEdge) -> (OrientedGraph, OrientedGraph) {
    let others: Vec<DirectedEdge> = g.edges().iter().copied().filter(|x| *x != e).collect();
    let mut side = LetterSet::singleton(e.src);
    loop {
        let mut grew = false;
        for x in &others {
            if side.contains(x.src) != side.contains(x.dst) {
                side.insert(x.src);
                side.insert(x.dst);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let part = |vs: LetterSet| {
        OrientedGraph::from_parts(
            vs,
            others.iter().copied().filter(|x| vs.contains(x.src)).collect(),
        )
    };
    (part(side), part(g.vertices().difference(side)))
}

/// A shortest cycle as `(edge index, vertex the walk leaves from)` steps.
fn shortest_cycle(g: &OrientedGraph) -> Option<Vec<(usize, Letter)>> {
    let edges = g.edges();
    let mut best: Option<Vec<(usize, Letter)>> = None;
    for (skip, e) in edges.iter().enumerate() {
        // Breadth-first walk from e.dst to e.src avoiding e.
        let mut prev: HashMap<Letter, (usize, Letter)> = HashMap::new();
        let mut queue = std::collections::VecDeque::from([e.dst]);
        let mut seen = LetterSet::singleton(e.dst);
        while let Some(v) = queue.pop_front() {
            if v == e.src {
                break;
            }
            for (i, x) in edges.iter().enumerate() {
                if i == skip || !x.touches(v) {
                    continue;
                }
                let w = x.other_end(v);
                if seen.insert(w) {
                    prev.insert(w, (i, v));
                    queue.push_back(w);
                }
            }
        }
        if !seen.contains(e.src) {
            continue;
        }
        let mut steps = vec![(skip, e.src)];
        let mut v = e.src;
        let mut back = Vec::new();
        while v != e.dst {
            let (i, u) = prev[&v];
            back.push((i, u));
            v = u;
        }
        steps.extend(back.into_iter().rev());
        if best.as_ref().is_none_or(|b| steps.len() < b.len()) {
            best = Some(steps);
        }
    }
    best
}

/// [`EilNormalizer::normalize`] with a fresh memo.
pub fn eil_normalize(g: &OrientedGraph) -> Result<EilCombo> {
    EilNormalizer::new().normalize(g)
}

pub fn eil_normalize_combo(c: &EilCombo) -> Result<EilCombo> {
    EilNormalizer::new().normalize_combo(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::monomial::basis_monomial;
    use crate::orders::linear_extension;
    use crate::pairing::{graphs_with_edges, pair, random_graph};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(s: &str) -> OrientedGraph {
        parse_graph(s).unwrap()
    }

    /// Coordinates of `g` in the basis, read off the pairing against the
    /// triangular matrix.
    struct Oracle {
        rows: Vec<OrientedGraph>,
        cols: Vec<crate::monomial::Monomial>,
    }

    impl Oracle {
        fn new(n: usize) -> Self {
            let order = linear_extension(n).unwrap();
            Oracle {
                rows: order.iter().map(oriented_tree).collect(),
                cols: order.iter().map(basis_monomial).collect(),
            }
        }

        fn solve(&self, g: &OrientedGraph) -> EilCombo {
            let m = self.rows.len();
            let mut c = vec![0i64; m];
            for j in 0..m {
                let mut v = pair(g, &self.cols[j]);
                for i in 0..j {
                    if c[i] != 0 {
                        v -= c[i] * pair(&self.rows[i], &self.cols[j]);
                    }
                }
                let d = pair(&self.rows[j], &self.cols[j]);
                assert_eq!(d.abs(), 1);
                c[j] = v * d;
            }
            self.rows.iter().cloned().zip(c).collect()
        }
    }

    #[test]
    fn basis_examples() {
        let b = eil_basis(2).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.contains(&g("r 1>2")));
        assert!(b.contains(&g("b 2>1")));
        for n in 1..=5 {
            let b = eil_basis(n).unwrap();
            assert_eq!(b.len(), n.pow(n as u32 - 1));
            assert!(b.iter().all(|x| x.is_consistent() && x.is_tree() && x.sources().len() == 1));
        }
    }

    #[test]
    fn small_examples() {
        assert!(eil_normalize(&g("n 3\nr 1>2")).unwrap().is_empty());
        assert!(eil_normalize(&g("r 1>2\nb 2>1")).unwrap().is_empty());
        assert_eq!(eil_normalize(&g("r 2>1")).unwrap(), EilCombo::single(g("r 1>2"), -1));
        let mut c = EilCombo::single(g("r 2>1"), 2);
        c.add_term(g("n 2"), 5);
        assert_eq!(eil_normalize_combo(&c).unwrap(), EilCombo::single(g("r 1>2"), -2));
        assert!(eil_normalize_combo(&EilCombo::new()).unwrap().is_empty());
    }

    #[test]
    fn fixes_the_basis() {
        for n in 1..=5 {
            let mut norm = EilNormalizer::new();
            for b in eil_basis(n).unwrap() {
                assert_eq!(norm.normalize(&b).unwrap(), EilCombo::single(b.clone(), 1));
            }
        }
    }

    #[test]
    fn all_small_graphs_match_the_oracle() {
        for n in 2..=4 {
            let oracle = Oracle::new(n);
            let mut norm = EilNormalizer::new();
            for x in graphs_with_edges(LetterSet::full(n), n - 1) {
                let got = norm.normalize(&x).unwrap();
                assert!(got.keys().all(|k| k.is_basis_graph()), "{x}");
                assert_eq!(got, oracle.solve(&x), "{x}");
            }
        }
    }

    #[test]
    fn random_graphs_at_five_letters_match_the_oracle() {
        let oracle = Oracle::new(5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut norm = EilNormalizer::new();
        for _ in 0..200 {
            let x = random_graph(LetterSet::full(5), 4, &mut rng);
            assert_eq!(norm.normalize(&x).unwrap(), oracle.solve(&x), "{x}");
        }
    }

    #[test]
    fn cycles_vanish() {
        for n in 3..=4 {
            for k in n..=n + 1 {
                let mut norm = EilNormalizer::new();
                for x in graphs_with_edges(LetterSet::full(n), k) {
                    if x.is_connected() && !x.has_multi_edge() {
                        assert!(norm.normalize(&x).unwrap().is_empty(), "{x}");
                    }
                }
            }
        }
    }

    #[test]
    fn depth_guard_fires() {
        let x = g("r 1>3\nr 2>3");
        let mut norm = EilNormalizer::with_max_depth(1);
        assert!(matches!(norm.normalize(&x), Err(LiebraError::Internal(_))));
        assert!(!EilNormalizer::new().normalize(&x).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn reversing_an_edge_negates(seed in any::<u64>(), n in 2usize..=6, pick in any::<usize>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_graph(LetterSet::full(n), n - 1, &mut rng);
            let i = pick % x.edges().len();
            let mut es = x.edges().to_vec();
            es[i] = es[i].reversed();
            let mut sum = EilCombo::single(x.clone(), 1);
            sum.add_term(x.with_edges(es), 1);
            prop_assert!(eil_normalize_combo(&sum).unwrap().is_empty());
        }
    }
}
