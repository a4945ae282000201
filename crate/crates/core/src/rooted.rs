//! Labeled rooted trees on `{x_1, ..., x_n}` and their enumeration.
//!
//! Free labeled trees are produced by decoding every Prüfer sequence in
//! lexicographic order; each free tree is then rooted at every vertex in
//! increasing order. This fixes the enumeration order used throughout the
//! crate before any of the partial orders is applied.

use std::collections::VecDeque;

use crate::error::{LiebraError, Result};
use crate::letter::{check_alphabet, Letter};

/// A rooted tree on the full alphabet `{x_1, ..., x_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedTree {
    n: usize,
    root: Letter,
    /// `parent[i - 1]` is the parent of `x_i`; `None` exactly at the root.
    parent: Vec<Option<Letter>>,
}

impl RootedTree {
    /// Builds a rooted tree from a parent map, checking that it is acyclic
    /// and has a single root.
    pub fn from_parents(parent: Vec<Option<Letter>>) -> Result<Self> {
        let n = parent.len();
        check_alphabet(n)?;
        let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
        if roots.len() != 1 {
            return Err(LiebraError::NotATree(format!(
                "expected exactly one root, found {}",
                roots.len()
            )));
        }
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                if p.index() as usize > n || p.index() as usize == i + 1 {
                    return Err(LiebraError::NotATree(format!(
                        "invalid parent {p} for x{}",
                        i + 1
                    )));
                }
            }
        }
        // Every vertex must reach the root within n steps.
        for start in 0..n {
            let mut v = start;
            let mut steps = 0;
            while let Some(p) = parent[v] {
                v = p.index() as usize - 1;
                steps += 1;
                if steps > n {
                    return Err(LiebraError::NotATree("parent map has a cycle".into()));
                }
            }
        }
        let root = Letter::new(roots[0] as u8 + 1);
        Ok(RootedTree { n, root, parent })
    }

    /// Roots the free tree given by `edges` at `root`.
    pub fn from_edges(n: usize, edges: &[(Letter, Letter)], root: Letter) -> Result<Self> {
        check_alphabet(n)?;
        if edges.len() + 1 != n {
            return Err(LiebraError::NotATree(format!(
                "{} edges on {n} vertices",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n + 1];
        for &(u, v) in edges {
            for x in [u, v] {
                if x.index() as usize > n {
                    return Err(LiebraError::LetterOutOfRange { letter: x, n });
                }
            }
            adj[u.index() as usize].push(v);
            adj[v.index() as usize].push(u);
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n + 1];
        seen[root.index() as usize] = true;
        let mut queue = VecDeque::from([root]);
        let mut visited = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v.index() as usize] {
                if !seen[w.index() as usize] {
                    seen[w.index() as usize] = true;
                    parent[w.index() as usize - 1] = Some(v);
                    visited += 1;
                    queue.push_back(w);
                }
            }
        }
        if visited != n {
            return Err(LiebraError::NotATree("edges do not connect the alphabet".into()));
        }
        Ok(RootedTree { n, root, parent })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> Letter {
        self.root
    }

    pub fn parent(&self, x: Letter) -> Option<Letter> {
        self.parent[x.index() as usize - 1]
    }

    /// `(parent, child)` pairs in increasing order of the child.
    pub fn edges(&self) -> impl Iterator<Item = (Letter, Letter)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (p, Letter::new(i as u8 + 1))))
    }

    /// Number of edges whose parent is smaller than its child.
    pub fn increasing_edges(&self) -> usize {
        self.edges().filter(|(p, c)| p < c).count()
    }
}

/// Decodes a Prüfer sequence (entries in `1..=n`, length `n - 2`) into the
/// edge list of a labeled tree on `n` vertices.
pub fn prufer_decode(n: usize, seq: &[u8]) -> Vec<(Letter, Letter)> {
    debug_assert!(n >= 2 && seq.len() == n - 2);
    let mut degree = vec![1u32; n + 1];
    for &s in seq {
        degree[s as usize] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (1..=n).find(|&v| degree[v] == 1).expect("a leaf always exists");
        edges.push((Letter::new(leaf as u8), Letter::new(s)));
        degree[leaf] -= 1;
        degree[s as usize] -= 1;
    }
    let mut last = (1..=n).filter(|&v| degree[v] == 1);
    let u = last.next().expect("two vertices remain");
    let v = last.next().expect("two vertices remain");
    edges.push((Letter::new(u as u8), Letter::new(v as u8)));
    edges
}

/// Iterator over all labeled free trees on `n >= 2` vertices, in
/// lexicographic order of their Prüfer sequences.
pub struct FreeTrees {
    n: usize,
    seq: Vec<u8>,
    done: bool,
}

impl FreeTrees {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "free trees need at least two vertices");
        FreeTrees {
            n,
            seq: vec![1; n - 2],
            done: false,
        }
    }
}

impl Iterator for FreeTrees {
    type Item = Vec<(Letter, Letter)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let tree = prufer_decode(self.n, &self.seq);
        // Odometer step, last position fastest.
        let mut i = self.seq.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if (self.seq[i] as usize) < self.n {
                self.seq[i] += 1;
                break;
            }
            self.seq[i] = 1;
        }
        Some(tree)
    }
}

/// Streams all `n^(n-1)` rooted trees, ordered by (Prüfer sequence, root).
pub fn rooted_trees(n: usize) -> Result<impl Iterator<Item = RootedTree>> {
    check_alphabet(n)?;
    let single = (n == 1).then(|| RootedTree {
        n: 1,
        root: Letter::new(1),
        parent: vec![None],
    });
    let many = (n >= 2).then(move || {
        FreeTrees::new(n).flat_map(move |edges| {
            (1..=n as u8).map(move |r| {
                RootedTree::from_edges(n, &edges, Letter::new(r)).expect("decoded tree is valid")
            })
        })
    });
    Ok(single.into_iter().chain(many.into_iter().flatten()))
}

/// All rooted trees on `n` letters.
pub fn enumerate_rooted_trees(n: usize) -> Result<Vec<RootedTree>> {
    Ok(rooted_trees(n)?.collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn x(i: u8) -> Letter {
        Letter::new(i)
    }

    #[test]
    fn zero_letters_is_an_error() {
        assert!(matches!(enumerate_rooted_trees(0), Err(LiebraError::EmptyAlphabet)));
    }

    #[test]
    fn small_cases() {
        let t1 = enumerate_rooted_trees(1).unwrap();
        assert_eq!(t1.len(), 1);
        assert_eq!(t1[0].root(), x(1));

        let t2 = enumerate_rooted_trees(2).unwrap();
        assert_eq!(t2.len(), 2);
        assert_eq!(t2[0].root(), x(1));
        assert_eq!(t2[0].parent(x(2)), Some(x(1)));
        assert_eq!(t2[1].root(), x(2));

        assert_eq!(enumerate_rooted_trees(3).unwrap().len(), 9);
    }

    #[test]
    fn counts_and_distinctness() {
        for n in 1..=6usize {
            let all = enumerate_rooted_trees(n).unwrap();
            assert_eq!(all.len(), n.pow(n as u32 - 1), "n = {n}");
            let distinct: HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
        }
    }

    #[test]
    fn prufer_decoding_matches_known_tree() {
        // Sequence (4,4,4,5) on 6 vertices: star at 4 plus the edge 4-5 and 5-6.
        let edges = prufer_decode(6, &[4, 4, 4, 5]);
        assert_eq!(
            edges,
            vec![(x(1), x(4)), (x(2), x(4)), (x(3), x(4)), (x(4), x(5)), (x(5), x(6))]
        );
    }

    #[test]
    fn parent_map_validation() {
        assert!(RootedTree::from_parents(vec![None, Some(x(1)), Some(x(2))]).is_ok());
        assert!(RootedTree::from_parents(vec![Some(x(2)), Some(x(1)), None]).is_err());
        assert!(RootedTree::from_parents(vec![None, None]).is_err());
    }
}
