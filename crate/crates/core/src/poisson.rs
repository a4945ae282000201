//! The Poisson extension: monomials built from two brackets and a
//! commutative product, the forest basis, normalization by the Leibniz rules
//! followed by Algorithm LC, and the pairing with oriented graphs.
//!
//! A monomial is a quasi-binary tree. Product vertices have unordered
//! children; bracket vertices have an ordered left and right slot, each
//! holding a product.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{LiebraError, Result};
use crate::graph::{oriented_tree, DirectedEdge, OrientedGraph, TwoColoredTree};
use crate::letter::{check_alphabet, Color, Letter, LetterSet};
use crate::lie::{LieNormalizer, RelationKind};
use crate::linalg::{det_mod_p_signed, kronecker_all, DET_PRIME};
use crate::lincombo::LinCombo;
use crate::monomial::{basis_monomial, check_multilinear, Monomial, Reader};
use crate::orders::linear_extension;
use crate::pairing::{gamma_relations_at, graphs_with_edges};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    Leaf(Letter),
    Bracket(Color, Box<PoissonMonomial>, Box<PoissonMonomial>),
}

/// A nonempty commutative product of factors, kept sorted by least letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PoissonMonomial {
    factors: Vec<Factor>,
}

impl Factor {
    pub fn letters(&self) -> LetterSet {
        match self {
            Factor::Leaf(x) => LetterSet::singleton(*x),
            Factor::Bracket(_, l, r) => l.letters().union(r.letters()),
        }
    }

    fn min_letter(&self) -> Letter {
        self.letters().min().expect("factors are nonempty")
    }

    fn leaves_into(&self, out: &mut Vec<Letter>) {
        match self {
            Factor::Leaf(x) => out.push(*x),
            Factor::Bracket(_, l, r) => {
                l.leaves_into(out);
                r.leaves_into(out);
            }
        }
    }

    /// The factor of a bracket monomial.
    pub fn from_lie(m: &Monomial) -> Factor {
        match m {
            Monomial::Leaf(x) => Factor::Leaf(*x),
            Monomial::Node(c, l, r) => Factor::Bracket(
                *c,
                Box::new(PoissonMonomial::from_lie(l)),
                Box::new(PoissonMonomial::from_lie(r)),
            ),
        }
    }

    fn to_lie(&self) -> Option<Monomial> {
        match self {
            Factor::Leaf(x) => Some(Monomial::Leaf(*x)),
            Factor::Bracket(c, l, r) => Some(Monomial::node(*c, l.to_lie()?, r.to_lie()?)),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Factor::Leaf(x) => serde_json::json!(x.index()),
            Factor::Bracket(c, l, r) => serde_json::json!({
                "c": c, "l": l.to_json(), "r": r.to_json()
            }),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Leaf(x) => write!(f, "{x}"),
            Factor::Bracket(Color::Red, l, r) => write!(f, "[{l},{r}]"),
            Factor::Bracket(Color::Blue, l, r) => write!(f, "<{l},{r}>"),
        }
    }
}

impl PoissonMonomial {
    /// Sorts the factors. Panics on an empty product.
    pub fn product(mut factors: Vec<Factor>) -> Self {
        assert!(!factors.is_empty(), "empty product");
        factors.sort_by_key(Factor::min_letter);
        PoissonMonomial { factors }
    }

    pub fn single(f: Factor) -> Self {
        PoissonMonomial { factors: vec![f] }
    }

    pub fn leaf(i: u8) -> Self {
        Self::single(Factor::Leaf(Letter::new(i)))
    }

    pub fn bracket(color: Color, left: PoissonMonomial, right: PoissonMonomial) -> Self {
        Self::single(Factor::Bracket(color, Box::new(left), Box::new(right)))
    }

    pub fn from_lie(m: &Monomial) -> Self {
        Self::single(Factor::from_lie(m))
    }

    /// The product of bracket monomials.
    pub fn from_lie_factors(ms: &[Monomial]) -> Self {
        Self::product(ms.iter().map(Factor::from_lie).collect())
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn letters(&self) -> LetterSet {
        self.factors.iter().fold(LetterSet::EMPTY, |s, f| s.union(f.letters()))
    }

    pub fn leaves(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.leaves_into(&mut out);
        out
    }

    fn leaves_into(&self, out: &mut Vec<Letter>) {
        for f in &self.factors {
            f.leaves_into(out);
        }
    }

    pub fn multiply(&self, other: &PoissonMonomial) -> Self {
        let mut fs = self.factors.clone();
        fs.extend(other.factors.iter().cloned());
        Self::product(fs)
    }

    /// The bracket monomial when every product has a single factor.
    pub fn to_lie(&self) -> Option<Monomial> {
        match self.factors.as_slice() {
            [f] => f.to_lie(),
            _ => None,
        }
    }

    pub fn bracket_count(&self) -> usize {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Leaf(_) => 0,
                Factor::Bracket(_, l, r) => 1 + l.bracket_count() + r.bracket_count(),
            })
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.factors.iter().map(Factor::to_json).collect())
    }
}

impl fmt::Display for PoissonMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl Reader<'_> {
    fn poisson_product(&mut self) -> Result<Vec<Factor>> {
        let mut fs = self.poisson_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    fs.extend(self.poisson_factor()?);
                }
                Some(b'x') | Some(b'[') | Some(b'<') | Some(b'(') => fs.extend(self.poisson_factor()?),
                _ => return Ok(fs),
            }
        }
    }

    /// One factor, or several when a parenthesized product is flattened.
    fn poisson_factor(&mut self) -> Result<Vec<Factor>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let fs = self.poisson_product()?;
                self.expect(b')')?;
                Ok(fs)
            }
            Some(open @ (b'[' | b'<')) => {
                self.pos += 1;
                let l = PoissonMonomial::product(self.poisson_product()?);
                self.expect(b',')?;
                let r = PoissonMonomial::product(self.poisson_product()?);
                let (close, color) =
                    if open == b'[' { (b']', Color::Red) } else { (b'>', Color::Blue) };
                self.expect(close)?;
                Ok(vec![Factor::Bracket(color, Box::new(l), Box::new(r))])
            }
            _ => Ok(vec![Factor::Leaf(self.letter()?)]),
        }
    }
}

/// Parses `product := factor ('*'? factor)*` with
/// `factor := xN | '[' product ',' product ']' | '<' product ',' product '>' | '(' product ')'`.
pub fn parse_poisson(text: &str, n: Option<usize>) -> Result<PoissonMonomial> {
    let mut r = Reader::new(text);
    let fs = r.poisson_product()?;
    r.finish()?;
    let pm = PoissonMonomial::product(fs);
    check_multilinear(&pm.leaves(), n)?;
    Ok(pm)
}

/// Every Poisson monomial whose leaves are exactly `letters`.
pub fn poisson_monomials_on(letters: LetterSet) -> Vec<PoissonMonomial> {
    let mut products = HashMap::new();
    let mut factors = HashMap::new();
    products_on(letters, &mut products, &mut factors)
}

type ProductMemo = HashMap<LetterSet, Vec<PoissonMonomial>>;
type FactorMemo = HashMap<LetterSet, Vec<Factor>>;

fn products_on(s: LetterSet, pm: &mut ProductMemo, fm: &mut FactorMemo) -> Vec<PoissonMonomial> {
    if let Some(v) = pm.get(&s) {
        return v.clone();
    }
    let lo = s.min().expect("nonempty");
    let rest_bits = s.difference(LetterSet::singleton(lo)).bits();
    let mut out = Vec::new();
    // The factor holding the least letter, then a product of the rest.
    let mut sub = rest_bits;
    loop {
        let block = LetterSet::from_bits(sub).union(LetterSet::singleton(lo));
        let others = s.difference(block);
        let heads = factors_on(block, pm, fm);
        if others.is_empty() {
            out.extend(heads.into_iter().map(PoissonMonomial::single));
        } else {
            let tails = products_on(others, pm, fm);
            for h in &heads {
                for t in &tails {
                    let mut fs = vec![h.clone()];
                    fs.extend(t.factors.iter().cloned());
                    out.push(PoissonMonomial { factors: fs });
                }
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest_bits;
    }
    pm.insert(s, out.clone());
    out
}

fn factors_on(s: LetterSet, pm: &mut ProductMemo, fm: &mut FactorMemo) -> Vec<Factor> {
    if let Some(v) = fm.get(&s) {
        return v.clone();
    }
    let out = if s.len() == 1 {
        vec![Factor::Leaf(s.min().expect("nonempty"))]
    } else {
        let bits = s.bits();
        let mut out = Vec::new();
        let mut a = (bits - 1) & bits;
        while a != 0 {
            let left = LetterSet::from_bits(a);
            let ls = products_on(left, pm, fm);
            let rs = products_on(s.difference(left), pm, fm);
            for c in Color::BOTH {
                for l in &ls {
                    for r in &rs {
                        out.push(Factor::Bracket(c, Box::new(l.clone()), Box::new(r.clone())));
                    }
                }
            }
            a = (a - 1) & bits;
        }
        out
    };
    fm.insert(s, out.clone());
    out
}

/// A random Poisson monomial on `letters`.
pub fn random_poisson<R: Rng + ?Sized>(letters: LetterSet, rng: &mut R) -> PoissonMonomial {
    let mut xs: Vec<Letter> = letters.iter().collect();
    xs.shuffle(rng);
    random_product(&xs, rng)
}

fn random_product<R: Rng + ?Sized>(xs: &[Letter], rng: &mut R) -> PoissonMonomial {
    let k = rng.gen_range(1..=xs.len());
    let mut cuts: Vec<usize> = (1..xs.len()).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    let mut factors = Vec::with_capacity(k);
    let mut start = 0;
    for end in cuts.into_iter().chain([xs.len()]) {
        factors.push(random_factor(&xs[start..end], rng));
        start = end;
    }
    PoissonMonomial::product(factors)
}

fn random_factor<R: Rng + ?Sized>(xs: &[Letter], rng: &mut R) -> Factor {
    if xs.len() == 1 {
        return Factor::Leaf(xs[0]);
    }
    let split = rng.gen_range(1..xs.len());
    let color = if rng.gen_bool(0.5) { Color::Red } else { Color::Blue };
    Factor::Bracket(
        color,
        Box::new(random_product(&xs[..split], rng)),
        Box::new(random_product(&xs[split..], rng)),
    )
}

/// A set partition, blocks in increasing order of their largest letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    blocks: Vec<LetterSet>,
}

impl Partition {
    pub fn new(mut blocks: Vec<LetterSet>) -> Result<Self> {
        let mut seen = LetterSet::EMPTY;
        for b in &blocks {
            if b.is_empty() {
                return Err(LiebraError::Internal("empty block".into()));
            }
            if !seen.is_disjoint(*b) {
                let x = seen.intersection(*b).min().expect("overlap");
                return Err(LiebraError::RepeatedLetter(x));
            }
            seen = seen.union(*b);
        }
        blocks.sort_by_key(|b| LetterSet::max(*b));
        Ok(Partition { blocks })
    }

    pub fn blocks(&self) -> &[LetterSet] {
        &self.blocks
    }

    pub fn letters(&self) -> LetterSet {
        self.blocks.iter().fold(LetterSet::EMPTY, |s, b| s.union(*b))
    }

    /// The number of forests with these blocks.
    pub fn size(&self) -> usize {
        self.blocks.iter().map(|b| b.len().pow(b.len() as u32 - 1)).product()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            let xs: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "{{{}}}", xs.join(","))?;
        }
        Ok(())
    }
}

/// All set partitions of `letters`.
pub fn partitions_of(letters: LetterSet) -> Vec<Partition> {
    let mut out = Vec::new();
    let xs: Vec<Letter> = letters.iter().collect();
    fn rec(xs: &[Letter], blocks: &mut Vec<LetterSet>, out: &mut Vec<Partition>) {
        let Some((&x, rest)) = xs.split_first() else {
            out.push(Partition::new(blocks.clone()).expect("disjoint by construction"));
            return;
        };
        for i in 0..blocks.len() {
            blocks[i].insert(x);
            rec(rest, blocks, out);
            blocks[i].remove(x);
        }
        blocks.push(LetterSet::singleton(x));
        rec(rest, blocks, out);
        blocks.pop();
    }
    rec(&xs, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Pattern-avoiding trees on the blocks of a partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest {
    components: Vec<TwoColoredTree>,
}

impl Forest {
    pub fn new(mut components: Vec<TwoColoredTree>) -> Result<Self> {
        components.sort_by_key(|t| t.vertices().max());
        Partition::new(components.iter().map(|t| t.vertices()).collect())?;
        Ok(Forest { components })
    }

    pub fn components(&self) -> &[TwoColoredTree] {
        &self.components
    }

    pub fn partition(&self) -> Partition {
        Partition {
            blocks: self.components.iter().map(|t| t.vertices()).collect(),
        }
    }

    /// The union of the consistent orientations of the components.
    pub fn graph(&self) -> OrientedGraph {
        let vertices = self.partition().letters();
        let edges: Vec<DirectedEdge> = self
            .components
            .iter()
            .flat_map(|t| oriented_tree(t).edges().to_vec())
            .collect();
        OrientedGraph::new(vertices, edges).expect("edges lie inside their blocks")
    }

    /// The product of the basis monomials of the components.
    pub fn basis_element(&self) -> PoissonMonomial {
        let ms: Vec<Monomial> = self.components.iter().map(basis_monomial).collect();
        PoissonMonomial::from_lie_factors(&ms)
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            if t.n() == 1 {
                write!(f, "{}", t.root())?;
            } else {
                write!(f, "{t}")?;
            }
        }
        Ok(())
    }
}

/// Trees on `letters` in the order of a linear extension of `<=_ind`.
pub fn ordered_trees_on(letters: LetterSet) -> Result<Vec<TwoColoredTree>> {
    Ok(linear_extension(letters.len())?.iter().map(|t| t.transport(letters)).collect())
}

/// The forests on a partition, components ordered lexicographically by the
/// per-block tree order.
pub fn forests_on(p: &Partition) -> Result<Vec<Forest>> {
    let per_block: Vec<Vec<TwoColoredTree>> =
        p.blocks.iter().map(|b| ordered_trees_on(*b)).collect::<Result<_>>()?;
    let mut out = vec![Vec::new()];
    for options in &per_block {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for t in options {
                let mut v: Vec<TwoColoredTree> = prefix.clone();
                v.push(*t);
                next.push(v);
            }
        }
        out = next;
    }
    Ok(out.into_iter().map(|components| Forest { components }).collect())
}

/// All forests on `x1..xn`, partition by partition.
pub fn enumerate_forests(n: usize) -> Result<Vec<Forest>> {
    check_alphabet(n)?;
    let mut out = Vec::new();
    for p in partitions_of(LetterSet::full(n)) {
        out.extend(forests_on(&p)?);
    }
    Ok(out)
}

/// One basis product per forest, in [`enumerate_forests`] order.
pub fn poisson_basis(n: usize) -> Result<Vec<PoissonMonomial>> {
    Ok(enumerate_forests(n)?.iter().map(Forest::basis_element).collect())
}

pub fn is_poisson_basis(pm: &PoissonMonomial) -> bool {
    pm.factors.iter().all(|f| f.to_lie().is_some_and(|m| crate::monomial::is_basis_monomial(&m)))
}

/// A product of bracket monomials, sorted by least letter.
type LieProduct = Vec<Monomial>;

fn sort_product(p: &mut LieProduct) {
    p.sort_by_key(|m| m.letters().min());
}

/// Rewrites Poisson monomials as combinations of basis products.
#[derive(Debug, Default)]
pub struct PoissonNormalizer {
    lie: LieNormalizer,
}

impl PoissonNormalizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn normalize(&mut self, pm: &PoissonMonomial) -> Result<LinCombo<PoissonMonomial>> {
        let mut out = LinCombo::new();
        for (prod, k) in expand_product(pm) {
            let mut acc: LinCombo<LieProduct> = LinCombo::single(Vec::new(), k);
            for m in &prod {
                let lc = self.lie.normalize(m)?;
                let mut next = LinCombo::new();
                for (p, a) in acc.iter() {
                    for (b, c) in lc.iter() {
                        let mut q = p.clone();
                        q.push(b.clone());
                        next.add_term(q, a * c);
                    }
                }
                acc = next;
            }
            for (mut p, a) in acc {
                sort_product(&mut p);
                out.add_term(PoissonMonomial::from_lie_factors(&p), a);
            }
        }
        Ok(out)
    }

    pub fn normalize_combo(&mut self, c: &LinCombo<PoissonMonomial>) -> Result<LinCombo<PoissonMonomial>> {
        let mut out = LinCombo::new();
        for (pm, k) in c.iter() {
            out.add_scaled(&self.normalize(pm)?, k);
        }
        Ok(out)
    }
}

/// Pushes every product out of every bracket with the Leibniz rule in both
/// slots: `{p1...pa, q1...qb} = sum {ps, qt} * (other p) * (other q)`.
fn expand_product(pm: &PoissonMonomial) -> LinCombo<LieProduct> {
    let mut acc: LinCombo<LieProduct> = LinCombo::single(Vec::new(), 1);
    for f in &pm.factors {
        let ef = expand_factor(f);
        let mut next = LinCombo::new();
        for (p, a) in acc.iter() {
            for (q, b) in ef.iter() {
                let mut r = p.clone();
                r.extend(q.iter().cloned());
                sort_product(&mut r);
                next.add_term(r, a * b);
            }
        }
        acc = next;
    }
    acc
}

fn expand_factor(f: &Factor) -> LinCombo<LieProduct> {
    match f {
        Factor::Leaf(x) => LinCombo::single(vec![Monomial::Leaf(*x)], 1),
        Factor::Bracket(c, l, r) => {
            let (el, er) = (expand_product(l), expand_product(r));
            let mut out = LinCombo::new();
            for (p, a) in el.iter() {
                for (q, b) in er.iter() {
                    for s in 0..p.len() {
                        for t in 0..q.len() {
                            let mut term: LieProduct = Vec::with_capacity(p.len() + q.len() - 1);
                            term.push(Monomial::node(*c, p[s].clone(), q[t].clone()));
                            term.extend(p.iter().enumerate().filter(|&(i, _)| i != s).map(|(_, m)| m.clone()));
                            term.extend(q.iter().enumerate().filter(|&(i, _)| i != t).map(|(_, m)| m.clone()));
                            sort_product(&mut term);
                            out.add_term(term, a * b);
                        }
                    }
                }
            }
            out
        }
    }
}

pub fn poisson_normalize(pm: &PoissonMonomial) -> Result<LinCombo<PoissonMonomial>> {
    PoissonNormalizer::new().normalize(pm)
}

pub fn poisson_normalize_combo(c: &LinCombo<PoissonMonomial>) -> Result<LinCombo<PoissonMonomial>> {
    PoissonNormalizer::new().normalize_combo(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NodeKind {
    Product,
    Bracket(Color),
}

/// Root-to-leaf paths of a quasi-binary tree. Vertices are numbered in
/// preorder; a step records the vertex and the child taken.
#[derive(Debug, Clone)]
pub struct QbtIndex {
    letters: LetterSet,
    kinds: Vec<NodeKind>,
    brackets: usize,
    paths: HashMap<Letter, Vec<(u16, u16)>>,
}

impl QbtIndex {
    pub fn new(t: &PoissonMonomial) -> Self {
        let mut idx = QbtIndex {
            letters: t.letters(),
            kinds: Vec::new(),
            brackets: 0,
            paths: HashMap::new(),
        };
        idx.walk_product(t, &mut Vec::new());
        idx
    }

    fn walk_product(&mut self, p: &PoissonMonomial, stack: &mut Vec<(u16, u16)>) {
        let id = self.kinds.len() as u16;
        self.kinds.push(NodeKind::Product);
        for (i, f) in p.factors.iter().enumerate() {
            stack.push((id, i as u16));
            match f {
                Factor::Leaf(x) => {
                    self.paths.insert(*x, stack.clone());
                }
                Factor::Bracket(c, l, r) => {
                    let b = self.kinds.len() as u16;
                    self.kinds.push(NodeKind::Bracket(*c));
                    self.brackets += 1;
                    stack.push((b, 0));
                    self.walk_product(l, stack);
                    stack.last_mut().expect("pushed").1 = 1;
                    self.walk_product(r, stack);
                    stack.pop();
                }
            }
            stack.pop();
        }
    }

    pub fn bracket_count(&self) -> usize {
        self.brackets
    }

    /// The nadir of the path `i -> j` when it is a bracket: its id, color,
    /// and whether the path runs from the right slot to the left one.
    pub fn bracket_nadir(&self, i: Letter, j: Letter) -> Option<(usize, Color, bool)> {
        let (pi, pj) = (self.paths.get(&i)?, self.paths.get(&j)?);
        let k = pi.iter().zip(pj).position(|(a, b)| a != b)?;
        let (node, branch) = pi[k];
        match self.kinds[node as usize] {
            NodeKind::Bracket(c) => Some((node as usize, c, branch == 1)),
            NodeKind::Product => None,
        }
    }

    pub fn pair(&self, g: &OrientedGraph) -> i64 {
        if g.vertices() != self.letters || g.edges().len() != self.brackets {
            return 0;
        }
        let mut used = BTreeSet::new();
        let mut ccw = 0;
        for e in g.edges() {
            match self.bracket_nadir(e.src, e.dst) {
                Some((node, c, turned)) if c == e.color && used.insert(node) => ccw += turned as u32,
                _ => return 0,
            }
        }
        if ccw % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// The pairing of a graph with a quasi-binary tree.
pub fn pair_com(g: &OrientedGraph, pm: &PoissonMonomial) -> i64 {
    QbtIndex::new(pm).pair(g)
}

pub fn pair_com_combo(beta: &LinCombo<OrientedGraph>, alpha: &LinCombo<PoissonMonomial>) -> i64 {
    alpha
        .iter()
        .map(|(t, a)| {
            let idx = QbtIndex::new(t);
            a * beta.iter().map(|(g, b)| b * idx.pair(g)).sum::<i64>()
        })
        .sum()
}

/// The diagonal block of one partition.
#[derive(Debug, Clone)]
pub struct ComBlock {
    pub partition: Partition,
    pub forests: Vec<Forest>,
    pub matrix: Vec<Vec<i64>>,
    /// Kronecker product of the per-block pairing matrices.
    pub kronecker: Vec<Vec<i64>>,
    /// Nonzero entries between this block's rows and other blocks' columns.
    pub cross_nonzero: Vec<(Forest, PoissonMonomial)>,
    pub det_mod_p: i64,
}

impl ComBlock {
    pub fn dim(&self) -> usize {
        self.forests.len()
    }

    pub fn matches_kronecker(&self) -> bool {
        self.matrix == self.kronecker
    }

    pub fn is_nonsingular(&self) -> bool {
        self.det_mod_p != 0
    }

    pub fn passes(&self) -> bool {
        self.matches_kronecker() && self.is_nonsingular() && self.cross_nonzero.is_empty()
    }
}

/// The per-block matrix of `pair(o_G, b_H)` for trees on one block.
fn lie_block(letters: LetterSet) -> Result<Vec<Vec<i64>>> {
    let trees = ordered_trees_on(letters)?;
    let cols: Vec<Monomial> = trees.iter().map(basis_monomial).collect();
    Ok(trees
        .iter()
        .map(|g| {
            let og = oriented_tree(g);
            cols.iter().map(|b| crate::pairing::pair(&og, b)).collect()
        })
        .collect())
}

/// Computes the block of `p` and checks its rows against the columns of
/// every other partition of the same letters.
pub fn com_block(p: &Partition) -> Result<ComBlock> {
    let forests = forests_on(p)?;
    let rows: Vec<OrientedGraph> = forests.iter().map(Forest::graph).collect();
    let cols: Vec<QbtIndex> = forests.iter().map(|f| QbtIndex::new(&f.basis_element())).collect();
    let matrix: Vec<Vec<i64>> = rows.iter().map(|g| cols.iter().map(|c| c.pair(g)).collect()).collect();
    let factors: Vec<Vec<Vec<i64>>> =
        p.blocks.iter().map(|b| lie_block(*b)).collect::<Result<_>>()?;
    let kronecker = kronecker_all(&factors);
    let mut cross_nonzero = Vec::new();
    for q in partitions_of(p.letters()) {
        if &q == p {
            continue;
        }
        for h in forests_on(&q)? {
            let b = h.basis_element();
            let idx = QbtIndex::new(&b);
            for (f, g) in forests.iter().zip(&rows) {
                if idx.pair(g) != 0 {
                    cross_nonzero.push((f.clone(), b.clone()));
                }
            }
        }
    }
    let det_mod_p = det_mod_p_signed(&matrix, DET_PRIME);
    Ok(ComBlock {
        partition: p.clone(),
        forests,
        matrix,
        kronecker,
        cross_nonzero,
        det_mod_p,
    })
}

#[derive(Debug, Clone)]
pub struct ComMatrixReport {
    pub n: usize,
    pub blocks: Vec<ComBlock>,
}

impl ComMatrixReport {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(ComBlock::dim).sum()
    }

    pub fn passes(&self) -> bool {
        self.blocks.iter().all(ComBlock::passes)
    }
}

/// Every diagonal block on `x1..xn`, which together cover the full matrix.
pub fn com_matrix(n: usize) -> Result<ComMatrixReport> {
    check_alphabet(n)?;
    let parts = partitions_of(LetterSet::full(n));
    let blocks = parts.par_iter().map(com_block).collect::<Result<Vec<_>>>()?;
    Ok(ComMatrixReport { n, blocks })
}

/// Relation kinds among Poisson monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QbtKind {
    Lie(RelationKind),
    /// Leibniz rule for `[.,.]`.
    D1,
    /// Leibniz rule for `<.,.>`.
    D2,
}

impl QbtKind {
    pub const ALL: [QbtKind; 7] = [
        QbtKind::Lie(RelationKind::S1),
        QbtKind::Lie(RelationKind::S2),
        QbtKind::Lie(RelationKind::J1),
        QbtKind::Lie(RelationKind::J2),
        QbtKind::Lie(RelationKind::MJ),
        QbtKind::D1,
        QbtKind::D2,
    ];
}

impl fmt::Display for QbtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QbtKind::Lie(k) => write!(f, "{k}"),
            QbtKind::D1 => f.write_str("D1"),
            QbtKind::D2 => f.write_str("D2"),
        }
    }
}

impl std::str::FromStr for QbtKind {
    type Err = LiebraError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "D1" | "d1" => Ok(QbtKind::D1),
            "D2" | "d2" => Ok(QbtKind::D2),
            _ => s
                .parse()
                .map(QbtKind::Lie)
                .map_err(|message| LiebraError::Syntax { offset: 0, message }),
        }
    }
}

/// Replaces the placeholder leaves `x1..xk` of a bracket monomial by
/// products.
fn fill(m: &Monomial, slots: &[PoissonMonomial]) -> PoissonMonomial {
    match m {
        Monomial::Leaf(x) => slots[x.index() as usize - 1].clone(),
        Monomial::Node(c, l, r) => PoissonMonomial::bracket(*c, fill(l, slots), fill(r, slots)),
    }
}

/// A bracket relation with products in the slots, as a combination of
/// single factors.
fn lie_terms(kind: RelationKind, slots: &[PoissonMonomial]) -> Vec<(Factor, i64)> {
    let placeholders: Vec<Monomial> = (1..=slots.len() as u8).map(Monomial::leaf).collect();
    kind.instantiate(&placeholders)
        .into_iter()
        .map(|(m, k)| {
            let pm = fill(&m, slots);
            (pm.factors.into_iter().next().expect("a bracket"), k)
        })
        .collect()
}

fn replace_factor(p: &PoissonMonomial, i: usize, with: Factor, extra: &[Factor]) -> PoissonMonomial {
    let mut fs = p.factors.clone();
    fs[i] = with;
    fs.extend(extra.iter().cloned());
    PoissonMonomial::product(fs)
}

/// Relations of `kind` whose site is the factor `i` of `p`, or for the
/// Leibniz kinds whose product vertex is `p` itself.
fn local_relations(p: &PoissonMonomial, i: usize, kind: QbtKind) -> Vec<LinCombo<PoissonMonomial>> {
    let Factor::Bracket(c, a, rest) = &p.factors[i] else {
        return Vec::new();
    };
    let site = |terms: Vec<(Factor, i64)>| -> LinCombo<PoissonMonomial> {
        terms.into_iter().map(|(f, k)| (replace_factor(p, i, f, &[]), k)).collect()
    };
    match kind {
        QbtKind::Lie(k @ (RelationKind::S1 | RelationKind::S2)) => {
            let want = if k == RelationKind::S1 { Color::Red } else { Color::Blue };
            if *c != want {
                return Vec::new();
            }
            vec![site(lie_terms(k, &[(**a).clone(), (**rest).clone()]))]
        }
        QbtKind::Lie(k) => {
            let [Factor::Bracket(c2, b, d)] = rest.factors.as_slice() else {
                return Vec::new();
            };
            let fits = match k {
                RelationKind::J1 => *c == Color::Red && *c2 == Color::Red,
                RelationKind::J2 => *c == Color::Blue && *c2 == Color::Blue,
                _ => c != c2,
            };
            if !fits {
                return Vec::new();
            }
            vec![site(lie_terms(k, &[(**a).clone(), (**b).clone(), (**d).clone()]))]
        }
        QbtKind::D1 | QbtKind::D2 => {
            let want = if kind == QbtKind::D1 { Color::Red } else { Color::Blue };
            let m = rest.factors.len();
            if *c != want || m < 2 {
                return Vec::new();
            }
            // Split the right slot into groups B and C, both nonempty, with
            // the first factor in B so each split is listed once.
            let mut out = Vec::new();
            for mask in 0..(1u32 << (m - 1)) {
                let in_b = |j: usize| j == 0 || mask & (1 << (j - 1)) != 0;
                let (b, cc): (Vec<_>, Vec<_>) =
                    rest.factors.iter().enumerate().partition(|&(j, _)| in_b(j));
                if cc.is_empty() {
                    continue;
                }
                let b: Vec<Factor> = b.into_iter().map(|(_, f)| f.clone()).collect();
                let cc: Vec<Factor> = cc.into_iter().map(|(_, f)| f.clone()).collect();
                let keep = |g: &[Factor]| {
                    Factor::Bracket(*c, a.clone(), Box::new(PoissonMonomial::product(g.to_vec())))
                };
                let mut combo = LinCombo::single(p.clone(), 1);
                combo.add_term(replace_factor(p, i, keep(&b), &cc), -1);
                combo.add_term(replace_factor(p, i, keep(&cc), &b), -1);
                out.push(combo);
            }
            out
        }
    }
}

/// Every relation combination of `kind` at some site of `t`.
pub fn qbt_relations_at(t: &PoissonMonomial, kind: QbtKind) -> Vec<LinCombo<PoissonMonomial>> {
    let mut out = Vec::new();
    for i in 0..t.factors.len() {
        out.extend(local_relations(t, i, kind));
        if let Factor::Bracket(c, l, r) = &t.factors[i] {
            for combo in qbt_relations_at(l, kind) {
                out.push(
                    combo
                        .into_iter()
                        .map(|(l2, k)| (replace_factor(t, i, Factor::Bracket(*c, Box::new(l2), r.clone()), &[]), k))
                        .collect(),
                );
            }
            for combo in qbt_relations_at(r, kind) {
                out.push(
                    combo
                        .into_iter()
                        .map(|(r2, k)| (replace_factor(t, i, Factor::Bracket(*c, l.clone(), Box::new(r2)), &[]), k))
                        .collect(),
                );
            }
        }
    }
    out
}

/// All relation combinations of `kind` on `x1..xn`, without repetition.
pub fn qbt_relation_generators(n: usize, kind: QbtKind) -> Result<Vec<LinCombo<PoissonMonomial>>> {
    check_alphabet(n)?;
    let set: BTreeSet<LinCombo<PoissonMonomial>> = poisson_monomials_on(LetterSet::full(n))
        .iter()
        .flat_map(|t| qbt_relations_at(t, kind))
        .collect();
    Ok(set.into_iter().collect())
}

/// A relation of `kind` at a random site of a random monomial, or `None`
/// when none turned up.
pub fn random_qbt_relation<R: Rng + ?Sized>(
    n: usize,
    kind: QbtKind,
    rng: &mut R,
) -> Option<LinCombo<PoissonMonomial>> {
    for _ in 0..1000 {
        let t = random_poisson(LetterSet::full(n), rng);
        let sites = qbt_relations_at(&t, kind);
        if !sites.is_empty() {
            return Some(sites[rng.gen_range(0..sites.len())].clone());
        }
    }
    None
}

/// Generators of the graph-side relations for the Poisson pairing: the
/// symmetry and Jacobi combinations at graphs with up to `n - 1` edges, and
/// graphs with a parallel pair. Disconnected graphs are not relations here.
pub fn com_graph_relation_generators(n: usize) -> Result<Vec<LinCombo<OrientedGraph>>> {
    check_alphabet(n)?;
    let mut set = BTreeSet::new();
    for k in 1..n {
        for g in graphs_with_edges(LetterSet::full(n), k) {
            if g.has_multi_edge() {
                set.insert(LinCombo::single(g.clone(), 1));
            }
            for kind in RelationKind::ALL {
                set.extend(gamma_relations_at(&g, kind));
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// `p(n)` from the exponential formula against `(n+1)^(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpFormulaRow {
    pub n: usize,
    pub convolution: u128,
    pub closed_form: u128,
}

impl ExpFormulaRow {
    pub fn ok(&self) -> bool {
        self.convolution == self.closed_form
    }
}

/// `p(n) = sum_k C(n-1, k-1) k^(k-1) p(n-k)`, `p(0) = 1`, for `n <= max_n`.
pub fn exp_formula_check(max_n: usize) -> Result<Vec<ExpFormulaRow>> {
    if max_n > 20 {
        return Err(LiebraError::AlphabetTooLarge(max_n));
    }
    let mut binom = vec![vec![0u128; max_n + 1]; max_n + 1];
    for i in 0..=max_n {
        binom[i][0] = 1;
        for j in 1..=i {
            binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
        }
    }
    let trees = |k: usize| (k as u128).pow(k as u32 - 1);
    let mut p = vec![1u128; max_n + 1];
    let mut rows = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        p[n] = (1..=n).map(|k| binom[n - 1][k - 1] * trees(k) * p[n - k]).sum();
        rows.push(ExpFormulaRow {
            n,
            convolution: p[n],
            closed_form: (n as u128 + 1).pow(n as u32 - 1),
        });
    }
    Ok(rows)
}
