//! Bracket monomials as leaf-labeled plane binary trees with red/blue
//! internal vertices, the basis monomials `b_G`, graphical roots and the map
//! from monomials back to pattern-avoiding trees.

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{LiebraError, Result};
use crate::graph::TwoColoredTree;
use crate::letter::{check_alphabet, Color, Letter, LetterSet};

/// A multilinear monomial. Red nodes are `[.,.]`, blue nodes are `<.,.>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monomial {
    Leaf(Letter),
    Node(Color, Box<Monomial>, Box<Monomial>),
}

impl Monomial {
    pub fn leaf(i: u8) -> Monomial {
        Monomial::Leaf(Letter::new(i))
    }

    pub fn node(color: Color, left: Monomial, right: Monomial) -> Monomial {
        Monomial::Node(color, Box::new(left), Box::new(right))
    }

    pub fn red(left: Monomial, right: Monomial) -> Monomial {
        Self::node(Color::Red, left, right)
    }

    pub fn blue(left: Monomial, right: Monomial) -> Monomial {
        Self::node(Color::Blue, left, right)
    }

    pub fn color(&self) -> Option<Color> {
        match self {
            Monomial::Leaf(_) => None,
            Monomial::Node(c, _, _) => Some(*c),
        }
    }

    pub fn children(&self) -> Option<(&Monomial, &Monomial)> {
        match self {
            Monomial::Leaf(_) => None,
            Monomial::Node(_, l, r) => Some((l, r)),
        }
    }

    pub fn letters(&self) -> LetterSet {
        match self {
            Monomial::Leaf(x) => LetterSet::singleton(*x),
            Monomial::Node(_, l, r) => l.letters().union(r.letters()),
        }
    }

    /// Number of leaves.
    pub fn degree(&self) -> usize {
        match self {
            Monomial::Leaf(_) => 1,
            Monomial::Node(_, l, r) => l.degree() + r.degree(),
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Letter>) {
        match self {
            Monomial::Leaf(x) => out.push(*x),
            Monomial::Node(_, l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    /// The graphical root: a leaf is its own root, red takes the smaller and
    /// blue the larger of the children's roots.
    pub fn graphical_root(&self) -> Letter {
        match self {
            Monomial::Leaf(x) => *x,
            Monomial::Node(Color::Red, l, r) => l.graphical_root().min(r.graphical_root()),
            Monomial::Node(Color::Blue, l, r) => l.graphical_root().max(r.graphical_root()),
        }
    }

    /// Replaces the leaf `x` by `replacement`.
    pub fn substitute(&self, x: Letter, replacement: &Monomial) -> Monomial {
        match self {
            Monomial::Leaf(y) if *y == x => replacement.clone(),
            Monomial::Leaf(_) => self.clone(),
            Monomial::Node(c, l, r) => Monomial::node(
                *c,
                l.substitute(x, replacement),
                r.substitute(x, replacement),
            ),
        }
    }

    /// Renames leaves through `f`.
    pub fn relabel(&self, f: &impl Fn(Letter) -> Letter) -> Monomial {
        match self {
            Monomial::Leaf(x) => Monomial::Leaf(f(*x)),
            Monomial::Node(c, l, r) => Monomial::node(*c, l.relabel(f), r.relabel(f)),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Monomial::Leaf(x) => serde_json::json!(x.index()),
            Monomial::Node(c, l, r) => serde_json::json!({
                "c": c, "l": l.to_json(), "r": r.to_json()
            }),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monomial::Leaf(x) => write!(f, "{x}"),
            Monomial::Node(Color::Red, l, r) => write!(f, "[{l},{r}]"),
            Monomial::Node(Color::Blue, l, r) => write!(f, "<{l},{r}>"),
        }
    }
}

/// Recursive-descent reader shared with the Poisson grammar.
pub(crate) struct Reader<'a> {
    pub(crate) bytes: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Reader {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> LiebraError {
        LiebraError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    pub(crate) fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", b as char)))
        }
    }

    pub(crate) fn letter(&mut self) -> Result<Letter> {
        if self.peek() != Some(b'x') {
            return Err(self.error("expected a letter like x1"));
        }
        self.pos += 1;
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or("");
        let i: u32 = digits
            .parse()
            .map_err(|_| LiebraError::Syntax {
                offset: start,
                message: "expected digits after 'x'".into(),
            })?;
        Letter::try_new(i).map_err(|_| LiebraError::Syntax {
            offset: start,
            message: format!("letter index {i} out of range"),
        })
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            Err(self.error("unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn monomial(&mut self) -> Result<Monomial> {
        match self.peek() {
            Some(b'[') | Some(b'<') => {
                let open = self.bytes[self.pos];
                self.pos += 1;
                let l = self.monomial()?;
                self.expect(b',')?;
                let r = self.monomial()?;
                let (close, color) = if open == b'[' {
                    (b']', Color::Red)
                } else {
                    (b'>', Color::Blue)
                };
                self.expect(close)?;
                Ok(Monomial::node(color, l, r))
            }
            _ => Ok(Monomial::Leaf(self.letter()?)),
        }
    }
}

/// Checks that each letter occurs once and, when `n` is given, that the
/// letters are exactly `x1..xn`.
pub(crate) fn check_multilinear(leaves: &[Letter], n: Option<usize>) -> Result<LetterSet> {
    let mut seen = LetterSet::EMPTY;
    for &x in leaves {
        if !seen.insert(x) {
            return Err(LiebraError::RepeatedLetter(x));
        }
    }
    if let Some(n) = n {
        check_alphabet(n)?;
        if let Some(x) = seen.iter().find(|x| x.index() as usize > n) {
            return Err(LiebraError::LetterOutOfRange { letter: x, n });
        }
        if let Some(x) = LetterSet::full(n).difference(seen).min() {
            return Err(LiebraError::MissingLetter(x));
        }
    }
    Ok(seen)
}

/// Parses `expr := xN | '[' expr ',' expr ']' | '<' expr ',' expr '>'`.
///
/// With `n = Some(k)` the letters must be exactly `x1..xk`; otherwise any
/// set of distinct letters is accepted.
pub fn parse_monomial(text: &str, n: Option<usize>) -> Result<Monomial> {
    let mut r = Reader::new(text);
    let m = r.monomial()?;
    r.finish()?;
    check_multilinear(&m.leaves(), n)?;
    Ok(m)
}

/// Canonical text form; inverse of [`parse_monomial`].
pub fn print_monomial(m: &Monomial) -> String {
    m.to_string()
}

/// The pattern-avoiding tree of a monomial: join the trees of the two
/// children by an edge between their graphical roots, colored like the
/// bracket.
pub fn tree_of_monomial(m: &Monomial) -> TwoColoredTree {
    let mut pairs = Vec::new();
    let root = collect_tree_edges(m, &mut pairs);
    TwoColoredTree::from_parent_pairs(m.letters(), root, pairs)
}

fn collect_tree_edges(m: &Monomial, pairs: &mut Vec<(Letter, Letter)>) -> Letter {
    match m {
        Monomial::Leaf(x) => *x,
        Monomial::Node(c, l, r) => {
            let a = collect_tree_edges(l, pairs);
            let b = collect_tree_edges(r, pairs);
            let (lo, hi) = (a.min(b), a.max(b));
            // Red edges point up the alphabet, blue ones down.
            match c {
                Color::Red => {
                    pairs.push((hi, lo));
                    lo
                }
                Color::Blue => {
                    pairs.push((lo, hi));
                    hi
                }
            }
        }
    }
}

/// The basis monomial `b_G`.
///
/// If the root has a red child, the subtree at the smallest red child `c`
/// gives `[b_{G - G_c}, b_{G_c}]`; otherwise the subtree at the largest child
/// `c` gives `<b_{G_c}, b_{G - G_c}>`.
pub fn basis_monomial(g: &TwoColoredTree) -> Monomial {
    let r = g.root();
    let children = g.children(r);
    if children.is_empty() {
        return Monomial::Leaf(r);
    }
    if let Some(&(c, _)) = children.iter().find(|(_, col)| *col == Color::Red) {
        Monomial::red(basis_monomial(&g.without_subtree(c)), basis_monomial(&g.subtree(c)))
    } else {
        let (c, _) = *children.last().expect("nonempty");
        Monomial::blue(basis_monomial(&g.subtree(c)), basis_monomial(&g.without_subtree(c)))
    }
}

/// A criterion of the recursive basis characterization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// Children in increasing graphical-root order.
    B,
    /// `[[m1,m3],m2]` needs `gr(m2) < gr(m3)`.
    C,
    /// `<m1,m2>` needs `m2` to be a letter or a blue bracket.
    D,
    /// `<m2,<m1,m3>>` needs `gr(m1) < gr(m2)`.
    E,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::B => "(b) gr(m1) < gr(m2)",
            Criterion::C => "(c) [[m1,m3],m2] needs gr(m2) < gr(m3)",
            Criterion::D => "(d) <m1,m2> needs m2 a letter or <.,.>",
            Criterion::E => "(e) <m2,<m1,m3>> needs gr(m1) < gr(m2)",
        })
    }
}

/// The first failing criterion, found bottom-up, and the submonomial at
/// which it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisViolation {
    pub criterion: Criterion,
    pub at: Monomial,
}

/// `Ok(gr(m))` when `m` is a basis monomial on its own letters.
pub fn check_basis(m: &Monomial) -> std::result::Result<Letter, BasisViolation> {
    match m {
        Monomial::Leaf(x) => Ok(*x),
        Monomial::Node(color, l, r) => {
            let gl = check_basis(l)?;
            let gr = check_basis(r)?;
            let fail = |criterion| {
                Err(BasisViolation {
                    criterion,
                    at: m.clone(),
                })
            };
            if gl >= gr {
                return fail(Criterion::B);
            }
            match color {
                Color::Red => {
                    if let Monomial::Node(Color::Red, _, m3) = &**l {
                        if gr >= m3.graphical_root() {
                            return fail(Criterion::C);
                        }
                    }
                    Ok(gl)
                }
                Color::Blue => match &**r {
                    Monomial::Node(Color::Red, _, _) => fail(Criterion::D),
                    Monomial::Node(Color::Blue, m1, _) => {
                        if m1.graphical_root() >= gl {
                            fail(Criterion::E)
                        } else {
                            Ok(gr)
                        }
                    }
                    Monomial::Leaf(_) => Ok(gr),
                },
            }
        }
    }
}

pub fn is_basis_monomial(m: &Monomial) -> bool {
    check_basis(m).is_ok()
}

/// All monomials whose leaves are exactly `letters`.
pub fn monomials_on(letters: LetterSet) -> Vec<Monomial> {
    let mut memo = HashMap::new();
    monomials_memo(letters, &mut memo)
}

fn monomials_memo(s: LetterSet, memo: &mut HashMap<LetterSet, Vec<Monomial>>) -> Vec<Monomial> {
    if let Some(v) = memo.get(&s) {
        return v.clone();
    }
    let out = if s.len() == 1 {
        vec![Monomial::Leaf(s.min().expect("nonempty"))]
    } else {
        let bits = s.bits();
        let mut out = Vec::new();
        // Every nonempty proper subset as the left leaf set.
        let mut a = (bits - 1) & bits;
        while a != 0 {
            let left = LetterSet::from_bits(a);
            let right = s.difference(left);
            let ls = monomials_memo(left, memo);
            let rs = monomials_memo(right, memo);
            for color in Color::BOTH {
                for l in &ls {
                    for r in &rs {
                        out.push(Monomial::node(color, l.clone(), r.clone()));
                    }
                }
            }
            a = (a - 1) & bits;
        }
        out
    };
    memo.insert(s, out.clone());
    out
}

/// Every multilinear monomial on `x1..xn`; there are
/// `Catalan(n-1) * n! * 2^(n-1)` of them.
pub fn enumerate_monomials(n: usize) -> Result<Vec<Monomial>> {
    check_alphabet(n)?;
    Ok(monomials_on(LetterSet::full(n)))
}

/// A random monomial on `letters`: random leaf order, random shape, random
/// colors.
pub fn random_monomial<R: Rng + ?Sized>(letters: LetterSet, rng: &mut R) -> Monomial {
    let mut xs: Vec<Letter> = letters.iter().collect();
    xs.shuffle(rng);
    random_shape(&xs, rng)
}

fn random_shape<R: Rng + ?Sized>(xs: &[Letter], rng: &mut R) -> Monomial {
    if xs.len() == 1 {
        return Monomial::Leaf(xs[0]);
    }
    let split = rng.gen_range(1..xs.len());
    let color = if rng.gen_bool(0.5) { Color::Red } else { Color::Blue };
    Monomial::node(color, random_shape(&xs[..split], rng), random_shape(&xs[split..], rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_trees, Edge};
    use std::collections::HashSet;

    fn p(s: &str) -> Monomial {
        parse_monomial(s, None).unwrap()
    }

    fn x(i: u8) -> Letter {
        Letter::new(i)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            p("<[x2,x3],x1>"),
            Monomial::blue(Monomial::red(Monomial::leaf(2), Monomial::leaf(3)), Monomial::leaf(1))
        );
        assert_eq!(p(" x1 "), Monomial::leaf(1));
        assert_eq!(parse_monomial("[x1,x1]", None), Err(LiebraError::RepeatedLetter(x(1))));
        assert_eq!(parse_monomial("[x1,x3]", Some(3)), Err(LiebraError::MissingLetter(x(2))));
        assert!(matches!(
            parse_monomial("[x1,x2", None),
            Err(LiebraError::Syntax { offset: 6, .. })
        ));
        assert!(matches!(parse_monomial("[x1;x2]", None), Err(LiebraError::Syntax { offset: 3, .. })));
        assert_eq!(print_monomial(&Monomial::leaf(7)), "x7");
    }

    #[test]
    fn graphical_roots() {
        assert_eq!(p("[x1,x2]").graphical_root(), x(1));
        assert_eq!(p("<x1,x2>").graphical_root(), x(2));
        assert_eq!(p("<[x2,x3],x1>").graphical_root(), x(2));
    }

    #[test]
    fn tree_of_monomial_examples() {
        assert_eq!(
            tree_of_monomial(&p("[x1,x2]")).edges(),
            vec![Edge::new(x(1), x(2), Color::Red)]
        );
        assert_eq!(tree_of_monomial(&p("[[x1,x3],x2]")), tree_of_monomial(&p("[[x1,x2],x3]")));
        let g = tree_of_monomial(&p("<[x2,x3],x1>"));
        assert_eq!(
            g.edges(),
            vec![Edge::new(x(1), x(2), Color::Blue), Edge::new(x(2), x(3), Color::Red)]
        );
        assert_eq!(g.root(), x(2));
    }

    #[test]
    fn basis_criteria_examples() {
        let v = check_basis(&p("[[x1,x2],x3]")).unwrap_err();
        assert_eq!(v.criterion, Criterion::C);
        assert!(is_basis_monomial(&p("[[x1,x3],x2]")));
        let v = check_basis(&p("<x1,[x2,x3]>")).unwrap_err();
        assert_eq!(v.criterion, Criterion::D);
        assert_eq!(check_basis(&p("[x2,x1]")).unwrap_err().criterion, Criterion::B);
        assert_eq!(check_basis(&p("<x2,<x3,x4>>")).unwrap_err().criterion, Criterion::E);
    }

    #[test]
    fn basis_monomial_small() {
        let red = TwoColoredTree::from_edges(2, vec![Edge::new(x(1), x(2), Color::Red)]).unwrap();
        assert_eq!(basis_monomial(&red), p("[x1,x2]"));
        let blue = TwoColoredTree::from_edges(2, vec![Edge::new(x(1), x(2), Color::Blue)]).unwrap();
        assert_eq!(basis_monomial(&blue), p("<x1,x2>"));
        let b3: HashSet<Monomial> = enumerate_trees(3).unwrap().iter().map(basis_monomial).collect();
        assert_eq!(b3.len(), 9);
    }

    #[test]
    fn basis_monomial_inverts_tree_map() {
        for n in 1..=5 {
            let mut seen = HashSet::new();
            for g in enumerate_trees(n).unwrap() {
                let b = basis_monomial(&g);
                assert_eq!(tree_of_monomial(&b), g);
                assert_eq!(b.graphical_root(), g.root());
                assert!(is_basis_monomial(&b), "{b}");
                assert!(seen.insert(b));
            }
        }
    }

    #[test]
    fn criteria_characterize_basis() {
        for n in 1..=4 {
            for m in enumerate_monomials(n).unwrap() {
                let expected = basis_monomial(&tree_of_monomial(&m)) == m;
                assert_eq!(is_basis_monomial(&m), expected, "{m}");
            }
        }
    }

    #[test]
    fn enumeration_counts_and_round_trip() {
        let expected = [1usize, 4, 48, 960];
        for n in 1..=4 {
            let all = enumerate_monomials(n).unwrap();
            assert_eq!(all.len(), expected[n - 1]);
            let set: HashSet<&Monomial> = all.iter().collect();
            assert_eq!(set.len(), all.len());
            let keys: HashSet<String> = all.iter().map(print_monomial).collect();
            assert_eq!(keys.len(), all.len());
            for m in &all {
                assert_eq!(&parse_monomial(&print_monomial(m), Some(n)).unwrap(), m);
            }
        }
    }
}
