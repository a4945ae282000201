//! Algorithm LC: rewriting any monomial into the basis `B_n(X)`, plus the
//! generators of the relation module and the relation audit.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LiebraError, Result};
use crate::graph::random_tree;
use crate::letter::{Color, Letter, LetterSet};
use crate::lincombo::LinCombo;
use crate::monomial::{basis_monomial, is_basis_monomial, random_monomial, Monomial};

/// Default bound on the nesting depth of LC calls.
pub const DEFAULT_MAX_DEPTH: usize = 4096;

/// Memoizing implementation of Algorithm LC.
///
/// A normalizer is cheap to create; reuse one across many calls to share
/// the memo table. It is not `Sync`; give each thread its own.
#[derive(Debug, Clone)]
pub struct LieNormalizer {
    memo: HashMap<Monomial, LinCombo<Monomial>>,
    depth: usize,
    max_depth: usize,
}

impl Default for LieNormalizer {
    fn default() -> Self {
        Self::with_max_depth(DEFAULT_MAX_DEPTH)
    }
}

impl LieNormalizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_max_depth(max_depth: usize) -> Self {
        LieNormalizer {
            memo: HashMap::new(),
            depth: 0,
            max_depth,
        }
    }

    /// Number of memoized submonomials.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn normalize(&mut self, m: &Monomial) -> Result<LinCombo<Monomial>> {
        self.depth = 0;
        self.lc(m)
    }

    pub fn normalize_combo(&mut self, c: &LinCombo<Monomial>) -> Result<LinCombo<Monomial>> {
        let mut out = LinCombo::new();
        for (m, k) in c.iter() {
            let part = self.normalize(m)?;
            out.add_scaled(&part, k);
        }
        Ok(out)
    }

    fn lc(&mut self, m: &Monomial) -> Result<LinCombo<Monomial>> {
        if let Some(c) = self.memo.get(m) {
            return Ok(c.clone());
        }
        if self.depth >= self.max_depth {
            return Err(LiebraError::Internal(format!(
                "LC recursion deeper than {} at {m}",
                self.max_depth
            )));
        }
        self.depth += 1;
        let out = self.lc_step(m);
        self.depth -= 1;
        let out = out?;
        self.memo.insert(m.clone(), out.clone());
        Ok(out)
    }

    fn lc_step(&mut self, m: &Monomial) -> Result<LinCombo<Monomial>> {
        // (1) basis monomials are fixed.
        if is_basis_monomial(m) {
            return Ok(LinCombo::single(m.clone(), 1));
        }
        let Monomial::Node(color, m1, m2) = m else {
            unreachable!("letters are basis monomials");
        };
        let color = *color;

        // (2) normalize the children first and distribute.
        if !is_basis_monomial(m1) || !is_basis_monomial(m2) {
            let a = self.lc(m1)?;
            let b = self.lc(m2)?;
            let mut out = LinCombo::new();
            for (bi, alpha) in a.iter() {
                for (bj, beta) in b.iter() {
                    let part = self.lc(&Monomial::node(color, bi.clone(), bj.clone()))?;
                    out.add_scaled(&part, alpha * beta);
                }
            }
            return Ok(out);
        }

        // (3) antisymmetry puts the smaller graphical root on the left.
        let (g1, g2) = (m1.graphical_root(), m2.graphical_root());
        debug_assert_ne!(g1, g2, "multilinear children have distinct roots");
        if g1 > g2 {
            let swapped = Monomial::node(color, (**m2).clone(), (**m1).clone());
            return Ok(self.lc(&swapped)?.scaled(-1));
        }

        // (4) a single Jacobi-type rewrite.
        let m1 = (**m1).clone();
        let m2 = (**m2).clone();
        let terms: Vec<(i64, Monomial)> = match color {
            Color::Red => match m1 {
                // [[a,b],c] = [[a,c],b] + [a,[b,c]]
                Monomial::Node(Color::Red, a, b) => vec![
                    (1, Monomial::red(Monomial::red((*a).clone(), m2.clone()), (*b).clone())),
                    (1, Monomial::red(*a, Monomial::red(*b, m2))),
                ],
                _ => return Err(stuck(m)),
            },
            Color::Blue => match m2 {
                Monomial::Node(Color::Red, p, q) => {
                    let (p, q) = (*p, *q);
                    vec![
                        (-1, Monomial::blue(Monomial::red(m1.clone(), q.clone()), p.clone())),
                        (1, Monomial::blue(Monomial::red(m1.clone(), p.clone()), q.clone())),
                        (-1, Monomial::red(m1.clone(), Monomial::blue(p.clone(), q.clone()))),
                        (1, Monomial::red(p.clone(), Monomial::blue(m1.clone(), q.clone()))),
                        (1, Monomial::red(Monomial::blue(m1, p), q)),
                    ]
                }
                Monomial::Node(Color::Blue, p, q) => {
                    let (p, q) = (*p, *q);
                    vec![
                        (1, Monomial::blue(p.clone(), Monomial::blue(m1.clone(), q.clone()))),
                        (1, Monomial::blue(Monomial::blue(m1, p), q)),
                    ]
                }
                Monomial::Leaf(_) => return Err(stuck(m)),
            },
        };
        let mut out = LinCombo::new();
        for (sign, t) in terms {
            let part = self.lc(&t)?;
            out.add_scaled(&part, sign);
        }
        Ok(out)
    }
}

fn stuck(m: &Monomial) -> LiebraError {
    LiebraError::Internal(format!("no LC rule applies to {m}"))
}

/// Expresses `m` in the basis `B_n(X)`.
pub fn lc_normalize(m: &Monomial) -> Result<LinCombo<Monomial>> {
    LieNormalizer::new().normalize(m)
}

/// Linear extension of [`lc_normalize`].
pub fn lc_normalize_combo(c: &LinCombo<Monomial>) -> Result<LinCombo<Monomial>> {
    LieNormalizer::new().normalize_combo(c)
}

/// The defining identities of `Lie_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    /// `[x,y] + [y,x]`
    S1,
    /// `<x,y> + <y,x>`
    S2,
    /// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`
    J1,
    /// `<x,<y,z>> + <y,<z,x>> + <z,<x,y>>`
    J2,
    /// The six-term mixed Jacobi identity.
    MJ,
}

impl RelationKind {
    pub const ALL: [RelationKind; 5] = [
        RelationKind::S1,
        RelationKind::S2,
        RelationKind::J1,
        RelationKind::J2,
        RelationKind::MJ,
    ];

    /// Number of slots the identity takes.
    pub fn arity(self) -> usize {
        match self {
            RelationKind::S1 | RelationKind::S2 => 2,
            _ => 3,
        }
    }

    /// The identity with its slots filled in.
    pub fn instantiate(self, slots: &[Monomial]) -> LinCombo<Monomial> {
        assert_eq!(slots.len(), self.arity(), "wrong number of slots for {self}");
        let s = |i: usize| slots[i].clone();
        let rot = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];
        let mut out = LinCombo::new();
        match self {
            RelationKind::S1 | RelationKind::S2 => {
                let c = if self == RelationKind::S1 { Color::Red } else { Color::Blue };
                out.add_term(Monomial::node(c, s(0), s(1)), 1);
                out.add_term(Monomial::node(c, s(1), s(0)), 1);
            }
            RelationKind::J1 | RelationKind::J2 => {
                let c = if self == RelationKind::J1 { Color::Red } else { Color::Blue };
                for (a, b, d) in rot {
                    out.add_term(Monomial::node(c, s(a), Monomial::node(c, s(b), s(d))), 1);
                }
            }
            RelationKind::MJ => {
                for (a, b, d) in rot {
                    out.add_term(Monomial::red(s(a), Monomial::blue(s(b), s(d))), 1);
                    out.add_term(Monomial::blue(s(a), Monomial::red(s(b), s(d))), 1);
                }
            }
        }
        out
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::S1 => "S1",
            RelationKind::S2 => "S2",
            RelationKind::J1 => "J1",
            RelationKind::J2 => "J2",
            RelationKind::MJ => "MJ",
        })
    }
}

impl FromStr for RelationKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        RelationKind::ALL
            .into_iter()
            .find(|k| k.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown relation kind '{s}' (expected S1, S2, J1, J2 or MJ)"))
    }
}

/// A relation instance: an identity with monomials in its slots, embedded in
/// a context. `context` shows the enclosing monomial with `_` at the hole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationElement {
    pub kind: RelationKind,
    pub combo: LinCombo<Monomial>,
    pub context: String,
}

/// Builds a relation from explicit slots and an optional context. The
/// context is a monomial containing the letter `hole`, which is replaced by
/// every term of the identity; it must not share other letters with the
/// slots.
pub fn relation_instance(
    kind: RelationKind,
    slots: &[Monomial],
    context: Option<(&Monomial, Letter)>,
) -> Result<RelationElement> {
    if slots.len() != kind.arity() {
        return Err(LiebraError::Internal(format!(
            "{kind} needs {} slots, got {}",
            kind.arity(),
            slots.len()
        )));
    }
    let mut used = LetterSet::EMPTY;
    for s in slots {
        let l = s.letters();
        if !used.is_disjoint(l) {
            return Err(LiebraError::RepeatedLetter(
                used.intersection(l).min().expect("nonempty"),
            ));
        }
        used = used.union(l);
    }
    let bare = kind.instantiate(slots);
    let Some((ctx, hole)) = context else {
        return Ok(RelationElement {
            kind,
            combo: bare,
            context: "_".into(),
        });
    };
    if !ctx.letters().contains(hole) {
        return Err(LiebraError::LetterAbsent(hole));
    }
    let outside = ctx.letters().difference(LetterSet::singleton(hole));
    if !outside.is_disjoint(used) {
        return Err(LiebraError::RepeatedLetter(
            outside.intersection(used).min().expect("nonempty"),
        ));
    }
    let combo = bare
        .into_iter()
        .map(|(m, c)| (ctx.substitute(hole, &m), c))
        .collect();
    Ok(RelationElement {
        kind,
        combo,
        context: print_with_hole(ctx, hole),
    })
}

fn print_with_hole(m: &Monomial, hole: Letter) -> String {
    match m {
        Monomial::Leaf(x) if *x == hole => "_".into(),
        Monomial::Leaf(x) => x.to_string(),
        Monomial::Node(Color::Red, l, r) => {
            format!("[{},{}]", print_with_hole(l, hole), print_with_hole(r, hole))
        }
        Monomial::Node(Color::Blue, l, r) => {
            format!("<{},{}>", print_with_hole(l, hole), print_with_hole(r, hole))
        }
    }
}

/// A seeded, endless stream of random relation instances on `x1..xn`.
///
/// Each element splits the alphabet into `arity` slot blocks filled with
/// random monomials and up to `max_context` context letters. The context is
/// a random basis monomial on the context letters plus one slot letter,
/// which serves as the hole.
#[derive(Debug, Clone)]
pub struct RelationStream {
    n: usize,
    kind: RelationKind,
    max_context: usize,
    rng: ChaCha8Rng,
}

impl Iterator for RelationStream {
    type Item = RelationElement;

    fn next(&mut self) -> Option<RelationElement> {
        let k = self.kind.arity();
        if self.n < k {
            return None;
        }
        let rng = &mut self.rng;
        let mut letters: Vec<Letter> = LetterSet::full(self.n).iter().collect();
        letters.shuffle(rng);
        let c = rng.gen_range(0..=self.max_context.min(self.n - k));
        let (ctx_letters, slot_letters) = letters.split_at(c);
        // k - 1 distinct cut points split the slot letters into nonempty blocks.
        let mut cuts: Vec<usize> = (1..slot_letters.len()).collect();
        cuts.shuffle(rng);
        let mut cuts: Vec<usize> = cuts[..k - 1].to_vec();
        cuts.sort_unstable();
        let mut slots = Vec::with_capacity(k);
        let mut start = 0;
        for end in cuts.into_iter().chain([slot_letters.len()]) {
            let block: LetterSet = slot_letters[start..end].iter().copied().collect();
            slots.push(random_monomial(block, rng));
            start = end;
        }
        let element = if c == 0 {
            relation_instance(self.kind, &slots, None)
        } else {
            let hole = slot_letters.iter().copied().min().expect("nonempty");
            let ctx_set: LetterSet = ctx_letters.iter().copied().chain([hole]).collect();
            let ctx = basis_monomial(&random_tree(ctx_set, rng));
            relation_instance(self.kind, &slots, Some((&ctx, hole)))
        };
        Some(element.expect("generated slots and context are disjoint"))
    }
}

/// Random relation instances of `kind` on `n` letters; empty when `n` is too
/// small for the identity.
pub fn generate_relations(
    n: usize,
    kind: RelationKind,
    max_context: usize,
    seed: u64,
) -> RelationStream {
    RelationStream {
        n,
        kind,
        max_context,
        rng: ChaCha8Rng::seed_from_u64(seed),
    }
}

/// Whether LC sends the relation to zero.
pub fn relation_audit(r: &RelationElement) -> bool {
    relation_audit_with(&mut LieNormalizer::new(), r)
}

pub fn relation_audit_with(normalizer: &mut LieNormalizer, r: &RelationElement) -> bool {
    normalizer
        .normalize_combo(&r.combo)
        .map(|c| c.is_empty())
        .unwrap_or(false)
}
