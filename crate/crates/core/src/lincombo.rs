//! Finite integer linear combinations over an ordered key type.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

/// A finite map from keys to nonzero integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinCombo<K: Ord> {
    terms: BTreeMap<K, i64>,
}

impl<K: Ord> Default for LinCombo<K> {
    fn default() -> Self {
        LinCombo {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord> LinCombo<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(key: K, coeff: i64) -> Self {
        let mut c = Self::new();
        c.add_term(key, coeff);
        c
    }

    pub fn add_term(&mut self, key: K, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn get(&self, key: &K) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn scale(&mut self, factor: i64) {
        if factor == 0 {
            self.terms.clear();
        } else {
            for c in self.terms.values_mut() {
                *c *= factor;
            }
        }
    }

    pub fn scaled(mut self, factor: i64) -> Self {
        self.scale(factor);
        self
    }
}

impl<K: Ord + Clone> LinCombo<K> {
    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &LinCombo<K>, factor: i64) {
        for (k, c) in other.iter() {
            self.add_term(k.clone(), c * factor);
        }
    }
}

impl<K: Ord> FromIterator<(K, i64)> for LinCombo<K> {
    fn from_iter<I: IntoIterator<Item = (K, i64)>>(iter: I) -> Self {
        let mut c = Self::new();
        for (k, v) in iter {
            c.add_term(k, v);
        }
        c
    }
}

impl<K: Ord> IntoIterator for LinCombo<K> {
    type Item = (K, i64);
    type IntoIter = btree_map::IntoIter<K, i64>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

/// `+1*[[x1,x3],x2] -1*<x1,<x2,x3>>`, or `0` when empty.
impl<K: Ord + fmt::Display> fmt::Display for LinCombo<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c:+}*{k}")?;
        }
        Ok(())
    }
}
