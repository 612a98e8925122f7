//! Total maps between finite carriers, stored as image indices.

use std::fmt;

/// A total map `{0..n} -> {0..m}` given by its image sequence.
///
/// Carriers are always kept in sorted label order, so comparing tables
/// lexicographically is the same as comparing their label sequences.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Table(Vec<usize>);

impl Table {
    pub fn new(images: Vec<usize>) -> Self {
        Table(images)
    }

    pub fn identity(n: usize) -> Self {
        Table((0..n).collect())
    }

    pub fn constant(domain: usize, value: usize) -> Self {
        Table(vec![value; domain])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn after(&self, inner: &Table) -> Table {
        Table(inner.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// True when the table is a bijection onto a codomain of size `codomain`.
    pub fn is_bijection_onto(&self, codomain: usize) -> bool {
        if self.0.len() != codomain {
            return false;
        }
        let mut seen = vec![false; codomain];
        for &x in &self.0 {
            if x >= codomain || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        true
    }

    /// Inverse of a bijection. Returns `None` if the table is not one.
    pub fn inverse(&self) -> Option<Table> {
        if !self.is_bijection_onto(self.0.len()) {
            return None;
        }
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Some(Table(inv))
    }

    pub fn fixes_all(&self, points: &[usize]) -> bool {
        points.iter().all(|&p| self.0[p] == p)
    }

    /// Renders the table as `a->x, b->y` using the given label lists.
    pub fn render(&self, domain: &[String], codomain: &[String]) -> String {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &x)| format!("{}->{}", domain[i], codomain[x]))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Debug for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl From<Vec<usize>> for Table {
    fn from(v: Vec<usize>) -> Self {
        Table(v)
    }
}

/// All bijections of an `n`-element set, in lexicographic order of image sequences.
pub fn all_bijections(n: usize) -> impl Iterator<Item = Table> {
    use itertools::Itertools;
    (0..n).permutations(n).map(Table)
}

/// All total maps from an `n`-element set into an `m`-element set, in
/// lexicographic order of image sequences.
pub fn all_functions(n: usize, m: usize) -> impl Iterator<Item = Table> {
    let total = if m == 0 && n > 0 { 0 } else { m.checked_pow(n as u32).unwrap_or(usize::MAX) };
    (0..total).map(move |mut k| {
        let mut images = vec![0; n];
        for slot in images.iter_mut().rev() {
            *slot = k % m;
            k /= m;
        }
        Table(images)
    })
}

/// Number of total maps `n -> m`, saturating on overflow.
pub fn function_count(n: usize, m: usize) -> usize {
    u32::try_from(n)
        .ok()
        .and_then(|n| m.checked_pow(n))
        .unwrap_or(usize::MAX)
}
