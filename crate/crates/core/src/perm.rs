//! Permutations of P+ indices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};

/// A permutation of 0..n, stored as its image list: `p.apply(i) = images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(FusionError::NotAPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self.compose(other)` applies `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, e: i64) -> Perm {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Perm::identity(self.len());
        for _ in 0..e.unsigned_abs() {
            out = base.compose(&out);
        }
        out
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut ord = 1usize;
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            ord = num_integer::lcm(ord, len);
        }
        ord
    }

    /// Nontrivial cycles, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] || self.images[s] == s {
                continue;
            }
            let mut c = Vec::new();
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                c.push(i);
                i = self.images[i];
            }
            out.push(c);
        }
        out
    }

    /// Parse cycle notation such as "(1 2)(3 4 5)" or "()" over n points.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Perm> {
        let mut images: Vec<usize> = (0..n).collect();
        let bad = || FusionError::Parse(format!("bad cycle notation '{s}'"));
        let mut rest = s.trim();
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = open.find(')').ok_or_else(bad)?;
            let body = &open[..close];
            let pts: Vec<usize> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            for (k, &p) in pts.iter().enumerate() {
                let q = pts[(k + 1) % pts.len()];
                if p >= n || q >= n {
                    return Err(bad());
                }
                images[p] = q;
            }
            rest = open[close + 1..].trim_start();
        }
        Perm::from_images(images)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// Close a set of generators under composition. Returns the elements sorted.
pub fn generate_group(gens: &[Perm], n: usize) -> Vec<Perm> {
    use std::collections::BTreeSet;
    let mut group: BTreeSet<Perm> = BTreeSet::new();
    let id = Perm::identity(n);
    group.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for h in gens {
            let x = h.compose(&g);
            if group.insert(x.clone()) {
                frontier.push(x);
            }
        }
    }
    group.into_iter().collect()
}
