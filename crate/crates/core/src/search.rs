//! Backtracking search for bijections that preserve fusion coefficients.
//! Shared by the automorphism enumeration and the isomorphism test.

use crate::error::{FusionError, Result};
use crate::fusion::FusionTable;
use crate::perm::Perm;
use crate::weights::QDIM_TOL;

pub const DEFAULT_SEARCH_BOUND: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    First,
    All,
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn has(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn first(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
    fn and(&mut self, o: &Bits) {
        self.0.iter_mut().zip(&o.0).for_each(|(a, b)| *a &= b);
    }
    fn and_not(&mut self, o: &Bits) {
        self.0.iter_mut().zip(&o.0).for_each(|(a, b)| *a &= !b);
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            })
        })
    }
}

/// Integer invariants of a basis element that any fusion isomorphism preserves:
/// self-duality, the size and total multiplicity of its square, the trace of
/// its fusion matrix, and its total multiplicity against everything.
pub fn weight_invariants(t: &FusionTable) -> Vec<[u64; 5]> {
    let n = t.len();
    (0..n)
        .map(|x| {
            let sq = t.product(x, x);
            let trace: u64 = (0..n).map(|m| t.get(x, m, m) as u64).sum();
            let total: u64 = (0..n).flat_map(|m| t.product(x, m)).map(|e| e.1 as u64).sum();
            [t.get(x, x, 0) as u64, sq.len() as u64, sq.iter().map(|e| e.1 as u64).sum(), trace, total]
        })
        .collect()
}

#[derive(Clone)]
struct State {
    dom: Vec<Bits>,
    img: Vec<Option<usize>>,
    done: Vec<usize>,
}

struct Search<'a> {
    a: &'a FusionTable,
    b: &'a FusionTable,
    n: usize,
    mode: Mode,
    found: Vec<Perm>,
    mark: Vec<u32>,
}

impl Search<'_> {
    /// Assign x -> y and propagate until fixpoint. False on contradiction.
    fn assign(&mut self, st: &mut State, x: usize, y: usize) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            if let Some(prev) = st.img[x] {
                if prev != y {
                    return false;
                }
                continue;
            }
            if !st.dom[x].has(y) {
                return false;
            }
            st.img[x] = Some(y);
            st.dom[x] = Bits::empty(self.n);
            st.dom[x].set(y);
            for z in 0..self.n {
                if z != x && st.img[z].is_none() {
                    st.dom[z].clear(y);
                }
            }
            st.done.push(x);
            let done = st.done.clone();
            for &a in &done {
                if !self.constrain(st, x, a) {
                    return false;
                }
            }
            for z in 0..self.n {
                if st.img[z].is_none() {
                    match st.dom[z].count() {
                        0 => return false,
                        1 => queue.push((z, st.dom[z].first().unwrap())),
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Both x and a are assigned: the support of x*a must map onto the support
    /// of pi(x)*pi(a) with matching multiplicities.
    fn constrain(&mut self, st: &mut State, x: usize, a: usize) -> bool {
        let (px, pa) = (st.img[x].unwrap(), st.img[a].unwrap());
        let pa_prod = self.a.product(x, a);
        let pb_prod = self.b.product(px, pa);
        if pa_prod.len() != pb_prod.len() {
            return false;
        }
        let mut by_mult: Vec<(u32, Bits)> = Vec::new();
        let mut all = Bits::empty(self.n);
        for &(c, m) in pb_prod {
            all.set(c as usize);
            match by_mult.iter_mut().find(|e| e.0 == m) {
                Some(e) => e.1.set(c as usize),
                None => {
                    let mut bits = Bits::empty(self.n);
                    bits.set(c as usize);
                    by_mult.push((m, bits));
                }
            }
        }
        for &(c, m) in pa_prod {
            self.mark[c as usize] = m;
        }
        let mut ok = true;
        for c in 0..self.n {
            let m = self.mark[c];
            match st.img[c] {
                Some(pc) => {
                    if self.b.get(px, pa, pc) != m {
                        ok = false;
                        break;
                    }
                }
                None if m == 0 => st.dom[c].and_not(&all),
                None => match by_mult.iter().find(|e| e.0 == m) {
                    Some(e) => st.dom[c].and(&e.1),
                    None => {
                        ok = false;
                        break;
                    }
                },
            }
        }
        for &(c, _) in pa_prod {
            self.mark[c as usize] = 0;
        }
        ok
    }

    fn run(&mut self, st: State) {
        if self.mode == Mode::First && !self.found.is_empty() {
            return;
        }
        let next = (0..self.n)
            .filter(|&z| st.img[z].is_none())
            .min_by_key(|&z| (st.dom[z].count(), z));
        let Some(z) = next else {
            let images = st.img.iter().map(|x| x.unwrap()).collect();
            let p = Perm::from_images(images).expect("search keeps the map injective");
            if self.a.is_isomorphism_to(self.b, &p) {
                self.found.push(p);
            }
            return;
        };
        let cands: Vec<usize> = st.dom[z].iter().collect();
        for y in cands {
            let mut s2 = st.clone();
            if self.assign(&mut s2, z, y) {
                self.run(s2);
            }
        }
    }
}

/// Find fusion-preserving bijections from `a` to `b` that send 0 to 0 and
/// respect the given pairs. Candidates are restricted up front to weights
/// with equal q-dimension (within QDIM_TOL) and equal integer invariants;
/// the search itself is exact.
pub fn find_bijections(
    a: &FusionTable,
    qa: &[f64],
    b: &FusionTable,
    qb: &[f64],
    fixed: &[(usize, usize)],
    mode: Mode,
    bound: usize,
) -> Result<Vec<Perm>> {
    let n = a.len();
    if n > bound || b.len() > bound {
        return Err(FusionError::SearchBound { size: n.max(b.len()), bound });
    }
    if n != b.len() {
        return Ok(Vec::new());
    }
    let (ia, ib) = (weight_invariants(a), weight_invariants(b));
    let mut dom = Vec::with_capacity(n);
    for x in 0..n {
        let mut bits = Bits::empty(n);
        for y in 0..n {
            if ia[x] == ib[y] && (qa[x] - qb[y]).abs() < QDIM_TOL {
                bits.set(y);
            }
        }
        dom.push(bits);
    }
    let mut st = State { dom, img: vec![None; n], done: Vec::new() };
    let mut s = Search { a, b, n, mode, found: Vec::new(), mark: vec![0; n] };
    let mut ok = s.assign(&mut st, 0, 0);
    for &(x, y) in fixed {
        ok = ok && s.assign(&mut st, x, y);
    }
    if ok {
        s.run(st);
    }
    s.found.sort();
    Ok(s.found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::qdim;
    use crate::fusion::build_table;
    use crate::weights::LevelContext;

    fn ring(s: &str, k: i64) -> (LevelContext, FusionTable, Vec<f64>) {
        let c = LevelContext::new(s.parse().unwrap(), k).unwrap();
        let t = build_table(&c).unwrap();
        let q = (0..c.len()).map(|i| qdim(&c, i)).collect();
        (c, t, q)
    }

    #[test]
    fn bits_basics() {
        let mut b = Bits::empty(130);
        b.set(3);
        b.set(129);
        assert_eq!(b.count(), 2);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![3, 129]);
        b.clear(3);
        assert_eq!(b.first(), Some(129));
    }

    #[test]
    fn a1_automorphism_counts() {
        for (k, want) in [(1, 1), (2, 1), (3, 1), (4, 2), (5, 1), (6, 2)] {
            let (_, t, q) = ring("A1", k);
            let all = find_bijections(&t, &q, &t, &q, &[], Mode::All, 400).unwrap();
            assert_eq!(all.len(), want, "k={k}");
            assert!(all.contains(&Perm::identity(t.len())));
        }
    }

    #[test]
    fn bound_is_enforced() {
        let (_, t, q) = ring("A2", 3);
        assert!(matches!(
            find_bijections(&t, &q, &t, &q, &[], Mode::First, 5),
            Err(FusionError::SearchBound { .. })
        ));
    }

    #[test]
    fn different_sizes_have_no_bijection() {
        let (_, a, qa) = ring("A1", 2);
        let (_, b, qb) = ring("A1", 3);
        assert!(find_bijections(&a, &qa, &b, &qb, &[], Mode::First, 400).unwrap().is_empty());
    }
}
