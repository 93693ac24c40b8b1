//! Isomorphisms between affine fusion rings: invariant fingerprints and
//! explicit bijection search.

use serde::Serialize;

use crate::characters::qdim_minimal_orbit;
use crate::error::Result;
use crate::perm::Perm;
use crate::ring::Ring;
use crate::search::{find_bijections, Mode};
use crate::symmetries::{galois_action, galois_elements};
use crate::weights::QDIM_TOL;

#[derive(Debug, Clone, Serialize)]
pub struct Fingerprint {
    pub cardinality: usize,
    /// Sorted orders of the simple currents.
    pub sc_group: Vec<usize>,
    /// Sorted q-dimensions.
    pub qdims: Vec<f64>,
    /// For each current: its order and its sorted charges (numerator,
    /// denominator) on the minimal non-current q-dimension class.
    pub charge_profile: Vec<(usize, Vec<(i64, i64)>)>,
    /// l in [1, 2 kappa N) coprime to kappa N with D(0^(l)) = 1.
    pub galois_sc_set: Vec<i64>,
    /// Number of distinct values D(0^(l)), i.e. the degree of S_00^2.
    pub galois_degree: usize,
}

impl Fingerprint {
    /// Equality of every ring-intrinsic field. The residue set itself lives
    /// modulo a context-dependent number, so only its degree is compared.
    pub fn matches(&self, other: &Fingerprint) -> bool {
        self.cardinality == other.cardinality
            && self.sc_group == other.sc_group
            && self.charge_profile == other.charge_profile
            && self.galois_degree == other.galois_degree
            && self.qdims.iter().zip(&other.qdims).all(|(a, b)| (a - b).abs() < QDIM_TOL)
    }
}

fn distinct_count(mut v: Vec<f64>) -> usize {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut count = 0;
    let mut last = f64::NEG_INFINITY;
    for x in v {
        if x - last > QDIM_TOL {
            count += 1;
            last = x;
        }
    }
    count
}

pub fn fingerprint(ring: &Ring) -> Result<Fingerprint> {
    let mut sc_group: Vec<usize> = ring.currents.iter().map(|c| c.order).collect();
    sc_group.sort();
    let mut qdims = ring.qdims().to_vec();
    qdims.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let minimal = qdim_minimal_orbit(&ring.s);
    let mut charge_profile: Vec<(usize, Vec<(i64, i64)>)> = ring
        .currents
        .iter()
        .map(|c| {
            let mut q: Vec<_> = minimal.iter().map(|&l| c.charge[l]).collect();
            q.sort();
            (c.order, q.iter().map(|r| (*r.numer(), *r.denom())).collect())
        })
        .collect();
    charge_profile.sort();
    let mut galois_sc_set = Vec::new();
    let mut values = Vec::new();
    for ell in galois_elements(&ring.ctx) {
        let g = galois_action(&ring.ctx, ell)?;
        let d = ring.s.qdim(g.perm.apply(0));
        if (d - 1.0).abs() < QDIM_TOL {
            galois_sc_set.push(ell);
        }
        values.push(d);
    }
    Ok(Fingerprint {
        cardinality: ring.len(),
        sc_group,
        qdims,
        charge_profile,
        galois_sc_set,
        galois_degree: distinct_count(values),
    })
}

/// Does `perm` (indices of `a` to indices of `b`) satisfy N = M on all
/// triples, send 0 to 0, and intertwine the charge conjugations?
pub fn verify_bijection(a: &Ring, b: &Ring, perm: &Perm) -> bool {
    perm.len() == a.len()
        && a.len() == b.len()
        && perm.apply(0) == 0
        && a.table.is_isomorphism_to(&b.table, perm)
        && (0..a.len()).all(|i| perm.apply(a.conj.apply(i)) == b.conj.apply(perm.apply(i)))
}

/// A fusion-ring isomorphism from `a` to `b`, or None when none exists.
pub fn find_isomorphism(a: &Ring, b: &Ring, bound: usize) -> Result<Option<Perm>> {
    find_isomorphism_with(a, b, &[], bound)
}

/// Same, with some pairs prescribed.
pub fn find_isomorphism_with(a: &Ring, b: &Ring, fixed: &[(usize, usize)], bound: usize) -> Result<Option<Perm>> {
    let found = find_bijections(&a.table, a.qdims(), &b.table, b.qdims(), fixed, Mode::First, bound)?;
    Ok(found.into_iter().next())
}

/// Build a bijection from weight-name pairs; unnamed weights must be 0.
pub fn bijection_from_names(a: &Ring, b: &Ring, pairs: &[(&str, &str)]) -> Result<Perm> {
    let mut images = vec![usize::MAX; a.len()];
    images[0] = 0;
    for (x, y) in pairs {
        images[a.weight_index(x)?] = b.weight_index(y)?;
    }
    Perm::from_images(images)
}

/// The isomorphisms listed in the classification, instantiated at the sizes
/// this crate checks.
pub fn classified_pairs() -> Vec<(String, String)> {
    let mut out = Vec::new();
    let p = |a: &str, b: &str| (a.to_string(), b.to_string());
    for r in 2..=5 {
        for k in r + 1..=5 {
            out.push((format!("C{r}k{k}"), format!("C{k}k{r}")));
        }
    }
    for k in 2..=5 {
        out.push((format!("A1k{k}"), format!("C{k}k1")));
    }
    let ising = ["A1k2", "B3k1", "B4k1", "C2k1", "E8k2"];
    for i in 0..ising.len() {
        for j in i + 1..ising.len() {
            out.push(p(ising[i], ising[j]));
        }
    }
    out.push(p("A3k1", "D5k1"));
    out.push(p("A2k1", "E6k1"));
    out.push(p("A1k1", "E7k1"));
    out.push(p("F4k1", "G2k1"));
    out.push(p("F4k2", "E8k3"));
    out.push(p("F4k3", "G2k4"));
    out
}
