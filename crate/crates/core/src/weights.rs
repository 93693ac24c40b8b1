//! Level-k integrable weights, conjugations, extended-diagram symmetries and
//! simple currents.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::characters::SMatrix;
use crate::error::{FusionError, Result};
use crate::liealg::{algebra_data, AlgebraData, AlgebraId, Family};
use crate::perm::{generate_group, Perm};

/// Tolerance for deciding D(j) = 1.
pub const QDIM_TOL: f64 = 1e-7;

/// A weight given by its horizontal Dynkin labels lambda_1..lambda_r.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i - 1] = 1;
        Weight(v)
    }

    pub fn labels(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// t(lambda) = sum_j j lambda_j, the A-series congruence class.
    pub fn t(&self) -> i64 {
        self.0.iter().enumerate().map(|(j, x)| (j as i64 + 1) * x).sum()
    }

    /// Render as "L1+2L3", or "0".
    pub fn pretty(&self) -> String {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| if x == 1 { format!("L{}", i + 1) } else { format!("{x}L{}", i + 1) })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Parse "1 0 2", "1,0,2", "0", or a sum of fundamentals such as "L1+2L3"
    /// (a Greek capital lambda is accepted in place of L).
    pub fn parse(s: &str, rank: usize) -> Result<Weight> {
        let s = s.trim();
        let bad = |m: &str| FusionError::Parse(format!("bad weight '{s}': {m}"));
        if s.contains('L') || s.contains('Λ') || s.contains('l') {
            let mut v = vec![0i64; rank];
            let norm = s.replace('Λ', "L").replace('l', "L").replace(' ', "");
            for term in norm.split('+') {
                if term == "0" {
                    continue;
                }
                let (c, i) = term.split_once('L').ok_or_else(|| bad("term without L"))?;
                let c: i64 = if c.is_empty() { 1 } else { c.parse().map_err(|_| bad("coefficient"))? };
                let i: usize = i.parse().map_err(|_| bad("index"))?;
                if i == 0 || i > rank {
                    return Err(bad("index out of range"));
                }
                v[i - 1] += c;
            }
            return Ok(Weight(v));
        }
        let parts: Vec<i64> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i64>().map_err(|_| bad("not an integer")))
            .collect::<Result<_>>()?;
        if parts == [0] {
            return Ok(Weight::zero(rank));
        }
        if parts.len() != rank {
            return Err(FusionError::DimensionMismatch { expected: rank, got: parts.len() });
        }
        Ok(Weight(parts))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", s.join(" "))
    }
}

/// A permutation of the extended labels lambda_0..lambda_r:
/// the image of lambda has lambda'_i = lambda_{p\[i\]}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelPerm(pub Vec<usize>);

impl LabelPerm {
    pub fn identity(r: usize) -> Self {
        LabelPerm((0..=r).collect())
    }

    pub fn apply(&self, ext: &[i64]) -> Vec<i64> {
        self.0.iter().map(|&i| ext[i]).collect()
    }
}

#[derive(Clone)]
enum WeightIndex {
    Dense { radix: usize, slots: Vec<u32> },
    Sparse(HashMap<Vec<i64>, usize>),
}

const DENSE_LIMIT: usize = 1 << 22;

/// P+ at a fixed algebra and level, in canonical order.
#[derive(Clone)]
pub struct LevelContext {
    pub algebra: Arc<AlgebraData>,
    pub level: i64,
    pub kappa: i64,
    pub pplus: Vec<Weight>,
    index: WeightIndex,
}

impl fmt::Debug for LevelContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LevelContext({}, k={}, |P+|={})", self.algebra.id, self.level, self.pplus.len())
    }
}

impl LevelContext {
    pub fn new(id: AlgebraId, level: i64) -> Result<Self> {
        enumerate_pplus(algebra_data(id), level)
    }

    pub fn id(&self) -> AlgebraId {
        self.algebra.id
    }

    pub fn rank(&self) -> usize {
        self.algebra.rank()
    }

    pub fn len(&self) -> usize {
        self.pplus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pplus.is_empty()
    }

    pub fn index_of_zero(&self) -> usize {
        0
    }

    /// Short descriptor such as "E8k5".
    pub fn name(&self) -> String {
        format!("{}k{}", self.algebra.id, self.level)
    }

    pub fn weight(&self, i: usize) -> &Weight {
        &self.pplus[i]
    }

    #[inline]
    pub fn index_of(&self, labels: &[i64]) -> Option<usize> {
        if labels.len() != self.rank() {
            return None;
        }
        match &self.index {
            WeightIndex::Dense { radix, slots } => {
                let mut key = 0usize;
                for &x in labels {
                    if x < 0 || x as usize >= *radix {
                        return None;
                    }
                    key = key * radix + x as usize;
                }
                let v = slots[key];
                (v != u32::MAX).then_some(v as usize)
            }
            WeightIndex::Sparse(m) => m.get(labels).copied(),
        }
    }

    pub fn require_index(&self, w: &Weight) -> Result<usize> {
        if w.rank() != self.rank() {
            return Err(FusionError::DimensionMismatch { expected: self.rank(), got: w.rank() });
        }
        self.index_of(w.labels())
            .ok_or_else(|| FusionError::NotInPplus { weight: w.to_string(), level: self.level })
    }

    pub fn parse_weight(&self, s: &str) -> Result<usize> {
        self.require_index(&Weight::parse(s, self.rank())?)
    }

    /// lambda_0 = k - sum a_i^vee lambda_i.
    pub fn label0(&self, i: usize) -> i64 {
        self.level - self.algebra.level_of(self.pplus[i].labels())
    }

    /// Extended labels (lambda_0, ..., lambda_r).
    pub fn extended(&self, i: usize) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.rank() + 1);
        v.push(self.label0(i));
        v.extend_from_slice(self.pplus[i].labels());
        v
    }

    /// Index of the weight with extended labels `ext`.
    pub fn from_extended(&self, ext: &[i64]) -> Option<usize> {
        let i = self.index_of(&ext[1..])?;
        (self.label0(i) == ext[0]).then_some(i)
    }

    /// The permutation of P+ induced by an extended-label permutation.
    pub fn label_perm_action(&self, p: &LabelPerm) -> Result<Perm> {
        let images = (0..self.len())
            .map(|i| {
                self.from_extended(&p.apply(&self.extended(i)))
                    .ok_or_else(|| FusionError::NotAPermutation(format!("{p:?} leaves P+")))
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::from_images(images)
    }

    pub fn dimension(&self, i: usize) -> num_bigint::BigUint {
        self.algebra.weyl_dimension(self.pplus[i].labels())
    }
}

/// Enumerate P+ at level k: all lambda with sum_{i>=0} a_i^vee lambda_i = k,
/// sorted lexicographically on (lambda_1..lambda_r) so that 0 comes first.
pub fn enumerate_pplus(algebra: Arc<AlgebraData>, k: i64) -> Result<LevelContext> {
    if k < 1 {
        return Err(FusionError::InvalidLevel(k));
    }
    let r = algebra.rank();
    let marks = algebra.comarks[1..].to_vec();
    let mut out: Vec<Weight> = Vec::new();
    let mut cur = vec![0i64; r];
    fn rec(i: usize, left: i64, marks: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if i == marks.len() {
            out.push(Weight(cur.clone()));
            return;
        }
        let mut x = 0;
        while x * marks[i] <= left {
            cur[i] = x;
            rec(i + 1, left - x * marks[i], marks, cur, out);
            x += 1;
        }
        cur[i] = 0;
    }
    rec(0, k, &marks, &mut cur, &mut out);
    out.sort();
    let radix = k as usize + 1;
    let dense = radix.checked_pow(r as u32).filter(|&n| n <= DENSE_LIMIT);
    let index = match dense {
        Some(n) => {
            let mut slots = vec![u32::MAX; n];
            for (idx, w) in out.iter().enumerate() {
                let key = w.0.iter().fold(0usize, |acc, &x| acc * radix + x as usize);
                slots[key] = idx as u32;
            }
            WeightIndex::Dense { radix, slots }
        }
        None => WeightIndex::Sparse(out.iter().enumerate().map(|(i, w)| (w.0.clone(), i)).collect()),
    };
    let kappa = k + algebra.dual_coxeter;
    Ok(LevelContext { algebra, level: k, kappa, pplus: out, index })
}

/// Charge conjugation C on extended labels.
pub fn charge_conjugation_labels(id: AlgebraId) -> LabelPerm {
    let r = id.rank();
    match id.family() {
        Family::A if r >= 2 => {
            let mut p = vec![0];
            p.extend((1..=r).rev());
            LabelPerm(p)
        }
        Family::D if r % 2 == 1 => swap_last_two(r),
        Family::E if r == 6 => LabelPerm(vec![0, 5, 4, 3, 2, 1, 6]),
        _ => LabelPerm::identity(r),
    }
}

fn swap_last_two(r: usize) -> LabelPerm {
    let mut p: Vec<usize> = (0..=r).collect();
    p.swap(r - 1, r);
    LabelPerm(p)
}

/// All symmetries of the unextended Dynkin diagram, as label permutations.
pub fn conjugation_labels(id: AlgebraId) -> Vec<LabelPerm> {
    let r = id.rank();
    let mut out = vec![LabelPerm::identity(r)];
    match id.family() {
        Family::A if r >= 2 => out.push(charge_conjugation_labels(id)),
        Family::D if r == 4 => {
            // any permutation of labels 1, 3, 4
            let slots = [1usize, 3, 4];
            for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                let mut p: Vec<usize> = (0..=4).collect();
                for (a, &b) in perm.iter().enumerate() {
                    p[slots[a]] = slots[b];
                }
                out.push(LabelPerm(p));
            }
        }
        Family::D => out.push(swap_last_two(r)),
        Family::E if r == 6 => out.push(charge_conjugation_labels(id)),
        _ => {}
    }
    out
}

/// Generators of the simple-current group as extended-diagram symmetries.
pub fn simple_current_generators(id: AlgebraId) -> Vec<LabelPerm> {
    let r = id.rank();
    match id.family() {
        Family::A => {
            let mut p = vec![r];
            p.extend(0..r);
            vec![LabelPerm(p)]
        }
        Family::B => {
            let mut p: Vec<usize> = (0..=r).collect();
            p.swap(0, 1);
            vec![LabelPerm(p)]
        }
        Family::C => vec![LabelPerm((0..=r).rev().collect())],
        Family::D => vec![d_vector_current(r), d_spinor_current(r)],
        Family::E if r == 6 => vec![LabelPerm(vec![5, 0, 6, 3, 2, 1, 4])],
        Family::E if r == 7 => vec![LabelPerm(vec![6, 5, 4, 3, 2, 1, 0, 7])],
        _ => vec![],
    }
}

/// J_v for D_r.
pub fn d_vector_current(r: usize) -> LabelPerm {
    let mut p: Vec<usize> = (0..=r).collect();
    p.swap(0, 1);
    p.swap(r - 1, r);
    LabelPerm(p)
}

/// J_s for D_r.
pub fn d_spinor_current(r: usize) -> LabelPerm {
    if r % 2 == 0 {
        LabelPerm((0..=r).rev().collect())
    } else {
        let mut p = vec![r - 1, r];
        p.extend((0..=r - 2).rev());
        LabelPerm(p)
    }
}

/// Charge conjugation as a permutation of P+.
pub fn charge_conjugation(ctx: &LevelContext) -> Perm {
    ctx.label_perm_action(&charge_conjugation_labels(ctx.id()))
        .expect("charge conjugation preserves P+")
}

pub fn charge_conjugate(ctx: &LevelContext, w: &Weight) -> Result<Weight> {
    let i = ctx.require_index(w)?;
    Ok(ctx.weight(charge_conjugation(ctx).apply(i)).clone())
}

/// The conjugation group as permutations of P+ (deduplicated, sorted).
pub fn conjugations(ctx: &LevelContext) -> Vec<Perm> {
    let mut v: Vec<Perm> = conjugation_labels(ctx.id())
        .iter()
        .map(|p| ctx.label_perm_action(p).expect("conjugations preserve P+"))
        .collect();
    v.sort();
    v.dedup();
    v
}

/// The closed-form simple-current group acting on P+.
pub fn closed_form_currents(ctx: &LevelContext) -> Vec<Perm> {
    let gens: Vec<Perm> = simple_current_generators(ctx.id())
        .iter()
        .map(|p| ctx.label_perm_action(p).expect("extended-diagram symmetries preserve P+"))
        .collect();
    generate_group(&gens, ctx.len())
}

#[derive(Debug, Clone)]
pub struct SimpleCurrent {
    /// Index of j = J0.
    pub rep: usize,
    pub perm: Perm,
    pub order: usize,
    /// Q_j(mu) mod 1 in [0, 1), indexed by P+ position.
    pub charge: Vec<Rational64>,
}

/// Reduce a rational into [0, 1).
pub fn frac(q: Rational64) -> Rational64 {
    q - q.floor()
}

/// Indices of weights with D = 1.
pub fn current_indices(s: &SMatrix) -> Vec<usize> {
    (0..s.len()).filter(|&j| (s.qdim(j) - 1.0).abs() < QDIM_TOL).collect()
}

/// Simple currents of `ctx`, found from D(j) = 1. The permutation is read off
/// S (S_{J lambda, mu} S_{0 mu} = S_{j mu} S_{lambda mu}) and cross-checked
/// against the extended-diagram formula whenever one exists.
pub fn simple_currents(ctx: &LevelContext, s: &SMatrix) -> Result<Vec<SimpleCurrent>> {
    let n = ctx.len();
    let closed = closed_form_currents(ctx);
    let tol = s.tol.max(1e-9) * 100.0;
    let mut out = Vec::new();
    for j in current_indices(s) {
        let mut images = Vec::with_capacity(n);
        for lam in 0..n {
            let target: Vec<num_complex::Complex64> =
                (0..n).map(|mu| s.get(j, mu) * s.get(lam, mu) / s.get(0, mu)).collect();
            let hit = (0..n).find(|&nu| (0..n).all(|mu| (s.get(nu, mu) - target[mu]).norm() < tol));
            images.push(hit.ok_or(FusionError::NoPartner(lam))?);
        }
        let perm = Perm::from_images(images)?;
        if let Some(cf) = closed.iter().find(|g| g.apply(0) == j) {
            if *cf != perm {
                return Err(FusionError::Internal(format!(
                    "simple current [{}]: closed form disagrees with S",
                    ctx.weight(j)
                )));
            }
        }
        let order = perm.order();
        let grid = (order as i64) * ctx.algebra.conductor * ctx.kappa;
        let mut charge = Vec::with_capacity(n);
        for mu in 0..n {
            let ratio = s.get(j, mu) / s.get(0, mu);
            let turns = ratio.arg() / (2.0 * std::f64::consts::PI);
            let q = frac(Rational64::new((turns * grid as f64).round() as i64, grid));
            let phase = num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (*q.numer() as f64) / (*q.denom() as f64));
            for lam in 0..n {
                if (s.get(perm.apply(lam), mu) - phase * s.get(lam, mu)).norm() > tol {
                    return Err(FusionError::InconsistentCharge {
                        current: ctx.weight(j).to_string(),
                        weight: ctx.weight(mu).to_string(),
                    });
                }
            }
            charge.push(q);
        }
        out.push(SimpleCurrent { rep: j, perm, order, charge });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(s: &str, k: i64) -> LevelContext {
        LevelContext::new(s.parse().unwrap(), k).unwrap()
    }

    fn binom(n: u64, k: u64) -> u64 {
        (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
    }

    #[test]
    fn a1_level_two() {
        let c = ctx("A1", 2);
        let w: Vec<_> = c.pplus.iter().map(|w| w.0.clone()).collect();
        assert_eq!(w, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn e8_level_two() {
        let c = ctx("E8", 2);
        let names: Vec<String> = c.pplus.iter().map(|w| w.pretty()).collect();
        assert_eq!(names.len(), 3);
        assert!(names.contains(&"L1".to_string()) && names.contains(&"L7".to_string()));
        assert_eq!(names[0], "0");
    }

    #[test]
    fn b3_level_two() {
        // brute force over lambda_0 + lambda_1 + 2 lambda_2 + lambda_3 = 2
        let mut expect = Vec::new();
        for l1 in 0..=2 {
            for l2 in 0..=1 {
                for l3 in 0..=2 {
                    if l1 + 2 * l2 + l3 <= 2 {
                        expect.push(vec![l1, l2, l3]);
                    }
                }
            }
        }
        expect.sort();
        let c = ctx("B3", 2);
        let got: Vec<_> = c.pplus.iter().map(|w| w.0.clone()).collect();
        assert_eq!(got, expect);
        assert_eq!(got.len(), 7);
    }

    #[test]
    fn a_series_cardinality() {
        for r in 1..=4u64 {
            for k in 1..=6u64 {
                assert_eq!(ctx(&format!("A{r}"), k as i64).len() as u64, binom(r + k, r));
            }
        }
    }

    #[test]
    fn level_must_be_positive() {
        assert!(LevelContext::new("A1".parse().unwrap(), 0).is_err());
    }

    #[test]
    fn charge_conjugation_a2() {
        let c = ctx("A2", 3);
        let w = Weight::parse("L1+2L2", 2).unwrap();
        assert_eq!(charge_conjugate(&c, &w).unwrap(), Weight(vec![2, 1]));
        assert_eq!(charge_conjugate(&c, &Weight::zero(2)).unwrap(), Weight::zero(2));
        assert!(charge_conjugate(&c, &Weight(vec![3, 3])).is_err());
        assert!(charge_conjugation(&ctx("B3", 3)).is_identity());
    }

    #[test]
    fn conjugation_counts() {
        assert_eq!(conjugations(&ctx("D4", 2)).len(), 6);
        let d6 = ctx("D6", 1);
        let c = conjugations(&d6);
        assert_eq!(c.len(), 2);
        let l5 = d6.parse_weight("L5").unwrap();
        let l6 = d6.parse_weight("L6").unwrap();
        assert!(c.iter().any(|p| p.apply(l5) == l6));
        assert_eq!(conjugations(&ctx("G2", 3)).len(), 1);
        assert_eq!(conjugations(&ctx("E6", 2)).len(), 2);
        assert_eq!(conjugations(&ctx("A3", 2)).len(), 2);
    }

    #[test]
    fn closed_form_current_groups() {
        for (s, k, n) in [("A3", 2, 4), ("B4", 3, 2), ("C3", 2, 2), ("D4", 2, 4), ("D5", 2, 4), ("E6", 2, 3), ("E7", 2, 2), ("F4", 3, 1)] {
            let c = ctx(s, k);
            let g = closed_form_currents(&c);
            assert_eq!(g.len(), n, "{s}");
        }
        // J_s of D5 has order 4, D4's currents have order 2
        let d5 = ctx("D5", 2);
        let js = d5.label_perm_action(&d_spinor_current(5)).unwrap();
        assert_eq!(js.order(), 4);
        let d4 = ctx("D4", 2);
        assert_eq!(d4.label_perm_action(&d_spinor_current(4)).unwrap().order(), 2);
    }

    #[test]
    fn a_current_maps_zero_to_k_lambda1() {
        let c = ctx("A2", 3);
        let g = c.label_perm_action(&simple_current_generators(c.id())[0]).unwrap();
        assert_eq!(c.weight(g.apply(0)), &Weight(vec![3, 0]));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Weight::parse("1 0 2", 3).unwrap(), Weight(vec![1, 0, 2]));
        assert_eq!(Weight::parse("1,0,2", 3).unwrap(), Weight(vec![1, 0, 2]));
        assert_eq!(Weight::parse("L1+2L3", 3).unwrap(), Weight(vec![1, 0, 2]));
        assert_eq!(Weight::parse("Λ2", 3).unwrap(), Weight(vec![0, 1, 0]));
        assert_eq!(Weight::parse("0", 3).unwrap(), Weight::zero(3));
        assert!(Weight::parse("L4", 3).is_err());
        assert!(Weight::parse("1 2", 3).is_err());
        assert_eq!(Weight(vec![1, 0, 2]).pretty(), "L1+2L3");
    }
}
