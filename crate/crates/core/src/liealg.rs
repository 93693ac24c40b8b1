//! Static root-system data for the simple Lie algebras and the Weyl-group
//! folding primitives used everywhere downstream.
//!
//! Node numbering follows the level equations of the affine algebras: node 0
//! is the extended node, and for the exceptional algebras the chain is
//! numbered first with the branch node last (E6: 1-2-3-4-5 with 6 on 3,
//! E7: 1-..-6 with 7 on 3, E8: 1-..-7 with 8 on 5; F4 and G2 have the long
//! roots first). Weights are always written in Dynkin labels.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};

/// Cap on reflections performed by a single fold.
const FOLD_CAP: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl FromStr for Family {
    type Err = FusionError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            other => Err(FusionError::Parse(format!("unknown family '{other}'"))),
        }
    }
}

/// A simple Lie algebra X_r, validated against the allowed rank ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlgebraId {
    family: Family,
    rank: usize,
}

impl AlgebraId {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 3,
            Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(AlgebraId { family, rank })
        } else {
            Err(FusionError::InvalidRank { family, rank })
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for AlgebraId {
    type Err = FusionError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (fam, rank) = s.split_at(s.chars().next().map_or(0, |c| c.len_utf8()));
        let family: Family = fam.parse()?;
        let rank: usize = rank
            .parse()
            .map_err(|_| FusionError::Parse(format!("bad rank in '{s}'")))?;
        AlgebraId::new(family, rank)
    }
}

/// Outcome of folding a vector into a Weyl chamber or alcove.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult<T> {
    /// Folded point with the rho-shift removed.
    pub weight: Vec<T>,
    /// det of the Weyl element used, or 0 when the shifted point lies on a wall.
    pub det_sign: i8,
    /// Reflections applied, in order. Index 0 is the affine reflection, i >= 1
    /// is the simple reflection s_i.
    pub reflections: Vec<usize>,
}

/// Scalars the folding routines can act on.
pub trait FoldScalar: Clone + PartialOrd + Signed + FromPrimitive {}
impl<T: Clone + PartialOrd + Signed + FromPrimitive> FoldScalar for T {}

#[derive(Debug)]
pub struct AlgebraData {
    pub id: AlgebraId,
    /// cartan[i][j] = (alpha_i | alpha_j^vee): row i is alpha_i in Dynkin labels.
    pub cartan: Vec<Vec<i64>>,
    /// a_0^vee, ..., a_r^vee.
    pub comarks: Vec<i64>,
    pub dual_coxeter: i64,
    /// (Lambda_i | Lambda_j), long roots of norm 2.
    pub quad_form: Vec<Vec<BigRational>>,
    /// Least common denominator of all (lambda|mu).
    pub conductor: i64,
    /// conductor * quad_form, integral.
    pub gram: Vec<Vec<i64>>,
    /// Positive roots in Dynkin labels, sorted by height then lexicographically.
    pub positive_roots: Vec<Vec<i64>>,
    /// The same roots in simple-root coordinates.
    pub positive_roots_simple: Vec<Vec<i64>>,
    /// gram * alpha for each positive root, so conductor*(v|alpha) = v . root_pairing[a].
    pub root_pairing: Vec<Vec<i64>>,
    /// Highest root in Dynkin labels.
    pub highest_root: Vec<i64>,
    /// Weyl vector (all labels 1).
    pub rho: Vec<i64>,
    /// Conversion matrix to orthogonal components (B, C, D only): row l gives
    /// lambda(l) as a combination of Dynkin labels.
    pub orthogonal: Option<Vec<Vec<BigRational>>>,
    /// Nonzero entries of each Cartan row, for fast reflections.
    reflect_rows: Vec<Vec<(usize, i64)>>,
    theta_sparse: Vec<(usize, i64)>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Squared lengths of simple roots (long = 2) and the edges of the Dynkin diagram.
fn diagram(id: AlgebraId) -> (Vec<BigRational>, Vec<(usize, usize)>) {
    let r = id.rank;
    let two = rat(2, 1);
    let one = rat(1, 1);
    let mut norms = vec![two.clone(); r];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    match id.family {
        Family::A => edges.extend((0..r - 1).map(|i| (i, i + 1))),
        Family::B => {
            edges.extend((0..r - 1).map(|i| (i, i + 1)));
            norms[r - 1] = one;
        }
        Family::C => {
            edges.extend((0..r - 1).map(|i| (i, i + 1)));
            for n in norms.iter_mut().take(r - 1) {
                *n = one.clone();
            }
        }
        Family::D => {
            edges.extend((0..r - 2).map(|i| (i, i + 1)));
            edges.push((r - 3, r - 1));
        }
        Family::E => {
            // chain 1..r-1, branch node r attached to node 3 (E6, E7) or 5 (E8)
            edges.extend((0..r - 2).map(|i| (i, i + 1)));
            let attach = if r == 8 { 4 } else { 2 };
            edges.push((attach, r - 1));
        }
        Family::F => {
            edges.extend([(0, 1), (1, 2), (2, 3)]);
            norms[2] = one.clone();
            norms[3] = one;
        }
        Family::G => {
            edges.push((0, 1));
            norms[1] = rat(2, 3);
        }
    }
    (norms, edges)
}

fn invert_rational(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero()).expect("singular Cartan matrix");
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[i][j] = &a[i][j] - t;
                    let t = &f * &inv[col][j];
                    inv[i][j] = &inv[i][j] - t;
                }
            }
        }
    }
    inv
}

impl AlgebraData {
    /// Generate all root-system data from the Dynkin diagram.
    pub fn new(id: AlgebraId) -> Self {
        let r = id.rank;
        let (norms, edges) = diagram(id);
        // inner products of simple roots
        let mut b = vec![vec![BigRational::zero(); r]; r];
        for i in 0..r {
            b[i][i] = norms[i].clone();
        }
        for &(i, j) in &edges {
            let m = if norms[i] > norms[j] { norms[i].clone() } else { norms[j].clone() };
            let v = -(m / rat(2, 1));
            b[i][j] = v.clone();
            b[j][i] = v;
        }
        let cartan: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let v = rat(2, 1) * &b[i][j] / &b[j][j];
                        assert!(v.is_integer());
                        v.to_integer().to_i64().unwrap()
                    })
                    .collect()
            })
            .collect();

        // F M^T = D, D = diag(|alpha_j|^2 / 2)
        let mt: Vec<Vec<BigRational>> = (0..r)
            .map(|i| (0..r).map(|j| BigRational::from_integer(BigInt::from(cartan[j][i]))).collect())
            .collect();
        let mt_inv = invert_rational(&mt);
        let quad_form: Vec<Vec<BigRational>> = (0..r)
            .map(|i| (0..r).map(|j| &mt_inv[i][j] * &norms[i] / rat(2, 1)).collect())
            .collect();
        let mut conductor = BigInt::one();
        for row in &quad_form {
            for v in row {
                conductor = conductor.lcm(v.denom());
            }
        }
        let conductor = conductor.to_i64().unwrap();
        let gram: Vec<Vec<i64>> = quad_form
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| (v * BigInt::from(conductor)).to_integer().to_i64().unwrap())
                    .collect()
            })
            .collect();

        let positive_roots_simple = positive_roots(&cartan);
        let positive_roots: Vec<Vec<i64>> = positive_roots_simple
            .iter()
            .map(|c| (0..r).map(|j| (0..r).map(|i| c[i] * cartan[i][j]).sum()).collect())
            .collect();
        let root_pairing: Vec<Vec<i64>> = positive_roots
            .iter()
            .map(|a| (0..r).map(|i| (0..r).map(|j| gram[i][j] * a[j]).sum()).collect())
            .collect();
        let top = positive_roots_simple.last().unwrap().clone();
        let highest_root = positive_roots.last().unwrap().clone();
        // theta^vee = sum c_i d_i alpha_i^vee with d_i = |alpha_i|^2/2
        let mut comarks = vec![1i64];
        for i in 0..r {
            let v = BigRational::from_integer(BigInt::from(top[i])) * &norms[i] / rat(2, 1);
            assert!(v.is_integer());
            comarks.push(v.to_integer().to_i64().unwrap());
        }
        let dual_coxeter = comarks.iter().sum();

        let orthogonal = orthogonal_table(id);
        let reflect_rows = cartan
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &a)| a != 0).map(|(j, &a)| (j, a)).collect())
            .collect();
        let theta_sparse = highest_root
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(j, &a)| (j, a))
            .collect();

        AlgebraData {
            id,
            cartan,
            comarks,
            dual_coxeter,
            quad_form,
            conductor,
            gram,
            positive_roots,
            positive_roots_simple,
            root_pairing,
            highest_root,
            rho: vec![1; r],
            orthogonal,
            reflect_rows,
            theta_sparse,
        }
    }

    pub fn rank(&self) -> usize {
        self.id.rank
    }

    /// Level of a weight: sum of a_i^vee lambda_i over i >= 1.
    pub fn level_of(&self, labels: &[i64]) -> i64 {
        labels.iter().zip(&self.comarks[1..]).map(|(l, a)| l * a).sum()
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.rank() {
            return Err(FusionError::DimensionMismatch { expected: self.rank(), got: n });
        }
        Ok(())
    }

    /// Exact inner product (v|w) of two weights given in Dynkin labels.
    pub fn weight_inner(&self, v: &[BigRational], w: &[BigRational]) -> Result<BigRational> {
        self.check_len(v.len())?;
        self.check_len(w.len())?;
        let mut acc = BigRational::zero();
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, wj) in w.iter().enumerate() {
                acc += vi * &self.quad_form[i][j] * wj;
            }
        }
        Ok(acc)
    }

    /// conductor * (v|w) for integral weights.
    pub fn scaled_inner(&self, v: &[i64], w: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            let row = &self.gram[i];
            for (j, &wj) in w.iter().enumerate() {
                acc += vi * row[j] * wj;
            }
        }
        acc
    }

    /// conductor * (v | alpha) for the a-th positive root.
    #[inline]
    pub fn scaled_root_pairing(&self, v: &[i64], a: usize) -> i64 {
        v.iter().zip(&self.root_pairing[a]).map(|(x, y)| x * y).sum()
    }

    /// Apply the simple reflection s_i (1-based, i >= 1) to a weight in labels.
    #[inline]
    pub fn reflect<T: FoldScalar>(&self, v: &mut [T], i: usize) {
        let c = v[i - 1].clone();
        for &(j, a) in &self.reflect_rows[i - 1] {
            let d = c.clone() * T::from_i64(a).unwrap();
            v[j] = v[j].clone() - d;
        }
    }

    /// Apply the affine reflection s_0 at level kappa: v -> v + (kappa - (v|theta)) theta.
    #[inline]
    pub fn reflect_affine<T: FoldScalar>(&self, v: &mut [T], kappa: &T) {
        let v0 = self.affine_label(v, kappa);
        for &(j, a) in &self.theta_sparse {
            v[j] = v[j].clone() + v0.clone() * T::from_i64(a).unwrap();
        }
    }

    #[inline]
    fn affine_label<T: FoldScalar>(&self, v: &[T], kappa: &T) -> T {
        let mut s = kappa.clone();
        for (x, &a) in v.iter().zip(&self.comarks[1..]) {
            s = s - x.clone() * T::from_i64(a).unwrap();
        }
        s
    }

    /// Fold an already rho-shifted vector in place into the interior of the
    /// dominant chamber (kappa = None) or the level-kappa alcove. Returns the
    /// determinant of the Weyl element used, 0 on a wall.
    pub fn fold_shifted<T: FoldScalar>(
        &self,
        v: &mut [T],
        kappa: Option<&T>,
        mut record: Option<&mut Vec<usize>>,
    ) -> Result<i8> {
        let zero = T::zero();
        let mut sign = 1i8;
        for _ in 0..FOLD_CAP {
            let mut best: Option<usize> = None;
            let mut min = zero.clone();
            for (i, x) in v.iter().enumerate() {
                if *x == zero {
                    return Ok(0);
                }
                if *x < min {
                    min = x.clone();
                    best = Some(i + 1);
                }
            }
            if let Some(kappa) = kappa {
                let v0 = self.affine_label(v, kappa);
                if v0 == zero {
                    return Ok(0);
                }
                if v0 < min {
                    best = Some(0);
                }
            }
            let best = match best {
                None => return Ok(sign),
                Some(b) => b,
            };
            if best == 0 {
                self.reflect_affine(v, kappa.unwrap());
            } else {
                self.reflect(v, best);
            }
            if let Some(rec) = record.as_deref_mut() {
                rec.push(best);
            }
            sign = -sign;
        }
        Err(FusionError::NonTermination(FOLD_CAP))
    }

    /// Fold v by the shifted action of the finite Weyl group.
    pub fn finite_fold<T: FoldScalar>(&self, v: &[T]) -> Result<FoldResult<T>> {
        self.check_len(v.len())?;
        let one = T::one();
        let mut x: Vec<T> = v.iter().map(|a| a.clone() + one.clone()).collect();
        let mut reflections = Vec::new();
        let det_sign = self.fold_shifted(&mut x, None, Some(&mut reflections))?;
        let weight = x.into_iter().map(|a| a - one.clone()).collect();
        Ok(FoldResult { weight, det_sign, reflections })
    }

    /// Fold an already rho-shifted vector v by the affine Weyl group at level
    /// kappa (kappa = k + h^vee). The returned weight is the folded point minus rho.
    pub fn affine_fold<T: FoldScalar>(&self, kappa: i64, v: &[T]) -> Result<FoldResult<T>> {
        self.check_len(v.len())?;
        let kap = T::from_i64(kappa).unwrap();
        let one = T::one();
        let mut x = v.to_vec();
        let mut reflections = Vec::new();
        let det_sign = self.fold_shifted(&mut x, Some(&kap), Some(&mut reflections))?;
        let weight = x.into_iter().map(|a| a - one.clone()).collect();
        Ok(FoldResult { weight, det_sign, reflections })
    }

    /// Dominant representative of the (unshifted) Weyl orbit of v.
    pub fn dominant_rep(&self, v: &mut [i64]) {
        loop {
            let mut best = 0usize;
            let mut min = 0i64;
            for (i, &x) in v.iter().enumerate() {
                if x < min {
                    min = x;
                    best = i + 1;
                }
            }
            if best == 0 {
                return;
            }
            self.reflect(v, best);
        }
    }

    /// Weyl dimension of L(lambda) for dominant lambda.
    pub fn weyl_dimension(&self, lambda: &[i64]) -> BigUint {
        let shifted: Vec<i64> = lambda.iter().map(|x| x + 1).collect();
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for a in 0..self.positive_roots.len() {
            num *= BigUint::from(self.scaled_root_pairing(&shifted, a) as u64);
            den *= BigUint::from(self.scaled_root_pairing(&self.rho, a) as u64);
        }
        num / den
    }

    /// Weyl dimension as f64, for ordering only.
    pub fn weyl_dimension_f64(&self, lambda: &[i64]) -> f64 {
        let mut acc = 1.0f64;
        for a in 0..self.positive_roots.len() {
            let n = self.scaled_root_pairing(lambda, a) + self.scaled_root_pairing(&self.rho, a);
            acc *= n as f64 / self.scaled_root_pairing(&self.rho, a) as f64;
        }
        acc
    }

    /// Orthogonal components lambda(1..r) for B, C, D.
    pub fn orthogonal_components(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        let table = self.orthogonal.as_ref()?;
        Some(
            table
                .iter()
                .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// Order of the finite Weyl group, computed as the size of the orbit of rho.
    pub fn weyl_group_order(&self) -> BigUint {
        // |W| = prod over positive roots of ... is not closed form in general;
        // use the degree formula |W| = prod (m_i + 1) via heights of roots.
        let mut counts: HashMap<i64, i64> = HashMap::new();
        for c in &self.positive_roots_simple {
            *counts.entry(c.iter().sum()).or_default() += 1;
        }
        // number of roots of height h minus number of height h+1 gives the
        // multiplicity of exponent h
        let max_h = counts.keys().copied().max().unwrap_or(0);
        let mut order = BigUint::one();
        for h in 1..=max_h {
            let here = counts.get(&h).copied().unwrap_or(0);
            let next = counts.get(&(h + 1)).copied().unwrap_or(0);
            for _ in 0..(here - next) {
                order *= BigUint::from((h + 1) as u64);
            }
        }
        order
    }
}

/// Positive roots in simple-root coordinates by closure under adding simple roots.
fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = cartan.len();
    let mut all: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut layer: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let mut e = vec![0; r];
            e[i] = 1;
            e
        })
        .collect();
    let mut ordered: Vec<Vec<i64>> = Vec::new();
    while !layer.is_empty() {
        layer.sort();
        for b in &layer {
            all.insert(b.clone());
        }
        ordered.extend(layer.iter().cloned());
        let mut next: BTreeSet<Vec<i64>> = BTreeSet::new();
        for beta in &layer {
            for i in 0..r {
                // <beta, alpha_i^vee>
                let pair: i64 = (0..r).map(|j| beta[j] * cartan[j][i]).sum();
                let mut q = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if down == vec![0; r] || !all.contains(&down) {
                        break;
                    }
                    q += 1;
                }
                // beta - q alpha_i is a root (or zero when beta = alpha_i)
                if beta.iter().sum::<i64>() == 1 && beta[i] == 1 {
                    q = 1; // the string through alpha_i includes -alpha_i
                }
                let p = q - pair;
                if p > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    next.insert(up);
                }
            }
        }
        layer = next.into_iter().collect();
    }
    ordered
}

fn orthogonal_table(id: AlgebraId) -> Option<Vec<Vec<BigRational>>> {
    let r = id.rank;
    let half = rat(1, 2);
    let one = rat(1, 1);
    let zero = BigRational::zero();
    let mut t = vec![vec![zero; r]; r];
    match id.family {
        Family::B => {
            for l in 0..r {
                for i in l..r - 1 {
                    t[l][i] = one.clone();
                }
                t[l][r - 1] = half.clone();
            }
        }
        Family::C => {
            for l in 0..r {
                for i in l..r {
                    t[l][i] = one.clone();
                }
            }
        }
        Family::D => {
            for l in 0..r {
                for i in l..r - 1 {
                    t[l][i] = one.clone();
                }
                t[l][r - 1] = &t[l][r - 1] + &half;
                t[l][r - 2] = &t[l][r - 2] - &half;
            }
        }
        _ => return None,
    }
    Some(t)
}

fn registry() -> &'static Mutex<HashMap<AlgebraId, Arc<AlgebraData>>> {
    static REG: OnceLock<Mutex<HashMap<AlgebraId, Arc<AlgebraData>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared, cached root-system data for `id`.
pub fn algebra_data(id: AlgebraId) -> Arc<AlgebraData> {
    let mut reg = registry().lock().unwrap();
    reg.entry(id).or_insert_with(|| Arc::new(AlgebraData::new(id))).clone()
}

/// Convert integer labels to exact rationals.
pub fn to_rational(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}
