//! Weight multiplicities, q-dimensions, characters at the special points
//! -2 pi i (mu + rho)/kappa, and the Kac-Peterson S-matrix.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{FusionError, Result};
use crate::liealg::{AlgebraData, AlgebraId};
use crate::weights::{charge_conjugation, LevelContext, QDIM_TOL};

/// Default tolerance for structural S-matrix checks.
pub const S_TOL: f64 = 1e-9;

/// Weight system of an irreducible module L(lambda), stored as its dominant
/// weights with multiplicities. Other weights are reached by Weyl orbits.
#[derive(Debug)]
pub struct WeightSystem {
    pub algebra: Arc<AlgebraData>,
    pub highest: Vec<i64>,
    /// Dominant weights with multiplicities, highest first, by increasing depth.
    pub dominant: Vec<(Vec<i64>, u64)>,
    index: HashMap<Vec<i64>, usize>,
}

impl WeightSystem {
    /// Freudenthal recursion over the dominant weights of L(lambda).
    pub fn new(algebra: Arc<AlgebraData>, highest: &[i64]) -> Self {
        let r = algebra.rank();
        assert_eq!(highest.len(), r);
        assert!(highest.iter().all(|&x| x >= 0), "highest weight must be dominant");
        let heights: Vec<i64> = algebra.positive_roots_simple.iter().map(|c| c.iter().sum()).collect();

        // dominant weights below lambda, with depth = height of lambda - mu
        let mut found: Vec<(Vec<i64>, i64)> = vec![(highest.to_vec(), 0)];
        let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
        seen.insert(highest.to_vec(), ());
        let mut head = 0;
        while head < found.len() {
            let (mu, depth) = found[head].clone();
            head += 1;
            for (a, root) in algebra.positive_roots.iter().enumerate() {
                let nu: Vec<i64> = mu.iter().zip(root).map(|(x, y)| x - y).collect();
                if nu.iter().all(|&x| x >= 0) && !seen.contains_key(&nu) {
                    seen.insert(nu.clone(), ());
                    found.push((nu, depth + heights[a]));
                }
            }
        }
        found.sort_by_key(|(_, d)| *d);

        let mut index: HashMap<Vec<i64>, usize> = HashMap::with_capacity(found.len());
        let mut dominant: Vec<(Vec<i64>, u64)> = Vec::with_capacity(found.len());
        let shift = |v: &[i64]| -> Vec<i64> { v.iter().map(|x| x + 1).collect() };
        let top = shift(highest);
        let top_norm = algebra.scaled_inner(&top, &top);
        let mut v = vec![0i64; r];
        let mut rep = vec![0i64; r];
        for (mu, _) in found {
            let m = if dominant.is_empty() {
                1
            } else {
                let mr = shift(&mu);
                let denom = (top_norm - algebra.scaled_inner(&mr, &mr)) as i128;
                let mut sum: i128 = 0;
                for (a, root) in algebra.positive_roots.iter().enumerate() {
                    v.copy_from_slice(&mu);
                    loop {
                        for (x, y) in v.iter_mut().zip(root) {
                            *x += y;
                        }
                        rep.copy_from_slice(&v);
                        algebra.dominant_rep(&mut rep);
                        let Some(&i) = index.get(&rep) else { break };
                        sum += algebra.scaled_root_pairing(&v, a) as i128 * dominant[i].1 as i128;
                    }
                }
                let num = 2 * sum;
                assert!(denom > 0 && num % denom == 0, "Freudenthal recursion not integral");
                (num / denom) as u64
            };
            index.insert(mu.clone(), dominant.len());
            dominant.push((mu, m));
        }
        WeightSystem { algebra, highest: highest.to_vec(), dominant, index }
    }

    /// Multiplicity of an arbitrary weight.
    pub fn mult(&self, w: &[i64]) -> u64 {
        let mut rep = w.to_vec();
        self.algebra.dominant_rep(&mut rep);
        self.index.get(&rep).map_or(0, |&i| self.dominant[i].1)
    }

    /// Call `f(w, mult)` for every weight of the module.
    pub fn for_each_weight(&self, mut f: impl FnMut(&[i64], u64)) {
        for (d, m) in &self.dominant {
            for_each_orbit_point(&self.algebra, d, |w| f(w, *m));
        }
    }

    /// Parallel fold over all weights, one accumulator per dominant orbit.
    pub fn fold_weights<A, I, F, M>(&self, init: I, f: F, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(&mut A, &[i64], u64) + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        self.dominant
            .par_iter()
            .map(|(d, m)| {
                let mut acc = init();
                for_each_orbit_point(&self.algebra, d, |w| f(&mut acc, w, *m));
                acc
            })
            .reduce(&init, &merge)
    }

    /// Number of distinct weights and total dimension.
    pub fn counts(&self) -> (u64, u128) {
        let mut distinct = 0u64;
        let mut dim = 0u128;
        for (d, m) in &self.dominant {
            let o = orbit_size(&self.algebra, d);
            distinct += o;
            dim += o as u128 * *m as u128;
        }
        (distinct, dim)
    }
}

/// Number of points in the Weyl orbit of a dominant weight.
pub fn orbit_size(alg: &AlgebraData, dom: &[i64]) -> u64 {
    let mut n = 0u64;
    for_each_orbit_point(alg, dom, |_| n += 1);
    n
}

/// Visit every point of the Weyl orbit of the dominant weight `dom` exactly
/// once. Each non-dominant point c is generated only from s_i c, where i is
/// the first negative label of c, so no visited-set is needed.
pub fn for_each_orbit_point(alg: &AlgebraData, dom: &[i64], mut f: impl FnMut(&[i64])) {
    let r = dom.len();
    let mut stack: Vec<i64> = Vec::with_capacity(r * 64);
    stack.extend_from_slice(dom);
    let mut cur = vec![0i64; r];
    let mut child = vec![0i64; r];
    while stack.len() >= r {
        let base = stack.len() - r;
        cur.copy_from_slice(&stack[base..]);
        stack.truncate(base);
        f(&cur);
        for i in 0..r {
            let c = cur[i];
            if c <= 0 {
                continue;
            }
            child.copy_from_slice(&cur);
            for (j, a) in alg.cartan[i].iter().enumerate() {
                child[j] -= c * a;
            }
            if child[..i].iter().all(|&x| x >= 0) {
                stack.extend_from_slice(&child);
            }
        }
    }
}

fn ws_registry() -> &'static Mutex<HashMap<(AlgebraId, Vec<i64>), Arc<WeightSystem>>> {
    static REG: OnceLock<Mutex<HashMap<(AlgebraId, Vec<i64>), Arc<WeightSystem>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared weight system of L(lambda).
pub fn weight_multiplicities(algebra: &Arc<AlgebraData>, lambda: &[i64]) -> Arc<WeightSystem> {
    let key = (algebra.id, lambda.to_vec());
    if let Some(ws) = ws_registry().lock().unwrap().get(&key) {
        return ws.clone();
    }
    let ws = Arc::new(WeightSystem::new(algebra.clone(), lambda));
    ws_registry().lock().unwrap().entry(key).or_insert(ws).clone()
}

/// D(lambda) from the positive-root product.
pub fn qdim_labels(alg: &AlgebraData, kappa: i64, lambda: &[i64]) -> f64 {
    let m = (alg.conductor * kappa) as f64;
    let shifted: Vec<i64> = lambda.iter().map(|x| x + 1).collect();
    let mut d = 1.0;
    for a in 0..alg.positive_roots.len() {
        let num = alg.scaled_root_pairing(&shifted, a) as f64;
        let den = alg.scaled_root_pairing(&alg.rho, a) as f64;
        d *= (PI * num / m).sin() / (PI * den / m).sin();
    }
    d
}

pub fn qdim(ctx: &LevelContext, i: usize) -> f64 {
    qdim_labels(&ctx.algebra, ctx.kappa, ctx.weight(i).labels())
}

/// Evaluate sum_t bins\[t\] exp(2 pi i t / m). A constant offset is removed
/// first (the m-th roots of unity sum to zero) to keep the terms small.
fn eval_bins(bins: &[i64]) -> Complex64 {
    let m = bins.len();
    if m == 1 {
        return Complex64::new(bins[0] as f64, 0.0);
    }
    let mut sorted = bins.to_vec();
    sorted.sort_unstable();
    let c = sorted[m / 2];
    let mut acc = Complex64::new(0.0, 0.0);
    for (t, &b) in bins.iter().enumerate() {
        let x = b - c;
        if x != 0 {
            let ang = 2.0 * PI * (t as f64) / (m as f64);
            acc += Complex64::from_polar(x as f64, ang);
        }
    }
    acc
}

/// chi_lambda\[mu\] for several mu in one pass over the weights of lambda.
pub fn chi_many(ctx: &LevelContext, ws: &WeightSystem, mus: &[usize]) -> Vec<Complex64> {
    let alg = &ctx.algebra;
    let r = alg.rank();
    let m = (alg.conductor * ctx.kappa) as usize;
    // u = gram (mu + rho), so conductor (w | mu + rho) = w . u
    let us: Vec<Vec<i64>> = mus
        .iter()
        .map(|&mu| {
            let shifted: Vec<i64> = ctx.weight(mu).labels().iter().map(|x| x + 1).collect();
            (0..r).map(|i| (0..r).map(|j| alg.gram[i][j] * shifted[j]).sum()).collect()
        })
        .collect();
    let nm = mus.len();
    let mi = m as i64;
    let bins = ws.fold_weights(
        || vec![0i64; nm * m],
        |acc, w, mult| {
            for (s, u) in us.iter().enumerate() {
                let dot: i64 = w.iter().zip(u).map(|(a, b)| a * b).sum();
                let t = (-dot).rem_euclid(mi) as usize;
                acc[s * m + t] += mult as i64;
            }
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    );
    (0..nm).map(|s| eval_bins(&bins[s * m..(s + 1) * m])).collect()
}

pub fn chi(ctx: &LevelContext, lambda: usize, mu: usize) -> Complex64 {
    let ws = weight_multiplicities(&ctx.algebra, ctx.weight(lambda).labels());
    chi_many(ctx, &ws, &[mu])[0]
}

/// Dense Kac-Peterson matrix over P+.
#[derive(Debug, Clone)]
pub struct SMatrix {
    n: usize,
    entries: Vec<Complex64>,
    pub tol: f64,
    qdims: Vec<f64>,
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SResiduals {
    pub symmetry: f64,
    pub unitarity: f64,
    pub square_is_c: f64,
    pub min_row0: f64,
}

impl SMatrix {
    /// Build from an explicit dense matrix (row-major).
    pub fn from_entries(n: usize, entries: Vec<Complex64>, tol: f64, name: String) -> Self {
        assert_eq!(entries.len(), n * n);
        let s00 = entries[0].re;
        let qdims = (0..n).map(|i| entries[i * n].re / s00).collect();
        SMatrix { n, entries, tol, qdims, name }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn qdim(&self, i: usize) -> f64 {
        self.qdims[i]
    }

    pub fn qdims(&self) -> &[f64] {
        &self.qdims
    }

    pub fn residuals(&self, c: &crate::perm::Perm) -> SResiduals {
        let n = self.n;
        let mut sym: f64 = 0.0;
        let mut uni: f64 = 0.0;
        let mut sq: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                sym = sym.max((self.get(i, j) - self.get(j, i)).norm());
                let mut u = Complex64::new(0.0, 0.0);
                let mut s2 = Complex64::new(0.0, 0.0);
                for l in 0..n {
                    u += self.get(i, l) * self.get(j, l).conj();
                    s2 += self.get(i, l) * self.get(l, j);
                }
                let id = if i == j { 1.0 } else { 0.0 };
                uni = uni.max((u - id).norm());
                let cij = if c.apply(i) == j { 1.0 } else { 0.0 };
                sq = sq.max((s2 - cij).norm());
            }
        }
        let min_row0 = (0..n).map(|j| self.get(0, j).re).fold(f64::INFINITY, f64::min);
        SResiduals { symmetry: sym, unitarity: uni, square_is_c: sq, min_row0 }
    }
}

/// Assemble S: S_00 from unitarity of row 0, S_{0 mu} = S_00 D(mu), and
/// S_{lambda mu} = S_{0 mu} chi_lambda\[mu\]. Every entry is computed from the
/// character of its own row, so symmetry is a genuine check.
pub fn smatrix(ctx: &LevelContext) -> Result<SMatrix> {
    smatrix_with_tol(ctx, S_TOL)
}

pub fn smatrix_with_tol(ctx: &LevelContext, tol: f64) -> Result<SMatrix> {
    let n = ctx.len();
    let qd: Vec<f64> = (0..n).map(|i| qdim(ctx, i)).collect();
    let s00 = 1.0 / qd.iter().map(|d| d * d).sum::<f64>().sqrt();
    let all: Vec<usize> = (0..n).collect();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|lam| {
            if lam == 0 {
                return qd.iter().map(|d| Complex64::new(s00 * d, 0.0)).collect();
            }
            let ws = weight_multiplicities(&ctx.algebra, ctx.weight(lam).labels());
            let chis = chi_many(ctx, &ws, &all);
            chis.iter().zip(&qd).map(|(c, d)| c * (s00 * d)).collect()
        })
        .collect();
    let entries: Vec<Complex64> = rows.into_iter().flatten().collect();
    let s = SMatrix { n, entries, tol, qdims: qd, name: ctx.name() };
    let res = s.residuals(&charge_conjugation(ctx));
    if res.unitarity > tol {
        return Err(FusionError::Unitarity { check: "unitarity", residual: res.unitarity });
    }
    if res.symmetry > tol {
        return Err(FusionError::Unitarity { check: "symmetry", residual: res.symmetry });
    }
    Ok(s)
}

/// Weights whose q-dimension is minimal among the non-simple-currents.
pub fn qdim_minimal_orbit(s: &SMatrix) -> Vec<usize> {
    let non_currents: Vec<usize> = (0..s.len()).filter(|&i| (s.qdim(i) - 1.0).abs() >= QDIM_TOL).collect();
    let Some(min) = non_currents.iter().map(|&i| s.qdim(i)).reduce(f64::min) else {
        return Vec::new();
    };
    non_currents.into_iter().filter(|&i| (s.qdim(i) - min).abs() < QDIM_TOL).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::algebra_data;
    use crate::weights::Weight;
    use num_bigint::BigUint;

    fn ctx(s: &str, k: i64) -> LevelContext {
        LevelContext::new(s.parse().unwrap(), k).unwrap()
    }

    fn ws(s: &str, lam: &[i64]) -> Arc<WeightSystem> {
        weight_multiplicities(&algebra_data(s.parse().unwrap()), lam)
    }

    #[test]
    fn trivial_module() {
        let w = ws("E7", &[0; 7]);
        assert_eq!(w.dominant, vec![(vec![0; 7], 1)]);
        assert_eq!(w.counts(), (1, 1));
    }

    #[test]
    fn a2_fundamental() {
        // brute-force orbit of Lambda_1 under reflections
        let w = ws("A2", &[1, 0]);
        let mut pts = Vec::new();
        w.for_each_weight(|p, m| pts.push((p.to_vec(), m)));
        pts.sort();
        assert_eq!(pts, vec![(vec![-1, 1], 1), (vec![0, -1], 1), (vec![1, 0], 1)]);
    }

    #[test]
    fn adjoint_zero_weight_is_rank() {
        for (s, lam) in [("A3", vec![1, 0, 1]), ("G2", vec![1, 0]), ("F4", vec![1, 0, 0, 0]), ("E8", vec![1, 0, 0, 0, 0, 0, 0, 0])] {
            let w = ws(s, &lam);
            let r = lam.len();
            assert_eq!(w.mult(&vec![0; r]), r as u64, "{s}");
        }
    }

    #[test]
    fn dimensions_match_weyl_formula() {
        for (s, lam) in [
            ("E8", vec![1, 0, 0, 0, 0, 0, 0, 0]),
            ("E8", vec![0, 1, 0, 0, 0, 0, 0, 0]),
            ("E6", vec![1, 0, 0, 0, 1, 0]),
            ("B3", vec![1, 1, 1]),
            ("C3", vec![0, 2, 1]),
            ("D5", vec![1, 0, 0, 1, 0]),
            ("F4", vec![1, 0, 0, 1]),
            ("G2", vec![2, 3]),
            ("A4", vec![1, 2, 0, 1]),
        ] {
            let w = ws(s, &lam);
            let (_, dim) = w.counts();
            assert_eq!(BigUint::from(dim), w.algebra.weyl_dimension(&lam), "{s} {lam:?}");
        }
    }

    #[test]
    fn orbit_sizes() {
        let e8 = algebra_data("E8".parse().unwrap());
        assert_eq!(orbit_size(&e8, &[1, 0, 0, 0, 0, 0, 0, 0]), 240);
        assert_eq!(orbit_size(&algebra_data("A2".parse().unwrap()), &[1, 1]), 6);
        assert_eq!(orbit_size(&algebra_data("G2".parse().unwrap()), &[1, 1]), 12);
    }

    #[test]
    fn qdim_basics() {
        let c = ctx("A1", 5);
        assert!((qdim(&c, 0) - 1.0).abs() < 1e-14);
        assert!((qdim(&c, 5) - 1.0).abs() < 1e-12);
        // D_r level 2: D(Lambda_r) = sqrt r, D(Lambda_i) = 2
        let d = ctx("D5", 2);
        let l5 = d.parse_weight("L5").unwrap();
        let l2 = d.parse_weight("L2").unwrap();
        assert!((qdim(&d, l5) - 5f64.sqrt()).abs() < 1e-12);
        assert!((qdim(&d, l2) - 2.0).abs() < 1e-12);
    }

    fn a1_closed_form(k: i64, a: usize, b: usize) -> f64 {
        let kap = (k + 2) as f64;
        (2.0 / kap).sqrt() * (PI * ((a + 1) * (b + 1)) as f64 / kap).sin()
    }

    #[test]
    fn a1_matches_closed_form() {
        for k in 1..=6 {
            let c = ctx("A1", k);
            let s = smatrix(&c).unwrap();
            for a in 0..c.len() {
                for b in 0..c.len() {
                    assert!((s.get(a, b) - a1_closed_form(k, a, b)).norm() < 1e-12);
                }
            }
        }
        let s = smatrix(&ctx("A1", 1)).unwrap();
        assert!((s.get(0, 0).re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((s.get(0, 1).re - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn structural_checks_small() {
        for (s, k) in [("A2", 3), ("B3", 2), ("C2", 3), ("D4", 2), ("E6", 2), ("F4", 2), ("G2", 3)] {
            let c = ctx(s, k);
            let m = smatrix(&c).unwrap();
            let r = m.residuals(&charge_conjugation(&c));
            assert!(r.symmetry < 1e-9 && r.unitarity < 1e-9 && r.square_is_c < 1e-9, "{s}{k} {r:?}");
            assert!(r.min_row0 > 0.0);
        }
    }

    fn orth_shifted(c: &LevelContext, i: usize) -> Vec<f64> {
        let v: Vec<i64> = c.weight(i).labels().iter().map(|x| x + 1).collect();
        c.algebra
            .orthogonal_components(&crate::liealg::to_rational(&v))
            .unwrap()
            .iter()
            .map(|q| num_traits::ToPrimitive::to_f64(q).unwrap())
            .collect()
    }

    #[test]
    fn bcd_vector_characters() {
        // B: 2 sum cos(2 pi x/kappa) + 1; C: 2 sum cos(pi x/kappa); D: 2 sum cos(2 pi x/kappa)
        for (s, k) in [("B3", 3), ("B4", 2), ("C3", 3), ("C2", 4), ("D4", 3), ("D5", 2)] {
            let c = ctx(s, k);
            let l1 = c.parse_weight("L1").unwrap();
            let kap = c.kappa as f64;
            let fam = s.chars().next().unwrap();
            for mu in 0..c.len() {
                let x = orth_shifted(&c, mu);
                let closed: f64 = match fam {
                    'B' => 2.0 * x.iter().map(|y| (2.0 * PI * y / kap).cos()).sum::<f64>() + 1.0,
                    'C' => 2.0 * x.iter().map(|y| (PI * y / kap).cos()).sum::<f64>(),
                    _ => 2.0 * x.iter().map(|y| (2.0 * PI * y / kap).cos()).sum::<f64>(),
                };
                let got = chi(&c, l1, mu);
                assert!((got - closed).norm() < 1e-10, "{s}{k} mu={mu} {got} {closed}");
            }
        }
    }

    #[test]
    fn b_level_two_fixed_points() {
        // chi_{gamma^a}[gamma^b] = 2 cos(2 pi a b / kappa), gamma^a = Lambda_a (a < r), gamma^r = 2 Lambda_r
        let c = ctx("B3", 2);
        let kap = c.kappa as f64;
        let gamma = |a: usize| if a < 3 { Weight::fundamental(3, a) } else { Weight(vec![0, 0, 2]) };
        for a in 1..=3 {
            for b in 1..=3 {
                let got = chi(&c, c.require_index(&gamma(a)).unwrap(), c.require_index(&gamma(b)).unwrap());
                let want = 2.0 * (2.0 * PI * (a * b) as f64 / kap).cos();
                assert!((got - want).norm() < 1e-10);
            }
        }
    }

    /// Schur polynomial by the bialternant formula, evaluated at complex points.
    fn schur(parts: &[i64], xs: &[Complex64]) -> Complex64 {
        let n = xs.len();
        let det = |exps: &dyn Fn(usize) -> i64| -> Complex64 {
            let mut m: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| xs[j].powi(exps(i) as i32)).collect()).collect();
            let mut d = Complex64::new(1.0, 0.0);
            for c in 0..n {
                let p = (c..n).max_by(|&a, &b| m[a][c].norm().partial_cmp(&m[b][c].norm()).unwrap()).unwrap();
                if p != c {
                    m.swap(p, c);
                    d = -d;
                }
                d *= m[c][c];
                for r in c + 1..n {
                    let f = m[r][c] / m[c][c];
                    for j in c..n {
                        let t = m[c][j] * f;
                        m[r][j] -= t;
                    }
                }
            }
            d
        };
        let num = det(&|i| parts.get(i).copied().unwrap_or(0) + (n - 1 - i) as i64);
        let den = det(&|i| (n - 1 - i) as i64);
        num / den
    }

    #[test]
    fn a_series_schur_route() {
        for (s, k) in [("A2", 3), ("A3", 2)] {
            let c = ctx(s, k);
            let r = c.rank();
            let rbar = (r + 1) as f64;
            let kap = c.kappa as f64;
            for lam in 0..c.len() {
                let l = c.weight(lam).labels();
                let parts: Vec<i64> = (0..r).map(|i| l[i..].iter().sum()).collect();
                for mu in 0..c.len() {
                    let m = c.weight(mu);
                    let shifted: Vec<i64> = m.labels().iter().map(|x| x + 1).collect();
                    let rows: Vec<i64> = (0..=r).map(|i| shifted[i.min(r)..].iter().sum()).collect();
                    let xs: Vec<Complex64> = rows.iter().map(|&x| Complex64::from_polar(1.0, -2.0 * PI * x as f64 / kap)).collect();
                    // centre-of-mass correction: the points sum to t(mu + rho)
                    let t_shift = Weight(shifted.clone()).t();
                    let phase = Complex64::from_polar(1.0, 2.0 * PI * (c.weight(lam).t() * t_shift) as f64 / (kap * rbar));
                    let want = schur(&parts, &xs) * phase;
                    let got = chi(&c, lam, mu);
                    assert!((got - want).norm() < 1e-9, "{s}{k} {lam} {mu} {got} {want}");
                }
            }
        }
    }

    #[test]
    fn minimal_orbit_examples() {
        let e8 = ctx("E8", 4);
        let (l1, l6) = (e8.parse_weight("L1").unwrap(), e8.parse_weight("L6").unwrap());
        assert!((qdim(&e8, l1) - qdim(&e8, l6)).abs() < 1e-9);
        let a3 = ctx("A3", 2);
        let s = smatrix(&a3).unwrap();
        let mut got: Vec<String> = qdim_minimal_orbit(&s).iter().map(|&i| a3.weight(i).pretty()).collect();
        got.sort();
        assert_eq!(got, vec!["L1", "L1+L2", "L2+L3", "L3"]);
        let f4 = ctx("F4", 4);
        let s = smatrix(&f4).unwrap();
        let mut got: Vec<String> = qdim_minimal_orbit(&s).iter().map(|&i| f4.weight(i).pretty()).collect();
        got.sort();
        assert_eq!(got, vec!["2L1", "4L4", "L1", "L4"]);
    }
}
