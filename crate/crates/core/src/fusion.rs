//! Tensor-product multiplicities, Kac-Walton fusion, Verlinde cross-checks,
//! and the on-disk table cache.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::characters::{weight_multiplicities, SMatrix, WeightSystem};
use crate::error::{FusionError, Result};
use crate::liealg::AlgebraData;
use crate::perm::Perm;
use crate::weights::{charge_conjugation, LevelContext};

/// Rounding tolerance for Verlinde sums.
pub const ROUND_TOL: f64 = 1e-6;

/// Bumped whenever table contents could change.
pub const CACHE_VERSION: &str = concat!("v1-", env!("CARGO_PKG_VERSION"));

fn smaller_first<'a>(alg: &AlgebraData, a: &'a [i64], b: &'a [i64]) -> (&'a [i64], &'a [i64]) {
    if (alg.weyl_dimension_f64(a), a) <= (alg.weyl_dimension_f64(b), b) {
        (a, b)
    } else {
        (b, a)
    }
}

/// Multiplicities of L(nu) in L(lambda) (x) L(mu) by Racah-Speiser folding.
pub fn tensor_mult(alg: &std::sync::Arc<AlgebraData>, lambda: &[i64], mu: &[i64]) -> BTreeMap<Vec<i64>, u64> {
    let (small, big) = smaller_first(alg, lambda, mu);
    let ws = weight_multiplicities(alg, small);
    let mut acc: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    let mut v = vec![0i64; big.len()];
    ws.for_each_weight(|w, m| {
        for ((x, b), c) in v.iter_mut().zip(big).zip(w) {
            *x = b + c + 1;
        }
        let sign = alg.fold_shifted(&mut v, None, None).expect("finite fold terminates");
        if sign != 0 {
            let nu: Vec<i64> = v.iter().map(|x| x - 1).collect();
            *acc.entry(nu).or_default() += sign as i64 * m as i64;
        }
    });
    acc.into_iter()
        .filter(|(_, m)| *m != 0)
        .map(|(k, m)| {
            assert!(m > 0, "negative tensor multiplicity");
            (k, m as u64)
        })
        .collect()
}

/// Accumulate Kac-Walton sums for one weight system against several mu.
/// Returns a flat |mus| x |P+| array of signed totals.
fn kac_walton_rows(ctx: &LevelContext, ws: &WeightSystem, mus: &[usize]) -> Vec<i64> {
    let n = ctx.len();
    let alg = &ctx.algebra;
    let r = alg.rank();
    let kappa = ctx.kappa;
    let shifted: Vec<Vec<i64>> = mus
        .iter()
        .map(|&mu| ctx.weight(mu).labels().iter().map(|x| x + 1).collect())
        .collect();
    let nm = mus.len();
    ws.fold_weights(
        || vec![0i64; nm * n],
        |acc, w, m| {
            let mut v = [0i64; 16];
            let v = &mut v[..r];
            for (s, base) in shifted.iter().enumerate() {
                for ((x, b), c) in v.iter_mut().zip(base).zip(w) {
                    *x = b + c;
                }
                let sign = alg.fold_shifted(v, Some(&kappa), None).expect("affine fold terminates");
                if sign == 0 {
                    continue;
                }
                for x in v.iter_mut() {
                    *x -= 1;
                }
                let nu = ctx.index_of(v).expect("folded weight lies in P+");
                acc[s * n + nu] += sign as i64 * m as i64;
            }
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    )
}

fn check_row(ctx: &LevelContext, lam: usize, mu: usize, row: &[i64]) -> Result<Vec<(u32, u32)>> {
    let mut out = Vec::new();
    for (nu, &x) in row.iter().enumerate() {
        if x < 0 {
            return Err(FusionError::NegativeFusion {
                lambda: ctx.weight(lam).to_string(),
                mu: ctx.weight(mu).to_string(),
                nu: ctx.weight(nu).to_string(),
                value: x,
            });
        }
        if x > 0 {
            out.push((nu as u32, x as u32));
        }
    }
    Ok(out)
}

/// lambda fusion mu by the Kac-Walton formula.
pub fn fusion_product(ctx: &LevelContext, lambda: usize, mu: usize) -> Result<BTreeMap<usize, u64>> {
    let alg = &ctx.algebra;
    let (a, b) = (ctx.weight(lambda).labels(), ctx.weight(mu).labels());
    let (s, other) = if smaller_first(alg, a, b).0 == a { (lambda, mu) } else { (mu, lambda) };
    let ws = weight_multiplicities(alg, ctx.weight(s).labels());
    let row = kac_walton_rows(ctx, &ws, &[other]);
    Ok(check_row(ctx, lambda, mu, &row)?.into_iter().map(|(nu, m)| (nu as usize, m as u64)).collect())
}

/// Sparse structure constants N_{ab}^c over P+.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionTable {
    n: usize,
    /// products\[a * n + b\] = sorted (c, N_ab^c) with N > 0.
    products: Vec<Vec<(u32, u32)>>,
    pub name: String,
}

impl FusionTable {
    pub fn from_products(n: usize, products: Vec<Vec<(u32, u32)>>, name: String) -> Self {
        assert_eq!(products.len(), n * n);
        FusionTable { n, products, name }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn product(&self, a: usize, b: usize) -> &[(u32, u32)] {
        &self.products[a * self.n + b]
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> u32 {
        let p = self.product(a, b);
        match p.binary_search_by_key(&(c as u32), |e| e.0) {
            Ok(i) => p[i].1,
            Err(_) => 0,
        }
    }

    /// Does `perm` preserve every structure constant? Checked over the
    /// support in both directions.
    pub fn is_fusion_symmetry(&self, perm: &Perm) -> bool {
        self.is_isomorphism_to(self, perm)
    }

    /// Does `perm` (from this ring to `other`) satisfy N_{ab}^c = M_{pa,pb}^{pc}?
    pub fn is_isomorphism_to(&self, other: &FusionTable, perm: &Perm) -> bool {
        if self.n != other.n || perm.len() != self.n {
            return false;
        }
        for a in 0..self.n {
            for b in 0..self.n {
                let mine = self.product(a, b);
                let theirs = other.product(perm.apply(a), perm.apply(b));
                if mine.len() != theirs.len() {
                    return false;
                }
                for &(c, m) in mine {
                    if other.get(perm.apply(a), perm.apply(b), perm.apply(c as usize)) != m {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Fusion matrix (N_a)_{b c} = N_{ab}^c, dense.
    pub fn matrix(&self, a: usize) -> Vec<Vec<u32>> {
        (0..self.n)
            .map(|b| {
                let mut row = vec![0; self.n];
                for &(c, m) in self.product(a, b) {
                    row[c as usize] = m;
                }
                row
            })
            .collect()
    }

    /// Largest violation of sum_s N_ab^s N_sc^t = sum_s N_bc^s N_as^t.
    pub fn associativity_defect(&self) -> u64 {
        let n = self.n;
        (0..n)
            .into_par_iter()
            .map(|a| {
                let mut worst = 0u64;
                let mut lhs = vec![0i64; n];
                for b in 0..n {
                    for c in 0..n {
                        lhs.iter_mut().for_each(|x| *x = 0);
                        for &(s, m) in self.product(a, b) {
                            for &(t, m2) in self.product(s as usize, c) {
                                lhs[t as usize] += (m * m2) as i64;
                            }
                        }
                        for &(s, m) in self.product(b, c) {
                            for &(t, m2) in self.product(a, s as usize) {
                                lhs[t as usize] -= (m * m2) as i64;
                            }
                        }
                        worst = worst.max(lhs.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0));
                    }
                }
                worst
            })
            .max()
            .unwrap_or(0)
    }
}

/// Materialize the full table. Each unordered triple is computed once, from
/// the weight system of its smallest member, and the rest is filled in from
/// the total symmetry of N_{ab}^{Cc}.
pub fn build_table(ctx: &LevelContext) -> Result<FusionTable> {
    let n = ctx.len();
    let alg = &ctx.algebra;
    let c = charge_conjugation(ctx);
    let mut order: Vec<usize> = (0..n).collect();
    let dims: Vec<f64> = (0..n).map(|i| alg.weyl_dimension_f64(ctx.weight(i).labels())).collect();
    order.sort_by(|&a, &b| dims[a].partial_cmp(&dims[b]).unwrap().then(a.cmp(&b)));
    let mut pos = vec![0; n];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    let pieces: Vec<Vec<(usize, usize, Vec<(u32, u32)>)>> = order
        .par_iter()
        .map(|&lam| {
            let mus: Vec<usize> = (0..n).filter(|&mu| pos[mu] >= pos[lam]).collect();
            let ws = weight_multiplicities(alg, ctx.weight(lam).labels());
            let rows = kac_walton_rows(ctx, &ws, &mus);
            mus.iter()
                .enumerate()
                .map(|(s, &mu)| Ok((lam, mu, check_row(ctx, lam, mu, &rows[s * n..(s + 1) * n])?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut dense: Vec<BTreeMap<u32, u32>> = vec![BTreeMap::new(); n * n];
    for (lam, mu, row) in pieces.into_iter().flatten() {
        for (nu, m) in row {
            let cn = c.apply(nu as usize);
            let t = [lam, mu, cn];
            for (x, y, z) in [(0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 0, 1), (1, 2, 0), (2, 1, 0)] {
                dense[t[x] * n + t[y]].insert(c.apply(t[z]) as u32, m);
            }
        }
    }
    let products = dense.into_iter().map(|m| m.into_iter().collect()).collect();
    Ok(FusionTable { n, products, name: ctx.name() })
}

/// N_{ab}^c from the Verlinde formula, with its rounding residual.
pub fn verlinde_value(s: &SMatrix, a: usize, b: usize, c: usize) -> (f64, f64) {
    let mut acc = Complex64::new(0.0, 0.0);
    for d in 0..s.len() {
        acc += s.get(a, d) * s.get(b, d) * s.get(c, d).conj() / s.get(0, d);
    }
    let rounded = acc.re.round();
    (rounded, (acc - rounded).norm())
}

pub fn verlinde_fusion(s: &SMatrix, a: usize, b: usize, c: usize) -> Result<u64> {
    let (v, res) = verlinde_value(s, a, b, c);
    if res > ROUND_TOL || v < 0.0 {
        return Err(FusionError::Rounding(res));
    }
    Ok(v as u64)
}

/// Compare every Kac-Walton coefficient against Verlinde. Returns the
/// largest rounding residual and the number of mismatching triples.
pub fn verlinde_agreement(s: &SMatrix, table: &FusionTable) -> (f64, usize) {
    let n = s.len();
    let inv0: Vec<Complex64> = (0..n).map(|d| s.get(0, d).inv()).collect();
    (0..n)
        .into_par_iter()
        .map(|a| {
            let mut worst = 0.0f64;
            let mut bad = 0usize;
            let mut w = vec![Complex64::new(0.0, 0.0); n];
            for b in a..n {
                for d in 0..n {
                    w[d] = s.get(a, d) * s.get(b, d) * inv0[d];
                }
                for c in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for d in 0..n {
                        acc += w[d] * s.get(c, d).conj();
                    }
                    let rounded = acc.re.round();
                    worst = worst.max((acc - rounded).norm());
                    if rounded != table.get(a, b, c) as f64 || table.get(a, b, c) != table.get(b, a, c) {
                        bad += 1;
                    }
                }
            }
            (worst, bad)
        })
        .reduce(|| (0.0, 0), |x, y| (x.0.max(y.0), x.1 + y.1))
}

/// Genus-g Verlinde dimension with punctures labelled by P+ indices.
pub fn verlinde_genus_value(s: &SMatrix, g: u32, punctures: &[usize]) -> (f64, f64) {
    let mut acc = Complex64::new(0.0, 0.0);
    for b in 0..s.len() {
        let s0 = s.get(0, b);
        let mut term = s0.powf(2.0 * (1.0 - g as f64));
        for &a in punctures {
            term *= s.get(a, b) / s0;
        }
        acc += term;
    }
    let rounded = acc.re.round();
    (rounded, (acc - rounded).norm())
}

pub fn verlinde_genus(s: &SMatrix, g: u32, punctures: &[usize]) -> Result<u64> {
    let (v, res) = verlinde_genus_value(s, g, punctures);
    if res > ROUND_TOL || v < 0.0 {
        return Err(FusionError::Rounding(res));
    }
    Ok(v as u64)
}

/// Cache file for a context.
pub fn cache_path(dir: &Path, ctx: &LevelContext) -> PathBuf {
    dir.join(format!("{}-{}.fus", ctx.name(), CACHE_VERSION))
}

/// Write a table as: a header, the canonical P+ order, then one
/// "a b c N" line per nonzero coefficient.
pub fn write_table(path: &Path, ctx: &LevelContext, table: &FusionTable) -> Result<()> {
    let mut s = String::new();
    let _ = writeln!(s, "affine-fusion-table {CACHE_VERSION}");
    let _ = writeln!(s, "context {}", ctx.name());
    let _ = writeln!(s, "pplus {}", ctx.len());
    for w in &ctx.pplus {
        let _ = writeln!(s, "w {w}");
    }
    for a in 0..table.n {
        for b in 0..table.n {
            for &(c, m) in table.product(a, b) {
                let _ = writeln!(s, "{a} {b} {c} {m}");
            }
        }
    }
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    let mut f = std::fs::File::create(&tmp)?;
    f.write_all(s.as_bytes())?;
    f.sync_all()?;
    std::fs::rename(tmp, path)?;
    Ok(())
}

pub fn read_table(path: &Path, ctx: &LevelContext) -> Result<FusionTable> {
    let f = std::fs::File::open(path)?;
    let mut lines = BufReader::new(f).lines();
    let mut next = |what: &str| -> Result<String> {
        lines
            .next()
            .transpose()?
            .ok_or_else(|| FusionError::Cache(format!("truncated file: missing {what}")))
    };
    let bad = |m: String| FusionError::Cache(m);
    if next("header")? != format!("affine-fusion-table {CACHE_VERSION}") {
        return Err(bad("version mismatch".into()));
    }
    if next("context")? != format!("context {}", ctx.name()) {
        return Err(bad("context mismatch".into()));
    }
    let n = ctx.len();
    if next("size")? != format!("pplus {n}") {
        return Err(bad("P+ size mismatch".into()));
    }
    for w in &ctx.pplus {
        if next("weight")? != format!("w {w}") {
            return Err(bad("P+ order mismatch".into()));
        }
    }
    let mut products: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n * n];
    for line in lines {
        let line = line?;
        let f: Vec<u64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(format!("bad line '{line}'"))))
            .collect::<Result<_>>()?;
        if f.len() != 4 || f[..3].iter().any(|&x| x as usize >= n) {
            return Err(bad(format!("bad line '{line}'")));
        }
        products[f[0] as usize * n + f[1] as usize].push((f[2] as u32, f[3] as u32));
    }
    for p in &mut products {
        p.sort_unstable();
    }
    Ok(FusionTable { n, products, name: ctx.name() })
}

/// Load from cache when present and valid, otherwise build and store.
pub fn load_or_build(ctx: &LevelContext, cache_dir: Option<&Path>) -> Result<FusionTable> {
    if let Some(dir) = cache_dir {
        let p = cache_path(dir, ctx);
        if p.exists() {
            if let Ok(t) = read_table(&p, ctx) {
                return Ok(t);
            }
        }
        let t = build_table(ctx)?;
        write_table(&p, ctx, &t)?;
        return Ok(t);
    }
    build_table(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::smatrix;
    use crate::liealg::algebra_data;
    use crate::weights::Weight;

    fn ctx(s: &str, k: i64) -> LevelContext {
        LevelContext::new(s.parse().unwrap(), k).unwrap()
    }

    fn named(c: &LevelContext, m: &BTreeMap<usize, u64>) -> Vec<(String, u64)> {
        let mut v: Vec<_> = m.iter().map(|(&i, &x)| (c.weight(i).pretty(), x)).collect();
        v.sort();
        v
    }

    /// Littlewood-Richardson coefficients for sl(3) by brute force over
    /// semistandard skew tableaux reading words (partitions with <= 3 rows).
    fn lr_sl3(lam: [i64; 2], mu: [i64; 2]) -> BTreeMap<Vec<i64>, u64> {
        let part = |l: [i64; 2]| [l[0] + l[1], l[1], 0];
        let (a, b) = (part(lam), part(mu));
        let mut out = BTreeMap::new();
        let total = a.iter().sum::<i64>() + b.iter().sum::<i64>();
        for n0 in 0..=total {
            for n1 in 0..=n0 {
                let n2 = total - n0 - n1;
                if n2 < 0 || n2 > n1 {
                    continue;
                }
                let nu = [n0, n1, n2];
                let c = lr_coefficient(&a, &b, &nu);
                if c > 0 {
                    // reduce to sl(3) labels
                    *out.entry(vec![nu[0] - nu[1], nu[1] - nu[2]]).or_insert(0) += c;
                }
            }
        }
        out
    }

    /// Count fillings of nu/a with content b that are semistandard with a
    /// lattice reverse reading word.
    fn lr_coefficient(a: &[i64; 3], b: &[i64; 3], nu: &[i64; 3]) -> u64 {
        if (0..3).any(|i| a[i] > nu[i]) {
            return 0;
        }
        let cells: Vec<(usize, i64)> = (0..3).flat_map(|r| (a[r]..nu[r]).map(move |c| (r, c))).collect();
        if cells.len() as i64 != b.iter().sum::<i64>() {
            return 0;
        }
        let mut fill = vec![0usize; cells.len()];
        let mut count = 0;
        fn rec(i: usize, cells: &[(usize, i64)], fill: &mut Vec<usize>, b: &[i64; 3], count: &mut u64) {
            if i == cells.len() {
                let mut used = [0i64; 3];
                for &f in fill.iter() {
                    used[f] += 1;
                }
                if used != *b {
                    return;
                }
                // reverse reading word: rows top to bottom, right to left
                let mut order: Vec<usize> = (0..cells.len()).collect();
                order.sort_by_key(|&k| (cells[k].0, -cells[k].1));
                let mut seen = [0i64; 3];
                for k in order {
                    seen[fill[k]] += 1;
                    if fill[k] > 0 && seen[fill[k]] > seen[fill[k] - 1] {
                        return;
                    }
                }
                *count += 1;
                return;
            }
            let (r, c) = cells[i];
            for v in 0..3 {
                // rows weakly increase left to right, columns strictly increase downward
                if let Some(j) = cells[..i].iter().position(|&x| x == (r, c - 1)) {
                    if fill[j] > v {
                        continue;
                    }
                }
                if let Some(j) = cells[..i].iter().position(|&x| x == (r.wrapping_sub(1), c)) {
                    if fill[j] >= v {
                        continue;
                    }
                }
                fill[i] = v;
                rec(i + 1, cells, fill, b, count);
            }
        }
        rec(0, &cells, &mut fill, b, &mut count);
        count
    }

    #[test]
    fn tensor_with_trivial() {
        let alg = algebra_data("F4".parse().unwrap());
        let t = tensor_mult(&alg, &[0, 1, 0, 1], &[0, 0, 0, 0]);
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![(vec![0, 1, 0, 1], 1)]);
    }

    #[test]
    fn sl3_against_littlewood_richardson() {
        let alg = algebra_data("A2".parse().unwrap());
        for l in [[1, 0], [0, 1], [1, 1], [2, 1], [3, 0]] {
            for m in [[1, 0], [1, 1], [0, 2], [2, 2]] {
                assert_eq!(tensor_mult(&alg, &l, &m), lr_sl3(l, m), "{l:?} {m:?}");
            }
        }
        let t = tensor_mult(&alg, &[1, 0], &[1, 0]);
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![(vec![0, 1], 1), (vec![2, 0], 1)]);
    }

    #[test]
    fn hook_length_coefficient() {
        // coefficient of L(lambda) in V^{(x) l} for A_r is l!/h(lambda) when l = |lambda| <= r+1
        let alg = algebra_data("A2".parse().unwrap());
        let mut acc: BTreeMap<Vec<i64>, u64> = BTreeMap::from([(vec![1, 0], 1)]);
        for _ in 0..2 {
            let mut next = BTreeMap::new();
            for (w, m) in &acc {
                for (v, x) in tensor_mult(&alg, w, &[1, 0]) {
                    *next.entry(v).or_insert(0) += m * x;
                }
            }
            acc = next;
        }
        assert_eq!(acc[&vec![1, 1]], 2);
        assert_eq!(acc[&vec![3, 0]], 1);
        assert_eq!(acc[&vec![0, 0]], 1);
    }

    #[test]
    fn dimensions_add_up() {
        let alg = algebra_data("G2".parse().unwrap());
        let t = tensor_mult(&alg, &[1, 1], &[0, 2]);
        let total: u128 = t.iter().map(|(w, m)| *m as u128 * alg.weyl_dimension_f64(w).round() as u128).sum();
        assert_eq!(total, 64 * 27);
    }

    #[test]
    fn a1_closed_form_rule() {
        for k in 1..=6 {
            let c = ctx("A1", k);
            let t = build_table(&c).unwrap();
            for a in 0..=k {
                for b in 0..=k {
                    for cc in 0..=k {
                        let allowed = (a + b + cc) % 2 == 0 && (a - b).abs() <= cc && cc <= (a + b).min(2 * k - a - b);
                        assert_eq!(t.get(a as usize, b as usize, cc as usize), allowed as u32);
                    }
                }
            }
        }
    }

    #[test]
    fn truncation_matches_tensor_when_level_allows() {
        let c = ctx("B3", 4);
        let alg = c.algebra.clone();
        for (l, m) in [("L1", "L3"), ("L1", "L1"), ("L3", "L3"), ("L2", "L1")] {
            let (a, b) = (c.parse_weight(l).unwrap(), c.parse_weight(m).unwrap());
            let kw = fusion_product(&c, a, b).unwrap();
            let t = tensor_mult(&alg, c.weight(a).labels(), c.weight(b).labels());
            let kw: BTreeMap<Vec<i64>, u64> = kw.into_iter().map(|(i, m)| (c.weight(i).0.clone(), m)).collect();
            assert_eq!(kw, t, "{l} {m}");
        }
    }

    #[test]
    fn e6_and_g2_examples() {
        let c = ctx("E6", 2);
        let (l1, l5) = (c.parse_weight("L1").unwrap(), c.parse_weight("L5").unwrap());
        let got = named(&c, &fusion_product(&c, l1, l5).unwrap());
        assert_eq!(got, vec![("0".into(), 1), ("L1+L5".into(), 1), ("L6".into(), 1)]);
        let c = ctx("E6", 1);
        let (l1, l5) = (c.parse_weight("L1").unwrap(), c.parse_weight("L5").unwrap());
        assert_eq!(named(&c, &fusion_product(&c, l1, l5).unwrap()), vec![("0".into(), 1)]);
        let c = ctx("G2", 1);
        let l2 = c.parse_weight("L2").unwrap();
        assert_eq!(named(&c, &fusion_product(&c, l2, l2).unwrap()), vec![("0".into(), 1), ("L2".into(), 1)]);
    }

    #[test]
    fn table_axioms_and_verlinde() {
        for (s, k) in [("A2", 3), ("B3", 2), ("C3", 2), ("D4", 2), ("E7", 2), ("F4", 2), ("G2", 3), ("E8", 2)] {
            let c = ctx(s, k);
            let t = build_table(&c).unwrap();
            let cc = charge_conjugation(&c);
            for a in 0..c.len() {
                for b in 0..c.len() {
                    assert_eq!(t.get(0, a, b), (a == b) as u32);
                    assert_eq!(t.product(a, b), t.product(b, a));
                    assert_eq!(t.get(a, b, 0), (b == cc.apply(a)) as u32);
                }
            }
            assert_eq!(t.associativity_defect(), 0, "{s}{k}");
            let sm = smatrix(&c).unwrap();
            let (res, bad) = verlinde_agreement(&sm, &t);
            assert_eq!(bad, 0, "{s}{k}");
            assert!(res < 1e-9, "{s}{k} {res}");
        }
        let c = ctx("E8", 2);
        let t = build_table(&c).unwrap();
        let l1 = c.parse_weight("L1").unwrap();
        let prod: Vec<String> = t.product(l1, l1).iter().map(|&(i, _)| c.weight(i as usize).pretty()).collect();
        assert_eq!(prod, vec!["0", "L7"]);
    }

    #[test]
    fn verlinde_small_values() {
        let s = smatrix(&ctx("A1", 2)).unwrap();
        assert_eq!(verlinde_fusion(&s, 1, 1, 0).unwrap(), 1);
        assert_eq!(verlinde_fusion(&s, 0, 2, 2).unwrap(), 1);
        assert_eq!(verlinde_fusion(&s, 0, 2, 1).unwrap(), 0);
        let s1 = smatrix(&ctx("A1", 1)).unwrap();
        assert_eq!(verlinde_genus(&s1, 2, &[]).unwrap(), 4);
        assert_eq!(verlinde_genus(&s, 1, &[]).unwrap(), 3);
        let e6 = ctx("E6", 1);
        let se6 = smatrix(&e6).unwrap();
        let (l1, l5) = (e6.parse_weight("L1").unwrap(), e6.parse_weight("L5").unwrap());
        assert_eq!(verlinde_fusion(&se6, l1, l5, 0).unwrap(), 1);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = ctx("C2", 3);
        let t = load_or_build(&c, Some(dir.path())).unwrap();
        let path = cache_path(dir.path(), &c);
        assert!(path.exists());
        assert_eq!(read_table(&path, &c).unwrap(), t);
        assert_eq!(load_or_build(&c, Some(dir.path())).unwrap(), t);
        // a table for a different context is rejected
        let other = ctx("C2", 2);
        assert!(read_table(&path, &other).is_err());
    }

    #[test]
    fn swap_in_a1_level_three_is_not_a_symmetry() {
        let t = build_table(&ctx("A1", 3)).unwrap();
        let p = Perm::from_images(vec![0, 2, 1, 3]).unwrap();
        assert!(!t.is_fusion_symmetry(&p));
        assert!(t.is_fusion_symmetry(&Perm::identity(4)));
        let _ = Weight::zero(1);
    }
}
