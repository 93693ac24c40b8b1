//! Fusion-symmetries: the standard constructions, the exceptional list,
//! S-partners, and brute-force enumeration.

use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use serde::Serialize;

use crate::characters::SMatrix;
use crate::error::{FusionError, Result};
use crate::fusion::FusionTable;
use crate::liealg::{AlgebraId, Family};
use crate::perm::{generate_group, Perm};
use crate::ring::Ring;
use crate::search::{find_bijections, Mode};
use crate::weights::{conjugations, LevelContext, SimpleCurrent, QDIM_TOL};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Identity,
    Conjugation,
    SimpleCurrent { current: String, a: i64 },
    SimpleCurrentMatrix { m: [i64; 4] },
    Galois { ell: i64 },
    RankLevel,
    Exceptional { name: String },
    Product(Vec<Provenance>),
    BruteForce,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Identity => write!(f, "identity"),
            Provenance::Conjugation => write!(f, "conjugation"),
            Provenance::SimpleCurrent { current, a } => write!(f, "pi[{a}] (j = {current})"),
            Provenance::SimpleCurrentMatrix { m } => write!(f, "pi[{} {}; {} {}]", m[0], m[1], m[2], m[3]),
            Provenance::Galois { ell } => write!(f, "pi{{{ell}}}"),
            Provenance::RankLevel => write!(f, "rank-level"),
            Provenance::Exceptional { name } => write!(f, "{name}"),
            Provenance::Product(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", s.join(" * "))
            }
            Provenance::BruteForce => write!(f, "brute-force"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FusionSymmetry {
    pub perm: Perm,
    pub provenance: Provenance,
    pub partner: Option<Perm>,
}

impl FusionSymmetry {
    fn new(perm: Perm, provenance: Provenance) -> Self {
        FusionSymmetry { perm, provenance, partner: None }
    }

    /// `self` after `other`.
    pub fn then(&self, other: &FusionSymmetry) -> FusionSymmetry {
        let mut parts = Vec::new();
        for p in [&self.provenance, &other.provenance] {
            match p {
                Provenance::Identity => {}
                Provenance::Product(v) => parts.extend(v.iter().cloned()),
                p => parts.push(p.clone()),
            }
        }
        let provenance = match parts.len() {
            0 => Provenance::Identity,
            1 => parts.pop().unwrap(),
            _ => Provenance::Product(parts),
        };
        let partner = match (&self.partner, &other.partner) {
            (Some(a), Some(b)) => Some(a.compose(b)),
            _ => None,
        };
        FusionSymmetry { perm: self.perm.compose(&other.perm), provenance, partner }
    }
}

pub fn is_fusion_symmetry(table: &FusionTable, perm: &Perm) -> bool {
    perm.apply(0) == 0 && table.is_fusion_symmetry(perm)
}

fn verified(table: &FusionTable, sym: FusionSymmetry) -> Result<FusionSymmetry> {
    if !is_fusion_symmetry(table, &sym.perm) {
        return Err(FusionError::Verification(format!("{} {} is not a fusion-symmetry", sym.provenance, sym.perm)));
    }
    Ok(sym)
}

/// The Galois permutation lambda -> lambda^(l) with signs eps'_l.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisPermutation {
    pub ell: i64,
    pub perm: Perm,
    pub signs: Vec<i8>,
}

/// kappa * conductor, the modulus that l must be coprime to.
pub fn galois_modulus(ctx: &LevelContext) -> i64 {
    ctx.kappa * ctx.algebra.conductor
}

/// Fold l(lambda + rho) into the alcove at level kappa.
pub fn galois_action(ctx: &LevelContext, ell: i64) -> Result<GaloisPermutation> {
    let m = galois_modulus(ctx);
    if ell.gcd(&m) != 1 {
        return Err(FusionError::NotCoprime { ell, modulus: m });
    }
    let alg = &ctx.algebra;
    let mut images = Vec::with_capacity(ctx.len());
    let mut signs = Vec::with_capacity(ctx.len());
    for i in 0..ctx.len() {
        let mut v: Vec<i64> = ctx.weight(i).labels().iter().map(|x| ell * (x + 1)).collect();
        let sign = alg.fold_shifted(&mut v, Some(&ctx.kappa), None)?;
        if sign == 0 {
            return Err(FusionError::GaloisWall(ctx.weight(i).to_string()));
        }
        let w: Vec<i64> = v.iter().map(|x| x - 1).collect();
        images.push(ctx.index_of(&w).ok_or_else(|| FusionError::Internal("Galois image outside P+".into()))?);
        signs.push(sign);
    }
    Ok(GaloisPermutation { ell, perm: Perm::from_images(images)?, signs })
}

/// Largest violation of eps(l) S_{l^(l), m} = eps(m) S_{l, m^(l)}.
pub fn galois_residual(s: &SMatrix, g: &GaloisPermutation) -> f64 {
    let n = s.len();
    let mut worst = 0.0f64;
    for l in 0..n {
        for m in 0..n {
            let lhs = s.get(g.perm.apply(l), m) * g.signs[l] as f64;
            let rhs = s.get(l, g.perm.apply(m)) * g.signs[m] as f64;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// Galois permutation, checked against S.
pub fn galois_perm(ctx: &LevelContext, s: &SMatrix, ell: i64) -> Result<GaloisPermutation> {
    let g = galois_action(ctx, ell)?;
    let res = galois_residual(s, &g);
    if res > s.tol {
        return Err(FusionError::Verification(format!("Galois identity fails for l = {ell}: residual {res:e}")));
    }
    Ok(g)
}

/// All l in 1..2*kappa*conductor coprime to kappa*conductor.
pub fn galois_elements(ctx: &LevelContext) -> Vec<i64> {
    let m = galois_modulus(ctx);
    (1..2 * m).filter(|l| l.gcd(&m) == 1).collect()
}

/// Smallest l = m (mod kappa) that is a valid Galois parameter.
pub fn lift_galois(ctx: &LevelContext, m: i64) -> Result<i64> {
    let modulus = galois_modulus(ctx);
    (0..modulus)
        .map(|t| m + t * ctx.kappa)
        .find(|l| l.gcd(&modulus) == 1)
        .ok_or(FusionError::NotCoprime { ell: m, modulus })
}

/// pi{l}: lambda -> J(lambda^(l)) when 0^(l) is a simple current.
pub fn galois_automorphism(ring: &Ring, ell: i64) -> Result<Option<FusionSymmetry>> {
    let g = galois_perm(&ring.ctx, &ring.s, ell)?;
    let j = g.perm.apply(0);
    if (ring.s.qdim(j) - 1.0).abs() > QDIM_TOL {
        return Ok(None);
    }
    let cur = ring
        .current_with_rep(j)
        .ok_or_else(|| FusionError::Internal(format!("0^({ell}) has D = 1 but is not a known current")))?;
    let perm = cur.perm.compose(&g.perm);
    let sym = FusionSymmetry { partner: Some(perm.inverse()), ..FusionSymmetry::new(perm, Provenance::Galois { ell }) };
    verified(&ring.table, sym).map(Some)
}

fn q_times(q: Rational64, n: i64) -> Result<i64> {
    let x = q * Rational64::from_integer(n);
    if !x.is_integer() {
        return Err(FusionError::InconsistentCharge { current: format!("{n}Q"), weight: format!("{q}") });
    }
    Ok(x.to_integer())
}

fn sc_perm(ring: &Ring, j: &SimpleCurrent, a: i64) -> Result<Perm> {
    let n = j.order as i64;
    let powers: Vec<Perm> = (0..n).map(|e| j.perm.pow(e)).collect();
    let images = (0..ring.len())
        .map(|l| {
            let e = (q_times(j.charge[l], n)? * a).rem_euclid(n);
            Ok(powers[e as usize].apply(l))
        })
        .collect::<Result<Vec<_>>>()?;
    Perm::from_images(images)
}

/// pi[a]: lambda -> J^{n a Q_j(lambda)} lambda, valid when gcd(n a Q_j(j) + 1, n) = 1.
/// The partner is pi[b] with b = -a (n a Q_j(j) + 1)^{-1} mod n.
pub fn sc_automorphism(ring: &Ring, j: &SimpleCurrent, a: i64) -> Result<FusionSymmetry> {
    let n = j.order as i64;
    let u = q_times(j.charge[j.rep], n)? * a + 1;
    if u.gcd(&n) != 1 {
        return Err(FusionError::NotAPermutation(format!("pi[{a}]: gcd({u}, {n}) != 1")));
    }
    let inv = (1..=n).find(|x| (x * u).rem_euclid(n) == 1 % n).unwrap_or(1);
    let b = (-a * inv).rem_euclid(n);
    let perm = sc_perm(ring, j, a)?;
    let partner = sc_perm(ring, j, b)?;
    let prov = if a.rem_euclid(n) == 0 {
        Provenance::Identity
    } else {
        Provenance::SimpleCurrent { current: ring.ctx.weight(j.rep).pretty(), a }
    };
    verified(&ring.table, FusionSymmetry { partner: Some(partner), ..FusionSymmetry::new(perm, prov) })
}

fn d_matrix_perm(ring: &Ring, m: [i64; 4]) -> Result<Perm> {
    let (jv, js) = (ring.generator(0)?, ring.generator(1)?);
    let images = (0..ring.len())
        .map(|l| {
            let (qv, qs) = (q_times(jv.charge[l], 2)?, q_times(js.charge[l], 2)?);
            let ev = (m[0] * qv + m[1] * qs).rem_euclid(2);
            let es = (m[2] * qv + m[3] * qs).rem_euclid(2);
            Ok(jv.perm.pow(ev).apply(js.perm.pow(es).apply(l)))
        })
        .collect::<Result<Vec<_>>>()?;
    Perm::from_images(images).map_err(|_| FusionError::NotAPermutation(format!("pi[{m:?}] is not invertible")))
}

/// D_r, r even: pi[a b; c d] lambda = J_v^{2aQ_v + 2bQ_s} J_s^{2cQ_v + 2dQ_s} lambda.
/// Entries are read mod 2. The partner is the transpose for k even and the
/// listed companion matrix for k odd.
pub fn sc_automorphism_matrix(ring: &Ring, m: [i64; 4]) -> Result<FusionSymmetry> {
    let id = ring.ctx.id();
    if id.family() != Family::D || id.rank() % 2 != 0 {
        return Err(FusionError::WrongFamily(format!("matrix simple-current automorphisms need D_even, got {id}")));
    }
    let m = m.map(|x| x.rem_euclid(2));
    let perm = d_matrix_perm(ring, m)?;
    let partner = d_matrix_perm(ring, d_matrix_partner(id.rank() as i64, ring.ctx.level, m))?;
    let prov = if m == [0; 4] { Provenance::Identity } else { Provenance::SimpleCurrentMatrix { m } };
    verified(&ring.table, FusionSymmetry { partner: Some(partner), ..FusionSymmetry::new(perm, prov) })
}

/// Partner matrix for the D_even construction.
pub fn d_matrix_partner(r: i64, k: i64, m: [i64; 4]) -> [i64; 4] {
    let [a, b, c, d] = m;
    let h = r / 2;
    let out = if k % 2 == 0 {
        [a, c, b, d]
    } else if b == 0 && c == 0 && (a == h.rem_euclid(2) || d == 0) {
        [a * (d + 1), d * h, d * h, d]
    } else {
        [h + 1 + b * c * h, b + h, h + 1 + b * c + b, 1]
    };
    out.map(|x| x.rem_euclid(2))
}

/// S-partner: the permutation pi' with S_{pi l, pi' m} = S_{l m}.
pub fn s_partner(s: &SMatrix, perm: &Perm) -> Result<Perm> {
    let n = s.len();
    let tol = s.tol.max(1e-9) * 100.0;
    let mut images = Vec::with_capacity(n);
    for m in 0..n {
        let hit = (0..n).find(|&c| (0..n).all(|l| (s.get(perm.apply(l), c) - s.get(l, m)).norm() < tol));
        images.push(hit.ok_or(FusionError::NoPartner(m))?);
    }
    Perm::from_images(images)
}

/// Rank-level duality for C_{r,k} (A_1 read as C_1): transpose the Young
/// diagram with rows lambda(l) = sum_{i >= l} lambda_i. Returns the dual
/// context and the image index of each weight.
pub fn rank_level_tau(ctx: &LevelContext) -> Result<(LevelContext, Vec<usize>)> {
    let id = ctx.id();
    let ok = id.family() == Family::C || (id.family() == Family::A && id.rank() == 1);
    if !ok {
        return Err(FusionError::WrongFamily(format!("rank-level duality is for C_r, got {id}")));
    }
    let (r, k) = (id.rank(), ctx.level as usize);
    let dual_id = if k == 1 { AlgebraId::new(Family::A, 1)? } else { AlgebraId::new(Family::C, k)? };
    let dual = LevelContext::new(dual_id, r as i64)?;
    let images = (0..ctx.len())
        .map(|i| {
            let lab = ctx.weight(i).labels();
            let rows: Vec<i64> = (0..r).map(|l| lab[l..].iter().sum()).collect();
            let cols: Vec<i64> = (1..=k as i64).map(|j| rows.iter().filter(|&&x| x >= j).count() as i64).collect();
            let labels: Vec<i64> = (0..k).map(|i| cols[i] - cols.get(i + 1).copied().unwrap_or(0)).collect();
            dual.index_of(&labels).ok_or_else(|| FusionError::Internal("transpose left P+".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((dual, images))
}

/// max |S~_{tau l, tau m} - S_{l m}|.
pub fn rank_level_residual(s: &SMatrix, dual: &SMatrix, tau: &[usize]) -> f64 {
    let n = s.len();
    let mut worst = 0.0f64;
    for l in 0..n {
        for m in 0..n {
            worst = worst.max((dual.get(tau[l], tau[m]) - s.get(l, m)).norm());
        }
    }
    worst
}

struct CatalogEntry {
    id: &'static str,
    level: i64,
    name: &'static str,
    /// Each cycle lists weights in order: w0 -> w1 -> ... -> w0.
    cycles: &'static [&'static [&'static str]],
    /// Also apply every cycle to J^i of its weights.
    with_currents: bool,
}

const CATALOG: &[CatalogEntry] = &[
    CatalogEntry { id: "E7", level: 3, name: "pi_3", cycles: &[&["L1", "2L6", "L2"]], with_currents: true },
    CatalogEntry { id: "E8", level: 4, name: "pi_4", cycles: &[&["L1", "L6"]], with_currents: false },
    CatalogEntry {
        id: "E8",
        level: 5,
        name: "pi_5",
        cycles: &[&["L7", "2L1"], &["L8", "L1+L2"], &["L6", "L2+L7"]],
        with_currents: false,
    },
    CatalogEntry { id: "F4", level: 3, name: "pi_3", cycles: &[&["L2", "L4"], &["L1", "3L4"]], with_currents: false },
    CatalogEntry {
        id: "F4",
        level: 4,
        name: "pi_4",
        cycles: &[
            &["L4", "L1", "2L1", "4L4"],
            &["L2", "2L3", "3L4", "L3"],
            &["L1+L3", "L3+2L4", "L1+L4", "L1+2L4"],
        ],
        with_currents: false,
    },
    CatalogEntry { id: "G2", level: 3, name: "pi_3", cycles: &[&["L1", "3L2", "L2"]], with_currents: false },
    CatalogEntry { id: "G2", level: 4, name: "pi_4", cycles: &[&["L1", "4L2"], &["2L1", "L2"]], with_currents: false },
];

/// The exceptional fusion-symmetries, transcribed weight by weight and
/// re-verified against the table.
pub fn exceptional_catalog(ring: &Ring) -> Result<Vec<FusionSymmetry>> {
    let id = ring.ctx.id().to_string();
    let mut out = Vec::new();
    for e in CATALOG.iter().filter(|e| e.id == id && e.level == ring.ctx.level) {
        let n = ring.len();
        let mut images: Vec<usize> = (0..n).collect();
        let shifts: Vec<Perm> = if e.with_currents {
            let j = ring.generator(0)?;
            (0..j.order as i64).map(|i| j.perm.pow(i)).collect()
        } else {
            vec![Perm::identity(n)]
        };
        for shift in &shifts {
            for cyc in e.cycles {
                let idx = cyc.iter().map(|w| ring.weight_index(w)).collect::<Result<Vec<_>>>()?;
                for (t, &x) in idx.iter().enumerate() {
                    images[shift.apply(x)] = shift.apply(idx[(t + 1) % idx.len()]);
                }
            }
        }
        let perm = Perm::from_images(images)
            .map_err(|_| FusionError::Verification(format!("catalog entry {} {} is not a bijection", e.id, e.name)))?;
        let sym = FusionSymmetry::new(perm, Provenance::Exceptional { name: e.name.to_string() });
        let sym = verified(&ring.table, sym)
            .map_err(|_| FusionError::Verification(format!("catalog entry {}k{} {} fails", e.id, e.level, e.name)))?;
        out.push(sym);
    }
    Ok(out)
}

/// Every fusion-symmetry, by exhaustive search.
pub fn enumerate_automorphisms(ring: &Ring, bound: usize) -> Result<Vec<Perm>> {
    let q = ring.qdims();
    let all = find_bijections(&ring.table, q, &ring.table, q, &[], Mode::All, bound)?;
    let set: std::collections::BTreeSet<&Perm> = all.iter().collect();
    for a in &all {
        if !set.contains(&a.inverse()) || all.iter().any(|b| !set.contains(&a.compose(b))) {
            return Err(FusionError::Verification("enumerated symmetries are not closed".into()));
        }
    }
    Ok(all)
}

/// The group listed by the classification theorem for this algebra and level.
#[derive(Debug, Clone)]
pub struct ExpectedGroup {
    /// Every listed element, deduplicated by permutation.
    pub elements: Vec<FusionSymmetry>,
}

impl ExpectedGroup {
    pub fn perms(&self) -> Vec<Perm> {
        let mut v: Vec<Perm> = self.elements.iter().map(|e| e.perm.clone()).collect();
        v.sort();
        v
    }

    /// Does the listed set form a group on its own?
    pub fn is_closed(&self) -> bool {
        let perms = self.perms();
        let n = perms.first().map_or(0, |p| p.len());
        generate_group(&perms, n).len() == perms.len()
    }
}

fn products(left: &[FusionSymmetry], right: &[FusionSymmetry]) -> Vec<FusionSymmetry> {
    left.iter().flat_map(|a| right.iter().map(move |b| a.then(b))).collect()
}

fn identity_sym(n: usize) -> FusionSymmetry {
    FusionSymmetry { partner: Some(Perm::identity(n)), ..FusionSymmetry::new(Perm::identity(n), Provenance::Identity) }
}

fn conjugation_syms(ring: &Ring) -> Vec<FusionSymmetry> {
    conjugations(&ring.ctx)
        .into_iter()
        .map(|p| {
            let prov = if p.is_identity() { Provenance::Identity } else { Provenance::Conjugation };
            FusionSymmetry { partner: Some(p.clone()), ..FusionSymmetry::new(p, prov) }
        })
        .collect()
}

/// pi{m} for each m in 1..max coprime to `modulus`, lifted to a valid Galois
/// parameter.
fn galois_family(ring: &Ring, max: i64, modulus: i64) -> Result<Vec<FusionSymmetry>> {
    let mut out = Vec::new();
    for m in (1..max).filter(|m| m.gcd(&modulus) == 1) {
        let ell = lift_galois(&ring.ctx, m)?;
        let sym = galois_automorphism(ring, ell)?
            .ok_or_else(|| FusionError::Verification(format!("0^({ell}) is not a simple current")))?;
        out.push(sym);
    }
    Ok(out)
}

fn rank_level_sym(ring: &Ring) -> Result<FusionSymmetry> {
    let (_, tau) = rank_level_tau(&ring.ctx)?;
    let perm = Perm::from_images(tau)?;
    verified(&ring.table, FusionSymmetry { partner: Some(perm.clone()), ..FusionSymmetry::new(perm, Provenance::RankLevel) })
}

fn catalog_powers(ring: &Ring) -> Result<Vec<FusionSymmetry>> {
    let mut out = vec![identity_sym(ring.len())];
    for e in exceptional_catalog(ring)? {
        let mut p = e.clone();
        while !p.perm.is_identity() {
            out.push(p.clone());
            p = p.then(&e);
        }
    }
    Ok(out)
}

/// The sets listed by the per-algebra classification theorems.
pub fn expected_automorphisms(ring: &Ring) -> Result<ExpectedGroup> {
    let id = ring.ctx.id();
    let (r, k) = (id.rank() as i64, ring.ctx.level);
    let n = ring.len();
    let id_only = vec![identity_sym(n)];
    let sc = |a: i64| -> Result<FusionSymmetry> { sc_automorphism(ring, ring.generator(0)?, a) };
    let mut elements: Vec<FusionSymmetry> = match id.family() {
        Family::A => {
            let pis = (0..=r).filter(|a| (1 + k * a).gcd(&(r + 1)) == 1).map(sc).collect::<Result<Vec<_>>>()?;
            products(&conjugation_syms(ring), &pis)
        }
        Family::B => {
            let pis = vec![identity_sym(n), sc(1)?];
            if k == 2 {
                products(&pis, &galois_family(ring, r + 1, ring.ctx.kappa)?)
            } else {
                pis
            }
        }
        Family::C => {
            let pis = if k % 2 == 0 || r % 2 == 0 { vec![identity_sym(n), sc(1)?] } else { id_only };
            if k == r {
                products(&pis, &[identity_sym(n), rank_level_sym(ring)?])
            } else {
                pis
            }
        }
        Family::D => {
            let conj = conjugation_syms(ring);
            if k == 2 && r > 4 {
                let pv = if r % 2 == 1 {
                    sc_automorphism(ring, ring.generator(1)?, 2)?
                } else {
                    sc_automorphism_matrix(ring, [1, 0, 0, 0])?
                };
                let c1: Vec<FusionSymmetry> = conj.into_iter().collect();
                let v = vec![identity_sym(n), pv];
                products(&products(&c1, &v), &galois_family(ring, r, 2 * r)?)
            } else {
                let pis = if r % 2 == 1 {
                    let js = ring.generator(1)?;
                    let avals: Vec<i64> = if k % 2 == 1 { vec![0, 2] } else { vec![0, 1, 2, 3] };
                    avals.into_iter().map(|a| sc_automorphism(ring, js, a)).collect::<Result<Vec<_>>>()?
                } else {
                    d_even_matrices(r, k).into_iter().map(|m| sc_automorphism_matrix(ring, m)).collect::<Result<Vec<_>>>()?
                };
                products(&conj, &pis)
            }
        }
        Family::E if r == 6 => {
            let pis = (0..3).filter(|a| (a * k).rem_euclid(3) != 1).map(sc).collect::<Result<Vec<_>>>()?;
            products(&conjugation_syms(ring), &pis)
        }
        Family::E if r == 7 => {
            let mut v = id_only;
            if k % 2 == 0 {
                v.push(sc(1)?);
            }
            if k == 3 {
                v = catalog_powers(ring)?;
            }
            v
        }
        _ => catalog_powers(ring)?,
    };
    for e in &elements {
        if !is_fusion_symmetry(&ring.table, &e.perm) {
            return Err(FusionError::Verification(format!("listed element {} fails", e.provenance)));
        }
    }
    elements.sort_by(|a, b| a.perm.cmp(&b.perm));
    elements.dedup_by(|a, b| a.perm == b.perm);
    Ok(ExpectedGroup { elements })
}

/// Parameter matrices for D_even simple-current automorphisms: all sixteen
/// for k even; for k odd the two listed families.
pub fn d_even_matrices(r: i64, k: i64) -> Vec<[i64; 4]> {
    let h = (r / 2).rem_euclid(2);
    let mut out = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    let m = [a, b, c, d];
                    let keep = if k % 2 == 0 {
                        true
                    } else {
                        let diag = b == 0 && c == 0 && (a == h || d == 0);
                        let second = a == (h + 1) % 2 && d == 1 && (b == 1 || c == 1);
                        diag || second
                    };
                    if keep {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}
