use std::collections::BTreeSet;
use std::path::PathBuf;

use affine_fusion::fusion::fusion_product;
use affine_fusion::isomorphism::{find_isomorphism, fingerprint, verify_bijection};
use affine_fusion::perm::Perm;
use affine_fusion::ring::{parse_context, Ring};
use affine_fusion::symmetries::{enumerate_automorphisms, expected_automorphisms};
use affine_fusion::verify::{run_suite, SuiteConfig};
use affine_fusion::Result;
use serde_json::{json, Value};

use crate::report::{sig15, CheckLine, Context, Report};

#[derive(Debug, Clone)]
pub struct Options {
    pub cache_dir: Option<PathBuf>,
    pub tol: f64,
    pub search_bound: usize,
}

impl Options {
    fn ring(&self, spec: &str) -> Result<Ring> {
        let (id, k) = parse_context(spec)?;
        Ring::with_tol(id, k, self.cache_dir.as_deref(), self.tol)
    }
}

fn context(r: &Ring) -> Context {
    let id = r.ctx.id();
    Context { family: id.family().to_string(), rank: id.rank(), level: r.ctx.level, kappa: r.ctx.kappa, size: r.len() }
}

fn labels(r: &Ring, i: usize) -> String {
    r.ctx.weight(i).to_string()
}

/// A bijection as label pairs.
fn perm_pairs(from: &Ring, to: &Ring, p: &Perm) -> Vec<[String; 2]> {
    (0..p.len()).map(|i| [labels(from, i), labels(to, p.apply(i))]).collect()
}

fn cycles(r: &Ring, p: &Perm) -> Vec<Vec<String>> {
    p.cycles().iter().map(|c| c.iter().map(|&i| labels(r, i)).collect()).collect()
}

pub fn pplus(rep: &mut Report, o: &Options, spec: &str) -> Result<()> {
    let r = o.ring(spec)?;
    rep.contexts.push(context(&r));
    let mut rows = Vec::new();
    rep.csv.push(vec!["index".into(), "labels".into(), "name".into(), "qdim".into(), "tag".into(), "orbit".into(), "conjugate".into()]);
    for i in 0..r.len() {
        let current = r.current_with_rep(i).is_some();
        let fixed = r.currents.iter().any(|j| j.rep != 0 && j.perm.apply(i) == i);
        let tag = if current {
            "current"
        } else if fixed {
            "fixed-point"
        } else {
            "free"
        };
        let orbit = r.currents.iter().map(|j| j.perm.apply(i)).min().unwrap_or(i);
        let d = sig15(r.s.qdim(i));
        rows.push(json!({
            "index": i,
            "labels": labels(&r, i),
            "name": r.ctx.weight(i).pretty(),
            "qdim": d,
            "tag": tag,
            "current_orbit": labels(&r, orbit),
            "conjugate": labels(&r, r.conj.apply(i)),
        }));
        rep.csv.push(vec![
            i.to_string(),
            labels(&r, i),
            r.ctx.weight(i).pretty(),
            format!("{:.14e}", r.s.qdim(i)),
            tag.into(),
            labels(&r, orbit),
            labels(&r, r.conj.apply(i)),
        ]);
    }
    rep.payload = json!({ "weights": rows });
    Ok(())
}

pub fn smatrix(rep: &mut Report, o: &Options, spec: &str) -> Result<()> {
    let r = o.ring(spec)?;
    rep.contexts.push(context(&r));
    let n = r.len();
    let re: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| sig15(r.s.get(i, j).re)).collect()).collect();
    let im: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| sig15(r.s.get(i, j).im)).collect()).collect();
    let res = r.s.residuals(&r.conj);
    rep.checks.push(CheckLine::residual("symmetry", res.symmetry, 1e-9));
    rep.checks.push(CheckLine::residual("unitarity", res.unitarity, 1e-9));
    rep.checks.push(CheckLine::residual("square_is_c", res.square_is_c, 1e-9));
    rep.checks.push(CheckLine::flag("row0_positive", res.min_row0 > 0.0, format!("min {:.3e}", res.min_row0)));
    let weights: Vec<String> = (0..n).map(|i| labels(&r, i)).collect();
    rep.csv.push(vec!["row".into(), "col".into(), "re".into(), "im".into()]);
    for i in 0..n {
        for j in 0..n {
            let z = r.s.get(i, j);
            rep.csv.push(vec![weights[i].clone(), weights[j].clone(), format!("{:.14e}", z.re), format!("{:.14e}", z.im)]);
        }
    }
    rep.payload = json!({ "weights": weights, "re": re, "im": im });
    Ok(())
}

pub fn fusion(rep: &mut Report, o: &Options, spec: &str, lambda: &str, mu: &str) -> Result<()> {
    let r = o.ring(spec)?;
    rep.contexts.push(context(&r));
    let (a, b) = (r.weight_index(lambda)?, r.weight_index(mu)?);
    let kw = fusion_product(&r.ctx, a, b)?;
    let from_table: Vec<(usize, u64)> = r.table.product(a, b).iter().map(|&(c, m)| (c as usize, m as u64)).collect();
    let kw_list: Vec<(usize, u64)> = kw.into_iter().collect();
    rep.checks.push(CheckLine::flag("table_matches_direct", kw_list == from_table, "cached table against a fresh Kac-Walton product"));
    rep.csv.push(vec!["weight".into(), "name".into(), "multiplicity".into()]);
    let terms: Vec<Value> = from_table
        .iter()
        .map(|&(c, m)| {
            rep.csv.push(vec![labels(&r, c), r.ctx.weight(c).pretty(), m.to_string()]);
            json!({ "weight": labels(&r, c), "name": r.ctx.weight(c).pretty(), "multiplicity": m })
        })
        .collect();
    rep.payload = json!({ "lambda": labels(&r, a), "mu": labels(&r, b), "product": terms });
    Ok(())
}

pub fn qdim(rep: &mut Report, o: &Options, spec: &str, weight: Option<&str>) -> Result<()> {
    let r = o.ring(spec)?;
    rep.contexts.push(context(&r));
    let idx: Vec<usize> = match weight {
        Some(w) => vec![r.weight_index(w)?],
        None => (0..r.len()).collect(),
    };
    rep.csv.push(vec!["weight".into(), "qdim".into()]);
    let rows: Vec<Value> = idx
        .iter()
        .map(|&i| {
            rep.csv.push(vec![labels(&r, i), format!("{:.14e}", r.s.qdim(i))]);
            json!({ "weight": labels(&r, i), "qdim": sig15(r.s.qdim(i)) })
        })
        .collect();
    rep.payload = json!({ "qdims": rows });
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum AutosMode {
    Constructed,
    Bruteforce,
    Compare,
}

pub fn autos(rep: &mut Report, o: &Options, spec: &str, mode: AutosMode) -> Result<()> {
    let r = o.ring(spec)?;
    rep.contexts.push(context(&r));
    rep.csv.push(vec!["source".into(), "order".into(), "cycles".into(), "provenance".into()]);
    let mut payload = serde_json::Map::new();
    let show = |p: &Perm| cycles(&r, p).iter().map(|c| format!("({})", c.join(", "))).collect::<Vec<_>>().join("");
    let mut constructed = None;
    if mode != AutosMode::Bruteforce {
        let exp = expected_automorphisms(&r)?;
        let rows: Vec<Value> = exp
            .elements
            .iter()
            .map(|e| json!({ "order": e.perm.order(), "cycles": cycles(&r, &e.perm), "provenance": e.provenance.to_string() }))
            .collect();
        for e in &exp.elements {
            rep.csv.push(vec!["constructed".into(), e.perm.order().to_string(), show(&e.perm), e.provenance.to_string()]);
        }
        rep.checks.push(CheckLine::flag("constructed_closed", exp.is_closed(), "listed set is a group"));
        payload.insert("constructed".into(), json!({ "order": rows.len(), "elements": rows }));
        constructed = Some(exp.perms());
    }
    if mode != AutosMode::Constructed {
        let all = enumerate_automorphisms(&r, o.search_bound)?;
        let rows: Vec<Value> = all.iter().map(|p| json!({ "order": p.order(), "cycles": cycles(&r, p) })).collect();
        for p in &all {
            rep.csv.push(vec!["bruteforce".into(), p.order().to_string(), show(p), String::new()]);
        }
        payload.insert("bruteforce".into(), json!({ "order": rows.len(), "elements": rows }));
        if let Some(c) = &constructed {
            let a: BTreeSet<&Perm> = c.iter().collect();
            let b: BTreeSet<&Perm> = all.iter().collect();
            let only_c: Vec<String> = a.difference(&b).map(|p| show(p)).collect();
            let only_b: Vec<String> = b.difference(&a).map(|p| show(p)).collect();
            let equal = only_c.is_empty() && only_b.is_empty();
            rep.checks.push(CheckLine::flag("groups_equal", equal, format!("{} constructed, {} enumerated", a.len(), b.len())));
            payload.insert("equal".into(), json!(equal));
            payload.insert("only_constructed".into(), json!(only_c));
            payload.insert("only_bruteforce".into(), json!(only_b));
        }
    }
    rep.payload = Value::Object(payload);
    Ok(())
}

pub fn iso(rep: &mut Report, o: &Options, a: &str, b: &str) -> Result<()> {
    let (ra, rb) = (o.ring(a)?, o.ring(b)?);
    rep.contexts.push(context(&ra));
    rep.contexts.push(context(&rb));
    let (fa, fb) = (fingerprint(&ra)?, fingerprint(&rb)?);
    let same = fa.matches(&fb);
    let found = if same { find_isomorphism(&ra, &rb, o.search_bound)? } else { None };
    rep.csv.push(vec![ra.name(), rb.name()]);
    let pairs = found.as_ref().map(|p| {
        let v = perm_pairs(&ra, &rb, p);
        for [x, y] in &v {
            rep.csv.push(vec![x.clone(), y.clone()]);
        }
        v
    });
    if let Some(p) = &found {
        rep.checks.push(CheckLine::flag("bijection_verified", verify_bijection(&ra, &rb, p), "N = M on all triples"));
    }
    rep.payload = json!({
        "fingerprints_match": same,
        "isomorphic": found.is_some(),
        "fingerprints": [fa, fb],
        "bijection": pairs,
    });
    Ok(())
}

pub fn verify(rep: &mut Report, o: &Options, quiet: bool) -> Result<()> {
    let cfg = SuiteConfig { cache_dir: o.cache_dir.clone(), tol: o.tol, search_bound: o.search_bound, ..SuiteConfig::default() };
    let reports = run_suite(cfg, |r| {
        if !quiet {
            eprintln!("{}", r.summary_line());
        }
    });
    rep.csv.push(vec!["criterion".into(), "title".into(), "passed".into(), "checks".into(), "failed".into(), "seconds".into()]);
    for r in &reports {
        let failed: Vec<&str> = r.failures().map(|c| c.key.as_str()).collect();
        rep.checks.push(CheckLine::flag(&format!("criterion {}", r.id), r.passed, failed.join(", ")));
        rep.csv.push(vec![
            r.id.to_string(),
            r.title.to_string(),
            r.passed.to_string(),
            r.checks.len().to_string(),
            failed.join(" "),
            format!("{:.2}", r.seconds),
        ]);
    }
    rep.payload = json!({ "criteria": reports });
    Ok(())
}
