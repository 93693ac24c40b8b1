//! One fusion ring with everything computed about it.

use std::path::Path;

use crate::characters::{smatrix_with_tol, SMatrix, S_TOL};
use crate::error::{FusionError, Result};
use crate::fusion::{load_or_build, FusionTable};
use crate::liealg::AlgebraId;
use crate::perm::Perm;
use crate::weights::{charge_conjugation, simple_current_generators, simple_currents, LevelContext, SimpleCurrent};

/// Parse "A3k4" or "family=A rank=3 level=4".
pub fn parse_context(s: &str) -> Result<(AlgebraId, i64)> {
    let s = s.trim();
    let bad = || FusionError::Parse(format!("bad context '{s}' (expected e.g. A3k4)"));
    if s.contains('=') {
        let (mut fam, mut rank, mut level) = (None, None, None);
        for tok in s.split_whitespace() {
            let (key, val) = tok.split_once('=').ok_or_else(bad)?;
            match key {
                "family" => fam = Some(val.to_string()),
                "rank" => rank = Some(val.to_string()),
                "level" => level = Some(val.parse::<i64>().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        let id: AlgebraId = format!("{}{}", fam.ok_or_else(bad)?, rank.ok_or_else(bad)?).parse()?;
        let k = level.ok_or_else(bad)?;
        if k < 1 {
            return Err(FusionError::InvalidLevel(k));
        }
        return Ok((id, k));
    }
    let (alg, level) = s.split_once(['k', 'K']).ok_or_else(bad)?;
    let id: AlgebraId = alg.parse()?;
    let k: i64 = level.parse().map_err(|_| bad())?;
    if k < 1 {
        return Err(FusionError::InvalidLevel(k));
    }
    Ok((id, k))
}

#[derive(Debug, Clone)]
pub struct Ring {
    pub ctx: LevelContext,
    pub s: SMatrix,
    pub table: FusionTable,
    pub currents: Vec<SimpleCurrent>,
    pub conj: Perm,
}

impl Ring {
    pub fn new(id: AlgebraId, k: i64, cache_dir: Option<&Path>) -> Result<Ring> {
        Self::with_tol(id, k, cache_dir, S_TOL)
    }

    pub fn with_tol(id: AlgebraId, k: i64, cache_dir: Option<&Path>, tol: f64) -> Result<Ring> {
        let ctx = LevelContext::new(id, k)?;
        let s = smatrix_with_tol(&ctx, tol)?;
        let table = load_or_build(&ctx, cache_dir)?;
        let currents = simple_currents(&ctx, &s)?;
        let conj = charge_conjugation(&ctx);
        Ok(Ring { ctx, s, table, currents, conj })
    }

    pub fn parse(spec: &str, cache_dir: Option<&Path>) -> Result<Ring> {
        let (id, k) = parse_context(spec)?;
        Ring::new(id, k, cache_dir)
    }

    pub fn name(&self) -> String {
        self.ctx.name()
    }

    pub fn len(&self) -> usize {
        self.ctx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ctx.is_empty()
    }

    pub fn qdims(&self) -> &[f64] {
        self.s.qdims()
    }

    pub fn weight_index(&self, s: &str) -> Result<usize> {
        self.ctx.parse_weight(s)
    }

    pub fn current_with_rep(&self, rep: usize) -> Option<&SimpleCurrent> {
        self.currents.iter().find(|c| c.rep == rep)
    }

    /// The i-th closed-form current generator (for D: 0 is J_v, 1 is J_s).
    pub fn generator(&self, i: usize) -> Result<&SimpleCurrent> {
        let gens = simple_current_generators(self.ctx.id());
        let lp = gens
            .get(i)
            .ok_or_else(|| FusionError::WrongFamily(format!("{} has no current generator {i}", self.ctx.id())))?;
        let rep = self.ctx.label_perm_action(lp)?.apply(0);
        self.current_with_rep(rep)
            .ok_or_else(|| FusionError::Internal(format!("current [{}] not found from S", self.ctx.weight(rep))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_tokens() {
        let (id, k) = parse_context("A3k4").unwrap();
        assert_eq!((id.to_string(), k), ("A3".to_string(), 4));
        let (id, k) = parse_context("family=E rank=8 level=5").unwrap();
        assert_eq!((id.to_string(), k), ("E8".to_string(), 5));
        assert!(parse_context("A3").is_err());
        assert!(parse_context("B2k1").is_err());
        assert!(parse_context("A3k0").is_err());
    }

    #[test]
    fn generators_match_closed_forms() {
        let r = Ring::parse("D4k2", None).unwrap();
        assert_eq!(r.ctx.weight(r.generator(0).unwrap().rep).pretty(), "2L1");
        assert_eq!(r.ctx.weight(r.generator(1).unwrap().rep).pretty(), "2L4");
        let r = Ring::parse("E7k2", None).unwrap();
        assert_eq!(r.ctx.weight(r.generator(0).unwrap().rep).pretty(), "2L6");
        assert_eq!(r.currents.len(), 2);
    }
}
