//! Characters χ_{β⊗z} of T and the W-analyticity test for them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::padic::PadicNumber;

/// The character g ↦ ∏_k z_k^{β_k(g)} attached to Σ_k β_k ⊗ z_k.
///
/// A single pure tensor is the common case; sums are needed when the
/// differential Σ β_k log z_k must leave the rational lattice Hom(T, Zp),
/// as for the Σ-avatar at an inert prime.
#[derive(Clone, Debug)]
pub struct CharacterPoint {
    terms: Vec<(Vec<i64>, PadicNumber)>,
}

impl CharacterPoint {
    pub fn new(beta: Vec<i64>, z: PadicNumber) -> Result<Self> {
        Self::from_terms(alloc::vec![(beta, z)])
    }

    pub fn from_terms(terms: Vec<(Vec<i64>, PadicNumber)>) -> Result<Self> {
        let Some(r) = terms.first().map(|t| t.0.len()) else {
            return Err(Error::InvalidInput("empty character point".into()));
        };
        for (beta, z) in &terms {
            if beta.len() != r {
                return Err(Error::IncompatibleStructures("β vectors of different rank".into()));
            }
            let one = PadicNumber::one(z.field().clone(), z.abs_precision())?;
            let d = z.sub(&one)?;
            if !d.is_zero_at_precision() && d.valuation() < 1 {
                return Err(Error::ConvergenceDomainViolated("z must satisfy |z - 1| < 1".into()));
            }
        }
        Ok(CharacterPoint { terms })
    }

    pub fn rank(&self) -> usize {
        self.terms[0].0.len()
    }

    pub fn terms(&self) -> &[(Vec<i64>, PadicNumber)] {
        &self.terms
    }

    /// χ(g) for an integer point g.
    pub fn eval(&self, g: &[i64]) -> Result<PadicNumber> {
        let mut acc: Option<PadicNumber> = None;
        for (beta, z) in &self.terms {
            let e: i64 = beta.iter().zip(g).map(|(b, x)| b * x).sum();
            let v = z.powi(e)?;
            acc = Some(match acc {
                Some(a) => a.mul(&v)?,
                None => v,
            });
        }
        Ok(acc.expect("nonempty"))
    }

    /// dχ at 0: the vector (Σ_k β_{k,i} log z_k)_i.
    pub fn differential(&self) -> Result<Vec<PadicNumber>> {
        let logs: Vec<PadicNumber> = self.terms.iter().map(|(_, z)| z.plog(true)).collect::<Result<_>>()?;
        (0..self.rank())
            .map(|i| {
                let mut acc: Option<PadicNumber> = None;
                for ((beta, _), l) in self.terms.iter().zip(&logs) {
                    let t = l.mul_int(beta[i])?;
                    acc = Some(match acc {
                        Some(a) => a.add(&t)?,
                        None => t,
                    });
                }
                Ok(acc.expect("nonempty"))
            })
            .collect()
    }

    fn is_trivial(&self) -> Result<bool> {
        for (beta, z) in &self.terms {
            let one = PadicNumber::one(z.field().clone(), z.abs_precision())?;
            if beta.iter().any(|&b| b != 0) && !z.sub(&one)?.is_zero_at_precision() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A subspace W ⊆ Hom(T, F) given by independent rows.
#[derive(Clone, Debug)]
pub struct AnalyticityCondition {
    pub prime: u64,
    pub rank: usize,
    rows: Vec<Vec<PadicNumber>>,
    pub sigma_tag: Option<String>,
}

impl AnalyticityCondition {
    pub fn new(rows: Vec<Vec<PadicNumber>>, sigma_tag: Option<String>) -> Result<Self> {
        let rank = rows.first().map(|r| r.len()).ok_or_else(|| Error::InvalidInput("W needs a row".into()))?;
        let prime = rows[0][0].prime();
        let cond = AnalyticityCondition { prime, rank, rows, sigma_tag };
        let echelon = cond.echelon()?;
        if echelon.len() != cond.rows.len() {
            return Err(Error::InvalidInput("rows of W are not independent".into()));
        }
        Ok(cond)
    }

    pub fn rows(&self) -> &[Vec<PadicNumber>] {
        &self.rows
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Row echelon form with pivots chosen of minimal valuation.
    fn echelon(&self) -> Result<Vec<(usize, Vec<PadicNumber>)>> {
        let mut rows = self.rows.clone();
        let mut out = Vec::new();
        while !rows.is_empty() {
            let mut best: Option<(usize, usize, i64)> = None;
            for (ri, r) in rows.iter().enumerate() {
                for (ci, x) in r.iter().enumerate() {
                    if !x.is_zero_at_precision() && best.map_or(true, |b| x.valuation() < b.2) {
                        best = Some((ri, ci, x.valuation()));
                    }
                }
            }
            let Some((ri, ci, _)) = best else { break };
            let piv = rows.swap_remove(ri);
            let inv = piv[ci].inverse()?;
            let piv: Vec<PadicNumber> = piv.iter().map(|x| x.mul(&inv)).collect::<Result<_>>()?;
            for r in rows.iter_mut() {
                let f = r[ci].clone();
                for (x, y) in r.iter_mut().zip(&piv) {
                    *x = x.sub(&y.mul(&f)?)?;
                }
            }
            out.push((ci, piv));
        }
        Ok(out)
    }

    /// Component of `v` left after removing its projection along W's echelon rows.
    pub fn residual(&self, v: &[PadicNumber]) -> Result<Vec<PadicNumber>> {
        if v.len() != self.rank {
            return Err(Error::IncompatibleStructures(format!("vector of length {} for rank {}", v.len(), self.rank)));
        }
        let mut r = v.to_vec();
        for (ci, piv) in self.echelon()? {
            let f = r[ci].clone();
            for (x, y) in r.iter_mut().zip(&piv) {
                *x = x.sub(&y.mul(&f)?)?;
            }
        }
        Ok(r)
    }
}

/// Digits of slack below the working precision inside which a nonzero residual
/// is treated as undecidable.
pub const DECISION_GUARD: i64 = 2;

/// Whether dχ|₀ = Σ β log z lies in W at the working precision.
pub fn is_w_analytic(chi: &CharacterPoint, w: &AnalyticityCondition) -> Result<bool> {
    if chi.rank() != w.rank {
        return Err(Error::IncompatibleStructures("rank of χ and W differ".into()));
    }
    if chi.is_trivial()? {
        return Ok(true);
    }
    let v = chi.differential()?;
    if v.iter().all(|x| x.is_zero_at_precision()) {
        return Err(Error::PrecisionInsufficient("log z vanishes at working precision".into()));
    }
    let vmin = v.iter().filter(|x| !x.is_zero_at_precision()).map(|x| x.valuation()).min().unwrap_or(0);
    let res = w.residual(&v)?;
    let mut undecided = false;
    for x in &res {
        if x.is_zero_at_precision() {
            continue;
        }
        if x.valuation() < x.abs_precision() - DECISION_GUARD || x.valuation() <= vmin {
            return Ok(false);
        }
        undecided = true;
    }
    if undecided {
        return Err(Error::PrecisionInsufficient(format!(
            "residual of dχ within {DECISION_GUARD} digits of the working precision"
        )));
    }
    Ok(true)
}
