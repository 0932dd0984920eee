//! Distributions on Zp^r at finite precision and their Amice transforms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::{PadicField, PadicNumber};

/// Truncated power series in r variables X_1..X_r, keyed by exponent vectors.
#[derive(Clone, Debug)]
pub struct PowerSeries {
    pub rank: usize,
    pub degree: usize,
    pub coeffs: BTreeMap<Vec<u32>, PadicNumber>,
}

impl PowerSeries {
    pub fn coeff(&self, e: &[u32]) -> Option<&PadicNumber> {
        self.coeffs.get(e)
    }

    /// Product truncated at total degree `self.degree.min(other.degree)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let degree = self.degree.min(other.degree);
        let mut coeffs: BTreeMap<Vec<u32>, PadicNumber> = BTreeMap::new();
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let e: Vec<u32> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                if e.iter().sum::<u32>() as usize > degree {
                    continue;
                }
                let t = x.mul(y)?;
                let v = match coeffs.remove(&e) {
                    Some(old) => old.add(&t)?,
                    None => t,
                };
                coeffs.insert(e, v);
            }
        }
        Ok(PowerSeries { rank: self.rank, degree, coeffs })
    }

    /// Coefficientwise equality at the available precision, treating absent terms as 0.
    pub fn equals(&self, other: &Self) -> bool {
        let keys: alloc::collections::BTreeSet<&Vec<u32>> =
            self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.into_iter().all(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
            (Some(a), Some(b)) => a.equals(b),
            (Some(a), None) | (None, Some(a)) => a.is_zero_at_precision(),
            (None, None) => true,
        })
    }

    /// Evaluate at X_i = x_i; all x_i need positive valuation.
    pub fn eval(&self, xs: &[PadicNumber]) -> Result<PadicNumber> {
        if xs.len() != self.rank {
            return Err(Error::IncompatibleStructures(format!("expected {} arguments", self.rank)));
        }
        if xs.iter().any(|x| !x.is_zero_at_precision() && x.valuation() < 1) {
            return Err(Error::ConvergenceDomainViolated("Amice variables need |X| < 1".into()));
        }
        let field = xs[0].field().clone();
        let prec = xs.iter().map(|x| x.abs_precision()).min().unwrap_or(0);
        let mut acc = PadicNumber::zero(field.clone(), prec);
        for (e, c) in &self.coeffs {
            let mut t = c.clone();
            for (x, &k) in xs.iter().zip(e) {
                t = t.mul(&x.pow(k as u64)?)?;
            }
            acc = acc.add(&t)?;
        }
        // terms beyond the truncation have valuation > degree
        Ok(acc.with_precision(prec.min(self.degree as i64 + 1)))
    }
}

/// A measure on Zp^r: either a finite Dirac combination or a stored Mahler series.
#[derive(Clone, Debug)]
pub enum DistributionTable {
    /// Masses at integer points (nonnegative representatives).
    Dirac { field: Arc<PadicField>, rank: usize, points: Vec<(Vec<u64>, PadicNumber)> },
    /// Mahler coefficients up to the stored total degree.
    Mahler(PowerSeries),
}

fn binomial(n: u64, k: u32) -> BigInt {
    let mut r = BigInt::from(1u32);
    for i in 0..k as u64 {
        if i >= n {
            return BigInt::zero();
        }
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

impl DistributionTable {
    pub fn dirac(field: Arc<PadicField>, a: &[u64], prec: i64) -> Result<Self> {
        Ok(DistributionTable::Dirac {
            field: field.clone(),
            rank: a.len(),
            points: vec![(a.to_vec(), PadicNumber::one(field, prec)?)],
        })
    }

    pub fn rank(&self) -> usize {
        match self {
            DistributionTable::Dirac { rank, .. } => *rank,
            DistributionTable::Mahler(s) => s.rank,
        }
    }

    /// Convolution; Dirac points add.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (
                DistributionTable::Dirac { field, rank, points: a },
                DistributionTable::Dirac { rank: r2, points: b, .. },
            ) => {
                if rank != r2 {
                    return Err(Error::LatticeMismatch("rank mismatch".into()));
                }
                let mut merged: BTreeMap<Vec<u64>, PadicNumber> = BTreeMap::new();
                for (x, u) in a {
                    for (y, v) in b {
                        let z: Vec<u64> = x.iter().zip(y).map(|(i, j)| i + j).collect();
                        let t = u.mul(v)?;
                        let w = match merged.remove(&z) {
                            Some(old) => old.add(&t)?,
                            None => t,
                        };
                        merged.insert(z, w);
                    }
                }
                Ok(DistributionTable::Dirac { field: field.clone(), rank: *rank, points: merged.into_iter().collect() })
            }
            _ => {
                let d = self.stored_degree().min(other.stored_degree());
                Ok(DistributionTable::Mahler(amice_transform(self, d)?.mul(&amice_transform(other, d)?)?))
            }
        }
    }

    fn stored_degree(&self) -> usize {
        match self {
            DistributionTable::Dirac { .. } => usize::MAX,
            DistributionTable::Mahler(s) => s.degree,
        }
    }

    /// Masses of the cosets of p^n Zp^r, keyed by residue vectors.
    pub fn coset_values(&self, n: u32) -> Result<BTreeMap<Vec<u64>, PadicNumber>> {
        let DistributionTable::Dirac { field, points, .. } = self else {
            return Err(Error::InvalidInput("coset values need a Dirac table".into()));
        };
        let m = field.prime().pow(n);
        let mut out: BTreeMap<Vec<u64>, PadicNumber> = BTreeMap::new();
        for (x, v) in points {
            let key: Vec<u64> = x.iter().map(|c| c % m).collect();
            let w = match out.remove(&key) {
                Some(old) => old.add(v)?,
                None => v.clone(),
            };
            out.insert(key, w);
        }
        Ok(out)
    }
}

/// Σ_a μ(a) ∏ (1+X_i)^{a_i}, truncated at total degree `degree`.
pub fn amice_transform(mu: &DistributionTable, degree: usize) -> Result<PowerSeries> {
    match mu {
        DistributionTable::Mahler(s) => {
            if degree > s.degree {
                return Err(Error::TruncationOverflow { requested: degree, stored: s.degree });
            }
            let coeffs = s
                .coeffs
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() as usize <= degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect();
            Ok(PowerSeries { rank: s.rank, degree, coeffs })
        }
        DistributionTable::Dirac { field, rank, points } => {
            let mut coeffs: BTreeMap<Vec<u32>, PadicNumber> = BTreeMap::new();
            let exps = monomials(*rank, degree);
            for (a, mass) in points {
                for e in &exps {
                    let mut b = BigInt::from(1u32);
                    for (ai, &ei) in a.iter().zip(e) {
                        b *= binomial(*ai, ei);
                    }
                    if b.is_zero() {
                        continue;
                    }
                    let prec = mass.abs_precision().max(1);
                    let bp = big_to_padic(field, &b, prec)?;
                    let t = mass.mul(&bp)?;
                    let v = match coeffs.remove(e) {
                        Some(old) => old.add(&t)?,
                        None => t,
                    };
                    coeffs.insert(e.clone(), v);
                }
            }
            Ok(PowerSeries { rank: *rank, degree, coeffs })
        }
    }
}

fn big_to_padic(field: &Arc<PadicField>, b: &BigInt, prec: i64) -> Result<PadicNumber> {
    let m = BigInt::from(field.prime()).pow(prec as u32);
    let r = ((b % &m) + &m) % &m;
    PadicNumber::from_int(field.clone(), r.to_i64().expect("residue fits"), prec)
}

/// Exponent vectors of total degree ≤ d in r variables.
pub fn monomials(r: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = vec![];
    let mut cur = vec![0u32; r];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d as u32, &mut cur, &mut out);
    out
}

/// ∫ χ dμ for a character point; Dirac tables pair exactly, Mahler series by
/// evaluation at X_i = χ(e_i) − 1.
pub fn amice_pair(mu: &DistributionTable, chi: &super::analytic::CharacterPoint) -> Result<PadicNumber> {
    match mu {
        DistributionTable::Dirac { points, .. } => {
            let mut acc: Option<PadicNumber> = None;
            for (a, mass) in points {
                let g: Vec<i64> = a.iter().map(|&x| x as i64).collect();
                let t = mass.mul(&chi.eval(&g)?)?;
                acc = Some(match acc {
                    Some(s) => s.add(&t)?,
                    None => t,
                });
            }
            acc.ok_or_else(|| Error::InvalidInput("empty distribution".into()))
        }
        DistributionTable::Mahler(s) => {
            let xs = (0..s.rank)
                .map(|i| {
                    let mut e = vec![0i64; s.rank];
                    e[i] = 1;
                    let v = chi.eval(&e)?;
                    let one = PadicNumber::one(v.field().clone(), v.abs_precision())?;
                    v.sub(&one)
                })
                .collect::<Result<Vec<_>>>()?;
            s.eval(&xs)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirac_two() {
        let f = PadicField::qp(7).unwrap();
        let mu = DistributionTable::dirac(f, &[2], 5).unwrap();
        let s = amice_transform(&mu, 4).unwrap();
        let want = [1, 2, 1, 0, 0];
        for (k, w) in want.iter().enumerate() {
            let c = s.coeff(&[k as u32]);
            match c {
                Some(c) => assert_eq!(c.residue().unwrap(), *w as u128),
                None => assert_eq!(*w, 0),
            }
        }
    }

    #[test]
    fn dirac_zero_is_one() {
        let f = PadicField::qp(5).unwrap();
        let mu = DistributionTable::dirac(f, &[0, 0], 5).unwrap();
        let s = amice_transform(&mu, 6).unwrap();
        assert_eq!(s.coeffs.len(), 1);
        assert!(s.coeff(&[0, 0]).unwrap().is_unit());
    }

    #[test]
    fn truncation_overflow() {
        let f = PadicField::qp(5).unwrap();
        let mu = DistributionTable::dirac(f, &[3], 5).unwrap();
        let s = amice_transform(&mu, 4).unwrap();
        let m = DistributionTable::Mahler(s);
        assert_eq!(amice_transform(&m, 8).unwrap_err(), Error::TruncationOverflow { requested: 8, stored: 4 });
    }
}
