//! Locally constant functions on T = Zp^r at finite level, their finite
//! Fourier transforms, convolution, and the pieces of Part I that survive at
//! finite precision (Amice transforms, W-analytic characters).
//!
//! Points of T/p^nT (equivalently p^{-n}Λ/Λ in a chosen basis) are
//! coordinate vectors in (Z/p^n)^r. A level-n character is an exponent vector
//! `c` acting by `s ↦ ζ_{p^n}^{c·s}`.

pub mod amice;
pub mod analytic;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cyclo::{lcm_u64, Cyclo};
use crate::error::{Error, Result};

fn ipow(p: u64, n: u32) -> u64 {
    p.pow(n)
}

/// Mixed-radix index of a coordinate vector with every digit mod `m`.
fn index_of(coords: &[u64], m: u64) -> usize {
    let mut idx = 0usize;
    for &c in coords.iter().rev() {
        idx = idx * m as usize + (c % m) as usize;
    }
    idx
}

fn coords_of(mut idx: usize, m: u64, rank: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(rank);
    for _ in 0..rank {
        out.push((idx % m as usize) as u64);
        idx /= m as usize;
    }
    out
}

/// A function on p^{-n}Λ/Λ ≅ (Z/p^n)^r with exact cyclotomic values.
#[derive(Clone, Debug)]
pub struct TorsionFunction {
    p: u64,
    level: u32,
    rank: usize,
    lattice: String,
    values: Vec<Cyclo>,
}

impl TorsionFunction {
    pub fn zero(p: u64, level: u32, rank: usize, lattice: &str) -> Self {
        let size = ipow(p, level * rank as u32) as usize;
        TorsionFunction { p, level, rank, lattice: lattice.into(), values: vec![Cyclo::zero(1); size] }
    }

    /// Build from a closure on coordinate vectors.
    pub fn from_fn(p: u64, level: u32, rank: usize, lattice: &str, mut f: impl FnMut(&[u64]) -> Cyclo) -> Self {
        let mut t = Self::zero(p, level, rank, lattice);
        let m = ipow(p, level);
        for i in 0..t.values.len() {
            t.values[i] = f(&coords_of(i, m, rank));
        }
        t
    }

    /// Characteristic function of the single point `x`.
    pub fn delta(p: u64, level: u32, rank: usize, lattice: &str, x: &[u64]) -> Self {
        let mut t = Self::zero(p, level, rank, lattice);
        t.set(x, Cyclo::one(1));
        t
    }

    /// The function s ↦ ζ_{p^n}^{c·s} of a level-n character.
    pub fn from_character(chi: &FiniteCharacter, lattice: &str) -> Self {
        let m = chi.modulus();
        Self::from_fn(chi.p, chi.level, chi.exps.len(), lattice, |s| Cyclo::root(m, chi.pair(s) as i64))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn lattice(&self) -> &str {
        &self.lattice
    }

    pub fn modulus(&self) -> u64 {
        ipow(self.p, self.level)
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, x: &[u64]) -> &Cyclo {
        &self.values[index_of(x, self.modulus())]
    }

    pub fn set(&mut self, x: &[u64], v: Cyclo) {
        let i = index_of(x, self.modulus());
        self.values[i] = v;
    }

    /// `(point, value)` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<u64>, &Cyclo)> + '_ {
        let m = self.modulus();
        self.values.iter().enumerate().map(move |(i, v)| (coords_of(i, m, self.rank), v))
    }

    /// Points carrying a nonzero value.
    pub fn support(&self) -> Vec<Vec<u64>> {
        self.iter().filter(|(_, v)| !v.is_zero()).map(|(x, _)| x).collect()
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.p == other.p
            && self.level == other.level
            && self.rank == other.rank
            && self.values.iter().zip(&other.values).all(|(a, b)| a.equals(b))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect();
        Ok(TorsionFunction { values, ..self.clone() })
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        TorsionFunction { values: self.values.iter().map(|v| v.mul(c)).collect(), ..self.clone() }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.mul(b)).collect();
        Ok(TorsionFunction { values, ..self.clone() })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.lattice != other.lattice || self.p != other.p || self.rank != other.rank {
            return Err(Error::LatticeMismatch(format!("{} vs {}", self.lattice, other.lattice)));
        }
        if self.level != other.level {
            return Err(Error::LevelMismatch(format!("{} vs {}", self.level, other.level)));
        }
        Ok(())
    }

    /// View as a function on p^{-n}Λ/Λ for n ≥ level, zero off the old support
    /// group (the point x at level m sits at p^{n-m}x).
    pub fn refine(&self, n: u32) -> Result<Self> {
        if n < self.level {
            return Err(Error::LevelMismatch(format!("cannot refine level {} to {n}", self.level)));
        }
        let mut out = Self::zero(self.p, n, self.rank, &self.lattice);
        let step = ipow(self.p, n - self.level);
        for (x, v) in self.iter() {
            if !v.is_zero() {
                let y: Vec<u64> = x.iter().map(|c| c * step).collect();
                out.set(&y, v.clone());
            }
        }
        Ok(out)
    }

    /// Inverse of `refine`; fails if the support is not in the coarser group.
    pub fn coarsen(&self, n: u32) -> Result<Self> {
        if n > self.level {
            return Err(Error::LevelMismatch(format!("cannot coarsen level {} to {n}", self.level)));
        }
        let step = ipow(self.p, self.level - n);
        let mut out = Self::zero(self.p, n, self.rank, &self.lattice);
        for (x, v) in self.iter() {
            if v.is_zero() {
                continue;
            }
            if x.iter().any(|c| c % step != 0) {
                return Err(Error::LevelMismatch(format!("support not contained in level {n}")));
            }
            let y: Vec<u64> = x.iter().map(|c| c / step).collect();
            out.set(&y, v.clone());
        }
        Ok(out)
    }

    /// View a function on T/p^mT as a function on T/p^nT, n ≥ m, constant on fibers.
    pub fn pullback(&self, n: u32) -> Result<Self> {
        if n < self.level {
            return Err(Error::LevelMismatch(format!("cannot pull level {} back to {n}", self.level)));
        }
        let m = self.modulus();
        Ok(Self::from_fn(self.p, n, self.rank, &self.lattice, |s| {
            let y: Vec<u64> = s.iter().map(|c| c % m).collect();
            self.get(&y).clone()
        }))
    }

    /// Values brought to a common conductor and denominator.
    fn dense(&self, extra_k: u64) -> Dense {
        let mut k = extra_k;
        let mut den = BigInt::one();
        for v in &self.values {
            k = lcm_u64(k, v.conductor());
            den = den.lcm(v.raw().1);
        }
        let rows = self
            .values
            .iter()
            .map(|v| {
                let e = v.embed(k).expect("conductor divides lcm");
                let (num, d) = e.raw();
                let f = &den / d;
                num.iter().map(|x| x * &f).collect()
            })
            .collect();
        Dense { k, den, rows }
    }
}

/// Group-ring data with one shared conductor and denominator.
struct Dense {
    k: u64,
    den: BigInt,
    rows: Vec<Vec<BigInt>>,
}

impl Dense {
    fn into_values(self) -> Vec<Cyclo> {
        let k = self.k;
        let den = self.den;
        self.rows
            .into_iter()
            .map(|r| {
                let z = Cyclo::from_basis(k, &r, BigInt::one());
                z.div_int(&den)
            })
            .collect()
    }

    /// Separable character sum along every axis: out[c] = Σ_s in[s] ζ_m^{sign·c·s}.
    fn transform(&mut self, m: u64, rank: usize, sign: i64) {
        let k = self.k as usize;
        let step = (self.k / m) as usize;
        let mu = m as usize;
        let stride_base: Vec<usize> = (0..rank).map(|i| mu.pow(i as u32)).collect();
        let total = self.rows.len();
        for axis in 0..rank {
            let stride = stride_base[axis];
            for start in 0..total {
                if (start / stride) % mu != 0 {
                    continue;
                }
                let line: Vec<Vec<BigInt>> =
                    (0..mu).map(|j| core::mem::take(&mut self.rows[start + j * stride])).collect();
                for c in 0..mu {
                    let mut acc = vec![BigInt::zero(); k];
                    for (s, row) in line.iter().enumerate() {
                        let e = ((sign * (c * s) as i64).rem_euclid(m as i64)) as usize * step;
                        for (j, x) in row.iter().enumerate() {
                            if !x.is_zero() {
                                acc[(j + e) % k] += x;
                            }
                        }
                    }
                    self.rows[start + c * stride] = acc;
                }
            }
        }
    }
}

/// A character of T/p^nT given by its exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiniteCharacter {
    pub p: u64,
    pub level: u32,
    pub exps: Vec<u64>,
}

impl FiniteCharacter {
    pub fn new(p: u64, level: u32, exps: Vec<u64>) -> Self {
        let m = ipow(p, level);
        FiniteCharacter { p, level, exps: exps.into_iter().map(|e| e % m).collect() }
    }

    pub fn modulus(&self) -> u64 {
        ipow(self.p, self.level)
    }

    /// Exponent c·s mod p^n.
    pub fn pair(&self, s: &[u64]) -> u64 {
        let m = self.modulus();
        self.exps.iter().zip(s).fold(0, |acc, (c, x)| (acc + (c % m) * (x % m)) % m)
    }

    pub fn eval(&self, s: &[u64]) -> Cyclo {
        Cyclo::root(self.modulus(), self.pair(s) as i64)
    }

    /// Exact order of the character.
    pub fn order(&self) -> u64 {
        let m = self.modulus();
        self.exps.iter().map(|&e| m / crate::cyclo::gcd_u64(e, m)).fold(1, lcm_u64)
    }

    pub fn all(p: u64, level: u32, rank: usize) -> Vec<Self> {
        let m = ipow(p, level);
        (0..m.pow(rank as u32) as usize).map(|i| Self::new(p, level, coords_of(i, m, rank))).collect()
    }
}

/// Values of a finite Fourier transform indexed by character exponent vectors.
#[derive(Clone, Debug)]
pub struct FourierTable {
    pub p: u64,
    pub level: u32,
    pub rank: usize,
    values: Vec<Cyclo>,
}

impl FourierTable {
    pub fn get(&self, chi: &FiniteCharacter) -> &Cyclo {
        &self.values[index_of(&chi.exps, ipow(self.p, self.level))]
    }

    pub fn iter(&self) -> impl Iterator<Item = (FiniteCharacter, &Cyclo)> + '_ {
        let m = ipow(self.p, self.level);
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (FiniteCharacter::new(self.p, self.level, coords_of(i, m, self.rank)), v))
    }

    /// The same table read as a function on exponent vectors.
    pub fn as_function(&self, lattice: &str) -> TorsionFunction {
        TorsionFunction {
            p: self.p,
            level: self.level,
            rank: self.rank,
            lattice: lattice.into(),
            values: self.values.clone(),
        }
    }

    pub fn from_function(f: &TorsionFunction) -> Self {
        FourierTable { p: f.p, level: f.level, rank: f.rank, values: f.values.clone() }
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.level == other.level && self.values.iter().zip(&other.values).all(|(a, b)| a.equals(b))
    }
}

/// ρ̂(χ) = p^{-rn} Σ_s χ(s)^{-1} ρ(s) for all level-n characters χ.
pub fn finite_fourier(rho: &TorsionFunction, n: u32) -> Result<FourierTable> {
    if rho.level > n {
        return Err(Error::LevelMismatch(format!("function has level {} > {n}", rho.level)));
    }
    let f = rho.pullback(n)?;
    let m = f.modulus();
    let mut d = f.dense(m);
    d.transform(m, f.rank, -1);
    d.den *= BigInt::from(m).pow(f.rank as u32);
    Ok(FourierTable { p: f.p, level: n, rank: f.rank, values: d.into_values() })
}

/// ρ(s) = Σ_χ ρ̂(χ) χ(s).
pub fn inverse_finite_fourier(table: &FourierTable, lattice: &str) -> TorsionFunction {
    let f = table.as_function(lattice);
    let m = f.modulus();
    let mut d = f.dense(m);
    d.transform(m, f.rank, 1);
    TorsionFunction { values: d.into_values(), ..f }
}

/// (f1 ∗ f2)(z) = Σ_{x+y=z} f1(x) f2(y), after zero-padding both to the larger level.
pub fn convolve(f1: &TorsionFunction, f2: &TorsionFunction) -> Result<TorsionFunction> {
    if f1.lattice != f2.lattice || f1.p != f2.p || f1.rank != f2.rank {
        return Err(Error::LatticeMismatch(format!("{} vs {}", f1.lattice, f2.lattice)));
    }
    let n = f1.level.max(f2.level);
    let a = f1.refine(n)?;
    let b = f2.refine(n)?;
    let m = a.modulus();
    let mut out = TorsionFunction::zero(a.p, n, a.rank, &a.lattice);
    let sa: Vec<(Vec<u64>, &Cyclo)> = a.iter().filter(|(_, v)| !v.is_zero()).collect();
    let sb: Vec<(Vec<u64>, &Cyclo)> = b.iter().filter(|(_, v)| !v.is_zero()).collect();
    for (x, u) in &sa {
        for (y, v) in &sb {
            let z: Vec<u64> = x.iter().zip(y).map(|(p, q)| (p + q) % m).collect();
            let i = index_of(&z, m);
            out.values[i] = out.values[i].add(&u.mul(v));
        }
    }
    Ok(out)
}

/// j_!ρ: keep the values on units of T/p^nT, zero elsewhere.
pub fn extend_by_zero(rho: &TorsionFunction, is_unit: impl Fn(&[u64]) -> bool) -> TorsionFunction {
    let mut out = rho.clone();
    let m = rho.modulus();
    for (i, v) in out.values.iter_mut().enumerate() {
        if !is_unit(&coords_of(i, m, rho.rank)) {
            *v = Cyclo::zero(1);
        }
    }
    out
}

/// Unit test for Zp^r read coordinatewise (every coordinate a unit), the
/// completion-wise notion for a product of copies of Zp.
pub fn units_of_product(p: u64) -> impl Fn(&[u64]) -> bool {
    move |s| s.iter().all(|c| c % p != 0)
}

/// Ĉhar_𝔭 at an element of 𝔭-adic valuation `v`, for N𝔭 = `norm`, as an exact fraction.
pub fn char_hat(norm: u64, v: i64) -> (BigInt, BigInt) {
    let n = BigInt::from(norm);
    if v >= 0 {
        (&n - 1u32, n)
    } else if v == -1 {
        (BigInt::from(-1), n)
    } else {
        (BigInt::zero(), BigInt::one())
    }
}

/// Σ_χ ρ̂(χ)·(Ξ.f)(χ) with the caller supplying the derivative values.
pub fn integrate_against(
    rho_hat: &FourierTable,
    f_values: impl Fn(&FiniteCharacter) -> Option<Cyclo>,
) -> Result<Cyclo> {
    let mut acc = Cyclo::zero(1);
    for (chi, c) in rho_hat.iter() {
        if c.is_zero() {
            continue;
        }
        let v = f_values(&chi).ok_or_else(|| Error::MissingCharacterValue(format!("{:?}", chi.exps)))?;
        acc = acc.add(&c.mul(&v));
    }
    Ok(acc)
}

/// Σ_s |ρ(s)|² as an exact element (it is rational).
pub fn l2_norm_sq(f: &TorsionFunction) -> Cyclo {
    f.values.iter().fold(Cyclo::zero(1), |acc, v| acc.add(&v.mul(&v.conj())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_zero_rank_one() {
        let d = TorsionFunction::delta(3, 1, 1, "Z3", &[0]);
        let t = finite_fourier(&d, 1).unwrap();
        for (_, v) in t.iter() {
            assert!(v.equals(&Cyclo::from_rational(1, 1, 3)));
        }
    }

    #[test]
    fn character_transforms_to_indicator() {
        let chi = FiniteCharacter::new(5, 1, vec![2, 3]);
        let f = TorsionFunction::from_character(&chi, "L");
        let t = finite_fourier(&f, 1).unwrap();
        for (c, v) in t.iter() {
            let want = if c == chi { 1 } else { 0 };
            assert!(v.equals(&Cyclo::from_int(1, want)), "{:?}", c);
        }
    }

    #[test]
    fn half_plus_half() {
        let d = TorsionFunction::delta(2, 1, 1, "Z2", &[1]);
        let c = convolve(&d, &d).unwrap();
        assert!(c.equals(&TorsionFunction::delta(2, 1, 1, "Z2", &[0])));
    }

    #[test]
    fn extension_by_zero_rank_one() {
        let one = TorsionFunction::from_fn(3, 1, 1, "Z3", |_| Cyclo::one(1));
        let j = extend_by_zero(&one, units_of_product(3));
        let vals: Vec<i64> = (0..3).map(|i| if j.get(&[i]).is_zero() { 0 } else { 1 }).collect();
        assert_eq!(vals, vec![0, 1, 1]);
    }

    #[test]
    fn char_hat_table() {
        assert_eq!(char_hat(5, 0), (BigInt::from(4), BigInt::from(5)));
        assert_eq!(char_hat(5, -1), (BigInt::from(-1), BigInt::from(5)));
        assert_eq!(char_hat(5, -2).0, BigInt::zero());
    }
}
