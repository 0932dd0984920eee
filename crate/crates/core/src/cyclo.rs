//! Exact arithmetic in cyclotomic fields Q(ζ_k).
//!
//! Elements are kept as group-ring vectors `Σ a_j ζ^j` (j mod k) over a common
//! positive denominator. That representation is not unique; `canonical`
//! reduces modulo the cyclotomic polynomial to the power basis of length φ(k).
//! Multiplying by a root of unity is a rotation, so character sums never
//! touch the reduction step until the end.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut r = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            r -= r / d;
        }
        d += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

fn mobius(mut n: u64) -> i32 {
    let mut m = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            m = -m;
        }
        d += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

/// Coefficients of the k-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_poly(k: u64) -> Vec<i64> {
    let mut poly = vec![1i64];
    let divisors: Vec<u64> = (1..=k).filter(|d| k % d == 0).collect();
    for &d in &divisors {
        if mobius(k / d) == 1 {
            // multiply by x^d - 1
            let mut out = vec![0i64; poly.len() + d as usize];
            for (i, &c) in poly.iter().enumerate() {
                out[i + d as usize] += c;
                out[i] -= c;
            }
            poly = out;
        }
    }
    for &d in &divisors {
        if mobius(k / d) == -1 {
            // exact division by x^d - 1, from the top
            let d = d as usize;
            let n = poly.len() - 1;
            let mut q = vec![0i64; n - d + 1];
            let mut rem = poly.clone();
            for i in (d..=n).rev() {
                let c = rem[i];
                q[i - d] = c;
                rem[i] = 0;
                rem[i - d] += c;
            }
            poly = q;
        }
    }
    poly
}

/// An element of Q(ζ_k).
#[derive(Clone, Debug)]
pub struct Cyclo {
    k: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclo {
    pub fn zero(k: u64) -> Self {
        Cyclo { k, num: vec![BigInt::zero(); k as usize], den: BigInt::one() }
    }

    pub fn one(k: u64) -> Self {
        Self::from_int(k, 1)
    }

    pub fn from_int(k: u64, n: i64) -> Self {
        let mut z = Self::zero(k);
        z.num[0] = BigInt::from(n);
        z
    }

    pub fn from_bigint(k: u64, n: BigInt) -> Self {
        let mut z = Self::zero(k);
        z.num[0] = n;
        z
    }

    pub fn from_rational(k: u64, n: i64, d: i64) -> Self {
        Self::from_int(k, n).div_int(&BigInt::from(d))
    }

    /// ζ_k^e.
    pub fn root(k: u64, e: i64) -> Self {
        let mut z = Self::zero(k);
        z.num[e.rem_euclid(k as i64) as usize] = BigInt::one();
        z
    }

    /// Build from coordinates in the power basis 1, ζ, ..., ζ^{φ(k)-1}.
    pub fn from_basis(k: u64, coords: &[BigInt], den: BigInt) -> Self {
        let mut z = Self::zero(k);
        for (j, c) in coords.iter().enumerate() {
            z.num[j % k as usize] += c;
        }
        z.den = den;
        z.fix_sign()
    }

    pub fn conductor(&self) -> u64 {
        self.k
    }

    fn fix_sign(mut self) -> Self {
        if self.den.is_negative() {
            self.den = -self.den;
            for c in self.num.iter_mut() {
                *c = -core::mem::take(c);
            }
        }
        self
    }

    /// Same element viewed in Q(ζ_m) for a multiple m of k.
    pub fn embed(&self, m: u64) -> Result<Self> {
        if m % self.k != 0 {
            return Err(Error::IncompatibleStructures(alloc::format!(
                "Q(zeta_{}) does not embed in Q(zeta_{m})",
                self.k
            )));
        }
        if m == self.k {
            return Ok(self.clone());
        }
        let step = (m / self.k) as usize;
        let mut z = Self::zero(m);
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                z.num[j * step] = c.clone();
            }
        }
        z.den = self.den.clone();
        Ok(z)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = lcm_u64(self.k, other.k);
        (self.embed(m).unwrap(), other.embed(m).unwrap())
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        if a.den == b.den {
            let num = a.num.iter().zip(&b.num).map(|(x, y)| x + y).collect();
            return Cyclo { k: a.k, num, den: a.den };
        }
        let num = a.num.iter().zip(&b.num).map(|(x, y)| x * &b.den + y * &a.den).collect();
        Cyclo { k: a.k, num, den: &a.den * &b.den }.reduce_den()
    }

    pub fn neg(&self) -> Self {
        Cyclo { k: self.k, num: self.num.iter().map(|x| -x).collect(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let k = a.k as usize;
        let mut num = vec![BigInt::zero(); k];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    num[(i + j) % k] += x * y;
                }
            }
        }
        Cyclo { k: a.k, num, den: &a.den * &b.den }.reduce_den()
    }

    /// Multiply by ζ_k^e (with k the element's own conductor).
    pub fn rotate(&self, e: i64) -> Self {
        let k = self.k as usize;
        let s = e.rem_euclid(self.k as i64) as usize;
        let mut num = vec![BigInt::zero(); k];
        for (j, c) in self.num.iter().enumerate() {
            num[(j + s) % k] = c.clone();
        }
        Cyclo { k: self.k, num, den: self.den.clone() }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        Cyclo { k: self.k, num: self.num.iter().map(|x| x * n).collect(), den: self.den.clone() }.reduce_den()
    }

    pub fn div_int(&self, n: &BigInt) -> Self {
        assert!(!n.is_zero(), "division by zero integer");
        Cyclo { k: self.k, num: self.num.clone(), den: &self.den * n }.fix_sign().reduce_den()
    }

    pub fn mul_rational(&self, n: i64, d: i64) -> Self {
        self.mul_int(&BigInt::from(n)).div_int(&BigInt::from(d))
    }

    /// The Galois automorphism ζ ↦ ζ^a (a coprime to k).
    pub fn galois(&self, a: i64) -> Self {
        let k = self.k as i64;
        let mut z = Self::zero(self.k);
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                z.num[(j as i64 * a).rem_euclid(k) as usize] += c;
            }
        }
        z.den = self.den.clone();
        z
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().0.iter().all(|c| c.is_zero())
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        let (c, d) = self.canonical();
        if c.iter().skip(1).all(|x| x.is_zero()) {
            Some((c[0].clone(), d))
        } else {
            None
        }
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> (BigInt, BigInt) {
        let k = self.k as i64;
        let mut acc = Cyclo::one(self.k);
        for a in 1..k.max(2) {
            if gcd_u64(a as u64, self.k) == 1 {
                acc = acc.mul(&self.galois(a)).compact();
            }
        }
        acc.as_rational().expect("norm is rational")
    }

    pub fn inverse(&self) -> Result<Self> {
        let k = self.k as i64;
        let mut others = Cyclo::one(self.k);
        for a in 2..k {
            if gcd_u64(a as u64, self.k) == 1 {
                others = others.mul(&self.galois(a)).compact();
            }
        }
        let total = others.mul(self).compact();
        let (n, d) = total.as_rational().expect("norm is rational");
        if n.is_zero() {
            return Err(Error::DivisionByZeroAtPrecision(0));
        }
        Ok(others.mul_int(&d).div_int(&n).compact())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut r = Cyclo::one(self.k);
        let mut b = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b).compact();
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b).compact();
            }
        }
        Ok(r)
    }

    fn reduce_den(mut self) -> Self {
        if self.den.is_one() {
            return self;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return self;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
        self
    }

    /// Coordinates in the power basis of length φ(k) and the reduced denominator.
    pub fn canonical(&self) -> (Vec<BigInt>, BigInt) {
        let phi = cyclotomic_poly(self.k);
        let deg = phi.len() - 1;
        let mut r = self.num.clone();
        for i in (deg..r.len()).rev() {
            let c = core::mem::take(&mut r[i]);
            if c.is_zero() {
                continue;
            }
            for (j, &m) in phi.iter().enumerate().take(deg) {
                if m != 0 {
                    r[i - deg + j] -= &c * m;
                }
            }
        }
        r.truncate(deg);
        let z = Cyclo::from_parts(self.k, r.clone(), self.den.clone()).reduce_den();
        (z.num[..deg].to_vec(), z.den)
    }

    fn from_parts(k: u64, mut num: Vec<BigInt>, den: BigInt) -> Self {
        num.resize(k as usize, BigInt::zero());
        Cyclo { k, num, den }
    }

    /// Replace the group-ring vector by its reduced power-basis form.
    pub fn compact(&self) -> Self {
        let (c, d) = self.canonical();
        Cyclo::from_parts(self.k, c, d)
    }

    /// Smallest k' dividing k with the element in Q(ζ_k').
    pub fn minimal_conductor(&self) -> u64 {
        let mut best = self.k;
        for d in 1..=self.k {
            if self.k % d == 0 && d < best && self.descend(d).is_some() {
                best = d;
            }
        }
        best
    }

    /// The element as a member of Q(ζ_d), d | k, if it lies there.
    pub fn descend(&self, d: u64) -> Option<Self> {
        if self.k % d != 0 {
            return None;
        }
        let c = self.compact();
        let fixing = (1..self.k.max(2) as i64)
            .filter(|&a| gcd_u64(a as u64, self.k) == 1 && (a as u64) % d == 1 % d);
        for a in fixing {
            if !c.galois(a).equals(&c) {
                return None;
            }
        }
        let basis: Vec<Cyclo> = (0..euler_phi(d) as i64)
            .map(|j| Cyclo::root(d, j).embed(self.k).unwrap())
            .collect();
        solve_in_span(&c, &basis).map(|(coords, den)| Cyclo::from_basis(d, &coords, den))
    }

    /// `(numerator, denominator, ζ-exponent)` triples of the canonical form.
    pub fn triples(&self) -> Vec<(BigInt, BigInt, u64)> {
        let (c, d) = self.canonical();
        c.into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| {
                let g = v.gcd(&d);
                (&v / &g, &d / &g, j as u64)
            })
            .collect()
    }

    /// Group-ring numerators and the shared denominator.
    pub fn raw(&self) -> (&[BigInt], &BigInt) {
        (&self.num, &self.den)
    }

    /// Approximate complex value at double precision, via ζ_k = e^{2πi/k}.
    pub fn to_f64(&self) -> (f64, f64) {
        let k = self.k as f64;
        let den = bigint_to_f64(&self.den);
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = bigint_to_f64(c) / den;
            let t = 2.0 * core::f64::consts::PI * j as f64 / k;
            re += v * num_traits::Float::cos(t);
            im += v * num_traits::Float::sin(t);
        }
        (re, im)
    }
}

pub(crate) fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Express `target` as a rational combination of `basis` (all in the same
/// field, canonical coordinates) by exact Gaussian elimination.
fn solve_in_span(target: &Cyclo, basis: &[Cyclo]) -> Option<(Vec<BigInt>, BigInt)> {
    use num_rational::BigRational;
    let (t, td) = target.canonical();
    let n = t.len();
    let m = basis.len();
    // columns = basis elements
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(m + 1);
            for b in basis {
                let (c, d) = b.canonical();
                row.push(BigRational::new(c[i].clone(), d));
            }
            row.push(BigRational::new(t[i].clone(), td.clone()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(pr) = (r..n).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, pr);
        let pv = rows[r][col].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &pv;
        }
        for i in 0..n {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..=m {
                    let v = &rows[r][j] * &f;
                    rows[i][j] -= v;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[m].is_zero()) {
        return None;
    }
    let mut sol = vec![BigRational::zero(); m];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = rows[i][m].clone();
    }
    let mut den = BigInt::one();
    for s in &sol {
        den = den.lcm(s.denom());
    }
    Some((sol.iter().map(|s| s.numer() * (&den / s.denom())).collect(), den))
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.triples();
        if t.is_empty() {
            return write!(f, "0");
        }
        for (i, (n, d, e)) in t.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({n}/{d})*z{}^{e}", self.k)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(25).len(), 21);
    }

    #[test]
    fn sum_of_roots_vanishes() {
        let mut s = Cyclo::zero(5);
        for e in 0..5 {
            s = s.add(&Cyclo::root(5, e));
        }
        assert!(s.is_zero());
    }

    #[test]
    fn i_squared() {
        let i = Cyclo::root(4, 1);
        assert!(i.mul(&i).equals(&Cyclo::from_int(4, -1)));
        let x = Cyclo::from_int(4, 2).add(&i);
        let y = x.inverse().unwrap();
        assert!(x.mul(&y).equals(&Cyclo::one(4)));
        assert_eq!(x.norm(), (BigInt::from(5), BigInt::one()));
    }

    #[test]
    fn mixed_conductors() {
        let a = Cyclo::root(3, 1);
        let b = Cyclo::root(4, 1);
        let c = a.mul(&b);
        assert_eq!(c.conductor(), 12);
        assert!(c.pow(12).unwrap().equals(&Cyclo::one(1)));
        assert!(Cyclo::root(12, 4).equals(&a));
    }

    #[test]
    fn descend_to_subfield() {
        let i = Cyclo::root(4, 1).embed(20).unwrap();
        let d = i.descend(4).unwrap();
        assert!(d.equals(&Cyclo::root(4, 1)));
        assert_eq!(i.minimal_conductor(), 4);
        let s5 = Cyclo::root(5, 1).add(&Cyclo::root(5, 4));
        assert!(s5.descend(1).is_none());
    }
}
