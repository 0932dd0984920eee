//! Fractional ideals of a class-number-one imaginary quadratic field.

use alloc::vec::Vec;

use num_integer::Integer;

use super::field::{Elem, ImagQuadField};
use crate::error::{Error, Result};

/// A nonzero fractional ideal, stored through a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ideal {
    gen: Elem,
}

/// Hermite basis of an integral ideal: Z·a + Z·(b + cω), 0 ≤ b < a, c | a, c | b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hnf {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

/// A prime ideal together with the rational prime below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub p: u64,
    pub ideal: Ideal,
    pub residue_degree: u32,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.residue_degree)
    }
}

/// How a rational prime decomposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

fn hnf_of(vectors: &[(i128, i128)]) -> (i128, i128, i128) {
    // Row reduce the lattice spanned by (x, y) pairs to {(a, 0), (b, c)}.
    let mut rows: Vec<(i128, i128)> = vectors.iter().copied().filter(|v| *v != (0, 0)).collect();
    // eliminate the y-coordinate with gcd steps
    let mut c_row: Option<(i128, i128)> = None;
    for r in rows.drain(..).collect::<Vec<_>>() {
        match c_row {
            None => c_row = Some(r),
            Some(mut cr) => {
                let mut r = r;
                while r.1 != 0 {
                    let q = Integer::div_floor(&cr.1, &r.1);
                    cr = (cr.0 - q * r.0, cr.1 - q * r.1);
                    core::mem::swap(&mut cr, &mut r);
                }
                rows.push(r);
                c_row = Some(cr);
            }
        }
    }
    let (mut b, mut c) = c_row.unwrap_or((0, 0));
    let mut a = rows.iter().fold(0i128, |g, r| g.gcd(&r.0));
    if c < 0 {
        b = -b;
        c = -c;
    }
    if a != 0 {
        b = b.rem_euclid(a);
    }
    a = a.abs();
    (a, b, c)
}

impl Ideal {
    pub fn principal(field: &ImagQuadField, gen: Elem) -> Result<Self> {
        if field.is_zero(&gen) {
            return Err(Error::ZeroIdeal);
        }
        Ok(Ideal { gen: canonical_generator(field, gen) })
    }

    pub fn unit(field: &ImagQuadField) -> Self {
        Ideal { gen: field.int(1) }
    }

    pub fn generator(&self) -> Elem {
        self.gen
    }

    pub fn mul(&self, field: &ImagQuadField, other: &Self) -> Self {
        Ideal { gen: canonical_generator(field, field.mul(&self.gen, &other.gen)) }
    }

    pub fn inverse(&self, field: &ImagQuadField) -> Self {
        Ideal { gen: canonical_generator(field, field.inv(&self.gen).expect("nonzero")) }
    }

    pub fn pow(&self, field: &ImagQuadField, e: i64) -> Self {
        Ideal { gen: canonical_generator(field, field.pow(&self.gen, e).expect("nonzero")) }
    }

    /// Norm as a reduced fraction.
    pub fn norm(&self, field: &ImagQuadField) -> (i128, i128) {
        field.norm(&self.gen)
    }

    pub fn is_integral(&self, field: &ImagQuadField) -> bool {
        field.is_integral(&self.gen)
    }

    /// Does `self` divide `other` (other ⊆ self)?
    pub fn divides(&self, field: &ImagQuadField, other: &Self) -> bool {
        field.divides(&self.gen, &other.gen)
    }

    pub fn contains(&self, field: &ImagQuadField, x: &Elem) -> bool {
        field.is_zero(x) || field.divides(&self.gen, x)
    }

    pub fn hnf(&self, field: &ImagQuadField) -> Result<Hnf> {
        if !self.is_integral(field) {
            return Err(Error::InvalidInput("Hermite form needs an integral ideal".into()));
        }
        let g = self.gen;
        let gw = field.mul(&g, &field.omega());
        let (a, b, c) = hnf_of(&[(g.a, g.b), (gw.a, gw.b)]);
        Ok(Hnf { a, b, c })
    }

    /// Sum with another integral ideal, as the Hermite form of the joined lattice.
    fn sum_hnf(&self, field: &ImagQuadField, other: &Self) -> Result<(i128, i128, i128)> {
        let mut v = Vec::new();
        for id in [self, other] {
            let g = id.gen;
            if !field.is_integral(&g) {
                return Err(Error::InvalidInput("coprimality needs integral ideals".into()));
            }
            let gw = field.mul(&g, &field.omega());
            v.push((g.a, g.b));
            v.push((gw.a, gw.b));
        }
        Ok(hnf_of(&v))
    }

    pub fn is_coprime(&self, field: &ImagQuadField, other: &Self) -> Result<bool> {
        let (a, _, c) = self.sum_hnf(field, other)?;
        Ok(a * c == 1)
    }

    /// Reduce an integral element modulo this integral ideal to the canonical
    /// residue (x, y) with 0 ≤ x < a, 0 ≤ y < c.
    pub fn reduce(&self, field: &ImagQuadField, x: &Elem) -> Result<(i128, i128)> {
        let h = self.hnf(field)?;
        reduce_with(&h, x)
    }

    /// Factorization into prime ideals with exponents (negative for denominators).
    pub fn factor(&self, field: &ImagQuadField) -> Vec<(PrimeIdeal, i64)> {
        let (n, d) = self.norm(field);
        let mut primes = rational_prime_factors(n.unsigned_abs());
        for q in rational_prime_factors(d.unsigned_abs()) {
            if !primes.contains(&q) {
                primes.push(q);
            }
        }
        primes.sort();
        let mut out = Vec::new();
        for q in primes {
            for pi in primes_above(field, q as u64) {
                let v = valuation(field, &pi, &self.gen);
                if v != 0 {
                    out.push((pi, v));
                }
            }
        }
        out
    }

    /// Primes above p dividing this ideal.
    pub fn factor_over(&self, field: &ImagQuadField, p: u64) -> Vec<(PrimeIdeal, i64)> {
        primes_above(field, p)
            .into_iter()
            .map(|pi| (pi, valuation(field, &pi, &self.gen)))
            .filter(|(_, v)| *v != 0)
            .collect()
    }
}

pub(crate) fn reduce_with(h: &Hnf, x: &Elem) -> Result<(i128, i128)> {
    if x.den != 1 {
        return Err(Error::InvalidInput("reduction needs an integral element".into()));
    }
    let q = Integer::div_floor(&x.b, &h.c);
    let xa = x.a - q * h.b;
    let y = x.b - q * h.c;
    Ok((xa.rem_euclid(h.a), y))
}

/// Choose a fixed representative of gen·O_L^×: the unit multiple with the
/// largest (a, b) after clearing denominators, preferring a > 0.
fn canonical_generator(field: &ImagQuadField, gen: Elem) -> Elem {
    let gen = field.normalize(gen);
    field
        .units()
        .iter()
        .map(|u| field.mul(&gen, u))
        .max_by_key(|x| (x.a > 0 && x.b >= 0, x.a, x.b))
        .expect("units nonempty")
}

fn rational_prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn splitting(field: &ImagQuadField, p: u64) -> Splitting {
    let d = field.discriminant();
    if d.rem_euclid(p as i64) == 0 {
        return Splitting::Ramified;
    }
    if p == 2 {
        return if d.rem_euclid(8) == 1 { Splitting::Split } else { Splitting::Inert };
    }
    if super::field::legendre(d, p as i64) == 1 {
        Splitting::Split
    } else {
        Splitting::Inert
    }
}

/// The prime ideals above p, split primes ordered by generator.
pub fn primes_above(field: &ImagQuadField, p: u64) -> Vec<PrimeIdeal> {
    match splitting(field, p) {
        Splitting::Inert => alloc::vec![PrimeIdeal {
            p,
            ideal: Ideal::principal(field, field.int(p as i128)).expect("nonzero"),
            residue_degree: 2,
        }],
        Splitting::Ramified | Splitting::Split => {
            let mut gens: Vec<Ideal> = field
                .elements_of_norm(p as i128)
                .into_iter()
                .map(|g| Ideal::principal(field, g).expect("nonzero"))
                .collect();
            gens.sort();
            gens.dedup();
            gens.into_iter().map(|ideal| PrimeIdeal { p, ideal, residue_degree: 1 }).collect()
        }
    }
}

/// 𝔭-adic valuation of a nonzero element.
pub fn valuation(field: &ImagQuadField, pi: &PrimeIdeal, x: &Elem) -> i64 {
    let g = pi.ideal.generator();
    let mut v = 0i64;
    // clear denominators first: x = y / den with den rational
    let den = x.den;
    let num = Elem { a: x.a, b: x.b, den: 1 };
    let mut y = num;
    while field.divides(&g, &y) && !field.is_zero(&y) {
        y = field.div(&y, &g).expect("nonzero");
        v += 1;
    }
    let mut z = field.int(den);
    while field.divides(&g, &z) {
        z = field.div(&z, &g).expect("nonzero");
        v -= 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_primes() {
        let k = ImagQuadField::new(-4).unwrap();
        assert_eq!(primes_above(&k, 5).len(), 2);
        assert_eq!(primes_above(&k, 7).len(), 1);
        assert_eq!(primes_above(&k, 7)[0].norm(), 49);
        let i = Ideal::principal(&k, k.elem(1, 1)).unwrap();
        assert_eq!(i.norm(&k), (2, 1));
        let prod = i.mul(&k, &i.inverse(&k));
        assert_eq!(prod, Ideal::unit(&k));
    }

    #[test]
    fn hnf_of_three() {
        let k = ImagQuadField::new(-4).unwrap();
        let i = Ideal::principal(&k, k.int(3)).unwrap();
        assert_eq!(i.hnf(&k).unwrap(), Hnf { a: 3, b: 0, c: 3 });
        let p = Ideal::principal(&k, k.elem(2, 1)).unwrap();
        let h = p.hnf(&k).unwrap();
        assert_eq!(h.a * h.c, 5);
    }

    #[test]
    fn coprimality() {
        let k = ImagQuadField::new(-4).unwrap();
        let a = Ideal::principal(&k, k.int(3)).unwrap();
        let b = Ideal::principal(&k, k.int(5)).unwrap();
        let c = Ideal::principal(&k, k.elem(3, 3)).unwrap();
        assert!(a.is_coprime(&k, &b).unwrap());
        assert!(!a.is_coprime(&k, &c).unwrap());
    }

    #[test]
    fn factor_ten() {
        let k = ImagQuadField::new(-4).unwrap();
        let f = Ideal::principal(&k, k.int(10)).unwrap().factor(&k);
        let exps: Vec<i64> = f.iter().map(|x| x.1).collect();
        assert_eq!(exps, alloc::vec![2, 1, 1]);
    }
}
