//! Fixed absolute precision arithmetic in Zp, Qp and their unramified extensions.
//!
//! An element is stored as `p^val * unit` where the unit is known modulo
//! `p^rel`; the absolute precision is `val + rel`. Elements of degree `f`
//! extensions are polynomials in the root `a` of a fixed primitive
//! polynomial of degree `f` over F_p, lifted to Z.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest modulus p^k we allow; keeps every product inside u128.
const MAX_MODULUS: u128 = 1 << 62;

fn mulmod(a: u128, b: u128, n: u128) -> u128 {
    (a * b) % n
}

fn powmod(mut a: u128, mut e: u128, n: u128) -> u128 {
    let mut r = 1 % n;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, n);
        }
        a = mulmod(a, a, n);
        e >>= 1;
    }
    r
}

fn pow_u128(p: u64, k: u32) -> u128 {
    (p as u128).pow(k)
}

fn prime_factors(mut n: u128) -> Vec<u128> {
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

/// An unramified extension of Qp of degree `degree`, described by a monic
/// polynomial whose root generates the multiplicative group of the residue
/// field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicField {
    p: u64,
    degree: usize,
    /// Monic modulus, low degree first, length `degree + 1`.
    modulus: Vec<u64>,
    /// A generator of the residue field's multiplicative group.
    generator: Vec<u64>,
}

impl PadicField {
    /// Qp itself.
    pub fn qp(p: u64) -> Result<Arc<Self>> {
        Self::new(p, 1)
    }

    /// The unramified extension of degree `degree`. The defining polynomial
    /// is the first monic primitive polynomial in the order that lists
    /// coefficient vectors (c_{f-1}, ..., c_0) lexicographically.
    pub fn new(p: u64, degree: usize) -> Result<Arc<Self>> {
        if p < 2 || prime_factors(p as u128) != [p as u128] {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if degree == 0 || degree > 6 {
            return Err(Error::InvalidInput(format!("degree {degree} out of range 1..=6")));
        }
        if degree == 1 {
            let g = (1..p).find(|&g| is_primitive_root(g as u128, p as u128)).unwrap_or(1);
            return Ok(Arc::new(PadicField {
                p,
                degree,
                modulus: vec![0, 1],
                generator: vec![g],
            }));
        }
        let q = pow_u128(p, degree as u32);
        let total = q;
        for idx in 0..total {
            let mut c = vec![0u64; degree + 1];
            let mut t = idx;
            // c_0 varies fastest
            for slot in c.iter_mut().take(degree) {
                *slot = (t % p as u128) as u64;
                t /= p as u128;
            }
            c[degree] = 1;
            if c[0] == 0 {
                continue;
            }
            let field = PadicField {
                p,
                degree,
                modulus: c.clone(),
                generator: {
                    let mut x = vec![0u64; degree];
                    x[1] = 1;
                    x
                },
            };
            if field.x_is_primitive() {
                return Ok(Arc::new(field));
            }
        }
        Err(Error::InvalidInput(format!("no primitive polynomial of degree {degree} mod {p}")))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Size of the residue field.
    pub fn residue_size(&self) -> u128 {
        pow_u128(self.p, self.degree as u32)
    }

    /// Generator of the residue field's multiplicative group as a coefficient vector.
    pub fn residue_generator(&self) -> &[u64] {
        &self.generator
    }

    fn x_is_primitive(&self) -> bool {
        let p = self.p as u128;
        let q1 = self.residue_size() - 1;
        let x: Vec<u128> = self.generator.iter().map(|&v| v as u128).collect();
        let one = self.one_vec();
        if self.poly_pow(&x, q1, p) != one {
            return false;
        }
        prime_factors(q1)
            .into_iter()
            .all(|r| self.poly_pow(&x, q1 / r, p) != one)
    }

    fn one_vec(&self) -> Vec<u128> {
        let mut v = vec![0u128; self.degree];
        v[0] = 1;
        v
    }

    fn poly_mul(&self, a: &[u128], b: &[u128], n: u128) -> Vec<u128> {
        let f = self.degree;
        if f == 1 {
            return vec![mulmod(a[0], b[0], n)];
        }
        let mut prod = vec![0u128; 2 * f - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(ai, bj, n)) % n;
            }
        }
        for k in (f..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            // x^f = -sum m_j x^j
            for j in 0..f {
                let m = self.modulus[j] as u128 % n;
                let sub = mulmod(c, m, n);
                prod[k - f + j] = (prod[k - f + j] + n - sub) % n;
            }
        }
        prod.truncate(f);
        prod
    }

    fn poly_pow(&self, a: &[u128], mut e: u128, n: u128) -> Vec<u128> {
        let mut r = self.one_vec();
        for v in r.iter_mut() {
            *v %= n;
        }
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.poly_mul(&r, &b, n);
            }
            b = self.poly_mul(&b, &b, n);
            e >>= 1;
        }
        r
    }

    /// Inverse of a unit modulo p^k (unit means nonzero mod p).
    fn poly_inv(&self, a: &[u128], k: u32) -> Vec<u128> {
        let p = self.p as u128;
        let q = self.residue_size();
        let a_modp: Vec<u128> = a.iter().map(|v| v % p).collect();
        let mut y = self.poly_pow(&a_modp, q - 2, p);
        let mut prec = 1u32;
        while prec < k {
            prec = (prec * 2).min(k);
            let n = pow_u128(self.p, prec);
            let am: Vec<u128> = a.iter().map(|v| v % n).collect();
            let ay = self.poly_mul(&am, &y, n);
            // y <- y * (2 - a y)
            let mut two_minus = vec![0u128; self.degree];
            for (i, v) in ay.iter().enumerate() {
                two_minus[i] = (n - v) % n;
            }
            two_minus[0] = (two_minus[0] + 2) % n;
            y = self.poly_mul(&y, &two_minus, n);
        }
        let n = pow_u128(self.p, k);
        y.iter().map(|v| v % n).collect()
    }
}

fn is_primitive_root(g: u128, p: u128) -> bool {
    if p == 2 {
        return g % 2 == 1;
    }
    prime_factors(p - 1).into_iter().all(|r| powmod(g, (p - 1) / r, p) != 1)
}

fn vp_u128(mut n: u128, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut k = 0;
    while n % p as u128 == 0 {
        n /= p as u128;
        k += 1;
    }
    k
}

fn vp_i64(n: i64, p: u64) -> u32 {
    vp_u128(n.unsigned_abs() as u128, p)
}

/// A precision-tracked element `p^val * unit + O(p^(val+rel))`.
#[derive(Debug, Clone)]
pub struct PadicNumber {
    field: Arc<PadicField>,
    val: i64,
    rel: u32,
    unit: Vec<u128>,
}

impl PadicNumber {
    fn check_rel(field: &PadicField, rel: u32) -> Result<()> {
        if (field.p as u128).checked_pow(rel).map_or(true, |m| m > MAX_MODULUS) {
            return Err(Error::PrecisionInsufficient(format!(
                "relative precision {rel} exceeds the supported modulus for p={}",
                field.p
            )));
        }
        Ok(())
    }

    /// Build `p^val0 * c` with c known modulo p^rel0, normalizing the valuation.
    fn normalize(field: Arc<PadicField>, val0: i64, rel0: u32, c: Vec<u128>) -> Self {
        let p = field.p;
        let k = c.iter().map(|&v| vp_u128(v, p)).min().unwrap_or(u32::MAX);
        if k >= rel0 {
            return Self::zero(field, val0 + rel0 as i64);
        }
        let n = pow_u128(p, rel0 - k);
        let d = pow_u128(p, k);
        let unit = c.iter().map(|&v| (v / d) % n).collect();
        PadicNumber { field, val: val0 + k as i64, rel: rel0 - k, unit }
    }

    /// Zero known modulo p^abs_prec.
    pub fn zero(field: Arc<PadicField>, abs_prec: i64) -> Self {
        let f = field.degree;
        PadicNumber { field, val: abs_prec, rel: 0, unit: vec![0; f] }
    }

    pub fn one(field: Arc<PadicField>, abs_prec: i64) -> Result<Self> {
        Self::from_int(field, 1, abs_prec)
    }

    pub fn from_int(field: Arc<PadicField>, n: i64, abs_prec: i64) -> Result<Self> {
        let f = field.degree;
        let mut c = vec![0i64; f];
        c[0] = n;
        Self::from_coeffs(field, &c, abs_prec)
    }

    /// Element with the given integer coordinates in the basis 1, a, a^2, ...
    pub fn from_coeffs(field: Arc<PadicField>, coeffs: &[i64], abs_prec: i64) -> Result<Self> {
        if coeffs.len() != field.degree {
            return Err(Error::IncompatibleStructures(format!(
                "expected {} coordinates, got {}",
                field.degree,
                coeffs.len()
            )));
        }
        if abs_prec <= 0 {
            return Ok(Self::zero(field, abs_prec));
        }
        let rel = abs_prec as u32;
        Self::check_rel(&field, rel)?;
        let n = pow_u128(field.p, rel) as i128;
        let c = coeffs.iter().map(|&v| (v as i128).rem_euclid(n) as u128).collect();
        Ok(Self::normalize(field, 0, rel, c))
    }

    /// The rational number num/den.
    pub fn from_rational(field: Arc<PadicField>, num: i64, den: i64, abs_prec: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZeroAtPrecision(abs_prec));
        }
        let vd = vp_i64(den, field.p) as i64;
        let a = Self::from_int(field.clone(), num, abs_prec + vd)?;
        let b = Self::from_int(field, den, abs_prec + vd)?;
        a.div(&b)
    }

    pub fn field(&self) -> &Arc<PadicField> {
        &self.field
    }

    pub fn prime(&self) -> u64 {
        self.field.p
    }

    pub fn ext_degree(&self) -> usize {
        self.field.degree
    }

    /// Valuation; equals the absolute precision for elements indistinguishable from zero.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn abs_precision(&self) -> i64 {
        self.val + self.rel as i64
    }

    pub fn rel_precision(&self) -> u32 {
        self.rel
    }

    /// True when the element is indistinguishable from 0 at its precision.
    pub fn is_zero_at_precision(&self) -> bool {
        self.rel == 0
    }

    pub fn is_unit(&self) -> bool {
        self.rel > 0 && self.val == 0
    }

    /// Unit part coefficients modulo p^rel.
    pub fn unit_coeffs(&self) -> &[u128] {
        &self.unit
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::IncompatibleStructures(format!(
                "p={} f={} vs p={} f={}",
                self.field.p, self.field.degree, other.field.p, other.field.degree
            )));
        }
        Ok(())
    }

    /// Coordinates of `p^val * unit` scaled to `p^base` modulo p^(abs-base).
    fn coeffs_at(&self, base: i64, abs: i64) -> Vec<u128> {
        let width = (abs - base) as u32;
        let n = pow_u128(self.field.p, width);
        if self.rel == 0 || self.val >= abs {
            return vec![0; self.field.degree];
        }
        let shift = pow_u128(self.field.p, (self.val - base) as u32);
        self.unit.iter().map(|&u| mulmod(u % n, shift % n, n)).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let abs = self.abs_precision().min(other.abs_precision());
        let vmin = self.val.min(other.val);
        if vmin >= abs {
            return Ok(Self::zero(self.field.clone(), abs));
        }
        let n = pow_u128(self.field.p, (abs - vmin) as u32);
        let a = self.coeffs_at(vmin, abs);
        let b = other.coeffs_at(vmin, abs);
        let c = a.iter().zip(&b).map(|(x, y)| (x + y) % n).collect();
        Ok(Self::normalize(self.field.clone(), vmin, (abs - vmin) as u32, c))
    }

    pub fn neg(&self) -> Self {
        let n = pow_u128(self.field.p, self.rel);
        let unit = self.unit.iter().map(|&u| (n - u % n) % n).collect();
        PadicNumber { field: self.field.clone(), val: self.val, rel: self.rel, unit }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        if self.rel == 0 || other.rel == 0 {
            let abs = (self.abs_precision() + other.val).min(other.abs_precision() + self.val);
            return Ok(Self::zero(self.field.clone(), abs));
        }
        let rel = self.rel.min(other.rel);
        let n = pow_u128(self.field.p, rel);
        let a: Vec<u128> = self.unit.iter().map(|v| v % n).collect();
        let b: Vec<u128> = other.unit.iter().map(|v| v % n).collect();
        let c = self.field.poly_mul(&a, &b, n);
        Ok(PadicNumber { field: self.field.clone(), val: self.val + other.val, rel, unit: c })
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rel == 0 {
            return Err(Error::DivisionByZeroAtPrecision(self.abs_precision()));
        }
        let unit = self.field.poly_inv(&self.unit, self.rel);
        Ok(PadicNumber { field: self.field.clone(), val: -self.val, rel: self.rel, unit })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let inv = other.inverse()?;
        self.mul(&inv)
    }

    /// Multiply by an exact integer.
    pub fn mul_int(&self, k: i64) -> Result<Self> {
        let e = Self::exact_int(self.field.clone(), k, self.rel)?;
        match e {
            None => Ok(Self::zero(self.field.clone(), self.abs_precision())),
            Some(e) => self.mul(&e),
        }
    }

    /// Divide by an exact nonzero integer; the relative precision is kept.
    pub fn div_int(&self, k: i64) -> Result<Self> {
        match Self::exact_int(self.field.clone(), k, self.rel.max(1))? {
            None => Err(Error::DivisionByZeroAtPrecision(0)),
            Some(e) => self.div(&e),
        }
    }

    /// An integer represented with relative precision `rel` (it is exact, so
    /// its relative precision never limits the result).
    fn exact_int(field: Arc<PadicField>, k: i64, rel: u32) -> Result<Option<Self>> {
        if k == 0 {
            return Ok(None);
        }
        let v = vp_i64(k, field.p);
        let abs = v as i64 + rel as i64;
        Self::check_rel(&field, abs as u32)?;
        Ok(Some(Self::from_int(field, k, abs)?))
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let mut r = Self::from_int(self.field.clone(), 1, self.rel.max(1) as i64 + (self.val * e as i64).max(0))?;
        if self.rel == 0 {
            return self.clone().mul(&r).map(|z| {
                let abs = self.abs_precision().saturating_mul(e.max(1) as i64);
                Self::zero(z.field, abs.max(self.abs_precision()))
            });
        }
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(r)
    }

    /// Integer power, allowing negative exponents for nonzero elements.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inverse()?.pow(e.unsigned_abs())
        }
    }

    /// Reduce to absolute precision `abs` (never increases precision).
    pub fn with_precision(&self, abs: i64) -> Self {
        if abs >= self.abs_precision() {
            return self.clone();
        }
        if abs <= self.val {
            return Self::zero(self.field.clone(), abs);
        }
        let rel = (abs - self.val) as u32;
        let n = pow_u128(self.field.p, rel);
        let unit = self.unit.iter().map(|v| v % n).collect();
        PadicNumber { field: self.field.clone(), val: self.val, rel, unit }
    }

    /// True when `self - other` is zero at the smaller of the two precisions.
    pub fn equals(&self, other: &Self) -> bool {
        match self.sub(other) {
            Ok(d) => d.is_zero_at_precision(),
            Err(_) => false,
        }
    }

    /// Coordinates modulo p^abs of an integral element (val >= 0).
    pub fn residues(&self) -> Result<Vec<u128>> {
        if self.val < 0 {
            return Err(Error::InvalidInput("element is not integral".into()));
        }
        let abs = self.abs_precision();
        Ok(self.coeffs_at(0, abs))
    }

    /// For base-field integral elements, the residue modulo p^abs as an integer.
    pub fn residue(&self) -> Result<u128> {
        Ok(self.residues()?[0])
    }

    /// Base-p digit vectors of the unit part, least significant first.
    pub fn digits(&self) -> Vec<Vec<u64>> {
        let p = self.field.p as u128;
        let mut cur = self.unit.clone();
        let mut out = Vec::with_capacity(self.rel as usize);
        for _ in 0..self.rel {
            out.push(cur.iter().map(|v| (v % p) as u64).collect());
            for v in cur.iter_mut() {
                *v /= p;
            }
        }
        out
    }

    /// Teichmüller representative: the root of unity congruent to self mod p.
    pub fn teichmuller(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let q = self.field.residue_size();
        let mut x = self.clone();
        for _ in 0..self.rel {
            x = x.pow(q as u64)?;
        }
        Ok(x)
    }

    /// p-adic logarithm. With `one_unit` unset the input is first divided by
    /// its Teichmüller representative.
    pub fn plog(&self, one_unit: bool) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::ConvergenceDomainViolated("log needs a unit".into()));
        }
        let u = if one_unit { self.clone() } else { self.div(&self.teichmuller()?)? };
        let one = Self::from_int(u.field.clone(), 1, u.abs_precision())?;
        let y = u.sub(&one)?;
        if y.is_zero_at_precision() {
            return Ok(y);
        }
        if y.val < 1 {
            return Err(Error::ConvergenceDomainViolated("log needs u = 1 mod p".into()));
        }
        let abs = u.abs_precision();
        let p = self.field.p;
        let mut sum = Self::zero(u.field.clone(), abs);
        let mut ypow = y.clone();
        let mut k: i64 = 1;
        loop {
            let vk = vp_i64(k, p) as i64;
            if k * y.val - vk >= abs {
                // later terms have even larger valuation once k*v - log_p(k) grows
                if k > 2 * abs + 4 {
                    break;
                }
            } else {
                let term = ypow.div_int(k)?;
                sum = if k % 2 == 1 { sum.add(&term)? } else { sum.sub(&term)? };
            }
            ypow = ypow.mul(&y)?;
            k += 1;
        }
        Ok(sum.with_precision(abs))
    }

    /// p-adic exponential, defined for valuation >= 1 (>= 2 when p = 2).
    pub fn pexp(&self) -> Result<Self> {
        let p = self.field.p;
        let need = if p == 2 { 2 } else { 1 };
        let abs = self.abs_precision();
        if !self.is_zero_at_precision() && self.val < need {
            return Err(Error::ConvergenceDomainViolated(format!(
                "exp needs valuation >= {need}, got {}",
                self.val
            )));
        }
        let mut sum = Self::from_int(self.field.clone(), 1, abs)?;
        if self.is_zero_at_precision() {
            return Ok(sum);
        }
        let mut term = sum.clone();
        let mut vfact: i64 = 0;
        let mut k: i64 = 1;
        loop {
            vfact += vp_i64(k, p) as i64;
            term = term.mul(self)?.div_int(k)?;
            if k * self.val - vfact < abs {
                sum = sum.add(&term)?;
            } else if k > 2 * abs + 4 {
                break;
            }
            k += 1;
        }
        Ok(sum.with_precision(abs))
    }

    /// Newton lift of a simple root of an integer polynomial (low degree first),
    /// starting from `approx` which must be a root modulo p.
    pub fn hensel_root(poly: &[i64], approx: &Self, abs_prec: i64) -> Result<Self> {
        let field = approx.field.clone();
        let eval = |x: &Self, cs: &[i64]| -> Result<Self> {
            let mut acc = Self::zero(field.clone(), abs_prec);
            for &c in cs.iter().rev() {
                acc = acc.mul(x)?.add(&Self::from_int(field.clone(), c, abs_prec)?)?;
            }
            Ok(acc)
        };
        let deriv: Vec<i64> = poly.iter().enumerate().skip(1).map(|(i, &c)| c * i as i64).collect();
        let lift = |x: &Self| -> Result<Self> {
            let mut c = x.residues()?;
            let n = pow_u128(field.p, abs_prec as u32);
            for v in c.iter_mut() {
                *v %= n;
            }
            Ok(Self::normalize(field.clone(), 0, abs_prec as u32, c))
        };
        let mut x = lift(approx)?;
        for _ in 0..(abs_prec as u32).next_power_of_two().trailing_zeros() + 2 {
            let fx = eval(&x, poly)?;
            if fx.is_zero_at_precision() {
                break;
            }
            let dx = eval(&x, &deriv)?;
            if !dx.is_unit() {
                return Err(Error::InvalidInput("root is not simple".into()));
            }
            x = lift(&x.sub(&fx.div(&dx)?)?)?;
        }
        Ok(x)
    }

    /// All elements of the residue field as coefficient vectors (for small fields).
    pub fn residue_field_elements(field: &PadicField) -> Vec<Vec<i64>> {
        let q = field.residue_size();
        (0..q)
            .map(|mut t| {
                (0..field.degree)
                    .map(|_| {
                        let d = (t % field.p as u128) as i64;
                        t /= field.p as u128;
                        d
                    })
                    .collect()
            })
            .collect()
    }

    /// Primitive m-th root of unity for m dividing q - 1.
    pub fn root_of_unity(field: Arc<PadicField>, m: u64, abs_prec: i64) -> Result<Self> {
        let q1 = field.residue_size() - 1;
        if m == 0 || q1 % m as u128 != 0 {
            return Err(Error::InvalidInput(format!("{m} does not divide q-1 = {q1}")));
        }
        let g: Vec<i64> = field.generator.iter().map(|&v| v as i64).collect();
        let g = Self::from_coeffs(field.clone(), &g, abs_prec)?;
        g.teichmuller()?.pow((q1 / m as u128) as u64)
    }

    /// Digit string `p^v * (d_0 + d_1*p + ...) + O(p^N)`.
    pub fn to_digit_string(&self) -> String {
        let p = self.field.p;
        let n = self.abs_precision();
        if self.rel == 0 {
            return format!("0 + O({p}^{n})");
        }
        let digit = |d: &Vec<u64>| -> String {
            if d.len() == 1 {
                format!("{}", d[0])
            } else {
                let parts: Vec<String> = d.iter().map(|v| format!("{v}")).collect();
                format!("[{}]", parts.join(","))
            }
        };
        let mut terms = Vec::new();
        for (k, d) in self.digits().iter().enumerate() {
            let s = digit(d);
            terms.push(match k {
                0 => s,
                1 => format!("{s}*{p}"),
                _ => format!("{s}*{p}^{k}"),
            });
        }
        format!("{p}^{} * ({}) + O({p}^{n})", self.val, terms.join(" + "))
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_digit_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_of_squares() {
        let f = PadicField::qp(5).unwrap();
        let a = PadicNumber::from_int(f.clone(), 6, 3).unwrap();
        let b = PadicNumber::from_int(f.clone(), -4, 3).unwrap();
        assert_eq!(a.mul(&b).unwrap().residue().unwrap(), 101);
    }

    #[test]
    fn half_mod_25() {
        let f = PadicField::qp(5).unwrap();
        let h = PadicNumber::from_rational(f, 1, 2, 2).unwrap();
        assert_eq!(h.residue().unwrap(), 13);
    }

    #[test]
    fn teichmuller_of_two() {
        let f = PadicField::qp(5).unwrap();
        let t = PadicNumber::from_int(f, 2, 2).unwrap().teichmuller().unwrap();
        assert_eq!(t.residue().unwrap(), 7);
    }

    #[test]
    fn log_exp_roundtrip() {
        let f = PadicField::qp(5).unwrap();
        let u = PadicNumber::from_int(f, 6, 4).unwrap();
        let back = u.plog(true).unwrap().pexp().unwrap();
        assert_eq!(back.residue().unwrap(), 6);
        assert_eq!(back.abs_precision(), 4);
    }

    #[test]
    fn negative_valuation_division() {
        let f = PadicField::qp(3).unwrap();
        let a = PadicNumber::from_int(f.clone(), 1, 5).unwrap();
        let b = PadicNumber::from_int(f, 9, 5).unwrap();
        let c = a.div(&b).unwrap();
        assert_eq!(c.valuation(), -2);
        assert_eq!(c.abs_precision(), 1);
    }

    #[test]
    fn digit_string() {
        let f = PadicField::qp(5).unwrap();
        let x = PadicNumber::from_int(f, 30, 4).unwrap();
        assert_eq!(x.to_digit_string(), "5^1 * (1 + 1*5 + 0*5^2) + O(5^4)");
    }

    #[test]
    fn quadratic_extension_is_field() {
        let f = PadicField::new(7, 2).unwrap();
        let q = f.residue_size();
        assert_eq!(q, 49);
        let x = PadicNumber::from_coeffs(f.clone(), &[3, 5], 6).unwrap();
        let y = x.inverse().unwrap();
        let one = PadicNumber::one(f, 6).unwrap();
        assert!(x.mul(&y).unwrap().equals(&one));
    }
}
