//! Imaginary quadratic fields of class number one and their elements.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};

/// Discriminants of the imaginary quadratic fields with class number one.
pub const CLASS_NUMBER_ONE: [i64; 9] = [-3, -4, -7, -8, -11, -19, -43, -67, -163];

/// L = Q(√d) with ring of integers Z[ω], ω = (t + √d)/2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImagQuadField {
    d: i64,
    /// Trace of ω.
    t: i64,
    /// Norm of ω.
    n: i64,
}

/// An element (a + bω)/den of L.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem {
    pub a: i128,
    pub b: i128,
    pub den: i128,
}

fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let squarefree = |m: i64| {
        let m = m.abs();
        let mut k = 2;
        while k * k <= m {
            if m % (k * k) == 0 {
                return false;
            }
            k += 1;
        }
        true
    };
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// Number of reduced primitive binary quadratic forms of discriminant d.
pub fn class_number(d: i64) -> i64 {
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            if a.gcd(&b.abs()).gcd(&c) != 1 {
                continue;
            }
            h += 1;
        }
        a += 1;
    }
    h
}

impl ImagQuadField {
    pub fn new(d: i64) -> Result<Self> {
        if !is_fundamental(d) {
            return Err(Error::UnsupportedField(d));
        }
        let h = class_number(d);
        if h != 1 {
            return Err(Error::UnsupportedClassNumber(h));
        }
        let (t, n) = if d.rem_euclid(4) == 1 { (1, (1 - d) / 4) } else { (0, -d / 4) };
        Ok(ImagQuadField { d, t, n })
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub fn omega_trace(&self) -> i64 {
        self.t
    }

    pub fn omega_norm(&self) -> i64 {
        self.n
    }

    pub fn int(&self, a: i128) -> Elem {
        Elem { a, b: 0, den: 1 }
    }

    pub fn elem(&self, a: i128, b: i128) -> Elem {
        Elem { a, b, den: 1 }
    }

    pub fn omega(&self) -> Elem {
        self.elem(0, 1)
    }

    /// √d = 2ω − t.
    pub fn sqrt_d(&self) -> Elem {
        self.elem(-(self.t as i128), 2)
    }

    /// The roots of unity in O_L, starting with 1 and listed as powers of a generator.
    pub fn units(&self) -> Vec<Elem> {
        let gen = match self.d {
            -4 => self.omega(),
            // ω = (1+√−3)/2 has order 6
            -3 => self.omega(),
            _ => self.int(-1),
        };
        let mut out = vec![self.int(1)];
        let mut u = gen;
        while u != self.int(1) {
            out.push(u);
            u = self.mul(&u, &gen);
        }
        out
    }

    pub fn unit_count(&self) -> usize {
        match self.d {
            -4 => 4,
            -3 => 6,
            _ => 2,
        }
    }

    pub fn normalize(&self, x: Elem) -> Elem {
        if x.a == 0 && x.b == 0 {
            return Elem { a: 0, b: 0, den: 1 };
        }
        let g = x.a.gcd(&x.b).gcd(&x.den);
        let s = if x.den < 0 { -1 } else { 1 };
        Elem { a: s * x.a / g, b: s * x.b / g, den: s * x.den / g }
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        self.normalize(Elem { a: x.a * y.den + y.a * x.den, b: x.b * y.den + y.b * x.den, den: x.den * y.den })
    }

    pub fn neg(&self, x: &Elem) -> Elem {
        Elem { a: -x.a, b: -x.b, den: x.den }
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let (t, n) = (self.t as i128, self.n as i128);
        // ω² = tω − n
        let bb = x.b * y.b;
        let a = x.a * y.a - n * bb;
        let b = x.a * y.b + x.b * y.a + t * bb;
        self.normalize(Elem { a, b, den: x.den * y.den })
    }

    pub fn scale(&self, x: &Elem, k: i128) -> Elem {
        self.normalize(Elem { a: x.a * k, b: x.b * k, den: x.den })
    }

    pub fn conj(&self, x: &Elem) -> Elem {
        Elem { a: x.a + self.t as i128 * x.b, b: -x.b, den: x.den }
    }

    /// Norm as a reduced fraction (num, den).
    pub fn norm(&self, x: &Elem) -> (i128, i128) {
        let (t, n) = (self.t as i128, self.n as i128);
        let num = x.a * x.a + t * x.a * x.b + n * x.b * x.b;
        let den = x.den * x.den;
        let g = num.gcd(&den);
        (num / g, den / g)
    }

    /// Norm of an integral element.
    pub fn norm_int(&self, x: &Elem) -> i128 {
        let (n, d) = self.norm(x);
        debug_assert_eq!(d, 1);
        n / d
    }

    pub fn trace(&self, x: &Elem) -> (i128, i128) {
        let num = 2 * x.a + self.t as i128 * x.b;
        let g = num.gcd(&x.den);
        (num / g, x.den / g)
    }

    pub fn is_zero(&self, x: &Elem) -> bool {
        x.a == 0 && x.b == 0
    }

    pub fn is_integral(&self, x: &Elem) -> bool {
        self.normalize(*x).den == 1
    }

    pub fn inv(&self, x: &Elem) -> Result<Elem> {
        if self.is_zero(x) {
            return Err(Error::DivisionByZeroAtPrecision(0));
        }
        let (nn, nd) = self.norm(x);
        let c = self.conj(x);
        // 1/x = conj(x)/N(x)
        Ok(self.normalize(Elem { a: c.a * nd, b: c.b * nd, den: c.den * nn }))
    }

    pub fn div(&self, x: &Elem, y: &Elem) -> Result<Elem> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &Elem, e: i64) -> Result<Elem> {
        let base = if e < 0 { self.inv(x)? } else { *x };
        let mut r = self.int(1);
        for _ in 0..e.unsigned_abs() {
            r = self.mul(&r, &base);
        }
        Ok(r)
    }

    /// Is x/y in O_L?
    pub fn divides(&self, y: &Elem, x: &Elem) -> bool {
        match self.div(x, y) {
            Ok(q) => self.is_integral(&q),
            Err(_) => false,
        }
    }

    /// Conductor k of the cyclotomic field Q(ζ_k) used to hold L exactly.
    pub fn cyclo_conductor(&self) -> u64 {
        self.d.unsigned_abs()
    }

    /// √d as an element of Q(ζ_|d|), on the principal branch i√|d|.
    pub fn sqrt_d_cyclo(&self) -> Cyclo {
        let k = self.cyclo_conductor();
        match self.d {
            -4 => Cyclo::root(4, 1).mul_int(&BigInt::from(2)),
            -8 => Cyclo::root(8, 1).add(&Cyclo::root(8, 3)).mul_int(&BigInt::from(2)),
            -3 => Cyclo::one(3).add(&Cyclo::root(3, 1).mul_int(&BigInt::from(2))),
            _ => {
                // quadratic Gauss sum Σ (a/q) ζ_q^a = i√q for prime q ≡ 3 mod 4
                let q = k as i64;
                let mut g = Cyclo::zero(k);
                for a in 1..q {
                    let leg = legendre(a, q);
                    g = g.add(&Cyclo::root(k, a).mul_int(&BigInt::from(leg)));
                }
                g
            }
        }
    }

    /// Exact image of x in Q(ζ_|d|) under the principal complex embedding.
    pub fn to_cyclo(&self, x: &Elem) -> Cyclo {
        let k = self.cyclo_conductor();
        // x = (a + b(t + √d)/2)/den
        let rational = Cyclo::from_rational(k, (2 * x.a + self.t as i128 * x.b) as i64, 1);
        let s = self.sqrt_d_cyclo().mul_int(&BigInt::from(x.b));
        rational.add(&s).div_int(&BigInt::from(2 * x.den))
    }

    /// Double-precision image under the principal complex embedding.
    pub fn to_c64(&self, x: &Elem) -> (f64, f64) {
        let s = libm_sqrt((-self.d) as f64);
        let re = (x.a as f64 + x.b as f64 * self.t as f64 / 2.0) / x.den as f64;
        let im = x.b as f64 * s / 2.0 / x.den as f64;
        (re, im)
    }

    /// Elements of norm exactly m (m > 0), each listed once.
    pub fn elements_of_norm(&self, m: i128) -> Vec<Elem> {
        let (t, n) = (self.t as i128, self.n as i128);
        let mut out = Vec::new();
        // 4N = (2a + tb)² + |d| b²
        let dd = (-self.d) as i128;
        let bmax = isqrt(4 * m / dd) + 1;
        for b in -bmax..=bmax {
            let rest = 4 * m - dd * b * b;
            if rest < 0 {
                continue;
            }
            let s = isqrt(rest);
            for u in [s, -s] {
                if u * u != rest || (u == -s && s == 0) {
                    continue;
                }
                let twoa = u - t * b;
                if twoa % 2 == 0 {
                    let a = twoa / 2;
                    if a * a + t * a * b + n * b * b == m {
                        out.push(self.elem(a, b));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn format_elem(&self, x: &Elem) -> alloc::string::String {
        let w = if self.d == -4 { "i" } else { "w" };
        let core = match (x.a, x.b) {
            (a, 0) => format!("{a}"),
            (0, b) => format!("{b}{w}"),
            (a, b) if b < 0 => format!("{a}-{}{w}", -b),
            (a, b) => format!("{a}+{b}{w}"),
        };
        if x.den == 1 {
            core
        } else {
            format!("({core})/{}", x.den)
        }
    }
}

pub fn isqrt(n: i128) -> i128 {
    if n < 0 {
        return -1;
    }
    let mut x = libm_sqrt(n as f64) as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn libm_sqrt(x: f64) -> f64 {
    num_traits::Float::sqrt(x)
}

/// Legendre symbol (a/q) for an odd prime q.
pub fn legendre(a: i64, q: i64) -> i64 {
    let a = a.rem_euclid(q);
    if a == 0 {
        return 0;
    }
    let mut r = 1i128;
    let mut b = a as i128;
    let mut e = (q - 1) / 2;
    let m = q as i128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}+{}w", self.a, self.b)
        } else {
            write!(f, "({}+{}w)/{}", self.a, self.b, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_numbers() {
        for d in CLASS_NUMBER_ONE {
            assert_eq!(class_number(d), 1, "{d}");
        }
        assert_eq!(class_number(-15), 2);
        assert_eq!(class_number(-20), 2);
        assert_eq!(ImagQuadField::new(-15).unwrap_err(), Error::UnsupportedClassNumber(2));
    }

    #[test]
    fn sqrt_d_squares_to_d() {
        for d in [-3, -4, -7, -8, -11, -19] {
            let k = ImagQuadField::new(d).unwrap();
            let s = k.sqrt_d_cyclo();
            assert!(s.mul(&s).equals(&Cyclo::from_int(1, d)), "{d}");
            let (_, im) = s.to_f64();
            assert!(im > 0.0);
        }
    }

    #[test]
    fn units_of_eisenstein_integers() {
        let k = ImagQuadField::new(-3).unwrap();
        let u = k.units();
        assert_eq!(u.len(), 6);
        for x in &u {
            assert_eq!(k.norm(x), (1, 1));
        }
    }

    #[test]
    fn norm_one_plus_i() {
        let k = ImagQuadField::new(-4).unwrap();
        assert_eq!(k.norm(&k.elem(1, 1)), (2, 1));
        assert_eq!(k.elements_of_norm(5).len(), 8);
    }
}
