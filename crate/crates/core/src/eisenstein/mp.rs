//! Fixed-point multiprecision balls: a midpoint m·2^{-prec} with an absolute
//! radius, and complex balls built from them.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};

const GUARD: u32 = 64;

/// Round-up helper for radii.
fn up(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE
    }
}

fn ulp(prec: u32) -> f64 {
    Float::powi(2.0f64, -(prec as i32))
}

fn big_to_f64(m: &BigInt, prec: u32) -> f64 {
    let bits = m.bits();
    if bits <= 1000 {
        return m.to_f64().unwrap_or(0.0) * ulp(prec);
    }
    let shift = bits - 900;
    (m >> shift).to_f64().unwrap_or(0.0) * Float::powi(2.0f64, shift as i32 - prec as i32)
}

fn shift_round(m: BigInt, by: u32) -> BigInt {
    if by == 0 {
        return m;
    }
    let half = BigInt::one() << (by - 1);
    (m + half) >> by
}

/// A real ball [mid ± rad].
#[derive(Clone, Debug)]
pub struct Ball {
    mid: BigInt,
    pub rad: f64,
    prec: u32,
}

impl Ball {
    pub fn zero(prec: u32) -> Self {
        Ball { mid: BigInt::zero(), rad: 0.0, prec }
    }

    pub fn from_int(prec: u32, n: i64) -> Self {
        Ball { mid: BigInt::from(n) << prec, rad: 0.0, prec }
    }

    pub fn from_bigint(prec: u32, n: &BigInt) -> Self {
        Ball { mid: n << prec, rad: 0.0, prec }
    }

    pub fn from_ratio(prec: u32, num: &BigInt, den: &BigInt) -> Self {
        let n = num << (prec + 1);
        let q = n.div_floor(den);
        Ball { mid: shift_round(q, 1), rad: ulp(prec), prec }
    }

    pub fn from_f64(prec: u32, x: f64) -> Self {
        // exact binary value of x
        if x == 0.0 {
            return Self::zero(prec);
        }
        let (mant, exp, sign) = Float::integer_decode(x);
        let mut m = BigInt::from(mant);
        let e = exp as i64 + prec as i64;
        m = if e >= 0 { m << e as u64 } else { shift_round(m, (-e) as u32) };
        if sign < 0 {
            m = -m;
        }
        Ball { mid: m, rad: if e >= 0 { 0.0 } else { ulp(prec) }, prec }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_radius(mut self, extra: f64) -> Self {
        self.rad = up(self.rad + extra);
        self
    }

    pub fn to_f64(&self) -> f64 {
        big_to_f64(&self.mid, self.prec)
    }

    pub fn abs_upper(&self) -> f64 {
        up(self.to_f64().abs() + self.rad)
    }

    pub fn mid_raw(&self) -> &BigInt {
        &self.mid
    }

    /// Midpoint truncated to an integer multiple of 2^{-bits}.
    pub fn mid_scaled(&self, bits: u32) -> BigInt {
        if bits >= self.prec {
            &self.mid << (bits - self.prec)
        } else {
            shift_round(self.mid.clone(), self.prec - bits)
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.prec, o.prec);
        Ball { mid: &self.mid + &o.mid, rad: up(self.rad + o.rad), prec: self.prec }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Ball { mid: &self.mid - &o.mid, rad: up(self.rad + o.rad), prec: self.prec }
    }

    pub fn neg(&self) -> Self {
        Ball { mid: -&self.mid, rad: self.rad, prec: self.prec }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mid = shift_round(&self.mid * &o.mid, self.prec);
        let a = self.to_f64().abs();
        let b = o.to_f64().abs();
        let rad = up(a * o.rad + b * self.rad + self.rad * o.rad + ulp(self.prec));
        Ball { mid, rad, prec: self.prec }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Ball { mid: &self.mid * k, rad: up(self.rad * (k.unsigned_abs() as f64)), prec: self.prec }
    }

    pub fn mul_bigint(&self, k: &BigInt) -> Self {
        let kf = crate::cyclo::bigint_to_f64(k).abs();
        Ball { mid: &self.mid * k, rad: up(self.rad * kf), prec: self.prec }
    }

    pub fn div_int(&self, k: i64) -> Self {
        let q = Integer::div_floor(&(&self.mid << 1u32), &BigInt::from(k));
        Ball { mid: shift_round(q, 1), rad: up(self.rad / k.unsigned_abs() as f64 + ulp(self.prec)), prec: self.prec }
    }

    pub fn div_bigint(&self, k: &BigInt) -> Self {
        let q = Integer::div_floor(&(&self.mid << 1u32), k);
        let kf = crate::cyclo::bigint_to_f64(k).abs();
        Ball { mid: shift_round(q, 1), rad: up(self.rad / kf + ulp(self.prec)), prec: self.prec }
    }

    pub fn contains_zero(&self) -> bool {
        self.to_f64().abs() <= self.rad
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        let b = o.to_f64().abs();
        if b <= o.rad {
            return Err(Error::PrecisionInsufficient("division by a ball containing zero".into()));
        }
        let q = (&self.mid << (self.prec + 1)).div_floor(&o.mid);
        let mid = shift_round(q, 1);
        let qv = self.to_f64().abs() / b;
        let rad = up((self.rad + qv * o.rad) / (b - o.rad) + ulp(self.prec));
        Ok(Ball { mid, rad, prec: self.prec })
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.mid.sign() == Sign::Minus {
            return Err(Error::InvalidInput("square root of a negative ball".into()));
        }
        let m = (&self.mid << self.prec).sqrt();
        let v = self.to_f64();
        let rad = if self.rad == 0.0 {
            ulp(self.prec) * 2.0
        } else if v > self.rad {
            up(self.rad / (2.0 * Float::sqrt(v - self.rad)) + 2.0 * ulp(self.prec))
        } else {
            up(Float::sqrt(self.rad) + 2.0 * ulp(self.prec))
        };
        Ok(Ball { mid: m, rad, prec: self.prec })
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Ball::from_int(self.prec, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Compare midpoints (for ordering, not certified).
    pub fn cmp_mid(&self, o: &Self) -> Ordering {
        self.mid.cmp(&o.mid)
    }

    pub fn at_precision(&self, prec: u32) -> Self {
        let mid = if prec >= self.prec {
            &self.mid << (prec - self.prec)
        } else {
            shift_round(self.mid.clone(), self.prec - prec)
        };
        let extra = if prec < self.prec { ulp(prec) } else { 0.0 };
        Ball { mid, rad: up(self.rad + extra), prec }
    }
}

/// π to `prec` bits (Machin's formula with guard bits).
pub fn pi(prec: u32) -> Ball {
    let w = prec + GUARD;
    let one = BigInt::one() << w;
    let arctan_inv = |k: i64| -> BigInt {
        let k2 = BigInt::from(k * k);
        let mut term = &one / k;
        let mut sum = term.clone();
        let mut n = 1i64;
        loop {
            term = &term / &k2;
            if term.is_zero() {
                break;
            }
            let t = &term / (2 * n + 1);
            if n % 2 == 1 {
                sum -= t;
            } else {
                sum += t;
            }
            n += 1;
        }
        sum
    };
    let v = arctan_inv(5) * 16 - arctan_inv(239) * 4;
    Ball { mid: shift_round(v, GUARD), rad: ulp(prec) * 2.0, prec }
}

/// exp of a point value x (midpoint only), at prec bits.
fn exp_mid(x: &BigInt, prec: u32) -> BigInt {
    let w = prec + GUARD;
    let mut xr = if w >= prec { x << (w - prec) } else { x.clone() };
    // halve until |x| < 1/2
    let mut k = 0u32;
    let half = BigInt::one() << (w - 1);
    while xr.abs() > half {
        xr = &xr >> 1;
        k += 1;
    }
    let one = BigInt::one() << w;
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut n = 1i64;
    loop {
        term = shift_round(&term * &xr, w) / n;
        if term.is_zero() {
            break;
        }
        sum += &term;
        n += 1;
    }
    for _ in 0..k {
        sum = shift_round(&sum * &sum, w);
    }
    shift_round(sum, GUARD)
}

impl Ball {
    /// e^x with the radius propagated through |d/dx e^x| = e^x.
    pub fn exp(&self) -> Result<Self> {
        let v = self.to_f64();
        if v > 600.0 {
            return Err(Error::PrecisionInsufficient("exp argument too large".into()));
        }
        if v < -(self.prec as f64) * 0.7 - 50.0 {
            let bound = Float::exp(v + self.rad);
            return Ok(Ball { mid: BigInt::zero(), rad: up(bound + ulp(self.prec)), prec: self.prec });
        }
        let mid = exp_mid(&self.mid, self.prec);
        let ev = Float::exp(v + self.rad);
        let rad = up(ev * Float::exp_m1(self.rad) + ev * ulp(self.prec) * 4.0 + 2.0 * ulp(self.prec));
        Ok(Ball { mid, rad, prec: self.prec })
    }
}

/// cos and sin of 2π·num/den, reduced exactly before evaluation.
pub fn cos_sin_2pi(prec: u32, num: &BigInt, den: &BigInt) -> (Ball, Ball) {
    let den_abs = den.abs();
    let mut r = num.mod_floor(&den_abs);
    if den.sign() == Sign::Minus {
        r = (&den_abs - r).mod_floor(&den_abs);
    }
    // exact quarter turns
    let four_r = &r * 4;
    let rem: BigInt = &four_r % &den_abs;
    if rem.is_zero() {
        let qb: BigInt = &four_r / &den_abs;
        let q = qb.to_i64().unwrap_or(0);
        let (c, s) = [(1, 0), (0, 1), (-1, 0), (0, -1)][q as usize % 4];
        return (Ball::from_int(prec, c), Ball::from_int(prec, s));
    }
    // θ = 2π r/den in (−π, π]
    if &r * 2 > den_abs {
        r -= &den_abs;
    }
    let w = prec + GUARD;
    let pi_w = pi(w);
    let scaled: BigInt = (pi_w.mid * (&r * 2u32)) << 1u32;
    let theta_mid = Integer::div_floor(&scaled, &den_abs);
    let theta = shift_round(theta_mid, 1);
    let one = BigInt::one() << w;
    let mut c = one.clone();
    let mut s = theta.clone();
    let t2 = shift_round(&theta * &theta, w);
    let mut term_c = one;
    let mut term_s = theta;
    let mut n = 1i64;
    loop {
        term_c = -shift_round(&term_c * &t2, w) / ((2 * n - 1) * (2 * n));
        term_s = -shift_round(&term_s * &t2, w) / ((2 * n) * (2 * n + 1));
        if term_c.is_zero() && term_s.is_zero() {
            break;
        }
        c += &term_c;
        s += &term_s;
        n += 1;
    }
    let rad = ulp(prec) * 2.0;
    (
        Ball { mid: shift_round(c, GUARD), rad, prec },
        Ball { mid: shift_round(s, GUARD), rad, prec },
    )
}

/// A complex ball, as a pair of real balls.
#[derive(Clone, Debug)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn zero(prec: u32) -> Self {
        CBall { re: Ball::zero(prec), im: Ball::zero(prec) }
    }

    pub fn one(prec: u32) -> Self {
        CBall { re: Ball::from_int(prec, 1), im: Ball::zero(prec) }
    }

    pub fn real(re: Ball) -> Self {
        let prec = re.prec;
        CBall { re, im: Ball::zero(prec) }
    }

    pub fn new(re: Ball, im: Ball) -> Self {
        CBall { re, im }
    }

    pub fn precision(&self) -> u32 {
        self.re.prec
    }

    pub fn add(&self, o: &Self) -> Self {
        CBall { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CBall { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Self {
        CBall { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        CBall { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        CBall {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, b: &Ball) -> Self {
        CBall { re: self.re.mul(b), im: self.im.mul(b) }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        CBall { re: self.re.mul_int(k), im: self.im.mul_int(k) }
    }

    pub fn div_int(&self, k: i64) -> Self {
        CBall { re: self.re.div_int(k), im: self.im.div_int(k) }
    }

    /// Multiply by i^k.
    pub fn mul_i_pow(&self, k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => CBall { re: self.im.neg(), im: self.re.clone() },
            2 => self.neg(),
            _ => CBall { re: self.im.clone(), im: self.re.neg() },
        }
    }

    pub fn norm_sq(&self) -> Ball {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sq();
        Ok(CBall { re: self.re.div(&n)?, im: self.im.neg().div(&n)? })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = CBall::one(self.precision());
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Upper bound on the radius of the ball in the sup norm of (re, im).
    pub fn rad(&self) -> f64 {
        up(self.re.rad.max(self.im.rad))
    }

    pub fn abs_upper(&self) -> f64 {
        let (a, b) = self.to_c64();
        up(Float::sqrt(a * a + b * b) + self.re.rad + self.im.rad)
    }

    pub fn with_radius(self, extra: f64) -> Self {
        CBall { re: self.re.with_radius(extra), im: self.im.with_radius(extra) }
    }

    pub fn at_precision(&self, prec: u32) -> Self {
        CBall { re: self.re.at_precision(prec), im: self.im.at_precision(prec) }
    }

    /// ζ_den^num.
    pub fn root_of_unity(prec: u32, num: i64, den: u64) -> Self {
        let (c, s) = cos_sin_2pi(prec, &BigInt::from(num), &BigInt::from(den));
        CBall { re: c, im: s }
    }
}

/// Numerical image of an exact cyclotomic number.
pub fn cyclo_to_cball(z: &Cyclo, prec: u32) -> CBall {
    let k = z.conductor();
    let (num, den) = z.raw();
    let mut acc = CBall::zero(prec);
    for (j, c) in num.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let r = CBall::root_of_unity(prec, j as i64, k);
        acc = acc.add(&r.scale(&Ball::from_ratio(prec, c, den)));
    }
    acc
}

/// Arithmetic-geometric mean of two positive balls.
pub fn agm(a: &Ball, b: &Ball) -> Result<Ball> {
    let prec = a.prec;
    let mut x = a.clone();
    let mut y = b.clone();
    for _ in 0..(2 * prec + 20) {
        let nx = x.add(&y).div_int(2);
        let ny = x.mul(&y).sqrt()?;
        let diff = nx.sub(&ny).to_f64().abs();
        x = nx;
        y = ny;
        if diff < ulp(prec) * 4.0 {
            // both lie within |x − y| of the limit
            return Ok(x.with_radius(diff + y.rad));
        }
    }
    Err(Error::PrecisionInsufficient("AGM did not converge".into()))
}

/// Complex AGM with the principal square root branch kept close to the
/// arithmetic mean.
pub fn agm_complex(a: &CBall, b: &CBall) -> Result<CBall> {
    let prec = a.precision();
    let mut x = a.clone();
    let mut y = b.clone();
    for _ in 0..(2 * prec + 20) {
        let nx = x.add(&y).div_int(2);
        let mut ny = csqrt(&x.mul(&y))?;
        let d1 = nx.sub(&ny).abs_upper();
        let d2 = nx.add(&ny).abs_upper();
        if d2 < d1 {
            ny = ny.neg();
        }
        let (dr, di) = nx.sub(&ny).to_c64();
        let diff = Float::hypot(dr, di);
        x = nx;
        y = ny;
        if diff < ulp(prec) * 8.0 {
            return Ok(x.with_radius(diff));
        }
    }
    Err(Error::PrecisionInsufficient("complex AGM did not converge".into()))
}

/// Principal square root of a complex ball.
pub fn csqrt(z: &CBall) -> Result<CBall> {
    let prec = z.precision();
    let r = z.norm_sq().sqrt()?;
    let (re, im) = z.to_c64();
    if re == 0.0 && im == 0.0 {
        return Ok(CBall::zero(prec).with_radius(Float::sqrt(z.rad()) * 2.0));
    }
    // sqrt((r + re)/2) + i·sign(im)·sqrt((r − re)/2)
    if re >= 0.0 {
        let a = r.add(&z.re).div_int(2).sqrt()?;
        let b = z.im.div(&a.mul_int(2))?;
        Ok(CBall { re: a, im: b })
    } else {
        let mut b = r.sub(&z.re).div_int(2).sqrt()?;
        if im < 0.0 {
            b = b.neg();
        }
        let a = z.im.div(&b.mul_int(2))?;
        Ok(CBall { re: a, im: b })
    }
}

/// Real roots of a monic-free cubic c3 x³ + c1 x + c0 and its complex pair,
/// polished by Newton at full precision from double-precision seeds.
pub fn cubic_roots(prec: u32, c3: f64, c1: &Ball, c0: &Ball) -> Result<Vec<CBall>> {
    let (c1f, c0f) = (c1.to_f64(), c0.to_f64());
    // Durand–Kerner in f64 for the seeds
    let mut roots = [(0.4f64, 0.9f64), (-0.65, 0.72), (0.1, -0.95)];
    for _ in 0..500 {
        let mut next = roots;
        for i in 0..3 {
            let (x, y) = roots[i];
            // p(z)/c3
            let (x2, y2) = (x * x - y * y, 2.0 * x * y);
            let (x3, y3) = (x2 * x - y2 * y, x2 * y + y2 * x);
            let pr = x3 + (c1f * x + c0f) / c3;
            let pi_ = y3 + c1f * y / c3;
            let mut dr = 1.0;
            let mut di = 0.0;
            for j in 0..3 {
                if i != j {
                    let (a, b) = (x - roots[j].0, y - roots[j].1);
                    let t = dr * a - di * b;
                    di = dr * b + di * a;
                    dr = t;
                }
            }
            let n = dr * dr + di * di;
            next[i] = (x - (pr * dr + pi_ * di) / n, y - (pi_ * dr - pr * di) / n);
        }
        roots = next;
    }
    let c3b = Ball::from_f64(prec, c3);
    let mut out = Vec::new();
    for (x, y) in roots {
        let y = if y.abs() < 1e-12 { 0.0 } else { y };
        let mut z = CBall::new(Ball::from_f64(prec, x), Ball::from_f64(prec, y));
        for _ in 0..(prec / 20 + 8) {
            let z2 = z.mul(&z);
            let f = z2.mul(&z).scale(&c3b).add(&z.scale(c1)).add(&CBall::real(c0.clone()));
            let df = z2.scale(&c3b).mul_int(3).add(&CBall::real(c1.clone()));
            let step = f.div(&df)?;
            // drop the radius growth of the iteration, the final bound is re-derived
            z = CBall::new(
                Ball { mid: step_mid(&z.re, &step.re), rad: 0.0, prec },
                Ball { mid: step_mid(&z.im, &step.im), rad: 0.0, prec },
            );
        }
        // certified radius: |f(z)|/|f'(z)| times 2 bounds the distance to the root
        let z2 = z.mul(&z);
        let f = z2.mul(&z).scale(&c3b).add(&z.scale(c1)).add(&CBall::real(c0.clone()));
        let df = z2.scale(&c3b).mul_int(3).add(&CBall::real(c1.clone()));
        let bound = 2.0 * f.abs_upper() / (df.abs_upper() - df.rad()).max(1e-300);
        out.push(z.with_radius(bound + 4.0 * ulp(prec)));
    }
    Ok(out)
}

fn step_mid(x: &Ball, s: &Ball) -> BigInt {
    &x.mid - &s.mid
}

impl core::fmt::Display for Ball {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{:e} +/- {:.1e}", self.to_f64(), self.rad)
    }
}

/// Decimal string of the midpoint with `digits` digits after the point.
pub fn decimal_string(x: &Ball, digits: usize) -> alloc::string::String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let v = shift_round(&x.mid * &scale, x.prec);
    let neg = v.sign() == Sign::Minus;
    let s = v.abs().to_str_radix(10);
    let s = if s.len() <= digits { alloc::format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
    let (int, frac) = s.split_at(s.len() - digits);
    alloc::format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = pi(200);
        assert!(decimal_string(&p, 40) == "3.1415926535897932384626433832795028841972");
    }

    #[test]
    fn exp_one() {
        let e = Ball::from_int(128, 1).exp().unwrap();
        assert!(decimal_string(&e, 30) == "2.718281828459045235360287471353");
        let small = Ball::from_int(128, -40).exp().unwrap();
        assert!((small.to_f64() - 4.248354255291589e-18).abs() < 1e-30);
    }

    #[test]
    fn roots_of_unity() {
        let (c, s) = cos_sin_2pi(128, &BigInt::from(1), &BigInt::from(6));
        assert!((c.to_f64() - 0.5).abs() < 1e-30);
        assert!((s.to_f64() - Float::sqrt(3.0f64) / 2.0).abs() < 1e-15);
        let z = CBall::root_of_unity(128, 1, 5).powi(5).unwrap();
        assert!(z.sub(&CBall::one(128)).abs_upper() < 1e-30);
    }

    #[test]
    fn lemniscate_agm() {
        let two = Ball::from_int(160, 2).sqrt().unwrap();
        let m = agm(&Ball::from_int(160, 1), &two).unwrap();
        let w = pi(160).div(&m).unwrap();
        assert!(decimal_string(&w, 25) == "2.6220575542921198104648396");
    }
}
