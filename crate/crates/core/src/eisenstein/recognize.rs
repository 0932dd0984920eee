//! Recognition of a numerical complex value as an element of Q(ζ_k) with
//! bounded denominator, by an integer relation found with integral LLL.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use super::mp::{cyclo_to_cball, CBall};
use crate::cyclo::{euler_phi, Cyclo};
use crate::error::{Error, Result};

/// LLL with δ = 3/4 on integer row vectors, in exact integer arithmetic
/// (Gram determinants d_i and scaled coefficients λ_ij). Rows must be linearly
/// independent.
pub fn lll(mut b: Vec<Vec<BigInt>>) -> Result<Vec<Vec<BigInt>>> {
    let n = b.len();
    if n < 2 {
        return Ok(b);
    }
    let dot = |x: &[BigInt], y: &[BigInt]| -> BigInt { x.iter().zip(y).map(|(a, c)| a * c).sum() };
    // 1-based indices; d[0] = 1
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    d[1] = dot(&b[0], &b[0]);
    let mut k = 2usize;
    let mut kmax = 1usize;

    fn red(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
        let two_l: BigInt = &lam[k][l] * 2;
        if two_l.abs() > d[l] {
            // q = nearest integer to λ_kl/d_l
            let num: BigInt = &lam[k][l] * 2 + &d[l];
            let den: BigInt = &d[l] * 2;
            let q = Integer::div_floor(&num, &den);
            let bl = b[l - 1].clone();
            for (x, y) in b[k - 1].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            let t = &q * &d[l];
            lam[k][l] -= t;
            for i in 1..l {
                let t = &q * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    }

    let mut guard = 0u64;
    while k <= n {
        guard += 1;
        if guard > 10_000_000 {
            return Err(Error::RecognitionFailed("LLL did not terminate".into()));
        }
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k - 1], &b[j - 1]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::RecognitionFailed("dependent basis".into()));
                    }
                    d[k] = u;
                }
            }
        }
        red(&mut b, &mut lam, &d, k, k - 1);
        let lhs: BigInt = &d[k] * &d[k - 2] * 4;
        let rhs: BigInt = &d[k - 1] * &d[k - 1] * 3 - &lam[k][k - 1] * &lam[k][k - 1] * 4;
        if lhs < rhs {
            // swap k and k−1
            b.swap(k - 1, k - 2);
            for j in 1..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let bb = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k];
            }
            d[k - 1] = bb;
            if k > 2 {
                k -= 1;
            }
        } else {
            for l in (1..k - 1).rev() {
                red(&mut b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    Ok(b)
}

/// z ≈ Σ_j (c_j/den)·ζ_k^j, j < φ(k), with den ≤ `bound`, verified to within
/// 10·`err` (plus the ball radius of the candidate).
pub fn recognize_algebraic(z: &CBall, err: f64, k: u64, bound: u64) -> Result<Cyclo> {
    let prec = z.precision();
    let (zr, zi) = z.to_c64();
    if Float::hypot(zr, zi) <= 10.0 * err {
        return Ok(Cyclo::zero(k));
    }
    let phi = euler_phi(k) as usize;
    let scale = Float::hypot(zr, zi).max(1.0);
    let known_bits = -Float::log2(err.max(Float::powi(2.0f64, -(prec as i32))) / scale);
    let lg = -Float::log2(err.max(Float::powi(2.0f64, -(prec as i32))));
    let bits = (lg - 8.0).max(20.0) as u32;
    let bits = bits.min(prec.saturating_sub(4));
    let mut vals: Vec<CBall> = vec![z.clone()];
    for j in 0..phi {
        vals.push(CBall::root_of_unity(prec, j as i64, k).neg());
    }
    let dim = phi + 1;
    let rows: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut r = vec![BigInt::zero(); dim];
            r[i] = BigInt::one();
            r.push(vals[i].re.mid_scaled(bits));
            r.push(vals[i].im.mid_scaled(bits));
            r
        })
        .collect();
    let red = lll(rows)?;
    for r in &red {
        let m0 = &r[0];
        if m0.is_zero() || m0.abs() > BigInt::from(bound) {
            continue;
        }
        let (m0, sign) = if m0.is_negative() { (-m0, -1) } else { (m0.clone(), 1) };
        let coords: Vec<BigInt> = r[1..dim].iter().map(|c| c * sign).collect();
        // a relation of height H among dim numbers appears by chance once
        // dim·log2(H) approaches the 2·(known bits) the data pins down
        let height = coords.iter().chain(core::iter::once(&m0)).map(|c| c.bits()).max().unwrap_or(0) as f64;
        if dim as f64 * height + 32.0 > 2.0 * known_bits {
            continue;
        }
        let cand = Cyclo::from_basis(k, &coords, m0);
        let cv = cyclo_to_cball(&cand, prec);
        let (dr, di) = cv.sub(z).to_c64();
        if Float::hypot(dr, di) <= 10.0 * err + cv.rad() * 2.0 {
            return Ok(reduce_den(cand));
        }
    }
    Err(Error::RecognitionFailed(alloc::format!("no relation in Q(ζ_{k}) with denominator ≤ {bound}")))
}

fn reduce_den(c: Cyclo) -> Cyclo {
    let (coords, den) = c.canonical();
    let mut g = den.clone();
    for x in &coords {
        g = g.gcd(x);
    }
    if g.is_one() || g.is_zero() {
        return c;
    }
    Cyclo::from_basis(c.conductor(), &coords.iter().map(|x| x / &g).collect::<Vec<_>>(), den / &g)
}

/// Try conductors in increasing order of φ(k); the first success wins.
pub fn recognize_any(z: &CBall, err: f64, kmax: u64, bound: u64) -> Result<(u64, Cyclo)> {
    let mut ks: Vec<u64> = (1..=kmax).filter(|k| k % 4 != 2).collect();
    ks.sort_by_key(|&k| (euler_phi(k), k));
    for k in ks {
        if let Ok(c) = recognize_algebraic(z, err, k, bound) {
            return Ok((k, c.compact()));
        }
    }
    Err(Error::RecognitionFailed(alloc::format!("no cyclotomic field of conductor ≤ {kmax} fits")))
}

/// Largest denominator of the canonical coordinates.
pub fn denominator(c: &Cyclo) -> u64 {
    let (_, d) = c.canonical();
    d.to_u64().unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::mp::Ball;

    #[test]
    fn half() {
        let z = CBall::real(Ball::from_ratio(128, &BigInt::from(1), &BigInt::from(2)));
        let c = recognize_algebraic(&z, 1e-20, 1, 10).unwrap();
        assert!(c.equals(&Cyclo::from_rational(1, 1, 2)));
    }

    #[test]
    fn zeta_three() {
        let z = CBall::root_of_unity(128, 1, 3);
        let c = recognize_algebraic(&z, 1e-30, 3, 10).unwrap();
        assert!(c.equals(&Cyclo::root(3, 1)));
    }

    #[test]
    fn mixed_element() {
        let want = Cyclo::from_basis(12, &[BigInt::from(7), BigInt::from(-3), BigInt::from(0), BigInt::from(11)], BigInt::from(4095));
        let z = cyclo_to_cball(&want, 160);
        let (k, c) = recognize_any(&z, 1e-40, 12, 1_000_000).unwrap();
        assert_eq!(k, 12);
        assert!(c.equals(&want));
    }
}
