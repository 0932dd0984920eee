//! Double-precision oracles, independent of the ball engine.
//!
//! `row_sum` evaluates Σ'_{λ ∈ z+gO} λ^{-α} row by row: each row
//! Σ_m (w+m)^{-α} is a q-series in e^{2πiw} (or a cotangent derivative when
//! the row is real), so the summation order and the truncation are both
//! different from the incomplete-gamma split.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::hecke_field::{Elem, ImagQuadField};

type C = (f64, f64);

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cpow(a: C, e: i32) -> C {
    let mut acc = (1.0, 0.0);
    let base = if e < 0 {
        let n = a.0 * a.0 + a.1 * a.1;
        (a.0 / n, -a.1 / n)
    } else {
        a
    };
    for _ in 0..e.unsigned_abs() {
        acc = cmul(acc, base);
    }
    acc
}

fn cexp(a: C) -> C {
    let r = Float::exp(a.0);
    (r * Float::cos(a.1), r * Float::sin(a.1))
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// ζ(s) for integer s ≥ 2.
pub fn zeta(s: u32) -> f64 {
    let n = 20_000u32;
    let sf = s as f64;
    let mut acc = 0.0;
    for k in (1..=n).rev() {
        acc += Float::powf(k as f64, -sf);
    }
    let nf = n as f64;
    acc + Float::powf(nf, 1.0 - sf) / (sf - 1.0) - 0.5 * Float::powf(nf, -sf) + sf / 12.0 * Float::powf(nf, -sf - 1.0)
}

/// Σ_m (x+m)^{-α} for real x ∉ Z via π^α P_{α−1}(cot πx), with a rounding
/// bound from the absolute polynomial and the conditioning of cot.
fn real_row(x: f64, alpha: u32) -> (f64, f64) {
    let pi = core::f64::consts::PI;
    let c = 1.0 / Float::tan(pi * x);
    // P_0(c) = c, P_{k+1}(c) = −(1 + c²)·P_k'(c)
    let mut p: alloc::vec::Vec<f64> = alloc::vec![0.0, 1.0];
    for _ in 0..alpha - 1 {
        let dp: alloc::vec::Vec<f64> = (1..p.len()).map(|j| j as f64 * p[j]).collect();
        let mut next = alloc::vec![0.0; dp.len() + 2];
        for (j, v) in dp.iter().enumerate() {
            next[j] -= v;
            next[j + 2] -= v;
        }
        p = next;
    }
    let val = p.iter().rev().fold(0.0, |acc, v| acc * c + v);
    let ac = c.abs();
    let mag = p.iter().rev().fold(0.0, |acc, v| acc * ac + v.abs());
    let dmag = (1..p.len()).rev().fold(0.0, |acc, j| acc * ac + j as f64 * p[j].abs());
    // cot πx carries about (1 + c²)(1 + π|x|) ulps
    let dc = f64::EPSILON * (1.0 + c * c) * (1.0 + pi * x.abs()) * 4.0;
    let scale = Float::powi(pi, alpha as i32) / factorial(alpha - 1);
    let sign = if (alpha - 1) % 2 == 0 { 1.0 } else { -1.0 };
    let round = scale * (4.0 * (p.len() as f64) * f64::EPSILON * mag + dmag * dc);
    (sign * scale * val, round)
}

/// (value, truncation bound, rounding bound) of Σ_m (w+m)^{-α} with Im w ≠ 0.
fn q_row(w: C, alpha: u32) -> (C, f64, f64) {
    let pi = core::f64::consts::PI;
    let y = w.1.abs();
    let tau = 2.0 * pi;
    // q-series in e^{±2πiw}
    let (q, pref) = if w.1 > 0.0 {
        (cexp((-tau * w.1, tau * w.0)), cpow((0.0, -tau), alpha as i32))
    } else {
        (cexp((tau * w.1, -tau * w.0)), cpow((0.0, tau), alpha as i32))
    };
    let qa = Float::exp(-tau * y);
    let mut acc = (0.0, 0.0);
    // Σ k^{α−1}·|q^k|·(k + |2πw|): q^k is a k-fold product of a value whose
    // phase carries about |2πw| ulps
    let mut mag = 0.0;
    let wphase = tau * Float::hypot(w.0, w.1);
    let mut qk = (1.0, 0.0);
    let mut k = 1u32;
    let af = alpha as f64;
    loop {
        qk = cmul(qk, q);
        let kf = k as f64;
        let c = Float::powf(kf, af - 1.0);
        acc = (acc.0 + c * qk.0, acc.1 + c * qk.1);
        mag += c * Float::hypot(qk.0, qk.1) * (kf * (1.0 + wphase) + 2.0);
        let next = Float::powf(kf + 1.0, af - 1.0) * Float::powf(qa, kf + 1.0);
        if next < 1e-30 || k > 100_000 {
            // remainder ≤ next/(1 − ratio) once the ratio is below 1
            let ratio = Float::powf((kf + 2.0) / (kf + 1.0), af - 1.0) * qa;
            let rem = if ratio < 1.0 { next / (1.0 - ratio) } else { f64::INFINITY };
            let scale = Float::powf(tau, af) / factorial(alpha - 1);
            let v = cmul(pref, acc);
            let v = (v.0 / factorial(alpha - 1), v.1 / factorial(alpha - 1));
            return (v, scale * rem, 4.0 * f64::EPSILON * scale * mag);
        }
        k += 1;
    }
}

/// Σ'_{λ ∈ z + gO} λ^{-α} for α ≥ 3, with an error bound. Rounding is
/// bounded per row from the absolute size of its terms.
pub fn row_sum(field: &ImagQuadField, g: &Elem, z: &Elem, alpha: u32) -> Result<(C, f64)> {
    if alpha < 3 {
        return Err(Error::ConvergenceNotGuaranteed("row oracle needs α ≥ 3".into()));
    }
    let w = field.normalize(field.div(z, g)?);
    let (w1, w2) = (w.a as f64 / w.den as f64, w.b as f64 / w.den as f64);
    let om = field.to_c64(&field.omega());
    let pi = core::f64::consts::PI;
    let mut total = (0.0, 0.0);
    let mut err = 0.0;
    let mut abs_sum = 0.0;
    let mut row_round = 0.0;
    // rows with ω-coordinate v = w2 + n
    let n0 = -Float::round(w2) as i64;
    let mut step = 0i64;
    loop {
        let mut done = true;
        for n in [n0 + step, n0 - step - 1] {
            let v = w2 + n as f64;
            let base = (w1 + v * om.0, v * om.1);
            let (val, e, r) = if v == 0.0 {
                let frac = w1 - Float::floor(w1);
                if frac == 0.0 {
                    let z2 = if alpha % 2 == 0 { 2.0 * zeta(alpha) } else { 0.0 };
                    ((z2, 0.0), 1e-15 * z2, 0.0)
                } else {
                    let (x, r) = real_row(w1, alpha);
                    ((x, 0.0), 0.0, r)
                }
            } else {
                q_row(base, alpha)
            };
            total = (total.0 + val.0, total.1 + val.1);
            err += e;
            row_round += r;
            abs_sum += Float::hypot(val.0, val.1);
            // bound for this row and all further rows on this side
            let y = (v * om.1).abs();
            let qa = Float::exp(-2.0 * pi * y);
            let row_bound = Float::powf(2.0 * pi, alpha as f64) / factorial(alpha - 1) * qa / Float::powi(1.0 - qa, alpha as i32);
            if row_bound > 1e-22 {
                done = false;
            }
        }
        if done {
            // remaining rows on both sides: geometric in the row index
            let y = ((w2 + (n0 + step) as f64).abs().min((w2 + (n0 - step - 1) as f64).abs()) + 1.0) * om.1;
            let qa = Float::exp(-2.0 * pi * y);
            let qstep = Float::exp(-2.0 * pi * om.1);
            let one = Float::powf(2.0 * pi, alpha as f64) / factorial(alpha - 1) * qa / Float::powi(1.0 - qa, alpha as i32);
            err += 2.0 * one / (1.0 - qstep);
            break;
        }
        step += 1;
    }
    let gc = field.to_c64(g);
    let ginv = cpow(gc, -(alpha as i32));
    let v = cmul(total, ginv);
    let scale = Float::powf(Float::hypot(gc.0, gc.1), -(alpha as f64));
    let rounding = (row_round + 8.0 * f64::EPSILON * (abs_sum + 1.0)) * scale;
    Ok((v, err * scale + rounding))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_g4() {
        let k = ImagQuadField::new(-4).unwrap();
        let (v, e) = row_sum(&k, &k.int(1), &k.int(0), 4).unwrap();
        // ϖ⁴/15
        assert!((v.0 - 3.151212002153897538).abs() < 1e-13 + e, "{v:?}");
        assert!(v.1.abs() < 1e-13);
    }

    #[test]
    fn real_row_matches_direct() {
        let direct: f64 = (-200_000i64..=200_000).map(|m| Float::powi(0.3 + m as f64, -3)).sum();
        assert!((real_row(0.3, 3).0 - direct).abs() < 1e-9);
    }
}
