//! Complex periods Ω of fixed CM models y² = 4x³ − g2·x − g3, chosen so that
//! the period lattice is Ω·O_L.

use alloc::string::String;

use num_bigint::BigInt;

use super::mp::{agm, agm_complex, csqrt, cubic_roots, pi, Ball, CBall};
use crate::error::{Error, Result};
use crate::hecke_field::ImagQuadField;

/// One row of the model table.
#[derive(Debug, Clone, Copy)]
pub struct CmModel {
    pub d: i64,
    pub id: &'static str,
    /// g2 and g3 as fractions.
    pub g2: (i64, i64),
    pub g3: (i64, i64),
    /// Ω = w/√κ with w the real period (κ = 1 means Ω = w).
    pub kappa: i64,
    pub provenance: &'static str,
}

pub const MODELS: [CmModel; 5] = [
    CmModel { d: -4, id: "lemniscatic", g2: (4, 1), g3: (0, 1), kappa: 1, provenance: "y^2 = 4x^3 - 4x" },
    CmModel { d: -3, id: "equianharmonic", g2: (0, 1), g3: (4, 1), kappa: 1, provenance: "y^2 = 4x^3 - 4" },
    CmModel { d: -7, id: "c4=105,c6=1323", g2: (105, 12), g3: (1323, 216), kappa: 1, provenance: "y^2 + xy = x^3 - x^2 - 2x - 1" },
    CmModel { d: -8, id: "c4=160,c6=-1792", g2: (160, 12), g3: (-1792, 216), kappa: -2, provenance: "y^2 = x^3 + 4x^2 + 2x" },
    CmModel { d: -11, id: "c4=352,c6=-6776", g2: (352, 12), g3: (-6776, 216), kappa: -11, provenance: "y^2 + y = x^3 - x^2 - 7x + 10" },
];

/// Ω with its model; the Ω_p of the p-adic side is only a label here.
#[derive(Debug, Clone)]
pub struct PeriodData {
    pub d: i64,
    pub model_id: String,
    pub provenance: String,
    pub omega: CBall,
    /// Name of the p-adic period this Ω pairs with; never evaluated.
    pub omega_p_token: String,
}

pub fn model(field: &ImagQuadField) -> Result<CmModel> {
    let d = field.discriminant();
    MODELS.iter().copied().find(|m| m.d == d).ok_or(Error::UnsupportedField(d))
}

/// Ω for the built-in model of `field` at `prec` bits.
pub fn period_omega(field: &ImagQuadField, prec: u32) -> Result<PeriodData> {
    let m = model(field)?;
    let w = prec + 32;
    let ratio = |(n, d): (i64, i64)| Ball::from_ratio(w, &BigInt::from(n), &BigInt::from(d));
    let g2 = ratio(m.g2);
    let g3 = ratio(m.g3);
    let roots = cubic_roots(w, 4.0, &g2.neg(), &g3.neg())?;
    let is_real = |z: &CBall| z.im.to_f64().abs() <= z.im.rad + 1e-30;
    let mut real: alloc::vec::Vec<CBall> = roots.iter().filter(|z| is_real(z)).cloned().collect();
    real.sort_by(|a, b| b.re.cmp_mid(&a.re));
    let pi_w = pi(w);
    let wper = if real.len() == 3 {
        let (e1, e2, e3) = (&real[0].re, &real[1].re, &real[2].re);
        let a = e1.sub(e3).sqrt()?;
        let b = e1.sub(e2).sqrt()?;
        pi_w.div(&agm(&a, &b)?)?
    } else if real.len() == 1 {
        let e1 = CBall::real(real[0].re.clone());
        let cx: alloc::vec::Vec<&CBall> = roots.iter().filter(|z| !is_real(z)).collect();
        let a = csqrt(&e1.sub(cx[0]))?;
        let b = csqrt(&e1.sub(cx[1]))?;
        let g = agm_complex(&a, &b)?;
        // the mean of a conjugate pair is real
        pi_w.div(&g.re)?.with_radius(g.im.to_f64().abs() + g.im.rad)
    } else {
        return Err(Error::PrecisionInsufficient("could not separate the roots of the model".into()));
    };
    let omega = if m.kappa == 1 {
        CBall::real(wper)
    } else {
        let s = csqrt(&CBall::real(Ball::from_int(w, m.kappa)))?;
        CBall::real(wper).div(&s)?
    };
    Ok(PeriodData {
        d: m.d,
        model_id: m.id.into(),
        provenance: m.provenance.into(),
        omega: omega.at_precision(prec),
        omega_p_token: alloc::format!("Omega_p[{}]", m.id),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::lattice::Engine;
    use num_traits::Float;

    #[test]
    fn lemniscate_and_equianharmonic() {
        let k = ImagQuadField::new(-4).unwrap();
        let o = period_omega(&k, 128).unwrap();
        assert!((o.omega.re.to_f64() - 2.6220575542921198).abs() < 1e-15);
        let k = ImagQuadField::new(-3).unwrap();
        let o = period_omega(&k, 128).unwrap();
        assert!((o.omega.re.to_f64() - 2.4286506478875816).abs() < 1e-15);
    }

    #[test]
    fn models_have_lattice_omega_o() {
        // g2 = 60·G4(ΩO), g3 = 140·G6(ΩO)
        let e = Engine::new(128);
        for m in MODELS {
            let k = ImagQuadField::new(m.d).unwrap();
            let om = period_omega(&k, 128).unwrap().omega;
            let g4 = e.kronecker(&k, &k.int(1), &k.int(0), 4, 0).unwrap().value;
            let g6 = e.kronecker(&k, &k.int(1), &k.int(0), 6, 0).unwrap().value;
            let g2 = g4.mul_int(60).div(&om.powi(4).unwrap()).unwrap();
            let g3 = g6.mul_int(140).div(&om.powi(6).unwrap()).unwrap();
            let (a, b) = g2.to_c64();
            let (c, d) = g3.to_c64();
            let want2 = m.g2.0 as f64 / m.g2.1 as f64;
            let want3 = m.g3.0 as f64 / m.g3.1 as f64;
            assert!(Float::hypot(a - want2, b) < 1e-20 * (1.0 + want2.abs()), "d={} g2 {a} {b}", m.d);
            assert!(Float::hypot(c - want3, d) < 1e-20 * (1.0 + want3.abs()), "d={} g3 {c} {d}", m.d);
        }
    }
}
