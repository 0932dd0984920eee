//! The p-adic embedding ι_p, avatars of Hecke characters, their Teichmüller
//! splitting, and the CM-type analyticity condition W(Σ).

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::character::HeckeCharacter;
use super::field::{Elem, ImagQuadField};
use super::ideal::{splitting, Ideal, Splitting};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::cyclo::{gcd_u64, Cyclo};
use crate::error::{Error, Result};
use crate::fourier::analytic::{AnalyticityCondition, CharacterPoint};
use crate::padic::{PadicField, PadicNumber};

/// ι_p : L → Q_{p^f} (f = 1 split, f = 2 inert), extended to prime-to-p roots
/// of unity compatibly with ι_p on the units of L.
#[derive(Debug, Clone)]
pub struct PadicEmbedding {
    pub field: ImagQuadField,
    pub p: u64,
    pub padic: Arc<PadicField>,
    pub prec: i64,
    omega: PadicNumber,
    /// Primitive (q−1)-th root of unity θ, q = p^f.
    theta: PadicNumber,
}

fn lex_key(x: &PadicNumber) -> Vec<Vec<u64>> {
    x.digits()
}

impl PadicEmbedding {
    pub fn new(field: &ImagQuadField, p: u64, prec: i64) -> Result<Self> {
        Self::with_degree(field, p, prec, 1)
    }

    /// ι_p into Q_{p^f} with f the least multiple of both `min_degree` and
    /// the residue degree; a larger f makes room for more roots of unity.
    pub fn with_degree(field: &ImagQuadField, p: u64, prec: i64, min_degree: usize) -> Result<Self> {
        let natural = match splitting(field, p) {
            Splitting::Ramified => {
                return Err(Error::InvalidInput(format!("{p} ramifies in L; p must be unramified")))
            }
            Splitting::Split => 1,
            Splitting::Inert => 2,
        };
        let m = min_degree.max(1);
        let degree = m / (gcd_u64(m as u64, natural as u64) as usize) * natural;
        let padic = PadicField::new(p, degree)?;
        // ω² − tω + n = 0
        let poly = [field.omega_norm(), -field.omega_trace(), 1];
        let mut roots = Vec::new();
        for r in PadicNumber::residue_field_elements(&padic) {
            let x = PadicNumber::from_coeffs(padic.clone(), &r, 1)?;
            let fx = x.mul(&x)?.add(&x.mul_int(poly[1])?)?.add(&PadicNumber::from_int(padic.clone(), poly[0], 1)?)?;
            if fx.is_zero_at_precision() {
                roots.push(PadicNumber::hensel_root(&poly, &x, prec)?);
            }
        }
        let omega = roots
            .into_iter()
            .min_by_key(lex_key)
            .ok_or_else(|| Error::InvalidInput("no root of the minimal polynomial".into()))?;
        let q1 = (padic.residue_size() - 1) as u64;
        let w = field.unit_count() as u64;
        if q1 % w != 0 {
            return Err(Error::InvalidInput(format!("units of L do not embed in Q_{p}^{degree}")));
        }
        let mut emb = PadicEmbedding {
            field: field.clone(),
            p,
            padic: padic.clone(),
            prec,
            omega: omega.clone(),
            theta: PadicNumber::one(padic.clone(), prec)?,
        };
        // the unit generator listed second in `units()`
        let zeta_w = emb.elem(&field.units()[if w > 1 { 1 } else { 0 }])?;
        let base = PadicNumber::root_of_unity(padic.clone(), q1, prec)?;
        for j in 1..=q1 {
            if gcd_u64(j, q1) != 1 {
                continue;
            }
            let th = base.pow(j)?;
            if th.pow(q1 / w)?.equals(&zeta_w) {
                emb.theta = th;
                return Ok(emb);
            }
        }
        Err(Error::InvalidInput("no compatible root of unity".into()))
    }

    pub fn residue_degree(&self) -> usize {
        self.padic.degree()
    }

    pub fn omega(&self) -> &PadicNumber {
        &self.omega
    }

    /// ι_p of an element of L.
    pub fn elem(&self, x: &Elem) -> Result<PadicNumber> {
        let x = self.field.normalize(*x);
        let a = PadicNumber::from_int(self.padic.clone(), x.a as i64, self.prec)?;
        let b = PadicNumber::from_int(self.padic.clone(), x.b as i64, self.prec)?;
        a.add(&b.mul(&self.omega)?)?.div_int(x.den as i64)
    }

    /// ι_p(ζ_N^e) for N dividing q − 1.
    pub fn root_of_unity(&self, n: u64, e: i64) -> Result<PadicNumber> {
        let q1 = (self.padic.residue_size() - 1) as u64;
        let e = e.rem_euclid(n as i64) as u64;
        let g = gcd_u64(e, n);
        let (e, n) = (e / g.max(1), n / g.max(1));
        if e == 0 {
            return PadicNumber::one(self.padic.clone(), self.prec);
        }
        if q1 % n != 0 {
            return Err(Error::InvalidInput(format!(
                "root of unity of order {n} does not lie in the unramified extension of degree {}",
                self.padic.degree()
            )));
        }
        self.theta.pow((q1 / n) * e)
    }

    /// ι_p of an element of Q(ζ_k), k dividing q − 1 after reduction to the
    /// smallest conductor; ζ_k is sent to a power of θ, so the map agrees
    /// with ι_p on the roots of unity of L.
    pub fn cyclo(&self, c: &Cyclo) -> Result<PadicNumber> {
        let c = c.compact();
        let c = c.descend(c.minimal_conductor()).unwrap_or(c);
        let k = c.conductor();
        let (num, den) = c.raw();
        let vd = {
            let mut v = 0i64;
            let mut d = den.clone();
            let pb = BigInt::from(self.p);
            while (&d % &pb).is_zero() {
                d /= &pb;
                v += 1;
            }
            v
        };
        let work = self.prec + vd;
        let modulus = BigInt::from(self.p).pow(work as u32);
        let small = |x: &BigInt| -> Result<PadicNumber> {
            let r = x.mod_floor(&modulus).to_i64().ok_or_else(|| Error::InvalidInput("precision too large".into()))?;
            PadicNumber::from_int(self.padic.clone(), r, work)
        };
        let mut acc = PadicNumber::zero(self.padic.clone(), work);
        for (j, a) in num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            acc = acc.add(&small(a)?.mul(&self.root_of_unity(k, j as i64)?.with_precision(work))?)?;
        }
        let pv = BigInt::from(self.p).pow(vd as u32);
        let unit_den = small(&(den / &pv))?;
        let p_den = PadicNumber::from_int(self.padic.clone(), self.p as i64, work)?.pow(vd as u64)?;
        acc.div(&unit_den)?.div(&p_den)
    }

    /// ι_p(ε(x)) for x prime to the modulus of ε.
    pub fn epsilon(&self, chi: &HeckeCharacter, x: &Elem) -> Result<PadicNumber> {
        let x = self.field.normalize(*x);
        let num = Elem { den: 1, ..x };
        let mut acc = PadicNumber::one(self.padic.clone(), self.prec)?;
        for c in &chi.components {
            if c.is_trivial() {
                continue;
            }
            let e = c.log_value(&num)? as i64 - c.log_value(&self.field.int(x.den))? as i64;
            acc = acc.mul(&self.root_of_unity(c.group_order(), e)?)?;
        }
        Ok(acc)
    }

    /// The avatar on (ξ): ι_p(ε(ξ))·ι_p(ξ)^{−α}.
    pub fn avatar_element(&self, chi: &HeckeCharacter, xi: &Elem) -> Result<PadicNumber> {
        let e = self.epsilon(chi, xi)?;
        let x = self.elem(xi)?;
        if !x.is_unit() {
            return Err(Error::InvalidInput("avatar needs an ideal prime to p".into()));
        }
        e.mul(&x.powi(-(chi.alpha as i64))?)
    }

    pub fn avatar(&self, chi: &HeckeCharacter, a: &Ideal) -> Result<PadicNumber> {
        self.avatar_element(chi, &a.generator())
    }

    /// (ω_χ(a), ⟨χ⟩(a)) with ω_χ the Teichmüller projection of the avatar.
    pub fn teichmuller_twist(&self, chi: &HeckeCharacter, a: &Ideal) -> Result<(PadicNumber, PadicNumber)> {
        let v = self.avatar(chi, a)?;
        let w = v.teichmuller()?;
        let one_unit = v.div(&w)?;
        Ok((w, one_unit))
    }

    /// W(Σ): the line through (1, ι_p(ω)) in Hom(O⊗Zp, Q_{p^f}).
    pub fn w_sigma(&self) -> Result<AnalyticityCondition> {
        let one = PadicNumber::one(self.padic.clone(), self.prec)?;
        AnalyticityCondition::new(alloc::vec![alloc::vec![one, self.omega.clone()]], Some(String::from("Sigma=id")))
    }

    /// s ↦ exp(c·ι_p(s)) on T = O⊗Zp, the additive model of z ↦ z^{−α} near 1
    /// with c = −α·p (so that the exponentials converge).
    pub fn sigma_avatar_point(&self, alpha: u32) -> Result<CharacterPoint> {
        let scale = if self.p == 2 { 4 } else { self.p as i64 };
        let c = PadicNumber::from_int(self.padic.clone(), -(alpha as i64) * scale, self.prec)?;
        let z1 = c.pexp()?;
        let z2 = c.mul(&self.omega)?.pexp()?;
        CharacterPoint::from_terms(alloc::vec![(alloc::vec![1, 0], z1), (alloc::vec![0, 1], z2)])
    }

    /// s ↦ (1+p)^{−Tr(s)}, the inverse-norm direction.
    pub fn norm_inverse_point(&self) -> Result<CharacterPoint> {
        let base = if self.p == 2 { 5 } else { 1 + self.p as i64 };
        let z = PadicNumber::from_int(self.padic.clone(), base, self.prec)?;
        let t = self.field.omega_trace();
        CharacterPoint::new(alloc::vec![-2, -t], z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::analytic::is_w_analytic;

    #[test]
    fn cyclo_embedding_extends_iota() {
        for (d, p) in [(-4, 5), (-4, 13), (-3, 7), (-4, 7)] {
            let k = ImagQuadField::new(d).unwrap();
            let e = PadicEmbedding::new(&k, p, 12).unwrap();
            for x in [k.elem(2, 1), k.elem(-3, 7), k.omega(), Elem { a: 3, b: 1, den: 5 }] {
                let via = e.cyclo(&k.to_cyclo(&x)).unwrap();
                assert!(via.equals(&e.elem(&x).unwrap()), "d={d} p={p} x={x}");
            }
        }
    }

    #[test]
    fn quadratic_extension_at_split_prime() {
        let k = ImagQuadField::new(-4).unwrap();
        let e1 = PadicEmbedding::new(&k, 5, 12).unwrap();
        let e2 = PadicEmbedding::with_degree(&k, 5, 12, 2).unwrap();
        assert_eq!(e2.residue_degree(), 2);
        let x = k.elem(2, 1);
        assert_eq!(e1.elem(&x).unwrap().valuation(), e2.elem(&x).unwrap().valuation());
        assert!(e2.cyclo(&k.to_cyclo(&x)).unwrap().equals(&e2.elem(&x).unwrap()));
        // (ζ12 + ζ12^{-1})² = 3
        let s3 = e2.cyclo(&Cyclo::root(12, 1).add(&Cyclo::root(12, -1))).unwrap();
        assert!(s3.mul(&s3).unwrap().equals(&PadicNumber::from_int(e2.padic.clone(), 3, 12).unwrap()));
    }

    #[test]
    fn omega_is_a_root() {
        for (d, p) in [(-4, 5), (-4, 7), (-3, 7), (-7, 11)] {
            let k = ImagQuadField::new(d).unwrap();
            let e = PadicEmbedding::new(&k, p, 10).map_err(|e| (d, p, e)).unwrap();
            let w = e.omega();
            let v = w
                .mul(w)
                .unwrap()
                .sub(&w.mul_int(k.omega_trace()).unwrap())
                .unwrap()
                .add(&PadicNumber::from_int(e.padic.clone(), k.omega_norm(), 10).unwrap())
                .unwrap();
            assert!(v.is_zero_at_precision(), "d={d} p={p}");
        }
    }

    #[test]
    fn units_match_roots_of_unity() {
        let k = ImagQuadField::new(-4).unwrap();
        let e = PadicEmbedding::new(&k, 5, 8).unwrap();
        assert!(e.root_of_unity(4, 1).unwrap().equals(&e.elem(&k.omega()).unwrap()));
    }

    #[test]
    fn classifier_contract() {
        for p in [5, 7] {
            let k = ImagQuadField::new(-4).unwrap();
            let e = PadicEmbedding::new(&k, p, 12).unwrap();
            let w = e.w_sigma().unwrap();
            assert!(is_w_analytic(&e.sigma_avatar_point(4).unwrap(), &w).unwrap());
            assert!(!is_w_analytic(&e.norm_inverse_point().unwrap(), &w).unwrap());
        }
    }
}
