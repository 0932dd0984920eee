//! E^{0,α}(f, s, Λ, Γ), partial and full Hecke L-values, and the smoothed
//! combination N𝔠·E(·, Λ) − E(·, 𝔠^{-1}Λ).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Float;

use super::lattice::{power_tail, Engine, LatticeC};
use super::mp::{cyclo_to_cball, Ball, CBall};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::fourier::TorsionFunction;
use crate::hecke_field::character::p_integral_numerator;
use crate::hecke_field::{Elem, HeckeCharacter, Ideal, ImagQuadField, RayClassData, UnitsMode};

/// A value with a certified absolute error.
#[derive(Debug, Clone)]
pub struct EisensteinValue {
    pub value: CBall,
    pub abs_error: f64,
    pub alpha: u32,
    pub s: u32,
    pub lattice: String,
    /// Largest |λ| summed directly (over all evaluations).
    pub radius: f64,
    pub points: usize,
}

impl EisensteinValue {
    pub fn zero(prec: u32, alpha: u32, s: u32, lattice: &str) -> Self {
        EisensteinValue { value: CBall::zero(prec), abs_error: 0.0, alpha, s, lattice: lattice.into(), radius: 0.0, points: 0 }
    }

    pub fn to_c64(&self) -> (f64, f64) {
        self.value.to_c64()
    }

    pub fn add(&self, o: &Self) -> Self {
        EisensteinValue {
            value: self.value.add(&o.value),
            abs_error: self.abs_error + o.abs_error,
            radius: self.radius.max(o.radius),
            points: self.points + o.points,
            ..self.clone()
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        EisensteinValue { value: self.value.neg(), ..self.clone() }
    }

    /// Multiply by a complex ball; the ball radius is folded into the error.
    pub fn mul_ball(&self, c: &CBall) -> Self {
        let v = self.value.mul(c);
        let err = self.abs_error * c.abs_upper() + v.rad();
        EisensteinValue { value: v, abs_error: err * (1.0 + 1e-12), ..self.clone() }
    }

    pub fn mul_cyclo(&self, c: &Cyclo) -> Self {
        self.mul_ball(&cyclo_to_cball(c, self.value.precision()))
    }

    pub fn mul_rational(&self, n: i128, d: i128) -> Self {
        let prec = self.value.precision();
        self.mul_ball(&CBall::real(Ball::from_ratio(prec, &BigInt::from(n), &BigInt::from(d))))
    }

    /// Total error: the bookkept bound plus the ball radius.
    pub fn error(&self) -> f64 {
        self.abs_error + self.value.rad()
    }
}

/// A finitely supported function on (Q⊗Λ)/Λ with exact values, points stored
/// by their canonical representatives mod Λ.
#[derive(Debug, Clone)]
pub struct LatticeFunction {
    pub lattice: LatticeC,
    pub values: BTreeMap<Elem, Cyclo>,
}

impl LatticeFunction {
    pub fn new(lattice: &LatticeC) -> Self {
        LatticeFunction { lattice: lattice.clone(), values: BTreeMap::new() }
    }

    pub fn add_point(&mut self, x: &Elem, v: &Cyclo) -> Result<()> {
        if v.is_zero() {
            return Ok(());
        }
        let r = self.lattice.reduce(x)?;
        let cur = self.values.remove(&r).unwrap_or_else(|| Cyclo::zero(1));
        let nv = cur.add(v).compact();
        if !nv.is_zero() {
            self.values.insert(r, nv);
        }
        Ok(())
    }

    pub fn get(&self, x: &Elem) -> Result<Cyclo> {
        let r = self.lattice.reduce(x)?;
        Ok(self.values.get(&r).cloned().unwrap_or_else(|| Cyclo::zero(1)))
    }

    /// δ_x.
    pub fn delta(lattice: &LatticeC, x: &Elem) -> Result<Self> {
        let mut f = Self::new(lattice);
        f.add_point(x, &Cyclo::one(1))?;
        Ok(f)
    }

    /// Transport a function on p^{-n}O/O (coordinates (a, b) ↦ (a + bω)/p^n)
    /// to p^{-n}Λ/Λ through O⊗Zp = Λ⊗Zp, then translate by `shift`
    /// (convolution with δ_shift).
    pub fn from_torsion(rho: &TorsionFunction, lattice: &LatticeC, shift: &Elem) -> Result<Self> {
        let field = &lattice.field;
        let p = rho.prime();
        let n = rho.level();
        let m = (p as i128).pow(n);
        let ginv = field.inv(&lattice.gen)?;
        let ginv_p = p_integral_numerator(field, p, n, &ginv)
            .map_err(|_| Error::CoprimalityViolation(format!("lattice {} is not prime to {p}", lattice.label())))?;
        let mut f = Self::new(lattice);
        for (s, v) in rho.iter() {
            if v.is_zero() {
                continue;
            }
            let a = field.elem(s[0] as i128, s[1] as i128);
            let mu = field.mul(&ginv_p, &a);
            let mu = field.elem(mu.a.rem_euclid(m), mu.b.rem_euclid(m));
            let pt = field.add(shift, &field.mul(&lattice.gen, &Elem { den: m, ..mu }));
            f.add_point(&pt, v)?;
        }
        Ok(f)
    }

    /// Is f(γx) = γ^α f(x) for every γ ∈ Γ?
    pub fn check_gamma(&self, alpha: u32) -> Result<()> {
        let field = &self.lattice.field;
        for g in &self.lattice.gamma {
            let ga = field.to_cyclo(&field.pow(g, alpha as i64)?);
            for (x, v) in &self.values {
                let lhs = self.get(&field.mul(g, x))?;
                if !lhs.equals(&v.mul(&ga)) {
                    return Err(Error::NotGammaInvariant);
                }
            }
        }
        Ok(())
    }
}

/// E^{0,α}(f, s, Λ, Γ) = Σ over Γ-orbits of f(λ)/(λ^α N(λ)^s), computed as
/// (1/|Γ|)·Σ_x f(x)·K_α(x, s, Λ) over the support of f.
pub fn eisenstein_series(engine: &Engine, f: &LatticeFunction, alpha: u32, s: u32) -> Result<EisensteinValue> {
    let lat = &f.lattice;
    let mut out = EisensteinValue::zero(engine.prec, alpha, s, &lat.label());
    if f.values.is_empty() {
        return Ok(out);
    }
    f.check_gamma(alpha)?;
    for (x, v) in &f.values {
        let k = engine.kronecker(&lat.field, &lat.gen, x, alpha, s)?;
        let err = k.tail;
        let val = EisensteinValue {
            value: k.value.clone(),
            abs_error: err,
            alpha,
            s,
            lattice: out.lattice.clone(),
            radius: k.radius,
            points: k.points,
        };
        out = out.add(&val.mul_cyclo(v));
    }
    Ok(out.mul_rational(1, lat.gamma.len() as i128))
}

/// lcm of two integral ideals.
pub fn ideal_lcm(field: &ImagQuadField, a: &Ideal, b: &Ideal) -> Ideal {
    let fa = a.factor(field);
    let fb = b.factor(field);
    let mut acc = Ideal::unit(field);
    let mut seen = Vec::new();
    for (p, _) in fa.iter().chain(fb.iter()) {
        if seen.contains(p) {
            continue;
        }
        seen.push(*p);
        let ea = fa.iter().find(|(q, _)| q == p).map(|x| x.1).unwrap_or(0);
        let eb = fb.iter().find(|(q, _)| q == p).map(|x| x.1).unwrap_or(0);
        acc = acc.mul(field, &p.ideal.pow(field, ea.max(eb)));
    }
    acc
}

/// The modulus used for L_𝔣(χ, s): lcm(𝔣, cond χ).
pub fn l_modulus(chi: &HeckeCharacter, f: &Ideal) -> Result<Ideal> {
    Ok(ideal_lcm(&chi.field, f, &chi.conductor()?))
}

/// χ(𝔟)N𝔟^{-s}·E^{0,α}(δ₁, s, 𝔪𝔟^{-1}, O_𝔪^×) = Σ_{𝔞 ∈ [𝔟]} χ(𝔞)N𝔞^{-s}, the
/// class taken in the ray class group mod 𝔪.
pub fn partial_l(engine: &Engine, chi: &HeckeCharacter, s: u32, b: &Elem, m: &Ideal) -> Result<EisensteinValue> {
    let field = &chi.field;
    let bi = Ideal::principal(field, *b)?;
    if !bi.is_coprime(field, m)? {
        return Err(Error::NotCoprimeToConductor);
    }
    let cond = chi.conductor()?;
    if !cond.divides(field, m) {
        return Err(Error::InvalidInput("the conductor must divide the modulus".into()));
    }
    let lam = m.mul(field, &bi.inverse(field));
    let lat = LatticeC::new(field, &lam, Some(m))?;
    let f = LatticeFunction::delta(&lat, &field.int(1))?;
    let e = eisenstein_series(engine, &f, chi.alpha, s)?;
    let (bn, bd) = bi.norm(field);
    let cb = chi.eval(&bi)?;
    let mut v = e.mul_cyclo(&cb);
    for _ in 0..s {
        v = v.mul_rational(bd, bn);
    }
    Ok(v)
}

/// L_𝔣(χ, s) = Σ over ray classes mod lcm(𝔣, cond χ) of the partial values,
/// with representatives of smallest norm prime to `avoid`.
pub fn full_l(engine: &Engine, chi: &HeckeCharacter, s: u32, f: &Ideal, avoid: &[Ideal]) -> Result<EisensteinValue> {
    let field = &chi.field;
    let m = l_modulus(chi, f)?;
    let ray = RayClassData::new(field, &m, UnitsMode::GlobalUnits)?;
    let mut av = Vec::from(avoid);
    av.push(m);
    let reps = ray.representatives(field, &av)?;
    let mut acc = EisensteinValue::zero(engine.prec, chi.alpha, s, &format!("L mod {}", field.format_elem(&m.generator())));
    for b in &reps {
        acc = acc.add(&partial_l(engine, chi, s, b, &m)?);
    }
    Ok(acc)
}

/// Ideal-sum oracle for Σ_{𝔞 ∈ [𝔟], 𝔞 prime to 𝔪} χ(𝔞)N𝔞^{-s} (or the whole
/// sum when `class` is None), in double precision, with a tail bound.
pub fn ideal_sum_oracle(
    chi: &HeckeCharacter,
    s: u32,
    m: &Ideal,
    class: Option<&Elem>,
    target: f64,
) -> Result<((f64, f64), f64)> {
    let field = &chi.field;
    let expo = chi.alpha as f64 + 2.0 * s as f64;
    if expo <= 2.0 {
        return Err(Error::ConvergenceNotGuaranteed("ideal sum needs α + 2s > 2".into()));
    }
    let one = LatticeC::new(field, &Ideal::unit(field), None)?;
    let (covol, rho) = (one.covolume(), one.spread());
    let mut r = 4.0 * rho + 2.0;
    while power_tail(expo, r, covol, rho) > target && r < 1e4 {
        r *= 1.05;
    }
    let tail = power_tail(expo, r, covol, rho);
    let xmax = (r * r) as i128;
    let ray = RayClassData::new(field, m, UnitsMode::GlobalUnits)?;
    let want = match class {
        Some(b) => Some(ray.class_of_element(field, b)?),
        None => None,
    };
    let units = field.units();
    let mut acc = (0.0, 0.0);
    for n in 1..=xmax {
        for a in field.elements_of_norm(n) {
            // one generator per ideal: the smallest among its unit multiples
            let canon = units.iter().map(|u| field.normalize(field.mul(u, &a))).min().expect("units");
            if canon != a {
                continue;
            }
            let ai = Ideal::principal(field, a)?;
            if !ai.is_coprime(field, m)? {
                continue;
            }
            if let Some(c) = want {
                if ray.class_of_element(field, &a)? != c {
                    continue;
                }
            }
            let (vr, vi) = chi.eval_c64(&ai)?;
            let w = Float::powf(n as f64, -(s as f64));
            acc = (acc.0 + vr * w, acc.1 + vi * w);
        }
    }
    Ok((acc, tail + 1e-14 * (1.0 + Float::hypot(acc.0, acc.1))))
}

/// The lattices Λ = 𝔣𝔟^{-1} and 𝔠^{-1}Λ, with Γ = O_𝔣^×, after checking that
/// 𝔣, 𝔟, 𝔠 and p are pairwise coprime.
fn smoothing_lattices(field: &ImagQuadField, p: u64, f: &Ideal, b: &Elem, c: &Elem) -> Result<(LatticeC, LatticeC, Ideal)> {
    let pi = Ideal::principal(field, field.int(p as i128))?;
    let bi = Ideal::principal(field, *b)?;
    let ci = Ideal::principal(field, *c)?;
    let pairs = [(f, &bi, "f, b"), (f, &ci, "f, c"), (f, &pi, "f, p"), (&bi, &ci, "b, c"), (&bi, &pi, "b, p"), (&ci, &pi, "c, p")];
    for (x, y, what) in pairs {
        if !x.is_coprime(field, y)? {
            return Err(Error::CoprimalityViolation(format!("{what} are not coprime")));
        }
    }
    let lam = f.mul(field, &bi.inverse(field));
    let lat1 = LatticeC::new(field, &lam, Some(f))?;
    let lat2 = LatticeC::new(field, &lam.mul(field, &ci.inverse(field)), Some(f))?;
    Ok((lat1, lat2, ci))
}

/// N𝔠·E(ρ∗δ₁, 𝔣𝔟^{-1}) − E(ρ∗δ₁, 𝔠^{-1}𝔣𝔟^{-1}), Γ = O_𝔣^×, for ρ on p^{-n}O/O.
pub fn smoothed_eisenstein(
    engine: &Engine,
    field: &ImagQuadField,
    rho: &TorsionFunction,
    alpha: u32,
    f: &Ideal,
    b: &Elem,
    c: &Elem,
) -> Result<EisensteinValue> {
    let (lat1, lat2, ci) = smoothing_lattices(field, rho.prime(), f, b, c)?;
    let one = field.int(1);
    let f1 = LatticeFunction::from_torsion(rho, &lat1, &one)?;
    let f2 = LatticeFunction::from_torsion(rho, &lat2, &one)?;
    let e1 = eisenstein_series(engine, &f1, alpha, 0)?;
    let e2 = eisenstein_series(engine, &f2, alpha, 0)?;
    let (cn, cd) = ci.norm(field);
    Ok(e1.mul_rational(cn, cd).sub(&e2))
}

/// The smoothed value of δ_y for every torsion point y of p^{-n}O/O, in the
/// iteration order of `TorsionFunction`. Only for trivial Γ, where δ_y is
/// admissible on its own.
pub fn smoothed_kernel(
    engine: &Engine,
    field: &ImagQuadField,
    p: u64,
    n: u32,
    alpha: u32,
    f: &Ideal,
    b: &Elem,
    c: &Elem,
) -> Result<Vec<EisensteinValue>> {
    let (lat1, lat2, ci) = smoothing_lattices(field, p, f, b, c)?;
    if lat1.gamma.len() != 1 {
        return Err(Error::InvalidInput("point kernel needs O_f^x = {1}".into()));
    }
    let (cn, cd) = ci.norm(field);
    let one = field.int(1);
    let shape = TorsionFunction::zero(p, n, 2, "O_L");
    let mut out = Vec::with_capacity(shape.size());
    for (s, _) in shape.iter() {
        let d = TorsionFunction::delta(p, n, 2, "O_L", &s);
        let mut acc = EisensteinValue::zero(engine.prec, alpha, 0, "kernel");
        for (lat, scale) in [(&lat1, (cn, cd)), (&lat2, (-1, 1))] {
            let lf = LatticeFunction::from_torsion(&d, lat, &one)?;
            let (x, _) = lf.values.iter().next().ok_or(Error::InvalidInput("empty point".into()))?;
            let k = engine.kronecker(field, &lat.gen, x, alpha, 0)?;
            let v = EisensteinValue { value: k.value, abs_error: k.tail, alpha, s: 0, lattice: lat.label(), radius: k.radius, points: k.points };
            acc = acc.add(&v.mul_rational(scale.0, scale.1));
        }
        out.push(acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke_field::primes_above;

    fn chars_q_i(alpha: u32) -> (ImagQuadField, Vec<HeckeCharacter>, Ideal) {
        let k = ImagQuadField::new(-4).unwrap();
        let three = primes_above(&k, 3)[0];
        let mut moduli = alloc::vec![(three, 1)];
        for pr in primes_above(&k, 5) {
            moduli.push((pr, 1));
        }
        let chars = HeckeCharacter::enumerate(&k, alpha, &moduli, 4).unwrap();
        let f = Ideal::principal(&k, k.int(3)).unwrap();
        (k, chars, f)
    }

    #[test]
    fn partial_l_matches_ideal_sums() {
        let e = Engine::new(96);
        for alpha in [3, 4] {
            let (k, chars, f) = chars_q_i(alpha);
            for chi in chars.iter().step_by(5) {
                let m = l_modulus(chi, &f).unwrap();
                let ray = RayClassData::new(&k, &m, UnitsMode::GlobalUnits).unwrap();
                let reps = ray.representatives(&k, &[m]).unwrap();
                for s in [3, 4, 5] {
                    let b = reps[reps.len() - 1];
                    let v = partial_l(&e, chi, s, &b, &m).unwrap();
                    let (o, oe) = ideal_sum_oracle(chi, s, &m, Some(&b), 1e-11).unwrap();
                    let (re, im) = v.to_c64();
                    let d = Float::hypot(re - o.0, im - o.1);
                    assert!(d < 1e-8 && d <= oe + v.error(), "{} s={s}: {re},{im} vs {o:?}", chi.label());
                }
            }
        }
    }

    #[test]
    fn gamma_check_rejects() {
        let k = ImagQuadField::new(-4).unwrap();
        let lat = LatticeC::new(&k, &Ideal::unit(&k), None).unwrap();
        let f = LatticeFunction::delta(&lat, &Elem { a: 1, b: 0, den: 2 }).unwrap();
        let e = Engine::new(64);
        assert_eq!(eisenstein_series(&e, &f, 4, 0).unwrap_err(), Error::NotGammaInvariant);
    }

    #[test]
    fn distribution_relation() {
        // K(x, 𝔠^{-1}Λ) = Σ_{t ∈ 𝔠^{-1}Λ/Λ} K(x + t, Λ)
        let k = ImagQuadField::new(-4).unwrap();
        let e = Engine::new(96);
        let c = k.elem(1, 1);
        let g = k.int(3);
        let x = Elem { a: 16, b: 3, den: 5 };
        let coarse = e.kronecker(&k, &k.div(&g, &c).unwrap(), &x, 4, 0).unwrap();
        let t = k.div(&g, &c).unwrap();
        let mut acc = CBall::zero(96);
        let mut err = coarse.abs_error();
        for j in 0..2 {
            let pt = k.add(&x, &k.scale(&t, j));
            let v = e.kronecker(&k, &g, &pt, 4, 0).unwrap();
            err += v.abs_error();
            acc = acc.add(&v.value);
        }
        let (dr, di) = acc.sub(&coarse.value).to_c64();
        let d = Float::hypot(dr, di);
        assert!(d < err + 1e-25, "{d} vs {err}");
    }
}
