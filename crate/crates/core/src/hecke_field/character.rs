//! Algebraic Hecke characters χ((ξ)) = ε(ξ)·ξ^{−α} of class-number-one fields,
//! with ε a finite-order character of (O/m)^× built from cyclic prime-power
//! components.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::field::{Elem, ImagQuadField};
use super::ideal::{primes_above, reduce_with, valuation, Hnf, Ideal, PrimeIdeal};
use super::ray::residues;
use crate::cyclo::{gcd_u64, lcm_u64, Cyclo};
use crate::error::{Error, Result};
use crate::fourier::{finite_fourier, FiniteCharacter, TorsionFunction};

/// ε restricted to (O/𝔭^e)^×, which must be cyclic; ε(g) = ζ_N^image for the
/// first generator g in residue order.
#[derive(Debug, Clone)]
pub struct CharComponent {
    pub prime: PrimeIdeal,
    pub exponent: u32,
    pub image: u64,
    group_order: u64,
    generator: (i128, i128),
    hnf: Hnf,
    dlog: BTreeMap<(i128, i128), u64>,
}

impl CharComponent {
    pub fn new(field: &ImagQuadField, prime: PrimeIdeal, exponent: u32, image: u64) -> Result<Self> {
        let m = prime.ideal.pow(field, exponent as i64);
        let hnf = m.hnf(field)?;
        let q = prime.norm();
        let order = q.pow(exponent - 1) * (q - 1);
        let mut found = None;
        for r in residues(&hnf) {
            let x = field.elem(r.0, r.1);
            if valuation(field, &prime, &x) != 0 || field.is_zero(&x) {
                continue;
            }
            let mut table = BTreeMap::new();
            let mut cur = reduce_with(&hnf, &field.int(1))?;
            for k in 0..order {
                if table.insert(cur, k).is_some() {
                    break;
                }
                cur = reduce_with(&hnf, &field.mul(&field.elem(cur.0, cur.1), &x))?;
            }
            if table.len() as u64 == order {
                found = Some((r, table));
                break;
            }
        }
        let Some((generator, dlog)) = found else {
            return Err(Error::UnsupportedConductor(format!(
                "(O/p^{exponent})^x is not cyclic for p above {}",
                prime.p
            )));
        };
        Ok(CharComponent { prime, exponent, image: image % order, group_order: order, generator, hnf, dlog })
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn generator(&self) -> (i128, i128) {
        self.generator
    }

    pub fn is_trivial(&self) -> bool {
        self.image == 0
    }

    pub fn order(&self) -> u64 {
        self.group_order / gcd_u64(self.image, self.group_order)
    }

    /// Exponent e' with ε(x) = ζ_N^{e'}, for x integral and prime to 𝔭.
    pub fn log_value(&self, x: &Elem) -> Result<u64> {
        let r = reduce_with(&self.hnf, x)?;
        let k = self.dlog.get(&r).ok_or(Error::NotCoprimeToConductor)?;
        Ok((k * self.image) % self.group_order)
    }

    pub fn eval(&self, field: &ImagQuadField, x: &Elem) -> Result<Cyclo> {
        let x = field.normalize(*x);
        let num = Elem { den: 1, ..x };
        let e_num = self.log_value(&num)? as i64;
        let e_den = self.log_value(&field.int(x.den))? as i64;
        Ok(Cyclo::root(self.group_order, e_num - e_den))
    }

    /// Exponent of 𝔭 in the conductor of this component.
    pub fn conductor_exponent(&self, field: &ImagQuadField) -> Result<u32> {
        if self.is_trivial() {
            return Ok(0);
        }
        let pi = self.prime.ideal.generator();
        for j in 1..self.exponent {
            let pj = field.pow(&pi, j as i64)?;
            let mut trivial = true;
            for r in residues(&self.hnf) {
                let x = field.add(&field.int(1), &field.mul(&pj, &field.elem(r.0, r.1)));
                if self.log_value(&x)? != 0 {
                    trivial = false;
                    break;
                }
            }
            if trivial {
                return Ok(j);
            }
        }
        Ok(self.exponent)
    }
}

/// χ((ξ)) = ε(ξ)·ξ^{−α}.
#[derive(Debug, Clone)]
pub struct HeckeCharacter {
    pub field: ImagQuadField,
    pub alpha: u32,
    pub components: Vec<CharComponent>,
}

impl HeckeCharacter {
    /// Validates ε(u) = u^α on the global units.
    pub fn new(field: ImagQuadField, alpha: u32, components: Vec<CharComponent>) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::InvalidInput("infinity type needs α ≥ 1".into()));
        }
        let chi = HeckeCharacter { field, alpha, components };
        for u in chi.field.units() {
            let lhs = chi.epsilon(&u)?;
            let rhs = chi.field.to_cyclo(&chi.field.pow(&u, alpha as i64)?);
            if !lhs.equals(&rhs) {
                return Err(Error::InvalidInput(format!(
                    "ε(u) ≠ u^α for the unit {}",
                    chi.field.format_elem(&u)
                )));
            }
        }
        Ok(chi)
    }

    /// Every ε on the given prime powers with ε(u) = u^α and order dividing
    /// one of the allowed orders (≤ `max_order`), in lexicographic image order.
    pub fn enumerate(
        field: &ImagQuadField,
        alpha: u32,
        moduli: &[(PrimeIdeal, u32)],
        max_order: u64,
    ) -> Result<Vec<Self>> {
        let bases: Vec<CharComponent> =
            moduli.iter().map(|(p, e)| CharComponent::new(field, *p, *e, 0)).collect::<Result<_>>()?;
        let sizes: Vec<u64> = bases.iter().map(|c| c.group_order).collect();
        let total: u64 = sizes.iter().product();
        let mut out = Vec::new();
        for idx in 0..total {
            let mut t = idx;
            let mut comps = Vec::with_capacity(bases.len());
            let mut order = 1;
            for (b, &n) in bases.iter().zip(&sizes).rev() {
                let _ = b;
                let img = t % n;
                t /= n;
                comps.push(img);
                order = lcm_u64(order, n / gcd_u64(img, n));
            }
            comps.reverse();
            if order > max_order {
                continue;
            }
            let components = bases
                .iter()
                .zip(&comps)
                .map(|(b, &img)| CharComponent { image: img, ..b.clone() })
                .collect();
            if let Ok(chi) = HeckeCharacter::new(field.clone(), alpha, components) {
                out.push(chi);
            }
        }
        Ok(out)
    }

    /// The admissible ε of smallest image vector: the trivial character when
    /// u^α = 1 on all units.
    pub fn minimal(field: &ImagQuadField, alpha: u32, moduli: &[(PrimeIdeal, u32)]) -> Result<Self> {
        Self::enumerate(field, alpha, moduli, u64::MAX)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::InvalidInput("no ε with ε(u) = u^α on this modulus".into()))
    }

    pub fn label(&self) -> String {
        let imgs: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                format!(
                    "{}^{}:{}/{}",
                    self.field.format_elem(&c.prime.ideal.generator()),
                    c.exponent,
                    c.image,
                    c.group_order
                )
            })
            .collect();
        format!("alpha={} eps=[{}]", self.alpha, imgs.join(","))
    }

    /// Order of ε.
    pub fn order(&self) -> u64 {
        self.components.iter().map(|c| c.order()).fold(1, lcm_u64)
    }

    /// m = ∏ 𝔭^e over all components.
    pub fn modulus(&self) -> Ideal {
        self.components
            .iter()
            .fold(Ideal::unit(&self.field), |acc, c| acc.mul(&self.field, &c.prime.ideal.pow(&self.field, c.exponent as i64)))
    }

    pub fn conductor(&self) -> Result<Ideal> {
        let mut acc = Ideal::unit(&self.field);
        for c in &self.components {
            let e = c.conductor_exponent(&self.field)?;
            acc = acc.mul(&self.field, &c.prime.ideal.pow(&self.field, e as i64));
        }
        Ok(acc)
    }

    /// Conductor exponent at 𝔭 (0 when no component sits there).
    pub fn conductor_exponent_at(&self, pi: &PrimeIdeal) -> Result<u32> {
        for c in &self.components {
            if c.prime == *pi {
                return c.conductor_exponent(&self.field);
            }
        }
        Ok(0)
    }

    /// ε(x) for x prime to the conductor.
    pub fn epsilon(&self, x: &Elem) -> Result<Cyclo> {
        let mut acc = Cyclo::one(1);
        for c in &self.components {
            if c.is_trivial() {
                continue;
            }
            acc = acc.mul(&c.eval(&self.field, x)?);
        }
        Ok(acc.compact())
    }

    /// ε restricted to the components above p.
    pub fn epsilon_at(&self, p: u64, x: &Elem) -> Result<Cyclo> {
        let mut acc = Cyclo::one(1);
        for c in &self.components {
            if c.is_trivial() || c.prime.p != p {
                continue;
            }
            acc = acc.mul(&c.eval(&self.field, x)?);
        }
        Ok(acc.compact())
    }

    /// χ((ξ)) = ε(ξ)·ξ^{−α}, exact in a cyclotomic field.
    pub fn eval_element(&self, xi: &Elem) -> Result<Cyclo> {
        let e = self.epsilon(xi)?;
        let x = self.field.to_cyclo(xi);
        Ok(e.mul(&x.pow(-(self.alpha as i64))?).compact())
    }

    pub fn eval(&self, a: &Ideal) -> Result<Cyclo> {
        self.eval_element(&a.generator())
    }

    /// Double-precision value, for enumeration-based oracles.
    pub fn eval_c64(&self, a: &Ideal) -> Result<(f64, f64)> {
        let e = self.epsilon(&a.generator())?.to_f64();
        let (xr, xi) = self.field.to_c64(&a.generator());
        // ξ^{−α}
        let n = xr * xr + xi * xi;
        let (mut r, mut i) = (1.0f64, 0.0f64);
        let (br, bi) = (xr / n, -xi / n);
        for _ in 0..self.alpha {
            let t = r * br - i * bi;
            i = r * bi + i * br;
            r = t;
        }
        Ok((e.0 * r - e.1 * i, e.0 * i + e.1 * r))
    }

    /// Is the character unramified at every prime above p?
    pub fn unramified_at(&self, p: u64) -> Result<bool> {
        for pi in primes_above(&self.field, p) {
            if self.conductor_exponent_at(&pi)? > 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Is s ∈ O/p^n a unit of every completion above p?
pub fn unit_at_p(field: &ImagQuadField, p: u64, s: &[u64]) -> bool {
    let x = field.elem(s[0] as i128, s[1] as i128);
    primes_above(field, p).iter().all(|pi| !pi.ideal.contains(field, &x))
}

/// χ_fin on (O⊗Zp)^× at level n, or its inverse, extended by zero off the units;
/// coordinates (a, b) stand for a + bω.
pub fn chi_fin(chi: &HeckeCharacter, p: u64, n: u32, inverse: bool) -> Result<TorsionFunction> {
    let field = &chi.field;
    let mut err = None;
    let f = TorsionFunction::from_fn(p, n, 2, "O_L", |s| {
        if !unit_at_p(field, p, s) {
            return Cyclo::zero(1);
        }
        match chi.epsilon_at(p, &field.elem(s[0] as i128, s[1] as i128)) {
            Ok(v) => {
                if inverse {
                    v.conj()
                } else {
                    v
                }
            }
            Err(e) => {
                err = Some(e);
                Cyclo::zero(1)
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(f),
    }
}

/// The level-n character ψ(Tr(x·s)) attached to x = y/p^n ∈ p^{-n}O/O, with
/// ψ the standard additive character of Qp/Zp.
pub fn torsion_character(field: &ImagQuadField, p: u64, n: u32, y: &Elem) -> Result<FiniteCharacter> {
    if !field.is_integral(y) {
        return Err(Error::InvalidInput("torsion point numerator must be integral".into()));
    }
    let m = p.pow(n) as i128;
    let tr1 = field.trace(y).0;
    let trw = field.trace(&field.mul(y, &field.omega())).0;
    Ok(FiniteCharacter::new(p, n, alloc::vec![tr1.rem_euclid(m) as u64, trw.rem_euclid(m) as u64]))
}

/// Local(χ, Σ) with the decomposition that produced it.
#[derive(Debug, Clone)]
pub struct LocalFactor {
    pub value: Cyclo,
    pub c: Elem,
    pub n_gen: Elem,
    pub level: u32,
    pub f_hat_at_c_inv: Cyclo,
}

/// F = ∏_{𝔭|p} F_𝔭 on O/p^n.
pub fn local_f_function(chi: &HeckeCharacter, p: u64, n: u32) -> Result<TorsionFunction> {
    let field = &chi.field;
    let primes = primes_above(field, p);
    let mut err = None;
    let f = TorsionFunction::from_fn(p, n, 2, "O_L", |s| {
        let x = field.elem(s[0] as i128, s[1] as i128);
        let mut acc = Cyclo::one(1);
        for pi in &primes {
            let comp = chi.components.iter().find(|c| c.prime == *pi && !c.is_trivial());
            let Some(comp) = comp else { continue };
            if pi.ideal.contains(field, &x) {
                return Cyclo::zero(1);
            }
            match comp.eval(field, &x) {
                Ok(v) => acc = acc.mul(&v.conj()),
                Err(e) => err = Some(e),
            }
        }
        acc
    });
    match err {
        Some(e) => Err(e),
        None => Ok(f),
    }
}

/// The `choice`-th decomposition ∏𝔭^{m_𝔭} = (c)𝔫 with 𝔫 = (ν) prime to p𝔣 and
/// c ≡ 1 mod× 𝔣, enumerated by increasing N(ν).
pub fn decomposition(chi: &HeckeCharacter, p: u64, f: &Ideal, choice: usize) -> Result<(Elem, Elem)> {
    let field = &chi.field;
    let mut pi = field.int(1);
    for pr in primes_above(field, p) {
        let m = chi.conductor_exponent_at(&pr)?;
        pi = field.mul(&pi, &field.pow(&pr.ideal.generator(), m as i64)?);
    }
    let pf = f.mul(field, &Ideal::principal(field, field.int(p as i128))?);
    let mut seen: Vec<Elem> = Vec::new();
    for norm in 1..5000i128 {
        for nu in field.elements_of_norm(norm) {
            let nu_ideal = Ideal::principal(field, nu)?;
            if !nu_ideal.is_coprime(field, &pf)? {
                continue;
            }
            for u in field.units() {
                let target = field.mul(&pi, &u);
                if f.contains(field, &field.sub(&target, &nu)) {
                    let c = field.normalize(field.div(&target, &nu)?);
                    if seen.contains(&c) {
                        continue;
                    }
                    if seen.len() == choice {
                        return Ok((c, nu));
                    }
                    seen.push(c);
                }
            }
        }
    }
    Err(Error::DegenerateDecomposition)
}

/// Local(χ,Σ) = F̂(c^{-1}) / (χ(𝔫)·c^{−α}).
pub fn local_factor(chi: &HeckeCharacter, p: u64, f: &Ideal, choice: usize) -> Result<LocalFactor> {
    let field = &chi.field;
    let (c, nu) = decomposition(chi, p, f, choice)?;
    let mut level = 1;
    for pr in primes_above(field, p) {
        level = level.max(chi.conductor_exponent_at(&pr)?);
    }
    let ff = local_f_function(chi, p, level)?;
    let table = finite_fourier(&ff, level)?;
    let pn = field.int(p.pow(level) as i128);
    let y = field.mul(&pn, &field.inv(&c)?);
    // y is p-integral; clear any denominator prime to p
    let y_int = p_integral_numerator(field, p, level, &y)?;
    let f_hat = table.get(&torsion_character(field, p, level, &y_int)?).clone();
    let chi_n = chi.eval_element(&nu)?;
    let c_pow = field.to_cyclo(&c).pow(-(chi.alpha as i64))?;
    let value = f_hat.div(&chi_n.mul(&c_pow))?.compact();
    Ok(LocalFactor { value, c, n_gen: nu, level, f_hat_at_c_inv: f_hat })
}

/// For y ∈ L integral at p, an element of O congruent to y modulo p^n.
pub fn p_integral_numerator(field: &ImagQuadField, p: u64, n: u32, y: &Elem) -> Result<Elem> {
    let y = field.normalize(*y);
    if y.den == 1 {
        return Ok(y);
    }
    let m = (p as i128).pow(n);
    if y.den % p as i128 == 0 {
        return Err(Error::InvalidInput("element is not integral at p".into()));
    }
    let inv = mod_inverse(y.den.rem_euclid(m), m).ok_or(Error::NotAUnit)?;
    Ok(field.elem((y.a * inv).rem_euclid(m), (y.b * inv).rem_euclid(m)))
}

pub(crate) fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m))
}

/// ∏_{𝔭|p unramified for χ} (1 − χ(𝔭)^{-1}/N𝔭).
pub fn euler_factor(chi: &HeckeCharacter, p: u64) -> Result<Cyclo> {
    let field = &chi.field;
    let mut acc = Cyclo::one(1);
    for pr in primes_above(field, p) {
        if chi.conductor_exponent_at(&pr)? > 0 {
            continue;
        }
        let v = chi.eval(&pr.ideal)?.inverse()?;
        let term = Cyclo::one(1).sub(&v.div_int(&BigInt::from(pr.norm())));
        acc = acc.mul(&term).compact();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian() -> ImagQuadField {
        ImagQuadField::new(-4).unwrap()
    }

    #[test]
    fn trivial_alpha_four() {
        let k = gaussian();
        let chi = HeckeCharacter::new(k.clone(), 4, alloc::vec![]).unwrap();
        let a = Ideal::principal(&k, k.elem(2, 1)).unwrap();
        let v = chi.eval(&a).unwrap();
        let want = k.to_cyclo(&k.elem(2, 1)).pow(-4).unwrap();
        assert!(v.equals(&want));
    }

    #[test]
    fn odd_alpha_needs_epsilon() {
        let k = gaussian();
        assert!(HeckeCharacter::new(k.clone(), 3, alloc::vec![]).is_err());
        let three = primes_above(&k, 3)[0];
        let chi = HeckeCharacter::minimal(&k, 3, &[(three, 1)]).unwrap();
        assert_eq!(chi.order(), 8);
    }

    #[test]
    fn inert_euler_factor() {
        let k = gaussian();
        let chi = HeckeCharacter::new(k, 4, alloc::vec![]).unwrap();
        let e = euler_factor(&chi, 7).unwrap();
        assert!(e.equals(&Cyclo::from_int(1, -48)));
    }

    #[test]
    fn unramified_local_factor_is_one() {
        let k = gaussian();
        let chi = HeckeCharacter::new(k.clone(), 4, alloc::vec![]).unwrap();
        let f = Ideal::principal(&k, k.int(3)).unwrap();
        for choice in 0..3 {
            let l = local_factor(&chi, 5, &f, choice).unwrap();
            assert!(l.value.equals(&Cyclo::one(1)), "choice {choice}: {}", l.value);
        }
    }

    #[test]
    fn ramified_local_factor_is_choice_free() {
        let k = gaussian();
        let three = primes_above(&k, 3)[0];
        let mut moduli = alloc::vec![(three, 1)];
        for pi in primes_above(&k, 5) {
            moduli.push((pi, 1));
        }
        let chars = HeckeCharacter::enumerate(&k, 3, &moduli, 4).unwrap();
        assert_eq!(chars.len(), 16);
        let f = Ideal::principal(&k, k.int(3)).unwrap();
        for chi in chars.iter().take(6) {
            let a = local_factor(chi, 5, &f, 0).unwrap();
            let b = local_factor(chi, 5, &f, 1).unwrap();
            assert!(a.c != b.c);
            assert!(a.value.equals(&b.value), "{}: {} vs {}", chi.label(), a.value, b.value);
            assert!(!a.value.is_zero());
        }
    }
}
