//! Kummer-type congruences for the smoothed measure at split p, on the
//! cosets of G(𝔣) = ray classes mod 𝔣.
//!
//! The moment of the measure against the avatar of χ is Ω_p^α times the
//! normalized value M(χ) of the factor side. Restricting to a coset 𝔟G(p^∞)
//! is Fourier inversion over the characters ε of G(𝔣):
//! ν_α(𝔟) = |G|^{-1} Σ_ε ε(𝔟)^{-1} M(χ_α ε). When α ≡ α′ mod (p−1)p^{k−1}
//! the avatars of χ_α and χ_α′ agree mod p^k, so ν_α′ ≡ u·ν_α mod p^k
//! with u = Ω_p^{α−α′} the same unit on every coset.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use super::{normalizer, rhs_factors, Setup};
use crate::eisenstein::mp::cyclo_to_cball;
use crate::cyclo::Cyclo;
use crate::eisenstein::periods::PeriodData;
use crate::eisenstein::recognize::recognize_any;
use crate::eisenstein::Engine;
use crate::error::{Error, Result};
use crate::hecke_field::{splitting, Elem, HeckeCharacter, Ideal, PadicEmbedding, PrimeIdeal, Splitting};
use crate::padic::PadicNumber;

#[derive(Debug, Clone)]
pub struct Moment {
    pub character: String,
    /// Q(ζ_k) in which (α−1)!·L_𝔣(χ,0)/Ω^α was recognized.
    pub conductor: u64,
    pub l_value: Cyclo,
    /// The full normalized moment.
    pub value: Cyclo,
}

#[derive(Debug, Clone)]
pub struct CongruenceReport {
    pub p: u64,
    pub k: u32,
    pub alpha: u32,
    pub alpha2: u32,
    pub f: String,
    pub c: String,
    pub cosets: Vec<String>,
    pub moments: Vec<Moment>,
    pub moments2: Vec<Moment>,
    /// Exact coset values ν for both weights.
    pub coset_values: Vec<Cyclo>,
    pub coset_values2: Vec<Cyclo>,
    /// Their p-adic images as digit strings, and minimal valuations.
    pub padic: Vec<String>,
    pub padic2: Vec<String>,
    pub valuation: i64,
    pub valuation2: i64,
    /// Residue digits of the unit u mod p^k (empty when undetermined).
    pub unit: String,
    /// Residue degree of the p-adic field the values were embedded in.
    pub embedding_degree: usize,
    pub pass: bool,
}

fn moduli_of(setup: &Setup) -> Vec<(PrimeIdeal, u32)> {
    setup.f.factor(&setup.field).into_iter().map(|(pr, e)| (pr, e as u32)).collect()
}

/// Residues a + bω prime to 𝔣, a, b < N𝔣.
fn residues_prime_to(setup: &Setup) -> Vec<Elem> {
    let k = &setup.field;
    let (n, d) = setup.f.norm(k);
    let m = n / d;
    let fi = setup.f;
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            let x = k.elem(a, b);
            if let Ok(xi) = Ideal::principal(k, x) {
                if xi.is_coprime(k, &fi).unwrap_or(false) {
                    out.push(x);
                }
            }
        }
    }
    out
}

fn same_epsilon(setup: &Setup, a: &HeckeCharacter, b: &HeckeCharacter, res: &[Elem]) -> Result<bool> {
    let _ = setup;
    for x in res {
        if !a.epsilon(x)?.equals(&b.epsilon(x)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn digits(x: &PadicNumber) -> String {
    let ds: Vec<String> = x.digits().iter().map(|d| alloc::format!("{:?}", d)).collect();
    alloc::format!("p^{} * [{}] + O(p^{})", x.valuation(), ds.join(" "), x.abs_precision())
}

/// Exact coset values for one weight, with the moments they came from.
fn coset_values(
    engine: &Engine,
    setup: &Setup,
    base: &HeckeCharacter,
    chars: &[HeckeCharacter],
    classes: &[Elem],
    period: &PeriodData,
    kmax: u64,
    bound: u64,
) -> Result<(Vec<Cyclo>, Vec<Moment>)> {
    let k = &setup.field;
    let nz = normalizer(base.alpha, period, engine.prec)?;
    let mut moments = Vec::new();
    for chi in chars {
        // only the L-value needs recognizing; the other factors are exact
        let f = rhs_factors(engine, setup, chi, 0)?;
        let l = f.l_value.mul_ball(&nz);
        let (cond, c) = recognize_any(&l.value, l.error().max(1e-300), kmax, bound)?;
        let m = f.exact_part().mul(&c).compact();
        let num = f.product().mul_ball(&nz);
        let (dr, di) = cyclo_to_cball(&m, engine.prec).sub(&num.value).to_c64();
        if Float::hypot(dr, di) > 10.0 * num.error() + 1e-30 * Float::hypot(num.to_c64().0, num.to_c64().1) {
            return Err(Error::RecognitionFailed(alloc::format!("moment of {} does not match its factors", chi.label())));
        }
        moments.push(Moment { character: chi.label(), conductor: cond, l_value: c, value: m });
    }
    let g = chars.len() as i64;
    let mut out = Vec::new();
    for b in classes {
        let bi = Ideal::principal(k, *b)?;
        let base_b = base.eval(&bi)?;
        let mut acc = Cyclo::zero(1);
        for (chi, m) in chars.iter().zip(&moments) {
            // ε(𝔟)^{-1} = χ_α(𝔟)/χ(𝔟) for χ = χ_α ε
            let eps_inv = base_b.div(&chi.eval(&bi)?)?;
            acc = acc.add(&eps_inv.mul(&m.value));
        }
        out.push(acc.mul_rational(1, g).compact());
    }
    Ok((out, moments))
}

/// Check ν_α′ ≡ u·ν_α mod p^k on every coset of G(𝔣), for one unit u.
#[allow(clippy::too_many_arguments)]
pub fn congruence_check(
    engine: &Engine,
    setup: &Setup,
    alpha: u32,
    alpha2: u32,
    k: u32,
    period: &PeriodData,
    padic_prec: i64,
    kmax: u64,
    bound: u64,
) -> Result<CongruenceReport> {
    let p = setup.p;
    let field = &setup.field;
    if splitting(field, p) != Splitting::Split {
        return Err(Error::NonOrdinaryUnsupported(alloc::format!("{p} is not split in Q(sqrt({}))", field.discriminant())));
    }
    let step = (p - 1) * p.pow(k.saturating_sub(1));
    if alpha2 <= alpha || (alpha2 - alpha) as u64 % step != 0 {
        return Err(Error::InvalidInput(alloc::format!("need α′ > α and α′ ≡ α mod {step}")));
    }
    let moduli = moduli_of(setup);
    let chars = HeckeCharacter::enumerate(field, alpha, &moduli, u64::MAX)?;
    let chars2 = HeckeCharacter::enumerate(field, alpha2, &moduli, u64::MAX)?;
    if chars.is_empty() || chars.len() != chars2.len() {
        return Err(Error::InvalidInput("no compatible characters of these weights on f".into()));
    }
    let res = residues_prime_to(setup);
    let base = chars[0].clone();
    let mut base2 = None;
    for c in &chars2 {
        if same_epsilon(setup, &base, c, &res)? {
            base2 = Some(c.clone());
            break;
        }
    }
    let base2 = base2.ok_or_else(|| Error::InvalidInput("no weight-α′ character with the same finite part".into()))?;
    let classes = setup.class_reps()?;
    let (nu, moments) = coset_values(engine, setup, &base, &chars, &classes, period, kmax, bound)?;
    let (nu2, moments2) = coset_values(engine, setup, &base2, &chars2, &classes, period, kmax, bound)?;

    // smallest unramified degree containing every root of unity involved
    let conds: Vec<u64> = nu.iter().chain(&nu2).map(|x| x.minimal_conductor()).collect();
    let mut degree = 1usize;
    while !conds.iter().all(|&c| (p.pow(degree as u32) - 1) % c == 0) {
        degree += 1;
        if degree > 6 {
            return Err(Error::InvalidInput("values need a large unramified extension".into()));
        }
    }
    let emb = PadicEmbedding::with_degree(field, p, padic_prec, degree)?;
    let im: Vec<PadicNumber> = nu.iter().map(|x| emb.cyclo(x)).collect::<Result<_>>()?;
    let im2: Vec<PadicNumber> = nu2.iter().map(|x| emb.cyclo(x)).collect::<Result<_>>()?;
    let minval = |v: &[PadicNumber]| v.iter().filter(|x| !x.is_zero_at_precision()).map(|x| x.valuation()).min().unwrap_or(i64::MAX);
    let v1 = minval(&im);
    let v2 = minval(&im2);
    let mut unit = String::new();
    let mut pass = v1 == v2 && v1 != i64::MAX;
    if pass {
        let shift = PadicNumber::from_int(emb.padic.clone(), p as i64, padic_prec)?.powi(-v1)?;
        let w: Vec<PadicNumber> = im.iter().map(|x| x.mul(&shift)).collect::<Result<_>>()?;
        let w2: Vec<PadicNumber> = im2.iter().map(|x| x.mul(&shift)).collect::<Result<_>>()?;
        let i0 = w.iter().position(|x| x.valuation() == 0).expect("a coset of minimal valuation");
        let u = w2[i0].div(&w[i0])?;
        unit = digits(&u.with_precision(k as i64));
        pass = u.valuation() == 0;
        for (a, b) in w.iter().zip(&w2) {
            let d = b.sub(&u.mul(a)?)?;
            if !d.is_zero_at_precision() && d.valuation() < k as i64 {
                pass = false;
            }
        }
    }
    Ok(CongruenceReport {
        p,
        k,
        alpha,
        alpha2,
        f: setup.f_label(),
        c: field.format_elem(&setup.c),
        cosets: classes.iter().map(|b| field.format_elem(b)).collect(),
        moments,
        moments2,
        coset_values: nu,
        coset_values2: nu2,
        padic: im.iter().map(digits).collect(),
        padic2: im2.iter().map(digits).collect(),
        valuation: v1,
        valuation2: v2,
        unit,
        embedding_degree: emb.residue_degree(),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::periods::period_omega;
    use crate::hecke_field::ImagQuadField;
    extern crate std;

    #[test]
    fn gaussian_p5_weights_shifted_by_four() {
        let k = ImagQuadField::new(-4).unwrap();
        let e = Engine::new(256);
        let per = period_omega(&k, 256).unwrap();
        let f = Ideal::principal(&k, k.int(3)).unwrap();
        let s = Setup::new(&k, 5, &f, &k.int(7)).unwrap();
        // only α ≡ 0 mod 4 here: otherwise the values on (3) carry a fourth
        // root of 3 and do not lie in a cyclotomic field
        for a in [4u32, 8] {
            let r = congruence_check(&e, &s, a, a + 4, 1, &per, 20, 24, 1_000_000).unwrap();
            std::println!("{a}: v={} u={} deg={} pass={}", r.valuation, r.unit, r.embedding_degree, r.pass);
            assert!(r.pass, "{r:#?}");
        }
    }

    #[test]
    fn mismatched_weights_rejected() {
        let k = ImagQuadField::new(-4).unwrap();
        let e = Engine::new(64);
        let per = period_omega(&k, 64).unwrap();
        let f = Ideal::principal(&k, k.int(3)).unwrap();
        let s = Setup::new(&k, 5, &f, &k.int(7)).unwrap();
        assert!(matches!(congruence_check(&e, &s, 4, 6, 1, &per, 20, 12, 1000), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn inert_is_rejected() {
        let k = ImagQuadField::new(-4).unwrap();
        let e = Engine::new(64);
        let per = period_omega(&k, 64).unwrap();
        let f = Ideal::principal(&k, k.int(3)).unwrap();
        let s = Setup::new(&k, 7, &f, &k.int(5)).unwrap();
        assert!(matches!(congruence_check(&e, &s, 4, 10, 1, &per, 20, 12, 1000), Err(Error::NonOrdinaryUnsupported(_))));
    }
}
