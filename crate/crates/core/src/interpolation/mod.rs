//! The two sides of the interpolation formula for p-adic Hecke L-functions:
//! the Eisenstein-assembled value of the measure against χ, and the product
//! of local factor, smoothing factor, Euler factor and L_𝔣(χ, 0).

pub mod congruence;
pub mod measure;
pub mod telescope;

pub use congruence::{congruence_check, CongruenceReport};
pub use measure::{build_measure_table, refinement_exact, MeasureTable, RefinementReport};
pub use telescope::euler_telescope_check;

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Float;

use crate::cyclo::Cyclo;
use crate::eisenstein::mp::{Ball, CBall};
use crate::eisenstein::periods::PeriodData;
use crate::eisenstein::recognize::{denominator, recognize_any};
use crate::eisenstein::series::{full_l, smoothed_eisenstein, EisensteinValue};
use crate::eisenstein::Engine;
use crate::error::{Error, Result};
use crate::fourier::{extend_by_zero, finite_fourier, TorsionFunction};
use crate::hecke_field::character::{torsion_character, unit_at_p};
use crate::hecke_field::{chi_fin, euler_factor, local_factor, primes_above, HeckeCharacter, Ideal, LocalFactor, RayClassData, UnitsMode};
use crate::hecke_field::{Elem, ImagQuadField};

/// Field, prime, conductor 𝔣 and smoothing element 𝔠, validated.
#[derive(Debug, Clone)]
pub struct Setup {
    pub field: ImagQuadField,
    pub p: u64,
    pub f: Ideal,
    pub c: Elem,
}

impl Setup {
    pub fn new(field: &ImagQuadField, p: u64, f: &Ideal, c: &Elem) -> Result<Self> {
        let pi = Ideal::principal(field, field.int(p as i128))?;
        let ci = Ideal::principal(field, *c)?;
        if !f.is_coprime(field, &pi)? {
            return Err(Error::CoprimalityViolation(alloc::format!("f = ({}) must be prime to p = {p}", field.format_elem(&f.generator()))));
        }
        if !ci.is_coprime(field, &pi)? {
            return Err(Error::CoprimalityViolation(alloc::format!("c = ({}) must be prime to p = {p}", field.format_elem(c))));
        }
        if !ci.is_coprime(field, f)? {
            return Err(Error::CoprimalityViolation(alloc::format!("c = ({}) must be prime to f", field.format_elem(c))));
        }
        Ok(Setup { field: field.clone(), p, f: *f, c: *c })
    }

    pub fn with_c(&self, c: &Elem) -> Result<Self> {
        Setup::new(&self.field, self.p, &self.f, c)
    }

    pub fn c_ideal(&self) -> Ideal {
        Ideal::principal(&self.field, self.c).expect("c is nonzero")
    }

    pub fn c_norm(&self) -> i128 {
        let (n, d) = self.c_ideal().norm(&self.field);
        n / d
    }

    pub fn f_label(&self) -> String {
        self.field.format_elem(&self.f.generator())
    }

    /// Ray class representatives mod 𝔣, prime to p𝔣𝔠.
    pub fn class_reps(&self) -> Result<Vec<Elem>> {
        let k = &self.field;
        let ray = RayClassData::new(k, &self.f, UnitsMode::GlobalUnits)?;
        let avoid = [self.f, Ideal::principal(k, k.int(self.p as i128))?, self.c_ideal()];
        ray.representatives(k, &avoid)
    }

    /// N𝔠 − χ(𝔠^{-1}).
    pub fn c_factor(&self, chi: &HeckeCharacter) -> Result<Cyclo> {
        let chic = chi.eval(&self.c_ideal())?;
        Ok(Cyclo::from_bigint(1, BigInt::from(self.c_norm())).sub(&chic.inverse()?).compact())
    }
}

/// Smallest level at which χ_fin at p is defined (at least 1).
pub fn chi_level(chi: &HeckeCharacter, p: u64) -> Result<u32> {
    let mut n = 1;
    for pr in primes_above(&chi.field, p) {
        n = n.max(chi.conductor_exponent_at(&pr)?);
    }
    Ok(n)
}

/// ĵ_!ρ read on torsion points: the value at y/p^n is the Fourier
/// coefficient of j_!ρ at s ↦ ψ(Tr(ys)).
pub fn hat_extended(field: &ImagQuadField, rho: &TorsionFunction) -> Result<TorsionFunction> {
    let p = rho.prime();
    let n = rho.level();
    let j = extend_by_zero(rho, |s| unit_at_p(field, p, s));
    let table = finite_fourier(&j, n)?;
    let mut err = None;
    let out = TorsionFunction::from_fn(p, n, 2, rho.lattice(), |y| {
        let e = field.elem(y[0] as i128, y[1] as i128);
        match torsion_character(field, p, n, &e) {
            Ok(c) => table.get(&c).clone(),
            Err(x) => {
                err = Some(x);
                Cyclo::zero(1)
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// (α−1)!/Ω^α as a ball.
pub fn normalizer(alpha: u32, period: &PeriodData, prec: u32) -> Result<CBall> {
    let mut f = Ball::from_int(prec, 1);
    for k in 1..alpha {
        f = f.mul_int(k as i64);
    }
    let om = period.omega.at_precision(prec).powi(alpha as i64)?;
    CBall::real(f).div(&om)
}

/// Size and a stable checksum of a table of exact values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourierDigest {
    pub level: u32,
    pub entries: usize,
    pub nonzero: usize,
    pub checksum: u64,
}

impl FourierDigest {
    pub fn of(rho: &TorsionFunction) -> Self {
        // FNV-1a over the canonical coordinates
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut nonzero = 0;
        for (s, v) in rho.iter() {
            if v.is_zero() {
                continue;
            }
            nonzero += 1;
            let (coords, den) = v.canonical();
            let text = alloc::format!("{:?}|{}|{}|{:?}", s, v.conductor(), den, coords);
            for b in text.bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        FourierDigest { level: rho.level(), entries: rho.size(), nonzero, checksum: h }
    }
}

/// Σ_i χ(𝔟_i)·smoothed(ĵ_!χ_fin^{-1}, 𝔟_i) before normalization, with the
/// Fourier data it used.
pub fn lhs_raw(engine: &Engine, setup: &Setup, chi: &HeckeCharacter, n: u32) -> Result<(EisensteinValue, TorsionFunction)> {
    let need = chi_level(chi, setup.p)?;
    if n < need {
        return Err(Error::LevelTooSmall(alloc::format!("χ_fin needs level {need}, got {n}")));
    }
    let g = chi_fin(chi, setup.p, n, true)?;
    let rho = hat_extended(&setup.field, &g)?;
    Ok((lhs_from_rho(engine, setup, chi, &rho)?, rho))
}

/// The class sum for an arbitrary ρ on p^{-n}O/O.
pub fn lhs_from_rho(engine: &Engine, setup: &Setup, chi: &HeckeCharacter, rho: &TorsionFunction) -> Result<EisensteinValue> {
    let mut acc = EisensteinValue::zero(engine.prec, chi.alpha, 0, "lhs");
    for b in setup.class_reps()? {
        let v = smoothed_eisenstein(engine, &setup.field, rho, chi.alpha, &setup.f, &b, &setup.c)?;
        let cb = chi.eval(&Ideal::principal(&setup.field, b)?)?;
        acc = acc.add(&v.mul_cyclo(&cb));
    }
    Ok(acc)
}

/// (α−1)!/Ω^α · Σ_i χ(𝔟_i)·smoothed value; the Eisenstein path.
pub fn lhs_via_eisenstein(engine: &Engine, setup: &Setup, chi: &HeckeCharacter, n: u32, period: &PeriodData) -> Result<EisensteinValue> {
    let (raw, _) = lhs_raw(engine, setup, chi, n)?;
    Ok(raw.mul_ball(&normalizer(chi.alpha, period, engine.prec)?))
}

/// Itemized factors of the product side (unnormalized L-value).
#[derive(Debug, Clone)]
pub struct RhsFactors {
    pub local: LocalFactor,
    pub c_factor: Cyclo,
    pub euler: Cyclo,
    pub l_value: EisensteinValue,
}

impl RhsFactors {
    pub fn exact_part(&self) -> Cyclo {
        self.local.value.mul(&self.c_factor).mul(&self.euler).compact()
    }

    pub fn product(&self) -> EisensteinValue {
        self.l_value.mul_cyclo(&self.exact_part())
    }
}

/// Local(χ), N𝔠 − χ(𝔠^{-1}), the Euler factor at p and L_𝔣(χ, 0).
pub fn rhs_factors(engine: &Engine, setup: &Setup, chi: &HeckeCharacter, choice: usize) -> Result<RhsFactors> {
    let k = &setup.field;
    let local = local_factor(chi, setup.p, &setup.f, choice)?;
    let c_factor = setup.c_factor(chi)?;
    let euler = euler_factor(chi, setup.p)?;
    let pi = Ideal::principal(k, k.int(setup.p as i128))?;
    let l_value = full_l(engine, chi, 0, &setup.f, &[pi, setup.c_ideal()])?;
    Ok(RhsFactors { local, c_factor, euler, l_value })
}

/// (α−1)!·Local·(N𝔠 − χ(𝔠^{-1}))·Euler·L_𝔣(χ, 0)/Ω^α; the factor path.
pub fn rhs_interpolation(engine: &Engine, setup: &Setup, chi: &HeckeCharacter, period: &PeriodData) -> Result<EisensteinValue> {
    let f = rhs_factors(engine, setup, chi, 0)?;
    Ok(f.product().mul_ball(&normalizer(chi.alpha, period, engine.prec)?))
}

/// |a − b| / max(|a|, |b|, floor).
pub fn relative_discrepancy(a: &EisensteinValue, b: &EisensteinValue, floor: f64) -> f64 {
    let (ar, ai) = a.to_c64();
    let (br, bi) = b.to_c64();
    let d = Float::hypot(ar - br, ai - bi);
    let m = Float::hypot(ar, ai).max(Float::hypot(br, bi)).max(floor);
    d / m
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub tol: f64,
    /// Level for χ_fin; defaults to the smallest admissible one.
    pub level: Option<u32>,
    /// Multiply Local(χ) by this rational before forming the product side.
    pub local_perturbation: Option<(i64, i64)>,
    /// Which decomposition to use for Local(χ).
    pub decomposition_choice: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tol: 1e-6, level: None, local_perturbation: None, decomposition_choice: 0 }
    }
}

/// Both sides for one (χ, 𝔠), every factor kept.
#[derive(Debug, Clone)]
pub struct InterpolationReport {
    pub character: String,
    pub alpha: u32,
    pub order: u64,
    pub discriminant: i64,
    pub p: u64,
    pub f: String,
    pub c: String,
    pub c_norm: i128,
    pub level: u32,
    pub class_reps: Vec<String>,
    pub lhs: EisensteinValue,
    pub rhs: EisensteinValue,
    pub local: Cyclo,
    pub local_perturbed: bool,
    pub decomposition_c: String,
    pub decomposition_n: String,
    pub c_factor: Cyclo,
    pub euler: Cyclo,
    pub l_value: EisensteinValue,
    pub omega: CBall,
    pub omega_model: String,
    pub normalizer: CBall,
    pub fourier: FourierDigest,
    pub discrepancy: f64,
    pub error_floor: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Compare the Eisenstein path against the factor path.
pub fn check_interpolation(
    engine: &Engine,
    setup: &Setup,
    chi: &HeckeCharacter,
    period: &PeriodData,
    opts: &VerifyOptions,
) -> Result<InterpolationReport> {
    if chi.alpha < 3 && !engine.experimental_low_weight {
        return Err(Error::ConvergenceNotGuaranteed(alloc::format!("weight {} needs the experimental low-weight path", chi.alpha)));
    }
    let field = &setup.field;
    let n = match opts.level {
        Some(n) => n,
        None => chi_level(chi, setup.p)?,
    };
    let norm = normalizer(chi.alpha, period, engine.prec)?;
    let (raw, rho) = lhs_raw(engine, setup, chi, n)?;
    let lhs = raw.mul_ball(&norm);
    let mut factors = rhs_factors(engine, setup, chi, opts.decomposition_choice)?;
    if let Some((a, b)) = opts.local_perturbation {
        factors.local.value = factors.local.value.mul_rational(a, b);
    }
    let rhs = factors.product().mul_ball(&norm);
    // a pair of values that are both zero within error compares as equal
    let floor = 10.0 * (lhs.error() + rhs.error()) + f64::MIN_POSITIVE;
    let discrepancy = relative_discrepancy(&lhs, &rhs, floor);
    Ok(InterpolationReport {
        character: chi.label(),
        alpha: chi.alpha,
        order: chi.order(),
        discriminant: field.discriminant(),
        p: setup.p,
        f: setup.f_label(),
        c: field.format_elem(&setup.c),
        c_norm: setup.c_norm(),
        level: n,
        class_reps: setup.class_reps()?.iter().map(|b| field.format_elem(b)).collect(),
        lhs,
        rhs,
        local: factors.local.value.clone(),
        local_perturbed: opts.local_perturbation.is_some(),
        decomposition_c: field.format_elem(&factors.local.c),
        decomposition_n: field.format_elem(&factors.local.n_gen),
        c_factor: factors.c_factor.clone(),
        euler: factors.euler.clone(),
        l_value: factors.l_value.clone(),
        omega: period.omega.clone(),
        omega_model: period.model_id.clone(),
        normalizer: norm,
        fourier: FourierDigest::of(&rho),
        discrepancy,
        error_floor: floor,
        tol: opts.tol,
        pass: discrepancy < opts.tol,
    })
}

/// The unsmoothed ratio value/(N𝔠 − χ(𝔠^{-1})) for two choices of 𝔠.
#[derive(Debug, Clone)]
pub struct CIndependence {
    pub c1: String,
    pub c2: String,
    pub ratio1: EisensteinValue,
    pub ratio2: EisensteinValue,
    pub discrepancy: f64,
    pub pass: bool,
}

pub fn c_independence(
    engine: &Engine,
    setup: &Setup,
    other_c: &Elem,
    chi: &HeckeCharacter,
    period: &PeriodData,
    tol: f64,
) -> Result<CIndependence> {
    let s2 = setup.with_c(other_c)?;
    let n = chi_level(chi, setup.p)?;
    let ratio = |s: &Setup| -> Result<EisensteinValue> {
        let v = lhs_via_eisenstein(engine, s, chi, n, period)?;
        Ok(v.mul_cyclo(&s.c_factor(chi)?.inverse()?))
    };
    let r1 = ratio(setup)?;
    let r2 = ratio(&s2)?;
    let floor = 10.0 * (r1.error() + r2.error()) + f64::MIN_POSITIVE;
    let d = relative_discrepancy(&r1, &r2, floor);
    Ok(CIndependence {
        c1: setup.field.format_elem(&setup.c),
        c2: setup.field.format_elem(other_c),
        ratio1: r1,
        ratio2: r2,
        discrepancy: d,
        pass: d < tol,
    })
}

/// (α−1)!·L_𝔣(χ, 0)/Ω^α recognized in Q(ζ_k), k ≤ `kmax`.
#[derive(Debug, Clone)]
pub struct AlgebraicValue {
    pub value: EisensteinValue,
    pub conductor: u64,
    pub element: Cyclo,
    pub denominator: u64,
}

pub fn algebraic_l_value(
    engine: &Engine,
    chi: &HeckeCharacter,
    f: &Ideal,
    avoid: &[Ideal],
    period: &PeriodData,
    kmax: u64,
    bound: u64,
) -> Result<AlgebraicValue> {
    let l = full_l(engine, chi, 0, f, avoid)?;
    let v = l.mul_ball(&normalizer(chi.alpha, period, engine.prec)?);
    let (k, c) = recognize_any(&v.value, v.error().max(1e-300), kmax, bound)?;
    Ok(AlgebraicValue { denominator: denominator(&c), value: v, conductor: k, element: c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::periods::period_omega;

    fn gaussian_setup(p: u64, c: i128) -> (ImagQuadField, Setup) {
        let k = ImagQuadField::new(-4).unwrap();
        let f = Ideal::principal(&k, k.int(3)).unwrap();
        let s = Setup::new(&k, p, &f, &k.int(c)).unwrap();
        (k, s)
    }

    fn trivial_part(k: &ImagQuadField, alpha: u32) -> HeckeCharacter {
        let three = primes_above(k, 3)[0];
        HeckeCharacter::minimal(k, alpha, &[(three, 1)]).unwrap()
    }

    #[test]
    fn setup_rejects_c_dividing_p() {
        let k = ImagQuadField::new(-4).unwrap();
        let f = Ideal::principal(&k, k.int(3)).unwrap();
        match Setup::new(&k, 5, &f, &k.elem(2, 1)) {
            Err(Error::CoprimalityViolation(m)) => assert!(m.contains("prime to p")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn split_and_inert_examples_pass() {
        let e = Engine::new(96);
        for (p, c) in [(5u64, 7i128), (7, 5)] {
            let (k, s) = gaussian_setup(p, c);
            let per = period_omega(&k, 96).unwrap();
            let chi = trivial_part(&k, 4);
            let r = check_interpolation(&e, &s, &chi, &per, &VerifyOptions::default()).unwrap();
            assert!(r.pass, "p={p}: {}", r.discrepancy);
            assert!(r.discrepancy < 1e-15);
            let bad = VerifyOptions { local_perturbation: Some((1001, 1000)), ..Default::default() };
            let r = check_interpolation(&e, &s, &chi, &per, &bad).unwrap();
            assert!(!r.pass);
        }
    }

    #[test]
    fn lhs_stable_under_level_change() {
        let e = Engine::new(96);
        let (k, s) = gaussian_setup(5, 7);
        let per = period_omega(&k, 96).unwrap();
        let chi = trivial_part(&k, 4);
        let a = lhs_via_eisenstein(&e, &s, &chi, 1, &per).unwrap();
        let b = lhs_via_eisenstein(&e, &s, &chi, 2, &per).unwrap();
        assert!(relative_discrepancy(&a, &b, 1e-300) < 1e-20);
    }

    #[test]
    fn lhs_is_linear_in_rho() {
        let e = Engine::new(96);
        let (k, s) = gaussian_setup(5, 7);
        let chi = trivial_part(&k, 4);
        let g1 = chi_fin(&chi, 5, 1, true).unwrap();
        let three = primes_above(&k, 3)[0];
        let p5 = primes_above(&k, 5);
        let other = HeckeCharacter::enumerate(&k, 4, &[(three, 1), (p5[0], 1)], 4).unwrap().pop().unwrap();
        let g2 = chi_fin(&other, 5, 1, true).unwrap();
        let r1 = hat_extended(&k, &g1).unwrap();
        let r2 = hat_extended(&k, &g2).unwrap();
        let r12 = hat_extended(&k, &g1.add(&g2).unwrap()).unwrap();
        let a = lhs_from_rho(&e, &s, &chi, &r1).unwrap().add(&lhs_from_rho(&e, &s, &chi, &r2).unwrap());
        let b = lhs_from_rho(&e, &s, &chi, &r12).unwrap();
        assert!(relative_discrepancy(&a, &b, 1e-300) < 1e-20);
    }

    #[test]
    fn unramified_fourier_data_is_char_hat_product() {
        // χ unramified at 5: ĵ_!1 at y is the product of Ĉhar over the primes above 5
        let k = ImagQuadField::new(-4).unwrap();
        let chi = trivial_part(&k, 4);
        let g = chi_fin(&chi, 5, 1, true).unwrap();
        let rho = hat_extended(&k, &g).unwrap();
        let primes = primes_above(&k, 5);
        for (y, v) in rho.iter() {
            let e = k.elem(y[0] as i128, y[1] as i128);
            let mut want = Cyclo::one(1);
            for pr in &primes {
                // valuation of y/5 at 𝔭 is −1 unless 𝔭 | y
                let val = if pr.ideal.contains(&k, &e) { 0 } else { -1 };
                let (a, b) = crate::fourier::char_hat(pr.norm() as u64, val);
                want = want.mul(&Cyclo::from_bigint(1, a).div_int(&b));
            }
            assert!(v.equals(&want), "y={y:?}");
        }
    }

    #[test]
    fn c_independence_two_choices() {
        let e = Engine::new(96);
        let (k, s) = gaussian_setup(5, 7);
        let per = period_omega(&k, 96).unwrap();
        let chi = trivial_part(&k, 3);
        let r = c_independence(&e, &s, &k.int(11), &chi, &per, 1e-6).unwrap();
        assert!(r.pass, "{}", r.discrepancy);
    }

    #[test]
    fn l_value_is_recognized() {
        let e = Engine::new(128);
        let k = ImagQuadField::new(-4).unwrap();
        let per = period_omega(&k, 128).unwrap();
        let chi = trivial_part(&k, 4);
        let f = Ideal::principal(&k, k.int(3)).unwrap();
        let v = algebraic_l_value(&e, &chi, &f, &[], &per, 12, 1_000_000).unwrap();
        assert!(v.conductor <= 4, "{}", v.element);
    }
}
