//! Lattices gO in C and the Kronecker sums
//! K_α(z, s, Λ) = Σ'_{λ ∈ z+Λ} 1/(λ^α N(λ)^s).
//!
//! At s = 0 the sum is split with incomplete gamma functions into a rapidly
//! convergent direct part and a dual-lattice part; for integer s ≥ 1 the sum
//! is taken directly with a polynomial tail bound.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Float;

use super::mp::{Ball, CBall};
use crate::error::{Error, Result};
use crate::hecke_field::{Elem, Ideal, ImagQuadField};

/// A fractional ideal Λ = gO together with a finite group Γ of units.
#[derive(Debug, Clone)]
pub struct LatticeC {
    pub field: ImagQuadField,
    pub ideal: Ideal,
    pub gen: Elem,
    /// Γ, listed with 1 first.
    pub gamma: Vec<Elem>,
}

impl LatticeC {
    /// Λ with Γ = units ≡ 1 mod `f` (all units if `f` is None).
    pub fn new(field: &ImagQuadField, ideal: &Ideal, f: Option<&Ideal>) -> Result<Self> {
        let one = field.int(1);
        let mut gamma: Vec<Elem> = field
            .units()
            .into_iter()
            .filter(|u| match f {
                Some(f) => f.contains(field, &field.sub(u, &one)),
                None => true,
            })
            .collect();
        gamma.sort_by_key(|u| *u != one);
        Ok(LatticeC { field: field.clone(), ideal: *ideal, gen: ideal.generator(), gamma })
    }

    pub fn with_gamma(&self, gamma: Vec<Elem>) -> Result<Self> {
        for u in &gamma {
            let (n, d) = self.field.norm(u);
            if n != d {
                return Err(Error::InvalidInput("Γ must consist of units".into()));
            }
        }
        Ok(LatticeC { gamma, ..self.clone() })
    }

    /// Complex generators g, gω.
    pub fn generators(&self) -> [(f64, f64); 2] {
        let w = self.field.omega();
        [self.field.to_c64(&self.gen), self.field.to_c64(&self.field.mul(&self.gen, &w))]
    }

    pub fn covolume(&self) -> f64 {
        let (n, d) = self.field.norm(&self.gen);
        n as f64 / d as f64 * Float::sqrt(-self.field.discriminant() as f64) / 2.0
    }

    /// |ω1| + |ω2|: every fundamental parallelogram has diameter below this.
    pub fn spread(&self) -> f64 {
        let [a, b] = self.generators();
        Float::hypot(a.0, a.1) + Float::hypot(b.0, b.1)
    }

    /// Canonical representative of x mod Λ: g·(fractional parts of x/g).
    pub fn reduce(&self, x: &Elem) -> Result<Elem> {
        let w = self.field.div(x, &self.gen)?;
        let w = self.field.normalize(w);
        let r = Elem { a: w.a.rem_euclid(w.den), b: w.b.rem_euclid(w.den), den: w.den };
        Ok(self.field.normalize(self.field.mul(&self.gen, &r)))
    }

    pub fn contains(&self, x: &Elem) -> bool {
        self.ideal.contains(&self.field, x)
    }

    /// The sublattice u·Λ (as ideal), same Γ.
    pub fn scaled(&self, u: &Elem) -> Result<Self> {
        let ideal = self.ideal.mul(&self.field, &Ideal::principal(&self.field, *u)?);
        Ok(LatticeC { field: self.field.clone(), ideal, gen: self.field.mul(&self.gen, u), gamma: self.gamma.clone() })
    }

    pub fn label(&self) -> String {
        alloc::format!("({})O", self.field.format_elem(&self.field.normalize(self.gen)))
    }
}

/// Points of z + gO of norm at most `nmax`, in the order (u2, u1).
pub(crate) fn enumerate_points(field: &ImagQuadField, g: &Elem, z: &Elem, nmax: f64) -> Result<Vec<Elem>> {
    let (gn, gd) = field.norm(g);
    let bound = nmax * gd as f64 / gn as f64 * (1.0 + 1e-12) + 1e-12;
    let w = field.normalize(field.div(z, g)?);
    let (w1, w2) = (w.a as f64 / w.den as f64, w.b as f64 / w.den as f64);
    let t = field.omega_trace() as f64;
    let dd = -field.discriminant() as f64;
    // N(v1 + v2 ω) = (v1 + t v2/2)² + |d| v2²/4
    let v2max = Float::sqrt(4.0 * bound / dd);
    let u2lo = Float::floor(-v2max - w2) as i128 - 1;
    let u2hi = Float::ceil(v2max - w2) as i128 + 1;
    let mut out = Vec::new();
    for u2 in u2lo..=u2hi {
        let v2 = w2 + u2 as f64;
        let rest = bound - dd * v2 * v2 / 4.0;
        if rest < 0.0 {
            continue;
        }
        let s = Float::sqrt(rest);
        let c = -t * v2 / 2.0 - w1;
        let u1lo = Float::floor(c - s) as i128 - 1;
        let u1hi = Float::ceil(c + s) as i128 + 1;
        for u1 in u1lo..=u1hi {
            let lam = field.add(z, &field.mul(g, &field.elem(u1, u2)));
            let (n, d) = field.norm(&lam);
            if n == 0 {
                continue;
            }
            if (n as f64) / (d as f64) <= nmax * (1.0 + 1e-12) {
                out.push(field.normalize(lam));
            }
        }
    }
    Ok(out)
}

/// Σ_k count_k · h(r0 + kδ) over annular shells, with the lattice-point count
/// in [r, r+δ) bounded by the area of the ρ-thickened annulus over the
/// covolume. `h` must be non-increasing on [r0, ∞).
pub(crate) fn shell_tail(h: impl Fn(f64) -> f64, r0: f64, covol: f64, rho: f64, delta: f64) -> f64 {
    let pi = core::f64::consts::PI;
    let mut total = 0.0;
    let mut k = 0u64;
    loop {
        let r = r0 + k as f64 * delta;
        let inner = if r > rho { r - rho } else { 0.0 };
        let count = pi * ((r + delta + rho) * (r + delta + rho) - inner * inner) / covol;
        let term = count * h(r);
        total += term;
        if (k > 8 && term <= total * 1e-20) || term == 0.0 || k > 5_000_000 {
            break;
        }
        k += 1;
    }
    total * (1.0 + 1e-10) + 1e-290
}

/// Closed-form tail of Σ_{|λ| ≥ r0} |λ|^{-m} (m > 2) by the same shell count.
pub(crate) fn power_tail(m: f64, r0: f64, covol: f64, rho: f64) -> f64 {
    let pi = core::f64::consts::PI;
    let delta = 1.0f64.max(rho);
    let a = r0 - delta;
    if a <= rho || m <= 2.0 {
        return f64::INFINITY;
    }
    let c = pi * (delta + 2.0 * rho) / (covol * delta);
    let v = c * (2.0 * Float::powf(a, 2.0 - m) / (m - 2.0) + delta * Float::powf(a, 1.0 - m) / (m - 1.0));
    v * (1.0 + 1e-10) + 1e-290
}

/// Result of one Kronecker sum.
#[derive(Debug, Clone)]
pub struct KroneckerSum {
    pub value: CBall,
    pub tail: f64,
    /// Largest |λ| summed in the direct part.
    pub radius: f64,
    pub points: usize,
}

impl KroneckerSum {
    pub fn abs_error(&self) -> f64 {
        self.value.rad() * 1.5 + self.tail
    }
}

/// Evaluation context: working precision and cached constants.
#[derive(Debug, Clone)]
pub struct Engine {
    pub prec: u32,
    pub pi: Ball,
    /// Multiplier on the default summation radius (two-radius checks).
    pub radius_scale: f64,
    /// Allow α ∈ {1, 2} at s = 0 (continued value, not certified convergent).
    pub experimental_low_weight: bool,
}

impl Engine {
    pub fn new(prec: u32) -> Self {
        Engine { prec, pi: super::mp::pi(prec), radius_scale: 1.0, experimental_low_weight: false }
    }

    pub fn with_radius_scale(mut self, scale: f64) -> Self {
        self.radius_scale = scale;
        self
    }

    pub fn elem(&self, field: &ImagQuadField, x: &Elem) -> Result<CBall> {
        let x = field.normalize(*x);
        let t = field.omega_trace() as i128;
        let den = BigInt::from(2 * x.den);
        let re = Ball::from_ratio(self.prec, &BigInt::from(2 * x.a + t * x.b), &den);
        let sq = Ball::from_int(self.prec, -field.discriminant()).sqrt()?;
        let im = sq.mul_bigint(&BigInt::from(x.b)).div_bigint(&den);
        Ok(CBall::new(re, im))
    }

    fn ratio(&self, n: i128, d: i128) -> Ball {
        Ball::from_ratio(self.prec, &BigInt::from(n), &BigInt::from(d))
    }

    /// K_α(z, s, gO) for integer s ≥ 0.
    pub fn kronecker(&self, field: &ImagQuadField, g: &Elem, z: &Elem, alpha: u32, s: u32) -> Result<KroneckerSum> {
        if alpha == 0 {
            return Err(Error::InvalidInput("α must be at least 1".into()));
        }
        if s == 0 {
            if alpha < 3 && !self.experimental_low_weight {
                return Err(Error::ConvergenceNotGuaranteed(alloc::format!(
                    "α = {alpha} at s = 0 needs the experimental low-weight path"
                )));
            }
            self.kronecker_theta(field, g, z, alpha)
        } else {
            if alpha + 2 * s <= 2 {
                return Err(Error::ConvergenceNotGuaranteed("α + 2s must exceed 2".into()));
            }
            self.kronecker_direct(field, g, z, alpha, s)
        }
    }

    fn kronecker_theta(&self, field: &ImagQuadField, g: &Elem, z: &Elem, alpha: u32) -> Result<KroneckerSum> {
        let prec = self.prec;
        let a_f = field_covolume(field, g);
        let t0_f = core::f64::consts::PI / a_f;
        let lat = LatticeC::new(field, &Ideal::principal(field, *g)?, None)?;
        let rho = lat.spread();
        let h = field.div(&field.int(2), &field.mul(&field.conj(g), &field.sqrt_d()))?;
        let dual_rho = {
            let w = field.omega();
            let (a, b) = field.to_c64(&h);
            let (c, d) = field.to_c64(&field.mul(&h, &w));
            Float::hypot(a, b) + Float::hypot(c, d)
        };
        let af = alpha as f64;
        let fact = (1..alpha).map(|k| k as f64).product::<f64>();
        let target = Float::powi(2.0f64, -(prec as i32) + 8);
        let pi = core::f64::consts::PI;
        // cut-off x = t0 N (direct) and πA N(μ) (dual)
        let mut xmax = ((prec as f64 + 20.0) * core::f64::consts::LN_2 + 2.0 * af + 10.0) * self.radius_scale;
        let (direct_tail, dual_tail) = loop {
            let r0 = Float::sqrt(xmax / t0_f);
            let direct = shell_tail(
                |r| {
                    let x = t0_f * r * r;
                    Float::powf(r, -af) * Float::exp(-x) * af * Float::powf(x, af - 1.0) / fact
                },
                r0,
                a_f,
                rho,
                rho,
            );
            let m0 = Float::sqrt(xmax / (pi * a_f));
            let p = Float::powf(pi, af + 1.0) / (a_f * fact);
            let dual = shell_tail(
                |r| p * Float::powf(r, af - 2.0) * Float::exp(-pi * a_f * r * r) / (pi * pi),
                m0,
                1.0 / a_f,
                dual_rho,
                dual_rho,
            );
            if direct + dual < target || xmax > 4000.0 {
                break (direct, dual);
            }
            xmax += 10.0;
        };
        let nmax = xmax / t0_f;
        let mmax = xmax / (pi * a_f);

        let pib = &self.pi;
        let sqrt_d = Ball::from_int(prec, -field.discriminant()).sqrt()?;
        let (gn, gd) = field.norm(g);
        // t0 = 2π·gd/(gn·√|d|)
        let t0 = pib.mul_int(2).mul(&self.ratio(gd, gn)).div(&sqrt_d)?;
        let area = self.ratio(gn, gd).mul(&sqrt_d).div_int(2);

        let mut direct = CBall::zero(prec);
        let pts = enumerate_points(field, g, z, nmax)?;
        let mut radius: f64 = 0.0;
        for lam in &pts {
            let (n, d) = field.norm(lam);
            radius = radius.max(Float::sqrt(n as f64 / d as f64));
            let nb = self.ratio(n, d);
            let x = t0.mul(&nb);
            let ex = x.neg().exp()?;
            // e_α(x) = Σ_{k<α} x^k/k!
            let mut poly = Ball::from_int(prec, 1);
            let mut term = Ball::from_int(prec, 1);
            for k in 1..alpha {
                term = term.mul(&x).div_int(k as i64);
                poly = poly.add(&term);
            }
            let lb = self.elem(field, &field.conj(lam))?.powi(alpha as i64)?;
            let w = ex.mul(&poly).div(&nb.powi(alpha))?;
            direct = direct.add(&lb.scale(&w));
        }

        let mut dual = CBall::zero(prec);
        let zero = field.int(0);
        let mus = enumerate_points(field, &h, &zero, mmax)?;
        let pi2 = pib.mul(pib);
        for mu in &mus {
            let (n, d) = field.norm(mu);
            let nb = self.ratio(n, d);
            // μ·z = Tr(μ z̄)/2
            let (tn, td) = field.trace(&field.mul(mu, &field.conj(z)));
            let phase = CBall::root_of_unity_frac(prec, &BigInt::from(tn), &BigInt::from(2 * td));
            let e = pib.mul(&area).mul(&nb).neg().exp()?;
            let lb = self.elem(field, &field.conj(mu))?.powi(alpha as i64)?;
            let w = e.div(&pi2.mul(&nb))?;
            dual = dual.add(&lb.mul(&phase).scale(&w));
        }
        // π^{α+1}(−i)^α/(A(α−1)!)
        let mut pref = pib.powi(alpha + 1).div(&area)?;
        for k in 1..alpha {
            pref = pref.div_int(k as i64);
        }
        let dual = dual.scale(&pref).mul_i_pow(-(alpha as i64));
        Ok(KroneckerSum {
            value: direct.add(&dual),
            tail: direct_tail + dual_tail,
            radius,
            points: pts.len() + mus.len(),
        })
    }

    fn kronecker_direct(&self, field: &ImagQuadField, g: &Elem, z: &Elem, alpha: u32, s: u32) -> Result<KroneckerSum> {
        let prec = self.prec;
        let a_f = field_covolume(field, g);
        let lat = LatticeC::new(field, &Ideal::principal(field, *g)?, None)?;
        let rho = lat.spread();
        let m = (alpha + 2 * s) as f64;
        let target = 1e-14f64.max(Float::powi(2.0f64, -(prec as i32) + 8));
        // smallest radius meeting the target, then scaled
        let mut r0 = 4.0 * rho + 2.0;
        while power_tail(m, r0, a_f, rho) > target {
            r0 *= 1.1;
            if r0 > 1e5 {
                break;
            }
        }
        r0 *= self.radius_scale;
        let tail = power_tail(m, r0, a_f, rho);
        let pts = enumerate_points(field, g, z, r0 * r0)?;
        let mut acc = CBall::zero(prec);
        let mut radius: f64 = 0.0;
        for lam in &pts {
            let (n, d) = field.norm(lam);
            radius = radius.max(Float::sqrt(n as f64 / d as f64));
            let nb = self.ratio(n, d);
            let lb = self.elem(field, &field.conj(lam))?.powi(alpha as i64)?;
            acc = acc.add(&lb.scale(&Ball::from_int(prec, 1).div(&nb.powi(alpha + s))?));
        }
        Ok(KroneckerSum { value: acc, tail, radius, points: pts.len() })
    }
}

pub(crate) fn field_covolume(field: &ImagQuadField, g: &Elem) -> f64 {
    let (n, d) = field.norm(g);
    n as f64 / d as f64 * Float::sqrt(-field.discriminant() as f64) / 2.0
}

impl CBall {
    /// e^{2πi·num/den}.
    pub fn root_of_unity_frac(prec: u32, num: &BigInt, den: &BigInt) -> CBall {
        let (c, s) = super::mp::cos_sin_2pi(prec, num, den);
        CBall::new(c, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::oracle::row_sum;

    #[test]
    fn hurwitz_g4() {
        let k = ImagQuadField::new(-4).unwrap();
        let e = Engine::new(128);
        let r = e.kronecker(&k, &k.int(1), &k.int(0), 4, 0).unwrap();
        let (re, im) = r.value.to_c64();
        assert!((re - 3.151212002153897538).abs() < 1e-14, "{re}");
        assert!(im.abs() < 1e-30 + r.abs_error());
        assert!(r.abs_error() < 1e-30);
    }

    #[test]
    fn theta_split_matches_rows() {
        for d in [-4, -3, -7] {
            let k = ImagQuadField::new(d).unwrap();
            let e = Engine::new(128);
            let g = k.elem(2, 1);
            for z in [k.int(0), Elem { a: 1, b: 0, den: 3 }, Elem { a: 2, b: 3, den: 5 }] {
                for alpha in 3..=6 {
                    let r = e.kronecker(&k, &g, &z, alpha, 0).unwrap();
                    let (v, err) = row_sum(&k, &g, &z, alpha).unwrap();
                    let (re, im) = r.value.to_c64();
                    let diff = Float::hypot(re - v.0, im - v.1);
                    assert!(diff <= err + r.abs_error() + 1e-13, "d={d} z={z:?} α={alpha}: {re},{im} vs {v:?} err {err}");
                }
            }
        }
    }
}
