//! Run configuration: every arithmetic object is pinned by an explicit generator.
//!
//! Elements a + bω are written `[a, b]`, with ω = i for d = −4 and
//! (1 + √d)/2 otherwise.

use std::path::Path;

use anyhow::{bail, Context};
use hecke_padic_core::hecke_field::{primes_above, CharComponent, Elem, HeckeCharacter, Ideal, ImagQuadField, PrimeIdeal};
use hecke_padic_core::interpolation::Setup;
use hecke_padic_core::Error;
use serde::{Deserialize, Serialize};

pub const DEFAULT_CONFIG: &str = include_str!("../configs/default.toml");

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub discriminant: i64,
    pub p: u64,
    pub f: [i64; 2],
    pub c: [i64; 2],
    /// Second smoothing element for the 𝔠-independence check.
    #[serde(default)]
    pub c_alt: Option<[i64; 2]>,
    #[serde(default)]
    pub characters: Vec<CharacterSpec>,
    #[serde(default)]
    pub precision: Precision,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub congruence: CongruenceSection,
    #[serde(default)]
    pub eisenstein: EisensteinSection,
    #[serde(default)]
    pub lvalue: LValueSection,
    #[serde(default)]
    pub fourier: FourierSection,
    #[serde(default)]
    pub charvar: CharvarSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Precision {
    #[serde(default = "default_padic")]
    pub padic: i64,
    #[serde(default = "default_bits")]
    pub bits: u32,
    /// Multiplier on the engine's default summation radius.
    #[serde(default = "default_radius")]
    pub radius_scale: f64,
}

fn default_padic() -> i64 {
    20
}
fn default_bits() -> u32 {
    128
}
fn default_radius() -> f64 {
    1.0
}

impl Default for Precision {
    fn default() -> Self {
        Precision { padic: default_padic(), bits: default_bits(), radius_scale: default_radius() }
    }
}

/// Either explicit components or a family to enumerate.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterSpec {
    pub alpha: u32,
    #[serde(default)]
    pub components: Vec<ComponentSpec>,
    #[serde(default)]
    pub family: Option<FamilySpec>,
}

/// A prime given by a generator (`prime`) or as every prime above a
/// rational prime (`above`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeSpec {
    #[serde(default)]
    pub prime: Option<[i64; 2]>,
    #[serde(default)]
    pub above: Option<u64>,
    #[serde(default = "one")]
    pub exponent: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub prime: [i64; 2],
    #[serde(default = "one")]
    pub exponent: u32,
    /// ε(g) = ζ_N^image on the first generator g of (O/𝔭^e)^×.
    pub image: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub moduli: Vec<PrimeSpec>,
    #[serde(default = "max_order")]
    pub max_order: u64,
}

fn max_order() -> u64 {
    4
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub level: Option<u32>,
}

fn default_tol() -> f64 {
    1e-6
}

impl Default for VerifySection {
    fn default() -> Self {
        VerifySection { tol: default_tol(), level: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CongruenceSection {
    #[serde(default = "default_alphas")]
    pub alphas: Vec<u32>,
    /// Modulus exponent: congruence mod p^k between α and α + (p−1)p^{k−1}.
    #[serde(default = "one")]
    pub k: u32,
    /// Highest measure-table level for the refinement checks.
    #[serde(default = "default_levels")]
    pub max_level: u32,
    #[serde(default = "default_kmax")]
    pub kmax: u64,
    #[serde(default = "default_bound")]
    pub bound: u64,
}

fn default_alphas() -> Vec<u32> {
    vec![4, 8]
}
fn default_levels() -> u32 {
    2
}
fn default_kmax() -> u64 {
    24
}
fn default_bound() -> u64 {
    1_000_000
}

impl Default for CongruenceSection {
    fn default() -> Self {
        CongruenceSection {
            alphas: default_alphas(),
            k: 1,
            max_level: default_levels(),
            kmax: default_kmax(),
            bound: default_bound(),
        }
    }
}

/// One value K_α(z, s, gO) = Σ'_{λ ∈ z + gO} λ^{-α} N(λ)^{-s}.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EisensteinSection {
    #[serde(default = "unit_gen")]
    pub lattice: [i64; 2],
    /// z = (a + bω)/den.
    #[serde(default = "zero_point")]
    pub point: [i64; 3],
    #[serde(default = "default_alpha")]
    pub alpha: u32,
    #[serde(default)]
    pub s: u32,
}

fn unit_gen() -> [i64; 2] {
    [1, 0]
}
fn zero_point() -> [i64; 3] {
    [0, 0, 1]
}
fn default_alpha() -> u32 {
    4
}

impl Default for EisensteinSection {
    fn default() -> Self {
        EisensteinSection { lattice: unit_gen(), point: zero_point(), alpha: default_alpha(), s: 0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LValueSection {
    #[serde(default)]
    pub s: Vec<u32>,
    /// Also report the recognized algebraic value at s = 0.
    #[serde(default = "yes")]
    pub recognize: bool,
    #[serde(default = "default_lkmax")]
    pub kmax: u64,
    #[serde(default = "default_bound")]
    pub bound: u64,
}

fn yes() -> bool {
    true
}
fn default_lkmax() -> u64 {
    12
}

impl Default for LValueSection {
    fn default() -> Self {
        LValueSection { s: vec![0], recognize: true, kmax: default_lkmax(), bound: default_bound() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierSection {
    #[serde(default = "default_fourier_primes")]
    pub primes: Vec<u64>,
    #[serde(default = "two")]
    pub max_level: u32,
    #[serde(default = "two")]
    pub max_rank: u32,
    #[serde(default = "default_cases")]
    pub cases: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_fourier_primes() -> Vec<u64> {
    vec![2, 3, 5]
}
fn two() -> u32 {
    2
}
fn default_cases() -> usize {
    1000
}

impl Default for FourierSection {
    fn default() -> Self {
        FourierSection { primes: default_fourier_primes(), max_level: 2, max_rank: 2, cases: default_cases(), seed: 0 }
    }
}

/// A character point of O⊗Zp to classify against W(Σ).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PointSpec {
    Trivial,
    SigmaAvatar { alpha: u32 },
    NormInverse,
    /// s ↦ z^{β·s} with z an integer ≡ 1 mod p.
    Explicit { beta: [i64; 2], z: i64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharvarSection {
    #[serde(default = "default_points")]
    pub points: Vec<PointSpec>,
    #[serde(default)]
    pub primes: Vec<u64>,
}

fn default_points() -> Vec<PointSpec> {
    vec![PointSpec::Trivial, PointSpec::SigmaAvatar { alpha: 4 }, PointSpec::NormInverse]
}

impl Default for CharvarSection {
    fn default() -> Self {
        CharvarSection { points: default_points(), primes: Vec::new() }
    }
}

/// Everything derived from a validated config.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub field: ImagQuadField,
    pub setup: Setup,
    pub c_alt: Option<Elem>,
    pub characters: Vec<HeckeCharacter>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
            None => DEFAULT_CONFIG.to_string(),
        };
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        toml::from_str(text).context("parsing config")
    }

    pub fn elem(field: &ImagQuadField, g: [i64; 2]) -> Elem {
        field.elem(g[0] as i128, g[1] as i128)
    }

    /// Field, coprimality of 𝔣, 𝔠 and p, and the character list.
    pub fn resolve(&self) -> anyhow::Result<Resolved> {
        let field = ImagQuadField::new(self.discriminant)?;
        if self.p < 2 || !is_prime(self.p) {
            bail!("p = {} is not a prime", self.p);
        }
        let f_gen = Self::elem(&field, self.f);
        let f = Ideal::principal(&field, f_gen).context("f")?;
        let setup = Setup::new(&field, self.p, &f, &Self::elem(&field, self.c)).map_err(coprimality)?;
        let c_alt = match self.c_alt {
            Some(g) => {
                let e = Self::elem(&field, g);
                setup.with_c(&e).map_err(coprimality)?;
                Some(e)
            }
            None => None,
        };
        let mut characters = Vec::new();
        for spec in &self.characters {
            characters.extend(spec.resolve(&field)?);
        }
        Ok(Resolved { field, setup, c_alt, characters })
    }
}

fn coprimality(e: Error) -> anyhow::Error {
    match e {
        Error::CoprimalityViolation(m) => {
            anyhow::anyhow!("config violates the coprimality rule (f, c and p pairwise coprime): {m}")
        }
        other => other.into(),
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_of(field: &ImagQuadField, g: [i64; 2]) -> anyhow::Result<PrimeIdeal> {
    let ideal = Ideal::principal(field, RunConfig::elem(field, g))?;
    match ideal.factor(field).as_slice() {
        [(pr, 1)] => Ok(*pr),
        _ => bail!("{g:?} does not generate a prime ideal"),
    }
}

impl PrimeSpec {
    fn resolve(&self, field: &ImagQuadField) -> anyhow::Result<Vec<(PrimeIdeal, u32)>> {
        match (self.prime, self.above) {
            (Some(g), None) => Ok(vec![(prime_of(field, g)?, self.exponent)]),
            (None, Some(q)) => Ok(primes_above(field, q).into_iter().map(|pr| (pr, self.exponent)).collect()),
            _ => bail!("a modulus needs exactly one of `prime` and `above`"),
        }
    }
}

impl CharacterSpec {
    pub fn resolve(&self, field: &ImagQuadField) -> anyhow::Result<Vec<HeckeCharacter>> {
        match (&self.family, self.components.is_empty()) {
            (Some(fam), true) => {
                let mut moduli = Vec::new();
                for m in &fam.moduli {
                    moduli.extend(m.resolve(field)?);
                }
                let chars = HeckeCharacter::enumerate(field, self.alpha, &moduli, fam.max_order)?;
                if chars.is_empty() {
                    bail!("no character of weight {} and order ≤ {} on this modulus", self.alpha, fam.max_order);
                }
                Ok(chars)
            }
            (None, _) => {
                let comps = self
                    .components
                    .iter()
                    .map(|c| Ok(CharComponent::new(field, prime_of(field, c.prime)?, c.exponent, c.image)?))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                Ok(vec![HeckeCharacter::new(field.clone(), self.alpha, comps)?])
            }
            (Some(_), false) => bail!("give either `components` or `family`, not both"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_resolves() {
        let cfg = RunConfig::load(None).unwrap();
        let r = cfg.resolve().unwrap();
        assert!(!r.characters.is_empty());
    }

    #[test]
    fn c_dividing_p_names_the_rule() {
        let mut cfg = RunConfig::load(None).unwrap();
        cfg.c = [2, 1];
        let msg = cfg.resolve().unwrap_err().to_string();
        assert!(msg.contains("coprimality"), "{msg}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::parse("discriminant = -4\np = 5\nf = [3, 0]\nc = [7, 0]\nbogus = 1\n").is_err());
    }
}
