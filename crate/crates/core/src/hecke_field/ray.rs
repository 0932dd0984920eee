//! Ray class groups mod m for class-number-one fields: (O/m)^× modulo units.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::field::{Elem, ImagQuadField};
use super::ideal::{Hnf, Ideal};
use crate::error::{Error, Result};

/// Which units are divided out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitsMode {
    /// All of O_L^×.
    GlobalUnits,
    /// Only the units congruent to 1 modulo the given ideal.
    OneUnitsMod(Ideal),
}

#[derive(Debug, Clone)]
pub struct RayClassData {
    pub modulus: Ideal,
    pub mode: UnitsMode,
    hnf: Hnf,
    /// Class index of every invertible residue (x, y).
    class_of: BTreeMap<(i128, i128), usize>,
    /// Size of (O/m)^×.
    pub unit_residues: usize,
    /// Size of the unit image in (O/m)^×.
    pub unit_image: usize,
    /// One residue per class, the first met in residue order.
    residue_reps: Vec<(i128, i128)>,
}

/// Residue classes (x, y) of O/m with the canonical Hermite ranges.
pub(crate) fn residues(hnf: &Hnf) -> impl Iterator<Item = (i128, i128)> + '_ {
    (0..hnf.c).flat_map(move |y| (0..hnf.a).map(move |x| (x, y)))
}

pub(crate) fn is_invertible_mod(field: &ImagQuadField, m: &Ideal, x: &Elem) -> bool {
    if field.is_zero(x) {
        return m.norm(field) == (1, 1);
    }
    match Ideal::principal(field, *x) {
        Ok(i) => i.is_coprime(field, m).unwrap_or(false),
        Err(_) => false,
    }
}

impl RayClassData {
    pub fn new(field: &ImagQuadField, modulus: &Ideal, mode: UnitsMode) -> Result<Self> {
        if !modulus.is_integral(field) {
            return Err(Error::InvalidInput("modulus must be integral".into()));
        }
        let hnf = modulus.hnf(field)?;
        let units: Vec<Elem> = match mode {
            UnitsMode::GlobalUnits => field.units(),
            UnitsMode::OneUnitsMod(f) => field
                .units()
                .into_iter()
                .filter(|u| f.contains(field, &field.sub(u, &field.int(1))))
                .collect(),
        };
        let mut image: Vec<(i128, i128)> = units
            .iter()
            .map(|u| super::ideal::reduce_with(&hnf, u))
            .collect::<Result<_>>()?;
        image.sort();
        image.dedup();
        let mut class_of = BTreeMap::new();
        let mut residue_reps = Vec::new();
        let mut unit_residues = 0;
        for r in residues(&hnf) {
            let x = field.elem(r.0, r.1);
            if !is_invertible_mod(field, modulus, &x) {
                continue;
            }
            unit_residues += 1;
            if class_of.contains_key(&r) {
                continue;
            }
            let idx = residue_reps.len();
            residue_reps.push(r);
            for u in &units {
                let y = super::ideal::reduce_with(&hnf, &field.mul(&x, u))?;
                class_of.insert(y, idx);
            }
        }
        Ok(RayClassData {
            modulus: *modulus,
            mode,
            hnf,
            class_of,
            unit_residues,
            unit_image: image.len(),
            residue_reps,
        })
    }

    pub fn order(&self) -> usize {
        self.residue_reps.len()
    }

    /// Class of the principal ideal (x) for x integral and prime to the modulus.
    pub fn class_of_element(&self, field: &ImagQuadField, x: &Elem) -> Result<usize> {
        let num = Elem { den: 1, ..field.normalize(*x) };
        let den = field.normalize(*x).den;
        let r = super::ideal::reduce_with(&self.hnf, &num)?;
        let c = *self.class_of.get(&r).ok_or(Error::NotCoprimeToConductor)?;
        if den == 1 {
            return Ok(c);
        }
        // x = num/den: find the class k with class(den)·k = c by search
        let rd = super::ideal::reduce_with(&self.hnf, &field.int(den))?;
        self.class_of.get(&rd).ok_or(Error::NotCoprimeToConductor)?;
        for (k, rep) in self.residue_reps.iter().enumerate() {
            let prod = field.mul(&field.elem(rep.0, rep.1), &field.int(den));
            if self.class_of.get(&super::ideal::reduce_with(&self.hnf, &prod)?) == Some(&c) {
                return Ok(k);
            }
        }
        Err(Error::NotCoprimeToConductor)
    }

    pub fn class_of_ideal(&self, field: &ImagQuadField, a: &Ideal) -> Result<usize> {
        self.class_of_element(field, &a.generator())
    }

    /// For each class, the integral generator of smallest norm prime to every
    /// ideal in `avoid` (ties broken by the element order).
    pub fn representatives(&self, field: &ImagQuadField, avoid: &[Ideal]) -> Result<Vec<Elem>> {
        let mut out: Vec<Option<Elem>> = alloc::vec![None; self.order()];
        let mut left = self.order();
        let mut n = 1i128;
        while left > 0 {
            if n > 100_000 {
                return Err(Error::InvalidInput("no representatives found".into()));
            }
            for x in field.elements_of_norm(n) {
                let ok = avoid.iter().all(|a| {
                    Ideal::principal(field, x).map(|i| i.is_coprime(field, a).unwrap_or(false)).unwrap_or(false)
                });
                if !ok {
                    continue;
                }
                if let Ok(c) = self.class_of_element(field, &x) {
                    if out[c].is_none() {
                        out[c] = Some(x);
                        left -= 1;
                    }
                }
            }
            n += 1;
        }
        Ok(out.into_iter().map(|x| x.expect("filled")).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_mod_three() {
        let k = ImagQuadField::new(-4).unwrap();
        let m = Ideal::principal(&k, k.int(3)).unwrap();
        let r = RayClassData::new(&k, &m, UnitsMode::GlobalUnits).unwrap();
        assert_eq!(r.unit_residues, 8);
        assert_eq!(r.unit_image, 4);
        assert_eq!(r.order(), 2);
    }

    #[test]
    fn eisenstein_mod_two() {
        let k = ImagQuadField::new(-3).unwrap();
        let m = Ideal::principal(&k, k.int(2)).unwrap();
        let r = RayClassData::new(&k, &m, UnitsMode::GlobalUnits).unwrap();
        assert_eq!(r.unit_residues, 3);
        assert_eq!(r.order(), 1);
    }

    #[test]
    fn trivial_modulus() {
        let k = ImagQuadField::new(-7).unwrap();
        let r = RayClassData::new(&k, &Ideal::unit(&k), UnitsMode::GlobalUnits).unwrap();
        assert_eq!(r.order(), 1);
    }
}
