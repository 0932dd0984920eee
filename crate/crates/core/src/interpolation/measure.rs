//! Finite-level values of the smoothed measure: for each ray class 𝔟 mod 𝔣
//! and each unit coset a + p^n(O⊗Zp), the smoothed Eisenstein value of the
//! Fourier data of δ_a.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use super::{hat_extended, normalizer, Setup};
use crate::cyclo::Cyclo;
use crate::eisenstein::mp::CBall;
use crate::eisenstein::periods::PeriodData;
use crate::eisenstein::series::{smoothed_eisenstein, smoothed_kernel, EisensteinValue};
use crate::eisenstein::Engine;
use crate::error::{Error, Result};
use crate::fourier::TorsionFunction;
use crate::hecke_field::character::unit_at_p;
use crate::hecke_field::{Elem, ImagQuadField};

#[derive(Debug, Clone)]
pub struct MeasureTable {
    pub p: u64,
    pub level: u32,
    pub alpha: u32,
    pub f: String,
    pub c: String,
    pub classes: Vec<Elem>,
    /// Unit representatives (a, b) ↦ a + bω mod p^n; at level 0 the single
    /// coset is the whole unit group, written as an empty vector.
    pub cosets: Vec<Vec<u64>>,
    /// values[i][j]: class i, coset j, before normalization.
    pub values: Vec<Vec<EisensteinValue>>,
    /// |O_𝔣^×|; the table is only built when it is 1.
    pub gamma_order: usize,
}

impl MeasureTable {
    pub fn coset_index(&self, a: &[u64]) -> Option<usize> {
        let m = self.p.pow(self.level);
        let key: Vec<u64> = a.iter().map(|x| x % m.max(1)).collect();
        if self.level == 0 {
            return Some(0);
        }
        self.cosets.iter().position(|c| *c == key)
    }

    /// Values times (α−1)!/Ω^α.
    pub fn normalized(&self, period: &PeriodData) -> Result<Vec<Vec<EisensteinValue>>> {
        let prec = self.values.first().and_then(|r| r.first()).map(|v| v.value.precision()).unwrap_or(64);
        let nz = normalizer(self.alpha, period, prec)?;
        Ok(self.values.iter().map(|row| row.iter().map(|v| v.mul_ball(&nz)).collect()).collect())
    }

    /// Sum over each class of all coset values (the total mass of the units).
    pub fn class_totals(&self) -> Vec<EisensteinValue> {
        self.values
            .iter()
            .map(|row| row.iter().skip(1).fold(row[0].clone(), |acc, v| acc.add(v)))
            .collect()
    }
}

/// Unit cosets of O/p^n in `TorsionFunction` iteration order.
pub fn unit_cosets(field: &ImagQuadField, p: u64, n: u32) -> Vec<Vec<u64>> {
    if n == 0 {
        return alloc::vec![Vec::new()];
    }
    TorsionFunction::zero(p, n, 2, "O_L").iter().map(|(s, _)| s).filter(|s| unit_at_p(field, p, s)).collect()
}

/// Fourier data of the indicator of the unit group at level 1.
fn all_units_rho(field: &ImagQuadField, p: u64) -> Result<TorsionFunction> {
    let one = TorsionFunction::from_fn(p, 1, 2, "O_L", |_| Cyclo::one(1));
    hat_extended(field, &one)
}

/// Fourier data of 1_{a + p^n} viewed at level m ≥ n (for n = 0: all units).
fn coset_rho(field: &ImagQuadField, p: u64, a: &[u64], n: u32, m: u32) -> Result<TorsionFunction> {
    let q = p.pow(n);
    let ind = TorsionFunction::from_fn(p, m, 2, "O_L", |s| {
        if s.iter().zip(a).all(|(x, y)| x % q == *y) {
            Cyclo::one(1)
        } else {
            Cyclo::zero(1)
        }
    });
    hat_extended(field, &ind)
}

/// The table at level n. Level 0 evaluates the whole-unit-group data
/// directly; higher levels go through the per-point kernel.
pub fn build_measure_table(engine: &Engine, setup: &Setup, alpha: u32, n: u32) -> Result<MeasureTable> {
    let field = &setup.field;
    let p = setup.p;
    let classes = setup.class_reps()?;
    let cosets = unit_cosets(field, p, n);
    let mut values = Vec::with_capacity(classes.len());
    let gamma_order = 1;
    if n == 0 {
        let rho = all_units_rho(field, p)?;
        for b in &classes {
            values.push(alloc::vec![smoothed_eisenstein(engine, field, &rho, alpha, &setup.f, b, &setup.c)?]);
        }
    } else {
        let q = p.pow(n);
        let roots: Vec<CBall> = (0..q).map(|k| CBall::root_of_unity(engine.prec, -(k as i64), q)).collect();
        let points: Vec<Vec<u64>> = TorsionFunction::zero(p, n, 2, "O_L").iter().map(|(s, _)| s).collect();
        let pts: Vec<Elem> = points.iter().map(|s| field.elem(s[0] as i128, s[1] as i128)).collect();
        let scale = (q * q) as i64;
        for b in &classes {
            let kernel = smoothed_kernel(engine, field, p, n, alpha, &setup.f, b, &setup.c)?;
            let err_sum: f64 = kernel.iter().map(|k| k.error()).sum();
            let mut row = Vec::with_capacity(cosets.len());
            for a in &cosets {
                let ae = field.elem(a[0] as i128, a[1] as i128);
                let mut acc = CBall::zero(engine.prec);
                for (y, k) in pts.iter().zip(&kernel) {
                    let t = field.trace(&field.mul(y, &ae)).0.rem_euclid(q as i128) as usize;
                    acc = acc.add(&k.value.mul(&roots[t]));
                }
                let v = acc.div_int(scale);
                row.push(EisensteinValue {
                    abs_error: err_sum / (q * q) as f64 + v.rad(),
                    value: v,
                    alpha,
                    s: 0,
                    lattice: alloc::format!("class {}", field.format_elem(b)),
                    radius: kernel.iter().map(|k| k.radius).fold(0.0, f64::max),
                    points: kernel.iter().map(|k| k.points).sum(),
                });
            }
            values.push(row);
        }
    }
    Ok(MeasureTable {
        p,
        level: n,
        alpha,
        f: setup.f_label(),
        c: field.format_elem(&setup.c),
        classes,
        cosets,
        values,
        gamma_order,
    })
}

/// Coarse value against the sum of its refinements, per class and coset.
#[derive(Debug, Clone)]
pub struct RefinementReport {
    pub coarse_level: u32,
    pub max_abs_diff: f64,
    /// max_abs_diff divided by the largest coarse value.
    pub max_rel_diff: f64,
    pub max_error: f64,
    pub pass: bool,
}

pub fn refinement_check(coarse: &MeasureTable, fine: &MeasureTable, tol: f64) -> Result<RefinementReport> {
    if fine.level != coarse.level + 1 || fine.p != coarse.p || fine.classes != coarse.classes {
        return Err(Error::LevelMismatch("refinement needs the same setup one level apart".into()));
    }
    let q = coarse.p.pow(coarse.level);
    let mut max_diff: f64 = 0.0;
    let mut max_err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (i, row) in coarse.values.iter().enumerate() {
        for (j, cv) in row.iter().enumerate() {
            let a = &coarse.cosets[j];
            let mut sum = EisensteinValue::zero(cv.value.precision(), cv.alpha, 0, "refined");
            for (k, a2) in fine.cosets.iter().enumerate() {
                if coarse.level == 0 || a2.iter().zip(a).all(|(x, y)| x % q == *y) {
                    sum = sum.add(&fine.values[i][k]);
                }
            }
            let (dr, di) = cv.sub(&sum).to_c64();
            let (vr, vi) = cv.to_c64();
            max_diff = max_diff.max(Float::hypot(dr, di));
            max_err = max_err.max(cv.error() + sum.error());
            scale = scale.max(Float::hypot(vr, vi));
        }
    }
    let rel = max_diff / scale.max(f64::MIN_POSITIVE);
    Ok(RefinementReport { coarse_level: coarse.level, max_abs_diff: max_diff, max_rel_diff: rel, max_error: max_err, pass: rel < tol })
}

/// The exact form of the refinement identity in the Fourier algebra: the
/// level-n data of 1_{a+p^n}, refined to level n+1, equals the level-(n+1)
/// data of the same indicator; at n = 0, the unit-group data is the sum of
/// the level-1 coset data. `limit` caps the number of cosets checked.
pub fn refinement_exact(field: &ImagQuadField, p: u64, n: u32, limit: Option<usize>) -> Result<bool> {
    if n == 0 {
        let total = all_units_rho(field, p)?;
        let mut sum = TorsionFunction::zero(p, 1, 2, "O_L");
        for a in unit_cosets(field, p, 1) {
            sum = sum.add(&coset_rho(field, p, &a, 1, 1)?)?;
        }
        return Ok(total.equals(&sum));
    }
    let cosets = unit_cosets(field, p, n);
    let take = limit.unwrap_or(cosets.len());
    for a in cosets.iter().take(take) {
        let coarse = coset_rho(field, p, a, n, n)?.refine(n + 1)?;
        let fine = coset_rho(field, p, a, n, n + 1)?;
        if !coarse.equals(&fine) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke_field::Ideal;

    fn setup(p: u64, c: i128) -> Setup {
        let k = ImagQuadField::new(-4).unwrap();
        let f = Ideal::principal(&k, k.int(3)).unwrap();
        Setup::new(&k, p, &f, &k.int(c)).unwrap()
    }

    #[test]
    fn exact_refinement_low_levels() {
        let k = ImagQuadField::new(-4).unwrap();
        for p in [5, 7] {
            assert!(refinement_exact(&k, p, 0, None).unwrap());
        }
        assert!(refinement_exact(&k, 5, 1, Some(3)).unwrap());
    }

    #[test]
    fn level_one_matches_direct_evaluation() {
        let e = Engine::new(96);
        let s = setup(5, 7);
        let t = build_measure_table(&e, &s, 4, 1).unwrap();
        assert_eq!(t.cosets.len(), 16);
        for j in [0usize, 7] {
            let rho = coset_rho(&s.field, 5, &t.cosets[j], 1, 1).unwrap();
            let d = smoothed_eisenstein(&e, &s.field, &rho, 4, &s.f, &t.classes[0], &s.c).unwrap();
            let (a, b) = d.sub(&t.values[0][j]).to_c64();
            assert!(Float::hypot(a, b) < 1e-20, "{a} {b}");
        }
        let t0 = build_measure_table(&e, &s, 4, 0).unwrap();
        let r = refinement_check(&t0, &t, 1e-9).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
