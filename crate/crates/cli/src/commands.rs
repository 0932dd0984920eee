//! One function per subcommand; each returns its pass flag and JSON results.

use anyhow::Context;
use hecke_padic_core::eisenstein::oracle::row_sum;
use hecke_padic_core::eisenstein::periods::period_omega;
use hecke_padic_core::eisenstein::{full_l, ideal_sum_oracle, Engine};
use hecke_padic_core::fourier::analytic::{is_w_analytic, CharacterPoint};
use hecke_padic_core::fourier::{finite_fourier, TorsionFunction};
use hecke_padic_core::hecke_field::{euler_factor, local_factor, Elem, HeckeCharacter, PadicEmbedding};
use hecke_padic_core::interpolation::measure::refinement_check;
use hecke_padic_core::interpolation::{
    algebraic_l_value, build_measure_table, c_independence, congruence_check, check_interpolation, InterpolationReport, VerifyOptions,
};
use hecke_padic_core::PadicNumber;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::acceptance;
use crate::config::{PointSpec, Resolved, RunConfig};
use crate::report::{cball, cyclo, float, torsion, value};

/// Command-line overrides shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub precision_padic: Option<i64>,
    pub precision_bits: Option<u32>,
    pub tol: Option<f64>,
    pub experimental_low_weight: bool,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(n) = self.precision_padic {
            cfg.precision.padic = n;
        }
        if let Some(b) = self.precision_bits {
            cfg.precision.bits = b;
        }
        if let Some(t) = self.tol {
            cfg.verify.tol = t;
        }
    }
}

pub struct Outcome {
    pub pass: bool,
    pub results: Value,
}

fn engine(cfg: &RunConfig, o: &Overrides) -> Engine {
    let mut e = Engine::new(cfg.precision.bits).with_radius_scale(cfg.precision.radius_scale);
    e.experimental_low_weight = o.experimental_low_weight;
    e
}

pub fn fourier(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let fc = &cfg.fourier;
    let suite = acceptance::criterion1(fc.seed, fc.cases);
    // a small worked example: δ at a point of (O/p)² and its transform
    let p = cfg.p;
    let delta = TorsionFunction::delta(p, 1, 2, "O_L", &[1, 0]);
    let table = finite_fourier(&delta, 1)?;
    let results = json!({
        "checks": suite,
        "example": { "function": torsion(&delta), "transform": torsion(&table.as_function("dual")) },
    });
    Ok(Outcome { pass: suite.checks_pass, results })
}

fn point(e: &PadicEmbedding, spec: &PointSpec, prec: i64) -> anyhow::Result<CharacterPoint> {
    Ok(match spec {
        PointSpec::Trivial => CharacterPoint::new(vec![1, 0], PadicNumber::one(e.omega().field().clone(), prec)?)?,
        PointSpec::SigmaAvatar { alpha } => e.sigma_avatar_point(*alpha)?,
        PointSpec::NormInverse => e.norm_inverse_point()?,
        PointSpec::Explicit { beta, z } => CharacterPoint::new(beta.to_vec(), PadicNumber::from_int(e.omega().field().clone(), *z, prec)?)?,
    })
}

pub fn charvar(cfg: &RunConfig, r: &Resolved) -> anyhow::Result<Outcome> {
    let primes = if cfg.charvar.primes.is_empty() { vec![cfg.p] } else { cfg.charvar.primes.clone() };
    let prec = cfg.precision.padic.min(16);
    let mut rows = Vec::new();
    for p in primes {
        let e = PadicEmbedding::new(&r.field, p, prec)?;
        let w = e.w_sigma()?;
        for spec in &cfg.charvar.points {
            let verdict = match point(&e, spec, prec).and_then(|pt| Ok(is_w_analytic(&pt, &w)?)) {
                Ok(b) => json!(if b { "analytic" } else { "not analytic" }),
                Err(x) => json!(format!("undecided: {x}")),
            };
            rows.push(json!({ "p": p, "residue_degree": e.residue_degree(), "point": spec, "w_sigma": verdict }));
        }
    }
    Ok(Outcome { pass: true, results: json!({ "classifications": rows }) })
}

pub fn eisenstein(cfg: &RunConfig, r: &Resolved, o: &Overrides) -> anyhow::Result<Outcome> {
    let es = &cfg.eisenstein;
    let k = &r.field;
    let g = RunConfig::elem(k, es.lattice);
    let z = Elem { a: es.point[0] as i128, b: es.point[1] as i128, den: es.point[2] as i128 };
    let z = k.normalize(z);
    let e = engine(cfg, o);
    let v = e.kronecker(k, &g, &z, es.alpha, es.s)?;
    let mut out = json!({
        "lattice": k.format_elem(&g),
        "point": es.point,
        "alpha": es.alpha,
        "s": es.s,
        "value": cball(&v.value),
        "abs_error": float(v.abs_error()),
        "radius": float(v.radius),
        "points": v.points,
    });
    let mut pass = true;
    if es.s == 0 && es.alpha >= 3 {
        let (ov, oe) = row_sum(k, &g, &z, es.alpha)?;
        let (re, im) = v.value.to_c64();
        let gap = (re - ov.0).hypot(im - ov.1);
        pass = gap <= oe + v.abs_error() + 1e-13 * (1.0 + ov.0.hypot(ov.1));
        out["row_oracle"] = json!({ "re": float(ov.0), "im": float(ov.1), "error": float(oe), "gap": float(gap), "agree": pass });
    }
    Ok(Outcome { pass, results: out })
}

pub fn lvalue(cfg: &RunConfig, r: &Resolved, o: &Overrides) -> anyhow::Result<Outcome> {
    let e = engine(cfg, o);
    let per = period_omega(&r.field, cfg.precision.bits)?;
    let f = r.setup.f;
    let rows: Vec<(bool, Value)> = r
        .characters
        .par_iter()
        .map(|chi| {
            let mut pass = true;
            let mut vals = Vec::new();
            for &s in &cfg.lvalue.s {
                match full_l(&e, chi, s, &f, &[]) {
                    Ok(v) => {
                        let mut row = json!({ "s": s, "value": value(&v) });
                        if s >= 1 {
                            let m = hecke_padic_core::eisenstein::series::l_modulus(chi, &f);
                            if let Ok((ov, oe)) = m.and_then(|m| ideal_sum_oracle(chi, s, &m, None, 1e-11)) {
                                let (re, im) = v.to_c64();
                                let gap = (re - ov.0).hypot(im - ov.1);
                                let agree = gap <= oe + v.error() + 1e-12;
                                pass &= agree;
                                row["ideal_sum_oracle"] = json!({ "re": float(ov.0), "im": float(ov.1), "error": float(oe), "agree": agree });
                            }
                        }
                        vals.push(row);
                    }
                    Err(x) => {
                        pass = false;
                        vals.push(json!({ "s": s, "error": x.to_string() }));
                    }
                }
            }
            let mut row = json!({ "character": chi.label(), "values": vals });
            if cfg.lvalue.recognize && cfg.lvalue.s.contains(&0) {
                row["algebraic"] = match algebraic_l_value(&e, chi, &f, &[], &per, cfg.lvalue.kmax, cfg.lvalue.bound) {
                    Ok(a) => json!({ "conductor": a.conductor, "element": cyclo(&a.element), "denominator": a.denominator }),
                    Err(x) => json!({ "error": x.to_string() }),
                };
            }
            (pass, row)
        })
        .collect();
    let pass = rows.iter().all(|(p, _)| *p);
    Ok(Outcome { pass, results: json!({ "f": r.setup.f_label(), "period_model": per.model_id, "characters": rows.into_iter().map(|x| x.1).collect::<Vec<_>>() }) })
}

pub fn local_factors(r: &Resolved) -> anyhow::Result<Outcome> {
    let s = &r.setup;
    let mut rows = Vec::new();
    let mut pass = true;
    for chi in &r.characters {
        let row = (|| -> hecke_padic_core::Result<Value> {
            let l = local_factor(chi, s.p, &s.f, 0)?;
            Ok(json!({
                "character": chi.label(),
                "local": cyclo(&l.value),
                "decomposition": { "c": r.field.format_elem(&l.c), "n": r.field.format_elem(&l.n_gen), "level": l.level },
                "euler": cyclo(&euler_factor(chi, s.p)?),
                "c_factor": cyclo(&s.c_factor(chi)?),
            }))
        })();
        match row {
            Ok(v) => rows.push(v),
            Err(x) => {
                pass = false;
                rows.push(json!({ "character": chi.label(), "error": x.to_string() }));
            }
        }
    }
    Ok(Outcome { pass, results: json!({ "p": s.p, "f": s.f_label(), "c": r.field.format_elem(&s.c), "characters": rows }) })
}

pub fn interpolation_json(r: &InterpolationReport) -> Value {
    json!({
        "character": r.character,
        "alpha": r.alpha,
        "order": r.order,
        "discriminant": r.discriminant,
        "p": r.p,
        "f": r.f,
        "c": r.c,
        "c_norm": r.c_norm.to_string(),
        "level": r.level,
        "class_reps": r.class_reps,
        "lhs": value(&r.lhs),
        "rhs": value(&r.rhs),
        "factors": {
            "local": cyclo(&r.local),
            "local_perturbed": r.local_perturbed,
            "decomposition": { "c": r.decomposition_c, "n": r.decomposition_n },
            "c_factor": cyclo(&r.c_factor),
            "euler": cyclo(&r.euler),
            "l_value": value(&r.l_value),
        },
        "omega": cball(&r.omega),
        "omega_model": r.omega_model,
        "normalizer": cball(&r.normalizer),
        "fourier": { "level": r.fourier.level, "entries": r.fourier.entries, "nonzero": r.fourier.nonzero, "checksum": format!("{:016x}", r.fourier.checksum) },
        "discrepancy": float(r.discrepancy),
        "error_floor": float(r.error_floor),
        "tol": float(r.tol),
        "pass": r.pass,
    })
}

pub fn verify_interpolation(cfg: &RunConfig, r: &Resolved, o: &Overrides) -> anyhow::Result<Outcome> {
    let e = engine(cfg, o);
    let per = period_omega(&r.field, cfg.precision.bits)?;
    let opts = VerifyOptions { tol: cfg.verify.tol, level: cfg.verify.level, ..VerifyOptions::default() };
    let rows: Vec<(bool, Value)> = r
        .characters
        .par_iter()
        .map(|chi: &HeckeCharacter| {
            let mut pass = true;
            let mut row = match check_interpolation(&e, &r.setup, chi, &per, &opts) {
                Ok(rep) => {
                    pass &= rep.pass;
                    interpolation_json(&rep)
                }
                Err(x) => {
                    pass = false;
                    json!({ "character": chi.label(), "error": x.to_string() })
                }
            };
            if let Some(c2) = &r.c_alt {
                row["c_independence"] = match c_independence(&e, &r.setup, c2, chi, &per, cfg.verify.tol) {
                    Ok(ci) => {
                        pass &= ci.pass;
                        json!({ "c1": ci.c1, "c2": ci.c2, "ratio1": value(&ci.ratio1), "ratio2": value(&ci.ratio2), "discrepancy": float(ci.discrepancy), "pass": ci.pass })
                    }
                    Err(x) => {
                        pass = false;
                        json!({ "error": x.to_string() })
                    }
                };
            }
            (pass, row)
        })
        .collect();
    let pass = !rows.is_empty() && rows.iter().all(|(p, _)| *p);
    Ok(Outcome { pass, results: json!({ "period_model": per.model_id, "period_provenance": per.provenance, "reports": rows.into_iter().map(|x| x.1).collect::<Vec<_>>() }) })
}

pub fn congruence(cfg: &RunConfig, r: &Resolved, o: &Overrides) -> anyhow::Result<Outcome> {
    let cs = &cfg.congruence;
    let e = engine(cfg, o);
    let per = period_omega(&r.field, cfg.precision.bits)?;
    let p = r.setup.p;
    let mut pass = true;
    let alpha0 = *cs.alphas.first().context("congruence needs at least one weight")?;
    let tables: Vec<_> = (0..=cs.max_level).into_par_iter().map(|n| build_measure_table(&e, &r.setup, alpha0, n)).collect();
    let mut levels = Vec::new();
    for (n, t) in tables.iter().enumerate() {
        match t {
            Ok(t) => levels.push(json!({
                "level": n,
                "classes": t.classes.iter().map(|b| r.field.format_elem(b)).collect::<Vec<_>>(),
                "cosets": t.cosets.len(),
                "class_totals": t.class_totals().iter().map(value).collect::<Vec<_>>(),
            })),
            Err(x) => {
                pass = false;
                levels.push(json!({ "level": n, "error": x.to_string() }));
            }
        }
    }
    let mut refinements = Vec::new();
    for n in 0..cs.max_level as usize {
        if let (Ok(a), Ok(b)) = (&tables[n], &tables[n + 1]) {
            let rr = refinement_check(a, b, 1e-9)?;
            pass &= rr.pass;
            refinements.push(json!({ "from": n, "max_rel_diff": float(rr.max_rel_diff), "max_error": float(rr.max_error), "pass": rr.pass }));
        }
    }
    let step = (p - 1) as u32 * (p as u32).pow(cs.k.saturating_sub(1));
    let mut kummer = Vec::new();
    for &a in &cs.alphas {
        match congruence_check(&e, &r.setup, a, a + step, cs.k, &per, cfg.precision.padic, cs.kmax, cs.bound) {
            Ok(c) => {
                pass &= c.pass;
                kummer.push(json!({
                    "alpha": c.alpha, "alpha2": c.alpha2, "k": c.k, "cosets": c.cosets,
                    "coset_values": c.coset_values.iter().map(cyclo).collect::<Vec<_>>(),
                    "coset_values2": c.coset_values2.iter().map(cyclo).collect::<Vec<_>>(),
                    "padic": c.padic, "padic2": c.padic2,
                    "valuation": c.valuation, "valuation2": c.valuation2,
                    "unit": c.unit, "embedding_degree": c.embedding_degree, "pass": c.pass,
                }));
            }
            Err(x) => {
                pass = false;
                kummer.push(json!({ "alpha": a, "alpha2": a + step, "error": x.to_string() }));
            }
        }
    }
    Ok(Outcome { pass, results: json!({ "weight": alpha0, "levels": levels, "refinement": refinements, "kummer": kummer }) })
}

pub fn selftest(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let opts = acceptance::SuiteOptions { bits: cfg.precision.bits, ..Default::default() };
    let outcomes = acceptance::run_all(&opts);
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let pass = outcomes.iter().all(|o| o.pass);
    Ok(Outcome { pass, results: json!({ "criteria": outcomes }) })
}
