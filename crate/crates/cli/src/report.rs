//! JSON report envelope and value encodings.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use hecke_padic_core::cyclo::Cyclo;
use hecke_padic_core::eisenstein::mp::{decimal_string, CBall};
use hecke_padic_core::eisenstein::EisensteinValue;
use hecke_padic_core::fourier::TorsionFunction;
use serde_json::{json, Value};

pub const SCHEMA: &str = "hecke-padic/report";
pub const SCHEMA_VERSION: u32 = 1;

/// Significant digits printed for complex values.
pub const DIGITS: usize = 30;

/// (numerator, denominator, ζ-exponent) triples over Q(ζ_k).
pub fn cyclo(c: &Cyclo) -> Value {
    let c = c.compact();
    let terms: Vec<Value> =
        c.triples().into_iter().map(|(n, d, e)| json!([n.to_string(), d.to_string(), e])).collect();
    json!({ "conductor": c.conductor(), "terms": terms, "text": format!("{c}") })
}

pub fn cball(z: &CBall) -> Value {
    json!({
        "re": decimal_string(&z.re, DIGITS),
        "im": decimal_string(&z.im, DIGITS),
        "radius": format!("{:.3e}", z.rad()),
    })
}

pub fn value(v: &EisensteinValue) -> Value {
    json!({
        "re": decimal_string(&v.value.re, DIGITS),
        "im": decimal_string(&v.value.im, DIGITS),
        "abs_error": format!("{:.3e}", v.error()),
        "alpha": v.alpha,
        "s": v.s,
        "lattice": v.lattice,
        "radius": format!("{:.6e}", v.radius),
        "points": v.points,
    })
}

pub fn float(x: f64) -> Value {
    Value::String(format!("{x:.6e}"))
}

pub fn torsion(f: &TorsionFunction) -> Value {
    let support: Vec<Value> = f.iter().filter(|(_, v)| !v.is_zero()).map(|(s, v)| json!({ "x": s, "value": cyclo(v) })).collect();
    json!({ "p": f.prime(), "level": f.level(), "rank": f.rank(), "lattice": f.lattice(), "support": support })
}

pub fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn envelope(command: &str, config: &Value, pass: bool, results: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "timestamp": timestamp(),
        "config": config,
        "pass": pass,
        "results": results,
    })
}

/// Write `doc` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, doc: &Value) -> anyhow::Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        let mut text = serde_json::to_string_pretty(doc)?;
        text.push('\n');
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, &target).with_context(|| format!("renaming onto {}", target.display()))?;
    Ok(target)
}
