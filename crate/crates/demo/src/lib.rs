//! Browser demo: three entry points over the rank-2 symmetric Schottky
//! example, each returning JSON or OBJ text for the page in `www/`.
//!
//! The functions are plain Rust as well, so the crate builds and tests
//! natively.

use posaffine::cocycle::AffineDeformation;
use posaffine::crooked::{build_domain, mesh_emit, sign_variation, CrookedHalfspace, Domain};
use posaffine::freegroup::SchottkyData;
use posaffine::margulis::{properness_scan, MargulisContext};
use posaffine::numcore::{parse_rational, Dd, Rational, Scalar, Tolerance};
use posaffine::posrep::{BoundaryMap, Representation};
use serde_json::json;
use wasm_bindgen::prelude::*;

const SCAN_LIMIT: usize = 6;

fn example(n: usize) -> Result<(SchottkyData<Dd>, BoundaryMap<Dd>), String> {
    let tol = Tolerance::for_scalar::<Dd>();
    let s = SchottkyData::<Dd>::symmetric_rank2(std::f64::consts::PI / 6.0).map_err(|e| e.to_string())?;
    let rep = Representation::fuchsian(&s, n, &tol).map_err(|e| e.to_string())?;
    let b = BoundaryMap::fuchsian(rep, s.arc_system(), &tol).map_err(|e| e.to_string())?;
    Ok((s, b))
}

fn strip(b: &BoundaryMap<Dd>, scale_a: f64, scale_b: f64) -> Result<AffineDeformation<Dd>, String> {
    if !(scale_a > 0.0 && scale_b > 0.0 && scale_a.is_finite() && scale_b.is_finite()) {
        return Err("scales must be positive".into());
    }
    AffineDeformation::strip_from_boundary(b, &[Dd::from(scale_a), Dd::from(scale_b)]).map_err(|e| e.to_string())
}

/// Sign variations and region of a vector relative to the standard crooked
/// halfspace. `coords` is a comma- or space-separated list of rationals
/// such as `1, -1/2, 3`.
#[wasm_bindgen]
pub fn classify(n: usize, coords: &str) -> Result<String, String> {
    if n == 0 {
        return Err("n must be at least 1".into());
    }
    let v = coords
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(parse_rational)
        .collect::<Result<Vec<Rational>, String>>()?;
    if v.len() != 4 * n - 1 {
        return Err(format!("need {} coordinates for n = {n}, got {}", 4 * n - 1, v.len()));
    }
    let tol = Tolerance::default();
    let h = CrookedHalfspace::<Rational>::standard(n).map_err(|e| e.to_string())?;
    let region = h.region(&v, &tol).map_err(|e| e.to_string())?;
    let signs: Vec<_> = h.coordinates(&v).iter().map(|x| x.exact_sign()).collect();
    let variation = sign_variation(&signs).ok();
    Ok(json!({
        "region": region,
        "upper": variation.map(|s| s.upper),
        "lower": variation.map(|s| s.lower),
        "bound": 2 * n - 1,
    })
    .to_string())
}

/// Margulis invariants of the strip deformation with the given generator
/// scales, one row per conjugacy class up to `max_len` (at most 6).
#[wasm_bindgen]
pub fn margulis_table(n: usize, scale_a: f64, scale_b: f64, max_len: usize) -> Result<String, String> {
    if !(1..=2).contains(&n) || !(1..=SCAN_LIMIT).contains(&max_len) {
        return Err(format!("need n in 1..=2 and max_len in 1..={SCAN_LIMIT}"));
    }
    let (s, b) = example(n)?;
    let def = strip(&b, scale_a, scale_b)?;
    let ctx = MargulisContext::new(&b, Some(&s));
    let report = properness_scan(&ctx, &def, max_len, 0.0).map_err(|e| e.to_string())?;
    Ok(json!({
        "verdict": report.verdict,
        "min_ratio": report.min_ratio,
        "min_ratio_word": report.min_ratio_word,
        "records": report.records,
    })
    .to_string())
}

fn domain(scale_a: f64, scale_b: f64) -> Result<Domain<Dd>, String> {
    let (_, b) = example(1)?;
    let def = strip(&b, scale_a, scale_b)?;
    build_domain(&def, &b, &Tolerance::for_scalar::<Dd>()).map_err(|e| e.to_string())
}

/// OBJ mesh of wall `wall` (0..4) of the crooked domain in dimension 3.
#[wasm_bindgen]
pub fn wall_mesh(wall: usize, scale_a: f64, scale_b: f64, bound: f64) -> Result<String, String> {
    let d = domain(scale_a, scale_b)?;
    let w = d.walls().get(wall).ok_or_else(|| format!("wall {wall} out of range"))?;
    Ok(mesh_emit(&w.halfspace, bound).map_err(|e| e.to_string())?.to_obj())
}

/// Labels of the walls, in the order `wall_mesh` indexes them.
#[wasm_bindgen]
pub fn wall_labels() -> Result<String, String> {
    let d = domain(1.0, 1.0)?;
    Ok(json!(d.walls().iter().map(|w| w.arc.to_string()).collect::<Vec<_>>()).to_string())
}
