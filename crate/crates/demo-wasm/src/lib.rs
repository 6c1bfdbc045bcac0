//! Browser bindings for three small horokit operations: a disc horosphere
//! field, the bidisc canonical form, and a Denjoy–Wolff orbit. The plain
//! functions carry the logic so they can be tested natively; the exported
//! wrappers only translate errors.

use serde_json::json;
use wasm_bindgen::prelude::*;

use horokit::horospheres::{canonical_form_bidisc, disc_horosphere_closed_form, PointSequence, PreparedHorosphere, SeqLabel};
use horokit::maps_extension::{denjoy_wolff_iterate, MapSpec};
use horokit::metric_core::Domain;
use horokit::{CPoint, MetricConfig, C64};

/// Lighter budget than the library default; the page recomputes on every
/// slider move.
fn demo_config() -> MetricConfig {
    MetricConfig { tail_start: 4000, samples: 200, ..MetricConfig::default() }
}

/// Row-major `grid × grid` samples of `B(z) − ½ log R` over `[-1, 1]²` for
/// the horosphere of the radial class at `e^{iθ}` (negative inside, NaN
/// off the disc), followed by the closed-form center and radius.
pub fn horodisc_field_impl(theta: f64, radius: f64, grid: usize) -> Result<Vec<f64>, String> {
    if grid < 2 || grid > 400 {
        return Err("grid must be between 2 and 400".into());
    }
    let p = C64::from_polar(1.0, theta);
    let (center, r) = disc_horosphere_closed_form(p, radius).map_err(|e| e.to_string())?;
    let d = Domain::UnitDisc;
    let seq = PointSequence::radial(d.clone(), CPoint::scalar(p)).map_err(|e| e.to_string())?;
    let h = PreparedHorosphere::new(&d.center(), &seq, &demo_config()).map_err(|e| e.to_string())?;
    let level = 0.5 * radius.ln();
    let mut out = Vec::with_capacity(grid * grid + 3);
    for i in 0..grid {
        for j in 0..grid {
            let s = |k: usize| 2.0 * k as f64 / (grid - 1) as f64 - 1.0;
            let z = CPoint::scalar(C64::new(s(j), -s(i)));
            let v = match d.contains(&z) {
                Ok(true) => h.estimate(&z).map_err(|e| e.to_string())?.estimate() - level,
                _ => f64::NAN,
            };
            out.push(v);
        }
    }
    out.extend([center.re, center.im, r]);
    Ok(out)
}

/// Canonical form of a bidisc sequence given as a JSON sequence label.
pub fn classify_bidisc_impl(label_json: &str) -> Result<String, String> {
    let label: SeqLabel = serde_json::from_str(label_json).map_err(|e| e.to_string())?;
    let seq = PointSequence::bidisc(label).map_err(|e| e.to_string())?;
    let form = canonical_form_bidisc(&seq, &MetricConfig::default()).map_err(|e| e.to_string())?;
    Ok(json!({
        "name": form.representative.as_ref().map(SeqLabel::short_name),
        "outcome": form.outcome,
        "candidates": form.candidates.iter().map(|(l, q)| json!({"name": l.short_name(), "ratio": q})).collect::<Vec<_>>(),
    })
    .to_string())
}

/// Orbits of `z ↦ e^{iθ}(z − a)/(1 − ā z)` from `z0` and four seeded
/// starts, with the clustered target and the invariance verdict.
pub fn disc_orbit_impl(a_re: f64, a_im: f64, theta: f64, z_re: f64, z_im: f64) -> Result<String, String> {
    let f = MapSpec::DiscAutomorphism { a: C64::new(a_re, a_im), theta };
    let z0 = CPoint::scalar(C64::new(z_re, z_im));
    let r = denjoy_wolff_iterate(&Domain::UnitDisc, &f, &z0, &demo_config()).map_err(|e| e.to_string())?;
    let paths: Vec<Vec<[f64; 2]>> =
        r.orbits.iter().map(|o| o.path.iter().map(|z| [z[0].re, z[0].im]).collect()).collect();
    Ok(json!({
        "paths": paths,
        "target": r.target.points.iter().map(|z| [z[0].re, z[0].im]).collect::<Vec<_>>(),
        "stagnated": r.stagnated,
        "invariance": {"outcome": r.invariance.outcome, "decision": r.invariance.decision, "detail": r.invariance.detail},
    })
    .to_string())
}

#[wasm_bindgen]
pub fn horodisc_field(theta: f64, radius: f64, grid: usize) -> Result<Vec<f64>, JsError> {
    horodisc_field_impl(theta, radius, grid).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn classify_bidisc(label_json: &str) -> Result<String, JsError> {
    classify_bidisc_impl(label_json).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn disc_orbit(a_re: f64, a_im: f64, theta: f64, z_re: f64, z_im: f64) -> Result<String, JsError> {
    disc_orbit_impl(a_re, a_im, theta, z_re, z_im).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn report_schema_version() -> String {
    horokit::cli::report_schema_version().into()
}
