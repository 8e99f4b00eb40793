//! Browser bindings for the brane-tiler library.
//!
//! Three functions are exported to JavaScript, all JSON-in/JSON-out so the
//! page needs no generated types:
//!
//! - [`examples`] — the bundled tiling documents, keyed by name;
//! - [`tiling_report`] — validates a tiling and reports its quiver, weight
//!   lattices, consistency certificate, matchings, and (given a stability
//!   parameter) its triangulated toric diagram with an SVG rendering;
//! - [`mckay_fan`] — builds the orbifold tiling of an abelian group action
//!   on ℂ³ and returns its triangulated diagram in one step.
//!
//! Errors cross the boundary as `Err(String)`, which wasm-bindgen turns
//! into JavaScript exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use brane_tiler::consistency::{consistency_class, find_r_charge, ConsistencyClass};
use brane_tiler::error::{Error, Result};
use brane_tiler::fan::build_triangulation;
use brane_tiler::lattice::build_lattices;
use brane_tiler::matchings::{diagram_of_center, enumerate_matchings, is_extremal};
use brane_tiler::mckay::{build_mckay_tiling, hilb_theta, AbelianAction};
use brane_tiler::quiver::dualize;
use brane_tiler::svg::render_svg;
use brane_tiler::tiling::parse_tiling;

/// The tiling documents bundled with the demo page, as a JSON object
/// mapping name → document text.
#[wasm_bindgen]
pub fn examples() -> String {
    let docs: [(&str, &str); 7] = [
        ("c3", include_str!("../../brane-tiler/fixtures/c3.json")),
        ("conifold", include_str!("../../brane-tiler/fixtures/conifold.json")),
        ("f0", include_str!("../../brane-tiler/fixtures/f0.json")),
        ("necklace", include_str!("../../brane-tiler/fixtures/necklace.json")),
        ("twogon", include_str!("../../brane-tiler/fixtures/twogon.json")),
        ("z3", include_str!("../../brane-tiler/fixtures/z3.json")),
        ("z6", include_str!("../../brane-tiler/fixtures/z6.json")),
    ];
    let map: serde_json::Map<String, Value> = docs
        .iter()
        .map(|(name, doc)| (name.to_string(), Value::String(doc.to_string())))
        .collect();
    Value::Object(map).to_string()
}

/// Validate a tiling document and report everything the library can say
/// about it. `theta` is a comma-separated stability parameter; pass an
/// empty string to skip the θ-dependent parts (a single-vertex quiver
/// defaults to θ = 0).
#[wasm_bindgen]
pub fn tiling_report(doc: &str, theta: &str) -> std::result::Result<String, String> {
    report_impl(doc, theta).map(|v| v.to_string()).map_err(|e| e.to_string())
}

/// Build the orbifold tiling for cyclic factor orders `factors` (e.g. "6"
/// or "2,2") and the three `weights` (e.g. "1,2,3", or dot-joined per
/// factor like "1.0,0.1,1.1"), then triangulate its diagram at `theta`
/// (empty string: the Hilbert-scheme parameter).
#[wasm_bindgen]
pub fn mckay_fan(factors: &str, weights: &str, theta: &str) -> std::result::Result<String, String> {
    mckay_impl(factors, weights, theta).map(|v| v.to_string()).map_err(|e| e.to_string())
}

fn parse_theta(theta: &str) -> Result<Vec<i64>> {
    theta
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|e| Error::Theta(format!("cannot parse theta entry '{x}': {e}")))
        })
        .collect()
}

fn report_impl(doc: &str, theta: &str) -> Result<Value> {
    let t = parse_tiling(doc)?;
    let q = dualize(&t);
    let lat = build_lattices(&q)?;
    let ms = enumerate_matchings(&t);

    let class = consistency_class(&t)?;
    let consistency = match class {
        ConsistencyClass::Inconsistent => json!({ "class": "inconsistent" }),
        _ => {
            let sol = find_r_charge(&t)?;
            json!({
                "class": match sol.class {
                    ConsistencyClass::Geometric => "geometric",
                    ConsistencyClass::ConsistentOnly => "consistent",
                    ConsistencyClass::Inconsistent => unreachable!(),
                },
                "epsilon": sol.epsilon.to_string(),
                "r": t.edges.iter().zip(&sol.r)
                    .map(|(e, r)| json!({ "edge": e.id, "r": r.to_string() }))
                    .collect::<Vec<_>>(),
            })
        }
    };

    let matchings: Vec<Value> = ms
        .iter()
        .map(|m| {
            let p = lat.diagram_point(&m.edges)?;
            Ok(json!({
                "id": m.id,
                "point": [p.0.to_string(), p.1.to_string()],
                "extremal": is_extremal(&q, &m.edges),
            }))
        })
        .collect::<Result<_>>()?;

    // The diagram can be genuinely refused (a hull vertex carrying more
    // than one matching); the page still gets the rest of the report.
    let diagram = match diagram_of_center(&q, &lat, &ms) {
        Ok(d) => json!({
            "points": d.points.len(),
            "hull": d.hull.len(),
        }),
        Err(e) => json!({ "error": e.to_string() }),
    };

    let theta_vec = if theta.trim().is_empty() {
        (q.n_vertices() == 1).then(|| vec![0])
    } else {
        Some(parse_theta(theta)?)
    };
    let fan = match &theta_vec {
        None => Value::Null,
        Some(tv) => {
            let fan = build_triangulation(&t, &q, &lat, &ms, tv)?;
            let mut v = fan.to_json(&t);
            v["svg"] = Value::String(render_svg(&fan)?);
            v
        }
    };

    Ok(json!({
        "name": t.name,
        "counts": {
            "white": t.white.len(),
            "black": t.black.len(),
            "edges": t.edges.len(),
            "faces": t.faces.len(),
        },
        "quiver": {
            "vertices": q.n_vertices(),
            "arrows": q.n_arrows(),
            "potential_terms": q.n_faces(),
        },
        "ranks": {
            "lambda": lat.rank_lambda(),
            "m": lat.rank_m(),
            "b": lat.rank_b(),
        },
        "consistency": consistency,
        "matchings": matchings,
        "diagram": diagram,
        "fan": fan,
    }))
}

fn mckay_impl(factors: &str, weights: &str, theta: &str) -> Result<Value> {
    let factors: Vec<u64> = factors
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|e| Error::Group(format!("cannot parse factor '{x}': {e}")))
        })
        .collect::<Result<_>>()?;
    let parts: Vec<&str> = weights.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Group(format!("expected 3 weights, got {}", parts.len())));
    }
    let mut ws: Vec<Vec<u64>> = Vec::with_capacity(3);
    for p in parts {
        ws.push(
            p.split('.')
                .map(|x| {
                    x.trim().parse::<u64>().map_err(|e| {
                        Error::Group(format!("cannot parse weight component '{x}': {e}"))
                    })
                })
                .collect::<Result<_>>()?,
        );
    }
    let action = AbelianAction::new(factors, [ws[0].clone(), ws[1].clone(), ws[2].clone()])?;
    let mk = build_mckay_tiling(action)?;

    let theta_vec = if theta.trim().is_empty() {
        hilb_theta(mk.quiver.n_vertices())
    } else {
        parse_theta(theta)?
    };
    let ms = enumerate_matchings(&mk.tiling);
    let fan = build_triangulation(&mk.tiling, &mk.quiver, &mk.lattice, &ms, &theta_vec)?;
    let mut fan_json = fan.to_json(&mk.tiling);
    fan_json["svg"] = Value::String(render_svg(&fan)?);

    let typed: Vec<[usize; 3]> =
        fan.rays.iter().map(|r| mk.typed_character(&r.matching.edges)).collect();

    Ok(json!({
        "name": mk.tiling.name,
        "order": mk.action.order(),
        "matchings": ms.len(),
        "tiling": mk.tiling.to_json(),
        "fan": fan_json,
        "ray_typed_characters": typed,
    }))
}
