//! Static SVG rendering of a triangulated toric diagram.
//!
//! Pure string building from exact integer coordinates: lattice grid,
//! filled unimodular triangles, fan edges, and labelled ray points. The
//! output is deterministic for a given triangulation.

use std::fmt::Write as _;

use num::bigint::BigInt;

use crate::error::{Error, Result};
use crate::fan::ToricTriangulation;

const SCALE: i64 = 60;
const MARGIN: i64 = 40;

/// Render the triangulation as a standalone SVG document.
pub fn render_svg(fan: &ToricTriangulation) -> Result<String> {
    let coord = |x: &BigInt| -> Result<i64> {
        i64::try_from(x).map_err(|_| {
            Error::Unsupported("diagram coordinates overflow the SVG canvas".into())
        })
    };
    let pts: Vec<(i64, i64)> = fan
        .rays
        .iter()
        .map(|r| Ok((coord(&r.point.0)?, coord(&r.point.1)?)))
        .collect::<Result<_>>()?;
    let (mut minx, mut maxx, mut miny, mut maxy) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for &(x, y) in &pts {
        minx = minx.min(x);
        maxx = maxx.max(x);
        miny = miny.min(y);
        maxy = maxy.max(y);
    }
    let width = (maxx - minx) * SCALE + 2 * MARGIN;
    let height = (maxy - miny) * SCALE + 2 * MARGIN;
    let px = |x: i64| MARGIN + (x - minx) * SCALE;
    let py = |y: i64| MARGIN + (maxy - y) * SCALE;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width} {height}\" \
         width=\"{width}\" height=\"{height}\">"
    );
    let _ = writeln!(s, "  <rect width=\"{width}\" height=\"{height}\" fill=\"#fdfaf4\"/>");
    // Lattice grid.
    for gx in minx..=maxx {
        let _ = writeln!(
            s,
            "  <line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#e3dccd\" stroke-width=\"1\"/>",
            px(gx),
            py(maxy),
            py(miny)
        );
    }
    for gy in miny..=maxy {
        let _ = writeln!(
            s,
            "  <line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#e3dccd\" stroke-width=\"1\"/>",
            py(gy),
            px(minx),
            px(maxx)
        );
    }
    for tri in &fan.triangles {
        let mut poly = String::new();
        for &i in tri {
            let (x, y) = pts[i];
            let _ = write!(poly, "{},{} ", px(x), py(y));
        }
        let _ = writeln!(
            s,
            "  <polygon points=\"{}\" fill=\"#f0e2c8\" stroke=\"none\"/>",
            poly.trim_end()
        );
    }
    for &(i, j) in &fan.edges {
        let (x1, y1) = pts[i];
        let (x2, y2) = pts[j];
        let _ = writeln!(
            s,
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#8a6b42\" stroke-width=\"2\"/>",
            px(x1),
            py(y1),
            px(x2),
            py(y2)
        );
    }
    for (i, &(x, y)) in pts.iter().enumerate() {
        let _ = writeln!(
            s,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"6\" fill=\"#4a3418\"><title>{}</title></circle>",
            px(x),
            py(y),
            fan.rays[i].matching.id
        );
        let _ = writeln!(
            s,
            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"14\" fill=\"#4a3418\">{}</text>",
            px(x) + 9,
            py(y) - 9,
            i
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
