//! The triangulated toric fan of a stability parameter.
//!
//! For a generic θ the stable perfect matchings sit bijectively on the
//! lattice points of the toric diagram; pairs whose union is a stable
//! one-dimensional cosupport span edges, and triples whose union is a
//! stable zero-dimensional cosupport span triangles. Those cones assemble
//! into a unimodular triangulation of the diagram — the fan of a crepant
//! resolution.
//!
//! [`build_triangulation`] computes the triangulation twice, by independent
//! routes, and insists the answers agree: once combinatorially (stability
//! of pair and triple unions) and once geometrically (an exact angular
//! sweep of the edge graph in the plane). It also checks unimodularity of
//! every triangle, the Euler count, area accounting against the convex
//! hull, and that every cosupport decomposes back into the matchings that
//! built it. Any disagreement is reported as an invariant error rather
//! than papered over.

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::WeightLattice;
use crate::matchings::{convex_hull, cross, diagram_of_center, PerfectMatching};
use crate::quiver::DualQuiver;
use crate::stability::{
    classify_cosupport, decompose_dim0, decompose_dim1, generic_witness, is_theta_stable,
    validate_theta, Cosupport,
};
use crate::tiling::BraneTiling;

/// A ray of the fan: a diagram lattice point and its unique stable matching.
#[derive(Debug, Clone)]
pub struct Ray {
    /// The lattice point.
    pub point: (BigInt, BigInt),
    /// The θ-stable perfect matching sitting at this point.
    pub matching: PerfectMatching,
}

/// A unimodular triangulation of the toric diagram.
#[derive(Debug, Clone)]
pub struct ToricTriangulation {
    /// The stability parameter that produced it.
    pub theta: Vec<i64>,
    /// Rays, sorted by point.
    pub rays: Vec<Ray>,
    /// Edges as ray-index pairs `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Triangles as ascending ray-index triples, sorted.
    pub triangles: Vec<[usize; 3]>,
    /// Ray indices of the diagram's hull, counterclockwise from the
    /// lexicographically smallest point.
    pub hull: Vec<usize>,
}

/// Is `p` strictly inside the segment `a b`?
fn in_segment_interior(a: &(BigInt, BigInt), b: &(BigInt, BigInt), p: &(BigInt, BigInt)) -> bool {
    if !cross(a, b, p).is_zero() {
        return false;
    }
    let dot = |u: &(BigInt, BigInt), v: &(BigInt, BigInt), w: &(BigInt, BigInt)| -> BigInt {
        (&v.0 - &u.0) * (&w.0 - &u.0) + (&v.1 - &u.1) * (&w.1 - &u.1)
    };
    dot(a, b, p).is_positive() && dot(b, a, p).is_positive()
}

/// Doubled signed area of a polygon given by points in order.
fn doubled_area(pts: &[&(BigInt, BigInt)]) -> BigInt {
    let mut acc = BigInt::zero();
    for k in 0..pts.len() {
        let p = pts[k];
        let r = pts[(k + 1) % pts.len()];
        acc += &p.0 * &r.1 - &r.0 * &p.1;
    }
    acc
}

/// Build the θ-fan with full cross-checking.
pub fn build_triangulation(
    t: &BraneTiling,
    q: &DualQuiver,
    l: &WeightLattice,
    ms: &[PerfectMatching],
    theta: &[i64],
) -> Result<ToricTriangulation> {
    validate_theta(q, theta)?;
    if let Some(witness) = generic_witness(theta)? {
        let labels: Vec<&str> = witness.iter().map(|&v| q.vertices[v].as_str()).collect();
        return Err(Error::NonGenericTheta(format!(
            "theta sums to zero on the proper subset {{{}}}",
            labels.join(", ")
        )));
    }

    // The full diagram (this already verifies hull vertex ⟺ extremal).
    let diagram = diagram_of_center(q, l, ms)?;

    // Exactly one stable matching per lattice point.
    let stable: Vec<usize> = (0..ms.len())
        .filter_map(|i| match is_theta_stable(q, &ms[i].edges, theta) {
            Ok(true) => Some(Ok(i)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_>>()?;
    if stable.len() != diagram.points.len() {
        return Err(Error::Invariant(format!(
            "{} stable matchings for {} diagram points; expected a bijection",
            stable.len(),
            diagram.points.len()
        )));
    }
    let mut rays: Vec<Ray> = Vec::with_capacity(stable.len());
    for p in &diagram.points {
        let here: Vec<usize> =
            p.matchings.iter().copied().filter(|i| stable.contains(i)).collect();
        if here.len() != 1 {
            return Err(Error::Invariant(format!(
                "diagram point ({}, {}) carries {} stable matchings, expected exactly 1",
                p.point.0,
                p.point.1,
                here.len()
            )));
        }
        rays.push(Ray { point: p.point.clone(), matching: ms[here[0]].clone() });
    }
    // Diagram points are already sorted, so rays are too; the hull indices
    // carry over directly.
    let hull = diagram.hull.clone();

    // Edges: stable pairs whose union is a curve. A stable union of two
    // distinct matchings must be one, and must decompose back into the pair.
    let union_of = |lists: &[&[usize]]| -> Vec<usize> {
        let mut u: Vec<usize> = lists.iter().flat_map(|l| l.iter().copied()).collect();
        u.sort_unstable();
        u.dedup();
        u
    };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            let union = union_of(&[&rays[i].matching.edges, &rays[j].matching.edges]);
            if !is_theta_stable(q, &union, theta)? {
                continue;
            }
            if !matches!(classify_cosupport(t, &union), Cosupport::Dim1 { .. }) {
                return Err(Error::Invariant(format!(
                    "the union of stable matchings '{}' and '{}' is θ-stable but not a curve",
                    rays[i].matching.id, rays[j].matching.id
                )));
            }
            let pair = decompose_dim1(t, &union)?;
            let mut got: Vec<&str> = pair.iter().map(|m| m.id.as_str()).collect();
            let mut want = [rays[i].matching.id.as_str(), rays[j].matching.id.as_str()];
            got.sort_unstable();
            want.sort_unstable();
            if got != want {
                return Err(Error::Invariant(format!(
                    "the curve spanned by '{}' and '{}' decomposes into different matchings",
                    rays[i].matching.id, rays[j].matching.id
                )));
            }
            edges.push((i, j));
        }
    }

    // Exact plane geometry: edges may share only endpoints, and no ray may
    // sit inside an edge.
    let pt = |i: usize| &rays[i].point;
    for (a, e) in edges.iter().enumerate() {
        for f in edges.iter().skip(a + 1) {
            if e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1 {
                continue;
            }
            let o1 = cross(pt(e.0), pt(e.1), pt(f.0));
            let o2 = cross(pt(e.0), pt(e.1), pt(f.1));
            let o3 = cross(pt(f.0), pt(f.1), pt(e.0));
            let o4 = cross(pt(f.0), pt(f.1), pt(e.1));
            if o1.sign() != o2.sign()
                && o3.sign() != o4.sign()
                && !o1.is_zero()
                && !o2.is_zero()
                && !o3.is_zero()
                && !o4.is_zero()
            {
                return Err(Error::Invariant(format!(
                    "fan edges {e:?} and {f:?} cross in the plane"
                )));
            }
        }
    }
    for (r, ray) in rays.iter().enumerate() {
        for e in &edges {
            if e.0 != r && e.1 != r && in_segment_interior(pt(e.0), pt(e.1), &ray.point) {
                return Err(Error::Invariant(format!(
                    "ray {r} lies in the interior of fan edge {e:?}"
                )));
            }
        }
    }

    // Angular sweep: recover the bounded faces of the edge graph. Darts are
    // ordered counterclockwise around each vertex; following the
    // predecessor of the reversed dart walks each bounded face
    // counterclockwise and the outer face clockwise.
    let mut around: Vec<Vec<usize>> = vec![Vec::new(); rays.len()];
    let mut darts: Vec<(usize, usize)> = Vec::with_capacity(2 * edges.len());
    for &(i, j) in &edges {
        darts.push((i, j));
        darts.push((j, i));
    }
    for (d, &(u, _)) in darts.iter().enumerate() {
        around[u].push(d);
    }
    let dir = |d: usize| -> (BigInt, BigInt) {
        let (u, v) = darts[d];
        (&rays[v].point.0 - &rays[u].point.0, &rays[v].point.1 - &rays[u].point.1)
    };
    let half = |v: &(BigInt, BigInt)| -> u8 {
        u8::from(!(v.1.is_positive() || (v.1.is_zero() && v.0.is_positive())))
    };
    for list in around.iter_mut() {
        list.sort_by(|&a, &b| {
            let (da, db) = (dir(a), dir(b));
            half(&da).cmp(&half(&db)).then_with(|| {
                let c = &da.0 * &db.1 - &da.1 * &db.0;
                BigInt::zero().cmp(&c)
            })
        });
    }
    let mut next = vec![usize::MAX; darts.len()];
    let reverse = |d: usize| d ^ 1;
    for list in &around {
        for (pos, &d) in list.iter().enumerate() {
            let pred = list[(pos + list.len() - 1) % list.len()];
            next[reverse(d)] = pred;
        }
    }
    let mut used = vec![false; darts.len()];
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    let mut negative_faces = 0usize;
    let mut bounded_area = BigInt::zero();
    let mut outer_area = BigInt::zero();
    for d0 in 0..darts.len() {
        if used[d0] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut d = d0;
        loop {
            used[d] = true;
            cycle.push(darts[d].0);
            d = next[d];
            if d == d0 {
                break;
            }
        }
        let pts: Vec<&(BigInt, BigInt)> = cycle.iter().map(|&v| &rays[v].point).collect();
        let area2 = doubled_area(&pts);
        if area2.is_positive() {
            if cycle.len() != 3 {
                return Err(Error::Invariant(format!(
                    "a bounded face of the fan has {} sides, expected a triangle",
                    cycle.len()
                )));
            }
            if !area2.is_one() {
                return Err(Error::Invariant(format!(
                    "fan triangle {cycle:?} has doubled area {area2}, expected 1"
                )));
            }
            bounded_area += area2;
            let mut tri = [cycle[0], cycle[1], cycle[2]];
            tri.sort_unstable();
            triangles.push(tri);
        } else if area2.is_negative() {
            negative_faces += 1;
            outer_area -= area2;
        } else {
            return Err(Error::Invariant(
                "a face of the fan has zero area; the edge graph is degenerate".into(),
            ));
        }
    }
    triangles.sort_unstable();

    // Area and Euler accounting against the hull.
    let hullpts: Vec<&(BigInt, BigInt)> = hull.iter().map(|&i| &rays[i].point).collect();
    let hull_area = doubled_area(&hullpts);
    if negative_faces != 1 || outer_area != hull_area || bounded_area != hull_area {
        return Err(Error::Invariant(format!(
            "fan area accounting failed: hull 2A = {hull_area}, triangles fill {bounded_area}, \
             {negative_faces} outer face(s) of total 2A = {outer_area}"
        )));
    }
    let euler = rays.len() as i64 - edges.len() as i64 + triangles.len() as i64;
    if euler != 1 {
        return Err(Error::Invariant(format!(
            "fan Euler count R − E + T = {euler}, expected 1"
        )));
    }
    // The stable rays must span the same hull as the full matching set.
    let all_points: Vec<(BigInt, BigInt)> =
        diagram.points.iter().map(|p| p.point.clone()).collect();
    let outer1: Vec<(BigInt, BigInt)> =
        convex_hull(&all_points).into_iter().map(|i| all_points[i].clone()).collect();
    let ray_points: Vec<(BigInt, BigInt)> = rays.iter().map(|r| r.point.clone()).collect();
    let outer2: Vec<(BigInt, BigInt)> =
        convex_hull(&ray_points).into_iter().map(|i| ray_points[i].clone()).collect();
    if outer1 != outer2 {
        return Err(Error::Invariant(
            "the stable rays span a different hull than the full diagram".into(),
        ));
    }

    // Independent route to the triangle set: stable point-like triples.
    let mut algebraic: Vec<[usize; 3]> = Vec::new();
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            for k in j + 1..rays.len() {
                let union = union_of(&[
                    &rays[i].matching.edges,
                    &rays[j].matching.edges,
                    &rays[k].matching.edges,
                ]);
                if !matches!(classify_cosupport(t, &union), Cosupport::Dim0 { .. })
                    || !is_theta_stable(q, &union, theta)?
                {
                    continue;
                }
                let triple = decompose_dim0(t, &union)?;
                let mut got: Vec<&str> = triple.iter().map(|m| m.id.as_str()).collect();
                let mut want = [
                    rays[i].matching.id.as_str(),
                    rays[j].matching.id.as_str(),
                    rays[k].matching.id.as_str(),
                ];
                got.sort_unstable();
                want.sort_unstable();
                if got != want {
                    return Err(Error::Invariant(format!(
                        "the point spanned by {want:?} decomposes into different matchings"
                    )));
                }
                algebraic.push([i, j, k]);
            }
        }
    }
    algebraic.sort_unstable();
    if algebraic != triangles {
        return Err(Error::Invariant(format!(
            "stable triples {algebraic:?} disagree with swept triangles {triangles:?}"
        )));
    }

    Ok(ToricTriangulation { theta: theta.to_vec(), rays, edges, triangles, hull })
}

impl ToricTriangulation {
    /// Serialize for reports: points, matchings by edge id, index pairs and
    /// triples, and the hull.
    pub fn to_json(&self, t: &BraneTiling) -> serde_json::Value {
        let big = |x: &BigInt| -> serde_json::Value {
            serde_json::Value::from(i64::try_from(x).expect("diagram coordinates fit in i64"))
        };
        serde_json::json!({
            "theta": self.theta,
            "rays": self.rays.iter().map(|r| serde_json::json!({
                "point": [big(&r.point.0), big(&r.point.1)],
                "matching": {
                    "id": r.matching.id,
                    "edges": r.matching.edges.iter()
                        .map(|&e| t.edges[e].id.clone()).collect::<Vec<_>>(),
                },
            })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&(i, j)| vec![i, j]).collect::<Vec<_>>(),
            "triangles": self.triangles.to_vec(),
            "hull": self.hull,
        })
    }
}
