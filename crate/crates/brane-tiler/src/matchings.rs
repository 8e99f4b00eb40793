//! Perfect matchings and the toric diagram of the center.
//!
//! A perfect matching is a set of edges covering every vertex exactly once.
//! Matchings are enumerated exactly and deterministically; an independent
//! Ryser-permanent count cross-checks the enumeration. Pairing matchings
//! with the `M` basis of the weight lattice places each matching at a point
//! of ℤ², and the convex hull of those points is the toric diagram of the
//! singularity. A matching is *extremal* when deleting it from the quiver
//! leaves a strongly connected graph; extremal matchings are exactly the
//! matchings sitting alone on hull vertices, and [`diagram_of_center`]
//! verifies that equivalence as it builds the diagram.

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::WeightLattice;
use crate::quiver::DualQuiver;
use crate::tiling::BraneTiling;

/// A perfect matching of the tiling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectMatching {
    /// Edge indices, ascending.
    pub edges: Vec<usize>,
    /// Canonical id: the edge ids, sorted, joined with commas.
    pub id: String,
}

impl PerfectMatching {
    fn new(t: &BraneTiling, mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        let mut ids: Vec<&str> = edges.iter().map(|&e| t.edges[e].id.as_str()).collect();
        ids.sort_unstable();
        PerfectMatching { id: ids.join(","), edges }
    }
}

/// Enumerate all perfect matchings, sorted by canonical id.
pub fn enumerate_matchings(t: &BraneTiling) -> Vec<PerfectMatching> {
    let wn = t.white.len();
    let bn = t.black.len();
    if wn != bn {
        return Vec::new();
    }
    // Edges incident to each black vertex, in document order.
    let mut at_black: Vec<Vec<usize>> = vec![Vec::new(); bn];
    for (i, e) in t.edges.iter().enumerate() {
        at_black[e.black].push(i);
    }
    let mut out = Vec::new();
    let mut used_white = vec![false; wn];
    let mut chosen = Vec::with_capacity(bn);
    fn rec(
        t: &BraneTiling,
        at_black: &[Vec<usize>],
        b: usize,
        used_white: &mut [bool],
        chosen: &mut Vec<usize>,
        out: &mut Vec<PerfectMatching>,
    ) {
        if b == at_black.len() {
            out.push(PerfectMatching::new(t, chosen.clone()));
            return;
        }
        for &e in &at_black[b] {
            let w = t.edges[e].white;
            if !used_white[w] {
                used_white[w] = true;
                chosen.push(e);
                rec(t, at_black, b + 1, used_white, chosen, out);
                chosen.pop();
                used_white[w] = false;
            }
        }
    }
    rec(t, &at_black, 0, &mut used_white, &mut chosen, &mut out);
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

/// Count perfect matchings by the Ryser permanent of the biadjacency matrix
/// — an independent check on [`enumerate_matchings`]. Supported up to 16
/// vertices of each colour.
pub fn count_matchings_oracle(t: &BraneTiling) -> Result<BigInt> {
    let wn = t.white.len();
    let bn = t.black.len();
    if wn != bn {
        return Ok(BigInt::zero());
    }
    let n = wn;
    if n > 16 {
        return Err(Error::Unsupported(format!(
            "permanent oracle supports at most 16 vertices per colour, got {n}"
        )));
    }
    // a[i][j] = number of edges joining black i to white j.
    let mut a = vec![vec![BigInt::zero(); n]; n];
    for e in &t.edges {
        a[e.black][e.white] += BigInt::one();
    }
    // Ryser with Gray-code column updates:
    // per(A) = (−1)ⁿ Σ_{S ⊆ cols} (−1)^{|S|} Π_i Σ_{j∈S} a[i][j].
    let mut row_sums = vec![BigInt::zero(); n];
    let mut total = BigInt::zero();
    let mut popcount: i64 = 0;
    for k in 1u64..(1 << n) {
        // Gray code g(k) = k ^ (k >> 1) differs from g(k−1) in exactly bit j.
        let j = k.trailing_zeros() as usize;
        let g_prev = (k - 1) ^ ((k - 1) >> 1);
        let flipped_on = (g_prev >> j) & 1 == 0;
        if flipped_on {
            for i in 0..n {
                row_sums[i] += &a[i][j];
            }
            popcount += 1;
        } else {
            for i in 0..n {
                row_sums[i] -= &a[i][j];
            }
            popcount -= 1;
        }
        let mut prod = BigInt::one();
        for r in &row_sums {
            if r.is_zero() {
                prod = BigInt::zero();
                break;
            }
            prod *= r;
        }
        if prod.is_zero() {
            continue;
        }
        if (n as i64 - popcount) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

/// Is the matching extremal, i.e. is the quiver minus the matching's arrows
/// still strongly connected?
pub fn is_extremal(q: &DualQuiver, matching: &[usize]) -> bool {
    let n0 = q.n_vertices();
    if n0 == 1 {
        return true;
    }
    let mut removed = vec![false; q.n_arrows()];
    for &a in matching {
        removed[a] = true;
    }
    let mut fwd: Vec<Vec<usize>> = vec![Vec::new(); n0];
    let mut bwd: Vec<Vec<usize>> = vec![Vec::new(); n0];
    for (i, arr) in q.arrows.iter().enumerate() {
        if !removed[i] {
            fwd[arr.source].push(arr.target);
            bwd[arr.target].push(arr.source);
        }
    }
    let reach = |adj: &[Vec<usize>]| -> usize {
        let mut seen = vec![false; n0];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count
    };
    reach(&fwd) == n0 && reach(&bwd) == n0
}

/// Is `λ` (in Λ coordinates) in the cone spanned by effective classes, i.e.
/// does every perfect matching pair nonnegatively with it?
pub fn cone_contains(
    l: &WeightLattice,
    ms: &[PerfectMatching],
    lambda: &[BigInt],
) -> bool {
    let lift = l.lift(lambda);
    ms.iter().all(|m| {
        let chi = l.indicator(&m.edges);
        let v: BigInt = chi.iter().zip(&lift).map(|(a, b)| a * b).sum();
        !v.is_negative()
    })
}

/// A distinct point of the toric diagram.
#[derive(Debug, Clone)]
pub struct DiagramPoint {
    /// Coordinates in ℤ².
    pub point: (BigInt, BigInt),
    /// Indices (into the input matching list) of matchings at this point.
    pub matchings: Vec<usize>,
    /// Whether the point is a vertex of the convex hull.
    pub hull_vertex: bool,
}

/// The toric diagram: distinct matching points with multiplicity and hull.
#[derive(Debug, Clone)]
pub struct CenterDiagram {
    /// Distinct points, sorted by coordinates.
    pub points: Vec<DiagramPoint>,
    /// Indices into `points` of the hull vertices, counterclockwise,
    /// starting from the lexicographically smallest point.
    pub hull: Vec<usize>,
}

/// Build the toric diagram of the center from the full matching list,
/// verifying on the way that a matching is extremal exactly when it sits
/// alone on a hull vertex.
pub fn diagram_of_center(
    q: &DualQuiver,
    l: &WeightLattice,
    ms: &[PerfectMatching],
) -> Result<CenterDiagram> {
    if ms.is_empty() {
        return Err(Error::Invariant("a tiling always has a perfect matching".into()));
    }
    let mut grouped: std::collections::BTreeMap<(BigInt, BigInt), Vec<usize>> =
        std::collections::BTreeMap::new();
    for (i, m) in ms.iter().enumerate() {
        grouped.entry(l.diagram_point(&m.edges)?).or_default().push(i);
    }
    let coords: Vec<(BigInt, BigInt)> = grouped.keys().cloned().collect();
    let hull = convex_hull(&coords);
    let hull_set: std::collections::BTreeSet<usize> = hull.iter().copied().collect();

    let points: Vec<DiagramPoint> = grouped
        .into_iter()
        .enumerate()
        .map(|(i, (point, matchings))| DiagramPoint {
            point,
            matchings,
            hull_vertex: hull_set.contains(&i),
        })
        .collect();

    // Extremal ⟺ alone on a hull vertex.
    for p in &points {
        if p.hull_vertex {
            if p.matchings.len() != 1 {
                return Err(Error::Invariant(format!(
                    "hull vertex ({}, {}) carries {} matchings, expected exactly 1",
                    p.point.0,
                    p.point.1,
                    p.matchings.len()
                )));
            }
            if !is_extremal(q, &ms[p.matchings[0]].edges) {
                return Err(Error::Invariant(format!(
                    "matching '{}' sits on a hull vertex but is not extremal",
                    ms[p.matchings[0]].id
                )));
            }
        } else {
            for &mi in &p.matchings {
                if is_extremal(q, &ms[mi].edges) {
                    return Err(Error::Invariant(format!(
                        "matching '{}' is extremal but its point ({}, {}) is not a hull vertex",
                        ms[mi].id, p.point.0, p.point.1
                    )));
                }
            }
        }
    }

    Ok(CenterDiagram { points, hull })
}

/// 2·(signed area) of the triangle `o, a, b`.
pub fn cross(o: &(BigInt, BigInt), a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> BigInt {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Convex hull of distinct points: indices in counterclockwise order,
/// starting from the lexicographically smallest point. Collinear boundary
/// points are omitted (hull *vertices* only). Degenerate inputs give the
/// obvious answers (1 point → itself; collinear set → its two extremes).
pub fn convex_hull(pts: &[(BigInt, BigInt)]) -> Vec<usize> {
    let n = pts.len();
    if n == 1 {
        return vec![0];
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| pts[i].cmp(&pts[j]));
    debug_assert!(idx.windows(2).all(|w| pts[w[0]] != pts[w[1]]), "points must be distinct");
    if n == 2 {
        return idx;
    }
    let build = |iter: &mut dyn Iterator<Item = usize>| -> Vec<usize> {
        let mut h: Vec<usize> = Vec::new();
        for i in iter {
            while h.len() >= 2
                && cross(&pts[h[h.len() - 2]], &pts[h[h.len() - 1]], &pts[i]) <= BigInt::zero()
            {
                h.pop();
            }
            h.push(i);
        }
        h
    };
    let mut lower = build(&mut idx.iter().copied());
    let mut upper = build(&mut idx.iter().rev().copied());
    lower.pop();
    upper.pop();
    if lower.is_empty() {
        // All points collinear: lower = [min] after pop; recover extremes.
        return vec![idx[0], idx[n - 1]];
    }
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattices;
    use crate::quiver::dualize;
    use crate::testdata::{C3, CONIFOLD, F0, TWOGON};
    use crate::tiling::parse_tiling;

    #[test]
    fn counts_match_permanent_on_fixtures() {
        for (s, expect) in [(C3, 3u32), (CONIFOLD, 4), (F0, 8), (TWOGON, 4)] {
            let t = parse_tiling(s).unwrap();
            let ms = enumerate_matchings(&t);
            assert_eq!(ms.len(), expect as usize, "{}", t.name);
            assert_eq!(count_matchings_oracle(&t).unwrap(), BigInt::from(expect));
            // Each matching covers every vertex exactly once.
            for m in &ms {
                let mut wc = vec![0; t.white.len()];
                let mut bc = vec![0; t.black.len()];
                for &e in &m.edges {
                    wc[t.edges[e].white] += 1;
                    bc[t.edges[e].black] += 1;
                }
                assert!(wc.iter().all(|&c| c == 1) && bc.iter().all(|&c| c == 1));
            }
            // Sorted by id, no duplicates.
            assert!(ms.windows(2).all(|w| w[0].id < w[1].id));
        }
    }

    #[test]
    fn twogon_extremality() {
        let t = parse_tiling(TWOGON).unwrap();
        let q = dualize(&t);
        // e3 and e4 are loops at the 6-gon's quiver vertex; removing either
        // leaves both connecting arrows. Removing e1 or e2 cuts one direction.
        let e = |id: &str| vec![q.arrow_index(id).unwrap()];
        assert!(is_extremal(&q, &e("e3")));
        assert!(is_extremal(&q, &e("e4")));
        assert!(!is_extremal(&q, &e("e1")));
        assert!(!is_extremal(&q, &e("e2")));
    }

    #[test]
    fn f0_diagram_is_square_with_quadruple_center() {
        let t = parse_tiling(F0).unwrap();
        let q = dualize(&t);
        let l = build_lattices(&q).unwrap();
        let ms = enumerate_matchings(&t);
        let d = diagram_of_center(&q, &l, &ms).unwrap();
        assert_eq!(d.points.len(), 5);
        let mut mults: Vec<usize> = d.points.iter().map(|p| p.matchings.len()).collect();
        mults.sort_unstable();
        assert_eq!(mults, [1, 1, 1, 1, 4]);
        assert_eq!(d.hull.len(), 4);
        // The doubled area of the hull is 4 (a unit-ish square around the center).
        let hullpts: Vec<&(BigInt, BigInt)> = d.hull.iter().map(|&i| &d.points[i].point).collect();
        let mut area2 = BigInt::zero();
        for k in 0..hullpts.len() {
            let p = hullpts[k];
            let r = hullpts[(k + 1) % hullpts.len()];
            area2 += &p.0 * &r.1 - &r.0 * &p.1;
        }
        assert_eq!(area2, BigInt::from(4));
    }

    #[test]
    fn c3_and_conifold_diagrams() {
        for (s, npts, nhull) in [(C3, 3, 3), (CONIFOLD, 4, 4)] {
            let t = parse_tiling(s).unwrap();
            let q = dualize(&t);
            let l = build_lattices(&q).unwrap();
            let ms = enumerate_matchings(&t);
            let d = diagram_of_center(&q, &l, &ms).unwrap();
            assert_eq!(d.points.len(), npts, "{}", t.name);
            assert_eq!(d.hull.len(), nhull, "{}", t.name);
            assert!(d.points.iter().all(|p| p.matchings.len() == 1));
        }
    }

    #[test]
    fn cone_membership_of_omega() {
        let t = parse_tiling(F0).unwrap();
        let q = dualize(&t);
        let l = build_lattices(&q).unwrap();
        let ms = enumerate_matchings(&t);
        let omega = l.omega_bar().to_vec();
        assert!(cone_contains(&l, &ms, &omega));
        let neg: Vec<BigInt> = omega.iter().map(|x| -x).collect();
        assert!(!cone_contains(&l, &ms, &neg));
    }

    #[test]
    fn hull_handles_degenerate_inputs() {
        let p = |x: i64, y: i64| (BigInt::from(x), BigInt::from(y));
        assert_eq!(convex_hull(&[p(3, 4)]), vec![0]);
        assert_eq!(convex_hull(&[p(2, 2), p(0, 0)]), vec![1, 0]);
        // Collinear run: extremes only.
        assert_eq!(convex_hull(&[p(1, 1), p(3, 3), p(0, 0), p(2, 2)]), vec![2, 1]);
        // Square with center and an edge midpoint: 4 vertices, ccw from (0,0).
        let pts = [p(0, 0), p(2, 0), p(2, 2), p(0, 2), p(1, 1), p(1, 0)];
        assert_eq!(convex_hull(&pts), vec![0, 1, 2, 3]);
    }
}
