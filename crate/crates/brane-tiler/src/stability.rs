//! θ-stability of quiver representations with zeroed arrow sets.
//!
//! For an arrow subset `Z` (the *cosupport*), consider the representation
//! with a one-dimensional space at every quiver vertex where arrows in `Z`
//! act as zero and all other arrows act as the identity. Its
//! subrepresentations are exactly the vertex subsets closed under the
//! surviving arrows, so θ-stability — every proper nonempty closed subset
//! `S` has `θ(S) > 0` — is a combinatorial optimization: minimize `θ(S)`
//! over closed subsets. [`is_theta_stable`] solves it exactly by condensing
//! strongly connected components and running a max-weight-closure min-cut
//! for every forced (in, out) component pair; a brute-force subset scan
//! serves as an independent oracle.
//!
//! The module also classifies cosupports geometrically: the empty set
//! (dimension 3), a perfect matching (dimension 2), a matching pair's union
//! — disjoint edges plus one alternating cycle (dimension 1), or a matching
//! triple's union — disjoint edges plus a theta-shaped component (dimension
//! 0), with exact decompositions back into matchings.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::matchings::PerfectMatching;
use crate::quiver::DualQuiver;
use crate::tiling::BraneTiling;

/// Check that `theta` has one entry per quiver vertex and sums to zero.
pub fn validate_theta(q: &DualQuiver, theta: &[i64]) -> Result<()> {
    if theta.len() != q.n_vertices() {
        return Err(Error::Theta(format!(
            "theta has {} entries but the quiver has {} vertices",
            theta.len(),
            q.n_vertices()
        )));
    }
    let total: i128 = theta.iter().map(|&x| x as i128).sum();
    if total != 0 {
        return Err(Error::Theta(format!("theta entries sum to {total}, expected 0")));
    }
    Ok(())
}

/// Search for a proper nonempty vertex subset on which `theta` sums to
/// zero. `None` means `theta` is generic; `Some(subset)` is a witness of
/// degeneracy. Supported up to 25 vertices.
pub fn generic_witness(theta: &[i64]) -> Result<Option<Vec<usize>>> {
    let n = theta.len();
    if n > 25 {
        return Err(Error::Unsupported(format!(
            "genericity scan supports at most 25 vertices, got {n}"
        )));
    }
    if n == 0 {
        return Ok(None);
    }
    let full: u64 = (1 << n) - 1;
    let mut sum: i128 = 0;
    // Gray-code walk: one entry flips per step.
    for k in 1u64..=full {
        let j = k.trailing_zeros() as usize;
        let mask = k ^ (k >> 1);
        if (mask >> j) & 1 == 1 {
            sum += theta[j] as i128;
        } else {
            sum -= theta[j] as i128;
        }
        if mask != full && sum == 0 {
            return Ok(Some((0..n).filter(|&i| (mask >> i) & 1 == 1).collect()));
        }
    }
    Ok(None)
}

/// Strongly connected components of the quiver minus `removed` arrows.
/// Returns (component id per vertex, component count); ids are in reverse
/// topological order of the condensation (sources first).
fn condense(q: &DualQuiver, removed: &[bool]) -> (Vec<usize>, usize) {
    let n = q.n_vertices();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut radj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, a) in q.arrows.iter().enumerate() {
        if !removed[i] {
            adj[a.source].push(a.target);
            radj[a.target].push(a.source);
        }
    }
    // Kosaraju: order by finish time, then sweep the reverse graph.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        seen[root] = true;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < adj[v].len() {
                let u = adj[v][*next];
                *next += 1;
                if !seen[u] {
                    seen[u] = true;
                    stack.push((u, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut nc = 0;
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        let mut stack = vec![root];
        comp[root] = nc;
        while let Some(v) = stack.pop() {
            for &u in &radj[v] {
                if comp[u] == usize::MAX {
                    comp[u] = nc;
                    stack.push(u);
                }
            }
        }
        nc += 1;
    }
    (comp, nc)
}

/// Edmonds–Karp max flow on a dense capacity matrix.
fn max_flow(cap: &mut [Vec<i128>], s: usize, t: usize) -> i128 {
    let n = cap.len();
    let mut flow = 0i128;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        'bfs: while let Some(v) = queue.pop_front() {
            for u in 0..n {
                if parent[u] == usize::MAX && cap[v][u] > 0 {
                    parent[u] = v;
                    if u == t {
                        break 'bfs;
                    }
                    queue.push_back(u);
                }
            }
        }
        if parent[t] == usize::MAX {
            return flow;
        }
        let mut bottleneck = i128::MAX;
        let mut u = t;
        while u != s {
            let v = parent[u];
            bottleneck = bottleneck.min(cap[v][u]);
            u = v;
        }
        let mut u = t;
        while u != s {
            let v = parent[u];
            cap[v][u] -= bottleneck;
            cap[u][v] += bottleneck;
            u = v;
        }
        flow += bottleneck;
    }
}

/// Is the representation with cosupport `zeroed` θ-stable? Exact, via
/// max-weight closures of the condensation: unstable exactly when some
/// proper nonempty closed vertex subset has a non-positive θ-sum.
pub fn is_theta_stable(q: &DualQuiver, zeroed: &[usize], theta: &[i64]) -> Result<bool> {
    validate_theta(q, theta)?;
    let n = q.n_vertices();
    if n == 1 {
        return Ok(true);
    }
    let mut removed = vec![false; q.n_arrows()];
    for &a in zeroed {
        removed[a] = true;
    }
    let (comp, nc) = condense(q, &removed);
    if nc == 1 {
        return Ok(true);
    }

    // A destabilizer is a closed subset with θ(S) ≤ 0, i.e. (−θ)(S) ≥ 0,
    // so the closure weights carry the negated parameter.
    let mut weight = vec![0i128; nc];
    for (v, &c) in comp.iter().enumerate() {
        weight[c] -= theta[v] as i128;
    }
    let mut dag: Vec<Vec<bool>> = vec![vec![false; nc]; nc];
    for (i, a) in q.arrows.iter().enumerate() {
        if !removed[i] && comp[a.source] != comp[a.target] {
            dag[comp[a.source]][comp[a.target]] = true;
        }
    }
    // Reachability between components.
    let mut reach = vec![vec![false; nc]; nc];
    for c in 0..nc {
        let mut stack = vec![c];
        reach[c][c] = true;
        while let Some(v) = stack.pop() {
            for u in 0..nc {
                if dag[v][u] && !reach[c][u] {
                    reach[c][u] = true;
                    stack.push(u);
                }
            }
        }
    }

    let inf: i128 = theta.iter().map(|&x| (x as i128).abs()).sum::<i128>() + 1;
    let s = nc;
    let t = nc + 1;
    for cin in 0..nc {
        for cout in 0..nc {
            // Closed sets are unions of components closed under the
            // condensation's arrows; force cin inside and cout outside.
            // If cout is reachable from cin no such set exists.
            if cin == cout || reach[cin][cout] {
                continue;
            }
            let mut cap = vec![vec![0i128; nc + 2]; nc + 2];
            let mut positive_mass = 0i128;
            for c in 0..nc {
                if weight[c] > 0 {
                    cap[s][c] += weight[c];
                    positive_mass += weight[c];
                } else if weight[c] < 0 {
                    cap[c][t] += -weight[c];
                }
            }
            for a in 0..nc {
                for b in 0..nc {
                    if dag[a][b] {
                        cap[a][b] = inf;
                    }
                }
            }
            cap[s][cin] += inf;
            cap[cout][t] += inf;
            let best = positive_mass - max_flow(&mut cap, s, t);
            if best >= 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Brute-force θ-stability over all vertex subsets — the oracle for
/// [`is_theta_stable`]. Supported up to 20 vertices.
pub fn is_theta_stable_bruteforce(q: &DualQuiver, zeroed: &[usize], theta: &[i64]) -> Result<bool> {
    validate_theta(q, theta)?;
    let n = q.n_vertices();
    if n > 20 {
        return Err(Error::Unsupported(format!(
            "brute-force stability supports at most 20 vertices, got {n}"
        )));
    }
    if n == 1 {
        return Ok(true);
    }
    let mut removed = vec![false; q.n_arrows()];
    for &a in zeroed {
        removed[a] = true;
    }
    let full: u32 = (1 << n) - 1;
    for mask in 1..full {
        let closed = q.arrows.iter().enumerate().all(|(i, a)| {
            removed[i] || (mask >> a.source) & 1 == 0 || (mask >> a.target) & 1 == 1
        });
        if !closed {
            continue;
        }
        let total: i128 = (0..n).filter(|&v| (mask >> v) & 1 == 1).map(|v| theta[v] as i128).sum();
        if total <= 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Does the arrow subset meet each arrow's two complementary paths
/// consistently — for every arrow, either both complementary paths contain
/// a subset arrow or neither does?
pub fn is_w_compatible(q: &DualQuiver, subset: &[usize]) -> bool {
    let mut inset = vec![false; q.n_arrows()];
    for &a in subset {
        inset[a] = true;
    }
    (0..q.n_arrows()).all(|a| {
        let (plus, minus) = q.cyclic_derivative(a);
        let hit_plus = plus.iter().any(|&x| inset[x]);
        let hit_minus = minus.iter().any(|&x| inset[x]);
        hit_plus == hit_minus
    })
}

/// The geometric shape of a cosupport, viewed as a set of tiling edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cosupport {
    /// The empty set: nothing is cut out.
    Dim3,
    /// A perfect matching: a divisor.
    Dim2,
    /// Disjoint single edges plus exactly one alternating cycle: a curve.
    Dim1 {
        /// The cycle's edges in traversal order, starting from its smallest.
        cycle: Vec<usize>,
        /// Edges whose component is just themselves, ascending.
        singles: Vec<usize>,
    },
    /// Disjoint single edges plus one theta-shaped component: a point.
    Dim0 {
        /// Three edge-disjoint chains from the trivalent white vertex to
        /// the trivalent black vertex, each listed from white to black,
        /// ordered by first edge.
        chains: [Vec<usize>; 3],
        /// Edges whose component is just themselves, ascending.
        singles: Vec<usize>,
    },
    /// Anything else.
    Other,
}

/// Every vertex covered exactly once?
fn is_perfect_matching(t: &BraneTiling, edges: &[usize]) -> bool {
    let mut wc = vec![0usize; t.white.len()];
    let mut bc = vec![0usize; t.black.len()];
    for &e in edges {
        wc[t.edges[e].white] += 1;
        bc[t.edges[e].black] += 1;
    }
    wc.iter().all(|&c| c == 1) && bc.iter().all(|&c| c == 1)
}

/// Classify the shape of an edge subset. Vertices are shared between the
/// white range `0..nw` and the black range `nw..nw+nb`.
pub fn classify_cosupport(t: &BraneTiling, edges: &[usize]) -> Cosupport {
    let set: std::collections::BTreeSet<usize> = edges.iter().copied().collect();
    if set.is_empty() {
        return Cosupport::Dim3;
    }
    let edges: Vec<usize> = set.into_iter().collect();
    if is_perfect_matching(t, &edges) {
        return Cosupport::Dim2;
    }
    let nw = t.white.len();
    let nv = nw + t.black.len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for &e in &edges {
        incident[t.edges[e].white].push(e);
        incident[nw + t.edges[e].black].push(e);
    }
    // Every vertex must be covered.
    if incident.iter().any(|l| l.is_empty()) {
        return Cosupport::Other;
    }
    // Group edges into connected components.
    let ends = |e: usize| (t.edges[e].white, nw + t.edges[e].black);
    let mut comp_of = vec![usize::MAX; t.edges.len()];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &e0 in &edges {
        if comp_of[e0] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![e0];
        comp_of[e0] = id;
        let mut stack = vec![e0];
        while let Some(e) = stack.pop() {
            let (a, b) = ends(e);
            for &x in incident[a].iter().chain(&incident[b]) {
                if comp_of[x] == usize::MAX {
                    comp_of[x] = id;
                    members.push(x);
                    stack.push(x);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }

    let mut singles: Vec<usize> = Vec::new();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut thetas: Vec<[Vec<usize>; 3]> = Vec::new();
    for members in &comps {
        if members.len() == 1 {
            singles.push(members[0]);
            continue;
        }
        let degrees: Vec<usize> = {
            let mut vs: Vec<usize> = members.iter().flat_map(|&e| { let (a, b) = ends(e); [a, b] }).collect();
            vs.sort_unstable();
            vs.dedup();
            vs.iter().map(|&v| incident[v].len()).collect()
        };
        let nverts = degrees.len();
        if degrees.iter().all(|&d| d == 2) && members.len() == nverts {
            // An alternating cycle; walk it from its smallest edge.
            let e0 = members[0];
            let mut cycle = vec![e0];
            let mut at = ends(e0).1;
            let mut via = e0;
            loop {
                let &next = incident[at].iter().find(|&&x| x != via).expect("degree 2");
                if next == e0 {
                    break;
                }
                cycle.push(next);
                let (a, b) = ends(next);
                at = if a == at { b } else { a };
                via = next;
            }
            if cycle.len() != members.len() {
                return Cosupport::Other; // two cycles sharing no vertex cannot merge; defensive
            }
            cycles.push(cycle);
            continue;
        }
        // Theta shape: exactly one trivalent white and one trivalent black
        // vertex, all other degrees 2, edge count = vertex count + 1.
        let verts: Vec<usize> = {
            let mut vs: Vec<usize> = members.iter().flat_map(|&e| { let (a, b) = ends(e); [a, b] }).collect();
            vs.sort_unstable();
            vs.dedup();
            vs
        };
        let tri: Vec<usize> = verts.iter().copied().filter(|&v| incident[v].len() == 3).collect();
        let deg_ok = verts.iter().all(|&v| matches!(incident[v].len(), 2 | 3));
        if !(deg_ok
            && tri.len() == 2
            && tri[0] < nw
            && tri[1] >= nw
            && members.len() == verts.len() + 1)
        {
            return Cosupport::Other;
        }
        let (wt, bt) = (tri[0], tri[1]);
        let mut starts = incident[wt].clone();
        starts.sort_unstable();
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let mut used = 0usize;
        for &start in &starts {
            let mut chain = vec![start];
            let (a, b) = ends(start);
            let mut at = if a == wt { b } else { a };
            let mut via = start;
            while incident[at].len() == 2 {
                let &next = incident[at].iter().find(|&&x| x != via).expect("degree 2");
                chain.push(next);
                let (a, b) = ends(next);
                at = if a == at { b } else { a };
                via = next;
            }
            if at != bt {
                return Cosupport::Other; // a chain looped back: not a theta
            }
            used += chain.len();
            chains.push(chain);
        }
        if chains.len() != 3 || used != members.len() {
            return Cosupport::Other;
        }
        chains.sort_by_key(|c| c[0]);
        let [c0, c1, c2] = <[Vec<usize>; 3]>::try_from(chains).expect("three chains");
        thetas.push([c0, c1, c2]);
    }

    singles.sort_unstable();
    match (cycles.len(), thetas.len()) {
        (1, 0) => Cosupport::Dim1 { cycle: cycles.pop().expect("one cycle"), singles },
        (0, 1) => Cosupport::Dim0 { chains: thetas.pop().expect("one theta"), singles },
        _ => Cosupport::Other,
    }
}

/// Split a dimension-1 cosupport into its two perfect matchings, sorted by
/// id. The union of the result is the input; failure to produce two
/// matchings is an internal error.
pub fn decompose_dim1(t: &BraneTiling, edges: &[usize]) -> Result<[PerfectMatching; 2]> {
    let Cosupport::Dim1 { cycle, singles } = classify_cosupport(t, edges) else {
        return Err(Error::Unsupported("the edge set is not a dimension-1 cosupport".into()));
    };
    let mut parts: Vec<Vec<usize>> = vec![singles.clone(), singles];
    for (i, &e) in cycle.iter().enumerate() {
        parts[i % 2].push(e);
    }
    let mut out: Vec<PerfectMatching> = Vec::new();
    for p in parts {
        if !is_perfect_matching(t, &p) {
            return Err(Error::Invariant("a cycle class is not a perfect matching".into()));
        }
        out.push(matching_from(t, p));
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(<[PerfectMatching; 2]>::try_from(out).expect("two classes"))
}

/// Split a dimension-0 cosupport into its three perfect matchings, sorted
/// by id. The union of the result is the input.
pub fn decompose_dim0(t: &BraneTiling, edges: &[usize]) -> Result<[PerfectMatching; 3]> {
    let Cosupport::Dim0 { chains, singles } = classify_cosupport(t, edges) else {
        return Err(Error::Unsupported("the edge set is not a dimension-0 cosupport".into()));
    };
    let mut out: Vec<PerfectMatching> = Vec::new();
    for i in 0..3 {
        let mut part = singles.clone();
        for (j, chain) in chains.iter().enumerate() {
            let keep = if i == j { 0 } else { 1 };
            part.extend(chain.iter().skip(keep).step_by(2));
        }
        if !is_perfect_matching(t, &part) {
            return Err(Error::Invariant("a chain class is not a perfect matching".into()));
        }
        out.push(matching_from(t, part));
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(<[PerfectMatching; 3]>::try_from(out).expect("three classes"))
}

fn matching_from(t: &BraneTiling, mut edges: Vec<usize>) -> PerfectMatching {
    edges.sort_unstable();
    let mut ids: Vec<&str> = edges.iter().map(|&e| t.edges[e].id.as_str()).collect();
    ids.sort_unstable();
    PerfectMatching { id: ids.join(","), edges }
}
