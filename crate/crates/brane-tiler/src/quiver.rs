//! The quiver with potential dual to a tiling.
//!
//! Dualization swaps dimensions: quiver vertices are the tiling's faces,
//! quiver arrows are the tiling's edges, and the quiver's faces — the terms
//! of the potential — are the tiling's vertices. An edge traversed
//! white→black by a tiling face points *into* that face's quiver vertex;
//! traversed black→white, *out of* it. Around a white tiling vertex the
//! incident edges close into an oriented cycle of arrows (read off from the
//! corner structure of the gluing), giving a positive face; black vertices
//! give negative faces. The potential is the formal sum of positive cycles
//! minus negative cycles, and its cyclic derivative along an arrow `a` is
//! the pair of complementary paths closing `a` inside its two faces.

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::tiling::BraneTiling;

/// An arrow of the dual quiver (one per tiling edge, same id).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    /// Id, inherited from the tiling edge.
    pub id: String,
    /// Source vertex index (the tiling face traversing the edge black→white).
    pub source: usize,
    /// Target vertex index (the tiling face traversing the edge white→black).
    pub target: usize,
}

/// An oriented face of the quiver: a cyclic word of arrows, head to tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFace {
    /// Id, inherited from the tiling vertex it dualizes.
    pub id: String,
    /// Arrow indices in cyclic order; `target(cycle[i]) = source(cycle[i+1])`
    /// and the cycle is rotated to start at its smallest arrow index.
    pub cycle: Vec<usize>,
}

/// The dual quiver of a tiling, with its potential faces.
#[derive(Debug, Clone)]
pub struct DualQuiver {
    /// Vertex ids (= tiling face ids), in document order.
    pub vertices: Vec<String>,
    /// Arrows (= tiling edges), in document order.
    pub arrows: Vec<Arrow>,
    /// Positive faces, one per white tiling vertex, in document order.
    pub white_faces: Vec<QFace>,
    /// Negative faces, one per black tiling vertex, in document order.
    pub black_faces: Vec<QFace>,
    /// For each arrow: (white face index, position in its cycle).
    white_pos: Vec<(usize, usize)>,
    /// For each arrow: (black face index, position in its cycle).
    black_pos: Vec<(usize, usize)>,
}

impl DualQuiver {
    /// Number of quiver vertices.
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Number of arrows.
    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    /// Number of potential faces (positive + negative).
    pub fn n_faces(&self) -> usize {
        self.white_faces.len() + self.black_faces.len()
    }

    /// All faces, positive then negative — the canonical face order.
    pub fn faces(&self) -> impl Iterator<Item = &QFace> {
        self.white_faces.iter().chain(self.black_faces.iter())
    }

    /// Index of the vertex with the given id.
    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    /// Index of the arrow with the given id.
    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    /// The white and black faces through an arrow, with the arrow's position
    /// in each cycle.
    pub fn faces_through(&self, arrow: usize) -> ((usize, usize), (usize, usize)) {
        (self.white_pos[arrow], self.black_pos[arrow])
    }

    /// Cyclic derivative of the potential along `arrow`: the two paths
    /// `(u⁺, u⁻)` such that `arrow · u⁺` is the positive face through the
    /// arrow and `arrow · u⁻` the negative one. Both run from the arrow's
    /// target back to its source.
    pub fn cyclic_derivative(&self, arrow: usize) -> (Vec<usize>, Vec<usize>) {
        let complement = |faces: &[QFace], (f, p): (usize, usize)| {
            let c = &faces[f].cycle;
            (1..c.len()).map(|k| c[(p + k) % c.len()]).collect::<Vec<_>>()
        };
        (
            complement(&self.white_faces, self.white_pos[arrow]),
            complement(&self.black_faces, self.black_pos[arrow]),
        )
    }

    /// Exponent vector of a multiset of arrows (how many times each arrow
    /// occurs), as arbitrary-precision integers.
    pub fn content(&self, arrows: &[usize]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.n_arrows()];
        for &a in arrows {
            v[a] += BigInt::one();
        }
        v
    }
}

/// Dualize a validated tiling.
pub fn dualize(t: &BraneTiling) -> DualQuiver {
    let ne = t.edges.len();
    // Arrow endpoints: the face using an edge white→black is its target.
    let mut src = vec![usize::MAX; ne];
    let mut tgt = vec![usize::MAX; ne];
    for (fi, face) in t.faces.iter().enumerate() {
        for pos in 0..face.word.len() {
            let (e, w2b) = t.segment(fi, pos);
            if w2b {
                debug_assert_eq!(tgt[e], usize::MAX, "validated tilings fill each slot once");
                tgt[e] = fi;
            } else {
                debug_assert_eq!(src[e], usize::MAX);
                src[e] = fi;
            }
        }
    }
    let arrows: Vec<Arrow> = t
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| Arrow { id: e.id.clone(), source: src[i], target: tgt[i] })
        .collect();

    // Corner successor maps. At a white vertex, the corner (eᵖ arrives
    // black→white, eⁿ leaves white→black) makes eᵖ the arrow *after* eⁿ in
    // the positive cycle; at a black vertex the same corner shape makes the
    // leaving edge the one after the arriving edge.
    let mut succ_white: Vec<Option<usize>> = vec![None; ne];
    let mut succ_black: Vec<Option<usize>> = vec![None; ne];
    for (fi, face) in t.faces.iter().enumerate() {
        let l = face.word.len();
        for pos in 0..l {
            let (e_in, w2b_in) = t.segment(fi, pos);
            let (e_out, _) = t.segment(fi, (pos + 1) % l);
            if w2b_in {
                // Head is black: corner (arriving e_in, leaving e_out).
                debug_assert!(succ_black[e_in].is_none());
                succ_black[e_in] = Some(e_out);
            } else {
                // Head is white: the leaving edge's successor is the arriving one.
                debug_assert!(succ_white[e_out].is_none());
                succ_white[e_out] = Some(e_in);
            }
        }
    }

    let build_faces = |ids: &[String],
                       vertex_of: &dyn Fn(usize) -> usize,
                       succ: &[Option<usize>]|
     -> (Vec<QFace>, Vec<(usize, usize)>) {
        // Partition arrows by incident tiling vertex, then thread each class
        // into its unique cycle starting from the smallest arrow index.
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); ids.len()];
        for e in 0..ne {
            members[vertex_of(e)].push(e);
        }
        let mut faces = Vec::with_capacity(ids.len());
        let mut pos = vec![(usize::MAX, usize::MAX); ne];
        for (vi, mem) in members.iter().enumerate() {
            let start = *mem.iter().min().expect("validated: every vertex has edges");
            let mut cycle = Vec::with_capacity(mem.len());
            let mut cur = start;
            loop {
                pos[cur] = (vi, cycle.len());
                cycle.push(cur);
                cur = succ[cur].expect("validated: every edge slot is assigned");
                if cur == start {
                    break;
                }
            }
            debug_assert_eq!(cycle.len(), mem.len(), "corner walk covers the vertex star");
            faces.push(QFace { id: ids[vi].clone(), cycle });
        }
        (faces, pos)
    };

    let (white_faces, white_pos) =
        build_faces(&t.white, &|e| t.edges[e].white, &succ_white);
    let (black_faces, black_pos) =
        build_faces(&t.black, &|e| t.edges[e].black, &succ_black);

    let q = DualQuiver { vertices: t.faces.iter().map(|f| f.id.clone()).collect(), arrows, white_faces, black_faces, white_pos, black_pos };
    debug_assert!(q.faces().all(|f| cycle_is_head_to_tail(&q, &f.cycle)));
    q
}

fn cycle_is_head_to_tail(q: &DualQuiver, cycle: &[usize]) -> bool {
    (0..cycle.len()).all(|i| {
        q.arrows[cycle[i]].target == q.arrows[cycle[(i + 1) % cycle.len()]].source
    })
}

/// A walk in the quiver: a start vertex and steps along arrows, each taken
/// forward (`true`) or backward (`false`). Strict paths take every arrow
/// forward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    /// Start vertex.
    pub start: usize,
    /// Steps: (arrow index, forward?).
    pub steps: Vec<(usize, bool)>,
}

impl Walk {
    /// Build a strict path from consecutive arrows, validating adjacency.
    pub fn path(q: &DualQuiver, arrows: &[usize]) -> Result<Walk> {
        if arrows.is_empty() {
            return Err(Error::Endpoints("a path needs at least one arrow".into()));
        }
        let start = q.arrows[arrows[0]].source;
        Walk::weak(q, start, &arrows.iter().map(|&a| (a, true)).collect::<Vec<_>>())
    }

    /// Build a walk from signed steps, validating endpoint continuity.
    pub fn weak(q: &DualQuiver, start: usize, steps: &[(usize, bool)]) -> Result<Walk> {
        let mut cur = start;
        for &(a, fwd) in steps {
            let arr = &q.arrows[a];
            let (from, to) = if fwd { (arr.source, arr.target) } else { (arr.target, arr.source) };
            if from != cur {
                return Err(Error::Endpoints(format!(
                    "step '{}' {} starts at '{}', walk is at '{}'",
                    arr.id,
                    if fwd { "forward" } else { "backward" },
                    q.vertices[from],
                    q.vertices[cur]
                )));
            }
            cur = to;
        }
        Ok(Walk { start, steps: steps.to_vec() })
    }

    /// End vertex of the walk.
    pub fn end(&self, q: &DualQuiver) -> usize {
        self.steps.iter().fold(self.start, |_, &(a, fwd)| {
            if fwd {
                q.arrows[a].target
            } else {
                q.arrows[a].source
            }
        })
    }

    /// Signed exponent vector: +1 for each forward step, −1 for backward.
    pub fn content(&self, q: &DualQuiver) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); q.n_arrows()];
        for &(a, fwd) in &self.steps {
            if fwd {
                v[a] += BigInt::one();
            } else {
                v[a] -= BigInt::one();
            }
        }
        v
    }

    /// True when every step is forward.
    pub fn is_strict(&self) -> bool {
        self.steps.iter().all(|&(_, fwd)| fwd)
    }
}
