//! Tiling documents: JSON schema, validation, and the torus gluing.
//!
//! A tiling is a bipartite graph (white/black vertices, every edge joining
//! one of each) together with a face list describing how polygons glue into
//! a closed surface. The JSON schema is:
//!
//! ```json
//! {
//!   "name": "c3",
//!   "white": ["w"],
//!   "black": ["b"],
//!   "edges": [{ "id": "x", "white": "w", "black": "b" }, ...],
//!   "faces": [{ "id": "f", "boundary": ["w", "b", "w", "b", "w", "b"] }]
//! }
//! ```
//!
//! Face boundaries list vertices in cyclic order, alternating colours and
//! starting with a white vertex. Validation enforces, in order: schema and
//! id uniqueness, bipartite endpoints, boundary alternation, vertex
//! coverage, Euler characteristic 0, and the gluing conditions — every edge
//! is traversed exactly once white→black and once black→white across all
//! boundaries, and the faces glue to a *torus*: walking corner-to-corner
//! around any vertex must close into a single cycle.
//!
//! # Parallel edges
//!
//! A boundary vertex list does not say *which* of several parallel edges a
//! segment uses. The validator resolves this by a backtracking search over
//! segment→edge assignments (document order, first valid assignment wins, so
//! the result is deterministic), accepting an assignment only if the corner
//! walk closes at every vertex. The search is exponential only in the
//! multiplicity of parallel edge classes, which is tiny in practice.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TilingDoc {
    name: String,
    white: Vec<String>,
    black: Vec<String>,
    edges: Vec<EdgeDoc>,
    faces: Vec<FaceDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    id: String,
    white: String,
    black: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FaceDoc {
    id: String,
    boundary: Vec<String>,
}

/// An edge of the tiling, joining a white and a black vertex (by index).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    /// Document id.
    pub id: String,
    /// Index into [`BraneTiling::white`].
    pub white: usize,
    /// Index into [`BraneTiling::black`].
    pub black: usize,
}

/// A face of the tiling with its resolved boundary word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Document id.
    pub id: String,
    /// Vertex ids in cyclic order (even positions white, odd black).
    pub boundary: Vec<String>,
    /// Resolved edge index per boundary segment: `word[i]` joins
    /// `boundary[i]` to `boundary[(i+1) % len]`; segments at even positions
    /// run white→black, odd positions black→white.
    pub word: Vec<usize>,
}

/// A validated brane tiling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraneTiling {
    /// Document name.
    pub name: String,
    /// White vertex ids, in document order.
    pub white: Vec<String>,
    /// Black vertex ids, in document order.
    pub black: Vec<String>,
    /// Edges, in document order.
    pub edges: Vec<Edge>,
    /// Faces with resolved boundary words, in document order.
    pub faces: Vec<Face>,
}

impl BraneTiling {
    /// The segment of face `f` starting at boundary position `pos`:
    /// `(edge index, runs white→black)`.
    pub fn segment(&self, f: usize, pos: usize) -> (usize, bool) {
        (self.faces[f].word[pos], pos % 2 == 0)
    }

    /// Index of the edge with the given id.
    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Index of the face with the given id.
    pub fn face_index(&self, id: &str) -> Option<usize> {
        self.faces.iter().position(|f| f.id == id)
    }

    /// Build a validated tiling from raw parts (id triples for edges are
    /// `(id, white id, black id)`); runs the full validation pipeline.
    pub fn from_parts(
        name: &str,
        white: Vec<String>,
        black: Vec<String>,
        edges: Vec<(String, String, String)>,
        faces: Vec<(String, Vec<String>)>,
    ) -> Result<BraneTiling> {
        validate_doc(TilingDoc {
            name: name.to_string(),
            white,
            black,
            edges: edges
                .into_iter()
                .map(|(id, w, b)| EdgeDoc { id, white: w, black: b })
                .collect(),
            faces: faces
                .into_iter()
                .map(|(id, boundary)| FaceDoc { id, boundary })
                .collect(),
        })
    }

    /// Re-emit the tiling as a schema-conforming JSON document.
    pub fn to_json(&self) -> String {
        let doc = TilingDoc {
            name: self.name.clone(),
            white: self.white.clone(),
            black: self.black.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    white: self.white[e.white].clone(),
                    black: self.black[e.black].clone(),
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .map(|f| FaceDoc { id: f.id.clone(), boundary: f.boundary.clone() })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("tiling doc serializes");
        s.push('\n');
        s
    }
}

/// Parse and fully validate a tiling document.
pub fn parse_tiling(json: &str) -> Result<BraneTiling> {
    let doc: TilingDoc = serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))?;
    validate_doc(doc)
}

/// One boundary segment, before edge resolution.
struct Seg {
    /// Global index of the next segment around the same face.
    next: usize,
    /// Head vertex, encoded white `w` ↦ `w`, black `b` ↦ `|W| + b`.
    head: usize,
    /// 0 if the segment runs white→black, 1 otherwise (slot index).
    dir: usize,
    /// Candidate edge indices (document order).
    cands: Vec<usize>,
}

struct Resolver<'a> {
    segs: &'a [Seg],
    /// Per edge: the segment occupying its white→black / black→white slot.
    slot: Vec<[Option<usize>; 2]>,
    /// Chosen edge per segment.
    choice: Vec<usize>,
    /// Number of segments pointing at each encoded vertex.
    head_count: &'a [usize],
    /// Whether any complete assignment was reached (even if rejected).
    any_complete: bool,
}

impl Resolver<'_> {
    fn dfs(&mut self, k: usize) -> bool {
        if k == self.segs.len() {
            self.any_complete = true;
            return self.rotation_ok();
        }
        let dir = self.segs[k].dir;
        for i in 0..self.segs[k].cands.len() {
            let e = self.segs[k].cands[i];
            if self.slot[e][dir].is_none() {
                self.slot[e][dir] = Some(k);
                self.choice[k] = e;
                if self.dfs(k + 1) {
                    return true;
                }
                self.slot[e][dir] = None;
            }
        }
        false
    }

    /// With every slot filled, check the rotation system: hopping from a
    /// segment to the reverse traversal of the next segment's edge is a
    /// permutation of segments whose cycles must be exactly the classes
    /// "segments with the same head vertex".
    fn rotation_ok(&self) -> bool {
        let n = self.segs.len();
        let succ: Vec<usize> = (0..n)
            .map(|s| {
                let t = self.segs[s].next;
                let e = self.choice[t];
                self.slot[e][1 - self.segs[t].dir].expect("complete assignment")
            })
            .collect();
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0usize;
            let mut cur = s;
            loop {
                debug_assert_eq!(self.segs[cur].head, self.segs[s].head);
                seen[cur] = true;
                len += 1;
                cur = succ[cur];
                if cur == s {
                    break;
                }
            }
            if len != self.head_count[self.segs[s].head] {
                return false;
            }
        }
        true
    }
}

fn validate_doc(doc: TilingDoc) -> Result<BraneTiling> {
    // Id uniqueness within each kind; vertex ids unique across colours too,
    // since boundaries reference them without a colour tag.
    let mut vid: BTreeMap<&str, usize> = BTreeMap::new();
    let wn = doc.white.len();
    let bn = doc.black.len();
    if wn == 0 || bn == 0 {
        return Err(Error::Schema("a tiling needs at least one vertex of each colour".into()));
    }
    for (i, w) in doc.white.iter().enumerate() {
        if vid.insert(w, i).is_some() {
            return Err(Error::Schema(format!("duplicate vertex id '{w}'")));
        }
    }
    for (i, b) in doc.black.iter().enumerate() {
        if vid.insert(b, wn + i).is_some() {
            return Err(Error::Schema(format!("duplicate vertex id '{b}'")));
        }
    }

    let mut edge_ids: BTreeSet<&str> = BTreeSet::new();
    let mut edges: Vec<Edge> = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        if !edge_ids.insert(&e.id) {
            return Err(Error::Schema(format!("duplicate edge id '{}'", e.id)));
        }
        let w = match vid.get(e.white.as_str()) {
            Some(&v) if v < wn => v,
            Some(_) => {
                return Err(Error::Bipartite(format!(
                    "edge '{}': endpoint '{}' is a black vertex, expected white",
                    e.id, e.white
                )))
            }
            None => {
                return Err(Error::Bipartite(format!(
                    "edge '{}': unknown white endpoint '{}'",
                    e.id, e.white
                )))
            }
        };
        let b = match vid.get(e.black.as_str()) {
            Some(&v) if v >= wn => v - wn,
            Some(_) => {
                return Err(Error::Bipartite(format!(
                    "edge '{}': endpoint '{}' is a white vertex, expected black",
                    e.id, e.black
                )))
            }
            None => {
                return Err(Error::Bipartite(format!(
                    "edge '{}': unknown black endpoint '{}'",
                    e.id, e.black
                )))
            }
        };
        edges.push(Edge { id: e.id.clone(), white: w, black: b });
    }

    let mut face_ids: BTreeSet<&str> = BTreeSet::new();
    for f in &doc.faces {
        if !face_ids.insert(&f.id) {
            return Err(Error::Schema(format!("duplicate face id '{}'", f.id)));
        }
    }

    // Resolve boundaries to encoded vertex indices and check alternation.
    let mut bnd: Vec<Vec<usize>> = Vec::with_capacity(doc.faces.len());
    for f in &doc.faces {
        let l = f.boundary.len();
        if l == 0 || l % 2 != 0 {
            return Err(Error::FaceBoundary(format!(
                "face '{}': boundary length {} is not a positive even number",
                f.id, l
            )));
        }
        let mut res = Vec::with_capacity(l);
        for (i, name) in f.boundary.iter().enumerate() {
            let &v = vid.get(name.as_str()).ok_or_else(|| {
                Error::FaceBoundary(format!("face '{}': unknown vertex '{}'", f.id, name))
            })?;
            let is_white = v < wn;
            if is_white != (i % 2 == 0) {
                return Err(Error::FaceBoundary(format!(
                    "face '{}': boundary must alternate white, black, ... starting white; \
                     position {} is '{}'",
                    f.id, i, name
                )));
            }
            res.push(v);
        }
        bnd.push(res);
    }

    // Euler characteristic of the closed surface must be 0 (torus).
    let chi = (wn + bn) as i64 - edges.len() as i64 + doc.faces.len() as i64;
    if chi != 0 {
        return Err(Error::Euler {
            chi,
            v: wn + bn,
            e: edges.len(),
            f: doc.faces.len(),
        });
    }

    // Every vertex must lie on some face.
    let mut on_face = vec![false; wn + bn];
    for res in &bnd {
        for &v in res {
            on_face[v] = true;
        }
    }
    if let Some(v) = on_face.iter().position(|c| !c) {
        let name = if v < wn { &doc.white[v] } else { &doc.black[v - wn] };
        return Err(Error::Rotation(format!("vertex '{name}' lies on no face")));
    }

    // Each edge is traversed once in each direction, so the boundaries must
    // contain exactly 2|E| segments in total.
    let total_segs: usize = bnd.iter().map(|r| r.len()).sum();
    if total_segs != 2 * edges.len() {
        return Err(Error::EdgeIncidence(format!(
            "face boundaries contain {} segments, but each of the {} edges must be \
             traversed exactly twice ({} segments)",
            total_segs,
            edges.len(),
            2 * edges.len()
        )));
    }

    // Candidate edges per segment.
    let mut by_pair: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        by_pair.entry((e.white, e.black)).or_default().push(i);
    }
    let mut segs: Vec<Seg> = Vec::with_capacity(total_segs);
    let mut offsets: Vec<usize> = Vec::with_capacity(bnd.len());
    for (fi, res) in bnd.iter().enumerate() {
        let off = segs.len();
        offsets.push(off);
        let l = res.len();
        for pos in 0..l {
            let (a, b) = (res[pos], res[(pos + 1) % l]);
            let (w, bl, dir) = if a < wn { (a, b - wn, 0) } else { (b, a - wn, 1) };
            let cands = by_pair.get(&(w, bl)).cloned().unwrap_or_default();
            if cands.is_empty() {
                return Err(Error::FaceBoundary(format!(
                    "face '{}': no edge joins '{}' and '{}' (boundary position {})",
                    doc.faces[fi].id,
                    doc.white[w],
                    doc.black[bl],
                    pos
                )));
            }
            segs.push(Seg {
                next: off + (pos + 1) % l,
                head: res[(pos + 1) % l],
                dir,
                cands,
            });
        }
    }
    let mut head_count = vec![0usize; wn + bn];
    for s in &segs {
        head_count[s.head] += 1;
    }

    let mut resolver = Resolver {
        segs: &segs,
        slot: vec![[None, None]; edges.len()],
        choice: vec![usize::MAX; segs.len()],
        head_count: &head_count,
        any_complete: false,
    };
    if !resolver.dfs(0) {
        return Err(if resolver.any_complete {
            Error::Rotation(
                "no edge assignment closes the corner walk around every vertex into a \
                 single cycle; the faces do not glue to a torus"
                    .into(),
            )
        } else {
            Error::EdgeIncidence(
                "no assignment traverses every edge exactly once in each direction".into(),
            )
        });
    }
    let choice = resolver.choice;

    // Connectivity of the underlying graph.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); wn + bn];
    for e in &edges {
        adj[e.white].push(wn + e.black);
        adj[wn + e.black].push(e.white);
    }
    let mut seen = vec![false; wn + bn];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Disconnected);
    }

    let faces = doc
        .faces
        .iter()
        .enumerate()
        .map(|(fi, f)| Face {
            id: f.id.clone(),
            boundary: f.boundary.clone(),
            word: (0..f.boundary.len()).map(|p| choice[offsets[fi] + p]).collect(),
        })
        .collect();

    Ok(BraneTiling {
        name: doc.name,
        white: doc.white,
        black: doc.black,
        edges,
        faces,
    })
}
