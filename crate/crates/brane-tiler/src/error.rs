//! Error type shared by the whole crate.
//!
//! Errors carry the name of the violated invariant and enough context to
//! locate it (ids, ranks, counts). [`Error::class`] buckets them for
//! process exit codes.

/// Coarse classification of an [`Error`], used by callers to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input document or arguments are malformed or violate tiling axioms.
    Validation,
    /// A well-posed question whose answer is "no solution" (LP infeasible,
    /// θ not generic).
    Infeasible,
    /// An internal mathematical invariant failed; indicates a bug or an input
    /// outside the theory's hypotheses.
    Invariant,
    /// I/O, JSON serialization, and other environmental failures.
    Other,
}

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The JSON document does not match the tiling schema.
    #[error("schema: {0}")]
    Schema(String),

    /// Edge endpoints do not respect the white/black bipartition.
    #[error("bipartiteness: {0}")]
    Bipartite(String),

    /// A face boundary is empty, has odd length, does not alternate colours,
    /// or names a nonexistent vertex or an absent edge.
    #[error("face boundary: {0}")]
    FaceBoundary(String),

    /// Edge/face incidence cannot be completed: some edge is not traversed
    /// exactly once in each direction by the face boundaries.
    #[error("edge incidence: {0}")]
    EdgeIncidence(String),

    /// The Euler characteristic |V| - |E| + |F| is not zero.
    #[error("euler characteristic: |V| - |E| + |F| = {chi}, expected 0 (|V|={v}, |E|={e}, |F|={f})")]
    Euler {
        /// Computed characteristic.
        chi: i64,
        /// Number of vertices.
        v: usize,
        /// Number of edges.
        e: usize,
        /// Number of faces.
        f: usize,
    },

    /// The tiling graph is not connected.
    #[error("connectivity: the tiling graph is disconnected")]
    Disconnected,

    /// The faces do not glue to a torus: the corner walk around some vertex
    /// does not close into a single cycle under any edge assignment.
    #[error("rotation system: {0}")]
    Rotation(String),

    /// A computed lattice rank differs from the value the theory forces.
    #[error("rank: {0}")]
    Rank(String),

    /// A lattice that must be free has torsion.
    #[error("torsion: {0}")]
    Torsion(String),

    /// Two walks that should share endpoints do not.
    #[error("endpoints: {0}")]
    Endpoints(String),

    /// A linear program or stability question has no admissible solution.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The stability parameter θ vanishes on some nonempty proper vertex
    /// subset, so stable = semistable fails.
    #[error("theta not generic: {0}")]
    NonGenericTheta(String),

    /// θ has the wrong length or nonzero total.
    #[error("theta: {0}")]
    Theta(String),

    /// An arrow subset that must be closed under the potential's cyclic
    /// derivative relations is not.
    #[error("not potential-compatible: {0}")]
    NotWCompatible(String),

    /// An internal cross-check failed.
    #[error("invariant: {0}")]
    Invariant(String),

    /// The request is outside the supported size limits.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Invalid abelian group data (orders, weights, determinant, generation).
    #[error("group action: {0}")]
    Group(String),

    /// Filesystem failure.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failure.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Bucket for exit codes: see [`ErrorClass`].
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            Schema(_) | Bipartite(_) | FaceBoundary(_) | EdgeIncidence(_) | Euler { .. }
            | Disconnected | Rotation(_) | Theta(_) | Group(_) | NotWCompatible(_)
            | Unsupported(_) => ErrorClass::Validation,
            Infeasible(_) | NonGenericTheta(_) => ErrorClass::Infeasible,
            Rank(_) | Torsion(_) | Endpoints(_) | Invariant(_) => ErrorClass::Invariant,
            Io(_) | Json(_) => ErrorClass::Other,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
