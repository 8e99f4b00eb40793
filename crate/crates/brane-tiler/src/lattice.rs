//! Weight lattices of the dual quiver.
//!
//! Let `Q` be the dual quiver of a tiling, with arrow set `Q₁` and potential
//! faces `Q₂` (positive then negative). The constructions here are:
//!
//! - `K ⊂ ℤ^{Q₁}`: the subgroup generated by the differences
//!   `d₂(F) − d₂(F₀)` of face contents, `F₀` being the first face. The
//!   *weight lattice* is `Λ = ℤ^{Q₁}/K`; it must be free of rank
//!   `|Q₀| + 2`, and the weight map `wt : ℤ^{Q₁} → Λ` is the quotient.
//!   Every face has the same weight `ω̄ = wt(d₂(F₀))`.
//! - `d : Λ → ℤ^{Q₀}`, induced by sending an arrow to (target − source).
//!   Its image must be exactly `B = {θ : Σθ = 0}`, of rank `|Q₀| − 1`.
//! - `M = ker d ⊂ Λ`, free of rank 3, containing `ω̄`.
//!
//! The module picks a basis `m₁, m₂, m₃` of `M` with `m₁ = ω̄` (possible
//! because `ω̄` is primitive in `M`), fixed deterministically by the
//! elimination pivot rule. Pairing a perfect matching's indicator vector
//! with lifts of the `mⱼ` gives its *reduced character*
//! `χ̄ = (⟨χ, m₁⟩, ⟨χ, m₂⟩, ⟨χ, m₃⟩)`; the first entry is 1 for every
//! perfect matching, and the last two are the matching's point in the toric
//! diagram.
//!
//! All data is exact (`BigInt`), and every basis is reproducible run to run.

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intlin::{self, Mat};
use crate::quiver::{DualQuiver, Walk};

/// The weight lattice `Λ`, the degree map to `B`, and the kernel `M` with
/// its distinguished basis. Built by [`build_lattices`].
pub struct WeightLattice {
    n_arrows: usize,
    n_vertices: usize,
    rank_lambda: usize,
    r_k: usize,
    /// Row transform of the face-difference matrix: `wt(x) = (u·x)[r_k..]`.
    u: Mat,
    /// Its inverse: `lift(λ) = u⁻¹ · (0 ‖ λ)`.
    u_inv: Mat,
    /// The degree map `d` in the Λ basis: `|Q₀| × rank_lambda`.
    d_map: Mat,
    /// The chosen `M` basis in Λ coordinates; `m_lambda[0] = ω̄`.
    m_lambda: [Vec<BigInt>; 3],
    /// Lifts of the `M` basis to `ℤ^{Q₁}`.
    m_lift: [Vec<BigInt>; 3],
    /// `ω̄ = wt(d₂(F₀))` in Λ coordinates.
    omega: Vec<BigInt>,
}

/// Build `Λ`, `B`, `M` and the canonical `M` basis from a quiver.
pub fn build_lattices(q: &DualQuiver) -> Result<WeightLattice> {
    let core = build_core(q)?;
    // ω̄ is primitive in M, so it extends to a basis: write ω̄ in the
    // canonical kernel basis, then complete the coordinate vector to a
    // unimodular 3×3 matrix.
    let c = intlin::solve(&core.kernel, &core.omega).ok_or_else(|| {
        Error::Invariant("ω̄ does not lie in the kernel lattice M".into())
    })?;
    if !intlin::gcd_vec(&c).is_one() {
        return Err(Error::Invariant(format!(
            "ω̄ is not primitive in M (kernel coordinates {:?})",
            c.iter().map(|x| x.to_string()).collect::<Vec<_>>()
        )));
    }
    let w = intlin::unimodular_extension(&c)
        .ok_or_else(|| Error::Invariant("cannot extend ω̄ to a basis of M".into()))?;
    let m_lambda: [Vec<BigInt>; 3] =
        std::array::from_fn(|j| core.kernel.mul_vec(&w.col(j)));
    debug_assert_eq!(m_lambda[0], core.omega);
    let m_lift: [Vec<BigInt>; 3] = std::array::from_fn(|j| core.lift(&m_lambda[j]));
    Ok(core.finish(m_lambda, m_lift))
}

/// Build the lattices but use caller-provided lifts for the `M` basis
/// (e.g. a basis coming from group characters). Verifies that the lifts are
/// genuinely a basis of `M` and that the first one represents `ω̄`.
pub fn build_lattices_with_m_lifts(
    q: &DualQuiver,
    lifts: [Vec<BigInt>; 3],
) -> Result<WeightLattice> {
    let core = build_core(q)?;
    for (j, lift) in lifts.iter().enumerate() {
        if lift.len() != core.n_arrows {
            return Err(Error::Invariant(format!(
                "m{} lift has length {}, expected |Q₁| = {}",
                j + 1,
                lift.len(),
                core.n_arrows
            )));
        }
        let deg = degree_of_content(q, lift);
        if deg.iter().any(|x| !x.is_zero()) {
            return Err(Error::Invariant(format!(
                "m{} lift does not lie in ker d: degree {:?}",
                j + 1,
                deg.iter().map(|x| x.to_string()).collect::<Vec<_>>()
            )));
        }
    }
    let m_lambda: [Vec<BigInt>; 3] = std::array::from_fn(|j| core.weight(&lifts[j]));
    if m_lambda[0] != core.omega {
        return Err(Error::Invariant(
            "provided m₁ lift is not a representative of ω̄".into(),
        ));
    }
    // The three weights must span M: their coordinates in the canonical
    // kernel basis must form a unimodular 3×3 matrix.
    let mut coords = Vec::with_capacity(3);
    for (j, ml) in m_lambda.iter().enumerate() {
        let c = intlin::solve(&core.kernel, ml).ok_or_else(|| {
            Error::Invariant(format!("m{} does not lie in M", j + 1))
        })?;
        coords.push(c);
    }
    let change = Mat::from_cols(3, &coords);
    if !intlin::det3(&change).abs().is_one() {
        return Err(Error::Invariant(format!(
            "provided m basis does not span M: change of basis has determinant {}",
            intlin::det3(&change)
        )));
    }
    Ok(core.finish(m_lambda, lifts))
}

/// `d₁` applied to an arbitrary content vector: Σ xₐ (e_{t(a)} − e_{s(a)}).
fn degree_of_content(q: &DualQuiver, x: &[BigInt]) -> Vec<BigInt> {
    let mut deg = vec![BigInt::zero(); q.n_vertices()];
    for (a, arr) in q.arrows.iter().enumerate() {
        if x[a].is_zero() {
            continue;
        }
        deg[arr.target] += &x[a];
        deg[arr.source] -= &x[a];
    }
    deg
}

/// Shared first half of the two builders.
struct Core {
    n_arrows: usize,
    n_vertices: usize,
    rank_lambda: usize,
    r_k: usize,
    u: Mat,
    u_inv: Mat,
    d_map: Mat,
    kernel: Mat,
    omega: Vec<BigInt>,
}

impl Core {
    fn weight(&self, x: &[BigInt]) -> Vec<BigInt> {
        let ux = self.u.mul_vec(x);
        ux[self.r_k..].to_vec()
    }

    fn lift(&self, lambda: &[BigInt]) -> Vec<BigInt> {
        let mut padded = vec![BigInt::zero(); self.n_arrows];
        padded[self.r_k..].clone_from_slice(lambda);
        self.u_inv.mul_vec(&padded)
    }

    fn finish(self, m_lambda: [Vec<BigInt>; 3], m_lift: [Vec<BigInt>; 3]) -> WeightLattice {
        WeightLattice {
            n_arrows: self.n_arrows,
            n_vertices: self.n_vertices,
            rank_lambda: self.rank_lambda,
            r_k: self.r_k,
            u: self.u,
            u_inv: self.u_inv,
            d_map: self.d_map,
            m_lambda,
            m_lift,
            omega: self.omega,
        }
    }
}

fn build_core(q: &DualQuiver) -> Result<Core> {
    let na = q.n_arrows();
    let n0 = q.n_vertices();
    let faces: Vec<_> = q.faces().collect();
    let nf = faces.len();

    // Face contents and the subgroup K of their differences.
    let contents: Vec<Vec<BigInt>> = faces.iter().map(|f| q.content(&f.cycle)).collect();
    let g_k = Mat::from_fn(na, nf - 1, |i, j| &contents[j + 1][i] - &contents[0][i]);
    let dg = intlin::diagonalize(&g_k);
    for i in 0..dg.rank {
        if !dg.d.at(i, i).is_one() {
            return Err(Error::Torsion(format!(
                "Λ = ℤ^Q₁/K has torsion: face-difference diagonal entry {} is {}",
                i,
                dg.d.at(i, i)
            )));
        }
    }
    let r_k = dg.rank;
    let rank_lambda = na - r_k;
    if rank_lambda != n0 + 2 {
        return Err(Error::Rank(format!(
            "rank Λ = |Q₁| − rank K = {na} − {r_k} = {rank_lambda}, expected |Q₀| + 2 = {}",
            n0 + 2
        )));
    }

    let core_partial = Core {
        n_arrows: na,
        n_vertices: n0,
        rank_lambda,
        r_k,
        u: dg.u,
        u_inv: dg.u_inv,
        d_map: Mat::zeros(0, 0),
        kernel: Mat::zeros(0, 0),
        omega: Vec::new(),
    };

    // The degree map in the Λ basis: d(eⱼ) = d₁(lift(eⱼ)).
    let mut d_cols = Vec::with_capacity(rank_lambda);
    for j in 0..rank_lambda {
        let mut e = vec![BigInt::zero(); rank_lambda];
        e[j] = BigInt::one();
        d_cols.push(degree_of_content(q, &core_partial.lift(&e)));
    }
    let d_map = Mat::from_cols(n0, &d_cols);

    // Image must be exactly B = {θ : Σθ = 0}: rank |Q₀| − 1 and saturated.
    let ddg = intlin::diagonalize(&d_map);
    if ddg.rank != n0 - 1 {
        return Err(Error::Rank(format!(
            "rank of the degree map is {}, expected |Q₀| − 1 = {}",
            ddg.rank,
            n0 - 1
        )));
    }
    for i in 0..ddg.rank {
        if !ddg.d.at(i, i).is_one() {
            return Err(Error::Rank(format!(
                "image of the degree map is not all of B: diagonal entry {} is {}",
                i,
                ddg.d.at(i, i)
            )));
        }
    }

    let kernel_cols = intlin::kernel_basis(&d_map);
    if kernel_cols.len() != 3 {
        return Err(Error::Rank(format!(
            "rank M = {} (kernel of the degree map), expected 3",
            kernel_cols.len()
        )));
    }
    let kernel = Mat::from_cols(rank_lambda, &kernel_cols);

    let omega = core_partial.weight(&contents[0]);
    // Every face has the same weight; cheap global cross-check.
    for (fi, c) in contents.iter().enumerate() {
        if core_partial.weight(c) != omega {
            return Err(Error::Invariant(format!(
                "face '{}' has a different weight from F₀",
                faces[fi].id
            )));
        }
    }

    Ok(Core { d_map, kernel, omega, ..core_partial })
}

impl WeightLattice {
    /// Rank of `Λ` (= `|Q₀)| + 2`).
    pub fn rank_lambda(&self) -> usize {
        self.rank_lambda
    }

    /// Rank of `M` (always 3).
    pub fn rank_m(&self) -> usize {
        3
    }

    /// Rank of `B` (= `|Q₀| − 1`).
    pub fn rank_b(&self) -> usize {
        self.n_vertices - 1
    }

    /// Weight of a content vector: its class in `Λ ≅ ℤ^{rank Λ}`.
    pub fn weight(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.n_arrows, "content length must be |Q₁|");
        let ux = self.u.mul_vec(x);
        ux[self.r_k..].to_vec()
    }

    /// A representative in `ℤ^{Q₁}` of a Λ class.
    pub fn lift(&self, lambda: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(lambda.len(), self.rank_lambda, "class length must be rank Λ");
        let mut padded = vec![BigInt::zero(); self.n_arrows];
        padded[self.r_k..].clone_from_slice(lambda);
        self.u_inv.mul_vec(&padded)
    }

    /// The degree `d(λ) ∈ B ⊂ ℤ^{Q₀}` of a Λ class.
    pub fn degree(&self, lambda: &[BigInt]) -> Vec<BigInt> {
        self.d_map.mul_vec(lambda)
    }

    /// `ω̄`, the common weight of all potential faces, in Λ coordinates.
    pub fn omega_bar(&self) -> &[BigInt] {
        &self.omega
    }

    /// The `M` basis element `mⱼ` (j = 0, 1, 2; `m₀ = ω̄`) in Λ coordinates.
    pub fn m_lambda(&self, j: usize) -> &[BigInt] {
        &self.m_lambda[j]
    }

    /// A lift of `mⱼ` to `ℤ^{Q₁}`.
    pub fn m_lift(&self, j: usize) -> &[BigInt] {
        &self.m_lift[j]
    }

    /// Indicator vector of an edge/arrow subset.
    pub fn indicator(&self, arrows: &[usize]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.n_arrows];
        for &a in arrows {
            v[a] += BigInt::one();
        }
        v
    }

    /// The functional `Λ → ℤ` induced by pairing with an arrow subset's
    /// indicator vector, as coordinates in the Λ basis. Errors if the
    /// indicator does not kill `K` (then no functional is induced).
    pub fn functional(&self, arrows: &[usize]) -> Result<Vec<BigInt>> {
        let chi = self.indicator(arrows);
        // After the change of basis u, K is spanned by the first r_k columns
        // of u⁻¹ (their diagonal entries are 1 — torsion was ruled out), so
        // χ induces a functional on Λ iff it kills exactly those columns.
        for i in 0..self.r_k {
            if !dot(&chi, &self.u_inv.col(i)).is_zero() {
                return Err(Error::NotWCompatible(
                    "arrow subset does not induce a functional on Λ: its indicator \
                     vector is not orthogonal to K"
                        .into(),
                ));
            }
        }
        Ok((0..self.rank_lambda)
            .map(|j| dot(&chi, &self.u_inv.col(self.r_k + j)))
            .collect())
    }

    /// Reduced character of an arrow subset: `(⟨χ, m₁⟩, ⟨χ, m₂⟩, ⟨χ, m₃⟩)`
    /// paired via the stored lifts.
    pub fn reduced_character(&self, arrows: &[usize]) -> [BigInt; 3] {
        let chi = self.indicator(arrows);
        std::array::from_fn(|j| dot(&chi, &self.m_lift[j]))
    }

    /// The toric-diagram point of a perfect matching: the last two entries
    /// of its reduced character. Errors if the first entry is not 1.
    pub fn diagram_point(&self, arrows: &[usize]) -> Result<(BigInt, BigInt)> {
        let [c1, c2, c3] = self.reduced_character(arrows);
        if !c1.is_one() {
            return Err(Error::Invariant(format!(
                "⟨χ, ω̄⟩ = {c1} for a perfect matching, expected 1"
            )));
        }
        Ok((c2, c3))
    }

    /// Do two walks with equal endpoints have the same weight?
    pub fn weights_equal(&self, q: &DualQuiver, a: &Walk, b: &Walk) -> Result<bool> {
        if a.start != b.start || a.end(q) != b.end(q) {
            return Err(Error::Endpoints(format!(
                "walks have different endpoints: {} → {} vs {} → {}",
                q.vertices[a.start],
                q.vertices[a.end(q)],
                q.vertices[b.start],
                q.vertices[b.end(q)]
            )));
        }
        let ca = a.content(q);
        let cb = b.content(q);
        let diff: Vec<BigInt> = ca.iter().zip(&cb).map(|(x, y)| x - y).collect();
        Ok(self.weight(&diff).iter().all(|x| x.is_zero()))
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
