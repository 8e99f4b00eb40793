//! Brane tilings for finite abelian subgroups of SL₃(ℂ).
//!
//! A finite abelian group `G = ℤ_{n_1} × ⋯ × ℤ_{n_k}` acting diagonally on
//! ℂ³ with characters ρ₁, ρ₂, ρ₃ (summing to zero, so the action lands in
//! SL₃, and jointly faithful) determines a hexagonal brane tiling on the
//! torus: one white and one black tiling vertex per group element, one edge
//! per McKay-quiver arrow `(v, t): v → v + ρ_t`, and one hexagonal face per
//! group element. [`build_mckay_tiling`] assembles that tiling document,
//! pushes it through the ordinary parsing and validation pipeline, verifies
//! the dual quiver agrees arrow-by-arrow with the group-theoretic
//! prescription, and equips the weight lattice with the monomial basis: the
//! `M` basis is lifted so its three type-count vectors form a basis of the
//! lattice of `G`-invariant monomial exponents, with `x₁x₂x₃` first.

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intlin::{self, Mat};
use crate::lattice::{build_lattices_with_m_lifts, WeightLattice};
use crate::quiver::{dualize, DualQuiver};
use crate::tiling::BraneTiling;

/// Cap on the group order: everything downstream is polynomial, but the
/// weight-lattice normal forms grow cubically and this tool is interactive.
const MAX_ORDER: u64 = 1024;

/// A diagonal action of a finite abelian group on ℂ³.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianAction {
    /// Orders of the cyclic factors, each ≥ 1.
    pub factors: Vec<u64>,
    /// The three coordinate characters; `weights[t][i]` is the ℤ_{n_i}
    /// component of ρ_{t+1}, reduced mod `factors[i]`.
    pub weights: [Vec<u64>; 3],
}

impl AbelianAction {
    /// Validate and normalize an action: weights are reduced, must sum to
    /// zero in the group (an SL₃ action), and must be jointly faithful.
    pub fn new(factors: Vec<u64>, weights: [Vec<u64>; 3]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Group("the group needs at least one cyclic factor".into()));
        }
        if factors.iter().any(|&f| f == 0) {
            return Err(Error::Group("cyclic factor orders must be at least 1".into()));
        }
        let order: u64 = factors.iter().try_fold(1u64, |acc, &f| acc.checked_mul(f)).unwrap_or(u64::MAX);
        if order > MAX_ORDER {
            return Err(Error::Unsupported(format!(
                "group order {order} exceeds the supported maximum {MAX_ORDER}"
            )));
        }
        for w in &weights {
            if w.len() != factors.len() {
                return Err(Error::Group(format!(
                    "each weight needs {} components, got {}",
                    factors.len(),
                    w.len()
                )));
            }
        }
        let weights: [Vec<u64>; 3] = weights
            .map(|w| w.iter().zip(&factors).map(|(&x, &f)| x % f).collect());
        if order > 1 {
            // A trivial coordinate character would put parallel edges
            // between the same tiling vertices (W(x) meets B(x−ρ₂), B(x+ρ₁),
            // B(x), distinct exactly when no weight is the identity); such
            // actions factor through SL₂ and fall outside this construction.
            for (t, w) in weights.iter().enumerate() {
                if w.iter().all(|&x| x == 0) {
                    return Err(Error::Group(format!(
                        "weight {} acts trivially; every coordinate character must be nontrivial",
                        t + 1
                    )));
                }
            }
        }
        let action = AbelianAction { factors, weights };
        for i in 0..action.factors.len() {
            let sum: u64 =
                (0..3).map(|t| action.weights[t][i]).sum::<u64>() % action.factors[i];
            if sum != 0 {
                return Err(Error::Group(
                    "the three weights must sum to zero in the group (an SL3 action)".into(),
                ));
            }
        }
        // Faithful ⟺ the three characters generate the whole dual group.
        let n = action.order() as usize;
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut frontier = vec![0usize];
        let mut count = 1usize;
        while let Some(v) = frontier.pop() {
            for t in 0..3 {
                let u = action.step(v, t);
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    frontier.push(u);
                }
            }
        }
        if count != n {
            return Err(Error::Group(format!(
                "the action is not faithful: the characters generate a subgroup of order {count} < {n}"
            )));
        }
        Ok(action)
    }

    /// A cyclic group ℤ_n with weights `(a, b, c)`.
    pub fn cyclic(n: u64, w: [u64; 3]) -> Result<Self> {
        Self::new(vec![n], [vec![w[0]], vec![w[1]], vec![w[2]]])
    }

    /// The group order.
    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    fn decode(&self, mut v: usize) -> Vec<u64> {
        let mut tuple = vec![0u64; self.factors.len()];
        for i in (0..self.factors.len()).rev() {
            tuple[i] = (v as u64) % self.factors[i];
            v /= self.factors[i] as usize;
        }
        tuple
    }

    fn encode(&self, tuple: &[u64]) -> usize {
        let mut v = 0usize;
        for (i, &f) in self.factors.iter().enumerate() {
            v = v * f as usize + (tuple[i] % f) as usize;
        }
        v
    }

    /// Element `v` plus the type-`t` weight (`t` is 0-based).
    fn step(&self, v: usize, t: usize) -> usize {
        let mut tuple = self.decode(v);
        for (i, x) in tuple.iter_mut().enumerate() {
            *x = (*x + self.weights[t][i]) % self.factors[i];
        }
        self.encode(&tuple)
    }

    /// Element `v` minus the type-`t` weight.
    fn back(&self, v: usize, t: usize) -> usize {
        let mut tuple = self.decode(v);
        for (i, x) in tuple.iter_mut().enumerate() {
            *x = (*x + self.factors[i] - self.weights[t][i]) % self.factors[i];
        }
        self.encode(&tuple)
    }

    /// Group-element label: the residue for a cyclic group, dot-joined
    /// components otherwise ("1.0").
    pub fn label(&self, v: usize) -> String {
        let tuple = self.decode(v);
        tuple.iter().map(u64::to_string).collect::<Vec<_>>().join(".")
    }

    /// A display name like "z6(1,2,3)" or "z2xz2(1.0,0.1,1.1)".
    pub fn name(&self) -> String {
        let group = self
            .factors
            .iter()
            .map(|f| format!("z{f}"))
            .collect::<Vec<_>>()
            .join("x");
        let ws = self
            .weights
            .iter()
            .map(|w| w.iter().map(u64::to_string).collect::<Vec<_>>().join("."))
            .collect::<Vec<_>>()
            .join(",");
        format!("{group}({ws})")
    }
}

/// A brane tiling built from a group action, with the matching quiver,
/// arrow types, and a monomial-aligned weight lattice.
pub struct McKayTiling {
    /// The validated tiling.
    pub tiling: BraneTiling,
    /// Its dual quiver; vertex `v` is the group element `v`.
    pub quiver: DualQuiver,
    /// Arrow types (1, 2, or 3), aligned with the quiver's arrow order.
    pub types: Vec<u8>,
    /// The action that produced everything.
    pub action: AbelianAction,
    /// Weight lattice whose `M` basis corresponds to the monomial basis.
    pub lattice: WeightLattice,
    /// The basis of the invariant-monomial lattice `M₀ ⊂ ℤ³` used for the
    /// `M` lifts; `m0[0] = (1,1,1)`.
    pub m0: [[BigInt; 3]; 3],
}

impl McKayTiling {
    /// Count the matching's edges of each type.
    pub fn typed_character(&self, edges: &[usize]) -> [usize; 3] {
        let mut counts = [0usize; 3];
        for &e in edges {
            counts[(self.types[e] - 1) as usize] += 1;
        }
        counts
    }
}

/// The Hilbert-scheme stability parameter: −(N−1) at the identity vertex,
/// 1 everywhere else.
pub fn hilb_theta(n_vertices: usize) -> Vec<i64> {
    let mut theta = vec![1i64; n_vertices];
    theta[0] = -(n_vertices as i64 - 1);
    theta
}

/// Independent criterion for Hilbert-scheme stability: with the cosupport
/// zeroed, the identity vertex must still reach every quiver vertex.
pub fn origin_reaches_all_oracle(q: &DualQuiver, zeroed: &[usize]) -> bool {
    let mut removed = vec![false; q.n_arrows()];
    for &a in zeroed {
        removed[a] = true;
    }
    let n = q.n_vertices();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, a) in q.arrows.iter().enumerate() {
        if !removed[i] {
            adj[a.source].push(a.target);
        }
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0usize];
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
    count == n
}

/// Build the hexagonal tiling of an abelian SL₃ action and everything
/// hanging off it.
pub fn build_mckay_tiling(action: AbelianAction) -> Result<McKayTiling> {
    let n = action.order() as usize;

    // Arrow ids. Cyclic groups of order ≤ 10 concatenate the endpoint
    // residues ("34" for 3 → 4) when that is collision-free; otherwise ids
    // spell out source, target, and type ("3>4:1").
    let endpoints: Vec<(usize, usize, usize)> = (0..3)
        .flat_map(|t| (0..n).map(move |v| (v, t)))
        .map(|(v, t)| (v, action.step(v, t), t))
        .collect();
    let compact = action.factors.len() == 1 && n <= 10 && {
        let mut pairs: Vec<(usize, usize)> =
            endpoints.iter().map(|&(s, d, _)| (s, d)).collect();
        pairs.sort_unstable();
        pairs.windows(2).all(|w| w[0] != w[1])
    };
    let arrow_id = |s: usize, d: usize, t: usize| -> String {
        if compact {
            format!("{}{}", action.label(s), action.label(d))
        } else {
            format!("{}>{}:{}", action.label(s), action.label(d), t + 1)
        }
    };

    // Tiling vertices: a white and a black term per group element. The
    // white term at x uses arrows (x,1), (x+ρ₁,2), (x+ρ₁+ρ₂,3); the black
    // term at y uses (y,2), (y+ρ₂,1), (y+ρ₂+ρ₁,3). So each arrow (v,t) has
    // a unique white and black endpoint:
    let white_of = |v: usize, t: usize| -> usize {
        match t {
            0 => v,
            1 => action.back(v, 0),
            _ => action.back(action.back(v, 0), 1),
        }
    };
    let black_of = |v: usize, t: usize| -> usize {
        match t {
            0 => action.back(v, 1),
            1 => v,
            _ => action.back(action.back(v, 1), 0),
        }
    };

    let white_ids: Vec<String> = (0..n).map(|v| format!("w{}", action.label(v))).collect();
    let black_ids: Vec<String> = (0..n).map(|v| format!("b{}", action.label(v))).collect();
    let edges: Vec<(String, String, String)> = endpoints
        .iter()
        .map(|&(s, d, t)| {
            (arrow_id(s, d, t), white_ids[white_of(s, t)].clone(), black_ids[black_of(s, t)].clone())
        })
        .collect();

    // One hexagonal face per group element v, walked so that edges
    // alternate into and out of v: types in¹, out³, in², out¹, in³, out².
    let faces: Vec<(String, Vec<String>)> = (0..n)
        .map(|v| {
            let boundary = vec![
                white_ids[action.back(v, 0)].clone(),
                black_ids[action.back(action.back(v, 0), 1)].clone(),
                white_ids[action.back(action.back(v, 0), 1)].clone(),
                black_ids[action.back(v, 1)].clone(),
                white_ids[v].clone(),
                black_ids[v].clone(),
            ];
            (action.label(v), boundary)
        })
        .collect();

    // Everything goes through the standard validation pipeline.
    let tiling =
        BraneTiling::from_parts(&action.name(), white_ids.clone(), black_ids.clone(), edges, faces)?;
    let quiver = dualize(&tiling);

    // Cross-check the dual quiver against the group-theoretic quiver.
    if quiver.n_vertices() != n || quiver.n_arrows() != 3 * n {
        return Err(Error::Invariant(format!(
            "the dual quiver has {} vertices and {} arrows; expected {} and {}",
            quiver.n_vertices(),
            quiver.n_arrows(),
            n,
            3 * n
        )));
    }
    for v in 0..n {
        if quiver.vertices[v] != action.label(v) {
            return Err(Error::Invariant(format!(
                "quiver vertex {v} is '{}', expected the group element '{}'",
                quiver.vertices[v],
                action.label(v)
            )));
        }
    }
    let mut types = vec![0u8; 3 * n];
    for (i, &(s, d, t)) in endpoints.iter().enumerate() {
        let idx = quiver
            .arrow_index(&arrow_id(s, d, t))
            .ok_or_else(|| Error::Invariant(format!("arrow '{}' vanished", arrow_id(s, d, t))))?;
        if idx != i {
            return Err(Error::Invariant("arrow order changed during parsing".into()));
        }
        let arrow = &quiver.arrows[idx];
        if arrow.source != s || arrow.target != d {
            return Err(Error::Invariant(format!(
                "arrow '{}' dualized to {} → {}, expected {} → {}",
                arrow.id, arrow.source, arrow.target, s, d
            )));
        }
        types[idx] = t as u8 + 1;
    }

    // The invariant-monomial lattice M₀ = {m ∈ ℤ³ : Σ_t m_t ρ_t ≡ 0}:
    // project the kernel of [ρ₁ ρ₂ ρ₃ | diag(n_i)] to its first three
    // coordinates.
    let k = action.factors.len();
    let rel = Mat::from_fn(k, 3 + k, |i, j| {
        if j < 3 {
            BigInt::from(action.weights[j][i])
        } else if j - 3 == i {
            BigInt::from(action.factors[i])
        } else {
            BigInt::zero()
        }
    });
    let kernel = intlin::kernel_basis(&rel);
    if kernel.len() != 3 {
        return Err(Error::Invariant(format!(
            "the invariant-monomial lattice has rank {}, expected 3",
            kernel.len()
        )));
    }
    let basis = Mat::from_fn(3, 3, |i, j| kernel[j][i].clone());
    // Change basis so that x₁x₂x₃ = (1,1,1) comes first.
    let ones = vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)];
    let c = intlin::solve(&basis, &ones)
        .ok_or_else(|| Error::Invariant("x₁x₂x₃ is not an invariant monomial".into()))?;
    if !intlin::gcd_vec(&c).is_one() {
        return Err(Error::Invariant("x₁x₂x₃ is not primitive in the monomial lattice".into()));
    }
    let w3 = intlin::unimodular_extension(&c)
        .ok_or_else(|| Error::Invariant("cannot extend x₁x₂x₃ to a monomial basis".into()))?;
    let m0: [[BigInt; 3]; 3] = std::array::from_fn(|j| {
        let col = basis.mul_vec(&w3.col(j));
        [col[0].clone(), col[1].clone(), col[2].clone()]
    });
    if m0[0] != [BigInt::from(1), BigInt::from(1), BigInt::from(1)] {
        return Err(Error::Invariant("the first monomial basis vector must be (1,1,1)".into()));
    }

    // Lift each monomial to an integer arrow chain: boundary zero at every
    // vertex and the prescribed type counts.
    let na = 3 * n;
    let system = Mat::from_fn(n + 3, na, |i, j| {
        if i < n {
            let a = &quiver.arrows[j];
            let mut x = BigInt::zero();
            if a.target == i {
                x += 1;
            }
            if a.source == i {
                x -= 1;
            }
            x
        } else if types[j] as usize == i - n + 1 {
            BigInt::from(1)
        } else {
            BigInt::zero()
        }
    });
    let lifts: [Vec<BigInt>; 3] = {
        let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(3);
        for m in &m0 {
            let mut rhs = vec![BigInt::zero(); n + 3];
            rhs[n..].clone_from_slice(m);
            let x = intlin::solve(&system, &rhs).ok_or_else(|| {
                Error::Invariant(format!(
                    "no closed arrow chain realizes the monomial ({}, {}, {})",
                    m[0], m[1], m[2]
                ))
            })?;
            out.push(x);
        }
        <[Vec<BigInt>; 3]>::try_from(out).expect("three lifts")
    };
    let lattice = build_lattices_with_m_lifts(&quiver, lifts)?;

    Ok(McKayTiling { tiling, quiver, types, action, lattice, m0 })
}
