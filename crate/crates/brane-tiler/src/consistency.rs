//! Consistency certificates via exact R-charges.
//!
//! A tiling is *consistent* when its edges admit R-charges `R_a` with
//! `Σ_{a∋v} R_a = 2` at every tiling vertex, `Σ_{a∈∂F} (1 − R_a) = 2`
//! around every face (boundary edges counted with multiplicity), and every
//! `R_a > 0`. It is *geometric* when additionally every `R_a < 1`. Both
//! are decided exactly: maximize the margin ε with `ε ≤ R_a` (and, for the
//! geometric variant, `ε ≤ 1 − R_a`) and check whether the optimum is
//! positive. The optimum margin and an optimal charge vector are reported
//! as exact rationals.

use num::rational::BigRational;
use num::traits::{Signed, Zero};
use num::BigInt;

use crate::error::{Error, Result};
use crate::lattice::WeightLattice;
use crate::matchings::{is_extremal, PerfectMatching};
use crate::quiver::{DualQuiver, Walk};
use crate::simplex::{maximize, LpOutcome};
use crate::tiling::BraneTiling;

/// How consistent a tiling is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConsistencyClass {
    /// Positive R-charges exist with every charge strictly below 1.
    Geometric,
    /// Positive R-charges exist, but only with some charge reaching 1.
    ConsistentOnly,
    /// No positive R-charge assignment exists.
    Inconsistent,
}

/// An exact R-charge certificate.
#[derive(Debug, Clone)]
pub struct RChargeSolution {
    /// One charge per edge, in edge order.
    pub r: Vec<BigRational>,
    /// The optimal margin: `min R_a` (and `min 1 − R_a` when geometric).
    pub epsilon: BigRational,
    /// The class certified ([`ConsistencyClass::Inconsistent`] never appears
    /// here; that case is an [`Error::Infeasible`]).
    pub class: ConsistencyClass,
}

/// Solve one margin LP. `Ok(None)` means the constraints are infeasible;
/// otherwise the optimal `(r, ε)` is returned (ε may be zero).
fn solve_margin(t: &BraneTiling, geometric: bool) -> Result<Option<(Vec<BigRational>, BigRational)>> {
    let ne = t.edges.len();
    // Variables: R_0..R_{ne−1}, ε, then slacks s_a (for ε ≤ R_a) and
    // t_a (for R_a ≤ 1, or R_a ≤ 1 − ε in the geometric variant).
    let n = 3 * ne + 1;
    let eps_col = ne;
    let zero = BigRational::zero();
    let one = BigRational::from_integer(BigInt::from(1));
    let two = BigRational::from_integer(BigInt::from(2));

    let mut a: Vec<Vec<BigRational>> = Vec::new();
    let mut b: Vec<BigRational> = Vec::new();

    // Σ_{a∋v} R_a = 2 at every vertex of either colour.
    for v in 0..t.white.len() {
        let mut row = vec![zero.clone(); n];
        for (i, e) in t.edges.iter().enumerate() {
            if e.white == v {
                row[i] += &one;
            }
        }
        a.push(row);
        b.push(two.clone());
    }
    for v in 0..t.black.len() {
        let mut row = vec![zero.clone(); n];
        for (i, e) in t.edges.iter().enumerate() {
            if e.black == v {
                row[i] += &one;
            }
        }
        a.push(row);
        b.push(two.clone());
    }

    // Σ_{a∈∂F} (1 − R_a) = 2, boundary edges with multiplicity:
    // Σ R_a = len(F) − 2.
    for f in &t.faces {
        let mut row = vec![zero.clone(); n];
        for pos in 0..f.boundary.len() {
            row[f.word[pos]] += &one;
        }
        a.push(row);
        b.push(BigRational::from_integer(BigInt::from(f.boundary.len() as i64 - 2)));
    }

    // Margins: R_a − ε − s_a = 0 and R_a (+ ε) + t_a = 1.
    for i in 0..ne {
        let mut row = vec![zero.clone(); n];
        row[i] = one.clone();
        row[eps_col] = -one.clone();
        row[ne + 1 + i] = -one.clone();
        a.push(row);
        b.push(zero.clone());

        let mut row = vec![zero.clone(); n];
        row[i] = one.clone();
        if geometric {
            row[eps_col] = one.clone();
        }
        row[2 * ne + 1 + i] = one.clone();
        a.push(row);
        b.push(one.clone());
    }

    let mut c = vec![zero.clone(); n];
    c[eps_col] = one.clone();

    match maximize(&c, &a, &b)? {
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => {
            Err(Error::Invariant("the margin is bounded by 1 yet the LP is unbounded".into()))
        }
        LpOutcome::Optimal { x, value } => {
            let r = x[..ne].to_vec();
            // Any feasible charge vector sums to the number of tiling
            // vertices (add up the vertex equations of one colour).
            let total: BigRational = r.iter().sum();
            let nv = BigRational::from_integer(BigInt::from((t.white.len() + t.black.len()) as i64));
            if total != nv {
                return Err(Error::Invariant(format!(
                    "charges sum to {total}, expected the vertex count {nv}"
                )));
            }
            Ok(Some((r, value)))
        }
    }
}

/// Classify the tiling: geometric, merely consistent, or inconsistent.
pub fn consistency_class(t: &BraneTiling) -> Result<ConsistencyClass> {
    if let Some((_, eps)) = solve_margin(t, true)? {
        if eps.is_positive() {
            return Ok(ConsistencyClass::Geometric);
        }
    }
    if let Some((_, eps)) = solve_margin(t, false)? {
        if eps.is_positive() {
            return Ok(ConsistencyClass::ConsistentOnly);
        }
    }
    Ok(ConsistencyClass::Inconsistent)
}

/// Find an optimal R-charge certificate, or fail with
/// [`Error::Infeasible`] when the tiling is inconsistent.
pub fn find_r_charge(t: &BraneTiling) -> Result<RChargeSolution> {
    if let Some((r, eps)) = solve_margin(t, true)? {
        if eps.is_positive() {
            return Ok(RChargeSolution { r, epsilon: eps, class: ConsistencyClass::Geometric });
        }
    }
    if let Some((r, eps)) = solve_margin(t, false)? {
        if eps.is_positive() {
            return Ok(RChargeSolution {
                r,
                epsilon: eps,
                class: ConsistencyClass::ConsistentOnly,
            });
        }
    }
    Err(Error::Infeasible(
        "no positive R-charge assignment exists; the tiling is inconsistent".into(),
    ))
}

/// Is the strict path `w` minimal, i.e. does some extremal perfect matching
/// pair to zero with its content?
pub fn is_minimal_path(
    q: &DualQuiver,
    l: &WeightLattice,
    ms: &[PerfectMatching],
    w: &Walk,
) -> Result<bool> {
    if !w.is_strict() {
        return Err(Error::Unsupported(
            "minimality is defined for strict paths, not weak walks".into(),
        ));
    }
    let content = w.content(q);
    for m in ms {
        if !is_extremal(q, &m.edges) {
            continue;
        }
        let chi = l.indicator(&m.edges);
        let pairing: BigInt = chi.iter().zip(&content).map(|(a, b)| a * b).sum();
        if pairing.is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ErrorClass;
    use crate::lattice::build_lattices;
    use crate::matchings::enumerate_matchings;
    use crate::quiver::dualize;
    use crate::testdata::{C3, CONIFOLD, F0, NECKLACE, TWOGON};
    use crate::tiling::parse_tiling;

    fn qr(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn c3_is_geometric_with_charge_two_thirds() {
        let t = parse_tiling(C3).unwrap();
        let sol = find_r_charge(&t).unwrap();
        assert_eq!(sol.class, ConsistencyClass::Geometric);
        assert_eq!(sol.epsilon, qr(1, 3));
        assert!(sol.r.iter().all(|r| *r == qr(2, 3)));
        assert_eq!(consistency_class(&t).unwrap(), ConsistencyClass::Geometric);
    }

    #[test]
    fn conifold_and_f0_are_geometric_with_charge_half() {
        for s in [CONIFOLD, F0] {
            let t = parse_tiling(s).unwrap();
            let sol = find_r_charge(&t).unwrap();
            assert_eq!(sol.class, ConsistencyClass::Geometric, "{}", t.name);
            assert_eq!(sol.epsilon, qr(1, 2), "{}", t.name);
            assert!(sol.r.iter().all(|r| *r == qr(1, 2)), "{}", t.name);
        }
    }

    #[test]
    fn necklace_is_consistent_but_not_geometric() {
        // A 2-valent tiling vertex forces both its edges to R = 1: fine for
        // consistency, fatal for the open-margin geometric program. The
        // optimum is asymmetric, so this anchors the face rows edge-by-edge.
        let t = parse_tiling(NECKLACE).unwrap();
        assert_eq!(consistency_class(&t).unwrap(), ConsistencyClass::ConsistentOnly);
        let sol = find_r_charge(&t).unwrap();
        assert_eq!(sol.class, ConsistencyClass::ConsistentOnly);
        assert_eq!(sol.epsilon, qr(1, 2));
        let expect = [qr(1, 2), qr(1, 2), qr(1, 1), qr(1, 1), qr(1, 1)];
        assert_eq!(sol.r, expect);
    }

    #[test]
    fn twogon_is_inconsistent() {
        let t = parse_tiling(TWOGON).unwrap();
        assert_eq!(consistency_class(&t).unwrap(), ConsistencyClass::Inconsistent);
        let err = find_r_charge(&t).unwrap_err();
        assert_eq!(err.class(), ErrorClass::Infeasible);
    }

    #[test]
    fn minimality_of_c3_paths() {
        let t = parse_tiling(C3).unwrap();
        let q = dualize(&t);
        let l = build_lattices(&q).unwrap();
        let ms = enumerate_matchings(&t);
        let x = q.arrow_index("x").unwrap();
        let y = q.arrow_index("y").unwrap();
        let z = q.arrow_index("z").unwrap();
        // A single arrow misses the other two matchings: minimal.
        let w1 = Walk::path(&q, &[x]).unwrap();
        assert!(is_minimal_path(&q, &l, &ms, &w1).unwrap());
        // x·y·z meets every matching: not minimal (it is an F-term loop).
        let w3 = Walk::path(&q, &[x, y, z]).unwrap();
        assert!(!is_minimal_path(&q, &l, &ms, &w3).unwrap());
        // Weak walks are rejected.
        let weak = Walk::weak(&q, 0, &[(x, true), (x, false)]).unwrap();
        assert!(is_minimal_path(&q, &l, &ms, &weak).is_err());
    }
}
