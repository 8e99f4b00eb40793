//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Dense matrices, a transform-tracking diagonalization (Smith-style
//! elimination by unimodular row and column operations), integer kernels,
//! exact linear solves, and unimodular basis extension. These primitives
//! back every lattice computation in the crate.
//!
//! # Determinism
//!
//! Elimination always picks the pivot minimizing `(|value|, row, column)`
//! among nonzero candidates in the active submatrix, so the produced
//! transforms — and therefore every basis derived from them — are the same
//! on every run and every platform.

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};

/// Dense row-major matrix over [`BigInt`].
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    m: usize,
    n: usize,
    a: Vec<BigInt>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.m, self.n)?;
        for i in 0..self.m {
            write!(f, "  [")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Mat {
    /// The `m` × `n` zero matrix.
    pub fn zeros(m: usize, n: usize) -> Self {
        Mat { m, n, a: vec![BigInt::zero(); m * n] }
    }

    /// The `n` × `n` identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut r = Self::zeros(n, n);
        for i in 0..n {
            r.set(i, i, BigInt::one());
        }
        r
    }

    /// Build an `m` × `n` matrix from an entry function.
    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut r = Self::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                r.set(i, j, f(i, j));
            }
        }
        r
    }

    /// Build a matrix whose columns are the given vectors (all of length `m`).
    pub fn from_cols(m: usize, cols: &[Vec<BigInt>]) -> Self {
        for c in cols {
            assert_eq!(c.len(), m, "column length mismatch");
        }
        Self::from_fn(m, cols.len(), |i, j| cols[j][i].clone())
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.m
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.n
    }

    /// Entry at `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.a[i * self.n + j]
    }

    /// Set entry `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.a[i * self.n + j] = v;
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    /// Column `j` as an owned vector.
    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.m).map(|i| self.at(i, j).clone()).collect()
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.m, "dimension mismatch in mul");
        let mut r = Mat::zeros(self.m, rhs.n);
        for i in 0..self.m {
            for k in 0..self.n {
                let aik = self.at(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..rhs.n {
                    let v = r.at(i, j) + aik * rhs.at(k, j);
                    r.set(i, j, v);
                }
            }
        }
        r
    }

    /// Matrix–vector product `self · v`.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.n, v.len(), "dimension mismatch in mul_vec");
        (0..self.m)
            .map(|i| self.row(i).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// Transposed copy.
    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.n, self.m, |i, j| self.at(j, i).clone())
    }

    /// Stack two matrices with equal column counts vertically.
    pub fn stack_rows(top: &Mat, bottom: &Mat) -> Mat {
        assert_eq!(top.n, bottom.n, "column mismatch in stack_rows");
        Mat::from_fn(top.m + bottom.m, top.n, |i, j| {
            if i < top.m {
                top.at(i, j).clone()
            } else {
                bottom.at(i - top.m, j).clone()
            }
        })
    }

    /// True if every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.n {
            self.a.swap(i * self.n + j, k * self.n + j);
        }
    }

    fn swap_cols(&mut self, j: usize, l: usize) {
        if j == l {
            return;
        }
        for i in 0..self.m {
            self.a.swap(i * self.n + j, i * self.n + l);
        }
    }

    /// row_i += k · row_src
    fn row_add(&mut self, i: usize, src: usize, k: &BigInt) {
        debug_assert_ne!(i, src);
        for j in 0..self.n {
            let v = self.at(i, j) + k * self.at(src, j);
            self.set(i, j, v);
        }
    }

    /// col_j += k · col_src
    fn col_add(&mut self, j: usize, src: usize, k: &BigInt) {
        debug_assert_ne!(j, src);
        for i in 0..self.m {
            let v = self.at(i, j) + k * self.at(i, src);
            self.set(i, j, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.n {
            let v = -self.at(i, j).clone();
            self.set(i, j, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.m {
            let v = -self.at(i, j).clone();
            self.set(i, j, v);
        }
    }
}

/// Result of [`diagonalize`]: unimodular `u`, `v` with `u · a · v = d`
/// diagonal, plus `u⁻¹` and the rank.
///
/// `d` is diagonal with nonnegative entries; the divisibility chain of the
/// classical Smith normal form is *not* enforced, because nothing downstream
/// needs it: freeness of a cokernel is equivalent to every nonzero diagonal
/// entry being 1, and kernels/solves only need the diagonal shape.
pub struct Diagonalization {
    /// Diagonal matrix, same shape as the input.
    pub d: Mat,
    /// Unimodular row transform.
    pub u: Mat,
    /// Inverse of `u`.
    pub u_inv: Mat,
    /// Unimodular column transform.
    pub v: Mat,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

/// Diagonalize `a` by unimodular row/column operations, tracking transforms.
///
/// Returns `(d, u, u_inv, v, rank)` with `u · a · v = d`, `d` diagonal with
/// nonnegative entries, and `rank` the number of nonzero diagonal entries.
pub fn diagonalize(a: &Mat) -> Diagonalization {
    let (m, n) = (a.nrows(), a.ncols());
    let mut d = a.clone();
    let mut u = Mat::identity(m);
    let mut u_inv = Mat::identity(m);
    let mut v = Mat::identity(n);
    let mut r = 0usize;

    // Pivot = nonzero entry of the active submatrix minimizing (|value|, i, j).
    let pick = |d: &Mat, r: usize| -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in r..m {
            for j in r..n {
                let x = d.at(i, j);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                let better = match &best {
                    None => true,
                    Some((b, _, _)) => ax < *b,
                };
                if better {
                    best = Some((ax, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    };

    while r < m.min(n) {
        let Some((pi, pj)) = pick(&d, r) else { break };
        // Move the pivot to (r, r). Row swap E: u ← E·u, u⁻¹ ← u⁻¹·E⁻¹
        // (swap is its own inverse, acting on columns of u⁻¹).
        d.swap_rows(r, pi);
        u.swap_rows(r, pi);
        u_inv.swap_cols(r, pi);
        d.swap_cols(r, pj);
        v.swap_cols(r, pj);

        // Reduce column r then row r by the pivot; truncated quotients leave
        // remainders strictly smaller than the pivot, so re-picking the
        // global minimum terminates.
        let p = d.at(r, r).clone();
        for i in r + 1..m {
            if d.at(i, r).is_zero() {
                continue;
            }
            let q = d.at(i, r) / &p;
            if !q.is_zero() {
                let k = -q;
                d.row_add(i, r, &k);
                u.row_add(i, r, &k);
                // (E with E[i][r] = k)⁻¹ has [i][r] = -k: u⁻¹ col_r += -k · col_i...
                // right-multiplying u⁻¹ by E⁻¹ adds (-k) · col_i to col_r.
                u_inv.col_add(r, i, &-&k);
            }
        }
        for j in r + 1..n {
            if d.at(r, j).is_zero() {
                continue;
            }
            let q = d.at(r, j) / &p;
            if !q.is_zero() {
                let k = -q;
                d.col_add(j, r, &k);
                v.col_add(j, r, &k);
            }
        }

        let clean = (r + 1..m).all(|i| d.at(i, r).is_zero())
            && (r + 1..n).all(|j| d.at(r, j).is_zero());
        if clean {
            r += 1;
        }
        // else: loop again; the new global minimum is strictly smaller.
    }

    // Normalize the diagonal to be nonnegative.
    for i in 0..m.min(n) {
        if d.at(i, i).is_negative() {
            d.negate_row(i);
            u.negate_row(i);
            u_inv.negate_col(i);
        }
    }

    let rank = (0..m.min(n)).filter(|&i| !d.at(i, i).is_zero()).count();
    debug_assert!(u.mul(a).mul(&v) == d, "diagonalize: u·a·v != d");
    debug_assert!(u.mul(&u_inv) == Mat::identity(m), "diagonalize: u·u_inv != I");
    Diagonalization { d, u, u_inv, v, rank }
}

/// Rank of `a` over the rationals (= over ℤ after diagonalization).
pub fn rank(a: &Mat) -> usize {
    diagonalize(a).rank
}

/// A basis of the integer kernel `{x : a·x = 0}`, as column vectors.
///
/// The basis is canonical given the deterministic pivot rule: it consists of
/// the trailing columns of the column transform `v`.
pub fn kernel_basis(a: &Mat) -> Vec<Vec<BigInt>> {
    let dg = diagonalize(a);
    (dg.rank..a.ncols()).map(|j| dg.v.col(j)).collect()
}

/// One integer solution of `a·x = b`, or `None` if no integral solution
/// exists. Free coordinates are set to zero (deterministically).
pub fn solve(a: &Mat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.nrows(), b.len(), "dimension mismatch in solve");
    let dg = diagonalize(a);
    let ub = dg.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.ncols()];
    for i in 0..a.nrows() {
        if i < dg.rank {
            let di = dg.d.at(i, i);
            let (q, rem) = num::Integer::div_rem(&ub[i], di);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ub[i].is_zero() {
            return None;
        }
    }
    Some(dg.v.mul_vec(&y))
}

/// Extend a primitive integer vector `c` to a unimodular matrix whose first
/// column is `c`. Returns `None` when `c` is zero or not primitive.
pub fn unimodular_extension(c: &[BigInt]) -> Option<Mat> {
    let n = c.len();
    let col = Mat::from_cols(n, &[c.to_vec()]);
    let dg = diagonalize(&col);
    if dg.rank != 1 || !dg.d.at(0, 0).is_one() {
        return None;
    }
    // u · c · v = e₁ with v = (±1); c = u⁻¹ · v⁻¹ · e₁ = ±(first column of u⁻¹).
    let mut w = dg.u_inv;
    if &w.col(0) != c {
        w.negate_col(0);
    }
    debug_assert_eq!(w.col(0), c.to_vec());
    Some(w)
}

/// Determinant of a 3×3 matrix.
pub fn det3(m: &Mat) -> BigInt {
    assert!(m.nrows() == 3 && m.ncols() == 3, "det3 needs a 3x3 matrix");
    let a = |i: usize, j: usize| m.at(i, j);
    a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
        - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
}

/// Nonnegative gcd of a vector (0 for the empty or zero vector).
pub fn gcd_vec(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| num::Integer::gcd(&g, x))
}
