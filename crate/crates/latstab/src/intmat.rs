//! Integer matrices: Smith normal form with tracked unimodular transforms,
//! row-style Hermite normal form, and integer kernels. These carry all of
//! the saturation, quotient and decomposition bookkeeping.

use num_traits::{One, Signed, Zero};

use crate::error::{LatError, Result};
use crate::matrix::RatMatrix;
use crate::rat::{Int, Rat};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Int>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(LatError::Dimension(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Int::one();
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Int::from(x)))
            .collect();
        IntMatrix { rows: r, cols: c, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LatError::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Int {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Int {
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Int> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    /// Rows `lo..hi` as a new matrix.
    pub fn submatrix_rows(&self, lo: usize, hi: usize) -> IntMatrix {
        let rows: Vec<Vec<Int>> = (lo..hi).map(|i| self.row(i).to_vec()).collect();
        if rows.is_empty() {
            IntMatrix::zeros(0, self.cols)
        } else {
            IntMatrix::from_rows(rows).expect("rectangular")
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(LatError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn to_rat(&self) -> RatMatrix {
        let entries = self
            .entries
            .iter()
            .map(|x| Rat::from_integer(x.clone()))
            .collect();
        RatMatrix::new(self.rows, self.cols, entries).expect("shape preserved")
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i -= q * row_j
    fn row_sub(&mut self, i: usize, j: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let t = self.at(j, c) * q;
            *self.at_mut(i, c) -= t;
        }
    }

    /// col_i -= q * col_j
    fn col_sub(&mut self, i: usize, j: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let t = self.at(r, j) * q;
            *self.at_mut(r, i) -= t;
        }
    }

    /// row_i += q * row_j
    fn row_add(&mut self, i: usize, j: usize, q: &Int) {
        self.row_sub(i, j, &-q.clone());
    }

    fn neg_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let t = -self.at(i, c).clone();
            *self.at_mut(i, c) = t;
        }
    }

    fn neg_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let t = -self.at(r, c).clone();
            *self.at_mut(r, c) = t;
        }
    }
}

impl std::fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `m = u * s * v` with `u`, `v` unimodular and `s` diagonal, nonnegative,
/// each entry dividing the next. The inverses are tracked during reduction
/// so kernel and saturation computations stay in integer arithmetic.
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<Int> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.at(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

struct SnfState {
    s: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfState {
    // Each elementary operation on `s` is paired with the inverse operation
    // on `u` (resp. `v`) so that m = u * s * v is preserved throughout.
    fn row_swap(&mut self, i: usize, j: usize) {
        self.s.swap_rows(i, j);
        self.u.swap_cols(i, j);
        self.u_inv.swap_rows(i, j);
    }

    fn row_sub(&mut self, i: usize, j: usize, q: &Int) {
        self.s.row_sub(i, j, q);
        let negq = -q.clone();
        self.u.col_sub(j, i, &negq);
        self.u_inv.row_sub(i, j, q);
    }

    fn row_neg(&mut self, i: usize) {
        self.s.neg_row(i);
        self.u.neg_col(i);
        self.u_inv.neg_row(i);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.s.swap_cols(i, j);
        self.v.swap_rows(i, j);
        self.v_inv.swap_cols(i, j);
    }

    fn col_sub(&mut self, i: usize, j: usize, q: &Int) {
        self.s.col_sub(i, j, q);
        let negq = -q.clone();
        self.v.row_sub(j, i, &negq);
        self.v_inv.col_sub(i, j, q);
    }
}

/// Nearest-integer quotient, which keeps remainders at most half the divisor.
fn round_div(a: &Int, b: &Int) -> Int {
    let r = Rat::new(a.clone(), b.clone());
    crate::rat::round_nearest(&r)
}

pub fn smith_decomposition(m: &IntMatrix) -> SmithDecomposition {
    let (r, c) = (m.rows(), m.cols());
    let mut st = SnfState {
        s: m.clone(),
        u: IntMatrix::identity(r),
        u_inv: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
        v_inv: IntMatrix::identity(c),
    };
    let mut t = 0;
    while t < r.min(c) {
        // smallest-magnitude nonzero entry of the trailing block
        let pivot = (t..r)
            .flat_map(|i| (t..c).map(move |j| (i, j)))
            .filter(|&(i, j)| !st.s.at(i, j).is_zero())
            .min_by_key(|&(i, j)| st.s.at(i, j).abs());
        let (pi, pj) = match pivot {
            Some(p) => p,
            None => break,
        };
        st.row_swap(t, pi);
        st.col_swap(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..r {
                if !st.s.at(i, t).is_zero() {
                    let q = round_div(st.s.at(i, t), st.s.at(t, t));
                    st.row_sub(i, t, &q);
                    if !st.s.at(i, t).is_zero() {
                        st.row_swap(t, i); // strictly smaller pivot
                        clean = false;
                    }
                }
            }
            for j in t + 1..c {
                if !st.s.at(t, j).is_zero() {
                    let q = round_div(st.s.at(t, j), st.s.at(t, t));
                    st.col_sub(j, t, &q);
                    if !st.s.at(t, j).is_zero() {
                        st.col_swap(t, j);
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the trailing block by the pivot
            let bad = (t + 1..r)
                .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                .find(|&(i, j)| !(st.s.at(i, j) % st.s.at(t, t)).is_zero());
            match bad {
                Some((i, _)) => {
                    let one = Int::one();
                    st.s.row_add(t, i, &one);
                    st.u.col_sub(i, t, &one);
                    st.u_inv.row_add(t, i, &one);
                }
                None => break,
            }
        }
        if st.s.at(t, t).is_negative() {
            st.row_neg(t);
        }
        t += 1;
    }
    SmithDecomposition {
        u: st.u,
        s: st.s,
        v: st.v,
        u_inv: st.u_inv,
        v_inv: st.v_inv,
    }
}

/// Canonical row-style Hermite normal form: pivots positive, entries above a
/// pivot reduced into `[0, pivot)`, zero rows dropped. Two generating sets
/// span the same sublattice of Z^n exactly when their forms agree.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let (r, c) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut pivot_row = 0;
    for col in 0..c {
        if pivot_row == r {
            break;
        }
        loop {
            let nz: Vec<usize> = (pivot_row..r).filter(|&i| !h.at(i, col).is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz
                .iter()
                .min_by_key(|&&i| h.at(i, col).abs())
                .expect("nonempty");
            h.swap_rows(pivot_row, best);
            let mut again = false;
            for i in pivot_row + 1..r {
                if !h.at(i, col).is_zero() {
                    let q = round_div(h.at(i, col), h.at(pivot_row, col));
                    h.row_sub(i, pivot_row, &q);
                    if !h.at(i, col).is_zero() {
                        again = true;
                    }
                }
            }
            if !again {
                break;
            }
        }
        if h.at(pivot_row, col).is_zero() {
            continue;
        }
        if h.at(pivot_row, col).is_negative() {
            h.neg_row(pivot_row);
        }
        let pivot = h.at(pivot_row, col).clone();
        for i in 0..pivot_row {
            let q = num_integer::Integer::div_floor(h.at(i, col), &pivot);
            h.row_sub(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    // keep the nonzero rows only
    let rows: Vec<Vec<Int>> = (0..pivot_row).map(|i| h.row(i).to_vec()).collect();
    if rows.is_empty() {
        IntMatrix::zeros(0, c)
    } else {
        IntMatrix::from_rows(rows).expect("rectangular")
    }
}

/// Basis (as matrix rows, in Hermite normal form) of `{x : m · xᵀ = 0}`.
/// The result spans a saturated sublattice of Z^cols.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_decomposition(m);
    let rank = snf.rank();
    let cols = m.cols();
    let rows: Vec<Vec<Int>> = (rank..cols).map(|k| snf.v_inv.col(k)).collect();
    if rows.is_empty() {
        return IntMatrix::zeros(0, cols);
    }
    hermite_normal_form(&IntMatrix::from_rows(rows).expect("rectangular"))
}

/// Completes a primitive row vector to a basis of Z^n whose first row is the
/// input itself.
pub fn complete_primitive(v: &[Int]) -> Result<IntMatrix> {
    let n = v.len();
    let m = IntMatrix::from_rows(vec![v.to_vec()])?;
    let snf = smith_decomposition(&m);
    if snf.rank() != 1 {
        return Err(LatError::RankDeficient);
    }
    if !snf.s.at(0, 0).is_one() {
        return Err(LatError::Precondition("vector is not primitive".into()));
    }
    // m = u * s * v with u = [±1], s = e_1: the rows of v are a basis of Z^n
    // whose first row is ±v.
    let mut rows: Vec<Vec<Int>> = (0..n).map(|i| snf.v.row(i).to_vec()).collect();
    if snf.u.at(0, 0).is_negative() {
        for x in rows[0].iter_mut() {
            *x = -x.clone();
        }
        if n > 1 {
            for x in rows[1].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    IntMatrix::from_rows(rows)
}
