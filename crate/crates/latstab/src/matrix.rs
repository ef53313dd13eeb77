//! Dense rational matrices and the exact kernels built on them: fraction-free
//! determinants and ranks, inverses, characteristic polynomials, Kronecker
//! products and compound matrices.

use num_traits::{One, Signed, Zero};

use crate::error::{LatError, Result};
use crate::rat::{Int, Rat};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(LatError::Dimension(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LatError::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Small-integer constructor, mostly for tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Rat::from_integer(Int::from(x))))
            .collect();
        RatMatrix { rows: r, cols: c, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rat {
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
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

    pub fn add(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LatError::Dimension("matrix sum shape mismatch".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(RatMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn scale(&self, c: &Rat) -> RatMatrix {
        let entries = self.entries.iter().map(|x| x * c).collect();
        RatMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.at(i, i)).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Clears denominators row by row; returns the integer matrix and the
    /// (positive) scale factor each row was multiplied by.
    fn integerize_rows(&self) -> (Vec<Vec<Int>>, Vec<Int>) {
        use num_integer::Integer;
        let mut rows = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut l = Int::one();
            for j in 0..self.cols {
                l = l.lcm(self.at(i, j).denom());
            }
            let row: Vec<Int> = (0..self.cols)
                .map(|j| {
                    let x = self.at(i, j);
                    x.numer() * (&l / x.denom())
                })
                .collect();
            rows.push(row);
            scales.push(l);
        }
        (rows, scales)
    }

    /// Exact determinant by fraction-free (one-step division) elimination on
    /// the denominator-cleared matrix.
    pub fn det(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(LatError::Dimension("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rat::one());
        }
        let (mut a, scales) = self.integerize_rows();
        let mut sign = 1i64;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return Ok(Rat::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = t / &prev;
                }
                a[i][k] = Int::zero();
            }
            prev = a[k][k].clone();
        }
        let mut det = Rat::from_integer(a[n - 1][n - 1].clone() * Int::from(sign));
        for s in &scales {
            det /= Rat::from_integer(s.clone());
        }
        Ok(det)
    }

    /// Rank over the rationals, by fraction-free elimination with full pivot
    /// search (row and column swaps do not change the rank).
    pub fn rank(&self) -> usize {
        let (mut a, _) = self.integerize_rows();
        let (r, c) = (self.rows, self.cols);
        let mut prev = Int::one();
        let mut k = 0;
        while k < r.min(c) {
            let pivot = (k..r)
                .flat_map(|i| (k..c).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero());
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => break,
            };
            a.swap(k, pi);
            if pj != k {
                for row in a.iter_mut() {
                    row.swap(k, pj);
                }
            }
            for i in k + 1..r {
                for j in k + 1..c {
                    let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = t / &prev;
                }
                a[i][k] = Int::zero();
            }
            prev = a[k][k].clone();
            k += 1;
        }
        k
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(LatError::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for k in 0..n {
            let p = (k..n)
                .find(|&i| !a.at(i, k).is_zero())
                .ok_or(LatError::Singular)?;
            if p != k {
                for j in 0..n {
                    let (x, y) = (a.at(k, j).clone(), a.at(p, j).clone());
                    *a.at_mut(k, j) = y;
                    *a.at_mut(p, j) = x;
                    let (x, y) = (inv.at(k, j).clone(), inv.at(p, j).clone());
                    *inv.at_mut(k, j) = y;
                    *inv.at_mut(p, j) = x;
                }
            }
            let piv = a.at(k, k).clone();
            for j in 0..n {
                *a.at_mut(k, j) /= &piv;
                *inv.at_mut(k, j) /= &piv;
            }
            for i in 0..n {
                if i == k || a.at(i, k).is_zero() {
                    continue;
                }
                let f = a.at(i, k).clone();
                for j in 0..n {
                    let t = a.at(k, j) * &f;
                    *a.at_mut(i, j) -= t;
                    let t = inv.at(k, j) * &f;
                    *inv.at_mut(i, j) -= t;
                }
            }
        }
        Ok(inv)
    }

    /// Monic characteristic polynomial, descending coefficients
    /// `[1, c_{n-1}, ..., c_0]`, by the Faddeev-LeVerrier recurrence.
    pub fn charpoly(&self) -> Result<Vec<Rat>> {
        if !self.is_square() {
            return Err(LatError::Dimension("charpoly of non-square matrix".into()));
        }
        let n = self.rows;
        let mut coeffs = Vec::with_capacity(n + 1);
        coeffs.push(Rat::one());
        let mut m = Self::zeros(n, n);
        let mut c = Rat::one();
        for k in 1..=n {
            // M_k = A·(M_{k-1} + c_{k-1}·I)
            let shifted = m.add(&Self::identity(n).scale(&c))?;
            m = self.mul(&shifted)?;
            c = -m.trace() / Rat::from_integer(Int::from(k as i64));
            coeffs.push(c.clone());
        }
        Ok(coeffs)
    }

    /// All leading principal minors `det(top-left k x k)` for `k = 1..=n`.
    pub fn leading_principal_minors(&self) -> Result<Vec<Rat>> {
        if !self.is_square() {
            return Err(LatError::Dimension("minors of non-square matrix".into()));
        }
        (1..=self.rows)
            .map(|k| self.submatrix(&(0..k).collect::<Vec<_>>(), &(0..k).collect::<Vec<_>>()).det())
            .collect()
    }

    /// Sylvester test; callers check symmetry separately.
    pub fn is_positive_definite(&self) -> Result<bool> {
        Ok(self
            .leading_principal_minors()?
            .iter()
            .all(|m| m.is_positive()))
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> RatMatrix {
        let mut out = Self::zeros(row_idx.len(), col_idx.len());
        for (i, &r) in row_idx.iter().enumerate() {
            for (j, &c) in col_idx.iter().enumerate() {
                *out.at_mut(i, j) = self.at(r, c).clone();
            }
        }
        out
    }

    /// Kronecker product with index pairs `(i, j)` ordered `j` fastest:
    /// row `(i, p)` of the result is row index `i * other.rows + p`.
    pub fn kron(&self, other: &RatMatrix) -> RatMatrix {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        *out.at_mut(i * other.rows + p, j * other.cols + q) = a * other.at(p, q);
                    }
                }
            }
        }
        out
    }

    /// k-th compound matrix: entry `(I, J)` is the minor on rows `I` and
    /// columns `J`, with index tuples enumerated in lexicographic order.
    pub fn compound(&self, k: usize) -> Result<RatMatrix> {
        if k == 0 || k > self.rows.min(self.cols) {
            return Err(LatError::Dimension(format!(
                "compound order {} out of range for {}x{}",
                k, self.rows, self.cols
            )));
        }
        let row_sets = combinations(self.rows, k);
        let col_sets = combinations(self.cols, k);
        let mut out = Self::zeros(row_sets.len(), col_sets.len());
        for (i, rs) in row_sets.iter().enumerate() {
            for (j, cs) in col_sets.iter().enumerate() {
                *out.at_mut(i, j) = self.submatrix(rs, cs).det()?;
            }
        }
        Ok(out)
    }
}

impl std::fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// All k-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance to next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
