//! Tensor products, wedge Grams, and decompositions of tensor elements.
//!
//! An element of `L ⊗ M` is an integer coefficient matrix against the basis
//! pairs `e_i ⊗ f_j`, flattened in the same `(i, j), j fastest` order the
//! Kronecker Gram uses, so flattened elements are plain lattice vectors of
//! the tensor lattice.

use num_traits::Zero;

use crate::error::{LatError, Result};
use crate::intmat::{smith_decomposition, IntMatrix};
use crate::lattice::{LatVec, Lattice};
use crate::matrix::RatMatrix;
use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorElement {
    coeffs: IntMatrix,
}

impl TensorElement {
    pub fn new(coeffs: IntMatrix) -> Self {
        TensorElement { coeffs }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        TensorElement { coeffs: IntMatrix::from_i64(rows) }
    }

    /// The decomposable element `u ⊗ w`.
    pub fn outer(u: &LatVec, w: &LatVec) -> Self {
        let mut m = IntMatrix::zeros(u.dim(), w.dim());
        for i in 0..u.dim() {
            for j in 0..w.dim() {
                *m.at_mut(i, j) = &u.coords()[i] * &w.coords()[j];
            }
        }
        TensorElement { coeffs: m }
    }

    pub fn coeffs(&self) -> &IntMatrix {
        &self.coeffs
    }

    pub fn rows(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn cols(&self) -> usize {
        self.coeffs.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Coordinates in the tensor lattice: index `(i, j) -> i * cols + j`.
    pub fn flatten(&self) -> LatVec {
        let mut coords = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            coords.extend(self.coeffs.row(i).iter().cloned());
        }
        LatVec::new(coords)
    }

    /// Inverse of `flatten` for a `rows x cols` coefficient grid.
    pub fn from_flat(rows: usize, cols: usize, v: &LatVec) -> Result<Self> {
        if v.dim() != rows * cols {
            return Err(LatError::Dimension(format!(
                "vector of dim {} is not {}x{}",
                v.dim(),
                rows,
                cols
            )));
        }
        let entries = v.coords().to_vec();
        Ok(TensorElement {
            coeffs: IntMatrix::new(rows, cols, entries)?,
        })
    }

    pub fn add(&self, other: &TensorElement) -> Result<TensorElement> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(LatError::Dimension("tensor element shape mismatch".into()));
        }
        let mut m = self.coeffs.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                *m.at_mut(i, j) += other.coeffs.at(i, j);
            }
        }
        Ok(TensorElement { coeffs: m })
    }
}

/// `L ⊗ M`: Kronecker product of the Gram matrices.
pub fn tensor_lattice(l: &Lattice, m: &Lattice) -> Lattice {
    let gram = l.gram().kron(m.gram());
    Lattice::from_gram(gram).expect("Kronecker product of PD matrices is PD")
}

/// Squared covolume of the parallelepiped spanned by the given vectors:
/// the determinant of their Gram matrix. Dependent vectors give zero.
pub fn wedge_gram(l: &Lattice, vs: &[LatVec]) -> Result<Rat> {
    let g = l.gens_gram(vs)?;
    g.det()
}

/// Least number of decomposable summands: the rank of the coefficient grid.
pub fn tensor_length(t: &TensorElement) -> usize {
    t.coeffs.to_rat().rank()
}

/// A length-minimal decomposition `t = sum_k left_k ⊗ right_k`. Left vectors
/// are members of the left factor; right vectors may a priori be rational,
/// though this construction yields integer ones.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub left: Vec<LatVec>,
    pub right: Vec<Vec<Rat>>,
}

impl Decomposition {
    pub fn length(&self) -> usize {
        self.left.len()
    }

    /// Rebuilds the coefficient grid, for verification.
    pub fn reassemble(&self, rows: usize, cols: usize) -> Result<RatMatrix> {
        let mut m = RatMatrix::zeros(rows, cols);
        for (u, w) in self.left.iter().zip(&self.right) {
            if u.dim() != rows || w.len() != cols {
                return Err(LatError::Dimension("decomposition shape mismatch".into()));
            }
            for i in 0..rows {
                for j in 0..cols {
                    *m.at_mut(i, j) +=
                        Rat::from_integer(u.coords()[i].clone()) * &w[j];
                }
            }
        }
        Ok(m)
    }
}

/// Minimal decomposition through the Smith form of the coefficient grid
/// `C = U S V`: the first `rank` columns of `U` against the first `rank`
/// rows of `S V`. Both sides are independent.
pub fn minimal_decomposition(t: &TensorElement) -> Result<Decomposition> {
    if t.is_zero() {
        return Err(LatError::ZeroElement);
    }
    let snf = smith_decomposition(t.coeffs());
    let rank = snf.rank();
    let mut left = Vec::with_capacity(rank);
    let mut right = Vec::with_capacity(rank);
    for k in 0..rank {
        left.push(LatVec::new(snf.u.col(k)));
        let s = snf.s.at(k, k);
        right.push(
            snf.v
                .row(k)
                .iter()
                .map(|x| Rat::from_integer(x * s))
                .collect(),
        );
    }
    Ok(Decomposition { left, right })
}

/// Gram matrices `(A, A')` of the two sides of a decomposition, in the
/// respective factors. For a minimal decomposition both are positive
/// definite.
pub fn decomposition_gramians(
    l: &Lattice,
    m: &Lattice,
    d: &Decomposition,
) -> Result<(RatMatrix, RatMatrix)> {
    let k = d.length();
    if k == 0 {
        return Err(LatError::ZeroElement);
    }
    let a = l.gens_gram(&d.left)?;
    let mut a_prime = RatMatrix::zeros(k, k);
    let gm = m.gram();
    for p in 0..k {
        for q in 0..=p {
            let mut acc = Rat::zero();
            for i in 0..m.rank() {
                if d.right[p][i].is_zero() {
                    continue;
                }
                for j in 0..m.rank() {
                    acc += &d.right[p][i] * gm.at(i, j) * &d.right[q][j];
                }
            }
            *a_prime.at_mut(p, q) = acc.clone();
            *a_prime.at_mut(q, p) = acc;
        }
    }
    Ok((a, a_prime))
}

/// Inner product of two tensor elements: `tr(G_L · A · G_M · Bᵀ)`.
pub fn tensor_inner(l: &Lattice, m: &Lattice, a: &TensorElement, b: &TensorElement) -> Result<Rat> {
    if a.rows() != l.rank() || a.cols() != m.rank() || b.rows() != l.rank() || b.cols() != m.rank()
    {
        return Err(LatError::Dimension("tensor element shape mismatch".into()));
    }
    let prod = l
        .gram()
        .mul(&a.coeffs().to_rat())?
        .mul(m.gram())?
        .mul(&b.coeffs().to_rat().transpose())?;
    Ok(prod.trace())
}

/// Exact Gram-Schmidt data over a basis given by coordinates: returns the
/// lower-triangular `mu` (unit diagonal) and the squared lengths of the
/// orthogonalized vectors. Fails on dependent input.
pub fn gram_schmidt_sq(l: &Lattice, basis: &[LatVec]) -> Result<(RatMatrix, Vec<Rat>)> {
    let k = basis.len();
    let g = l.gens_gram(basis)?;
    let mut mu = RatMatrix::identity(k);
    let mut bstar_sq: Vec<Rat> = Vec::with_capacity(k);
    // s[i][j] = <b_i, b*_j>
    let mut s = RatMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let mut acc = g.at(i, j).clone();
            for t in 0..j {
                let term = mu.at(j, t) * s.at(i, t);
                acc -= term;
            }
            *s.at_mut(i, j) = acc.clone();
            if j < i {
                if bstar_sq[j].is_zero() {
                    return Err(LatError::RankDeficient);
                }
                *mu.at_mut(i, j) = acc / &bstar_sq[j];
            } else {
                if acc.is_zero() {
                    return Err(LatError::RankDeficient);
                }
                bstar_sq.push(acc);
            }
        }
    }
    Ok((mu, bstar_sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::combinations;
    use crate::rat::{frac, rat, rat_pow};

    fn a2() -> Lattice {
        Lattice::from_gram(RatMatrix::from_i64(&[&[2, 1], &[1, 2]])).unwrap()
    }

    #[test]
    fn tensor_lattice_shape_and_covol() {
        let t = tensor_lattice(&a2(), &a2());
        assert_eq!(t.rank(), 4);
        assert_eq!(t.covol_sq(), rat(81));
        // covol_sq(L ⊗ M) = covol_sq(L)^rk M * covol_sq(M)^rk L
        let z3 = Lattice::standard(3);
        let t = tensor_lattice(&a2(), &z3);
        assert_eq!(
            t.covol_sq(),
            rat_pow(&a2().covol_sq(), 3) * rat_pow(&z3.covol_sq(), 2)
        );
    }

    #[test]
    fn tensor_inner_matches_flattened_form() {
        let l = a2();
        let m = Lattice::standard(3);
        let t = tensor_lattice(&l, &m);
        let a = TensorElement::from_i64(&[&[1, 2, 0], &[-1, 0, 3]]);
        let b = TensorElement::from_i64(&[&[0, 1, 1], &[2, -2, 0]]);
        let via_trace = tensor_inner(&l, &m, &a, &b).unwrap();
        let via_flat = t.inner(&a.flatten(), &b.flatten()).unwrap();
        assert_eq!(via_trace, via_flat);
    }

    #[test]
    fn outer_products_flatten_consistently() {
        let u = LatVec::from_i64(&[1, -2]);
        let w = LatVec::from_i64(&[3, 0, 1]);
        let t = TensorElement::outer(&u, &w);
        assert_eq!(
            t.flatten(),
            LatVec::from_i64(&[3, 0, 1, -6, 0, -2])
        );
        let back = TensorElement::from_flat(2, 3, &t.flatten()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn wedge_gram_examples() {
        let l = a2();
        let e1 = LatVec::from_i64(&[1, 0]);
        let e2 = LatVec::from_i64(&[0, 1]);
        assert_eq!(wedge_gram(&l, &[e1.clone(), e2.clone()]).unwrap(), rat(3));
        // dependent vectors give zero
        assert_eq!(
            wedge_gram(&l, &[e1.clone(), e1.clone()]).unwrap(),
            rat(0)
        );
        assert_eq!(wedge_gram(&l, &[e2]).unwrap(), rat(2));
    }

    #[test]
    fn wedge_gram_agrees_with_compound() {
        // pairwise wedge inner products of basis k-tuples = compound(gram, k)
        let g = RatMatrix::from_i64(&[&[3, 1, 0], &[1, 4, -1], &[0, -1, 2]]);
        let l = Lattice::from_gram(g.clone()).unwrap();
        for k in 1..=3usize {
            let comp = g.compound(k).unwrap();
            let sets = combinations(3, k);
            for (a, sa) in sets.iter().enumerate() {
                for (b, sb) in sets.iter().enumerate() {
                    // inner product of wedges = det of the cross Gram
                    let mut cross = RatMatrix::zeros(k, k);
                    for (i, &p) in sa.iter().enumerate() {
                        for (j, &q) in sb.iter().enumerate() {
                            *cross.at_mut(i, j) = l
                                .inner(&LatVec::unit(3, p), &LatVec::unit(3, q))
                                .unwrap();
                        }
                    }
                    assert_eq!(&cross.det().unwrap(), comp.at(a, b));
                }
            }
        }
    }

    #[test]
    fn tensor_length_examples() {
        assert_eq!(tensor_length(&TensorElement::from_i64(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(tensor_length(&TensorElement::from_i64(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(tensor_length(&TensorElement::from_i64(&[&[0, 0], &[0, 0]])), 0);
        let u = LatVec::from_i64(&[2, 3, -1]);
        let w = LatVec::from_i64(&[5, -2]);
        assert_eq!(tensor_length(&TensorElement::outer(&u, &w)), 1);
    }

    #[test]
    fn tensor_length_is_unimodular_invariant() {
        // changing basis on either side preserves length
        let t = TensorElement::from_i64(&[&[1, 2, 0], &[0, 1, 3]]);
        let u = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let w = IntMatrix::from_i64(&[&[1, 0, 2], &[0, 1, 0], &[0, 0, 1]]);
        let moved = TensorElement::new(u.mul(t.coeffs()).unwrap().mul(&w).unwrap());
        assert_eq!(tensor_length(&t), tensor_length(&moved));
    }

    #[test]
    fn minimal_decomposition_reassembles() {
        let cases = vec![
            TensorElement::from_i64(&[&[2, 0], &[0, 3]]),
            TensorElement::from_i64(&[&[1, 2], &[2, 4]]),
            TensorElement::from_i64(&[&[1, 2, 3], &[4, 5, 6]]),
            TensorElement::from_i64(&[&[0, 4], &[6, 0], &[2, 2]]),
        ];
        for t in cases {
            let d = minimal_decomposition(&t).unwrap();
            assert_eq!(d.length(), tensor_length(&t));
            let r = d.reassemble(t.rows(), t.cols()).unwrap();
            assert_eq!(r, t.coeffs().to_rat());
            // both sides independent
            let lm = crate::lattice::vecs_to_matrix(&d.left).unwrap();
            assert_eq!(lm.to_rat().rank(), d.length());
            let rm = RatMatrix::from_rows(d.right.clone()).unwrap();
            assert_eq!(rm.rank(), d.length());
        }
    }

    #[test]
    fn minimal_decomposition_rejects_zero() {
        assert!(matches!(
            minimal_decomposition(&TensorElement::from_i64(&[&[0, 0], &[0, 0]])),
            Err(LatError::ZeroElement)
        ));
    }

    #[test]
    fn decomposition_gramian_example() {
        // identity grid in A2 ⊗ Z^2: left Gramian is the A2 Gram
        let l = a2();
        let m = Lattice::standard(2);
        let t = TensorElement::from_i64(&[&[1, 0], &[0, 1]]);
        let d = minimal_decomposition(&t).unwrap();
        let (a, a_prime) = decomposition_gramians(&l, &m, &d).unwrap();
        assert_eq!(a, RatMatrix::from_i64(&[&[2, 1], &[1, 2]]));
        assert_eq!(a_prime, RatMatrix::identity(2));
    }

    #[test]
    fn trace_identity_on_examples() {
        // tr(A A') = |t|^2 for a minimal decomposition
        let l = a2();
        let m = Lattice::from_gram(RatMatrix::from_i64(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]))
            .unwrap();
        for t in [
            TensorElement::from_i64(&[&[1, 0, 2], &[0, 1, -1]]),
            TensorElement::from_i64(&[&[3, 1, 0], &[1, 2, 1]]),
        ] {
            let d = minimal_decomposition(&t).unwrap();
            let (a, ap) = decomposition_gramians(&l, &m, &d).unwrap();
            let lhs = a.mul(&ap).unwrap().trace();
            let rhs = tensor_inner(&l, &m, &t, &t).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn gram_schmidt_example() {
        let l = a2();
        let basis = vec![LatVec::from_i64(&[1, 0]), LatVec::from_i64(&[0, 1])];
        let (mu, bstar) = gram_schmidt_sq(&l, &basis).unwrap();
        assert_eq!(mu.at(1, 0), &frac(1, 2));
        assert_eq!(bstar, vec![rat(2), frac(3, 2)]);
        // product of the squared GS lengths is the covolume squared
        assert_eq!(bstar.iter().product::<Rat>(), l.covol_sq());
    }

    #[test]
    fn gram_schmidt_rejects_dependent() {
        let l = Lattice::standard(2);
        let basis = vec![LatVec::from_i64(&[1, 1]), LatVec::from_i64(&[2, 2])];
        assert!(matches!(
            gram_schmidt_sq(&l, &basis),
            Err(LatError::RankDeficient)
        ));
    }

    #[test]
    fn slope_additivity_of_tensor() {
        // mu(L ⊗ M) = mu(L) + mu(M), checked in exact cross-multiplied form:
        // covol_sq(T)^(n·m) has to equal (c_L^m · c_M^n)^(n·m) ... verified
        // directly on covolumes instead, which is the same statement.
        let l = a2();
        let m = Lattice::from_gram(RatMatrix::from_i64(&[&[5, 2], &[2, 3]])).unwrap();
        let t = tensor_lattice(&l, &m);
        assert_eq!(
            t.covol_sq(),
            rat_pow(&l.covol_sq(), m.rank()) * rat_pow(&m.covol_sq(), l.rank())
        );
    }
}
