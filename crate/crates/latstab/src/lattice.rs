//! Euclidean lattices presented by a rational Gram matrix. A lattice of rank
//! `n` is the free module Z^n together with the inner product
//! `<u, v> = uᵀ · G · v` for a symmetric positive definite rational `G`.
//! There is no embedding anywhere: squared covolume is `det G`, and the
//! slope is carried symbolically as the pair `(covol_sq, rank)` standing for
//! `-log(covol_sq) / (2 rank)`, compared by cross-exponentiation.

use std::cmp::Ordering;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{LatError, Result};
use crate::intmat::{hermite_normal_form, integer_kernel, smith_decomposition, IntMatrix};
use crate::matrix::RatMatrix;
use crate::rat::{Int, Rat, rat_pow};

/// Integer coordinate vector in a lattice's implied basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct LatVec {
    coords: Vec<Int>,
}

impl LatVec {
    pub fn new(coords: Vec<Int>) -> Self {
        LatVec { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatVec {
            coords: coords.iter().map(|&x| Int::from(x)).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        LatVec { coords: vec![Int::zero(); n] }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.coords[i] = Int::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }

    pub fn neg(&self) -> LatVec {
        LatVec {
            coords: self.coords.iter().map(|x| -x.clone()).collect(),
        }
    }

    pub fn add(&self, other: &LatVec) -> LatVec {
        assert_eq!(self.dim(), other.dim());
        LatVec {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `self - k * other`
    pub fn sub_scaled(&self, k: &Int, other: &LatVec) -> LatVec {
        assert_eq!(self.dim(), other.dim());
        LatVec {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - k * b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &Int) -> LatVec {
        LatVec {
            coords: self.coords.iter().map(|x| x * k).collect(),
        }
    }

    /// Flips the sign so the first nonzero coordinate is positive.
    pub fn sign_canonical(&self) -> LatVec {
        match self.coords.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }
}

impl std::fmt::Display for LatVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn vecs_to_matrix(vs: &[LatVec]) -> Result<IntMatrix> {
    let rows: Vec<Vec<Int>> = vs.iter().map(|v| v.coords().to_vec()).collect();
    IntMatrix::from_rows(rows)
}

pub fn matrix_to_vecs(m: &IntMatrix) -> Vec<LatVec> {
    (0..m.rows()).map(|i| LatVec::new(m.row(i).to_vec())).collect()
}

/// Slope of a lattice carried exactly: the pair stands for
/// `mu = -log(covol_sq) / (2 rank)`. Bigger covolume means smaller slope.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SlopeExpr {
    pub covol_sq: Rat,
    pub rank: usize,
}

impl SlopeExpr {
    pub fn new(covol_sq: Rat, rank: usize) -> Self {
        assert!(rank > 0, "slope of a rank-0 lattice");
        assert!(covol_sq.is_positive(), "covolume must be positive");
        SlopeExpr { covol_sq, rank }
    }

    /// Total order on slopes via `mu_a <= mu_b <=> c_a^{n_b} >= c_b^{n_a}`.
    pub fn cmp_slope(&self, other: &SlopeExpr) -> Ordering {
        let x = rat_pow(&self.covol_sq, other.rank);
        let y = rat_pow(&other.covol_sq, self.rank);
        // larger cross power = smaller slope
        x.cmp(&y).reverse()
    }

    /// Slope of the dual: negation swaps covol_sq for its reciprocal.
    pub fn negated(&self) -> SlopeExpr {
        SlopeExpr {
            covol_sq: Rat::one() / &self.covol_sq,
            rank: self.rank,
        }
    }

    /// Approximate decimal value, display only; never used in comparisons.
    pub fn approx(&self) -> f64 {
        let c = self.covol_sq.to_f64().unwrap_or(f64::NAN);
        -c.ln() / (2.0 * self.rank as f64)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lattice {
    gram: RatMatrix,
}

impl Lattice {
    /// Validates symmetry and positive definiteness (Sylvester minors).
    pub fn from_gram(gram: RatMatrix) -> Result<Lattice> {
        if !gram.is_square() {
            return Err(LatError::Dimension("Gram matrix must be square".into()));
        }
        if gram.rows() == 0 {
            return Err(LatError::Dimension("rank must be at least 1".into()));
        }
        if !gram.is_symmetric() {
            return Err(LatError::NotSymmetric);
        }
        if !gram.is_positive_definite()? {
            return Err(LatError::NotPositiveDefinite);
        }
        Ok(Lattice { gram })
    }

    /// Z^n with the standard inner product.
    pub fn standard(n: usize) -> Lattice {
        Lattice { gram: RatMatrix::identity(n) }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn inner(&self, u: &LatVec, v: &LatVec) -> Result<Rat> {
        let n = self.rank();
        if u.dim() != n || v.dim() != n {
            return Err(LatError::Dimension(format!(
                "vectors of dim {}/{} in rank-{} lattice",
                u.dim(),
                v.dim(),
                n
            )));
        }
        let mut acc = Rat::zero();
        for i in 0..n {
            if u.coords()[i].is_zero() {
                continue;
            }
            let ui = Rat::from_integer(u.coords()[i].clone());
            for j in 0..n {
                if v.coords()[j].is_zero() {
                    continue;
                }
                acc += &ui * self.gram.at(i, j) * Rat::from_integer(v.coords()[j].clone());
            }
        }
        Ok(acc)
    }

    pub fn norm_sq(&self, v: &LatVec) -> Result<Rat> {
        self.inner(v, v)
    }

    pub fn covol_sq(&self) -> Rat {
        self.gram.det().expect("gram is square")
    }

    pub fn slope(&self) -> SlopeExpr {
        SlopeExpr::new(self.covol_sq(), self.rank())
    }

    /// The abstract lattice spanned by independent vectors, with the induced
    /// inner product: Gram `B G Bᵀ` for generator rows `B`.
    pub fn sublattice(&self, gens: &[LatVec]) -> Result<Lattice> {
        let g = self.gens_gram(gens)?;
        if g.rank() != gens.len() {
            return Err(LatError::RankDeficient);
        }
        Ok(Lattice { gram: g })
    }

    /// Gram matrix of a list of vectors (no independence requirement).
    pub fn gens_gram(&self, gens: &[LatVec]) -> Result<RatMatrix> {
        let k = gens.len();
        if k == 0 {
            return Err(LatError::Dimension("empty generator list".into()));
        }
        let mut g = RatMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..=i {
                let x = self.inner(&gens[i], &gens[j])?;
                *g.at_mut(i, j) = x.clone();
                *g.at_mut(j, i) = x;
            }
        }
        Ok(g)
    }

    /// Dual lattice: same coordinate module, inverse Gram matrix. The pairing
    /// of a dual vector `y` with a primal vector `x` is the plain integer dot
    /// product of their coordinates.
    pub fn dual(&self) -> Lattice {
        Lattice {
            gram: self.gram.inverse().expect("positive definite gram is invertible"),
        }
    }

    /// Rescales the metric by `c_sq > 0` (all lengths scale by sqrt(c_sq)).
    pub fn scale_metric(&self, c_sq: &Rat) -> Result<Lattice> {
        if !c_sq.is_positive() {
            return Err(LatError::Precondition("scale factor must be positive".into()));
        }
        Ok(Lattice { gram: self.gram.scale(c_sq) })
    }

    /// Smallest saturated sublattice containing the given independent
    /// vectors, returned as a canonical (Hermite-form) basis.
    pub fn saturate(&self, gens: &[LatVec]) -> Result<Vec<LatVec>> {
        let n = self.rank();
        if gens.is_empty() {
            return Err(LatError::Dimension("empty generator list".into()));
        }
        if gens.iter().any(|v| v.dim() != n) {
            return Err(LatError::Dimension("generator dimension mismatch".into()));
        }
        let m = vecs_to_matrix(gens)?;
        let snf = smith_decomposition(&m);
        if snf.rank() != gens.len() {
            return Err(LatError::RankDeficient);
        }
        // m = u s v: the saturation of the row span of m is spanned by the
        // first `rank` rows of the unimodular v.
        let rows: Vec<Vec<Int>> = (0..gens.len()).map(|i| snf.v.row(i).to_vec()).collect();
        let basis = hermite_normal_form(&IntMatrix::from_rows(rows)?);
        Ok(matrix_to_vecs(&basis))
    }

    /// True when the given vectors are a generating set of a saturated
    /// sublattice (no torsion in the quotient).
    pub fn is_saturated(&self, gens: &[LatVec]) -> Result<bool> {
        let m = vecs_to_matrix(gens)?;
        let snf = smith_decomposition(&m);
        if snf.rank() != gens.len() {
            return Err(LatError::RankDeficient);
        }
        Ok(snf.diagonal().iter().take(gens.len()).all(|d| d.is_one()))
    }

    /// Metric on the quotient by the saturated sublattice spanned by
    /// `p_gens`, via orthogonal projection away from it. Satisfies
    /// `covol_sq(self) = covol_sq(P) * covol_sq(result)`.
    pub fn quotient_metric(&self, p_gens: &[LatVec]) -> Result<Lattice> {
        let n = self.rank();
        let r = p_gens.len();
        if r == 0 || p_gens.iter().any(|v| v.dim() != n) {
            return Err(LatError::Dimension("bad generator list".into()));
        }
        if r >= n {
            return Err(LatError::Dimension("quotient by a full-rank sublattice".into()));
        }
        let m = vecs_to_matrix(p_gens)?;
        let snf = smith_decomposition(&m);
        if snf.rank() != r {
            return Err(LatError::RankDeficient);
        }
        if !snf.diagonal().iter().take(r).all(|d| d.is_one()) {
            return Err(LatError::NotSaturated);
        }
        // rows of v form a basis of Z^n whose first r rows span P; the
        // remaining rows represent the quotient classes.
        let p = snf.v.submatrix_rows(0, r).to_rat();
        let c = snf.v.submatrix_rows(r, n).to_rat();
        let gram = &self.gram;
        let pgp = p.mul(gram)?.mul(&p.transpose())?;
        let cgc = c.mul(gram)?.mul(&c.transpose())?;
        let cgp = c.mul(gram)?.mul(&p.transpose())?;
        // Schur complement: Gram of the projections of the class reps onto
        // the orthogonal complement of span(P).
        let corr = cgp.mul(&pgp.inverse()?)?.mul(&cgp.transpose())?;
        let q = cgc.add(&corr.scale(&-Rat::one()))?;
        Lattice::from_gram(q)
    }

    /// Vectors of the dual lattice pairing to zero with every generator:
    /// the dual of the quotient. Returns the dual lattice together with a
    /// canonical basis of the complement inside it.
    pub fn orthogonal_complement(&self, p_gens: &[LatVec]) -> Result<(Lattice, Vec<LatVec>)> {
        let n = self.rank();
        let r = p_gens.len();
        if r == 0 || p_gens.iter().any(|v| v.dim() != n) {
            return Err(LatError::Dimension("bad generator list".into()));
        }
        if r >= n {
            return Err(LatError::EmptyComplement);
        }
        if !self.is_saturated(p_gens)? {
            return Err(LatError::NotSaturated);
        }
        let m = vecs_to_matrix(p_gens)?;
        let k = integer_kernel(&m);
        Ok((self.dual(), matrix_to_vecs(&k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, rat};

    fn a2() -> Lattice {
        Lattice::from_gram(RatMatrix::from_i64(&[&[2, 1], &[1, 2]])).unwrap()
    }

    #[test]
    fn gram_validation() {
        assert!(Lattice::from_gram(RatMatrix::from_i64(&[&[1, 2], &[3, 1]])).is_err());
        assert!(Lattice::from_gram(RatMatrix::from_i64(&[&[1, 2], &[2, 1]])).is_err());
        assert!(Lattice::from_gram(RatMatrix::from_i64(&[&[1, 2], &[2, 4]])).is_err());
        assert!(Lattice::from_gram(RatMatrix::from_i64(&[&[0]])).is_err());
        assert!(Lattice::from_gram(RatMatrix::from_i64(&[&[2, 1], &[1, 2]])).is_ok());
    }

    #[test]
    fn inner_product_examples() {
        let l = a2();
        let v = LatVec::from_i64(&[1, 1]);
        assert_eq!(l.inner(&v, &v).unwrap(), rat(6));
        let u = LatVec::from_i64(&[1, 0]);
        assert_eq!(l.inner(&u, &v).unwrap(), rat(3));
        assert!(l.inner(&u, &LatVec::from_i64(&[1, 2, 3])).is_err());
    }

    #[test]
    fn slope_examples() {
        let s = a2().slope();
        assert_eq!(s.covol_sq, rat(3));
        assert_eq!(s.rank, 2);
        let z2 = Lattice::standard(2).slope();
        assert_eq!(z2.covol_sq, rat(1));
        // mu(A2) < 0 = mu(Z^2)
        assert_eq!(s.cmp_slope(&z2), Ordering::Less);
    }

    #[test]
    fn slope_cmp_cross_exponentiation() {
        // {2,1} vs {3,2}: 2^2 = 4 > 3 so the rank-1 slope is smaller
        let a = SlopeExpr::new(rat(2), 1);
        let b = SlopeExpr::new(rat(3), 2);
        assert_eq!(a.cmp_slope(&b), Ordering::Less);
        assert_eq!(b.cmp_slope(&a), Ordering::Greater);
        assert_eq!(a.cmp_slope(&a), Ordering::Equal);
        // equal slopes at different ranks
        let c = SlopeExpr::new(rat(4), 2);
        assert_eq!(a.cmp_slope(&c), Ordering::Equal);
    }

    #[test]
    fn slope_cmp_is_scale_consistent() {
        // scaling the metric by c^2 shifts all slopes equally, preserving order
        let l = a2();
        let m = Lattice::standard(2);
        let c = frac(9, 4);
        let ls = l.scale_metric(&c).unwrap();
        let ms = m.scale_metric(&c).unwrap();
        assert_eq!(
            l.slope().cmp_slope(&m.slope()),
            ls.slope().cmp_slope(&ms.slope())
        );
    }

    #[test]
    fn slope_negation() {
        let s = a2().slope();
        let n = s.negated();
        assert_eq!(n.covol_sq, frac(1, 3));
        assert_eq!(n.rank, 2);
        assert_eq!(a2().dual().slope(), n);
    }

    #[test]
    fn sublattice_examples() {
        let z2 = Lattice::standard(2);
        let s = z2.sublattice(&[LatVec::from_i64(&[1, 1])]).unwrap();
        assert_eq!(s.gram(), &RatMatrix::from_i64(&[&[2]]));
        assert!(z2
            .sublattice(&[LatVec::from_i64(&[1, 1]), LatVec::from_i64(&[2, 2])])
            .is_err());
    }

    #[test]
    fn dual_examples() {
        let d = a2().dual();
        let expected = RatMatrix::from_rows(vec![
            vec![frac(2, 3), frac(-1, 3)],
            vec![frac(-1, 3), frac(2, 3)],
        ])
        .unwrap();
        assert_eq!(d.gram(), &expected);
        assert_eq!(d.covol_sq(), frac(1, 3));
        // dual of dual is the original
        assert_eq!(d.dual(), a2());
    }

    #[test]
    fn saturation_examples() {
        let z2 = Lattice::standard(2);
        assert_eq!(
            z2.saturate(&[LatVec::from_i64(&[2, 0])]).unwrap(),
            vec![LatVec::from_i64(&[1, 0])]
        );
        assert_eq!(
            z2.saturate(&[LatVec::from_i64(&[1, 1])]).unwrap(),
            vec![LatVec::from_i64(&[1, 1])]
        );
        let z3 = Lattice::standard(3);
        assert_eq!(
            z3.saturate(&[LatVec::from_i64(&[2, 0, 0]), LatVec::from_i64(&[0, 2, 0])])
                .unwrap(),
            vec![LatVec::from_i64(&[1, 0, 0]), LatVec::from_i64(&[0, 1, 0])]
        );
        assert!(z2
            .saturate(&[LatVec::from_i64(&[1, 1]), LatVec::from_i64(&[2, 2])])
            .is_err());
    }

    #[test]
    fn saturation_is_idempotent_and_covol_divides() {
        let l = a2();
        let gens = vec![LatVec::from_i64(&[2, 4])];
        let sat = l.saturate(&gens).unwrap();
        assert_eq!(sat, vec![LatVec::from_i64(&[1, 2])]);
        let again = l.saturate(&sat).unwrap();
        assert_eq!(sat, again);
        // covol_sq of the span is (index)^2 times covol_sq of the saturation
        let raw = l.sublattice(&gens).unwrap().covol_sq();
        let satd = l.sublattice(&sat).unwrap().covol_sq();
        assert_eq!(raw, rat(4) * &satd);
    }

    #[test]
    fn quotient_metric_examples() {
        let l = a2();
        let q = l.quotient_metric(&[LatVec::from_i64(&[1, 0])]).unwrap();
        assert_eq!(q.gram(), &RatMatrix::from_rows(vec![vec![frac(3, 2)]]).unwrap());
        // covolume multiplicativity
        let p = l.sublattice(&[LatVec::from_i64(&[1, 0])]).unwrap();
        assert_eq!(l.covol_sq(), p.covol_sq() * q.covol_sq());

        let z2 = Lattice::standard(2);
        let q = z2.quotient_metric(&[LatVec::from_i64(&[1, 0])]).unwrap();
        assert_eq!(q.gram(), &RatMatrix::identity(1));
    }

    #[test]
    fn quotient_metric_rejects_bad_inputs() {
        let z2 = Lattice::standard(2);
        assert!(matches!(
            z2.quotient_metric(&[LatVec::from_i64(&[2, 0])]),
            Err(LatError::NotSaturated)
        ));
        assert!(z2
            .quotient_metric(&[LatVec::from_i64(&[1, 0]), LatVec::from_i64(&[0, 1])])
            .is_err());
    }

    #[test]
    fn orthogonal_complement_examples() {
        let z2 = Lattice::standard(2);
        let (d, comp) = z2.orthogonal_complement(&[LatVec::from_i64(&[1, 0])]).unwrap();
        assert_eq!(d, Lattice::standard(2));
        assert_eq!(comp, vec![LatVec::from_i64(&[0, 1])]);

        let z4 = Lattice::standard(4);
        let p = vec![
            LatVec::from_i64(&[1, 0, 0, -1]),
            LatVec::from_i64(&[0, 1, 0, 0]),
            LatVec::from_i64(&[0, 0, 1, 0]),
        ];
        let (d4, comp) = z4.orthogonal_complement(&p).unwrap();
        assert_eq!(comp, vec![LatVec::from_i64(&[1, 0, 0, 1])]);
        let s = d4.sublattice(&comp).unwrap();
        assert_eq!(s.gram(), &RatMatrix::from_i64(&[&[2]]));

        assert!(matches!(
            z2.orthogonal_complement(&[LatVec::from_i64(&[1, 0]), LatVec::from_i64(&[0, 1])]),
            Err(LatError::EmptyComplement)
        ));
    }

    #[test]
    fn complement_slope_is_negated_quotient_slope() {
        let l = a2();
        let p = vec![LatVec::from_i64(&[1, 1])];
        let q = l.quotient_metric(&p).unwrap();
        let (d, comp) = l.orthogonal_complement(&p).unwrap();
        let comp_slope = d.sublattice(&comp).unwrap().slope();
        assert_eq!(comp_slope, q.slope().negated());
    }

    #[test]
    fn sign_canonicalization() {
        assert_eq!(
            LatVec::from_i64(&[0, -2, 1]).sign_canonical(),
            LatVec::from_i64(&[0, 2, -1])
        );
        assert_eq!(
            LatVec::from_i64(&[1, -2]).sign_canonical(),
            LatVec::from_i64(&[1, -2])
        );
        assert!(LatVec::zero(3).sign_canonical().is_zero());
    }
}
