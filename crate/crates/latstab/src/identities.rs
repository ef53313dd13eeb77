//! Exact identity and inequality checks for wedge norms of tensor elements.
//! Each check computes its two sides by independent routes and reports both,
//! so a failure pinpoints the exact rational discrepancy.

use num_traits::{One, Signed, Zero};

use crate::error::{LatError, Result};
use crate::lattice::{LatVec, Lattice};
use crate::matrix::RatMatrix;
use crate::multilinear::{
    decomposition_gramians, minimal_decomposition, tensor_inner, tensor_lattice, wedge_gram,
    TensorElement,
};
use crate::rat::{int_pow, rat_pow, Int, Rat};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckKind {
    Equality,
    GreaterEq,
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub name: String,
    pub kind: CheckKind,
    pub lhs: Rat,
    pub rhs: Rat,
    pub holds: bool,
}

impl IdentityReport {
    fn equality(name: &str, lhs: Rat, rhs: Rat) -> Self {
        let holds = lhs == rhs;
        IdentityReport {
            name: name.to_string(),
            kind: CheckKind::Equality,
            lhs,
            rhs,
            holds,
        }
    }

    fn greater_eq(name: &str, lhs: Rat, rhs: Rat) -> Self {
        let holds = lhs >= rhs;
        IdentityReport {
            name: name.to_string(),
            kind: CheckKind::GreaterEq,
            lhs,
            rhs,
            holds,
        }
    }
}

/// `|a ∧ b|^2 = |a|^2 |b|^2 - <a,b>^2` for elements of a tensor lattice,
/// with the left side evaluated through the Gram-determinant route.
pub fn check_cross_gram(
    t: &Lattice,
    a: &TensorElement,
    b: &TensorElement,
) -> Result<IdentityReport> {
    let fa = a.flatten();
    let fb = b.flatten();
    if fa.dim() != t.rank() || fb.dim() != t.rank() {
        return Err(LatError::Dimension(
            "tensor element does not match lattice rank".into(),
        ));
    }
    let lhs = wedge_gram(t, &[fa.clone(), fb.clone()])?;
    let na = t.norm_sq(&fa)?;
    let nb = t.norm_sq(&fb)?;
    let ab = t.inner(&fa, &fb)?;
    let rhs = na * nb - &ab * &ab;
    Ok(IdentityReport::equality("cross_gram", lhs, rhs))
}

/// Wedge of two decomposable elements against the three-term expansion in
/// factor-wise wedges.
pub fn check_rank2_identity(
    l: &Lattice,
    m: &Lattice,
    v1: &LatVec,
    v2: &LatVec,
    w1: &LatVec,
    w2: &LatVec,
) -> Result<IdentityReport> {
    let t = tensor_lattice(l, m);
    let alpha = TensorElement::outer(v1, w1).flatten();
    let beta = TensorElement::outer(v2, w2).flatten();
    let lhs = wedge_gram(&t, &[alpha, beta])?;

    let nv1 = l.norm_sq(v1)?;
    let nv2 = l.norm_sq(v2)?;
    let nw1 = m.norm_sq(w1)?;
    let nw2 = m.norm_sq(w2)?;
    let vv = wedge_gram(l, &[v1.clone(), v2.clone()])?;
    let ww = wedge_gram(m, &[w1.clone(), w2.clone()])?;
    let rhs = &nv1 * &nv2 * &ww + &vv * &nw1 * &nw2 - &vv * &ww;
    Ok(IdentityReport::equality("rank2_wedge", lhs, rhs))
}

/// Three-vector Gram determinant against its polynomial expansion in norms
/// and pairwise inner products.
pub fn gramian3_expand(
    l: &Lattice,
    a1: &LatVec,
    a2: &LatVec,
    a3: &LatVec,
) -> Result<IdentityReport> {
    let lhs = wedge_gram(l, &[a1.clone(), a2.clone(), a3.clone()])?;
    let n1 = l.norm_sq(a1)?;
    let n2 = l.norm_sq(a2)?;
    let n3 = l.norm_sq(a3)?;
    let p12 = l.inner(a1, a2)?;
    let p23 = l.inner(a2, a3)?;
    let p31 = l.inner(a3, a1)?;
    let rhs = &n1 * &n2 * &n3
        - &n1 * &p23 * &p23
        - &n2 * &p31 * &p31
        - &n3 * &p12 * &p12
        + Rat::from_integer(Int::from(2)) * &p12 * &p23 * &p31;
    Ok(IdentityReport::equality("gramian3_expansion", lhs, rhs))
}

/// Resolves the doubled triple product of inner products into wedge norms:
/// `2 (x,y)(y,z)(z,x)` equals the cyclically symmetric five-term expression
/// on the right.
pub fn check_product_substitution(
    l: &Lattice,
    x: &LatVec,
    y: &LatVec,
    z: &LatVec,
) -> Result<IdentityReport> {
    let nx = l.norm_sq(x)?;
    let ny = l.norm_sq(y)?;
    let nz = l.norm_sq(z)?;
    let pxy = l.inner(x, y)?;
    let pyz = l.inner(y, z)?;
    let pzx = l.inner(z, x)?;
    let lhs = Rat::from_integer(Int::from(2)) * &pxy * &pyz * &pzx;

    let wxyz = wedge_gram(l, &[x.clone(), y.clone(), z.clone()])?;
    let wyz = wedge_gram(l, &[y.clone(), z.clone()])?;
    let wzx = wedge_gram(l, &[z.clone(), x.clone()])?;
    let wxy = wedge_gram(l, &[x.clone(), y.clone()])?;
    let rhs = &wxyz - &nx * &ny * &nz
        + &nx * (&ny * &nz - &wyz)
        + &ny * (&nz * &nx - &wzx)
        + &nz * (&nx * &ny - &wxy);
    Ok(IdentityReport::equality("product_substitution", lhs, rhs))
}

fn others(i: usize) -> (usize, usize) {
    ((i + 1) % 3, (i + 2) % 3)
}

/// Wedge norm of three decomposable elements `v_i ⊗ w_i` against the full
/// eighteen-term expansion in factor-wise data (grouped into seven sums).
pub fn check_rank3_identity(
    l: &Lattice,
    m: &Lattice,
    vs: &[LatVec; 3],
    ws: &[LatVec; 3],
) -> Result<IdentityReport> {
    let t = tensor_lattice(l, m);
    let flats: Vec<LatVec> = vs
        .iter()
        .zip(ws.iter())
        .map(|(v, w)| TensorElement::outer(v, w).flatten())
        .collect();
    let lhs = wedge_gram(&t, &flats)?;

    let nv: Vec<Rat> = vs.iter().map(|v| l.norm_sq(v)).collect::<Result<_>>()?;
    let nw: Vec<Rat> = ws.iter().map(|w| m.norm_sq(w)).collect::<Result<_>>()?;
    let big_v = wedge_gram(l, &[vs[0].clone(), vs[1].clone(), vs[2].clone()])?;
    let big_w = wedge_gram(m, &[ws[0].clone(), ws[1].clone(), ws[2].clone()])?;
    let mut vlam = Vec::with_capacity(3);
    let mut wmu = Vec::with_capacity(3);
    for i in 0..3 {
        let (a, b) = others(i);
        vlam.push(&nv[i] * wedge_gram(l, &[vs[a].clone(), vs[b].clone()])?);
        wmu.push(&nw[i] * wedge_gram(m, &[ws[a].clone(), ws[b].clone()])?);
    }
    let half = Rat::new(Int::one(), Int::from(2));
    let mut rhs = &nv[0] * &nv[1] * &nv[2] * &big_w + &big_v * &nw[0] * &nw[1] * &nw[2];
    for i in 0..3 {
        rhs -= &half * &vlam[i] * &wmu[i];
        rhs -= &half * &vlam[i] * &big_w;
        rhs -= &half * &big_v * &wmu[i];
        for j in 0..3 {
            if i != j {
                rhs += &half * &vlam[i] * &wmu[j];
            }
        }
    }
    rhs += &half * &big_v * &big_w;
    Ok(IdentityReport::equality("rank3_wedge", lhs, rhs))
}

/// The twelve derived invariants of a triple of decomposable elements, plus
/// the two triple wedge norms needed to state coplanarity preconditions.
#[derive(Clone, Debug)]
pub struct TripleInvariants {
    pub lambda_sq: [Rat; 3],
    pub mu_sq: [Rat; 3],
    pub cos_sq_theta: [Rat; 3],
    pub cos_sq_omega: [Rat; 3],
    pub v_wedge3_sq: Rat,
    pub w_wedge3_sq: Rat,
}

pub fn triple_invariants(
    l: &Lattice,
    m: &Lattice,
    vs: &[LatVec; 3],
    ws: &[LatVec; 3],
) -> Result<TripleInvariants> {
    let nv: Vec<Rat> = vs.iter().map(|v| l.norm_sq(v)).collect::<Result<_>>()?;
    let nw: Vec<Rat> = ws.iter().map(|w| m.norm_sq(w)).collect::<Result<_>>()?;
    let mut lambda_sq = [Rat::zero(), Rat::zero(), Rat::zero()];
    let mut mu_sq = [Rat::zero(), Rat::zero(), Rat::zero()];
    let mut cos_sq_theta = [Rat::zero(), Rat::zero(), Rat::zero()];
    let mut cos_sq_omega = [Rat::zero(), Rat::zero(), Rat::zero()];
    for i in 0..3 {
        let (a, b) = others(i);
        lambda_sq[i] = &nv[i] * wedge_gram(l, &[vs[a].clone(), vs[b].clone()])?;
        mu_sq[i] = &nw[i] * wedge_gram(m, &[ws[a].clone(), ws[b].clone()])?;
        let dv = &nv[a] * &nv[b];
        if !dv.is_zero() {
            let p = l.inner(&vs[a], &vs[b])?;
            cos_sq_theta[i] = &p * &p / dv;
        }
        let dw = &nw[a] * &nw[b];
        if !dw.is_zero() {
            let p = m.inner(&ws[a], &ws[b])?;
            cos_sq_omega[i] = &p * &p / dw;
        }
    }
    Ok(TripleInvariants {
        lambda_sq,
        mu_sq,
        cos_sq_theta,
        cos_sq_omega,
        v_wedge3_sq: wedge_gram(l, &[vs[0].clone(), vs[1].clone(), vs[2].clone()])?,
        w_wedge3_sq: wedge_gram(m, &[ws[0].clone(), ws[1].clone(), ws[2].clone()])?,
    })
}

/// For coplanar `v`'s the three lambda invariants satisfy a law-of-cosines
/// relation; checked in fully squared form. The report carries the summed
/// squared residual on the left against zero.
pub fn check_lambda_relation(t: &TripleInvariants) -> Result<IdentityReport> {
    if !t.v_wedge3_sq.is_zero() {
        return Err(LatError::Precondition(
            "lambda relation requires coplanar v vectors".into(),
        ));
    }
    if t.lambda_sq.iter().any(|x| x.is_zero()) {
        return Err(LatError::Precondition(
            "lambda relation requires nonzero, pairwise independent v vectors".into(),
        ));
    }
    let four = Rat::from_integer(Int::from(4));
    let mut residual = Rat::zero();
    for i in 0..3 {
        let (a, b) = others(i);
        let d = &t.lambda_sq[i] - &t.lambda_sq[a] - &t.lambda_sq[b];
        let lhs_i = &d * &d;
        let rhs_i = &four * &t.lambda_sq[a] * &t.lambda_sq[b] * &t.cos_sq_theta[i];
        let diff = lhs_i - rhs_i;
        residual += &diff * &diff;
    }
    Ok(IdentityReport::equality(
        "lambda_relation",
        residual,
        Rat::zero(),
    ))
}

fn require_coplanar_nondegenerate(
    l: &Lattice,
    m: &Lattice,
    vs: &[LatVec; 3],
    ws: &[LatVec; 3],
) -> Result<TripleInvariants> {
    let inv = triple_invariants(l, m, vs, ws)?;
    if !inv.v_wedge3_sq.is_zero() || !inv.w_wedge3_sq.is_zero() {
        return Err(LatError::Precondition(
            "both triples must be coplanar".into(),
        ));
    }
    for i in 0..3 {
        let (a, b) = others(i);
        if wedge_gram(l, &[vs[a].clone(), vs[b].clone()])?.is_zero()
            || wedge_gram(m, &[ws[a].clone(), ws[b].clone()])?.is_zero()
        {
            return Err(LatError::Precondition(
                "no two vectors on either side may be proportional".into(),
            ));
        }
    }
    Ok(inv)
}

/// For coplanar triples on both sides the eighteen-term expansion collapses
/// to a nine-term bilinear form in the lambda and mu invariants.
pub fn check_coplanar_identity(
    l: &Lattice,
    m: &Lattice,
    vs: &[LatVec; 3],
    ws: &[LatVec; 3],
) -> Result<IdentityReport> {
    let inv = require_coplanar_nondegenerate(l, m, vs, ws)?;
    let t = tensor_lattice(l, m);
    let flats: Vec<LatVec> = vs
        .iter()
        .zip(ws.iter())
        .map(|(v, w)| TensorElement::outer(v, w).flatten())
        .collect();
    let lhs = wedge_gram(&t, &flats)?;

    let half = Rat::new(Int::one(), Int::from(2));
    let mut acc = Rat::zero();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                acc -= &inv.lambda_sq[i] * &inv.mu_sq[i];
            } else {
                acc += &inv.lambda_sq[i] * &inv.mu_sq[j];
            }
        }
    }
    let rhs = half * acc;
    Ok(IdentityReport::equality("coplanar_collapse", lhs, rhs))
}

/// Lower bound for the coplanar wedge norm in terms of two mixed products
/// and the sines of the angles between the first two vectors on each side.
pub fn check_coplanar_bound(
    l: &Lattice,
    m: &Lattice,
    vs: &[LatVec; 3],
    ws: &[LatVec; 3],
) -> Result<IdentityReport> {
    let inv = require_coplanar_nondegenerate(l, m, vs, ws)?;
    let t = tensor_lattice(l, m);
    let flats: Vec<LatVec> = vs
        .iter()
        .zip(ws.iter())
        .map(|(v, w)| TensorElement::outer(v, w).flatten())
        .collect();
    let lhs = wedge_gram(&t, &flats)?;
    let one = Rat::one();
    let rhs = &inv.lambda_sq[0] * &inv.mu_sq[1] * (&one - &inv.cos_sq_theta[2])
        + &inv.lambda_sq[1] * &inv.mu_sq[0] * (&one - &inv.cos_sq_omega[2]);
    Ok(IdentityReport::greater_eq("coplanar_bound", lhs, rhs))
}

fn require_pd(m: &RatMatrix, what: &str) -> Result<()> {
    if !m.is_symmetric() {
        return Err(LatError::Precondition(format!("{what} must be symmetric")));
    }
    if !m.is_positive_definite()? {
        return Err(LatError::Precondition(format!(
            "{what} must be positive definite"
        )));
    }
    Ok(())
}

/// The product of two symmetric positive definite matrices has positive
/// spectrum. Decided exactly: the characteristic polynomial of `a·a'` must
/// have strictly alternating coefficient signs.
pub fn spectrum_positive(a: &RatMatrix, a_prime: &RatMatrix) -> Result<bool> {
    require_pd(a, "left factor")?;
    require_pd(a_prime, "right factor")?;
    if a.rows() != a_prime.rows() {
        return Err(LatError::Dimension("factor size mismatch".into()));
    }
    let p = a.mul(a_prime)?.charpoly()?;
    Ok(p.iter().enumerate().all(|(k, c)| {
        if k % 2 == 0 {
            c.is_positive()
        } else {
            c.is_negative()
        }
    }))
}

/// `tr(A A') = |t|^2` for the Gramians of a minimal decomposition of `t`.
pub fn trace_identity_check(
    l: &Lattice,
    m: &Lattice,
    t: &TensorElement,
) -> Result<IdentityReport> {
    let d = minimal_decomposition(t)?;
    let (a, ap) = decomposition_gramians(l, m, &d)?;
    let lhs = a.mul(&ap)?.trace();
    let rhs = tensor_inner(l, m, t, t)?;
    Ok(IdentityReport::equality("trace_identity", lhs, rhs))
}

/// Arithmetic-geometric mean bound for the trace of a product of positive
/// definite Gramians: `tr(a a')^l >= l^l det(a) det(a')`.
pub fn amgm_trace_bound(a: &RatMatrix, a_prime: &RatMatrix) -> Result<IdentityReport> {
    require_pd(a, "left factor")?;
    require_pd(a_prime, "right factor")?;
    if a.rows() != a_prime.rows() {
        return Err(LatError::Dimension("factor size mismatch".into()));
    }
    let l = a.rows();
    let tr = a.mul(a_prime)?.trace();
    let lhs = rat_pow(&tr, l);
    let rhs = Rat::from_integer(int_pow(&Int::from(l as i64), l))
        * a.det()?
        * a_prime.det()?;
    Ok(IdentityReport::greater_eq("amgm_trace", lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, rat};

    fn a2() -> Lattice {
        Lattice::from_gram(RatMatrix::from_i64(&[&[2, 1], &[1, 2]])).unwrap()
    }

    fn z(n: usize) -> Lattice {
        Lattice::standard(n)
    }

    fn v(c: &[i64]) -> LatVec {
        LatVec::from_i64(c)
    }

    #[test]
    fn cross_gram_example() {
        let t = tensor_lattice(&z(2), &z(2));
        let a = TensorElement::from_i64(&[&[1, 0], &[0, 1]]);
        let b = TensorElement::from_i64(&[&[0, 1], &[1, 0]]);
        let rep = check_cross_gram(&t, &a, &b).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, rat(4)); // |a|^2 |b|^2 - 0 = 4
    }

    #[test]
    fn rank2_identity_cases() {
        let rep = check_rank2_identity(
            &z(2),
            &z(2),
            &v(&[1, 0]),
            &v(&[1, 0]),
            &v(&[1, 0]),
            &v(&[0, 1]),
        )
        .unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, rat(1));

        let rep = check_rank2_identity(
            &a2(),
            &a2(),
            &v(&[1, 0]),
            &v(&[0, 1]),
            &v(&[1, 1]),
            &v(&[1, -1]),
        )
        .unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn gramian3_cases() {
        let l = z(3);
        let rep = gramian3_expand(&l, &v(&[1, 0, 0]), &v(&[0, 1, 0]), &v(&[0, 0, 1])).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, rat(1));
        let l = Lattice::from_gram(RatMatrix::from_i64(&[
            &[2, -1, 0],
            &[-1, 2, -1],
            &[0, -1, 2],
        ]))
        .unwrap();
        let rep = gramian3_expand(&l, &v(&[1, 1, 0]), &v(&[0, 1, 1]), &v(&[1, 0, -1])).unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn product_substitution_cases() {
        let l = z(3);
        let rep =
            check_product_substitution(&l, &v(&[1, 1, 0]), &v(&[0, 1, 1]), &v(&[1, 0, 1])).unwrap();
        assert!(rep.holds);
        // also valid for dependent triples
        let rep =
            check_product_substitution(&l, &v(&[1, 0, 0]), &v(&[0, 1, 0]), &v(&[1, 1, 0])).unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn rank3_identity_golden_example() {
        // orthonormal diagonal example: every grouped term is visible
        let l = z(3);
        let m = z(3);
        let vs = [v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        let rep = check_rank3_identity(&l, &m, &vs, &vs).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, rat(1));
        assert_eq!(rep.rhs, rat(1));
    }

    #[test]
    fn rank3_identity_mixed_lattices() {
        let l = a2();
        let m = Lattice::from_gram(RatMatrix::from_i64(&[
            &[2, -1, 0],
            &[-1, 2, -1],
            &[0, -1, 2],
        ]))
        .unwrap();
        let vs = [v(&[1, 0]), v(&[1, 1]), v(&[0, 1])];
        let ws = [v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[1, 1, 1])];
        let rep = check_rank3_identity(&l, &m, &vs, &ws).unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn rank3_identity_degenerate_zero_vector() {
        // a zero vector on either side collapses both sides to zero
        let l = z(3);
        let vs = [v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 0])];
        let ws = [v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        let rep = check_rank3_identity(&l, &l, &vs, &ws).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, rat(0));
        assert_eq!(rep.rhs, rat(0));
    }

    #[test]
    fn rank3_identity_scaling_degree() {
        // scaling v_1 by c multiplies both sides by c^2
        let l = z(3);
        let m = z(3);
        let base = [v(&[1, 1, 0]), v(&[0, 1, 1]), v(&[1, 0, 1])];
        let ws = [v(&[1, 0, 0]), v(&[1, 1, 0]), v(&[0, 1, 1])];
        let rep = check_rank3_identity(&l, &m, &base, &ws).unwrap();
        let scaled = [
            base[0].scale(&Int::from(3)),
            base[1].clone(),
            base[2].clone(),
        ];
        let rep2 = check_rank3_identity(&l, &m, &scaled, &ws).unwrap();
        assert!(rep.holds && rep2.holds);
        assert_eq!(rep2.lhs, rat(9) * &rep.lhs);
        assert_eq!(rep2.rhs, rat(9) * &rep.rhs);
    }

    #[test]
    fn triple_invariants_example() {
        // v3 = v1 + v2 with orthonormal v1, v2
        let l = z(2);
        let vs = [v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        let inv = triple_invariants(&l, &l, &vs, &vs).unwrap();
        assert_eq!(inv.lambda_sq, [rat(1), rat(1), rat(2)]);
        assert_eq!(inv.cos_sq_theta, [frac(1, 2), frac(1, 2), rat(0)]);
        assert_eq!(inv.v_wedge3_sq, rat(0));
    }

    #[test]
    fn lambda_relation_example() {
        let l = z(2);
        let vs = [v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        let inv = triple_invariants(&l, &l, &vs, &vs).unwrap();
        let rep = check_lambda_relation(&inv).unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn lambda_relation_rejects_independent() {
        let l = z(3);
        let vs = [v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        let inv = triple_invariants(&l, &l, &vs, &vs).unwrap();
        assert!(matches!(
            check_lambda_relation(&inv),
            Err(LatError::Precondition(_))
        ));
    }

    #[test]
    fn coplanar_identity_golden_example() {
        let l = z(2);
        let vs = [v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        let rep = check_coplanar_identity(&l, &l, &vs, &vs).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, rat(2));
        assert_eq!(rep.rhs, rat(2));
    }

    #[test]
    fn coplanar_bound_golden_example() {
        let l = z(2);
        let vs = [v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        let rep = check_coplanar_bound(&l, &l, &vs, &vs).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, rat(2));
        assert_eq!(rep.rhs, rat(2)); // orthogonal case is tight
    }

    #[test]
    fn coplanar_checks_reject_proportional_pairs() {
        let l = z(2);
        let vs = [v(&[1, 0]), v(&[2, 0]), v(&[1, 1])];
        let ws = [v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        assert!(matches!(
            check_coplanar_identity(&l, &l, &vs, &ws),
            Err(LatError::Precondition(_))
        ));
    }

    #[test]
    fn spectrum_positive_cases() {
        let a = RatMatrix::from_i64(&[&[2, 1], &[1, 2]]);
        let b = RatMatrix::from_i64(&[&[5, -2], &[-2, 1]]);
        assert!(spectrum_positive(&a, &b).unwrap());
        let not_pd = RatMatrix::from_i64(&[&[1, 2], &[2, 1]]);
        assert!(matches!(
            spectrum_positive(&a, &not_pd),
            Err(LatError::Precondition(_))
        ));
    }

    #[test]
    fn trace_identity_example() {
        let rep = trace_identity_check(
            &a2(),
            &z(2),
            &TensorElement::from_i64(&[&[1, 0], &[0, 1]]),
        )
        .unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, rat(4)); // tr(A2-Gram * I) = 4
    }

    #[test]
    fn amgm_golden_example() {
        let a = RatMatrix::from_i64(&[&[4, 0], &[0, 1]]);
        let b = RatMatrix::identity(2);
        let rep = amgm_trace_bound(&a, &b).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, rat(25));
        assert_eq!(rep.rhs, rat(16));
    }
}
