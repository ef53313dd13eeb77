//! Seeded random instance generators. Every function is a pure function of
//! its seed arguments; resampling loops draw from the same stream, so a
//! fixed seed always yields the same lattice, vector, or triple.

use anyhow::{bail, Result};
use latstab::multilinear::wedge_gram;
use latstab::rat::Int;
use latstab::stability::{is_semistable, VerdictKind};
use latstab::{IntMatrix, LatVec, Lattice, TensorElement};
use num_traits::Zero;
use rand::Rng;

use crate::seeds::{rng_for, trial_seed};

pub fn random_int_matrix(rows: usize, cols: usize, bound: i64, rng: &mut impl Rng) -> IntMatrix {
    let entries: Vec<Int> = (0..rows * cols)
        .map(|_| Int::from(rng.gen_range(-bound..=bound)))
        .collect();
    IntMatrix::new(rows, cols, entries).expect("entry count matches shape")
}

pub fn random_lat_vec(n: usize, bound: i64, rng: &mut impl Rng) -> LatVec {
    LatVec::new((0..n).map(|_| Int::from(rng.gen_range(-bound..=bound))).collect())
}

pub fn nonzero_lat_vec(n: usize, bound: i64, rng: &mut impl Rng) -> LatVec {
    loop {
        let v = random_lat_vec(n, bound, rng);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn nonzero_tensor_element(
    rows: usize,
    cols: usize,
    bound: i64,
    rng: &mut impl Rng,
) -> TensorElement {
    loop {
        let e = TensorElement::new(random_int_matrix(rows, cols, bound, rng));
        if !e.is_zero() {
            return e;
        }
    }
}

/// Gram = BᵀB for a random integer n×n matrix B with entries in
/// [-entry_bound, entry_bound], redrawn until det(B) ≠ 0.
pub fn random_gram(n: usize, entry_bound: i64, seed: u64) -> Lattice {
    assert!(n >= 1 && entry_bound >= 1);
    let mut rng = rng_for(seed);
    loop {
        let b = random_int_matrix(n, n, entry_bound, &mut rng).to_rat();
        if b.det().expect("square").is_zero() {
            continue;
        }
        let gram = b.transpose().mul(&b).expect("matching shapes");
        return Lattice::from_gram(gram).expect("BᵀB of invertible B is positive definite");
    }
}

/// Rejection-samples `random_gram` until the certified verdict accepts,
/// returning the lattice and the number of draws used. Restricted to the
/// ranks where every sublattice search is certified.
pub fn random_semistable(n: usize, seed: u64, max_attempts: u32) -> Result<(Lattice, u32)> {
    if n == 0 || n > 3 {
        bail!("certified semistable sampling supports ranks 1 to 3, got {n}");
    }
    for attempt in 0..max_attempts {
        let l = random_gram(n, 2, trial_seed(seed, u64::from(attempt)));
        let verdict = is_semistable(&l)?;
        if verdict.kind == VerdictKind::Semistable {
            return Ok((l, attempt + 1));
        }
    }
    bail!("no semistable rank-{n} lattice found in {max_attempts} attempts");
}

/// Three pairwise-independent vectors spanning a common plane: integer
/// combinations of two independent draws, with the coefficient pairs kept
/// pairwise non-proportional.
pub fn coplanar_triple(l: &Lattice, bound: i64, rng: &mut impl Rng) -> Result<[LatVec; 3]> {
    let n = l.rank();
    assert!(n >= 2, "coplanar triples need rank at least 2");
    let (u1, u2) = loop {
        let u1 = nonzero_lat_vec(n, bound, rng);
        let u2 = nonzero_lat_vec(n, bound, rng);
        if !wedge_gram(l, &[u1.clone(), u2.clone()])?.is_zero() {
            break (u1, u2);
        }
    };
    'draw: loop {
        let mut cs: Vec<(i64, i64)> = Vec::with_capacity(3);
        for _ in 0..3 {
            loop {
                let c = (rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3));
                if c != (0, 0) {
                    cs.push(c);
                    break;
                }
            }
        }
        for i in 0..3 {
            for j in i + 1..3 {
                if cs[i].0 * cs[j].1 == cs[i].1 * cs[j].0 {
                    continue 'draw;
                }
            }
        }
        let mk = |&(p, q): &(i64, i64)| u1.scale(&Int::from(p)).add(&u2.scale(&Int::from(q)));
        return Ok([mk(&cs[0]), mk(&cs[1]), mk(&cs[2])]);
    }
}
