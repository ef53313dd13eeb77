//! Shortest vectors, minimal covolumes of saturated sublattices of a fixed
//! rank, maximal slopes, semistability verdicts, reduction steps, and the
//! product inequality checks. Every certified result comes from a finite
//! enumeration whose completeness follows from Minkowski's successive minima
//! bounds with the exact Hermite constants for ranks one to three.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_traits::{One, Zero};

use crate::error::{LatError, Result};
use crate::intmat::{hermite_normal_form, integer_kernel, smith_decomposition, IntMatrix};
use crate::lattice::{matrix_to_vecs, vecs_to_matrix, LatVec, Lattice, SlopeExpr};
use crate::matrix::combinations;
use crate::multilinear::{gram_schmidt_sq, tensor_lattice, wedge_gram, TensorElement};
use crate::rat::{frac, int_root_ceil, rat, round_half_toward_zero, round_nearest, Int, Rat};

/// All nonzero lattice vectors of squared norm at most `bound`, one
/// representative per antipodal pair (first nonzero coordinate positive),
/// sorted by squared norm and then by coordinates.
pub fn enumerate_up_to(l: &Lattice, bound: &Rat) -> Result<Vec<(Rat, LatVec)>> {
    let n = l.rank();
    if bound < &Rat::zero() {
        return Ok(Vec::new());
    }
    let units: Vec<LatVec> = (0..n).map(|i| LatVec::unit(n, i)).collect();
    let (mu, bstar) = gram_schmidt_sq(l, &units)?;
    let mut walker = Walker {
        mu: &mu,
        bstar: &bstar,
        bound,
        xs: vec![Int::zero(); n],
        out: std::collections::BTreeSet::new(),
    };
    walker.descend(n as isize - 1, Rat::zero());
    Ok(walker
        .out
        .into_iter()
        .map(|(norm, coords)| (norm, LatVec::new(coords)))
        .collect())
}

struct Walker<'a> {
    mu: &'a crate::matrix::RatMatrix,
    bstar: &'a [Rat],
    bound: &'a Rat,
    xs: Vec<Int>,
    out: std::collections::BTreeSet<(Rat, Vec<Int>)>,
}

impl Walker<'_> {
    fn center(&self, i: usize) -> Rat {
        let mut c = Rat::zero();
        for k in i + 1..self.xs.len() {
            if !self.xs[k].is_zero() {
                c += self.mu.at(k, i) * Rat::from_integer(self.xs[k].clone());
            }
        }
        c
    }

    fn descend(&mut self, level: isize, used: Rat) {
        if level < 0 {
            if self.xs.iter().any(|x| !x.is_zero()) {
                let v = LatVec::new(self.xs.clone()).sign_canonical();
                self.out.insert((used, v.coords().to_vec()));
            }
            return;
        }
        let i = level as usize;
        let c = self.center(i);
        let t0 = round_nearest(&-&c);
        // walk outward from the real center: the contribution is
        // nondecreasing in both directions, so each arm stops at the
        // first overshoot
        let mut t = t0.clone();
        loop {
            let off = Rat::from_integer(t.clone()) + &c;
            let term = &self.bstar[i] * &off * &off;
            let next = &used + &term;
            if &next > self.bound {
                break;
            }
            self.xs[i] = t.clone();
            self.descend(level - 1, next);
            t += 1;
        }
        let mut t = &t0 - &Int::one();
        loop {
            let off = Rat::from_integer(t.clone()) + &c;
            let term = &self.bstar[i] * &off * &off;
            let next = &used + &term;
            if &next > self.bound {
                break;
            }
            self.xs[i] = t.clone();
            self.descend(level - 1, next);
            t -= 1;
        }
        self.xs[i] = Int::zero();
    }
}

/// The minimum of the quadratic form together with every vector attaining
/// it, one per antipodal pair.
pub fn shortest_vectors(l: &Lattice) -> Result<(Rat, Vec<LatVec>)> {
    let n = l.rank();
    let bound = (0..n)
        .map(|i| l.gram().at(i, i).clone())
        .min()
        .expect("positive rank");
    let all = enumerate_up_to(l, &bound)?;
    let min = all[0].0.clone();
    let vecs = all
        .into_iter()
        .take_while(|(nm, _)| *nm == min)
        .map(|(_, v)| v)
        .collect();
    Ok((min, vecs))
}

/// Result of a minimal-covolume search at a fixed sublattice rank.
/// `certified` marks results backed by a complete enumeration argument (or
/// exact duality / determinant identities); uncertified results are upper
/// bounds attained by a concrete witness. `search_bound` is the squared
/// norm up to which vectors were enumerated, when an enumeration ran.
#[derive(Clone, Debug)]
pub struct MinCovol {
    pub rank: usize,
    pub covol_sq: Rat,
    pub gens: Vec<LatVec>,
    pub certified: bool,
    pub search_bound: Option<Rat>,
}

fn consider_tuple(
    l: &Lattice,
    tuple: &[LatVec],
    seen: &mut HashSet<Vec<Vec<Int>>>,
    best_covol: &mut Rat,
    best_gens: &mut Vec<LatVec>,
) -> Result<()> {
    let sat = match l.saturate(tuple) {
        Ok(s) => s,
        Err(LatError::RankDeficient) => return Ok(()),
        Err(e) => return Err(e),
    };
    let key: Vec<Vec<Int>> = sat.iter().map(|v| v.coords().to_vec()).collect();
    if !seen.insert(key) {
        return Ok(());
    }
    let c = l.gens_gram(&sat)?.det()?;
    if c < *best_covol {
        *best_covol = c;
        *best_gens = sat;
    }
    Ok(())
}

/// Complete search for ranks one to three. A minimizing sublattice contains
/// independent vectors realizing its successive minima, and the product of
/// their squared norms is at most `h_r` times its squared covolume, with
/// `h_1 = 1`, `h_2 = 4/3`, `h_3 = 2`. Saturating the span of the minima
/// recovers the sublattice, so sweeping all norm-ordered tuples under these
/// bounds (against a running upper bound for the optimum) is exhaustive.
fn direct_search(l: &Lattice, r: usize) -> Result<MinCovol> {
    let n = l.rank();
    if r == 1 {
        let (min, vecs) = shortest_vectors(l)?;
        let gens = l.saturate(&vecs[0..1])?;
        return Ok(MinCovol {
            rank: 1,
            covol_sq: min.clone(),
            gens,
            certified: true,
            search_bound: Some(min),
        });
    }
    let (m1, minima) = shortest_vectors(l)?;
    // cheap initial upper bound: greedy independent pick among the minima
    // and the coordinate vectors
    let mut seed: Vec<(Rat, LatVec)> = minima.into_iter().map(|v| (m1.clone(), v)).collect();
    seed.extend((0..n).map(|i| (l.gram().at(i, i).clone(), LatVec::unit(n, i))));
    seed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.coords().cmp(b.1.coords())));
    let mut chosen: Vec<LatVec> = Vec::new();
    for (_, v) in &seed {
        if chosen.len() == r {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(v.clone());
        match l.saturate(&trial) {
            Ok(_) => chosen = trial,
            Err(LatError::RankDeficient) => {}
            Err(e) => return Err(e),
        }
    }
    let mut best_gens = l.saturate(&chosen)?;
    let mut best_covol = l.gens_gram(&best_gens)?.det()?;

    let h: Rat = match r {
        2 => frac(4, 3),
        3 => rat(2),
        _ => unreachable!("direct search only covers ranks 2 and 3"),
    };
    // enumeration bound: the loosest per-position norm bound, taking every
    // earlier position at the global minimum
    let hv0 = &h * &best_covol;
    let mut bmax = Rat::from_integer(int_root_ceil(&hv0, r));
    let lvl2 = if r == 2 {
        &hv0 / &m1
    } else {
        Rat::from_integer(int_root_ceil(&(&hv0 / &m1), 2))
    };
    if lvl2 > bmax {
        bmax = lvl2;
    }
    if r == 3 {
        let lvl3 = &hv0 / (&m1 * &m1);
        if lvl3 > bmax {
            bmax = lvl3;
        }
    }
    let list = enumerate_up_to(l, &bmax)?;
    let mut seen: HashSet<Vec<Vec<Int>>> = HashSet::new();

    if r == 2 {
        for i in 0..list.len() {
            let ni = &list[i].0;
            if ni * ni > &h * &best_covol {
                break;
            }
            for j in i + 1..list.len() {
                let nj = &list[j].0;
                if ni * nj > &h * &best_covol {
                    break;
                }
                consider_tuple(
                    l,
                    &[list[i].1.clone(), list[j].1.clone()],
                    &mut seen,
                    &mut best_covol,
                    &mut best_gens,
                )?;
            }
        }
    } else {
        for i in 0..list.len() {
            let ni = &list[i].0;
            if ni * ni * ni > &h * &best_covol {
                break;
            }
            for j in i + 1..list.len() {
                let nj = &list[j].0;
                if ni * nj * nj > &h * &best_covol {
                    break;
                }
                let pair = [list[i].1.clone(), list[j].1.clone()];
                if wedge_gram(l, &pair)?.is_zero() {
                    continue;
                }
                for k in j + 1..list.len() {
                    let nk = &list[k].0;
                    if ni * nj * nk > &h * &best_covol {
                        break;
                    }
                    consider_tuple(
                        l,
                        &[list[i].1.clone(), list[j].1.clone(), list[k].1.clone()],
                        &mut seen,
                        &mut best_covol,
                        &mut best_gens,
                    )?;
                }
            }
        }
    }
    Ok(MinCovol {
        rank: r,
        covol_sq: best_covol,
        gens: best_gens,
        certified: true,
        search_bound: Some(bmax),
    })
}

/// Search through the dual: saturated sublattices of rank `r` correspond to
/// their annihilators of rank `n - r` in the dual lattice, with
/// `covol^2(S) = covol^2(L) * covol^2(S expressed in the dual)`, so the
/// minima correspond as well.
fn dual_search(l: &Lattice, r: usize) -> Result<MinCovol> {
    let n = l.rank();
    let sub = min_covol_sublattice(&l.dual(), n - r)?;
    let kernel = integer_kernel(&vecs_to_matrix(&sub.gens)?);
    let gens = matrix_to_vecs(&kernel);
    let covol_sq = l.covol_sq() * &sub.covol_sq;
    Ok(MinCovol {
        rank: r,
        covol_sq,
        gens,
        certified: sub.certified,
        search_bound: sub.search_bound,
    })
}

/// Uncertified upper bound for middle ranks: saturations of subsets of a
/// short pool of enumerated vectors, plus the coordinate sublattice.
fn heuristic_search(l: &Lattice, r: usize) -> Result<MinCovol> {
    let n = l.rank();
    let units: Vec<LatVec> = (0..r).map(|i| LatVec::unit(n, i)).collect();
    let mut best_gens = l.saturate(&units)?;
    let mut best_covol = l.gens_gram(&best_gens)?.det()?;
    let bound = (0..n)
        .map(|i| l.gram().at(i, i).clone())
        .max()
        .expect("positive rank");
    let mut pool = enumerate_up_to(l, &bound)?;
    let cap = if r <= 4 { 24 } else { 18 };
    pool.truncate(cap);
    let mut seen: HashSet<Vec<Vec<Int>>> = HashSet::new();
    if pool.len() >= r {
        for combo in combinations(pool.len(), r) {
            let tuple: Vec<LatVec> = combo.iter().map(|&i| pool[i].1.clone()).collect();
            consider_tuple(l, &tuple, &mut seen, &mut best_covol, &mut best_gens)?;
        }
    }
    Ok(MinCovol {
        rank: r,
        covol_sq: best_covol,
        gens: best_gens,
        certified: false,
        search_bound: Some(bound),
    })
}

/// Least squared covolume over saturated sublattices of rank `r`.
///
/// Dispatch: the full rank is a determinant; small corank goes through the
/// dual; ranks up to three use the complete direct search; the remaining
/// middle ranks fall back to an uncertified heuristic.
pub fn min_covol_sublattice(l: &Lattice, r: usize) -> Result<MinCovol> {
    let n = l.rank();
    if r == 0 || r > n {
        return Err(LatError::Dimension(format!(
            "sublattice rank {r} out of range for rank {n}"
        )));
    }
    if r == n {
        return Ok(MinCovol {
            rank: r,
            covol_sq: l.covol_sq(),
            gens: (0..n).map(|i| LatVec::unit(n, i)).collect(),
            certified: true,
            search_bound: None,
        });
    }
    if n - r < r {
        return dual_search(l, r);
    }
    if r <= 3 {
        return direct_search(l, r);
    }
    heuristic_search(l, r)
}

#[derive(Clone, Debug)]
pub struct RankRecord {
    pub rank: usize,
    pub covol_sq: Rat,
    pub certified: bool,
    pub search_bound: Option<Rat>,
    pub gens: Vec<LatVec>,
}

#[derive(Clone, Debug)]
pub struct MuMax {
    pub slope: SlopeExpr,
    pub witness_rank: usize,
    pub witness: Vec<LatVec>,
    pub per_rank: Vec<RankRecord>,
    pub certified: bool,
}

/// Maximal slope over saturated sublattices of every rank. On slope ties
/// the witness of the highest rank wins, so a semistable lattice always
/// reports the full lattice as its own maximizer.
pub fn mu_max(l: &Lattice) -> Result<MuMax> {
    let n = l.rank();
    let mut per_rank = Vec::with_capacity(n);
    let mut best: Option<(SlopeExpr, usize, Vec<LatVec>)> = None;
    for r in 1..=n {
        let mc = min_covol_sublattice(l, r)?;
        let s = SlopeExpr::new(mc.covol_sq.clone(), r);
        let replace = match &best {
            None => true,
            Some((bs, _, _)) => s.cmp_slope(bs) != Ordering::Less,
        };
        if replace {
            best = Some((s, r, mc.gens.clone()));
        }
        per_rank.push(RankRecord {
            rank: r,
            covol_sq: mc.covol_sq,
            certified: mc.certified,
            search_bound: mc.search_bound,
            gens: mc.gens,
        });
    }
    let certified = per_rank.iter().all(|p| p.certified);
    let (slope, witness_rank, witness) = best.expect("positive rank");
    Ok(MuMax {
        slope,
        witness_rank,
        witness,
        per_rank,
        certified,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VerdictKind {
    Semistable,
    Unstable,
    /// No destabilizing sublattice was found, but some rank was only
    /// searched heuristically, so semistability is not certified.
    UnknownWithinBound,
}

/// Outcome of a semistability test. An unstable verdict always carries a
/// saturated sublattice of strictly larger slope and is exact regardless of
/// how it was found; a semistable verdict requires every rank certified.
/// `search_bound` is the largest enumeration radius exhausted at any rank.
#[derive(Clone, Debug)]
pub struct StabilityVerdict {
    pub kind: VerdictKind,
    pub mu_max: SlopeExpr,
    pub witness_rank: usize,
    pub witness: Vec<LatVec>,
    pub per_rank: Vec<RankRecord>,
    pub certified: bool,
    pub search_bound: Option<Rat>,
}

pub fn is_semistable(l: &Lattice) -> Result<StabilityVerdict> {
    let mm = mu_max(l)?;
    let kind = if mm.slope.cmp_slope(&l.slope()) == Ordering::Greater {
        VerdictKind::Unstable
    } else if mm.certified {
        VerdictKind::Semistable
    } else {
        VerdictKind::UnknownWithinBound
    };
    let search_bound = mm
        .per_rank
        .iter()
        .filter_map(|p| p.search_bound.clone())
        .max();
    Ok(StabilityVerdict {
        kind,
        mu_max: mm.slope,
        witness_rank: mm.witness_rank,
        witness: mm.witness,
        per_rank: mm.per_rank,
        certified: mm.certified,
        search_bound,
    })
}

/// One Lagrange step: `beta - k*alpha` with `k` the nearest integer to the
/// projection coefficient (half ties leave the input alone), so
/// `2 |<alpha, beta'>| <= |alpha|^2` afterwards. The span is unchanged.
pub fn reduce_rank2(l: &Lattice, alpha: &LatVec, beta: &LatVec) -> Result<(LatVec, Int)> {
    let na = l.norm_sq(alpha)?;
    if na.is_zero() {
        return Err(LatError::ZeroElement);
    }
    if wedge_gram(l, &[alpha.clone(), beta.clone()])?.is_zero() {
        return Err(LatError::RankDeficient);
    }
    let k = round_half_toward_zero(&(l.inner(alpha, beta)? / na));
    Ok((beta.sub_scaled(&k, alpha), k))
}

/// A triple after size reduction of the third vector, together with the
/// squared lengths of its components along the first vector, along the part
/// of the second orthogonal to the first, and orthogonal to both.
#[derive(Clone, Debug)]
pub struct ReducedTriple {
    pub a: LatVec,
    pub b: LatVec,
    pub c: LatVec,
    pub x_sq: Rat,
    pub y_sq: Rat,
    pub z_sq: Rat,
    pub k_b: Int,
    pub k_a: Int,
}

/// Size-reduces `c` against the plane of `a` and `b`: first the coordinate
/// along the orthogonalized `b`, then the coordinate along `a`. Afterwards
/// `4 x_sq <= |a|^2` and `4 y_sq <= |b*|^2`; the out-of-plane part is
/// untouched.
pub fn reduce_rank3(l: &Lattice, a: &LatVec, b: &LatVec, c: &LatVec) -> Result<ReducedTriple> {
    let na = l.norm_sq(a)?;
    if na.is_zero() {
        return Err(LatError::ZeroElement);
    }
    let w2 = wedge_gram(l, &[a.clone(), b.clone()])?;
    if w2.is_zero() {
        return Err(LatError::RankDeficient);
    }
    if wedge_gram(l, &[a.clone(), b.clone(), c.clone()])?.is_zero() {
        return Err(LatError::RankDeficient);
    }
    let mu_b = l.inner(b, a)? / &na;
    let bstar_sq = &w2 / &na;
    let y_coeff = (l.inner(c, b)? - &mu_b * l.inner(c, a)?) / &bstar_sq;
    let k_b = round_half_toward_zero(&y_coeff);
    let c1 = c.sub_scaled(&k_b, b);
    let k_a = round_half_toward_zero(&(l.inner(&c1, a)? / &na));
    let c2 = c1.sub_scaled(&k_a, a);

    let ca = l.inner(&c2, a)?;
    let x_sq = &ca * &ca / &na;
    let cbstar = l.inner(&c2, b)? - &mu_b * &ca;
    let y_sq = &cbstar * &cbstar / &bstar_sq;
    let w3 = wedge_gram(l, &[a.clone(), b.clone(), c2.clone()])?;
    let z_sq = &w3 / &w2;
    Ok(ReducedTriple {
        a: a.clone(),
        b: b.clone(),
        c: c2,
        x_sq,
        y_sq,
        z_sq,
        k_b,
        k_a,
    })
}

/// Slope comparison for a sublattice of a tensor product, stated over the
/// saturation of the span of the given elements. `holds` iff the saturated
/// sublattice's slope does not exceed the slope of the full tensor product.
/// The inequality is the content of the product theorem when both factors
/// are semistable; for unstable factors it can fail.
#[derive(Clone, Debug)]
pub struct TheoremCheck {
    pub sub_rank: usize,
    pub sub_covol_sq: Rat,
    pub sub_slope: SlopeExpr,
    pub total_slope: SlopeExpr,
    pub gens: Vec<LatVec>,
    pub holds: bool,
}

pub fn check_theorem(
    l: &Lattice,
    m: &Lattice,
    elements: &[TensorElement],
) -> Result<TheoremCheck> {
    if elements.is_empty() || elements.len() > 3 {
        return Err(LatError::Precondition(
            "between one and three generators required".into(),
        ));
    }
    let t = tensor_lattice(l, m);
    let flats: Vec<LatVec> = elements.iter().map(|e| e.flatten()).collect();
    let gens = t.saturate(&flats)?;
    let covol = t.gens_gram(&gens)?.det()?;
    let sub_slope = SlopeExpr::new(covol.clone(), gens.len());
    let total_slope = t.slope();
    let holds = sub_slope.cmp_slope(&total_slope) != Ordering::Greater;
    Ok(TheoremCheck {
        sub_rank: gens.len(),
        sub_covol_sq: covol,
        sub_slope,
        total_slope,
        gens,
        holds,
    })
}

/// Annihilator bookkeeping for a saturated sublattice `S` of a tensor
/// product `T`: the vectors pairing to zero with `S` form a saturated
/// sublattice of the dual tensor product with
/// `covol^2(S) = covol^2(T) * covol^2(complement)`. `identity_holds`
/// records that exact equation and is a checked invariant.
#[derive(Clone, Debug)]
pub struct CorankReduction {
    pub sub_gens: Vec<LatVec>,
    pub sub_rank: usize,
    pub complement_gens: Vec<LatVec>,
    pub covol_sq_sub: Rat,
    pub covol_sq_total: Rat,
    pub covol_sq_complement: Rat,
    pub identity_holds: bool,
}

pub fn corank_reduce(
    l: &Lattice,
    m: &Lattice,
    elements: &[TensorElement],
) -> Result<CorankReduction> {
    let t = tensor_lattice(l, m);
    let flats: Vec<LatVec> = elements.iter().map(|e| e.flatten()).collect();
    if flats.is_empty() || flats.iter().any(|v| v.dim() != t.rank()) {
        return Err(LatError::Dimension("bad generator list".into()));
    }
    let snf = smith_decomposition(&vecs_to_matrix(&flats)?);
    let r = snf.rank();
    if r == 0 {
        return Err(LatError::ZeroElement);
    }
    // the generators must already span a saturated sublattice (redundant
    // generating sets are fine, torsion in the quotient is not)
    if snf.diagonal().iter().take(r).any(|d| !d.is_one()) {
        return Err(LatError::NotSaturated);
    }
    if r == t.rank() {
        return Err(LatError::EmptyComplement);
    }
    let rows: Vec<Vec<Int>> = (0..r).map(|i| snf.v.row(i).to_vec()).collect();
    let gens = matrix_to_vecs(&hermite_normal_form(&IntMatrix::from_rows(rows)?));
    let dual_t = tensor_lattice(&l.dual(), &m.dual());
    let kernel = integer_kernel(&vecs_to_matrix(&gens)?);
    let comp = matrix_to_vecs(&kernel);
    let covol_sq_sub = t.gens_gram(&gens)?.det()?;
    let covol_sq_total = t.covol_sq();
    let covol_sq_complement = dual_t.gens_gram(&comp)?.det()?;
    let identity_holds = covol_sq_sub == &covol_sq_total * &covol_sq_complement;
    Ok(CorankReduction {
        sub_rank: gens.len(),
        sub_gens: gens,
        complement_gens: comp,
        covol_sq_sub,
        covol_sq_total,
        covol_sq_complement,
        identity_holds,
    })
}

/// Full semistability verdict for a tensor product of semistable factors of
/// rank pattern (2,2), (2,3) or (3,2). Every minimal covolume involved is
/// certified for these sizes, so `holds` is a proof either way.
#[derive(Clone, Debug)]
pub struct CorollaryCheck {
    pub left: StabilityVerdict,
    pub right: StabilityVerdict,
    pub tensor: StabilityVerdict,
    pub holds: bool,
    pub certified: bool,
}

pub fn check_corollary(l: &Lattice, m: &Lattice) -> Result<CorollaryCheck> {
    let pat = (l.rank(), m.rank());
    if !matches!(pat, (2, 2) | (2, 3) | (3, 2)) {
        return Err(LatError::Precondition(
            "rank pattern must be (2,2), (2,3) or (3,2)".into(),
        ));
    }
    let left = is_semistable(l)?;
    let right = is_semistable(m)?;
    if left.kind == VerdictKind::Unstable || right.kind == VerdictKind::Unstable {
        return Err(LatError::Precondition(
            "both factors must be semistable".into(),
        ));
    }
    let tensor = is_semistable(&tensor_lattice(l, m))?;
    let holds = tensor.kind == VerdictKind::Semistable;
    let certified = left.certified && right.certified && tensor.certified;
    Ok(CorollaryCheck {
        left,
        right,
        tensor,
        holds,
        certified,
    })
}
