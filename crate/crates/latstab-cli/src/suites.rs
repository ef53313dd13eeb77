//! Fuzz suites and batch verification runs. Trials are independent, seeded
//! per index, and executed in parallel; reports are assembled in trial
//! order, so output is identical for any thread count.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use anyhow::{bail, Context, Result};
use latstab::identities::{
    amgm_trace_bound, check_coplanar_bound, check_coplanar_identity, check_cross_gram,
    check_lambda_relation, check_product_substitution, check_rank2_identity,
    check_rank3_identity, gramian3_expand, spectrum_positive, trace_identity_check,
    triple_invariants, IdentityReport,
};
use latstab::multilinear::tensor_lattice;
use latstab::rat::format_rat;
use latstab::stability::{check_corollary, check_theorem, is_semistable, min_covol_sublattice, mu_max};
use latstab::{LatError, LatVec, Lattice, MinCovol, MuMax, RankRecord, SlopeExpr, VerdictKind};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::gen::{
    coplanar_triple, nonzero_lat_vec, nonzero_tensor_element, random_gram, random_semistable,
};
use crate::io::LatticeFile;
use crate::report::{
    bump, element_to_json, gram_to_json, make_violation, slope_detail, vecs_to_json, RunReport,
    Violation,
};
use crate::seeds::{rng_for, trial_seed};

/// Fixed seed for the box refinement behind `mumax --mode heuristic`, so the
/// command is deterministic without taking a seed flag.
const BOX_SEED: u64 = 0x006C_6174_7374_6162;

#[derive(Default)]
struct TrialOut {
    counts: BTreeMap<String, u64>,
    violations: Vec<Violation>,
    all_certified: bool,
}

fn merge_trials(report: &mut RunReport, trials: Vec<TrialOut>) {
    for t in trials {
        report.add_cases(&t.counts);
        report.violations.extend(t.violations);
        report.certified &= t.all_certified;
    }
}

pub struct IdentityParams {
    pub trials: u64,
    pub ranks: Vec<usize>,
    pub bound: i64,
    pub seed: u64,
}

fn record(out: &mut TrialOut, trial: u64, rep: IdentityReport, mut inputs: Value) {
    bump(&mut out.counts, &rep.name);
    if !rep.holds {
        inputs["identity"] = json!(rep.name);
        inputs["lhs"] = json!(format_rat(&rep.lhs));
        inputs["rhs"] = json!(format_rat(&rep.rhs));
        out.violations
            .push(make_violation(trial, "identity_failure", inputs));
    }
}

fn identity_trial(p: &IdentityParams, trial: u64) -> Result<TrialOut> {
    let mut rng = rng_for(trial_seed(p.seed, trial));
    let mut out = TrialOut {
        all_certified: true,
        ..TrialOut::default()
    };
    let b = p.bound;

    let rank_l = p.ranks[rng.gen_range(0..p.ranks.len())];
    let rank_m = p.ranks[rng.gen_range(0..p.ranks.len())];
    let left = random_gram(rank_l, 2, rng.gen());
    let right = random_gram(rank_m, 2, rng.gen());
    let lf = LatticeFile::from_lattice(None, &left);
    let rf = LatticeFile::from_lattice(None, &right);
    let tl = tensor_lattice(&left, &right);
    let pair = json!({ "left": &lf, "right": &rf });

    let a = nonzero_tensor_element(rank_l, rank_m, b, &mut rng);
    let b2 = nonzero_tensor_element(rank_l, rank_m, b, &mut rng);
    let mut inputs = pair.clone();
    inputs["elements"] = json!([element_to_json(&a), element_to_json(&b2)]);
    record(&mut out, trial, check_cross_gram(&tl, &a, &b2)?, inputs);

    let vs: Vec<LatVec> = (0..4)
        .map(|i| nonzero_lat_vec(if i < 2 { rank_l } else { rank_m }, b, &mut rng))
        .collect();
    let mut inputs = pair.clone();
    inputs["vectors"] = vecs_to_json(&vs);
    record(
        &mut out,
        trial,
        check_rank2_identity(&left, &right, &vs[0], &vs[1], &vs[2], &vs[3])?,
        inputs,
    );

    let vs: Vec<LatVec> = (0..3).map(|_| nonzero_lat_vec(rank_l, b, &mut rng)).collect();
    let mut inputs = json!({ "left": &lf });
    inputs["vectors"] = vecs_to_json(&vs);
    record(
        &mut out,
        trial,
        gramian3_expand(&left, &vs[0], &vs[1], &vs[2])?,
        inputs,
    );

    let vs: Vec<LatVec> = (0..3).map(|_| nonzero_lat_vec(rank_l, b, &mut rng)).collect();
    let mut inputs = json!({ "left": &lf });
    inputs["vectors"] = vecs_to_json(&vs);
    record(
        &mut out,
        trial,
        check_product_substitution(&left, &vs[0], &vs[1], &vs[2])?,
        inputs,
    );

    let v3: Vec<LatVec> = (0..3).map(|_| nonzero_lat_vec(rank_l, b, &mut rng)).collect();
    let w3: Vec<LatVec> = (0..3).map(|_| nonzero_lat_vec(rank_m, b, &mut rng)).collect();
    let v3: [LatVec; 3] = v3.try_into().expect("three draws");
    let w3: [LatVec; 3] = w3.try_into().expect("three draws");
    let mut inputs = pair.clone();
    inputs["vectors"] = vecs_to_json(&[v3.as_slice(), w3.as_slice()].concat());
    record(
        &mut out,
        trial,
        check_rank3_identity(&left, &right, &v3, &w3)?,
        inputs,
    );

    let v3 = coplanar_triple(&left, b, &mut rng)?;
    let w3 = coplanar_triple(&right, b, &mut rng)?;
    let coplanar_inputs = {
        let mut i = pair.clone();
        i["vectors"] = vecs_to_json(&[v3.as_slice(), w3.as_slice()].concat());
        i
    };
    let inv = triple_invariants(&left, &right, &v3, &w3)?;
    record(
        &mut out,
        trial,
        check_lambda_relation(&inv)?,
        coplanar_inputs.clone(),
    );
    record(
        &mut out,
        trial,
        check_coplanar_identity(&left, &right, &v3, &w3)?,
        coplanar_inputs.clone(),
    );
    record(
        &mut out,
        trial,
        check_coplanar_bound(&left, &right, &v3, &w3)?,
        coplanar_inputs,
    );

    let k = p.ranks[rng.gen_range(0..p.ranks.len())];
    let ga = random_gram(k, 2, rng.gen()).gram().clone();
    let gb = random_gram(k, 2, rng.gen()).gram().clone();
    let gram_inputs = json!({ "grams": [gram_to_json(&ga), gram_to_json(&gb)] });
    bump(&mut out.counts, "spectrum_positive");
    if !spectrum_positive(&ga, &gb)? {
        let mut inputs = gram_inputs.clone();
        inputs["identity"] = json!("spectrum_positive");
        inputs["lhs"] = json!("false");
        inputs["rhs"] = json!("true");
        out.violations
            .push(make_violation(trial, "identity_failure", inputs));
    }
    record(
        &mut out,
        trial,
        amgm_trace_bound(&ga, &gb)?,
        gram_inputs,
    );

    let e = nonzero_tensor_element(rank_l, rank_m, b, &mut rng);
    let mut inputs = pair.clone();
    inputs["elements"] = json!([element_to_json(&e)]);
    record(
        &mut out,
        trial,
        trace_identity_check(&left, &right, &e)?,
        inputs,
    );

    Ok(out)
}

/// Fuzzes every identity check with fresh random instances per trial.
pub fn run_identity_suite(p: &IdentityParams) -> Result<RunReport> {
    if p.ranks.is_empty() || p.ranks.iter().any(|&r| !(2..=6).contains(&r)) {
        bail!("factor ranks must lie in 2..=6");
    }
    if p.bound < 1 {
        bail!("coefficient bound must be at least 1");
    }
    let ranks_str = p
        .ranks
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let command = format!(
        "identities --trials {} --ranks {} --bound {} --seed {}",
        p.trials, ranks_str, p.bound, p.seed
    );
    let mut report = RunReport::new(command, Some(p.seed), Some(p.trials));
    let trials: Vec<TrialOut> = (0..p.trials)
        .into_par_iter()
        .map(|t| identity_trial(p, t))
        .collect::<Result<_>>()?;
    merge_trials(&mut report, trials);
    Ok(report)
}

pub struct TheoremParams {
    pub trials: u64,
    pub max_rank: usize,
    pub bound: i64,
    pub seed: u64,
}

fn require_certified_semistable(label: &str, l: &Lattice) -> Result<()> {
    let v = is_semistable(l).with_context(|| format!("checking {label}"))?;
    match v.kind {
        VerdictKind::Semistable => Ok(()),
        VerdictKind::Unstable => bail!(
            "{label} is unstable: witness rank {} with covol_sq {} (gens {})",
            v.witness_rank,
            format_rat(&v.mu_max.covol_sq),
            serde_json::to_string(&vecs_to_json(&v.witness)).expect("witness serializes"),
        ),
        VerdictKind::UnknownWithinBound => bail!(
            "{label} could not be certified semistable at its rank; \
             only certified inputs are accepted"
        ),
    }
}

fn theorem_trial(
    l: &Lattice,
    m: &Lattice,
    lf: &LatticeFile,
    mf: &LatticeFile,
    t: &Lattice,
    p: &TheoremParams,
    trial: u64,
) -> Result<TrialOut> {
    let mut rng = rng_for(trial_seed(p.seed, trial));
    let mut out = TrialOut {
        all_certified: true,
        ..TrialOut::default()
    };
    let k = rng.gen_range(1..=p.max_rank);
    for _ in 0..64 {
        let elems: Vec<_> = (0..k)
            .map(|_| nonzero_tensor_element(l.rank(), m.rank(), p.bound, &mut rng))
            .collect();
        match check_theorem(l, m, &elems) {
            Ok(chk) => {
                bump(&mut out.counts, "checked");
                bump(&mut out.counts, &format!("rank{}", chk.sub_rank));
                if !chk.holds {
                    out.violations.push(make_violation(
                        trial,
                        "slope_violation",
                        slope_detail(
                            lf,
                            mf,
                            &chk.gens,
                            &chk.sub_covol_sq,
                            &t.covol_sq(),
                            t.rank(),
                        ),
                    ));
                }
                return Ok(out);
            }
            Err(LatError::RankDeficient) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    bump(&mut out.counts, "skipped_dependent");
    Ok(out)
}

/// Samples random sublattices of L⊗M of rank ≤ max_rank and checks the
/// slope bound on each. Inputs must be certified semistable.
pub fn run_theorem_suite(
    lpath: &str,
    mpath: &str,
    l: &Lattice,
    lf: &LatticeFile,
    m: &Lattice,
    mf: &LatticeFile,
    p: &TheoremParams,
) -> Result<RunReport> {
    if !(1..=3).contains(&p.max_rank) {
        bail!("--max-rank must lie in 1..=3");
    }
    if p.bound < 1 {
        bail!("coefficient bound must be at least 1");
    }
    require_certified_semistable(lpath, l)?;
    require_certified_semistable(mpath, m)?;
    let t = tensor_lattice(l, m);
    let command = format!(
        "theorem {} {} --trials {} --max-rank {} --bound {} --seed {}",
        lpath, mpath, p.trials, p.max_rank, p.bound, p.seed
    );
    let mut report = RunReport::new(command, Some(p.seed), Some(p.trials));
    let trials: Vec<TrialOut> = (0..p.trials)
        .into_par_iter()
        .map(|i| theorem_trial(l, m, lf, mf, &t, p, i))
        .collect::<Result<_>>()?;
    merge_trials(&mut report, trials);
    Ok(report)
}

/// Full certified semistability verdict for a small tensor product. An
/// Unstable outcome is flagged loudly: it would contradict the corollary
/// this suite exists to stress.
pub fn run_corollary(
    lpath: &str,
    mpath: &str,
    l: &Lattice,
    lf: &LatticeFile,
    m: &Lattice,
    mf: &LatticeFile,
) -> Result<RunReport> {
    let chk = check_corollary(l, m)?;
    let t = tensor_lattice(l, m);
    let command = format!("corollary {lpath} {mpath}");
    let mut report = RunReport::new(command, None, None);
    report.certified = chk.certified;
    report.cases.insert("left_rank".into(), l.rank() as u64);
    report.cases.insert("right_rank".into(), m.rank() as u64);
    report.cases.insert("tensor_rank".into(), t.rank() as u64);
    report.cases.insert(
        "tensor_ranks_checked".into(),
        chk.tensor.per_rank.len() as u64,
    );
    match chk.tensor.kind {
        VerdictKind::Semistable => {
            report.note = Some("tensor product is certified semistable".into());
        }
        VerdictKind::Unstable => {
            report.note = Some(
                "POSSIBLE FALSIFICATION: certified destabilizing sublattice found \
                 in a tensor product of semistable lattices; witness below"
                    .into(),
            );
            report.violations.push(make_violation(
                0,
                "corollary_falsification",
                slope_detail(
                    lf,
                    mf,
                    &chk.tensor.witness,
                    &chk.tensor.mu_max.covol_sq,
                    &t.covol_sq(),
                    t.rank(),
                ),
            ));
        }
        VerdictKind::UnknownWithinBound => {
            bail!("tensor verdict unexpectedly uncertified at this rank pattern")
        }
    }
    Ok(report)
}

/// Box search over saturations of random generator tuples; keeps the best
/// record seen. Output is marked heuristic regardless of improvement.
pub fn refine_box(
    l: &Lattice,
    mut best: MinCovol,
    box_bound: i64,
    tuples: u64,
    seed: u64,
) -> Result<MinCovol> {
    if box_bound < 1 {
        bail!("--box must be at least 1");
    }
    let r = best.rank;
    let n = l.rank();
    let mut rng = rng_for(seed);
    let mut seen: HashSet<Vec<String>> = HashSet::new();
    for _ in 0..tuples {
        let gens: Vec<LatVec> = (0..r).map(|_| nonzero_lat_vec(n, box_bound, &mut rng)).collect();
        let sat = match l.saturate(&gens) {
            Ok(s) => s,
            Err(_) => continue,
        };
        if sat.len() != r {
            continue;
        }
        let key: Vec<String> = sat
            .iter()
            .flat_map(|v| v.coords().iter().map(|c| c.to_string()))
            .collect();
        if !seen.insert(key) {
            continue;
        }
        let covol = l.gens_gram(&sat)?.det()?;
        if covol < best.covol_sq {
            best = MinCovol {
                rank: r,
                covol_sq: covol,
                gens: sat,
                certified: false,
                search_bound: best.search_bound.clone(),
            };
        }
    }
    best.certified = false;
    Ok(best)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SearchMode {
    Certified,
    Heuristic,
}

/// μ_max with the CLI's mode policy applied: certified mode refuses
/// uncertified ranks, heuristic mode refines them with a fixed-seed box
/// search and keeps the verdict honest about what was certified.
pub fn mu_max_refined(l: &Lattice, mode: SearchMode, box_bound: i64) -> Result<MuMax> {
    let mm = mu_max(l)?;
    if mm.certified {
        return Ok(mm);
    }
    if mode == SearchMode::Certified {
        let ranks: Vec<String> = mm
            .per_rank
            .iter()
            .filter(|r| !r.certified)
            .map(|r| r.rank.to_string())
            .collect();
        bail!(
            "sublattice ranks {} exceed the certified search range; \
             rerun with --mode heuristic",
            ranks.join(",")
        );
    }
    let mut records: Vec<RankRecord> = Vec::with_capacity(mm.per_rank.len());
    for rec in &mm.per_rank {
        if rec.certified {
            records.push(rec.clone());
            continue;
        }
        let refined = refine_box(
            l,
            MinCovol {
                rank: rec.rank,
                covol_sq: rec.covol_sq.clone(),
                gens: rec.gens.clone(),
                certified: false,
                search_bound: rec.search_bound.clone(),
            },
            box_bound,
            800,
            BOX_SEED ^ rec.rank as u64,
        )?;
        records.push(RankRecord {
            rank: refined.rank,
            covol_sq: refined.covol_sq,
            certified: false,
            search_bound: refined.search_bound,
            gens: refined.gens,
        });
    }
    let mut best = 0;
    let mut best_slope = SlopeExpr::new(records[0].covol_sq.clone(), records[0].rank);
    for (i, rec) in records.iter().enumerate().skip(1) {
        let s = SlopeExpr::new(rec.covol_sq.clone(), rec.rank);
        if s.cmp_slope(&best_slope) != Ordering::Less {
            best_slope = s;
            best = i;
        }
    }
    Ok(MuMax {
        slope: best_slope,
        witness_rank: records[best].rank,
        witness: records[best].gens.clone(),
        per_rank: records,
        certified: false,
    })
}

pub struct SearchParams {
    pub n: usize,
    pub m: usize,
    pub trials: u64,
    pub seed: u64,
    pub mode: SearchMode,
    pub box_bound: i64,
}

fn search_trial(p: &SearchParams, trial: u64) -> Result<TrialOut> {
    let base = trial * 16;
    let mut out = TrialOut {
        all_certified: true,
        ..TrialOut::default()
    };
    let (l, la) = random_semistable(p.n, trial_seed(p.seed, base), 256)?;
    let (m, ma) = random_semistable(p.m, trial_seed(p.seed, base + 1), 256)?;
    *out.counts.entry("sampling_attempts".into()).or_insert(0) += u64::from(la + ma);
    bump(&mut out.counts, "pairs");
    let lf = LatticeFile::from_lattice(None, &l);
    let mf = LatticeFile::from_lattice(None, &m);
    let t = tensor_lattice(&l, &m);
    let total = t.slope();
    for r in 1..=t.rank() {
        let mut mc = min_covol_sublattice(&t, r)?;
        if mc.certified {
            bump(&mut out.counts, &format!("rank{r}_certified"));
        } else {
            if p.mode == SearchMode::Certified {
                bail!(
                    "tensor rank {r} exceeds the certified search range for \
                     factor ranks ({}, {}); rerun with --mode heuristic",
                    p.n,
                    p.m
                );
            }
            mc = refine_box(&t, mc, p.box_bound, 400, trial_seed(p.seed, base + 2 + r as u64))?;
            bump(&mut out.counts, &format!("rank{r}_heuristic"));
            out.all_certified = false;
        }
        let sub = SlopeExpr::new(mc.covol_sq.clone(), r);
        if sub.cmp_slope(&total) == Ordering::Greater {
            out.violations.push(make_violation(
                trial,
                "slope_violation",
                slope_detail(&lf, &mf, &mc.gens, &mc.covol_sq, &t.covol_sq(), t.rank()),
            ));
        }
    }
    Ok(out)
}

/// Draws certified-semistable factor pairs and hunts for destabilizing
/// sublattices in their tensor product at every rank.
pub fn search_counterexample(p: &SearchParams) -> Result<RunReport> {
    if p.n == 0 || p.n > 3 || p.m == 0 || p.m > 3 {
        bail!("factor ranks must lie in 1..=3 (certified sampling regime)");
    }
    let mode_str = match p.mode {
        SearchMode::Certified => "certified",
        SearchMode::Heuristic => "heuristic",
    };
    let command = format!(
        "search --n {} --m {} --trials {} --seed {} --mode {} --box {}",
        p.n, p.m, p.trials, p.seed, mode_str, p.box_bound
    );
    let mut report = RunReport::new(command, Some(p.seed), Some(p.trials));
    let trials: Vec<TrialOut> = (0..p.trials)
        .into_par_iter()
        .map(|i| search_trial(p, i))
        .collect::<Result<_>>()?;
    merge_trials(&mut report, trials);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use latstab::rat::rat;

    fn file_of(l: &Lattice, name: &str) -> LatticeFile {
        LatticeFile::from_lattice(Some(name.into()), l)
    }

    fn a2() -> Lattice {
        let f = LatticeFile {
            name: None,
            rank: 2,
            gram: vec![
                vec!["2".into(), "-1".into()],
                vec!["-1".into(), "2".into()],
            ],
        };
        f.to_lattice().unwrap()
    }

    fn skew() -> Lattice {
        let f = LatticeFile {
            name: None,
            rank: 2,
            gram: vec![
                vec!["1/4".into(), "0".into()],
                vec!["0".into(), "4".into()],
            ],
        };
        f.to_lattice().unwrap()
    }

    #[test]
    fn identity_suite_small_run_is_clean() {
        let p = IdentityParams {
            trials: 6,
            ranks: vec![2, 3],
            bound: 3,
            seed: 11,
        };
        let r = run_identity_suite(&p).unwrap();
        assert!(r.violations.is_empty());
        assert!(r.certified);
        assert_eq!(r.exit_code(), 0);
        for key in [
            "cross_gram",
            "rank2_wedge",
            "gramian3_expansion",
            "product_substitution",
            "rank3_wedge",
            "lambda_relation",
            "coplanar_collapse",
            "coplanar_bound",
            "spectrum_positive",
            "amgm_trace",
            "trace_identity",
        ] {
            assert_eq!(r.cases[key], 6, "{key}");
        }
    }

    #[test]
    fn identity_suite_zero_trials_is_empty() {
        let p = IdentityParams {
            trials: 0,
            ranks: vec![2],
            bound: 5,
            seed: 0,
        };
        let r = run_identity_suite(&p).unwrap();
        assert!(r.cases.is_empty());
        assert!(r.violations.is_empty());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn identity_suite_is_deterministic() {
        let p = IdentityParams {
            trials: 4,
            ranks: vec![2, 4],
            bound: 5,
            seed: 3,
        };
        let a = run_identity_suite(&p).unwrap().render(true);
        let b = run_identity_suite(&p).unwrap().render(true);
        assert_eq!(a, b);
    }

    #[test]
    fn identity_suite_rejects_bad_params() {
        let p = IdentityParams {
            trials: 1,
            ranks: vec![1],
            bound: 5,
            seed: 0,
        };
        assert!(run_identity_suite(&p).is_err());
        let p = IdentityParams {
            trials: 1,
            ranks: vec![],
            bound: 5,
            seed: 0,
        };
        assert!(run_identity_suite(&p).is_err());
    }

    #[test]
    fn theorem_suite_passes_on_root_lattices() {
        let l = a2();
        let m = Lattice::standard(2);
        let p = TheoremParams {
            trials: 25,
            max_rank: 3,
            bound: 2,
            seed: 5,
        };
        let r = run_theorem_suite(
            "a2.json",
            "z2.json",
            &l,
            &file_of(&l, "a2"),
            &m,
            &file_of(&m, "z2"),
            &p,
        )
        .unwrap();
        assert!(r.violations.is_empty());
        assert_eq!(r.cases["checked"], 25);
        let by_rank: u64 = (1..=3)
            .map(|k| r.cases.get(&format!("rank{k}")).copied().unwrap_or(0))
            .sum();
        assert_eq!(by_rank, 25);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn theorem_suite_rejects_unstable_input() {
        let l = skew();
        let m = Lattice::standard(1);
        let p = TheoremParams {
            trials: 1,
            max_rank: 1,
            bound: 1,
            seed: 0,
        };
        let err = run_theorem_suite(
            "skew.json",
            "z1.json",
            &l,
            &file_of(&l, "skew"),
            &m,
            &file_of(&m, "z1"),
            &p,
        )
        .unwrap_err();
        let msg = format!("{err:#}");
        assert!(msg.contains("unstable"), "{msg}");
        assert!(msg.contains("witness"), "{msg}");
    }

    #[test]
    fn corollary_certifies_standard_square() {
        let l = Lattice::standard(2);
        let r = run_corollary(
            "z2.json",
            "z2.json",
            &l,
            &file_of(&l, "z2"),
            &l,
            &file_of(&l, "z2"),
        )
        .unwrap();
        assert!(r.violations.is_empty());
        assert!(r.certified);
        assert_eq!(r.cases["tensor_rank"], 4);
        assert_eq!(
            r.note.as_deref(),
            Some("tensor product is certified semistable")
        );
    }

    #[test]
    fn corollary_rejects_bad_inputs() {
        let l = Lattice::standard(4);
        let m = Lattice::standard(2);
        assert!(run_corollary(
            "z4.json",
            "z2.json",
            &l,
            &file_of(&l, "z4"),
            &m,
            &file_of(&m, "z2"),
        )
        .is_err());

        let s = skew();
        assert!(run_corollary(
            "skew.json",
            "z2.json",
            &s,
            &file_of(&s, "skew"),
            &m,
            &file_of(&m, "z2"),
        )
        .is_err());
    }

    #[test]
    fn refine_box_never_worsens() {
        let l = Lattice::standard(5);
        let start = MinCovol {
            rank: 2,
            covol_sq: rat(100),
            gens: vec![LatVec::from_i64(&[1, 1, 0, 0, 0]), LatVec::from_i64(&[0, 0, 1, 1, 0])],
            certified: false,
            search_bound: None,
        };
        let out = refine_box(&l, start, 1, 200, 7).unwrap();
        assert!(out.covol_sq <= rat(100));
        assert!(!out.certified);
        assert_eq!(out.gens.len(), 2);
        assert!(refine_box(&l, out, 0, 10, 7).is_err());
    }

    #[test]
    fn refine_box_finds_a_unit_vector() {
        // 3000 box-1 draws in Z^5 miss every signed unit vector with
        // probability well under 1e-50.
        let l = Lattice::standard(5);
        let start = MinCovol {
            rank: 1,
            covol_sq: rat(100),
            gens: vec![LatVec::from_i64(&[1, 1, 1, 0, 0])],
            certified: false,
            search_bound: None,
        };
        let out = refine_box(&l, start, 1, 3000, 7).unwrap();
        assert_eq!(out.covol_sq, rat(1));
    }

    #[test]
    fn mu_max_refined_modes() {
        // Certified everywhere: both modes agree with the library.
        let l = a2();
        let mm = mu_max_refined(&l, SearchMode::Certified, 2).unwrap();
        assert!(mm.certified);
        assert_eq!(mm.slope.covol_sq, rat(3));
        assert_eq!(mm.witness_rank, 2);

        // Z^8 has uncertified middle ranks: certified mode refuses, heuristic
        // mode still finds covol_sq 1 at every rank.
        let z8 = Lattice::standard(8);
        assert!(mu_max_refined(&z8, SearchMode::Certified, 2).is_err());
        let mm = mu_max_refined(&z8, SearchMode::Heuristic, 1).unwrap();
        assert!(!mm.certified);
        assert_eq!(mm.slope.covol_sq, rat(1));
        for rec in &mm.per_rank {
            assert_eq!(rec.covol_sq, rat(1), "rank {}", rec.rank);
        }
    }

    #[test]
    fn search_2x2_is_clean_and_certified() {
        let p = SearchParams {
            n: 2,
            m: 2,
            trials: 2,
            seed: 9,
            mode: SearchMode::Certified,
            box_bound: 2,
        };
        let r = search_counterexample(&p).unwrap();
        assert!(r.violations.is_empty());
        assert!(r.certified);
        assert_eq!(r.cases["pairs"], 2);
        assert_eq!(r.cases["rank1_certified"], 2);
        assert_eq!(r.cases["rank4_certified"], 2);
        assert!(r.cases["sampling_attempts"] >= 4);
    }

    #[test]
    fn search_rejects_large_factor_ranks() {
        let p = SearchParams {
            n: 4,
            m: 2,
            trials: 1,
            seed: 0,
            mode: SearchMode::Heuristic,
            box_bound: 2,
        };
        assert!(search_counterexample(&p).is_err());
    }

    #[test]
    fn search_trials_zero_is_empty() {
        let p = SearchParams {
            n: 1,
            m: 1,
            trials: 0,
            seed: 0,
            mode: SearchMode::Certified,
            box_bound: 2,
        };
        let r = search_counterexample(&p).unwrap();
        assert!(r.cases.is_empty());
        assert!(r.violations.is_empty());
    }
}
