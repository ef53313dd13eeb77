//! Run reports and the closed-loop violation checker. Every violation a
//! suite wants to publish is first rebuilt from its own serialized detail
//! and re-checked with exact arithmetic; the outcome lands in the
//! `reverified` flag, so a report never carries a witness that cannot be
//! reproduced from the report alone.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use latstab::identities::{
    amgm_trace_bound, check_coplanar_bound, check_coplanar_identity, check_cross_gram,
    check_lambda_relation, check_product_substitution, check_rank2_identity,
    check_rank3_identity, gramian3_expand, spectrum_positive, trace_identity_check,
    triple_invariants,
};
use latstab::multilinear::tensor_lattice;
use latstab::rat::{format_rat, parse_rat, Int, Rat};
use latstab::{IntMatrix, LatVec, Lattice, RatMatrix, SlopeExpr, TensorElement};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::io::LatticeFile;

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct Violation {
    pub trial: u64,
    pub kind: String,
    pub detail: Value,
    pub reverified: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct RunReport {
    pub command: String,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub certified: bool,
    pub cases: BTreeMap<String, u64>,
    pub violations: Vec<Violation>,
    pub timing_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl RunReport {
    pub fn new(command: String, seed: Option<u64>, trials: Option<u64>) -> RunReport {
        RunReport {
            command,
            seed,
            trials,
            certified: true,
            cases: BTreeMap::new(),
            violations: Vec::new(),
            timing_ms: None,
            note: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, json_format: bool) -> String {
        if json_format {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        if let Some(note) = &self.note {
            out.push_str(&format!("note: {note}\n"));
        }
        match self.seed {
            Some(s) => out.push_str(&format!("seed: {s}\n")),
            None => out.push_str("seed: none\n"),
        }
        match self.trials {
            Some(t) => out.push_str(&format!("trials: {t}\n")),
            None => out.push_str("trials: none\n"),
        }
        out.push_str(&format!("certified: {}\n", self.certified));
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("timing_ms: {ms}\n"));
        }
        out.push_str("cases:\n");
        for (name, count) in &self.cases {
            out.push_str(&format!("  {name}: {count}\n"));
        }
        out.push_str(&format!("violations: {}\n", self.violations.len()));
        for v in &self.violations {
            out.push_str(&format!(
                "  trial {} kind {} reverified {}\n    {}\n",
                v.trial,
                v.kind,
                v.reverified,
                serde_json::to_string(&v.detail).expect("detail serializes")
            ));
        }
        out
    }

    pub fn add_cases(&mut self, counts: &BTreeMap<String, u64>) {
        for (k, n) in counts {
            *self.cases.entry(k.clone()).or_insert(0) += n;
        }
    }
}

pub fn bump(counts: &mut BTreeMap<String, u64>, key: &str) {
    *counts.entry(key.to_string()).or_insert(0) += 1;
}

fn vec_to_json(v: &LatVec) -> Value {
    Value::Array(
        v.coords()
            .iter()
            .map(|c| Value::String(c.to_string()))
            .collect(),
    )
}

pub fn vecs_to_json(vs: &[LatVec]) -> Value {
    Value::Array(vs.iter().map(vec_to_json).collect())
}

pub fn element_to_json(e: &TensorElement) -> Value {
    let m = e.coeffs();
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(m.at(i, j).to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn gram_to_json(g: &RatMatrix) -> Value {
    Value::Array(
        (0..g.rows())
            .map(|i| {
                Value::Array(
                    (0..g.cols())
                        .map(|j| Value::String(format_rat(g.at(i, j))))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Detail payload for a slope violation: enough to rebuild the tensor
/// lattice and the sublattice and redo the comparison from scratch.
pub fn slope_detail(
    left: &LatticeFile,
    right: &LatticeFile,
    gens: &[LatVec],
    sub_covol_sq: &Rat,
    total_covol_sq: &Rat,
    total_rank: usize,
) -> Value {
    json!({
        "left": left,
        "right": right,
        "gens": vecs_to_json(gens),
        "sub_rank": gens.len(),
        "sub_covol_sq": format_rat(sub_covol_sq),
        "total_covol_sq": format_rat(total_covol_sq),
        "total_rank": total_rank,
    })
}

/// Builds a violation and immediately runs the closed-loop recheck on it.
pub fn make_violation(trial: u64, kind: &str, detail: Value) -> Violation {
    let reverified = reverify(kind, &detail);
    Violation {
        trial,
        kind: kind.to_string(),
        detail,
        reverified,
    }
}

/// Rebuilds the instance named by a violation's serialized detail and
/// re-checks it. Returns true only if the violation reproduces exactly.
pub fn reverify(kind: &str, detail: &Value) -> bool {
    match kind {
        "slope_violation" | "corollary_falsification" => reverify_slope(detail).unwrap_or(false),
        "identity_failure" => reverify_identity(detail).unwrap_or(false),
        _ => false,
    }
}

fn get_str(detail: &Value, key: &str) -> Option<String> {
    detail.get(key)?.as_str().map(str::to_string)
}

fn get_lattice(detail: &Value, key: &str) -> Option<Lattice> {
    let file: LatticeFile = serde_json::from_value(detail.get(key)?.clone()).ok()?;
    file.to_lattice().ok()
}

fn get_vecs(detail: &Value, key: &str) -> Option<Vec<LatVec>> {
    let rows = detail.get(key)?.as_array()?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let coords = row
            .as_array()?
            .iter()
            .map(|c| c.as_str()?.parse::<Int>().ok())
            .collect::<Option<Vec<Int>>>()?;
        out.push(LatVec::new(coords));
    }
    Some(out)
}

fn get_elements(detail: &Value, key: &str) -> Option<Vec<TensorElement>> {
    let items = detail.get(key)?.as_array()?;
    let mut out = Vec::with_capacity(items.len());
    for item in items {
        let rows = item.as_array()?;
        let height = rows.len();
        let mut entries = Vec::new();
        let mut width = None;
        for row in rows {
            let row = row.as_array()?;
            match width {
                None => width = Some(row.len()),
                Some(w) if w != row.len() => return None,
                _ => {}
            }
            for c in row {
                entries.push(c.as_str()?.parse::<Int>().ok()?);
            }
        }
        let m = IntMatrix::new(height, width?, entries).ok()?;
        out.push(TensorElement::new(m));
    }
    Some(out)
}

fn get_grams(detail: &Value, key: &str) -> Option<Vec<RatMatrix>> {
    let items = detail.get(key)?.as_array()?;
    let mut out = Vec::with_capacity(items.len());
    for item in items {
        let rows = item.as_array()?;
        let height = rows.len();
        let mut entries = Vec::new();
        let mut width = None;
        for row in rows {
            let row = row.as_array()?;
            match width {
                None => width = Some(row.len()),
                Some(w) if w != row.len() => return None,
                _ => {}
            }
            for c in row {
                entries.push(parse_rat(c.as_str()?).ok()?);
            }
        }
        out.push(RatMatrix::new(height, width?, entries).ok()?);
    }
    Some(out)
}

fn reverify_slope(detail: &Value) -> Option<bool> {
    let l = get_lattice(detail, "left")?;
    let m = get_lattice(detail, "right")?;
    let gens = get_vecs(detail, "gens")?;
    let sub_rank = detail.get("sub_rank")?.as_u64()? as usize;
    let claimed_sub = parse_rat(&get_str(detail, "sub_covol_sq")?).ok()?;
    let claimed_total = parse_rat(&get_str(detail, "total_covol_sq")?).ok()?;
    let total_rank = detail.get("total_rank")?.as_u64()? as usize;

    let t = tensor_lattice(&l, &m);
    if t.rank() != total_rank || t.covol_sq() != claimed_total {
        return Some(false);
    }
    let sat = t.saturate(&gens).ok()?;
    if sat.len() != sub_rank {
        return Some(false);
    }
    let covol = t.gens_gram(&sat).ok()?.det().ok()?;
    if covol != claimed_sub {
        return Some(false);
    }
    let sub = SlopeExpr::new(covol, sub_rank);
    Some(sub.cmp_slope(&t.slope()) == Ordering::Greater)
}

fn reverify_identity(detail: &Value) -> Option<bool> {
    let name = get_str(detail, "identity")?;
    let claimed_lhs = get_str(detail, "lhs")?;
    let claimed_rhs = get_str(detail, "rhs")?;

    let report = match name.as_str() {
        "cross_gram" => {
            let l = get_lattice(detail, "left")?;
            let m = get_lattice(detail, "right")?;
            let es = get_elements(detail, "elements")?;
            let t = tensor_lattice(&l, &m);
            check_cross_gram(&t, es.first()?, es.get(1)?).ok()?
        }
        "rank2_wedge" => {
            let l = get_lattice(detail, "left")?;
            let m = get_lattice(detail, "right")?;
            let vs = get_vecs(detail, "vectors")?;
            if vs.len() != 4 {
                return None;
            }
            check_rank2_identity(&l, &m, &vs[0], &vs[1], &vs[2], &vs[3]).ok()?
        }
        "gramian3_expansion" => {
            let l = get_lattice(detail, "left")?;
            let vs = get_vecs(detail, "vectors")?;
            if vs.len() != 3 {
                return None;
            }
            gramian3_expand(&l, &vs[0], &vs[1], &vs[2]).ok()?
        }
        "product_substitution" => {
            let l = get_lattice(detail, "left")?;
            let vs = get_vecs(detail, "vectors")?;
            if vs.len() != 3 {
                return None;
            }
            check_product_substitution(&l, &vs[0], &vs[1], &vs[2]).ok()?
        }
        "rank3_wedge" | "lambda_relation" | "coplanar_collapse" | "coplanar_bound" => {
            let l = get_lattice(detail, "left")?;
            let m = get_lattice(detail, "right")?;
            let vs = get_vecs(detail, "vectors")?;
            if vs.len() != 6 {
                return None;
            }
            let v3 = [vs[0].clone(), vs[1].clone(), vs[2].clone()];
            let w3 = [vs[3].clone(), vs[4].clone(), vs[5].clone()];
            match name.as_str() {
                "rank3_wedge" => check_rank3_identity(&l, &m, &v3, &w3).ok()?,
                "lambda_relation" => {
                    let inv = triple_invariants(&l, &m, &v3, &w3).ok()?;
                    check_lambda_relation(&inv).ok()?
                }
                "coplanar_collapse" => check_coplanar_identity(&l, &m, &v3, &w3).ok()?,
                _ => check_coplanar_bound(&l, &m, &v3, &w3).ok()?,
            }
        }
        "trace_identity" => {
            let l = get_lattice(detail, "left")?;
            let m = get_lattice(detail, "right")?;
            let es = get_elements(detail, "elements")?;
            trace_identity_check(&l, &m, es.first()?).ok()?
        }
        "amgm_trace" => {
            let gs = get_grams(detail, "grams")?;
            amgm_trace_bound(gs.first()?, gs.get(1)?).ok()?
        }
        "spectrum_positive" => {
            let gs = get_grams(detail, "grams")?;
            let ok = spectrum_positive(gs.first()?, gs.get(1)?).ok()?;
            return Some(!ok);
        }
        _ => return None,
    };

    Some(
        !report.holds
            && format_rat(&report.lhs) == claimed_lhs
            && format_rat(&report.rhs) == claimed_rhs,
    )
}
