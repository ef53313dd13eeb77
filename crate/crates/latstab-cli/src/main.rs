use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use latstab::rat::format_rat;
use latstab::stability::is_semistable;
use latstab::{LatVec, Lattice, MuMax, RankRecord, SlopeExpr, VerdictKind};
use serde_json::{json, Value};

use latstab_cli::io::{load_lattice, LatticeFile};
use latstab_cli::report::{vecs_to_json, RunReport};
use latstab_cli::suites::{
    mu_max_refined, run_corollary, run_identity_suite, run_theorem_suite, search_counterexample,
    IdentityParams, SearchMode, SearchParams, TheoremParams,
};

#[derive(Parser)]
#[command(
    name = "latstab",
    version,
    about = "Exact semistability toolkit for Euclidean lattices and their tensor products"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
    /// Add wall-clock timing to suite reports. Off by default so a fixed
    /// seed yields byte-identical output.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    Certified,
    Heuristic,
}

impl From<Mode> for SearchMode {
    fn from(m: Mode) -> SearchMode {
        match m {
            Mode::Certified => SearchMode::Certified,
            Mode::Heuristic => SearchMode::Heuristic,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the slope of a lattice file
    Slope { file: String },
    /// Maximal slope over nonzero saturated sublattices, with a witness
    Mumax {
        file: String,
        /// Refuse uncertified ranks, or refine them with a seeded box search
        #[arg(long, value_enum, default_value_t = Mode::Certified)]
        mode: Mode,
        /// Coefficient box for heuristic refinement
        #[arg(long = "box", default_value_t = 2)]
        box_bound: i64,
    },
    /// Semistability verdict for a lattice file
    Semistable { file: String },
    /// Dual lattice, emitted in the lattice file format
    Dual { file: String },
    /// Tensor product of two lattice files, emitted in the lattice file format
    Tensor { left: String, right: String },
    /// Fuzz every exact identity check with random instances
    Identities {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Coefficient bound for random vectors and tensor elements
        #[arg(long, default_value_t = 5)]
        bound: i64,
        /// Factor ranks to draw from
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3, 4])]
        ranks: Vec<usize>,
    },
    /// Sample random sublattices of L⊗M and check the slope bound on each
    Theorem {
        left: String,
        right: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Largest sublattice rank to sample
        #[arg(long = "max-rank", default_value_t = 3)]
        max_rank: usize,
        /// Coefficient bound for random tensor elements
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Certify semistability of a small tensor product end to end
    Corollary { left: String, right: String },
    /// Hunt for destabilizing sublattices over random semistable pairs
    Search {
        /// Rank of the left factor
        #[arg(long)]
        n: usize,
        /// Rank of the right factor
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Heuristic)]
        mode: Mode,
        /// Coefficient box for heuristic refinement
        #[arg(long = "box", default_value_t = 2)]
        box_bound: i64,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok((code, output)) => {
            if write_stdout(&output).is_err() {
                // Downstream closed the pipe; nothing useful left to do.
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

fn write_stdout(s: &str) -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(s.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e),
        _ => Ok(()),
    }
}

fn init_threads() -> Result<()> {
    if let Ok(raw) = std::env::var("LATSTAB_THREADS") {
        let k: usize = raw
            .trim()
            .parse()
            .context("LATSTAB_THREADS must be a positive integer")?;
        if k == 0 {
            bail!("LATSTAB_THREADS must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("installing thread pool")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(i32, String)> {
    init_threads()?;
    let json = cli.format == OutFormat::Json;
    match cli.cmd {
        Cmd::Slope { file } => {
            let (l, f) = load_lattice(&file)?;
            let s = l.slope();
            let mut out = String::new();
            if json {
                let mut doc = json!({
                    "rank": l.rank(),
                    "covol_sq": format_rat(&l.covol_sq()),
                    "slope": slope_json(&s),
                });
                attach_name(&mut doc, &f);
                push_doc(&mut out, &doc)?;
            } else {
                push_name(&mut out, &f)?;
                writeln!(out, "rank: {}", l.rank())?;
                writeln!(out, "covol_sq: {}", format_rat(&l.covol_sq()))?;
                writeln!(out, "slope_approx: {:.6}", s.approx())?;
            }
            Ok((0, out))
        }
        Cmd::Mumax {
            file,
            mode,
            box_bound,
        } => {
            let (l, f) = load_lattice(&file)?;
            let mm = mu_max_refined(&l, mode.into(), box_bound)?;
            let mut out = String::new();
            if json {
                let mut doc = mu_max_json(&l, &mm);
                attach_name(&mut doc, &f);
                push_doc(&mut out, &doc)?;
            } else {
                push_name(&mut out, &f)?;
                push_mu_max_text(&mut out, &l, &mm)?;
            }
            Ok((0, out))
        }
        Cmd::Semistable { file } => {
            let (l, f) = load_lattice(&file)?;
            let v = is_semistable(&l)?;
            let verdict = match v.kind {
                VerdictKind::Semistable => "semistable",
                VerdictKind::Unstable => "unstable",
                VerdictKind::UnknownWithinBound => "unknown_within_bound",
            };
            let mut out = String::new();
            if json {
                let mut doc = json!({
                    "rank": l.rank(),
                    "verdict": verdict,
                    "mu_max": slope_json(&v.mu_max),
                    "slope": slope_json(&l.slope()),
                    "witness_rank": v.witness_rank,
                    "witness": vecs_to_json(&v.witness),
                    "certified": v.certified,
                    "search_bound": v.search_bound.as_ref().map(format_rat),
                });
                attach_name(&mut doc, &f);
                push_doc(&mut out, &doc)?;
            } else {
                push_name(&mut out, &f)?;
                writeln!(out, "rank: {}", l.rank())?;
                writeln!(out, "verdict: {verdict}")?;
                writeln!(out, "certified: {}", v.certified)?;
                if v.kind == VerdictKind::Unstable {
                    writeln!(
                        out,
                        "witness: rank {} covol_sq {} gens {}",
                        v.witness_rank,
                        format_rat(&v.mu_max.covol_sq),
                        vecs_text(&v.witness)
                    )?;
                }
            }
            Ok((0, out))
        }
        Cmd::Dual { file } => {
            let (l, f) = load_lattice(&file)?;
            let name = f.name.as_ref().map(|n| format!("dual({n})"));
            let mut out = String::new();
            push_doc(
                &mut out,
                &serde_json::to_value(LatticeFile::from_lattice(name, &l.dual()))?,
            )?;
            Ok((0, out))
        }
        Cmd::Tensor { left, right } => {
            let (l, lf) = load_lattice(&left)?;
            let (m, mf) = load_lattice(&right)?;
            let name = match (&lf.name, &mf.name) {
                (Some(a), Some(b)) => Some(format!("tensor({a},{b})")),
                _ => None,
            };
            let t = latstab::multilinear::tensor_lattice(&l, &m);
            let mut out = String::new();
            push_doc(
                &mut out,
                &serde_json::to_value(LatticeFile::from_lattice(name, &t))?,
            )?;
            Ok((0, out))
        }
        Cmd::Identities {
            trials,
            seed,
            bound,
            ranks,
        } => {
            let p = IdentityParams {
                trials,
                ranks,
                bound,
                seed,
            };
            finish(cli.timing, json, Instant::now(), run_identity_suite(&p)?)
        }
        Cmd::Theorem {
            left,
            right,
            trials,
            max_rank,
            bound,
            seed,
        } => {
            let started = Instant::now();
            let (l, lf) = load_lattice(&left)?;
            let (m, mf) = load_lattice(&right)?;
            let p = TheoremParams {
                trials,
                max_rank,
                bound,
                seed,
            };
            let report = run_theorem_suite(&left, &right, &l, &lf, &m, &mf, &p)?;
            finish(cli.timing, json, started, report)
        }
        Cmd::Corollary { left, right } => {
            let started = Instant::now();
            let (l, lf) = load_lattice(&left)?;
            let (m, mf) = load_lattice(&right)?;
            let report = run_corollary(&left, &right, &l, &lf, &m, &mf)?;
            finish(cli.timing, json, started, report)
        }
        Cmd::Search {
            n,
            m,
            trials,
            seed,
            mode,
            box_bound,
        } => {
            let p = SearchParams {
                n,
                m,
                trials,
                seed,
                mode: mode.into(),
                box_bound,
            };
            finish(cli.timing, json, Instant::now(), search_counterexample(&p)?)
        }
    }
}

fn finish(
    timing: bool,
    json: bool,
    started: Instant,
    mut report: RunReport,
) -> Result<(i32, String)> {
    if timing {
        report.timing_ms = Some(started.elapsed().as_millis() as u64);
    }
    Ok((report.exit_code(), report.render(json)))
}

fn push_doc(out: &mut String, doc: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(doc)?)?;
    Ok(())
}

fn attach_name(doc: &mut Value, f: &LatticeFile) {
    if let Some(name) = &f.name {
        doc["name"] = json!(name);
    }
}

fn push_name(out: &mut String, f: &LatticeFile) -> Result<()> {
    if let Some(name) = &f.name {
        writeln!(out, "name: {name}")?;
    }
    Ok(())
}

fn slope_json(s: &SlopeExpr) -> Value {
    json!({
        "covol_sq": format_rat(&s.covol_sq),
        "rank": s.rank,
        "approx": s.approx(),
    })
}

fn rank_record_json(r: &RankRecord) -> Value {
    json!({
        "rank": r.rank,
        "covol_sq": format_rat(&r.covol_sq),
        "certified": r.certified,
        "search_bound": r.search_bound.as_ref().map(format_rat),
        "gens": vecs_to_json(&r.gens),
    })
}

fn mu_max_json(l: &Lattice, mm: &MuMax) -> Value {
    json!({
        "rank": l.rank(),
        "mu_max": slope_json(&mm.slope),
        "slope": slope_json(&l.slope()),
        "witness_rank": mm.witness_rank,
        "witness": vecs_to_json(&mm.witness),
        "certified": mm.certified,
        "per_rank": mm.per_rank.iter().map(rank_record_json).collect::<Vec<_>>(),
    })
}

fn vec_text(v: &LatVec) -> String {
    let coords: Vec<String> = v.coords().iter().map(|c| c.to_string()).collect();
    format!("({})", coords.join(", "))
}

fn vecs_text(vs: &[LatVec]) -> String {
    vs.iter().map(vec_text).collect::<Vec<_>>().join(" ")
}

fn push_mu_max_text(out: &mut String, l: &Lattice, mm: &MuMax) -> Result<()> {
    writeln!(out, "rank: {}", l.rank())?;
    writeln!(out, "mu_max_covol_sq: {}", format_rat(&mm.slope.covol_sq))?;
    writeln!(out, "mu_max_rank: {}", mm.slope.rank)?;
    writeln!(out, "mu_max_approx: {:.6}", mm.slope.approx())?;
    writeln!(out, "witness_rank: {}", mm.witness_rank)?;
    writeln!(out, "witness: {}", vecs_text(&mm.witness))?;
    writeln!(out, "certified: {}", mm.certified)?;
    for r in &mm.per_rank {
        let bound = r
            .search_bound
            .as_ref()
            .map(|b| format!(" search_bound {}", format_rat(b)))
            .unwrap_or_default();
        writeln!(
            out,
            "rank {}: covol_sq {} certified {}{}",
            r.rank,
            format_rat(&r.covol_sq),
            r.certified,
            bound
        )?;
    }
    Ok(())
}
