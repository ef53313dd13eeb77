//! Lattice files: a single JSON document per lattice, with every Gram entry
//! a rational string "p/q" (or "p" for integers). Symmetry and positive
//! definiteness are checked on load, so a `Lattice` built from a file is
//! always usable.

use anyhow::{anyhow, bail, Context, Result};
use latstab::rat::{format_rat, parse_rat};
use latstab::{Lattice, RatMatrix};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct LatticeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rank: usize,
    pub gram: Vec<Vec<String>>,
}

impl LatticeFile {
    pub fn to_lattice(&self) -> Result<Lattice> {
        if self.rank == 0 {
            bail!("rank must be at least 1");
        }
        if self.gram.len() != self.rank || self.gram.iter().any(|row| row.len() != self.rank) {
            bail!("gram must be a {0}x{0} matrix of rational strings", self.rank);
        }
        let mut entries = Vec::with_capacity(self.rank * self.rank);
        for row in &self.gram {
            for s in row {
                entries.push(parse_rat(s).map_err(|e| anyhow!("bad entry {s:?}: {e}"))?);
            }
        }
        let gram = RatMatrix::new(self.rank, self.rank, entries)?;
        Ok(Lattice::from_gram(gram)?)
    }

    pub fn from_lattice(name: Option<String>, l: &Lattice) -> LatticeFile {
        let n = l.rank();
        let gram = (0..n)
            .map(|i| (0..n).map(|j| format_rat(l.gram().at(i, j))).collect())
            .collect();
        LatticeFile { name, rank: n, gram }
    }
}

pub fn load_lattice(path: &str) -> Result<(Lattice, LatticeFile)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let file: LatticeFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
    let lattice = file
        .to_lattice()
        .with_context(|| format!("validating {path}"))?;
    Ok((lattice, file))
}
