//! JSON results of every subcommand, 1-based, and their re-verification.

use std::collections::BTreeMap;

use fairsplit_core::necklace::{verify_discrete, AdvantageSpec, ContinuousSplitting, DiscreteSplitting, Necklace};
use fairsplit_core::pathsplit::{
    verify_cycle_split, verify_pair_split, verify_qstable_split, CycleSplit, PairSplit, StableSplit, Violation,
};
use fairsplit_core::{ColoredPath, Rational};
use serde::{Deserialize, Serialize};

/// Outcome of running a verifier on the emitted object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verified: bool,
    pub violations: Vec<String>,
}

impl Certificate {
    pub fn from_result<V: ToString>(r: Result<(), Vec<V>>) -> Self {
        match r {
            Ok(()) => Certificate {
                verified: true,
                violations: Vec::new(),
            },
            Err(v) => Certificate {
                verified: false,
                violations: v.iter().map(ToString::to_string).collect(),
            },
        }
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn zero_based(v: &[usize]) -> Result<Vec<usize>, String> {
    v.iter()
        .map(|&x| x.checked_sub(1).ok_or_else(|| "indices are 1-based".to_string()))
        .collect()
}

fn keyed_zero_based<T: Clone>(map: &BTreeMap<usize, T>, m: usize) -> Result<Vec<T>, String> {
    (1..=m)
        .map(|c| map.get(&c).cloned().ok_or_else(|| format!("no entry for color {c}")))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathReport {
    /// Color → removed vertex.
    pub removed: BTreeMap<usize, usize>,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub certificate: Certificate,
}

impl PathReport {
    pub fn new(split: &PairSplit, certificate: Certificate) -> Self {
        PathReport {
            removed: split.removed.iter().enumerate().map(|(j, v)| (j + 1, v + 1)).collect(),
            s1: one_based(&split.s1),
            s2: one_based(&split.s2),
            certificate,
        }
    }

    pub fn to_split(&self, path: &ColoredPath) -> Result<PairSplit, String> {
        Ok(PairSplit {
            removed: zero_based(&keyed_zero_based(&self.removed, path.num_colors())?)?,
            s1: zero_based(&self.s1)?,
            s2: zero_based(&self.s2)?,
        })
    }

    pub fn recheck(&self, path: &ColoredPath) -> Result<(), Vec<String>> {
        let split = self.to_split(path).map_err(|e| vec![e])?;
        verify_pair_split(path, &split).map_err(|v| v.iter().map(Violation::to_string).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleReport {
    pub removed: BTreeMap<usize, usize>,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    /// Cycle edges with both ends in `s1` and in `s2`.
    pub induced_edges: [usize; 2],
    pub certificate: Certificate,
}

impl CycleReport {
    pub fn new(split: &CycleSplit, certificate: Certificate) -> Self {
        let p = PathReport::new(&split.split, certificate);
        CycleReport {
            removed: p.removed,
            s1: p.s1,
            s2: p.s2,
            induced_edges: split.induced_edges,
            certificate: p.certificate,
        }
    }

    pub fn recheck(&self, cycle: &ColoredPath) -> Result<(), Vec<String>> {
        let p = PathReport {
            removed: self.removed.clone(),
            s1: self.s1.clone(),
            s2: self.s2.clone(),
            certificate: self.certificate.clone(),
        };
        let split = CycleSplit {
            split: p.to_split(cycle).map_err(|e| vec![e])?,
            induced_edges: self.induced_edges,
        };
        verify_cycle_split(cycle, &split).map_err(|v| v.iter().map(Violation::to_string).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuousReport {
    #[serde(with = "fairsplit_core::rational::vec")]
    pub cuts: Vec<Rational>,
    /// Thief per segment.
    pub owners: Vec<usize>,
}

impl ContinuousReport {
    pub fn new(c: &ContinuousSplitting) -> Self {
        ContinuousReport {
            cuts: c.cuts().to_vec(),
            owners: one_based(c.owners()),
        }
    }

    pub fn to_splitting(&self, beads: usize) -> Result<ContinuousSplitting, String> {
        ContinuousSplitting::new(beads, self.cuts.clone(), zero_based(&self.owners)?).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecklaceReport {
    /// Thief per bead.
    pub owner: Vec<usize>,
    pub cuts: usize,
    pub cut_bound: usize,
    pub continuous: ContinuousReport,
    pub cancelled: ContinuousReport,
    pub report: Certificate,
}

impl NecklaceReport {
    pub fn recheck(&self, neck: &Necklace, spec: &AdvantageSpec) -> Result<(), Vec<String>> {
        let mut problems = Vec::new();
        match zero_based(&self.owner) {
            Ok(owner) => {
                let split = DiscreteSplitting { owner };
                if split.cuts() != self.cuts {
                    problems.push(format!("reported {} cuts, owner vector has {}", self.cuts, split.cuts()));
                }
                if let Err(v) = verify_discrete(neck, spec, &split) {
                    problems.extend(v.iter().map(ToString::to_string));
                }
            }
            Err(e) => problems.push(e),
        }
        for (name, c) in [("continuous", &self.continuous), ("cancelled", &self.cancelled)] {
            match c.to_splitting(neck.len()) {
                Ok(s) if s.is_fair(neck) => {}
                Ok(_) => problems.push(format!("{name} splitting is not fair")),
                Err(e) => problems.push(format!("{name}: {e}")),
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableReport {
    pub q: usize,
    /// `"composition"` for powers of two, otherwise `"brute-force"`.
    pub method: String,
    pub enforce_upper: bool,
    pub found: bool,
    /// Color → removed vertices.
    pub removed: BTreeMap<usize, Vec<usize>>,
    pub classes: Vec<Vec<usize>>,
    pub certificate: Option<Certificate>,
}

impl StableReport {
    pub fn new(q: usize, method: &str, enforce_upper: bool, split: Option<&StableSplit>, certificate: Option<Certificate>) -> Self {
        StableReport {
            q,
            method: method.into(),
            enforce_upper,
            found: split.is_some(),
            removed: split
                .map(|s| s.removed.iter().enumerate().map(|(j, r)| (j + 1, one_based(r))).collect())
                .unwrap_or_default(),
            classes: split
                .map(|s| s.classes.iter().map(|c| one_based(c)).collect())
                .unwrap_or_default(),
            certificate,
        }
    }

    pub fn to_split(&self, path: &ColoredPath) -> Result<StableSplit, String> {
        Ok(StableSplit {
            q: self.q,
            removed: keyed_zero_based(&self.removed, path.num_colors())?
                .iter()
                .map(|r| zero_based(r))
                .collect::<Result<_, _>>()?,
            classes: self.classes.iter().map(|c| zero_based(c)).collect::<Result<_, _>>()?,
        })
    }

    pub fn recheck(&self, path: &ColoredPath) -> Result<(), Vec<String>> {
        if !self.found {
            return Ok(());
        }
        let split = self.to_split(path).map_err(|e| vec![e])?;
        verify_qstable_split(path, self.q, &split, self.enforce_upper)
            .map_err(|v| v.iter().map(Violation::to_string).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuckerCheckReport {
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub s: usize,
    pub antipodal: bool,
    pub antipodal_failures: usize,
    pub complementary_pairs: usize,
    pub out_of_range: usize,
    /// `"ok"`, `"violation"` or `"lemma-contradiction"`.
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub q: usize,
    pub max_n: usize,
    pub max_colors: usize,
    pub enforce_upper: bool,
    pub seed: u64,
    pub random: usize,
    pub instances: usize,
    pub found: usize,
    pub not_found: usize,
    /// 1-based colorings with no split satisfying the lower bound.
    pub counterexamples: Vec<Vec<usize>>,
}
