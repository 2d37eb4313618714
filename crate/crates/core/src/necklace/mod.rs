//! Fair `q`-splittings of open necklaces with prescribed advantaged thieves.
//!
//! The pipeline in [`split_with_advantages`] finds an exact continuous fair
//! splitting ([`search_continuous`]), removes every cycle from the per-color
//! thief/bead flow graphs ([`cancel_cycles`]), and then hands each split bead
//! wholly to one of the thieves already sharing it, chosen so that the
//! requested thieves end up with the extra bead ([`round_color_r0`],
//! [`round_color_r1`], [`round_color_rq1`]). This works whenever every
//! remainder `a_j mod q` is `0`, `1`, or `q - 1`.

mod continuous;
mod flow;
mod rounding;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::rational::Rational;

pub use continuous::{search_continuous, ContinuousSplitting, Piece, CONTINUOUS_PATTERN_BUDGET};
pub use flow::{build_flow_graph, cancel_cycles, ColorFlowGraph, FlowEdge};
pub use rounding::{
    demonstrate_r2_failure, reachable_outcomes, round_color_r0, round_color_r1, round_color_rq1,
    split_with_advantages, ImpossibilityReport, NecklaceSplit, Outcome,
};

/// Default cap on the discrete search space.
pub const DISCRETE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NecklaceError {
    #[error("the necklace has no beads")]
    Empty,
    #[error("color {missing} does not occur; colors must be contiguous from 0")]
    MissingColor { missing: usize },
    #[error("need at least two thieves, got {0}")]
    TooFewThieves(usize),
    #[error("invalid advantage specification: {0}")]
    InvalidSpec(String),
    #[error("remainders of colors {colors:?} are not in {{0, 1, q-1}}")]
    UnsupportedRemainder { colors: Vec<usize> },
    #[error("search budget exhausted: {0}")]
    BudgetExceeded(String),
    #[error("invalid continuous splitting: {0}")]
    InvalidContinuous(String),
    #[error("thief {thief} holds a non-integral excess of color {color}")]
    NonIntegralAlpha { color: usize, thief: usize },
    #[error("rounding precondition failed: {0}")]
    RoundingPrecondition(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

/// An open necklace of colored beads to be shared by `q` thieves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Necklace {
    beads: Vec<usize>,
    q: usize,
    counts: Vec<usize>,
}

impl Necklace {
    pub fn new(beads: Vec<usize>, q: usize) -> Result<Self, NecklaceError> {
        if beads.is_empty() {
            return Err(NecklaceError::Empty);
        }
        if q < 2 {
            return Err(NecklaceError::TooFewThieves(q));
        }
        let m = beads.iter().max().map_or(0, |c| c + 1);
        let mut counts = vec![0; m];
        for &c in &beads {
            counts[c] += 1;
        }
        if let Some(missing) = counts.iter().position(|&c| c == 0) {
            return Err(NecklaceError::MissingColor { missing });
        }
        Ok(Self { beads, q, counts })
    }

    pub fn len(&self) -> usize {
        self.beads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beads.is_empty()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn num_colors(&self) -> usize {
        self.counts.len()
    }

    pub fn beads(&self) -> &[usize] {
        &self.beads
    }

    pub fn color(&self, bead: usize) -> usize {
        self.beads[bead]
    }

    /// `a_j`, the number of beads of color `j`.
    pub fn count(&self, color: usize) -> usize {
        self.counts[color]
    }

    pub fn remainder(&self, color: usize) -> usize {
        self.counts[color] % self.q
    }

    /// `a_j / q`, the exact continuous share of color `j`.
    pub fn fair_share(&self, color: usize) -> Rational {
        Rational::new(self.counts[color] as i64, self.q as i64)
    }

    /// `(q - 1) m`.
    pub fn cut_bound(&self) -> usize {
        (self.q - 1) * self.num_colors()
    }
}

/// `r_j = a_j mod q` for every color.
pub fn remainders(neck: &Necklace) -> Vec<usize> {
    (0..neck.num_colors()).map(|j| neck.remainder(j)).collect()
}

/// For each color with nonzero remainder, the thieves receiving `⌈a_j/q⌉`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdvantageSpec {
    advantaged: BTreeMap<usize, BTreeSet<usize>>,
}

impl AdvantageSpec {
    pub fn new(neck: &Necklace, advantaged: BTreeMap<usize, BTreeSet<usize>>) -> Result<Self, NecklaceError> {
        for (&color, thieves) in &advantaged {
            if color >= neck.num_colors() {
                return Err(NecklaceError::InvalidSpec(format!("unknown color {color}")));
            }
            let r = neck.remainder(color);
            if r == 0 {
                return Err(NecklaceError::InvalidSpec(format!(
                    "color {color} divides evenly and takes no advantaged thieves"
                )));
            }
            if thieves.len() != r {
                return Err(NecklaceError::InvalidSpec(format!(
                    "color {color} needs exactly {r} advantaged thieves, got {}",
                    thieves.len()
                )));
            }
            if let Some(t) = thieves.iter().find(|&&t| t >= neck.q()) {
                return Err(NecklaceError::InvalidSpec(format!("thief {t} does not exist")));
            }
        }
        let missing: Vec<usize> = (0..neck.num_colors())
            .filter(|&j| neck.remainder(j) != 0 && !advantaged.contains_key(&j))
            .collect();
        if !missing.is_empty() {
            return Err(NecklaceError::InvalidSpec(format!(
                "colors {missing:?} have a nonzero remainder but no advantaged thieves"
            )));
        }
        Ok(Self { advantaged })
    }

    /// The specification for a necklace in which every `a_j` is divisible by `q`.
    pub fn none() -> Self {
        Self::default()
    }

    pub fn advantaged(&self, color: usize) -> Option<&BTreeSet<usize>> {
        self.advantaged.get(&color)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BTreeSet<usize>)> {
        self.advantaged.iter().map(|(&c, t)| (c, t))
    }

    /// Every valid specification for `neck`, in lexicographic order.
    pub fn all_for(neck: &Necklace) -> Vec<AdvantageSpec> {
        let mut specs = vec![BTreeMap::new()];
        for j in 0..neck.num_colors() {
            let r = neck.remainder(j);
            if r == 0 {
                continue;
            }
            let subsets = k_subsets(neck.q(), r);
            specs = specs
                .into_iter()
                .flat_map(|spec| {
                    subsets.iter().map(move |s| {
                        let mut next = spec.clone();
                        next.insert(j, s.iter().copied().collect::<BTreeSet<_>>());
                        next
                    })
                })
                .collect();
        }
        specs
            .into_iter()
            .map(|advantaged| AdvantageSpec { advantaged })
            .collect()
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Each bead given wholly to one thief.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteSplitting {
    pub owner: Vec<usize>,
}

impl DiscreteSplitting {
    /// Number of adjacent beads with different owners.
    pub fn cuts(&self) -> usize {
        self.owner.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// `holdings[t][j]`: beads of color `j` owned by thief `t`.
    pub fn holdings(&self, neck: &Necklace) -> Vec<Vec<usize>> {
        let mut h = vec![vec![0; neck.num_colors()]; neck.q()];
        for (k, &t) in self.owner.iter().enumerate() {
            if t < neck.q() && k < neck.len() {
                h[t][neck.color(k)] += 1;
            }
        }
        h
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiscreteViolation {
    Length { beads: usize, owners: usize },
    ThiefRange { bead: usize, thief: usize },
    Fairness { color: usize, thief: usize, count: usize },
    Cuts { cuts: usize, bound: usize },
    Advantage { color: usize, thief: usize, count: usize },
}

impl DiscreteViolation {
    pub fn kind(&self) -> &'static str {
        match self {
            DiscreteViolation::Length { .. } => "length",
            DiscreteViolation::ThiefRange { .. } => "thief-range",
            DiscreteViolation::Fairness { .. } => "fairness",
            DiscreteViolation::Cuts { .. } => "cuts",
            DiscreteViolation::Advantage { .. } => "advantage",
        }
    }
}

impl fmt::Display for DiscreteViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscreteViolation::Fairness { color, thief, count } => {
                write!(f, "fairness color {color}: thief {thief} holds {count}")
            }
            DiscreteViolation::Advantage { color, thief, count } => {
                write!(f, "advantage color {color}: thief {thief} holds {count}")
            }
            DiscreteViolation::Cuts { cuts, bound } => write!(f, "cuts: {cuts} > {bound}"),
            other => write!(f, "{}: {other:?}", other.kind()),
        }
    }
}

/// Checks fairness, the `(q-1)m` cut bound, and that exactly the requested
/// thieves hold `⌈a_j/q⌉` beads of each color with nonzero remainder.
pub fn verify_discrete(
    neck: &Necklace,
    spec: &AdvantageSpec,
    split: &DiscreteSplitting,
) -> Result<(), Vec<DiscreteViolation>> {
    let mut out = Vec::new();
    if split.owner.len() != neck.len() {
        out.push(DiscreteViolation::Length {
            beads: neck.len(),
            owners: split.owner.len(),
        });
        return Err(out);
    }
    for (bead, &thief) in split.owner.iter().enumerate() {
        if thief >= neck.q() {
            out.push(DiscreteViolation::ThiefRange { bead, thief });
        }
    }
    if !out.is_empty() {
        return Err(out);
    }
    let q = neck.q();
    let holdings = split.holdings(neck);
    for j in 0..neck.num_colors() {
        let low = neck.count(j) / q;
        let high = neck.count(j).div_ceil(q);
        for (t, row) in holdings.iter().enumerate() {
            let count = row[j];
            if count != low && count != high {
                out.push(DiscreteViolation::Fairness { color: j, thief: t, count });
                continue;
            }
            if neck.remainder(j) != 0 {
                let wants_high = spec.advantaged(j).is_some_and(|s| s.contains(&t));
                if wants_high != (count == high) {
                    out.push(DiscreteViolation::Advantage { color: j, thief: t, count });
                }
            }
        }
    }
    let cuts = split.cuts();
    if cuts > neck.cut_bound() {
        out.push(DiscreteViolation::Cuts {
            cuts,
            bound: neck.cut_bound(),
        });
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for i in 0..k.min(n) {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(if k > n { 0 } else { acc })
}

/// Brute-force discrete splitting with at most `max_cuts` cuts.
///
/// Enumerates cut sets by size and, for each, the owner sequences of the
/// resulting intervals with distinct neighbours. Among the valid splittings
/// with the fewest cuts, returns the lexicographically smallest owner vector.
pub fn search_discrete(
    neck: &Necklace,
    spec: &AdvantageSpec,
    max_cuts: usize,
    budget: u64,
) -> Result<Option<DiscreteSplitting>, NecklaceError> {
    let n = neck.len();
    let q = neck.q();
    let m = neck.num_colors();
    let max_cuts = max_cuts.min(n - 1);
    let states = binomial(n as u64 - 1, max_cuts as u64)
        .and_then(|c| c.checked_mul((q as u64).checked_pow(max_cuts as u32 + 1)?));
    if states.is_none_or(|s| s > budget) {
        return Err(NecklaceError::BudgetExceeded(format!(
            "C({}, {max_cuts}) * {q}^{} exceeds {budget}",
            n - 1,
            max_cuts + 1
        )));
    }
    // target[t][j]
    let target: Vec<Vec<usize>> = (0..q)
        .map(|t| {
            (0..m)
                .map(|j| {
                    let adv = spec.advantaged(j).is_some_and(|s| s.contains(&t));
                    neck.count(j) / q + usize::from(adv)
                })
                .collect()
        })
        .collect();
    let mut prefix = vec![vec![0usize; n + 1]; m];
    for (k, &c) in neck.beads().iter().enumerate() {
        for (j, row) in prefix.iter_mut().enumerate() {
            row[k + 1] = row[k] + usize::from(c == j);
        }
    }

    for cuts in 0..=max_cuts {
        let mut best: Option<Vec<usize>> = None;
        for positions in k_subsets(n - 1, cuts) {
            // interval boundaries: 0, p+1 for each cut after bead p, n
            let mut bounds = Vec::with_capacity(cuts + 2);
            bounds.push(0);
            bounds.extend(positions.iter().map(|p| p + 1));
            bounds.push(n);
            let mut owners = vec![0usize; cuts + 1];
            if let Some(owners) = search_owners(&bounds, &prefix, &target, q, 0, &mut owners, &mut vec![vec![0; m]; q]) {
                let mut owner = vec![0; n];
                for (i, w) in bounds.windows(2).enumerate() {
                    owner[w[0]..w[1]].fill(owners[i]);
                }
                if best.as_ref().is_none_or(|b| owner < *b) {
                    best = Some(owner);
                }
            }
        }
        if let Some(owner) = best {
            let split = DiscreteSplitting { owner };
            if verify_discrete(neck, spec, &split).is_ok() {
                return Ok(Some(split));
            }
            return Err(NecklaceError::Internal(
                "discrete search produced an unverified splitting".into(),
            ));
        }
    }
    Ok(None)
}

fn search_owners(
    bounds: &[usize],
    prefix: &[Vec<usize>],
    target: &[Vec<usize>],
    q: usize,
    i: usize,
    owners: &mut Vec<usize>,
    held: &mut Vec<Vec<usize>>,
) -> Option<Vec<usize>> {
    if i + 1 == bounds.len() {
        return (held == target).then(|| owners.clone());
    }
    let (lo, hi) = (bounds[i], bounds[i + 1]);
    for t in 0..q {
        if i > 0 && owners[i - 1] == t {
            continue;
        }
        let fits = (0..prefix.len()).all(|j| held[t][j] + prefix[j][hi] - prefix[j][lo] <= target[t][j]);
        if !fits {
            continue;
        }
        for (j, row) in prefix.iter().enumerate() {
            held[t][j] += row[hi] - row[lo];
        }
        owners[i] = t;
        let found = search_owners(bounds, prefix, target, q, i + 1, owners, held);
        for (j, row) in prefix.iter().enumerate() {
            held[t][j] -= row[hi] - row[lo];
        }
        if found.is_some() {
            return found;
        }
    }
    None
}
