//! Rounding split beads to single owners, and the end-to-end pipeline.

use std::collections::{BTreeMap, BTreeSet};

use super::continuous::{search_continuous, ContinuousSplitting};
use super::flow::{build_flow_graph, cancel_cycles, ColorFlowGraph};
use super::{verify_discrete, AdvantageSpec, DiscreteSplitting, Necklace, NecklaceError};
use crate::bfactor::{find_b_factor, max_bipartite_matching, BFactorOutcome, BipartiteGraph, DegreePrescription};
use crate::rational::Rational;

/// Largest number of whole-bead reassignments [`reachable_outcomes`] lists.
const OUTCOME_CAP: usize = 1_000_000;

fn precondition(msg: String) -> NecklaceError {
    NecklaceError::RoundingPrecondition(msg)
}

fn require_forest(g: &ColorFlowGraph) -> Result<(), NecklaceError> {
    if g.is_forest() {
        Ok(())
    } else {
        Err(precondition(format!("flow graph of color {} has a cycle", g.color)))
    }
}

fn require_remainder(g: &ColorFlowGraph, want: usize) -> Result<(), NecklaceError> {
    if g.remainder == want {
        Ok(())
    } else {
        Err(precondition(format!(
            "color {} has remainder {}, expected {want}",
            g.color, g.remainder
        )))
    }
}

fn require_thief(g: &ColorFlowGraph, t: usize) -> Result<(), NecklaceError> {
    if t < g.q {
        Ok(())
    } else {
        Err(precondition(format!("thief {t} does not exist")))
    }
}

/// Gives bead `k` to thief `t` for every edge `(t, k)` of a b-factor with
/// `b(thief) = alpha + extra`, `b(bead) = 1`.
fn round_by_factor(g: &ColorFlowGraph, extra: Option<usize>) -> Result<BTreeMap<usize, usize>, NecklaceError> {
    let graph = BipartiteGraph::new(g.q, g.beads.len(), g.edges.iter().map(|e| (e.thief, e.bead)).collect())
        .map_err(|e| NecklaceError::Internal(e.to_string()))?;
    let mut left = g.alpha.clone();
    if let Some(t) = extra {
        left[t] += 1;
    }
    let b = DegreePrescription {
        left,
        right: vec![1; g.beads.len()],
    };
    match find_b_factor(&graph, &b).map_err(|e| NecklaceError::Internal(e.to_string()))? {
        BFactorOutcome::Factor(f) => Ok(f
            .into_iter()
            .map(|i| (g.beads[g.edges[i].bead], g.edges[i].thief))
            .collect()),
        BFactorOutcome::NoFactor { witness } => Err(NecklaceError::Internal(format!(
            "no b-factor on the flow graph of color {} (witness {witness:?})",
            g.color
        ))),
    }
}

/// Remainder 1: the split beads go to thieves so that `chosen` ends with the
/// extra bead. Returns necklace position → thief.
pub fn round_color_r1(g: &ColorFlowGraph, chosen: usize) -> Result<BTreeMap<usize, usize>, NecklaceError> {
    require_remainder(g, 1)?;
    require_thief(g, chosen)?;
    require_forest(g)?;
    let sum: usize = g.alpha.iter().sum();
    if g.beads.len() != sum + 1 {
        return Err(precondition(format!(
            "color {}: {} split beads but alpha sums to {sum}",
            g.color,
            g.beads.len()
        )));
    }
    round_by_factor(g, Some(chosen))
}

/// Remainder `q - 1`: the `q - 1` split beads are matched to the thieves
/// other than `disadvantaged`.
pub fn round_color_rq1(g: &ColorFlowGraph, disadvantaged: usize) -> Result<BTreeMap<usize, usize>, NecklaceError> {
    require_remainder(g, g.q - 1)?;
    require_thief(g, disadvantaged)?;
    require_forest(g)?;
    if g.beads.len() != g.q - 1 || g.alpha.iter().any(|&a| a != 0) {
        return Err(NecklaceError::Internal(format!(
            "acyclic flow graph of color {} has {} split beads and alpha {:?}",
            g.color,
            g.beads.len(),
            g.alpha
        )));
    }
    let adj: Vec<Vec<usize>> = (0..g.beads.len())
        .map(|b| {
            g.edges
                .iter()
                .filter(|e| e.bead == b && e.thief != disadvantaged)
                .map(|e| e.thief)
                .collect()
        })
        .collect();
    let matching = max_bipartite_matching(&adj, g.q);
    matching
        .iter()
        .enumerate()
        .map(|(b, t)| {
            t.map(|t| (g.beads[b], t)).ok_or_else(|| {
                NecklaceError::Internal(format!("split bead {} of color {} is unmatched", g.beads[b], g.color))
            })
        })
        .collect()
}

/// Remainder 0: integral rerouting of the flow, each thief taking `alpha`
/// of the split beads.
pub fn round_color_r0(g: &ColorFlowGraph) -> Result<BTreeMap<usize, usize>, NecklaceError> {
    require_remainder(g, 0)?;
    require_forest(g)?;
    round_by_factor(g, None)
}

/// All stages of [`split_with_advantages`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecklaceSplit {
    pub continuous: ContinuousSplitting,
    pub cancelled: ContinuousSplitting,
    pub discrete: DiscreteSplitting,
}

/// A fair discrete splitting in which exactly the thieves of `spec` get the
/// extra bead, when every remainder is `0`, `1` or `q - 1`.
pub fn split_with_advantages(
    neck: &Necklace,
    spec: &AdvantageSpec,
    pattern_budget: u64,
) -> Result<NecklaceSplit, NecklaceError> {
    let q = neck.q();
    let unsupported: Vec<usize> = (0..neck.num_colors())
        .filter(|&j| {
            let r = neck.remainder(j);
            r != 0 && r != 1 && r != q - 1
        })
        .collect();
    if !unsupported.is_empty() {
        return Err(NecklaceError::UnsupportedRemainder { colors: unsupported });
    }
    let continuous = search_continuous(neck, pattern_budget)?;
    let cancelled = cancel_cycles(&continuous, neck)?;

    let mut owner = Vec::with_capacity(neck.len());
    for k in 0..neck.len() {
        let alloc = cancelled.allocation(k);
        owner.push(*alloc.keys().next().unwrap());
    }
    for j in 0..neck.num_colors() {
        let g = build_flow_graph(&cancelled, neck, j)?;
        if let Err(msg) = g.check_flow() {
            return Err(NecklaceError::Internal(msg));
        }
        if g.is_empty() {
            continue;
        }
        let advantaged = spec.advantaged(j);
        let rounded = match g.remainder {
            0 => round_color_r0(&g)?,
            1 => {
                let chosen = advantaged.and_then(|s| s.first().copied()).ok_or_else(|| missing(j))?;
                round_color_r1(&g, chosen)?
            }
            _ => {
                let adv = advantaged.ok_or_else(|| missing(j))?;
                let disadvantaged = (0..q).find(|t| !adv.contains(t)).ok_or_else(|| missing(j))?;
                round_color_rq1(&g, disadvantaged)?
            }
        };
        for (k, t) in rounded {
            owner[k] = t;
        }
    }
    let discrete = DiscreteSplitting { owner };
    if discrete.cuts() > cancelled.num_cuts() {
        return Err(NecklaceError::Internal(format!(
            "rounding produced {} cuts from {}",
            discrete.cuts(),
            cancelled.num_cuts()
        )));
    }
    if let Err(v) = verify_discrete(neck, spec, &discrete) {
        let msgs: Vec<String> = v.iter().map(ToString::to_string).collect();
        return Err(NecklaceError::Internal(format!("rounded splitting fails: {}", msgs.join("; "))));
    }
    Ok(NecklaceSplit {
        continuous,
        cancelled,
        discrete,
    })
}

fn missing(color: usize) -> NecklaceError {
    NecklaceError::InvalidSpec(format!("no advantaged thieves given for color {color}"))
}

/// One way of giving every bead wholly to one of its sharers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub owner: Vec<usize>,
    /// Per color, the thieves holding more than `⌊a_j / q⌋` beads.
    pub advantaged: Vec<BTreeSet<usize>>,
}

/// Every whole-bead reassignment reachable from `cont` by moving the cuts
/// inside beads, in lexicographic order of the owner vector.
pub fn reachable_outcomes(cont: &ContinuousSplitting, neck: &Necklace) -> Result<Vec<Outcome>, NecklaceError> {
    cont.check_shape(neck)?;
    let sharers: Vec<Vec<usize>> = (0..neck.len()).map(|k| cont.allocation(k).into_keys().collect()).collect();
    let total = sharers
        .iter()
        .try_fold(1usize, |acc, s| acc.checked_mul(s.len()))
        .filter(|&t| t <= OUTCOME_CAP);
    if total.is_none() {
        return Err(NecklaceError::BudgetExceeded(format!("more than {OUTCOME_CAP} outcomes")));
    }
    let mut outcomes = Vec::new();
    let mut choice = vec![0usize; neck.len()];
    loop {
        let owner: Vec<usize> = choice.iter().zip(&sharers).map(|(&c, s)| s[c]).collect();
        let split = DiscreteSplitting { owner };
        let holdings = split.holdings(neck);
        let advantaged = (0..neck.num_colors())
            .map(|j| {
                let floor = neck.count(j) / neck.q();
                (0..neck.q()).filter(|&t| holdings[t][j] > floor).collect()
            })
            .collect();
        outcomes.push(Outcome {
            owner: split.owner,
            advantaged,
        });
        // odometer, last bead fastest
        let Some(k) = (0..neck.len()).rev().find(|&k| choice[k] + 1 < sharers[k].len()) else {
            break;
        };
        choice[k] += 1;
        choice[k + 1..].fill(0);
    }
    Ok(outcomes)
}

/// Four thieves, two beads of one color, each bead halved between two
/// thieves. Rounding can only hand the extra beads to one thief per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImpossibilityReport {
    pub necklace: Necklace,
    pub continuous: ContinuousSplitting,
    pub outcomes: Vec<Outcome>,
}

impl ImpossibilityReport {
    /// An outcome advantaging exactly `target` on the single color, if any.
    pub fn reachable(&self, target: &BTreeSet<usize>) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| &o.advantaged[0] == target)
    }
}

pub fn demonstrate_r2_failure() -> ImpossibilityReport {
    let necklace = Necklace::new(vec![0, 0], 4).expect("fixed necklace");
    let half = |k: i64| Rational::new(k, 2);
    let continuous =
        ContinuousSplitting::new(2, vec![half(1), half(2), half(3)], vec![0, 1, 2, 3]).expect("fixed splitting");
    let outcomes = reachable_outcomes(&continuous, &necklace).expect("four outcomes");
    ImpossibilityReport {
        necklace,
        continuous,
        outcomes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::necklace::{search_discrete, CONTINUOUS_PATTERN_BUDGET, DISCRETE_BUDGET};

    fn graph(beads: &[usize], q: usize) -> (Necklace, ColorFlowGraph) {
        let neck = Necklace::new(beads.to_vec(), q).unwrap();
        let cont = search_continuous(&neck, CONTINUOUS_PATTERN_BUDGET).unwrap();
        let g = build_flow_graph(&cont, &neck, 0).unwrap();
        (neck, g)
    }

    fn counts(neck: &Necklace, base: &ContinuousSplitting, rounded: &BTreeMap<usize, usize>) -> Vec<usize> {
        let mut owner: Vec<usize> = (0..neck.len()).map(|k| *base.allocation(k).keys().next().unwrap()).collect();
        for (&k, &t) in rounded {
            owner[k] = t;
        }
        DiscreteSplitting { owner }.holdings(neck).iter().map(|h| h[0]).collect()
    }

    fn spec(neck: &Necklace, thieves: &[usize]) -> AdvantageSpec {
        AdvantageSpec::new(neck, [(0, thieves.iter().copied().collect())].into_iter().collect()).unwrap()
    }

    #[test]
    fn r1_examples() {
        let (neck, g) = graph(&[0; 4], 3);
        let cont = search_continuous(&neck, CONTINUOUS_PATTERN_BUDGET).unwrap();
        let to_last = round_color_r1(&g, 2).unwrap();
        assert_eq!(to_last, BTreeMap::from([(1, 1), (2, 2)]));
        assert_eq!(counts(&neck, &cont, &to_last), vec![1, 1, 2]);
        let to_middle = round_color_r1(&g, 1).unwrap();
        assert_eq!(counts(&neck, &cont, &to_middle), vec![1, 2, 1]);
        assert!(round_color_r0(&g).is_err());
        assert!(round_color_r1(&g, 3).is_err());
    }

    #[test]
    fn rq1_examples() {
        let (neck, g) = graph(&[0; 5], 3);
        let cont = search_continuous(&neck, CONTINUOUS_PATTERN_BUDGET).unwrap();
        assert_eq!(g.beads, vec![1, 3]);
        let m = round_color_rq1(&g, 1).unwrap();
        assert_eq!(m, BTreeMap::from([(1, 0), (3, 2)]));
        assert_eq!(counts(&neck, &cont, &m), vec![2, 1, 2]);
        let m = round_color_rq1(&g, 2).unwrap();
        assert_eq!(m, BTreeMap::from([(1, 0), (3, 1)]));
        assert_eq!(counts(&neck, &cont, &m), vec![2, 2, 1]);
        assert!(round_color_r1(&g, 0).is_err());
    }

    #[test]
    fn two_thieves_single_bead() {
        let (_, g) = graph(&[0], 2);
        assert_eq!(round_color_rq1(&g, 1).unwrap(), BTreeMap::from([(0, 0)]));
        assert_eq!(round_color_r1(&g, 1).unwrap(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn r0_on_empty_graph() {
        let (_, g) = graph(&[0, 0], 2);
        assert!(g.is_empty());
        assert!(round_color_r0(&g).unwrap().is_empty());
    }

    #[test]
    fn pipeline_examples() {
        let neck = Necklace::new(vec![0; 4], 3).unwrap();
        let out = split_with_advantages(&neck, &spec(&neck, &[2]), CONTINUOUS_PATTERN_BUDGET).unwrap();
        assert_eq!(out.discrete.owner, vec![0, 1, 2, 2]);
        assert_eq!(out.discrete.cuts(), 2);

        let neck = Necklace::new(vec![0; 5], 3).unwrap();
        let out = split_with_advantages(&neck, &spec(&neck, &[0, 2]), CONTINUOUS_PATTERN_BUDGET).unwrap();
        assert_eq!(out.discrete.owner, vec![0, 0, 1, 2, 2]);

        let neck = Necklace::new(vec![0, 1, 0, 1], 2).unwrap();
        let out = split_with_advantages(&neck, &AdvantageSpec::none(), CONTINUOUS_PATTERN_BUDGET).unwrap();
        assert!(out.discrete.cuts() <= 2);
        assert!(search_discrete(&neck, &AdvantageSpec::none(), 2, DISCRETE_BUDGET).unwrap().is_some());
    }

    #[test]
    fn pipeline_rejects_remainder_two_of_four() {
        let neck = Necklace::new(vec![0, 0], 4).unwrap();
        let s = spec(&neck, &[0, 1]);
        assert_eq!(
            split_with_advantages(&neck, &s, CONTINUOUS_PATTERN_BUDGET),
            Err(NecklaceError::UnsupportedRemainder { colors: vec![0] })
        );
    }

    #[test]
    fn four_thief_failure() {
        let report = demonstrate_r2_failure();
        assert_eq!(report.outcomes.len(), 4);
        assert!(report.reachable(&BTreeSet::from([0, 1])).is_none());
        assert_eq!(report.reachable(&BTreeSet::from([0, 2])).unwrap().owner, vec![0, 2]);
        assert!(report.reachable(&BTreeSet::from([1, 3])).is_some());
    }
}
