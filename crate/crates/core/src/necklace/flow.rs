//! Per-color thief/bead flow graphs and cycle cancellation.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::continuous::ContinuousSplitting;
use super::{Necklace, NecklaceError};
use crate::rational::{is_integral, Rational};

/// Thief `thief` holds `amount` of split bead `beads[bead]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowEdge {
    pub thief: usize,
    /// Index into [`ColorFlowGraph::beads`].
    pub bead: usize,
    pub amount: Rational,
}

/// The beads of one color shared by two or more thieves, with the shares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorFlowGraph {
    pub color: usize,
    pub q: usize,
    pub remainder: usize,
    /// Necklace positions of the split beads, ascending.
    pub beads: Vec<usize>,
    /// Sorted by `(bead, thief)`.
    pub edges: Vec<FlowEdge>,
    /// Integer part of each thief's flow, `Σ u_e - r/q`.
    pub alpha: Vec<usize>,
}

/// Builds `G_j` from a fair continuous splitting.
pub fn build_flow_graph(
    cont: &ContinuousSplitting,
    neck: &Necklace,
    color: usize,
) -> Result<ColorFlowGraph, NecklaceError> {
    cont.check_shape(neck)?;
    let q = neck.q();
    let mut beads = Vec::new();
    let mut edges = Vec::new();
    for k in (0..neck.len()).filter(|&k| neck.color(k) == color) {
        let alloc = cont.allocation(k);
        if alloc.len() < 2 {
            continue;
        }
        let bead = beads.len();
        beads.push(k);
        edges.extend(alloc.into_iter().map(|(thief, amount)| FlowEdge { thief, bead, amount }));
    }
    let remainder = neck.remainder(color);
    let excess = Rational::new(remainder as i64, q as i64);
    let mut flow = vec![Rational::zero(); q];
    for e in &edges {
        flow[e.thief] += e.amount;
    }
    let mut alpha = Vec::with_capacity(q);
    for (thief, f) in flow.iter().enumerate() {
        let a = f - excess;
        if !is_integral(&a) || a < Rational::zero() {
            return Err(NecklaceError::NonIntegralAlpha { color, thief });
        }
        alpha.push(a.to_integer() as usize);
    }
    Ok(ColorFlowGraph {
        color,
        q,
        remainder,
        beads,
        edges,
        alpha,
    })
}

impl ColorFlowGraph {
    pub fn is_empty(&self) -> bool {
        self.beads.is_empty()
    }

    /// Checks the flow equalities and degree conditions exactly.
    pub fn check_flow(&self) -> Result<(), String> {
        let zero = Rational::zero();
        let one = Rational::one();
        let total: Rational = self.edges.iter().map(|e| e.amount).sum();
        if total != Rational::from_integer(self.beads.len() as i64) {
            return Err(format!("color {}: edge total {total} != {}", self.color, self.beads.len()));
        }
        if let Some(e) = self.edges.iter().find(|e| e.amount <= zero || e.amount >= one) {
            return Err(format!("color {}: edge amount {} outside (0,1)", self.color, e.amount));
        }
        for b in 0..self.beads.len() {
            let incident: Vec<&FlowEdge> = self.edges.iter().filter(|e| e.bead == b).collect();
            let sum: Rational = incident.iter().map(|e| e.amount).sum();
            if sum != one {
                return Err(format!("color {}: bead {} sums to {sum}", self.color, self.beads[b]));
            }
            if incident.len() < 2 {
                return Err(format!("color {}: bead {} has degree {}", self.color, self.beads[b], incident.len()));
            }
        }
        let excess = Rational::new(self.remainder as i64, self.q as i64);
        for t in 0..self.q {
            let incident: Vec<&FlowEdge> = self.edges.iter().filter(|e| e.thief == t).collect();
            let sum: Rational = incident.iter().map(|e| e.amount).sum();
            let want = Rational::from_integer(self.alpha[t] as i64) + excess;
            if sum != want {
                return Err(format!("color {}: thief {t} flow {sum} != {want}", self.color));
            }
            if !incident.is_empty() && incident.len() < self.alpha[t] + 1 {
                return Err(format!("color {}: thief {t} has degree {} <= alpha", self.color, incident.len()));
            }
        }
        Ok(())
    }

    /// Edge indices of some cycle, in traversal order, or `None` for a forest.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        // vertices: thieves 0..q, then beads
        let nv = self.q + self.beads.len();
        let mut adj = vec![Vec::new(); nv];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.thief].push((self.q + e.bead, i));
            adj[self.q + e.bead].push((e.thief, i));
        }
        let mut depth: Vec<Option<usize>> = vec![None; nv];
        let mut parent_edge: Vec<Option<usize>> = vec![None; nv];
        for root in 0..nv {
            if depth[root].is_some() {
                continue;
            }
            depth[root] = Some(0);
            let mut stack = vec![(root, 0usize)];
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                let Some(&(w, e)) = adj[v].get(*next) else {
                    stack.pop();
                    continue;
                };
                *next += 1;
                if parent_edge[v] == Some(e) {
                    continue;
                }
                match depth[w] {
                    None => {
                        depth[w] = Some(depth[v].unwrap() + 1);
                        parent_edge[w] = Some(e);
                        stack.push((w, 0));
                    }
                    // undirected DFS: a visited non-tree neighbour is an ancestor
                    Some(dw) if dw < depth[v].unwrap() => {
                        let mut cycle = vec![e];
                        let mut u = v;
                        while u != w {
                            let pe = parent_edge[u].unwrap();
                            cycle.push(pe);
                            let edge = &self.edges[pe];
                            u = if edge.thief == u { self.q + edge.bead } else { edge.thief };
                        }
                        return Some(cycle);
                    }
                    Some(_) => {}
                }
            }
        }
        None
    }

    pub fn is_forest(&self) -> bool {
        self.find_cycle().is_none()
    }
}

/// Removes every cycle from every `G_j` by shifting amounts around it.
///
/// Each step rotates the cycle to start at its lowest edge index, adds `δ` on
/// even positions and subtracts it on odd ones, where `δ` is the smallest
/// amount on an odd position. At least one edge vanishes per step. Shares are
/// then laid out again inside each touched bead, scaling every piece of a
/// thief by the same factor, so no cut is created.
pub fn cancel_cycles(cont: &ContinuousSplitting, neck: &Necklace) -> Result<ContinuousSplitting, NecklaceError> {
    let mut cur = cont.clone();
    for color in 0..neck.num_colors() {
        let mut steps = 0;
        loop {
            let g = build_flow_graph(&cur, neck, color)?;
            let Some(mut cycle) = g.find_cycle() else {
                break;
            };
            steps += 1;
            if steps > g.edges.len() + 1 {
                return Err(NecklaceError::Internal(format!("cycle cancellation on color {color} does not terminate")));
            }
            let start = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap();
            cycle.rotate_left(start);
            let delta = cycle
                .iter()
                .skip(1)
                .step_by(2)
                .map(|&e| g.edges[e].amount)
                .min()
                .unwrap();
            let mut targets: BTreeMap<usize, BTreeMap<usize, Rational>> = BTreeMap::new();
            for (pos, &e) in cycle.iter().enumerate() {
                let edge = g.edges[e];
                let k = g.beads[edge.bead];
                let new = if pos % 2 == 0 { edge.amount + delta } else { edge.amount - delta };
                targets
                    .entry(k)
                    .or_insert_with(|| cur.allocation(k))
                    .insert(edge.thief, new);
            }
            for (k, alloc) in targets {
                cur = reshape_bead(&cur, k, &alloc)?;
            }
        }
    }
    if cur.num_cuts() > cont.num_cuts() {
        return Err(NecklaceError::Internal("cycle cancellation added cuts".into()));
    }
    if !cur.is_fair(neck) {
        return Err(NecklaceError::Internal("cycle cancellation broke fairness".into()));
    }
    Ok(cur)
}

/// Re-lays bead `k` so thief `t` holds `alloc[t]` of it, scaling each of its
/// pieces in proportion and keeping their order.
fn reshape_bead(
    cont: &ContinuousSplitting,
    k: usize,
    alloc: &BTreeMap<usize, Rational>,
) -> Result<ContinuousSplitting, NecklaceError> {
    let old = cont.allocation(k);
    let pieces = cont.pieces(k);
    let mut segments = cont.segments();
    let mut pos = Rational::from_integer(k as i64);
    for pair in pieces.windows(2) {
        let p = pair[0];
        let scale = alloc[&p.thief] / old[&p.thief];
        pos += p.amount * scale;
        if pair[1].segment != p.segment + 1 {
            return Err(NecklaceError::Internal(format!("bead {k} pieces are not contiguous")));
        }
        segments[p.segment].1 = pos;
        segments[p.segment + 1].0 = pos;
    }
    Ok(ContinuousSplitting::from_segments(cont.beads(), &segments))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::necklace::{search_continuous, CONTINUOUS_PATTERN_BUDGET};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn four_bead_three_thief_graph() {
        let neck = Necklace::new(vec![0; 4], 3).unwrap();
        let cont = search_continuous(&neck, CONTINUOUS_PATTERN_BUDGET).unwrap();
        let g = build_flow_graph(&cont, &neck, 0).unwrap();
        assert_eq!(g.beads, vec![1, 2]);
        assert_eq!(g.alpha, vec![0, 1, 0]);
        let pairs: Vec<(usize, usize)> = g.edges.iter().map(|e| (e.thief, e.bead)).collect();
        assert_eq!(pairs, vec![(0, 0), (1, 0), (1, 1), (2, 1)]);
        assert!(g.check_flow().is_ok());
        assert!(g.is_forest());
    }

    #[test]
    fn four_thief_scenario_graph() {
        let neck = Necklace::new(vec![0, 0], 4).unwrap();
        let cont = ContinuousSplitting::new(2, vec![r(1, 2), r(1, 1), r(3, 2)], vec![0, 1, 2, 3]).unwrap();
        let g = build_flow_graph(&cont, &neck, 0).unwrap();
        assert!(g.edges.iter().all(|e| e.amount == r(1, 2)));
        assert_eq!(g.edges.len(), 4);
        assert_eq!(g.alpha, vec![0; 4]);
        assert!(g.check_flow().is_ok());
    }

    #[test]
    fn unsplit_color_has_empty_graph() {
        let neck = Necklace::new(vec![0, 0], 2).unwrap();
        let cont = ContinuousSplitting::new(2, vec![r(1, 1)], vec![0, 1]).unwrap();
        let g = build_flow_graph(&cont, &neck, 0).unwrap();
        assert!(g.is_empty() && g.is_forest() && g.check_flow().is_ok());
    }

    #[test]
    fn unfair_splitting_is_rejected() {
        let neck = Necklace::new(vec![0, 0], 2).unwrap();
        let cont = ContinuousSplitting::new(2, vec![r(1, 2)], vec![0, 1]).unwrap();
        assert_eq!(
            build_flow_graph(&cont, &neck, 0),
            Err(NecklaceError::NonIntegralAlpha { color: 0, thief: 0 })
        );
    }

    #[test]
    fn four_cycle_cancels_to_whole_beads() {
        let neck = Necklace::new(vec![0, 0], 2).unwrap();
        let cont = ContinuousSplitting::new(2, vec![r(1, 2), r(1, 1), r(3, 2)], vec![0, 1, 0, 1]).unwrap();
        let g = build_flow_graph(&cont, &neck, 0).unwrap();
        assert_eq!(g.find_cycle().map(|c| c.len()), Some(4));
        let out = cancel_cycles(&cont, &neck).unwrap();
        assert_eq!((out.cuts(), out.owners()), (&[r(1, 1)][..], &[0, 1][..]));
        assert!(build_flow_graph(&out, &neck, 0).unwrap().is_empty());
    }

    #[test]
    fn forest_is_a_fixed_point() {
        let neck = Necklace::new(vec![0; 4], 3).unwrap();
        let cont = search_continuous(&neck, CONTINUOUS_PATTERN_BUDGET).unwrap();
        assert_eq!(cancel_cycles(&cont, &neck).unwrap(), cont);
    }

    #[test]
    fn repeated_thief_in_one_bead() {
        // thief 0 holds both ends of bead 0, thief 1 the middle, and the
        // second bead is split the other way round
        let neck = Necklace::new(vec![0, 0], 2).unwrap();
        let cont = ContinuousSplitting::new(
            2,
            vec![r(1, 4), r(3, 4), r(5, 4), r(7, 4)],
            vec![0, 1, 0, 1, 0],
        )
        .unwrap();
        assert!(cont.is_fair(&neck));
        let g = build_flow_graph(&cont, &neck, 0).unwrap();
        assert_eq!(g.edges.len(), 4);
        let out = cancel_cycles(&cont, &neck).unwrap();
        assert!(out.is_fair(&neck));
        assert!(out.num_cuts() <= cont.num_cuts());
        assert!(build_flow_graph(&out, &neck, 0).unwrap().is_forest());
    }
}
