//! Continuous splittings with exact rational cut positions, and a desk-scale
//! exhaustive search for a fair one.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Necklace, NecklaceError};
use crate::linsolve::{self, Solution};
use crate::rational::Rational;

/// Default cap on the number of owner patterns tried by [`search_continuous`].
pub const CONTINUOUS_PATTERN_BUDGET: u64 = 1_000_000;

/// Cuts at rational positions in `(0, n)`; segment `i` goes to `owners[i]`.
///
/// Bead `k` occupies `[k, k+1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Wire", into = "Wire")]
pub struct ContinuousSplitting {
    beads: usize,
    cuts: Vec<Rational>,
    owners: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    beads: usize,
    #[serde(with = "crate::rational::vec")]
    cuts: Vec<Rational>,
    owners: Vec<usize>,
}

impl TryFrom<Wire> for ContinuousSplitting {
    type Error = NecklaceError;

    fn try_from(w: Wire) -> Result<Self, Self::Error> {
        ContinuousSplitting::new(w.beads, w.cuts, w.owners)
    }
}

impl From<ContinuousSplitting> for Wire {
    fn from(c: ContinuousSplitting) -> Self {
        Wire {
            beads: c.beads,
            cuts: c.cuts,
            owners: c.owners,
        }
    }
}

/// One thief's portion of one bead, coming from a single segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Piece {
    pub segment: usize,
    pub thief: usize,
    pub amount: Rational,
}

fn int(k: usize) -> Rational {
    Rational::from_integer(k as i64)
}

impl ContinuousSplitting {
    pub fn new(beads: usize, cuts: Vec<Rational>, owners: Vec<usize>) -> Result<Self, NecklaceError> {
        let bad = |msg: String| Err(NecklaceError::InvalidContinuous(msg));
        if beads == 0 {
            return bad("no beads".into());
        }
        if owners.len() != cuts.len() + 1 {
            return bad(format!("{} cuts need {} owners, got {}", cuts.len(), cuts.len() + 1, owners.len()));
        }
        if cuts.iter().any(|c| *c <= Rational::zero() || *c >= int(beads)) {
            return bad(format!("cuts must lie strictly inside (0, {beads})"));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return bad("cuts must be strictly increasing".into());
        }
        if owners.windows(2).any(|w| w[0] == w[1]) {
            return bad("consecutive segments share an owner".into());
        }
        Ok(Self { beads, cuts, owners })
    }

    /// Builds the canonical splitting from contiguous segments covering
    /// `[0, beads]`: zero-length segments are dropped and neighbours with the
    /// same owner merged.
    pub(crate) fn from_segments(beads: usize, segments: &[(Rational, Rational, usize)]) -> Self {
        let mut cuts = Vec::new();
        let mut owners: Vec<usize> = Vec::new();
        for &(start, end, owner) in segments {
            if end <= start {
                continue;
            }
            match owners.last() {
                Some(&last) if last == owner => {}
                Some(_) => {
                    cuts.push(start);
                    owners.push(owner);
                }
                None => owners.push(owner),
            }
        }
        Self { beads, cuts, owners }
    }

    pub fn beads(&self) -> usize {
        self.beads
    }

    pub fn cuts(&self) -> &[Rational] {
        &self.cuts
    }

    pub fn owners(&self) -> &[usize] {
        &self.owners
    }

    pub fn num_cuts(&self) -> usize {
        self.cuts.len()
    }

    /// `(start, end, owner)` for every segment, left to right.
    pub fn segments(&self) -> Vec<(Rational, Rational, usize)> {
        let mut bounds = Vec::with_capacity(self.cuts.len() + 2);
        bounds.push(Rational::zero());
        bounds.extend_from_slice(&self.cuts);
        bounds.push(int(self.beads));
        bounds
            .windows(2)
            .zip(&self.owners)
            .map(|(w, &o)| (w[0], w[1], o))
            .collect()
    }

    /// Portions of bead `k`, left to right.
    pub fn pieces(&self, k: usize) -> Vec<Piece> {
        let (lo, hi) = (int(k), int(k + 1));
        self.segments()
            .into_iter()
            .enumerate()
            .filter_map(|(segment, (s, e, thief))| {
                let amount = e.min(hi) - s.max(lo);
                (amount > Rational::zero()).then_some(Piece { segment, thief, amount })
            })
            .collect()
    }

    /// Amount of bead `k` held by each thief, same-thief pieces merged.
    pub fn allocation(&self, k: usize) -> BTreeMap<usize, Rational> {
        let mut out = BTreeMap::new();
        for p in self.pieces(k) {
            *out.entry(p.thief).or_insert_with(Rational::zero) += p.amount;
        }
        out
    }

    /// Fails unless the splitting has one position per bead of `neck` and
    /// only uses its thieves.
    pub fn check_shape(&self, neck: &Necklace) -> Result<(), NecklaceError> {
        if self.beads != neck.len() {
            return Err(NecklaceError::InvalidContinuous(format!(
                "splitting covers {} beads, necklace has {}",
                self.beads,
                neck.len()
            )));
        }
        if let Some(t) = self.owners.iter().find(|&&t| t >= neck.q()) {
            return Err(NecklaceError::InvalidContinuous(format!("thief {t} does not exist")));
        }
        Ok(())
    }

    /// `holdings[t][j]`: total amount of color `j` held by thief `t`.
    pub fn holdings(&self, neck: &Necklace) -> Result<Vec<Vec<Rational>>, NecklaceError> {
        self.check_shape(neck)?;
        let mut h = vec![vec![Rational::zero(); neck.num_colors()]; neck.q()];
        for (s, e, t) in self.segments() {
            let mut pos = s;
            while pos < e {
                let k = pos.to_integer() as usize;
                let next = e.min(int(k + 1));
                h[t][neck.color(k)] += next - pos;
                pos = next;
            }
        }
        Ok(h)
    }

    /// Every thief holds exactly `a_j / q` of every color.
    pub fn is_fair(&self, neck: &Necklace) -> bool {
        self.holdings(neck).is_ok_and(|h| {
            h.iter()
                .all(|row| row.iter().enumerate().all(|(j, &x)| x == neck.fair_share(j)))
        })
    }
}

/// Finds a fair continuous splitting with at most `(q-1)m` cuts.
///
/// Candidates are ordered by cut count, then owner pattern, then the
/// placement of each cut (inside bead `k` is slot `2k`, on the boundary after
/// bead `k` is slot `2k+1`). For each placement the positions of the cuts
/// inside beads are solved exactly; only uniquely determined solutions are
/// accepted.
pub fn search_continuous(neck: &Necklace, pattern_budget: u64) -> Result<ContinuousSplitting, NecklaceError> {
    let mut search = Search::new(neck);
    let mut patterns = 0u64;
    for cuts in 0..=neck.cut_bound() {
        let mut found = None;
        let mut exhausted = false;
        for_each_pattern(neck.q(), cuts + 1, &mut |pattern| {
            patterns += 1;
            if patterns > pattern_budget {
                exhausted = true;
                return false;
            }
            found = search.run(pattern);
            found.is_none()
        });
        if exhausted {
            return Err(NecklaceError::BudgetExceeded(format!(
                "more than {pattern_budget} owner patterns"
            )));
        }
        if let Some(split) = found {
            if !split.is_fair(neck) {
                return Err(NecklaceError::Internal("continuous search produced an unfair splitting".into()));
            }
            return Ok(split);
        }
    }
    Err(NecklaceError::Internal(format!(
        "no continuous fair splitting with at most {} cuts",
        neck.cut_bound()
    )))
}

/// Lexicographic sequences over `0..q` of length `len` with distinct
/// neighbours that use every thief. Stops when `visit` returns `false`.
fn for_each_pattern(q: usize, len: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(q: usize, len: usize, cur: &mut Vec<usize>, used: &mut [usize], visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == len {
            return visit(cur);
        }
        let distinct = used.iter().filter(|&&u| u > 0).count();
        if distinct + (len - cur.len()) < q {
            return true;
        }
        for t in 0..q {
            if cur.last() == Some(&t) {
                continue;
            }
            cur.push(t);
            used[t] += 1;
            let go_on = rec(q, len, cur, used, visit);
            used[t] -= 1;
            cur.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    if len >= q {
        rec(q, len, &mut Vec::with_capacity(len), &mut vec![0; q], visit);
    }
}

struct Search<'a> {
    neck: &'a Necklace,
    n: usize,
    /// `prefix[j][k]`: beads of color `j` among the first `k`.
    prefix: Vec<Vec<usize>>,
    /// Whole beads per thief and color already committed by the current placement.
    held: Vec<Vec<usize>>,
    slots: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(neck: &'a Necklace) -> Self {
        let n = neck.len();
        let m = neck.num_colors();
        let mut prefix = vec![vec![0; n + 1]; m];
        for (k, &c) in neck.beads().iter().enumerate() {
            for (j, row) in prefix.iter_mut().enumerate() {
                row[k + 1] = row[k] + usize::from(c == j);
            }
        }
        Self {
            neck,
            n,
            prefix,
            held: vec![vec![0; m]; neck.q()],
            slots: Vec::new(),
        }
    }

    fn run(&mut self, pattern: &[usize]) -> Option<ContinuousSplitting> {
        self.slots.clear();
        self.place(pattern, 0)
    }

    /// First whole bead after a cut in `slot` (or the necklace start).
    fn full_start(slot: Option<usize>) -> usize {
        slot.map_or(0, |s| s / 2 + 1)
    }

    /// One past the last whole bead before a cut in `slot` (or the end).
    fn full_end(&self, slot: Option<usize>) -> usize {
        slot.map_or(self.n, |s| s.div_ceil(2))
    }

    /// Adds (or removes) the whole beads between two slots to `thief`;
    /// returns whether no share exceeds `a_j / q`.
    fn commit(&mut self, thief: usize, from: Option<usize>, to: Option<usize>, add: bool) -> bool {
        let (lo, hi) = (Self::full_start(from), self.full_end(to));
        if hi <= lo {
            return true;
        }
        let q = self.neck.q();
        let mut ok = true;
        for (j, row) in self.prefix.iter().enumerate() {
            let d = row[hi] - row[lo];
            if add {
                self.held[thief][j] += d;
                ok &= self.held[thief][j] * q <= self.neck.count(j);
            } else {
                self.held[thief][j] -= d;
            }
        }
        ok
    }

    fn place(&mut self, pattern: &[usize], i: usize) -> Option<ContinuousSplitting> {
        let prev = self.slots.last().copied();
        if i + 1 == pattern.len() {
            let ok = self.commit(pattern[i], prev, None, true);
            let out = if ok { self.solve(pattern) } else { None };
            self.commit(pattern[i], prev, None, false);
            return out;
        }
        let min = match prev {
            None => 0,
            Some(s) if s % 2 == 0 => s,
            Some(s) => s + 1,
        };
        for s in min..2 * self.n - 1 {
            let ok = self.commit(pattern[i], prev, Some(s), true);
            let mut out = None;
            if ok {
                self.slots.push(s);
                out = self.place(pattern, i + 1);
                self.slots.pop();
            }
            self.commit(pattern[i], prev, Some(s), false);
            if out.is_some() {
                return out;
            }
            if !ok {
                // later slots only enlarge this segment
                break;
            }
        }
        None
    }

    /// Solves for the cuts lying inside beads and returns the splitting if
    /// every thief gets exactly its share.
    fn solve(&self, pattern: &[usize]) -> Option<ContinuousSplitting> {
        let q = self.neck.q();
        let slots = &self.slots;
        let mut offset: Vec<Option<Rational>> = vec![None; slots.len()];
        for (j, prefix) in self.prefix.iter().enumerate() {
            let cumulative = |slot: Option<usize>, end: bool| match slot {
                None if end => prefix[self.n],
                None => 0,
                Some(s) => prefix[s.div_ceil(2)],
            };
            let mut constant = vec![0i64; q];
            for (i, &t) in pattern.iter().enumerate() {
                let start = if i == 0 { None } else { Some(slots[i - 1]) };
                let end = slots.get(i).copied();
                constant[t] += cumulative(end, true) as i64 - cumulative(start, false) as i64;
            }
            let vars: Vec<usize> = (0..slots.len())
                .filter(|&i| slots[i] % 2 == 0 && self.neck.color(slots[i] / 2) == j)
                .collect();
            let a = self.neck.count(j) as i64;
            if vars.is_empty() {
                if constant.iter().any(|&c| c * q as i64 != a) {
                    return None;
                }
                continue;
            }
            let share = Rational::new(a, q as i64);
            let mut matrix = vec![vec![Rational::zero(); vars.len()]; q];
            for (v, &i) in vars.iter().enumerate() {
                matrix[pattern[i]][v] += Rational::one();
                matrix[pattern[i + 1]][v] -= Rational::one();
            }
            let rhs = constant.iter().map(|&c| share - Rational::from_integer(c)).collect();
            let Solution::Unique(x) = linsolve::solve(matrix, rhs) else {
                return None;
            };
            for (v, &i) in vars.iter().enumerate() {
                if x[v] <= Rational::zero() || x[v] >= Rational::one() {
                    return None;
                }
                offset[i] = Some(x[v]);
            }
        }
        let cuts: Vec<Rational> = slots
            .iter()
            .zip(&offset)
            .map(|(&s, x)| match x {
                Some(x) => int(s / 2) + x,
                None => int(s.div_ceil(2)),
            })
            .collect();
        ContinuousSplitting::new(self.n, cuts, pattern.to_vec()).ok()
    }
}
