//! Fair splits of colored paths into independent (or `q`-stable) sets.
//!
//! The two-set solver removes one vertex per color and alternates the
//! survivors between `S1` and `S2` along the path. Once the removed vertices
//! are fixed the alternation is forced up to a global swap, so the search
//! runs over `∏ |V_j|` removal vectors in lexicographic order and keeps the
//! first one whose alternation puts at most `|V_j| / 2` vertices of each
//! color on either side. Such a removal vector always exists.

use std::fmt;
use std::ops::ControlFlow;

use log::warn;
use thiserror::Error;

use crate::coloring::ColoredPath;
use crate::rational::{div_ceil, div_floor};

/// Default cap on `(q + 1)^n` for [`solve_qstable_bruteforce`].
pub const QSTABLE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathSplitError {
    #[error("internal invariant failed: {0}")]
    Internal(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search space of {states} states exceeds the budget of {budget}")]
    BudgetExceeded { states: String, budget: u64 },
    #[error("divisor must be positive")]
    ZeroDivisor,
}

/// Two independent sets covering all vertices except one per color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSplit {
    /// `removed[j]` is the vertex of color `j` left out.
    pub removed: Vec<usize>,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
}

/// One failed clause of a split's defining properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A vertex index outside the path.
    Range { vertex: usize },
    /// The removed vertices do not consist of exactly the right number per color.
    RemovedColor { color: usize },
    /// A vertex is in two of the parts (classes or removed).
    Overlap { vertex: usize },
    /// A vertex is in no part.
    Uncovered { vertex: usize },
    /// The classes do not cover all but the removed vertices of a color.
    Coverage { color: usize },
    /// Two members of a class are closer than allowed.
    Stability { class: usize, a: usize, b: usize },
    /// Class sizes differ by more than one.
    Balance { min: usize, max: usize },
    LowerBound { class: usize, color: usize, count: usize },
    UpperBound { class: usize, color: usize, count: usize },
    /// The wrong number of classes.
    ClassCount { expected: usize, got: usize },
    /// Cycle edges induced by `S1`, `S2` break the cycle guarantee.
    CycleEdges { induced: [usize; 2] },
}

impl Violation {
    /// Short clause name.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::Range { .. } => "range",
            Violation::RemovedColor { .. } => "removed-color",
            Violation::Overlap { .. } => "overlap",
            Violation::Uncovered { .. } => "uncovered",
            Violation::Coverage { .. } => "coverage",
            Violation::Stability { .. } => "independence",
            Violation::Balance { .. } => "balance",
            Violation::LowerBound { .. } => "lower-bound",
            Violation::UpperBound { .. } => "upper-bound",
            Violation::ClassCount { .. } => "class-count",
            Violation::CycleEdges { .. } => "cycle-edges",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}", self.kind(), self)
    }
}

/// Removes one vertex per color and alternates the rest between two sets.
pub fn solve_pair_split(path: &ColoredPath) -> Result<PairSplit, PathSplitError> {
    let m = path.num_colors();
    let n = path.len();
    let mut choice = vec![0usize; m];
    let mut removed_mask = vec![false; n];
    loop {
        let removed: Vec<usize> = (0..m).map(|j| path.class(j)[choice[j]]).collect();
        removed_mask.iter_mut().for_each(|r| *r = false);
        for &v in &removed {
            removed_mask[v] = true;
        }
        // counts[j] = (survivors of color j at even rank, at odd rank)
        let mut counts = vec![(0usize, 0usize); m];
        for (rank, v) in (0..n).filter(|&v| !removed_mask[v]).enumerate() {
            let c = &mut counts[path.color_of(v)];
            if rank % 2 == 0 {
                c.0 += 1;
            } else {
                c.1 += 1;
            }
        }
        // the bound is symmetric in the two sets, so the `+` phase is taken
        let fits = counts
            .iter()
            .enumerate()
            .all(|(j, &(a, b))| 2 * a.max(b) <= path.class(j).len());
        if fits {
            let survivors: Vec<usize> = (0..n).filter(|&v| !removed_mask[v]).collect();
            let s1 = survivors.iter().copied().step_by(2).collect();
            let s2 = survivors.iter().copied().skip(1).step_by(2).collect();
            return Ok(PairSplit { removed, s1, s2 });
        }
        // lexicographic successor of the removal vector
        let mut j = m;
        loop {
            if j == 0 {
                return Err(PathSplitError::Internal(
                    "no removal vector admits a fair alternating split".into(),
                ));
            }
            j -= 1;
            choice[j] += 1;
            if choice[j] < path.class(j).len() {
                break;
            }
            choice[j] = 0;
        }
    }
}

/// Clause-by-clause check of a two-set split on a path.
pub fn verify_pair_split(path: &ColoredPath, cand: &PairSplit) -> Result<(), Vec<Violation>> {
    let as_stable = StableSplit {
        q: 2,
        removed: cand.removed.iter().map(|&v| vec![v]).collect(),
        classes: vec![cand.s1.clone(), cand.s2.clone()],
    };
    let mut violations = stable_violations(path, &as_stable, true);
    // a removed list of the wrong length shows up as a color mismatch
    if cand.removed.len() != path.num_colors() {
        violations.push(Violation::RemovedColor {
            color: cand.removed.len().min(path.num_colors()),
        });
    }
    finish(violations)
}

fn finish(mut violations: Vec<Violation>) -> Result<(), Vec<Violation>> {
    if violations.is_empty() {
        Ok(())
    } else {
        violations.dedup();
        Err(violations)
    }
}

/// A pair split of a cycle, with the number of cycle edges inside each set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSplit {
    pub split: PairSplit,
    pub induced_edges: [usize; 2],
}

/// Number of edges of the `n`-cycle with both ends in `set`.
pub fn cycle_induced_edges(n: usize, set: &[usize]) -> usize {
    let mut member = vec![false; n];
    for &v in set {
        member[v] = true;
    }
    (0..n).filter(|&v| member[v] && member[(v + 1) % n]).count()
}

/// Splits a colored cycle by cutting the edge `{n-1, 0}` and solving the path.
pub fn solve_cycle_split(cycle: &ColoredPath) -> Result<CycleSplit, PathSplitError> {
    let n = cycle.len();
    if n < 3 {
        return Err(PathSplitError::Precondition(format!(
            "a cycle needs at least 3 vertices, got {n}"
        )));
    }
    let split = solve_pair_split(cycle)?;
    let induced_edges = [
        cycle_induced_edges(n, &split.s1),
        cycle_induced_edges(n, &split.s2),
    ];
    Ok(CycleSplit {
        split,
        induced_edges,
    })
}

/// Checks a cycle split: all path clauses, plus one set independent in the
/// cycle with `⌊(n-m)/2⌋` vertices and the other inducing at most
/// `⌈(n-m)/2⌉ - ⌊(n-m)/2⌋` cycle edges.
pub fn verify_cycle_split(cycle: &ColoredPath, cand: &CycleSplit) -> Result<(), Vec<Violation>> {
    let mut violations = match verify_pair_split(cycle, &cand.split) {
        Ok(()) => Vec::new(),
        Err(v) => v,
    };
    let n = cycle.len();
    let covered = (n - cycle.num_colors().min(n)) as i64;
    let floor_half = div_floor(covered, 2) as usize;
    let slack = (div_ceil(covered, 2) - div_floor(covered, 2)) as usize;
    let sets = [&cand.split.s1, &cand.split.s2];
    let induced = [
        cycle_induced_edges(n, sets[0]),
        cycle_induced_edges(n, sets[1]),
    ];
    let ok = (0..2).any(|i| induced[i] == 0 && sets[i].len() == floor_half && induced[1 - i] <= slack);
    if !ok || induced != cand.induced_edges {
        violations.push(Violation::CycleEdges { induced });
    }
    finish(violations)
}

/// `q` pairwise disjoint `q`-stable sets covering all but `q - 1` vertices
/// of every color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableSplit {
    pub q: usize,
    /// `removed[j]`: the `q - 1` uncovered vertices of color `j`, ascending.
    pub removed: Vec<Vec<usize>>,
    /// `classes[i]`: members of `S_i`, ascending.
    pub classes: Vec<Vec<usize>>,
}

impl From<PairSplit> for StableSplit {
    fn from(p: PairSplit) -> Self {
        StableSplit {
            q: 2,
            removed: p.removed.into_iter().map(|v| vec![v]).collect(),
            classes: vec![p.s1, p.s2],
        }
    }
}

/// `⌊(|V_j| + 1) / q⌋ - 1`, clamped at zero.
pub fn conjectured_lower_bound(class_size: usize, q: usize) -> usize {
    ((class_size + 1) / q).saturating_sub(1)
}

fn stable_violations(path: &ColoredPath, cand: &StableSplit, enforce_upper: bool) -> Vec<Violation> {
    let n = path.len();
    let m = path.num_colors();
    let q = cand.q;
    let mut out = Vec::new();
    if cand.classes.len() != q {
        out.push(Violation::ClassCount {
            expected: q,
            got: cand.classes.len(),
        });
    }
    let mut owner_count = vec![0usize; n];
    let all = cand.removed.iter().flatten().chain(cand.classes.iter().flatten());
    for &v in all {
        if v >= n {
            out.push(Violation::Range { vertex: v });
        } else {
            owner_count[v] += 1;
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (v, &c) in owner_count.iter().enumerate() {
        if c > 1 {
            out.push(Violation::Overlap { vertex: v });
        } else if c == 0 {
            out.push(Violation::Uncovered { vertex: v });
        }
    }
    for j in 0..m {
        let listed = cand.removed.get(j).map_or(&[][..], Vec::as_slice);
        if listed.len() != q - 1 || listed.iter().any(|&v| path.color_of(v) != j) {
            out.push(Violation::RemovedColor { color: j });
        }
    }
    let counts: Vec<Vec<usize>> = cand
        .classes
        .iter()
        .map(|class| {
            let mut c = vec![0; m];
            for &v in class {
                c[path.color_of(v)] += 1;
            }
            c
        })
        .collect();
    for j in 0..m {
        let covered: usize = counts.iter().map(|c| c[j]).sum();
        if covered + (q - 1) != path.class(j).len() {
            out.push(Violation::Coverage { color: j });
        }
    }
    for (i, class) in cand.classes.iter().enumerate() {
        let mut sorted = class.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[1] - w[0] < q) {
            out.push(Violation::Stability {
                class: i,
                a: w[0],
                b: w[1],
            });
        }
    }
    if let (Some(min), Some(max)) = (
        cand.classes.iter().map(Vec::len).min(),
        cand.classes.iter().map(Vec::len).max(),
    ) {
        if max > min + 1 {
            out.push(Violation::Balance { min, max });
        }
    }
    for (i, c) in counts.iter().enumerate() {
        for j in 0..m {
            let size = path.class(j).len();
            // for q = 2 this equals ⌈|V_j|/2 - 1⌉
            let lower = conjectured_lower_bound(size, q);
            if c[j] < lower {
                out.push(Violation::LowerBound {
                    class: i,
                    color: j,
                    count: c[j],
                });
            }
            if enforce_upper && q * c[j] > size {
                out.push(Violation::UpperBound {
                    class: i,
                    color: j,
                    count: c[j],
                });
            }
        }
    }
    out
}

/// Clause-by-clause check of a `q`-stable split; distances are path distances.
pub fn verify_qstable_split(
    path: &ColoredPath,
    q: usize,
    cand: &StableSplit,
    enforce_upper: bool,
) -> Result<(), Vec<Violation>> {
    if cand.q != q {
        return Err(vec![Violation::ClassCount {
            expected: q,
            got: cand.classes.len(),
        }]);
    }
    finish(stable_violations(path, cand, enforce_upper))
}

/// Exhaustive search for `q`-stable splits.
#[derive(Debug, Clone)]
pub struct QStableSearch {
    pub q: usize,
    pub enforce_upper: bool,
    /// Cap on `(q + 1)^n`; `None` forces the search regardless of size.
    pub budget: Option<u64>,
    /// Replaces the per-color lower bound `⌊(|V_j|+1)/q⌋ - 1`.
    pub lower_bound_override: Option<usize>,
}

impl QStableSearch {
    pub fn new(q: usize) -> Self {
        Self {
            q,
            enforce_upper: false,
            budget: Some(QSTABLE_BUDGET),
            lower_bound_override: None,
        }
    }

    fn check(&self, path: &ColoredPath) -> Result<(), PathSplitError> {
        let q = self.q;
        if q == 0 {
            return Err(PathSplitError::Precondition("q must be positive".into()));
        }
        if let Some(j) = (0..path.num_colors()).find(|&j| path.class(j).len() + 1 < q) {
            return Err(PathSplitError::Precondition(format!(
                "color {j} has fewer than q - 1 = {} vertices",
                q - 1
            )));
        }
        if let Some(budget) = self.budget {
            let states = (q as u64 + 1).checked_pow(path.len() as u32);
            if states.is_none_or(|s| s > budget) {
                return Err(PathSplitError::BudgetExceeded {
                    states: format!("{}^{}", q + 1, path.len()),
                    budget,
                });
            }
        }
        Ok(())
    }

    /// Visits every valid split, up to renaming of the classes (a class is
    /// opened only after all lower-numbered ones).
    pub fn for_each<F>(&self, path: &ColoredPath, mut visit: F) -> Result<(), PathSplitError>
    where
        F: FnMut(&StableSplit) -> ControlFlow<()>,
    {
        self.check(path)?;
        let m = path.num_colors();
        let n = path.len();
        let q = self.q;
        let sizes: Vec<usize> = (0..m).map(|j| path.class(j).len()).collect();
        let lower: Vec<usize> = sizes
            .iter()
            .map(|&s| self.lower_bound_override.unwrap_or_else(|| conjectured_lower_bound(s, q)))
            .collect();
        let covered = n - (q - 1) * m;
        let mut state = DfsState {
            path,
            q,
            enforce_upper: self.enforce_upper,
            sizes,
            lower,
            max_class: covered.div_ceil(q),
            min_class: covered / q,
            assign: vec![None; n],
            last: vec![None; q],
            class_len: vec![0; q],
            counts: vec![vec![0; m]; q],
            discards: vec![0; m],
            remaining: (0..m).map(|j| path.class(j).len()).collect(),
            opened: 0,
        };
        let _ = state.dfs(0, &mut visit);
        Ok(())
    }

    /// First valid split in search order, or `None`.
    pub fn first(&self, path: &ColoredPath) -> Result<Option<StableSplit>, PathSplitError> {
        let mut found = None;
        self.for_each(path, |s| {
            found = Some(s.clone());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }
}

struct DfsState<'a> {
    path: &'a ColoredPath,
    q: usize,
    enforce_upper: bool,
    sizes: Vec<usize>,
    lower: Vec<usize>,
    max_class: usize,
    min_class: usize,
    assign: Vec<Option<usize>>,
    last: Vec<Option<usize>>,
    class_len: Vec<usize>,
    counts: Vec<Vec<usize>>,
    discards: Vec<usize>,
    remaining: Vec<usize>,
    opened: usize,
}

impl DfsState<'_> {
    /// Can the unassigned vertices of color `c` still meet every demand?
    fn color_feasible(&self, c: usize) -> bool {
        let need_discard = self.q - 1 - self.discards[c];
        let need_fill: usize = self
            .counts
            .iter()
            .map(|row| self.lower[c].saturating_sub(row[c]))
            .sum();
        need_discard + need_fill <= self.remaining[c]
    }

    fn dfs<F>(&mut self, v: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&StableSplit) -> ControlFlow<()>,
    {
        let n = self.path.len();
        if v == n {
            if self.class_len.iter().any(|&l| l < self.min_class) {
                return ControlFlow::Continue(());
            }
            return visit(&self.to_split());
        }
        let c = self.path.color_of(v);
        self.remaining[c] -= 1;
        let limit = (self.opened + 1).min(self.q);
        for k in 0..limit {
            let far = self.last[k].is_none_or(|l| v - l >= self.q);
            let fits_upper = !self.enforce_upper || self.q * (self.counts[k][c] + 1) <= self.sizes[c];
            if !far || !fits_upper || self.class_len[k] == self.max_class {
                continue;
            }
            let prev_last = self.last[k];
            let prev_opened = self.opened;
            self.last[k] = Some(v);
            self.class_len[k] += 1;
            self.counts[k][c] += 1;
            self.assign[v] = Some(k);
            self.opened = self.opened.max(k + 1);
            if self.color_feasible(c) {
                self.dfs(v + 1, visit)?;
            }
            self.opened = prev_opened;
            self.assign[v] = None;
            self.counts[k][c] -= 1;
            self.class_len[k] -= 1;
            self.last[k] = prev_last;
        }
        if self.discards[c] + 1 < self.q {
            self.discards[c] += 1;
            if self.color_feasible(c) {
                self.dfs(v + 1, visit)?;
            }
            self.discards[c] -= 1;
        }
        self.remaining[c] += 1;
        ControlFlow::Continue(())
    }

    fn to_split(&self) -> StableSplit {
        let m = self.path.num_colors();
        let mut removed = vec![Vec::new(); m];
        let mut classes = vec![Vec::new(); self.q];
        for (v, a) in self.assign.iter().enumerate() {
            match a {
                Some(k) => classes[*k].push(v),
                None => removed[self.path.color_of(v)].push(v),
            }
        }
        StableSplit {
            q: self.q,
            removed,
            classes,
        }
    }
}

/// Brute-force search for a `q`-stable split; `Ok(None)` means none exists.
pub fn solve_qstable_bruteforce(
    path: &ColoredPath,
    q: usize,
    enforce_upper: bool,
    budget: Option<u64>,
) -> Result<Option<StableSplit>, PathSplitError> {
    let search = QStableSearch {
        q,
        enforce_upper,
        budget,
        lower_bound_override: None,
    };
    let found = search.first(path)?;
    if found.is_none() {
        warn!(
            "no {q}-stable split (enforce_upper = {enforce_upper}) for colors {:?}: conjecture counterexample candidate",
            path.colors()
        );
    }
    Ok(found)
}

/// A solver for the `q`-stable split problem at a given `q`.
pub type Subsolver<'a> = &'a dyn Fn(&ColoredPath, usize) -> Result<StableSplit, PathSplitError>;

/// Builds a `q1·q2` split: a `q1` split `T_1..T_{q1}` of the path, then a
/// `q2` split of each `T_i` read as a path in its own right.
pub fn compose_splits(
    path: &ColoredPath,
    q1: usize,
    q2: usize,
    subsolver: Subsolver<'_>,
) -> Result<StableSplit, PathSplitError> {
    let q = q1 * q2;
    if q == 0 {
        return Err(PathSplitError::Precondition("q1 and q2 must be positive".into()));
    }
    if let Some(j) = (0..path.num_colors()).find(|&j| path.class(j).len() + 1 < q) {
        return Err(PathSplitError::Precondition(format!(
            "color {j} has fewer than q - 1 = {} vertices",
            q - 1
        )));
    }
    let outer = subsolver(path, q1)?;
    let m = path.num_colors();
    let mut removed = outer.removed.clone();
    removed.resize(m, Vec::new());
    let mut classes = Vec::with_capacity(q);
    for part in &outer.classes {
        let mut members = part.clone();
        members.sort_unstable();
        if members.is_empty() {
            // only possible when q2 = 1 and the outer class is empty
            classes.push(Vec::new());
            continue;
        }
        // compact the colors present in this part to 0..k
        let mut remap = vec![usize::MAX; m];
        let mut back = Vec::new();
        for &v in &members {
            let c = path.color_of(v);
            if remap[c] == usize::MAX {
                remap[c] = back.len();
                back.push(c);
            }
        }
        let sub_path = ColoredPath::new(members.iter().map(|&v| remap[path.color_of(v)]).collect())
            .map_err(|e| PathSplitError::Internal(e.to_string()))?;
        if q2 > 1 && back.len() != m {
            return Err(PathSplitError::Internal(
                "an outer class misses a color entirely".into(),
            ));
        }
        let inner = subsolver(&sub_path, q2)?;
        for (local_color, verts) in inner.removed.iter().enumerate() {
            removed[back[local_color]].extend(verts.iter().map(|&i| members[i]));
        }
        for class in &inner.classes {
            classes.push(class.iter().map(|&i| members[i]).collect());
        }
    }
    for r in &mut removed {
        r.sort_unstable();
    }
    Ok(StableSplit { q, removed, classes })
}

/// The `q = 1` split: one class holding every vertex.
pub fn trivial_split(path: &ColoredPath) -> StableSplit {
    StableSplit {
        q: 1,
        removed: vec![Vec::new(); path.num_colors()],
        classes: vec![(0..path.len()).collect()],
    }
}

/// Solves `q = 2^k` by repeated composition of the two-set solver.
pub fn power_of_two_split(path: &ColoredPath, q: usize) -> Result<StableSplit, PathSplitError> {
    match q {
        0 => Err(PathSplitError::Precondition("q must be positive".into())),
        1 => Ok(trivial_split(path)),
        2 => solve_pair_split(path).map(StableSplit::from),
        _ if q.is_power_of_two() => compose_splits(path, 2, q / 2, &power_of_two_split),
        _ => Err(PathSplitError::Precondition(format!("{q} is not a power of two"))),
    }
}

/// Evaluates `⌊⌊a/b⌋/c⌋ = ⌊a/(bc)⌋` and `⌈⌈a/b⌉/c⌉ = ⌈a/(bc)⌉` with
/// rounding toward negative (resp. positive) infinity.
pub fn floor_ceil_identities(a: i64, b: i64, c: i64) -> Result<(bool, bool), PathSplitError> {
    if b <= 0 || c <= 0 {
        return Err(PathSplitError::ZeroDivisor);
    }
    let floor_ok = div_floor(div_floor(a, b), c) == div_floor(a, b * c);
    let ceil_ok = div_ceil(div_ceil(a, b), c) == div_ceil(a, b * c);
    Ok((floor_ok, ceil_ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(classes: &[Vec<usize>]) -> ColoredPath {
        ColoredPath::from_classes(classes).unwrap()
    }

    fn kinds(r: Result<(), Vec<Violation>>) -> Vec<&'static str> {
        r.err().unwrap_or_default().iter().map(Violation::kind).collect()
    }

    #[test]
    fn pair_split_two_colors() {
        // first success in lexicographic removal order is (0, 2)
        let p = path(&[vec![0, 1], vec![2, 3]]);
        let s = solve_pair_split(&p).unwrap();
        assert_eq!(s.removed, vec![0, 2]);
        assert_eq!((s.s1.as_slice(), s.s2.as_slice()), (&[1][..], &[3][..]));
        assert!(verify_pair_split(&p, &s).is_ok());
    }

    #[test]
    fn alternative_pair_split_is_also_valid() {
        let p = path(&[vec![0, 1], vec![2, 3]]);
        let alt = PairSplit {
            removed: vec![1, 2],
            s1: vec![0],
            s2: vec![3],
        };
        assert!(verify_pair_split(&p, &alt).is_ok());
    }

    #[test]
    fn pair_split_single_color() {
        let p = path(&[vec![0, 1]]);
        let s = solve_pair_split(&p).unwrap();
        assert_eq!(s.removed, vec![0]);
        assert_eq!(s.s1, vec![1]);
        assert!(s.s2.is_empty());
        let one = ColoredPath::new(vec![0]).unwrap();
        let s = solve_pair_split(&one).unwrap();
        assert_eq!(s.removed, vec![0]);
        assert!(s.s1.is_empty() && s.s2.is_empty());
    }

    #[test]
    fn pair_split_interleaved_colors() {
        let p = path(&[vec![0, 3], vec![1, 4], vec![2, 5]]);
        let s = solve_pair_split(&p).unwrap();
        assert_eq!(s.s1.len() + s.s2.len(), 3);
        let mut sizes = [s.s1.len(), s.s2.len()];
        sizes.sort();
        assert_eq!(sizes, [1, 2]);
        assert!(verify_pair_split(&p, &s).is_ok());
    }

    #[test]
    fn verifier_catches_adjacent_and_double_removal() {
        let p = path(&[vec![0, 1], vec![2, 3]]);
        let adjacent = PairSplit {
            removed: vec![0, 3],
            s1: vec![1, 2],
            s2: vec![],
        };
        assert!(kinds(verify_pair_split(&p, &adjacent)).contains(&"independence"));
        let double = PairSplit {
            removed: vec![0, 1],
            s1: vec![],
            s2: vec![3],
        };
        let k = kinds(verify_pair_split(&p, &double));
        assert!(k.contains(&"coverage"), "{k:?}");
    }

    #[test]
    fn cycle_split_even_and_odd() {
        let even = path(&[vec![0, 1], vec![2, 3]]);
        let cs = solve_cycle_split(&even).unwrap();
        assert_eq!(cs.induced_edges, [0, 0]);
        assert!(verify_cycle_split(&even, &cs).is_ok());

        let odd = path(&[vec![0, 1, 2], vec![3, 4]]);
        let cs = solve_cycle_split(&odd).unwrap();
        assert!(cs.induced_edges.iter().sum::<usize>() <= 1);
        assert!(verify_cycle_split(&odd, &cs).is_ok());

        let tiny = path(&[vec![0, 1]]);
        assert!(matches!(
            solve_cycle_split(&tiny),
            Err(PathSplitError::Precondition(_))
        ));
    }

    #[test]
    fn qstable_q1_is_whole_path() {
        let p = path(&[vec![0, 2], vec![1]]);
        let s = solve_qstable_bruteforce(&p, 1, false, Some(QSTABLE_BUDGET))
            .unwrap()
            .unwrap();
        assert_eq!(s.classes, vec![vec![0, 1, 2]]);
        assert!(s.removed.iter().all(Vec::is_empty));
    }

    #[test]
    fn qstable_budget_guard() {
        let p = ColoredPath::new(vec![0; 14]).unwrap();
        assert!(matches!(
            solve_qstable_bruteforce(&p, 3, false, Some(QSTABLE_BUDGET)),
            Err(PathSplitError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn qstable_precondition() {
        let p = path(&[vec![0], vec![1, 2, 3]]);
        assert!(matches!(
            solve_qstable_bruteforce(&p, 3, false, None),
            Err(PathSplitError::Precondition(_))
        ));
    }

    #[test]
    fn seven_vertices_three_parts() {
        let p = ColoredPath::new(vec![0; 7]).unwrap();
        let s = solve_qstable_bruteforce(&p, 3, false, None).unwrap().unwrap();
        assert!(verify_qstable_split(&p, 3, &s, false).is_ok());
        let min = s.classes.iter().map(Vec::len).min().unwrap();
        assert_eq!(min, 1);
    }

    #[test]
    fn composition_of_pair_splits() {
        let p = ColoredPath::new((0..16).map(|v| v / 8).collect()).unwrap();
        let s = power_of_two_split(&p, 4).unwrap();
        assert_eq!(s.classes.len(), 4);
        assert!(s.removed.iter().all(|r| r.len() == 3));
        assert!(verify_qstable_split(&p, 4, &s, true).is_ok());
        for class in &s.classes {
            for j in 0..2 {
                assert!(class.iter().filter(|&&v| p.color_of(v) == j).count() >= 1);
            }
        }
    }

    #[test]
    fn identity_composition() {
        let p = path(&[vec![0, 2], vec![1, 3]]);
        let s = compose_splits(&p, 1, 1, &power_of_two_split).unwrap();
        assert_eq!(s, trivial_split(&p));
    }

    #[test]
    fn verifier_flags_stability_and_balance() {
        let p = ColoredPath::new(vec![0; 8]).unwrap();
        let close = StableSplit {
            q: 3,
            removed: vec![vec![6, 7]],
            classes: vec![vec![0, 2], vec![1, 4], vec![3, 5]],
        };
        assert!(kinds(verify_qstable_split(&p, 3, &close, false)).contains(&"independence"));
        let lopsided = StableSplit {
            q: 3,
            removed: vec![vec![1, 2]],
            classes: vec![vec![0, 3, 6], vec![4, 7], vec![5]],
        };
        assert!(kinds(verify_qstable_split(&p, 3, &lopsided, false)).contains(&"balance"));
    }

    #[test]
    fn floor_ceil_examples() {
        assert_eq!(floor_ceil_identities(7, 3, 2).unwrap(), (true, true));
        assert_eq!(div_floor(div_floor(7, 3), 2), 1);
        assert_eq!(floor_ceil_identities(0, 5, 9).unwrap(), (true, true));
        assert_eq!(floor_ceil_identities(-7, 3, 2).unwrap(), (true, true));
        assert_eq!(floor_ceil_identities(1, 0, 2), Err(PathSplitError::ZeroDivisor));
    }
}
