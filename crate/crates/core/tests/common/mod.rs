//! Naive oracles shared by the integration tests. Each one enumerates the
//! whole search space and checks the defining conditions directly, without
//! calling the library code it is compared against.

#![allow(dead_code)]

use fairsplit_core::bfactor::{BipartiteGraph, DegreePrescription};
use fairsplit_core::necklace::{AdvantageSpec, Necklace};
use fairsplit_core::ColoredPath;
use rand::Rng;

/// Does any edge subset meet `b` exactly?
pub fn b_factor_exists(g: &BipartiteGraph, b: &DegreePrescription) -> bool {
    let e = g.edges().len();
    assert!(e <= 24, "too many edges for subset enumeration");
    (0u32..1 << e).any(|mask| {
        let mut dl = vec![0; g.left()];
        let mut dr = vec![0; g.right()];
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            if mask >> i & 1 == 1 {
                dl[u] += 1;
                dr[v] += 1;
            }
        }
        dl == b.left && dr == b.right
    })
}

/// Options for [`stable_split_exists`].
#[derive(Clone, Copy)]
pub struct StableRules {
    pub q: usize,
    pub enforce_upper: bool,
    /// Minimum of every `|S_i ∩ V_j|`; `None` uses `⌊(|V_j|+1)/q⌋ - 1`.
    pub lower: Option<usize>,
}

/// Enumerates all `(q+1)^n` labelings (label `q` = removed).
pub fn stable_split_exists(colors: &[usize], rules: StableRules) -> bool {
    let n = colors.len();
    let q = rules.q;
    let m = colors.iter().max().map_or(0, |c| c + 1);
    let sizes: Vec<usize> = (0..m).map(|j| colors.iter().filter(|&&c| c == j).count()).collect();
    let mut label = vec![0usize; n];
    loop {
        if stable_labeling_ok(colors, &sizes, &label, rules) {
            return true;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            label[i] += 1;
            if label[i] <= q {
                break;
            }
            label[i] = 0;
        }
    }
}

fn stable_labeling_ok(colors: &[usize], sizes: &[usize], label: &[usize], rules: StableRules) -> bool {
    let q = rules.q;
    let m = sizes.len();
    let mut count = vec![vec![0usize; m]; q + 1];
    for (v, &l) in label.iter().enumerate() {
        count[l][colors[v]] += 1;
    }
    if (0..m).any(|j| count[q][j] != q - 1) {
        return false;
    }
    for a in 0..label.len() {
        for b in a + 1..label.len().min(a + q) {
            if label[a] < q && label[a] == label[b] {
                return false;
            }
        }
    }
    let class_sizes: Vec<usize> = (0..q).map(|i| count[i].iter().sum()).collect();
    let (lo, hi) = (class_sizes.iter().min().unwrap(), class_sizes.iter().max().unwrap());
    if hi - lo > 1 {
        return false;
    }
    (0..q).all(|i| {
        (0..m).all(|j| {
            let lower = rules.lower.unwrap_or(((sizes[j] + 1) / q).saturating_sub(1));
            count[i][j] >= lower && (!rules.enforce_upper || q * count[i][j] <= sizes[j])
        })
    })
}

/// Is there any owner vector with at most `(q-1)m` owner changes giving
/// exactly the advantaged thieves the extra bead?
pub fn discrete_split_exists(neck: &Necklace, spec: &AdvantageSpec) -> bool {
    let n = neck.len();
    let q = neck.q();
    let m = neck.num_colors();
    let mut owner = vec![0usize; n];
    loop {
        let changes = owner.windows(2).filter(|w| w[0] != w[1]).count();
        if changes <= (q - 1) * m {
            let mut held = vec![vec![0usize; m]; q];
            for (k, &t) in owner.iter().enumerate() {
                held[t][neck.color(k)] += 1;
            }
            let ok = (0..m).all(|j| {
                let a = neck.count(j);
                (0..q).all(|t| {
                    let extra = spec.advantaged(j).is_some_and(|s| s.contains(&t));
                    held[t][j] == a / q + usize::from(extra)
                })
            });
            if ok {
                return true;
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            owner[i] += 1;
            if owner[i] < q {
                break;
            }
            owner[i] = 0;
        }
    }
}

/// A uniformly random coloring of `n` vertices using every color of `0..m`.
pub fn random_surjective<R: Rng>(rng: &mut R, n: usize, m: usize) -> ColoredPath {
    assert!(1 <= m && m <= n);
    loop {
        let colors: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
        if let Ok(p) = ColoredPath::new(colors) {
            return p;
        }
    }
}
