//! Paths whose vertex set is partitioned into color classes.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("the path has no vertices")]
    Empty,
    #[error("color {missing} is unused; colors must be contiguous from 0")]
    MissingColor { missing: usize },
}

/// A path on vertices `0..n` (edges `{i, i+1}`) with a color per vertex.
///
/// Colors are `0..m` and every color class is nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredPath {
    color_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl ColoredPath {
    pub fn new(color_of: Vec<usize>) -> Result<Self, ColoringError> {
        if color_of.is_empty() {
            return Err(ColoringError::Empty);
        }
        let m = color_of.iter().max().map_or(0, |c| c + 1);
        let mut classes = vec![Vec::new(); m];
        for (v, &c) in color_of.iter().enumerate() {
            classes[c].push(v);
        }
        if let Some(missing) = classes.iter().position(Vec::is_empty) {
            return Err(ColoringError::MissingColor { missing });
        }
        Ok(Self { color_of, classes })
    }

    /// Builds a path from explicit color classes, e.g. `[[0, 1], [2, 3]]`.
    pub fn from_classes(classes: &[Vec<usize>]) -> Result<Self, ColoringError> {
        let n: usize = classes.iter().map(Vec::len).sum();
        let mut color_of = vec![usize::MAX; n];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(ColoringError::MissingColor { missing: c });
            }
            for &v in class {
                if v < n {
                    color_of[v] = c;
                }
            }
        }
        if color_of.contains(&usize::MAX) {
            // a vertex index was out of range or repeated
            return Err(ColoringError::MissingColor { missing: classes.len() });
        }
        Self::new(color_of)
    }

    pub fn len(&self) -> usize {
        self.color_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.color_of.is_empty()
    }

    pub fn num_colors(&self) -> usize {
        self.classes.len()
    }

    pub fn color_of(&self, v: usize) -> usize {
        self.color_of[v]
    }

    pub fn colors(&self) -> &[usize] {
        &self.color_of
    }

    pub fn class(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Bitmask of the vertices of color `c`; requires `n <= 64`.
    pub fn class_mask(&self, c: usize) -> u64 {
        self.classes[c].iter().fold(0, |acc, &v| acc | (1 << v))
    }
}

/// Every surjective coloring of `0..n` with exactly `m` colors, in
/// lexicographic order of the color sequence.
pub fn surjective_colorings(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m == 0 || m > n {
        return out;
    }
    let mut cur = vec![0; n];
    loop {
        let mut seen = vec![false; m];
        for &c in &cur {
            seen[c] = true;
        }
        if seen.iter().all(|&s| s) {
            out.push(cur.clone());
        }
        // odometer increment
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < m {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Set partitions of `0..n` into exactly `m` blocks, as restricted growth
/// strings (block indices ordered by first occurrence).
pub fn set_partitions(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, m: usize, cur: &mut Vec<usize>, used: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            if used == m {
                out.push(cur.clone());
            }
            return;
        }
        let left = n - cur.len();
        if used + left < m {
            return;
        }
        for c in 0..=used.min(m - 1) {
            cur.push(c);
            rec(n, m, cur, used.max(c + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m >= 1 && m <= n {
        rec(n, m, &mut Vec::with_capacity(n), 0, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_follow_colors() {
        let p = ColoredPath::new(vec![0, 1, 0, 1]).unwrap();
        assert_eq!(p.class(0), &[0, 2]);
        assert_eq!(p.class(1), &[1, 3]);
        assert_eq!(p.class_mask(1), 0b1010);
    }

    #[test]
    fn rejects_gaps_and_empty() {
        assert_eq!(ColoredPath::new(vec![]), Err(ColoringError::Empty));
        assert_eq!(
            ColoredPath::new(vec![0, 2]),
            Err(ColoringError::MissingColor { missing: 1 })
        );
    }

    #[test]
    fn from_classes_roundtrip() {
        let p = ColoredPath::from_classes(&[vec![0, 3], vec![1, 4], vec![2, 5]]).unwrap();
        assert_eq!(p.colors(), &[0, 1, 2, 0, 1, 2]);
        assert!(ColoredPath::from_classes(&[vec![0, 0]]).is_err());
    }

    #[test]
    fn partition_counts() {
        // Stirling numbers of the second kind
        assert_eq!(set_partitions(4, 2).len(), 7);
        assert_eq!(set_partitions(5, 3).len(), 25);
        assert_eq!(surjective_colorings(4, 2).len(), 14);
        assert_eq!(surjective_colorings(3, 3).len(), 6);
    }
}
