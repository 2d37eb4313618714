//! Sign vectors in `{+, -, 0}^n` and the octahedral Tucker machinery.
//!
//! A [`SignVector`] is stored as two disjoint index bitsets (`x⁺`, `x⁻`), so
//! the product order `x ⪯ y` is a pair of subset tests. The labeling built by
//! [`lambda_map`] assigns to every nonzero sign vector a label in
//! `{±1, …, ±(t + m)}` where `t` is [`compute_t`]; [`tucker_verify`] checks
//! by exhaustion that such a labeling is antipodal and has no complementary
//! comparable pair.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use thiserror::Error;

use crate::coloring::ColoredPath;

/// Largest `n` for which [`compute_t`] enumerates all `3^n` vectors.
pub const T_ENUMERATION_CAP: usize = 12;
/// Largest `n` for which [`tucker_verify`] runs the comparable-pair scan.
pub const PAIR_SCAN_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignError {
    #[error("sign vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("sign vector length {0} is outside 1..=64")]
    BadLength(usize),
    #[error("index sets overlap or exceed the vector length")]
    BadSupport,
    #[error("the zero vector has no label")]
    ZeroVector,
    #[error("n = {n} exceeds the exhaustive cap of {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
    #[error("the labeling is undefined on {0}")]
    PartialLabeling(SignVector),
    #[error("invalid sign character {0:?}")]
    Parse(char),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVector {
    n: usize,
    plus: u64,
    minus: u64,
}

impl SignVector {
    pub fn new(n: usize, plus: u64, minus: u64) -> Result<Self, SignError> {
        if n == 0 || n > 64 {
            return Err(SignError::BadLength(n));
        }
        let full = full_mask(n);
        if plus & minus != 0 || (plus | minus) & !full != 0 {
            return Err(SignError::BadSupport);
        }
        Ok(Self { n, plus, minus })
    }

    pub fn zero(n: usize) -> Self {
        assert!((1..=64).contains(&n));
        Self { n, plus: 0, minus: 0 }
    }

    pub fn from_signs(signs: &[Sign]) -> Result<Self, SignError> {
        let (mut plus, mut minus) = (0u64, 0u64);
        for (i, s) in signs.iter().enumerate().take(64) {
            match s {
                Sign::Plus => plus |= 1 << i,
                Sign::Minus => minus |= 1 << i,
                Sign::Zero => {}
            }
        }
        Self::new(signs.len(), plus, minus)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Bitmask of `x⁺`.
    pub fn plus(&self) -> u64 {
        self.plus
    }

    /// Bitmask of `x⁻`.
    pub fn minus(&self) -> u64 {
        self.minus
    }

    pub fn support(&self) -> u64 {
        self.plus | self.minus
    }

    pub fn is_zero(&self) -> bool {
        self.support() == 0
    }

    pub fn get(&self, i: usize) -> Sign {
        if self.plus >> i & 1 == 1 {
            Sign::Plus
        } else if self.minus >> i & 1 == 1 {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    pub fn first_nonzero(&self) -> Option<Sign> {
        let s = self.support();
        (s != 0).then(|| self.get(s.trailing_zeros() as usize))
    }

    /// Maximum length of an alternating subsequence of the nonzero entries.
    ///
    /// After dropping zeros this is the number of maximal constant runs.
    pub fn alt(&self) -> usize {
        let mut runs = 0;
        let mut last = Sign::Zero;
        for i in 0..self.n {
            let s = self.get(i);
            if s != Sign::Zero && s != last {
                runs += 1;
                last = s;
            }
        }
        runs
    }

    /// The product order: `x ⪯ y` iff `x⁺ ⊆ y⁺` and `x⁻ ⊆ y⁻`.
    pub fn precedes(&self, other: &SignVector) -> Result<bool, SignError> {
        if self.n != other.n {
            return Err(SignError::LengthMismatch(self.n, other.n));
        }
        Ok(self.plus & !other.plus == 0 && self.minus & !other.minus == 0)
    }

    /// All `3^n` vectors of length `n`, zero vector included.
    pub fn all(n: usize) -> impl Iterator<Item = SignVector> {
        assert!((1..=32).contains(&n), "enumeration supports 1 <= n <= 32");
        let full = full_mask(n);
        (0..=full).flat_map(move |plus| {
            let rest = full & !plus;
            Submasks::new(rest).map(move |minus| SignVector { n, plus, minus })
        })
    }

    /// Dense index `plus | minus << n`, used for label tables.
    fn table_index(&self) -> usize {
        (self.plus | self.minus << self.n) as usize
    }
}

impl Neg for SignVector {
    type Output = SignVector;

    fn neg(self) -> SignVector {
        SignVector {
            n: self.n,
            plus: self.minus,
            minus: self.plus,
        }
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let c = match self.get(i) {
                Sign::Plus => '+',
                Sign::Minus => '-',
                Sign::Zero => '0',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({self})")
    }
}

impl FromStr for SignVector {
    type Err = SignError;

    fn from_str(s: &str) -> Result<Self, SignError> {
        let signs = s
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                '0' => Ok(Sign::Zero),
                other => Err(SignError::Parse(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        SignVector::from_signs(&signs)
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates every submask of `mask`, including `0` and `mask` itself.
struct Submasks {
    mask: u64,
    next: Option<u64>,
}

impl Submasks {
    fn new(mask: u64) -> Self {
        Self {
            mask,
            next: Some(mask),
        }
    }
}

impl Iterator for Submasks {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & self.mask)
        };
        Some(cur)
    }
}

/// A nonzero label `±k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TuckerLabel(i32);

impl TuckerLabel {
    pub fn new(value: i32) -> Option<Self> {
        (value != 0).then_some(Self(value))
    }

    pub fn value(self) -> i32 {
        self.0
    }

    pub fn magnitude(self) -> u32 {
        self.0.unsigned_abs()
    }
}

impl Neg for TuckerLabel {
    type Output = TuckerLabel;

    fn neg(self) -> TuckerLabel {
        TuckerLabel(-self.0)
    }
}

impl fmt::Display for TuckerLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.0)
    }
}

/// Per-color counts `(|x⁺ ∩ V_j|, |x⁻ ∩ V_j|, |V_j|)`.
fn class_counts<'a>(x: &SignVector, masks: &'a [u64]) -> impl Iterator<Item = (u32, u32, u32)> + 'a {
    let (plus, minus) = (x.plus, x.minus);
    masks.iter().map(move |&m| {
        (
            (plus & m).count_ones(),
            (minus & m).count_ones(),
            m.count_ones(),
        )
    })
}

fn in_j(p: u32, q: u32, size: u32) -> bool {
    (2 * p == size && 2 * q == size) || 2 * p.max(q) > size
}

fn class_masks(path: &ColoredPath) -> Vec<u64> {
    (0..path.num_colors()).map(|c| path.class_mask(c)).collect()
}

/// Colors `j` where `x` is exactly balanced at `|V_j|/2` or one side of `x`
/// holds more than half of `V_j`.
pub fn compute_j(x: &SignVector, path: &ColoredPath) -> Vec<usize> {
    assert_eq!(x.len(), path.len(), "sign vector and path lengths differ");
    class_counts(x, &class_masks(path))
        .enumerate()
        .filter(|&(_, (p, q, s))| in_j(p, q, s))
        .map(|(j, _)| j)
        .collect()
}

/// Largest color in `J(x)`, if any.
fn max_j(x: &SignVector, masks: &[u64]) -> Option<usize> {
    class_counts(x, masks)
        .enumerate()
        .filter(|&(_, (p, q, s))| in_j(p, q, s))
        .map(|(j, _)| j)
        .last()
}

/// `t = max { alt(x) : J(x) = ∅ }` over all `3^n` sign vectors.
pub fn compute_t(path: &ColoredPath) -> Result<usize, SignError> {
    let n = path.len();
    if n > T_ENUMERATION_CAP {
        return Err(SignError::InstanceTooLarge {
            n,
            cap: T_ENUMERATION_CAP,
        });
    }
    let masks = class_masks(path);
    Ok(SignVector::all(n)
        .filter(|x| max_j(x, &masks).is_none())
        .map(|x| x.alt())
        .max()
        .unwrap_or(0))
}

/// The antipodal labeling used to derive the two-set path split.
///
/// With `J(x) ≠ ∅` the label is `±(t + j' + 1)` for the largest color `j'`
/// in `J(x)` (colors are 0-based here); otherwise it is `±alt(x)` signed by
/// the first nonzero entry of `x`.
pub fn lambda_map(x: &SignVector, path: &ColoredPath, t: usize) -> Result<TuckerLabel, SignError> {
    Lambda::new(path, t).label(x)
}

/// [`lambda_map`] with the class masks precomputed.
#[derive(Debug, Clone)]
pub struct Lambda {
    masks: Vec<u64>,
    t: usize,
    n: usize,
}

impl Lambda {
    pub fn new(path: &ColoredPath, t: usize) -> Self {
        Self {
            masks: class_masks(path),
            t,
            n: path.len(),
        }
    }

    /// Number of distinct label magnitudes, `t + m`.
    pub fn label_bound(&self) -> usize {
        self.t + self.masks.len()
    }

    pub fn label(&self, x: &SignVector) -> Result<TuckerLabel, SignError> {
        if x.len() != self.n {
            return Err(SignError::LengthMismatch(x.len(), self.n));
        }
        if x.is_zero() {
            return Err(SignError::ZeroVector);
        }
        let value = match max_j(x, &self.masks) {
            Some(j) => {
                let m = self.masks[j];
                let (p, q) = ((x.plus & m).count_ones(), (x.minus & m).count_ones());
                let size = m.count_ones();
                let positive = if 2 * p == size && 2 * q == size {
                    // balanced: both sides nonempty since |V_j| >= 2 here
                    (x.plus & m).trailing_zeros() < (x.minus & m).trailing_zeros()
                } else {
                    2 * p > size
                };
                let mag = (self.t + j + 1) as i32;
                if positive {
                    mag
                } else {
                    -mag
                }
            }
            None => {
                let mag = x.alt() as i32;
                match x.first_nonzero() {
                    Some(Sign::Plus) => mag,
                    _ => -mag,
                }
            }
        };
        Ok(TuckerLabel(value))
    }
}

/// A failed hypothesis of the octahedral Tucker lemma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TuckerViolation {
    /// `λ(-x) ≠ -λ(x)`.
    NotAntipodal { x: SignVector },
    /// `x ⪯ y` with `λ(x) + λ(y) = 0`.
    ComplementaryPair { x: SignVector, y: SignVector },
    /// `|λ(x)| > s`.
    OutOfRange { x: SignVector, label: TuckerLabel },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TuckerOutcome {
    /// Both hypotheses hold and `s >= n`.
    Ok,
    Violation(TuckerViolation),
    /// Both hypotheses hold yet `s < n`: impossible by the lemma, so this
    /// signals a defect in the checker or the labeling table.
    LemmaContradiction { n: usize, s: usize },
}

/// Counts gathered by [`tucker_scan`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuckerReport {
    pub n: usize,
    pub s: usize,
    pub antipodal_failures: usize,
    pub complementary_pairs: usize,
    pub out_of_range: usize,
    pub first_violation: Option<TuckerViolation>,
}

impl TuckerReport {
    pub fn is_clean(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Exhaustively checks a labeling of `{+,-,0}^n \ {0}` with labels in
/// `{±1, …, ±s}` and counts every failure.
pub fn tucker_scan<F>(labeling: F, n: usize, s: usize) -> Result<TuckerReport, SignError>
where
    F: Fn(&SignVector) -> Option<TuckerLabel>,
{
    if n == 0 {
        return Err(SignError::BadLength(0));
    }
    if n > PAIR_SCAN_CAP {
        return Err(SignError::InstanceTooLarge {
            n,
            cap: PAIR_SCAN_CAP,
        });
    }
    let mut table = vec![0i32; 1 << (2 * n)];
    let mut report = TuckerReport {
        n,
        s,
        antipodal_failures: 0,
        complementary_pairs: 0,
        out_of_range: 0,
        first_violation: None,
    };
    let record = |report: &mut TuckerReport, v: TuckerViolation| {
        if report.first_violation.is_none() {
            report.first_violation = Some(v);
        }
    };

    let vectors: Vec<SignVector> = SignVector::all(n).filter(|x| !x.is_zero()).collect();
    for x in &vectors {
        let label = labeling(x).ok_or(SignError::PartialLabeling(*x))?;
        if label.magnitude() as usize > s {
            report.out_of_range += 1;
            record(&mut report, TuckerViolation::OutOfRange { x: *x, label });
        }
        table[x.table_index()] = label.value();
    }
    for x in &vectors {
        if table[(-*x).table_index()] != -table[x.table_index()] {
            report.antipodal_failures += 1;
            record(&mut report, TuckerViolation::NotAntipodal { x: *x });
        }
    }
    for y in &vectors {
        let ly = table[y.table_index()];
        for sub in Submasks::new(y.support()) {
            if sub == 0 {
                continue;
            }
            let x = SignVector {
                n,
                plus: sub & y.plus,
                minus: sub & y.minus,
            };
            if table[x.table_index()] + ly == 0 {
                report.complementary_pairs += 1;
                record(&mut report, TuckerViolation::ComplementaryPair { x, y: *y });
            }
        }
    }
    Ok(report)
}

/// Checks the hypotheses of the octahedral Tucker lemma for `labeling`.
pub fn tucker_verify<F>(labeling: F, n: usize, s: usize) -> Result<TuckerOutcome, SignError>
where
    F: Fn(&SignVector) -> Option<TuckerLabel>,
{
    let report = tucker_scan(labeling, n, s)?;
    Ok(match report.first_violation {
        Some(v) => TuckerOutcome::Violation(v),
        None if s < n => TuckerOutcome::LemmaContradiction { n, s },
        None => TuckerOutcome::Ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(s: &str) -> SignVector {
        s.parse().unwrap()
    }

    fn path(classes: &[Vec<usize>]) -> ColoredPath {
        ColoredPath::from_classes(classes).unwrap()
    }

    /// Longest alternating subsequence by trying every subset of positions.
    fn alt_bruteforce(x: &SignVector) -> usize {
        let n = x.len();
        let mut best = 0;
        for sub in 0u32..(1 << n) {
            let picked: Vec<Sign> = (0..n).filter(|i| sub >> i & 1 == 1).map(|i| x.get(i)).collect();
            let ok = picked.iter().all(|&s| s != Sign::Zero)
                && picked.windows(2).all(|w| w[0] != w[1]);
            if ok {
                best = best.max(picked.len());
            }
        }
        best
    }

    #[test]
    fn alt_examples() {
        assert_eq!(sv("000").alt(), 0);
        assert_eq!(sv("+-+").alt(), 3);
        assert_eq!(alt_bruteforce(&sv("+0+-")), 2);
        assert_eq!(sv("+0+-").alt(), 2);
    }

    #[test]
    fn alt_matches_bruteforce_up_to_7() {
        for n in 1..=7 {
            for x in SignVector::all(n) {
                assert_eq!(x.alt(), alt_bruteforce(&x), "{x}");
            }
        }
    }

    #[test]
    fn precedes_examples() {
        assert!(sv("00").precedes(&sv("+-")).unwrap());
        assert!(!sv("+0").precedes(&sv("-+")).unwrap());
        let x = sv("+-0+");
        assert!(x.precedes(&x).unwrap());
        assert_eq!(
            sv("+").precedes(&sv("+-")),
            Err(SignError::LengthMismatch(1, 2))
        );
    }

    #[test]
    fn enumeration_is_complete() {
        let all: Vec<_> = SignVector::all(4).collect();
        assert_eq!(all.len(), 81);
        let set: std::collections::HashSet<_> = all.into_iter().collect();
        assert_eq!(set.len(), 81);
    }

    #[test]
    fn j_examples() {
        let p = path(&[vec![0, 1], vec![2, 3]]);
        assert_eq!(compute_j(&sv("+-00"), &p), vec![0]);
        assert_eq!(compute_j(&sv("0000"), &p), Vec::<usize>::new());
        assert_eq!(compute_j(&sv("++00"), &p), vec![0]);
    }

    #[test]
    fn t_examples() {
        assert_eq!(compute_t(&path(&[vec![0]])).unwrap(), 0);
        assert_eq!(compute_t(&path(&[vec![0, 1]])).unwrap(), 1);
        assert_eq!(compute_t(&path(&[vec![0, 1], vec![2, 3]])).unwrap(), 2);
        let big = ColoredPath::new(vec![0; 13]).unwrap();
        assert_eq!(
            compute_t(&big),
            Err(SignError::InstanceTooLarge { n: 13, cap: 12 })
        );
    }

    #[test]
    fn lambda_examples() {
        let p = path(&[vec![0, 1], vec![2, 3]]);
        assert_eq!(lambda_map(&sv("+-00"), &p, 2).unwrap().value(), 3);
        assert_eq!(lambda_map(&sv("-000"), &p, 2).unwrap().value(), -1);
        assert_eq!(lambda_map(&sv("0000"), &p, 2), Err(SignError::ZeroVector));
    }

    #[test]
    fn lambda_is_antipodal_up_to_6() {
        for n in 1..=6 {
            for colors in crate::coloring::set_partitions(n, 2.min(n)) {
                let p = ColoredPath::new(colors).unwrap();
                let t = compute_t(&p).unwrap();
                let lam = Lambda::new(&p, t);
                for x in SignVector::all(n).filter(|x| !x.is_zero()) {
                    assert_eq!(lam.label(&-x).unwrap(), -lam.label(&x).unwrap());
                }
            }
        }
    }

    #[test]
    fn tucker_single_coordinate() {
        let lab = |x: &SignVector| match x.get(0) {
            Sign::Plus => TuckerLabel::new(1),
            _ => TuckerLabel::new(-1),
        };
        assert_eq!(tucker_verify(lab, 1, 1).unwrap(), TuckerOutcome::Ok);
    }

    #[test]
    fn tucker_first_sign_labeling_fails_for_n2() {
        let lab = |x: &SignVector| match x.first_nonzero() {
            Some(Sign::Plus) => TuckerLabel::new(1),
            Some(Sign::Minus) => TuckerLabel::new(-1),
            _ => None,
        };
        let report = tucker_scan(lab, 2, 1).unwrap();
        assert_eq!(report.antipodal_failures, 0);
        // (0,+) ⪯ (-,+) and (0,-) ⪯ (+,-)
        assert_eq!(report.complementary_pairs, 2);
        match tucker_verify(lab, 2, 1).unwrap() {
            TuckerOutcome::Violation(TuckerViolation::ComplementaryPair { x, y }) => {
                assert!(x.precedes(&y).unwrap());
                assert_eq!(lab(&x).unwrap().value() + lab(&y).unwrap().value(), 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tucker_reports_partial_and_asymmetric_labelings() {
        let partial = |x: &SignVector| (x.get(0) != Sign::Minus).then(|| TuckerLabel::new(1).unwrap());
        assert!(matches!(
            tucker_verify(partial, 1, 1),
            Err(SignError::PartialLabeling(_))
        ));
        let constant = |_: &SignVector| TuckerLabel::new(1);
        assert!(matches!(
            tucker_verify(constant, 1, 1).unwrap(),
            TuckerOutcome::Violation(TuckerViolation::NotAntipodal { .. })
        ));
    }

    #[test]
    fn tucker_flags_contradiction_when_s_below_n() {
        // the labeling for two colors on four vertices uses s = t + m = 4;
        // claiming s = 3 trips the range check rather than the lemma
        let p = path(&[vec![0, 1], vec![2, 3]]);
        let lam = Lambda::new(&p, 2);
        let out = tucker_verify(|x| lam.label(x).ok(), 4, 3).unwrap();
        assert!(matches!(
            out,
            TuckerOutcome::Violation(TuckerViolation::OutOfRange { .. })
        ));
    }
}
