//! Finite semitopologies: a point set with a union-closed family of opens.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_POINTS: usize = 64;

/// A set of points, stored as a bitmask over point indices `0..64`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PointSet(pub u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn full(n: usize) -> PointSet {
        if n >= 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> PointSet {
        PointSet(points.into_iter().fold(0, |acc, p| acc | (1u64 << p)))
    }

    pub fn singleton(p: usize) -> PointSet {
        PointSet(1u64 << p)
    }

    pub fn contains(self, p: usize) -> bool {
        p < 64 && self.0 & (1u64 << p) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: PointSet) -> PointSet {
        PointSet(self.0 | o.0)
    }

    pub fn intersect(self, o: PointSet) -> PointSet {
        PointSet(self.0 & o.0)
    }

    pub fn minus(self, o: PointSet) -> PointSet {
        PointSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: PointSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn meets(self, o: PointSet) -> bool {
        self.0 & o.0 != 0
    }

    pub fn complement(self, n: usize) -> PointSet {
        PointSet::full(n).minus(self)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let p = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(p)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Order by cardinality, then lexicographically on the sorted member lists.
    pub fn canonical_cmp(&self, other: &PointSet) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.to_vec().cmp(&other.to_vec()))
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemitopologyError {
    #[error("at most {MAX_POINTS} points are supported, got {0}")]
    TooManyPoints(usize),
    #[error("open set {set} mentions a point outside 0..{points}")]
    PointOutOfRange { set: String, points: usize },
    #[error("the empty set is not open")]
    MissingEmptySet,
    #[error("the full point set is not open")]
    MissingFullSet,
    #[error("opens are not closed under union: {0} ∪ {1} is missing")]
    NotUnionClosed(PointSet, PointSet),
    #[error("invalid parameters for all_but: n = {n}, f = {f} (need f <= n)")]
    InvalidParams { n: usize, f: usize },
}

/// A finite semitopology. Opens are kept deduplicated in canonical order, so
/// `opens[0]` is always the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semitopology {
    points: usize,
    opens: Vec<PointSet>,
}

impl Semitopology {
    pub fn validate(points: usize, opens: impl IntoIterator<Item = PointSet>) -> Result<Semitopology, SemitopologyError> {
        if points > MAX_POINTS {
            return Err(SemitopologyError::TooManyPoints(points));
        }
        let full = PointSet::full(points);
        let mut sets: Vec<PointSet> = opens.into_iter().collect();
        for s in &sets {
            if !s.is_subset(full) {
                return Err(SemitopologyError::PointOutOfRange { set: s.to_string(), points });
            }
        }
        sets.sort_by(PointSet::canonical_cmp);
        sets.dedup();
        if !sets.contains(&PointSet::EMPTY) {
            return Err(SemitopologyError::MissingEmptySet);
        }
        let lookup: std::collections::HashSet<u64> = sets.iter().map(|s| s.0).collect();
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                if !lookup.contains(&a.union(*b).0) {
                    return Err(SemitopologyError::NotUnionClosed(*a, *b));
                }
            }
        }
        if !lookup.contains(&full.0) {
            return Err(SemitopologyError::MissingFullSet);
        }
        Ok(Semitopology { points, opens: sets })
    }

    /// `AllBut(n, f)`: the nonempty opens are the sets with at least `n - f` points.
    pub fn all_but(n: usize, f: usize) -> Result<Semitopology, SemitopologyError> {
        if f > n {
            return Err(SemitopologyError::InvalidParams { n, f });
        }
        if n > 20 {
            return Err(SemitopologyError::TooManyPoints(n));
        }
        let threshold = n - f;
        let opens = (0u64..(1u64 << n))
            .map(PointSet)
            .filter(|s| s.is_empty() || s.len() >= threshold);
        Semitopology::validate(n, opens)
    }

    /// The smallest semitopology containing the given sets: adds the empty
    /// set and the full set and closes under union.
    pub fn generated_by(points: usize, sets: impl IntoIterator<Item = PointSet>) -> Result<Semitopology, SemitopologyError> {
        let full = PointSet::full(points);
        let mut family: Vec<PointSet> = vec![PointSet::EMPTY, full];
        for s in sets {
            if !s.is_subset(full) {
                return Err(SemitopologyError::PointOutOfRange { set: s.to_string(), points });
            }
            family.push(s);
        }
        let mut seen: std::collections::HashSet<u64> = family.iter().map(|s| s.0).collect();
        let mut i = 0;
        while i < family.len() {
            for j in 0..i {
                let u = family[i].union(family[j]);
                if seen.insert(u.0) {
                    family.push(u);
                }
            }
            i += 1;
        }
        Semitopology::validate(points, family)
    }

    pub fn point_count(&self) -> usize {
        self.points
    }

    pub fn points(&self) -> PointSet {
        PointSet::full(self.points)
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    /// All opens except the empty set, in canonical order.
    pub fn nonempty_opens(&self) -> &[PointSet] {
        &self.opens[1..]
    }

    pub fn is_open(&self, s: PointSet) -> bool {
        self.opens.contains(&s)
    }

    /// Every nonempty open meets `p`.
    pub fn dense(&self, p: PointSet) -> bool {
        self.nonempty_opens().iter().all(|o| o.meets(p))
    }

    /// Some nonempty open is contained in `p`.
    pub fn noi(&self, p: PointSet) -> bool {
        self.nonempty_opens().iter().any(|o| o.is_subset(p))
    }

    /// Every choice of `n` nonempty opens has a common point. For `n = 0`
    /// this asks that the point set be nonempty.
    pub fn is_n_twined(&self, n: usize) -> bool {
        if n == 0 {
            return self.points > 0;
        }
        let opens = self.nonempty_opens();
        if opens.is_empty() {
            return true;
        }
        // Nondecreasing index sequences cover every multiset of opens.
        fn search(opens: &[PointSet], start: usize, left: usize, acc: PointSet) -> bool {
            if acc.is_empty() {
                return false;
            }
            if left == 0 {
                return true;
            }
            (start..opens.len()).all(|i| search(opens, i, left - 1, acc.intersect(opens[i])))
        }
        search(opens, 0, n, self.points())
    }

    pub fn to_spec(&self) -> SemitopologySpec {
        SemitopologySpec::Explicit {
            points: self.points,
            opens: self.opens.iter().map(|s| s.to_vec()).collect(),
        }
    }
}

/// JSON forms: `{"all_but": {"n": N, "f": F}}` or `{"points": N, "opens": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SemitopologySpec {
    AllBut { all_but: AllButParams },
    Explicit { points: usize, opens: Vec<Vec<usize>> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllButParams {
    pub n: usize,
    pub f: usize,
}

impl SemitopologySpec {
    pub fn build(&self) -> Result<Semitopology, SemitopologyError> {
        match self {
            SemitopologySpec::AllBut { all_but } => Semitopology::all_but(all_but.n, all_but.f),
            SemitopologySpec::Explicit { points, opens } => {
                if *points > MAX_POINTS {
                    return Err(SemitopologyError::TooManyPoints(*points));
                }
                let mut sets = Vec::with_capacity(opens.len());
                for o in opens {
                    if let Some(&bad) = o.iter().find(|&&p| p >= *points) {
                        return Err(SemitopologyError::PointOutOfRange { set: format!("{o:?} (point {bad})"), points: *points });
                    }
                    sets.push(PointSet::from_points(o.iter().copied()));
                }
                Semitopology::validate(*points, sets)
            }
        }
    }
}
