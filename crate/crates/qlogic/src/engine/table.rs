//! Dense truth tables over the finite context space.

use std::fmt;

use crate::truth::TruthValue;

/// Shape of a quotient context space: `stages` quotient stages, of which the
/// last `period` form the loop, times points, times nonempty opens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    pub stages: usize,
    pub points: usize,
    pub opens: usize,
    pub period: usize,
}

impl Space {
    pub fn new(stages: usize, points: usize, opens: usize, period: usize) -> Space {
        assert!(period >= 1 && period <= stages, "loop period must lie in 1..=stages");
        Space { stages, points, opens, period }
    }

    pub fn len(&self) -> usize {
        self.stages * self.points * self.opens
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, stage: usize, point: usize, open: usize) -> usize {
        (stage * self.points + point) * self.opens + open
    }

    /// First quotient stage of the loop.
    pub fn loop_start(&self) -> usize {
        self.stages - self.period
    }

    /// Quotient stage standing for the unrolled stage `n`.
    pub fn fold_stage(&self, n: usize) -> usize {
        if n < self.stages {
            n
        } else {
            let start = self.loop_start();
            start + (n - start) % self.period
        }
    }

    /// Successor stage on the quotient.
    pub fn tomorrow(&self, stage: usize) -> usize {
        if stage + 1 < self.stages {
            stage + 1
        } else {
            self.loop_start()
        }
    }

    /// Quotient stages strictly after `stage`, each listed once.
    pub fn future(&self, stage: usize) -> impl Iterator<Item = usize> {
        let start = (stage + 1).min(self.loop_start());
        start..self.stages
    }
}

/// One truth value per context `(stage, point, open)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ContextTable {
    space: Space,
    cells: Vec<TruthValue>,
}

impl ContextTable {
    pub fn constant(space: Space, tv: TruthValue) -> ContextTable {
        ContextTable { space, cells: vec![tv; space.len()] }
    }

    pub fn from_fn(space: Space, mut f: impl FnMut(usize, usize, usize) -> TruthValue) -> ContextTable {
        let mut cells = Vec::with_capacity(space.len());
        for s in 0..space.stages {
            for p in 0..space.points {
                for o in 0..space.opens {
                    cells.push(f(s, p, o));
                }
            }
        }
        ContextTable { space, cells }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn cells(&self) -> &[TruthValue] {
        &self.cells
    }

    pub fn get(&self, stage: usize, point: usize, open: usize) -> TruthValue {
        self.cells[self.space.index(stage, point, open)]
    }

    /// Value at an arbitrary stage of the unrolled timeline.
    pub fn get_unrolled(&self, n: usize, point: usize, open: usize) -> TruthValue {
        self.get(self.space.fold_stage(n), point, open)
    }

    pub fn set(&mut self, stage: usize, point: usize, open: usize, tv: TruthValue) {
        let i = self.space.index(stage, point, open);
        self.cells[i] = tv;
    }

    pub fn map(&self, f: impl Fn(TruthValue) -> TruthValue) -> ContextTable {
        ContextTable { space: self.space, cells: self.cells.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip(&self, other: &ContextTable, f: impl Fn(TruthValue, TruthValue) -> TruthValue) -> ContextTable {
        assert_eq!(self.space, other.space, "tables over different spaces");
        ContextTable {
            space: self.space,
            cells: self.cells.iter().zip(&other.cells).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Pointwise `self ≤ other` in the truth order `F < B < T`.
    pub fn le(&self, other: &ContextTable) -> bool {
        self.space == other.space && self.cells.iter().zip(&other.cells).all(|(a, b)| a <= b)
    }

    /// Equality as functions on the unrolled timeline; tables may use
    /// different quotient horizons.
    pub fn equivalent(&self, other: &ContextTable) -> bool {
        let (a, b) = (self.space, other.space);
        if a.points != b.points || a.opens != b.opens {
            return false;
        }
        let horizon = a.stages.max(b.stages) + a.period * b.period;
        (0..horizon).all(|n| {
            (0..a.points).all(|p| (0..a.opens).all(|o| self.get_unrolled(n, p, o) == other.get_unrolled(n, p, o)))
        })
    }

    /// First context where the two tables differ on the unrolled timeline.
    pub fn first_difference(&self, other: &ContextTable) -> Option<(usize, usize, usize)> {
        let (a, b) = (self.space, other.space);
        let horizon = a.stages.max(b.stages) + a.period * b.period;
        for n in 0..horizon {
            for p in 0..a.points.min(b.points) {
                for o in 0..a.opens.min(b.opens) {
                    if self.get_unrolled(n, p, o) != other.get_unrolled(n, p, o) {
                        return Some((n, p, o));
                    }
                }
            }
        }
        None
    }
}

impl fmt::Debug for ContextTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ContextTable({}x{}x{} loop {}: ", self.space.stages, self.space.points, self.space.opens, self.space.period)?;
        for s in 0..self.space.stages {
            if s > 0 {
                f.write_str(" | ")?;
            }
            for p in 0..self.space.points {
                for o in 0..self.space.opens {
                    write!(f, "{}", self.get(s, p, o).letter())?;
                }
                if p + 1 < self.space.points {
                    f.write_str(",")?;
                }
            }
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truth::TruthValue::{Both as B, False as F, True as T};

    #[test]
    fn quotient_successors() {
        let s = Space::new(6, 1, 1, 1);
        assert_eq!(s.tomorrow(4), 5);
        assert_eq!(s.tomorrow(5), 5);
        let s = Space::new(8, 1, 1, 2);
        assert_eq!(s.tomorrow(7), 6);
        assert_eq!(s.fold_stage(8), 6);
        assert_eq!(s.fold_stage(9), 7);
        assert_eq!(s.future(2).collect::<Vec<_>>(), vec![3, 4, 5, 6, 7]);
        assert_eq!(s.future(7).collect::<Vec<_>>(), vec![6, 7]);
    }

    #[test]
    fn equivalence_across_horizons() {
        let short = ContextTable::from_fn(Space::new(4, 1, 1, 2), |s, _, _| if s % 2 == 0 { T } else { F });
        let long = ContextTable::from_fn(Space::new(8, 1, 1, 2), |s, _, _| if s % 2 == 0 { T } else { F });
        assert!(short.equivalent(&long));
        let mut other = long.clone();
        other.set(7, 0, 0, B);
        assert!(!short.equivalent(&other));
        assert_eq!(short.first_difference(&other), Some((7, 0, 0)));
    }
}
