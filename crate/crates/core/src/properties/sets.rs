use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::numerics::{int, Rational};

/// Non-empty finite union of closed rational intervals, kept sorted and disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedSet {
    pieces: Vec<(Rational, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundedSetError {
    Empty,
    Reversed { lo: Rational, hi: Rational },
}

impl fmt::Display for BoundedSetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundedSetError::Empty => f.write_str("a constraint set needs at least one interval"),
            BoundedSetError::Reversed { lo, hi } => write!(f, "interval [{lo}, {hi}] has lo > hi"),
        }
    }
}

impl BoundedSet {
    /// Overlapping or touching pieces are merged.
    pub fn new(mut pieces: Vec<(Rational, Rational)>) -> Result<Self, BoundedSetError> {
        if pieces.is_empty() {
            return Err(BoundedSetError::Empty);
        }
        if let Some((lo, hi)) = pieces.iter().find(|(lo, hi)| lo > hi) {
            return Err(BoundedSetError::Reversed { lo: lo.clone(), hi: hi.clone() });
        }
        pieces.sort();
        let mut merged: Vec<(Rational, Rational)> = Vec::with_capacity(pieces.len());
        for (lo, hi) in pieces {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        Ok(BoundedSet { pieces: merged })
    }

    pub fn point(v: Rational) -> Self {
        BoundedSet { pieces: alloc::vec![(v.clone(), v)] }
    }

    pub fn zero() -> Self {
        BoundedSet::point(Rational::zero())
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self, BoundedSetError> {
        BoundedSet::new(alloc::vec![(lo, hi)])
    }

    pub fn pieces(&self) -> &[(Rational, Rational)] {
        &self.pieces
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.pieces.iter().any(|(lo, hi)| lo <= x && x <= hi)
    }

    /// Midpoint of the first piece.
    pub fn point_inside(&self) -> Rational {
        let (lo, hi) = &self.pieces[0];
        (lo + hi) / int(2)
    }

    pub fn max_hi(&self) -> Rational {
        self.pieces.last().expect("non-empty").1.clone()
    }

    /// `max_hi + 1`, never a member.
    pub fn point_outside(&self) -> Rational {
        self.max_hi() + int(1)
    }

    /// Largest magnitude of any member.
    pub fn bound(&self) -> Rational {
        let lo = self.pieces[0].0.abs();
        let hi = self.max_hi().abs();
        if lo > hi {
            lo
        } else {
            hi
        }
    }
}

impl fmt::Display for BoundedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (lo, hi)) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str(" u ")?;
            }
            if lo == hi {
                write!(f, "{{{lo}}}")?;
            } else {
                write!(f, "[{lo}, {hi}]")?;
            }
        }
        Ok(())
    }
}
