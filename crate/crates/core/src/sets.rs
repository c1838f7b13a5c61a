//! Small bit-packed sets for matched-pair labels and interior steps.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest number of matched pairs (and interior steps) a diagram may carry.
pub const MAX_BITS: usize = 64;

macro_rules! bitset_common {
    ($name:ident, $base:expr) => {
        impl $name {
            pub const EMPTY: Self = Self(0);

            pub const fn from_bits(bits: u64) -> Self {
                Self(bits)
            }

            pub const fn bits(self) -> u64 {
                self.0
            }

            pub const fn len(self) -> usize {
                self.0.count_ones() as usize
            }

            pub const fn is_empty(self) -> bool {
                self.0 == 0
            }

            fn offset(x: usize) -> Option<usize> {
                x.checked_sub($base).filter(|&i| i < MAX_BITS)
            }

            pub fn contains(self, x: usize) -> bool {
                Self::offset(x).is_some_and(|i| self.0 & (1u64 << i) != 0)
            }

            pub fn insert(&mut self, x: usize) {
                let i = Self::offset(x).unwrap_or_else(|| panic!("element {x} out of range"));
                self.0 |= 1u64 << i;
            }

            pub fn remove(&mut self, x: usize) {
                if let Some(i) = Self::offset(x) {
                    self.0 &= !(1u64 << i);
                }
            }

            pub fn with(mut self, x: usize) -> Self {
                self.insert(x);
                self
            }

            pub const fn union(self, other: Self) -> Self {
                Self(self.0 | other.0)
            }

            pub const fn intersection(self, other: Self) -> Self {
                Self(self.0 & other.0)
            }

            pub const fn difference(self, other: Self) -> Self {
                Self(self.0 & !other.0)
            }

            pub const fn is_disjoint(self, other: Self) -> bool {
                self.0 & other.0 == 0
            }

            pub const fn is_subset(self, other: Self) -> bool {
                self.0 & !other.0 == 0
            }

            /// Elements in increasing order.
            pub fn iter(self) -> impl Iterator<Item = usize> {
                let mut bits = self.0;
                std::iter::from_fn(move || {
                    if bits == 0 {
                        return None;
                    }
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(tz + $base)
                })
            }

            /// Every subset of a universe of size `n`, in increasing bit order.
            pub fn all_subsets(n: usize) -> impl Iterator<Item = Self> {
                assert!(n < MAX_BITS, "universe too large to enumerate");
                (0u64..(1u64 << n)).map(Self)
            }
        }

        impl FromIterator<usize> for $name {
            fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
                let mut set = Self::EMPTY;
                for x in iter {
                    set.insert(x);
                }
                set
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.iter()).finish()
            }
        }
    };
}

/// A set of matched-pair labels in `1..=k`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelSet(u64);

bitset_common!(LabelSet, 1);

impl LabelSet {
    /// The full set `{1, .., k}`.
    pub fn full(k: usize) -> Self {
        assert!(k <= MAX_BITS);
        if k == MAX_BITS {
            Self(u64::MAX)
        } else {
            Self((1u64 << k) - 1)
        }
    }
}

/// Renders as the command-line subset syntax: comma-separated labels, or `-` when empty.
impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        let mut first = true;
        for x in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl Serialize for LabelSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubsetParseError {
    #[error("empty subset specification (use `-` for the empty set)")]
    Empty,
    #[error("invalid label `{0}`")]
    BadLabel(String),
    #[error("label {0} out of range 1..={MAX_BITS}")]
    OutOfRange(usize),
    #[error("label {0} listed twice")]
    Duplicate(usize),
    #[error("expected `start;end`")]
    MissingSeparator,
}

/// Parses a `start;end` pair of subsets such as `1,3;-`.
pub fn parse_subset_pair(s: &str) -> Result<(LabelSet, LabelSet), SubsetParseError> {
    let (a, b) = s
        .split_once(';')
        .ok_or(SubsetParseError::MissingSeparator)?;
    Ok((a.parse()?, b.parse()?))
}

impl FromStr for LabelSet {
    type Err = SubsetParseError;

    /// Parses `1,3,4` or `-` (the empty set). Whitespace around labels is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(SubsetParseError::Empty);
        }
        if s == "-" {
            return Ok(Self::EMPTY);
        }
        let mut set = Self::EMPTY;
        for tok in s.split(',') {
            let tok = tok.trim();
            let label: usize = tok
                .parse()
                .map_err(|_| SubsetParseError::BadLabel(tok.to_string()))?;
            if label == 0 || label > MAX_BITS {
                return Err(SubsetParseError::OutOfRange(label));
            }
            if set.contains(label) {
                return Err(SubsetParseError::Duplicate(label));
            }
            set.insert(label);
        }
        Ok(set)
    }
}

/// A set of interior steps, by interior-step index (`0..interior_count`).
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepSet(u64);

bitset_common!(StepSet, 0);
