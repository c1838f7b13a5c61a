//! Individual strand diagrams: inversions, concatenation product and the crossing-resolving
//! differential. Everything is over the two-element field.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::arcdiag::ArcDiagram;
use crate::sets::StepSet;

/// A partial bijection `S -> T` on places with every strand moving weakly upward.
///
/// Stored as `(source, target)` pairs sorted by source, which makes equality of diagrams
/// equality of their stored form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StrandDiagram {
    strands: Vec<(usize, usize)>,
}

impl StrandDiagram {
    /// Builds a diagram from strands in any order.
    ///
    /// # Panics
    /// If sources or targets repeat, or a strand moves downward.
    pub fn new(mut strands: Vec<(usize, usize)>) -> Self {
        strands.sort_unstable();
        assert!(
            strands.iter().all(|&(p, q)| p <= q),
            "strands must move upward: {strands:?}"
        );
        assert!(
            strands.windows(2).all(|w| w[0].0 != w[1].0),
            "repeated source: {strands:?}"
        );
        let mut targets: Vec<usize> = strands.iter().map(|s| s.1).collect();
        targets.sort_unstable();
        assert!(
            targets.windows(2).all(|w| w[0] != w[1]),
            "repeated target: {strands:?}"
        );
        Self { strands }
    }

    /// Horizontal strands at every place of `places`.
    pub fn idempotent(places: impl IntoIterator<Item = usize>) -> Self {
        Self::new(places.into_iter().map(|p| (p, p)).collect())
    }

    pub(crate) fn from_sorted_unchecked(strands: Vec<(usize, usize)>) -> Self {
        debug_assert!(strands.windows(2).all(|w| w[0].0 < w[1].0));
        Self { strands }
    }

    pub fn strands(&self) -> &[(usize, usize)] {
        &self.strands
    }

    pub fn strand_count(&self) -> usize {
        self.strands.len()
    }

    /// Source places in increasing order.
    pub fn sources(&self) -> impl Iterator<Item = usize> + '_ {
        self.strands.iter().map(|s| s.0)
    }

    /// Target places in increasing order.
    pub fn targets(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.strands.iter().map(|s| s.1).collect();
        t.sort_unstable();
        t
    }

    pub fn image(&self, source: usize) -> Option<usize> {
        self.strands
            .binary_search_by_key(&source, |s| s.0)
            .ok()
            .map(|i| self.strands[i].1)
    }

    /// Checks the strand-diagram invariants relative to an arc diagram: every strand stays
    /// on its segment.
    pub fn fits(&self, d: &ArcDiagram) -> bool {
        self.strands
            .iter()
            .all(|&(p, q)| (1..=d.place_count()).contains(&q) && p >= 1 && d.same_segment(p, q))
    }

    /// Pairs of sources `(i, j)` with `i < j` and `φ(i) > φ(j)`.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, &(i, fi)) in self.strands.iter().enumerate() {
            for &(j, fj) in &self.strands[a + 1..] {
                if fi > fj {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn inversion_count(&self) -> usize {
        let mut n = 0;
        for (a, &(_, fi)) in self.strands.iter().enumerate() {
            n += self.strands[a + 1..]
                .iter()
                .filter(|&&(_, fj)| fi > fj)
                .count();
        }
        n
    }

    pub fn is_crossingless(&self) -> bool {
        self.inversion_count() == 0
    }

    /// Concatenation: `self` followed by `other`. `None` is the zero of the algebra, returned
    /// when the ends do not match or the composite has excess inversions.
    pub fn multiply(&self, other: &StrandDiagram) -> Option<StrandDiagram> {
        if self.strands.len() != other.strands.len() {
            return None;
        }
        let mut composite = Vec::with_capacity(self.strands.len());
        for &(p, q) in &self.strands {
            composite.push((p, other.image(q)?));
        }
        let product = StrandDiagram::from_sorted_unchecked(composite);
        (product.inversion_count() == self.inversion_count() + other.inversion_count())
            .then_some(product)
    }

    /// Sum of all resolutions of a single crossing that lower the inversion count by one.
    pub fn differential(&self) -> Element {
        let inv = self.inversion_count();
        let mut out = Element::zero();
        for (a, b) in self.crossing_positions() {
            let mut resolved = self.strands.clone();
            let (fa, fb) = (resolved[a].1, resolved[b].1);
            resolved[a].1 = fb;
            resolved[b].1 = fa;
            let resolved = StrandDiagram::from_sorted_unchecked(resolved);
            if resolved.inversion_count() + 1 == inv {
                out.toggle(resolved);
            }
        }
        out
    }

    fn crossing_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.strands.len() {
            for b in a + 1..self.strands.len() {
                if self.strands[a].1 > self.strands[b].1 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Interior steps `[i, i+1]` crossed by the vertical extent of some strand.
    pub fn used_steps(&self, d: &ArcDiagram) -> StepSet {
        let mut set = StepSet::EMPTY;
        for &(p, q) in &self.strands {
            for i in p..q {
                set.insert(d.interior_after(i).expect("strand stays on its segment"));
            }
        }
        set
    }

    /// Multiplicity of each interior step, summed over strands.
    pub fn step_multiplicities(&self, d: &ArcDiagram) -> Vec<u32> {
        let mut mult = vec![0u32; d.interior_count()];
        for &(p, q) in &self.strands {
            for i in p..q {
                mult[d.interior_after(i).expect("strand stays on its segment")] += 1;
            }
        }
        mult
    }
}

impl fmt::Display for StrandDiagram {
    /// `{1->3, 2->2}`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, (p, q)) in self.strands.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}->{q}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for StrandDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for StrandDiagram {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A formal sum over GF(2): addition is symmetric difference of term sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Sum<T: Ord> {
    terms: BTreeSet<T>,
}

impl<T: Ord> Default for Gf2Sum<T> {
    fn default() -> Self {
        Self {
            terms: BTreeSet::new(),
        }
    }
}

impl<T: Ord + Clone> Gf2Sum<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(term: T) -> Self {
        let mut s = Self::zero();
        s.toggle(term);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, term: &T) -> bool {
        self.terms.contains(term)
    }

    pub fn toggle(&mut self, term: T) {
        if !self.terms.remove(&term) {
            self.terms.insert(term);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for t in &other.terms {
            self.toggle(t.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeSet<T> {
        self.terms
    }
}

impl<T: Ord + Clone> FromIterator<T> for Gf2Sum<T> {
    /// Terms listed an even number of times cancel.
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut s = Self::zero();
        for t in iter {
            s.toggle(t);
        }
        s
    }
}

impl<T: Ord + fmt::Debug> fmt::Debug for Gf2Sum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, t) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t:?}")?;
        }
        Ok(())
    }
}

/// Element of the unconstrained strand algebra.
pub type Element = Gf2Sum<StrandDiagram>;

impl Element {
    /// Common strand count of the terms, or `None` for zero.
    pub fn strand_count(&self) -> Option<usize> {
        self.terms.iter().next().map(StrandDiagram::strand_count)
    }

    pub fn mul(&self, other: &Element) -> Element {
        let mut out = Element::zero();
        for a in &self.terms {
            for b in &other.terms {
                if let Some(p) = a.multiply(b) {
                    out.toggle(p);
                }
            }
        }
        out
    }

    pub fn differential(&self) -> Element {
        let mut out = Element::zero();
        for t in &self.terms {
            out.add_assign(&t.differential());
        }
        out
    }
}
