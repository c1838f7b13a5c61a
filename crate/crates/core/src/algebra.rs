//! The constrained strand algebra `A(Z)` of an arc diagram, in its symmetrised basis.
//!
//! A basis element ([`SymGenerator`]) is a set of moving strands together with a set of
//! *dotted* labels. It stands for the sum, over every way of choosing one twin per dotted
//! label, of the diagram with a horizontal strand at each chosen twin. Products and
//! differentials are computed on these expansions and regrouped into the basis again.

use std::fmt;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arcdiag::ArcDiagram;
use crate::sets::{LabelSet, StepSet};
use crate::strands::{Element, Gf2Sum, StrandDiagram};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// A product or differential produced a sum that is not a union of symmetrised
    /// expansions. This would contradict closure of the symmetrised span.
    #[error("result is not in the symmetrised span: stray diagram {diagram}")]
    NotInSymmetrisedSpan { diagram: StrandDiagram },
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
}

/// Per-step multiplicities of a homological grading, indexed by interior step.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HomClass(Vec<u32>);

impl HomClass {
    pub fn zero(interior_steps: usize) -> Self {
        Self(vec![0; interior_steps])
    }

    pub fn from_multiplicities(mult: Vec<u32>) -> Self {
        Self(mult)
    }

    /// Multiplicity one on each step of `support`.
    pub fn indicator(interior_steps: usize, support: StepSet) -> Self {
        let mut v = vec![0; interior_steps];
        for i in support.iter() {
            v[i] = 1;
        }
        Self(v)
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, step: usize) -> u32 {
        self.0[step]
    }

    pub fn support(&self) -> StepSet {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// True when every multiplicity is 0 or 1.
    pub fn is_indicator(&self) -> bool {
        self.0.iter().all(|&m| m <= 1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&m| m == 0)
    }

    pub fn add(&self, other: &HomClass) -> HomClass {
        assert_eq!(self.0.len(), other.0.len());
        HomClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Multiplicity at a place: the sum of the multiplicities on the steps directly below and
    /// above it (exterior steps count zero). This is twice the averaged place multiplicity.
    pub fn place_multiplicity2(&self, d: &ArcDiagram, place: usize) -> i64 {
        let below = d.interior_before(place).map_or(0, |i| self.0[i]);
        let above = d.interior_after(place).map_or(0, |i| self.0[i]);
        i64::from(below + above)
    }
}

impl fmt::Debug for HomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Serialize for HomClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// Maslov grading (doubled) and homological grading.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Grading {
    pub maslov2: i64,
    pub hom: HomClass,
}

/// Doubled Maslov grading of a constrained diagram: `2·inv(φ) − 2·m(S, [μ])`.
pub fn maslov2(d: &ArcDiagram, m: &StrandDiagram) -> i64 {
    let hom = HomClass(m.step_multiplicities(d));
    let correction: i64 = m.sources().map(|p| hom.place_multiplicity2(d, p)).sum();
    2 * m.inversion_count() as i64 - correction
}

/// A symmetrised constrained strand diagram.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymGenerator {
    pub s: LabelSet,
    pub t: LabelSet,
    /// Strictly upward strands, sorted by source.
    pub moving: Vec<(usize, usize)>,
    pub dotted: LabelSet,
}

impl SymGenerator {
    /// Checks the constraints and derives the start and end label sets.
    pub fn new(
        d: &ArcDiagram,
        mut moving: Vec<(usize, usize)>,
        dotted: LabelSet,
    ) -> Result<Self, AlgebraError> {
        moving.sort_unstable();
        let bad = |msg: String| Err(AlgebraError::InvalidGenerator(msg));
        let mut s = LabelSet::EMPTY;
        let mut t = LabelSet::EMPTY;
        for &(p, q) in &moving {
            if p == 0 || q > d.place_count() || p >= q || !d.same_segment(p, q) {
                return bad(format!(
                    "strand {p}->{q} is not a strictly upward strand on one segment"
                ));
            }
            let (lp, lq) = (d.label(p), d.label(q));
            if s.contains(lp) {
                return bad(format!("two strands start on pair {lp}"));
            }
            if t.contains(lq) {
                return bad(format!("two strands end on pair {lq}"));
            }
            s.insert(lp);
            t.insert(lq);
        }
        if dotted.iter().any(|m| m > d.k()) {
            return bad("dotted label out of range".into());
        }
        if !dotted.is_disjoint(s.union(t)) {
            return bad("dotted pair meets a moving strand endpoint".into());
        }
        Ok(Self {
            s: s.union(dotted),
            t: t.union(dotted),
            moving,
            dotted,
        })
    }

    /// The idempotent `I(s)`.
    pub fn idempotent(s: LabelSet) -> Self {
        Self {
            s,
            t: s,
            moving: Vec::new(),
            dotted: s,
        }
    }

    pub fn strand_count(&self) -> usize {
        self.moving.len() + self.dotted.len()
    }

    pub fn is_idempotent(&self) -> bool {
        self.moving.is_empty()
    }

    /// All `2^|dotted|` concrete diagrams summed by this generator.
    pub fn expand(&self, d: &ArcDiagram) -> Vec<StrandDiagram> {
        sections(self.dotted, d)
            .into_iter()
            .map(|section| {
                let mut strands = self.moving.clone();
                strands.extend(section.into_iter().map(|p| (p, p)));
                StrandDiagram::new(strands)
            })
            .collect()
    }

    pub fn expand_element(&self, d: &ArcDiagram) -> Element {
        self.expand(d).into_iter().collect()
    }

    /// The expansion term with every dotted pair placed on its lower twin.
    pub fn representative(&self, d: &ArcDiagram) -> StrandDiagram {
        let mut strands = self.moving.clone();
        strands.extend(self.dotted.iter().map(|m| {
            let p = d.twins(m).0;
            (p, p)
        }));
        StrandDiagram::new(strands)
    }

    /// True when no expansion term has a crossing.
    pub fn is_crossingless(&self, d: &ArcDiagram) -> bool {
        self.expand(d).iter().all(StrandDiagram::is_crossingless)
    }

    /// Per-step multiplicities summed over moving strands; dotted pairs contribute nothing.
    pub fn hom_grading(&self, d: &ArcDiagram) -> HomClass {
        let mut mult = vec![0u32; d.interior_count()];
        for &(p, q) in &self.moving {
            for i in p..q {
                mult[d.interior_after(i).expect("strand stays on its segment")] += 1;
            }
        }
        HomClass(mult)
    }

    /// Doubled Maslov grading, evaluated on [`Self::representative`].
    pub fn maslov2(&self, d: &ArcDiagram) -> i64 {
        maslov2(d, &self.representative(d))
    }

    pub fn grading(&self, d: &ArcDiagram) -> Grading {
        Grading {
            maslov2: self.maslov2(d),
            hom: self.hom_grading(d),
        }
    }

    /// Interior steps used by the moving strands.
    pub fn used_steps(&self, d: &ArcDiagram) -> StepSet {
        self.hom_grading(d).support()
    }
}

impl fmt::Debug for SymGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}→{} ", self.s, self.t)?;
        for (n, (p, q)) in self.moving.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}->{q}")?;
        }
        write!(f, " ·{}]", self.dotted)
    }
}

/// `{"s":[...],"t":[...],"moving":[[p,q],...],"dotted":[...]}`
impl Serialize for SymGenerator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SymGenerator", 4)?;
        st.serialize_field("s", &self.s)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("moving", &self.moving)?;
        st.serialize_field("dotted", &self.dotted)?;
        st.end()
    }
}

/// Element of `A(Z)` in the symmetrised basis.
pub type SymElement = Gf2Sum<SymGenerator>;

/// All sections of `s`: place sets on which the matching restricts to a bijection onto `s`.
///
/// Ordered by binary counting over the labels of `s` in increasing order, the lower twin
/// being the `0` choice; so `{1}` on `[4],[1,2,1,2]` gives `[{1}, {3}]`.
pub fn sections(s: LabelSet, d: &ArcDiagram) -> Vec<Vec<usize>> {
    let pairs: Vec<(usize, usize)> = s.iter().map(|m| d.twins(m)).collect();
    (0u64..1 << pairs.len())
        .map(|choice| {
            let mut places: Vec<usize> = pairs
                .iter()
                .enumerate()
                .map(|(b, &(v, w))| if choice >> b & 1 == 0 { v } else { w })
                .collect();
            places.sort_unstable();
            places
        })
        .collect()
}

/// Every symmetrised generator with `strands` strands, sorted.
pub fn enumerate_basis(d: &ArcDiagram, strands: usize) -> Vec<SymGenerator> {
    let n = d.place_count();
    let candidates: Vec<(usize, usize)> = (1..=n)
        .flat_map(|p| {
            (p + 1..=n)
                .filter(move |&q| d.same_segment(p, q))
                .map(move |q| (p, q))
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    extend_moving(
        d,
        &candidates,
        0,
        strands,
        &mut chosen,
        LabelSet::EMPTY,
        LabelSet::EMPTY,
        &mut out,
    );
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn extend_moving(
    d: &ArcDiagram,
    candidates: &[(usize, usize)],
    from: usize,
    strands: usize,
    chosen: &mut Vec<(usize, usize)>,
    starts: LabelSet,
    ends: LabelSet,
    out: &mut Vec<SymGenerator>,
) {
    // complete with dotted pairs
    let free = LabelSet::full(d.k()).difference(starts.union(ends));
    let need = strands - chosen.len();
    if free.len() >= need {
        for dotted in subsets_of_size(free, need) {
            out.push(SymGenerator {
                s: starts.union(dotted),
                t: ends.union(dotted),
                moving: chosen.clone(),
                dotted,
            });
        }
    }
    if chosen.len() == strands {
        return;
    }
    for (idx, &(p, q)) in candidates.iter().enumerate().skip(from) {
        let (lp, lq) = (d.label(p), d.label(q));
        if starts.contains(lp) || ends.contains(lq) {
            continue;
        }
        chosen.push((p, q));
        extend_moving(
            d,
            candidates,
            idx + 1,
            strands,
            chosen,
            starts.with(lp),
            ends.with(lq),
            out,
        );
        chosen.pop();
    }
}

fn subsets_of_size(set: LabelSet, size: usize) -> Vec<LabelSet> {
    let items: Vec<usize> = set.iter().collect();
    let mut out = Vec::new();
    fn rec(items: &[usize], size: usize, acc: LabelSet, out: &mut Vec<LabelSet>) {
        if size == 0 {
            out.push(acc);
            return;
        }
        if items.len() < size {
            return;
        }
        rec(&items[1..], size - 1, acc.with(items[0]), out);
        rec(&items[1..], size, acc, out);
    }
    rec(&items, size, LabelSet::EMPTY, &mut out);
    out
}

/// The whole basis of `A(Z)`, all strand counts `0..=k`.
pub fn enumerate_full_basis(d: &ArcDiagram) -> Vec<SymGenerator> {
    (0..=d.k())
        .into_par_iter()
        .map(|i| enumerate_basis(d, i))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Rewrites a sum of concrete diagrams in the symmetrised basis.
///
/// Greedy orbit matching: take the smallest remaining diagram, read off its generator
/// (moving strands plus the labels of its horizontal strands), and remove that generator's
/// whole expansion. Any missing orbit member is a span violation.
pub fn regroup(d: &ArcDiagram, element: &Element) -> Result<SymElement, AlgebraError> {
    let mut remaining = element.clone().into_terms();
    let mut out = SymElement::zero();
    while let Some(first) = remaining.iter().next().cloned() {
        let stray = || AlgebraError::NotInSymmetrisedSpan {
            diagram: first.clone(),
        };
        let moving: Vec<(usize, usize)> = first
            .strands()
            .iter()
            .copied()
            .filter(|&(p, q)| p < q)
            .collect();
        let dotted: LabelSet = first
            .strands()
            .iter()
            .filter(|&&(p, q)| p == q)
            .map(|&(p, _)| d.label(p))
            .collect();
        let horizontal = first.strands().iter().filter(|&&(p, q)| p == q).count();
        if dotted.len() != horizontal {
            return Err(stray());
        }
        let g = SymGenerator::new(d, moving, dotted).map_err(|_| stray())?;
        for term in g.expand(d) {
            if !remaining.remove(&term) {
                return Err(stray());
            }
        }
        out.toggle(g);
    }
    Ok(out)
}

pub fn expand_element(d: &ArcDiagram, x: &SymElement) -> Element {
    let mut out = Element::zero();
    for g in x.iter() {
        for term in g.expand(d) {
            out.toggle(term);
        }
    }
    out
}

pub fn mul_generators(
    d: &ArcDiagram,
    a: &SymGenerator,
    b: &SymGenerator,
) -> Result<SymElement, AlgebraError> {
    // sections of distinct label sets are distinct place sets
    if a.t != b.s {
        return Ok(SymElement::zero());
    }
    let product = a.expand_element(d).mul(&b.expand_element(d));
    regroup(d, &product)
}

pub fn diff_generator(d: &ArcDiagram, g: &SymGenerator) -> Result<SymElement, AlgebraError> {
    if g.moving.is_empty() {
        return Ok(SymElement::zero());
    }
    regroup(d, &g.expand_element(d).differential())
}

pub fn mul_elements(
    d: &ArcDiagram,
    a: &SymElement,
    b: &SymElement,
) -> Result<SymElement, AlgebraError> {
    let mut out = SymElement::zero();
    for x in a.iter() {
        for y in b.iter() {
            out.add_assign(&mul_generators(d, x, y)?);
        }
    }
    Ok(out)
}

pub fn diff_element(d: &ArcDiagram, a: &SymElement) -> Result<SymElement, AlgebraError> {
    let mut out = SymElement::zero();
    for x in a.iter() {
        out.add_assign(&diff_generator(d, x)?);
    }
    Ok(out)
}
