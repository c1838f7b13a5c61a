//! Homology of `A(Z)`, split over `(s, t, h)` summands.
//!
//! Two independent routes are provided:
//!
//! - the chain route ([`HomSummand`], [`DiagramHomology`]) builds the GF(2) chain complex of
//!   each summand, graded by doubled Maslov degree, and reduces boundary matrices;
//! - the closed-form route ([`local_case`], [`summand_nonzero`], [`ring_product`]) decides
//!   each summand from the data of `h, s, t` near every matched pair.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    diff_element, diff_generator, enumerate_full_basis, mul_elements, AlgebraError, HomClass,
    SymElement, SymGenerator,
};
use crate::arcdiag::ArcDiagram;
use crate::gf2::{BitVec, GF2Matrix, RowSpan};
use crate::sets::{LabelSet, StepSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("element is not a cycle")]
    NotACycle,
    #[error("term {generator:?} does not belong to summand {key:?}")]
    ForeignTerm {
        generator: SymGenerator,
        key: SummandKey,
    },
    #[error("differential of {generator:?} has a term in degree {found}, expected {expected}")]
    GradingViolation {
        generator: SymGenerator,
        expected: i64,
        found: i64,
    },
}

/// Start idempotent, end idempotent and homological grading.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SummandKey {
    pub s: LabelSet,
    pub t: LabelSet,
    pub h: HomClass,
}

impl SummandKey {
    pub fn of(d: &ArcDiagram, g: &SymGenerator) -> Self {
        Self {
            s: g.s,
            t: g.t,
            h: g.hom_grading(d),
        }
    }

    /// The idempotent triple `(s, s, 0)`.
    pub fn idempotent(d: &ArcDiagram, s: LabelSet) -> Self {
        Self {
            s,
            t: s,
            h: HomClass::zero(d.interior_count()),
        }
    }
}

/// The chain complex of one `(s, t, h)` summand.
#[derive(Debug, Clone)]
pub struct HomSummand {
    pub key: SummandKey,
    /// Generators by doubled Maslov degree.
    pub graded_basis: BTreeMap<i64, Vec<SymGenerator>>,
    /// `boundary[m]` maps degree `m` to degree `m - 2`: rows index `graded_basis[m - 2]`,
    /// columns index `graded_basis[m]`.
    pub boundary: BTreeMap<i64, GF2Matrix>,
    index: HashMap<SymGenerator, (i64, usize)>,
}

impl HomSummand {
    /// Builds the summand from the basis generators that belong to `key`.
    pub fn from_generators(
        d: &ArcDiagram,
        key: SummandKey,
        generators: impl IntoIterator<Item = SymGenerator>,
    ) -> Result<Self, HomologyError> {
        let mut graded_basis: BTreeMap<i64, Vec<SymGenerator>> = BTreeMap::new();
        for g in generators {
            debug_assert_eq!(SummandKey::of(d, &g), key);
            graded_basis.entry(g.maslov2(d)).or_default().push(g);
        }
        for gens in graded_basis.values_mut() {
            gens.sort();
        }
        let mut index = HashMap::new();
        for (&m, gens) in &graded_basis {
            for (i, g) in gens.iter().enumerate() {
                index.insert(g.clone(), (m, i));
            }
        }
        let mut boundary = BTreeMap::new();
        for (&m, gens) in &graded_basis {
            let rows = graded_basis.get(&(m - 2)).map_or(0, Vec::len);
            let mut mat = GF2Matrix::zeros(rows, gens.len());
            for (col, g) in gens.iter().enumerate() {
                for term in diff_generator(d, g)?.iter() {
                    match index.get(term) {
                        Some(&(deg, row)) if deg == m - 2 => mat.flip(row, col),
                        Some(&(deg, _)) => {
                            return Err(HomologyError::GradingViolation {
                                generator: g.clone(),
                                expected: m - 2,
                                found: deg,
                            })
                        }
                        None => {
                            return Err(HomologyError::ForeignTerm {
                                generator: term.clone(),
                                key: key.clone(),
                            })
                        }
                    }
                }
            }
            boundary.insert(m, mat);
        }
        Ok(Self {
            key,
            graded_basis,
            boundary,
            index,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    fn rank_out_of(&self, m: i64) -> usize {
        self.boundary.get(&m).map_or(0, GF2Matrix::rank)
    }

    /// Homology dimension per doubled Maslov degree; degrees with zero homology are omitted.
    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        self.graded_basis
            .iter()
            .filter_map(|(&m, gens)| {
                let dim = gens.len() - self.rank_out_of(m) - self.rank_out_of(m + 2);
                (dim > 0).then_some((m, dim))
            })
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.homology_dims().values().sum()
    }

    /// `∂_{m-2} ∘ ∂_m`, one product per degree; all are zero in a chain complex.
    pub fn boundary_squares(&self) -> Vec<GF2Matrix> {
        self.boundary
            .iter()
            .filter_map(|(&m, outer)| {
                let inner = self.boundary.get(&(m - 2))?;
                (inner.col_count() == outer.row_count() && outer.row_count() > 0)
                    .then(|| inner.mul(outer))
            })
            .collect()
    }

    fn image_span(&self, m: i64) -> RowSpan {
        let len = self.graded_basis.get(&m).map_or(0, Vec::len);
        let mut span = RowSpan::new(len);
        if let Some(into) = self.boundary.get(&(m + 2)) {
            for c in 0..into.col_count() {
                span.insert(into.column(c));
            }
        }
        span
    }

    /// Splits an element of this summand into coordinate vectors per degree.
    fn coordinates(&self, x: &SymElement) -> Result<BTreeMap<i64, BitVec>, HomologyError> {
        let mut out: BTreeMap<i64, BitVec> = BTreeMap::new();
        for g in x.iter() {
            let &(m, i) = self
                .index
                .get(g)
                .ok_or_else(|| HomologyError::ForeignTerm {
                    generator: g.clone(),
                    key: self.key.clone(),
                })?;
            out.entry(m)
                .or_insert_with(|| BitVec::zeros(self.graded_basis[&m].len()))
                .flip(i);
        }
        Ok(out)
    }

    /// Whether a cycle of this summand is a boundary.
    pub fn is_boundary(&self, d: &ArcDiagram, cycle: &SymElement) -> Result<bool, HomologyError> {
        if !diff_element(d, cycle)?.is_zero() {
            return Err(HomologyError::NotACycle);
        }
        for (m, v) in self.coordinates(cycle)? {
            if !self.image_span(m).contains(&v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A cycle that is not a boundary, for each degree with nonzero homology. Chosen as the
    /// first kernel basis vector (in elimination order) outside the image.
    pub fn representatives(&self) -> BTreeMap<i64, SymElement> {
        let mut out = BTreeMap::new();
        for (&m, gens) in &self.graded_basis {
            let kernel = match self.boundary.get(&m) {
                Some(b) if b.row_count() > 0 => b.kernel_basis(),
                _ => (0..gens.len())
                    .map(|i| BitVec::from_indices(gens.len(), [i]))
                    .collect(),
            };
            let image = self.image_span(m);
            if let Some(v) = kernel.into_iter().find(|v| !image.contains(v)) {
                out.insert(m, v.ones().map(|i| gens[i].clone()).collect());
            }
        }
        out
    }

    /// Generators all of whose expansion terms are free of crossings.
    pub fn crossingless_generators(&self, d: &ArcDiagram) -> Vec<&SymGenerator> {
        self.graded_basis
            .values()
            .flatten()
            .filter(|g| g.is_crossingless(d))
            .collect()
    }
}

/// Builds the summand `(s, t, h)` from scratch.
pub fn build_summand(
    d: &ArcDiagram,
    s: LabelSet,
    t: LabelSet,
    h: HomClass,
) -> Result<HomSummand, HomologyError> {
    let key = SummandKey { s, t, h };
    let gens: Vec<SymGenerator> = if s.len() == t.len() {
        crate::algebra::enumerate_basis(d, s.len())
            .into_iter()
            .filter(|g| g.s == s && g.t == t && g.hom_grading(d) == key.h)
            .collect()
    } else {
        Vec::new()
    };
    HomSummand::from_generators(d, key, gens)
}

/// Chain-level homology of every summand of `A(Z)`.
#[derive(Debug, Clone)]
pub struct DiagramHomology {
    pub summands: BTreeMap<SummandKey, HomSummand>,
    pub dims: BTreeMap<SummandKey, BTreeMap<i64, usize>>,
    representatives: BTreeMap<SummandKey, SymElement>,
}

impl DiagramHomology {
    pub fn compute(d: &ArcDiagram) -> Result<Self, HomologyError> {
        let mut grouped: BTreeMap<SummandKey, Vec<SymGenerator>> = BTreeMap::new();
        for g in enumerate_full_basis(d) {
            grouped.entry(SummandKey::of(d, &g)).or_default().push(g);
        }
        let built: Vec<(SummandKey, HomSummand)> = grouped
            .into_par_iter()
            .map(|(key, gens)| HomSummand::from_generators(d, key.clone(), gens).map(|s| (key, s)))
            .collect::<Result<_, _>>()?;
        let mut summands = BTreeMap::new();
        let mut dims = BTreeMap::new();
        let mut representatives = BTreeMap::new();
        for (key, summand) in built {
            let hd = summand.homology_dims();
            if !hd.is_empty() {
                let reps = summand.representatives();
                // a single degree is expected; keep the lowest when not
                if let Some((_, rep)) = reps.into_iter().next() {
                    representatives.insert(key.clone(), rep);
                }
            }
            dims.insert(key.clone(), hd);
            summands.insert(key, summand);
        }
        Ok(Self {
            summands,
            dims,
            representatives,
        })
    }

    pub fn summand(&self, key: &SummandKey) -> Option<&HomSummand> {
        self.summands.get(key)
    }

    /// Total homology dimension of a summand (zero for summands with no generators).
    pub fn dim(&self, key: &SummandKey) -> usize {
        self.dims.get(key).map_or(0, |m| m.values().sum())
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().flat_map(|m| m.values()).sum()
    }

    pub fn generator_count(&self) -> usize {
        self.summands
            .values()
            .map(HomSummand::generator_count)
            .sum()
    }

    /// Keys of summands with nonzero homology.
    pub fn nonzero_keys(&self) -> impl Iterator<Item = &SummandKey> {
        self.dims
            .iter()
            .filter(|(_, m)| !m.is_empty())
            .map(|(k, _)| k)
    }

    /// A cycle representing a nonzero class of the summand, if any.
    pub fn representative(&self, key: &SummandKey) -> Option<&SymElement> {
        self.representatives.get(key)
    }

    /// Product of the chosen class representatives of two summands, followed by a boundary
    /// test in the target summand. Returns the target summand key when the product class is
    /// nonzero.
    pub fn chain_product(
        &self,
        d: &ArcDiagram,
        a: &SummandKey,
        b: &SummandKey,
    ) -> Result<Option<SummandKey>, HomologyError> {
        let (Some(x), Some(y)) = (self.representative(a), self.representative(b)) else {
            return Ok(None);
        };
        let product = mul_elements(d, x, y)?;
        let Some(first) = product.iter().next() else {
            return Ok(None);
        };
        let key = SummandKey::of(d, first);
        let summand = self
            .summand(&key)
            .ok_or_else(|| HomologyError::ForeignTerm {
                generator: first.clone(),
                key: key.clone(),
            })?;
        Ok((!summand.is_boundary(d, &product)?).then_some(key))
    }
}

/// Position of a place relative to the support of `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaceClass {
    /// Neither adjacent step is used.
    Out,
    /// Only the step above is used: the place is the bottom of a support interval.
    NegBdy,
    /// Only the step below is used: the place is the top of a support interval.
    PosBdy,
    /// Both adjacent steps are used.
    Interior,
}

/// Membership of a label in the start and end sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Both,
    StartOnly,
    EndOnly,
    Neither,
}

impl Membership {
    pub fn of(label: usize, s: LabelSet, t: LabelSet) -> Self {
        match (s.contains(label), t.contains(label)) {
            (true, true) => Membership::Both,
            (true, false) => Membership::StartOnly,
            (false, true) => Membership::EndOnly,
            (false, false) => Membership::Neither,
        }
    }
}

/// The data of `h, s, t` near one matched pair `v < w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LocalCase {
    pub v_class: PlaceClass,
    pub w_class: PlaceClass,
    pub membership: Membership,
}

use Membership as Mb;
use PlaceClass as Pc;

/// Local configurations of a nonzero summand, up to exchanging `v` and `w`.
const ALLOWED: [(PlaceClass, PlaceClass, Membership); 10] = [
    (Pc::Out, Pc::Out, Mb::Both),
    (Pc::Out, Pc::Out, Mb::Neither),
    (Pc::NegBdy, Pc::Out, Mb::StartOnly),
    (Pc::PosBdy, Pc::Out, Mb::EndOnly),
    (Pc::NegBdy, Pc::PosBdy, Mb::Both),
    (Pc::Interior, Pc::Out, Mb::Neither),
    (Pc::PosBdy, Pc::Interior, Mb::EndOnly),
    (Pc::NegBdy, Pc::Interior, Mb::StartOnly),
    (Pc::Interior, Pc::Interior, Mb::Neither),
    (Pc::Interior, Pc::Interior, Mb::Both),
];

pub fn place_class(d: &ArcDiagram, support: StepSet, place: usize) -> PlaceClass {
    let below = d
        .interior_before(place)
        .is_some_and(|i| support.contains(i));
    let above = d.interior_after(place).is_some_and(|i| support.contains(i));
    match (below, above) {
        (false, false) => PlaceClass::Out,
        (false, true) => PlaceClass::NegBdy,
        (true, false) => PlaceClass::PosBdy,
        (true, true) => PlaceClass::Interior,
    }
}

impl LocalCase {
    /// Reads off the local data of `(support, s, t)` at the pair carrying `label`.
    pub fn observe(
        d: &ArcDiagram,
        support: StepSet,
        s: LabelSet,
        t: LabelSet,
        label: usize,
    ) -> Self {
        let (v, w) = d.twins(label);
        Self {
            v_class: place_class(d, support, v),
            w_class: place_class(d, support, w),
            membership: Membership::of(label, s, t),
        }
    }

    pub fn is_allowed(&self) -> bool {
        ALLOWED.iter().any(|&(a, b, m)| {
            m == self.membership
                && ((a, b) == (self.v_class, self.w_class)
                    || (b, a) == (self.v_class, self.w_class))
        })
    }

    /// Both twins interior to the support with the label in both idempotents: the one
    /// configuration realised by two different crossingless diagrams.
    pub fn is_ambiguous(&self) -> bool {
        self.v_class == PlaceClass::Interior
            && self.w_class == PlaceClass::Interior
            && self.membership == Membership::Both
    }
}

/// The local case at `label`, or `None` if that configuration is disallowed.
///
/// `h` must be 0/1-valued; any other `h` is disallowed outright.
pub fn local_case(
    d: &ArcDiagram,
    h: &HomClass,
    s: LabelSet,
    t: LabelSet,
    label: usize,
) -> Option<LocalCase> {
    if !h.is_indicator() {
        return None;
    }
    let case = LocalCase::observe(d, h.support(), s, t, label);
    case.is_allowed().then_some(case)
}

/// Closed-form test for a nonzero `(s, t, h)` summand of homology.
pub fn summand_nonzero(d: &ArcDiagram, s: LabelSet, t: LabelSet, h: &HomClass) -> bool {
    h.is_indicator() && (1..=d.k()).all(|m| local_case(d, h, s, t, m).is_some())
}

pub fn key_nonzero(d: &ArcDiagram, key: &SummandKey) -> bool {
    summand_nonzero(d, key.s, key.t, &key.h)
}

/// Product of homology generators by the closed form: zero unless composable with disjoint
/// supports and the target summand is itself nonzero.
pub fn ring_product(d: &ArcDiagram, a: &SummandKey, b: &SummandKey) -> Option<SummandKey> {
    if a.t != b.s || !a.h.support().is_disjoint(b.h.support()) {
        return None;
    }
    let key = SummandKey {
        s: a.s,
        t: b.t,
        h: a.h.add(&b.h),
    };
    key_nonzero(d, &key).then_some(key)
}

/// The three generator-existence conditions, checked directly: `h` is 0/1-valued; no label
/// with exactly one twin interior to the support lies in `s ∩ t`; and the summand contains a
/// generator without crossings.
pub fn nonzero_by_conditions(d: &ArcDiagram, summand: &HomSummand) -> bool {
    let SummandKey { s, t, h } = &summand.key;
    if !h.is_indicator() {
        return false;
    }
    let support = h.support();
    let both = s.intersection(*t);
    for m in 1..=d.k() {
        let (v, w) = d.twins(m);
        let vi = place_class(d, support, v) == PlaceClass::Interior;
        let wi = place_class(d, support, w) == PlaceClass::Interior;
        if vi != wi && both.contains(m) {
            return false;
        }
    }
    !summand.crossingless_generators(d).is_empty()
}

/// Outcome of comparing the crossingless generators of one summand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmbiguityCheck {
    pub key: SummandKey,
    pub crossingless: usize,
    /// At least two crossingless generators, all pairwise homologous.
    pub homologous: bool,
}

/// For every nonzero summand with an ambiguous label, checks that its crossingless
/// generators represent the same class.
pub fn check_ambiguous_summands(
    d: &ArcDiagram,
    hom: &DiagramHomology,
) -> Result<Vec<AmbiguityCheck>, HomologyError> {
    let keys: Vec<&SummandKey> = hom
        .nonzero_keys()
        .filter(|key| {
            let support = key.h.support();
            (1..=d.k()).any(|m| LocalCase::observe(d, support, key.s, key.t, m).is_ambiguous())
        })
        .collect();
    keys.into_par_iter()
        .map(|key| {
            let summand = &hom.summands[key];
            let gens = summand.crossingless_generators(d);
            let mut homologous = gens.len() >= 2;
            if let Some((first, rest)) = gens.split_first() {
                for g in rest {
                    let sum: SymElement = [(*first).clone(), (*g).clone()].into_iter().collect();
                    homologous &= summand.is_boundary(d, &sum)?;
                }
            }
            Ok(AmbiguityCheck {
                key: key.clone(),
                crossingless: gens.len(),
                homologous,
            })
        })
        .collect()
}
