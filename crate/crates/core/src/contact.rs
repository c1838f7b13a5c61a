//! Cubulated contact structures on `Σ × [0, 1]` and the contact category algebra.
//!
//! Everything here is combinatorial: a structure is the datum of a bottom and a top basic
//! dividing set plus the set of used decomposing arcs, and tightness is decided square by
//! square from the classification of tight cubes.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arcdiag::{ArcDiagram, SideSlot};
use crate::sets::{LabelSet, StepSet};

/// A basic dividing set: each square carries one of its two standard dividing sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DividingSetBasic {
    /// Squares carrying the standard negative dividing set.
    pub on_squares: LabelSet,
}

impl DividingSetBasic {
    pub fn new(on_squares: LabelSet) -> Self {
        Self { on_squares }
    }

    /// All `2^k` basic dividing sets of a diagram with `k` squares.
    pub fn all(k: usize) -> impl Iterator<Item = Self> {
        LabelSet::all_subsets(k).map(Self::new)
    }

    pub fn euler_class(&self, k: usize) -> i64 {
        k as i64 - 2 * self.on_squares.len() as i64
    }
}

/// The boundary data of one cube `square × [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CubeData {
    pub bottom_on: bool,
    pub top_on: bool,
    pub before_v: bool,
    pub after_v: bool,
    pub before_w: bool,
    pub after_w: bool,
}

impl CubeData {
    /// All 64 cube states, ordered by their bit encoding.
    pub fn all() -> impl Iterator<Item = CubeData> {
        (0u8..64).map(|b| CubeData {
            bottom_on: b & 1 != 0,
            top_on: b & 2 != 0,
            before_v: b & 4 != 0,
            after_v: b & 8 != 0,
            before_w: b & 16 != 0,
            after_w: b & 32 != 0,
        })
    }

    pub fn used(&self, slot: SideSlot) -> bool {
        match slot {
            SideSlot::AfterV => self.after_v,
            SideSlot::BeforeW => self.before_w,
            SideSlot::AfterW => self.after_w,
            SideSlot::BeforeV => self.before_v,
        }
    }

    pub fn used_count(&self) -> usize {
        SideSlot::CYCLIC.iter().filter(|&&s| self.used(s)).count()
    }

    /// Exchanges the roles of `v` and `w`.
    pub fn swap_vw(self) -> Self {
        Self {
            before_v: self.before_w,
            after_v: self.after_w,
            before_w: self.before_v,
            after_w: self.after_v,
            ..self
        }
    }
}

/// Whether a cube with these boundary conditions carries a tight contact structure.
pub fn cube_tight(c: CubeData) -> bool {
    let (b, t) = (c.bottom_on, c.top_on);
    let used: Vec<SideSlot> = SideSlot::CYCLIC
        .into_iter()
        .filter(|&s| c.used(s))
        .collect();
    match used.as_slice() {
        [] => b == t,
        [one] if one.is_after() => b && !t,
        [_] => !b && t,
        [x, y] => {
            let (i, j) = (x.index(), y.index());
            if (i + 2) % 4 == j {
                false
            } else if meet_at_marked_corner(*x, *y) {
                !b && !t
            } else {
                b && t
            }
        }
        [_, _, _] => {
            let unused = SideSlot::CYCLIC
                .into_iter()
                .find(|&s| !c.used(s))
                .expect("three of four sides used");
            if unused.is_after() {
                !b && t
            } else {
                b && !t
            }
        }
        _ => b == t,
    }
}

/// Adjacent sides `before_x` and `after_x` meet at the corner `x`.
fn meet_at_marked_corner(x: SideSlot, y: SideSlot) -> bool {
    use SideSlot::*;
    matches!(
        (x, y),
        (AfterV, BeforeV) | (BeforeV, AfterV) | (BeforeW, AfterW) | (AfterW, BeforeW)
    )
}

/// A cubulated contact structure on `Σ × [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContactStructure {
    pub bottom: DividingSetBasic,
    pub top: DividingSetBasic,
    /// Used decomposing arcs, as interior step indices.
    pub used: StepSet,
    pub tight: bool,
}

/// JSON view of a [`ContactStructure`] with 1-based labels and steps named by lower place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContactView {
    pub bottom: LabelSet,
    pub top: LabelSet,
    pub used: Vec<usize>,
    pub tight: bool,
}

impl ContactStructure {
    /// Builds the structure and decides its tightness.
    pub fn new(d: &ArcDiagram, bottom: LabelSet, top: LabelSet, used: StepSet) -> Self {
        let mut x = Self {
            bottom: DividingSetBasic::new(bottom),
            top: DividingSetBasic::new(top),
            used,
            tight: false,
        };
        x.tight = (1..=d.k()).all(|m| cube_tight(cube_data(d, &x, m)));
        x
    }

    /// The structure invariant in the `[0, 1]` direction.
    pub fn identity(d: &ArcDiagram, s: LabelSet) -> Self {
        Self::new(d, s, s, StepSet::EMPTY)
    }

    pub fn is_identity(&self) -> bool {
        self.bottom == self.top && self.used.is_empty()
    }

    pub fn view(&self, d: &ArcDiagram) -> ContactView {
        ContactView {
            bottom: self.bottom.on_squares,
            top: self.top.on_squares,
            used: self
                .used
                .iter()
                .map(|i| d.interior_lower_place(i))
                .collect(),
            tight: self.tight,
        }
    }
}

/// The boundary data of the cube over square `label`. Sides bound to exterior steps are
/// unused.
pub fn cube_data(d: &ArcDiagram, xi: &ContactStructure, label: usize) -> CubeData {
    let (v, w) = d.twins(label);
    let used = |step: Option<usize>| step.is_some_and(|i| xi.used.contains(i));
    CubeData {
        bottom_on: xi.bottom.on_squares.contains(label),
        top_on: xi.top.on_squares.contains(label),
        before_v: used(d.interior_before(v)),
        after_v: used(d.interior_after(v)),
        before_w: used(d.interior_before(w)),
        after_w: used(d.interior_after(w)),
    }
}

/// All tight structures from `bottom` to `top`, ordered by used set.
pub fn enumerate_tight(d: &ArcDiagram, bottom: LabelSet, top: LabelSet) -> Vec<ContactStructure> {
    StepSet::all_subsets(d.interior_count())
        .map(|u| ContactStructure::new(d, bottom, top, u))
        .filter(|x| x.tight)
        .collect()
}

/// All tight structures over all pairs of basic dividing sets.
pub fn enumerate_all_tight(d: &ArcDiagram) -> Vec<ContactStructure> {
    let k = d.k();
    let pairs: Vec<(LabelSet, LabelSet)> = LabelSet::all_subsets(k)
        .flat_map(|b| LabelSet::all_subsets(k).map(move |t| (b, t)))
        .collect();
    let mut out: Vec<ContactStructure> = pairs
        .into_par_iter()
        .flat_map_iter(|(b, t)| enumerate_tight(d, b, t))
        .collect();
    out.sort();
    out
}

/// Stacks `x1` on top of `x0`. Returns `None` for zero: non-composable, overlapping used
/// arcs, or an overtwisted result.
pub fn stack(
    d: &ArcDiagram,
    x0: &ContactStructure,
    x1: &ContactStructure,
) -> Option<ContactStructure> {
    if x0.top != x1.bottom || !x0.used.is_disjoint(x1.used) {
        return None;
    }
    let x = ContactStructure::new(
        d,
        x0.bottom.on_squares,
        x1.top.on_squares,
        x0.used.union(x1.used),
    );
    x.tight.then_some(x)
}

/// Multiplication table of the contact category algebra over its tight basis.
#[derive(Debug, Clone)]
pub struct CaTable {
    pub basis: Vec<ContactStructure>,
    /// `products[i][j]` is the index of `basis[i] · basis[j]`, or `None` for zero.
    pub products: Vec<Vec<Option<usize>>>,
    /// Indices of the identity structures; their sum is the unit.
    pub unit: Vec<usize>,
}

impl CaTable {
    pub fn build(d: &ArcDiagram) -> Self {
        let basis = enumerate_all_tight(d);
        let products: Vec<Vec<Option<usize>>> = basis
            .par_iter()
            .map(|x0| {
                basis
                    .iter()
                    .map(|x1| {
                        stack(d, x0, x1).map(|x| {
                            basis
                                .binary_search(&x)
                                .expect("tight stack result is a basis element")
                        })
                    })
                    .collect()
            })
            .collect();
        let unit = basis
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_identity())
            .map(|(i, _)| i)
            .collect();
        Self {
            basis,
            products,
            unit,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn product(&self, i: usize, j: usize) -> Option<usize> {
        self.products[i][j]
    }

    /// Whether the sum of identities acts as a two-sided unit on every basis element.
    pub fn unit_is_two_sided(&self) -> bool {
        (0..self.dim()).all(|i| {
            let left: Vec<usize> = self
                .unit
                .iter()
                .filter_map(|&e| self.product(e, i))
                .collect();
            let right: Vec<usize> = self
                .unit
                .iter()
                .filter_map(|&e| self.product(i, e))
                .collect();
            left == [i] && right == [i]
        })
    }

    /// Whether `(ab)c = a(bc)` on all basis triples.
    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        (0..n).into_par_iter().all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    let left = self.product(a, b).and_then(|ab| self.product(ab, c));
                    let right = self.product(b, c).and_then(|bc| self.product(a, bc));
                    left == right
                })
            })
        })
    }
}

/// Non-crossing pairing of the four edge midpoints of the top or bottom face, by side index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LidMatching {
    /// Pairs sides `(0, 1)` and `(2, 3)`.
    A,
    /// Pairs sides `(1, 2)` and `(3, 0)`.
    B,
}

/// Non-crossing pairing of the four edge midpoints of side face `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SideMatching {
    /// Bottom edge with the vertical edge at the end corner, top edge with the start corner.
    P,
    /// Bottom edge with the vertical edge at the start corner, top edge with the end corner.
    Q,
}

impl LidMatching {
    fn other(self) -> Self {
        match self {
            Self::A => Self::B,
            Self::B => Self::A,
        }
    }
}

impl SideMatching {
    fn other(self) -> Self {
        match self {
            Self::P => Self::Q,
            Self::Q => Self::P,
        }
    }
}

/// A choice of face matching for each face state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Calibration {
    pub bottom_on: LidMatching,
    pub top_on: LidMatching,
    pub unused_after: SideMatching,
    pub unused_before: SideMatching,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("anchor cases leave {survivors} calibrations with differing verdicts")]
pub struct CalibrationUnresolved {
    pub survivors: usize,
}

const ANCHORS: [(CubeData, bool); 3] = [
    (
        CubeData {
            bottom_on: true,
            top_on: true,
            before_v: false,
            after_v: false,
            before_w: false,
            after_w: false,
        },
        true,
    ),
    (
        CubeData {
            bottom_on: false,
            top_on: true,
            before_v: false,
            after_v: false,
            before_w: false,
            after_w: false,
        },
        false,
    ),
    (
        CubeData {
            bottom_on: true,
            top_on: false,
            before_v: false,
            after_v: true,
            before_w: false,
            after_w: false,
        },
        true,
    ),
];

impl Calibration {
    pub fn all() -> impl Iterator<Item = Calibration> {
        use LidMatching::*;
        use SideMatching::*;
        [A, B].into_iter().flat_map(|bottom_on| {
            [A, B].into_iter().flat_map(move |top_on| {
                [P, Q].into_iter().flat_map(move |unused_after| {
                    [P, Q].into_iter().map(move |unused_before| Calibration {
                        bottom_on,
                        top_on,
                        unused_after,
                        unused_before,
                    })
                })
            })
        })
    }

    fn satisfies_anchors(&self) -> bool {
        ANCHORS
            .iter()
            .all(|&(c, tight)| (self.components(c) == 1) == tight)
    }

    /// Number of closed curves in the union of the six face matchings.
    ///
    /// Nodes are edge midpoints: `B_i`, `T_i` on the bottom and top edges of side `i`, and
    /// `V_i` on the vertical edge at corner `i`, where side `i` runs from corner `i - 1` to
    /// corner `i`.
    pub fn components(&self, c: CubeData) -> usize {
        let bottom = |i: usize| i;
        let top = |i: usize| 4 + i;
        let vert = |i: usize| 8 + i % 4;
        let mut uf = MiniUnionFind::new(12);
        let mut lid = |m: LidMatching, node: &dyn Fn(usize) -> usize| {
            let pairs = match m {
                LidMatching::A => [(0, 1), (2, 3)],
                LidMatching::B => [(1, 2), (3, 0)],
            };
            for (a, b) in pairs {
                uf.union(node(a), node(b));
            }
        };
        lid(
            if c.bottom_on {
                self.bottom_on
            } else {
                self.bottom_on.other()
            },
            &bottom,
        );
        lid(
            if c.top_on {
                self.top_on
            } else {
                self.top_on.other()
            },
            &top,
        );
        for slot in SideSlot::CYCLIC {
            let i = slot.index();
            let unused = if slot.is_after() {
                self.unused_after
            } else {
                self.unused_before
            };
            let m = if c.used(slot) { unused.other() } else { unused };
            let (start, end) = (vert(i + 3), vert(i));
            let pairs = match m {
                SideMatching::P => [(bottom(i), end), (top(i), start)],
                SideMatching::Q => [(bottom(i), start), (top(i), end)],
            };
            for (a, b) in pairs {
                uf.union(a, b);
            }
        }
        uf.roots()
    }
}

/// Calibrations under which the anchor cases come out right.
pub fn anchor_survivors() -> Vec<Calibration> {
    Calibration::all()
        .filter(Calibration::satisfies_anchors)
        .collect()
}

/// Picks the face calibration from the anchor cases. Succeeds when every calibration that
/// satisfies the anchors gives the same component count on all 64 cubes.
pub fn calibrate() -> Result<Calibration, CalibrationUnresolved> {
    let survivors = anchor_survivors();
    let table =
        |cal: &Calibration| -> Vec<usize> { CubeData::all().map(|c| cal.components(c)).collect() };
    match survivors.split_first() {
        Some((first, rest)) if rest.iter().all(|c| table(c) == table(first)) => Ok(*first),
        _ => Err(CalibrationUnresolved {
            survivors: survivors.len(),
        }),
    }
}

/// Number of components of the dividing set on the rounded cube, under the anchored
/// calibration.
pub fn dividing_curve_components(c: CubeData) -> Result<usize, CalibrationUnresolved> {
    calibrate().map(|cal| cal.components(c))
}

struct MiniUnionFind {
    parent: Vec<usize>,
}

impl MiniUnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn roots(&mut self) -> usize {
        (0..self.parent.len())
            .filter(|&x| self.find(x) == x)
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(sizes: &[usize], matching: &[usize]) -> ArcDiagram {
        ArcDiagram::new(sizes.to_vec(), matching.to_vec()).unwrap()
    }

    fn labels(xs: &[usize]) -> LabelSet {
        xs.iter().copied().collect()
    }

    fn cube(bottom_on: bool, top_on: bool, used: &[SideSlot]) -> CubeData {
        CubeData {
            bottom_on,
            top_on,
            before_v: used.contains(&SideSlot::BeforeV),
            after_v: used.contains(&SideSlot::AfterV),
            before_w: used.contains(&SideSlot::BeforeW),
            after_w: used.contains(&SideSlot::AfterW),
        }
    }

    #[test]
    fn tight_cube_examples() {
        use SideSlot::*;
        assert!(cube_tight(cube(true, true, &[])));
        assert!(cube_tight(cube(false, false, &[])));
        assert!(!cube_tight(cube(false, true, &[])));
        assert!(cube_tight(cube(true, false, &[AfterV])));
        assert!(!cube_tight(cube(false, true, &[AfterV])));
        assert!(cube_tight(cube(false, true, &[BeforeW])));
        assert!(cube_tight(cube(true, true, &[AfterV, BeforeW])));
        assert!(cube_tight(cube(false, false, &[BeforeV, AfterV])));
        assert!(!cube_tight(cube(true, true, &[BeforeV, AfterV])));
        assert!(!cube_tight(cube(true, true, &[AfterV, AfterW])));
        assert!(!cube_tight(cube(false, false, &[BeforeV, BeforeW])));
        assert!(cube_tight(cube(false, true, &[BeforeV, BeforeW, AfterV])));
        assert!(cube_tight(cube(true, false, &[AfterV, BeforeW, AfterW])));
        assert!(cube_tight(cube(
            true,
            true,
            &[AfterV, BeforeW, AfterW, BeforeV]
        )));
    }

    #[test]
    fn sixteen_tight_cubes() {
        assert_eq!(CubeData::all().filter(|&c| cube_tight(c)).count(), 16);
    }

    #[test]
    fn cube_tight_is_symmetric_in_v_and_w() {
        for c in CubeData::all() {
            assert_eq!(cube_tight(c), cube_tight(c.swap_vw()));
        }
    }

    #[test]
    fn anchors_leave_a_mirror_pair() {
        // the anchors never involve two adjacent used sides, which is where the pair differs
        assert_eq!(calibrate(), Err(CalibrationUnresolved { survivors: 2 }));
        assert!(dividing_curve_components(cube(true, true, &[])).is_err());
        let survivors = anchor_survivors();
        let agreeing: Vec<usize> = survivors
            .iter()
            .map(|cal| {
                CubeData::all()
                    .filter(|&c| (cal.components(c) == 1) == cube_tight(c))
                    .count()
            })
            .collect();
        assert_eq!(agreeing, vec![64, 56]);
        for cal in &survivors {
            assert_eq!(cal.components(cube(true, true, &[])), 1);
            assert!(cal.components(cube(false, true, &[])) >= 2);
        }
    }

    #[test]
    fn cube_data_binds_adjacent_steps() {
        let d = diag(&[4], &[1, 2, 1, 2]);
        // interior steps [1,2], [2,3], [3,4] have indices 0, 1, 2; square 1 sits at places 1, 3
        let x = ContactStructure::new(
            &d,
            LabelSet::EMPTY,
            LabelSet::EMPTY,
            StepSet::from_bits(0b010),
        );
        let c = cube_data(&d, &x, 1);
        assert!(!c.before_v && !c.after_v && c.before_w && !c.after_w);
        let x = ContactStructure::new(
            &d,
            LabelSet::EMPTY,
            LabelSet::EMPTY,
            StepSet::from_bits(0b001),
        );
        let c = cube_data(&d, &x, 1);
        assert!(c.after_v && !c.before_w);
        let id = ContactStructure::identity(&d, labels(&[1, 2]));
        assert_eq!(cube_data(&d, &id, 1), cube(true, true, &[]));
    }

    #[test]
    fn single_square_enumeration() {
        let d = diag(&[1, 1], &[1, 1]);
        assert_eq!(enumerate_tight(&d, labels(&[1]), labels(&[1])).len(), 1);
        assert!(enumerate_tight(&d, labels(&[1]), LabelSet::EMPTY).is_empty());
        let table = CaTable::build(&d);
        assert_eq!(table.dim(), 2);
        assert_eq!(table.unit, vec![0, 1]);
        assert_eq!(
            table.products,
            vec![vec![Some(0), None], vec![None, Some(1)]]
        );
        assert!(table.unit_is_two_sided());
    }

    #[test]
    fn stacking() {
        let d = diag(&[4], &[1, 2, 1, 2]);
        let all = enumerate_all_tight(&d);
        for x in &all {
            let id_top = ContactStructure::identity(&d, x.top.on_squares);
            let id_bottom = ContactStructure::identity(&d, x.bottom.on_squares);
            assert_eq!(stack(&d, x, &id_top), Some(*x));
            assert_eq!(stack(&d, &id_bottom, x), Some(*x));
            for y in &all {
                if !x.used.is_empty() && x.used == y.used {
                    assert_eq!(stack(&d, x, y), None);
                }
                if let Some(z) = stack(&d, x, y) {
                    assert_eq!(z.used, x.used.union(y.used));
                    assert_eq!(z.bottom.euler_class(d.k()), z.top.euler_class(d.k()));
                }
            }
        }
        let table = CaTable::build(&d);
        assert!(table.is_associative());
        assert!(table.unit_is_two_sided());
    }

    #[test]
    fn euler_class() {
        assert_eq!(DividingSetBasic::new(labels(&[1, 3])).euler_class(3), -1);
        assert_eq!(DividingSetBasic::all(3).count(), 8);
    }
}
