//! The bijection between tight structures and homology summands, and a driver that checks
//! it is an isomorphism of unital algebras by three independent routes.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{HomClass, SymGenerator};
use crate::arcdiag::{ArcDiagram, InvalidDiagram};
use crate::contact::{enumerate_tight, CaTable, ContactStructure, ContactView};
use crate::homology::{
    check_ambiguous_summands, ring_product, summand_nonzero, DiagramHomology, HomologyError,
    SummandKey,
};
use crate::sets::{LabelSet, StepSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    InvalidDiagram(#[from] InvalidDiagram),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("summand {key:?} has no tight structure")]
pub struct NotRealizable {
    pub key: SummandKey,
}

/// The summand a tight structure corresponds to.
pub fn phi(d: &ArcDiagram, x: &ContactStructure) -> SummandKey {
    SummandKey {
        s: x.bottom.on_squares,
        t: x.top.on_squares,
        h: HomClass::indicator(d.interior_count(), x.used),
    }
}

/// The structure with dividing sets `Γ_s`, `Γ_t` and used arcs `supp h`.
pub fn phi_inv(d: &ArcDiagram, key: &SummandKey) -> Result<ContactStructure, NotRealizable> {
    let x = ContactStructure::new(d, key.s, key.t, key.h.support());
    if x.tight && key.h.is_indicator() {
        Ok(x)
    } else {
        Err(NotRealizable { key: key.clone() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramSummary {
    pub segments: Vec<usize>,
    pub matching: Vec<usize>,
    pub k: usize,
    pub l: usize,
    pub interior_steps: usize,
    pub euler_char: i64,
    pub genus: i64,
    pub boundary_components: usize,
    pub squares: usize,
}

impl DiagramSummary {
    pub fn of(d: &ArcDiagram) -> Result<Self, InvalidDiagram> {
        let q = d.to_quad_surface()?;
        Ok(Self {
            segments: d.segment_sizes().to_vec(),
            matching: d.matching().to_vec(),
            k: d.k(),
            l: d.l(),
            interior_steps: d.interior_count(),
            euler_char: q.euler_char,
            genus: q.genus,
            boundary_components: q.boundary_components,
            squares: q.index,
        })
    }
}

/// One `(s, t, h)` triple with the value of each of the three columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummandRow {
    pub s: LabelSet,
    pub t: LabelSet,
    pub h: HomClass,
    pub contact_count: usize,
    pub local_nonzero: bool,
    pub chain_dim: usize,
    /// Degrees with nonzero homology, doubled.
    pub maslov2: Vec<i64>,
}

impl SummandRow {
    pub fn agrees(&self) -> bool {
        self.contact_count == self.chain_dim && self.local_nonzero == (self.chain_dim > 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BijectionEntry {
    pub structure: ContactView,
    pub summand: SummandKey,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub check: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoReport {
    pub diagram: DiagramSummary,
    pub ca_dim: usize,
    pub homology_dim: usize,
    pub triples_checked: usize,
    pub summands: Vec<SummandRow>,
    pub bijection: Vec<BijectionEntry>,
    pub pairs_checked: usize,
    pub ambiguous_summands: usize,
    pub mismatches: Vec<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl IsoReport {
    pub fn success(&self) -> bool {
        self.mismatches.is_empty() && self.summands.iter().all(SummandRow::agrees)
    }
}

/// Every 0/1-valued `h` together with every pair of subsets, plus the chain keys.
fn all_triples(d: &ArcDiagram, hom: &DiagramHomology) -> BTreeSet<SummandKey> {
    let (k, n) = (d.k(), d.interior_count());
    let mut out: BTreeSet<SummandKey> = hom.summands.keys().cloned().collect();
    for s in LabelSet::all_subsets(k) {
        for t in LabelSet::all_subsets(k) {
            for u in StepSet::all_subsets(n) {
                out.insert(SummandKey {
                    s,
                    t,
                    h: HomClass::indicator(n, u),
                });
            }
        }
    }
    out
}

/// Runs the basis, ring, unit, grading and round-trip checks on one diagram.
pub fn verify(d: &ArcDiagram) -> Result<IsoReport, VerifyError> {
    let diagram = DiagramSummary::of(d)?;
    let k = d.k();
    let hom = DiagramHomology::compute(d)?;
    let ca = CaTable::build(d);
    let mut mismatches = Vec::new();
    let mut miss =
        |check: &'static str, detail: String| mismatches.push(Mismatch { check, detail });

    // basis
    let images: Vec<SummandKey> = ca.basis.iter().map(|x| phi(d, x)).collect();
    let mut contact_count: BTreeMap<&SummandKey, usize> = BTreeMap::new();
    for key in &images {
        *contact_count.entry(key).or_default() += 1;
    }
    let triples = all_triples(d, &hom);
    let mut summands = Vec::new();
    for key in &triples {
        let row = SummandRow {
            s: key.s,
            t: key.t,
            h: key.h.clone(),
            contact_count: contact_count.get(key).copied().unwrap_or(0),
            local_nonzero: summand_nonzero(d, key.s, key.t, &key.h),
            chain_dim: hom.dim(key),
            maslov2: hom
                .dims
                .get(key)
                .map(|m| m.keys().copied().collect())
                .unwrap_or_default(),
        };
        if !row.agrees() {
            miss(
                "basis",
                format!(
                    "{key:?}: contact {} local {} chain {}",
                    row.contact_count, row.local_nonzero, row.chain_dim
                ),
            );
        }
        if row.chain_dim > 1 || row.maslov2.len() > 1 {
            miss(
                "concentration",
                format!("{key:?}: degrees {:?}", hom.dims[key]),
            );
        }
        if row.contact_count > 0 || row.local_nonzero || row.chain_dim > 0 {
            summands.push(row);
        }
    }

    // round trips
    for (x, key) in ca.basis.iter().zip(&images) {
        if phi_inv(d, key).as_ref() != Ok(x) {
            miss(
                "roundtrip",
                format!("{:?} does not return from {key:?}", x.view(d)),
            );
        }
    }
    for key in triples
        .iter()
        .filter(|key| summand_nonzero(d, key.s, key.t, &key.h))
    {
        match phi_inv(d, key) {
            Ok(x) if phi(d, &x) == *key => {}
            Ok(x) => miss(
                "roundtrip",
                format!("{key:?} maps back to {:?}", phi(d, &x)),
            ),
            Err(e) => miss("roundtrip", e.to_string()),
        }
    }

    // ring
    let n = ca.dim();
    let ring: Vec<Mismatch> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Vec<Mismatch>, HomologyError> {
            let mut out = Vec::new();
            for j in 0..n {
                let contact = ca.product(i, j).map(|p| images[p].clone());
                let local = ring_product(d, &images[i], &images[j]);
                let chain = hom.chain_product(d, &images[i], &images[j])?;
                if contact != local || local != chain {
                    out.push(Mismatch {
                        check: "ring",
                        detail: format!(
                            "{:?} * {:?}: contact {contact:?} local {local:?} chain {chain:?}",
                            images[i], images[j]
                        ),
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    let pairs_checked = n * n;

    // unit
    let unit_images: BTreeSet<SummandKey> = ca.unit.iter().map(|&e| images[e].clone()).collect();
    let idempotents: BTreeSet<SummandKey> = LabelSet::all_subsets(k)
        .map(|s| SummandKey::idempotent(d, s))
        .collect();
    if unit_images != idempotents {
        miss("unit", format!("unit maps to {unit_images:?}"));
    }
    for key in &idempotents {
        let expected = SymGenerator::idempotent(key.s);
        match hom.representative(key) {
            Some(rep) if rep.len() == 1 && rep.contains(&expected) => {}
            other => miss("unit", format!("{key:?} represented by {other:?}")),
        }
    }
    if !ca.unit_is_two_sided() {
        miss("unit", "sum of identities is not a two-sided unit".into());
    }

    // gradings: Euler class against strand count
    for (x, key) in ca.basis.iter().zip(&images) {
        let Some(summand) = hom.summand(key) else {
            miss("grading", format!("{key:?} has no chain generators"));
            continue;
        };
        for g in summand.graded_basis.values().flatten() {
            let e = k as i64 - 2 * g.strand_count() as i64;
            if x.bottom.euler_class(k) != e || x.top.euler_class(k) != e {
                miss("grading", format!("{:?} against {g:?}", x.view(d)));
            }
        }
    }

    // paired crossingless realizations
    let ambiguous = check_ambiguous_summands(d, &hom)?;
    for a in ambiguous.iter().filter(|a| !a.homologous) {
        miss(
            "homologous",
            format!("{:?}: {} crossingless generators", a.key, a.crossingless),
        );
    }

    mismatches.extend(ring);
    let bijection = ca
        .basis
        .iter()
        .zip(images)
        .map(|(x, summand)| BijectionEntry {
            structure: x.view(d),
            summand,
        })
        .collect();
    Ok(IsoReport {
        diagram,
        ca_dim: n,
        homology_dim: hom.total_dim(),
        triples_checked: triples.len(),
        summands,
        bijection,
        pairs_checked,
        ambiguous_summands: ambiguous.len(),
        mismatches,
        timing_ms: None,
    })
}

/// Dimensions indexed by `(Γ0, Γ1)`, from tight-structure counts and from homology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SfhTable {
    pub subsets: Vec<LabelSet>,
    /// `counts[a][b]`: tight structures from `subsets[a]` to `subsets[b]`.
    pub counts: Vec<Vec<usize>>,
    /// `homology[a][b]`: dimension of the `(subsets[a], subsets[b])` part of homology.
    pub homology: Vec<Vec<usize>>,
    /// `local[a][b]`: nonzero summands by the closed form.
    pub local: Vec<Vec<usize>>,
}

impl SfhTable {
    pub fn agrees(&self) -> bool {
        self.counts == self.homology && self.counts == self.local
    }
}

pub fn sfh_table(d: &ArcDiagram) -> Result<SfhTable, VerifyError> {
    d.to_quad_surface()?;
    let hom = DiagramHomology::compute(d)?;
    let subsets: Vec<LabelSet> = LabelSet::all_subsets(d.k()).collect();
    let n = d.interior_count();
    let mut homology = vec![vec![0; subsets.len()]; subsets.len()];
    for (key, dims) in &hom.dims {
        let a = subsets.binary_search(&key.s).expect("subset of labels");
        let b = subsets.binary_search(&key.t).expect("subset of labels");
        homology[a][b] += dims.values().sum::<usize>();
    }
    let counts = subsets
        .par_iter()
        .map(|&s| {
            subsets
                .iter()
                .map(|&t| enumerate_tight(d, s, t).len())
                .collect()
        })
        .collect();
    let local = subsets
        .iter()
        .map(|&s| {
            subsets
                .iter()
                .map(|&t| {
                    StepSet::all_subsets(n)
                        .filter(|&u| summand_nonzero(d, s, t, &HomClass::indicator(n, u)))
                        .count()
                })
                .collect()
        })
        .collect();
    Ok(SfhTable {
        subsets,
        counts,
        homology,
        local,
    })
}
