//! Strand algebras of arc diagrams and contact category algebras of quadrangulated surfaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`arcdiag`]: arc diagrams, surgery validity, steps, and the quadrangulated surface.
//! - [`strands`]: individual strand diagrams with inversions, product and differential.
//! - [`algebra`]: the constrained algebra `A(Z)` in its symmetrised basis, with gradings.
//! - [`gf2`]: bit-packed linear algebra over the two-element field.
//! - [`homology`]: per-summand chain complexes, the closed-form local table and the homology ring.
//! - [`contact`]: basic dividing sets, tight cubes, cubulated contact structures and stacking.
//! - [`isoverify`]: the bijection between the two sides and a three-way verification driver.
//! - [`corpus`]: exhaustive enumeration of small arc diagrams.

pub mod algebra;
pub mod arcdiag;
pub mod contact;
pub mod corpus;
pub mod gf2;
pub mod homology;
pub mod isoverify;
pub mod sets;
pub mod strands;

pub use algebra::{Grading, HomClass, SymElement, SymGenerator};
pub use arcdiag::{ArcDiagram, ParseError, QuadSurface, Step, StepKind, SurgeryVerdict};
pub use contact::{CaTable, ContactStructure, CubeData, DividingSetBasic};
pub use homology::{DiagramHomology, HomSummand, LocalCase, SummandKey};
pub use isoverify::{verify, IsoReport};
pub use sets::{LabelSet, StepSet};
pub use strands::{Element, StrandDiagram};
