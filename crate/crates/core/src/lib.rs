//! Finite concrete groupoids and the internal covers they classify.
//!
//! The crate works entirely with explicit finite data:
//!
//! * [`groupoid`]: groupoids whose objects carry finite sets and whose
//!   morphisms are bijection tables; validation, closure, Hom-sets,
//!   automorphism groups, components and faithful bases.
//! * [`morphism`]: morphisms of connected groupoids as families of functions
//!   closed under the Hom-set actions, their composition, isomorphisms,
//!   embeddings, and a decision procedure for equivalence.
//! * [`cover`]: the one-object extension of a connected groupoid by a
//!   duplicated "star" object, and morphisms between such covers taken up to
//!   the star automorphism group.
//! * [`equivalence`]: the functors between the two categories, their unit
//!   and counit, and an exhaustive law checker.
//! * [`family`]: families of connected groupoids over a finite base and
//!   their fibrewise covers.
//! * [`io`]: the canonical JSON document format.

pub mod bound;
pub mod cover;
pub mod equivalence;
pub mod error;
pub mod family;
pub mod fixtures;
pub mod groupoid;
pub mod io;
pub mod morphism;
pub mod report;
pub mod table;

pub use bound::SearchBound;
pub use cover::{CoverMorphism, ExtendedCover, StarKind, StarRecord};
pub use error::{BoundExceeded, Error, Result, StructuralError};

pub use family::{FamilyCover, FamilyMorphism, GroupoidFamily};
pub use groupoid::{FaithfulBase, FiniteGroupoid, GroupoidBuilder, PermutationGroup};
pub use morphism::{EquivalenceWitness, GroupoidEmbedding, GroupoidMorphism};
pub use report::{ValidationReport, Violation};
pub use table::Table;
