//! Finite lattices represented as lattices of sets of filters.
//!
//! Given a finite lattice `L` and a family `F` of its filters, every element
//! `a` maps to `f(a) = { X ∈ F : a ∈ X }`. Meets go to intersections and
//! joins to the operation
//!
//! ```text
//! A ∨* B = A ∪ B ∪ { Z ∈ F : ∃X ∈ A, ∃Y ∈ B, X ∩ Y ⊆ Z }
//! ```
//!
//! so `L` is isomorphic to the image of `f` whenever `F` separates points
//! and contains the principal filters. Over the prime filters of a
//! distributive lattice `∨*` is plain union.
//!
//! The crate builds these objects and checks the identities exhaustively:
//!
//! - [`lattice`]: the finite lattice data model.
//! - [`filter`]: filters, the all/principal/prime/custom families,
//!   separation and union-closure checks.
//! - [`repr`]: the point map, `∧*`, `∨*`, `∨**`, the union-based meets,
//!   and the verifiers.
//! - [`gen`]: lattices up to isomorphism and seeded random lattices.
//!
//! ```
//! use latrep::{filter, fixtures, repr};
//!
//! let m3 = fixtures::m3();
//! let family = filter::all_filters(&m3);
//! let (meets, joins) = repr::verify_preservation(&m3, &family).unwrap();
//! assert!(meets.holds && joins.holds);
//! ```

pub mod bitset;
pub mod error;
pub mod filter;
pub mod fixtures;
pub mod gen;
pub mod lattice;
pub mod repr;

pub use bitset::{ElementSet, IndexSet};
pub use error::{Error, Result};
pub use filter::{FamilyKind, Filter, FilterFamily};
pub use lattice::{Element, Lattice};
pub use repr::{Claim, Counterexample, Representation, SetLatticeElement, VerificationReport};
