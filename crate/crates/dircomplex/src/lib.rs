//! Finite combinatorial shapes for higher-dimensional rewriting.
//!
//! The central object is the [`OrientedGradedPoset`]: a finite graded poset
//! whose Hasse diagram edges carry `+`/`-` labels. Closed subsets of such a
//! poset model pasting diagrams; the library recognises molecules and regular
//! directed complexes, computes input/output boundaries, builds the standard
//! shape constructions (suspensions, Gray products, joins, cylinders,
//! substitutions, shells, simplex-to-globe map families), and verifies the
//! ball/sphere structure of shapes through the integer homology of their
//! order complexes.

pub mod constructions;
pub mod maps;
pub mod molecule;
pub mod ogposet;
pub mod set;
pub mod simplicial;

pub use maps::OgpMap;
pub use ogposet::{OrientedGradedPoset, Poset, Sign, Side};
pub use set::ElemSet;
