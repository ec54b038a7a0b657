//! Relational semantics for normal lattice-expansion logics on finite structures.
//!
//! Polarities `(A, X, I)` and reflexive graphs `(Z, E)` are turned into concept
//! lattices; frames add one relation per connective and yield complex algebras
//! in which formulas are evaluated. Satisfaction (`⊩`) and refutation (`≻`) are
//! read off the evaluated concept.
//!
//! ```
//! use lesem::{lattice::Polarity, lattice::ConceptLattice};
//!
//! let p = Polarity::new(
//!     vec!["a".into(), "b".into(), "c".into()],
//!     vec!["x".into(), "y".into(), "z".into()],
//!     [("a", "z"), ("b", "x"), ("c", "x"), ("c", "y")],
//! )
//! .unwrap();
//! let l = ConceptLattice::new(&p).unwrap();
//! assert_eq!(l.len(), 5);
//! assert!(!l.is_distributive());
//! ```

pub mod algebra;
pub mod bitset;
pub mod correspondence;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod polarity;
pub mod relation;
pub mod representation;
pub mod syntax;

pub use algebra::{ConceptAlgebra, LeAlgebra, Valuation};
pub use bitset::BitSet;
pub use correspondence::AnyFrame;
pub use error::{Error, Result};
pub use graph::GraphFrame;
pub use lattice::{ConceptLattice, Polarity};
pub use polarity::PolarityFrame;
pub use representation::{FiniteLattice, ReflexiveGraph};
pub use syntax::{Formula, Sequent, Signature};
