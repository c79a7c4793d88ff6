//! Exact computations with skew group categories of quivers: quotient EI
//! quivers, Cartan triples and the algebras attached to them, root-lattice
//! folding, and the induced-module functor that categorifies it, all over
//! prime fields and verified table-exactly at desk scale.
//!
//! The pipeline, end to end: start from a finite acyclic quiver with a finite
//! group action, form the skew group category of its path category, describe
//! it by the quotient EI quiver, recognize the quotient as Cartan type,
//! transport modules along the resulting Morita equivalence, and compare rank
//! vectors with the folding projection between the root lattices.
//!
//! Every major capability has a runnable example under `examples/`; the thin
//! `foldquiv` binary exposes the same pipeline over a small text file format.

pub mod fingroup;
pub mod quotient;
pub mod algkit;
pub mod cartan;
pub mod eicat;
pub mod quiver;
pub mod rootfold;

pub use fingroup::{Biset, FinGroup, GSetAction};
pub use quiver::{Path, Quiver, QuiverAction};
