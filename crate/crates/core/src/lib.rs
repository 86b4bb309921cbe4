//! Combinatorics of blown-up Coxeter complexes.
//!
//! The crate covers the seven infinite families of simplicial Coxeter groups
//! (`A`, `B`, `D` spherical; `Ã`, `B̃`, `C̃`, `D̃` toroidal) through three
//! mutually checking lenses:
//!
//! * graph-associahedra, built from tubings of the Coxeter graph
//!   ([`graph`], [`tubing`], [`fvector`]);
//! * particle configurations on a line or circle, where collisions are
//!   recorded as brackets ([`arrangement`], [`diagram`], [`building`]);
//! * the gluing of chambers and the operad composition of bracketed
//!   diagrams ([`group`], [`operad`], [`tiling`], [`euler`]).
//!
//! Every count is exact. Closed formulas are always paired with an
//! exhaustive enumeration that computes the same quantity another way.

pub mod arrangement;
pub mod building;
pub mod diagram;
pub mod euler;
pub mod fvector;
pub mod graph;
pub mod group;
pub mod linalg;
pub mod operad;
pub mod report;
pub mod tiling;
pub mod tubing;

pub use graph::{Family, FamilyTag, Graph, GraphError};
pub use tubing::{Tube, Tubing};
