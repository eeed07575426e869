//! Exact combinatorics of the Grassmann graph `J_q(n,k)`.
//!
//! The crate materializes the projective geometry of `F_q^n` (canonical
//! subspaces, meets, joins, enumeration), the Grassmann graph built on its
//! `k`-dimensional members, and the Euclidean representation of that graph
//! attached to its second largest eigenvalue. On top of that it computes the
//! fixed-space bases, Gram tables and transition matrices that express the
//! vectors of `x ∩ y` and `x + y` purely in terms of graph data, and an
//! explorer that runs the same machinery on arbitrary graphs read from disk.
//!
//! Every number is exact: integers are checked `i128` or `BigInt`, rationals
//! are `BigRational`.

pub mod error;
pub mod exec;
pub mod explorer;
pub mod field;
pub mod fix;
pub mod euclid;
pub mod graph;
pub mod grassmann;
pub mod qarith;
pub mod ratmat;
pub mod subspace;
pub mod suite;

pub use error::{Error, Result};
pub use euclid::{RepVector, Representation};
pub use field::Field;
pub use grassmann::{GrassmannGraph, OrbitPartition};
pub use qarith::QParams;
pub use subspace::{FqMatrix, PointId, ProjectiveSpace, Subspace};
