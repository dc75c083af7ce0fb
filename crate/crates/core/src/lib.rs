//! Hilbert–Samuel multiplicities and Hilbert series of Schubert varieties at
//! torus fixed points, computed by several independent routes: flagged
//! tableaux, a binomial determinant, facets of a Gröbner degeneration of the
//! Kazhdan–Lusztig ideal, and the K-polynomial of its initial ideal.

pub mod covex;
pub mod error;
pub mod monideal;
pub mod perm;
pub mod poly;
pub mod report;
pub mod srcomplex;
pub mod sweep;
pub mod tabpipe;
pub mod unipoly;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use perm::{Cell, Diagram, FlagVector, Partition, Permutation, RankMatrix};
pub use unipoly::UniPoly;
