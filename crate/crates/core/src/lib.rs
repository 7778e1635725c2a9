//! Finite models of quantum sheaves, quasipoints, and spectral families.

pub mod bitset;
pub mod classical;
pub mod hilbert;
pub mod json;
pub mod lattice;
pub mod oracle;
pub mod presheaf;
pub mod quantum;
pub mod random;
pub mod sector;
pub mod tolerance;
pub mod verify;

pub use bitset::BitSet;
pub use lattice::{FiniteLattice, LatticeError};
pub use presheaf::{Presheaf, PresheafError};
pub use hilbert::{HilbertError, Subspace};
pub use tolerance::Tolerances;
