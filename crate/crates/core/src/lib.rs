//! Exact finite-dimensional machinery for G-spin chain field algebras:
//! finite groups, quantum doubles, twisted tensor products, lattice field
//! algebras and their observable subalgebras.

pub mod algebra;
pub mod double;
pub mod element;
pub mod field;
pub mod group;
pub mod linalg;
pub mod observable;
pub mod repr;
pub mod scalar;
pub mod suite;
pub mod twisted;
pub mod verify;

pub use algebra::{FunctionAlgebra, GroupAlgebra, HopfAlgebra, ModuleAction, StructureAlgebra};
pub use element::{AlgebraElement, Label};
pub use group::{Elem, FiniteGroup, GroupError, GroupSpec, Subgroup};
pub use scalar::{Qi, Scalar, SmallQi, Q};

/// Default cap on the number of basis labels of any constructed algebra.
pub const DEFAULT_BASIS_CAP: usize = 100_000;

/// Quantum double over exact Gaussian rationals.
pub type Double = double::QuantumDouble<Qi>;
/// Iterated twisted tensor product over exact Gaussian rationals.
pub type Iterated = twisted::IteratedAlgebra<Qi>;
/// Lattice field algebra over exact Gaussian rationals.
pub type Field = field::FieldAlgebra<Qi>;
/// Observable action over exact Gaussian rationals.
pub type Gamma = observable::GammaAction<Qi>;
