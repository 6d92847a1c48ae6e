//! Exact computations with relative Sullivan models of fibrewise H-spaces.
//!
//! A relative model is an inclusion `B -> B ⊗ ΛW` of free graded-commutative
//! algebras over the rationals, with a differential `D` on the fibre
//! generators. A fibrewise multiplication of models is a comultiplication
//! `C: B ⊗ ΛW -> B ⊗ ΛW ⊗ ΛW` fixing `B` whose excess over the standard
//! coproduct `C₀(w) = w + w'` is mixed.
//!
//! The crate normalizes such pairs `(D, C)`:
//!
//! * [`normalize::hopf_normalize`] conjugates `D` by changes of generators
//!   until it vanishes on `W`;
//! * [`normalize::ls_normalize`] additionally removes the excess of `C` by
//!   DG homotopies and changes of generators until `C = C₀`.
//!
//! Each run yields either an [`certify::EquivalenceCertificate`], which
//! [`certify::verify_equivalence`] replays independently, or an
//! [`normalize::Obstruction`] naming a non-exact cohomology class.
//!
//! Every computation is exact and bounded by an explicit truncation degree.
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod certify;
pub mod dga;
mod error;
pub mod linalg;
pub mod model;
pub mod normalize;
pub mod propsolve;

pub use error::Error;

pub use algebra::{AlgebraMap, Derivation, GradedBasis, Monomial, Polynomial, Space, Var, Q};

pub use certify::{ChangeOfGenerators, DGHomotopy, EquivalenceCertificate, Step, Structure};
pub use dga::{CohomologySlice, FreeCdga};
pub use model::{Comultiplication, FiberGenerator, HypothesisReport, RelativeModel};
pub use normalize::{NormalizationResult, NormalizeOptions, Obstruction, Outcome};
