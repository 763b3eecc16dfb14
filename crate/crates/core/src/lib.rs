//! Finite rings, free modules and free Lie algebras, with checkers for
//! automorphisms of the categories and semigroups built from them.

pub mod decomp;
pub mod endo;
pub mod error;
pub mod lie;
pub mod matrix;
pub mod module;
pub mod ring;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use module::{CategoryAction, CategoryAutoDescriptor, ModuleHom, MultAutTable, SemiLinearMap};
pub use ring::{Elem, Ring, RingAut, RingSpec};
pub use rng::Lcg64;
