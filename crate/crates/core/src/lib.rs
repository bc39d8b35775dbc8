//! Graded particle statistics over finite Abelian groups.
//!
//! Commutation factors come from bicharacters on a product of cyclic groups.
//! Particles are modelled on a tensor-word Fock space with free and twisted
//! annihilators; relations hold up to the null states of the induced
//! scalar product.

pub mod cli;
pub mod coherence;
pub mod fock;
pub mod group;
pub mod model;
pub mod report;
pub mod transmute;
pub mod word;
pub mod zoo;

pub use group::{Bicharacter, GroupElement, GroupError, GroupHom, GroupSpec, RationalPhase};
pub use model::{BraidSpec, CrossSpec, ExpansionSign, ModelError, ParticleModel};
pub use report::{Check, CheckReport, Status, Verdict};
pub use word::{FockVector, TensorWord};
