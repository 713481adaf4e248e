//! Finite groups, finite modules over them, normalized 2-cocycles, `H^2`,
//! and group extensions.
//!
//! Group elements are indices `0..|G|` into a multiplication table. Module
//! elements are coordinate vectors in the canonical Smith coordinates of
//! the underlying abelian group.

mod cocycle;
mod extension;
mod group;
mod h2;
pub mod lemma;
mod module;
pub mod small;

use thiserror::Error;

pub use cocycle::{classes_equal, cup1, morphism_extends, Cocycle2};
pub use extension::GroupExtension;
pub use group::{cyclic_action, semidirect, FiniteGroup, SemidirectProduct};
pub use h2::{h2, H2};
pub use module::{AElem, GModule, ModuleMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GcohError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("cochains live in different modules")]
    ModuleMismatch,
    #[error("{what} is {size}, above the bound {bound}")]
    SizeBoundExceeded {
        what: String,
        size: usize,
        bound: usize,
    },
    #[error("not a section: {0}")]
    NotASection(String),
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("not a crossed homomorphism: {0}")]
    NotCrossedHom(String),
}

/// Size limits for enumerations. `SPINLIFT_BOUND` replaces each of them
/// when set (see the CLI).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub group_order: usize,
    pub module_order: usize,
    pub h2_size: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            group_order: 64,
            module_order: 16,
            h2_size: 16,
        }
    }
}

impl Bounds {
    pub fn uniform(b: usize) -> Self {
        Bounds {
            group_order: b,
            module_order: b,
            h2_size: b,
        }
    }
}
