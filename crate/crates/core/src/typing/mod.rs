//! Type inference and specialisation.

mod check;
mod specialise;

pub use check::{typecheck, typecheck_all, TypeEnvironment};
pub use specialise::{apply_type, specialise, specialise_env, Specialisation};
