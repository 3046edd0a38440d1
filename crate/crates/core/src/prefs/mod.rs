//! Preference systems, stability, Gale-Shapley, reduction to the core and
//! the lattice operations on stable matchings.

mod core_system;
mod gale_shapley;
mod system;

pub use core_system::{reduce_to_core, CoreSystem};
pub use gale_shapley::{blocking_edge, gale_shapley, is_stable, Proposers};
pub use system::{Edge, EdgeId, Matching, PreferenceSystem};
