//! Stable matchings in bipartite preference systems as cuts of a flow network.
//!
//! The algorithms are generic over an exact signed integer scalar
//! ([`scalar::Weight`]); the aliases below fix it to `i64`.

pub mod assoc;
pub mod error;
pub mod fair;
pub mod flow;
pub mod lcut;
pub mod optimize;
pub mod oracle;
pub mod poset;
pub mod prefs;
pub mod ringset;
pub mod scalar;

pub use assoc::AssocDigraph;
pub use error::{Error, Result};
pub use prefs::{reduce_to_core, CoreSystem, EdgeId, Matching, PreferenceSystem};
pub use ringset::{NodeSet, RingCode};

/// Default scalar for weights, costs and capacities.
pub type Scalar = i64;
pub type Capacity = scalar::Capacity<Scalar>;
pub type FlowNetwork = flow::FlowNetwork<Scalar>;
pub type MaxFlow = flow::MaxFlow<Scalar>;
pub type Cheapest = optimize::Cheapest<Scalar>;
pub type MultiCost = optimize::MultiCost<Scalar>;
pub type PackingCertificate = optimize::PackingCertificate<Scalar>;
pub type LCutCertificate = lcut::LCutCertificate<Scalar>;
pub type DisjointFamily = lcut::DisjointFamily<Scalar>;
pub type UnionFamily = lcut::UnionFamily<Scalar>;
pub type ChainCover = poset::ChainCover<Scalar>;
pub type MirskyCover = poset::MirskyCover<Scalar>;
pub type AntichainPacking = poset::AntichainPacking<Scalar>;
pub type DisjointAntichains = poset::DisjointAntichains<Scalar>;
