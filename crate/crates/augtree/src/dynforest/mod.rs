//! Dynamic forests: the rooted forest holding the shrunk tree, the
//! marked-ancestor structure, and the eccentricity forest.

mod ecc;
mod forest;
mod marked;
pub mod reference;

pub use ecc::EccForest;
pub use forest::DynamicForest;
pub use marked::MarkedAncestors;
