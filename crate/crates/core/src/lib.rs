//! Supersaturation tools for oddtown and eventown families: GF(2) linear
//! algebra on subsets, set-family statistics, explicit constructions and an
//! exact minimizer for the number of odd-intersecting pairs.

pub mod combin;
pub mod constructions;
pub mod error;
pub mod format;
pub mod gf2;
pub mod search;
pub mod setfamily;

pub use error::{Error, Result};
pub use gf2::{BitSubset, Gf2Subspace};
pub use search::{SearchResult, SearchSpec};
pub use setfamily::SetFamily;
