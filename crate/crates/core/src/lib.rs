//! Asynchronous automatic structures for fundamental groups of finite graphs
//! of groups with finite or free vertex groups and finite-index edge groups.

pub mod automata;
pub mod error;
pub mod fixtures;
pub mod gog;
pub mod gogfile;
pub mod group;
pub mod structure;

pub use error::{Error, Result};
