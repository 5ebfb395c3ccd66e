//! Persistent Turing machines, their interactive transition systems, and the
//! simplicial homology of the configuration spaces they visit.

pub mod cli;
pub mod env;
pub mod fixtures;
pub mod its;
pub mod machine;
pub mod path;
pub mod topo;
