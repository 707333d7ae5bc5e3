//! Automorphism groups of colored set families of bounded antichain size,
//! and of marked-clique families on interval graphs.
//!
//! The main entry points are [`setfamily::autom_set`] and
//! [`marked::autom_marked_int`]; [`oracle`] provides brute-force ground truth.

pub mod error;
pub mod format;
pub mod group;
pub mod interval;
pub mod marked;
pub mod oracle;
pub mod par;
pub mod perm;
pub mod setfamily;

pub use error::{Error, Result};
pub use group::PermGroup;
pub use perm::Permutation;
