//! Exact mod-p cohomology (modulo nilpotents), odd and nilpotent parts, and
//! stable splittings of p-local finite groups whose Sylow subgroup is the
//! extraspecial group p^{1+2}_+ or (Z/p)^2.

pub mod action;
pub mod catalog;
pub mod cohomology;
pub mod error;
pub mod fusion;
pub mod gf;
pub mod graded;
pub mod invariants;
pub mod linalg;
pub mod presentation;
pub mod splitting;
pub mod verify;

pub use error::{Error, Result};
