//! Schur rings over cyclic groups and the permutation groups behind them.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod perm;
pub mod scheme;
pub mod sring;
pub mod structure;
pub mod zn;

pub use error::{Error, Result};
pub use sring::SRing;
pub use zn::{Section, SubgroupId};
