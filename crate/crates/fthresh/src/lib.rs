//! Exact-arithmetic invariants of singularities in prime characteristic.
//!
//! The crate computes Frobenius-theoretic invariants of polynomials and
//! ideals over F_p localized at the origin: nu- and mu-invariants, sharp
//! F-purity checks, F-pure thresholds with certified rational bounds, test
//! ideals and their left limits, F-jumping numbers, orbit discreteness of
//! threshold candidates, and monotone scans over one-parameter families.
//! All arithmetic is exact; no floating point appears anywhere, including
//! in reports.

pub mod chains;
pub mod cli;
pub mod config;
pub mod error;
pub mod fpt;
pub mod frobenius;
pub mod groebner;
pub mod poly;
pub mod rat;
pub mod testideal;

pub use config::Budgets;
pub use error::{Error, Result};
pub use rat::Rat;
