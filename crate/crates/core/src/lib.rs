//! Multiple zeta values over A = F_q[θ].
//!
//! ∞-adic and v-adic multiple zeta (star) values at integer tuples, the degree
//! truncated sums they are built from, Goss multi-measures on A_v^r, and
//! verifiers for the identities relating them.

pub mod algebra;
pub mod error;
pub mod identities;
pub mod measures;
pub mod power_sums;
pub mod zeta_infty;
pub mod zeta_v;

pub use error::{Error, Result};
