//! Exact arithmetic: F_q, A = F_q[θ], truncated Laurent series at ∞ and
//! truncated v-adic integers.

pub mod binomial;
pub mod field;
pub mod json;
pub mod laurent;
pub mod poly;
pub mod vadic;

pub use binomial::binomial_mod_p;
pub use field::{Fe, GaloisField};
pub use laurent::LaurentSeries;
pub use poly::{enumerate_below, enumerate_monic, MonicFilter, Poly};
pub use vadic::{VAdic, VPlace};
