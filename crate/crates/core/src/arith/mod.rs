//! Certified arithmetic: dyadic bounds, interval enclosures and
//! log-domain magnitudes.

pub mod decimal;
pub mod dyadic;
pub mod elementary;
pub mod enclosure;
pub mod logmag;
pub mod special;

pub use dyadic::{Dyadic, Rounding};
pub use enclosure::{compare, Bound, Comparison, Enclosure, DEFAULT_BITS};
pub use logmag::{log_sum, LogMagnitude};
pub use special::{log2_one_minus_pow2_neg, log2_pow2_minus_one, pow2_sqrt};
