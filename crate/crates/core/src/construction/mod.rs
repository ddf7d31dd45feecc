//! The piecewise counterexample: a density `φ` on the log-argument axis
//! taking the values 1 and 2, its primitive `f`, `F(x) = 2^{f(log₂x)}` and
//! `Φ(x) = ∫₀ˣ F(t)/t dt`.
//!
//! On `(0, 4]` the density is 1. For every `n ≥ 3` the block `(2^{n−1}, 2^n]`
//! has density 1 up to the breakpoint `2^n − 2^{√n}` and density 2 on the
//! remaining stretch of length `2^{√n}`. All operations take their arguments
//! in the log domain (`u = log₂x`) where the block structure lives.

mod model;
mod table;

pub use model::{CounterexampleModel, View};
pub use table::{Block, BlockTable, Location, MAX_BLOCKS};
pub(crate) use table::{side, Side};

use serde::{Deserialize, Serialize};

use crate::arith::{pow2_sqrt, Dyadic, Enclosure};
use crate::error::Result;

/// How the stretch length of block `n` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StretchRule {
    /// `2^{√n}`: the genuine construction.
    SqrtExponent,
    /// `2^{n/2}`: stretches of constant relative density (test double).
    HalfExponent,
}

/// Parameters of a construction. [`Construction::standard`] is the real one;
/// the other constructors produce deliberately broken variants used to check
/// that the verifier can fail.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Construction {
    pub stretch_rule: StretchRule,
    /// Density on the stretches (2 in the genuine construction).
    pub stretch_slope: Dyadic,
}

impl Construction {
    pub fn standard() -> Self {
        Construction {
            stretch_rule: StretchRule::SqrtExponent,
            stretch_slope: Dyadic::from_i64(2),
        }
    }

    /// Stretch density 1/2 instead of 2.
    pub fn half_slope() -> Self {
        Construction {
            stretch_rule: StretchRule::SqrtExponent,
            stretch_slope: Dyadic::pow2(-1),
        }
    }

    /// Stretch length `2^{n/2}` instead of `2^{√n}`.
    pub fn half_exponent() -> Self {
        Construction {
            stretch_rule: StretchRule::HalfExponent,
            stretch_slope: Dyadic::from_i64(2),
        }
    }

    pub fn is_standard(&self) -> bool {
        *self == Self::standard()
    }

    pub fn label(&self) -> String {
        match (self.stretch_rule, self.stretch_slope.approx_f64()) {
            (StretchRule::SqrtExponent, a) if a == 2.0 => "standard".into(),
            (StretchRule::SqrtExponent, a) => format!("sqrt-exponent, slope {a}"),
            (StretchRule::HalfExponent, a) => format!("half-exponent, slope {a}"),
        }
    }

    /// Stretch length of block `n`.
    pub fn stretch(&self, n: u32, bits: u32) -> Result<Enclosure> {
        match self.stretch_rule {
            StretchRule::SqrtExponent => pow2_sqrt(n as u64, bits),
            StretchRule::HalfExponent => {
                if n % 2 == 0 {
                    Ok(Enclosure::pow2(n as i64 / 2, bits))
                } else {
                    Enclosure::point(Dyadic::from_parts(false, (n as u64).into(), -1), bits)
                        .exp2_bits(bits + 4)
                        .map(|e| e.with_bits(bits))
                }
            }
        }
    }
}

impl Default for Construction {
    fn default() -> Self {
        Self::standard()
    }
}

/// Value of the density on an enclosure of its argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Density {
    /// Slope-1 region.
    Unit,
    /// Stretch region (slope = the construction's stretch slope).
    Stretch,
    /// The enclosure straddles a breakpoint.
    Undetermined,
}

impl Density {
    /// Numeric value for the genuine construction (1 or 2).
    pub fn standard_value(self) -> Option<u8> {
        match self {
            Density::Unit => Some(1),
            Density::Stretch => Some(2),
            Density::Undetermined => None,
        }
    }
}
