//! Certified numerics for Orlicz functions.
//!
//! The crate has four layers:
//!
//! * [`arith`] — outward-rounded interval enclosures over dyadic rationals,
//!   plus log-domain magnitudes for values far beyond `f64` range;
//! * [`construction`] — a piecewise Orlicz function with upper index 1 that
//!   is not in ∇₃, evaluated block by block in closed form;
//! * [`analysis`] — generic tools over any [`analysis::OrliczModel`]: index
//!   estimation, Young conjugates, ∇₃ probing, dilation sampling and
//!   Luxemburg norms;
//! * [`verify`] — grid checks of the inequalities behind the construction,
//!   assembled into a deterministic [`verify::VerificationReport`].

pub mod analysis;
pub mod arith;
pub mod construction;
pub mod error;
pub mod grid;
pub mod verify;

pub use error::{Error, Result};

/// Order-preserving map, parallel when the `parallel` feature is on.
pub(crate) fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
