use crate::arith::{log2_pow2_minus_one, log_sum, Bound, Dyadic, Enclosure, LogMagnitude};
use crate::error::{Error, Result};

use super::Construction;

/// Largest supported block index. Beyond it the exact segment arithmetic
/// works on integers with millions of bits.
pub const MAX_BLOCKS: u32 = 20;

/// Per-block data in the log-argument domain. Block `n` covers
/// `(2^{n−1}, 2^n]` and splits at `breakpoint = 2^n − stretch`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub n: u32,
    pub start: Dyadic,
    pub end: Dyadic,
    pub stretch: Enclosure,
    pub breakpoint: Enclosure,
    /// Length of the slope-1 part, `2^{n−1} − stretch`.
    pub unit_len: Enclosure,
    pub f_at_start: Enclosure,
    pub f_at_break: Enclosure,
    pub f_at_end: Enclosure,
    /// Total stretch measure in `[0, start]`.
    pub stretch_before: Enclosure,
    /// `log₂ Φ(2^u)` at `u = start, breakpoint, end`.
    pub phi_log_at_start: Enclosure,
    pub phi_log_at_break: Enclosure,
    pub phi_log_at_end: Enclosure,
    /// `Σ (2^{f(end_i)} − 2^{f(break_i)})` over the stretches of blocks
    /// `3..n−1` and `3..n` respectively: the gap between `F` and `Φ`, up to
    /// the factor `1 − 1/a`.
    pub deficit_before: LogMagnitude,
    pub deficit_at_end: LogMagnitude,
}

/// Where a log-argument falls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    /// `u ≤ 4`, density 1.
    Head,
    Block(u32),
}

/// Eagerly built, immutable table of blocks `3..=n_max`.
#[derive(Clone, Debug)]
pub struct BlockTable {
    construction: Construction,
    bits: u32,
    n_max: u32,
    blocks: Vec<Block>,
    slope: Enclosure,
    log2_slope: Enclosure,
}

impl BlockTable {
    pub fn new(construction: Construction, n_max: u32, bits: u32) -> Result<Self> {
        if bits < 8 {
            return Err(Error::Config(format!(
                "precision of {bits} bits is below the minimum of 8"
            )));
        }
        if n_max > MAX_BLOCKS {
            return Err(Error::Config(format!(
                "n_max = {n_max} exceeds the supported maximum {MAX_BLOCKS}"
            )));
        }
        if !construction.stretch_slope.is_positive() {
            return Err(Error::Config("stretch slope must be positive".into()));
        }
        let slope = Enclosure::point(construction.stretch_slope.clone(), bits);
        let log2_slope = slope.log2()?;
        let mut table = BlockTable {
            construction,
            bits,
            n_max: 2,
            blocks: Vec::new(),
            slope,
            log2_slope,
        };
        table.grow(n_max)?;
        Ok(table)
    }

    /// A copy extended to `n_max` blocks; existing blocks are reused as is.
    pub fn extended(&self, n_max: u32) -> Result<Self> {
        if n_max > MAX_BLOCKS {
            return Err(Error::Config(format!(
                "n_max = {n_max} exceeds the supported maximum {MAX_BLOCKS}"
            )));
        }
        let mut t = self.clone();
        t.grow(n_max)?;
        Ok(t)
    }

    fn grow(&mut self, n_max: u32) -> Result<()> {
        let bits = self.bits;
        let am1 = self.slope.sub(&Enclosure::one(bits));
        for n in (self.n_max + 1).max(3)..=n_max {
            let (f_start, a_before, phi_start, deficit_before) = match self.blocks.last() {
                Some(b) => (
                    b.f_at_end.clone(),
                    b.stretch_before.add(&b.stretch),
                    b.phi_log_at_end.clone(),
                    b.deficit_at_end.clone(),
                ),
                None => (
                    Enclosure::from_i64(4, bits),
                    Enclosure::zero(bits),
                    Enclosure::from_i64(4, bits),
                    LogMagnitude::Zero,
                ),
            };
            let start = Dyadic::pow2(n as i64 - 1);
            let end = Dyadic::pow2(n as i64);
            let stretch = self.construction.stretch(n, bits)?;
            let end_e = Enclosure::point(end.clone(), bits);
            let breakpoint = end_e.sub(&stretch);
            let unit_len = Enclosure::point(start.clone(), bits).sub(&stretch);
            if !unit_len.certainly_positive() {
                return Err(Error::Config(format!(
                    "stretch of block {n} does not fit inside the block"
                )));
            }
            let f_break = f_start.add(&unit_len);
            let a_end = a_before.add(&stretch);
            let f_end = end_e.add(&am1.mul(&a_end));

            let seg1 = f_start.add(&log2_pow2_minus_one(&unit_len)?);
            let phi_break = log_exp(log_sum(
                &[LogMagnitude::from_exp2(phi_start.clone()), LogMagnitude::from_exp2(seg1)],
                bits,
            )?)?;
            let stretch_gain = f_break.add(&log2_pow2_minus_one(&self.slope.mul(&stretch))?);
            let seg2 = stretch_gain.sub(&self.log2_slope);
            let phi_end = log_exp(log_sum(
                &[LogMagnitude::from_exp2(phi_break.clone()), LogMagnitude::from_exp2(seg2)],
                bits,
            )?)?;
            let deficit_end = log_sum(
                &[deficit_before.clone(), LogMagnitude::from_exp2(stretch_gain)],
                bits,
            )?;
            self.blocks.push(Block {
                n,
                start,
                end,
                stretch,
                breakpoint,
                unit_len,
                f_at_start: f_start,
                f_at_break: f_break,
                f_at_end: f_end,
                stretch_before: a_before,
                phi_log_at_start: phi_start,
                phi_log_at_break: phi_break,
                phi_log_at_end: phi_end,
                deficit_before,
                deficit_at_end: deficit_end,
            });
        }
        self.n_max = self.n_max.max(n_max);
        Ok(())
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, n: u32) -> Option<&Block> {
        if n < 3 {
            return None;
        }
        self.blocks.get((n - 3) as usize)
    }

    /// Stretch slope `a` as an enclosure.
    pub fn slope(&self) -> &Enclosure {
        &self.slope
    }

    pub fn log2_slope(&self) -> &Enclosure {
        &self.log2_slope
    }

    /// Largest log-argument covered by the table.
    pub fn budget(&self) -> Dyadic {
        Dyadic::pow2(self.n_max.max(2) as i64)
    }

    /// Block containing the log-argument `u` (`u ≤ 4` is the head).
    pub fn locate(&self, u: &Dyadic) -> Result<Location> {
        if *u <= Dyadic::from_i64(4) {
            return Ok(Location::Head);
        }
        let n = if u.is_pow2() { u.top() - 1 } else { u.top() };
        if n > self.n_max as i64 {
            return Err(Error::Budget(format!(
                "log-argument ≈ {:.6e} lies beyond block {} (budget 2^{})",
                u.approx_f64(),
                self.n_max,
                self.n_max
            )));
        }
        Ok(Location::Block(n as u32))
    }

    /// `log₂ Φ(2^{2^n})`, i.e. the accumulated integral at a block end.
    pub fn phi_log_at_block_end(&self, n: u32) -> Result<Enclosure> {
        if n <= 2 {
            return Ok(Enclosure::from_i64(1 << n, self.bits));
        }
        self.block(n)
            .map(|b| b.phi_log_at_end.clone())
            .ok_or_else(|| Error::Budget(format!("block {n} beyond n_max = {}", self.n_max)))
    }
}

fn log_exp(m: LogMagnitude) -> Result<Enclosure> {
    m.exp2_or_err().cloned()
}

/// Position of a point relative to an enclosed breakpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Side {
    AtOrBelow,
    Above,
    Straddle,
}

pub(crate) fn side(u: &Dyadic, b: &Enclosure) -> Side {
    let ub = Bound::Finite(u.clone());
    if &ub <= b.lo() {
        Side::AtOrBelow
    } else if &ub > b.hi() {
        Side::Above
    } else {
        Side::Straddle
    }
}
