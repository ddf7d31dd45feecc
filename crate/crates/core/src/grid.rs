//! Dyadic sample grids. Every point is an exact dyadic rational, so a grid
//! point can never coincide with an irrational breakpoint.

use crate::arith::{Dyadic, Enclosure, Rounding};
use crate::construction::BlockTable;

/// Offset used to step off a breakpoint on either side.
pub const BREAKPOINT_OFFSET_EXP: i64 = -16;

/// Evenly spaced lattice `{k·δ : 0 ≤ k·δ ≤ hi}` where `δ` is the largest
/// power of two with at least `count` steps below `hi`.
pub fn lattice(hi: &Dyadic, count: usize) -> Vec<Dyadic> {
    if !hi.is_positive() || count == 0 {
        return vec![Dyadic::zero()];
    }
    let ratio = hi.approx_f64() / count as f64;
    let step = Dyadic::pow2(ratio.log2().floor() as i64);
    let mut out = Vec::new();
    let mut k: i64 = 0;
    loop {
        let p = step.mul(&Dyadic::from_i64(k));
        if p > *hi {
            break;
        }
        out.push(p);
        k += 1;
    }
    out
}

/// `count` points spread geometrically over `[2^lo, 2^hi]` in the log
/// domain, rounded to `frac_bits` fractional bits.
pub fn log_spaced(lo: f64, hi: f64, count: usize, frac_bits: i64) -> Vec<Dyadic> {
    let mut out: Vec<Dyadic> = (0..count)
        .map(|i| {
            let t = if count == 1 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / (count - 1) as f64
            };
            let scaled = (t * 2f64.powi(frac_bits as i32)).round();
            Dyadic::from_f64(scaled).expect("finite").mul_pow2(-frac_bits)
        })
        .collect();
    out.dedup();
    out
}

/// Dyadic points just below and just above an enclosed breakpoint.
pub fn around(b: &Enclosure) -> (Dyadic, Dyadic) {
    let (lo, hi) = b.finite_bounds().expect("breakpoints are finite");
    let off = Dyadic::pow2(BREAKPOINT_OFFSET_EXP);
    let below = lo.round(48, Rounding::Down).sub(&off);
    let above = hi.round(48, Rounding::Up).add(&off);
    (below, above)
}

/// Block boundaries `2^n`, breakpoint neighbours, and exact breakpoints
/// (perfect-square blocks) inside `[lo, hi]`.
pub fn block_critical_points(table: &BlockTable, lo: &Dyadic, hi: &Dyadic) -> Vec<Dyadic> {
    let mut pts = vec![Dyadic::from_i64(4)];
    for b in table.blocks() {
        pts.push(b.end.clone());
        let (below, above) = around(&b.breakpoint);
        pts.push(below);
        pts.push(above);
        if b.breakpoint.is_point() {
            pts.push(b.breakpoint.lo_finite().expect("point").clone());
        }
    }
    pts.retain(|p| p >= lo && p <= hi);
    pts.sort();
    pts.dedup();
    pts
}

/// The 64-point dilation grid: `k/64` for `k = 1..=32` and `2^{-j}` for
/// `j = 7..=38`, sorted increasingly.
pub fn dilation_grid() -> Vec<Dyadic> {
    let mut g: Vec<Dyadic> = (1..=32)
        .map(|k| Dyadic::from_i64(k).mul_pow2(-6))
        .chain((7..=38).map(|j| Dyadic::pow2(-j)))
        .collect();
    g.sort();
    g.dedup();
    g
}

/// `2^{j/2}` for `j = lo..=hi`, rounded down to 64 bits.
pub fn half_octave_grid(lo: i64, hi: i64) -> Vec<Dyadic> {
    (lo..=hi)
        .map(|j| {
            let e = Enclosure::point(Dyadic::from_i64(j).mul_pow2(-1), 96)
                .exp2()
                .expect("small exponent");
            e.lo_finite().expect("finite").round(64, Rounding::Down)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::Construction;

    #[test]
    fn lattice_covers_range() {
        let l = lattice(&Dyadic::from_i64(64), 16);
        assert_eq!(l.first(), Some(&Dyadic::zero()));
        assert_eq!(l.last(), Some(&Dyadic::from_i64(64)));
        assert_eq!(l.len(), 17);
    }

    #[test]
    fn dilation_grid_shape() {
        let g = dilation_grid();
        assert_eq!(g.len(), 64);
        assert!(g.contains(&Dyadic::pow2(-2)) && g.contains(&Dyadic::pow2(-16)));
        assert!(g.iter().all(|x| x.is_positive() && *x <= Dyadic::pow2(-1)));
    }

    #[test]
    fn half_octaves() {
        let g = half_octave_grid(2, 6);
        assert_eq!(g[0], Dyadic::from_i64(2));
        assert_eq!(g[4], Dyadic::from_i64(8));
        assert!((g[1].approx_f64() - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn critical_points_avoid_breakpoints() {
        let t = BlockTable::new(Construction::standard(), 8, 128).unwrap();
        let pts = block_critical_points(&t, &Dyadic::zero(), &Dyadic::from_i64(256));
        for b in t.blocks() {
            if !b.breakpoint.is_point() {
                assert!(pts.iter().all(|p| !b.breakpoint.contains(p)));
            }
        }
        assert!(pts.contains(&Dyadic::from_i64(12)));
    }
}
