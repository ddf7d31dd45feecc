//! Matuszewska–Orlicz indices at infinity via running suprema.
//!
//! For a range exponent `e` the statistic is
//! `T_p(e) = sup log₂M(xy) − log₂M(x) − p·log₂y` over sampled `x, y ∈ [1, 2^e]`,
//! and the dual statistic swaps the sign of the bracket. `β` is the least `p`
//! whose statistic stays bounded as `e` grows, `α` the largest `p` whose dual
//! does. Boundedness is judged by growth across the last range doubling.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::arith::{Dyadic, Enclosure};
use crate::error::{Error, Result};
use crate::grid;
use crate::par_map;

use super::model::OrliczModel;

/// Relative growth (in value) below which a running sup counts as stable.
pub const STABILITY_GROWTH: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum IndexVerdict {
    Stabilizing,
    Diverging,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct IndexEstimate {
    pub p_grid: Vec<Enclosure>,
    pub range_exponents: Vec<Dyadic>,
    /// `running_sup[i][k]`: `log₂` of the sup statistic for `p_grid[i]` over
    /// ranges `range_exponents[..=k]`.
    pub running_sup: Vec<Vec<Enclosure>>,
    pub verdict_per_p: Vec<IndexVerdict>,
    /// The same for the dual statistic.
    pub running_sup_dual: Vec<Vec<Enclosure>>,
    pub dual_verdict_per_p: Vec<IndexVerdict>,
    pub beta_hat: Option<Enclosure>,
    pub alpha_hat: Option<Enclosure>,
    /// Number of distinct `log₂y` values sampled at the largest range.
    pub sampled_y: usize,
    /// `log₂(1 + STABILITY_GROWTH)`.
    tolerance: Enclosure,
}

impl IndexEstimate {
    /// Verdict for `p_grid[i]` judged on the ranges `..=k` only (`k ≥ 1`).
    pub fn verdict_through(&self, i: usize, k: usize) -> IndexVerdict {
        verdict(&self.running_sup[i][..=k], &self.tolerance)
    }

    pub fn dual_verdict_through(&self, i: usize, k: usize) -> IndexVerdict {
        verdict(&self.running_sup_dual[i][..=k], &self.tolerance)
    }

    /// `β̂` as it reads after the range `range_exponents[k]`.
    pub fn beta_hat_through(&self, k: usize) -> Option<Enclosure> {
        (0..self.p_grid.len())
            .find(|&i| self.verdict_through(i, k) == IndexVerdict::Stabilizing)
            .map(|i| self.p_grid[i].clone())
    }

    /// `α̂` as it reads after the range `range_exponents[k]`.
    pub fn alpha_hat_through(&self, k: usize) -> Option<Enclosure> {
        (0..self.p_grid.len())
            .rev()
            .find(|&i| self.dual_verdict_through(i, k) == IndexVerdict::Stabilizing)
            .map(|i| self.p_grid[i].clone())
    }
}

/// `max` and `min` over sampled `x` of `log₂M(xy) − log₂M(x)`, keyed by
/// `log₂y`.
type Increments = BTreeMap<Dyadic, (Enclosure, Enclosure)>;

fn range_increments(model: &dyn OrliczModel, e: &Dyadic, density: usize) -> Result<Increments> {
    let zero = Dyadic::zero();
    let lattice = grid::lattice(e, density);
    let mut crit = model.critical_log_points(&zero, &e.mul_pow2(1));
    crit.insert(0, zero.clone());
    crit.dedup();
    let crit_x: Vec<Dyadic> = crit.iter().filter(|c| *c <= e).cloned().collect();

    let mut pairs: Vec<(Dyadic, Dyadic)> = Vec::new();
    for ux in lattice.iter().chain(crit_x.iter()) {
        for uy in &lattice {
            pairs.push((ux.clone(), uy.clone()));
        }
    }
    for (i, c1) in crit_x.iter().enumerate() {
        for c2 in &crit[i + 1..] {
            let uy = c2.sub(c1);
            if uy > *e {
                break;
            }
            pairs.push((c1.clone(), uy));
        }
    }

    let mut points: Vec<Dyadic> = pairs
        .iter()
        .flat_map(|(x, y)| [x.clone(), x.add(y)])
        .collect();
    points.sort();
    points.dedup();
    let bits = model.precision_bits();
    let values = par_map(&points, |u| model.log_eval(&Enclosure::point(u.clone(), bits)));
    let mut memo: HashMap<Dyadic, Enclosure> = HashMap::with_capacity(points.len());
    for (u, v) in points.into_iter().zip(values) {
        memo.insert(u, v?);
    }

    let mut inc: Increments = BTreeMap::new();
    for (ux, uy) in pairs {
        let d = memo[&ux.add(&uy)].sub(&memo[&ux]);
        inc.entry(uy)
            .and_modify(|(mx, mn)| {
                *mx = mx.max(&d);
                *mn = mn.min(&d);
            })
            .or_insert_with(|| (d.clone(), d));
    }
    Ok(inc)
}

fn verdict(series: &[Enclosure], tol: &Enclosure) -> IndexVerdict {
    let (prev, last) = (&series[series.len() - 2], &series[series.len() - 1]);
    // Growth of the running sup across the last doubling, in the log domain.
    let growth_hi = last.hi_f64() - prev.lo_f64();
    let growth_lo = last.lo_f64() - prev.hi_f64();
    let tol = tol.lo_f64();
    if growth_hi < tol {
        IndexVerdict::Stabilizing
    } else if growth_lo >= tol {
        IndexVerdict::Diverging
    } else {
        IndexVerdict::Inconclusive
    }
}

/// Estimate `α_M^∞` and `β_M^∞` on nested ranges `x, y ∈ [1, 2^e]`.
///
/// Samples combine a power-of-two lattice of `grid_density` log-arguments
/// with the model's critical points (pairs of them give the increments
/// across whole slope zones, where the extremes sit).
pub fn estimate_indices(
    model: &dyn OrliczModel,
    p_grid: &[Enclosure],
    range_exponents: &[Dyadic],
    grid_density: usize,
) -> Result<IndexEstimate> {
    if p_grid.is_empty() || grid_density == 0 {
        return Err(Error::Empty("index estimation needs a p grid and a grid density".into()));
    }
    if range_exponents.len() < 2 {
        return Err(Error::Config("index estimation needs at least two ranges".into()));
    }
    let bits = model.precision_bits();
    let one = Enclosure::one(bits);
    for w in p_grid.windows(2) {
        if !w[0].certainly_lt(&w[1]) {
            return Err(Error::Config("p grid must be strictly increasing".into()));
        }
    }
    if !p_grid[0].certainly_ge(&one) {
        return Err(Error::Config("p grid must lie in [1, ∞)".into()));
    }
    if range_exponents.windows(2).any(|w| w[1] <= w[0]) || !range_exponents[0].is_positive() {
        return Err(Error::Config("range exponents must be positive and increasing".into()));
    }
    let (_, dom_hi) = model.log_domain();
    let e_max = range_exponents.last().expect("nonempty");
    if e_max.mul_pow2(1) > dom_hi {
        return Err(Error::Budget(format!(
            "range 2^{:.6e} needs log-arguments up to {:.6e}, beyond the budget {:.6e} of {}",
            e_max.approx_f64(),
            e_max.mul_pow2(1).approx_f64(),
            dom_hi.approx_f64(),
            model.name()
        )));
    }

    let per_range: Vec<Increments> = range_exponents
        .iter()
        .map(|e| range_increments(model, e, grid_density))
        .collect::<Result<_>>()?;

    let mut running_sup = Vec::with_capacity(p_grid.len());
    let mut running_dual = Vec::with_capacity(p_grid.len());
    for p in p_grid {
        let mut sup: Vec<Enclosure> = Vec::new();
        let mut dual: Vec<Enclosure> = Vec::new();
        for inc in &per_range {
            let mut s: Option<Enclosure> = None;
            let mut d: Option<Enclosure> = None;
            for (uy, (mx, mn)) in inc {
                let py = p.mul(&Enclosure::point(uy.clone(), bits));
                let a = mx.sub(&py);
                let b = py.sub(mn);
                s = Some(s.map_or(a.clone(), |v| v.max(&a)));
                d = Some(d.map_or(b.clone(), |v| v.max(&b)));
            }
            let s = s.expect("lattice contains y = 1");
            let d = d.expect("lattice contains y = 1");
            sup.push(sup.last().map_or(s.clone(), |prev: &Enclosure| prev.max(&s)));
            dual.push(dual.last().map_or(d.clone(), |prev: &Enclosure| prev.max(&d)));
        }
        running_sup.push(sup);
        running_dual.push(dual);
    }

    let tol = Enclosure::from_f64(1.0 + STABILITY_GROWTH, bits)?.log2()?;
    let verdict_per_p: Vec<IndexVerdict> = running_sup.iter().map(|s| verdict(s, &tol)).collect();
    let dual_verdict_per_p: Vec<IndexVerdict> =
        running_dual.iter().map(|s| verdict(s, &tol)).collect();
    let beta_hat = p_grid
        .iter()
        .zip(&verdict_per_p)
        .find(|(_, v)| **v == IndexVerdict::Stabilizing)
        .map(|(p, _)| p.clone());
    let alpha_hat = p_grid
        .iter()
        .zip(&dual_verdict_per_p)
        .rev()
        .find(|(_, v)| **v == IndexVerdict::Stabilizing)
        .map(|(p, _)| p.clone());
    Ok(IndexEstimate {
        p_grid: p_grid.to_vec(),
        range_exponents: range_exponents.to_vec(),
        running_sup,
        verdict_per_p,
        running_sup_dual: running_dual,
        dual_verdict_per_p,
        beta_hat,
        alpha_hat,
        sampled_y: per_range.last().map_or(0, |r| r.len()),
        tolerance: tol,
    })
}
