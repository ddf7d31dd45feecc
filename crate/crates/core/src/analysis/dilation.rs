//! Dilation families `M(xy)/M(y)` on `(0, 1/2]` and the equivalence-at-zero
//! probe for their limits.

use serde::Serialize;

use crate::arith::{Bound, Dyadic, Enclosure};
use crate::error::{Error, Result};
use crate::par_map;

use super::model::OrliczModel;

/// Sampled dilations and the sup-distances between consecutive ones. No
/// convergence of the whole sequence is asserted by this type.
#[derive(Clone, Debug)]
pub struct LimitCandidate {
    pub model: String,
    pub grid: Vec<Dyadic>,
    /// Block indices `n` with scale `y = 2^{2^n}`; empty for free scales.
    pub n_list: Vec<u32>,
    /// `log₂y` of each sampled scale.
    pub log2_scales: Vec<Dyadic>,
    /// `samples[k][i]` encloses `M(grid[i]·y_k)/M(y_k)`.
    pub samples: Vec<Vec<Enclosure>>,
    /// `cauchy_gaps[k]` encloses `sup_i |samples[k+1][i] − samples[k][i]|`.
    pub cauchy_gaps: Vec<Enclosure>,
}

fn validate_grid(grid: &[Dyadic]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Empty("dilation grid is empty".into()));
    }
    let half = Dyadic::pow2(-1);
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("dilation grid must be strictly increasing".into()));
    }
    if !grid[0].is_positive() || grid[grid.len() - 1] > half {
        return Err(Error::Domain("dilation grid must lie in (0, 1/2]".into()));
    }
    Ok(())
}

fn abs(e: &Enclosure) -> Enclosure {
    if e.certainly_nonnegative() {
        e.clone()
    } else if e.neg().certainly_nonnegative() {
        e.neg()
    } else {
        let m = e.neg().hi().clone().max(e.hi().clone());
        Enclosure::new(Bound::Finite(Dyadic::zero()), m, e.bits()).expect("ordered")
    }
}

/// Enclosure of `M(x·2^w)/M(2^w)`, clamped into `[0, 1]`.
pub fn dilation_at_scale(model: &dyn OrliczModel, w: &Dyadic, x: &Dyadic) -> Result<Enclosure> {
    let bits = model.precision_bits();
    let we = Enclosure::point(w.clone(), bits);
    let u = we.add(&Enclosure::point(x.clone(), bits).log2()?);
    let r = model.log_eval(&u)?.sub(&model.log_eval(&we)?).exp2()?;
    Ok(r.clamp(&Dyadic::zero(), &Dyadic::one()))
}

fn sample(model: &dyn OrliczModel, log2_scales: &[Dyadic], grid: &[Dyadic]) -> Result<Vec<Vec<Enclosure>>> {
    let jobs: Vec<(usize, usize)> = (0..log2_scales.len())
        .flat_map(|k| (0..grid.len()).map(move |i| (k, i)))
        .collect();
    let flat = par_map(&jobs, |&(k, i)| dilation_at_scale(model, &log2_scales[k], &grid[i]));
    let mut rows: Vec<Vec<Enclosure>> = vec![Vec::with_capacity(grid.len()); log2_scales.len()];
    for ((k, _), v) in jobs.into_iter().zip(flat) {
        rows[k].push(v?);
    }
    Ok(rows)
}

fn gaps(samples: &[Vec<Enclosure>]) -> Vec<Enclosure> {
    samples
        .windows(2)
        .map(|w| {
            w[1].iter()
                .zip(&w[0])
                .map(|(a, b)| abs(&a.sub(b)))
                .reduce(|x, y| x.max(&y))
                .expect("nonempty grid")
        })
        .collect()
}

/// Sample `M(x·t_n)/M(t_n)` with `t_n = 2^{2^n}` for each `n` in `n_list`.
pub fn sample_dilations(model: &dyn OrliczModel, n_list: &[u32], grid: &[Dyadic]) -> Result<LimitCandidate> {
    validate_grid(grid)?;
    if n_list.is_empty() {
        return Err(Error::Empty("n list is empty".into()));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) || n_list[0] == 0 {
        return Err(Error::Config("n list must be positive and strictly increasing".into()));
    }
    let (_, dom_hi) = model.log_domain();
    let scales: Vec<Dyadic> = n_list.iter().map(|&n| Dyadic::pow2(n as i64)).collect();
    if let Some(big) = scales.iter().find(|s| **s > dom_hi) {
        return Err(Error::Budget(format!(
            "scale 2^{} exceeds the evaluation budget of {}",
            big,
            model.name()
        )));
    }
    let samples = sample(model, &scales, grid)?;
    Ok(LimitCandidate {
        model: model.name(),
        grid: grid.to_vec(),
        n_list: n_list.to_vec(),
        cauchy_gaps: gaps(&samples),
        log2_scales: scales,
        samples,
    })
}

/// Like [`sample_dilations`] but at arbitrary scales `y = 2^w`.
pub fn sample_dilations_at_scales(
    model: &dyn OrliczModel,
    log2_scales: &[Dyadic],
    grid: &[Dyadic],
) -> Result<LimitCandidate> {
    validate_grid(grid)?;
    if log2_scales.is_empty() {
        return Err(Error::Empty("scale list is empty".into()));
    }
    if log2_scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("scales must be strictly increasing".into()));
    }
    let samples = sample(model, log2_scales, grid)?;
    Ok(LimitCandidate {
        model: model.name(),
        grid: grid.to_vec(),
        n_list: Vec::new(),
        cauchy_gaps: gaps(&samples),
        log2_scales: log2_scales.to_vec(),
        samples,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EquivalenceVerdict {
    NotEquivalentToH,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct EquivalenceRow {
    pub m: u32,
    pub x: Dyadic,
    /// `N̂(x)/x`.
    pub ratio: Enclosure,
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub rows: Vec<EquivalenceRow>,
    pub verdict: EquivalenceVerdict,
}

/// Compare the last sampled dilation `N̂` with `H(t) = t` at `t = 2^{−2^m}`.
///
/// `NotEquivalentToH` when every step in `m` shrinks `N̂(t)/t` at least by
/// half (certainly) and the last ratio is certainly below `2^{−8}`.
pub fn equivalence_at_zero_probe(candidate: &LimitCandidate, m_list: &[u32]) -> Result<EquivalenceReport> {
    if m_list.is_empty() {
        return Err(Error::Empty("m list is empty".into()));
    }
    let last = candidate
        .samples
        .last()
        .ok_or_else(|| Error::Empty("candidate has no samples".into()))?;
    let mut rows = Vec::with_capacity(m_list.len());
    for &m in m_list {
        if m > 20 {
            return Err(Error::Config(format!("m = {m} is too large for the grid")));
        }
        let e = 1i64 << m;
        let x = Dyadic::pow2(-e);
        let i = candidate.grid.iter().position(|g| *g == x).ok_or_else(|| {
            Error::Precondition(format!("grid lacks the point 2^-{e} needed for m = {m}"))
        })?;
        rows.push(EquivalenceRow {
            m,
            ratio: last[i].mul_pow2(e),
            x,
        });
    }
    let halving = rows
        .windows(2)
        .all(|w| w[1].ratio.mul_pow2(1).certainly_le(&w[0].ratio));
    let bits = rows[0].ratio.bits();
    let small = rows
        .last()
        .expect("nonempty")
        .ratio
        .certainly_lt(&Enclosure::pow2(-8, bits));
    let verdict = if halving && small {
        EquivalenceVerdict::NotEquivalentToH
    } else {
        EquivalenceVerdict::Inconclusive
    };
    Ok(EquivalenceReport { rows, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::model::PowerModel;
    use crate::grid::dilation_grid;

    #[test]
    fn power_dilations_are_exact() {
        let m = PowerModel::pure("2", 128).unwrap();
        let c = sample_dilations(&m, &[3, 5, 7], &dilation_grid()).unwrap();
        for row in &c.samples {
            for (x, s) in c.grid.iter().zip(row) {
                assert!(s.contains(&x.mul(x)));
            }
        }
        for g in &c.cauchy_gaps {
            assert!(g.contains(&Dyadic::zero()) && g.hi_f64() < 1e-30);
        }
        let r = equivalence_at_zero_probe(&c, &[1, 2, 3, 4]).unwrap();
        assert_eq!(r.verdict, EquivalenceVerdict::NotEquivalentToH);
    }

    #[test]
    fn linear_is_equivalent() {
        let m = PowerModel::pure("1", 128).unwrap();
        let c = sample_dilations(&m, &[4], &dilation_grid()).unwrap();
        assert!(c.cauchy_gaps.is_empty());
        let r = equivalence_at_zero_probe(&c, &[1, 2, 3, 4]).unwrap();
        assert_eq!(r.verdict, EquivalenceVerdict::Inconclusive);
        assert!(r.rows.iter().all(|row| row.ratio.contains(&Dyadic::one())));
    }

    #[test]
    fn missing_grid_point() {
        let m = PowerModel::pure("1", 64).unwrap();
        let c = sample_dilations(&m, &[4], &[Dyadic::pow2(-1)]).unwrap();
        assert!(matches!(
            equivalence_at_zero_probe(&c, &[2]),
            Err(Error::Precondition(_))
        ));
        assert!(sample_dilations(&m, &[4], &[Dyadic::one()]).is_err());
    }
}
