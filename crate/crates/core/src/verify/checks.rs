use std::collections::BTreeMap;

use serde::Serialize;

use crate::analysis::{estimate_indices, IndexVerdict};
use crate::arith::{Dyadic, Enclosure};
use crate::construction::{side, Construction, CounterexampleModel, Location, Side, View};
use crate::error::{Error, Result};
use crate::grid;
use crate::par_map;

use super::witness::{Witness, WitnessKind};
use super::{CheckConfig, CheckEntry, DataRow, Status};

/// `log₂ c` for the sandwich constant `c = 1/4`, which follows from
/// `Φ(x) ≥ F(x/2)` and `F(x) ≤ 4·F(x/2)` (the density never exceeds 2).
pub const SANDWICH_C_LOG2: i64 = -2;

/// Exact-ratio enclosures must be narrower than `2^{-40}`.
const EXACT_RATIO_WIDTH_LOG2: i64 = -40;

fn point(d: &Dyadic, bits: u32) -> Enclosure {
    Enclosure::point(d.clone(), bits)
}

/// Linear grid on `[lo, hi]` plus the block critical points in it.
fn densified(model: &CounterexampleModel, lo: f64, hi: f64, count: usize) -> Vec<Dyadic> {
    let mut g = grid::log_spaced(lo, hi, count, 16);
    let lo_d = Dyadic::from_f64(lo).expect("finite");
    let hi_d = Dyadic::from_f64(hi).expect("finite");
    g.extend(grid::block_critical_points(model.table(), &lo_d, &hi_d));
    g.sort();
    g.dedup();
    g
}

fn range_label(r: u32) -> String {
    format!("x, y in [1, 2^(2^{r})]")
}

// ---- monotone ratio ---------------------------------------------------

/// `F(xy)/F(y) ≥ x` for `x ≥ 1` and all sampled `y > 0`, including rows
/// with `y < 1` (where `F(y) = y`).
pub fn check_monotone_ratio(cfg: &CheckConfig, model: &CounterexampleModel) -> Result<CheckEntry> {
    let bits = cfg.precision_bits;
    let r = cfg.range_log().approx_f64();
    let axis = densified(model, 0.0, r, cfg.grid_points);
    let mut ys = axis.clone();
    for k in [-1i64, -2, -8, -64] {
        ys.push(Dyadic::from_i64(k));
    }
    ys.push(Dyadic::pow2(-1).neg());
    ys.sort();

    let rows = par_map(&ys, |y| -> Result<(usize, usize, Option<Dyadic>, Enclosure)> {
        let ye = point(y, bits);
        let (mut undet, mut bad, mut first_bad) = (0usize, 0usize, None);
        let mut margin: Option<Enclosure> = None;
        for x in &axis {
            if y.add(x) > model.table().budget() {
                continue;
            }
            let xe = point(x, bits);
            let ratio = model.log_ratio(&ye, &xe)?;
            let gap = ratio.sub(&xe);
            margin = Some(margin.map_or(gap.clone(), |m| m.min(&gap)));
            if ratio.certainly_ge(&xe) {
                continue;
            }
            if ratio.certainly_lt(&xe) {
                bad += 1;
                first_bad.get_or_insert_with(|| x.clone());
            } else {
                undet += 1;
            }
        }
        Ok((undet, bad, first_bad, margin.expect("x = 1 is sampled")))
    });

    let mut e = CheckEntry::new("monotone_ratio", bits);
    e.range_used = format!("{}; plus y in {{2^-64, 2^-8, 2^-2, 2^-1, 2^-(1/2)}}", range_label(cfg.range_exponent_max));
    let mut margin: Option<Enclosure> = None;
    for (y, row) in ys.iter().zip(rows) {
        let (undet, bad, first_bad, m) = row?;
        e.samples += axis.iter().filter(|x| y.add(x) <= model.table().budget()).count();
        e.undetermined += undet;
        e.falsified += bad;
        margin = Some(margin.map_or(m.clone(), |v| v.min(&m)));
        if let (Some(x), None) = (first_bad, &e.witness) {
            e.witness = Some(Witness::new(
                WitnessKind::MonotoneRatio {
                    y_log: y.clone(),
                    x_log: x,
                },
                model.construction(),
                bits,
            )?);
        }
    }
    let margin = margin.expect("nonempty grid");
    e.data.push(DataRow::new("inf", "log2_ratio_minus_log2_x", &margin));
    e.notes.push("extremal constant: inf of log2(F(xy)/F(y)) − log2(x) over the grid".into());
    e.set_extremal(margin);
    e.settle();
    Ok(e)
}

// ---- C_p ---------------------------------------------------------------

/// Running sup of `F(xy)/(F(y)·x^p)` over nested ranges `2^{2^k}`.
///
/// A still-growing sup is evidence against a uniform constant, but no finite
/// grid can falsify its existence, so growth is reported as Undetermined.
pub fn estimate_cp(cfg: &CheckConfig, model: &CounterexampleModel) -> Result<CheckEntry> {
    let bits = cfg.precision_bits;
    let p = cfg.p()?;
    let f = model.with_view(View::F);
    let ranges: Vec<Dyadic> = (2..=cfg.range_exponent_max as i64).map(Dyadic::pow2).collect();
    let est = estimate_indices(&f, std::slice::from_ref(&p), &ranges, cfg.grid_points)?;
    let sup = &est.running_sup[0];
    let mut e = CheckEntry::new("cp_bound", bits);
    e.range_used = format!(
        "nested ranges x, y in [1, 2^(2^k)], k = 2..{}",
        cfg.range_exponent_max
    );
    e.samples = est.sampled_y;
    for (k, s) in ranges.iter().zip(sup) {
        e.data.push(DataRow::new(format!("range_log2={k}"), "log2_running_sup", s));
    }
    let last = sup.last().expect("ranges nonempty");
    e.set_extremal(last.exp2()?);
    match est.verdict_per_p[0] {
        IndexVerdict::Stabilizing => {
            e.notes.push("running sup stable across the final range doubling".into());
        }
        IndexVerdict::Diverging => {
            e.undetermined = 1;
            e.notes.push(
                "running sup still grows by at least 1% across the final range doubling; \
                 no finite constant is supported on this grid"
                    .into(),
            );
        }
        IndexVerdict::Inconclusive => {
            e.undetermined = 1;
            e.notes.push("growth across the final doubling is not decided at this precision".into());
        }
    }
    if !p.certainly_gt(&Enclosure::one(bits)) {
        e.notes.push("p = 1 lies outside the hypothesis p > 1".into());
    }
    e.settle();
    Ok(e)
}

// ---- n0 -----------------------------------------------------------------

/// Left and right sides of the sum inequality for `(n, m)`, `m ≥ n + 2`.
pub fn sum_sides(
    construction: &Construction,
    n: u32,
    m: u32,
    epsilon: &Enclosure,
    bits: u32,
) -> Result<(Enclosure, Enclosure)> {
    if n < 3 || m < n + 2 {
        return Err(Error::Precondition(format!(
            "sum inequality needs 3 ≤ n and n + 2 ≤ m (got n = {n}, m = {m})"
        )));
    }
    let mut lhs = Enclosure::zero(bits);
    let mut rhs = Enclosure::zero(bits);
    for i in n..m {
        let l = construction.stretch(i, bits)?;
        lhs = lhs.add(&l);
        if i > n {
            rhs = rhs.add(&Enclosure::pow2(i as i64 - 1, bits).sub(&l));
        }
    }
    Ok((lhs, epsilon.mul(&rhs)))
}

#[derive(Clone, Debug, Serialize)]
pub struct N0Result {
    pub epsilon: String,
    pub m_max: u32,
    pub n0: Option<u32>,
    /// `(n, m, rhs − lhs)` at the tightest pair with `n ≥ n0`.
    pub tightest: Option<(u32, u32, String)>,
    /// Largest `n` with a failing or undecided pair.
    pub last_failure: Option<(u32, u32)>,
    #[serde(skip)]
    pub margin: Option<Enclosure>,
}

/// Smallest `n₀` such that the sum inequality holds interval-strictly for
/// every `n₀ ≤ n` and `n + 2 ≤ m ≤ m_max`.
pub fn find_n0(construction: &Construction, epsilon: &Enclosure, m_max: u32, bits: u32) -> Result<N0Result> {
    if m_max < 5 {
        return Err(Error::Config("find_n0 needs m_max ≥ 5".into()));
    }
    if !epsilon.certainly_positive() {
        return Err(Error::Config("epsilon must be positive".into()));
    }
    let mut holds: BTreeMap<(u32, u32), Enclosure> = BTreeMap::new();
    let mut last_failure = None;
    for n in 3..=m_max - 2 {
        for m in n + 2..=m_max {
            let (lhs, rhs) = sum_sides(construction, n, m, epsilon, bits)?;
            if lhs.certainly_lt(&rhs) {
                holds.insert((n, m), rhs.sub(&lhs));
            } else if last_failure.is_none_or(|(ln, _)| n >= ln) {
                last_failure = Some((n, m));
            }
        }
    }
    let n0 = match last_failure {
        None => Some(3),
        Some((n, _)) if n < m_max - 2 => Some(n + 1),
        Some(_) => None,
    };
    let mut tightest: Option<(u32, u32, Enclosure)> = None;
    if let Some(n0) = n0 {
        for ((n, m), margin) in &holds {
            if *n >= n0 && tightest.as_ref().is_none_or(|t| margin.hi() < t.2.hi()) {
                tightest = Some((*n, *m, margin.clone()));
            }
        }
    }
    Ok(N0Result {
        epsilon: epsilon.mid_f64().to_string(),
        m_max,
        n0,
        margin: tightest.as_ref().map(|t| t.2.clone()),
        tightest: tightest.map(|(n, m, e)| (n, m, e.lo_string(super::RECORD_DIGITS))),
        last_failure,
    })
}

/// Report entry for [`find_n0`] at the configured ε.
pub fn check_sum_inequality(cfg: &CheckConfig) -> Result<CheckEntry> {
    let bits = cfg.precision_bits;
    let eps = cfg.epsilon()?;
    let c = cfg.variant.construction();
    let r = find_n0(&c, &eps, cfg.n0_search_max, bits)?;
    let mut e = CheckEntry::new("sum_inequality", bits);
    e.range_used = format!("3 ≤ n, n + 2 ≤ m ≤ {}", cfg.n0_search_max);
    let m = cfg.n0_search_max as usize;
    e.samples = (m - 4) * (m - 3) / 2;
    match r.n0 {
        Some(n0) => {
            e.set_extremal(Enclosure::from_i64(n0 as i64, bits));
            e.notes.push(format!("n0 = {n0} for epsilon = {}", cfg.epsilon));
            if let (Some((n, m, _)), Some(margin)) = (&r.tightest, &r.margin) {
                e.data.push(DataRow::new(format!("n={n},m={m}"), "tightest_margin", margin));
            }
            if let Some((n, m)) = r.last_failure {
                let (lhs, rhs) = sum_sides(&c, n, m, &eps, bits)?;
                e.data.push(DataRow::new(format!("n={n},m={m}"), "failing_lhs", &lhs));
                e.data.push(DataRow::new(format!("n={n},m={m}"), "failing_rhs", &rhs));
            }
        }
        None => {
            e.undetermined = 1;
            e.notes.push(format!(
                "no n0 ≤ {} found for epsilon = {}",
                cfg.n0_search_max - 2,
                cfg.epsilon
            ));
        }
    }
    e.settle();
    Ok(e)
}

// ---- measure bound -----------------------------------------------------

/// Position of an endpoint of `[log₂y, log₂y + log₂x]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Part {
    Unit,
    Stretch,
    Straddle,
}

/// The endpoint arrangement of an interval: blocks and parts of both ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EndpointCase {
    pub start_block: u32,
    pub start_part: Part,
    pub end_block: u32,
    pub end_part: Part,
}

impl EndpointCase {
    /// One of the four arrangements `unit|stretch → unit|stretch`.
    pub fn label(&self) -> &'static str {
        match (self.start_part, self.end_part) {
            (Part::Unit, Part::Unit) => "unit->unit",
            (Part::Unit, Part::Stretch) => "unit->stretch",
            (Part::Stretch, Part::Unit) => "stretch->unit",
            (Part::Stretch, Part::Stretch) => "stretch->stretch",
            _ => "straddle",
        }
    }
}

fn position(model: &CounterexampleModel, u: &Dyadic) -> Result<(u32, Part)> {
    Ok(match model.table().locate(u)? {
        Location::Head => (2, Part::Unit),
        Location::Block(n) => {
            let b = model.table().block(n).expect("located");
            let part = match side(u, &b.breakpoint) {
                Side::AtOrBelow => Part::Unit,
                Side::Above => Part::Stretch,
                Side::Straddle => Part::Straddle,
            };
            (n, part)
        }
    })
}

pub fn classify_endpoints(model: &CounterexampleModel, a: &Dyadic, b: &Dyadic) -> Result<EndpointCase> {
    let (start_block, start_part) = position(model, a)?;
    let (end_block, end_part) = position(model, b)?;
    Ok(EndpointCase {
        start_block,
        start_part,
        end_block,
        end_part,
    })
}

/// Block-sum bounds `(μA ≤ A, μB ≥ B)` for an endpoint arrangement.
fn case_bounds(model: &CounterexampleModel, case: &EndpointCase) -> (Enclosure, Enclosure) {
    let bits = model.bits();
    let t = model.table();
    let mut a_bound = Enclosure::zero(bits);
    let mut b_bound = Enclosure::zero(bits);
    let (na, nb) = (case.start_block, case.end_block);
    for i in na.max(3)..nb {
        a_bound = a_bound.add(&t.block(i).expect("in table").stretch);
        if i > na {
            b_bound = b_bound.add(&t.block(i).expect("in table").unit_len);
        }
    }
    if case.end_part == Part::Stretch {
        let last = t.block(nb).expect("in table");
        a_bound = a_bound.add(&last.stretch);
        if nb > na {
            b_bound = b_bound.add(&last.unit_len);
        }
    }
    (a_bound, b_bound)
}

/// The threshold `x, y ≥ 2^{2^{n0}}` and the sampled range.
pub fn measure_sample_admissible(cfg: &CheckConfig, n0: u32, y_log: &Dyadic, x_log: &Dyadic) -> bool {
    let t = Dyadic::pow2(n0 as i64);
    let r = cfg.range_log();
    *y_log >= t && *x_log >= t && *y_log <= r && *x_log <= r
}

/// `μ(A) < ε μ(B)` on `[log₂y, log₂y + log₂x]` for `x, y ≥ 2^{2^{n0}}`,
/// with `n0` from [`find_n0`] at the same ε. Each sample is also classified
/// by endpoint arrangement and checked against the block-sum bounds.
pub fn check_measure_bound(cfg: &CheckConfig, model: &CounterexampleModel) -> Result<CheckEntry> {
    let bits = cfg.precision_bits;
    let eps = cfg.epsilon()?;
    let mut e = CheckEntry::new("measure_bound", bits);
    let n0r = find_n0(model.construction(), &eps, cfg.n0_search_max, bits)?;
    let Some(n0) = n0r.n0 else {
        e.undetermined = 1;
        e.notes.push("no n0 available for this epsilon".into());
        e.settle();
        return Ok(e);
    };
    let lo = Dyadic::pow2(n0 as i64);
    let hi = cfg.range_log();
    e.range_used = format!(
        "x, y in [2^(2^{n0}), 2^(2^{})], n0 = {n0} from epsilon = {}",
        cfg.range_exponent_max, cfg.epsilon
    );
    if lo > hi {
        e.undetermined = 1;
        e.notes.push(format!(
            "threshold 2^(2^{n0}) exceeds the sampled range; no admissible samples"
        ));
        e.settle();
        return Ok(e);
    }
    let k = ((cfg.measure_samples as f64).sqrt().ceil() as usize).max(2);
    let crit = grid::block_critical_points(model.table(), &lo, &hi);
    let lin = grid::log_spaced(lo.approx_f64(), hi.approx_f64(), k, 16);
    let mut ys: Vec<Dyadic> = lin.iter().chain(crit.iter()).cloned().collect();
    ys.sort();
    ys.dedup();
    let mut xs = lin.clone();
    xs.push(lo.clone());
    xs.sort();
    xs.dedup();
    let all_crit = grid::block_critical_points(model.table(), &lo, &model.table().budget());
    let mut pairs: Vec<(Dyadic, Dyadic)> = Vec::new();
    for y in &ys {
        for x in &xs {
            pairs.push((y.clone(), x.clone()));
        }
        for c in &all_crit {
            if c > y {
                pairs.push((y.clone(), c.sub(y)));
            }
        }
    }
    pairs.retain(|(y, x)| measure_sample_admissible(cfg, n0, y, x));
    pairs.sort();
    pairs.dedup();

    struct Outcome {
        status: Status,
        case: Option<EndpointCase>,
        bounds_ok: bool,
        ratio: Enclosure,
    }
    let results = par_map(&pairs, |(y, x)| -> Result<Outcome> {
        let b = y.add(x);
        let (ma, mb) = model.phi_measure(&point(y, bits), &point(&b, bits))?;
        let rhs = eps.mul(&mb);
        let status = if ma.certainly_lt(&rhs) {
            Status::Verified
        } else if ma.certainly_ge(&rhs) {
            Status::Falsified
        } else {
            Status::Undetermined
        };
        let case = classify_endpoints(model, y, &b)?;
        let (case, bounds_ok) = if case.start_part == Part::Straddle || case.end_part == Part::Straddle {
            (None, true)
        } else {
            let (ab, bb) = case_bounds(model, &case);
            (Some(case), !(ma.certainly_gt(&ab) || bb.certainly_gt(&mb)))
        };
        let ratio = if mb.certainly_positive() {
            ma.div(&mb)?
        } else {
            Enclosure::pos_inf(bits)
        };
        Ok(Outcome {
            status,
            case,
            bounds_ok,
            ratio,
        })
    });

    let mut per_case: BTreeMap<&'static str, (usize, usize)> = BTreeMap::new();
    let mut worst: Option<Enclosure> = None;
    for ((y, x), r) in pairs.iter().zip(results) {
        let r = r?;
        e.samples += 1;
        match r.status {
            Status::Verified => {}
            Status::Undetermined => e.undetermined += 1,
            Status::Falsified => {
                e.falsified += 1;
                if e.witness.is_none() {
                    e.witness = Some(Witness::new(
                        WitnessKind::MeasureBound {
                            a: y.clone(),
                            b: y.add(x),
                            epsilon: eps.lo_finite().expect("finite").clone(),
                        },
                        model.construction(),
                        bits,
                    )?);
                }
            }
        }
        let label = r.case.map_or("straddle", |c| c.label());
        let slot = per_case.entry(label).or_default();
        slot.0 += 1;
        if r.bounds_ok {
            slot.1 += 1;
        }
        worst = Some(worst.map_or(r.ratio.clone(), |w| w.max(&r.ratio)));
    }
    for (label, (count, ok)) in &per_case {
        e.notes.push(format!(
            "{label}: {count} samples, block-sum bounds consistent on {ok}"
        ));
    }
    if let Some(w) = worst {
        e.data.push(DataRow::new("sup", "muA_over_muB", &w));
        e.set_extremal(w);
    }
    e.settle();
    Ok(e)
}

// ---- sandwich -----------------------------------------------------------

/// `Φ ≤ F` pointwise and `inf Φ/F ≥ c = 1/4` over a grid in
/// `log₂x ∈ [−8, 2^range_exponent_max]`.
pub fn estimate_sandwich_c(cfg: &CheckConfig, model: &CounterexampleModel) -> Result<CheckEntry> {
    let bits = cfg.precision_bits;
    let r = cfg.range_log().approx_f64();
    let count = cfg.sandwich_points.max(2);
    let vs = densified(model, -8.0, r, count);
    let ratios = par_map(&vs, |v| model.phi_over_f(v));
    let one = Enclosure::one(bits);
    let c = Enclosure::pow2(SANDWICH_C_LOG2, bits);
    let mut e = CheckEntry::new("sandwich", bits);
    e.range_used = format!("x in [2^-8, 2^(2^{})]", cfg.range_exponent_max);
    let mut inf: Option<Enclosure> = None;
    let mut inf_at = Dyadic::zero();
    let mut low_region_exact = true;
    for (v, rat) in vs.iter().zip(ratios) {
        let rat = rat?;
        e.samples += 1;
        if *v <= Dyadic::from_i64(4) && rat != one {
            low_region_exact = false;
        }
        let upper_ok = rat.certainly_le(&one);
        let lower_ok = rat.certainly_ge(&c);
        if rat.certainly_gt(&one) || rat.certainly_lt(&c) {
            e.falsified += 1;
            if e.witness.is_none() {
                let kind = if rat.certainly_gt(&one) {
                    WitnessKind::SandwichUpper { v: v.clone() }
                } else {
                    WitnessKind::SandwichLower { v: v.clone() }
                };
                e.witness = Some(Witness::new(kind, model.construction(), bits)?);
            }
        } else if !(upper_ok && lower_ok) {
            e.undetermined += 1;
        }
        if inf.as_ref().is_none_or(|i| rat.lo() < i.lo()) {
            inf_at = v.clone();
        }
        inf = Some(inf.map_or(rat.clone(), |i| i.min(&rat)));
    }
    let inf = inf.expect("nonempty grid");
    e.data.push(DataRow::new(format!("log2_x={inf_at}"), "inf_phi_over_f", &inf));
    e.notes.push("admissible constant c = 1/4; extremal constant is the empirical inf of Phi/F".into());
    e.notes.push(if low_region_exact {
        "Phi/F = 1 exactly at every sample with x ≤ 16".into()
    } else {
        "Phi/F is not exactly 1 at some sample with x ≤ 16".into()
    });
    e.set_extremal(inf);
    e.settle();
    Ok(e)
}

// ---- exact ratio and Φ-ratio --------------------------------------------

fn require_exact_pair(model: &CounterexampleModel, m: u32, n: u32) -> Result<()> {
    let need = (m * m + 1).max(3);
    if m == 0 || n < need {
        return Err(Error::Precondition(format!(
            "(m, n) = ({m}, {n}) violates n ≥ max(3, m² + 1) = {need}: the identity needs \
             the whole interval [2^n − 2^m, 2^n] inside the stretch of block n, which the \
             block structure guarantees only for n > m² and n ≥ 3 (for n ≤ 2 the density is \
             1 on (0, 4] and the ratio is 2^(-2^m) rather than 2^(-2^(m+1)))"
        )));
    }
    if n > model.table().n_max() {
        return Err(Error::Budget(format!(
            "block {n} beyond n_max = {}",
            model.table().n_max()
        )));
    }
    Ok(())
}

/// `F(2^{−2^m} t_n)/F(t_n) = 2^{−2^{m+1}}`, i.e.
/// `f(2^n) − f(2^n − 2^m) = 2^{m+1}` to within `2^{-40}`.
pub fn check_exact_ratio(cfg: &CheckConfig, model: &CounterexampleModel, m: u32, n: u32) -> Result<CheckEntry> {
    require_exact_pair(model, m, n)?;
    let bits = cfg.precision_bits;
    let y = Dyadic::pow2(n as i64).sub(&Dyadic::pow2(m as i64));
    let r = model.f_ratio_log(&point(&y, bits), &Enclosure::pow2(m as i64, bits))?;
    let want = Dyadic::pow2(m as i64 + 1);
    let mut e = CheckEntry::new(format!("exact_ratio[m={m},n={n}]"), bits);
    e.range_used = format!("m = {m}, n = {n}");
    e.samples = 1;
    let narrow = r.width().is_some_and(|w| w < Dyadic::pow2(EXACT_RATIO_WIDTH_LOG2));
    if !r.contains(&want) {
        e.falsified = 1;
        e.witness = Some(Witness::new(WitnessKind::ExactRatio { m, n }, model.construction(), bits)?);
    } else if !narrow {
        e.undetermined = 1;
        e.notes.push(format!("m={m}, n={n}: enclosure wider than 2^-40"));
    }
    e.data.push(DataRow::new(format!("m={m},n={n}"), "log2_ratio_increment", &r));
    e.set_extremal(r);
    e.settle();
    Ok(e)
}

/// `Φ(2^{−2^m} t_n)/Φ(t_n) ≤ c^{−1}·2^{−2^{m+1}}` with `c = 1/4`.
pub fn check_phi_ratio_bound(cfg: &CheckConfig, model: &CounterexampleModel, m: u32, n: u32) -> Result<CheckEntry> {
    require_exact_pair(model, m, n)?;
    let bits = cfg.precision_bits;
    let ex = 1i64 << m;
    let d = model.dilation_eval(n, &Enclosure::pow2(-ex, bits))?;
    let bound = Enclosure::pow2(-SANDWICH_C_LOG2 - 2 * ex, bits);
    let mut e = CheckEntry::new(format!("phi_ratio_bound[m={m},n={n}]"), bits);
    e.range_used = format!("m = {m}, n = {n}");
    e.samples = 1;
    if d.certainly_gt(&bound) {
        e.falsified = 1;
        e.witness = Some(Witness::new(WitnessKind::PhiRatio { m, n }, model.construction(), bits)?);
    } else if !d.certainly_lt(&bound) {
        e.undetermined = 1;
        e.notes.push(format!("m={m}, n={n}: comparison with the bound undecided"));
    }
    e.data.push(DataRow::new(format!("m={m},n={n}"), "dilation", &d));
    e.data.push(DataRow::new(format!("m={m},n={n}"), "bound", &bound));
    e.set_extremal(d);
    e.settle();
    Ok(e)
}
