//! Young conjugates `M̃(t) = sup_{s ≥ 0} (ts − M(s))` and the ∇₃ probe.

use serde::Serialize;

use crate::arith::{Bound, Dyadic, Enclosure, Rounding};
use crate::error::{Error, Result};

use super::model::OrliczModel;

/// A conjugate value: finite enclosure or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugateValue {
    Finite(Enclosure),
    Infinite,
}

impl ConjugateValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ConjugateValue::Infinite)
    }

    pub fn finite(&self) -> Option<&Enclosure> {
        match self {
            ConjugateValue::Finite(e) => Some(e),
            ConjugateValue::Infinite => None,
        }
    }

    pub fn to_enclosure(&self, bits: u32) -> Enclosure {
        match self {
            ConjugateValue::Finite(e) => e.clone(),
            ConjugateValue::Infinite => Enclosure::pos_inf(bits),
        }
    }
}

const MAX_BISECTIONS: usize = 400;
const MAX_BRACKET_TRIES: usize = 96;

struct Evaluator<'a> {
    model: &'a dyn OrliczModel,
    bits: u32,
}

impl Evaluator<'_> {
    fn m(&self, s: &Dyadic) -> Result<Enclosure> {
        self.model.eval(&Enclosure::point(s.clone(), self.bits))
    }

    /// Secant slope of `M` over `[a, b]`.
    fn secant(&self, a: &Dyadic, b: &Dyadic) -> Result<Enclosure> {
        let d = Enclosure::point(b.sub(a), self.bits);
        self.m(b)?.sub(&self.m(a)?).div(&d)
    }

    /// A short dyadic approximation of `2^u`.
    fn pow2_approx(&self, u: &Dyadic) -> Result<Dyadic> {
        Ok(Enclosure::point(u.clone(), 64)
            .exp2()?
            .lo_finite()
            .expect("finite")
            .clone())
    }
}

/// Enclosure of `M̃(t)` for a convexity-certified model.
///
/// The maximizer of the concave map `s ↦ ts − M(s)` is located by bisection
/// on secant slopes in the log domain, then bracketed by five points whose
/// outer secants lie certainly below and above `t`. Concavity confines the
/// supremum to the bracket, and chord lines of neighbouring cells (which lie
/// below `M` by convexity) bound it from above.
pub fn conjugate_eval(model: &dyn OrliczModel, t: &Enclosure) -> Result<ConjugateValue> {
    if !model.convexity_certified() {
        return Err(Error::NotConvex(model.name()));
    }
    if !t.certainly_nonnegative() {
        return Err(Error::Domain("conjugates are evaluated at t ≥ 0".into()));
    }
    let (lo, hi) = t.finite_bounds()?;
    let a = conjugate_point(model, lo)?;
    if lo == hi {
        return Ok(a);
    }
    // M̃ is nondecreasing on [0, ∞).
    let b = conjugate_point(model, hi)?;
    Ok(match (a, b) {
        (ConjugateValue::Finite(x), ConjugateValue::Finite(y)) => ConjugateValue::Finite(
            Enclosure::new(x.lo().clone(), y.hi().clone(), x.bits())?,
        ),
        (ConjugateValue::Infinite, _) => ConjugateValue::Infinite,
        (ConjugateValue::Finite(x), ConjugateValue::Infinite) => ConjugateValue::Finite(
            Enclosure::new(x.lo().clone(), Bound::PosInf, x.bits())?,
        ),
    })
}

fn conjugate_point(model: &dyn OrliczModel, t: &Dyadic) -> Result<ConjugateValue> {
    let bits = model.precision_bits();
    if t.is_zero() {
        return Ok(ConjugateValue::Finite(Enclosure::zero(bits)));
    }
    let te = Enclosure::point(t.clone(), bits);
    if let Some(slope) = model.asymptotic_slope() {
        if slope.certainly_lt(&te) {
            return Ok(ConjugateValue::Infinite);
        }
    }
    let ev = Evaluator { model, bits };
    let q = (bits / 4).max(12) as i64;
    let (dom_lo, dom_hi) = model.log_domain();
    let u_lo = Dyadic::max(&dom_lo, &Dyadic::from_i64(-4096)).clone();
    let u_hi = dom_hi.sub(&Dyadic::one());
    let step_of = |c: &Dyadic| Dyadic::pow2(c.top() - q);

    // Essentially at s = 0: the chord from the origin already exceeds t.
    let s_min = ev.pow2_approx(&u_lo)?;
    let chord0 = ev.m(&s_min)?.div(&Enclosure::point(s_min.clone(), bits))?;
    if chord0.certainly_ge(&te) {
        let ub = te.mul(&Enclosure::point(s_min, bits));
        return Ok(ConjugateValue::Finite(Enclosure::new(
            Bound::Finite(Dyadic::zero()),
            ub.hi().clone(),
            bits,
        )?));
    }
    let s_max = ev.pow2_approx(&u_hi)?;
    let top_slope = ev.secant(&s_max, &s_max.add(&step_of(&s_max)))?;
    if top_slope.certainly_lt(&te) {
        return Err(Error::Budget(format!(
            "maximizer of t·s − M(s) for t ≈ {:.6e} lies beyond the evaluation budget of {}",
            t.approx_f64(),
            model.name()
        )));
    }

    // Bisection in u on the sign of (secant slope − t).
    let (mut a, mut b) = (u_lo, u_hi);
    let tol = Dyadic::pow2(-q - 4);
    for _ in 0..MAX_BISECTIONS {
        if b.sub(&a) < tol {
            break;
        }
        let mid = Dyadic::midpoint(&a, &b).round(80, Rounding::Down);
        let c = ev.pow2_approx(&mid)?;
        let s = ev.secant(&c, &c.add(&step_of(&c)))?;
        if s.certainly_lt(&te) {
            a = mid;
        } else if s.certainly_gt(&te) {
            b = mid;
        } else {
            a = mid.clone();
            b = mid;
            break;
        }
    }
    let mut c = ev.pow2_approx(&Dyadic::midpoint(&a, &b).round(80, Rounding::Down))?;
    let mut h = step_of(&c);

    for _ in 0..MAX_BRACKET_TRIES {
        let pts: Vec<Dyadic> = (-2..=2).map(|j| c.add(&h.mul(&Dyadic::from_i64(j)))).collect();
        if !pts[0].is_positive() {
            h = h.mul_pow2(-2);
            continue;
        }
        let ms: Vec<Enclosure> = pts.iter().map(|s| ev.m(s)).collect::<Result<_>>()?;
        let he = Enclosure::point(h.clone(), bits);
        let sig: Vec<Enclosure> = (1..5)
            .map(|k| ms[k].sub(&ms[k - 1]).div(&he))
            .collect::<Result<_>>()?;
        let left_ok = sig[0].certainly_le(&te);
        let right_ok = sig[3].certainly_ge(&te);
        if left_ok && right_ok {
            return Ok(ConjugateValue::Finite(bracket_bound(&te, &pts, &ms, &sig, bits)?));
        }
        if !left_ok && sig[0].certainly_gt(&te) {
            c = c.sub(&h.mul_pow2(1));
        } else if !right_ok && sig[3].certainly_lt(&te) {
            c = c.add(&h.mul_pow2(1));
        } else {
            h = h.mul_pow2(2);
        }
    }
    Err(Error::Budget(format!(
        "could not bracket the conjugate maximizer at t ≈ {:.6e} with {} bits",
        t.approx_f64(),
        bits
    )))
}

/// Certified value of `sup (ts − M(s))` given a five-point bracket.
fn bracket_bound(
    t: &Enclosure,
    pts: &[Dyadic],
    ms: &[Enclosure],
    sig: &[Enclosure],
    bits: u32,
) -> Result<Enclosure> {
    let p = |d: &Dyadic| Enclosure::point(d.clone(), bits);
    let h_at = |j: usize| t.mul(&p(&pts[j])).sub(&ms[j]);
    // Chord k (over [s_{k-1}, s_k]) as a line through (s_k, M_k); it lies
    // below M outside that cell.
    let line_gap = |k: usize, s: &Dyadic| -> Enclosure {
        let line = ms[k].add(&sig[k - 1].mul(&p(&s.sub(&pts[k]))));
        t.mul(&p(s)).sub(&line)
    };
    let mut upper: Option<Bound> = None;
    let mut push = |b: &Bound| {
        if upper.as_ref().is_none_or(|u| b > u) {
            upper = Some(b.clone());
        }
    };
    for j in 0..4 {
        let mid = Dyadic::midpoint(&pts[j], &pts[j + 1]);
        let left = (j >= 1).then_some(j);
        let right = (j + 2 <= 4).then_some(j + 2);
        match (left, right) {
            (Some(l), Some(r)) => {
                push(line_gap(l, &pts[j]).hi());
                push(line_gap(l, &mid).hi());
                push(line_gap(r, &mid).hi());
                push(line_gap(r, &pts[j + 1]).hi());
            }
            (None, Some(r)) => {
                push(line_gap(r, &pts[j]).hi());
                push(line_gap(r, &pts[j + 1]).hi());
            }
            (Some(l), None) => {
                push(line_gap(l, &pts[j]).hi());
                push(line_gap(l, &pts[j + 1]).hi());
            }
            (None, None) => unreachable!("five points give each cell a neighbour"),
        }
    }
    let mut lower = Bound::Finite(Dyadic::zero());
    for j in 0..5 {
        lower = lower.max(h_at(j).lo().clone());
    }
    let upper = upper.expect("nonempty").max(lower.clone());
    Enclosure::new(lower, upper, bits)
}

/// Heuristic classification of `M̃(Ct)/M̃(t)` as `t` grows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Nabla3Verdict {
    DivergesLikely,
    BoundedLikely,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct Nabla3Row {
    pub t: Enclosure,
    pub conj_t: Enclosure,
    pub conj_ct: Enclosure,
    /// `log₂(M̃(Ct)/M̃(t))`.
    pub log2_ratio: Enclosure,
}

#[derive(Clone, Debug)]
pub struct Nabla3Report {
    pub c: Enclosure,
    pub rows: Vec<Nabla3Row>,
    pub verdict: Nabla3Verdict,
    /// Always true: no finite grid decides a limit at infinity.
    pub heuristic: bool,
    pub note: String,
}

/// Tabulate `M̃(Ct)/M̃(t)` over `t_grid` and classify its growth.
///
/// `DivergesLikely`: across the top half of the grid, the minimum ratio of
/// every doubling window exceeds ten times the bottom-half maximum, and
/// these window minima increase. `BoundedLikely`: every top-half window
/// minimum stays within that band. Otherwise `Inconclusive`.
pub fn nabla3_probe(model: &dyn OrliczModel, c: &Enclosure, t_grid: &[Dyadic]) -> Result<Nabla3Report> {
    let bits = model.precision_bits();
    if !c.certainly_gt(&Enclosure::one(bits)) {
        return Err(Error::Config("∇₃ probe needs C > 1".into()));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) || t_grid.first().is_some_and(|t| !t.is_positive()) {
        return Err(Error::Config("t grid must be positive and strictly increasing".into()));
    }
    let conj = |t: &Enclosure| -> Result<Enclosure> {
        match conjugate_eval(model, t)? {
            ConjugateValue::Finite(v) => Ok(v),
            ConjugateValue::Infinite => Err(Error::Domain(format!(
                "conjugate of {} is infinite on the grid",
                model.name()
            ))),
        }
    };
    let mut rows = Vec::with_capacity(t_grid.len());
    for t in t_grid {
        let te = Enclosure::point(t.clone(), bits);
        let a = conj(&te)?;
        let b = conj(&te.mul(c))?;
        let log2_ratio = b.log2()?.sub(&a.log2()?);
        rows.push(Nabla3Row {
            t: te,
            conj_t: a,
            conj_ct: b,
            log2_ratio,
        });
    }
    let verdict = classify(&rows, bits);
    Ok(Nabla3Report {
        c: c.clone(),
        rows,
        verdict,
        heuristic: true,
        note: "heuristic: a finite grid cannot decide a limit at infinity".into(),
    })
}

fn classify(rows: &[Nabla3Row], bits: u32) -> Nabla3Verdict {
    if rows.len() < 4 {
        return Nabla3Verdict::Inconclusive;
    }
    let half = rows.len() / 2;
    let bottom_max = rows[..half]
        .iter()
        .map(|r| r.log2_ratio.hi_f64())
        .fold(f64::NEG_INFINITY, f64::max);
    let band = bottom_max + 10f64.log2();
    // Window minima over doublings of t in the top half.
    let mut windows: Vec<(i64, f64, f64)> = Vec::new();
    for r in &rows[half..] {
        let key = r.t.lo_finite().map_or(0, |d| d.top());
        let (lo, hi) = (r.log2_ratio.lo_f64(), r.log2_ratio.hi_f64());
        match windows.last_mut() {
            Some(w) if w.0 == key => {
                w.1 = w.1.min(lo);
                w.2 = w.2.min(hi);
            }
            _ => windows.push((key, lo, hi)),
        }
    }
    let _ = bits;
    let above = windows.iter().all(|w| w.1 > band);
    let increasing = windows.windows(2).all(|p| p[1].1 > p[0].2) && windows.len() >= 2;
    if above && increasing {
        Nabla3Verdict::DivergesLikely
    } else if windows.iter().all(|w| w.2 <= band) {
        Nabla3Verdict::BoundedLikely
    } else {
        Nabla3Verdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::model::{PowerModel, TabulatedModel, XLogModel};

    fn close(v: &Enclosure, want: f64, rel: f64) {
        assert!(
            v.lo_f64() <= want * (1.0 + 1e-15) && want * (1.0 - 1e-15) <= v.hi_f64(),
            "{v:?} vs {want}"
        );
        assert!(v.width_f64() <= rel * want.abs(), "{v:?}");
    }

    #[test]
    fn quadratic_is_self_conjugate() {
        let m = PowerModel::normalized("2", 128).unwrap();
        let v = conjugate_eval(&m, &Enclosure::from_i64(3, 128)).unwrap();
        close(v.finite().unwrap(), 4.5, 1e-15);
    }

    #[test]
    fn cubic_conjugate() {
        let m = PowerModel::normalized("3", 128).unwrap();
        let v = conjugate_eval(&m, &Enclosure::from_i64(8, 128)).unwrap();
        close(v.finite().unwrap(), 2.0 * 8f64.powf(1.5) / 3.0, 1e-15);
    }

    #[test]
    fn linear_conjugate_is_infinite() {
        let m = PowerModel::pure("1", 64).unwrap();
        assert!(conjugate_eval(&m, &Enclosure::from_i64(2, 64)).unwrap().is_infinite());
        let z = conjugate_eval(&m, &Enclosure::from_f64(0.5, 64).unwrap()).unwrap();
        assert!(z.finite().unwrap().hi_f64() < 1e-300);
    }

    #[test]
    fn uncertified_models_are_rejected() {
        let m = TabulatedModel::from_csv("t", "0,0\n1,2\n", 64).unwrap();
        assert!(matches!(
            conjugate_eval(&m, &Enclosure::one(64)),
            Err(Error::NotConvex(_))
        ));
    }

    fn half_octave_grid() -> Vec<Dyadic> {
        crate::grid::half_octave_grid(2, 18)
    }

    #[test]
    fn nabla3_verdicts() {
        let c = Enclosure::from_i64(2, 64);
        let q = PowerModel::pure("2", 64).unwrap();
        let r = nabla3_probe(&q, &c, &half_octave_grid()).unwrap();
        assert_eq!(r.verdict, Nabla3Verdict::BoundedLikely);
        assert!(r.heuristic);
        let x = XLogModel::new(64);
        let r = nabla3_probe(&x, &c, &half_octave_grid()).unwrap();
        assert_eq!(r.verdict, Nabla3Verdict::DivergesLikely);
    }
}
