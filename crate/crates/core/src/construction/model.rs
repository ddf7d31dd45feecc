use std::sync::Arc;

use crate::arith::{
    log2_pow2_minus_one, log_sum, Bound, Dyadic, Enclosure, LogMagnitude,
};
use crate::error::{Error, Result};

use super::table::{side, Block, BlockTable, Location, Side};
use super::{Construction, Density};

/// Which function of the construction a model exposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum View {
    F,
    Phi,
}

/// The construction evaluated in closed form on top of a [`BlockTable`].
#[derive(Clone, Debug)]
pub struct CounterexampleModel {
    table: Arc<BlockTable>,
    view: View,
}

fn point(d: &Dyadic, bits: u32) -> Enclosure {
    Enclosure::point(d.clone(), bits)
}

fn require_nonneg(u: &Enclosure, what: &str) -> Result<()> {
    if !u.certainly_nonnegative() {
        return Err(Error::Domain(format!("{what} must be nonnegative")));
    }
    Ok(())
}

impl CounterexampleModel {
    pub fn new(construction: Construction, n_max: u32, bits: u32) -> Result<Self> {
        Ok(Self::from_table(Arc::new(BlockTable::new(construction, n_max, bits)?)))
    }

    pub fn standard(n_max: u32, bits: u32) -> Result<Self> {
        Self::new(Construction::standard(), n_max, bits)
    }

    pub fn from_table(table: Arc<BlockTable>) -> Self {
        CounterexampleModel {
            table,
            view: View::Phi,
        }
    }

    pub fn with_view(&self, view: View) -> Self {
        CounterexampleModel {
            table: Arc::clone(&self.table),
            view,
        }
    }

    pub fn view(&self) -> View {
        self.view
    }

    pub fn table(&self) -> &BlockTable {
        &self.table
    }

    pub fn shared_table(&self) -> Arc<BlockTable> {
        Arc::clone(&self.table)
    }

    pub fn bits(&self) -> u32 {
        self.table.bits()
    }

    pub fn construction(&self) -> &Construction {
        self.table.construction()
    }

    fn block(&self, n: u32) -> &Block {
        self.table.block(n).expect("located blocks exist")
    }

    fn am1(&self) -> Enclosure {
        self.table.slope().sub(&Enclosure::one(self.bits()))
    }

    // ---- density -------------------------------------------------------

    /// Segment index of a point: 0 = head, `2n−5` = unit part of block `n`,
    /// `2n−4` = stretch of block `n`; `None` when undecidable.
    fn segment(&self, t: &Dyadic) -> Result<Option<u32>> {
        match self.table.locate(t)? {
            Location::Head => Ok(Some(0)),
            Location::Block(n) => Ok(match side(t, &self.block(n).breakpoint) {
                Side::AtOrBelow => Some(2 * n - 5),
                Side::Above => Some(2 * n - 4),
                Side::Straddle => None,
            }),
        }
    }

    /// The density `φ` on an enclosure of its (log-domain) argument.
    pub fn phi(&self, t: &Enclosure) -> Result<Density> {
        if !t.certainly_positive() {
            return Err(Error::Domain("φ is defined for positive arguments only".into()));
        }
        let (lo, hi) = t.finite_bounds()?;
        let (a, b) = match (self.segment(lo)?, self.segment(hi)?) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(Density::Undetermined),
        };
        let density = |s: u32| if s > 0 && s % 2 == 0 { Density::Stretch } else { Density::Unit };
        if a == b || (a <= 1 && b <= 1) {
            Ok(density(b))
        } else {
            Ok(Density::Undetermined)
        }
    }

    // ---- f and F -------------------------------------------------------

    /// `f(u)` for a point `u ≥ 0`.
    fn f_point(&self, u: &Dyadic) -> Result<Enclosure> {
        let bits = self.bits();
        match self.table.locate(u)? {
            Location::Head => Ok(point(u, bits)),
            Location::Block(n) => {
                let b = self.block(n);
                Ok(match side(u, &b.breakpoint) {
                    Side::AtOrBelow => b.f_at_start.add(&point(&u.sub(&b.start), bits)),
                    Side::Above => {
                        let back = self.table.slope().mul(&point(&b.end.sub(u), bits));
                        b.f_at_end.sub(&back)
                    }
                    Side::Straddle => {
                        let excess = point(u, bits)
                            .sub(&b.breakpoint)
                            .max(&Enclosure::zero(bits));
                        b.f_at_start
                            .add(&point(&u.sub(&b.start), bits))
                            .add(&self.am1().mul(&excess))
                    }
                })
            }
        }
    }

    /// `log₂ F(2^w)`: `w` for `w < 0`, `f(w)` otherwise.
    fn log_f_point(&self, w: &Dyadic) -> Result<Enclosure> {
        if w.is_negative() {
            Ok(point(w, self.bits()))
        } else {
            self.f_point(w)
        }
    }

    /// `f(u) = ∫₀ᵘ φ`.
    pub fn f_eval(&self, u: &Enclosure) -> Result<Enclosure> {
        require_nonneg(u, "argument of f")?;
        let (lo, hi) = u.finite_bounds()?;
        if lo == hi {
            return self.f_point(lo);
        }
        monotone_hull(self.f_point(lo)?, self.f_point(hi)?)
    }

    /// `log₂ F(2^w)` for any real `w`.
    pub fn log_f(&self, w: &Enclosure) -> Result<Enclosure> {
        let (lo, hi) = w.finite_bounds()?;
        if lo == hi {
            return self.log_f_point(lo);
        }
        monotone_hull(self.log_f_point(lo)?, self.log_f_point(hi)?)
    }

    /// `F(x) = 2^{f(log₂x)}` for `x ≥ 1` and `x` below 1.
    #[allow(non_snake_case)]
    pub fn F_eval(&self, x: &LogMagnitude) -> Result<LogMagnitude> {
        let w = x
            .exp2()
            .ok_or_else(|| Error::Domain("F is evaluated at positive arguments".into()))?;
        Ok(LogMagnitude::from_exp2(self.log_f(w)?))
    }

    // ---- measures ------------------------------------------------------

    /// Stretch measure of `[p, e_n]` inside block `n`, for `p` in block `n`.
    fn stretch_tail(&self, b: &Block, p: &Dyadic) -> Enclosure {
        let bits = self.bits();
        match side(p, &b.breakpoint) {
            Side::AtOrBelow => b.stretch.clone(),
            Side::Above => point(&b.end.sub(p), bits),
            Side::Straddle => b.stretch.min(&point(&b.end.sub(p), bits)),
        }
    }

    /// Stretch measure of `[s_n, q]` inside block `n`, for `q` in block `n`.
    fn stretch_head(&self, b: &Block, q: &Dyadic) -> Enclosure {
        let bits = self.bits();
        match side(q, &b.breakpoint) {
            Side::AtOrBelow => Enclosure::zero(bits),
            Side::Above => point(q, bits).sub(&b.breakpoint),
            Side::Straddle => point(q, bits)
                .sub(&b.breakpoint)
                .max(&Enclosure::zero(bits)),
        }
    }

    /// Stretch measure `μA([p, q])` for points `0 ≤ p ≤ q`, summed block by
    /// block so no large prefix sums cancel.
    fn mu_a_points(&self, p: &Dyadic, q: &Dyadic) -> Result<Enclosure> {
        let bits = self.bits();
        let lp = self.table.locate(p)?;
        let lq = self.table.locate(q)?;
        let (np, nq) = match (lp, lq) {
            (_, Location::Head) => return Ok(Enclosure::zero(bits)),
            (Location::Head, Location::Block(nq)) => (2, nq),
            (Location::Block(np), Location::Block(nq)) => (np, nq),
        };
        if np == nq {
            let b = self.block(np);
            return Ok(match (side(p, &b.breakpoint), side(q, &b.breakpoint)) {
                (_, Side::AtOrBelow) => Enclosure::zero(bits),
                (Side::Above, _) => point(&q.sub(p), bits),
                (Side::AtOrBelow, Side::Above) => point(q, bits).sub(&b.breakpoint),
                _ => {
                    let z = Enclosure::zero(bits);
                    let bq = point(q, bits).sub(&b.breakpoint).max(&z);
                    let bp = point(p, bits).sub(&b.breakpoint).max(&z);
                    bq.sub(&bp).max(&z).min(&point(&q.sub(p), bits))
                }
            });
        }
        let mut acc = if np >= 3 {
            self.stretch_tail(self.block(np), p)
        } else {
            Enclosure::zero(bits)
        };
        for i in (np + 1).max(3)..nq {
            acc = acc.add(&self.block(i).stretch);
        }
        Ok(acc.add(&self.stretch_head(self.block(nq), q)))
    }

    /// Lebesgue measures of the stretch (`φ = 2`) and unit (`φ = 1`) parts
    /// of `[a, b]`, with `0 ≤ a ≤ b` in the log-argument domain.
    pub fn phi_measure(&self, a: &Enclosure, b: &Enclosure) -> Result<(Enclosure, Enclosure)> {
        require_nonneg(a, "left end")?;
        let (a_lo, a_hi) = a.finite_bounds()?;
        let (b_lo, b_hi) = b.finite_bounds()?;
        if a_lo > b_hi {
            return Err(Error::Domain("reversed interval in phi_measure".into()));
        }
        let measures = |p: &Dyadic, q: &Dyadic| -> Result<(Enclosure, Enclosure)> {
            if p >= q {
                let z = Enclosure::zero(self.bits());
                return Ok((z.clone(), z));
            }
            let ma = self.mu_a_points(p, q)?;
            let mb = point(&q.sub(p), self.bits()).sub(&ma);
            Ok((ma, mb))
        };
        if a_lo == a_hi && b_lo == b_hi {
            return measures(a_lo, b_lo);
        }
        // Both measures grow as the interval widens.
        let (sa, sb) = measures(a_hi, b_lo)?;
        let (la, lb) = measures(a_lo, b_hi)?;
        Ok((monotone_hull(sa, la)?, monotone_hull(sb, lb)?))
    }

    /// `log₂ F(xy)/F(y) = f(y_log + x_log) − f(y_log)` for nonnegative logs.
    pub fn f_ratio_log(&self, y_log: &Enclosure, x_log: &Enclosure) -> Result<Enclosure> {
        require_nonneg(y_log, "log₂y")?;
        require_nonneg(x_log, "log₂x")?;
        self.log_ratio(y_log, x_log)
    }

    /// `log₂ F(xy)/F(y)` for any `y > 0` and `x ≥ 1`, using `F(x) = x`
    /// below 1: equals `x_log + (a−1)·μA([y⁺, (y+x)⁺])`.
    pub fn log_ratio(&self, y_log: &Enclosure, x_log: &Enclosure) -> Result<Enclosure> {
        require_nonneg(x_log, "log₂x")?;
        let bits = self.bits();
        let (y_lo, y_hi) = y_log.finite_bounds()?;
        let (x_lo, x_hi) = x_log.finite_bounds()?;
        if y_lo == y_hi && x_lo == x_hi {
            let zero = Dyadic::zero();
            let p = Dyadic::max(y_lo, &zero).clone();
            let q = Dyadic::max(&y_lo.add(x_lo), &zero).clone();
            let mu = self.mu_a_points(&p, &q)?;
            return Ok(point(x_lo, bits).add(&self.am1().mul(&mu)));
        }
        // Not monotone in y: fall back to a difference of monotone bounds.
        let top = self.log_f(&y_log.add(x_log))?;
        let bottom = self.log_f(y_log)?;
        Ok(top.sub(&bottom))
    }

    // ---- Φ -------------------------------------------------------------

    /// `log₂ Φ(2^v)` for a point `v`, from the block prefix and the partial
    /// segment integral `(2^{f(u₂)} − 2^{f(u₁)})/slope`.
    fn log_phi_point(&self, v: &Dyadic) -> Result<Enclosure> {
        let bits = self.bits();
        let n = match self.table.locate(v)? {
            Location::Head => return Ok(point(v, bits)),
            Location::Block(n) => n,
        };
        let b = self.block(n);
        match side(v, &b.breakpoint) {
            Side::AtOrBelow => {
                let z1 = point(&v.sub(&b.start), bits);
                let seg = b.f_at_start.add(&log2_pow2_minus_one(&z1)?);
                sum2(&b.phi_log_at_start, seg, bits)
            }
            Side::Above => {
                let z2 = point(v, bits).sub(&b.breakpoint);
                let seg = b
                    .f_at_break
                    .add(&log2_pow2_minus_one(&self.table.slope().mul(&z2))?)
                    .sub(self.table.log2_slope());
                sum2(&b.phi_log_at_break, seg, bits)
            }
            Side::Straddle => {
                // v is within the breakpoint enclosure; log₂Φ(2^v) is
                // Lipschitz in v with constant max(1, a).
                let (lo, hi) = b.breakpoint.finite_bounds()?;
                let dist = Dyadic::max(&v.sub(lo).abs(), &v.sub(hi).abs()).clone();
                let lip = self.table.slope().max(&Enclosure::one(bits));
                let r = lip.mul(&point(&dist, bits));
                Ok(b.phi_log_at_break.sub(&r).hull(&b.phi_log_at_break.add(&r)))
            }
        }
    }

    /// `log₂ Φ(2^w)` for any real `w`.
    pub fn log_phi(&self, w: &Enclosure) -> Result<Enclosure> {
        let (lo, hi) = w.finite_bounds()?;
        if lo == hi {
            return self.log_phi_point(lo);
        }
        monotone_hull(self.log_phi_point(lo)?, self.log_phi_point(hi)?)
    }

    /// `Φ(x) = ∫₀ˣ F(t)/t dt`.
    #[allow(non_snake_case)]
    pub fn Phi_eval(&self, x: &LogMagnitude) -> Result<LogMagnitude> {
        let w = x
            .exp2()
            .ok_or_else(|| Error::Domain("Φ is evaluated at positive arguments".into()))?;
        Ok(LogMagnitude::from_exp2(self.log_phi(w)?))
    }

    /// `Φ(2^v)/F(2^v)` at a point, through the deficit identity
    /// `F − Φ = (1 − 1/a)·Σ (2^{f(end)} − 2^{f(start)})` over the stretches
    /// below `v`. This is exactly 1 wherever no stretch has been passed.
    pub fn phi_over_f(&self, v: &Dyadic) -> Result<Enclosure> {
        let bits = self.bits();
        let one = Enclosure::one(bits);
        if v.is_negative() {
            return Ok(one);
        }
        let n = match self.table.locate(v)? {
            Location::Head => return Ok(one),
            Location::Block(n) => n,
        };
        let b = self.block(n);
        let log_f = self.f_point(v)?;
        let with_partial = |z2: &Enclosure| -> Result<LogMagnitude> {
            let gain = b
                .f_at_break
                .add(&log2_pow2_minus_one(&self.table.slope().mul(z2))?);
            log_sum(&[b.deficit_before.clone(), LogMagnitude::from_exp2(gain)], bits)
        };
        let ratio = |s: &LogMagnitude| -> Result<Enclosure> {
            let e = match s.exp2() {
                None => return Ok(one.clone()),
                Some(e) => e,
            };
            let frac = e.sub(&log_f).exp2()?;
            let coef = one.sub(&self.table.slope().recip()?);
            Ok(one.sub(&coef.mul(&frac)))
        };
        match side(v, &b.breakpoint) {
            Side::AtOrBelow => ratio(&b.deficit_before),
            Side::Above => ratio(&with_partial(&point(v, bits).sub(&b.breakpoint))?),
            Side::Straddle => {
                let z2 = point(v, bits).sub(&b.breakpoint);
                let r0 = ratio(&b.deficit_before)?;
                let upper = z2.hi_finite().expect("finite").clone();
                let r1 = ratio(&with_partial(&point(&upper, bits))?)?;
                Ok(r0.hull(&r1))
            }
        }
    }

    /// `Φ(x·t_n)/Φ(t_n)` with `t_n = 2^{2^n}`, for `0 < x ≤ 1/2`.
    pub fn dilation_eval(&self, n: u32, x: &Enclosure) -> Result<Enclosure> {
        let bits = self.bits();
        if n == 0 {
            return Err(Error::Domain("dilation index must be ≥ 1".into()));
        }
        if n > self.table.n_max() {
            return Err(Error::Budget(format!(
                "t_{n} = 2^(2^{n}) exceeds the block budget n_max = {}",
                self.table.n_max()
            )));
        }
        if !x.certainly_positive() || x.hi() > &Bound::Finite(Dyadic::pow2(-1)) {
            return Err(Error::Domain("dilation argument must lie in (0, 1/2]".into()));
        }
        let w = Enclosure::pow2(n as i64, bits).add(&x.with_bits(bits).log2()?);
        let num = self.log_phi(&w)?;
        let den = self.table.phi_log_at_block_end(n)?;
        let r = num.sub(&den).exp2()?;
        Ok(r.clamp(&Dyadic::zero(), &Dyadic::one()))
    }

    /// `log₂` of the model's selected view at `2^w`.
    pub fn log_view(&self, w: &Enclosure) -> Result<Enclosure> {
        match self.view {
            View::F => self.log_f(w),
            View::Phi => self.log_phi(w),
        }
    }
}

fn sum2(prefix: &Enclosure, seg: Enclosure, bits: u32) -> Result<Enclosure> {
    let s = log_sum(
        &[LogMagnitude::from_exp2(prefix.clone()), LogMagnitude::from_exp2(seg)],
        bits,
    )?;
    s.exp2_or_err().cloned()
}

/// `[lo_value.lo, hi_value.hi]` for a nondecreasing function evaluated at
/// the two ends of an argument enclosure.
fn monotone_hull(at_lo: Enclosure, at_hi: Enclosure) -> Result<Enclosure> {
    let bits = at_lo.bits().max(at_hi.bits());
    let lo = at_lo.lo().clone();
    let hi = at_hi.hi().clone().max(lo.clone());
    Enclosure::new(lo, hi, bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> CounterexampleModel {
        CounterexampleModel::standard(12, 128).unwrap()
    }

    fn e(v: f64) -> Enclosure {
        Enclosure::from_f64(v, 128).unwrap()
    }

    #[test]
    fn density_examples() {
        let m = model();
        assert_eq!(m.phi(&e(3.0)).unwrap(), Density::Unit);
        assert_eq!(m.phi(&e(15.0)).unwrap(), Density::Stretch);
        assert_eq!(m.phi(&e(10.0)).unwrap(), Density::Unit);
        assert_eq!(m.phi(&e(12.0)).unwrap(), Density::Unit);
        let straddle = Enclosure::from_dyadics(
            Dyadic::from_f64(4.6).unwrap(),
            Dyadic::from_f64(4.7).unwrap(),
            128,
        )
        .unwrap();
        assert_eq!(m.phi(&straddle).unwrap(), Density::Undetermined);
        assert!(m.phi(&e(0.0)).is_err());
    }

    #[test]
    fn f_examples() {
        let m = model();
        let s3 = 2f64.powf(3f64.sqrt());
        assert_eq!(m.f_eval(&e(4.0)).unwrap(), e(4.0));
        let f8 = m.f_eval(&e(8.0)).unwrap();
        assert!((f8.mid_f64() - (8.0 + s3)).abs() < 1e-12);
        let f12 = m.f_eval(&e(12.0)).unwrap();
        assert!((f12.mid_f64() - (12.0 + s3)).abs() < 1e-12);
        let f16 = m.f_eval(&e(16.0)).unwrap();
        assert!((f16.mid_f64() - (20.0 + s3)).abs() < 1e-12);
    }

    #[test]
    fn ratio_examples() {
        let m = model();
        assert_eq!(m.f_ratio_log(&e(0.0), &e(3.0)).unwrap(), e(3.0));
        assert_eq!(m.f_ratio_log(&e(12.0), &e(4.0)).unwrap(), e(8.0));
        assert_eq!(m.f_ratio_log(&e(6.0), &e(2.0)).unwrap(), e(4.0));
        assert!(m.f_ratio_log(&e(-1.0), &e(2.0)).is_err());
        // y < 1 branch: F(2)/F(1/2) = 4.
        assert_eq!(m.log_ratio(&e(-1.0), &e(2.0)).unwrap(), e(2.0));
    }

    #[test]
    fn measure_examples() {
        let m = model();
        let (a, b) = m.phi_measure(&e(0.0), &e(4.0)).unwrap();
        assert_eq!((a, b), (e(0.0), e(4.0)));
        let (a, b) = m.phi_measure(&e(8.0), &e(16.0)).unwrap();
        assert_eq!((a, b), (e(4.0), e(4.0)));
        let (a, b) = m.phi_measure(&e(4.0), &e(8.0)).unwrap();
        let s3 = 2f64.powf(3f64.sqrt());
        assert!((a.mid_f64() - s3).abs() < 1e-12 && (b.mid_f64() - (4.0 - s3)).abs() < 1e-12);
        assert!(m.phi_measure(&e(5.0), &e(4.0)).is_err());
    }

    #[test]
    fn phi_small_arguments_are_identity() {
        let m = model();
        for v in [-3.0, 0.0, 1.5, 4.0] {
            assert_eq!(m.log_phi(&e(v)).unwrap(), e(v));
        }
        let r = m.phi_over_f(&Dyadic::from_f64(4.5).unwrap()).unwrap();
        assert_eq!(r, Enclosure::one(128));
    }

    #[test]
    fn phi_routes_agree() {
        let m = model();
        for v in [5.0, 6.0, 7.9, 8.0, 13.0, 100.25, 1000.0, 4095.5] {
            let d = Dyadic::from_f64(v).unwrap();
            let direct = m.log_phi(&e(v)).unwrap().sub(&m.log_f(&e(v)).unwrap()).exp2().unwrap();
            let deficit = m.phi_over_f(&d).unwrap();
            assert!(direct.intersect(&deficit).is_some(), "{v}: {direct:?} vs {deficit:?}");
            assert!(deficit.hi_f64() <= 1.0 && deficit.lo_f64() > 0.25);
        }
    }

    #[test]
    fn dilation_bounds() {
        let m = model();
        let d = m.dilation_eval(3, &e(0.25)).unwrap();
        assert!(d.hi_f64() <= 0.25);
        assert!(m.dilation_eval(13, &e(0.25)).is_err());
        assert!(m.dilation_eval(3, &e(0.75)).is_err());
    }
}
