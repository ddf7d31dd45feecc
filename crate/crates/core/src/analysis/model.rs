use std::sync::Arc;

use crate::arith::{log_sum, Bound, Dyadic, Enclosure, LogMagnitude};
use crate::construction::{CounterexampleModel, View};
use crate::error::{Error, Result};
use crate::grid;

use super::conjugate::{conjugate_eval, ConjugateValue};

/// An evaluable Orlicz-type function `M`, seen through its log-log graph
/// `u ↦ log₂ M(2^u)`.
pub trait OrliczModel: Send + Sync {
    fn name(&self) -> String;

    /// True only where convexity is proven for the instance.
    fn convexity_certified(&self) -> bool;

    fn precision_bits(&self) -> u32;

    /// Enclosure of `log₂ M(2^u)`.
    fn log_eval(&self, u: &Enclosure) -> Result<Enclosure>;

    /// Admissible range of log-arguments.
    fn log_domain(&self) -> (Dyadic, Dyadic);

    /// `lim M(s)/s` when finite; `None` for superlinear growth.
    fn asymptotic_slope(&self) -> Option<Enclosure>;

    /// Log-arguments in `[lo, hi]` where the local growth exponent changes.
    fn critical_log_points(&self, _lo: &Dyadic, _hi: &Dyadic) -> Vec<Dyadic> {
        Vec::new()
    }

    /// `M(s)` for `s ≥ 0`, with `M(0) = 0`.
    fn eval(&self, s: &Enclosure) -> Result<Enclosure> {
        if !s.certainly_nonnegative() {
            return Err(Error::Domain("Orlicz functions are evaluated at s ≥ 0".into()));
        }
        let bits = self.precision_bits();
        let (lo, hi) = s.finite_bounds()?;
        if hi.is_zero() {
            return Ok(Enclosure::zero(bits));
        }
        let upper = self.log_eval(&Enclosure::point(hi.clone(), bits).log2()?)?.exp2()?;
        if lo.is_zero() {
            return Enclosure::new(Bound::Finite(Dyadic::zero()), upper.hi().clone(), bits);
        }
        let u = s.with_bits(bits).log2()?;
        self.log_eval(&u)?.exp2()
    }

    /// Check a log-argument against [`OrliczModel::log_domain`].
    fn check_domain(&self, u: &Enclosure) -> Result<()> {
        let (lo, hi) = self.log_domain();
        if u.lo() < &Bound::Finite(lo) || u.hi() > &Bound::Finite(hi.clone()) {
            return Err(Error::Budget(format!(
                "log-argument outside the domain of {} (max {:.6e})",
                self.name(),
                hi.approx_f64()
            )));
        }
        Ok(())
    }
}

const WIDE_DOMAIN: i64 = 1 << 20;

fn wide_domain() -> (Dyadic, Dyadic) {
    (Dyadic::from_i64(-WIDE_DOMAIN), Dyadic::from_i64(WIDE_DOMAIN))
}

/// `M(s) = c·s^p`, `p ≥ 1`, `c > 0`.
#[derive(Clone, Debug)]
pub struct PowerModel {
    p: Enclosure,
    coefficient: Enclosure,
    name: String,
    log2_c: Enclosure,
}

impl PowerModel {
    pub fn new(p: Enclosure, coefficient: Enclosure, name: impl Into<String>) -> Result<Self> {
        let one = Enclosure::one(p.bits());
        if !p.certainly_ge(&one) {
            return Err(Error::Config("power exponent must satisfy p ≥ 1".into()));
        }
        let log2_c = coefficient.log2()?;
        Ok(PowerModel {
            p,
            coefficient,
            name: name.into(),
            log2_c,
        })
    }

    /// `s^p`.
    pub fn pure(p: &str, bits: u32) -> Result<Self> {
        let pe = Enclosure::parse(p, bits)?;
        Self::new(pe, Enclosure::one(bits), format!("power:{p}"))
    }

    /// `s^p/p`, whose conjugate is `t^q/q` with `1/p + 1/q = 1`.
    pub fn normalized(p: &str, bits: u32) -> Result<Self> {
        let pe = Enclosure::parse(p, bits)?;
        let c = pe.recip()?;
        Self::new(pe, c, format!("power:{p}/p"))
    }

    pub fn exponent(&self) -> &Enclosure {
        &self.p
    }
}

impl OrliczModel for PowerModel {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn convexity_certified(&self) -> bool {
        true
    }

    fn precision_bits(&self) -> u32 {
        self.p.bits()
    }

    fn log_eval(&self, u: &Enclosure) -> Result<Enclosure> {
        self.check_domain(u)?;
        Ok(self.log2_c.add(&self.p.mul(u)))
    }

    fn log_domain(&self) -> (Dyadic, Dyadic) {
        wide_domain()
    }

    fn asymptotic_slope(&self) -> Option<Enclosure> {
        let one = Enclosure::one(self.p.bits());
        if self.p == one {
            Some(self.coefficient.clone())
        } else {
            None
        }
    }
}

/// `M(s) = s·log₂(2 + s)`: convex, superlinear, conjugate of exponential
/// growth.
#[derive(Clone, Debug)]
pub struct XLogModel {
    bits: u32,
}

impl XLogModel {
    pub fn new(bits: u32) -> Self {
        XLogModel { bits }
    }

    fn log_point(&self, u: &Dyadic) -> Result<Enclosure> {
        let bits = self.bits;
        let inner = log_sum(
            &[
                LogMagnitude::pow2(1, bits),
                LogMagnitude::from_exp2(Enclosure::point(u.clone(), bits)),
            ],
            bits,
        )?;
        let l = inner.exp2_or_err()?.log2()?;
        Ok(Enclosure::point(u.clone(), bits).add(&l))
    }
}

impl OrliczModel for XLogModel {
    fn name(&self) -> String {
        "xlog".into()
    }

    fn convexity_certified(&self) -> bool {
        true
    }

    fn precision_bits(&self) -> u32 {
        self.bits
    }

    fn log_eval(&self, u: &Enclosure) -> Result<Enclosure> {
        self.check_domain(u)?;
        let (lo, hi) = u.finite_bounds()?;
        let a = self.log_point(lo)?;
        if lo == hi {
            return Ok(a);
        }
        let b = self.log_point(hi)?;
        Enclosure::new(a.lo().clone(), b.hi().clone(), self.bits)
    }

    fn log_domain(&self) -> (Dyadic, Dyadic) {
        wide_domain()
    }

    fn asymptotic_slope(&self) -> Option<Enclosure> {
        None
    }
}

/// Piecewise-linear interpolation of a log-log table `(log₂x, log₂M)`.
#[derive(Clone, Debug)]
pub struct TabulatedModel {
    name: String,
    nodes: Vec<(Dyadic, Dyadic)>,
    bits: u32,
}

impl TabulatedModel {
    /// Nodes must have strictly increasing `log₂x` and nondecreasing `log₂M`.
    pub fn new(name: impl Into<String>, nodes: Vec<(Dyadic, Dyadic)>, bits: u32) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Config("a tabulated model needs at least two nodes".into()));
        }
        for w in nodes.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Config("tabulated log2_x must increase strictly".into()));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::Config("tabulated log2_m must be nondecreasing".into()));
            }
        }
        Ok(TabulatedModel {
            name: name.into(),
            nodes,
            bits,
        })
    }

    /// Parse CSV text with columns `log2_x,log2_m`; `#` starts a comment and
    /// a non-numeric first row is treated as a header.
    pub fn from_csv(name: impl Into<String>, text: &str, bits: u32) -> Result<Self> {
        let mut nodes = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (a, b) = match (cols.next(), cols.next()) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::Parse(format!("line {}: expected two columns", i + 1))),
            };
            let (x, m) = match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(m)) => (x, m),
                _ if nodes.is_empty() => continue,
                _ => return Err(Error::Parse(format!("line {}: not numeric", i + 1))),
            };
            let conv = |v: f64| {
                Dyadic::from_f64(v).ok_or_else(|| Error::Parse(format!("line {}: non-finite", i + 1)))
            };
            nodes.push((conv(x)?, conv(m)?));
        }
        Self::new(name, nodes, bits)
    }

    fn log_point(&self, u: &Dyadic) -> Result<Enclosure> {
        let bits = self.bits;
        let k = self.nodes.partition_point(|(x, _)| x <= u);
        if k == 0 || (k == self.nodes.len() && *u > self.nodes[k - 1].0) {
            return Err(Error::Budget(format!(
                "log-argument {:.6e} outside the table of {}",
                u.approx_f64(),
                self.name
            )));
        }
        if k == self.nodes.len() || self.nodes[k - 1].0 == *u {
            return Ok(Enclosure::point(self.nodes[k - 1].1.clone(), bits));
        }
        let (x0, m0) = &self.nodes[k - 1];
        let (x1, m1) = &self.nodes[k];
        let t = Enclosure::point(u.sub(x0), bits)
            .div(&Enclosure::point(x1.sub(x0), bits))?;
        Ok(Enclosure::point(m0.clone(), bits).add(&t.mul(&Enclosure::point(m1.sub(m0), bits))))
    }
}

impl OrliczModel for TabulatedModel {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn convexity_certified(&self) -> bool {
        false
    }

    fn precision_bits(&self) -> u32 {
        self.bits
    }

    fn log_eval(&self, u: &Enclosure) -> Result<Enclosure> {
        let (lo, hi) = u.finite_bounds()?;
        let a = self.log_point(lo)?;
        if lo == hi {
            return Ok(a);
        }
        let b = self.log_point(hi)?;
        Enclosure::new(a.lo().clone(), b.hi().clone().max(a.lo().clone()), self.bits)
    }

    fn log_domain(&self) -> (Dyadic, Dyadic) {
        (
            self.nodes[0].0.clone(),
            self.nodes[self.nodes.len() - 1].0.clone(),
        )
    }

    fn asymptotic_slope(&self) -> Option<Enclosure> {
        None
    }
}

impl OrliczModel for CounterexampleModel {
    fn name(&self) -> String {
        let base = match self.view() {
            View::F => "F",
            View::Phi => "Phi",
        };
        if self.construction().is_standard() {
            base.into()
        } else {
            format!("{base}[{}]", self.construction().label())
        }
    }

    /// `Φ` is convex because `F(x)/x` is nondecreasing whenever the stretch
    /// slope is at least 1; `F` itself is not certified.
    fn convexity_certified(&self) -> bool {
        self.view() == View::Phi && self.construction().stretch_slope >= Dyadic::one()
    }

    fn precision_bits(&self) -> u32 {
        self.bits()
    }

    fn log_eval(&self, u: &Enclosure) -> Result<Enclosure> {
        self.check_domain(u)?;
        self.log_view(u)
    }

    fn log_domain(&self) -> (Dyadic, Dyadic) {
        (Dyadic::from_i64(-WIDE_DOMAIN), self.table().budget())
    }

    fn asymptotic_slope(&self) -> Option<Enclosure> {
        None
    }

    fn critical_log_points(&self, lo: &Dyadic, hi: &Dyadic) -> Vec<Dyadic> {
        grid::block_critical_points(self.table(), lo, hi)
    }
}

/// `M̃` as a model in its own right (used for biconjugation checks).
#[derive(Clone)]
pub struct ConjugateModel {
    inner: Arc<dyn OrliczModel>,
    domain_hi: Dyadic,
}

impl ConjugateModel {
    pub fn new(inner: Arc<dyn OrliczModel>) -> Result<Self> {
        if !inner.convexity_certified() {
            return Err(Error::NotConvex(inner.name()));
        }
        Ok(ConjugateModel {
            inner,
            domain_hi: Dyadic::from_i64(256),
        })
    }
}

impl OrliczModel for ConjugateModel {
    fn name(&self) -> String {
        format!("conj({})", self.inner.name())
    }

    fn convexity_certified(&self) -> bool {
        true
    }

    fn precision_bits(&self) -> u32 {
        self.inner.precision_bits()
    }

    fn log_eval(&self, u: &Enclosure) -> Result<Enclosure> {
        self.check_domain(u)?;
        let (lo, hi) = u.finite_bounds()?;
        let bits = self.precision_bits();
        let at = |d: &Dyadic| -> Result<Enclosure> {
            let t = Enclosure::point(d.clone(), bits).exp2()?;
            match conjugate_eval(self.inner.as_ref(), &t)? {
                ConjugateValue::Finite(v) => v.log2(),
                ConjugateValue::Infinite => Err(Error::Budget("conjugate is infinite here".into())),
            }
        };
        let a = at(lo)?;
        if lo == hi {
            return Ok(a);
        }
        let b = at(hi)?;
        Enclosure::new(a.lo().clone(), b.hi().clone(), bits)
    }

    fn log_domain(&self) -> (Dyadic, Dyadic) {
        (Dyadic::from_i64(-64), self.domain_hi.clone())
    }

    fn asymptotic_slope(&self) -> Option<Enclosure> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_eval() {
        let m = PowerModel::normalized("2", 128).unwrap();
        let v = m.eval(&Enclosure::from_i64(3, 128)).unwrap();
        assert!(v.contains(&Dyadic::from_f64(4.5).unwrap()));
        assert_eq!(m.eval(&Enclosure::zero(128)).unwrap(), Enclosure::zero(128));
        assert!(PowerModel::pure("0.5", 64).is_err());
    }

    #[test]
    fn xlog_eval() {
        let m = XLogModel::new(128);
        let v = m.eval(&Enclosure::from_i64(6, 128)).unwrap();
        assert!(v.contains(&Dyadic::from_i64(18)));
    }

    #[test]
    fn tabulated_interpolates() {
        let m = TabulatedModel::from_csv(
            "t",
            "log2_x,log2_m\n0,0\n2,4\n# comment\n4,6\n",
            64,
        )
        .unwrap();
        let v = m.log_eval(&Enclosure::from_i64(1, 64)).unwrap();
        assert!(v.contains(&Dyadic::from_i64(2)));
        let v = m.log_eval(&Enclosure::from_i64(3, 64)).unwrap();
        assert!(v.contains(&Dyadic::from_i64(5)));
        assert!(m.log_eval(&Enclosure::from_i64(5, 64)).is_err());
        assert!(!m.convexity_certified());
        assert!(TabulatedModel::from_csv("bad", "0,1\n0,2\n", 64).is_err());
    }

    #[test]
    fn counterexample_views() {
        let m = CounterexampleModel::standard(6, 64).unwrap();
        assert!(m.convexity_certified());
        assert!(!m.with_view(View::F).convexity_certified());
        assert_eq!(m.name(), "Phi");
        assert!(m.log_eval(&Enclosure::from_i64(65, 64)).is_err());
    }
}
