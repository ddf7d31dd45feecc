use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::arith::{Dyadic, Enclosure};
use crate::construction::{Construction, CounterexampleModel, View, MAX_BLOCKS};
use crate::error::{Error, Result};

use super::checks::{sum_sides, SANDWICH_C_LOG2};
use super::EnclosureRecord;

/// The point (and inequality) a violation was observed at.
#[derive(Clone, Debug, PartialEq)]
pub enum WitnessKind {
    /// `log₂F(xy)/F(y) ≥ log₂x`.
    MonotoneRatio { y_log: Dyadic, x_log: Dyadic },
    /// `Σ_{i=n}^{m−1} 2^{√i} < ε Σ_{i=n+1}^{m−1} (2^{i−1} − 2^{√i})`.
    SumInequality { n: u32, m: u32, epsilon: Dyadic },
    /// `μA < ε μB` on `[a, b]`.
    MeasureBound { a: Dyadic, b: Dyadic, epsilon: Dyadic },
    /// `Φ(2^v) ≤ F(2^v)`.
    SandwichUpper { v: Dyadic },
    /// `Φ(2^v) ≥ c·F(2^v)`.
    SandwichLower { v: Dyadic },
    /// `f(2^n) − f(2^n − 2^m) = 2^{m+1}`.
    ExactRatio { m: u32, n: u32 },
    /// `Φ(2^{−2^m} t_n)/Φ(t_n) ≤ c^{−1} 2^{−2^{m+1}}`.
    PhiRatio { m: u32, n: u32 },
}

/// A certain violation: `lhs` and `rhs` of the required relation, which the
/// enclosures contradict.
#[derive(Clone, Debug)]
pub struct Witness {
    pub kind: WitnessKind,
    pub lhs: Enclosure,
    pub rhs: Enclosure,
    pub required: &'static str,
}

fn blocks_for(u: &Dyadic) -> u32 {
    if *u <= Dyadic::from_i64(4) {
        3
    } else {
        (u.top().max(3) as u32).min(MAX_BLOCKS)
    }
}

impl Witness {
    /// Evaluate `(lhs, rhs, violated)` for `kind` from scratch.
    pub fn evaluate(kind: &WitnessKind, construction: &Construction, bits: u32) -> Result<(Enclosure, Enclosure, bool)> {
        let model = |need: u32| CounterexampleModel::new(construction.clone(), need.max(3), bits);
        let p = |d: &Dyadic| Enclosure::point(d.clone(), bits);
        match kind {
            WitnessKind::MonotoneRatio { y_log, x_log } => {
                let m = model(blocks_for(&y_log.add(x_log)))?;
                let r = m.log_ratio(&p(y_log), &p(x_log))?;
                let x = p(x_log);
                let bad = r.certainly_lt(&x);
                Ok((r, x, bad))
            }
            WitnessKind::SumInequality { n, m, epsilon } => {
                let (lhs, rhs) = sum_sides(construction, *n, *m, &p(epsilon), bits)?;
                let bad = lhs.certainly_ge(&rhs);
                Ok((lhs, rhs, bad))
            }
            WitnessKind::MeasureBound { a, b, epsilon } => {
                let m = model(blocks_for(b))?;
                let (ma, mb) = m.phi_measure(&p(a), &p(b))?;
                let rhs = p(epsilon).mul(&mb);
                let bad = ma.certainly_ge(&rhs);
                Ok((ma, rhs, bad))
            }
            WitnessKind::SandwichUpper { v } => {
                let m = model(blocks_for(v))?;
                let r = m.phi_over_f(v)?;
                let one = Enclosure::one(bits);
                let bad = r.certainly_gt(&one);
                Ok((r, one, bad))
            }
            WitnessKind::SandwichLower { v } => {
                let m = model(blocks_for(v))?;
                let r = m.phi_over_f(v)?;
                let c = Enclosure::pow2(SANDWICH_C_LOG2, bits);
                let bad = r.certainly_lt(&c);
                Ok((r, c, bad))
            }
            WitnessKind::ExactRatio { m: mm, n } => {
                let md = model(*n)?.with_view(View::F);
                let y = Dyadic::pow2(*n as i64).sub(&Dyadic::pow2(*mm as i64));
                let r = md.f_ratio_log(&p(&y), &Enclosure::pow2(*mm as i64, bits))?;
                let want = Enclosure::pow2(*mm as i64 + 1, bits);
                let bad = r.intersect(&want).is_none();
                Ok((r, want, bad))
            }
            WitnessKind::PhiRatio { m: mm, n } => {
                let md = model(*n)?;
                let e = 1i64 << mm;
                let d = md.dilation_eval(*n, &Enclosure::pow2(-e, bits))?;
                let bound = Enclosure::pow2(-SANDWICH_C_LOG2 - 2 * e, bits);
                let bad = d.certainly_gt(&bound);
                Ok((d, bound, bad))
            }
        }
    }

    pub fn new(kind: WitnessKind, construction: &Construction, bits: u32) -> Result<Self> {
        let (lhs, rhs, bad) = Self::evaluate(&kind, construction, bits)?;
        if !bad {
            return Err(Error::Precondition("not a certain violation".into()));
        }
        Ok(Witness {
            required: kind.relation(),
            kind,
            lhs,
            rhs,
        })
    }

    /// True when the violation persists at `bits` of precision.
    pub fn reverify(&self, construction: &Construction, bits: u32) -> Result<bool> {
        Ok(Self::evaluate(&self.kind, construction, bits)?.2)
    }
}

impl WitnessKind {
    pub fn relation(&self) -> &'static str {
        match self {
            WitnessKind::MonotoneRatio { .. } => "log2(F(xy)/F(y)) >= log2(x)",
            WitnessKind::SumInequality { .. } => "sum_stretch < eps * sum_unit",
            WitnessKind::MeasureBound { .. } => "muA < eps * muB",
            WitnessKind::SandwichUpper { .. } => "Phi/F <= 1",
            WitnessKind::SandwichLower { .. } => "Phi/F >= c",
            WitnessKind::ExactRatio { .. } => "log2 ratio = 2^(m+1)",
            WitnessKind::PhiRatio { .. } => "Phi_n(2^-2^m) <= c^-1 2^-2^(m+1)",
        }
    }

    fn label(&self) -> &'static str {
        match self {
            WitnessKind::MonotoneRatio { .. } => "monotone_ratio",
            WitnessKind::SumInequality { .. } => "sum_inequality",
            WitnessKind::MeasureBound { .. } => "measure_bound",
            WitnessKind::SandwichUpper { .. } => "sandwich_upper",
            WitnessKind::SandwichLower { .. } => "sandwich_lower",
            WitnessKind::ExactRatio { .. } => "exact_ratio",
            WitnessKind::PhiRatio { .. } => "phi_ratio",
        }
    }

    /// Named coordinates as exact decimals.
    pub fn coordinates(&self) -> Vec<(&'static str, String)> {
        match self {
            WitnessKind::MonotoneRatio { y_log, x_log } => {
                vec![("log2_y", y_log.to_string()), ("log2_x", x_log.to_string())]
            }
            WitnessKind::SumInequality { n, m, epsilon } => vec![
                ("n", n.to_string()),
                ("m", m.to_string()),
                ("epsilon", epsilon.to_string()),
            ],
            WitnessKind::MeasureBound { a, b, epsilon } => vec![
                ("a", a.to_string()),
                ("b", b.to_string()),
                ("epsilon", epsilon.to_string()),
            ],
            WitnessKind::SandwichUpper { v } | WitnessKind::SandwichLower { v } => {
                vec![("log2_x", v.to_string())]
            }
            WitnessKind::ExactRatio { m, n } | WitnessKind::PhiRatio { m, n } => {
                vec![("m", m.to_string()), ("n", n.to_string())]
            }
        }
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let point: std::collections::BTreeMap<&str, String> =
            self.kind.coordinates().into_iter().collect();
        let mut st = s.serialize_struct("Witness", 5)?;
        st.serialize_field("kind", self.kind.label())?;
        st.serialize_field("point", &point)?;
        st.serialize_field("required", self.required)?;
        st.serialize_field("lhs", &EnclosureRecord::from(&self.lhs))?;
        st.serialize_field("rhs", &EnclosureRecord::from(&self.rhs))?;
        st.end()
    }
}
