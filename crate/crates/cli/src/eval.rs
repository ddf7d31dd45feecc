use orlicz_core::arith::{Dyadic, Enclosure, LogMagnitude};
use orlicz_core::construction::{CounterexampleModel, Density};
use orlicz_core::verify::SANDWICH_C_LOG2;

use crate::args::{EvalArgs, Format, Target};
use crate::config::{Common, EvalSection};
use crate::error::CliError;
use crate::output::Table;
use crate::Outcome;

/// Plain values are printed only below this log₂ magnitude; beyond it the
/// log₂ columns carry the result.
const VALUE_LOG2_LIMIT: i64 = 1 << 16;

fn read_points(args: &EvalArgs, file: &EvalSection) -> Result<Vec<String>, CliError> {
    let mut pts = if args.points.is_empty() {
        file.points.clone()
    } else {
        args.points.clone()
    };
    if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        pts.extend(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from),
        );
    }
    Ok(pts)
}

/// Smallest block index covering the log-argument `u`.
fn blocks_for(u: &Enclosure) -> u32 {
    let hi = match u.hi_finite() {
        Some(h) => h.clone(),
        None => return u32::MAX,
    };
    if hi <= Dyadic::from_i64(8) {
        return 3;
    }
    let t = hi.top() - i64::from(hi.is_pow2());
    t.clamp(3, i64::from(u32::MAX)) as u32
}

fn model_for(common: &Common, need: u32) -> Result<CounterexampleModel, CliError> {
    let n = common.n_max.unwrap_or(need.max(3));
    Ok(CounterexampleModel::standard(n, common.bits)?)
}

/// `Some(m)` when `x = 2^{−2^m}` exactly, `m ≥ 1`.
fn double_exponent(x: &Enclosure) -> Option<u32> {
    let d = x.lo_finite()?;
    if !x.is_point() || !d.is_pow2() {
        return None;
    }
    let k = -(d.top() - 1);
    (k >= 2 && (k as u64).is_power_of_two()).then(|| k.trailing_zeros())
}

pub fn run(args: EvalArgs, file: &EvalSection, common: &Common) -> Result<Outcome, CliError> {
    let bits = common.bits;
    let dg = common.digits;
    let parse = |s: &str| Enclosure::parse(s, bits).map_err(CliError::from);
    let lo = |e: &Enclosure| e.lo_string(dg);
    let hi = |e: &Enclosure| e.hi_string(dg);

    let table = if args.target == Target::PhiN {
        let n = args
            .n
            .or(file.n)
            .ok_or_else(|| CliError::Usage("Phi_n needs --n".into()))?;
        let mut xs = read_points(&args, file)?;
        if let Some(x) = args.x.clone().or_else(|| file.x.clone()) {
            xs.insert(0, x);
        }
        if xs.is_empty() {
            return Err(CliError::Usage("Phi_n needs --x or points".into()));
        }
        let model = model_for(common, n)?;
        let mut t = Table::new(
            "Phi_n",
            bits,
            &["n", "x", "lo", "hi", "m", "bound", "admissible", "bound_holds"],
        );
        t.meta("definition", "Phi(x t_n)/Phi(t_n), t_n = 2^(2^n)");
        t.meta("bound", "c^-1 2^(-2^(m+1)) at x = 2^(-2^m), c = 1/4, for n >= max(3, m^2+1)");
        t.meta("n_max", model.table().n_max().to_string());
        for s in &xs {
            let x = parse(s)?;
            let d = model.dilation_eval(n, &x)?;
            let mut row = vec![n.to_string(), s.clone(), lo(&d), hi(&d)];
            match double_exponent(&x) {
                Some(m) => {
                    let e = 1i64 << m;
                    let bound = Enclosure::pow2(-SANDWICH_C_LOG2 - 2 * e, bits);
                    let admissible = n >= (m * m + 1).max(3);
                    let holds = if d.certainly_le(&bound) {
                        "yes"
                    } else if d.certainly_gt(&bound) {
                        "no"
                    } else {
                        "undetermined"
                    };
                    row.extend([m.to_string(), hi(&bound), admissible.to_string(), holds.into()]);
                }
                None => row.extend([String::new(), String::new(), String::new(), String::new()]),
            }
            t.push(row);
        }
        t
    } else {
        let pts = read_points(&args, file)?;
        if pts.is_empty() {
            return Err(CliError::Usage("no points given".into()));
        }
        let xs: Vec<Enclosure> = pts.iter().map(|s| parse(s)).collect::<Result<_, _>>()?;
        let logs: Vec<Enclosure> = match args.target {
            Target::Density | Target::LogF => xs.clone(),
            _ => xs
                .iter()
                .map(|x| match LogMagnitude::from_value(x)? {
                    LogMagnitude::Zero => Err(orlicz_core::Error::Domain(
                        "F and Phi are evaluated at positive arguments".into(),
                    )),
                    LogMagnitude::Positive(u) => Ok(u),
                })
                .collect::<Result<_, _>>()?,
        };
        let need = logs.iter().map(blocks_for).max().unwrap_or(3);
        let model = model_for(common, need)?;
        let n_max = model.table().n_max().to_string();
        let mut t = match args.target {
            Target::Density => {
                let mut t = Table::new("phi", bits, &["t", "value"]);
                for (s, x) in pts.iter().zip(&xs) {
                    let v = match model.phi(x)? {
                        Density::Unit => "1",
                        Density::Stretch => "2",
                        Density::Undetermined => "undetermined",
                    };
                    t.push(vec![s.clone(), v.into()]);
                }
                t
            }
            Target::LogF => {
                let mut t = Table::new("f", bits, &["u", "lo", "hi"]);
                for (s, u) in pts.iter().zip(&xs) {
                    let v = model.f_eval(u)?;
                    t.push(vec![s.clone(), lo(&v), hi(&v)]);
                }
                t
            }
            _ => {
                let name = if args.target == Target::F { "F" } else { "Phi" };
                let mut t = Table::new(name, bits, &["x", "lo", "hi", "log2_lo", "log2_hi"]);
                for (s, u) in pts.iter().zip(&logs) {
                    let w = if args.target == Target::F {
                        model.log_f(u)?
                    } else {
                        model.log_phi(u)?
                    };
                    let small = w.hi_finite().is_some_and(|h| *h < Dyadic::from_i64(VALUE_LOG2_LIMIT));
                    let (vl, vh) = if small {
                        let v = w.exp2()?;
                        (lo(&v), hi(&v))
                    } else {
                        (String::new(), String::new())
                    };
                    t.push(vec![s.clone(), vl, vh, lo(&w), hi(&w)]);
                }
                t.meta("note", format!("lo/hi are left empty when log2 of the value exceeds {VALUE_LOG2_LIMIT}"));
                t
            }
        };
        t.meta("n_max", n_max);
        t
    };
    let text = table.render(common.format.unwrap_or(Format::Csv))?;
    Ok(Outcome { text, code: 0 })
}
