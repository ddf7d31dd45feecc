use std::sync::Arc;

use orlicz_core::analysis::{
    conjugate_eval, equivalence_at_zero_probe, estimate_indices, luxemburg_norm, nabla3_probe,
    sample_dilations, sample_dilations_at_scales, ConjugateValue, LimitCandidate, OrliczModel,
    PowerModel, StepFunction, TabulatedModel, XLogModel,
};
use orlicz_core::arith::{Dyadic, Enclosure, Rounding};
use orlicz_core::construction::{CounterexampleModel, View};
use orlicz_core::grid;

use crate::args::{AnalyzeOp, Format};
use crate::config::{AnalyzeSection, Common};
use crate::error::CliError;
use crate::output::Table;
use crate::Outcome;

const DEFAULT_P_GRID: &str = "1,1.1,1.2,1.5,2,2.5,3,3.5";
const DEFAULT_RANGES: &str = "4,8,16,32,64,128,256,512,1024";
const DEFAULT_DENSITY: usize = 200;
const DEFAULT_T: &str = "1/2,1,2,4,8,16,32";
const DEFAULT_N: &str = "6..11";
const DEFAULT_M_LIST: [u32; 4] = [1, 2, 3, 4];
/// Smallest block budget used for `F` and `Phi`.
const DEFAULT_BLOCKS: u32 = 11;

fn split(s: &str) -> Vec<String> {
    s.split(',').map(|p| p.trim().to_string()).collect()
}

fn pick(flag: Option<Vec<String>>, file: &Option<Vec<String>>, default: &str) -> Vec<String> {
    flag.or_else(|| file.clone()).unwrap_or_else(|| split(default))
}

fn enclosures(items: &[String], bits: u32) -> Result<Vec<Enclosure>, CliError> {
    items
        .iter()
        .map(|s| Enclosure::parse(s, bits).map_err(CliError::from))
        .collect()
}

/// Exact dyadic for a literal; irrational literals are rounded to 64 bits.
fn dyadics(items: &[String]) -> Result<Vec<Dyadic>, CliError> {
    items
        .iter()
        .map(|s| {
            let e = Enclosure::parse(s, 128)?;
            Ok(if e.is_point() {
                e.lo_finite().expect("point").clone()
            } else {
                e.midpoint()
                    .ok_or_else(|| CliError::Usage(format!("{s} is not finite")))?
                    .round(64, Rounding::Down)
            })
        })
        .collect()
}

fn parse_n_list(s: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Usage(format!("cannot read block list {s:?}; use a..b or a,b,c"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| bad()))
        .collect()
}

/// Resolve a model name. `need` is the block budget a counterexample view
/// must have for the requested operation.
fn build_model(name: &str, common: &Common, need: u32) -> Result<Arc<dyn OrliczModel>, CliError> {
    let bits = common.bits;
    let blocks = common.n_max.unwrap_or(need.max(DEFAULT_BLOCKS));
    Ok(match name {
        "F" => Arc::new(CounterexampleModel::standard(blocks, bits)?.with_view(View::F)),
        "Phi" => Arc::new(CounterexampleModel::standard(blocks, bits)?),
        "xlog" => Arc::new(XLogModel::new(bits)),
        _ => {
            if let Some(p) = name.strip_prefix("power:") {
                Arc::new(PowerModel::pure(p, bits)?)
            } else if let Some(p) = name.strip_prefix("powernorm:") {
                Arc::new(PowerModel::normalized(p, bits)?)
            } else if let Some(path) = name.strip_prefix("table:") {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("cannot read model table {path}: {e}")))?;
                Arc::new(TabulatedModel::from_csv(name, &text, bits)?)
            } else {
                return Err(CliError::Usage(format!(
                    "unknown model {name:?}; expected power:p, powernorm:p, xlog, F, Phi or table:<file>"
                )));
            }
        }
    })
}

fn model_name(flag: Option<String>, file: &AnalyzeSection) -> Result<String, CliError> {
    flag.or_else(|| file.model.clone())
        .ok_or_else(|| CliError::Usage("analyze needs --model".into()))
}

/// Blocks needed so that `2^w` lies inside the counterexample's budget.
fn blocks_for_log(w: &Dyadic) -> u32 {
    if *w <= Dyadic::from_i64(8) {
        3
    } else {
        (w.top() - i64::from(w.is_pow2())).max(3) as u32
    }
}

fn verdict_str<T: std::fmt::Debug>(v: T) -> String {
    format!("{v:?}")
}

pub fn run(op: AnalyzeOp, file: &AnalyzeSection, common: &Common) -> Result<Outcome, CliError> {
    let bits = common.bits;
    let dg = common.digits;
    let lo = |e: &Enclosure| e.lo_string(dg);
    let hi = |e: &Enclosure| e.hi_string(dg);
    let mid = |e: &Enclosure| e.midpoint().map_or_else(|| lo(e), |d| d.to_string());

    let table = match op {
        AnalyzeOp::Indices { model, p_grid, ranges, density } => {
            let name = model_name(model.model, file)?;
            let p_str = pick(p_grid, &file.p_grid, DEFAULT_P_GRID);
            let r_str = pick(ranges, &file.ranges, DEFAULT_RANGES);
            let ps = enclosures(&p_str, bits)?;
            let rs = dyadics(&r_str)?;
            let density = density.or(file.density).unwrap_or(DEFAULT_DENSITY);
            let need = rs.last().map_or(3, |e| blocks_for_log(&e.mul_pow2(1)));
            let m = build_model(&name, common, need)?;
            let est = estimate_indices(m.as_ref(), &ps, &rs, density)?;
            // Report p values as they were written.
            let label = |p: Option<Enclosure>| {
                p.and_then(|p| ps.iter().position(|q| *q == p))
                    .map_or_else(|| "none".to_string(), |i| p_str[i].clone())
            };
            let mut t = Table::new(
                "indices",
                bits,
                &[
                    "p",
                    "range_log2",
                    "sup_log2_lo",
                    "sup_log2_hi",
                    "dual_log2_lo",
                    "dual_log2_hi",
                    "verdict",
                    "dual_verdict",
                    "beta_hat",
                    "alpha_hat",
                ],
            );
            t.meta("model", m.name());
            t.meta("ranges", format!("x, y in [1, 2^e], e in {{{}}}", r_str.join(", ")));
            t.meta("grid_density", density.to_string());
            t.meta("sampled_y", est.sampled_y.to_string());
            t.meta(
                "statistic",
                "sup over sampled x, y of log2 M(xy) - log2 M(x) - p log2 y (dual: the negated bracket)",
            );
            t.meta("beta_hat", label(est.beta_hat.clone()));
            t.meta("alpha_hat", label(est.alpha_hat.clone()));
            for (i, p) in p_str.iter().enumerate() {
                for (k, r) in r_str.iter().enumerate() {
                    let (v, dv, b, a) = if k == 0 {
                        Default::default()
                    } else {
                        (
                            verdict_str(est.verdict_through(i, k)),
                            verdict_str(est.dual_verdict_through(i, k)),
                            label(est.beta_hat_through(k)),
                            label(est.alpha_hat_through(k)),
                        )
                    };
                    let s = &est.running_sup[i][k];
                    let d = &est.running_sup_dual[i][k];
                    t.push(vec![p.clone(), r.clone(), lo(s), hi(s), lo(d), hi(d), v, dv, b, a]);
                }
            }
            t
        }
        AnalyzeOp::Conjugate { model, t } => {
            let name = model_name(model.model, file)?;
            let ts_str = pick(t, &file.t, DEFAULT_T);
            let ts = enclosures(&ts_str, bits)?;
            let m = build_model(&name, common, DEFAULT_BLOCKS)?;
            let mut tab = Table::new("conjugate", bits, &["t", "lo", "hi"]);
            tab.meta("model", m.name());
            tab.meta("definition", "sup over s >= 0 of t s - M(s)");
            for (s, t) in ts_str.iter().zip(&ts) {
                let row = match conjugate_eval(m.as_ref(), t)? {
                    ConjugateValue::Infinite => vec![s.clone(), "inf".into(), "inf".into()],
                    ConjugateValue::Finite(v) => vec![s.clone(), lo(&v), hi(&v)],
                };
                tab.push(row);
            }
            tab
        }
        AnalyzeOp::Nabla3 { model, c, t } => {
            let name = model_name(model.model, file)?;
            let c_str = c.or_else(|| file.c.clone()).unwrap_or_else(|| "2".into());
            let c = Enclosure::parse(&c_str, bits)?;
            let grid = match t.or_else(|| file.t.clone()) {
                Some(list) => dyadics(&list)?,
                None => grid::half_octave_grid(2, 18),
            };
            let m = build_model(&name, common, DEFAULT_BLOCKS)?;
            let r = nabla3_probe(m.as_ref(), &c, &grid)?;
            let mut tab = Table::new(
                "nabla3",
                bits,
                &["t", "conj_t_lo", "conj_t_hi", "conj_ct_lo", "conj_ct_hi", "log2_ratio_lo", "log2_ratio_hi"],
            );
            tab.meta("model", m.name());
            tab.meta("C", c_str);
            tab.meta("verdict", verdict_str(r.verdict));
            tab.meta("heuristic", r.heuristic.to_string());
            tab.meta("note", r.note.clone());
            for row in &r.rows {
                tab.push(vec![
                    mid(&row.t),
                    lo(&row.conj_t),
                    hi(&row.conj_t),
                    lo(&row.conj_ct),
                    hi(&row.conj_ct),
                    lo(&row.log2_ratio),
                    hi(&row.log2_ratio),
                ]);
            }
            tab
        }
        AnalyzeOp::Einf { model, n, scales, grid: g, m_list } => {
            let name = model_name(model.model, file)?;
            let grid = match g.or_else(|| file.grid.clone()) {
                Some(list) => dyadics(&list)?,
                None => grid::dilation_grid(),
            };
            let m_list = m_list
                .or_else(|| file.m_list.clone())
                .unwrap_or_else(|| DEFAULT_M_LIST.to_vec());
            let scales = scales.or_else(|| file.scales.clone());
            let cand: LimitCandidate = if let Some(sc) = scales {
                let ws = dyadics(&sc)?;
                let need = ws.last().map_or(3, blocks_for_log);
                let m = build_model(&name, common, need)?;
                sample_dilations_at_scales(m.as_ref(), &ws, &grid)?
            } else {
                let n_str = n.or_else(|| file.n.clone()).unwrap_or_else(|| DEFAULT_N.into());
                let ns = parse_n_list(&n_str)?;
                let m = build_model(&name, common, ns.iter().copied().max().unwrap_or(3))?;
                sample_dilations(m.as_ref(), &ns, &grid)?
            };
            let labels: Vec<String> = if cand.n_list.is_empty() {
                cand.log2_scales.iter().map(|w| format!("w{w}")).collect()
            } else {
                cand.n_list.iter().map(|n| format!("n{n}")).collect()
            };
            let mut cols = vec!["x".to_string()];
            for l in &labels {
                cols.push(format!("{l}_lo"));
                cols.push(format!("{l}_hi"));
            }
            let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
            let mut tab = Table::new("einf", bits, &col_refs);
            tab.meta("model", cand.model.clone());
            tab.meta("definition", "M(x t)/M(t) at t = 2^w, w = 2^n");
            tab.meta(
                "log2_scales",
                cand.log2_scales.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" "),
            );
            for (k, gap) in cand.cauchy_gaps.iter().enumerate() {
                tab.meta(
                    &format!("cauchy_gap_{}_{}", labels[k], labels[k + 1]),
                    format!("[{}, {}]", lo(gap), hi(gap)),
                );
            }
            match equivalence_at_zero_probe(&cand, &m_list) {
                Ok(rep) => {
                    tab.meta("equivalence_to_t_at_zero", verdict_str(rep.verdict));
                    for r in &rep.rows {
                        tab.meta(
                            &format!("ratio_over_x_m{}", r.m),
                            format!("[{}, {}]", lo(&r.ratio), hi(&r.ratio)),
                        );
                    }
                }
                Err(e) => tab.meta("equivalence_to_t_at_zero", format!("not evaluated: {e}")),
            }
            for (i, x) in cand.grid.iter().enumerate() {
                let mut row = vec![x.to_string()];
                for s in &cand.samples {
                    row.push(lo(&s[i]));
                    row.push(hi(&s[i]));
                }
                tab.push(row);
            }
            tab
        }
        AnalyzeOp::Norm { model, values, measures } => {
            let name = model_name(model.model, file)?;
            let vs = values
                .or_else(|| file.values.clone())
                .ok_or_else(|| CliError::Usage("norm needs --values".into()))?;
            let ms = measures
                .or_else(|| file.measures.clone())
                .ok_or_else(|| CliError::Usage("norm needs --measures".into()))?;
            if vs.len() != ms.len() {
                return Err(CliError::Usage("--values and --measures differ in length".into()));
            }
            let pieces: Vec<(Enclosure, Enclosure)> = enclosures(&vs, bits)?
                .into_iter()
                .zip(enclosures(&ms, bits)?)
                .collect();
            let x = StepFunction::new(pieces)?;
            let m = build_model(&name, common, DEFAULT_BLOCKS)?;
            let n = luxemburg_norm(m.as_ref(), &x)?;
            let mut tab = Table::new("norm", bits, &["lo", "hi"]);
            tab.meta("model", m.name());
            tab.meta("definition", "inf{l > 0 : sum measure M(value/l) <= 1}");
            tab.meta("values", vs.join(" "));
            tab.meta("measures", ms.join(" "));
            tab.push(vec![lo(&n), hi(&n)]);
            tab
        }
    };
    let text = table.render(common.format.unwrap_or(Format::Csv))?;
    Ok(Outcome { text, code: 0 })
}
