//! Browser bindings for three interactive views: dilation curves of `Φ`,
//! the index statistic of a model, and a ∇₃ table.
//!
//! Every export returns a JSON string; the plain functions behind them are
//! ordinary Rust and are tested natively.

use orlicz_core::analysis::{
    estimate_indices, nabla3_probe, sample_dilations, OrliczModel, PowerModel, XLogModel,
};
use orlicz_core::arith::{Dyadic, Enclosure};
use orlicz_core::construction::{CounterexampleModel, View};
use orlicz_core::grid;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Browser-side precision; enough for plotting, cheap enough to be
/// interactive.
const BITS: u32 = 96;
/// Block budget of the counterexample models.
const BLOCKS: u32 = 12;

fn model(name: &str) -> Result<Box<dyn OrliczModel>, String> {
    let err = |e: orlicz_core::Error| e.to_string();
    Ok(match name {
        "Phi" => Box::new(CounterexampleModel::standard(BLOCKS, BITS).map_err(err)?),
        "F" => Box::new(
            CounterexampleModel::standard(BLOCKS, BITS)
                .map_err(err)?
                .with_view(View::F),
        ),
        "xlog" => Box::new(XLogModel::new(BITS)),
        _ => match name.strip_prefix("power:") {
            Some(p) => Box::new(PowerModel::pure(p, BITS).map_err(err)?),
            None => return Err(format!("unknown model {name:?}")),
        },
    })
}

fn bounds(e: &Enclosure) -> Value {
    json!([e.lo_f64(), e.hi_f64()])
}

/// `Φ(x·t_n)/Φ(t_n)` on the standard 64-point grid for `n = n_lo..=n_hi`.
pub fn dilation_curves_json(n_lo: u32, n_hi: u32) -> Result<String, String> {
    if n_lo == 0 || n_lo > n_hi || n_hi > BLOCKS {
        return Err(format!("need 1 <= n_lo <= n_hi <= {BLOCKS}"));
    }
    let m = model("Phi")?;
    let ns: Vec<u32> = (n_lo..=n_hi).collect();
    let g = grid::dilation_grid();
    let c = sample_dilations(m.as_ref(), &ns, &g).map_err(|e| e.to_string())?;
    let curves: Vec<Value> = c
        .n_list
        .iter()
        .zip(&c.samples)
        .map(|(n, row)| json!({ "n": n, "values": row.iter().map(bounds).collect::<Vec<_>>() }))
        .collect();
    Ok(json!({
        "x": g.iter().map(Dyadic::approx_f64).collect::<Vec<_>>(),
        "curves": curves,
        "cauchy_gaps": c.cauchy_gaps.iter().map(bounds).collect::<Vec<_>>(),
    })
    .to_string())
}

/// Running sup of `log₂M(xy) − log₂M(x) − p·log₂y` over `x, y ∈ [1, 2^e]`
/// for `e = 4, 8, …, 2^k_max`.
pub fn index_statistic_json(name: &str, p: &str, k_max: u32) -> Result<String, String> {
    if !(3..=10).contains(&k_max) {
        return Err("k_max must lie in 3..=10".into());
    }
    let m = model(name)?;
    let p = Enclosure::parse(p, BITS).map_err(|e| e.to_string())?;
    let ranges: Vec<Dyadic> = (2..=k_max as i64).map(Dyadic::pow2).collect();
    let est = estimate_indices(m.as_ref(), std::slice::from_ref(&p), &ranges, 64)
        .map_err(|e| e.to_string())?;
    Ok(json!({
        "model": m.name(),
        "range_log2": ranges.iter().map(Dyadic::approx_f64).collect::<Vec<_>>(),
        "sup_log2": est.running_sup[0].iter().map(bounds).collect::<Vec<_>>(),
        "verdict": format!("{:?}", est.verdict_per_p[0]),
    })
    .to_string())
}

/// `(t, M̃(t), M̃(Ct), log₂ ratio)` rows on `t = 2^{j/2}`, `j = 2..=18`.
pub fn nabla3_table_json(name: &str, c: &str) -> Result<String, String> {
    let m = model(name)?;
    let c = Enclosure::parse(c, BITS).map_err(|e| e.to_string())?;
    let r = nabla3_probe(m.as_ref(), &c, &grid::half_octave_grid(2, 18))
        .map_err(|e| e.to_string())?;
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({
                "t": row.t.mid_f64(),
                "conj_t": bounds(&row.conj_t),
                "conj_ct": bounds(&row.conj_ct),
                "log2_ratio": bounds(&row.log2_ratio),
            })
        })
        .collect();
    Ok(json!({
        "model": m.name(),
        "rows": rows,
        "verdict": format!("{:?}", r.verdict),
        "note": r.note,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn dilation_curves(n_lo: u32, n_hi: u32) -> Result<String, JsValue> {
    dilation_curves_json(n_lo, n_hi).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn index_statistic(model: &str, p: &str, k_max: u32) -> Result<String, JsValue> {
    index_statistic_json(model, p, k_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn nabla3_table(model: &str, c: &str) -> Result<String, JsValue> {
    nabla3_table_json(model, c).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn curves_are_monotone_in_x() {
        let v = parse(&dilation_curves_json(4, 6).unwrap());
        assert_eq!(v["x"].as_array().unwrap().len(), 64);
        for c in v["curves"].as_array().unwrap() {
            let vals = c["values"].as_array().unwrap();
            for w in vals.windows(2) {
                assert!(w[0][0].as_f64().unwrap() <= w[1][1].as_f64().unwrap());
            }
            assert!(vals.iter().all(|b| b[1].as_f64().unwrap() <= 1.0));
        }
        assert!(dilation_curves_json(0, 3).is_err());
        assert!(dilation_curves_json(5, 40).is_err());
    }

    #[test]
    fn index_statistic_of_a_power() {
        let v = parse(&index_statistic_json("power:2", "2", 5).unwrap());
        assert_eq!(v["verdict"], "Stabilizing");
        let v = parse(&index_statistic_json("power:2", "1", 5).unwrap());
        assert_eq!(v["verdict"], "Diverging");
        assert!(index_statistic_json("nope", "1", 5).is_err());
    }

    #[test]
    fn nabla3_verdicts() {
        assert_eq!(parse(&nabla3_table_json("xlog", "2").unwrap())["verdict"], "DivergesLikely");
        assert_eq!(parse(&nabla3_table_json("power:2", "2").unwrap())["verdict"], "BoundedLikely");
        assert!(nabla3_table_json("F", "2").is_err());
    }
}
