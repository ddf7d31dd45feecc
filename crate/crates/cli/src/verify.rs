use orlicz_core::verify::{
    admissible_pairs, check_exact_ratio, check_phi_ratio_bound, run_all, run_one, CheckConfig,
    Status, Variant, VerificationReport, CHECK_IDS,
};

use crate::args::{Format, VariantArg, VerifyArgs};
use crate::config::Common;
use crate::error::CliError;
use crate::output::Table;
use crate::Outcome;

fn apply_flags(cfg: &mut CheckConfig, args: &VerifyArgs, common: &Common, bits_given: bool) {
    if bits_given {
        cfg.precision_bits = common.bits;
    }
    if common.n_max.is_some() {
        cfg.n_max = common.n_max;
    }
    if let Some(p) = &args.p {
        cfg.p = p.clone();
    }
    if let Some(e) = &args.epsilon {
        cfg.epsilon = e.clone();
    }
    if let Some(r) = args.range_exponent_max {
        cfg.range_exponent_max = r;
    }
    if let Some(g) = args.grid_points {
        cfg.grid_points = g;
    }
    if let Some(s) = args.sandwich_points {
        cfg.sandwich_points = s;
    }
    if let Some(s) = args.measure_samples {
        cfg.measure_samples = s;
    }
    if let Some(v) = args.variant {
        cfg.variant = match v {
            VariantArg::Standard => Variant::Standard,
            VariantArg::HalfSlope => Variant::HalfSlope,
            VariantArg::HalfExponent => Variant::HalfExponent,
        };
    }
    cfg.timings |= args.timings;
}

pub fn exit_code(s: Status) -> u8 {
    match s {
        Status::Verified => 0,
        Status::Falsified => 1,
        Status::Undetermined => 2,
    }
}

/// `check_id,status,key,quantity,lo,hi`: one summary row per check with its
/// extremal constant, followed by the per-point data rows.
fn csv_table(report: &VerificationReport) -> Table {
    let mut t = Table::new(
        "verification",
        report.precision_bits,
        &["check_id", "status", "key", "quantity", "lo", "hi"],
    );
    t.meta("construction", report.construction.clone());
    t.meta("overall", format!("{:?}", report.overall));
    t.meta(
        "ranges",
        format!(
            "x, y in [1, 2^(2^{})]; m in {:?}; n in {:?}",
            report.config.range_exponent_max, report.config.m_list, report.config.n_list
        ),
    );
    for c in &report.checks {
        let (lo, hi) = c
            .extremal_constant
            .as_ref()
            .map_or((String::new(), String::new()), |e| (e.lo.clone(), e.hi.clone()));
        let status = format!("{:?}", c.status);
        t.push(vec![c.check_id.clone(), status.clone(), "summary".into(), "extremal_constant".into(), lo, hi]);
        for d in &c.data {
            t.push(vec![
                c.check_id.clone(),
                status.clone(),
                d.key.clone(),
                d.quantity.clone(),
                d.lo.clone(),
                d.hi.clone(),
            ]);
        }
    }
    t
}

pub fn run(
    args: VerifyArgs,
    file: Option<CheckConfig>,
    common: &Common,
    bits_given: bool,
) -> Result<Outcome, CliError> {
    let mut cfg = file.unwrap_or_default();
    apply_flags(&mut cfg, &args, common, bits_given);
    cfg.validate()?;

    let report = match &args.check {
        None => {
            if args.m.is_some() || args.n.is_some() {
                return Err(CliError::Usage("--m/--n need --check exact_ratio or phi_ratio_bound".into()));
            }
            run_all(&cfg)?
        }
        Some(id) => {
            if !CHECK_IDS.contains(&id.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown check {id}; expected one of {}",
                    CHECK_IDS.join(", ")
                )));
            }
            let pair_check = id == "exact_ratio" || id == "phi_ratio_bound";
            match (args.m, args.n) {
                (None, None) => {}
                (Some(m), Some(n)) if pair_check => {
                    cfg.m_list = vec![m];
                    cfg.n_list = vec![n];
                    cfg.validate()?;
                    if !admissible_pairs(&cfg).contains(&(m, n)) {
                        // The check itself explains which hypothesis fails.
                        let model = cfg.model()?;
                        if id == "exact_ratio" {
                            check_exact_ratio(&cfg, &model, m, n)?;
                        } else {
                            check_phi_ratio_bound(&cfg, &model, m, n)?;
                        }
                        return Err(CliError::Usage(format!("(m, n) = ({m}, {n}) is not admissible")));
                    }
                }
                (_, _) if pair_check => {
                    return Err(CliError::Usage("--m and --n must be given together".into()))
                }
                _ => return Err(CliError::Usage(format!("--m/--n do not apply to {id}"))),
            }
            let entry = run_one(&cfg, id)?;
            VerificationReport {
                tool: "orlicz-core".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                construction: cfg.variant.construction().label(),
                precision_bits: cfg.precision_bits,
                overall: entry.status,
                config: cfg.clone(),
                checks: vec![entry],
            }
        }
    };
    for c in &report.checks {
        eprintln!("{:<20} {:?}", c.check_id, c.status);
    }
    eprintln!("overall: {:?}", report.overall);
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
        Format::Csv => csv_table(&report).to_csv()?,
    };
    Ok(Outcome {
        text,
        code: exit_code(report.overall),
    })
}
