//! Grid verification of the inequalities behind the construction.
//!
//! Each check returns a [`CheckEntry`]; [`run_all`] assembles them, keyed by
//! check id, into a deterministic [`VerificationReport`]. A check is
//! `Verified` only when every sampled comparison is interval-strict,
//! `Falsified` only with a witness that certainly violates the inequality,
//! and `Undetermined` otherwise.

mod checks;
mod witness;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arith::{Dyadic, Enclosure};
use crate::construction::{Construction, CounterexampleModel, MAX_BLOCKS};
use crate::error::{Error, Result};
use crate::par_map;

pub use checks::{
    check_exact_ratio, check_measure_bound, check_monotone_ratio, check_phi_ratio_bound,
    check_sum_inequality, classify_endpoints, estimate_cp, estimate_sandwich_c, find_n0,
    measure_sample_admissible, sum_sides, EndpointCase, N0Result, SANDWICH_C_LOG2,
};
pub use witness::{Witness, WitnessKind};

/// Outcome of a check. The order is from best to worst.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Status {
    Verified,
    Undetermined,
    Falsified,
}

impl Status {
    pub fn worst(items: impl IntoIterator<Item = Status>) -> Status {
        items.into_iter().max().unwrap_or(Status::Verified)
    }
}

/// Which construction a run is performed on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[default]
    Standard,
    /// Stretch density 1/2 (breaks monotonicity of `F(y)/y`).
    HalfSlope,
    /// Stretch length `2^{n/2}`.
    HalfExponent,
}

impl Variant {
    pub fn construction(self) -> Construction {
        match self {
            Variant::Standard => Construction::standard(),
            Variant::HalfSlope => Construction::half_slope(),
            Variant::HalfExponent => Construction::half_exponent(),
        }
    }
}

/// Parameters shared by all checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    /// Grids cover `x, y ∈ [1, 2^{2^range_exponent_max}]`.
    pub range_exponent_max: u32,
    /// Points per axis of the base grids.
    pub grid_points: usize,
    pub p: String,
    pub epsilon: String,
    pub m_list: Vec<u32>,
    pub n_list: Vec<u32>,
    pub precision_bits: u32,
    /// Block budget; derived from the ranges when absent.
    pub n_max: Option<u32>,
    /// Number of sample points for the sandwich check.
    pub sandwich_points: usize,
    /// Minimum number of admissible samples for the measure bound.
    pub measure_samples: usize,
    /// Upper block index searched by `find_n0`.
    pub n0_search_max: u32,
    pub variant: Variant,
    /// Record wall-clock time per check (makes reports nondeterministic).
    pub timings: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            range_exponent_max: 10,
            grid_points: 200,
            p: "1.5".into(),
            epsilon: "0.25".into(),
            m_list: vec![1, 2, 3],
            n_list: (3..=11).collect(),
            precision_bits: crate::arith::DEFAULT_BITS,
            n_max: None,
            sandwich_points: 10_000,
            measure_samples: 1_000,
            n0_search_max: 40,
            variant: Variant::Standard,
            timings: false,
        }
    }
}

impl CheckConfig {
    pub fn p(&self) -> Result<Enclosure> {
        Enclosure::parse(&self.p, self.precision_bits)
    }

    pub fn epsilon(&self) -> Result<Enclosure> {
        Enclosure::parse(&self.epsilon, self.precision_bits)
    }

    /// Number of blocks the checks need.
    pub fn blocks_needed(&self) -> u32 {
        let from_range = self.range_exponent_max + 1;
        let from_n = self.n_list.iter().copied().max().unwrap_or(3);
        self.n_max.unwrap_or(from_range.max(from_n)).max(3)
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 8 {
            return Err(Error::Config(format!(
                "precision of {} bits is below the minimum of 8",
                self.precision_bits
            )));
        }
        if self.range_exponent_max < 2 {
            return Err(Error::Config("range_exponent_max must be at least 2".into()));
        }
        if self.grid_points < 2 {
            return Err(Error::Config("grid_points must be at least 2".into()));
        }
        let need = self.range_exponent_max + 1;
        if let Some(n) = self.n_max {
            if n < need {
                return Err(Error::Config(format!(
                    "n_max = {n} is too small for range_exponent_max = {} (needs {need})",
                    self.range_exponent_max
                )));
            }
        }
        if self.blocks_needed() > MAX_BLOCKS {
            return Err(Error::Config(format!(
                "the configuration needs {} blocks; at most {MAX_BLOCKS} are supported",
                self.blocks_needed()
            )));
        }
        if self.n0_search_max < 5 {
            return Err(Error::Config("n0_search_max must be at least 5".into()));
        }
        let p = self.p()?;
        let eps = self.epsilon()?;
        let one = Enclosure::one(self.precision_bits);
        if !p.certainly_ge(&one) {
            return Err(Error::Config("p must be at least 1".into()));
        }
        if !eps.certainly_positive() {
            return Err(Error::Config("epsilon must be positive".into()));
        }
        if p.certainly_gt(&one) {
            let cap = p.sub(&one).mul_pow2(-1);
            if eps.certainly_gt(&cap) {
                return Err(Error::Config(format!(
                    "epsilon = {} exceeds (p − 1)/2 for p = {}",
                    self.epsilon, self.p
                )));
            }
        }
        if self.n_list.iter().any(|&n| n < 1) || self.m_list.iter().any(|&m| m < 1) {
            return Err(Error::Config("m and n values must be positive".into()));
        }
        Ok(())
    }

    /// The `Φ`-view model for this configuration.
    pub fn model(&self) -> Result<CounterexampleModel> {
        self.validate()?;
        CounterexampleModel::new(
            self.variant.construction(),
            self.blocks_needed(),
            self.precision_bits,
        )
    }

    /// Log-argument bound of the sampled range, `2^range_exponent_max`.
    pub fn range_log(&self) -> Dyadic {
        Dyadic::pow2(self.range_exponent_max as i64)
    }
}

/// Decimal rendering of an enclosure, outward rounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnclosureRecord {
    pub lo: String,
    pub hi: String,
}

pub const RECORD_DIGITS: usize = 17;

impl From<&Enclosure> for EnclosureRecord {
    fn from(e: &Enclosure) -> Self {
        EnclosureRecord {
            lo: e.lo_string(RECORD_DIGITS),
            hi: e.hi_string(RECORD_DIGITS),
        }
    }
}

/// One row of per-point extremal data (CSV export).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataRow {
    pub key: String,
    pub quantity: String,
    pub lo: String,
    pub hi: String,
}

impl DataRow {
    pub fn new(key: impl Into<String>, quantity: impl Into<String>, e: &Enclosure) -> Self {
        DataRow {
            key: key.into(),
            quantity: quantity.into(),
            lo: e.lo_string(RECORD_DIGITS),
            hi: e.hi_string(RECORD_DIGITS),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub check_id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extremal_constant: Option<EnclosureRecord>,
    pub range_used: String,
    pub precision_bits: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    pub samples: usize,
    pub undetermined: usize,
    pub falsified: usize,
    pub notes: Vec<String>,
    pub data: Vec<DataRow>,
    /// The extremal constant before rendering, for programmatic use.
    #[serde(skip)]
    pub extremal: Option<Enclosure>,
}

impl CheckEntry {
    pub fn new(check_id: impl Into<String>, precision_bits: u32) -> Self {
        CheckEntry {
            check_id: check_id.into(),
            status: Status::Verified,
            witness: None,
            extremal_constant: None,
            range_used: String::new(),
            precision_bits,
            wall_time_ms: None,
            samples: 0,
            undetermined: 0,
            falsified: 0,
            notes: Vec::new(),
            data: Vec::new(),
            extremal: None,
        }
    }

    pub fn set_extremal(&mut self, e: Enclosure) {
        self.extremal_constant = Some(EnclosureRecord::from(&e));
        self.extremal = Some(e);
    }

    /// Status implied by the counters.
    pub(crate) fn settle(&mut self) {
        self.status = if self.falsified > 0 {
            Status::Falsified
        } else if self.undetermined > 0 {
            Status::Undetermined
        } else {
            Status::Verified
        };
    }

    fn failed(check_id: &str, bits: u32, err: &Error) -> Self {
        let mut e = CheckEntry::new(check_id, bits);
        e.status = Status::Undetermined;
        e.notes.push(format!("check could not run: {err}"));
        e
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub construction: String,
    pub precision_bits: u32,
    pub config: CheckConfig,
    pub overall: Status,
    pub checks: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Per-point extremal data: `check_id,key,quantity,lo,hi`.
    pub fn data_rows(&self) -> Vec<(String, &DataRow)> {
        self.checks
            .iter()
            .flat_map(|c| c.data.iter().map(move |d| (c.check_id.clone(), d)))
            .collect()
    }

    pub fn entry(&self, id: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.check_id == id)
    }
}

/// Check ids in report order.
pub const CHECK_IDS: [&str; 7] = [
    "monotone_ratio",
    "cp_bound",
    "sum_inequality",
    "measure_bound",
    "sandwich",
    "exact_ratio",
    "phi_ratio_bound",
];

/// Admissible `(m, n)` pairs of `m_list × n_list`: `n ≥ max(3, m² + 1)`.
pub fn admissible_pairs(cfg: &CheckConfig) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for &m in &cfg.m_list {
        for &n in &cfg.n_list {
            if n >= (m * m + 1).max(3) {
                out.push((m, n));
            }
        }
    }
    out
}

fn merge_pairs(id: &str, cfg: &CheckConfig, entries: Vec<Result<CheckEntry>>) -> CheckEntry {
    let mut out = CheckEntry::new(id, cfg.precision_bits);
    let mut ranges = Vec::new();
    for e in entries {
        match e {
            Ok(e) => {
                out.samples += e.samples;
                out.undetermined += e.undetermined;
                out.falsified += e.falsified;
                if out.witness.is_none() && e.witness.is_some() {
                    out.witness = e.witness.clone();
                }
                ranges.push(e.range_used.clone());
                out.data.extend(e.data);
                out.notes.extend(e.notes);
            }
            Err(err) => {
                out.undetermined += 1;
                out.notes.push(format!("pair skipped: {err}"));
            }
        }
    }
    out.range_used = ranges.join("; ");
    out.settle();
    out
}

fn run_check(id: &str, cfg: &CheckConfig, model: &CounterexampleModel) -> CheckEntry {
    let bits = cfg.precision_bits;
    let result = match id {
        "monotone_ratio" => check_monotone_ratio(cfg, model),
        "cp_bound" => estimate_cp(cfg, model),
        "sum_inequality" => check_sum_inequality(cfg),
        "measure_bound" => check_measure_bound(cfg, model),
        "sandwich" => estimate_sandwich_c(cfg, model),
        "exact_ratio" => Ok(merge_pairs(
            id,
            cfg,
            admissible_pairs(cfg)
                .into_iter()
                .map(|(m, n)| check_exact_ratio(cfg, model, m, n))
                .collect(),
        )),
        "phi_ratio_bound" => Ok(merge_pairs(
            id,
            cfg,
            admissible_pairs(cfg)
                .into_iter()
                .map(|(m, n)| check_phi_ratio_bound(cfg, model, m, n))
                .collect(),
        )),
        other => Err(Error::Config(format!("unknown check id {other}"))),
    };
    result.unwrap_or_else(|e| CheckEntry::failed(id, bits, &e))
}

/// Re-evaluate a Falsified entry's witness at twice the precision; an entry
/// whose witness does not survive is downgraded to Undetermined.
fn confirm_witness(entry: &mut CheckEntry, cfg: &CheckConfig) {
    if entry.status != Status::Falsified {
        return;
    }
    let bits = cfg.precision_bits * 2;
    match entry.witness.as_ref().map(|w| w.reverify(&cfg.variant.construction(), bits)) {
        Some(Ok(true)) => entry
            .notes
            .push(format!("witness re-verified as a violation at {bits} bits")),
        Some(Ok(false)) | Some(Err(_)) | None => {
            entry.status = Status::Undetermined;
            entry
                .notes
                .push(format!("violation did not re-verify at {bits} bits; downgraded"));
        }
    }
}

/// Run one named check with witness confirmation and optional timing.
pub fn run_one(cfg: &CheckConfig, id: &str) -> Result<CheckEntry> {
    let model = cfg.model()?;
    if !CHECK_IDS.contains(&id) {
        return Err(Error::Config(format!(
            "unknown check id {id}; expected one of {}",
            CHECK_IDS.join(", ")
        )));
    }
    let start = Instant::now();
    let mut e = run_check(id, cfg, &model);
    confirm_witness(&mut e, cfg);
    if cfg.timings {
        e.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(e)
}

/// Execute every check; failures are recorded per check and never abort
/// the run. The overall status is the worst individual status.
pub fn run_all(cfg: &CheckConfig) -> Result<VerificationReport> {
    let model = cfg.model()?;
    let checks: Vec<CheckEntry> = par_map(&CHECK_IDS, |id| {
        let start = Instant::now();
        let mut e = run_check(id, cfg, &model);
        confirm_witness(&mut e, cfg);
        if cfg.timings {
            e.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        e
    });
    Ok(VerificationReport {
        tool: "orlicz-core".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        construction: cfg.variant.construction().label(),
        precision_bits: cfg.precision_bits,
        config: cfg.clone(),
        overall: Status::worst(checks.iter().map(|c| c.status)),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_order() {
        assert_eq!(
            Status::worst([Status::Verified, Status::Undetermined]),
            Status::Undetermined
        );
        assert_eq!(
            Status::worst([Status::Falsified, Status::Undetermined]),
            Status::Falsified
        );
        assert_eq!(Status::worst([]), Status::Verified);
    }

    #[test]
    fn config_validation() {
        assert!(CheckConfig::default().validate().is_ok());
        let bad = CheckConfig {
            epsilon: "0.3".into(),
            ..CheckConfig::default()
        };
        assert!(bad.validate().is_err());
        let big = CheckConfig {
            range_exponent_max: 25,
            ..CheckConfig::default()
        };
        assert!(big.validate().is_err());
        let parsed: CheckConfig = serde_json::from_str(r#"{"grid_points": 50}"#).unwrap();
        assert_eq!(parsed.grid_points, 50);
        assert!(serde_json::from_str::<CheckConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn pairs_respect_hypothesis() {
        let cfg = CheckConfig::default();
        let pairs = admissible_pairs(&cfg);
        assert!(pairs.contains(&(1, 3)) && pairs.contains(&(3, 10)));
        assert!(!pairs.contains(&(2, 4)) && !pairs.contains(&(3, 9)));
    }
}
