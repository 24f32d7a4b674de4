//! Suite runner and report assembly.
//!
//! [`run_suite`] executes a configurable subset of the verification
//! suites and collects one [`SuiteEntry`] per checked claim into a
//! [`VerificationReport`]. Reports serialize deterministically: entry
//! order is a fixed function of the configuration, parameters are kept
//! in ordered maps, and timings are opt-in so that default output is
//! byte-identical across runs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::apps::{self, BoundCheckRecord, MonotoneTarget};
use crate::cm::{self, CmTarget, Verdict};
use crate::divdiff::ShiftPair;
use crate::error::{Error, Result};
use crate::real::PrecisionMode;

/// Highest derivative order the alternating-sign scan can certify;
/// bounded by the polygamma order ceiling two above it.
pub const MAX_K: u32 = 14;

/// A runnable verification suite.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteKind {
    Cm,
    Wallis,
    Erf,
    Ball,
    Kershaw,
    GammaPsi,
    Aux,
    Identities,
    Conjecture,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 9] = [
        SuiteKind::Cm,
        SuiteKind::Wallis,
        SuiteKind::Erf,
        SuiteKind::Ball,
        SuiteKind::Kershaw,
        SuiteKind::GammaPsi,
        SuiteKind::Aux,
        SuiteKind::Identities,
        SuiteKind::Conjecture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Cm => "cm",
            SuiteKind::Wallis => "wallis",
            SuiteKind::Erf => "erf",
            SuiteKind::Ball => "ball",
            SuiteKind::Kershaw => "kershaw",
            SuiteKind::GammaPsi => "gamma-psi",
            SuiteKind::Aux => "aux",
            SuiteKind::Identities => "identities",
            SuiteKind::Conjecture => "conjecture",
        }
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SuiteKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown suite '{s}' (expected one of: cm, wallis, erf, ball, kershaw, \
                     gamma-psi, aux, identities, conjecture)"
                ))
            })
    }
}

/// Configuration for [`run_suite`].
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suites: BTreeSet<SuiteKind>,
    /// Upper index for the sequence-shaped suites (wallis, erf, ball).
    pub n_max: u64,
    /// Highest derivative order for alternating-sign certificates.
    pub k_max: u32,
    /// Points per scan grid.
    pub grid_points: usize,
    pub precision: PrecisionMode,
    /// Seed for the deterministic pair/abscissa sampling.
    pub seed: u64,
    /// Attach wall-clock durations to entries. Off by default so that
    /// equal configurations produce byte-identical reports.
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suites: SuiteKind::ALL.into_iter().collect(),
            n_max: 200,
            k_max: 6,
            grid_points: 64,
            precision: PrecisionMode::Double,
            seed: 20259,
            timings: false,
        }
    }
}

/// One verified claim inside a report.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub claim_id: String,
    /// Which statement family the claim instantiates.
    pub paper_anchor: String,
    pub parameters: BTreeMap<String, String>,
    pub verdict: Verdict,
    /// Signed margins; positive clears the claimed bound.
    pub margins: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<u64>,
}

/// Verdict tally over all entries.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub indeterminate: usize,
}

/// Complete result of a [`run_suite`] invocation.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tool_version: String,
    pub precision_mode: String,
    pub suite: Vec<SuiteEntry>,
    pub summary: Summary,
}

impl VerificationReport {
    /// Process exit code: 0 when nothing failed, 1 otherwise.
    /// Indeterminate verdicts (critical-regime pairs, advisory probes)
    /// do not fail a run.
    pub fn exit_code(&self) -> i32 {
        if self.summary.failed == 0 {
            0
        } else {
            1
        }
    }
}

fn fnum(v: f64) -> String {
    format!("{v}")
}

/// Folds a bound-check record into a suite entry. `param` names the
/// record's sweep parameter in the claim id and parameter map.
fn record_entry(rec: &BoundCheckRecord, anchor: &str, param: &str) -> SuiteEntry {
    let mut parameters = BTreeMap::new();
    parameters.insert(param.to_string(), fnum(rec.parameter));
    parameters.insert("value".into(), fnum(rec.value));
    if let Some(lo) = rec.lower {
        parameters.insert("lower".into(), fnum(lo));
    }
    if let Some(hi) = rec.upper {
        parameters.insert("upper".into(), fnum(hi));
    }
    if let Some(note) = &rec.note {
        parameters.insert("note".into(), note.clone());
    }
    SuiteEntry {
        claim_id: format!("{}[{}={}]", rec.claim_id, param, fnum(rec.parameter)),
        paper_anchor: anchor.to_string(),
        parameters,
        verdict: if rec.pass { Verdict::Pass } else { Verdict::Fail },
        margins: rec
            .margin_lower
            .iter()
            .chain(rec.margin_upper.iter())
            .copied()
            .collect(),
        runtime_ms: None,
    }
}

fn certificate_entry(cert: &cm::CmCertificate, anchor: &str, pair: &ShiftPair) -> SuiteEntry {
    let mut parameters = BTreeMap::new();
    parameters.insert("s".into(), fnum(pair.s()));
    parameters.insert("t".into(), fnum(pair.t()));
    parameters.insert("interval".into(), format!("({}, {})", cert.interval.0, cert.interval.1));
    parameters.insert("k_max".into(), cert.k_max.to_string());
    parameters.insert("grid_points".into(), cert.grid_points.to_string());
    parameters.insert("expected_sign".into(), cert.expected_sign.to_string());
    parameters.insert("worst_x".into(), fnum(cert.worst_x));
    SuiteEntry {
        claim_id: format!("{}[s={},t={}]", cert.function_id, pair.s(), pair.t()),
        paper_anchor: anchor.to_string(),
        parameters,
        verdict: cert.verdict,
        margins: cert.worst_margins.clone(),
        runtime_ms: None,
    }
}

/// Deterministic pair sample: `narrow` pairs with gap in (0.05, 0.95)
/// and `wide` pairs with gap in (1.05, 2.5), both with shifts in
/// [0, 1.5).
fn sample_pairs(seed: u64, narrow: usize, wide: usize) -> Vec<ShiftPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(narrow + wide);
    for i in 0..narrow + wide {
        let gap = if i < narrow {
            rng.gen_range(0.05..0.95)
        } else {
            rng.gen_range(1.05..2.5)
        };
        let s = rng.gen_range(0.0..1.5);
        pairs.push(ShiftPair::new(s, s + gap));
    }
    pairs
}

struct SuiteRunner {
    config: SuiteConfig,
    entries: Vec<SuiteEntry>,
}

impl SuiteRunner {
    fn push_batch(&mut self, started: Instant, batch: Vec<SuiteEntry>) {
        let elapsed = started.elapsed().as_millis() as u64;
        for mut entry in batch {
            if self.config.timings {
                entry.runtime_ms = Some(elapsed);
            }
            self.entries.push(entry);
        }
    }

    fn run(&mut self, kind: SuiteKind) -> Result<()> {
        let started = Instant::now();
        let batch = match kind {
            SuiteKind::Cm => self.cm_suite()?,
            SuiteKind::Wallis => self.wallis_suite(),
            SuiteKind::Erf => self.erf_suite()?,
            SuiteKind::Ball => self.ball_suite()?,
            SuiteKind::Kershaw => self.kershaw_suite()?,
            SuiteKind::GammaPsi => self.gamma_psi_suite()?,
            SuiteKind::Aux => self.aux_suite()?,
            SuiteKind::Identities => self.identities_suite()?,
            SuiteKind::Conjecture => self.conjecture_suite()?,
        };
        self.push_batch(started, batch);
        Ok(())
    }

    /// Alternating-sign certificates plus the matching shape claims,
    /// over fixed showcase pairs and a seeded sample of each regime.
    fn cm_suite(&self) -> Result<Vec<SuiteEntry>> {
        let cfg = &self.config;
        let mut pairs = vec![
            ShiftPair::new(0.0, 0.5),
            ShiftPair::new(0.0, 2.0),
            ShiftPair::new(0.5, 0.5),
        ];
        pairs.extend(sample_pairs(cfg.seed, 6, 6));
        let mut entries = Vec::new();
        for pair in &pairs {
            let interval = (-pair.alpha() + 0.1, 50.0);
            // Theta = gap^2 Delta vanishes identically on coincident
            // pairs; the live claim there is Delta's own alternation.
            let (target, anchor) = if pair.is_coincident() {
                (CmTarget::Delta, "delta-alternating-signs")
            } else {
                (CmTarget::Theta, "theta-alternating-signs")
            };
            let cert = cm::check_alternating_signs(
                target,
                pair,
                interval,
                cfg.k_max,
                cfg.grid_points,
                cfg.precision,
            )?;
            entries.push(certificate_entry(&cert, anchor, pair));

            let shape = apps::theta_monotonicity_check(
                MonotoneTarget::Pair(*pair),
                interval,
                cfg.grid_points,
                cfg.precision,
            )?;
            entries.push(record_entry(&shape, "z-shape", "gap"));
        }

        // Delta inherits Theta's sign pattern away from the critical gap.
        for pair in [ShiftPair::new(0.0, 0.5), ShiftPair::new(0.25, 2.0)] {
            let cert = cm::check_alternating_signs(
                CmTarget::Delta,
                &pair,
                (-pair.alpha() + 0.1, 50.0),
                cfg.k_max,
                cfg.grid_points,
                cfg.precision,
            )?;
            entries.push(certificate_entry(&cert, "delta-alternating-signs", &pair));
        }

        // Critical pair: identically zero, recorded as indeterminate.
        let critical = ShiftPair::new(0.0, 1.0);
        let cert = cm::check_alternating_signs(
            CmTarget::Theta,
            &critical,
            (0.1, 50.0),
            cfg.k_max,
            cfg.grid_points,
            cfg.precision,
        )?;
        entries.push(certificate_entry(&cert, "theta-alternating-signs", &critical));
        Ok(entries)
    }

    fn wallis_suite(&self) -> Vec<SuiteEntry> {
        apps::wallis_bounds_check(self.config.n_max)
            .iter()
            .map(|r| record_entry(r, "wallis-sharp-bounds", "n"))
            .collect()
    }

    fn erf_suite(&self) -> Result<Vec<SuiteEntry>> {
        Ok(apps::erf_bounds_check(self.config.n_max)?
            .iter()
            .map(|r| record_entry(r, "erf-sandwich", "n"))
            .collect())
    }

    fn ball_suite(&self) -> Result<Vec<SuiteEntry>> {
        Ok(apps::ball_ratio_check(self.config.n_max, self.config.precision)?
            .iter()
            .map(|r| record_entry(r, "ball-volume-ratio", "n"))
            .collect())
    }

    fn kershaw_suite(&self) -> Result<Vec<SuiteEntry>> {
        let s_grid: Vec<f64> = (1..=19).map(|i| i as f64 * 0.05).collect();
        let x_grid: Vec<f64> = (1..=50).map(f64::from).collect();
        Ok(apps::kershaw_check(&s_grid, &x_grid, self.config.precision)?
            .iter()
            .map(|r| record_entry(r, "kershaw-two-sided", "x"))
            .collect())
    }

    fn gamma_psi_suite(&self) -> Result<Vec<SuiteEntry>> {
        let mode = self.config.precision;
        let mut entries = Vec::new();
        let finite = cm::geometric_grid(1.05, 2.95, self.config.grid_points)?;
        for rec in apps::gamma_psi_bounds_check(1.0, Some(3.0), &finite, mode)? {
            entries.push(record_entry(&rec, "gamma-psi-symmetric[interval=(1,3)]", "x"));
        }
        let unbounded = cm::geometric_grid(1.1, 1e6, self.config.grid_points)?;
        for rec in apps::gamma_psi_bounds_check(1.0, None, &unbounded, mode)? {
            entries.push(record_entry(
                &rec,
                "gamma-psi-symmetric[interval=(1,inf)]",
                "x",
            ));
        }
        Ok(entries)
    }

    fn aux_suite(&self) -> Result<Vec<SuiteEntry>> {
        let x_grid = cm::geometric_grid(0.1, 50.0, self.config.grid_points)?;
        let pairs = [
            ShiftPair::new(0.0, 0.5),
            ShiftPair::new(0.0, 2.0),
            ShiftPair::new(0.5, 0.5),
        ];
        Ok(
            apps::auxiliary_inequality_checks(&x_grid, &pairs, self.config.precision)?
                .iter()
                .map(|r| record_entry(r, "auxiliary-inequalities", "x"))
                .collect(),
        )
    }

    /// Telescoping step identities plus far-field decay, sampled per
    /// regime; 250 abscissae over four pairs gives 1000 draws.
    fn identities_suite(&self) -> Result<Vec<SuiteEntry>> {
        let cfg = &self.config;
        let pairs = [
            ShiftPair::new(0.7, 0.7),
            ShiftPair::new(0.3, 0.8),
            ShiftPair::new(0.0, 2.3),
            ShiftPair::new(0.2, 0.2 + 5e-5),
        ];
        let mut entries = Vec::new();
        for (i, pair) in pairs.iter().enumerate() {
            let report =
                cm::check_step_identities(pair, 250, cfg.seed.wrapping_add(i as u64), cfg.precision)?;
            let mut parameters = BTreeMap::new();
            parameters.insert("s".into(), fnum(pair.s()));
            parameters.insert("t".into(), fnum(pair.t()));
            parameters.insert("samples".into(), report.samples.to_string());
            entries.push(SuiteEntry {
                claim_id: format!("step-identities[s={},t={}]", pair.s(), pair.t()),
                paper_anchor: "lambda-theta-recurrences".to_string(),
                parameters,
                verdict: if report.pass { Verdict::Pass } else { Verdict::Fail },
                margins: vec![
                    report.lambda_worst_abs,
                    report.theta_worst_rel,
                    report.decay_worst,
                ],
                runtime_ms: None,
            });
        }
        Ok(entries)
    }

    /// Advisory probe of the log-complete-monotonicity conjecture for
    /// the ratio power. Finite differences can only suggest, never
    /// certify, so a violation is recorded as indeterminate and is not
    /// counted as a failure.
    fn conjecture_suite(&self) -> Result<Vec<SuiteEntry>> {
        let cfg = &self.config;
        let k_max = cfg.k_max.clamp(1, 4);
        let mut pairs = vec![ShiftPair::new(0.0, 0.5), ShiftPair::new(0.0, 2.0)];
        pairs.extend(sample_pairs(cfg.seed.wrapping_add(77), 1, 1));
        let mut entries = Vec::new();
        for pair in &pairs {
            let interval = (-pair.alpha() + 0.5, 30.0);
            let cert = cm::probe_phi_lcm_conjecture(
                pair,
                interval,
                k_max,
                cfg.grid_points,
                cfg.precision,
            )?;
            let mut entry = certificate_entry(&cert, "phi-lcm-probe", pair);
            entry.parameters.insert("advisory".into(), "true".into());
            if entry.verdict == Verdict::Fail {
                entry.verdict = Verdict::Indeterminate;
            }
            entries.push(entry);
        }
        Ok(entries)
    }
}

/// Runs the selected suites and assembles the ordered report.
pub fn run_suite(config: SuiteConfig) -> Result<VerificationReport> {
    if config.suites.is_empty() {
        return Err(Error::Config("no suites selected".into()));
    }
    if config.n_max == 0 {
        return Err(Error::Config("n_max must be at least 1".into()));
    }
    if config.k_max > MAX_K {
        return Err(Error::Config(format!(
            "k_max {} exceeds the supported maximum {MAX_K}",
            config.k_max
        )));
    }
    if config.grid_points == 0 {
        return Err(Error::Config("grid_points must be at least 1".into()));
    }

    let precision_mode = config.precision.to_string();
    let mut runner = SuiteRunner {
        config,
        entries: Vec::new(),
    };
    for kind in SuiteKind::ALL {
        if runner.config.suites.contains(&kind) {
            runner.run(kind)?;
        }
    }

    let mut summary = Summary {
        total: runner.entries.len(),
        ..Summary::default()
    };
    for entry in &runner.entries {
        match entry.verdict {
            Verdict::Pass => summary.passed += 1,
            Verdict::Fail => summary.failed += 1,
            Verdict::Indeterminate => summary.indeterminate += 1,
        }
    }

    Ok(VerificationReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        precision_mode,
        suite: runner.entries,
        summary,
    })
}

/// Pretty JSON with a trailing newline; byte-identical for equal
/// reports.
pub fn to_json(report: &VerificationReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Io(format!("json encoding failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// One row per suite entry under a fixed header. Margins are joined
/// with `|`, parameters as `key=value` pairs joined with `;`.
pub fn to_csv(report: &VerificationReport) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "claim_id",
            "paper_anchor",
            "parameters",
            "verdict",
            "margins",
            "runtime_ms",
        ])
        .map_err(|e| Error::Io(format!("csv encoding failed: {e}")))?;
    for entry in &report.suite {
        let parameters = entry
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        let margins = entry
            .margins
            .iter()
            .map(|m| fnum(*m))
            .collect::<Vec<_>>()
            .join("|");
        let verdict = match entry.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Indeterminate => "indeterminate",
        };
        let runtime = entry.runtime_ms.map(|m| m.to_string()).unwrap_or_default();
        writer
            .write_record([
                entry.claim_id.as_str(),
                entry.paper_anchor.as_str(),
                parameters.as_str(),
                verdict,
                margins.as_str(),
                runtime.as_str(),
            ])
            .map_err(|e| Error::Io(format!("csv encoding failed: {e}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Io(format!("csv encoding failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(format!("csv encoding failed: {e}")))
}

/// Human-readable rollup: configuration echo, verdict counts, and one
/// line per non-passing claim.
pub fn to_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "psidiff {} (precision: {})\n",
        report.tool_version, report.precision_mode
    ));
    let s = report.summary;
    out.push_str(&format!(
        "claims: {} total, {} passed, {} failed, {} indeterminate\n",
        s.total, s.passed, s.failed, s.indeterminate
    ));
    for entry in &report.suite {
        if entry.verdict != Verdict::Pass {
            let worst = entry
                .margins
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            out.push_str(&format!(
                "  {}: {} (anchor: {}, worst margin: {:e})\n",
                entry.claim_id,
                match entry.verdict {
                    Verdict::Fail => "FAIL",
                    Verdict::Indeterminate => "indeterminate",
                    Verdict::Pass => unreachable!(),
                },
                entry.paper_anchor,
                worst,
            ));
        }
    }
    if s.failed == 0 {
        out.push_str("verdict: pass\n");
    } else {
        out.push_str("verdict: FAIL\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_config(suites: &[SuiteKind]) -> SuiteConfig {
        SuiteConfig {
            suites: suites.iter().copied().collect(),
            n_max: 5,
            k_max: 3,
            grid_points: 12,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn wallis_suite_at_n_one_yields_two_sharp_passes() {
        let mut config = quick_config(&[SuiteKind::Wallis]);
        config.n_max = 1;
        let report = run_suite(config).unwrap();
        assert_eq!(report.suite.len(), 2);
        for entry in &report.suite {
            assert_eq!(entry.verdict, Verdict::Pass);
            assert!(entry.parameters.contains_key("note"), "{entry:?}");
            assert_eq!(entry.margins[0], 0.0, "sharp side must be exact");
        }
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn critical_pair_is_indeterminate_not_failed() {
        let report = run_suite(quick_config(&[SuiteKind::Cm])).unwrap();
        let critical = report
            .suite
            .iter()
            .find(|e| e.claim_id == "theta[s=0,t=1]")
            .expect("critical showcase entry");
        assert_eq!(critical.verdict, Verdict::Indeterminate);
        assert_eq!(report.summary.failed, 0);
        assert!(report.summary.indeterminate >= 1);
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn summary_counts_match_entry_tally() {
        let report = run_suite(quick_config(&[
            SuiteKind::Wallis,
            SuiteKind::Erf,
            SuiteKind::Identities,
        ]))
        .unwrap();
        let s = report.summary;
        assert_eq!(s.total, report.suite.len());
        let passed = report
            .suite
            .iter()
            .filter(|e| e.verdict == Verdict::Pass)
            .count();
        assert_eq!(s.passed, passed);
        assert_eq!(s.total, s.passed + s.failed + s.indeterminate);
    }

    #[test]
    fn json_round_trips() {
        let report = run_suite(quick_config(&[SuiteKind::Ball])).unwrap();
        let json = to_json(&report).unwrap();
        let parsed: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn identical_configs_serialize_identically() {
        let a = run_suite(quick_config(&[SuiteKind::Cm, SuiteKind::Aux])).unwrap();
        let b = run_suite(quick_config(&[SuiteKind::Cm, SuiteKind::Aux])).unwrap();
        assert_eq!(to_json(&a).unwrap(), to_json(&b).unwrap());
        assert_eq!(to_csv(&a).unwrap(), to_csv(&b).unwrap());
    }

    #[test]
    fn csv_has_one_row_per_entry_plus_header() {
        let report = run_suite(quick_config(&[SuiteKind::Erf])).unwrap();
        let csv = to_csv(&report).unwrap();
        assert_eq!(csv.lines().count(), report.suite.len() + 1);
        assert!(csv.starts_with("claim_id,paper_anchor,"));
    }

    #[test]
    fn timings_attach_only_when_requested() {
        let mut config = quick_config(&[SuiteKind::Wallis]);
        config.timings = true;
        let timed = run_suite(config).unwrap();
        assert!(timed.suite.iter().all(|e| e.runtime_ms.is_some()));
        let untimed = run_suite(quick_config(&[SuiteKind::Wallis])).unwrap();
        assert!(untimed.suite.iter().all(|e| e.runtime_ms.is_none()));
        assert!(!to_json(&untimed).unwrap().contains("runtime_ms"));
    }

    #[test]
    fn conjecture_probe_cannot_fail_the_run() {
        let report = run_suite(quick_config(&[SuiteKind::Conjecture])).unwrap();
        for entry in &report.suite {
            assert_ne!(entry.verdict, Verdict::Fail, "{entry:?}");
            assert_eq!(entry.parameters.get("advisory").map(String::as_str), Some("true"));
        }
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn bad_configurations_are_rejected() {
        let mut config = quick_config(&[]);
        assert!(matches!(run_suite(config.clone()), Err(Error::Config(_))));
        config = quick_config(&[SuiteKind::Wallis]);
        config.n_max = 0;
        assert!(matches!(run_suite(config.clone()), Err(Error::Config(_))));
        config = quick_config(&[SuiteKind::Cm]);
        config.k_max = MAX_K + 1;
        assert!(matches!(run_suite(config.clone()), Err(Error::Config(_))));
        config = quick_config(&[SuiteKind::Cm]);
        config.grid_points = 0;
        assert!(matches!(run_suite(config), Err(Error::Config(_))));
    }

    #[test]
    fn suite_names_round_trip() {
        for kind in SuiteKind::ALL {
            assert_eq!(kind.name().parse::<SuiteKind>().unwrap(), kind);
        }
        assert!("wallace".parse::<SuiteKind>().is_err());
    }

    #[test]
    fn full_default_run_passes_everything() {
        let config = SuiteConfig {
            n_max: 50,
            grid_points: 24,
            ..SuiteConfig::default()
        };
        let report = run_suite(config).unwrap();
        assert_eq!(report.summary.failed, 0, "{}", to_text(&report));
        assert!(report.summary.passed > 0);
        assert_eq!(report.exit_code(), 0);
        let text = to_text(&report);
        assert!(text.contains("verdict: pass"));
    }
}
