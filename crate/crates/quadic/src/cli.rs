//! Composition layer behind the command-line interface: self-contained
//! analysis records, deterministic JSON/CSV serialization, and the batch
//! scan over valid primes.
//!
//! Records are reproducible from (p, theta) alone: big integers serialize as
//! decimal strings, keys are emitted sorted, and no timestamp is attached
//! unless explicitly requested.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adic::{diophantine_conditions, AdicProfile, ConditionFlag, RaaThreshold};
use crate::cyclotomy::{
    build_system, primitive_root, quartic_decomposition, validate_prime, CyclotomicSystem,
};
use crate::error::Result;
use crate::raa::AttackRecord;
use crate::seqgen::{binary_component, quaternary_sequence};
use crate::verify::{autocorrelation_table, verify_all, VerificationReport};

/// Which of the sixteen sequences an invocation touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqSelect {
    All,
    One(usize),
}

impl SeqSelect {
    pub fn parse(text: &str) -> Option<SeqSelect> {
        if text.eq_ignore_ascii_case("all") {
            return Some(SeqSelect::All);
        }
        text.parse::<usize>().ok().map(SeqSelect::One)
    }

    fn indices(&self) -> Vec<usize> {
        match self {
            SeqSelect::All => (1..=16).collect(),
            SeqSelect::One(k) => vec![*k],
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub theta: Option<u64>,
    pub seq: SeqSelect,
    pub verify: bool,
    pub raa: bool,
    pub autocorr: bool,
    pub stamp: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            theta: None,
            seq: SeqSelect::All,
            verify: false,
            raa: false,
            autocorr: false,
            stamp: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCandidateJson {
    pub label: String,
    pub value: u64,
    pub divides: bool,
    pub square_divides: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReportJson {
    pub candidates: Vec<FactorCandidateJson>,
    /// Remainder of the gcd after dividing out all candidates; a value other
    /// than "1" is a potential counterexample and is surfaced, not hidden.
    pub cofactor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceEntry {
    pub k: usize,
    pub components: String,
    pub u4: String,
    pub gcd: String,
    pub complexity: u64,
    pub bound: u64,
    pub meets_threshold: bool,
    pub factor_report: FactorReportJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureJson {
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationJson {
    pub all_ok: bool,
    pub eta_products: Vec<Vec<bool>>,
    pub h_square: bool,
    pub product_congruences: Vec<bool>,
    pub delta_used: Vec<u64>,
    pub failures: Vec<FailureJson>,
}

impl From<&VerificationReport> for VerificationJson {
    fn from(report: &VerificationReport) -> Self {
        VerificationJson {
            all_ok: report.all_ok(),
            eta_products: report
                .eta_products
                .iter()
                .map(|row| row.to_vec())
                .collect(),
            h_square: report.h_square,
            product_congruences: report.product_congruences.to_vec(),
            delta_used: report.delta_used.to_vec(),
            failures: report
                .failures
                .iter()
                .map(|f| FailureJson {
                    identity: f.identity.clone(),
                    lhs: f.lhs.to_string(),
                    rhs: f.rhs.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutocorrelationJson {
    pub k: usize,
    /// [re, im] per shift tau = 0..p-1.
    pub values: Vec<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackJson {
    pub k: usize,
    pub recovered_at_prefix: Option<usize>,
    pub max_prefix_tested: usize,
    pub complexity: u64,
    pub threshold: RaaThreshold,
}

/// One self-contained analysis of a prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub p: u64,
    pub theta: u64,
    pub x: i64,
    pub y: i64,
    pub raa_threshold: RaaThreshold,
    pub sequences: Vec<SequenceEntry>,
    pub diophantine: Vec<ConditionFlag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub autocorrelation: Option<Vec<AutocorrelationJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attacks: Option<Vec<AttackJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unix_time: Option<u64>,
}

fn factor_report_json(profile: &AdicProfile) -> FactorReportJson {
    FactorReportJson {
        candidates: profile
            .factor_report
            .candidates
            .iter()
            .map(|c| FactorCandidateJson {
                label: c.label.clone(),
                value: c.value,
                divides: c.divides,
                square_divides: c.square_divides,
            })
            .collect(),
        cofactor: profile.factor_report.cofactor.to_string(),
    }
}

/// Composes class construction, sequence generation, and the exact adic
/// profile (plus the optional verification, autocorrelation, and attack
/// stages) into one record.
pub fn run_analyze(p: u64, options: &AnalyzeOptions) -> Result<AnalysisRecord> {
    let prime = validate_prime(p)?;
    let theta = match options.theta {
        Some(theta) => theta,
        None => primitive_root(&prime),
    };
    let sys = build_system(prime, theta)?;
    let dec = quartic_decomposition(&sys)?;

    let mut sequences = Vec::new();
    let mut attacks = Vec::new();
    let mut autocorr = Vec::new();
    for k in options.seq.indices() {
        let u = quaternary_sequence(&sys, k)?;
        let profile = AdicProfile::compute(&u, &prime)?;
        sequences.push(SequenceEntry {
            k,
            components: u.spec().describe(),
            u4: profile.u4.to_string(),
            gcd: profile.gcd_value.to_string(),
            complexity: profile.complexity,
            bound: profile.bound,
            meets_threshold: profile.meets_threshold(),
            factor_report: factor_report_json(&profile),
        });
        if options.raa {
            let record = AttackRecord::for_sequence(&u);
            attacks.push(AttackJson {
                k,
                recovered_at_prefix: record.recovered_at_prefix,
                max_prefix_tested: record.max_prefix_tested,
                complexity: record.complexity,
                threshold: record.threshold,
            });
        }
        if options.autocorr {
            autocorr.push(AutocorrelationJson {
                k,
                values: autocorrelation_table(u.symbols())
                    .iter()
                    .map(|g| (g.re, g.im))
                    .collect(),
            });
        }
    }

    Ok(AnalysisRecord {
        p,
        theta,
        x: dec.x(),
        y: dec.y(),
        raa_threshold: RaaThreshold::for_prime(&prime),
        sequences,
        diophantine: diophantine_conditions(&prime, &dec),
        verification: options.verify.then(|| (&verify_all(&sys, &dec)).into()),
        autocorrelation: options.autocorr.then_some(autocorr),
        attacks: options.raa.then_some(attacks),
        unix_time: options.stamp.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        }),
    })
}

/// Serializes with sorted keys and a trailing newline; byte-identical for
/// identical inputs.
pub fn record_to_json<T: Serialize>(record: &T) -> String {
    let value = serde_json::to_value(record).expect("records are plain data");
    let mut text = serde_json::to_string_pretty(&value).expect("valid JSON value");
    text.push('\n');
    text
}

pub const CSV_HEADER: &str = "p,theta,x,y,k,complexity,bound,gcd,threshold_ok";

/// One CSV row per analyzed sequence, matching [`CSV_HEADER`].
pub fn record_csv_rows(record: &AnalysisRecord) -> Vec<String> {
    record
        .sequences
        .iter()
        .map(|s| {
            format!(
                "{},{},{},{},{},{},{},{},{}",
                record.p,
                record.theta,
                record.x,
                record.y,
                s.k,
                s.complexity,
                s.bound,
                s.gcd,
                s.meets_threshold
            )
        })
        .collect()
}

/// Per-prime digest printed by the scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub p: u64,
    pub theta: u64,
    pub min_complexity: u64,
    pub max_bound_slack: u64,
    /// min over k of 6 * complexity - (p - 16); positive iff every sequence
    /// clears the attack threshold.
    pub threshold_margin: i64,
}

impl SummaryRow {
    pub fn from_record(record: &AnalysisRecord) -> Self {
        SummaryRow {
            p: record.p,
            theta: record.theta,
            min_complexity: record
                .sequences
                .iter()
                .map(|s| s.complexity)
                .min()
                .unwrap_or(0),
            max_bound_slack: record
                .sequences
                .iter()
                .map(|s| s.complexity - s.bound)
                .max()
                .unwrap_or(0),
            threshold_margin: record
                .sequences
                .iter()
                .map(|s| 6 * s.complexity as i64 - (record.p as i64 - 16))
                .min()
                .unwrap_or(0),
        }
    }
}

/// Result of a batch scan, ordered by p.
#[derive(Debug, Clone)]
pub struct ScanOutput {
    pub records: Vec<AnalysisRecord>,
    pub summary: Vec<SummaryRow>,
    pub csv: String,
}

/// All valid primes up to the limit.
pub fn valid_primes_upto(max_p: u64) -> Vec<u64> {
    (5..=max_p)
        .step_by(8)
        .filter(|&p| validate_prime(p).is_ok())
        .collect()
}

/// Analyzes every valid prime <= max_p. `jobs` bounds the worker pool
/// (0 = automatic); output order is by p regardless of evaluation order.
pub fn run_scan(max_p: u64, jobs: usize, options: &AnalyzeOptions) -> Result<ScanOutput> {
    let primes = valid_primes_upto(max_p);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("worker pool construction cannot fail for sane job counts");
    let mut records = pool.install(|| {
        primes
            .par_iter()
            .map(|&p| run_analyze(p, options))
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by_key(|r| r.p);

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for record in &records {
        for row in record_csv_rows(record) {
            csv.push_str(&row);
            csv.push('\n');
        }
    }
    let summary = records.iter().map(SummaryRow::from_record).collect();
    Ok(ScanOutput {
        records,
        summary,
        csv,
    })
}

/// Everything `dump` prints about one sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpReport {
    pub p: u64,
    pub theta: u64,
    pub k: usize,
    pub symbols: Vec<u8>,
    pub components: String,
    /// (component label, sorted support residues) for both components.
    pub supports: Vec<(String, Vec<u64>)>,
}

pub fn run_dump(p: u64, k: usize, theta: Option<u64>) -> Result<DumpReport> {
    let prime = validate_prime(p)?;
    let theta = theta.unwrap_or_else(|| primitive_root(&prime));
    let sys = build_system(prime, theta)?;
    let u = quaternary_sequence(&sys, k)?;
    let supports = [u.spec().first, u.spec().second]
        .iter()
        .map(|&name| (name.label().to_string(), support_residues(&sys, name)))
        .collect();
    Ok(DumpReport {
        p,
        theta,
        k,
        symbols: u.symbols().to_vec(),
        components: u.spec().describe(),
        supports,
    })
}

fn support_residues(sys: &CyclotomicSystem, name: crate::seqgen::ComponentName) -> Vec<u64> {
    binary_component(sys, name)
        .bits()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(t, _)| t as u64)
        .collect()
}
