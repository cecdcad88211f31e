use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::spectral::{Method, MethodStatus, NormReport};

/// One invocation's output. Exact integers are decimal strings throughout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub results: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Payload {
    Seq(SeqResult),
    Norm(NormResult),
    Verify(VerifyResult),
    Bench(BenchResult),
    Error(ErrorRecord),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeqResult {
    pub sequence: String,
    pub terms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sum: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form_sum: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form_matches: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub sequence: String,
    pub report: NormReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyResult {
    pub n_max: usize,
    pub rel_tol: f64,
    pub passed: bool,
    pub findings: Vec<String>,
    pub sequences: Vec<SequenceVerification>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceVerification {
    pub sequence: String,
    pub identity_checked: usize,
    pub identity_matches: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published_matches: Option<usize>,
    pub norm_checked: usize,
    pub norm_agreements: usize,
    pub rows: Vec<VerifyRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub n: usize,
    pub direct_sum: String,
    pub closed_form: Option<String>,
    pub closed_form_matches: Option<bool>,
    pub published: Option<String>,
    pub published_matches: Option<bool>,
    pub methods: Vec<Method>,
    pub max_gap: f64,
    pub agrees: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub sequence: String,
    pub reps: usize,
    pub rows: Vec<BenchRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub method: Method,
    pub status: MethodStatus,
    pub value: Option<f64>,
    /// Median wall time in nanoseconds; `None` when the method was skipped.
    pub median_ns: Option<u64>,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub error: String,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        let error = match e {
            Error::InvalidSpec(_) => "invalid_spec",
            Error::UnsupportedSequence(_) => "unsupported_sequence",
            Error::ZeroLength => "zero_length",
            Error::EmptyMatrix => "empty_matrix",
            Error::NegativeEntry { .. } => "negative_entry",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::PrecisionLoss { .. } => "precision_loss",
            Error::NoConvergence(_) => "no_convergence",
        };
        Self {
            error: error.to_string(),
            message: e.to_string(),
        }
    }
}

impl OutputRecord {
    /// Process exit code: 1 on errors, failed verification, or disagreement.
    pub fn exit_code(&self) -> i32 {
        let ok = match &self.results {
            Payload::Seq(s) => s.closed_form_matches != Some(false),
            Payload::Norm(n) => n.report.agrees,
            Payload::Verify(v) => v.passed,
            Payload::Bench(b) => b.rows.iter().all(|r| r.agrees),
            Payload::Error(_) => false,
        };
        if ok {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records contain only finite floats")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// CSV table for `verify` and `bench`; `None` for other payloads.
    pub fn to_csv(&self) -> Option<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.results {
            Payload::Verify(v) => {
                for s in &v.sequences {
                    for r in &s.rows {
                        w.serialize(VerifyCsvRow {
                            sequence: &s.sequence,
                            n: r.n,
                            direct_sum: &r.direct_sum,
                            closed_form: r.closed_form.as_deref(),
                            closed_form_matches: r.closed_form_matches,
                            published: r.published.as_deref(),
                            published_matches: r.published_matches,
                            methods: r
                                .methods
                                .iter()
                                .map(|m| m.name())
                                .collect::<Vec<_>>()
                                .join("+"),
                            max_gap: r.max_gap,
                            agrees: r.agrees,
                        })
                        .ok()?;
                    }
                }
            }
            Payload::Bench(b) => {
                for r in &b.rows {
                    let (status, reason) = match &r.status {
                        MethodStatus::Ok => ("ok", None),
                        MethodStatus::Skipped(why) => ("skipped", Some(why.as_str())),
                        MethodStatus::Failed(why) => ("failed", Some(why.as_str())),
                    };
                    w.serialize(BenchCsvRow {
                        sequence: &b.sequence,
                        n: r.n,
                        method: r.method.name(),
                        status,
                        value: r.value,
                        median_ns: r.median_ns,
                        agrees: r.agrees,
                        reason,
                    })
                    .ok()?;
                }
            }
            _ => return None,
        }
        String::from_utf8(w.into_inner().ok()?).ok()
    }
}

#[derive(Serialize)]
struct VerifyCsvRow<'a> {
    sequence: &'a str,
    n: usize,
    direct_sum: &'a str,
    closed_form: Option<&'a str>,
    closed_form_matches: Option<bool>,
    published: Option<&'a str>,
    published_matches: Option<bool>,
    methods: String,
    max_gap: f64,
    agrees: bool,
}

#[derive(Serialize)]
struct BenchCsvRow<'a> {
    sequence: &'a str,
    n: usize,
    method: &'a str,
    status: &'a str,
    value: Option<f64>,
    median_ns: Option<u64>,
    agrees: bool,
    reason: Option<&'a str>,
}
