//! Command implementations behind the `circnorm` binary.
//!
//! Each command returns an [`OutputRecord`]; the binary only parses flags,
//! prints the record, and exits with [`OutputRecord::exit_code`].

pub mod decimal;
pub mod record;

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::{BigInt, ToBigInt};

use crate::circulant::CirculantMatrix;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::sequences::{self, SequenceId};
use crate::spectral::{self, Method, MethodStatus};

pub use record::{
    BenchResult, BenchRow, ErrorRecord, NormResult, OutputRecord, Payload, SeqResult,
    SequenceVerification, VerifyResult, VerifyRow,
};

/// Closed-form prefix sum used by `verify`; swappable so tests can inject a bad one.
pub type ClosedFormFn = dyn Fn(&SequenceId, usize) -> Result<BigInt> + Sync;

fn record(command: &str, parameters: &[(&str, String)], results: Payload) -> OutputRecord {
    OutputRecord {
        command: command.to_string(),
        parameters: parameters
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect::<BTreeMap<_, _>>(),
        results,
    }
}

fn error_payload(e: &Error) -> Payload {
    Payload::Error(ErrorRecord::from(e))
}

pub fn cmd_seq(id: &SequenceId, n: usize, with_sum: bool) -> OutputRecord {
    let params = [
        ("id", id.to_string()),
        ("n", n.to_string()),
        ("sum", with_sum.to_string()),
    ];
    if n == 0 {
        return record("seq", &params, error_payload(&Error::ZeroLength));
    }
    let terms = sequences::prefix(id, n);
    let mut result = SeqResult {
        sequence: id.to_string(),
        terms: terms.iter().map(ToString::to_string).collect(),
        sum: None,
        closed_form_sum: None,
        closed_form_matches: None,
    };
    if with_sum {
        let sum: BigInt = terms.iter().sum();
        if id.is_builtin() {
            match sequences::closed_form_sum(id, n) {
                Ok(closed) => {
                    result.closed_form_matches = Some(closed == sum);
                    result.closed_form_sum = Some(closed.to_string());
                }
                Err(e) => return record("seq", &params, error_payload(&e)),
            }
        }
        result.sum = Some(sum.to_string());
    }
    record("seq", &params, Payload::Seq(result))
}

pub fn cmd_norm(id: &SequenceId, n: usize, methods: &[Method], rel_tol: f64) -> OutputRecord {
    let params = [
        ("id", id.to_string()),
        ("n", n.to_string()),
        (
            "methods",
            methods.iter().map(|m| m.name()).collect::<Vec<_>>().join(","),
        ),
        ("rel_tol", rel_tol.to_string()),
    ];
    let results = match CirculantMatrix::from_sequence(id, n) {
        Ok(c) => {
            let report =
                spectral::compare_methods_with(&c, methods, rel_tol, Execution::default());
            Payload::Norm(NormResult {
                sequence: id.to_string(),
                report,
            })
        }
        Err(e) => error_payload(&e),
    };
    record("norm", &params, results)
}

pub fn cmd_verify(targets: &[SequenceId], n_max: usize, rel_tol: f64) -> OutputRecord {
    cmd_verify_with(targets, n_max, rel_tol, &sequences::closed_form_sum)
}

/// For each sequence and each `1 ≤ n ≤ n_max`: checks the closed-form sum
/// against direct summation, evaluates the published identity (informational),
/// and cross-checks all norm methods within their guards.
pub fn cmd_verify_with(
    targets: &[SequenceId],
    n_max: usize,
    rel_tol: f64,
    closed_form: &ClosedFormFn,
) -> OutputRecord {
    let params = [
        (
            "id",
            targets
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("n_max", n_max.to_string()),
        ("rel_tol", rel_tol.to_string()),
    ];
    if n_max == 0 {
        return record("verify", &params, error_payload(&Error::ZeroLength));
    }

    let mut findings = Vec::new();
    let mut sequences_out = Vec::new();
    for id in targets {
        let prefix = sequences::prefix(id, n_max);
        let mut direct = Vec::with_capacity(n_max);
        let mut acc = BigInt::from(0);
        for t in &prefix {
            acc += t;
            direct.push(acc.clone());
        }
        let audit = if id.is_builtin() {
            match sequences::audit_published_identity(id, n_max) {
                Ok(a) => Some(a),
                Err(e) => return record("verify", &params, error_payload(&e)),
            }
        } else {
            None
        };

        let rows: Vec<VerifyRow> = exec::map_indexed(Execution::default(), n_max, |i| {
            let n = i + 1;
            let direct_sum = &direct[i];
            let (closed, closed_matches) = if id.is_builtin() {
                match closed_form(id, n) {
                    Ok(v) => {
                        let matches = &v == direct_sum;
                        (Some(v.to_string()), Some(matches))
                    }
                    Err(e) => (Some(format!("error: {e}")), Some(false)),
                }
            } else {
                (None, None)
            };
            let published = audit.as_ref().map(|a| &a.rows[i]);
            let mut row = VerifyRow {
                n,
                direct_sum: direct_sum.to_string(),
                closed_form: closed,
                closed_form_matches: closed_matches,
                published: published.map(|p| p.published.to_string()),
                published_matches: published.map(|p| p.matches),
                methods: Vec::new(),
                max_gap: 0.0,
                agrees: false,
                error: None,
            };
            match CirculantMatrix::from_signed(&prefix[..n]) {
                Ok(c) => {
                    let report = spectral::compare_methods_with(
                        &c,
                        &Method::ALL,
                        rel_tol,
                        Execution::Sequential,
                    );
                    row.methods = report.computed().collect();
                    row.max_gap = report.max_pairwise_relative_gap;
                    row.agrees = report.agrees;
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        });

        let identity_checked = rows.iter().filter(|r| r.closed_form_matches.is_some()).count();
        let identity_matches = rows
            .iter()
            .filter(|r| r.closed_form_matches == Some(true))
            .count();
        let published_matches = audit.as_ref().map(|a| a.match_count());
        if let Some(pm) = published_matches {
            if pm < n_max {
                findings.push(format!(
                    "{}: published sum identity matches direct summation at {pm}/{n_max} values of n; \
                     shipped closed form matches {identity_matches}/{identity_checked}",
                    id.name()
                ));
            }
        }
        sequences_out.push(SequenceVerification {
            sequence: id.to_string(),
            identity_checked,
            identity_matches,
            published_matches,
            norm_checked: rows.len(),
            norm_agreements: rows.iter().filter(|r| r.agrees).count(),
            rows,
        });
    }

    let passed = sequences_out.iter().all(|s| {
        s.identity_matches == s.identity_checked && s.norm_agreements == s.norm_checked
    });
    record(
        "verify",
        &params,
        Payload::Verify(VerifyResult {
            n_max,
            rel_tol,
            passed,
            findings,
            sequences: sequences_out,
        }),
    )
}

/// Median wall time of each norm method at each order.
pub fn cmd_bench(id: &SequenceId, orders: &[usize], reps: usize) -> OutputRecord {
    let params = [
        ("id", id.to_string()),
        (
            "n",
            orders
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("reps", reps.to_string()),
    ];
    if reps == 0 || orders.is_empty() {
        return record("bench", &params, error_payload(&Error::ZeroLength));
    }
    let mut rows = Vec::new();
    for &n in orders {
        let c = match CirculantMatrix::from_sequence(id, n) {
            Ok(c) => c,
            Err(e) => return record("bench", &params, error_payload(&e)),
        };
        let report = spectral::compare_methods(&c, spectral::DEFAULT_REL_TOL);
        for result in &report.methods {
            let median_ns = (result.status == MethodStatus::Ok)
                .then(|| median_time_ns(reps, || run_method(&c, result.method)));
            rows.push(BenchRow {
                n,
                method: result.method,
                status: result.status.clone(),
                value: result.value,
                median_ns,
                agrees: report.agrees,
            });
        }
    }
    record(
        "bench",
        &params,
        Payload::Bench(BenchResult {
            sequence: id.to_string(),
            reps,
            rows,
        }),
    )
}

fn run_method(c: &CirculantMatrix, method: Method) {
    match method {
        Method::Sum => {
            std::hint::black_box(spectral::spectral_norm_sum(c).to_bigint());
        }
        Method::Dft => {
            let _ = std::hint::black_box(spectral::spectral_norm_dft(c));
        }
        Method::Power => {
            let _ = std::hint::black_box(spectral::spectral_norm_power(
                c,
                spectral::DEFAULT_REL_TOL,
                spectral::default_max_iter(c.order()),
            ));
        }
    }
}

fn median_time_ns(reps: usize, mut f: impl FnMut()) -> u64 {
    let mut samples: Vec<u64> = (0..reps)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_nanos() as u64
        })
        .collect();
    samples.sort_unstable();
    samples[samples.len() / 2]
}
