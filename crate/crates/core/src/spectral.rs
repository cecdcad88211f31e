//! Spectral norm of a nonnegative circulant by three independent routes.
//!
//! * `sum`: the entry sum `Σ c_j`, exact. For a nonnegative circulant the
//!   all-ones vector is an eigenvector with eigenvalue `Σ c_j`, circulants are
//!   normal, and no eigenvalue can exceed `Σ c_j` in modulus, so this is `‖C‖₂`.
//! * `dft`: `max_k |λ_k|` from the DFT spectrum (normal ⇒ norm = radius).
//! * `power`: `√λ_max(CᵀC)` by power iteration on the dense Gram matrix.
//!
//! [`compare_methods`] runs the applicable routes and reports their spread.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::circulant::{CirculantMatrix, EXACT_F64_BITS};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};

/// Entries must stay below `2^GRAM_ENTRY_BITS` for the power route.
pub const GRAM_ENTRY_BITS: u32 = 26;

pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Iteration cap used when none is given: `50·n + 1000`.
pub fn default_max_iter(n: usize) -> usize {
    50 * n + 1000
}

pub fn spectral_norm_sum(c: &CirculantMatrix) -> BigUint {
    c.entry_sum()
}

pub fn spectral_radius(c: &CirculantMatrix) -> Result<f64> {
    Ok(c.eigenvalues_dft()?.radius())
}

pub fn spectral_norm_dft(c: &CirculantMatrix) -> Result<f64> {
    spectral_radius(c)
}

/// `CᵀC` in exact integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    n: usize,
    entries: Vec<u128>,
}

impl GramMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u128 {
        self.entries[i * self.n + j]
    }

    pub fn to_f64(&self) -> Result<Vec<f64>> {
        let limit = 1u128 << EXACT_F64_BITS;
        self.entries
            .iter()
            .enumerate()
            .map(|(index, &g)| {
                if g > limit {
                    Err(Error::PrecisionLoss {
                        what: "Gram entry",
                        index,
                        limit_bits: EXACT_F64_BITS,
                    })
                } else {
                    Ok(g as f64)
                }
            })
            .collect()
    }
}

pub fn gram_matrix(c: &CirculantMatrix) -> Result<GramMatrix> {
    gram_matrix_with(c, Execution::default())
}

/// Forms `G = CᵀC` exactly; requires every entry below `2^26`.
///
/// `G[i][j] = Σ_k c_{(i−k) mod n}·c_{(j−k) mod n}`.
pub fn gram_matrix_with(c: &CirculantMatrix, exec: Execution) -> Result<GramMatrix> {
    let row: Vec<u128> = c
        .to_f64_row(GRAM_ENTRY_BITS)?
        .into_iter()
        .map(|x| x as u128)
        .collect();
    let n = row.len();
    // c_{(i−k) mod n} = doubled[i + n − k] for 0 ≤ k < n.
    let doubled: Vec<u128> = row.iter().chain(&row).copied().collect();
    let rows = exec::map_indexed(exec, n, |i| {
        let col_i = &doubled[i + 1..=i + n];
        (0..n)
            .map(|j| {
                let col_j = &doubled[j + 1..=j + n];
                col_i.iter().zip(col_j).map(|(a, b)| a * b).sum::<u128>()
            })
            .collect::<Vec<_>>()
    });
    Ok(GramMatrix {
        n,
        entries: rows.into_iter().flatten().collect(),
    })
}

/// Outcome of a power iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerEstimate {
    /// `√θ` for the final Rayleigh quotient `θ`.
    pub value: f64,
    pub iterations: usize,
    /// `‖Gv − θv‖₂ / θ` at the final iterate.
    pub residual: f64,
    pub converged: bool,
}

pub fn spectral_norm_power(
    c: &CirculantMatrix,
    rel_tol: f64,
    max_iter: usize,
) -> Result<PowerEstimate> {
    spectral_norm_power_with(c, rel_tol, max_iter, Execution::default())
}

pub fn spectral_norm_power_with(
    c: &CirculantMatrix,
    rel_tol: f64,
    max_iter: usize,
    exec: Execution,
) -> Result<PowerEstimate> {
    let gram = gram_matrix_with(c, exec)?;
    let g = gram.to_f64()?;
    let estimate = dominant_eigenvalue_with(&g, gram.order(), rel_tol, max_iter, exec);
    let estimate = PowerEstimate {
        value: estimate.value.max(0.0).sqrt(),
        ..estimate
    };
    if estimate.converged {
        Ok(estimate)
    } else {
        Err(Error::NoConvergence(estimate))
    }
}

/// Power iteration on a dense symmetric positive semidefinite `n×n` matrix
/// (row-major), seeded with the normalized all-ones vector.
///
/// Stops once the Rayleigh quotient's relative change drops below `rel_tol`
/// and the residual `‖Gv − θv‖/θ` is at most `10·rel_tol`. The returned
/// `value` is `θ` itself, not its square root.
pub fn dominant_eigenvalue_with(
    g: &[f64],
    n: usize,
    rel_tol: f64,
    max_iter: usize,
    exec: Execution,
) -> PowerEstimate {
    assert_eq!(g.len(), n * n, "matrix must be n×n");
    let matvec = |v: &[f64]| -> Vec<f64> {
        exec::map_indexed(exec, n, |i| {
            g[i * n..(i + 1) * n]
                .iter()
                .zip(v)
                .map(|(a, b)| a * b)
                .sum()
        })
    };
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut w = matvec(&v);
    let mut theta = dot(&v, &w);

    for iter in 1..=max_iter {
        let norm = dot(&w, &w).sqrt();
        if norm == 0.0 {
            return PowerEstimate {
                value: 0.0,
                iterations: iter,
                residual: 0.0,
                converged: true,
            };
        }
        v.iter_mut().zip(&w).for_each(|(vi, wi)| *vi = wi / norm);
        w = matvec(&v);
        let next = dot(&v, &w);
        let residual = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - next * vi).powi(2))
            .sum::<f64>()
            .sqrt()
            / next;
        let change = (next - theta).abs() / next;
        theta = next;
        if change < rel_tol && residual <= 10.0 * rel_tol {
            return PowerEstimate {
                value: theta,
                iterations: iter,
                residual,
                converged: true,
            };
        }
        if iter == max_iter {
            return PowerEstimate {
                value: theta,
                iterations: iter,
                residual,
                converged: false,
            };
        }
    }
    PowerEstimate {
        value: theta,
        iterations: 0,
        residual: f64::INFINITY,
        converged: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sum,
    Dft,
    Power,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Sum, Method::Dft, Method::Power];

    pub fn name(self) -> &'static str {
        match self {
            Method::Sum => "sum",
            Method::Dft => "dft",
            Method::Power => "power",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sum" => Ok(Method::Sum),
            "dft" => Ok(Method::Dft),
            "power" => Ok(Method::Power),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", content = "reason", rename_all = "lowercase")]
pub enum MethodStatus {
    Ok,
    /// Input outside the method's exactness guard.
    Skipped(String),
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: Method,
    /// `None` unless the method ran and produced a finite value.
    pub value: Option<f64>,
    #[serde(with = "crate::cli::decimal::opt_biguint")]
    pub exact_value: Option<BigUint>,
    pub status: MethodStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub order: usize,
    pub rel_tol: f64,
    pub methods: Vec<MethodResult>,
    /// Largest `|a − b| / max(a, b, 1)` over pairs of methods that produced values.
    pub max_pairwise_relative_gap: f64,
    /// Gap within `rel_tol` and no method failed.
    pub agrees: bool,
}

impl NormReport {
    pub fn method(&self, m: Method) -> Option<&MethodResult> {
        self.methods.iter().find(|r| r.method == m)
    }

    pub fn value(&self, m: Method) -> Option<f64> {
        self.method(m).and_then(|r| r.value)
    }

    pub fn exact_value(&self) -> Option<&BigUint> {
        self.method(Method::Sum).and_then(|r| r.exact_value.as_ref())
    }

    /// Methods that produced a value.
    pub fn computed(&self) -> impl Iterator<Item = Method> + '_ {
        self.methods
            .iter()
            .filter(|r| r.status == MethodStatus::Ok)
            .map(|r| r.method)
    }
}

pub fn compare_methods(c: &CirculantMatrix, rel_tol: f64) -> NormReport {
    compare_methods_with(c, &Method::ALL, rel_tol, Execution::default())
}

/// Runs the requested methods (duplicates ignored, reported in `sum, dft, power` order).
pub fn compare_methods_with(
    c: &CirculantMatrix,
    methods: &[Method],
    rel_tol: f64,
    exec: Execution,
) -> NormReport {
    let wants = |m: Method| methods.contains(&m);
    let max_iter = default_max_iter(c.order());

    let sum = wants(Method::Sum).then(|| {
        let exact = spectral_norm_sum(c);
        let value = exact.to_f64().filter(|v| v.is_finite());
        MethodResult {
            method: Method::Sum,
            value,
            exact_value: Some(exact),
            status: MethodStatus::Ok,
            iterations: None,
            residual: None,
        }
    });
    let (dft, power) = exec::join(
        exec,
        || wants(Method::Dft).then(|| from_float(Method::Dft, spectral_norm_dft(c))),
        || {
            wants(Method::Power).then(|| match spectral_norm_power_with(c, rel_tol, max_iter, exec) {
                Ok(est) => MethodResult {
                    iterations: Some(est.iterations),
                    residual: Some(est.residual),
                    ..from_float(Method::Power, Ok(est.value))
                },
                Err(Error::NoConvergence(est)) => MethodResult {
                    method: Method::Power,
                    value: Some(est.value),
                    exact_value: None,
                    status: MethodStatus::Failed(format!(
                        "no convergence after {} iterations",
                        est.iterations
                    )),
                    iterations: Some(est.iterations),
                    residual: Some(est.residual),
                },
                Err(e) => from_float(Method::Power, Err(e)),
            })
        },
    );

    let methods: Vec<MethodResult> = [sum, dft, power].into_iter().flatten().collect();
    let values: Vec<f64> = methods
        .iter()
        .filter(|r| r.status == MethodStatus::Ok)
        .filter_map(|r| r.value)
        .collect();
    let mut gap = 0.0f64;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            gap = gap.max((a - b).abs() / a.max(*b).max(1.0));
        }
    }
    let failed = methods
        .iter()
        .any(|r| matches!(r.status, MethodStatus::Failed(_)));
    NormReport {
        order: c.order(),
        rel_tol,
        agrees: !failed && gap <= rel_tol,
        max_pairwise_relative_gap: gap,
        methods,
    }
}

fn from_float(method: Method, result: Result<f64>) -> MethodResult {
    let (value, status) = match result {
        Ok(v) => (Some(v), MethodStatus::Ok),
        Err(e @ Error::PrecisionLoss { .. }) => (None, MethodStatus::Skipped(e.to_string())),
        Err(e) => (None, MethodStatus::Failed(e.to_string())),
    };
    MethodResult {
        method,
        value,
        exact_value: None,
        status,
        iterations: None,
        residual: None,
    }
}
