//! First-row circulant matrices over the nonnegative integers.
//!
//! `circ(c₀, …, c_{n−1})` has entry `c_{(j−i) mod n}` at row `i`, column `j`:
//! each row is the previous one shifted cyclically right by one place.
//!
//! Exact operations (dense materialization, `matvec_naive`, the all-ones
//! eigencheck, the normality test) stay in [`BigUint`]/[`BigInt`]. The
//! floating-point paths (`matvec_fft`, `eigenvalues_dft`) refuse any entry at or
//! above 2⁵³ with [`Error::PrecisionLoss`].
//!
//! Eigenvalues use `λ_k = Σ_j c_j·ω^{jk}` with `ω = exp(+2πi/n)`.

use num_bigint::{BigInt, BigUint, ToBigInt};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::sequences::{prefix, SequenceId};

/// Largest exponent for which every integer below `2^EXACT_F64_BITS` is a double.
pub const EXACT_F64_BITS: u32 = 53;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CirculantMatrix {
    first_row: Vec<BigUint>,
}

impl CirculantMatrix {
    pub fn new(first_row: Vec<BigUint>) -> Result<Self> {
        if first_row.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        Ok(Self { first_row })
    }

    pub fn from_u64(first_row: &[u64]) -> Result<Self> {
        Self::new(first_row.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Builds the first row from signed integers, rejecting negatives.
    pub fn from_signed(first_row: &[BigInt]) -> Result<Self> {
        let row = first_row
            .iter()
            .enumerate()
            .map(|(index, value)| {
                value.to_biguint().ok_or_else(|| Error::NegativeEntry {
                    index,
                    value: value.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(row)
    }

    /// `circ(x₀, …, x_{n−1})` from the first `n` terms of a sequence.
    pub fn from_sequence(id: &SequenceId, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroLength);
        }
        Self::from_signed(&prefix(id, n))
    }

    pub fn order(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[BigUint] {
        &self.first_row
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigUint {
        let n = self.order();
        &self.first_row[(j + n - i % n) % n]
    }

    /// `Σ c_j`, which is also every row sum and every column sum.
    pub fn entry_sum(&self) -> BigUint {
        self.first_row.iter().sum()
    }

    /// Bit length of the largest entry.
    pub fn max_entry_bits(&self) -> u64 {
        self.first_row.iter().map(BigUint::bits).max().unwrap_or(0)
    }

    /// Entries as doubles, provided every entry is below `2^limit_bits`.
    pub fn to_f64_row(&self, limit_bits: u32) -> Result<Vec<f64>> {
        self.first_row
            .iter()
            .enumerate()
            .map(|(index, c)| {
                if c.bits() > u64::from(limit_bits) {
                    return Err(Error::PrecisionLoss {
                        what: "matrix entry",
                        index,
                        limit_bits,
                    });
                }
                Ok(c.to_f64().expect("entry below 2^53 converts exactly"))
            })
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigUint>> {
        let n = self.order();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    pub fn matvec_naive(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.matvec_naive_with(v, Execution::default())
    }

    /// Exact `C·v` in O(n²) without materializing `C`.
    pub fn matvec_naive_with(&self, v: &[BigInt], exec: Execution) -> Result<Vec<BigInt>> {
        let n = self.order();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let row: Vec<BigInt> = self.first_row.iter().map(|c| c.to_bigint().unwrap()).collect();
        Ok(exec::map_indexed(exec, n, |i| {
            // Row i holds c_m in column (i + m) mod n.
            let mut acc = BigInt::zero();
            for (m, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    acc += c * &v[(i + m) % n];
                }
            }
            acc
        }))
    }

    /// `C·v` through the DFT: `(1/n)·IDFT(λ ⊙ DFT(v))`, O(n log n).
    pub fn matvec_fft(&self, v: &[f64]) -> Result<Vec<f64>> {
        let n = self.order();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let limit = 2f64.powi(EXACT_F64_BITS as i32);
        if let Some(index) = v.iter().position(|x| !x.is_finite() || x.abs() >= limit) {
            return Err(Error::PrecisionLoss {
                what: "vector component",
                index,
                limit_bits: EXACT_F64_BITS,
            });
        }

        let lambda = self.eigenvalues_dft()?;
        let mut planner = FftPlanner::<f64>::new();
        let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        planner.plan_fft(n, FftDirection::Forward).process(&mut buf);
        for (b, l) in buf.iter_mut().zip(&lambda.values) {
            *b *= l;
        }
        planner.plan_fft(n, FftDirection::Inverse).process(&mut buf);
        let scale = 1.0 / n as f64;
        Ok(buf.iter().map(|z| z.re * scale).collect())
    }

    /// Eigenvalues by DFT of the first row, transform length exactly `n`.
    pub fn eigenvalues_dft(&self) -> Result<Spectrum> {
        let row = self.to_f64_row(EXACT_F64_BITS)?;
        let n = row.len();
        let mut values: Vec<Complex64> = row.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        // rustfft's inverse direction is the unnormalized transform with exp(+2πi jk/n).
        FftPlanner::<f64>::new()
            .plan_fft(n, FftDirection::Inverse)
            .process(&mut values);
        Ok(Spectrum { values })
    }

    /// `C·1 − (Σc)·1`, exactly. All zeros certifies the all-ones eigenvector.
    pub fn all_ones_eigencheck(&self) -> Vec<BigInt> {
        let ones = vec![BigInt::from(1); self.order()];
        let sum = self.entry_sum().to_bigint().unwrap();
        self.matvec_naive(&ones)
            .expect("all-ones vector has matching length")
            .into_iter()
            .map(|x| x - &sum)
            .collect()
    }

    pub fn is_normal(&self) -> bool {
        self.is_normal_with(Execution::default())
    }

    /// Exact check of `DᵀD == DDᵀ` on the dense integer matrix.
    pub fn is_normal_with(&self, exec: Execution) -> bool {
        let d = self.to_dense();
        let n = d.len();
        exec::all_indexed(exec, n, |i| {
            (0..n).all(|j| {
                let mut dtd = BigUint::zero();
                let mut ddt = BigUint::zero();
                for (row_k, (a, b)) in d.iter().zip(d[i].iter().zip(&d[j])) {
                    dtd += &row_k[i] * &row_k[j];
                    ddt += a * b;
                }
                dtd == ddt
            })
        })
    }
}

/// The `n` complex eigenvalues of a circulant, `values[k] = λ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `max_k |λ_k|`.
    pub fn radius(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Indices whose modulus is within `rel_tol` of the radius.
    pub fn argmax(&self, rel_tol: f64) -> Vec<usize> {
        let r = self.radius();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, z)| r - z.norm() <= rel_tol * r.max(1.0))
            .map(|(k, _)| k)
            .collect()
    }

    /// Recovers the first row: `c_j = (1/n)·Σ_k λ_k·ω^{−jk}`.
    pub fn inverse(&self) -> Vec<f64> {
        let n = self.values.len();
        if n == 0 {
            return Vec::new();
        }
        let mut buf = self.values.clone();
        FftPlanner::<f64>::new()
            .plan_fft(n, FftDirection::Forward)
            .process(&mut buf);
        buf.iter().map(|z| z.re / n as f64).collect()
    }
}
