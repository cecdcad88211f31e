//! Exact integer linear-recurrence sequences and their partial sums.
//!
//! A sequence of order `k` is fixed by coefficients `a₁…a_k` and initial terms
//! `t₀…t_{k−1}`; every later term is `t_n = a₁·t_{n−1} + … + a_k·t_{n−k}`.
//! All arithmetic is on [`BigInt`], so nothing overflows.
//!
//! The four builtin sequences also carry closed forms for their prefix sums:
//!
//! | sequence  | Σ_{i<n} t_i                  |
//! |-----------|------------------------------|
//! | Fibonacci | F_{n+1} − 1                  |
//! | Lucas     | F_{n+2} + F_n − 1            |
//! | Pell      | (P_n + P_{n−1} − 1) / 2      |
//! | Perrin    | R_{n+4} − 2                  |
//!
//! The Perrin identity is often quoted as `R_{n+4} − 1`; that form is off by
//! one for every `n` and is kept only as the published value checked by
//! [`audit_published_identity`].

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RecurrenceSpec {
    coefficients: Vec<BigInt>,
    initial_terms: Vec<BigInt>,
}

impl RecurrenceSpec {
    /// `coefficients[i]` multiplies `t_{n−1−i}`.
    pub fn new(coefficients: Vec<BigInt>, initial_terms: Vec<BigInt>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidSpec("order must be at least 1".into()));
        }
        if coefficients.len() != initial_terms.len() {
            return Err(Error::InvalidSpec(format!(
                "{} coefficients but {} initial terms",
                coefficients.len(),
                initial_terms.len()
            )));
        }
        Ok(Self {
            coefficients,
            initial_terms,
        })
    }

    pub fn from_i64(coefficients: &[i64], initial_terms: &[i64]) -> Result<Self> {
        Self::new(
            coefficients.iter().map(|&c| BigInt::from(c)).collect(),
            initial_terms.iter().map(|&t| BigInt::from(t)).collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn initial_terms(&self) -> &[BigInt] {
        &self.initial_terms
    }

    /// Applies the recurrence to a window `t_{m}, …, t_{m+k−1}` (oldest first)
    /// and returns `t_{m+k}`.
    ///
    /// # Panics
    ///
    /// If `window.len() != self.order()`.
    pub fn next_from_window<'a, I>(&self, window: I) -> BigInt
    where
        I: IntoIterator<Item = &'a BigInt>,
        I::IntoIter: DoubleEndedIterator + ExactSizeIterator,
    {
        let window = window.into_iter();
        assert_eq!(window.len(), self.order(), "window length must equal the order");
        let mut acc = BigInt::zero();
        for (coef, term) in self.coefficients.iter().zip(window.rev()) {
            if !coef.is_zero() {
                acc += coef * term;
            }
        }
        acc
    }

    /// Infinite iterator over `t₀, t₁, …`.
    pub fn terms(&self) -> Terms<'_> {
        Terms {
            spec: self,
            window: self.initial_terms.iter().cloned().collect(),
            emitted: 0,
        }
    }
}

impl fmt::Display for RecurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[BigInt]| {
            xs.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "k={};coef={};init={}",
            self.order(),
            join(&self.coefficients),
            join(&self.initial_terms)
        )
    }
}

/// Parses `k=<order>;coef=<a1,…,ak>;init=<t0,…,tk-1>`. Whitespace is ignored
/// and the three fields may come in any order.
impl FromStr for RecurrenceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut order = None;
        let mut coef = None;
        let mut init = None;

        for field in compact.split(';').filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::InvalidSpec(format!("field `{field}` has no `=`")))?;
            let slot_taken = match key {
                "k" => order
                    .replace(value.parse::<usize>().map_err(|_| {
                        Error::InvalidSpec(format!("order `{value}` is not a nonnegative integer"))
                    })?)
                    .is_some(),
                "coef" => coef.replace(parse_int_list(value)?).is_some(),
                "init" => init.replace(parse_int_list(value)?).is_some(),
                other => return Err(Error::InvalidSpec(format!("unknown field `{other}`"))),
            };
            if slot_taken {
                return Err(Error::InvalidSpec(format!("field `{key}` given twice")));
            }
        }

        let order = order.ok_or_else(|| Error::InvalidSpec("missing `k`".into()))?;
        let coef = coef.ok_or_else(|| Error::InvalidSpec("missing `coef`".into()))?;
        let init = init.ok_or_else(|| Error::InvalidSpec("missing `init`".into()))?;
        if coef.len() != order {
            return Err(Error::InvalidSpec(format!(
                "k={order} but {} coefficients",
                coef.len()
            )));
        }
        Self::new(coef, init)
    }
}

fn parse_int_list(s: &str) -> Result<Vec<BigInt>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.parse::<BigInt>()
                .map_err(|_| Error::InvalidSpec(format!("`{x}` is not an integer")))
        })
        .collect()
}

/// Iterator produced by [`RecurrenceSpec::terms`].
#[derive(Debug, Clone)]
pub struct Terms<'a> {
    spec: &'a RecurrenceSpec,
    window: VecDeque<BigInt>,
    emitted: usize,
}

impl Iterator for Terms<'_> {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let k = self.spec.order();
        if self.emitted < k {
            self.emitted += 1;
            return Some(self.window[self.emitted - 1].clone());
        }
        let next = self.spec.next_from_window(self.window.iter());
        self.window.pop_front();
        self.window.push_back(next.clone());
        self.emitted += 1;
        Some(next)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SequenceId {
    Fibonacci,
    Lucas,
    Pell,
    Perrin,
    Custom(RecurrenceSpec),
}

impl SequenceId {
    pub const BUILTINS: [SequenceId; 4] = [
        SequenceId::Fibonacci,
        SequenceId::Lucas,
        SequenceId::Pell,
        SequenceId::Perrin,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SequenceId::Fibonacci => "fibonacci",
            SequenceId::Lucas => "lucas",
            SequenceId::Pell => "pell",
            SequenceId::Perrin => "perrin",
            SequenceId::Custom(_) => "custom",
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, SequenceId::Custom(_))
    }

    pub fn recurrence(&self) -> RecurrenceSpec {
        let spec = match self {
            SequenceId::Fibonacci => RecurrenceSpec::from_i64(&[1, 1], &[0, 1]),
            SequenceId::Lucas => RecurrenceSpec::from_i64(&[1, 1], &[2, 1]),
            SequenceId::Pell => RecurrenceSpec::from_i64(&[2, 1], &[0, 1]),
            SequenceId::Perrin => RecurrenceSpec::from_i64(&[0, 1, 1], &[3, 0, 2]),
            SequenceId::Custom(spec) => return spec.clone(),
        };
        spec.expect("builtin specs are well formed")
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceId::Custom(spec) => write!(f, "custom({spec})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Parses a builtin name (case-insensitive). Custom sequences go through
/// [`RecurrenceSpec::from_str`].
impl FromStr for SequenceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fibonacci" => Ok(SequenceId::Fibonacci),
            "lucas" => Ok(SequenceId::Lucas),
            "pell" => Ok(SequenceId::Pell),
            "perrin" => Ok(SequenceId::Perrin),
            other => Err(Error::InvalidSpec(format!("unknown sequence `{other}`"))),
        }
    }
}

/// Exact `n`-th term (zero-based).
pub fn term(id: &SequenceId, n: usize) -> BigInt {
    id.recurrence()
        .terms()
        .nth(n)
        .expect("recurrence iterator is infinite")
}

/// The first `n` terms, in one linear pass.
pub fn prefix(id: &SequenceId, n: usize) -> Vec<BigInt> {
    id.recurrence().terms().take(n).collect()
}

/// `Σ_{i<n} term(id, i)` by direct summation.
pub fn prefix_sum(id: &SequenceId, n: usize) -> BigInt {
    id.recurrence().terms().take(n).sum()
}

/// Closed-form value of `Σ_{i<n} term(id, i)` for a builtin sequence.
pub fn closed_form_sum(id: &SequenceId, n: usize) -> Result<BigInt> {
    let kind = ClosedForm::for_id(id)?;
    if n == 0 {
        return Err(Error::ZeroLength);
    }
    let table = TermTable::new(kind, n);
    Ok(table.shipped(n))
}

/// Value of the commonly published sum identity, evaluated verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublishedValue {
    /// The formula's value; for Pell, the numerator floored by two when odd.
    pub value: BigInt,
    /// `false` when the formula divides an odd number by two.
    pub integral: bool,
}

/// Evaluates the published identity for `id` at `n`, including the Perrin
/// form `R_{n+4} − 1`.
pub fn published_identity(id: &SequenceId, n: usize) -> Result<PublishedValue> {
    let kind = ClosedForm::for_id(id)?;
    if n == 0 {
        return Err(Error::ZeroLength);
    }
    Ok(TermTable::new(kind, n).published(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRow {
    pub n: usize,
    pub published: BigInt,
    pub integral: bool,
    pub direct: BigInt,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityAudit {
    pub sequence: SequenceId,
    pub rows: Vec<AuditRow>,
}

impl IdentityAudit {
    pub fn match_count(&self) -> usize {
        self.rows.iter().filter(|r| r.matches).count()
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &AuditRow> {
        self.rows.iter().filter(|r| !r.matches)
    }

    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }
}

/// Checks the published identity against direct summation for `1 ≤ n ≤ n_max`.
pub fn audit_published_identity(id: &SequenceId, n_max: usize) -> Result<IdentityAudit> {
    let kind = ClosedForm::for_id(id)?;
    if n_max == 0 {
        return Err(Error::ZeroLength);
    }
    let table = TermTable::new(kind, n_max);
    let mut direct = BigInt::zero();
    let rows = (1..=n_max)
        .map(|n| {
            direct += &table.terms[n - 1];
            let published = table.published(n);
            AuditRow {
                n,
                matches: published.integral && published.value == direct,
                published: published.value,
                integral: published.integral,
                direct: direct.clone(),
            }
        })
        .collect();
    Ok(IdentityAudit {
        sequence: id.clone(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ClosedForm {
    Fibonacci,
    Lucas,
    Pell,
    Perrin,
}

impl ClosedForm {
    fn for_id(id: &SequenceId) -> Result<Self> {
        match id {
            SequenceId::Fibonacci => Ok(ClosedForm::Fibonacci),
            SequenceId::Lucas => Ok(ClosedForm::Lucas),
            SequenceId::Pell => Ok(ClosedForm::Pell),
            SequenceId::Perrin => Ok(ClosedForm::Perrin),
            SequenceId::Custom(_) => Err(Error::UnsupportedSequence(id.to_string())),
        }
    }
}

/// Terms needed to evaluate closed forms for every `1 ≤ n ≤ n_max`.
struct TermTable {
    kind: ClosedForm,
    /// The sequence itself, indices `0..=n_max + 4`.
    terms: Vec<BigInt>,
    /// Fibonacci numbers `0..=n_max + 2`, only filled for Lucas.
    fibonacci: Vec<BigInt>,
}

impl TermTable {
    fn new(kind: ClosedForm, n_max: usize) -> Self {
        let id = match kind {
            ClosedForm::Fibonacci => SequenceId::Fibonacci,
            ClosedForm::Lucas => SequenceId::Lucas,
            ClosedForm::Pell => SequenceId::Pell,
            ClosedForm::Perrin => SequenceId::Perrin,
        };
        let fibonacci = if kind == ClosedForm::Lucas {
            prefix(&SequenceId::Fibonacci, n_max + 3)
        } else {
            Vec::new()
        };
        Self {
            kind,
            terms: prefix(&id, n_max + 5),
            fibonacci,
        }
    }

    fn shipped(&self, n: usize) -> BigInt {
        match self.kind {
            ClosedForm::Perrin => &self.terms[n + 4] - 2,
            _ => self.published(n).value,
        }
    }

    fn published(&self, n: usize) -> PublishedValue {
        let one = BigInt::one();
        let t = &self.terms;
        let (value, integral) = match self.kind {
            ClosedForm::Fibonacci => (&t[n + 1] - &one, true),
            ClosedForm::Lucas => (&self.fibonacci[n + 2] + &self.fibonacci[n] - &one, true),
            ClosedForm::Pell => {
                let numerator = &t[n] + &t[n - 1] - &one;
                let integral = (&numerator % 2u32).is_zero();
                (numerator / 2u32, integral)
            }
            ClosedForm::Perrin => (&t[n + 4] - &one, true),
        };
        PublishedValue { value, integral }
    }
}
