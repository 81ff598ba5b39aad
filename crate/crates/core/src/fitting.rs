//! Integer-valued polynomials in the alternating binomial basis
//! `P(X) = Σ_j (-1)^j e_j binom(X + dim - j - 1, dim - j - 1)`, fitted to
//! eventually polynomial integer sequences.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which function a sample table holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    HilbertH0,
    HilbertH1,
    Sally,
    SigmaDiagonal(u32),
    Antidiagonal,
}

/// Values `f(start), f(start + 1), ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub kind: SampleKind,
    pub start: i64,
    pub values: Vec<i64>,
}

impl SampledFunction {
    pub fn new(kind: SampleKind, start: i64, values: Vec<i64>) -> Self {
        SampledFunction {
            kind,
            start,
            values,
        }
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64
    }

    pub fn get(&self, n: i64) -> Option<i64> {
        usize::try_from(n - self.start)
            .ok()
            .and_then(|k| self.values.get(k).copied())
    }

    pub fn samples(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (self.start + k as i64, v))
    }

    /// Running sums `g(n) = Σ_{start ≤ k ≤ n} f(k)`.
    pub fn cumulative(&self, kind: SampleKind) -> SampledFunction {
        let mut acc = 0;
        let values = self
            .values
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect();
        SampledFunction::new(kind, self.start, values)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialPolynomial {
    pub dim: usize,
    /// `e_0, ..., e_{dim-1}`.
    pub coefficients: Vec<i64>,
    /// First index from which the samples agree with the polynomial.
    pub postulation: i64,
}

impl BinomialPolynomial {
    pub fn eval(&self, x: i64) -> i64 {
        let dim = self.dim as i64;
        let mut acc: i128 = 0;
        for (j, &e) in self.coefficients.iter().enumerate() {
            let k = dim - j as i64 - 1;
            let sign = if j % 2 == 0 { 1 } else { -1 };
            acc += sign * i128::from(e) * binomial(i128::from(x) + k as i128, k as u32);
        }
        i64::try_from(acc).expect("value fits in i64")
    }

    /// `e_0`, or 0 for the zero polynomial.
    pub fn leading(&self) -> i64 {
        self.coefficients.first().copied().unwrap_or(0)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        // e_j multiplies a basis polynomial of degree dim - 1 - j.
        self.coefficients
            .iter()
            .position(|&e| e != 0)
            .map(|j| self.dim - 1 - j)
    }
}

/// Generalized binomial coefficient `t (t-1) ... (t-k+1) / k!` for any integer `t`.
pub fn binomial(t: i128, k: u32) -> i128 {
    let mut acc: i128 = 1;
    for i in 0..i128::from(k) {
        acc = acc * (t - i) / (i + 1);
    }
    acc
}

/// Fits the eventual polynomial of degree below `dim` to `f`.
///
/// The candidate interpolates the last `dim` samples. It must reproduce
/// the last `dim + 2` samples and, separately, the `dim + 2` samples before
/// those; the postulation index is then found by walking backwards.
pub fn fit_binomial_polynomial(f: &SampledFunction, dim: usize) -> Result<BinomialPolynomial> {
    let window = dim + 2;
    let len = f.values.len();
    if len < 2 * window {
        return Err(Error::Fitting(format!(
            "{:?}: {len} samples, need at least {} for dimension {dim}",
            f.kind,
            2 * window
        )));
    }
    let base = len - dim.max(1);
    let diffs = forward_differences(&f.values[base..base + dim]);
    let n0 = f.start + base as i64;
    let eval = |x: i64| -> i128 {
        diffs
            .iter()
            .enumerate()
            .map(|(k, &d)| d * binomial(i128::from(x - n0), k as u32))
            .sum()
    };
    let matches = |k: usize| eval(f.start + k as i64) == i128::from(f.values[k]);
    if let Some(bad) = (len - window..len).find(|&k| !matches(k)) {
        return Err(Error::Fitting(format!(
            "{:?}: no polynomial of degree < {dim} fits the tail (mismatch at n = {})",
            f.kind,
            f.start + bad as i64
        )));
    }
    if let Some(bad) = (len - 2 * window..len - window).find(|&k| !matches(k)) {
        return Err(Error::Fitting(format!(
            "{:?}: fit fails on the verification window (mismatch at n = {})",
            f.kind,
            f.start + bad as i64
        )));
    }
    let mut first = len - 2 * window;
    while first > 0 && matches(first - 1) {
        first -= 1;
    }
    // e_j = (-1)^j ∇^{dim-1-j} P(-1), with ∇ the backward difference.
    let at_neg: Vec<i128> = (0..dim as i64).map(|s| eval(-1 - s)).collect();
    let mut coefficients = Vec::with_capacity(dim);
    for j in 0..dim {
        let m = dim - 1 - j;
        let nabla: i128 = (0..=m)
            .map(|s| {
                let sign = if s % 2 == 0 { 1 } else { -1 };
                sign * binomial(m as i128, s as u32) * at_neg[s]
            })
            .sum();
        let e = if j % 2 == 0 { nabla } else { -nabla };
        coefficients.push(i64::try_from(e).map_err(|_| {
            Error::Fitting(format!("{:?}: coefficient e_{j} overflows", f.kind))
        })?);
    }
    Ok(BinomialPolynomial {
        dim,
        coefficients,
        postulation: f.start + first as i64,
    })
}

/// `[f0, Δf0, Δ²f0, ...]` for the given consecutive values.
fn forward_differences(values: &[i64]) -> Vec<i128> {
    let mut row: Vec<i128> = values.iter().map(|&v| i128::from(v)).collect();
    let mut out = Vec::with_capacity(row.len());
    while !row.is_empty() {
        out.push(row[0]);
        row = row.windows(2).map(|w| w[1] - w[0]).collect();
    }
    out
}
