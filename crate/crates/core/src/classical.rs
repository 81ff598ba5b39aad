//! Hilbert functions of the `I`-adic filtration and of the Sally module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::PairContext;
use crate::fitting::{fit_binomial_polynomial, BinomialPolynomial, SampleKind, SampledFunction};
use crate::groebner::Ideal;

/// Hard upper end of any sampling range.
pub const SAMPLE_CAP: i64 = 80;

/// Initial last sample index for a pair with the given dimension and reduction number.
pub fn initial_range(d: usize, r: u32) -> i64 {
    let d = d as i64;
    let r = i64::from(r);
    (2 * d + 4).max(2 * r + 2 * d + 4)
}

/// Samples `f(start..=end)` and fits, doubling `end` on fitting failure up to [`SAMPLE_CAP`].
pub(crate) fn sample_and_fit<T>(
    kind: SampleKind,
    start: i64,
    end: i64,
    mut f: impl FnMut(i64) -> Result<i64>,
    mut fit: impl FnMut(&SampledFunction) -> Result<T>,
) -> Result<(SampledFunction, T)> {
    let mut samples = SampledFunction::new(kind, start, Vec::new());
    let mut end = end.min(SAMPLE_CAP);
    loop {
        for n in samples.end()..=end {
            samples.values.push(f(n)?);
        }
        match fit(&samples) {
            Ok(t) => return Ok((samples, t)),
            Err(Error::Fitting(_)) if end < SAMPLE_CAP => end = (2 * end).min(SAMPLE_CAP),
            Err(e) => return Err(e),
        }
    }
}

fn to_i64(v: u64) -> i64 {
    i64::try_from(v).expect("length fits in i64")
}

/// `h^0(n) = length(I^n / I^{n+1})`.
pub fn hilbert_h0(ctx: &PairContext, n: u32) -> Result<u64> {
    ctx.length(&ctx.i_power(n), &ctx.i_power(n + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    /// `e_0, ..., e_d`.
    pub e: Vec<i64>,
    pub h0: SampledFunction,
    pub h1: SampledFunction,
    pub p0: BinomialPolynomial,
    pub p1: BinomialPolynomial,
}

impl HilbertData {
    pub fn e(&self, i: usize) -> i64 {
        self.e.get(i).copied().unwrap_or(0)
    }
}

/// `e_0..e_{d-1}` from `h^0` and `e_0..e_d` from its running sums `h^1`.
pub fn hilbert_coefficients(ctx: &PairContext) -> Result<HilbertData> {
    let d = ctx.d();
    let (h0, (p0, p1)) = sample_and_fit(
        SampleKind::HilbertH0,
        0,
        initial_range(d, ctx.r()),
        |n| hilbert_h0(ctx, n as u32).map(to_i64),
        |h0| {
            let p0 = fit_binomial_polynomial(h0, d)?;
            let p1 = fit_binomial_polynomial(&h0.cumulative(SampleKind::HilbertH1), d + 1)?;
            Ok((p0, p1))
        },
    )?;
    if p0.coefficients[..] != p1.coefficients[..d] {
        return Err(Error::invariant(
            "h^0 and h^1 share e_0..e_{d-1}",
            format!("{:?} vs {:?}", p0.coefficients, p1.coefficients),
        ));
    }
    let colength_j = to_i64(ctx.length(&Ideal::unit(d, ctx.field()), ctx.j())?);
    if p1.leading() != colength_j {
        return Err(Error::invariant(
            "e_0 = length(R/J)",
            format!("e_0 = {} but length(R/J) = {colength_j}", p1.leading()),
        ));
    }
    let h1 = h0.cumulative(SampleKind::HilbertH1);
    Ok(HilbertData {
        e: p1.coefficients.clone(),
        h0,
        h1,
        p0,
        p1,
    })
}

/// `length(I^{n+1} / J^n I)` for `n ≥ 1`; zero at `n = 0`.
pub fn sally_length(ctx: &PairContext, n: u32) -> Result<u64> {
    if n == 0 {
        return Ok(0);
    }
    ctx.length(&ctx.i_power(n + 1), &ctx.mixed(n, 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SallyData {
    /// `s_0, ..., s_{d-1}`.
    pub s: Vec<i64>,
    pub samples: SampledFunction,
    /// Whether `S_J(I) = 0`, i.e. `I^2 = J I`.
    pub vanishes: bool,
}

/// Fits the Sally module's Hilbert polynomial and checks it against `e`.
pub fn sally_coefficients(ctx: &PairContext, e: &[i64]) -> Result<SallyData> {
    let d = ctx.d();
    let (samples, fit) = sample_and_fit(
        SampleKind::Sally,
        1,
        initial_range(d, ctx.r()),
        |n| sally_length(ctx, n as u32).map(to_i64),
        |f| fit_binomial_polynomial(f, d),
    )?;
    let vanishes = samples.values.iter().all(|&v| v == 0);
    if vanishes != (ctx.r() <= 1) {
        return Err(Error::invariant(
            "S_J(I) = 0 iff r ≤ 1",
            format!("r = {} but Sally samples {:?}", ctx.r(), samples.values),
        ));
    }
    let s = fit.coefficients;
    let e_at = |i: usize| e.get(i).copied().unwrap_or(0);
    let colength_i = to_i64(ctx.length(&Ideal::unit(d, ctx.field()), ctx.i())?);
    let i_over_j = e_at(0) - colength_i;
    if s.first().copied().unwrap_or(0) != e_at(1) - i_over_j {
        return Err(Error::invariant(
            "s_0 = e_1 - length(I/J)",
            format!("s = {s:?}, e = {e:?}, length(I/J) = {i_over_j}"),
        ));
    }
    for i in 1..d {
        if s[i] != e_at(i + 1) {
            return Err(Error::invariant(
                "s_i = e_{i+1}",
                format!("i = {i}: s = {s:?}, e = {e:?}"),
            ));
        }
    }
    Ok(SallyData {
        s,
        samples,
        vanishes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::scalar::Field;

    fn pair(i: &[&str], j: &[&str]) -> PairContext {
        let names: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let mk = |gens: &[&str]| {
            let gens = gens
                .iter()
                .map(|g| parse_polynomial(g, &names, Field::Rationals).unwrap())
                .collect();
            Ideal::new(2, Field::Rationals, gens).unwrap()
        };
        PairContext::new(mk(i), mk(j), 10).unwrap()
    }

    #[test]
    fn maximal_ideal() {
        let ctx = pair(&["x", "y"], &["x", "y"]);
        assert_eq!(hilbert_h0(&ctx, 4).unwrap(), 5);
        let h = hilbert_coefficients(&ctx).unwrap();
        assert_eq!(h.e, vec![1, 0, 0]);
        let s = sally_coefficients(&ctx, &h.e).unwrap();
        assert!(s.vanishes);
        assert_eq!(s.s, vec![0, 0]);
    }

    #[test]
    fn square_of_maximal_ideal() {
        let ctx = pair(&["x^2", "x*y", "y^2"], &["x^2", "y^2"]);
        assert_eq!(hilbert_h0(&ctx, 0).unwrap(), 3);
        assert_eq!(hilbert_h0(&ctx, 1).unwrap(), 7);
        let h = hilbert_coefficients(&ctx).unwrap();
        assert_eq!(h.e[..2], [4, 1]);
        assert_eq!(h.p0.postulation, 0);
        assert_eq!(sally_length(&ctx, 1).unwrap(), 0);
    }

    #[test]
    fn cube_of_maximal_ideal() {
        let ctx = pair(&["x^3", "x^2*y", "x*y^2", "y^3"], &["x^3", "y^3"]);
        let h = hilbert_coefficients(&ctx).unwrap();
        assert_eq!(h.e[..2], [9, 3]);
    }

    #[test]
    fn non_vanishing_sally_module() {
        let ctx = pair(&["x^4", "x^3*y", "x*y^3", "y^4"], &["x^4", "y^4"]);
        assert!(sally_length(&ctx, 1).unwrap() > 0);
        let h = hilbert_coefficients(&ctx).unwrap();
        assert_eq!(h.e, vec![16, 6, 0]);
        let s = sally_coefficients(&ctx, &h.e).unwrap();
        assert!(!s.vanishes);
        assert_eq!(s.s, vec![1, 0]);
    }
}
