//! Diagonal pieces of the bigraded Sally module and the invariants built on them.
//!
//! Notation: `σ_{p,i} = length(J^i I^{p+1} / J^{i+1} I^p)`, `Λ_p = σ_{p,0}`,
//! `Δ_p = length((I^{p+1} ∩ J) / J I^p)`, and `δ_p = Λ_p - e_0(Σ_{[p]})`.

use std::cell::RefCell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::classical::{
    hilbert_coefficients, initial_range, sally_coefficients, sally_length, sample_and_fit,
};
use crate::error::{Error, Result};
use crate::filtration::PairContext;
use crate::fitting::{binomial, fit_binomial_polynomial, BinomialPolynomial, SampleKind, SampledFunction};
use crate::groebner::Ideal;

fn to_i64(v: u64) -> i64 {
    i64::try_from(v).expect("length fits in i64")
}

/// `binom(i + d - 1, d - 1)`, the rank of the degree-`i` piece of a polynomial ring in `d` variables.
fn free_rank(d: usize, i: u32) -> i64 {
    if d == 0 {
        return i64::from(i == 0);
    }
    binomial(i128::from(i) + d as i128 - 1, d as u32 - 1) as i64
}

/// `Λ_p = length(I^{p+1} / J I^p)`.
pub fn lambda_p(ctx: &PairContext, p: u32) -> Result<u64> {
    ctx.length(&ctx.i_power(p + 1), &ctx.mixed(1, p))
}

/// `Δ_p = length((I^{p+1} ∩ J) / J I^p)`; zero at `p = 0` since `J ⊆ I`.
pub fn delta_cap_p(ctx: &PairContext, p: u32) -> Result<u64> {
    if p == 0 {
        return Ok(0);
    }
    let meet = ctx.i_power(p + 1).intersection(ctx.j())?;
    ctx.length(&meet, &ctx.mixed(1, p))
}

/// `σ_{p,i} = length(J^i I^{p+1} / J^{i+1} I^p)`.
pub fn sigma_piece_length(ctx: &PairContext, p: u32, i: u32) -> Result<u64> {
    ctx.length(&ctx.mixed(i, p + 1), &ctx.mixed(i + 1, p))
}

/// Length of the degree-`i` piece of `K_{[p]}`: `Λ_p binom(i+d-1, d-1) - σ_{p,i}`.
pub fn k_piece_length(ctx: &PairContext, p: u32, i: u32) -> Result<u64> {
    let lambda = to_i64(lambda_p(ctx, p)?);
    let sigma = to_i64(sigma_piece_length(ctx, p, i)?);
    k_from(lambda, sigma, ctx.d(), p, i)
}

fn k_from(lambda: i64, sigma: i64, d: usize, p: u32, i: u32) -> Result<u64> {
    let k = lambda * free_rank(d, i) - sigma;
    u64::try_from(k).map_err(|_| {
        Error::invariant(
            "exactness of the diagonal sequence: k ≥ 0",
            format!("p = {p}, i = {i}: Λ_p = {lambda}, σ = {sigma}, k = {k}"),
        )
    })
}

/// Samples `i ↦ σ_{p,i}` and fits its Hilbert polynomial in dimension `d`.
pub fn sigma_diagonal(ctx: &PairContext, p: u32) -> Result<(SampledFunction, BinomialPolynomial)> {
    let d = ctx.d();
    sample_and_fit(
        SampleKind::SigmaDiagonal(p),
        0,
        initial_range(d, ctx.r()),
        |i| sigma_piece_length(ctx, p, i as u32).map(to_i64),
        |f| fit_binomial_polynomial(f, d),
    )
}

/// `e_0(Σ_{[p]})`: the multiplicity when the fitted degree is `d - 1`, else 0.
pub fn e0_sigma_p(ctx: &PairContext, p: u32) -> Result<u64> {
    let (_, fit) = sigma_diagonal(ctx, p)?;
    e0_of(&fit, p)
}

fn e0_of(fit: &BinomialPolynomial, p: u32) -> Result<u64> {
    // e_0 of the alternating basis vanishes exactly when the degree drops below dim - 1.
    u64::try_from(fit.leading()).map_err(|_| {
        Error::invariant(
            "e_0(Σ_[p]) ≥ 0",
            format!("p = {p}: fitted coefficients {:?}", fit.coefficients),
        )
    })
}

/// `δ_p = Λ_p - e_0(Σ_{[p]})`, checked against `0 ≤ δ_p ≤ Δ_p`.
pub fn delta_p(ctx: &PairContext, p: u32) -> Result<u64> {
    let lambda = to_i64(lambda_p(ctx, p)?);
    let e0 = to_i64(e0_sigma_p(ctx, p)?);
    let cap = to_i64(delta_cap_p(ctx, p)?);
    check_delta(p, lambda, e0, cap)
}

fn check_delta(p: u32, lambda: i64, e0: i64, cap: i64) -> Result<u64> {
    let delta = lambda - e0;
    if delta < 0 || delta > cap {
        return Err(Error::invariant(
            "Δ_p ≥ δ_p ≥ 0",
            format!("p = {p}: Λ_p = {lambda}, e_0(Σ_[p]) = {e0}, δ_p = {delta}, Δ_p = {cap}"),
        ));
    }
    Ok(delta as u64)
}

/// `Σ_{p=0}^{m-1} σ_{p, m-1-p}`, checked against the split
/// `length(S_J(I)_{m-1}) + length(I J^{m-1} / J^m)`.
pub fn antidiagonal_total(ctx: &PairContext, m: u32) -> Result<u64> {
    if m == 0 {
        return Err(Error::Precondition("antidiagonal index starts at m = 1".into()));
    }
    let mut total = 0;
    for p in 0..m {
        total += sigma_piece_length(ctx, p, m - 1 - p)?;
    }
    check_antidiagonal(ctx, m, total)?;
    Ok(total)
}

fn check_antidiagonal(ctx: &PairContext, m: u32, total: u64) -> Result<()> {
    let split = sally_length(ctx, m - 1)? + ctx.length(&ctx.mixed(m - 1, 1), &ctx.j_power(m))?;
    if split != total {
        return Err(Error::invariant(
            "antidiagonal split: Σ_p σ_{p,m-1-p} = length(S_{m-1}) + length(I J^{m-1}/J^m)",
            format!("m = {m}: total {total}, split {split}"),
        ));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedReport {
    pub d: usize,
    pub r: u32,
    /// Last row computed; rows `p ≥ r` are zero.
    pub p_max: u32,
    pub length_r_mod_i: u64,
    pub length_r_mod_j: u64,
    pub lambda_p: Vec<u64>,
    pub delta_cap_p: Vec<u64>,
    pub e0_sigma_p: Vec<u64>,
    pub delta_p: Vec<u64>,
    /// `i ↦ σ_{p,i}` per row.
    pub sigma: Vec<SampledFunction>,
    /// `i ↦ length(K_{[p]})_i` over the same range as `sigma`.
    pub k_piece: Vec<Vec<u64>>,
    pub lambda: u64,
    pub delta_cap: u64,
    pub delta: u64,
    pub delta_bar: u64,
    pub e_coeffs: Vec<i64>,
    pub s_coeffs: Vec<i64>,
    pub sally_vanishes: bool,
    pub hilbert_h0: SampledFunction,
    pub sally_samples: SampledFunction,
    /// Antidiagonal totals indexed by `m ≥ 1`.
    pub antidiagonal: SampledFunction,
    pub antidiagonal_postulation: i64,
}

impl BigradedReport {
    pub fn e(&self, i: usize) -> i64 {
        self.e_coeffs.get(i).copied().unwrap_or(0)
    }
}

/// Computes every row `0 ≤ p ≤ max(r, p_max)` and validates all identities.
pub fn build_report(ctx: &PairContext, p_max: Option<u32>) -> Result<BigradedReport> {
    let d = ctx.d();
    let r = ctx.r();
    let p_max = p_max.unwrap_or(r).max(r);
    let unit = Ideal::unit(d, ctx.field());
    let length_r_mod_i = ctx.length(&unit, ctx.i())?;
    let length_r_mod_j = ctx.length(&unit, ctx.j())?;

    let hilbert = hilbert_coefficients(ctx)?;
    let sally = sally_coefficients(ctx, &hilbert.e)?;
    let e = &hilbert.e;

    let sigma_cache: RefCell<HashMap<(u32, u32), u64>> = RefCell::new(HashMap::new());
    let sigma = |p: u32, i: u32| -> Result<u64> {
        if let Some(&v) = sigma_cache.borrow().get(&(p, i)) {
            return Ok(v);
        }
        // Beyond the reduction number I^{p+1} = J I^p, so the piece vanishes.
        let v = if p >= r && p > p_max {
            0
        } else {
            sigma_piece_length(ctx, p, i)?
        };
        sigma_cache.borrow_mut().insert((p, i), v);
        Ok(v)
    };

    let mut report = BigradedReport {
        d,
        r,
        p_max,
        length_r_mod_i,
        length_r_mod_j,
        lambda_p: Vec::new(),
        delta_cap_p: Vec::new(),
        e0_sigma_p: Vec::new(),
        delta_p: Vec::new(),
        sigma: Vec::new(),
        k_piece: Vec::new(),
        lambda: 0,
        delta_cap: 0,
        delta: 0,
        delta_bar: 0,
        e_coeffs: e.clone(),
        s_coeffs: sally.s.clone(),
        sally_vanishes: sally.vanishes,
        hilbert_h0: hilbert.h0.clone(),
        sally_samples: sally.samples.clone(),
        antidiagonal: SampledFunction::new(SampleKind::Antidiagonal, 1, Vec::new()),
        antidiagonal_postulation: 0,
    };

    for p in 0..=p_max {
        let lambda = lambda_p(ctx, p)?;
        let cap = delta_cap_p(ctx, p)?;
        let (samples, fit) = sample_and_fit(
            SampleKind::SigmaDiagonal(p),
            0,
            initial_range(d, r),
            |i| sigma(p, i as u32).map(to_i64),
            |f| fit_binomial_polynomial(f, d),
        )?;
        if samples.get(0) != Some(to_i64(lambda)) {
            return Err(Error::invariant(
                "σ_{p,0} = Λ_p",
                format!("p = {p}: σ_{{p,0}} = {:?}, Λ_p = {lambda}", samples.get(0)),
            ));
        }
        let e0 = e0_of(&fit, p)?;
        let delta = check_delta(p, to_i64(lambda), to_i64(e0), to_i64(cap))?;
        let k: Vec<u64> = samples
            .samples()
            .map(|(i, s)| k_from(to_i64(lambda), s, d, p, i as u32))
            .collect::<Result<_>>()?;
        if p == 0 && k.iter().any(|&v| v != 0) {
            return Err(Error::invariant(
                "K_[0] = 0: σ_{0,i} = Λ_0 binom(i+d-1, d-1)",
                format!("k pieces {k:?}, σ {:?}", samples.values),
            ));
        }
        if p == 0 && delta != 0 {
            return Err(Error::invariant("δ_0 = 0", format!("δ_0 = {delta}")));
        }
        if p < r && lambda == 0 {
            return Err(Error::invariant(
                "Λ_p > 0 below the reduction number",
                format!("p = {p} < r = {r}"),
            ));
        }
        if p >= r && (lambda != 0 || cap != 0 || samples.values.iter().any(|&v| v != 0)) {
            return Err(Error::invariant(
                "rows p ≥ r vanish",
                format!("p = {p}, r = {r}: Λ_p = {lambda}, Δ_p = {cap}, σ = {:?}", samples.values),
            ));
        }
        report.lambda_p.push(lambda);
        report.delta_cap_p.push(cap);
        report.e0_sigma_p.push(e0);
        report.delta_p.push(delta);
        report.sigma.push(samples);
        report.k_piece.push(k);
    }

    report.lambda = report.lambda_p.iter().sum();
    report.delta_cap = report.delta_cap_p.iter().skip(1).sum();
    report.delta = report.delta_p.iter().sum();
    report.delta_bar = report.delta_p.iter().copied().max().unwrap_or(0);

    let e1 = hilbert.e(1);
    let e0_sum: u64 = report.e0_sigma_p.iter().sum();
    if to_i64(e0_sum) != e1 {
        return Err(Error::invariant(
            "e_1 = Σ_p e_0(Σ_[p])",
            format!("e_1 = {e1}, e_0(Σ_[p]) = {:?}", report.e0_sigma_p),
        ));
    }
    if to_i64(report.lambda) - e1 != to_i64(report.delta) {
        return Err(Error::invariant(
            "δ = Λ - e_1",
            format!("Λ = {}, e_1 = {e1}, δ = {}", report.lambda, report.delta),
        ));
    }
    if to_i64(length_r_mod_j) != hilbert.e(0) {
        return Err(Error::invariant(
            "e_0 = length(R/J)",
            format!("e_0 = {}, length(R/J) = {length_r_mod_j}", hilbert.e(0)),
        ));
    }

    // Antidiagonal totals as a function of n = m - 1, fitted against e_1..e_d.
    let (shifted, fit) = sample_and_fit(
        SampleKind::Antidiagonal,
        0,
        initial_range(d, r),
        |n| {
            let m = n as u32 + 1;
            let mut total = 0;
            for p in 0..m {
                total += sigma(p, m - 1 - p)?;
            }
            check_antidiagonal(ctx, m, total)?;
            Ok(to_i64(total))
        },
        |f| fit_binomial_polynomial(f, d),
    )?;
    if fit.coefficients[..] != e[1..=d] {
        return Err(Error::invariant(
            "antidiagonal polynomial has coefficients e_1..e_d",
            format!("fitted {:?}, e = {e:?}", fit.coefficients),
        ));
    }
    report.antidiagonal = SampledFunction::new(SampleKind::Antidiagonal, 1, shifted.values);
    report.antidiagonal_postulation = fit.postulation + 1;
    Ok(report)
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
    fn trivial_pair_is_all_zero() {
        let rep = build_report(&pair(&["x", "y"], &["x", "y"]), None).unwrap();
        assert_eq!(rep.r, 0);
        assert_eq!(rep.lambda_p, vec![0]);
        assert_eq!((rep.lambda, rep.delta_cap, rep.delta, rep.delta_bar), (0, 0, 0, 0));
        assert_eq!(rep.e_coeffs, vec![1, 0, 0]);
    }

    #[test]
    fn square_of_maximal_ideal() {
        let ctx = pair(&["x^2", "x*y", "y^2"], &["x^2", "y^2"]);
        for i in 0..4 {
            assert_eq!(sigma_piece_length(&ctx, 0, i).unwrap(), u64::from(i) + 1);
        }
        assert_eq!(e0_sigma_p(&ctx, 0).unwrap(), 1);
        assert_eq!(delta_p(&ctx, 0).unwrap(), 0);
        assert_eq!(antidiagonal_total(&ctx, 3).unwrap(), 3);
        let rep = build_report(&ctx, None).unwrap();
        assert_eq!(rep.r, 1);
        assert_eq!((rep.e(0), rep.e(1)), (4, 1));
        assert_eq!((rep.lambda, rep.delta_cap, rep.delta, rep.delta_bar), (1, 0, 0, 0));
    }

    #[test]
    fn reduction_number_two() {
        let ctx = pair(&["x^4", "x^3*y", "x*y^3", "y^4"], &["x^4", "y^4"]);
        assert!(delta_cap_p(&ctx, 1).unwrap() >= 1);
        let rep = build_report(&ctx, Some(3)).unwrap();
        assert_eq!(rep.r, 2);
        assert_eq!(rep.lambda_p, vec![5, 2, 0, 0]);
        assert_eq!(rep.delta_cap_p[1], 2);
        assert_eq!(rep.e0_sigma_p, vec![5, 1, 0, 0]);
        assert_eq!(rep.delta_p, vec![0, 1, 0, 0]);
        assert_eq!((rep.lambda, rep.delta, rep.delta_bar), (7, 1, 1));
        assert!(rep.k_piece[1].iter().any(|&k| k > 0));
    }
}
