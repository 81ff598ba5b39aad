//! `gr_I(R)` as a quotient of `k[x, V]` and its depth via generic linear forms in `V`.

use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bigraded::BigradedReport;
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::length::{is_globally_m_primary, is_locally_m_primary};
use crate::parse::parse_polynomial;
use crate::polynomial::Polynomial;
use crate::scalar::{Field, Scalar};

pub const DEFAULT_TRIALS: u32 = 4;

/// Coefficients of random linear forms in `V` are drawn from `[-DRAW_RANGE, DRAW_RANGE]` over `Q`.
const DRAW_RANGE: i64 = 100;

/// `gr_I(R) ≅ k[x_1..x_d, V_1..V_μ] / L`, with `V_i` standing for the class of `b_i` in `I/I^2`.
#[derive(Clone, Debug)]
pub struct GrPresentation {
    pub d: usize,
    pub mu: usize,
    /// Kernel of `R[V] → R[t]`, `V_i ↦ b_i t`.
    pub rees_kernel: Ideal,
    pub relations: Ideal,
}

impl GrPresentation {
    pub fn field(&self) -> Field {
        self.relations.field()
    }

    /// Variables `d..d+μ` of the ambient ring.
    pub fn v_range(&self) -> std::ops::Range<usize> {
        self.d..self.d + self.mu
    }

    /// `dim_k` of the `V`-degree `n` piece, which equals `length(I^n/I^{n+1})`.
    pub fn piece_dimension(&self, n: u32) -> Option<u64> {
        self.relations.graded_piece_dimension(self.v_range(), n)
    }

    /// The form `Σ c_i V_i`.
    pub fn linear_form(&self, coeffs: &[Scalar]) -> Polynomial {
        let nvars = self.d + self.mu;
        let mut acc = Polynomial::zero(nvars, self.field());
        for (i, c) in coeffs.iter().enumerate() {
            acc = &acc + &Polynomial::var(nvars, self.field(), self.d + i).scale(c);
        }
        acc
    }
}

/// Presents `gr_I(R)`; needs `R/I` supported only at the origin.
pub fn gr_presentation(i: &Ideal) -> Result<GrPresentation> {
    if !is_locally_m_primary(i)? {
        return Err(Error::Precondition("I is not m-primary at the origin".into()));
    }
    if !is_globally_m_primary(i) {
        return Err(Error::Unsupported(
            "depth needs V(I) = {origin}: R/I has support away from the origin".into(),
        ));
    }
    let d = i.nvars();
    let field = i.field();
    let gens = i.generators();
    let mu = gens.len();
    // Ring k[t, x, V].
    let n = 1 + d + mu;
    let t = Polynomial::var(n, field, 0);
    let graph: Vec<Polynomial> = gens
        .iter()
        .enumerate()
        .map(|(k, b)| &Polynomial::var(n, field, 1 + d + k) - &(&t * &b.embed(n, 1)))
        .collect();
    let rees_kernel = Ideal::new(n, field, graph)?.eliminate(1)?;
    let extended = Ideal::new(d + mu, field, gens.iter().map(|b| b.embed(d + mu, 0)).collect())?;
    let relations = rees_kernel.sum(&extended)?;
    Ok(GrPresentation {
        d,
        mu,
        rees_kernel,
        relations,
    })
}

/// Whether `ℓ` is a nonzerodivisor modulo `L`, i.e. `(L : ℓ) = L`.
pub fn is_regular_element(l: &Ideal, ell: &Polynomial) -> Result<bool> {
    if l.contains(ell)? {
        return Err(Error::Precondition("the element lies in L".into()));
    }
    l.contains_ideal(&l.colon(ell)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub stage: usize,
    pub coefficients: Vec<String>,
    pub regular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReesDepth {
    /// `depth(gr) + 1`, valid when `gr` is not Cohen-Macaulay.
    Derived(usize),
    /// `gr` is Cohen-Macaulay; only `depth ≥ d` follows.
    AtLeast(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthResult {
    pub d: usize,
    pub depth: usize,
    /// Coefficient vectors of the certified regular linear forms in `V`.
    pub regular_sequence: Vec<Vec<String>>,
    pub trials: Vec<TrialRecord>,
    pub is_cm: bool,
    pub rees_depth: ReesDepth,
    pub seed: u64,
}

fn random_coefficients(field: Field, mu: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    loop {
        let c: Vec<Scalar> = (0..mu)
            .map(|_| match field {
                Field::Rationals => field.from_i64(rng.random_range(-DRAW_RANGE..=DRAW_RANGE)),
                Field::Prime(p) => field.from_i64(rng.random_range(0..p) as i64),
            })
            .collect();
        if c.iter().any(|s| !s.is_zero()) {
            return c;
        }
    }
}

/// Extends a regular sequence of generic linear forms one stage at a time,
/// giving up on a stage after `trials` failed draws. Can only under-report.
pub fn depth_gr(pres: &GrPresentation, trials: u32, seed: u64) -> Result<DepthResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = pres.relations.clone();
    let mut sequence = Vec::new();
    let mut records = Vec::new();
    let trials = trials.max(1);
    'stages: while sequence.len() < pres.d {
        let stage = sequence.len() + 1;
        for _ in 0..trials {
            let coeffs = random_coefficients(pres.field(), pres.mu, &mut rng);
            let ell = pres.linear_form(&coeffs);
            let regular = !current.contains(&ell)? && is_regular_element(&current, &ell)?;
            let shown: Vec<String> = coeffs.iter().map(Scalar::to_string).collect();
            records.push(TrialRecord {
                stage,
                coefficients: shown.clone(),
                regular,
            });
            if regular {
                current = current.sum(&Ideal::new(current.nvars(), current.field(), vec![ell])?)?;
                sequence.push(shown);
                continue 'stages;
            }
        }
        break;
    }
    let depth = sequence.len();
    let is_cm = depth == pres.d;
    Ok(DepthResult {
        d: pres.d,
        depth,
        regular_sequence: sequence,
        trials: records,
        is_cm,
        rees_depth: if is_cm {
            ReesDepth::AtLeast(pres.d)
        } else {
            ReesDepth::Derived(depth + 1)
        },
        seed,
    })
}

/// Re-checks every colon condition of a reported regular sequence.
pub fn certify_sequence(pres: &GrPresentation, result: &DepthResult) -> Result<bool> {
    let mut current = pres.relations.clone();
    for shown in &result.regular_sequence {
        let coeffs = shown
            .iter()
            .map(|s| Ok(parse_polynomial(s, &[], pres.field())?.constant_term()))
            .collect::<Result<Vec<_>>>()?;
        let ell = pres.linear_form(&coeffs);
        if current.contains(&ell)? || !is_regular_element(&current, &ell)? {
            return Ok(false);
        }
        current = current.sum(&Ideal::new(current.nvars(), current.field(), vec![ell])?)?;
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub label: char,
    pub statement: String,
    pub status: Status,
    pub detail: String,
}

/// Evaluates the depth bounds (a)-(g) against a report and a depth result.
pub fn verify_theorems(report: &BigradedReport, depth: &DepthResult) -> Vec<Verdict> {
    let d = report.d as i64;
    let dep = depth.depth as i64;
    let delta_cap = report.delta_cap as i64;
    let delta = report.delta as i64;
    let delta_bar = report.delta_bar as i64;
    let e1 = report.e(1);
    let lambda = report.lambda as i64;

    let implication = |label, statement: &str, hyp: bool, bound: i64, detail: String| {
        let status = match (hyp, dep >= bound) {
            (false, _) => Status::NotApplicable,
            (true, true) => Status::Pass,
            (true, false) => Status::Fail,
        };
        Verdict {
            label,
            statement: statement.into(),
            status,
            detail: format!("{detail}; depth = {dep}, bound = {bound}"),
        }
    };

    let mut out = vec![
        implication('a', "Δ = 0 ⟹ depth = d", delta_cap == 0, d, format!("Δ = {delta_cap}")),
        implication('b', "δ = 0 ⟹ depth ≥ d-1", delta == 0, d - 1, format!("δ = {delta}")),
        implication(
            'c',
            "δ̄ ≤ 1 ⟹ depth ≥ d-1-δ̄",
            delta_bar <= 1,
            d - 1 - delta_bar,
            format!("δ̄ = {delta_bar}"),
        ),
        implication(
            'd',
            "δ ∈ {0,1} ⟹ depth ≥ d-1-δ",
            delta <= 1,
            d - 1 - delta,
            format!("δ = {delta}"),
        ),
        implication(
            'e',
            "Δ_p ≤ 1 for all p ≥ 1 ⟹ depth ≥ d-2",
            report.delta_cap_p.iter().skip(1).all(|&v| v <= 1),
            d - 2,
            format!("Δ_p = {:?}", report.delta_cap_p),
        ),
    ];

    // Smallest ε = Λ_t over the t with Δ_1 = ... = Δ_{t-1} = 0 and Λ_t ≤ min(1, d-1).
    let lambda_at = |t: usize| report.lambda_p.get(t).copied().unwrap_or(0) as i64;
    let cap_at = |p: usize| report.delta_cap_p.get(p).copied().unwrap_or(0);
    let eps = (1..=report.lambda_p.len())
        .take_while(|&t| t == 1 || cap_at(t - 1) == 0)
        .map(lambda_at)
        .filter(|&e| e <= 1.min(d - 1))
        .min();
    out.push(implication(
        'f',
        "Δ_p = 0 for 1 ≤ p < t and Λ_t = ε ≤ min(1, d-1) ⟹ depth ≥ d-1-ε",
        eps.is_some(),
        d - 1 - eps.unwrap_or(0),
        format!("ε = {eps:?}"),
    ));
    out.push(Verdict {
        label: 'g',
        statement: "Λ ≥ e_1 ≥ 0".into(),
        status: if lambda >= e1 && e1 >= 0 {
            Status::Pass
        } else {
            Status::Fail
        },
        detail: format!("Λ = {lambda}, e_1 = {e1}"),
    });
    out
}

/// Fails with diagnostics when any verdict failed.
pub fn check_verdicts(verdicts: &[Verdict], depth: &DepthResult) -> Result<()> {
    let failed: Vec<&Verdict> = verdicts.iter().filter(|v| v.status == Status::Fail).collect();
    if failed.is_empty() {
        return Ok(());
    }
    let mut detail = String::new();
    for v in &failed {
        let _ = writeln!(detail, "({}) {}: {}", v.label, v.statement, v.detail);
    }
    let _ = write!(
        detail,
        "the depth engine can under-report; re-run with more --trials (used {} draws, seed {})",
        depth.trials.len(),
        depth.seed
    );
    Err(Error::invariant("depth bounds", detail))
}
