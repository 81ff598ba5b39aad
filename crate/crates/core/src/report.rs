//! Command dispatch, the built-in corpus, and report emission.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bigraded::{build_report, sigma_diagonal, BigradedReport};
use crate::classical::{hilbert_coefficients, hilbert_h0, sally_coefficients};
use crate::depth::{
    certify_sequence, check_verdicts, depth_gr, gr_presentation, verify_theorems, DepthResult,
    ReesDepth, Status, Verdict, DEFAULT_TRIALS,
};
use crate::error::{Error, Result};
use crate::filtration::{generate_minimal_reduction, PairContext, DEFAULT_RETRIES, DEFAULT_R_MAX};
use crate::fitting::SampledFunction;
use crate::groebner::Ideal;
use crate::length::{local_length, monomial_length_oracle, DEFAULT_N_CAP};
use crate::problem::{parse_problem, ProblemSpec, ReductionSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Invariants,
    Depth,
    Verify,
    Hilbert,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Command-line overrides; each wins over the value in the problem file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub p_max: Option<u32>,
    pub r_max: Option<u32>,
    pub trials: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSummary {
    pub field: String,
    pub vars: Vec<String>,
    pub i: Vec<String>,
    pub j: Vec<String>,
    /// Whether `J` was drawn at random.
    pub generated: bool,
    pub seed: u64,
    pub d: usize,
    pub r: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRow {
    pub quotient: String,
    pub local_length: u64,
    pub oracle: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Report {
    Invariants {
        pair: PairSummary,
        invariants: BigradedReport,
    },
    Depth {
        pair: PairSummary,
        /// `dim_k` of the degree-`n` pieces of the presentation, `n = 0..=r+2`.
        piece_dimensions: Vec<u64>,
        depth: DepthResult,
    },
    Verify {
        pair: PairSummary,
        invariants: BigradedReport,
        depth: DepthResult,
        verdicts: Vec<Verdict>,
    },
    Hilbert {
        pair: PairSummary,
        e_coeffs: Vec<i64>,
        s_coeffs: Vec<i64>,
        tables: Vec<SampledFunction>,
    },
    Oracle {
        pair: PairSummary,
        rows: Vec<OracleRow>,
    },
}

impl Report {
    pub fn pair(&self) -> &PairSummary {
        match self {
            Report::Invariants { pair, .. }
            | Report::Depth { pair, .. }
            | Report::Verify { pair, .. }
            | Report::Hilbert { pair, .. }
            | Report::Oracle { pair, .. } => pair,
        }
    }
}

/// Verifies or generates the reduction described by `spec`.
pub fn build_context(spec: &ProblemSpec, opts: &RunOptions) -> Result<PairContext> {
    let r_max = opts.r_max.or(spec.r_max).unwrap_or(DEFAULT_R_MAX);
    let i = spec.i_ideal()?;
    match &spec.j {
        ReductionSpec::Given(gens) => {
            let j = Ideal::new(spec.vars.len(), spec.field, gens.clone())?;
            PairContext::new(i, j, r_max)
        }
        ReductionSpec::Auto => {
            generate_minimal_reduction(&i, seed_of(spec, opts), r_max, DEFAULT_RETRIES)
        }
    }
}

fn seed_of(spec: &ProblemSpec, opts: &RunOptions) -> u64 {
    opts.seed.or(spec.seed).unwrap_or(0)
}

fn summarize(spec: &ProblemSpec, opts: &RunOptions, ctx: &PairContext) -> PairSummary {
    let show = |ideal: &Ideal| {
        ideal
            .generators()
            .iter()
            .map(|g| g.display_with(&spec.vars).to_string())
            .collect()
    };
    PairSummary {
        field: spec.field.to_string(),
        vars: spec.vars.clone(),
        i: show(ctx.i()),
        j: show(ctx.j()),
        generated: spec.j == ReductionSpec::Auto,
        seed: seed_of(spec, opts),
        d: ctx.d(),
        r: ctx.r(),
    }
}

pub fn run_command(cmd: Command, spec: &ProblemSpec, opts: &RunOptions) -> Result<Report> {
    if cmd == Command::Oracle && !spec.is_monomial() {
        return Err(Error::Unsupported(
            "the lattice-point oracle needs monomial generators for both I and J".into(),
        ));
    }
    let ctx = build_context(spec, opts)?;
    let pair = summarize(spec, opts, &ctx);
    let p_max = opts.p_max.or(spec.p_max);
    let seed = seed_of(spec, opts);
    let trials = opts.trials.unwrap_or(DEFAULT_TRIALS);
    match cmd {
        Command::Invariants => Ok(Report::Invariants {
            pair,
            invariants: build_report(&ctx, p_max)?,
        }),
        Command::Depth => {
            let (piece_dimensions, depth) = depth_of(&ctx, trials, seed)?;
            Ok(Report::Depth {
                pair,
                piece_dimensions,
                depth,
            })
        }
        Command::Verify => {
            let invariants = build_report(&ctx, p_max)?;
            let (_, depth) = depth_of(&ctx, trials, seed)?;
            let verdicts = verify_theorems(&invariants, &depth);
            check_verdicts(&verdicts, &depth)?;
            Ok(Report::Verify {
                pair,
                invariants,
                depth,
                verdicts,
            })
        }
        Command::Hilbert => {
            let hilbert = hilbert_coefficients(&ctx)?;
            let sally = sally_coefficients(&ctx, &hilbert.e)?;
            let mut tables = vec![hilbert.h0, hilbert.h1, sally.samples];
            for p in 0..=p_max.unwrap_or(ctx.r()).max(ctx.r()) {
                tables.push(sigma_diagonal(&ctx, p)?.0);
            }
            Ok(Report::Hilbert {
                pair,
                e_coeffs: hilbert.e,
                s_coeffs: sally.s,
                tables,
            })
        }
        Command::Oracle => Ok(Report::Oracle {
            pair,
            rows: oracle_rows(&ctx)?,
        }),
    }
}

/// Presentation, its degree-piece check against `h^0`, and a certified depth.
fn depth_of(ctx: &PairContext, trials: u32, seed: u64) -> Result<(Vec<u64>, DepthResult)> {
    let pres = gr_presentation(ctx.i())?;
    let mut dims = Vec::new();
    for n in 0..=ctx.r() + 2 {
        let dim = pres.piece_dimension(n).ok_or_else(|| {
            Error::invariant("presentation pieces are finite", format!("degree {n}"))
        })?;
        let h0 = hilbert_h0(ctx, n)?;
        if dim != h0 {
            return Err(Error::invariant(
                "dim gr_n = h^0(n)",
                format!("n = {n}: presentation gives {dim}, h^0 = {h0}"),
            ));
        }
        dims.push(dim);
    }
    let depth = depth_gr(&pres, trials, seed)?;
    if !certify_sequence(&pres, &depth)? {
        return Err(Error::invariant(
            "regular sequence re-check",
            "a reported linear form failed its colon test",
        ));
    }
    Ok((dims, depth))
}

fn oracle_rows(ctx: &PairContext) -> Result<Vec<OracleRow>> {
    let unit = Ideal::unit(ctx.d(), ctx.field());
    let mut quotients: Vec<(String, Ideal, Ideal)> = vec![
        ("R/I".into(), unit.clone(), ctx.i().clone()),
        ("R/J".into(), unit, ctx.j().clone()),
        ("I/J".into(), ctx.i().clone(), ctx.j().clone()),
    ];
    for n in 0..=3 {
        quotients.push((format!("I^{n}/I^{}", n + 1), ctx.i_power(n), ctx.i_power(n + 1)));
    }
    for n in 1..=3 {
        quotients.push((format!("I^{}/J^{n}I", n + 1), ctx.i_power(n + 1), ctx.mixed(n, 1)));
    }
    for p in 0..=ctx.r() {
        if p > 0 {
            let meet = ctx.i_power(p + 1).intersection(ctx.j())?;
            quotients.push((format!("(I^{}∩J)/JI^{p}", p + 1), meet, ctx.mixed(1, p)));
        }
        for i in 0..=2 {
            quotients.push((
                format!("J^{i}I^{}/J^{}I^{p}", p + 1, i + 1),
                ctx.mixed(i, p + 1),
                ctx.mixed(i + 1, p),
            ));
        }
    }
    let mut rows = Vec::with_capacity(quotients.len());
    for (quotient, a, b) in quotients {
        let computed = local_length(&a, &b, DEFAULT_N_CAP)?;
        let oracle = monomial_length_oracle(&a, &b)?;
        if !computed.stabilized || computed.value != oracle {
            return Err(Error::invariant(
                "local length = lattice-point count",
                format!("{quotient}: local_length {computed:?}, oracle {oracle}"),
            ));
        }
        rows.push(OracleRow {
            quotient,
            local_length: computed.value,
            oracle,
        });
    }
    Ok(rows)
}

/// Renders a report; JSON output parses back to an equal [`Report`].
pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => render_text(report),
    }
}

pub fn parse_report_json(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let pair = report.pair();
    let _ = writeln!(out, "field {}, variables {}", pair.field, pair.vars.join(", "));
    let _ = writeln!(out, "I = [{}]", pair.i.join(", "));
    let how = if pair.generated {
        format!(" (generated, seed {})", pair.seed)
    } else {
        String::new()
    };
    let _ = writeln!(out, "J = [{}]{how}", pair.j.join(", "));
    let _ = writeln!(out, "d = {}, r = {}", pair.d, pair.r);
    match report {
        Report::Invariants { invariants, .. } => render_invariants(&mut out, invariants),
        Report::Depth {
            piece_dimensions,
            depth,
            ..
        } => {
            let _ = writeln!(out, "dim gr_n for n = 0..: {}", join(piece_dimensions));
            render_depth(&mut out, depth);
        }
        Report::Verify {
            invariants,
            depth,
            verdicts,
            ..
        } => {
            render_invariants(&mut out, invariants);
            render_depth(&mut out, depth);
            for v in verdicts {
                let status = match v.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::NotApplicable => "n/a ",
                };
                let _ = writeln!(out, "({}) {status}  {}   [{}]", v.label, v.statement, v.detail);
            }
        }
        Report::Hilbert {
            e_coeffs,
            s_coeffs,
            tables,
            ..
        } => {
            let _ = writeln!(out, "e_0..e_d: {}", join(e_coeffs));
            let _ = writeln!(out, "s_0..s_(d-1): {}", join(s_coeffs));
            for t in tables {
                let _ = writeln!(out, "{:?} from n = {}: {}", t.kind, t.start, join(&t.values));
            }
        }
        Report::Oracle { rows, .. } => {
            let width = rows.iter().map(|r| r.quotient.chars().count()).max().unwrap_or(0);
            let _ = writeln!(out, "{:<width$}  local  oracle", "quotient");
            for r in rows {
                let pad = width - r.quotient.chars().count();
                let _ = writeln!(
                    out,
                    "{}{}  {:>5}  {:>6}",
                    r.quotient,
                    " ".repeat(pad),
                    r.local_length,
                    r.oracle
                );
            }
        }
    }
    out
}

fn render_invariants(out: &mut String, rep: &BigradedReport) {
    let _ = writeln!(out, "length(R/I) = {}, length(R/J) = {}", rep.length_r_mod_i, rep.length_r_mod_j);
    let _ = writeln!(out, "e_0..e_d: {}", join(&rep.e_coeffs));
    let _ = writeln!(out, "s_0..s_(d-1): {}", join(&rep.s_coeffs));
    let _ = writeln!(out, "  p  Λ_p  Δ_p  e0(Σ_p)  δ_p");
    for p in 0..rep.lambda_p.len() {
        let _ = writeln!(
            out,
            "{:>3}  {:>3}  {:>3}  {:>7}  {:>3}",
            p, rep.lambda_p[p], rep.delta_cap_p[p], rep.e0_sigma_p[p], rep.delta_p[p]
        );
    }
    let _ = writeln!(
        out,
        "Λ = {}, Δ = {}, δ = {}, δ̄ = {}",
        rep.lambda, rep.delta_cap, rep.delta, rep.delta_bar
    );
}

fn render_depth(out: &mut String, depth: &DepthResult) {
    let cm = if depth.is_cm { " (Cohen-Macaulay)" } else { "" };
    let _ = writeln!(out, "depth gr_I(R) = {} of {}{cm}", depth.depth, depth.d);
    match depth.rees_depth {
        ReesDepth::Derived(v) => {
            let _ = writeln!(out, "depth R(I) = {v} (from depth gr + 1)");
        }
        ReesDepth::AtLeast(v) => {
            let _ = writeln!(out, "depth R(I) ≥ {v} (not computed directly)");
        }
    }
    for (k, coeffs) in depth.regular_sequence.iter().enumerate() {
        let _ = writeln!(out, "  ℓ_{} coefficients on V: {}", k + 1, coeffs.join(" "));
    }
    let _ = writeln!(out, "  {} draws, seed {}", depth.trials.len(), depth.seed);
}

/// Expected values for a built-in corpus pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub r: u32,
    pub e_coeffs: Vec<i64>,
    pub lambda_p: Vec<u64>,
    pub delta_cap_p: Vec<u64>,
    pub delta_p: Vec<u64>,
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
    pub expected: Fixture,
}

impl CorpusEntry {
    pub fn spec(&self) -> ProblemSpec {
        parse_problem(self.text).expect("corpus entries parse")
    }
}

fn fixture(r: u32, e: &[i64], lambda: &[u64], cap: &[u64], delta: &[u64], depth: usize) -> Fixture {
    Fixture {
        r,
        e_coeffs: e.to_vec(),
        lambda_p: lambda.to_vec(),
        delta_cap_p: cap.to_vec(),
        delta_p: delta.to_vec(),
        depth,
    }
}

pub fn corpus() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "trivial",
            text: "field = QQ\nvars = x, y\nI = [x, y]\nJ = [x, y]\n",
            expected: fixture(0, &[1, 0, 0], &[0], &[0], &[0], 2),
        },
        CorpusEntry {
            name: "square",
            text: "field = QQ\nvars = x, y\nI = [x^2, x*y, y^2]\nJ = [x^2, y^2]\n",
            expected: fixture(1, &[4, 1, 0], &[1, 0], &[0, 0], &[0, 0], 2),
        },
        CorpusEntry {
            name: "quartic",
            text: "field = QQ\nvars = x, y\nI = [x^4, x^3*y, x*y^3, y^4]\nJ = [x^4, y^4]\n",
            expected: fixture(2, &[16, 6, 0], &[5, 2, 0], &[0, 2, 0], &[0, 1, 0], 0),
        },
        CorpusEntry {
            name: "mixed",
            text: "field = QQ\nvars = x, y\nI = [x^2, x*y^2, y^3]\nJ = [x^2, y^3]\n",
            expected: fixture(1, &[6, 1, 0], &[1, 0], &[0, 0], &[0, 0], 2),
        },
        CorpusEntry {
            name: "space-square",
            text: "# generic reduction over a large prime field\nfield = Fp 32003\nvars = x, y, z\nI = [x^2, x*y, x*z, y^2, y*z, z^2]\nJ = auto\nseed = 7\n",
            expected: fixture(1, &[8, 4, 0, 0], &[4, 0], &[0, 0], &[0, 0], 3),
        },
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusOutcome {
    pub name: String,
    pub report: Report,
    /// Differences from the fixture, empty when it matches.
    pub mismatches: Vec<String>,
}

/// Runs `verify` on every corpus pair and compares with the fixtures.
pub fn run_corpus(trials: Option<u32>) -> Result<Vec<CorpusOutcome>> {
    let opts = RunOptions {
        trials,
        ..RunOptions::default()
    };
    corpus()
        .iter()
        .map(|entry| {
            let report = run_command(Command::Verify, &entry.spec(), &opts)?;
            let mismatches = compare(&entry.expected, &report);
            Ok(CorpusOutcome {
                name: entry.name.to_string(),
                report,
                mismatches,
            })
        })
        .collect()
}

fn compare(expected: &Fixture, report: &Report) -> Vec<String> {
    let Report::Verify {
        invariants, depth, ..
    } = report
    else {
        return vec!["not a verify report".into()];
    };
    let actual = Fixture {
        r: invariants.r,
        e_coeffs: invariants.e_coeffs.clone(),
        lambda_p: invariants.lambda_p.clone(),
        delta_cap_p: invariants.delta_cap_p.clone(),
        delta_p: invariants.delta_p.clone(),
        depth: depth.depth,
    };
    let mut out = Vec::new();
    let mut check = |name: &str, a: String, e: String| {
        if a != e {
            out.push(format!("{name}: got {a}, expected {e}"));
        }
    };
    check("r", actual.r.to_string(), expected.r.to_string());
    check("e", format!("{:?}", actual.e_coeffs), format!("{:?}", expected.e_coeffs));
    check("Λ_p", format!("{:?}", actual.lambda_p), format!("{:?}", expected.lambda_p));
    check("Δ_p", format!("{:?}", actual.delta_cap_p), format!("{:?}", expected.delta_cap_p));
    check("δ_p", format!("{:?}", actual.delta_p), format!("{:?}", expected.delta_p));
    check("depth", actual.depth.to_string(), expected.depth.to_string());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> ProblemSpec {
        parse_problem(text).unwrap()
    }

    const SQUARE: &str = "field = QQ\nvars = x, y\nI = [x^2, x*y, y^2]\nJ = [x^2, y^2]\n";

    #[test]
    fn json_round_trip() {
        let report = run_command(Command::Verify, &spec(SQUARE), &RunOptions::default()).unwrap();
        let text = emit_report(&report, Format::Json);
        assert_eq!(parse_report_json(&text).unwrap(), report);
        for key in ["lambda_p", "delta_cap_p", "delta_p", "e0_sigma_p", "e_coeffs", "delta_bar"] {
            assert!(text.contains(&format!("\"{key}\"")), "{key}");
        }
    }

    #[test]
    fn text_lists_rows() {
        let report = run_command(Command::Invariants, &spec(SQUARE), &RunOptions::default()).unwrap();
        let text = emit_report(&report, Format::Text);
        assert!(text.contains("  0    1    0        1    0"), "{text}");
    }

    #[test]
    fn oracle_needs_monomials() {
        let s = spec("field = QQ\nvars = x, y\nI = [x^2, x*y, y^2]\nJ = auto\n");
        assert!(matches!(
            run_command(Command::Oracle, &s, &RunOptions::default()),
            Err(Error::Unsupported(_))
        ));
        let report = run_command(Command::Oracle, &spec(SQUARE), &RunOptions::default()).unwrap();
        let Report::Oracle { rows, .. } = report else { panic!() };
        assert!(rows.iter().all(|r| r.local_length == r.oracle));
    }

    #[test]
    fn equal_pair_is_zero() {
        let report = run_command(
            Command::Invariants,
            &spec("field = QQ\nvars = x, y\nI = [x, y]\nJ = [x, y]\n"),
            &RunOptions::default(),
        )
        .unwrap();
        let Report::Invariants { invariants, .. } = report else { panic!() };
        assert!(invariants.lambda_p.iter().all(|&v| v == 0));
        assert_eq!(invariants.delta_bar, 0);
    }

    #[test]
    fn hilbert_tables() {
        let report = run_command(Command::Hilbert, &spec(SQUARE), &RunOptions::default()).unwrap();
        let Report::Hilbert { tables, e_coeffs, .. } = report else { panic!() };
        assert_eq!(e_coeffs[..2], [4, 1]);
        assert_eq!(tables[0].values[..3], [3, 7, 11]);
    }
}
