use blowup_core::depth::{depth_gr, gr_presentation, verify_theorems, Status};
use blowup_core::{
    build_report, emit_report, generate_minimal_reduction, hilbert_coefficients, parse_report_json,
    Field, Format, Ideal, Monomial, Polynomial, Report, SampleKind, SampledFunction,
};
use blowup_core::report::{OracleRow, PairSummary};
use proptest::prelude::*;

/// m-primary monomial ideals of `k[x, y]` with generators of degree at most 4.
fn primary_pair_ideal() -> impl Strategy<Value = Vec<Vec<u32>>> {
    (1u32..=4, 1u32..=4, prop::collection::vec((0u32..=3, 0u32..=3), 0..=3)).prop_map(|(a, b, extra)| {
        let mut gens = vec![vec![a, 0], vec![0, b]];
        gens.extend(
            extra
                .into_iter()
                .filter(|(p, q)| p + q >= 1 && p + q <= 4)
                .map(|(p, q)| vec![p, q]),
        );
        gens
    })
}

fn ideal(field: Field, exps: &[Vec<u32>]) -> Ideal {
    let gens = exps
        .iter()
        .map(|e| Polynomial::monomial(field, Monomial::new(e.clone()), field.one()))
        .collect();
    Ideal::new(2, field, gens).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// `build_report` validates every identity internally; any violation is an error.
    #[test]
    fn identities_and_bounds_hold(exps in primary_pair_ideal(), seed in 0u64..1000) {
        let field = Field::Prime(32003);
        let i = ideal(field, &exps);
        let ctx = generate_minimal_reduction(&i, seed, 30, 5).unwrap();
        let report = build_report(&ctx, None).unwrap();
        prop_assert_eq!(report.e(0), report.length_r_mod_j as i64);
        prop_assert_eq!(report.lambda as i64 - report.e(1), report.delta as i64);
        for p in 0..report.lambda_p.len() {
            prop_assert!(report.delta_cap_p[p] >= report.delta_p[p]);
        }
        let depth = depth_gr(&gr_presentation(ctx.i()).unwrap(), 4, seed).unwrap();
        prop_assert!(depth.depth <= 2);
        for v in verify_theorems(&report, &depth) {
            prop_assert!(v.status != Status::Fail, "{:?}", v);
        }
        // Valabrega-Valla: Δ = 0 forces Cohen-Macaulay.
        if report.delta_cap == 0 {
            prop_assert!(depth.is_cm);
        }
    }

    #[test]
    fn hilbert_coefficients_do_not_depend_on_the_reduction(
        exps in primary_pair_ideal(),
        s1 in 0u64..1000,
        s2 in 1000u64..2000,
    ) {
        let i = ideal(Field::Prime(32003), &exps);
        let a = hilbert_coefficients(&generate_minimal_reduction(&i, s1, 30, 5).unwrap()).unwrap();
        let b = hilbert_coefficients(&generate_minimal_reduction(&i, s2, 30, 5).unwrap()).unwrap();
        prop_assert_eq!(a.e, b.e);
    }
}

fn summary() -> impl Strategy<Value = PairSummary> {
    (
        prop::collection::vec("[a-z][a-z0-9]{0,3}", 1..4),
        prop::collection::vec("[ -~]{0,12}", 0..4),
        any::<bool>(),
        any::<u64>(),
        0u32..10,
    )
        .prop_map(|(vars, gens, generated, seed, r)| PairSummary {
            field: "QQ".into(),
            d: vars.len(),
            vars,
            i: gens.clone(),
            j: gens,
            generated,
            seed,
            r,
        })
}

fn report() -> impl Strategy<Value = Report> {
    let oracle = (summary(), prop::collection::vec(("[ -~]{0,10}", any::<u64>(), any::<u64>()), 0..6))
        .prop_map(|(pair, rows)| Report::Oracle {
            pair,
            rows: rows
                .into_iter()
                .map(|(quotient, local_length, oracle)| OracleRow {
                    quotient,
                    local_length,
                    oracle,
                })
                .collect(),
        });
    let hilbert = (
        summary(),
        prop::collection::vec(any::<i64>(), 0..5),
        prop::collection::vec(any::<i64>(), 0..5),
        prop::collection::vec((any::<i64>(), prop::collection::vec(any::<i64>(), 0..8), 0u32..5), 0..4),
    )
        .prop_map(|(pair, e, s, tables)| Report::Hilbert {
            pair,
            e_coeffs: e,
            s_coeffs: s,
            tables: tables
                .into_iter()
                .map(|(start, values, p)| SampledFunction::new(SampleKind::SigmaDiagonal(p), start, values))
                .collect(),
        });
    prop_oneof![oracle, hilbert]
}

proptest! {
    #[test]
    fn json_round_trips(r in report()) {
        let text = emit_report(&r, Format::Json);
        prop_assert_eq!(parse_report_json(&text).unwrap(), r);
    }
}
