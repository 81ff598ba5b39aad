//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::Command as Process;
use std::time::{Duration, Instant};

use blowup_core::fitting::binomial;
use blowup_core::groebner::buchberger_in;
use blowup_core::report::build_context;
use blowup_core::{
    build_report, corpus, generate_minimal_reduction, hilbert_coefficients, local_length,
    monomial_length_oracle, parse_problem, run_command, run_corpus, sally_length,
    sigma_piece_length, Command, Field, Ideal, Monomial, MonomialOrder, Polynomial, Report,
    RunOptions, Status,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < budget, || format!("took {took:.1?}, budget {budget:?}"))
}

fn mono_ideal(n: usize, field: Field, exps: &[Vec<u32>]) -> Ideal {
    let gens = exps
        .iter()
        .map(|e| Polynomial::monomial(field, Monomial::new(e.clone()), field.one()))
        .collect();
    Ideal::new(n, field, gens).unwrap()
}

fn random_exponent(rng: &mut ChaCha8Rng, n: usize, max_deg: u32) -> Vec<u32> {
    let mut e = vec![0; n];
    let deg = rng.random_range(1..=max_deg);
    for _ in 0..deg {
        e[rng.random_range(0..n)] += 1;
    }
    e
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `B ⊆ A` monomial with `A/B` of finite length and generators of degree at
/// most 6. Odd draws take `B = A*Q` with `A` arbitrary, so `R/B` may be
/// infinite and the truncation path runs.
fn nested_pair(rng: &mut ChaCha8Rng, k: usize) -> (usize, Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let n = rng.random_range(1..=3);
    if k % 2 == 1 {
        let a: Vec<Vec<u32>> = (0..rng.random_range(1..=3)).map(|_| random_exponent(rng, n, 3)).collect();
        let mut q: Vec<Vec<u32>> = (0..n)
            .map(|v| (0..n).map(|j| if j == v { rng.random_range(1..=3) } else { 0 }).collect())
            .collect();
        q.push(random_exponent(rng, n, 3));
        let b = a
            .iter()
            .flat_map(|x| q.iter().map(move |y| x.iter().zip(y).map(|(s, t)| s + t).collect()))
            .collect();
        return (n, a, b);
    }
    let unit = |i: usize, k: u32| (0..n).map(|j| if i == j { k } else { 0 }).collect::<Vec<u32>>();
    let powers: Vec<u32> = (0..n).map(|_| rng.random_range(1..=6)).collect();
    let mut i_gens: Vec<Vec<u32>> = (0..n).map(|v| unit(v, powers[v])).collect();
    for _ in 0..rng.random_range(0..=3) {
        i_gens.push(random_exponent(rng, n, 6));
    }
    let mut j_gens: Vec<Vec<u32>> = (0..n).map(|v| unit(v, rng.random_range(powers[v]..=6))).collect();
    for _ in 0..rng.random_range(0..=4) {
        let e = random_exponent(rng, n, 6);
        if i_gens.iter().any(|g| divides(g, &e)) {
            j_gens.push(e);
        }
    }
    (n, i_gens, j_gens)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pairs = 200;
    for k in 0..pairs {
        let (n, a, b) = nested_pair(&mut rng, k);
        let (ia, ib) = (mono_ideal(n, Field::Rationals, &a), mono_ideal(n, Field::Rationals, &b));
        let got = local_length(&ia, &ib, 60).map_err(|e| format!("pair {k}: {e}"))?;
        let want = monomial_length_oracle(&ia, &ib).map_err(|e| format!("pair {k}: {e}"))?;
        ensure(got.value == want, || format!("pair {k}: {a:?} / {b:?}: {} vs oracle {want}", got.value))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{pairs} pairs in {:.1?}", start.elapsed()))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let entries = corpus();
    for entry in &entries {
        let name = entry.name;
        let ctx = build_context(&entry.spec(), &RunOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        let rep = build_report(&ctx, None).map_err(|e| format!("{name}: {e}"))?;
        let d = rep.d;
        let err = |what: &str| format!("{name}: {what}");
        ensure(rep.e(0) == rep.length_r_mod_j as i64, || err("e_0 != length(R/J)"))?;
        ensure(rep.e(1) == rep.e0_sigma_p.iter().sum::<u64>() as i64, || err("e_1 != Σ e_0(Σ_p)"))?;
        ensure(rep.lambda as i64 - rep.e(1) == rep.delta as i64, || err("δ != Λ - e_1"))?;
        ensure(rep.lambda == rep.lambda_p.iter().sum::<u64>(), || err("Λ != Σ Λ_p"))?;
        for p in 0..rep.delta_p.len() {
            ensure(rep.delta_cap_p[p] >= rep.delta_p[p], || err(&format!("Δ_{p} < δ_{p}")))?;
        }
        ensure(rep.delta_p.first() == Some(&0), || err("δ_0 != 0"))?;
        let lambda0 = rep.lambda_p[0] as i128;
        for (i, v) in rep.sigma[0].samples() {
            let want = lambda0 * binomial(i as i128 + d as i128 - 1, d as u32 - 1);
            ensure(i128::from(v) == want, || err(&format!("σ_(0,{i}) = {v}, expected {want}")))?;
        }
        for p in 0..rep.k_piece.len() as u32 {
            for i in 0..3 {
                blowup_core::k_piece_length(&ctx, p, i).map_err(|e| err(&e.to_string()))?;
            }
        }
        // Split of the antidiagonal totals, recomputed from the pieces.
        let len_i_mod_j = rep.length_r_mod_j - rep.length_r_mod_i;
        for (m, total) in rep.antidiagonal.samples() {
            let m = m as u32;
            let direct: i64 = (0..m)
                .map(|p| match rep.sigma.get(p as usize).and_then(|row| row.get(i64::from(m - 1 - p))) {
                    Some(v) => v,
                    None => sigma_piece_length(&ctx, p, m - 1 - p).unwrap() as i64,
                })
                .sum();
            let sally = match rep.sally_samples.get(i64::from(m) - 1) {
                Some(v) => v as u64,
                None => sally_length(&ctx, m - 1).unwrap(),
            };
            let split = sally + ctx.length(&ctx.mixed(m - 1, 1), &ctx.j_power(m)).unwrap();
            ensure(direct == total && split as i64 == direct, || {
                err(&format!("antidiagonal m = {m}: report {total}, pieces {direct}, split {split}"))
            })?;
            if i64::from(m) >= rep.antidiagonal_postulation.max(1) {
                let poly: i128 = (0..d)
                    .map(|i| {
                        let k = (d - i - 1) as u32;
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        sign * rep.e(i + 1) as i128 * binomial(i128::from(m) - 1 + i128::from(k), k)
                    })
                    .sum();
                ensure(poly == i128::from(total), || err(&format!("antidiagonal polynomial at m = {m}")))?;
            }
        }
        if !rep.sally_vanishes {
            ensure(rep.s_coeffs[0] == rep.e(1) - len_i_mod_j as i64, || err("s_0 != e_1 - length(I/J)"))?;
            for i in 1..rep.s_coeffs.len() {
                ensure(rep.s_coeffs[i] == rep.e(i + 1), || err(&format!("s_{i} != e_{}", i + 1)))?;
            }
        }
    }
    ensure(entries.iter().any(|e| e.name == "square") && entries.iter().any(|e| e.name == "quartic"), || {
        "corpus misses a required pair".into()
    })?;
    within(start, Duration::from_secs(120))?;
    Ok(format!("{} pairs in {:.1?}", entries.len(), start.elapsed()))
}

fn verify(text: &str) -> Result<Report, String> {
    let spec = parse_problem(text).map_err(|e| e.to_string())?;
    run_command(Command::Verify, &spec, &RunOptions::default()).map_err(|e| e.to_string())
}

fn criterion_3() -> Check {
    let e2 = verify("field = QQ\nvars = x, y\nI = [x^2, x*y, y^2]\nJ = [x^2, y^2]\n")?;
    let Report::Verify { invariants: r, depth, .. } = e2 else {
        return Err("unexpected report kind".into());
    };
    let row = (r.e(0), r.e(1), r.lambda, r.delta_cap, r.delta, r.delta_bar, r.r);
    ensure(row == (4, 1, 1, 0, 0, 0, 1), || format!("E2 row {row:?}"))?;
    ensure(depth.depth == 2, || format!("E2 depth {}", depth.depth))?;

    let triv = verify("field = QQ\nvars = x, y\nI = [x, y]\nJ = [x, y]\n")?;
    let Report::Verify { invariants: r, depth, .. } = triv else {
        return Err("unexpected report kind".into());
    };
    let zeros = r.lambda_p.iter().chain(&r.delta_cap_p).chain(&r.e0_sigma_p).chain(&r.delta_p).all(|&v| v == 0);
    ensure(zeros && r.lambda == 0 && r.delta_cap == 0 && r.delta == 0 && r.delta_bar == 0, || {
        "trivial pair has a nonzero entry".into()
    })?;
    ensure(r.e(1) == 0, || format!("trivial e_1 = {}", r.e(1)))?;
    ensure(depth.depth == 2, || format!("trivial depth {}", depth.depth))?;
    Ok("E2 and trivial fixtures".into())
}

fn criterion_4() -> Check {
    let outcomes = run_corpus(None).map_err(|e| e.to_string())?;
    let mut applicable = 0;
    for o in &outcomes {
        ensure(o.mismatches.is_empty(), || format!("{}: {}", o.name, o.mismatches.join("; ")))?;
        let Report::Verify { invariants, depth, verdicts, .. } = &o.report else {
            return Err(format!("{}: unexpected report kind", o.name));
        };
        for v in verdicts {
            ensure(v.status != Status::Fail, || format!("{}: ({}) failed: {}", o.name, v.label, v.detail))?;
            applicable += usize::from(v.status == Status::Pass);
        }
        if invariants.delta_cap == 0 {
            ensure(depth.depth == invariants.d, || {
                format!("{}: Δ = 0 but depth {} < d = {}", o.name, depth.depth, invariants.d)
            })?;
        }
    }
    Ok(format!("{} pairs, {applicable} applicable verdicts pass", outcomes.len()))
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, field: Field) -> Polynomial {
    let terms = rng.random_range(1..=4);
    Polynomial::from_terms(
        n,
        field,
        (0..terms).map(|_| {
            let deg = rng.random_range(0..=5);
            let mut e = vec![0u32; n];
            for _ in 0..deg {
                e[rng.random_range(0..n)] += 1;
            }
            (Monomial::new(e), field.from_i64(rng.random_range(-7..=7)))
        }),
    )
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ideals = 120;
    for k in 0..ideals {
        let field = if k % 2 == 0 { Field::Rationals } else { Field::Prime(32003) };
        let n = rng.random_range(1..=3);
        let gens: Vec<Polynomial> = (0..rng.random_range(1..=4)).map(|_| random_poly(&mut rng, n, field)).collect();
        for ord in [MonomialOrder::DegRevLex, MonomialOrder::Lex, MonomialOrder::Elimination { block: 1 }] {
            let gb = buchberger_in(n, field, &gens, ord).map_err(|e| e.to_string())?;
            ensure(gb.is_certified(), || format!("ideal {k}: basis not certified"))?;
            let mut perm = gens.clone();
            perm.reverse();
            let len = perm.len();
            perm.rotate_left(k % len);
            let gb2 = buchberger_in(n, field, &perm, ord).map_err(|e| e.to_string())?;
            ensure(gb == gb2, || format!("ideal {k}: basis depends on generator order"))?;
        }
        let a = Ideal::new(n, field, gens.clone()).unwrap();
        let other: Vec<Polynomial> = (0..2).map(|_| random_poly(&mut rng, n, field)).collect();
        let b = Ideal::new(n, field, other).unwrap();
        let meet = a.intersection(&b).map_err(|e| e.to_string())?;
        ensure(a.contains_ideal(&meet).unwrap() && b.contains_ideal(&meet).unwrap(), || {
            format!("ideal {k}: intersection not contained in both")
        })?;
        // A ∩ B ⊇ A·B closes the other direction up to products.
        for f in a.generators() {
            for g in b.generators() {
                ensure(meet.contains(&(f * g)).unwrap(), || format!("ideal {k}: product outside intersection"))?;
            }
        }
        let f = &random_poly(&mut rng, n, field) + &Polynomial::var(n, field, 0);
        if !f.is_zero() {
            let c = a.colon(&f).map_err(|e| e.to_string())?;
            for g in c.generators() {
                ensure(a.contains(&(g * &f)).unwrap(), || format!("ideal {k}: colon element fails"))?;
            }
            ensure(c.contains_ideal(&a).unwrap(), || format!("ideal {k}: A not inside A : f"))?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{ideals} ideals in {:.1?}", start.elapsed()))
}

fn criterion_6() -> Check {
    let mut lines = Vec::new();
    for field in [Field::Rationals, Field::Prime(32003)] {
        let sq: Vec<Vec<u32>> = (0..3)
            .flat_map(|a| (a..3).map(move |b| {
                let mut e = vec![0; 3];
                e[a] += 1;
                e[b] += 1;
                e
            }))
            .collect();
        let i = mono_ideal(3, field, &sq);
        let mut coeffs = Vec::new();
        for seed in [1u64, 2] {
            let ctx = generate_minimal_reduction(&i, seed, 30, 5).map_err(|e| e.to_string())?;
            coeffs.push(hilbert_coefficients(&ctx).map_err(|e| e.to_string())?.e);
        }
        ensure(coeffs[0] == coeffs[1], || format!("{field:?}: {:?} vs {:?}", coeffs[0], coeffs[1]))?;
        lines.push(format!("{field:?} {:?}", coeffs[0]));
    }
    Ok(lines.join(", "))
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let path = std::env::temp_dir().join(format!("blowup-acceptance-{}.txt", std::process::id()));
    std::fs::write(&path, "field = QQ\nvars = x, y\nI = [x^4, x^3*y, x*y^3, y^4]\nJ = [x^4, y^4]\n")
        .map_err(|e| e.to_string())?;
    let run = || {
        Process::new(env!("CARGO_BIN_EXE_blowup"))
            .args(["verify", "--json", "--seed", "7"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())
    };
    let (first, second) = (run()?, run()?);
    let _ = std::fs::remove_file(&path);
    ensure(first.status.success(), || String::from_utf8_lossy(&first.stderr).into_owned())?;
    ensure(first.stdout == second.stdout, || "outputs differ".into())?;
    within(start, Duration::from_secs(600))?;
    Ok(format!("{} bytes twice in {:.1?}", first.stdout.len(), start.elapsed()))
}

fn main() {
    let criteria: [(u32, fn() -> Check); 7] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
    ];
    let mut failed = 0;
    for (k, run) in criteria {
        match run() {
            Ok(note) => println!("criterion {k}: PASS ({note})"),
            Err(why) => {
                failed += 1;
                println!("criterion {k}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
