//! Inputs shared by the benchmarks.

use blowup_core::{corpus, parse_polynomial, Field, Ideal, ProblemSpec};

/// A built-in pair by name.
pub fn corpus_spec(name: &str) -> ProblemSpec {
    corpus()
        .into_iter()
        .find(|e| e.name == name)
        .unwrap_or_else(|| panic!("no corpus pair named {name}"))
        .spec()
}

fn ideal(field: Field, gens: &[&str]) -> Ideal {
    let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let gens = gens
        .iter()
        .map(|g| parse_polynomial(g, &names, field).expect("fixture parses"))
        .collect();
    Ideal::new(3, field, gens).expect("fixture ideal")
}

/// Three dense polynomials in `x, y, z` with finitely many common zeros.
pub fn dense_system(field: Field) -> Ideal {
    ideal(
        field,
        &[
            "-5*x*y^2*z - 7*x^2*z - 4",
            "-2*x*y^2 - 2*y^3 + 2*x + 7*y",
            "-3*x*y^3*z + 2*y^2*z - 2*x^2",
        ],
    )
}

/// Two non-monomial ideals whose intersection needs an elimination.
pub fn intersection_pair(field: Field) -> (Ideal, Ideal) {
    (
        ideal(field, &["4*y*z^3", "x^3*y + 6*x^2*z^2 + 6*x*y*z^2 - 4*x*y"]),
        ideal(
            field,
            &["-7*x^3*z^2 + 2*x^2*y*z - 3*x*y^2 - 5*x^2", "6*y^3*z^2 - x*z^2 - 7*x*y - 4*x"],
        ),
    )
}
