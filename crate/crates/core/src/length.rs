//! Lengths of quotients of nested ideals, localized at the origin.
//!
//! For `B ⊆ A` with `A/B` of finite length at the origin, Nakayama gives
//! `length(A/B)_m = dim_k A/(B + m^N A)` once `N` is large, and the sequence
//! in `N` is strictly increasing until it becomes constant. Each term is a
//! difference of standard-monomial counts, so no local orders are needed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::monomial::{monomials_of_degree, Monomial, MonomialOrder};
use crate::polynomial::Polynomial;

/// Truncation cap used when callers have no better bound.
pub const DEFAULT_N_CAP: u32 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalLengthResult {
    pub value: u64,
    /// The `N` at which `dim_k A/(B + m^N A)` was read off.
    pub truncation_level: u32,
    pub stabilized: bool,
}

/// `length(A/B)` in the local ring at the origin.
pub fn local_length(a: &Ideal, b: &Ideal, n_cap: u32) -> Result<LocalLengthResult> {
    if !a.contains_ideal(b)? {
        return Err(Error::Precondition(
            "local_length needs B ⊆ A, but a generator of B lies outside A".into(),
        ));
    }
    if let Some(res) = supported_at_origin(a, b) {
        return Ok(res);
    }
    let n = a.nvars();
    let field = a.field();
    let dim_a = a.quotient_dimension();
    let mut prev: Option<u64> = None;
    let mut last = 0;
    for level in 1..=n_cap.max(1) {
        let c = b.sum(&Ideal::maximal_power(n, field, level).product(a)?)?;
        let value = match dim_a {
            Some(da) => c.quotient_dimension().expect("finite: V(C) ⊆ V(A) ∪ {0}") - da,
            None => truncated_difference(a, &c, level)?,
        };
        if prev == Some(value) {
            return Ok(LocalLengthResult {
                value,
                truncation_level: level - 1,
                stabilized: true,
            });
        }
        prev = Some(value);
        last = value;
    }
    Ok(LocalLengthResult {
        value: last,
        truncation_level: n_cap.max(1),
        stabilized: false,
    })
}

/// Shortcut when `R/B` is finite and lives only at the origin: then every
/// length is global and equals a difference of quotient dimensions.
fn supported_at_origin(a: &Ideal, b: &Ideal) -> Option<LocalLengthResult> {
    let dim_b = b.quotient_dimension()?;
    if dim_b == 0 {
        return Some(LocalLengthResult {
            value: 0,
            truncation_level: 0,
            stabilized: true,
        });
    }
    let level = u32::try_from(dim_b).ok()?;
    if !contains_pure_powers(b, level) {
        return None;
    }
    let dim_a = a.quotient_dimension().expect("A ⊇ B has finite colength");
    Some(LocalLengthResult {
        value: dim_b - dim_a,
        truncation_level: level,
        stabilized: true,
    })
}

fn contains_pure_powers(b: &Ideal, level: u32) -> bool {
    // A homogeneous ideal of finite colength contains a power of m.
    if b.generators().iter().all(Polynomial::is_homogeneous) {
        return true;
    }
    let gb = b.groebner(MonomialOrder::DegRevLex);
    let one = Polynomial::one(b.nvars(), b.field());
    (0..b.nvars()).all(|i| {
        // Square and multiply, reducing after every product.
        let x = Polynomial::var(b.nvars(), b.field(), i);
        let mut acc = one.clone();
        for bit in (0..u32::BITS - level.leading_zeros()).rev() {
            acc = gb.normal_form(&(&acc * &acc));
            if level >> bit & 1 == 1 {
                acc = gb.normal_form(&(&acc * &x));
            }
        }
        acc.is_zero()
    })
}

/// `dim_k A/C` for `C ⊇ m^level A` when `R/A` is infinite: cut both by a
/// power `m^K` with `A ∩ m^K ⊆ C`, which exists by Artin-Rees.
fn truncated_difference(a: &Ideal, c: &Ideal, level: u32) -> Result<u64> {
    let n = a.nvars();
    let field = a.field();
    let mut k = level + 1;
    loop {
        let mk = Ideal::maximal_power(n, field, k);
        if c.contains_ideal(&a.intersection(&mk)?)? {
            let lower = c.sum(&mk)?.quotient_dimension().expect("contains m^K");
            let upper = a.sum(&mk)?.quotient_dimension().expect("contains m^K");
            return Ok(lower - upper);
        }
        k *= 2;
        if k > 4 * DEFAULT_N_CAP {
            return Err(Error::Unsupported(format!(
                "no truncation power m^K with A ∩ m^K ⊆ B + m^{level}A for K ≤ {}",
                4 * DEFAULT_N_CAP
            )));
        }
    }
}

/// Whether `I ⊆ m` and `R_m/I_m` has finite length.
pub fn is_locally_m_primary(ideal: &Ideal) -> Result<bool> {
    if !ideal.in_maximal() {
        return Ok(false);
    }
    let unit = Ideal::unit(ideal.nvars(), ideal.field());
    Ok(local_length(&unit, ideal, DEFAULT_N_CAP)?.stabilized)
}

/// Whether `R/I` is finite and supported only at the origin.
pub fn is_globally_m_primary(ideal: &Ideal) -> bool {
    ideal.in_maximal()
        && match ideal.quotient_dimension() {
            Some(0) | None => false,
            Some(l) => u32::try_from(l).is_ok_and(|l| contains_pure_powers(ideal, l)),
        }
}

/// Counts monomials in `A ∖ B` by enumerating degrees. Uses only
/// divisibility of exponent vectors, independent of Groebner bases.
pub fn monomial_length_oracle(a: &Ideal, b: &Ideal) -> Result<u64> {
    const DEGREE_CAP: u32 = 400;
    if a.nvars() != b.nvars() {
        return Err(Error::Structural("ideals in different rings".into()));
    }
    let (Some(ga), Some(gb)) = (monomial_gens(a), monomial_gens(b)) else {
        return Err(Error::Precondition("the lattice-point oracle needs monomial ideals".into()));
    };
    let in_ideal = |gens: &[Monomial], m: &Monomial| gens.iter().any(|g| g.divides(m));
    if !gb.iter().all(|m| in_ideal(&ga, m)) {
        return Err(Error::Precondition("oracle needs B ⊆ A".into()));
    }
    let top = ga.iter().map(Monomial::degree).max().unwrap_or(0);
    let mut total = 0u64;
    for deg in 0..=DEGREE_CAP {
        let count = monomials_of_degree(a.nvars(), deg)
            .iter()
            .filter(|m| in_ideal(&ga, m) && !in_ideal(&gb, m))
            .count() as u64;
        total += count;
        // Past the generator degrees of A, A_{D+1} = m*A_D, so an empty
        // degree stays empty forever.
        if count == 0 && deg >= top {
            return Ok(total);
        }
    }
    Err(Error::Precondition(format!(
        "A/B has monomials beyond degree {DEGREE_CAP}; the quotient is not finite"
    )))
}

fn monomial_gens(ideal: &Ideal) -> Option<Vec<Monomial>> {
    ideal
        .generators()
        .iter()
        .map(|g| {
            g.is_monomial()
                .then(|| g.terms().next().map(|(m, _)| m.clone()))
                .flatten()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::scalar::Field;

    fn ideal(names: &[&str], gens: &[&str]) -> Ideal {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let gens = gens
            .iter()
            .map(|g| parse_polynomial(g, &names, Field::Rationals).unwrap())
            .collect();
        Ideal::new(names.len(), Field::Rationals, gens).unwrap()
    }

    const XY: &[&str] = &["x", "y"];

    #[test]
    fn basic_lengths() {
        let unit = ideal(XY, &["1"]);
        let m2 = ideal(XY, &["x^2", "x*y", "y^2"]);
        assert_eq!(local_length(&unit, &m2, 60).unwrap().value, 3);
        assert_eq!(local_length(&m2, &m2, 60).unwrap().value, 0);
        let j = ideal(XY, &["x^2", "y^2"]);
        let r = local_length(&m2, &j, 60).unwrap();
        assert_eq!(r.value, 1);
        assert!(r.stabilized);
        assert_eq!(monomial_length_oracle(&m2, &j).unwrap(), 1);
    }

    #[test]
    fn oracle_examples() {
        let m = ideal(XY, &["x", "y"]);
        let m2 = ideal(XY, &["x^2", "x*y", "y^2"]);
        assert_eq!(monomial_length_oracle(&m, &m2).unwrap(), 2);
        assert_eq!(monomial_length_oracle(&m2, &m2).unwrap(), 0);
        assert!(monomial_length_oracle(&ideal(XY, &["x + y"]), &m2).is_err());
        assert!(monomial_length_oracle(&ideal(XY, &["x"]), &ideal(XY, &["x^2"])).is_err());
    }

    #[test]
    fn non_nested_rejected() {
        let err = local_length(&ideal(XY, &["x"]), &ideal(XY, &["y"]), 60).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn off_origin_component_is_discarded() {
        // x^2*(x - 1) has a double root at 0 and a simple root at 1.
        let a = ideal(&["x"], &["x"]);
        let b = ideal(&["x"], &["x^3 - x^2"]);
        let r = local_length(&a, &b, 60).unwrap();
        assert!(r.stabilized);
        assert_eq!(r.value, 1);
        assert_eq!(b.quotient_dimension().unwrap() - a.quotient_dimension().unwrap(), 2);
        // x*(x - 1) is a unit multiple of x near the origin.
        let b = ideal(&["x"], &["x^2 - x"]);
        assert_eq!(local_length(&a, &b, 60).unwrap().value, 0);
    }

    #[test]
    fn infinite_colength_ambient() {
        // A = (x), B = (x^2, x*y): A/B is spanned by x.
        let r = local_length(&ideal(XY, &["x"]), &ideal(XY, &["x^2", "x*y"]), 60).unwrap();
        assert!(r.stabilized);
        assert_eq!(r.value, 1);
    }

    #[test]
    fn m_primary_checks() {
        assert!(is_locally_m_primary(&ideal(XY, &["x^2", "y^3"])).unwrap());
        assert!(!is_locally_m_primary(&ideal(XY, &["x"])).unwrap());
        assert!(!is_locally_m_primary(&ideal(XY, &["x + 1", "y"])).unwrap());
        assert!(is_locally_m_primary(&ideal(XY, &["x^2 - x", "y"])).unwrap());
        assert!(!is_globally_m_primary(&ideal(XY, &["x^2 - x", "y"])));
        assert!(is_globally_m_primary(&ideal(XY, &["x^2", "y"])));
    }

    #[test]
    fn unstabilized_when_not_finite() {
        let unit = ideal(XY, &["1"]);
        let r = local_length(&unit, &ideal(XY, &["x"]), 6).unwrap();
        assert!(!r.stabilized);
        assert_eq!(r.truncation_level, 6);
    }
}
