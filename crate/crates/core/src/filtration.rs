//! The pair `(I, J)`: reduction checks, reduction number, and random minimal
//! reductions.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Mutex;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::length::{is_locally_m_primary, local_length, DEFAULT_N_CAP};
use crate::polynomial::Polynomial;
use crate::scalar::{Field, Scalar};

pub const DEFAULT_R_MAX: u32 = 30;
pub const DEFAULT_RETRIES: u32 = 5;

/// Half-width of the integer range random coefficients are drawn from over `Q`.
const COEFF_RANGE: i64 = 5000;

/// An m-primary ideal `I` with a verified minimal reduction `J`.
pub struct PairContext {
    i: Ideal,
    j: Ideal,
    d: usize,
    r: u32,
    seed: Option<u64>,
    n_cap: u32,
    /// `J^a I^b` keyed by `(a, b)`.
    ladder: Mutex<HashMap<(u32, u32), Ideal>>,
}

impl std::fmt::Debug for PairContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PairContext")
            .field("i", &self.i)
            .field("j", &self.j)
            .field("d", &self.d)
            .field("r", &self.r)
            .field("seed", &self.seed)
            .finish()
    }
}

impl PairContext {
    /// Verifies that `j` is a minimal reduction of `i` with reduction number at most `r_max`.
    pub fn new(i: Ideal, j: Ideal, r_max: u32) -> Result<PairContext> {
        Self::build(i, j, r_max, None)
    }

    fn build(i: Ideal, j: Ideal, r_max: u32, seed: Option<u64>) -> Result<PairContext> {
        let d = i.nvars();
        if j.generators().len() != d {
            return Err(Error::Precondition(format!(
                "a minimal reduction in dimension {d} needs {d} generators, J has {}",
                j.generators().len()
            )));
        }
        if !is_locally_m_primary(&i)? {
            return Err(Error::Precondition("I is not m-primary at the origin".into()));
        }
        let r = verify_reduction(&i, &j, r_max)?.ok_or_else(|| {
            Error::Precondition(format!(
                "J is not a reduction of I with reduction number at most {r_max}"
            ))
        })?;
        Ok(Self::assemble(i, j, r, seed))
    }

    fn assemble(i: Ideal, j: Ideal, r: u32, seed: Option<u64>) -> PairContext {
        PairContext {
            d: i.nvars(),
            i,
            j,
            r,
            seed,
            n_cap: DEFAULT_N_CAP,
            ladder: Mutex::new(HashMap::new()),
        }
    }

    pub fn i(&self) -> &Ideal {
        &self.i
    }

    pub fn j(&self) -> &Ideal {
        &self.j
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// The reduction number `r_J(I)`.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Seed of the random draw that produced `J`, if generated.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn field(&self) -> Field {
        self.i.field()
    }

    /// `J^a I^b`, memoized.
    pub fn mixed(&self, a: u32, b: u32) -> Ideal {
        if let Some(found) = self.ladder.lock().expect("ladder lock").get(&(a, b)) {
            return found.clone();
        }
        let value = match (a, b) {
            (0, 0) => Ideal::unit(self.i.nvars(), self.field()),
            (_, 0) => self.mixed(a - 1, 0).product(&self.j).expect("same ring"),
            _ => self.mixed(a, b - 1).product(&self.i).expect("same ring"),
        };
        self.ladder
            .lock()
            .expect("ladder lock")
            .entry((a, b))
            .or_insert(value)
            .clone()
    }

    /// `I^n`.
    pub fn i_power(&self, n: u32) -> Ideal {
        self.mixed(0, n)
    }

    /// `J^n`.
    pub fn j_power(&self, n: u32) -> Ideal {
        self.mixed(n, 0)
    }

    /// `length(A/B)` at the origin; fails when the quotient is not finite.
    pub fn length(&self, a: &Ideal, b: &Ideal) -> Result<u64> {
        finite_length(a, b, self.n_cap)
    }
}

fn finite_length(a: &Ideal, b: &Ideal, n_cap: u32) -> Result<u64> {
    let res = local_length(a, b, n_cap)?;
    if !res.stabilized {
        return Err(Error::Precondition(format!(
            "quotient length did not stabilize by m^{}; it is not finite at the origin",
            res.truncation_level
        )));
    }
    Ok(res.value)
}

/// Least `r ≤ r_max` with `I^{r+1} = J I^r` at the origin, or `None`.
pub fn verify_reduction(i: &Ideal, j: &Ideal, r_max: u32) -> Result<Option<u32>> {
    if !i.contains_ideal(j)? {
        return Err(Error::Precondition("J ⊄ I: a generator of J lies outside I".into()));
    }
    // A reduction of an m-primary ideal is m-primary.
    if !is_locally_m_primary(j)? {
        return Ok(None);
    }
    let mut i_pow = Ideal::unit(i.nvars(), i.field());
    for r in 0..=r_max {
        let next = i_pow.product(i)?;
        let ji = j.product(&i_pow)?;
        if finite_length(&next, &ji, DEFAULT_N_CAP)? == 0 {
            let after = next.product(i)?;
            let j_next = j.product(&next)?;
            let again = finite_length(&after, &j_next, DEFAULT_N_CAP)?;
            if again != 0 {
                return Err(Error::invariant(
                    "reduction persistence",
                    format!("I^{} = J I^{r} but length(I^{}/J I^{}) = {again}", r + 1, r + 2, r + 1),
                ));
            }
            return Ok(Some(r));
        }
        i_pow = next;
    }
    Ok(None)
}

/// Draws `d` random scalar combinations of the generators of `I` until one
/// forms a reduction. Makes `1 + retries` attempts.
pub fn generate_minimal_reduction(
    i: &Ideal,
    seed: u64,
    r_max: u32,
    retries: u32,
) -> Result<PairContext> {
    let d = i.nvars();
    if d == 0 {
        return Err(Error::Precondition("the ambient ring has no variables".into()));
    }
    if !is_locally_m_primary(i)? {
        return Err(Error::Precondition("I is not m-primary at the origin".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut transcript = String::new();
    let attempts = retries as usize + 1;
    for attempt in 1..=attempts {
        let gens: Vec<Polynomial> = (0..d).map(|_| random_combination(i, &mut rng)).collect();
        let j = Ideal::new(d, i.field(), gens)?;
        if j.generators().len() != d {
            let _ = writeln!(transcript, "attempt {attempt}: a combination vanished");
            continue;
        }
        match verify_reduction(i, &j, r_max)? {
            Some(r) => return Ok(PairContext::assemble(i.clone(), j, r, Some(seed))),
            None => {
                let _ = writeln!(
                    transcript,
                    "attempt {attempt}: not a reduction with r ≤ {r_max}"
                );
            }
        }
    }
    Err(Error::Generation {
        attempts,
        transcript,
    })
}

fn random_combination(i: &Ideal, rng: &mut ChaCha8Rng) -> Polynomial {
    let field = i.field();
    let mut acc = Polynomial::zero(i.nvars(), field);
    for b in i.generators() {
        let c: Scalar = match field {
            Field::Rationals => field.from_i64(rng.random_range(-COEFF_RANGE..=COEFF_RANGE)),
            Field::Prime(p) => field.from_i64(rng.random_range(0..p) as i64),
        };
        acc = &acc + &b.scale(&c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn ideal(gens: &[&str]) -> Ideal {
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let n = if gens.iter().any(|g| g.contains('z')) { 3 } else { 2 };
        let gens = gens
            .iter()
            .map(|g| parse_polynomial(g, &names[..n], Field::Rationals).unwrap())
            .collect();
        Ideal::new(n, Field::Rationals, gens).unwrap()
    }

    #[test]
    fn reduction_numbers() {
        let m = ideal(&["x", "y"]);
        assert_eq!(verify_reduction(&m, &m, 5).unwrap(), Some(0));
        let i = ideal(&["x^2", "x*y", "y^2"]);
        assert_eq!(verify_reduction(&i, &ideal(&["x^2", "y^2"]), 5).unwrap(), Some(1));
        assert_eq!(verify_reduction(&i, &ideal(&["x^2"]), 5).unwrap(), None);
        let i = ideal(&["x^4", "x^3*y", "x*y^3", "y^4"]);
        assert_eq!(verify_reduction(&i, &ideal(&["x^4", "y^4"]), 5).unwrap(), Some(2));
    }

    #[test]
    fn non_contained_reduction_rejected() {
        let i = ideal(&["x^2", "y^2"]);
        assert!(matches!(
            verify_reduction(&i, &ideal(&["x", "y"]), 3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn generated_reduction_is_verified_and_reproducible() {
        let i = ideal(&["x^2", "x*y", "y^2"]);
        let a = generate_minimal_reduction(&i, 11, DEFAULT_R_MAX, DEFAULT_RETRIES).unwrap();
        let b = generate_minimal_reduction(&i, 11, DEFAULT_R_MAX, DEFAULT_RETRIES).unwrap();
        assert_eq!(a.j().generators(), b.j().generators());
        assert_eq!(a.r(), 1);
        assert_eq!(a.seed(), Some(11));
        for n in a.r()..=a.r() + 3 {
            let len = a.length(&a.i_power(n + 1), &a.mixed(1, n)).unwrap();
            assert_eq!(len, 0);
        }
    }

    #[test]
    fn maximal_ideal_is_its_own_reduction() {
        let m = ideal(&["x", "y"]);
        let ctx = generate_minimal_reduction(&m, 3, 5, 0).unwrap();
        assert_eq!(ctx.r(), 0);
        assert!(ctx.j().equals(&m).unwrap());
    }

    #[test]
    fn ladder_is_consistent() {
        let ctx = PairContext::new(ideal(&["x^2", "x*y", "y^2"]), ideal(&["x^2", "y^2"]), 5).unwrap();
        let direct = ctx.j_power(2).product(&ctx.i_power(1)).unwrap();
        assert!(ctx.mixed(2, 1).equals(&direct).unwrap());
        assert!(ctx.i_power(0).is_unit());
    }
}
