//! Groebner bases over `Q` by computing modulo primes, lifting with the
//! Chinese remainder theorem and rational reconstruction, and certifying
//! the lift exactly.
//!
//! The computation runs on the homogenized generators, so the certificate
//! is complete: if the lift `G` is a Groebner basis over `Q`, contains the
//! homogenized input, and has the same leading monomials as the reduced
//! basis of the input modulo `p`, then the Hilbert functions force
//! `<G> = <F^h>`. Dehomogenizing then gives a basis of `<F>` under the
//! original order, because the homogenized order compares the `x` part
//! first.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::engine::{self, EPoly, IntArith, ModArith, Term, TermOrder};
use crate::monomial::{Monomial, MonomialOrder};
use crate::scalar::{is_prime, mod_inverse, MAX_PRIME};

/// Widest coefficient the direct fraction-free run may produce before the
/// modular path takes over.
const DIRECT_BIT_CAP: u64 = 512;
const MAX_PRIMES: usize = 400;

/// `base` on the first `n` variables, ties broken by the power of the
/// homogenizing variable `x_n`.
#[derive(Clone, Copy, Debug)]
struct Homogenized {
    base: MonomialOrder,
    n: usize,
}

impl TermOrder for Homogenized {
    fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ae, be) = (a.exponents(), b.exponents());
        let (ah, bh) = (ae[self.n], be[self.n]);
        self.base
            .cmp_exponents(&ae[..self.n], a.degree() - ah, &be[..self.n], b.degree() - bh)
            .then(ah.cmp(&bh))
    }

    fn is_degree_compatible(&self) -> bool {
        false
    }
}

/// Reduced basis over `Q` of primitive integer generators, each sorted
/// descending under `ord`.
pub(crate) fn rational_groebner(ord: MonomialOrder, nvars: usize, gens: Vec<EPoly<BigInt>>) -> Vec<EPoly<BigInt>> {
    if let Some(gb) = engine::groebner_capped(&IntArith, ord, gens.clone(), Some(DIRECT_BIT_CAP)) {
        return gb;
    }
    if let Some(gb) = modular_groebner(ord, nvars, &gens) {
        return gb;
    }
    engine::groebner(&IntArith, ord, gens)
}

fn homogenize(g: &[Term<BigInt>], hord: Homogenized) -> EPoly<BigInt> {
    let top = g.iter().map(|t| t.mono.degree()).max().unwrap_or(0);
    let mut out: EPoly<BigInt> = g
        .iter()
        .map(|t| Term {
            mono: Monomial::new(t.mono.exponents().iter().copied().chain([top - t.mono.degree()])),
            coeff: t.coeff.clone(),
        })
        .collect();
    engine::sort_terms(&mut out, hord);
    out
}

fn dehomogenize(g: &[Term<BigInt>], n: usize, ord: MonomialOrder) -> EPoly<BigInt> {
    let mut out: EPoly<BigInt> = g
        .iter()
        .map(|t| Term {
            mono: Monomial::new(t.mono.exponents()[..n].iter().copied()),
            coeff: t.coeff.clone(),
        })
        .collect();
    engine::sort_terms(&mut out, ord);
    out
}

fn primes() -> impl Iterator<Item = u64> {
    (2..=MAX_PRIME).rev().filter(|&p| is_prime(p))
}

fn residue(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

/// Residues of the reduced bases modulo several primes that share one set
/// of leading monomials, combined by CRT.
struct Lift {
    leads: Vec<Monomial>,
    modulus: BigInt,
    /// Per element, `(monomial, value mod modulus)` sorted descending.
    elems: Vec<Vec<(Monomial, BigInt)>>,
    primes: usize,
    next_attempt: usize,
    previous: Option<Vec<EPoly<BigInt>>>,
}

impl Lift {
    fn new(leads: Vec<Monomial>) -> Self {
        let elems = vec![Vec::new(); leads.len()];
        Lift {
            leads,
            modulus: BigInt::one(),
            elems,
            primes: 0,
            next_attempt: 2,
            previous: None,
        }
    }

    fn add(&mut self, p: u64, basis: &[EPoly<u64>], hord: Homogenized) {
        let m_mod_p = residue(&self.modulus, p);
        let inv = mod_inverse(m_mod_p, p);
        let lift = |a: &BigInt, b: u64| -> BigInt {
            let diff = (b + p - residue(a, p)) % p;
            a + &self.modulus * BigInt::from(diff * inv % p)
        };
        let mut merged_all = Vec::with_capacity(basis.len());
        for (old, new) in self.elems.iter().zip(basis) {
            let zero = BigInt::zero();
            let mut merged = Vec::with_capacity(old.len().max(new.len()));
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < new.len() {
                let o = match (old.get(i), new.get(j)) {
                    (Some(a), Some(b)) => hord.cmp(&a.0, &b.mono),
                    (Some(_), None) => Ordering::Greater,
                    _ => Ordering::Less,
                };
                match o {
                    Ordering::Greater => {
                        merged.push((old[i].0.clone(), lift(&old[i].1, 0)));
                        i += 1;
                    }
                    Ordering::Less => {
                        merged.push((new[j].mono.clone(), lift(&zero, new[j].coeff)));
                        j += 1;
                    }
                    Ordering::Equal => {
                        merged.push((old[i].0.clone(), lift(&old[i].1, new[j].coeff)));
                        i += 1;
                        j += 1;
                    }
                }
            }
            merged_all.push(merged);
        }
        self.elems = merged_all;
        self.modulus *= p;
        self.primes += 1;
    }

    /// Rational reconstruction of every coefficient, scaled to primitive
    /// integer polynomials.
    fn reconstruct(&self) -> Option<Vec<EPoly<BigInt>>> {
        let bound = (&self.modulus / 2u32).sqrt();
        let mut out = Vec::with_capacity(self.elems.len());
        for elem in &self.elems {
            let mut fracs = Vec::with_capacity(elem.len());
            let mut den = BigInt::one();
            for (m, v) in elem {
                if v.is_zero() {
                    continue;
                }
                let (a, b) = rational_reconstruction(v, &self.modulus, &bound)?;
                den = den.lcm(&b);
                fracs.push((m.clone(), a, b));
            }
            let mut poly: EPoly<BigInt> = fracs
                .into_iter()
                .map(|(mono, a, b)| Term {
                    mono,
                    coeff: a * (&den / b),
                })
                .collect();
            engine::Arith::normalize(&IntArith, &mut poly);
            out.push(poly);
        }
        Some(out)
    }
}

/// `a/b ≡ v (mod m)` with `|a|, b ≤ bound`, if it exists.
fn rational_reconstruction(v: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), v.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1) = (r1, r2);
        (t0, t1) = (t1, t2);
    }
    if t1.is_zero() || &t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(if t1.is_negative() { (-r1, -t1) } else { (r1, t1) })
}

fn certify(hord: Homogenized, input: &[EPoly<BigInt>], candidate: &[EPoly<BigInt>]) -> bool {
    let leads: Vec<Monomial> = candidate.iter().map(|g| g[0].mono.clone()).collect();
    let masks: Vec<u64> = leads.iter().map(Monomial::support_mask).collect();
    input
        .iter()
        .all(|f| engine::reduces_to_zero(&IntArith, hord, f.clone(), candidate, &leads, &masks))
        && engine::is_groebner(&IntArith, hord, candidate)
}

fn modular_groebner(ord: MonomialOrder, n: usize, gens: &[EPoly<BigInt>]) -> Option<Vec<EPoly<BigInt>>> {
    let hord = Homogenized { base: ord, n };
    let homog: Vec<EPoly<BigInt>> = gens
        .iter()
        .filter(|g| !g.is_empty())
        .map(|g| homogenize(g, hord))
        .collect();
    let mut lifts: Vec<Lift> = Vec::new();
    for p in primes().take(MAX_PRIMES) {
        if homog.iter().any(|g| residue(&g[0].coeff, p) == 0) {
            continue;
        }
        let input: Vec<EPoly<u64>> = homog
            .iter()
            .map(|g| {
                g.iter()
                    .map(|t| Term {
                        mono: t.mono.clone(),
                        coeff: residue(&t.coeff, p),
                    })
                    .filter(|t| t.coeff != 0)
                    .collect()
            })
            .collect();
        let basis = engine::groebner(&ModArith { p }, hord, input);
        let leads: Vec<Monomial> = basis.iter().map(|g| g[0].mono.clone()).collect();
        let k = match lifts.iter().position(|l| l.leads == leads) {
            Some(k) => k,
            None => {
                lifts.push(Lift::new(leads));
                lifts.len() - 1
            }
        };
        lifts[k].add(p, &basis, hord);
        // Primes outside the majority are presumed unlucky.
        let best = (0..lifts.len()).max_by_key(|&i| lifts[i].primes).expect("nonempty");
        let lift = &mut lifts[k];
        if best != k || lift.primes < lift.next_attempt {
            continue;
        }
        lift.next_attempt = lift.primes + 1 + lift.primes / 4;
        let Some(candidate) = lift.reconstruct() else {
            continue;
        };
        if lift.previous.as_ref() != Some(&candidate) {
            lift.previous = Some(candidate);
            continue;
        }
        if certify(hord, &homog, &candidate) {
            let dehom: Vec<EPoly<BigInt>> = candidate.iter().map(|g| dehomogenize(g, n, ord)).collect();
            return Some(engine::interreduce_list(&IntArith, ord, dehom));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(&[u32], i64)], ord: MonomialOrder) -> EPoly<BigInt> {
        let mut p: EPoly<BigInt> = terms
            .iter()
            .map(|(e, c)| Term {
                mono: Monomial::new(e.iter().copied()),
                coeff: BigInt::from(*c),
            })
            .collect();
        engine::sort_terms(&mut p, ord);
        p
    }

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let m = BigInt::from(1_000_003u64) * BigInt::from(999_983u64);
        let bound = (&m / 2u32).sqrt();
        for (a, b) in [(-7i64, 12i64), (5, 1), (0, 1), (123, 457)] {
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            // v = a * b^{-1} mod m, via the extended gcd.
            let egcd = b.extended_gcd(&m);
            let v = (&a * egcd.x).mod_floor(&m);
            assert_eq!(rational_reconstruction(&v, &m, &bound), Some((a, b)));
        }
    }

    #[test]
    fn modular_matches_direct() {
        let ord = MonomialOrder::Lex;
        let gens = vec![
            poly(&[(&[2, 0], 3), (&[0, 1], -7), (&[0, 0], 2)], ord),
            poly(&[(&[1, 1], 5), (&[1, 0], -1), (&[0, 0], 11)], ord),
        ];
        let direct = engine::groebner(&IntArith, ord, gens.clone());
        let modular = modular_groebner(ord, 2, &gens).expect("lifts");
        assert_eq!(direct, modular);
    }

    fn dense(n: usize) -> impl proptest::strategy::Strategy<Value = EPoly<BigInt>> {
        use proptest::prelude::*;
        prop::collection::vec((prop::collection::vec(0u32..=3, n), -9i64..=9), 1..=4).prop_map(|terms| {
            let mut p: Vec<(Vec<u32>, i64)> = Vec::new();
            for (e, c) in terms {
                if c != 0 && !p.iter().any(|(f, _)| *f == e) {
                    p.push((e, c));
                }
            }
            p.into_iter()
                .map(|(e, c)| Term {
                    mono: Monomial::new(e),
                    coeff: BigInt::from(c),
                })
                .collect()
        })
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(40))]

        #[test]
        fn lifted_basis_equals_direct_basis(
            gens in proptest::collection::vec(dense(2), 1..=3),
            which in 0usize..3,
        ) {
            let ord = [MonomialOrder::DegRevLex, MonomialOrder::Lex, MonomialOrder::Elimination { block: 1 }][which];
            let gens: Vec<EPoly<BigInt>> = gens
                .into_iter()
                .filter(|g| !g.is_empty())
                .map(|mut g| {
                    engine::sort_terms(&mut g, ord);
                    engine::Arith::normalize(&IntArith, &mut g);
                    g
                })
                .collect();
            proptest::prop_assume!(!gens.is_empty());
            // The direct run is only a reference where it stays small.
            let direct = engine::groebner_capped(&IntArith, ord, gens.clone(), Some(4096));
            proptest::prop_assume!(direct.is_some());
            let direct = direct.unwrap();
            let lifted = modular_groebner(ord, 2, &gens).expect("lifts within the prime budget");
            proptest::prop_assert_eq!(direct, lifted);
        }
    }

    #[test]
    fn homogenized_order_compares_x_part_first() {
        let hord = Homogenized { base: MonomialOrder::DegRevLex, n: 2 };
        let m = |e: &[u32]| Monomial::new(e.iter().copied());
        assert_eq!(hord.cmp(&m(&[2, 0, 0]), &m(&[1, 0, 5])), Ordering::Greater);
        assert_eq!(hord.cmp(&m(&[1, 0, 2]), &m(&[1, 0, 1])), Ordering::Greater);
    }
}
