//! Reduced Groebner bases and normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::engine::{self, EPoly, IntArith, ModArith, RatArith, Reducer, Term};
use super::modular;
use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::polynomial::Polynomial;
use crate::scalar::{Field, Scalar};

/// Engine-side copy of a basis, kept for fast membership tests.
#[derive(Clone, Debug)]
enum Repr {
    Int(Vec<EPoly<BigInt>>),
    Mod(u64, Vec<EPoly<u64>>),
}

/// A reduced Groebner basis: monic, inter-reduced, sorted ascending by
/// leading monomial. Two bases of the same ideal and order compare equal.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    nvars: usize,
    field: Field,
    elements: Vec<Polynomial>,
    leads: Vec<Monomial>,
    masks: Vec<u64>,
    repr: Repr,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.nvars == other.nvars
            && self.field == other.field
            && self.elements == other.elements
    }
}

impl Eq for GroebnerBasis {}

impl GroebnerBasis {
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leads
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Whether the basis generates the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.leads.iter().any(Monomial::is_one)
    }

    /// Whether some leading monomial divides `m`.
    pub fn lead_divides(&self, m: &Monomial) -> bool {
        let mask = m.support_mask();
        self.leads
            .iter()
            .zip(&self.masks)
            .any(|(l, &lm)| lm & !mask == 0 && l.divides(m))
    }

    /// Membership test: `f` reduces to zero.
    pub fn contains(&self, f: &Polynomial) -> bool {
        if f.is_zero() {
            return true;
        }
        if self.is_unit() {
            return true;
        }
        let ord = self.order;
        match &self.repr {
            Repr::Int(basis) => {
                let f = to_int(f, ord);
                engine::reduces_to_zero(&IntArith, ord, f, basis, &self.leads, &self.masks)
            }
            Repr::Mod(p, basis) => {
                let f = to_mod(f, *p, ord);
                engine::reduces_to_zero(&ModArith { p: *p }, ord, f, basis, &self.leads, &self.masks)
            }
        }
    }

    /// The unique remainder of `f` with no term divisible by a leading monomial.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let ord = self.order;
        match &self.repr {
            Repr::Int(_) => {
                let basis: Vec<EPoly<BigRational>> =
                    self.elements.iter().map(|g| to_rat(g, ord)).collect();
                let r = engine::reduce(&RatArith, ord, to_rat(f, ord), &reducers(&basis, &self.leads, &self.masks));
                from_rat(r, self.nvars)
            }
            Repr::Mod(p, basis) => {
                let ar = ModArith { p: *p };
                let r = engine::reduce(&ar, ord, to_mod(f, *p, ord), &reducers(basis, &self.leads, &self.masks));
                from_mod(r, self.nvars, *p)
            }
        }
    }

    /// Buchberger's criterion on the stored basis.
    pub fn is_certified(&self) -> bool {
        match &self.repr {
            Repr::Int(b) => engine::is_groebner(&IntArith, self.order, b),
            Repr::Mod(p, b) => engine::is_groebner(&ModArith { p: *p }, self.order, b),
        }
    }

    fn from_int(order: MonomialOrder, nvars: usize, basis: Vec<EPoly<BigInt>>) -> Self {
        let elements = basis.iter().map(|p| monic_from_int(p, nvars)).collect();
        Self::assemble(order, nvars, Field::Rationals, elements, Repr::Int(basis))
    }

    fn from_mod(order: MonomialOrder, nvars: usize, p: u64, basis: Vec<EPoly<u64>>) -> Self {
        let elements = basis.iter().map(|e| from_mod(e.clone(), nvars, p)).collect();
        Self::assemble(order, nvars, Field::Prime(p), elements, Repr::Mod(p, basis))
    }

    fn assemble(
        order: MonomialOrder,
        nvars: usize,
        field: Field,
        elements: Vec<Polynomial>,
        repr: Repr,
    ) -> Self {
        let leads: Vec<Monomial> = match &repr {
            Repr::Int(b) => b.iter().map(|p| p[0].mono.clone()).collect(),
            Repr::Mod(_, b) => b.iter().map(|p| p[0].mono.clone()).collect(),
        };
        let masks = leads.iter().map(Monomial::support_mask).collect();
        GroebnerBasis {
            order,
            nvars,
            field,
            elements,
            leads,
            masks,
            repr,
        }
    }

    /// Drops the first `k` variables from a basis whose elements avoid them.
    /// Used after elimination; the tail order becomes degrevlex.
    pub(crate) fn restrict_elimination(&self, k: usize) -> Option<GroebnerBasis> {
        let MonomialOrder::Elimination { block } = self.order else {
            return None;
        };
        if block != k {
            return None;
        }
        let nvars = self.nvars - k;
        let keep: Vec<usize> = (0..self.elements.len())
            .filter(|&i| self.elements[i].avoids_leading(k))
            .collect();
        let drop = |m: &Monomial| m.drop_leading(k);
        let ord = MonomialOrder::DegRevLex;
        let repr = match &self.repr {
            Repr::Int(b) => {
                let mut v: Vec<EPoly<BigInt>> = keep
                    .iter()
                    .map(|&i| {
                        b[i].iter()
                            .map(|t| Term {
                                mono: drop(&t.mono),
                                coeff: t.coeff.clone(),
                            })
                            .collect()
                    })
                    .collect();
                v.sort_by(|a, b| ord.cmp(&a[0].mono, &b[0].mono));
                Repr::Int(v)
            }
            Repr::Mod(p, b) => {
                let mut v: Vec<EPoly<u64>> = keep
                    .iter()
                    .map(|&i| {
                        b[i].iter()
                            .map(|t| Term {
                                mono: drop(&t.mono),
                                coeff: t.coeff,
                            })
                            .collect()
                    })
                    .collect();
                v.sort_by(|a, b| ord.cmp(&a[0].mono, &b[0].mono));
                Repr::Mod(*p, v)
            }
        };
        Some(match repr {
            Repr::Int(v) => GroebnerBasis::from_int(ord, nvars, v),
            Repr::Mod(p, v) => GroebnerBasis::from_mod(ord, nvars, p, v),
        })
    }
}

fn reducers<'a, C>(basis: &'a [EPoly<C>], leads: &'a [Monomial], masks: &[u64]) -> Vec<Reducer<'a, C>> {
    basis
        .iter()
        .zip(leads)
        .zip(masks)
        .map(|((p, l), &m)| Reducer {
            lead: l,
            mask: m,
            poly: p,
        })
        .collect()
}

/// Reduced Groebner basis of the ideal generated by `gens` under `ord`.
pub fn buchberger(gens: &[Polynomial], ord: MonomialOrder) -> Result<GroebnerBasis> {
    let Some(first) = gens.first() else {
        return Err(Error::Structural(
            "cannot infer the ring of an empty generator list".into(),
        ));
    };
    buchberger_in(first.nvars(), first.field(), gens, ord)
}

/// As [`buchberger`], with the ring given explicitly so empty lists are allowed.
pub fn buchberger_in(
    nvars: usize,
    field: Field,
    gens: &[Polynomial],
    ord: MonomialOrder,
) -> Result<GroebnerBasis> {
    for g in gens {
        if g.nvars() != nvars || g.field() != field {
            return Err(Error::Structural(format!(
                "generator over {} variables in {} in a ring of {nvars} variables over {field}",
                g.nvars(),
                g.field()
            )));
        }
    }
    if let MonomialOrder::Elimination { block } = ord {
        if block > nvars {
            return Err(Error::Structural(format!(
                "elimination block {block} exceeds {nvars} variables"
            )));
        }
    }
    Ok(match field {
        Field::Rationals => {
            let input = gens.iter().map(|g| to_int(g, ord)).collect();
            GroebnerBasis::from_int(ord, nvars, modular::rational_groebner(ord, nvars, input))
        }
        Field::Prime(p) => {
            let input = gens.iter().map(|g| to_mod(g, p, ord)).collect();
            GroebnerBasis::from_mod(ord, nvars, p, engine::groebner(&ModArith { p }, ord, input))
        }
    })
}

/// Normal form of `f` with respect to `gb`, which must have been computed under `ord`.
pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis, ord: MonomialOrder) -> Result<Polynomial> {
    if ord != gb.order {
        return Err(Error::Precondition(format!(
            "basis computed for {:?}, normal form requested for {ord:?}",
            gb.order
        )));
    }
    if f.nvars() != gb.nvars || f.field() != gb.field {
        return Err(Error::Structural("polynomial and basis live in different rings".into()));
    }
    Ok(gb.normal_form(f))
}

pub(crate) fn to_int(f: &Polynomial, ord: MonomialOrder) -> EPoly<BigInt> {
    let mut den = BigInt::one();
    for (_, c) in f.terms() {
        if let Scalar::Rational(r) = c {
            den = den.lcm(r.denom());
        }
    }
    let mut out: EPoly<BigInt> = f
        .terms()
        .map(|(m, c)| {
            let Scalar::Rational(r) = c else {
                unreachable!("rational polynomial")
            };
            Term {
                mono: m.clone(),
                coeff: r.numer() * (&den / r.denom()),
            }
        })
        .collect();
    engine::sort_terms(&mut out, ord);
    out
}

fn to_mod(f: &Polynomial, p: u64, ord: MonomialOrder) -> EPoly<u64> {
    let mut out: EPoly<u64> = f
        .terms()
        .map(|(m, c)| {
            let Scalar::Modular { value, .. } = c else {
                unreachable!("modular polynomial")
            };
            Term {
                mono: m.clone(),
                coeff: *value % p,
            }
        })
        .collect();
    engine::sort_terms(&mut out, ord);
    out
}

fn to_rat(f: &Polynomial, ord: MonomialOrder) -> EPoly<BigRational> {
    let mut out: EPoly<BigRational> = f
        .terms()
        .map(|(m, c)| {
            let Scalar::Rational(r) = c else {
                unreachable!("rational polynomial")
            };
            Term {
                mono: m.clone(),
                coeff: r.clone(),
            }
        })
        .collect();
    engine::sort_terms(&mut out, ord);
    out
}

fn monic_from_int(p: &EPoly<BigInt>, nvars: usize) -> Polynomial {
    let lead = p[0].coeff.clone();
    Polynomial::from_terms(
        nvars,
        Field::Rationals,
        p.iter().map(|t| {
            (
                t.mono.clone(),
                Scalar::Rational(BigRational::new(t.coeff.clone(), lead.clone())),
            )
        }),
    )
}

fn from_rat(p: EPoly<BigRational>, nvars: usize) -> Polynomial {
    Polynomial::from_terms(
        nvars,
        Field::Rationals,
        p.into_iter().filter(|t| !t.coeff.is_zero()).map(|t| (t.mono, Scalar::Rational(t.coeff))),
    )
}

fn from_mod(p: EPoly<u64>, nvars: usize, modulus: u64) -> Polynomial {
    Polynomial::from_terms(
        nvars,
        Field::Prime(modulus),
        p.into_iter().map(|t| {
            (
                t.mono,
                Scalar::Modular {
                    value: t.coeff,
                    modulus,
                },
            )
        }),
    )
}
