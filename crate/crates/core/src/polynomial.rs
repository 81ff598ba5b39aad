//! Sparse multivariate polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::scalar::{Field, Scalar};

/// A polynomial over `field` in `nvars` variables. The term map never
/// stores a zero coefficient, so the zero polynomial has no terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize, field: Field) -> Self {
        Polynomial {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, field: Field, c: Scalar) -> Self {
        Self::from_terms(nvars, field, [(Monomial::one(nvars), c)])
    }

    pub fn one(nvars: usize, field: Field) -> Self {
        Self::constant(nvars, field, field.one())
    }

    pub fn var(nvars: usize, field: Field, index: usize) -> Self {
        Self::from_terms(nvars, field, [(Monomial::var(nvars, index), field.one())])
    }

    pub fn monomial(field: Field, m: Monomial, c: Scalar) -> Self {
        let nvars = m.nvars();
        Self::from_terms(nvars, field, [(m, c)])
    }

    /// Builds a polynomial, combining repeated monomials and dropping zeros.
    pub fn from_terms(
        nvars: usize,
        field: Field,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Self {
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial length does not match ring");
            assert_eq!(c.field(), field, "coefficient field does not match ring");
            match map.get_mut(&m) {
                Some(acc) => *acc = acc.add(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial {
            nvars,
            field,
            terms: map,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Whether all terms share one total degree; true for zero.
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next();
        degrees.all(|d| Some(d) == first)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The coefficient of the monomial 1.
    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_term(&self, ord: MonomialOrder) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0))
    }

    /// Terms sorted descending by `ord`.
    pub fn sorted_terms(&self, ord: MonomialOrder) -> Vec<(&Monomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.cmp(b.0, a.0));
        v
    }

    fn check_same_ring(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Structural(format!(
                "polynomials over {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        if self.field != other.field {
            return Err(Error::Structural(format!(
                "polynomials over {} and {}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let remove = match terms.get_mut(m) {
                Some(acc) => {
                    *acc = acc.add(c);
                    acc.is_zero()
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                    false
                }
            };
            if remove {
                terms.remove(m);
            }
        }
        Ok(Polynomial {
            nvars: self.nvars,
            field: self.field,
            terms,
        })
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_ring(other)?;
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match terms.get_mut(&m) {
                    Some(acc) => *acc = acc.add(&c),
                    None => {
                        terms.insert(m, c);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            nvars: self.nvars,
            field: self.field,
            terms,
        })
    }

    fn neg_ref(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars, self.field);
        }
        Polynomial {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars, self.field);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Divides by the leading coefficient under `ord`; zero stays zero.
    pub fn monic(&self, ord: MonomialOrder) -> Polynomial {
        match self.leading_term(ord) {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn divide_exact(&self, divisor: &Polynomial) -> Result<Option<Polynomial>> {
        self.check_same_ring(divisor)?;
        if divisor.is_zero() {
            return Err(Error::Precondition("division by the zero polynomial".into()));
        }
        let ord = MonomialOrder::DegRevLex;
        let (dm, dc) = divisor.leading_term(ord).expect("nonzero");
        let (dm, dc_inv) = (dm.clone(), dc.inv().expect("nonzero"));
        let mut rest = self.clone();
        let mut quotient = Polynomial::zero(self.nvars, self.field);
        while let Some((m, c)) = rest.leading_term(ord) {
            let Some(q) = dm.quotient_into(m) else {
                return Ok(None);
            };
            let coeff = c.mul(&dc_inv);
            let step = Polynomial::monomial(self.field, q, coeff);
            rest = &rest - &(&step * divisor);
            quotient = &quotient + &step;
        }
        Ok(Some(quotient))
    }

    /// Re-embeds into a ring with `nvars` variables, variable `i` becoming `i + offset`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Polynomial {
        assert!(offset + self.nvars <= nvars);
        Polynomial {
            nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.embed(nvars, offset), c.clone()))
                .collect(),
        }
    }

    /// Whether none of the first `k` variables occurs.
    pub fn avoids_leading(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.exponents()[..k].iter().all(|&e| e == 0))
    }

    /// Drops the first `k` variables, which must not occur.
    pub fn drop_leading(&self, k: usize) -> Polynomial {
        assert!(self.avoids_leading(k));
        Polynomial {
            nvars: self.nvars - k,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.drop_leading(k), c.clone()))
                .collect(),
        }
    }

    /// Renders with the given variable names, terms in degrevlex-descending order.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, names }
    }
}

/// Coefficientwise sum; fails on ring mismatch.
pub fn poly_add(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    f.checked_add(g)
}

/// Product; fails on ring mismatch.
pub fn poly_mul(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    f.checked_mul(g)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial ring mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial ring mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial ring mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.neg_ref()
    }
}

struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.sorted_terms(MonomialOrder::DegRevLex).into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { c.neg() } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                let name = self
                    .names
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| format!("x{i}"));
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PolyDisplay {
            poly: self,
            names: &[],
        }
        .fmt(f)
    }
}
