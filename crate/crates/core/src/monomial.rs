//! Monomials and global monomial orders.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) type Exponents = SmallVec<[u32; 12]>;

/// A power product `x_1^{a_1} ... x_n^{a_n}` with cached total degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Exponents,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: impl IntoIterator<Item = u32>) -> Self {
        let exps: Exponents = exps.into_iter().collect();
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: smallvec::smallvec![0; nvars],
            degree: 0,
        }
    }

    /// The variable `x_index` in a ring with `nvars` variables.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[index] = 1;
        m.degree = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn pow(&self, n: u32) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|a| a * n).collect(),
            degree: self.degree * n,
        }
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_into(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect(),
            degree: other.degree - self.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)))
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Index of the variable when this monomial is a pure power `x_i^k`, `k >= 1`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// Bit `i` set iff variable `i mod 64` occurs. Used to reject divisibility early.
    pub(crate) fn support_mask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1u64 << (i % 64)))
    }

    /// Copy with `offset` leading zero exponents and padded to `nvars`.
    pub(crate) fn embed(&self, nvars: usize, offset: usize) -> Monomial {
        let mut exps: Exponents = smallvec::smallvec![0; nvars];
        exps[offset..offset + self.exps.len()].copy_from_slice(&self.exps);
        Monomial {
            exps,
            degree: self.degree,
        }
    }

    /// Drops the first `k` variables, which must have zero exponent.
    pub(crate) fn drop_leading(&self, k: usize) -> Monomial {
        debug_assert!(self.exps[..k].iter().all(|&e| e == 0));
        Monomial::new(self.exps[k..].iter().copied())
    }
}

/// A global monomial order: total, multiplicative, with 1 the least monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    DegRevLex,
    Lex,
    /// Degrevlex on the first `block` variables, ties broken by degrevlex on
    /// the rest. Eliminates the leading block.
    Elimination { block: usize },
}

impl MonomialOrder {
    /// Compares two monomials of equal length.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.cmp_exponents(&a.exps, a.degree, &b.exps, b.degree)
    }

    /// As [`cmp`](Self::cmp) on raw exponent slices with their total degrees.
    pub(crate) fn cmp_exponents(&self, a: &[u32], da: u32, b: &[u32], db: u32) -> Ordering {
        match *self {
            MonomialOrder::DegRevLex => degrevlex(a, da, b, db),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Elimination { block } => {
                let (a1, a2) = a.split_at(block);
                let (b1, b2) = b.split_at(block);
                let da1: u32 = a1.iter().sum();
                let db1: u32 = b1.iter().sum();
                degrevlex(a1, da1, b1, db1).then_with(|| degrevlex(a2, da - da1, b2, db - db1))
            }
        }
    }

    /// Whether the order refines total degree.
    pub fn is_degree_compatible(&self) -> bool {
        matches!(self, MonomialOrder::DegRevLex)
    }
}

fn degrevlex(a: &[u32], da: u32, b: &[u32], db: u32) -> Ordering {
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// Checked comparison of two monomials under `ord`.
pub fn monomial_compare(a: &Monomial, b: &Monomial, ord: MonomialOrder) -> Result<Ordering> {
    if a.nvars() != b.nvars() {
        return Err(Error::Structural(format!(
            "monomials over {} and {} variables",
            a.nvars(),
            b.nvars()
        )));
    }
    if let MonomialOrder::Elimination { block } = ord {
        if block > a.nvars() {
            return Err(Error::Structural(format!(
                "elimination block {block} exceeds {} variables",
                a.nvars()
            )));
        }
    }
    Ok(ord.cmp(a, b))
}

/// All monomials of total degree `deg` in `nvars` variables, lexicographically descending.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, idx: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if idx + 1 == nvars {
            cur.push(left);
            out.push(Monomial::new(cur.iter().copied()));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(nvars, idx + 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(Monomial::new([]));
        }
        return out;
    }
    rec(nvars, 0, deg, &mut Vec::with_capacity(nvars), &mut out);
    out
}
