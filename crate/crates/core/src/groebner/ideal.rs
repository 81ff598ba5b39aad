//! Ideals with per-order Groebner caches, and the ideal operations built on them.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, RwLock};

use super::basis::{buchberger_in, GroebnerBasis};
use crate::error::{Error, Result};
use crate::monomial::{monomials_of_degree, Monomial, MonomialOrder};
use crate::polynomial::Polynomial;
use crate::scalar::{Field, Scalar};

struct Inner {
    nvars: usize,
    field: Field,
    generators: Vec<Polynomial>,
    cache: RwLock<HashMap<MonomialOrder, Arc<GroebnerBasis>>>,
}

/// An ideal of `field[x_0..x_{nvars-1}]`, given by generators. Cheap to clone;
/// Groebner bases are computed on demand and shared between clones.
#[derive(Clone)]
pub struct Ideal {
    inner: Arc<Inner>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ideal")
            .field("nvars", &self.inner.nvars)
            .field("field", &self.inner.field)
            .field("generators", &self.inner.generators)
            .finish()
    }
}

impl Ideal {
    /// The ideal generated by `generators`; zero generators are dropped.
    pub fn new(nvars: usize, field: Field, generators: Vec<Polynomial>) -> Result<Ideal> {
        for g in &generators {
            if g.nvars() != nvars || g.field() != field {
                return Err(Error::Structural(format!(
                    "generator in {} variables over {} does not belong to a ring of {nvars} variables over {field}",
                    g.nvars(),
                    g.field()
                )));
            }
        }
        Ok(Self::from_parts(nvars, field, generators))
    }

    fn from_parts(nvars: usize, field: Field, mut generators: Vec<Polynomial>) -> Ideal {
        generators.retain(|g| !g.is_zero());
        Ideal {
            inner: Arc::new(Inner {
                nvars,
                field,
                generators,
                cache: RwLock::new(HashMap::new()),
            }),
        }
    }

    fn with_basis(nvars: usize, field: Field, gb: GroebnerBasis) -> Ideal {
        let ideal = Self::from_parts(nvars, field, gb.elements().to_vec());
        ideal
            .inner
            .cache
            .write()
            .expect("cache lock")
            .insert(gb.order(), Arc::new(gb));
        ideal
    }

    pub fn zero(nvars: usize, field: Field) -> Ideal {
        Self::from_parts(nvars, field, Vec::new())
    }

    pub fn unit(nvars: usize, field: Field) -> Ideal {
        Self::from_parts(nvars, field, vec![Polynomial::one(nvars, field)])
    }

    /// The maximal ideal `(x_0, ..., x_{n-1})` of the origin.
    pub fn maximal(nvars: usize, field: Field) -> Ideal {
        Self::maximal_power(nvars, field, 1)
    }

    /// `m^k`, generated by all monomials of degree `k`.
    pub fn maximal_power(nvars: usize, field: Field, k: u32) -> Ideal {
        let gens = monomials_of_degree(nvars, k)
            .into_iter()
            .map(|m| Polynomial::monomial(field, m, field.one()))
            .collect();
        Self::from_parts(nvars, field, gens)
    }

    pub fn nvars(&self) -> usize {
        self.inner.nvars
    }

    pub fn field(&self) -> Field {
        self.inner.field
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.inner.generators
    }

    /// Whether every generator is a monomial.
    pub fn is_monomial(&self) -> bool {
        self.inner.generators.iter().all(Polynomial::is_monomial)
    }

    /// Whether every generator vanishes at the origin.
    pub fn in_maximal(&self) -> bool {
        self.inner.generators.iter().all(|g| g.constant_term().is_zero())
    }

    fn check_ring(&self, other: &Ideal) -> Result<()> {
        if self.nvars() != other.nvars() || self.field() != other.field() {
            return Err(Error::Structural(format!(
                "ideals over {} variables in {} and {} variables in {}",
                self.nvars(),
                self.field(),
                other.nvars(),
                other.field()
            )));
        }
        Ok(())
    }

    fn check_poly(&self, f: &Polynomial) -> Result<()> {
        if f.nvars() != self.nvars() || f.field() != self.field() {
            return Err(Error::Structural(
                "polynomial does not belong to the ring of the ideal".into(),
            ));
        }
        Ok(())
    }

    /// The reduced Groebner basis under `ord`, computed once and cached.
    pub fn groebner(&self, ord: MonomialOrder) -> Arc<GroebnerBasis> {
        if let Some(gb) = self.inner.cache.read().expect("cache lock").get(&ord) {
            return gb.clone();
        }
        let gens = &self.inner.generators;
        let echelon = echelon_same_degree(gens, ord);
        let gb = buchberger_in(self.nvars(), self.field(), echelon.as_deref().unwrap_or(gens), ord)
            .expect("generators checked at construction");
        let gb = Arc::new(gb);
        self.inner
            .cache
            .write()
            .expect("cache lock")
            .entry(ord)
            .or_insert(gb)
            .clone()
    }

    fn gb(&self) -> Arc<GroebnerBasis> {
        self.groebner(MonomialOrder::DegRevLex)
    }

    pub fn is_unit(&self) -> bool {
        self.gb().is_unit()
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        self.check_poly(f)?;
        Ok(self.gb().contains(f))
    }

    /// `other ⊆ self`, by membership of the generators of `other`.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        self.check_ring(other)?;
        let gb = self.gb();
        Ok(other.generators().iter().all(|g| gb.contains(g)))
    }

    /// Equality of ideals via their reduced degrevlex bases.
    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        self.check_ring(other)?;
        Ok(*self.gb() == *other.gb())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut gens = self.generators().to_vec();
        gens.extend(other.generators().iter().cloned());
        Ok(Self::from_parts(self.nvars(), self.field(), dedup(gens)))
    }

    /// The ideal generated by all pairwise products of generators.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut gens = Vec::with_capacity(self.generators().len() * other.generators().len());
        for f in self.generators() {
            for g in other.generators() {
                gens.push(f * g);
            }
        }
        let gens = dedup(gens);
        let gens = if gens.iter().all(Polynomial::is_monomial) {
            minimalize_monomials(gens)
        } else {
            gens
        };
        Ok(Self::from_parts(self.nvars(), self.field(), gens))
    }

    pub fn power(&self, n: u32) -> Ideal {
        let mut acc = Ideal::unit(self.nvars(), self.field());
        for _ in 0..n {
            acc = acc.product(self).expect("same ring");
        }
        acc
    }

    /// `[A^0, A^1, ..., A^n_max]` with `A^0` the unit ideal.
    pub fn power_ladder(&self, n_max: u32) -> Vec<Ideal> {
        let mut out = Vec::with_capacity(n_max as usize + 1);
        out.push(Ideal::unit(self.nvars(), self.field()));
        for k in 1..=n_max as usize {
            let next = out[k - 1].product(self).expect("same ring");
            out.push(next);
        }
        out
    }

    /// `A ∩ B`, eliminating `t` from `t*A + (1-t)*B`.
    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let n = self.nvars();
        let field = self.field();
        if self.generators().is_empty() || other.generators().is_empty() {
            return Ok(Ideal::zero(n, field));
        }
        if self.is_unit() {
            return Ok(other.clone());
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        if self.is_monomial() && other.is_monomial() {
            return Ok(self.monomial_intersection(other));
        }
        let t = Polynomial::var(n + 1, field, 0);
        let one_minus_t = &Polynomial::one(n + 1, field) - &t;
        let mut gens = Vec::new();
        for f in self.generators() {
            gens.push(&t * &f.embed(n + 1, 1));
        }
        for g in other.generators() {
            gens.push(&one_minus_t * &g.embed(n + 1, 1));
        }
        let lifted = Self::from_parts(n + 1, field, gens);
        lifted.eliminate(1)
    }

    fn monomial_intersection(&self, other: &Ideal) -> Ideal {
        let field = self.field();
        let mut gens = Vec::new();
        for f in self.generators() {
            for g in other.generators() {
                let (a, _) = f.leading_term(MonomialOrder::DegRevLex).expect("nonzero");
                let (b, _) = g.leading_term(MonomialOrder::DegRevLex).expect("nonzero");
                gens.push(Polynomial::monomial(field, a.lcm(b), field.one()));
            }
        }
        Self::from_parts(self.nvars(), field, minimalize_monomials(dedup(gens)))
    }

    /// `A ∩ k[x_{k}, ..., x_{n-1}]`, re-indexed to drop the first `k` variables.
    pub fn eliminate(&self, k: usize) -> Result<Ideal> {
        if k > self.nvars() {
            return Err(Error::Structural(format!(
                "cannot eliminate {k} of {} variables",
                self.nvars()
            )));
        }
        if k == 0 {
            return Ok(self.clone());
        }
        let gb = self.groebner(MonomialOrder::Elimination { block: k });
        let restricted = gb
            .restrict_elimination(k)
            .expect("elimination basis restricts");
        Ok(Self::with_basis(self.nvars() - k, self.field(), restricted))
    }

    /// `(A : f) = {g : g*f ∈ A}`.
    pub fn colon(&self, f: &Polynomial) -> Result<Ideal> {
        self.check_poly(f)?;
        if f.is_zero() {
            return Err(Error::Precondition("colon by the zero polynomial".into()));
        }
        let principal = Self::from_parts(self.nvars(), self.field(), vec![f.clone()]);
        let meet = self.intersection(&principal)?;
        let mut gens = Vec::with_capacity(meet.generators().len());
        for g in meet.generators() {
            match g.divide_exact(f)? {
                Some(q) => gens.push(q),
                None => {
                    return Err(Error::invariant(
                        "colon: exact division",
                        format!("generator {g} of A ∩ (f) is not divisible by {f}"),
                    ))
                }
            }
        }
        Ok(Self::from_parts(self.nvars(), self.field(), gens))
    }

    /// `(A : B) = ∩_i (A : b_i)`.
    pub fn colon_ideal(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut acc = Ideal::unit(self.nvars(), self.field());
        for b in other.generators() {
            acc = acc.intersection(&self.colon(b)?)?;
        }
        Ok(acc)
    }

    /// `dim_k R/A` when finite.
    pub fn quotient_dimension(&self) -> Option<u64> {
        let gb = self.gb();
        count_standard_monomials(gb.leading_monomials(), self.nvars())
    }

    /// Number of standard monomials of `A` whose exponents on the variables
    /// `graded` sum to `degree`. Requires the quotient to be finite in the
    /// remaining variables.
    pub fn graded_piece_dimension(&self, graded: std::ops::Range<usize>, degree: u32) -> Option<u64> {
        let gb = self.gb();
        let leads = gb.leading_monomials();
        let n = self.nvars();
        let free: Vec<usize> = (0..n).filter(|i| !graded.contains(i)).collect();
        let mut total = 0u64;
        for v in monomials_of_degree(graded.len(), degree) {
            let ve = v.exponents();
            let applicable: Vec<Monomial> = leads
                .iter()
                .filter(|l| {
                    graded
                        .clone()
                        .enumerate()
                        .all(|(j, i)| l.exponents()[i] <= ve[j])
                })
                .map(|l| Monomial::new(free.iter().map(|&i| l.exponents()[i])))
                .collect();
            total += count_standard_monomials(&applicable, free.len())?;
        }
        Some(total)
    }
}

/// Reduced row echelon form of generators that are all homogeneous of one
/// degree. Spans the same ideal and spares Buchberger the linear dependencies.
fn echelon_same_degree(gens: &[Polynomial], ord: MonomialOrder) -> Option<Vec<Polynomial>> {
    let first = gens.first()?;
    let deg = first.total_degree()?;
    if gens.len() < 2
        || gens.iter().all(Polynomial::is_monomial)
        || gens
            .iter()
            .any(|g| !g.is_homogeneous() || g.total_degree() != Some(deg))
    {
        return None;
    }
    let field = first.field();
    let mut cols: Vec<Monomial> = gens
        .iter()
        .flat_map(|g| g.terms().map(|(m, _)| m.clone()))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    cols.sort_by(|a, b| ord.cmp(b, a));
    let index: HashMap<&Monomial, usize> = cols.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let rows: Vec<Vec<(usize, Scalar)>> = gens
        .iter()
        .map(|g| g.terms().map(|(m, c)| (index[m], c.clone())).collect())
        .collect();
    let reduced: Vec<Vec<Scalar>> = match field {
        Field::Prime(p) => {
            let dense = rows
                .iter()
                .map(|row| {
                    let mut v = vec![0u64; cols.len()];
                    for (k, c) in row {
                        v[*k] = scalar_residue(c);
                    }
                    v
                })
                .collect();
            row_reduce_mod(dense, p)
                .into_iter()
                .map(|row| row.into_iter().map(|v| field.from_i64(v as i64)).collect())
                .collect()
        }
        Field::Rationals => {
            let dense = rows
                .iter()
                .map(|row| {
                    let mut v = vec![field.zero(); cols.len()];
                    for (k, c) in row {
                        v[*k] = c.clone();
                    }
                    v
                })
                .collect();
            row_reduce(dense)
        }
    };
    Some(
        reduced
            .into_iter()
            .map(|row| {
                Polynomial::from_terms(
                    first.nvars(),
                    field,
                    cols.iter().cloned().zip(row).filter(|(_, c)| !c.is_zero()),
                )
            })
            .collect(),
    )
}

fn scalar_residue(c: &Scalar) -> u64 {
    match c {
        Scalar::Modular { value, .. } => *value,
        Scalar::Rational(_) => unreachable!("prime-field polynomial with a rational coefficient"),
    }
}

/// Reduced row echelon form over `F_p`; returns the nonzero rows.
fn row_reduce_mod(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(found) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = mod_pow(rows[rank][col], p - 2, p);
        for v in rows[rank][col..].iter_mut() {
            *v = *v * inv % p;
        }
        let pivot = std::mem::take(&mut rows[rank]);
        let support: Vec<usize> = (col..ncols).filter(|&k| pivot[k] != 0).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let factor = p - row[col];
            for &k in &support {
                row[k] = (row[k] + factor * pivot[k]) % p;
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Reduced row echelon form over `Q`; returns the nonzero rows.
fn row_reduce(mut rows: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        for v in rows[rank][col..].iter_mut() {
            *v = v.mul(&inv);
        }
        let pivot = std::mem::take(&mut rows[rank]);
        let support: Vec<usize> = (col..ncols).filter(|&k| !pivot[k].is_zero()).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for &k in &support {
                row[k] = row[k].sub(&factor.mul(&pivot[k]));
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Counts monomials in `nvars` variables divisible by none of `leads`;
/// `None` when infinitely many.
pub fn count_standard_monomials(leads: &[Monomial], nvars: usize) -> Option<u64> {
    let vecs: Vec<Vec<u32>> = leads.iter().map(|m| m.exponents().to_vec()).collect();
    count_rec(minimalize_vecs(vecs), nvars)
}

fn count_rec(leads: Vec<Vec<u32>>, width: usize) -> Option<u64> {
    if leads.iter().any(|l| l.iter().all(|&e| e == 0)) {
        return Some(0);
    }
    if width == 0 {
        return Some(1);
    }
    // Beyond the smallest pure power of the first variable nothing survives.
    let bound = leads
        .iter()
        .filter(|l| l[1..].iter().all(|&e| e == 0))
        .map(|l| l[0])
        .min()?;
    let mut cuts: Vec<u32> = leads.iter().map(|l| l[0]).filter(|&a| a < bound).collect();
    cuts.push(0);
    cuts.push(bound);
    cuts.sort_unstable();
    cuts.dedup();
    let mut total = 0u64;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let sub: Vec<Vec<u32>> = leads
            .iter()
            .filter(|l| l[0] <= lo)
            .map(|l| l[1..].to_vec())
            .collect();
        total += count_rec(minimalize_vecs(sub), width - 1)? * u64::from(hi - lo);
    }
    Some(total)
}

fn minimalize_vecs(mut v: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    v.sort_by_key(|l| l.iter().sum::<u32>());
    let mut out: Vec<Vec<u32>> = Vec::with_capacity(v.len());
    for l in v {
        if !out.iter().any(|o| o.iter().zip(&l).all(|(a, b)| a <= b)) {
            out.push(l);
        }
    }
    out
}

/// Removes generators that are nonzero scalar multiples of earlier ones.
fn dedup(gens: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        if g.is_zero() {
            continue;
        }
        if seen.insert(g.monic(MonomialOrder::DegRevLex)) {
            out.push(g);
        }
    }
    out
}

/// Keeps the monomial generators not divisible by another, in a fixed order.
fn minimalize_monomials(gens: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut by_mono: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
    for g in gens {
        let (m, _) = g.leading_term(MonomialOrder::DegRevLex).expect("nonzero");
        by_mono.entry(m.clone()).or_insert(g);
    }
    let monos: Vec<Monomial> = by_mono.keys().cloned().collect();
    by_mono
        .into_iter()
        .filter(|(m, _)| !monos.iter().any(|o| o != m && o.divides(m)))
        .map(|(_, g)| g)
        .collect()
}
