//! Buchberger's algorithm over a pluggable coefficient domain.
//!
//! Polynomials are term vectors sorted descending under the active order.
//! Over the rationals the engine runs fraction-free on primitive integer
//! polynomials; over `F_p` it keeps basis elements monic.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::monomial::{Monomial, MonomialOrder};
use crate::scalar::mod_inverse;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Term<C> {
    pub mono: Monomial,
    pub coeff: C,
}

pub(crate) type EPoly<C> = Vec<Term<C>>;

/// A monomial order as seen by the engine.
pub(crate) trait TermOrder: Copy + Send + Sync {
    fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering;
    fn is_degree_compatible(&self) -> bool;
}

impl TermOrder for MonomialOrder {
    fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        MonomialOrder::cmp(self, a, b)
    }
    fn is_degree_compatible(&self) -> bool {
        MonomialOrder::is_degree_compatible(self)
    }
}

/// Coefficient domain used by the engine.
pub(crate) trait Arith: Sync + Send {
    type C: Clone + PartialEq + Debug + Send + Sync;

    fn is_zero(&self, c: &Self::C) -> bool;
    fn is_one(&self, c: &Self::C) -> bool;
    fn mul(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn sub(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn neg(&self, a: &Self::C) -> Self::C;
    /// Returns `(a, b)` with `a * f_lead == b * g_lead` and `a` a unit or small.
    fn cancel(&self, f_lead: &Self::C, g_lead: &Self::C) -> (Self::C, Self::C);
    /// Rescales to the canonical representative (monic, or primitive with positive lead).
    fn normalize(&self, p: &mut EPoly<Self::C>);
    /// Cheap size control during long reductions.
    fn shrink(&self, _p: &mut EPoly<Self::C>) {}
    /// Size of a coefficient in bits, where that is meaningful.
    fn bits(&self, _c: &Self::C) -> u64 {
        0
    }
}

/// `F_p`, `p < 2^31`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ModArith {
    pub p: u64,
}

impl Arith for ModArith {
    type C = u64;

    fn is_zero(&self, c: &u64) -> bool {
        *c == 0
    }
    fn is_one(&self, c: &u64) -> bool {
        *c == 1
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn cancel(&self, f_lead: &u64, g_lead: &u64) -> (u64, u64) {
        if *g_lead == 1 {
            (1, *f_lead)
        } else {
            (1, f_lead * mod_inverse(*g_lead, self.p) % self.p)
        }
    }
    fn normalize(&self, p: &mut EPoly<u64>) {
        if let Some(lead) = p.first().map(|t| t.coeff) {
            if lead != 1 {
                let inv = mod_inverse(lead, self.p);
                for t in p.iter_mut() {
                    t.coeff = t.coeff * inv % self.p;
                }
            }
        }
    }
}

/// Fraction-free arithmetic over `Z` standing in for `Q`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct IntArith;

impl Arith for IntArith {
    type C = BigInt;

    fn is_zero(&self, c: &BigInt) -> bool {
        c.is_zero()
    }
    fn is_one(&self, c: &BigInt) -> bool {
        c.is_one()
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn cancel(&self, f_lead: &BigInt, g_lead: &BigInt) -> (BigInt, BigInt) {
        let g = f_lead.gcd(g_lead);
        let (mut a, mut b) = (g_lead / &g, f_lead / &g);
        if a.is_negative() {
            a = -a;
            b = -b;
        }
        (a, b)
    }
    fn normalize(&self, p: &mut EPoly<BigInt>) {
        if p.is_empty() {
            return;
        }
        let mut g = BigInt::zero();
        for t in p.iter() {
            g = g.gcd(&t.coeff);
            if g.is_one() {
                break;
            }
        }
        if p[0].coeff.sign() == Sign::Minus {
            g = -g;
        }
        if !g.is_one() {
            for t in p.iter_mut() {
                t.coeff = &t.coeff / &g;
            }
        }
    }
    fn bits(&self, c: &BigInt) -> u64 {
        c.bits()
    }
    fn shrink(&self, p: &mut EPoly<BigInt>) {
        let mut g = BigInt::zero();
        for t in p.iter() {
            g = g.gcd(&t.coeff);
            if g.is_one() {
                return;
            }
        }
        if !g.is_zero() {
            for t in p.iter_mut() {
                t.coeff = &t.coeff / &g;
            }
        }
    }
}

/// Exact rational field arithmetic, used where true normal forms are needed.
#[derive(Clone, Copy, Debug)]
pub(crate) struct RatArith;

impl Arith for RatArith {
    type C = BigRational;

    fn is_zero(&self, c: &BigRational) -> bool {
        c.is_zero()
    }
    fn is_one(&self, c: &BigRational) -> bool {
        c.is_one()
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn cancel(&self, f_lead: &BigRational, g_lead: &BigRational) -> (BigRational, BigRational) {
        (BigRational::one(), f_lead / g_lead)
    }
    fn normalize(&self, p: &mut EPoly<BigRational>) {
        if let Some(lead) = p.first().map(|t| t.coeff.clone()) {
            if !lead.is_one() {
                for t in p.iter_mut() {
                    t.coeff = &t.coeff / &lead;
                }
            }
        }
    }
}

pub(crate) fn sort_terms<C, O: TermOrder>(p: &mut EPoly<C>, ord: O) {
    p.sort_by(|a, b| ord.cmp(&b.mono, &a.mono));
}

/// `a*f[from..] - b*m*g[1..]`, merged in descending order, zeros dropped.
fn axpy_tail<A: Arith, O: TermOrder>(
    ar: &A,
    ord: O,
    f: &[Term<A::C>],
    a: &A::C,
    b: &A::C,
    m: &Monomial,
    g: &[Term<A::C>],
    out: &mut EPoly<A::C>,
) {
    let scale_f = !ar.is_one(a);
    let mut i = 0;
    let mut j = 1;
    let neg_b = ar.neg(b);
    while i < f.len() || j < g.len() {
        let order = if i == f.len() {
            Ordering::Less
        } else if j == g.len() {
            Ordering::Greater
        } else {
            // compare f[i] against m*g[j] without allocating first when possible
            let gm = m.mul(&g[j].mono);
            let o = ord.cmp(&f[i].mono, &gm);
            if o == Ordering::Equal {
                let c = ar.sub(
                    &if scale_f { ar.mul(a, &f[i].coeff) } else { f[i].coeff.clone() },
                    &ar.mul(b, &g[j].coeff),
                );
                if !ar.is_zero(&c) {
                    out.push(Term { mono: gm, coeff: c });
                }
                i += 1;
                j += 1;
                continue;
            }
            if o == Ordering::Less {
                out.push(Term {
                    mono: gm,
                    coeff: ar.mul(&neg_b, &g[j].coeff),
                });
                j += 1;
                continue;
            }
            o
        };
        match order {
            Ordering::Greater => {
                let c = if scale_f { ar.mul(a, &f[i].coeff) } else { f[i].coeff.clone() };
                out.push(Term {
                    mono: f[i].mono.clone(),
                    coeff: c,
                });
                i += 1;
            }
            _ => {
                out.push(Term {
                    mono: m.mul(&g[j].mono),
                    coeff: ar.mul(&neg_b, &g[j].coeff),
                });
                j += 1;
            }
        }
    }
}

/// Leading data of a reducer, kept apart for a fast divisor scan.
pub(crate) struct Reducer<'a, C> {
    pub lead: &'a Monomial,
    pub mask: u64,
    pub poly: &'a [Term<C>],
}

fn find_divisor<'a, 'b, C>(reducers: &'b [Reducer<'a, C>], m: &Monomial) -> Option<&'b Reducer<'a, C>> {
    let mask = m.support_mask();
    reducers
        .iter()
        .find(|r| r.mask & !mask == 0 && r.lead.divides(m))
}

/// Reduces the terms of `f` from index `start` on. With `top_only` it stops
/// at the first irreducible term. Over `Z` the result is a nonzero scalar
/// multiple of the true remainder.
fn reduce_core<A: Arith, O: TermOrder>(
    ar: &A,
    ord: O,
    mut f: EPoly<A::C>,
    reducers: &[Reducer<'_, A::C>],
    start: usize,
    top_only: bool,
) -> EPoly<A::C> {
    let mut k = start;
    let mut buf = Vec::new();
    while k < f.len() {
        let Some(r) = find_divisor(reducers, &f[k].mono) else {
            if top_only {
                break;
            }
            k += 1;
            continue;
        };
        let m = r.lead.quotient_into(&f[k].mono).expect("divisor");
        let (a, b) = ar.cancel(&f[k].coeff, &r.poly[0].coeff);
        buf.clear();
        buf.reserve(f.len() + r.poly.len());
        if ar.is_one(&a) {
            buf.extend_from_slice(&f[..k]);
        } else {
            buf.extend(f[..k].iter().map(|t| Term {
                mono: t.mono.clone(),
                coeff: ar.mul(&a, &t.coeff),
            }));
        }
        axpy_tail(ar, ord, &f[k + 1..], &a, &b, &m, r.poly, &mut buf);
        std::mem::swap(&mut f, &mut buf);
        ar.shrink(&mut f);
    }
    f
}

/// Full reduction of `f` modulo `reducers`.
pub(crate) fn reduce<A: Arith, O: TermOrder>(
    ar: &A,
    ord: O,
    f: EPoly<A::C>,
    reducers: &[Reducer<'_, A::C>],
) -> EPoly<A::C> {
    reduce_core(ar, ord, f, reducers, 0, false)
}

/// S-polynomial of two normalized polynomials.
fn s_poly<A: Arith, O: TermOrder>(ar: &A, ord: O, f: &[Term<A::C>], g: &[Term<A::C>], lcm: &Monomial) -> EPoly<A::C> {
    let mf = f[0].mono.quotient_into(lcm).expect("lcm");
    let mg = g[0].mono.quotient_into(lcm).expect("lcm");
    let (a, b) = ar.cancel(&f[0].coeff, &g[0].coeff);
    let fm: EPoly<A::C> = f
        .iter()
        .map(|t| Term {
            mono: t.mono.mul(&mf),
            coeff: t.coeff.clone(),
        })
        .collect();
    let mut out = Vec::with_capacity(f.len() + g.len());
    axpy_tail(ar, ord, &fm[1..], &a, &b, &mg, g, &mut out);
    out
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct State<A: Arith> {
    polys: Vec<EPoly<A::C>>,
    leads: Vec<Monomial>,
    masks: Vec<u64>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

fn sugar_of<C>(p: &[Term<C>]) -> u32 {
    p.iter().map(|t| t.mono.degree()).max().unwrap_or(0)
}

/// Selection weight. Under degree orders this is the normal strategy;
/// otherwise the sugar strategy, which keeps elimination orders from
/// running far ahead in degree.
fn weight<O: TermOrder>(ord: O, sugar: u32) -> u32 {
    if ord.is_degree_compatible() {
        0
    } else {
        sugar
    }
}

impl<A: Arith> State<A> {
    fn reducers(&self) -> Vec<Reducer<'_, A::C>> {
        (0..self.polys.len())
            .filter(|&k| self.active[k])
            .map(|k| Reducer {
                lead: &self.leads[k],
                mask: self.masks[k],
                poly: &self.polys[k],
            })
            .collect()
    }

    /// Gebauer-Moller installation of a new (reduced, nonzero) element.
    fn update<O: TermOrder>(&mut self, h: EPoly<A::C>, h_sugar: u32, ord: O) {
        let hl = h[0].mono.clone();
        let hidx = self.polys.len();

        // Candidate new pairs (g, h).
        let mut cands: Vec<(usize, Monomial, bool)> = (0..hidx)
            .filter(|&g| self.active[g])
            .map(|g| {
                let lcm = self.leads[g].lcm(&hl);
                let coprime = self.leads[g].is_coprime(&hl);
                (g, lcm, coprime)
            })
            .collect();

        // Chain criterion among the new pairs.
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        while let Some((g1, lcm1, coprime1)) = cands.pop() {
            let dominated = !coprime1
                && (cands.iter().any(|(_, l, _)| l.divides(&lcm1))
                    || kept.iter().any(|(_, l, _)| l.divides(&lcm1)));
            if !dominated {
                kept.push((g1, lcm1, coprime1));
            }
        }
        let new_pairs = kept
            .into_iter()
            .filter(|(_, _, coprime)| !coprime)
            .map(|(g, lcm, _)| {
                let d = lcm.degree();
                let sugar = (self.sugar[g] + d - self.leads[g].degree()).max(h_sugar + d - hl.degree());
                Pair { i: g, j: hidx, lcm, sugar }
            })
            .collect::<Vec<_>>();

        // Drop old pairs made redundant by h.
        let leads = &self.leads;
        self.pairs.retain(|p| {
            !hl.divides(&p.lcm)
                || leads[p.i].lcm(&hl) == p.lcm
                || leads[p.j].lcm(&hl) == p.lcm
        });
        self.pairs.extend(new_pairs);
        // Lowest sugar, then smallest lcm, at the end for pop().
        self.pairs.sort_by(|a, b| {
            weight(ord, b.sugar)
                .cmp(&weight(ord, a.sugar))
                .then_with(|| ord.cmp(&b.lcm, &a.lcm))
                .then_with(|| (b.i, b.j).cmp(&(a.i, a.j)))
        });

        for g in 0..hidx {
            if self.active[g] && hl.divides(&self.leads[g]) {
                self.active[g] = false;
            }
        }
        self.masks.push(hl.support_mask());
        self.sugar.push(h_sugar);
        self.leads.push(hl);
        self.polys.push(h);
        self.active.push(true);
    }
}

/// Reduced Groebner basis of the ideal generated by `gens` (each sorted
/// descending under `ord`). Output is normalized and sorted ascending by
/// leading monomial.
pub(crate) fn groebner<A: Arith, O: TermOrder>(ar: &A, ord: O, gens: Vec<EPoly<A::C>>) -> Vec<EPoly<A::C>> {
    groebner_capped(ar, ord, gens, None).expect("no cap")
}

/// As [`groebner`], giving up once a new basis element carries a
/// coefficient wider than `bit_cap` bits.
pub(crate) fn groebner_capped<A: Arith, O: TermOrder>(
    ar: &A,
    ord: O,
    gens: Vec<EPoly<A::C>>,
    bit_cap: Option<u64>,
) -> Option<Vec<EPoly<A::C>>> {
    let mut pending: Vec<EPoly<A::C>> = gens.into_iter().filter(|g| !g.is_empty()).collect();
    for g in pending.iter_mut() {
        ar.normalize(g);
    }
    // Sugar strategy: pop() yields the lowest sugar, then the smallest lead.
    pending.sort_by(|a, b| {
        weight(ord, sugar_of(b))
            .cmp(&weight(ord, sugar_of(a)))
            .then_with(|| ord.cmp(&b[0].mono, &a[0].mono))
    });

    let mut st: State<A> = State {
        polys: Vec::new(),
        leads: Vec::new(),
        masks: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };

    loop {
        let take_gen = match (pending.last(), st.pairs.last()) {
            (None, None) => break,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(g), Some(p)) => weight(ord, sugar_of(g))
                .cmp(&weight(ord, p.sugar))
                .then_with(|| ord.cmp(&g[0].mono, &p.lcm))
                != Ordering::Greater,
        };
        let (candidate, sugar) = if take_gen {
            let g = pending.pop().expect("pending generator");
            let sugar = sugar_of(&g);
            (g, sugar)
        } else {
            let p = st.pairs.pop().expect("pair");
            (s_poly(ar, ord, &st.polys[p.i], &st.polys[p.j], &p.lcm), p.sugar)
        };
        let mut h = {
            let reducers = st.reducers();
            reduce_core(ar, ord, candidate, &reducers, 0, true)
        };
        if h.is_empty() {
            continue;
        }
        ar.normalize(&mut h);
        if h[0].mono.is_one() {
            // Unit ideal.
            return Some(vec![h]);
        }
        if let Some(cap) = bit_cap {
            if h.iter().any(|t| ar.bits(&t.coeff) > cap) {
                return None;
            }
        }
        let sugar = sugar.max(sugar_of(&h));
        st.update(h, sugar, ord);
    }

    Some(interreduce(ar, ord, st))
}

/// Tail-reduces the minimal elements in ascending order of leading monomial,
/// so every reducer is already fully reduced.
fn interreduce<A: Arith, O: TermOrder>(ar: &A, ord: O, st: State<A>) -> Vec<EPoly<A::C>> {
    let State { polys, active, .. } = st;
    let kept = polys.into_iter().zip(active).filter(|(_, a)| *a).map(|(p, _)| p).collect();
    interreduce_list(ar, ord, kept)
}

/// Reduced basis from a Groebner basis whose leading terms need not be
/// minimal: drops redundant elements, then tail-reduces.
pub(crate) fn interreduce_list<A: Arith, O: TermOrder>(ar: &A, ord: O, polys: Vec<EPoly<A::C>>) -> Vec<EPoly<A::C>> {
    let mut polys: Vec<EPoly<A::C>> = polys.into_iter().filter(|p| !p.is_empty()).collect();
    polys.sort_by(|a, b| ord.cmp(&a[0].mono, &b[0].mono));
    // Ascending order puts every divisor before its multiples.
    let mut minimal: Vec<EPoly<A::C>> = Vec::with_capacity(polys.len());
    for p in polys {
        if !minimal.iter().any(|q| q[0].mono.divides(&p[0].mono)) {
            minimal.push(p);
        }
    }
    let mut done: Vec<EPoly<A::C>> = Vec::with_capacity(minimal.len());
    let mut masks: Vec<u64> = Vec::with_capacity(minimal.len());
    for p in minimal {
        let reducers: Vec<Reducer<'_, A::C>> = done
            .iter()
            .zip(&masks)
            .map(|(p, &mask)| Reducer {
                lead: &p[0].mono,
                mask,
                poly: p,
            })
            .collect();
        let mut p = reduce_core(ar, ord, p, &reducers, 1, false);
        ar.normalize(&mut p);
        masks.push(p[0].mono.support_mask());
        done.push(p);
    }
    done
}

/// Whether `f` reduces to zero modulo a Groebner basis.
pub(crate) fn reduces_to_zero<A: Arith, O: TermOrder>(
    ar: &A,
    ord: O,
    f: EPoly<A::C>,
    basis: &[EPoly<A::C>],
    leads: &[Monomial],
    masks: &[u64],
) -> bool {
    let reducers: Vec<Reducer<'_, A::C>> = basis
        .iter()
        .zip(leads)
        .zip(masks)
        .map(|((p, l), &m)| Reducer {
            lead: l,
            mask: m,
            poly: p,
        })
        .collect();
    reduce_core(ar, ord, f, &reducers, 0, true).is_empty()
}

/// Pairs that survive the Gebauer-Moller criteria when the leading
/// monomials are installed one at a time. Checking only these suffices.
fn criterion_pairs(leads: &[Monomial]) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();
    let mut active = vec![false; leads.len()];
    for h in 0..leads.len() {
        let hl = &leads[h];
        let mut cands: Vec<(usize, Monomial, bool)> = (0..h)
            .filter(|&g| active[g])
            .map(|g| (g, leads[g].lcm(hl), leads[g].is_coprime(hl)))
            .collect();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        while let Some((g, lcm, coprime)) = cands.pop() {
            let dominated = !coprime
                && (cands.iter().any(|(_, l, _)| l.divides(&lcm)) || kept.iter().any(|(_, l, _)| l.divides(&lcm)));
            if !dominated {
                kept.push((g, lcm, coprime));
            }
        }
        pairs.retain(|(i, j, lcm)| !hl.divides(lcm) || leads[*i].lcm(hl) == *lcm || leads[*j].lcm(hl) == *lcm);
        pairs.extend(kept.into_iter().filter(|(_, _, c)| !c).map(|(g, lcm, _)| (g, h, lcm)));
        for g in 0..h {
            if active[g] && hl.divides(&leads[g]) {
                active[g] = false;
            }
        }
        active[h] = true;
    }
    pairs.into_iter().map(|(i, j, _)| (i, j)).collect()
}

/// All S-polynomials of `basis` reduce to zero (Buchberger's criterion).
pub(crate) fn is_groebner<A: Arith, O: TermOrder>(ar: &A, ord: O, basis: &[EPoly<A::C>]) -> bool {
    let leads: Vec<Monomial> = basis.iter().map(|p| p[0].mono.clone()).collect();
    let masks: Vec<u64> = leads.iter().map(Monomial::support_mask).collect();
    criterion_pairs(&leads).into_iter().all(|(i, j)| {
        let lcm = leads[i].lcm(&leads[j]);
        let s = s_poly(ar, ord, &basis[i], &basis[j], &lcm);
        reduces_to_zero(ar, ord, s, basis, &leads, &masks)
    })
}
