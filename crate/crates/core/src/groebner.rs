//! Buchberger's algorithm with the Gebauer–Möller pair criteria, normal
//! forms, and the counting/dimension queries read off an initial ideal.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{PolyRing, Polynomial};

/// Resource caps for a single basis computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbLimits {
    pub max_pairs: usize,
    pub max_terms: usize,
}

impl Default for GbLimits {
    fn default() -> Self {
        GbLimits {
            max_pairs: 200_000,
            max_terms: 100_000,
        }
    }
}

/// A reduced, monic Gröbner basis sorted by ascending leading monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: PolyRing,
    polys: Vec<Polynomial>,
}

struct Divisor<'a> {
    lm: &'a Monomial,
    mask: u64,
    poly: &'a Polynomial,
}

fn find_divisor<'a>(divisors: &'a [Divisor<'a>], m: &Monomial) -> Option<&'a Divisor<'a>> {
    let mask = m.support_mask();
    divisors
        .iter()
        .find(|d| d.mask & !mask == 0 && d.lm.divides(m))
}

/// `a + c*q*g` over sorted term slices, dropping new terms of degree `>= b`.
fn merge_tail(
    ring: &PolyRing,
    a: &[(Monomial, u32)],
    c: u32,
    q: &Monomial,
    g: &[(Monomial, u32)],
    trunc: Option<u32>,
) -> Vec<(Monomial, u32)> {
    let fld = ring.field;
    let ord = ring.order;
    let mut out = Vec::with_capacity(a.len() + g.len());
    let mut i = 0;
    let mut gi = g
        .iter()
        .map(|(gm, gc)| (gm.mul(q), fld.mul(*gc, c)))
        .filter(|(m, _)| trunc.is_none_or(|b| m.degree() < b))
        .peekable();
    loop {
        let step = match (a.get(i), gi.peek()) {
            (Some(x), Some(y)) => ord.cmp(&x.0, &y.0),
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (None, None) => break,
        };
        match step {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => out.push(gi.next().unwrap()),
            Ordering::Equal => {
                let (m, v) = gi.next().unwrap();
                let s = fld.add(a[i].1, v);
                if s != 0 {
                    out.push((m, s));
                }
                i += 1;
            }
        }
    }
    out
}

/// Fully reduces `f` modulo `basis`. With `trunc = Some(b)` every term of
/// degree `>= b` is discarded along the way, which is reduction modulo the
/// extra monomial ideal `m^b`.
pub(crate) fn reduce(
    ring: &PolyRing,
    f: &Polynomial,
    basis: &[&Polynomial],
    trunc: Option<u32>,
) -> Polynomial {
    let divisors: Vec<Divisor> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let lm = g.leading_monomial().unwrap();
            Divisor {
                lm,
                mask: lm.support_mask(),
                poly: g,
            }
        })
        .collect();
    let fld = ring.field;
    let mut rem: Vec<(Monomial, u32)> = f.terms().to_vec();
    let mut pos = 0;
    let mut done: Vec<(Monomial, u32)> = Vec::new();
    while pos < rem.len() {
        let (m, c) = &rem[pos];
        if trunc.is_some_and(|b| m.degree() >= b) {
            pos += 1;
            continue;
        }
        if let Some(d) = find_divisor(&divisors, m) {
            let q = d.lm.quotient_of(m).unwrap();
            let lc = d.poly.leading_coefficient().unwrap();
            let factor = fld.neg(fld.mul(*c, fld.inv(lc).unwrap()));
            rem = merge_tail(ring, &rem[pos + 1..], factor, &q, &d.poly.terms()[1..], trunc);
            pos = 0;
            continue;
        }
        done.push(rem[pos].clone());
        pos += 1;
    }
    Polynomial::from_sorted_terms(ring.nvars, done)
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Engine {
    ring: PolyRing,
    limits: GbLimits,
    trunc: Option<u32>,
    polys: Vec<Polynomial>,
    active: Vec<bool>,
    /// Sorted descending by lcm so the smallest pair pops off the end.
    pairs: Vec<Pair>,
    processed: usize,
}

impl Engine {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading_monomial().unwrap()
    }

    fn active_refs(&self) -> Vec<&Polynomial> {
        self.polys
            .iter()
            .zip(self.active.iter())
            .filter(|(_, a)| **a)
            .map(|(p, _)| p)
            .collect()
    }

    fn check_size(&self, f: &Polynomial) -> Result<()> {
        if f.len() > self.limits.max_terms {
            return Err(Error::ComputationLimit {
                what: "polynomial support",
                limit: self.limits.max_terms,
            });
        }
        Ok(())
    }

    /// Gebauer–Möller installation of a new reduced, monic element.
    fn insert(&mut self, h: Polynomial) {
        let k = self.polys.len();
        let hlm = h.leading_monomial().unwrap().clone();
        let h_is_mono = h.is_monomial();
        self.polys.push(h);
        self.active.push(true);

        let candidates: Vec<Pair> = (0..k)
            .filter(|&i| self.active[i])
            .map(|i| Pair {
                i,
                j: k,
                lcm: self.lm(i).lcm(&hlm),
            })
            .collect();
        let coprime: Vec<bool> = candidates
            .iter()
            .map(|p| self.lm(p.i).is_coprime(&hlm))
            .collect();

        let mut kept: Vec<usize> = Vec::new();
        for (ci, p) in candidates.iter().enumerate() {
            let dominated = candidates[ci + 1..]
                .iter()
                .chain(kept.iter().map(|&q| &candidates[q]))
                .any(|q| q.lcm.divides(&p.lcm));
            if coprime[ci] || !dominated {
                kept.push(ci);
            }
        }
        let mut fresh: Vec<Pair> = kept
            .into_iter()
            .filter(|&ci| !coprime[ci])
            .filter(|&ci| !(h_is_mono && self.polys[candidates[ci].i].is_monomial()))
            .map(|ci| candidates[ci].clone())
            .collect();

        let lm_of = |idx: usize, polys: &Vec<Polynomial>| polys[idx].leading_monomial().unwrap().clone();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            if !hlm.divides(&p.lcm) {
                return true;
            }
            let li = lm_of(p.i, polys).lcm(&hlm);
            let lj = lm_of(p.j, polys).lcm(&hlm);
            li == p.lcm || lj == p.lcm
        });

        let ord = self.ring.order;
        fresh.sort_by(|a, b| ord.cmp(&b.lcm, &a.lcm));
        let old = std::mem::take(&mut self.pairs);
        let mut merged = Vec::with_capacity(old.len() + fresh.len());
        let (mut a, mut b) = (old.into_iter().peekable(), fresh.into_iter().peekable());
        loop {
            let pick_a = match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => ord.cmp(&x.lcm, &y.lcm) != Ordering::Less,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            merged.push(if pick_a { a.next() } else { b.next() }.unwrap());
        }
        self.pairs = merged;

        for i in 0..k {
            if self.active[i] && hlm.divides(self.lm(i)) {
                self.active[i] = false;
            }
        }
    }

    fn s_polynomial(&self, p: &Pair) -> Polynomial {
        let (f, g) = (&self.polys[p.i], &self.polys[p.j]);
        let qf = f.leading_monomial().unwrap().quotient_of(&p.lcm).unwrap();
        let qg = g.leading_monomial().unwrap().quotient_of(&p.lcm).unwrap();
        // both monic
        let a = self.ring.mul_term(f, 1, &qf);
        let s = self.ring.add_scaled(&a, self.ring.field.neg(1), &qg, g);
        match self.trunc {
            Some(b) => self.ring.truncate(&s, b),
            None => s,
        }
    }

    fn run(&mut self) -> Result<()> {
        while let Some(p) = self.pairs.pop() {
            self.processed += 1;
            if self.processed > self.limits.max_pairs {
                return Err(Error::ComputationLimit {
                    what: "critical pairs",
                    limit: self.limits.max_pairs,
                });
            }
            let s = self.s_polynomial(&p);
            if s.is_zero() {
                continue;
            }
            let h = reduce(&self.ring, &s, &self.active_refs(), self.trunc);
            if h.is_zero() {
                continue;
            }
            self.check_size(&h)?;
            let h = self.ring.monic(&h);
            if h.is_constant() {
                self.polys = vec![h];
                self.active = vec![true];
                self.pairs.clear();
                return Ok(());
            }
            self.insert(h);
        }
        Ok(())
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` (plus `m^b` when
/// `trunc = Some(b)`, which requires a degree-compatible order).
pub fn buchberger(
    ring: &PolyRing,
    gens: &[Polynomial],
    limits: GbLimits,
    trunc: Option<u32>,
) -> Result<GroebnerBasis> {
    debug_assert!(trunc.is_none() || ring.order.is_degree_compatible());
    let mut engine = Engine {
        ring: *ring,
        limits,
        trunc,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        processed: 0,
    };
    let mut inputs: Vec<Polynomial> = gens
        .iter()
        .map(|g| match trunc {
            Some(b) => ring.truncate(g, b),
            None => g.clone(),
        })
        .filter(|g| !g.is_zero())
        .collect();
    if let Some(b) = trunc {
        inputs.extend(
            monomials_of_degree(ring.nvars, b)
                .into_iter()
                .map(|m| ring.term(1, m)),
        );
    }
    let ord = ring.order;
    inputs.sort_by(|a, b| ord.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    for g in inputs {
        engine.check_size(&g)?;
        let h = reduce(ring, &g, &engine.active_refs(), None);
        if h.is_zero() {
            continue;
        }
        let h = ring.monic(&h);
        if h.is_constant() {
            return Ok(GroebnerBasis {
                ring: *ring,
                polys: vec![ring.one()],
            });
        }
        engine.insert(h);
    }
    engine.run()?;
    Ok(GroebnerBasis::interreduce(ring, engine.active_refs(), trunc))
}

pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial::from_exponents(cur));
            cur[i] = 0;
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if deg == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, deg, &mut cur, &mut out);
    out
}

impl GroebnerBasis {
    fn interreduce(ring: &PolyRing, minimal: Vec<&Polynomial>, trunc: Option<u32>) -> Self {
        let mut polys: Vec<Polynomial> = Vec::with_capacity(minimal.len());
        for (i, g) in minimal.iter().enumerate() {
            let others: Vec<&Polynomial> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| *p)
                .collect();
            let lt = ring.term(g.leading_coefficient().unwrap(), g.leading_monomial().unwrap().clone());
            let tail = ring.sub(g, &lt);
            let red = reduce(ring, &tail, &others, trunc);
            polys.push(ring.monic(&ring.add(&lt, &red)));
        }
        let ord = ring.order;
        polys.sort_by(|a, b| ord.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
        GroebnerBasis { ring: *ring, polys }
    }

    /// Wraps polynomials already forming a reduced monic basis, such as the
    /// surviving part of an elimination basis.
    pub(crate) fn from_reduced(ring: &PolyRing, mut polys: Vec<Polynomial>) -> Self {
        let ord = ring.order;
        polys.sort_by(|a, b| ord.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
        GroebnerBasis { ring: *ring, polys }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys
            .iter()
            .map(|p| p.leading_monomial().unwrap().clone())
            .collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let refs: Vec<&Polynomial> = self.polys.iter().collect();
        reduce(&self.ring, f, &refs, None)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Every S-polynomial reduces to zero. Used as a self-certifying check.
    pub fn verify(&self) -> bool {
        let refs: Vec<&Polynomial> = self.polys.iter().collect();
        for i in 0..self.polys.len() {
            for j in i + 1..self.polys.len() {
                let (f, g) = (&self.polys[i], &self.polys[j]);
                let (fm, gm) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
                let l = fm.lcm(gm);
                let a = self.ring.mul_term(f, 1, &fm.quotient_of(&l).unwrap());
                let s = self.ring.add_scaled(
                    &a,
                    self.ring.field.neg(1),
                    &gm.quotient_of(&l).unwrap(),
                    g,
                );
                if !reduce(&self.ring, &s, &refs, None).is_zero() {
                    return false;
                }
            }
        }
        // auto-reduced
        self.polys.iter().enumerate().all(|(i, f)| {
            f.leading_coefficient() == Some(1)
                && f.terms().iter().all(|(m, _)| {
                    self.polys
                        .iter()
                        .enumerate()
                        .all(|(j, g)| j == i || !g.leading_monomial().unwrap().divides(m))
                })
        })
    }

    /// Number of standard monomials, `None` when the initial ideal is not
    /// zero-dimensional.
    pub fn standard_monomial_count(&self) -> Option<u64> {
        count_standard_monomials(self.ring.nvars, &self.leading_monomials())
    }

    /// Krull dimension of `k[vars]/ideal`; `-1` for the unit ideal.
    pub fn krull_dimension(&self) -> i64 {
        krull_dimension_of_initial(self.ring.nvars, &self.leading_monomials())
    }
}

/// Counts monomials outside the monomial ideal generated by `lms`; `None`
/// if infinitely many.
pub fn count_standard_monomials(nvars: usize, lms: &[Monomial]) -> Option<u64> {
    if lms.iter().any(|m| m.is_one()) {
        return Some(0);
    }
    let mut bound = vec![0u32; nvars];
    for (v, b) in bound.iter_mut().enumerate() {
        let pure = lms
            .iter()
            .filter(|m| m.support_mask() == 1 << v)
            .map(|m| m.exponent(v))
            .min()?;
        *b = pure;
    }
    fn in_ideal(lms: &[Monomial], e: &[u32]) -> bool {
        lms.iter()
            .any(|m| m.exponents().iter().zip(e.iter()).all(|(a, b)| a <= b))
    }
    fn rec(i: usize, e: &mut Vec<u32>, bound: &[u32], lms: &[Monomial]) -> u64 {
        if i == e.len() {
            return 1;
        }
        let mut total = 0;
        for x in 0..bound[i] {
            e[i] = x;
            // monotone: once the prefix lies in the ideal all extensions do
            if in_ideal(lms, e) {
                break;
            }
            total += rec(i + 1, e, bound, lms);
        }
        e[i] = 0;
        total
    }
    let mut e = vec![0u32; nvars];
    Some(rec(0, &mut e, &bound, lms))
}

pub fn krull_dimension_of_initial(nvars: usize, lms: &[Monomial]) -> i64 {
    if lms.iter().any(|m| m.is_one()) {
        return -1;
    }
    let masks: Vec<u64> = lms.iter().map(|m| m.support_mask()).collect();
    let mut best = 0i64;
    for subset in 0u64..(1u64 << nvars) {
        let size = subset.count_ones() as i64;
        if size <= best {
            continue;
        }
        if masks.iter().all(|&mk| mk & !subset != 0) {
            best = size;
        }
    }
    best
}
