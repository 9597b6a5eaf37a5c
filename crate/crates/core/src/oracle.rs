//! Combinatorial monomial-ideal arithmetic on exponent vectors, independent
//! of the Gröbner engine. Used to cross-check it.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::context::RingContext;
use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::length::LengthValue;
use crate::monomial::Monomial;

type Exps = Vec<u32>;

/// Minimal generators, sorted, pairwise incomparable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<Exps>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl MonomialIdeal {
    pub fn new(nvars: usize, gens: Vec<Exps>) -> Self {
        assert!(gens.iter().all(|g| g.len() == nvars), "exponent length");
        let set: BTreeSet<Exps> = gens.into_iter().collect();
        let all: Vec<Exps> = set.into_iter().collect();
        let gens = all
            .iter()
            .filter(|g| !all.iter().any(|h| h != *g && divides(h, g)))
            .cloned()
            .collect();
        MonomialIdeal { nvars, gens }
    }

    pub fn zero(nvars: usize) -> Self {
        MonomialIdeal { nvars, gens: vec![] }
    }

    pub fn unit(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            gens: vec![vec![0; nvars]],
        }
    }

    pub fn maximal(nvars: usize) -> Self {
        let gens = (0..nvars)
            .map(|i| {
                let mut e = vec![0; nvars];
                e[i] = 1;
                e
            })
            .collect();
        MonomialIdeal::new(nvars, gens)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Exps] {
        &self.gens
    }

    pub fn contains(&self, u: &[u32]) -> bool {
        self.gens.iter().any(|g| divides(g, u))
    }

    pub fn is_subset_of(&self, other: &MonomialIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Self {
        MonomialIdeal::new(
            self.nvars,
            self.gens.iter().chain(&other.gens).cloned().collect(),
        )
    }

    pub fn product(&self, other: &MonomialIdeal) -> Self {
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        MonomialIdeal::new(self.nvars, gens)
    }

    pub fn power(&self, n: u32) -> Self {
        (0..n).fold(MonomialIdeal::unit(self.nvars), |acc, _| acc.product(self))
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> Self {
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.iter().zip(b).map(|(x, y)| *x.max(y)).collect());
            }
        }
        MonomialIdeal::new(self.nvars, gens)
    }

    fn colon_monomial(&self, u: &[u32]) -> Self {
        let gens = self
            .gens
            .iter()
            .map(|g| g.iter().zip(u).map(|(x, y)| x.saturating_sub(*y)).collect())
            .collect();
        MonomialIdeal::new(self.nvars, gens)
    }

    pub fn colon(&self, other: &MonomialIdeal) -> Self {
        other
            .gens
            .iter()
            .fold(MonomialIdeal::unit(self.nvars), |acc, u| {
                acc.intersect(&self.colon_monomial(u))
            })
    }

    /// `I : x_i^∞`: the exponent of `x_i` is dropped from every generator.
    fn saturate_variable(&self, var: usize) -> Self {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let mut g = g.clone();
                g[var] = 0;
                g
            })
            .collect();
        MonomialIdeal::new(self.nvars, gens)
    }

    /// `I : (x_v : v ∈ vars)^∞`, the intersection of the single-variable saturations.
    pub fn saturate(&self, vars: &[usize]) -> Self {
        vars.iter()
            .fold(MonomialIdeal::unit(self.nvars), |acc, &v| {
                acc.intersect(&self.saturate_variable(v))
            })
    }

    pub fn saturate_maximal(&self) -> Self {
        let all: Vec<usize> = (0..self.nvars).collect();
        self.saturate(&all)
    }

    fn max_exponents(&self) -> Exps {
        let mut m = vec![0; self.nvars];
        for g in &self.gens {
            for (a, b) in m.iter_mut().zip(g) {
                *a = (*a).max(*b);
            }
        }
        m
    }

    pub fn to_ideal(&self, ctx: &Arc<RingContext>) -> Result<Ideal> {
        let r = ctx.ring();
        Ideal::new(
            ctx,
            self.gens
                .iter()
                .map(|g| r.term(1, Monomial::from_exponents(g)))
                .collect(),
        )
    }

    /// The monomial ideal with the same reduced Gröbner basis, when that
    /// basis consists of monomials.
    pub fn from_ideal(i: &Ideal) -> Result<Option<Self>> {
        let gb = i.gb()?;
        if !gb.polys().iter().all(|p| p.is_monomial()) {
            return Ok(None);
        }
        let n = i.context().nvars();
        Ok(Some(MonomialIdeal::new(
            n,
            gb.polys()
                .iter()
                .map(|p| p.leading_monomial().unwrap().exponents().to_vec())
                .collect(),
        )))
    }
}

/// Calls `f` on every exponent vector `u` with `u ≤ bound` componentwise.
fn for_each_in_box(bound: &[u32], mut f: impl FnMut(&[u32])) {
    let mut u = vec![0u32; bound.len()];
    loop {
        f(&u);
        let mut i = 0;
        loop {
            if i == u.len() {
                return;
            }
            if u[i] < bound[i] {
                u[i] += 1;
                break;
            }
            u[i] = 0;
            i += 1;
        }
    }
}

/// Number of monomials in `A \ B`. Membership in either ideal only
/// depends on each exponent clamped at the largest generator exponent, so
/// a witness one step past that box means infinitely many.
pub fn mon_pair_length(a: &MonomialIdeal, b: &MonomialIdeal) -> Result<LengthValue> {
    if !b.is_subset_of(a) {
        return Err(Error::Containment {
            term: "monomial A/B".into(),
        });
    }
    let ma = a.max_exponents();
    let mb = b.max_exponents();
    let edge: Vec<u32> = ma.iter().zip(&mb).map(|(x, y)| x.max(y) + 1).collect();
    let mut count = 0u64;
    let mut infinite = false;
    for_each_in_box(&edge, |u| {
        if a.contains(u) && !b.contains(u) {
            if u.iter().zip(&edge).any(|(x, e)| x == e) {
                infinite = true;
            } else {
                count += 1;
            }
        }
    });
    Ok(if infinite {
        LengthValue::INFINITE
    } else {
        LengthValue::Finite(count)
    })
}

/// `λ(R/I)` for a monomial ideal.
pub fn mon_colength(i: &MonomialIdeal) -> Result<LengthValue> {
    mon_pair_length(&MonomialIdeal::unit(i.nvars()), i)
}

/// Classical Hilbert coefficients `e_0..e_d` of an m-primary monomial ideal
/// in `d` variables, from `λ(R/I^{n+1}) = Σ (-1)^i e_i C(n+d-i, d-i)` for
/// large `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleHilbert {
    pub counts: Vec<u64>,
    pub coefficients: Vec<i64>,
}

pub fn oracle_hilbert_coefficients(i: &MonomialIdeal) -> Result<OracleHilbert> {
    const CAP: usize = 60;
    let d = i.nvars();
    if mon_colength(i)?.finite().is_none() {
        return Err(Error::Precondition("oracle Hilbert coefficients need an m-primary ideal".into()));
    }
    let mut counts = Vec::new();
    let mut power = i.clone();
    loop {
        counts.push(mon_colength(&power)?.finite().expect("m-primary power"));
        power = power.product(i);
        let n = counts.len();
        if n >= d + 5 && stable_top_difference(&counts, d, d + 3) {
            break;
        }
        if n >= CAP {
            return Err(Error::NonStabilized(format!(
                "oracle Hilbert function not polynomial by n = {CAP}"
            )));
        }
    }
    let mut residual: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
    let mut coefficients = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let k = d - i;
        let top = nth_backward_difference(&residual, k);
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let e = sign * top;
        coefficients.push(e as i64);
        for (n, v) in residual.iter_mut().enumerate() {
            *v -= top * choose(n as i128 + k as i128, k as i128);
        }
    }
    debug_assert_eq!(residual.last(), Some(&0));
    Ok(OracleHilbert {
        counts,
        coefficients,
    })
}

fn nth_backward_difference(values: &[i128], k: usize) -> i128 {
    let mut v: Vec<i128> = values[values.len() - k - 1..].to_vec();
    for _ in 0..k {
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    v[0]
}

fn stable_top_difference(values: &[u64], d: usize, window: usize) -> bool {
    if values.len() < d + window {
        return false;
    }
    let mut v: Vec<i128> = values.iter().map(|&c| c as i128).collect();
    for _ in 0..d {
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let tail = &v[v.len() - window..];
    tail.iter().all(|x| *x == tail[0])
}

fn choose(n: i128, k: i128) -> i128 {
    if n < k || k < 0 {
        return 0;
    }
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}
