//! Ideals of `R = k[vars]/Q` and the operator algebra on them.

use std::fmt;
use std::sync::Arc;

use once_cell::sync::OnceCell;

use crate::context::RingContext;
use crate::error::{Error, Result};
use crate::groebner::{buchberger, GbLimits, GroebnerBasis};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{PolyRing, Polynomial};

/// An ideal given by generators; the relations of the context are always
/// implicitly included.
#[derive(Clone)]
pub struct Ideal {
    ctx: Arc<RingContext>,
    gens: Vec<Polynomial>,
    gb: Arc<OnceCell<GroebnerBasis>>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| self.ctx.format_poly(g)).collect();
        write!(f, "({})", gens.join(", "))
    }
}

/// Eliminates the first `k` variables of `ring` from the ideal generated by
/// `gens`; returns a reduced grevlex basis in the remaining variables.
pub(crate) fn eliminate_front(
    ring: &PolyRing,
    gens: &[Polynomial],
    k: usize,
    limits: GbLimits,
) -> Result<Vec<Polynomial>> {
    let block = ring.with_order(MonomialOrder::Block(k));
    let gens: Vec<Polynomial> = gens.iter().map(|g| block.convert(g)).collect();
    let gb = buchberger(&block, &gens, limits, None)?;
    let front: u64 = (1u64 << k) - 1;
    let inner = PolyRing::new(ring.field, ring.nvars - k, MonomialOrder::GrevLex);
    Ok(gb
        .polys()
        .iter()
        .filter(|g| g.avoids_variables(front))
        .map(|g| inner.drop_front(g, k))
        .collect())
}

/// `f` with variable `i` renamed to `perm[i]`.
fn permute(ring: &PolyRing, f: &Polynomial, perm: &[usize]) -> Polynomial {
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut e = vec![0u32; perm.len()];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[perm[i]] = x;
            }
            (Monomial::from_exponents(&e), *c)
        })
        .collect();
    ring.from_terms(terms)
}

impl Ideal {
    pub fn new(ctx: &Arc<RingContext>, gens: Vec<Polynomial>) -> Result<Ideal> {
        let ring = ctx.ring();
        let mut out: Vec<Polynomial> = Vec::with_capacity(gens.len());
        for g in gens {
            if g.nvars() != ctx.nvars() {
                return Err(Error::ContextMismatch(format!(
                    "generator in {} variables for a ring with {}",
                    g.nvars(),
                    ctx.nvars()
                )));
            }
            let g = ring.monic(&ring.convert(&g));
            if !g.is_zero() && !out.contains(&g) {
                out.push(g);
            }
        }
        Ok(Self::raw(ctx, out))
    }

    fn raw(ctx: &Arc<RingContext>, gens: Vec<Polynomial>) -> Ideal {
        Ideal {
            ctx: Arc::clone(ctx),
            gens,
            gb: Arc::new(OnceCell::new()),
        }
    }

    /// An ideal whose reduced basis (including the relations) is known.
    fn from_basis(ctx: &Arc<RingContext>, polys: Vec<Polynomial>) -> Ideal {
        let gb = GroebnerBasis::from_reduced(&ctx.ring(), polys.clone());
        let cell = OnceCell::new();
        let _ = cell.set(gb);
        Ideal {
            ctx: Arc::clone(ctx),
            gens: polys,
            gb: Arc::new(cell),
        }
    }

    pub fn zero(ctx: &Arc<RingContext>) -> Ideal {
        Self::raw(ctx, vec![])
    }

    pub fn unit(ctx: &Arc<RingContext>) -> Ideal {
        Self::raw(ctx, vec![ctx.ring().one()])
    }

    /// The maximal ideal `m` generated by all variables.
    pub fn maximal(ctx: &Arc<RingContext>) -> Ideal {
        let r = ctx.ring();
        Self::raw(ctx, (0..ctx.nvars()).map(|v| r.variable(v)).collect())
    }

    pub fn principal(ctx: &Arc<RingContext>, f: Polynomial) -> Result<Ideal> {
        Self::new(ctx, vec![f])
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn ring(&self) -> PolyRing {
        self.ctx.ring()
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Largest generator degree, `0` for the zero ideal.
    pub fn max_degree(&self) -> u32 {
        self.gens.iter().filter_map(|g| g.degree()).max().unwrap_or(0)
    }

    fn check(&self, other: &Ideal) -> Result<()> {
        if !Arc::ptr_eq(&self.ctx, &other.ctx) && *self.ctx != *other.ctx {
            return Err(Error::ContextMismatch("ideals over different rings".into()));
        }
        Ok(())
    }

    /// Reduced grevlex basis of `gens + Q`.
    pub fn gb(&self) -> Result<&GroebnerBasis> {
        self.gb.get_or_try_init(|| {
            let mut all = self.gens.clone();
            all.extend(self.ctx.relations().iter().cloned());
            buchberger(&self.ring(), &all, self.ctx.limits(), None)
        })
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.gb()?.contains(&self.ring().convert(f)))
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        Ok(self.gb()?.normal_form(&self.ring().convert(f)))
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Ideal) -> Result<bool> {
        self.check(other)?;
        if other.is_unit()? {
            return Ok(true);
        }
        for g in &self.gens {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        self.check(other)?;
        Ok(self.gb()?.polys() == other.gb()?.polys())
    }

    pub fn is_unit(&self) -> Result<bool> {
        if self.gens.iter().any(|g| g.is_constant()) {
            return Ok(true);
        }
        Ok(self.gb()?.is_unit())
    }

    /// Whether the ideal is zero in `R`.
    pub fn is_zero(&self) -> Result<bool> {
        let q = self.ctx.relations_gb()?;
        Ok(self.gens.iter().all(|g| q.contains(g)))
    }

    /// Whether the ideal lies in `m`; equivalently its localization is proper.
    pub fn is_local_proper(&self) -> bool {
        self.gens.iter().all(|g| g.constant_term() == 0)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        let mut gens = self.gens.clone();
        for g in &other.gens {
            if !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        Ok(Self::raw(&self.ctx, gens))
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        let r = self.ring();
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(r.mul(a, b));
            }
        }
        Self::new(&self.ctx, gens)
    }

    /// `f · self`.
    pub fn scale(&self, f: &Polynomial) -> Result<Ideal> {
        let r = self.ring();
        let f = r.convert(f);
        Self::new(&self.ctx, self.gens.iter().map(|g| r.mul(g, &f)).collect())
    }

    /// `self^n` generated by all degree-`n` monomials in the generators;
    /// `self^0 = (1)`.
    pub fn power(&self, n: u32) -> Result<Ideal> {
        let r = self.ring();
        let mut layer: Vec<(Polynomial, usize)> = vec![(r.one(), 0)];
        for _ in 0..n {
            let mut next = Vec::new();
            for (p, last) in &layer {
                for (j, g) in self.gens.iter().enumerate().skip(*last) {
                    next.push((r.mul(p, g), j));
                }
            }
            layer = next;
        }
        Self::new(&self.ctx, layer.into_iter().map(|(p, _)| p).collect())
    }

    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        if self.is_unit()? {
            return Ok(other.clone());
        }
        if other.is_unit()? {
            return Ok(self.clone());
        }
        let q = self.ctx.relations();
        let mut a = self.gens.clone();
        a.extend(q.iter().cloned());
        let mut b = other.gens.clone();
        b.extend(q.iter().cloned());
        let basis = intersect_ambient(&self.ctx, &a, &b)?;
        Ok(Self::from_basis(&self.ctx, basis))
    }

    /// `self : (f)`.
    pub fn colon_element(&self, f: &Polynomial) -> Result<Ideal> {
        let r = self.ring();
        let f = r.monic(&r.convert(f));
        if self.contains(&f)? {
            return Ok(Self::unit(&self.ctx));
        }
        if f.is_constant() {
            return Ok(self.clone());
        }
        let mut a = self.gens.clone();
        a.extend(self.ctx.relations().iter().cloned());
        let meet = intersect_ambient(&self.ctx, &a, std::slice::from_ref(&f))?;
        let mut gens = Vec::with_capacity(meet.len());
        for h in &meet {
            gens.push(r.divide_exact(h, &f).ok_or(Error::Division("colon ideal"))?);
        }
        Self::new(&self.ctx, gens)
    }

    /// `self : other`; the colon by the zero ideal is `(1)`.
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        let mut acc = Self::unit(&self.ctx);
        for f in &other.gens {
            if self.contains(f)? {
                continue;
            }
            let c = self.colon_element(f)?;
            acc = acc.intersect(&c)?;
        }
        Ok(acc)
    }

    /// `self : other^∞`, the stable member of the chain of iterated colons.
    pub fn saturate(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        let mut cur = self.clone();
        for _ in 0..10_000 {
            let next = cur.colon(other)?;
            if next.is_subset_of(&cur)? {
                return Ok(cur);
            }
            cur = next;
        }
        Err(Error::ComputationLimit {
            what: "saturation chain",
            limit: 10_000,
        })
    }

    /// `self : m^∞`.
    pub fn saturate_maximal(&self) -> Result<Ideal> {
        self.saturate(&Self::maximal(&self.ctx))
    }

    /// Krull dimension of `k[vars]/(self + Q)`; `-1` for the unit ideal.
    pub fn krull_dim(&self) -> Result<i64> {
        Ok(self.gb()?.krull_dimension())
    }

    /// Height of the ideal in `R`, as `dim R - dim R/L`; the unit ideal gets
    /// `dim R + 1`.
    pub fn codimension(&self) -> Result<i64> {
        let d = self.ctx.dim()?;
        if self.is_unit()? {
            return Ok(d + 1);
        }
        Ok(d - self.krull_dim()?)
    }

    /// Generators of `self ∩ k[vars \ drop]`.
    pub fn eliminate(&self, drop: &[usize]) -> Result<Ideal> {
        let n = self.ctx.nvars();
        let mut order: Vec<usize> = drop.to_vec();
        order.sort_unstable();
        order.dedup();
        if order.iter().any(|&v| v >= n) {
            return Err(Error::Precondition("elimination variable out of range".into()));
        }
        order.extend((0..n).filter(|v| !drop.contains(v)));
        // perm[old] = new position
        let mut perm = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        let mut inverse = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inverse[new] = old;
        }
        let r = self.ring();
        let mut gens: Vec<Polynomial> = self.gens.iter().map(|g| permute(&r, g, &perm)).collect();
        gens.extend(self.ctx.relations().iter().map(|g| permute(&r, g, &perm)));
        let k = drop.len().min(n);
        let kept = eliminate_front(&r, &gens, k, self.ctx.limits())?;
        let inner = PolyRing::new(r.field, n - k, MonomialOrder::GrevLex);
        let mut out = Vec::new();
        for g in kept {
            let lifted = inner.lift_front(&g, k);
            out.push(permute(&r, &lifted, &inverse));
        }
        Self::new(&self.ctx, out)
    }

    /// Local containment `other_m ⊆ self_m` at the origin.
    pub fn locally_contains(&self, other: &Ideal) -> Result<bool> {
        if other.is_subset_of(self)? {
            return Ok(true);
        }
        Ok(!self.colon(other)?.is_local_proper())
    }

    /// Equality after localizing at the origin.
    pub fn locally_equals(&self, other: &Ideal) -> Result<bool> {
        Ok(self.locally_contains(other)? && other.locally_contains(self)?)
    }
}

/// `A ∩ B` in the ambient polynomial ring via `t·A + (1-t)·B`; returns a
/// reduced grevlex basis.
fn intersect_ambient(
    ctx: &Arc<RingContext>,
    a: &[Polynomial],
    b: &[Polynomial],
) -> Result<Vec<Polynomial>> {
    let r = ctx.ring();
    let big = PolyRing::new(r.field, r.nvars + 1, MonomialOrder::GrevLex);
    let t = big.variable(0);
    let one_minus_t = big.sub(&big.one(), &t);
    let mut gens = Vec::with_capacity(a.len() + b.len());
    for f in a {
        gens.push(big.mul(&t, &r.lift_front(f, 1)));
    }
    for g in b {
        gens.push(big.mul(&one_minus_t, &r.lift_front(g, 1)));
    }
    eliminate_front(&big, &gens, 1, ctx.limits())
}

/// Memoized powers `I^0, I^1, ...`, with `I^k = (1)` for `k <= 0`.
#[derive(Clone)]
pub struct IdealPowers {
    base: Ideal,
    list: Vec<Ideal>,
}

impl IdealPowers {
    pub fn new(base: &Ideal) -> Self {
        IdealPowers {
            base: base.clone(),
            list: vec![Ideal::unit(base.context())],
        }
    }

    pub fn base(&self) -> &Ideal {
        &self.base
    }

    pub fn get(&mut self, k: i64) -> Result<Ideal> {
        if k <= 0 {
            return Ok(self.list[0].clone());
        }
        let k = k as usize;
        while self.list.len() <= k {
            let next = if self.list.len() == 1 {
                self.base.clone()
            } else {
                self.list.last().unwrap().product(&self.base)?
            };
            self.list.push(next);
        }
        Ok(self.list[k].clone())
    }
}
