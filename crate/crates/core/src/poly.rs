//! Sparse multivariate polynomials over a prime field.
//!
//! A [`Polynomial`] is a plain term list sorted strictly descending in the
//! order of the [`PolyRing`] that built it; arithmetic lives on the ring.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{PrimeField, Scalar};
use crate::monomial::{Monomial, MonomialOrder};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, Scalar)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    #[inline]
    pub fn leading_coefficient(&self) -> Option<Scalar> {
        self.terms.first().map(|(_, c)| *c)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn constant_term(&self) -> Scalar {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => *c,
            _ => 0,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Whether no term involves any variable in `mask`.
    pub fn avoids_variables(&self, mask: u64) -> bool {
        self.terms.iter().all(|(m, _)| m.support_mask() & mask == 0)
    }

    pub(crate) fn from_sorted_terms(nvars: usize, terms: Vec<(Monomial, Scalar)>) -> Self {
        Polynomial { nvars, terms }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{:?}", c, m)?;
        }
        Ok(())
    }
}

/// Field, variable count and monomial order shared by a family of
/// polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub field: PrimeField,
    pub nvars: usize,
    pub order: MonomialOrder,
}

impl PolyRing {
    pub fn new(field: PrimeField, nvars: usize, order: MonomialOrder) -> Self {
        PolyRing {
            field,
            nvars,
            order,
        }
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        PolyRing { order, ..*self }
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.nvars)
    }

    pub fn constant(&self, c: i64) -> Polynomial {
        self.term(self.field.from_i64(c), Monomial::one(self.nvars))
    }

    pub fn one(&self) -> Polynomial {
        self.constant(1)
    }

    pub fn variable(&self, var: usize) -> Polynomial {
        self.term(1, Monomial::variable(self.nvars, var))
    }

    pub fn term(&self, c: Scalar, m: Monomial) -> Polynomial {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c == 0 {
            return self.zero();
        }
        Polynomial {
            nvars: self.nvars,
            terms: vec![(m, c)],
        }
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges duplicates and
    /// drops zero coefficients.
    pub fn from_terms(&self, mut terms: Vec<(Monomial, Scalar)>) -> Polynomial {
        let ord = self.order;
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Scalar)> = Vec::with_capacity(terms.len());
        let p = self.field.characteristic();
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = self.field.add(*lc, c % p),
                _ => out.push((m, c % p)),
            }
        }
        out.retain(|(_, c)| *c != 0);
        Polynomial {
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn is_member(&self, f: &Polynomial) -> bool {
        f.nvars == self.nvars
            && f
                .terms
                .windows(2)
                .all(|w| self.order.cmp(&w[0].0, &w[1].0) == Ordering::Greater)
            && f.terms.iter().all(|(_, c)| *c != 0 && *c < self.field.characteristic())
    }

    fn check(&self, f: &Polynomial) -> Result<()> {
        if f.nvars != self.nvars {
            return Err(Error::ContextMismatch(format!(
                "polynomial in {} variables used in a ring with {}",
                f.nvars, self.nvars
            )));
        }
        Ok(())
    }

    /// `f + c*m*g`, merging in order.
    pub fn add_scaled(&self, f: &Polynomial, c: Scalar, m: &Monomial, g: &Polynomial) -> Polynomial {
        if c == 0 || g.is_zero() {
            return f.clone();
        }
        let fld = &self.field;
        let mut out = Vec::with_capacity(f.len() + g.len());
        let mut i = 0;
        let mut gi = g.terms.iter().map(|(gm, gc)| (gm.mul(m), fld.mul(*gc, c))).peekable();
        while i < f.terms.len() || gi.peek().is_some() {
            let take = match (f.terms.get(i), gi.peek()) {
                (Some(a), Some(b)) => self.order.cmp(&a.0, &b.0),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => unreachable!(),
            };
            match take {
                Ordering::Greater => {
                    out.push(f.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => out.push(gi.next().unwrap()),
                Ordering::Equal => {
                    let (bm, bc) = gi.next().unwrap();
                    let s = fld.add(f.terms[i].1, bc);
                    if s != 0 {
                        out.push((bm, s));
                    }
                    i += 1;
                }
            }
        }
        Polynomial {
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn add(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        self.add_scaled(f, 1, &Monomial::one(self.nvars), g)
    }

    pub fn sub(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        self.add_scaled(f, self.field.neg(1), &Monomial::one(self.nvars), g)
    }

    pub fn neg(&self, f: &Polynomial) -> Polynomial {
        self.scale(f, self.field.neg(1))
    }

    pub fn try_add(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        self.check(f)?;
        self.check(g)?;
        Ok(self.add(f, g))
    }

    pub fn try_mul(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        self.check(f)?;
        self.check(g)?;
        Ok(self.mul(f, g))
    }

    pub fn scale(&self, f: &Polynomial, c: Scalar) -> Polynomial {
        if c == 0 {
            return self.zero();
        }
        Polynomial {
            nvars: self.nvars,
            terms: f
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(*a, c)))
                .collect(),
        }
    }

    pub fn mul_term(&self, f: &Polynomial, c: Scalar, m: &Monomial) -> Polynomial {
        if c == 0 {
            return self.zero();
        }
        Polynomial {
            nvars: self.nvars,
            terms: f
                .terms
                .iter()
                .map(|(fm, a)| (fm.mul(m), self.field.mul(*a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let (small, big) = if f.len() <= g.len() { (f, g) } else { (g, f) };
        if small.is_zero() {
            return self.zero();
        }
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return self.mul_term(big, *c, m);
        }
        let mut terms = Vec::with_capacity(small.len() * big.len());
        for (am, ac) in &small.terms {
            for (bm, bc) in &big.terms {
                terms.push((am.mul(bm), self.field.mul(*ac, *bc)));
            }
        }
        self.from_terms(terms)
    }

    pub fn pow(&self, f: &Polynomial, e: u32) -> Polynomial {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, f);
        }
        acc
    }

    /// Scales so that the leading coefficient is 1; zero stays zero.
    pub fn monic(&self, f: &Polynomial) -> Polynomial {
        match f.leading_coefficient() {
            None | Some(1) => f.clone(),
            Some(c) => self.scale(f, self.field.inv(c).expect("nonzero")),
        }
    }

    /// Re-sorts `f` (built in `from`) under this ring's order.
    pub fn convert(&self, f: &Polynomial) -> Polynomial {
        debug_assert_eq!(f.nvars, self.nvars);
        let mut terms = f.terms.clone();
        let ord = self.order;
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    /// Embeds `f` into a ring with `k` extra variables placed first.
    pub fn lift_front(&self, f: &Polynomial, k: usize) -> Polynomial {
        let ring = PolyRing {
            nvars: self.nvars + k,
            ..*self
        };
        let terms = f.terms.iter().map(|(m, c)| (m.lift_front(k), *c)).collect();
        ring.from_terms(terms)
    }

    /// Drops the first `k` variables (which must not occur) and re-sorts in
    /// this ring.
    pub fn drop_front(&self, f: &Polynomial, k: usize) -> Polynomial {
        debug_assert_eq!(f.nvars, self.nvars + k);
        let terms = f.terms.iter().map(|(m, c)| (m.drop_front(k), *c)).collect();
        self.from_terms(terms)
    }

    /// Removes all terms of total degree `>= bound`.
    pub fn truncate(&self, f: &Polynomial, bound: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: f
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < bound)
                .cloned()
                .collect(),
        }
    }

    /// Substitutes zero for every variable in `mask`.
    pub fn kill_variables(&self, f: &Polynomial, mask: u64) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: f
                .terms
                .iter()
                .filter(|(m, _)| m.support_mask() & mask == 0)
                .cloned()
                .collect(),
        }
    }

    /// Exact division by a single polynomial; `None` if `g` does not divide
    /// `f`.
    pub fn divide_exact(&self, f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
        let glm = g.leading_monomial()?;
        let ginv = self.field.inv(g.leading_coefficient()?)?;
        let mut rem = f.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.terms.first().cloned() {
            let q = glm.quotient_of(&rm)?;
            let c = self.field.mul(rc, ginv);
            rem = self.add_scaled(&rem, self.field.neg(c), &q, g);
            quot.push((q, c));
        }
        Some(Polynomial {
            nvars: self.nvars,
            terms: quot,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring() -> PolyRing {
        PolyRing::new(PrimeField::default(), 2, MonomialOrder::GrevLex)
    }

    fn x() -> Polynomial {
        ring().variable(0)
    }

    fn y() -> Polynomial {
        ring().variable(1)
    }

    #[test]
    fn additive_identities() {
        let r = ring();
        assert!(r.add(&x(), &r.neg(&x())).is_zero());
        let s = r.add(&r.add(&x(), &y()), &r.sub(&x(), &y()));
        assert_eq!(s, r.scale(&x(), 2));
        assert_eq!(r.add(&x(), &r.zero()), x());
    }

    #[test]
    fn products() {
        let r = ring();
        let p = r.mul(&r.add(&x(), &y()), &r.sub(&x(), &y()));
        let expect = r.sub(&r.mul(&x(), &x()), &r.mul(&y(), &y()));
        assert_eq!(p, expect);
        assert_eq!(r.mul(&p, &r.one()), p);
        let yt = r.pow(&y(), 5);
        let xyt = r.mul(&x(), &yt);
        assert_eq!(xyt.terms()[0].0.exponents(), &[1, 5]);
    }

    #[test]
    fn mismatched_contexts_are_rejected() {
        let r3 = PolyRing::new(PrimeField::default(), 3, MonomialOrder::GrevLex);
        assert!(ring().try_add(&x(), &r3.variable(0)).is_err());
        assert!(ring().try_mul(&x(), &r3.variable(0)).is_err());
    }

    #[test]
    fn exact_division() {
        let r = ring();
        let f = r.mul(&r.add(&x(), &y()), &r.pow(&x(), 2));
        assert_eq!(r.divide_exact(&f, &r.add(&x(), &y())), Some(r.pow(&x(), 2)));
        assert_eq!(r.divide_exact(&x(), &y()), None);
    }

    fn sparse_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(((0u32..6, 0u32..6, 0u32..4), 0u32..32003), 0..20).prop_map(|ts| {
            let r = PolyRing::new(PrimeField::default(), 3, MonomialOrder::GrevLex);
            r.from_terms(
                ts.into_iter()
                    .map(|((a, b, c), k)| (Monomial::from_exponents(&[a, b, c]), k))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(f in sparse_poly(), g in sparse_poly(), h in sparse_poly()) {
            let r = PolyRing::new(PrimeField::default(), 3, MonomialOrder::GrevLex);
            prop_assert!(r.is_member(&f));
            prop_assert_eq!(r.mul(&f, &g), r.mul(&g, &f));
            prop_assert_eq!(r.mul(&r.mul(&f, &g), &h), r.mul(&f, &r.mul(&g, &h)));
            prop_assert_eq!(r.mul(&f, &r.add(&g, &h)), r.add(&r.mul(&f, &g), &r.mul(&f, &h)));
            prop_assert!(r.is_member(&r.mul(&f, &g)));
        }
    }
}
