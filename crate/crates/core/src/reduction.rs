//! General elements, minimal reductions, analytic spread, residual height
//! checks, and the one-dimensional ring `R/(J_{d-1} : I^∞)`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::context::RingContext;
use crate::error::{Error, Result};
use crate::hilbert::{Filtration, FitPolicy, HilbertRecord};
use crate::ideal::{eliminate_front, Ideal};
use crate::length::{is_locally_finite, loc_quotient_length, pair_length_named, LengthValue, TruncationPolicy};
use crate::monomial::MonomialOrder;
use crate::poly::{PolyRing, Polynomial};

pub const DEFAULT_REDUCTION_CAP: usize = 30;
pub const DEFAULT_RETRIES: usize = 5;

/// Sampled elements `x_1..x_s`, each a random `F_p`-combination of the
/// generators of `I`.
#[derive(Debug, Clone)]
pub struct GeneralReduction {
    ctx: Arc<RingContext>,
    elements: Vec<Polynomial>,
    seed: u64,
}

impl GeneralReduction {
    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `J_i = (x_1, ..., x_i)`, with `J_0 = (0)`.
    pub fn j(&self, i: usize) -> Result<Ideal> {
        Ideal::new(&self.ctx, self.elements[..i.min(self.elements.len())].to_vec())
    }

    /// The first `k` elements.
    pub fn prefix(&self, k: usize) -> GeneralReduction {
        GeneralReduction {
            ctx: Arc::clone(&self.ctx),
            elements: self.elements[..k.min(self.elements.len())].to_vec(),
            seed: self.seed,
        }
    }
}

/// Element `k` depends only on `(generators, seed, k)`.
pub fn sample_general_elements(i: &Ideal, s: usize, seed: u64) -> Result<GeneralReduction> {
    if i.gens().is_empty() {
        return Err(Error::Precondition("cannot sample from the zero ideal".into()));
    }
    let ctx = i.context();
    let r = ctx.ring();
    let p = ctx.characteristic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elements = Vec::with_capacity(s);
    for k in 0..s {
        rng.set_stream(k as u64);
        rng.set_word_pos(0);
        let mut x = r.zero();
        for g in i.gens() {
            let c: u32 = rng.gen_range(0..p);
            x = r.add(&x, &r.scale(g, c));
        }
        elements.push(x);
    }
    Ok(GeneralReduction {
        ctx: Arc::clone(ctx),
        elements,
        seed,
    })
}

/// `ℓ(I)`: Krull dimension of the fiber cone `⊕ I^n/mI^n`.
pub fn analytic_spread(i: &Ideal) -> Result<i64> {
    let ctx = i.context();
    if !i.is_local_proper() {
        return Err(Error::Precondition("analytic spread of a non-proper ideal".into()));
    }
    if i.is_zero()? {
        return Ok(0);
    }
    let n = ctx.nvars();
    let t = i.gens().len();
    // variables ordered (u, T_1..T_t, x_1..x_n)
    let total = 1 + t + n;
    let big = PolyRing::new(ctx.field(), total, MonomialOrder::GrevLex);
    let r = ctx.ring();
    let u = big.variable(0);
    let mut gens = Vec::with_capacity(t + ctx.relations().len());
    for (j, a) in i.gens().iter().enumerate() {
        let lifted = r.lift_front(a, 1 + t);
        gens.push(big.sub(&big.variable(1 + j), &big.mul(&u, &lifted)));
    }
    for q in ctx.relations() {
        gens.push(r.lift_front(q, 1 + t));
    }
    let rees = eliminate_front(&big, &gens, 1, ctx.limits())?;
    let tx = PolyRing::new(ctx.field(), t + n, MonomialOrder::GrevLex);
    let xmask: u64 = ((1u64 << n) - 1) << t;
    let fiber: Vec<Polynomial> = rees
        .iter()
        .map(|g| tx.kill_variables(g, xmask))
        .filter(|g| !g.is_zero())
        .collect();
    // the T-only polynomials live in t + n variables with x absent, so the
    // dimension over T is the total dimension minus n
    let gb = crate::groebner::buchberger(&tx, &fiber, ctx.limits(), None)?;
    let dim = gb.krull_dimension();
    Ok(if dim < 0 { 0 } else { dim - n as i64 })
}

/// `J·I^r = I^{r+1}` after localizing at the origin.
pub fn is_reduction_at(i: &Ideal, j: &Ideal, r: u32) -> Result<bool> {
    let top = i.power(r + 1)?;
    let low = j.product(&i.power(r)?)?;
    low.locally_contains(&top)
}

/// Least `r <= cap` with `J·I^r = I^{r+1}` locally.
pub fn reduction_number(i: &Ideal, j: &Ideal, cap: usize) -> Result<usize> {
    if !j.is_subset_of(i)? {
        return Err(Error::Precondition("J is not contained in I".into()));
    }
    let mut top = i.clone();
    let mut low = j.clone();
    for r in 0..=cap {
        if low.locally_contains(&top)? {
            return Ok(r);
        }
        top = top.product(i)?;
        low = low.product(i)?;
    }
    Err(Error::NonStabilized(format!("not a reduction up to r = {cap}")))
}

/// `ℓ(I)` general elements that generate a reduction, resampling with
/// derived seeds when an unlucky draw fails.
pub fn general_minimal_reduction(
    i: &Ideal,
    seed: u64,
    cap: usize,
) -> Result<(GeneralReduction, usize)> {
    let ell = analytic_spread(i)? as usize;
    general_reduction_of_size(i, ell, ell, seed, cap)
}

/// `s` general elements whose first `ell` form a reduction of `I`; returns
/// the sample and `r_{J_ell}(I)`.
pub fn general_reduction_of_size(
    i: &Ideal,
    s: usize,
    ell: usize,
    seed: u64,
    cap: usize,
) -> Result<(GeneralReduction, usize)> {
    for attempt in 0..DEFAULT_RETRIES as u64 {
        let sd = seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let red = sample_general_elements(i, s, sd)?;
        match reduction_number(i, &red.j(ell)?, cap) {
            Ok(r) => return Ok((red, r)),
            Err(Error::NonStabilized(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted {
        attempts: DEFAULT_RETRIES,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidualCheck {
    pub i: usize,
    /// `ht(J_i : I)`.
    pub colon_height: i64,
    /// `ht(J_i : I + I)`.
    pub colon_plus_height: i64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValabregaVallaReport {
    pub nmax: usize,
    /// `J_{d-1} ∩ I^{n+1} = J_{d-1} I^n` for `n = 0..=nmax`.
    pub per_n: Vec<bool>,
    pub condition_b: bool,
    /// `Σ_n λ(I^{n+1}/JI^n)`.
    pub reduction_sum: u64,
    pub e1_bar: u64,
    pub condition_a: bool,
    pub equivalent: bool,
    /// `depth G ≥ d - 1`, reported only when the Artin–Nagata flag is set.
    pub depth_at_least_d_minus_1: Option<bool>,
}

/// Everything derived from a fixed ideal and a fixed complete sample, with
/// the expensive ideals cached.
pub struct Analysis {
    filtration: Filtration,
    red: GeneralReduction,
    ell: usize,
    d: usize,
    residuals: Vec<Option<Ideal>>,
    j_powers: Vec<Ideal>,
    reduction_ring: Option<Ideal>,
}

impl Analysis {
    /// Samples `d` elements (at least `ℓ(I)`), the first `ℓ(I)` forming a
    /// verified reduction.
    pub fn new(i: &Ideal, seed: u64, policy: TruncationPolicy) -> Result<(Analysis, usize)> {
        let d = i.context().dim()?.max(0) as usize;
        let ell = analytic_spread(i)? as usize;
        let (red, r) = general_reduction_of_size(i, d.max(ell), ell, seed, DEFAULT_REDUCTION_CAP)?;
        Ok((Self::with_reduction(i, red, ell, policy)?, r))
    }

    pub fn with_reduction(
        i: &Ideal,
        red: GeneralReduction,
        ell: usize,
        policy: TruncationPolicy,
    ) -> Result<Analysis> {
        let d = i.context().dim()?.max(0) as usize;
        Ok(Analysis {
            filtration: Filtration::new(i, policy),
            red,
            ell,
            d,
            residuals: vec![None; d + 1],
            j_powers: Vec::new(),
            reduction_ring: None,
        })
    }

    pub fn ideal(&self) -> &Ideal {
        self.filtration.ideal()
    }

    pub fn context(&self) -> &Arc<RingContext> {
        self.filtration.ideal().context()
    }

    pub fn reduction(&self) -> &GeneralReduction {
        &self.red
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn analytic_spread(&self) -> usize {
        self.ell
    }

    pub fn policy(&self) -> TruncationPolicy {
        *self.filtration.policy()
    }

    pub fn filtration(&mut self) -> &mut Filtration {
        &mut self.filtration
    }

    pub fn fit(&mut self, fit: &FitPolicy) -> Result<HilbertRecord> {
        self.filtration.fit(fit)
    }

    /// `I^k`, with `I^k = R` for `k <= 0`.
    pub fn power(&mut self, k: i64) -> Result<Ideal> {
        self.filtration.powers().get(k)
    }

    /// `J_i`.
    pub fn j(&self, i: usize) -> Result<Ideal> {
        self.red.j(i)
    }

    /// `J = J_d`.
    pub fn full_j(&self) -> Result<Ideal> {
        self.red.j(self.d)
    }

    /// `J_i : I`.
    pub fn residual(&mut self, i: usize) -> Result<Ideal> {
        if self.residuals.len() <= i {
            self.residuals.resize(i + 1, None);
        }
        if let Some(c) = &self.residuals[i] {
            return Ok(c.clone());
        }
        let c = self.j(i)?.colon(self.ideal())?;
        self.residuals[i] = Some(c.clone());
        Ok(c)
    }

    /// `J·I^n`, with `I^n = R` for `n <= 0`.
    pub fn j_times_power(&mut self, n: i64) -> Result<Ideal> {
        let n = n.max(0) as usize;
        while self.j_powers.len() <= n {
            let k = self.j_powers.len() as i64;
            let p = self.power(k)?;
            let jp = self.full_j()?.product(&p)?;
            self.j_powers.push(jp);
        }
        Ok(self.j_powers[n].clone())
    }

    /// `λ(I^{n+1}/JI^n)`.
    pub fn reduction_gap(&mut self, n: i64) -> Result<u64> {
        let top = self.power(n + 1)?;
        let low = self.j_times_power(n)?;
        pair_length_named("I^{n+1}/JI^n", &top, &low, &self.policy())?.require("I^{n+1}/JI^n")
    }

    /// Least `r` with `JI^r = I^{r+1}` locally.
    pub fn reduction_number(&mut self) -> Result<usize> {
        for r in 0..=DEFAULT_REDUCTION_CAP {
            let top = self.power(r as i64 + 1)?;
            let low = self.j_times_power(r as i64)?;
            if low.locally_contains(&top)? {
                return Ok(r);
            }
        }
        Err(Error::NonStabilized(format!(
            "not a reduction up to r = {DEFAULT_REDUCTION_CAP}"
        )))
    }

    /// `Σ_n λ(I^{n+1}/JI^n)`, which stops at the reduction number.
    pub fn reduction_sum(&mut self) -> Result<u64> {
        let r = self.reduction_number()?;
        let mut s = 0;
        for n in 0..r as i64 {
            s += self.reduction_gap(n)?;
        }
        Ok(s)
    }

    /// `ht(J_i : I) ≥ i` and `ht(J_i : I + I) ≥ i + 1` for `0 ≤ i < d`.
    pub fn residual_height_check(&mut self) -> Result<Vec<ResidualCheck>> {
        let mut out = Vec::with_capacity(self.d);
        for i in 0..self.d {
            let c = self.residual(i)?;
            let h1 = c.codimension()?;
            let h2 = c.sum(self.ideal())?.codimension()?;
            out.push(ResidualCheck {
                i,
                colon_height: h1,
                colon_plus_height: h2,
                pass: h1 >= i as i64 && h2 > i as i64,
            });
        }
        Ok(out)
    }

    /// `K = J_{d-1} : I^∞`.
    pub fn reduction_ring(&mut self) -> Result<Ideal> {
        if self.d == 0 {
            return Err(Error::Precondition("the ring has dimension 0".into()));
        }
        if let Some(k) = &self.reduction_ring {
            return Ok(k.clone());
        }
        let k = self.j(self.d - 1)?.saturate(self.ideal())?;
        self.reduction_ring = Some(k.clone());
        Ok(k)
    }

    /// Warnings when `R/K` is not one-dimensional or `I` is not primary to
    /// the maximal ideal there.
    pub fn reduction_ring_warnings(&mut self) -> Result<Vec<String>> {
        let k = self.reduction_ring()?;
        let mut w = Vec::new();
        let dim = k.krull_dim()?;
        if dim != 1 {
            w.push(format!("R/(J_(d-1):I^inf) has dimension {dim}, expected 1"));
        }
        let unit = Ideal::unit(self.context());
        if !is_locally_finite(&unit, &k.sum(self.ideal())?)? {
            w.push("I is not primary to the maximal ideal of R/(J_(d-1):I^inf)".into());
        }
        Ok(w)
    }

    /// `j_0(I) = λ(R/(K + (x_d)))`.
    pub fn j_zero(&mut self) -> Result<LengthValue> {
        let k = self.reduction_ring()?;
        let xd = self.red.elements()[self.d - 1].clone();
        let l = k.sum(&Ideal::principal(self.context(), xd)?)?;
        loc_quotient_length(&l, &self.policy())
    }

    /// `e_1(Ī) = Σ_n λ(Ī^{n+1}/x_d Ī^n)` in `R/K`; a zero term ends the sum.
    pub fn e_one_bar(&mut self, n_cap: usize) -> Result<u64> {
        let k = self.reduction_ring()?;
        let xd = self.red.elements()[self.d - 1].clone();
        let mut total = 0;
        for n in 0..=n_cap as i64 {
            let top = self.power(n + 1)?.sum(&k)?;
            let low = self.power(n)?.scale(&xd)?.sum(&k)?;
            let v = pair_length_named("Ī^{n+1}/x_d Ī^n", &top, &low, &self.policy())?
                .require("Ī^{n+1}/x_d Ī^n")?;
            if v == 0 {
                return Ok(total);
            }
            total += v;
        }
        Err(Error::NonStabilized(format!("e1 of the reduction ring beyond n = {n_cap}")))
    }

    /// `Σ_n [λ(I^{n+1}/JI^n) - λ(K ∩ I^{n+1} / K ∩ JI^n)]`.
    pub fn torsion_corrected_sum(&mut self) -> Result<i64> {
        let r = self.reduction_number()?;
        let k = self.reduction_ring()?;
        let mut s = 0i64;
        for n in 0..r as i64 {
            s += self.reduction_gap(n)? as i64;
            let top = k.intersect(&self.power(n + 1)?)?;
            let low = k.intersect(&self.j_times_power(n)?)?;
            s -= pair_length_named("K∩I^{n+1}/K∩JI^n", &top, &low, &self.policy())?
                .require("K∩I^{n+1}/K∩JI^n")? as i64;
        }
        Ok(s)
    }

    /// Bounded check of `J_{d-1} ∩ I^{n+1} = J_{d-1} I^n` against the
    /// length condition `Σ λ(I^{n+1}/JI^n) = e_1(Ī)`.
    pub fn valabrega_valla(&mut self, nmax: usize, an_asserted: bool) -> Result<ValabregaVallaReport> {
        let jd1 = self.j(self.d.saturating_sub(1))?;
        let mut per_n = Vec::with_capacity(nmax + 1);
        for n in 0..=nmax as i64 {
            let lhs = jd1.intersect(&self.power(n + 1)?)?;
            let rhs = jd1.product(&self.power(n)?)?;
            per_n.push(lhs.locally_equals(&rhs)?);
        }
        let condition_b = per_n.iter().all(|&b| b);
        let reduction_sum = self.reduction_sum()?;
        let e1_bar = self.e_one_bar(40)?;
        let condition_a = reduction_sum == e1_bar;
        Ok(ValabregaVallaReport {
            nmax,
            per_n,
            condition_b,
            reduction_sum,
            e1_bar,
            condition_a,
            equivalent: condition_a == condition_b,
            depth_at_least_d_minus_1: an_asserted.then_some(condition_b),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Monomial;

    fn plane() -> (Arc<RingContext>, PolyRing) {
        let ctx = RingContext::polynomial_ring(&["x", "y"], 32003).unwrap();
        let r = ctx.ring();
        (ctx, r)
    }

    fn mono(r: &PolyRing, e: &[u32]) -> Polynomial {
        r.term(1, Monomial::from_exponents(e))
    }

    fn curve(t: u32) -> Ideal {
        let (_, r) = plane();
        let q = r.sub(&mono(&r, &[3, 0]), &mono(&r, &[2, 1]));
        let ctx = RingContext::new(vec!["x".into(), "y".into()], 32003, vec![q]).unwrap();
        Ideal::new(&ctx, vec![mono(&r, &[1, t])]).unwrap()
    }

    #[test]
    fn sampling_is_deterministic() {
        let (ctx, _) = plane();
        let m = Ideal::maximal(&ctx);
        let a = sample_general_elements(&m, 2, 7).unwrap();
        let b = sample_general_elements(&m, 2, 7).unwrap();
        assert_eq!(a.elements(), b.elements());
        assert_eq!(sample_general_elements(&m, 1, 7).unwrap().elements(), &a.elements()[..1]);
        for x in a.elements() {
            assert!(!x.is_zero());
            assert!(m.contains(x).unwrap());
        }
        assert_ne!(a.elements(), sample_general_elements(&m, 2, 8).unwrap().elements());
    }

    #[test]
    fn analytic_spreads() {
        let (ctx, r) = plane();
        assert_eq!(analytic_spread(&Ideal::new(&ctx, vec![r.variable(0)]).unwrap()).unwrap(), 1);
        assert_eq!(analytic_spread(&Ideal::maximal(&ctx)).unwrap(), 2);
        let m2 = Ideal::new(&ctx, vec![mono(&r, &[2, 0]), mono(&r, &[1, 1]), mono(&r, &[0, 2])]).unwrap();
        assert_eq!(analytic_spread(&m2).unwrap(), 2);
        assert_eq!(analytic_spread(&curve(2)).unwrap(), 1);
    }

    #[test]
    fn reduction_numbers() {
        let (ctx, r) = plane();
        let m = Ideal::maximal(&ctx);
        assert_eq!(reduction_number(&m, &m, 5).unwrap(), 0);
        let m2 = Ideal::new(&ctx, vec![mono(&r, &[2, 0]), mono(&r, &[1, 1]), mono(&r, &[0, 2])]).unwrap();
        let j = Ideal::new(&ctx, vec![mono(&r, &[2, 0]), mono(&r, &[0, 2])]).unwrap();
        assert_eq!(reduction_number(&m2, &j, 5).unwrap(), 1);
        assert_eq!(reduction_number(&m2, &m2, 5).unwrap(), 0);
        let x = Ideal::new(&ctx, vec![mono(&r, &[2, 0])]).unwrap();
        assert!(matches!(reduction_number(&m2, &x, 3), Err(Error::NonStabilized(_))));
        let (red, rr) = general_minimal_reduction(&m2, 0, 10).unwrap();
        assert_eq!((red.len(), rr), (2, 1));
        let (red, rr) = general_minimal_reduction(&m, 0, 10).unwrap();
        assert_eq!((red.len(), rr), (2, 0));
        let (red, rr) = general_minimal_reduction(&curve(2), 0, 10).unwrap();
        assert_eq!((red.len(), rr), (1, 0));
    }

    #[test]
    fn residual_heights() {
        let (ctx, r) = plane();
        let m2 = Ideal::new(&ctx, vec![mono(&r, &[2, 0]), mono(&r, &[1, 1]), mono(&r, &[0, 2])]).unwrap();
        let (mut a, _) = Analysis::new(&m2, 0, TruncationPolicy::default()).unwrap();
        assert!(a.residual_height_check().unwrap().iter().all(|c| c.pass));
        for t in 1..=3 {
            let (mut a, _) = Analysis::new(&curve(t), 0, TruncationPolicy::default()).unwrap();
            assert!(!a.residual_height_check().unwrap()[0].pass);
        }
    }

    #[test]
    fn multiplicities_of_the_reduction_ring() {
        let (ctx, r) = plane();
        let p = TruncationPolicy::default();
        let m = Ideal::maximal(&ctx);
        let (mut a, _) = Analysis::new(&m, 0, p).unwrap();
        assert_eq!(a.j_zero().unwrap(), LengthValue::Finite(1));
        assert_eq!(a.e_one_bar(20).unwrap(), 0);
        assert!(a.reduction_ring_warnings().unwrap().is_empty());
        let m2 = Ideal::new(&ctx, vec![mono(&r, &[2, 0]), mono(&r, &[1, 1]), mono(&r, &[0, 2])]).unwrap();
        let (mut a, _) = Analysis::new(&m2, 0, p).unwrap();
        assert_eq!(a.j_zero().unwrap(), LengthValue::Finite(4));
        assert_eq!(a.e_one_bar(20).unwrap(), 1);
        for t in 0..=3 {
            let (mut a, _) = Analysis::new(&curve(t), 0, p).unwrap();
            assert_eq!(a.j_zero().unwrap(), LengthValue::Finite(t as u64 + 1));
        }
    }

    #[test]
    fn valabrega_valla_on_square_of_maximal_ideal() {
        let (ctx, r) = plane();
        let m2 = Ideal::new(&ctx, vec![mono(&r, &[2, 0]), mono(&r, &[1, 1]), mono(&r, &[0, 2])]).unwrap();
        let (mut a, rr) = Analysis::new(&m2, 0, TruncationPolicy::default()).unwrap();
        let vv = a.valabrega_valla(4, true).unwrap();
        assert!(vv.condition_b && vv.condition_a && vv.equivalent);
        assert_eq!((vv.reduction_sum, vv.e1_bar, rr), (1, 1, 1));
        assert_eq!(a.torsion_corrected_sum().unwrap(), 1);
    }
}
