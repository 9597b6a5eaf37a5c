//! The correction terms `ω_n(J, I)` relating `λ(I^{n+1}/JI^n)` to
//! `Δ^d[P_I - H_I](n)`, and the coefficient formulas built on them.

use std::collections::HashMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hilbert::{binomial, HilbertRecord};
use crate::ideal::Ideal;
use crate::length::{gamma_length, loc_quotient_length, pair_length_named};
use crate::reduction::Analysis;
use num_traits::ToPrimitive;

/// Which element the colon in `K̃^i_{n-1}` is taken by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ColonReading {
    /// `I^{n+1} : x_1 / (J_i : I + I^n)` exactly as displayed.
    X1,
    /// `(I^{n+1} + J_i : I) : x_{i+1} / (J_i : I + I^n)`, the colon taken in
    /// `R/(J_i : I)`.
    XNext,
}

impl ColonReading {
    pub fn name(&self) -> &'static str {
        match self {
            ColonReading::X1 => "x1",
            ColonReading::XNext => "xnext",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaBreakdown {
    pub n: usize,
    /// Signed contributions, in display order.
    pub terms: Vec<(String, i64)>,
    pub total: i64,
}

impl Serialize for OmegaBreakdown {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.terms.len() + 2))?;
        map.serialize_entry("n", &self.n)?;
        for (k, v) in &self.terms {
            map.serialize_entry(k, v)?;
        }
        map.serialize_entry("total", &self.total)?;
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MasterCheck {
    pub n: usize,
    /// `λ(I^{n+1}/JI^n) + ω_n`.
    pub lhs: i64,
    /// `Δ^d[P_I - H_I](n)`.
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    KTilde,
    LTilde,
    L,
    N,
}

/// Evaluates `ω_n` with memoized sub-lengths, so that the shifted arguments
/// of the difference operators are computed once.
pub struct Omega<'a> {
    an: &'a mut Analysis,
    reading: ColonReading,
    cache: HashMap<(Kind, usize, i64), i64>,
}

fn signed(k: u32, j: u32) -> i64 {
    let c = binomial(k as i64, j as i64).to_i64().unwrap();
    if j % 2 == 0 {
        c
    } else {
        -c
    }
}

impl<'a> Omega<'a> {
    pub fn new(an: &'a mut Analysis, reading: ColonReading) -> Self {
        Omega {
            an,
            reading,
            cache: HashMap::new(),
        }
    }

    pub fn analysis(&mut self) -> &mut Analysis {
        self.an
    }

    fn length(&self, term: &str, a: &Ideal, b: &Ideal) -> Result<i64> {
        Ok(pair_length_named(term, a, b, &self.an.policy())?.require(term)? as i64)
    }

    fn element(&self, i: usize) -> Ideal {
        Ideal::principal(self.an.context(), self.an.reduction().elements()[i].clone())
            .expect("sampled element lives in the context")
    }

    /// `λ(term^i)` at index `m`.
    fn raw(&mut self, kind: Kind, i: usize, m: i64) -> Result<i64> {
        if let Some(&v) = self.cache.get(&(kind, i, m)) {
            return Ok(v);
        }
        let v = match kind {
            Kind::KTilde => self.k_tilde(i, m)?,
            Kind::LTilde => self.l_tilde(i, m)?,
            Kind::L => self.l(i, m)?,
            Kind::N => self.nn(i, m)?,
        };
        self.cache.insert((kind, i, m), v);
        Ok(v)
    }

    /// `Δ^k λ(term^i)` at `n`.
    fn diff(&mut self, kind: Kind, i: usize, k: u32, n: i64) -> Result<i64> {
        let mut s = 0;
        for j in 0..=k {
            s += signed(k, j) * self.raw(kind, i, n - j as i64)?;
        }
        Ok(s)
    }

    /// `λ(K̃^i_{m-1})`.
    fn k_tilde(&mut self, i: usize, m: i64) -> Result<i64> {
        let res = self.an.residual(i)?;
        let low = res.sum(&self.an.power(m)?)?;
        let top = match self.reading {
            ColonReading::X1 => self.an.power(m + 1)?.colon(&self.element(0))?,
            ColonReading::XNext => self
                .an
                .power(m + 1)?
                .sum(&res)?
                .colon(&self.element(i))?,
        };
        self.length(&format!("Ktilde^{i}_(n-1) at n={m}"), &top, &low)
    }

    /// `λ(L̃^i_m)`.
    fn l_tilde(&mut self, i: usize, m: i64) -> Result<i64> {
        let ji = self.an.j(i)?;
        let ji1 = self.an.j(i + 1)?;
        let pm = self.an.power(m)?;
        let top = ji1.intersect(&pm)?;
        let low = ji
            .intersect(&pm)?
            .sum(&ji1.intersect(&self.an.power(m + 1)?)?)?
            .sum(&self.an.power(m - 1)?.scale(&self.an.reduction().elements()[i])?)?;
        self.length(&format!("Ltilde^{i}_n at n={m}"), &top, &low)
    }

    /// `λ(L^i_m)`.
    fn l(&mut self, i: usize, m: i64) -> Result<i64> {
        let ri = self.an.residual(i)?;
        let ri1 = self.an.residual(i + 1)?;
        let pm = self.an.power(m)?;
        let pm1 = self.an.power(m + 1)?;
        let pmm = self.an.power(m - 1)?;
        let ri_m = ri.intersect(&pm)?;
        let top = ri_m
            .sum(&pm1)?
            .saturate_maximal()?
            .intersect(&ri1.intersect(&pm)?)?;
        let inner = ri
            .intersect(&pmm)?
            .sum(&pm)?
            .saturate_maximal()?
            .intersect(&pmm)?;
        let low = ri_m
            .sum(&ri1.intersect(&pm1)?)?
            .sum(&inner.scale(&self.an.reduction().elements()[i])?)?;
        self.length(&format!("L^{i}_n at n={m}"), &top, &low)
    }

    /// `λ(N^i_m)`.
    fn nn(&mut self, i: usize, m: i64) -> Result<i64> {
        let ri = self.an.residual(i)?;
        let ri1 = self.an.residual(i + 1)?;
        let pm = self.an.power(m)?;
        let pm1 = self.an.power(m + 1)?;
        let ri1_m = ri1.intersect(&pm)?;
        let top = ri1_m.sum(&pm1)?.saturate_maximal()?.intersect(&pm)?;
        let low = ri1_m.sum(
            &ri.intersect(&pm)?
                .sum(&pm1)?
                .saturate_maximal()?
                .intersect(&pm)?,
        )?;
        self.length(&format!("N^{i}_n at n={m}"), &top, &low)
    }

    /// `β = λ(H^0_m(R/I)) - λ(H^0_m(R/(0 : I + I)))`.
    pub fn beta(&mut self) -> Result<i64> {
        let i = self.an.ideal().clone();
        let p = self.an.policy();
        let a = gamma_length(&i, &p)?.require("H0(R/I)")? as i64;
        let b = gamma_length(&self.an.residual(0)?.sum(&i)?, &p)?.require("H0(R/(0:I+I))")? as i64;
        Ok(a - b)
    }

    pub fn omega(&mut self, n: usize) -> Result<OmegaBreakdown> {
        let d = self.an.d();
        if d == 0 {
            return Err(Error::Precondition("ω_n needs dim R ≥ 1".into()));
        }
        let i = self.an.ideal().clone();
        let p = self.an.policy();
        let mut terms: Vec<(String, i64)> = Vec::new();
        if n == 0 {
            let l = self.an.residual(d - 1)?.sum(&i)?;
            let a = loc_quotient_length(&l, &p)?.require("R/(J_(d-1):I+I)")? as i64;
            let g = gamma_length(&i, &p)?.require("H0(R/I)")? as i64;
            terms.push(("R/(J_(d-1):I+I)".into(), a));
            terms.push(("H0(R/I)".into(), -g));
        } else {
            let n = n as i64;
            for k in 0..d.saturating_sub(1) {
                let v = self.diff(Kind::KTilde, k, (d - 1 - k) as u32, n)?;
                terms.push((format!("Ktilde^{k}"), v));
            }
            for k in 0..d.saturating_sub(1) {
                let order = (d - 2 - k) as u32;
                let lt = self.diff(Kind::LTilde, k, order, n)?;
                let l = self.diff(Kind::L, k, order, n)?;
                let nn = self.diff(Kind::N, k, order, n)?;
                terms.push((format!("Ltilde^{k}"), lt));
                terms.push((format!("L^{k}"), -l));
                terms.push((format!("N^{k}"), nn));
            }
            for k in 1..d {
                let rk = self.an.residual(k)?;
                let mut top = rk.intersect(&self.an.power(n + 1)?)?;
                let mut low = rk.intersect(&self.an.j_times_power(n)?)?;
                if k >= 2 {
                    let prev = self.an.residual(k - 1)?;
                    top = top.sum(&prev)?;
                    low = low.sum(&prev)?;
                }
                let v = self.length(&format!("colon^{k}"), &top, &low)?;
                terms.push((format!("colon^{k}"), -v));
            }
            let c = binomial(d as i64 - 1, n).to_i64().unwrap();
            if c != 0 {
                let sign = if n % 2 == 0 { 1 } else { -1 };
                let beta = self.beta()?;
                terms.push(("beta".into(), -sign * c * beta));
            }
        }
        let total = terms.iter().map(|(_, v)| v).sum();
        Ok(OmegaBreakdown { n, terms, total })
    }

    /// `λ(I^{n+1}/JI^n) + ω_n`.
    pub fn master_lhs(&mut self, n: usize) -> Result<i64> {
        let gap = self.an.reduction_gap(n as i64)? as i64;
        Ok(gap + self.omega(n)?.total)
    }

    /// Compares both sides of the master identity for `0 ≤ n ≤ nmax`.
    pub fn master_identity(&mut self, record: &HilbertRecord, nmax: usize) -> Result<Vec<MasterCheck>> {
        (0..=nmax)
            .map(|n| {
                let lhs = self.master_lhs(n)?;
                let rhs = record.delta_d_gap(n as i64);
                Ok(MasterCheck {
                    n,
                    lhs,
                    rhs,
                    holds: lhs == rhs,
                })
            })
            .collect()
    }

    /// `Σ_{n≥i-1} C(n, i-1)[λ(I^{n+1}/JI^n) + ω_n]`, stopped after
    /// `max(d+1, 3)` consecutive zero summands past the reduction number.
    pub fn j_via_sums(&mut self, i: usize, n_cap: usize) -> Result<i64> {
        let d = self.an.d();
        if i == 0 || i > d {
            return Err(Error::Precondition(format!("index {i} outside 1..={d}")));
        }
        let r = self.an.reduction_number()?;
        let need = (d + 1).max(3);
        let mut zeros = 0;
        let mut total = 0i64;
        for n in (i - 1)..=n_cap {
            let c = binomial(n as i64, i as i64 - 1).to_i64().unwrap();
            let v = self.master_lhs(n)?;
            total += c * v;
            if v == 0 && n >= r {
                zeros += 1;
                if zeros >= need {
                    return Ok(total);
                }
            } else {
                zeros = 0;
            }
        }
        Err(Error::NonStabilized(format!(
            "summands of j_{i} still nonzero at n = {n_cap}"
        )))
    }
}

/// `Σ λ(I^{n+1}/JI^n) + λ(R/(J_{d-1}:I + I)) - λ(H^0_m(R/(H + I)))` with
/// `H = 0` for `d = 1` and `H = 0 : I` otherwise.
pub fn j_one_depth_formula(an: &mut Analysis) -> Result<i64> {
    let d = an.d();
    if d == 0 {
        return Err(Error::Precondition("needs dim R ≥ 1".into()));
    }
    let i = an.ideal().clone();
    let p = an.policy();
    let sum = an.reduction_sum()? as i64;
    let a = loc_quotient_length(&an.residual(d - 1)?.sum(&i)?, &p)?.require("R/(J_(d-1):I+I)")? as i64;
    let h = if d == 1 { i.clone() } else { an.residual(0)?.sum(&i)? };
    let g = gamma_length(&h, &p)?.require("H0(R/(H+I))")? as i64;
    Ok(sum + a - g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::RingContext;
    use crate::hilbert::FitPolicy;
    use crate::length::TruncationPolicy;
    use crate::monomial::Monomial;
    use crate::poly::{PolyRing, Polynomial};
    use std::sync::Arc;

    fn plane() -> (Arc<RingContext>, PolyRing) {
        let ctx = RingContext::polynomial_ring(&["x", "y"], 32003).unwrap();
        let r = ctx.ring();
        (ctx, r)
    }

    fn mono(r: &PolyRing, e: &[u32]) -> Polynomial {
        r.term(1, Monomial::from_exponents(e))
    }

    #[test]
    fn line_has_vanishing_corrections() {
        let ctx = RingContext::polynomial_ring(&["x"], 32003).unwrap();
        let r = ctx.ring();
        let i = Ideal::new(&ctx, vec![r.pow(&r.variable(0), 3)]).unwrap();
        let (mut an, _) = Analysis::new(&i, 0, TruncationPolicy::default()).unwrap();
        let mut om = Omega::new(&mut an, ColonReading::X1);
        for n in 0..4 {
            assert_eq!(om.omega(n).unwrap().total, 0);
        }
    }

    #[test]
    fn master_identity_for_square_of_maximal_ideal() {
        let (ctx, r) = plane();
        let m2 = Ideal::new(&ctx, vec![mono(&r, &[2, 0]), mono(&r, &[1, 1]), mono(&r, &[0, 2])]).unwrap();
        let (mut an, rr) = Analysis::new(&m2, 0, TruncationPolicy::default()).unwrap();
        let rec = an.fit(&FitPolicy::default()).unwrap();
        assert_eq!(rec.j, vec![4, 1, 0]);
        for reading in [ColonReading::X1, ColonReading::XNext] {
            let mut om = Omega::new(&mut an, reading);
            let checks = om.master_identity(&rec, rr + 4).unwrap();
            assert!(checks.iter().all(|c| c.holds), "{reading:?}: {checks:?}");
            assert_eq!(om.j_via_sums(1, 40).unwrap(), 1);
            assert_eq!(om.j_via_sums(2, 40).unwrap(), 0);
        }
        assert_eq!(j_one_depth_formula(&mut an).unwrap(), 1);
    }
}
