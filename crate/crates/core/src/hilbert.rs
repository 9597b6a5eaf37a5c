//! The generalized Hilbert–Samuel function `H_I(n) = Σ_{i≤n} λ(Γ_m(I^i/I^{i+1}))`,
//! its eventual polynomial, and the coefficients `j_0..j_d`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{Ideal, IdealPowers};
use crate::length::{pair_length_named, TruncationPolicy};

/// `C(n, k)` for an arbitrary integer `n`, as a polynomial in `n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

fn to_i64(v: &BigInt) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::Precondition("coefficient exceeds 64 bits".into()))
}

/// `k`-th backward difference of `f` at `n`.
pub fn delta<F: Fn(i64) -> i64>(f: F, k: u32, n: i64) -> i64 {
    (0..=k as i64)
        .map(|j| {
            let c = binomial(k as i64, j).to_i64().unwrap();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * c * f(n - j)
        })
        .sum()
}

/// Coefficients `j_0..j_d` with `P(n) = Σ (-1)^i j_i C(n+d-i, d-i)`, from
/// values `P(start), P(start+1), ...`. At least `d + 1` values are needed;
/// any extra ones must lie on the same polynomial.
pub fn binomial_basis_convert(values: &[i64], start: i64, d: usize) -> Result<Vec<i64>> {
    if values.len() < d + 1 {
        return Err(Error::Precondition(format!(
            "{} values cannot determine a degree {d} polynomial",
            values.len()
        )));
    }
    let vals: Vec<BigInt> = values.iter().map(|&v| BigInt::from(v)).collect();
    let k = d as i64 + 1;
    let coeff: Vec<BigInt> = (0..=k)
        .map(|j| {
            let c = binomial(k, j);
            if j % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    // the (d+1)-th difference must vanish wherever it is defined
    for end in (d + 1)..vals.len() {
        let s: BigInt = (0..=k as usize).map(|j| &coeff[j] * &vals[end - j]).sum();
        if !s.is_zero() {
            return Err(Error::NotPolynomial { degree: d });
        }
    }
    // Newton: P(start + x) = Σ_k C(x, k) Δ^k P(start) with forward differences
    let mut diffs: Vec<BigInt> = Vec::with_capacity(d + 1);
    let mut row: Vec<BigInt> = vals[..=d].to_vec();
    for _ in 0..=d {
        diffs.push(row[0].clone());
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let at = |n: i64| -> BigInt {
        diffs
            .iter()
            .enumerate()
            .map(|(k, f)| binomial(n - start, k as i64) * f)
            .sum()
    };
    let p: Vec<BigInt> = (0..=d as i64 + 1).map(|s| at(-1 - s)).collect();
    // ∇^{d-i} P(-1), with P(-1-s) = p[s]
    let mut out = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let kk = (d - i) as i64;
        let mut s = BigInt::zero();
        for j in 0..=kk {
            let c = binomial(kk, j);
            let term = c * &p[j as usize];
            if j % 2 == 0 {
                s += term;
            } else {
                s -= term;
            }
        }
        let s = if i % 2 == 0 { s } else { -s };
        out.push(to_i64(&s)?);
    }
    Ok(out)
}

/// `P(n) = Σ (-1)^i j_i C(n+d-i, d-i)`.
pub fn eval_binomial_form(j: &[i64], n: i64) -> i64 {
    let d = j.len() as i64 - 1;
    let mut s = BigInt::zero();
    for (i, &c) in j.iter().enumerate() {
        let i = i as i64;
        let term = BigInt::from(c) * binomial(n + d - i, d - i);
        if i % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    s.to_i64().expect("polynomial value fits in 64 bits")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertRecord {
    pub d: usize,
    /// `H_I(0), ..., H_I(N)`.
    pub values: Vec<u64>,
    /// First `n` from which the computed values agree with the polynomial.
    pub postulation: usize,
    /// `j_0, ..., j_d`.
    pub j: Vec<i64>,
}

impl HilbertRecord {
    pub fn p(&self, n: i64) -> i64 {
        eval_binomial_form(&self.j, n)
    }

    /// `H_I(n)`, zero for negative `n` and the polynomial past the computed
    /// range.
    pub fn h(&self, n: i64) -> i64 {
        if n < 0 {
            0
        } else if (n as usize) < self.values.len() {
            self.values[n as usize] as i64
        } else {
            self.p(n)
        }
    }

    /// `Δ^d[P_I - H_I](n)`.
    pub fn delta_d_gap(&self, n: i64) -> i64 {
        delta(|k| self.p(k) - self.h(k), self.d as u32, n)
    }

    /// `Σ_{n≥i-1} C(n, i-1) Δ^d[P_I - H_I](n)`; the summand vanishes once
    /// `n - d` passes the postulation point.
    pub fn gap_sum(&self, i: usize) -> i64 {
        let top = self.postulation.max(self.values.len()) + self.d + 1;
        (i as i64 - 1..=top as i64)
            .map(|n| binomial(n, i as i64 - 1).to_i64().unwrap() * self.delta_d_gap(n))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitPolicy {
    /// Points over which the `d`-th difference must be constant; `None`
    /// means `d + 2`.
    pub window: Option<usize>,
    pub confirm: usize,
    pub n_cap: usize,
}

impl Default for FitPolicy {
    fn default() -> Self {
        FitPolicy {
            window: None,
            confirm: 2,
            n_cap: 40,
        }
    }
}

/// Graded torsion lengths of the `I`-adic filtration, with memoized powers.
pub struct Filtration {
    powers: IdealPowers,
    policy: TruncationPolicy,
    torsion: Vec<u64>,
}

impl Filtration {
    pub fn new(i: &Ideal, policy: TruncationPolicy) -> Self {
        Filtration {
            powers: IdealPowers::new(i),
            policy,
            torsion: Vec::new(),
        }
    }

    pub fn ideal(&self) -> &Ideal {
        self.powers.base()
    }

    pub fn powers(&mut self) -> &mut IdealPowers {
        &mut self.powers
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    /// `λ(Γ_m(I^i/I^{i+1})) = λ((I^{i+1} : m^∞) ∩ I^i / I^{i+1})`.
    pub fn graded_torsion(&mut self, i: usize) -> Result<u64> {
        while self.torsion.len() <= i {
            let k = self.torsion.len() as i64;
            let lo = self.powers.get(k)?;
            let hi = self.powers.get(k + 1)?;
            let top = hi.saturate_maximal()?.intersect(&lo)?;
            let v = pair_length_named("Γ_m(I^i/I^{i+1})", &top, &hi, &self.policy)?
                .require("Γ_m(I^i/I^{i+1})")?;
            self.torsion.push(v);
        }
        Ok(self.torsion[i])
    }

    pub fn hilbert(&mut self, n: usize) -> Result<u64> {
        let mut s = 0;
        for i in 0..=n {
            s += self.graded_torsion(i)?;
        }
        Ok(s)
    }

    /// Extends `H` until its `d`-th difference is constant over the window
    /// plus the confirmation points, then reads off `j_0..j_d`.
    pub fn fit(&mut self, fit: &FitPolicy) -> Result<HilbertRecord> {
        let d = self.ideal().context().dim()?.max(0) as usize;
        let window = fit.window.unwrap_or(d + 2).max(d + 2);
        let mut values: Vec<u64> = Vec::new();
        let mut confirmed_from: Option<usize> = None;
        for n in 0..=fit.n_cap {
            values.push(self.hilbert(n)?);
            let dd: Vec<i64> = (0..values.len())
                .filter(|&k| k >= d)
                .map(|k| delta(|m| values[m as usize] as i64, d as u32, k as i64))
                .collect();
            let need = window + fit.confirm;
            if dd.len() >= need {
                let tail = &dd[dd.len() - need..];
                if tail.iter().all(|&v| v == tail[0]) {
                    confirmed_from = Some(values.len() - need);
                    break;
                }
            }
        }
        let Some(from) = confirmed_from else {
            return Err(Error::NonStabilized(format!(
                "Hilbert function not polynomial up to n = {}: {:?}",
                fit.n_cap, values
            )));
        };
        let tail: Vec<i64> = values[from..].iter().map(|&v| v as i64).collect();
        let j = binomial_basis_convert(&tail, from as i64, d)?;
        let mut postulation = values.len();
        while postulation > 0 && eval_binomial_form(&j, postulation as i64 - 1) == values[postulation - 1] as i64 {
            postulation -= 1;
        }
        Ok(HilbertRecord {
            d,
            values,
            postulation,
            j,
        })
    }
}
