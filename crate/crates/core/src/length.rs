//! m-local lengths `λ(A/B)` of subquotients of `R`, read off the Artinian
//! truncations `R/(L + m^M)` once their difference stops moving.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::buchberger;
use crate::ideal::Ideal;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum LengthValue {
    Finite(u64),
    Infinite(Infinite),
    NonStabilized(String),
}

/// Serializes as the string `"infinite"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Infinite {
    Infinite,
}

impl LengthValue {
    pub const INFINITE: LengthValue = LengthValue::Infinite(Infinite::Infinite);

    pub fn finite(&self) -> Option<u64> {
        match self {
            LengthValue::Finite(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LengthValue::Infinite(_))
    }

    /// The finite value, or an error naming `term`.
    pub fn require(&self, term: &str) -> Result<u64> {
        match self {
            LengthValue::Finite(n) => Ok(*n),
            LengthValue::Infinite(_) => Err(Error::InfiniteLength(term.to_string())),
            LengthValue::NonStabilized(why) => Err(Error::NonStabilized(format!("{term}: {why}"))),
        }
    }
}

impl fmt::Display for LengthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthValue::Finite(n) => write!(f, "{n}"),
            LengthValue::Infinite(_) => write!(f, "infinite"),
            LengthValue::NonStabilized(why) => write!(f, "non-stabilized ({why})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationPolicy {
    /// `None` picks `2·(d + max generator degree)` per call.
    pub start_m: Option<u32>,
    pub step_m: u32,
    pub window: u32,
    pub cap_m: u32,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            start_m: None,
            step_m: 2,
            window: 2,
            cap_m: 200,
        }
    }
}

/// Number of unstabilized steps after which the exact finiteness test runs.
const FINITENESS_PROBE_AFTER: usize = 2;

/// One length computation with the sequence of `(M, D(M))` it looked at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthRun {
    pub value: LengthValue,
    pub trace: Vec<(u32, i64)>,
}

impl LengthRun {
    /// Whether `D(M)` never decreased along the trace.
    pub fn monotone(&self) -> bool {
        self.trace.windows(2).all(|w| w[0].1 <= w[1].1)
    }
}

/// `dim_k R/(L + m^M)`.
pub fn truncated_dim(l: &Ideal, m: u32) -> Result<u64> {
    if m == 0 {
        return Ok(0);
    }
    let ctx = l.context();
    let mut gens = l.gens().to_vec();
    gens.extend(ctx.relations().iter().cloned());
    let gb = buchberger(&ctx.ring(), &gens, ctx.limits(), Some(m))?;
    Ok(gb
        .standard_monomial_count()
        .expect("truncated quotient is Artinian"))
}

/// `λ(A_m/B_m)`, with the containment `B ⊆ A` verified first.
pub fn pair_length(a: &Ideal, b: &Ideal, policy: &TruncationPolicy) -> Result<LengthValue> {
    Ok(pair_length_traced("λ(A/B)", a, b, policy)?.value)
}

/// Like [`pair_length`], naming the term in containment errors.
pub fn pair_length_named(
    term: &str,
    a: &Ideal,
    b: &Ideal,
    policy: &TruncationPolicy,
) -> Result<LengthValue> {
    Ok(pair_length_traced(term, a, b, policy)?.value)
}

pub fn pair_length_traced(
    term: &str,
    a: &Ideal,
    b: &Ideal,
    policy: &TruncationPolicy,
) -> Result<LengthRun> {
    if !b.is_subset_of(a)? {
        return Err(Error::Containment {
            term: term.to_string(),
        });
    }
    if a.is_subset_of(b)? || !b.is_local_proper() {
        return Ok(LengthRun {
            value: LengthValue::Finite(0),
            trace: vec![],
        });
    }
    let d = a.context().dim()?.max(0) as u32;
    let start = policy
        .start_m
        .unwrap_or(2 * (d + a.max_degree().max(b.max_degree())))
        .max(1);
    let step = policy.step_m.max(1);
    let window = policy.window.max(2) as usize;
    let mut trace: Vec<(u32, i64)> = Vec::new();
    let mut probed = false;
    let mut m = start;
    while m <= policy.cap_m.max(start) {
        let dm = truncated_dim(b, m)? as i64 - truncated_dim(a, m)? as i64;
        trace.push((m, dm));
        let n = trace.len();
        if n >= window && trace[n - window..].iter().all(|&(_, v)| v == dm) {
            return Ok(LengthRun {
                value: LengthValue::Finite(dm.max(0) as u64),
                trace,
            });
        }
        if !probed && n >= FINITENESS_PROBE_AFTER {
            probed = true;
            if !is_locally_finite(a, b)? {
                return Ok(LengthRun {
                    value: LengthValue::INFINITE,
                    trace,
                });
            }
        }
        m += step;
    }
    let shown: Vec<String> = trace.iter().map(|(m, v)| format!("D({m})={v}")).collect();
    Ok(LengthRun {
        value: LengthValue::NonStabilized(shown.join(", ")),
        trace,
    })
}

/// `A_m/B_m` has finite length iff `(B : m^∞) : A ⊄ m`.
pub fn is_locally_finite(a: &Ideal, b: &Ideal) -> Result<bool> {
    let sat = b.saturate_maximal()?;
    Ok(!sat.colon(a)?.is_local_proper())
}

/// `λ(R_m/L_m)`.
pub fn loc_quotient_length(l: &Ideal, policy: &TruncationPolicy) -> Result<LengthValue> {
    pair_length_named("λ(R/L)", &Ideal::unit(l.context()), l, policy)
}

/// `λ(H^0_m(R/L))`.
pub fn gamma_length(l: &Ideal, policy: &TruncationPolicy) -> Result<LengthValue> {
    let sat = l.saturate_maximal()?;
    pair_length_named("λ(H0(R/L))", &sat, l, policy)
}
