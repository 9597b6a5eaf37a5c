//! The generalized Northcott inequality `j_1 ≥ λ(I/J) + λ(R/(J_{d-1}:I + (J_{d-2}:I + I):m^∞))`,
//! its equality case, and the positivity consequences.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::HilbertRecord;
use crate::ideal::Ideal;
use crate::length::{
    gamma_length, is_locally_finite, loc_quotient_length, pair_length_named, LengthValue,
};
use crate::omega::{ColonReading, Omega};
use crate::reduction::{Analysis, ResidualCheck};

/// Hypotheses the user vouches for; they are echoed, never verified.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct HypothesisFlags {
    pub gd_asserted: bool,
    pub an_asserted: bool,
    pub s2_asserted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    Violated,
    NotApplicable,
}

/// Computed stand-ins for the hypotheses of the inequality and its
/// equality case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub d: usize,
    pub analytic_spread: usize,
    pub residual_checks: Vec<ResidualCheck>,
    pub surrogate_pass: bool,
    /// `depth R/I ≥ min(1, dim R/I)`.
    pub depth_condition: bool,
    pub flags: HypothesisFlags,
}

impl HypothesisReport {
    pub fn compute(an: &mut Analysis, flags: HypothesisFlags) -> Result<Self> {
        let residual_checks = an.residual_height_check()?;
        let surrogate_pass = residual_checks.iter().all(|c| c.pass);
        let i = an.ideal().clone();
        let unit = Ideal::unit(i.context());
        let depth_condition = is_locally_finite(&unit, &i)?
            || gamma_length(&i, &an.policy())?.finite() == Some(0);
        Ok(HypothesisReport {
            d: an.d(),
            analytic_spread: an.analytic_spread(),
            residual_checks,
            surrogate_pass,
            depth_condition,
            flags,
        })
    }

    /// `ℓ(I) = d` and the residual surrogate holds.
    pub fn inequality_applies(&self) -> bool {
        self.analytic_spread == self.d && self.surrogate_pass
    }

    pub fn equality_case_applies(&self) -> bool {
        self.inequality_applies() && self.depth_condition
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsequenceChecks {
    pub j1_nonnegative: bool,
    /// `j_1 = second term ⇒ I = J`.
    pub equal_second_term_implies_reduction: Option<bool>,
    /// `j_1 = λ(I/J) ⇒ I` primary to the maximal ideal.
    pub equal_lambda_implies_primary: Option<bool>,
    /// `μ(I) = ht(I)`.
    pub complete_intersection: bool,
    /// `j_1 = 0 ⇔ complete intersection`.
    pub zero_iff_complete_intersection: bool,
}

/// `e_0 - λ(R/I)` against `λ(I/J)` for primary ideals of a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalCheck {
    pub e0_minus_colength: i64,
    pub lambda_ij: u64,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NorthcottReport {
    pub j1: i64,
    pub j1_route: &'static str,
    pub j1_sum_route: Option<i64>,
    pub lambda_ij: u64,
    pub second_term: u64,
    pub bound: u64,
    pub inequality_holds: bool,
    pub equality: bool,
    pub reduction_number: usize,
    pub theorem_verdict: Verdict,
    pub hypotheses: HypothesisReport,
    pub consequences: ConsequenceChecks,
    pub classical: Option<ClassicalCheck>,
    pub notes: Vec<String>,
}

/// `(λ(I/J), λ(R/(J_{d-1}:I + (J_{d-2}:I + I):m^∞)))`.
pub fn northcott_bound(an: &mut Analysis) -> Result<(u64, u64)> {
    let d = an.d();
    if d < 2 {
        return Err(Error::Precondition("the bound needs dim R ≥ 2".into()));
    }
    let i = an.ideal().clone();
    let p = an.policy();
    let lambda_ij = pair_length_named("I/J", &i, &an.full_j()?, &p)?.require("I/J")?;
    let sat = an.residual(d - 2)?.sum(&i)?.saturate_maximal()?;
    let l = an.residual(d - 1)?.sum(&sat)?;
    let second = loc_quotient_length(&l, &p)?.require("R/(J_(d-1):I+(J_(d-2):I+I):m^inf)")?;
    Ok((lambda_ij, second))
}

/// `j_1` through the ω sums, trying the other colon reading when a term
/// of the requested one is not a subquotient.
fn sum_route(
    an: &mut Analysis,
    reading: ColonReading,
    notes: &mut Vec<String>,
) -> Result<Option<i64>> {
    let other = match reading {
        ColonReading::X1 => ColonReading::XNext,
        ColonReading::XNext => ColonReading::X1,
    };
    for r in [reading, other] {
        match Omega::new(an, r).j_via_sums(1, 40) {
            Ok(v) => {
                if r != reading {
                    notes.push(format!("sum route used the {} colon reading", r.name()));
                }
                return Ok(Some(v));
            }
            Err(e @ Error::Containment { .. }) => {
                notes.push(format!("{} colon reading: {e}", r.name()));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Assembles the inequality, the equality verdict and the consequences checks.
/// The fitted `j_1` is authoritative; when the hypotheses hold the sum
/// route must agree with it.
pub fn northcott_report(
    an: &mut Analysis,
    record: &HilbertRecord,
    reduction_number: usize,
    flags: HypothesisFlags,
    reading: ColonReading,
) -> Result<NorthcottReport> {
    let d = an.d();
    if d < 2 {
        return Err(Error::Precondition("the inequality needs dim R ≥ 2".into()));
    }
    let hyp = HypothesisReport::compute(an, flags)?;
    let j1 = record.j[1];
    let mut notes = Vec::new();
    let j1_sum_route = if hyp.inequality_applies() {
        let v = sum_route(an, reading, &mut notes)?;
        if let Some(v) = v {
            if v != j1 {
                return Err(Error::CrossCheck(format!(
                    "j1 routes disagree: fitted {j1}, sum {v}"
                )));
            }
        }
        v
    } else {
        notes.push("hypothesis surrogates fail; sum route not cross-checked".into());
        None
    };
    let (lambda_ij, second_term) = northcott_bound(an)?;
    let bound = lambda_ij + second_term;
    let inequality_holds = j1 >= bound as i64;
    let equality = j1 == bound as i64;
    let theorem_verdict = if !hyp.equality_case_applies() {
        Verdict::NotApplicable
    } else if equality == (reduction_number <= 1) {
        Verdict::Consistent
    } else {
        Verdict::Violated
    };

    let i = an.ideal().clone();
    let p = an.policy();
    let m = Ideal::maximal(i.context());
    let mu = pair_length_named("I/mI", &i, &m.product(&i)?, &p)?.require("I/mI")?;
    let complete_intersection = mu as i64 == i.codimension()?;
    let primary = is_locally_finite(&Ideal::unit(i.context()), &i)?;
    let consequences = ConsequenceChecks {
        j1_nonnegative: j1 >= 0,
        equal_second_term_implies_reduction: (j1 == second_term as i64)
            .then(|| lambda_ij == 0),
        equal_lambda_implies_primary: (j1 == lambda_ij as i64).then_some(primary),
        complete_intersection,
        zero_iff_complete_intersection: (j1 == 0) == complete_intersection,
    };
    let classical = if primary && i.context().relations().is_empty() {
        let colength = loc_quotient_length(&i, &p)?.require("R/I")? as i64;
        let e0_minus_colength = record.j[0] - colength;
        Some(ClassicalCheck {
            e0_minus_colength,
            lambda_ij,
            agrees: e0_minus_colength == lambda_ij as i64,
        })
    } else {
        None
    };
    Ok(NorthcottReport {
        j1,
        j1_route: "fit",
        j1_sum_route,
        lambda_ij,
        second_term,
        bound,
        inequality_holds,
        equality,
        reduction_number,
        theorem_verdict,
        hypotheses: hyp,
        consequences,
        classical,
        notes,
    })
}

/// For `d = 1`: `j_1 = Σ λ(I^{n+1}/JI^n) + λ(R/(0:I + I)) - λ(H^0_m(R/I))`.
/// Terms that are infinite or unstable stay `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionOneReport {
    pub j1: i64,
    pub reduction_sum: Option<u64>,
    pub residual_colength: LengthValue,
    pub torsion: LengthValue,
    pub formula_value: Option<i64>,
    pub agrees: Option<bool>,
    pub hypotheses: HypothesisReport,
    pub notes: Vec<String>,
}

fn soft<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::InfiniteLength(_) | Error::NonStabilized(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn dimension_one_report(
    an: &mut Analysis,
    record: &HilbertRecord,
    flags: HypothesisFlags,
) -> Result<DimensionOneReport> {
    if an.d() != 1 {
        return Err(Error::Precondition("dimension one only".into()));
    }
    let hypotheses = HypothesisReport::compute(an, flags)?;
    let i = an.ideal().clone();
    let p = an.policy();
    let reduction_sum = soft(an.reduction_sum())?;
    let residual_colength = loc_quotient_length(&an.residual(0)?.sum(&i)?, &p)?;
    let torsion = gamma_length(&i, &p)?;
    let formula_value = match (reduction_sum, residual_colength.finite(), torsion.finite()) {
        (Some(s), Some(c), Some(t)) => Some(s as i64 + c as i64 - t as i64),
        _ => None,
    };
    let j1 = record.j[1];
    let mut notes = vec![
        "dimension one: the inequality needs J_(d-2); the j1 decomposition is reported instead"
            .to_string(),
    ];
    if formula_value.is_none() {
        notes.push("a decomposition term has infinite or unstable length".into());
    }
    Ok(DimensionOneReport {
        j1,
        reduction_sum,
        residual_colength,
        torsion,
        formula_value,
        agrees: formula_value.map(|v| v == j1),
        hypotheses,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::RingContext;
    use crate::hilbert::FitPolicy;
    use crate::length::TruncationPolicy;
    use crate::monomial::Monomial;

    fn report(exps: &[&[u32]]) -> NorthcottReport {
        let vars = ["x", "y", "z"];
        let ctx = RingContext::polynomial_ring(&vars[..exps[0].len()], 32003).unwrap();
        let r = ctx.ring();
        let i = Ideal::new(
            &ctx,
            exps.iter()
                .map(|e| r.term(1, Monomial::from_exponents(e)))
                .collect(),
        )
        .unwrap();
        let (mut an, rr) = Analysis::new(&i, 0, TruncationPolicy::default()).unwrap();
        let rec = an.fit(&FitPolicy::default()).unwrap();
        northcott_report(&mut an, &rec, rr, HypothesisFlags::default(), ColonReading::X1).unwrap()
    }

    #[test]
    fn square_of_maximal_ideal_is_an_equality_case() {
        let rep = report(&[&[2, 0], &[1, 1], &[0, 2]]);
        assert_eq!((rep.j1, rep.bound, rep.reduction_number), (1, 1, 1));
        assert_eq!((rep.lambda_ij, rep.second_term), (1, 0));
        assert!(rep.equality);
        assert_eq!(rep.theorem_verdict, Verdict::Consistent);
        assert!(rep.classical.unwrap().agrees);
    }

    #[test]
    fn parameter_ideal_is_a_complete_intersection() {
        let rep = report(&[&[1, 0], &[0, 1]]);
        assert_eq!((rep.j1, rep.bound, rep.reduction_number), (0, 0, 0));
        assert!(rep.consequences.complete_intersection);
        assert!(rep.consequences.zero_iff_complete_intersection);
        assert_eq!(rep.theorem_verdict, Verdict::Consistent);
    }

    #[test]
    fn embedded_component_is_not_a_complete_intersection() {
        let rep = report(&[&[2, 0], &[1, 1]]);
        assert_eq!((rep.j1, rep.bound, rep.reduction_number), (1, 1, 0));
        assert!(!rep.consequences.complete_intersection);
        assert!(rep.consequences.zero_iff_complete_intersection);
        assert!(!rep.hypotheses.depth_condition);
        assert_eq!(rep.theorem_verdict, Verdict::NotApplicable);
    }

    #[test]
    fn three_variables_fall_back_to_the_next_colon_reading() {
        let rep = report(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(rep.j1_sum_route, Some(0));
        assert!(rep.notes.iter().any(|n| n.contains("xnext")));
        assert_eq!(rep.theorem_verdict, Verdict::Consistent);
    }

    #[test]
    fn curve_example_reports_decomposition() {
        let ctx = RingContext::polynomial_ring(&["x", "y"], 32003).unwrap();
        let r = ctx.ring();
        let q = r.sub(
            &r.term(1, Monomial::from_exponents(&[3, 0])),
            &r.term(1, Monomial::from_exponents(&[2, 1])),
        );
        let ctx = RingContext::new(vec!["x".into(), "y".into()], 32003, vec![q]).unwrap();
        let i = Ideal::new(&ctx, vec![r.term(1, Monomial::from_exponents(&[1, 3]))]).unwrap();
        let (mut an, _) = Analysis::new(&i, 0, TruncationPolicy::default()).unwrap();
        let rec = an.fit(&FitPolicy::default()).unwrap();
        let rep = dimension_one_report(&mut an, &rec, HypothesisFlags::default()).unwrap();
        assert_eq!(rep.j1, -1);
        assert!(rep.residual_colength.is_infinite());
        assert_eq!(rep.agrees, None);
    }
}
