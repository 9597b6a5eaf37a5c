mod common;

use northcott_core::hilbert::FitPolicy;
use northcott_core::length::{LengthValue, TruncationPolicy};
use northcott_core::northcott::{dimension_one_report, northcott_report, HypothesisFlags, Verdict};
use northcott_core::omega::{j_one_depth_formula, ColonReading, Omega};
use northcott_core::reduction::Analysis;

use common::*;

fn analysis(i: &northcott_core::ideal::Ideal) -> (Analysis, usize) {
    Analysis::new(i, 0, TruncationPolicy::default()).unwrap()
}

#[test]
fn cusp_family_hilbert_function() {
    let ctx = cusp_ring();
    let (mut an, r) = analysis(&monomials(&ctx, &[&[1, 1]]));
    let rec = an.fit(&FitPolicy::default()).unwrap();
    assert_eq!(rec.j, vec![2, 1]);
    assert_eq!(rec.h(2), 5);
    assert_eq!(rec.p(2), 5);
    assert_eq!(r, an.reduction_number().unwrap());
    assert_eq!(an.j_zero().unwrap(), LengthValue::Finite(2));
}

#[test]
fn cusp_family_dimension_one_report() {
    let ctx = cusp_ring();
    for t in 0..=4u32 {
        let (mut an, _) = analysis(&monomials(&ctx, &[&[1, t]]));
        let rec = an.fit(&FitPolicy::default()).unwrap();
        let rep = dimension_one_report(&mut an, &rec, HypothesisFlags::default()).unwrap();
        assert_eq!(rep.j1, 2 - t as i64);
        assert_eq!(rep.hypotheses.analytic_spread, 1);
        assert!(t == 0 || !rep.hypotheses.surrogate_pass);
        assert!(!rep.notes.is_empty());
    }
}

#[test]
fn square_of_maximal_ideal_end_to_end() {
    let ctx = context_for(2);
    let i = monomials(&ctx, &[&[2, 0], &[1, 1], &[0, 2]]);
    let (mut an, r) = analysis(&i);
    let rec = an.fit(&FitPolicy::default()).unwrap();
    assert_eq!(rec.j, vec![4, 1, 0]);
    assert_eq!(r, 1);
    assert_eq!(an.j_zero().unwrap(), LengthValue::Finite(4));
    assert_eq!(an.e_one_bar(40).unwrap(), 1);
    assert_eq!(an.reduction_sum().unwrap(), 1);
    assert_eq!(j_one_depth_formula(&mut an).unwrap(), 1);
    let vv = an.valabrega_valla(4, true).unwrap();
    assert!(vv.condition_a && vv.condition_b && vv.equivalent);
    assert_eq!(vv.depth_at_least_d_minus_1, Some(true));

    let mut om = Omega::new(&mut an, ColonReading::X1);
    let w0 = om.omega(0).unwrap();
    assert_eq!(w0.total, rec.delta_d_gap(0) - 1);
    for check in om.master_identity(&rec, 5).unwrap() {
        assert!(check.holds, "{check:?}");
    }

    let rep = northcott_report(&mut an, &rec, r, HypothesisFlags::default(), ColonReading::X1).unwrap();
    assert_eq!((rep.j1, rep.lambda_ij, rep.second_term), (1, 1, 0));
    assert_eq!(rep.theorem_verdict, Verdict::Consistent);
    assert_eq!(rep.consequences.equal_lambda_implies_primary, Some(true));
}

#[test]
fn maximal_ideal_is_its_own_minimal_reduction() {
    let ctx = context_for(2);
    let (mut an, r) = analysis(&northcott_core::ideal::Ideal::maximal(&ctx));
    assert_eq!(r, 0);
    assert_eq!(an.e_one_bar(40).unwrap(), 0);
    assert_eq!(j_one_depth_formula(&mut an).unwrap(), 0);
    let vv = an.valabrega_valla(3, false).unwrap();
    assert!(vv.per_n.iter().all(|&b| b));
    assert_eq!(vv.depth_at_least_d_minus_1, None);
}

#[test]
fn failing_valabrega_valla_instance() {
    let ctx = context_for(2);
    let i = monomials(&ctx, &[&[4, 0], &[3, 1], &[1, 3], &[0, 4]]);
    let (mut an, r) = analysis(&i);
    assert_eq!(r, 2);
    let vv = an.valabrega_valla(r + 4, true).unwrap();
    assert_eq!((vv.reduction_sum, vv.e1_bar), (7, 6));
    assert!(!vv.condition_a && !vv.condition_b && vv.equivalent);
    assert_eq!(vv.per_n[0], true);
    assert_eq!(vv.per_n[1], false);
}
