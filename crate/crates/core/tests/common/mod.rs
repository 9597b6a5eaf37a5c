#![allow(dead_code)]

use std::sync::Arc;

use northcott_core::context::RingContext;
use northcott_core::ideal::Ideal;
use northcott_core::monomial::Monomial;
use northcott_core::oracle::MonomialIdeal;
use rand::Rng;

pub const P: u64 = 32003;

pub fn ring(vars: &[&str], relations: &[&[(i64, &[u32])]]) -> Arc<RingContext> {
    let base = RingContext::polynomial_ring(vars, P).unwrap();
    let r = base.ring();
    let rels = relations
        .iter()
        .map(|terms| {
            r.from_terms(
                terms
                    .iter()
                    .map(|(c, e)| (Monomial::from_exponents(e), base.field().from_i64(*c)))
                    .collect(),
            )
        })
        .collect();
    RingContext::new(vars.iter().map(|s| s.to_string()).collect(), P, rels).unwrap()
}

pub fn monomials(ctx: &Arc<RingContext>, exps: &[&[u32]]) -> Ideal {
    let r = ctx.ring();
    Ideal::new(
        ctx,
        exps.iter()
            .map(|e| r.term(1, Monomial::from_exponents(e)))
            .collect(),
    )
    .unwrap()
}

/// `R = k[x,y]/(x^3 - x^2 y)`.
pub fn cusp_ring() -> Arc<RingContext> {
    ring(&["x", "y"], &[&[(1, &[3, 0]), (-1, &[2, 1])]])
}

/// `R = k[x,y,z]/(xy - z^2)`.
pub fn cone_ring() -> Arc<RingContext> {
    ring(&["x", "y", "z"], &[&[(1, &[1, 1, 0]), (-1, &[0, 0, 2])]])
}

pub struct Case {
    pub name: &'static str,
    pub ideal: Ideal,
    pub m_primary_monomial: bool,
}

fn case(name: &'static str, ctx: &Arc<RingContext>, exps: &[&[u32]], primary: bool) -> Case {
    Case {
        name,
        ideal: monomials(ctx, exps),
        m_primary_monomial: primary,
    }
}

/// Inputs of dimension at least two used by the coefficient and
/// inequality checks.
pub fn suite() -> Vec<Case> {
    let xy = RingContext::polynomial_ring(&["x", "y"], P).unwrap();
    let xyz = RingContext::polynomial_ring(&["x", "y", "z"], P).unwrap();
    let cone = cone_ring();
    vec![
        case("(x,y)", &xy, &[&[1, 0], &[0, 1]], true),
        case("(x^2,xy,y^2)", &xy, &[&[2, 0], &[1, 1], &[0, 2]], true),
        case("(x^2,y^2)", &xy, &[&[2, 0], &[0, 2]], true),
        case("(x^3,xy,y^3)", &xy, &[&[3, 0], &[1, 1], &[0, 3]], true),
        case("(x^4,x^3y,xy^3,y^4)", &xy, &[&[4, 0], &[3, 1], &[1, 3], &[0, 4]], true),
        case("(x^2,xy)", &xy, &[&[2, 0], &[1, 1]], false),
        case("(x^3,x^2y)", &xy, &[&[3, 0], &[2, 1]], false),
        case("(x^2,xy^2)", &xy, &[&[2, 0], &[1, 2]], false),
        case("(x,y,z)", &xyz, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], true),
        case("(x^2,y^2,z^2)", &xyz, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]], true),
        case("cone (x,y,z)", &cone, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], false),
        case("cone (x,z)", &cone, &[&[1, 0, 0], &[0, 0, 1]], false),
    ]
}

fn random_exponents(rng: &mut impl Rng, nvars: usize, max_deg: u32) -> Vec<u32> {
    let deg = rng.gen_range(1..=max_deg);
    let mut e = vec![0; nvars];
    for _ in 0..deg {
        e[rng.gen_range(0..nvars)] += 1;
    }
    e
}

/// Up to five generators of degree at most six; with `primary`, a pure
/// power of every variable is added.
pub fn random_monomial_ideal(rng: &mut impl Rng, nvars: usize, primary: bool) -> MonomialIdeal {
    let count = rng.gen_range(1..=5);
    let mut gens: Vec<Vec<u32>> = (0..count).map(|_| random_exponents(rng, nvars, 6)).collect();
    if primary {
        for v in 0..nvars {
            let mut e = vec![0; nvars];
            e[v] = rng.gen_range(1..=6);
            gens.push(e);
        }
    }
    MonomialIdeal::new(nvars, gens)
}

pub fn context_for(nvars: usize) -> Arc<RingContext> {
    let names = ["x", "y", "z"];
    RingContext::polynomial_ring(&names[..nvars], P).unwrap()
}
