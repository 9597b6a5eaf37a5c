mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use northcott_core::hilbert::{FitPolicy, HilbertRecord};
use northcott_core::ideal::Ideal;
use northcott_core::length::{pair_length, LengthValue, TruncationPolicy};
use northcott_core::northcott::{northcott_report, HypothesisFlags, HypothesisReport, Verdict};
use northcott_core::omega::{ColonReading, Omega};
use northcott_core::oracle::{mon_pair_length, oracle_hilbert_coefficients, MonomialIdeal};
use northcott_core::reduction::Analysis;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn analyse(i: &Ideal) -> (Analysis, usize, HilbertRecord) {
    let (mut an, r) = Analysis::new(i, 0, TruncationPolicy::default()).unwrap();
    let rec = an.fit(&FitPolicy::default()).unwrap();
    (an, r, rec)
}

const FLAGS: HypothesisFlags = HypothesisFlags {
    gd_asserted: false,
    an_asserted: true,
    s2_asserted: true,
};

/// Cases where `ℓ(I) = d` and the residual-height surrogate holds.
fn passing_suite() -> Vec<(Case, Analysis, usize, HilbertRecord)> {
    suite()
        .into_iter()
        .filter_map(|c| {
            let (mut an, r, rec) = analyse(&c.ideal);
            let hyp = HypothesisReport::compute(&mut an, FLAGS).unwrap();
            hyp.inequality_applies().then_some((c, an, r, rec))
        })
        .collect()
}

fn readings_satisfying_master_identity(
    an: &mut Analysis,
    r: usize,
    rec: &HilbertRecord,
) -> Vec<ColonReading> {
    let nmax = r + rec.d + 2;
    [ColonReading::X1, ColonReading::XNext]
        .into_iter()
        .filter(|&reading| {
            Omega::new(an, reading)
                .master_identity(rec, nmax)
                .map(|checks| checks.iter().all(|c| c.holds))
                .unwrap_or(false)
        })
        .collect()
}

fn cusp_family() -> Outcome {
    let ctx = cusp_ring();
    let mut slowest = Duration::ZERO;
    for t in 0..=4u32 {
        let start = Instant::now();
        let i = monomials(&ctx, &[&[1, t]]);
        let (mut an, _, rec) = analyse(&i);
        let checks = an.residual_height_check().unwrap();
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        let want = vec![t as i64 + 1, 2 - t as i64];
        ensure(rec.j == want, || format!("t={t}: j={:?}, expected {want:?}", rec.j))?;
        ensure(an.analytic_spread() == 1, || format!("t={t}: analytic spread {}", an.analytic_spread()))?;
        let g1 = checks.iter().all(|c| c.pass);
        ensure(t == 0 || !g1, || format!("t={t}: G1 surrogate passed"))?;
        ensure(elapsed < Duration::from_secs(60), || format!("t={t}: {elapsed:?}"))?;
    }
    Ok(format!(
        "j = (t+1, 2-t) for t = 0..4, analytic spread 1, G1 surrogate fails for t >= 1, slowest {slowest:.2?}"
    ))
}

fn classical_coincidence() -> Outcome {
    let ideals: [&[&[u32]]; 10] = [
        &[&[1, 0], &[0, 1]],
        &[&[2, 0], &[1, 1], &[0, 2]],
        &[&[2, 0], &[0, 2]],
        &[&[3, 0], &[1, 1], &[0, 3]],
        &[&[2, 0], &[1, 1], &[0, 3]],
        &[&[3, 0], &[2, 1], &[0, 2]],
        &[&[4, 0], &[3, 1], &[1, 3], &[0, 4]],
        &[&[3, 0], &[2, 1], &[1, 2], &[0, 3]],
        &[&[5, 0], &[1, 1], &[0, 5]],
        &[&[2, 0], &[0, 3]],
    ];
    let ctx = context_for(2);
    let mut shown = Vec::new();
    for exps in ideals {
        let (_, _, rec) = analyse(&monomials(&ctx, exps));
        let mono = MonomialIdeal::new(2, exps.iter().map(|e| e.to_vec()).collect());
        let oracle = oracle_hilbert_coefficients(&mono).unwrap().coefficients;
        ensure(rec.j == oracle, || format!("{exps:?}: fitted {:?}, oracle {oracle:?}", rec.j))?;
        shown.push(format!("{:?}", rec.j));
    }
    Ok(format!("10 ideals agree: {}", shown.join(" ")))
}

fn master_identity() -> Outcome {
    let mut lines = Vec::new();
    let mut count = 0;
    for (c, mut an, r, rec) in passing_suite() {
        let ok = readings_satisfying_master_identity(&mut an, r, &rec);
        ensure(!ok.is_empty(), || format!("{}: neither colon reading satisfies the identity", c.name))?;
        let names: Vec<&str> = ok.iter().map(|r| r.name()).collect();
        lines.push(format!("{}:{}", c.name, names.join("+")));
        count += 1;
    }
    Ok(format!("{count} inputs, readings {}", lines.join(" ")))
}

fn route_agreement() -> Outcome {
    let mut count = 0;
    for (c, mut an, r, rec) in passing_suite() {
        let reading = readings_satisfying_master_identity(&mut an, r, &rec)
            .first()
            .copied()
            .ok_or_else(|| format!("{}: no reading", c.name))?;
        for i in 1..=rec.d {
            let lemma = rec.gap_sum(i);
            let sums = Omega::new(&mut an, reading).j_via_sums(i, 40).map_err(|e| e.to_string())?;
            ensure(lemma == rec.j[i] && sums == rec.j[i], || {
                format!("{}: j_{i} fit {} lemma {lemma} sums {sums}", c.name, rec.j[i])
            })?;
        }
        count += 1;
    }
    let mut zero_checks = 0;
    let cusp = cusp_ring();
    let extra = (0..=4u32).map(|t| monomials(&cusp, &[&[1, t]]));
    for i in suite().into_iter().map(|c| c.ideal).chain(extra) {
        let (mut an, _, rec) = analyse(&i);
        if an.analytic_spread() != an.d() {
            continue;
        }
        let jz = an.j_zero().unwrap();
        ensure(jz == LengthValue::Finite(rec.j[0] as u64), || {
            format!("j0 fit {} vs length formula {jz}", rec.j[0])
        })?;
        zero_checks += 1;
    }
    Ok(format!(
        "j_i fit = coefficient sums = omega sums on {count} inputs; j0 fit = length formula on {zero_checks} inputs"
    ))
}

fn northcott_suite() -> Outcome {
    let mut equality_cases = 0;
    let mut count = 0;
    for (c, mut an, r, rec) in passing_suite() {
        let rep = northcott_report(&mut an, &rec, r, FLAGS, ColonReading::X1).map_err(|e| e.to_string())?;
        ensure(rep.j1 >= rep.bound as i64, || format!("{}: j1 {} < bound {}", c.name, rep.j1, rep.bound))?;
        ensure(rep.theorem_verdict != Verdict::Violated, || {
            format!("{}: equality {} with r = {}", c.name, rep.equality, r)
        })?;
        if rep.theorem_verdict == Verdict::Consistent {
            equality_cases += 1;
        }
        if let Some(cl) = &rep.classical {
            ensure(cl.agrees, || format!("{}: e0 - λ(R/I) = {} vs λ(I/J) = {}", c.name, cl.e0_minus_colength, cl.lambda_ij))?;
        }
        let triple = (rep.j1, rep.bound, rep.reduction_number);
        match c.name {
            "(x^2,xy,y^2)" => ensure(triple == (1, 1, 1), || format!("m^2: {triple:?}"))?,
            "(x,y)" | "(x^2,y^2)" | "(x,y,z)" | "(x^2,y^2,z^2)" => {
                ensure(triple == (0, 0, 0), || format!("{}: {triple:?}", c.name))?
            }
            _ => {}
        }
        count += 1;
    }
    Ok(format!(
        "j1 >= bound on {count} inputs; equality iff r <= 1 on the {equality_cases} inputs meeting the depth condition; m^2 gives (1,1,1), parameter ideals (0,0,0)"
    ))
}

struct Quadruple {
    nvars: usize,
    a: MonomialIdeal,
    u: MonomialIdeal,
    v: MonomialIdeal,
    w: MonomialIdeal,
}

fn random_quadruple(rng: &mut ChaCha8Rng) -> Quadruple {
    let nvars = rng.gen_range(2..=3);
    Quadruple {
        nvars,
        a: random_monomial_ideal(rng, nvars, false),
        u: random_monomial_ideal(rng, nvars, true),
        v: random_monomial_ideal(rng, nvars, false),
        w: random_monomial_ideal(rng, nvars, true),
    }
}

fn finite(v: LengthValue) -> Result<i64, String> {
    v.finite().map(|n| n as i64).ok_or_else(|| format!("expected a finite length, got {v}"))
}

fn abcd_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let p = TruncationPolicy::default();
    for k in 0..100 {
        let q = random_quadruple(&mut rng);
        let b = q.a.intersect(&q.u);
        let c = q.a.intersect(&q.v);
        let d = c.intersect(&b).intersect(&q.w);
        let oracle = [
            finite(mon_pair_length(&q.a, &b).unwrap())?,
            finite(mon_pair_length(&b.intersect(&c), &d).unwrap())?,
            finite(mon_pair_length(&c, &d).unwrap())?,
            finite(mon_pair_length(&q.a, &b.sum(&c)).unwrap())?,
        ];
        let ctx = context_for(q.nvars);
        let ea = q.a.to_ideal(&ctx).unwrap();
        let eb = ea.intersect(&q.u.to_ideal(&ctx).unwrap()).unwrap();
        let ec = ea.intersect(&q.v.to_ideal(&ctx).unwrap()).unwrap();
        let ed = ec.intersect(&eb).unwrap().intersect(&q.w.to_ideal(&ctx).unwrap()).unwrap();
        let engine = [
            finite(pair_length(&ea, &eb, &p).unwrap())?,
            finite(pair_length(&eb.intersect(&ec).unwrap(), &ed, &p).unwrap())?,
            finite(pair_length(&ec, &ed, &p).unwrap())?,
            finite(pair_length(&ea, &eb.sum(&ec).unwrap(), &p).unwrap())?,
        ];
        for (name, v) in [("oracle", oracle), ("engine", engine)] {
            ensure(v[0] + v[1] == v[2] + v[3], || format!("instance {k}: {name} lengths {v:?}"))?;
        }
        ensure(oracle == engine, || format!("instance {k}: oracle {oracle:?} engine {engine:?}"))?;
    }
    Ok("identity exact on 100 quadruples, engine and oracle lengths equal".into())
}

fn reduction_ring_sums() -> Outcome {
    let mut primary = 0;
    let mut vv = 0;
    for c in suite() {
        let (mut an, r, rec) = analyse(&c.ideal);
        if an.analytic_spread() != an.d() {
            continue;
        }
        if c.m_primary_monomial {
            let s = an.torsion_corrected_sum().map_err(|e| e.to_string())?;
            let e1 = an.e_one_bar(40).map_err(|e| e.to_string())?;
            ensure(s == e1 as i64, || format!("{}: corrected sum {s}, e1 of reduction ring {e1}", c.name))?;
            ensure(e1 as i64 == rec.j[1], || format!("{}: e1 of reduction ring {e1}, j1 {}", c.name, rec.j[1]))?;
            primary += 1;
        }
        let rep = an.valabrega_valla(r + rec.d + 2, true).map_err(|e| e.to_string())?;
        ensure(rep.equivalent, || format!("{}: (a) {} (b) {}", c.name, rep.condition_a, rep.condition_b))?;
        vv += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ctx = context_for(2);
    let mut found = None;
    for attempt in 0..500 {
        let mono = random_monomial_ideal(&mut rng, 2, true);
        let e1 = oracle_hilbert_coefficients(&mono).unwrap().coefficients[1];
        let (mut an, r, _) = analyse(&mono.to_ideal(&ctx).unwrap());
        let sum = an.reduction_sum().unwrap();
        if sum as i64 > e1 {
            let rep = an.valabrega_valla(r + 4, true).unwrap();
            ensure(!rep.condition_a && !rep.condition_b && rep.equivalent, || {
                format!("failing instance {:?}: {rep:?}", mono.gens())
            })?;
            found = Some((attempt, mono, sum, e1));
            break;
        }
    }
    let (attempt, mono, sum, e1) = found.ok_or("no failing instance found in 500 samples")?;
    Ok(format!(
        "corrected sum = e1 of reduction ring on {primary} primary inputs; (a) iff (b) on {vv} inputs; failing instance {:?} at sample {attempt}: sum {sum} > oracle e1 {e1}, (b) fails",
        mono.gens()
    ))
}

fn engine_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p = TruncationPolicy::default();
    for k in 0..100 {
        let nvars = rng.gen_range(2..=3);
        let a = random_monomial_ideal(&mut rng, nvars, false);
        let b = random_monomial_ideal(&mut rng, nvars, false);
        let vars: Vec<usize> = (0..nvars).filter(|_| rng.gen_bool(0.5)).collect();
        let ctx = context_for(nvars);
        let (ea, eb) = (a.to_ideal(&ctx).unwrap(), b.to_ideal(&ctx).unwrap());
        let back = |i: Ideal| MonomialIdeal::from_ideal(&i).unwrap();
        ensure(back(ea.intersect(&eb).unwrap()) == Some(a.intersect(&b)), || format!("{k}: intersect"))?;
        ensure(back(ea.colon(&eb).unwrap()) == Some(a.colon(&b)), || format!("{k}: colon"))?;
        ensure(back(ea.saturate_maximal().unwrap()) == Some(a.saturate_maximal()), || {
            format!("{k}: saturation by the maximal ideal")
        })?;
        let r = ctx.ring();
        let var_ideal = Ideal::new(&ctx, vars.iter().map(|&v| r.variable(v)).collect()).unwrap();
        ensure(back(ea.saturate(&var_ideal).unwrap()) == Some(a.saturate(&vars)), || {
            format!("{k}: saturation by variables {vars:?}")
        })?;
        let sum = a.sum(&b);
        let engine = pair_length(&sum.to_ideal(&ctx).unwrap(), &eb, &p).unwrap();
        let oracle = mon_pair_length(&sum, &b).unwrap();
        ensure(engine == oracle, || format!("{k}: length engine {engine} oracle {oracle}"))?;
    }
    Ok("intersect, colon, saturate and pair lengths agree on 100 instances".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("cusp family reproduction", cusp_family),
        ("classical coincidence", classical_coincidence),
        ("master identity", master_identity),
        ("route agreement", route_agreement),
        ("Northcott suite", northcott_suite),
        ("ABCD length identity", abcd_property),
        ("reduction ring sums and Valabrega-Valla equivalence", reduction_ring_sums),
        ("engine/oracle equivalence", engine_oracle_equivalence),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {title} ({took:.2?}): {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {title} ({took:.2?}): {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
