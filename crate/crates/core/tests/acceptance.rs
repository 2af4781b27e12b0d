//! Acceptance criteria 1–11, one PASS/FAIL line each. Runs without the
//! libtest harness so the lines are always printed.

use std::process::ExitCode;
use std::time::Instant;

use galtour::dissociation::{
    butterfly_check, composition_tower_galois, composition_tower_general, equivalence_general,
    galois_tower_witness, intourability_field, is_composition_tower, is_galsimple, is_galtourable,
    is_simple_ext, schreier_refine, schreier_sigma,
};
use galtour::galois::{diagonal_split_check, ecartele_identities, parallelograms, FieldRef, GaloisContext};
use galtour::oracle::{agreement_matrix, bf_composition_towers, intourability_candidates, Lattice};
use galtour::par::Exec;
use galtour::permgroup::Bounds;
use galtour::presets::{self, SHIPPED};
use galtour::towers::{equivalence_witness, refinement_witness, Tower};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn load(s: &str) -> GaloisContext {
    presets::load(s, Bounds::default()).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn err(e: galtour::Error) -> String {
    e.to_string()
}

fn contexts_up_to(order: usize) -> Vec<(&'static str, GaloisContext)> {
    SHIPPED
        .iter()
        .map(|&s| (s, load(s)))
        .filter(|(_, c)| c.group().order() <= order)
        .collect()
}

fn names(ctx: &GaloisContext, fs: &[FieldRef]) -> Vec<String> {
    fs.iter().map(|&f| ctx.name(f)).collect()
}

fn criterion_1() -> Check {
    let c = load("radical:a=2,n=6");
    let (q, l) = (c.base(), c.field("Q(6rt2)").map_err(err)?);
    ensure!(!is_galtourable(&c, l, q).map_err(err)?, "Q(6rt2)/Q reported galtourable");
    let rep = intourability_field(&c, l, q).map_err(err)?;
    ensure!(c.name(rep.m) == "Q(sqrt2)", "M = {}", c.name(rep.m));
    ensure!((rep.degrees.gal, rep.degrees.int) == (2, 3), "degrees {:?}", rep.degrees);
    let lat = Lattice::new(&c).map_err(err)?;
    let cands = intourability_candidates(&lat, l, q);
    ensure!(cands == [rep.m], "oracle candidates {:?}", names(&c, &cands));
    Ok("M = Q(sqrt2), degrees (2,3), oracle count 1".into())
}

fn criterion_2() -> Check {
    let c = load("radical:a=2,n=4");
    let (q, l) = (c.base(), c.field("Q(4rt2)").map_err(err)?);
    ensure!(is_galtourable(&c, l, q).map_err(err)?, "Q(4rt2)/Q not galtourable");
    let w = galois_tower_witness(&c, l, q).map_err(err)?;
    ensure!(w.names() == ["Q", "Q(sqrt2)", "Q(4rt2)"], "witness {:?}", w.names());
    let t = composition_tower_general(&c, l, q).map_err(err)?;
    ensure!(t.height() == 2, "composition tower height {}", t.height());
    let orders: Vec<usize> = t.marche_groups().map_err(err)?.iter().map(|g| g.order()).collect();
    ensure!(orders == [2, 2], "marche orders {orders:?}");
    ensure!(is_composition_tower(&c, &t).map_err(err)?, "is_composition_tower false");
    Ok(format!("witness {}", w.render()))
}

fn criterion_3() -> Check {
    let c = load("radical:a=2,n=9");
    ensure!(c.group().order() == 54, "closure order {}", c.group().order());
    let (q, l) = (c.base(), c.field("Q(9rt2)").map_err(err)?);
    ensure!(is_galsimple(&c, l, q).map_err(err)?, "not galsimple");
    ensure!(!is_simple_ext(&c, l, q).map_err(err)?, "simple");
    ensure!(!c.is_galois(l, q).map_err(err)?, "Galois");
    let rep = intourability_field(&c, l, q).map_err(err)?;
    ensure!(rep.m == q && (rep.degrees.gal, rep.degrees.int) == (1, 9), "M = {}, {:?}", c.name(rep.m), rep.degrees);
    Ok("galsimple, not simple, not Galois, M = Q, degrees (1,9)".into())
}

fn criterion_4() -> Check {
    for n in 3..=5usize {
        let c = load(&format!("selmer-serre:n={n}"));
        let (q, l) = (c.base(), c.field("Q(theta)").map_err(err)?);
        ensure!(is_simple_ext(&c, l, q).map_err(err)?, "n={n}: not simple");
        ensure!(!c.is_galois(l, q).map_err(err)?, "n={n}: Galois");
        let rep = intourability_field(&c, l, q).map_err(err)?;
        ensure!((rep.degrees.gal, rep.degrees.int) == (1, n), "n={n}: degrees {:?}", rep.degrees);
        if n == 5 {
            ensure!(c.interval(q, l).len() == 2, "interval has {} members", c.interval(q, l).len());
            let (closure, _) = c.subgroup(l).subnormal_closure(c.subgroup(q)).map_err(err)?;
            ensure!(closure.order() == 120, "subnormal closure of order {}", closure.order());
        }
    }
    Ok("n = 3, 4, 5 simple non-Galois with degrees (1,n)".into())
}

fn criterion_5() -> Check {
    let c = load("cyclo-radical:n=2,d=3,l=3");
    let (q, l) = (c.base(), c.distinguished());
    let rep = intourability_field(&c, l, q).map_err(err)?;
    ensure!((rep.degrees.gal, rep.degrees.int) == (2, 3), "degrees {:?}", rep.degrees);
    let lat = Lattice::new(&c).map_err(err)?;
    let cands = intourability_candidates(&lat, l, q);
    ensure!(cands == [rep.m], "oracle candidates {:?}", names(&c, &cands));
    Ok(format!("M = {}, degrees (2,3) by both paths", c.name(rep.m)))
}

/// A random Galois tower of `top/base`; `top/base` must be galtourable.
fn random_galois_tower<'c>(rng: &mut ChaCha8Rng, c: &'c GaloisContext, base: FieldRef, top: FieldRef) -> Tower<'c> {
    let mut fields = vec![base];
    let mut cur = base;
    while cur != top {
        if fields.len() < 4 && rng.gen_bool(0.1) {
            fields.push(cur);
            continue;
        }
        let next: Vec<FieldRef> = c
            .interval(cur, top)
            .into_iter()
            .filter(|&m| m != cur && c.is_galois(m, cur).unwrap() && is_galtourable(c, top, m).unwrap())
            .collect();
        cur = *next.choose(rng).expect("a galtourable extension has a proper Galois step");
        fields.push(cur);
    }
    Tower::new(c, fields).unwrap()
}

fn criterion_6() -> Check {
    ensure!(schreier_sigma(2, 3) == [1, 3, 5, 2, 4, 6], "sigma(2,3) = {:?}", schreier_sigma(2, 3));
    let ctxs = contexts_up_to(60);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c4e_1e12);
    let mut pairs = 0;
    while pairs < 240 {
        let (name, c) = &ctxs[rng.gen_range(0..ctxs.len())];
        let fields: Vec<FieldRef> = c.fields().collect();
        let base = *fields.choose(&mut rng).unwrap();
        let tops: Vec<FieldRef> = fields
            .iter()
            .copied()
            .filter(|&t| t != base && c.le(base, t) && is_galtourable(c, t, base).unwrap())
            .collect();
        let Some(&top) = tops.choose(&mut rng) else { continue };
        let t1 = random_galois_tower(&mut rng, c, base, top);
        let t2 = random_galois_tower(&mut rng, c, base, top);
        let r = schreier_refine(&t1, &t2).map_err(|e| format!("{name} {t1:?} {t2:?}: {e}"))?;
        let ctx_note = || format!("{name}: {t1:?} / {t2:?}");
        ensure!(r.refined1.is_galois_tower() && r.refined2.is_galois_tower(), "{}: not Galois", ctx_note());
        ensure!(refinement_witness(&r.refined1, &t1).is_some(), "{}: first is no refinement", ctx_note());
        ensure!(refinement_witness(&r.refined2, &t2).is_some(), "{}: second is no refinement", ctx_note());
        ensure!(r.witness.verify(&r.refined1, &r.refined2).map_err(err)?, "{}: σ witness fails", ctx_note());
        ensure!(butterfly_check(&t1, &t2).map_err(err)?, "{}: butterfly quadrilaterals", ctx_note());
        pairs += 1;
    }
    Ok(format!("{pairs} random pairs, zero failures; σ(2,3) = 1 3 5 2 4 6"))
}

fn criterion_7() -> Check {
    let mut pairs = 0;
    let mut towers = 0;
    for (name, c) in contexts_up_to(60) {
        for e in c.fields() {
            for f in c.fields() {
                if !c.le(f, e) || !is_galtourable(&c, e, f).map_err(err)? {
                    continue;
                }
                let all = bf_composition_towers(&c, e, f).map_err(err)?;
                ensure!(!all.is_empty(), "{name}: no composition tower of {}/{}", c.name(e), c.name(f));
                for a in &all {
                    for b in &all {
                        ensure!(
                            equivalence_witness(a, b).map_err(err)?.is_some(),
                            "{name}: {a:?} and {b:?} are not equivalent"
                        );
                    }
                }
                let main = composition_tower_galois(&c, e, f).map_err(err)?;
                ensure!(all.contains(&main), "{name}: {main:?} not among the enumerated composition towers");
                pairs += 1;
                towers += all.len();
            }
        }
    }
    Ok(format!("{pairs} galtourable pairs, {towers} composition towers, zero failures"))
}

fn criterion_8() -> Check {
    let mut pairs = 0;
    for (name, c) in contexts_up_to(120) {
        let lat = Lattice::new(&c).map_err(err)?;
        for k in c.fields() {
            for l in c.fields().filter(|&l| c.le(k, l)) {
                let main = intourability_field(&c, l, k).map_err(|e| format!("{name}: {e}"))?;
                let cands = intourability_candidates(&lat, l, k);
                ensure!(
                    cands == [main.m],
                    "{name}: M({}/{}) = {} but oracle found {:?}",
                    c.name(l),
                    c.name(k),
                    c.name(main.m),
                    names(&c, &cands)
                );
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs (K, L), oracle count 1 and equal to the main path"))
}

fn criterion_9() -> Check {
    let (mut paras, mut identities) = (0, 0);
    for (name, c) in contexts_up_to(60) {
        for p in parallelograms(&c) {
            ensure!(diagonal_split_check(&c, &p).map_err(err)?, "{name}: diagonal split fails on {p:?}");
            paras += 1;
            let lower: Vec<(FieldRef, FieldRef)> = c
                .interval(p.j, p.k)
                .into_iter()
                .flat_map(|e| c.interval(p.j, p.l).into_iter().map(move |f| (e, f)))
                .collect();
            let upper: Vec<(FieldRef, FieldRef)> = c
                .interval(p.k, p.n)
                .into_iter()
                .flat_map(|e| c.interval(p.l, p.n).into_iter().map(move |f| (e, f)))
                .collect();
            for (e, f) in lower.into_iter().chain(upper) {
                let v = ecartele_identities(&c, p.k, p.l, e, f).map_err(err)?;
                ensure!(v.holds(), "{name}: exchange identity fails for {p:?}, E={}, F={}", c.name(e), c.name(f));
                identities += 1;
            }
        }
    }
    Ok(format!("{paras} parallelograms, {identities} admissible (E,F), zero violations"))
}

fn criterion_10() -> Check {
    let c = load("radical:a=2,n=6");
    let (q, l) = (c.base(), c.field("Q(6rt2)").map_err(err)?);
    let t = composition_tower_general(&c, l, q).map_err(err)?;
    ensure!(t.names() == ["Q", "Q(sqrt2)", "Q(6rt2)"], "composition tower {:?}", t.names());
    let m = intourability_field(&c, l, q).map_err(err)?.m;
    let general: Vec<Tower<'_>> = bf_composition_towers(&c, m, q)
        .map_err(err)?
        .into_iter()
        .map(|t| t.induced(l))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    for a in &general {
        ensure!(is_composition_tower(&c, a).map_err(err)?, "{a:?} rejected");
        for b in &general {
            ensure!(equivalence_general(&c, a, b).map_err(err)?.is_some(), "{a:?} ≁ {b:?}");
        }
    }
    Ok(format!("[Q, Q(sqrt2), Q(6rt2)]; {} general composition towers pairwise equivalent", general.len()))
}

fn criterion_11() -> Check {
    let m = agreement_matrix(SHIPPED, Bounds::default(), 4, Exec::default()).map_err(err)?;
    if let Some(r) = m.disagreements().next() {
        return Err(format!("{} / {}: {:?}", r.instance, r.operation, r.counterexample));
    }
    let checks: usize = m.reports.iter().map(|r| r.checked).sum();
    Ok(format!("{} reports over {} instances, {checks} comparisons, 100% agreement", m.reports.len(), SHIPPED.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("Q(6rt2)/Q not galtourable, M = Q(sqrt2), (2,3)", criterion_1),
        ("Q(4rt2)/Q galtourable with composition tower of height 2", criterion_2),
        ("Q(9rt2)/Q galsimple, not simple, not Galois", criterion_3),
        ("Selmer-Serre n = 3..5 simple non-Galois", criterion_4),
        ("cyclo-radical (2,3,3) tourability degree (2,3)", criterion_5),
        ("Schreier refinement property suite", criterion_6),
        ("Jordan-Hölder suite", criterion_7),
        ("intourability field uniqueness sweep", criterion_8),
        ("exchange-identity and diagonal-split sweeps", criterion_9),
        ("general composition towers", criterion_10),
        ("oracle agreement matrix", criterion_11),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {title} — {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {title} — {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
