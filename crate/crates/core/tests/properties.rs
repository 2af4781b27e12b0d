use std::sync::OnceLock;

use galtour::dissociation::{intourability_field, is_galtourable, schreier_refine};
use galtour::galois::{FieldRef, GaloisContext};
use galtour::oracle::{raf_values, Lattice};
use galtour::permgroup::{all_subgroups, Bounds, Group, Permutation};
use galtour::presets::{self, SHIPPED};
use galtour::towers::{
    big_omega, is_galois_refinement, is_proper_refinement, is_trivial_refinement, refinement_witness,
    Tower,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_contexts() -> &'static [GaloisContext] {
    static CTXS: OnceLock<Vec<GaloisContext>> = OnceLock::new();
    CTXS.get_or_init(|| {
        SHIPPED
            .iter()
            .map(|s| presets::load(s, Bounds::default()).unwrap())
            .filter(|c| c.group().order() <= 60)
            .collect()
    })
}

fn pick(c: &GaloisContext, i: usize) -> FieldRef {
    c.fields().nth(i % c.field_count()).unwrap()
}

fn conjugation_scan(c: &GaloisContext, a: FieldRef, b: FieldRef) -> bool {
    let g = c.group();
    let (sa, sb) = (c.subgroup(a), c.subgroup(b));
    sa.is_subgroup_of(sb)
        && sb
            .elements()
            .iter()
            .all(|&x| sa.elements().iter().all(|&h| sa.contains(g.mul(g.mul(x, h), g.inv(x)))))
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cycle_notation_round_trips(p in perm_strategy(7)) {
        let text = p.to_string();
        prop_assert_eq!(Permutation::parse_cycles(7, &text).unwrap(), p);
    }

    #[test]
    fn generated_groups_obey_lagrange(gens in prop::collection::vec(perm_strategy(5), 1..3)) {
        let g = Group::generate(5, gens).unwrap();
        prop_assert_eq!(120 % g.order(), 0);
        let subs = all_subgroups(&g, 384).unwrap();
        prop_assert!(subs.iter().all(|h| g.order().is_multiple_of(h.order())));
        prop_assert_eq!(subs.first().unwrap().order(), 1);
        prop_assert_eq!(subs.last().unwrap().order(), g.order());
    }

    #[test]
    fn normality_matches_conjugation_scan(ci in 0usize..64, a in 0usize..400, b in 0usize..400) {
        let c = &small_contexts()[ci % small_contexts().len()];
        let (fa, fb) = (pick(c, a), pick(c, b));
        let (sa, sb) = (c.subgroup(fa), c.subgroup(fb));
        if sa.is_subgroup_of(sb) {
            prop_assert_eq!(sa.is_normal_in(sb).unwrap(), conjugation_scan(c, fa, fb));
        } else {
            prop_assert!(sa.is_normal_in(sb).is_err());
        }
    }

    #[test]
    fn subnormal_closure_is_least(ci in 0usize..64, a in 0usize..400, b in 0usize..400) {
        let c = &small_contexts()[ci % small_contexts().len()];
        let (fa, fb) = (pick(c, a), pick(c, b));
        let (h, outer) = (c.subgroup(fa), c.subgroup(fb));
        prop_assume!(h.is_subgroup_of(outer));
        let (s, chain) = h.subnormal_closure(outer).unwrap();
        prop_assert_eq!(chain.first().unwrap(), outer);
        prop_assert_eq!(chain.last().unwrap(), &s);
        for w in chain.windows(2) {
            prop_assert!(w[1].is_normal_in(&w[0]).unwrap());
        }
        // exhaustive: every subnormal subgroup of `outer` containing h contains s
        let lat = Lattice::new(c).unwrap();
        for x in c.fields() {
            let sx = c.subgroup(x);
            if h.is_subgroup_of(sx) && sx.is_subgroup_of(outer) && lat.galtourable(x, fb) {
                prop_assert!(s.is_subgroup_of(sx));
            }
        }
    }

    #[test]
    fn lattice_laws(ci in 0usize..64, a in 0usize..400, b in 0usize..400, d in 0usize..400) {
        let c = &small_contexts()[ci % small_contexts().len()];
        let (x, y, z) = (pick(c, a), pick(c, b), pick(c, d));
        prop_assert_eq!(c.compositum(x, y), c.compositum(y, x));
        prop_assert_eq!(c.intersect_fields(x, y), c.intersect_fields(y, x));
        prop_assert_eq!(c.compositum(c.compositum(x, y), z), c.compositum(x, c.compositum(y, z)));
        prop_assert_eq!(c.intersect_fields(c.intersect_fields(x, y), z), c.intersect_fields(x, c.intersect_fields(y, z)));
        prop_assert_eq!(c.compositum(x, c.intersect_fields(x, y)), x);
        prop_assert_eq!(c.intersect_fields(x, c.compositum(x, y)), x);
        prop_assert_eq!(c.le(x, y), c.compositum(x, y) == y);
        if c.le(x, y) && c.le(y, z) {
            prop_assert!(c.le(x, z));
            let (d1, d2, d3) = (c.degree(y, x).unwrap(), c.degree(z, y).unwrap(), c.degree(z, x).unwrap());
            prop_assert_eq!(d1 * d2, d3);
        }
        if c.le(x, y) && c.le(y, x) {
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn intourability_field_contains_galtourable_quotients(ci in 0usize..64, a in 0usize..400) {
        let c = &small_contexts()[ci % small_contexts().len()];
        let l = pick(c, a);
        let m = intourability_field(c, l, c.base()).unwrap().m;
        // M(L/K) is the largest galtourable subextension
        for e in c.interval(c.base(), l) {
            if is_galtourable(c, e, c.base()).unwrap() {
                prop_assert!(c.le(e, m));
            }
        }
    }

    #[test]
    fn strict_towers_respect_the_height_bound(ci in 0usize..64, seed in any::<u64>()) {
        let c = &small_contexts()[ci % small_contexts().len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut fields = vec![c.base()];
        while *fields.last().unwrap() != c.top_closure() {
            let up: Vec<FieldRef> = c.fields().filter(|&f| c.lt(*fields.last().unwrap(), f)).collect();
            fields.push(*up.choose(&mut rng).unwrap());
        }
        let t = Tower::new(c, fields).unwrap();
        prop_assert!(t.is_strict());
        prop_assert!(t.height_bound_check());
        prop_assert!(t.height() <= big_omega(c.group().order()));
        // a tower is a trivial refinement of its strict associate and of itself
        let mut padded = t.fields().to_vec();
        let i = rng.gen_range(0..padded.len());
        padded.insert(i, padded[i]);
        let p = Tower::new(c, padded).unwrap();
        prop_assert!(is_trivial_refinement(&p, &p.strict_associated()).unwrap());
        prop_assert!(is_trivial_refinement(&t, &t).unwrap());
        prop_assert_eq!(p.strict_associated(), t);
    }

    #[test]
    fn res_and_rat_recombine(ci in 0usize..64, seed in any::<u64>()) {
        let c = &small_contexts()[ci % small_contexts().len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut fields = vec![c.base()];
        for _ in 0..rng.gen_range(1..5) {
            let up: Vec<FieldRef> = c.fields().filter(|&f| c.le(*fields.last().unwrap(), f)).collect();
            fields.push(*up.choose(&mut rng).unwrap());
        }
        let t = Tower::new(c, fields).unwrap();
        let r = rng.gen_range(0..=t.height());
        let joined = galtour::towers::combine(&t, r, &t.res(r).unwrap(), &t.rat(r).unwrap()).unwrap();
        prop_assert_eq!(joined, t);
    }
}

/// 1000 random tower pairs in the order-24 context: literal refinement
/// conditions against the towers module.
#[test]
fn random_refinement_sample_in_s4() {
    let c = presets::load("group:S4", Bounds::default()).unwrap();
    let lat = Lattice::new(&c).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let fields: Vec<FieldRef> = c.fields().collect();
    let random_tower = |rng: &mut ChaCha8Rng, top: FieldRef| {
        let mut fs = vec![c.base()];
        for _ in 0..rng.gen_range(0..4) {
            let last = *fs.last().unwrap();
            let up: Vec<FieldRef> = fields.iter().copied().filter(|&f| c.le(last, f) && c.le(f, top)).collect();
            fs.push(*up.choose(rng).unwrap());
        }
        fs.push(top);
        fs
    };
    let mut refinements = 0;
    for _ in 0..1000 {
        let top = *fields.choose(&mut rng).unwrap();
        let f = random_tower(&mut rng, top);
        // half of the time build e from f by inserting fields, so that
        // genuine refinements are well represented
        let e = if rng.gen_bool(0.5) {
            let mut e = f.clone();
            for _ in 0..rng.gen_range(0..3) {
                let i = rng.gen_range(0..e.len() - 1);
                let choices: Vec<FieldRef> = fields.iter().copied().filter(|&x| c.le(e[i], x) && c.le(x, e[i + 1])).collect();
                e.insert(i + 1, *choices.choose(&mut rng).unwrap());
            }
            e
        } else {
            random_tower(&mut rng, top)
        };
        let v = raf_values(&lat, &e, &f);
        let (te, tf) = (Tower::new(&c, e).unwrap(), Tower::new(&c, f).unwrap());
        assert_eq!(refinement_witness(&te, &tf).is_some(), v.raf1 && v.raf2);
        if v.raf2 {
            refinements += 1;
            assert_eq!(is_proper_refinement(&te, &tf).unwrap(), v.raf3);
            assert_eq!(is_trivial_refinement(&te, &tf).unwrap(), v.raft);
            assert_eq!(is_galois_refinement(&te, &tf).unwrap(), v.rafg);
        }
    }
    assert!(refinements > 300, "only {refinements} refinements sampled");
}

#[test]
fn schreier_refinement_of_identical_towers_is_identity_up_to_repetition() {
    let c = presets::load("radical:a=2,n=4", Bounds::default()).unwrap();
    let t = Tower::from_names(&c, &["Q", "Q(sqrt2)", "Q(4rt2)"]).unwrap();
    let r = schreier_refine(&t, &t).unwrap();
    assert_eq!(r.refined1, r.refined2);
    assert!(r.witness.verify(&r.refined1, &r.refined2).unwrap());
    assert_eq!(r.refined1.strict_associated(), t);
}
