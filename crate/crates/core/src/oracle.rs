//! Brute-force reference implementations.
//!
//! Everything here re-derives its answers from the raw subgroup list and
//! element-level conjugation scans: definitions are evaluated literally, by
//! exhaustive search. Nothing below calls the decision procedures of
//! [`crate::galois`], [`crate::towers`] or [`crate::dissociation`] except to
//! compare against them.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};

use serde::Serialize;
use serde_json::{json, Value};

use crate::dissociation::{intourability_field, is_galsimple, is_galtourable};
use crate::error::{Error, Result};
use crate::galois::{FieldRef, GaloisContext};
use crate::par::{self, Exec};
use crate::permgroup::Subgroup;
use crate::presets;
use crate::towers::{
    is_galois_refinement, is_proper_refinement, is_trivial_refinement, refinement_witness, Tower,
};

/// Largest interval over which composition towers are enumerated.
pub const COMPOSITION_INTERVAL_BOUND: usize = 200;

/// Towers per extension fed to the refinement comparison.
const REFINEMENT_TOWER_CAP: usize = 60;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub instance: String,
    pub operation: String,
    pub agreement: bool,
    /// Number of individual comparisons made.
    pub checked: usize,
    pub mismatches: usize,
    /// The first disagreement found; present exactly when `agreement` is false.
    pub counterexample: Option<Value>,
}

impl OracleReport {
    fn new(instance: &str, operation: &str) -> Self {
        OracleReport {
            instance: instance.to_string(),
            operation: operation.to_string(),
            agreement: true,
            checked: 0,
            mismatches: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.mismatches += 1;
            if self.agreement {
                self.agreement = false;
                self.counterexample = Some(witness());
            }
        }
    }

    fn fail(&mut self, witness: Value) {
        self.check(false, || witness);
    }
}

/// The subgroup lattice rebuilt from scratch: containment by member sets,
/// normality by conjugating every generator of the inner group by every
/// element of the outer one.
pub struct Lattice<'c> {
    ctx: &'c GaloisContext,
    subs: Vec<Subgroup>,
    index: HashMap<Subgroup, usize>,
    /// `contained[a][b]`: `subs[a] ⊆ subs[b]`.
    contained: Vec<Vec<bool>>,
    /// `normal[a][b]`: `subs[a] ⊴ subs[b]`.
    normal: Vec<Vec<bool>>,
    /// Memo for the normal-chain search, keyed by target.
    chains: RefCell<HashMap<usize, Vec<Option<bool>>>>,
}

impl<'c> Lattice<'c> {
    pub fn new(ctx: &'c GaloisContext) -> Result<Self> {
        let subs: Vec<Subgroup> = ctx.fields().map(|f| ctx.subgroup(f).clone()).collect();
        if subs.len() > ctx.bounds().enumeration {
            return Err(Error::BoundExceeded {
                what: "oracle lattice",
                bound: ctx.bounds().enumeration,
            });
        }
        let g = ctx.group().clone();
        let n = subs.len();
        let index = subs.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut contained = vec![vec![false; n]; n];
        let mut normal = vec![vec![false; n]; n];
        for a in 0..n {
            for b in 0..n {
                let inside = subs[a].elements().iter().all(|&x| subs[b].contains(x));
                contained[a][b] = inside;
                normal[a][b] = inside
                    && subs[b].elements().iter().all(|&x| {
                        subs[a]
                            .generators()
                            .iter()
                            .all(|&h| subs[a].contains(g.mul(g.mul(x, h), g.inv(x))))
                    });
            }
        }
        Ok(Lattice {
            ctx,
            subs,
            index,
            contained,
            normal,
            chains: RefCell::new(HashMap::new()),
        })
    }

    pub fn ctx(&self) -> &'c GaloisContext {
        self.ctx
    }

    fn sub(&self, f: FieldRef) -> usize {
        f.index()
    }

    fn field(&self, i: usize) -> FieldRef {
        FieldRef::from_index(i)
    }

    fn lookup(&self, s: &Subgroup) -> usize {
        self.index[s]
    }

    /// Field `e ≤ f`.
    pub fn le(&self, e: FieldRef, f: FieldRef) -> bool {
        self.contained[self.sub(f)][self.sub(e)]
    }

    /// `upper/lower` is Galois: `Gal(N/upper) ⊴ Gal(N/lower)`.
    pub fn galois(&self, upper: FieldRef, lower: FieldRef) -> bool {
        self.normal[self.sub(upper)][self.sub(lower)]
    }

    /// Fields `M` with `lower ≤ M ≤ upper`.
    pub fn between(&self, lower: FieldRef, upper: FieldRef) -> Vec<FieldRef> {
        self.ctx
            .fields()
            .filter(|&m| self.le(lower, m) && self.le(m, upper))
            .collect()
    }

    pub fn compositum(&self, e: FieldRef, f: FieldRef) -> FieldRef {
        let (a, b) = (&self.subs[self.sub(e)], &self.subs[self.sub(f)]);
        let meet: Vec<u32> = a.elements().iter().copied().filter(|&x| b.contains(x)).collect();
        let meet = self.ctx.group().subgroup_from_elements(&meet).expect("meet is a subgroup");
        self.field(self.lookup(&meet))
    }

    pub fn intersection(&self, e: FieldRef, f: FieldRef) -> FieldRef {
        let (a, b) = (&self.subs[self.sub(e)], &self.subs[self.sub(f)]);
        let join = a.join(b).expect("same parent");
        self.field(self.lookup(&join))
    }

    /// Depth-first search for a strictly descending chain of subgroups from
    /// `Gal(N/lower)` to `Gal(N/upper)`, each normal in the previous.
    pub fn galtourable(&self, upper: FieldRef, lower: FieldRef) -> bool {
        if !self.le(lower, upper) {
            return false;
        }
        let target = self.sub(upper);
        let mut chains = self.chains.borrow_mut();
        let memo = chains
            .entry(target)
            .or_insert_with(|| vec![None; self.subs.len()]);
        self.dfs(self.sub(lower), target, memo)
    }

    fn dfs(&self, cur: usize, target: usize, memo: &mut Vec<Option<bool>>) -> bool {
        if cur == target {
            return true;
        }
        if let Some(v) = memo[cur] {
            return v;
        }
        let found = (0..self.subs.len()).any(|x| {
            x != cur
                && self.normal[x][cur]
                && self.contained[target][x]
                && self.dfs(x, target, memo)
        });
        memo[cur] = Some(found);
        found
    }

    /// `upper ≠ lower` and no `lower < M < upper` with `M/lower` Galois.
    pub fn galsimple(&self, upper: FieldRef, lower: FieldRef) -> bool {
        upper != lower
            && self.le(lower, upper)
            && self
                .between(lower, upper)
                .into_iter()
                .all(|m| m == lower || m == upper || !self.galois(m, lower))
    }
}

pub fn bf_galtourable(ctx: &GaloisContext, e: FieldRef, f: FieldRef) -> Result<bool> {
    Ok(Lattice::new(ctx)?.galtourable(e, f))
}

/// Every intermediate `M` of `L/K` satisfying both defining conditions of the
/// intourability field.
pub fn intourability_candidates(lat: &Lattice<'_>, l: FieldRef, k: FieldRef) -> Vec<FieldRef> {
    lat.between(k, l)
        .into_iter()
        .filter(|&m| lat.galtourable(m, k))
        .filter(|&m| m == l || (lat.galsimple(l, m) && !lat.galois(l, m)))
        .collect()
}

/// The unique candidate and the number of candidates found; anything other
/// than exactly one is reported as a theorem violation.
pub fn bf_intourability(ctx: &GaloisContext, l: FieldRef, k: FieldRef) -> Result<(FieldRef, usize)> {
    let lat = Lattice::new(ctx)?;
    if !lat.le(k, l) {
        return Err(Error::NotNested(format!("{} / {}", ctx.name(l), ctx.name(k))));
    }
    let found = intourability_candidates(&lat, l, k);
    match found.as_slice() {
        [m] => Ok((*m, 1)),
        _ => Err(Error::TheoremViolation(format!(
            "{} / {} has {} intourability candidates",
            ctx.name(l),
            ctx.name(k),
            found.len()
        ))),
    }
}

/// All strict Galois towers of `L/K` whose marches are galsimple, by
/// exhaustive chain enumeration.
pub fn bf_composition_towers<'c>(ctx: &'c GaloisContext, l: FieldRef, k: FieldRef) -> Result<Vec<Tower<'c>>> {
    let lat = Lattice::new(ctx)?;
    let interval = lat.between(k, l);
    if interval.len() > COMPOSITION_INTERVAL_BOUND {
        return Err(Error::BoundExceeded {
            what: "composition tower enumeration",
            bound: COMPOSITION_INTERVAL_BOUND,
        });
    }
    fn go(lat: &Lattice<'_>, interval: &[FieldRef], top: FieldRef, path: &mut Vec<FieldRef>, out: &mut Vec<Vec<FieldRef>>) {
        let cur = *path.last().unwrap();
        if cur == top {
            out.push(path.clone());
            return;
        }
        for &m in interval {
            if m != cur && lat.le(cur, m) && lat.galois(m, cur) && lat.galsimple(m, cur) {
                path.push(m);
                go(lat, interval, top, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    if k == l {
        out.push(vec![k]);
    } else {
        go(&lat, &interval, l, &mut vec![k], &mut out);
    }
    out.into_iter().map(|f| Tower::new(ctx, f)).collect()
}

/// Every tower of `top/base` of height at most `max_height`, by plain
/// enumeration of non-decreasing chains.
fn towers_up_to(lat: &Lattice<'_>, base: FieldRef, top: FieldRef, max_height: usize) -> Vec<Vec<FieldRef>> {
    let interval = lat.between(base, top);
    let mut out = Vec::new();
    let mut stack = vec![vec![base]];
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        if last == top {
            out.push(path.clone());
        }
        if path.len() > max_height {
            continue;
        }
        for &m in interval.iter().rev() {
            if lat.le(last, m) {
                let mut p = path.clone();
                p.push(m);
                stack.push(p);
            }
        }
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

/// All index sequences `j_0 < … < j_m` with `F_i = E_{j_i}`.
fn raf2_witnesses(e: &[FieldRef], f: &[FieldRef]) -> Vec<Vec<usize>> {
    fn go(e: &[FieldRef], f: &[FieldRef], from: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let i = acc.len();
        if i == f.len() {
            out.push(acc.clone());
            return;
        }
        for j in from..e.len() {
            if e[j] == f[i] {
                acc.push(j);
                go(e, f, j + 1, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(e, f, 0, &mut Vec::new(), &mut out);
    out
}

/// Literal truth values of the refinement conditions for `(E)` over `(F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RafValues {
    pub raf1: bool,
    pub raf2: bool,
    pub raf3: bool,
    pub raft: bool,
    pub rafg: bool,
}

pub fn raf_values(lat: &Lattice<'_>, e: &[FieldRef], f: &[FieldRef]) -> RafValues {
    let (n, m) = (e.len() - 1, f.len() - 1);
    let same_ext = e[0] == f[0] && e[n] == f[m];
    let new = |j: usize| (0..=m).all(|i| e[j] != f[i]);
    RafValues {
        raf1: m <= n,
        raf2: same_ext && !raf2_witnesses(e, f).is_empty(),
        raf3: (1..n).any(new),
        raft: (1..n).all(|j| !new(j)),
        rafg: (1..n).all(|j| !new(j) || lat.galois(e[j], e[j - 1])),
    }
}

fn names(ctx: &GaloisContext, fs: &[FieldRef]) -> Vec<String> {
    fs.iter().map(|&f| ctx.name(f)).collect()
}

/// Compares one pair of towers against the towers-module predicates.
fn compare_refinement(lat: &Lattice<'_>, report: &mut OracleReport, e: &[FieldRef], f: &[FieldRef]) {
    let ctx = lat.ctx;
    let te = Tower::new(ctx, e.to_vec()).expect("enumerated chains are towers");
    let tf = Tower::new(ctx, f.to_vec()).expect("enumerated chains are towers");
    let lit = raf_values(lat, e, f);
    let is_ref = lit.raf1 && lit.raf2;
    let witness = refinement_witness(&te, &tf);
    let cx = |what: &str| json!({"E": names(ctx, e), "F": names(ctx, f), "literal": lit, "disagrees_on": what});
    report.check(lit.raf1 || !lit.raf2, || cx("RAF1 implied by RAF2"));
    report.check(witness.is_some() == is_ref, || cx("refinement"));
    if let Some(w) = &witness {
        let ok = w.indices.len() == f.len()
            && w.indices.windows(2).all(|p| p[0] < p[1])
            && w.indices.iter().zip(f).all(|(&j, &fi)| e.get(j) == Some(&fi));
        report.check(ok, || cx("refinement witness"));
    }
    if is_ref {
        report.check(is_proper_refinement(&te, &tf).ok() == Some(lit.raf3), || cx("RAF3"));
        report.check(is_trivial_refinement(&te, &tf).ok() == Some(lit.raft), || cx("RAFT"));
        report.check(is_galois_refinement(&te, &tf).ok() == Some(lit.rafg), || cx("RAFG"));
    } else {
        report.check(is_proper_refinement(&te, &tf).is_err(), || cx("non-refinement accepted"));
    }
}

/// Evenly spaced selection of at most `cap` items, always keeping the ends.
fn spread<T: Clone>(items: &[T], cap: usize) -> Vec<T> {
    if items.len() <= cap {
        return items.to_vec();
    }
    (0..cap)
        .map(|i| items[i * (items.len() - 1) / (cap - 1)].clone())
        .collect()
}

/// Literal RAF1/RAF2/RAF3/RAFT/RAFG evaluation against the towers module,
/// over towers of `K/K`, `L/K` and `N/K` (L the distinguished field) of
/// height at most `max_height`. Every tower is paired with a spread of other
/// towers of the same extension and with each of its own sub-towers.
pub fn bf_refinement_predicates(ctx: &GaloisContext, instance: &str, max_height: usize) -> Result<OracleReport> {
    let lat = Lattice::new(ctx)?;
    let mut report = OracleReport::new(instance, "refinement_predicates");
    let base = ctx.base();
    let mut tops = vec![base, ctx.distinguished(), ctx.top_closure()];
    tops.dedup();
    for top in tops {
        let all = towers_up_to(&lat, base, top, max_height);
        let sample = spread(&all, REFINEMENT_TOWER_CAP);
        for e in &sample {
            for f in &sample {
                compare_refinement(&lat, &mut report, e, f);
            }
            let n = e.len();
            for mask in 0u32..(1 << n) {
                let f: Vec<FieldRef> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).collect();
                if f.first() == Some(&base) && f.last() == Some(&top) {
                    compare_refinement(&lat, &mut report, e, &f);
                }
            }
        }
    }
    Ok(report)
}

/// Every nested pair `(upper, lower)` of the context.
fn nested_pairs(lat: &Lattice<'_>) -> Vec<(FieldRef, FieldRef)> {
    let ctx = lat.ctx;
    ctx.fields()
        .flat_map(|u| ctx.fields().map(move |l| (u, l)))
        .filter(|&(u, l)| lat.le(l, u))
        .collect()
}

fn pair_json(ctx: &GaloisContext, upper: FieldRef, lower: FieldRef) -> Value {
    json!({"upper": ctx.name(upper), "lower": ctx.name(lower)})
}

pub fn galtourable_report(lat: &Lattice<'_>, instance: &str) -> OracleReport {
    let ctx = lat.ctx;
    let mut r = OracleReport::new(instance, "is_galtourable");
    for (u, l) in nested_pairs(lat) {
        let main = is_galtourable(ctx, u, l).ok();
        r.check(main == Some(lat.galtourable(u, l)), || pair_json(ctx, u, l));
    }
    r
}

pub fn galsimple_report(lat: &Lattice<'_>, instance: &str) -> OracleReport {
    let ctx = lat.ctx;
    let mut r = OracleReport::new(instance, "is_galsimple");
    for (u, l) in nested_pairs(lat) {
        let main = is_galsimple(ctx, u, l).ok();
        r.check(main == Some(lat.galsimple(u, l)), || pair_json(ctx, u, l));
    }
    r
}

/// `M(L/K)` for every `L`, with `K` the base, plus every `K` below the
/// distinguished field; the oracle must find exactly one candidate.
pub fn intourability_report(lat: &Lattice<'_>, instance: &str) -> OracleReport {
    let ctx = lat.ctx;
    let mut r = OracleReport::new(instance, "intourability");
    let base = ctx.base();
    let dist = ctx.distinguished();
    let pairs = ctx
        .fields()
        .map(|l| (l, base))
        .chain(ctx.fields().filter(|&k| lat.le(k, dist)).map(|k| (dist, k)));
    let mut seen = HashSet::new();
    for (l, k) in pairs {
        if !seen.insert((l, k)) {
            continue;
        }
        let cands = intourability_candidates(lat, l, k);
        match (intourability_field(ctx, l, k), cands.as_slice()) {
            (Ok(rep), [m]) if rep.m == *m => r.check(true, || Value::Null),
            (main, _) => r.fail(json!({
                "L": ctx.name(l),
                "K": ctx.name(k),
                "main": main.map(|rep| ctx.name(rep.m)).map_err(|e| e.to_string()),
                "oracle": names(ctx, &cands),
            })),
        }
    }
    r
}

/// Per-question tallies of the galtourable-quadrilateral scan.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QuestionTally {
    pub tested: usize,
    pub negative: usize,
    /// Negative answers on quadrilaterals that are Galois parallelograms.
    pub negative_on_parallelograms: usize,
    pub first_counterexample: Option<Value>,
}

impl QuestionTally {
    fn record(&mut self, holds: bool, parallelogram: bool, witness: impl FnOnce() -> Value) {
        self.tested += 1;
        if !holds {
            self.negative += 1;
            self.negative_on_parallelograms += usize::from(parallelogram);
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(witness());
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QuestionScan {
    pub instance: String,
    pub quadrilaterals: usize,
    pub parallelograms: usize,
    /// `J ≤ F ≤ L ⟹ KF ∩ L = F`
    pub q1: QuestionTally,
    /// `K ≤ E ≤ N ⟹ E/(E ∩ L)` galtourable
    pub q2_1: QuestionTally,
    /// `E/K` galtourable `⟹ K(E ∩ L) = E`
    pub q2_2_1: QuestionTally,
    /// `E/K` galtourable `⟹ (E ∩ L)/J` galtourable
    pub q2_2_2: QuestionTally,
}

impl QuestionScan {
    /// No negative answer on a Galois parallelogram, where all answers are
    /// known to be affirmative.
    pub fn parallelogram_case_holds(&self) -> bool {
        [&self.q1, &self.q2_1, &self.q2_2_1, &self.q2_2_2]
            .iter()
            .all(|t| t.negative_on_parallelograms == 0)
    }

    pub fn report(&self) -> OracleReport {
        let mut r = OracleReport::new(&self.instance, "quadrilateral_questions");
        r.checked = self.q1.tested + self.q2_1.tested + self.q2_2_1.tested + self.q2_2_2.tested;
        r.mismatches = self.q1.negative + self.q2_1.negative + self.q2_2_1.negative + self.q2_2_2.negative;
        r.agreement = r.mismatches == 0;
        if !r.agreement {
            r.counterexample = Some(serde_json::to_value(self).expect("scan serialises"));
        }
        r
    }
}

/// Tests the open questions on galtourable quadrilaterals `(J, K, N, L)`
/// over every such quadrilateral of the context. Negative answers are data,
/// not errors.
pub fn quadrilateral_question_scan(ctx: &GaloisContext, instance: &str) -> Result<QuestionScan> {
    let lat = Lattice::new(ctx)?;
    let mut scan = QuestionScan {
        instance: instance.to_string(),
        ..Default::default()
    };
    let fields: Vec<FieldRef> = ctx.fields().collect();
    let mut comp = HashMap::new();
    let mut inter = HashMap::new();
    let mut compositum = |a: FieldRef, b: FieldRef| *comp.entry((a, b)).or_insert_with(|| lat.compositum(a, b));
    let mut intersection = |a: FieldRef, b: FieldRef| *inter.entry((a, b)).or_insert_with(|| lat.intersection(a, b));
    for &k in &fields {
        for &l in &fields {
            let j = intersection(k, l);
            let n = compositum(k, l);
            let sides = [(k, j), (n, k), (n, l), (l, j)];
            if !sides.iter().all(|&(u, d)| lat.galtourable(u, d)) {
                continue;
            }
            scan.quadrilaterals += 1;
            let para = lat.galois(k, j) && lat.galois(l, j);
            scan.parallelograms += usize::from(para);
            let quad = || json!({"J": ctx.name(j), "K": ctx.name(k), "N": ctx.name(n), "L": ctx.name(l)});
            for f in lat.between(j, l) {
                let kf = compositum(k, f);
                let holds = intersection(kf, l) == f;
                scan.q1.record(holds, para, || json!({"quadrilateral": quad(), "F": ctx.name(f)}));
            }
            for e in lat.between(k, n) {
                let el = intersection(e, l);
                let w = || json!({"quadrilateral": quad(), "E": ctx.name(e)});
                scan.q2_1.record(lat.galtourable(e, el), para, w);
                if lat.galtourable(e, k) {
                    scan.q2_2_1.record(compositum(k, el) == e, para, w);
                    scan.q2_2_2.record(lat.galtourable(el, j), para, w);
                }
            }
        }
    }
    Ok(scan)
}

/// Operations compared in the agreement matrix.
pub const MATRIX_OPERATIONS: &[&str] = &["is_galtourable", "is_galsimple", "refinement_predicates", "intourability"];

/// Runs every oracle comparison on one loaded context.
pub fn instance_reports(ctx: &GaloisContext, instance: &str, max_height: usize) -> Result<Vec<OracleReport>> {
    let lat = Lattice::new(ctx)?;
    Ok(vec![
        galtourable_report(&lat, instance),
        galsimple_report(&lat, instance),
        bf_refinement_predicates(ctx, instance, max_height)?,
        intourability_report(&lat, instance),
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AgreementMatrix {
    pub reports: Vec<OracleReport>,
}

impl AgreementMatrix {
    pub fn all_agree(&self) -> bool {
        self.reports.iter().all(|r| r.agreement)
    }

    pub fn disagreements(&self) -> impl Iterator<Item = &OracleReport> {
        self.reports.iter().filter(|r| !r.agreement)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "all_agree": self.all_agree(),
            "operations": MATRIX_OPERATIONS,
            "reports": self.reports,
        })
    }
}

/// The agreement matrix over the given instances, in the given order.
/// A load failure or oracle error on any instance is returned as an error.
pub fn agreement_matrix(
    selectors: &[&str],
    bounds: crate::permgroup::Bounds,
    max_height: usize,
    exec: Exec,
) -> Result<AgreementMatrix> {
    let per_instance = par::map(exec, selectors, |s| {
        let ctx = presets::load(s, bounds)?;
        instance_reports(&ctx, s, max_height)
    });
    let mut reports = Vec::new();
    for r in per_instance {
        reports.extend(r?);
    }
    Ok(AgreementMatrix { reports })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::Bounds;
    use crate::towers::equivalence_witness;

    fn load(s: &str) -> GaloisContext {
        presets::load(s, Bounds::default()).unwrap()
    }

    #[test]
    fn sixth_root_of_two() {
        let c = load("radical:a=2,n=6");
        let l = c.field("Q(6rt2)").unwrap();
        assert!(!bf_galtourable(&c, l, c.base()).unwrap());
        let (m, count) = bf_intourability(&c, l, c.base()).unwrap();
        assert_eq!((c.name(m).as_str(), count), ("Q(sqrt2)", 1));
        let lat = Lattice::new(&c).unwrap();
        let sq = c.field("Q(sqrt2)").unwrap();
        assert!(lat.galois(sq, c.base()) && lat.galtourable(sq, c.base()));
    }

    #[test]
    fn galtourable_and_simple_cases() {
        let c = load("radical:a=2,n=4");
        let l = c.field("Q(4rt2)").unwrap();
        assert_eq!(bf_intourability(&c, l, c.base()).unwrap(), (l, 1));
        let c = load("radical:a=2,n=9");
        let l = c.field("Q(9rt2)").unwrap();
        assert_eq!(bf_intourability(&c, l, c.base()).unwrap(), (c.base(), 1));
    }

    #[test]
    fn composition_tower_counts() {
        let c = load("group:V4");
        let towers = bf_composition_towers(&c, c.top_closure(), c.base()).unwrap();
        assert_eq!(towers.len(), 3);
        for a in &towers {
            for b in &towers {
                assert!(equivalence_witness(a, b).unwrap().is_some());
            }
        }
        let c = load("group:A5");
        let towers = bf_composition_towers(&c, c.top_closure(), c.base()).unwrap();
        assert_eq!(towers.len(), 1);
        assert_eq!(towers[0].height(), 1);
        let c = load("group:C4");
        let towers = bf_composition_towers(&c, c.top_closure(), c.base()).unwrap();
        assert_eq!(towers.len(), 1);
        assert_eq!(towers[0].height(), 2);
    }

    #[test]
    fn raf_literal_values() {
        let c = load("radical:a=2,n=4");
        let lat = Lattice::new(&c).unwrap();
        let (q, s, r) = (c.base(), c.field("Q(sqrt2)").unwrap(), c.field("Q(4rt2)").unwrap());
        let v = raf_values(&lat, &[q, s, r], &[q, r]);
        assert!(v.raf1 && v.raf2 && v.raf3 && !v.raft && v.rafg);
        let v = raf_values(&lat, &[q, q, r], &[q, r]);
        assert!(v.raf2 && !v.raf3 && v.raft);
        let v = raf_values(&lat, &[q, r], &[q, s, r]);
        assert!(!v.raf1 && !v.raf2);
        assert_eq!(raf2_witnesses(&[q, q, r], &[q, r]).len(), 2);
    }

    #[test]
    fn small_matrix_agrees() {
        let m = agreement_matrix(&["group:S3", "radical:a=2,n=6", "group:Q8"], Bounds::default(), 3, Exec::Sequential)
            .unwrap();
        assert_eq!(m.reports.len(), 12);
        for r in &m.reports {
            assert!(r.agreement, "{r:?}");
            assert!(r.checked > 0);
            assert!(r.counterexample.is_none());
        }
    }

    #[test]
    fn trivial_scan_is_vacuous_and_parallelograms_pass() {
        let c = load("group:trivial");
        let s = quadrilateral_question_scan(&c, "group:trivial").unwrap();
        assert_eq!(s.quadrilaterals, 1);
        assert!(s.report().agreement);
        let c = load("radical:a=2,n=6");
        let s = quadrilateral_question_scan(&c, "radical:a=2,n=6").unwrap();
        assert!(s.parallelograms > 0);
        assert!(s.parallelogram_case_holds());
    }
}
