//! Galtourability, galsimplicity and the intourability field, together with
//! the constructive refinement theorems built on them.
//!
//! Everything is decided on the group side. An extension `E/F` is
//! galtourable exactly when `Gal(N/E)` is subnormal in `Gal(N/F)`, and the
//! intourability field `M(L/K)` is the fixed field of the subnormal closure
//! of `Gal(N/L)` in `Gal(N/K)`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::galois::{FieldRef, GaloisContext, Quadrilateral};
use crate::permgroup::Subgroup;
use crate::towers::{equivalence_witness, refinement_witness, EquivalenceWitness, Tower};

fn check_le(ctx: &GaloisContext, lower: FieldRef, upper: FieldRef) -> Result<()> {
    // degree() carries the nesting check and its error message
    ctx.degree(upper, lower).map(|_| ())
}

pub fn is_galtourable(ctx: &GaloisContext, e: FieldRef, f: FieldRef) -> Result<bool> {
    check_le(ctx, f, e)?;
    let (closure, _) = ctx.subgroup(e).subnormal_closure(ctx.subgroup(f))?;
    Ok(closure == *ctx.subgroup(e))
}

/// A strict Galois tower from `f` to `e`, read off the chain of iterated
/// normal closures.
pub fn galois_tower_witness<'c>(ctx: &'c GaloisContext, e: FieldRef, f: FieldRef) -> Result<Tower<'c>> {
    check_le(ctx, f, e)?;
    let (closure, chain) = ctx.subgroup(e).subnormal_closure(ctx.subgroup(f))?;
    if closure != *ctx.subgroup(e) {
        return Err(Error::NotGaltourable(format!("{} / {}", ctx.name(e), ctx.name(f))));
    }
    let fields = chain.iter().map(|s| ctx.field_of(s)).collect::<Result<_>>()?;
    let t = Tower::new(ctx, fields)?;
    if !t.is_strict() || !t.is_galois_tower() {
        return Err(Error::TheoremViolation(format!(
            "normal-closure chain {t:?} is not a strict Galois tower"
        )));
    }
    Ok(t)
}

/// `E ≠ F` with no field strictly between.
pub fn is_simple_ext(ctx: &GaloisContext, e: FieldRef, f: FieldRef) -> Result<bool> {
    check_le(ctx, f, e)?;
    Ok(e != f && ctx.interval(f, e).len() == 2)
}

/// `E ≠ F` with no `F < M < E` such that `M/F` is Galois.
pub fn is_galsimple(ctx: &GaloisContext, e: FieldRef, f: FieldRef) -> Result<bool> {
    check_le(ctx, f, e)?;
    if e == f {
        return Ok(false);
    }
    let outer = ctx.subgroup(f);
    Ok(ctx
        .interval(f, e)
        .into_iter()
        .filter(|&m| m != e && m != f)
        .all(|m| !ctx.subgroup(m).is_normal_in_unchecked(outer)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TourabilityDegree {
    pub gal: usize,
    pub int: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubKind {
    Trivial,
    GalsimpleNonGalois,
}

impl SubKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SubKind::Trivial => "trivial",
            SubKind::GalsimpleNonGalois => "galsimple_non_galois",
        }
    }
}

/// `M(L/K)` with the verified splitting of `L/K` into a galtourable part
/// `M/K` and a trivial or galsimple non-Galois remainder `L/M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DissociationReport {
    pub m: FieldRef,
    pub degrees: TourabilityDegree,
    pub quotient_is_galtourable: bool,
    pub sub_kind: SubKind,
    /// A strict Galois tower of `M/K`.
    pub witness_tower: Vec<FieldRef>,
}

impl DissociationReport {
    pub fn to_json(&self, ctx: &GaloisContext) -> Value {
        json!({
            "M": ctx.name(self.m),
            "deg_gal": self.degrees.gal,
            "deg_int": self.degrees.int,
            "sub_kind": self.sub_kind.as_str(),
            "witness_tower": self.witness_tower.iter().map(|&f| ctx.name(f)).collect::<Vec<_>>(),
        })
    }
}

/// Computes `M(L/K)` and re-checks both defining conditions. A failed check
/// is reported as [`Error::TheoremViolation`].
pub fn intourability_field(ctx: &GaloisContext, l: FieldRef, k: FieldRef) -> Result<DissociationReport> {
    check_le(ctx, k, l)?;
    let (closure, _) = ctx.subgroup(l).subnormal_closure(ctx.subgroup(k))?;
    let m = ctx.field_of(&closure)?;
    let witness = galois_tower_witness(ctx, m, k)
        .map_err(|e| Error::TheoremViolation(format!("M/K is not galtourable: {e}")))?;
    let sub_kind = if m == l {
        SubKind::Trivial
    } else if is_galsimple(ctx, l, m)? && !ctx.is_galois(l, m)? {
        SubKind::GalsimpleNonGalois
    } else {
        return Err(Error::TheoremViolation(format!(
            "{} / {} is neither trivial nor galsimple non-Galois",
            ctx.name(l),
            ctx.name(m)
        )));
    };
    Ok(DissociationReport {
        m,
        degrees: TourabilityDegree {
            gal: ctx.degree(m, k)?,
            int: ctx.degree(l, m)?,
        },
        quotient_is_galtourable: true,
        sub_kind,
        witness_tower: witness.fields().to_vec(),
    })
}

/// `Gal(N/F₀) ⊇ Gal(N/F₁) ⊇ … ⊇ Gal(N/F_m)`, each normal in the previous.
pub fn series_from_tower(t: &Tower<'_>) -> Result<Vec<Subgroup>> {
    t.require_galois()?;
    let ctx = t.ctx();
    if !ctx.is_galois(t.top(), t.base())? {
        return Err(Error::NotGalois(format!(
            "{} / {}",
            ctx.name(t.top()),
            ctx.name(t.base())
        )));
    }
    Ok(t.fields().iter().map(|&f| ctx.subgroup(f).clone()).collect())
}

/// Inverse of [`series_from_tower`].
pub fn tower_from_series<'c>(ctx: &'c GaloisContext, chain: &[Subgroup]) -> Result<Tower<'c>> {
    if chain.is_empty() {
        return Err(Error::InvalidTower("empty series".into()));
    }
    for (i, w) in chain.windows(2).enumerate() {
        if !w[1].is_normal_in(&w[0])? {
            return Err(Error::NotNormal(format!("step {} of the series", i + 1)));
        }
    }
    let fields = chain.iter().map(|s| ctx.field_of(s)).collect::<Result<_>>()?;
    Tower::new(ctx, fields)
}

/// Output of the Galois analogue of Schreier's refinement theorem.
#[derive(Clone, Debug)]
pub struct SchreierRefinement<'c> {
    pub refined1: Tower<'c>,
    pub refined2: Tower<'c>,
    pub witness: EquivalenceWitness,
}

/// `σ(l) = r·m + q + 1` where `l − 1 = q·n + r`, `0 ≤ r < n`.
pub fn schreier_sigma(m: usize, n: usize) -> Vec<usize> {
    (1..=m * n)
        .map(|l| {
            let (q, r) = ((l - 1) / n, (l - 1) % n);
            r * m + q + 1
        })
        .collect()
}

fn require_same_extension(t1: &Tower<'_>, t2: &Tower<'_>) -> Result<()> {
    if !std::ptr::eq(t1.ctx(), t2.ctx()) || t1.base() != t2.base() || t1.top() != t2.top() {
        return Err(Error::Precondition("towers are not towers of the same extension".into()));
    }
    if t1.height() == 0 || t2.height() == 0 {
        return Err(Error::Precondition("towers must have height at least 1".into()));
    }
    t1.require_galois()?;
    t2.require_galois()
}

/// The two quadrilateral families whose Galois-ness replaces the butterfly
/// lemma: every member must be a parallelogram.
pub fn butterfly_check(t1: &Tower<'_>, t2: &Tower<'_>) -> Result<bool> {
    require_same_extension(t1, t2)?;
    let ctx = t1.ctx();
    let (a, b) = (t1.fields(), t2.fields());
    let (m, n) = (t1.height(), t2.height());
    let cm = |x, y| ctx.compositum(x, y);
    let it = |x, y| ctx.intersect_fields(x, y);
    let is_para = |j, k, nn, l| {
        Quadrilateral::new(ctx, j, k, nn, l)
            .map(|q| crate::galois::is_parallelogram(ctx, &q))
            .unwrap_or(false)
    };
    for i in 0..m {
        for j in 0..n {
            for k in 0..j {
                let ok = is_para(
                    it(cm(a[i + 1], b[k]), cm(a[i], b[j])),
                    it(cm(a[i + 1], b[k + 1]), cm(a[i], b[j])),
                    it(cm(a[i + 1], b[k + 1]), cm(a[i], b[j + 1])),
                    it(cm(a[i + 1], b[k]), cm(a[i], b[j + 1])),
                );
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    for i in 0..m {
        for k in 0..i {
            for j in 0..n {
                let ok = is_para(
                    it(cm(a[k], b[j + 1]), cm(a[i], b[j])),
                    it(cm(a[k + 1], b[j + 1]), cm(a[i], b[j])),
                    it(cm(a[k + 1], b[j + 1]), cm(a[i + 1], b[j])),
                    it(cm(a[k], b[j + 1]), cm(a[i + 1], b[j])),
                );
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Refines two Galois towers of one extension into equivalent Galois
/// towers of height `m·n`:
///
/// ```text
/// T'¹_l = T¹_{q+1} ∩ T¹_q T²_r   with l = q·n + r
/// T'²_l = T²_{q+1} ∩ T¹_r T²_q   with l = q·m + r
/// ```
///
/// The marche isomorphisms are found by search; their existence is the
/// content of the theorem, so a missing one is a theorem violation.
pub fn schreier_refine<'c>(t1: &Tower<'c>, t2: &Tower<'c>) -> Result<SchreierRefinement<'c>> {
    require_same_extension(t1, t2)?;
    let ctx = t1.ctx();
    let (a, b) = (t1.fields(), t2.fields());
    let (m, n) = (t1.height(), t2.height());
    let mut f1 = Vec::with_capacity(m * n + 1);
    let mut f2 = Vec::with_capacity(m * n + 1);
    for l in 0..m * n {
        let (q, r) = (l / n, l % n);
        f1.push(ctx.intersect_fields(a[q + 1], ctx.compositum(a[q], b[r])));
        let (q, r) = (l / m, l % m);
        f2.push(ctx.intersect_fields(b[q + 1], ctx.compositum(a[r], b[q])));
    }
    f1.push(t1.top());
    f2.push(t2.top());
    let violation = |what: String| Error::TheoremViolation(what);
    let r1 = Tower::new(ctx, f1).map_err(|e| violation(format!("first refinement: {e}")))?;
    let r2 = Tower::new(ctx, f2).map_err(|e| violation(format!("second refinement: {e}")))?;
    for (r, t, step) in [(&r1, t1, n), (&r2, t2, m)] {
        if !r.is_galois_tower() {
            return Err(violation(format!("{r:?} is not a Galois tower")));
        }
        let expected: Vec<usize> = (0..=t.height()).map(|i| i * step).collect();
        let ok = (0..=t.height()).all(|i| r.fields()[expected[i]] == t.fields()[i]);
        if !ok || refinement_witness(r, t).is_none() {
            return Err(violation(format!("{r:?} does not refine {t:?}")));
        }
    }
    let sigma = schreier_sigma(m, n);
    let g1 = r1.marche_groups()?;
    let g2 = r2.marche_groups()?;
    let bound = ctx.bounds().isomorphism;
    let mut isos = Vec::with_capacity(sigma.len());
    for (l, &s) in sigma.iter().enumerate() {
        let (x, y) = (&g1[l], &g2[s - 1]);
        let iso = if x == y {
            Some(crate::permgroup::Isomorphism {
                images: (0..x.order() as u32).collect(),
            })
        } else {
            crate::permgroup::are_isomorphic(x, y, bound)?
        };
        isos.push(iso.ok_or_else(|| {
            violation(format!("marche {} and its σ-image {s} are not isomorphic", l + 1))
        })?);
    }
    Ok(SchreierRefinement {
        refined1: r1,
        refined2: r2,
        witness: EquivalenceWitness { sigma, isos },
    })
}

/// [`schreier_refine`] followed by passing to the strict associated towers.
pub fn schreier_refine_strict<'c>(t1: &Tower<'c>, t2: &Tower<'c>) -> Result<SchreierRefinement<'c>> {
    let full = schreier_refine(t1, t2)?;
    let s1 = full.refined1.strict_associated();
    let s2 = full.refined2.strict_associated();
    let witness = equivalence_witness(&s1, &s2)?.ok_or_else(|| {
        Error::TheoremViolation("strict associated towers are not equivalent".into())
    })?;
    Ok(SchreierRefinement {
        refined1: s1,
        refined2: s2,
        witness,
    })
}

/// Strict Galois tower whose marches are all galsimple.
pub fn is_composition_tower_galois(t: &Tower<'_>) -> Result<bool> {
    t.require_galois()?;
    let ctx = t.ctx();
    for (a, b) in t.marches() {
        if !is_galsimple(ctx, b, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Refines the Galois marche `upper/lower` through a composition series of
/// its group, each step taking the least (in canonical subgroup order)
/// maximal normal subgroup. Returns the fields strictly after `lower`.
fn composition_steps(ctx: &GaloisContext, lower: FieldRef, upper: FieldRef) -> Vec<FieldRef> {
    let mut out = Vec::new();
    let mut cur = lower;
    while cur != upper {
        // Fields cur < M ≤ upper with M/cur Galois, in canonical subgroup
        // order; the first minimal one is the least maximal normal subgroup.
        let outer = ctx.subgroup(cur);
        let normal: Vec<FieldRef> = ctx
            .interval(cur, upper)
            .into_iter()
            .filter(|&m| m != cur && ctx.subgroup(m).is_normal_in_unchecked(outer))
            .collect();
        let next = normal
            .iter()
            .copied()
            .find(|&m| !normal.iter().any(|&x| x != m && ctx.lt(x, m)))
            .expect("upper itself is normal over cur");
        out.push(next);
        cur = next;
    }
    out
}

/// A composition tower refining the strict Galois tower `t`.
pub fn galjordanholder_refine<'c>(t: &Tower<'c>) -> Result<Tower<'c>> {
    t.require_galois()?;
    if !t.is_strict() {
        return Err(Error::Precondition(format!("{t:?} is not strict")));
    }
    let ctx = t.ctx();
    let mut fields = vec![t.base()];
    for (a, b) in t.marches() {
        fields.extend(composition_steps(ctx, a, b));
    }
    let out = Tower::new(ctx, fields)?;
    if !is_composition_tower_galois(&out)? || refinement_witness(&out, t).is_none() {
        return Err(Error::TheoremViolation(format!(
            "{out:?} is not a composition tower refining {t:?}"
        )));
    }
    Ok(out)
}

pub fn composition_tower_galois<'c>(ctx: &'c GaloisContext, l: FieldRef, k: FieldRef) -> Result<Tower<'c>> {
    galjordanholder_refine(&galois_tower_witness(ctx, l, k)?)
}

/// The tower of intourability fields `M(F_i/F₀)` and its induced tower up
/// to the top of `f`.
pub fn elevation_tower<'c>(ctx: &'c GaloisContext, f: &Tower<'c>) -> Result<(Tower<'c>, Tower<'c>)> {
    let k = f.base();
    let l = f.top();
    let ml = intourability_field(ctx, l, k)?.m;
    let mut ms = Vec::with_capacity(f.fields().len());
    for &fi in f.fields() {
        let mi = intourability_field(ctx, fi, k)?.m;
        if !ctx.le(mi, ctx.intersect_fields(fi, ml)) {
            return Err(Error::TheoremViolation(format!(
                "M({}/K) is not contained in {} ∩ M(L/K)",
                ctx.name(fi),
                ctx.name(fi)
            )));
        }
        ms.push(mi);
    }
    let elevation = Tower::new(ctx, ms)
        .map_err(|e| Error::TheoremViolation(format!("elevation tower is not monotone: {e}")))?;
    if !elevation.is_galtourable_tower() {
        return Err(Error::TheoremViolation(format!("{elevation:?} is not galtourable")));
    }
    let induced = elevation.induced(l)?;
    Ok((elevation, induced))
}

/// The part of `c` living in `M(L/K)`: `c` itself when `L/K` is
/// galtourable, otherwise `c` without its final `L`. `None` when `c` does
/// not have that shape.
fn m_prefix<'c>(ctx: &'c GaloisContext, c: &Tower<'c>) -> Result<Option<Tower<'c>>> {
    let (k, l) = (c.base(), c.top());
    let m = intourability_field(ctx, l, k)?.m;
    if m == l {
        return Ok(Some(c.clone()));
    }
    if c.height() == 0 {
        return Ok(None);
    }
    let prefix = c.rat(c.height() - 1)?;
    Ok((prefix.top() == m).then_some(prefix))
}

/// Whether `c` is induced by a composition tower of `M(L/K)/K`.
pub fn is_composition_tower(ctx: &GaloisContext, c: &Tower<'_>) -> Result<bool> {
    let c = Tower::new(ctx, c.fields().to_vec())?;
    match m_prefix(ctx, &c)? {
        Some(p) if p.is_galois_tower() => is_composition_tower_galois(&p),
        _ => Ok(false),
    }
}

pub fn composition_tower_general<'c>(ctx: &'c GaloisContext, l: FieldRef, k: FieldRef) -> Result<Tower<'c>> {
    let m = intourability_field(ctx, l, k)?.m;
    let t = composition_tower_galois(ctx, m, k)?.induced(l)?;
    if !is_composition_tower(ctx, &t)? {
        return Err(Error::TheoremViolation(format!("{t:?} is not a composition tower")));
    }
    Ok(t)
}

/// Equivalence of towers induced from Galois towers of `M(L/K)/K`, decided
/// on those Galois prefixes.
pub fn equivalence_general<'c>(
    ctx: &'c GaloisContext,
    c1: &Tower<'c>,
    c2: &Tower<'c>,
) -> Result<Option<EquivalenceWitness>> {
    if c1.base() != c2.base() || c1.top() != c2.top() {
        return Err(Error::Precondition("towers of different extensions".into()));
    }
    let p1 = m_prefix(ctx, c1)?;
    let p2 = m_prefix(ctx, c2)?;
    match (p1, p2) {
        (Some(p1), Some(p2)) if p1.is_galois_tower() && p2.is_galois_tower() => {
            equivalence_witness(&p1, &p2)
        }
        _ => Err(Error::Precondition(
            "towers are not induced by Galois towers of M(L/K)/K".into(),
        )),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GalsimpleLawsReport {
    /// Triples `(F₀, F₁, F₂)` examined.
    pub triples: usize,
    pub violations: Vec<String>,
}

/// Exhaustively checks, over all fields `F₀ ≤ F₁ ≤ F₂`:
/// proper quotients of a galsimple extension are galsimple non-Galois, and
/// galsimple non-Galois extensions compose.
pub fn galsimple_laws_check(ctx: &GaloisContext) -> GalsimpleLawsReport {
    let mut report = GalsimpleLawsReport::default();
    let gsng = |e, f| is_galsimple(ctx, e, f).unwrap() && !ctx.is_galois(e, f).unwrap();
    for f0 in ctx.fields() {
        for f2 in ctx.fields().filter(|&x| ctx.le(f0, x)) {
            let gs = is_galsimple(ctx, f2, f0).unwrap();
            for f1 in ctx.interval(f0, f2) {
                report.triples += 1;
                if gs && f1 != f0 && f1 != f2 && !gsng(f1, f0) {
                    report.violations.push(format!(
                        "{} / {} is a proper quotient of the galsimple {} / {} but not galsimple non-Galois",
                        ctx.name(f1),
                        ctx.name(f0),
                        ctx.name(f2),
                        ctx.name(f0)
                    ));
                }
                if f1 != f0 && f1 != f2 && gsng(f1, f0) && gsng(f2, f1) && !gsng(f2, f0) {
                    report.violations.push(format!(
                        "{} / {} / {}: galsimple non-Galois steps compose to something else",
                        ctx.name(f2),
                        ctx.name(f1),
                        ctx.name(f0)
                    ));
                }
            }
        }
    }
    report
}
