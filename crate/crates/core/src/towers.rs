//! Towers of intermediate fields and the refinement calculus on them.
//!
//! A tower is a non-decreasing sequence `F₀ ≤ F₁ ≤ … ≤ F_m` of fields of one
//! [`GaloisContext`]; repetitions are allowed and the height is `m`. Two
//! towers are equal only when they agree field by field.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::dissociation;
use crate::error::{Error, Result};
use crate::galois::{FieldRef, GaloisContext};
use crate::permgroup::{are_isomorphic, AbstractGroup, Isomorphism};

#[derive(Clone)]
pub struct Tower<'c> {
    ctx: &'c GaloisContext,
    fields: Vec<FieldRef>,
}

impl PartialEq for Tower<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.ctx, other.ctx) && self.fields == other.fields
    }
}

impl Eq for Tower<'_> {}

impl std::hash::Hash for Tower<'_> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.fields.hash(state);
    }
}

impl fmt::Debug for Tower<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

/// Indices `j₀ < j₁ < … < j_m` with `E_{j_i} = F_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementWitness {
    pub indices: Vec<usize>,
}

/// A bijection `σ` between the marches of two towers of equal height with
/// an isomorphism `Gal(F_i/F_{i−1}) → Gal(E_{σ(i)}/E_{σ(i)−1})` per marche.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceWitness {
    /// `sigma[i − 1] = σ(i)`, 1-based on both sides.
    pub sigma: Vec<usize>,
    pub isos: Vec<Isomorphism>,
}

impl EquivalenceWitness {
    pub fn identity(height: usize, groups: &[AbstractGroup]) -> Self {
        EquivalenceWitness {
            sigma: (1..=height).collect(),
            isos: groups
                .iter()
                .map(|g| Isomorphism {
                    images: (0..g.order() as u32).collect(),
                })
                .collect(),
        }
    }

    /// One-line image notation, e.g. `1 3 5 2 4 6`.
    pub fn sigma_line(&self) -> String {
        self.sigma
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Re-checks `σ` and every isomorphism against both towers' quotients.
    pub fn verify(&self, t1: &Tower<'_>, t2: &Tower<'_>) -> Result<bool> {
        let m = t1.height();
        if t2.height() != m || self.sigma.len() != m || self.isos.len() != m {
            return Ok(false);
        }
        let mut seen = vec![false; m];
        for &s in &self.sigma {
            if s == 0 || s > m || std::mem::replace(&mut seen[s - 1], true) {
                return Ok(false);
            }
        }
        let g1 = t1.marche_groups()?;
        let g2 = t2.marche_groups()?;
        Ok((0..m).all(|i| g1[i].verify_isomorphism(&g2[self.sigma[i] - 1], &self.isos[i])))
    }
}

impl<'c> Tower<'c> {
    /// Any non-empty non-decreasing sequence of fields.
    pub fn new(ctx: &'c GaloisContext, fields: Vec<FieldRef>) -> Result<Self> {
        if fields.is_empty() {
            return Err(Error::InvalidTower("a tower has at least one field".into()));
        }
        for (i, w) in fields.windows(2).enumerate() {
            if !ctx.le(w[0], w[1]) {
                return Err(Error::InvalidTower(format!(
                    "position {}: {} is not contained in {}",
                    i + 1,
                    ctx.name(w[0]),
                    ctx.name(w[1])
                )));
            }
        }
        Ok(Tower { ctx, fields })
    }

    /// A tower of `top/base`.
    pub fn make(ctx: &'c GaloisContext, fields: Vec<FieldRef>, base: FieldRef, top: FieldRef) -> Result<Self> {
        let t = Self::new(ctx, fields)?;
        if t.base() != base || t.top() != top {
            return Err(Error::InvalidTower(format!(
                "tower runs from {} to {}, expected {} to {}",
                ctx.name(t.base()),
                ctx.name(t.top()),
                ctx.name(base),
                ctx.name(top)
            )));
        }
        Ok(t)
    }

    pub fn from_names(ctx: &'c GaloisContext, names: &[&str]) -> Result<Self> {
        let fields = names.iter().map(|n| ctx.field(n)).collect::<Result<_>>()?;
        Self::new(ctx, fields)
    }

    /// Parses a JSON list of field names, e.g. `["K","Q(sqrt2)","L"]`.
    pub fn parse_json(ctx: &'c GaloisContext, text: &str) -> Result<Self> {
        let names: Vec<String> = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("tower must be a JSON list of field names: {e}")))?;
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::from_names(ctx, &refs)
    }

    /// The height-0 tower `(F)`.
    pub fn trivial(ctx: &'c GaloisContext, f: FieldRef) -> Self {
        Tower { ctx, fields: vec![f] }
    }

    pub fn ctx(&self) -> &'c GaloisContext {
        self.ctx
    }

    pub fn fields(&self) -> &[FieldRef] {
        &self.fields
    }

    pub fn height(&self) -> usize {
        self.fields.len() - 1
    }

    pub fn base(&self) -> FieldRef {
        self.fields[0]
    }

    pub fn top(&self) -> FieldRef {
        *self.fields.last().unwrap()
    }

    pub fn names(&self) -> Vec<String> {
        self.fields.iter().map(|&f| self.ctx.name(f)).collect()
    }

    /// Marches `(F_{i−1}, F_i)` for `i = 1..=m`.
    pub fn marches(&self) -> impl Iterator<Item = (FieldRef, FieldRef)> + '_ {
        self.fields.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn is_strict(&self) -> bool {
        self.marches().all(|(a, b)| a != b)
    }

    pub fn is_galois_tower(&self) -> bool {
        self.marches()
            .all(|(a, b)| self.ctx.is_galois(b, a).expect("tower marches are nested"))
    }

    pub fn is_galtourable_tower(&self) -> bool {
        self.marches().all(|(a, b)| {
            dissociation::is_galtourable(self.ctx, b, a).expect("tower marches are nested")
        })
    }

    /// First marche that is not Galois, 1-based.
    pub fn first_non_galois_marche(&self) -> Option<usize> {
        self.marches()
            .position(|(a, b)| !self.ctx.is_galois(b, a).unwrap_or(false))
            .map(|i| i + 1)
    }

    pub fn require_galois(&self) -> Result<()> {
        match self.first_non_galois_marche() {
            None => Ok(()),
            Some(i) => Err(Error::NotGalois(format!(
                "marche {i} ({} / {}) of tower {:?}",
                self.ctx.name(self.fields[i]),
                self.ctx.name(self.fields[i - 1]),
                self
            ))),
        }
    }

    /// Height at most the number of prime factors of `[top : base]`, with
    /// multiplicity. Only meaningful for strict towers.
    pub fn height_bound_check(&self) -> bool {
        let d = self.ctx.degree(self.top(), self.base()).expect("tower is nested");
        self.height() <= big_omega(d)
    }

    /// `Gal(F_i/F_{i−1})` for each marche; fails on the first non-Galois one.
    pub fn marche_groups(&self) -> Result<Vec<AbstractGroup>> {
        self.require_galois()?;
        self.marches()
            .map(|(a, b)| self.ctx.galois_group(b, a))
            .collect()
    }

    /// The tower with consecutive repetitions removed.
    pub fn strict_associated(&self) -> Tower<'c> {
        let mut fields = self.fields.clone();
        fields.dedup();
        Tower { ctx: self.ctx, fields }
    }

    fn check_index(&self, r: usize) -> Result<()> {
        if r > self.height() {
            return Err(Error::Precondition(format!(
                "index {r} out of range for a tower of height {}",
                self.height()
            )));
        }
        Ok(())
    }

    /// Drops the first `r` fields.
    pub fn res(&self, r: usize) -> Result<Tower<'c>> {
        self.check_index(r)?;
        Ok(Tower {
            ctx: self.ctx,
            fields: self.fields[r..].to_vec(),
        })
    }

    /// Keeps `F₀ … F_r`.
    pub fn rat(&self, r: usize) -> Result<Tower<'c>> {
        self.check_index(r)?;
        Ok(Tower {
            ctx: self.ctx,
            fields: self.fields[..=r].to_vec(),
        })
    }

    /// `F₀ … F_{r−1}` followed by the context's distinguished field `L`.
    pub fn inf_top(&self, r: usize) -> Result<Tower<'c>> {
        self.inf_to(r, self.ctx.distinguished())
    }

    /// `F₀ … F_{r−1}` followed by `upper`.
    pub fn inf_to(&self, r: usize, upper: FieldRef) -> Result<Tower<'c>> {
        self.check_index(r)?;
        let mut fields = self.fields[..r].to_vec();
        fields.push(upper);
        Tower::new(self.ctx, fields)
    }

    /// Appends `l` unless the tower already ends there.
    pub fn induced(&self, l: FieldRef) -> Result<Tower<'c>> {
        if self.top() == l {
            return Ok(self.clone());
        }
        if !self.ctx.le(self.top(), l) {
            return Err(Error::NotNested(format!(
                "{} is not contained in {}",
                self.ctx.name(self.top()),
                self.ctx.name(l)
            )));
        }
        let mut fields = self.fields.clone();
        fields.push(l);
        Ok(Tower { ctx: self.ctx, fields })
    }

    pub fn contains_field(&self, f: FieldRef) -> bool {
        self.fields.contains(&f)
    }

    /// `F₀ ⊴[d] F₁ ≤[d] …` with `⊴` on Galois marches and the marche degree in brackets.
    pub fn render(&self) -> String {
        let mut out = self.ctx.name(self.base());
        for (a, b) in self.marches() {
            let d = self.ctx.degree(b, a).expect("tower is nested");
            let mark = if self.ctx.is_galois(b, a).unwrap_or(false) {
                "⊴"
            } else {
                "≤"
            };
            out.push_str(&format!(" {mark}[{d}] {}", self.ctx.name(b)));
        }
        out
    }
}

/// Number of prime factors with multiplicity.
pub fn big_omega(mut n: usize) -> usize {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            n /= p;
            count += 1;
        }
        p += 1;
    }
    count + usize::from(n > 1)
}

fn same_ctx(e: &Tower<'_>, f: &Tower<'_>) -> bool {
    std::ptr::eq(e.ctx, f.ctx)
}

/// Witness that `e` refines `f`, if it does.
///
/// Each `F_i` is matched to the earliest admissible index of `e`; taking the
/// earliest match never rules out a later one, so this finds a witness
/// whenever one exists.
pub fn refinement_witness(e: &Tower<'_>, f: &Tower<'_>) -> Option<RefinementWitness> {
    if !same_ctx(e, f) || e.base() != f.base() || e.top() != f.top() || f.height() > e.height() {
        return None;
    }
    let mut indices = Vec::with_capacity(f.fields.len());
    let mut next = 0;
    for &fi in &f.fields {
        let j = (next..e.fields.len()).find(|&j| e.fields[j] == fi)?;
        indices.push(j);
        next = j + 1;
    }
    Some(RefinementWitness { indices })
}

fn require_refinement(e: &Tower<'_>, f: &Tower<'_>) -> Result<()> {
    if refinement_witness(e, f).is_none() {
        return Err(Error::Precondition(format!("{e:?} is not a refinement of {f:?}")));
    }
    Ok(())
}

/// Inner positions `1..n−1` of `e` holding a field absent from `f`.
fn new_positions<'a>(e: &'a Tower<'_>, f: &'a Tower<'_>) -> impl Iterator<Item = usize> + 'a {
    let old: HashSet<FieldRef> = f.fields.iter().copied().collect();
    let n = e.height();
    (1..n).filter(move |&j| !old.contains(&e.fields[j]))
}

pub fn is_proper_refinement(e: &Tower<'_>, f: &Tower<'_>) -> Result<bool> {
    require_refinement(e, f)?;
    Ok(new_positions(e, f).next().is_some())
}

pub fn is_trivial_refinement(e: &Tower<'_>, f: &Tower<'_>) -> Result<bool> {
    Ok(!is_proper_refinement(e, f)?)
}

/// Every new inner field is Galois over its predecessor. Fields of `e` that
/// already occur in `f` are not constrained.
pub fn is_galois_refinement(e: &Tower<'_>, f: &Tower<'_>) -> Result<bool> {
    require_refinement(e, f)?;
    let ctx = e.ctx;
    Ok(new_positions(e, f)
        .all(|j| ctx.is_galois(e.fields[j], e.fields[j - 1]).expect("tower is nested")))
}

/// The refinement of `f` whose first part refines `rat_r(f)` as `r_part`
/// and whose second part refines `res_r(f)` as `s_part`.
pub fn combine<'c>(
    f: &Tower<'c>,
    r: usize,
    s_part: &Tower<'c>,
    r_part: &Tower<'c>,
) -> Result<Tower<'c>> {
    let res = f.res(r)?;
    let rat = f.rat(r)?;
    if refinement_witness(s_part, &res).is_none() {
        return Err(Error::Precondition(format!("{s_part:?} does not refine res_{r}")));
    }
    if refinement_witness(r_part, &rat).is_none() {
        return Err(Error::Precondition(format!("{r_part:?} does not refine rat_{r}")));
    }
    let mut fields = r_part.fields.clone();
    fields.extend_from_slice(&s_part.fields[1..]);
    let e = Tower { ctx: f.ctx, fields };
    let jr = r_part.height();
    if refinement_witness(&e, f).is_none() || e.res(jr)? != *s_part || e.rat(jr)? != *r_part {
        return Err(Error::TheoremViolation(
            "concatenation is not the refinement it should be".into(),
        ));
    }
    Ok(e)
}

fn invariants(g: &AbstractGroup) -> (usize, Vec<usize>) {
    (g.order(), g.order_statistics())
}

/// Matches marches of two Galois towers with isomorphic Galois groups.
///
/// Returns `None` when the heights differ or no matching exists. Marches are
/// first bucketed by (order, element-order multiset); isomorphism is an
/// equivalence relation, so matching each marche to the first unused
/// isomorphic partner finds a perfect matching whenever one exists.
pub fn equivalence_witness(t1: &Tower<'_>, t2: &Tower<'_>) -> Result<Option<EquivalenceWitness>> {
    if !same_ctx(t1, t2) {
        return Err(Error::Precondition("towers from different contexts".into()));
    }
    let g1 = t1.marche_groups()?;
    let g2 = t2.marche_groups()?;
    if g1.len() != g2.len() {
        return Ok(None);
    }
    let bound = t1.ctx.bounds().isomorphism;
    let inv2: Vec<_> = g2.iter().map(invariants).collect();
    let mut used = vec![false; g2.len()];
    let mut sigma = Vec::with_capacity(g1.len());
    let mut isos = Vec::with_capacity(g1.len());
    for a in &g1 {
        let inv = invariants(a);
        let mut found = None;
        for (j, b) in g2.iter().enumerate() {
            if used[j] || inv2[j] != inv {
                continue;
            }
            let iso = if a == b {
                Some(Isomorphism {
                    images: (0..a.order() as u32).collect(),
                })
            } else {
                are_isomorphic(a, b, bound)?
            };
            if let Some(iso) = iso {
                found = Some((j, iso));
                break;
            }
        }
        let Some((j, iso)) = found else {
            return Ok(None);
        };
        used[j] = true;
        sigma.push(j + 1);
        isos.push(iso);
    }
    Ok(Some(EquivalenceWitness { sigma, isos }))
}

/// Every tower of `top/base` of height exactly `height`, repetitions allowed.
pub fn enumerate_towers<'c>(
    ctx: &'c GaloisContext,
    base: FieldRef,
    top: FieldRef,
    height: usize,
) -> Vec<Tower<'c>> {
    fn go<'c>(
        ctx: &'c GaloisContext,
        top: FieldRef,
        left: usize,
        prefix: &mut Vec<FieldRef>,
        out: &mut Vec<Tower<'c>>,
    ) {
        let last = *prefix.last().unwrap();
        if left == 1 {
            if ctx.le(last, top) {
                prefix.push(top);
                out.push(Tower {
                    ctx,
                    fields: prefix.clone(),
                });
                prefix.pop();
            }
            return;
        }
        for m in ctx.interval(last, top) {
            prefix.push(m);
            go(ctx, top, left - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if height == 0 {
        if base == top {
            out.push(Tower::trivial(ctx, base));
        }
        return out;
    }
    if !ctx.le(base, top) {
        return out;
    }
    go(ctx, top, height, &mut vec![base], &mut out);
    out
}
