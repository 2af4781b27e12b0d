//! The finite Galois correspondence inside one closure `N/K`.
//!
//! A [`GaloisContext`] holds `G = Gal(N/K)` and every subgroup of it. Each
//! subgroup `H` stands for the intermediate field `N^H`; field containment
//! is reverse subgroup inclusion, the compositum of two fields is the
//! intersection of their subgroups and the intersection of two fields is the
//! subgroup they generate.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::permgroup::{all_subgroups, AbstractGroup, BitSet, Bounds, Group, Subgroup};

/// Handle for an intermediate field of the context it came from.
///
/// Two handles from the same context are equal iff their subgroups are.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldRef(u32);

impl FieldRef {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Self {
        FieldRef(i as u32)
    }
}

pub struct GaloisContext {
    group: Arc<Group>,
    bounds: Bounds,
    lattice: Vec<Subgroup>,
    lookup: HashMap<BitSet, FieldRef>,
    /// `above[i]`: indices of subgroups containing subgroup `i` (fields inside field `i`).
    above: Vec<BitSet>,
    /// `below[i]`: indices of subgroups contained in subgroup `i` (fields containing field `i`).
    below: Vec<BitSet>,
    distinguished: FieldRef,
    names: BTreeMap<String, FieldRef>,
    labels: Vec<Option<String>>,
    notes: Vec<String>,
}

impl std::fmt::Debug for GaloisContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GaloisContext")
            .field("order", &self.group.order())
            .field("fields", &self.lattice.len())
            .field("distinguished", &self.name(self.distinguished))
            .finish()
    }
}

impl GaloisContext {
    /// Builds the context, enumerating the whole subgroup lattice of `group`.
    /// The distinguished field starts out as the closure `N`.
    pub fn new(group: Arc<Group>, bounds: Bounds) -> Result<Self> {
        let lattice = all_subgroups(&group, bounds.enumeration)?;
        let n = lattice.len();
        let lookup = lattice
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members().clone(), FieldRef(i as u32)))
            .collect();
        let mut above = vec![BitSet::new(n); n];
        let mut below = vec![BitSet::new(n); n];
        for i in 0..n {
            for j in i..n {
                if lattice[i].is_subgroup_of(&lattice[j]) {
                    above[i].insert(j);
                    below[j].insert(i);
                }
            }
        }
        Ok(GaloisContext {
            group,
            bounds,
            labels: vec![None; n],
            lattice,
            lookup,
            above,
            below,
            distinguished: FieldRef(0),
            names: BTreeMap::new(),
            notes: Vec::new(),
        })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    /// `K`, the fixed field of the whole group.
    pub fn base(&self) -> FieldRef {
        FieldRef(self.lattice.len() as u32 - 1)
    }

    /// `N`, the fixed field of the trivial subgroup.
    pub fn top_closure(&self) -> FieldRef {
        FieldRef(0)
    }

    /// `L`, the summit of the studied extension `L/K`.
    pub fn distinguished(&self) -> FieldRef {
        self.distinguished
    }

    pub fn set_distinguished(&mut self, f: FieldRef) {
        self.distinguished = f;
    }

    pub fn field_count(&self) -> usize {
        self.lattice.len()
    }

    /// All fields, from the closure `N` down to the base `K`.
    pub fn fields(&self) -> impl DoubleEndedIterator<Item = FieldRef> + ExactSizeIterator {
        (0..self.lattice.len() as u32).map(FieldRef)
    }

    pub fn subgroup(&self, f: FieldRef) -> &Subgroup {
        &self.lattice[f.index()]
    }

    pub fn field_of(&self, h: &Subgroup) -> Result<FieldRef> {
        if !Arc::ptr_eq(h.parent(), &self.group) && **h.parent() != *self.group {
            return Err(Error::ParentMismatch);
        }
        Ok(self.lookup[h.members()])
    }

    /// Registers a human-readable name. The first name given to a field
    /// becomes its display label.
    pub fn name_field(&mut self, name: &str, f: FieldRef) -> Result<()> {
        if self.names.contains_key(name) {
            return Err(Error::Precondition(format!("duplicate field name {name:?}")));
        }
        self.names.insert(name.to_string(), f);
        self.labels[f.index()].get_or_insert_with(|| name.to_string());
        Ok(())
    }

    pub fn add_note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn named_fields(&self) -> &BTreeMap<String, FieldRef> {
        &self.names
    }

    /// Resolves a registered name or a `sub#i/o` label. `K`, `L` and `N` fall
    /// back to the base, distinguished and closure fields when not registered
    /// explicitly.
    pub fn field(&self, name: &str) -> Result<FieldRef> {
        if let Some(&f) = self.names.get(name) {
            return Ok(f);
        }
        match name {
            "K" => Ok(self.base()),
            "L" => Ok(self.distinguished),
            "N" => Ok(self.top_closure()),
            _ => self.anonymous(name).ok_or_else(|| Error::UnknownField(name.to_string())),
        }
    }

    /// Parses the `sub#i/o` form produced by [`Self::name`] for unnamed fields.
    fn anonymous(&self, name: &str) -> Option<FieldRef> {
        let (i, o) = name.strip_prefix("sub#")?.split_once('/')?;
        let (i, o): (usize, usize) = (i.parse().ok()?, o.parse().ok()?);
        (i < self.lattice.len() && self.lattice[i].order() == o).then_some(FieldRef(i as u32))
    }

    /// Display label, or `sub#i/o` (lattice index, subgroup order) when unnamed.
    pub fn name(&self, f: FieldRef) -> String {
        match &self.labels[f.index()] {
            Some(s) => s.clone(),
            None => format!("sub#{}/{}", f.0, self.lattice[f.index()].order()),
        }
    }

    /// Field containment `e ⊆ f`.
    pub fn le(&self, e: FieldRef, f: FieldRef) -> bool {
        self.below[e.index()].contains(f.index())
    }

    pub fn lt(&self, e: FieldRef, f: FieldRef) -> bool {
        e != f && self.le(e, f)
    }

    fn check_le(&self, lower: FieldRef, upper: FieldRef) -> Result<()> {
        if self.le(lower, upper) {
            Ok(())
        } else {
            Err(Error::NotNested(format!(
                "{} is not contained in {}",
                self.name(lower),
                self.name(upper)
            )))
        }
    }

    /// Fields `M` with `lower ≤ M ≤ upper`, largest first.
    pub fn interval(&self, lower: FieldRef, upper: FieldRef) -> Vec<FieldRef> {
        self.above[upper.index()]
            .intersection(&self.below[lower.index()])
            .iter()
            .map(|i| FieldRef(i as u32))
            .collect()
    }

    /// `[upper : lower]`, the index of `Gal(N/upper)` in `Gal(N/lower)`.
    pub fn degree(&self, upper: FieldRef, lower: FieldRef) -> Result<usize> {
        self.check_le(lower, upper)?;
        Ok(self.subgroup(lower).order() / self.subgroup(upper).order())
    }

    /// Smallest field containing both.
    pub fn compositum(&self, e: FieldRef, f: FieldRef) -> FieldRef {
        let common = self.below[e.index()].intersection(&self.below[f.index()]);
        FieldRef(common.last().expect("trivial subgroup lies below everything") as u32)
    }

    /// Largest field contained in both.
    pub fn intersect_fields(&self, e: FieldRef, f: FieldRef) -> FieldRef {
        let common = self.above[e.index()].intersection(&self.above[f.index()]);
        FieldRef(common.first().expect("whole group lies above everything") as u32)
    }

    /// Whether `upper/lower` is Galois.
    pub fn is_galois(&self, upper: FieldRef, lower: FieldRef) -> Result<bool> {
        self.check_le(lower, upper)?;
        Ok(self
            .subgroup(upper)
            .is_normal_in_unchecked(self.subgroup(lower)))
    }

    /// `Gal(upper/lower)` as the quotient `Gal(N/lower) / Gal(N/upper)`.
    pub fn galois_group(&self, upper: FieldRef, lower: FieldRef) -> Result<AbstractGroup> {
        if !self.is_galois(upper, lower)? {
            return Err(Error::NotGalois(format!(
                "{}/{}",
                self.name(upper),
                self.name(lower)
            )));
        }
        self.subgroup(upper).quotient_of(self.subgroup(lower))
    }

    /// Pairs `(lower, upper)` with `upper` covering `lower` in the field lattice.
    pub fn covering_pairs(&self) -> Vec<(FieldRef, FieldRef)> {
        let mut out = Vec::new();
        for lower in self.fields() {
            for upper in self.fields() {
                if !self.lt(lower, upper) {
                    continue;
                }
                if self.interval(lower, upper).len() == 2 {
                    out.push((lower, upper));
                }
            }
        }
        out
    }

    /// Graphviz rendering of the field lattice. Covering steps that are
    /// Galois are drawn as doubled edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph fields {\n  rankdir=BT;\n  node [shape=box];\n");
        let base = self.base();
        for f in self.fields().rev() {
            let d = self.degree(f, base).expect("every field contains the base");
            let _ = writeln!(
                out,
                "  f{} [label=\"{} [deg {} over {}]\"];",
                f.0,
                self.name(f).replace('"', "\\\""),
                d,
                self.name(base).replace('"', "\\\"")
            );
        }
        for (lower, upper) in self.covering_pairs() {
            let galois = self.is_galois(upper, lower).unwrap_or(false);
            let style = if galois { " [color=\"black:black\"]" } else { "" };
            let _ = writeln!(out, "  f{} -> f{}{};", lower.0, upper.0, style);
        }
        out.push_str("}\n");
        out
    }
}

/// A quadruple `(J, K, N, L)` with `K ∩ L = J` and `KL = N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Quadrilateral {
    pub j: FieldRef,
    pub k: FieldRef,
    pub n: FieldRef,
    pub l: FieldRef,
}

impl Quadrilateral {
    pub fn new(ctx: &GaloisContext, j: FieldRef, k: FieldRef, n: FieldRef, l: FieldRef) -> Result<Self> {
        if ctx.intersect_fields(k, l) != j {
            return Err(Error::Precondition(format!(
                "{} ∩ {} is not {}",
                ctx.name(k),
                ctx.name(l),
                ctx.name(j)
            )));
        }
        if ctx.compositum(k, l) != n {
            return Err(Error::Precondition(format!(
                "{}·{} is not {}",
                ctx.name(k),
                ctx.name(l),
                ctx.name(n)
            )));
        }
        Ok(Quadrilateral { j, k, n, l })
    }

    /// The quadrilateral spanned by two fields.
    pub fn spanned(ctx: &GaloisContext, k: FieldRef, l: FieldRef) -> Self {
        Quadrilateral {
            j: ctx.intersect_fields(k, l),
            k,
            n: ctx.compositum(k, l),
            l,
        }
    }

    /// The flat quadrilateral `(F, E, E, F)` of a pair `F ≤ E`.
    pub fn flat(ctx: &GaloisContext, lower: FieldRef, upper: FieldRef) -> Result<Self> {
        Self::new(ctx, lower, upper, upper, lower)
    }

    pub fn transpose(self) -> Self {
        Quadrilateral {
            k: self.l,
            l: self.k,
            ..self
        }
    }
}

/// `K/J` and `L/J` Galois; every side is then Galois.
pub fn is_parallelogram(ctx: &GaloisContext, q: &Quadrilateral) -> bool {
    ctx.is_galois(q.k, q.j).unwrap_or(false) && ctx.is_galois(q.l, q.j).unwrap_or(false)
}

/// Checks `Gal(N/J) = Gal(N/K) × Gal(N/L)` as an internal direct product,
/// working in the quotient `Gal(N'/J)` where `N'` is the quadrilateral's summit.
pub fn diagonal_split_check(ctx: &GaloisContext, q: &Quadrilateral) -> Result<bool> {
    if !is_parallelogram(ctx, q) {
        return Err(Error::NotGalois(format!(
            "({}, {}, {}, {}) is not a parallelogram",
            ctx.name(q.j),
            ctx.name(q.k),
            ctx.name(q.n),
            ctx.name(q.l)
        )));
    }
    let g = ctx.group();
    let summit = ctx.subgroup(q.n);
    let delta = ctx.subgroup(q.j);
    let quotient = summit.quotient_of(delta)?;
    // coset label of each element of Gal(N/J)
    let mut label = vec![u32::MAX; g.order()];
    let mut next = 0u32;
    for &x in delta.elements() {
        if label[x as usize] == u32::MAX {
            for &s in summit.elements() {
                label[g.mul(x, s) as usize] = next;
            }
            next += 1;
        }
    }
    let image = |h: &Subgroup| -> BitSet {
        BitSet::from_indices(
            quotient.order(),
            h.elements().iter().map(|&x| label[x as usize] as usize),
        )
    };
    let gamma = image(ctx.subgroup(q.k));
    let lambda = image(ctx.subgroup(q.l));
    let trivial_meet = gamma.intersection(&lambda).iter().eq([0usize]);
    let commute = gamma.iter().all(|a| {
        lambda
            .iter()
            .all(|b| quotient.mul(a as u32, b as u32) == quotient.mul(b as u32, a as u32))
    });
    let mut product = BitSet::new(quotient.order());
    for a in gamma.iter() {
        for b in lambda.iter() {
            product.insert(quotient.mul(a as u32, b as u32) as usize);
        }
    }
    Ok(trivial_meet && commute && product.len() == quotient.order())
}

/// Verdicts of the two exchange identities; `None` where the identity's
/// hypotheses on `(E, F)` do not hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EcarteleVerdict {
    /// `KF ∩ EL = EF` for `J ≤ E ≤ K`, `J ≤ F ≤ L`.
    pub compositum: Option<bool>,
    /// `(K ∩ F)(E ∩ L) = E ∩ F` for `K ≤ E ≤ KL`, `L ≤ F ≤ KL`.
    pub intersection: Option<bool>,
}

impl EcarteleVerdict {
    pub fn holds(&self) -> bool {
        self.compositum != Some(false) && self.intersection != Some(false)
    }
}

pub fn ecartele_identities(
    ctx: &GaloisContext,
    k: FieldRef,
    l: FieldRef,
    e: FieldRef,
    f: FieldRef,
) -> Result<EcarteleVerdict> {
    let j = ctx.intersect_fields(k, l);
    let kl = ctx.compositum(k, l);
    for (side, name) in [(k, "K"), (l, "L")] {
        if !ctx.is_galois(side, j)? {
            return Err(Error::Precondition(format!(
                "{name}/(K ∩ L) = {}/{} is not Galois",
                ctx.name(side),
                ctx.name(j)
            )));
        }
    }
    let below = ctx.le(j, e) && ctx.le(e, k) && ctx.le(j, f) && ctx.le(f, l);
    let above = ctx.le(k, e) && ctx.le(e, kl) && ctx.le(l, f) && ctx.le(f, kl);
    if !below && !above {
        return Err(Error::Precondition(format!(
            "neither J ≤ E ≤ K, J ≤ F ≤ L nor K ≤ E ≤ KL, L ≤ F ≤ KL holds for E = {}, F = {}",
            ctx.name(e),
            ctx.name(f)
        )));
    }
    let compositum = below.then(|| {
        let lhs = ctx.intersect_fields(ctx.compositum(k, f), ctx.compositum(e, l));
        lhs == ctx.compositum(e, f)
    });
    let intersection = above.then(|| {
        let lhs = ctx.compositum(ctx.intersect_fields(k, f), ctx.intersect_fields(e, l));
        lhs == ctx.intersect_fields(e, f)
    });
    Ok(EcarteleVerdict {
        compositum,
        intersection,
    })
}

fn check_parallelogram(ctx: &GaloisContext, para: &Quadrilateral) -> Result<()> {
    if Quadrilateral::new(ctx, para.j, para.k, para.n, para.l)? != *para || !is_parallelogram(ctx, para) {
        return Err(Error::Precondition("base quadrilateral is not a parallelogram".into()));
    }
    Ok(())
}

pub fn is_sub_quadrilateral(ctx: &GaloisContext, para: &Quadrilateral, q: &Quadrilateral) -> bool {
    q.n == para.n
        && ctx.le(para.k, q.k)
        && ctx.le(q.k, para.n)
        && ctx.le(para.l, q.l)
        && ctx.le(q.l, para.n)
        && Quadrilateral::new(ctx, q.j, q.k, q.n, q.l).is_ok()
}

pub fn is_quotient_quadrilateral(ctx: &GaloisContext, para: &Quadrilateral, q: &Quadrilateral) -> bool {
    q.j == para.j
        && ctx.le(para.j, q.k)
        && ctx.le(q.k, para.k)
        && ctx.le(para.j, q.l)
        && ctx.le(q.l, para.l)
        && Quadrilateral::new(ctx, q.j, q.k, q.n, q.l).is_ok()
}

/// All sub-quadrilaterals `(M, E, N, F)`: `K ≤ E ≤ N`, `L ≤ F ≤ N`, `EF = N`.
pub fn sub_quadrilaterals(ctx: &GaloisContext, para: &Quadrilateral) -> Vec<Quadrilateral> {
    let mut out = Vec::new();
    for e in ctx.interval(para.k, para.n) {
        for f in ctx.interval(para.l, para.n) {
            if ctx.compositum(e, f) == para.n {
                out.push(Quadrilateral::spanned(ctx, e, f));
            }
        }
    }
    out
}

/// All quotient quadrilaterals `(J, E, C, F)`: `J ≤ E ≤ K`, `J ≤ F ≤ L`, `E ∩ F = J`.
pub fn quotient_quadrilaterals(ctx: &GaloisContext, para: &Quadrilateral) -> Vec<Quadrilateral> {
    let mut out = Vec::new();
    for e in ctx.interval(para.j, para.k) {
        for f in ctx.interval(para.j, para.l) {
            if ctx.intersect_fields(e, f) == para.j {
                out.push(Quadrilateral::spanned(ctx, e, f));
            }
        }
    }
    out
}

/// `(M, E, N, F) ↦ (J, K ∩ F, M, E ∩ L)`
pub fn bijection_r(ctx: &GaloisContext, para: &Quadrilateral, sub: &Quadrilateral) -> Result<Quadrilateral> {
    check_parallelogram(ctx, para)?;
    if !is_sub_quadrilateral(ctx, para, sub) {
        return Err(Error::Precondition("argument is not a sub-quadrilateral".into()));
    }
    Quadrilateral::new(
        ctx,
        para.j,
        ctx.intersect_fields(para.k, sub.l),
        sub.j,
        ctx.intersect_fields(sub.k, para.l),
    )
    .map_err(|e| Error::TheoremViolation(format!("R produced a non-quadrilateral: {e}")))
}

/// `(J, E, C, F) ↦ (C, KF, N, EL)`
pub fn bijection_s(ctx: &GaloisContext, para: &Quadrilateral, quot: &Quadrilateral) -> Result<Quadrilateral> {
    check_parallelogram(ctx, para)?;
    if !is_quotient_quadrilateral(ctx, para, quot) {
        return Err(Error::Precondition("argument is not a quotient quadrilateral".into()));
    }
    Quadrilateral::new(
        ctx,
        quot.n,
        ctx.compositum(para.k, quot.l),
        para.n,
        ctx.compositum(quot.k, para.l),
    )
    .map_err(|e| Error::TheoremViolation(format!("S produced a non-quadrilateral: {e}")))
}

/// All parallelograms `[K ∩ L, K, KL, L]` of the context, one per ordered pair `(K, L)`.
pub fn parallelograms(ctx: &GaloisContext) -> Vec<Quadrilateral> {
    let mut out = Vec::new();
    for k in ctx.fields() {
        for l in ctx.fields() {
            let q = Quadrilateral::spanned(ctx, k, l);
            if is_parallelogram(ctx, &q) {
                out.push(q);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::Permutation;

    fn ctx(degree: usize, gens: &[&str]) -> GaloisContext {
        let gens = gens
            .iter()
            .map(|s| Permutation::parse_cycles(degree, s).unwrap())
            .collect();
        GaloisContext::new(Group::generate(degree, gens).unwrap(), Bounds::default()).unwrap()
    }

    fn field(c: &GaloisContext, gens: &[&str]) -> FieldRef {
        let perms: Vec<_> = gens
            .iter()
            .map(|s| Permutation::parse_cycles(c.group().degree(), s).unwrap())
            .collect();
        c.field_of(&c.group().subgroup_from_perms(&perms).unwrap()).unwrap()
    }

    /// Biquadratic model: V₄ acting on the four conjugates ±√2 ± √3.
    fn klein() -> GaloisContext {
        ctx(4, &["(1 2)(3 4)", "(1 3)(2 4)"])
    }

    #[test]
    fn endpoints() {
        let c = klein();
        assert_eq!(c.subgroup(c.base()).order(), 4);
        assert!(c.subgroup(c.top_closure()).is_trivial());
        assert_eq!(c.degree(c.top_closure(), c.base()).unwrap(), 4);
        assert_eq!(c.degree(c.base(), c.base()).unwrap(), 1);
        assert!(c.degree(c.base(), c.top_closure()).is_err());
        assert_eq!(c.field("N").unwrap(), c.top_closure());
        assert!(c.field("nope").is_err());
    }

    #[test]
    fn compositum_and_intersection() {
        let c = klein();
        let a = field(&c, &["(1 2)(3 4)"]);
        let b = field(&c, &["(1 3)(2 4)"]);
        assert_eq!(c.compositum(a, c.base()), a);
        assert_eq!(c.intersect_fields(a, c.top_closure()), a);
        assert_eq!(c.compositum(a, b), c.top_closure());
        assert_eq!(c.intersect_fields(a, b), c.base());
    }

    #[test]
    fn sixth_root_of_two_has_degree_six() {
        // D₁₂ on the six roots ζ^k·⁶√2; point 1 is ⁶√2 itself.
        let c = ctx(6, &["(1 2 3 4 5 6)", "(2 6)(3 5)"]);
        let l = field(&c, &["(2 6)(3 5)"]);
        assert_eq!(c.degree(l, c.base()).unwrap(), 6);
        assert!(!c.is_galois(l, c.base()).unwrap());
    }

    #[test]
    fn galois_groups() {
        let c = klein();
        let a = field(&c, &["(1 2)(3 4)"]);
        assert!(c.is_galois(a, c.base()).unwrap());
        assert_eq!(c.galois_group(c.top_closure(), c.base()).unwrap().order(), 4);
        assert_eq!(c.galois_group(a, a).unwrap().order(), 1);
        let s3 = ctx(3, &["(1 2 3)", "(1 2)"]);
        let cube_root = field(&s3, &["(2 3)"]);
        assert!(matches!(
            s3.galois_group(cube_root, s3.base()),
            Err(Error::NotGalois(_))
        ));
    }

    #[test]
    fn parallelogram_predicates() {
        let c = klein();
        let a = field(&c, &["(1 2)(3 4)"]);
        let b = field(&c, &["(1 3)(2 4)"]);
        let flat = Quadrilateral::flat(&c, c.base(), a).unwrap();
        assert!(is_parallelogram(&c, &flat));
        assert!(diagonal_split_check(&c, &flat).unwrap());
        let q = Quadrilateral::new(&c, c.base(), a, c.top_closure(), b).unwrap();
        assert!(is_parallelogram(&c, &q));
        assert!(diagonal_split_check(&c, &q).unwrap());
        assert!(Quadrilateral::new(&c, a, a, c.top_closure(), b).is_err());

        let s3 = ctx(3, &["(1 2 3)", "(1 2)"]);
        let cube_root = field(&s3, &["(2 3)"]);
        let quad = field(&s3, &["(1 2 3)"]);
        let q = Quadrilateral::spanned(&s3, cube_root, quad);
        assert!(!is_parallelogram(&s3, &q));
        assert!(diagonal_split_check(&s3, &q).is_err());
    }

    #[test]
    fn ecartele_endpoints() {
        let c = klein();
        let a = field(&c, &["(1 2)(3 4)"]);
        let b = field(&c, &["(1 3)(2 4)"]);
        let v = ecartele_identities(&c, a, b, a, b).unwrap();
        assert_eq!(v.compositum, Some(true));
        assert_eq!(v.intersection, Some(true));
        let v = ecartele_identities(&c, a, b, c.base(), c.base()).unwrap();
        assert_eq!(v.compositum, Some(true));
        assert_eq!(v.intersection, None);
        assert!(ecartele_identities(&c, a, b, c.top_closure(), c.base()).is_err());
    }

    #[test]
    fn r_and_s_on_endpoints() {
        let c = klein();
        let a = field(&c, &["(1 2)(3 4)"]);
        let b = field(&c, &["(1 3)(2 4)"]);
        let para = Quadrilateral::new(&c, c.base(), a, c.top_closure(), b).unwrap();
        let r = bijection_r(&c, &para, &para).unwrap();
        let j = c.base();
        assert_eq!(r, Quadrilateral { j, k: j, n: j, l: j });
        assert_eq!(bijection_s(&c, &para, &r).unwrap(), para);
        assert_eq!(
            sub_quadrilaterals(&c, &para).len(),
            quotient_quadrilaterals(&c, &para).len()
        );
    }

    #[test]
    fn dot_export_marks_galois_steps() {
        let c = ctx(3, &["(1 2 3)", "(1 2)"]);
        let dot = c.to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("label=").count(), 6);
        // Q ⊂ Q(√-3) and the three cubic-root fields ⊂ N are Galois; the
        // three Q ⊂ Q(∛2·ζ^k) steps are not.
        assert_eq!(dot.matches("->").count(), 8);
        assert_eq!(dot.matches("black:black").count(), 5);
    }
}
