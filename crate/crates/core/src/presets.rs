//! Ready-made Galois contexts for the standard arithmetic examples, plus the
//! JSON instance-file loader.
//!
//! Radical and cyclo-radical closures are modelled by their affine Galois
//! groups acting on formal symbols: a pair `(t, s)` sends a chosen radical
//! `α` to `ζ^t α` and a root of unity `ζ` to `ζ^s`. The degrees this relies
//! on are justified by the classical irreducibility criterion for `Xⁿ − a`,
//! whose hypotheses are checked here by exact factorisation.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use serde::de::{Deserializer, MapAccess, Visitor};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::galois::{FieldRef, GaloisContext};
use crate::permgroup::{Bounds, Group, Permutation, Subgroup};

/// Instances shipped with the crate; the sweeps and the oracle matrix run
/// over all of them.
pub const SHIPPED: &[&str] = &[
    "group:trivial",
    "group:C2",
    "group:C3",
    "group:C4",
    "group:V4",
    "group:S3",
    "group:C6",
    "group:D8",
    "group:Q8",
    "group:C2^3",
    "group:D10",
    "group:A4",
    "group:S4",
    "group:A5",
    "radical:a=2,n=2",
    "radical:a=2,n=3",
    "radical:a=2,n=4",
    "radical:a=2,n=5",
    "radical:a=2,n=6",
    "radical:a=2,n=9",
    "radical:a=3,n=8",
    "cyclo-radical:n=1,d=3,l=2",
    "cyclo-radical:n=2,d=3,l=3",
    "cyclo-radical:n=1,d=5,l=2",
    "cyclo-radical:n=1,d=9,l=2",
    "selmer-serre:n=3",
    "selmer-serre:n=4",
    "selmer-serre:n=5",
];

/// Loads `radical:…`, `cyclo-radical:…`, `selmer-serre:…`, `group:…` or
/// `file:<path>`; anything else is taken as a path.
pub fn load(selector: &str, bounds: Bounds) -> Result<GaloisContext> {
    let (kind, rest) = selector.split_once(':').unwrap_or(("file", selector));
    match kind {
        "radical" => radical_context(&rest.parse()?, bounds),
        "cyclo-radical" => cyclo_radical_context(&rest.parse()?, bounds),
        "selmer-serre" => {
            let args = parse_args(rest, &["n"])?;
            selmer_serre_context(args["n"], bounds)
        }
        "group" => small_group_context(rest, bounds),
        "file" => from_file(rest, bounds),
        _ => from_file(selector, bounds),
    }
}

fn parse_args(text: &str, keys: &[&str]) -> Result<BTreeMap<String, i64>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
        if !keys.contains(&k.trim()) {
            return Err(Error::Parse(format!("unknown preset parameter {k:?}")));
        }
        let v = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer for {k}: {v:?}")))?;
        if out.insert(k.trim().to_string(), v).is_some() {
            return Err(Error::Parse(format!("parameter {k} given twice")));
        }
    }
    for k in keys {
        if !out.contains_key(*k) {
            return Err(Error::Parse(format!("missing preset parameter {k}")));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// arithmetic helpers

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn primes_dividing(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n) == [(n, 1)]
}

fn totient(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

fn units(m: u64) -> Vec<u64> {
    (0..m).filter(|&s| s.gcd(&m) == 1).collect()
}

/// Whether the rational `a` is a `p`-th power in ℚ.
fn is_rational_power(a: Ratio<i64>, p: u64) -> bool {
    if *a.numer() == 0 {
        return true;
    }
    if *a.numer() < 0 && p.is_multiple_of(2) {
        return false;
    }
    let exps = |x: i64| factor(x.unsigned_abs()).iter().all(|&(_, e)| u64::from(e) % p == 0);
    exps(*a.numer()) && exps(*a.denom())
}

/// Signed squarefree part of `a`, so that `ℚ(√a) = ℚ(√D)`.
fn squarefree_part(a: Ratio<i64>) -> i64 {
    let n = a.numer().unsigned_abs() * a.denom().unsigned_abs();
    let core: u64 = factor(n)
        .into_iter()
        .filter(|&(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .product();
    core as i64 * a.numer().signum()
}

fn format_ratio(a: Ratio<i64>) -> String {
    if *a.denom() == 1 {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

// ---------------------------------------------------------------------------
// affine groups t ↦ s·t + shift on ℤ/D together with s on (ℤ/E)^*

/// Pairs `(t mod d, s ∈ (ℤ/e)^*)` with `d | e`, acting on `d` radical
/// symbols `ζ_d^k ρ` followed by `φ(e)` symbols `ζ_e^u`.
struct Affine {
    d: u64,
    e: u64,
    units: Vec<u64>,
}

impl Affine {
    fn new(d: u64, e: u64) -> Self {
        Affine {
            d,
            e,
            units: units(e),
        }
    }

    fn degree(&self) -> usize {
        self.d as usize + self.units.len()
    }

    fn order(&self) -> usize {
        self.d as usize * self.units.len()
    }

    fn perm(&self, t: u64, s: u64) -> Permutation {
        let mut images = Vec::with_capacity(self.degree());
        for k in 0..self.d {
            images.push(((s * k + t) % self.d) as u32);
        }
        for &u in &self.units {
            let v = s * u % self.e;
            let pos = self.units.binary_search(&v).expect("units are closed");
            images.push((self.d as usize + pos) as u32);
        }
        Permutation::from_images(images).expect("affine map is a bijection")
    }

    fn group(&self, bounds: Bounds) -> Result<Arc<Group>> {
        let mut gens = vec![self.perm(1 % self.d, 1)];
        gens.extend(self.units.iter().filter(|&&s| s != 1).map(|&s| self.perm(0, s)));
        let g = Group::generate_bounded(self.degree(), gens, bounds.closure)?;
        if g.order() != self.order() {
            return Err(Error::TheoremViolation(format!(
                "affine model has order {} instead of {}",
                g.order(),
                self.order()
            )));
        }
        Ok(g)
    }

    fn subgroup(&self, g: &Arc<Group>, pred: impl Fn(u64, u64) -> bool) -> Result<Subgroup> {
        let mut idx = Vec::new();
        for t in 0..self.d {
            for &s in &self.units {
                if pred(t, s) {
                    idx.push(g.index_of(&self.perm(t, s)).expect("pair lies in the group"));
                }
            }
        }
        g.subgroup_from_elements(&idx)
    }
}

fn name_subgroup(ctx: &mut GaloisContext, name: &str, h: &Subgroup) -> Result<FieldRef> {
    let f = ctx.field_of(h)?;
    ctx.name_field(name, f)?;
    Ok(f)
}

// ---------------------------------------------------------------------------
// radical closures ℚ(ζ_n, a^{1/n})

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RadicalSpec {
    pub a: Ratio<i64>,
    pub n: u32,
}

impl FromStr for RadicalSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut a = None;
        let mut n = None;
        for part in s.split(',').map(str::trim) {
            match part.split_once('=') {
                Some(("a", v)) => {
                    a = Some(
                        Ratio::<i64>::from_str(v.trim())
                            .map_err(|_| Error::Parse(format!("bad rational a={v:?}")))?,
                    )
                }
                Some(("n", v)) => {
                    n = Some(
                        v.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad integer n={v:?}")))?,
                    )
                }
                _ => return Err(Error::Parse(format!("unexpected radical parameter {part:?}"))),
            }
        }
        match (a, n) {
            (Some(a), Some(n)) => Ok(RadicalSpec { a, n }),
            _ => Err(Error::Parse("radical preset needs a=… and n=…".into())),
        }
    }
}

impl RadicalSpec {
    /// Irreducibility hypotheses for `Xⁿ − a` over ℚ, plus the condition
    /// that keeps `[ℚ(ζ_n, a^{1/n}) : ℚ] = n·φ(n)` for even `n`.
    pub fn validate(&self) -> Result<()> {
        let n = u64::from(self.n);
        if n < 2 {
            return Err(Error::Precondition("radical preset needs n ≥ 2".into()));
        }
        if *self.a.numer() == 0 {
            return Err(Error::Precondition("radical preset needs a ≠ 0".into()));
        }
        for p in primes_dividing(n) {
            if is_rational_power(self.a, p) {
                return Err(Error::Precondition(format!(
                    "a = {} is a {p}-th power in Q",
                    format_ratio(self.a)
                )));
            }
        }
        if n % 4 == 0 {
            let b = -self.a / 4;
            if *b.numer() > 0 && is_rational_power(b, 4) {
                return Err(Error::Precondition(format!(
                    "4 | n and a = {} lies in -4·Q^4",
                    format_ratio(self.a)
                )));
            }
        }
        if n % 2 == 0 {
            let dd = squarefree_part(self.a);
            let conductor = if dd.rem_euclid(4) == 1 {
                dd.unsigned_abs()
            } else {
                4 * dd.unsigned_abs()
            };
            if n % conductor == 0 {
                return Err(Error::Precondition(format!(
                    "sqrt({}) lies in Q(zeta{n}), so the closure has degree below n·φ(n)",
                    format_ratio(self.a)
                )));
            }
        }
        Ok(())
    }

    fn root_name(&self, m: u64) -> String {
        let a = format_ratio(self.a);
        match m {
            1 => "Q".to_string(),
            2 => format!("Q(sqrt{a})"),
            _ => format!("Q({m}rt{a})"),
        }
    }
}

/// `Gal(ℚ(ζ_n, a^{1/n})/ℚ)` with the fields `ℚ(a^{1/m})` and `ℚ(ζ_m)` for
/// every `m | n` named; the distinguished field is `ℚ(a^{1/n})`.
pub fn radical_context(spec: &RadicalSpec, bounds: Bounds) -> Result<GaloisContext> {
    spec.validate()?;
    let n = u64::from(spec.n);
    let model = Affine::new(n, n);
    let g = model.group(bounds)?;
    let mut ctx = GaloisContext::new(g.clone(), bounds)?;
    let base = ctx.base();
    ctx.name_field("Q", base)?;
    let divisors: Vec<u64> = (1..=n).filter(|m| n % m == 0).collect();
    let mut top_radical = base;
    for &m in divisors.iter().filter(|&&m| m > 1) {
        let h = model.subgroup(&g, |t, _| t % m == 0)?;
        let f = name_subgroup(&mut ctx, &spec.root_name(m), &h)?;
        if ctx.degree(f, base)? != m as usize {
            return Err(Error::TheoremViolation(format!("{} has the wrong degree", spec.root_name(m))));
        }
        top_radical = f;
    }
    for &m in divisors.iter().filter(|&&m| m > 2) {
        let h = model.subgroup(&g, |_, s| s % m == 1 % m)?;
        let f = name_subgroup(&mut ctx, &format!("Q(zeta{m})"), &h)?;
        if ctx.degree(f, base)? != totient(m) as usize {
            return Err(Error::TheoremViolation(format!("Q(zeta{m}) has the wrong degree")));
        }
    }
    let top = ctx.top_closure();
    ctx.name_field(&format!("Q(zeta{n},{n}rt{})", format_ratio(spec.a)), top)?;
    ctx.set_distinguished(top_radical);
    if n % 2 == 0 {
        ctx.add_note("hypothesis: classical");
    }
    Ok(ctx)
}

// ---------------------------------------------------------------------------
// cyclo-radical closures ℚ(ζ_e, l^{1/d}), e = lcm(n², d)

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycloRadicalSpec {
    pub n: u64,
    pub d: u64,
    pub l: u64,
}

impl FromStr for CycloRadicalSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let args = parse_args(s, &["n", "d", "l"])?;
        let get = |k: &str| {
            u64::try_from(args[k]).map_err(|_| Error::Parse(format!("{k} must be non-negative")))
        };
        Ok(CycloRadicalSpec {
            n: get("n")?,
            d: get("d")?,
            l: get("l")?,
        })
    }
}

impl CycloRadicalSpec {
    pub fn e(&self) -> u64 {
        (self.n * self.n).lcm(&self.d)
    }

    pub fn validate(&self) -> Result<()> {
        let CycloRadicalSpec { n, d, l } = *self;
        let fail = |m: String| Err(Error::Precondition(m));
        if n < 1 {
            return fail("cyclo-radical preset needs n ≥ 1".into());
        }
        if d < 3 || d % 2 == 0 {
            return fail(format!("d = {d} must be odd and at least 3"));
        }
        if !is_prime(l) {
            return fail(format!("l = {l} must be prime"));
        }
        if n % l == 0 {
            return fail(format!("l = {l} divides n = {n}"));
        }
        if d.gcd(&n) != 1 {
            return fail(format!("gcd(d, n) = {} ≠ 1", d.gcd(&n)));
        }
        // X^d − l stays irreducible over Q(ζ_e) when no prime p | d divides
        // the ramification index of l there.
        let v = factor(self.e())
            .into_iter()
            .find(|&(p, _)| p == l)
            .map_or(0, |(_, v)| v);
        let ram = if v == 0 { 1 } else { totient(l.pow(v)) };
        if let Some(p) = primes_dividing(d).into_iter().find(|p| ram % p == 0) {
            return fail(format!(
                "{p} divides the ramification index {ram} of l = {l} in Q(zeta{})",
                self.e()
            ));
        }
        Ok(())
    }
}

/// `Gal(ℚ(ζ_e, ρ)/ℚ)` with `ρ^d = l`; the distinguished field is
/// `L = F_n(ρ)` where `F_n ⊆ ℚ(ζ_{n²})` has degree `n`.
pub fn cyclo_radical_context(spec: &CycloRadicalSpec, bounds: Bounds) -> Result<GaloisContext> {
    spec.validate()?;
    let CycloRadicalSpec { n, d, l } = *spec;
    let (e, n2) = (spec.e(), n * n);
    let model = Affine::new(d, e);
    let g = model.group(bounds)?;
    let mut ctx = GaloisContext::new(g.clone(), bounds)?;
    let base = ctx.base();
    ctx.name_field("Q", base)?;

    let e_sub = model.subgroup(&g, |_, s| s % n2 == 1 % n2)?;
    let e_field = ctx.field_of(&e_sub)?;
    if n2 > 2 {
        ctx.name_field(&format!("Q(zeta{n2})"), e_field)?;
    }
    ctx.name_field("E", e_field)?;

    // F_n: least subgroup in canonical order between Gal(N/E) and G of index n
    let f_field = ctx
        .fields()
        .find(|&f| {
            ctx.le(f, e_field) && ctx.degree(f, base).is_ok_and(|deg| deg as u64 == n)
        })
        .ok_or_else(|| Error::TheoremViolation(format!("no subfield of degree {n} in Q(zeta{n2})")))?;
    ctx.name_field("F", f_field)?;

    let rho_sub = model.subgroup(&g, |t, _| t == 0)?;
    let rho = ctx.field_of(&rho_sub)?;
    ctx.name_field(&format!("Q({d}rt{l})"), rho)?;
    for m in (3..d).filter(|m| d % m == 0) {
        let h = model.subgroup(&g, |t, _| t % m == 0)?;
        name_subgroup(&mut ctx, &format!("Q({m}rt{l})"), &h)?;
    }
    let e_rho = ctx.compositum(e_field, rho);
    let big_l = ctx.compositum(f_field, rho);
    ctx.name_field("L", big_l)?;
    ctx.name_field("E(rho)", e_rho)?;
    let top = ctx.top_closure();
    ctx.name_field(&format!("Q(zeta{e},{d}rt{l})"), top)?;
    ctx.set_distinguished(big_l);

    if ctx.degree(big_l, base)? as u64 != n * d || ctx.degree(e_rho, e_field)? as u64 != d {
        return Err(Error::TheoremViolation("cyclo-radical degrees are inconsistent".into()));
    }
    ctx.add_note(format!(
        "F is the fixed field of the least subgroup of order {} in Gal(Q(zeta{n2})/Q)",
        totient(n2) / n
    ));
    Ok(ctx)
}

// ---------------------------------------------------------------------------
// S_n closures of Xⁿ − X − 1

pub fn selmer_serre_context(n: i64, bounds: Bounds) -> Result<GaloisContext> {
    if !(3..=5).contains(&n) {
        return Err(Error::Precondition(format!("selmer-serre preset needs 3 ≤ n ≤ 5, got {n}")));
    }
    let n = n as usize;
    let cycle = Permutation::from_cycles(n, &[(0..n as u32).collect()])?;
    let swap = Permutation::from_cycles(n, &[vec![0, 1]])?;
    let g = Group::generate_bounded(n, vec![cycle, swap], bounds.closure)?;
    let mut ctx = GaloisContext::new(g.clone(), bounds)?;
    ctx.name_field("Q", ctx.base())?;
    let stab: Vec<u32> = (0..g.order() as u32)
        .filter(|&x| g.element(x).apply(n as u32 - 1) == n as u32 - 1)
        .collect();
    let l = name_subgroup(&mut ctx, "Q(theta)", &g.subgroup_from_elements(&stab)?)?;
    ctx.name_field("splitting", ctx.top_closure())?;
    ctx.set_distinguished(l);
    Ok(ctx)
}

// ---------------------------------------------------------------------------
// small named groups

fn small_group_generators(name: &str) -> Option<(usize, &'static [&'static str])> {
    Some(match name {
        "trivial" => (1, &[]),
        "C2" => (2, &["(1 2)"]),
        "C3" => (3, &["(1 2 3)"]),
        "C4" => (4, &["(1 2 3 4)"]),
        "V4" => (4, &["(1 2)(3 4)", "(1 3)(2 4)"]),
        "S3" => (3, &["(1 2 3)", "(1 2)"]),
        "C6" => (6, &["(1 2 3 4 5 6)"]),
        "D8" => (4, &["(1 2 3 4)", "(1 3)"]),
        "Q8" => (8, &["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"]),
        "C2^3" => (6, &["(1 2)", "(3 4)", "(5 6)"]),
        "D10" => (5, &["(1 2 3 4 5)", "(2 5)(3 4)"]),
        "A4" => (4, &["(1 2 3)", "(1 2)(3 4)"]),
        "S4" => (4, &["(1 2 3 4)", "(1 2)"]),
        "A5" => (5, &["(1 2 3 4 5)", "(1 2 3)"]),
        _ => return None,
    })
}

/// A bare context for a small named group; the distinguished field is the
/// fixed field of the stabiliser of point 1.
pub fn small_group_context(name: &str, bounds: Bounds) -> Result<GaloisContext> {
    let (degree, gens) = small_group_generators(name)
        .ok_or_else(|| Error::Parse(format!("unknown group {name:?}")))?;
    let gens = gens
        .iter()
        .map(|s| Permutation::parse_cycles(degree, s))
        .collect::<Result<_>>()?;
    let g = Group::generate_bounded(degree, gens, bounds.closure)?;
    let mut ctx = GaloisContext::new(g.clone(), bounds)?;
    let stab: Vec<u32> = (0..g.order() as u32)
        .filter(|&x| g.element(x).apply(0) == 0)
        .collect();
    let l = name_subgroup(&mut ctx, "Stab(1)", &g.subgroup_from_elements(&stab)?)?;
    ctx.set_distinguished(l);
    Ok(ctx)
}

// ---------------------------------------------------------------------------
// instance files

/// JSON object read as an ordered list of entries, rejecting repeated keys.
struct FieldMap(Vec<(String, Vec<String>)>);

impl<'de> Deserialize<'de> for FieldMap {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = FieldMap;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from field names to generator lists")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<FieldMap, A::Error> {
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, Vec<String>>()? {
                    if !seen.insert(k.clone()) {
                        return Err(serde::de::Error::custom(format!("duplicate field name {k:?}")));
                    }
                    out.push((k, v));
                }
                Ok(FieldMap(out))
            }
        }
        de.deserialize_map(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Instance {
    degree: usize,
    generators: Vec<String>,
    #[serde(default)]
    fields: Option<FieldMap>,
    #[serde(default)]
    distinguished: Option<String>,
}

pub fn from_file(path: impl AsRef<Path>, bounds: Bounds) -> Result<GaloisContext> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    from_instance_text(&text, bounds)
}

/// Parses the JSON instance format:
/// `{"degree": N, "generators": [...], "fields": {"L": [...]}, "distinguished": "L"}`.
pub fn from_instance_text(text: &str, bounds: Bounds) -> Result<GaloisContext> {
    let inst: Instance = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let parse = |s: &String| Permutation::parse_cycles(inst.degree, s);
    let gens = inst.generators.iter().map(parse).collect::<Result<_>>()?;
    let g = Group::generate_bounded(inst.degree, gens, bounds.closure)?;
    let mut ctx = GaloisContext::new(g.clone(), bounds)?;
    for (name, field_gens) in inst.fields.map(|m| m.0).unwrap_or_default() {
        let perms = field_gens.iter().map(parse).collect::<Result<Vec<_>>>()?;
        let h = g.subgroup_from_perms(&perms).map_err(|e| {
            Error::Precondition(format!("field {name:?} is not given by a subgroup: {e}"))
        })?;
        name_subgroup(&mut ctx, &name, &h)?;
    }
    if let Some(d) = inst.distinguished {
        let f = ctx.field(&d)?;
        ctx.set_distinguished(f);
    }
    Ok(ctx)
}
