//! Finite permutation groups small enough to enumerate: closure, subgroup
//! lattices, normality, (sub)normal closures, quotients and isomorphism.
//!
//! Points are 0-based internally. Text input and output use 1-based disjoint
//! cycle notation.

mod abstract_group;
mod bitset;
mod group;
mod perm;

use std::sync::Arc;

pub use abstract_group::{are_isomorphic, AbstractGroup, Isomorphism};
pub use bitset::BitSet;
pub use group::{all_subgroups, Bounds, Group, Subgroup};
pub use perm::Permutation;

use crate::error::{Error, Result};

pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    p.compose(q)
}

pub fn generate(degree: usize, generators: Vec<Permutation>) -> Result<Arc<Group>> {
    Group::generate(degree, generators)
}

pub fn is_normal(a: &Subgroup, b: &Subgroup) -> Result<bool> {
    a.is_normal_in(b)
}

pub fn normal_closure(h: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    h.normal_closure(b)
}

pub fn subnormal_closure(h: &Subgroup, b: &Subgroup) -> Result<(Subgroup, Vec<Subgroup>)> {
    h.subnormal_closure(b)
}

pub fn intersection(a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    a.intersection(b)
}

pub fn join(a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    a.join(b)
}

/// `b / n` on canonical coset representatives.
pub fn quotient(b: &Subgroup, n: &Subgroup) -> Result<AbstractGroup> {
    n.quotient_of(b)
}

pub fn is_simple(g: &AbstractGroup) -> Result<bool> {
    g.is_simple(Bounds::default().isomorphism)
}

/// Parses the group text format: a `degree: N` line followed by one
/// generator per line in 1-based cycle notation. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_group_text(text: &str) -> Result<Arc<Group>> {
    let mut degree = None;
    let mut gens = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |e: Error| Error::Parse(format!("line {}: {e}", lineno + 1));
        match degree {
            None => {
                let value = line
                    .strip_prefix("degree")
                    .and_then(|r| r.trim_start().strip_prefix(':'))
                    .ok_or_else(|| at(Error::Parse("expected `degree: N`".into())))?;
                degree = Some(
                    value
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| at(Error::Parse(format!("bad degree {value:?}"))))?,
                );
            }
            Some(n) => gens.push(Permutation::parse_cycles(n, line).map_err(at)?),
        }
    }
    let degree = degree.ok_or_else(|| Error::Parse("missing `degree: N` line".into()))?;
    Group::generate(degree, gens)
}

/// Inverse of [`parse_group_text`] for the group's stored generators.
pub fn format_group_text(group: &Group) -> String {
    let mut out = format!("degree: {}\n", group.degree());
    for g in group.generators() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}
