use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::abstract_group::AbstractGroup;
use super::bitset::BitSet;
use super::perm::Permutation;
use crate::error::{Error, Result};

/// Size limits for the exponential or quadratic parts of the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest group `generate` will close.
    pub closure: usize,
    /// Largest group whose subgroups `all_subgroups` will enumerate.
    pub enumeration: usize,
    /// Largest abstract group handed to isomorphism and simplicity tests.
    pub isomorphism: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            closure: 10_000,
            enumeration: 384,
            isomorphism: 200,
        }
    }
}

/// Groups up to this order get a precomputed multiplication table.
const TABLE_LIMIT: usize = 1024;

/// A finite permutation group with its full, canonically ordered element list.
///
/// Elements are addressed by their index in the sorted element list; index 0
/// is always the identity.
pub struct Group {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    table: Option<Vec<u32>>,
    inverse: Vec<u32>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field(
                "generators",
                &self.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for Group {}

impl Group {
    pub fn generate(degree: usize, generators: Vec<Permutation>) -> Result<Arc<Group>> {
        Self::generate_bounded(degree, generators, Bounds::default().closure)
    }

    pub fn generate_bounded(
        degree: usize,
        generators: Vec<Permutation>,
        bound: usize,
    ) -> Result<Arc<Group>> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = vec![id];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head].clone();
            head += 1;
            for g in &generators {
                let y = x.compose_unchecked(g);
                if seen.insert(y.clone()) {
                    if seen.len() > bound {
                        return Err(Error::BoundExceeded {
                            what: "group closure",
                            bound,
                        });
                    }
                    queue.push(y);
                }
            }
        }
        let mut elements = queue;
        elements.sort();
        Ok(Arc::new(Self::from_sorted(degree, generators, elements)))
    }

    fn from_sorted(degree: usize, generators: Vec<Permutation>, elements: Vec<Permutation>) -> Group {
        let index: HashMap<Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let n = elements.len();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(index[&a.compose_unchecked(b)]);
                }
            }
            t
        });
        let inverse = elements.iter().map(|p| index[&p.inverse()]).collect();
        Group {
            degree,
            generators,
            elements,
            index,
            table,
            inverse,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: u32) -> &Permutation {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<u32> {
        self.index.get(p).copied()
    }

    /// Index of `elements[a] ∘ elements[b]`.
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.elements.len() + b as usize],
            None => {
                self.index[&self.elements[a as usize].compose_unchecked(&self.elements[b as usize])]
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// `g x g⁻¹`
    #[inline]
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: u32) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn full(self: &Arc<Self>) -> Subgroup {
        let gens: Vec<u32> = self
            .generators
            .iter()
            .map(|g| self.index[g])
            .filter(|&i| i != 0)
            .collect();
        let members = BitSet::from_indices(self.order(), 0..self.order());
        Subgroup::from_parts(self.clone(), members, gens)
    }

    pub fn trivial(self: &Arc<Self>) -> Subgroup {
        Subgroup::from_parts(self.clone(), BitSet::from_indices(self.order(), [0]), Vec::new())
    }

    /// Subgroup generated by the given element indices.
    pub fn subgroup_generated(self: &Arc<Self>, gens: &[u32]) -> Subgroup {
        let start = BitSet::from_indices(self.order(), [0]);
        let members = self.close(start, gens);
        let gens = gens.iter().copied().filter(|&g| g != 0).collect();
        Subgroup::from_parts(self.clone(), members, gens)
    }

    /// Subgroup generated by permutations that must be elements of this group.
    pub fn subgroup_from_perms(self: &Arc<Self>, perms: &[Permutation]) -> Result<Subgroup> {
        let mut gens = Vec::with_capacity(perms.len());
        for p in perms {
            if p.degree() != self.degree {
                return Err(Error::DegreeMismatch(self.degree, p.degree()));
            }
            gens.push(self.index_of(p).ok_or_else(|| {
                Error::Precondition(format!("{p} is not an element of the group"))
            })?);
        }
        Ok(self.subgroup_generated(&gens))
    }

    /// Subgroup with exactly the given elements; fails unless they form a group.
    pub fn subgroup_from_elements(self: &Arc<Self>, elements: &[u32]) -> Result<Subgroup> {
        let members = BitSet::from_indices(self.order(), elements.iter().map(|&e| e as usize));
        if !members.contains(0) {
            return Err(Error::Precondition("element set lacks the identity".into()));
        }
        for a in members.iter() {
            for b in members.iter() {
                if !members.contains(self.mul(a as u32, b as u32) as usize) {
                    return Err(Error::Precondition(
                        "element set is not closed under composition".into(),
                    ));
                }
            }
        }
        Ok(Subgroup::from_members(self.clone(), members))
    }

    /// Right-multiplication closure of `start` under `gens`. When `start` is
    /// a subgroup (or just the identity) the result is the generated subgroup.
    fn close(&self, start: BitSet, gens: &[u32]) -> BitSet {
        let mut members = start;
        let mut queue: Vec<u32> = members.iter().map(|i| i as u32).collect();
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if members.insert(y as usize) {
                    queue.push(y);
                }
            }
        }
        members
    }
}

/// A subgroup of a [`Group`], identified by its sorted element indices.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<Group>,
    members: BitSet,
    elements: Vec<u32>,
    gens: Vec<u32>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, {:?})", self.order(), self.elements)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state)
    }
}

/// Canonical subgroup order: by order, then lexicographically by elements.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.elements.len(), &self.elements).cmp(&(other.elements.len(), &other.elements))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Subgroup {
    fn from_parts(parent: Arc<Group>, members: BitSet, gens: Vec<u32>) -> Subgroup {
        let elements = members.iter().map(|i| i as u32).collect();
        Subgroup {
            parent,
            members,
            elements,
            gens,
        }
    }

    /// Wraps a member set already known to be closed, picking generators greedily.
    fn from_members(parent: Arc<Group>, members: BitSet) -> Subgroup {
        let mut gens = Vec::new();
        let mut span = BitSet::from_indices(parent.order(), [0]);
        for x in members.iter() {
            if !span.contains(x) {
                gens.push(x as u32);
                span = parent.close(span, &gens);
            }
        }
        Subgroup::from_parts(parent, members, gens)
    }

    pub fn parent(&self) -> &Arc<Group> {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    /// A small generating set (never contains the identity).
    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn contains(&self, x: u32) -> bool {
        self.members.contains(x as usize)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn same_parent(&self, other: &Subgroup) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) || *self.parent == *other.parent
    }

    fn check_parent(&self, other: &Subgroup) -> Result<()> {
        if self.same_parent(other) {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    fn check_nested(&self, outer: &Subgroup) -> Result<()> {
        self.check_parent(outer)?;
        if self.is_subgroup_of(outer) {
            Ok(())
        } else {
            Err(Error::NotNested(format!(
                "subgroup of order {} is not contained in subgroup of order {}",
                self.order(),
                outer.order()
            )))
        }
    }

    /// Subgroup generated by `self` and extra elements.
    pub fn extend(&self, extra: &[u32]) -> Subgroup {
        let fresh: Vec<u32> = extra.iter().copied().filter(|&x| !self.contains(x)).collect();
        if fresh.is_empty() {
            return self.clone();
        }
        let mut gens = self.gens.clone();
        gens.extend(&fresh);
        let members = self.parent.close(self.members.clone(), &gens);
        Subgroup::from_parts(self.parent.clone(), members, gens)
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check_parent(other)?;
        Ok(Subgroup::from_members(
            self.parent.clone(),
            self.members.intersection(&other.members),
        ))
    }

    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check_parent(other)?;
        Ok(self.extend(&other.gens))
    }

    /// `g H g⁻¹`
    pub fn conjugate(&self, g: u32) -> Subgroup {
        let members = BitSet::from_indices(
            self.parent.order(),
            self.elements.iter().map(|&x| self.parent.conj(g, x) as usize),
        );
        let gens = self.gens.iter().map(|&x| self.parent.conj(g, x)).collect();
        Subgroup::from_parts(self.parent.clone(), members, gens)
    }

    /// Whether `self` is normal in `outer`; requires `self ⊆ outer`.
    pub fn is_normal_in(&self, outer: &Subgroup) -> Result<bool> {
        self.check_nested(outer)?;
        Ok(self.is_normal_in_unchecked(outer))
    }

    pub(crate) fn is_normal_in_unchecked(&self, outer: &Subgroup) -> bool {
        let g = &self.parent;
        outer
            .gens
            .iter()
            .all(|&b| self.gens.iter().all(|&a| self.contains(g.conj(g.inv(b), a))))
    }

    /// Smallest normal subgroup of `outer` containing `self`.
    pub fn normal_closure(&self, outer: &Subgroup) -> Result<Subgroup> {
        self.check_nested(outer)?;
        Ok(self.normal_closure_unchecked(outer))
    }

    pub(crate) fn normal_closure_unchecked(&self, outer: &Subgroup) -> Subgroup {
        let g = &self.parent;
        let mut n = self.clone();
        loop {
            let fresh: Vec<u32> = outer
                .gens
                .iter()
                .flat_map(|&b| n.gens.iter().map(move |&x| (b, x)))
                .map(|(b, x)| g.conj(b, x))
                .filter(|&y| !n.contains(y))
                .collect();
            if fresh.is_empty() {
                return n;
            }
            n = n.extend(&fresh);
        }
    }

    /// Smallest subgroup containing `self` that is subnormal in `outer`,
    /// together with the descending chain of iterated normal closures
    /// `outer = S₀ ⊵ S₁ ⊵ … ⊵ S_k`.
    pub fn subnormal_closure(&self, outer: &Subgroup) -> Result<(Subgroup, Vec<Subgroup>)> {
        self.check_nested(outer)?;
        let mut chain = vec![outer.clone()];
        loop {
            let last = chain.last().unwrap();
            let next = self.normal_closure_unchecked(last);
            if next == *last {
                break;
            }
            chain.push(next);
        }
        Ok((chain.last().unwrap().clone(), chain))
    }

    /// `outer / self` as an abstract group on coset labels. Labels follow the
    /// canonical order of each coset's least element.
    pub fn quotient_of(&self, outer: &Subgroup) -> Result<AbstractGroup> {
        if !self.is_normal_in(outer)? {
            return Err(Error::NotNormal(format!(
                "subgroup of order {} is not normal in subgroup of order {}",
                self.order(),
                outer.order()
            )));
        }
        let g = &self.parent;
        let mut label = vec![u32::MAX; g.order()];
        let mut reps = Vec::new();
        for &b in &outer.elements {
            if label[b as usize] != u32::MAX {
                continue;
            }
            let l = reps.len() as u32;
            reps.push(b);
            for &n in &self.elements {
                label[g.mul(b, n) as usize] = l;
            }
        }
        let k = reps.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &reps {
            for &b in &reps {
                table.push(label[g.mul(a, b) as usize]);
            }
        }
        AbstractGroup::from_table(k, table)
    }
}

/// Every subgroup of `group`, each exactly once, in canonical subgroup order.
///
/// Starts from the cyclic subgroups and joins each known subgroup with each
/// cyclic subgroup until nothing new appears.
pub fn all_subgroups(group: &Arc<Group>, bound: usize) -> Result<Vec<Subgroup>> {
    if group.order() > bound {
        return Err(Error::BoundExceeded {
            what: "subgroup enumeration",
            bound,
        });
    }
    let mut seen: HashSet<BitSet> = HashSet::new();
    let mut cyclics: Vec<Subgroup> = Vec::new();
    for x in 0..group.order() as u32 {
        let c = group.subgroup_generated(&[x]);
        if seen.insert(c.members.clone()) {
            cyclics.push(c);
        }
    }
    let mut found = cyclics.clone();
    let mut head = 0;
    while head < found.len() {
        let h = found[head].clone();
        head += 1;
        for c in &cyclics {
            if c.is_subgroup_of(&h) {
                continue;
            }
            let j = h.extend(&c.gens);
            if seen.insert(j.members.clone()) {
                found.push(j);
            }
        }
    }
    found.sort();
    Ok(found)
}
