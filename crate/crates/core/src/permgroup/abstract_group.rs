use serde::Serialize;

use super::bitset::BitSet;
use crate::error::{Error, Result};

/// Orders above this skip the cubic associativity check on construction.
const ASSOCIATIVITY_CHECK_LIMIT: usize = 200;

/// A finite group given by its multiplication table on labels `0..order`,
/// with label 0 the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

/// A label mapping `φ` with `φ(a·b) = φ(a)·φ(b)`, stored as `images[a] = φ(a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Isomorphism {
    pub images: Vec<u32>,
}

impl AbstractGroup {
    pub fn from_table(order: usize, table: Vec<u32>) -> Result<Self> {
        let bad = |msg: &str| Err(Error::Precondition(format!("not a group table: {msg}")));
        if order == 0 || table.len() != order * order {
            return bad("wrong table size");
        }
        if table.iter().any(|&x| x as usize >= order) {
            return bad("label out of range");
        }
        for a in 0..order {
            if table[a] as usize != a || table[a * order] as usize != a {
                return bad("label 0 is not the identity");
            }
        }
        let mut inverse = vec![u32::MAX; order];
        for a in 0..order {
            match (0..order).find(|&b| table[a * order + b] == 0) {
                Some(b) if table[b * order + a] == 0 => inverse[a] = b as u32,
                _ => return bad("missing inverse"),
            }
        }
        if order <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    let ab = table[a * order + b] as usize;
                    for c in 0..order {
                        let bc = table[b * order + c] as usize;
                        if table[ab * order + c] != table[a * order + bc] {
                            return bad("not associative");
                        }
                    }
                }
            }
        }
        Ok(AbstractGroup {
            order,
            table,
            inverse,
        })
    }

    pub fn trivial() -> Self {
        AbstractGroup {
            order: 1,
            table: vec![0],
            inverse: vec![0],
        }
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
            .collect();
        Self::from_table(n, table).expect("cyclic table")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
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

    /// Sorted multiset of element orders.
    pub fn order_statistics(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order as u32).map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    fn close(&self, mut members: BitSet, gens: &[u32]) -> BitSet {
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

    /// Generating set chosen greedily, largest element orders first.
    pub fn generating_set(&self) -> Vec<u32> {
        let mut candidates: Vec<u32> = (1..self.order as u32).collect();
        candidates.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut span = BitSet::from_indices(self.order, [0]);
        for x in candidates {
            if !span.contains(x as usize) {
                gens.push(x);
                span = self.close(span, &gens);
                if span.len() == self.order {
                    break;
                }
            }
        }
        gens
    }

    fn normal_closure_of(&self, x: u32, group_gens: &[u32]) -> BitSet {
        let mut gens = vec![x];
        let mut members = self.close(BitSet::from_indices(self.order, [0]), &gens);
        loop {
            let fresh: Vec<u32> = group_gens
                .iter()
                .flat_map(|&g| gens.iter().map(move |&y| (g, y)))
                .map(|(g, y)| self.mul(self.mul(g, y), self.inv(g)))
                .filter(|&z| !members.contains(z as usize))
                .collect();
            if fresh.is_empty() {
                return members;
            }
            gens.extend(&fresh);
            members = self.close(members, &gens);
        }
    }

    /// True iff the group is nontrivial with no proper nontrivial normal subgroup.
    pub fn is_simple(&self, bound: usize) -> Result<bool> {
        if self.order > bound {
            return Err(Error::BoundExceeded {
                what: "simplicity test",
                bound,
            });
        }
        if self.order == 1 {
            return Ok(false);
        }
        let gens = self.generating_set();
        Ok((1..self.order as u32).all(|x| self.normal_closure_of(x, &gens).len() == self.order))
    }

    /// Checks that `iso` is a bijective homomorphism from `self` onto `other`.
    pub fn verify_isomorphism(&self, other: &AbstractGroup, iso: &Isomorphism) -> bool {
        if self.order != other.order || iso.images.len() != self.order {
            return false;
        }
        let mut seen = vec![false; self.order];
        for &y in &iso.images {
            if y as usize >= other.order || std::mem::replace(&mut seen[y as usize], true) {
                return false;
            }
        }
        (0..self.order as u32).all(|a| {
            (0..self.order as u32).all(|b| {
                iso.images[self.mul(a, b) as usize]
                    == other.mul(iso.images[a as usize], iso.images[b as usize])
            })
        })
    }
}

/// Searches for an isomorphism `g1 → g2`.
///
/// Backtracks over images of a greedy generating set of `g1`, only trying
/// targets of matching element order, and extends each partial assignment
/// along the Cayley graph to reject inconsistent or non-injective choices
/// early. Deterministic: the first isomorphism in candidate order is returned.
pub fn are_isomorphic(
    g1: &AbstractGroup,
    g2: &AbstractGroup,
    bound: usize,
) -> Result<Option<Isomorphism>> {
    if g1.order.max(g2.order) > bound {
        return Err(Error::BoundExceeded {
            what: "isomorphism test",
            bound,
        });
    }
    if g1.order != g2.order || g1.order_statistics() != g2.order_statistics() {
        return Ok(None);
    }
    let gens = g1.generating_set();
    let orders2: Vec<usize> = (0..g2.order as u32).map(|a| g2.element_order(a)).collect();
    let candidates: Vec<Vec<u32>> = gens
        .iter()
        .map(|&g| {
            let o = g1.element_order(g);
            (0..g2.order as u32).filter(|&b| orders2[b as usize] == o).collect()
        })
        .collect();
    let mut map = vec![u32::MAX; g1.order];
    map[0] = 0;
    let mut images = Vec::with_capacity(gens.len());
    if search(g1, g2, &gens, &candidates, &mut images, &mut map) {
        let iso = Isomorphism { images: map };
        debug_assert!(g1.verify_isomorphism(g2, &iso));
        Ok(Some(iso))
    } else {
        Ok(None)
    }
}

fn search(
    g1: &AbstractGroup,
    g2: &AbstractGroup,
    gens: &[u32],
    candidates: &[Vec<u32>],
    images: &mut Vec<u32>,
    map: &mut Vec<u32>,
) -> bool {
    let depth = images.len();
    if depth == gens.len() {
        return map.iter().all(|&y| y != u32::MAX);
    }
    for &h in &candidates[depth] {
        images.push(h);
        if let Some(extended) = extend(g1, g2, &gens[..=depth], images, map) {
            let saved = std::mem::replace(map, extended);
            if search(g1, g2, gens, candidates, images, map) {
                return true;
            }
            *map = saved;
        }
        images.pop();
    }
    false
}

/// Propagates a partial homomorphism over the subgroup generated by `gens`.
fn extend(
    g1: &AbstractGroup,
    g2: &AbstractGroup,
    gens: &[u32],
    images: &[u32],
    map: &[u32],
) -> Option<Vec<u32>> {
    let mut map = map.to_vec();
    let mut used = vec![false; g2.order];
    let mut queue = Vec::new();
    for (x, &y) in map.iter().enumerate() {
        if y != u32::MAX {
            used[y as usize] = true;
            queue.push(x as u32);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let y = map[x as usize];
        for (&g, &h) in gens.iter().zip(images) {
            let z = g1.mul(x, g);
            let w = g2.mul(y, h);
            match map[z as usize] {
                u32::MAX => {
                    if std::mem::replace(&mut used[w as usize], true) {
                        return None;
                    }
                    map[z as usize] = w;
                    queue.push(z);
                }
                existing if existing != w => return None,
                _ => {}
            }
        }
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::{Group, Permutation};

    fn from_perms(degree: usize, gens: &[&str]) -> AbstractGroup {
        let gens = gens
            .iter()
            .map(|s| Permutation::parse_cycles(degree, s).unwrap())
            .collect();
        let g = Group::generate(degree, gens).unwrap();
        g.trivial().quotient_of(&g.full()).unwrap()
    }

    fn klein() -> AbstractGroup {
        from_perms(4, &["(1 2)(3 4)", "(1 3)(2 4)"])
    }

    #[test]
    fn rejects_non_groups() {
        assert!(AbstractGroup::from_table(2, vec![0, 1, 1, 1]).is_err());
        assert!(AbstractGroup::from_table(2, vec![1, 0, 0, 1]).is_err());
        assert!(AbstractGroup::from_table(2, vec![0, 1]).is_err());
    }

    #[test]
    fn self_isomorphism_is_identity() {
        let s3 = from_perms(3, &["(1 2 3)", "(1 2)"]);
        let iso = are_isomorphic(&s3, &s3, 200).unwrap().unwrap();
        assert_eq!(iso.images, (0..6).collect::<Vec<u32>>());
    }

    #[test]
    fn c4_is_not_klein() {
        assert!(are_isomorphic(&AbstractGroup::cyclic(4), &klein(), 200)
            .unwrap()
            .is_none());
    }

    #[test]
    fn s3_is_dihedral_of_order_6() {
        let s3 = from_perms(3, &["(1 2 3)", "(1 2)"]);
        let d6 = from_perms(6, &["(1 2 3 4 5 6)", "(1 4)(2 3)(5 6)", "(1 3 5)(2 4 6)"]);
        let dih = from_perms(6, &["(1 3 5)(2 4 6)", "(1 2)(3 6)(4 5)"]);
        assert_eq!(dih.order(), 6);
        let iso = are_isomorphic(&s3, &dih, 200).unwrap().unwrap();
        assert!(s3.verify_isomorphism(&dih, &iso));
        assert_eq!(d6.order(), 12);
    }

    #[test]
    fn isomorphism_bound() {
        let c = AbstractGroup::cyclic(10);
        assert!(are_isomorphic(&c, &c, 5).is_err());
    }

    #[test]
    fn simplicity() {
        assert!(AbstractGroup::cyclic(5).is_simple(200).unwrap());
        assert!(!AbstractGroup::cyclic(4).is_simple(200).unwrap());
        assert!(!AbstractGroup::trivial().is_simple(200).unwrap());
        assert!(!from_perms(3, &["(1 2 3)", "(1 2)"]).is_simple(200).unwrap());
        let a5 = from_perms(5, &["(1 2 3)", "(1 2 3 4 5)"]);
        assert_eq!(a5.order(), 60);
        assert!(a5.is_simple(200).unwrap());
        assert!(a5.is_simple(10).is_err());
    }

    #[test]
    fn generating_set_generates() {
        let g = from_perms(4, &["(1 2 3 4)", "(1 2)"]);
        let gens = g.generating_set();
        let span = g.close(BitSet::from_indices(g.order(), [0]), &gens);
        assert_eq!(span.len(), 24);
        assert!(gens.len() <= 3);
    }
}
