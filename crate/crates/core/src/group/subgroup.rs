use std::collections::BTreeSet;

use super::GroupTable;
use crate::error::{HspError, Result};

/// A subgroup as a sorted list of element indices of its parent table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    parent_order: usize,
    elements: Vec<usize>,
}

impl Subgroup {
    /// Validates that `elements` is a subgroup of `group`.
    pub fn new(group: &GroupTable, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = elements.into_iter().collect();
        for &g in &set {
            group.check_index(g)?;
        }
        if !set.contains(&group.identity()) {
            return Err(HspError::NotASubgroup("missing the identity".into()));
        }
        for &a in &set {
            if !set.contains(&group.inv(a)) {
                return Err(HspError::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &set {
                if !set.contains(&group.mul(a, b)) {
                    return Err(HspError::NotASubgroup(format!("{a}·{b} missing")));
                }
            }
        }
        Ok(Subgroup {
            parent_order: group.order(),
            elements: set.into_iter().collect(),
        })
    }

    pub fn whole(group: &GroupTable) -> Self {
        Subgroup {
            parent_order: group.order(),
            elements: group.elements().collect(),
        }
    }

    pub fn trivial(group: &GroupTable) -> Self {
        Subgroup {
            parent_order: group.order(),
            elements: vec![group.identity()],
        }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    /// `[G:H]`.
    pub fn index(&self) -> usize {
        self.parent_order / self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    /// Cheap consistency check against a parent table.
    pub fn check_parent(&self, group: &GroupTable) -> Result<()> {
        if self.parent_order != group.order() {
            return Err(HspError::NotASubgroup(format!(
                "subgroup belongs to a group of order {}, not {}",
                self.parent_order,
                group.order()
            )));
        }
        Ok(())
    }

    pub fn is_normal_in(&self, group: &GroupTable) -> bool {
        group
            .elements()
            .all(|g| self.elements.iter().all(|&h| self.contains(group.conjugate(g, h))))
    }

    fn conjugated_by(&self, group: &GroupTable, g: usize) -> Subgroup {
        let mut elements: Vec<usize> = self
            .elements
            .iter()
            .map(|&h| group.conjugate(g, h))
            .collect();
        elements.sort_unstable();
        Subgroup {
            parent_order: self.parent_order,
            elements,
        }
    }
}

/// Smallest subgroup containing `generators`.
pub fn subgroup_closure(group: &GroupTable, generators: &[usize]) -> Result<Subgroup> {
    for &g in generators {
        group.check_index(g)?;
    }
    let mut members: BTreeSet<usize> = BTreeSet::from([group.identity()]);
    let mut frontier: Vec<usize> = vec![group.identity()];
    // In a finite group, closure under right multiplication by generators
    // already yields inverses.
    while let Some(x) = frontier.pop() {
        for &s in generators {
            let y = group.mul(x, s);
            if members.insert(y) {
                frontier.push(y);
            }
        }
    }
    Ok(Subgroup {
        parent_order: group.order(),
        elements: members.into_iter().collect(),
    })
}

/// Left cosets `g H` with canonical representatives.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetList {
    subgroup: Subgroup,
    reps: Vec<usize>,
    coset_of: Vec<usize>,
}

impl CosetList {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Representatives; `reps()[0]` is the identity.
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    /// `N = [G:H]`.
    pub fn index(&self) -> usize {
        self.reps.len()
    }

    /// Position of the coset containing `g`.
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// Elements of coset number `c`, ascending.
    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.coset_of.len())
            .filter(|&g| self.coset_of[g] == c)
            .collect()
    }

    /// Same partition with the cosets listed in a different order.
    /// `order[i]` is the old position of the coset placed at position `i`.
    pub fn permuted(&self, order: &[usize]) -> Result<CosetList> {
        let n = self.index();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&o| o >= n || std::mem::replace(&mut seen[o], true)) {
            return Err(HspError::OutOfRange("coset order is not a permutation".into()));
        }
        let mut new_pos = vec![0; n];
        for (i, &old) in order.iter().enumerate() {
            new_pos[old] = i;
        }
        Ok(CosetList {
            subgroup: self.subgroup.clone(),
            reps: order.iter().map(|&o| self.reps[o]).collect(),
            coset_of: self.coset_of.iter().map(|&c| new_pos[c]).collect(),
        })
    }
}

/// Canonical left cosets: scan elements ascending, open a new coset at the
/// lowest unassigned element. The identity's coset is always first.
pub fn left_cosets(group: &GroupTable, subgroup: &Subgroup) -> Result<CosetList> {
    subgroup.check_parent(group)?;
    let subgroup = Subgroup::new(group, subgroup.elements().iter().copied())?;
    let unassigned = usize::MAX;
    let mut coset_of = vec![unassigned; group.order()];
    let mut reps = Vec::with_capacity(subgroup.index());
    // identity first, then ascending
    let scan = std::iter::once(group.identity()).chain(group.elements());
    for g in scan {
        if coset_of[g] != unassigned {
            continue;
        }
        let c = reps.len();
        reps.push(g);
        for &h in subgroup.elements() {
            coset_of[group.mul(g, h)] = c;
        }
    }
    Ok(CosetList {
        subgroup,
        reps,
        coset_of,
    })
}

/// `N_G(H)` by exhaustive scan.
pub fn normalizer(group: &GroupTable, subgroup: &Subgroup) -> Result<Subgroup> {
    subgroup.check_parent(group)?;
    let elements = group
        .elements()
        .filter(|&g| subgroup.conjugated_by(group, g) == *subgroup);
    Subgroup::new(group, elements)
}

/// An ordered family of pairwise distinct subgroups.
#[derive(Debug, Clone, PartialEq)]
pub struct SubgroupFamily {
    members: Vec<Subgroup>,
}

impl SubgroupFamily {
    pub fn new(members: Vec<Subgroup>) -> Result<Self> {
        if members.is_empty() {
            return Err(HspError::InvalidFamily("family is empty".into()));
        }
        for (i, a) in members.iter().enumerate() {
            if a.parent_order() != members[0].parent_order() {
                return Err(HspError::InvalidFamily("members from different groups".into()));
            }
            if members[..i].iter().any(|b| b.elements() == a.elements()) {
                return Err(HspError::InvalidFamily(format!("member {i} is a duplicate")));
            }
        }
        Ok(SubgroupFamily { members })
    }

    pub fn members(&self) -> &[Subgroup] {
        &self.members
    }

    /// `K`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn max_index(&self) -> usize {
        self.members.iter().map(Subgroup::index).max().unwrap_or(1)
    }

    /// True when the members are exactly the conjugates of the first one.
    pub fn is_conjugacy_class(&self, group: &GroupTable) -> bool {
        conjugacy_family(group, &self.members[0])
            .map(|f| {
                f.len() == self.len()
                    && f.members.iter().all(|m| self.members.contains(m))
            })
            .unwrap_or(false)
    }
}

/// All distinct conjugates `g H g⁻¹`, in order of first appearance as `g`
/// runs over the elements ascending (so `H` itself comes first).
pub fn conjugacy_family(group: &GroupTable, subgroup: &Subgroup) -> Result<SubgroupFamily> {
    subgroup.check_parent(group)?;
    let mut members: Vec<Subgroup> = Vec::new();
    for g in group.elements() {
        let conj = subgroup.conjugated_by(group, g);
        if !members.contains(&conj) {
            members.push(conj);
        }
    }
    // identity is index 0 in every built group; make H lead regardless
    if let Some(pos) = members.iter().position(|m| m == subgroup) {
        let h = members.remove(pos);
        members.insert(0, h);
    }
    SubgroupFamily::new(members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    fn group(s: &str) -> GroupTable {
        build_group(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn closure_examples() {
        let s3 = group("symmetric:3");
        let t = s3.parse_generators("(12)").unwrap();
        assert_eq!(subgroup_closure(&s3, &t).unwrap().order(), 2);
        let d4 = group("dihedral:4");
        let rot = subgroup_closure(&d4, &[1]).unwrap();
        assert_eq!(rot.elements(), &[0, 1, 2, 3]);
        assert_eq!(subgroup_closure(&d4, &[]).unwrap().elements(), &[0]);
        assert!(subgroup_closure(&d4, &[8]).is_err());
    }

    #[test]
    fn coset_examples() {
        let z4 = group("cyclic:4");
        let h = Subgroup::new(&z4, [0, 2]).unwrap();
        let cosets = left_cosets(&z4, &h).unwrap();
        assert_eq!(cosets.reps(), &[0, 1]);
        assert_eq!(cosets.members(0), vec![0, 2]);
        assert_eq!(cosets.members(1), vec![1, 3]);

        let s3 = group("symmetric:3");
        let a3 = subgroup_closure(&s3, &s3.parse_generators("(123)").unwrap()).unwrap();
        assert_eq!(left_cosets(&s3, &a3).unwrap().index(), 2);
        assert_eq!(left_cosets(&s3, &Subgroup::trivial(&s3)).unwrap().index(), 6);
    }

    #[test]
    fn cosets_partition_the_group() {
        let d6 = group("dihedral:6");
        for gens in [vec![], vec![1], vec![2], vec![6], vec![3, 6], vec![1, 6]] {
            let h = subgroup_closure(&d6, &gens).unwrap();
            let cosets = left_cosets(&d6, &h).unwrap();
            assert_eq!(cosets.index() * h.order(), d6.order());
            assert_eq!(cosets.reps()[0], d6.identity());
            let mut seen = vec![0; d6.order()];
            for c in 0..cosets.index() {
                let members = cosets.members(c);
                assert_eq!(members.len(), h.order());
                for g in members {
                    seen[g] += 1;
                    assert!(h.contains(d6.mul(d6.inv(cosets.reps()[c]), g)));
                }
            }
            assert!(seen.iter().all(|&s| s == 1));
        }
    }

    #[test]
    fn non_subgroups_are_rejected() {
        let s3 = group("symmetric:3");
        assert!(Subgroup::new(&s3, [0, 1, 2]).is_err());
        assert!(Subgroup::new(&s3, [1]).is_err());
        assert!(Subgroup::new(&s3, [0, 9]).is_err());
        let z4 = group("cyclic:4");
        let foreign = Subgroup::whole(&s3);
        assert!(left_cosets(&z4, &foreign).is_err());
    }

    #[test]
    fn conjugates_of_a_transposition() {
        let s3 = group("symmetric:3");
        let h = subgroup_closure(&s3, &s3.parse_generators("(12)").unwrap()).unwrap();
        let fam = conjugacy_family(&s3, &h).unwrap();
        assert_eq!(fam.len(), 3);
        assert_eq!(fam.members()[0], h);
        // brute force: conjugate by every element and collect distinct sets
        let mut distinct = BTreeSet::new();
        for g in s3.elements() {
            let mut conj: Vec<usize> = h.elements().iter().map(|&x| s3.conjugate(g, x)).collect();
            conj.sort();
            distinct.insert(conj);
        }
        assert_eq!(distinct.len(), 3);
        assert!(fam.is_conjugacy_class(&s3));

        let n = normalizer(&s3, &h).unwrap();
        assert_eq!(n, h);
    }

    #[test]
    fn normal_and_abelian_cases() {
        let s3 = group("symmetric:3");
        let a3 = subgroup_closure(&s3, &s3.parse_generators("(123)").unwrap()).unwrap();
        assert!(a3.is_normal_in(&s3));
        assert_eq!(conjugacy_family(&s3, &a3).unwrap().len(), 1);
        assert_eq!(normalizer(&s3, &a3).unwrap().order(), 6);

        let z = group("product:cyclic:2,cyclic:4");
        for g in z.elements() {
            let h = subgroup_closure(&z, &[g]).unwrap();
            assert_eq!(conjugacy_family(&z, &h).unwrap().len(), 1);
            assert_eq!(normalizer(&z, &h).unwrap().order(), z.order());
        }
        let whole = Subgroup::whole(&s3);
        assert_eq!(normalizer(&s3, &whole).unwrap(), whole);
    }

    #[test]
    fn orbit_stabilizer_for_conjugates() {
        for spec in ["symmetric:4", "dihedral:5", "product:symmetric:3,cyclic:2"] {
            let g = group(spec);
            for gen in g.elements() {
                let h = subgroup_closure(&g, &[gen]).unwrap();
                let fam = conjugacy_family(&g, &h).unwrap();
                let norm = normalizer(&g, &h).unwrap();
                assert_eq!(fam.len() * norm.order(), g.order(), "{spec} ⟨{gen}⟩");
                assert!(h.elements().iter().all(|&x| norm.contains(x)));
            }
        }
    }

    #[test]
    fn families_reject_duplicates() {
        let z2 = group("cyclic:2");
        let h = Subgroup::whole(&z2);
        assert!(SubgroupFamily::new(vec![h.clone(), h]).is_err());
        assert!(SubgroupFamily::new(vec![]).is_err());
    }

    #[test]
    fn permuted_cosets_keep_the_partition() {
        let z6 = group("cyclic:6");
        let h = Subgroup::new(&z6, [0, 3]).unwrap();
        let cosets = left_cosets(&z6, &h).unwrap();
        let p = cosets.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(p.reps(), &[2, 0, 1]);
        for g in z6.elements() {
            assert_eq!(p.reps()[p.coset_of(g)], cosets.reps()[cosets.coset_of(g)]);
        }
        assert!(cosets.permuted(&[0, 0, 1]).is_err());
    }
}
