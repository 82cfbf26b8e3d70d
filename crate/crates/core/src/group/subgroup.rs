//! Subgroups, conjugacy classes, cosets and the characteristic subgroups.

use std::collections::VecDeque;
use std::sync::Arc;

use super::Group;
use crate::error::{BvhError, Result};

/// A subgroup of a parent group together with the group it induces on its own elements.
///
/// Local index `i` corresponds to the parent element `elements[i]`.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<Group>,
    elements: Vec<usize>,
    local: Vec<u32>,
    induced: Arc<Group>,
}

/// Conjugacy classes of a group, with representatives the smallest index in each class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyData {
    pub representatives: Vec<usize>,
    /// element -> position in `representatives`
    pub class_of: Vec<usize>,
    pub class_elements: Vec<Vec<usize>>,
}

impl ConjugacyData {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.class_elements.iter().map(Vec::len).collect()
    }

    pub fn representative_of(&self, a: usize) -> usize {
        self.representatives[self.class_of[a]]
    }
}

#[derive(Clone, Debug)]
pub struct CharacteristicSubgroups {
    pub center: Subgroup,
    pub derived: Subgroup,
    pub frattini: Subgroup,
}

const NONE: u32 = u32::MAX;

impl Subgroup {
    /// Build from a set of elements, checking closure.
    pub fn from_elements(parent: &Arc<Group>, elements: &[usize]) -> Result<Subgroup> {
        let mut els: Vec<usize> = elements.to_vec();
        els.sort_unstable();
        els.dedup();
        if els.iter().any(|&a| a >= parent.order()) {
            return Err(BvhError::NotSubgroup("element out of range".into()));
        }
        let mut member = vec![false; parent.order()];
        for &a in &els {
            member[a] = true;
        }
        if !member[parent.identity()] {
            return Err(BvhError::NotSubgroup("identity missing".into()));
        }
        for &a in &els {
            if !member[parent.inv(a)] {
                return Err(BvhError::NotSubgroup(format!("inverse of {} missing", parent.label(a))));
            }
            for &b in &els {
                if !member[parent.mul(a, b)] {
                    return Err(BvhError::NotSubgroup(format!(
                        "not closed: {}·{}",
                        parent.label(a),
                        parent.label(b)
                    )));
                }
            }
        }
        Ok(Self::build(parent, els))
    }

    fn build(parent: &Arc<Group>, elements: Vec<usize>) -> Subgroup {
        let mut local = vec![NONE; parent.order()];
        for (i, &a) in elements.iter().enumerate() {
            local[a] = i as u32;
        }
        let induced = if elements.len() == parent.order() {
            parent.clone()
        } else {
            let table: Vec<Vec<usize>> = elements
                .iter()
                .map(|&a| {
                    elements
                        .iter()
                        .map(|&b| local[parent.mul(a, b)] as usize)
                        .collect()
                })
                .collect();
            let labels = elements.iter().map(|&a| parent.label(a).to_string()).collect();
            let mut g = Group::from_trusted_table(
                format!("{}<{}>", parent.name(), elements.len()),
                &table,
                local[parent.identity()] as usize,
            )
            .with_labels(labels);
            if let Some(p) = parent.prime_hint() {
                g = g.with_prime(p);
            }
            Arc::new(g)
        };
        Subgroup {
            parent: parent.clone(),
            elements,
            local,
            induced,
        }
    }

    /// The subgroup generated by `gens`.
    pub fn generated(parent: &Arc<Group>, gens: &[usize]) -> Subgroup {
        let mut member = vec![false; parent.order()];
        member[parent.identity()] = true;
        let mut queue = VecDeque::from([parent.identity()]);
        while let Some(a) = queue.pop_front() {
            for &s in gens {
                let b = parent.mul(a, s);
                if !member[b] {
                    member[b] = true;
                    queue.push_back(b);
                }
            }
        }
        let els = (0..parent.order()).filter(|&a| member[a]).collect();
        Self::build(parent, els)
    }

    pub fn whole(parent: &Arc<Group>) -> Subgroup {
        Self::build(parent, (0..parent.order()).collect())
    }

    pub fn trivial(parent: &Arc<Group>) -> Subgroup {
        Self::build(parent, vec![parent.identity()])
    }

    pub fn parent(&self) -> &Arc<Group> {
        &self.parent
    }

    /// Sorted parent indices.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.elements.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.local[a] != NONE
    }

    /// The subgroup as a group in its own right.
    pub fn group(&self) -> &Arc<Group> {
        &self.induced
    }

    pub fn to_local(&self, a: usize) -> Option<usize> {
        let l = self.local[a];
        (l != NONE).then_some(l as usize)
    }

    pub fn to_parent(&self, local: usize) -> usize {
        self.elements[local]
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.parent.order()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&a| other.contains(a))
    }

    pub fn same_elements(&self, other: &Subgroup) -> bool {
        self.elements == other.elements
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let els = self.elements.iter().copied().filter(|&a| other.contains(a)).collect();
        Self::build(&self.parent, els)
    }

    /// `u H u^{-1}`
    pub fn conjugate(&self, u: usize) -> Subgroup {
        let mut els: Vec<usize> = self.elements.iter().map(|&a| self.parent.conj(u, a)).collect();
        els.sort_unstable();
        Self::build(&self.parent, els)
    }

    pub fn is_normal(&self) -> bool {
        (0..self.parent.order()).all(|u| {
            self.elements
                .iter()
                .all(|&a| self.contains(self.parent.conj(u, a)))
        })
    }

    pub fn normaliser(&self) -> Subgroup {
        let g = &self.parent;
        let els = (0..g.order())
            .filter(|&u| self.elements.iter().all(|&a| self.contains(g.conj(u, a))))
            .collect();
        Self::build(g, els)
    }

    /// Right coset representatives of `H` in the parent: for each coset `Hx` the smallest index.
    pub fn right_coset_reps(&self) -> Vec<usize> {
        let (reps, _) = self.right_coset_table();
        reps
    }

    /// Representatives and, for every parent element `x`, the representative of `Hx`.
    pub fn right_coset_table(&self) -> (Vec<usize>, Vec<usize>) {
        let g = &self.parent;
        let mut rep_of = vec![usize::MAX; g.order()];
        let mut reps = Vec::new();
        for x in 0..g.order() {
            if rep_of[x] == usize::MAX {
                reps.push(x);
                for &h in &self.elements {
                    rep_of[g.mul(h, x)] = x;
                }
            }
        }
        (reps, rep_of)
    }

    /// Lift a subgroup of the induced group back to a subgroup of the parent.
    pub fn lift(&self, inner: &Subgroup) -> Subgroup {
        let els = inner.elements().iter().map(|&l| self.elements[l]).collect();
        let mut els: Vec<usize> = els;
        els.sort_unstable();
        Self::build(&self.parent, els)
    }

    /// This subgroup viewed inside `over` (which must contain it).
    pub fn restrict_to(&self, over: &Subgroup) -> Result<Subgroup> {
        if !self.is_subgroup_of(over) {
            return Err(BvhError::NotSubgroup("not contained in the ambient subgroup".into()));
        }
        let mut els: Vec<usize> = self
            .elements
            .iter()
            .map(|&a| over.to_local(a).unwrap())
            .collect();
        els.sort_unstable();
        Ok(Self::build(over.group(), els))
    }
}

impl Group {
    pub fn centraliser(self: &Arc<Self>, g: usize) -> Subgroup {
        let els = (0..self.order())
            .filter(|&x| self.mul(x, g) == self.mul(g, x))
            .collect();
        Subgroup::build(self, els)
    }

    pub fn center(self: &Arc<Self>) -> Subgroup {
        let els = (0..self.order()).filter(|&x| self.is_central(x)).collect();
        Subgroup::build(self, els)
    }

    pub fn derived_subgroup(self: &Arc<Self>) -> Subgroup {
        let mut comms: Vec<usize> = Vec::new();
        for a in 0..self.order() {
            for b in 0..self.order() {
                comms.push(self.commutator(a, b));
            }
        }
        comms.sort_unstable();
        comms.dedup();
        Subgroup::generated(self, &comms)
    }

    /// Φ(G) = [G,G]·G^p for a p-group.
    pub fn frattini(self: &Arc<Self>) -> Result<Subgroup> {
        let p = self
            .prime_power()
            .ok_or(BvhError::NotPGroup(self.order()))? as i64;
        let mut gens: Vec<usize> = Vec::new();
        for a in 0..self.order() {
            gens.push(self.pow(a, p));
            for b in 0..self.order() {
                gens.push(self.commutator(a, b));
            }
        }
        gens.sort_unstable();
        gens.dedup();
        Ok(Subgroup::generated(self, &gens))
    }

    pub fn characteristic_subgroups(self: &Arc<Self>) -> Result<CharacteristicSubgroups> {
        Ok(CharacteristicSubgroups {
            center: self.center(),
            derived: self.derived_subgroup(),
            frattini: self.frattini()?,
        })
    }

    pub fn conjugacy_classes(&self) -> ConjugacyData {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut representatives = Vec::new();
        let mut class_elements = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let k = representatives.len();
            representatives.push(a);
            let mut members: Vec<usize> = (0..n).map(|u| self.conj(u, a)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = k;
            }
            class_elements.push(members);
        }
        ConjugacyData {
            representatives,
            class_of,
            class_elements,
        }
    }

    /// Representatives of the double cosets `H u K`, each the smallest index in its coset.
    pub fn double_cosets(self: &Arc<Self>, h: &Subgroup, k: &Subgroup) -> Result<Vec<usize>> {
        for s in [h, k] {
            if !s.parent().same_as(self) {
                return Err(BvhError::NotSubgroup("subgroup of a different group".into()));
            }
        }
        let n = self.order();
        let mut seen = vec![false; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            reps.push(x);
            for &a in h.elements() {
                let ax = self.mul(a, x);
                for &b in k.elements() {
                    seen[self.mul(ax, b)] = true;
                }
            }
        }
        Ok(reps)
    }

    /// A Sylow p-subgroup, found by climbing normalisers.
    pub fn sylow_subgroup(self: &Arc<Self>, p: u32) -> Subgroup {
        let p = p as usize;
        let mut target = 1;
        let mut n = self.order();
        while p > 1 && n.is_multiple_of(p) {
            n /= p;
            target *= p;
        }
        let is_p_power = |mut k: usize| {
            while p > 1 && k.is_multiple_of(p) {
                k /= p;
            }
            k == 1
        };
        let mut current = Subgroup::trivial(self);
        while current.order() < target {
            let norm = current.normaliser();
            let next = norm.elements().iter().copied().find(|&x| {
                if current.contains(x) {
                    return false;
                }
                // order of x modulo the current subgroup
                let mut y = x;
                let mut k = 1;
                while !current.contains(y) {
                    y = self.mul(y, x);
                    k += 1;
                }
                is_p_power(k)
            });
            let x = next.expect("normaliser of a non-Sylow p-subgroup has p-elements outside it");
            let mut gens: Vec<usize> = current.elements().to_vec();
            gens.push(x);
            current = Subgroup::generated(self, &gens);
        }
        current
    }
}
