//! Homomorphisms, direct products and quotients.

use std::collections::VecDeque;
use std::sync::Arc;

use super::{Group, Subgroup};
use crate::error::{BvhError, Result};

/// A total element map between two groups that respects multiplication.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<Group>,
    target: Arc<Group>,
    map: Vec<usize>,
}

impl GroupHom {
    /// Extend generator images to the whole group, failing if a relation is violated.
    pub fn from_generator_images(
        source: &Arc<Group>,
        target: &Arc<Group>,
        images: &[(usize, usize)],
    ) -> Result<GroupHom> {
        let n = source.order();
        let mut map = vec![usize::MAX; n];
        map[source.identity()] = target.identity();
        let mut queue = VecDeque::from([source.identity()]);
        while let Some(a) = queue.pop_front() {
            for &(s, t) in images {
                let b = source.mul(a, s);
                let img = target.mul(map[a], t);
                if map[b] == usize::MAX {
                    map[b] = img;
                    queue.push_back(b);
                } else if map[b] != img {
                    return Err(BvhError::NotHomomorphism(format!(
                        "images disagree at {}",
                        source.label(b)
                    )));
                }
            }
        }
        if map.contains(&usize::MAX) {
            return Err(BvhError::NotHomomorphism("images do not cover a generating set".into()));
        }
        Self::from_map(source, target, map)
    }

    /// Wrap an explicit element map after checking it is a homomorphism.
    pub fn from_map(source: &Arc<Group>, target: &Arc<Group>, map: Vec<usize>) -> Result<GroupHom> {
        if map.len() != source.order() || map.iter().any(|&x| x >= target.order()) {
            return Err(BvhError::NotHomomorphism("map has the wrong shape".into()));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(BvhError::NotHomomorphism(format!(
                        "f({}·{}) != f({})·f({})",
                        source.label(a),
                        source.label(b),
                        source.label(a),
                        source.label(b)
                    )));
                }
            }
        }
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    pub fn identity(g: &Arc<Group>) -> GroupHom {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            map: (0..g.order()).collect(),
        }
    }

    /// Inclusion of a subgroup's induced group into its parent.
    pub fn inclusion(h: &Subgroup) -> GroupHom {
        GroupHom {
            source: h.group().clone(),
            target: h.parent().clone(),
            map: h.elements().to_vec(),
        }
    }

    pub fn source(&self) -> &Arc<Group> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Group> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn kernel(&self) -> Subgroup {
        let els: Vec<usize> = (0..self.source.order())
            .filter(|&a| self.map[a] == self.target.identity())
            .collect();
        Subgroup::from_elements(&self.source, &els).expect("kernel is a subgroup")
    }

    pub fn image(&self) -> Subgroup {
        let mut els = self.map.clone();
        els.sort_unstable();
        els.dedup();
        Subgroup::from_elements(&self.target, &els).expect("image is a subgroup")
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_whole()
    }

    /// `other ∘ self`
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if !self.target.same_as(&other.source) {
            return Err(BvhError::Mismatch("composition of incompatible maps".into()));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&a| other.map[a]).collect(),
        })
    }
}

/// `G × H` with its projections and embeddings. Element `(a, b)` has index `a·|H| + b`.
#[derive(Clone, Debug)]
pub struct DirectProduct {
    pub group: Arc<Group>,
    pub left: Arc<Group>,
    pub right: Arc<Group>,
}

impl DirectProduct {
    #[inline]
    pub fn pair(&self, a: usize, b: usize) -> usize {
        a * self.right.order() + b
    }

    #[inline]
    pub fn proj_left(&self, x: usize) -> usize {
        x / self.right.order()
    }

    #[inline]
    pub fn proj_right(&self, x: usize) -> usize {
        x % self.right.order()
    }

    pub fn embed_left(&self, a: usize) -> usize {
        self.pair(a, self.right.identity())
    }

    pub fn embed_right(&self, b: usize) -> usize {
        self.pair(self.left.identity(), b)
    }

    pub fn left_projection(&self) -> Vec<usize> {
        (0..self.group.order()).map(|x| self.proj_left(x)).collect()
    }

    pub fn right_projection(&self) -> Vec<usize> {
        (0..self.group.order()).map(|x| self.proj_right(x)).collect()
    }
}

pub fn direct_product(g: &Arc<Group>, h: &Arc<Group>, max_order: usize) -> Result<DirectProduct> {
    let (m, n) = (g.order(), h.order());
    if m * n > max_order {
        return Err(BvhError::OrderTooLarge {
            order: m * n,
            max: max_order,
        });
    }
    let table: Vec<Vec<usize>> = (0..m * n)
        .map(|x| {
            (0..m * n)
                .map(|y| g.mul(x / n, y / n) * n + h.mul(x % n, y % n))
                .collect()
        })
        .collect();
    let labels = (0..m * n)
        .map(|x| format!("({},{})", g.label(x / n), h.label(x % n)))
        .collect();
    let mut gens: Vec<usize> = g.generators().iter().map(|&a| a * n + h.identity()).collect();
    gens.extend(h.generators().iter().map(|&b| g.identity() * n + b));
    let mut prod = Group::from_trusted_table(
        format!("{}*{}", g.name(), h.name()),
        &table,
        g.identity() * n + h.identity(),
    )
    .with_labels(labels);
    prod.generators = gens;
    if let (Some(p), Some(q)) = (g.prime_power(), h.prime_power()) {
        if p == q {
            prod = prod.with_prime(p);
        }
    }
    Ok(DirectProduct {
        group: Arc::new(prod),
        left: g.clone(),
        right: h.clone(),
    })
}

/// `G/N` for a normal subgroup `N`, with the quotient map. Cosets are ordered by their smallest element.
pub fn quotient(g: &Arc<Group>, n: &Subgroup) -> Result<(Arc<Group>, GroupHom)> {
    if !n.parent().same_as(g) {
        return Err(BvhError::NotSubgroup("subgroup of a different group".into()));
    }
    if !n.is_normal() {
        return Err(BvhError::NotSubgroup("not normal".into()));
    }
    let mut coset = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset[x] == usize::MAX {
            for &k in n.elements() {
                coset[g.mul(x, k)] = reps.len();
            }
            reps.push(x);
        }
    }
    let table: Vec<Vec<usize>> = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| coset[g.mul(a, b)]).collect())
        .collect();
    let labels = reps.iter().map(|&a| g.label(a).to_string()).collect();
    let mut q = Group::from_trusted_table(
        format!("{}/{}", g.name(), n.order()),
        &table,
        coset[g.identity()],
    )
    .with_labels(labels);
    let mut gens: Vec<usize> = g.generators().iter().map(|&a| coset[a]).collect();
    gens.dedup();
    q.generators = gens;
    if let Some(p) = g.prime_hint() {
        q = q.with_prime(p);
    }
    let q = Arc::new(q);
    let hom = GroupHom {
        source: g.clone(),
        target: q.clone(),
        map: coset,
    };
    Ok((q, hom))
}
