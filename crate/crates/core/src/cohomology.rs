//! H^n(G, F_p) as cocycles modulo coboundaries, with coordinate reduction.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::cochain::{coboundary_row, Cochain, ExtensionCocycle, TupleIndexer};
use crate::error::{BvhError, Result};
use crate::field::Fp;
use crate::group::{quaternion, quotient, Group, GroupHom, Subgroup};
use crate::linalg::{QuotientSpace, SparseKernel, SparseMatrix, SubspaceBasis};

pub const DEFAULT_WORK_BUDGET: u64 = 500_000;
pub const HEAVY_WORK_BUDGET: u64 = 10_000_000;

static BUDGET_OVERRIDE: AtomicU64 = AtomicU64::new(0);

/// Set a process-wide budget; `None` restores the environment/default value.
pub fn set_work_budget(budget: Option<u64>) {
    BUDGET_OVERRIDE.store(budget.unwrap_or(0), Ordering::SeqCst);
}

/// Coordinate budget: explicit override, then `BVH_WORK_BUDGET`, then the default.
pub fn work_budget() -> u64 {
    let o = BUDGET_OVERRIDE.load(Ordering::SeqCst);
    if o != 0 {
        return o;
    }
    std::env::var("BVH_WORK_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_WORK_BUDGET)
}

/// `(|G|-1)^{n+1}`, the number of rows of the degree-n coboundary matrix.
pub fn required_work(order: usize, n: usize) -> u64 {
    ((order.max(1) - 1) as u64).saturating_pow(n as u32 + 1)
}

pub fn check_budget(order: usize, n: usize) -> Result<()> {
    let required = required_work(order, n);
    let budget = work_budget();
    if required > budget {
        return Err(BvhError::BudgetExceeded {
            degree: n,
            required,
            budget,
        });
    }
    Ok(())
}

/// A basis of Hom(G, F_p) dual to a chosen set of elements.
#[derive(Clone, Debug)]
pub struct H1Basis {
    group: Arc<Group>,
    f: Fp,
    dual_points: Vec<usize>,
    /// `homs[k][a]` is the value of the k-th hom at element `a`
    homs: Vec<Vec<u32>>,
}

impl H1Basis {
    pub fn dim(&self) -> usize {
        self.homs.len()
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    /// Elements `b_k` with `hom_j(b_k) = δ_jk`.
    pub fn dual_points(&self) -> &[usize] {
        &self.dual_points
    }

    pub fn hom_values(&self, k: usize) -> &[u32] {
        &self.homs[k]
    }

    pub fn hom(&self, k: usize) -> Cochain {
        Cochain::from_element_values(&self.group, self.f, &self.homs[k])
    }

    pub fn homs(&self) -> Vec<Cochain> {
        (0..self.dim()).map(|k| self.hom(k)).collect()
    }

    /// Coordinates of a hom given by its values on all elements.
    pub fn coordinates(&self, values: &[u32]) -> Vec<u32> {
        self.dual_points.iter().map(|&b| values[b]).collect()
    }

    /// Values on all elements of `Σ c_k hom_k`.
    pub fn combine(&self, coords: &[u32]) -> Vec<u32> {
        let f = self.f;
        (0..self.group.order())
            .map(|a| {
                coords
                    .iter()
                    .zip(&self.homs)
                    .fold(0, |acc, (&c, h)| f.add(acc, f.mul(c, h[a])))
            })
            .collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.dual_points
            .iter()
            .map(|&b| format!("{}*", self.group.label(b)))
            .collect()
    }
}

/// Hom(G, F_p) through the elementary abelian quotient `G / [G,G] G^p`.
pub fn h1_homs(group: &Arc<Group>, f: Fp) -> H1Basis {
    let p = f.p() as i64;
    let mut gens: Vec<usize> = Vec::new();
    for a in 0..group.order() {
        gens.push(group.pow(a, p));
        for b in 0..group.order() {
            gens.push(group.commutator(a, b));
        }
    }
    gens.sort_unstable();
    gens.dedup();
    let n = Subgroup::generated(group, &gens);
    let (q, pi) = quotient(group, &n).expect("[G,G]G^p is normal");
    // greedy dual points: generators first, then by index
    let mut candidates: Vec<usize> = group.generators().to_vec();
    candidates.extend(0..group.order());
    let mut span = vec![false; q.order()];
    span[q.identity()] = true;
    let mut chosen: Vec<usize> = Vec::new();
    let mut images: Vec<usize> = Vec::new();
    for &b in &candidates {
        let img = pi.apply(b);
        if span[img] {
            continue;
        }
        chosen.push(b);
        images.push(img);
        let s = Subgroup::generated(&q, &images);
        span = vec![false; q.order()];
        for &x in s.elements() {
            span[x] = true;
        }
    }
    // coordinates of every quotient element in the chosen basis
    let r = images.len();
    let mut coord: Vec<Vec<u32>> = vec![Vec::new(); q.order()];
    let total = (f.p() as usize).pow(r as u32);
    for code in 0..total {
        let mut c = vec![0u32; r];
        let mut x = code;
        let mut elt = q.identity();
        for k in 0..r {
            c[k] = (x % f.p() as usize) as u32;
            x /= f.p() as usize;
            elt = q.mul(elt, q.pow(images[k], c[k] as i64));
        }
        coord[elt] = c;
    }
    let homs = (0..r)
        .map(|k| (0..group.order()).map(|a| coord[pi.apply(a)][k]).collect())
        .collect();
    H1Basis {
        group: group.clone(),
        f,
        dual_points: chosen,
        homs,
    }
}

/// H^n(G, F_p) with a fixed basis of representative cocycles.
#[derive(Debug)]
pub struct CohomologySpace {
    group: Arc<Group>,
    f: Fp,
    degree: usize,
    cocycle_dim: usize,
    coboundary_dim: usize,
    quotient: QuotientSpace,
    labels: Vec<String>,
}

/// An element of H^n given by coordinates in the space's basis.
#[derive(Clone, Debug)]
pub struct CohomologyClass {
    space: Arc<CohomologySpace>,
    coords: Vec<u32>,
}

impl PartialEq for CohomologyClass {
    fn eq(&self, other: &Self) -> bool {
        self.space.degree == other.space.degree
            && self.space.f == other.space.f
            && self.space.group.same_as(&other.space.group)
            && self.coords == other.coords
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SpaceSummary {
    pub degree: usize,
    pub dim: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub basis: Vec<String>,
}

type Key = (u64, usize, u32, usize);
type Slot = Arc<Mutex<Option<Arc<CohomologySpace>>>>;

fn cache() -> &'static Mutex<HashMap<Key, Slot>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Slot>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The memoised space H^n(G, F_p).
pub fn cohomology_space(group: &Arc<Group>, f: Fp, n: usize) -> Result<Arc<CohomologySpace>> {
    let key = (group.presentation_key(), group.order(), f.p(), n);
    let slot = {
        let mut map = cache().lock().unwrap();
        map.entry(key).or_default().clone()
    };
    let mut guard = slot.lock().unwrap();
    if let Some(s) = guard.as_ref() {
        if s.group.same_as(group) && s.group.labels() == group.labels() && s.group.generators() == group.generators() {
            return Ok(s.clone());
        }
        return build_space(group, f, n).map(Arc::new);
    }
    let s = Arc::new(build_space(group, f, n)?);
    *guard = Some(s.clone());
    Ok(s)
}

/// Products `u_{i_1} ⌣ .. ⌣ u_{i_n}` with `i_1 <= .. <= i_n`, labelled by their factors.
fn monomials(h1: &H1Basis, n: usize) -> Vec<(String, Cochain)> {
    let labels = h1.labels();
    let homs = h1.homs();
    let mut out: Vec<(Vec<usize>, Cochain)> = (0..h1.dim()).map(|k| (vec![k], homs[k].clone())).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for (idx, c) in &out {
            let last = *idx.last().unwrap();
            for (k, hk) in homs.iter().enumerate().skip(last) {
                let mut i = idx.clone();
                i.push(k);
                next.push((i, c.cup(hk).expect("same group")));
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|(idx, c)| {
            let mut label = String::new();
            let mut j = 0;
            while j < idx.len() {
                let mut e = 1;
                while j + e < idx.len() && idx[j + e] == idx[j] {
                    e += 1;
                }
                if !label.is_empty() {
                    label.push('·');
                }
                label.push_str(&labels[idx[j]]);
                if e > 1 {
                    label.push_str(&format!("^{e}"));
                }
                j += e;
            }
            (label, c)
        })
        .collect()
}

fn build_space(group: &Arc<Group>, f: Fp, n: usize) -> Result<CohomologySpace> {
    let ix = TupleIndexer::new(group);
    let ambient = ix.count(n);
    if n == 0 {
        let b = SubspaceBasis::zero(f, 1);
        let quotient = QuotientSpace::new(&b, &[vec![1]])?;
        return Ok(CohomologySpace {
            group: group.clone(),
            f,
            degree: 0,
            cocycle_dim: 1,
            coboundary_dim: 0,
            quotient,
            labels: vec!["1".into()],
        });
    }
    check_budget(group.order(), n)?;
    let g = &**group;
    // a cochain is a cocycle once its coboundary vanishes on tuples ending in a generator
    let gens = group.generating_set();
    let rows = (0..ix.count(n) * gens.len()).map(|k| {
        let mut t = ix.decode(k / gens.len(), n);
        t.push(gens[k % gens.len()]);
        coboundary_row(g, f, &t)
    });
    let z = SparseKernel::from_rows(f, ambient, rows);
    let b = if n == 1 {
        SubspaceBasis::zero(f, ambient)
    } else {
        let prev = ix.count(n - 1);
        let triplets = (0..ambient).flat_map(|idx| {
            let t = ix.decode(idx, n);
            coboundary_row(g, f, &t).into_iter().map(move |(c, v)| (c, idx, v))
        });
        let dt = SparseMatrix::from_triplets(f, prev, ambient, triplets)?;
        SubspaceBasis::from_sparse_rows(f, ambient, (0..prev).map(|r| dt.row(r).to_vec()))?
    };
    let monomials = monomials(&h1_homs(group, f), n);
    let mut labels_all: Vec<String> = monomials.iter().map(|(l, _)| l.clone()).collect();
    let candidates = monomials
        .into_iter()
        .map(|(_, c)| c.into_values())
        .chain(z.kernel_vectors());
    let (quotient, chosen) = QuotientSpace::from_candidates(&b, candidates, Some(z.nullity() - b.dim()))?;
    let m = labels_all.len();
    let labels = chosen
        .into_iter()
        .map(|i| {
            if i < m {
                std::mem::take(&mut labels_all[i])
            } else {
                format!("[{n}.{}]", i - m)
            }
        })
        .collect();
    let space = CohomologySpace {
        group: group.clone(),
        f,
        degree: n,
        cocycle_dim: z.nullity(),
        coboundary_dim: b.dim(),
        quotient,
        labels,
    };
    debug_assert_eq!(space.dim(), space.cocycle_dim - space.coboundary_dim);
    Ok(space)
}

impl CohomologySpace {
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn cocycle_dim(&self) -> usize {
        self.cocycle_dim
    }

    pub fn coboundary_dim(&self) -> usize {
        self.coboundary_dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn representative(&self, k: usize) -> Cochain {
        Cochain::from_values(&self.group, self.f, self.degree, self.quotient.representatives()[k].clone())
            .expect("representative has the ambient length")
    }

    pub fn representatives(&self) -> Vec<Cochain> {
        (0..self.dim()).map(|k| self.representative(k)).collect()
    }

    /// `Σ c_k rep_k`
    pub fn combine(&self, coords: &[u32]) -> Cochain {
        let f = self.f;
        let mut v = vec![0u32; TupleIndexer::new(&self.group).count(self.degree)];
        for (c, rep) in coords.iter().zip(self.quotient.representatives()) {
            if *c != 0 {
                for (x, &r) in v.iter_mut().zip(rep) {
                    *x = f.add(*x, f.mul(*c, r));
                }
            }
        }
        Cochain::from_values(&self.group, f, self.degree, v).expect("ambient length")
    }

    /// Coordinates of the class of a cocycle.
    pub fn coordinates(&self, c: &Cochain) -> Result<Vec<u32>> {
        if c.field() != self.f || c.degree() != self.degree || !c.group().same_as(&self.group) {
            return Err(BvhError::Mismatch(format!(
                "cochain of degree {} on {} does not belong to H^{}({})",
                c.degree(),
                c.group().name(),
                self.degree,
                self.group.name()
            )));
        }
        self.quotient.coordinates(c.values())
    }

    pub fn class_of(self: &Arc<Self>, c: &Cochain) -> Result<CohomologyClass> {
        Ok(CohomologyClass {
            space: self.clone(),
            coords: self.coordinates(c)?,
        })
    }

    pub fn class_from_coords(self: &Arc<Self>, coords: Vec<u32>) -> Result<CohomologyClass> {
        if coords.len() != self.dim() {
            return Err(BvhError::DimensionMismatch {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        let p = self.f.p();
        Ok(CohomologyClass {
            space: self.clone(),
            coords: coords.into_iter().map(|c| c % p).collect(),
        })
    }

    pub fn zero_class(self: &Arc<Self>) -> CohomologyClass {
        CohomologyClass {
            space: self.clone(),
            coords: vec![0; self.dim()],
        }
    }

    pub fn basis_class(self: &Arc<Self>, k: usize) -> CohomologyClass {
        let mut coords = vec![0; self.dim()];
        coords[k] = 1;
        CohomologyClass {
            space: self.clone(),
            coords,
        }
    }

    pub fn summary(&self) -> SpaceSummary {
        SpaceSummary {
            degree: self.degree,
            dim: self.dim(),
            cocycles: self.cocycle_dim,
            coboundaries: self.coboundary_dim,
            basis: self.labels.clone(),
        }
    }
}

impl CohomologyClass {
    pub fn space(&self) -> &Arc<CohomologySpace> {
        &self.space
    }

    pub fn degree(&self) -> usize {
        self.space.degree
    }

    pub fn coordinates(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn representative(&self) -> Cochain {
        self.space.combine(&self.coords)
    }

    pub fn add(&self, other: &CohomologyClass) -> Result<CohomologyClass> {
        if self.degree() != other.degree() || !self.space.group.same_as(&other.space.group) {
            return Err(BvhError::Mismatch("classes live in different spaces".into()));
        }
        let f = self.space.f;
        Ok(CohomologyClass {
            space: self.space.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(&a, &b)| f.add(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: u32) -> CohomologyClass {
        let f = self.space.f;
        CohomologyClass {
            space: self.space.clone(),
            coords: self.coords.iter().map(|&a| f.mul(a, c % f.p())).collect(),
        }
    }

    /// Cup product at class level.
    pub fn cup(&self, other: &CohomologyClass) -> Result<CohomologyClass> {
        let c = self.representative().cup(&other.representative())?;
        let space = cohomology_space(&self.space.group, self.space.f, c.degree())?;
        space.class_of(&c)
    }
}

/// Named generators of the cohomology of catalog groups.
pub fn identify_named_classes(group: &Arc<Group>, f: Fp) -> Result<Vec<(String, CohomologyClass)>> {
    let name = group.name();
    let unsupported = || BvhError::UnknownGroup(format!("no named classes for {name}"));
    let h1 = h1_homs(group, f);
    let s1 = cohomology_space(group, f, 1)?;
    let class1 = |vals: &[u32]| s1.class_of(&Cochain::from_element_values(group, f, vals));
    let n = group.order();
    let cyclic_gen = (0..n).find(|&a| group.element_order(a) == n);
    if let Some(g) = cyclic_gen.filter(|_| n > 1) {
        // exponent of each element relative to the generator
        let mut exp = vec![0usize; n];
        let mut x = group.identity();
        for e in 0..n {
            exp[x] = e;
            x = group.mul(x, g);
        }
        let y_vals: Vec<u32> = exp.iter().map(|&e| (e as u32) % f.p()).collect();
        let y = class1(&y_vals)?;
        let carry = Cochain::from_fn(group, f, 2, |t| (exp[t[0]] + exp[t[1]] >= n) as u32);
        let x = cohomology_space(group, f, 2)?.class_of(&carry)?;
        return Ok(vec![("x".into(), x), ("y".into(), y)]);
    }
    let is = |prefix: &str| {
        name.strip_prefix(prefix)
            .is_some_and(|rest| rest.parse::<usize>().is_ok())
    };
    if is("D") || is("Q") {
        let (g, h) = (group.element("g")?, group.element("h")?);
        if h1.dual_points() != [g, h] {
            return Err(unsupported());
        }
        let x = class1(h1.hom_values(0))?;
        let y = class1(h1.hom_values(1))?;
        let mut out = vec![("x".to_string(), x), ("y".to_string(), y)];
        if is("D") && f.p() == 2 {
            let big = Arc::new(quaternion(2 * n, usize::MAX)?);
            let pi = GroupHom::from_generator_images(
                &big,
                group,
                &[(big.element("g")?, g), (big.element("h")?, h)],
            )?;
            let c = big.element("gamma")?;
            let ext = ExtensionCocycle::from_surjection(&pi, c, f)?;
            let z = cohomology_space(group, f, 2)?.class_of(ext.alpha())?;
            out.push(("z".into(), z));
        }
        return Ok(out);
    }
    if is("SD") && f.p() == 2 {
        let s1 = s1.clone();
        let nonzero: Vec<CohomologyClass> = (1..4u32)
            .map(|c| s1.class_from_coords(vec![c & 1, c >> 1]))
            .collect::<Result<_>>()?;
        let mut cubes_zero = Vec::new();
        for a in &nonzero {
            if a.cup(a)?.cup(a)?.is_zero() {
                cubes_zero.push(a.clone());
            }
        }
        let [x] = cubes_zero.as_slice() else {
            return Err(unsupported());
        };
        let mut ys = Vec::new();
        for b in &nonzero {
            if b != x && x.cup(b)?.is_zero() {
                ys.push(b.clone());
            }
        }
        let [y] = ys.as_slice() else {
            return Err(unsupported());
        };
        return Ok(vec![("x".into(), x.clone()), ("y".into(), y.clone())]);
    }
    Err(unsupported())
}
