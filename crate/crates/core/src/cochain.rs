//! Normalized inhomogeneous bar cochains with values in F_p.
//!
//! An n-cochain is stored densely over the `(|G|-1)^n` tuples of non-identity
//! elements, first entry most significant. Tuples containing the identity
//! are implicitly zero.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BvhError, Result};
use crate::field::Fp;
use crate::group::{DirectProduct, Group, GroupHom, Subgroup};

const PAR_THRESHOLD: usize = 1 << 14;

/// Encoding of tuples of non-identity elements as mixed-radix indices.
#[derive(Clone, Copy, Debug)]
pub struct TupleIndexer {
    identity: usize,
    m: usize,
}

impl TupleIndexer {
    pub fn new(g: &Group) -> Self {
        TupleIndexer {
            identity: g.identity(),
            m: g.order() - 1,
        }
    }

    /// Number of n-tuples of non-identity elements.
    pub fn count(&self, n: usize) -> usize {
        self.m.pow(n as u32)
    }

    #[inline]
    fn digit(&self, a: usize) -> usize {
        if a > self.identity {
            a - 1
        } else {
            a
        }
    }

    #[inline]
    fn element(&self, d: usize) -> usize {
        if d >= self.identity {
            d + 1
        } else {
            d
        }
    }

    /// `None` if some entry is the identity.
    #[inline]
    pub fn encode(&self, tuple: &[usize]) -> Option<usize> {
        let mut idx = 0;
        for &a in tuple {
            if a == self.identity {
                return None;
            }
            idx = idx * self.m + self.digit(a);
        }
        Some(idx)
    }

    #[inline]
    pub fn decode_into(&self, mut idx: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = self.element(idx % self.m);
            idx /= self.m;
        }
    }

    pub fn decode(&self, idx: usize, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        self.decode_into(idx, &mut out);
        out
    }
}

/// A normalized n-cochain on a group with values in F_p.
#[derive(Clone, Debug)]
pub struct Cochain {
    group: Arc<Group>,
    f: Fp,
    degree: usize,
    values: Vec<u32>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f
            && self.degree == other.degree
            && self.group.same_as(&other.group)
            && self.values == other.values
    }
}

/// JSON form: `{"group", "p", "degree", "values": [[tuple, scalar], ...]}`; omitted tuples are zero.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CochainJson {
    pub group: String,
    pub p: u32,
    pub degree: usize,
    pub values: Vec<(Vec<usize>, u32)>,
}

fn par_fill<F>(len: usize, f: F) -> Vec<u32>
where
    F: Fn(usize) -> u32 + Sync + Send,
{
    if len >= PAR_THRESHOLD {
        (0..len).into_par_iter().map(f).collect()
    } else {
        (0..len).map(f).collect()
    }
}

impl Cochain {
    pub fn zero(group: &Arc<Group>, f: Fp, degree: usize) -> Cochain {
        let len = TupleIndexer::new(group).count(degree);
        Cochain {
            group: group.clone(),
            f,
            degree,
            values: vec![0; len],
        }
    }

    /// The degree-0 cochain with value `c`.
    pub fn constant(group: &Arc<Group>, f: Fp, c: u32) -> Cochain {
        Cochain {
            group: group.clone(),
            f,
            degree: 0,
            values: vec![c % f.p()],
        }
    }

    /// Evaluate `func` on every tuple of non-identity elements.
    pub fn from_fn(
        group: &Arc<Group>,
        f: Fp,
        degree: usize,
        func: impl Fn(&[usize]) -> u32 + Sync + Send,
    ) -> Cochain {
        let ix = TupleIndexer::new(group);
        let values = par_fill(ix.count(degree), |idx| {
            let mut t = vec![0; degree];
            ix.decode_into(idx, &mut t);
            func(&t) % f.p()
        });
        Cochain {
            group: group.clone(),
            f,
            degree,
            values,
        }
    }

    pub fn from_values(group: &Arc<Group>, f: Fp, degree: usize, values: Vec<u32>) -> Result<Cochain> {
        let len = TupleIndexer::new(group).count(degree);
        if values.len() != len {
            return Err(BvhError::DimensionMismatch {
                expected: len,
                got: values.len(),
            });
        }
        let values = values.into_iter().map(|v| v % f.p()).collect();
        Ok(Cochain {
            group: group.clone(),
            f,
            degree,
            values,
        })
    }

    /// A 1-cochain from a value for every element (the identity's value is ignored).
    pub fn from_element_values(group: &Arc<Group>, f: Fp, vals: &[u32]) -> Cochain {
        Cochain::from_fn(group, f, 1, |t| vals[t[0]])
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    pub fn indexer(&self) -> TupleIndexer {
        TupleIndexer::new(&self.group)
    }

    /// Value on an arbitrary tuple of elements.
    #[inline]
    pub fn eval(&self, tuple: &[usize]) -> u32 {
        debug_assert_eq!(tuple.len(), self.degree);
        match self.indexer().encode(tuple) {
            Some(i) => self.values[i],
            None => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Nonzero values keyed by tuple.
    pub fn support(&self) -> Vec<(Vec<usize>, u32)> {
        let ix = self.indexer();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (ix.decode(i, self.degree), v))
            .collect()
    }

    fn check_same(&self, other: &Cochain) -> Result<()> {
        if self.f != other.f {
            return Err(BvhError::Mismatch(format!("F_{} vs F_{}", self.f.p(), other.f.p())));
        }
        if !self.group.same_as(&other.group) {
            return Err(BvhError::Mismatch(format!(
                "groups {} and {}",
                self.group.name(),
                other.group.name()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.check_same(other)?;
        if self.degree != other.degree {
            return Err(BvhError::Mismatch("degrees differ".into()));
        }
        let f = self.f;
        Ok(Cochain {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f.add(a, b)).collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Cochain {
        let f = self.f;
        let c = c % f.p();
        Cochain {
            values: self.values.iter().map(|&a| f.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Cochain {
        let f = self.f;
        Cochain {
            values: self.values.iter().map(|&a| f.neg(a)).collect(),
            ..self.clone()
        }
    }

    /// `(dφ)(a_1..a_{n+1}) = (-1)^{n+1}[φ(a_2..) + Σ_{i=1}^{n} (-1)^i φ(..a_i a_{i+1}..) + (-1)^{n+1} φ(a_1..a_n)]`
    pub fn coboundary(&self) -> Cochain {
        let n = self.degree;
        let f = self.f;
        let g = &*self.group;
        let ix = self.indexer();
        let outer = f.sign(n + 1);
        let values = par_fill(ix.count(n + 1), |idx| {
            let mut t = vec![0; n + 1];
            ix.decode_into(idx, &mut t);
            let mut s = self.eval(&t[1..]);
            let mut face = vec![0; n];
            for i in 1..=n {
                let prod = g.mul(t[i - 1], t[i]);
                if prod == g.identity() {
                    continue;
                }
                face[..i - 1].copy_from_slice(&t[..i - 1]);
                face[i - 1] = prod;
                face[i..].copy_from_slice(&t[i + 1..]);
                let v = self.eval(&face);
                s = if i % 2 == 1 { f.sub(s, v) } else { f.add(s, v) };
            }
            let last = self.eval(&t[..n]);
            s = f.add(s, f.mul(f.sign(n + 1), last));
            f.mul(outer, s)
        });
        Cochain {
            group: self.group.clone(),
            f,
            degree: n + 1,
            values,
        }
    }

    pub fn is_cocycle(&self) -> bool {
        self.coboundary().is_zero()
    }

    /// `(Δ_g φ)(a_1..a_{n-1}) = Σ_{i=0}^{n-1} (-1)^i φ(a_1..a_i, g, a_{i+1}..a_{n-1})` for central `g`.
    pub fn delta_g(&self, g: usize) -> Result<Cochain> {
        if !self.group.is_central(g) {
            return Err(BvhError::NotCentral(self.group.label(g).to_string()));
        }
        self.delta_g_unchecked(g)
    }

    /// The same formula without the centrality check.
    pub fn delta_g_unchecked(&self, g: usize) -> Result<Cochain> {
        let n = self.degree;
        if n == 0 {
            return Err(BvhError::Mismatch("delta needs degree at least 1".into()));
        }
        let f = self.f;
        let ix = self.indexer();
        let values = par_fill(ix.count(n - 1), |idx| {
            let mut t = vec![0; n - 1];
            ix.decode_into(idx, &mut t);
            let mut ins = vec![0; n];
            let mut s = 0;
            for i in 0..n {
                ins[..i].copy_from_slice(&t[..i]);
                ins[i] = g;
                ins[i + 1..].copy_from_slice(&t[i..]);
                let v = self.eval(&ins);
                s = if i % 2 == 0 { f.add(s, v) } else { f.sub(s, v) };
            }
            s
        });
        Ok(Cochain {
            group: self.group.clone(),
            f,
            degree: n - 1,
            values,
        })
    }

    /// Alexander–Whitney cup product `(φ⌣ψ)(a_1..a_{m+n}) = φ(a_1..a_m) ψ(a_{m+1}..a_{m+n})`.
    pub fn cup(&self, other: &Cochain) -> Result<Cochain> {
        self.check_same(other)?;
        let f = self.f;
        let len_b = other.values.len();
        let values = par_fill(self.values.len() * len_b, |idx| {
            f.mul(self.values[idx / len_b], other.values[idx % len_b])
        });
        Ok(Cochain {
            group: self.group.clone(),
            f,
            degree: self.degree + other.degree,
            values,
        })
    }

    /// `(f^*φ)(a_1..a_n) = φ(f(a_1)..f(a_n))` for an element map `f` from `source` into this cochain's group.
    pub fn pullback(&self, source: &Arc<Group>, map: &[usize]) -> Result<Cochain> {
        if map.len() != source.order() || map[source.identity()] != self.group.identity() {
            return Err(BvhError::Mismatch("map does not send identity to identity".into()));
        }
        let n = self.degree;
        Ok(Cochain::from_fn(source, self.f, n, |t| {
            let img: Vec<usize> = t.iter().map(|&a| map[a]).collect();
            self.eval(&img)
        }))
    }

    pub fn pullback_hom(&self, hom: &GroupHom) -> Result<Cochain> {
        if !hom.target().same_as(&self.group) {
            return Err(BvhError::Mismatch("homomorphism target is not the cochain group".into()));
        }
        self.pullback(hom.source(), hom.map())
    }

    /// Restriction to `h`, a subgroup of this cochain's group. The result lives on `h.group()`.
    pub fn restrict(&self, h: &Subgroup) -> Result<Cochain> {
        if !h.parent().same_as(&self.group) {
            return Err(BvhError::NotSubgroup("restriction to a subgroup of another group".into()));
        }
        if h.is_whole() {
            return Ok(self.clone());
        }
        self.pullback(h.group(), h.elements())
    }

    /// Transfer from `h.group()` (where this cochain lives) up to `h.parent()`.
    ///
    /// `(Tr φ)(g_1..g_n) = Σ_r φ(h_1..h_n)` with `r_0 = r`, `r_{i-1} g_i = h_i r_i` over right coset representatives.
    pub fn transfer(&self, h: &Subgroup) -> Result<Cochain> {
        if !h.group().same_as(&self.group) {
            return Err(BvhError::Mismatch("cochain does not live on the subgroup".into()));
        }
        let parent = h.parent().clone();
        if h.is_whole() {
            return Ok(Cochain {
                group: parent,
                ..self.clone()
            });
        }
        let f = self.f;
        let n = self.degree;
        let (reps, rep_of) = h.right_coset_table();
        if n == 0 {
            let idx = f.reduce(reps.len() as i64);
            return Ok(Cochain::constant(&parent, f, f.mul(idx, self.values[0])));
        }
        let gp = &*parent;
        Ok(Cochain::from_fn(&parent, f, n, |t| {
            let mut s = 0;
            let mut hs = vec![0; n];
            'reps: for &r in &reps {
                let mut prev = r;
                for i in 0..n {
                    let x = gp.mul(prev, t[i]);
                    let next = rep_of[x];
                    let hi = gp.mul(x, gp.inv(next));
                    let local = h.to_local(hi).expect("coset decomposition stays in H");
                    if local == self.group.identity() {
                        continue 'reps;
                    }
                    hs[i] = local;
                    prev = next;
                }
                s = f.add(s, self.eval(&hs));
            }
            s
        }))
    }

    /// `(u^*φ)(a_1..a_n) = φ(u^{-1} a_1 u, ..)` on `u H u^{-1}`, for this cochain on `h.group()`.
    pub fn conjugate(&self, h: &Subgroup, u: usize) -> Result<(Subgroup, Cochain)> {
        if !h.group().same_as(&self.group) {
            return Err(BvhError::Mismatch("cochain does not live on the subgroup".into()));
        }
        let g = h.parent();
        let target = h.conjugate(u);
        let uinv = g.inv(u);
        let map: Vec<usize> = target
            .elements()
            .iter()
            .map(|&a| h.to_local(g.conj(uinv, a)).expect("conjugate lands in H"))
            .collect();
        let c = self.pullback(target.group(), &map)?;
        Ok((target, c))
    }

    /// `φ × ψ` on `G × H`: pullbacks along the projections, then cup.
    pub fn cross_product(&self, other: &Cochain, prod: &DirectProduct) -> Result<Cochain> {
        if self.f != other.f {
            return Err(BvhError::Mismatch("moduli differ".into()));
        }
        if !prod.left.same_as(&self.group) || !prod.right.same_as(&other.group) {
            return Err(BvhError::Mismatch("product factors do not match the cochains".into()));
        }
        let a = self.pullback(&prod.group, &prod.left_projection())?;
        let b = other.pullback(&prod.group, &prod.right_projection())?;
        a.cup(&b)
    }

    /// Bockstein: lift to integers in `[0, p)`, apply the integral coboundary, divide by `p`.
    pub fn bockstein(&self) -> Result<Cochain> {
        if !self.is_cocycle() {
            return Err(BvhError::NotCocycle);
        }
        let n = self.degree;
        let f = self.f;
        let p = f.p() as i64;
        let g = &*self.group;
        let ix = self.indexer();
        let lift = |t: &[usize]| self.eval(t) as i64;
        let values = par_fill(ix.count(n + 1), |idx| {
            let mut t = vec![0; n + 1];
            ix.decode_into(idx, &mut t);
            let mut s = lift(&t[1..]);
            let mut face = vec![0; n];
            for i in 1..=n {
                let prod = g.mul(t[i - 1], t[i]);
                if prod == g.identity() {
                    continue;
                }
                face[..i - 1].copy_from_slice(&t[..i - 1]);
                face[i - 1] = prod;
                face[i..].copy_from_slice(&t[i + 1..]);
                let v = lift(&face);
                s += if i % 2 == 1 { -v } else { v };
            }
            let last = lift(&t[..n]);
            s += if (n + 1) % 2 == 1 { -last } else { last };
            if (n + 1) % 2 == 1 {
                s = -s;
            }
            debug_assert_eq!(s.rem_euclid(p), 0);
            f.reduce(s / p)
        });
        Ok(Cochain {
            group: self.group.clone(),
            f,
            degree: n + 1,
            values,
        })
    }

    pub fn to_json(&self) -> CochainJson {
        CochainJson {
            group: self.group.name().to_string(),
            p: self.f.p(),
            degree: self.degree,
            values: self.support(),
        }
    }

    pub fn from_json(group: &Arc<Group>, j: &CochainJson) -> Result<Cochain> {
        let f = Fp::new(j.p)?;
        let mut c = Cochain::zero(group, f, j.degree);
        let ix = c.indexer();
        for (t, v) in &j.values {
            if t.len() != j.degree || t.iter().any(|&a| a >= group.order()) {
                return Err(BvhError::Parse(format!("bad tuple {t:?}")));
            }
            let i = ix
                .encode(t)
                .ok_or_else(|| BvhError::Parse(format!("tuple {t:?} contains the identity")))?;
            c.values[i] = *v % f.p();
        }
        Ok(c)
    }
}

/// The row of the degree-n coboundary matrix at the (n+1)-tuple `t`: pairs (n-tuple index, coefficient).
pub fn coboundary_row(g: &Group, f: Fp, t: &[usize]) -> Vec<(usize, u32)> {
    let ix = TupleIndexer::new(g);
    let n = t.len() - 1;
    let outer = f.sign(n + 1);
    let mut row = Vec::with_capacity(n + 2);
    let mut push = |face: &[usize], sign: u32| {
        if let Some(i) = ix.encode(face) {
            row.push((i, f.mul(outer, sign)));
        }
    };
    push(&t[1..], 1);
    let mut face = vec![0; n];
    for i in 1..=n {
        let prod = g.mul(t[i - 1], t[i]);
        if prod == g.identity() {
            continue;
        }
        face[..i - 1].copy_from_slice(&t[..i - 1]);
        face[i - 1] = prod;
        face[i..].copy_from_slice(&t[i + 1..]);
        push(&face, f.sign(i));
    }
    push(&t[..n], f.sign(n + 1));
    row
}

/// Result of checking `δs + sδ = (g-1)·id` on the normalized bar resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyReport {
    pub degree: usize,
    pub checked: usize,
    pub passed: bool,
    /// first failing basis chain `(1, a_1, .., a_n)`
    pub counterexample: Option<Vec<usize>>,
}

type Chain = HashMap<Vec<usize>, i64>;

fn add_term(c: &mut Chain, t: Vec<usize>, coef: i64, identity: usize) {
    if coef == 0 || t[1..].contains(&identity) {
        return;
    }
    let e = c.entry(t).or_insert(0);
    *e += coef;
}

fn bar_differential(g: &Group, c: &Chain) -> Chain {
    let mut out = Chain::new();
    for (t, &coef) in c {
        let n = t.len() - 1;
        if n == 0 {
            continue;
        }
        for i in 0..n {
            let mut face = Vec::with_capacity(n);
            face.extend_from_slice(&t[..i]);
            face.push(g.mul(t[i], t[i + 1]));
            face.extend_from_slice(&t[i + 2..]);
            add_term(&mut out, face, if i % 2 == 0 { coef } else { -coef }, g.identity());
        }
        let last = t[..n].to_vec();
        add_term(&mut out, last, if n % 2 == 0 { coef } else { -coef }, g.identity());
    }
    out.retain(|_, v| *v != 0);
    out
}

fn bar_homotopy(g: &Group, c: &Chain, x: usize) -> Chain {
    let mut out = Chain::new();
    for (t, &coef) in c {
        for i in 0..t.len() {
            let mut ins = Vec::with_capacity(t.len() + 1);
            ins.extend_from_slice(&t[..=i]);
            ins.push(x);
            ins.extend_from_slice(&t[i + 1..]);
            add_term(&mut out, ins, if i % 2 == 0 { coef } else { -coef }, g.identity());
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Check `δ_{n+1} s_n + s_{n-1} δ_n = (g - 1)·id` on every basis chain `(1, a_1, .., a_n)` with `a_i ≠ 1`,
/// using integer coefficients. `g` must be central.
pub fn verify_homotopy_identity(group: &Group, g: usize, n: usize) -> Result<HomotopyReport> {
    if !group.is_central(g) {
        return Err(BvhError::NotCentral(group.label(g).to_string()));
    }
    let ix = TupleIndexer::new(group);
    let e = group.identity();
    let mut checked = 0;
    for idx in 0..ix.count(n) {
        let mut t = vec![e];
        t.extend(ix.decode(idx, n));
        let mut basis = Chain::new();
        basis.insert(t.clone(), 1);
        let mut lhs = bar_differential(group, &bar_homotopy(group, &basis, g));
        for (k, v) in bar_homotopy(group, &bar_differential(group, &basis), g) {
            *lhs.entry(k).or_insert(0) += v;
        }
        lhs.retain(|_, v| *v != 0);
        let mut rhs = Chain::new();
        let mut gt = t.clone();
        gt[0] = group.mul(g, t[0]);
        add_term(&mut rhs, gt, 1, e);
        *rhs.entry(t.clone()).or_insert(0) -= 1;
        rhs.retain(|_, v| *v != 0);
        checked += 1;
        if lhs != rhs {
            return Ok(HomotopyReport {
                degree: n,
                checked,
                passed: false,
                counterexample: Some(t),
            });
        }
    }
    Ok(HomotopyReport {
        degree: n,
        checked,
        passed: true,
        counterexample: None,
    })
}

/// A central extension `0 → F_p → K → G → 1` built from a normalized 2-cocycle.
///
/// `K` has elements `(λ, a)` at index `a·p + λ` with `(λ,a)(μ,b) = (λ+μ+α(a,b), ab)`.
#[derive(Clone, Debug)]
pub struct ExtensionCocycle {
    base: Arc<Group>,
    alpha: Cochain,
    group: Arc<Group>,
    projection: GroupHom,
}

impl ExtensionCocycle {
    pub fn from_cocycle(alpha: &Cochain) -> Result<ExtensionCocycle> {
        if alpha.degree() != 2 || !alpha.is_cocycle() {
            return Err(BvhError::NotCocycle);
        }
        let base = alpha.group().clone();
        let p = alpha.field().p() as usize;
        let f = alpha.field();
        let n = base.order() * p;
        let table: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                let (a, l) = (x / p, (x % p) as u32);
                (0..n)
                    .map(|y| {
                        let (b, m) = (y / p, (y % p) as u32);
                        let lam = f.add(f.add(l, m), alpha.eval(&[a, b]));
                        base.mul(a, b) * p + lam as usize
                    })
                    .collect()
            })
            .collect();
        let labels = (0..n)
            .map(|x| format!("({},{})", x % p, base.label(x / p)))
            .collect();
        let k = Group::from_table(
            format!("ext({})", base.name()),
            &table,
            base.identity() * p,
            Some(labels),
            n,
        )
        .map_err(|_| BvhError::NotCocycle)?;
        let k = Arc::new(k);
        let projection = GroupHom::from_map(&k, &base, (0..n).map(|x| x / p).collect())?;
        Ok(ExtensionCocycle {
            base,
            alpha: alpha.clone(),
            group: k,
            projection,
        })
    }

    /// Extract a cocycle from a surjection `π: K → G` whose kernel is generated by the central element `c`
    /// of order p: `α(a,b) = log_c(ŝ(a) ŝ(b) ŝ(ab)^{-1})` with `ŝ` the smallest-index section and `ŝ(1) = 1`.
    pub fn from_surjection(pi: &GroupHom, c: usize, f: Fp) -> Result<ExtensionCocycle> {
        let k = pi.source();
        let base = pi.target().clone();
        let log = kernel_log(pi, c, f)?;
        let mut section = vec![usize::MAX; base.order()];
        for x in 0..k.order() {
            let a = pi.apply(x);
            if section[a] == usize::MAX {
                section[a] = x;
            }
        }
        section[base.identity()] = k.identity();
        if section.contains(&usize::MAX) {
            return Err(BvhError::NotHomomorphism("map is not surjective".into()));
        }
        let alpha = Cochain::from_fn(&base, f, 2, |t| {
            let (a, b) = (t[0], t[1]);
            let x = k.mul(k.mul(section[a], section[b]), k.inv(section[base.mul(a, b)]));
            log[x]
        });
        Self::from_cocycle(&alpha)
    }

    pub fn base(&self) -> &Arc<Group> {
        &self.base
    }

    pub fn alpha(&self) -> &Cochain {
        &self.alpha
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn projection(&self) -> &GroupHom {
        &self.projection
    }

    /// Index of the lift `(0, a)`.
    pub fn section(&self, a: usize) -> usize {
        a * self.alpha.field().p() as usize
    }

    /// The kernel generator `(1, 1)`.
    pub fn kernel_generator(&self) -> usize {
        self.section(self.base.identity()) + 1
    }

    /// `[ĝ, ĥ] = ĝĥĝ^{-1}ĥ^{-1}` as an element of the kernel F_p. Requires `gh = hg`.
    pub fn commutator(&self, g: usize, h: usize) -> Result<u32> {
        if self.base.mul(g, h) != self.base.mul(h, g) {
            return Err(BvhError::NotCentral(format!(
                "{} and {} do not commute",
                self.base.label(g),
                self.base.label(h)
            )));
        }
        let x = self.group.commutator(self.section(g), self.section(h));
        Ok((x % self.alpha.field().p() as usize) as u32)
    }
}

/// For each element of K in the kernel `⟨c⟩` its exponent; other entries are `u32::MAX`.
fn kernel_log(pi: &GroupHom, c: usize, f: Fp) -> Result<Vec<u32>> {
    let k = pi.source();
    if !k.is_central(c) || pi.apply(c) != pi.target().identity() {
        return Err(BvhError::NotCentral(k.label(c).to_string()));
    }
    let kernel = pi.kernel();
    if kernel.order() != f.p() as usize || k.element_order(c) != f.p() as usize {
        return Err(BvhError::Mismatch("kernel is not cyclic of order p generated by c".into()));
    }
    let mut log = vec![u32::MAX; k.order()];
    let mut x = k.identity();
    for e in 0..f.p() {
        log[x] = e;
        x = k.mul(x, c);
    }
    Ok(log)
}

/// `[ĝ, ĥ]` computed in `K` itself for lifts of commuting `g, h` under `π`, as a power of `c`.
pub fn commutator_of_lifts(pi: &GroupHom, c: usize, f: Fp, g: usize, h: usize) -> Result<u32> {
    let k = pi.source();
    let log = kernel_log(pi, c, f)?;
    let lift = |a: usize| (0..k.order()).find(|&x| pi.apply(x) == a);
    let (gl, hl) = match (lift(g), lift(h)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(BvhError::NotHomomorphism("map is not surjective".into())),
    };
    let x = k.commutator(gl, hl);
    match log[x] {
        u32::MAX => Err(BvhError::NotCentral("elements do not commute in the quotient".into())),
        e => Ok(e),
    }
}
