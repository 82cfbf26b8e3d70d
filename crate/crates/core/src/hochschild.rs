//! HH*(kG) through the centraliser decomposition: products, Δ and the bracket.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::cochain::Cochain;
use crate::cohomology::{cohomology_space, h1_homs, CohomologyClass, CohomologySpace, H1Basis};
use crate::error::{BvhError, Result};
use crate::field::Fp;
use crate::group::{ConjugacyData, Group, Subgroup};

/// Conjugacy classes of `G` with their centralisers and canonical conjugators.
#[derive(Debug)]
pub struct HHContext {
    group: Arc<Group>,
    f: Fp,
    classes: ConjugacyData,
    centralisers: Vec<Subgroup>,
    /// for every element `a`, the smallest `w` with `w a w^{-1}` the class representative
    conjugators: Vec<usize>,
    h1: Vec<OnceLock<H1Basis>>,
}

impl HHContext {
    pub fn new(group: &Arc<Group>, f: Fp) -> Arc<HHContext> {
        let classes = group.conjugacy_classes();
        let centralisers = classes
            .representatives
            .iter()
            .map(|&g| group.centraliser(g))
            .collect();
        let n = group.order();
        let mut conjugators = vec![usize::MAX; n];
        for a in 0..n {
            if classes.representative_of(a) == a {
                conjugators[a] = group.identity();
            }
        }
        for w in 0..n {
            for a in 0..n {
                if conjugators[a] == usize::MAX && group.conj(w, a) == classes.representative_of(a) {
                    conjugators[a] = w;
                }
            }
        }
        let h1 = (0..classes.len()).map(|_| OnceLock::new()).collect();
        Arc::new(HHContext {
            group: group.clone(),
            f,
            classes,
            centralisers,
            conjugators,
            h1,
        })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn classes(&self) -> &ConjugacyData {
        &self.classes
    }

    /// Number of components.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn representative(&self, c: usize) -> usize {
        self.classes.representatives[c]
    }

    pub fn label(&self, c: usize) -> &str {
        self.group.label(self.representative(c))
    }

    pub fn centraliser(&self, c: usize) -> &Subgroup {
        &self.centralisers[c]
    }

    pub fn component_of(&self, a: usize) -> usize {
        self.classes.class_of[a]
    }

    pub fn conjugator(&self, a: usize) -> usize {
        self.conjugators[a]
    }

    /// Component index of the class representative `g`.
    pub fn component(&self, g: usize) -> Result<usize> {
        let c = self.component_of(g);
        if self.representative(c) != g {
            return Err(BvhError::Mismatch(format!(
                "{} is not a class representative",
                self.group.label(g)
            )));
        }
        Ok(c)
    }

    /// Hom(C_G(g), F_p) for the representative of component `c`.
    pub fn h1(&self, c: usize) -> &H1Basis {
        self.h1[c].get_or_init(|| h1_homs(self.centralisers[c].group(), self.f))
    }

    /// The representative `g` of component `c`, as an element of C_G(g).
    pub fn local_representative(&self, c: usize) -> usize {
        self.centralisers[c]
            .to_local(self.representative(c))
            .expect("g lies in its centraliser")
    }

    /// Move a cochain on C_G(k) to the component of `k`, conjugating by the canonical element.
    fn canonicalise(&self, k: usize, ck: &Subgroup, t: Cochain) -> Result<(usize, Cochain)> {
        let c = self.component_of(k);
        let w = self.conjugators[k];
        let t = if w == self.group.identity() {
            t
        } else {
            t.conjugate(ck, w)?.1
        };
        let target = self.centralisers[c].group();
        let t = Cochain::from_values(target, self.f, t.degree(), t.into_values())?;
        Ok((c, t))
    }
}

/// HH^n(kG) = ⊕_g H^n(C_G(g), F_p) over class representatives.
#[derive(Clone, Debug)]
pub struct HHSpace {
    ctx: Arc<HHContext>,
    degree: usize,
    spaces: Vec<Arc<CohomologySpace>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HHComponentSummary {
    pub representative: String,
    pub class_size: usize,
    pub centraliser_order: usize,
    pub dim: usize,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HHSpaceSummary {
    pub degree: usize,
    pub dim: usize,
    pub components: Vec<HHComponentSummary>,
}

pub fn hh_space(group: &Arc<Group>, f: Fp, n: usize) -> Result<HHSpace> {
    HHSpace::over(&HHContext::new(group, f), n)
}

impl HHSpace {
    pub fn over(ctx: &Arc<HHContext>, n: usize) -> Result<HHSpace> {
        let spaces = ctx
            .centralisers
            .iter()
            .map(|c| cohomology_space(c.group(), ctx.f, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(HHSpace {
            ctx: ctx.clone(),
            degree: n,
            spaces,
        })
    }

    pub fn context(&self) -> &Arc<HHContext> {
        &self.ctx
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn space(&self, c: usize) -> &Arc<CohomologySpace> {
        &self.spaces[c]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(|s| s.dim()).collect()
    }

    pub fn dim(&self) -> usize {
        self.dims().iter().sum()
    }

    /// The basis element `k` of component `c`.
    pub fn basis_element(&self, c: usize, k: usize) -> HHElement {
        let mut parts = BTreeMap::new();
        parts.insert(c, self.spaces[c].representative(k));
        HHElement {
            ctx: self.ctx.clone(),
            degree: self.degree,
            parts,
        }
    }

    /// All basis elements, component by component.
    pub fn basis(&self) -> Vec<HHElement> {
        (0..self.ctx.len())
            .flat_map(|c| (0..self.spaces[c].dim()).map(move |k| (c, k)))
            .map(|(c, k)| self.basis_element(c, k))
            .collect()
    }

    pub fn summary(&self) -> HHSpaceSummary {
        let sizes = self.ctx.classes.class_sizes();
        let components = (0..self.ctx.len())
            .map(|c| HHComponentSummary {
                representative: self.ctx.label(c).to_string(),
                class_size: sizes[c],
                centraliser_order: self.ctx.centralisers[c].order(),
                dim: self.spaces[c].dim(),
                basis: self.spaces[c].labels().to_vec(),
            })
            .collect();
        HHSpaceSummary {
            degree: self.degree,
            dim: self.dim(),
            components,
        }
    }
}

/// An element of HH^n(kG): a cocycle on C_G(g) for each supported representative `g`.
#[derive(Clone, Debug)]
pub struct HHElement {
    ctx: Arc<HHContext>,
    degree: usize,
    parts: BTreeMap<usize, Cochain>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HHComponentJson {
    pub basis: Vec<String>,
    pub coordinates: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HHElementJson {
    pub group: String,
    pub p: u32,
    pub degree: usize,
    /// nonzero components keyed by representative label
    pub components: BTreeMap<String, HHComponentJson>,
}

impl HHElement {
    pub fn zero(ctx: &Arc<HHContext>, degree: usize) -> HHElement {
        HHElement {
            ctx: ctx.clone(),
            degree,
            parts: BTreeMap::new(),
        }
    }

    /// The unit: 1 in H^0 of the identity component.
    pub fn one(ctx: &Arc<HHContext>) -> HHElement {
        let c = ctx.component_of(ctx.group.identity());
        let one = Cochain::constant(ctx.centralisers[c].group(), ctx.f, 1);
        HHElement::zero(ctx, 0).with_part(c, one)
    }

    /// A single component given by a cocycle on C_G(g).
    pub fn from_component(ctx: &Arc<HHContext>, c: usize, x: Cochain) -> Result<HHElement> {
        if c >= ctx.len() {
            return Err(BvhError::Mismatch(format!("no component {c}")));
        }
        if !x.group().same_as(ctx.centralisers[c].group()) || x.field() != ctx.f {
            return Err(BvhError::Mismatch(format!(
                "cochain does not live on the centraliser of {}",
                ctx.label(c)
            )));
        }
        if !x.is_cocycle() {
            return Err(BvhError::NotCocycle);
        }
        let x = Cochain::from_values(ctx.centralisers[c].group(), ctx.f, x.degree(), x.into_values())?;
        Ok(HHElement::zero(ctx, x.degree()).with_part(c, x))
    }

    /// Degree-1 element `g ⊗ x` from the values of a hom on C_G(g), indexed by parent elements.
    pub fn from_hom(ctx: &Arc<HHContext>, c: usize, values: &[u32]) -> Result<HHElement> {
        let cg = &ctx.centralisers[c];
        let local: Vec<u32> = cg.elements().iter().map(|&a| values[a] % ctx.f.p()).collect();
        HHElement::from_component(ctx, c, Cochain::from_element_values(cg.group(), ctx.f, &local))
    }

    fn with_part(mut self, c: usize, x: Cochain) -> HHElement {
        if !x.is_zero() {
            self.parts.insert(c, x);
        }
        self
    }

    pub fn context(&self) -> &Arc<HHContext> {
        &self.ctx
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Supported components with their cocycles.
    pub fn parts(&self) -> impl Iterator<Item = (usize, &Cochain)> {
        self.parts.iter().map(|(&c, x)| (c, x))
    }

    pub fn component(&self, c: usize) -> Option<&Cochain> {
        self.parts.get(&c)
    }

    fn check_same(&self, other: &HHElement) -> Result<()> {
        if !Arc::ptr_eq(&self.ctx, &other.ctx) && !self.ctx.group.same_as(&other.ctx.group) {
            return Err(BvhError::Mismatch("elements of different groups".into()));
        }
        if self.ctx.f != other.ctx.f {
            return Err(BvhError::Mismatch("moduli differ".into()));
        }
        Ok(())
    }

    fn accumulate(&mut self, c: usize, x: Cochain) -> Result<()> {
        let sum = match self.parts.remove(&c) {
            Some(y) => y.add(&x)?,
            None => x,
        };
        if !sum.is_zero() {
            self.parts.insert(c, sum);
        }
        Ok(())
    }

    pub fn add(&self, other: &HHElement) -> Result<HHElement> {
        self.check_same(other)?;
        if self.degree != other.degree {
            return Err(BvhError::Mismatch("degrees differ".into()));
        }
        let mut out = self.clone();
        for (&c, x) in &other.parts {
            out.accumulate(c, x.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HHElement) -> Result<HHElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: u32) -> HHElement {
        let mut out = HHElement::zero(&self.ctx, self.degree);
        for (&c, x) in &self.parts {
            out = out.with_part(c, x.scale(s));
        }
        out
    }

    pub fn neg(&self) -> HHElement {
        self.scale(self.ctx.f.p() - 1)
    }

    /// Coordinates of component `c` in the basis of H^n(C_G(g)).
    pub fn component_coordinates(&self, c: usize) -> Result<Vec<u32>> {
        let cg = self.ctx.centralisers[c].group();
        match (self.degree, self.parts.get(&c)) {
            (1, x) => {
                let h1 = self.ctx.h1(c);
                Ok(match x {
                    Some(x) => {
                        let vals: Vec<u32> = (0..cg.order()).map(|a| x.eval(&[a])).collect();
                        h1.coordinates(&vals)
                    }
                    None => vec![0; h1.dim()],
                })
            }
            (n, Some(x)) => cohomology_space(cg, self.ctx.f, n)?.coordinates(x),
            (n, None) => Ok(vec![0; cohomology_space(cg, self.ctx.f, n)?.dim()]),
        }
    }

    /// Coordinates of every component.
    pub fn coordinates(&self) -> Result<Vec<Vec<u32>>> {
        (0..self.ctx.len()).map(|c| self.component_coordinates(c)).collect()
    }

    /// Component classes in H^n(C_G(g)).
    pub fn classes(&self) -> Result<Vec<CohomologyClass>> {
        (0..self.ctx.len())
            .map(|c| {
                let space = cohomology_space(self.ctx.centralisers[c].group(), self.ctx.f, self.degree)?;
                space.class_from_coords(self.component_coordinates(c)?)
            })
            .collect()
    }

    pub fn is_zero_class(&self) -> Result<bool> {
        for &c in self.parts.keys() {
            if self.component_coordinates(c)?.iter().any(|&v| v != 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_class(&self, other: &HHElement) -> Result<bool> {
        if self.degree != other.degree {
            return Ok(false);
        }
        self.sub(other)?.is_zero_class()
    }

    pub fn to_json(&self) -> Result<HHElementJson> {
        let mut components = BTreeMap::new();
        for c in 0..self.ctx.len() {
            let coordinates = self.component_coordinates(c)?;
            if coordinates.iter().all(|&v| v == 0) {
                continue;
            }
            let basis = if self.degree == 1 {
                self.ctx.h1(c).labels()
            } else {
                cohomology_space(self.ctx.centralisers[c].group(), self.ctx.f, self.degree)?
                    .labels()
                    .to_vec()
            };
            components.insert(self.ctx.label(c).to_string(), HHComponentJson { basis, coordinates });
        }
        Ok(HHElementJson {
            group: self.ctx.group.name().to_string(),
            p: self.ctx.f.p(),
            degree: self.degree,
            components,
        })
    }
}

/// `Tr^{C(k)}_K(Res x · Res u^*y)` with `k = g·uhu^{-1}` and `K = C(g) ∩ C(uhu^{-1})`, before moving to the representative.
struct ProductTerm {
    k: usize,
    intersection: Subgroup,
    ck: Subgroup,
    value: Cochain,
}

fn product_term(
    group: &Arc<Group>,
    g: usize,
    cg: &Subgroup,
    x: &Cochain,
    h: usize,
    ch: &Subgroup,
    y: &Cochain,
    u: usize,
) -> Result<ProductTerm> {
    let (chu, yu) = y.conjugate(ch, u)?;
    let k = group.mul(g, group.conj(u, h));
    let ck = group.centraliser(k);
    let kk = cg.intersection(&chu);
    let xk = x.restrict(&kk.restrict_to(cg)?)?;
    let yk = yu.restrict(&kk.restrict_to(&chu)?)?;
    let yk = Cochain::from_values(xk.group(), yk.field(), yk.degree(), yk.into_values())?;
    let value = xk.cup(&yk)?.transfer(&kk.restrict_to(&ck)?)?;
    Ok(ProductTerm {
        k,
        intersection: kk,
        ck,
        value,
    })
}

/// Products of one component of `x` with one component of `y`, summed over double cosets.
fn sw_pair(ctx: &HHContext, cx: usize, x: &Cochain, cy: usize, y: &Cochain) -> Result<Vec<(usize, Cochain)>> {
    let group = &ctx.group;
    let (g, h) = (ctx.representative(cx), ctx.representative(cy));
    let (cg, ch) = (&ctx.centralisers[cx], &ctx.centralisers[cy]);
    group
        .double_cosets(cg, ch)?
        .into_iter()
        .map(|u| {
            let t = product_term(group, g, cg, x, h, ch, y, u)?;
            ctx.canonicalise(t.k, &t.ck, t.value)
        })
        .collect()
}

/// The product on HH*(kG) as a sum over double cosets of centralisers.
pub fn sw_product(x: &HHElement, y: &HHElement) -> Result<HHElement> {
    x.check_same(y)?;
    let ctx = &x.ctx;
    let pairs: Vec<(usize, &Cochain, usize, &Cochain)> = x
        .parts
        .iter()
        .flat_map(|(&a, xa)| y.parts.iter().map(move |(&b, yb)| (a, xa, b, yb)))
        .collect();
    let terms = pairs
        .par_iter()
        .map(|&(a, xa, b, yb)| sw_pair(ctx, a, xa, b, yb))
        .collect::<Result<Vec<_>>>()?;
    let mut out = HHElement::zero(ctx, x.degree + y.degree);
    for (c, t) in terms.into_iter().flatten() {
        out.accumulate(c, t)?;
    }
    Ok(out)
}

/// Δ on HH*: componentwise Δ_g inside C_G(g), where `g` is central.
pub fn hh_bv_delta(x: &HHElement) -> Result<HHElement> {
    if x.degree == 0 {
        return Err(BvhError::Mismatch("delta needs degree at least 1".into()));
    }
    let ctx = &x.ctx;
    let mut out = HHElement::zero(ctx, x.degree - 1);
    for (&c, xc) in &x.parts {
        let d = xc.delta_g(ctx.local_representative(c))?;
        out.accumulate(c, d)?;
    }
    Ok(out)
}

/// `[x,y] = (-1)^{|x|}Δ(xy) - (-1)^{|x|}Δ(x)y - xΔ(y)`.
///
/// For two degree-1 inputs the direct expansion is evaluated too and must agree.
pub fn gerstenhaber_bracket(x: &HHElement, y: &HHElement) -> Result<HHElement> {
    x.check_same(y)?;
    let ctx = &x.ctx;
    let (m, n) = (x.degree, y.degree);
    if m + n == 0 {
        return Err(BvhError::Mismatch("bracket of two degree-0 elements".into()));
    }
    let f = ctx.f;
    let s = f.sign(m);
    let mut out = hh_bv_delta(&sw_product(x, y)?)?.scale(s);
    if m > 0 {
        let t = sw_product(&hh_bv_delta(x)?, y)?;
        out = out.sub(&t.scale(s))?;
    }
    if n > 0 {
        let t = sw_product(x, &hh_bv_delta(y)?)?;
        out = out.sub(&t)?;
    }
    if m == 1 && n == 1 {
        let direct = bracket_direct(x, y)?;
        if !out.same_class(&direct)? {
            return Err(BvhError::Mismatch(
                "bracket from the BV identity disagrees with the direct evaluation".into(),
            ));
        }
    }
    Ok(out)
}

/// Double-coset data for brackets between the components of `g` and `h`.
#[derive(Clone, Debug)]
pub struct BracketPlan {
    g: usize,
    h: usize,
    terms: Vec<PlanTerm>,
}

#[derive(Clone, Debug)]
struct PlanTerm {
    u: usize,
    k: usize,
    target: usize,
    w: usize,
    /// elements of C(k)
    ck: Vec<usize>,
    /// coset representative of `K·a` for `a` in C(k), parent-indexed
    rep_of: Vec<usize>,
    reps: Vec<usize>,
}

impl BracketPlan {
    pub fn new(ctx: &HHContext, cx: usize, cy: usize) -> Result<BracketPlan> {
        let group = &ctx.group;
        let (g, h) = (ctx.representative(cx), ctx.representative(cy));
        let (cg, ch) = (&ctx.centralisers[cx], &ctx.centralisers[cy]);
        let n = group.order();
        let mut terms = Vec::new();
        for u in group.double_cosets(cg, ch)? {
            let hu = group.conj(u, h);
            let k = group.mul(g, hu);
            let ck: Vec<usize> = (0..n).filter(|&a| group.mul(a, k) == group.mul(k, a)).collect();
            let kk: Vec<usize> = ck
                .iter()
                .copied()
                .filter(|&a| cg.contains(a) && group.mul(a, hu) == group.mul(hu, a))
                .collect();
            let mut rep_of = vec![usize::MAX; n];
            let mut reps = Vec::new();
            for &a in &ck {
                if rep_of[a] == usize::MAX {
                    reps.push(a);
                    for &b in &kk {
                        rep_of[group.mul(b, a)] = a;
                    }
                }
            }
            terms.push(PlanTerm {
                u,
                k,
                target: ctx.component_of(k),
                w: ctx.conjugators[k],
                ck,
                rep_of,
                reps,
            });
        }
        Ok(BracketPlan { g, h, terms })
    }

    /// The bracket of degree-1 classes given as parent-indexed homs on C(g) and C(h).
    ///
    /// Returns parent-indexed homs on the centralisers of the target representatives.
    pub fn evaluate(&self, ctx: &HHContext, x: &[u32], y: &[u32]) -> Vec<(usize, Vec<u32>)> {
        let group = &ctx.group;
        let f = ctx.f;
        let n = group.order();
        let (xg, yh) = (x[self.g], y[self.h]);
        let mut out: Vec<(usize, Vec<u32>)> = Vec::new();
        for t in &self.terms {
            let uinv = group.inv(t.u);
            let yu = |b: usize| y[group.conj(uinv, b)];
            // b = r·a = κ·next with κ in K
            let step = |r: usize, a: usize| {
                let b = group.mul(r, a);
                let next = t.rep_of[b];
                (group.mul(b, group.inv(next)), next)
            };
            let phi = |a1: usize, a2: usize| {
                t.reps.iter().fold(0, |s, &r| {
                    let (k1, r1) = step(r, a1);
                    let (k2, _) = step(r1, a2);
                    f.add(s, f.mul(x[k1], yu(k2)))
                })
            };
            let mut vals = vec![0u32; n];
            for &a in &t.ck {
                let tr_y = t.reps.iter().fold(0, |s, &r| f.add(s, yu(step(r, a).0)));
                let tr_x = t.reps.iter().fold(0, |s, &r| f.add(s, x[step(r, a).0]));
                let mut v = f.sub(phi(a, t.k), phi(t.k, a));
                v = f.add(v, f.mul(xg, tr_y));
                v = f.sub(v, f.mul(yh, tr_x));
                vals[a] = v;
            }
            let winv = group.inv(t.w);
            let moved: Vec<u32> = (0..n)
                .map(|b| {
                    let a = group.conj(winv, b);
                    if t.rep_of[a] == usize::MAX {
                        0
                    } else {
                        vals[a]
                    }
                })
                .collect();
            match out.iter_mut().find(|(c, _)| *c == t.target) {
                Some((_, acc)) => {
                    for (s, v) in acc.iter_mut().zip(moved) {
                        *s = f.add(*s, v);
                    }
                }
                None => out.push((t.target, moved)),
            }
        }
        out
    }
}

fn parent_hom(ctx: &HHContext, c: usize, x: &Cochain) -> Vec<u32> {
    let mut vals = vec![0u32; ctx.group.order()];
    for (i, &a) in ctx.centralisers[c].elements().iter().enumerate() {
        vals[a] = x.eval(&[i]);
    }
    vals
}

/// The degree-1 bracket evaluated pointwise from its expansion over double cosets.
pub fn bracket_direct(x: &HHElement, y: &HHElement) -> Result<HHElement> {
    x.check_same(y)?;
    if x.degree != 1 || y.degree != 1 {
        return Err(BvhError::Mismatch("direct evaluation needs degree-1 inputs".into()));
    }
    let ctx = &x.ctx;
    let mut out = HHElement::zero(ctx, 1);
    for (&a, xa) in &x.parts {
        for (&b, yb) in &y.parts {
            let plan = BracketPlan::new(ctx, a, b)?;
            for (c, vals) in plan.evaluate(ctx, &parent_hom(ctx, a, xa), &parent_hom(ctx, b, yb)) {
                let cg = &ctx.centralisers[c];
                let local: Vec<u32> = cg.elements().iter().map(|&e| vals[e]).collect();
                out.accumulate(c, Cochain::from_element_values(cg.group(), ctx.f, &local))?;
            }
        }
    }
    Ok(out)
}

/// Which clause of the centraliser hypothesis holds for one double coset.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HypothesisCentReport {
    pub u: String,
    /// `g·uhu^{-1}`
    pub product: String,
    pub intersection_order: usize,
    pub centraliser_order: usize,
    /// C(g) ∩ C(uhu^{-1}) = C(g·uhu^{-1})
    pub clause_i: bool,
    /// the transferred product of degree-1 classes vanishes for all x, y
    pub clause_ii: bool,
}

impl HypothesisCentReport {
    pub fn holds(&self) -> bool {
        self.clause_i || self.clause_ii
    }
}

pub fn check_hypothesis_cent(ctx: &HHContext, g: usize, h: usize) -> Result<Vec<HypothesisCentReport>> {
    let group = &ctx.group;
    let cg = group.centraliser(g);
    let ch = group.centraliser(h);
    let xs = h1_homs(cg.group(), ctx.f).homs();
    let ys = h1_homs(ch.group(), ctx.f).homs();
    group
        .double_cosets(&cg, &ch)?
        .into_iter()
        .map(|u| {
            let probe = Cochain::zero(cg.group(), ctx.f, 1);
            let t = product_term(group, g, &cg, &probe, h, &ch, &Cochain::zero(ch.group(), ctx.f, 1), u)?;
            let clause_i = t.intersection.order() == t.ck.order();
            let space = cohomology_space(t.ck.group(), ctx.f, 2)?;
            let mut clause_ii = true;
            'outer: for x in &xs {
                for y in &ys {
                    let v = product_term(group, g, &cg, x, h, &ch, y, u)?.value;
                    if space.coordinates(&v)?.iter().any(|&c| c != 0) {
                        clause_ii = false;
                        break 'outer;
                    }
                }
            }
            Ok(HypothesisCentReport {
                u: group.label(u).to_string(),
                product: group.label(t.k).to_string(),
                intersection_order: t.intersection.order(),
                centraliser_order: t.ck.order(),
                clause_i,
                clause_ii,
            })
        })
        .collect()
}
