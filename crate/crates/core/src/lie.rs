//! The Lie algebra HH¹(kG): structure constants, derived series and witnesses.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BvhError, Result};
use crate::field::Fp;
use crate::group::{Group, Subgroup};
use crate::hochschild::{BracketPlan, HHContext, HHElement};
use crate::linalg::SubspaceBasis;

/// A Lie algebra over F_p given by structure constants in a labelled basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    f: Fp,
    labels: Vec<String>,
    /// `table[i][j]` holds the coordinates of `[b_i, b_j]`
    table: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LieAlgebraJson {
    pub p: u32,
    pub dim: usize,
    pub labels: Vec<String>,
    /// nonzero `(i, j, k, c)` with `c` the coefficient of `b_k` in `[b_i, b_j]`
    pub constants: Vec<(usize, usize, usize, u32)>,
}

impl LieAlgebra {
    pub fn new(f: Fp, labels: Vec<String>, table: Vec<Vec<Vec<u32>>>) -> Result<LieAlgebra> {
        let d = labels.len();
        if table.len() != d || table.iter().any(|r| r.len() != d || r.iter().any(|v| v.len() != d)) {
            return Err(BvhError::DimensionMismatch {
                expected: d,
                got: table.len(),
            });
        }
        let table = table
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.into_iter().map(|c| c % f.p()).collect()).collect())
            .collect();
        Ok(LieAlgebra { f, labels, table })
    }

    pub fn zero(f: Fp) -> LieAlgebra {
        LieAlgebra {
            f,
            labels: Vec::new(),
            table: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Coordinates of `[b_i, b_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[u32] {
        &self.table[i][j]
    }

    /// Overwrite one structure constant.
    pub fn set_constant(&mut self, i: usize, j: usize, k: usize, c: u32) {
        self.table[i][j][k] = c % self.f.p();
    }

    /// `[u, v]` extended bilinearly.
    pub fn bracket(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let f = self.f;
        let mut out = vec![0u32; self.dim()];
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let s = f.mul(a, b);
                for (o, &c) in out.iter_mut().zip(&self.table[i][j]) {
                    *o = f.add(*o, f.mul(s, c));
                }
            }
        }
        out
    }

    pub fn unit(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    /// Span of `[u, v]` for `u` in `a` and `v` in `b`.
    pub fn bracket_span(&self, a: &SubspaceBasis, b: &SubspaceBasis) -> SubspaceBasis {
        let vs: Vec<Vec<u32>> = a
            .vectors()
            .iter()
            .flat_map(|u| b.vectors().iter().map(move |v| self.bracket(u, v)))
            .collect();
        SubspaceBasis::from_vectors(self.f, self.dim(), &vs).expect("ambient length")
    }

    pub fn to_json(&self) -> LieAlgebraJson {
        let d = self.dim();
        let mut constants = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let c = self.table[i][j][k];
                    if c != 0 {
                        constants.push((i, j, k, c));
                    }
                }
            }
        }
        LieAlgebraJson {
            p: self.f.p(),
            dim: d,
            labels: self.labels.clone(),
            constants,
        }
    }

    pub fn from_json(j: &LieAlgebraJson) -> Result<LieAlgebra> {
        let f = Fp::new(j.p)?;
        let d = j.dim;
        if j.labels.len() != d {
            return Err(BvhError::DimensionMismatch {
                expected: d,
                got: j.labels.len(),
            });
        }
        let mut table = vec![vec![vec![0u32; d]; d]; d];
        for &(a, b, c, v) in &j.constants {
            if a >= d || b >= d || c >= d {
                return Err(BvhError::Parse(format!("constant index out of range: ({a},{b},{c})")));
            }
            table[a][b][c] = v % f.p();
        }
        LieAlgebra::new(f, j.labels.clone(), table)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LieViolation {
    pub axiom: String,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LieAxiomReport {
    pub passed: bool,
    pub violation: Option<LieViolation>,
}

/// Alternating, antisymmetric and Jacobi on all basis triples.
pub fn verify_lie_axioms(l: &LieAlgebra) -> LieAxiomReport {
    let d = l.dim();
    let f = l.f;
    let fail = |axiom: &str, indices: Vec<usize>| LieAxiomReport {
        passed: false,
        violation: Some(LieViolation {
            axiom: axiom.to_string(),
            indices,
        }),
    };
    for i in 0..d {
        if l.table[i][i].iter().any(|&c| c != 0) {
            return fail("alternating", vec![i]);
        }
        for j in 0..i {
            if l.table[i][j].iter().zip(&l.table[j][i]).any(|(&a, &b)| f.add(a, b) != 0) {
                return fail("antisymmetry", vec![j, i]);
            }
        }
    }
    let bad = (0..d).into_par_iter().find_map_first(|i| {
        for j in i + 1..d {
            let bij = &l.table[i][j];
            for k in j + 1..d {
                let a = l.bracket(bij, &l.unit(k));
                let b = l.bracket(&l.table[j][k], &l.unit(i));
                let c = l.bracket(&l.table[k][i], &l.unit(j));
                if (0..d).any(|t| f.add(f.add(a[t], b[t]), c[t]) != 0) {
                    return Some(vec![i, j, k]);
                }
            }
        }
        None
    });
    match bad {
        Some(t) => fail("jacobi", t),
        None => LieAxiomReport {
            passed: true,
            violation: None,
        },
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LieAnalysis {
    pub dim: usize,
    pub derived_series_dims: Vec<usize>,
    pub lower_central_dims: Vec<usize>,
    pub soluble: bool,
    /// strict steps of the derived series until zero
    pub derived_length: Option<usize>,
    pub nilpotent: bool,
}

/// Derived and lower central series, each followed until it vanishes or stabilises.
pub fn derived_series_analysis(l: &LieAlgebra) -> Result<LieAnalysis> {
    let report = verify_lie_axioms(l);
    if let Some(v) = report.violation {
        return Err(BvhError::Mismatch(format!(
            "{} fails on basis indices {:?}",
            v.axiom, v.indices
        )));
    }
    let whole = SubspaceBasis::full(l.f, l.dim());
    let mut derived = vec![whole.dim()];
    let mut cur = whole.clone();
    while cur.dim() > 0 {
        let next = l.bracket_span(&cur, &cur);
        if next.dim() == cur.dim() {
            break;
        }
        derived.push(next.dim());
        cur = next;
    }
    let soluble = cur.dim() == 0;
    let mut lower = vec![whole.dim()];
    let mut cur = whole.clone();
    while cur.dim() > 0 {
        let next = l.bracket_span(&whole, &cur);
        if next.dim() == cur.dim() {
            break;
        }
        lower.push(next.dim());
        cur = next;
    }
    let nilpotent = cur.dim() == 0;
    Ok(LieAnalysis {
        dim: l.dim(),
        derived_length: soluble.then(|| derived.len() - 1),
        derived_series_dims: derived,
        lower_central_dims: lower,
        soluble,
        nilpotent,
    })
}

/// One basis vector of HH¹: hom `hom` of Hom(C_G(g), F_p) at component `component`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Hh1BasisVector {
    pub component: usize,
    pub representative: String,
    pub hom: usize,
}

/// HH¹(kG) with the data needed to move between HH elements and Lie coordinates.
#[derive(Clone, Debug)]
pub struct Hh1Lie {
    ctx: Arc<HHContext>,
    basis: Vec<Hh1BasisVector>,
    offsets: Vec<usize>,
    algebra: LieAlgebra,
}

/// Parent-indexed values of the k-th basis hom of component `c`.
fn basis_hom(ctx: &HHContext, c: usize, k: usize) -> Vec<u32> {
    let mut vals = vec![0u32; ctx.group().order()];
    let local = ctx.h1(c).hom_values(k);
    for (i, &a) in ctx.centraliser(c).elements().iter().enumerate() {
        vals[a] = local[i];
    }
    vals
}

pub fn build_hh1_lie(group: &Arc<Group>, f: Fp) -> Result<Hh1Lie> {
    let ctx = HHContext::new(group, f);
    let n = ctx.len();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut basis = Vec::new();
    for c in 0..n {
        offsets.push(basis.len());
        for k in 0..ctx.h1(c).dim() {
            basis.push(Hh1BasisVector {
                component: c,
                representative: ctx.label(c).to_string(),
                hom: k,
            });
        }
    }
    offsets.push(basis.len());
    let d = basis.len();
    let homs: Vec<Vec<u32>> = basis.iter().map(|b| basis_hom(&ctx, b.component, b.hom)).collect();
    let active: Vec<usize> = (0..n).filter(|&c| offsets[c + 1] > offsets[c]).collect();
    let pairs: Vec<(usize, usize)> = active
        .iter()
        .flat_map(|&a| active.iter().map(move |&b| (a, b)))
        .collect();
    let plans: HashMap<(usize, usize), BracketPlan> = pairs
        .par_iter()
        .map(|&(a, b)| BracketPlan::new(&ctx, a, b).map(|p| ((a, b), p)))
        .collect::<Result<_>>()?;
    let table: Vec<Vec<Vec<u32>>> = (0..d)
        .into_par_iter()
        .map(|i| {
            (0..d)
                .map(|j| {
                    let plan = &plans[&(basis[i].component, basis[j].component)];
                    let mut v = vec![0u32; d];
                    for (c, vals) in plan.evaluate(&ctx, &homs[i], &homs[j]) {
                        let local: Vec<u32> =
                            ctx.centraliser(c).elements().iter().map(|&e| vals[e]).collect();
                        for (k, x) in ctx.h1(c).coordinates(&local).into_iter().enumerate() {
                            v[offsets[c] + k] = f.add(v[offsets[c] + k], x);
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    let labels = basis
        .iter()
        .map(|b| format!("{}⊗{}", b.representative, ctx.h1(b.component).labels()[b.hom]))
        .collect();
    let algebra = LieAlgebra::new(f, labels, table)?;
    Ok(Hh1Lie {
        ctx,
        basis,
        offsets,
        algebra,
    })
}

impl Hh1Lie {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn context(&self) -> &Arc<HHContext> {
        &self.ctx
    }

    pub fn basis(&self) -> &[Hh1BasisVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Basis indices belonging to component `c`.
    pub fn component_range(&self, c: usize) -> std::ops::Range<usize> {
        self.offsets[c]..self.offsets[c + 1]
    }

    /// Lie coordinates of `g ⊗ x` for a class representative `g` and a hom on C_G(g) given by parent-indexed values.
    pub fn element(&self, g: usize, values: &[u32]) -> Result<Vec<u32>> {
        let c = self.ctx.component(g)?;
        let cg = self.ctx.centraliser(c);
        let local: Vec<u32> = cg.elements().iter().map(|&a| values[a] % self.ctx.field().p()).collect();
        let mut v = vec![0u32; self.dim()];
        for (k, x) in self.ctx.h1(c).coordinates(&local).into_iter().enumerate() {
            v[self.offsets[c] + k] = x;
        }
        if self.ctx.h1(c).combine(&v[self.component_range(c)]) != local {
            return Err(BvhError::NotHomomorphism(format!(
                "values are not a hom on the centraliser of {}",
                self.ctx.group().label(g)
            )));
        }
        Ok(v)
    }

    /// The HH¹ element with the given Lie coordinates.
    pub fn to_hh(&self, coords: &[u32]) -> Result<HHElement> {
        let f = self.ctx.field();
        let mut out = HHElement::zero(&self.ctx, 1);
        for c in 0..self.ctx.len() {
            let r = self.component_range(c);
            if coords[r.clone()].iter().all(|&x| x == 0) {
                continue;
            }
            let local = self.ctx.h1(c).combine(&coords[r]);
            let mut vals = vec![0u32; self.ctx.group().order()];
            for (i, &a) in self.ctx.centraliser(c).elements().iter().enumerate() {
                vals[a] = f.reduce(local[i] as i64);
            }
            out = out.add(&HHElement::from_hom(&self.ctx, c, &vals)?)?;
        }
        Ok(out)
    }

    /// Span of `z ⊗ x` over `z` in `zs` (central) and `x` in Hom(G, F_p).
    pub fn central_span(&self, zs: &[usize]) -> Result<SubspaceBasis> {
        let f = self.ctx.field();
        let mut vs = Vec::new();
        for &z in zs {
            let c = self.ctx.component(z)?;
            if !self.ctx.centraliser(c).is_whole() {
                return Err(BvhError::NotCentral(self.ctx.group().label(z).to_string()));
            }
            vs.extend(self.component_range(c).map(|i| self.algebra.unit(i)));
        }
        SubspaceBasis::from_vectors(f, self.dim(), &vs)
    }
}

fn hom_with_value(ctx: &HHContext, c: usize, targets: &[(usize, u32)]) -> Option<Vec<u32>> {
    // search Hom(G, F_p) for a hom with prescribed values at the given elements
    let f = ctx.field();
    let h1 = ctx.h1(c);
    let d = h1.dim();
    let total = (f.p() as usize).checked_pow(d as u32)?;
    (0..total).find_map(|code| {
        let mut coords = vec![0u32; d];
        let mut x = code;
        for co in coords.iter_mut() {
            *co = (x % f.p() as usize) as u32;
            x /= f.p() as usize;
        }
        let vals = h1.combine(&coords);
        targets.iter().all(|&(a, v)| vals[a] == v % f.p()).then_some(vals)
    })
}

/// Z(G) ∩ Φ(G) as a subgroup, for a p-group.
pub fn center_frattini(group: &Arc<Group>) -> Result<Subgroup> {
    let z = group.center();
    let phi = group.frattini()?;
    Ok(z.intersection(&phi))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Sl2Witness {
    pub g: String,
    pub e: Vec<u32>,
    pub f: Vec<u32>,
    pub h: Vec<u32>,
    pub relations_hold: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SubspaceWitness {
    pub g: String,
    pub h: String,
    /// the ten spanning elements as (label, coordinates)
    pub elements: Vec<(String, Vec<u32>)>,
    pub span_dim: usize,
    pub bracket_dim: usize,
    /// each displayed bracket relation holds exactly
    pub relations_hold: bool,
    /// `[U, U] ⊇ U`
    pub contains: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonSolubleWitness {
    Sl2(Sl2Witness),
    Subspace(SubspaceWitness),
    HypothesisNotMet { index: usize },
}

impl NonSolubleWitness {
    pub fn verified(&self) -> bool {
        match self {
            NonSolubleWitness::Sl2(w) => w.relations_hold,
            NonSolubleWitness::Subspace(w) => w.relations_hold && w.contains,
            NonSolubleWitness::HypothesisNotMet { .. } => false,
        }
    }
}

/// An sl(2) triple for odd p, or the self-reproducing subspace when Z(G)/(Z(G)∩Φ(G)) is non-cyclic.
pub fn construct_nonsoluble_witness(lie: &Hh1Lie) -> Result<NonSolubleWitness> {
    let ctx = lie.context();
    let group = ctx.group();
    let f = ctx.field();
    let p = f.p();
    if group.prime_power() != Some(p) {
        return Err(BvhError::NotPGroup(group.order()));
    }
    let z = group.center();
    let zphi = center_frattini(group)?;
    let index = z.order() / zphi.order();
    if index < 3 {
        return Ok(NonSolubleWitness::HypothesisNotMet { index });
    }
    let l = lie.algebra();
    let one = group.identity();
    let c1 = ctx.component(one)?;
    let phi = group.frattini()?;
    let g = *z.elements().iter().find(|&&a| !phi.contains(a)).expect("index at least 3");
    let ginv = group.inv(g);
    if p % 2 == 1 {
        let x = hom_with_value(ctx, c1, &[(g, 1)]).expect("g lies outside the Frattini subgroup");
        let e = lie.element(g, &x)?;
        let fm = lie.element(ginv, &x)?.iter().map(|&c| f.neg(c)).collect::<Vec<_>>();
        let h = lie.element(one, &x)?.iter().map(|&c| f.neg(f.mul(2, c))).collect::<Vec<_>>();
        let scale = |v: &[u32], s: u32| v.iter().map(|&c| f.mul(c, s)).collect::<Vec<_>>();
        let relations_hold = l.bracket(&e, &fm) == h
            && l.bracket(&h, &e) == scale(&e, 2)
            && l.bracket(&h, &fm) == scale(&fm, f.neg(2));
        return Ok(NonSolubleWitness::Sl2(Sl2Witness {
            g: group.label(g).to_string(),
            e,
            f: fm,
            h,
            relations_hold,
        }));
    }
    let with_g = Subgroup::generated(group, &[phi.elements(), &[g]].concat());
    let h = *z
        .elements()
        .iter()
        .find(|&&a| !with_g.contains(a))
        .ok_or_else(|| BvhError::Mismatch("Z(G)/(Z(G)∩Φ(G)) is cyclic".into()))?;
    let hinv = group.inv(h);
    let x = hom_with_value(ctx, c1, &[(g, 1), (h, 0)]).expect("g, h independent modulo Φ");
    let y = hom_with_value(ctx, c1, &[(g, 0), (h, 1)]).expect("g, h independent modulo Φ");
    let names = [
        ("g", g),
        ("g^-1", ginv),
        ("h", h),
        ("h^-1", hinv),
        ("1", one),
    ];
    let el = |a: &str, hom: &str| -> Result<Vec<u32>> {
        let at = names.iter().find(|(n, _)| *n == a).unwrap().1;
        lie.element(at, if hom == "x" { &x } else { &y })
    };
    let neg = |v: Vec<u32>| v.into_iter().map(|c| f.neg(c)).collect::<Vec<_>>();
    // (left, right, sign of the result, result)
    let table: [((&str, &str), (&str, &str), bool, (&str, &str)); 10] = [
        (("g^-1", "x"), ("g", "y"), true, ("1", "y")),
        (("h^-1", "y"), ("h", "x"), true, ("1", "x")),
        (("g", "x"), ("1", "x"), true, ("g", "x")),
        (("h", "y"), ("1", "y"), true, ("h", "y")),
        (("g", "y"), ("1", "x"), true, ("g", "y")),
        (("h", "x"), ("1", "y"), true, ("h", "x")),
        (("g^-1", "x"), ("1", "x"), false, ("g^-1", "x")),
        (("h^-1", "y"), ("1", "y"), false, ("h^-1", "y")),
        (("g^-1", "y"), ("1", "x"), false, ("g^-1", "y")),
        (("h^-1", "x"), ("1", "y"), false, ("h^-1", "x")),
    ];
    let mut relations_hold = true;
    let mut elements: Vec<(String, Vec<u32>)> = Vec::new();
    for (a, b, plus, r) in table {
        let lhs = l.bracket(&el(a.0, a.1)?, &el(b.0, b.1)?);
        let rhs = if plus { el(r.0, r.1)? } else { neg(el(r.0, r.1)?) };
        relations_hold &= lhs == rhs;
        for (n, hom) in [a, b, r] {
            let label = format!("{n}⊗{hom}");
            if !elements.iter().any(|(s, _)| *s == label) {
                elements.push((label, el(n, hom)?));
            }
        }
    }
    let vs: Vec<Vec<u32>> = elements.iter().map(|(_, v)| v.clone()).collect();
    let u = SubspaceBasis::from_vectors(f, l.dim(), &vs)?;
    let uu = l.bracket_span(&u, &u);
    let contains = u.is_subspace_of(&uu)?;
    Ok(NonSolubleWitness::Subspace(SubspaceWitness {
        g: group.label(g).to_string(),
        h: group.label(h).to_string(),
        elements,
        span_dim: u.dim(),
        bracket_dim: uu.dim(),
        relations_hold,
        contains,
    }))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct NonNilpotencyWitness {
    pub h: String,
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    /// `[x, y] = y`
    pub holds: bool,
}

/// `x` at the identity component with `x(h) = -1` for some `h ∉ Φ(G)`, and `y` at the component of `h`.
pub fn non_nilpotency_witness(lie: &Hh1Lie) -> Result<Option<NonNilpotencyWitness>> {
    let ctx = lie.context();
    let group = ctx.group();
    let f = ctx.field();
    let phi = group.frattini()?;
    let Some(c) = (0..ctx.len()).find(|&c| !phi.contains(ctx.representative(c))) else {
        return Ok(None);
    };
    let h = ctx.representative(c);
    let one = group.identity();
    let c1 = ctx.component(one)?;
    let xv = hom_with_value(ctx, c1, &[(h, f.neg(1))]).expect("h lies outside the Frattini subgroup");
    let x = lie.element(one, &xv)?;
    let mut y = vec![0u32; lie.dim()];
    y[lie.component_range(c).start] = 1;
    let holds = lie.algebra().bracket(&x, &y) == y;
    Ok(Some(NonNilpotencyWitness {
        h: group.label(h).to_string(),
        x,
        y,
        holds,
    }))
}

/// Whether the bracket vanishes on k(Z(G)∩Φ(G)) ⊗ H¹(G).
pub fn center_frattini_bracket_vanishes(lie: &Hh1Lie) -> Result<bool> {
    let zphi = center_frattini(lie.context().group())?;
    let s = lie.central_span(zphi.elements())?;
    Ok(lie.algebra().bracket_span(&s, &s).dim() == 0)
}

/// Whether kZ(G) ⊗ H¹(G) is closed under the bracket.
pub fn center_subalgebra_closed(lie: &Hh1Lie) -> Result<bool> {
    let z = lie.context().group().center();
    let s = lie.central_span(z.elements())?;
    lie.algebra().bracket_span(&s, &s).is_subspace_of(&s)
}
