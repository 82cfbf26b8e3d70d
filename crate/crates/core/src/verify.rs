//! The invariant suite behind `bvh verify`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cochain::{verify_homotopy_identity, Cochain, TupleIndexer};
use crate::cohomology::{check_budget, cohomology_space, h1_homs};
use crate::delta::{bockstein_matrix, delta_matrix, matrix_add, matrix_mul};
use crate::error::Result;
use crate::field::Fp;
use crate::group::{quotient, Group, Subgroup};
use crate::hochschild::{bracket_direct, gerstenhaber_bracket, hh_bv_delta, HHContext, HHSpace};
use crate::lie::{
    build_hh1_lie, center_frattini_bracket_vanishes, center_subalgebra_closed, construct_nonsoluble_witness,
    derived_series_analysis, non_nilpotency_witness, verify_lie_axioms, NonSolubleWitness,
};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: Option<String>) -> Check {
        Check {
            name: name.into(),
            passed,
            detail,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
    /// checks left out because a degree exceeds the work budget
    pub skipped: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Suite {
    checks: Vec<Check>,
    skipped: Vec<String>,
}

impl Suite {
    fn record(&mut self, name: &str, outcome: Result<Option<String>>) {
        let check = match outcome {
            Ok(None) => Check::new(name, true, None),
            Ok(Some(why)) => Check::new(name, false, Some(why)),
            Err(e) => Check::new(name, false, Some(e.to_string())),
        };
        self.checks.push(check);
    }
}

fn fits(order: usize, n: usize) -> bool {
    check_budget(order, n).is_ok()
}

fn random_cochain(g: &Arc<Group>, f: Fp, n: usize, rng: &mut ChaCha8Rng) -> Cochain {
    let len = TupleIndexer::new(g).count(n);
    let values = (0..len).map(|_| rng.gen_range(0..f.p())).collect();
    Cochain::from_values(g, f, n, values).expect("length matches")
}

fn is_coboundary(c: &Cochain) -> Result<bool> {
    if c.degree() == 0 {
        return Ok(c.is_zero());
    }
    let s = cohomology_space(c.group(), c.field(), c.degree())?;
    Ok(s.coordinates(c)?.iter().all(|&v| v == 0))
}

fn fail_if(bad: bool, why: impl FnOnce() -> String) -> Option<String> {
    bad.then(why)
}

/// Run every invariant that applies to `group` over F_p up to degree `max_degree`.
pub fn run_suite(group: &Arc<Group>, f: Fp, max_degree: usize, seed: u64) -> Result<SuiteReport> {
    let mut s = Suite {
        checks: Vec::new(),
        skipped: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = group.order();
    let p = f.p();
    let pgroup = group.prime_power() == Some(p);
    let central: Vec<usize> = group
        .elements()
        .filter(|&a| a != group.identity() && group.is_central(a))
        .collect();
    let top = (1..=max_degree).take_while(|&n| fits(order, n)).last().unwrap_or(0);
    for n in top + 1..=max_degree {
        s.skipped.push(format!("degree {n}"));
    }

    // groups
    let classes = group.conjugacy_classes();
    s.record(
        "orbit-stabiliser",
        Ok(fail_if(
            classes
                .representatives
                .iter()
                .zip(classes.class_sizes())
                .any(|(&g, size)| size * group.centraliser(g).order() != order),
            || "class size times centraliser order differs from |G|".into(),
        )),
    );
    s.record("double-cosets-partition", {
        let cents: Vec<Subgroup> = classes.representatives.iter().map(|&g| group.centraliser(g)).collect();
        let mut bad = None;
        'outer: for a in &cents {
            for b in &cents {
                let mut seen = vec![0usize; order];
                for u in group.double_cosets(a, b)? {
                    let mut cell = vec![false; order];
                    for &x in a.elements() {
                        for &y in b.elements() {
                            cell[group.mul(group.mul(x, u), y)] = true;
                        }
                    }
                    for (i, c) in cell.into_iter().enumerate() {
                        seen[i] += c as usize;
                    }
                }
                if seen.iter().any(|&c| c != 1) {
                    bad = Some("double cosets overlap or miss elements".to_string());
                    break 'outer;
                }
            }
        }
        Ok(bad)
    });

    // cochains
    s.record("coboundary-squared", {
        let mut bad = None;
        for n in 0..top.min(3).saturating_sub(1) + 1 {
            if !fits(order, n + 1) {
                break;
            }
            let c = random_cochain(group, f, n, &mut rng);
            if !c.coboundary().coboundary().is_zero() {
                bad = Some(format!("d∘d nonzero in degree {n}"));
            }
        }
        Ok(bad)
    });
    s.record("homotopy-identity", {
        let mut bad = None;
        for &g in &central {
            for n in 1..=top.min(3) {
                let r = verify_homotopy_identity(group, g, n)?;
                if !r.passed {
                    bad = Some(format!("g = {}, degree {n}: {:?}", group.label(g), r.counterexample));
                }
            }
        }
        Ok(bad)
    });
    s.record("delta-additive", {
        let mut bad = None;
        for &g in &central {
            for &h in &central {
                for n in 1..=top {
                    let gh = delta_matrix(group, f, group.mul(g, h), n)?;
                    let sum = matrix_add(f, &delta_matrix(group, f, g, n)?.matrix, &delta_matrix(group, f, h, n)?.matrix);
                    if gh.matrix != sum {
                        bad = Some(format!("{} and {} in degree {n}", group.label(g), group.label(h)));
                    }
                }
            }
        }
        Ok(bad)
    });

    // cohomology
    if pgroup {
        s.record("h1-rank", {
            let phi = group.frattini()?;
            let mut rank = 0;
            let mut q = order / phi.order();
            while q > 1 {
                q /= p as usize;
                rank += 1;
            }
            let d = h1_homs(group, f).dim();
            Ok(fail_if(d != rank, || format!("dim H^1 = {d}, rank of G/Φ = {rank}")))
        });
    }
    s.record("cup-graded-commutative", {
        let mut bad = None;
        for a in 1..=top {
            for b in 1..=top - a.min(top) {
                if a + b > top {
                    continue;
                }
                let sa = cohomology_space(group, f, a)?;
                let sb = cohomology_space(group, f, b)?;
                for i in 0..sa.dim() {
                    for j in 0..sb.dim() {
                        let x = sa.basis_class(i);
                        let y = sb.basis_class(j);
                        if x.cup(&y)? != y.cup(&x)?.scale(f.sign(a * b)) {
                            bad = Some(format!("degrees {a}, {b}: {} and {}", sa.labels()[i], sb.labels()[j]));
                        }
                    }
                }
            }
        }
        Ok(bad)
    });
    if let Some(h) = proper_subgroup(group) {
        s.record("transfer-restriction-index", {
            let idx = f.reduce(h.index() as i64);
            let mut bad = None;
            for n in 1..=top {
                let space = cohomology_space(group, f, n)?;
                for k in 0..space.dim() {
                    let x = space.representative(k);
                    let back = x.restrict(&h)?.transfer(&h)?;
                    if space.coordinates(&back)? != space.coordinates(&x.scale(idx))? {
                        bad = Some(format!("degree {n}, class {}", space.labels()[k]));
                    }
                }
            }
            Ok(bad)
        });
        s.record("transfer-delta", {
            let mut bad = None;
            for &g in central.iter().filter(|&&g| h.contains(g)) {
                let gl = h.to_local(g).unwrap();
                for n in 1..=top {
                    let space = cohomology_space(h.group(), f, n)?;
                    for k in 0..space.dim() {
                        let phi = space.representative(k);
                        let a = phi.delta_g(gl)?.transfer(&h)?;
                        let b = phi.transfer(&h)?.delta_g(g)?;
                        if !is_coboundary(&a.sub(&b)?)? {
                            bad = Some(format!("g = {}, degree {n}", group.label(g)));
                        }
                    }
                }
            }
            Ok(bad)
        });
    }
    if let Some(z) = central.iter().copied().find(|&z| group.element_order(z) == p as usize) {
        let n_sub = Subgroup::generated(group, &[z]);
        let (q, pi) = quotient(group, &n_sub)?;
        s.record("naturality", {
            let mut bad = None;
            for &g in &central {
                let gq = pi.apply(g);
                for n in 1..=top {
                    let space = cohomology_space(&q, f, n)?;
                    for k in 0..space.dim() {
                        let phi = space.representative(k);
                        let a = phi.delta_g(gq)?.pullback_hom(&pi)?;
                        let b = phi.pullback_hom(&pi)?.delta_g(g)?;
                        if !is_coboundary(&a.sub(&b)?)? {
                            bad = Some(format!("g = {}, degree {n}", group.label(g)));
                        }
                    }
                }
            }
            Ok(bad)
        });
    }

    // delta
    s.record("delta-degree-one", {
        let mut bad = None;
        let h1 = h1_homs(group, f);
        for &g in &central {
            let m = delta_matrix(group, f, g, 1)?;
            let row: Vec<u32> = (0..h1.dim()).map(|k| h1.hom_values(k)[g]).collect();
            if m.matrix != vec![row] {
                bad = Some(format!("g = {}", group.label(g)));
            }
        }
        Ok(bad)
    });
    s.record("delta-squared", {
        let mut bad = None;
        for &g in &central {
            for n in 2..=top {
                let hi = delta_matrix(group, f, g, n)?;
                let lo = delta_matrix(group, f, g, n - 1)?;
                let prod = matrix_mul(f, &lo.matrix, &hi.matrix, hi.source_basis.len());
                if prod.iter().flatten().any(|&v| v != 0) {
                    bad = Some(format!("g = {}, degree {n}", group.label(g)));
                }
            }
        }
        Ok(bad)
    });
    s.record("delta-anticommute", {
        let mut bad = None;
        for &g in &central {
            for &h in &central {
                for n in 2..=top {
                    let space = cohomology_space(group, f, n)?;
                    for k in 0..space.dim() {
                        let phi = space.representative(k);
                        let a = phi.delta_g(h)?.delta_g(g)?;
                        let b = phi.delta_g(g)?.delta_g(h)?;
                        if !is_coboundary(&a.add(&b)?)? {
                            bad = Some(format!("{} and {}, degree {n}", group.label(g), group.label(h)));
                        }
                    }
                }
            }
        }
        Ok(bad)
    });
    s.record("delta-derivation", {
        let mut bad = None;
        for &g in &central {
            for a in 1..top {
                for b in 1..=top - a {
                    let sa = cohomology_space(group, f, a)?;
                    let sb = cohomology_space(group, f, b)?;
                    for x in sa.representatives() {
                        for y in sb.representatives() {
                            let lhs = x.cup(&y)?.delta_g(g)?;
                            let rhs = x
                                .delta_g(g)?
                                .cup(&y)?
                                .add(&x.cup(&y.delta_g(g)?)?.scale(f.sign(a)))?;
                            if !is_coboundary(&lhs.sub(&rhs)?)? {
                                bad = Some(format!("g = {}, degrees {a}, {b}", group.label(g)));
                            }
                        }
                    }
                }
            }
        }
        Ok(bad)
    });
    if pgroup {
        let phi = group.frattini()?;
        s.record("frattini-delta-h1", {
            let mut bad = None;
            for &g in central.iter().filter(|&&g| phi.contains(g)) {
                if !delta_matrix(group, f, g, 1)?.is_zero() {
                    bad = Some(format!("g = {}", group.label(g)));
                }
            }
            Ok(bad)
        });
    }
    if top >= 2 {
        s.record("bockstein-commutes", {
            let mut bad = None;
            for &g in &central {
                for n in 1..top {
                    let b_lo = bockstein_matrix(group, f, n - 1)?;
                    let b_hi = bockstein_matrix(group, f, n)?;
                    let d_n = delta_matrix(group, f, g, n)?;
                    let d_up = delta_matrix(group, f, g, n + 1)?;
                    let lhs = matrix_mul(f, &b_lo, &d_n.matrix, d_n.source_basis.len());
                    let rhs = matrix_mul(f, &d_up.matrix, &b_hi, d_n.source_basis.len());
                    if lhs != rhs {
                        bad = Some(format!("g = {}, degree {n}", group.label(g)));
                    }
                }
            }
            Ok(bad)
        });
    }

    // Hochschild
    let ctx = HHContext::new(group, f);
    let hh1 = HHSpace::over(&ctx, 1)?;
    let basis = hh1.basis();
    s.record("bracket-bv-identity", {
        let mut bad = None;
        let pairs: Vec<(usize, usize)> = if basis.len() <= 24 {
            (0..basis.len()).flat_map(|i| (0..basis.len()).map(move |j| (i, j))).collect()
        } else {
            (0..64).map(|_| (rng.gen_range(0..basis.len()), rng.gen_range(0..basis.len()))).collect()
        };
        for (i, j) in pairs {
            let bv = gerstenhaber_bracket(&basis[i], &basis[j])?;
            if !bv.same_class(&bracket_direct(&basis[i], &basis[j])?)? {
                bad = Some(format!("basis pair ({i}, {j})"));
            }
        }
        Ok(bad)
    });
    if (2..=top).contains(&2) && ctx_fits(&ctx, 2) {
        s.record("hh-delta-squared", {
            let mut bad = None;
            for x in HHSpace::over(&ctx, 2)?.basis() {
                if !hh_bv_delta(&hh_bv_delta(&x)?)?.is_zero_class()? {
                    bad = Some("Δ∘Δ nonzero on HH^2".to_string());
                }
            }
            Ok(bad)
        });
    }

    // Lie algebra
    let lie = build_hh1_lie(group, f)?;
    s.record("lie-axioms", {
        let r = verify_lie_axioms(lie.algebra());
        Ok(r.violation.map(|v| format!("{} on {:?}", v.axiom, v.indices)))
    });
    if pgroup && order > 1 {
        s.record("lie-zphi-vanishes", Ok(fail_if(!center_frattini_bracket_vanishes(&lie)?, || {
            "nonzero bracket on k(Z∩Φ)⊗H^1".into()
        })));
        s.record("lie-center-closed", Ok(fail_if(!center_subalgebra_closed(&lie)?, || {
            "kZ⊗H^1 not closed".into()
        })));
        s.record("lie-not-nilpotent", {
            let w = non_nilpotency_witness(&lie)?;
            let nil = derived_series_analysis(lie.algebra())?.nilpotent;
            Ok(fail_if(nil || !w.map(|w| w.holds).unwrap_or(false), || "no witness [x,y] = y".into()))
        });
        s.record("lie-nonsoluble-witness", {
            let w = construct_nonsoluble_witness(&lie)?;
            let soluble = derived_series_analysis(lie.algebra())?.soluble;
            Ok(match w {
                NonSolubleWitness::HypothesisNotMet { .. } => None,
                w => fail_if(!w.verified() || soluble, || "witness relations fail".into()),
            })
        });
    }
    Ok(SuiteReport {
        checks: s.checks,
        skipped: s.skipped,
    })
}

fn ctx_fits(ctx: &HHContext, n: usize) -> bool {
    (0..ctx.len()).all(|c| fits(ctx.centraliser(c).order(), n))
}

/// A proper subgroup for transfer checks: the Frattini subgroup with all but the last generator, or a centraliser.
fn proper_subgroup(group: &Arc<Group>) -> Option<Subgroup> {
    if group.order() == 1 {
        return None;
    }
    let mut gens: Vec<usize> = group.frattini().map(|p| p.elements().to_vec()).unwrap_or_default();
    let g = group.generators();
    if g.len() > 1 {
        gens.extend_from_slice(&g[..g.len() - 1]);
    }
    let h = Subgroup::generated(group, &gens);
    if !h.is_whole() {
        return Some(h);
    }
    group
        .elements()
        .map(|a| group.centraliser(a))
        .find(|c| !c.is_whole())
}
