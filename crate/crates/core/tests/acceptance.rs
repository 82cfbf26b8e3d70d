//! Acceptance criteria 1 to 10, one pass/fail line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use bvh_core::cochain::{verify_homotopy_identity, Cochain, ExtensionCocycle, TupleIndexer};
use bvh_core::cohomology::{
    cohomology_space, identify_named_classes, set_work_budget, CohomologyClass, HEAVY_WORK_BUDGET,
};
use bvh_core::delta::{bockstein_matrix, delta_class, delta_from_extension, delta_matrix, kunneth_delta_check};
use bvh_core::group::{catalog_groups, direct_product, parse_group_spec, GroupHom, Subgroup};
use bvh_core::hochschild::{bracket_direct, gerstenhaber_bracket, HHSpace};
use bvh_core::lie::{
    build_hh1_lie, center_frattini_bracket_vanishes, construct_nonsoluble_witness, derived_series_analysis,
    non_nilpotency_witness, verify_lie_axioms, NonSolubleWitness,
};
use bvh_core::{Fp, Group};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn grp(s: &str) -> Arc<Group> {
    Arc::new(parse_group_spec(s).unwrap())
}

fn fp(p: u32) -> Fp {
    Fp::new(p).unwrap()
}

fn native(g: &Group) -> Fp {
    fp(g.prime_power().unwrap())
}

fn central(g: &Group) -> Vec<usize> {
    g.elements().filter(|&a| g.is_central(a)).collect()
}

fn small_catalog() -> Vec<Arc<Group>> {
    catalog_groups().into_iter().map(grp).filter(|g| g.order() <= 16).collect()
}

fn within(t: Instant, limit: Duration, what: &str) -> Outcome {
    let e = t.elapsed();
    ensure!(e < limit, "{what} took {e:?}, limit {limit:?}");
    Ok(())
}

fn homotopy_identity() -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    for g in small_catalog() {
        for z in central(&g) {
            for n in 1..=3 {
                let r = verify_homotopy_identity(&g, z, n).map_err(|e| e.to_string())?;
                ensure!(r.passed, "{} z={} n={n}: {:?}", g.name(), g.label(z), r.counterexample);
                checked += r.checked;
            }
        }
    }
    ensure!(checked > 0, "nothing checked");
    within(t, Duration::from_secs(60), "homotopy identity")
}

fn degree_one_evaluation() -> Outcome {
    let mut primes = Vec::new();
    for spec in catalog_groups() {
        let g = grp(spec);
        let f = native(&g);
        primes.push(f.p());
        let s1 = cohomology_space(&g, f, 1).map_err(|e| e.to_string())?;
        for z in central(&g) {
            let m = delta_matrix(&g, f, z, 1).map_err(|e| e.to_string())?;
            let expected: Vec<u32> = (0..s1.dim())
                .map(|k| if z == g.identity() { 0 } else { s1.representative(k).eval(&[z]) })
                .collect();
            ensure!(m.matrix == vec![expected.clone()], "{spec} z={}: {:?} vs {expected:?}", g.label(z), m.matrix);
        }
    }
    ensure!(primes.contains(&2) && primes.contains(&3), "both primes covered");
    Ok(())
}

fn named(g: &Arc<Group>, f: Fp, name: &str) -> CohomologyClass {
    identify_named_classes(g, f)
        .unwrap()
        .into_iter()
        .find(|(n, _)| n == name)
        .unwrap()
        .1
}

fn cyclic_groups() -> Outcome {
    for (spec, p) in [("cyclic:4", 2), ("cyclic:8", 2), ("cyclic:9", 3)] {
        let g = grp(spec);
        let f = fp(p);
        let x = named(&g, f, "x");
        let y = named(&g, f, "y");
        let yv = y.representative();
        let xy = x.cup(&y).unwrap();
        let unit = cohomology_space(&g, f, 0).unwrap().basis_class(0);
        for a in g.elements() {
            let ya = if a == g.identity() { 0 } else { yv.eval(&[a]) };
            // x^0 y = y and x^1 y = xy; x^0 = 1 has nothing below it, x^1 = x
            ensure!(delta_class(a, &x).unwrap().is_zero(), "{spec}: Δ(x) at {}", g.label(a));
            ensure!(delta_class(a, &y).unwrap() == unit.scale(ya), "{spec}: Δ(y) at {}", g.label(a));
            ensure!(delta_class(a, &xy).unwrap() == x.scale(ya), "{spec}: Δ(xy) at {}", g.label(a));
        }
    }
    Ok(())
}

fn series_coefficients(num: &[u32], period: usize, terms: usize) -> Vec<usize> {
    // num / (1 - t^period)
    (0..terms)
        .map(|n| (0..=n).filter(|k| (n - k) % period == 0).map(|k| *num.get(k).unwrap_or(&0) as usize).sum())
        .collect()
}

fn quaternion() -> Outcome {
    let t = Instant::now();
    let q8 = grp("quaternion:8");
    let f = fp(2);
    let dims: Vec<usize> = (0..=4).map(|n| cohomology_space(&q8, f, n).unwrap().dim()).collect();
    ensure!(dims == vec![1, 2, 2, 1, 1], "dims {dims:?}");
    ensure!(dims == series_coefficients(&[1, 2, 2, 1], 4, 5), "Poincaré series");
    let gamma = q8.element("gamma").unwrap();
    for n in 1..=4 {
        ensure!(delta_matrix(&q8, f, gamma, n).unwrap().is_zero(), "Δ_γ nonzero in degree {n}");
    }
    within(t, Duration::from_secs(120), "quaternion")
}

/// The hom to F_2 sending every generator to 1, by walking words from the identity.
fn parity_hom(g: &Arc<Group>, gens: &[usize]) -> Vec<u32> {
    let mut val = vec![u32::MAX; g.order()];
    val[g.identity()] = 0;
    let mut stack = vec![g.identity()];
    while let Some(a) = stack.pop() {
        for &s in gens {
            let b = g.mul(a, s);
            if val[b] == u32::MAX {
                val[b] = 1 - val[a];
                stack.push(b);
            }
        }
    }
    val
}

fn dihedral() -> Outcome {
    let d8 = grp("dihedral:8");
    let f = fp(2);
    let gamma = d8.element("gamma").unwrap();
    let (g, h) = (d8.element("g").unwrap(), d8.element("h").unwrap());
    ensure!(delta_matrix(&d8, f, gamma, 1).unwrap().is_zero(), "Δ_γ on H^1");
    let m = delta_matrix(&d8, f, gamma, 2).unwrap();
    ensure!(m.rank == 1, "rank {}", m.rank);
    let target = Cochain::from_element_values(&d8, f, &parity_hom(&d8, &[g, h]));
    let s1 = cohomology_space(&d8, f, 1).unwrap();
    ensure!(m.image(f) == vec![s1.coordinates(&target).unwrap()], "image {:?}", m.image(f));
    let x = named(&d8, f, "x");
    let y = named(&d8, f, "y");
    let z = named(&d8, f, "z");
    let lhs = delta_class(gamma, &x.cup(&z).unwrap()).unwrap();
    ensure!(lhs == x.cup(&x.add(&y).unwrap()).unwrap(), "Δ_γ(xz)");
    Ok(())
}

fn semidihedral() -> Outcome {
    let t = Instant::now();
    let sd = grp("semidihedral:16");
    let f = fp(2);
    let dims: Vec<usize> = (0..=3).map(|n| cohomology_space(&sd, f, n).unwrap().dim()).collect();
    ensure!(dims == vec![1, 2, 2, 2], "dims {dims:?}");
    let s1 = cohomology_space(&sd, f, 1).unwrap();
    let nonzero: Vec<CohomologyClass> =
        [[1, 0], [0, 1], [1, 1]].iter().map(|c| s1.class_from_coords(c.to_vec()).unwrap()).collect();
    let cube = |a: &CohomologyClass| a.cup(a).unwrap().cup(a).unwrap();
    let xs: Vec<&CohomologyClass> = nonzero.iter().filter(|a| cube(a).is_zero()).collect();
    ensure!(xs.len() == 1, "{} classes cube to zero", xs.len());
    let x = xs[0];
    let ys: Vec<&CohomologyClass> = nonzero.iter().filter(|b| *b != x && x.cup(b).unwrap().is_zero()).collect();
    ensure!(ys.len() == 1, "{} candidates for y", ys.len());
    let y = ys[0];
    let gamma = sd.element("gamma").unwrap();
    ensure!(delta_matrix(&sd, f, gamma, 2).unwrap().is_zero(), "Δ_γ on H^2");
    let m3 = delta_matrix(&sd, f, gamma, 3).unwrap();
    ensure!(m3.rank == 1, "rank on H^3 is {}", m3.rank);
    let y2 = y.cup(y).unwrap();
    ensure!(m3.image(f) == vec![y2.coordinates().to_vec()], "image on H^3");
    within(t, Duration::from_secs(600), "semidihedral")?;

    // stretch goal under the heavy budget
    let t = Instant::now();
    set_work_budget(Some(HEAVY_WORK_BUDGET));
    let s4 = cohomology_space(&sd, f, 4).map_err(|e| e.to_string())?;
    ensure!(s4.dim() == 3, "dim H^4 = {}", s4.dim());
    let m4 = delta_matrix(&sd, f, gamma, 4).unwrap();
    ensure!(m4.rank == 1, "rank on H^4 is {}", m4.rank);
    let s3 = cohomology_space(&sd, f, 3).unwrap();
    let y3 = y2.cup(y).unwrap();
    let z = (0..s3.dim())
        .map(|k| s3.basis_class(k))
        .find(|c| !c.is_zero() && c != &y3)
        .unwrap();
    let span = [y3.cup(y).unwrap(), y.cup(&z).unwrap()];
    // the kernel of Δ_γ has a vector outside span{y^4, yz}
    let kernel: Vec<Vec<u32>> = (1u32..8)
        .map(|c| vec![c & 1, (c >> 1) & 1, c >> 2])
        .filter(|v| (0..m4.matrix.len()).all(|i| (0..3).map(|j| m4.matrix[i][j] * v[j]).sum::<u32>() % 2 == 0))
        .collect();
    let in_span = |v: &[u32]| {
        (0..4u32).any(|c| {
            let w: Vec<u32> = (0..3)
                .map(|j| ((c & 1) * span[0].coordinates()[j] + (c >> 1) * span[1].coordinates()[j]) % 2)
                .collect();
            w == v
        })
    };
    ensure!(kernel.iter().any(|w| !in_span(w)), "no w outside span{{y^4, yz}} in the kernel");
    within(t, Duration::from_secs(3600), "semidihedral degree 4")
}

fn operator_algebra() -> Outcome {
    // Δ² = 0 and additivity on the small catalog
    for g in small_catalog() {
        let f = native(&g);
        let zs = central(&g);
        for n in 1..=3 {
            for &a in &zs {
                let hi = delta_matrix(&g, f, a, n).unwrap();
                if n >= 2 {
                    let lo = delta_matrix(&g, f, a, n - 1).unwrap();
                    let sq = bvh_core::delta::matrix_mul(f, &lo.matrix, &hi.matrix, hi.source_basis.len());
                    ensure!(sq.iter().flatten().all(|&v| v == 0), "{} Δ² at {}", g.name(), g.label(a));
                }
                for &b in &zs {
                    let sum = bvh_core::delta::matrix_add(f, &hi.matrix, &delta_matrix(&g, f, b, n).unwrap().matrix);
                    let ab = delta_matrix(&g, f, g.mul(a, b), n).unwrap();
                    ensure!(ab.matrix == sum, "{} additivity {} {}", g.name(), g.label(a), g.label(b));
                }
            }
        }
    }
    // Künneth
    for (l, r) in [("cyclic:2", "cyclic:2"), ("cyclic:2", "cyclic:4")] {
        let prod = direct_product(&grp(l), &grp(r), 64).unwrap();
        let f = fp(2);
        for m in 0..=3 {
            for n in 0..=3 - m {
                let sl = cohomology_space(&prod.left, f, m).unwrap();
                let sr = cohomology_space(&prod.right, f, n).unwrap();
                for i in 0..sl.dim() {
                    for j in 0..sr.dim() {
                        for a in prod.left.elements() {
                            for b in prod.right.elements() {
                                let rep = kunneth_delta_check(&prod, a, b, &sl.basis_class(i), &sr.basis_class(j))
                                    .map_err(|e| e.to_string())?;
                                ensure!(rep.passed, "Künneth {l}×{r} degrees ({m},{n})");
                            }
                        }
                    }
                }
            }
        }
    }
    // transfer and restriction
    for (spec, gens) in [("cyclic:4", vec!["g^2"]), ("dihedral:8", vec!["gh"])] {
        let g = grp(spec);
        let f = fp(2);
        let elems: Vec<usize> = gens.iter().map(|w| g.element(w).unwrap()).collect();
        let h = Subgroup::generated(&g, &elems);
        ensure!(!h.is_whole() && h.order() > 1, "{spec} subgroup");
        for z in central(&g).into_iter().filter(|&z| h.contains(z)) {
            let zl = h.to_local(z).unwrap();
            for n in 1..=3 {
                let sh = cohomology_space(h.group(), f, n).unwrap();
                let sg = cohomology_space(&g, f, n - 1).unwrap();
                for k in 0..sh.dim() {
                    let phi = sh.representative(k);
                    let a = phi.delta_g(zl).unwrap().transfer(&h).unwrap();
                    let b = phi.transfer(&h).unwrap().delta_g(z).unwrap();
                    ensure!(
                        sg.coordinates(&a).unwrap() == sg.coordinates(&b).unwrap(),
                        "{spec} transfer at {} degree {n}",
                        g.label(z)
                    );
                }
                let sgn = cohomology_space(&g, f, n).unwrap();
                let shl = cohomology_space(h.group(), f, n - 1).unwrap();
                for k in 0..sgn.dim() {
                    let psi = sgn.representative(k);
                    let a = psi.delta_g(z).unwrap().restrict(&h).unwrap();
                    let b = psi.restrict(&h).unwrap().delta_g(zl).unwrap();
                    ensure!(
                        shl.coordinates(&a).unwrap() == shl.coordinates(&b).unwrap(),
                        "{spec} restriction at {} degree {n}",
                        g.label(z)
                    );
                }
            }
        }
    }
    // Bockstein
    for spec in ["cyclic:2", "cyclic:4"] {
        let g = grp(spec);
        let f = fp(2);
        for a in g.elements() {
            for n in 1..=3 {
                let d_n = delta_matrix(&g, f, a, n).unwrap();
                let d_up = delta_matrix(&g, f, a, n + 1).unwrap();
                let cols = d_n.source_basis.len();
                let lhs = bvh_core::delta::matrix_mul(f, &bockstein_matrix(&g, f, n - 1).unwrap(), &d_n.matrix, cols);
                let rhs = bvh_core::delta::matrix_mul(f, &d_up.matrix, &bockstein_matrix(&g, f, n).unwrap(), cols);
                ensure!(lhs == rhs, "{spec} Bockstein at {} degree {n}", g.label(a));
            }
        }
    }
    Ok(())
}

fn extension_theorem() -> Outcome {
    let q16 = grp("quaternion:16");
    let d8 = grp("dihedral:8");
    let f = fp(2);
    let pi = GroupHom::from_generator_images(
        &q16,
        &d8,
        &[
            (q16.element("g").unwrap(), d8.element("g").unwrap()),
            (q16.element("h").unwrap(), d8.element("h").unwrap()),
        ],
    )
    .unwrap();
    let e = ExtensionCocycle::from_surjection(&pi, q16.element("gamma").unwrap(), f).unwrap();
    let gamma = d8.element("gamma").unwrap();
    let d = e.alpha().delta_g(gamma).unwrap();
    for h in d8.elements().filter(|&h| h != d8.identity()) {
        ensure!(d.eval(&[h]) == e.commutator(gamma, h).unwrap(), "Q16 at {}", d8.label(h));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for spec in ["elementary:2:2", "cyclic:4", "elementary:3:2"] {
        let g = grp(spec);
        let f = native(&g);
        let s2 = cohomology_space(&g, f, 2).unwrap();
        let len1 = TupleIndexer::new(&g).count(1);
        for _ in 0..50 {
            let coords: Vec<u32> = (0..s2.dim()).map(|_| rng.gen_range(0..f.p())).collect();
            let shift: Vec<u32> = (0..len1).map(|_| rng.gen_range(0..f.p())).collect();
            let alpha = s2
                .combine(&coords)
                .add(&Cochain::from_values(&g, f, 1, shift).unwrap().coboundary())
                .unwrap();
            let ext = ExtensionCocycle::from_cocycle(&alpha).unwrap();
            for z in central(&g) {
                let rep = delta_from_extension(&ext, z).unwrap();
                let a = |x: usize, y: usize| if x == g.identity() || y == g.identity() { 0 } else { alpha.eval(&[x, y]) };
                for h in g.elements() {
                    let oracle = f.sub(a(z, h), a(h, z));
                    ensure!(rep.commutators[h] == oracle, "{spec}: commutator at ({}, {})", g.label(z), g.label(h));
                }
                ensure!(rep.agrees, "{spec}: Δ_g(α) at {}", g.label(z));
            }
        }
    }
    Ok(())
}

fn lie_verdicts() -> Outcome {
    let t = Instant::now();
    let analyse = |spec: &str| {
        let g = grp(spec);
        let l = build_hh1_lie(&g, native(&g)).unwrap();
        let a = derived_series_analysis(l.algebra()).unwrap();
        (l, a)
    };
    let (c3, a) = analyse("cyclic:3");
    let w = construct_nonsoluble_witness(&c3).unwrap();
    ensure!(!a.soluble && matches!(w, NonSolubleWitness::Sl2(_)) && w.verified(), "C3 sl(2) witness");
    let (v4, a) = analyse("elementary:2:2");
    let w = construct_nonsoluble_witness(&v4).unwrap();
    ensure!(!a.soluble && matches!(w, NonSolubleWitness::Subspace(_)) && w.verified(), "C2×C2 Case (ii)");
    for (spec, length) in [
        ("quaternion:8", 2),
        ("extraspecial:3:27:expP", 2),
        ("dihedral:8", 3),
        ("modular:3", 3),
    ] {
        let (_, a) = analyse(spec);
        ensure!(a.soluble && a.derived_length == Some(length), "{spec}: {:?}", a.derived_series_dims);
    }
    for spec in ["extraspecial:2:32:plus", "extraspecial:2:32:minus"] {
        ensure!(analyse(spec).1.soluble, "{spec} soluble");
    }
    within(t, Duration::from_secs(120), "Lie verdicts")
}

fn bracket_consistency() -> Outcome {
    for g in small_catalog() {
        let f = native(&g);
        let l = build_hh1_lie(&g, f).unwrap();
        let basis = HHSpace::over(l.context(), 1).unwrap().basis();
        for x in &basis {
            for y in &basis {
                let bv = gerstenhaber_bracket(x, y).map_err(|e| format!("{}: {e}", g.name()))?;
                ensure!(bv.same_class(&bracket_direct(x, y).unwrap()).unwrap(), "{} BV vs direct", g.name());
            }
        }
        let ax = verify_lie_axioms(l.algebra());
        ensure!(ax.passed, "{}: {:?}", g.name(), ax.violation);
        ensure!(center_frattini_bracket_vanishes(&l).unwrap(), "{} Z∩Φ", g.name());
        if g.order() > 1 {
            let w = non_nilpotency_witness(&l).unwrap();
            ensure!(w.is_some_and(|w| w.holds), "{} non-nilpotency", g.name());
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("homotopy identity on the bar resolution", homotopy_identity),
        ("degree-one evaluation", degree_one_evaluation),
        ("cyclic groups", cyclic_groups),
        ("quaternion group of order 8", quaternion),
        ("dihedral group of order 8", dihedral),
        ("semidihedral group of order 16", semidihedral),
        ("operator algebra", operator_algebra),
        ("degree-two extension theorem", extension_theorem),
        ("HH^1 Lie verdicts", lie_verdicts),
        ("bracket consistency", bracket_consistency),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(()) => println!("criterion {}: PASS {name} ({:.1?})", i + 1, t.elapsed()),
            Err(why) => {
                println!("criterion {}: FAIL {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria {failed:?}");
}
