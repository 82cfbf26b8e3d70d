use std::sync::Arc;

use bvh_core::cochain::Cochain;
use bvh_core::cohomology::{cohomology_space, h1_homs, identify_named_classes};
use bvh_core::group::{catalog_groups, parse_group_spec};
use bvh_core::hochschild::{
    bracket_direct, check_hypothesis_cent, gerstenhaber_bracket, hh_bv_delta, sw_product, HHContext,
    HHElement, HHSpace,
};
use bvh_core::{Fp, Group};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grp(s: &str) -> Arc<Group> {
    Arc::new(parse_group_spec(s).unwrap())
}

fn ctx(s: &str, p: u32) -> Arc<HHContext> {
    HHContext::new(&grp(s), Fp::new(p).unwrap())
}

fn prime_of(g: &Group) -> u32 {
    g.prime_power().unwrap()
}

fn random_element(space: &HHSpace, rng: &mut ChaCha8Rng) -> HHElement {
    let p = space.context().field().p();
    let mut out = HHElement::zero(space.context(), space.degree());
    for b in space.basis() {
        out = out.add(&b.scale(rng.gen_range(0..p))).unwrap();
    }
    out
}

#[test]
fn dimensions_of_small_groups() {
    let d8 = ctx("dihedral:8", 2);
    assert_eq!(HHSpace::over(&d8, 0).unwrap().dim(), 5);
    let s = HHSpace::over(&d8, 1).unwrap();
    assert_eq!(s.dim(), 9);
    let summary = s.summary();
    let mut dims: Vec<usize> = summary.components.iter().map(|c| c.dim).collect();
    dims.sort_unstable();
    assert_eq!(dims, vec![1, 2, 2, 2, 2]);
    let q8 = ctx("quaternion:8", 2);
    let mut dims = HHSpace::over(&q8, 1).unwrap().dims();
    dims.sort_unstable();
    assert_eq!(dims, vec![1, 1, 1, 2, 2]);
}

#[test]
fn bracket_routes_agree_on_small_catalog_groups() {
    for spec in catalog_groups() {
        let g = grp(spec);
        if g.order() > 16 {
            continue;
        }
        let c = HHContext::new(&g, Fp::new(prime_of(&g)).unwrap());
        let basis = HHSpace::over(&c, 1).unwrap().basis();
        for x in &basis {
            for y in &basis {
                let bv = gerstenhaber_bracket(x, y).unwrap();
                let direct = bracket_direct(x, y).unwrap();
                assert!(bv.same_class(&direct).unwrap(), "{spec}");
            }
            assert!(gerstenhaber_bracket(x, x).unwrap().is_zero_class().unwrap(), "{spec}");
        }
    }
}

#[test]
fn both_central_formula_on_abelian_groups() {
    for spec in ["abelian:2,4", "cyclic:9", "elementary:3:2"] {
        let g = grp(spec);
        let c = HHContext::new(&g, Fp::new(prime_of(&g)).unwrap());
        let f = c.field();
        let space = HHSpace::over(&c, 1).unwrap();
        for a in 0..c.len() {
            for b in 0..c.len() {
                for i in 0..space.space(a).dim() {
                    for j in 0..space.space(b).dim() {
                        let x = space.basis_element(a, i);
                        let y = space.basis_element(b, j);
                        let (ga, gb) = (c.representative(a), c.representative(b));
                        let xv: Vec<u32> = (0..g.order()).map(|e| x.component(a).unwrap().eval(&[e])).collect();
                        let yv: Vec<u32> = (0..g.order()).map(|e| y.component(b).unwrap().eval(&[e])).collect();
                        // gh ⊗ (-x(h) y + y(g) x)
                        let want: Vec<u32> = (0..g.order())
                            .map(|e| f.add(f.neg(f.mul(xv[gb], yv[e])), f.mul(yv[ga], xv[e])))
                            .collect();
                        let want = HHElement::from_hom(&c, c.component_of(g.mul(ga, gb)), &want).unwrap();
                        assert!(bracket_direct(&x, &y).unwrap().same_class(&want).unwrap(), "{spec}");
                    }
                }
            }
        }
    }
}

#[test]
fn central_element_formula_with_noncentral_partner() {
    // g central: [x,y] = -x(h) y + y(g) Res x at the component of gh
    for spec in ["dihedral:8", "quaternion:8", "modular:3", "dihedral:16"] {
        let g = grp(spec);
        let c = HHContext::new(&g, Fp::new(prime_of(&g)).unwrap());
        let f = c.field();
        let space = HHSpace::over(&c, 1).unwrap();
        for a in (0..c.len()).filter(|&a| g.is_central(c.representative(a))) {
            for b in 0..c.len() {
                let (ga, gb) = (c.representative(a), c.representative(b));
                let k = g.mul(ga, gb);
                let target = c.component_of(k);
                if c.representative(target) != k {
                    continue;
                }
                for i in 0..space.space(a).dim() {
                    for j in 0..space.space(b).dim() {
                        let x = space.basis_element(a, i);
                        let y = space.basis_element(b, j);
                        let xv: Vec<u32> = (0..g.order()).map(|e| x.component(a).unwrap().eval(&[e])).collect();
                        let cb = c.centraliser(b);
                        let yv = |e: usize| cb.to_local(e).map(|l| y.component(b).unwrap().eval(&[l])).unwrap_or(0);
                        let ck = c.centraliser(target);
                        let want: Vec<u32> = (0..g.order())
                            .map(|e| {
                                if !ck.contains(e) {
                                    return 0;
                                }
                                f.add(f.neg(f.mul(xv[gb], yv(e))), f.mul(yv(ga), xv[e]))
                            })
                            .collect();
                        let want = HHElement::from_hom(&c, target, &want).unwrap();
                        assert!(bracket_direct(&x, &y).unwrap().same_class(&want).unwrap(), "{spec}");
                    }
                }
            }
        }
    }
}

#[test]
fn center_frattini_components() {
    // z ∈ Z(G)∩Φ(G): [x,y] = -x(h) y + y(z) Res x, and -x(h) y whenever y(z) = 0
    for spec in ["dihedral:8", "quaternion:8", "extraspecial:3:27:expP", "semidihedral:16"] {
        let g = grp(spec);
        let c = HHContext::new(&g, Fp::new(prime_of(&g)).unwrap());
        let f = c.field();
        let phi = g.frattini().unwrap();
        let space = HHSpace::over(&c, 1).unwrap();
        for a in (0..c.len()).filter(|&a| {
            let z = c.representative(a);
            g.is_central(z) && phi.contains(z)
        }) {
            for b in 0..c.len() {
                let (za, hb) = (c.representative(a), c.representative(b));
                let zh = g.mul(za, hb);
                let target = c.component_of(zh);
                let w = c.conjugator(zh);
                let cb = c.centraliser(b);
                let ct = c.centraliser(target);
                for i in 0..space.space(a).dim() {
                    for j in 0..space.space(b).dim() {
                        let x = space.basis_element(a, i);
                        let y = space.basis_element(b, j);
                        let xc = x.component(a).unwrap();
                        let yc = y.component(b).unwrap();
                        let xh = xc.eval(&[hb]);
                        let yz = yc.eval(&[cb.to_local(za).unwrap()]);
                        // y moved from C(h) onto C(zh) = C(h) conjugated to the representative
                        let (_, moved) = yc.conjugate(cb, w).unwrap();
                        let moved = Cochain::from_values(ct.group(), f, 1, moved.into_values()).unwrap();
                        let res_x: Vec<u32> = ct.elements().iter().map(|&e| xc.eval(&[e])).collect();
                        let res_x = Cochain::from_element_values(ct.group(), f, &res_x);
                        let want = moved.scale(f.neg(xh)).add(&res_x.scale(yz)).unwrap();
                        let want = HHElement::from_component(&c, target, want).unwrap();
                        let br = bracket_direct(&x, &y).unwrap();
                        assert!(br.same_class(&want).unwrap(), "{spec}");
                        if yz == 0 || g.is_central(hb) {
                            let short = HHElement::from_component(&c, target, moved.scale(f.neg(xh))).unwrap();
                            assert!(br.same_class(&short).unwrap(), "{spec}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn evaluation_term_survives_for_noncentral_partner() {
    // D8 with z = gamma and h a reflection: y(z) can be nonzero on C(h), so [x,y] != -x(h) y
    let c = ctx("dihedral:8", 2);
    let g = c.group().clone();
    let f = c.field();
    let gamma = g.element("gamma").unwrap();
    let s = g.element("g").unwrap();
    let cs = c.component(s).unwrap();
    let cz = c.component(gamma).unwrap();
    let cent = c.centraliser(cs);
    // x: the hom on D8 with x(g) = 1, x(h) = 0; y: a hom on C(g) with y(gamma) = 1, y(g) = 0
    let h = g.element("h").unwrap();
    let h1 = h1_homs(&g, f);
    let x_vals = (0..h1.dim())
        .map(|k| h1.hom_values(k).to_vec())
        .find(|v| v[s] == 1 && v[h] == 0)
        .unwrap();
    let y_vals: Vec<u32> = {
        let h1 = h1_homs(cent.group(), f);
        let gl = cent.to_local(gamma).unwrap();
        let sl = cent.to_local(s).unwrap();
        let codes = (0..4u32).map(|code| h1.combine(&[code & 1, code >> 1]));
        let local = codes.into_iter().find(|v| v[gl] == 1 && v[sl] == 0).unwrap();
        let mut vals = vec![0; g.order()];
        for (i, &e) in cent.elements().iter().enumerate() {
            vals[e] = local[i];
        }
        vals
    };
    let x = HHElement::from_hom(&c, cz, &x_vals).unwrap();
    let y = HHElement::from_hom(&c, cs, &y_vals).unwrap();
    let br = gerstenhaber_bracket(&x, &y).unwrap();
    let target = c.component_of(g.mul(gamma, s));
    let w = c.conjugator(g.mul(gamma, s));
    let moved: Vec<u32> = (0..g.order()).map(|e| y_vals[g.conj(g.inv(w), e)]).collect();
    let short = HHElement::from_hom(&c, target, &moved).unwrap().scale(f.neg(x_vals[s]));
    assert!(!br.same_class(&short).unwrap());
    let res_x = HHElement::from_hom(&c, target, &x_vals).unwrap();
    assert!(br.same_class(&short.add(&res_x).unwrap()).unwrap());
}

#[test]
fn unit_and_abelian_products() {
    let c = ctx("cyclic:4", 2);
    let g = c.group().clone();
    let one = HHElement::one(&c);
    let s1 = HHSpace::over(&c, 1).unwrap();
    for x in s1.basis() {
        assert!(sw_product(&one, &x).unwrap().same_class(&x).unwrap());
    }
    // abelian: the product of g⊗x and h⊗y is gh ⊗ (x ⌣ y)
    for a in 0..c.len() {
        for b in 0..c.len() {
            let x = s1.basis_element(a, 0);
            let y = s1.basis_element(b, 0);
            let prod = sw_product(&x, &y).unwrap();
            let cup = x.component(a).unwrap().cup(y.component(b).unwrap()).unwrap();
            let target = c.component_of(g.mul(c.representative(a), c.representative(b)));
            let want = HHElement::from_component(&c, target, cup).unwrap();
            assert!(prod.same_class(&want).unwrap());
        }
    }
}

#[test]
fn dihedral_products_commute_and_associate() {
    let c = ctx("dihedral:8", 2);
    let spaces: Vec<HHSpace> = (0..=2).map(|n| HHSpace::over(&c, n).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let m = rng.gen_range(0..=2);
        let n = rng.gen_range(0..=2 - m);
        let k = 2 - m - n;
        let x = random_element(&spaces[m], &mut rng);
        let y = random_element(&spaces[n], &mut rng);
        let z = random_element(&spaces[k], &mut rng);
        let xy = sw_product(&x, &y).unwrap();
        assert!(xy.same_class(&sw_product(&y, &x).unwrap()).unwrap());
        let l = sw_product(&xy, &z).unwrap();
        let r = sw_product(&x, &sw_product(&y, &z).unwrap()).unwrap();
        assert!(l.same_class(&r).unwrap());
    }
}

#[test]
fn odd_products_are_graded_commutative() {
    let c = ctx("cyclic:3", 3);
    let s1 = HHSpace::over(&c, 1).unwrap().basis();
    for x in &s1 {
        for y in &s1 {
            let xy = sw_product(x, y).unwrap();
            let yx = sw_product(y, x).unwrap();
            assert!(xy.add(&yx).unwrap().is_zero_class().unwrap());
        }
    }
}

#[test]
fn delta_squares_to_zero() {
    for spec in catalog_groups() {
        let g = grp(spec);
        if g.order() > 8 {
            continue;
        }
        let c = HHContext::new(&g, Fp::new(prime_of(&g)).unwrap());
        for n in 2..=3 {
            for x in HHSpace::over(&c, n).unwrap().basis() {
                let dd = hh_bv_delta(&hh_bv_delta(&x).unwrap()).unwrap();
                assert!(dd.is_zero_class().unwrap(), "{spec} degree {n}");
            }
        }
    }
}

#[test]
fn component_deltas() {
    let c = ctx("dihedral:8", 2);
    let g = c.group().clone();
    let f = c.field();
    let named = identify_named_classes(&g, f).unwrap();
    let class = |n: &str| named.iter().find(|(s, _)| s == n).unwrap().1.clone();
    let gamma = g.element("gamma").unwrap();
    let cg = c.component(gamma).unwrap();
    let z = HHElement::from_component(&c, cg, class("z").representative()).unwrap();
    let d = hh_bv_delta(&z).unwrap();
    let want = class("x").add(&class("y")).unwrap();
    let want = HHElement::from_component(&c, cg, want.representative()).unwrap();
    assert!(d.same_class(&want).unwrap());
    // identity component
    let e = c.component(g.identity()).unwrap();
    assert!(hh_bv_delta(&HHElement::from_component(&c, e, class("z").representative()).unwrap())
        .unwrap()
        .is_zero_class()
        .unwrap());

    // a non-central element of Q8 evaluates its own hom
    let q = ctx("quaternion:8", 2);
    let qg = q.group().clone();
    let i = (0..q.len()).find(|&a| q.centraliser(a).order() == 4).unwrap();
    let x = HHSpace::over(&q, 1).unwrap().basis_element(i, 0);
    let d = hh_bv_delta(&x).unwrap();
    let value = d.component(i).map(|c| c.values()[0]).unwrap_or(0);
    assert_eq!(value, 1);
    assert!(!qg.is_central(q.representative(i)));
}

#[test]
fn leibniz_on_degree_one_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (spec, p) in [("dihedral:8", 2), ("quaternion:8", 2), ("elementary:2:2", 2), ("cyclic:3", 3)] {
        let c = ctx(spec, p);
        let s1 = HHSpace::over(&c, 1).unwrap();
        for _ in 0..12 {
            let x = random_element(&s1, &mut rng);
            let y = random_element(&s1, &mut rng);
            let z = random_element(&s1, &mut rng);
            // [x, yz] = [x,y]z + y[x,z] for |x| = 1
            let lhs = gerstenhaber_bracket(&x, &sw_product(&y, &z).unwrap()).unwrap();
            let r1 = sw_product(&gerstenhaber_bracket(&x, &y).unwrap(), &z).unwrap();
            let r2 = sw_product(&y, &gerstenhaber_bracket(&x, &z).unwrap()).unwrap();
            assert!(lhs.same_class(&r1.add(&r2).unwrap()).unwrap(), "{spec}");
        }
    }
}

#[test]
fn centraliser_hypothesis_reports() {
    let c = ctx("abelian:2,4", 2);
    let g = c.group().clone();
    for a in g.elements() {
        for b in g.elements() {
            assert!(check_hypothesis_cent(&c, a, b).unwrap().iter().all(|r| r.clause_i));
        }
    }
    let e = ctx("extraspecial:3:27:expP", 3);
    let eg = e.group().clone();
    let (a, b) = eg
        .elements()
        .flat_map(|a| eg.elements().map(move |b| (a, b)))
        .find(|&(a, b)| eg.mul(a, b) != eg.mul(b, a))
        .unwrap();
    let reports = check_hypothesis_cent(&e, a, b).unwrap();
    assert!(reports.iter().all(|r| r.holds()));
    assert!(reports.iter().any(|r| !r.clause_i && r.clause_ii));
    let d = ctx("dihedral:8", 2);
    let dg = d.group().clone();
    let s = dg.element("g").unwrap();
    // u = 1 compares C(g) ∩ C(g) = C(g) of order 4 with C(g^2) = D8
    let r = check_hypothesis_cent(&d, s, s).unwrap();
    assert_eq!(r.len(), 2);
    for rep in &r {
        assert_eq!((rep.intersection_order, rep.centraliser_order), (4, 8));
        assert!(!rep.clause_i);
    }
}

#[test]
fn element_json_keys_are_representatives() {
    let c = ctx("dihedral:8", 2);
    let x = HHSpace::over(&c, 1).unwrap().basis_element(1, 0);
    let j = x.to_json().unwrap();
    assert_eq!(j.components.len(), 1);
    assert!(j.components.contains_key(c.label(1)));
    let space = cohomology_space(c.centraliser(1).group(), c.field(), 1).unwrap();
    assert_eq!(j.components[c.label(1)].basis, space.labels());
}
