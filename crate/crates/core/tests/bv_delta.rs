use std::sync::Arc;

use bvh_core::cochain::{commutator_of_lifts, ExtensionCocycle};
use bvh_core::cohomology::{cohomology_space, identify_named_classes, CohomologyClass};
use bvh_core::delta::{delta_class, delta_from_extension, delta_matrix};
use bvh_core::group::{parse_group_spec, GroupHom};
use bvh_core::{Fp, Group};

fn grp(s: &str) -> Arc<Group> {
    Arc::new(parse_group_spec(s).unwrap())
}

fn named(g: &Arc<Group>, f: Fp, name: &str) -> CohomologyClass {
    identify_named_classes(g, f)
        .unwrap()
        .into_iter()
        .find(|(n, _)| n == name)
        .unwrap()
        .1
}

#[test]
fn quaternion_delta_vanishes() {
    let q8 = grp("quaternion:8");
    let f = Fp::new(2).unwrap();
    let gamma = q8.element("gamma").unwrap();
    for n in 1..=4 {
        assert!(delta_matrix(&q8, f, gamma, n).unwrap().is_zero(), "degree {n}");
    }
}

#[test]
fn dihedral_named_classes() {
    let d8 = grp("dihedral:8");
    let f = Fp::new(2).unwrap();
    let gamma = d8.element("gamma").unwrap();
    let x = named(&d8, f, "x");
    let y = named(&d8, f, "y");
    let z = named(&d8, f, "z");
    let x_plus_y = x.add(&y).unwrap();
    assert_eq!(delta_class(gamma, &z).unwrap(), x_plus_y);
    assert!(delta_class(gamma, &x).unwrap().is_zero());
    let xz = x.cup(&z).unwrap();
    assert_eq!(delta_class(gamma, &xz).unwrap(), x.cup(&x_plus_y).unwrap());
    assert!(x.cup(&y).unwrap().is_zero());
}

#[test]
fn semidihedral_delta() {
    let sd = grp("semidihedral:16");
    let f = Fp::new(2).unwrap();
    let gamma = sd.element("gamma").unwrap();
    assert!(delta_matrix(&sd, f, gamma, 2).unwrap().is_zero());
    let m3 = delta_matrix(&sd, f, gamma, 3).unwrap();
    assert_eq!(m3.rank, 1);
    let y = named(&sd, f, "y");
    let y2 = y.cup(&y).unwrap();
    assert_eq!(m3.image(f), vec![y2.coordinates().to_vec()]);
}

#[test]
fn extension_theorem_q16() {
    let q16 = grp("quaternion:16");
    let d8 = grp("dihedral:8");
    let f = Fp::new(2).unwrap();
    let pi = GroupHom::from_generator_images(
        &q16,
        &d8,
        &[
            (q16.element("g").unwrap(), d8.element("g").unwrap()),
            (q16.element("h").unwrap(), d8.element("h").unwrap()),
        ],
    )
    .unwrap();
    let c = q16.element("gamma").unwrap();
    let e = ExtensionCocycle::from_surjection(&pi, c, f).unwrap();
    let gamma = d8.element("gamma").unwrap();
    let rep = delta_from_extension(&e, gamma).unwrap();
    assert!(rep.agrees);
    for h in d8.elements() {
        let direct = commutator_of_lifts(&pi, c, f, gamma, h).unwrap();
        assert_eq!(direct, rep.formula[h]);
    }
    let (g, h) = (d8.element("g").unwrap(), d8.element("h").unwrap());
    assert_eq!(rep.formula[g], 1);
    assert_eq!(rep.formula[h], 1);
    assert_eq!(rep.formula[d8.mul(g, h)], 0);
    let z = cohomology_space(&d8, f, 2).unwrap().class_of(e.alpha()).unwrap();
    assert!(!z.is_zero());
}
