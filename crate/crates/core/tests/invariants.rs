use std::sync::Arc;

use bvh_core::cochain::{Cochain, TupleIndexer};
use bvh_core::cohomology::cohomology_space;
use bvh_core::group::parse_group_spec;
use bvh_core::{Fp, Group};
use proptest::prelude::*;

const GROUPS: [&str; 6] = ["cyclic:4", "elementary:2:2", "dihedral:8", "quaternion:8", "cyclic:3", "cyclic:9"];

fn setup(i: usize) -> (Arc<Group>, Fp) {
    let g = Arc::new(parse_group_spec(GROUPS[i]).unwrap());
    let f = Fp::new(g.prime_power().unwrap()).unwrap();
    (g, f)
}

fn cochain(g: &Arc<Group>, f: Fp, n: usize, seed: &[u32]) -> Cochain {
    let len = TupleIndexer::new(g).count(n);
    let vals = (0..len).map(|i| seed[i % seed.len()].wrapping_mul(i as u32 + 7) % f.p()).collect();
    Cochain::from_values(g, f, n, vals).unwrap()
}

/// A random cocycle of degree `n` together with its class coordinates.
fn cocycle(g: &Arc<Group>, f: Fp, n: usize, seed: &[u32]) -> (Cochain, Vec<u32>) {
    let space = cohomology_space(g, f, n).unwrap();
    let coords: Vec<u32> = (0..space.dim()).map(|k| seed[k % seed.len()] % f.p()).collect();
    let c = space.combine(&coords).add(&cochain(g, f, n - 1, seed).coboundary()).unwrap();
    (c, coords)
}

fn central(g: &Group) -> Vec<usize> {
    g.elements().filter(|&a| g.is_central(a)).collect()
}

fn seed() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(any::<u32>(), 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coboundary_squares_to_zero(gi in 0..GROUPS.len(), n in 0usize..3, s in seed()) {
        let (g, f) = setup(gi);
        prop_assert!(cochain(&g, f, n, &s).coboundary().coboundary().is_zero());
    }

    #[test]
    fn coboundary_is_linear(gi in 0..GROUPS.len(), n in 0usize..3, s in seed(), t in seed(), c in 0u32..9) {
        let (g, f) = setup(gi);
        let (a, b) = (cochain(&g, f, n, &s), cochain(&g, f, n, &t));
        let lhs = a.scale(c % f.p()).add(&b).unwrap().coboundary();
        let rhs = a.coboundary().scale(c % f.p()).add(&b.coboundary()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coordinates_ignore_coboundaries(gi in 0..GROUPS.len(), n in 1usize..4, s in seed()) {
        let (g, f) = setup(gi);
        let (c, coords) = cocycle(&g, f, n, &s);
        prop_assert!(c.is_cocycle());
        prop_assert_eq!(cohomology_space(&g, f, n).unwrap().coordinates(&c).unwrap(), coords);
    }

    #[test]
    fn delta_preserves_cocycles_and_classes(gi in 0..GROUPS.len(), n in 1usize..4, s in seed(), t in seed(), zi in any::<usize>()) {
        let (g, f) = setup(gi);
        let zs = central(&g);
        let z = zs[zi % zs.len()];
        let (c, coords) = cocycle(&g, f, n, &s);
        let d = c.delta_g(z).unwrap();
        prop_assert!(d.is_cocycle());
        // the class of Δ_g depends only on the class of the input
        let space = cohomology_space(&g, f, n).unwrap();
        let other = space.combine(&coords).add(&cochain(&g, f, n - 1, &t).coboundary()).unwrap();
        let below = cohomology_space(&g, f, n - 1).unwrap();
        prop_assert_eq!(below.coordinates(&d).unwrap(), below.coordinates(&other.delta_g(z).unwrap()).unwrap());
    }

    #[test]
    fn delta_is_additive_in_the_element(gi in 0..GROUPS.len(), n in 1usize..4, s in seed(), ai in any::<usize>(), bi in any::<usize>()) {
        let (g, f) = setup(gi);
        let zs = central(&g);
        let (a, b) = (zs[ai % zs.len()], zs[bi % zs.len()]);
        let (c, _) = cocycle(&g, f, n, &s);
        let below = cohomology_space(&g, f, n - 1).unwrap();
        let sum = c.delta_g(a).unwrap().add(&c.delta_g(b).unwrap()).unwrap();
        prop_assert_eq!(below.coordinates(&c.delta_g(g.mul(a, b)).unwrap()).unwrap(), below.coordinates(&sum).unwrap());
    }

    #[test]
    fn delta_squares_to_zero_on_classes(gi in 0..GROUPS.len(), n in 2usize..4, s in seed(), zi in any::<usize>()) {
        let (g, f) = setup(gi);
        let zs = central(&g);
        let z = zs[zi % zs.len()];
        let (c, _) = cocycle(&g, f, n, &s);
        let dd = c.delta_g(z).unwrap().delta_g(z).unwrap();
        let below = cohomology_space(&g, f, n - 2).unwrap();
        prop_assert!(below.coordinates(&dd).unwrap().iter().all(|&v| v == 0));
    }

    #[test]
    fn cup_is_graded_commutative(gi in 0..GROUPS.len(), m in 1usize..3, n in 1usize..3, s in seed(), t in seed()) {
        let (g, f) = setup(gi);
        let (a, _) = cocycle(&g, f, m, &s);
        let (b, _) = cocycle(&g, f, n, &t);
        let space = cohomology_space(&g, f, m + n).unwrap();
        let ab = space.coordinates(&a.cup(&b).unwrap()).unwrap();
        let ba = space.coordinates(&b.cup(&a).unwrap().scale(f.sign(m * n))).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn field_inverse(p in prop::sample::select(vec![2u32, 3, 5, 7, 11]), a in 1u32..1000) {
        let f = Fp::new(p).unwrap();
        let a = a % p;
        prop_assume!(a != 0);
        prop_assert_eq!(f.mul(a, f.inv(a)), 1);
    }
}
