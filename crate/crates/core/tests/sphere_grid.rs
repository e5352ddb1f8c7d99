use std::collections::BTreeSet;

use genus_packets::arith::lattice::{dot, vec3, Vec3};
use genus_packets::ortho_grid::{build_grid, check_grid, genus_packet, grid_class, grid_class_from, packet_disc, tors_order};
use genus_packets::sphere::{enumerate, representable, rotation_orbits, SpherePoint};
use num_bigint::BigInt;
use proptest::prelude::*;

fn naive(d: i64) -> BTreeSet<[i64; 3]> {
    let r = (d as f64).sqrt() as i64 + 1;
    let mut s = BTreeSet::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                if a * a + b * b + c * c == d && num_integer::gcd(num_integer::gcd(a, b), c) == 1 {
                    s.insert([a, b, c]);
                }
            }
        }
    }
    s
}

#[test]
fn sphere_examples() {
    assert!(representable(1));
    assert!(!representable(7));
    assert!(!representable(4));
    assert_eq!(enumerate(1).len(), 6);
    assert_eq!(enumerate(3).len(), 8);
    assert_eq!(enumerate(2).len(), 12);
    for d in 1..300 {
        let got: BTreeSet<_> = enumerate(d).iter().map(|p| p.coords).collect();
        assert_eq!(got, naive(d as i64), "D = {d}");
        assert_eq!(!got.is_empty(), representable(d));
    }
}

#[test]
fn orbit_examples() {
    let sizes = |d| rotation_orbits(&enumerate(d)).unwrap().iter().map(|o| o.members.len()).collect::<Vec<_>>();
    assert_eq!(sizes(1), vec![6]);
    assert_eq!(sizes(3), vec![8]);
    assert_eq!(sizes(5), vec![24]);
    for d in 1..500u64 {
        let pts = enumerate(d);
        let orbits = rotation_orbits(&pts).unwrap();
        assert_eq!(orbits.iter().map(|o| o.members.len()).sum::<usize>(), pts.len());
        assert!(orbits.iter().all(|o| 24 % o.members.len() == 0));
    }
    let mixed = [SpherePoint::new([1, 0, 0]).unwrap(), SpherePoint::new([1, 1, 0]).unwrap()];
    assert!(rotation_orbits(&mixed).is_err());
}

#[test]
fn grid_examples() {
    let g = build_grid(&SpherePoint::new([0, 0, 1]).unwrap()).unwrap();
    assert_eq!(g.x1, vec3([0, 0, 1]));
    assert_eq!(tors_order(&g.tors_coords), BigInt::from(1));

    let g = build_grid(&SpherePoint::new([1, 1, 1]).unwrap()).unwrap();
    assert!(check_grid(&g));
    assert_eq!(tors_order(&g.tors_coords), BigInt::from(3));
    // x^tors = x¹ − x/3 is congruent to (2/3, −1/3, −1/3) modulo the lattice
    let three = BigInt::from(3);
    let xt: Vec<BigInt> = (0..3).map(|i| &three * &g.x1[i] - BigInt::from(1)).collect();
    let diff: Vec<BigInt> = xt.iter().zip([2, -1, -1]).map(|(a, b)| a - BigInt::from(b)).collect();
    // diff/3 ∈ x^⊥(ℤ)
    assert!(diff.iter().all(|v| v % &three == BigInt::from(0)));
    assert_eq!(diff.iter().fold(BigInt::from(0), |s, v| s + v), BigInt::from(0));

    let g = build_grid(&SpherePoint::new([1, 2, 2]).unwrap()).unwrap();
    assert_eq!(tors_order(&g.tors_coords), BigInt::from(9));

    let c = grid_class(&build_grid(&SpherePoint::new([1, 1, 0]).unwrap()).unwrap());
    assert_eq!(c.form, genus_packets::arith::Bqf::new(1, 0, 2));
    let c = grid_class(&build_grid(&SpherePoint::new([1, 1, 1]).unwrap()).unwrap());
    assert_eq!(c.form, genus_packets::arith::Bqf::new(1, 1, 1));
    assert_eq!(c.content, BigInt::from(2));
    let c = grid_class(&build_grid(&SpherePoint::new([0, 0, 1]).unwrap()).unwrap());
    assert_eq!(c.form.disc(), BigInt::from(-4));
}

#[test]
fn grid_invariants_small() {
    for d in (1..400u64).filter(|&d| representable(d)) {
        for x in enumerate(d) {
            let g = build_grid(&x).unwrap();
            assert!(check_grid(&g), "{x:?}");
            let c = grid_class(&g);
            assert_eq!(c.form.disc(), BigInt::from(packet_disc(d)));
            assert_eq!(tors_order(&c.tors), BigInt::from(d));
        }
    }
}

#[test]
fn class_constant_on_rotation_orbits() {
    for d in [5u64, 6, 11, 14, 21, 29, 41, 50, 101] {
        for o in rotation_orbits(&enumerate(d)).unwrap() {
            let classes: BTreeSet<_> = o.members.iter().map(|x| grid_class(&build_grid(x).unwrap())).collect();
            assert_eq!(classes.len(), 1, "D = {d}");
        }
    }
}

#[test]
fn packet_examples() {
    let p = genus_packet(1).unwrap();
    assert_eq!(p.entries.len(), 1);
    assert_eq!(tors_order(&p.entries[0].class.tors), BigInt::from(1));
    let p = genus_packet(5).unwrap();
    assert_eq!(p.entries.len(), 1);
    assert_eq!(p.disc, -20);
    assert_eq!(tors_order(&p.entries[0].class.tors), BigInt::from(5));
    let p = genus_packet(101).unwrap();
    assert_eq!(p.disc, -404);
    assert!(p.single_genus);
    assert!(genus_packet(7).is_err());
}

fn add(a: &Vec3, b: &Vec3, k: i64) -> Vec3 {
    [0, 1, 2].map(|i| &a[i] + BigInt::from(k) * &b[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn class_independent_of_basis_and_dual(
        d in 1u64..600, pick in 0usize..1000,
        p in -3i64..4, q in -3i64..4, r in -3i64..4, k1 in -5i64..6, k2 in -5i64..6,
    ) {
        prop_assume!(representable(d));
        let pts = enumerate(d);
        let x = pts[pick % pts.len()];
        let g = build_grid(&x).unwrap();
        let base = grid_class(&g);
        // a random SL₂(ℤ) change of the oriented basis
        prop_assume!(p != 0 && (1 + q * r) % p == 0);
        let s = (1 + q * r) / p;
        let xv = vec3(x.coords);
        let [b0, mut b1] = g.lattice.basis.clone();
        if genus_packets::arith::lattice::det3(&b0, &b1, &xv) < BigInt::from(0) {
            b1 = b1.map(|c| -c);
        }
        let e1 = add(&[0,1,2].map(|i| BigInt::from(p) * &b0[i]), &b1, r);
        let e2 = add(&[0,1,2].map(|i| BigInt::from(q) * &b0[i]), &b1, s);
        let x1 = add(&add(&g.x1, &b0, k1), &b1, k2);
        prop_assert_eq!(dot(&x1, &xv), BigInt::from(1));
        prop_assert_eq!(grid_class_from(&e1, &e2, &x1), base);
    }
}
