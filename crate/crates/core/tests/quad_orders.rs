use std::collections::BTreeSet;

use genus_packets::arith::genus::assigned_characters;
use genus_packets::quad_orders::{
    class_group, class_number_formula_check, kronecker_chi, local_unit_index, pic_with_level_sizes, LevelStructure,
    QuadOrder,
};

fn ord(d: i64) -> QuadOrder {
    QuadOrder::from_disc(d).unwrap()
}

#[test]
fn class_group_examples() {
    assert_eq!(class_group(-4).unwrap().classes.len(), 1);
    let cg = class_group(-15).unwrap();
    assert_eq!(cg.classes.iter().map(|f| f.to_string()).collect::<Vec<_>>(), vec!["(1,1,4)", "(2,1,2)"]);
    let cg = class_group(-23).unwrap();
    assert_eq!(cg.classes.iter().map(|f| f.to_string()).collect::<Vec<_>>(), vec!["(1,1,6)", "(2,-1,3)", "(2,1,3)"]);
    let t = cg.table();
    assert_eq!(t[1][1], 2);
    assert!(class_group(-5).is_err());
    assert!(class_group(7).is_err());
}

#[test]
fn kronecker_examples() {
    let o = ord(-4);
    assert_eq!(kronecker_chi(&o, 5), 1);
    assert_eq!(kronecker_chi(&o, 3), -1);
    assert_eq!(kronecker_chi(&o, 2), 0);
}

#[test]
fn unit_index_gaussian_level_two() {
    let lev = LevelStructure::new(ord(-4), (1, 0), 2).unwrap();
    // oracle: (ℤ[i]/8)^× against units ≡ 1 mod 2
    let units: Vec<(i64, i64)> = (0..8).flat_map(|a| (0..8).map(move |b| (a, b))).filter(|(a, b)| (a * a + b * b) % 2 == 1).collect();
    let fixed = units.iter().filter(|(a, b)| (a - 1) % 2 == 0 && b % 2 == 0).count();
    assert_eq!(local_unit_index(&lev, 2).unwrap(), (units.len() / fixed) as u64);
    assert_eq!(local_unit_index(&lev, 3).unwrap(), 1);
    assert_eq!(local_unit_index(&LevelStructure::trivial(ord(-4)), 2).unwrap(), 1);
}

#[test]
fn pic_size_examples() {
    let s = |d| {
        let p = pic_with_level_sizes(&LevelStructure::trivial(ord(d))).unwrap();
        (p.pic, p.pic_pg, p.index)
    };
    assert_eq!(s(-15), (2, 1, 2));
    assert_eq!(s(-4), (1, 1, 1));
    assert_eq!(s(-23), (3, 3, 1));
}

/// Trivial level: the norm-kernel index equals the number of genera, 2^(μ−1).
#[test]
fn trivial_level_index_is_genus_count() {
    for d in (-600i64..=-3).filter(|d| matches!(d.rem_euclid(4), 0 | 1)) {
        let p = pic_with_level_sizes(&LevelStructure::trivial(ord(d))).unwrap();
        let mu = assigned_characters(d).len() as u32;
        assert_eq!(p.index, 1 << (mu - 1), "disc {d}");
        let cg = class_group(d).unwrap();
        assert_eq!(p.pic_pg as usize, cg.principal_genus().len(), "disc {d}");
    }
}

/// Class number one, ξ = 1, N prime to d: Pic(𝒪,x) = (𝒪/N)^×/𝒪^× and a class is in the
/// principal genus iff its norm is 1 mod N, so the index is |Nr((𝒪/N)^×)|.
#[test]
fn level_index_against_residue_ring() {
    for d in [-3i64, -4, -7, -8, -11, -19, -43, -67] {
        let o = ord(d);
        let (t, n) = o.omega_tn();
        for modn in 2..=12i64 {
            if num_integer::gcd(modn, d) != 1 {
                continue;
            }
            let mut norms = BTreeSet::new();
            let mut count_units = 0;
            for a in 0..modn {
                for b in 0..modn {
                    let nr = (a * a + t * a * b + n * b * b).rem_euclid(modn);
                    if num_integer::gcd(nr, modn) == 1 {
                        norms.insert(nr);
                        count_units += 1;
                    }
                }
            }
            let lev = LevelStructure::new(o, (1, 0), modn as u64).unwrap();
            let p = pic_with_level_sizes(&lev).unwrap();
            assert_eq!(p.index, norms.len() as u64, "d {d} N {modn}");
            // |Pic| = |(𝒪/N)^×| / |image of 𝒪^×|
            let img: BTreeSet<(i128, i128)> = o.units().iter().map(|&(a, b)| (a.rem_euclid(modn as i128), b.rem_euclid(modn as i128))).collect();
            assert_eq!(p.pic, (count_units / img.len()) as u64, "d {d} N {modn}");
        }
    }
}

#[test]
fn cnf_examples() {
    for d in [-4i64, -15, -36] {
        let r = class_number_formula_check(&LevelStructure::trivial(ord(d)), 1_000_000).unwrap();
        assert!(r.relative_deviation <= 1e-3, "{d}: {r:?}");
    }
    let r = class_number_formula_check(&LevelStructure::trivial(ord(-4)), 1_000_000).unwrap();
    assert!((r.lhs - 0.25).abs() < 1e-12);
    assert!((r.l1.value - std::f64::consts::FRAC_PI_4).abs() < 1e-9);
    let r = class_number_formula_check(&LevelStructure::trivial(ord(-36)), 1_000_000).unwrap();
    assert!((r.conductor_factor - 4.0 / 3.0).abs() < 1e-15);
    assert!(class_number_formula_check(&LevelStructure::trivial(ord(-4)), 999).is_err());
}

#[test]
fn level_validation() {
    assert!(LevelStructure::new(ord(-4), (2, 2), 4).is_err());
    assert!(LevelStructure::new(ord(-4), (2, 1), 4).is_ok());
}
