use std::collections::BTreeMap;

use genus_packets::arith::{rat, Rational};
use genus_packets::ideal_counting::{
    count_by_norm, count_variants, inv_norm, lattice_oracle_count, level_classes, oracle_variants,
    principal_genus_classes, Bowen, NormWindow,
};
use genus_packets::quad_orders::{pic_with_level_sizes, LevelStructure, QuadOrder};
use proptest::prelude::*;

fn order(disc: i64) -> QuadOrder {
    QuadOrder::from_disc(disc).unwrap()
}

fn keys(m: &[(i64, u64)]) -> BTreeMap<Rational, u64> {
    m.iter().map(|&(k, c)| (rat(k, 1), c)).collect()
}

#[test]
fn inv_norm_examples() {
    let zi = order(-4);
    assert_eq!(inv_norm(&zi, &(rat(1, 1), rat(1, 1))).unwrap(), rat(2, 1));
    assert_eq!(inv_norm(&zi, &(rat(2, 1), rat(1, 1))).unwrap(), rat(5, 1));
    // ω = (1 + √−15)/2
    assert_eq!(inv_norm(&order(-15), &(rat(0, 1), rat(1, 1))).unwrap(), rat(4, 1));
    assert_eq!(inv_norm(&order(-20), &(rat(1, 3), rat(1, 2))).unwrap(), rat(1, 9) + rat(5, 4));
    assert!(inv_norm(&zi, &(rat(0, 1), rat(0, 1))).is_err());
}

proptest! {
    #[test]
    fn inv_norm_multiplicative(d in prop::sample::select(vec![-3i64, -4, -7, -15, -20, -23, -36, -99]),
                               a in -40i64..40, b in -40i64..40, c in -40i64..40, e in -40i64..40,
                               den in 1i64..9) {
        prop_assume!((a, b) != (0, 0) && (c, e) != (0, 0));
        let o = order(d);
        let v = (rat(a, den), rat(b, den));
        let w = (rat(c, 1), rat(e, 1));
        let (t, n) = o.omega_tn();
        // (v₀ + v₁ω)(w₀ + w₁ω) with ω² = tω − n
        let bd = &v.1 * &w.1;
        let prod = (&v.0 * &w.0 - &bd * rat(n, 1), &v.0 * &w.1 + &v.1 * &w.0 + &bd * rat(t, 1));
        let lhs = inv_norm(&o, &prod).unwrap();
        let rhs = inv_norm(&o, &v).unwrap() * inv_norm(&o, &w).unwrap();
        prop_assert!(lhs > rat(0, 1));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn gaussian_counts() {
    let level = LevelStructure::trivial(order(-4));
    let w = NormWindow::norms(1.0, 5.0).unwrap();
    let expected = keys(&[(1, 1), (2, 1), (4, 1), (5, 2)]);
    assert_eq!(count_by_norm(&level, 1, &w, true, None).unwrap(), expected);
    assert_eq!(count_by_norm(&level, 1, &w, false, None).unwrap(), expected);
    assert_eq!(lattice_oracle_count(&level, &w, true).unwrap(), expected);
}

#[test]
fn disc_minus_15_norm_two() {
    let level = LevelStructure::trivial(order(-15));
    let w = NormWindow::norms(2.0, 2.0).unwrap();
    // 2 splits; both primes above it lie in the ambiguous class (2,1,2)
    assert_eq!(count_by_norm(&level, 1, &w, false, None).unwrap(), keys(&[(2, 2)]));
    assert!(count_by_norm(&level, 1, &w, true, None).unwrap().is_empty());
    assert_eq!(lattice_oracle_count(&level, &w, false).unwrap(), keys(&[(2, 2)]));
    assert!(lattice_oracle_count(&level, &w, true).unwrap().is_empty());
}

#[test]
fn disc_minus_20_norm_four() {
    let level = LevelStructure::trivial(order(-20));
    let w = NormWindow::norms(4.0, 4.0).unwrap();
    for pg in [false, true] {
        let a = count_by_norm(&level, 1, &w, pg, None).unwrap();
        assert_eq!(a, lattice_oracle_count(&level, &w, pg).unwrap());
        assert_eq!(a.len(), 1);
    }
}

#[test]
fn empty_window() {
    let level = LevelStructure::new(order(-23), (1, 0), 3).unwrap();
    let w = NormWindow::norms(0.3, 0.3).unwrap();
    assert!(count_by_norm(&level, 1, &w, false, None).unwrap().is_empty());
    assert!(lattice_oracle_count(&level, &w, false).unwrap().is_empty());
    assert!(NormWindow::new(2.0, 1.0, -4).is_err());
}

#[test]
fn window_endpoints() {
    let w = NormWindow::new(1.0, 2.0, -16).unwrap();
    assert_eq!((w.lower, w.upper), (4.0, 16.0));
}

#[test]
fn level_classes_match_pic_sizes() {
    for disc in [-3i64, -4, -7, -12, -15, -20, -23, -27, -36, -39, -56, -63] {
        for n in 1..=8u64 {
            for xi in [(1, 0), (0, 1), (1, 1)] {
                let Ok(level) = LevelStructure::new(order(disc), xi, n) else { continue };
                let sizes = pic_with_level_sizes(&level).unwrap();
                assert_eq!(level_classes(&level).unwrap().len() as u64, sizes.pic, "{level:?}");
                assert_eq!(principal_genus_classes(&level).unwrap().len() as u64, sizes.pic_pg, "{level:?}");
            }
        }
    }
}

fn smallest_split(o: &QuadOrder, n: u64) -> u64 {
    (2..).find(|&p| genus_packets::arith::int::is_prime(p) && o.chi(p) == 1 && (o.f * n) % p != 0).unwrap()
}

#[test]
fn local_product_matches_oracle() {
    let taus = [0, 1, 2];
    for disc in [-3i64, -4, -7, -8, -11, -12, -15, -16, -20, -23, -27, -28, -35, -36, -48, -52, -60, -84] {
        let o = order(disc);
        for n in 1..=12u64 {
            let p1 = smallest_split(&o, n);
            for xi in [(1, 0), (0, 1), (2, 1)] {
                let Ok(level) = LevelStructure::new(o, xi, n) else { continue };
                let w = NormWindow::norms(0.0, 400.0).unwrap();
                let a = count_variants(&level, 1, &w, Some(p1), &taus).unwrap();
                let b = oracle_variants(&level, &w, Some(p1), &taus).unwrap();
                assert_eq!(a, b, "{level:?} p1 = {p1}");
            }
        }
    }
}

#[test]
fn bowen_is_monotone() {
    let o = order(-23);
    let level = LevelStructure::new(o, (1, 0), 4).unwrap();
    let w = NormWindow::norms(0.0, 2000.0).unwrap();
    let v = count_variants(&level, 1, &w, Some(3), &[0, 1, 2, 3]).unwrap();
    for pair in v.windows(2) {
        for (k, c) in pair[1].all.to_map() {
            assert!(pair[0].all.to_map()[&k] >= c);
        }
    }
    // 5 is inert, 2 divides the level
    assert!(count_by_norm(&level, 1, &w, false, Some(Bowen { p1: 5, tau: 1 })).is_err());
    assert!(count_by_norm(&level, 1, &w, false, Some(Bowen { p1: 2, tau: 1 })).is_err());
}

#[test]
fn y_level_is_an_upper_bound() {
    let o = order(-20);
    let level = LevelStructure::new(o, (1, 0), 3).unwrap();
    let w = NormWindow::norms(0.0, 200.0).unwrap();
    let base = count_by_norm(&level, 1, &w, false, None).unwrap();
    for m in [2u64, 3, 5] {
        let wide = count_by_norm(&level, m, &w, false, None).unwrap();
        for (k, c) in &base {
            assert!(wide.get(k).copied().unwrap_or(0) >= *c, "M = {m}, n = {k}");
        }
        for k in wide.keys() {
            assert!((k * rat((3 * m * 3 * m) as i64, 1)).is_integer());
        }
    }
}

#[test]
fn oracle_rejects_huge_windows() {
    let level = LevelStructure::new(order(-4), (1, 0), 12).unwrap();
    let w = NormWindow::norms(0.0, 1e9).unwrap();
    assert!(lattice_oracle_count(&level, &w, false).is_err());
}
