use genus_packets::arith::{rat, Rational};
use genus_packets::ortho_grid::packet_disc;
use genus_packets::stats::*;
use num_complex::Complex64;
use num_integer::Integer;
use proptest::prelude::*;

fn hull_one() -> Vec<[f64; 3]> {
    vec![[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]
}

#[test]
fn embedding_examples() {
    let p = embed_packet(1).unwrap();
    assert_eq!(p.records.len(), 1);
    let r = &p.records[0];
    assert_eq!(r.form, [1, 0, 1]);
    assert_eq!(r.tau, Complex64::new(0.0, 1.0));
    assert_eq!(r.fiber, [0.0, 0.0]);

    let r = &embed_packet(3).unwrap().records[0];
    assert_eq!(r.form, [1, 1, 1]);
    // (−1 + √3 i)/2, the translate of (1 + √3 i)/2 in the closed fundamental domain
    assert!((r.tau - Complex64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    assert_eq!(r.tors[0].denom().lcm(r.tors[1].denom()), 3.into());

    let p = embed_packet(5).unwrap();
    assert_eq!(p.disc, -20);
    for r in &p.records {
        let [a, b, c] = r.form;
        assert_eq!(b * b - 4 * a * c, -20);
        assert_eq!(r.tors[0].denom().lcm(r.tors[1].denom()), 5.into());
    }
    assert!(embed_packet(7).unwrap().records.is_empty());
    assert!(embed_packet(28).unwrap().records.is_empty());
}

#[test]
fn embedding_invariants() {
    for d in 1..=400u64 {
        let p = embed_packet(d).unwrap();
        for r in &p.records {
            let norm: f64 = r.sphere.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() <= 1e-12);
            assert!(r.tau.re.abs() <= 0.5 && r.tau.norm() >= 1.0 - 1e-12 && r.tau.im > 0.0);
            assert!(r.fiber.iter().all(|&t| (0.0..1.0).contains(&t)));
            assert_eq!(r.tors[0].denom().lcm(r.tors[1].denom()), d.into());
            let [a, b, c] = r.form;
            assert_eq!(b * b - 4 * a * c, packet_disc(d));
            // τ is a root of aτ² + bτ + c
            let v = r.tau * r.tau * a as f64 + r.tau * b as f64 + c as f64;
            assert!(v.norm() < 1e-9 * c as f64);
        }
        // τ and the fiber point are the same torsion point written in another basis
        let full: usize = p.records.iter().map(|r| r.orbit_size).sum();
        assert_eq!(full, p.full_sphere().len());
    }
}

#[test]
fn embedding_is_deterministic() {
    for d in [101u64, 1009] {
        assert_eq!(embed_packet(d).unwrap(), embed_packet(d).unwrap());
    }
}

#[test]
fn weyl_examples() {
    let w = weyl_sums_sphere(&hull_one(), 8).unwrap();
    assert_eq!(w[0], 1.0);
    for l in [1, 3, 5, 7] {
        assert!(w[l] < 1e-15);
    }
    // the octahedron is a 3-design but not a 4-design: W_4² = 21/36
    assert!(w[2] < 1e-15);
    assert!((w[4] - (21.0f64 / 36.0).sqrt()).abs() < 1e-14);
    let pw = weyl_sums_sphere_pairwise(&hull_one(), 8).unwrap();
    for (a, b) in w.iter().zip(&pw) {
        assert!((a - b).abs() < 1e-14);
    }
    // a single point has W_ℓ = 1
    assert!(weyl_sums_sphere(&[[0.6, 0.0, 0.8]], 6).unwrap().iter().all(|w| (w - 1.0).abs() < 1e-13));
    assert!(weyl_sums_sphere(&[], 3).is_err());
}

#[test]
fn odd_weyl_sums_vanish_on_full_spheres() {
    for d in (1..=300u64).step_by(7) {
        let p = embed_packet(d).unwrap();
        if p.records.is_empty() {
            continue;
        }
        let w = weyl_sums_sphere(&p.full_sphere(), 7).unwrap();
        for l in [1, 3, 5, 7] {
            assert!(w[l] < 1e-13, "D = {d}, ℓ = {l}: {}", w[l]);
        }
    }
}

#[test]
fn fiber_examples() {
    for (m, s) in fiber_exponential_sums(&[[0.0, 0.0]], 3).unwrap() {
        assert!((s - 1.0).abs() < 1e-15, "{m:?}");
    }
    for d in [5i64, 12, 101] {
        let orbit: Vec<[f64; 2]> = (0..d).map(|k| [k as f64 / d as f64, 0.0]).collect();
        let exact: Vec<[Rational; 2]> = (0..d).map(|k| [rat(k, d), rat(0, 1)]).collect();
        let a = fiber_exponential_sums(&orbit, 3).unwrap();
        let b = fiber_exponential_sums_exact(&exact, 3).unwrap();
        for ((m, x), (_, y)) in a.iter().zip(&b) {
            if m[0] % d == 0 {
                assert!((x - 1.0).abs() < 1e-12 && (y - 1.0).abs() < 1e-12);
            } else {
                assert!(*x < 1e-12 && *y < 1e-12, "{m:?}: {x} {y}");
            }
        }
    }
    assert_eq!(frequencies(1).len(), 8);
    assert!(fiber_exponential_sums(&[], 1).is_err());
}

#[test]
fn cusp_profile_values() {
    let pts = [Complex64::new(0.0, 1.0), Complex64::new(0.5, 2.0), Complex64::new(0.1, 5.0)];
    let rows = cusp_profile(&pts, &[1.0, 3.0]).unwrap();
    assert_eq!(rows[0].empirical, 2.0 / 3.0);
    assert_eq!(rows[1].empirical, 1.0 / 3.0);
    assert!((rows[1].expected - 1.0 / std::f64::consts::PI).abs() < 1e-15);
    assert!(cusp_profile(&pts, &[0.5]).is_err());
}

#[test]
fn congruence_filter_examples() {
    let b = FilterBounds { conductor: 0, level: 0 };
    // disc −404 is fundamental; (−404/3) = (−404/5) = 1 and (−404/19) = −1
    assert_eq!(congruence_filter(&[101], 3, 5, b).unwrap(), vec![101]);
    assert!(congruence_filter(&[101], 3, 19, b).unwrap().is_empty());
    assert!(congruence_filter(&[], 3, 5, b).unwrap().is_empty());
    assert!(congruence_filter(&[101], 5, 5, b).is_err());
    // 3 | D to high power is dropped once the level bound is below its valuation
    let high = 3u64.pow(4) * 101;
    let ds = [101, high];
    let loose = FilterBounds { conductor: 4, level: 4 };
    let kept = congruence_filter(&ds, 3, 5, loose).unwrap();
    let tight = congruence_filter(&ds, 3, 5, FilterBounds { conductor: 4, level: 1 }).unwrap();
    assert!(!tight.contains(&high));
    assert!(tight.iter().all(|d| kept.contains(d)));
    // the filtered set is exactly the brute-force one
    let ds: Vec<u64> = (1..2000).collect();
    let got = congruence_filter(&ds, 3, 5, FilterBounds { conductor: 1, level: 1 }).unwrap();
    let want: Vec<u64> = ds
        .iter()
        .copied()
        .filter(|&d| {
            genus_packets::sphere::representable(d) && {
                let (df, f) = genus_packets::arith::int::fundamental_part(packet_disc(d));
                [3u64, 5].iter().all(|&p| {
                    genus_packets::arith::int::kronecker(df as i128, p as i128) == 1
                        && f % (p * p) != 0
                        && d % (p * p) != 0
                })
            }
        })
        .collect();
    assert_eq!(got, want);
}

#[test]
fn float_format() {
    assert_eq!(float17(0.5), "0.50000000000000000");
    assert_eq!(float17(-0.0), "0.0000000000000000");
    assert_eq!(float17(10.0), "10.000000000000000");
    assert_eq!(float17(1e-7), "9.9999999999999995e-8");
    assert_eq!(float17(1.0 / 3.0), "0.33333333333333331");
    for x in [std::f64::consts::PI, 1e-300, 123456.789, -2.5e20] {
        assert_eq!(float17(x).parse::<f64>().unwrap(), x);
    }
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn goldens_match() {
    for d in [101u64, 1009, 2029] {
        let p = embed_packet(d).unwrap();
        let rows = stats_csv(std::slice::from_ref(&p)).unwrap();
        let summary = summary_csv(std::slice::from_ref(&p)).unwrap();
        assert_eq!(rows, golden(&format!("stats_{d}.csv")), "D = {d}");
        assert_eq!(summary, golden(&format!("stats_{d}_summary.csv")), "D = {d}");
        assert_eq!(rows, stats_csv(&[embed_packet(d).unwrap()]).unwrap());
    }
}

#[test]
fn goldens_cross_checked_by_other_summation() {
    for d in [101u64, 1009, 2029] {
        let p = embed_packet(d).unwrap();
        let text = golden(&format!("stats_{d}_summary.csv"));
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let pairwise = weyl_sums_sphere_pairwise(&p.full_sphere(), 6).unwrap();
        let exact: Vec<[Rational; 2]> = p.records.iter().map(|r| r.tors.clone()).collect();
        let fiber = fiber_exponential_sums_exact(&exact, 2).unwrap();
        let mut checked = 0;
        for row in rd.records() {
            let row = row.unwrap();
            let value: f64 = row[3].parse().unwrap();
            match &row[1] {
                "sphere_weyl" => {
                    let l: usize = row[2].parse().unwrap();
                    assert!((value * value - pairwise[l] * pairwise[l]).abs() < 1e-12, "D = {d}, ℓ = {l}");
                    checked += 1;
                }
                "fiber_exp" => {
                    let m: Vec<i64> = row[2].split(' ').map(|x| x.parse().unwrap()).collect();
                    let (_, want) = fiber.iter().find(|(k, _)| k[..] == m[..]).unwrap();
                    assert!((value - want).abs() < 1e-12, "D = {d}, m = {m:?}");
                    checked += 1;
                }
                _ => {}
            }
        }
        assert_eq!(checked, 7 + 24);
    }
}

proptest! {
    #[test]
    fn weyl_routes_agree(pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 1..40)) {
        let pts: Vec<[f64; 3]> = pts
            .into_iter()
            .filter_map(|(x, y, z)| {
                let n = (x * x + y * y + z * z).sqrt();
                (n > 1e-3).then(|| [x / n, y / n, z / n])
            })
            .collect();
        prop_assume!(!pts.is_empty());
        let a = weyl_sums_sphere(&pts, 6).unwrap();
        let b = weyl_sums_sphere_pairwise(&pts, 6).unwrap();
        for (x, y) in a.iter().zip(&b) {
            // the pairwise route loses precision near zero through the square root
            prop_assert!((x * x - y * y).abs() < 1e-11);
            prop_assert!(*x <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn statistics_are_permutation_invariant(d in prop::sample::select(vec![101u64, 257, 1009]), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let p = embed_packet(d).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut sphere = p.full_sphere();
        let w = weyl_sums_sphere(&sphere, 6).unwrap();
        sphere.shuffle(&mut rng);
        let ws = weyl_sums_sphere(&sphere, 6).unwrap();
        for (x, y) in w.iter().zip(&ws) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let mut fib = p.fiber_points();
        let f = fiber_exponential_sums(&fib, 2).unwrap();
        fib.shuffle(&mut rng);
        let fs = fiber_exponential_sums(&fib, 2).unwrap();
        for ((_, x), (_, y)) in f.iter().zip(&fs) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let mut sp = p.surface_points();
        let c = cusp_profile(&sp, &[1.0, 2.0]).unwrap();
        sp.shuffle(&mut rng);
        prop_assert_eq!(c, cusp_profile(&sp, &[1.0, 2.0]).unwrap());
    }
}
