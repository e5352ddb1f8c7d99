//! Oracle suites behind `verify`. Each case compares a computation against an independent
//! route; failures are recorded as (module, op, inputs, expected, got).

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::int::{is_prime, omega};
use crate::arith::{rat, Rational};
use crate::ideal_counting::{count_variants, oracle_variants, NormWindow};
use crate::lfunc::{
    conductor_bound, half_bounds, level_unit_measure, local_factor_at_one, local_factor_closed,
    local_factor_oracle_adaptive, residue_bound_check, GlobalLSpec, LocalFactorSpec, LocalLevel, SplitType,
};
use crate::ortho_grid::{build_grid, check_grid, genus_packet, grid_class, order_u64, packet_disc};
use crate::quad_orders::{class_number_formula_check, pic_with_level_sizes, LevelStructure, QuadOrder};
use crate::sphere::{enumerate, representable};
use crate::stats::{
    embed_packet, fiber_exponential_sums, fiber_exponential_sums_exact, stats_csv, weyl_sums_sphere,
    weyl_sums_sphere_pairwise,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Spheres,
    Grids,
    Genus,
    Cnf,
    LocalLfactors,
    HalfBounds,
    Counting,
    GenusIndex,
    Conductor,
    Residue,
    Stats,
}

impl Suite {
    pub const EACH: [Suite; 11] = [
        Suite::Spheres,
        Suite::Grids,
        Suite::Genus,
        Suite::Cnf,
        Suite::LocalLfactors,
        Suite::HalfBounds,
        Suite::Counting,
        Suite::GenusIndex,
        Suite::Conductor,
        Suite::Residue,
        Suite::Stats,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Spheres => "spheres",
            Suite::Grids => "grids",
            Suite::Genus => "genus",
            Suite::Cnf => "cnf",
            Suite::LocalLfactors => "local-lfactors",
            Suite::HalfBounds => "half-bounds",
            Suite::Counting => "counting",
            Suite::GenusIndex => "genus-index",
            Suite::Conductor => "conductor",
            Suite::Residue => "residue",
            Suite::Stats => "stats",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyParams {
    /// spheres, grids, genus: D ≤ max_d
    pub max_d: u64,
    /// local-lfactors, half-bounds: p ≤ max_p
    pub max_p: u64,
    /// level suites: |disc| ≤ max_disc
    pub max_disc: u64,
    /// level suites: N ≤ max_level
    pub max_level: u64,
    /// counting: norms ≤ norm_max
    pub norm_max: f64,
    /// counting: only |disc| ≤ count_disc
    pub count_disc: u64,
    pub truncation: u64,
    pub seed: u64,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            max_d: 1000,
            max_p: 13,
            max_disc: 60,
            max_level: 6,
            norm_max: 2000.0,
            count_disc: 40,
            truncation: 1_000_000,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub module: String,
    pub op: String,
    pub inputs: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "cases": self.cases,
            "passed": self.passed(),
            "failures": self.failures.iter().map(|f| json!({
                "module": f.module, "op": f.op, "inputs": f.inputs, "expected": f.expected, "got": f.got,
            })).collect::<Vec<_>>(),
        })
    }
}

fn fail(module: &str, op: &str, inputs: impl Into<String>, expected: impl ToString, got: impl ToString) -> Failure {
    Failure { module: module.into(), op: op.into(), inputs: inputs.into(), expected: expected.to_string(), got: got.to_string() }
}

/// Run the cases in parallel; results are merged in case order.
fn collect<C: Sync, F>(suite: Suite, cases: &[C], check: F) -> SuiteReport
where
    F: Fn(&C) -> Vec<Failure> + Sync + Send,
{
    let failures: Vec<Failure> = cases.par_iter().map(check).collect::<Vec<_>>().into_iter().flatten().collect();
    SuiteReport { suite: suite.name().into(), cases: cases.len(), failures }
}

pub fn run_suite(suite: Suite, p: &VerifyParams) -> Vec<SuiteReport> {
    match suite {
        Suite::All => Suite::EACH.iter().flat_map(|&s| run_suite(s, p)).collect(),
        Suite::Spheres => vec![spheres(p.max_d)],
        Suite::Grids => vec![grids(p.max_d)],
        Suite::Genus => vec![genus(p.max_d)],
        Suite::Cnf => vec![cnf(p)],
        Suite::LocalLfactors => vec![local_lfactors(p.max_p)],
        Suite::HalfBounds => vec![half_bounds_stated(p.max_p)],
        Suite::Counting => vec![counting(p)],
        Suite::GenusIndex => vec![genus_index(p)],
        Suite::Conductor => vec![conductor(p)],
        Suite::Residue => vec![residue(p)],
        Suite::Stats => vec![stats(p.seed)],
    }
}

/// Primitive points of norm ≤ max_d from one sweep of the cube.
pub fn naive_spheres(max_d: u64) -> BTreeMap<u64, BTreeSet<[i64; 3]>> {
    let r = (max_d as f64).sqrt() as i64 + 1;
    let mut out: BTreeMap<u64, BTreeSet<[i64; 3]>> = BTreeMap::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                let n = (a * a + b * b + c * c) as u64;
                if n >= 1 && n <= max_d && a.gcd(&b).gcd(&c) == 1 {
                    out.entry(n).or_default().insert([a, b, c]);
                }
            }
        }
    }
    out
}

pub fn spheres(max_d: u64) -> SuiteReport {
    let naive = naive_spheres(max_d);
    let ds: Vec<u64> = (1..=max_d).collect();
    let empty = BTreeSet::new();
    collect(Suite::Spheres, &ds, |&d| {
        let got: BTreeSet<[i64; 3]> = enumerate(d).iter().map(|p| p.coords).collect();
        let want = naive.get(&d).unwrap_or(&empty);
        let mut out = Vec::new();
        if &got != want {
            out.push(fail("sphere", "enumerate", format!("D={d}"), format!("{} points", want.len()), format!("{} points", got.len())));
        }
        if representable(d) == want.is_empty() {
            out.push(fail("sphere", "representable", format!("D={d}"), !want.is_empty(), representable(d)));
        }
        out
    })
}

pub fn grids(max_d: u64) -> SuiteReport {
    let ds: Vec<u64> = (1..=max_d).filter(|&d| representable(d)).collect();
    collect(Suite::Grids, &ds, |&d| {
        let mut out = Vec::new();
        for x in enumerate(d) {
            let inputs = format!("D={d} x={:?}", x.coords);
            let g = match build_grid(&x) {
                Ok(g) => g,
                Err(e) => {
                    out.push(fail("ortho_grid", "build_grid", inputs, "grid", e));
                    continue;
                }
            };
            if !check_grid(&g) {
                out.push(fail("ortho_grid", "build_grid", inputs.clone(), "covolume² = D, order D", "violated"));
            }
            let c = grid_class(&g);
            if c.form.disc_i64() != packet_disc(d) {
                out.push(fail("ortho_grid", "grid_class", inputs.clone(), packet_disc(d), c.form.disc_i64()));
            }
            if order_u64(&c.tors) != d {
                out.push(fail("ortho_grid", "grid_class", inputs, d, order_u64(&c.tors)));
            }
        }
        out
    })
}

pub fn genus(max_d: u64) -> SuiteReport {
    let ds: Vec<u64> = (1..=max_d).filter(|&d| representable(d)).collect();
    collect(Suite::Genus, &ds, |&d| match genus_packet(d) {
        Ok(p) if p.single_genus => vec![],
        Ok(p) => {
            let sigs: BTreeSet<Vec<i32>> = p.entries.iter().map(|e| e.genus.clone()).collect();
            vec![fail("ortho_grid", "genus_packet", format!("D={d}"), "one genus", format!("{} genera", sigs.len()))]
        }
        Err(e) => vec![fail("ortho_grid", "genus_packet", format!("D={d}"), "packet", e)],
    })
}

/// Negative discriminants with |disc| ≤ max_abs.
pub fn discriminants(max_abs: u64) -> Vec<i64> {
    (3..=max_abs as i64).map(|d| -d).filter(|&d| QuadOrder::from_disc(d).is_ok()).collect()
}

pub const XI_GRID: [(i64, i64); 4] = [(1, 0), (0, 1), (1, 1), (2, 1)];

/// Trivial level and ξ/N for ξ in a fixed grid and 2 ≤ N ≤ max_level, without repeats.
pub fn sample_levels(disc: i64, max_level: u64) -> Vec<LevelStructure> {
    let Ok(order) = QuadOrder::from_disc(disc) else { return vec![] };
    let mut out = vec![LevelStructure::trivial(order)];
    let mut seen = BTreeSet::new();
    for n in 2..=max_level {
        for xi in XI_GRID {
            let key = (xi.0.rem_euclid(n as i64), xi.1.rem_euclid(n as i64), n);
            if seen.insert(key) {
                if let Ok(l) = LevelStructure::new(order, xi, n) {
                    out.push(l);
                }
            }
        }
    }
    out
}

fn all_levels(max_disc: u64, max_level: u64) -> Vec<LevelStructure> {
    discriminants(max_disc).into_iter().flat_map(|d| sample_levels(d, max_level)).collect()
}

fn show(l: &LevelStructure) -> String {
    format!("disc={} xi={:?} N={}", l.order.disc, l.xi, l.n)
}

pub const CNF_TOLERANCE: f64 = 1e-3;

pub fn cnf(p: &VerifyParams) -> SuiteReport {
    let levels = all_levels(p.max_disc, p.max_level);
    collect(Suite::Cnf, &levels, |l| match class_number_formula_check(l, p.truncation) {
        Ok(r) if r.relative_deviation <= CNF_TOLERANCE => vec![],
        Ok(r) => vec![fail("quad_orders", "class_number_formula_check", show(l), format!("≤ {CNF_TOLERANCE}"), r.relative_deviation)],
        Err(e) => vec![fail("quad_orders", "class_number_formula_check", show(l), "report", e)],
    })
}

pub const S_GRID: [(f64, f64); 5] = [(0.5, 0.0), (1.0, 0.0), (1.5, 0.0), (2.0, 0.0), (0.5, 3.0)];
pub const LFACTOR_TOLERANCE: f64 = 1e-9;

/// p ≤ max_p × split type × n ≤ 3 × {trivial, ξ/p^e} plus Bowen depths 1, 2 (s = 2 placeholder).
pub fn lfactor_grid(max_p: u64) -> Vec<LocalFactorSpec> {
    let s = Complex64::new(2.0, 0.0);
    let mut out = Vec::new();
    for p in (2..=max_p).filter(|&p| is_prime(p)) {
        for t in SplitType::ALL {
            for n in 0..=3u32 {
                let mut levels = vec![LocalLevel::Trivial];
                for xi in [(1, 0), (0, 1), (1, 1)] {
                    levels.push(LocalLevel::Point { xi, e: 1 });
                    if p <= 5 {
                        levels.push(LocalLevel::Point { xi, e: 2 });
                    }
                }
                for level in levels {
                    out.push(LocalFactorSpec::new(p, t, n, level, s, 0).expect("valid grid point"));
                }
                if t == SplitType::Split && n == 0 {
                    for tau in [1, 2] {
                        out.push(LocalFactorSpec::new(p, t, 0, LocalLevel::Trivial, s, tau).expect("valid grid point"));
                    }
                }
            }
        }
    }
    out
}

fn show_spec(sp: &LocalFactorSpec) -> String {
    format!("p={} type={:?} n={} level={:?} tau={} s={}", sp.p, sp.split_type, sp.n, sp.level, sp.tau, sp.s)
}

fn show_half(sp: &LocalFactorSpec) -> String {
    show_spec(&sp.at(Complex64::new(0.5, 0.0)).expect("Re s > 0"))
}

pub fn local_lfactors(max_p: u64) -> SuiteReport {
    let grid = lfactor_grid(max_p);
    collect(Suite::LocalLfactors, &grid, |base| {
        let mut out = Vec::new();
        for (re, im) in S_GRID {
            let sp = base.at(Complex64::new(re, im)).expect("Re s > 0");
            let closed = local_factor_closed(&sp);
            let oracle = local_factor_oracle_adaptive(&sp, 1e-11);
            match (closed, oracle) {
                (Ok(a), Ok(o)) if (a - o.value).norm() <= LFACTOR_TOLERANCE => {}
                (Ok(a), Ok(o)) => out.push(fail("lfunc", "local_factor_closed", show_spec(&sp), o.value, a)),
                (a, o) => out.push(fail("lfunc", "local_factor_closed", show_spec(&sp), format!("{o:?}"), format!("{a:?}"))),
            }
        }
        if base.tau == 0 {
            let one = base.at(Complex64::new(1.0, 0.0)).expect("s = 1");
            match local_factor_at_one(&one) {
                Ok(l) => {
                    let v = l * level_unit_measure(&one) * rat(one.f_v() as i64, 1);
                    if v != rat(1, 1) {
                        out.push(fail("lfunc", "local_factor_at_one", show_spec(&one), "L(1)·m(Λ^×(x))·f = 1", v));
                    }
                }
                Err(e) => out.push(fail("lfunc", "local_factor_at_one", show_spec(&one), "value", e)),
            }
            match half_bounds(base) {
                Ok(h) if h.holds_corrected() => {}
                Ok(h) => out.push(fail("lfunc", "half_bounds", show_half(base), format!("≤ {}", h.corrected), h.value)),
                Err(e) => out.push(fail("lfunc", "half_bounds", show_half(base), "bound", e)),
            }
        }
        out
    })
}

/// The s = 1/2 bounds exactly as stated (2√n and 4n at places where x_w ∈ 𝒪_w).
pub fn half_bounds_stated(max_p: u64) -> SuiteReport {
    let grid: Vec<LocalFactorSpec> = lfactor_grid(max_p).into_iter().filter(|s| s.tau == 0).collect();
    collect(Suite::HalfBounds, &grid, |sp| match half_bounds(sp) {
        Ok(h) if h.holds() => vec![],
        Ok(h) => vec![fail("lfunc", "half_bounds", show_half(sp), format!("≤ {}", h.stated), h.value)],
        Err(e) => vec![fail("lfunc", "half_bounds", show_half(sp), "bound", e)],
    })
}

/// Smallest prime split in E and prime to f·N.
pub fn split_prime(l: &LevelStructure) -> u64 {
    (2u64..).find(|&p| is_prime(p) && l.order.chi(p) == 1 && (l.order.f * l.n) % p != 0).expect("split primes exist")
}

pub fn counting(p: &VerifyParams) -> SuiteReport {
    let levels = all_levels(p.count_disc.min(p.max_disc), p.max_level);
    let window = NormWindow::norms(0.0, p.norm_max).expect("valid window");
    collect(Suite::Counting, &levels, |l| {
        let p1 = split_prime(l);
        let taus = [0, 1, 2];
        let got = count_variants(l, 1, &window, Some(p1), &taus);
        let want = oracle_variants(l, &window, Some(p1), &taus);
        match (got, want) {
            (Ok(g), Ok(w)) => g
                .iter()
                .zip(&w)
                .flat_map(|(g, w)| {
                    let inputs = format!("{} window=[0,{}] p1={p1} tau={}", show(l), p.norm_max, g.tau);
                    let mut out = Vec::new();
                    if g.all != w.all {
                        out.push(fail("ideal_counting", "count_by_norm", inputs.clone(), format!("total {}", w.all.total()), format!("total {}", g.all.total())));
                    }
                    if g.pg != w.pg {
                        out.push(fail("ideal_counting", "count_by_norm(pg)", inputs, format!("total {}", w.pg.total()), format!("total {}", g.pg.total())));
                    }
                    out
                })
                .collect(),
            (g, w) => vec![fail("ideal_counting", "count_by_norm", show(l), format!("{:?}", w.err()), format!("{:?}", g.err()))],
        }
    })
}

pub fn genus_index(p: &VerifyParams) -> SuiteReport {
    let levels = all_levels(p.max_disc, p.max_level);
    collect(Suite::GenusIndex, &levels, |l| match pic_with_level_sizes(l) {
        Ok(s) => {
            let bound = 2 * 4u64.pow(omega(l.order.f * l.n));
            if s.index.is_power_of_two() && s.index <= bound {
                vec![]
            } else {
                vec![fail("quad_orders", "pic_with_level_sizes", show(l), format!("power of 2, ≤ {bound}"), s.index)]
            }
        }
        Err(e) => vec![fail("quad_orders", "pic_with_level_sizes", show(l), "sizes", e)],
    })
}

pub fn conductor(p: &VerifyParams) -> SuiteReport {
    let levels = all_levels(p.max_disc, p.max_level);
    collect(Suite::Conductor, &levels, |l| match conductor_bound(l) {
        Ok(r) if r.divides => vec![],
        Ok(r) => vec![fail("lfunc", "conductor_bound", show(l), format!("divides {}", r.bound), r.norm)],
        Err(e) => vec![fail("lfunc", "conductor_bound", show(l), "report", e)],
    })
}

pub fn residue(p: &VerifyParams) -> SuiteReport {
    let levels = all_levels(p.max_disc, p.max_level);
    collect(Suite::Residue, &levels, |l| {
        let spec = match GlobalLSpec::new(*l, 0, p.truncation) {
            Ok(s) => s,
            Err(e) => return vec![fail("lfunc", "residue_bound_check", show(l), "spec", e)],
        };
        let mut out = Vec::new();
        let base = match residue_bound_check(&spec, None) {
            Ok(r) => r,
            Err(e) => return vec![fail("lfunc", "residue_bound_check", show(l), "report", e)],
        };
        if !(base.holds && base.equality) {
            out.push(fail("lfunc", "residue_bound_check", show(l), format!("= {}", base.bound), &base.rational_part));
        }
        let p1 = split_prime(l);
        for tau in [1u32, 2] {
            let b = crate::ideal_counting::Bowen { p1, tau };
            match residue_bound_check(&spec, Some(b)) {
                Ok(r) => {
                    let want = base.rational_part.clone() / Rational::from_integer(num_bigint::BigInt::from(p1).pow(2 * tau));
                    if r.rational_part != want {
                        out.push(fail("lfunc", "residue_bound_check", format!("{} p1={p1} tau={tau}", show(l)), &want, &r.rational_part));
                    }
                }
                Err(e) => out.push(fail("lfunc", "residue_bound_check", format!("{} p1={p1} tau={tau}", show(l)), "report", e)),
            }
        }
        out
    })
}

pub const STATS_DS: [u64; 10] = [1, 2, 3, 5, 6, 101, 257, 1009, 1213, 2029];

pub fn stats(seed: u64) -> SuiteReport {
    collect(Suite::Stats, &STATS_DS, |&d| {
        let mut out = Vec::new();
        let inputs = format!("D={d}");
        let p = match embed_packet(d) {
            Ok(p) => p,
            Err(e) => return vec![fail("stats", "embed_packet", inputs, "embedding", e)],
        };
        for r in &p.records {
            let norm = r.sphere.iter().map(|x| x * x).sum::<f64>().sqrt();
            let ok = (norm - 1.0).abs() <= 1e-12
                && r.tau.re.abs() <= 0.5
                && r.tau.norm() >= 1.0 - 1e-12
                && r.fiber.iter().all(|t| (0.0..1.0).contains(t))
                && r.tors[0].denom().lcm(r.tors[1].denom()) == d.into();
            if !ok {
                out.push(fail("stats", "embed_packet", format!("D={d} orbit={}", r.orbit_id), "invariants", format!("{r:?}")));
            }
        }
        let sphere = p.full_sphere();
        let a = weyl_sums_sphere(&sphere, 6).expect("nonempty");
        let b = weyl_sums_sphere_pairwise(&sphere, 6).expect("nonempty");
        for l in 0..=6 {
            if (a[l] * a[l] - b[l] * b[l]).abs() > 1e-12 || (l % 2 == 1 && a[l] > 1e-13) || (l == 0 && a[0] != 1.0) {
                out.push(fail("stats", "weyl_sums_sphere", format!("D={d} l={l}"), b[l], a[l]));
            }
        }
        let exact: Vec<[Rational; 2]> = p.records.iter().map(|r| r.tors.clone()).collect();
        let f = fiber_exponential_sums(&p.fiber_points(), 2).expect("nonempty");
        let g = fiber_exponential_sums_exact(&exact, 2).expect("nonempty");
        for ((m, x), (_, y)) in f.iter().zip(&g) {
            if (x - y).abs() > 1e-12 {
                out.push(fail("stats", "fiber_exponential_sums", format!("D={d} m={m:?}"), y, x));
            }
        }
        // shuffled input order
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ d);
        let mut shuffled = sphere.clone();
        shuffled.shuffle(&mut rng);
        let s = weyl_sums_sphere(&shuffled, 6).expect("nonempty");
        if a.iter().zip(&s).any(|(x, y)| (x - y).abs() > 1e-12) {
            out.push(fail("stats", "weyl_sums_sphere", format!("D={d} shuffled seed={seed}"), format!("{a:?}"), format!("{s:?}")));
        }
        let mut fib = p.fiber_points();
        fib.shuffle(&mut rng);
        let fs = fiber_exponential_sums(&fib, 2).expect("nonempty");
        if f.iter().zip(&fs).any(|((_, x), (_, y))| (x - y).abs() > 1e-12) {
            out.push(fail("stats", "fiber_exponential_sums", format!("D={d} shuffled seed={seed}"), "same sums", "different"));
        }
        let again = embed_packet(d).ok().and_then(|q| stats_csv(&[q]).ok());
        if stats_csv(std::slice::from_ref(&p)).ok() != again {
            out.push(fail("stats", "stats_csv", inputs, "identical bytes", "different"));
        }
        out
    })
}
