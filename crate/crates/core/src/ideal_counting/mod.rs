//! Counting ideals with level structure by norm.
//!
//! An ideal with level is an idele class α ∈ 𝔸_f^× / ∏_p Λ_p^×(x) with α_p ∈ x_p + Λ_p for
//! every p. Its norm is the positive rational Nr α. [`count_by_norm`] multiplies local orbit
//! counts; [`lattice_oracle_count`] enumerates lattice points class by class in Pic(Λ,x).
//! The two routes share nothing beyond the order arithmetic.

pub(crate) mod local;
mod oracle;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::int::is_prime;
use crate::arith::{Bqf, Rational};
use crate::error::{invalid, Error, Result};
use crate::quad_orders::{LevelStructure, QuadOrder};

pub use oracle::{lattice_oracle_count, level_classes, oracle_variants, principal_genus_classes, MAX_POINTS};

/// Largest norm numerator k = n·L² either route will scan.
pub const MAX_KEY: u64 = 50_000_000;

/// A class in Pic(Λ,x): the form of the underlying ideal, the norm of the chosen
/// representative ideal, and the residue κ ∈ (Λ/N)^× of its generator at the level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealLevelClass {
    pub form: Bqf,
    pub norm: Rational,
    pub residue: (i64, i64),
}

/// Norm window [lower, upper] with lower = √|D|·x_min², upper = √|D|·x_max².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormWindow {
    pub x_min: f64,
    pub x_max: f64,
    pub lower: f64,
    pub upper: f64,
}

impl NormWindow {
    pub fn new(x_min: f64, x_max: f64, disc: i64) -> Result<Self> {
        if !(0.0 <= x_min && x_min <= x_max && x_max.is_finite()) {
            return invalid(format!("bad window x_min = {x_min}, x_max = {x_max}"));
        }
        let s = (disc.unsigned_abs() as f64).sqrt();
        Ok(NormWindow { x_min, x_max, lower: s * x_min * x_min, upper: s * x_max * x_max })
    }

    /// Window given directly by its norm bounds (x_min, x_max are reported as NaN-free zeros).
    pub fn norms(lower: f64, upper: f64) -> Result<Self> {
        if !(0.0 <= lower && lower <= upper && upper.is_finite()) {
            return invalid(format!("bad norm window [{lower}, {upper}]"));
        }
        Ok(NormWindow { x_min: 0.0, x_max: 0.0, lower, upper })
    }

    /// Does k/den lie in the window? Both counting routes use this one comparison.
    pub fn contains(&self, k: u64, den: u64) -> bool {
        let d = den as f64;
        k as f64 >= self.lower * d && k as f64 <= self.upper * d
    }

    pub(crate) fn max_key(&self, den: u64) -> Result<u64> {
        let k = (self.upper * den as f64).floor();
        if k > MAX_KEY as f64 {
            return Err(Error::TooLarge(format!(
                "window reaches norm numerator {k}; the bound is {MAX_KEY} (upper ≤ {})",
                MAX_KEY as f64 / den as f64
            )));
        }
        Ok(k as u64)
    }
}

/// Counts n ↦ #ideals, stored as numerators k = n·den in increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormCounts {
    pub den: u64,
    pub entries: Vec<(u64, u64)>,
}

impl NormCounts {
    pub fn to_map(&self) -> BTreeMap<Rational, u64> {
        let den = BigInt::from(self.den);
        self.entries.iter().map(|&(k, c)| (Rational::new(BigInt::from(k), den.clone()), c)).collect()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }
}

/// One Bowen depth: counts over all classes and over the principal genus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountVariants {
    pub tau: u32,
    pub all: NormCounts,
    pub pg: NormCounts,
}

/// Bowen restriction: α_{p₁} ∈ p₁^τ 𝒪_{p₁}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bowen {
    pub p1: u64,
    pub tau: u32,
}

pub(crate) fn check_bowen(order: &QuadOrder, p1: u64, level_order: u64) -> Result<()> {
    if !is_prime(p1) {
        return invalid(format!("p₁ = {p1} is not prime"));
    }
    if order.chi(p1) != 1 {
        return invalid(format!("p₁ = {p1} does not split in E"));
    }
    if order.f % p1 == 0 {
        return invalid(format!("p₁ = {p1} divides the conductor"));
    }
    if level_order % p1 == 0 {
        return invalid(format!("p₁ = {p1} divides the level"));
    }
    Ok(())
}

/// The field norm of v = v₀ + v₁ω, checked against √|D|/2 · ‖l⁻¹v‖² for the embedding
/// scaled so that Λ has covolume 1.
pub fn inv_norm(order: &QuadOrder, v: &(Rational, Rational)) -> Result<Rational> {
    if v.0.is_zero() && v.1.is_zero() {
        return invalid("inv_norm of 0");
    }
    let (t, n) = order.omega_tn();
    let (a, b) = v;
    let exact = a * a + a * b * BigInt::from(t) + b * b * BigInt::from(n);
    let to_f = |r: &Rational| {
        let s: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
        s / r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN)
    };
    let root = (order.disc.unsigned_abs() as f64).sqrt();
    let re = to_f(a) + to_f(b) * t as f64 / 2.0;
    let im = to_f(b) * root / 2.0;
    // covolume of Λ ⊂ ℂ is √|D|/2
    let scale = (root / 2.0).sqrt();
    let unit_len2 = (re / scale).powi(2) + (im / scale).powi(2);
    let arch = root / 2.0 * unit_len2;
    let ex = to_f(&exact);
    if !exact.is_positive() || (arch - ex).abs() > 1e-9 * ex.max(1.0) {
        return Err(Error::Domain(format!("norm mismatch: exact {exact}, archimedean {arch}")));
    }
    Ok(exact)
}

/// (v_p(k), k/p^{v_p(k)}) for k ≥ 1.
fn split_power(p: u64, mut k: u64) -> (u32, u64) {
    let mut e = 0;
    while k % p == 0 {
        k /= p;
        e += 1;
    }
    (e, k)
}

/// r(k) = Σ χ(d) over d | k prime to the bad primes and p₁, for k ≤ kmax: the number of
/// ideals of 𝒪_E of norm equal to the good part of k. A divisor sieve, no factoring.
fn good_part(kmax: u64, q: u64, chi: &[i8], bad: &[u64], p1: Option<u64>) -> Vec<u16> {
    let n = kmax as usize;
    let mut coprime = vec![true; n + 1];
    for &p in bad.iter().chain(p1.iter()) {
        for m in (p as usize..=n).step_by(p as usize) {
            coprime[m] = false;
        }
    }
    // |r| ≤ d(k) ≤ 240 below 1.5·10⁶ and stays below 2^15 for k ≤ MAX_KEY
    let mut r = vec![0i16; n + 1];
    let mut c = 0usize;
    for d in 1..=n {
        // c = d mod q
        c += 1;
        if c == q as usize {
            c = 0;
        }
        let x = chi[c] as i16;
        if x == 0 || !coprime[d] {
            continue;
        }
        for m in (d..=n).step_by(d) {
            r[m] += x;
        }
    }
    r.into_iter().map(|v| v as u16).collect()
}

/// Count ideals with level of each norm in the window lying in Λ_f(x, y).
///
/// `y_order` is ord(y); for y_order > 1 the coset x + (1/ord y)Λ is used, which is an upper
/// bound for the y-level set. Norm keys have denominator (N·ord y)².
pub fn count_by_norm(
    level: &LevelStructure,
    y_order: u64,
    window: &NormWindow,
    pg_only: bool,
    bowen: Option<Bowen>,
) -> Result<BTreeMap<Rational, u64>> {
    let tau = bowen.map_or(0, |b| b.tau);
    let v = count_variants(level, y_order, window, bowen.map(|b| b.p1), &[tau])?;
    let c = &v[0];
    Ok(if pg_only { c.pg.to_map() } else { c.all.to_map() })
}

/// All requested Bowen depths, with and without the principal-genus filter, in one pass.
pub fn count_variants(
    level: &LevelStructure,
    y_order: u64,
    window: &NormWindow,
    p1: Option<u64>,
    taus: &[u32],
) -> Result<Vec<CountVariants>> {
    if y_order == 0 {
        return invalid("ord(y) must be positive");
    }
    let order = level.order;
    if let Some(p) = p1 {
        check_bowen(&order, p, level.n * y_order)?;
    }
    let l = level.n * y_order;
    let den = l * l;
    let kmax = window.max_key(den)?;
    let bad: Vec<u64> = crate::arith::int::prime_divisors(order.disc.unsigned_abs() * l);
    let tables: Vec<local::LocalTable> = bad
        .iter()
        .map(|&p| {
            let depths: Vec<u32> = if Some(p) == p1 { taus.to_vec() } else { vec![0; taus.len()] };
            local::LocalTable::new(level, y_order, p, kmax, &depths)
        })
        .collect::<Result<_>>()?;
    let q = order.d_fund.unsigned_abs();
    let chi: Vec<i8> = (0..q).map(|r| crate::arith::int::kronecker(order.d_fund as i128, r as i128) as i8).collect();
    let good = good_part(kmax, q, &chi, &bad, p1);
    let nt = taus.len();
    let mut out: Vec<CountVariants> = taus
        .iter()
        .map(|&tau| CountVariants {
            tau,
            all: NormCounts { den, entries: vec![] },
            pg: NormCounts { den, entries: vec![] },
        })
        .collect();
    let mut all = vec![0u64; nt];
    let mut pg = vec![0u64; nt];
    'k: for k in 1..=kmax {
        let g = good[k as usize] as u64;
        if g == 0 || !window.contains(k, den) {
            continue;
        }
        all.iter_mut().for_each(|x| *x = g);
        pg.iter_mut().for_each(|x| *x = g);
        // Bowen prime outside the bad set: both valuations at p₁ must reach τ
        if let Some(p) = p1 {
            let e = split_power(p, k).0;
            for (i, &tau) in taus.iter().enumerate() {
                let m = (e + 1).saturating_sub(2 * tau) as u64;
                all[i] *= m;
                pg[i] *= m;
            }
        }
        for t in &tables {
            let (e, unit) = split_power(t.p, k);
            for i in 0..nt {
                let (a, g) = t.lookup(i, e, unit);
                all[i] *= a;
                pg[i] *= g;
            }
            if all.iter().all(|&x| x == 0) {
                continue 'k;
            }
        }
        for i in 0..nt {
            if all[i] > 0 {
                out[i].all.entries.push((k, all[i]));
            }
            if pg[i] > 0 {
                out[i].pg.entries.push((k, pg[i]));
            }
        }
    }
    Ok(out)
}
