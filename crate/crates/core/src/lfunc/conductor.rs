//! The conductor of Λ_f^×(x): at each p | f·N the smallest ∏𝔭^{a_𝔭} with
//! ∏(1 + 𝔭^{a_𝔭}) ⊆ Λ_p^×(x) (𝒪_𝔭^× when a_𝔭 = 0), found by enumerating 𝒪/p^K.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::model::Model;
use super::{LocalFactorSpec, SplitType};
use crate::arith::int::prime_divisors;
use crate::error::Result;
use crate::quad_orders::LevelStructure;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalConductor {
    pub p: u64,
    /// a_𝔭 for the primes 𝔭 | p (two when p splits)
    pub exponents: Vec<u32>,
    /// 𝔭-adic valuation of f·(𝒪_E : ȷ(x))
    pub bound_exponents: Vec<u32>,
    /// the admissible exponent vectors have a single minimal element
    pub unique: bool,
    pub divides: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConductorReport {
    pub local: Vec<LocalConductor>,
    /// Nr 𝔠
    pub norm: u128,
    /// f²·Nr(𝒪_E : ȷ(x))
    pub bound: u128,
    pub divides: bool,
}

/// Exponent of 𝔭 from the norm exponent j_w.
fn to_prime_units(split: SplitType, j: u32) -> u32 {
    if split == SplitType::Inert {
        j / 2
    } else {
        j
    }
}

fn local_conductor(level: &LevelStructure, p: u64) -> Result<LocalConductor> {
    let spec = LocalFactorSpec::at_prime(level, p, Complex64::new(2.0, 0.0))?;
    let m = Model::new(&spec);
    let k = (m.e + m.n).max(1);
    let q = m.q(k);
    let d = m.degree();
    let cap = if m.split == SplitType::Ramified { 2 * k } else { k };
    let places = if m.split == SplitType::Split { 2 } else { 1 };
    // depth vectors of units outside Λ_p^×(x)
    let mut bad: BTreeSet<Vec<u32>> = BTreeSet::new();
    for a in 0..q {
        for b in 0..q {
            let lam = (a, b);
            if m.norm(lam).rem_euclid(m.pi) == 0 {
                continue;
            }
            let inside = lam.1.rem_euclid(m.q(m.n)) == 0 && m.in_lattice(m.mul((a - 1, b), m.xi), m.e);
            if inside {
                continue;
            }
            let depth: Vec<u32> = m
                .exponents(m.red((a - 1, b), q), k * d)
                .into_iter()
                .map(|j| to_prime_units(m.split, j).min(cap))
                .collect();
            bad.insert(depth);
        }
    }
    let admissible = |a: &[u32]| bad.iter().all(|dv| dv.iter().zip(a).any(|(&x, &y)| x < y));
    let weight = if m.split == SplitType::Inert { 2 } else { 1 };
    let candidates: Vec<Vec<u32>> = if places == 2 {
        (0..=cap).flat_map(|x| (0..=cap).map(move |y| vec![x, y])).collect()
    } else {
        (0..=cap).map(|x| vec![x]).collect()
    };
    let ok: Vec<Vec<u32>> = candidates.into_iter().filter(|a| admissible(a)).collect();
    let minimal: Vec<&Vec<u32>> = ok
        .iter()
        .filter(|a| !ok.iter().any(|b| b != *a && b.iter().zip(a.iter()).all(|(x, y)| x <= y)))
        .collect();
    let best = minimal
        .iter()
        .min_by_key(|a| (a.iter().sum::<u32>() * weight, (**a).clone()))
        .map(|a| (*a).clone())
        .expect("1 + p^K𝒪 always lies in Λ_p^×(x)");
    let bound_exponents: Vec<u32> = m
        .exponents(m.xi, 4 * (m.e + 1) * d)
        .into_iter()
        .map(|j| {
            let x = to_prime_units(m.split, j);
            let e_w = if m.split == SplitType::Ramified { 2 * m.e } else { m.e };
            let n_w = if m.split == SplitType::Ramified { 2 * m.n } else { m.n };
            n_w + e_w.saturating_sub(x)
        })
        .collect();
    let bound_exponents = if m.e == 0 {
        vec![if m.split == SplitType::Ramified { 2 * m.n } else { m.n }; places]
    } else {
        bound_exponents
    };
    let capped: Vec<u32> = bound_exponents.iter().map(|&b| b.min(cap)).collect();
    let divides = admissible(&capped);
    Ok(LocalConductor { p, exponents: best, bound_exponents, unique: minimal.len() == 1, divides })
}

/// 𝔠(Λ_f^×(x)) prime by prime, with the divisibility 𝔠 | f·(𝒪_E : ȷ(x)) checked.
pub fn conductor_bound(level: &LevelStructure) -> Result<ConductorReport> {
    let primes = prime_divisors(level.order.f * level.n);
    let local: Vec<LocalConductor> = primes.iter().map(|&p| local_conductor(level, p)).collect::<Result<_>>()?;
    let mut norm = 1u128;
    let mut bound = 1u128;
    for lc in &local {
        let p = lc.p as u128;
        let w = if level.order.chi(lc.p) == -1 { 2 } else { 1 };
        norm *= p.pow(lc.exponents.iter().sum::<u32>() * w);
        bound *= p.pow(lc.bound_exponents.iter().sum::<u32>() * w);
    }
    let divides = local.iter().all(|l| l.divides);
    Ok(ConductorReport { local, norm, bound, divides })
}
