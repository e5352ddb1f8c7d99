//! Λ_p^×(x), the sizes of Pic(Λ,x) and Pic^pg(Λ,x), and the genus group
//! G = ∏_{p∈S} ℤ_p^× / Nr Λ_p^×(x) through which the principal genus is cut out.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ring::QuadRing;
use super::{class_group, LevelStructure};
use crate::arith::int::{jacobi, pow, val};
use crate::error::{domain, Result};

fn lambda_ring(level: &LevelStructure, k: u32, p: u64) -> QuadRing {
    let (t, n) = level.order.omega_tn();
    QuadRing::new(pow(p, k) as i64, t, n)
}

/// |{λ ∈ (Λ/p^k)^× : (λ−1)ξ ≡ 0 mod p^e}| and |(Λ/p^k)^×|.
fn count_level_units(level: &LevelStructure, p: u64, k: u32, e: u32) -> (u64, u64) {
    let r = lambda_ring(level, k, p);
    let pe = pow(p, e) as i64;
    let xi = r.red(level.xi);
    let mut units = 0;
    let mut fixed = 0;
    for lam in r.elements() {
        if r.norm(lam) % p as i64 == 0 {
            continue;
        }
        units += 1;
        let v = r.mul(r.sub(lam, (1, 0)), xi);
        if v.0 % pe == 0 && v.1 % pe == 0 {
            fixed += 1;
        }
    }
    (units, fixed)
}

/// [Λ_p^× : Λ_p^×(x)] by enumeration in Λ/p^kΛ, k = val_p(N); stability at k + 1 is checked.
pub fn local_unit_index(level: &LevelStructure, p: u64) -> Result<u64> {
    let e = val(p, level.n as i128);
    if e == 0 {
        return Ok(1);
    }
    let (u0, h0) = count_level_units(level, p, e, e);
    let (u1, h1) = count_level_units(level, p, e + 1, e);
    if u0 * h1 != u1 * h0 || u0 % h0 != 0 {
        return domain(format!("unstable unit index at p = {p}"));
    }
    Ok(u0 / h0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalNormData {
    pub p: u64,
    /// Norms are taken modulo p^m; 1 + p^m ℤ_p lies in Nr Λ_p^×(x).
    pub m: u32,
    pub modulus: i64,
    /// Nr Λ_p^×(x) mod p^m.
    pub subgroup: BTreeSet<i64>,
    /// [ℤ_p^× : Nr Λ_p^×(x)]
    pub index: u64,
}

impl LocalNormData {
    /// Canonical representative of the coset u · Nr Λ_p^×(x).
    pub fn class_of(&self, u: i64) -> i64 {
        let u = u.rem_euclid(self.modulus) as i128;
        self.subgroup
            .iter()
            .map(|&s| (u * s as i128 % self.modulus as i128) as i64)
            .min()
            .expect("subgroup contains 1")
    }

    pub fn contains(&self, u: i64) -> bool {
        self.subgroup.contains(&u.rem_euclid(self.modulus))
    }

    /// All coset representatives of (ℤ/p^m)^× / subgroup.
    pub fn cosets(&self) -> Vec<i64> {
        let p = self.p as i64;
        let set: BTreeSet<i64> = (1..self.modulus).filter(|u| u % p != 0).map(|u| self.class_of(u)).collect();
        set.into_iter().collect()
    }
}

pub fn norm_precision(p: u64, e: u32) -> u32 {
    if p == 2 {
        3.max(e + 1)
    } else {
        e.max(1)
    }
}

pub fn local_norm_data(level: &LevelStructure, p: u64) -> LocalNormData {
    let e = val(p, level.n as i128);
    let m = norm_precision(p, e);
    let r = lambda_ring(level, m, p);
    let pe = pow(p, e) as i64;
    let xi = r.red(level.xi);
    let mut subgroup = BTreeSet::new();
    for lam in r.elements() {
        let nr = r.norm(lam);
        if nr % p as i64 == 0 || subgroup.contains(&nr) {
            continue;
        }
        let v = r.mul(r.sub(lam, (1, 0)), xi);
        if v.0 % pe == 0 && v.1 % pe == 0 {
            subgroup.insert(nr);
        }
    }
    let modulus = pow(p, m) as i64;
    let phi = (modulus / p as i64 * (p as i64 - 1)) as u64;
    LocalNormData { p, m, modulus, index: phi / subgroup.len() as u64, subgroup }
}

/// The local component χ_{E,p} on ℤ_p^× (p | d_fund), evaluated on a unit mod p^m.
pub fn chi_local(d_fund: i64, p: u64, u: i64) -> i32 {
    if p != 2 {
        return jacobi(u as i128, p as i128);
    }
    // 2-part of d_fund as a prime discriminant: −4, 8 or −8
    let mut odd_part: i64 = 1;
    for q in crate::arith::int::prime_divisors(d_fund.unsigned_abs()) {
        if q != 2 {
            let q = q as i64;
            odd_part *= if q % 4 == 1 { q } else { -q };
        }
    }
    let d2 = d_fund / odd_part;
    let delta = if u.rem_euclid(4) == 1 { 1 } else { -1 };
    let eps = if matches!(u.rem_euclid(8), 1 | 7) { 1 } else { -1 };
    match d2 {
        -4 => delta,
        8 => eps,
        -8 => delta * eps,
        _ => 1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicSizes {
    pub h: u64,
    pub units: u64,
    pub level_units: u64,
    /// (p, [Λ_p^× : Λ_p^×(x)], [ℤ_p^× : Nr Λ_p^×(x)])
    pub local: Vec<(u64, u64, u64)>,
    pub pic: u64,
    pub pic_pg: u64,
    pub index: u64,
    /// Largest element order in Pic(Λ,x)/Pic^pg(Λ,x) ≅ ker(χ_E on G).
    pub quotient_exponent: u64,
}

/// The genus group: one LocalNormData per p ∈ S.
pub fn genus_group(level: &LevelStructure) -> Vec<LocalNormData> {
    level.bad_primes().into_iter().map(|p| local_norm_data(level, p)).collect()
}

/// Elements of ker(χ_E) ⊂ G as vectors of coset representatives.
pub fn genus_kernel(level: &LevelStructure, g: &[LocalNormData]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for ld in g {
        let cos = ld.cosets();
        out = out.into_iter().flat_map(|v| cos.iter().map(move |&c| [v.clone(), vec![c]].concat())).collect();
    }
    let d = level.order.d_fund;
    out.retain(|v| {
        g.iter()
            .zip(v)
            .filter(|(ld, _)| d % ld.p as i64 == 0)
            .map(|(ld, &c)| chi_local(d, ld.p, c))
            .product::<i32>()
            == 1
    });
    out
}

fn element_order(g: &[LocalNormData], v: &[i64]) -> u64 {
    let mut cur: Vec<i64> = v.to_vec();
    let one: Vec<i64> = g.iter().map(|ld| ld.class_of(1)).collect();
    let mut k = 1;
    while cur != one {
        cur = g.iter().zip(cur.iter().zip(v)).map(|(ld, (&a, &b))| ld.class_of((a as i128 * b as i128 % ld.modulus as i128) as i64)).collect();
        k += 1;
    }
    k
}

pub fn pic_with_level_sizes(level: &LevelStructure) -> Result<PicSizes> {
    let h = class_group(level.order.disc)?.classes.len() as u64;
    let units = level.order.unit_count() as u64;
    let level_units = level.level_unit_count() as u64;
    let g = genus_group(level);
    let mut local = Vec::new();
    let mut prod_idx = 1u64;
    let mut prod_norm = 1u64;
    for ld in &g {
        let ui = local_unit_index(level, ld.p)?;
        prod_idx *= ui;
        prod_norm *= ld.index;
        local.push((ld.p, ui, ld.index));
    }
    let num = h * prod_idx * level_units;
    if num % units != 0 || prod_norm % 2 != 0 {
        return domain("non-integral Pic size");
    }
    let pic = num / units;
    let index = prod_norm / 2;
    if pic % index != 0 {
        return domain(format!("genus index {index} does not divide |Pic| = {pic}"));
    }
    let kernel = genus_kernel(level, &g);
    debug_assert_eq!(kernel.len() as u64, index);
    let quotient_exponent = kernel.iter().map(|v| element_order(&g, v)).max().unwrap_or(1);
    Ok(PicSizes { h, units, level_units, local, pic, pic_pg: pic / index, index, quotient_exponent })
}
