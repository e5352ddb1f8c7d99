//! Local orbit counts at a prime p dividing disc·N·ord(y).
//!
//! With E = val_p(N·ord y) put γ = p^E α. Then α_p ∈ x_p + (1/ord y)Λ_p becomes
//! γ ∈ ρ + p^{e_N}Λ_p, and Λ_p^×(x) acts freely on such γ by multiplication. Every nonzero
//! γ ∈ 𝒪_p is γ₀·u for a unique valuation type γ₀ and u ∈ 𝒪_p^×, so the orbits of a type
//! number |{u ∈ (𝒪/p^K)^× : γ₀u admissible}| / |image of Λ_p^×(x)|.

use std::collections::{BTreeMap, HashMap};

use crate::arith::int::{kronecker, mod_inverse, pow, val};
use crate::error::{domain, Error, Result};
use crate::quad_orders::ring::{El, QuadRing};
use crate::quad_orders::{local_norm_data, LevelStructure, LocalNormData};

pub(crate) struct LocalTable {
    pub p: u64,
    nd: LocalNormData,
    /// class_of for every residue mod p^m
    cls: Vec<i64>,
    inv_l2: i64,
    /// [variant][val_p(k)] → (all orbits, orbits per norm class)
    by_val: Vec<Vec<(u64, Vec<(i64, u64)>)>>,
}

impl LocalTable {
    pub fn new(level: &LevelStructure, y_order: u64, p: u64, kmax: u64, depths: &[u32]) -> Result<Self> {
        let order = level.order;
        let maximal = order.maximal();
        let (to, no) = maximal.omega_tn();
        let n = val(p, order.f as i128);
        let e_n = val(p, level.n as i128);
        let e_m = val(p, y_order as i128);
        let e = e_n + e_m;
        let nd = local_norm_data(level, p);
        let max_depth = depths.iter().copied().max().unwrap_or(0);
        let k = (e_n + n).max(nd.m).max(e + max_depth).max(1);
        let q = pow(p, k);
        if q * q > 20_000_000 {
            return Err(Error::TooLarge(format!("local ring 𝒪/{p}^{k} too large")));
        }
        let q = q as i64;
        let ring = QuadRing::new(q, to, no);

        // Λ-coordinates → 𝒪-coordinates: ω_Λ = c0 + f·ω_𝒪
        let c0 = (order.disc.rem_euclid(2) - order.f as i64 * maximal.disc.rem_euclid(2)) / 2;
        let xi = ring.red((level.xi.0 + level.xi.1 * c0, level.xi.1 * order.f as i64));
        let l = level.n * y_order;
        let l_prime = (l / pow(p, e) as u64) as i128;
        let n_prime = (level.n / pow(p, e_n) as u64) as i128;
        let inv_n = mod_inverse(n_prime, q as i128).expect("coprime") as i64;
        let rho = ring.mul(ring.red((pow(p, e_m) as i64 * inv_n, 0)), xi);
        let pe_n = pow(p, e_n) as i64;
        let pe_nn = pow(p, e_n + n) as i64;
        let pn = pow(p, n) as i64;
        // d ∈ p^{e_N}Λ_p
        let in_lattice = |d: El| d.0 % pe_n == 0 && d.1 % pe_nn == 0;

        let units = ring.units(p as i64);
        let hbar = units
            .iter()
            .filter(|&&u| u.1 % pn == 0 && in_lattice(ring.mul(ring.sub(u, (1, 0)), xi)))
            .count() as u64;
        let unit_norms: Vec<i64> = units.iter().map(|&u| ring.norm(u) % nd.modulus).collect();
        let p_i = p as i64;
        let cls: Vec<i64> = (0..nd.modulus).map(|u| if u % p_i == 0 { 0 } else { nd.class_of(u) }).collect();

        // valuation types (γ₀, unit part of Nr γ₀, val_p Nr γ₀)
        let vk_max = {
            let mut v = 0u32;
            let mut t = p;
            while t <= kmax {
                v += 1;
                t = t.saturating_mul(p);
            }
            v
        };
        let ppow = |b: u32| if b >= k { 0 } else { pow(p, b) as i64 };
        let mut types: Vec<(El, i64, u32)> = Vec::new();
        match kronecker(maximal.d_fund as i128, p as i128) {
            1 => {
                let roots: Vec<i64> = (0..q).filter(|&r| ring.norm((-r, 1)) == 0).collect();
                if roots.len() != 2 {
                    return domain(format!("expected two roots of the minimal polynomial mod {p}^{k}"));
                }
                let inv = mod_inverse((roots[0] - roots[1]) as i128, q as i128).expect("unit") as i64;
                let e1 = ring.red((-roots[1] * inv, inv));
                let e2 = ring.sub((1, 0), e1);
                for b1 in 0..=vk_max {
                    for b2 in 0..=vk_max - b1 {
                        let g = ring.add(ring.mul((ppow(b1), 0), e1), ring.mul((ppow(b2), 0), e2));
                        types.push((g, 1, b1 + b2));
                    }
                }
            }
            -1 => {
                for b in 0..=vk_max / 2 {
                    types.push(((ppow(b), 0), 1, 2 * b));
                }
            }
            _ => {
                let a = (0..p as i64)
                    .find(|&a| val(p, maximal.norm(a as i128, 1)) == 1)
                    .ok_or_else(|| Error::Domain(format!("no uniformizer at {p}")))?;
                let nr_pi = maximal.norm(a as i128, 1);
                let cu = ((nr_pi / p as i128).rem_euclid(nd.modulus as i128)) as i64;
                let mut g: El = (1, 0);
                let mut c: i64 = 1 % nd.modulus;
                for b in 0..=vk_max {
                    types.push((g, c, b));
                    g = ring.mul(g, ring.red((a, 1)));
                    c = ((c as i128 * cu as i128) % nd.modulus as i128) as i64;
                }
            }
        }

        let mut cache: HashMap<(El, i64, u32), Vec<(i64, u64)>> = HashMap::new();
        let mut by_val = Vec::with_capacity(depths.len());
        for &tau in depths {
            let pd = pow(p, e + tau) as i64;
            let mut per_val: Vec<BTreeMap<i64, u64>> = vec![BTreeMap::new(); vk_max as usize + 1];
            for &(g0, c, v) in &types {
                let tally = cache.entry((g0, c, tau)).or_insert_with(|| {
                    let mut t: BTreeMap<i64, u64> = BTreeMap::new();
                    for (u, &nu) in units.iter().zip(&unit_norms) {
                        let g = ring.mul(g0, *u);
                        if tau > 0 && (g.0 % pd != 0 || g.1 % pd != 0) {
                            continue;
                        }
                        if in_lattice(ring.sub(g, rho)) {
                            let r = (c as i128 * nu as i128) % nd.modulus as i128;
                            *t.entry(cls[r as usize]).or_default() += 1;
                        }
                    }
                    t.into_iter().collect()
                });
                for &(cls, cnt) in tally.iter() {
                    if cnt % hbar != 0 {
                        return Err(Error::Domain(format!("non-free orbit count at p = {p}")));
                    }
                    *per_val[v as usize].entry(cls).or_default() += cnt / hbar;
                }
            }
            by_val.push(
                per_val
                    .into_iter()
                    .map(|m| (m.values().sum(), m.into_iter().filter(|e| e.1 > 0).collect()))
                    .collect(),
            );
        }
        let l2 = (l_prime * l_prime).rem_euclid(nd.modulus as i128);
        let inv_l2 = mod_inverse(l2, nd.modulus as i128).expect("coprime") as i64;
        Ok(LocalTable { p, nd, cls, inv_l2, by_val })
    }

    /// Orbit counts per norm class (class of the unit part of Nr γ) for val_p(k) = e.
    pub fn classes(&self, variant: usize, e: u32) -> &[(i64, u64)] {
        self.by_val[variant].get(e as usize).map_or(&[], |v| v.1.as_slice())
    }

    /// The norm class an ideal of norm k (with k/p^e = unit) must have to lie in the principal genus.
    pub fn target_class(&self, unit: u64) -> i64 {
        // the table has one entry per residue, so the modulus is far below 2^32
        let m = self.nd.modulus as u64;
        self.cls[((unit % m) * self.inv_l2 as u64 % m) as usize]
    }

    /// (all, principal-genus) orbit counts for val_p(k) = e and k/p^e = unit.
    pub fn lookup(&self, variant: usize, e: u32, unit: u64) -> (u64, u64) {
        let Some((all, classes)) = self.by_val[variant].get(e as usize) else {
            return (0, 0);
        };
        if *all == 0 {
            return (0, 0);
        }
        // the table has one entry per residue, so the modulus is far below 2^32
        let m = self.nd.modulus as u64;
        let u = ((unit % m) * self.inv_l2 as u64 % m) as i64;
        let target = self.cls[u as usize];
        let pg = classes.iter().find(|c| c.0 == target).map_or(0, |c| c.1);
        (*all, pg)
    }
}
