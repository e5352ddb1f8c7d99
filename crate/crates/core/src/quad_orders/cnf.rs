//! Class number formula with level: |Pic^pg(Λ,x)| / |Λ^×(x)| against the analytic side.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use super::{pic_with_level_sizes, LevelStructure, PicSizes};
use crate::arith::int::{kronecker, prime_divisors};
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LValue {
    pub value: f64,
    /// Bound on |L(1,χ) − value|.
    pub remainder: f64,
}

/// L(1, χ_d) from the first `terms` terms plus a mean-value tail correction.
///
/// With A(t) = Σ_{n≤t} χ(n) (period q = |d|, mean μ over a period) and X a multiple of q,
/// Σ_{n>X} χ(n)/n = μ/X + O(q·max|A − μ|/X²).
pub fn l1_chi(d: i64, terms: u64) -> LValue {
    static CACHE: OnceLock<RwLock<HashMap<(i64, u64), LValue>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().expect("lock").get(&(d, terms)) {
        return *v;
    }
    let q = d.unsigned_abs();
    let chi: Vec<i32> = (0..q).map(|a| kronecker(d as i128, a as i128)).collect();
    let x = terms / q * q;
    let mut s = 0.0f64;
    // summing from the small end keeps the rounding error near x·ε
    for n in 1..=x {
        let c = chi[(n % q) as usize];
        if c != 0 {
            s += c as f64 / n as f64;
        }
    }
    let mut a = 0i64;
    let mut partial = Vec::with_capacity(q as usize);
    for k in 0..q {
        a += chi[k as usize] as i64;
        partial.push(a);
    }
    // A(t) on [k, k+1) equals partial[k]; partial[0] = 0
    let mu = partial.iter().sum::<i64>() as f64 / q as f64;
    let maxdev = partial.iter().map(|&p| (p as f64 - mu).abs()).fold(0.0, f64::max);
    let value = s + mu / x as f64;
    let remainder = q as f64 * maxdev / (x as f64 * x as f64) + x as f64 * f64::EPSILON;
    let v = LValue { value, remainder };
    cache.write().expect("lock").insert((d, terms), v);
    v
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CnfReport {
    pub level: LevelStructure,
    pub sizes: PicSizes,
    pub lhs: f64,
    pub rhs: f64,
    pub l1: LValue,
    pub conductor_factor: f64,
    pub relative_deviation: f64,
}

pub fn class_number_formula_check(level: &LevelStructure, truncation: u64) -> Result<CnfReport> {
    if truncation < 1000 {
        return invalid("truncation below 10^3 is meaningless");
    }
    let sizes = pic_with_level_sizes(level)?;
    let order = level.order;
    let lhs = sizes.pic_pg as f64 / sizes.level_units as f64;
    let l1 = l1_chi(order.d_fund, truncation);
    let conductor_factor: f64 =
        prime_divisors(order.f).iter().map(|&p| 1.0 - order.chi(p) as f64 / p as f64).product();
    let unit_index_prod: u64 = sizes.local.iter().map(|l| l.1).product();
    // w_E / |𝒪_E^×| = 1: both count the roots of unity of E
    let rhs = (order.disc.unsigned_abs() as f64).sqrt() * l1.value * conductor_factor * unit_index_prod as f64
        / (2.0 * PI * sizes.index as f64);
    Ok(CnfReport {
        level: *level,
        relative_deviation: (lhs - rhs).abs() / lhs,
        sizes,
        lhs,
        rhs,
        l1,
        conductor_factor,
    })
}
