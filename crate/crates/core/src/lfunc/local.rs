//! Closed forms for the local factors.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::model::Model;
use super::LocalFactorSpec;
use crate::arith::Rational;
use crate::error::{domain, invalid, Result};
use crate::quad_orders::local_unit_index;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

impl SplitType {
    pub fn chi(self) -> i32 {
        match self {
            SplitType::Split => 1,
            SplitType::Inert => -1,
            SplitType::Ramified => 0,
        }
    }

    pub fn from_chi(c: i32) -> Self {
        match c {
            1 => SplitType::Split,
            -1 => SplitType::Inert,
            _ => SplitType::Ramified,
        }
    }

    pub const ALL: [SplitType; 3] = [SplitType::Split, SplitType::Inert, SplitType::Ramified];
}

/// Local level datum: trivial, or x_v = ξ/p^e with ξ ∈ Λ \ pΛ given in (1, ω_Λ) coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocalLevel {
    Trivial,
    Point { xi: (i64, i64), e: u32 },
}

/// m(𝒪_v^×), m(Λ_v^×), m(Λ_v) and the ratio m(𝒪_v^×)/m(Λ_v^×).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalVolumes {
    pub maximal_units: Rational,
    pub units: Rational,
    pub lattice: Rational,
    pub unit_ratio: Rational,
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn rpow(p: u64, k: u32) -> Rational {
    Rational::from_integer(BigInt::from(p).pow(k))
}

pub fn local_volume(p: u64, split_type: SplitType, n: u32) -> LocalVolumes {
    let one = Rational::one();
    let inv_p = r(1, p as i64);
    let chi = Rational::from_integer(BigInt::from(split_type.chi()));
    let maximal_units = (&one - &inv_p) * (&one - &chi * &inv_p);
    let f = rpow(p, n);
    let units = if n == 0 { maximal_units.clone() } else { (&one - &inv_p) / &f };
    let lattice = &one / &f;
    let unit_ratio = &maximal_units / &units;
    LocalVolumes { maximal_units, units, lattice, unit_ratio }
}

/// p^{−z}
pub(crate) fn pw(p: f64, z: Complex64) -> Complex64 {
    (-z * p.ln()).exp()
}

/// L_𝒪(s) = ∏_{w|v} (1 − |ϖ_w|^s)^{−1}.
pub(crate) fn maximal_factor(p: f64, chi: i32, s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match chi {
        1 => one / (one - pw(p, s)).powi(2),
        -1 => one / (one - pw(p, 2.0 * s)),
        _ => one / (one - pw(p, s)),
    }
}

fn maximal_at_one(p: u64, chi: i32) -> Rational {
    let one = Rational::one();
    let inv_p = r(1, p as i64);
    one.clone() / ((&one - &inv_p) * (&one - Rational::from_integer(BigInt::from(chi)) * &inv_p))
}

fn is_half(s: Complex64) -> bool {
    s.re == 0.5 && s.im == 0.0
}

/// Σ_{a ∈ ℤ/pⁿ} ∏_{w|v} t_w(a) for the level point, with
/// t_w = |x_w + a|_w^{s−1} if x_w + a ∉ f𝒪_w and |f|_w^{s−1}(1−p^{−1})/(1−p^{−s}) otherwise.
fn level_sum(m: &Model, s: Complex64) -> Result<Complex64> {
    let p = m.p as f64;
    let one = Complex64::new(1.0, 0.0);
    let d = m.degree();
    let full = (m.e + m.n) * d;
    let pe = m.q(m.e);
    let mut total = Complex64::new(0.0, 0.0);
    for a in 0..m.q(m.n) {
        let z = (m.xi.0 + a * pe, m.xi.1);
        let mut prod = one;
        for j in m.exponents(z, full) {
            prod *= if j >= full {
                if d != 1 {
                    return domain("x_v + a ∈ f𝒪_v at a non-split place");
                }
                pw(p, (m.n as f64) * (s - 1.0)) * (1.0 - 1.0 / p) / (one - pw(p, s))
            } else {
                // |x_w + a|_w = p^{e·d − j}
                pw(p, (j as f64 - (m.e * d) as f64) * (s - 1.0))
            };
        }
        total += prod;
    }
    Ok(total)
}

/// [Λ_v^× : Λ_v^×(x)] for the level point (1 for trivial level).
fn unit_index(spec: &LocalFactorSpec) -> Result<u64> {
    match spec.level {
        super::LocalLevel::Trivial => Ok(1),
        super::LocalLevel::Point { .. } => local_unit_index(&spec.level_structure(), spec.p),
    }
}

/// The closed form of the local factor L_{Λ_v(x)}(s).
pub fn local_factor_closed(spec: &LocalFactorSpec) -> Result<Complex64> {
    let s = spec.s;
    if s.re <= 0.0 {
        return invalid("Re s must be positive");
    }
    let p = spec.p as f64;
    let chi = spec.chi();
    let one = Complex64::new(1.0, 0.0);
    let lo = maximal_factor(p, chi, s);
    if spec.tau > 0 {
        return Ok(pw(p, 2.0 * spec.tau as f64 * s) * lo);
    }
    let n = spec.n;
    match spec.level {
        LocalLevel::Trivial if n == 0 => Ok(lo),
        LocalLevel::Trivial => {
            let f = p.powi(n as i32);
            if is_half(s) {
                let half = Complex64::new(0.5, 0.0);
                let lo1 = maximal_factor(p, chi, one);
                return Ok(n as f64 + maximal_factor(p, chi, half) / ((1.0 - 1.0 / p) * lo1));
            }
            let w = 2.0 * s - 1.0;
            let geo = if w.norm() < 1e-6 {
                (0..n).map(|k| pw(p, k as f64 * w)).sum()
            } else {
                (one - pw(f, w)) / (one - pw(p, w))
            };
            Ok(geo + pw(f, w) * (1.0 - chi as f64 / p) * lo)
        }
        LocalLevel::Point { .. } => {
            let m = Model::new(spec);
            let sum = level_sum(&m, s)?;
            let vol = local_volume(spec.p, spec.split_type, n);
            let mx = vol.units.to_f64().expect("finite") / unit_index(spec)? as f64;
            let f = p.powi(n as i32);
            Ok(sum / (f * f * mx))
        }
    }
}

/// The closed form at s = 1 in exact arithmetic.
pub fn local_factor_at_one(spec: &LocalFactorSpec) -> Result<Rational> {
    let p = spec.p;
    let chi = spec.chi();
    let lo = maximal_at_one(p, chi);
    if spec.tau > 0 {
        return Ok(lo / rpow(p, 2 * spec.tau));
    }
    let one = Rational::one();
    let n = spec.n;
    let f = rpow(p, n);
    let inv_p = r(1, p as i64);
    match spec.level {
        LocalLevel::Trivial if n == 0 => Ok(lo),
        LocalLevel::Trivial => {
            let chi_r = Rational::from_integer(BigInt::from(chi));
            Ok((&one - &one / &f) / (&one - &inv_p) + (&one / &f) * (&one - chi_r * &inv_p) * lo)
        }
        LocalLevel::Point { .. } => {
            // at s = 1 both branches of t_w equal 1, so the sum over a ∈ ℤ/pⁿ is pⁿ
            let sum = f.clone();
            let vol = local_volume(p, spec.split_type, n);
            let mx = vol.units / Rational::from_integer(BigInt::from(unit_index(spec)?));
            Ok(sum / (&f * &f * mx))
        }
    }
}

/// m(Λ_v^×(x))·f_v·L(1/2) against the bounds for s = 1/2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfBounds {
    pub value: f64,
    /// The bound as stated: n + 3 at trivial level; with level, per place |x_w|^{−1/2} when
    /// x_w ∉ 𝒪_w and otherwise 2√n (split) or 4n (non-split).
    pub stated: f64,
    /// The same bound with the count of k ∈ [0, 2n] corrected to 2n + 1 terms.
    pub corrected: f64,
}

impl HalfBounds {
    pub fn holds(&self) -> bool {
        self.value > 0.0 && self.value <= self.stated * (1.0 + 1e-12)
    }

    pub fn holds_corrected(&self) -> bool {
        self.value > 0.0 && self.value <= self.corrected * (1.0 + 1e-12)
    }
}

pub fn half_bounds(spec: &LocalFactorSpec) -> Result<HalfBounds> {
    if spec.tau > 0 {
        return invalid("the s = 1/2 bounds are stated without Bowen depth");
    }
    let half = spec.at(Complex64::new(0.5, 0.0))?;
    let l = local_factor_closed(&half)?.re;
    let n = spec.n;
    let vol = local_volume(spec.p, spec.split_type, n);
    let mx = vol.units.to_f64().expect("finite") / unit_index(spec)? as f64;
    let f = (spec.p as f64).powi(n as i32);
    let value = mx * f * l;
    let nf = n as f64;
    let (stated, corrected) = match spec.level {
        LocalLevel::Trivial => (nf + 3.0, nf + 3.0),
        LocalLevel::Point { .. } => {
            let m = Model::new(spec);
            let d = m.degree();
            let mut st = 1.0;
            let mut co = 1.0;
            for j in m.exponents(m.xi, m.e * d) {
                if j < m.e * d {
                    // |x_w|_w^{−1/2}
                    let x = (spec.p as f64).powf(-((m.e * d - j) as f64) / 2.0);
                    st *= x;
                    co *= x;
                } else if d == 1 {
                    st *= 2.0 * nf.sqrt();
                    co *= 2.0 * (2.0 * nf + 1.0).sqrt();
                } else {
                    st *= 4.0 * nf;
                    co *= 4.0 * (2.0 * nf + 1.0);
                }
            }
            (st, co)
        }
    };
    Ok(HalfBounds { value, stated, corrected })
}
