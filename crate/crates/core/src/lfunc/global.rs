//! Global assembly: Dirichlet coefficients of L_{Λ(x)}(s, ψ), truncated values for Re s > 1,
//! genus characters of Pic(Λ,x)/Pic^pg(Λ,x), and the residue at s = 1.
//!
//! Coefficients factor over primes. Away from the bad primes they are the ideal counts of 𝒪_E,
//! taken from the theta series of the reduced forms of discriminant d_E. At bad primes they
//! are local orbit counts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::{local_factor_at_one, local_factor_oracle, LocalFactorSpec, LocalLevel};
use crate::arith::int::{pow, prime_divisors, val};
use crate::arith::Rational;
use crate::error::{invalid, Error, Result};
use crate::ideal_counting::local::LocalTable;
use crate::ideal_counting::{check_bowen, Bowen};
use crate::quad_orders::{class_group, genus_group, genus_kernel, l1_chi, local_unit_index, LValue, LevelStructure};

/// Terms used for L(1, χ_E) on the residue path.
pub const RESIDUE_TERMS: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalLSpec {
    pub level: LevelStructure,
    /// Index into [`genus_characters`]; 0 is the trivial character.
    pub character: usize,
    /// Dirichlet series over norms ≤ truncation.
    pub truncation: u64,
}

impl GlobalLSpec {
    pub fn new(level: LevelStructure, character: usize, truncation: u64) -> Result<Self> {
        if truncation < 1000 {
            return invalid("truncation must be at least 1000");
        }
        let count = genus_characters(&level)?.len();
        if character >= count {
            return invalid(format!("character index {character} out of range (there are {count})"));
        }
        Ok(GlobalLSpec { level, character, truncation })
    }
}

/// A character of ker(χ_E) ⊂ G = ∏_{p∈S} ℤ_p^×/Nr Λ_p^×(x), i.e. of Pic(Λ,x)/Pic^pg(Λ,x).
/// Component p sends a unit u mod p^m to exp(2πi·phase[u]/den).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusCharacter {
    pub components: Vec<LocalCharacter>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalCharacter {
    pub p: u64,
    pub modulus: i64,
    pub den: u64,
    /// phase numerators indexed by residue (0 at non-units)
    pub phase: Vec<u64>,
}

impl LocalCharacter {
    fn at(&self, u: i64) -> (u64, u64) {
        (self.phase[u.rem_euclid(self.modulus) as usize], self.den)
    }
}

fn phase_value(num: u64, den: u64) -> Complex64 {
    let t = 2.0 * std::f64::consts::PI * (num % den) as f64 / den as f64;
    Complex64::new(t.cos(), t.sin())
}

/// Characters of (ℤ/p^m)^× as phase tables over the common denominator φ(p^m).
fn unit_characters(p: u64, modulus: i64) -> Vec<Vec<u64>> {
    let m = modulus as u64;
    let phi = m / p * (p - 1);
    let pi = p as i64;
    let mut out = Vec::new();
    if p == 2 {
        // u = ±5^k
        let half = phi / 2;
        let mut log5 = vec![u64::MAX; m as usize];
        let mut x = 1i64;
        for k in 0..half.max(1) {
            log5[x as usize] = k;
            x = x * 5 % modulus;
        }
        for a in 0..2u64 {
            for b in 0..half.max(1) {
                let mut t = vec![0u64; m as usize];
                for u in (1..modulus).step_by(2) {
                    let (eps, k) = if log5[u as usize] != u64::MAX {
                        (0, log5[u as usize])
                    } else {
                        (1, log5[(modulus - u) as usize])
                    };
                    // a·ε/2 + b·k/half over φ = 2·half
                    t[u as usize] = (a * eps * half + 2 * b * k) % phi;
                }
                out.push(t);
            }
        }
    } else {
        let order = |g: i64| {
            let mut x = g;
            let mut k = 1;
            while x != 1 {
                x = (x as i128 * g as i128 % modulus as i128) as i64;
                k += 1;
            }
            k as u64
        };
        let g = (2..modulus).find(|&g| g % pi != 0 && order(g) == phi).expect("primitive root");
        let mut log = vec![0u64; m as usize];
        let mut x = 1i64;
        for k in 0..phi {
            log[x as usize] = k;
            x = (x as i128 * g as i128 % modulus as i128) as i64;
        }
        for j in 0..phi {
            let mut t = vec![0u64; m as usize];
            for u in 1..modulus {
                if u % pi != 0 {
                    t[u as usize] = j * log[u as usize] % phi;
                }
            }
            out.push(t);
        }
    }
    out
}

/// All characters of Pic(Λ,x)/Pic^pg(Λ,x), the trivial one first. Characters of G that agree
/// on ker(χ_E) (they differ by χ_E) are listed once.
pub fn genus_characters(level: &LevelStructure) -> Result<Vec<GenusCharacter>> {
    let g = genus_group(level);
    let kernel = genus_kernel(level, &g);
    let mut per_prime: Vec<Vec<LocalCharacter>> = Vec::new();
    for ld in &g {
        let phi = ld.modulus as u64 / ld.p * (ld.p - 1);
        let chars: Vec<LocalCharacter> = unit_characters(ld.p, ld.modulus)
            .into_iter()
            .filter(|t| ld.subgroup.iter().all(|&h| t[h as usize] == 0))
            .map(|phase| LocalCharacter { p: ld.p, modulus: ld.modulus, den: phi, phase })
            .collect();
        per_prime.push(chars);
    }
    let mut combos: Vec<Vec<LocalCharacter>> = vec![vec![]];
    for chars in &per_prime {
        combos = combos
            .into_iter()
            .flat_map(|c| chars.iter().map(move |x| [c.clone(), vec![x.clone()]].concat()))
            .collect();
    }
    let mut seen: BTreeMap<Vec<(u64, u64)>, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for components in combos {
        let ch = GenusCharacter { components };
        let sig: Vec<(u64, u64)> = kernel.iter().map(|v| reduced(ch.phase(v))).collect();
        if !seen.contains_key(&sig) {
            seen.insert(sig, out.len());
            out.push(ch);
        }
    }
    if out.len() != kernel.len() {
        return Err(Error::Domain(format!(
            "found {} genus characters for a kernel of order {}",
            out.len(),
            kernel.len()
        )));
    }
    Ok(out)
}

fn reduced((n, d): (u64, u64)) -> (u64, u64) {
    let g = num_integer::gcd(n % d, d);
    ((n % d) / g, d / g)
}

impl GenusCharacter {
    /// Phase (num, den) at an element of G given by residues per bad prime.
    pub fn phase(&self, v: &[i64]) -> (u64, u64) {
        let den: u64 = self.components.iter().map(|c| c.den).fold(1, num_integer::lcm);
        let num = self.components.iter().zip(v).map(|(c, &u)| {
            let (a, d) = c.at(u);
            a * (den / d)
        });
        (num.sum::<u64>() % den, den)
    }

    pub fn is_trivial(&self) -> bool {
        self.components.iter().all(|c| c.phase.iter().all(|&x| x == 0))
    }
}

/// r_E(m) = #{ideals of 𝒪_E of norm m} for m ≤ limit, from representation numbers of the
/// reduced forms of discriminant d_E.
fn ideal_counts(d_fund: i64, limit: u64) -> Result<Vec<u64>> {
    let cg = class_group(d_fund)?;
    let w = match d_fund {
        -3 => 6u64,
        -4 => 4,
        _ => 2,
    };
    let mut reps = vec![0u64; limit as usize + 1];
    let ad = d_fund.unsigned_abs() as f64;
    for f in &cg.classes {
        let (a, b, c) = (
            f.a.to_i64().expect("small"),
            f.b.to_i64().expect("small"),
            f.c.to_i64().expect("small"),
        );
        let vmax = ((4 * a) as f64 * limit as f64 / ad).sqrt().floor() as i64 + 1;
        for v in -vmax..=vmax {
            // a(u + bv/2a)² + |d|v²/4a ≤ limit
            let rest = limit as f64 - ad * (v * v) as f64 / (4 * a) as f64;
            if rest < 0.0 {
                continue;
            }
            let center = -(b * v) as f64 / (2 * a) as f64;
            let half = (rest / a as f64).sqrt();
            for u in (center - half).floor() as i64 - 1..=(center + half).ceil() as i64 + 1 {
                let val = a as i128 * (u * u) as i128 + (b * u * v) as i128 + c as i128 * (v * v) as i128;
                if val > 0 && val <= limit as i128 {
                    reps[val as usize] += 1;
                }
            }
        }
    }
    reps.iter()
        .map(|&r| {
            if r % w != 0 {
                Err(Error::Domain("representation count not divisible by |𝒪_E^×|".into()))
            } else {
                Ok(r / w)
            }
        })
        .collect()
}

/// Dirichlet coefficients a(k/den), den = N², for norms ≤ upper.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirichletCoefficients {
    pub den: u64,
    pub entries: Vec<(u64, Complex64)>,
}

impl DirichletCoefficients {
    /// Entries rounded to integers, zeros dropped; None if some entry is not an integer.
    pub fn integer_map(&self) -> Option<BTreeMap<Rational, i64>> {
        let den = BigInt::from(self.den);
        let mut out = BTreeMap::new();
        for &(k, c) in &self.entries {
            let r = c.re.round();
            if (c.re - r).abs() > 1e-6 || c.im.abs() > 1e-6 {
                return None;
            }
            if r != 0.0 {
                out.insert(Rational::new(BigInt::from(k), den.clone()), r as i64);
            }
        }
        Some(out)
    }
}

fn max_exponent(p: u64, k: u64) -> u32 {
    let mut e = 0;
    let mut t = p;
    while t <= k {
        e += 1;
        t = t.saturating_mul(p);
    }
    e
}

/// Coefficients of L_{Λ(x)}(s, ψ) for norms ≤ upper.
///
/// The trivial character uses the local oracle counts at p | f·N; other characters use the
/// class-resolved local orbit counts at p | disc·N.
pub fn global_coefficients(spec: &GlobalLSpec, upper: f64) -> Result<DirichletCoefficients> {
    let chars = genus_characters(&spec.level)?;
    if spec.character == 0 {
        trivial_coefficients(&spec.level, upper)
    } else {
        character_coefficients(&spec.level, &chars[spec.character], upper)
    }
}

fn trivial_coefficients(level: &LevelStructure, upper: f64) -> Result<DirichletCoefficients> {
    let order = level.order;
    let den = level.n * level.n;
    let kmax = (upper * den as f64).floor() as u64;
    let bad = prime_divisors(order.f * level.n);
    let mut local: Vec<(u64, u32, BTreeMap<i32, u64>)> = Vec::new();
    for &p in &bad {
        let spec = LocalFactorSpec::at_prime(level, p, Complex64::new(2.0, 0.0))?;
        let e = val(p, level.n as i128);
        let cutoff = (max_exponent(p, kmax) as i32 - 2 * e as i32).max(10) as u32;
        let o = local_factor_oracle(&spec, cutoff)?;
        local.push((p, e, o.coefficients.into_iter().collect()));
    }
    let good = ideal_counts(order.d_fund, kmax.max(1))?;
    let mut entries = Vec::new();
    'k: for k in 1..=kmax {
        let mut rest = k;
        let mut c = 1u64;
        for (p, e, coeffs) in &local {
            let v = val(*p, k as i128);
            rest /= pow(*p, v) as u64;
            match coeffs.get(&(v as i32 - 2 * *e as i32)) {
                Some(&x) => c *= x,
                None => continue 'k,
            }
        }
        // the level denominator only involves bad primes
        c *= good[rest as usize];
        if c > 0 {
            entries.push((k, Complex64::new(c as f64, 0.0)));
        }
    }
    Ok(DirichletCoefficients { den, entries })
}

pub fn character_coefficients(
    level: &LevelStructure,
    psi: &GenusCharacter,
    upper: f64,
) -> Result<DirichletCoefficients> {
    let order = level.order;
    let den = level.n * level.n;
    let kmax = (upper * den as f64).floor() as u64;
    let bad = level.bad_primes();
    let tables: Vec<LocalTable> =
        bad.iter().map(|&p| LocalTable::new(level, 1, p, kmax, &[0])).collect::<Result<_>>()?;
    let good = ideal_counts(order.d_fund, kmax.max(1))?;
    let mut entries = Vec::new();
    for k in 1..=kmax {
        let mut rest = k;
        let mut value = Complex64::new(1.0, 0.0);
        for (t, comp) in tables.iter().zip(&psi.components) {
            let v = val(t.p, k as i128);
            let unit = k / t.p.pow(v);
            rest /= t.p.pow(v);
            let target = t.target_class(unit);
            let (tn, td) = comp.at(target);
            let mut sum = Complex64::new(0.0, 0.0);
            for &(cls, cnt) in t.classes(0, v) {
                let (cn, cd) = comp.at(cls);
                debug_assert_eq!(cd, td);
                sum += cnt as f64 * phase_value(cn + (td - tn % td), td);
            }
            value *= sum;
            if value.norm() == 0.0 {
                break;
            }
        }
        let c = value * good[rest as usize] as f64;
        if c.norm() > 1e-9 {
            entries.push((k, c));
        }
    }
    Ok(DirichletCoefficients { den, entries })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalLValue {
    pub value: Complex64,
    /// Heuristic size of the omitted terms, Res·T^{1−σ}/(σ−1).
    pub tail_estimate: f64,
    pub terms: usize,
}

/// Σ_{Nr ≤ truncation} a(n)·n^{−s} for Re s > 1.
pub fn global_l(spec: &GlobalLSpec, s: Complex64) -> Result<GlobalLValue> {
    if s.re <= 1.0 {
        return invalid("global_l needs Re s > 1; use residue_bound_check at s = 1");
    }
    let coeffs = global_coefficients(spec, spec.truncation as f64)?;
    let den = coeffs.den as f64;
    let value = coeffs
        .entries
        .iter()
        .rev()
        .map(|&(k, a)| a * (-s * (k as f64 / den).ln()).exp())
        .sum();
    let res = residue_parts(&spec.level, None)?;
    let r = res.0.value * res.1.to_f64().unwrap_or(f64::NAN);
    let t = spec.truncation as f64;
    let tail_estimate = r * t.powf(1.0 - s.re) / (s.re - 1.0);
    Ok(GlobalLValue { value, tail_estimate, terms: coeffs.entries.len() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub l1: LValue,
    /// ∏ over bad p of L_{Λ_p(x)}(1)/L_{𝒪_p}(1), times p₁^{−2τ}
    pub rational_part: Rational,
    pub residue: f64,
    /// p₁^{−2τ}·∏_{p|f}(1 − χ_E(p)/p)·∏_{p|N}[Λ_p^× : Λ_p^×(x)] (ord y = 1)
    pub bound: Rational,
    pub holds: bool,
    pub equality: bool,
}

fn residue_parts(level: &LevelStructure, bowen: Option<Bowen>) -> Result<(LValue, Rational)> {
    let order = level.order;
    let l1 = l1_chi(order.d_fund, RESIDUE_TERMS);
    let mut part = Rational::one();
    for p in prime_divisors(order.f * level.n) {
        let spec = LocalFactorSpec::at_prime(level, p, Complex64::new(1.0, 0.0))?;
        let max = LocalFactorSpec::with_field(p, order.d_fund, 0, LocalLevel::Trivial, spec.s, 0)?;
        part *= local_factor_at_one(&spec)? / local_factor_at_one(&max)?;
    }
    if let Some(b) = bowen {
        if b.tau > 0 {
            check_bowen(&order, b.p1, level.n)?;
            let s = Complex64::new(1.0, 0.0);
            let deep = LocalFactorSpec::with_field(b.p1, order.d_fund, 0, LocalLevel::Trivial, s, b.tau)?;
            let max = LocalFactorSpec::with_field(b.p1, order.d_fund, 0, LocalLevel::Trivial, s, 0)?;
            part *= local_factor_at_one(&deep)? / local_factor_at_one(&max)?;
        }
    }
    Ok((l1, part))
}

/// The residue at s = 1 as L(1, χ_E) times an exact rational, against its upper bound.
pub fn residue_bound_check(spec: &GlobalLSpec, bowen: Option<Bowen>) -> Result<ResidueReport> {
    if spec.character != 0 {
        return invalid("the residue is taken for the trivial character");
    }
    let level = &spec.level;
    let order = level.order;
    let (l1, rational_part) = residue_parts(level, bowen)?;
    let mut bound = Rational::one();
    let int = |x: i64| Rational::from_integer(BigInt::from(x));
    for p in prime_divisors(order.f) {
        bound *= int(1) - Rational::new(BigInt::from(order.chi(p)), BigInt::from(p));
    }
    for p in prime_divisors(level.n) {
        bound *= int(local_unit_index(level, p)? as i64);
    }
    if let Some(b) = bowen {
        bound /= Rational::from_integer(BigInt::from(b.p1).pow(2 * b.tau));
    }
    let residue = l1.value * rational_part.to_f64().unwrap_or(f64::NAN);
    let positive = residue > 0.0 && rational_part > Rational::from_integer(BigInt::from(0));
    Ok(ResidueReport {
        l1,
        holds: positive && rational_part <= bound,
        equality: rational_part == bound,
        rational_part,
        residue,
        bound,
    })
}
