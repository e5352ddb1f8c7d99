//! Direct stratified coset sum for m(Λ_v^×(x))^{−1} ∫_{S} ‖z‖^{s−1} dm(z).
//!
//! S is x + Λ_v, or p^τ𝒪_v with Bowen depth τ. After scaling by p^e the set is a union of
//! cosets r + p^K𝒪 (K = e + n + τ). On each coset and at each place the valuation is either
//! fixed by r or runs over all values ≥ K with the Haar weights of ℤ_p or 𝒪_w. Collecting
//! the weights of ‖z‖ = p^{−k} gives Dirichlet coefficients c_k = m(S_k)p^k / m(Λ_v^×(x)),
//! which must be integers (they count Λ_v^×(x)-orbits). The sum over k ≤ cutoff is exact;
//! the rest is bounded by c_k ≤ R(k + 2e + 1)/m(Λ_v^×(x)) with R the number of cosets.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::local::pw;
use super::model::{Model, Pair};
use super::{LocalFactorSpec, SplitType};
use crate::arith::Rational;
use crate::error::{domain, invalid, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleValue {
    pub value: Complex64,
    /// Bound on |true value − value|.
    pub tail: f64,
    /// Cutoff on the norm exponent k.
    pub cutoff: i32,
    /// (k, c_k): c_k ideals of norm p^k (k ≥ −2e).
    pub coefficients: Vec<(i32, u64)>,
}

/// Per-place weight profile of one coset: a fixed exponent or the deep tail from `start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Part {
    Fixed(u32),
    Deep(u32),
}

/// m(Λ_v^×(x)) as (count, K'') meaning count·p^{−2K''}.
fn unit_measure_parts(m: &Model) -> (u64, u32) {
    let k = (m.e + m.n).max(1);
    let q = m.q(k);
    let qb = m.q(k - m.n.min(k));
    let f = m.q(m.n);
    let mut cnt = 0u64;
    for a in 0..q {
        for b in 0..qb {
            let lam = (a + b * m.c0, b * f);
            if m.norm(lam).rem_euclid(m.pi) == 0 {
                continue;
            }
            let d = m.mul((lam.0 - 1, lam.1), m.xi);
            if m.in_lattice(d, m.e) {
                cnt += 1;
            }
        }
    }
    (cnt, k)
}

/// m(Λ_v^×(x)) by enumeration of Λ_v/p^K𝒪_v.
pub fn level_unit_measure(spec: &LocalFactorSpec) -> Rational {
    let m = Model::new(spec);
    let (cnt, k) = unit_measure_parts(&m);
    Rational::new(BigInt::from(cnt), BigInt::from(m.p).pow(2 * k))
}

/// Weights W(j) scaled by p^{2K+2}·p^{−j}: i.e. W(j) = p^{j+2K+2}·m({γ in the coset : j(γ) = j}).
fn profile_weights(m: &Model, parts: &[Part], k: u32, jmax: u32) -> Vec<u128> {
    let p = m.p as u128;
    let pk = p.pow(k);
    // one place's scaled weights p^j·m_w(j)·(scale)
    let single = |part: Part| -> Vec<u128> {
        let mut v = vec![0u128; jmax as usize + 1];
        match (m.split, part) {
            // component in ℤ_p: coset weight p^{−K}, scale p^{K+1}
            (SplitType::Split, Part::Fixed(j)) => {
                if j <= jmax {
                    v[j as usize] = p.pow(j + 1);
                }
            }
            (SplitType::Split, Part::Deep(s)) => {
                for j in s..=jmax {
                    v[j as usize] = (p - 1) * pk;
                }
            }
            // 𝒪_w of degree 2: coset weight p^{−2K}, scale p^{2K+2}
            (_, Part::Fixed(j)) => {
                if j <= jmax {
                    v[j as usize] = p.pow(j + 2);
                }
            }
            (SplitType::Inert, Part::Deep(s)) => {
                for b in s.. {
                    if 2 * b > jmax {
                        break;
                    }
                    v[2 * b as usize] = (p * p - 1) * pk * pk;
                }
            }
            (SplitType::Ramified, Part::Deep(s)) => {
                for j in s..=jmax {
                    v[j as usize] = (p - 1) * p * pk * pk;
                }
            }
        }
        v
    };
    match parts {
        [a] => single(*a),
        [a, b] => {
            let (x, y) = (single(*a), single(*b));
            let mut out = vec![0u128; jmax as usize + 1];
            for (i, &xi) in x.iter().enumerate() {
                if xi == 0 {
                    continue;
                }
                for (l, &yl) in y.iter().enumerate().take(jmax as usize + 1 - i) {
                    out[i + l] += xi * yl;
                }
            }
            out
        }
        _ => unreachable!("one or two places"),
    }
}

/// Integer Dirichlet coefficients c_k for k ≤ cutoff and the tail constant R/m(Λ_v^×(x)).
fn coefficients(spec: &LocalFactorSpec, cutoff: i32) -> Result<(Vec<(i32, u64)>, f64, u32)> {
    let m = Model::new(spec);
    let tau = spec.tau;
    let k = (m.e + m.n + tau).max(1);
    let q = m.q(k);
    let d = m.degree();
    // residues of the scaled set mod p^k
    let residues: Vec<Pair> = if tau > 0 {
        vec![(0, 0)]
    } else {
        // ξ + p^e(a + bω_Λ) with a mod p^{K−e}, b mod p^{K−e−n}
        let pe = m.q(m.e);
        let f = m.q(m.n);
        let mut out = Vec::new();
        for a in 0..m.q(k - m.e) {
            for b in 0..m.q(k - m.e - m.n) {
                out.push(m.red((m.xi.0 + pe * (a + b * m.c0), m.xi.1 + pe * b * f), q));
            }
        }
        out
    };
    let mut profiles: BTreeMap<Vec<Part>, u64> = BTreeMap::new();
    let deep_start = if m.split == SplitType::Ramified { 2 * k } else { k };
    for &r in &residues {
        let parts: Vec<Part> = match m.split {
            SplitType::Split => m
                .exponents(r, k)
                .into_iter()
                .map(|j| if j >= k { Part::Deep(deep_start) } else { Part::Fixed(j) })
                .collect(),
            _ => {
                if r == (0, 0) {
                    vec![Part::Deep(deep_start)]
                } else {
                    vec![Part::Fixed(m.exponents(r, 2 * k * d)[0])]
                }
            }
        };
        *profiles.entry(parts).or_default() += 1;
    }
    let shift = 2 * m.e as i32;
    let jmax = (cutoff + shift).max(0) as u32;
    let mut w = vec![0u128; jmax as usize + 1];
    for (parts, &cnt) in &profiles {
        for (j, x) in profile_weights(&m, parts, k, jmax).into_iter().enumerate() {
            w[j] += x * cnt as u128;
        }
    }
    let (units, kk) = unit_measure_parts(&m);
    if units == 0 {
        return domain("empty unit group");
    }
    // c = W·p^{2K''} / (p^{2K+2}·units)
    let num_scale = BigInt::from(m.p).pow(2 * kk);
    let den = BigInt::from(m.p).pow(2 * k + 2) * BigInt::from(units);
    let mut out = Vec::new();
    for (j, &x) in w.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let c = Rational::new(BigInt::from(x) * &num_scale, den.clone());
        if !c.is_integer() {
            return Err(Error::Domain(format!("non-integral orbit count {c} at p^{}", j as i32 - shift)));
        }
        out.push((j as i32 - shift, c.to_integer().to_u64().expect("fits")));
    }
    let mx = units as f64 / (m.p as f64).powi(2 * kk as i32);
    Ok((out, residues.len() as f64 / mx, m.e))
}

/// Σ_{k > cutoff} (k + c)·x^k for 0 < x < 1.
fn tail_sum(x: f64, cutoff: i32, c: f64) -> f64 {
    let k0 = (cutoff + 1) as f64;
    x.powf(k0) * ((k0 + c) / (1.0 - x) + x / ((1.0 - x) * (1.0 - x)))
}

/// Oracle value with norm exponents k ≤ cutoff summed exactly.
pub fn local_factor_oracle(spec: &LocalFactorSpec, cutoff: u32) -> Result<OracleValue> {
    if spec.s.re <= 0.0 {
        return invalid("Re s must be positive");
    }
    if cutoff < 10 {
        return invalid("cutoff must be at least 10");
    }
    let cutoff = cutoff as i32;
    let (coefficients, rm, e) = coefficients(spec, cutoff)?;
    Ok(evaluate(spec, coefficients, rm, e, cutoff))
}

fn evaluate(spec: &LocalFactorSpec, coefficients: Vec<(i32, u64)>, rm: f64, e: u32, cutoff: i32) -> OracleValue {
    let p = spec.p as f64;
    let s = spec.s;
    // largest terms last so the small ones are not swamped
    let value = coefficients.iter().rev().map(|&(k, c)| c as f64 * pw(p, k as f64 * s)).sum();
    let x = p.powf(-s.re);
    let tail = rm * tail_sum(x, cutoff, 2.0 * e as f64 + 1.0);
    OracleValue { value, tail, cutoff, coefficients }
}

/// Raise the cutoff until the tail bound is below `tol`.
pub fn local_factor_oracle_adaptive(spec: &LocalFactorSpec, tol: f64) -> Result<OracleValue> {
    if spec.s.re <= 0.0 {
        return invalid("Re s must be positive");
    }
    let m = Model::new(spec);
    let (_, rm, e) = coefficients(spec, 0)?;
    let x = (m.p as f64).powf(-spec.s.re);
    let mut cutoff = 10;
    while rm * tail_sum(x, cutoff, 2.0 * e as f64 + 1.0) > tol {
        cutoff += 5;
        if cutoff > 2000 {
            return Err(Error::TooLarge("oracle cutoff above 2000".into()));
        }
    }
    let (c, rm, e) = coefficients(spec, cutoff)?;
    Ok(evaluate(spec, c, rm, e, cutoff))
}
