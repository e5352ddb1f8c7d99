//! Weyl sums on the sphere, exponential sums on the fiber and cusp profiles on the modular
//! surface. Each is a plain average in input order.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::arith::Rational;
use crate::error::{invalid, Result};

/// Q_ℓ^m(z) for 0 ≤ m ≤ ℓ ≤ max: P_ℓ^m(z) = (1 − z²)^{m/2}·Q_ℓ^m(z) up to sign.
fn legendre_table(z: f64, max: usize) -> Vec<Vec<f64>> {
    let mut q = vec![vec![0.0; max + 1]; max + 1];
    let mut diag = 1.0;
    for m in 0..=max {
        if m > 0 {
            diag *= (2 * m - 1) as f64;
        }
        q[m][m] = diag;
        if m < max {
            q[m + 1][m] = z * (2 * m + 1) as f64 * diag;
        }
        for l in m + 2..=max {
            q[l][m] = ((2 * l - 1) as f64 * z * q[l - 1][m] - (l + m - 1) as f64 * q[l - 2][m]) / (l - m) as f64;
        }
    }
    q
}

/// (ℓ − m)!/(ℓ + m)!
fn factorial_ratio(l: usize, m: usize) -> f64 {
    ((l - m + 1)..=(l + m)).fold(1.0, |acc, k| acc / k as f64)
}

/// W_ℓ = (Σ_m |mean Y_ℓm|² / (2ℓ + 1))^{1/2} for ℓ = 0..=max_degree, with Y_ℓm the real
/// spherical harmonics orthonormal for the probability measure. W_0 = 1 and W_ℓ ≤ 1.
pub fn weyl_sums_sphere(points: &[[f64; 3]], max_degree: usize) -> Result<Vec<f64>> {
    if points.is_empty() {
        return invalid("empty point set");
    }
    let nd = max_degree;
    // sums[ℓ][j]: j = 0 for m = 0, 2m − 1 for cos, 2m for sin
    let mut sums = vec![vec![0.0; 2 * nd + 1]; nd + 1];
    for x in points {
        let q = legendre_table(x[2], nd);
        let mut rot = Complex64::new(1.0, 0.0);
        let xy = Complex64::new(x[0], x[1]);
        for m in 0..=nd {
            if m > 0 {
                rot *= xy;
            }
            for l in m.max(1)..=nd {
                let norm = if m == 0 {
                    ((2 * l + 1) as f64).sqrt()
                } else {
                    (2.0 * (2 * l + 1) as f64 * factorial_ratio(l, m)).sqrt()
                };
                let y = norm * q[l][m];
                if m == 0 {
                    sums[l][0] += y;
                } else {
                    sums[l][2 * m - 1] += y * rot.re;
                    sums[l][2 * m] += y * rot.im;
                }
            }
        }
    }
    let n = points.len() as f64;
    Ok((0..=nd)
        .map(|l| {
            if l == 0 {
                return 1.0;
            }
            let sq: f64 = sums[l].iter().map(|s| (s / n) * (s / n)).sum();
            (sq / (2 * l + 1) as f64).sqrt()
        })
        .collect())
}

/// The same magnitudes by the addition theorem: W_ℓ² = N^{−2} Σ_{i,j} P_ℓ(x_i·x_j).
pub fn weyl_sums_sphere_pairwise(points: &[[f64; 3]], max_degree: usize) -> Result<Vec<f64>> {
    if points.is_empty() {
        return invalid("empty point set");
    }
    let mut sums = vec![0.0; max_degree + 1];
    for x in points.iter().rev() {
        for y in points.iter().rev() {
            let t = (x[0] * y[0] + x[1] * y[1] + x[2] * y[2]).clamp(-1.0, 1.0);
            let (mut p0, mut p1) = (1.0, t);
            sums[0] += 1.0;
            if max_degree >= 1 {
                sums[1] += t;
            }
            for (l, s) in sums.iter_mut().enumerate().skip(2) {
                let p2 = ((2 * l - 1) as f64 * t * p1 - (l - 1) as f64 * p0) / l as f64;
                *s += p2;
                p0 = p1;
                p1 = p2;
            }
        }
    }
    let n2 = (points.len() * points.len()) as f64;
    Ok(sums.iter().enumerate().map(|(l, s)| if l == 0 { 1.0 } else { (s / n2).max(0.0).sqrt() }).collect())
}

/// Frequencies m ∈ [−M, M]² \ {0} in lexicographic order.
pub fn frequencies(max_freq: i64) -> Vec<[i64; 2]> {
    let r = -max_freq..=max_freq;
    r.clone().flat_map(|a| r.clone().map(move |b| [a, b])).filter(|m| *m != [0, 0]).collect()
}

/// |mean e(m·t)| for each frequency of [`frequencies`].
pub fn fiber_exponential_sums(points: &[[f64; 2]], max_freq: i64) -> Result<Vec<([i64; 2], f64)>> {
    if points.is_empty() {
        return invalid("empty point set");
    }
    let n = points.len() as f64;
    Ok(frequencies(max_freq)
        .into_iter()
        .map(|m| {
            let s: Complex64 = points
                .iter()
                .map(|t| {
                    let ph = m[0] as f64 * t[0] + m[1] as f64 * t[1];
                    Complex64::from_polar(1.0, TAU * (ph - ph.floor()))
                })
                .sum();
            (m, s.norm() / n)
        })
        .collect())
}

/// The same sums with the phase m·t reduced exactly in ℚ/ℤ before the single conversion.
pub fn fiber_exponential_sums_exact(points: &[[Rational; 2]], max_freq: i64) -> Result<Vec<([i64; 2], f64)>> {
    use num_traits::ToPrimitive;
    if points.is_empty() {
        return invalid("empty point set");
    }
    let n = points.len() as f64;
    Ok(frequencies(max_freq)
        .into_iter()
        .map(|m| {
            let s: Complex64 = points
                .iter()
                .rev()
                .map(|t| {
                    let ph = Rational::from_integer(m[0].into()) * &t[0] + Rational::from_integer(m[1].into()) * &t[1];
                    let ph = &ph - ph.floor();
                    Complex64::from_polar(1.0, TAU * ph.to_f64().expect("finite"))
                })
                .sum();
            (m, s.norm() / n)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuspRow {
    pub height: f64,
    /// share of points with Im τ > height
    pub empirical: f64,
    /// 3/(πY), the hyperbolic probability of {Im τ > Y} for Y ≥ 1
    pub expected: f64,
}

/// Cusp profile of points in the standard fundamental domain.
pub fn cusp_profile(points: &[Complex64], heights: &[f64]) -> Result<Vec<CuspRow>> {
    if points.is_empty() {
        return invalid("empty point set");
    }
    if heights.iter().any(|&y| !(y >= 1.0)) {
        return invalid("cusp heights must be at least 1");
    }
    let n = points.len() as f64;
    Ok(heights
        .iter()
        .map(|&height| CuspRow {
            height,
            empirical: points.iter().filter(|t| t.im > height).count() as f64 / n,
            expected: 3.0 / (PI * height),
        })
        .collect())
}
