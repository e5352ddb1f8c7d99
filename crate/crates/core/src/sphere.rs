//! Primitive integer points on the sphere x₁² + x₂² + x₃² = D and their rotation orbits.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::int::isqrt;
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpherePoint {
    pub coords: [i64; 3],
    pub d: u64,
}

impl SpherePoint {
    pub fn new(coords: [i64; 3]) -> Result<Self> {
        let d = coords.iter().map(|&c| (c * c) as u64).sum();
        let g = num_integer::gcd(num_integer::gcd(coords[0], coords[1]), coords[2]);
        if g != 1 {
            return invalid(format!("{coords:?} is not primitive"));
        }
        Ok(SpherePoint { coords, d })
    }
}

/// D ∈ 𝔻(3): D is a sum of three coprime squares.
pub fn representable(d: u64) -> bool {
    d >= 1 && !matches!(d % 8, 0 | 4 | 7)
}

/// Nonnegative (x, y) with x ≤ y and x² + y² = m.
fn two_squares(m: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut x = 0;
    while 2 * x * x <= m {
        let r = m - x * x;
        let y = isqrt(r);
        if y * y == r {
            out.push((x, y));
        }
        x += 1;
    }
    out
}

/// 𝓗_D, sorted lexicographically.
pub fn enumerate(d: u64) -> Vec<SpherePoint> {
    let mut set = BTreeSet::new();
    let zmax = isqrt(d);
    for z in 0..=zmax {
        for (x, y) in two_squares(d - z * z) {
            let base = [x as i64, y as i64, z as i64];
            if num_integer::gcd(num_integer::gcd(base[0], base[1]), base[2]) != 1 {
                continue;
            }
            for perm in PERMS {
                for signs in 0..8 {
                    let mut c = [0i64; 3];
                    for i in 0..3 {
                        let s = if signs >> i & 1 == 1 { -1 } else { 1 };
                        c[i] = s * base[perm[i]];
                    }
                    set.insert(c);
                }
            }
        }
    }
    set.into_iter().map(|coords| SpherePoint { coords, d }).collect()
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn perm_sign(p: &[usize; 3]) -> i64 {
    let inv = (p[0] > p[1]) as i64 + (p[0] > p[2]) as i64 + (p[1] > p[2]) as i64;
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The 24 signed permutation matrices of determinant +1, as (permutation, signs):
/// (g·x)_i = signs_i · x_{perm_i}.
pub fn rotations() -> Vec<([usize; 3], [i64; 3])> {
    let mut out = Vec::with_capacity(24);
    for p in PERMS {
        for bits in 0..8 {
            let s = [0, 1, 2].map(|i| if bits >> i & 1 == 1 { -1 } else { 1 });
            if perm_sign(&p) * s[0] * s[1] * s[2] == 1 {
                out.push((p, s));
            }
        }
    }
    out
}

pub fn rotate(g: &([usize; 3], [i64; 3]), x: &[i64; 3]) -> [i64; 3] {
    [0, 1, 2].map(|i| g.1[i] * x[g.0[i]])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    /// Lexicographic minimum of the orbit.
    pub representative: SpherePoint,
    pub members: Vec<SpherePoint>,
}

/// Partition a set of points of one norm under the rotation group; sorted by representative.
pub fn rotation_orbits(points: &[SpherePoint]) -> Result<Vec<Orbit>> {
    if let Some(first) = points.first() {
        if points.iter().any(|p| p.d != first.d) {
            return invalid("rotation_orbits: points of mixed norm");
        }
    }
    let rots = rotations();
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    let mut sorted: Vec<_> = points.to_vec();
    sorted.sort();
    for p in sorted {
        if seen.contains(&p.coords) {
            continue;
        }
        let members: BTreeSet<[i64; 3]> = rots.iter().map(|g| rotate(g, &p.coords)).collect();
        seen.extend(members.iter().copied());
        orbits.push(Orbit {
            representative: p,
            members: members.into_iter().map(|coords| SpherePoint { coords, d: p.d }).collect(),
        });
    }
    Ok(orbits)
}
