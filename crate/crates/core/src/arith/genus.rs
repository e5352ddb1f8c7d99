//! Gauss's assigned characters for a negative discriminant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::bqf::Bqf;
use super::int::{jacobi, prime_divisors};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GenusChar {
    /// Legendre symbol (m/p) for an odd prime p dividing the discriminant.
    Odd(u64),
    /// δ(m) = (-1)^((m-1)/2)
    Delta,
    /// ε(m) = (-1)^((m²-1)/8)
    Epsilon,
    /// δε
    DeltaEpsilon,
}

impl GenusChar {
    /// Value at an integer m coprime to 2·disc.
    pub fn eval(self, m: i128) -> i32 {
        let delta = if m.rem_euclid(4) == 1 { 1 } else { -1 };
        let eps = if matches!(m.rem_euclid(8), 1 | 7) { 1 } else { -1 };
        match self {
            GenusChar::Odd(p) => jacobi(m, p as i128),
            GenusChar::Delta => delta,
            GenusChar::Epsilon => eps,
            GenusChar::DeltaEpsilon => delta * eps,
        }
    }
}

/// Assigned characters of discriminant `disc` (Cox, Thm. 3.15 arrangement).
/// There are 2^(μ-1) genera for μ = number of characters.
pub fn assigned_characters(disc: i64) -> Vec<GenusChar> {
    assert!(disc < 0);
    let n_abs = disc.unsigned_abs();
    let mut chars: Vec<GenusChar> =
        prime_divisors(n_abs).into_iter().filter(|&p| p != 2).map(GenusChar::Odd).collect();
    if disc.rem_euclid(4) == 0 {
        let n = n_abs / 4;
        match n % 8 {
            1 | 5 => chars.push(GenusChar::Delta),
            2 => chars.push(GenusChar::DeltaEpsilon),
            6 => chars.push(GenusChar::Epsilon),
            4 => chars.push(GenusChar::Delta),
            0 => {
                chars.push(GenusChar::Delta);
                chars.push(GenusChar::Epsilon);
            }
            _ => {}
        }
    }
    chars
}

/// Some value represented by f that is coprime to `modulus`.
pub fn represented_coprime(f: &Bqf, modulus: u64) -> i128 {
    let m = BigInt::from(modulus);
    for r in 1i64.. {
        for u in -r..=r {
            for v in [-r, r] {
                for (u, v) in [(u, v), (v, u)] {
                    if u.gcd(&v) != 1 {
                        continue;
                    }
                    let val = f.eval_i64(u, v);
                    if val.is_positive() && val.gcd(&m) == BigInt::from(1) {
                        return val.to_i128().expect("small represented value");
                    }
                }
            }
        }
    }
    unreachable!()
}

/// Genus character values of a primitive form, in the order of `assigned_characters`.
pub fn genus_signature(f: &Bqf) -> Vec<i32> {
    let disc = f.disc_i64();
    let m = represented_coprime(f, 2 * disc.unsigned_abs());
    assigned_characters(disc).into_iter().map(|c| c.eval(m)).collect()
}
