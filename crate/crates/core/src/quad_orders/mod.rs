//! Imaginary quadratic orders Λ = ℤ + ℤω with ω = (σ + √disc)/2, σ ∈ {0,1}, σ ≡ disc mod 2.
//! Elements of E are written a + bω.

mod classgroup;
mod cnf;
mod pic;
pub mod ring;

pub use classgroup::{class_group, ClassGroup};
pub use cnf::{class_number_formula_check, l1_chi, CnfReport, LValue};
pub use pic::{
    chi_local, genus_group, genus_kernel, local_norm_data, local_unit_index, pic_with_level_sizes, LocalNormData,
    PicSizes,
};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::int::{fundamental_part, is_fundamental, kronecker};
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadOrder {
    pub d_fund: i64,
    pub f: u64,
    pub disc: i64,
}

impl QuadOrder {
    pub fn new(d_fund: i64, f: u64) -> Result<Self> {
        if !is_fundamental(d_fund) {
            return invalid(format!("{d_fund} is not a negative fundamental discriminant"));
        }
        if f == 0 {
            return invalid("conductor must be positive");
        }
        Ok(QuadOrder { d_fund, f, disc: d_fund * (f * f) as i64 })
    }

    pub fn from_disc(disc: i64) -> Result<Self> {
        if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
            return invalid(format!("invalid discriminant {disc}"));
        }
        let (d, f) = fundamental_part(disc);
        QuadOrder::new(d, f)
    }

    pub fn maximal(&self) -> QuadOrder {
        QuadOrder { d_fund: self.d_fund, f: 1, disc: self.d_fund }
    }

    /// (trace, norm) of ω.
    pub fn omega_tn(&self) -> (i64, i64) {
        let s = self.disc.rem_euclid(2);
        (s, (s - self.disc) / 4)
    }

    /// Field norm of a + bω (integers).
    pub fn norm(&self, a: i128, b: i128) -> i128 {
        let (t, n) = self.omega_tn();
        a * a + t as i128 * a * b + n as i128 * b * b
    }

    /// (a + bω)(c + dω).
    pub fn mul(&self, x: (i128, i128), y: (i128, i128)) -> (i128, i128) {
        let (t, n) = self.omega_tn();
        let bd = x.1 * y.1;
        (x.0 * y.0 - n as i128 * bd, x.0 * y.1 + x.1 * y.0 + t as i128 * bd)
    }

    /// Units of Λ in (1, ω) coordinates.
    pub fn units(&self) -> Vec<(i128, i128)> {
        match self.disc {
            -4 => vec![(1, 0), (-1, 0), (0, 1), (0, -1)],
            // ω = ζ₆, ω² = ω − 1
            -3 => vec![(1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1)],
            _ => vec![(1, 0), (-1, 0)],
        }
    }

    pub fn unit_count(&self) -> usize {
        self.units().len()
    }

    pub fn chi(&self, p: u64) -> i32 {
        kronecker(self.d_fund as i128, p as i128)
    }
}

pub fn kronecker_chi(order: &QuadOrder, p: u64) -> i32 {
    order.chi(p)
}

/// Level point ȷ(x) = ξ/N ∈ E/Λ of exact order N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LevelStructure {
    pub order: QuadOrder,
    pub xi: (i64, i64),
    pub n: u64,
}

impl LevelStructure {
    pub fn new(order: QuadOrder, xi: (i64, i64), n: u64) -> Result<Self> {
        if n == 0 {
            return invalid("level N must be positive");
        }
        let g = (xi.0.gcd(&xi.1) as u64).gcd(&n);
        if g != 1 {
            return invalid(format!("ξ = {xi:?} does not have exact order {n} mod Λ"));
        }
        let xi = (xi.0.rem_euclid(n as i64), xi.1.rem_euclid(n as i64));
        Ok(LevelStructure { order, xi, n })
    }

    pub fn trivial(order: QuadOrder) -> Self {
        LevelStructure { order, xi: (0, 0), n: 1 }
    }

    /// Does the global unit ε fix the level point: (ε − 1)ξ ∈ NΛ?
    pub fn fixes(&self, eps: (i128, i128)) -> bool {
        let n = self.n as i128;
        let v = self.order.mul((eps.0 - 1, eps.1), (self.xi.0 as i128, self.xi.1 as i128));
        v.0 % n == 0 && v.1 % n == 0
    }

    /// |Λ^×(x)|.
    pub fn level_unit_count(&self) -> usize {
        self.order.units().into_iter().filter(|&e| self.fixes(e)).count()
    }

    /// Primes where the data is not maximal-and-trivial: p | disc·N.
    pub fn bad_primes(&self) -> Vec<u64> {
        let m = self.order.disc.unsigned_abs() * self.n;
        crate::arith::int::prime_divisors(m)
    }
}
