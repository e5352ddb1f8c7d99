//! Local Euler factors of the modified Hecke L-functions L_{Λ(x)}(s, χ), their closed forms,
//! a stratified coset-sum oracle, conductors, global assembly and the residue at s = 1.
//!
//! Local normalization: m(𝒪_{E_v}) = 1 and ‖z‖ = ∏_{w|v} |z|_w, so ‖p^k‖ = p^{−2k}.

mod conductor;
mod global;
mod local;
mod model;
mod oracle;

pub use conductor::{conductor_bound, ConductorReport, LocalConductor};
pub use global::{
    character_coefficients, genus_characters, global_coefficients, global_l, residue_bound_check, DirichletCoefficients, GenusCharacter,
    GlobalLSpec, GlobalLValue, LocalCharacter, ResidueReport, RESIDUE_TERMS,
};
pub use local::{
    half_bounds, local_factor_at_one, local_factor_closed, local_volume, HalfBounds, LocalLevel,
    LocalVolumes, SplitType,
};
pub use oracle::{level_unit_measure, local_factor_oracle, local_factor_oracle_adaptive, OracleValue};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::int::{is_fundamental, is_prime, kronecker, mod_inverse, pow, val};
use crate::error::{invalid, Result};
use crate::quad_orders::{LevelStructure, QuadOrder};

/// One local Euler factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalFactorSpec {
    pub p: u64,
    pub split_type: SplitType,
    /// f_v = p^n
    pub n: u32,
    pub level: LocalLevel,
    pub s: Complex64,
    /// Bowen depth; only with split type, n = 0 and trivial level.
    pub tau: u32,
    /// Fundamental discriminant of the field realising the local model.
    pub field: i64,
}

impl LocalFactorSpec {
    /// Uses the field of smallest |d| with the requested behaviour at p.
    pub fn new(p: u64, split_type: SplitType, n: u32, level: LocalLevel, s: Complex64, tau: u32) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        let field = (3..)
            .map(|d: i64| -d)
            .find(|&d| is_fundamental(d) && kronecker(d as i128, p as i128) == split_type.chi())
            .expect("every splitting type occurs");
        Self::with_field(p, field, n, level, s, tau)
    }

    pub fn with_field(p: u64, field: i64, n: u32, level: LocalLevel, s: Complex64, tau: u32) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if !is_fundamental(field) {
            return invalid(format!("{field} is not a fundamental discriminant"));
        }
        if s.re <= 0.0 {
            return invalid(format!("Re s = {} ≤ 0", s.re));
        }
        let split_type = SplitType::from_chi(kronecker(field as i128, p as i128));
        if tau > 0 && (split_type != SplitType::Split || n != 0 || level != LocalLevel::Trivial) {
            return invalid("Bowen depth needs a split prime, n = 0 and trivial level");
        }
        if let LocalLevel::Point { xi, e } = level {
            let pi = p as i64;
            if e == 0 || (xi.0.rem_euclid(pi) == 0 && xi.1.rem_euclid(pi) == 0) {
                return invalid("level point ξ/p^e needs e ≥ 1 and ξ ∉ pΛ");
            }
            if 2 * (e + n) > 40 {
                return invalid("level too deep for the local model");
            }
        }
        Ok(LocalFactorSpec { p, split_type, n, level, s, tau, field })
    }

    /// The local factor of a global level at p: n = val_p(f) and x_p = ξ/N written as ξ'/p^e.
    pub fn at_prime(level: &LevelStructure, p: u64, s: Complex64) -> Result<Self> {
        let order = level.order;
        let n = val(p, order.f as i128);
        let e = val(p, level.n as i128);
        if e == 0 {
            return Self::with_field(p, order.d_fund, n, LocalLevel::Trivial, s, 0);
        }
        let maximal = order.maximal();
        let f = order.f as i128;
        let c0 = (order.disc.rem_euclid(2) as i128 - f * maximal.disc.rem_euclid(2) as i128) / 2;
        let q = pow(p, e + n + 1);
        let unit = mod_inverse((level.n as i128) / pow(p, e), q).expect("coprime");
        // 𝒪-coordinates of u·ξ, then coordinates in the local order ℤ + pⁿ𝒪
        let u0 = unit * (level.xi.0 as i128 + level.xi.1 as i128 * c0);
        let u1 = unit * level.xi.1 as i128 * f;
        let fl = pow(p, n);
        let sd = maximal.disc.rem_euclid(2) as i128;
        let c0l = ((sd * fl * fl).rem_euclid(2) - fl * sd) / 2;
        let b = u1 / fl;
        let a = u0 - b * c0l;
        let pe = pow(p, e);
        let xi = (a.rem_euclid(pe) as i64, b.rem_euclid(pe) as i64);
        Self::with_field(p, order.d_fund, n, LocalLevel::Point { xi, e }, s, 0)
    }

    pub fn at(&self, s: Complex64) -> Result<Self> {
        Self::with_field(self.p, self.field, self.n, self.level, s, self.tau)
    }

    pub fn f_v(&self) -> u64 {
        self.p.pow(self.n)
    }

    pub fn chi(&self) -> i32 {
        self.split_type.chi()
    }

    /// The global order of conductor p^n in the model field.
    pub fn order(&self) -> QuadOrder {
        QuadOrder::new(self.field, self.f_v()).expect("valid model")
    }

    /// Level point ξ/p^e as a global level structure (trivial level gives N = 1).
    pub fn level_structure(&self) -> LevelStructure {
        match self.level {
            LocalLevel::Trivial => LevelStructure::trivial(self.order()),
            LocalLevel::Point { xi, e } => {
                LevelStructure::new(self.order(), xi, self.p.pow(e)).expect("validated level point")
            }
        }
    }
}
