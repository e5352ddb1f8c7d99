//! Exact integer arithmetic, ℤ³ lattices and binary quadratic forms.

pub mod bqf;
pub mod genus;
pub mod int;
pub mod lattice;

pub use bqf::{compose_forms, Bqf, Mat2};
pub use genus::{assigned_characters, genus_signature, GenusChar};
pub use lattice::{kernel_basis, solve_dual, IntLattice2in3, Vec3};

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn reduce_form(f: &Bqf) -> crate::error::Result<Bqf> {
    f.reduce()
}
