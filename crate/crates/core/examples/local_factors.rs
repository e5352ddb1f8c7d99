//! Local Euler factors: closed form, coset-sum oracle, s = 1 value, s = 1/2 bounds and conductor.
//!
//! cargo run --release --example local_factors

use num_complex::Complex64;

use genus_packets::lfunc::{
    conductor_bound, half_bounds, local_factor_at_one, local_factor_closed, local_factor_oracle_adaptive, LocalFactorSpec,
    LocalLevel, SplitType,
};
use genus_packets::quad_orders::{LevelStructure, QuadOrder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let levels = [LocalLevel::Trivial, LocalLevel::Point { xi: (1, 1), e: 1 }];
    for split in SplitType::ALL {
        for level in levels {
            let spec = LocalFactorSpec::new(3, split, 1, level, Complex64::new(1.5, 0.0), 0)?;
            let closed = local_factor_closed(&spec)?;
            let oracle = local_factor_oracle_adaptive(&spec, 1e-12)?;
            let one = local_factor_at_one(&spec.at(Complex64::new(1.0, 0.0))?)?;
            let half = half_bounds(&spec)?;
            println!(
                "p=3 {split:?} n=1 {level:?}: L(3/2) = {:.12} (oracle {:.12}), L(1) = {one}, f·m·L(1/2) = {:.6} ≤ {:.6}",
                closed.re, oracle.value.re, half.value, half.corrected
            );
        }
    }

    let level = LevelStructure::new(QuadOrder::from_disc(-48)?, (1, 0), 9)?;
    let c = conductor_bound(&level)?;
    println!("disc -48, N = 9: Nr 𝔠 = {} divides {}: {}", c.norm, c.bound, c.divides);
    for l in &c.local {
        println!("  p = {}: exponents {:?}, bound {:?}", l.p, l.exponents, l.bound_exponents);
    }
    Ok(())
}
