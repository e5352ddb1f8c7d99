//! The global L-function of a level structure: values for Re s > 1 and the residue at s = 1,
//! with and without Bowen depth.
//!
//! cargo run --release --example residue -- -20 3

use num_complex::Complex64;

use genus_packets::ideal_counting::Bowen;
use genus_packets::lfunc::{genus_characters, global_l, residue_bound_check, GlobalLSpec};
use genus_packets::quad_orders::{LevelStructure, QuadOrder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let disc: i64 = args.next().map_or(Ok(-20), |a| a.parse())?;
    let n: u64 = args.next().map_or(Ok(3), |a| a.parse())?;
    let level = LevelStructure::new(QuadOrder::from_disc(disc)?, (1, 0), n)?;

    let chars = genus_characters(&level)?;
    println!("{} genus characters", chars.len());
    for i in 0..chars.len() {
        let spec = GlobalLSpec::new(level, i, 100_000)?;
        let v = global_l(&spec, Complex64::new(2.0, 0.0))?;
        println!("  χ{i}: L(2) = {:.10} {:+.10}i ({} terms)", v.value.re, v.value.im, v.terms);
    }

    let spec = GlobalLSpec::new(level, 0, 1_000_000)?;
    let p1 = (2..).find(|&p| level.order.chi(p) == 1 && n % p != 0).expect("split prime");
    for bowen in [None, Some(Bowen { p1, tau: 1 }), Some(Bowen { p1, tau: 2 })] {
        let r = residue_bound_check(&spec, bowen)?;
        println!(
            "{bowen:?}: rational part {}, residue {:.12}, bound {} (equality {})",
            r.rational_part, r.residue, r.bound, r.equality
        );
    }
    Ok(())
}
