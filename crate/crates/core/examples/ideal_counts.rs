//! Level ideals counted by inverse norm, against the direct lattice enumeration.
//!
//! cargo run --release --example ideal_counts -- -23 5

use genus_packets::ideal_counting::{count_by_norm, lattice_oracle_count, Bowen, NormWindow};
use genus_packets::quad_orders::{LevelStructure, QuadOrder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let disc: i64 = args.next().map_or(Ok(-23), |a| a.parse())?;
    let n: u64 = args.next().map_or(Ok(5), |a| a.parse())?;
    let level = LevelStructure::new(QuadOrder::from_disc(disc)?, (1, 0), n)?;
    let window = NormWindow::norms(0.0, 200.0)?;

    for pg in [false, true] {
        let fast = count_by_norm(&level, 1, &window, pg, None)?;
        let slow = lattice_oracle_count(&level, &window, pg)?;
        let total: u64 = fast.values().sum();
        println!("principal genus only: {pg}  total {total}  oracle agrees: {}", fast == slow);
        for (norm, c) in fast.iter().take(6) {
            println!("  Nr⁻¹ = {norm}: {c}");
        }
    }

    let p1 = (2..).find(|&p| level.order.chi(p) == 1 && (level.order.f * n) % p != 0).expect("split prime");
    for tau in 0..3 {
        let c = count_by_norm(&level, 1, &window, false, Some(Bowen { p1, tau }))?;
        println!("Bowen depth {tau} at {p1}: {} ideals", c.values().sum::<u64>());
    }
    Ok(())
}
