//! Class groups, Picard groups with level and the class number formula.
//!
//! cargo run --release --example class_groups -- -84 7

use genus_packets::quad_orders::{class_group, class_number_formula_check, pic_with_level_sizes, LevelStructure, QuadOrder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let disc: i64 = args.next().map_or(Ok(-84), |a| a.parse())?;
    let n: u64 = args.next().map_or(Ok(7), |a| a.parse())?;

    let cg = class_group(disc)?;
    println!("disc {disc}: h = {}", cg.h());
    for (f, g) in cg.classes.iter().zip(&cg.genus_chars) {
        println!("  {f}  {g:?}");
    }

    let order = QuadOrder::from_disc(disc)?;
    for level in [LevelStructure::trivial(order), LevelStructure::new(order, (1, 0), n)?] {
        let s = pic_with_level_sizes(&level)?;
        let r = class_number_formula_check(&level, 1_000_000)?;
        println!(
            "N = {}: |Pic| = {}, |Pic^pg| = {}, index {}, lhs {:.9} rhs {:.9} (rel. dev. {:.2e})",
            level.n, s.pic, s.pic_pg, s.index, r.lhs, r.rhs, r.relative_deviation
        );
    }
    Ok(())
}
