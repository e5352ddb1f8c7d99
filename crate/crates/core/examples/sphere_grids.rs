//! Points of 𝓗_D up to rotation, with the orthogonal grid of each orbit representative.
//!
//! cargo run --example sphere_grids -- 101

use genus_packets::ortho_grid::{build_grid, check_grid, grid_class, order_u64};
use genus_packets::sphere::{enumerate, representable, rotation_orbits};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d: u64 = std::env::args().nth(1).map_or(Ok(101), |a| a.parse())?;
    if !representable(d) {
        println!("D = {d} is not a sum of three coprime squares");
        return Ok(());
    }
    let points = enumerate(d);
    let orbits = rotation_orbits(&points)?;
    println!("D = {d}: {} points, {} rotation orbits", points.len(), orbits.len());
    for o in &orbits {
        let g = build_grid(&o.representative)?;
        let c = grid_class(&g);
        println!(
            "  {:?} ×{:<3} form {}  tors ({}, {}) of order {}  grid ok: {}",
            o.representative.coords,
            o.members.len(),
            c.form,
            c.tors[0],
            c.tors[1],
            order_u64(&c.tors),
            check_grid(&g),
        );
    }
    Ok(())
}
