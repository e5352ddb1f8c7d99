//! The genus packet of D: grid form classes with their genus characters.
//!
//! cargo run --example genus_packet -- 1009

use genus_packets::ortho_grid::genus_packet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d: u64 = std::env::args().nth(1).map_or(Ok(1009), |a| a.parse())?;
    let p = genus_packet(d)?;
    println!("D = {d}, disc {}, h = {}", p.disc, p.class_number);
    println!("orbits {} (predicted {}), single genus: {}", p.entries.len(), p.predicted_orbits, p.single_genus);
    for (e, sq) in p.entries.iter().zip(&p.squared_forms) {
        println!("  {}  genus {:?}  squared {}", e.class.form, e.genus, sq);
    }
    Ok(())
}
