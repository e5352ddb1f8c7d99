//! Embed genus packets in sphere × modular surface × fiber coordinates and write the
//! per-orbit and summary CSVs.
//!
//! cargo run --release --example packet_stats -- 101 1009 [out_dir]

use std::path::PathBuf;

use genus_packets::stats::{embed_packet, stats_csv, summary_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut ds = Vec::new();
    let mut out: Option<PathBuf> = None;
    for a in std::env::args().skip(1) {
        match a.parse::<u64>() {
            Ok(d) => ds.push(d),
            Err(_) => out = Some(a.into()),
        }
    }
    if ds.is_empty() {
        ds = vec![101];
    }
    for d in ds {
        let p = embed_packet(d)?;
        let rows = stats_csv(std::slice::from_ref(&p))?;
        let summary = summary_csv(std::slice::from_ref(&p))?;
        match &out {
            Some(dir) => {
                std::fs::write(dir.join(format!("stats_{d}.csv")), rows)?;
                std::fs::write(dir.join(format!("stats_{d}_summary.csv")), summary)?;
            }
            None => {
                println!("D = {d}: {} orbits, disc {}", p.records.len(), p.disc);
                print!("{summary}");
            }
        }
    }
    Ok(())
}
