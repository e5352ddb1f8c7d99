//! Finite-D diagnostics for genus packets: the packet in sphere × modular surface × fiber
//! coordinates, spherical Weyl sums, fiber exponential sums, cusp profiles and the
//! congruence filters on the sequence of D.

mod report;
mod sums;

pub use report::{float17, stats_csv, summary_csv, summary_rows, SummaryRow, STATS_HEADER, SUMMARY_HEADER};
pub use sums::{
    cusp_profile, fiber_exponential_sums, fiber_exponential_sums_exact, frequencies, weyl_sums_sphere,
    weyl_sums_sphere_pairwise, CuspRow,
};

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::int::{fundamental_part, is_prime, kronecker, val};
use crate::arith::Rational;
use crate::error::{invalid, Result};
use crate::ortho_grid::{genus_packet, packet_disc};
use crate::sphere::{enumerate, representable};

/// One rotation orbit of 𝓗_D.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketRecord {
    pub orbit_id: usize,
    pub orbit_size: usize,
    pub representative: [i64; 3],
    /// representative / √D
    pub sphere: [f64; 3],
    /// reduced form (a, b, c) of the grid
    pub form: [i64; 3],
    /// (−b + √(4ac − b²)·i) / 2a
    pub tau: Complex64,
    /// torsion point in the basis (1, τ), exact
    pub tors: [Rational; 2],
    pub fiber: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketEmbedding {
    pub d: u64,
    pub disc: i64,
    pub records: Vec<PacketRecord>,
}

impl PacketEmbedding {
    pub fn sphere_points(&self) -> Vec<[f64; 3]> {
        self.records.iter().map(|r| r.sphere).collect()
    }

    pub fn surface_points(&self) -> Vec<Complex64> {
        self.records.iter().map(|r| r.tau).collect()
    }

    pub fn fiber_points(&self) -> Vec<[f64; 2]> {
        self.records.iter().map(|r| r.fiber).collect()
    }

    /// All of D^{−1/2}𝓗_D, not only the orbit representatives.
    pub fn full_sphere(&self) -> Vec<[f64; 3]> {
        let s = (self.d as f64).sqrt();
        enumerate(self.d).iter().map(|p| p.coords.map(|c| c as f64 / s)).collect()
    }
}

fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

fn to_i64(x: &num_bigint::BigInt) -> i64 {
    x.to_i64().expect("form coefficients fit in i64")
}

/// The packet of D with one record per rotation orbit; empty when D is not a sum of three
/// coprime squares.
pub fn embed_packet(d: u64) -> Result<PacketEmbedding> {
    if !representable(d) {
        return Ok(PacketEmbedding { d, disc: if d == 0 { 0 } else { packet_disc(d) }, records: Vec::new() });
    }
    let packet = genus_packet(d)?;
    let root = (d as f64).sqrt();
    let records = packet
        .entries
        .iter()
        .enumerate()
        .map(|(orbit_id, e)| {
            let [a, b, c] = [&e.class.form.a, &e.class.form.b, &e.class.form.c].map(to_i64);
            let im = ((4 * a as i128 * c as i128 - b as i128 * b as i128) as f64).sqrt() / (2 * a) as f64;
            let tau = Complex64::new(-(b as f64) / (2 * a) as f64, im);
            // the grid basis (e₁, e₂) has Gram form (a, b, c); e₁ ↦ 1, −e₂ ↦ τ
            let tors = [frac(&e.class.tors[0]), frac(&-e.class.tors[1].clone())];
            let fiber = tors.clone().map(|t| t.to_f64().expect("finite"));
            PacketRecord {
                orbit_id,
                orbit_size: e.orbit_size,
                representative: e.representative.coords,
                sphere: e.representative.coords.map(|x| x as f64 / root),
                form: [a, b, c],
                tau,
                tors,
                fiber,
            }
        })
        .collect();
    Ok(PacketEmbedding { d, disc: packet.disc, records })
}

/// Valuation bounds for the congruence filters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterBounds {
    /// max val_p(f) for p ∈ {p₁, p₂}
    pub conductor: u32,
    /// max val_p(N) for p ∈ {p₁, p₂}, with N = D
    pub level: u32,
}

/// D with p₁, p₂ split in the field of the packet discriminant and bounded valuations of
/// the conductor and of the torsion order.
pub fn congruence_filter(ds: &[u64], p1: u64, p2: u64, bounds: FilterBounds) -> Result<Vec<u64>> {
    if p1 == p2 {
        return invalid("p₁ and p₂ must differ");
    }
    if !is_prime(p1) || !is_prime(p2) {
        return invalid("p₁ and p₂ must be prime");
    }
    Ok(ds
        .iter()
        .copied()
        .filter(|&d| {
            if !representable(d) {
                return false;
            }
            let (d_fund, f) = fundamental_part(packet_disc(d));
            [p1, p2].iter().all(|&p| {
                kronecker(d_fund as i128, p as i128) == 1
                    && val(p, f as i128) <= bounds.conductor
                    && val(p, d as i128) <= bounds.level
            })
        })
        .collect())
}
