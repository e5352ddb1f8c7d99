//! CSV emission with fixed row order and 17-significant-digit floats.

use serde::{Deserialize, Serialize};

use super::{cusp_profile, fiber_exponential_sums, weyl_sums_sphere, PacketEmbedding};
use crate::error::Result;

pub const STATS_HEADER: [&str; 9] =
    ["D", "orbit_id", "sphere_x", "sphere_y", "sphere_z", "tau_re", "tau_im", "fiber_u", "fiber_v"];
pub const SUMMARY_HEADER: [&str; 4] = ["D", "statistic", "parameter", "value"];

/// Decimal string with 17 significant digits (positional for exponents in [−5, 16]).
pub fn float17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    // no negative zero
    let x = if x == 0.0 { 0.0 } else { x };
    let sci = format!("{:.16e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..=16).contains(&exp) {
        return sci;
    }
    let (sign, mant) = mant.strip_prefix('-').map_or(("", mant), |m| ("-", m));
    let digits: String = mant.chars().filter(|c| *c != '.').collect();
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let (int, rest) = digits.split_at(exp as usize + 1);
        if rest.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{rest}")
        }
    };
    format!("{sign}{body}")
}

fn write_rows(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| crate::Error::Invalid(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Invalid(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

/// One row per orbit, packets in the given order.
pub fn stats_csv(packets: &[PacketEmbedding]) -> Result<String> {
    let rows = packets.iter().flat_map(|p| {
        p.records.iter().map(move |r| {
            let mut row = vec![p.d.to_string(), r.orbit_id.to_string()];
            row.extend(r.sphere.iter().map(|&x| float17(x)));
            row.push(float17(r.tau.re));
            row.push(float17(r.tau.im));
            row.extend(r.fiber.iter().map(|&x| float17(x)));
            row
        })
    });
    write_rows(&STATS_HEADER, rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub d: u64,
    pub statistic: String,
    pub parameter: String,
    pub value: f64,
}

pub const WEYL_DEGREE: usize = 6;
pub const FIBER_FREQ: i64 = 2;
pub const CUSP_HEIGHTS: [f64; 5] = [1.0, 1.25, 1.5, 2.0, 3.0];

/// Summary statistics of one packet: sphere Weyl sums over D^{−1/2}𝓗_D, fiber exponential
/// sums and the cusp profile over the orbits.
pub fn summary_rows(p: &PacketEmbedding) -> Result<Vec<SummaryRow>> {
    let mut out = Vec::new();
    if p.records.is_empty() {
        return Ok(out);
    }
    let row = |statistic: &str, parameter: String, value: f64| SummaryRow { d: p.d, statistic: statistic.into(), parameter, value };
    out.push(row("orbits", String::new(), p.records.len() as f64));
    for (l, w) in weyl_sums_sphere(&p.full_sphere(), WEYL_DEGREE)?.into_iter().enumerate() {
        out.push(row("sphere_weyl", l.to_string(), w));
    }
    for (m, s) in fiber_exponential_sums(&p.fiber_points(), FIBER_FREQ)? {
        out.push(row("fiber_exp", format!("{} {}", m[0], m[1]), s));
    }
    for c in cusp_profile(&p.surface_points(), &CUSP_HEIGHTS)? {
        out.push(row("cusp_share", float17(c.height), c.empirical));
        out.push(row("cusp_deviation", float17(c.height), c.empirical - c.expected));
    }
    Ok(out)
}

pub fn summary_csv(packets: &[PacketEmbedding]) -> Result<String> {
    let mut rows = Vec::new();
    for p in packets {
        rows.extend(summary_rows(p)?);
    }
    write_rows(
        &SUMMARY_HEADER,
        rows.into_iter().map(|r| vec![r.d.to_string(), r.statistic, r.parameter, float17(r.value)]),
    )
}
