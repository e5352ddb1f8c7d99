use std::io::Write;

use clap::ValueEnum;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::json::{big, cpx, envelope, flt, form, rat, render};
use super::verify::{run_suite, VerifyParams};
use super::{BowenArgs, Command, DRange, Format, LevelArgs, Outcome, Output};
use crate::arith::int::is_prime;
use crate::ideal_counting::{count_variants, oracle_variants, Bowen, NormWindow};
use crate::lfunc::{
    conductor_bound, half_bounds, local_factor_at_one, local_factor_closed, local_factor_oracle_adaptive,
    local_volume, residue_bound_check, GlobalLSpec, LocalFactorSpec, LocalLevel, SplitType,
};
use crate::ortho_grid::{build_grid, genus_packet, grid_class};
use crate::quad_orders::{class_group, class_number_formula_check, pic_with_level_sizes, LevelStructure, QuadOrder};
use crate::sphere::{enumerate, representable};
use crate::stats::{congruence_filter, embed_packet, stats_csv, summary_csv, summary_rows, FilterBounds};

type Res<T> = std::result::Result<T, Outcome>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    Split,
    Inert,
    Ramified,
}

impl From<SplitArg> for SplitType {
    fn from(s: SplitArg) -> Self {
        match s {
            SplitArg::Split => SplitType::Split,
            SplitArg::Inert => SplitType::Inert,
            SplitArg::Ramified => SplitType::Ramified,
        }
    }
}

const MAX_RANGE: u64 = 1_000_000;

fn usage<T>(m: impl Into<String>) -> Res<T> {
    Err(Outcome::Usage(m.into()))
}

fn d_values(r: &DRange) -> Res<Vec<u64>> {
    match (r.d, r.d_min, r.d_max) {
        (Some(d), None, None) if d >= 1 => Ok(vec![d]),
        (None, Some(a), Some(b)) if 1 <= a && a <= b && b - a < MAX_RANGE => Ok((a..=b).collect()),
        (None, Some(_), Some(_)) => usage(format!("need 1 ≤ --d-min ≤ --d-max with fewer than {MAX_RANGE} values")),
        _ => usage("give either --d or both --d-min and --d-max"),
    }
}

fn pair(s: &str) -> Res<(i64, i64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts[..] {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => usage(format!("expected \"a,b\" with integers, got {s:?}")),
        },
        _ => usage(format!("expected \"a,b\", got {s:?}")),
    }
}

fn level(a: &LevelArgs) -> Res<LevelStructure> {
    let order = QuadOrder::from_disc(a.disc)?;
    if a.n == 1 {
        return Ok(LevelStructure::trivial(order));
    }
    Ok(LevelStructure::new(order, pair(&a.xi)?, a.n)?)
}

fn level_json(l: &LevelStructure) -> Value {
    json!({"disc": l.order.disc, "d_fund": l.order.d_fund, "f": l.order.f, "xi": [l.xi.0, l.xi.1], "n": l.n})
}

fn bowen(b: &BowenArgs) -> Res<Option<Bowen>> {
    match (b.p1, b.tau) {
        (None, 0) => Ok(None),
        (None, _) => usage("--tau needs --p1"),
        (Some(p1), tau) => Ok(Some(Bowen { p1, tau })),
    }
}

fn pool(jobs: usize) -> Res<rayon::ThreadPool> {
    if jobs == 0 {
        return usage("--jobs must be at least 1");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Outcome::Domain(format!("thread pool: {e}")))
}

/// Map over D values on `jobs` threads; the result keeps the order of `ds`.
fn sharded<T: Send>(jobs: usize, ds: &[u64], f: impl Fn(u64) -> Res<T> + Sync + Send) -> Res<Vec<T>> {
    pool(jobs)?.install(|| ds.par_iter().map(|&d| f(d)).collect())
}

fn emit(o: &Output, text: &str, out: &mut dyn Write) -> Res<()> {
    let io = |e: std::io::Error| Outcome::Domain(format!("write: {e}"));
    match &o.out {
        Some(path) => std::fs::write(path, text).map_err(io),
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}

fn emit_json(o: &Output, command: &str, params: Value, results: Vec<Value>, out: &mut dyn Write) -> Res<()> {
    if o.format != Format::Json {
        return usage(format!("{command} writes JSON only"));
    }
    emit(o, &render(&envelope(command, params, results)), out)
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Res<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let e = |e: csv::Error| Outcome::Domain(format!("csv: {e}"));
    w.write_record(header).map_err(e)?;
    for r in rows {
        w.write_record(&r).map_err(e)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| Outcome::Domain(format!("csv: {e}")))?).expect("ascii"))
}

fn range_json(r: &DRange) -> Value {
    json!({"d": r.d, "d_min": r.d_min, "d_max": r.d_max})
}

pub fn dispatch(cmd: Command, out: &mut dyn Write) -> Res<()> {
    match cmd {
        Command::Spheres { range, output } => spheres(&range, &output, out),
        Command::Grids { range, output } => grids(&range, &output, out),
        Command::Packet { range, output } => packet(&range, &output, out),
        Command::Classgroup { disc, xi, n, output } => classgroup(disc, xi, n, &output, out),
        Command::CnfCheck { level: l, truncation, output } => {
            let lv = level(&l)?;
            let r = class_number_formula_check(&lv, truncation)?;
            let s = &r.sizes;
            let res = json!({
                "level": level_json(&lv),
                "h": s.h, "units": s.units, "level_units": s.level_units,
                "local": s.local.iter().map(|&(p, u, nrm)| json!({"p": p, "unit_index": u, "norm_index": nrm})).collect::<Vec<_>>(),
                "pic": s.pic, "pic_pg": s.pic_pg, "genus_index": s.index,
                "lhs": flt(r.lhs), "rhs": flt(r.rhs),
                "l1": flt(r.l1.value), "l1_remainder": flt(r.l1.remainder),
                "conductor_factor": flt(r.conductor_factor),
                "relative_deviation": flt(r.relative_deviation),
            });
            emit_json(&output, "cnf-check", json!({"level": level_json(&lv), "truncation": truncation}), vec![res], out)
        }
        Command::Count { level: l, x_min, x_max, norm_min, norm_max, y_order, pg, bowen: b, oracle, output } => {
            let lv = level(&l)?;
            let window = match (x_min, x_max, norm_min, norm_max) {
                (xa, Some(xb), None, None) => NormWindow::new(xa.unwrap_or(0.0), xb, lv.order.disc)?,
                (None, None, na, Some(nb)) => NormWindow::norms(na.unwrap_or(0.0), nb)?,
                _ => return usage("give --x-max (and --x-min) or --norm-max (and --norm-min)"),
            };
            count(&lv, window, y_order, pg, bowen(&b)?, oracle, &output, out)
        }
        Command::Lfactor { p, split_type, n, xi, e, s, tau, oracle, tolerance, output } => {
            let lvl = match (xi, e) {
                (None, 0) => LocalLevel::Trivial,
                (Some(x), e) if e >= 1 => LocalLevel::Point { xi: pair(&x)?, e },
                _ => return usage("a level point needs both --xi and --e ≥ 1"),
            };
            let s = parse_s(&s)?;
            let spec = LocalFactorSpec::new(p, split_type.into(), n, lvl, s, tau)?;
            lfactor(&spec, oracle, tolerance, &output, out)
        }
        Command::Residue { level: l, bowen: b, truncation, output } => {
            let lv = level(&l)?;
            let bw = bowen(&b)?;
            let spec = GlobalLSpec::new(lv, 0, truncation)?;
            let r = residue_bound_check(&spec, bw)?;
            let res = json!({
                "l1": flt(r.l1.value), "l1_remainder": flt(r.l1.remainder),
                "rational_part": rat(&r.rational_part), "residue": flt(r.residue),
                "bound": rat(&r.bound), "holds": r.holds, "equality": r.equality,
            });
            let params = json!({"level": level_json(&lv), "p1": b.p1, "tau": b.tau, "truncation": truncation});
            emit_json(&output, "residue", params, vec![res], out)
        }
        Command::Stats { range, p1, p2, max_val_f, max_val_n, summary, output } => {
            stats(&range, p1, p2, FilterBounds { conductor: max_val_f, level: max_val_n }, summary, &output, out)
        }
        Command::Verify { suite, max_d, max_p, max_disc, max_level, norm_max, count_disc, truncation, seed, output } => {
            let d = VerifyParams::default();
            let params = VerifyParams {
                max_d: max_d.unwrap_or(d.max_d),
                max_p: max_p.unwrap_or(d.max_p),
                max_disc: max_disc.unwrap_or(d.max_disc),
                max_level: max_level.unwrap_or(d.max_level),
                norm_max: norm_max.unwrap_or(d.norm_max),
                count_disc: count_disc.unwrap_or(d.count_disc),
                truncation: truncation.unwrap_or(d.truncation),
                seed: seed.unwrap_or(d.seed),
            };
            if params.truncation < 1000 {
                return usage("--truncation must be at least 1000");
            }
            let reports = pool(output.jobs)?.install(|| run_suite(suite, &params));
            let ok = reports.iter().all(|r| r.passed());
            let pj = json!({
                "suite": suite.name(), "max_d": params.max_d, "max_p": params.max_p, "max_disc": params.max_disc,
                "max_level": params.max_level, "norm_max": flt(params.norm_max), "count_disc": params.count_disc,
                "truncation": params.truncation, "seed": params.seed,
            });
            emit_json(&output, "verify", pj, reports.iter().map(|r| r.to_json()).collect(), out)?;
            if ok {
                Ok(())
            } else {
                Err(Outcome::Verification)
            }
        }
    }
}

fn parse_s(s: &str) -> Res<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Outcome::Usage(format!("bad --s {s:?}"));
    // "p/q" is accepted so that s = 1/2 can be given exactly
    let num = |x: &str| match x.split_once('/') {
        Some((p, q)) => match (p.trim().parse::<f64>(), q.trim().parse::<f64>()) {
            (Ok(p), Ok(q)) if q != 0.0 => Ok(p / q),
            _ => Err(bad()),
        },
        None => x.parse::<f64>().map_err(|_| bad()),
    };
    match parts[..] {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => usage(format!("bad --s {s:?}")),
    }
}

fn spheres(range: &DRange, o: &Output, out: &mut dyn Write) -> Res<()> {
    let ds = d_values(range)?;
    let pts = sharded(o.jobs, &ds, |d| Ok(enumerate(d)))?;
    match o.format {
        Format::Json => {
            let results = ds
                .iter()
                .zip(&pts)
                .map(|(d, p)| {
                    json!({"D": d, "representable": representable(*d), "count": p.len(),
                           "points": p.iter().map(|x| x.coords.to_vec()).collect::<Vec<_>>()})
                })
                .collect();
            emit_json(o, "spheres", range_json(range), results, out)
        }
        Format::Csv => {
            let rows = ds
                .iter()
                .zip(&pts)
                .flat_map(|(d, p)| p.iter().map(move |x| vec![d.to_string(), x.coords[0].to_string(), x.coords[1].to_string(), x.coords[2].to_string()]))
                .collect();
            emit(o, &csv_text(&["D", "x", "y", "z"], rows)?, out)
        }
    }
}

fn grids(range: &DRange, o: &Output, out: &mut dyn Write) -> Res<()> {
    let ds = d_values(range)?;
    let per_d = sharded(o.jobs, &ds, |d| {
        enumerate(d)
            .iter()
            .map(|x| {
                let g = build_grid(x)?;
                let c = grid_class(&g);
                Ok(json!({
                    "D": d, "x": x.coords.to_vec(),
                    "x1": g.x1.iter().map(big).collect::<Vec<_>>(),
                    "basis": g.lattice.basis.iter().map(|b| b.iter().map(big).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "tors": [rat(&g.tors_coords[0]), rat(&g.tors_coords[1])],
                    "class": {"form": form(&c.form), "content": big(&c.content), "tors": [rat(&c.tors[0]), rat(&c.tors[1])]},
                }))
            })
            .collect::<Res<Vec<Value>>>()
    })?;
    emit_json(o, "grids", range_json(range), per_d.into_iter().flatten().collect(), out)
}

fn packet(range: &DRange, o: &Output, out: &mut dyn Write) -> Res<()> {
    let ds = d_values(range)?;
    if ds.len() == 1 && !representable(ds[0]) {
        return Err(Outcome::Domain(format!("D = {} not representable as a sum of three coprime squares", ds[0])));
    }
    let kept: Vec<u64> = ds.into_iter().filter(|&d| representable(d)).collect();
    let results = sharded(o.jobs, &kept, |d| {
        let p = genus_packet(d)?;
        Ok(json!({
            "D": d, "disc": p.disc, "class_number": p.class_number, "predicted_orbits": p.predicted_orbits,
            "orbit_count_matches": p.orbit_count_matches, "single_genus": p.single_genus,
            "entries": p.entries.iter().zip(&p.squared_forms).map(|(e, sq)| json!({
                "representative": e.representative.coords.to_vec(), "orbit_size": e.orbit_size,
                "form": form(&e.class.form), "content": big(&e.class.content),
                "tors": [rat(&e.class.tors[0]), rat(&e.class.tors[1])], "genus": e.genus, "squared_form": form(sq),
            })).collect::<Vec<_>>(),
        }))
    })?;
    emit_json(o, "packet", range_json(range), results, out)
}

fn classgroup(disc: i64, xi: Option<String>, n: Option<u64>, o: &Output, out: &mut dyn Write) -> Res<()> {
    let cg = class_group(disc)?;
    let pg = cg.principal_genus();
    let mut res = json!({
        "disc": disc, "h": cg.h(),
        "forms": cg.classes.iter().zip(&cg.genus_chars).map(|(f, g)| json!({"form": form(f), "genus": g})).collect::<Vec<_>>(),
        "principal_genus": pg.iter().map(|&i| form(&cg.classes[i])).collect::<Vec<_>>(),
    });
    let lv = match (xi, n) {
        (None, None) => None,
        (x, Some(n)) => Some(level(&LevelArgs { disc, xi: x.unwrap_or_else(|| "1,0".into()), n })?),
        (Some(_), None) => return usage("--xi needs --n"),
    };
    if let Some(l) = lv {
        let s = pic_with_level_sizes(&l)?;
        let c = conductor_bound(&l)?;
        res["level"] = level_json(&l);
        res["pic"] = json!({
            "units": s.units, "level_units": s.level_units, "pic": s.pic, "pic_pg": s.pic_pg,
            "genus_index": s.index, "quotient_exponent": s.quotient_exponent,
            "local": s.local.iter().map(|&(p, u, nrm)| json!({"p": p, "unit_index": u, "norm_index": nrm})).collect::<Vec<_>>(),
        });
        res["conductor"] = json!({
            "norm": c.norm.to_string(), "bound": c.bound.to_string(), "divides": c.divides,
            "local": c.local.iter().map(|l| json!({"p": l.p, "exponents": l.exponents, "bound_exponents": l.bound_exponents, "unique": l.unique})).collect::<Vec<_>>(),
        });
    }
    emit_json(o, "classgroup", json!({"disc": disc}), vec![res], out)
}

#[allow(clippy::too_many_arguments)]
fn count(l: &LevelStructure, w: NormWindow, y_order: u64, pg: bool, b: Option<Bowen>, oracle: bool, o: &Output, out: &mut dyn Write) -> Res<()> {
    let taus = [b.map_or(0, |b| b.tau)];
    let v = count_variants(l, y_order, &w, b.map(|b| b.p1), &taus)?;
    let counts = if pg { &v[0].pg } else { &v[0].all };
    let agrees = if oracle {
        if y_order != 1 {
            return usage("the oracle covers trivial y-level only");
        }
        let ov = oracle_variants(l, &w, b.map(|b| b.p1), &taus)?;
        Some(if pg { ov[0].pg == *counts } else { ov[0].all == *counts })
    } else {
        None
    };
    match o.format {
        Format::Csv => {
            let rows = counts.entries.iter().map(|&(k, c)| vec![k.to_string(), counts.den.to_string(), c.to_string()]).collect();
            emit(o, &csv_text(&["norm_num", "norm_den", "count"], rows)?, out)?;
        }
        Format::Json => {
            let map = counts.to_map();
            let res = json!({
                "total": counts.total(),
                // nontrivial y uses the containing coset, so counts bound the true ones from above
                "upper_bound": y_order != 1,
                "oracle_agrees": agrees,
                "counts": map.iter().map(|(k, c)| json!({"norm": rat(k), "count": c})).collect::<Vec<_>>(),
            });
            let params = json!({
                "level": level_json(l), "y_order": y_order, "pg": pg,
                "window": {"lower": flt(w.lower), "upper": flt(w.upper)},
                "p1": b.map(|b| b.p1), "tau": taus[0],
            });
            emit_json(o, "count", params, vec![res], out)?;
        }
    }
    if agrees == Some(false) {
        return Err(Outcome::Verification);
    }
    Ok(())
}

fn lfactor(spec: &LocalFactorSpec, oracle: bool, tol: f64, o: &Output, out: &mut dyn Write) -> Res<()> {
    let closed = local_factor_closed(spec)?;
    let v = local_volume(spec.p, spec.split_type, spec.n);
    let mut res = json!({
        "closed": cpx(closed),
        "volumes": {"maximal_units": rat(&v.maximal_units), "units": rat(&v.units), "lattice": rat(&v.lattice), "unit_ratio": rat(&v.unit_ratio)},
    });
    if spec.s == Complex64::new(1.0, 0.0) {
        res["at_one"] = rat(&local_factor_at_one(spec)?);
    }
    if spec.tau == 0 {
        let h = half_bounds(spec)?;
        res["half_bounds"] = json!({"value": flt(h.value), "stated": flt(h.stated), "corrected": flt(h.corrected),
                                    "holds": h.holds(), "holds_corrected": h.holds_corrected()});
    }
    let mut agrees = true;
    if oracle {
        if !(tol > 0.0) {
            return usage("--tolerance must be positive");
        }
        let ov = local_factor_oracle_adaptive(spec, tol)?;
        agrees = (ov.value - closed).norm() <= 1e-9;
        res["oracle"] = json!({"value": cpx(ov.value), "tail": flt(ov.tail), "cutoff": ov.cutoff, "agrees": agrees});
    }
    let level = match spec.level {
        LocalLevel::Trivial => Value::Null,
        LocalLevel::Point { xi, e } => json!({"xi": [xi.0, xi.1], "e": e}),
    };
    let params = json!({"p": spec.p, "split_type": spec.split_type, "n": spec.n, "level": level, "s": cpx(spec.s),
                        "tau": spec.tau, "field": spec.field});
    emit_json(o, "lfactor", params, vec![res], out)?;
    if agrees {
        Ok(())
    } else {
        Err(Outcome::Verification)
    }
}

fn stats(range: &DRange, p1: Option<u64>, p2: Option<u64>, bounds: FilterBounds, summary: Option<std::path::PathBuf>, o: &Output, out: &mut dyn Write) -> Res<()> {
    let mut ds = d_values(range)?;
    match (p1, p2) {
        (Some(a), Some(b)) => ds = congruence_filter(&ds, a, b, bounds)?,
        (None, None) => {}
        _ => return usage("--p1 and --p2 go together"),
    }
    if let (Some(a), Some(b)) = (p1, p2) {
        if !is_prime(a) || !is_prime(b) {
            return Err(Outcome::Domain("p₁, p₂ must be prime".into()));
        }
    }
    let packets = sharded(o.jobs, &ds, |d| Ok(embed_packet(d)?))?;
    match o.format {
        Format::Csv => {
            emit(o, &stats_csv(&packets)?, out)?;
            let path = summary.or_else(|| {
                o.out.as_ref().map(|p| {
                    let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("stats");
                    p.with_file_name(format!("{stem}_summary.csv"))
                })
            });
            if let Some(path) = path {
                std::fs::write(&path, summary_csv(&packets)?).map_err(|e| Outcome::Domain(format!("write: {e}")))?;
            }
            Ok(())
        }
        Format::Json => {
            let results = packets
                .iter()
                .map(|p| {
                    let rows = summary_rows(p)?;
                    Ok(json!({
                        "D": p.d, "disc": p.disc,
                        "records": p.records.iter().map(|r| json!({
                            "orbit_id": r.orbit_id, "orbit_size": r.orbit_size, "representative": r.representative.to_vec(),
                            "sphere": r.sphere.iter().map(|&x| flt(x)).collect::<Vec<_>>(),
                            "form": r.form.to_vec(), "tau": cpx(r.tau),
                            "tors": [rat(&r.tors[0]), rat(&r.tors[1])],
                            "fiber": r.fiber.iter().map(|&x| flt(x)).collect::<Vec<_>>(),
                        })).collect::<Vec<_>>(),
                        "summary": rows.iter().map(|s| json!({"statistic": s.statistic, "parameter": s.parameter, "value": flt(s.value)})).collect::<Vec<_>>(),
                    }))
                })
                .collect::<Res<Vec<Value>>>()?;
            let params = json!({"range": range_json(range), "p1": p1, "p2": p2,
                                "max_val_f": bounds.conductor, "max_val_n": bounds.level});
            emit_json(o, "stats", params, results, out)
        }
    }
}
