//! Lattice-point oracle.
//!
//! Pic(Λ,x) is enumerated as pairs (F, κ) with F a form class and κ ∈ (Λ/N)^×/(H_N·Λ^×),
//! H_N the stabilizer of ξ mod N. For the class (F, κ) take 𝔞 = c_κ·𝔯_F coprime to disc·N,
//! a = Nr 𝔞 and 𝔟 = conj 𝔞 = a𝔞⁻¹. Its ideals with level of norm n correspond to
//! u ∈ 𝔟 with u ≡ aξ mod NΛ and Nr u = n·N²·a, counted up to Λ^×(x).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{check_bowen, CountVariants, IdealLevelClass, NormCounts, NormWindow};
use crate::arith::int::{egcd, gcd, val};
use crate::arith::Rational;
use crate::error::{domain, Error, Result};
use crate::quad_orders::ring::{El, QuadRing};
use crate::quad_orders::{class_group, local_norm_data, LevelStructure};

/// Bound on the number of lattice points the oracle will visit.
pub const MAX_POINTS: f64 = 2e8;

type Pair = (i128, i128);

struct ClassData {
    info: IdealLevelClass,
    a: i128,
    beta: [Pair; 2],
    /// 𝔟-coordinates of the base point u0
    start: (i128, i128),
    pg: bool,
}

fn coset_reps(level: &LevelStructure) -> Vec<El> {
    let n = level.n as i64;
    if n == 1 {
        return vec![(1, 0)];
    }
    let (t, nm) = level.order.omega_tn();
    let ring = QuadRing::new(n, t, nm);
    let units: Vec<El> = ring.elements().filter(|&x| gcd(ring.norm(x), n) == 1).collect();
    let xi = ring.red(level.xi);
    let stab: Vec<El> = units.iter().copied().filter(|&u| ring.mul(ring.sub(u, (1, 0)), xi) == (0, 0)).collect();
    let globals: Vec<El> = level.order.units().iter().map(|&(a, b)| ring.red((a as i64, b as i64))).collect();
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for &k in &units {
        if seen.contains(&k) {
            continue;
        }
        reps.push(k);
        for &h in &stab {
            for &e in &globals {
                seen.insert(ring.mul(ring.mul(k, h), e));
            }
        }
    }
    reps
}

fn classes(level: &LevelStructure) -> Result<Vec<ClassData>> {
    let order = level.order;
    let (t, nm) = order.omega_tn();
    let (t, nm) = (t as i128, nm as i128);
    let sigma = t;
    let n = level.n as i128;
    let dn = order.disc.unsigned_abs() as i128 * n;
    let cg = class_group(order.disc)?;
    let norm = |x: Pair| x.0 * x.0 + t * x.0 * x.1 + nm * x.1 * x.1;
    let mul = |x: Pair, y: Pair| {
        let bd = x.1 * y.1;
        (x.0 * y.0 - nm * bd, x.0 * y.1 + x.1 * y.0 + t * bd)
    };
    let conj = |x: Pair| (x.0 + x.1 * t, -x.1);
    let gcd128 = |a: i128, b: i128| egcd(a, b).0.abs();
    let kappas = coset_reps(level);
    let norm_data: Vec<_> = level.bad_primes().into_iter().map(|p| local_norm_data(level, p)).collect();
    let mut out = Vec::new();
    for f in &cg.classes {
        // an equivalent form whose first coefficient is prime to disc·N
        let (u, v) = (0i128..60)
            .flat_map(|s| (0..=s).flat_map(move |u| [(u, s - u), (u, u - s)]))
            .find(|&(u, v)| {
                gcd128(u, v) == 1 && {
                    let val = f.eval(&BigInt::from(u), &BigInt::from(v)).to_i128().unwrap_or(0);
                    val != 0 && gcd128(val, dn) == 1
                }
            })
            .ok_or_else(|| Error::Domain(format!("no value of {f} prime to {dn}")))?;
        let (_, s, q) = egcd(u, v);
        // u·s + v·q = 1, so [[u, −q], [v, s]] ∈ SL₂(ℤ)
        let g = [[BigInt::from(u), BigInt::from(-q)], [BigInt::from(v), BigInt::from(s)]];
        let fp = f.transform(&g);
        let a1 = fp.a.to_i128().expect("small");
        let b1 = fp.b.to_i128().expect("small");
        let w: Pair = ((-b1 - sigma) / 2, 1);
        for &kappa in &kappas {
            let c = (0i128..40)
                .flat_map(|s| (0..=s).flat_map(move |i| [(i, s - i), (-i, s - i), (i, i - s), (-i, i - s)]))
                .map(|(i, j)| (kappa.0 as i128 + n * i, kappa.1 as i128 + n * j))
                .find(|&c| gcd128(norm(c), dn) == 1)
                .ok_or_else(|| Error::Domain("no lift of κ prime to disc·N".into()))?;
            let a = norm(c) * a1;
            let beta = [conj(mul(c, (a1, 0))), conj(mul(c, w))];
            let target = (a * level.xi.0 as i128, a * level.xi.1 as i128);
            let mut start = None;
            'search: for i in 0..n {
                for j in 0..n {
                    let x = (i * beta[0].0 + j * beta[1].0 - target.0, i * beta[0].1 + j * beta[1].1 - target.1);
                    if x.0.rem_euclid(n) == 0 && x.1.rem_euclid(n) == 0 {
                        start = Some((i, j));
                        break 'search;
                    }
                }
            }
            let start = start.ok_or_else(|| Error::Domain("no base point in the class".into()))?;
            let pg = norm_data.iter().all(|nd| nd.contains((a % nd.modulus as i128) as i64));
            out.push(ClassData {
                info: IdealLevelClass {
                    form: f.clone(),
                    norm: Rational::from_integer(BigInt::from(a)),
                    residue: kappa,
                },
                a,
                beta,
                start,
                pg,
            });
        }
    }
    Ok(out)
}

/// Representatives of Pic(Λ,x).
pub fn level_classes(level: &LevelStructure) -> Result<Vec<IdealLevelClass>> {
    Ok(classes(level)?.into_iter().map(|c| c.info).collect())
}

/// Representatives of Pic^pg(Λ,x).
pub fn principal_genus_classes(level: &LevelStructure) -> Result<Vec<IdealLevelClass>> {
    Ok(classes(level)?.into_iter().filter(|c| c.pg).map(|c| c.info).collect())
}

/// Ideal counts by exhaustive ellipse enumeration, trivial y-level.
pub fn lattice_oracle_count(
    level: &LevelStructure,
    window: &NormWindow,
    pg_only: bool,
) -> Result<std::collections::BTreeMap<Rational, u64>> {
    let v = oracle_variants(level, window, None, &[0])?;
    Ok(if pg_only { v[0].pg.to_map() } else { v[0].all.to_map() })
}

/// Oracle counts for several Bowen depths at p₁ in one enumeration.
pub fn oracle_variants(
    level: &LevelStructure,
    window: &NormWindow,
    p1: Option<u64>,
    taus: &[u32],
) -> Result<Vec<CountVariants>> {
    let order = level.order;
    if let Some(p) = p1 {
        check_bowen(&order, p, level.n)?;
    }
    let n = level.n as i128;
    let den = level.n * level.n;
    let kmax = window.max_key(den)?;
    let data = classes(level)?;
    let root = (order.disc.unsigned_abs() as f64).sqrt();
    let est = data.len() as f64 * (std::f64::consts::PI * kmax as f64 / (den as f64 * root / 2.0) + 1.0);
    if est > MAX_POINTS {
        return Err(Error::TooLarge(format!(
            "about {est:.3e} lattice points; the oracle visits at most {MAX_POINTS:.0e} (lower the window upper bound)"
        )));
    }
    let (t, nm) = order.omega_tn();
    let (t, nm) = (t as i128, nm as i128);
    let (t64, nm64) = (t as i64, nm as i64);
    let norm64 = |x: (i64, i64)| x.0 * x.0 + t64 * x.0 * x.1 + nm64 * x.1 * x.1;
    let emb = |x: Pair| (x.0 as f64 + x.1 as f64 * t as f64 / 2.0, x.1 as f64 * root / 2.0);
    let depth_cap = taus.iter().copied().max().unwrap_or(0);
    let nt = taus.len();
    let size = kmax as usize + 1;
    let mut all = vec![vec![0u32; size]; nt];
    let mut pg = vec![vec![0u32; size]; nt];
    for cd in &data {
        let [b0, b1] = cd.beta;
        let w0 = (n * b0.0, n * b0.1);
        let w1 = (n * b1.0, n * b1.1);
        let z0 = (cd.start.0 * b0.0 + cd.start.1 * b1.0, cd.start.0 * b0.1 + cd.start.1 * b1.1);
        let bound = cd.a * kmax as i128;
        if bound > 1 << 60 {
            return Err(Error::TooLarge("norm bound above 2^60".into()));
        }
        let r = (bound as f64).sqrt() * (1.0 + 1e-12) + 1.0;
        let (e0, e1, ez) = (emb(w0), emb(w1), emb(z0));
        let len0 = (e0.0 * e0.0 + e0.1 * e0.1).sqrt();
        // signed distance of z0 + j·w1 from the line ℝ·w0 is linear in j
        let cross = |z: (f64, f64)| (z.1 * e0.0 - z.0 * e0.1) / len0;
        let (h0, h1) = (cross(ez), cross(e1));
        let (ja, jb) = ((-r - h0) / h1, (r - h0) / h1);
        let (jlo, jhi) = (ja.min(jb).floor() as i128 - 1, ja.max(jb).ceil() as i128 + 1);
        for j in jlo..=jhi {
            let zj = (ez.0 + j as f64 * e1.0, ez.1 + j as f64 * e1.1);
            let dist = cross(zj);
            let half = (r * r - dist * dist).max(0.0).sqrt() / len0;
            let center = -(zj.0 * e0.0 + zj.1 * e0.1) / (len0 * len0);
            let (ilo, ihi) = ((center - half).floor() as i128 - 1, (center + half).ceil() as i128 + 1);
            // the swept disc has norms near `bound`, far below 2^62
            let (uj0, uj1) = ((z0.0 + j * w1.0) as i64, (z0.1 + j * w1.1) as i64);
            let (a, b64) = (cd.a as i64, bound as i64);
            for i in ilo..=ihi {
                let i64_ = i as i64;
                let u = (uj0 + i64_ * w0.0 as i64, uj1 + i64_ * w0.1 as i64);
                let nu = norm64(u);
                if nu == 0 || nu > b64 {
                    continue;
                }
                if nu % a != 0 {
                    return domain("lattice point norm not divisible by Nr 𝔞");
                }
                let k = (nu / a) as u64;
                if !window.contains(k, den) {
                    continue;
                }
                let depth = match p1 {
                    None => 0,
                    Some(p) => {
                        let c = (cd.start.0 + n * i, cd.start.1 + n * j);
                        let vd = |x: i128| if x == 0 { depth_cap } else { val(p, x).min(depth_cap) };
                        vd(c.0).min(vd(c.1))
                    }
                };
                for (idx, &tau) in taus.iter().enumerate() {
                    if p1.is_none() || depth >= tau {
                        all[idx][k as usize] += 1;
                        if cd.pg {
                            pg[idx][k as usize] += 1;
                        }
                    }
                }
            }
        }
    }
    let w = level.level_unit_count() as u64;
    let finish = |v: &[u32]| -> Result<NormCounts> {
        let mut entries = Vec::new();
        for (k, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c as u64 % w != 0 {
                return domain(format!("count {c} at key {k} not divisible by |Λ^×(x)| = {w}"));
            }
            entries.push((k as u64, c as u64 / w));
        }
        Ok(NormCounts { den, entries })
    };
    taus.iter()
        .enumerate()
        .map(|(i, &tau)| Ok(CountVariants { tau, all: finish(&all[i])?, pg: finish(&pg[i])? }))
        .collect()
}
