//! Orthogonal grids: x^⊥(ℤ) with the torsion point x^tors = x¹ − x/D, and their
//! canonical classes (reduced form, torsion coordinates).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::bqf::{mat_det, proper_automorphisms, Bqf, Mat2};
use crate::arith::genus::genus_signature;
use crate::arith::lattice::{det3, dot, kernel_basis, solve_dual, vec3, IntLattice2in3, Vec3};
use crate::arith::Rational;
use crate::error::{invalid, Result};
use crate::sphere::{enumerate, representable, rotation_orbits, SpherePoint};

pub type TorsPair = [Rational; 2];

fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

/// Additive order of a point of (ℚ/ℤ)².
pub fn tors_order(t: &TorsPair) -> BigInt {
    t[0].denom().lcm(t[1].denom())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthoGrid {
    pub x: SpherePoint,
    pub lattice: IntLattice2in3,
    pub x1: Vec3,
    /// Coordinates of x^tors in the lattice basis, reduced into [0,1)².
    pub tors_coords: TorsPair,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridClass {
    pub form: Bqf,
    pub content: BigInt,
    pub tors: TorsPair,
}

pub fn build_grid(x: &SpherePoint) -> Result<OrthoGrid> {
    let xv = vec3(x.coords);
    let x1 = solve_dual(&xv)?;
    let lattice = kernel_basis(&xv)?;
    let tors_coords = coords_in_basis(&lattice.basis, &x1);
    Ok(OrthoGrid { x: *x, lattice, x1, tors_coords })
}

/// Coordinates (mod ℤ²) of the orthogonal projection of v onto span(basis).
fn coords_in_basis(basis: &[Vec3; 2], v: &Vec3) -> TorsPair {
    let g = [[dot(&basis[0], &basis[0]), dot(&basis[0], &basis[1])], [dot(&basis[1], &basis[0]), dot(&basis[1], &basis[1])]];
    let det = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
    let r0 = dot(v, &basis[0]);
    let r1 = dot(v, &basis[1]);
    let t0 = Rational::new(&g[1][1] * &r0 - &g[0][1] * &r1, det.clone());
    let t1 = Rational::new(&g[0][0] * &r1 - &g[1][0] * &r0, det);
    [frac(&t0), frac(&t1)]
}

fn apply(m: &Mat2, t: &TorsPair) -> TorsPair {
    let r = |i: usize| Rational::from(m[i][0].clone()) * &t[0] + Rational::from(m[i][1].clone()) * &t[1];
    [frac(&r(0)), frac(&r(1))]
}

fn inverse_sl2(m: &Mat2) -> Mat2 {
    debug_assert!(mat_det(m).is_one());
    [[m[1][1].clone(), -m[0][1].clone()], [-m[1][0].clone(), m[0][0].clone()]]
}

/// Canonical class of a grid, from a basis oriented so that det(e₁, e₂, x) > 0.
pub fn grid_class(g: &OrthoGrid) -> GridClass {
    let xv = vec3(g.x.coords);
    let [b0, mut b1] = g.lattice.basis.clone();
    let mut t = g.tors_coords.clone();
    if det3(&b0, &b1, &xv).is_negative() {
        b1 = b1.map(|c| -c);
        t[1] = frac(&-t[1].clone());
    }
    class_from_basis(&b0, &b1, &t)
}

fn class_from_basis(e1: &Vec3, e2: &Vec3, t: &TorsPair) -> GridClass {
    let gram = Bqf { a: dot(e1, e1), b: BigInt::from(2) * dot(e1, e2), c: dot(e2, e2) };
    let (prim, content) = gram.divide_content();
    let (form, m) = prim.reduce_with_matrix().expect("Gram forms are positive definite");
    let t_red = apply(&inverse_sl2(&m), t);
    let tors = proper_automorphisms(&form)
        .iter()
        .map(|a| apply(a, &t_red))
        .min()
        .expect("identity is an automorphism");
    GridClass { form, content, tors }
}

/// Class computed from an arbitrary oriented basis and any x¹ (used to test invariance).
pub fn grid_class_from(e1: &Vec3, e2: &Vec3, x1: &Vec3) -> GridClass {
    let t = coords_in_basis(&[e1.clone(), e2.clone()], x1);
    class_from_basis(e1, e2, &t)
}

/// Expected discriminant of the grid forms for D.
pub fn packet_disc(d: u64) -> i64 {
    if d % 4 == 3 {
        -(d as i64)
    } else {
        -4 * d as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PacketEntry {
    pub representative: SpherePoint,
    pub orbit_size: usize,
    pub class: GridClass,
    pub genus: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusPacket {
    pub d: u64,
    pub disc: i64,
    pub entries: Vec<PacketEntry>,
    pub single_genus: bool,
    /// |Pic| of the packet discriminant.
    pub class_number: usize,
    /// |Pic| halved when 2 ramifies in E (the predicted number of orbits).
    pub predicted_orbits: usize,
    pub orbit_count_matches: bool,
    /// Form classes of the entries after squaring in the class group.
    pub squared_forms: Vec<Bqf>,
}

pub fn genus_packet(d: u64) -> Result<GenusPacket> {
    if !representable(d) {
        return invalid(format!("D = {d} not representable"));
    }
    let pts = enumerate(d);
    let orbits = rotation_orbits(&pts)?;
    let mut entries = Vec::with_capacity(orbits.len());
    for o in &orbits {
        let class = grid_class(&build_grid(&o.representative)?);
        let genus = genus_signature(&class.form);
        entries.push(PacketEntry { representative: o.representative, orbit_size: o.members.len(), class, genus });
    }
    let single_genus = entries.windows(2).all(|w| w[0].genus == w[1].genus);
    let disc = packet_disc(d);
    let h = crate::quad_orders::class_group(disc)?.classes.len();
    let predicted_orbits = h / prime_above_two_order(disc)?;
    let squared_forms = entries
        .iter()
        .map(|e| crate::arith::compose_forms(&e.class.form, &e.class.form))
        .collect::<Result<Vec<_>>>()?;
    Ok(GenusPacket {
        d,
        disc,
        orbit_count_matches: predicted_orbits == entries.len(),
        entries,
        single_genus,
        class_number: h,
        predicted_orbits,
        squared_forms,
    })
}

/// Order in Pic of the invertible prime above 2 when 2 ramifies in E, else 1.
fn prime_above_two_order(disc: i64) -> Result<usize> {
    let (d_fund, f) = crate::arith::int::fundamental_part(disc);
    if d_fund % 2 != 0 || f % 2 == 0 {
        return Ok(1);
    }
    let b = disc.rem_euclid(4) / 2 * 2; // b ≡ disc mod 2 with b² ≡ disc mod 8
    let b = (0..4).map(|k| b + 2 * k - 2).find(|b| (b * b - disc) % 8 == 0).expect("2 ramifies");
    let p2 = Bqf::new(2, b, (b * b - disc) / 8).reduce()?;
    Ok(if p2 == Bqf::principal(disc)? { 1 } else { 2 })
}

/// ⟨x^tors, x⟩ = 0 and order D, checked exactly.
pub fn check_grid(g: &OrthoGrid) -> bool {
    let d = BigInt::from(g.x.d);
    let xv = vec3(g.x.coords);
    let det_ok = g.lattice.gram_det() == d;
    let dual_ok = dot(&g.x1, &xv).is_one();
    let ord_ok = tors_order(&g.tors_coords) == d;
    let perp = g.lattice.basis.iter().all(|b| dot(b, &xv).is_zero());
    det_ok && dual_ok && ord_ok && perp
}

pub fn order_u64(t: &TorsPair) -> u64 {
    tors_order(t).to_u64().unwrap_or(u64::MAX)
}
