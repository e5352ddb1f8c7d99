//! Integer linear algebra in ℤ³: Hermite normal form, x^⊥(ℤ) and the dual vector x¹.
//!
//! HNF convention: basis vectors are rows; pivots move strictly right, are positive,
//! and entries above a pivot lie in [0, pivot).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type Vec3 = [BigInt; 3];

pub fn vec3(x: [i64; 3]) -> Vec3 {
    x.map(BigInt::from)
}

pub fn dot(x: &Vec3, y: &Vec3) -> BigInt {
    &x[0] * &y[0] + &x[1] * &y[1] + &x[2] * &y[2]
}

pub fn det3(x: &Vec3, y: &Vec3, z: &Vec3) -> BigInt {
    &x[0] * (&y[1] * &z[2] - &y[2] * &z[1]) - &x[1] * (&y[0] * &z[2] - &y[2] * &z[0])
        + &x[2] * (&y[0] * &z[1] - &y[1] * &z[0])
}

fn content3(x: &Vec3) -> BigInt {
    x[0].gcd(&x[1]).gcd(&x[2])
}

/// Row-style Hermite normal form; zero rows are dropped.
pub fn hnf_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    if m.is_empty() {
        return m;
    }
    let ncols = m[0].len();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        // Euclid on the column below r
        loop {
            let piv = (r..m.len())
                .filter(|&i| !m[i][col].is_zero())
                .min_by(|&i, &j| m[i][col].abs().cmp(&m[j][col].abs()));
            let Some(piv) = piv else { break };
            m.swap(r, piv);
            let mut done = true;
            for i in r + 1..m.len() {
                if !m[i][col].is_zero() {
                    let q = m[i][col].div_floor(&m[r][col]);
                    for j in 0..ncols {
                        let t = &q * &m[r][j];
                        m[i][j] -= t;
                    }
                    if !m[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][col].is_zero() {
            continue;
        }
        if m[r][col].is_negative() {
            for v in m[r].iter_mut() {
                *v = -v.clone();
            }
        }
        for i in 0..r {
            let q = m[i][col].div_floor(&m[r][col]);
            for j in 0..ncols {
                let t = &q * &m[r][j];
                m[i][j] -= t;
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|v| !v.is_zero()));
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntLattice2in3 {
    pub basis: [Vec3; 2],
    pub gram: [[BigInt; 2]; 2],
}

impl IntLattice2in3 {
    pub fn from_basis(b0: Vec3, b1: Vec3) -> Self {
        let gram = [[dot(&b0, &b0), dot(&b0, &b1)], [dot(&b1, &b0), dot(&b1, &b1)]];
        IntLattice2in3 { basis: [b0, b1], gram }
    }

    pub fn gram_det(&self) -> BigInt {
        &self.gram[0][0] * &self.gram[1][1] - &self.gram[0][1] * &self.gram[1][0]
    }

    /// Reduce v modulo the lattice to its HNF representative.
    /// Requires the basis to be in HNF.
    pub fn reduce_mod(&self, v: &Vec3) -> Vec3 {
        let mut v = v.clone();
        for b in &self.basis {
            let col = b.iter().position(|t| !t.is_zero()).expect("nonzero basis vector");
            let q = v[col].div_floor(&b[col]);
            for j in 0..3 {
                v[j] -= &q * &b[j];
            }
        }
        v
    }
}

/// Unimodular U (rows) with U·x = (g, 0, 0)ᵀ, by Euclid steps on the entries of x.
fn unimodular_for(x: &Vec3) -> ([Vec3; 3], BigInt) {
    let mut v = x.clone();
    let mut u: [Vec3; 3] = [vec3([1, 0, 0]), vec3([0, 1, 0]), vec3([0, 0, 1])];
    loop {
        let nz: Vec<usize> = (0..3).filter(|&i| !v[i].is_zero()).collect();
        if nz.len() <= 1 {
            if let Some(&i) = nz.first() {
                v.swap(0, i);
                u.swap(0, i);
            }
            break;
        }
        let piv = *nz.iter().min_by(|&&i, &&j| v[i].abs().cmp(&v[j].abs())).unwrap();
        for &i in &nz {
            if i != piv {
                let q = v[i].div_floor(&v[piv]);
                v[i] = &v[i] - &q * &v[piv];
                let row = u[piv].clone();
                for j in 0..3 {
                    u[i][j] -= &q * &row[j];
                }
            }
        }
    }
    if v[0].is_negative() {
        v[0] = -v[0].clone();
        for t in u[0].iter_mut() {
            *t = -t.clone();
        }
    }
    (u, v[0].clone())
}

/// HNF basis of x^⊥(ℤ) = {y ∈ ℤ³ : ⟨y, x⟩ = 0}.
pub fn kernel_basis(x: &Vec3) -> Result<IntLattice2in3> {
    if x.iter().all(|t| t.is_zero()) {
        return invalid("kernel_basis of the zero vector");
    }
    let (u, _) = unimodular_for(x);
    let rows = hnf_rows(&[u[1].to_vec(), u[2].to_vec()]);
    assert_eq!(rows.len(), 2);
    let to3 = |r: &Vec<BigInt>| [r[0].clone(), r[1].clone(), r[2].clone()];
    Ok(IntLattice2in3::from_basis(to3(&rows[0]), to3(&rows[1])))
}

/// The canonical x¹ with ⟨x¹, x⟩ = 1: the HNF-reduced member of its coset mod x^⊥(ℤ).
pub fn solve_dual(x: &Vec3) -> Result<Vec3> {
    if x.iter().all(|t| t.is_zero()) || !num_traits::One::is_one(&content3(x)) {
        return invalid(format!("vector ({}, {}, {}) is not primitive", x[0], x[1], x[2]));
    }
    let (u, g) = unimodular_for(x);
    debug_assert!(num_traits::One::is_one(&g));
    let lat = kernel_basis(x)?;
    Ok(lat.reduce_mod(&u[0]))
}
