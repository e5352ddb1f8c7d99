//! Positive definite binary quadratic forms a·u² + b·uv + c·v².

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// 2×2 integer matrix acting on the variables: f∘g (u, v) = f(p·u + q·v, r·u + s·v)
/// for g = [[p, q], [r, s]].
pub type Mat2 = [[BigInt; 2]; 2];

pub fn mat_identity() -> Mat2 {
    [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]]
}

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat_det(m: &Mat2) -> BigInt {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bqf {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl fmt::Display for Bqf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl Bqf {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Bqf { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn disc(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn disc_i64(&self) -> i64 {
        self.disc().to_i64().expect("discriminant fits in i64")
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a.is_positive() && self.disc().is_negative()
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        let normal = -a < *b && b <= a && a <= c;
        normal && !((a == c || *a == b.abs()) && b.is_negative())
    }

    pub fn eval(&self, u: &BigInt, v: &BigInt) -> BigInt {
        &self.a * u * u + &self.b * u * v + &self.c * v * v
    }

    pub fn eval_i64(&self, u: i64, v: i64) -> BigInt {
        self.eval(&BigInt::from(u), &BigInt::from(v))
    }

    /// The form f∘g.
    pub fn transform(&self, g: &Mat2) -> Bqf {
        let [[p, q], [r, s]] = g;
        let a = self.eval(p, r);
        let c = self.eval(q, s);
        let b = BigInt::from(2) * &self.a * p * q + &self.b * (p * s + q * r) + BigInt::from(2) * &self.c * r * s;
        Bqf { a, b, c }
    }

    pub fn divide_content(&self) -> (Bqf, BigInt) {
        let g = self.content();
        (Bqf { a: &self.a / &g, b: &self.b / &g, c: &self.c / &g }, g)
    }

    pub fn inverse(&self) -> Bqf {
        Bqf { a: self.a.clone(), b: -&self.b, c: self.c.clone() }
            .reduce()
            .expect("inverse of a positive definite form")
    }

    pub fn principal(disc: i64) -> Result<Bqf> {
        if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
            return invalid(format!("invalid discriminant {disc}"));
        }
        let b = disc.rem_euclid(2);
        Ok(Bqf::new(1, b, (b * b - disc) / 4))
    }

    pub fn reduce(&self) -> Result<Bqf> {
        Ok(self.reduce_with_matrix()?.0)
    }

    /// Gauss reduction; returns the reduced form and g ∈ SL₂(ℤ) with self∘g = reduced.
    pub fn reduce_with_matrix(&self) -> Result<(Bqf, Mat2)> {
        if !self.is_positive_definite() {
            return invalid(format!("form {self} is not positive definite"));
        }
        let mut f = self.clone();
        let mut g = mat_identity();
        let two_a = |f: &Bqf| BigInt::from(2) * &f.a;
        loop {
            // translate b into (-a, a]
            let k = (&f.a - &f.b).div_floor(&two_a(&f));
            if !k.is_zero() {
                let t = [[BigInt::one(), k.clone()], [BigInt::zero(), BigInt::one()]];
                f = Bqf { c: f.eval(&k, &BigInt::one()), b: &f.b + two_a(&f) * &k, a: f.a };
                g = mat_mul(&g, &t);
            }
            if f.a > f.c || (f.a == f.c && f.b.is_negative()) {
                let s = [[BigInt::zero(), -BigInt::one()], [BigInt::one(), BigInt::zero()]];
                f = Bqf { a: f.c, b: -f.b, c: f.a };
                g = mat_mul(&g, &s);
                continue;
            }
            break;
        }
        debug_assert!(f.is_reduced());
        Ok((f, g))
    }
}

/// (g, x, y) with x·a + y·b = g ≥ 0.
pub fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Gauss composition (Dirichlet/Cohen arrangement), reduced result.
pub fn compose_forms(f: &Bqf, g: &Bqf) -> Result<Bqf> {
    if f.disc() != g.disc() {
        return invalid(format!("discriminants differ: {f} vs {g}"));
    }
    if !f.is_primitive() || !g.is_primitive() {
        return invalid("composition needs primitive forms");
    }
    let (f1, f2) = if f.a > g.a { (g, f) } else { (f, g) };
    let s: BigInt = (&f1.b + &f2.b) / 2;
    let n = &f2.b - &s;
    let (y1, d) = if (&f2.a % &f1.a).is_zero() {
        (BigInt::zero(), f1.a.clone())
    } else {
        let (g, x, _) = xgcd(&f2.a, &f1.a);
        (x, g)
    };
    let (x2, y2, d1) = if (&s % &d).is_zero() {
        (BigInt::zero(), -BigInt::one(), d.clone())
    } else {
        let (g, x, y) = xgcd(&s, &d);
        (x, -y, g)
    };
    let v1 = &f1.a / &d1;
    let v2 = &f2.a / &d1;
    let r = (&y1 * &y2 * &n - &x2 * &f2.c).mod_floor(&v1);
    let b3 = &f2.b + BigInt::from(2) * &v2 * &r;
    let a3 = &v1 * &v2;
    let c3 = (&f2.c * &d1 + &r * (&f2.b + &v2 * &r)) / &v1;
    let h = Bqf { a: a3, b: b3, c: c3 };
    debug_assert_eq!(h.disc(), f.disc());
    h.reduce()
}

/// Proper automorphisms of a reduced form (entries of such automorphisms lie in {-1,0,1}).
pub fn proper_automorphisms(f: &Bqf) -> Vec<Mat2> {
    let mut out = Vec::new();
    let vals = [-1i64, 0, 1];
    for &p in &vals {
        for &q in &vals {
            for &r in &vals {
                for &s in &vals {
                    if p * s - q * r != 1 {
                        continue;
                    }
                    let m = [[BigInt::from(p), BigInt::from(q)], [BigInt::from(r), BigInt::from(s)]];
                    if f.transform(&m) == *f {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}
