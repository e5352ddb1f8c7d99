//! The finite rings R/mR for R = ℤ[ω], ω² = tω − n.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadRing {
    pub m: i64,
    pub t: i64,
    pub n: i64,
}

pub type El = (i64, i64);

impl QuadRing {
    pub fn new(m: i64, t: i64, n: i64) -> Self {
        QuadRing { m, t: t.rem_euclid(m), n: n.rem_euclid(m) }
    }

    pub fn red(&self, x: El) -> El {
        (x.0.rem_euclid(self.m), x.1.rem_euclid(self.m))
    }

    pub fn mul(&self, x: El, y: El) -> El {
        let m = self.m as i128;
        let (a, b, c, d) = (x.0 as i128, x.1 as i128, y.0 as i128, y.1 as i128);
        let bd = b * d % m;
        let r0 = (a * c - self.n as i128 * bd).rem_euclid(m);
        let r1 = (a * d + b * c + self.t as i128 * bd).rem_euclid(m);
        (r0 as i64, r1 as i64)
    }

    pub fn add(&self, x: El, y: El) -> El {
        self.red((x.0 + y.0, x.1 + y.1))
    }

    pub fn sub(&self, x: El, y: El) -> El {
        self.red((x.0 - y.0, x.1 - y.1))
    }

    pub fn norm(&self, x: El) -> i64 {
        let m = self.m as i128;
        let (a, b) = (x.0 as i128, x.1 as i128);
        ((a * a + self.t as i128 * a * b % m + self.n as i128 * (b * b % m)).rem_euclid(m)) as i64
    }

    pub fn elements(&self) -> impl Iterator<Item = El> + '_ {
        (0..self.m).flat_map(move |a| (0..self.m).map(move |b| (a, b)))
    }

    /// Units, for m a prime power p^k: the elements of norm prime to p.
    pub fn units(&self, p: i64) -> Vec<El> {
        self.elements().filter(|&x| self.norm(x) % p != 0).collect()
    }
}
