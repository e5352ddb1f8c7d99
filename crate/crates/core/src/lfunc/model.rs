//! The local model at p: 𝒪_p = ℤ_p[ω_𝒪], Λ_p = ℤ_p + pⁿ𝒪_p and the level point ξ/p^e.
//!
//! Elements of 𝒪 are integer pairs (u₀, u₁) = u₀ + u₁ω_𝒪. For a place w | p the norm exponent
//! j_w(z) is defined by |z|_w = p^{−j_w(z)}, so ‖z‖ = p^{−Σ_w j_w(z)}.

use super::{LocalFactorSpec, LocalLevel, SplitType};
use crate::arith::int::{pow, val};

pub(crate) type Pair = (i128, i128);

#[derive(Clone, Debug)]
pub(crate) struct Model {
    pub p: u64,
    pub pi: i128,
    pub split: SplitType,
    pub n: u32,
    /// level depth; 0 for trivial level
    pub e: u32,
    pub to: i128,
    pub no: i128,
    /// ω_Λ = c0 + pⁿ·ω_𝒪
    pub c0: i128,
    /// ξ in 𝒪-coordinates (0 for trivial level)
    pub xi: Pair,
}

impl Model {
    pub fn new(spec: &LocalFactorSpec) -> Self {
        let order = spec.order();
        let maximal = order.maximal();
        let (to, no) = maximal.omega_tn();
        let f = order.f as i64;
        let c0 = ((order.disc.rem_euclid(2) - f * maximal.disc.rem_euclid(2)) / 2) as i128;
        let (xi_l, e) = match spec.level {
            LocalLevel::Trivial => ((0, 0), 0),
            LocalLevel::Point { xi, e } => (xi, e),
        };
        let xi = (xi_l.0 as i128 + xi_l.1 as i128 * c0, xi_l.1 as i128 * f as i128);
        Model {
            p: spec.p,
            pi: spec.p as i128,
            split: spec.split_type,
            n: spec.n,
            e,
            to: to as i128,
            no: no as i128,
            c0,
            xi,
        }
    }

    pub fn q(&self, k: u32) -> i128 {
        pow(self.p, k)
    }

    pub fn norm(&self, z: Pair) -> i128 {
        z.0 * z.0 + self.to * z.0 * z.1 + self.no * z.1 * z.1
    }

    pub fn mul(&self, x: Pair, y: Pair) -> Pair {
        let bd = x.1 * y.1;
        (x.0 * y.0 - self.no * bd, x.0 * y.1 + x.1 * y.0 + self.to * bd)
    }

    pub fn red(&self, z: Pair, q: i128) -> Pair {
        (z.0.rem_euclid(q), z.1.rem_euclid(q))
    }

    /// z ∈ p^r Λ_p for z in 𝒪-coordinates.
    pub fn in_lattice(&self, z: Pair, r: u32) -> bool {
        z.0.rem_euclid(self.q(r)) == 0 && z.1.rem_euclid(self.q(r + self.n)) == 0
    }

    /// Norm exponent of p at each place: 1 split, 2 otherwise.
    pub fn degree(&self) -> u32 {
        if self.split == SplitType::Split {
            1
        } else {
            2
        }
    }

    /// The two roots of X² − tX + n in ℤ/p^k, by Hensel lifting (split p only).
    pub fn roots(&self, k: u32) -> [i128; 2] {
        let q = self.q(k);
        let f = |x: i128| (x * x - self.to * x + self.no).rem_euclid(q);
        let r0 = (0..self.pi).find(|&x| f(x) % self.pi == 0).expect("split prime has a root");
        let mut r = r0;
        let mut m = self.pi;
        while m < q {
            m = (m * m).min(q);
            let d = (2 * r - self.to).rem_euclid(m);
            let inv = crate::arith::int::mod_inverse(d, m).expect("simple root");
            r = (r - (r * r - self.to * r + self.no) * inv).rem_euclid(m);
        }
        let r = r.rem_euclid(q);
        debug_assert_eq!(f(r), 0);
        [r, (self.to - r).rem_euclid(q)]
    }

    /// Norm exponents j_w(z) for each place w | p, capped at `cap` (in norm-exponent units).
    /// For split p the components are read modulo p^cap.
    pub fn exponents(&self, z: Pair, cap: u32) -> Vec<u32> {
        let v = |x: i128| if x == 0 { u32::MAX } else { val(self.p, x) };
        match self.split {
            SplitType::Split => {
                let q = self.q(cap);
                self.roots(cap)
                    .iter()
                    .map(|&r| v((z.0 + z.1 * r).rem_euclid(q)).min(cap))
                    .collect()
            }
            SplitType::Inert => vec![v(z.0).min(v(z.1)).saturating_mul(2).min(cap)],
            SplitType::Ramified => vec![v(self.norm(z)).min(cap)],
        }
    }
}
