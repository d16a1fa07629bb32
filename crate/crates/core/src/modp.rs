//! Arithmetic modulo the Mersenne prime `p = 2^61 − 1`, used to screen
//! candidates before exact confirmation.
//!
//! Reducing a rational matrix mod `p` can only lower its rank, so an
//! independence found here is also independence over `Q`; a dependence found
//! here proves nothing and is always re-checked exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::ring::{Field, Laurent, Poly, QuadElem, Rational, Ring};

pub const P: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp(u64);

impl Fp {
    pub fn new(x: u64) -> Self {
        Fp(x % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn reduce128(x: u128) -> u64 {
        // 2^61 ≡ 1
        let lo = (x as u64) & P;
        let hi = (x >> 61) as u64;
        let s = lo + (hi & P) + (hi >> 61);
        let s = (s & P) + (s >> 61);
        if s >= P {
            s - P
        } else {
            s
        }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(P));
        Fp(r.to_u64().unwrap())
    }

    /// `None` when the denominator vanishes mod `p`.
    pub fn from_rational_checked(q: &Rational) -> Option<Self> {
        let d = Self::from_bigint(q.denom());
        let di = d.inv()?;
        Some(Self::from_bigint(q.numer()).mul(&di))
    }
}

impl std::fmt::Debug for Fp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Ring for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, other: &Self) -> Self {
        let s = self.0 + other.0;
        Fp(if s >= P { s - P } else { s })
    }
    fn sub(&self, other: &Self) -> Self {
        Fp(if self.0 >= other.0 { self.0 - other.0 } else { self.0 + P - other.0 })
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(Self::reduce128(self.0 as u128 * other.0 as u128))
    }
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
    fn from_int(n: i64) -> Self {
        let r = n.rem_euclid(P as i64);
        Fp(r as u64)
    }
}

impl Field for Fp {
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        Some(self.pow_u64(P - 2))
    }
    fn from_rational(q: &Rational) -> Self {
        Self::from_rational_checked(q).expect("denominator divisible by p")
    }
}

impl Fp {
    pub fn pow_u64(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// Reduces a Laurent polynomial over `Q` at `v = x`.
pub fn eval_laurent(p: &Laurent<Rational>, x: Fp, x_inv: Fp) -> Fp {
    p.eval_in(&x, &x_inv, |c| Fp::from_rational(c))
}

/// Reduces a polynomial over `Q` at `v = x`.
pub fn eval_poly(p: &Poly<Rational>, x: Fp) -> Fp {
    p.eval_with(&x, |c| Fp::from_rational(c))
}

/// Elements `a + b·√m` of `F_p(√m)`; `m` is a non-residue so this is a field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp2 {
    pub a: Fp,
    pub b: Fp,
    pub m: Fp,
}

impl Fp2 {
    pub fn lift(a: Fp, m: Fp) -> Self {
        Fp2 { a, b: Fp(0), m }
    }

    /// Reduces `a + b√m` from `Q(√m)`.
    pub fn from_quad(q: &QuadElem, m: i64) -> Self {
        Fp2 { a: Fp::from_rational(q.a()), b: Fp::from_rational(q.b()), m: Fp::from_int(m) }
    }

    fn with(&self, a: Fp, b: Fp) -> Self {
        Fp2 { a, b, m: self.m }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.with(self.a.add(&o.a), self.b.add(&o.b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.with(self.a.sub(&o.a), self.b.sub(&o.b))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = self.a.mul(&o.a).add(&self.m.mul(&self.b.mul(&o.b)));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
        self.with(a, b)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

/// Whether `a` is a square mod `p` (Euler's criterion).
pub fn is_square(a: Fp) -> bool {
    a.is_zero() || a.pow_u64((P - 1) / 2) == Fp(1)
}

/// Row-echelon accumulator for incremental rank over `F_p`.
#[derive(Clone, Debug, Default)]
pub struct RankAccumulator {
    rows: Vec<(usize, Vec<Fp>)>,
}

impl RankAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; keeps it if independent.
    /// Returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<Fp>) -> bool {
        for (pc, row) in &self.rows {
            let c = v[*pc];
            if !c.is_zero() {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = x.sub(&c.mul(r));
                }
            }
        }
        let Some(pc) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pc].inv().unwrap();
        for x in v.iter_mut() {
            *x = x.mul(&inv);
        }
        // keep stored rows reduced in the new pivot column
        for (_, row) in self.rows.iter_mut() {
            let c = row[pc];
            if !c.is_zero() {
                for (x, r) in row.iter_mut().zip(&v) {
                    *x = x.sub(&c.mul(r));
                }
            }
        }
        self.rows.push((pc, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;
    use proptest::prelude::*;

    #[test]
    fn three_is_not_a_square() {
        assert!(!is_square(Fp::from_int(3)));
        assert!(is_square(Fp::from_int(4)));
    }

    #[test]
    fn rational_reduction() {
        let h = Fp::from_rational(&rat(1, 2));
        assert_eq!(h.mul(&Fp::from_int(2)), Fp::one());
        assert_eq!(Fp::from_int(-1).add(&Fp::one()), Fp::zero());
    }

    #[test]
    fn accumulator_rank() {
        let mut acc = RankAccumulator::new();
        let v = |xs: &[i64]| xs.iter().map(|&x| Fp::from_int(x)).collect::<Vec<_>>();
        assert!(acc.insert(v(&[1, 2, 3])));
        assert!(acc.insert(v(&[0, 1, 1])));
        assert!(!acc.insert(v(&[2, 5, 7])));
        assert!(acc.insert(v(&[0, 0, 4])));
        assert_eq!(acc.rank(), 3);
    }

    proptest! {
        #[test]
        fn matches_u128_reference(a in 0..P, b in 0..P) {
            let want = ((a as u128 * b as u128) % P as u128) as u64;
            prop_assert_eq!(Fp::new(a).mul(&Fp::new(b)).value(), want);
            if a != 0 {
                prop_assert_eq!(Fp::new(a).inv().unwrap().mul(&Fp::new(a)), Fp::one());
            }
        }
    }
}
