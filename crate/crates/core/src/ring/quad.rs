use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{fmt_rational, rational_to_f64, Coeff, Field, Rational, Ring, RingError};

/// Largest square-free `k` with `n = k·s²`, keeping the sign of `n`.
///
/// Returns the kernel and the square root `s` of the removed square.
pub fn squarefree_kernel(n: i64) -> (i64, i64) {
    assert!(n != 0, "kernel of zero");
    let sign = n.signum();
    let mut rest = n.unsigned_abs();
    let mut kernel = 1u64;
    let mut root = 1u64;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        root *= p.pow(e / 2);
        if e % 2 == 1 {
            kernel *= p;
        }
        p += 1;
    }
    kernel *= rest;
    (sign * kernel as i64, root as i64)
}

/// An element `a + b·√m` of `Q(√m)`.
///
/// Elements with `b = 0` are rationals and combine freely with any field;
/// the tag `m = 1` marks "no radical known yet". Two irrational elements of
/// different fields cannot be combined.
#[derive(Clone, Serialize, Deserialize)]
pub struct QuadElem {
    a: Rational,
    b: Rational,
    m: i64,
}

impl QuadElem {
    /// Builds `a + b·√m`. `m` must be square-free (or 1).
    pub fn new(a: Rational, b: Rational, m: i64) -> Result<Self, RingError> {
        if m == 0 || squarefree_kernel(m).1 != 1 {
            return Err(RingError::NotSquareFree(m));
        }
        if m == 1 {
            return Ok(Self::rational(a + b));
        }
        Ok(QuadElem { a, b, m })
    }

    pub fn rational(a: Rational) -> Self {
        QuadElem { a, b: Rational::zero(), m: 1 }
    }

    /// `c·√n` for an arbitrary nonzero integer `n`, with the radicand reduced
    /// to its square-free kernel (`√12 = 2√3`).
    pub fn sqrt_of(c: Rational, n: i64) -> Self {
        let (k, s) = squarefree_kernel(n);
        let b = c * Rational::from_integer(BigInt::from(s));
        if k == 1 {
            Self::rational(b)
        } else {
            QuadElem { a: Rational::zero(), b, m: k }
        }
    }

    /// `√m` itself.
    pub fn sqrt(m: i64) -> Self {
        Self::sqrt_of(Rational::from_integer(1.into()), m)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// The radicand, or 1 for rationals.
    pub fn m(&self) -> i64 {
        if self.b.is_zero() {
            1
        } else {
            self.m
        }
    }

    /// Returns the same value tagged with field `Q(√m)`.
    pub fn in_field(mut self, m: i64) -> Result<Self, RingError> {
        if self.b.is_zero() || self.m == m {
            self.m = m;
            if m == 1 {
                self.m = 1;
            }
            Ok(self)
        } else {
            Err(RingError::MixedFields(self.m, m))
        }
    }

    fn common_m(&self, other: &Self) -> Result<i64, RingError> {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => Ok(if self.m != 1 { self.m } else { other.m }),
            (false, true) => Ok(self.m),
            (true, false) => Ok(other.m),
            (false, false) if self.m == other.m => Ok(self.m),
            _ => Err(RingError::MixedFields(self.m, other.m)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        let m = self.common_m(other)?;
        Ok(QuadElem { a: &self.a + &other.a, b: &self.b + &other.b, m })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RingError> {
        let m = self.common_m(other)?;
        Ok(QuadElem { a: &self.a - &other.a, b: &self.b - &other.b, m })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, RingError> {
        let m = self.common_m(other)?;
        let mm = Rational::from_integer(BigInt::from(m));
        let a = &self.a * &other.a + &self.b * &other.b * mm;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(QuadElem { a, b, m })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, RingError> {
        let inv = other.checked_inv()?;
        self.checked_mul(&inv)
    }

    pub fn checked_inv(&self) -> Result<Self, RingError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(QuadElem { a: &self.a / &n, b: -(&self.b / &n), m: self.m })
    }

    /// Galois conjugate `a − b√m`.
    pub fn tau(&self) -> Self {
        QuadElem { a: self.a.clone(), b: -self.b.clone(), m: self.m }
    }

    /// `N(a + b√m) = a² − m·b²`.
    pub fn norm(&self) -> Rational {
        let mm = Rational::from_integer(BigInt::from(self.m));
        &self.a * &self.a - &self.b * &self.b * mm
    }

    /// `a + b√m + a − b√m = 2a`.
    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Sign under the embedding with `√m > 0` (requires `m > 0`).
    pub fn signum_real(&self) -> i32 {
        // sign of a + b√m: compare a² and m b² when signs differ
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 || self.m <= 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let mm = Rational::from_integer(BigInt::from(self.m));
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * mm;
        if lhs > rhs {
            sa
        } else if lhs < rhs {
            sb
        } else {
            0
        }
    }
}

fn sign(q: &Rational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialEq for QuadElem {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.m == other.m)
    }
}

impl Eq for QuadElem {}

impl Hash for QuadElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return fmt_rational(&self.a, f);
        }
        let one = Rational::from_integer(1.into());
        if !self.a.is_zero() {
            fmt_rational(&self.a, f)?;
            if self.b.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.b == one {
        } else if self.b == -one {
            write!(f, "-")?;
        } else {
            fmt_rational(&self.b, f)?;
            write!(f, "*")?;
        }
        write!(f, "sqrt({})", self.m)
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a QuadElem> for &'a QuadElem {
            type Output = QuadElem;
            /// Panics when the operands live in different quadratic fields;
            /// use the `checked_*` methods to get an error instead.
            fn $method(self, rhs: &'a QuadElem) -> QuadElem {
                self.$checked(rhs).expect("quadratic field arithmetic")
            }
        }
        impl $tr for QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: QuadElem) -> QuadElem {
                (&self).$checked(&rhs).expect("quadratic field arithmetic")
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { a: -self.a.clone(), b: -self.b.clone(), m: self.m }
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -&self
    }
}

impl From<Rational> for QuadElem {
    fn from(q: Rational) -> Self {
        QuadElem::rational(q)
    }
}

impl Ring for QuadElem {
    fn zero() -> Self {
        QuadElem::rational(Rational::zero())
    }
    fn one() -> Self {
        QuadElem::rational(Rational::from_integer(1.into()))
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_int(n: i64) -> Self {
        QuadElem::rational(Rational::from_integer(n.into()))
    }
}

impl Field for QuadElem {
    fn inv(&self) -> Option<Self> {
        self.checked_inv().ok()
    }
    fn from_rational(q: &Rational) -> Self {
        QuadElem::rational(q.clone())
    }
}

impl Coeff for QuadElem {
    fn conj(&self) -> Self {
        self.tau()
    }
    fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * (self.m as f64).sqrt()
    }
    fn is_compound(&self) -> bool {
        !self.b.is_zero() && !self.a.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, rat};
    use proptest::prelude::*;

    fn q(a: (i64, i64), b: (i64, i64), m: i64) -> QuadElem {
        QuadElem::new(rat(a.0, a.1), rat(b.0, b.1), m).unwrap()
    }

    #[test]
    fn kernel() {
        assert_eq!(squarefree_kernel(12), (3, 2));
        assert_eq!(squarefree_kernel(50), (2, 5));
        assert_eq!(squarefree_kernel(7), (7, 1));
        assert_eq!(squarefree_kernel(-8), (-2, 2));
        assert_eq!(squarefree_kernel(1), (1, 1));
    }

    #[test]
    fn unit_times_conjugate() {
        let e = q((1, 1), (1, 1), 2);
        assert_eq!(&e * &e.tau(), QuadElem::from_int(-1));
        assert_eq!(q((3, 1), (2, 1), 2).tau(), q((3, 1), (-2, 1), 2));
    }

    #[test]
    fn inverse_sqrt12() {
        // 1/√12 = (1/6)√3; oracle: (1/6)√3 · 2√3 = 1
        let s12 = QuadElem::sqrt(12);
        assert_eq!(s12, QuadElem::sqrt_of(int(2), 3));
        let inv = s12.checked_inv().unwrap();
        assert_eq!(inv, q((0, 1), (1, 6), 3));
        let prod = QuadElem::sqrt_of(rat(1, 6), 3).checked_mul(&QuadElem::sqrt_of(int(2), 3));
        assert_eq!(prod.unwrap(), QuadElem::one());
    }

    #[test]
    fn errors() {
        assert_eq!(QuadElem::zero().checked_inv(), Err(RingError::DivisionByZero));
        let a = QuadElem::sqrt(2);
        let b = QuadElem::sqrt(3);
        assert_eq!(a.checked_add(&b), Err(RingError::MixedFields(2, 3)));
        // rationals mix with anything
        assert!(a.checked_mul(&QuadElem::from_int(5)).is_ok());
        assert!(QuadElem::new(int(1), int(1), 4).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(q((3, 1), (2, 1), 2).to_string(), "3+2*sqrt(2)");
        assert_eq!(q((1, 2), (1, 2), 5).to_string(), "1/2+1/2*sqrt(5)");
        assert_eq!(q((0, 1), (-1, 1), 3).to_string(), "-sqrt(3)");
        assert_eq!(q((1, 1), (-1, 6), 3).to_string(), "1-1/6*sqrt(3)");
        assert_eq!(QuadElem::from_int(-4).to_string(), "-4");
    }

    #[test]
    fn real_sign() {
        assert_eq!(q((3, 1), (-2, 1), 2).signum_real(), 1);
        assert_eq!(q((1, 1), (-1, 1), 2).signum_real(), -1);
        assert_eq!(q((-3, 1), (2, 1), 2).signum_real(), -1);
        assert_eq!(QuadElem::zero().signum_real(), 0);
    }

    fn arb_elem(m: i64) -> impl Strategy<Value = QuadElem> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
            .prop_map(move |(a, da, b, db)| QuadElem::new(rat(a, da), rat(b, db), m).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn ring_axioms(x in arb_elem(2), y in arb_elem(2), z in arb_elem(2)) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x * &QuadElem::one(), x.clone());
            prop_assert_eq!(&x + &QuadElem::zero(), x.clone());
        }

        #[test]
        fn tau_is_involutive_automorphism(x in arb_elem(3), y in arb_elem(3)) {
            prop_assert_eq!(x.tau().tau(), x.clone());
            prop_assert_eq!((&x * &y).tau(), &x.tau() * &y.tau());
            prop_assert_eq!((&x + &y).tau(), &x.tau() + &y.tau());
        }

        #[test]
        fn division_inverts_multiplication(x in arb_elem(5), y in arb_elem(5)) {
            prop_assume!(!Ring::is_zero(&y));
            prop_assert_eq!(x.checked_mul(&y).unwrap().checked_div(&y).unwrap(), x);
        }
    }
}
