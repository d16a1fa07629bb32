//! The exact coefficient tower.
//!
//! Everything in the crate is built on four layers:
//!
//! * [`Rational`]: arbitrary precision rationals,
//! * [`QuadElem`]: elements `a + b·√m` of a quadratic field,
//! * [`Poly`] and [`Laurent`]: dense (Laurent) polynomials over a field,
//! * [`RatFunc`]: normalized quotients of polynomials.
//!
//! Arithmetic goes through the [`Ring`] and [`Field`] traits so the linear
//! algebra in [`crate::matrix`] works uniformly over every layer.

mod factor;
mod laurent;
mod poly;
mod quad;
mod ratfunc;
mod zpoly;

use std::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use factor::{
    is_unit_monomial, quadratic_is_irreducible, rational_roots, squarefree_decomposition, squarefree_factor,
};
pub use laurent::Laurent;
pub use poly::Poly;
pub use quad::{squarefree_kernel, QuadElem};
pub use ratfunc::RatFunc;
pub(crate) use zpoly::ZPoly;

/// Arbitrary precision rational number.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed quadratic fields: Q(sqrt {0}) and Q(sqrt {1})")]
    MixedFields(i64, i64),
    #[error("{0} is not square-free")]
    NotSquareFree(i64),
    #[error("inexact division")]
    InexactDivision,
}

/// A commutative ring with exact arithmetic.
///
/// The methods take references; values are immutable.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_int(n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    /// Conversion from a rational constant.
    fn from_rational(q: &Rational) -> Self;
}

/// Coefficient fields that embed in `Q(√m)` and carry a Galois involution.
pub trait Coeff: Field + Display {
    /// The nontrivial automorphism `√m ↦ −√m` (identity on `Q`).
    fn conj(&self) -> Self;

    /// Returns the rational value if the element lies in `Q`.
    fn as_rational(&self) -> Option<Rational>;

    /// Real approximation, using the positive square root.
    fn to_f64(&self) -> f64;

    /// Whether the string form needs parentheses when used as a coefficient.
    fn is_compound(&self) -> bool;
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
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
        Rational::from_integer(BigInt::from(n))
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl Coeff for Rational {
    fn conj(&self) -> Self {
        self.clone()
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn is_compound(&self) -> bool {
        false
    }
}

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Both parts are huge: shift them down together.
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift as usize).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift as usize).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Formats a rational the way certificates expect: `p` or `p/q`.
pub(crate) fn fmt_rational(q: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}
