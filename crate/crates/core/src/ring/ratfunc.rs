use std::fmt;

use super::{Coeff, Field, Laurent, Poly, Rational, Ring, RingError};

/// A rational function `num/den` in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc<K> {
    num: Poly<K>,
    den: Poly<K>,
}

impl<K: Field> RatFunc<K> {
    /// Normalizes `num/den`: cancels the gcd and makes `den` monic.
    pub fn new(num: Poly<K>, den: Poly<K>) -> Result<Self, RingError> {
        if den.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lead = den.leading().unwrap().inv().unwrap();
        Ok(RatFunc { num: num.scale(&lead), den: den.scale(&lead) })
    }

    pub fn from_poly(p: Poly<K>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn from_laurent(p: &Laurent<K>) -> Self {
        p.to_ratfunc()
    }

    pub fn constant(c: K) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn numer(&self) -> &Poly<K> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<K> {
        &self.den
    }

    /// The Laurent polynomial this equals, if the denominator is `v^k`.
    pub fn to_laurent(&self) -> Option<Laurent<K>> {
        let d = self.den.degree()?;
        if !super::is_unit_monomial(&self.den) {
            return None;
        }
        Some(Laurent::from_poly(&self.num).times_var_pow(-(d as i64)))
    }

    pub fn eval(&self, x: &K) -> Option<K> {
        self.num.eval(x).div(&self.den.eval(x))
    }

    /// `v ↦ 1/v`, renormalized.
    pub fn star(&self) -> Self {
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        // p(1/v)/q(1/v) = v^{dd−dn} · rev(p)/rev(q)
        let (mut n, mut d) = (self.num.reversed(), self.den.reversed());
        if dd >= dn {
            n = n.shift((dd - dn) as usize);
        } else {
            d = d.shift((dn - dd) as usize);
        }
        Self::new(n, d).unwrap()
    }
}

impl<K: Field> Ring for RatFunc<K> {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone()).unwrap();
        }
        let n = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::new(n, self.den.mul(&other.den)).unwrap()
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).unwrap()
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn from_int(n: i64) -> Self {
        Self::constant(K::from_int(n))
    }
}

impl<K: Field> Field for RatFunc<K> {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()).unwrap())
        }
    }
    fn from_rational(q: &Rational) -> Self {
        Self::constant(K::from_rational(q))
    }
}

impl<K: Coeff> RatFunc<K> {
    pub fn display_var(&self, var: &str) -> String {
        if self.den.degree() == Some(0) {
            return self.num.display_var(var);
        }
        let n = self.num.display_var(var);
        let n = if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({})", n)
        } else {
            n
        };
        let d = self.den.display_var(var);
        let d = if self.den.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({})", d)
        } else {
            d
        };
        format!("{}/{}", n, d)
    }
}

impl<K: Coeff> fmt::Display for RatFunc<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_var("v"))
    }
}

impl<K: Field> fmt::Debug for RatFunc<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}
