//! Integer polynomials, used where fraction-free elimination keeps every
//! intermediate integral and rational normalization would dominate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Poly, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ZPoly(Vec<BigInt>);

impl ZPoly {
    fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        ZPoly(c)
    }

    pub fn zero() -> Self {
        ZPoly(Vec::new())
    }

    pub fn one() -> Self {
        ZPoly(vec![BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` when some coefficient is not an integer.
    pub fn from_poly(p: &Poly<Rational>) -> Option<Self> {
        p.coeffs()
            .iter()
            .map(|c| c.is_integer().then(|| c.numer().clone()))
            .collect::<Option<Vec<_>>>()
            .map(ZPoly::new)
    }

    pub fn to_poly(&self) -> Poly<Rational> {
        Poly::new(self.0.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        ZPoly::new(out)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let mut out = self.0.clone();
        out.resize(n, BigInt::zero());
        for (k, c) in o.0.iter().enumerate() {
            out[k] += c;
        }
        ZPoly::new(out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let mut out = self.0.clone();
        out.resize(n, BigInt::zero());
        for (k, c) in o.0.iter().enumerate() {
            out[k] -= c;
        }
        ZPoly::new(out)
    }

    /// Exact quotient over `Z`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let dd = d.0.len().checked_sub(1)?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.0.len() - 1;
        if n < dd {
            return None;
        }
        let lead = &d.0[dd];
        let mut rem = self.0.clone();
        let mut quot = vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let (c, r) = rem[k + dd].div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.iter().all(Zero::is_zero).then(|| ZPoly::new(quot))
    }
}
