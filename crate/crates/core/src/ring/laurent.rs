use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::write_terms;
use super::{Coeff, Field, Poly, RatFunc, Ring};

/// Laurent polynomial `Σ c_k v^k`, `k ∈ Z`, stored densely from the lowest
/// exponent up. No stored zeros at either end.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Laurent<K> {
    low: i64,
    coeffs: Vec<K>,
}

impl<K: Field> Laurent<K> {
    pub fn new(low: i64, mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let skip = coeffs.iter().take_while(|c| c.is_zero()).count();
        if skip == coeffs.len() {
            return Laurent { low: 0, coeffs: Vec::new() };
        }
        coeffs.drain(..skip);
        Laurent { low: low + skip as i64, coeffs }
    }

    pub fn constant(c: K) -> Self {
        Self::new(0, vec![c])
    }

    /// `c·v^k`.
    pub fn monomial(c: K, k: i64) -> Self {
        Self::new(k, vec![c])
    }

    /// The variable `v`.
    pub fn var() -> Self {
        Self::monomial(K::one(), 1)
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms(terms: &[(i64, K)]) -> Self {
        terms.iter().fold(Self::zero(), |acc, (k, c)| acc.add(&Self::monomial(c.clone(), *k)))
    }

    pub fn from_poly(p: &Poly<K>) -> Self {
        Self::new(0, p.coeffs().to_vec())
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_exp(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.low)
    }

    pub fn max_exp(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> K {
        if k < self.low {
            return K::zero();
        }
        self.coeffs.get((k - self.low) as usize).cloned().unwrap_or_else(K::zero)
    }

    /// Nonzero terms `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &K)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    /// Splits as `v^shift · p(v)` with `p(0) ≠ 0` (zero gives `(0, 0)`).
    pub fn to_poly_parts(&self) -> (i64, Poly<K>) {
        (self.low, Poly::new(self.coeffs.clone()))
    }

    /// The polynomial `v^k · self`, if it has no negative exponents.
    pub fn times_var_pow(&self, k: i64) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        Laurent { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    /// Polynomial part, requiring all exponents to be nonnegative.
    pub fn as_poly(&self) -> Option<Poly<K>> {
        if self.coeffs.is_empty() {
            return Some(Poly::zero());
        }
        (self.low >= 0).then(|| Poly::new(self.coeffs.clone()).shift(self.low as usize))
    }

    /// `v ↦ 1/v`.
    pub fn star(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        match self.max_exp() {
            None => self.clone(),
            Some(hi) => Laurent { low: -hi, coeffs: c },
        }
    }

    /// Substitutes `v ↦ c·v`.
    pub fn scale_var(&self, c: &K) -> Self {
        let ci = c.inv().expect("nonzero scale");
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let k = self.low + i as i64;
                let f = if k >= 0 { c.pow(k as u32) } else { ci.pow((-k) as u32) };
                a.mul(&f)
            })
            .collect();
        Self::new(self.low, coeffs)
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Laurent<L> {
        Laurent::new(self.low, self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &K) -> Self {
        self.map(|a| a.mul(c))
    }

    /// Evaluates at a nonzero point.
    pub fn eval(&self, x: &K) -> K {
        self.eval_in(x, &x.inv().expect("evaluation at zero"), |c| c.clone())
    }

    /// Evaluates in an extension ring given `x` and `1/x` there.
    pub fn eval_in<R: Ring>(&self, x: &R, x_inv: &R, lift: impl Fn(&K) -> R) -> R {
        let Some(lo) = self.min_exp() else {
            return R::zero();
        };
        let acc = self.coeffs.iter().rev().fold(R::zero(), |acc, c| acc.mul(x).add(&lift(c)));
        if lo >= 0 {
            acc.mul(&x.pow(lo as u32))
        } else {
            acc.mul(&x_inv.pow((-lo) as u32))
        }
    }

    pub fn to_ratfunc(&self) -> RatFunc<K> {
        match self.min_exp() {
            None => RatFunc::zero(),
            Some(lo) if lo >= 0 => RatFunc::from_poly(self.as_poly().unwrap()),
            Some(lo) => {
                RatFunc::new(Poly::new(self.coeffs.clone()), Poly::monomial(K::one(), (-lo) as usize))
                    .expect("nonzero denominator")
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty() || (self.low == 0 && self.coeffs.len() == 1)
    }

    /// Exact division by a Laurent polynomial, when the quotient is Laurent.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (sa, pa) = self.to_poly_parts();
        let (sd, pd) = d.to_poly_parts();
        let q = pa.exact_div(&pd)?;
        Some(Self::from_poly(&q).times_var_pow(sa - sd))
    }
}

impl<K: Field> Ring for Laurent<K> {
    fn zero() -> Self {
        Laurent { low: 0, coeffs: Vec::new() }
    }
    fn one() -> Self {
        Self::constant(K::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() {
            return other.clone();
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.max_exp().unwrap().max(other.max_exp().unwrap());
        let coeffs = (low..=high).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        Self::new(low, coeffs)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(self.low + other.low, out)
    }
    fn neg(&self) -> Self {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }
    fn from_int(n: i64) -> Self {
        Self::constant(K::from_int(n))
    }
}

impl<K: Coeff> Laurent<K> {
    pub fn display_var(&self, var: &str) -> String {
        struct D<'a, K>(&'a Laurent<K>, &'a str);
        impl<K: Coeff> fmt::Display for D<'_, K> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let terms: Vec<_> = self.0.terms().map(|(k, c)| (k, c.clone())).collect();
                write_terms(f, terms.into_iter().rev(), self.1)
            }
        }
        D(self, var).to_string()
    }

    /// Applies the Galois conjugation to every coefficient.
    pub fn conj_coeffs(&self) -> Self {
        self.map(|c| c.conj())
    }

    /// True when every coefficient is a rational integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.terms().all(|(_, c)| c.as_rational().is_some_and(|q| q.is_integer()))
    }
}

impl<K: Coeff> fmt::Display for Laurent<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_var("v"))
    }
}

impl<K: Field> fmt::Debug for Laurent<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent(v^{}·{:?})", self.low, self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, rat, QuadElem, Rational};
    use proptest::prelude::*;

    type L = Laurent<Rational>;

    #[test]
    fn star_and_display() {
        let p = L::from_terms(&[(2, int(1)), (-1, int(3)), (0, int(-1))]);
        assert_eq!(p.to_string(), "v^2-1+3*v^-1");
        assert_eq!(p.star().to_string(), "3*v-1+v^-2");
        assert_eq!(p.star().star(), p);
    }

    #[test]
    fn scale_var_halves() {
        // t + 1/t with t = v/2 gives v/2 + 2/v
        let p = L::from_terms(&[(1, int(1)), (-1, int(1))]);
        let q = p.scale_var(&rat(1, 2));
        assert_eq!(q, L::from_terms(&[(1, rat(1, 2)), (-1, int(2))]));
    }

    #[test]
    fn eval_negative_exponents() {
        let p = L::from_terms(&[(1, int(3)), (-3, int(1))]);
        assert_eq!(p.eval(&int(2)), rat(49, 8));
        let u = QuadElem::new(int(3), int(2), 2).unwrap();
        let pq = p.map(|c| QuadElem::from(c.clone()));
        // 3u + u^-3 is an algebraic integer
        let val = pq.eval(&u);
        assert!(val.a().is_integer() && val.b().is_integer());
    }

    #[test]
    fn exact_division() {
        let a = L::from_terms(&[(-1, int(1)), (1, int(-1))]); // 1/v - v
        let b = L::from_terms(&[(0, int(1)), (1, int(1))]); // 1 + v
        assert_eq!(a.exact_div(&b).unwrap(), L::from_terms(&[(-1, int(1)), (0, int(-1))]));
    }

    fn arb_laurent() -> impl Strategy<Value = L> {
        (-4i64..4, proptest::collection::vec((-9i64..9, 1i64..5), 0..5))
            .prop_map(|(low, cs)| L::new(low, cs.into_iter().map(|(a, b)| rat(a, b)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn ring_axioms(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&L::zero()), a.clone());
            prop_assert_eq!(a.mul(&L::one()), a.clone());
            prop_assert_eq!(a.mul(&b).star(), a.star().mul(&b.star()));
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_laurent(), b in arb_laurent(), n in 1i64..20, d in 1i64..20) {
            let u = rat(n, d);
            prop_assert_eq!(a.mul(&b).eval(&u), a.eval(&u) * b.eval(&u));
            prop_assert_eq!(a.add(&b).eval(&u), a.eval(&u) + b.eval(&u));
        }
    }

    proptest! {
        #[test]
        fn evaluation_in_quadratic_field(a in arb_laurent(), b in arb_laurent(), x in 1i64..9, y in -9i64..9) {
            let u = QuadElem::new(int(x), int(y), 2).unwrap();
            prop_assume!(!Ring::is_zero(&u));
            let lift = |c: &Rational| QuadElem::from(c.clone());
            let ui = u.checked_inv().unwrap();
            let prod = a.mul(&b).eval_in(&u, &ui, lift);
            prop_assert_eq!(prod, &a.eval_in(&u, &ui, lift) * &b.eval_in(&u, &ui, lift));
        }
    }
}
