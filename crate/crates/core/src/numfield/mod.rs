//! Real quadratic fields `Q(√d)`: units from continued fractions and
//! integrality of elements and traces.

use num_bigint::BigInt;
use num_integer::Roots;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rep::Rep;
use crate::ring::{squarefree_kernel, Laurent, QuadElem, Rational, Ring};
use crate::tracecert::Verdict;
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumfieldError {
    #[error("{0} is not a square-free integer >= 2")]
    BadRadicand(i64),
    #[error("{0} is not in Q(sqrt {1})")]
    WrongField(String, i64),
    #[error("unit power must be positive")]
    BadPower,
    #[error("trace integrality needs a passing trace certificate")]
    Uncertified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticField {
    pub d: i64,
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self, NumfieldError> {
        if d < 2 || squarefree_kernel(d).1 != 1 {
            return Err(NumfieldError::BadRadicand(d));
        }
        Ok(QuadraticField { d })
    }

    /// Whether the ring of integers is `Z[(1+√d)/2]` rather than `Z[√d]`.
    pub fn half_integer_basis(&self) -> bool {
        self.d % 4 == 1
    }

    pub fn sqrt_d(&self) -> QuadElem {
        QuadElem::sqrt(self.d)
    }

    /// The generator of the ring of integers over `Z`.
    pub fn omega(&self) -> QuadElem {
        if self.half_integer_basis() {
            QuadElem::new(rat(1, 2), rat(1, 2), self.d).unwrap()
        } else {
            self.sqrt_d()
        }
    }

    pub fn contains(&self, a: &QuadElem) -> bool {
        a.is_rational() || a.m() == self.d
    }

    /// Membership in the ring of integers: trace and norm in `Z`.
    pub fn is_integral(&self, a: &QuadElem) -> Result<bool, NumfieldError> {
        if !self.contains(a) {
            return Err(NumfieldError::WrongField(a.to_string(), self.d));
        }
        Ok(a.trace().is_integer() && a.norm().is_integer())
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `√d = [a0; period…]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqrtExpansion {
    pub a0: i64,
    pub period: Vec<i64>,
}

impl SqrtExpansion {
    /// The period ends in `2·a0` and is a palindrome before that.
    pub fn is_well_formed(&self) -> bool {
        let Some((&last, body)) = self.period.split_last() else {
            return false;
        };
        last == 2 * self.a0 && body.iter().eq(body.iter().rev())
    }
}

/// Partial quotients of the reduced quadratic irrational `(P + √d)/Q`.
struct QuadraticCf {
    d: i64,
    root: i64,
    p: i64,
    q: i64,
}

impl Iterator for QuadraticCf {
    type Item = (i64, i64, i64);

    /// Yields `(a, P, Q)` of the current complete quotient.
    fn next(&mut self) -> Option<Self::Item> {
        let a = (self.p + self.root).div_euclid(self.q);
        let state = (a, self.p, self.q);
        let p = a * self.q - self.p;
        self.q = (self.d - p * p) / self.q;
        self.p = p;
        Some(state)
    }
}

pub fn sqrt_expansion(d: i64) -> SqrtExpansion {
    let root = d.sqrt();
    let mut cf = QuadraticCf { d, root, p: 0, q: 1 };
    let (a0, _, _) = cf.next().unwrap();
    let mut period = Vec::new();
    for (a, _, q) in cf {
        period.push(a);
        if q == 1 {
            break;
        }
    }
    SqrtExpansion { a0, period }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitRecord {
    pub d: i64,
    /// Least unit greater than 1.
    pub epsilon: QuadElem,
    pub norm: i64,
    /// `u = ε^(2k)`.
    pub power: u32,
    pub u: QuadElem,
}

/// The fundamental unit from the convergents of `√d`, or of `(1+√d)/2`
/// when `d ≡ 1 (mod 4)`: the first convergent `p/q` of norm `±1`.
pub fn fundamental_unit(d: i64) -> Result<QuadElem, NumfieldError> {
    let field = QuadraticField::new(d)?;
    let root = d.sqrt();
    let half = field.half_integer_basis();
    let cf = if half { QuadraticCf { d, root, p: 1, q: 2 } } else { QuadraticCf { d, root, p: 0, q: 1 } };
    let (mut p0, mut q0) = (BigInt::from(1), BigInt::from(0));
    let (mut p1, mut q1) = (BigInt::from(0), BigInt::from(1));
    for (a, _, _) in cf {
        let p = &p0 * a + &p1;
        let q = &q0 * a + &q1;
        (p1, q1) = (p0, q0);
        (p0, q0) = (p.clone(), q.clone());
        let (pq, qq) = (Rational::from(p), Rational::from(q));
        let eps = if half {
            // p − q·(1 − √d)/2
            QuadElem::new((&pq * int(2) - &qq) / int(2), qq / int(2), d).unwrap()
        } else {
            QuadElem::new(pq, qq, d).unwrap()
        };
        let n = eps.norm();
        if n == int(1) || n == int(-1) {
            return Ok(eps);
        }
    }
    unreachable!("continued fraction iterator is infinite")
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `ε` and the positive unit `u = ε^(2k)`, which satisfies `u·τ(u) = 1`.
pub fn positive_unit(d: i64, k: u32) -> Result<UnitRecord, NumfieldError> {
    if k == 0 {
        return Err(NumfieldError::BadPower);
    }
    let epsilon = fundamental_unit(d)?;
    let norm = if epsilon.norm() == int(1) { 1 } else { -1 };
    let u = epsilon.pow(2 * k);
    debug_assert_eq!(u.mul(&u.tau()), QuadElem::one());
    Ok(UnitRecord { d, epsilon, norm, power: k, u })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntegralityReport {
    pub d: i64,
    pub u: String,
    pub words: usize,
    pub failures: Vec<Word>,
    /// Words whose whole image has integral entries, not only the trace.
    pub integral_entry_words: usize,
}

impl IntegralityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates `tr φ_{u/2}(w)` for every corpus word and tests membership in
/// the ring of integers. `phi` is [`rep::phi_v`], possibly with a warm memo.
/// Requires a passing trace certificate.
pub fn certify_integral_traces(
    d: i64,
    u: &QuadElem,
    corpus: &[Word],
    phi: &Rep<Laurent<Rational>>,
    trace_verdict: Verdict,
) -> Result<IntegralityReport, NumfieldError> {
    if !trace_verdict.passed() {
        return Err(NumfieldError::Uncertified);
    }
    let field = QuadraticField::new(d)?;
    if !field.contains(u) {
        return Err(NumfieldError::WrongField(u.to_string(), d));
    }
    let mats = phi.evaluate_many(corpus);
    let ui = u.tau();
    let lift = |c: &Rational| QuadElem::rational(c.clone());
    let checks: Vec<(bool, bool)> = mats
        .par_iter()
        .map(|m| {
            let tr = m.trace().eval_in(u, &ui, lift);
            let entries =
                m.entries().iter().all(|e| field.is_integral(&e.eval_in(u, &ui, lift)).unwrap_or(false));
            (field.is_integral(&tr).unwrap_or(false), entries)
        })
        .collect();
    let failures = corpus.iter().zip(&checks).filter(|(_, c)| !c.0).map(|(w, _)| w.clone()).collect();
    Ok(IntegralityReport {
        d,
        u: u.to_string(),
        words: corpus.len(),
        failures,
        integral_entry_words: checks.iter().filter(|c| c.1).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64, d: i64) -> QuadElem {
        QuadElem::new(int(a), int(b), d).unwrap()
    }

    /// Least `y ≥ 1` with `d·y² ± c` a square, `c = 4` on the half-integer
    /// basis and `1` otherwise; returns `ε = (x + y√d)/s`.
    fn brute_force_unit(d: i64) -> QuadElem {
        let (c, s) = if d % 4 == 1 { (4, 2) } else { (1, 1) };
        for y in 1i64.. {
            for sign in [-1, 1] {
                let n = d * y * y + sign * c;
                let x = n.sqrt();
                if n > 0 && x * x == n {
                    return QuadElem::new(rat(x, s), rat(y, s), d).unwrap();
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn small_units() {
        assert_eq!(fundamental_unit(2).unwrap(), q(1, 1, 2));
        assert_eq!(positive_unit(2, 1).unwrap().u, q(3, 2, 2));
        let golden = QuadElem::new(rat(1, 2), rat(1, 2), 5).unwrap();
        assert_eq!(fundamental_unit(5).unwrap(), golden);
        assert_eq!(positive_unit(5, 1).unwrap().u, QuadElem::new(rat(3, 2), rat(1, 2), 5).unwrap());
        let r3 = positive_unit(3, 1).unwrap();
        assert_eq!((r3.epsilon.clone(), r3.norm), (q(2, 1, 3), 1));
        assert_eq!(r3.u, q(7, 4, 3));
    }

    #[test]
    fn continued_fraction_matches_brute_force() {
        for d in 2..=50 {
            if QuadraticField::new(d).is_err() {
                continue;
            }
            assert_eq!(fundamental_unit(d).unwrap(), brute_force_unit(d), "d = {d}");
            let r = positive_unit(d, 1).unwrap();
            assert_eq!(r.u.mul(&r.u.tau()), QuadElem::one());
            assert!(r.u.signum_real() > 0 && r.u.sub(&QuadElem::one()).signum_real() > 0);
        }
    }

    #[test]
    fn expansions_are_palindromic() {
        assert_eq!(sqrt_expansion(2), SqrtExpansion { a0: 1, period: vec![2] });
        assert_eq!(sqrt_expansion(7), SqrtExpansion { a0: 2, period: vec![1, 1, 1, 4] });
        for d in 2..200 {
            if QuadraticField::new(d).is_ok() {
                assert!(sqrt_expansion(d).is_well_formed(), "d = {d}");
            }
        }
    }

    #[test]
    fn integrality_examples() {
        let f2 = QuadraticField::new(2).unwrap();
        let f5 = QuadraticField::new(5).unwrap();
        assert!(f2.is_integral(&q(3, 2, 2)).unwrap());
        assert!(f5.is_integral(&QuadElem::new(rat(1, 2), rat(1, 2), 5).unwrap()).unwrap());
        assert!(!f2.is_integral(&QuadElem::new(rat(1, 2), rat(1, 2), 2).unwrap()).unwrap());
        assert!(f2.is_integral(&q(1, 1, 3)).is_err());
        assert!(QuadraticField::new(12).is_err());
        assert_eq!(positive_unit(2, 0).unwrap_err(), NumfieldError::BadPower);
    }

    #[test]
    fn traces_at_units_are_integral() {
        let corpus: Vec<Word> = crate::words::enumerate_ball(4).collect();
        let phi = crate::rep::phi_v();
        for d in [2, 5] {
            let u = positive_unit(d, 1).unwrap().u;
            let r = certify_integral_traces(d, &u, &corpus, &phi, Verdict::Pass).unwrap();
            assert!(r.passed(), "d = {d}: {:?}", r.failures);
            assert_eq!(r.words, corpus.len());
        }
        let u = positive_unit(2, 1).unwrap().u;
        let refused = certify_integral_traces(2, &u, &corpus, &phi, Verdict::Fail);
        assert_eq!(refused.unwrap_err(), NumfieldError::Uncertified);
        // a non-unit parameter breaks integrality: tr φ_{1/4}(x) = 1/2 + 3 + ...
        let half = QuadElem::rational(rat(1, 2));
        let r = certify_integral_traces(2, &half, &corpus, &phi, Verdict::Pass).unwrap();
        assert!(!r.passed());
    }

    proptest! {
        #[test]
        fn integers_form_a_ring(
            d in prop::sample::select(vec![2i64, 3, 5, 13, 21]),
            a in -20i64..20, b in -20i64..20, c in -20i64..20, e in -20i64..20,
        ) {
            let f = QuadraticField::new(d).unwrap();
            let w = f.omega();
            let x = QuadElem::from_int(a).add(&w.mul(&QuadElem::from_int(b)));
            let y = QuadElem::from_int(c).add(&w.mul(&QuadElem::from_int(e)));
            for z in [x.add(&y), x.mul(&y), x.tau(), x.sub(&y)] {
                prop_assert!(f.is_integral(&z).unwrap());
            }
        }
    }
}
