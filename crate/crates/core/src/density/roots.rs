//! Root location for rational polynomials: exact Sturm counts and
//! floating-point enclosures.

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::ring::{squarefree_decomposition, Coeff, Poly, Rational, Ring};

fn sign_at_zero(p: &Poly<Rational>) -> i32 {
    let c = p.coeff(0);
    if Zero::is_zero(&c) {
        0
    } else if c.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_at_infinity(p: &Poly<Rational>) -> i32 {
    match p.leading() {
        Some(c) if c.is_positive() => 1,
        Some(_) => -1,
        None => 0,
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let s: Vec<i32> = signs.filter(|&x| x != 0).collect();
    s.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in `(0, ∞)`.
pub fn positive_root_count(p: &Poly<Rational>) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let p = p.unshift(p.valuation().unwrap());
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1]).1.neg();
        seq.push(r);
    }
    seq.pop();
    let at0 = variations(seq.iter().map(sign_at_zero));
    let at_inf = variations(seq.iter().map(sign_at_infinity));
    at0 - at_inf
}

/// A disk holding `multiplicity` roots counted once each (the roots of one
/// squarefree factor are separated first).
#[derive(Clone, Debug, PartialEq)]
pub struct RootEnclosure {
    pub center: Complex64,
    pub radius: f64,
    pub multiplicity: usize,
}

impl RootEnclosure {
    pub fn modulus_bounds(&self) -> (f64, f64) {
        let m = self.center.norm();
        ((m - self.radius).max(0.0), m + self.radius)
    }

    /// The disk lies off the real axis, so the root is not real.
    pub fn is_nonreal(&self) -> bool {
        self.center.im.abs() > self.radius
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }
}

fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    // Cauchy bound on root moduli
    let bound = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::zero(), |acc, &c| acc * x + c);
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let denom =
                (0..n).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    z
}

/// Approximate roots of each squarefree factor with inclusion disks.
///
/// The disk radius is `n·(|f(z_i)| + e)/|lc·∏(z_i − z_j)|` with `e` a bound
/// on the Horner rounding error; every connected union of `m` disks holds
/// exactly `m` roots, so disjoint disks each isolate one root.
pub fn enclose_roots(p: &Poly<Rational>) -> Vec<RootEnclosure> {
    let mut out = Vec::new();
    for (f, mult) in squarefree_decomposition(p) {
        let n = match f.degree() {
            Some(0) | None => continue,
            Some(n) => n,
        };
        let coeffs: Vec<f64> = f.coeffs().iter().map(Coeff::to_f64).collect();
        let z = durand_kerner(&coeffs);
        for i in 0..n {
            let zi = z[i];
            let value = coeffs.iter().rev().fold(Complex64::zero(), |acc, &c| acc * zi + c);
            let abs_sum = coeffs.iter().rev().fold(0.0, |acc, &c| acc * zi.norm() + c.abs());
            let horner_err = 4.0 * (n as f64 + 1.0) * f64::EPSILON * abs_sum;
            let prod =
                (0..n).filter(|&j| j != i).fold(Complex64::new(coeffs[n], 0.0), |acc, j| acc * (zi - z[j]));
            let radius = n as f64 * (value.norm() + horner_err) / prod.norm() * (1.0 + 1e-9);
            out.push(RootEnclosure { center: zi, radius, multiplicity: mult });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_ints(c)
    }

    #[test]
    fn sturm_counts() {
        // v² + v + 1: no real roots
        assert_eq!(positive_root_count(&p(&[1, 1, 1])), 0);
        // (v − 1)(v − 2)(v + 3)
        assert_eq!(positive_root_count(&p(&[6, -7, 0, 1])), 2);
        // v·(v − 5)
        assert_eq!(positive_root_count(&p(&[0, -5, 1])), 1);
    }

    #[test]
    fn enclosures_hold_known_roots() {
        // (Q − 2)³(Q − 1/8)
        let f = p(&[-2, 1])
            .pow(3)
            .mul(&Poly::new(vec![Rational::new((-1).into(), 8.into()), Rational::from_integer(1.into())]));
        let e = enclose_roots(&f);
        assert_eq!(e.len(), 2);
        let three = e.iter().find(|r| r.multiplicity == 3).unwrap();
        assert!(three.contains(Complex64::new(2.0, 0.0)));
        let one = e.iter().find(|r| r.multiplicity == 1).unwrap();
        assert!(one.contains(Complex64::new(0.125, 0.0)));
        assert!(one.radius < 1e-9);
        // Q² + 1 has no real roots
        assert!(enclose_roots(&p(&[1, 0, 1])).iter().all(RootEnclosure::is_nonreal));
    }
}
