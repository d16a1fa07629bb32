//! Just enough factorization for denominator reports: squarefree
//! decomposition, rational roots, and irreducibility of quadratics over `Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::{Field, Poly, Rational, Ring};

/// True iff `p` is `v^k` for some `k ≥ 0` (with `p` monic).
pub fn is_unit_monomial<K: Field>(p: &Poly<K>) -> bool {
    match p.degree() {
        None => false,
        Some(d) => p.coeff(d).is_one() && p.coeffs()[..d].iter().all(|c| c.is_zero()),
    }
}

/// Yun's algorithm: monic, pairwise coprime, squarefree `a_i` with
/// `p = lc · Π a_i^i`. Trivial factors are dropped.
pub fn squarefree_decomposition<K: Field>(p: &Poly<K>) -> Vec<(Poly<K>, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = p.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0).unwrap();
    let c = df.exact_div(&a0).unwrap();
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree() != Some(0) {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a).unwrap();
        let c = d.exact_div(&a).unwrap();
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Rational roots of a polynomial with rational coefficients.
pub fn rational_roots(p: &Poly<Rational>) -> Vec<Rational> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    // strip x^k
    let val = p.valuation().unwrap();
    if val > 0 {
        roots.push(Rational::zero());
    }
    let q = p.unshift(val);
    if q.degree() == Some(0) {
        return roots;
    }
    let ints = integer_primitive(&q);
    let lead = ints.last().unwrap().abs();
    let constant = ints[0].abs();
    let lead_divs = divisors(&lead);
    let const_divs = divisors(&constant);
    let mut cands: Vec<Rational> = Vec::new();
    for n in &const_divs {
        for d in &lead_divs {
            let r = Rational::new(n.clone(), d.clone());
            cands.push(r.clone());
            cands.push(-r);
        }
    }
    cands.sort();
    cands.dedup();
    for r in cands {
        if q.eval(&r).is_zero() {
            roots.push(r);
        }
    }
    roots.sort();
    roots
}

/// Squarefree factorization refined into rational linear factors and,
/// for quadratics, a rational-root test. Each returned factor is monic and
/// squarefree; factors are pairwise coprime.
pub fn squarefree_factor(p: &Poly<Rational>) -> Vec<(Poly<Rational>, usize)> {
    let mut out = Vec::new();
    for (f, mult) in squarefree_decomposition(p) {
        let mut rest = f.clone();
        for r in rational_roots(&f) {
            let lin = Poly::new(vec![-r, Rational::one()]);
            rest = rest.exact_div(&lin).unwrap();
            out.push((lin, mult));
        }
        if rest.degree().unwrap_or(0) > 0 {
            out.push((rest, mult));
        }
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| cmp_poly(&a.0, &b.0)));
    out
}

/// Whether a monic quadratic over `Q` is irreducible (non-square discriminant).
pub fn quadratic_is_irreducible(p: &Poly<Rational>) -> bool {
    assert_eq!(p.degree(), Some(2));
    let (c, b, a) = (p.coeff(0), p.coeff(1), p.coeff(2));
    let disc = &b * &b - Rational::from_integer(4.into()) * a * c;
    !is_rational_square(&disc)
}

fn is_rational_square(q: &Rational) -> bool {
    if q.is_negative() {
        return false;
    }
    let is_sq = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    is_sq(q.numer()) && is_sq(q.denom())
}

// Linear factors `v − r` come out in increasing `r`.
fn cmp_poly(a: &Poly<Rational>, b: &Poly<Rational>) -> std::cmp::Ordering {
    b.coeffs().cmp(a.coeffs())
}

/// Primitive integer coefficient vector proportional to `p`.
pub(crate) fn integer_primitive(p: &Poly<Rational>) -> Vec<BigInt> {
    let lcm = p.coeffs().iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> =
        p.coeffs().iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::from(0), |acc, c| acc.gcd(c));
    if num_traits::Zero::is_zero(&g) {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // Denominator factors in this crate have tiny coefficients; trial
    // division is fine.
    let mut out = Vec::new();
    if num_traits::Zero::is_zero(n) {
        return out;
    }
    let mut d = BigInt::from(1);
    while &d * &d <= *n {
        if num_traits::Zero::is_zero(&(n % &d)) {
            out.push(d.clone());
            let e = n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}
