use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::rep::LMat;
use crate::ring::{Field, QuadElem, Rational, Ring};

use super::FormError;

/// `Mᵀ` with the Galois conjugation on every entry.
pub fn tau_star(m: &Matrix<QuadElem>) -> Matrix<QuadElem> {
    m.transpose().map(QuadElem::tau)
}

pub fn is_tau_hermitian(m: &Matrix<QuadElem>) -> bool {
    tau_star(m) == *m
}

/// `Q(u)` for a unit `u` of `Q(√d)` with `τ(u) = 1/u`, so that `v ↦ 1/v`
/// becomes the Galois conjugation.
pub fn hermitian_specialize(q: &LMat<Rational>, u: &QuadElem) -> Result<Matrix<QuadElem>, FormError> {
    if u.mul(&u.tau()) != QuadElem::one() || u.signum_real() <= 0 {
        return Err(FormError::NotUnit(u.to_string()));
    }
    let qu = q.eval_in(u, &u.tau(), |c| QuadElem::rational(c.clone()));
    if !is_tau_hermitian(&qu) {
        return Err(FormError::NotHermitian);
    }
    Ok(qu)
}

/// A congruence `M*·Q·M = Δ` with rational diagonal `Δ`, and its integral
/// rescaling `J`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagonalizedForm {
    pub d: i64,
    pub m: Matrix<QuadElem>,
    pub delta: Vec<Rational>,
    /// Column scalings `s_i` with `J_i = s_i²·Δ_i`.
    pub scales: Vec<Rational>,
    pub j: Vec<BigInt>,
}

impl DiagonalizedForm {
    /// `M·diag(s)`, which carries `Q` to `J`.
    pub fn m_integral(&self) -> Matrix<QuadElem> {
        let s: Vec<QuadElem> = self.scales.iter().map(|c| QuadElem::rational(c.clone())).collect();
        self.m.mul(&Matrix::diagonal(&s))
    }

    /// Numbers of positive and negative entries of `J`.
    pub fn sign_counts(&self) -> (usize, usize) {
        let pos = self.j.iter().filter(|b| b.is_positive()).count();
        (pos, self.j.len() - pos)
    }
}

fn hermitian_value(q: &Matrix<QuadElem>, m: &Matrix<QuadElem>) -> Matrix<QuadElem> {
    tau_star(m).mul(q).mul(m)
}

fn add_column(m: &mut Matrix<QuadElem>, dst: usize, src: usize, c: &QuadElem) {
    for r in 0..m.rows() {
        let e = m.get(r, dst).add(&m.get(r, src).mul(c));
        m.set(r, dst, e);
    }
}

/// Gram–Schmidt for the Hermitian form `h(a, b) = a*·Q·b`.
///
/// A zero pivot `h(b_i, b_i)` is repaired with `b_i + b_j` for the least
/// `j > i` with `h(b_i, b_j) ≠ 0`, or `b_i + √d·b_j` when the first choice
/// still gives zero.
pub fn diagonalize(qu: &Matrix<QuadElem>, d: i64) -> Result<DiagonalizedForm, FormError> {
    if !is_tau_hermitian(qu) {
        return Err(FormError::NotHermitian);
    }
    let n = qu.rows();
    let sqrt_d = QuadElem::sqrt(d);
    let mut m = Matrix::<QuadElem>::identity(n);
    for i in 0..n {
        let mut h = hermitian_value(qu, &m);
        if h.get(i, i).is_zero() {
            let j = (i + 1..n).find(|&j| !h.get(i, j).is_zero()).ok_or(FormError::Degenerate)?;
            add_column(&mut m, i, j, &QuadElem::one());
            h = hermitian_value(qu, &m);
            if h.get(i, i).is_zero() {
                add_column(&mut m, i, j, &QuadElem::one().neg());
                add_column(&mut m, i, j, &sqrt_d);
                h = hermitian_value(qu, &m);
            }
            if h.get(i, i).is_zero() {
                return Err(FormError::Degenerate);
            }
        }
        let pivot_inv = h.get(i, i).inv().unwrap();
        for j in i + 1..n {
            let c = h.get(i, j).mul(&pivot_inv);
            if !c.is_zero() {
                add_column(&mut m, j, i, &c.neg());
            }
        }
    }
    let h = hermitian_value(qu, &m);
    debug_assert!(h.is_diagonal());
    let mut delta = Vec::with_capacity(n);
    for i in 0..n {
        let e = h.get(i, i);
        // h(b, b) is τ-fixed, hence rational
        assert!(e.is_rational(), "diagonal entry {e} is not rational");
        if e.is_zero() {
            return Err(FormError::Degenerate);
        }
        delta.push(e.a().clone());
    }
    let (scales, j) = delta.iter().map(integerize).unzip();
    Ok(DiagonalizedForm { d, m, delta, scales, j })
}

/// `(s, b)` with `b = s²·q` a squarefree integer (up to a trial bound for
/// huge cofactors).
fn integerize(q: &Rational) -> (Rational, BigInt) {
    // q = p/r → p·r / r²
    let pr = q.numer() * q.denom();
    let (kernel, root) = squarefree_split(&pr.abs());
    let b = if pr.is_negative() { -kernel } else { kernel };
    // b = pr / root² = q·r²/root²
    let s = Rational::new(q.denom().clone(), root);
    (s, b)
}

/// `n = kernel·root²`.
fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut root = BigInt::one();
    let mut p = 2u64;
    while p < 1_000_000 && BigInt::from(p * p) <= rest {
        let pp = BigInt::from(p * p);
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            root *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let s = rest.sqrt();
    if &s * &s == rest && !rest.is_one() {
        root *= &s;
        rest = BigInt::one();
    }
    (rest, root)
}

/// Signature `(n₊, n₋)` of a real symmetric rational matrix, from the signs
/// of its characteristic polynomial (Descartes' rule is exact for
/// real-rooted polynomials).
pub fn sylvester_signature(q: &Matrix<Rational>) -> (usize, usize) {
    assert_eq!(q.transpose(), *q, "not symmetric");
    // coefficients of det(λ − Q), constant term first
    let c = q.charpoly_coeffs();
    let changes = |cs: &[Rational]| {
        let signs: Vec<bool> = cs.iter().filter(|x| !Zero::is_zero(*x)).map(|x| x.is_positive()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let pos = changes(&c);
    let flipped: Vec<Rational> =
        c.iter().enumerate().map(|(k, x)| if k % 2 == 1 { -x.clone() } else { x.clone() }).collect();
    (pos, changes(&flipped))
}

/// `∏Δ_i = N(det M)·det Q(u)`, the congruence identity on determinants.
pub fn det_class_holds(qu: &Matrix<QuadElem>, f: &DiagonalizedForm) -> bool {
    let prod = f.delta.iter().fold(<Rational as One>::one(), |acc, x| acc * x);
    let det_m = f.m.det();
    QuadElem::rational(prod) == det_m.mul(&det_m.tau()).mul(&qu.det())
}
