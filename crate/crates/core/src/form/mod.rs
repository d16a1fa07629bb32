//! The invariant Hermitian form of the family and its diagonalization over
//! real quadratic fields.
//!
//! `Q` solves `A*·Q·A = Q` for both generators, where `A* = Aᵀ` with
//! `v ↦ 1/v`. The solution line is normalized to a Laurent matrix with
//! `Q* = Q` and coprime integer content.

mod diag;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::rep::{self, primitive_laurent, solve_linear_family, LMat, Rep};
use crate::ring::{Coeff, Field, Laurent, Poly, QuadElem, Rational, Ring};
use crate::words::Word;

pub use diag::{
    det_class_holds, diagonalize, hermitian_specialize, is_tau_hermitian, sylvester_signature, tau_star,
    DiagonalizedForm,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("no invariant form")]
    NoForm,
    #[error("invariant forms span {0} dimensions; the family is reducible")]
    Reducible(usize),
    #[error("the form is degenerate")]
    Degenerate,
    #[error("{0} is not a positive unit with conjugate equal to its inverse")]
    NotUnit(String),
    #[error("the specialized form is not Hermitian")]
    NotHermitian,
}

/// How the solution line was scaled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    /// `"Q + Q*"`, or `"(v - 1/v)·Q"` when the raw solution satisfies `Q* = −Q`.
    pub symmetrization: String,
    /// Self-reciprocal polynomial factor divided out, centered at `v⁰`.
    pub removed_factor: String,
    /// Rational scalar divided out last.
    pub content: String,
}

#[derive(Clone, Debug)]
pub struct InvariantForm<K: Field> {
    pub q: LMat<K>,
    pub nullity: usize,
    pub normalization: Normalization,
}

/// Coefficients that split into rational coordinates fixed by `conj`.
pub trait RationalParts: Coeff {
    fn rational_parts(&self) -> Vec<Rational>;
}

impl RationalParts for Rational {
    fn rational_parts(&self) -> Vec<Rational> {
        vec![self.clone()]
    }
}

impl RationalParts for QuadElem {
    fn rational_parts(&self) -> Vec<Rational> {
        vec![self.a().clone(), self.b().clone()]
    }
}

/// The linear system `A*·Q·A − Q = 0` over both generators, in the 16
/// unknowns `Q_kl` (row-major).
fn invariance_system<K: Field>(rep: &Rep<Laurent<K>>) -> LMat<K> {
    let (x, y) = rep.generators();
    let mut rows = Vec::with_capacity(32);
    for a in [x, y] {
        let s = a.laurent_star();
        for i in 0..4 {
            for j in 0..4 {
                let mut row = vec![Laurent::zero(); 16];
                for k in 0..4 {
                    for l in 0..4 {
                        row[k * 4 + l] = s.get(i, k).mul(a.get(l, j));
                    }
                }
                row[i * 4 + j] = row[i * 4 + j].sub(&Laurent::one());
                rows.push(row);
            }
        }
    }
    Matrix::from_rows(rows)
}

fn is_palindromic<K: Field>(p: &Poly<K>) -> bool {
    p.reversed().monic() == p.monic() && p.valuation() == Some(0)
}

/// The largest monic factor `h` of `g` with `v^(−deg h / 2)·h` fixed by
/// `v ↦ 1/v`: palindromic of even degree.
fn centered_factor<K: Field>(g: &Poly<K>) -> Poly<K> {
    let g = g.unshift(g.valuation().unwrap_or(0));
    let mut h = g.gcd(&g.reversed());
    let minus = Poly::new(vec![K::one().neg(), K::one()]);
    let plus = Poly::new(vec![K::one(), K::one()]);
    // (v − 1) is anti-palindromic: keep an even number of copies
    let mut m = 0;
    let mut t = h.clone();
    while let Some(q) = t.exact_div(&minus) {
        t = q;
        m += 1;
    }
    if m % 2 == 1 {
        h = h.exact_div(&minus).unwrap();
    }
    if h.degree().unwrap_or(0) % 2 == 1 {
        h = match h.exact_div(&plus) {
            Some(q) => q,
            None => return Poly::one(),
        };
    }
    if is_palindromic(&h) {
        h
    } else {
        Poly::one()
    }
}

fn normalize<K: RationalParts>(raw: LMat<K>) -> Result<(LMat<K>, Normalization), FormError> {
    let star = raw.laurent_star();
    let sum = raw.add(&star);
    let (sym, symmetrization) = if !sum.is_zero() {
        (sum, "Q + Q*")
    } else {
        let w = Laurent::from_terms(&[(1, K::one()), (-1, K::one().neg())]);
        (raw.scale(&w), "(v - 1/v)·Q")
    };
    // polynomial gcd of all entries, with powers of v set aside
    let g = sym
        .entries()
        .iter()
        .filter(|e| !e.is_zero())
        .fold(Poly::zero(), |acc, e| acc.gcd(&e.to_poly_parts().1));
    let h = centered_factor(&g);
    let half = h.degree().unwrap_or(0) as i64 / 2;
    let q = sym.map(|e| {
        let (s, p) = e.to_poly_parts();
        if p.is_zero() {
            return Laurent::zero();
        }
        Laurent::from_poly(&p.exact_div(&h).unwrap()).times_var_pow(s + half)
    });
    // rational content: gcd of numerators over lcm of denominators
    let parts: Vec<Rational> = q
        .entries()
        .iter()
        .flat_map(|e| e.terms().flat_map(|(_, c)| c.rational_parts()).collect::<Vec<_>>())
        .filter(|c| !num_traits::Zero::is_zero(c))
        .collect();
    let first = q.entries().iter().find(|e| !e.is_zero()).ok_or(FormError::NoForm)?;
    let lead_sign = first.coeff(first.max_exp().unwrap()).to_f64().signum();
    let mut content = rational_gcd(&parts);
    if lead_sign < 0.0 {
        content = -content;
    }
    let inv = K::from_rational(&content).inv().unwrap();
    let q = q.map(|e| e.scale(&inv));
    debug_assert_eq!(q.laurent_star(), q);
    let norm = Normalization {
        symmetrization: symmetrization.to_string(),
        removed_factor: format!("v^{}·({})", -half, h.display_var("v")),
        content: content.to_string(),
    };
    Ok((q, norm))
}

fn rational_gcd(qs: &[Rational]) -> Rational {
    use num_integer::Integer;
    let mut num = num_bigint::BigInt::from(0);
    let mut den = num_bigint::BigInt::from(1);
    for q in qs {
        num = num.gcd(q.numer());
        den = den.lcm(q.denom());
    }
    Rational::new(num, den)
}

/// Solves for the invariant form of any Laurent family.
pub fn solve_invariant_form_for<K: RationalParts>(
    rep: &Rep<Laurent<K>>,
) -> Result<InvariantForm<K>, FormError> {
    let ns = solve_linear_family(&invariance_system(rep));
    match ns.len() {
        0 => return Err(FormError::NoForm),
        1 => {}
        n => return Err(FormError::Reducible(n)),
    }
    let raw = Matrix::from_vec(4, 4, primitive_laurent(&ns[0]));
    let (q, normalization) = normalize(raw)?;
    if q.det().is_zero() {
        return Err(FormError::Degenerate);
    }
    Ok(InvariantForm { q, nullity: 1, normalization })
}

/// The form of `φ_{v/2}`, which has rational coefficients.
pub fn solve_invariant_form() -> Result<InvariantForm<Rational>, FormError> {
    solve_invariant_form_for(&rep::phi_v())
}

/// The form of `ρ_v`, over `Q(√3)`.
pub fn solve_invariant_form_rho() -> Result<InvariantForm<QuadElem>, FormError> {
    solve_invariant_form_for(&rep::rho())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub words: usize,
    pub failures: Vec<Word>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `A*·Q·A = Q` for the image of every word.
pub fn verify_invariance<K: Field>(
    form: &InvariantForm<K>,
    rep: &Rep<Laurent<K>>,
    corpus: &[Word],
) -> InvarianceReport {
    let mats = rep.evaluate_many(corpus);
    let ok: Vec<bool> = mats.par_iter().map(|a| a.laurent_star().mul(&form.q).mul(a) == form.q).collect();
    let failures = corpus.iter().zip(ok).filter(|(_, ok)| !ok).map(|(w, _)| w.clone()).collect();
    InvarianceReport { words: corpus.len(), failures }
}

/// Checks `τ(A)ᵀ·Q(u)·A = Q(u)` with `A = φ_{u/2}(w)` over `Q(√d)`.
pub fn verify_specialized_invariance(
    qu: &Matrix<QuadElem>,
    u: &QuadElem,
    phi: &Rep<Laurent<Rational>>,
    corpus: &[Word],
) -> InvarianceReport {
    let ui = u.tau();
    let lift = |c: &Rational| QuadElem::rational(c.clone());
    let mats = phi.evaluate_many(corpus);
    let ok: Vec<bool> = mats
        .par_iter()
        .map(|a| {
            let a = a.eval_in(u, &ui, lift);
            tau_star(&a).mul(qu).mul(&a) == *qu
        })
        .collect();
    let failures = corpus.iter().zip(ok).filter(|(_, ok)| !ok).map(|(w, _)| w.clone()).collect();
    InvarianceReport { words: corpus.len(), failures }
}
