//! Irreducibility and density witnesses for the family: the eigenvalue-one
//! locus of commutators, eigenvector orbits, the adjoint span, longitude
//! spectra and proximality.

mod adjoint;
mod roots;

use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::rep::{self, CharPoly, Rep};
use crate::ring::{squarefree_factor, Coeff, Field, Laurent, Poly, QuadElem, Rational, Ring};
use crate::words::{enumerate_ball, Word};

pub use adjoint::{
    adjoint, adjoint_span_dimension, adjoint_span_generic, adjoint_span_quadratic, killing_gram, sl4_basis,
    sl4_coords, AdjointSpan, FULL_SPAN, SL4_DIM,
};
pub use roots::{enclose_roots, positive_root_count, RootEnclosure};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Locus {
    pub word: Word,
    /// Whether `det(ρ_v(w) − I)` vanishes identically.
    pub identically_zero: bool,
    /// Primitive integer numerator of `det(ρ_v(w) − I)` with powers of `v`
    /// removed.
    pub polynomial: String,
    /// Its squarefree factors.
    pub factors: Vec<String>,
    pub positive_real_roots: usize,
}

/// Where `ρ_v(w)` has eigenvalue 1, as the numerator of `det(ρ_v(w) − I)`.
pub fn eigenvalue_one_locus(w: &Word) -> Locus {
    let m = rep::rho().evaluate(w);
    let det = m.sub(&Matrix::identity(4)).det();
    // the determinant is a conjugation invariant, so its coefficients are rational
    let det: Laurent<Rational> = det.map(|c| c.as_rational().expect("rational determinant"));
    if det.is_zero() {
        return Locus {
            word: w.clone(),
            identically_zero: true,
            polynomial: "0".into(),
            factors: Vec::new(),
            positive_real_roots: 0,
        };
    }
    let (_, p) = det.to_poly_parts();
    let p = primitive(&p);
    let factors = squarefree_factor(&p);
    Locus {
        word: w.clone(),
        identically_zero: false,
        polynomial: p.display_var("v"),
        factors: factors.iter().map(|(f, _)| f.display_var("v")).collect(),
        positive_real_roots: positive_root_count(&p),
    }
}

/// Scales to coprime integer coefficients with positive leading term.
fn primitive(p: &Poly<Rational>) -> Poly<Rational> {
    use num_integer::Integer;
    use num_traits::Signed;
    let (mut num, mut den) = (num_bigint::BigInt::from(0), num_bigint::BigInt::from(1));
    for c in p.coeffs() {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    let mut s = Rational::new(den, num);
    if p.leading().is_some_and(|c| c.is_negative()) {
        s = -s;
    }
    p.scale(&s)
}

/// Rank of `{M·e : M in mats}`.
pub fn orbit_dimension<K: Field>(mats: &[Matrix<K>], e: &[K]) -> usize {
    let ev = Matrix::from_vec(e.len(), 1, e.to_vec());
    let rows: Vec<Vec<K>> = mats.iter().map(|m| m.mul(&ev).entries().to_vec()).collect();
    Matrix::from_rows(rows).rank()
}

/// The `v⁻³` eigenvector of the longitude, and the orbit dimension of the
/// radius-3 ball on it, for `φ_{t0}` and for its transpose.
///
/// At `v = 2·t0 ≠ 1` the eigenvalue `v⁻³` is simple and rational.
pub fn eigenvector_orbit_dim(t0: &Rational, longitude: &Word) -> Option<(usize, usize)> {
    let v = t0.add(t0);
    if v == Rational::one() {
        return None;
    }
    let r = rep::phi().specialize("phi_t0", t0, &t0.inv()?, |c| c.clone());
    let lambda_inv3 = v.inv()?.pow(3);
    let words: Vec<Word> = enumerate_ball(3).collect();
    let mats = r.evaluate_many(&words);
    let l = r.evaluate(longitude);
    let shift = Matrix::identity(4).scale(&lambda_inv3);
    let e = l.sub(&shift).nullspace();
    let et = l.transpose().sub(&shift).nullspace();
    if e.len() != 1 || et.len() != 1 {
        return None;
    }
    let transposed: Vec<Matrix<Rational>> = mats.iter().map(Matrix::transpose).collect();
    Some((orbit_dimension(&mats, &e[0]), orbit_dimension(&transposed, &et[0])))
}

/// Eigenvalue multiset closed under `λ ↦ 1/λ`: the polynomial equals its
/// reciprocal up to the constant term.
pub fn closed_under_inversion<K: Field>(p: &Poly<K>) -> bool {
    let c0 = p.coeff(0);
    if c0.is_zero() {
        return false;
    }
    p.reversed().scale(&c0.inv().unwrap()) == p.monic()
}

/// True when the longitude spectrum `{v, v, v, v⁻³}` at `v = 2·t0` is not
/// closed under inversion.
pub fn inverse_eigenvalue_check(t0: &Rational, longitude: &Word) -> bool {
    let r = rep::phi().specialize("phi_t0", t0, &t0.inv().unwrap(), |c| c.clone());
    let cp = CharPoly::of(&r.evaluate(longitude));
    !closed_under_inversion(&Poly::new(cp.coeffs().to_vec()))
}

/// [`inverse_eigenvalue_check`] at an irrational `t0 ∈ Q(√d)`.
pub fn inverse_eigenvalue_check_quadratic(t0: &QuadElem, longitude: &Word) -> bool {
    let r = rep::phi().specialize("phi_t0", t0, &t0.inv().unwrap(), |c| QuadElem::rational(c.clone()));
    let cp = CharPoly::of(&r.evaluate(longitude));
    !closed_under_inversion(&Poly::new(cp.coeffs().to_vec()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Proximality {
    PositiveProximal,
    Proximal,
    NotProximal,
    Indeterminate,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralReport {
    pub word: Word,
    pub t: String,
    /// Eigenvalue moduli, descending, one entry per root with multiplicity.
    pub moduli: Vec<f64>,
    /// Enclosure radius for each modulus.
    pub errors: Vec<f64>,
    pub verdict: Proximality,
    pub reason: String,
}

impl SpectralReport {
    pub fn proximal(&self) -> bool {
        matches!(self.verdict, Proximality::Proximal | Proximality::PositiveProximal)
    }
}

/// Classifies one matrix from its exact characteristic polynomial.
pub fn spectral_report(word: &Word, t0: &Rational, m: &Matrix<Rational>) -> SpectralReport {
    let cp = Poly::new(CharPoly::of(m).coeffs().to_vec());
    let mut roots = enclose_roots(&cp);
    roots.sort_by(|a, b| b.center.norm().total_cmp(&a.center.norm()));
    let mut moduli = Vec::new();
    let mut errors = Vec::new();
    for r in &roots {
        for _ in 0..r.multiplicity {
            moduli.push(r.center.norm());
            errors.push(r.radius);
        }
    }
    let (verdict, reason) = classify(&roots);
    SpectralReport { word: word.clone(), t: t0.to_string(), moduli, errors, verdict, reason }
}

fn classify(roots: &[RootEnclosure]) -> (Proximality, String) {
    // roots that may attain the largest modulus
    let floor = roots.iter().map(|r| r.modulus_bounds().0).fold(0.0f64, f64::max);
    let top: Vec<&RootEnclosure> = roots.iter().filter(|r| r.modulus_bounds().1 >= floor).collect();
    match top.as_slice() {
        [r] if r.multiplicity > 1 => (Proximality::NotProximal, "largest eigenvalue is repeated".into()),
        [r] if r.center.re - r.radius > 0.0 => {
            (Proximality::PositiveProximal, "unique positive eigenvalue of largest modulus".into())
        }
        [r] if r.center.re + r.radius < 0.0 => {
            (Proximality::Proximal, "unique negative eigenvalue of largest modulus".into())
        }
        [a, b]
            if a.is_nonreal()
                && b.is_nonreal()
                && (a.center - b.center.conj()).norm() <= a.radius + b.radius =>
        {
            (Proximality::NotProximal, "largest eigenvalues are a complex pair".into())
        }
        _ => (Proximality::Indeterminate, "modulus gap below the enclosure width".into()),
    }
}

/// Spectral reports of `φ_{t0}(w)` over a corpus.
pub fn proximality_scan(t0: &Rational, corpus: &[Word]) -> Vec<SpectralReport> {
    let r: Rep<Rational> = rep::phi().specialize("phi_t0", t0, &t0.inv().unwrap(), |c| c.clone());
    corpus.iter().zip(r.evaluate_many(corpus)).map(|(w, m)| spectral_report(w, t0, &m)).collect()
}
