use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::modp::{Fp, RankAccumulator};
use crate::rep::{self, Rep};
use crate::ring::{Field, QuadElem, Rational, Ring};
use crate::words::{enumerate_ball, Word};

/// Dimension of `sl₄`.
pub const SL4_DIM: usize = 15;
/// Dimension of `End(sl₄)`.
pub const FULL_SPAN: usize = SL4_DIM * SL4_DIM;

/// Off-diagonal `E_ij` in row-major order, then `E_ii − E_{i+1,i+1}`.
pub fn sl4_basis<T: Ring>() -> Vec<Matrix<T>> {
    let mut out = Vec::with_capacity(SL4_DIM);
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                let mut m = Matrix::zeros(4, 4);
                m.set(i, j, T::one());
                out.push(m);
            }
        }
    }
    for i in 0..3 {
        let mut m = Matrix::zeros(4, 4);
        m.set(i, i, T::one());
        m.set(i + 1, i + 1, T::one().neg());
        out.push(m);
    }
    out
}

/// Coordinates of a trace-zero matrix in [`sl4_basis`].
pub fn sl4_coords<T: Ring>(x: &Matrix<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(SL4_DIM);
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                out.push(x.get(i, j).clone());
            }
        }
    }
    // X = Σ c_i (E_ii − E_{i+1,i+1}) gives c_k = X_11 + … + X_kk
    let mut acc = T::zero();
    for i in 0..3 {
        acc = acc.add(x.get(i, i));
        out.push(acc.clone());
    }
    out
}

/// `Ad(g)`: the matrix of `X ↦ g·X·g⁻¹` on `sl₄`, column `k` the image of
/// the `k`-th basis element. Requires `det g = 1`.
pub fn adjoint<T: Ring>(g: &Matrix<T>) -> Matrix<T> {
    let gi = g.adjugate();
    let cols: Vec<Vec<T>> = sl4_basis().iter().map(|b| sl4_coords(&g.mul(b).mul(&gi))).collect();
    Matrix::from_rows(cols).transpose()
}

/// `K_kl = tr(B_k·B_l)` on the basis.
pub fn killing_gram<T: Ring>() -> Matrix<T> {
    let b = sl4_basis::<T>();
    let rows = b.iter().map(|x| b.iter().map(|y| x.trace_of_product(y)).collect()).collect();
    Matrix::from_rows(rows)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdjointSpan {
    pub t: String,
    pub radius: usize,
    pub dimension: usize,
    /// Words whose operators raised the rank, in order.
    pub witnesses: Vec<Word>,
    /// How the rank was obtained: `"mod-p"` (a lower bound that reached the
    /// maximum) or `"exact"`.
    pub method: String,
}

impl AdjointSpan {
    pub fn is_full(&self) -> bool {
        self.dimension == FULL_SPAN
    }
}

/// Incremental rank over `Q` on primitive integer rows.
struct ExactRank {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl ExactRank {
    fn insert(&mut self, v: &[Rational]) -> bool {
        let lcm = v.iter().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
        let mut v: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
        for (pivot, row) in &self.rows {
            let c = v[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            let p = &row[*pivot];
            for (a, b) in v.iter_mut().zip(row) {
                *a = &*a * p - &c * b;
            }
            make_primitive(&mut v);
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

fn flatten<T: Ring>(m: &Matrix<T>) -> Vec<T> {
    m.entries().to_vec()
}

/// Span of `{Ad φ_{t0}(w) : |w| ≤ radius}` in `End(sl₄)`.
///
/// The rank is first accumulated modulo `p`; reaching 225 there certifies
/// 225 over `Q`. Otherwise the exact rank is computed over `Q`.
pub fn adjoint_span_dimension(t0: &Rational, radius: usize) -> AdjointSpan {
    let words: Vec<Word> = enumerate_ball(radius).collect();
    let exact_rep = rep::phi().specialize("phi_t0", t0, &t0.inv().unwrap(), |c| c.clone());
    let modp = Fp::from_rational_checked(t0).and_then(|t| Some((t, t.inv()?)));
    if let Some((t, ti)) = modp {
        let rp = rep::phi().specialize("phi_t0_mod_p", &t, &ti, Fp::from_rational);
        let (dimension, witnesses) = accumulate_modp(&rp, &words);
        if dimension == FULL_SPAN {
            return AdjointSpan { t: t0.to_string(), radius, dimension, witnesses, method: "mod-p".into() };
        }
    }
    let (dimension, witnesses) = accumulate_exact(&exact_rep, &words);
    AdjointSpan { t: t0.to_string(), radius, dimension, witnesses, method: "exact".into() }
}

fn accumulate_modp(rep: &Rep<Fp>, words: &[Word]) -> (usize, Vec<Word>) {
    let mut acc = RankAccumulator::new();
    let mut witnesses = Vec::new();
    for chunk in words.chunks(256) {
        let ads: Vec<Vec<Fp>> = rep.evaluate_many(chunk).par_iter().map(|g| flatten(&adjoint(g))).collect();
        for (w, a) in chunk.iter().zip(ads) {
            if acc.insert(a) {
                witnesses.push(w.clone());
                if acc.rank() == FULL_SPAN {
                    return (FULL_SPAN, witnesses);
                }
            }
        }
    }
    (acc.rank(), witnesses)
}

fn accumulate_exact(rep: &Rep<Rational>, words: &[Word]) -> (usize, Vec<Word>) {
    let mut acc = ExactRank { rows: Vec::new() };
    let mut witnesses = Vec::new();
    for chunk in words.chunks(256) {
        let ads: Vec<Vec<Rational>> =
            rep.evaluate_many(chunk).par_iter().map(|g| flatten(&adjoint(g))).collect();
        for (w, a) in chunk.iter().zip(ads) {
            if acc.insert(&a) {
                witnesses.push(w.clone());
                if acc.rows.len() == FULL_SPAN {
                    return (FULL_SPAN, witnesses);
                }
            }
        }
    }
    (acc.rows.len(), witnesses)
}

/// Rank over `Q(t)`, bounded below by the rank at a random point modulo
/// `p`. A value of 225 certifies the generic rank, hence density for all
/// but finitely many `t`.
pub fn adjoint_span_generic(radius: usize, seed: u64) -> AdjointSpan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = loop {
        let t = Fp::new(rng.gen::<u64>());
        if !t.is_zero() {
            break t;
        }
    };
    let rp = rep::phi().specialize("phi_generic", &t, &t.inv().unwrap(), Fp::from_rational);
    let words: Vec<Word> = enumerate_ball(radius).collect();
    let (dimension, witnesses) = accumulate_modp(&rp, &words);
    AdjointSpan { t: "generic".into(), radius, dimension, witnesses, method: "mod-p lower bound".into() }
}

/// Span of `{Ad φ_{t0}(w) : |w| ≤ radius}` over `Q(√d)` for an irrational
/// `t0`.
///
/// Each operator `A = P + √d·R` contributes the rational vectors `(P, R)`
/// and `(dR, P)`, the coordinates of `A` and `√d·A`. Their rational span has
/// dimension twice the `Q(√d)`-span, and its rank modulo `p` is a lower
/// bound, so 450 modulo `p` certifies 225.
pub fn adjoint_span_quadratic(t0: &QuadElem, radius: usize) -> AdjointSpan {
    let words: Vec<Word> = enumerate_ball(radius).collect();
    let ti = t0.inv().expect("nonzero parameter");
    let r = rep::phi().specialize("phi_t0", t0, &ti, |c| QuadElem::rational(c.clone()));
    let d = Rational::from_integer(t0.m().into());
    let fp = |q: &Rational| Fp::from_rational_checked(q).expect("denominator invertible mod p");
    let mut acc = RankAccumulator::new();
    let mut witnesses = Vec::new();
    let full = 2 * FULL_SPAN;
    'outer: for chunk in words.chunks(256) {
        let rows: Vec<[Vec<Fp>; 2]> = r
            .evaluate_many(chunk)
            .par_iter()
            .map(|g| {
                let a = flatten(&adjoint(g));
                let p: Vec<Fp> = a.iter().map(|e| fp(e.a())).collect();
                let q: Vec<Fp> = a.iter().map(|e| fp(e.b())).collect();
                let dq: Vec<Fp> = a.iter().map(|e| fp(&(&d * e.b()))).collect();
                [[p.clone(), q].concat(), [dq, p].concat()]
            })
            .collect();
        for (w, pair) in chunk.iter().zip(rows) {
            let mut raised = false;
            for row in pair {
                raised |= acc.insert(row);
            }
            if raised {
                witnesses.push(w.clone());
            }
            if acc.rank() == full {
                break 'outer;
            }
        }
    }
    AdjointSpan {
        t: t0.to_string(),
        radius,
        dimension: acc.rank() / 2,
        witnesses,
        method: "mod-p on rational coordinates".into(),
    }
}
