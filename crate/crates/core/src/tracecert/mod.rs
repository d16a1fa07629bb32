//! Trace integrality from two bases of `M_4`.
//!
//! For a basis `g_1 = I, g_2, …, g_16` of group elements with trace dual
//! `g_j*`, left multiplication gives a 16-dimensional representation
//! `α_ij(γ) = tr(g_j·γ·g_i*)` whose first column recovers traces:
//! `tr γ = Σ_j tr(g_j)·α_j1(γ)`. Entries of `α` for the generators have
//! denominators dividing the Gram determinant, so every trace has
//! denominators in that set. Two bases with disjoint denominator sets
//! (apart from `v`) force traces into `Z[v, 1/v]`.
//!
//! All computations run on `φ_{v/2}`, which has rational coefficients and
//! the same traces as `ρ_v`.

mod report;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matrix::{bareiss_solve_integral, Matrix};
use crate::modp::{Fp, RankAccumulator};
use crate::rep::{LMat, Rep};
use crate::ring::{Field, Laurent, Poly, Rational, Ring, ZPoly};
use crate::words::{enumerate_ball, Letter, Word};

pub use report::{
    certify, certify_traces, check_corpus, denominator_report, Certificate, CertifyOptions, CorpusCheck,
    DenominatorReport, Verdict,
};

/// Words for the candidate pool come from this ball.
pub const POOL_RADIUS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("no 16 independent images in the radius-{0} ball")]
    BallExhausted(usize),
    #[error("Gram matrix is singular")]
    SingularGram,
    #[error("duality check failed")]
    Duality,
    #[error("bases must come from different seeds")]
    SameSeed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Shortlex,
    Randomized,
}

/// Sixteen words whose images span `M_4` over `Q(v)`, with `g_1 = I`.
#[derive(Clone, Debug)]
pub struct Basis16 {
    pub strategy: Strategy,
    pub seed: u64,
    pub words: Vec<Word>,
    pub matrices: Vec<LMat<Rational>>,
    /// `T_ij = tr(g_i·g_j)`.
    pub gram: Matrix<Laurent<Rational>>,
}

/// Greedy selection of independent images, screened modulo `p`.
///
/// Independence at one point mod `p` implies independence over `Q(v)`, so
/// the selection never needs revisiting; the exact Gram determinant is
/// still computed as the certificate.
pub fn find_basis(
    rep: &Rep<Laurent<Rational>>,
    strategy: Strategy,
    seed: u64,
) -> Result<Basis16, TraceError> {
    let mut pool: Vec<Word> = enumerate_ball(POOL_RADIUS).skip(1).collect();
    if strategy == Strategy::Randomized {
        pool.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    // a fixed evaluation point derived from the seed
    let v0 = Fp::from_int(1_000_003 + 2 * seed as i64);
    let at = rep.specialize("screen", &v0, &v0.inv().unwrap(), Fp::from_rational);
    let mut acc = RankAccumulator::new();
    let mut words = vec![Word::identity()];
    acc.insert(Matrix::<Fp>::identity(4).entries().to_vec());
    for w in pool {
        if acc.insert(at.evaluate(&w).entries().to_vec()) {
            words.push(w);
            if words.len() == 16 {
                break;
            }
        }
    }
    if words.len() < 16 {
        return Err(TraceError::BallExhausted(POOL_RADIUS));
    }
    let matrices = rep.evaluate_many(&words);
    let n = 16;
    let entries: Vec<Laurent<Rational>> =
        (0..n * n).into_par_iter().map(|k| matrices[k / n].trace_of_product(&matrices[k % n])).collect();
    let gram = Matrix::from_vec(n, n, entries);
    Ok(Basis16 { strategy, seed, words, matrices, gram })
}

/// Splits Laurent rows of `[A | B]` into integer polynomial rows by a common
/// monomial and rational factor per row, which leaves the solution of `A X = B` unchanged.
fn shift_rows(
    a: &Matrix<Laurent<Rational>>,
    b: &Matrix<Laurent<Rational>>,
) -> (Matrix<Poly<Rational>>, Matrix<Poly<Rational>>) {
    let n = a.rows();
    let mut ra = Vec::with_capacity(n);
    let mut rb = Vec::with_capacity(n);
    for i in 0..n {
        let lo = a.row(i).iter().chain(b.row(i)).filter_map(|e| e.min_exp()).min().unwrap_or(0);
        // integer coefficients keep the rational arithmetic in Bareiss cheap
        let lcm = a
            .row(i)
            .iter()
            .chain(b.row(i))
            .flat_map(|e| e.terms().map(|(_, c)| c.denom().clone()))
            .fold(BigInt::from(1), |acc, d| acc.lcm(&d));
        let c = Rational::from_integer(lcm);
        let conv = |e: &Laurent<Rational>| e.times_var_pow(-lo).as_poly().unwrap().scale(&c);
        ra.push(a.row(i).iter().map(conv).collect());
        rb.push(b.row(i).iter().map(conv).collect());
    }
    (Matrix::from_rows(ra), Matrix::from_rows(rb))
}

/// `T⁻¹ = N / D`, stored fraction-free: `g_j* = (1/D)·Σ_k N_jk·g_k`.
#[derive(Clone, Debug)]
pub struct DualBasis {
    pub denominator: Poly<Rational>,
    pub numerators: Matrix<Poly<Rational>>,
}

impl DualBasis {
    /// `D·g_j*`.
    pub fn scaled_dual(&self, basis: &Basis16, j: usize) -> LMat<Rational> {
        (0..16).fold(Matrix::zeros(4, 4), |acc, k| {
            let c = Laurent::from_poly(self.numerators.get(j, k));
            acc.add(&basis.matrices[k].scale(&c))
        })
    }

    pub fn denominator_laurent(&self) -> Laurent<Rational> {
        Laurent::from_poly(&self.denominator)
    }

    fn numerators_laurent(&self) -> Matrix<Laurent<Rational>> {
        self.numerators.map(Laurent::from_poly)
    }
}

/// Inverts the Gram matrix fraction-free and checks `tr(g_i·g_j*) = δ_ij`.
pub fn dual_basis(b: &Basis16) -> Result<DualBasis, TraceError> {
    let n = 16;
    let id = Matrix::<Laurent<Rational>>::identity(n);
    let (a, rhs) = shift_rows(&b.gram, &id);
    let (d, nmat) = bareiss_solve_integral(&a, &rhs).ok_or(TraceError::SingularGram)?;
    if d.is_zero() {
        return Err(TraceError::SingularGram);
    }
    let dual = DualBasis { denominator: d, numerators: nmat };
    // T·Nᵀ = D·I is the trace pairing of g_i against D·g_j*
    let lhs = b.gram.mul(&dual.numerators_laurent().transpose());
    if lhs != id.scale(&dual.denominator_laurent()) {
        return Err(TraceError::Duality);
    }
    Ok(dual)
}

/// Numerators of the regular representation: `α(γ) = A(γ)/D`.
#[derive(Clone, Debug)]
pub struct RegularRep {
    pub word: Word,
    pub numerators: Matrix<Laurent<Rational>>,
}

/// `α_ij(γ) = tr(g_j·γ·g_i*)`, as `A(γ) = N·Sᵀ` with `S_jk = tr(g_j·γ·g_k)`.
pub fn regular_rep(rep: &Rep<Laurent<Rational>>, b: &Basis16, d: &DualBasis, gamma: &Word) -> RegularRep {
    let g = rep.evaluate(gamma);
    let left: Vec<LMat<Rational>> = b.matrices.iter().map(|m| m.mul(&g)).collect();
    let n = 16;
    let s: Vec<Laurent<Rational>> =
        (0..n * n).into_par_iter().map(|k| left[k / n].trace_of_product(&b.matrices[k % n])).collect();
    // S = v^lo·S'/c with S' integral, so A = v^lo·(N·S'ᵀ)/c
    let lo = s.iter().filter_map(|e| e.min_exp()).min().unwrap_or(0);
    let c = s
        .iter()
        .flat_map(|e| e.terms().map(|(_, q)| q.denom().clone()))
        .fold(BigInt::from(1), |acc, q| acc.lcm(&q));
    let cq = Rational::from_integer(c);
    let zs: Vec<ZPoly> = s
        .iter()
        .map(|e| ZPoly::from_poly(&e.times_var_pow(-lo).as_poly().unwrap().scale(&cq)).unwrap())
        .collect();
    let zn: Vec<ZPoly> =
        d.numerators.entries().iter().map(|p| ZPoly::from_poly(p).expect("integral dual")).collect();
    let c_inv = cq.inv().unwrap();
    let entries: Vec<Laurent<Rational>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let acc = (0..n).fold(ZPoly::zero(), |acc, m| {
                let (a, b) = (&zn[i * n + m], &zs[j * n + m]);
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    acc.add(&a.mul(b))
                }
            });
            Laurent::from_poly(&acc.to_poly()).times_var_pow(lo).scale(&c_inv)
        })
        .collect();
    RegularRep { word: gamma.clone(), numerators: Matrix::from_vec(n, n, entries) }
}

/// The four generator letters, whose regular representations bound all
/// denominators.
pub fn generator_words() -> Vec<Word> {
    Letter::ALL.iter().map(|&l| Word::letter(l)).collect()
}
