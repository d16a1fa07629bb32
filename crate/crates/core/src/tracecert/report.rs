use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rep::Rep;
use crate::ring::{squarefree_factor, Laurent, Poly, Rational, Ring};
use crate::words::{enumerate_ball, Word};

use super::{generator_words, regular_rep, Basis16, DualBasis, Strategy};

/// Monic squarefree denominator factors of one basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DenominatorReport {
    pub strategy: Strategy,
    pub seed: u64,
    pub basis: Vec<Word>,
    /// Degree of the Gram determinant after clearing powers of `v`.
    pub gram_det_degree: usize,
    /// Whether `v` divides some denominator.
    pub has_v: bool,
    /// The non-`v` factors, each squarefree, rendered in `v`.
    pub factors: Vec<String>,
    /// Product of the non-`v` factors.
    pub radical: Poly<Rational>,
}

impl DenominatorReport {
    /// All factors including `v`, as strings.
    pub fn all_factors(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.has_v {
            out.push("v".to_string());
        }
        out.extend(self.factors.iter().cloned());
        out
    }
}

/// Collects the denominators of `α(γ)` for `γ ∈ {x, X, y, Y}`.
///
/// With `α = A/D` and `D = v^a·D₀`, the non-`v` part of the lcm of reduced
/// denominators is `D₀ / gcd(D₀, all numerators)`.
pub fn denominator_report(
    rep: &Rep<Laurent<Rational>>,
    basis: &Basis16,
    dual: &DualBasis,
) -> DenominatorReport {
    let d = &dual.denominator;
    let a = d.valuation().unwrap();
    let d0 = d.unshift(a).monic();
    let mut g = d0.clone();
    let mut has_v = false;
    for gamma in generator_words() {
        let alpha = regular_rep(rep, basis, dual, &gamma);
        for e in alpha.numerators.entries() {
            if e.is_zero() {
                continue;
            }
            let (s, p) = e.to_poly_parts();
            if s < a as i64 {
                has_v = true;
            }
            // divisibility is far cheaper than a gcd and usually holds
            if g.degree() != Some(0) && !g.divides(&p) {
                g = g.gcd(&p);
            }
        }
    }
    let radical_full = d0.exact_div(&g).unwrap();
    let factors = squarefree_factor(&radical_full);
    let radical = factors.iter().fold(Poly::one(), |acc, (f, _)| acc.mul(f));
    DenominatorReport {
        strategy: basis.strategy,
        seed: basis.seed,
        basis: basis.words.clone(),
        gram_det_degree: d0.degree().unwrap_or(0),
        has_v,
        factors: factors.iter().map(|(f, _)| f.display_var("v")).collect(),
        radical,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// Direct traces of a ball, checked for integer Laurent coefficients and
/// against the reconstruction `tr γ = Σ_j tr(g_j)·α_j1(γ)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusCheck {
    pub radius: usize,
    pub words: usize,
    pub non_integral: Vec<Word>,
    pub reconstruction_failures: Vec<Word>,
}

impl CorpusCheck {
    pub fn passed(&self) -> bool {
        self.non_integral.is_empty() && self.reconstruction_failures.is_empty()
    }
}

pub fn check_corpus(
    rep: &Rep<Laurent<Rational>>,
    basis: &Basis16,
    dual: &DualBasis,
    radius: usize,
) -> CorpusCheck {
    let words: Vec<Word> = enumerate_ball(radius).collect();
    let mats = rep.evaluate_many(&words);
    // Σ_j tr(g_j)·D·g_j* = D·I collapses the identity to one weight per g_k
    let weights: Vec<Laurent<Rational>> = (0..16)
        .map(|k| {
            (0..16).fold(Laurent::zero(), |acc, j| {
                let tau = basis.gram.get(0, j);
                acc.add(&tau.mul(&Laurent::from_poly(dual.numerators.get(j, k))))
            })
        })
        .collect();
    let dl = dual.denominator_laurent();
    let results: Vec<(bool, bool)> = mats
        .par_iter()
        .map(|m| {
            let tr = m.trace();
            let integral = tr.has_integer_coeffs();
            let rebuilt = (0..16).fold(Laurent::zero(), |acc, k| {
                acc.add(&weights[k].mul(&m.trace_of_product(&basis.matrices[k])))
            });
            (integral, rebuilt == dl.mul(&tr))
        })
        .collect();
    let mut non_integral = Vec::new();
    let mut reconstruction_failures = Vec::new();
    for (w, (int_ok, rec_ok)) in words.iter().zip(results) {
        if !int_ok {
            non_integral.push(w.clone());
        }
        if !rec_ok {
            reconstruction_failures.push(w.clone());
        }
    }
    CorpusCheck { radius, words: words.len(), non_integral, reconstruction_failures }
}

/// The two-basis conclusion: traces lie in `Z[v, 1/v]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub basis_a: DenominatorReport,
    pub basis_b: DenominatorReport,
    /// Common non-`v` factor of the two reports (`"1"` when disjoint).
    pub intersection: String,
    pub corpus: Option<CorpusCheck>,
    pub verdict: Verdict,
}

/// Passes when the non-`v` factor sets are coprime (and the corpus check,
/// when present, passes).
pub fn certify_traces(
    a: DenominatorReport,
    b: DenominatorReport,
    corpus: Option<CorpusCheck>,
) -> Certificate {
    let common = a.radical.gcd(&b.radical);
    let disjoint = common.degree() == Some(0);
    let corpus_ok = corpus.as_ref().is_none_or(|c| c.passed());
    Certificate {
        intersection: common.display_var("v"),
        verdict: Verdict::from_bool(disjoint && corpus_ok),
        basis_a: a,
        basis_b: b,
        corpus,
    }
}

/// Seeds and bounds for [`certify`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CertifyOptions {
    /// `0` selects the shortlex basis; anything else a randomized one.
    pub seed_a: u64,
    /// Seed of the randomized second basis; bumped on each redraw.
    pub seed_b: u64,
    pub max_redraws: u64,
    pub corpus_radius: Option<usize>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { seed_a: 0, seed_b: 1, max_redraws: 16, corpus_radius: Some(6) }
    }
}

/// Builds both reports, redrawing basis B until the non-`v` factor sets are
/// disjoint, and cross-checks the corpus against basis A.
pub fn certify(
    rep: &Rep<Laurent<Rational>>,
    opts: &CertifyOptions,
) -> Result<Certificate, super::TraceError> {
    use super::{dual_basis, find_basis, TraceError};
    if opts.seed_a == opts.seed_b {
        return Err(TraceError::SameSeed);
    }
    let strategy_a = if opts.seed_a == 0 { Strategy::Shortlex } else { Strategy::Randomized };
    let basis_a = find_basis(rep, strategy_a, opts.seed_a)?;
    let dual_a = dual_basis(&basis_a)?;
    let report_a = denominator_report(rep, &basis_a, &dual_a);
    let corpus = opts.corpus_radius.map(|r| check_corpus(rep, &basis_a, &dual_a, r));
    let mut seed = opts.seed_b;
    let mut last = None;
    for _ in 0..=opts.max_redraws {
        if seed == opts.seed_a {
            seed += 1;
        }
        let basis_b = find_basis(rep, Strategy::Randomized, seed)?;
        let dual_b = dual_basis(&basis_b)?;
        let report_b = denominator_report(rep, &basis_b, &dual_b);
        let cert = certify_traces(report_a.clone(), report_b, corpus.clone());
        if cert.intersection == "1" {
            return Ok(cert);
        }
        log::info!("basis B seed {seed} shares {}; redrawing", cert.intersection);
        last = Some(cert);
        seed += 1;
    }
    Ok(last.expect("at least one draw"))
}
