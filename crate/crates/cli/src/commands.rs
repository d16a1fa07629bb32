//! One function per subcommand; each returns a sealed certificate.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::Sign;
use serde_json::{json, Value};
use thinlat::density::{self, Proximality};
use thinlat::form::{self, FormError};
use thinlat::matrix::Matrix;
use thinlat::numfield::{self, QuadraticField};
use thinlat::rep::{self, CharPoly, Rep};
use thinlat::ring::{Laurent, QuadElem, Rational, Ring};
use thinlat::tracecert::{self, CertifyOptions, DenominatorReport, TraceError, Verdict};
use thinlat::words::{enumerate_ball, Word, WordCatalog};

use crate::artifact::{Certificate, Check, Store};
use crate::{CliError, Common, Family};

/// Shared representations, with their memos warmed from `THINLAT_CACHE`.
pub struct Context {
    cache: Option<PathBuf>,
    phi_v: Rep<Laurent<Rational>>,
    rho: Rep<Laurent<QuadElem>>,
}

impl Context {
    pub fn new(common: &Common) -> Self {
        let ctx = Context { cache: common.cache.clone(), phi_v: rep::phi_v(), rho: rep::rho() };
        if let Some(dir) = &ctx.cache {
            for r in [ctx.phi_v.load_cache(dir), ctx.rho.load_cache(dir)] {
                match r {
                    Ok(n) => log::info!("cache: {n} words loaded"),
                    Err(e) => log::warn!("cache not loaded: {e}"),
                }
            }
        }
        ctx
    }

    pub fn save_cache(&self) {
        if let Some(dir) = &self.cache {
            if let Err(e) = self.phi_v.save_cache(dir).and_then(|_| self.rho.save_cache(dir)) {
                log::warn!("cache not saved: {e}");
            }
        }
    }
}

fn strings<T: Ring + Display>(m: &Matrix<T>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(ToString::to_string).collect()).collect()
}

fn words(ws: &[Word]) -> Vec<String> {
    ws.iter().map(ToString::to_string).collect()
}

fn elapsed(t: Instant) -> u128 {
    t.elapsed().as_millis()
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Input(format!("`{s}` is not a nonzero rational p/q"));
    let q = Rational::from_str(s.trim()).map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(q)
}

fn longitude_from(verify: &Certificate) -> Result<Word, CliError> {
    verify.body.witnesses["longitude"]
        .as_str()
        .and_then(|s| Word::parse(s).ok())
        .ok_or_else(|| CliError::Gate("verify certificate has no longitude".into()))
}

fn lift(c: &Rational) -> QuadElem {
    QuadElem::rational(c.clone())
}

pub fn verify(ctx: &Context, family: Family, radius: usize) -> Result<Certificate, CliError> {
    let start = Instant::now();
    let inputs = json!({ "family": format!("{family:?}").to_lowercase(), "radius": radius });
    let Some((cat, rel, lon)) = WordCatalog::discover() else {
        let checks = vec![Check::new("relator", false, "no relator of length <= 12")];
        return Ok(Certificate::seal("verify", inputs, BTreeMap::new(), checks, json!({}), elapsed(start)));
    };
    let phi = rep::phi();
    let mut checks = Vec::new();

    let r = &cat.relator;
    let exact = ctx.rho.evaluate(r).is_identity() && phi.evaluate(r).is_identity();
    checks.push(Check::new(
        "relator",
        exact && r.len() <= 12,
        format!("{r} (length {}) is the identity under both families", r.len()),
    ));
    checks.push(Check::new(
        "relator-candidate",
        rel.candidate_verified,
        format!("{} verified exactly", rel.candidate),
    ));

    let l = &cat.longitude;
    let commutes = rep::peripheral_commutes(l) && rep::commutes(&ctx.rho, &Word::x(), l);
    checks.push(Check::new("longitude-commutes", commutes, format!("{l} commutes with x")));
    let cp_rho = CharPoly::of(&ctx.rho.evaluate(l));
    let cp_phi = CharPoly::of(&ctx.phi_v.evaluate(l));
    let spectrum =
        cp_rho == rep::longitude_charpoly::<QuadElem>() && cp_phi == rep::longitude_charpoly::<Rational>();
    checks.push(Check::new("longitude-spectrum", spectrum, "char poly (Q - v)^3 (Q - v^-3)"));

    let corpus: Vec<Word> = enumerate_ball(radius).collect();
    let rho_mats = ctx.rho.evaluate_many(&corpus);
    let phi_mats = ctx.phi_v.evaluate_many(&corpus);
    let dets = rho_mats.iter().all(|m| m.det().is_one()) && phi_mats.iter().all(|m| m.det().is_one());
    checks.push(Check::new("determinants", dets, format!("det = 1 on {} words", corpus.len())));

    let (intertwiner_ok, intertwiner_det) = match rep::find_intertwiner() {
        Ok(c) => (c.nullity == 1 && !c.det.is_zero(), c.det.display_var("t")),
        Err(e) => (false, e.to_string()),
    };
    checks.push(Check::new("intertwiner", intertwiner_ok, "1-dimensional, invertible over Q(sqrt 3)(t)"));

    let rho_traces: Vec<Laurent<QuadElem>> = rho_mats.iter().map(Matrix::trace).collect();
    let phi_traces: Vec<Laurent<QuadElem>> = phi_mats.iter().map(|m| m.trace().map(lift)).collect();
    let agree = rho_traces == phi_traces;
    checks.push(Check::new(
        "trace-agreement",
        agree,
        format!("tr rho_v(w) = tr phi_(v/2)(w) on {} words", corpus.len()),
    ));

    let table = |traces: &[Laurent<QuadElem>]| -> Vec<[String; 2]> {
        corpus.iter().zip(traces).map(|(w, t)| [w.to_string(), t.display_var("v")]).collect()
    };
    let mut tables = serde_json::Map::new();
    if family != Family::Phi {
        tables.insert("rho".into(), json!(table(&rho_traces)));
    }
    if family != Family::Rho {
        tables.insert("phi".into(), json!(table(&phi_traces)));
    }
    let witnesses = json!({
        "relator": cat.relator.to_string(),
        "relator_candidate": rel.candidate.to_string(),
        "relator_screened": rel.screened,
        "longitude": cat.longitude.to_string(),
        "longitude_alternates": words(&lon.alternates),
        "longitude_charpoly": cp_phi.display_var("v"),
        "intertwiner_det": intertwiner_det,
        "trace_tables": tables,
    });
    Ok(Certificate::seal("verify", inputs, BTreeMap::new(), checks, witnesses, elapsed(start)))
}

fn basis_json(r: &DenominatorReport) -> Value {
    json!({
        "strategy": r.strategy,
        "seed": r.seed,
        "words": words(&r.basis),
        "gram_det_degree": r.gram_det_degree,
        "factors": r.all_factors(),
    })
}

pub fn trace_cert(
    ctx: &Context,
    store: &Store,
    seed_a: u64,
    seed_b: u64,
    radius: usize,
) -> Result<Certificate, CliError> {
    let start = Instant::now();
    if seed_a == seed_b {
        return Err(CliError::Input("--seed-a and --seed-b must differ".into()));
    }
    let (_, verify_hash) = store.require("verify")?;
    let upstream = BTreeMap::from([("verify".to_string(), verify_hash)]);
    let inputs = json!({ "seed_a": seed_a, "seed_b": seed_b, "radius": radius });
    let opts = CertifyOptions { seed_a, seed_b, corpus_radius: Some(radius), ..Default::default() };
    let cert = match tracecert::certify(&ctx.phi_v, &opts) {
        Ok(c) => c,
        Err(TraceError::SameSeed) => return Err(CliError::Input(TraceError::SameSeed.to_string())),
        Err(e) => {
            let checks = vec![Check::new("bases", false, e.to_string())];
            return Ok(Certificate::seal("trace-cert", inputs, upstream, checks, json!({}), elapsed(start)));
        }
    };
    let corpus = cert.corpus.as_ref().expect("corpus requested");
    let checks = vec![
        Check::new(
            "factor-intersection",
            cert.intersection == "1",
            format!("common non-v factor: {}", cert.intersection),
        ),
        Check::new(
            "corpus",
            corpus.passed(),
            format!(
                "{} words of length <= {radius}: {} non-integral, {} reconstruction failures",
                corpus.words,
                corpus.non_integral.len(),
                corpus.reconstruction_failures.len()
            ),
        ),
    ];
    let witnesses = json!({
        "basis_a": basis_json(&cert.basis_a),
        "basis_b": basis_json(&cert.basis_b),
        "intersection": cert.intersection,
        "corpus": {
            "radius": corpus.radius,
            "words": corpus.words,
            "non_integral": words(&corpus.non_integral),
            "reconstruction_failures": words(&corpus.reconstruction_failures),
        },
    });
    Ok(Certificate::seal("trace-cert", inputs, upstream, checks, witnesses, elapsed(start)))
}

fn form_error_cert(
    command: &str,
    inputs: Value,
    upstream: BTreeMap<String, String>,
    e: FormError,
    start: Instant,
) -> Certificate {
    let checks = vec![Check::new("solution-space", false, e.to_string())];
    Certificate::seal(command, inputs, upstream, checks, json!({}), elapsed(start))
}

pub fn form(ctx: &Context, store: &Store, radius: usize) -> Result<Certificate, CliError> {
    let start = Instant::now();
    let (_, verify_hash) = store.require("verify")?;
    let upstream = BTreeMap::from([("verify".to_string(), verify_hash)]);
    let inputs = json!({ "radius": radius });
    let f = match form::solve_invariant_form() {
        Ok(f) => f,
        Err(e) => return Ok(form_error_cert("form", inputs, upstream, e, start)),
    };
    let det = f.q.det();
    let one = Rational::one();
    let q1 = f.q.eval_in(&one, &one, Rational::clone);
    let signature = form::sylvester_signature(&q1);
    let gens = form::verify_invariance(&f, &ctx.phi_v, &tracecert::generator_words());
    let corpus: Vec<Word> = enumerate_ball(radius).collect();
    let inv = form::verify_invariance(&f, &ctx.phi_v, &corpus);
    let checks = vec![
        Check::new("solution-space", f.nullity == 1, format!("dimension {}", f.nullity)),
        Check::new("nondegenerate", !det.is_zero(), format!("det Q = {}", det.display_var("v"))),
        Check::new("hermitian", f.q.laurent_star() == f.q, "Q* = Q"),
        Check::new("generators", gens.passed(), "A* Q A = Q for x, X, y, Y"),
        Check::new(
            "corpus-invariance",
            inv.passed(),
            format!("{} words of length <= {radius}, {} failures", inv.words, inv.failures.len()),
        ),
        Check::new("signature-at-1", signature == (3, 1), format!("signature of Q(1) is {signature:?}")),
    ];
    let witnesses = json!({
        "q": f.q.display_var("v"),
        "normalization": f.normalization,
        "det": det.display_var("v"),
        "signature_at_1": [signature.0, signature.1],
        "invariance_failures": words(&inv.failures),
    });
    Ok(Certificate::seal("form", inputs, upstream, checks, witnesses, elapsed(start)))
}

pub fn specialize(
    ctx: &Context,
    store: &Store,
    d: i64,
    k: u32,
    radius: usize,
) -> Result<Certificate, CliError> {
    let start = Instant::now();
    let field = QuadraticField::new(d).map_err(|e| CliError::Input(e.to_string()))?;
    let unit = numfield::positive_unit(d, k).map_err(|e| CliError::Input(e.to_string()))?;
    let (verify, verify_hash) = store.require("verify")?;
    let (_, trace_hash) = store.require("trace-cert")?;
    let (form_cert, form_hash) = store.require("form")?;
    let upstream = BTreeMap::from([
        ("verify".to_string(), verify_hash),
        ("trace-cert".to_string(), trace_hash),
        ("form".to_string(), form_hash),
    ]);
    let inputs = json!({ "d": d, "unit_power": k, "radius": radius });
    let longitude = longitude_from(&verify)?;
    let f = match form::solve_invariant_form() {
        Ok(f) => f,
        Err(e) => return Ok(form_error_cert("specialize", inputs, upstream, e, start)),
    };
    let u = unit.u.clone();
    let mut checks = Vec::new();
    checks.push(Check::new(
        "form-matches-upstream",
        form_cert.body.witnesses["q"] == json!(f.q.display_var("v")),
        "recomputed Q equals the form certificate",
    ));
    let unit_ok = u.mul(&u.tau()) == QuadElem::one() && u.sub(&QuadElem::one()).signum_real() > 0;
    checks.push(Check::new("unit", unit_ok, format!("u = {u}, u * tau(u) = 1, u > 1")));

    let qu = match form::hermitian_specialize(&f.q, &u) {
        Ok(qu) => qu,
        Err(e) => {
            checks.push(Check::new("hermitian", false, e.to_string()));
            return Ok(Certificate::seal("specialize", inputs, upstream, checks, json!({}), elapsed(start)));
        }
    };
    checks.push(Check::new("hermitian", true, "tau(Q(u))^T = Q(u)"));

    let corpus: Vec<Word> = enumerate_ball(radius).collect();
    let inv = form::verify_specialized_invariance(&qu, &u, &ctx.phi_v, &corpus);
    checks.push(Check::new(
        "corpus-invariance",
        inv.passed(),
        format!("{} words of length <= {radius}, {} failures", inv.words, inv.failures.len()),
    ));
    let integral = numfield::certify_integral_traces(d, &u, &corpus, &ctx.phi_v, Verdict::Pass)
        .map_err(|e| CliError::Input(e.to_string()))?;
    checks.push(Check::new(
        "integral-traces",
        integral.passed(),
        format!("{} traces in the ring of integers, {} failures", integral.words, integral.failures.len()),
    ));

    let diag = form::diagonalize(&qu, d);
    let diag_json = match &diag {
        Ok(g) => {
            let mi = g.m_integral();
            let congruent = form::tau_star(&mi).mul(&qu).mul(&mi)
                == Matrix::diagonal(
                    &g.j.iter().map(|b| lift(&Rational::from(b.clone()))).collect::<Vec<_>>(),
                );
            let nonzero = g.j.iter().all(|b| b.sign() != Sign::NoSign);
            checks.push(Check::new(
                "diagonalization",
                congruent && nonzero,
                format!(
                    "M* Q(u) M = J with J = diag{:?}",
                    g.j.iter().map(ToString::to_string).collect::<Vec<_>>()
                ),
            ));
            checks.push(Check::new(
                "det-class",
                form::det_class_holds(&qu, g),
                "prod(Delta) = N(det M) det Q(u)",
            ));
            json!({
                "m": strings(&g.m),
                "delta": g.delta.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "scales": g.scales.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "j": g.j.iter().map(ToString::to_string).collect::<Vec<_>>(),
            })
        }
        Err(e) => {
            checks.push(Check::new("diagonalization", false, e.to_string()));
            Value::Null
        }
    };

    let t = u.mul(&lift(&Rational::new(1.into(), 2.into())));
    let span = density::adjoint_span_quadratic(&t, radius);
    checks.push(Check::new(
        "adjoint-span",
        span.is_full(),
        format!("dimension {} over Q(sqrt {d}) at t = u/2, radius {radius}", span.dimension),
    ));
    let inverse = density::inverse_eigenvalue_check_quadratic(&t, &longitude);
    checks.push(Check::new(
        "inverse-eigenvalue",
        inverse,
        format!("spectrum of phi_t({longitude}) is not closed under inversion"),
    ));

    let witnesses = json!({
        "field": { "d": d, "half_integer_basis": field.half_integer_basis() },
        "epsilon": unit.epsilon.to_string(),
        "epsilon_norm": unit.norm,
        "u": u.to_string(),
        "t": t.to_string(),
        "q_u": strings(&qu),
        "diagonalization": diag_json,
        "integral_entry_words": integral.integral_entry_words,
        "span_dimension": span.dimension,
        "span_method": span.method,
    });
    Ok(Certificate::seal("specialize", inputs, upstream, checks, witnesses, elapsed(start)))
}

fn proximality_words(longitude: &Word) -> Vec<Word> {
    let mut ws: Vec<Word> = enumerate_ball(2).filter(|w| !w.is_identity()).collect();
    ws.push(longitude.clone());
    ws
}

pub fn density(_ctx: &Context, store: &Store, t0: &Rational, radius: usize) -> Result<Certificate, CliError> {
    let start = Instant::now();
    let (verify, verify_hash) = store.require("verify")?;
    let upstream = BTreeMap::from([("verify".to_string(), verify_hash)]);
    let inputs = json!({ "t": t0.to_string(), "radius": radius });
    let longitude = longitude_from(&verify)?;

    let span = density::adjoint_span_dimension(t0, radius);
    let inverse = density::inverse_eigenvalue_check(t0, &longitude);
    let checks = vec![
        Check::new(
            "adjoint-span",
            span.is_full(),
            format!("dimension {} of 225 ({}), radius {radius}", span.dimension, span.method),
        ),
        Check::new(
            "inverse-eigenvalue",
            inverse,
            format!("spectrum of phi_t({longitude}) is not closed under inversion"),
        ),
    ];
    let comm = Word::commutator(&Word::x().pow(2), &Word::y());
    let locus = density::eigenvalue_one_locus(&comm);
    let orbits = density::eigenvector_orbit_dim(t0, &longitude);
    let table: Vec<Value> = density::proximality_scan(t0, &proximality_words(&longitude))
        .iter()
        .map(|r| {
            json!({
                "word": r.word.to_string(),
                "moduli": r.moduli.iter().map(|m| format!("{m:.6e}")).collect::<Vec<_>>(),
                "verdict": r.verdict,
                "reason": r.reason,
            })
        })
        .collect();
    let proximal = table.iter().filter(|r| {
        matches!(
            serde_json::from_value::<Proximality>(r["verdict"].clone()),
            Ok(Proximality::Proximal | Proximality::PositiveProximal)
        )
    });
    let witnesses = json!({
        "span": {
            "dimension": span.dimension,
            "method": span.method,
            "witness_words": words(&span.witnesses),
        },
        "eigenvalue_one_locus": { "word": comm.to_string(), "factors": locus.factors },
        "eigenvector_orbits": orbits.map(|(a, b)| [a, b]),
        "proximal_words": proximal.count(),
        "proximality": table,
    });
    Ok(Certificate::seal("density", inputs, upstream, checks, witnesses, elapsed(start)))
}
