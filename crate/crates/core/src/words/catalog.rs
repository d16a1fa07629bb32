//! Discovery of the distinguished words: the relator of the group and the
//! longitude commuting with the meridian `x`.
//!
//! Both searches screen a word ball modulo `p` at random parameter values
//! and confirm survivors exactly.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::modp::Fp;
use crate::rep::{self, CharPoly, Rep};
use crate::ring::{Field, Ring};
use crate::words::{Letter, Word};

/// `w x w⁻¹ y⁻¹` with `w = x⁻¹ y x y⁻¹`.
pub const RELATOR_CANDIDATE: &str = "XyxYxyXYxY";

const SCREEN_SEED: u64 = 0x7417_1a7;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelatorSearch {
    pub relator: Word,
    pub candidate: Word,
    pub candidate_verified: bool,
    /// Words screened modulo p.
    pub screened: usize,
    /// Screening survivors confirmed or rejected exactly.
    pub exact_checks: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LongitudeSearch {
    pub longitude: Word,
    /// Other words passing both exact tests, shortlex order.
    pub alternates: Vec<Word>,
    pub screened: usize,
    pub exact_checks: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WordCatalog {
    pub meridian: Word,
    pub relator: Word,
    pub longitude: Word,
}

impl WordCatalog {
    /// Runs both searches with the default length bounds.
    pub fn discover() -> Option<(WordCatalog, RelatorSearch, LongitudeSearch)> {
        let rel = discover_relator(12)?;
        let lon = discover_longitude(8, &rel)?;
        let cat = WordCatalog {
            meridian: Word::x(),
            relator: rel.relator.clone(),
            longitude: lon.longitude.clone(),
        };
        Some((cat, rel, lon))
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> (Fp, Fp) {
    loop {
        let t = Fp::new(rng.gen::<u64>());
        if let Some(ti) = t.inv() {
            return (t, ti);
        }
    }
}

fn phi_mod_p(rng: &mut ChaCha8Rng) -> Rep<Fp> {
    let (t, ti) = random_point(rng);
    rep::phi().specialize("phi_mod_p", &t, &ti, Fp::from_rational)
}

/// Visits every reduced word of length `1..=max_len` with its images under
/// each representation, level by level in shortlex order, and keeps the
/// words accepted by `keep`.
fn screen_ball(
    reps: &[Rep<Fp>],
    max_len: usize,
    mut keep: impl FnMut(&Word, &[Matrix<Fp>]) -> bool,
) -> (Vec<Word>, usize) {
    let mut level: Vec<(Vec<Letter>, Vec<Matrix<Fp>>)> =
        vec![(Vec::new(), reps.iter().map(|_| Matrix::identity(4)).collect())];
    let mut kept = Vec::new();
    let mut screened = 0;
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * 3);
        for (letters, mats) in &level {
            for l in Letter::ALL {
                if letters.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut nl = letters.clone();
                nl.push(l);
                let nm: Vec<Matrix<Fp>> = mats.iter().zip(reps).map(|(m, r)| m.mul(r.generator(l))).collect();
                next.push((nl, nm));
            }
        }
        for (letters, mats) in &next {
            screened += 1;
            let w = Word::from_letters(letters.iter().copied());
            if keep(&w, mats) {
                kept.push(w);
            }
        }
        level = next;
    }
    (kept, screened)
}

fn is_exact_relator(w: &Word) -> bool {
    rep::phi().evaluate(w).is_identity() && rep::rho().evaluate(w).is_identity()
}

/// Finds the shortlex-least nontrivial word that is the identity under both
/// families, up to length `max_len`.
///
/// The standard candidate is confirmed first; the screen then only needs to
/// look at words that precede it.
pub fn discover_relator(max_len: usize) -> Option<RelatorSearch> {
    let candidate = Word::parse(RELATOR_CANDIDATE).unwrap();
    let candidate_verified = candidate.len() <= max_len && is_exact_relator(&candidate);
    let bound = if candidate_verified { candidate.len() } else { max_len };
    let mut rng = ChaCha8Rng::seed_from_u64(SCREEN_SEED);
    let reps = [phi_mod_p(&mut rng), phi_mod_p(&mut rng)];
    let (hits, screened) = screen_ball(&reps, bound, |w, mats| {
        (!candidate_verified || *w < candidate) && mats.iter().all(|m| m.is_identity())
    });
    let mut exact_checks = 0;
    let mut found = None;
    for w in hits {
        exact_checks += 1;
        if is_exact_relator(&w) {
            found = Some(w);
            break;
        }
    }
    let relator = match found {
        Some(w) => w,
        None if candidate_verified => candidate.clone(),
        None => {
            log::warn!("no relator of length <= {max_len}");
            return None;
        }
    };
    Some(RelatorSearch { relator, candidate, candidate_verified, screened, exact_checks })
}

/// Finds words `λ` with `φ(λ)` commuting with `φ(x)` and
/// `det(Q − ρ_v(λ)) = (Q − v)³(Q − v⁻³)`; returns the shortlex-least.
pub fn discover_longitude(max_len: usize, relator: &RelatorSearch) -> Option<LongitudeSearch> {
    debug_assert!(is_exact_relator(&relator.relator));
    let mut rng = ChaCha8Rng::seed_from_u64(SCREEN_SEED ^ 1);
    let (v0, v0i) = random_point(&mut rng);
    let phi_v0 = rep::phi_v().specialize("phi_v_mod_p", &v0, &v0i, Fp::from_rational);
    let target = CharPoly::from_roots(&[v0, v0, v0, v0i.mul(&v0i).mul(&v0i)]);
    let x0 = phi_v0.generators().0.clone();
    let (hits, screened) = screen_ball(std::slice::from_ref(&phi_v0), max_len, |_, mats| {
        let m = &mats[0];
        m.mul(&x0) == x0.mul(m) && CharPoly::of(m) == target
    });
    let phi = rep::phi();
    let rho = rep::rho();
    let expected = rep::longitude_charpoly();
    let mut certified = Vec::new();
    let exact_checks = hits.len();
    for w in hits {
        if rep::commutes(&phi, &Word::x(), &w) && CharPoly::of(&rho.evaluate(&w)) == expected {
            certified.push(w);
        }
    }
    if certified.is_empty() {
        log::warn!("no longitude of length <= {max_len}");
        return None;
    }
    let longitude = certified.remove(0);
    if !certified.is_empty() {
        log::info!("longitude {longitude}: {} alternates, e.g. {}", certified.len(), certified[0]);
    }
    Some(LongitudeSearch { longitude, alternates: certified, screened, exact_checks })
}
