//! The two one-parameter families `ρ_v` and `φ_t` of representations of the
//! figure-eight knot group into `SL(4)`, and word evaluation.
//!
//! `ρ_v` has coefficients in `Q(√3)`, `φ_t` in `Q`. The two become conjugate
//! at `v = 2t`; [`phi_v`] is `φ_{v/2}`, the form of `φ` the trace and form
//! computations run on.

mod intertwiner;
mod memo;

use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::matrix::Matrix;
use crate::ring::{int, rat, Coeff, Field, Laurent, QuadElem, Rational, Ring};
use crate::words::{Letter, Word};

pub use intertwiner::{
    find_intertwiner, primitive_laurent, solve_linear_family, Intertwiner, StructuralError,
};
pub use memo::PrefixMemo;

/// A 4×4 matrix of Laurent polynomials.
pub type LMat<K> = Matrix<Laurent<K>>;

/// A representation of the free group given by the images of `x, X, y, Y`.
#[derive(Clone)]
pub struct Rep<T: Ring> {
    name: String,
    gens: [Matrix<T>; 4],
    memo: PrefixMemo<T>,
}

impl<T: Ring> Rep<T> {
    /// Builds a representation from the images of `x` and `y`; inverses come
    /// from the adjugate, which is exact because both determinants are 1.
    pub fn new(name: impl Into<String>, x: Matrix<T>, y: Matrix<T>) -> Self {
        assert!(x.det().is_one() && y.det().is_one(), "generator images must have det 1");
        let xi = x.adjugate();
        let yi = y.adjugate();
        Rep { name: name.into(), gens: [x, xi, y, yi], memo: PrefixMemo::new() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generator(&self, l: Letter) -> &Matrix<T> {
        &self.gens[l.index()]
    }

    /// The images of `x` and `y`.
    pub fn generators(&self) -> (&Matrix<T>, &Matrix<T>) {
        (&self.gens[0], &self.gens[2])
    }

    /// Left-to-right product of generator images.
    pub fn evaluate(&self, w: &Word) -> Matrix<T> {
        let mut it = w.letters().iter();
        let Some(first) = it.next() else {
            return Matrix::identity(4);
        };
        it.fold(self.generator(*first).clone(), |acc, l| acc.mul(self.generator(*l)))
    }

    /// Evaluates many words, sharing prefixes through the memo.
    pub fn evaluate_many(&self, words: &[Word]) -> Vec<Matrix<T>> {
        self.memo.fill(words, |l| self.generator(l));
        words.iter().map(|w| self.memo.get(w).expect("memo filled")).collect()
    }

    pub fn memo(&self) -> &PrefixMemo<T> {
        &self.memo
    }

    /// Applies a ring map to every generator entry.
    pub fn map<U: Ring>(&self, name: impl Into<String>, f: impl Fn(&T) -> U + Sync) -> Rep<U>
    where
        T: Sync,
    {
        let gens: Vec<Matrix<U>> = self.gens.par_iter().map(|g| g.map(&f)).collect();
        let [x, xi, y, yi]: [Matrix<U>; 4] = gens.try_into().ok().unwrap();
        Rep { name: name.into(), gens: [x, xi, y, yi], memo: PrefixMemo::new() }
    }
}

impl<T: Ring + serde::Serialize + serde::de::DeserializeOwned> Rep<T> {
    fn cache_file(&self, dir: &Path) -> PathBuf {
        dir.join(format!("{}.json", self.name))
    }

    /// Warms the memo from `dir/<name>.json` if present and computed from
    /// the same generators.
    pub fn load_cache(&self, dir: &Path) -> std::io::Result<usize> {
        let path = self.cache_file(dir);
        if !path.exists() {
            return Ok(0);
        }
        self.memo.load(&path, &self.gens)
    }

    pub fn save_cache(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        self.memo.save(&self.cache_file(dir), &self.gens)
    }
}

impl<K: Field> Rep<Laurent<K>> {
    /// Specializes the parameter at `x` (with inverse `x_inv`) in a ring `R`.
    pub fn specialize<R: Ring>(
        &self,
        name: impl Into<String>,
        x: &R,
        x_inv: &R,
        lift: impl Fn(&K) -> R + Copy + Sync,
    ) -> Rep<R> {
        self.map(name, |e| e.eval_in(x, x_inv, lift))
    }

    /// Substitutes `v ↦ c·v` in every entry.
    pub fn rescale(&self, name: impl Into<String>, c: &K) -> Self {
        self.map(name, |e| e.scale_var(c))
    }
}

impl<T: Ring> fmt::Debug for Rep<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rep").field("name", &self.name).finish()
    }
}

fn lp<K: Field>(terms: &[(i64, K)]) -> Laurent<K> {
    Laurent::from_terms(terms)
}

/// `ρ_v` over `Q(√3)[v, 1/v]`.
///
/// The `(1,4)` and `(2,4)` entries of `ρ_v(x)` are `±(1/√12)(1/v − 1)`;
/// with the opposite sign the relator fails for `v ≠ 1`.
pub fn rho() -> Rep<Laurent<QuadElem>> {
    let q = |n: i64, d: i64| QuadElem::from(rat(n, d));
    // c·√3
    let s = |n: i64, d: i64| QuadElem::sqrt_of(rat(n, d), 3);
    let x = Matrix::from_rows(vec![
        vec![
            lp(&[(0, q(3, 2))]),
            lp(&[(0, q(1, 2))]),
            lp(&[(0, q(1, 2)), (-1, q(1, 2))]),
            lp(&[(-1, s(1, 6)), (0, s(-1, 6))]),
        ],
        vec![
            lp(&[(0, q(-1, 2))]),
            lp(&[(0, q(1, 2))]),
            lp(&[(0, q(-1, 2)), (-1, q(-1, 2))]),
            lp(&[(-1, s(-1, 6)), (0, s(1, 6))]),
        ],
        vec![lp(&[(0, q(1, 1))]), lp(&[(0, q(1, 1))]), lp(&[(0, q(1, 1))]), Laurent::zero()],
        vec![Laurent::zero(), Laurent::zero(), Laurent::zero(), lp(&[(0, q(1, 1))])],
    ]);
    let y = Matrix::from_rows(vec![
        vec![
            lp(&[(1, q(1, 1)), (0, q(1, 2))]),
            lp(&[(1, q(-1, 1)), (0, q(1, 2))]),
            lp(&[(0, q(1, 2))]),
            lp(&[(0, s(7, 6)), (1, s(-4, 6))]),
        ],
        vec![
            lp(&[(0, q(1, 2))]),
            lp(&[(0, q(1, 2))]),
            lp(&[(0, q(1, 2))]),
            lp(&[(-1, s(4, 6)), (0, s(-1, 6))]),
        ],
        vec![
            lp(&[(1, q(1, 2))]),
            lp(&[(1, q(-1, 2))]),
            lp(&[(0, q(1, 1))]),
            lp(&[(0, s(1, 3)), (1, s(-1, 3))]),
        ],
        vec![lp(&[(1, s(1, 2))]), lp(&[(1, s(-1, 2))]), Laurent::zero(), lp(&[(0, q(2, 1)), (1, q(-1, 1))])],
    ]);
    Rep::new("rho", x, y)
}

/// `φ_t` over `Q[t, 1/t]`.
pub fn phi() -> Rep<Laurent<Rational>> {
    let c = |n: i64| lp(&[(0, int(n))]);
    let o = Laurent::zero;
    let x = Matrix::from_rows(vec![
        vec![c(1), o(), c(1), lp(&[(1, int(1)), (0, int(-1))])],
        vec![o(), c(1), c(1), lp(&[(1, int(1))])],
        vec![o(), o(), c(1), lp(&[(1, int(1)), (0, rat(1, 2))])],
        vec![o(), o(), o(), c(1)],
    ]);
    let y = Matrix::from_rows(vec![
        vec![c(1), o(), o(), o()],
        vec![lp(&[(0, int(2)), (-1, int(1))]), c(1), o(), o()],
        vec![c(2), c(1), c(1), o()],
        vec![c(1), c(1), o(), c(1)],
    ]);
    Rep::new("phi", x, y)
}

/// `φ_{v/2}`: `φ_t` rewritten in `v = 2t`.
pub fn phi_v() -> Rep<Laurent<Rational>> {
    phi().rescale("phi_v", &rat(1, 2))
}

/// `ρ_{2t}`: `ρ_v` rewritten in `t`.
pub fn rho_t() -> Rep<Laurent<QuadElem>> {
    rho().rescale("rho_t", &QuadElem::from(int(2)))
}

/// Monic characteristic polynomial `det(Q·I − M)`, coefficients low first.
#[derive(Clone, PartialEq, Debug)]
pub struct CharPoly<T: Ring> {
    coeffs: Vec<T>,
}

impl<T: Ring> CharPoly<T> {
    pub fn of(m: &Matrix<T>) -> Self {
        CharPoly { coeffs: m.charpoly_coeffs() }
    }

    /// `∏ (Q − r_i)`.
    pub fn from_roots(roots: &[T]) -> Self {
        let mut c = vec![T::one()];
        for r in roots {
            let mut next = vec![T::zero(); c.len() + 1];
            for (k, a) in c.iter().enumerate() {
                next[k + 1] = next[k + 1].add(a);
                next[k] = next[k].sub(&a.mul(r));
            }
            c = next;
        }
        CharPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Sum of the roots.
    pub fn trace(&self) -> T {
        self.coeffs[self.degree() - 1].neg()
    }
}

impl<K: Coeff> CharPoly<Laurent<K>> {
    /// Renders as a polynomial in `Q` with Laurent coefficients in `var`.
    pub fn display_var(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.display_var(var);
            let coef = if c.terms().count() > 1 { format!("({cs})") } else { cs };
            parts.push(match k {
                0 => coef,
                _ => {
                    let q = if k == 1 { "Q".to_string() } else { format!("Q^{k}") };
                    if c.is_one() {
                        q
                    } else {
                        format!("{coef}*{q}")
                    }
                }
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// The expected longitude spectrum `(Q − v)³(Q − v⁻³)`.
pub fn longitude_charpoly<K: Field>() -> CharPoly<Laurent<K>> {
    let v = Laurent::var();
    let v3 = Laurent::monomial(K::one(), -3);
    CharPoly::from_roots(&[v.clone(), v.clone(), v, v3])
}

/// Exact check that `φ_t(x)` and `φ_t(λ)` commute.
pub fn peripheral_commutes(longitude: &Word) -> bool {
    commutes(&phi(), &Word::x(), longitude)
}

pub fn commutes<T: Ring>(rep: &Rep<T>, a: &Word, b: &Word) -> bool {
    let (ma, mb) = (rep.evaluate(a), rep.evaluate(b));
    ma.mul(&mb) == mb.mul(&ma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Coeff, Poly};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn memo_cache_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let words: Vec<Word> = crate::words::enumerate_ball(2).collect();
        let p = phi_v();
        let expected = p.evaluate_many(&words);
        p.save_cache(dir.path()).unwrap();
        let fresh = phi_v();
        assert_eq!(fresh.load_cache(dir.path()).unwrap(), p.memo().len());
        assert_eq!(
            fresh.memo().get(&w("xY")),
            Some(expected[words.iter().position(|u| *u == w("xY")).unwrap()].clone())
        );
        // a file written for other generators is ignored
        let other = phi().rescale("phi_v", &rat(1, 2));
        let wrong = phi().rescale("phi_v", &rat(1, 3));
        assert_eq!(other.generators(), p.generators());
        assert_eq!(wrong.load_cache(dir.path()).unwrap(), 0);
        assert!(phi_v().load_cache(&dir.path().join("absent")).unwrap() == 0);
    }

    #[test]
    fn generator_traces_and_dets() {
        let four = Laurent::<QuadElem>::from_int(4);
        let r = rho();
        assert_eq!(r.generators().0.trace(), four);
        assert_eq!(r.generators().1.trace(), four);
        let p = phi();
        assert_eq!(p.generators().0.trace(), Laurent::from_int(4));
        assert_eq!(p.generators().1.trace(), Laurent::from_int(4));
        for l in Letter::ALL {
            assert!(r.generator(l).det().is_one());
            assert!(p.generator(l).det().is_one());
        }
    }

    #[test]
    fn star_of_generator_is_involutive() {
        let x = rho().generators().0.clone();
        assert_eq!(x.laurent_star().laurent_star(), x);
        assert_eq!(Matrix::<Laurent<Rational>>::identity(4).laurent_star(), Matrix::identity(4));
        let v = Laurent::<Rational>::var();
        let d = Matrix::diagonal(&[v.clone(), Laurent::one(), Laurent::one(), v.star()]);
        let ds = Matrix::diagonal(&[v.star(), Laurent::one(), Laurent::one(), v]);
        assert_eq!(d.laurent_star(), ds);
    }

    #[test]
    fn relator_is_identity_in_both_families() {
        let r = w("XyxYxyXYxY");
        assert!(rho().evaluate(&r).is_identity());
        assert!(phi().evaluate(&r).is_identity());
        assert!(!phi().evaluate(&w("x")).is_identity());
    }

    // independent transcription at v = 1 in floating point, naive products
    fn f64_rho_at_1() -> ([[f64; 4]; 4], [[f64; 4]; 4]) {
        let r3 = 3f64.sqrt();
        let x = [[1.5, 0.5, 1.0, 0.0], [-0.5, 0.5, -1.0, 0.0], [1.0, 1.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
        let y = [
            [1.5, -0.5, 0.5, 3.0 / 12f64.sqrt()],
            [0.5, 0.5, 0.5, 3.0 / 12f64.sqrt()],
            [0.5, -0.5, 1.0, 0.0],
            [r3 / 2.0, -r3 / 2.0, 0.0, 1.0],
        ];
        (x, y)
    }

    fn f64_mul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
        let mut c = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        c
    }

    fn f64_inv(a: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 8]; 4];
        for i in 0..4 {
            m[i][..4].copy_from_slice(&a[i]);
            m[i][4 + i] = 1.0;
        }
        for c in 0..4 {
            let p = (c..4).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
            m.swap(c, p);
            let d = m[c][c];
            m[c].iter_mut().for_each(|e| *e /= d);
            for i in (0..4).filter(|&i| i != c) {
                let f = m[i][c];
                let rc = m[c];
                m[i].iter_mut().zip(rc).for_each(|(e, r)| *e -= f * r);
            }
        }
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            out[i].copy_from_slice(&m[i][4..]);
        }
        out
    }

    #[test]
    fn commutator_trace_at_the_hyperbolic_point() {
        let (fx, fy) = f64_rho_at_1();
        let (fxi, fyi) = (f64_inv(&fx), f64_inv(&fy));
        let prod = [&fx, &fx, &fy, &fxi, &fxi, &fyi]
            .iter()
            .fold(f64_mul(&fx, &f64_inv(&fx)), |acc, m| f64_mul(&acc, m));
        let oracle: f64 = (0..4).map(|i| prod[i][i]).sum();
        let r = rho();
        let one = QuadElem::from(int(1));
        let at1 = r.specialize("rho_1", &one, &one, |c| c.clone());
        let c = Word::commutator(&w("xx"), &w("y"));
        let exact = at1.evaluate(&c).trace();
        assert!((exact.to_f64() - oracle).abs() < 1e-9);
        // not 4: [x², y] is not unipotent at v = 1
        assert_eq!(exact, QuadElem::from(int(12)));
    }

    #[test]
    fn longitude_spectrum() {
        let lam = w("yXYxxYXy");
        let cp = CharPoly::of(&rho().evaluate(&lam));
        assert_eq!(cp, longitude_charpoly());
        let t = cp.trace();
        let expect = Laurent::from_terms(&[(1, QuadElem::from(int(3))), (-3, QuadElem::from(int(1)))]);
        assert_eq!(t, expect);
        assert!(peripheral_commutes(&lam));
        assert!(!commutes(&phi(), &w("x"), &w("y")));
        // the identity fails the test
        assert_ne!(CharPoly::of(&rho().evaluate(&Word::identity())), longitude_charpoly());
    }

    #[test]
    fn charpoly_simple_cases() {
        let id = Matrix::<Rational>::identity(4);
        assert_eq!(CharPoly::of(&id), CharPoly::from_roots(&[int(1), int(1), int(1), int(1)]));
        let d = Matrix::diagonal(&[int(2), int(-1), rat(1, 3), int(5)]);
        assert_eq!(CharPoly::of(&d), CharPoly::from_roots(&[int(2), int(-1), rat(1, 3), int(5)]));
    }

    #[test]
    fn traces_agree_at_v_equals_2t() {
        let r = rho_t();
        let p = phi();
        for s in ["xy", "xY", "xxyXY", "yXYxxYXy"] {
            let tr = r.evaluate(&w(s)).trace();
            let tp = p.evaluate(&w(s)).trace().map(|c| QuadElem::from(c.clone()));
            assert_eq!(tr, tp, "{s}");
        }
        // tr(xy) = v + 6 in the v-normalization
        let t = phi_v().evaluate(&w("xy")).trace();
        assert_eq!(t, Laurent::from_terms(&[(1, int(1)), (0, int(6))]));
    }

    #[test]
    fn evaluate_many_matches_direct() {
        let p = phi_v();
        let words: Vec<Word> = crate::words::enumerate_ball(3).collect();
        let got = p.evaluate_many(&words);
        for (wd, m) in words.iter().zip(&got) {
            assert_eq!(&p.evaluate(wd), m);
        }
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        proptest::collection::vec(0usize..4, 0..8)
            .prop_map(|v| Word::from_letters(v.into_iter().map(Letter::from_index)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn group_law(a in arb_word(), b in arb_word()) {
            let r = phi_v();
            let (ma, mb) = (r.evaluate(&a), r.evaluate(&b));
            prop_assert_eq!(r.evaluate(&a.concat(&b)), ma.mul(&mb));
            prop_assert!(ma.mul(&r.evaluate(&a.inverse())).is_identity());
            prop_assert!(ma.det().is_one());
            prop_assert_eq!(ma.trace_of_product(&mb), mb.trace_of_product(&ma));
        }

        #[test]
        fn rho_group_law(a in arb_word(), b in arb_word()) {
            let r = rho();
            let (ma, mb) = (r.evaluate(&a), r.evaluate(&b));
            prop_assert_eq!(r.evaluate(&a.concat(&b)), ma.mul(&mb));
            prop_assert!(ma.det().is_one());
        }

        #[test]
        fn specialization_commutes_with_evaluation(a in arb_word(), n in 1i64..7, d in 1i64..5) {
            let t0 = rat(n, d);
            let p = phi();
            let sp = p.specialize("phi_t0", &t0, &t0.inv().unwrap(), |c| c.clone());
            let direct = p.evaluate(&a).map(|e| e.eval(&t0));
            prop_assert_eq!(sp.evaluate(&a), direct);
        }
    }

    #[test]
    fn longitude_matches_poly_roots() {
        // char poly of φ_{1}(λ) over Q: roots 2, 2, 2, 1/8
        let p = phi();
        let one = int(1);
        let sp = p.specialize("phi_1", &one, &one, |c| c.clone());
        let cp = CharPoly::of(&sp.evaluate(&w("yXYxxYXy")));
        let poly = Poly::new(cp.coeffs().to_vec());
        assert_eq!(crate::ring::rational_roots(&poly), vec![rat(1, 8), int(2)]);
    }
}
