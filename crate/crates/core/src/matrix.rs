//! Dense matrices over any [`Ring`], plus the exact linear algebra the
//! pipeline needs: nullspaces over fields, division-free determinants and
//! adjugates, and fraction-free (Bareiss) elimination over polynomial rings.

use std::fmt;

use crate::ring::{Coeff, Field, Laurent, Poly, RatFunc, Rational, Ring, ZPoly};

#[derive(Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix shape");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                data.push(acc);
            }
        }
        Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> T {
        assert_eq!((self.cols, self.rows), (other.rows, other.cols));
        let mut acc = T::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, i);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    /// Determinant by cofactor expansion for `n ≤ 4`, division-free Berkowitz
    /// otherwise. Works over any commutative ring.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of non-square matrix");
        match self.rows {
            0 => T::one(),
            1 => self.data[0].clone(),
            2 => self.get(0, 0).mul(self.get(1, 1)).sub(&self.get(0, 1).mul(self.get(1, 0))),
            n if n <= 4 => {
                let mut acc = T::zero();
                for j in 0..n {
                    let e = self.get(0, j);
                    if e.is_zero() {
                        continue;
                    }
                    let term = e.mul(&self.minor(0, j).det());
                    acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                acc
            }
            _ => {
                let cp = self.charpoly_coeffs();
                let c0 = cp[0].clone();
                if self.rows % 2 == 0 {
                    c0
                } else {
                    c0.neg()
                }
            }
        }
    }

    /// Deletes row `r` and column `c`.
    pub fn minor(&self, r: usize, c: usize) -> Self {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.rows - 1, cols: self.cols - 1, data }
    }

    /// Classical adjugate, so that `A · adj(A) = det(A) · I`.
    pub fn adjugate(&self) -> Self {
        assert!(self.is_square());
        let n = self.rows;
        if n == 1 {
            return Self::identity(1);
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let m = self.minor(i, j).det();
                out.set(j, i, if (i + j) % 2 == 0 { m } else { m.neg() });
            }
        }
        out
    }

    /// Coefficients `c_0..c_n` of `det(Q·I − A) = Σ c_k Q^k`, by the
    /// division-free Berkowitz algorithm.
    pub fn charpoly_coeffs(&self) -> Vec<T> {
        assert!(self.is_square());
        let n = self.rows;
        // Berkowitz: build the Toeplitz products from the bottom-right up.
        let mut vect: Vec<T> = vec![T::one()];
        for r in (0..n).rev() {
            // submatrix A[r+1.., r+1..], row R = A[r, r+1..], col C = A[r+1.., r]
            let m = n - r - 1;
            let a_rr = self.get(r, r).clone();
            let row: Vec<T> = (r + 1..n).map(|j| self.get(r, j).clone()).collect();
            let col: Vec<T> = (r + 1..n).map(|i| self.get(i, r).clone()).collect();
            // toeplitz entries: 1, -a_rr, -R C, -R A C, -R A^2 C, ...
            let mut t = vec![T::one(), a_rr.neg()];
            let mut cur = col.clone();
            for _ in 0..m {
                let rc = row.iter().zip(&cur).fold(T::zero(), |acc, (a, b)| acc.add(&a.mul(b)));
                t.push(rc.neg());
                // cur = A_sub * cur
                cur = (0..m)
                    .map(|i| {
                        (0..m).fold(T::zero(), |acc, k| acc.add(&self.get(r + 1 + i, r + 1 + k).mul(&cur[k])))
                    })
                    .collect();
            }
            // new = T · vect, T lower-triangular Toeplitz of size (m+2)x(m+1)
            let mut new = vec![T::zero(); m + 2];
            for (i, slot) in new.iter_mut().enumerate() {
                for (k, vk) in vect.iter().enumerate() {
                    if i >= k && i - k < t.len() {
                        *slot = slot.add(&t[i - k].mul(vk));
                    }
                }
            }
            vect = new;
        }
        // vect holds coefficients highest degree first
        vect.reverse();
        vect
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<K: Field> Matrix<K> {
    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).inv().unwrap();
            for j in c..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(i, j).sub(&f.mul(self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column, with the free
    /// coordinate set to 1.
    pub fn nullspace(&self) -> Vec<Vec<K>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![K::zero(); self.cols];
                x[f] = K::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = m.get(r, f).neg();
                }
                x
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, K::one());
        }
        let piv = aug.rref_in_place();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(out)
    }
}

/// Solves `A X = B` over `K[v]` fraction-free: returns `(d, N)` with
/// `d = det A` (up to sign) and `A N = d B`, so `X = N/d`.
///
/// Bareiss forward elimination followed by exact back substitution; every
/// intermediate is a polynomial. Returns `None` if `A` is singular.
pub fn bareiss_solve<K: Field>(
    a: &Matrix<Poly<K>>,
    b: &Matrix<Poly<K>>,
) -> Option<(Poly<K>, Matrix<Poly<K>>)> {
    let n = a.rows;
    assert!(a.is_square() && b.rows == n);
    let m = b.cols;
    let w = n + m;
    let mut aug: Vec<Vec<Poly<K>>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.extend_from_slice(b.row(i));
            r
        })
        .collect();
    let mut prev = Poly::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !aug[i][k].is_zero())?;
        aug.swap(k, p);
        let pivot = aug[k][k].clone();
        let (top, bottom) = aug.split_at_mut(k + 1);
        let rk = &top[k];
        for row in bottom.iter_mut() {
            let f = row[k].clone();
            for j in k + 1..w {
                let num = pivot.mul(&row[j]).sub(&f.mul(&rk[j]));
                row[j] = num.exact_div(&prev).expect("Bareiss exact division");
            }
            row[k] = Poly::zero();
        }
        prev = pivot;
    }
    let det = prev;
    // back substitution: U x = det·b', x polynomial.
    let mut x: Vec<Vec<Poly<K>>> = vec![vec![Poly::zero(); m]; n];
    for col in 0..m {
        for i in (0..n).rev() {
            let mut acc = det.mul(&aug[i][n + col]);
            for j in i + 1..n {
                if !aug[i][j].is_zero() {
                    acc = acc.sub(&aug[i][j].mul(&x[j][col]));
                }
            }
            x[i][col] = acc.exact_div(&aug[i][i]).expect("back substitution exact division");
        }
    }
    Some((det, Matrix::from_rows(x)))
}

/// [`bareiss_solve`] for rational polynomials with integer coefficients,
/// run on integer polynomials. Falls back to the generic path otherwise.
pub fn bareiss_solve_integral(
    a: &Matrix<Poly<Rational>>,
    b: &Matrix<Poly<Rational>>,
) -> Option<(Poly<Rational>, Matrix<Poly<Rational>>)> {
    let to_z = |m: &Matrix<Poly<Rational>>| m.data.iter().map(ZPoly::from_poly).collect::<Option<Vec<_>>>();
    let (Some(za), Some(zb)) = (to_z(a), to_z(b)) else {
        return bareiss_solve(a, b);
    };
    let n = a.rows;
    assert!(a.is_square() && b.rows == n);
    let m = b.cols;
    let w = n + m;
    let mut aug: Vec<Vec<ZPoly>> = (0..n)
        .map(|i| {
            let mut r = za[i * n..(i + 1) * n].to_vec();
            r.extend_from_slice(&zb[i * m..(i + 1) * m]);
            r
        })
        .collect();
    let mut prev = ZPoly::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !aug[i][k].is_zero())?;
        aug.swap(k, p);
        let pivot = aug[k][k].clone();
        let (top, bottom) = aug.split_at_mut(k + 1);
        let rk = &top[k];
        for row in bottom.iter_mut() {
            let f = row[k].clone();
            for j in k + 1..w {
                let num = pivot.mul(&row[j]).sub(&f.mul(&rk[j]));
                row[j] = num.exact_div(&prev).expect("Bareiss exact division");
            }
            row[k] = ZPoly::zero();
        }
        prev = pivot;
    }
    let det = prev;
    let mut x: Vec<Vec<ZPoly>> = vec![vec![ZPoly::zero(); m]; n];
    for col in 0..m {
        for i in (0..n).rev() {
            let mut acc = det.mul(&aug[i][n + col]);
            for j in i + 1..n {
                if !aug[i][j].is_zero() {
                    acc = acc.sub(&aug[i][j].mul(&x[j][col]));
                }
            }
            x[i][col] = acc.exact_div(&aug[i][i]).expect("back substitution exact division");
        }
    }
    let x = x.iter().map(|r| r.iter().map(ZPoly::to_poly).collect()).collect();
    Some((det.to_poly(), Matrix::from_rows(x)))
}

impl<K: Field> Matrix<Laurent<K>> {
    /// `A*`: transpose composed with `v ↦ 1/v` on every entry.
    pub fn laurent_star(&self) -> Self {
        self.transpose().map(|e| e.star())
    }

    /// Evaluates every entry at a point of an extension field.
    pub fn eval_in<R: Ring>(&self, x: &R, x_inv: &R, lift: impl Fn(&K) -> R + Copy) -> Matrix<R> {
        self.map(|e| e.eval_in(x, x_inv, lift))
    }

    pub fn to_ratfunc(&self) -> Matrix<RatFunc<K>> {
        self.map(|e| e.to_ratfunc())
    }

    /// Rows multiplied by powers of `v` so every entry is a polynomial.
    /// Row scaling leaves nullspaces unchanged.
    pub fn clear_row_denominators(&self) -> Matrix<Poly<K>> {
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let lo = self.row(i).iter().filter_map(|e| e.min_exp()).min().unwrap_or(0).min(0);
            rows.push(self.row(i).iter().map(|e| e.times_var_pow(-lo).as_poly().unwrap()).collect());
        }
        Matrix::from_rows(rows)
    }
}

impl<K: Coeff> Matrix<Laurent<K>> {
    pub fn display_var(&self, var: &str) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|e| e.display_var(var)).collect()).collect()
    }
}

impl<T: Ring + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<T: Ring> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &self.data)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, rat, Rational};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn det_and_adjugate() {
        let a = m(&[&[2, 1, 0, 3], &[1, 1, 4, 0], &[0, 2, 1, 1], &[5, 0, 1, 2]]);
        let d = a.det();
        let adj = a.adjugate();
        assert_eq!(a.mul(&adj), Matrix::identity(4).scale(&d));
        // Berkowitz agrees with cofactor expansion
        let cp = a.charpoly_coeffs();
        assert_eq!(cp[0], d);
        assert_eq!(cp[4], int(1));
        assert_eq!(cp[3], -a.trace());
    }

    #[test]
    fn charpoly_diagonal() {
        let a = Matrix::diagonal(&[int(2), int(3), int(5), int(7)]);
        let cp = Poly::new(a.charpoly_coeffs());
        let expect = [2, 3, 5, 7]
            .iter()
            .fold(Poly::one(), |acc: Poly<Rational>, &r| acc.mul(&Poly::from_ints(&[-r, 1])));
        assert_eq!(cp, expect);
    }

    #[test]
    fn nullspace_and_inverse() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        let x = Matrix::from_vec(3, 1, ns[0].clone());
        assert!(a.mul(&x).is_zero());
        assert!(a.inverse().is_none());
        let b = m(&[&[2, 1], &[7, 4]]);
        assert_eq!(b.mul(&b.inverse().unwrap()), Matrix::identity(2));
    }

    #[test]
    fn bareiss_matches_field_solve() {
        type P = Poly<Rational>;
        let p = |c: &[i64]| P::from_ints(c);
        let a = Matrix::from_rows(vec![
            vec![p(&[1, 1]), p(&[0, 2]), p(&[3])],
            vec![p(&[2]), p(&[1, 0, 1]), p(&[0, 1])],
            vec![p(&[1, -1]), p(&[5]), p(&[1, 1, 1])],
        ]);
        let b = Matrix::from_rows(vec![vec![p(&[1])], vec![p(&[0, 1])], vec![p(&[2, 3])]]);
        let (d, n) = bareiss_solve(&a, &b).unwrap();
        assert_eq!(a.mul(&n), b.scale(&d));
        // d equals det(A) up to sign
        let det = a.det();
        assert!(d == det || d == det.neg());
        // and the solution matches the rational-function solve at v = 3
        let at = |x: &P| x.eval(&int(3));
        let a3 = a.map(at);
        let x3 = a3.inverse().unwrap().mul(&b.map(at));
        let d3 = at(&d);
        assert_eq!(x3.scale(&d3), n.map(at));
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(xs in proptest::collection::vec(-5i64..5, 32)) {
            let a = Matrix::from_vec(4, 4, xs[..16].iter().map(|&x| rat(x, 1)).collect());
            let b = Matrix::from_vec(4, 4, xs[16..].iter().map(|&x| rat(x, 2)).collect());
            prop_assert_eq!(a.mul(&b).det(), a.det() * b.det());
            prop_assert_eq!(a.charpoly_coeffs()[0].clone(), a.det());
        }
    }
}
