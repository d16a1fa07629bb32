use crate::matrix::Matrix;
use crate::ring::{Field, Laurent, Poly, QuadElem, RatFunc, Ring};

use super::{phi, rho_t, LMat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructuralError {
    #[error("solution space has dimension {0}, expected 1")]
    Nullity(usize),
    #[error("the solution is singular")]
    Singular,
}

/// Nullspace over `K(v)` of a system with Laurent coefficients.
pub fn solve_linear_family<K: Field>(system: &LMat<K>) -> Vec<Vec<RatFunc<K>>> {
    let polys = system.clear_row_denominators();
    polys.map(|p| RatFunc::from_poly(p.clone())).nullspace()
}

/// Scales a vector over `K(v)` to Laurent entries with coprime numerators:
/// clears denominators, then divides out the polynomial gcd and any power
/// of `v`.
pub fn primitive_laurent<K: Field>(vec: &[RatFunc<K>]) -> Vec<Laurent<K>> {
    let lcm = vec.iter().fold(Poly::<K>::one(), |acc, f| {
        let g = acc.gcd(f.denom());
        acc.mul(&f.denom().exact_div(&g).unwrap())
    });
    let nums: Vec<Poly<K>> = vec.iter().map(|f| f.numer().mul(&lcm.exact_div(f.denom()).unwrap())).collect();
    let g = nums.iter().fold(Poly::zero(), |acc, p| acc.gcd(p));
    let nums: Vec<Poly<K>> = nums.iter().map(|p| p.exact_div(&g).unwrap()).collect();
    let low = nums.iter().filter_map(|p| p.valuation()).min().unwrap_or(0) as i64;
    nums.iter().map(|p| Laurent::from_poly(p).times_var_pow(-low)).collect()
}

/// An invertible `C` with `ρ_{2t}(g)·C = C·φ_t(g)` for both generators.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    /// Entries in `Q(√3)[t, 1/t]`.
    pub matrix: LMat<QuadElem>,
    pub nullity: usize,
    pub det: Laurent<QuadElem>,
}

/// Solves `A·C − C·B = 0` for both generators over `Q(√3)(t)`.
pub fn find_intertwiner() -> Result<Intertwiner, StructuralError> {
    let r = rho_t();
    let p = phi();
    let lift = |e: &Laurent<crate::ring::Rational>| e.map(|c| QuadElem::from(c.clone()));
    let mut rows: Vec<Vec<Laurent<QuadElem>>> = Vec::new();
    for (a, b) in [(r.generators().0, p.generators().0), (r.generators().1, p.generators().1)] {
        let b = b.map(lift);
        for i in 0..4 {
            for j in 0..4 {
                let mut row = vec![Laurent::zero(); 16];
                for k in 0..4 {
                    // Σ_k A_ik C_kj
                    row[k * 4 + j] = row[k * 4 + j].add(a.get(i, k));
                    // − Σ_l C_il B_lj
                    row[i * 4 + k] = row[i * 4 + k].sub(b.get(k, j));
                }
                rows.push(row);
            }
        }
    }
    let ns = solve_linear_family(&Matrix::from_rows(rows));
    if ns.len() != 1 {
        return Err(StructuralError::Nullity(ns.len()));
    }
    let entries = primitive_laurent(&ns[0]);
    let c = Matrix::from_vec(4, 4, entries);
    let det = c.det();
    if det.is_zero() {
        return Err(StructuralError::Singular);
    }
    Ok(Intertwiner { matrix: c, nullity: 1, det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    #[test]
    fn intertwiner_conjugates_the_families() {
        let c = find_intertwiner().unwrap();
        assert_eq!(c.nullity, 1);
        let r = rho_t();
        let p = phi();
        let lift = |e: &Laurent<crate::ring::Rational>| e.map(|c| QuadElem::from(c.clone()));
        for w in ["x", "y", "xYx", "XyxYxyXYxY"] {
            let w = Word::parse(w).unwrap();
            let a = r.evaluate(&w);
            let b = p.evaluate(&w).map(lift);
            assert_eq!(a.mul(&c.matrix), c.matrix.mul(&b));
        }
    }
}
