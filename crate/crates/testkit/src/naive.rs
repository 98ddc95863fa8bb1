//! Textbook Gaussian elimination over `num::BigRational`.
//!
//! This is the reference route for exact linear algebra: first nonzero
//! pivot, explicit field division at every step, no fraction-free tricks,
//! no pivot-size heuristics. Slow and simple on purpose.

use num::BigRational;
use num::{One, Zero};

use nilscope_core::scalar::Rat;

/// Converts a main-crate rational into the reference representation.
pub fn from_rat(r: &Rat) -> BigRational {
    BigRational::new(r.numer().clone(), r.denom().clone())
}

/// Converts a reference rational back into the main-crate type.
pub fn to_rat(r: &BigRational) -> Rat {
    Rat::new(r.numer().clone(), r.denom().clone()).expect("nonzero denominator")
}

/// Reduced row-echelon form with the list of pivot columns.
pub fn rref(rows: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = BigRational::one() / m[r][c].clone();
        for v in &mut m[r] {
            *v *= inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (m, pivots)
}

/// Rank by naive elimination.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    rref(rows).1.len()
}

/// Basis of the right kernel, one vector per free column.
pub fn nullspace(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let (m, pivots) = rref(rows);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[ri][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Convenience: rank of a matrix given in main-crate rationals.
pub fn rank_of_rat_rows(rows: &[Vec<Rat>]) -> usize {
    let converted: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(from_rat).collect()).collect();
    rank(&converted)
}

/// Convenience: kernel basis for a matrix given in main-crate rationals,
/// returned in main-crate rationals.
pub fn nullspace_of_rat_rows(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let converted: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(from_rat).collect()).collect();
    nullspace(&converted, ncols)
        .into_iter()
        .map(|v| v.iter().map(to_rat).collect())
        .collect()
}
