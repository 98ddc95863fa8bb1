//! Exact dense linear algebra, generic over the scalar tower.
//!
//! Row reduction is the workhorse of the whole crate, so it is organized
//! around controlling coefficient growth rather than raw speed:
//!
//! 1. every row is rescaled so its entries are denominator-free,
//! 2. forward elimination is fraction-free (Bareiss): each 2×2-determinant
//!    update is divided by the previous pivot, an exact ring division, so
//!    entries stay subdeterminant-sized instead of exploding,
//! 3. a back-substitution pass with ordinary field division then produces
//!    the unique reduced row-echelon form.
//!
//! Pivots are chosen per column by smallest support (then lowest row), which
//! in polynomial matrices is the difference between done-in-seconds and
//! never-finishes.

use crate::scalar::Scalar;
use crate::{Error, Result};

/// A dense rectangular matrix over one exact scalar field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<K: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

/// Result of row reduction: the reduced matrix plus its pivot columns.
pub struct Echelon<K: Scalar> {
    pub matrix: Matrix<K>,
    pub pivots: Vec<usize>,
}

impl<K: Scalar> Echelon<K> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl<K: Scalar> Matrix<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = K::one();
        }
        m
    }

    /// Builds from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<K>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(Error::dimension(format!(
                    "row of length {} in a matrix with {} columns",
                    r.len(),
                    ncols
                )));
            }
            data.extend(r);
        }
        Ok(Matrix { rows: nrows, cols: ncols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &K {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut K {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn row_mut(&mut self, i: usize) -> &mut [K] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(K::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    /// Matrix product; errors on an inner-dimension mismatch.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = K::zero();
            for k in 0..self.cols {
                let a = self.at(i, k);
                if !a.is_zero() {
                    acc = acc.add_ref(&a.mul_ref(other.at(k, j)));
                }
            }
            acc
        }))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::dimension("matrix addition shapes differ"));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.at(i, j).add_ref(other.at(i, j))
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::dimension("matrix subtraction shapes differ"));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.at(i, j).sub_ref(other.at(i, j))
        }))
    }

    pub fn scale(&self, k: &K) -> Self {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).mul_ref(k))
    }

    /// Applies the matrix to a coordinate vector.
    pub fn apply(&self, v: &[K]) -> Result<Vec<K>> {
        if v.len() != self.cols {
            return Err(Error::dimension(format!(
                "applying {}x{} to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = K::zero();
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = acc.add_ref(&a.mul_ref(&v[j]));
                    }
                }
                acc
            })
            .collect())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn augment(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::dimension("augment with differing row counts"));
        }
        Ok(Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        }))
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::dimension("stack with differing column counts"));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Unique reduced row-echelon form with pivot columns.
    ///
    /// Forward pass is fraction-free elimination on denominator-cleared
    /// rows; the divisions by the previous pivot are exact in the underlying
    /// ring by the Desnanot–Jacobi subdeterminant identity, which is what
    /// keeps polynomial entries from blowing up. Back-substitution then
    /// normalizes with ordinary field division.
    pub fn rref(&self) -> Echelon<K> {
        let mut m = self.clone();
        for i in 0..m.rows {
            K::clear_row_denominators(m.row_mut(i));
        }
        let mut pivots: Vec<usize> = Vec::new();
        let mut prev = K::one();
        let mut r = 0usize;
        for c in 0..m.cols {
            // Smallest support first; among equals, lowest row.
            let candidate = (r..m.rows)
                .filter(|&i| !m.at(i, c).is_zero())
                .min_by_key(|&i| (m.at(i, c).support_size(), i));
            let Some(p) = candidate else { continue };
            m.swap_rows(r, p);
            let pivot = m.at(r, c).clone();
            for i in r + 1..m.rows {
                let head = m.at(i, c).clone();
                if head.is_zero() {
                    // Still rescale the untouched row so the running pivot
                    // scale stays consistent across the whole submatrix.
                    for j in c + 1..m.cols {
                        if !m.at(i, j).is_zero() {
                            let num = pivot.mul_ref(m.at(i, j));
                            *m.at_mut(i, j) =
                                num.div_ref(&prev).expect("exact fraction-free division");
                        }
                    }
                } else {
                    for j in c + 1..m.cols {
                        let num = pivot
                            .mul_ref(m.at(i, j))
                            .sub_ref(&head.mul_ref(m.at(r, j)));
                        *m.at_mut(i, j) = if num.is_zero() {
                            K::zero()
                        } else {
                            num.div_ref(&prev).expect("exact fraction-free division")
                        };
                    }
                    *m.at_mut(i, c) = K::zero();
                }
            }
            prev = pivot;
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        // Back substitution to the unique reduced form.
        for k in (0..pivots.len()).rev() {
            let pc = pivots[k];
            let pv = m.at(k, pc).clone();
            for j in pc..m.cols {
                if !m.at(k, j).is_zero() {
                    let v = m.at(k, j).div_ref(&pv).expect("pivot is nonzero");
                    *m.at_mut(k, j) = v;
                }
            }
            for i in 0..k {
                let f = m.at(i, pc).clone();
                if f.is_zero() {
                    continue;
                }
                for j in pc..m.cols {
                    let v = m.at(i, j).sub_ref(&f.mul_ref(m.at(k, j)));
                    *m.at_mut(i, j) = v;
                }
            }
        }
        Echelon { matrix: m, pivots }
    }

    /// Basis of the right kernel, one vector per free column, derived from
    /// the reduced row-echelon form.
    pub fn nullspace(&self) -> Vec<Vec<K>> {
        let ech = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !ech.pivots.contains(c)) {
            let mut v = vec![K::zero(); self.cols];
            v[free] = K::one();
            for (ri, &pc) in ech.pivots.iter().enumerate() {
                v[pc] = ech.matrix.at(ri, free).neg_ref();
            }
            basis.push(v);
        }
        basis
    }

    /// Inverse via row reduction of `[self | I]`; errors when not square or
    /// singular.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::dimension("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let ech = self.augment(&Matrix::identity(n))?.rref();
        if ech.rank() < n || ech.pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return Err(Error::domain("matrix is singular"));
        }
        Ok(Matrix::from_fn(n, n, |i, j| ech.matrix.at(i, n + j).clone()))
    }

    pub fn trace(&self) -> Result<K> {
        if self.rows != self.cols {
            return Err(Error::dimension("trace of a non-square matrix"));
        }
        let mut acc = K::zero();
        for i in 0..self.rows {
            acc = acc.add_ref(self.at(i, i));
        }
        Ok(acc)
    }

    /// Characteristic polynomial coefficients `[c_0, …, c_n]` (ascending,
    /// monic: `c_n = 1`) by the Faddeev–LeVerrier recurrence. The only
    /// divisions are by the integers `1..=n`, so the computation is exact
    /// over any scalar in the tower.
    pub fn charpoly(&self) -> Result<Vec<K>> {
        if self.rows != self.cols {
            return Err(Error::dimension(
                "characteristic polynomial of a non-square matrix",
            ));
        }
        let n = self.rows;
        let mut coeffs = vec![K::zero(); n + 1];
        coeffs[n] = K::one();
        let mut aux = Matrix::identity(n);
        for k in 1..=n {
            let mn = self.mul(&aux)?;
            let k_scalar = K::from_rat(crate::scalar::Rat::from_int(k as i64));
            let ck = mn.trace()?.div_ref(&k_scalar)?.neg_ref();
            coeffs[n - k] = ck.clone();
            aux = mn.add(&Matrix::identity(n).scale(&ck))?;
        }
        // Cayley–Hamilton closes the recurrence: the final auxiliary matrix
        // M_n + c_0·I must vanish identically.
        debug_assert!(
            aux.is_zero(),
            "characteristic polynomial recurrence failed to close"
        );
        Ok(coeffs)
    }
}

/// Basis of the joint kernel `∩ ker(A)` over all `A` in `mats`, each square
/// of size `ambient_dim`. The empty intersection is the whole space.
pub fn common_kernel<K: Scalar>(mats: &[Matrix<K>], ambient_dim: usize) -> Result<Vec<Vec<K>>> {
    for m in mats {
        if m.rows() != ambient_dim || m.cols() != ambient_dim {
            return Err(Error::dimension(format!(
                "common kernel over {}-space got a {}x{} matrix",
                ambient_dim,
                m.rows(),
                m.cols()
            )));
        }
    }
    let Some(first) = mats.first() else {
        // Convention: empty family cuts out nothing.
        return Ok((0..ambient_dim)
            .map(|i| {
                let mut v = vec![K::zero(); ambient_dim];
                v[i] = K::one();
                v
            })
            .collect());
    };
    let mut stacked = first.clone();
    for m in &mats[1..] {
        stacked = stacked.stack(m)?;
    }
    Ok(stacked.nullspace())
}

impl<K: Scalar> std::fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
