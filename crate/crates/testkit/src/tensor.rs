//! Direct tensor-contraction bracket evaluation.
//!
//! The reference route for bracket arithmetic: structure constants are read
//! into a dense cube and every bracket is a plain double contraction. No
//! sparse tables, no shortcut for basis vectors.

use nilscope_core::scalar::Rat;

/// Dense structure-constant tensor: `c[(i*n + j)*n + k]` is the coefficient
/// of basis vector `k` in the bracket of basis vectors `i` and `j`.
pub struct DenseTensor {
    pub n: usize,
    c: Vec<Rat>,
}

impl DenseTensor {
    /// Builds the cube by querying a coefficient function on all `(i, j, k)`.
    pub fn from_fn(n: usize, coeff: impl Fn(usize, usize, usize) -> Rat) -> Self {
        let mut c = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c.push(coeff(i, j, k));
                }
            }
        }
        DenseTensor { n, c }
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.c[(i * self.n + j) * self.n + k]
    }

    /// Bracket of two coordinate vectors by full double contraction.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        let mut out = vec![Rat::zero(); self.n];
        for i in 0..self.n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if y[j].is_zero() {
                    continue;
                }
                let scale = &x[i] * &y[j];
                for k in 0..self.n {
                    let c = self.coeff(i, j, k);
                    if !c.is_zero() {
                        out[k] = &out[k] + &(&scale * c);
                    }
                }
            }
        }
        out
    }

    /// The Jacobi defect `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
    pub fn jacobi_defect(&self, x: &[Rat], y: &[Rat], z: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.n];
        for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
            let inner = self.bracket(b, c);
            let outer = self.bracket(a, &inner);
            for k in 0..self.n {
                out[k] = &out[k] + &outer[k];
            }
        }
        out
    }

    /// All basis triples `i < j < k` with a nonzero Jacobi defect.
    pub fn failing_triples(&self) -> Vec<(usize, usize, usize)> {
        let unit = |i: usize| -> Vec<Rat> {
            (0..self.n).map(|a| if a == i { Rat::one() } else { Rat::zero() }).collect()
        };
        let mut bad = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                for k in j + 1..self.n {
                    let d = self.jacobi_defect(&unit(i), &unit(j), &unit(k));
                    if d.iter().any(|v| !v.is_zero()) {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }
}
