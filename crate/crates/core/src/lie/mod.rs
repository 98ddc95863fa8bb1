//! Lie algebras presented by structure constants over an exact scalar field.
//!
//! A [`LieAlgebra`] stores the bracket of each basis pair `(i, j)` with
//! `i < j` as a coefficient vector; antisymmetry is derived, never stored, so
//! a table cannot be antisymmetry-inconsistent by construction. The Jacobi
//! identity is deliberately *not* an invariant of the type: a non-Jacobi
//! table is representable and [`LieAlgebra::jacobi_report`] flags it.
//!
//! [`Subspace`] is a subspace of the coordinate space in reduced row-echelon
//! form (unique representation), used for ideals, central series terms, and
//! quotients.

mod builders;
mod text;

pub use builders::{build_f13, build_h, build_hb, build_hb_quotient, build_heisenberg};
pub use text::{parse_algebra, serialize_algebra, ParsedAlgebra};

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::linalg::{common_kernel, Matrix};
use crate::scalar::{Rat, RatFunc, Scalar};
use crate::{Error, Result};

/// A finite-dimensional algebra with an antisymmetric bilinear bracket,
/// given by structure constants on an ordered basis.
#[derive(Clone, Debug)]
pub struct LieAlgebra<K: Scalar> {
    name: String,
    labels: Vec<String>,
    params: Vec<String>,
    /// Bracket table keyed by `(i, j)` with `i < j`; values have length
    /// `dim` and at least one nonzero component (zero brackets are absent).
    table: BTreeMap<(usize, usize), Vec<K>>,
}

/// One failing Jacobi triple: the defect vector
/// `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]` is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiDefect<K: Scalar> {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub defect: Vec<K>,
}

impl<K: Scalar> PartialEq for LieAlgebra<K> {
    /// Structural equality of the bracket tensors (same dimension, same
    /// coefficients). Names, labels, and parameter lists are metadata and do
    /// not participate.
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.table == other.table
    }
}

impl<K: Scalar> LieAlgebra<K> {
    /// Creates an algebra with the zero bracket on the given basis.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        params: Vec<String>,
    ) -> Result<Self> {
        for (idx, label) in labels.iter().enumerate() {
            if labels[..idx].contains(label) {
                return Err(Error::domain(format!("duplicate basis label `{label}`")));
            }
        }
        for (idx, p) in params.iter().enumerate() {
            if params[..idx].contains(p) {
                return Err(Error::domain(format!("duplicate parameter `{p}`")));
            }
            if labels.contains(p) {
                return Err(Error::domain(format!(
                    "`{p}` is declared both as a parameter and a basis label"
                )));
            }
        }
        Ok(LieAlgebra { name: name.into(), labels, params, table: BTreeMap::new() })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Replaces the name and basis labels (e.g. after a change of basis).
    pub fn renamed(mut self, name: impl Into<String>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim() {
            return Err(Error::dimension(format!(
                "{} labels for a {}-dimensional algebra",
                labels.len(),
                self.dim()
            )));
        }
        let name = name.into();
        let rebuilt = LieAlgebra::<K>::new(name, labels, self.params.clone())?;
        self.name = rebuilt.name;
        self.labels = rebuilt.labels;
        Ok(self)
    }

    /// Defines `[e_i, e_j] = coeffs`. Pairs are normalized to `i < j` with the
    /// sign flipped, so either orientation may be given, but each unordered
    /// pair at most once.
    pub fn set_basis_bracket(&mut self, i: usize, j: usize, coeffs: Vec<K>) -> Result<()> {
        let n = self.dim();
        if i >= n || j >= n {
            return Err(Error::dimension(format!(
                "basis index out of range: ({i}, {j}) in dimension {n}"
            )));
        }
        if coeffs.len() != n {
            return Err(Error::dimension(format!(
                "bracket value of length {} in dimension {n}",
                coeffs.len()
            )));
        }
        let is_zero = coeffs.iter().all(K::is_zero);
        if i == j {
            if is_zero {
                return Ok(());
            }
            return Err(Error::domain(format!(
                "bracket of `{}` with itself declared nonzero",
                self.labels[i]
            )));
        }
        let (key, value) = if i < j {
            ((i, j), coeffs)
        } else {
            ((j, i), coeffs.iter().map(K::neg_ref).collect())
        };
        if self.table.contains_key(&key) {
            return Err(Error::domain(format!(
                "bracket of `{}` and `{}` defined twice",
                self.labels[key.0], self.labels[key.1]
            )));
        }
        if !is_zero {
            self.table.insert(key, value);
        }
        Ok(())
    }

    /// The structure constant `c_{i,j}^k` with antisymmetry applied.
    pub fn structure_coeff(&self, i: usize, j: usize, k: usize) -> K {
        if i == j {
            return K::zero();
        }
        let (key, negate) = if i < j { ((i, j), false) } else { ((j, i), true) };
        match self.table.get(&key) {
            None => K::zero(),
            Some(v) => {
                if negate {
                    v[k].neg_ref()
                } else {
                    v[k].clone()
                }
            }
        }
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<K> {
        let n = self.dim();
        let mut out = vec![K::zero(); n];
        if i == j {
            return out;
        }
        let (key, negate) = if i < j { ((i, j), false) } else { ((j, i), true) };
        if let Some(v) = self.table.get(&key) {
            for (slot, c) in out.iter_mut().zip(v) {
                *slot = if negate { c.neg_ref() } else { c.clone() };
            }
        }
        out
    }

    /// The stored table entries `(i, j, coefficients)` with `i < j`.
    pub fn structure_entries(&self) -> impl Iterator<Item = (usize, usize, &[K])> {
        self.table.iter().map(|(&(i, j), v)| (i, j, v.as_slice()))
    }

    /// Bilinear extension of the bracket to coordinate vectors.
    pub fn bracket(&self, x: &[K], y: &[K]) -> Result<Vec<K>> {
        let n = self.dim();
        if x.len() != n || y.len() != n {
            return Err(Error::dimension(format!(
                "bracket of vectors of lengths {} and {} in dimension {n}",
                x.len(),
                y.len()
            )));
        }
        let mut out = vec![K::zero(); n];
        for (&(i, j), comp) in &self.table {
            // Antisymmetric pairing picks up x_i y_j − x_j y_i per stored pair.
            let coef = x[i].mul_ref(&y[j]).sub_ref(&x[j].mul_ref(&y[i]));
            if coef.is_zero() {
                continue;
            }
            for (slot, c) in out.iter_mut().zip(comp) {
                if !c.is_zero() {
                    *slot = slot.add_ref(&coef.mul_ref(c));
                }
            }
        }
        Ok(out)
    }

    /// Matrix of the left-bracket operator `v ↦ [e_j, v]`.
    fn ad_basis(&self, j: usize) -> Matrix<K> {
        Matrix::from_fn(self.dim(), self.dim(), |r, c| self.structure_coeff(j, c, r))
    }

    /// Matrix of `v ↦ [x, v]` for an arbitrary coordinate vector `x`.
    pub fn ad(&self, x: &[K]) -> Result<Matrix<K>> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::dimension(format!(
                "adjoint of a vector of length {} in dimension {n}",
                x.len()
            )));
        }
        let mut out = Matrix::<K>::zeros(n, n);
        for (&(i, j), comp) in &self.table {
            for (k, c) in comp.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                // [x, e_j] gains x_i·c over the (i,j) entry; [x, e_i] loses x_j·c.
                *out.at_mut(k, j) = out.at(k, j).add_ref(&x[i].mul_ref(c));
                *out.at_mut(k, i) = out.at(k, i).sub_ref(&x[j].mul_ref(c));
            }
        }
        Ok(out)
    }

    /// Checks the Jacobi identity on every basis triple `i < j < k`, in
    /// parallel, and reports the failing triples sorted by `(i, j, k)`.
    pub fn jacobi_report(&self) -> Vec<JacobiDefect<K>> {
        let n = self.dim();
        let mut triples = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    triples.push((i, j, k));
                }
            }
        }
        let mut failures: Vec<JacobiDefect<K>> = triples
            .par_iter()
            .filter_map(|&(i, j, k)| {
                let mut defect = vec![K::zero(); n];
                for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                    let inner = self.basis_bracket(a, b);
                    // [[e_a, e_b], e_c] = Σ_s inner_s [e_s, e_c]
                    for (s, coef) in inner.iter().enumerate() {
                        if coef.is_zero() {
                            continue;
                        }
                        for (slot, e) in
                            defect.iter_mut().zip(self.basis_bracket(s, c))
                        {
                            if !e.is_zero() {
                                *slot = slot.add_ref(&coef.mul_ref(&e));
                            }
                        }
                    }
                }
                if defect.iter().all(K::is_zero) {
                    None
                } else {
                    Some(JacobiDefect { i, j, k, defect })
                }
            })
            .collect();
        failures.sort_by_key(|d| (d.i, d.j, d.k));
        failures
    }

    /// Lower central series `g¹ = [g,g], g^{i+1} = [g, g^i]`, listed until the
    /// first repeated term (the terminal term is included).
    pub fn lower_central_series(&self) -> Vec<Subspace<K>> {
        let n = self.dim();
        let first_span: Vec<Vec<K>> =
            self.table.values().map(|v| v.to_vec()).collect();
        let mut current = Subspace::from_spanning(n, &first_span)
            .expect("table vectors have ambient length");
        let mut series = vec![current.clone()];
        loop {
            let mut spanning = Vec::new();
            for u in current.basis() {
                for a in 0..n {
                    let mut unit = vec![K::zero(); n];
                    unit[a] = K::one();
                    spanning.push(self.bracket(&unit, u).expect("ambient lengths"));
                }
            }
            let next = Subspace::from_spanning(n, &spanning).expect("ambient lengths");
            if next.dim() == current.dim() {
                break;
            }
            series.push(next.clone());
            current = next;
        }
        series
    }

    /// Upper central series `z¹ = center, z^{i+1} = preimage of the center of
    /// g/z^i`, listed until the first repeated term.
    pub fn upper_central_series(&self) -> Vec<Subspace<K>> {
        let n = self.dim();
        let ads: Vec<Matrix<K>> = (0..n).map(|j| self.ad_basis(j)).collect();
        let mut prev = Subspace::zero(n);
        let mut series = Vec::new();
        loop {
            // x lies in the next term iff [e_j, x] reduces to zero modulo the
            // previous term for every j.
            let residual = prev.residual_map();
            let mats: Vec<Matrix<K>> = ads
                .iter()
                .map(|ad| residual.mul(ad).expect("square times square"))
                .collect();
            let kernel =
                common_kernel(&mats, n).expect("matrices are square of ambient size");
            let next = Subspace::from_spanning(n, &kernel).expect("ambient lengths");
            if next.dim() == prev.dim() {
                break;
            }
            series.push(next.clone());
            prev = next;
        }
        series
    }

    /// Whether the lower central series reaches zero.
    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series()
            .last()
            .map_or(true, |term| term.dim() == 0)
    }

    /// Whether `[g, S] ⊆ S`.
    pub fn is_ideal(&self, s: &Subspace<K>) -> bool {
        if s.ambient_dim() != self.dim() {
            return false;
        }
        let n = self.dim();
        s.basis().iter().all(|u| {
            (0..n).all(|a| {
                let mut unit = vec![K::zero(); n];
                unit[a] = K::one();
                let w = self.bracket(&unit, u).expect("ambient lengths");
                s.contains(&w)
            })
        })
    }

    /// The bracket table of `S` written in its echelon basis, defined when
    /// `[S, S] ⊆ S`. Basis vectors that are coordinate vectors keep their
    /// ambient label; synthesized labels `u{r}` name the rest.
    pub fn subalgebra_on(&self, s: &Subspace<K>) -> Result<LieAlgebra<K>> {
        if s.ambient_dim() != self.dim() {
            return Err(Error::dimension(format!(
                "subspace of ambient dimension {} inside a {}-dimensional algebra",
                s.ambient_dim(),
                self.dim()
            )));
        }
        let m = s.dim();
        let labels: Vec<String> = s
            .basis()
            .iter()
            .enumerate()
            .map(|(r, u)| match unit_coordinate(u) {
                Some(c) => self.labels[c].clone(),
                None => format!("u{r}"),
            })
            .collect();
        let mut sub = LieAlgebra::new(
            format!("{}-sub", self.name),
            labels,
            self.params.clone(),
        )?;
        for a in 0..m {
            for b in (a + 1)..m {
                let w = self.bracket(&s.basis()[a], &s.basis()[b])?;
                let coords = s.coordinates(&w).ok_or_else(|| {
                    Error::domain(format!(
                        "not closed under bracket: [{}, {}] leaves the subspace",
                        sub.labels[a], sub.labels[b]
                    ))
                })?;
                sub.set_basis_bracket(a, b, coords)?;
            }
        }
        Ok(sub)
    }

    /// Transports the structure constants to the basis whose vectors are the
    /// columns of `p` (expressed in the current coordinates). Labels are kept;
    /// rename with [`LieAlgebra::renamed`] when they no longer fit.
    pub fn change_basis(&self, p: &Matrix<K>) -> Result<LieAlgebra<K>> {
        let n = self.dim();
        if p.rows() != n || p.cols() != n {
            return Err(Error::dimension(format!(
                "change of basis by a {}x{} matrix in dimension {n}",
                p.rows(),
                p.cols()
            )));
        }
        let inv = p
            .inverse()
            .map_err(|_| Error::domain("basis change matrix is singular"))?;
        let col = |c: usize| -> Vec<K> { (0..n).map(|r| p.at(r, c).clone()).collect() };
        let mut out =
            LieAlgebra::new(self.name.clone(), self.labels.clone(), self.params.clone())?;
        for i in 0..n {
            let fi = col(i);
            for j in (i + 1)..n {
                let w = self.bracket(&fi, &col(j))?;
                out.set_basis_bracket(i, j, inv.apply(&w)?)?;
            }
        }
        Ok(out)
    }

    /// Quotient by an ideal. The quotient basis is the set of non-pivot
    /// coordinates of the ideal's echelon basis (which keep their labels);
    /// the second component projects ambient coordinates onto it.
    pub fn quotient(&self, ideal: &Subspace<K>) -> Result<(LieAlgebra<K>, Matrix<K>)> {
        if ideal.ambient_dim() != self.dim() {
            return Err(Error::dimension(format!(
                "subspace of ambient dimension {} inside a {}-dimensional algebra",
                ideal.ambient_dim(),
                self.dim()
            )));
        }
        if !self.is_ideal(ideal) {
            return Err(Error::domain("subspace is not an ideal"));
        }
        let n = self.dim();
        let complement: Vec<usize> =
            (0..n).filter(|c| !ideal.pivots().contains(c)).collect();
        let m = complement.len();
        // Row r of the projection reads off coordinate complement[r] of the
        // reduction modulo the ideal.
        let mut proj = Matrix::zeros(m, n);
        for (r, &c) in complement.iter().enumerate() {
            *proj.at_mut(r, c) = K::one();
            for (l, &piv) in ideal.pivots().iter().enumerate() {
                *proj.at_mut(r, piv) = ideal.basis()[l][c].neg_ref();
            }
        }
        let labels: Vec<String> =
            complement.iter().map(|&c| self.labels[c].clone()).collect();
        let mut quo = LieAlgebra::new(
            format!("{}-quo", self.name),
            labels,
            self.params.clone(),
        )?;
        for a in 0..m {
            for b in (a + 1)..m {
                let w = self.basis_bracket(complement[a], complement[b]);
                quo.set_basis_bracket(a, b, proj.apply(&w)?)?;
            }
        }
        Ok((quo, proj))
    }
}

impl LieAlgebra<Rat> {
    /// Reinterprets a rational table over a larger scalar field, declaring
    /// the given parameter names (e.g. before bracketing with a parameter-
    /// dependent vector).
    pub fn extend_scalars<L: Scalar>(&self, params: Vec<String>) -> Result<LieAlgebra<L>> {
        let mut out = LieAlgebra::new(self.name.clone(), self.labels.clone(), params)?;
        for (&(i, j), v) in &self.table {
            out.set_basis_bracket(i, j, v.iter().map(|c| L::from_rat(c.clone())).collect())?;
        }
        Ok(out)
    }
}

impl LieAlgebra<RatFunc> {
    /// Evaluates every structure constant at the given parameter values,
    /// producing a rational table. Fails if any entry's denominator vanishes
    /// there, or if a parameter is left unassigned.
    pub fn specialize(&self, assignment: &BTreeMap<String, Rat>) -> Result<LieAlgebra<Rat>> {
        let mut out = LieAlgebra::new(self.name.clone(), self.labels.clone(), Vec::new())?;
        for (&(i, j), v) in &self.table {
            let values: Result<Vec<Rat>> = v.iter().map(|c| c.eval(assignment)).collect();
            out.set_basis_bracket(i, j, values?)?;
        }
        Ok(out)
    }
}

/// If `u` is a scalar multiple of a coordinate vector with coefficient 1,
/// returns that coordinate (used to inherit labels).
fn unit_coordinate<K: Scalar>(u: &[K]) -> Option<usize> {
    let mut found = None;
    for (c, v) in u.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        if found.is_some() || *v != K::one() {
            return None;
        }
        found = Some(c);
    }
    found
}

/// A subspace of the coordinate space `K^n`, stored as a reduced row-echelon
/// basis (unique per subspace).
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<K: Scalar> {
    ambient_dim: usize,
    basis: Vec<Vec<K>>,
    pivots: Vec<usize>,
}

impl<K: Scalar> Subspace<K> {
    /// The span of the given vectors.
    pub fn from_spanning(ambient_dim: usize, vectors: &[Vec<K>]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::dimension(format!(
                    "spanning vector of length {} in ambient dimension {ambient_dim}",
                    v.len()
                )));
            }
        }
        if vectors.is_empty() {
            return Ok(Subspace::zero(ambient_dim));
        }
        let echelon = Matrix::from_rows(vectors.to_vec())?.rref();
        let rank = echelon.rank();
        let basis = (0..rank).map(|r| echelon.matrix.row(r).to_vec()).collect();
        Ok(Subspace { ambient_dim, basis, pivots: echelon.pivots })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|r| {
                let mut v = vec![K::zero(); ambient_dim];
                v[r] = K::one();
                v
            })
            .collect();
        Subspace { ambient_dim, basis, pivots: (0..ambient_dim).collect() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<K>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The canonical representative of `v` modulo this subspace (zero iff
    /// `v` belongs to it).
    pub fn reduce(&self, v: &[K]) -> Vec<K> {
        let mut out = v.to_vec();
        for (u, &p) in self.basis.iter().zip(&self.pivots) {
            let coeff = out[p].clone();
            if coeff.is_zero() {
                continue;
            }
            for (slot, b) in out.iter_mut().zip(u) {
                if !b.is_zero() {
                    *slot = slot.sub_ref(&coeff.mul_ref(b));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[K]) -> bool {
        v.len() == self.ambient_dim && self.reduce(v).iter().all(K::is_zero)
    }

    pub fn contains_space(&self, other: &Subspace<K>) -> bool {
        other.basis.iter().all(|u| self.contains(u))
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[K]) -> Option<Vec<K>> {
        if v.len() != self.ambient_dim {
            return None;
        }
        let coords: Vec<K> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut remainder = v.to_vec();
        for (u, coeff) in self.basis.iter().zip(&coords) {
            if coeff.is_zero() {
                continue;
            }
            for (slot, b) in remainder.iter_mut().zip(u) {
                if !b.is_zero() {
                    *slot = slot.sub_ref(&coeff.mul_ref(b));
                }
            }
        }
        if remainder.iter().all(K::is_zero) {
            Some(coords)
        } else {
            None
        }
    }

    /// The matrix `R` with `R·v = reduce(v)`; its kernel is exactly this
    /// subspace. Used to compute joint kernels modulo a subspace.
    pub fn residual_map(&self) -> Matrix<K> {
        let n = self.ambient_dim;
        let mut r = Matrix::identity(n);
        // R = I − Σ_l u_l·(e_{p_l})ᵀ; pivot columns of other basis vectors
        // vanish in echelon form, so each column is touched at most once.
        for (u, &p) in self.basis.iter().zip(&self.pivots) {
            for (row, b) in u.iter().enumerate() {
                if row != p && !b.is_zero() {
                    *r.at_mut(row, p) = b.neg_ref();
                }
            }
            *r.at_mut(p, p) = K::zero();
        }
        r
    }
}
