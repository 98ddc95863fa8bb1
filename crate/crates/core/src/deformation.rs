//! One-parameter linear deformations of a bracket along a derivation of a
//! distinguished subalgebra.
//!
//! Given a decomposition `L = ⟨x0⟩ ⊕ ⟨x1⟩ ⊕ H` and a derivation `D` of the
//! subalgebra on `H`, the deformed bracket keeps `[x0, x1]`, `[x0, h]`, and
//! `[h, h′]` unchanged and sets `[x1, h]_t = [x1, h] + t·D(h)`, extended
//! bilinearly. The construction yields tensor entries that are polynomials
//! of degree ≤ 1 in the parameter, and specializing the parameter to zero
//! recovers the original algebra exactly.

use crate::lie::{JacobiDefect, LieAlgebra, Subspace};
use crate::linalg::Matrix;
use crate::scalar::{Rat, RatFunc, Scalar};
use crate::{derivations, Error, Result};

/// A bracket family over ℚ(t) with polynomial entries of degree ≤ 1,
/// anchored to the undeformed algebra at t = 0.
#[derive(Clone, Debug)]
pub struct DeformationFamily {
    base: LieAlgebra<Rat>,
    param: String,
    family: LieAlgebra<RatFunc>,
}

impl DeformationFamily {
    /// The undeformed algebra.
    pub fn base(&self) -> &LieAlgebra<Rat> {
        &self.base
    }

    /// Name of the deformation parameter.
    pub fn param(&self) -> &str {
        &self.param
    }

    /// The parametrized algebra over ℚ(t).
    pub fn family(&self) -> &LieAlgebra<RatFunc> {
        &self.family
    }

    /// Evaluates the parameter at a rational value.
    pub fn specialize(&self, value: &Rat) -> Result<LieAlgebra<Rat>> {
        let mut assignment = std::collections::BTreeMap::new();
        assignment.insert(self.param.clone(), value.clone());
        self.family.specialize(&assignment)
    }

    /// Wraps an explicitly given one-parameter table as a deformation
    /// family, anchoring the base at parameter value 0.
    ///
    /// The table must be declared over exactly the named parameter, and
    /// every coefficient must be a polynomial of degree ≤ 1 in it — the
    /// shape every construction in this module produces.
    pub fn from_family(family: LieAlgebra<RatFunc>, param: &str) -> Result<Self> {
        if family.params() != [param] {
            return Err(Error::domain(format!(
                "the table is declared over ({}), not over the single parameter {param}",
                family.params().join(", ")
            )));
        }
        for (i, j, entry) in family.structure_entries() {
            for (k, value) in entry.iter().enumerate() {
                if !value.is_polynomial() || value.numer().degree_in(param) > 1 {
                    return Err(Error::domain(format!(
                        "entry ({i},{j})→{k} is not linear in {param}"
                    )));
                }
            }
        }
        let mut at_zero = std::collections::BTreeMap::new();
        at_zero.insert(param.to_string(), Rat::zero());
        let base = family.specialize(&at_zero)?;
        Ok(DeformationFamily {
            base,
            param: param.to_string(),
            family,
        })
    }
}

/// Builds the linear deformation of `base` along `d`, checking that `d` is a
/// derivation of the subalgebra on `ideal` first.
///
/// `x0` and `x1` are ambient vectors; `ideal` must complement them to a
/// direct-sum decomposition of the whole space (its bracket-closure is
/// checked when the subalgebra is formed). `d` acts in the coordinates of
/// `ideal`'s stored basis.
pub fn deform_by_ideal_derivation(
    base: &LieAlgebra<Rat>,
    x0: &[Rat],
    x1: &[Rat],
    ideal: &Subspace<Rat>,
    d: &Matrix<Rat>,
    param: &str,
) -> Result<DeformationFamily> {
    let sub = base.subalgebra_on(ideal)?;
    if let Some((i, j)) = derivations::leibniz_failure(&sub, d)? {
        return Err(Error::domain(format!(
            "the map is not a derivation of the ideal: Leibniz fails on basis pair ({i}, {j})"
        )));
    }
    deform_unchecked(base, x0, x1, ideal, d, param)
}

/// Builds the same family as [`deform_by_ideal_derivation`] without checking
/// that `d` is a derivation.
///
/// Structural requirements (dimensions, direct sum, degree bound, anchoring
/// at 0) are still enforced. This exists so that invalid inputs can be
/// probed: [`verify_family_jacobi`] on the result reports exactly which
/// Jacobi triples a non-derivation breaks.
pub fn deform_unchecked(
    base: &LieAlgebra<Rat>,
    x0: &[Rat],
    x1: &[Rat],
    ideal: &Subspace<Rat>,
    d: &Matrix<Rat>,
    param: &str,
) -> Result<DeformationFamily> {
    let n = base.dim();
    if x0.len() != n || x1.len() != n || ideal.ambient_dim() != n {
        return Err(Error::dimension(format!(
            "decomposition pieces must live in dimension {n}"
        )));
    }
    if 2 + ideal.dim() != n {
        return Err(Error::dimension(format!(
            "x0, x1, and a {}-dimensional ideal cannot decompose a {n}-dimensional space",
            ideal.dim()
        )));
    }
    let h_dim = ideal.dim();
    if d.rows() != h_dim || d.cols() != h_dim {
        return Err(Error::dimension(format!(
            "{}×{} map on a {h_dim}-dimensional ideal",
            d.rows(),
            d.cols()
        )));
    }

    // Columns x0 | x1 | ideal basis; invertibility is the direct-sum check.
    let p = Matrix::from_fn(n, n, |r, c| match c {
        0 => x0[r].clone(),
        1 => x1[r].clone(),
        _ => ideal.basis()[c - 2][r].clone(),
    });
    let p_inv = p
        .inverse()
        .map_err(|_| Error::domain("x0, x1, and the ideal do not form a direct-sum decomposition"))?;

    // Component of each basis vector along x1 and inside the ideal.
    let x1_coef: Vec<Rat> = (0..n).map(|i| p_inv.at(1, i).clone()).collect();
    let ideal_image: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            // D applied to the ideal component, pushed back to ambient
            // coordinates.
            let coords: Vec<Rat> = (2..n).map(|r| p_inv.at(r, i).clone()).collect();
            let mapped = d.apply(&coords).expect("size checked above");
            let mut ambient = vec![Rat::zero(); n];
            for (l, coeff) in mapped.iter().enumerate() {
                if !coeff.is_zero() {
                    for k in 0..n {
                        ambient[k] = ambient[k].add_ref(&coeff.mul_ref(&ideal.basis()[l][k]));
                    }
                }
            }
            ambient
        })
        .collect();

    let t = RatFunc::var(param);
    let mut family = LieAlgebra::<RatFunc>::new(
        base.name().to_string(),
        base.labels().to_vec(),
        vec![param.to_string()],
    )?;
    for i in 0..n {
        for j in i + 1..n {
            let base_part = base.basis_bracket(i, j);
            let mut entry: Vec<RatFunc> = base_part.into_iter().map(RatFunc::from_rat).collect();
            for k in 0..n {
                let term = x1_coef[i]
                    .mul_ref(&ideal_image[j][k])
                    .sub_ref(&x1_coef[j].mul_ref(&ideal_image[i][k]));
                if !term.is_zero() {
                    entry[k] = entry[k].add_ref(&t.mul_ref(&RatFunc::from_rat(term)));
                }
            }
            if entry.iter().any(|e| !e.is_zero()) {
                family.set_basis_bracket(i, j, entry)?;
            }
        }
    }

    // Construction invariants: polynomial entries of degree ≤ 1 in the
    // parameter, and the family collapses onto the base at 0.
    for (i, j, entry) in family.structure_entries() {
        for (k, value) in entry.iter().enumerate() {
            if !value.is_polynomial() || value.numer().degree_in(param) > 1 {
                return Err(Error::domain(format!(
                    "entry ({i},{j})→{k} is not linear in {param}"
                )));
            }
        }
    }
    let mut at_zero = std::collections::BTreeMap::new();
    at_zero.insert(param.to_string(), Rat::zero());
    if family.specialize(&at_zero)? != *base {
        return Err(Error::domain(format!(
            "family does not specialize to the base algebra at {param} = 0"
        )));
    }

    Ok(DeformationFamily {
        base: base.clone(),
        param: param.to_string(),
        family,
    })
}

/// Checks the Jacobi identity of the family symbolically.
///
/// An empty report means every triple's defect is the zero polynomial of
/// ℚ[t]; otherwise the report lists the failing triples with their exact
/// polynomial defects, in lexicographic order.
pub fn verify_family_jacobi(family: &DeformationFamily) -> Vec<JacobiDefect<RatFunc>> {
    family.family.jacobi_report()
}

/// Convenience: the standard deformation data of the 13-dimensional example
/// — `x0 = e0`, `x1 = e1`, the ideal spanned by `e2..e12`, and the shift
/// derivation `e2↦e9, e3↦e10, e4↦e11, e5↦e12`.
pub fn build_f13_family() -> DeformationFamily {
    let base = crate::lie::build_f13();
    let n = base.dim();
    let unit = |at: usize| {
        let mut v = vec![Rat::zero(); n];
        v[at] = Rat::one();
        v
    };
    let units: Vec<Vec<Rat>> = (2..n).map(unit).collect();
    let ideal = Subspace::from_spanning(n, &units).expect("unit vectors are independent");
    let mut d = Matrix::<Rat>::zeros(n - 2, n - 2);
    // In ideal coordinates e2 is index 0, so e_s ↦ e_{s+7} reads as below.
    for (src, dst) in [(0usize, 7usize), (1, 8), (2, 9), (3, 10)] {
        *d.at_mut(dst, src) = Rat::one();
    }
    deform_by_ideal_derivation(&base, &unit(0), &unit(1), &ideal, &d, "t")
        .expect("the standard deformation data is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::build_f13;

    fn unit(n: usize, at: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); n];
        v[at] = Rat::one();
        v
    }

    fn standard_ideal(n: usize) -> Subspace<Rat> {
        let units: Vec<Vec<Rat>> = (2..n).map(|i| unit(n, i)).collect();
        Subspace::from_spanning(n, &units).unwrap()
    }

    fn shift_map(h_dim: usize) -> Matrix<Rat> {
        let mut d = Matrix::<Rat>::zeros(h_dim, h_dim);
        for (src, dst) in [(0usize, 7usize), (1, 8), (2, 9), (3, 10)] {
            *d.at_mut(dst, src) = Rat::one();
        }
        d
    }

    #[test]
    fn bracket_of_e1_e2_gains_a_t_multiple_of_e9() {
        let family = build_f13_family();
        let entry = family.family().basis_bracket(1, 2);
        let t = RatFunc::var("t");
        for (k, value) in entry.iter().enumerate() {
            let expected = match k {
                4 => RatFunc::one(),
                9 => t.clone(),
                _ => RatFunc::zero(),
            };
            assert_eq!(value, &expected, "coefficient of e{k} in [e1,e2]_t");
        }
    }

    #[test]
    fn specializing_at_zero_recovers_the_base() {
        let family = build_f13_family();
        let at_zero = family.specialize(&Rat::zero()).unwrap();
        assert_eq!(at_zero, build_f13());
    }

    #[test]
    fn zero_derivation_gives_the_constant_family() {
        let base = build_f13();
        let n = base.dim();
        let d = Matrix::<Rat>::zeros(n - 2, n - 2);
        let family = deform_by_ideal_derivation(
            &base,
            &unit(n, 0),
            &unit(n, 1),
            &standard_ideal(n),
            &d,
            "t",
        )
        .unwrap();
        for value in [Rat::zero(), Rat::from_int(5), Rat::from_pair(-3, 7).unwrap()] {
            assert_eq!(family.specialize(&value).unwrap(), base);
        }
    }

    #[test]
    fn entries_are_linear_in_the_parameter() {
        let family = build_f13_family();
        for (_, _, entry) in family.family().structure_entries() {
            for value in entry {
                assert!(value.is_polynomial());
                assert!(value.numer().degree_in("t") <= 1);
            }
        }
    }

    #[test]
    fn corrupted_shift_map_is_rejected_with_a_witness_pair() {
        let base = build_f13();
        let n = base.dim();
        // e2 ↦ e8 instead of e9 breaks the Leibniz identity on the ideal.
        let mut d = Matrix::<Rat>::zeros(n - 2, n - 2);
        for (src, dst) in [(0usize, 6usize), (1, 8), (2, 9), (3, 10)] {
            *d.at_mut(dst, src) = Rat::one();
        }
        let err = deform_by_ideal_derivation(
            &base,
            &unit(n, 0),
            &unit(n, 1),
            &standard_ideal(n),
            &d,
            "t",
        )
        .unwrap_err();
        let message = err.to_string();
        assert!(
            message.contains("not a derivation"),
            "unexpected error: {message}"
        );
    }

    #[test]
    fn corrupted_family_fails_jacobi_symbolically() {
        let base = build_f13();
        let n = base.dim();
        let mut d = Matrix::<Rat>::zeros(n - 2, n - 2);
        for (src, dst) in [(0usize, 6usize), (1, 8), (2, 9), (3, 10)] {
            *d.at_mut(dst, src) = Rat::one();
        }
        let family = deform_unchecked(
            &base,
            &unit(n, 0),
            &unit(n, 1),
            &standard_ideal(n),
            &d,
            "t",
        )
        .unwrap();
        let report = verify_family_jacobi(&family);
        assert!(!report.is_empty());
        // Every recorded defect must genuinely involve the parameter: the
        // undeformed part satisfies Jacobi on its own.
        for failure in &report {
            assert!(failure
                .defect
                .iter()
                .any(|v| !v.is_zero() && v.numer().degree_in("t") >= 1));
        }
    }

    #[test]
    fn non_direct_sum_decomposition_is_rejected() {
        let base = build_f13();
        let n = base.dim();
        // x1 lies inside the ideal: the columns cannot be independent.
        let err = deform_by_ideal_derivation(
            &base,
            &unit(n, 0),
            &unit(n, 2),
            &standard_ideal(n),
            &shift_map(n - 2),
            "t",
        )
        .unwrap_err();
        assert!(err.to_string().contains("direct-sum"));
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let base = build_f13();
        let n = base.dim();
        let small = Matrix::<Rat>::zeros(3, 3);
        assert!(deform_by_ideal_derivation(
            &base,
            &unit(n, 0),
            &unit(n, 1),
            &standard_ideal(n),
            &small,
            "t",
        )
        .is_err());
        let short_ideal =
            Subspace::from_spanning(n, &(3..n).map(|i| unit(n, i)).collect::<Vec<_>>()).unwrap();
        assert!(deform_by_ideal_derivation(
            &base,
            &unit(n, 0),
            &unit(n, 1),
            &short_ideal,
            &Matrix::<Rat>::zeros(n - 3, n - 3),
            "t",
        )
        .is_err());
    }

    #[test]
    fn family_stays_filiform_symbolically_and_at_sample_values() {
        let family = build_f13_family();
        let expected: Vec<usize> = (0..=11).rev().collect();
        let symbolic: Vec<usize> = family
            .family()
            .lower_central_series()
            .iter()
            .map(|s| s.dim())
            .collect();
        assert_eq!(symbolic, expected, "descending chain of iterated brackets");
        for value in [0i64, 1, -1, 5] {
            let at = family.specialize(&Rat::from_int(value)).unwrap();
            assert!(at.jacobi_report().is_empty());
            let dims: Vec<usize> =
                at.lower_central_series().iter().map(|s| s.dim()).collect();
            assert_eq!(dims, expected, "at parameter value {value}");
        }
    }

    #[test]
    fn a_written_out_table_rebuilds_the_same_family() {
        let built = build_f13_family();
        let wrapped =
            DeformationFamily::from_family(built.family().clone(), "t").unwrap();
        assert_eq!(wrapped.base(), built.base());
        assert_eq!(wrapped.family(), built.family());
        assert_eq!(wrapped.param(), "t");

        let err =
            DeformationFamily::from_family(built.family().clone(), "s").unwrap_err();
        assert!(err.to_string().contains("not over the single parameter"));

        // A quadratic entry has no anchored linear reading.
        let mut quad = LieAlgebra::<RatFunc>::new(
            "quad",
            vec!["x".into(), "y".into(), "z".into()],
            vec!["t".into()],
        )
        .unwrap();
        let t = RatFunc::var("t");
        quad.set_basis_bracket(
            0,
            1,
            vec![RatFunc::zero(), RatFunc::zero(), t.mul_ref(&t)],
        )
        .unwrap();
        let err = DeformationFamily::from_family(quad, "t").unwrap_err();
        assert!(err.to_string().contains("not linear"));
    }

    #[test]
    fn family_serializes_with_the_parameter_in_the_header() {
        let family = build_f13_family();
        let parsed = crate::lie::ParsedAlgebra::Parametric(family.family().clone());
        let text = crate::lie::serialize_algebra(&parsed).unwrap();
        assert!(text.starts_with("algebra f13 over Q(t)"));
        assert!(text.contains("[e1,e2] = e4 + (t) * e9"), "got:\n{text}");
        // Round trip: the serialized family parses back to the same table.
        match crate::lie::parse_algebra(&text).unwrap() {
            crate::lie::ParsedAlgebra::Parametric(back) => {
                assert_eq!(back, *family.family())
            }
            crate::lie::ParsedAlgebra::Rational(_) => panic!("parameter lost in round trip"),
        }
    }
}
