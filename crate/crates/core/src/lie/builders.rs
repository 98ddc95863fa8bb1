//! Built-in constructors for the algebras the toolkit ships with.
//!
//! `build_f13` enters the 13-dimensional filiform table directly. The others
//! are *derived* from it by the generic operations (subalgebra, scalar
//! extension, change of basis, quotient) rather than hand-entered, so the
//! shipped data stays a single source of truth.

use super::{LieAlgebra, Subspace};
use crate::linalg::Matrix;
use crate::scalar::{Rat, RatFunc, Scalar};

fn rat(n: i64, d: i64) -> Rat {
    Rat::from_pair(n, d).expect("nonzero denominator")
}

/// The 13-dimensional filiform algebra on basis e0…e12.
pub fn build_f13() -> LieAlgebra<Rat> {
    let labels = (0..13).map(|i| format!("e{i}")).collect();
    let mut f = LieAlgebra::new("f13", labels, Vec::new())
        .expect("distinct labels");
    for i in 1..=11usize {
        let mut v = vec![Rat::zero(); 13];
        v[i + 1] = Rat::one();
        f.set_basis_bracket(0, i, v).expect("fresh pair");
    }
    // Sporadic brackets: ((i, j), [(k, num, den), …]).
    let entries: &[((usize, usize), &[(usize, i64, i64)])] = &[
        ((1, 2), &[(4, 1, 1)]),
        ((1, 3), &[(5, 1, 1)]),
        ((1, 4), &[(6, 9, 10), (8, -1, 1)]),
        ((1, 5), &[(7, 4, 5), (9, -2, 1)]),
        ((1, 6), &[(8, 5, 7), (10, -335, 126), (12, 22105, 15246)]),
        ((1, 7), &[(9, 9, 14), (11, -125, 42)]),
        ((1, 8), &[(10, 7, 12), (12, -4421, 1452)]),
        ((1, 9), &[(11, 8, 15)]),
        ((1, 10), &[(12, 27, 55)]),
        ((2, 3), &[(6, 1, 10), (8, 1, 1)]),
        ((2, 4), &[(7, 1, 10), (9, 1, 1)]),
        ((2, 5), &[(8, 3, 35), (10, 83, 126), (12, -22105, 15246)]),
        ((2, 6), &[(9, 1, 14), (11, 20, 63)]),
        ((2, 7), &[(10, 5, 84), (12, 697, 10164)]),
        ((2, 8), &[(11, 1, 20)]),
        ((2, 9), &[(12, 7, 165)]),
        ((3, 4), &[(8, 1, 70), (10, 43, 126), (12, 22105, 15246)]),
        ((3, 5), &[(9, 1, 70), (11, 43, 126)]),
        ((3, 6), &[(10, 1, 84), (12, 7589, 30492)]),
        ((3, 7), &[(11, 1, 105)]),
        ((3, 8), &[(12, 1, 132)]),
        ((4, 5), &[(10, 1, 420), (12, 313, 3388)]),
        ((4, 6), &[(11, 1, 420)]),
        ((4, 7), &[(12, 3, 1540)]),
        ((5, 6), &[(12, 1, 2310)]),
    ];
    for &((i, j), comps) in entries {
        let mut v = vec![Rat::zero(); 13];
        for &(k, num, den) in comps {
            v[k] = rat(num, den);
        }
        f.set_basis_bracket(i, j, v).expect("fresh pair");
    }
    f
}

/// The 3-dimensional Heisenberg algebra: `[x, y] = z`.
pub fn build_heisenberg() -> LieAlgebra<Rat> {
    let labels = vec!["x".to_string(), "y".to_string(), "z".to_string()];
    let mut h = LieAlgebra::new("heisenberg", labels, Vec::new())
        .expect("distinct labels");
    let mut v = vec![Rat::zero(); 3];
    v[2] = Rat::one();
    h.set_basis_bracket(0, 1, v).expect("fresh pair");
    h
}

/// The codimension-1 ideal ⟨e1,…,e12⟩ of `build_f13`, on basis e1…e12.
pub fn build_h() -> LieAlgebra<Rat> {
    let f = build_f13();
    let spanning: Vec<Vec<Rat>> = (1..13)
        .map(|i| {
            let mut v = vec![Rat::zero(); 13];
            v[i] = Rat::one();
            v
        })
        .collect();
    let s = Subspace::from_spanning(13, &spanning).expect("ambient length");
    debug_assert!(f.is_ideal(&s));
    let labels = (1..13).map(|i| format!("e{i}")).collect();
    f.subalgebra_on(&s)
        .expect("an ideal is closed under bracket")
        .renamed("h", labels)
        .expect("12 labels")
}

/// The generic codimension-1 ideal ⟨e0 + b·e1, e2,…,e12⟩ of `build_f13`
/// over ℚ(b), written in its adapted basis f0 = e0 + b·e1, f1 = e2,
/// f_{i+1} = [f0, f_i]. Every structure constant is a polynomial in b.
pub fn build_hb() -> LieAlgebra<RatFunc> {
    let fb: LieAlgebra<RatFunc> = build_f13()
        .extend_scalars(vec!["b".to_string()])
        .expect("label/parameter names are distinct");
    let b = RatFunc::var("b");
    let mut spanning = Vec::new();
    let mut first = vec![RatFunc::zero(); 13];
    first[0] = RatFunc::one();
    first[1] = b;
    spanning.push(first);
    for i in 2..13 {
        let mut v = vec![RatFunc::zero(); 13];
        v[i] = RatFunc::one();
        spanning.push(v);
    }
    let s = Subspace::from_spanning(13, &spanning).expect("ambient length");
    debug_assert!(fb.is_ideal(&s));
    let ideal = fb
        .subalgebra_on(&s)
        .expect("an ideal is closed under bracket");

    // Adapted basis, recomputed by bracketing rather than hand-entered.
    let n = ideal.dim();
    let mut columns: Vec<Vec<RatFunc>> = Vec::with_capacity(n);
    let mut f0 = vec![RatFunc::zero(); n];
    f0[0] = RatFunc::one();
    let mut f1 = vec![RatFunc::zero(); n];
    f1[1] = RatFunc::one();
    columns.push(f0.clone());
    columns.push(f1);
    for _ in 2..n {
        let prev = columns.last().expect("nonempty");
        let next = ideal.bracket(&f0, prev).expect("ambient length");
        columns.push(next);
    }
    let p = Matrix::from_fn(n, n, |r, c| columns[c][r].clone());
    let labels = (0..n).map(|i| format!("f{i}")).collect();
    ideal
        .change_basis(&p)
        .expect("adapted basis is unitriangular")
        .renamed("hb", labels)
        .expect("12 labels")
}

/// The 8-dimensional quotient of `build_hb` by the seventh term of its
/// lower central series, on basis f0…f7.
pub fn build_hb_quotient() -> LieAlgebra<RatFunc> {
    let hb = build_hb();
    let series = hb.lower_central_series();
    let seventh = &series[6];
    assert_eq!(seventh.dim(), 4, "seventh lower-central term has dimension 4");
    let (quo, _) = hb
        .quotient(seventh)
        .expect("central series terms are ideals");
    let labels = (0..8).map(|i| format!("f{i}")).collect();
    quo.renamed("hb_quotient", labels).expect("8 labels")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::MultiPoly as MultiP;

    fn unit(n: usize, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); n];
        v[i] = Rat::one();
        v
    }

    #[test]
    fn f13_table_goldens() {
        let f = build_f13();
        assert_eq!(f.dim(), 13);
        // [e0, e5] = e6
        assert_eq!(f.basis_bracket(0, 5), unit(13, 6));
        // [e5, e6] = 1/2310 e12
        let mut expected = vec![Rat::zero(); 13];
        expected[12] = rat(1, 2310);
        assert_eq!(f.basis_bracket(5, 6), expected);
        // [e6, e7] = 0 (absent from the table)
        assert_eq!(f.basis_bracket(6, 7), vec![Rat::zero(); 13]);
        // [e2, e9] = 7/165 e12
        let mut expected = vec![Rat::zero(); 13];
        expected[12] = rat(7, 165);
        assert_eq!(f.basis_bracket(2, 9), expected);
        assert_eq!(f.structure_entries().count(), 11 + 25);
    }

    #[test]
    fn f13_satisfies_jacobi_and_is_filiform() {
        let f = build_f13();
        assert!(f.jacobi_report().is_empty());
        let dims: Vec<usize> =
            f.lower_central_series().iter().map(Subspace::dim).collect();
        assert_eq!(dims, (0..=11).rev().collect::<Vec<_>>());
    }

    #[test]
    fn h_is_a_12_dimensional_ideal_table() {
        let h = build_h();
        assert_eq!(h.dim(), 12);
        assert_eq!(h.labels()[0], "e1");
        assert!(h.jacobi_report().is_empty());
        // In h's own indexing, e1 is basis 0 and e10 is basis 9:
        // [e1, e10] = 27/55 e12 (basis 11).
        let mut expected = vec![Rat::zero(); 12];
        expected[11] = rat(27, 55);
        assert_eq!(h.basis_bracket(0, 9), expected);
        let ucs: Vec<usize> =
            h.upper_central_series().iter().map(Subspace::dim).collect();
        assert_eq!(ucs, vec![2, 4, 6, 8, 10, 12]);
    }

    #[test]
    fn hb_adapted_basis_vectors_match_recomputation() {
        let hb = build_hb();
        assert_eq!(hb.dim(), 12);
        assert!(hb.jacobi_report().is_empty());
        let dims: Vec<usize> =
            hb.lower_central_series().iter().map(Subspace::dim).collect();
        assert_eq!(dims, (0..=10).rev().collect::<Vec<_>>());
        // [f0, f_i] = f_{i+1} holds by construction for 1 ≤ i ≤ 10,
        // and [f0, f11] = 0 closes the chain.
        for i in 1..=10usize {
            let mut expected = vec![RatFunc::zero(); 12];
            expected[i + 1] = RatFunc::one();
            assert_eq!(hb.basis_bracket(0, i), expected, "[f0, f{i}]");
        }
        assert_eq!(hb.basis_bracket(0, 11), vec![RatFunc::zero(); 12]);
    }

    #[test]
    fn hb_quotient_table_matches_the_display() {
        let quo = build_hb_quotient();
        assert_eq!(quo.dim(), 8);
        assert!(quo.jacobi_report().is_empty());
        let b = MultiP::var("b");
        // [f1, f2] = 1/10 f5 − 27/100 b f6 + (1 + 5143/7000 b²) f7
        let mut expected = vec![RatFunc::zero(); 8];
        expected[5] = RatFunc::from_poly(MultiP::constant(rat(1, 10)));
        expected[6] = RatFunc::from_poly(b.scale(&rat(-27, 100)));
        expected[7] = RatFunc::from_poly(
            &MultiP::one() + &b.pow(2).scale(&rat(5143, 7000)),
        );
        assert_eq!(quo.basis_bracket(1, 2), expected);
        // [f1, f3] = 1/10 f6 − 27/100 b f7
        let mut expected = vec![RatFunc::zero(); 8];
        expected[6] = RatFunc::from_poly(MultiP::constant(rat(1, 10)));
        expected[7] = RatFunc::from_poly(b.scale(&rat(-27, 100)));
        assert_eq!(quo.basis_bracket(1, 3), expected);
        // [f1, f4] = 3/35 f7 and [f2, f3] = 1/70 f7
        let mut expected = vec![RatFunc::zero(); 8];
        expected[7] = RatFunc::from_poly(MultiP::constant(rat(3, 35)));
        assert_eq!(quo.basis_bracket(1, 4), expected);
        let mut expected = vec![RatFunc::zero(); 8];
        expected[7] = RatFunc::from_poly(MultiP::constant(rat(1, 70)));
        assert_eq!(quo.basis_bracket(2, 3), expected);
        // chain brackets [f0, f_i] = f_{i+1} for 1 ≤ i ≤ 6
        for i in 1..=6usize {
            let mut expected = vec![RatFunc::zero(); 8];
            expected[i + 1] = RatFunc::one();
            assert_eq!(quo.basis_bracket(0, i), expected, "[f0, f{i}]");
        }
        // everything else vanishes
        let named: &[(usize, usize)] =
            &[(1, 2), (1, 3), (1, 4), (2, 3), (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6)];
        for i in 0..8 {
            for j in (i + 1)..8 {
                if !named.contains(&(i, j)) {
                    assert_eq!(
                        quo.basis_bracket(i, j),
                        vec![RatFunc::zero(); 8],
                        "[f{i}, f{j}] should vanish"
                    );
                }
            }
        }
    }

    #[test]
    fn hb_specializations_are_lie_algebras() {
        let hb = build_hb();
        for b_val in [rat(0, 1), rat(1, 1), rat(-1, 1), rat(2, 1), rat(-3, 7)] {
            let mut at = std::collections::BTreeMap::new();
            at.insert("b".to_string(), b_val.clone());
            let special = hb.specialize(&at).expect("polynomial entries");
            assert!(special.jacobi_report().is_empty(), "b = {b_val}");
            let dims: Vec<usize> = special
                .lower_central_series()
                .iter()
                .map(Subspace::dim)
                .collect();
            assert_eq!(dims, (0..=10).rev().collect::<Vec<_>>(), "b = {b_val}");
        }
    }
}
