//! Rational-function arithmetic must commute with specializing the symbolic
//! parameter to a concrete rational value: building an expression over Q(b)
//! and then evaluating at b = β gives the same number as evaluating every
//! operand first and combining the results over Q.

use std::collections::BTreeMap;

use nilscope_core::scalar::{MultiPoly, Rat, RatFunc, Scalar};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_poly(rng: &mut StdRng, var: &str, max_deg: u16) -> MultiPoly {
    let mut poly = MultiPoly::zero();
    for exp in 0..=max_deg {
        let num = rng.gen_range(-6i64..=6);
        if num == 0 {
            continue;
        }
        let den = rng.gen_range(1i64..=4);
        let coeff = Rat::new(num.into(), den.into()).expect("nonzero denominator");
        poly = &poly + &MultiPoly::var(var).pow(exp).scale(&coeff);
    }
    poly
}

fn random_ratfunc(rng: &mut StdRng, var: &str) -> RatFunc {
    loop {
        let num = random_poly(rng, var, 3);
        let den = random_poly(rng, var, 2);
        if let Ok(f) = RatFunc::new(num, den) {
            return f;
        }
    }
}

/// Applies one arithmetic op chosen by `code` to both representations.
fn apply_op(
    code: u8,
    sym: &RatFunc,
    other_sym: &RatFunc,
    val: &Rat,
    other_val: &Rat,
) -> Option<(RatFunc, Rat)> {
    match code % 4 {
        0 => Some((sym.add_ref(other_sym), val.add_ref(other_val))),
        1 => Some((sym.sub_ref(other_sym), val.sub_ref(other_val))),
        2 => Some((sym.mul_ref(other_sym), val.mul_ref(other_val))),
        _ => {
            if other_val.is_zero() {
                return None;
            }
            let quotient = sym.div_ref(other_sym).ok()?;
            Some((quotient, val.div_ref(other_val).expect("nonzero divisor")))
        }
    }
}

#[test]
fn rational_function_arithmetic_commutes_with_specialization() {
    let mut rng = StdRng::seed_from_u64(0x5bec1a1);
    let mut checked = 0usize;

    while checked < 50 {
        let beta = Rat::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into())
            .expect("nonzero denominator");
        let mut point = BTreeMap::new();
        point.insert("b".to_string(), beta.clone());

        // Start from one operand that is defined at β.
        let start = random_ratfunc(&mut rng, "b");
        let Ok(mut value) = start.eval(&point) else {
            continue;
        };
        let mut expr = start;

        let mut steps = 0;
        while steps < 4 {
            let next = random_ratfunc(&mut rng, "b");
            let Ok(next_value) = next.eval(&point) else {
                continue;
            };
            let code: u8 = rng.gen();
            let Some((combined, combined_value)) =
                apply_op(code, &expr, &next, &value, &next_value)
            else {
                continue;
            };
            // Division may introduce a pole at β even when both operands are
            // defined there; skip those combinations.
            let Ok(direct) = combined.eval(&point) else {
                continue;
            };
            assert_eq!(
                direct, combined_value,
                "specialization at b = {beta} disagrees with symbolic arithmetic"
            );
            expr = combined;
            value = combined_value;
            steps += 1;
        }
        checked += 1;
    }
    assert_eq!(checked, 50);
}
