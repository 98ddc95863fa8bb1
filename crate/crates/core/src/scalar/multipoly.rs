//! Sparse multivariate polynomials over the rationals.
//!
//! A [`MultiPoly`] is a map from exponent vectors to nonzero rational
//! coefficients, together with an ordered variable list. The canonical form
//! keeps the variable list sorted by name, deduplicated, and trimmed to the
//! variables that actually occur, so structural equality coincides with
//! mathematical equality and rendering is deterministic. Term order, where
//! it matters (leading terms, display), is graded lexicographic over the
//! sorted variable list.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::scalar::{Rat, Scalar};
use crate::{Error, Result};

/// A sparse multivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    /// Sorted, deduplicated, and trimmed to variables with a nonzero
    /// exponent in at least one term.
    vars: Vec<String>,
    /// Exponent vector (aligned with `vars`) to nonzero coefficient.
    terms: BTreeMap<Vec<u16>, Rat>,
}

/// Graded lexicographic comparison of two exponent vectors over the same
/// variable list: total degree first, then leftmost-variable-dominant.
fn grlex(a: &[u16], b: &[u16]) -> Ordering {
    let ta: u64 = a.iter().map(|&e| u64::from(e)).sum();
    let tb: u64 = b.iter().map(|&e| u64::from(e)).sum();
    ta.cmp(&tb).then_with(|| a.cmp(b))
}

impl MultiPoly {
    // ---- Constructors ----

    /// The zero polynomial.
    pub fn zero() -> Self {
        MultiPoly { vars: Vec::new(), terms: BTreeMap::new() }
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        MultiPoly::constant(Rat::one())
    }

    /// A constant polynomial.
    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MultiPoly { vars: Vec::new(), terms }
    }

    /// The polynomial consisting of a single variable.
    pub fn var(name: &str) -> Self {
        MultiPoly {
            vars: vec![name.to_string()],
            terms: BTreeMap::from([(vec![1], Rat::one())]),
        }
    }

    /// `c * name^exp`; canonicalizes degenerate cases.
    pub fn monomial(c: Rat, name: &str, exp: u16) -> Self {
        if c.is_zero() || exp == 0 {
            return MultiPoly::constant(c);
        }
        MultiPoly {
            vars: vec![name.to_string()],
            terms: BTreeMap::from([(vec![exp], c)]),
        }
    }

    // ---- Canonical form ----

    /// Restores the canonical form: drops zero coefficients, then drops
    /// variables that no longer occur (shrinking every exponent vector).
    fn normalize(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|e| e[i] != 0))
            .collect();
        if used.iter().all(|&u| u) {
            return self;
        }
        let vars: Vec<String> = self
            .vars
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(v, _)| v.clone())
            .collect();
        let terms = self
            .terms
            .into_iter()
            .map(|(e, c)| {
                let e2: Vec<u16> =
                    e.iter().zip(&used).filter(|(_, &u)| u).map(|(&x, _)| x).collect();
                (e2, c)
            })
            .collect();
        MultiPoly { vars, terms }
    }

    /// Re-expresses the polynomial over a superset of its variables
    /// (`new_vars` must be sorted and contain every current variable).
    fn embed(&self, new_vars: &[String]) -> Self {
        if self.vars == new_vars {
            return self.clone();
        }
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| new_vars.binary_search(v).expect("embed target must cover all variables"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = vec![0u16; new_vars.len()];
                for (i, &x) in e.iter().enumerate() {
                    e2[idx[i]] = x;
                }
                (e2, c.clone())
            })
            .collect();
        MultiPoly { vars: new_vars.to_vec(), terms }
    }

    /// Puts two polynomials over one shared sorted variable list.
    fn unify(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let merged: Vec<String> = self
            .vars
            .iter()
            .chain(&other.vars)
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        (self.embed(&merged), other.embed(&merged))
    }

    // ---- Inspection ----

    /// Variables occurring in the polynomial, sorted by name.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Number of monomials in the canonical form.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(constant)` for constant polynomials (including zero).
    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.vars.is_empty() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// Total degree (zero polynomial reports 0).
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| u32::from(x)).sum())
            .max()
            .unwrap_or(0)
    }

    /// Degree in one variable (0 when the variable does not occur).
    pub fn degree_in(&self, name: &str) -> u16 {
        match self.vars.binary_search_by(|v| v.as_str().cmp(name)) {
            Ok(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            Err(_) => 0,
        }
    }

    /// `Some(name)` when the polynomial involves exactly one variable;
    /// `None` for constants and genuinely multivariate polynomials.
    pub fn sole_var(&self) -> Option<&str> {
        match self.vars.len() {
            1 => Some(&self.vars[0]),
            _ => None,
        }
    }

    /// Leading (exponent vector, coefficient) under graded lex; `None` for
    /// the zero polynomial.
    fn leading(&self) -> Option<(&Vec<u16>, &Rat)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    /// Leading coefficient under graded lex (zero for the zero polynomial).
    pub fn leading_coeff(&self) -> Rat {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    /// Coefficient of `name^exp` viewed as a polynomial in the remaining
    /// variables. `coeff_of("t", 0)` is the `t`-free part.
    pub fn coeff_of(&self, name: &str, exp: u16) -> MultiPoly {
        let Ok(i) = self.vars.binary_search_by(|v| v.as_str().cmp(name)) else {
            return if exp == 0 { self.clone() } else { MultiPoly::zero() };
        };
        let terms: BTreeMap<Vec<u16>, Rat> = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] == exp)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] = 0;
                (e2, c.clone())
            })
            .collect();
        MultiPoly { vars: self.vars.clone(), terms }.normalize()
    }

    // ---- Arithmetic ----

    fn add_impl(&self, other: &Self, negate_rhs: bool) -> Self {
        let (mut a, b) = self.unify(other);
        for (e, c) in b.terms {
            let c = if negate_rhs { -&c } else { c };
            match a.terms.get_mut(&e) {
                Some(acc) => *acc = &*acc + &c,
                None => {
                    a.terms.insert(e, c);
                }
            }
        }
        a.normalize()
    }

    /// Multiplies by a rational constant.
    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect();
        MultiPoly { vars: self.vars.clone(), terms }
    }

    /// Non-negative integer power by repeated multiplication.
    pub fn pow(&self, exp: u16) -> Self {
        let mut acc = MultiPoly::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    // ---- Evaluation and substitution ----

    /// Evaluates at a full rational point; every occurring variable must be
    /// assigned.
    pub fn eval(&self, assignment: &BTreeMap<String, Rat>) -> Result<Rat> {
        for v in &self.vars {
            if !assignment.contains_key(v) {
                return Err(Error::domain(format!("variable `{v}` left unassigned")));
            }
        }
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    term = &term * &assignment[&self.vars[i]].pow(i32::from(exp))?;
                }
            }
            total = &total + &term;
        }
        Ok(total)
    }

    /// Replaces each mapped variable by a polynomial; unmapped variables
    /// stay symbolic. Powers of each replacement are computed once.
    pub fn substitute(&self, map: &BTreeMap<String, MultiPoly>) -> Self {
        if !self.vars.iter().any(|v| map.contains_key(v)) {
            return self.clone();
        }
        // Precompute replacement powers up to the degree actually used.
        let mut powers: BTreeMap<usize, Vec<MultiPoly>> = BTreeMap::new();
        for (i, v) in self.vars.iter().enumerate() {
            if let Some(repl) = map.get(v) {
                let max = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
                let mut tower = vec![MultiPoly::one()];
                for k in 1..=max {
                    tower.push(&tower[(k - 1) as usize] * repl);
                }
                powers.insert(i, tower);
            }
        }
        let mut total = MultiPoly::zero();
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(c.clone());
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                term = match powers.get(&i) {
                    Some(tower) => &term * &tower[exp as usize],
                    None => &term * &MultiPoly::monomial(Rat::one(), &self.vars[i], exp),
                };
            }
            total = &total + &term;
        }
        total
    }

    // ---- Ring-level division machinery ----

    /// Content: the positive rational `c` such that `self / c` has coprime
    /// integer coefficients. Zero polynomial reports content 1.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rat::new(num_gcd.abs(), den_lcm).expect("lcm of positive denominators is nonzero")
    }

    /// Exact polynomial division: `Some(q)` with `self == q * divisor`, or
    /// `None` when the division is not exact. Divisor must be nonzero.
    ///
    /// The whole loop runs in one fixed unified variable context so that
    /// exponent vectors stay comparable componentwise throughout.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        assert!(!divisor.is_zero(), "exact_div by the zero polynomial");
        if self.is_zero() {
            return Some(MultiPoly::zero());
        }
        let (top, div) = self.unify(divisor);
        let vars = top.vars;
        let mut rem = top.terms;
        let (dlt, dlc) = {
            let (e, c) = div.leading().expect("nonzero divisor has a leading term");
            (e.clone(), c.clone())
        };
        let mut quot: BTreeMap<Vec<u16>, Rat> = BTreeMap::new();
        while !rem.is_empty() {
            let (rlt, rlc) = {
                let (e, c) = rem.iter().max_by(|a, b| grlex(a.0, b.0)).expect("nonempty");
                (e.clone(), c.clone())
            };
            // Componentwise monomial divisibility in the shared context.
            let mut qe = Vec::with_capacity(rlt.len());
            for (a, b) in rlt.iter().zip(&dlt) {
                if a < b {
                    return None;
                }
                qe.push(a - b);
            }
            let qc = rlc.div(&dlc).expect("leading coefficient is nonzero");
            // rem -= (qe, qc) * divisor; the leading term cancels exactly,
            // so the graded-lex maximum strictly decreases and the loop
            // terminates.
            for (e, c) in &div.terms {
                let key: Vec<u16> = e.iter().zip(&qe).map(|(&x, &y)| x + y).collect();
                let delta = c * &qc;
                match rem.get_mut(&key) {
                    Some(acc) => {
                        *acc = &*acc - &delta;
                        if acc.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -&delta);
                    }
                }
            }
            quot.insert(qe, qc);
        }
        Some(MultiPoly { vars, terms: quot }.normalize())
    }

    /// Partial derivative with respect to one variable.
    pub fn derivative(&self, name: &str) -> Self {
        let Ok(i) = self.vars.binary_search_by(|v| v.as_str().cmp(name)) else {
            return MultiPoly::zero();
        };
        let terms: BTreeMap<Vec<u16>, Rat> = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (e2, c * &Rat::from_int(i64::from(e[i])))
            })
            .collect();
        MultiPoly { vars: self.vars.clone(), terms }.normalize()
    }

    /// Monic gcd of two polynomials in at most one (shared) variable.
    /// Errors when either is genuinely multivariate or the variables differ.
    pub fn gcd_univariate(&self, other: &Self) -> Result<Self> {
        for p in [self, other] {
            if p.vars.len() > 1 {
                return Err(Error::domain(
                    "gcd is only available for polynomials in one variable",
                ));
            }
        }
        if !self.vars.is_empty() && !other.vars.is_empty() && self.vars != other.vars {
            return Err(Error::domain("gcd operands use different variables"));
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem_univariate(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Ok(MultiPoly::zero());
        }
        let lc = a.leading_coeff();
        Ok(a.scale(&lc.recip()?))
    }

    /// Euclidean remainder of univariate division.
    fn rem_univariate(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(c) = divisor.as_constant() {
            debug_assert!(!c.is_zero());
            return Ok(MultiPoly::zero());
        }
        let var = divisor.sole_var().expect("non-constant univariate divisor").to_string();
        let dd = divisor.degree_in(&var);
        let dlc = divisor.leading_coeff();
        let mut rem = self.clone();
        while !rem.is_zero() && rem.degree_in(&var) >= dd {
            let rd = rem.degree_in(&var);
            let rlc = rem.coeff_of(&var, rd).as_constant().ok_or_else(|| {
                Error::domain("univariate remainder requires univariate operands")
            })?;
            let q = MultiPoly::monomial(rlc.div(&dlc)?, &var, rd - dd);
            rem = rem.add_impl(&(&q * divisor), true);
        }
        Ok(rem)
    }

    /// All rational roots of a univariate polynomial, with multiplicities,
    /// sorted ascending. Errors on the zero polynomial, a genuinely
    /// multivariate input, or when a leading/trailing integer coefficient
    /// is too large to factor by trial division.
    pub fn rational_roots(&self) -> Result<Vec<(Rat, usize)>> {
        if self.is_zero() {
            return Err(Error::domain("the zero polynomial has every root"));
        }
        if self.vars.len() > 1 {
            return Err(Error::domain("rational roots require a univariate polynomial"));
        }
        if self.as_constant().is_some() {
            return Ok(Vec::new());
        }
        let var = self.vars[0].clone();
        let mut p = self.clone();
        let mut roots: Vec<(Rat, usize)> = Vec::new();

        // Split off x^k: root 0 with multiplicity k.
        let min_exp = p.terms.keys().map(|e| e[0]).min().unwrap_or(0);
        if min_exp > 0 {
            let shift: BTreeMap<Vec<u16>, Rat> = p
                .terms
                .iter()
                .map(|(e, c)| (vec![e[0] - min_exp], c.clone()))
                .collect();
            p = MultiPoly { vars: p.vars.clone(), terms: shift }.normalize();
            roots.push((Rat::zero(), min_exp as usize));
        }
        if p.as_constant().is_some() {
            roots.sort_by(|a, b| a.0.cmp(&b.0));
            return Ok(roots);
        }

        // Clear to a primitive integer polynomial and apply the rational
        // root bound: candidates p/q with p | constant term, q | leading.
        let prim = p.scale(&p.content().recip()?);
        let lead = prim.coeff_of(&var, prim.degree_in(&var)).as_constant().unwrap();
        let tail = prim.coeff_of(&var, 0).as_constant().unwrap();
        debug_assert!(!tail.is_zero(), "x-factor was split off above");
        let p_divs = small_divisors(tail.numer())?;
        let q_divs = small_divisors(lead.numer())?;
        let mut candidates: BTreeSet<Rat> = BTreeSet::new();
        for pn in &p_divs {
            for qd in &q_divs {
                let r = Rat::new(pn.clone(), qd.clone()).expect("divisors are nonzero");
                candidates.insert(r.clone());
                candidates.insert(-&r);
            }
        }
        for cand in candidates {
            let mut mult = 0usize;
            let linear = MultiPoly::var(&var)
                .add_impl(&MultiPoly::constant(cand.clone()), true);
            loop {
                match p.exact_div(&linear) {
                    Some(q) => {
                        mult += 1;
                        p = q;
                    }
                    None => break,
                }
            }
            if mult > 0 {
                roots.push((cand, mult));
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(roots)
    }
}

/// Positive divisors of `n` by trial division; errors when `|n|` exceeds the
/// trial-division budget (root enumeration then refuses rather than guesses).
fn small_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Err(Error::domain("divisor enumeration of zero"));
    }
    let limit = BigInt::from(10_000_000u64);
    if n > limit {
        return Err(Error::domain(
            "coefficient too large to enumerate rational root candidates exactly",
        ));
    }
    let n_u = u64::try_from(&n).expect("bounded above by the budget");
    let mut divs = Vec::new();
    let mut d = 1u64;
    while d * d <= n_u {
        if n_u % d == 0 {
            divs.push(BigInt::from(d));
            if d != n_u / d {
                divs.push(BigInt::from(n_u / d));
            }
        }
        d += 1;
    }
    divs.sort();
    Ok(divs)
}

impl Scalar for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::one()
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add_impl(other, false)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_impl(other, true)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        let (a, b) = self.unify(other);
        let mut terms: BTreeMap<Vec<u16>, Rat> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u16> = ea
                    .iter()
                    .zip(eb)
                    .map(|(&x, &y)| x.checked_add(y).expect("exponent overflow"))
                    .collect();
                let c = ca * cb;
                match terms.get_mut(&e) {
                    Some(acc) => *acc = &*acc + &c,
                    None => {
                        terms.insert(e, c);
                    }
                }
            }
        }
        MultiPoly { vars: a.vars, terms }.normalize()
    }
    fn neg_ref(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        MultiPoly { vars: self.vars.clone(), terms }
    }
    fn div_ref(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(c) = other.as_constant() {
            return Ok(self.scale(&c.recip()?));
        }
        self.exact_div(other)
            .ok_or_else(|| Error::domain("inexact polynomial division in a ring context"))
    }
    fn from_rat(r: Rat) -> Self {
        MultiPoly::constant(r)
    }
    fn as_rat(&self) -> Option<Rat> {
        self.as_constant()
    }
    fn support_size(&self) -> usize {
        self.terms.len()
    }
}

crate::scalar::forward_scalar_ops!(MultiPoly);

impl fmt::Display for MultiPoly {
    /// Canonical rendering: monomials in descending graded-lex order joined
    /// by ` + ` / ` - `, coefficients and variables joined by `*`, powers as
    /// `^`. Examples: `5143/7000*b^2 + 1`, `-5/36*t`, `2*m[1,1]^4*m[2,1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut entries: Vec<(&Vec<u16>, &Rat)> = self.terms.iter().collect();
        entries.sort_by(|a, b| grlex(b.0, a.0));
        for (pos, (e, c)) in entries.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if pos == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut pieces: Vec<String> = Vec::new();
            if !mag.is_one() || e.iter().all(|&x| x == 0) {
                pieces.push(mag.to_string());
            }
            for (i, &exp) in e.iter().enumerate() {
                match exp {
                    0 => {}
                    1 => pieces.push(self.vars[i].clone()),
                    _ => pieces.push(format!("{}^{}", self.vars[i], exp)),
                }
            }
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn rat(n: i64, d: i64) -> Rat {
        Rat::from_pair(n, d).unwrap()
    }

    fn b() -> MultiPoly {
        MultiPoly::var("b")
    }

    fn t() -> MultiPoly {
        MultiPoly::var("t")
    }

    #[test]
    fn canonical_form_trims_unused_variables() {
        // (b + t) - t mentions t transiently; the result must be plain b.
        let p = &(&b() + &t()) - &t();
        assert_eq!(p, b());
        assert_eq!(p.vars(), ["b".to_string()]);
    }

    #[test]
    fn variable_lists_merge_sorted() {
        let p = &(&t() * &b()) + &MultiPoly::one();
        assert_eq!(p.vars(), ["b".to_string(), "t".to_string()]);
        assert_eq!(p.to_string(), "b*t + 1");
    }

    #[test]
    fn display_uses_descending_graded_lex_and_folds_signs() {
        // 1 + (5143/7000) b^2
        let p = &MultiPoly::one() + &MultiPoly::monomial(rat(5143, 7000), "b", 2);
        assert_eq!(p.to_string(), "5143/7000*b^2 + 1");
        let q = MultiPoly::monomial(rat(-5, 36), "t", 1);
        assert_eq!(q.to_string(), "-5/36*t");
        let r = &MultiPoly::monomial(rat(2, 1), "m[1,1]", 4) * &MultiPoly::var("m[2,1]");
        assert_eq!(r.to_string(), "2*m[1,1]^4*m[2,1]");
        assert_eq!(MultiPoly::zero().to_string(), "0");
        let s = &b() - &MultiPoly::one();
        assert_eq!(s.to_string(), "b - 1");
    }

    #[test]
    fn eval_at_rational_points() {
        let p = &MultiPoly::one() + &MultiPoly::monomial(rat(5143, 7000), "b", 2);
        let at = BTreeMap::from([("b".to_string(), Rat::from_int(2))]);
        assert_eq!(p.eval(&at).unwrap(), rat(6893, 1750));
        let missing: BTreeMap<String, Rat> = BTreeMap::new();
        assert!(p.eval(&missing).is_err());
    }

    #[test]
    fn substitution_replaces_and_keeps_other_variables() {
        // (m^2 - 1) with m -> 1 collapses to 0; with m -> t+1 expands.
        let m = MultiPoly::var("m");
        let p = &(&m * &m) - &MultiPoly::one();
        let to_one = BTreeMap::from([("m".to_string(), MultiPoly::one())]);
        assert!(p.substitute(&to_one).is_zero());
        let to_t1 = BTreeMap::from([("m".to_string(), &t() + &MultiPoly::one())]);
        let q = p.substitute(&to_t1);
        let expect = &(&t() * &t()) + &t().scale(&Rat::from_int(2));
        assert_eq!(q, expect);
    }

    #[test]
    fn exact_division_succeeds_exactly_when_divisible() {
        let x = MultiPoly::var("x");
        let y = MultiPoly::var("y");
        let xy = &x * &y;
        // (x^2 y^2 - 1) = (xy - 1)(xy + 1)
        let p = &(&xy * &xy) - &MultiPoly::one();
        let d = &xy - &MultiPoly::one();
        let q = p.exact_div(&d).expect("divisible");
        assert_eq!(q, &xy + &MultiPoly::one());
        assert_eq!(&q * &d, p);
        // x^2 y^2 is not divisible by xy - 1.
        assert!((&xy * &xy).exact_div(&d).is_none());
    }

    #[test]
    fn content_and_scaling() {
        // 4/6 x + 8/9  -> content gcd(2,8)/lcm(3,9) = 2/9
        let p = &MultiPoly::monomial(rat(4, 6), "x", 1) + &MultiPoly::constant(rat(8, 9));
        assert_eq!(p.content(), rat(2, 9));
        let prim = p.scale(&p.content().recip().unwrap());
        assert_eq!(prim.content(), Rat::one());
    }

    #[test]
    fn univariate_gcd_is_monic_and_divides_both() {
        let x = MultiPoly::var("x");
        let a = &(&x * &x) - &MultiPoly::one(); // (x-1)(x+1)
        let c = &x + &MultiPoly::one();
        let b = &c * &c; // (x+1)^2
        let g = a.gcd_univariate(&b).unwrap();
        assert_eq!(g, c);
        assert!(a.exact_div(&g).is_some());
        assert!(b.exact_div(&g).is_some());
        // Mixed-variable input is refused.
        assert!(a.gcd_univariate(&MultiPoly::var("y")).is_err());
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // 35 m^6 - 35 m^4 = 35 m^4 (m-1)(m+1)
        let m = MultiPoly::var("m");
        let p = &m.pow(6).scale(&rat(35, 1)) - &m.pow(4).scale(&rat(35, 1));
        let roots = p.rational_roots().unwrap();
        assert_eq!(
            roots,
            vec![
                (Rat::from_int(-1), 1),
                (Rat::zero(), 4),
                (Rat::from_int(1), 1)
            ]
        );
        // 2x - 3 has the single root 3/2.
        let q = &MultiPoly::monomial(rat(2, 1), "x", 1) - &MultiPoly::constant(rat(3, 1));
        assert_eq!(q.rational_roots().unwrap(), vec![(rat(3, 2), 1)]);
        // x^2 + 1 has none.
        let r = &MultiPoly::var("x").pow(2) + &MultiPoly::one();
        assert!(r.rational_roots().unwrap().is_empty());
    }

    #[test]
    fn coeff_of_splits_by_one_variable() {
        // p = t*(b + 2) + (b^2 - 1)
        let p = &(&t() * &(&b() + &MultiPoly::constant(rat(2, 1))))
            + &(&b().pow(2) - &MultiPoly::one());
        assert_eq!(p.coeff_of("t", 1), &b() + &MultiPoly::constant(rat(2, 1)));
        assert_eq!(p.coeff_of("t", 0), &b().pow(2) - &MultiPoly::one());
        assert!(p.coeff_of("t", 2).is_zero());
        assert_eq!(p.degree_in("t"), 1);
    }

    #[test]
    fn derivative_in_one_variable() {
        let p = &b().pow(3).scale(&rat(2, 1)) + &(&b() * &t());
        let d = p.derivative("b");
        assert_eq!(d, &b().pow(2).scale(&rat(6, 1)) + &t());
        assert!(p.derivative("zz").is_zero());
    }

    #[test]
    fn ring_axioms_hold_on_random_small_polynomials() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xd15ea5e);
        let names = ["b", "t", "x"];
        let sample = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut p = MultiPoly::zero();
            for _ in 0..rng.gen_range(0..4) {
                let c = rat(rng.gen_range(-9..=9), rng.gen_range(1..=9));
                let v = names[rng.gen_range(0..names.len())];
                let e = rng.gen_range(0..3);
                p = &p + &MultiPoly::monomial(c, v, e);
            }
            p
        };
        for _ in 0..200 {
            let (a, b, c) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
            assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            assert_eq!(&a + &b, &b + &a);
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &b, &b * &a);
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert_eq!(&a + &MultiPoly::zero(), a);
            assert_eq!(&a * &MultiPoly::one(), a);
            assert!((&a - &a).is_zero());
            if !b.is_zero() {
                // Multiplication then exact division round-trips.
                assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
            }
        }
    }
}
