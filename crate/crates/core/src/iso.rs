//! Filtration-adapted isomorphism obstructions and a script-driven
//! elimination replay engine.
//!
//! Given a one-parameter deformation family on a basis e0…e(n−1) and a rigid
//! candidate target on the same index range, a basis map is restricted to the
//! adapted profile: a full 2×2 block in the top-left corner and, from row 3
//! on, entries `m[r,s]` with s ≤ r (1-based). Comparing the image of each
//! bracket with the bracket of the images coordinatewise yields one
//! polynomial *obstruction* per basis pair and coordinate; the map is an
//! isomorphism exactly when every obstruction vanishes.
//!
//! The replay engine consumes a plain-text script that eliminates the
//! unknowns step by step — solving one unknown at a time, factoring,
//! combining constraints, branching over the rational roots of a univariate
//! constraint, and finally concluding that the deformation parameter itself
//! must vanish. Every polynomial claimed by the script is recomputed in
//! exact arithmetic; the engine never trusts the script's own algebra.
//!
//! Soundness is guarded four ways:
//! * a substitution is only accepted when the solved coefficient is a *unit*
//!   — a nonzero rational, or a monomial in entries already established to be
//!   nonzero (the diagonal entries m\[r,r\] for r ≥ 3 and, once triangular,
//!   the top 2×2 block, all forced nonzero by invertibility of the map);
//! * after every substitution, each tracked constraint must stay of degree
//!   ≤ 1 in the deformation parameter, so "coefficient of the parameter"
//!   arguments remain valid;
//! * after every step, a random sample of original obstructions is reduced
//!   from scratch and compared against the recorded residuals (times any
//!   struck unit factors);
//! * a branch may only conclude after a spot-check: random rational values
//!   for the remaining free unknowns are pushed through the accumulated
//!   substitutions, and some original obstruction must still specialize to a
//!   nonzero rational multiple of the parameter.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::deformation::DeformationFamily;
use crate::expr::{tokenize, ExprParser, Token};
use crate::lie::LieAlgebra;
use crate::scalar::{MultiPoly, Rat, Scalar};
use crate::{Error, Result};

/// Deterministic seed for the audit and spot-check sampling; replays are
/// reproducible run to run.
const REPLAY_SEED: u64 = 0x1d_f1_11_f0_12_34;

/// How many original obstructions are re-reduced from scratch after each
/// step to confirm the recorded residuals still derive from their sources.
const AUDIT_SAMPLES: usize = 5;

/// How many random rational assignments the concluding spot-check tries.
const SPOT_CHECK_TRIALS: usize = 3;

// ---------------------------------------------------------------------------
// Ansatz
// ---------------------------------------------------------------------------

/// The canonical name of a basis-map entry, 1-based: `m[r,s]` is row r,
/// column s.
pub fn unknown_name(row: usize, col: usize) -> String {
    format!("m[{row},{col}]")
}

/// Splits an indexed identifier such as `m[3,2]` or `E[0,1,2]` into its head
/// and index list.
fn indexed_parts(name: &str) -> Option<(&str, Vec<usize>)> {
    let open = name.find('[')?;
    if !name.ends_with(']') {
        return None;
    }
    let head = &name[..open];
    let inner = &name[open + 1..name.len() - 1];
    let mut indices = Vec::new();
    for part in inner.split(',') {
        indices.push(part.parse::<usize>().ok()?);
    }
    Some((head, indices))
}

/// The profile of basis maps searched for: which matrix entries `m[r,s]`
/// (1-based) are free unknowns. All other entries are pinned to zero.
///
/// For filiform algebras on an adapted basis, a graded-compatible map is
/// lower-triangular from row 3 on, with an arbitrary 2×2 block in the top
/// left; this is the shape the eliminations work with.
#[derive(Clone, Debug)]
pub struct Ansatz {
    dim: usize,
    param: String,
}

impl Ansatz {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The deformation parameter the obstructions will carry.
    pub fn param(&self) -> &str {
        &self.param
    }

    /// Whether entry (row, col), 1-based, is a free unknown of the profile.
    pub fn permits(&self, row: usize, col: usize) -> bool {
        (1..=self.dim).contains(&row)
            && (1..=self.dim).contains(&col)
            && if row <= 2 { col <= 2 } else { col <= row }
    }

    /// All unknowns in row-major order.
    pub fn unknowns(&self) -> Vec<String> {
        let mut out = Vec::new();
        for row in 1..=self.dim {
            for col in 1..=self.dim {
                if self.permits(row, col) {
                    out.push(unknown_name(row, col));
                }
            }
        }
        out
    }

    pub fn unknown_count(&self) -> usize {
        self.unknowns().len()
    }

    /// Parses `m[r,s]` back into indices, accepting only entries this
    /// profile actually has.
    pub fn parse_unknown(&self, name: &str) -> Option<(usize, usize)> {
        let (head, idx) = indexed_parts(name)?;
        if head != "m" || idx.len() != 2 {
            return None;
        }
        self.permits(idx[0], idx[1]).then(|| (idx[0], idx[1]))
    }

    /// The symbolic image of basis vector `col0` (0-based): a coordinate
    /// vector of fresh variables following the profile.
    fn column(&self, col0: usize) -> Vec<MultiPoly> {
        (0..self.dim)
            .map(|r| {
                if self.permits(r + 1, col0 + 1) {
                    MultiPoly::var(&unknown_name(r + 1, col0 + 1))
                } else {
                    MultiPoly::zero()
                }
            })
            .collect()
    }
}

/// Whether the lower central series steps down one dimension at a time from
/// dim − 2 to 0 — the maximal-class ("filiform") shape the profile assumes.
fn is_filiform<K: Scalar>(alg: &LieAlgebra<K>) -> bool {
    let n = alg.dim();
    if n < 3 {
        return false;
    }
    let dims: Vec<usize> =
        alg.lower_central_series().iter().map(|s| s.dim()).collect();
    let expected: Vec<usize> = (0..=n - 2).rev().collect();
    dims == expected
}

/// Builds the adapted profile for maps from the family's underlying space to
/// the target's. Both algebras must be filiform and of the same dimension;
/// the family must be filiform *symbolically*, i.e. for generic parameter.
pub fn build_ansatz(
    source: &DeformationFamily,
    target: &LieAlgebra<Rat>,
) -> Result<Ansatz> {
    let n = source.family().dim();
    if target.dim() != n {
        return Err(Error::dimension(format!(
            "cannot match a {n}-dimensional family against a {}-dimensional target",
            target.dim()
        )));
    }
    if !is_filiform(source.family()) {
        return Err(Error::domain(
            "the family is not filiform for generic parameter, so the adapted profile does not apply",
        ));
    }
    if !is_filiform(target) {
        return Err(Error::domain(
            "the target is not filiform, so the adapted profile does not apply",
        ));
    }
    Ok(Ansatz { dim: n, param: source.param().to_string() })
}

// ---------------------------------------------------------------------------
// Obstructions
// ---------------------------------------------------------------------------

/// One coordinate of one bracket comparison: the coefficient of basis vector
/// `k` in g([e_i, e_j]) − [g(e_i), g(e_j)], as a polynomial in the map
/// entries and the deformation parameter. The map is an isomorphism exactly
/// when all obstructions vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub poly: MultiPoly,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E[{},{},{}] = {}", self.i, self.j, self.k, self.poly)
    }
}

/// Expands every bracket comparison into polynomial obstructions, dropping
/// coordinates that vanish identically. Pairs are emitted with i < j in
/// lexicographic order, coordinates ascending.
pub fn generate_obstructions(
    ansatz: &Ansatz,
    source: &DeformationFamily,
    target: &LieAlgebra<Rat>,
) -> Result<Vec<Obstruction>> {
    let n = ansatz.dim();
    if source.family().dim() != n || target.dim() != n {
        return Err(Error::dimension(
            "the profile, the family, and the target must share one dimension"
                .to_string(),
        ));
    }
    if source.param() != ansatz.param() {
        return Err(Error::domain(
            "the profile was built for a different deformation parameter",
        ));
    }
    let lifted: LieAlgebra<MultiPoly> = target.extend_scalars(Vec::new())?;
    let cols: Vec<Vec<MultiPoly>> = (0..n).map(|c| ansatz.column(c)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let image = lifted.bracket(&cols[i], &cols[j])?;
            let fam = source.family().basis_bracket(i, j);
            let mut mapped = vec![MultiPoly::zero(); n];
            for (idx, coeff) in fam.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                if !coeff.is_polynomial() {
                    return Err(Error::domain(format!(
                        "family bracket ({i}, {j}) has a non-polynomial coordinate {idx}"
                    )));
                }
                let c = coeff.numer();
                for (r, target_entry) in cols[idx].iter().enumerate() {
                    if !target_entry.is_zero() {
                        mapped[r] = &mapped[r] + &(c * target_entry);
                    }
                }
            }
            for k in 0..n {
                let poly = &mapped[k] - &image[k];
                if !poly.is_zero() {
                    out.push(Obstruction { i, j, k, poly });
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Equation references
// ---------------------------------------------------------------------------

/// A handle to a tracked constraint: either an original obstruction
/// coordinate `E[i,j,k]` or a named constraint created by a `combine` step.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EqRef {
    Entry(usize, usize, usize),
    Named(String),
}

impl fmt::Display for EqRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqRef::Entry(i, j, k) => write!(f, "E[{i},{j},{k}]"),
            EqRef::Named(name) => write!(f, "{name}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Elimination state
// ---------------------------------------------------------------------------

/// The working state of one elimination branch.
///
/// Substitutions are kept in *normal form*: no recorded right-hand side
/// mentions any substituted unknown, so reducing a polynomial is a single
/// simultaneous substitution. Residuals are never edited directly — they are
/// always what the original obstruction reduces to, divided by the unit
/// factors struck off by `factor` steps; an internal audit re-checks that
/// identity on random samples after every step.
#[derive(Clone)]
pub struct EliminationState {
    dim: usize,
    param: String,
    unknowns: BTreeSet<String>,
    originals: Arc<Vec<Obstruction>>,
    residuals: BTreeMap<(usize, usize, usize), MultiPoly>,
    /// Product of unit factors struck from each entry's residual.
    struck: BTreeMap<(usize, usize, usize), MultiPoly>,
    /// Named constraints in creation order.
    named: Vec<(String, MultiPoly)>,
    substitutions: BTreeMap<String, MultiPoly>,
    assumptions: Vec<(String, Rat)>,
    /// Unknowns currently known to be nonzero (and not yet substituted).
    protected: BTreeSet<String>,
    /// Nonzero quantities not yet resolved into single unknowns.
    pending_nonzero: Vec<MultiPoly>,
    last_ref: Option<EqRef>,
}

impl EliminationState {
    /// Fresh state over the given obstruction system.
    ///
    /// Starts out knowing that the diagonal entries m\[r,r\] for r ≥ 3 and
    /// the determinant of the top 2×2 block are nonzero — anything less and
    /// the profile matrix would be singular.
    pub fn new(ansatz: &Ansatz, obstructions: Vec<Obstruction>) -> Self {
        let residuals = obstructions
            .iter()
            .map(|o| ((o.i, o.j, o.k), o.poly.clone()))
            .collect();
        let mut protected = BTreeSet::new();
        for r in 3..=ansatz.dim() {
            protected.insert(unknown_name(r, r));
        }
        let var = |r: usize, s: usize| MultiPoly::var(&unknown_name(r, s));
        let det = &(&var(1, 1) * &var(2, 2)) - &(&var(1, 2) * &var(2, 1));
        EliminationState {
            dim: ansatz.dim(),
            param: ansatz.param().to_string(),
            unknowns: ansatz.unknowns().into_iter().collect(),
            originals: Arc::new(obstructions),
            residuals,
            struck: BTreeMap::new(),
            named: Vec::new(),
            substitutions: BTreeMap::new(),
            assumptions: Vec::new(),
            protected,
            pending_nonzero: vec![det],
            last_ref: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn param(&self) -> &str {
        &self.param
    }

    /// The accumulated triangular substitutions, in normal form.
    pub fn substitutions(&self) -> &BTreeMap<String, MultiPoly> {
        &self.substitutions
    }

    /// Case assumptions accumulated by `split` steps, in order.
    pub fn assumptions(&self) -> &[(String, Rat)] {
        &self.assumptions
    }

    /// Unknowns not yet eliminated.
    pub fn free_unknowns(&self) -> Vec<String> {
        self.unknowns
            .iter()
            .filter(|u| !self.substitutions.contains_key(*u))
            .cloned()
            .collect()
    }

    /// Human-readable branch label, e.g. `m[1,1] = -1`.
    pub fn branch_label(&self) -> String {
        if self.assumptions.is_empty() {
            "unconditional".to_string()
        } else {
            self.assumptions
                .iter()
                .map(|(u, v)| format!("{u} = {v}"))
                .collect::<Vec<_>>()
                .join(", ")
        }
    }

    /// The current residual of a constraint. Entries never recorded (because
    /// the coordinate vanished identically) read as zero.
    pub fn residual(&self, eq: &EqRef) -> Result<MultiPoly> {
        match eq {
            EqRef::Entry(i, j, k) => {
                if !(i < j && *j < self.dim && *k < self.dim) {
                    return Err(Error::domain(format!(
                        "{eq} is out of range for dimension {}",
                        self.dim
                    )));
                }
                Ok(self
                    .residuals
                    .get(&(*i, *j, *k))
                    .cloned()
                    .unwrap_or_else(MultiPoly::zero))
            }
            EqRef::Named(name) => self
                .named
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|(_, p)| p.clone())
                .ok_or_else(|| {
                    Error::domain(format!("no constraint named `{name}` is recorded"))
                }),
        }
    }

    fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        if self.substitutions.is_empty() {
            p.clone()
        } else {
            p.substitute(&self.substitutions)
        }
    }

    /// Whether `p` (already reduced) is invertible given what is known:
    /// a nonzero rational, or a monomial whose variables are all protected
    /// (known nonzero).
    fn is_unit(&self, p: &MultiPoly) -> bool {
        if let Some(c) = p.as_constant() {
            return !c.is_zero();
        }
        if p.degree_in(&self.param) > 0 {
            return false;
        }
        p.term_count() == 1
            && p.vars().iter().all(|v| self.protected.contains(v))
    }

    /// Records `unknown ← value` and re-normalizes every tracked polynomial.
    ///
    /// Rejected when the unknown is not in the profile, is already
    /// eliminated, or the reduced value still mentions the unknown (a
    /// cycle). Afterwards, every tracked constraint must still have degree
    /// ≤ 1 in the deformation parameter, and no quantity known to be nonzero
    /// may have collapsed to zero.
    pub fn apply_substitution(
        &mut self,
        unknown: &str,
        value: MultiPoly,
    ) -> Result<()> {
        if !self.unknowns.contains(unknown) {
            return Err(Error::domain(format!(
                "`{unknown}` is not an unknown of the profile"
            )));
        }
        if self.substitutions.contains_key(unknown) {
            return Err(Error::domain(format!(
                "`{unknown}` has already been eliminated"
            )));
        }
        let value = self.reduce(&value);
        if value.degree_in(unknown) > 0 {
            return Err(Error::domain(format!(
                "substituting {unknown} <- {value} is cyclic: the value mentions the unknown"
            )));
        }
        let single =
            BTreeMap::from([(unknown.to_string(), value.clone())]);
        for rhs in self.substitutions.values_mut() {
            *rhs = rhs.substitute(&single);
        }
        for p in self.residuals.values_mut() {
            *p = p.substitute(&single);
        }
        for p in self.struck.values_mut() {
            *p = p.substitute(&single);
        }
        for (_, p) in self.named.iter_mut() {
            *p = p.substitute(&single);
        }
        for p in self.pending_nonzero.iter_mut() {
            *p = p.substitute(&single);
        }
        self.substitutions.insert(unknown.to_string(), value.clone());
        if self.protected.remove(unknown) {
            self.pending_nonzero.push(value);
        }
        self.settle_pending()?;
        self.check_degrees()
    }

    /// Classifies pending nonzero quantities: a nonzero constant is
    /// discharged, a monomial protects each of its variables, zero is a
    /// contradiction, anything else stays pending.
    fn settle_pending(&mut self) -> Result<()> {
        let mut keep = Vec::new();
        for p in std::mem::take(&mut self.pending_nonzero) {
            if let Some(c) = p.as_constant() {
                if c.is_zero() {
                    return Err(Error::domain(
                        "a quantity established as nonzero reduced to zero; the case assumptions are inconsistent",
                    ));
                }
            } else if p.term_count() == 1 {
                for v in p.vars() {
                    self.protected.insert(v.clone());
                }
            } else {
                keep.push(p);
            }
        }
        self.pending_nonzero = keep;
        Ok(())
    }

    /// Every tracked constraint must stay of degree ≤ 1 in the parameter;
    /// the concluding argument reads off its coefficient and would be
    /// unsound otherwise.
    fn check_degrees(&self) -> Result<()> {
        for ((i, j, k), p) in &self.residuals {
            if p.degree_in(&self.param) > 1 {
                return Err(Error::domain(format!(
                    "E[{i},{j},{k}] left the linear-in-{} regime: {p}",
                    self.param
                )));
            }
        }
        for (name, p) in &self.named {
            if p.degree_in(&self.param) > 1 {
                return Err(Error::domain(format!(
                    "{name} left the linear-in-{} regime: {p}",
                    self.param
                )));
            }
        }
        Ok(())
    }

    /// Re-derives a random sample of original obstructions from scratch and
    /// compares against the recorded residuals (times struck unit factors).
    /// A mismatch means the engine's bookkeeping broke — a hard error, not a
    /// script failure.
    fn audit_rederivability(&self, rng: &mut StdRng) -> Result<()> {
        if self.originals.is_empty() {
            return Ok(());
        }
        for _ in 0..AUDIT_SAMPLES {
            let idx = rng.gen_range(0..self.originals.len());
            let ob = &self.originals[idx];
            let key = (ob.i, ob.j, ob.k);
            let fresh = self.reduce(&ob.poly);
            let recorded = self
                .residuals
                .get(&key)
                .cloned()
                .unwrap_or_else(MultiPoly::zero);
            let expected = match self.struck.get(&key) {
                Some(units) => units * &recorded,
                None => recorded,
            };
            if fresh != expected {
                return Err(Error::domain(format!(
                    "internal audit failed: E[{},{},{}] no longer re-derives from its source equation",
                    ob.i, ob.j, ob.k
                )));
            }
        }
        Ok(())
    }

    /// Random rational values for the free unknowns are pushed through the
    /// accumulated substitutions; some original obstruction must still
    /// specialize to a nonzero rational multiple of the parameter, otherwise
    /// concluding `param = 0` would not be backed by the original system.
    fn soundness_spot_check(&self, rng: &mut StdRng) -> std::result::Result<(), String> {
        for trial in 0..SPOT_CHECK_TRIALS {
            let mut free_map: BTreeMap<String, MultiPoly> = BTreeMap::new();
            for u in &self.unknowns {
                if !self.substitutions.contains_key(u) {
                    let num = rng.gen_range(-12i64..=12);
                    let den = rng.gen_range(1i64..=4);
                    let value = Rat::from_pair(num, den)
                        .expect("denominator is positive");
                    free_map.insert(u.clone(), MultiPoly::constant(value));
                }
            }
            let mut total = free_map.clone();
            for (u, rhs) in &self.substitutions {
                total.insert(u.clone(), rhs.substitute(&free_map));
            }
            let witnessed = self.originals.iter().any(|ob| {
                let v = ob.poly.substitute(&total);
                v.degree_in(&self.param) == 1
                    && v.coeff_of(&self.param, 0).is_zero()
                    && v.coeff_of(&self.param, 1)
                        .as_constant()
                        .is_some_and(|c| !c.is_zero())
            });
            if !witnessed {
                return Err(format!(
                    "soundness spot-check failed on trial {}: no original equation specializes to a nonzero rational multiple of {}",
                    trial + 1,
                    self.param
                ));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Script steps
// ---------------------------------------------------------------------------

/// One verified move of an elimination script.
#[derive(Clone, Debug)]
pub enum Step {
    /// `solve <ref> for m[r,s] expect <poly>` — the residual must be linear
    /// in the unknown with a unit coefficient; the solved value must match
    /// the script's claim and is recorded as a substitution.
    Solve { eq: EqRef, unknown: String, expect: MultiPoly },
    /// `factor <ref> expect (f1)(f2)…` — the groups must multiply back to
    /// the residual exactly; unit factors are struck, the rest is kept.
    Factor { eq: EqRef, factors: Vec<MultiPoly> },
    /// `combine q1*<ref> + q2*<ref> … as NAME expect <poly>` — a rational
    /// linear combination of residuals, recorded under a fresh name.
    Combine { terms: Vec<(Rat, EqRef)>, name: String, expect: MultiPoly },
    /// `assert <ref> equals <poly>` — comparison only, no state change.
    Assert { eq: EqRef, expect: MultiPoly },
    /// `split m[r,s] in {v1, v2, …}` — the preceding constraint must be
    /// univariate in the unknown, the values must be exactly its rational
    /// roots, and the remaining cofactor must have none; one branch is
    /// opened per value.
    Split { unknown: String, values: Vec<Rat> },
    /// `conclude <param> = 0` — the preceding constraint must now read
    /// c·param with c a nonzero rational.
    Conclude,
}

/// A parsed script line, keeping the source text for reporting.
#[derive(Clone, Debug)]
pub struct ScriptLine {
    pub number: usize,
    pub text: String,
    pub step: Step,
}

/// A parsed elimination script.
#[derive(Clone, Debug)]
pub struct ReplayScript {
    lines: Vec<ScriptLine>,
}

const KEYWORDS: &[&str] = &[
    "solve", "factor", "combine", "assert", "split", "conclude", "for",
    "expect", "equals", "as", "in",
];

impl ReplayScript {
    pub fn lines(&self) -> &[ScriptLine] {
        &self.lines
    }

    pub fn has_conclusion(&self) -> bool {
        self.lines.iter().any(|l| matches!(l.step, Step::Conclude))
    }

    /// Parses a script against a profile. `#` starts a comment; blank lines
    /// are skipped. Referenced names must be defined by an earlier `combine`;
    /// `conclude` may only be the final step.
    pub fn parse(text: &str, ansatz: &Ansatz) -> Result<ReplayScript> {
        let resolve = |name: &str| -> Option<MultiPoly> {
            if name == ansatz.param() || ansatz.parse_unknown(name).is_some() {
                Some(MultiPoly::var(name))
            } else {
                None
            }
        };
        let mut lines = Vec::new();
        let mut defined: BTreeSet<String> = BTreeSet::new();
        let mut concluded = false;
        for (idx, raw) in text.lines().enumerate() {
            let number = idx + 1;
            let toks =
                tokenize(raw, true).map_err(|m| Error::parse(number, m))?;
            if toks.is_empty() {
                continue;
            }
            if concluded {
                return Err(Error::parse(
                    number,
                    "no step may follow `conclude`",
                ));
            }
            let step =
                parse_step(&toks, ansatz, &resolve, &mut defined, number)?;
            if matches!(step, Step::Conclude) {
                concluded = true;
            }
            lines.push(ScriptLine {
                number,
                text: raw.trim().to_string(),
                step,
            });
        }
        if lines.is_empty() {
            return Err(Error::parse(0, "the script contains no steps"));
        }
        Ok(ReplayScript { lines })
    }
}

fn split_ident<'t>(
    toks: &'t [Token],
    word: &str,
) -> Option<(&'t [Token], &'t [Token])> {
    toks.iter()
        .position(|t| matches!(t, Token::Ident(w) if w == word))
        .map(|i| (&toks[..i], &toks[i + 1..]))
}

fn parse_eq_ref(
    name: &str,
    dim: usize,
    defined: &BTreeSet<String>,
    line: usize,
) -> Result<EqRef> {
    if name.contains('[') {
        let Some((head, idx)) = indexed_parts(name) else {
            return Err(Error::parse(
                line,
                format!("`{name}` is not a well-formed equation reference"),
            ));
        };
        if head != "E" || idx.len() != 3 {
            return Err(Error::parse(
                line,
                format!("`{name}` is not an equation reference; expected E[i,j,k]"),
            ));
        }
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        if i >= j || j >= dim || k >= dim {
            return Err(Error::parse(
                line,
                format!(
                    "indices in `{name}` must satisfy i < j < {dim} and k < {dim}"
                ),
            ));
        }
        Ok(EqRef::Entry(i, j, k))
    } else if defined.contains(name) {
        Ok(EqRef::Named(name.to_string()))
    } else {
        Err(Error::parse(
            line,
            format!("`{name}` names no constraint defined earlier in the script"),
        ))
    }
}

fn single_ref(
    toks: &[Token],
    dim: usize,
    defined: &BTreeSet<String>,
    line: usize,
) -> Result<EqRef> {
    match toks {
        [Token::Ident(name)] => parse_eq_ref(name, dim, defined, line),
        _ => Err(Error::parse(
            line,
            "expected exactly one equation reference here",
        )),
    }
}

fn parse_expr(
    toks: &[Token],
    resolve: &dyn Fn(&str) -> Option<MultiPoly>,
    line: usize,
) -> Result<MultiPoly> {
    ExprParser::parse_all(toks, resolve).map_err(|m| Error::parse(line, m))
}

/// Parses `INT [ '/' INT ]` starting at `toks[0]`; returns the value and the
/// number of tokens consumed.
fn parse_rational_literal(toks: &[Token], line: usize) -> Result<(Rat, usize)> {
    let Some(Token::Int(numer)) = toks.first() else {
        return Err(Error::parse(line, "expected a rational literal"));
    };
    if let (Some(Token::Slash), Some(Token::Int(denom))) =
        (toks.get(1), toks.get(2))
    {
        let value = Rat::parse(&format!("{numer}/{denom}"))
            .map_err(|e| Error::parse(line, e.to_string()))?;
        Ok((value, 3))
    } else {
        let value = Rat::parse(numer)
            .map_err(|e| Error::parse(line, e.to_string()))?;
        Ok((value, 1))
    }
}

fn parse_combine_terms(
    toks: &[Token],
    dim: usize,
    defined: &BTreeSet<String>,
    line: usize,
) -> Result<Vec<(Rat, EqRef)>> {
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < toks.len() {
        let mut negative = false;
        while let Some(t) = toks.get(pos) {
            match t {
                Token::Plus => pos += 1,
                Token::Minus => {
                    negative = !negative;
                    pos += 1;
                }
                _ => break,
            }
        }
        let coeff = if matches!(toks.get(pos), Some(Token::Int(_))) {
            let (c, used) = parse_rational_literal(&toks[pos..], line)?;
            pos += used;
            if !matches!(toks.get(pos), Some(Token::Star)) {
                return Err(Error::parse(
                    line,
                    "expected `*` between the coefficient and the reference",
                ));
            }
            pos += 1;
            c
        } else {
            Rat::one()
        };
        let coeff = if negative { -&coeff } else { coeff };
        let Some(Token::Ident(name)) = toks.get(pos) else {
            return Err(Error::parse(line, "expected an equation reference"));
        };
        pos += 1;
        out.push((coeff, parse_eq_ref(name, dim, defined, line)?));
        match toks.get(pos) {
            None | Some(Token::Plus) | Some(Token::Minus) => {}
            Some(t) => {
                return Err(Error::parse(
                    line,
                    format!("unexpected {t} in the combination"),
                ))
            }
        }
    }
    if out.is_empty() {
        return Err(Error::parse(line, "the combination lists no terms"));
    }
    Ok(out)
}

/// Splits `(f1)(f2)…` at parenthesis depth 0 and parses each group.
fn parse_factor_groups(
    toks: &[Token],
    resolve: &dyn Fn(&str) -> Option<MultiPoly>,
    line: usize,
) -> Result<Vec<MultiPoly>> {
    let mut groups = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (idx, t) in toks.iter().enumerate() {
        match t {
            Token::LParen => {
                if depth == 0 {
                    start = idx + 1;
                }
                depth += 1;
            }
            Token::RParen => {
                if depth == 0 {
                    return Err(Error::parse(line, "unmatched `)`"));
                }
                depth -= 1;
                if depth == 0 {
                    groups.push(parse_expr(&toks[start..idx], resolve, line)?);
                }
            }
            other => {
                if depth == 0 {
                    return Err(Error::parse(
                        line,
                        format!(
                            "expected a parenthesized factor, found {other}"
                        ),
                    ));
                }
            }
        }
    }
    if depth != 0 {
        return Err(Error::parse(line, "missing `)` in the factor list"));
    }
    if groups.len() < 2 {
        return Err(Error::parse(
            line,
            "a factorization needs at least two parenthesized factors",
        ));
    }
    Ok(groups)
}

fn parse_split_values(toks: &[Token], line: usize) -> Result<Vec<Rat>> {
    match (toks.first(), toks.last()) {
        (Some(Token::LBrace), Some(Token::RBrace)) => {}
        _ => {
            return Err(Error::parse(
                line,
                "split values must be braced: `{v1, v2}`",
            ))
        }
    }
    let inner = &toks[1..toks.len() - 1];
    let mut values = Vec::new();
    let mut pos = 0;
    while pos < inner.len() {
        let mut negative = false;
        while let Some(Token::Minus) = inner.get(pos) {
            negative = !negative;
            pos += 1;
        }
        let (v, used) = parse_rational_literal(&inner[pos..], line)?;
        pos += used;
        values.push(if negative { -&v } else { v });
        match inner.get(pos) {
            Some(Token::Comma) => pos += 1,
            None => break,
            Some(t) => {
                return Err(Error::parse(
                    line,
                    format!("unexpected {t} in the case list"),
                ))
            }
        }
    }
    if values.is_empty() {
        return Err(Error::parse(line, "the case list is empty"));
    }
    Ok(values)
}

fn parse_step(
    toks: &[Token],
    ansatz: &Ansatz,
    resolve: &dyn Fn(&str) -> Option<MultiPoly>,
    defined: &mut BTreeSet<String>,
    line: usize,
) -> Result<Step> {
    let Some(Token::Ident(keyword)) = toks.first() else {
        return Err(Error::parse(line, "each step starts with a keyword"));
    };
    let rest = &toks[1..];
    let dim = ansatz.dim();
    match keyword.as_str() {
        "solve" => {
            let Some((head, tail)) = split_ident(rest, "for") else {
                return Err(Error::parse(
                    line,
                    "solve syntax: solve E[i,j,k] for m[r,s] expect <poly>",
                ));
            };
            let eq = single_ref(head, dim, defined, line)?;
            let Some((target, expect_toks)) = split_ident(tail, "expect")
            else {
                return Err(Error::parse(
                    line,
                    "solve needs an `expect <poly>` clause",
                ));
            };
            let [Token::Ident(unknown)] = target else {
                return Err(Error::parse(
                    line,
                    "solve targets exactly one unknown m[r,s]",
                ));
            };
            if ansatz.parse_unknown(unknown).is_none() {
                return Err(Error::parse(
                    line,
                    format!("`{unknown}` is not an unknown of the profile"),
                ));
            }
            let expect = parse_expr(expect_toks, resolve, line)?;
            Ok(Step::Solve { eq, unknown: unknown.clone(), expect })
        }
        "factor" => {
            let Some((head, tail)) = split_ident(rest, "expect") else {
                return Err(Error::parse(
                    line,
                    "factor syntax: factor <ref> expect (f1)(f2)…",
                ));
            };
            let eq = single_ref(head, dim, defined, line)?;
            let factors = parse_factor_groups(tail, resolve, line)?;
            Ok(Step::Factor { eq, factors })
        }
        "combine" => {
            let Some((head, tail)) = split_ident(rest, "as") else {
                return Err(Error::parse(
                    line,
                    "combine syntax: combine q1*<ref> + q2*<ref> as NAME expect <poly>",
                ));
            };
            let terms = parse_combine_terms(head, dim, defined, line)?;
            let Some((name_toks, expect_toks)) = split_ident(tail, "expect")
            else {
                return Err(Error::parse(
                    line,
                    "combine needs an `expect <poly>` clause",
                ));
            };
            let [Token::Ident(name)] = name_toks else {
                return Err(Error::parse(
                    line,
                    "combine needs exactly one fresh name after `as`",
                ));
            };
            if name.contains('[')
                || KEYWORDS.contains(&name.as_str())
                || name == ansatz.param()
                || defined.contains(name)
            {
                return Err(Error::parse(
                    line,
                    format!("`{name}` cannot be used as a fresh constraint name"),
                ));
            }
            let expect = parse_expr(expect_toks, resolve, line)?;
            defined.insert(name.clone());
            Ok(Step::Combine { terms, name: name.clone(), expect })
        }
        "assert" => {
            let Some((head, tail)) = split_ident(rest, "equals") else {
                return Err(Error::parse(
                    line,
                    "assert syntax: assert <ref> equals <poly>",
                ));
            };
            let eq = single_ref(head, dim, defined, line)?;
            let expect = parse_expr(tail, resolve, line)?;
            Ok(Step::Assert { eq, expect })
        }
        "split" => {
            let Some((head, tail)) = split_ident(rest, "in") else {
                return Err(Error::parse(
                    line,
                    "split syntax: split m[r,s] in {v1, v2}",
                ));
            };
            let [Token::Ident(unknown)] = head else {
                return Err(Error::parse(
                    line,
                    "split targets exactly one unknown m[r,s]",
                ));
            };
            if ansatz.parse_unknown(unknown).is_none() {
                return Err(Error::parse(
                    line,
                    format!("`{unknown}` is not an unknown of the profile"),
                ));
            }
            let values = parse_split_values(tail, line)?;
            Ok(Step::Split { unknown: unknown.clone(), values })
        }
        "conclude" => match rest {
            [Token::Ident(p), Token::Eq, Token::Int(z)]
                if p == ansatz.param() && z == "0" =>
            {
                Ok(Step::Conclude)
            }
            _ => Err(Error::parse(
                line,
                format!("conclude must read `conclude {} = 0`", ansatz.param()),
            )),
        },
        other => Err(Error::parse(
            line,
            format!("unknown step keyword `{other}`"),
        )),
    }
}

// ---------------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------------

/// Outcome of one branch after a successful replay.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BranchReport {
    /// Case assumptions, e.g. `m[1,1] = -1`; `unconditional` if none.
    pub label: String,
    /// Steps executed on this branch (shared prefix included).
    pub steps_run: usize,
    /// Unknowns eliminated by the end of the script.
    pub eliminated: usize,
    /// The rendered final constraint (`-5/36*t = 0` style) when the branch
    /// reached a `conclude` step.
    pub final_constraint: Option<String>,
}

/// Successful replay summary.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ReplayReport {
    /// Size of the obstruction system the script started from.
    pub obstructions: usize,
    /// Whether every branch reached a `conclude` step.
    pub concluded: bool,
    pub branches: Vec<BranchReport>,
}

/// Where and why a replay failed.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ReplayFailure {
    /// 1-based line number in the script.
    pub line: usize,
    /// The script line as written.
    pub text: String,
    /// Which branch failed.
    pub branch: String,
    pub reason: String,
    /// The script's claim, reduced under the branch's substitutions.
    pub expected: Option<String>,
    /// What the engine recomputed instead.
    pub computed: Option<String>,
}

/// Result of replaying a script: either every step of every branch verified,
/// or the first offending step with the recomputed value.
#[derive(Clone, Debug)]
pub enum Verdict {
    Pass(ReplayReport),
    Fail(Box<ReplayFailure>),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass(_))
    }
}

struct StepFault {
    reason: String,
    expected: Option<String>,
    computed: Option<String>,
}

impl StepFault {
    fn plain(reason: impl Into<String>) -> Self {
        StepFault { reason: reason.into(), expected: None, computed: None }
    }

    fn mismatch(
        reason: impl Into<String>,
        expected: &MultiPoly,
        computed: &MultiPoly,
    ) -> Self {
        StepFault {
            reason: reason.into(),
            expected: Some(expected.to_string()),
            computed: Some(computed.to_string()),
        }
    }
}

enum StepOutcome {
    Progressed,
    Concluded(String),
}

fn run_step(
    state: &mut EliminationState,
    step: &Step,
    rng: &mut StdRng,
) -> std::result::Result<StepOutcome, StepFault> {
    match step {
        Step::Assert { eq, expect } => {
            let actual =
                state.residual(eq).map_err(|e| StepFault::plain(e.to_string()))?;
            let want = state.reduce(expect);
            if actual != want {
                return Err(StepFault::mismatch(
                    format!("{eq} does not equal the asserted polynomial"),
                    &want,
                    &actual,
                ));
            }
            state.last_ref = Some(eq.clone());
            Ok(StepOutcome::Progressed)
        }
        Step::Solve { eq, unknown, expect } => {
            let residual =
                state.residual(eq).map_err(|e| StepFault::plain(e.to_string()))?;
            match residual.degree_in(unknown) {
                0 => {
                    return Err(StepFault::plain(format!(
                        "{eq} does not involve {unknown}; its residual is {residual}"
                    )))
                }
                1 => {}
                d => {
                    return Err(StepFault::plain(format!(
                        "{eq} has degree {d} in {unknown}, so it cannot be solved linearly"
                    )))
                }
            }
            let a = residual.coeff_of(unknown, 1);
            let b = residual.coeff_of(unknown, 0);
            if !state.is_unit(&a) {
                return Err(StepFault::plain(format!(
                    "the coefficient of {unknown} in {eq} is {a}, which is not known to be invertible"
                )));
            }
            let Some(solved) = (-&b).exact_div(&a) else {
                return Err(StepFault::plain(format!(
                    "solving {eq} for {unknown} does not yield a polynomial value"
                )));
            };
            let want = state.reduce(expect);
            if want != solved {
                return Err(StepFault::mismatch(
                    format!("{eq} solves {unknown} to a different value than claimed"),
                    &want,
                    &solved,
                ));
            }
            state
                .apply_substitution(unknown, solved)
                .map_err(|e| StepFault::plain(e.to_string()))?;
            state.last_ref = Some(eq.clone());
            Ok(StepOutcome::Progressed)
        }
        Step::Factor { eq, factors } => {
            let residual =
                state.residual(eq).map_err(|e| StepFault::plain(e.to_string()))?;
            if residual.is_zero() {
                return Err(StepFault::plain(format!(
                    "{eq} has zero residual; there is nothing to factor"
                )));
            }
            let reduced: Vec<MultiPoly> =
                factors.iter().map(|f| state.reduce(f)).collect();
            let mut product = MultiPoly::one();
            for f in &reduced {
                product = &product * f;
            }
            if product != residual {
                return Err(StepFault::mismatch(
                    format!("the factors do not multiply back to {eq}"),
                    &product,
                    &residual,
                ));
            }
            let mut kept = MultiPoly::one();
            let mut removed = MultiPoly::one();
            let mut any_kept = false;
            for f in &reduced {
                if state.is_unit(f) {
                    removed = &removed * f;
                } else {
                    kept = &kept * f;
                    any_kept = true;
                }
            }
            if !any_kept {
                return Err(StepFault::plain(format!(
                    "every factor of {eq} is invertible, so the constraint is contradictory"
                )));
            }
            match eq {
                EqRef::Entry(i, j, k) => {
                    state.residuals.insert((*i, *j, *k), kept);
                    let entry = state
                        .struck
                        .entry((*i, *j, *k))
                        .or_insert_with(MultiPoly::one);
                    *entry = &*entry * &removed;
                }
                EqRef::Named(name) => {
                    let slot = state
                        .named
                        .iter_mut()
                        .rev()
                        .find(|(n, _)| n == name)
                        .expect("reference resolved above");
                    slot.1 = kept;
                }
            }
            state.last_ref = Some(eq.clone());
            Ok(StepOutcome::Progressed)
        }
        Step::Combine { terms, name, expect } => {
            let mut acc = MultiPoly::zero();
            for (q, eq) in terms {
                let r = state
                    .residual(eq)
                    .map_err(|e| StepFault::plain(e.to_string()))?;
                acc = &acc + &r.scale(q);
            }
            let want = state.reduce(expect);
            if acc != want {
                return Err(StepFault::mismatch(
                    format!("the combination {name} does not match its claim"),
                    &want,
                    &acc,
                ));
            }
            state.named.push((name.clone(), acc));
            state
                .check_degrees()
                .map_err(|e| StepFault::plain(e.to_string()))?;
            state.last_ref = Some(EqRef::Named(name.clone()));
            Ok(StepOutcome::Progressed)
        }
        Step::Split { .. } => Err(StepFault::plain(
            "split reached the single-branch executor; this is an engine bug",
        )),
        Step::Conclude => {
            let Some(eq) = state.last_ref.clone() else {
                return Err(StepFault::plain(
                    "conclude needs a preceding constraint to read from",
                ));
            };
            let residual =
                state.residual(&eq).map_err(|e| StepFault::plain(e.to_string()))?;
            let linear = residual.degree_in(&state.param) == 1
                && residual.coeff_of(&state.param, 0).is_zero();
            let coeff = residual.coeff_of(&state.param, 1).as_constant();
            let ok = linear && coeff.map_or(false, |c| !c.is_zero());
            if !ok {
                return Err(StepFault::plain(format!(
                    "the final residual of {eq} is {residual}, not a nonzero rational multiple of {}",
                    state.param
                )));
            }
            state
                .soundness_spot_check(rng)
                .map_err(StepFault::plain)?;
            Ok(StepOutcome::Concluded(format!("{residual} = 0")))
        }
    }
}

/// Validates a `split` against the preceding constraint and returns one
/// child state per case value, in script order.
fn split_branch(
    state: &EliminationState,
    unknown: &str,
    values: &[Rat],
) -> std::result::Result<Vec<EliminationState>, StepFault> {
    if state.substitutions.contains_key(unknown) {
        return Err(StepFault::plain(format!(
            "{unknown} has already been eliminated; it cannot be split on"
        )));
    }
    let Some(eq) = state.last_ref.clone() else {
        return Err(StepFault::plain(
            "split needs a preceding constraint to branch on",
        ));
    };
    let f = state.residual(&eq).map_err(|e| StepFault::plain(e.to_string()))?;
    if f.is_zero() || f.as_constant().is_some() {
        return Err(StepFault::plain(format!(
            "the branching constraint {eq} is constant ({f}); it cannot justify cases"
        )));
    }
    if f.sole_var() != Some(unknown) {
        return Err(StepFault::plain(format!(
            "the branching constraint {eq} = {f} is not univariate in {unknown}"
        )));
    }
    let roots =
        f.rational_roots().map_err(|e| StepFault::plain(e.to_string()))?;
    let root_set: BTreeSet<Rat> = roots.iter().map(|(r, _)| r.clone()).collect();
    let listed: BTreeSet<Rat> = values.iter().cloned().collect();
    if listed.len() != values.len() {
        return Err(StepFault::plain("the case list repeats a value"));
    }
    if root_set != listed {
        let render = |set: &BTreeSet<Rat>| {
            set.iter().map(Rat::to_string).collect::<Vec<_>>().join(", ")
        };
        return Err(StepFault {
            reason: format!(
                "the case list must enumerate exactly the rational roots of {f}"
            ),
            expected: Some(format!("{{{}}}", render(&root_set))),
            computed: Some(format!("{{{}}}", render(&listed))),
        });
    }
    // Branch completeness: the listed roots exhaust f up to a factor with no
    // rational roots, so no rational case is missing.
    let u = MultiPoly::var(unknown);
    let mut h = MultiPoly::one();
    for (r, mult) in &roots {
        let linear = &u - &MultiPoly::constant(r.clone());
        h = &h * &linear.pow(*mult as u16);
    }
    let Some(cofactor) = f.exact_div(&h) else {
        return Err(StepFault::plain(format!(
            "the root factors of {f} do not divide it; root extraction is inconsistent"
        )));
    };
    if cofactor.as_constant().is_none() {
        let extra = cofactor
            .rational_roots()
            .map_err(|e| StepFault::plain(e.to_string()))?;
        if !extra.is_empty() {
            return Err(StepFault::plain(format!(
                "the cofactor {cofactor} still has rational roots; the case list is incomplete"
            )));
        }
    }
    let mut children = Vec::new();
    for v in values {
        let mut child = state.clone();
        child.assumptions.push((unknown.to_string(), v.clone()));
        child
            .apply_substitution(unknown, MultiPoly::constant(v.clone()))
            .map_err(|e| StepFault::plain(e.to_string()))?;
        child.last_ref = None;
        children.push(child);
    }
    Ok(children)
}

struct Branch {
    state: EliminationState,
    steps_run: usize,
    concluded: Option<String>,
}

/// Replays a script against an elimination state. `Ok(Fail…)` reports the
/// first step whose claim does not verify; `Err` is reserved for broken
/// engine invariants.
pub fn replay(script: &ReplayScript, initial: EliminationState) -> Result<Verdict> {
    replay_with_states(script, initial).map(|(verdict, _)| verdict)
}

/// Like [`replay`], additionally returning the final per-branch states (in
/// branch order) so callers can inspect the accumulated substitutions. On
/// failure the returned states are whatever the branches held when the
/// offending step was reached.
pub fn replay_with_states(
    script: &ReplayScript,
    initial: EliminationState,
) -> Result<(Verdict, Vec<EliminationState>)> {
    let obstructions = initial.originals.len();
    let mut rng = StdRng::seed_from_u64(REPLAY_SEED);
    let mut branches =
        vec![Branch { state: initial, steps_run: 0, concluded: None }];
    for line in &script.lines {
        if let Step::Split { unknown, values } = &line.step {
            let mut next = Vec::new();
            for branch in &branches {
                match split_branch(&branch.state, unknown, values) {
                    Ok(children) => {
                        for state in children {
                            state.audit_rederivability(&mut rng)?;
                            next.push(Branch {
                                state,
                                steps_run: branch.steps_run + 1,
                                concluded: None,
                            });
                        }
                    }
                    Err(fault) => {
                        let failure =
                            failure_at(line, &branch.state, fault);
                        let states =
                            branches.into_iter().map(|b| b.state).collect();
                        return Ok((Verdict::Fail(Box::new(failure)), states));
                    }
                }
            }
            branches = next;
        } else {
            for idx in 0..branches.len() {
                let branch = &mut branches[idx];
                match run_step(&mut branch.state, &line.step, &mut rng) {
                    Ok(StepOutcome::Progressed) => branch.steps_run += 1,
                    Ok(StepOutcome::Concluded(rendered)) => {
                        branch.steps_run += 1;
                        branch.concluded = Some(rendered);
                    }
                    Err(fault) => {
                        let failure = failure_at(line, &branch.state, fault);
                        let states =
                            branches.into_iter().map(|b| b.state).collect();
                        return Ok((Verdict::Fail(Box::new(failure)), states));
                    }
                }
                branches[idx].state.audit_rederivability(&mut rng)?;
            }
        }
    }
    let report = ReplayReport {
        obstructions,
        concluded: branches.iter().all(|b| b.concluded.is_some()),
        branches: branches
            .iter()
            .map(|b| BranchReport {
                label: b.state.branch_label(),
                steps_run: b.steps_run,
                eliminated: b.state.substitutions.len(),
                final_constraint: b.concluded.clone(),
            })
            .collect(),
    };
    let states = branches.into_iter().map(|b| b.state).collect();
    Ok((Verdict::Pass(report), states))
}

fn failure_at(
    line: &ScriptLine,
    state: &EliminationState,
    fault: StepFault,
) -> ReplayFailure {
    ReplayFailure {
        line: line.number,
        text: line.text.clone(),
        branch: state.branch_label(),
        reason: fault.reason,
        expected: fault.expected,
        computed: fault.computed,
    }
}

// ---------------------------------------------------------------------------
// The second-diagonal pass
// ---------------------------------------------------------------------------

/// Propagates the recurrence along the second diagonal: once m\[1,1\] is
/// pinned to ±1, each equation E\[0,i,i+2\] solves m\[i+3,i+2\] to
/// (±1)^(i+2) · m\[3,2\]. Entries already eliminated are skipped, so this
/// picks up where a script prelude left off. Errors if any residual fails to
/// have the expected linear shape or solves to anything else.
pub fn second_diagonal_step(state: &mut EliminationState) -> Result<()> {
    let alpha = state
        .assumptions
        .iter()
        .find(|(u, _)| u == &unknown_name(1, 1))
        .map(|(_, v)| v.clone())
        .ok_or_else(|| {
            Error::domain(
                "the second-diagonal pass needs m[1,1] pinned to a case value first",
            )
        })?;
    if !(&alpha * &alpha).is_one() {
        return Err(Error::domain(format!(
            "the second-diagonal pass needs m[1,1] = 1 or -1, not {alpha}"
        )));
    }
    let m32 = unknown_name(3, 2);
    for i in 1..=(state.dim - 3) {
        let target = unknown_name(i + 3, i + 2);
        if state.substitutions.contains_key(&target) {
            continue;
        }
        let eq = EqRef::Entry(0, i, i + 2);
        let residual = state.residual(&eq)?;
        if residual.degree_in(&target) != 1 {
            return Err(Error::domain(format!(
                "{eq} is not linear in {target}: {residual}"
            )));
        }
        let a = residual.coeff_of(&target, 1);
        let b = residual.coeff_of(&target, 0);
        if !state.is_unit(&a) {
            return Err(Error::domain(format!(
                "the coefficient of {target} in {eq} is {a}, which is not known to be invertible"
            )));
        }
        let solved = (-&b).exact_div(&a).ok_or_else(|| {
            Error::domain(format!(
                "solving {eq} for {target} does not yield a polynomial value"
            ))
        })?;
        let scale = alpha.pow((i + 2) as i32)?;
        let expected = MultiPoly::monomial(scale, &m32, 1);
        if solved != expected {
            return Err(Error::domain(format!(
                "{eq} solves {target} to {solved}, expected {expected}"
            )));
        }
        state.apply_substitution(&target, solved)?;
        state.last_ref = Some(eq);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
