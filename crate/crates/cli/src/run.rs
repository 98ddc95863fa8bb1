//! The command implementations. Each returns an [`Outcome`] carrying the
//! exit code (0 = success / property holds, 1 = checked and found false),
//! a deterministic JSON payload, and a human-readable body. Errors bubble
//! up to `main`, which reports them on stderr and exits 2.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use nilscope_core::deformation::{deform_by_ideal_derivation, DeformationFamily};
use nilscope_core::derivations::{
    derivation_space, is_char_nilpotent, leibniz_failure, NilVerdict,
};
use nilscope_core::iso::{
    build_ansatz, generate_obstructions, replay_with_states, EliminationState,
    ReplayScript, Verdict,
};
use nilscope_core::lie::{
    parse_algebra, serialize_algebra, LieAlgebra, ParsedAlgebra, Subspace,
};
use nilscope_core::linalg::Matrix;
use nilscope_core::scalar::{Rat, Scalar};
use nilscope_core::{Error, Result};

use crate::report::{read_input, InputHash};

/// What a command produced: an exit code (0 or 1), the JSON payload, and
/// the human-readable body. `bare` marks commands whose human output is a
/// document of its own (a serialized table) that must stay pipeable, so the
/// run-report trailer is suppressed.
pub struct Outcome {
    pub exit: i32,
    pub payload: Value,
    pub human: String,
    pub bare: bool,
}

impl Outcome {
    fn new(exit: i32, payload: Value, human: String) -> Self {
        Outcome { exit, payload, human, bare: false }
    }
}

fn load_algebra(path: &Path, hashes: &mut Vec<InputHash>) -> Result<ParsedAlgebra> {
    let text = read_input(path, hashes)?;
    parse_algebra(&text)
}

/// Parses `param=value` assignments with exact rational values.
fn parse_assignments(pairs: &[String]) -> Result<BTreeMap<String, Rat>> {
    let mut map = BTreeMap::new();
    for pair in pairs {
        let Some((name, value)) = pair.split_once('=') else {
            return Err(Error::domain(format!(
                "assignment `{pair}` is not of the form param=value"
            )));
        };
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::domain(format!(
                "assignment `{pair}` names no parameter"
            )));
        }
        let value = Rat::parse(value.trim())?;
        if map.insert(name.to_string(), value).is_some() {
            return Err(Error::domain(format!(
                "parameter `{name}` is assigned twice"
            )));
        }
    }
    Ok(map)
}

/// Renders a coordinate vector as a combination of basis labels, e.g.
/// `e5 - 9/10*e12`; `0` when every coordinate vanishes.
fn render_combination<K: Scalar>(coeffs: &[K], labels: &[String]) -> String {
    let mut out = String::new();
    for (idx, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let s = c.to_string();
        let (neg, mag) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
        // A magnitude with interior arithmetic (a parametric coefficient)
        // needs parentheses to stay unambiguous next to the label.
        let needs_parens = mag.contains(['+', '-', ' ']);
        let mag = if needs_parens { format!("({mag})") } else { mag };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag == "1" {
            out.push_str(&labels[idx]);
        } else {
            let _ = write!(out, "{mag}*{}", labels[idx]);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Renders an ascending monic coefficient list as a polynomial in `x`,
/// highest degree first, e.g. `x^3 - 43/9*x^2`.
fn render_charpoly<K: Scalar>(coeffs: &[K]) -> String {
    let degree = coeffs.len().saturating_sub(1);
    let mut out = String::new();
    for power in (0..=degree).rev() {
        let c = &coeffs[power];
        if c.is_zero() {
            continue;
        }
        let s = c.to_string();
        let (neg, mag) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
        let needs_parens = mag.contains(['+', '-', ' ']);
        let mag = if needs_parens { format!("({mag})") } else { mag };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match power {
            0 => out.push_str(&mag),
            _ => {
                if mag != "1" {
                    let _ = write!(out, "{mag}*");
                }
                if power == 1 {
                    out.push('x');
                } else {
                    let _ = write!(out, "x^{power}");
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

// ---------------------------------------------------------------------------
// check-jacobi
// ---------------------------------------------------------------------------

fn jacobi_outcome<K: Scalar>(alg: &LieAlgebra<K>) -> Outcome {
    let n = alg.dim();
    let triples = if n >= 3 { n * (n - 1) * (n - 2) / 6 } else { 0 };
    let report = alg.jacobi_report();
    let labels = alg.labels();
    let defects: Vec<Value> = report
        .iter()
        .map(|d| {
            json!({
                "triple": [d.i, d.j, d.k],
                "basis": [labels[d.i].clone(), labels[d.j].clone(), labels[d.k].clone()],
                "defect": render_combination(&d.defect, labels),
            })
        })
        .collect();
    let ok = report.is_empty();
    let mut human = format!(
        "checked {triples} Jacobi triples on `{}` (dimension {n}): ",
        alg.name()
    );
    if ok {
        human.push_str("all identities hold");
    } else {
        let _ = write!(human, "{} FAIL", report.len());
        for d in &report {
            let _ = write!(
                human,
                "\n  [{}, {}, {}] leaves defect {}",
                labels[d.i],
                labels[d.j],
                labels[d.k],
                render_combination(&d.defect, labels)
            );
        }
    }
    let payload = json!({
        "algebra": alg.name(),
        "dim": n,
        "triples_checked": triples,
        "jacobi_holds": ok,
        "defects": defects,
    });
    Outcome::new(if ok { 0 } else { 1 }, payload, human)
}

pub fn cmd_check_jacobi(file: &Path, hashes: &mut Vec<InputHash>) -> Result<Outcome> {
    Ok(match load_algebra(file, hashes)? {
        ParsedAlgebra::Rational(alg) => jacobi_outcome(&alg),
        ParsedAlgebra::Parametric(alg) => jacobi_outcome(&alg),
    })
}

// ---------------------------------------------------------------------------
// series
// ---------------------------------------------------------------------------

fn series_outcome<K: Scalar>(alg: &LieAlgebra<K>, lower: bool) -> Outcome {
    let chain = if lower {
        alg.lower_central_series()
    } else {
        alg.upper_central_series()
    };
    let dims: Vec<usize> = chain.iter().map(Subspace::dim).collect();
    let kind = if lower { "lower-central" } else { "upper-central" };
    let nilpotent = alg.is_nilpotent();
    let rendered: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    let human = format!(
        "{kind} series of `{}` (dimension {}): {}\nnilpotent: {nilpotent}",
        alg.name(),
        alg.dim(),
        rendered.join(if lower { " > " } else { " < " }),
    );
    let payload = json!({
        "algebra": alg.name(),
        "dim": alg.dim(),
        "kind": kind,
        "dims": dims,
        "nilpotent": nilpotent,
    });
    Outcome::new(0, payload, human)
}

pub fn cmd_series(file: &Path, lower: bool, hashes: &mut Vec<InputHash>) -> Result<Outcome> {
    Ok(match load_algebra(file, hashes)? {
        ParsedAlgebra::Rational(alg) => series_outcome(&alg, lower),
        ParsedAlgebra::Parametric(alg) => series_outcome(&alg, lower),
    })
}

// ---------------------------------------------------------------------------
// derivations
// ---------------------------------------------------------------------------

fn derivations_outcome<K: Scalar>(alg: &LieAlgebra<K>) -> Result<Outcome> {
    let space = derivation_space(alg)?;
    let human = format!(
        "the derivation algebra of `{}` has dimension {} (algebra dimension {})",
        alg.name(),
        space.dim(),
        alg.dim()
    );
    let payload = json!({
        "algebra": alg.name(),
        "algebra_dim": alg.dim(),
        "derivation_dim": space.dim(),
    });
    Ok(Outcome::new(0, payload, human))
}

pub fn cmd_derivations(file: &Path, hashes: &mut Vec<InputHash>) -> Result<Outcome> {
    match load_algebra(file, hashes)? {
        ParsedAlgebra::Rational(alg) => derivations_outcome(&alg),
        ParsedAlgebra::Parametric(alg) => derivations_outcome(&alg),
    }
}

// ---------------------------------------------------------------------------
// char-nilpotent
// ---------------------------------------------------------------------------

fn char_nilpotent_outcome<K: nilscope_core::derivations::SymbolicField>(
    alg: &LieAlgebra<K>,
    note: &str,
) -> Result<Outcome> {
    let report = is_char_nilpotent(alg)?;
    let name = alg.name();
    match &report.verdict {
        NilVerdict::AllNilpotent(cert) => {
            let flag_dims = cert.flag_dims();
            let excluded: Vec<String> = cert
                .excluded_denominator_roots()
                .iter()
                .map(Rat::to_string)
                .collect();
            let rendered_dims: Vec<String> =
                flag_dims.iter().map(|d| d.to_string()).collect();
            let mut human = format!(
                "`{name}`{note} is characteristically nilpotent: every derivation is a nilpotent operator\n\
                 derivation algebra dimension: {}\n\
                 nilpotency flag dimensions: {}",
                report.derivation_dim,
                rendered_dims.join(" > "),
            );
            if !excluded.is_empty() {
                let _ = write!(
                    human,
                    "\nholds for generic parameter values; re-run specialized at: {}",
                    excluded.join(", ")
                );
            }
            let payload = json!({
                "algebra": name,
                "algebra_dim": alg.dim(),
                "derivation_dim": report.derivation_dim,
                "char_nilpotent": true,
                "certificate": {
                    "kind": "nil-flag",
                    "flag_dims": flag_dims,
                    "excluded_parameter_values": excluded,
                    "checked": true,
                },
            });
            Ok(Outcome::new(0, payload, human))
        }
        NilVerdict::NonNilpotent(witness) => {
            let combination: Vec<String> =
                witness.combination().iter().map(|c| c.to_string()).collect();
            let matrix = witness.matrix();
            let rows: Vec<Vec<String>> = (0..matrix.rows())
                .map(|r| matrix.row(r).iter().map(|e| e.to_string()).collect())
                .collect();
            let charpoly = render_charpoly(witness.charpoly());
            let mut human = format!(
                "`{name}`{note} is NOT characteristically nilpotent: a non-nilpotent derivation exists\n\
                 derivation algebra dimension: {}\n\
                 witness (coefficients over the derivation basis): [{}]\n\
                 witness matrix rows:",
                report.derivation_dim,
                combination.join(", "),
            );
            for row in &rows {
                let _ = write!(human, "\n  [{}]", row.join(", "));
            }
            let _ = write!(human, "\ncharacteristic polynomial: {charpoly}");
            let payload = json!({
                "algebra": name,
                "algebra_dim": alg.dim(),
                "derivation_dim": report.derivation_dim,
                "char_nilpotent": false,
                "certificate": {
                    "kind": "witness",
                    "element": {
                        "combination": combination,
                        "matrix": rows,
                    },
                    "charpoly": charpoly,
                    "checked": true,
                },
            });
            Ok(Outcome::new(1, payload, human))
        }
    }
}

pub fn cmd_char_nilpotent(
    file: &Path,
    specialize: &[String],
    hashes: &mut Vec<InputHash>,
) -> Result<Outcome> {
    let assignments = parse_assignments(specialize)?;
    match load_algebra(file, hashes)? {
        ParsedAlgebra::Rational(alg) => {
            if !assignments.is_empty() {
                return Err(Error::domain(format!(
                    "`{}` has no parameters; --specialize does not apply",
                    alg.name()
                )));
            }
            char_nilpotent_outcome(&alg, "")
        }
        ParsedAlgebra::Parametric(alg) => {
            if assignments.is_empty() {
                char_nilpotent_outcome(
                    &alg,
                    &format!(" over Q({})", alg.params().join(", ")),
                )
            } else {
                let note: Vec<String> = assignments
                    .iter()
                    .map(|(p, v)| format!("{p}={v}"))
                    .collect();
                let specialized = alg.specialize(&assignments)?;
                char_nilpotent_outcome(
                    &specialized,
                    &format!(" at {}", note.join(", ")),
                )
            }
        }
    }
}

// ---------------------------------------------------------------------------
// specialize
// ---------------------------------------------------------------------------

pub fn cmd_specialize(
    file: &Path,
    pairs: &[String],
    hashes: &mut Vec<InputHash>,
) -> Result<Outcome> {
    let assignments = parse_assignments(pairs)?;
    let parsed = load_algebra(file, hashes)?;
    let ParsedAlgebra::Parametric(alg) = parsed else {
        return Err(Error::domain(format!(
            "`{}` has no parameters to specialize",
            parsed.name()
        )));
    };
    let specialized = alg.specialize(&assignments)?;
    let table = serialize_algebra(&ParsedAlgebra::Rational(specialized.clone()))?;
    let rendered: BTreeMap<String, String> = assignments
        .iter()
        .map(|(p, v)| (p.clone(), v.to_string()))
        .collect();
    let payload = json!({
        "algebra": specialized.name(),
        "dim": specialized.dim(),
        "assignments": rendered,
        "table": table,
    });
    let mut outcome = Outcome::new(0, payload, table);
    outcome.bare = true;
    Ok(outcome)
}

// ---------------------------------------------------------------------------
// deform
// ---------------------------------------------------------------------------

/// Parses a derivation map file: one `src -> expr` line per ideal generator,
/// where `expr` is `0` or a sum of `coeff * label` / `label` terms. `#`
/// starts a comment. Unlisted generators map to zero.
fn parse_derivation_map(
    text: &str,
    coord_of: &BTreeMap<String, usize>,
) -> Result<Matrix<Rat>> {
    let h = coord_of.len();
    let mut d = Matrix::<Rat>::zeros(h, h);
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((lhs, rhs)) = line.split_once("->") else {
            return Err(Error::parse(line_no, "expected `label -> expression`"));
        };
        let src = lhs.trim();
        let Some(&src_coord) = coord_of.get(src) else {
            return Err(Error::parse(
                line_no,
                format!("`{src}` is not one of the ideal generators"),
            ));
        };
        if seen.iter().any(|s| s == src) {
            return Err(Error::parse(line_no, format!("`{src}` is mapped twice")));
        }
        seen.push(src.to_string());
        let rhs = rhs.trim();
        if rhs == "0" {
            continue;
        }
        for term in rhs.split('+') {
            let term = term.trim();
            let (coeff, label) = match term.split_once('*') {
                Some((c, l)) => (Rat::parse(c.trim())?, l.trim()),
                None => (Rat::one(), term),
            };
            let Some(&dst_coord) = coord_of.get(label) else {
                return Err(Error::parse(
                    line_no,
                    format!("`{label}` is not one of the ideal generators"),
                ));
            };
            let entry = d.at_mut(dst_coord, src_coord);
            *entry = entry.add_ref(&coeff);
        }
    }
    Ok(d)
}

fn unit_vector(n: usize, at: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[at] = Rat::one();
    v
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_deform(
    file: &Path,
    x0: &str,
    x1: &str,
    ideal_labels: &[String],
    derivation_file: &Path,
    param: &str,
    hashes: &mut Vec<InputHash>,
) -> Result<Outcome> {
    let parsed = load_algebra(file, hashes)?;
    let ParsedAlgebra::Rational(alg) = parsed else {
        return Err(Error::domain(
            "the base table must be over Q, without parameters",
        ));
    };
    let n = alg.dim();
    let index_of = |label: &str| -> Result<usize> {
        alg.label_index(label).ok_or_else(|| {
            Error::domain(format!(
                "`{label}` is not a basis label of `{}`",
                alg.name()
            ))
        })
    };
    let x0_vec = unit_vector(n, index_of(x0)?);
    let x1_vec = unit_vector(n, index_of(x1)?);
    let mut spanning = Vec::with_capacity(ideal_labels.len());
    for label in ideal_labels {
        spanning.push(unit_vector(n, index_of(label)?));
    }
    let ideal = Subspace::from_spanning(n, &spanning)?;
    if ideal.dim() != ideal_labels.len() {
        return Err(Error::domain("the ideal generators repeat a label"));
    }

    // The derivation acts in the coordinates of the subspace's stored basis,
    // so locate each generator's unit vector there rather than assuming an
    // order.
    let mut coord_of = BTreeMap::new();
    for label in ideal_labels {
        let unit = unit_vector(n, index_of(label)?);
        let pos = ideal
            .basis()
            .iter()
            .position(|b| *b == unit)
            .ok_or_else(|| {
                Error::domain(format!(
                    "`{label}` does not appear as a stored basis vector of the ideal"
                ))
            })?;
        coord_of.insert(label.clone(), pos);
    }
    let map_text = read_input(derivation_file, hashes)?;
    let d = parse_derivation_map(&map_text, &coord_of)?;

    // A Leibniz failure is a checked-false result, not a usage error: report
    // the offending pair and exit 1.
    let sub = alg.subalgebra_on(&ideal)?;
    if let Some((i, j)) = leibniz_failure(&sub, &d)? {
        let li = sub.labels()[i].clone();
        let lj = sub.labels()[j].clone();
        let human = format!(
            "the map is not a derivation of the ideal: Leibniz fails on [{li}, {lj}]"
        );
        let payload = json!({
            "algebra": alg.name(),
            "is_derivation": false,
            "failing_pair": [li, lj],
        });
        return Ok(Outcome::new(1, payload, human));
    }

    let family =
        deform_by_ideal_derivation(&alg, &x0_vec, &x1_vec, &ideal, &d, param)?;
    let table =
        serialize_algebra(&ParsedAlgebra::Parametric(family.family().clone()))?;
    let payload = json!({
        "algebra": alg.name(),
        "param": param,
        "x0": x0,
        "x1": x1,
        "ideal": ideal_labels,
        "is_derivation": true,
        "table": table,
    });
    let mut outcome = Outcome::new(0, payload, table);
    outcome.bare = true;
    Ok(outcome)
}

// ---------------------------------------------------------------------------
// replay
// ---------------------------------------------------------------------------

pub fn cmd_replay(
    family_file: &Path,
    target_file: &Path,
    script_file: &Path,
    hashes: &mut Vec<InputHash>,
) -> Result<Outcome> {
    let family_parsed = load_algebra(family_file, hashes)?;
    let ParsedAlgebra::Parametric(family_alg) = family_parsed else {
        return Err(Error::domain(
            "the family table must be declared over one parameter",
        ));
    };
    let params = family_alg.params().to_vec();
    let [param] = params.as_slice() else {
        return Err(Error::domain(format!(
            "the family table must have exactly one parameter, found ({})",
            params.join(", ")
        )));
    };
    let family = DeformationFamily::from_family(family_alg, param)?;

    let target_parsed = load_algebra(target_file, hashes)?;
    let ParsedAlgebra::Rational(target) = target_parsed else {
        return Err(Error::domain("the target table must be over Q"));
    };

    let ansatz = build_ansatz(&family, &target)?;
    let obstructions = generate_obstructions(&ansatz, &family, &target)?;
    let state = EliminationState::new(&ansatz, obstructions);
    let script_text = read_input(script_file, hashes)?;
    let script = ReplayScript::parse(&script_text, &ansatz)?;

    let (verdict, states) = replay_with_states(&script, state)?;
    let family_name = family.base().name().to_string();
    let target_name = target.name().to_string();
    match verdict {
        Verdict::Pass(report) => {
            let branches: Vec<Value> = report
                .branches
                .iter()
                .zip(&states)
                .map(|(branch, state)| {
                    let assumptions: Vec<String> = state
                        .assumptions()
                        .iter()
                        .map(|(name, value)| format!("{name} = {value}"))
                        .collect();
                    let constraints: Vec<String> = state
                        .substitutions()
                        .iter()
                        .map(|(name, value)| format!("{name} = {value}"))
                        .collect();
                    json!({
                        "label": branch.label,
                        "steps_run": branch.steps_run,
                        "eliminated": branch.eliminated,
                        "final_constraint": branch.final_constraint,
                        "assumptions": assumptions,
                        "constraints": constraints,
                    })
                })
                .collect();
            let mut human = format!(
                "REPLAY PASSED: `{family_name}` vs `{target_name}`, {} obstructions, {} branch(es){}",
                report.obstructions,
                report.branches.len(),
                if report.concluded { ", all concluded" } else { "" },
            );
            for (branch, state) in report.branches.iter().zip(&states) {
                let _ = write!(
                    human,
                    "\n  branch [{}]: {} steps, {} unknowns eliminated",
                    branch.label, branch.steps_run, branch.eliminated,
                );
                match &branch.final_constraint {
                    Some(c) => {
                        let _ = write!(human, "\n    final constraint: {c}");
                    }
                    None => {
                        // Without a conclusion the value of the run is the
                        // partial elimination itself, so print it.
                        let _ = write!(human, "\n    established constraints:");
                        for (name, value) in state.substitutions() {
                            let _ = write!(human, "\n      {name} = {value}");
                        }
                    }
                }
            }
            let payload = json!({
                "family": family_name,
                "target": target_name,
                "param": param,
                "script_lines": script.lines().len(),
                "obstructions": report.obstructions,
                "verdict": "pass",
                "concluded": report.concluded,
                "branches": branches,
            });
            Ok(Outcome::new(0, payload, human))
        }
        Verdict::Fail(failure) => {
            let mut human = format!(
                "REPLAY FAILED at line {}: {}\n  branch [{}]: {}",
                failure.line, failure.text, failure.branch, failure.reason,
            );
            if let Some(expected) = &failure.expected {
                let _ = write!(human, "\n  claimed:  {expected}");
            }
            if let Some(computed) = &failure.computed {
                let _ = write!(human, "\n  computed: {computed}");
            }
            let payload = json!({
                "family": family_name,
                "target": target_name,
                "param": param,
                "script_lines": script.lines().len(),
                "verdict": "fail",
                "failure": serde_json::to_value(&failure)
                    .map_err(|e| Error::domain(e.to_string()))?,
            });
            Ok(Outcome::new(1, payload, human))
        }
    }
}
