//! Plain-text algebra format: parser and serializer.
//!
//! ```text
//! algebra <name> over Q            # or: over Q(b, c)
//! basis e0 e1 e2
//! params b                        # optional alias of the over-clause
//! [e0,e1] = e2 + 1/10 * e1 - 27/100 b e2 + (1 + 5143/7000 b^2) e0
//! # comments run to end of line; unlisted brackets are zero
//! ```
//!
//! Every error carries the 1-based line number it was found on. A file with
//! no parameters parses over the rationals; otherwise the coefficients live
//! in the polynomial ring on the declared parameters.

use super::LieAlgebra;
use crate::expr::{tokenize, ExprParser, Token};
use crate::scalar::{MultiPoly, Rat, RatFunc, Scalar};
use crate::{Error, Result};

/// A parsed algebra: rational tables and parameter-dependent tables get
/// different scalar types.
#[derive(Clone, Debug)]
pub enum ParsedAlgebra {
    Rational(LieAlgebra<Rat>),
    Parametric(LieAlgebra<RatFunc>),
}

impl ParsedAlgebra {
    pub fn name(&self) -> &str {
        match self {
            ParsedAlgebra::Rational(a) => a.name(),
            ParsedAlgebra::Parametric(a) => a.name(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ParsedAlgebra::Rational(a) => a.dim(),
            ParsedAlgebra::Parametric(a) => a.dim(),
        }
    }

    pub fn params(&self) -> &[String] {
        match self {
            ParsedAlgebra::Rational(a) => a.params(),
            ParsedAlgebra::Parametric(a) => a.params(),
        }
    }
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::parse(line, msg))
}

/// Reads the header line `algebra <name> over Q` / `over Q(<p>, …)`.
fn parse_header(line_no: usize, toks: &[Token]) -> Result<(String, Vec<String>)> {
    let name = match toks.get(1) {
        Some(Token::Ident(n)) => n.clone(),
        _ => return parse_err(line_no, "expected `algebra <name> over Q`"),
    };
    match (toks.get(2), toks.get(3)) {
        (Some(Token::Ident(over)), Some(Token::Ident(q))) if over == "over" && q == "Q" => {}
        _ => return parse_err(line_no, "expected `over Q` after the algebra name"),
    }
    let mut params = Vec::new();
    match toks.get(4) {
        None => {}
        Some(Token::LParen) => {
            let mut pos = 5;
            loop {
                match toks.get(pos) {
                    Some(Token::Ident(p)) => {
                        params.push(p.clone());
                        pos += 1;
                    }
                    _ => {
                        return parse_err(
                            line_no,
                            "expected a parameter name in the field declaration",
                        )
                    }
                }
                match toks.get(pos) {
                    Some(Token::Comma) => pos += 1,
                    Some(Token::RParen) => {
                        pos += 1;
                        break;
                    }
                    _ => {
                        return parse_err(
                            line_no,
                            "expected `,` or `)` in the field declaration",
                        )
                    }
                }
            }
            if pos != toks.len() {
                return parse_err(line_no, "unexpected text after the field declaration");
            }
        }
        Some(tok) => {
            return parse_err(line_no, format!("unexpected {tok} after `over Q`"));
        }
    }
    Ok((name, params))
}

/// Splits the tokens of a bracket right-hand side into sign-annotated terms
/// at depth-0 `+`/`-` boundaries.
fn split_terms(line_no: usize, toks: &[Token]) -> Result<Vec<(bool, Vec<Token>)>> {
    let mut out = Vec::new();
    let mut buffer: Vec<Token> = Vec::new();
    let mut negative = false;
    let mut depth = 0usize;
    for tok in toks {
        match tok {
            Token::LParen => {
                depth += 1;
                buffer.push(tok.clone());
            }
            Token::RParen => {
                if depth == 0 {
                    return parse_err(line_no, "unbalanced `)`");
                }
                depth -= 1;
                buffer.push(tok.clone());
            }
            Token::Plus | Token::Minus if depth == 0 => {
                let minus = *tok == Token::Minus;
                if buffer.is_empty() {
                    if minus {
                        negative = !negative;
                    }
                } else {
                    out.push((negative, std::mem::take(&mut buffer)));
                    negative = minus;
                }
            }
            _ => buffer.push(tok.clone()),
        }
    }
    if depth != 0 {
        return parse_err(line_no, "missing `)`");
    }
    if buffer.is_empty() {
        return parse_err(line_no, "expected a term after the sign");
    }
    out.push((negative, buffer));
    Ok(out)
}

/// Parses one term `coefficient? label` into `(basis index, coefficient)`.
fn parse_term(
    line_no: usize,
    term: &[Token],
    labels: &[String],
    params: &[String],
) -> Result<(usize, MultiPoly)> {
    let (label_tok, coeff_toks) = term.split_last().expect("terms are nonempty");
    let label = match label_tok {
        Token::Ident(l) if labels.contains(l) => l,
        Token::Ident(l) => {
            return parse_err(line_no, format!("unknown basis label `{l}`"))
        }
        tok => {
            return parse_err(
                line_no,
                format!("expected a basis label at the end of a term, found {tok}"),
            )
        }
    };
    let k = labels.iter().position(|l| l == label).expect("just matched");
    let coeff_toks = match coeff_toks.split_last() {
        Some((Token::Star, rest)) => rest,
        _ => coeff_toks,
    };
    for tok in coeff_toks {
        if let Token::Ident(name) = tok {
            if labels.contains(name) {
                return parse_err(
                    line_no,
                    format!("basis label `{name}` used inside a coefficient"),
                );
            }
        }
    }
    if coeff_toks.is_empty() {
        return Ok((k, MultiPoly::one()));
    }
    let resolve = |name: &str| -> Option<MultiPoly> {
        params.iter().any(|p| p == name).then(|| MultiPoly::var(name))
    };
    let coeff = ExprParser::parse_all(coeff_toks, &resolve)
        .map_err(|msg| Error::parse(line_no, msg))?;
    Ok((k, coeff))
}

/// Parses an algebra definition from text. See the module docs for the
/// grammar; all errors carry 1-based line numbers.
pub fn parse_algebra(text: &str) -> Result<ParsedAlgebra> {
    let mut name: Option<String> = None;
    let mut over_params: Option<Vec<String>> = None;
    let mut line_params: Option<Vec<String>> = None;
    let mut labels: Option<Vec<String>> = None;
    // (line, left label, right label, rhs tokens)
    let mut brackets: Vec<(usize, String, String, Vec<Token>)> = Vec::new();
    let mut last_line = 1usize;

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let toks = tokenize(line, false).map_err(|msg| Error::parse(line_no, msg))?;
        let Some(first) = toks.first() else { continue };
        match first {
            Token::Ident(kw) if kw == "algebra" => {
                if name.is_some() {
                    return parse_err(line_no, "second `algebra` line");
                }
                let (n, ps) = parse_header(line_no, &toks)?;
                name = Some(n);
                over_params = Some(ps);
            }
            Token::Ident(kw) if kw == "basis" => {
                if name.is_none() {
                    return parse_err(line_no, "`basis` before the `algebra` line");
                }
                if labels.is_some() {
                    return parse_err(line_no, "second `basis` line");
                }
                let mut ls = Vec::new();
                for tok in &toks[1..] {
                    match tok {
                        Token::Ident(l) => ls.push(l.clone()),
                        other => {
                            return parse_err(
                                line_no,
                                format!("expected a basis label, found {other}"),
                            )
                        }
                    }
                }
                if ls.is_empty() {
                    return parse_err(line_no, "empty `basis` line");
                }
                labels = Some(ls);
            }
            Token::Ident(kw) if kw == "params" => {
                if name.is_none() {
                    return parse_err(line_no, "`params` before the `algebra` line");
                }
                if line_params.is_some() {
                    return parse_err(line_no, "second `params` line");
                }
                let mut ps = Vec::new();
                for tok in &toks[1..] {
                    match tok {
                        Token::Ident(p) => ps.push(p.clone()),
                        other => {
                            return parse_err(
                                line_no,
                                format!("expected a parameter name, found {other}"),
                            )
                        }
                    }
                }
                line_params = Some(ps);
            }
            Token::LBracket => {
                if labels.is_none() {
                    return parse_err(line_no, "bracket line before the `basis` line");
                }
                let (li, lj) = match (toks.get(1), toks.get(2), toks.get(3), toks.get(4)) {
                    (
                        Some(Token::Ident(a)),
                        Some(Token::Comma),
                        Some(Token::Ident(b)),
                        Some(Token::RBracket),
                    ) => (a.clone(), b.clone()),
                    _ => {
                        return parse_err(
                            line_no,
                            "expected `[<label>,<label>] = …`",
                        )
                    }
                };
                if toks.get(5) != Some(&Token::Eq) {
                    return parse_err(line_no, "expected `=` after the bracket pair");
                }
                if toks.len() == 6 {
                    return parse_err(line_no, "empty bracket right-hand side");
                }
                brackets.push((line_no, li, lj, toks[6..].to_vec()));
            }
            other => {
                return parse_err(line_no, format!("unrecognized directive starting with {other}"));
            }
        }
    }

    let Some(name) = name else {
        return parse_err(last_line, "missing `algebra` line");
    };
    let Some(labels) = labels else {
        return parse_err(last_line, "missing `basis` line");
    };
    let params = match (over_params, line_params) {
        (Some(a), Some(b)) => {
            if !a.is_empty() && a != b {
                return parse_err(
                    last_line,
                    "`params` line disagrees with the `over Q(…)` clause",
                );
            }
            b
        }
        (Some(a), None) => a,
        (None, whatever) => whatever.unwrap_or_default(),
    };

    let n = labels.len();
    // Assemble coefficient-vector polynomials per bracket line.
    let mut entries: Vec<(usize, usize, usize, Vec<MultiPoly>)> = Vec::new();
    for (line_no, li, lj, rhs) in brackets {
        let i = labels.iter().position(|l| *l == li).ok_or_else(|| {
            Error::parse(line_no, format!("unknown basis label `{li}`"))
        })?;
        let j = labels.iter().position(|l| *l == lj).ok_or_else(|| {
            Error::parse(line_no, format!("unknown basis label `{lj}`"))
        })?;
        let mut coeffs = vec![MultiPoly::zero(); n];
        if rhs != [Token::Int("0".to_string())] {
            for (negative, term) in split_terms(line_no, &rhs)? {
                let (k, poly) = parse_term(line_no, &term, &labels, &params)?;
                let signed = if negative { -&poly } else { poly };
                coeffs[k] = &coeffs[k] + &signed;
            }
        }
        entries.push((line_no, i, j, coeffs));
    }

    if params.is_empty() {
        let mut alg = LieAlgebra::<Rat>::new(name, labels, Vec::new())
            .map_err(|e| Error::parse(last_line, e.to_string()))?;
        for (line_no, i, j, coeffs) in entries {
            let values = coeffs
                .into_iter()
                .map(|p| p.as_constant().expect("no parameters declared"))
                .collect();
            alg.set_basis_bracket(i, j, values)
                .map_err(|e| Error::parse(line_no, e.to_string()))?;
        }
        Ok(ParsedAlgebra::Rational(alg))
    } else {
        let mut alg = LieAlgebra::<RatFunc>::new(name, labels, params)
            .map_err(|e| Error::parse(last_line, e.to_string()))?;
        for (line_no, i, j, coeffs) in entries {
            let values = coeffs.into_iter().map(RatFunc::from_poly).collect();
            alg.set_basis_bracket(i, j, values)
                .map_err(|e| Error::parse(line_no, e.to_string()))?;
        }
        Ok(ParsedAlgebra::Parametric(alg))
    }
}

/// Renders one stored bracket line.
fn render_line<K: Scalar>(
    alg: &LieAlgebra<K>,
    i: usize,
    j: usize,
    coeffs: &[K],
    poly_text: &dyn Fn(&K) -> Result<Option<String>>,
) -> Result<String> {
    let mut rhs = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let label = &alg.labels()[k];
        match c.as_rat() {
            Some(r) => {
                let negative = r.is_negative();
                let abs = r.abs();
                if rhs.is_empty() {
                    if negative {
                        rhs.push('-');
                    }
                } else {
                    rhs.push_str(if negative { " - " } else { " + " });
                }
                if abs.is_one() {
                    rhs.push_str(label);
                } else {
                    rhs.push_str(&format!("{abs} * {label}"));
                }
            }
            None => {
                let text = poly_text(c)?.ok_or_else(|| {
                    Error::domain(format!(
                        "coefficient of {label} in [{}, {}] is not a polynomial \
                         in the parameters",
                        alg.labels()[i],
                        alg.labels()[j]
                    ))
                })?;
                if !rhs.is_empty() {
                    rhs.push_str(" + ");
                }
                rhs.push_str(&format!("({text}) * {label}"));
            }
        }
    }
    Ok(format!("[{},{}] = {rhs}", alg.labels()[i], alg.labels()[j]))
}

fn serialize_table<K: Scalar>(
    alg: &LieAlgebra<K>,
    poly_text: &dyn Fn(&K) -> Result<Option<String>>,
) -> Result<String> {
    let mut out = String::new();
    if alg.params().is_empty() {
        out.push_str(&format!("algebra {} over Q\n", alg.name()));
    } else {
        out.push_str(&format!(
            "algebra {} over Q({})\n",
            alg.name(),
            alg.params().join(", ")
        ));
    }
    out.push_str(&format!("basis {}\n", alg.labels().join(" ")));
    for (i, j, coeffs) in alg.structure_entries() {
        out.push_str(&render_line(alg, i, j, coeffs, poly_text)?);
        out.push('\n');
    }
    Ok(out)
}

/// Serializes an algebra back to the text format. Parameter-dependent
/// coefficients must be polynomials in the parameters (true for every table
/// this toolkit produces); a genuine quotient of polynomials has no spelling
/// in the format and is reported as an error.
pub fn serialize_algebra(alg: &ParsedAlgebra) -> Result<String> {
    match alg {
        ParsedAlgebra::Rational(a) => serialize_table(a, &|_| Ok(None)),
        ParsedAlgebra::Parametric(a) => serialize_table(a, &|c: &RatFunc| {
            if c.is_polynomial() {
                Ok(Some(c.numer().to_string()))
            } else {
                Ok(None)
            }
        }),
    }
}
