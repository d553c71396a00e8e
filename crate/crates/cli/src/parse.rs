//! Text formats: semigroup tables, equation systems, points, and term lists.
//!
//! All formats are line oriented; `#` starts a comment. Parse errors carry
//! the line and column of the offending token.

use std::fmt;

use thiserror::Error;

use wreathlab_core::semigroup::{FiniteSemigroupWithZero, ValidationReport};
use wreathlab_core::system::{BlockExp, Equation, Schema, SchemaBlock, System, WreathPoint};
use wreathlab_core::term::{AddTerm, AddTermOrZero, SemiWord, Var};
use wreathlab_core::vector::{FinSuppVector, Start};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

/// Lines of whitespace-separated tokens, comments stripped, blanks dropped.
fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut col = 0;
        for piece in line.split_whitespace() {
            let found = line[col..].find(piece).map(|p| p + col).unwrap_or(col);
            tokens.push(Token {
                text: piece,
                line: li + 1,
                col: found + 1,
            });
            col = found + piece.len();
        }
        if !tokens.is_empty() {
            out.push(tokens);
        }
    }
    out
}

fn expect_keyword(line: &[Token<'_>], keyword: &str) -> Result<(), ParseError> {
    match line.first() {
        Some(t) if t.text == keyword => Ok(()),
        Some(t) => Err(ParseError::new(
            t.line,
            t.col,
            format!("expected `{keyword}`, found `{}`", t.text),
        )),
        None => Err(ParseError::new(1, 1, format!("expected `{keyword}`"))),
    }
}

/// Parses a semigroup table and runs the law validation.
pub fn parse_semigroup(
    text: &str,
) -> Result<(FiniteSemigroupWithZero, ValidationReport), ParseError> {
    let lines = tokenize(text);
    let mut it = lines.iter();
    let header = it
        .next()
        .ok_or_else(|| ParseError::new(1, 1, "empty semigroup file"))?;
    expect_keyword(header, "semigroup")?;
    let name = header
        .get(1)
        .ok_or_else(|| ParseError::new(header[0].line, header[0].col, "missing semigroup name"))?
        .text;

    let elems_line = it
        .next()
        .ok_or_else(|| ParseError::new(header[0].line + 1, 1, "missing `elements` line"))?;
    expect_keyword(elems_line, "elements")?;
    let element_names: Vec<&str> = elems_line[1..].iter().map(|t| t.text).collect();
    if element_names.is_empty() {
        return Err(ParseError::new(
            elems_line[0].line,
            elems_line[0].col,
            "no elements declared",
        ));
    }

    let zero_line = it
        .next()
        .ok_or_else(|| ParseError::new(elems_line[0].line + 1, 1, "missing `zero` line"))?;
    expect_keyword(zero_line, "zero")?;
    let zero = zero_line
        .get(1)
        .ok_or_else(|| {
            ParseError::new(zero_line[0].line, zero_line[0].col, "missing zero element")
        })?
        .text;

    let mut next = it
        .next()
        .ok_or_else(|| ParseError::new(zero_line[0].line + 1, 1, "missing `table` line"))?;
    let mut unit = None;
    if next.first().map(|t| t.text) == Some("unit") {
        unit = Some(
            next.get(1)
                .ok_or_else(|| ParseError::new(next[0].line, next[0].col, "missing unit element"))?
                .text,
        );
        next = it
            .next()
            .ok_or_else(|| ParseError::new(next[0].line + 1, 1, "missing `table` line"))?;
    }
    expect_keyword(next, "table")?;
    let table_line = next[0].line;

    let mut rows: Vec<Vec<&str>> = Vec::new();
    for row in it {
        rows.push(row.iter().map(|t| t.text).collect());
    }
    if rows.len() != element_names.len() {
        return Err(ParseError::new(
            table_line,
            1,
            format!(
                "expected {} table rows, found {}",
                element_names.len(),
                rows.len()
            ),
        ));
    }
    let sg = FiniteSemigroupWithZero::new(name, &element_names, &rows, zero, unit)
        .map_err(|e| ParseError::new(table_line, 1, e.to_string()))?;
    let report = sg.validate();
    Ok((sg, report))
}

fn parse_exponent(tok: &Token<'_>) -> Result<(&'static str, String, Option<u64>), ParseError> {
    // returns (kind, var name, constant exponent); kind is "const" or "param"
    match tok.text.split_once('^') {
        None => Ok(("const", tok.text.to_string(), Some(1))),
        Some((v, "i")) => Ok(("param", v.to_string(), None)),
        Some((v, k)) => {
            let k: u64 = k.parse().map_err(|_| {
                ParseError::new(tok.line, tok.col, format!("bad exponent `{}`", tok.text))
            })?;
            Ok(("const", v.to_string(), Some(k)))
        }
    }
}

struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    fn resolve(&self, tok: &Token<'_>, name: &str) -> Result<Var, ParseError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(Var)
            .ok_or_else(|| ParseError::new(tok.line, tok.col, format!("unknown variable `{name}`")))
    }
}

fn parse_word(tokens: &[Token<'_>], vars: &VarTable) -> Result<SemiWord, ParseError> {
    let mut letters = Vec::new();
    for tok in tokens {
        let (kind, name, k) = parse_exponent(tok)?;
        if kind == "param" {
            return Err(ParseError::new(
                tok.line,
                tok.col,
                "the parameter exponent is only allowed in schemas",
            ));
        }
        let v = vars.resolve(tok, &name)?;
        for _ in 0..k.unwrap() {
            letters.push(v);
        }
    }
    if letters.is_empty() {
        return Err(ParseError::new(
            tokens.first().map(|t| t.line).unwrap_or(1),
            tokens.first().map(|t| t.col).unwrap_or(1),
            "empty word",
        ));
    }
    SemiWord::new(letters).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

fn parse_schema_side(
    tokens: &[Token<'_>],
    vars: &VarTable,
) -> Result<Vec<SchemaBlock>, ParseError> {
    if tokens.is_empty() {
        return Err(ParseError::new(1, 1, "empty schema side"));
    }
    let mut blocks = Vec::new();
    for tok in tokens {
        let (kind, name, k) = parse_exponent(tok)?;
        let v = vars.resolve(tok, &name)?;
        let exp = match kind {
            "param" => BlockExp::Param,
            _ => BlockExp::Const(k.unwrap()),
        };
        blocks.push(SchemaBlock {
            letters: vec![v],
            exp,
        });
    }
    Ok(blocks)
}

fn split_on_eq<'a, 'b>(
    tokens: &'b [Token<'a>],
) -> Result<(&'b [Token<'a>], &'b [Token<'a>]), ParseError> {
    let pos = tokens.iter().position(|t| t.text == "=").ok_or_else(|| {
        ParseError::new(
            tokens.first().map(|t| t.line).unwrap_or(1),
            1,
            "missing `=`",
        )
    })?;
    Ok((&tokens[..pos], &tokens[pos + 1..]))
}

/// Parses a system file: a `vars` line followed by `eq` and `schema` lines.
pub fn parse_system(text: &str) -> Result<System, ParseError> {
    let lines = tokenize(text);
    let mut it = lines.iter().peekable();
    let vars_line = it
        .next()
        .ok_or_else(|| ParseError::new(1, 1, "empty system file"))?;
    expect_keyword(vars_line, "vars")?;
    let mut names = Vec::new();
    for tok in &vars_line[1..] {
        if names.iter().any(|n| n == tok.text) {
            return Err(ParseError::new(
                tok.line,
                tok.col,
                format!("duplicate variable `{}`", tok.text),
            ));
        }
        if tok.text.chars().next().is_none_or(|c| c.is_ascii_digit()) {
            return Err(ParseError::new(
                tok.line,
                tok.col,
                format!("variable name `{}` must not start with a digit", tok.text),
            ));
        }
        names.push(tok.text.to_string());
    }
    if names.is_empty() {
        return Err(ParseError::new(
            vars_line[0].line,
            vars_line[0].col,
            "no variables declared",
        ));
    }
    let vars = VarTable {
        names: names.clone(),
    };

    let mut equations = Vec::new();
    let mut schemas = Vec::new();
    for line in it {
        let head = &line[0];
        match head.text {
            "eq" => {
                let (lhs, rhs) = split_on_eq(&line[1..])?;
                let eq = Equation::new(parse_word(lhs, &vars)?, parse_word(rhs, &vars)?);
                if equations.contains(&eq) {
                    return Err(ParseError::new(head.line, head.col, "duplicate equation"));
                }
                equations.push(eq);
            }
            "schema" => {
                // schema i>=K : lhs = rhs
                let bound_tok = line.get(1).ok_or_else(|| {
                    ParseError::new(head.line, head.col, "missing schema index bound")
                })?;
                let min_index: u64 = bound_tok
                    .text
                    .strip_prefix("i>=")
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| {
                        ParseError::new(
                            bound_tok.line,
                            bound_tok.col,
                            format!("expected `i>=<k>`, found `{}`", bound_tok.text),
                        )
                    })?;
                let colon = line
                    .get(2)
                    .ok_or_else(|| ParseError::new(head.line, head.col, "missing `:` in schema"))?;
                if colon.text != ":" {
                    return Err(ParseError::new(
                        colon.line,
                        colon.col,
                        format!("expected `:`, found `{}`", colon.text),
                    ));
                }
                let (lhs, rhs) = split_on_eq(&line[3..])?;
                let schema = Schema::new(
                    parse_schema_side(lhs, &vars)?,
                    parse_schema_side(rhs, &vars)?,
                    min_index,
                )
                .map_err(|e| ParseError::new(head.line, head.col, e.to_string()))?;
                if schemas.contains(&schema) {
                    return Err(ParseError::new(head.line, head.col, "duplicate schema"));
                }
                schemas.push(schema);
            }
            other => {
                return Err(ParseError::new(
                    head.line,
                    head.col,
                    format!("expected `eq` or `schema`, found `{other}`"),
                ))
            }
        }
    }
    System::with_names(names.len(), names, equations, schemas)
        .map_err(|e| ParseError::new(1, 1, e.to_string()))
}

/// Parses an equation file: a system file holding exactly one equation.
pub fn parse_equation_file(text: &str, system: &System) -> Result<Equation, ParseError> {
    let parsed = parse_system(text)?;
    if parsed.var_names() != system.var_names() {
        return Err(ParseError::new(
            1,
            1,
            "equation file must declare the same variables as the system",
        ));
    }
    if !parsed.schemas.is_empty() || parsed.equations.len() != 1 {
        return Err(ParseError::new(
            1,
            1,
            "equation file must contain exactly one `eq` line and no schemas",
        ));
    }
    Ok(parsed.equations.into_iter().next().unwrap())
}

/// Renders a vector with named elements, in the point-file entry format.
pub fn render_vector(v: &FinSuppVector, sg: &FiniteSemigroupWithZero) -> String {
    let mut out = format!("default={};", sg.elem_name(v.default_elem()));
    for (c, e) in v.support() {
        out.push_str(&format!(" {}:{}", c, sg.elem_name(e)));
    }
    out
}

/// Emits a point in the line format accepted by [`parse_point`]; the round
/// trip is the identity.
pub fn emit_point(pt: &WreathPoint, sg: &FiniteSemigroupWithZero, var_names: &[String]) -> String {
    let start = match pt.start() {
        Start::One => 1,
        Start::Zero => 0,
    };
    let mut out = format!("point start={start}\n");
    for (i, (v, &b)) in pt.vectors().iter().zip(pt.bvals()).enumerate() {
        out.push_str(&format!(
            "{}: b={}; {}\n",
            var_names[i],
            b,
            render_vector(v, sg)
        ));
    }
    out
}

/// Parses a point file: an optional `point start=<0|1>` header followed by
/// one line per variable, in declaration order.
pub fn parse_point(
    text: &str,
    sg: &FiniteSemigroupWithZero,
    var_names: &[String],
) -> Result<WreathPoint, ParseError> {
    let lines = tokenize(text);
    let mut it = lines.iter().peekable();
    let mut start = Start::One;
    if let Some(first) = it.peek() {
        if first[0].text == "point" {
            let header = it.next().unwrap();
            if let Some(tok) = header.get(1) {
                start = match tok.text {
                    "start=0" => Start::Zero,
                    "start=1" => Start::One,
                    other => {
                        return Err(ParseError::new(
                            tok.line,
                            tok.col,
                            format!("expected `start=0` or `start=1`, found `{other}`"),
                        ))
                    }
                };
            }
        }
    }
    let mut vectors = Vec::new();
    let mut bvals = Vec::new();
    for (i, name) in var_names.iter().enumerate() {
        let line = it
            .next()
            .ok_or_else(|| ParseError::new(0, 0, format!("missing entry for variable `{name}`")))?;
        let head = &line[0];
        let label = head.text.strip_suffix(':').unwrap_or(head.text);
        if label != name {
            return Err(ParseError::new(
                head.line,
                head.col,
                format!("expected entry for `{name}`, found `{label}`"),
            ));
        }
        let btok = line
            .get(1)
            .ok_or_else(|| ParseError::new(head.line, head.col, "missing `b=` field"))?;
        let b: u64 = btok
            .text
            .strip_prefix("b=")
            .map(|s| s.trim_end_matches(';'))
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                ParseError::new(
                    btok.line,
                    btok.col,
                    format!("bad `b=` field `{}`", btok.text),
                )
            })?;
        let dtok = line
            .get(2)
            .ok_or_else(|| ParseError::new(head.line, head.col, "missing `default=` field"))?;
        let default_name = dtok
            .text
            .strip_prefix("default=")
            .map(|s| s.trim_end_matches(';'))
            .ok_or_else(|| {
                ParseError::new(
                    dtok.line,
                    dtok.col,
                    format!("bad `default=` field `{}`", dtok.text),
                )
            })?;
        let default = sg.elem(default_name).ok_or_else(|| {
            ParseError::new(
                dtok.line,
                dtok.col,
                format!("unknown element `{default_name}`"),
            )
        })?;
        let mut entries = Vec::new();
        for tok in &line[3..] {
            let (coord, elem_name) = tok.text.split_once(':').ok_or_else(|| {
                ParseError::new(tok.line, tok.col, format!("bad entry `{}`", tok.text))
            })?;
            let coord: u64 = coord.parse().map_err(|_| {
                ParseError::new(tok.line, tok.col, format!("bad coordinate `{coord}`"))
            })?;
            let elem = sg.elem(elem_name).ok_or_else(|| {
                ParseError::new(tok.line, tok.col, format!("unknown element `{elem_name}`"))
            })?;
            entries.push((coord, elem));
        }
        let vector = FinSuppVector::new(start, default, entries)
            .map_err(|e| ParseError::new(head.line, head.col, e.to_string()))?;
        vectors.push(vector);
        bvals.push(b);
        let _ = i;
    }
    if it.next().is_some() {
        return Err(ParseError::new(
            0,
            0,
            "trailing content after point entries",
        ));
    }
    WreathPoint::new(start, vectors, bvals).map_err(|e| ParseError::new(0, 0, e.to_string()))
}

/// Parses a comma-separated list of additive terms; `0` denotes the zero term.
pub fn parse_terms(text: &str, var_names: &[String]) -> Result<Vec<AddTermOrZero>, ParseError> {
    let mut out = Vec::new();
    for (i, chunk) in text.split(',').enumerate() {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            return Err(ParseError::new(1, i + 1, "empty term"));
        }
        if chunk == "0" {
            out.push(AddTermOrZero::Zero);
            continue;
        }
        let mut coeffs = Vec::new();
        for atom in chunk.split('+') {
            let atom = atom.trim();
            let digits: String = atom.chars().take_while(|c| c.is_ascii_digit()).collect();
            let name = &atom[digits.len()..];
            let coeff: u64 = if digits.is_empty() {
                1
            } else {
                digits.parse().map_err(|_| {
                    ParseError::new(1, i + 1, format!("bad coefficient in `{atom}`"))
                })?
            };
            let var = var_names
                .iter()
                .position(|n| n == name)
                .map(Var)
                .ok_or_else(|| {
                    ParseError::new(1, i + 1, format!("unknown variable `{name}` in `{atom}`"))
                })?;
            coeffs.push((var, coeff));
        }
        let term = AddTerm::new(coeffs).map_err(|e| ParseError::new(1, i + 1, e.to_string()))?;
        out.push(AddTermOrZero::Term(term));
    }
    Ok(out)
}

/// Renders an additive term with the system's variable names.
pub fn render_term(t: &AddTermOrZero, var_names: &[String]) -> String {
    match t {
        AddTermOrZero::Zero => "0".to_string(),
        AddTermOrZero::Term(t) => {
            let mut parts = Vec::new();
            for (v, c) in t.coeffs() {
                if c == 1 {
                    parts.push(var_names[v.0].clone());
                } else {
                    parts.push(format!("{c}{}", var_names[v.0]));
                }
            }
            parts.join(" + ")
        }
    }
}

/// Renders a word with the system's variable names, collapsing runs.
pub fn render_word(w: &SemiWord, var_names: &[String]) -> String {
    let mut out: Vec<String> = Vec::new();
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let v = letters[i];
        let mut j = i;
        while j < letters.len() && letters[j] == v {
            j += 1;
        }
        if j - i == 1 {
            out.push(var_names[v.0].clone());
        } else {
            out.push(format!("{}^{}", var_names[v.0], j - i));
        }
        i = j;
    }
    out.join(" ")
}

pub fn render_equation(eq: &Equation, var_names: &[String]) -> String {
    format!(
        "{} = {}",
        render_word(&eq.lhs, var_names),
        render_word(&eq.rhs, var_names)
    )
}

/// Human-readable summary of a validation report with named elements.
pub fn render_validation(
    report: &ValidationReport,
    sg: &FiniteSemigroupWithZero,
) -> serde_json::Value {
    let name = |e: &wreathlab_core::semigroup::Elem| sg.elem_name(*e).to_string();
    serde_json::json!({
        "valid": report.is_valid(),
        "assoc_violations": report
            .assoc_violations
            .iter()
            .map(|(x, y, z)| format!("({}, {}, {})", name(x), name(y), name(z)))
            .collect::<Vec<_>>(),
        "zero_violations": report.zero_violations.iter().map(name).collect::<Vec<_>>(),
        "unit_violations": report.unit_violations.iter().map(name).collect::<Vec<_>>(),
    })
}

impl fmt::Display for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(" "))
    }
}
