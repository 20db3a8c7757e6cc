use std::collections::BTreeMap;

use super::ast::Expr;
use super::error::{ErrorKind, ParseError, Pos};
use super::parser::parse_expr_at;

/// A system read from a key/value document: the field components, an
/// optional Lyapunov candidate and whatever run metadata the file sets.
/// Missing metadata stays `None`; callers choose defaults.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParsedSystem {
    pub name: Option<String>,
    pub components: Vec<Expr>,
    pub v: Option<Expr>,
    pub alpha: Option<f64>,
    pub omega: Option<f64>,
    pub t0: Option<f64>,
    pub x0: Option<Vec<f64>>,
    pub horizon: Option<f64>,
    pub step: Option<f64>,
    pub lambda: Option<f64>,
    pub m: Option<Vec<u32>>,
    pub phi: Option<f64>,
    pub compare_a: Option<f64>,
    pub box_radius: Option<f64>,
    pub seed: Option<u64>,
}

impl ParsedSystem {
    pub fn dim(&self) -> usize {
        self.components.len()
    }
}

const SCALAR_KEYS: [&str; 10] =
    ["alpha", "omega", "t0", "horizon", "step", "lambda", "phi", "compare_a", "box_radius", "seed"];

struct Entry {
    line: usize,
    value_col: usize,
    value: String,
}

/// Reads a system document.
///
/// One `key = value` per line; `#` starts a comment; blank lines are ignored.
/// `f1 .. fn` (contiguous, at least one) define the field and fix the
/// dimension. Other keys: `name`, `alpha`, `omega`, `t0`, `x0` (comma list),
/// `horizon`, `step`, `V`, `lambda`, `m` (comma list of integers), `phi`,
/// `compare_a`, `box_radius`, `seed`.
pub fn parse_system(src: &str) -> Result<ParsedSystem, ParseError> {
    let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            let col = first_non_space(content);
            return Err(doc_error(line, col, "expected `key = value`"));
        };
        let key = content[..eq].trim();
        let key_col = first_non_space(content);
        if key.is_empty() {
            return Err(doc_error(line, key_col, "missing key before '='"));
        }
        let known = SCALAR_KEYS.contains(&key)
            || matches!(key, "name" | "x0" | "m" | "V")
            || component_index(key).is_some();
        if !known {
            return Err(doc_error(line, key_col, &format!("unknown key '{key}'")));
        }
        let after = &content[eq + 1..];
        let value_col = content[..eq + 1].chars().count() + 1 + (after.len() - after.trim_start().len());
        let value = after.trim();
        if value.is_empty() {
            return Err(doc_error(line, value_col, &format!("key '{key}' has no value")));
        }
        if let Some(prev) = entries.get(key) {
            return Err(doc_error(
                line,
                key_col,
                &format!("duplicate key '{key}' (first set on line {})", prev.line),
            ));
        }
        entries.insert(key.to_string(), Entry { line, value_col, value: value.to_string() });
    }

    let mut indices: Vec<usize> = entries.keys().filter_map(|k| component_index(k)).collect();
    indices.sort_unstable();
    if indices.is_empty() {
        return Err(doc_error(1, 1, "no field components (f1 = ...) defined"));
    }
    if let Some(gap) = (1..=indices.len()).find(|i| !indices.contains(i)) {
        return Err(doc_error(1, 1, &format!("field components must be f1..f{}; f{gap} is missing", indices.len())));
    }
    let dim = indices.len();

    let mut sys = ParsedSystem::default();
    for i in 1..=dim {
        sys.components.push(expr_entry(&entries[&format!("f{i}")], dim)?);
    }
    if let Some(e) = entries.get("V") {
        sys.v = Some(expr_entry(e, dim)?);
    }
    if let Some(e) = entries.get("name") {
        sys.name = Some(e.value.clone());
    }
    let num = |key: &str| entries.get(key).map(number_entry).transpose();
    sys.alpha = num("alpha")?;
    sys.omega = num("omega")?;
    sys.t0 = num("t0")?;
    sys.horizon = num("horizon")?;
    sys.step = num("step")?;
    sys.lambda = num("lambda")?;
    sys.phi = num("phi")?;
    sys.compare_a = num("compare_a")?;
    sys.box_radius = num("box_radius")?;
    if let Some(e) = entries.get("seed") {
        sys.seed = Some(e.value.parse().map_err(|_| {
            doc_error(e.line, e.value_col, "seed must be a nonnegative integer")
        })?);
    }
    if let Some(e) = entries.get("x0") {
        sys.x0 = Some(list_entry(e, |s| s.parse::<f64>().ok().filter(|v| v.is_finite()), "number")?);
    }
    if let Some(e) = entries.get("m") {
        sys.m = Some(list_entry(e, |s| s.parse::<u32>().ok(), "nonnegative integer")?);
    }
    Ok(sys)
}

fn component_index(key: &str) -> Option<usize> {
    let digits = key.strip_prefix('f')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn first_non_space(s: &str) -> usize {
    s.chars().take_while(|c| c.is_whitespace()).count() + 1
}

fn doc_error(line: usize, column: usize, msg: &str) -> ParseError {
    ParseError::new(ErrorKind::Document, Pos { line, column }, msg)
}

fn expr_entry(e: &Entry, dim: usize) -> Result<Expr, ParseError> {
    parse_expr_at(&e.value, dim, Pos { line: e.line, column: e.value_col })
}

fn number_entry(e: &Entry) -> Result<f64, ParseError> {
    match e.value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(doc_error(e.line, e.value_col, &format!("expected a finite number, got '{}'", e.value))),
    }
}

fn list_entry<T>(e: &Entry, item: impl Fn(&str) -> Option<T>, what: &str) -> Result<Vec<T>, ParseError> {
    let mut out = Vec::new();
    let mut col = e.value_col;
    for part in e.value.split(',') {
        let trimmed = part.trim();
        let item_col = col + (part.len() - part.trim_start().len());
        match item(trimmed) {
            Some(v) => out.push(v),
            None => return Err(doc_error(e.line, item_col, &format!("expected a {what}, got '{trimmed}'"))),
        }
        col += part.chars().count() + 1;
    }
    Ok(out)
}
