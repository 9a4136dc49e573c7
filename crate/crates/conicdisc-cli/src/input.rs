//! The `conicdisc/1` input document: a field, a base ring and the six
//! coefficients of `ax^2 + by^2 + cz^2 + αyz + βzx + γxy`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use conicdisc::exactalg::{parse_poly, Field, FieldSpec, Poly, Ring, Scalar, Series};
use conicdisc::familyscan::{specialize_to_series, Family};
use conicdisc::quadform::TernaryForm;
use serde::Deserialize;

pub const SCHEMA: &str = "conicdisc/1";

/// Order of the coefficient keys in a document.
pub const COEFF_KEYS: [&str; 6] = ["a", "b", "c", "alpha", "beta", "gamma"];

/// A problem with the input document. `line` and `column` are 1-based;
/// zero when the problem has no position (unreadable file).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl InputError {
    fn at(pos: (usize, usize), message: impl Into<String>) -> InputError {
        InputError { line: pos.0, column: pos.1, message: message.into() }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(f, "{}:{}: {}", self.line, self.column, self.message)
        }
    }
}

impl std::error::Error for InputError {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    schema: String,
    field: RawField,
    base: RawBase,
    form: RawForm,
    #[serde(default)]
    specialize: Option<RawSpecialize>,
}

fn one() -> u32 {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    characteristic: u64,
    #[serde(default = "one")]
    degree: u32,
    #[serde(default)]
    modulus: Option<Vec<u64>>,
    #[serde(default)]
    generator: Option<String>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum RawBase {
    Field,
    Poly { vars: Vec<String> },
    Series { var: String, precision: usize },
    ProjPoly { vars: Vec<String> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawForm {
    a: String,
    b: String,
    c: String,
    alpha: String,
    beta: String,
    gamma: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpecialize {
    var: String,
    #[serde(default)]
    assign: BTreeMap<String, String>,
    #[serde(default = "one")]
    extension_degree: u32,
    precision: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    Field,
    Poly { vars: Arc<Vec<String>> },
    ProjPoly { vars: Arc<Vec<String>> },
    Series { var: Arc<str>, precision: usize },
}

impl Base {
    pub fn kind(&self) -> &'static str {
        match self {
            Base::Field => "field",
            Base::Poly { .. } => "poly",
            Base::ProjPoly { .. } => "proj-poly",
            Base::Series { .. } => "series",
        }
    }
}

/// Restriction of a polynomial family to a curve: every base variable but
/// `var` is set to a scalar (possibly in an extension of the field) and the
/// result is expanded as a series in `var`.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub var: String,
    pub assignments: Vec<(String, Scalar)>,
    pub precision: usize,
}

#[derive(Clone, Debug)]
pub struct InputDoc {
    pub field: Field,
    pub base: Base,
    /// Coefficients as polynomials in the base variables (none for a field
    /// base, the series variable for a series base).
    pub form: TernaryForm<Poly>,
    pub specialize: Option<Specialization>,
}

pub fn parse_input(path: &Path) -> Result<InputDoc, InputError> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| InputError::at((0, 0), format!("cannot read {}: {e}", path.display())))?;
    parse_input_str(&src)
}

pub fn parse_input_value(v: &serde_json::Value) -> Result<InputDoc, InputError> {
    parse_input_str(&serde_json::to_string_pretty(v).expect("values serialize"))
}

pub fn parse_input_str(src: &str) -> Result<InputDoc, InputError> {
    let raw: RawDoc = serde_json::from_str(src).map_err(|e| {
        let mut msg = e.to_string();
        if let Some(i) = msg.rfind(" at line ") {
            msg.truncate(i);
        }
        InputError::at((e.line(), e.column()), msg)
    })?;
    let loc = Locator(src);
    if raw.schema != SCHEMA {
        return Err(InputError::at(
            loc.value(&["schema"]),
            format!("unsupported schema '{}', expected '{SCHEMA}'", raw.schema),
        ));
    }
    let field = build_field(&raw.field).map_err(|m| InputError::at(loc.value(&["field"]), m))?;
    let base = build_base(&raw.base, &field).map_err(|m| InputError::at(loc.value(&["base"]), m))?;
    let vars: Arc<Vec<String>> = match &base {
        Base::Field => Arc::new(vec![]),
        Base::Poly { vars } | Base::ProjPoly { vars } => vars.clone(),
        Base::Series { var, .. } => Arc::new(vec![var.to_string()]),
    };
    let srcs = [&raw.form.a, &raw.form.b, &raw.form.c, &raw.form.alpha, &raw.form.beta, &raw.form.gamma];
    let mut coeffs = Vec::with_capacity(6);
    for (key, s) in COEFF_KEYS.iter().zip(srcs) {
        let p = parse_poly(s, &field, &vars).map_err(|e| {
            let (line, col) = loc.value(&["form", key]);
            let pos = if line == 0 { (0, 0) } else { (line, col + e.column()) };
            InputError::at(pos, format!("coefficient '{key}': {e}"))
        })?;
        coeffs.push(p);
    }
    let form = TernaryForm::from_array(std::array::from_fn(|i| coeffs[i].clone()));
    if form.is_zero() {
        return Err(InputError::at(loc.value(&["form"]), "all six coefficients are zero"));
    }
    if let Base::ProjPoly { .. } = base {
        Family::projective(form.clone()).map_err(|e| InputError::at(loc.value(&["form"]), e.to_string()))?;
    }
    let specialize = match &raw.specialize {
        None => None,
        Some(s) => Some(
            build_specialization(s, &field, &base)
                .map_err(|m| InputError::at(loc.value(&["specialize"]), m))?,
        ),
    };
    Ok(InputDoc { field, base, form, specialize })
}

fn build_field(raw: &RawField) -> Result<Field, String> {
    let gen = raw.generator.clone().unwrap_or_else(|| "g".to_string());
    if !is_identifier(&gen) {
        return Err(format!("generator name '{gen}' is not an identifier"));
    }
    let modulus = match (&raw.modulus, raw.degree) {
        (Some(m), _) => Some(m.clone()),
        (None, k) if k > 1 && raw.characteristic != 0 => {
            Field::galois(raw.characteristic, k).map_err(|e| e.to_string())?.spec().modulus.clone()
        }
        (None, _) => None,
    };
    let spec = FieldSpec { characteristic: raw.characteristic, degree: raw.degree, modulus };
    Field::with_generator(spec, &gen).map_err(|e| e.to_string())
}

fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_vars(vars: &[String], field: &Field) -> Result<(), String> {
    let mut seen = BTreeSet::new();
    for v in vars {
        if !is_identifier(v) {
            return Err(format!("variable name '{v}' is not an identifier"));
        }
        if field.degree() > 1 && v == field.generator_name() {
            return Err(format!("variable '{v}' clashes with the field generator"));
        }
        if !seen.insert(v) {
            return Err(format!("variable '{v}' declared twice"));
        }
    }
    Ok(())
}

fn build_base(raw: &RawBase, field: &Field) -> Result<Base, String> {
    Ok(match raw {
        RawBase::Field => Base::Field,
        RawBase::Poly { vars } => {
            check_vars(vars, field)?;
            if vars.is_empty() {
                return Err("a poly base needs at least one variable".into());
            }
            Base::Poly { vars: Arc::new(vars.clone()) }
        }
        RawBase::ProjPoly { vars } => {
            check_vars(vars, field)?;
            if vars.len() < 2 {
                return Err("a projective base needs at least two variables".into());
            }
            Base::ProjPoly { vars: Arc::new(vars.clone()) }
        }
        RawBase::Series { var, precision } => {
            check_vars(std::slice::from_ref(var), field)?;
            if *precision == 0 {
                return Err("series precision must be positive".into());
            }
            Base::Series { var: Arc::from(var.as_str()), precision: *precision }
        }
    })
}

fn build_specialization(raw: &RawSpecialize, field: &Field, base: &Base) -> Result<Specialization, String> {
    let Base::Poly { vars } = base else {
        return Err("specialization needs a poly base".into());
    };
    if !vars.contains(&raw.var) {
        return Err(format!("'{}' is not a base variable", raw.var));
    }
    if raw.precision == 0 {
        return Err("series precision must be positive".into());
    }
    let target = if raw.extension_degree == 1 {
        field.clone()
    } else if raw.extension_degree == 0 {
        return Err("extension degree must be at least 1".into());
    } else {
        field.extend(raw.extension_degree).map_err(|e| e.to_string())?.target
    };
    let none = Arc::new(vec![]);
    let mut assignments = Vec::new();
    for v in vars.iter().filter(|v| **v != raw.var) {
        let src = raw.assign.get(v).ok_or_else(|| format!("no value assigned to '{v}'"))?;
        let p = parse_poly(src, &target, &none).map_err(|e| format!("value of '{v}': {e}"))?;
        assignments.push((v.clone(), p.constant_term()));
    }
    if let Some(k) = raw.assign.keys().find(|k| !vars.contains(k) || **k == raw.var) {
        return Err(format!("cannot assign '{k}'"));
    }
    Ok(Specialization { var: raw.var.clone(), assignments, precision: raw.precision })
}

impl InputDoc {
    /// The form over the field itself.
    pub fn scalar_form(&self) -> Option<TernaryForm<Scalar>> {
        matches!(self.base, Base::Field).then(|| self.form.map(|p| p.constant_term()))
    }

    /// The polynomial family, for poly and proj-poly bases.
    pub fn family(&self) -> Option<conicdisc::Result<Family>> {
        match self.base {
            Base::Poly { .. } => Some(Family::new(self.form.clone())),
            Base::ProjPoly { .. } => Some(Family::projective(self.form.clone())),
            _ => None,
        }
    }

    /// The form over a truncated power series ring: the document's own for a
    /// series base, or the specialization of a poly family. `precision`
    /// overrides the declared one.
    pub fn series_form(&self, precision: Option<usize>) -> Option<conicdisc::Result<TernaryForm<Series>>> {
        match (&self.base, &self.specialize) {
            (Base::Series { var, precision: n }, _) => {
                let n = precision.unwrap_or(*n);
                Some(Ok(self.form.map(|p| poly_to_series(p, var, n))))
            }
            (Base::Poly { .. }, Some(s)) => {
                let fam = match Family::new(self.form.clone()) {
                    Ok(f) => f,
                    Err(e) => return Some(Err(e)),
                };
                let assignments: Vec<(&str, Scalar)> =
                    s.assignments.iter().map(|(v, x)| (v.as_str(), x.clone())).collect();
                Some(specialize_to_series(&fam, &s.var, &assignments, precision.unwrap_or(s.precision)))
            }
            _ => None,
        }
    }
}

/// A polynomial in one variable as a series truncated at `t^n`.
pub fn poly_to_series(p: &Poly, var: &Arc<str>, n: usize) -> Series {
    let f = p.field();
    let mut cs = vec![f.zero(); n];
    for (e, c) in p.terms() {
        let k = e.first().copied().unwrap_or(0) as usize;
        if k < n {
            cs[k] = c.clone();
        }
    }
    Series::from_coeffs(f, var, n, &cs)
}

/// Finds where a value sits in the JSON source, by walking a key path
/// textually. Good enough for diagnostics; positions are 1-based.
struct Locator<'a>(&'a str);

impl Locator<'_> {
    fn value(&self, path: &[&str]) -> (usize, usize) {
        let src = self.0;
        let mut from = 0;
        for key in path {
            let pat = format!("\"{key}\"");
            let Some(i) = find_key(&src[from..], &pat) else { return (0, 0) };
            from += i + pat.len();
        }
        // Skip the colon and whitespace; land inside an opening quote.
        let rest = &src[from..];
        let skip = rest.find(|c: char| !(c.is_whitespace() || c == ':')).unwrap_or(0);
        let mut at = from + skip;
        if src[at..].starts_with('"') {
            at += 1;
        }
        let line = src[..at].matches('\n').count() + 1;
        let line_start = src[..at].rfind('\n').map_or(0, |i| i + 1);
        (line, src[line_start..at].chars().count())
    }
}

/// A quoted key followed by a colon.
fn find_key(s: &str, pat: &str) -> Option<usize> {
    let mut from = 0;
    while let Some(i) = s[from..].find(pat) {
        let at = from + i;
        if s[at + pat.len()..].trim_start().starts_with(':') {
            return Some(at);
        }
        from = at + pat.len();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(form: &str, base: &str) -> String {
        format!(
            "{{\n  \"schema\": \"conicdisc/1\",\n  \"field\": {{\"characteristic\": 2}},\n  \"base\": {base},\n  \"form\": {form}\n}}\n"
        )
    }

    const THREEFOLD: &str =
        r#"{"a": "1", "b": "u", "c": "v", "alpha": "u^2", "beta": "0", "gamma": "0"}"#;

    #[test]
    fn parses_a_family() {
        let d = parse_input_str(&doc(THREEFOLD, r#"{"kind": "poly", "vars": ["u", "v"]}"#)).unwrap();
        assert_eq!(d.base.kind(), "poly");
        assert_eq!(d.form.alpha.to_string(), "u^2");
        assert!(d.family().unwrap().is_ok());
    }

    #[test]
    fn bad_exponent_has_a_position() {
        let form = r#"{"a": "1", "b": "u^-1", "c": "v", "alpha": "0", "beta": "0", "gamma": "0"}"#;
        let e = parse_input_str(&doc(form, r#"{"kind": "poly", "vars": ["u", "v"]}"#)).unwrap_err();
        assert_eq!(e.line, 5);
        let line = doc(form, "").lines().nth(4).unwrap().to_string();
        // The column points at the minus sign.
        assert_eq!(line.chars().nth(e.column - 1), Some('-'), "{e}");
    }

    #[test]
    fn undeclared_variable_is_named() {
        let form = r#"{"a": "1", "b": "w", "c": "v", "alpha": "0", "beta": "0", "gamma": "0"}"#;
        let e = parse_input_str(&doc(form, r#"{"kind": "poly", "vars": ["u", "v"]}"#)).unwrap_err();
        assert!(e.message.contains("'w'"), "{e}");
        assert_eq!(e.line, 5);
    }

    #[test]
    fn syntax_errors_come_from_serde() {
        let e = parse_input_str("{\n  \"schema\": \"conicdisc/1\",\n  \"field\": }").unwrap_err();
        assert_eq!((e.line, e.column), (3, 12));
    }

    #[test]
    fn rejects_other_schemas_and_unknown_keys() {
        let src = doc(THREEFOLD, r#"{"kind": "poly", "vars": ["u", "v"]}"#);
        assert!(parse_input_str(&src.replace("conicdisc/1", "conicdisc/2")).is_err());
        assert!(parse_input_str(&src.replace("\"schema\"", "\"extra\": 1, \"schema\"")).is_err());
    }

    #[test]
    fn series_base_truncates() {
        let form = r#"{"a": "1", "b": "t", "c": "t^5 + t", "alpha": "0", "beta": "0", "gamma": "0"}"#;
        let d = parse_input_str(&doc(form, r#"{"kind": "series", "var": "t", "precision": 3}"#)).unwrap();
        let q = d.series_form(None).unwrap().unwrap();
        assert_eq!(q.c.precision(), 3);
        assert_eq!(q.c.valuation(), conicdisc::exactalg::Valuation::Finite(1));
        assert_eq!(d.series_form(Some(8)).unwrap().unwrap().c.coeff(5).to_string(), "1");
    }

    #[test]
    fn specialization_into_an_extension() {
        let src = doc(THREEFOLD, r#"{"kind": "poly", "vars": ["u", "v"]}"#).replace(
            "\n}\n",
            ",\n  \"specialize\": {\"var\": \"u\", \"assign\": {\"v\": \"g\"}, \"extension_degree\": 2, \"precision\": 12}\n}\n",
        );
        let d = parse_input_str(&src).unwrap();
        let q = d.series_form(None).unwrap().unwrap();
        assert_eq!(q.c.field().name(), "F4");
        let bad = src.replace("\"v\": \"g\"", "\"w\": \"1\"");
        assert!(parse_input_str(&bad).is_err());
    }

    #[test]
    fn generator_names() {
        let src = doc(
            r#"{"a": "w", "b": "u", "c": "1", "alpha": "0", "beta": "0", "gamma": "0"}"#,
            r#"{"kind": "poly", "vars": ["u"]}"#,
        )
        .replace(r#"{"characteristic": 2}"#, r#"{"characteristic": 2, "degree": 2, "generator": "w"}"#);
        let d = parse_input_str(&src).unwrap();
        assert_eq!(d.field.name(), "F4");
        assert!(parse_input_str(&src.replace("[\"u\"]", "[\"w\"]")).is_err());
    }
}
