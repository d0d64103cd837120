//! JSON documents read and written by the command-line tool.
//!
//! Rationals are strings `"p/q"` (or `"p"`), λ = ∞ is the string `"inf"`,
//! and bivector indices are 1-based with `i < j`.

use bipencil::algebra::{parse_rational, Rational};
use bipencil::charts::{ChartPencil, FunctionFamily, FunctionTag, MultiPoly, PolyBivector};
use bipencil::pencil::Lambda;
use bipencil::Subspace;
use serde::{Deserialize, Serialize};
use std::fmt;

pub const PENCIL_FORMAT: &str = "bipencil-pencil";
pub const SUBSPACE_FORMAT: &str = "bipencil-subspace";
pub const FAMILY_FORMAT: &str = "bipencil-family";
pub const VERSION: u32 = 1;

/// A malformed or inconsistent document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        // serde_json reports line and column
        FormatError(format!("malformed JSON: {e}"))
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coefficient: String,
    /// One exponent per variable; empty for a constant term.
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub i: usize,
    pub j: usize,
    pub polynomial: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilDocument {
    pub format: String,
    pub version: u32,
    pub dimension: usize,
    /// Coordinate names; empty for a constant pencil.
    pub variables: Vec<String>,
    pub a: Vec<Entry>,
    pub b: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceDocument {
    pub format: String,
    pub version: u32,
    pub ambient: usize,
    /// Basis rows of rational strings.
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    Casimir,
    EigenvalueReal,
    EigenvalueImag,
    Hamiltonian,
    Extension,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Member {
    pub tag: Tag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    pub polynomial: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianEntry {
    pub lambda: String,
    pub polynomial: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDocument {
    pub format: String,
    pub version: u32,
    pub dimension: usize,
    pub members: Vec<Member>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hamiltonians: Vec<HamiltonianEntry>,
}

fn check_header(format: &str, version: u32, expected: &str) -> Result<(), FormatError> {
    if format != expected {
        return bad(format!("expected format \"{expected}\", found \"{format}\""));
    }
    if version != VERSION {
        return bad(format!("unsupported version {version}"));
    }
    Ok(())
}

pub fn parse_exact(text: &str) -> Result<Rational, FormatError> {
    parse_rational(text).ok_or_else(|| FormatError(format!("not an exact rational: \"{text}\"")))
}

pub fn parse_lambda(text: &str) -> Result<Lambda, FormatError> {
    Lambda::parse(text).ok_or_else(|| FormatError(format!("not a rational or \"inf\": \"{text}\"")))
}

pub fn lambda_string(l: &Lambda) -> String {
    match l {
        Lambda::Finite(v) => v.to_string(),
        Lambda::Infinity => "inf".into(),
    }
}

pub fn terms_to_poly(n: usize, terms: &[Term], allow_vars: bool) -> Result<MultiPoly, FormatError> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let c = parse_exact(&t.coefficient)?;
        let exps = if t.exponents.is_empty() {
            vec![0; n]
        } else if !allow_vars {
            return bad("constant pencil documents must use empty exponent vectors");
        } else if t.exponents.len() == n {
            t.exponents.clone()
        } else {
            return bad(format!("exponent vector of length {} in dimension {n}", t.exponents.len()));
        };
        out.push((exps, c));
    }
    Ok(MultiPoly::from_terms(n, out))
}

pub fn poly_to_terms(p: &MultiPoly, with_vars: bool) -> Vec<Term> {
    p.terms()
        .map(|(e, c)| Term {
            coefficient: c.to_string(),
            exponents: if with_vars && e.iter().any(|&k| k > 0) { e.clone() } else { Vec::new() },
        })
        .collect()
}

fn entries_to_bivector(n: usize, entries: &[Entry], allow_vars: bool, name: &str) -> Result<PolyBivector, FormatError> {
    let mut p = PolyBivector::zero(n);
    let mut seen = std::collections::BTreeSet::new();
    for e in entries {
        if !(1 <= e.i && e.i < e.j && e.j <= n) {
            return bad(format!("{name}: index pair ({}, {}) must satisfy 1 ≤ i < j ≤ {n}", e.i, e.j));
        }
        if !seen.insert((e.i, e.j)) {
            return bad(format!("{name}: duplicate entry ({}, {})", e.i, e.j));
        }
        p.set(e.i - 1, e.j - 1, terms_to_poly(n, &e.polynomial, allow_vars)?);
    }
    Ok(p)
}

fn bivector_to_entries(p: &PolyBivector, with_vars: bool) -> Vec<Entry> {
    let mut out: Vec<Entry> = p
        .entries()
        .filter(|(_, _, f)| !f.is_zero())
        .map(|(i, j, f)| Entry { i: i + 1, j: j + 1, polynomial: poly_to_terms(f, with_vars) })
        .collect();
    out.sort_by_key(|e| (e.i, e.j));
    out
}

impl PencilDocument {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let doc: PencilDocument = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        check_header(&self.format, self.version, PENCIL_FORMAT)?;
        if self.dimension == 0 {
            return bad("dimension must be positive");
        }
        if !self.variables.is_empty() && self.variables.len() != self.dimension {
            return bad(format!("{} variable names for dimension {}", self.variables.len(), self.dimension));
        }
        self.to_chart().map(|_| ())
    }

    pub fn is_constant(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn to_chart(&self) -> Result<ChartPencil, FormatError> {
        let n = self.dimension;
        let vars = !self.variables.is_empty();
        let a = entries_to_bivector(n, &self.a, vars, "a")?;
        let b = entries_to_bivector(n, &self.b, vars, "b")?;
        ChartPencil::new(a, b).map_err(|e| FormatError(e.to_string()))
    }

    /// Document for a chart; pass no variable names for a constant pencil.
    pub fn from_chart(c: &ChartPencil, variables: Vec<String>) -> Self {
        let with_vars = !variables.is_empty();
        PencilDocument {
            format: PENCIL_FORMAT.into(),
            version: VERSION,
            dimension: c.dim(),
            variables,
            a: bivector_to_entries(c.a(), with_vars),
            b: bivector_to_entries(c.b(), with_vars),
        }
    }

    /// Default names `x1 … xn`.
    pub fn default_variables(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

impl SubspaceDocument {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let doc: SubspaceDocument = serde_json::from_str(text)?;
        doc.to_subspace()?;
        Ok(doc)
    }

    pub fn to_subspace(&self) -> Result<Subspace, FormatError> {
        check_header(&self.format, self.version, SUBSPACE_FORMAT)?;
        let mut rows = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            if row.len() != self.ambient {
                return bad(format!("basis row of length {} in ambient dimension {}", row.len(), self.ambient));
            }
            rows.push(row.iter().map(|s| parse_exact(s)).collect::<Result<Vec<_>, _>>()?);
        }
        Ok(Subspace::new(self.ambient, rows))
    }

    pub fn from_subspace(u: &Subspace) -> Self {
        SubspaceDocument {
            format: SUBSPACE_FORMAT.into(),
            version: VERSION,
            ambient: u.ambient(),
            basis: u.vectors().iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

impl FamilyDocument {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let doc: FamilyDocument = serde_json::from_str(text)?;
        doc.to_family()?;
        doc.hamiltonian_pairs()?;
        Ok(doc)
    }

    pub fn to_family(&self) -> Result<FunctionFamily, FormatError> {
        check_header(&self.format, self.version, FAMILY_FORMAT)?;
        let n = self.dimension;
        let mut members = Vec::with_capacity(self.members.len());
        for m in &self.members {
            let f = terms_to_poly(n, &m.polynomial, true)?;
            let lambda = m.lambda.as_deref().map(parse_lambda).transpose()?;
            let tag = match (m.tag, lambda) {
                (Tag::Casimir, Some(l)) => FunctionTag::CasimirAt(l),
                (Tag::Hamiltonian, Some(l)) => FunctionTag::HamiltonianAt(l),
                (Tag::Casimir | Tag::Hamiltonian, None) => return bad("casimir and hamiltonian members need \"lambda\""),
                (Tag::EigenvalueReal, None) => FunctionTag::EigenvalueRealPart,
                (Tag::EigenvalueImag, None) => FunctionTag::EigenvalueImagPart,
                (Tag::Extension, None) => FunctionTag::Extension,
                (_, Some(_)) => return bad("only casimir and hamiltonian members take \"lambda\""),
            };
            members.push((f, tag));
        }
        Ok(FunctionFamily::new(members))
    }

    pub fn hamiltonian_pairs(&self) -> Result<Vec<(Lambda, MultiPoly)>, FormatError> {
        self.hamiltonians
            .iter()
            .map(|h| Ok((parse_lambda(&h.lambda)?, terms_to_poly(self.dimension, &h.polynomial, true)?)))
            .collect()
    }

    pub fn from_family(n: usize, family: &FunctionFamily, hamiltonians: &[(Lambda, MultiPoly)]) -> Self {
        let members = family
            .members
            .iter()
            .map(|(f, tag)| {
                let (tag, lambda) = match tag {
                    FunctionTag::CasimirAt(l) => (Tag::Casimir, Some(lambda_string(l))),
                    FunctionTag::HamiltonianAt(l) => (Tag::Hamiltonian, Some(lambda_string(l))),
                    FunctionTag::EigenvalueRealPart => (Tag::EigenvalueReal, None),
                    FunctionTag::EigenvalueImagPart => (Tag::EigenvalueImag, None),
                    FunctionTag::Extension => (Tag::Extension, None),
                };
                Member { tag, lambda, polynomial: poly_to_terms(f, true) }
            })
            .collect();
        let hamiltonians = hamiltonians
            .iter()
            .map(|(l, h)| HamiltonianEntry { lambda: lambda_string(l), polynomial: poly_to_terms(h, true) })
            .collect();
        FamilyDocument { format: FAMILY_FORMAT.into(), version: VERSION, dimension: n, members, hamiltonians }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bipencil::algebra::rat;
    use bipencil::corpus;

    #[test]
    fn corpus_round_trips() {
        for entry in corpus::corpus() {
            let vars = if entry.kind == corpus::EntryKind::Constant {
                Vec::new()
            } else {
                PencilDocument::default_variables(entry.chart.dim())
            };
            let doc = PencilDocument::from_chart(&entry.chart, vars);
            let text = doc.to_json();
            let again = PencilDocument::parse(&text).unwrap();
            assert_eq!(again, doc, "{}", entry.name);
            let chart = again.to_chart().unwrap();
            assert_eq!((chart.a(), chart.b()), (entry.chart.a(), entry.chart.b()), "{}", entry.name);
            assert_eq!(again.to_json(), text);
        }
    }

    #[test]
    fn rejects_bad_documents() {
        let ok = r#"{"format":"bipencil-pencil","version":1,"dimension":2,"variables":[],
            "a":[{"i":1,"j":2,"polynomial":[{"coefficient":"1/2","exponents":[]}]}],"b":[]}"#;
        assert!(PencilDocument::parse(ok).is_ok());
        for (from, to) in [
            (r#""i":1,"j":2"#, r#""i":2,"j":1"#),
            (r#""i":1,"j":2"#, r#""i":1,"j":3"#),
            (r#""1/2""#, r#""0.5""#),
            (r#""1/2""#, r#""1/0""#),
            (r#""exponents":[]"#, r#""exponents":[1,0]"#),
            (r#""version":1"#, r#""version":2"#),
            (r#""bipencil-pencil""#, r#""bipencil-family""#),
        ] {
            let text = ok.replace(from, to);
            assert!(PencilDocument::parse(&text).is_err(), "{text}");
        }
        let err = PencilDocument::parse("{\"format\": \n  \"bipencil-pencil\",,}").unwrap_err();
        assert!(err.0.contains("line 2"), "{err}");
    }

    #[test]
    fn family_round_trip() {
        let fam = corpus::so3_frozen_family();
        let hs = corpus::symmetric_top_hamiltonians();
        let doc = FamilyDocument::from_family(3, &fam, &hs);
        let again = FamilyDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(again, doc);
        assert_eq!(again.to_family().unwrap(), fam);
        assert_eq!(again.hamiltonian_pairs().unwrap(), hs);
        assert!(doc.to_json().contains("\"inf\""));
    }

    #[test]
    fn subspace_round_trip() {
        let u = Subspace::new(3, vec![vec![rat(1, 2), rat(0, 1), rat(1, 1)]]);
        let doc = SubspaceDocument::from_subspace(&u);
        assert_eq!(doc.basis[0], vec!["1", "0", "2"]);
        assert_eq!(SubspaceDocument::parse(&doc.to_json()).unwrap().to_subspace().unwrap(), u);
    }
}
