//! Parsing, checking and feature discovery for `.imp` programs.
//!
//! The language is a small C-like imperative language over one fixed-width
//! integer type. Features are the string labels of `log("...")` statements.

pub mod ast;
mod lexer;
mod parser;
pub mod printer;
pub mod validate;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ast::*;
pub use printer::{print_expr, print_program};
pub use validate::{validate, SemanticError, SemanticErrorKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub expected: String,
    pub found: String,
}

pub fn parse(source: &str) -> Result<Program, ParseError> {
    parse_named(source, "<input>")
}

/// Parses `source`, recording `file` in every source location.
pub fn parse_named(source: &str, file: &str) -> Result<Program, ParseError> {
    parser::Parser::new(source, file)?.parse_program()
}

/// A deduplicated, lexicographically ordered set of feature labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureSet(BTreeSet<String>);

impl FeatureSet {
    pub fn new() -> FeatureSet {
        FeatureSet::default()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.0.contains(label)
    }

    pub fn insert(&mut self, label: impl Into<String>) -> bool {
        self.0.insert(label.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn is_subset(&self, other: &FeatureSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &FeatureSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// Labels of `self` missing from `other`.
    pub fn difference<'a>(&'a self, other: &'a FeatureSet) -> impl Iterator<Item = &'a str> {
        self.0.difference(&other.0).map(String::as_str)
    }

    /// Canonical name: labels joined by `+`, or `baseline` when empty.
    pub fn label(&self) -> String {
        if self.0.is_empty() {
            "baseline".to_string()
        } else {
            self.iter().collect::<Vec<_>>().join("+")
        }
    }

    pub fn to_vec(&self) -> Vec<String> {
        self.0.iter().cloned().collect()
    }
}

impl<S: Into<String>> FromIterator<S> for FeatureSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        FeatureSet(iter.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().collect::<Vec<_>>().join(", "))
    }
}

/// The distinct `log` labels occurring anywhere in `p`.
pub fn extract_features(p: &Program) -> FeatureSet {
    p.log_labels().into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_main() {
        let p = parse("func main() { }").unwrap();
        assert_eq!(p.functions.len(), 1);
        assert!(p.entry_function().unwrap().body.is_empty());
        assert!(validate(&p).is_empty());
        assert!(extract_features(&p).is_empty());
    }

    #[test]
    fn missing_expression_is_a_parse_error() {
        let err = parse("func main() { x = ; }").unwrap_err();
        assert_eq!((err.line, err.col), (1, 19));
        assert_eq!(err.expected, "an expression");
    }

    #[test]
    fn self_recursion_reported_once() {
        let p = parse("func f() { f(); } func main() { f(); }").unwrap();
        let errs = validate(&p);
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].kind, SemanticErrorKind::RecursionError("f".into()));
    }

    #[test]
    fn mutual_recursion() {
        let p = parse("func f() { g(); } func g() { f(); } func main() { f(); }").unwrap();
        let kinds: Vec<_> = validate(&p).into_iter().map(|e| e.kind).collect();
        assert_eq!(
            kinds,
            vec![
                SemanticErrorKind::RecursionError("f".into()),
                SemanticErrorKind::RecursionError("g".into())
            ]
        );
    }

    #[test]
    fn non_constant_array_size() {
        let p = parse("func main() { int n = 3; int a[n]; }").unwrap();
        let kinds: Vec<_> = validate(&p).into_iter().map(|e| e.kind).collect();
        assert_eq!(kinds, vec![SemanticErrorKind::NonConstArraySize]);
    }

    #[test]
    fn duplicate_labels_deduplicate() {
        let p = parse(r#"func main() { log("push"); log("push"); log("a"); }"#).unwrap();
        let f = extract_features(&p);
        assert_eq!(f.to_vec(), vec!["a".to_string(), "push".to_string()]);
        assert_eq!(f.label(), "a+push");
    }

    #[test]
    fn type_errors() {
        let p = parse("func main() { int x = 1; assert(x); if (x + 1) { } }").unwrap();
        let errs = validate(&p);
        assert_eq!(errs.len(), 2);
        assert!(errs.iter().all(|e| matches!(e.kind, SemanticErrorKind::TypeMismatch { .. })));
    }

    #[test]
    fn use_before_declaration() {
        let p = parse("func main() { x = 1; int x; }").unwrap();
        let errs = validate(&p);
        assert_eq!(
            errs[0].kind,
            SemanticErrorKind::UndeclaredVariable("x".into())
        );
        assert!(errs[0].stmt.is_some());
    }

    #[test]
    fn scoped_declarations() {
        let src = "func main() { if (true) { int t = 1; } else { int t = 2; } \
                   for (int i = 0; i < 2; i = i + 1) { } for (int i = 0; i < 2; i = i + 1) { } }";
        assert!(validate(&parse(src).unwrap()).is_empty());
        let p = parse("int g; func main() { int g; }").unwrap();
        assert_eq!(
            validate(&p)[0].kind,
            SemanticErrorKind::Redeclaration("g".into())
        );
    }

    #[test]
    fn entry_rules() {
        let p = parse("func main(int a) { }").unwrap();
        assert_eq!(validate(&p)[0].kind, SemanticErrorKind::EntryHasParams);
        let p = parse("func helper() { }").unwrap();
        assert_eq!(validate(&p)[0].kind, SemanticErrorKind::MissingEntry);
        let p = parse("func main() { return 1; }").unwrap();
        assert_eq!(validate(&p)[0].kind, SemanticErrorKind::ReturnInEntry);
    }

    #[test]
    fn call_checks() {
        let p = parse("func f(int a) { } func main() { int x; x = f(1, 2); g(); }").unwrap();
        let kinds: Vec<_> = validate(&p).into_iter().map(|e| e.kind).collect();
        assert!(kinds.contains(&SemanticErrorKind::ArityMismatch {
            func: "f".into(),
            expected: 1,
            found: 2
        }));
        assert!(kinds.contains(&SemanticErrorKind::NoReturnValue("f".into())));
        assert!(kinds.contains(&SemanticErrorKind::UndeclaredFunction("g".into())));
    }

    #[test]
    fn else_if_and_unbraced_bodies() {
        let a = parse("func main() { int i = 0; while (i < 3) i = i + 1; if (i == 0) { } else if (i == 1) { } }").unwrap();
        let b = parse(&print_program(&a)).unwrap();
        assert!(a.same_structure(&b));
    }

    #[test]
    fn statement_ids_are_unique_and_mapped() {
        let p = parse("int g; func main() { int x = 1; if (x > 0) { log(\"a\"); } }").unwrap();
        let mut ids: Vec<StmtId> = p.globals.iter().map(|g| g.id).collect();
        ids.extend(p.functions.iter().map(|f| f.id));
        ids.extend(p.all_statements().iter().map(|s| s.id));
        let unique: BTreeSet<_> = ids.iter().collect();
        assert_eq!(unique.len(), ids.len());
        assert!(ids.iter().all(|id| p.source_map.contains_key(id)));
    }

    #[test]
    fn rejects_garbage_without_panicking() {
        for src in ["", "func", "func main() {", "int a[;", "\"unterminated", "@", "99999999999999999999"] {
            let _ = parse(src);
        }
        let deep = format!("func main() {{ int x = {}1{}; }}", "(".repeat(5000), ")".repeat(5000));
        assert!(parse(&deep).is_err());
    }
}
