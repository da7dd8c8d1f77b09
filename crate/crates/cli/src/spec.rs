//! Field-spec files: TOML with `q = <prime>` and `f = "<polynomial>"`.

use std::ops::Range;
use std::path::{Path, PathBuf};

use ffnorm::field::{build_field, FieldError, FunctionField};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Syntax { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{path}: {source}")]
    Field { path: PathBuf, source: FieldError },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    q: u32,
    f: toml::Spanned<String>,
}

/// A parsed spec, not yet turned into a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub q: u32,
    pub f: String,
}

/// 1-based line and column of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = 1 + before.matches('\n').count();
    let column = 1 + before.rsplit('\n').next().map_or(0, |l| l.chars().count());
    (line, column)
}

impl FieldSpec {
    pub fn parse(src: &str, path: &Path) -> Result<Self, SpecError> {
        let syntax = |span: Option<Range<usize>>, message: String| {
            let (line, column) = span.map_or((1, 1), |s| line_col(src, s.start));
            SpecError::Syntax { path: path.to_path_buf(), line, column, message }
        };
        let raw: Raw = toml::from_str(src).map_err(|e| syntax(e.span(), e.message().trim().to_string()))?;
        let spec = FieldSpec { q: raw.q, f: raw.f.get_ref().clone() };
        // surface polynomial syntax errors at their position in the file
        if let Err(FieldError::Parse(e)) = build_check(&spec) {
            let start = raw.f.span().start + 1;
            let (line, column) = line_col(src, start);
            let (line, column) = if e.line == 1 { (line, column + e.column - 1) } else { (line + e.line - 1, e.column) };
            return Err(SpecError::Syntax { path: path.to_path_buf(), line, column, message: e.message });
        }
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let src = std::fs::read_to_string(path).map_err(|source| SpecError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&src, path)
    }

    pub fn build(&self, path: &Path) -> Result<FunctionField, SpecError> {
        build_field(self.q, &self.f).map_err(|source| SpecError::Field { path: path.to_path_buf(), source })
    }
}

fn build_check(spec: &FieldSpec) -> Result<(), FieldError> {
    ffnorm::arith::parse_bivariate(&spec.f, spec.q.max(2))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("t.toml")
    }

    #[test]
    fn reads_q_and_f() {
        let s = FieldSpec::parse("q = 3\nf = \"t^2 - x\"\n", p()).unwrap();
        assert_eq!(s, FieldSpec { q: 3, f: "t^2 - x".into() });
    }

    #[test]
    fn toml_errors_have_positions() {
        match FieldSpec::parse("q = 3\nf = \n", p()) {
            Err(SpecError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(FieldSpec::parse("q = 3\n", p()), Err(SpecError::Syntax { .. })));
    }

    #[test]
    fn polynomial_errors_point_into_the_string() {
        match FieldSpec::parse("q = 3\nf = \"t^2 - (x\"\n", p()) {
            Err(SpecError::Syntax { line, column, .. }) => {
                assert_eq!(line, 2);
                assert!(column > 5, "{column}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn line_col_counts_from_one() {
        assert_eq!(line_col("ab\ncd", 0), (1, 1));
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
    }
}
