//! Python front end: parsing, function-unit extraction and line counting.

mod loc;
mod lower;
mod node;
mod units;

pub use loc::{loc_of, CodeLines};
pub use lower::LineIndex;
pub use node::{BlockRole, ComprehensionKind, LineRange, LiteralKind, NodeKind, Span, SyntaxNode, Walk};
pub use units::{extract_functions, module_dotted_name, FunctionUnit, Parameter};

use thiserror::Error;

/// A file the parser rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at line {line}: {message}")]
pub struct ParseFailure {
    pub line: u32,
    pub message: String,
}

/// Parses Python 3 source into a module-rooted tree.
pub fn parse_source(source_text: &str) -> Result<SyntaxNode, ParseFailure> {
    let index = LineIndex::new(source_text);
    let suite =
        <rustpython_parser::ast::Suite as rustpython_parser::Parse>::parse(source_text, "<module>").map_err(|e| {
            let (line, _) = index.position(e.offset.to_usize());
            ParseFailure { line, message: e.error.to_string() }
        })?;
    let (last_line, last_col) = index.position(source_text.len());
    Ok(lower::Lowerer::new(source_text, &index).module(&suite, last_line, last_col))
}

/// A parsed source file with its line classification.
#[derive(Debug, Clone)]
pub struct ParsedModule {
    pub relative_path: String,
    pub source: String,
    pub root: SyntaxNode,
    pub code_lines: CodeLines,
}

impl ParsedModule {
    pub fn parse(relative_path: &str, source: String) -> Result<Self, ParseFailure> {
        let root = parse_source(&source)?;
        let code_lines = CodeLines::from_source(&source);
        Ok(ParsedModule { relative_path: relative_path.to_string(), source, root, code_lines })
    }

    pub fn module_loc(&self) -> u32 {
        self.code_lines.total()
    }

    pub fn functions(&self) -> Vec<FunctionUnit> {
        extract_functions(&self.root, &self.relative_path, &self.code_lines)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_version_has_one_function_child() {
        let root = parse_source("def parse_version(s):\n    return map(int, s.split('.'))").unwrap();
        assert_eq!(root.kind, NodeKind::Module);
        assert_eq!(root.children.len(), 1);
        assert_eq!(root.children[0].kind, NodeKind::FunctionDef);
        assert_eq!(root.children[0].text(), Some("parse_version"));
    }

    #[test]
    fn empty_file_has_no_children() {
        let root = parse_source("").unwrap();
        assert_eq!(root.kind, NodeKind::Module);
        assert!(root.children.is_empty());
    }

    #[test]
    fn malformed_def_fails_on_line_one() {
        let err = parse_source("def f(:").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn failure_line_points_into_file() {
        let err = parse_source("x = 1\ny = 2\nif x\n    pass\n").unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn modern_constructs_parse() {
        let src = "if (n := len(s)) > 2:\n    a, *rest = s.split()\n    msg = f'{a!r:>10} {n}'\n";
        let root = parse_source(src).unwrap();
        let kinds: Vec<NodeKind> = root.walk().map(|n| n.kind).collect();
        assert!(kinds.contains(&NodeKind::NamedExpr));
        assert!(kinds.contains(&NodeKind::StarTarget));
        assert!(kinds.contains(&NodeKind::FormattedString));
    }

    #[test]
    fn spans_enclose_children() {
        let src = "@deco(1)\ndef f(a: str = 'x', *args, **kw) -> int:\n    try:\n        return {k: v for k, v in kw.items() if v}\n    except (KeyError, ValueError) as e:\n        raise\n    finally:\n        pass\n";
        let root = parse_source(src).unwrap();
        for node in root.walk() {
            for child in &node.children {
                assert!(node.span.encloses(&child.span), "{:?} does not enclose {:?}", node.kind, child.kind);
            }
        }
    }

    #[test]
    fn string_escapes_are_decoded() {
        let root = parse_source("p = \"[0-9]+\\.[0-9.]+\"\n").unwrap();
        let lit = root.walk().find(|n| n.is_string_literal()).unwrap();
        assert_eq!(lit.text(), Some("[0-9]+\\.[0-9.]+"));
    }
}
