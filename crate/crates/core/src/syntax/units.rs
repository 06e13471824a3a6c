//! Function-unit extraction.

use serde::{Deserialize, Serialize};

use super::loc::CodeLines;
use super::node::{BlockRole, LineRange, NodeKind, Span, SyntaxNode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub hint: Option<String>,
    pub span: Span,
}

/// One analyzable function body, or the synthetic `__main__` holding a
/// module's top-level statements.
#[derive(Debug, Clone)]
pub struct FunctionUnit {
    pub qualified_name: String,
    pub name: String,
    pub module_path: String,
    pub parameters: Vec<Parameter>,
    /// Statements of the unit. Nested definitions appear as single statements;
    /// their bodies belong to their own units.
    pub body: Vec<SyntaxNode>,
    /// Whole definition including the `def` header (the module for `__main__`).
    pub span: Span,
    /// Lines from the first to the last body statement.
    pub body_lines: LineRange,
    pub is_synthetic_main: bool,
    pub ef_loc: u32,
    /// Index of the enclosing unit in the extraction order.
    pub parent: Option<usize>,
}

impl FunctionUnit {
    pub fn is_parameter(&self, name: &str) -> bool {
        self.parameters.iter().any(|p| p.name == name)
    }
}

/// `pkg/sub/mod.py` → `pkg.sub.mod`.
pub fn module_dotted_name(path: &str) -> String {
    let trimmed = path.strip_suffix(".py").unwrap_or(path);
    trimmed.split(['/', '\\']).filter(|s| !s.is_empty() && *s != ".").collect::<Vec<_>>().join(".")
}

fn body_lines(body: &[SyntaxNode], fallback: u32) -> LineRange {
    match (body.first(), body.last()) {
        (Some(first), Some(last)) => LineRange::new(first.span.start_line, last.span.end_line),
        _ => LineRange::new(fallback, fallback),
    }
}

struct Extractor<'a> {
    path: &'a str,
    lines: &'a CodeLines,
    units: Vec<FunctionUnit>,
}

impl Extractor<'_> {
    fn visit(&mut self, stmts: &[SyntaxNode], prefix: &str, parent: usize) {
        for stmt in stmts {
            match stmt.kind {
                NodeKind::FunctionDef => {
                    let name = stmt.text().unwrap_or("<anonymous>").to_string();
                    let qualified = format!("{prefix}.{name}");
                    let body = stmt.block_items(BlockRole::Body).to_vec();
                    let parameters = stmt
                        .block_items(BlockRole::Parameters)
                        .iter()
                        .map(|p| Parameter {
                            name: p.text().unwrap_or_default().to_string(),
                            hint: p
                                .block_items(BlockRole::Annotation)
                                .first()
                                .and_then(|a| a.text().map(str::to_string)),
                            span: p.span,
                        })
                        .collect();
                    let header_line = stmt.span.start_line;
                    let span = def_span(stmt);
                    let index = self.units.len();
                    self.units.push(FunctionUnit {
                        qualified_name: qualified.clone(),
                        name,
                        module_path: self.path.to_string(),
                        parameters,
                        body_lines: body_lines(&body, header_line),
                        ef_loc: self.lines.count(span.lines()),
                        body,
                        span,
                        is_synthetic_main: false,
                        parent: Some(parent),
                    });
                    self.visit(stmt.block_items(BlockRole::Body), &qualified, index);
                }
                NodeKind::ClassDef => {
                    let qualified = format!("{prefix}.{}", stmt.text().unwrap_or("<class>"));
                    self.visit(stmt.block_items(BlockRole::Body), &qualified, parent);
                }
                _ => {
                    for child in &stmt.children {
                        if let NodeKind::Block(role) = child.kind {
                            if matches!(role, BlockRole::Body | BlockRole::OrElse | BlockRole::Finally) {
                                self.visit(&child.children, prefix, parent);
                            } else if role == BlockRole::Handlers {
                                for h in &child.children {
                                    self.visit(h.block_items(BlockRole::Body), prefix, parent);
                                }
                            }
                        } else if child.kind == NodeKind::MatchCase {
                            self.visit(child.block_items(BlockRole::Body), prefix, parent);
                        }
                    }
                }
            }
        }
    }
}

/// The span of a definition without its decorators: from the `def` line to
/// the end of the body.
fn def_span(stmt: &SyntaxNode) -> Span {
    let decorators_end = stmt.block_items(BlockRole::Decorators).last().map(|d| d.span.end_line);
    match decorators_end {
        Some(end) if end >= stmt.span.start_line => Span::new(end + 1, 0, stmt.span.end_line, stmt.span.end_col),
        _ => stmt.span,
    }
}

/// All function and method definitions of a module (nested ones included)
/// plus the synthetic `__main__` unit, ordered by start line.
pub fn extract_functions(module_root: &SyntaxNode, path: &str, lines: &CodeLines) -> Vec<FunctionUnit> {
    let module = module_dotted_name(path);
    let main_body = module_root.children.clone();
    let main = FunctionUnit {
        qualified_name: if module.is_empty() { "__main__".to_string() } else { format!("{module}.__main__") },
        name: "__main__".to_string(),
        module_path: path.to_string(),
        parameters: Vec::new(),
        body_lines: body_lines(&main_body, 1),
        body: main_body,
        span: module_root.span,
        is_synthetic_main: true,
        ef_loc: 0,
        parent: None,
    };
    let mut extractor = Extractor { path, lines, units: vec![main] };
    extractor.visit(&module_root.children, &module, 0);
    let mut units = extractor.units;

    let nested: u32 = units.iter().filter(|u| u.parent == Some(0)).map(|u| u.ef_loc).sum();
    units[0].ef_loc = lines.total().saturating_sub(nested);

    // stable sort keeps `__main__` (index 0, line 1) first on ties
    let mut order: Vec<usize> = (0..units.len()).collect();
    order.sort_by_key(|&i| (units[i].span.start_line, i));
    let mut remap = vec![0usize; units.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new;
    }
    let mut sorted: Vec<FunctionUnit> = order.iter().map(|&i| units[i].clone()).collect();
    for unit in &mut sorted {
        unit.parent = unit.parent.map(|p| remap[p]);
    }
    sorted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_source;

    fn units(src: &str, path: &str) -> Vec<FunctionUnit> {
        let root = parse_source(src).unwrap();
        extract_functions(&root, path, &CodeLines::from_source(src))
    }

    #[test]
    fn parse_version_yields_function_and_main() {
        let src =
            "import os\n\ndef parse_version(s):\n    return map(int, s.split('.'))\n\nVERSION = parse_version('1.2')\n";
        let u = units(src, "setup.py");
        let names: Vec<_> = u.iter().map(|u| u.qualified_name.as_str()).collect();
        assert_eq!(names, ["setup.__main__", "setup.parse_version"]);
        assert!(u[0].is_synthetic_main);
        assert_eq!(u[1].ef_loc, 2);
        assert_eq!(u[0].ef_loc, 2);
        assert_eq!(u[1].parameters[0].name, "s");
        assert_eq!(u[1].body_lines, LineRange::new(4, 4));
    }

    #[test]
    fn import_only_module_has_only_main() {
        let u = units("import os\n", "tool.py");
        assert_eq!(u.len(), 1);
        assert!(u[0].is_synthetic_main);
        assert_eq!(u[0].body.len(), 1);
        assert_eq!(u[0].body[0].kind, NodeKind::Import);
    }

    #[test]
    fn method_in_class_in_function() {
        let src = "\
def outer():
    class Inner:
        def method(self):
            def helper():
                return 1
            return helper()
    return Inner
";
        let u = units(src, "pkg/mod.py");
        let names: Vec<_> = u.iter().map(|u| u.qualified_name.as_str()).collect();
        assert_eq!(
            names,
            ["pkg.mod.__main__", "pkg.mod.outer", "pkg.mod.outer.Inner.method", "pkg.mod.outer.Inner.method.helper"]
        );
        assert_eq!(u.iter().filter(|u| !u.is_synthetic_main).count(), 3);
        assert_eq!(u[2].parent, Some(1));
        assert_eq!(u[3].parent, Some(2));
    }

    #[test]
    fn type_hints_are_kept() {
        let u = units("def f(a: str, b: Optional[str] = None, *rest):\n    pass\n", "m.py");
        let p = &u[1].parameters;
        assert_eq!(p[0].hint.as_deref(), Some("str"));
        assert_eq!(p[1].hint.as_deref(), Some("Optional[str]"));
        assert_eq!(p[2].name, "rest");
        assert_eq!(p[2].hint, None);
    }

    #[test]
    fn decorators_stay_outside_the_unit() {
        let src = "@cache\ndef f(s):\n    return s\n";
        let u = units(src, "m.py");
        assert_eq!(u[1].span.start_line, 2);
        assert_eq!(u[1].ef_loc, 2);
        assert_eq!(u[0].ef_loc, 1);
    }
}
