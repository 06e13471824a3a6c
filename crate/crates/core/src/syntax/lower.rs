//! Lowering from the `rustpython` AST into [`SyntaxNode`] trees.

use rustpython_parser::ast::{self, Constant, Expr, Ranged, Stmt};
use rustpython_parser::text_size::TextRange;

use super::node::{BlockRole, ComprehensionKind, LiteralKind, NodeKind, Span, SyntaxNode};

/// Byte offset to (line, column) mapping.
#[derive(Debug, Clone)]
pub struct LineIndex {
    starts: Vec<usize>,
    len: usize,
}

impl LineIndex {
    pub fn new(source: &str) -> Self {
        let mut starts = vec![0];
        for (i, b) in source.bytes().enumerate() {
            if b == b'\n' {
                starts.push(i + 1);
            }
        }
        LineIndex { starts, len: source.len() }
    }

    /// 1-based line and 0-based byte column of an offset.
    pub fn position(&self, offset: usize) -> (u32, u32) {
        let offset = offset.min(self.len);
        let line = match self.starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        ((line + 1) as u32, (offset - self.starts[line]) as u32)
    }

    pub fn line_count(&self) -> u32 {
        self.starts.len() as u32
    }
}

pub(crate) struct Lowerer<'a> {
    source: &'a str,
    index: &'a LineIndex,
}

impl<'a> Lowerer<'a> {
    pub(crate) fn new(source: &'a str, index: &'a LineIndex) -> Self {
        Lowerer { source, index }
    }

    fn span(&self, range: TextRange) -> Span {
        let (sl, sc) = self.index.position(range.start().to_usize());
        let (el, ec) = self.index.position(range.end().to_usize());
        Span::new(sl, sc, el, ec)
    }

    fn source_text(&self, range: TextRange) -> String {
        self.source.get(range.start().to_usize()..range.end().to_usize()).unwrap_or_default().to_string()
    }

    fn block(&self, role: BlockRole, anchor: Span, children: Vec<SyntaxNode>) -> SyntaxNode {
        let at = Span::point(anchor.start_line, anchor.start_col);
        match children.iter().map(|c| c.span).reduce(|a, b| a.union(&b)) {
            Some(span) => SyntaxNode::new(NodeKind::Block(role), span, None, children),
            None => SyntaxNode::leaf(NodeKind::Block(role), at, None),
        }
    }

    pub(crate) fn module(&self, body: &[Stmt], line_count: u32, last_col: u32) -> SyntaxNode {
        let children = self.stmts(body);
        let span = Span::new(1, 0, line_count.max(1), last_col);
        SyntaxNode::new(NodeKind::Module, span, None, children)
    }

    fn stmts(&self, body: &[Stmt]) -> Vec<SyntaxNode> {
        body.iter().map(|s| self.stmt(s)).collect()
    }

    fn exprs(&self, exprs: &[Expr]) -> Vec<SyntaxNode> {
        exprs.iter().map(|e| self.expr(e)).collect()
    }

    fn opt_expr(&self, e: &Option<Box<Expr>>) -> Vec<SyntaxNode> {
        e.iter().map(|e| self.expr(e)).collect()
    }

    fn annotation(&self, e: &Expr) -> SyntaxNode {
        let span = self.span(e.range());
        SyntaxNode::new(NodeKind::Annotation, span, Some(self.source_text(e.range())), vec![self.expr(e)])
    }

    fn parameters(&self, args: &ast::Arguments, anchor: Span) -> SyntaxNode {
        let mut params = Vec::new();
        let with_default = args.posonlyargs.iter().chain(args.args.iter());
        for p in with_default {
            params.push(self.parameter(&p.def, p.default.as_deref()));
        }
        if let Some(v) = &args.vararg {
            params.push(self.parameter(v, None));
        }
        for p in &args.kwonlyargs {
            params.push(self.parameter(&p.def, p.default.as_deref()));
        }
        if let Some(k) = &args.kwarg {
            params.push(self.parameter(k, None));
        }
        self.block(BlockRole::Parameters, anchor, params)
    }

    fn parameter(&self, arg: &ast::Arg, default: Option<&Expr>) -> SyntaxNode {
        let span = self.span(arg.range);
        let ann: Vec<_> = arg.annotation.iter().map(|a| self.annotation(a)).collect();
        let def: Vec<_> = default.iter().map(|d| self.expr(d)).collect();
        let children = vec![self.block(BlockRole::Annotation, span, ann), self.block(BlockRole::Default, span, def)];
        SyntaxNode::new(NodeKind::Parameter, span, Some(arg.arg.to_string()), children)
    }

    fn function(
        &self,
        range: TextRange,
        name: &str,
        args: &ast::Arguments,
        body: &[Stmt],
        decorators: &[Expr],
        returns: &Option<Box<Expr>>,
    ) -> SyntaxNode {
        let span = self.span(range);
        let returns: Vec<_> = returns.iter().map(|r| self.annotation(r)).collect();
        let children = vec![
            self.block(BlockRole::Decorators, span, self.exprs(decorators)),
            self.parameters(args, span),
            self.block(BlockRole::Returns, span, returns),
            self.block(BlockRole::Body, span, self.stmts(body)),
        ];
        SyntaxNode::new(NodeKind::FunctionDef, span, Some(name.to_string()), children)
    }

    fn try_stmt(
        &self,
        range: TextRange,
        body: &[Stmt],
        handlers: &[ast::ExceptHandler],
        orelse: &[Stmt],
        finalbody: &[Stmt],
    ) -> SyntaxNode {
        let span = self.span(range);
        let handlers = handlers
            .iter()
            .map(|h| {
                let ast::ExceptHandler::ExceptHandler(h) = h;
                let hspan = self.span(h.range);
                let children = vec![
                    self.block(BlockRole::HandlerType, hspan, self.opt_expr(&h.type_)),
                    self.block(BlockRole::Body, hspan, self.stmts(&h.body)),
                ];
                SyntaxNode::new(NodeKind::ExceptHandler, hspan, h.name.as_ref().map(|n| n.to_string()), children)
            })
            .collect();
        let children = vec![
            self.block(BlockRole::Body, span, self.stmts(body)),
            self.block(BlockRole::Handlers, span, handlers),
            self.block(BlockRole::OrElse, span, self.stmts(orelse)),
            self.block(BlockRole::Finally, span, self.stmts(finalbody)),
        ];
        SyntaxNode::new(NodeKind::Try, span, None, children)
    }

    fn with_stmt(&self, range: TextRange, items: &[ast::WithItem], body: &[Stmt]) -> SyntaxNode {
        let span = self.span(range);
        let items = items
            .iter()
            .map(|item| {
                let mut children = vec![self.expr(&item.context_expr)];
                children.extend(self.opt_expr(&item.optional_vars));
                SyntaxNode::new(NodeKind::WithItem, self.span(item.range), None, children)
            })
            .collect();
        let children =
            vec![self.block(BlockRole::Items, span, items), self.block(BlockRole::Body, span, self.stmts(body))];
        SyntaxNode::new(NodeKind::With, span, None, children)
    }

    fn for_stmt(&self, range: TextRange, target: &Expr, iter: &Expr, body: &[Stmt], orelse: &[Stmt]) -> SyntaxNode {
        let span = self.span(range);
        let children = vec![
            self.expr(target),
            self.expr(iter),
            self.block(BlockRole::Body, span, self.stmts(body)),
            self.block(BlockRole::OrElse, span, self.stmts(orelse)),
        ];
        SyntaxNode::new(NodeKind::For, span, None, children)
    }

    fn stmt(&self, stmt: &Stmt) -> SyntaxNode {
        let span = self.span(stmt.range());
        let node = |kind, text: Option<String>, children| SyntaxNode::new(kind, span, text, children);
        match stmt {
            Stmt::FunctionDef(f) => self.function(f.range, &f.name, &f.args, &f.body, &f.decorator_list, &f.returns),
            Stmt::AsyncFunctionDef(f) => {
                self.function(f.range, &f.name, &f.args, &f.body, &f.decorator_list, &f.returns)
            }
            Stmt::ClassDef(c) => {
                let mut bases = self.exprs(&c.bases);
                bases.extend(c.keywords.iter().map(|k| self.keyword(k)));
                let children = vec![
                    self.block(BlockRole::Decorators, span, self.exprs(&c.decorator_list)),
                    self.block(BlockRole::Bases, span, bases),
                    self.block(BlockRole::Body, span, self.stmts(&c.body)),
                ];
                node(NodeKind::ClassDef, Some(c.name.to_string()), children)
            }
            Stmt::Return(r) => node(NodeKind::Return, None, self.opt_expr(&r.value)),
            Stmt::Delete(d) => node(NodeKind::Delete, None, self.exprs(&d.targets)),
            Stmt::Assign(a) => {
                let mut children = self.exprs(&a.targets);
                children.push(self.expr(&a.value));
                node(NodeKind::Assignment, None, children)
            }
            Stmt::TypeAlias(_) => SyntaxNode::leaf(NodeKind::Opaque, span, Some("type".into())),
            Stmt::AugAssign(a) => node(
                NodeKind::AugmentedAssignment,
                Some(operator_symbol(a.op).to_string()),
                vec![self.expr(&a.target), self.expr(&a.value)],
            ),
            Stmt::AnnAssign(a) => {
                let mut children = vec![self.expr(&a.target), self.annotation(&a.annotation)];
                match &a.value {
                    Some(v) => {
                        children.push(self.expr(v));
                        node(NodeKind::Assignment, None, children)
                    }
                    None => node(NodeKind::AnnotatedDeclaration, None, children),
                }
            }
            Stmt::For(f) => self.for_stmt(f.range, &f.target, &f.iter, &f.body, &f.orelse),
            Stmt::AsyncFor(f) => self.for_stmt(f.range, &f.target, &f.iter, &f.body, &f.orelse),
            Stmt::While(w) => node(
                NodeKind::While,
                None,
                vec![
                    self.expr(&w.test),
                    self.block(BlockRole::Body, span, self.stmts(&w.body)),
                    self.block(BlockRole::OrElse, span, self.stmts(&w.orelse)),
                ],
            ),
            Stmt::If(i) => node(
                NodeKind::If,
                None,
                vec![
                    self.expr(&i.test),
                    self.block(BlockRole::Body, span, self.stmts(&i.body)),
                    self.block(BlockRole::OrElse, span, self.stmts(&i.orelse)),
                ],
            ),
            Stmt::With(w) => self.with_stmt(w.range, &w.items, &w.body),
            Stmt::AsyncWith(w) => self.with_stmt(w.range, &w.items, &w.body),
            Stmt::Match(m) => {
                let mut children = vec![self.expr(&m.subject)];
                for case in &m.cases {
                    let cspan = self.span(case.range);
                    let pattern = SyntaxNode::leaf(NodeKind::Opaque, self.span(case.pattern.range()), None);
                    let case_children = vec![
                        self.block(BlockRole::Pattern, cspan, vec![pattern]),
                        self.block(BlockRole::Guard, cspan, self.opt_expr(&case.guard)),
                        self.block(BlockRole::Body, cspan, self.stmts(&case.body)),
                    ];
                    children.push(SyntaxNode::new(NodeKind::MatchCase, cspan, None, case_children));
                }
                node(NodeKind::Match, None, children)
            }
            Stmt::Raise(r) => {
                let mut children = self.opt_expr(&r.exc);
                children.extend(self.opt_expr(&r.cause));
                node(NodeKind::Raise, None, children)
            }
            Stmt::Try(t) => self.try_stmt(t.range, &t.body, &t.handlers, &t.orelse, &t.finalbody),
            Stmt::TryStar(t) => self.try_stmt(t.range, &t.body, &t.handlers, &t.orelse, &t.finalbody),
            Stmt::Assert(a) => {
                let mut children = vec![self.expr(&a.test)];
                children.extend(self.opt_expr(&a.msg));
                node(NodeKind::Assert, None, children)
            }
            Stmt::Import(i) => node(NodeKind::Import, None, self.aliases(&i.names)),
            Stmt::ImportFrom(i) => {
                let level = i.level.map(|l| l.to_u32()).unwrap_or(0) as usize;
                let module = format!("{}{}", ".".repeat(level), i.module.as_deref().unwrap_or(""));
                node(NodeKind::Import, Some(module), self.aliases(&i.names))
            }
            Stmt::Global(g) => node(NodeKind::Global, Some("global".into()), self.idents(&g.names, span)),
            Stmt::Nonlocal(g) => node(NodeKind::Global, Some("nonlocal".into()), self.idents(&g.names, span)),
            Stmt::Expr(e) => node(NodeKind::ExpressionStatement, None, vec![self.expr(&e.value)]),
            Stmt::Pass(_) => SyntaxNode::leaf(NodeKind::Pass, span, None),
            Stmt::Break(_) => SyntaxNode::leaf(NodeKind::Break, span, None),
            Stmt::Continue(_) => SyntaxNode::leaf(NodeKind::Continue, span, None),
        }
    }

    fn idents(&self, names: &[ast::Identifier], span: Span) -> Vec<SyntaxNode> {
        names.iter().map(|n| SyntaxNode::leaf(NodeKind::Name, span, Some(n.to_string()))).collect()
    }

    fn aliases(&self, names: &[ast::Alias]) -> Vec<SyntaxNode> {
        names
            .iter()
            .map(|a| {
                let span = self.span(a.range);
                let children =
                    a.asname.iter().map(|n| SyntaxNode::leaf(NodeKind::Name, span, Some(n.to_string()))).collect();
                SyntaxNode::new(NodeKind::Alias, span, Some(a.name.to_string()), children)
            })
            .collect()
    }

    fn keyword(&self, k: &ast::Keyword) -> SyntaxNode {
        SyntaxNode::new(
            NodeKind::Keyword,
            self.span(k.range),
            k.arg.as_ref().map(|a| a.to_string()),
            vec![self.expr(&k.value)],
        )
    }

    fn comprehension(
        &self,
        kind: ComprehensionKind,
        span: Span,
        mut elts: Vec<SyntaxNode>,
        gens: &[ast::Comprehension],
    ) -> SyntaxNode {
        for g in gens {
            let mut children = vec![self.expr(&g.target), self.expr(&g.iter)];
            children.extend(self.exprs(&g.ifs));
            elts.push(SyntaxNode::new(NodeKind::ComprehensionClause, self.span(g.range), None, children));
        }
        SyntaxNode::new(NodeKind::Comprehension(kind), span, None, elts)
    }

    fn expr(&self, expr: &Expr) -> SyntaxNode {
        let span = self.span(expr.range());
        let node = |kind, text: Option<String>, children| SyntaxNode::new(kind, span, text, children);
        match expr {
            Expr::BoolOp(b) => {
                let op = match b.op {
                    ast::BoolOp::And => "and",
                    ast::BoolOp::Or => "or",
                };
                node(NodeKind::BoolOp, Some(op.into()), self.exprs(&b.values))
            }
            Expr::NamedExpr(n) => node(NodeKind::NamedExpr, None, vec![self.expr(&n.target), self.expr(&n.value)]),
            Expr::BinOp(b) => node(
                NodeKind::BinaryOp,
                Some(operator_symbol(b.op).into()),
                vec![self.expr(&b.left), self.expr(&b.right)],
            ),
            Expr::UnaryOp(u) => {
                let op = match u.op {
                    ast::UnaryOp::Invert => "~",
                    ast::UnaryOp::Not => "not",
                    ast::UnaryOp::UAdd => "+",
                    ast::UnaryOp::USub => "-",
                };
                node(NodeKind::UnaryOp, Some(op.into()), vec![self.expr(&u.operand)])
            }
            Expr::Lambda(l) => node(NodeKind::Lambda, None, vec![self.parameters(&l.args, span), self.expr(&l.body)]),
            Expr::IfExp(i) => node(
                NodeKind::ConditionalExpr,
                None,
                vec![self.expr(&i.test), self.expr(&i.body), self.expr(&i.orelse)],
            ),
            Expr::Dict(d) => {
                let mut children = Vec::new();
                for (k, v) in d.keys.iter().zip(&d.values) {
                    match k {
                        Some(k) => {
                            children.push(self.expr(k));
                            children.push(self.expr(v));
                        }
                        None => {
                            let v = self.expr(v);
                            children.push(SyntaxNode::new(NodeKind::StarTarget, v.span, Some("**".into()), vec![v]));
                        }
                    }
                }
                node(NodeKind::DictExpr, None, children)
            }
            Expr::Set(s) => node(NodeKind::SetExpr, None, self.exprs(&s.elts)),
            Expr::ListComp(c) => {
                self.comprehension(ComprehensionKind::List, span, vec![self.expr(&c.elt)], &c.generators)
            }
            Expr::SetComp(c) => {
                self.comprehension(ComprehensionKind::Set, span, vec![self.expr(&c.elt)], &c.generators)
            }
            Expr::DictComp(c) => self.comprehension(
                ComprehensionKind::Dict,
                span,
                vec![self.expr(&c.key), self.expr(&c.value)],
                &c.generators,
            ),
            Expr::GeneratorExp(c) => {
                self.comprehension(ComprehensionKind::Generator, span, vec![self.expr(&c.elt)], &c.generators)
            }
            Expr::Await(a) => node(NodeKind::Opaque, Some("await".into()), vec![self.expr(&a.value)]),
            Expr::Yield(y) => node(NodeKind::Opaque, Some("yield".into()), self.opt_expr(&y.value)),
            Expr::YieldFrom(y) => node(NodeKind::Opaque, Some("yield from".into()), vec![self.expr(&y.value)]),
            Expr::Compare(c) => {
                let ops: Vec<&str> = c.ops.iter().map(|op| compare_symbol(*op)).collect();
                let mut children = vec![self.expr(&c.left)];
                children.extend(self.exprs(&c.comparators));
                node(NodeKind::Compare, Some(ops.join(",")), children)
            }
            Expr::Call(c) => {
                let mut children = vec![self.expr(&c.func)];
                children.extend(self.exprs(&c.args));
                children.extend(c.keywords.iter().map(|k| self.keyword(k)));
                node(NodeKind::Call, None, children)
            }
            Expr::FormattedValue(f) => {
                let mut children = vec![self.expr(&f.value)];
                children.extend(self.opt_expr(&f.format_spec));
                node(NodeKind::Opaque, Some("format".into()), children)
            }
            Expr::JoinedStr(j) => {
                let children = j
                    .values
                    .iter()
                    .map(|v| match v {
                        Expr::FormattedValue(f) => self.expr(&f.value),
                        other => self.expr(other),
                    })
                    .collect();
                node(NodeKind::FormattedString, None, children)
            }
            Expr::Constant(c) => {
                let (kind, text) = match &c.value {
                    Constant::None => (LiteralKind::None, "None".to_string()),
                    Constant::Bool(b) => (LiteralKind::Bool, if *b { "True" } else { "False" }.to_string()),
                    Constant::Str(s) => (LiteralKind::Str, s.clone()),
                    Constant::Bytes(b) => (LiteralKind::Bytes, String::from_utf8_lossy(b).into_owned()),
                    Constant::Int(_) => (LiteralKind::Int, self.source_text(c.range)),
                    Constant::Float(_) => (LiteralKind::Float, self.source_text(c.range)),
                    Constant::Complex { .. } => (LiteralKind::Complex, self.source_text(c.range)),
                    Constant::Tuple(_) => return SyntaxNode::leaf(NodeKind::TupleExpr, span, None),
                    Constant::Ellipsis => (LiteralKind::Ellipsis, "...".to_string()),
                };
                SyntaxNode::leaf(NodeKind::Literal(kind), span, Some(text))
            }
            Expr::Attribute(a) => node(NodeKind::AttributeAccess, Some(a.attr.to_string()), vec![self.expr(&a.value)]),
            Expr::Subscript(s) => node(NodeKind::Subscript, None, vec![self.expr(&s.value), self.expr(&s.slice)]),
            Expr::Starred(s) => node(NodeKind::StarTarget, Some("*".into()), vec![self.expr(&s.value)]),
            Expr::Name(n) => SyntaxNode::leaf(NodeKind::Name, span, Some(n.id.to_string())),
            Expr::List(l) => node(NodeKind::ListExpr, None, self.exprs(&l.elts)),
            Expr::Tuple(t) => node(NodeKind::TupleExpr, None, self.exprs(&t.elts)),
            Expr::Slice(s) => {
                let mut children = self.opt_expr(&s.lower);
                children.extend(self.opt_expr(&s.upper));
                children.extend(self.opt_expr(&s.step));
                node(NodeKind::SliceExpression, None, children)
            }
        }
    }
}

fn operator_symbol(op: ast::Operator) -> &'static str {
    use ast::Operator::*;
    match op {
        Add => "+",
        Sub => "-",
        Mult => "*",
        MatMult => "@",
        Div => "/",
        Mod => "%",
        Pow => "**",
        LShift => "<<",
        RShift => ">>",
        BitOr => "|",
        BitXor => "^",
        BitAnd => "&",
        FloorDiv => "//",
    }
}

fn compare_symbol(op: ast::CmpOp) -> &'static str {
    use ast::CmpOp::*;
    match op {
        Eq => "==",
        NotEq => "!=",
        Lt => "<",
        LtE => "<=",
        Gt => ">",
        GtE => ">=",
        Is => "is",
        IsNot => "is not",
        In => "in",
        NotIn => "not in",
    }
}
