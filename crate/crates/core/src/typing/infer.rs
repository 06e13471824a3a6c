//! Expression verdicts, per-variable and per-definition typing, and seeds.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::api::{ApiEntry, KnownApiTable};
use super::names::ImportMap;
use super::TypeVerdict;
use crate::graph::{build_cfg, BindingKind, Cfg, Def, DefSite, NodeId, ENTRY};
use crate::syntax::{FunctionUnit, LiteralKind, NodeKind, Span, SyntaxNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    StringMethodUse,
    TypeHint,
    KnownReturn,
    LiteralAssignment,
}

/// A string variable and the statement where it first shows up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StringSeed {
    pub variable_name: String,
    /// CFG node holding the first occurrence.
    pub node: NodeId,
    /// Span of the occurrence itself (the bound or read name).
    pub site: Span,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegexTag {
    /// Compiled pattern, with its literal text when static.
    Pattern(Option<String>),
    /// Match object.
    Match,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReceiverClass {
    Pattern,
    Match,
    Other,
}

/// What a call refers to.
#[derive(Debug, Clone, PartialEq)]
pub enum CallTarget<'a> {
    /// Builtin, module-level or local function, import aliases resolved.
    Function(String),
    Method {
        receiver: &'a SyntaxNode,
        name: String,
        class: ReceiverClass,
    },
    Dynamic,
}

/// Variable verdicts plus the naming context needed to judge expressions.
#[derive(Debug, Clone, Default)]
pub struct TypeEnv {
    pub vars: BTreeMap<String, TypeVerdict>,
    pub regex: BTreeMap<String, RegexTag>,
    pub imports: ImportMap,
}

impl TypeEnv {
    pub fn with_vars<I: IntoIterator<Item = (String, TypeVerdict)>>(vars: I) -> Self {
        TypeEnv { vars: vars.into_iter().collect(), ..TypeEnv::default() }
    }

    pub fn var(&self, name: &str) -> TypeVerdict {
        self.vars.get(name).copied().unwrap_or(TypeVerdict::Unknown)
    }

    /// Dotted name with import aliases resolved (unchanged when not imported).
    pub fn qualify(&self, dotted: &str) -> String {
        self.imports.resolve(dotted).unwrap_or_else(|| dotted.to_string())
    }

    pub fn resolve_call<'a>(&self, call: &'a SyntaxNode) -> CallTarget<'a> {
        let Some(callee) = call.callee() else { return CallTarget::Dynamic };
        match callee.kind {
            NodeKind::Name => CallTarget::Function(self.qualify(callee.text().unwrap_or_default())),
            NodeKind::AttributeAccess => {
                if let Some(q) = callee.dotted_name().and_then(|d| self.imports.resolve(&d)) {
                    return CallTarget::Function(q);
                }
                let receiver = &callee.children[0];
                CallTarget::Method {
                    receiver,
                    name: callee.text().unwrap_or_default().to_string(),
                    class: self.receiver_class(receiver),
                }
            }
            _ => CallTarget::Dynamic,
        }
    }

    /// Regex role of an expression used as a method receiver.
    pub fn receiver_class(&self, expr: &SyntaxNode) -> ReceiverClass {
        match expr.kind {
            NodeKind::Name => match self.regex.get(expr.text().unwrap_or_default()) {
                Some(RegexTag::Pattern(_)) => ReceiverClass::Pattern,
                Some(RegexTag::Match) => ReceiverClass::Match,
                None => ReceiverClass::Other,
            },
            NodeKind::Call => match self.regex_tag_of(expr) {
                Some(RegexTag::Pattern(_)) => ReceiverClass::Pattern,
                Some(RegexTag::Match) => ReceiverClass::Match,
                None => ReceiverClass::Other,
            },
            _ => ReceiverClass::Other,
        }
    }

    /// Regex tag of a value expression (`re.compile(...)`, `re.match(...)`, ...).
    pub fn regex_tag_of(&self, expr: &SyntaxNode) -> Option<RegexTag> {
        match expr.kind {
            NodeKind::Name => self.regex.get(expr.text()?).cloned(),
            NodeKind::Call => match self.resolve_call(expr) {
                CallTarget::Function(q) if q == "re.compile" => {
                    let pattern = expr.call_args().next().and_then(|a| a.string_value()).map(str::to_string);
                    Some(RegexTag::Pattern(pattern))
                }
                CallTarget::Function(q) if matches!(q.as_str(), "re.match" | "re.search" | "re.fullmatch") => {
                    Some(RegexTag::Match)
                }
                CallTarget::Method { class: ReceiverClass::Pattern, name, .. }
                    if matches!(name.as_str(), "match" | "search" | "fullmatch") =>
                {
                    Some(RegexTag::Match)
                }
                _ => None,
            },
            NodeKind::NamedExpr => self.regex_tag_of(expr.child(1)?),
            _ => None,
        }
    }

    /// Table key and entry for a call.
    pub fn call_entry<'t>(&self, target: &CallTarget<'_>, api: &'t KnownApiTable) -> Option<(String, &'t ApiEntry)> {
        let key = match target {
            CallTarget::Function(q) => q.clone(),
            CallTarget::Method { name, class: ReceiverClass::Pattern, .. } => format!("re.Pattern.{name}"),
            CallTarget::Method { name, class: ReceiverClass::Match, .. } => format!("re.Match.{name}"),
            CallTarget::Method { name, .. } => {
                let k = format!("str.{name}");
                if api.get(&k).is_some() {
                    k
                } else {
                    format!("*.{name}")
                }
            }
            CallTarget::Dynamic => return None,
        };
        api.get(&key).map(|e| (key, e))
    }
}

/// Verdict of an expression under an environment.
pub fn expr_verdict(expr: &SyntaxNode, env: &TypeEnv, api: &KnownApiTable) -> TypeVerdict {
    Judge { env, api, local: Vec::new() }.verdict(expr)
}

struct Judge<'a> {
    env: &'a TypeEnv,
    api: &'a KnownApiTable,
    /// Comprehension and lambda bindings shadowing the environment.
    local: Vec<(String, TypeVerdict)>,
}

fn element_of(v: TypeVerdict) -> TypeVerdict {
    match v {
        TypeVerdict::StringCollection | TypeVerdict::String => TypeVerdict::String,
        _ => TypeVerdict::Unknown,
    }
}

/// Join for alternatives (`a if c else b`, `a or b`); `None` literals are neutral.
fn join(items: &[(TypeVerdict, bool)]) -> TypeVerdict {
    let mut out: Option<TypeVerdict> = None;
    for &(v, is_none) in items {
        if is_none {
            continue;
        }
        match out {
            None => out = Some(v),
            Some(o) if o == v => {}
            Some(_) => return TypeVerdict::Unknown,
        }
    }
    out.unwrap_or(TypeVerdict::Unknown)
}

fn is_none_literal(e: &SyntaxNode) -> bool {
    e.kind == NodeKind::Literal(LiteralKind::None)
}

impl Judge<'_> {
    fn name(&self, name: &str) -> TypeVerdict {
        if let Some((_, v)) = self.local.iter().rev().find(|(n, _)| n == name) {
            return *v;
        }
        self.env.var(name)
    }

    fn verdict(&mut self, e: &SyntaxNode) -> TypeVerdict {
        use TypeVerdict::*;
        match e.kind {
            NodeKind::Literal(LiteralKind::Str) | NodeKind::FormattedString => String,
            NodeKind::Literal(LiteralKind::None | LiteralKind::Ellipsis) => Unknown,
            NodeKind::Literal(_) => NotString,
            NodeKind::Name => self.name(e.text().unwrap_or_default()),
            NodeKind::BinaryOp => {
                let (Some(l), Some(r)) = (e.child(0), e.child(1)) else { return Unknown };
                let (lv, rv) = (self.verdict(l), self.verdict(r));
                binary(e.text().unwrap_or_default(), lv, rv)
            }
            NodeKind::UnaryOp | NodeKind::Compare => NotString,
            NodeKind::BoolOp => {
                let items: Vec<(TypeVerdict, bool)> =
                    e.children.iter().map(|c| (self.verdict(c), is_none_literal(c))).collect();
                join(&items)
            }
            NodeKind::ConditionalExpr => {
                let items: Vec<(TypeVerdict, bool)> =
                    e.children.iter().skip(1).map(|c| (self.verdict(c), is_none_literal(c))).collect();
                join(&items)
            }
            NodeKind::NamedExpr => e.child(1).map(|v| self.verdict(v)).unwrap_or(Unknown),
            NodeKind::StarTarget => e.child(0).map(|v| self.verdict(v)).unwrap_or(Unknown),
            NodeKind::Call => self.call(e),
            NodeKind::Subscript => self.subscript(e),
            NodeKind::AttributeAccess => match e.dotted_name() {
                Some(d) => self.api.get(&self.env.qualify(&d)).map(|x| x.returns).unwrap_or(Unknown),
                None => Unknown,
            },
            NodeKind::ListExpr | NodeKind::TupleExpr | NodeKind::SetExpr => {
                if e.children.is_empty() {
                    return Unknown;
                }
                let all_strings = e.children.iter().all(|c| self.verdict(c) == String);
                if all_strings {
                    StringCollection
                } else {
                    Unknown
                }
            }
            NodeKind::Comprehension(kind) => {
                if kind == crate::syntax::ComprehensionKind::Dict {
                    return Unknown;
                }
                let mark = self.local.len();
                for clause in e.children.iter().filter(|c| c.kind == NodeKind::ComprehensionClause) {
                    let iter_v = clause.child(1).map(|i| self.verdict(i)).unwrap_or(Unknown);
                    if let Some(target) = clause.child(0) {
                        for n in target.walk().filter(|n| n.kind == NodeKind::Name) {
                            self.local.push((n.text().unwrap_or_default().to_string(), element_of(iter_v)));
                        }
                    }
                }
                let elt = e.children.first().map(|c| self.verdict(c)).unwrap_or(Unknown);
                self.local.truncate(mark);
                if elt.is_stringy() {
                    StringCollection
                } else {
                    Unknown
                }
            }
            _ => Unknown,
        }
    }

    fn subscript(&mut self, e: &SyntaxNode) -> TypeVerdict {
        use TypeVerdict::*;
        let (Some(recv), Some(index)) = (e.child(0), e.child(1)) else { return Unknown };
        if recv.dotted_name().is_some_and(|d| self.env.qualify(&d) == "os.environ") {
            return String;
        }
        match self.verdict(recv) {
            String => String,
            StringCollection if index.kind == NodeKind::SliceExpression => StringCollection,
            StringCollection => String,
            _ => Unknown,
        }
    }

    fn function_verdict(&mut self, f: &SyntaxNode) -> TypeVerdict {
        let key = match f.kind {
            NodeKind::Name | NodeKind::AttributeAccess => f.dotted_name().map(|d| self.env.qualify(&d)),
            _ => None,
        };
        key.and_then(|k| self.api.get(&k)).map(|e| e.returns).unwrap_or(TypeVerdict::Unknown)
    }

    fn call(&mut self, e: &SyntaxNode) -> TypeVerdict {
        use TypeVerdict::*;
        let target = self.env.resolve_call(e);
        let args: Vec<&SyntaxNode> = e.call_args().collect();
        if let CallTarget::Function(q) = &target {
            match q.as_str() {
                "map" => {
                    return match args.first().map(|f| self.function_verdict(f)) {
                        Some(String) => StringCollection,
                        Some(NotString) => NotString,
                        _ => Unknown,
                    }
                }
                "filter" => {
                    return match args.get(1).map(|a| self.verdict(a)) {
                        Some(StringCollection) => StringCollection,
                        _ => Unknown,
                    }
                }
                "list" | "tuple" | "sorted" | "set" | "reversed" => {
                    return match args.first().map(|a| self.verdict(a)) {
                        Some(String | StringCollection) => StringCollection,
                        _ => Unknown,
                    }
                }
                "next" => {
                    return match args.first().map(|a| self.verdict(a)) {
                        Some(StringCollection) => String,
                        _ => Unknown,
                    }
                }
                _ => {}
            }
        }
        match self.env.call_entry(&target, self.api) {
            Some((_, entry)) => entry.returns,
            None => Unknown,
        }
    }
}

fn binary(op: &str, l: TypeVerdict, r: TypeVerdict) -> TypeVerdict {
    use TypeVerdict::*;
    match op {
        "+" if l == String || r == String => String,
        "+" if l == StringCollection && r == StringCollection => StringCollection,
        "%" if l == String => String,
        "*" if (l == String && r == NotString) || (l == NotString && r == String) => String,
        _ if l == NotString && r == NotString => NotString,
        _ => Unknown,
    }
}

/// Verdict of a type hint, for the supported hint grammar.
pub fn hint_verdict(hint: &str) -> TypeVerdict {
    let h: std::string::String = hint.chars().filter(|c| !c.is_whitespace()).collect();
    let h = h.trim_matches(|c| c == '"' || c == '\'');
    let h = h.strip_prefix("typing.").unwrap_or(h);
    match h {
        "str" | "Optional[str]" | "str|None" | "None|str" | "Optional[typing.str]" => TypeVerdict::String,
        "List[str]"
        | "list[str]"
        | "Sequence[str]"
        | "Iterable[str]"
        | "Tuple[str,...]"
        | "tuple[str,...]"
        | "typing.List[str]"
        | "typing.Sequence[str]"
        | "typing.Iterable[str]" => TypeVerdict::StringCollection,
        _ => TypeVerdict::Unknown,
    }
}

/// Typing facts for one function.
#[derive(Debug, Clone)]
pub struct TypeInfo {
    pub env: TypeEnv,
    /// Verdict of each definition from its own right-hand side, indexed like
    /// `cfg.nodes[n].defs`.
    pub site_verdicts: Vec<Vec<TypeVerdict>>,
    pub seeds: Vec<StringSeed>,
    /// Variables with both string and non-string evidence.
    pub conflicts: Vec<String>,
}

impl TypeInfo {
    /// Verdict of a definition site; falls back to the variable's verdict
    /// when the right-hand side says nothing.
    pub fn def_verdict(&self, cfg: &Cfg, site: DefSite) -> TypeVerdict {
        let own = self.site_verdicts[site.node][site.index];
        if own.is_known() {
            own
        } else {
            self.env.var(&cfg.nodes[site.node].defs[site.index].name)
        }
    }
}

#[derive(Debug, Clone)]
struct Site {
    var: String,
    pos: (u32, u32),
    verdict: TypeVerdict,
    evidence: Evidence,
}

fn binding_verdict(d: &Def, j: &mut Judge<'_>, hints: &BTreeMap<String, TypeVerdict>) -> TypeVerdict {
    use TypeVerdict::*;
    let value = d.value.as_ref();
    match d.kind {
        BindingKind::Parameter => hints.get(&d.name).copied().unwrap_or(Unknown),
        BindingKind::Free | BindingKind::ContextManager | BindingKind::Partial => Unknown,
        BindingKind::Opaque => NotString,
        BindingKind::Direct => value.map(|v| j.verdict(v)).unwrap_or(Unknown),
        BindingKind::Element => {
            let Some(v) = value else { return Unknown };
            if matches!(v.kind, NodeKind::TupleExpr | NodeKind::ListExpr) {
                if let Some(item) = d.position.and_then(|p| v.child(p)) {
                    return j.verdict(item);
                }
            }
            element_of(j.verdict(v))
        }
        BindingKind::Starred => match value.map(|v| j.verdict(v)) {
            Some(String | StringCollection) => StringCollection,
            _ => Unknown,
        },
        BindingKind::Iteration => value.map(|v| element_of(j.verdict(v))).unwrap_or(Unknown),
        BindingKind::Augmented => {
            let Some(stmt) = value else { return Unknown };
            let (Some(t), Some(r)) = (stmt.child(0), stmt.child(1)) else { return Unknown };
            let (tv, rv) = (j.verdict(t), j.verdict(r));
            binary(stmt.text().unwrap_or_default(), tv, rv)
        }
    }
}

fn binding_evidence(d: &Def) -> Evidence {
    match (d.kind, d.value.as_ref()) {
        (BindingKind::Parameter, _) => Evidence::TypeHint,
        (BindingKind::Direct, Some(v)) if matches!(v.kind, NodeKind::Literal(_) | NodeKind::FormattedString) => {
            Evidence::LiteralAssignment
        }
        _ => Evidence::KnownReturn,
    }
}

/// Names a method call or regex call proves to be strings.
fn string_uses(node: &SyntaxNode, env: &TypeEnv, api: &KnownApiTable, out: &mut Vec<(std::string::String, Span)>) {
    for call in node.walk().filter(|n| n.kind == NodeKind::Call) {
        let target = env.resolve_call(call);
        match &target {
            CallTarget::Method { receiver, name, class: ReceiverClass::Other } => {
                if receiver.kind == NodeKind::Name && api.is_unambiguous_string_method(name) {
                    out.push((receiver.text().unwrap_or_default().to_string(), receiver.span));
                }
            }
            CallTarget::Function(q) if !q.starts_with("re.") => continue,
            CallTarget::Dynamic => continue,
            _ => {}
        }
        if let Some((key, entry)) = env.call_entry(&target, api) {
            if !key.starts_with("re.") {
                continue;
            }
            let args: Vec<&SyntaxNode> = call.call_args().collect();
            for &p in &entry.string_param_positions {
                if let Some(a) = args.get(p).filter(|a| a.kind == NodeKind::Name) {
                    out.push((a.text().unwrap_or_default().to_string(), a.span));
                }
            }
        }
    }
}

/// Types every variable and definition of a function and derives its seeds.
pub fn infer_types(unit: &FunctionUnit, cfg: &Cfg, imports: &ImportMap, api: &KnownApiTable) -> TypeInfo {
    let hints: BTreeMap<String, TypeVerdict> = unit
        .parameters
        .iter()
        .filter_map(|p| {
            let v = hint_verdict(p.hint.as_deref()?);
            v.is_known().then(|| (p.name.clone(), v))
        })
        .collect();
    let mut env = TypeEnv { vars: hints.clone(), regex: BTreeMap::new(), imports: imports.clone() };
    let mut site_verdicts: Vec<Vec<TypeVerdict>> =
        cfg.nodes.iter().map(|n| vec![TypeVerdict::Unknown; n.defs.len()]).collect();
    let mut sites: Vec<Site> = Vec::new();
    let mut conflicts = Vec::new();

    for _round in 0..16 {
        let mut regex = BTreeMap::new();
        for n in cfg.statements() {
            for d in &n.defs {
                let tag = match (d.kind, d.value.as_ref()) {
                    (BindingKind::Direct, Some(v)) => env.regex_tag_of(v),
                    (BindingKind::Iteration, Some(v)) => match env.resolve_call(v) {
                        CallTarget::Function(q) if q == "re.finditer" => Some(RegexTag::Match),
                        CallTarget::Method { class: ReceiverClass::Pattern, name, .. } if name == "finditer" => {
                            Some(RegexTag::Match)
                        }
                        _ => None,
                    },
                    _ => None,
                };
                if let Some(tag) = tag {
                    regex.entry(d.name.clone()).or_insert(tag);
                }
            }
        }
        env.regex = regex;

        sites.clear();
        let mut judge = Judge { env: &env, api, local: Vec::new() };
        for n in &cfg.nodes {
            for (i, d) in n.defs.iter().enumerate() {
                let v = binding_verdict(d, &mut judge, &hints);
                site_verdicts[n.id][i] = v;
                if v.is_known() {
                    sites.push(Site {
                        var: d.name.clone(),
                        pos: d.span.start(),
                        verdict: v,
                        evidence: binding_evidence(d),
                    });
                }
            }
        }
        let mut proven = Vec::new();
        for n in cfg.statements() {
            string_uses(&n.syntax, &env, api, &mut proven);
        }
        for (var, span) in proven {
            sites.push(Site {
                var,
                pos: span.start(),
                verdict: TypeVerdict::String,
                evidence: Evidence::StringMethodUse,
            });
        }
        sites.sort_by(|a, b| (a.pos, &a.var).cmp(&(b.pos, &b.var)));

        let mut vars: BTreeMap<String, TypeVerdict> = BTreeMap::new();
        conflicts.clear();
        for s in &sites {
            match vars.get(&s.var) {
                None => {
                    vars.insert(s.var.clone(), s.verdict);
                }
                Some(&first) => {
                    let clash = (first.is_stringy() && s.verdict == TypeVerdict::NotString)
                        || (first == TypeVerdict::NotString && s.verdict.is_stringy());
                    if clash && !conflicts.contains(&s.var) {
                        conflicts.push(s.var.clone());
                    }
                }
            }
        }
        if vars == env.vars {
            break;
        }
        env.vars = vars;
    }
    for c in &conflicts {
        log::debug!("{}: conflicting string evidence for `{c}`, keeping the earliest", unit.qualified_name);
    }

    let seeds = collect_seeds(unit, cfg, &env, &site_verdicts, &sites);
    TypeInfo { env, site_verdicts, seeds, conflicts }
}

fn collect_seeds(
    unit: &FunctionUnit,
    cfg: &Cfg,
    env: &TypeEnv,
    site_verdicts: &[Vec<TypeVerdict>],
    sites: &[Site],
) -> Vec<StringSeed> {
    let mut seeds = Vec::new();
    for (var, verdict) in &env.vars {
        if !verdict.is_stringy() {
            continue;
        }
        let evidence = sites
            .iter()
            .filter(|s| &s.var == var && s.verdict.is_stringy() && s.evidence != Evidence::LiteralAssignment)
            .min_by_key(|s| s.pos)
            .map(|s| s.evidence);
        let Some(evidence) = evidence else { continue };
        let bound_at_entry = cfg.nodes[ENTRY].defines(var);
        // reads of a statement happen before its bindings
        let mut candidates: Vec<(((u32, u32), u8, (u32, u32)), NodeId, Span)> = Vec::new();
        for n in cfg.statements() {
            let at = n.span.start();
            for (i, d) in n.defs.iter().enumerate() {
                let own = site_verdicts[n.id][i];
                let v = if own.is_known() { own } else { *verdict };
                if &d.name == var && v.is_stringy() {
                    candidates.push(((at, 1, d.span.start()), n.id, d.span));
                }
            }
            if bound_at_entry {
                for u in n.uses.iter().filter(|u| &u.name == var) {
                    candidates.push(((at, 0, u.span.start()), n.id, u.span));
                }
            }
        }
        if let Some((key, node, site)) = candidates.into_iter().min_by_key(|c| (c.0, c.1)) {
            seeds.push((key, StringSeed { variable_name: var.clone(), node, site, evidence }));
        } else {
            log::trace!("{}: `{var}` has no occurrence to seed from", unit.qualified_name);
        }
    }
    seeds.sort_by(|a, b| (a.0, &a.1.variable_name).cmp(&(b.0, &b.1.variable_name)));
    seeds.into_iter().map(|(_, s)| s).collect()
}

/// Seeds of a function, resolving imports from the function's own statements.
pub fn infer_string_vars(unit: &FunctionUnit, api: &KnownApiTable) -> Vec<StringSeed> {
    let mut imports = ImportMap::default();
    for stmt in &unit.body {
        for n in stmt.walk().filter(|n| n.kind == NodeKind::Import) {
            imports.add_import(n);
        }
    }
    let cfg = build_cfg(unit);
    infer_types(unit, &cfg, &imports, api).seeds
}
