use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::Span;
use crate::typing::InputOrigin;

macro_rules! labels {
    ($ty:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        impl $ty {
            pub const ALL: &'static [$ty] = &[$($ty::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($ty::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PositionCat {
    Beginning,
    Middle,
    End,
}
labels!(PositionCat { Beginning => "beginning", Middle => "middle", End => "end" });

impl PositionCat {
    pub fn of(position_rel: f64) -> Self {
        if position_rel <= 0.25 {
            PositionCat::Beginning
        } else if position_rel >= 0.75 {
            PositionCat::End
        } else {
            PositionCat::Middle
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputSource {
    EfArgument,
    GlobalVariable,
    InstanceAttribute,
    FunctionCall,
    Literal,
    EnvironmentSubscript,
    Unknown,
}
labels!(InputSource {
    EfArgument => "ef-argument",
    GlobalVariable => "global-variable",
    InstanceAttribute => "instance-attribute",
    FunctionCall => "function-call",
    Literal => "literal",
    EnvironmentSubscript => "environment-subscript",
    Unknown => "unknown",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CallOrigin {
    BuiltinOrStdlib,
    ThirdParty,
    UserDefined,
    Unknown,
}
labels!(CallOrigin {
    BuiltinOrStdlib => "builtin-or-stdlib",
    ThirdParty => "third-party",
    UserDefined => "user-defined",
    Unknown => "unknown",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArgKind {
    StringLiteral,
    NumberLiteral,
    Variable,
    Call,
    Other,
}
labels!(ArgKind {
    StringLiteral => "string-literal",
    NumberLiteral => "number-literal",
    Variable => "variable",
    Call => "call",
    Other => "other",
});

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallArg {
    pub kind: ArgKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub literal_text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallProfile {
    pub name: String,
    pub origin: CallOrigin,
    pub ordinal: u32,
    pub rel_line: u32,
    pub args: Vec<CallArg>,
    /// The result ends up destructured by a tuple assignment in the slice.
    #[serde(default)]
    pub unpacked: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sugar {
    Subscript,
    SliceNotation,
    TupleAssignment,
    StarUnpack,
    ListComprehension,
    GeneratorExpr,
    DictOrSetComprehension,
    FString,
    ConditionalExpr,
    ChainedComparison,
    MethodChaining,
}
labels!(Sugar {
    Subscript => "subscript",
    SliceNotation => "slice-notation",
    TupleAssignment => "tuple-assignment",
    StarUnpack => "star-unpack",
    ListComprehension => "list-comprehension",
    GeneratorExpr => "generator-expr",
    DictOrSetComprehension => "dict-or-set-comprehension",
    FString => "f-string",
    ConditionalExpr => "conditional-expr",
    ChainedComparison => "chained-comparison",
    MethodChaining => "method-chaining",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegexRole {
    FirstPass,
    Terminal,
    Interleaved,
    Only,
}
labels!(RegexRole { FirstPass => "first-pass", Terminal => "terminal", Interleaved => "interleaved", Only => "only" });

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegexUse {
    pub api_name: String,
    pub pattern: String,
    pub ordinal: u32,
    pub role: RegexRole,
}

pub const DYNAMIC_PATTERN: &str = "<dynamic>";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopKind {
    For,
    While,
    Functional,
    Recursive,
}
labels!(LoopKind { For => "for", While => "while", Functional => "functional", Recursive => "recursive" });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopBound {
    Constant,
    LinearOnInput,
    Complex,
    Unbounded,
}
labels!(LoopBound {
    Constant => "constant",
    LinearOnInput => "linear-on-input",
    Complex => "complex",
    Unbounded => "unbounded",
});

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopProfile {
    pub kind: LoopKind,
    pub bound: LoopBound,
    pub site: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExceptionScope {
    Slice,
    EnclosingFunction,
}
labels!(ExceptionScope { Slice => "slice", EnclosingFunction => "enclosing-function" });

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaughtException {
    pub name: String,
    pub scope: ExceptionScope,
}

/// Metric profile of one parser slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub slice_id: String,
    pub project_name: String,
    pub project_loc: u32,
    pub module_name: String,
    pub ef_name: String,
    pub ef_loc: u32,
    pub position_rel: f64,
    pub position_cat: PositionCat,
    pub shotgun: bool,
    pub loc: u32,
    pub cyclo: u32,
    pub input_source: InputSource,
    pub input_origin: InputOrigin,
    pub expression_count: u32,
    pub variable_count: u32,
    pub function_count: u32,
    pub calls: Vec<CallProfile>,
    pub sugar: BTreeSet<Sugar>,
    pub regexes: Vec<RegexUse>,
    pub loops: Vec<LoopProfile>,
    pub loop_nesting_depth: u32,
    pub caught_exceptions: Vec<CaughtException>,
    pub uncaught_exceptions: Vec<String>,
    pub raised_exceptions: Vec<String>,
    pub regular_candidate: bool,
}

impl MetricRecord {
    /// Path and seed position, the global record order.
    pub fn sort_key(&self) -> (String, u32, u32, String) {
        let mut parts = self.slice_id.rsplitn(4, ':');
        let name = parts.next().unwrap_or_default().to_string();
        let col = parts.next().and_then(|c| c.parse().ok()).unwrap_or(0);
        let line = parts.next().and_then(|c| c.parse().ok()).unwrap_or(0);
        let path = parts.next().unwrap_or_default().to_string();
        (path, line, col, name)
    }

    pub fn call_names(&self) -> impl Iterator<Item = &str> {
        self.calls.iter().map(|c| c.name.as_str())
    }
}
