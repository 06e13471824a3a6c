//! Known-API table: facts about library operations relevant to string typing,
//! parser filtering, loop classification and input-origin tracing.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TypeVerdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopSemantics {
    None,
    FunctionalLinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputOrigin {
    CommandLine,
    EnvironmentVariable,
    File,
    Stdin,
    Network,
    ProcessOutput,
    CallerProvided,
    Unknown,
}

impl InputOrigin {
    pub fn as_str(self) -> &'static str {
        match self {
            InputOrigin::CommandLine => "command-line",
            InputOrigin::EnvironmentVariable => "environment-variable",
            InputOrigin::File => "file",
            InputOrigin::Stdin => "stdin",
            InputOrigin::Network => "network",
            InputOrigin::ProcessOutput => "process-output",
            InputOrigin::CallerProvided => "caller-provided",
            InputOrigin::Unknown => "unknown",
        }
    }
}

impl fmt::Display for InputOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Facts about one operation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiEntry {
    pub returns: TypeVerdict,
    /// The receiver must be a string, so a call marks its receiver as one.
    pub receiver_is_string: bool,
    pub string_param_positions: Vec<usize>,
    pub constraint_imposing: bool,
    /// The constraint shows up through a branch on the result (`startswith`,
    /// `re.match`) rather than through a failure.
    pub branching: bool,
    pub loop_semantics: LoopSemantics,
    pub may_raise: Vec<String>,
    pub origin_tag: Option<InputOrigin>,
}

impl ApiEntry {
    fn returning(returns: TypeVerdict) -> Self {
        ApiEntry {
            returns,
            receiver_is_string: false,
            string_param_positions: Vec::new(),
            constraint_imposing: false,
            branching: false,
            loop_semantics: LoopSemantics::None,
            may_raise: Vec::new(),
            origin_tag: None,
        }
    }

    fn on_string(mut self) -> Self {
        self.receiver_is_string = true;
        self
    }

    fn params(mut self, positions: &[usize]) -> Self {
        self.string_param_positions = positions.to_vec();
        self
    }

    fn raising(mut self, names: &[&str]) -> Self {
        self.constraint_imposing = true;
        self.may_raise = names.iter().map(|s| s.to_string()).collect();
        self
    }

    fn branch(mut self) -> Self {
        self.constraint_imposing = true;
        self.branching = true;
        self
    }

    fn linear(mut self) -> Self {
        self.loop_semantics = LoopSemantics::FunctionalLinear;
        self
    }

    fn origin(mut self, origin: InputOrigin) -> Self {
        self.origin_tag = Some(origin);
        self
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("{path}:{line}: {message}")]
    Syntax { path: String, line: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Operation facts keyed by qualified name.
///
/// Key forms: `str.split` (string methods), `re.search` (module functions),
/// `re.Pattern.search` / `re.Match.group` (regex object methods), `*.read`
/// (methods on any receiver) and bare builtin names such as `int`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownApiTable {
    entries: BTreeMap<String, ApiEntry>,
}

const STRING_PREDICATES: &[&str] = &[
    "isdigit",
    "isdecimal",
    "isnumeric",
    "isalpha",
    "isalnum",
    "isspace",
    "isupper",
    "islower",
    "isidentifier",
    "isascii",
    "istitle",
];

impl KnownApiTable {
    pub fn empty() -> Self {
        KnownApiTable { entries: BTreeMap::new() }
    }

    /// The built-in table.
    pub fn shipped() -> Self {
        use TypeVerdict::*;
        let mut t = KnownApiTable::empty();
        let mut put = |k: &str, e: ApiEntry| {
            t.entries.insert(k.to_string(), e);
        };

        for m in ["split", "rsplit", "splitlines"] {
            put(&format!("str.{m}"), ApiEntry::returning(StringCollection).on_string().linear());
        }
        for m in ["partition", "rpartition"] {
            put(&format!("str.{m}"), ApiEntry::returning(StringCollection).on_string().params(&[0]));
        }
        for m in [
            "strip",
            "lstrip",
            "rstrip",
            "upper",
            "lower",
            "casefold",
            "capitalize",
            "title",
            "swapcase",
            "replace",
            "format",
            "zfill",
            "center",
            "ljust",
            "rjust",
            "expandtabs",
            "removeprefix",
            "removesuffix",
        ] {
            put(&format!("str.{m}"), ApiEntry::returning(String).on_string());
        }
        put("str.join", ApiEntry::returning(String).on_string().linear());
        for m in ["startswith", "endswith"] {
            put(&format!("str.{m}"), ApiEntry::returning(NotString).on_string().params(&[0]).branch());
        }
        for m in STRING_PREDICATES {
            put(&format!("str.{m}"), ApiEntry::returning(NotString).on_string().branch());
        }
        for m in ["find", "rfind"] {
            put(&format!("str.{m}"), ApiEntry::returning(NotString).on_string().params(&[0]));
        }
        // lists have these too, so they do not prove the receiver is a string
        for m in ["index", "rindex"] {
            put(&format!("str.{m}"), ApiEntry::returning(NotString).params(&[0]).raising(&["ValueError"]));
        }
        put("str.encode", ApiEntry::returning(NotString).on_string());
        put("str.decode", ApiEntry::returning(String));

        put("str", ApiEntry::returning(String));
        put("repr", ApiEntry::returning(String));
        put("chr", ApiEntry::returning(String));
        put("int", ApiEntry::returning(NotString).params(&[0]).raising(&["ValueError"]));
        put("float", ApiEntry::returning(NotString).params(&[0]).raising(&["ValueError"]));
        for f in ["len", "ord", "bool", "hash", "id", "abs", "round"] {
            put(f, ApiEntry::returning(NotString));
        }
        put("map", ApiEntry::returning(Unknown).linear());
        put("filter", ApiEntry::returning(Unknown).linear());
        put("input", ApiEntry::returning(String).origin(InputOrigin::Stdin));
        put("raw_input", ApiEntry::returning(String).origin(InputOrigin::Stdin));
        put("open", ApiEntry::returning(Unknown).origin(InputOrigin::File));

        put("os.getenv", ApiEntry::returning(String).origin(InputOrigin::EnvironmentVariable));
        put("os.environ.get", ApiEntry::returning(String).origin(InputOrigin::EnvironmentVariable));
        put("os.environ", ApiEntry::returning(Unknown).origin(InputOrigin::EnvironmentVariable));
        put("sys.argv", ApiEntry::returning(StringCollection).origin(InputOrigin::CommandLine));
        put("sys.stdin", ApiEntry::returning(Unknown).origin(InputOrigin::Stdin));
        put("sys.stdin.read", ApiEntry::returning(String).origin(InputOrigin::Stdin));
        put("sys.stdin.readline", ApiEntry::returning(String).origin(InputOrigin::Stdin));
        put("sys.stdin.readlines", ApiEntry::returning(StringCollection).origin(InputOrigin::Stdin));

        put("*.read", ApiEntry::returning(String).origin(InputOrigin::File));
        put("*.readline", ApiEntry::returning(String).origin(InputOrigin::File));
        put("*.readlines", ApiEntry::returning(StringCollection).origin(InputOrigin::File));
        put("*.read_text", ApiEntry::returning(String).origin(InputOrigin::File));
        put("*.recv", ApiEntry::returning(Unknown).origin(InputOrigin::Network));

        for f in ["check_output", "run", "Popen", "communicate"] {
            put(&format!("subprocess.{f}"), ApiEntry::returning(Unknown).origin(InputOrigin::ProcessOutput));
        }
        put("subprocess.getoutput", ApiEntry::returning(String).origin(InputOrigin::ProcessOutput));
        put("os.popen", ApiEntry::returning(Unknown).origin(InputOrigin::ProcessOutput));
        put("urllib.request.urlopen", ApiEntry::returning(Unknown).origin(InputOrigin::Network));
        for f in ["get", "post", "request"] {
            put(&format!("requests.{f}"), ApiEntry::returning(Unknown).origin(InputOrigin::Network));
        }
        put("socket.socket", ApiEntry::returning(Unknown).origin(InputOrigin::Network));

        // regex namespace; match objects propagate as string collections
        for f in ["match", "search", "fullmatch"] {
            put(&format!("re.{f}"), ApiEntry::returning(StringCollection).params(&[0, 1]).branch());
            put(&format!("re.Pattern.{f}"), ApiEntry::returning(StringCollection).params(&[0]).branch());
        }
        for f in ["findall", "finditer", "split"] {
            put(&format!("re.{f}"), ApiEntry::returning(StringCollection).params(&[0, 1]).branch().linear());
            put(&format!("re.Pattern.{f}"), ApiEntry::returning(StringCollection).params(&[0]).branch().linear());
        }
        for f in ["sub", "subn"] {
            let returns = if f == "sub" { String } else { Unknown };
            put(&format!("re.{f}"), ApiEntry::returning(returns).params(&[0, 1, 2]).branch());
            put(&format!("re.Pattern.{f}"), ApiEntry::returning(returns).params(&[0, 1]).branch());
        }
        put("re.compile", ApiEntry::returning(NotString).params(&[0]).branch());
        put("re.escape", ApiEntry::returning(String).params(&[0]));
        put("re.Match.group", ApiEntry::returning(String));
        put("re.Match.groups", ApiEntry::returning(StringCollection));
        put("re.Match.groupdict", ApiEntry::returning(Unknown));
        for f in ["start", "end", "span"] {
            put(&format!("re.Match.{f}"), ApiEntry::returning(NotString));
        }
        t
    }

    pub fn get(&self, key: &str) -> Option<&ApiEntry> {
        self.entries.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ApiEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, key: impl Into<String>, entry: ApiEntry) {
        self.entries.insert(key.into(), entry);
    }

    /// String method entry (`str.<name>`).
    pub fn string_method(&self, name: &str) -> Option<&ApiEntry> {
        self.entries.get(&format!("str.{name}"))
    }

    /// A method whose use proves its receiver is a string.
    pub fn is_unambiguous_string_method(&self, name: &str) -> bool {
        self.string_method(name).is_some_and(|e| e.receiver_is_string)
    }

    /// Entry for a method on an arbitrary receiver (`*.<name>`).
    pub fn any_receiver_method(&self, name: &str) -> Option<&ApiEntry> {
        self.entries.get(&format!("*.{name}"))
    }

    /// Parses extension lines and merges them into the table.
    ///
    /// Format, one entry per line: `qualified_name,returns,constraint,may_raise...`
    /// where `returns` is one of `string`, `string-collection`, `not-string`,
    /// `unknown` and `constraint` is `true` or `false`. Blank lines and lines
    /// starting with `#` are ignored. Keys starting with `str.` describe string
    /// methods; a constraint without exception names is a branching one.
    pub fn extend_from_str(&mut self, text: &str, origin: &str) -> Result<usize, TableError> {
        let mut added = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| TableError::Syntax { path: origin.to_string(), line: i + 1, message };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() < 3 {
                return Err(err(format!("expected at least 3 fields, found {}", fields.len())));
            }
            let name = fields[0];
            if name.is_empty() {
                return Err(err("empty qualified name".into()));
            }
            let returns = TypeVerdict::from_str(fields[1]).map_err(err)?;
            let constraint = match fields[2].to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => true,
                "false" | "no" | "0" => false,
                other => return Err(err(format!("constraint must be true or false, found `{other}`"))),
            };
            let may_raise: Vec<String> = fields[3..].iter().filter(|s| !s.is_empty()).map(|s| s.to_string()).collect();
            let mut entry = ApiEntry::returning(returns);
            entry.receiver_is_string = name.starts_with("str.");
            if constraint {
                entry.constraint_imposing = true;
                entry.branching = may_raise.is_empty();
            }
            entry.may_raise = may_raise;
            self.entries.insert(name.to_string(), entry);
            added += 1;
        }
        Ok(added)
    }

    pub fn extend_from_file(&mut self, path: &Path) -> Result<usize, TableError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| TableError::Io { path: path.display().to_string(), source })?;
        self.extend_from_str(&text, &path.display().to_string())
    }
}

impl Default for KnownApiTable {
    fn default() -> Self {
        KnownApiTable::shipped()
    }
}
