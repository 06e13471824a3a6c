//! Builtin and standard-library name lists, and the per-project definition index.

use std::collections::BTreeSet;
use std::sync::OnceLock;

fn words(text: &'static str) -> BTreeSet<&'static str> {
    text.lines().filter(|l| !l.trim_start().starts_with('#')).flat_map(str::split_whitespace).collect()
}

pub fn builtin_names() -> &'static BTreeSet<&'static str> {
    static CELL: OnceLock<BTreeSet<&'static str>> = OnceLock::new();
    CELL.get_or_init(|| words(include_str!("../../data/builtins.txt")))
}

pub fn stdlib_modules() -> &'static BTreeSet<&'static str> {
    static CELL: OnceLock<BTreeSet<&'static str>> = OnceLock::new();
    CELL.get_or_init(|| words(include_str!("../../data/stdlib.txt")))
}

pub fn is_builtin(name: &str) -> bool {
    builtin_names().contains(name)
}

/// Whether a qualified name lives in the standard library (`os.path.join`).
pub fn is_stdlib(qualified: &str) -> bool {
    let root = qualified.split('.').next().unwrap_or(qualified);
    stdlib_modules().contains(root)
}

/// Functions and modules defined in a project.
#[derive(Debug, Clone, Default)]
pub struct ProjectIndex {
    functions: BTreeSet<String>,
    modules: BTreeSet<String>,
}

impl ProjectIndex {
    pub fn add_module(&mut self, dotted: &str) {
        let mut prefix = String::new();
        for part in dotted.split('.') {
            if !prefix.is_empty() {
                prefix.push('.');
            }
            prefix.push_str(part);
            self.modules.insert(prefix.clone());
        }
    }

    /// Registers a function by bare name and by qualified name.
    pub fn add_function(&mut self, name: &str, qualified: &str) {
        self.functions.insert(name.to_string());
        self.functions.insert(qualified.to_string());
    }

    pub fn defines_function(&self, name: &str) -> bool {
        self.functions.contains(name)
    }

    /// Whether a qualified name points into a project module, relative
    /// imports included.
    pub fn owns(&self, qualified: &str) -> bool {
        if qualified.starts_with('.') {
            return true;
        }
        let mut end = qualified.len();
        loop {
            if self.modules.contains(&qualified[..end]) {
                return true;
            }
            match qualified[..end].rfind('.') {
                Some(i) => end = i,
                None => return false,
            }
        }
    }
}
