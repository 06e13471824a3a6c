//! Import aliases and call-target resolution.

use std::collections::BTreeMap;

use crate::syntax::{NodeKind, SyntaxNode};

/// Local name → fully qualified name, collected from a module's imports.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ImportMap {
    aliases: BTreeMap<String, String>,
}

impl ImportMap {
    pub fn from_module(root: &SyntaxNode) -> Self {
        let mut map = ImportMap::default();
        for node in root.walk().filter(|n| n.kind == NodeKind::Import) {
            map.add_import(node);
        }
        map
    }

    /// Adds the bindings of one `import` / `from ... import` statement.
    pub fn add_import(&mut self, node: &SyntaxNode) {
        let from = node.text().filter(|t| !t.is_empty());
        for alias in &node.children {
            let Some(name) = alias.text() else { continue };
            if name == "*" {
                continue;
            }
            let asname = alias.child(0).and_then(|c| c.text());
            match (from, asname) {
                (Some(module), Some(local)) => {
                    self.aliases.insert(local.to_string(), join(module, name));
                }
                (Some(module), None) => {
                    self.aliases.insert(name.to_string(), join(module, name));
                }
                (None, Some(local)) => {
                    self.aliases.insert(local.to_string(), name.to_string());
                }
                (None, None) => {
                    let root = name.split('.').next().unwrap_or(name);
                    self.aliases.entry(root.to_string()).or_insert_with(|| root.to_string());
                }
            }
        }
    }

    pub fn get(&self, local: &str) -> Option<&str> {
        self.aliases.get(local).map(String::as_str)
    }

    pub fn contains(&self, local: &str) -> bool {
        self.aliases.contains_key(local)
    }

    /// Qualified names bound by the imports.
    pub fn targets(&self) -> impl Iterator<Item = &str> {
        self.aliases.values().map(String::as_str)
    }

    /// Replaces an imported root of a dotted name by what it refers to.
    /// Returns `None` when the root is not imported.
    pub fn resolve(&self, dotted: &str) -> Option<String> {
        let (root, rest) = match dotted.split_once('.') {
            Some((r, rest)) => (r, Some(rest)),
            None => (dotted, None),
        };
        let target = self.aliases.get(root)?;
        Some(match rest {
            Some(rest) => format!("{target}.{rest}"),
            None => target.clone(),
        })
    }
}

fn join(module: &str, name: &str) -> String {
    if module.ends_with('.') {
        format!("{module}{name}")
    } else {
        format!("{module}.{name}")
    }
}
