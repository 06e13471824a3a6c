use std::path::{Path, PathBuf};

use walkdir::{DirEntry, WalkDir};

use super::{CorpusError, ProjectGranularity, ScanConfig};

/// A Python file belonging to a project.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceModule {
    /// Path relative to the project root, `/`-separated.
    pub relative_path: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectGroup {
    pub name: String,
    pub root: PathBuf,
    pub modules: Vec<SourceModule>,
}

const SKIPPED_DIRS: &[&str] =
    &["__pycache__", "venv", "env", "virtualenv", "site-packages", "node_modules", "build", "dist", "CVS", "_darcs"];

/// Hidden, virtual-environment, VCS and build directories.
pub fn is_skipped_dir(path: &Path) -> bool {
    let Some(name) = path.file_name().and_then(|n| n.to_str()) else { return false };
    name.starts_with('.')
        || SKIPPED_DIRS.contains(&name)
        || name.ends_with(".egg-info")
        || path.join("pyvenv.cfg").is_file()
}

fn is_hidden(entry: &DirEntry) -> bool {
    entry.depth() > 0 && entry.file_name().to_str().is_some_and(|n| n.starts_with('.'))
}

fn project_name(root: &Path) -> String {
    let named = |p: &Path| p.file_name().and_then(|n| n.to_str()).map(str::to_string);
    named(root)
        .or_else(|| root.canonicalize().ok().as_deref().and_then(named))
        .unwrap_or_else(|| root.display().to_string())
}

fn walk_modules(root: &Path, follow_symlinks: bool) -> Vec<SourceModule> {
    let walker = WalkDir::new(root)
        .follow_links(follow_symlinks)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| !(e.depth() > 0 && e.file_type().is_dir() && is_skipped_dir(e.path())) && !is_hidden(e));
    let mut out = Vec::new();
    for entry in walker {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => {
                log::warn!("skipped: {e}");
                continue;
            }
        };
        if !entry.file_type().is_file() || entry.path().extension().and_then(|x| x.to_str()) != Some("py") {
            continue;
        }
        let Ok(rel) = entry.path().strip_prefix(root) else { continue };
        let relative_path = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
        out.push(SourceModule { relative_path, path: entry.path().to_path_buf() });
    }
    out.sort_by(|a, b| a.relative_path.cmp(&b.relative_path));
    out
}

/// Python modules under the configured roots, grouped by project, in
/// lexicographic order.
pub fn discover(config: &ScanConfig) -> Result<Vec<ProjectGroup>, CorpusError> {
    let mut groups = Vec::new();
    for root in &config.roots {
        if !root.is_dir() {
            return Err(CorpusError::MissingRoot(root.clone()));
        }
        match config.project_granularity {
            ProjectGranularity::RootIsOneProject => groups.push(ProjectGroup {
                name: project_name(root),
                root: root.clone(),
                modules: walk_modules(root, config.follow_symlinks),
            }),
            ProjectGranularity::EachChildDirIsAProject => {
                let entries =
                    std::fs::read_dir(root).map_err(|source| CorpusError::Io { path: root.clone(), source })?;
                let mut children: Vec<PathBuf> = entries
                    .filter_map(Result::ok)
                    .map(|e| e.path())
                    .filter(|p| p.is_dir() && !is_skipped_dir(p))
                    .collect();
                children.sort();
                for child in children {
                    groups.push(ProjectGroup {
                        name: project_name(&child),
                        modules: walk_modules(&child, config.follow_symlinks),
                        root: child,
                    });
                }
            }
        }
    }
    Ok(groups)
}
