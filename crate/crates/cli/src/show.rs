use std::fmt::Write as _;
use std::path::Path;

use adhocscan_core::corpus::locate_slice;
use adhocscan_core::{KnownApiTable, MetricRecord};
use anyhow::{anyhow, Context, Result};

/// Module path of a record, taken from its slice id.
pub fn relative_path(record: &MetricRecord) -> String {
    let (path, ..) = record.sort_key();
    let prefix = format!("{}:", record.project_name);
    match path.strip_prefix(&prefix) {
        Some(rest) if !record.project_name.is_empty() => rest.to_string(),
        _ => path,
    }
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "-".to_string()
    } else {
        items.join(", ")
    }
}

fn header(r: &MetricRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", r.slice_id);
    let _ = writeln!(
        out,
        "# {}  ef_loc {}  position {} ({:.2})  shotgun {}",
        r.ef_name, r.ef_loc, r.position_cat, r.position_rel, r.shotgun
    );
    let _ = writeln!(
        out,
        "# loc {}  cyclo {}  input {}/{}  expressions {}  variables {}",
        r.loc, r.cyclo, r.input_source, r.input_origin, r.expression_count, r.variable_count
    );
    let calls: Vec<String> = r.calls.iter().map(|c| c.name.clone()).collect();
    let sugar: Vec<String> = r.sugar.iter().map(|s| s.to_string()).collect();
    let _ = writeln!(out, "# calls {}", list(&calls));
    let _ = writeln!(out, "# sugar {}", list(&sugar));
    if !r.regexes.is_empty() {
        let regexes: Vec<String> =
            r.regexes.iter().map(|x| format!("{} {:?} ({})", x.api_name, x.pattern, x.role)).collect();
        let _ = writeln!(out, "# regex {}", list(&regexes));
    }
    let _ = writeln!(out, "# uncaught {}  raised {}", list(&r.uncaught_exceptions), list(&r.raised_exceptions));
    out
}

/// The enclosing function with slice lines marked `>` and other lines `:`.
/// With `context`, only that many non-slice lines around each slice line
/// are kept and elided runs show as `...`.
pub fn render(record: &MetricRecord, root: &Path, context: Option<u32>) -> Result<String> {
    let rel = relative_path(record);
    let path = root.join(&rel);
    let source = std::fs::read_to_string(&path).with_context(|| format!("cannot read source {}", path.display()))?;
    let lines: Vec<&str> = source.lines().collect();
    let loc = locate_slice(source.clone(), &rel, record, &KnownApiTable::shipped())
        .ok_or_else(|| anyhow!("{} no longer contains slice {}", path.display(), record.slice_id))?;

    let mut out = header(record);
    let width = loc.function.last.to_string().len();
    let near = |l: u32| match context {
        None => true,
        Some(c) => loc.slice_lines.iter().any(|&s| s.abs_diff(l) <= c),
    };
    let mut elided = false;
    for l in loc.function.first..=loc.function.last {
        let text = lines.get(l as usize - 1).copied().unwrap_or("");
        if loc.slice_lines.contains(&l) {
            let _ = writeln!(out, "{l:>width$} > {text}");
            elided = false;
        } else if near(l) {
            let _ = writeln!(out, "{l:>width$} : {text}");
            elided = false;
        } else if !elided {
            let _ = writeln!(out, "{:>width$} ...", "");
            elided = true;
        }
    }
    Ok(out)
}
