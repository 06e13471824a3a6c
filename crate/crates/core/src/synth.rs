//! Seeded generators of synthetic Python sources.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WORDS: &[&str] =
    &["alpha", "beta", "host", "port", "key", "item", "name", "mode", "level", "path", "token", "size"];
const SEPARATORS: &[&str] = &[",", ":", "=", ";", "/", "|", "-"];

fn word(rng: &mut ChaCha8Rng) -> &'static str {
    WORDS.choose(rng).copied().unwrap_or("x")
}

fn sep(rng: &mut ChaCha8Rng) -> &'static str {
    SEPARATORS.choose(rng).copied().unwrap_or(",")
}

/// A step of a string pipeline that never rejects its input.
fn transformer(rng: &mut ChaCha8Rng, v: &str) -> String {
    match rng.gen_range(0..9) {
        0 => format!("{v} = {v} + '{}'", sep(rng)),
        1 => format!("{v} = '{}' + {v}", word(rng)),
        2 => format!("{v} = {v}.upper()"),
        3 => format!("{v} = {v}.lower()"),
        4 => format!("{v} = {v}.strip()"),
        5 => format!("{v} += '{}'", word(rng)),
        6 => format!("{v} = {v}.replace('{}', '{}')", sep(rng), sep(rng)),
        7 => format!("{v} = {v}.title()"),
        _ => format!("acc.append({v})"),
    }
}

/// Kinds of single constraint operations that can be injected.
pub const CONSTRAINT_KINDS: usize = 8;

/// One constraint operation reading `v`, as one or two indented lines.
pub fn constraint(kind: usize, v: &str) -> Vec<String> {
    match kind % CONSTRAINT_KINDS {
        0 => vec![format!("n = int({v})")],
        1 => vec![format!("c = {v}[0]")],
        2 => vec![format!("a, b = {v}.split(',')")],
        3 => vec![format!("m = re.match('[a-z]+', {v})")],
        4 => vec![format!("if {v}.startswith('#'):"), "    acc.append('')".to_string()],
        5 => vec![format!("if {v} == 'stop':"), "    acc.append('')".to_string()],
        6 => vec![format!("i = {v}.index(':')")],
        _ => vec![format!("x = float({v}.strip())")],
    }
}

/// A function that only appends, concatenates or changes case. With
/// `inject`, one constraint operation of that kind is placed at a random step.
pub fn transformer_pipeline(seed: u64, inject: Option<usize>) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps = rng.gen_range(2..8);
    let at = rng.gen_range(0..=steps);
    let mut body = vec!["t = s.strip()".to_string(), "acc = []".to_string()];
    for i in 0..=steps {
        if Some(i) == inject.map(|_| at) {
            body.extend(constraint(inject.unwrap_or(0), "t"));
        }
        if i < steps {
            body.push(transformer(&mut rng, "t"));
        }
    }
    body.push("acc.append(t)".to_string());
    body.push("return ''.join(acc)".to_string());
    let mut out = String::from("import re\n\n\ndef pipeline(s):\n");
    for line in body {
        let _ = writeln!(out, "    {line}");
    }
    out
}

fn parser_function(rng: &mut ChaCha8Rng, name: &str) -> String {
    let (w, s) = (word(rng), sep(rng));
    match rng.gen_range(0..8) {
        0 => format!("def {name}(line):\n    {w}, rest = line.split('{s}', 1)\n    return {w}.strip(), rest\n"),
        1 => format!("def {name}(text):\n    parts = text.split('{s}')\n    if len(parts) > 2:\n        return parts[2]\n    return parts[0]\n"),
        2 => format!("def {name}(spec):\n    return [int(p) for p in spec.split('{s}') if p]\n"),
        3 => format!(
            "def {name}(value):\n    m = re.match(r'([a-z]+){s}(\\d+)', value)\n    if m is None:\n        raise ValueError(value)\n    return m.group(1), int(m.group(2))\n"
        ),
        4 => format!(
            "def {name}(raw):\n    raw = raw.strip()\n    if raw.startswith('#'):\n        return None\n    try:\n        return float(raw)\n    except ValueError:\n        return None\n"
        ),
        5 => format!(
            "def {name}(blob):\n    out = {{}}\n    for entry in blob.splitlines():\n        if not entry:\n            continue\n        k, v = entry.split('{s}')\n        out[k] = v\n    return out\n"
        ),
        6 => format!("def {name}():\n    value = os.environ.get('{}', '')\n    return value.lower() in ('1', 'true')\n", w.to_uppercase()),
        _ => format!("def {name}(addr):\n    host, _, port = addr.rpartition(':')\n    return host, int(port or 0)\n"),
    }
}

fn plain_function(rng: &mut ChaCha8Rng, name: &str) -> String {
    match rng.gen_range(0..5) {
        0 => format!("def {name}(a, b):\n    total = a + b\n    if total > {}:\n        return total - 1\n    return total\n", rng.gen_range(1..100)),
        1 => format!("def {name}(xs):\n    best = None\n    for x in xs:\n        if best is None or x > best:\n            best = x\n    return best\n"),
        2 => format!("def {name}(n):\n    acc = 1\n    while n > 1:\n        acc *= n\n        n -= 1\n    return acc\n"),
        3 => format!("def {name}(items):\n    return sorted(items, key=len)[:{}]\n", rng.gen_range(1..9)),
        _ => format!("def {name}(msg):\n    text = '[{}] ' + msg\n    return text.upper()\n", word(rng)),
    }
}

/// A module of roughly `target_loc` non-blank lines mixing parsers and
/// plain code.
pub fn synthetic_module(seed: u64, target_loc: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::from("import os\nimport re\nimport sys\n\n\n");
    let mut i = 0;
    while out.lines().filter(|l| !l.trim().is_empty()).count() < target_loc {
        let name = format!("{}_{i}", word(&mut rng));
        let f = if rng.gen_bool(0.4) { parser_function(&mut rng, &name) } else { plain_function(&mut rng, &name) };
        out.push_str(&f);
        out.push_str("\n\n");
        i += 1;
    }
    out
}

/// Writes `files` synthetic modules of about `loc` lines under `root`,
/// spread over a few package directories.
pub fn write_corpus(root: &Path, files: usize, loc: usize, seed: u64) -> std::io::Result<()> {
    for i in 0..files {
        let dir = root.join(format!("pkg{}", i % 10));
        std::fs::create_dir_all(&dir)?;
        std::fs::write(dir.join(format!("mod{i:04}.py")), synthetic_module(seed.wrapping_add(i as u64), loc))?;
    }
    Ok(())
}
