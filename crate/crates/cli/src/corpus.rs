//! The shipped group corpus and corpus directory handling.

use std::path::{Path, PathBuf};

use extlift_core::catalog::parse_group_expr;
use extlift_core::json::{parse_group, GroupJson};
use extlift_core::{FiniteGroup, Result};

/// `(file stem, catalog expression)` for every shipped corpus entry.
pub const SHIPPED: &[(&str, &str)] = &[
    ("c02", "cyclic(2)"),
    ("c03", "cyclic(3)"),
    ("c04", "cyclic(4)"),
    ("c06", "cyclic(6)"),
    ("c08", "cyclic(8)"),
    ("c09", "cyclic(9)"),
    ("c12", "cyclic(12)"),
    ("c2xc2", "cyclic(2)^2"),
    ("c2xc2xc2", "cyclic(2)^3"),
    ("c2xc4", "cyclic(2)*cyclic(4)"),
    ("c3xc3", "cyclic(3)^2"),
    ("d06", "dihedral(6)"),
    ("d08", "dihedral(8)"),
    ("d10", "dihedral(10)"),
    ("d12", "dihedral(12)"),
    ("d16", "dihedral(16)"),
    ("q08", "generalized_quaternion(8)"),
    ("q16", "generalized_quaternion(16)"),
    ("dic12", "semidirect_product(3,4,2)"),
    ("f21", "semidirect_product(7,3,2)"),
    ("a4", "alternating(4)"),
    ("s4", "symmetric(4)"),
    ("c3xs3", "cyclic(3)*symmetric(3)"),
    ("c2xd8", "cyclic(2)*dihedral(8)"),
    ("heis3", "heisenberg(3)"),
    ("es32plus", "extraspecial_plus(2)"),
    ("es32minus", "extraspecial_minus(2)"),
];

pub fn shipped_group(expr: &str) -> Result<FiniteGroup> {
    parse_group_expr(expr)
}

/// The JSON text of a shipped entry, as written into the corpus directory.
pub fn shipped_json(expr: &str) -> Result<String> {
    let g = shipped_group(expr)?;
    let mut s = serde_json::to_string(&GroupJson::from_group(&g)).expect("group JSON serializes");
    s.push('\n');
    Ok(s)
}

/// Writes every shipped entry into `dir`.
pub fn write_shipped(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for (stem, expr) in SHIPPED {
        let path = dir.join(format!("{stem}.json"));
        let text = shipped_json(expr).map_err(std::io::Error::other)?;
        std::fs::write(&path, text)?;
        out.push(path);
    }
    Ok(out)
}

/// `*.json` files of a directory, sorted by file name.
pub fn corpus_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

pub fn load_corpus_file(path: &Path) -> std::result::Result<FiniteGroup, String> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let text = std::fs::read_to_string(path).map_err(|e| format!("{name}: {e}"))?;
    parse_group(&text).map_err(|e| format!("{name}: {e}"))
}
