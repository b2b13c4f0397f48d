#![allow(dead_code)]

pub mod gen;
pub mod oracle;

use std::path::{Path, PathBuf};

use iota_nd::calculus::Mode;
use iota_nd::parser::{parse_proof, ProofScript};

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_path(name: &str) -> PathBuf {
    corpus_dir().join(name)
}

pub fn load(name: &str) -> ProofScript {
    let text = std::fs::read_to_string(corpus_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    parse_proof(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Kernel-only corpus scripts (not the derived-rule inputs) with the mode
/// each declares.
pub fn corpus_scripts() -> Vec<(String, Mode, ProofScript)> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".ndp"))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|n| {
            let s = load(&n);
            let m = s.mode.unwrap_or_else(|| panic!("{n} declares no logic"));
            (n, m, s)
        })
        .collect()
}
