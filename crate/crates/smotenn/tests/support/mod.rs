#![allow(dead_code)]

#[path = "../../../core/tests/support/gen.rs"]
pub mod gen;
#[path = "../../../core/tests/support/oracle.rs"]
pub mod oracle;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use smotenn_core::{Dataset, Label};

/// KEEL text for `d` with real attributes `x0..` and classes
/// `positive` (minority) / `negative`.
pub fn keel_text(d: &Dataset) -> String {
    let mut s = format!("@relation {}\n", d.name());
    for j in 0..d.n_features() {
        let col = (0..d.len()).map(|r| d.features(r)[j]);
        let (lo, hi) = col.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        writeln!(s, "@attribute x{j} real [{lo}, {hi}]").unwrap();
    }
    s.push_str("@attribute Class {positive, negative}\n");
    let inputs: Vec<String> = (0..d.n_features()).map(|j| format!("x{j}")).collect();
    writeln!(s, "@inputs {}\n@outputs Class\n@data", inputs.join(", ")).unwrap();
    for r in 0..d.len() {
        let x: Vec<String> = d.features(r).iter().map(f64::to_string).collect();
        let class = if d.label(r) == Label::Minority { "positive" } else { "negative" };
        writeln!(s, "{}, {class}", x.join(", ")).unwrap();
    }
    s
}

pub fn write_keel(dir: &Path, name: &str, d: &Dataset) -> PathBuf {
    let path = dir.join(format!("{name}.dat"));
    std::fs::write(&path, keel_text(d)).unwrap();
    path
}

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/appendix")
}
