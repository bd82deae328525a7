//! Run reports, input digests and aligned text tables.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(name: &str, bytes: &[u8]) -> Self {
        InputDigest {
            name: name.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// A failed property and the instance that witnesses it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub property: String,
    pub witness: String,
}

impl Violation {
    pub fn new(property: &str, witness: impl Into<String>) -> Self {
        Violation {
            property: property.to_string(),
            witness: witness.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub status: &'static str,
    pub violations: Vec<Violation>,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str, inputs: Vec<InputDigest>, results: Value, violations: Vec<Violation>) -> Self {
        RunReport {
            command: command.to_string(),
            inputs,
            status: if violations.is_empty() { "ok" } else { "property-failure" },
            violations,
            results,
            timing_ms: None,
        }
    }
}

/// Left-aligned columns separated by two spaces.
#[derive(Clone, Debug, Default)]
pub struct Table {
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            rows: vec![header.iter().map(|s| s.to_string()).collect()],
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let cols = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let width: Vec<usize> = (0..cols)
            .map(|j| {
                self.rows
                    .iter()
                    .filter_map(|r| r.get(j))
                    .map(|c| c.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for r in &self.rows {
            let line: Vec<String> = r
                .iter()
                .enumerate()
                .map(|(j, c)| format!("{c}{}", " ".repeat(width[j] - c.chars().count())))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_tracks_bytes() {
        let a = InputDigest::of("x", b"{}");
        assert_eq!(a.sha256, InputDigest::of("y", b"{}").sha256);
        assert_ne!(a.sha256, InputDigest::of("x", b"{ }").sha256);
        assert_eq!(a.sha256.len(), 64);
    }

    #[test]
    fn table_alignment() {
        let mut t = Table::new(&["n", "KD_n"]);
        t.row(vec!["-1".into(), "Z".into()]);
        t.row(vec!["0".into(), "Z^2 + Z/2".into()]);
        assert_eq!(t.render(), "n   KD_n\n-1  Z\n0   Z^2 + Z/2\n");
    }
}
