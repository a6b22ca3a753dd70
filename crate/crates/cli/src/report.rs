//! Report types and deterministic rendering.

use std::fs;
use std::io::Write;
use std::path::Path;

use flatloop_core::homology::HomologyTable;
use flatloop_core::symplectic::{IndexResult, SymplecticPath};
use serde::Serialize;

use crate::CliError;

/// Rounds to 12 significant digits.
pub fn r12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Text rendering of [`r12`]: scientific notation for very small or large magnitudes.
pub fn show(x: f64) -> String {
    let y = r12(x);
    if y != 0.0 && y.is_finite() && (y.abs() < 1e-4 || y.abs() >= 1e12) {
        format!("{y:e}")
    } else {
        y.to_string()
    }
}

pub fn r12_all(xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|&x| r12(x)).collect()
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(p.display().to_string(), e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io("stdout".into(), e))
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GroupEntry {
    pub degree: i64,
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct TableReport {
    pub label: String,
    pub grading: &'static str,
    pub coefficients: &'static str,
    pub entries: Vec<GroupEntry>,
}

impl From<&HomologyTable> for TableReport {
    fn from(t: &HomologyTable) -> Self {
        Self {
            label: t.label.clone(),
            grading: t.grading.name(),
            coefficients: t.coefficients.symbol(),
            entries: t
                .entries
                .iter()
                .map(|(&degree, g)| GroupEntry {
                    degree,
                    free_rank: g.free_rank,
                    torsion: g.torsion.iter().map(|x| x.to_string()).collect(),
                })
                .collect(),
        }
    }
}

pub fn table_csv(t: &HomologyTable) -> String {
    let mut s = String::from("degree,free_rank,torsion\n");
    for (d, g) in &t.entries {
        let torsion: Vec<String> = g.torsion.iter().map(|x| x.to_string()).collect();
        s.push_str(&format!("{d},{},{}\n", g.free_rank, torsion.join(";")));
    }
    s
}

#[derive(Debug, Serialize)]
pub struct CrossingEntry {
    pub t: f64,
    pub kernel_dim: usize,
    pub signature: i64,
    pub boundary: bool,
}

#[derive(Debug, Serialize)]
pub struct IndexReport {
    pub path_kind: String,
    pub n: usize,
    pub method: &'static str,
    pub crossings: Vec<CrossingEntry>,
    pub value_num: i64,
    pub value_den: i64,
}

impl IndexReport {
    pub fn from_result(path_kind: &str, n: usize, r: &IndexResult) -> Self {
        Self {
            path_kind: path_kind.to_string(),
            n,
            method: r.method.name(),
            crossings: r
                .crossings
                .iter()
                .map(|c| CrossingEntry {
                    t: r12(c.t),
                    kernel_dim: c.kernel_dim(),
                    signature: c.form_signature,
                    boundary: c.boundary,
                })
                .collect(),
            value_num: r.value.twice(),
            value_den: 2,
        }
    }

    pub fn for_path<P: SymplecticPath + ?Sized>(path: &P, n: usize, r: &IndexResult) -> Self {
        Self::from_result(path.kind(), n, r)
    }

    pub fn text(&self) -> String {
        let value = flatloop_core::HalfInteger::from_twice(self.value_num);
        let mut s = format!("path: {} (n = {})\nmethod: {}\n", self.path_kind, self.n, self.method);
        for c in &self.crossings {
            s.push_str(&format!(
                "  crossing t = {}: kernel dim {}, signature {}{}\n",
                c.t,
                c.kernel_dim,
                c.signature,
                if c.boundary { " (endpoint, weight 1/2)" } else { "" }
            ));
        }
        s.push_str(&format!("index: {value}\n"));
        s
    }
}
