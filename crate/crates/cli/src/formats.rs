//! File formats: loop JSON, component tables, trajectory CSV and cylinder JSON.

use std::path::Path;

use flatloop_core::flows::{CylinderGrid, FlowTrajectory};
use flatloop_core::geodesics::GeodesicComponent;
use flatloop_core::{FlatTorus, LatticeVector, LoopSample};
use serde::{Deserialize, Serialize};

use crate::report::{r12, r12_all};
use crate::{usage, CliError};

/// `{dim, N, winding, samples}`, one row of `dim` lifted coordinates per time `i/N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopFile {
    pub dim: usize,
    #[serde(rename = "N")]
    pub count: usize,
    pub winding: Vec<i64>,
    pub samples: Vec<Vec<f64>>,
}

impl LoopFile {
    pub fn from_loop(lp: &LoopSample) -> Self {
        Self {
            dim: lp.dim(),
            count: lp.len(),
            winding: lp.winding().entries().to_vec(),
            samples: (0..lp.len()).map(|i| r12_all(lp.point(i))).collect(),
        }
    }

    pub fn to_loop(&self) -> Result<LoopSample, CliError> {
        if self.samples.len() != self.count || self.samples.iter().any(|r| r.len() != self.dim) {
            return Err(CliError::Usage(format!("loop file: expected {} rows of {} values", self.count, self.dim)));
        }
        let torus = FlatTorus::new(self.dim).map_err(usage)?;
        let flat = self.samples.concat();
        LoopSample::new(torus, flat, LatticeVector::new(self.winding.clone())).map_err(usage)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Serialize)]
pub struct ComponentRow {
    pub k: Vec<i64>,
    pub energy: f64,
    pub morse_index: usize,
    pub nullity: usize,
}

impl From<&GeodesicComponent> for ComponentRow {
    fn from(c: &GeodesicComponent) -> Self {
        Self { k: c.k.entries().to_vec(), energy: r12(c.energy_value), morse_index: c.morse_index, nullity: c.nullity }
    }
}

pub fn components_csv(n: usize, rows: &[ComponentRow]) -> String {
    let mut s: String = (1..=n).map(|j| format!("k{j},")).collect();
    s.push_str("energy,morse_index,nullity\n");
    for r in rows {
        for k in &r.k {
            s.push_str(&format!("{k},"));
        }
        s.push_str(&format!("{},{},{}\n", r.energy, r.morse_index, r.nullity));
    }
    s
}

pub fn trajectory_csv(t: &FlowTrajectory) -> String {
    let mut s = String::from("s,chi\n");
    for (a, b) in t.s_grid.iter().zip(&t.chi) {
        s.push_str(&format!("{},{}\n", r12(*a), r12(*b)));
    }
    s
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CylinderExport {
    pub s_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub w: Vec<Vec<f64>>,
}

impl From<&CylinderGrid> for CylinderExport {
    fn from(g: &CylinderGrid) -> Self {
        Self { s_grid: r12_all(&g.s_grid), t_grid: r12_all(&g.t_grid), w: g.w.iter().map(|r| r12_all(r)).collect() }
    }
}
