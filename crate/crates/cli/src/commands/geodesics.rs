use std::path::Path;

use flatloop_core::geodesics::enumerate_components;
use flatloop_core::FlatTorus;
use serde::Serialize;

use super::render;
use crate::args::Format;
use crate::formats::{components_csv, ComponentRow};
use crate::report::r12;
use crate::{usage, CliError};

#[derive(Serialize)]
struct GeodesicsReport {
    n: usize,
    a: f64,
    components: Vec<ComponentRow>,
}

pub fn run(n: usize, a: f64, format: Format, output: Option<&Path>) -> Result<bool, CliError> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(CliError::Usage(format!("action bound must be finite and non-negative, got {a}")));
    }
    let torus = FlatTorus::new(n).map_err(usage)?;
    let rows: Vec<ComponentRow> = enumerate_components(torus, a).iter().map(ComponentRow::from).collect();
    let report = GeodesicsReport { n, a: r12(a), components: rows };
    render(
        format,
        || {
            let mut s = format!("critical components with 2π²|k|² ≤ {a} on T^{n}: {}\n", report.components.len());
            s.push_str(&format!("  {:<16} {:>18} {:>6} {:>8}\n", "k", "energy", "index", "nullity"));
            for r in &report.components {
                s.push_str(&format!("  {:<16} {:>18} {:>6} {:>8}\n", format!("{:?}", r.k), r.energy, r.morse_index, r.nullity));
            }
            s
        },
        &report,
        || components_csv(n, &report.components),
        output,
    )?;
    Ok(true)
}
