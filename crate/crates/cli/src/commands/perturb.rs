use std::path::Path;

use flatloop_core::flows::count_connecting_orbits;
use flatloop_core::geodesics::{perturbed_critical_points, perturbed_jacobi_spectrum, perturbed_residual};
use flatloop_core::homology::{homology_of_complex, morse_witten_complex_perturbed};
use flatloop_core::symplectic::{
    cz_from_quadratic, linearized_flow, perturbed_quadratic, rs_index, LinearizedSpec, DEFAULT_GRID,
    DEFAULT_TOLERANCE,
};
use flatloop_core::torus::perturbed_energy;
use flatloop_core::{Branch, TWO_PI_SQ};
use serde::Serialize;

use super::{pass, render};
use crate::args::Format;
use crate::report::{r12, r12_all, show};
use crate::{usage, CliError};

const ACTION_TOLERANCE: f64 = 1e-9;
const RESIDUAL_TOLERANCE: f64 = 1e-8;
const SPECTRUM_MODES: usize = 3;

#[derive(Serialize)]
struct BranchReport {
    branch: &'static str,
    action_closed_form: f64,
    action_numeric: f64,
    morse_index: usize,
    spectrum: Vec<f64>,
    cz_crossing_sum: i64,
    cz_sz_formula: i64,
    residual: f64,
}

#[derive(Serialize)]
struct PerturbReport {
    k: i64,
    q0: f64,
    samples: usize,
    branches: Vec<BranchReport>,
    orbit_count: u64,
    orbit_parity: u64,
    morse_witten_z2: Vec<usize>,
    actions_ok: bool,
    residuals_ok: bool,
    cz_ok: bool,
    relation_ok: bool,
    pass: bool,
}

pub fn run(k: i64, q0: f64, samples: usize, format: Format, output: Option<&Path>) -> Result<bool, CliError> {
    if k == 0 {
        return Err(CliError::Usage(
            "--k must be nonzero: the pendulum perturbation is defined on the loop components Λ_k S¹ with k ≠ 0".into(),
        ));
    }
    let pair = perturbed_critical_points(k, q0, samples).map_err(usage)?;
    let kinetic = TWO_PI_SQ * (k * k) as f64;
    let closed = [kinetic + 1.0, kinetic - 1.0];
    let mut branches = Vec::new();
    for (i, branch) in [Branch::Minus, Branch::Plus].into_iter().enumerate() {
        let lp = pair.loop_for(branch);
        let numeric = perturbed_energy(lp, &pair.potential).map_err(usage)?;
        let spectrum = perturbed_jacobi_spectrum(branch, SPECTRUM_MODES);
        let flow = linearized_flow(LinearizedSpec::Perturbed(branch)).map_err(usage)?;
        let crossing = rs_index(flow.as_ref(), DEFAULT_GRID, DEFAULT_TOLERANCE)
            .map_err(|e| CliError::Check(e.to_string()))?
            .value
            .to_integer()
            .ok_or_else(|| CliError::Check("half-integer index on a nondegenerate orbit".into()))?;
        let sz = cz_from_quadratic(&perturbed_quadratic(branch).0).map_err(usage)?;
        branches.push(BranchReport {
            branch: branch.symbol(),
            action_closed_form: r12(closed[i]),
            action_numeric: r12(numeric),
            morse_index: spectrum.negative_count,
            spectrum: r12_all(&spectrum.eigenvalues.iter().map(|e| e.0).collect::<Vec<_>>()),
            cz_crossing_sum: crossing,
            cz_sz_formula: sz,
            residual: r12(perturbed_residual(lp, &pair.potential).map_err(usage)?),
        });
    }
    let orbits = count_connecting_orbits(k, q0).map_err(|e| CliError::Check(e.to_string()))?;
    let mw = homology_of_complex(&morse_witten_complex_perturbed(k, Some(orbits.count)).map_err(usage)?)
        .map_err(|e| CliError::Check(e.to_string()))?;

    let actions_ok = branches
        .iter()
        .all(|b| (b.action_numeric - b.action_closed_form).abs() <= ACTION_TOLERANCE * b.action_closed_form.abs().max(1.0));
    let residuals_ok = branches.iter().all(|b| b.residual < RESIDUAL_TOLERANCE);
    let cz_ok = branches.iter().all(|b| b.cz_crossing_sum == b.cz_sz_formula);
    let relation_ok = branches.iter().all(|b| b.cz_crossing_sum == -(b.morse_index as i64));
    let indices_ok = (branches[0].morse_index, branches[1].morse_index) == pair.indices;
    let report = PerturbReport {
        k,
        q0: r12(q0),
        samples,
        orbit_count: orbits.count,
        orbit_parity: orbits.parity,
        morse_witten_z2: vec![mw.free_rank(0), mw.free_rank(1)],
        actions_ok,
        residuals_ok,
        cz_ok,
        relation_ok,
        pass: actions_ok && residuals_ok && cz_ok && relation_ok && indices_ok,
        branches,
    };
    render(
        format,
        || {
            let b = &report.branches;
            let mut s = format!("pendulum perturbation on Λ_{k} S¹, q0 = {q0}\n");
            s.push_str(&format!(
                "actions (γ-, γ+): closed form ({}, {}), numeric ({}, {})  [{}]\n",
                b[0].action_closed_form,
                b[1].action_closed_form,
                b[0].action_numeric,
                b[1].action_numeric,
                pass(report.actions_ok)
            ));
            s.push_str(&format!("Morse indices (γ-, γ+): ({}, {})\n", b[0].morse_index, b[1].morse_index));
            for br in b {
                s.push_str(&format!("spectrum L_V^{}: {:?}\n", br.branch, br.spectrum));
            }
            s.push_str(&format!(
                "CZ (x-, x+): crossing sum ({}, {}), SZ formula ({}, {})  [{}]\n",
                b[0].cz_crossing_sum,
                b[1].cz_crossing_sum,
                b[0].cz_sz_formula,
                b[1].cz_sz_formula,
                pass(report.cz_ok)
            ));
            s.push_str(&format!("connecting orbits: {} (parity {})\n", report.orbit_count, report.orbit_parity));
            s.push_str(&format!(
                "Morse-Witten homology over Z2: degree 0 rank {}, degree 1 rank {}\n",
                report.morse_witten_z2[0], report.morse_witten_z2[1]
            ));
            s.push_str(&format!("relation μ_CZ = -Ind: {}\n", pass(report.relation_ok)));
            s.push_str(&format!(
                "critical point residuals: ({}, {})  [{}]\n",
                show(b[0].residual),
                show(b[1].residual),
                pass(report.residuals_ok)
            ));
            s
        },
        &report,
        || {
            let mut s = String::from("branch,action_closed_form,action_numeric,morse_index,cz_crossing_sum,cz_sz_formula,residual\n");
            for b in &report.branches {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    b.branch, b.action_closed_form, b.action_numeric, b.morse_index, b.cz_crossing_sum, b.cz_sz_formula, b.residual
                ));
            }
            s
        },
        output,
    )?;
    Ok(report.pass)
}
