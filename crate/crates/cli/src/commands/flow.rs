use std::path::Path;

use flatloop_core::flows::{ansatz_loop, integrate_chi, integrate_orbit, solve_cylinder, StationaryPoint};
use flatloop_core::{FlatTorus, FreeHamiltonian, FOUR_PI_SQ};
use serde::Serialize;

use super::{pass, render};
use crate::args::{Command, Format};
use crate::formats::{trajectory_csv, CylinderExport};
use crate::report::{emit, r12, r12_all, show, to_json};
use crate::{parse_floats, parse_ints, usage, CliError};

const CLOSED_FORM_TOLERANCE: f64 = 1e-8;
const CLOSURE_TOLERANCE: f64 = 1e-8;
const DRIFT_TOLERANCE: f64 = 1e-9;
const COHERENCE_TOLERANCE: f64 = 1e-6;
const ENERGY_TOLERANCE: f64 = 1e-8;
const CHI_STEP: f64 = 0.01;

fn limit_name(p: Option<StationaryPoint>) -> String {
    p.map_or_else(|| "unclassified".to_string(), |p| p.value().to_string())
}

#[derive(Serialize)]
struct ChiReport {
    chi0: f64,
    s_min: f64,
    s_max: f64,
    steps: usize,
    limits: [Option<f64>; 2],
    monotonicity: Option<i8>,
    closed_form_error: f64,
    pass: bool,
}

#[derive(Serialize)]
struct OrbitReport {
    n: usize,
    momentum: Vec<f64>,
    steps: usize,
    final_position: Vec<f64>,
    closure_defect: f64,
    energy_drift: f64,
    lattice: bool,
    pass: bool,
}

#[derive(Serialize)]
struct CylinderReport {
    k: i64,
    q0: f64,
    chi0: f64,
    bump: f64,
    s_max: f64,
    s_step: f64,
    t_points: usize,
    residual: f64,
    ansatz_coherence: Option<f64>,
    max_energy_increase: f64,
    pass: bool,
}

pub fn run(cmd: Command) -> Result<bool, CliError> {
    let Command::Flow { chi, range, orbit, cylinder, n, k, momentum, chi0, q0, s_max, t_points, s_step, bump, steps, format, output } =
        cmd
    else {
        unreachable!("dispatch only routes flow here");
    };
    let output = output.as_deref();
    if let Some(chi0) = chi {
        run_chi(chi0, &range, steps, format, output)
    } else if orbit {
        run_orbit(n, k.as_deref(), momentum.as_deref(), q0, steps, format, output)
    } else if cylinder {
        let k = match k.as_deref() {
            None => 1,
            Some(s) => match parse_ints(s)?.as_slice() {
                [k] => *k,
                _ => return Err(CliError::Usage("--cylinder takes a single winding --k".into())),
            },
        };
        run_cylinder(k, q0, chi0, bump, s_max, s_step, t_points, format, output)
    } else {
        Err(CliError::Usage("choose --chi, --orbit or --cylinder".into()))
    }
}

fn run_chi(chi0: f64, range: &str, steps: Option<usize>, format: Format, output: Option<&Path>) -> Result<bool, CliError> {
    let (s_min, s_max) = match parse_floats(range)?.as_slice() {
        [a, b] => (*a, *b),
        _ => return Err(CliError::Usage(format!("--range expects `min,max`, got {range:?}"))),
    };
    let steps = steps.unwrap_or_else(|| ((s_max - s_min) / CHI_STEP).ceil().max(1.0) as usize);
    let traj = integrate_chi(chi0, s_min, s_max, steps).map_err(usage)?;
    let error = traj.closed_form_error();
    let expected_direction = match (2.0 * std::f64::consts::PI * chi0).sin() {
        x if x.abs() < 1e-15 => 0,
        x if x > 0.0 => 1,
        _ => -1,
    };
    let report = ChiReport {
        chi0,
        s_min,
        s_max,
        steps,
        limits: [traj.limits.0.map(StationaryPoint::value), traj.limits.1.map(StationaryPoint::value)],
        monotonicity: traj.monotonicity(),
        closed_form_error: r12(error),
        pass: error < CLOSED_FORM_TOLERANCE && traj.monotonicity() == Some(expected_direction),
    };
    if let Some(path) = output {
        emit(&trajectory_csv(&traj), Some(path))?;
    }
    render(
        format,
        || {
            format!(
                "χ(0) = {chi0} on [{s_min}, {s_max}] with {steps} steps\nlimits (s → -∞, s → +∞): ({}, {})\nmonotonicity: {}\nclosed-form error: {}  [{}]\n",
                limit_name(traj.limits.0),
                limit_name(traj.limits.1),
                report.monotonicity.map_or("none".to_string(), |m| m.to_string()),
                show(error),
                pass(report.pass)
            )
        },
        &report,
        || trajectory_csv(&traj),
        None,
    )?;
    Ok(report.pass)
}

fn run_orbit(
    n: usize,
    k: Option<&str>,
    momentum: Option<&str>,
    q0: f64,
    steps: Option<usize>,
    format: Format,
    output: Option<&Path>,
) -> Result<bool, CliError> {
    let torus = FlatTorus::new(n).map_err(usage)?;
    let momentum: Vec<f64> = match (momentum, k) {
        (Some(m), _) => parse_floats(m)?,
        (None, Some(k)) => parse_ints(k)?.into_iter().map(|x| x as f64).collect(),
        (None, None) => return Err(CliError::Usage("--orbit needs --k or --momentum".into())),
    };
    if momentum.len() != n {
        return Err(CliError::Usage(format!("momentum has {} entries, expected n = {n}", momentum.len())));
    }
    let steps = steps.unwrap_or(1000);
    let u0 = vec![q0; n];
    let v0: Vec<f64> = momentum.iter().map(|m| FOUR_PI_SQ * m).collect();
    let orbit = integrate_orbit(&FreeHamiltonian::new(torus), &u0, &v0, steps).map_err(usage)?;
    let lattice = momentum.iter().all(|m| m.fract() == 0.0);
    let closure_ok = !lattice || orbit.closure_defect < CLOSURE_TOLERANCE;
    let drift_ok = orbit.energy_drift < DRIFT_TOLERANCE;
    let report = OrbitReport {
        n,
        momentum: r12_all(&momentum),
        steps,
        final_position: r12_all(orbit.final_position()),
        closure_defect: r12(orbit.closure_defect),
        energy_drift: r12(orbit.energy_drift),
        lattice,
        pass: closure_ok && drift_ok,
    };
    if let Some(path) = output {
        #[derive(Serialize)]
        struct OrbitExport {
            times: Vec<f64>,
            u: Vec<f64>,
            v: Vec<f64>,
        }
        let export = OrbitExport { times: r12_all(&orbit.times), u: r12_all(&orbit.u), v: r12_all(&orbit.v) };
        emit(&to_json(&export)?, Some(path))?;
    }
    render(
        format,
        || {
            let closure = if lattice { format!("  [{}]", pass(closure_ok)) } else { "  (non-lattice momentum)".to_string() };
            format!(
                "free orbit on T^{n}, v0/(2π)² = {:?}, {steps} RK4 steps\nfinal position: {:?}\nclosure defect: {}{closure}\nenergy drift: {}  [{}]\n",
                report.momentum,
                report.final_position,
                show(orbit.closure_defect),
                show(orbit.energy_drift),
                pass(drift_ok)
            )
        },
        &report,
        || {
            let mut s = String::from("t,u,v\n");
            for (i, t) in orbit.times.iter().enumerate() {
                let join = |xs: &[f64]| xs.iter().map(|x| r12(*x).to_string()).collect::<Vec<_>>().join(";");
                s.push_str(&format!("{},{},{}\n", r12(*t), join(orbit.position(i)), join(orbit.momentum(i))));
            }
            s
        },
        None,
    )?;
    Ok(report.pass)
}

#[allow(clippy::too_many_arguments)]
fn run_cylinder(
    k: i64,
    q0: f64,
    chi0: f64,
    bump: f64,
    s_max: f64,
    s_step: f64,
    t_points: usize,
    format: Format,
    output: Option<&Path>,
) -> Result<bool, CliError> {
    if !(0.0..1.0).contains(&chi0) {
        return Err(CliError::Usage(format!("--chi0 must lie in [0, 1), got {chi0}")));
    }
    let w0 = ansatz_loop(k, q0, chi0, bump, t_points).map_err(usage)?;
    let grid = solve_cylinder(k, q0, &w0, s_max, s_step).map_err(usage)?;
    let coherence = (bump == 0.0).then(|| grid.ansatz_coherence(chi0));
    let increase = grid.max_energy_increase().map_err(|e| CliError::Check(e.to_string()))?;
    let coherence_ok = coherence.map_or(true, |c| c < COHERENCE_TOLERANCE);
    let energy_ok = increase <= ENERGY_TOLERANCE;
    let report = CylinderReport {
        k,
        q0: r12(q0),
        chi0: r12(chi0),
        bump: r12(bump),
        s_max: r12(s_max),
        s_step: r12(s_step),
        t_points,
        residual: r12(grid.residual),
        ansatz_coherence: coherence.map(r12),
        max_energy_increase: r12(increase),
        pass: coherence_ok && energy_ok,
    };
    if let Some(path) = output {
        emit(&to_json(&CylinderExport::from(&grid))?, Some(path))?;
    }
    render(
        format,
        || {
            let mut s = format!(
                "parabolic flow on Λ_{k} S¹ from kt + q0 + {chi0} + {bump}·sin 2πt, s ∈ [0, {s_max}], Δs = {s_step}, {t_points} points\n"
            );
            match report.ansatz_coherence {
                Some(c) => s.push_str(&format!("ansatz coherence: {}  [{}]\n", show(c), pass(coherence_ok))),
                None => s.push_str("ansatz coherence: not applicable (bump ≠ 0)\n"),
            }
            s.push_str(&format!("distance to γ+ at s_max: {}\n", show(grid.residual)));
            s.push_str(&format!("max energy increase per step: {}  [{}]\n", show(increase), pass(energy_ok)));
            s
        },
        &report,
        || {
            let mut s = String::from("s,distance_to_plus\n");
            for (i, sv) in grid.s_grid.iter().enumerate() {
                s.push_str(&format!("{},{}\n", r12(*sv), r12(grid.distance_to_plus(i))));
            }
            s
        },
        None,
    )?;
    Ok(report.pass)
}
