use flatloop_core::geodesics::{geodesic_residual, perturbed_residual};
use flatloop_core::torus::{energy, perturbed_energy, winding_vector};
use flatloop_core::{FlatTorus, LatticeVector, LoopSample, PendulumPotentialSpec};
use serde::Serialize;

use super::render;
use crate::args::LoopCommand;
use crate::formats::LoopFile;
use crate::report::{emit, r12, show, to_json};
use crate::{parse_floats, parse_ints, usage, CliError};

#[derive(Serialize)]
struct EvalReport {
    dim: usize,
    samples: usize,
    winding: Vec<i64>,
    energy: f64,
    geodesic_residual: f64,
    perturbed_energy: Option<f64>,
    perturbed_residual: Option<f64>,
}

pub fn run(cmd: LoopCommand) -> Result<bool, CliError> {
    match cmd {
        LoopCommand::Geodesic { k, q, samples, output } => {
            let k = parse_ints(&k)?;
            let q = match q {
                Some(q) => parse_floats(&q)?,
                None => vec![0.0; k.len()],
            };
            if q.len() != k.len() {
                return Err(CliError::Usage(format!("--q has {} entries, --k has {}", q.len(), k.len())));
            }
            let torus = FlatTorus::new(k.len()).map_err(usage)?;
            let lp = LoopSample::geodesic(torus, &LatticeVector::new(k), &q, samples).map_err(usage)?;
            emit(&to_json(&LoopFile::from_loop(&lp))?, output.as_deref())?;
            Ok(true)
        }
        LoopCommand::Eval { input, potential, format } => {
            let lp = LoopFile::read(&input)?.to_loop()?;
            let winding = winding_vector(&lp).map_err(|e| CliError::Check(e.to_string()))?;
            let pot = match potential {
                None => None,
                Some(p) => match parse_floats(&p)?.as_slice() {
                    [k, q0] if k.fract() == 0.0 => Some(PendulumPotentialSpec::new(*k as i64, *q0)),
                    _ => return Err(CliError::Usage(format!("--potential expects `k,q0`, got {p:?}"))),
                },
            };
            let (pe, pr) = match &pot {
                None => (None, None),
                Some(pot) => (
                    Some(r12(perturbed_energy(&lp, pot).map_err(usage)?)),
                    Some(r12(perturbed_residual(&lp, pot).map_err(usage)?)),
                ),
            };
            let report = EvalReport {
                dim: lp.dim(),
                samples: lp.len(),
                winding: winding.entries().to_vec(),
                energy: r12(energy(&lp)),
                geodesic_residual: r12(geodesic_residual(&lp)),
                perturbed_energy: pe,
                perturbed_residual: pr,
            };
            render(
                format,
                || {
                    let mut s = format!(
                        "loop in T^{} with {} samples, winding {:?}\nenergy: {}\ngeodesic residual: {}\n",
                        report.dim, report.samples, report.winding, show(report.energy), show(report.geodesic_residual)
                    );
                    if let (Some(e), Some(r)) = (report.perturbed_energy, report.perturbed_residual) {
                        s.push_str(&format!("perturbed energy: {}\nperturbed residual: {}\n", show(e), show(r)));
                    }
                    s
                },
                &report,
                || {
                    format!(
                        "energy,geodesic_residual,perturbed_energy,perturbed_residual\n{},{},{},{}\n",
                        report.energy,
                        report.geodesic_residual,
                        report.perturbed_energy.map_or(String::new(), |x| x.to_string()),
                        report.perturbed_residual.map_or(String::new(), |x| x.to_string())
                    )
                },
                None,
            )?;
            Ok(true)
        }
    }
}
