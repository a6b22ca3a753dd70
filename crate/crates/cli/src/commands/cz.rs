use std::path::Path;

use flatloop_core::linalg::Matrix;
use flatloop_core::symplectic::{
    cz_from_quadratic, generalized_cz_shear, linearized_flow, rs_index, ExponentialPath, IndexMethod, IndexResult,
    LinearizedSpec, OffCyclePath, RotationPath, SymplecticPath,
};
use flatloop_core::{Branch, HalfInteger};

use super::render;
use crate::args::{BranchArg, Format};
use crate::report::IndexReport;
use crate::{parse_floats, usage, CliError};

pub enum PathChoice {
    Shear,
    Quadratic(Vec<f64>),
    ExpPath(Vec<f64>),
    Rotation,
    OffCycle,
    Perturbed(Branch),
}

impl PathChoice {
    pub fn from_flags(
        shear: bool,
        quadratic: Option<String>,
        exp_path: Option<String>,
        rotation: bool,
        off_cycle: bool,
        perturbed: Option<BranchArg>,
    ) -> Result<Self, CliError> {
        if let Some(q) = quadratic {
            return Ok(PathChoice::Quadratic(parse_floats(&q)?));
        }
        if let Some(e) = exp_path {
            return Ok(PathChoice::ExpPath(parse_floats(&e)?));
        }
        if let Some(b) = perturbed {
            return Ok(PathChoice::Perturbed(match b {
                BranchArg::Minus => Branch::Minus,
                BranchArg::Plus => Branch::Plus,
            }));
        }
        match (shear, rotation, off_cycle) {
            (true, _, _) => Ok(PathChoice::Shear),
            (_, true, _) => Ok(PathChoice::Rotation),
            (_, _, true) => Ok(PathChoice::OffCycle),
            _ => Err(CliError::Usage("choose a path".into())),
        }
    }
}

fn diagonal(values: &[f64]) -> Result<Matrix, CliError> {
    if values.is_empty() || !values.len().is_multiple_of(2) {
        return Err(CliError::Usage(format!("need an even number of diagonal entries, got {}", values.len())));
    }
    let m = values.len();
    Ok(Matrix::from_fn(m, m, |i, j| if i == j { values[i] } else { 0.0 }))
}

fn crossing_sum<P: SymplecticPath + ?Sized>(path: &P, grid: usize, tol: f64) -> Result<IndexResult, CliError> {
    rs_index(path, grid, tol).map_err(|e| CliError::Check(format!("{}: {e}", path.kind())))
}

pub fn run(choice: PathChoice, n: usize, grid: usize, tol: f64, format: Format, output: Option<&Path>) -> Result<bool, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    if grid < 2 || !(tol > 0.0) {
        return Err(CliError::Usage("--grid must be at least 2 and --tol positive".into()));
    }
    let report = match choice {
        PathChoice::Shear => IndexReport::from_result("shear", n, &generalized_cz_shear(n).map_err(usage)?),
        PathChoice::Quadratic(values) => {
            let s = diagonal(&values)?;
            let cz = cz_from_quadratic(&s).map_err(usage)?;
            let r = IndexResult { value: HalfInteger::from_int(cz), method: IndexMethod::SzFormula, crossings: Vec::new() };
            IndexReport::from_result("quadratic", values.len() / 2, &r)
        }
        PathChoice::ExpPath(values) => {
            let path = ExponentialPath::standard(&diagonal(&values)?).map_err(usage)?;
            IndexReport::for_path(&path, values.len() / 2, &crossing_sum(&path, grid, tol)?)
        }
        PathChoice::Rotation => {
            let path = RotationPath { n };
            IndexReport::for_path(&path, n, &crossing_sum(&path, grid, tol)?)
        }
        PathChoice::OffCycle => {
            let path = OffCyclePath::new(n);
            IndexReport::for_path(&path, n, &crossing_sum(&path, grid, tol)?)
        }
        PathChoice::Perturbed(branch) => {
            let path = linearized_flow(LinearizedSpec::Perturbed(branch)).map_err(usage)?;
            let mut r = IndexReport::for_path(path.as_ref(), 1, &crossing_sum(path.as_ref(), grid, tol)?);
            r.path_kind = format!("perturbed{}", branch.symbol());
            r
        }
    };
    render(
        format,
        || report.text(),
        &report,
        || {
            let mut s = String::from("t,kernel_dim,signature,boundary\n");
            for c in &report.crossings {
                s.push_str(&format!("{},{},{},{}\n", c.t, c.kernel_dim, c.signature, c.boundary));
            }
            s
        },
        output,
    )?;
    Ok(true)
}
