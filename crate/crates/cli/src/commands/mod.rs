//! One module per subcommand. Each returns `Ok(false)` when a reported
//! check fails.

mod cz;
mod flow;
mod geodesics;
mod homology;
mod loops;
mod perturb;
mod report;

use std::path::Path;

use serde::Serialize;

use crate::args::{Command, Format};
use crate::report::{emit, to_json};
use crate::CliError;

pub fn dispatch(cmd: Command) -> Result<bool, CliError> {
    match cmd {
        Command::Geodesics { n, a, format, output } => geodesics::run(n, a, format, output.as_deref()),
        Command::Homology { n, k, side, check_all, format, output } => {
            homology::run(n, &k, side, check_all, format, output.as_deref())
        }
        Command::Cz { shear, quadratic, exp_path, rotation, off_cycle, perturbed, n, grid, tol, format, output } => {
            let kind = cz::PathChoice::from_flags(shear, quadratic, exp_path, rotation, off_cycle, perturbed)?;
            cz::run(kind, n, grid, tol, format, output.as_deref())
        }
        Command::Perturb { k, q0, samples, format, output } => perturb::run(k, q0, samples, format, output.as_deref()),
        Command::Flow { .. } => flow::run(cmd),
        Command::Paper { json, only } => crate::anchors::run(json.as_deref(), only.as_deref()),
        Command::Report { input, format } => report::run(&input, format),
        Command::Loop(sub) => loops::run(sub),
    }
}

/// Writes `text` for [`Format::Text`], the JSON value or the CSV otherwise.
fn render<T: Serialize>(
    format: Format,
    text: impl FnOnce() -> String,
    value: &T,
    csv: impl FnOnce() -> String,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let body = match format {
        Format::Text => text(),
        Format::Json => to_json(value)?,
        Format::Csv => csv(),
    };
    emit(&body, output)
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
