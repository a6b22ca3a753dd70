use std::path::Path;

use flatloop_core::flows::LIMIT_TOLERANCE;
use serde::Serialize;

use super::render;
use crate::args::Format;
use crate::formats::CylinderExport;
use crate::report::{r12, show};
use crate::CliError;

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Summary {
    Trajectory {
        points: usize,
        s_range: [f64; 2],
        chi_range: [f64; 2],
        end_values: [f64; 2],
        limits: [Option<f64>; 2],
        monotone: bool,
    },
    Cylinder {
        slices: usize,
        t_points: usize,
        s_range: [f64; 2],
        /// `max_t |w(s_max) - w(s_prev)| / Δs` on the last step.
        final_rate: f64,
    },
}

fn classify(chi: f64) -> Option<f64> {
    [0.0, 0.5, 1.0].into_iter().find(|p| (chi - p).abs() < LIMIT_TOLERANCE)
}

fn parse_trajectory(text: &str, path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let bad = |line: usize| CliError::Usage(format!("{}: malformed `s,chi` row at line {line}", path.display()));
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "s,chi" => {}
        _ => return Err(bad(1)),
    }
    let rows = lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let (a, b) = l.split_once(',').ok_or_else(|| bad(i + 1))?;
            Ok((a.trim().parse().map_err(|_| bad(i + 1))?, b.trim().parse().map_err(|_| bad(i + 1))?))
        })
        .collect::<Result<Vec<(f64, f64)>, CliError>>()?;
    if rows.len() < 2 {
        return Err(CliError::Usage(format!("{}: need at least two rows", path.display())));
    }
    Ok(rows)
}

fn summarize(text: &str, path: &Path) -> Result<Summary, CliError> {
    if text.trim_start().starts_with('{') {
        let g: CylinderExport =
            serde_json::from_str(text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        if g.w.len() < 2 || g.s_grid.len() != g.w.len() || g.w.iter().any(|r| r.len() != g.t_grid.len()) {
            return Err(CliError::Usage(format!("{}: inconsistent grid shape", path.display())));
        }
        let m = g.w.len();
        let ds = g.s_grid[m - 1] - g.s_grid[m - 2];
        let rate = g.w[m - 1].iter().zip(&g.w[m - 2]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / ds;
        return Ok(Summary::Cylinder {
            slices: m,
            t_points: g.t_grid.len(),
            s_range: [g.s_grid[0], g.s_grid[m - 1]],
            final_rate: r12(rate),
        });
    }
    let rows = parse_trajectory(text, path)?;
    let chi: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let (lo, hi) = chi.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &c| (l.min(c), h.max(c)));
    let increasing = chi.windows(2).all(|w| w[1] >= w[0]);
    let decreasing = chi.windows(2).all(|w| w[1] <= w[0]);
    let (first, last) = (chi[0], chi[chi.len() - 1]);
    Ok(Summary::Trajectory {
        points: rows.len(),
        s_range: [rows[0].0, rows[rows.len() - 1].0],
        chi_range: [lo, hi],
        end_values: [first, last],
        limits: [classify(first), classify(last)],
        monotone: increasing || decreasing,
    })
}

pub fn run(input: &Path, format: Format) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(input).map_err(|e| CliError::Io(input.display().to_string(), e))?;
    let summary = summarize(&text, input)?;
    let text_view = || match &summary {
        Summary::Trajectory { points, s_range, chi_range, end_values, limits, monotone } => format!(
            "trajectory: {points} points, s ∈ [{}, {}]\nχ range: [{}, {}]\nend values: ({}, {})\nlimits: ({}, {})\nmonotone: {monotone}\n",
            s_range[0],
            s_range[1],
            show(chi_range[0]),
            show(chi_range[1]),
            show(end_values[0]),
            show(end_values[1]),
            limits[0].map_or("unclassified".into(), |v| v.to_string()),
            limits[1].map_or("unclassified".into(), |v| v.to_string()),
        ),
        Summary::Cylinder { slices, t_points, s_range, final_rate } => format!(
            "cylinder: {slices} slices x {t_points} points, s ∈ [{}, {}]\nfinal rate max|∂_s w|: {}\n",
            s_range[0],
            s_range[1],
            show(*final_rate)
        ),
    };
    let csv = || match &summary {
        Summary::Trajectory { points, s_range, end_values, monotone, .. } => format!(
            "kind,points,s_min,s_max,chi_first,chi_last,monotone\ntrajectory,{points},{},{},{},{},{monotone}\n",
            s_range[0], s_range[1], end_values[0], end_values[1]
        ),
        Summary::Cylinder { slices, t_points, s_range, final_rate } => format!(
            "kind,slices,t_points,s_min,s_max,final_rate\ncylinder,{slices},{t_points},{},{},{final_rate}\n",
            s_range[0], s_range[1]
        ),
    };
    render(format, text_view, &summary, csv, None)?;
    Ok(true)
}
