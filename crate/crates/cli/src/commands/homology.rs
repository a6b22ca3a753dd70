use std::path::Path;

use flatloop_core::homology::{
    floer_bott_cohomology, morse_bott_homology, sublevel_singular_homology, HomologyTable,
};
use flatloop_core::{FlatTorus, LatticeVector, TWO_PI_SQ};
use serde::Serialize;

use super::render;
use crate::args::{Format, Side};
use crate::report::{table_csv, TableReport};
use crate::{parse_ints, usage, CliError};

#[derive(Serialize)]
struct CheckReport {
    n: usize,
    k: Vec<i64>,
    action_bound: f64,
    agree: bool,
    mismatches: Vec<String>,
    tables: Vec<TableReport>,
}

/// Degree-by-degree differences after moving the Floer side back to degree `i`.
fn diff(morse: &HomologyTable, floer: &HomologyTable, singular: &HomologyTable) -> Vec<String> {
    let floer = floer.regraded_negative(&floer.label);
    let degrees: std::collections::BTreeSet<i64> =
        morse.entries.keys().chain(floer.entries.keys()).chain(singular.entries.keys()).copied().collect();
    let mut out = Vec::new();
    for d in degrees {
        let (m, f, s) = (morse.group(d), floer.group(d), singular.group(d));
        if m != f || m != s {
            out.push(format!("degree {d}: morse {:?}, floer {:?}, singular {:?}", m, f, s));
        }
    }
    out
}

pub fn run(n: usize, k: &str, side: Side, check_all: bool, format: Format, output: Option<&Path>) -> Result<bool, CliError> {
    let torus = FlatTorus::new(n).map_err(usage)?;
    let k = parse_ints(k)?;
    if k.len() != n {
        return Err(CliError::Usage(format!("--k has {} entries, expected n = {n}", k.len())));
    }
    let k = LatticeVector::new(k);
    let a = TWO_PI_SQ * k.norm_sq() as f64;
    let morse = || morse_bott_homology(torus, a);
    let floer = || floer_bott_cohomology(torus, a);
    let singular = || sublevel_singular_homology(torus, &k);

    if !check_all {
        let table = match side {
            Side::Morse => morse(),
            Side::Floer => floer(),
            Side::Singular => singular(),
        };
        let report = TableReport::from(&table);
        render(format, || table.to_string(), &report, || table_csv(&table), output)?;
        return Ok(true);
    }

    let tables = [morse(), floer(), singular()];
    let mismatches = diff(&tables[0], &tables[1], &tables[2]);
    let agree = mismatches.is_empty();
    let report = CheckReport {
        n,
        k: k.entries().to_vec(),
        action_bound: crate::report::r12(a),
        agree,
        mismatches: mismatches.clone(),
        tables: tables.iter().map(TableReport::from).collect(),
    };
    render(
        format,
        || {
            let mut s: String = tables.iter().map(|t| t.to_string()).collect();
            if agree {
                s.push_str("three-way agreement: PASS\n");
            } else {
                s.push_str("three-way agreement: FAIL\n");
                for m in &mismatches {
                    s.push_str(&format!("  {m}\n"));
                }
            }
            s
        },
        &report,
        || {
            let mut s = String::from("side,degree,free_rank,torsion\n");
            for (name, t) in ["morse", "floer", "singular"].iter().zip(&tables) {
                for line in table_csv(t).lines().skip(1) {
                    s.push_str(&format!("{name},{line}\n"));
                }
            }
            s
        },
        output,
    )?;
    if !agree {
        eprintln!("homology sides disagree:\n{}", mismatches.join("\n"));
    }
    Ok(agree)
}
