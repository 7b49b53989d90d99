//! Density-matrix files.
//!
//! ```json
//! {
//!   "dims": [2, 2],
//!   "basis": "up-up, up-down, down-up, down-down",
//!   "re": [[...4 numbers...], ...4 rows...],
//!   "im": [[...], ...],
//!   "label": "werner:0.5"
//! }
//! ```
//!
//! A is the slow index. Writers emit 17 significant digits so files round
//! trip exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use discordlab_core::qmat::{c, ComplexMatrix};
use discordlab_core::states::DensityMatrix;
use serde::Deserialize;

use crate::error::CliError;

pub const BASIS: &str = "up-up, up-down, down-up, down-down";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dims: Vec<usize>,
    basis: String,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
    #[serde(default)]
    label: String,
}

fn check_block(name: &str, rows: &[Vec<f64>]) -> Result<(), String> {
    if rows.len() != 4 {
        return Err(format!(
            "field `{name}` has {} rows, expected 4",
            rows.len()
        ));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != 4 {
            return Err(format!(
                "field `{name}` row {i} has {} entries, expected 4",
                row.len()
            ));
        }
        if let Some(j) = row.iter().position(|x| !x.is_finite()) {
            return Err(format!("field `{name}` entry [{i}][{j}] is not finite"));
        }
    }
    Ok(())
}

/// Parses and validates a state file's contents.
pub fn parse_state(text: &str) -> Result<DensityMatrix, String> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if file.dims != [2, 2] {
        return Err(format!("field `dims` is {:?}, expected [2, 2]", file.dims));
    }
    if file.basis.trim() != BASIS {
        return Err(format!(
            "field `basis` is {:?}, expected {BASIS:?}",
            file.basis
        ));
    }
    check_block("re", &file.re)?;
    check_block("im", &file.im)?;
    let mat = ComplexMatrix::from_fn(4, |i, j| c(file.re[i][j], file.im[i][j]));
    DensityMatrix::new(mat, file.label).map_err(|e| format!("state fails validation: {e}"))
}

pub fn read_state(path: &Path) -> Result<DensityMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_state(&text).map_err(|msg| CliError::Validation(format!("{}: {msg}", path.display())))
}

fn push_block(out: &mut String, m: &ComplexMatrix, part: fn(f64, f64) -> f64) {
    out.push('[');
    for i in 0..4 {
        if i > 0 {
            out.push_str(",\n         ");
        }
        out.push('[');
        for j in 0..4 {
            if j > 0 {
                out.push_str(", ");
            }
            let z = m[(i, j)];
            write!(out, "{:.16e}", part(z.re, z.im)).expect("writing to a String");
        }
        out.push(']');
    }
    out.push(']');
}

pub fn format_state(rho: &DensityMatrix) -> String {
    let mut out = String::from("{\n  \"dims\": [2, 2],\n");
    writeln!(out, "  \"basis\": \"{BASIS}\",").expect("writing to a String");
    out.push_str("  \"re\": ");
    push_block(&mut out, rho.matrix(), |re, _| re);
    out.push_str(",\n  \"im\": ");
    push_block(&mut out, rho.matrix(), |_, im| im);
    out.push_str(",\n  \"label\": ");
    out.push_str(&serde_json::to_string(rho.label()).expect("strings serialize"));
    out.push_str("\n}\n");
    out
}

pub fn write_state(path: &Path, rho: &DensityMatrix) -> Result<(), CliError> {
    fs::write(path, format_state(rho)).map_err(|e| CliError::io(path, e))
}
