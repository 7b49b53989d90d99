//! Output directories, CSV tables and grayscale heatmaps.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use discordlab_core::optimize::wrap_angle;
use discordlab_core::protocol::{VisibilityField, ZeroLineSet};
use std::f64::consts::PI;

use crate::error::CliError;

pub const FIELD_HEADER: [&str; 3] = ["alpha", "beta", "visibility"];
pub const ZEROLINES_HEADER: [&str; 4] = ["line", "beta", "alpha_root", "alpha_unwrapped"];
pub const CLOSED_FORM_HEADER: [&str; 4] = ["alpha", "beta", "visibility_closed", "abs_difference"];
pub const COSTS_HEADER: [&str; 7] = [
    "m",
    "n",
    "d_a",
    "d_b",
    "protocol",
    "tomography_fixed",
    "tomography_sampled",
];

/// Fifteen significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.14e}")
}

/// `<outdir>/<command>-<stamp>`, created if missing. Without a stamp the
/// current UNIX time in seconds is used.
pub fn run_dir(outdir: &Path, command: &str, stamp: Option<&str>) -> Result<PathBuf, CliError> {
    let stamp = match stamp {
        Some(s) => s.to_owned(),
        None => SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
            .to_string(),
    };
    let dir = outdir.join(format!("{command}-{stamp}"));
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    Ok(dir)
}

pub fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

fn csv_table<I, R>(header: &[&str], rows: I) -> Vec<u8>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// One row per grid node, α-major.
pub fn field_csv(field: &VisibilityField) -> Vec<u8> {
    let nb = field.beta_axis.len();
    csv_table(
        &FIELD_HEADER,
        field.values.iter().enumerate().map(|(k, &v)| {
            [
                num(field.alpha_axis[k / nb]),
                num(field.beta_axis[k % nb]),
                num(v),
            ]
        }),
    )
}

pub fn zerolines_csv(lines: &ZeroLineSet) -> Vec<u8> {
    csv_table(
        &ZEROLINES_HEADER,
        lines.lines.iter().enumerate().flat_map(|(i, line)| {
            line.points.iter().map(move |&(beta, alpha)| {
                [
                    i.to_string(),
                    num(beta),
                    num(wrap_angle(alpha, PI)),
                    num(alpha),
                ]
            })
        }),
    )
}

/// Closed-form field next to its deviation from a computed field on the same
/// grid.
pub fn closed_form_csv(closed: &VisibilityField, computed: &VisibilityField) -> Vec<u8> {
    let nb = closed.beta_axis.len();
    csv_table(
        &CLOSED_FORM_HEADER,
        closed
            .values
            .iter()
            .zip(&computed.values)
            .enumerate()
            .map(|(k, (&c, &v))| {
                [
                    num(closed.alpha_axis[k / nb]),
                    num(closed.beta_axis[k % nb]),
                    num(c),
                    num((c - v).abs()),
                ]
            }),
    )
}

pub fn costs_csv(rows: &[[String; 7]]) -> Vec<u8> {
    csv_table(&COSTS_HEADER, rows.iter().map(|r| r.iter().cloned()))
}

/// Binary 8-bit grayscale pixmap (P5): rows are α, columns β, intensity
/// linear in `V / max V` (all black when the field vanishes).
pub fn heatmap(field: &VisibilityField) -> Vec<u8> {
    let (h, w) = (field.alpha_axis.len(), field.beta_axis.len());
    let max = field.max_value();
    let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
    out.extend(field.values.iter().map(|&v| {
        if max > 0.0 {
            (255.0 * (v / max).clamp(0.0, 1.0)).round() as u8
        } else {
            0
        }
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use discordlab_core::protocol::{extract_zero_lines, linspace, visibility_map};
    use discordlab_core::states::werner;

    fn small_field() -> VisibilityField {
        let g = linspace(0.0, PI, 5);
        visibility_map(&werner(0.5).unwrap(), &g, &g, 0.0, 0.0).unwrap()
    }

    #[test]
    fn numbers_carry_fifteen_significant_digits() {
        assert_eq!(num(PI), "3.14159265358979e0");
        assert_eq!(num(0.0), "0.00000000000000e0");
        assert_eq!(num(-1.5e-12), "-1.50000000000000e-12");
    }

    #[test]
    fn field_csv_layout() {
        let text = String::from_utf8(field_csv(&small_field())).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "alpha,beta,visibility");
        assert_eq!(lines.len(), 26);
        assert!(text.ends_with('\n') && !text.contains('\r'));
        assert_eq!(
            lines[2],
            "0.00000000000000e0,7.85398163397448e-1,3.53553390593274e-1"
        );
    }

    #[test]
    fn zerolines_csv_layout() {
        let f = small_field();
        let text =
            String::from_utf8(zerolines_csv(&extract_zero_lines(&f, 1e-9).unwrap())).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("line,beta,alpha_root,alpha_unwrapped"));
        assert_eq!(lines.count(), 5);
    }

    #[test]
    fn heatmap_layout() {
        let f = small_field();
        let img = heatmap(&f);
        let header = b"P5\n5 5\n255\n";
        assert_eq!(&img[..header.len()], header);
        assert_eq!(img.len(), header.len() + 25);
        assert_eq!(img[header.len()], 0);
        assert!(img[header.len()..].contains(&255));
    }
}
