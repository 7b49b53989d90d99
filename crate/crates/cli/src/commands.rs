use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use discordlab_core::discord::{discord as discord_of, werner_discord_closed, DiscordOptions};
use discordlab_core::protocol::{
    extract_zero_lines, linspace, visibility_map, werner_visibility_closed, VisibilityField,
    ZeroLineSet,
};
use discordlab_core::shots::{
    cost_protocol, cost_report, cost_tomography, crossover_n, protocol_run, tomography, ShotBudget,
    Shots, TomographyMode,
};
use discordlab_core::RandomSeed;
use serde::Serialize;

use crate::artifacts::{self, run_dir, write_file};
use crate::statefile::write_state;
use crate::{
    CliError, Common, CostArgs, DiscordArgs, Format, Outcome, SimMode, SimulateArgs, StateArgs,
    VismapArgs,
};

const TOOL: &str = "discordlab";
const WERNER_DISCORD_TOL: f64 = 1e-4;
const CLOSED_FORM_FIELD_TOL: f64 = 1e-12;
const EXACT_FIELD_TOL: f64 = 1e-12;

#[derive(Serialize)]
struct Report<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    seed: u64,
    config: &'a C,
    results: R,
}

fn write_report<C: Serialize, R: Serialize>(
    dir: &Path,
    common: &Common,
    command: &'static str,
    config: &C,
    results: R,
) -> Result<(), CliError> {
    if !common.wants(Format::Json) {
        return Ok(());
    }
    let report = Report {
        tool: TOOL,
        version: env!("CARGO_PKG_VERSION"),
        command,
        seed: common.seed,
        config,
        results,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    write_file(dir, "report.json", text.as_bytes())?;
    Ok(())
}

fn check_threshold(t: Option<f64>) -> Result<Option<f64>, CliError> {
    match t {
        Some(x) if !(x.is_finite() && x > 0.0) => Err(CliError::Usage(format!(
            "--threshold must be positive and finite, got {x}"
        ))),
        other => Ok(other),
    }
}

fn check_angle(name: &str, x: f64) -> Result<(), CliError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must be finite")))
    }
}

#[derive(Serialize)]
struct Basis {
    theta: f64,
    phi: f64,
}

#[derive(Serialize)]
struct OptimizerReport {
    iterations: usize,
    spread: f64,
    evaluations: usize,
}

#[derive(Serialize)]
struct DiscordResults {
    label: String,
    value: f64,
    closed_form: Option<f64>,
    abs_difference: Option<f64>,
    argmin_basis: Basis,
    optimizer: OptimizerReport,
}

pub(crate) fn discord(a: &DiscordArgs) -> Result<Outcome, CliError> {
    let rho = a.state.load()?;
    let res = discord_of(&rho, &DiscordOptions::default())?;
    let closed = a
        .state
        .werner_weight()
        .map(werner_discord_closed)
        .transpose()?;
    let diff = closed.map(|c| (res.value - c).abs());

    let dir = run_dir(&a.common.outdir, "discord", a.common.stamp.as_deref())?;
    write_report(
        &dir,
        &a.common,
        "discord",
        a,
        DiscordResults {
            label: rho.label().into(),
            value: res.value,
            closed_form: closed,
            abs_difference: diff,
            argmin_basis: Basis {
                theta: res.argmin_basis.theta,
                phi: res.argmin_basis.phi,
            },
            optimizer: OptimizerReport {
                iterations: res.trace.iterations,
                spread: res.trace.spread,
                evaluations: res.trace.evaluations,
            },
        },
    )?;

    let mut summary = format!("discord {:.9}", res.value);
    if let (Some(c), Some(d)) = (closed, diff) {
        write!(summary, " (closed form {c:.9}, |diff| {d:.1e})").expect("String write");
    }
    write!(summary, "\nwrote {}", dir.display()).expect("String write");
    if let Some(d) = diff.filter(|&d| d > WERNER_DISCORD_TOL) {
        return Err(CliError::Numerical(format!(
            "discord differs from the Werner closed form by {d:e}"
        )));
    }
    Ok(Outcome {
        dir: Some(dir),
        summary,
    })
}

#[derive(Serialize)]
struct ZeroLineSummary {
    threshold: f64,
    degenerate: bool,
    flatness: Option<f64>,
    line_count: usize,
    line_flatness: Vec<f64>,
    roots_per_column: Vec<usize>,
}

impl ZeroLineSummary {
    fn of(zl: &ZeroLineSet) -> Self {
        ZeroLineSummary {
            threshold: zl.threshold,
            degenerate: zl.degenerate,
            flatness: zl.flatness,
            line_count: zl.lines.len(),
            line_flatness: zl.lines.iter().map(|l| l.flatness).collect(),
            roots_per_column: zl.columns.iter().map(|c| c.roots.len()).collect(),
        }
    }
}

#[derive(Serialize)]
struct VismapResults {
    label: String,
    max_visibility: f64,
    zero_lines: ZeroLineSummary,
    closed_form_max_deviation: Option<f64>,
}

fn write_field_artifacts(
    dir: &Path,
    common: &Common,
    field: &VisibilityField,
    zl: &ZeroLineSet,
) -> Result<(), CliError> {
    if common.wants(Format::Csv) {
        write_file(dir, "field.csv", &artifacts::field_csv(field))?;
        write_file(dir, "zerolines.csv", &artifacts::zerolines_csv(zl))?;
    }
    if common.wants(Format::Ppm) {
        write_file(dir, "heatmap.ppm", &artifacts::heatmap(field))?;
    }
    Ok(())
}

pub(crate) fn vismap(a: &VismapArgs) -> Result<Outcome, CliError> {
    if a.grid < 2 {
        return Err(CliError::Usage(format!(
            "--grid must be at least 2, got {}",
            a.grid
        )));
    }
    check_angle("phia", a.phia)?;
    check_angle("phib", a.phib)?;
    let threshold = check_threshold(a.threshold)?;
    let rho = a.state.load()?;
    let axis = linspace(0.0, PI, a.grid);
    let field = visibility_map(&rho, &axis, &axis, a.phia, a.phib)?;
    let zl = extract_zero_lines(&field, threshold.unwrap_or(field.mode.default_threshold()))?;

    let dir = run_dir(&a.common.outdir, "vismap", a.common.stamp.as_deref())?;
    write_field_artifacts(&dir, &a.common, &field, &zl)?;

    let mut deviation = None;
    if let Some(c) = a.state.werner_weight() {
        let mut closed = field.clone();
        for (k, v) in closed.values.iter_mut().enumerate() {
            let (ia, ib) = (k / a.grid, k % a.grid);
            *v = werner_visibility_closed(c, axis[ia], axis[ib], a.phia, a.phib)?;
        }
        let dev = closed
            .values
            .iter()
            .zip(&field.values)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        deviation = Some(dev);
        if a.common.wants(Format::Csv) {
            write_file(
                &dir,
                "closed_form.csv",
                &artifacts::closed_form_csv(&closed, &field),
            )?;
        }
    }

    write_report(
        &dir,
        &a.common,
        "vismap",
        a,
        VismapResults {
            label: rho.label().into(),
            max_visibility: field.max_value(),
            zero_lines: ZeroLineSummary::of(&zl),
            closed_form_max_deviation: deviation,
        },
    )?;

    let mut summary = format!(
        "{} zero line(s), flatness {}",
        zl.lines.len(),
        zl.flatness.map_or("n/a".into(), |f| format!("{f:.6}"))
    );
    if zl.degenerate {
        summary.push_str(" (degenerate: field vanishes everywhere)");
    }
    if let Some(d) = deviation {
        write!(summary, ", closed-form deviation {d:.1e}").expect("String write");
    }
    write!(summary, "\nwrote {}", dir.display()).expect("String write");
    if let Some(d) = deviation.filter(|&d| d > CLOSED_FORM_FIELD_TOL) {
        return Err(CliError::Numerical(format!(
            "visibility field deviates from the Werner closed form by {d:e}"
        )));
    }
    Ok(Outcome {
        dir: Some(dir),
        summary,
    })
}

#[derive(Serialize)]
struct CostResults {
    protocol_exponent: u32,
    tomography_sampled_exponent: u32,
    tomography_sampled_multiplier: u32,
    tomography_fixed_multiplier: u64,
    protocol_formula: String,
    tomography_fixed_formula: String,
    tomography_sampled_formula: String,
    crossover_n: Option<u64>,
    rows: usize,
}

pub(crate) fn compare_costs(a: &CostArgs) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut first = None;
    for n in a.n.start..=a.n.end {
        let r = cost_report(a.m, n, a.da, a.db)?;
        rows.push([
            a.m.to_string(),
            n.to_string(),
            a.da.to_string(),
            a.db.to_string(),
            r.protocol_count.to_string(),
            r.tomography_fixed_count.to_string(),
            r.tomography_sampled_count.to_string(),
        ]);
        first.get_or_insert(r);
    }
    let r = first.expect("ranges are non-empty");
    let fixed_mult = (a.da as u64 * a.db as u64).pow(2) - 1;
    let crossover = crossover_n(a.m, a.da, a.db, a.n.end)?;

    let dir = run_dir(&a.common.outdir, "compare-costs", a.common.stamp.as_deref())?;
    if a.common.wants(Format::Csv) {
        write_file(&dir, "costs.csv", &artifacts::costs_csv(&rows))?;
    }
    write_report(
        &dir,
        &a.common,
        "compare-costs",
        a,
        CostResults {
            protocol_exponent: r.protocol_exponent,
            tomography_sampled_exponent: r.tomography_exponent,
            tomography_sampled_multiplier: r.tomography_multiplier,
            tomography_fixed_multiplier: fixed_mult,
            protocol_formula: format!("m*n^{}", r.protocol_exponent),
            tomography_fixed_formula: format!("{fixed_mult}*m"),
            tomography_sampled_formula: format!(
                "{}*m*n^{}",
                r.tomography_multiplier, r.tomography_exponent
            ),
            crossover_n: crossover,
            rows: rows.len(),
        },
    )?;

    let mut summary = format!(
        "protocol m*n^{} vs tomography {}*m (fixed) / {}*m*n^{} (sampled)",
        r.protocol_exponent, fixed_mult, r.tomography_multiplier, r.tomography_exponent
    );
    match crossover {
        Some(n) => write!(summary, "; protocol costs more from n = {n}"),
        None => write!(summary, "; no crossover up to n = {}", a.n.end),
    }
    .expect("String write");
    write!(summary, "\nwrote {}", dir.display()).expect("String write");
    Ok(Outcome {
        dir: Some(dir),
        summary,
    })
}

#[derive(Serialize)]
struct ProtocolResults {
    grid_points: usize,
    phi_a: f64,
    phi_b: f64,
    measurement_count: Option<String>,
    predicted_count: Option<String>,
    counts_match: bool,
    max_visibility: f64,
    zero_lines: ZeroLineSummary,
    max_deviation_from_exact: Option<f64>,
}

#[derive(Serialize)]
struct TomographyResults {
    shots_used: Option<String>,
    predicted_fixed_basis: Option<String>,
    predicted_sampled_basis: Option<String>,
    counts_match: bool,
    trace_distance_to_truth: f64,
    discord_of_reconstruction: f64,
    discord_of_truth: f64,
}

#[derive(Serialize)]
struct SimulateResults {
    label: String,
    protocol: Option<ProtocolResults>,
    tomography: Option<TomographyResults>,
}

pub(crate) fn simulate(a: &SimulateArgs) -> Result<Outcome, CliError> {
    check_angle("phia", a.phia)?;
    check_angle("phib", a.phib)?;
    let threshold = check_threshold(a.threshold)?;
    let shots = a.m.0;
    let budget = ShotBudget::new(shots, a.n)?;
    let rho = a.state.load()?;
    let root = RandomSeed(a.common.seed);
    let n = a.n as u64;
    let mut inconsistencies = Vec::new();

    let run = if matches!(a.mode, SimMode::Protocol | SimMode::Both) {
        Some(protocol_run(
            &rho,
            &budget,
            a.phia,
            a.phib,
            root.split(0),
            a.override_resource_guard,
        )?)
    } else {
        None
    };
    let tomo = if matches!(a.mode, SimMode::Tomography | SimMode::Both) {
        Some(tomography(&rho, shots, root.split(1))?)
    } else {
        None
    };

    let dir = run_dir(&a.common.outdir, "simulate", a.common.stamp.as_deref())?;
    let mut summary = String::new();

    let protocol = match &run {
        None => None,
        Some(run) => {
            let field = &run.field;
            let zl =
                extract_zero_lines(field, threshold.unwrap_or(field.mode.default_threshold()))?;
            write_field_artifacts(&dir, &a.common, field, &zl)?;
            let predicted = shots
                .finite()
                .map(|m| cost_protocol(m, n, 2, 2))
                .transpose()?;
            let counts_match = predicted == run.measurement_count;
            if !counts_match {
                inconsistencies.push("protocol measurement count differs from m*n^5".to_string());
            }
            let deviation = match shots {
                Shots::Exact => {
                    let exact = visibility_map(
                        &rho,
                        &field.alpha_axis,
                        &field.beta_axis,
                        field.phi_a,
                        field.phi_b,
                    )?;
                    let d = exact
                        .values
                        .iter()
                        .zip(&field.values)
                        .map(|(x, y)| (x - y).abs())
                        .fold(0.0, f64::max);
                    if d > EXACT_FIELD_TOL {
                        inconsistencies
                            .push(format!("noiseless field deviates from exact map by {d:e}"));
                    }
                    Some(d)
                }
                Shots::Finite(_) => None,
            };
            match run.measurement_count {
                Some(c) => writeln!(
                    summary,
                    "protocol: {c} measurements, {} zero line(s)",
                    zl.lines.len()
                ),
                None => writeln!(
                    summary,
                    "protocol: noiseless, {} zero line(s)",
                    zl.lines.len()
                ),
            }
            .expect("String write");
            Some(ProtocolResults {
                grid_points: a.n,
                phi_a: field.phi_a,
                phi_b: field.phi_b,
                measurement_count: run.measurement_count.map(|c| c.to_string()),
                predicted_count: predicted.map(|c| c.to_string()),
                counts_match,
                max_visibility: field.max_value(),
                zero_lines: ZeroLineSummary::of(&zl),
                max_deviation_from_exact: deviation,
            })
        }
    };

    let tomography_results = match &tomo {
        None => None,
        Some(t) => {
            write_state(&dir.join("recon_state.json"), &t.projected)?;
            let opts = DiscordOptions::default();
            let q_recon = discord_of(&t.projected, &opts)?.value;
            let q_truth = discord_of(&rho, &opts)?.value;
            let fixed = shots
                .finite()
                .map(|m| cost_tomography(m, n, 2, 2, TomographyMode::FixedBasis))
                .transpose()?;
            let sampled = shots
                .finite()
                .map(|m| cost_tomography(m, n, 2, 2, TomographyMode::SampledBasis))
                .transpose()?;
            let counts_match = fixed == t.shots_used;
            if !counts_match {
                inconsistencies.push("tomography shot count differs from 15*m".to_string());
            }
            writeln!(
                summary,
                "tomography: trace distance {:.3e}, discord {q_recon:.6} (truth {q_truth:.6})",
                t.trace_distance_to_truth
            )
            .expect("String write");
            Some(TomographyResults {
                shots_used: t.shots_used.map(|c| c.to_string()),
                predicted_fixed_basis: fixed.map(|c| c.to_string()),
                predicted_sampled_basis: sampled.map(|c| c.to_string()),
                counts_match,
                trace_distance_to_truth: t.trace_distance_to_truth,
                discord_of_reconstruction: q_recon,
                discord_of_truth: q_truth,
            })
        }
    };

    write_report(
        &dir,
        &a.common,
        "simulate",
        a,
        SimulateResults {
            label: rho.label().into(),
            protocol,
            tomography: tomography_results,
        },
    )?;
    write!(summary, "wrote {}", dir.display()).expect("String write");
    if !inconsistencies.is_empty() {
        return Err(CliError::Numerical(inconsistencies.join("; ")));
    }
    Ok(Outcome {
        dir: Some(dir),
        summary,
    })
}

pub(crate) fn state(a: &StateArgs) -> Result<Outcome, CliError> {
    let rho = a.state.load()?;
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    write_state(&a.out, &rho)?;
    Ok(Outcome {
        dir: None,
        summary: format!("wrote {} ({})", a.out.display(), rho.label()),
    })
}
