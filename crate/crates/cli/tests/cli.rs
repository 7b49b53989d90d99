use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use discordlab::{run, Outcome};
use serde_json::Value;

fn ok(args: &[&str]) -> Outcome {
    let mut full = vec!["discordlab"];
    full.extend_from_slice(args);
    run(full)
        .expect("arguments parse")
        .expect("command succeeds")
}

fn out(tmp: &Path) -> String {
    tmp.to_str().unwrap().to_owned()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn first_line(path: PathBuf) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_owned()
}

#[test]
fn csv_headers_are_pinned() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    let v = ok(&[
        "vismap",
        "--state",
        "werner:0.5",
        "--grid",
        "9",
        "--outdir",
        &o,
        "--stamp",
        "h",
    ]);
    let dir = v.dir.unwrap();
    assert_eq!(first_line(dir.join("field.csv")), "alpha,beta,visibility");
    assert_eq!(
        first_line(dir.join("zerolines.csv")),
        "line,beta,alpha_root,alpha_unwrapped"
    );
    assert_eq!(
        first_line(dir.join("closed_form.csv")),
        "alpha,beta,visibility_closed,abs_difference"
    );
    let c = ok(&["compare-costs", "--outdir", &o, "--stamp", "h"]);
    assert_eq!(
        first_line(c.dir.unwrap().join("costs.csv")),
        "m,n,d_a,d_b,protocol,tomography_fixed,tomography_sampled"
    );
}

#[test]
fn discord_reports_match_closed_form() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    let r = report(
        &ok(&[
            "discord",
            "--state",
            "werner:0.5",
            "--outdir",
            &o,
            "--stamp",
            "a",
        ])
        .dir
        .unwrap(),
    );
    let q = r["results"]["value"].as_f64().unwrap();
    assert!((q - 0.262483).abs() < 1e-4);
    assert!((r["results"]["closed_form"].as_f64().unwrap() - 0.262483).abs() < 1e-6);

    let r0 = report(
        &ok(&[
            "discord", "--state", "werner:0", "--outdir", &o, "--stamp", "b",
        ])
        .dir
        .unwrap(),
    );
    assert_eq!(r0["results"]["value"].as_f64().unwrap(), 0.0);

    let file = tmp.path().join("zd_seed42.json");
    ok(&["state", "--state", "zd:42", "--out", file.to_str().unwrap()]);
    let spec = format!("file:{}", file.display());
    let rz = report(
        &ok(&["discord", "--state", &spec, "--outdir", &o, "--stamp", "c"])
            .dir
            .unwrap(),
    );
    assert!(rz["results"]["value"].as_f64().unwrap() < 1e-6);
    assert_eq!(rz["results"]["label"], "zd:42");
}

fn zero_nodes(dir: &Path) -> Vec<Vec<f64>> {
    let mut rdr = csv::Reader::from_path(dir.join("zerolines.csv")).unwrap();
    rdr.records()
        .map(|r| {
            r.unwrap()
                .iter()
                .map(|x| x.parse::<f64>().unwrap())
                .collect()
        })
        .collect()
}

#[test]
fn werner_zero_lines_do_not_depend_on_c() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    let a = ok(&[
        "vismap",
        "--state",
        "werner:0.2",
        "--grid",
        "101",
        "--outdir",
        &o,
        "--stamp",
        "a",
    ]);
    let b = ok(&[
        "vismap",
        "--state",
        "werner:0.5",
        "--grid",
        "101",
        "--outdir",
        &o,
        "--stamp",
        "b",
    ]);
    let (za, zb) = (
        zero_nodes(a.dir.as_ref().unwrap()),
        zero_nodes(b.dir.as_ref().unwrap()),
    );
    assert_eq!(za.len(), 101);
    assert_eq!(za.len(), zb.len());
    for (x, y) in za.iter().zip(&zb) {
        assert_eq!(x[0], y[0]);
        for k in 1..4 {
            assert!((x[k] - y[k]).abs() < 1e-9);
        }
        // α = β mod π
        let d = (x[2] - x[1]).rem_euclid(std::f64::consts::PI);
        assert!(d.min(std::f64::consts::PI - d) < 1e-9);
    }
    let r = report(a.dir.as_ref().unwrap());
    assert!(r["results"]["closed_form_max_deviation"].as_f64().unwrap() < 1e-12);
}

#[test]
fn maximally_mixed_map_is_flagged_degenerate() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    let v = ok(&[
        "vismap",
        "--state",
        "builtin:maximally-mixed",
        "--grid",
        "11",
        "--outdir",
        &o,
        "--stamp",
        "m",
    ]);
    let r = report(v.dir.as_ref().unwrap());
    assert_eq!(r["results"]["zero_lines"]["degenerate"], true);
    assert!(r["results"]["zero_lines"]["flatness"].is_null());
}

#[test]
fn cost_table_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    let c = ok(&[
        "compare-costs",
        "--m",
        "100",
        "--n",
        "10",
        "--outdir",
        &o,
        "--stamp",
        "a",
    ]);
    let text = fs::read_to_string(c.dir.unwrap().join("costs.csv")).unwrap();
    assert_eq!(text.lines().nth(1), Some("100,10,2,2,10000000,1500,150000"));

    let c = ok(&[
        "compare-costs",
        "--m",
        "1",
        "--n",
        "2",
        "--outdir",
        &o,
        "--stamp",
        "b",
    ]);
    let text = fs::read_to_string(c.dir.unwrap().join("costs.csv")).unwrap();
    assert_eq!(text.lines().nth(1), Some("1,2,2,2,32,15,60"));

    let c = ok(&[
        "compare-costs",
        "--da",
        "4",
        "--db",
        "2",
        "--n",
        "3..4",
        "--outdir",
        &o,
        "--stamp",
        "c",
    ]);
    let r = report(c.dir.as_ref().unwrap());
    assert_eq!(r["results"]["protocol_exponent"], 15);
    assert_eq!(r["results"]["tomography_sampled_exponent"], 12);
    assert_eq!(r["results"]["tomography_sampled_multiplier"], 35);
}

#[test]
fn huge_costs_are_exact_decimals() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    let c = ok(&[
        "compare-costs",
        "--m",
        "7",
        "--n",
        "1000",
        "--da",
        "5",
        "--db",
        "5",
        "--outdir",
        &o,
        "--stamp",
        "a",
    ]);
    let text = fs::read_to_string(c.dir.unwrap().join("costs.csv")).unwrap();
    // exponent 41 → 7 followed by 123 zeros
    let protocol = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(4)
        .unwrap()
        .to_owned();
    assert_eq!(protocol, format!("7{}", "0".repeat(123)));
}

#[test]
fn simulate_counts_match_the_cost_model() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    let s = ok(&[
        "simulate",
        "--state",
        "werner:0.5",
        "--m",
        "200",
        "--n",
        "4",
        "--outdir",
        &o,
        "--stamp",
        "a",
    ]);
    let dir = s.dir.unwrap();
    let r = report(&dir);
    assert_eq!(r["results"]["protocol"]["measurement_count"], "204800");
    assert_eq!(r["results"]["protocol"]["counts_match"], true);
    assert_eq!(r["results"]["tomography"]["shots_used"], "3000");
    assert_eq!(
        r["results"]["tomography"]["predicted_sampled_basis"],
        "48000"
    );
    assert!(dir.join("recon_state.json").exists());
    discordlab::statefile::read_state(&dir.join("recon_state.json")).unwrap();
}

#[test]
fn noiseless_simulation_reproduces_exact_field() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    let s = ok(&[
        "simulate", "--state", "random:5", "--m", "inf", "--n", "6", "--outdir", &o, "--stamp", "a",
    ]);
    let r = report(s.dir.as_ref().unwrap());
    assert!(
        r["results"]["protocol"]["max_deviation_from_exact"]
            .as_f64()
            .unwrap()
            < 1e-12
    );
    assert!(
        r["results"]["tomography"]["trace_distance_to_truth"]
            .as_f64()
            .unwrap()
            < 1e-12
    );
    assert!(r["results"]["protocol"]["measurement_count"].is_null());
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    let args = |stamp: &'static str| {
        vec![
            "simulate",
            "--state",
            "werner:0.3",
            "--m",
            "500",
            "--n",
            "5",
            "--seed",
            "99",
            "--outdir",
            &o,
            "--stamp",
            stamp,
        ]
    };
    let a = ok(&args("x")).dir.unwrap();
    let b = ok(&args("y")).dir.unwrap();
    for f in [
        "field.csv",
        "zerolines.csv",
        "heatmap.ppm",
        "recon_state.json",
        "report.json",
    ] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
    let mut other = args("z");
    other[8] = "100";
    let c = ok(&other).dir.unwrap();
    assert_ne!(
        fs::read(a.join("field.csv")).unwrap(),
        fs::read(c.join("field.csv")).unwrap()
    );
}

#[test]
fn format_selection_limits_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    let v = ok(&[
        "vismap", "--state", "singlet", "--grid", "5", "--format", "json", "--outdir", &o,
        "--stamp", "j",
    ]);
    let dir = v.dir.unwrap();
    assert!(dir.join("report.json").exists());
    assert!(!dir.join("field.csv").exists() && !dir.join("heatmap.ppm").exists());
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_discordlab"));
    c.env_remove("DISCORDLAB_SEED");
    c
}

#[test]
fn seed_flag_beats_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    let seed_of = |extra: &[&str], env: Option<&str>, stamp: &str| {
        let mut c = bin();
        c.args([
            "compare-costs",
            "--n",
            "3",
            "--outdir",
            &o,
            "--stamp",
            stamp,
        ])
        .args(extra);
        if let Some(e) = env {
            c.env("DISCORDLAB_SEED", e);
        }
        assert!(c.output().unwrap().status.success());
        report(&tmp.path().join(format!("compare-costs-{stamp}")))["seed"]
            .as_u64()
            .unwrap()
    };
    assert_eq!(seed_of(&[], None, "d"), 0xD15C0D);
    assert_eq!(seed_of(&[], Some("7"), "e"), 7);
    assert_eq!(seed_of(&["--seed", "0x10"], Some("7"), "f"), 16);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    let code = |args: &[&str]| {
        bin()
            .args(args)
            .args(["--outdir", &o])
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(
        code(&["vismap", "--state", "werner:0.5", "--grid", "1"]),
        Some(2)
    );
    assert_eq!(code(&["discord", "--state", "nonsense"]), Some(2));
    assert_eq!(code(&["discord", "--state", "werner:1.5"]), Some(3));
    assert_eq!(
        code(&["discord", "--state", "file:/nonexistent/state.json"]),
        Some(3)
    );
    assert_eq!(
        code(&[
            "simulate",
            "--state",
            "werner:0.5",
            "--m",
            "10000",
            "--n",
            "21"
        ]),
        Some(4)
    );

    let bad = tmp.path().join("bad.json");
    fs::write(&bad, "{\"dims\": [2, 2], \"basis\": \"up-up, up-down, down-up, down-down\",\n \"re\": [[1]], \"im\": [[0]]}").unwrap();
    let output = bin()
        .args([
            "discord",
            "--state",
            &format!("file:{}", bad.display()),
            "--outdir",
            &o,
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&output.stderr).contains("re"));
}
