use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_line-scatter"))
}

fn config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(task: &str, config: &Path, extra: &[&str]) -> Output {
    bin().arg(task).arg("--config").arg(config).args(extra).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV document, split into fields.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn error_report(out: &Output) -> Value {
    assert!(!out.status.success());
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().unwrap();
    let v: Value = serde_json::from_str(line).unwrap();
    assert!(v["error_kind"].is_string() && v["message"].is_string() && v["parameters"].is_object());
    v
}

#[test]
fn comb_below_half_frequency_gives_one_beam() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.json", r#"{"potential":{"kind":"comb","coupling":[1,0],"spacing":1},"wave":{"k":2,"theta0_deg":0}}"#);
    let csv = stdout(&run("beams", &cfg, &[]));
    assert!(csv.lines().any(|l| l.starts_with("shift,theta_deg,re_y,im_y,abs_y_sq")));
    let data = rows(&csv);
    assert_eq!(data.len(), 2);
    assert!(data.iter().all(|r| r[0] == "0"));
    assert_eq!(num(&data[0][1]), 0.0);
    assert_eq!(num(&data[1][1]), 180.0);
    // −i/√(2π) · (−2πi/(4 + i)) = −√(2π)/(4 + i)
    let (re, im) = (num(&data[0][2]), num(&data[0][3]));
    let scale = -(2.0 * PI).sqrt() / 17.0;
    assert!((re - 4.0 * scale).abs() < 1e-14 && (im + scale).abs() < 1e-14);
}

#[test]
fn singular_delta_is_flagged_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "s.json",
        r#"{"potential":{"kind":"delta_array","couplings":[[0,4]],"positions":[0]},"scan":{"k":{"start":0.5,"stop":3,"count":26}}}"#,
    );
    let out = dir.path().join("scan.csv");
    stdout(&run("scan-k", &cfg, &["--out", out.to_str().unwrap()]));
    let data = rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(data.len(), 26);
    assert_eq!(num(&data[0][0]), 0.5);
    assert_eq!(num(&data[25][0]), 3.0);
    let candidates: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("scan.candidates.json")).unwrap()).unwrap();
    assert_eq!(candidates.as_array().unwrap().len(), 26);
}

#[test]
fn comb_matches_cosine_potential() {
    let dir = tempfile::tempdir().unwrap();
    for (a, k) in [(1.0, 4.5), (0.7, 6.0), (2.0, 2.9)] {
        let alpha = 2.0 * PI / a;
        let text = format!(
            r#"{{"potential":{{"kind":"comb","coupling":[0.8,-0.3],"spacing":{a}}},
                "reference":{{"kind":"fourier","harmonics":{{"-1":[{r},{i}],"0":[{r},{i}],"1":[{r},{i}]}},"frequencies":[{alpha}]}},
                "wave":{{"k":{k},"theta0_deg":12}}}}"#,
            r = 0.8 / a,
            i = -0.3 / a,
        );
        let cfg = config(dir.path(), "e.json", &text);
        let v: Value = serde_json::from_str(&stdout(&run("equivalence", &cfg, &["--format", "json"]))).unwrap();
        assert!(v["max_discrepancy"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn general_line_amplitude_is_sampled_over_full_circle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "g.json",
        r#"{"potential":{"kind":"general","zeta":[1,0],"a":1,"b":1,
            "profile":{"kind":"delta_array","couplings":[[1,0],[0,1]],"positions":[0,1]}},
            "wave":{"k":1.5,"theta0_deg":10},"options":{"theta_samples":8}}"#,
    );
    let data = rows(&stdout(&run("amplitude", &cfg, &[])));
    let angles: Vec<f64> = data.iter().map(|r| num(&r[0])).collect();
    assert_eq!(angles, vec![-90.0, -45.0, 0.0, 45.0, 90.0, 135.0, 180.0, 225.0]);
    for r in &data {
        let (re, im, sq) = (num(&r[1]), num(&r[2]), num(&r[3]));
        assert!((re * re + im * im - sq).abs() <= 1e-15 * sq.max(1e-300));
    }
}

#[test]
fn verify_reports_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "v.json",
        r#"{"potential":{"kind":"fourier","harmonics":{"-1":[0.1,0],"0":[0.2,0.1],"1":[0,0.1]},"frequencies":[0.8]},
            "wave":{"k":1.7,"theta0_deg":25}}"#,
    );
    let v: Value = serde_json::from_str(&stdout(&run("verify", &cfg, &["--format", "json"]))).unwrap();
    assert_eq!(v["summary"]["agreement"], Value::Bool(true));
    assert!(v["rows"].as_array().unwrap().len() >= 2);
}

#[test]
fn solver_errors_are_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let singular = config(
        dir.path(),
        "x.json",
        r#"{"potential":{"kind":"delta_array","couplings":[[0,4]],"positions":[0]},"wave":{"k":1,"theta0_deg":0}}"#,
    );
    let v = error_report(&run("amplitude", &singular, &[]));
    assert_eq!(v["error_kind"], "SpectralSingularity");
    assert_eq!(v["parameters"]["k"], 1.0);

    let invalid = config(
        dir.path(),
        "i.json",
        r#"{"potential":{"kind":"fourier","harmonics":{"0":[1,0]},"frequencies":[2,1]},"wave":{"k":1,"theta0_deg":0}}"#,
    );
    assert_eq!(error_report(&run("beams", &invalid, &[]))["error_kind"], "InvalidPotential");

    let incommensurate = config(
        dir.path(),
        "n.json",
        r#"{"potential":{"kind":"fourier","harmonics":{"0":[1,0],"1":[1,0],"2":[1,0]},"frequencies":[1,1.4142135623730951]},"wave":{"k":3,"theta0_deg":0}}"#,
    );
    assert_eq!(error_report(&run("beams", &incommensurate, &[]))["error_kind"], "IncommensurateFrequencies");

    let grazing = config(
        dir.path(),
        "z.json",
        r#"{"potential":{"kind":"fourier","harmonics":{"0":[1,0],"1":[1,0]},"frequencies":[1]},"wave":{"k":1,"theta0_deg":0}}"#,
    );
    let v = error_report(&run("beams", &grazing, &[]));
    assert_eq!(v["error_kind"], "GrazingMode");
    assert!(v["parameters"]["shift"].is_i64());

    let missing = dir.path().join("absent.json");
    assert_eq!(error_report(&run("beams", &missing, &[]))["error_kind"], "IoError");
    let broken = config(dir.path(), "b.json", "{\"potential\": 3}");
    assert_eq!(error_report(&run("beams", &broken, &[]))["error_kind"], "ConfigError");
    assert_eq!(error_report(&run("beams", &singular, &[]))["error_kind"], "UnsupportedTask");
}

#[test]
fn output_section_of_config_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("beams.json");
    let text = format!(
        r#"{{"potential":{{"kind":"comb","coupling":[1,0],"spacing":1}},"wave":{{"k":7,"theta0_deg":0}},
            "output":{{"path":{},"format":"json"}}}}"#,
        serde_json::to_string(out.to_str().unwrap()).unwrap()
    );
    let cfg = config(dir.path(), "o.json", &text);
    assert!(stdout(&run("beams", &cfg, &[])).is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    // 2π < k = 7: shifts −1, 0, 1 on both sides.
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
}
