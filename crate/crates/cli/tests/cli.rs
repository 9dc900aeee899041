use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use horn_inverse::forward::{default_observable_grid, ObservableKind, SpectralValues};
use horn_inverse::io::{area_from_table, load_spectral, Table};
use horn_inverse::reference::{golden_dataset, ClosedFormModel};
use serde_json::Value;
use tempfile::TempDir;

fn cli(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horn-inverse")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    fs::write(dir.join(name), json).unwrap();
    name.to_string()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn forward_builtin_matches_golden() {
    let tmp = TempDir::new().unwrap();
    let o = cli(&["forward", "--out", "fw"], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let grid = default_observable_grid();
    for kind in ObservableKind::ALL {
        let got = load_spectral(tmp.path().join(format!("fw/{}.csv", kind.name()))).unwrap();
        let (want, _) = golden_dataset(kind, &grid).unwrap();
        let err = match (&got.values, &want.values) {
            (SpectralValues::Real(a), SpectralValues::Real(b)) => {
                a.iter().zip(b).map(|(x, y)| (x - y).abs() / y.abs().max(1e-300)).fold(0.0, f64::max)
            }
            (SpectralValues::Complex(a), SpectralValues::Complex(b)) => {
                a.iter().zip(b).map(|(x, y)| (x - y).norm() / y.norm()).fold(0.0, f64::max)
            }
            _ => panic!("{kind}: value type differs"),
        };
        assert!(err <= 1e-6, "{kind}: {err:e}");
    }
    let manifest = json(&tmp.path().join("fw/manifest.json"));
    assert_eq!(manifest["files"].as_object().unwrap().len(), 9);
}

#[test]
fn uniform_tube_transfer_is_one() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        r#"{"schema": 1, "mode": "forward", "area": {"type": "const", "a0": 5, "length": 17.5}, "kinds": ["transfer_mag"]}"#,
    );
    let o = cli(&["forward", "--config", &cfg, "--out", "fw"], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let t = load_spectral(tmp.path().join("fw/transfer_mag.csv")).unwrap();
    assert!(t.real().unwrap().iter().all(|v| (v - 1.0).abs() < 1e-9));
    assert!(!tmp.path().join("fw/green_mag.csv").exists());
}

#[test]
fn exponential_horn_input_impedance_tail() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        r#"{"area": {"type": "exp", "a0": 5, "gamma": 0.1, "length": 17.5}, "kgrid": {"kmin": 1, "kmax": 400, "n": 400}}"#,
    );
    let o = cli(&["forward", "--config", &cfg, "--out", "fw", "--kind", "input_impedance_mag"], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let z = load_spectral(tmp.path().join("fw/input_impedance_mag.csv")).unwrap();
    let tail = *z.real().unwrap().last().unwrap();
    let c_mu = 3.43e4 * 1.2e-3;
    assert!((tail / (c_mu / 5.0) - 1.0).abs() < 1e-3, "{tail}");
}

#[test]
fn manifest_hash_tracks_inputs() {
    let tmp = TempDir::new().unwrap();
    let run = |name: &str, body: &str| -> (String, Value) {
        let cfg = write_config(tmp.path(), &format!("{name}.json"), body);
        let o = cli(&["forward", "--config", &cfg, "--out", name], tmp.path());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let m = json(&tmp.path().join(name).join("manifest.json"));
        (m["input_sha256"].as_str().unwrap().to_string(), m["files"].clone())
    };
    let base = r#"{"area": {"type": "quadratic", "a0": 2, "b": 0.1, "c": 0.01, "length": 10}, "x_points": 501, "kgrid": {"kmin": 0.1, "kmax": 10, "n": 100}, "kinds": ["green_mag", "reflectance_re"]}"#;
    let (h1, f1) = run("a", base);
    let (h2, f2) = run("b", base);
    assert_eq!(h1, h2);
    assert_eq!(f1, f2);
    for (name, changed) in [
        ("c", base.replace("\"c\": 0.01", "\"c\": 0.02")),
        ("d", base.replace("\"n\": 100", "\"n\": 101")),
        ("e", base.replace("{\"area\"", "{\"constants\": {\"c\": 34000, \"mu\": 0.0012}, \"area\"")),
        ("f", base.replace("\"x_points\": 501", "\"x_points\": 503")),
    ] {
        let (h, _) = run(name, &changed);
        assert_ne!(h, h1, "{name}");
    }
}

#[test]
fn lip_pressure_inversion_is_unique() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&cli(&["example", "--out", "ex", "--kind", "lip_pressure_mag"], tmp.path())), 0);
    let o = cli(&["invert", "--out", "inv", "--scenario", "lip_pressure", "ex/lip_pressure_mag.csv"], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let area = area_from_table(&Table::load(tmp.path().join("inv/area.csv")).unwrap()).unwrap();
    let m = ClosedFormModel::default();
    let err = area
        .grid()
        .points()
        .iter()
        .zip(area.values())
        .map(|(&x, &a)| (a / m.area(x) - 1.0).abs())
        .fold(0.0, f64::max);
    assert!(err < 0.03, "{err}");
    let result = json(&tmp.path().join("inv/result.json"));
    assert_eq!(result["status"], "unique");
    assert_eq!(result["certificate"]["passed"], true);
    assert!(tmp.path().join("inv/potential.csv").exists());
    assert!(tmp.path().join("inv/eta.csv").exists());
    assert!(!tmp.path().join("inv/family.json").exists());
}

#[test]
fn transfer_without_side_info_is_a_family() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&cli(&["example", "--out", "ex", "--kind", "transfer_mag"], tmp.path())), 0);
    let cfg = write_config(
        tmp.path(),
        "c.json",
        r#"{"mode": "invert", "data": "ex/transfer_mag.csv", "family_members": [{"a_l": 11.596, "abs_da_l": 0.681}, {"a_l": -1, "abs_da_l": 0.681}]}"#,
    );
    let o = cli(&["invert", "--config", &cfg, "--out", "inv"], tmp.path());
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let family = json(&tmp.path().join("inv/family.json"));
    assert_eq!(family["parameters"], serde_json::json!(["a_l", "abs_da_l"]));
    let members = family["members"].as_array().unwrap();
    assert_eq!(members[0]["certificate"]["passed"], true);
    assert!(members[1]["error"].is_string());
    assert!(tmp.path().join("inv/member_000_area.csv").exists());
    assert!(!tmp.path().join("inv/area.csv").exists());
    assert!(!tmp.path().join("inv/potential.csv").exists());
}

#[test]
fn contradicted_side_info_is_not_a_hard_error() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&cli(&["example", "--out", "ex", "--kind", "transfer_mag"], tmp.path())), 0);
    let cfg = write_config(tmp.path(), "c.json", r#"{"side_info": {"a_l": 11.596, "abs_da_l": 8.0}}"#);
    let o = cli(&["invert", "--config", &cfg, "--out", "inv", "ex/transfer_mag.csv"], tmp.path());
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&tmp.path().join("inv/result.json"))["status"], "inconsistent");
}

#[test]
fn output_impedance_gives_endpoints() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&cli(&["example", "--out", "ex", "--kind", "output_impedance"], tmp.path())), 0);
    let o = cli(&["invert", "--out", "inv", "ex/output_impedance.csv"], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let e = &json(&tmp.path().join("inv/endpoints.json"))["endpoints"];
    assert!((e["a_l"].as_f64().unwrap() / 11.596 - 1.0).abs() < 1e-9);
    assert!((e["da_l"].as_f64().unwrap() / 0.681 - 1.0).abs() < 1e-9);
    let o = cli(&["invert", "--out", "inv", "--scenario", "green", "ex/output_impedance.csv"], tmp.path());
    assert_eq!(code(&o), 1);
}

#[test]
fn bad_inputs_are_hard_errors() {
    let tmp = TempDir::new().unwrap();
    let p = tmp.path();
    fs::write(p.join("bad.csv"), "# kind=lip_pressure_mag\n0.1,0.2\n0.2,0.3\n").unwrap();
    let o = cli(&["invert", "--out", "inv", "bad.csv"], p);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("column header"));

    assert_eq!(code(&cli(&["example", "--out", "ex", "--kind", "green_mag"], p)), 0);
    let o = cli(&["invert", "--out", "inv", "--scenario", "transfer", "ex/green_mag.csv"], p);
    assert_eq!(code(&o), 1);
    let o = cli(&["invert", "--out", "inv", "--kind", "transfer_mag", "ex/green_mag.csv"], p);
    assert_eq!(code(&o), 1);

    for (name, body) in [
        ("unknown.json", r#"{"schema": 1, "colour": "red"}"#),
        ("schema.json", r#"{"schema": 2}"#),
        ("mode.json", r#"{"mode": "invert"}"#),
        ("kinds.json", r#"{"kinds": "some"}"#),
        ("area.json", r#"{"area": {"type": "const", "a0": 5}}"#),
    ] {
        write_config(p, name, body);
        let o = cli(&["forward", "--config", name, "--out", "fw"], p);
        assert_eq!(code(&o), 1, "{name}");
    }
    assert_ne!(code(&cli(&["forward", "--kind", "loudness"], p)), 0);
}

#[test]
fn verify_regenerates_golden_files_and_names_failures() {
    let tmp = TempDir::new().unwrap();
    let p = tmp.path();
    write_config(p, "ok.json", r#"{"mode": "verify", "criteria": [3, 9]}"#);
    let o = cli(&["verify", "--config", "ok.json", "--out", "v"], p);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("regenerated golden files"));
    assert!(stdout(&o).contains("criterion  3 PASS"));
    assert!(p.join("v/golden/transfer_mag.csv").exists());

    let o = cli(&["verify", "--config", "ok.json", "--out", "v"], p);
    assert_eq!(code(&o), 0);
    assert!(!stdout(&o).contains("regenerated"));

    write_config(p, "strict.json", r#"{"criteria": [3, 9], "tolerances": {"c9_relative": 1e-30}}"#);
    let o = cli(&["verify", "--config", "strict.json", "--out", "v"], p);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("criterion  9 FAIL"));
    assert!(stdout(&o).contains("failing criteria: [9]"));
    let report = json(&p.join("v/verify.json"));
    assert_eq!(report["criteria"].as_array().unwrap().len(), 2);
}
