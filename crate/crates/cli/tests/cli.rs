use std::path::Path;
use std::process::{Command, Output};

use becsim::config::{parse_experiment, ExperimentConfig};
use becsim::output::Table;
use becsim::presets::preset;
use becsim_core::resonance::bessel_zero;

fn becsim(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_becsim")).args(args).arg("--out").arg(out).output().unwrap()
}

fn read_table(path: &Path) -> Table {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    Table { header, rows }
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

fn rows_where<'a>(t: &'a Table, cond: &'a [(&str, f64)]) -> impl Iterator<Item = &'a Vec<f64>> + 'a {
    let idx: Vec<(usize, f64)> = cond.iter().map(|(c, v)| (t.header.iter().position(|h| h == c).unwrap(), *v)).collect();
    t.rows.iter().filter(move |r| idx.iter().all(|(i, v)| r[*i] == *v))
}

#[test]
fn fig1_preset_writes_csv_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = becsim(&["run", "fig1"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t = read_table(&dir.path().join("fig1.csv"));
    let mut expected = vec!["t".to_string()];
    expected.extend((-8..=8).map(|mu| format!("P_mu[{mu}]")));
    expected.extend(["jz_mean", "jz_var"].map(String::from));
    assert_eq!(&t.header[..expected.len()], &expected[..]);
    assert_eq!(t.rows[0][0], 0.0);
    assert_eq!(t.rows[0][1], 1.0);
    assert_eq!(t.rows.last().unwrap()[0], 100.0);

    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig1.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["preset"], "fig1");
    assert_eq!(meta["tolerance"], 1e-10);
    let resolved = parse_experiment(&meta["config"].to_string()).unwrap();
    assert_eq!(resolved, preset("fig1").unwrap());
}

#[test]
fn runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(becsim(&["run", "fig1", "--threads", "2"], a.path()).status.success());
    assert!(becsim(&["run", "fig1"], b.path()).status.success());
    for f in ["fig1.csv", "fig1.meta.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn interaction_only_revival() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "revival.json",
        r#"{
            "name": "revival",
            "system": {"kind": "two_well", "particles": 10, "kappa": 1.0, "modulation": "none"},
            "initial_state": {"kind": "ps", "phi": 0.3},
            "t_max": 6.283185307179586,
            "output_step": 0.5
        }"#,
    );
    let out = becsim(&["run", &cfg], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t = read_table(&dir.path().join("revival.csv"));
    let (first, last) = (&t.rows[0], t.rows.last().unwrap());
    assert_eq!(last[0], 2.0 * std::f64::consts::PI);
    for k in 1..=11 {
        assert!((first[k] - last[k]).abs() < 1e-8);
    }
    // In between, the populations are untouched too: Ĵz² commutes with Ĵz.
    assert!(t.rows.iter().all(|r| (r[1] - first[1]).abs() < 1e-8));
}

#[test]
fn tolerance_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    assert!(becsim(&["run", "fig1", "--tol", "1e-8"], dir.path()).status.success());
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig1.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["tolerance"], 1e-8);
    let cfg: ExperimentConfig = serde_json::from_value(meta["config"].clone()).unwrap();
    assert_eq!(cfg.tolerance, 1e-8);
}

#[test]
fn config_errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(
        dir.path(),
        "unknown.json",
        r#"{"name": "x", "system": {"kind": "two_well", "particles": 4, "kappa": 1, "modulation": "none"},
            "initial_state": {"kind": "number", "mu": 0}, "t_max": 1, "output_step": 0.1, "colour": "red"}"#,
    );
    let zero_step = write_config(
        dir.path(),
        "step.json",
        r#"{"name": "x", "system": {"kind": "two_well", "particles": 4, "kappa": 1, "modulation": "none"},
            "initial_state": {"kind": "number", "mu": 0}, "t_max": 1, "output_step": 0}"#,
    );
    let lattice = write_config(
        dir.path(),
        "lattice.json",
        r#"{"name": "x", "system": {"kind": "lattice", "sites": 2, "particles": 2, "kappa": 1, "delta": 1},
            "initial_state": {"kind": "mott"}, "t_max": 1, "output_step": 0.1}"#,
    );
    for args in [
        vec!["run", unknown.as_str()],
        vec!["run", zero_step.as_str()],
        vec!["run", "fig9"],
        vec!["run", lattice.as_str()],
        vec!["run", "fig1", "--tol", "2"],
        vec!["lattice", unknown.as_str()],
        vec!["scan", lattice.as_str()],
    ] {
        let out = becsim(&args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("becsim: "), "{args:?}");
    }
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn numerical_failure_exits_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    // Two sidebands cannot carry the weight of J_n(14/3).
    let cfg = write_config(
        dir.path(),
        "truncated.json",
        r#"{"name": "truncated",
            "system": {"kind": "two_well", "particles": 4, "kappa": 1, "modulation": "energy", "delta0": 0.25, "eps1": 14, "omega": 3},
            "initial_state": {"kind": "number", "mu": -2}, "t_max": 1, "output_step": 0.1,
            "frame": "transformed", "n_max": 2}"#,
    );
    let out = becsim(&["run", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("numerical failure"));
}

#[test]
fn frequency_scan_finds_fig1_resonance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "scan.json",
        r#"{"name": "fig1_scan",
            "system": {"kind": "two_well", "particles": 16, "kappa": 1, "modulation": "energy", "delta0": 0.25, "eps1": 14, "omega": 3},
            "omega": {"start": 1, "stop": 6, "count": 11}}"#,
    );
    let out = becsim(&["scan", &cfg], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t = read_table(&dir.path().join("fig1_scan.csv"));
    assert_eq!(t.header, becsim::scan::TWO_WELL_COLUMNS);
    let hit: Vec<_> = rows_where(&t, &[("omega", 3.0), ("mu", -8.0), ("n", 5.0)]).collect();
    assert_eq!(hit.len(), 1);
    assert_eq!(hit[0][4], 0.0);
    assert!(hit[0][7].is_infinite());
    let omegas = t.column("omega").unwrap();
    assert!(omegas.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn drive_scan_records_bessel_sign_change() {
    let dir = tempfile::tempdir().unwrap();
    // μ = -7, n = 4 is detuned by -κ at ω = 3κ; its coupling flips sign across the first zero of J4.
    let z = bessel_zero(4, 1).unwrap();
    let cfg = write_config(
        dir.path(),
        "ratio.json",
        &format!(
            r#"{{"name": "ratio",
                "system": {{"kind": "two_well", "particles": 16, "kappa": 1, "modulation": "energy", "delta0": 0.25, "eps1": 14, "omega": 3}},
                "drive_ratio": [{}, {}], "threshold": 1e-4}}"#,
            z - 0.2,
            z + 0.2
        ),
    );
    assert!(becsim(&["scan", &cfg], dir.path()).status.success());
    let t = read_table(&dir.path().join("ratio.csv"));
    let u: Vec<f64> = rows_where(&t, &[("mu", -7.0), ("n", 4.0)]).map(|r| r[7]).collect();
    assert_eq!(u.len(), 2);
    assert!(u[0] * u[1] < 0.0, "{u:?}");
}

#[test]
fn lattice_scan_and_run() {
    let dir = tempfile::tempdir().unwrap();
    let system = r#"{"kind": "lattice", "sites": 3, "particles": 3, "kappa": 1, "delta": 0.25, "eps1": 1.8, "omega": 1}"#;
    let scan = write_config(dir.path(), "lscan.json", &format!(r#"{{"name": "lscan", "system": {system}, "omega": [1, 2]}}"#));
    assert!(becsim(&["scan", &scan], dir.path()).status.success());
    let t = read_table(&dir.path().join("lscan.csv"));
    assert_eq!(t.header, becsim::scan::LATTICE_COLUMNS);
    let mott: Vec<_> = rows_where(&t, &[("omega", 1.0), ("p", 1.0), ("q", 1.0), ("n", -1.0)]).collect();
    assert_eq!(mott.len(), 1);
    assert_eq!(mott[0][5], 0.0);

    let run = write_config(
        dir.path(),
        "lrun.json",
        &format!(r#"{{"name": "lrun", "system": {system}, "initial_state": {{"kind": "mott"}}, "t_max": 5, "output_step": 0.5}}"#),
    );
    let out = becsim(&["lattice", &run], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t = read_table(&dir.path().join("lrun.csv"));
    assert_eq!(t.header[1..4], ["n_mean[0]", "n_mean[1]", "n_mean[2]"]);
    assert_eq!(t.rows[0][7], 0.0);
    for r in &t.rows {
        assert!((r[1] + r[2] + r[3] - 3.0).abs() < 1e-9);
    }
    let out = becsim(&["lattice", "fig1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fig4_reports_nearest_exact_resonance() {
    let dir = tempfile::tempdir().unwrap();
    assert!(becsim(&["run", "fig4"], dir.path()).status.success());
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig4.meta.json")).unwrap()).unwrap();
    let best = &meta["nearest_resonance"];
    assert_eq!((best["omega"].as_f64(), best["n"].as_i64(), best["detuning"].as_f64()), (Some(22.0), Some(-2), Some(0.0)));
    let scan = read_table(&dir.path().join("fig4.scan.csv"));
    let omegas = scan.column("omega").unwrap();
    assert_eq!((omegas[0], *omegas.last().unwrap()), (16.0, 24.0));
    let t = read_table(&dir.path().join("fig4.csv"));
    let px = t.header.iter().position(|h| h == "Px_mu[7]").unwrap();
    assert!((t.rows[0][px] - 1.0).abs() < 1e-12);
}

#[test]
fn fuzz_seeds_stay_valid() {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    for (dir, parse) in [
        ("parse_experiment", (|s: &str| parse_experiment(s).is_ok()) as fn(&str) -> bool),
        ("parse_scan", |s: &str| becsim::config::parse_scan(s).is_ok()),
    ] {
        for entry in std::fs::read_dir(corpus.join(dir)).unwrap() {
            let path = entry.unwrap().path();
            let ok = parse(&std::fs::read_to_string(&path).unwrap());
            let expect_ok = !path.file_name().unwrap().to_string_lossy().starts_with("unknown");
            assert_eq!(ok, expect_ok, "{}", path.display());
        }
    }
}
