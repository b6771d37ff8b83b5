use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn emergence(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emergence"))
        .args(args)
        .env_remove("EMERGENCE_JOBS")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn write_column(dir: &Path, name: &str, header: &str, values: &[&str]) -> String {
    let path = dir.join(name);
    fs::write(&path, format!("{header}\n{}\n", values.join("\n"))).unwrap();
    path.display().to_string()
}

#[test]
fn constant_column_is_inert() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_column(dir.path(), "flat.csv", "x", &["4.5"; 30]);
    let out = emergence(&["measure", "-i", &input]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["mean"]["E"], 0.0);
    assert_eq!(v["mean"]["S"], 1.0);
    assert_eq!(v["mean"]["C"], 0.0);
    assert_eq!(v["mean"]["H"], 1.0);
}

#[test]
fn worked_string_information() {
    let dir = tempfile::tempdir().unwrap();
    let values: Vec<&str> = ["0", "0", "0", "1"].repeat(25);
    let input = write_column(dir.path(), "w.csv", "bits", &values);
    let out = emergence(&["measure", "-i", &input, "--beta", "2", "--symbols"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let e = v["columns"][0]["measures"]["E"].as_f64().unwrap();
    assert!((e - 0.811).abs() < 1e-3, "E = {e}");
}

#[test]
fn outputs_are_reproducible_and_documented() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &[
            "rbn-sweep",
            "--n",
            "12",
            "--k",
            "1,3",
            "--replicates",
            "4",
            "--transient",
            "20",
            "--record",
            "40",
            "--seed",
            "5",
        ],
        &[
            "eca-profile",
            "--rules",
            "30,110",
            "--width",
            "32",
            "--transient",
            "16",
            "--record",
            "64",
            "--bits",
            "1,2",
            "--replicates",
            "2",
        ],
        &[
            "traffic",
            "--densities",
            "0.2,0.7",
            "--warmup",
            "20",
            "--horizon",
            "100",
            "--seed",
            "2",
        ],
        &[
            "eco",
            "occupancy",
            "--species",
            "5,10",
            "--iterations",
            "60",
        ],
    ];
    for (k, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let prefix = dir.path().join(format!("run{k}_{rep}"));
            let mut full = args.to_vec();
            let p = prefix.display().to_string();
            full.extend(["--out", &p]);
            let jobs = if rep == 0 { "1" } else { "3" };
            full.extend(["--jobs", jobs]);
            let out = emergence(&full);
            assert!(
                out.status.success(),
                "{args:?}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            let manifest = json(&prefix.with_extension("manifest.json"));
            assert_eq!(manifest["schema_version"], 1);
            let mut files = vec![manifest["json"].as_str().unwrap().to_string()];
            for t in manifest["tables"].as_array().unwrap() {
                files.push(t["path"].as_str().unwrap().to_string());
            }
            outputs.push(
                files
                    .iter()
                    .map(|f| fs::read(f).unwrap())
                    .collect::<Vec<_>>(),
            );
        }
        assert_eq!(outputs[0], outputs[1], "{args:?} differs between runs");
    }
}

#[test]
fn error_classes_have_distinct_exit_codes() {
    assert_eq!(
        emergence(&["eca-profile", "--rules", "300"]).status.code(),
        Some(4)
    );
    let domain = emergence(&[
        "eco",
        "analytic",
        "--component",
        "LN",
        "--s",
        "1",
        "--a",
        "0.5",
        "--h",
        "0.5",
    ]);
    assert_eq!(domain.status.code(), Some(5));
    let dir = tempfile::tempdir().unwrap();
    let bad = write_column(dir.path(), "bad.csv", "x", &["1", "two"]);
    let parse = emergence(&["measure", "-i", &bad]);
    assert_eq!(parse.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("row 3"));
    let missing = emergence(&["measure", "-i", "/nonexistent/table.csv"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn eco_pipeline_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let lake = dir.path().join("lake.csv");
    let out = emergence(&["eco", "synth", "--days", "365"]);
    assert!(out.status.success());
    fs::write(&lake, &out.stdout).unwrap();
    let lake = lake.display().to_string();

    let prefix = dir.path().join("report").display().to_string();
    assert!(emergence(&["eco", "report", "-i", &lake, "-o", &prefix])
        .status
        .success());
    let summary = fs::read_to_string(format!("{prefix}.summary.csv")).unwrap();
    assert!(summary.starts_with("component,E,S,C,H"));
    let bio = summary.lines().find(|l| l.starts_with("Bio,")).unwrap();
    assert!(bio.ends_with("very-high,blue"), "{bio}");

    let same = emergence(&[
        "eco",
        "autopoiesis",
        "-i",
        &lake,
        "--system",
        "PD,PCy",
        "--environment",
        "PD,PCy",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&same.stdout).unwrap();
    assert_eq!(v["a"], 1.0);

    let zone = emergence(&[
        "eco",
        "autopoiesis",
        "-i",
        &lake,
        "--system",
        "PD,PCy,PGA,PCh",
        "--environment",
        "PL,PT,PCd,PpH",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&zone.stdout).unwrap();
    assert_eq!(v["color"], "blue");
}

#[test]
fn traffic_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("grid.toml");
    fs::write(
        &cfg,
        "n_h = 4\nn_v = 4\nblock_len = 8\ndensities = [1.0]\nwarmup = 5\nhorizon = 50\nseed = 11\n",
    )
    .unwrap();
    let prefix = dir.path().join("t").display().to_string();
    let out = emergence(&[
        "traffic",
        "-c",
        &cfg.display().to_string(),
        "--controller",
        "self-org",
        "-o",
        &prefix,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let curves = fs::read_to_string(format!("{prefix}.csv")).unwrap();
    let row: Vec<&str> = curves.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], "0");
    assert_eq!(
        json(Path::new(&format!("{prefix}.manifest.json")))["seed"],
        11
    );

    fs::write(&cfg, "lanes = 3\n").unwrap();
    let bad = emergence(&["traffic", "-c", &cfg.display().to_string()]);
    assert_eq!(bad.status.code(), Some(3));
}
