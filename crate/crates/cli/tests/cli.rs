use std::path::Path;
use std::process::{Command, Output};

fn qknit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qknit")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn verify_passes() {
    let out = qknit(&["verify", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn table1_matches_closed_forms() {
    let out = qknit(&["table1", "--n-max", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for n in 1..=4u32 {
        let no_comm = 16u64.pow(n);
        let optimal = (2u64.pow(n + 1) - 1).pow(2);
        let lowe = (2u64.pow(n + 1) + 1).pow(2);
        let parallel = format!("{n},parallel,{no_comm},{no_comm},{},{optimal}", no_comm.min(lowe));
        let arbitrary = format!("{n},arbitrary,{no_comm},{no_comm},{no_comm},{optimal}");
        assert!(text.lines().any(|l| l == parallel), "missing {parallel}\n{text}");
        assert!(text.lines().any(|l| l == arbitrary), "missing {arbitrary}\n{text}");
    }
}

#[test]
fn table2_golden() {
    let out = qknit(&["table2"]);
    assert_eq!(
        stdout(&out),
        "circuit,cut,communication,overhead\n\
         fig1a,2_wires,false,256\n\
         fig1a,3_cnot,false,729\n\
         fig1b,2_wires,false,256\n\
         fig1b,1_cnot,false,9\n\
         fig1a,2_wires,true,49\n\
         fig1a,3_cnot,true,225\n\
         fig1b,2_wires,true,49\n\
         fig1b,1_cnot,true,9\n"
    );
}

#[test]
fn tradeoff_rejects_bad_range() {
    assert_eq!(qknit(&["tradeoff", "--n-max", "0.5"]).status.code(), Some(2));
    assert_eq!(qknit(&["tradeoff", "--n-max", "3", "--step", "0"]).status.code(), Some(2));
    let out = qknit(&["tradeoff", "--n-max", "2"]);
    assert_eq!(stdout(&out), "n,no_comm,comm_lowe,comm_optimal\n1,16.000000,25.000000,9.000000\n2,16.000000,9.000000,7.000000\n");
}

#[test]
fn missing_circuit_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"circuit_path":"absent.json","cut_ids":[],"method":"lo_peng"}"#);
    let out = qknit(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("absent.json") && err.contains("circuit_path"), "{err}");
}

#[test]
fn unknown_config_field_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"circuit":"fig1b","cut_ids":[],"method":"lo_peng","shotz":3}"#);
    let out = qknit(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("shotz"));
}

#[test]
fn seeded_run_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"circuit":"fig1b","cut_ids":["w0","w1"],"method":"lo_peng","mode":"monte_carlo","shots":3000,"repetitions":2}"#,
    );
    let args = ["run", "--config", &cfg, "--seed", "42", "--deterministic"];
    let a = qknit(&args);
    let b = qknit(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("# qknit run config_sha256="));
    assert!(text.lines().next().unwrap().ends_with(" seed=42"));
    assert_eq!(text.lines().filter(|l| l.starts_with("lo_peng,")).count(), 2);
    let other = qknit(&["run", "--config", &cfg, "--seed", "43", "--deterministic"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn ghz_teleport_exact_json() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.json");
    let cfg = write_config(
        dir.path(),
        "c.json",
        &format!(
            r#"{{"circuit":"ghz4","cut_ids":["w1","w2"],"method":"locc_teleport","mode":"exact","output":{:?}}}"#,
            out_path.to_str().unwrap()
        ),
    );
    let out = qknit(&["run", "--config", &cfg, "--json", "--deterministic"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let row = &v["rows"][0];
    assert_eq!(row["mode"], "exact");
    assert!((row["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(row["kappa"].as_f64().unwrap(), 9.0);
    assert!(v.get("generated_unix").is_none());
}

#[test]
fn circuit_file_relative_to_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bell.json"),
        r#"{"n_qubits":2,"ops":[{"type":"gate","name":"H","targets":[0]},{"type":"gate","name":"CNOT","targets":[0,1]}]}"#,
    )
    .unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"circuit_path":"bell.json","cut_ids":[],"method":"lo_peng","mode":"exact"}"#);
    let out = qknit(&["run", "--config", &cfg, "--deterministic"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert_eq!(&row[..5], ["lo_peng", "0", "exact", "1", "0"]);
    let value: f64 = row[5].parse().unwrap();
    assert!((value - 1.0).abs() < 1e-12, "{text}");
}
