use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn linea(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linea"))
        .args(args)
        .env_remove("LINEA_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, bytes).unwrap();
    path
}

#[test]
fn classify_output_is_exact() {
    let out = linea(&["classify", "--lines", "3", "--dim", "4"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), r#"{"verdict":"NotKoszul","reason":"Prop 5.3"}"#);
    let v = stdout_json(&linea(&["classify", "--lines", "7", "--dim", "7"]));
    assert_eq!(v, json!({"verdict": "Unknown"}));
}

#[test]
fn hilbert_by_formula_and_by_ideal() {
    let v = stdout_json(&linea(&["hilbert", "--lines", "4", "--dim", "3", "--max-deg", "2"]));
    assert_eq!(v["values"], json!([1, 4, 10]));
    for method in ["gb", "linalg"] {
        let v = stdout_json(&linea(&["hilbert", "--lines", "4", "--dim", "3", "--max-deg", "2", "--method", method]));
        assert_eq!(v["values"], json!([1, 4, 10]), "{method}");
    }
    let v = stdout_json(&linea(&["hilbert", "--named", "four_p3_special", "--max-deg", "2"]));
    assert_eq!(v["values"], json!([1, 4, 9]));
}

#[test]
fn froberg_for_six_lines() {
    let v = stdout_json(&linea(&["froberg", "--lines", "6", "--dim", "6", "--terms", "14"]));
    assert_eq!(v["first_negative"], json!(12));
    assert_eq!(v["coefficients"].as_array().unwrap()[..5], [json!(1), json!(7), json!(31), json!(115), json!(385)]);
}

#[test]
fn bundled_filtration_verifies() {
    let out = linea(&["filtration", "verify", "--arrangement", "five_p6", "--seeds", "1"]);
    let v = stdout_json(&out);
    assert_eq!(v["accepted"], json!(true));
    assert_eq!(v["runs"][0]["ideals"], json!(57));
    let pretty = linea(&["--pretty", "filtration", "verify", "--arrangement", "five_p6", "--seeds", "1"]);
    assert!(String::from_utf8_lossy(&pretty.stdout).contains("57 ideals verified"));
}

#[test]
fn bad_input_exits_two_and_names_the_token() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", br#"{"n": 2, "generators": ["x0*x1", "x0^2 + q3"]}"#);
    let out = linea(&["hilbert", "--ideal", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("q3"), "{}", stderr(&out));

    let broken = write(dir.path(), "broken.json", b"{\"n\": 2,");
    let out = linea(&["hilbert", "--ideal", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = linea(&["classify", "--lines", "0", "--dim", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = linea(&["hilbert", "--lines", "4", "--dim", "x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("'x'"));
    let out = linea(&["filtration", "verify", "--arrangement", "seven_p2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("seven_p2"));
}

#[test]
fn arrangement_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = linea(&["--seed", "4", "arrangement", "--lines", "3", "--dim", "4"]);
    assert!(out.status.success());
    let arr = write(dir.path(), "arr.json", &out.stdout);
    let out = linea(&["--seed", "4", "arrangement", "--lines", "3", "--dim", "4", "--emit", "ideal"]);
    let ideal = write(dir.path(), "ideal.json", &out.stdout);

    let a = arr.to_str().unwrap();
    let i = ideal.to_str().unwrap();
    let from_arr = stdout_json(&linea(&["hilbert", "--arrangement", a, "--method", "gb"]));
    let from_ideal = stdout_json(&linea(&["hilbert", "--ideal", i, "--method", "gb"]));
    let direct = stdout_json(&linea(&["--seed", "4", "hilbert", "--lines", "3", "--dim", "4", "--method", "gb"]));
    assert_eq!(from_arr, from_ideal);
    assert_eq!(from_arr, direct);

    let b1 = stdout_json(&linea(&["betti", "--arrangement", a]));
    let b2 = stdout_json(&linea(&["betti", "--ideal", i]));
    assert_eq!(b1["entries"], b2["entries"]);
    assert_eq!(b1["pdim"], json!(4));
}

#[test]
fn constructed_filtration_verifies_and_rejects_elsewhere() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["filtration", "construct", "--lines", "4", "--dim", "5"];
    let filt = write(dir.path(), "f.json", &linea(&args).stdout);
    let mut arr_args = args.to_vec();
    arr_args.extend(["--emit", "arrangement"]);
    let arr = write(dir.path(), "a.json", &linea(&arr_args).stdout);

    let f = filt.to_str().unwrap();
    let ok = linea(&["filtration", "verify", "--arrangement", arr.to_str().unwrap(), "--filtration", f]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));

    // the same filtration on other lines
    let other = write(dir.path(), "o.json", &linea(&["--seed", "9", "arrangement", "--lines", "4", "--dim", "5"]).stdout);
    let rejected = linea(&["filtration", "verify", "--arrangement", other.to_str().unwrap(), "--filtration", f]);
    assert_eq!(rejected.status.code(), Some(1));
    assert_eq!(stdout_json_any(&rejected)["accepted"], json!(false));

    let wrong_space = write(dir.path(), "w.json", &linea(&["arrangement", "--lines", "4", "--dim", "6"]).stdout);
    let mismatch = linea(&["filtration", "verify", "--arrangement", wrong_space.to_str().unwrap(), "--filtration", f]);
    assert_eq!(mismatch.status.code(), Some(2));
}

fn stdout_json_any(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn output_is_deterministic() {
    let args = ["betti", "--lines", "3", "--dim", "4"];
    let first = linea(&args);
    assert_eq!(first.stdout, linea(&args).stdout);
    let seeded = ["--seed", "5", "arrangement", "--lines", "2", "--dim", "3"];
    let by_flag = linea(&seeded);
    let by_env = Command::new(env!("CARGO_BIN_EXE_linea"))
        .args(["arrangement", "--lines", "2", "--dim", "3"])
        .env("LINEA_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(by_flag.stdout, by_env.stdout);
    assert_ne!(by_flag.stdout, linea(&["arrangement", "--lines", "2", "--dim", "3"]).stdout);
    let table = ["table", "--max-lines", "6", "--max-dim", "6"];
    assert_eq!(linea(&table).stdout, linea(&table).stdout);
}
