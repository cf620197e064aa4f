use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pseudospec"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn write_matrix(dir: &Path, name: &str, rows: usize, cols: usize, entries: &[[f64; 2]]) -> String {
    let v = serde_json::json!({ "rows": rows, "cols": cols, "entries": entries });
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect();
    (header, rows)
}

fn column<'a>(header: &[String], row: &'a [String], name: &str) -> &'a str {
    &row[header.iter().position(|h| h == name).unwrap()]
}

#[test]
fn identity_is_pseudo_hermitian_with_two_trivial_chains() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_matrix(dir.path(), "id.json", 2, 2, &[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]);
    let out = run(&["analyze", &p]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdict"], "pseudo_hermitian");
    let t = &r["spectral_table"][0];
    assert_eq!(t["E"][0].as_f64().unwrap(), 1.0);
    assert_eq!(t["d"], 2);
    assert_eq!(t["p_list"], serde_json::json!([1, 1]));
}

#[test]
fn scattering_hamiltonian_at_origin_is_one_jordan_block_with_identity_symmetry() {
    // H(0) = (V/2k) [[1, 1], [-1, -1]] with k = 1, V = 2.
    let dir = tempfile::tempdir().unwrap();
    let p = write_matrix(dir.path(), "h0.json", 2, 2, &[[1.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [-1.0, 0.0]]);
    let out_file = dir.path().join("cert.json");
    let out = run(&["analyze", &p, "--json-out", out_file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(out_file).unwrap()).unwrap();
    assert_eq!(r["spectral_table"].as_array().unwrap().len(), 1);
    assert_eq!(r["spectral_table"][0]["p_list"], serde_json::json!([2]));
    let x = &r["witnesses"]["X"]["entries"];
    let want = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]];
    for (got, want) in x.as_array().unwrap().iter().zip(want) {
        for c in 0..2 {
            assert!((got[c].as_f64().unwrap() - want[c]).abs() < 1e-10, "{x}");
        }
    }
}

#[test]
fn unpaired_eigenvalue_is_rejected_and_named() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_matrix(dir.path(), "nh.json", 2, 2, &[[1.0, 1.0], [0.0, 0.0], [0.0, 0.0], [2.0, 0.0]]);
    let out = run(&["analyze", &p]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["verdict"], "not_pseudo_hermitian");
    let cluster = r["pairing"]["violation"]["cluster"].as_u64().unwrap() as usize;
    assert_eq!(r["spectral_table"][cluster]["E"], serde_json::json!([1.0, 1.0]));
    assert!(r["pairing"]["message"].as_str().unwrap().contains("1+1i"));
    assert!(r["witnesses"].is_null());
}

#[test]
fn input_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"rows\": 2,\n  \"cols\": }").unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let ns = write_matrix(dir.path(), "ns.json", 1, 2, &[[1.0, 0.0], [0.0, 0.0]]);
    assert_eq!(run(&["analyze", &ns]).status.code(), Some(3));
    let short = write_matrix(dir.path(), "short.json", 2, 2, &[[1.0, 0.0]]);
    assert_eq!(run(&["analyze", &short]).status.code(), Some(3));
    assert_eq!(run(&["analyze", "/nonexistent/m.json"]).status.code(), Some(3));
    assert_eq!(run(&["analyze"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let ok = write_matrix(dir.path(), "ok.json", 1, 1, &[[1.0, 0.0]]);
    assert_eq!(run(&["analyze", &ok, "--tol-pair", "-1"]).status.code(), Some(3));
    let out = bin().env("PSEUDOSPEC_THREADS", "many").args(["analyze", &ok]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn scatter_sweep_reports_jordan_blocks_inside_the_barrier() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("s.csv");
    let out = run(&[
        "scatter-sweep", "--potential", "rectangular:1,-1,1", "--k", "1.3", "--x-range", "-2,2",
        "--samples", "9", "--steps", "800", "--csv-out", out_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (h, rows) = csv_rows(&std::fs::read_to_string(out_file).unwrap());
    assert_eq!(rows.len(), 9);
    assert_eq!(column(&h, &rows[0], "u11_re"), "1.0");
    for r in &rows {
        let drift: f64 = column(&h, r, "det_drift").parse().unwrap();
        assert!(drift < 1e-9);
        let x: f64 = column(&h, r, "x").parse().unwrap();
        let v: f64 = column(&h, r, "v").parse().unwrap();
        assert_eq!(v, if x.abs() <= 1.0 { 1.0 } else { 0.0 });
        assert_eq!(column(&h, r, "verdict"), "pseudo_hermitian");
        assert_eq!(column(&h, r, "p_lists"), if v > 0.0 { "2" } else { "1,1" });
    }
}

#[test]
fn sampled_potential_matches_rectangular_in_the_interior() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("v.csv");
    std::fs::write(&samples, "x,v\n-3,0.5\n3,0.5\n").unwrap();
    let spec = format!("sampled:{}", samples.display());
    let a = run(&["scatter-sweep", "--potential", &spec, "--k", "1", "--x-range", "-1,1", "--samples", "5", "--steps", "400"]);
    let b = run(&[
        "scatter-sweep", "--potential", "rectangular:0.5,-3,3", "--k", "1", "--x-range", "-1,1",
        "--samples", "5", "--steps", "400",
    ]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let (h, ra) = csv_rows(&String::from_utf8(a.stdout).unwrap());
    let (_, rb) = csv_rows(&String::from_utf8(b.stdout).unwrap());
    for (x, y) in ra.iter().zip(&rb) {
        for c in ["u11_re", "u11_im", "u12_re", "u12_im"] {
            let (p, q): (f64, f64) = (column(&h, x, c).parse().unwrap(), column(&h, y, c).parse().unwrap());
            assert!((p - q).abs() < 1e-12, "{c}");
        }
    }

    std::fs::write(&samples, "x,v\n0,oops\n").unwrap();
    let bad = run(&["scatter-sweep", "--potential", &spec, "--k", "1", "--x-range", "-1,1"]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn model_sweep_tracks_regimes_and_exceptional_points() {
    let out = run(&[
        "model-sweep", "--lambdas", "1,4,9", "--varpi-range", "0.5,3.5", "--samples", "7", "--compare-closed-form",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (h, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let want = [
        ("0.5", "none_real", false),
        ("1.0", "2_real", true),
        ("1.5", "2_real", false),
        ("2.0", "4_real", true),
        ("2.5", "4_real", false),
        ("3.0", "6_real", true),
        ("3.5", "6_real", false),
    ];
    assert_eq!(rows.len(), want.len());
    for (r, (w, regime, ep)) in rows.iter().zip(want) {
        assert_eq!(column(&h, r, "varpi"), w);
        assert_eq!(column(&h, r, "regime"), regime);
        assert_eq!(column(&h, r, "exceptional"), ep.to_string());
        assert_eq!(column(&h, r, "verdict"), "pseudo_hermitian");
        assert_eq!(column(&h, r, "p_lists").contains('2'), ep, "{w}");
        let dev: f64 = column(&h, r, "dev_x_transported").parse().unwrap();
        assert!(dev < 1e-9, "{w}: {dev}");
    }
}

#[test]
fn sweeps_are_deterministic_across_thread_counts() {
    let args = ["model-sweep", "--lambdas", "1,4", "--varpi-range", "0.5,2.5", "--samples", "9"];
    let one = bin().env("PSEUDOSPEC_THREADS", "1").args(args).output().unwrap();
    let auto = bin().env("PSEUDOSPEC_THREADS", "0").args(args).output().unwrap();
    let four = bin().env("PSEUDOSPEC_THREADS", "4").args(args).output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, auto.stdout);
    assert_eq!(one.stdout, four.stdout);
}
