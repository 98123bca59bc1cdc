use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;

use ramlab::manifest::Expr;
use ramlab::{parse_manifest, run_manifest, to_json, RunOptions};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ramlab"))
}

fn manifests() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../manifests")
}

fn run(manifest: &Path, out: &Path, extra: &[&str]) -> Output {
    bin().arg("--manifest").arg(manifest).arg("--out").arg(out).args(extra).output().expect("binary runs")
}

fn write(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("m.ramlab");
    std::fs::write(&path, text).unwrap();
    path
}

fn json(out: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

#[test]
fn worked_example_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&manifests().join("worked_example.ramlab"), dir.path(), &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(dir.path());
    assert_eq!(v["schema"], "ramlab-report/1");
    let tasks = v["tasks"].as_array().unwrap();
    assert_eq!(tasks[0]["result"]["r"], "4");
    assert_eq!(tasks[0]["result"]["s"], "5");
    assert_eq!(tasks[1]["result"]["ep"], "1");
    assert_eq!(tasks[2]["result"]["ep"], "1");
    let b = &tasks[3]["result"];
    assert_eq!(b["M"], "20");
    // 2^(M-1)·|G| + (2p+1)^M·ep·|G|
    let n: u128 = (1u128 << 19) * 5 + 11u128.pow(20) * 5;
    assert_eq!(b["N"], n.to_string().as_str());
}

#[test]
fn first_example_sweep_csv() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "p = 5; ring x, y; sheaf g = y/x^5 bang h = x; ss zero; ss linefield h = x omega = (0, 1);\n\
         task sweep f = y/(1 + x) perturb = x^3 at = (0, 0) xi = (0, 1) level = 3;\n",
    );
    let out = dir.path().join("out");
    let o = run(&m, &out, &["--format", "csv"]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(out.join("task-1-sweep.csv")).unwrap();
    // Swan conductors of the table for N = 3 at p = 5, cells in the documented order.
    let expect = "s,rho,sw,dimtot,dim_phi,status\n\
                  0,0,0,1,-4,ok\n\
                  0,generic,4,5,-4,ok\n\
                  generic,0,2,3,-2,ok\n\
                  generic,generic,4,5,-2,ok\n";
    assert_eq!(csv, expect);
    assert!(!out.join("report.json").exists());
    assert!(!out.join("report.txt").exists());
}

#[test]
fn json_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let m = manifests().join("first_example.ramlab");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(run(&m, &a, &["--parallel", "1", "--format", "json"]).status.success());
    assert!(run(&m, &b, &["--parallel", "4", "--format", "json"]).status.success());
    let ja = std::fs::read(a.join("report.json")).unwrap();
    assert_eq!(ja, std::fs::read(b.join("report.json")).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(v["tasks"][3]["result"]["n_lower"], "5");
    assert_eq!(v["tasks"][2]["result"]["verdict"], "transverse");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let empty = write(dir.path(), "p = 7; ring u, v;\n");
    let o = run(&empty, &out, &[]);
    assert!(o.status.success());
    assert_eq!(json(&out)["tasks"].as_array().unwrap().len(), 0);

    // the curve lies inside the divisor: the task fails, the others still run
    let failing = write(dir.path(), "p = 5; ring x, y; sheaf g = y/x^5 bang h = x;\ntask swan curve = x at = (0, 0);\ntask swan curve = y - x^2 at = (0, 0);\n");
    let o = run(&failing, &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["tasks"][0]["status"], "error");
    assert_eq!(v["tasks"][0]["error"]["code"], "curve-in-divisor");
    assert_eq!(v["tasks"][1]["status"], "ok");
    assert_eq!(v["status"], "error");

    let bad = write(dir.path(), "p = 6; ring x, y;\n");
    let o = run(&bad, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":1:5: semantic error: p = 6 is not prime"), "{err}");
}

#[test]
fn depth_bound_auto_needs_a_source() {
    let m = parse_manifest("p = 5; ring x, y; task depth-bound group = 5 ix = 1 ep = auto r = 4 s = 5;").unwrap();
    let r = run_manifest(&m, &RunOptions::default());
    assert_eq!(r.tasks[0].result.as_ref().unwrap_err().code, "missing-dependency");
}

#[test]
fn seeded_runs_are_reproducible() {
    let m = parse_manifest(
        "p = 7; ring x, y; sheaf g = y/x^7 bang h = x; ss zero; ss linefield h = x omega = (0, 1);\n\
         task sweep f = y/(1 + x) perturb = x^3 at = (0, 0) xi = (0, 1) level = 3;\n\
         task phi-dim f = y at = (0, 0);",
    )
    .unwrap();
    let opts = RunOptions { seed: Some(11), ..RunOptions::default() };
    let a = to_json(&run_manifest(&m, &opts));
    assert_eq!(a, to_json(&run_manifest(&m, &opts)));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    // the sampled slice agrees with the generic slice
    let slices = v["tasks"][0]["result"]["slices"].as_array().unwrap();
    assert_eq!(slices.len(), 3);
    assert_eq!(slices[2]["dim_phi"], slices[1]["dim_phi"]);
    let phi = &v["tasks"][1]["result"];
    assert_eq!(phi["sampled_check"]["dim_phi"], phi["dim_phi"]);
}

#[test]
fn sample_manifests_round_trip() {
    for entry in std::fs::read_dir(manifests()).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        let m = parse_manifest(&text).unwrap();
        assert_eq!(parse_manifest(&m.to_string()).unwrap(), m);
    }
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(0u64..20).prop_map(Expr::Int), prop::sample::select(vec!["x", "y", "c"]).prop_map(|v| Expr::Var(v.into()))];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner, 0u32..6).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
        ]
    })
}

proptest! {
    #[test]
    fn printed_manifests_reparse_to_the_same_object(g in expr(), h in expr(), f in expr(), a in expr(), b in expr()) {
        let text = format!(
            "p = 11; ring x, y; params c; sheaf g = {g} bang h = {h};\nss linefield h = {h} omega = ({a}, {b});\n\
             task phi-dim f = {f} at = (c, 1);\ntask ep ideal = ({a}, {b}, {f}) radical = ({g});\n"
        );
        let m = parse_manifest(&text).unwrap();
        prop_assert_eq!(&m.sheaf.as_ref().unwrap().g, &g);
        prop_assert_eq!(&parse_manifest(&m.to_string()).unwrap(), &m);
    }
}
