use std::path::Path;

use gl_distinction::chartab::parse_table_csv;
use gl_distinction::cli::run;
use tempfile::TempDir;

fn gldist(args: &[&str], out: &Path) -> i32 {
    let mut full = vec!["gldist", "--out", out.to_str().unwrap()];
    full.extend_from_slice(args);
    run(full)
}

fn body(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with("# threads")).collect()
}

fn write_spec(dir: &TempDir, name: &str, json: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_owned()
}

const DISTINGUISHED: &str =
    r#"{"p":3,"q0":3,"base":"Unramified","e_T0":1,"f_T0":1,"m":3,"theta_exp":26,"xi_t":{"num":0,"den":1}}"#;

#[test]
fn chartab_of_the_trivial_group() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t.csv");
    assert_eq!(gldist(&["chartab", "1", "2"], &out), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# gldist: "));
    assert!(text.contains("# command: chartab 1 2\n"));
    let t = parse_table_csv(&text).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.class_sizes, vec![1]);
}

#[test]
fn chartab_csv_parses_back() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t.csv");
    assert_eq!(gldist(&["chartab", "2", "3"], &out), 0);
    let t = parse_table_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 8);
    assert_eq!(t.class_sizes.iter().sum::<u64>(), 48);
}

#[test]
fn gow_survey_rows() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("gow.csv");
    assert_eq!(gldist(&["gow", "3", "2"], &out), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 20);
    let selfdual: Vec<_> = rows.iter().filter(|r| r[3] == "true").collect();
    assert_eq!(selfdual.len(), 2);
    assert!(selfdual.iter().all(|r| r[4] == "1"));
    assert!(rows.iter().filter(|r| r[3] == "false").all(|r| r[4] == "0"));
    assert!(text.contains("# summary: supercuspidals=20 sigma_selfdual=2 max_dim_all_irreducibles=1"));
}

#[test]
fn reports_are_deterministic_and_appended() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(gldist(&["gow", "2", "3"], &a), 0);
    assert_eq!(gldist(&["--threads", "1", "gow", "2", "3"], &b), 0);
    let (ta, tb) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_eq!(body(&ta), body(&tb));
    assert!(tb.contains("# threads: 1\n"));
    assert_eq!(gldist(&["gow", "2", "3"], &a), 0);
    assert_eq!(std::fs::read_to_string(&a).unwrap(), format!("{ta}{ta}"));
}

#[test]
fn mirabolic_rows() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("m.csv");
    assert_eq!(gldist(&["mirabolic", "2", "3"], &out), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("r,s,alpha,beta,dim\n"));
    assert!(text.contains("1,1,0,0,1\n"));
    assert!(text.contains("2,0,0,0,0\n"));
    assert!(text.contains("2,0,1,0,0\n"));
}

#[test]
fn levi_rows() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("l.csv");
    assert_eq!(gldist(&["levi", "2", "3"], &out), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("orbit_rep,character,dim,selfdual,distinction_dim\n"));
    assert!(text.contains("# summary: supercuspidals=3 selfdual=1"));
    assert_eq!(gldist(&["levi", "3", "3"], &out), 2);
}

#[test]
fn verdict_and_twist_scan() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "d.json", DISTINGUISHED);
    let out = dir.path().join("v.json");
    assert_eq!(gldist(&["verdict", &spec], &out), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["outcome"], "Distinguished");
    assert_eq!(v["rule"], "unramified-epsilon0-trivial");
    assert_eq!(v["invariants"]["TT0"], "Unramified");
    assert_eq!(v["invariants"]["delta0"], "Trivial");
    assert_eq!(v["manifest"]["seed"], "0");

    let out = dir.path().join("t.json");
    assert_eq!(gldist(&["twist-scan", &spec], &out), 0);
    let t: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(t["omega_twist_exists"], true);
    assert_eq!(t["witness_outcome"], "OmegaDistinguished");
    assert_eq!(t["exhaustive_scan_agrees"], true);

    // --ell overrides the file; ell = 2 always gives the char-two rule
    let out = dir.path().join("v2.json");
    // theta = 104 has order 7 in F_729^x, so it is admissible for ell = 2
    let odd = write_spec(&dir, "o.json", &DISTINGUISHED.replace("\"theta_exp\":26", "\"theta_exp\":104"));
    assert_eq!(gldist(&["--ell", "2", "verdict", &odd], &out), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["rule"], "char-two");
    assert_eq!(v["manifest"]["ell"], "2");
    assert_eq!(gldist(&["--ell", "2", "verdict", &spec], &out), 2);
}

#[test]
fn bad_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x");
    let unknown = write_spec(&dir, "u.json", &DISTINGUISHED.replace("\"m\":3", "\"m\":3,\"colour\":1"));
    assert_eq!(gldist(&["verdict", &unknown], &out), 2);
    let invalid = write_spec(&dir, "i.json", &DISTINGUISHED.replace("\"f_T0\":1", "\"f_T0\":2"));
    assert_eq!(gldist(&["verdict", &invalid], &out), 2);
    let omega = write_spec(&dir, "w.json", &DISTINGUISHED.replace("\"num\":0,\"den\":1", "\"num\":1,\"den\":2"));
    assert_eq!(gldist(&["twist-scan", &omega], &out), 2);
    assert_eq!(gldist(&["verdict", "/nonexistent/spec.json"], &out), 2);
    assert_eq!(gldist(&["chartab", "2", "6"], &out), 2);
    assert_eq!(gldist(&["--budget-group", "100", "chartab", "3", "4"], &out), 2);
    assert_eq!(gldist(&["--budget-group", "0", "chartab", "1", "2"], &out), 2);
    assert_eq!(gldist(&["frobnicate"], &out), 2);
    assert_eq!(gldist(&["chartab", "2"], &out), 2);
    assert_eq!(gldist(&["--colour", "red", "chartab", "1", "2"], &out), 2);
    assert!(!out.exists());
    assert_eq!(run(["gldist", "--help"]), 0);
}

#[test]
fn selftest_passes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("s.txt");
    assert_eq!(gldist(&["--seed", "5", "selftest", "--trials", "20"], &out), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# seed: 5\n"));
    assert!(text.lines().filter(|l| l.starts_with('[')).all(|l| l.starts_with("[PASS]")));
    assert!(text.contains("[PASS] verdict grid"));
}
