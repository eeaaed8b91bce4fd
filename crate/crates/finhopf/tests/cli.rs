use std::process::Command;

fn finhopf(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_finhopf")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn strip_timing(json: &str) -> String {
    json.lines().filter(|l| !l.contains("elapsed_ms")).collect::<Vec<_>>().join("\n")
}

#[test]
fn catalog_lists_every_fixture_with_an_anchor() {
    let (code, out) = finhopf(&["list-fixtures"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines.len() >= 12);
    for want in ["jordan-p3", "jordan-p5", "laestry-p3-g1", "laestry-p3-g2", "general-t2", "laestry-p3-q-1", "betti-jordan"] {
        assert!(lines.iter().any(|l| l.starts_with(want) && l.len() > want.len() + 10), "{want}");
    }
}

#[test]
fn jordan_run_is_reproducible() {
    let (c1, a) = finhopf(&["run", "jordan-p3"]);
    let (c2, b) = finhopf(&["run", "jordan-p3"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(strip_timing(&a), strip_timing(&b));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], "finhopf.report.v1");
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn extension_levels() {
    for level in ["exact", "cleft", "split"] {
        let (code, out) = finhopf(&["verify-extension", "--config", "jordan-p3", "--level", level]);
        assert_eq!(code, 0, "{level}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let names: Vec<String> = v["tasks"][1]["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_string()).collect();
        assert_eq!(names.iter().any(|n| n.contains("(e)")), level != "exact");
        assert_eq!(names.iter().any(|n| n == "𝓈 algebra map"), level == "split");
    }
}

#[test]
fn twist_check_at_q_minus_one() {
    let (code, out) = finhopf(&["twist-check", "--config", "laestry-p3-q-1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tasks"][0]["dims"]["R_q"], 81);
    assert_eq!(v["tasks"][0]["dims"]["(R_1)_σ"], 81);
}

#[test]
fn betti_methods_agree_and_budget_is_inconclusive() {
    let (code, out) = finhopf(&["betti", "--algebra", "betti-jordan", "--method", "both", "--max-degree", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("bar = minimal"));
    let (code, _) = finhopf(&["betti", "--algebra", "betti-truncated", "--method", "bar", "--budget-mb", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn presentation_round_trip_through_betti() {
    let dir = std::env::temp_dir().join(format!("finhopf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let pres = dir.join("jordan.toml");
    let (code, text) = finhopf(&["emit-presentation", "--config", "jordan-p3"]);
    assert_eq!(code, 0);
    std::fs::write(&pres, text).unwrap();
    let csv = dir.join("b.csv");
    let (code, _) = finhopf(&["betti", "--algebra", pres.to_str().unwrap(), "--max-degree", "3", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.contains("minimal,2,3"), "{table}");
}

#[test]
fn bad_config_fails_with_position() {
    let dir = std::env::temp_dir().join(format!("finhopf-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("bad.toml");
    std::fs::write(&p, "[scenario]\nid = 3\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_finhopf")).args(["run", p.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
