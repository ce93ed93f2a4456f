use std::process::{Command, Output};

fn sigma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigma"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn tri_state_exit_codes() {
    assert_eq!(code(&sigma(&["sigma1", "--group", "zwrz", "--char", "eta1"])), 0);
    assert_eq!(code(&sigma(&["sigma2", "--group", "zwrz", "--char", "theta1"])), 3);
    assert_eq!(code(&sigma(&["sigma2", "--group", "tri_c2", "--char", "tri_chi"])), 4);
    assert_eq!(code(&sigma(&["sigma1", "--group", "nope", "--char", "x"])), 1);
    assert_eq!(code(&sigma(&["find-cert", "--group", "lamp2", "--char", "theta"])), 4);
}

#[test]
fn json_report_is_stable() {
    let args = ["sigma2", "--group", "zwrz", "--char", "[1, 1]", "--json"];
    let a = sigma(&args);
    let b = sigma(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("\"schema\": \"sigma-report/1\""));
    assert!(text.contains("\"rule\": \"W3\""));
}

#[test]
fn workspace_file_and_certificate_round_trip() {
    let dir = std::env::temp_dir().join(format!("sigma-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ws = dir.join("w.sigws");
    std::fs::write(
        &ws,
        "group L = wreath(base=cyclic(2), top=Z(1), orbits=[{size=inf, stab=Z(0), stabmap=[]}])\nchar c on L = [1]\n",
    )
    .unwrap();
    let ws = ws.to_str().unwrap();
    let o = sigma(&["sigma1", "--workspace", ws, "--group", "L", "--char", "c"]);
    assert_eq!(code(&o), 3);
    // No pair data: validate reports fp = false, sigma2 refuses.
    let o = sigma(&["validate", "--workspace", ws, "--group", "L", "--json"]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("\"fp\": false"));
    assert_eq!(
        code(&sigma(&["sigma2", "--workspace", ws, "--group", "L", "--char", "c"])),
        1
    );

    let o = sigma(&["find-cert", "--group", "zwrz", "--char", "eta1", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let cert = v["result"]["search"]["certificate"].to_string();
    assert_eq!(
        code(&sigma(&[
            "certify", "--group", "zwrz", "--char", "eta1", "--cert", &cert
        ])),
        0
    );
    let bad = r#"{"t":"z","t_letter":"z","rewrites":[{"x":"h","w":"h"}]}"#;
    assert_eq!(
        code(&sigma(&["certify", "--group", "zwrz", "--char", "eta1", "--cert", bad])),
        3
    );
}

#[test]
fn ball_evidence_and_catalog() {
    assert_eq!(
        code(&sigma(&["ball-evidence", "--group", "lamp2", "--char", "theta"])),
        3
    );
    assert_eq!(code(&sigma(&["ball-evidence", "--group", "zwrz", "--char", "eta1"])), 0);
    let o = sigma(&["catalog"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("group lamp2 = wreath("));
    assert_eq!(code(&sigma(&["reid", "--group", "zwrz"])), 0);
    assert_eq!(code(&sigma(&["omega1", "--group", "zwrz"])), 0);
}
