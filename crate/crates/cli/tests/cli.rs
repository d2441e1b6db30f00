use std::process::Command;

fn chevcheck() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chevcheck"))
}

#[test]
fn composite_prime_is_a_config_error() {
    let out = chevcheck().args(["--primes", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
}

#[test]
fn unknown_suite_is_a_config_error() {
    let out = chevcheck().args(["--suite", "plots"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn machine_report_is_line_json_and_stable() {
    let run = || {
        chevcheck()
            .args(["--primes", "3", "--suite", "lemmas", "--suite", "existence", "--format", "machine"])
            .output()
            .unwrap()
    };
    let a = run();
    assert!(a.status.success());
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("{\"kind\":\"config\""));
    assert!(lines.last().unwrap().starts_with("{\"kind\":\"summary\""));
    assert!(lines[1..lines.len() - 1].iter().all(|l| l.contains("\"suite\":\"lemmas\"") || l.contains("\"suite\":\"existence\"")));
    assert_eq!(a.stdout, run().stdout);
}

#[test]
fn env_mirrors_flags_and_flags_win() {
    let out = chevcheck()
        .env("CHEVCHECK_SUITE", "lemmas")
        .env("CHEVCHECK_PRIMES", "4")
        .args(["--primes", "2", "--format", "machine"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().contains("\"primes\":[2]"));
    assert!(text.contains("\"suite\":\"lemmas\"") && !text.contains("\"suite\":\"existence\""));
}

#[test]
fn writes_report_file() {
    let dir = std::env::temp_dir().join(format!("chevcheck-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    let out = chevcheck().args(["--primes", "2", "--suite", "systems", "--out"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.contains("representation V2"));
    std::fs::remove_dir_all(&dir).unwrap();
}
