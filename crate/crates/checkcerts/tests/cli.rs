//! End-to-end tests driving the checkcerts binary.

use std::path::Path;
use std::process::{Command, Output};

use certlint_testkit::{compliant_ca, compliant_crl, compliant_host, compliant_robot};

fn checkcerts(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_checkcerts"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    name.to_string()
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn aggregate_run_over_compliant_cas_exits_zero_with_one_plan() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "ca1.pem", &compliant_ca().serial(1).key_seed(1).build_pem());
    write(dir.path(), "ca2.pem", &compliant_ca().serial(2).key_seed(2).build_pem());
    let output = checkcerts(&["--suite", "ca", "--aggregate", "ca1.pem", "ca2.pem"], dir.path());
    assert_eq!(output.status.code(), Some(0), "{}", String::from_utf8_lossy(&output.stderr));
    let stdout = stdout_of(&output);
    // One TAP document: 2 subjects x (load + 6 rules).
    assert!(stdout.starts_with("1..14\n"), "{stdout}");
    assert_eq!(stdout.matches("1..").count(), 1);
    assert!(!stdout.contains("not ok"));
}

#[test]
fn md5_certificate_fails_with_exit_one_and_tap_line() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.pem", &compliant_ca().md5_signature().build_pem());
    let output = checkcerts(&["--suite", "ca", "--aggregate", "bad.pem"], dir.path());
    assert_eq!(output.status.code(), Some(1));
    let stdout = stdout_of(&output);
    assert!(stdout.contains("not ok"), "{stdout}");
    assert!(stdout.contains("GCP-2.2"), "{stdout}");
    assert!(stdout.contains("# signature algorithm is md5WithRSAEncryption"), "{stdout}");
}

#[test]
fn no_arguments_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let output = checkcerts(&[], dir.path());
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.to_lowercase().contains("usage"), "{stderr}");
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.pem", &compliant_ca().build_pem());
    let output = checkcerts(&["--suite", "nonsense", "a.pem"], dir.path());
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn multi_certificate_files_get_indexed_subject_ids() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = format!(
        "{}{}",
        compliant_ca().serial(1).key_seed(3).build_pem(),
        compliant_ca().serial(0).key_seed(4).build_pem()
    );
    write(dir.path(), "bundle.pem", &bundle);
    let output = checkcerts(&["--suite", "ca", "bundle.pem"], dir.path());
    assert_eq!(output.status.code(), Some(1));
    let stdout = stdout_of(&output);
    assert!(stdout.contains("bundle.pem\\#0"), "{stdout}");
    assert!(stdout.contains("bundle.pem\\#1"), "{stdout}");
    assert!(stdout.contains("EXTRA-SERIAL bundle.pem\\#1"), "{stdout}");
}

#[test]
fn unreadable_file_fails_load_but_does_not_crash() {
    let dir = tempfile::tempdir().unwrap();
    let output = checkcerts(&["--suite", "ca", "missing.pem"], dir.path());
    assert_eq!(output.status.code(), Some(1));
    let stdout = stdout_of(&output);
    assert!(stdout.contains("not ok 1 - LOAD missing.pem"), "{stdout}");
}

#[test]
fn tap_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.pem", &compliant_ca().serial(0).build_pem());
    write(dir.path(), "b.pem", &compliant_ca().md5_signature().build_pem());
    let first = checkcerts(&["--suite", "ca", "--suite", "rat", "a.pem", "b.pem"], dir.path());
    let second = checkcerts(&["--suite", "ca", "--suite", "rat", "a.pem", "b.pem"], dir.path());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.status.code(), second.status.code());
}

#[test]
fn suite_order_is_canonical_regardless_of_flag_order() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.pem", &compliant_ca().build_pem());
    let forward = checkcerts(&["--suite", "ca", "--suite", "rat", "a.pem"], dir.path());
    let reversed = checkcerts(&["--suite", "rat", "--suite", "ca", "a.pem"], dir.path());
    assert_eq!(forward.stdout, reversed.stdout);
    let stdout = stdout_of(&forward);
    let ca_at = stdout.find("# suite: ca").unwrap();
    let rat_at = stdout.find("# suite: rat").unwrap();
    assert!(ca_at < rat_at);
}

#[test]
fn crl_suite_lints_crls() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "good.pem", &compliant_crl().build_pem());
    write(dir.path(), "bad.pem", &compliant_crl().md5_signature().build_pem());
    let output = checkcerts(&["--suite", "crl", "good.pem", "bad.pem"], dir.path());
    assert_eq!(output.status.code(), Some(1));
    let stdout = stdout_of(&output);
    assert!(stdout.contains("CRL-MD5 bad.pem\\#0"), "{stdout}");
    assert!(stdout.contains("ok 1 - LOAD good.pem"), "{stdout}");
}

#[test]
fn summary_counts_certificates_not_crls() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "ca.pem", &compliant_ca().build_pem());
    write(dir.path(), "crl.pem", &compliant_crl().build_pem());
    let output = checkcerts(
        &["--suite", "ca", "--suite", "crl", "--output", "summary", "ca.pem", "crl.pem"],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(0));
    let stdout = stdout_of(&output);
    assert!(stdout.contains("certificates checked:  1"), "{stdout}");
    assert!(!stdout.contains("crl.pem"), "{stdout}");
}

#[test]
fn corpus_suite_reports_duplicate_serials() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.pem", &compliant_ca().serial(7).key_seed(10).build_pem());
    write(dir.path(), "b.pem", &compliant_ca().serial(7).key_seed(11).build_pem());
    let output = checkcerts(&["--suite", "corpus", "a.pem", "b.pem"], dir.path());
    assert_eq!(output.status.code(), Some(1));
    let stdout = stdout_of(&output);
    assert!(stdout.contains("CORPUS-SERIAL-UNIQ"), "{stdout}");
    // Both members of the collision are reported.
    assert!(stdout.contains("a.pem\\#0"), "{stdout}");
    assert!(stdout.contains("b.pem\\#0"), "{stdout}");
}

#[test]
fn level_filter_should_skips_must_rules() {
    let dir = tempfile::tempdir().unwrap();
    // Violates only GCP-2.2 (MUST NOT): filtered out by --level-filter should.
    write(dir.path(), "md5.pem", &compliant_ca().md5_signature().build_pem());
    // Violates EXTRA-SERIAL (SHOULD NOT): still fails under the filter.
    write(dir.path(), "zero.pem", &compliant_ca().serial(0).build_pem());

    let output = checkcerts(&["--suite", "ca", "--level-filter", "should", "md5.pem"], dir.path());
    assert_eq!(output.status.code(), Some(0), "{}", stdout_of(&output));
    assert!(!stdout_of(&output).contains("GCP-2.2"));

    let output = checkcerts(&["--suite", "ca", "--level-filter", "should", "zero.pem"], dir.path());
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn detect_mode_routes_by_class() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = format!(
        "{}{}{}",
        compliant_ca().key_seed(20).build_pem(),
        compliant_host("node.test-grid.example").key_seed(21).build_pem(),
        compliant_robot().key_seed(22).build_pem()
    );
    write(dir.path(), "mixed.pem", &bundle);
    let output = checkcerts(&["--detect", "mixed.pem"], dir.path());
    assert_eq!(output.status.code(), Some(0), "{}", stdout_of(&output));
    let stdout = stdout_of(&output);
    assert!(stdout.contains("# suite: ca"), "{stdout}");
    assert!(stdout.contains("# suite: host"), "{stdout}");
    assert!(stdout.contains("# suite: robot"), "{stdout}");
    assert!(!stdout.contains("# suite: person"), "{stdout}");
}

#[test]
fn summary_json_and_csv_exports() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.pem", &compliant_ca().serial(0).key_seed(30).build_pem());
    write(dir.path(), "b.pem", &compliant_ca().key_seed(31).build_pem());
    let output = checkcerts(
        &[
            "--suite",
            "ca",
            "--output",
            "summary",
            "--summary",
            "report.json",
            "--csv",
            "points.csv",
            "a.pem",
            "b.pem",
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(1));
    let stdout = stdout_of(&output);
    assert!(!stdout.contains("1.."), "summary mode must not emit TAP: {stdout}");
    assert!(stdout.contains("certificates checked:  2"), "{stdout}");
    assert!(stdout.contains("Serial number"), "{stdout}");

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(json["totals"]["checked"], 2);
    assert_eq!(json["totals"]["fully_passing"], 1);
    assert_eq!(json["by_cause"][0]["cause"], "Serial number");

    let csv = std::fs::read_to_string(dir.path().join("points.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "subject_id,t_days,not_before_iso8601,failures");
    assert_eq!(lines.clone().count(), 2);
    assert!(lines.any(|l| l.starts_with("a.pem#0,") && l.ends_with(",1")), "{csv}");
}

#[test]
fn both_mode_prints_tap_then_summary() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.pem", &compliant_ca().build_pem());
    let output = checkcerts(&["--suite", "ca", "--output", "both", "a.pem"], dir.path());
    assert_eq!(output.status.code(), Some(0));
    let stdout = stdout_of(&output);
    let plan_at = stdout.find("1..7").expect("TAP plan present");
    let totals_at = stdout.find("certificates checked:").expect("summary present");
    assert!(plan_at < totals_at);
}

#[test]
fn summary_includes_fit_line_when_dates_vary() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = format!(
        "{}{}{}",
        compliant_ca().key_seed(40).not_before(2004, 1, 1).build_pem(),
        compliant_ca().key_seed(41).not_before(2006, 1, 1).serial(0).build_pem(),
        compliant_ca().key_seed(42).not_before(2008, 1, 1).build_pem(),
    );
    write(dir.path(), "set.pem", &bundle);
    let output = checkcerts(&["--suite", "ca", "--output", "summary", "set.pem"], dir.path());
    let stdout = stdout_of(&output);
    assert!(stdout.contains("slope_per_day="), "{stdout}");
    assert!(stdout.contains("year 2004"), "{stdout}");
    assert!(stdout.contains("year 2006"), "{stdout}");
}

#[test]
fn blacklist_flag_condemns_listed_key() {
    let dir = tempfile::tempdir().unwrap();
    let builder = compliant_ca().key_seed(50);
    write(dir.path(), "weak.pem", &builder.build_pem());
    let fingerprint =
        certlint::x509::parse_certificate(&builder.build_der()).unwrap().spki_fingerprint();
    write(dir.path(), "weak.txt", &format!("# blacklist\n{fingerprint}\n"));
    let output = checkcerts(
        &["--suite", "rat", "--blacklist", "weak.txt", "weak.pem"],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout_of(&output).contains("RAT-DEBIAN"), "{}", stdout_of(&output));

    // Missing blacklist file is a configuration error.
    let output = checkcerts(
        &["--suite", "rat", "--blacklist", "absent.txt", "weak.pem"],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn config_file_overrides_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "strict.conf",
        "# strict floors\nmin_modulus_bits = 4096\nrecommended_modulus_bits = 4096\n",
    );
    write(dir.path(), "a.pem", &compliant_ca().key_seed(60).build_pem());
    // 2048-bit key passes defaults but fails the 4096 floor.
    let output = checkcerts(&["--suite", "rat", "a.pem"], dir.path());
    assert_eq!(output.status.code(), Some(0));
    let output = checkcerts(&["--suite", "rat", "--config", "strict.conf", "a.pem"], dir.path());
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout_of(&output).contains("modulus 2048 < 4096"), "{}", stdout_of(&output));

    write(dir.path(), "broken.conf", "no_such_key = 1\n");
    let output = checkcerts(&["--suite", "rat", "--config", "broken.conf", "a.pem"], dir.path());
    assert_eq!(output.status.code(), Some(2));
}
