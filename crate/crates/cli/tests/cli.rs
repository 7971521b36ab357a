use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_hsmult");

fn jobs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../jobs"))
}

fn run(args: &[&str], job: &Path, out: Option<&Path>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).arg("--job").arg(job);
    if let Some(o) = out {
        cmd.arg("--out").arg(o);
    }
    cmd.output().expect("binary runs")
}

fn write_job(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bezout_job_reports_cusp_pair_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bezout"], &jobs().join("bezout_cusp_pair.job"), Some(dir.path()));
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for line in ["e0 = 6", "c = 2", "d = 2", "t = 2", "slack = 0"] {
        assert!(s.contains(line), "missing `{}` in\n{}", line, s);
    }
    let js: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(js["exit_code"], 0);
    assert_eq!(js["verdicts"][0]["witness"]["e0"], 6);
}

#[test]
fn hs_job_gives_dimension_and_multiplicity() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["hs"], &jobs().join("hs_cusp.job"), Some(dir.path()));
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("dim = 1") && s.contains("e0 = 2"), "{}", s);
    let csv = std::fs::read_to_string(dir.path().join("hs.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,length"));
    // l(A/(y^2-x^3, m^n)) = 2n - 1 for n >= 2
    assert!(csv.lines().any(|l| l == "5,9"), "{}", csv);
}

#[test]
fn regseq_reports_non_regular_with_exit_zero() {
    let o = run(&["regseq"], &jobs().join("regseq_zero_divisor_form.job"), None);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("regular = false") && s.contains("witness_n = 3"), "{}", s);
}

#[test]
fn homology_table_of_cusp_pair_stabilizes_at_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["homology"], &jobs().join("cusp_pair.job"), Some(dir.path()));
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("l_homology.csv")).unwrap();
    let l1: Vec<u64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect::<Vec<_>>())
        .filter(|f| f[1] == "1")
        .map(|f| f[2].parse().unwrap())
        .collect();
    assert_eq!(l1.last(), Some(&2));
    assert!(l1.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn verify_all_holds_on_cusp_pair() {
    let o = run(&["verify-all"], &jobs().join("cusp_pair.job"), None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAILS"));
}

#[test]
fn reports_are_byte_identical() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let job = jobs().join("non_cm.job");
    let a = run(&["chi"], &job, Some(d1.path()));
    let b = run(&["chi"], &job, Some(d2.path()));
    assert_eq!(a.stdout, b.stdout);
    for f in ["report.txt", "summary.json", "chi_bound_l1_by_n.csv"] {
        assert_eq!(std::fs::read(d1.path().join(f)).unwrap(), std::fs::read(d2.path().join(f)).unwrap(), "{}", f);
    }
}

#[test]
fn empty_table_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = hsmult::Outcome {
        command: hsmult::Command::Homology,
        input: vec![],
        values: vec![],
        verdicts: vec![],
        skipped: vec![],
        tables: vec![hsmult::Table {
            name: "empty".into(),
            header: vec!["n", "i", "length", "N_window"],
            rows: vec![],
        }],
    };
    hsmult::output::write_outputs(dir.path(), &outcome).unwrap();
    assert_eq!(std::fs::read_to_string(dir.path().join("empty.csv")).unwrap(), "n,i,length,N_window\n");
}

#[test]
fn empty_range_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(dir.path(), "j.job", "[ring]\nvars = x, y\n[sequence]\na = x\n");
    let o = Command::new(BIN).args(["homology", "--nmax", "0", "--job"]).arg(&job).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("syntax.job", "[ring]\nvars x\n"),
        ("undeclared.job", "[ring]\nvars = x, y\n[sequence]\na = z\n"),
        ("section.job", "[rings]\nvars = x\n"),
        ("mismatch.job", "[ring]\nvars = x, y\n[sequence]\na = x\n[command]\nname = chi\n"),
    ];
    for (name, text) in cases {
        let job = write_job(dir.path(), name, text);
        let out = dir.path().join(name.replace(".job", ""));
        let o = run(&["hs"], &job, Some(&out));
        assert_eq!(o.status.code(), Some(1), "{}", name);
        let js: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
        assert_eq!(js["status"], "error", "{}", name);
    }
    let o = run(&["hs"], &dir.path().join("missing.job"), None);
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(BIN).args(["nonsense", "--job", "x"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn field_override_changes_the_answer() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(dir.path(), "j.job", "[ring]\nvars = x, y\n[sequence]\nf = y^2 - x^3\ng = y^2 + x^3\n");
    let o = Command::new(BIN).args(["bezout", "--field", "Fp:101", "--job"]).arg(&job).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("F_101") || s.contains("101"), "{}", s);
    assert!(s.contains("e0 = 6"));
    // in characteristic 2 the two curves coincide, so there is nothing to check
    let o = Command::new(BIN).args(["bezout", "--field", "Fp:2", "--job"]).arg(&job).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parameters"), "{:?}", o);
}

#[test]
fn failing_verdict_is_not_an_input_error() {
    // a bad job is exit 1, a false property is still exit 0 for regseq
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(dir.path(), "j.job", "[ring]\nvars = x, y\n[sequence]\na = x^2, x*y\n");
    let o = run(&["regseq"], &job, None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("regular = false"));
}
