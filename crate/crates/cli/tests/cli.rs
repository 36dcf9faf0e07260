use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use algebroid_cli::{
    catalog_lines, parse_scenario, run, Overrides, Status, CATALOG, SCHEMA_VERSION,
};
use serde_json::Value;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn algebroid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algebroid"))
        .args(args)
        .env_remove("ALGEBROID_TOL")
        .output()
        .expect("binary runs")
}

fn check_json(file: &Path, extra: &[&str], out: &str) -> (i32, Value) {
    let json = tmp(out);
    let mut args = vec![
        "check",
        file.to_str().unwrap(),
        "--quiet",
        "--json",
        json.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = algebroid(&args);
    let code = o.status.code().expect("exit code");
    let report =
        serde_json::from_str(&std::fs::read_to_string(&json).expect("report written")).unwrap();
    (code, report)
}

fn check_named<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no {} in report", name))
}

fn write_scenario(name: &str, text: &str) -> PathBuf {
    let p = tmp(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn catalog_is_listed_in_stable_order() {
    let o = algebroid(&["list-checks"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() >= 12);
    assert_eq!(lines, catalog_lines());
    assert!(lines.iter().any(|l| l.starts_with("im-cocycle → ")));
    assert!(lines
        .iter()
        .any(|l| l.starts_with("closed-one-form-lagrangian → ")));
    let mut names: Vec<&str> = CATALOG.iter().map(|c| c.name).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), CATALOG.len());
    assert_eq!(algebroid(&["list-checks"]).stdout, text.as_bytes());
}

#[test]
fn schema_file_matches_the_reader() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/scenario.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(schema["properties"]["schema"]["const"], SCHEMA_VERSION);
    let listed: Vec<&str> = schema["properties"]["checks"]["items"]["enum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let catalog: Vec<&str> = CATALOG.iter().map(|c| c.name).collect();
    assert_eq!(listed, catalog);
}

#[test]
fn so3_structure_passes_its_checks() {
    let (code, report) = check_json(
        &scenario("so3.scn"),
        &["--checks", "axioms,triangular,im-cocycle"],
        "so3.json",
    );
    assert_eq!(code, 0);
    assert_eq!(report["outcome"], "pass");
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["axioms", "triangular", "im-cocycle"]);
    for c in report["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "pass");
        assert!(c["residuals"].as_array().unwrap().is_empty());
    }
}

#[test]
fn broken_jacobi_lists_the_jacobiator() {
    let (code, report) = check_json(
        &scenario("broken-jacobi.scn"),
        &["--checks", "axioms"],
        "broken.json",
    );
    assert_eq!(code, 1);
    let c = check_named(&report, "axioms");
    assert_eq!(c["status"], "fail");
    let r = &c["residuals"][0];
    assert_eq!(r["label"], "Jacobiator(e1,e2,e3)");
    assert_eq!(r["value"], "[1, 0, 0]");
}

#[test]
fn broken_axioms_fail_dependent_checks() {
    let (code, report) = check_json(
        &scenario("broken-jacobi.scn"),
        &["--checks", "canonical-form"],
        "broken-dep.json",
    );
    assert_eq!(code, 1);
    assert_eq!(check_named(&report, "canonical-form")["status"], "fail");
}

#[test]
fn obstruction_is_content_not_failure() {
    let (code, report) = check_json(
        &scenario("logsympl.scn"),
        &["--checks", "nonlinearizability"],
        "logsympl.json",
    );
    assert_eq!(code, 0);
    let c = check_named(&report, "nonlinearizability");
    assert_eq!(c["status"], "pass");
    assert_eq!(c["verdict"], "obstruction");
    let singular = c["details"]["singular_samples"].as_array().unwrap();
    assert_eq!(singular.len(), 5);
    assert!(singular
        .iter()
        .all(|p| p.as_str().unwrap().starts_with("(0,")));
}

#[test]
fn reports_are_byte_stable() {
    let file = scenario("plane.scn");
    let a = tmp("stable-a.json");
    let b = tmp("stable-b.json");
    for p in [&a, &b] {
        let o = algebroid(&[
            "check",
            file.to_str().unwrap(),
            "--quiet",
            "--json",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    assert!(!String::from_utf8(x).unwrap().contains("seconds"));
}

#[test]
fn in_process_runs_order_checks_by_catalog() {
    let text = std::fs::read_to_string(scenario("plane.scn")).unwrap();
    let mut world = parse_scenario(&text).unwrap();
    world
        .select(&["coisotropic".into(), "axioms".into(), "triangular".into()])
        .unwrap();
    let report = run(&world, &Overrides::default());
    let names: Vec<&str> = report.checks.iter().map(|c| c.name).collect();
    assert_eq!(names, ["axioms", "triangular", "coisotropic"]);
    assert_eq!(report.exit_code(), 0);
    let again = run(&world, &Overrides::default());
    assert_eq!(report.to_json(), again.to_json());
}

#[test]
fn schema_violations_exit_2() {
    let bad_json = write_scenario("bad.scn", "{ \"schema\": 1, ");
    assert_eq!(
        algebroid(&["check", bad_json.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let base = std::fs::read_to_string(scenario("logsympl.scn")).unwrap();
    let cases = [
        (
            "unknown-field.scn",
            base.replace("\"description\"", "\"descripton\""),
        ),
        (
            "unknown-check.scn",
            base.replace("\"triangular\"", "\"triangle\""),
        ),
        (
            "bad-expr.scn",
            base.replace("\"value\": \"x\"", "\"value\": \"w\""),
        ),
        (
            "bad-version.scn",
            base.replace("\"schema\": 1", "\"schema\": 2"),
        ),
        ("bad-index.scn", base.replace("[1, 2]", "[1, 3]")),
        (
            "missing-bivector.scn",
            base.replace("\"bivector\"", "\"unused\""),
        ),
    ];
    for (name, text) in cases {
        let p = write_scenario(name, &text);
        let o = algebroid(&["check", p.to_str().unwrap()]);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{}: {}",
            name,
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let o = algebroid(&[
        "check",
        scenario("logsympl.scn").to_str().unwrap(),
        "--checks",
        "moser",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("moser needs"));
}

#[test]
fn numeric_overrides() {
    let file = scenario("moser-area.scn");
    let (code, report) = check_json(&file, &["--grid", "32"], "moser-32.json");
    assert_eq!(code, 1);
    let c = check_named(&report, "moser");
    assert_eq!(c["details"]["grid"], 32);
    assert!(c["residuals"][0]["value"].as_f64().unwrap() > 1e-6);
    let (code, _) = check_json(&file, &["--tol", "1e-7"], "moser-tight.json");
    assert_eq!(code, 1);
}

#[test]
fn tolerance_falls_back_to_the_environment() {
    let text = std::fs::read_to_string(scenario("poincare.scn"))
        .unwrap()
        .replace("\"tolerance\": 1e-8,", "");
    let p = write_scenario("poincare-env.scn", &text);
    let path = p.to_str().unwrap();
    assert_eq!(
        algebroid(&["check", path, "--quiet"]).status.code(),
        Some(0)
    );
    let o = Command::new(env!("CARGO_BIN_EXE_algebroid"))
        .args(["check", path, "--quiet"])
        .env("ALGEBROID_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    // the command line wins over the environment
    let o = Command::new(env!("CARGO_BIN_EXE_algebroid"))
        .args(["check", path, "--quiet", "--tol", "1e-6"])
        .env("ALGEBROID_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn minimal_lagrangian_verdicts() {
    let (code, report) = check_json(
        &scenario("cosymplectic-space.scn"),
        &["--checks", "cosymplectic,minimal-lagrangian"],
        "cosym.json",
    );
    assert_eq!(code, 0);
    let c = check_named(&report, "minimal-lagrangian");
    assert_eq!(c["details"]["x-axis"]["minimal"], true);
    assert_eq!(c["details"]["z-axis"]["lagrangian"], false);
    let cs = check_named(&report, "cosymplectic");
    assert_eq!(cs["details"]["reeb"][0], "[0, 0, 1]");
}

#[test]
fn shipped_scenarios_run_end_to_end() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "scn"))
        .collect();
    files.sort();
    assert!(files.len() >= 3);
    for f in files {
        let start = Instant::now();
        let o = algebroid(&["check", f.to_str().unwrap(), "--quiet"]);
        let expected = if f.ends_with("broken-jacobi.scn") {
            1
        } else {
            0
        };
        assert_eq!(o.status.code(), Some(expected), "{}", f.display());
        assert!(start.elapsed() < Duration::from_secs(60), "{}", f.display());
    }
}

#[test]
fn status_labels() {
    assert_eq!(Status::Diverged.label(), "DIVERGED");
    let text = std::fs::read_to_string(scenario("linearize.scn"))
        .unwrap()
        .replace("\"c + a^2\"", "\"1 + c\"");
    let world = parse_scenario(&text).unwrap();
    let report = run(&world, &Overrides::default());
    assert_eq!(report.checks[0].status, Status::Diverged);
    assert_eq!(report.exit_code(), 0);
}

fn moser_with_dump(name: &str, dump: &Path) -> PathBuf {
    let text = std::fs::read_to_string(scenario("moser-area.scn"))
        .unwrap()
        .replace(
            "\"grid\": 64,",
            &format!("\"grid\": 16, \"dump\": {:?},", dump.to_str().unwrap()),
        );
    write_scenario(name, &text)
}

#[test]
fn flow_map_is_dumped() {
    let dump = tmp("flow.bin");
    let file = moser_with_dump("moser-dump.scn", &dump);
    let (_, report) = check_json(
        &file,
        &["--checks", "moser", "--tol", "1e-3"],
        "moser-dump.json",
    );
    assert_eq!(check_named(&report, "moser")["status"], "pass");
    let d = algebroid_moser::read_grid_dump(&mut std::fs::File::open(&dump).unwrap()).unwrap();
    assert_eq!(d.counts, vec![17, 17]);
    assert_eq!(d.ncomp, 2);
    assert_eq!(d.bounds, vec![(-1.0, 1.0); 2]);
    // the origin is fixed
    let centre = 8 * 17 + 8;
    assert_eq!(&d.data[2 * centre..2 * centre + 2], &[0.0, 0.0]);
}

#[test]
fn unwritable_dump_is_an_internal_error() {
    let file = moser_with_dump("moser-baddump.scn", &tmp("missing-dir/flow.bin"));
    let (code, report) = check_json(&file, &["--checks", "moser"], "moser-baddump.json");
    assert_eq!(code, 3);
    assert_eq!(report["outcome"], "error");
    assert_eq!(check_named(&report, "moser")["status"], "error");
}
