use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fracorder::cli::RunConfig;
use tempfile::TempDir;

fn bundled(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracorder"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn report_value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
        .to_owned()
}

/// Writes the example-1 config with `edit` applied to its text.
fn edited_config(dir: &TempDir, edit: impl Fn(String) -> String) -> PathBuf {
    let text = std::fs::read_to_string(bundled("example1.toml")).unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, edit(text)).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn invert_bundled_examples() {
    for (file, truth) in [("example1.toml", 0.75), ("example2.toml", 0.5)] {
        let out = run(&["invert", "--config", s(&bundled(file))]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let text = stdout(&out);
        let alpha: f64 = report_value(&text, "alpha_hat").parse().unwrap();
        assert!((alpha - truth).abs() <= 2e-3, "{file}: {alpha}");
        assert_eq!(report_value(&text, "status"), "unique");
        assert_eq!(report_value(&text, "uniqueness_hypothesis"), "true");
        assert_eq!(report_value(&text, "monotone"), "verified");
        let _: f64 = report_value(&text, "derivative").parse().unwrap();
        let _: f64 = report_value(&text, "residual").parse().unwrap();
    }
}

#[test]
fn unattainable_data_exits_3() {
    let dir = TempDir::new().unwrap();
    let cfg = edited_config(&dir, |t| t.replace("d = 0.25818", "d = 10.0"));
    let out = run(&["invert", "--config", s(&cfg)]);
    assert_eq!(code(&out), 3);
    assert!(
        stderr(&out).contains("no root in range"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn two_roots_exit_4() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("two.toml");
    std::fs::write(
        &path,
        "[problem]\nD = 1.0\nl = 3.141592653589793\nT = 2.0\nmodes = [{ n = 1, f = 1.0 }, { n = 3, f = 1.2 }]\n\n\
         [measurement]\nx0 = 1.5707963267948966\nt1 = 0.05\nd = 0.43\n",
    )
    .unwrap();
    let out = run(&["invert", "--config", s(&path)]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(report_value(&text, "status"), "multiple");
    assert_eq!(report_value(&text, "roots").split(' ').count(), 2);
    assert_eq!(report_value(&text, "uniqueness_hypothesis"), "false");
}

#[test]
fn solver_failure_exits_1() {
    let dir = TempDir::new().unwrap();
    let cfg = edited_config(&dir, |t| {
        t + "\n[inverse]\nmax_iters = 2\nuse_newton = false\n"
    });
    let out = run(&["invert", "--config", s(&cfg)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("no convergence"), "{}", stderr(&out));
}

#[test]
fn config_errors_exit_2_and_name_the_key() {
    let dir = TempDir::new().unwrap();
    let cases: [(&dyn Fn(String) -> String, &str); 4] = [
        (&|t| t.replace("D = 0.1", "D = -0.1"), "D"),
        (
            &|t| t.replace("T = 4.0", "T = 4.0\nhorizon = 3.0"),
            "horizon",
        ),
        (
            &|t| t.replace("x0 = 0.7853981633974483", "x0 = \"quarter\""),
            "x0",
        ),
        (&|t| t.replace("alpha = 0.75", "alpha = 0.0"), "alpha"),
    ];
    for (edit, key) in cases {
        let cfg = edited_config(&dir, edit);
        for cmd in ["invert", "curve"] {
            let out = run(&[cmd, "--config", s(&cfg)]);
            assert_eq!(code(&out), 2, "{cmd} {key}");
            assert!(stderr(&out).contains(key), "{cmd}: {}", stderr(&out));
        }
    }
    let out = run(&["invert", "--config", "/nonexistent/run.toml"]);
    assert_eq!(code(&out), 2);
    let out = run(&[
        "forward",
        "--config",
        s(&bundled("example1.toml")),
        "--points",
        "1.0",
    ]);
    assert_eq!(code(&out), 2);
    let out = run(&[
        "forward",
        "--config",
        s(&bundled("example1.toml")),
        "--points",
        "9.0,1.0",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("point 1"));
    let out = run(&["bogus"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn forward_rows() {
    let out = run(&[
        "forward",
        "--config",
        s(&bundled("example1.toml")),
        "--points",
        "0.7853981633974483,2;0,1",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(text.lines().next(), Some("x,t,u"));
    assert_eq!(rows.len(), 2);
    assert!((rows[0][2] - 0.25818).abs() < 5e-5);
    assert_eq!(rows[1][2], 0.0);
}

#[test]
fn forward_points_from_file_and_alpha_override() {
    let dir = TempDir::new().unwrap();
    let points = dir.path().join("points.csv");
    std::fs::write(
        &points,
        "x,t\n# quarter period\n0.7853981633974483,2\n\n1.0,3.5\n",
    )
    .unwrap();
    let base = run(&[
        "forward",
        "--config",
        s(&bundled("example1.toml")),
        "--points",
        s(&points),
    ]);
    assert_eq!(code(&base), 0, "{}", stderr(&base));
    assert_eq!(stdout(&base).lines().count(), 3);
    let other = run(&[
        "--alpha",
        "0.4",
        "forward",
        "--config",
        s(&bundled("example1.toml")),
        "--points",
        s(&points),
    ]);
    assert_eq!(code(&other), 0);
    assert_ne!(stdout(&base), stdout(&other));
}

#[test]
fn curve_rows_and_endpoints() {
    let out = run(&["curve", "--config", s(&bundled("example1.toml"))]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,residual,kind");
    let grid = lines.iter().filter(|l| l.ends_with(",grid")).count();
    assert_eq!(grid, 99);
    let value = |l: &str| -> f64 { l.split(',').nth(1).unwrap().parse().unwrap() };
    assert!(lines[1].ends_with(",endpoint") && lines.last().unwrap().ends_with(",endpoint"));
    assert!((value(lines[1]) - 0.09896).abs() < 1e-5);
    assert!((value(lines.last().unwrap()) - (-0.03352)).abs() < 1e-5);

    let out = run(&[
        "curve",
        "--config",
        s(&bundled("example1.toml")),
        "--scan-points",
        "9",
    ]);
    assert_eq!(
        stdout(&out)
            .lines()
            .filter(|l| l.ends_with(",grid"))
            .count(),
        9
    );
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let cfg = bundled("example2.toml");
    let commands: [&[&str]; 3] = [
        &["curve", "--config", s(&cfg)],
        &["invert", "--config", s(&cfg)],
        &[
            "forward",
            "--config",
            s(&cfg),
            "--points",
            "0.5,1;1.5,10;3.0,20",
        ],
    ];
    for args in commands {
        let a = run(args);
        let b = run(args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn output_flag_and_json_format() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("curve.csv");
    let out = run(&[
        "curve",
        "--config",
        s(&bundled("example1.toml")),
        "--output",
        s(&target),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let stdout_run = run(&["curve", "--config", s(&bundled("example1.toml"))]);
    assert_eq!(std::fs::read(&target).unwrap(), stdout_run.stdout);

    let cfg = edited_config(&dir, |t| t + "\n[output]\nformat = \"json\"\n");
    let out = run(&["invert", "--config", s(&cfg)]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let alpha = report["report"]["alpha_hat"].as_f64().unwrap();
    assert!((alpha - 0.75).abs() < 2e-3);
    assert_eq!(report["report"]["status"], "unique");
}

#[test]
fn rel_tol_override_is_validated() {
    let cfg = bundled("example1.toml");
    let out = run(&["--rel-tol", "1e-8", "invert", "--config", s(&cfg)]);
    assert_eq!(code(&out), 0);
    let out = run(&["--rel-tol", "0.5", "invert", "--config", s(&cfg)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("rel_tol"));
}

#[test]
fn additional_measurements_are_reported() {
    let dir = TempDir::new().unwrap();
    let cfg = edited_config(&dir, |t| {
        t.replace(
            "d = 0.25818",
            "d = 0.25818\nadditional = [{ t = 3.0, d = 0.2 }]",
        )
    });
    let out = run(&["invert", "--config", s(&cfg)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out)
        .lines()
        .any(|l| l.starts_with("additional.t.3")));
}

#[test]
fn selfcheck_passes_and_fault_injection_fails() {
    let out = run(&["selfcheck"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text
        .lines()
        .filter(|l| l.starts_with("check="))
        .all(|l| l.contains("status=pass")));
    assert!(text.ends_with("failed=0\n"));

    let out = run(&["selfcheck", "--tolerance-scale", "0"]);
    assert_eq!(code(&out), 1);
    let summary = stdout(&out).lines().last().unwrap().to_owned();
    assert!(
        summary.contains("failing=") && summary.contains("example1.forward"),
        "{summary}"
    );
}

#[test]
fn bundled_configs_round_trip() {
    for file in ["example1.toml", "example2.toml"] {
        let cfg = RunConfig::load(&bundled(file)).unwrap();
        let again = RunConfig::parse(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.to_toml(), again.to_toml());
    }
}
