use std::path::PathBuf;
use std::process::{Command, Output};

fn gaussent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaussent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn example_config() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/fit_expansion.conf")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gaussent-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

/// `name -> value` from the one-row csv report.
fn csv_report(args: &[&str]) -> Vec<(String, String)> {
    let mut full = vec!["report", "--format", "csv"];
    full.extend_from_slice(args);
    let o = gaussent(&full);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("# gaussent "));
    lines[1]
        .split(',')
        .zip(lines[2].split(','))
        .map(|(h, v)| (h.to_string(), v.to_string()))
        .collect()
}

fn field(report: &[(String, String)], name: &str) -> f64 {
    report.iter().find(|(h, _)| h == name).unwrap().1.parse().unwrap()
}

#[test]
fn report_at_unit_point() {
    let r = csv_report(&[]);
    assert!((field(&r, "e_ab") - 1.3242).abs() < 1e-4);
    assert!((field(&r, "e_a_abar") / 1.958e-4 - 1.0).abs() < 1e-3);
    assert!((field(&r, "residual") / 2.70e-4 - 1.0).abs() < 2e-3);
    for v in ["k", "m", "epsilon", "sigma_rate", "s"] {
        assert_eq!(field(&r, v), 1.0);
    }

    let text = gaussent(&["report"]);
    assert!(text.status.success());
    let text = stdout(&text);
    assert!(text.starts_with("parameters: k=1 m=1 epsilon=1 sigma_rate=1 s=1"));
    assert!(text.contains("e_ab"));
}

#[test]
fn report_limits() {
    let r = csv_report(&["--epsilon", "1e-9"]);
    assert!((field(&r, "e_ab") - 2f64.cosh().ln()).abs() < 1e-12);
    let r = csv_report(&["--m", "0", "--s", "0.3"]);
    for q in ["e_a_abar", "residual", "e_b_bbar"] {
        assert_eq!(field(&r, q), 0.0, "{q}");
    }
    assert_eq!(field(&r, "e_ab"), 0.6f64.cosh().ln());
}

#[test]
fn invalid_parameter_is_usage_error() {
    for args in [&["report", "--m", "-1"][..], &["report", "--k", "0"], &["report", "--s", "nan"]] {
        let o = gaussent(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
    }
    assert_eq!(gaussent(&["report", "--bogus", "1"]).status.code(), Some(1));
    assert_eq!(gaussent(&[]).status.code(), Some(1));
    assert_eq!(gaussent(&["--help"]).status.code(), Some(0));
    assert_eq!(gaussent(&["--version"]).status.code(), Some(0));
}

#[test]
fn figure_output_shape_and_stability() {
    let a = gaussent(&["figure", "fig1a"]);
    assert!(a.status.success(), "{}", stderr(&a));
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# gaussent") && lines[0].contains("curves=k:{0.5,1.0,2.0,4.0}"));
    assert_eq!(lines[1], "sigma_rate,e_ab[k=0.5],e_ab[k=1.0],e_ab[k=2.0],e_ab[k=4.0]");
    assert_eq!(lines.len(), 2 + 101);
    assert!(!text.contains('\r'));

    // monotone decreasing in sigma along every curve
    let rows: Vec<Vec<f64>> = lines[2..]
        .iter()
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    for c in 1..5 {
        for w in rows.windows(2) {
            assert!(w[1][c] <= w[0][c] + 1e-15);
        }
    }

    let b = gaussent(&["figure", "fig1a"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn figure_flags() {
    let o = gaussent(&["figure", "FIG2A", "--curves", "0.25,3", "--points", "5", "--format", "tsv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].contains("curves=k:{0.25,3.0}"));
    assert_eq!(lines[1], "sigma_rate\te_a_abar[k=0.25]\te_a_abar[k=3.0]");
    assert_eq!(lines.len(), 7);

    let path = scratch("fig4a.csv", "");
    let o = gaussent(&["figure", "fig4a", "--points", "9", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    for line in written.lines().skip(2) {
        for cell in line.split(',').skip(1) {
            assert!(cell.parse::<f64>().unwrap() >= 0.0);
        }
    }

    assert_eq!(gaussent(&["figure", "fig3c", "--curves", "1"]).status.code(), Some(1));
    assert_eq!(gaussent(&["figure", "fig1a", "--points", "1"]).status.code(), Some(1));
}

#[test]
fn unknown_figure() {
    let o = gaussent(&["figure", "fig5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("fig5"));
}

#[test]
fn fit_recovers_bundled_truth() {
    let cfg = example_config();
    let o = gaussent(&["fit", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let estimate = |name: &str| -> f64 {
        let prefix = format!("# estimate {name} = ");
        let line = text.lines().find(|l| l.starts_with(&prefix)).unwrap();
        line[prefix.len()..].split_whitespace().next().unwrap().parse().unwrap()
    };
    assert!((estimate("epsilon") / 1.5 - 1.0).abs() < 1e-3);
    assert!((estimate("sigma_rate") / 2.5 - 1.0).abs() < 1e-3);
    assert!(text.contains("# converged = true"));
    assert!(text.contains("# degenerate = false"));
    assert!(text.contains("k,quantity,observed,model,residual,weight\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 7);
}

#[test]
fn fit_residuals_to_file() {
    let cfg = example_config();
    let out = scratch("residuals.csv", "");
    let o = gaussent(&["fit", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().all(|l| l.starts_with('#')));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("k,quantity,observed,model,residual,weight\n"));
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn fit_config_errors() {
    let bad = scratch("bad.conf", "m = 1\ns = 1\nsigma_rates = 2\n");
    let o = gaussent(&["fit", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let msg = stderr(&o);
    assert!(msg.contains("sigma_rates") && msg.contains("line 3"), "{msg}");

    let empty = scratch(
        "empty.conf",
        "m = 1\ns = 1\nunknown.epsilon = 0.1, 10\nunknown.sigma_rate = 0.1, 10\n",
    );
    let o = gaussent(&["fit", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no observations"));

    let missing = gaussent(&["fit", "/nonexistent/fit.conf"]);
    assert_eq!(missing.status.code(), Some(1));

    let cfg = example_config();
    let o = gaussent(&["fit", cfg.to_str().unwrap(), "--set", "unknown.epsilon=5,1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn underdetermined_fit_exits_three() {
    let one = scratch(
        "one.conf",
        "m = 1\ns = 1\nunknown.epsilon = 0.1, 10\nunknown.sigma_rate = 0.1, 10\nobs = e_ab, 1, 1.3\n",
    );
    let o = gaussent(&["fit", one.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stdout(&o).contains("# degenerate = true"));

    // massless field: expansion leaves no trace in the data
    let massless = scratch(
        "massless.conf",
        "m = 0\ns = 1\nunknown.epsilon = 0.1, 10\nunknown.sigma_rate = 0.1, 10\n\
         obs = e_a_abar, 1, 0\nobs = e_a_abar, 2, 0\nobs = residual, 1, 0\n",
    );
    let o = gaussent(&["fit", massless.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn flags_override_config() {
    // pinning sigma_rate at the truth leaves a one-parameter fit
    let cfg = example_config();
    let o = gaussent(&["fit", cfg.to_str().unwrap(), "--set", "sigma_rate=2.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(!text.contains("# estimate sigma_rate"));
    let line = text.lines().find(|l| l.starts_with("# estimate epsilon = ")).unwrap();
    let eps: f64 = line.split_whitespace().nth(4).unwrap().parse().unwrap();
    assert!((eps / 1.5 - 1.0).abs() < 1e-9, "{text}");
}

#[test]
fn selftest_quick_passes() {
    let start = std::time::Instant::now();
    let o = gaussent(&["selftest", "--quick"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(start.elapsed().as_secs_f64() < 10.0);
    let log = stderr(&o);
    assert_eq!(log.lines().filter(|l| l.contains("PASS")).count(), 9);
}

#[test]
fn injected_fault_names_the_suite() {
    let out = scratch("selftest.txt", "");
    let o = gaussent(&[
        "selftest",
        "--quick",
        "--inject-fault",
        "flip-residual-sign",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let summary = std::fs::read_to_string(&out).unwrap();
    assert!(summary.lines().last().unwrap().contains("monogamy"), "{summary}");
    let line = summary.lines().find(|l| l.contains("monogamy")).unwrap();
    assert!(line.contains("FAIL"));
    // the hidden flag stays out of the help text
    assert!(!stdout(&gaussent(&["selftest", "--help"])).contains("inject"));
}
