use std::collections::HashSet;
use std::process::{Command, Output};

use bergman_cli::config::ExperimentConfig;
use bergman_cli::emit::{from_json, CSV_HEADER};
use bergman_cli::range::parse_geometric;
use bergman_cli::Suite;

fn bergcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bergcheck")).args(args).output().expect("bergcheck runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bergcheck(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bergcheck(&["verify-infimum", "--tolerance-scale", "-1"]).status.code(), Some(2));
    assert_eq!(bergcheck(&["verify-theorem1", "--domain", "torus"]).status.code(), Some(2));
    let o = bergcheck(&["verify-green", "--domain", "polydisc2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not support"));
    // Ellipsoid sweeps stop at δ = 1e-4.
    assert_eq!(bergcheck(&["verify-theorem1", "--domain", "ellipsoid2", "--deltas", "1e-5"]).status.code(), Some(2));
    assert_eq!(bergcheck(&["verify-infimum", "--out", "/nonexistent/dir/x.csv"]).status.code(), Some(2));
}

#[test]
fn infimum_example() {
    let o = bergcheck(&["verify-infimum", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER.join(","));
    let row: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(row[0], "proof.infimum");
    let value: f64 = row[3].parse().unwrap();
    let bound: f64 = row[4].parse().unwrap();
    assert!((value - 11.0902).abs() < 1e-4 && (bound - 11.8731).abs() < 1e-4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("2 cases, 2 passed, 0 failed"));
}

#[test]
fn sharp_constant_json_example() {
    let o = bergcheck(&["verify-sharp-constant", "--r", "0.5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Vec<_> = stdout(&o).lines().map(|l| from_json(l).unwrap()).collect();
    let cap = reports.iter().find(|r| r.statement_id == "remark.sharp-constant").unwrap();
    assert!((cap.lhs - std::f64::consts::FRAC_PI_2).abs() < 1e-7 && cap.rhs == 2.0 && cap.pass);
}

// The sharper variant of the constant only holds for r < 3 − 2√2; between
// that and 1/3 these rows fail and the command exits 1.
#[test]
fn sharper_constant_rows_fail_between_bounds() {
    let o = bergcheck(&["verify-sharp-constant", "--r", "0.1,0.2,0.3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let reports: Vec<_> = stdout(&o).lines().map(|l| from_json(l).unwrap()).collect();
    let failing: Vec<f64> = reports.iter().filter(|r| !r.pass).map(|r| r.input_value("r").unwrap()).collect();
    assert!(reports.iter().filter(|r| !r.pass).all(|r| r.statement_id == "remark.blocki.sharper"));
    assert_eq!(failing, vec![0.2, 0.3]);
}

#[test]
fn theorem1_ball_example() {
    let o = bergcheck(&["verify-theorem1", "--domain", "ball2", "--deltas", "1e-1..1e-4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let upper: Vec<&str> = text.lines().filter(|l| l.starts_with("thm1.upper,")).collect();
    assert_eq!(upper.len(), 7);
    for l in upper {
        let rhs: f64 = l.split(',').nth(4).unwrap().parse().unwrap();
        assert!((rhs - 22.7462).abs() < 1e-4);
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    let out_path = dir.path().join("out.json");
    let cfg = ExperimentConfig { n: Some(vec![2, 3]), ..Default::default() };
    std::fs::write(&cfg_path, cfg.to_json()).unwrap();
    let o = bergcheck(&[
        "verify-infimum",
        "--config",
        cfg_path.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let ns: Vec<f64> = text
        .lines()
        .map(|l| from_json(l).unwrap())
        .filter(|r| r.statement_id == "proof.infimum")
        .map(|r| r.input_value("n").unwrap())
        .collect();
    assert_eq!(ns, vec![2.0, 3.0]);
    // A flag replaces the configured schedule.
    let o = bergcheck(&["verify-infimum", "--config", cfg_path.to_str().unwrap(), "--n", "4"]);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("proof.infimum,")).count(), 1);
    std::fs::write(&cfg_path, r#"{"seed": "x"}"#).unwrap();
    assert_eq!(bergcheck(&["verify-infimum", "--config", cfg_path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn tolerance_overrides_apply() {
    let mut cfg = ExperimentConfig { n: Some(vec![1]), ..Default::default() };
    let base = Suite::VerifyInfimum.run(&cfg).unwrap();
    cfg.tolerance_scale = 10.0;
    cfg.tolerances.insert("proof.infimum.stationary".into(), 1e-6);
    let scaled = Suite::VerifyInfimum.run(&cfg).unwrap();
    let stat = |rs: &[bergman_core::VerificationReport]| {
        rs.iter().find(|r| r.statement_id == "proof.infimum.stationary").unwrap().tolerance
    };
    assert_eq!(stat(&base), 1e-10);
    assert!((stat(&scaled) - 1e-5).abs() < 1e-20);
}

#[test]
fn all_cases_are_unique() {
    let cfg = ExperimentConfig {
        deltas: Some(parse_geometric("1e-1..1e-3:3").unwrap()),
        corpus_size: Some(6),
        r: Some(vec![0.2, 0.5]),
        ..Default::default()
    };
    let reports = Suite::All.run(&cfg).unwrap();
    let mut seen = HashSet::new();
    for r in &reports {
        let key: Vec<String> = std::iter::once(format!("{}|{}", r.statement_id, r.domain))
            .chain(r.inputs.iter().map(|(k, v)| format!("{k}={}", v.to_bits())))
            .collect();
        assert!(seen.insert(key.join(";")), "duplicate case {} {:?}", r.statement_id, r.inputs);
    }
    let ids: HashSet<&str> = reports.iter().map(|r| r.statement_id.as_str()).collect();
    for id in [
        "kernel.reproduce",
        "thm1.upper",
        "thm1.floor",
        "prop2.1",
        "cor2.3",
        "remark.sharp-constant",
        "prop3.2.inclusion",
        "prop3.1.herbo1",
        "lemma4.1",
        "prop3.4.slope",
        "proof.infimum",
        "cor1.szego",
    ] {
        assert!(ids.contains(id), "missing {id}");
    }
    // Each subcommand's cases appear in `all`.
    let sharp = Suite::VerifySharpConstant.run(&cfg).unwrap();
    assert!(sharp.iter().all(|r| reports.contains(r)));
}

#[test]
fn all_with_domain_skips_disc_only_suites() {
    let cfg = ExperimentConfig {
        domain: Some(bergman_core::DomainModel::Ellipsoid(2)),
        deltas: Some(vec![0.1, 0.01]),
        corpus_size: Some(2),
        ..Default::default()
    };
    let reports = Suite::All.run(&cfg).unwrap();
    assert!(reports.iter().all(|r| r.domain == "ellipsoid2" || r.domain == "-"));
    assert!(reports.iter().any(|r| r.statement_id == "thm1.upper"));
}
