use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn qmirror(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qmirror"));
    cmd.args(args).env_remove("QMIRROR_GRID_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &TempDir, name: &str, body: &str, out: &str) -> (PathBuf, PathBuf) {
    let out_path = dir.path().join(out);
    let cfg = dir.path().join(name);
    std::fs::write(&cfg, format!("{body}output.path = {}\n", out_path.display())).unwrap();
    (cfg, out_path)
}

fn run(args: &[&str]) -> Output {
    qmirror(args, &[])
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Header-keyed CSV rows.
fn csv(path: &Path) -> Vec<HashMap<String, String>> {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    lines
        .map(|l| header.iter().cloned().zip(l.split(',').map(String::from)).collect())
        .collect()
}

fn num(row: &HashMap<String, String>, key: &str) -> f64 {
    row[key].parse().unwrap_or_else(|_| panic!("{key} = {:?}", row[key]))
}

#[test]
fn delta_limit_run_is_pure() {
    let dir = TempDir::new().unwrap();
    let (cfg, out) = write_config(&dir, "delta.cfg", "mirror.sigma_x_over_lambda = 0.01\n", "delta.csv");
    let o = run(&["run", s(&cfg)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv(&out);
    assert_eq!(rows.len(), 1);
    assert!(num(&rows[0], "purity") > 0.999);
    assert!(num(&rows[0], "conservation_residual") < 1e-9);
    assert_eq!(rows[0]["converged"], "true");
    assert_eq!(rows[0]["aliased"], "false");
}

#[test]
fn monochromatic_run_is_displaced() {
    let dir = TempDir::new().unwrap();
    let body = "photon.frac_bandwidth = 1e-4\nmirror.sigma_x_over_lambda = 1\n";
    let (cfg, out) = write_config(&dir, "mono.cfg", body, "mono.csv");
    let o = run(&["run", s(&cfg)]);
    assert_eq!(o.status.code(), Some(0));
    let row = &csv(&out)[0];
    assert!(num(row, "displaced_marginal_fidelity") > 1.0 - 1e-6);
    assert!((num(row, "kick") - 2.0).abs() < 1e-9);
}

#[test]
fn invalid_config_writes_nothing() {
    let dir = TempDir::new().unwrap();
    let (cfg, out) = write_config(&dir, "bad.cfg", "mirror.sigma_x_over_lambda = -0.5\n", "bad.csv");
    let o = run(&["run", s(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());

    let (cfg, out) = write_config(&dir, "typo.cfg", "mirror.sigma_x = 1\n", "typo.csv");
    assert_eq!(run(&["run", s(&cfg)]).status.code(), Some(2));
    assert!(!out.exists());

    assert_eq!(run(&["run", s(&dir.path().join("missing.cfg"))]).status.code(), Some(2));
}

#[test]
fn grid_budget_from_environment() {
    let dir = TempDir::new().unwrap();
    let (cfg, out) = write_config(&dir, "b.cfg", "mirror.sigma_x_over_lambda = 0.5\n", "b.csv");
    let o = qmirror(&["run", s(&cfg)], &[("QMIRROR_GRID_BUDGET", "1000")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    assert!(!out.exists());
    let o = qmirror(&["run", s(&cfg)], &[("QMIRROR_GRID_BUDGET", "lots")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identical_configs_give_identical_files() {
    let dir = TempDir::new().unwrap();
    let body = "photon.frac_bandwidth = 0.07\nphoton.theta_deg = 20\nmirror.sigma_x_over_lambda = 0.4\nbounces = 2\ngrids.points_per_axis = 96\n";
    let (cfg, out) = write_config(&dir, "a.cfg", body, "a.csv");
    assert_eq!(run(&["run", s(&cfg)]).status.code(), Some(0));
    let first = std::fs::read(&out).unwrap();
    assert_eq!(run(&["run", s(&cfg)]).status.code(), Some(0));
    assert_eq!(first, std::fs::read(&out).unwrap());
}

#[test]
fn json_output() {
    let dir = TempDir::new().unwrap();
    let body = "mirror.sigma_x_over_lambda = 0.2\ngrids.points_per_axis = 64\noutput.format = json\n";
    let (cfg, out) = write_config(&dir, "j.cfg", body, "j.json");
    assert_eq!(run(&["run", s(&cfg)]).status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("{\n") && text.ends_with("}\n"));
    assert!(text.contains("\"entropy_bits\": "));
    assert!(text.contains("\"converged\": true"));
}

#[test]
fn polarization_renormalized_with_warning() {
    let dir = TempDir::new().unwrap();
    let body = "mirror.sigma_x_over_lambda = 0.2\ngrids.points_per_axis = 64\nphoton.pol_plus = 1, 0\nphoton.pol_minus = 0, 1\n";
    let (cfg, _) = write_config(&dir, "p.cfg", body, "p.csv");
    let o = run(&["run", s(&cfg)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("renormalized"));
}

#[test]
fn sigma_sweep_entropy_is_nondecreasing() {
    let dir = TempDir::new().unwrap();
    let (cfg, out) = write_config(&dir, "s.cfg", "mirror.sigma_x_over_lambda = 1\n", "s.csv");
    let o = run(&["sweep", s(&cfg), "--axis", "sigma_x_over_lambda", "--from", "0.01", "--to", "3", "--points", "16"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("axis,value,entropy_bits,purity,kick,residual,g,error\n"));
    let rows = csv(&out);
    assert_eq!(rows.len(), 16);
    let entropy: Vec<f64> = rows.iter().map(|r| num(r, "entropy_bits")).collect();
    assert!(entropy.windows(2).all(|w| w[1] >= w[0]), "{entropy:?}");
    for r in &rows {
        assert_eq!(r["error"], "");
        assert!(num(r, "residual") < 1e-9);
    }
    assert_eq!(num(&rows[0], "value"), 0.01);
    assert_eq!(num(&rows[15], "value"), 3.0);
}

#[test]
fn refractive_index_sweep_is_linear() {
    let dir = TempDir::new().unwrap();
    let body = "photon.frac_bandwidth = 1e-3\nphoton.theta_deg = 30\nmirror.sigma_x_over_lambda = 1\n";
    let (cfg, out) = write_config(&dir, "n.cfg", body, "n.csv");
    let o = run(&["sweep", s(&cfg), "--axis", "refr_index", "--values", "1,1.33,1.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let pts: Vec<(f64, f64)> = csv(&out).iter().map(|r| (num(r, "value"), num(r, "kick"))).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let expected = 2.0 * 30f64.to_radians().cos();
    assert!(((slope - expected) / expected).abs() < 1e-9, "slope {slope}");
}

#[test]
fn bounce_sweep_matches_stretched_mirror_sweep() {
    let dir = TempDir::new().unwrap();
    let body = "photon.frac_bandwidth = 0.1\nmirror.sigma_x_over_lambda = 0.05\ngrids.points_per_axis = 128\n";
    let (cfg, bounce_out) = write_config(&dir, "q.cfg", body, "bounces.csv");
    let o = run(&["sweep", s(&cfg), "--axis", "bounces", "--values", "1,2,4,8"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (cfg, sigma_out) = write_config(&dir, "q2.cfg", body, "sigma.csv");
    let o = run(&["sweep", s(&cfg), "--axis", "sigma_x_over_lambda", "--values", "0.05,0.1,0.2,0.4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for (a, b) in csv(&bounce_out).iter().zip(&csv(&sigma_out)) {
        assert!((num(a, "entropy_bits") - num(b, "entropy_bits")).abs() < 1e-8);
    }
}

#[test]
fn sweep_rejects_bad_axis_values_up_front() {
    let dir = TempDir::new().unwrap();
    let (cfg, out) = write_config(&dir, "v.cfg", "mirror.sigma_x_over_lambda = 1\n", "v.csv");
    let o = run(&["sweep", s(&cfg), "--axis", "frac_bandwidth", "--values", "0.1,0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    let o = run(&["sweep", s(&cfg), "--axis", "theta", "--values", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["sweep", s(&cfg), "--axis", "bounces", "--from", "1", "--to", "2", "--points", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn limits_hold_for_default_grids() {
    let dir = TempDir::new().unwrap();
    let (cfg, out) = write_config(&dir, "l.cfg", "mirror.sigma_x_over_lambda = 1\n", "l.csv");
    assert_eq!(run(&["limits", s(&cfg)]).status.code(), Some(0));
    let rows = csv(&out);
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!(r["holds"], "true", "{}", r["limit"]);
        assert!((num(r, "purity") - num(r, "oracle_purity")).abs() < 1e-6);
    }
}

#[test]
fn minkowski_command_reports_slope() {
    let dir = TempDir::new().unwrap();
    let body = "photon.theta_deg = 45\nmirror.sigma_x_over_lambda = 1\n";
    let (cfg, out) = write_config(&dir, "m.cfg", body, "m.csv");
    let o = run(&["minkowski", s(&cfg), "--n-list", "1,1.2,1.33,1.5,1.75"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv(&out);
    assert_eq!(rows.len(), 5);
    let expected = 2.0 * 45f64.to_radians().cos();
    assert!(((num(&rows[0], "slope") - expected) / expected).abs() < 1e-9);
    assert_eq!(run(&["minkowski", s(&cfg), "--n-list", "0.5,1"]).status.code(), Some(2));
}
