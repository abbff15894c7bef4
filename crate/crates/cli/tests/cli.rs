use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pnodal"))
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn run(args: &[&str], config: &Path, out: &Path) -> Output {
    bin().args(args).arg("--config").arg(config).arg("--out").arg(out).output().unwrap()
}

fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap().parse().unwrap()).collect()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.toml");
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn golden_free_problem() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = example("free_p2.toml");
    assert!(run(&["eig"], &cfg, dir.path()).status.success());
    assert!(run(&["nodes"], &cfg, dir.path()).status.success());
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    assert_eq!(
        fs::read_to_string(dir.path().join("eig.csv")).unwrap(),
        fs::read_to_string(golden.join("free_p2_eig.csv")).unwrap()
    );
    assert_eq!(
        fs::read_to_string(dir.path().join("nodes_n4.csv")).unwrap(),
        fs::read_to_string(golden.join("free_p2_nodes_n4.csv")).unwrap()
    );
    let eig = fs::read_to_string(dir.path().join("eig.csv")).unwrap();
    for (k, lam) in csv_column(&eig, "lambda_n").iter().enumerate() {
        assert!((lam - (k + 1) as f64 * std::f64::consts::PI).abs() < 1e-9);
    }
    assert!(csv_column(&eig, "residual").iter().all(|r| r.abs() < 1e-9));
}

#[test]
fn constant_shift_eigenvalues() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = example("constant_shift_p2.toml");
    assert!(run(&["eig"], &cfg, dir.path()).status.success());
    let eig = fs::read_to_string(dir.path().join("eig.csv")).unwrap();
    let ns = csv_column(&eig, "n");
    for (n, lam) in ns.iter().zip(csv_column(&eig, "lambda_n")) {
        let exact = ((n * std::f64::consts::PI).powi(2) + 1.0).sqrt();
        assert!((lam - exact).abs() < 1e-8, "n={n}: {lam} vs {exact}");
    }
}

#[test]
fn constant_shift_reconstruction_improves() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = example("constant_shift_p2.toml");
    assert!(run(&["reconstruct"], &cfg, dir.path()).status.success());
    let mut sups = Vec::new();
    for n in [10, 20, 40, 80, 100] {
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(format!("reconstruct_n{n}.json"))).unwrap())
                .unwrap();
        assert_eq!(json["n"], n);
        sups.push(json["sup_error"].as_f64().unwrap());
        assert!(json.get("extrapolated_sup_error").is_none());
    }
    assert!(sups.windows(2).all(|w| w[1] < w[0]), "{sups:?}");
    assert!(sups[4] < 0.05);
}

#[test]
fn free_reconstruction_is_at_noise_floor() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = example("free_p2.toml");
    assert!(run(&["reconstruct", "--ladder"], &cfg, dir.path()).status.success());
    for n in 1..=5 {
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(format!("reconstruct_n{n}.json"))).unwrap())
                .unwrap();
        let floor = json["noise_floor"].as_f64().unwrap();
        let csv = fs::read_to_string(dir.path().join(format!("reconstruct_n{n}.csv"))).unwrap();
        assert!(csv.starts_with("x,q_hat,q_true,abs_err,extrapolated\n"));
        assert!(csv_column(&csv, "q_hat").iter().all(|v| v.abs() <= floor));
    }
}

#[test]
fn sp_table_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "p = 2\nn_list = [1]\ngrid_size = 100\n");
    assert!(run(&["sp-table"], &cfg, dir.path()).status.success());
    let csv = fs::read_to_string(dir.path().join("sp_table.csv")).unwrap();
    let phase = csv_column(&csv, "phase");
    assert_eq!(phase.len(), 101);
    assert!((phase[100] - 2.0 * std::f64::consts::PI).abs() < 1e-10);
    for ((x, s), c) in phase.iter().zip(csv_column(&csv, "S_p")).zip(csv_column(&csv, "S_p_prime")) {
        assert!((s - x.sin()).abs() < 1e-9 && (c - x.cos()).abs() < 1e-9);
    }
    assert!(csv_column(&csv, "identity_residual").iter().all(|r| r.abs() < 1e-10));

    let out4 = dir.path().join("p4");
    assert!(run(&["sp-table"], &example("sp_p4.toml"), &out4).status.success());
    let csv = fs::read_to_string(out4.join("sp_table.csv")).unwrap();
    let row = csv.lines().nth(1 + 64).unwrap();
    let quarter: f64 = row.split(',').next().unwrap().parse().unwrap();
    assert!((quarter - 1.1107207).abs() < 1e-7);
    assert!(row.contains(",1.00000000000e0,"));
}

#[test]
fn nodes_for_sampled_potential() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(&["nodes"], &example("sampled_bump_p2_5.toml"), dir.path()).status.success());
    for n in [8, 16, 32] {
        let csv = fs::read_to_string(dir.path().join(format!("nodes_n{n}.csv"))).unwrap();
        let l = csv_column(&csv, "l_j_numeric");
        assert_eq!(l.len(), n);
        assert!((l.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let lp = csv_column(&csv, "l_j_predicted");
        assert!(l.iter().zip(&lp).all(|(a, b)| (a - b).abs() < 1e-3 / n as f64));
    }
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "p = 2\nn_list = [3, 1]\n");
    let out = run(&["eig"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_list"));

    let cfg = write_config(dir.path(), "p = 2\nn_list = [1\n");
    let out = run(&["eig"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let out = run(&["eig"], &dir.path().join("absent.toml"), dir.path());
    assert_eq!(out.status.code(), Some(2));

    let cfg = write_config(dir.path(), "p = 2\nn_list = [1]\n");
    let out = bin()
        .args(["eig", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .env("PNODAL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn partial_failure_keeps_going() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "p = 2\nn_list = [1, 12]\n[r]\nkind = \"constant\"\nvalue = 10.0\n");
    let out = run(&["eig"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(1));
    let eig = fs::read_to_string(dir.path().join("eig.csv")).unwrap();
    let rows: Vec<&str> = eig.lines().collect();
    assert!(rows[1].starts_with("1,nan,") && !rows[1].ends_with(",ok"));
    assert!(rows[2].ends_with(",ok"));
    let lam: f64 = rows[2].split(',').nth(1).unwrap().parse().unwrap();
    let exact = 10.0 + (100.0 + (12.0 * std::f64::consts::PI).powi(2)).sqrt();
    assert!((lam - exact).abs() < 1e-8);
}

#[test]
fn variant_flag_changes_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = example("cosine_pencil_p3.toml");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(run(&["eig"], &cfg, &a).status.success());
    assert!(run(&["eig", "--variant", "printed"], &cfg, &b).status.success());
    let pa = csv_column(&fs::read_to_string(a.join("eig.csv")).unwrap(), "predicted");
    let pb = csv_column(&fs::read_to_string(b.join("eig.csv")).unwrap(), "predicted");
    assert!(pa.iter().zip(&pb).all(|(x, y)| x != y));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = example("cosine_pencil_p2.toml");
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(threads);
        let status = bin()
            .args(["nodes", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .env("PNODAL_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(fs::read(out.join("nodes_n40.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}
