use std::process::Command;

fn listdec() -> Command {
    Command::new(env!("CARGO_BIN_EXE_listdec"))
}

#[test]
fn no_arguments_prints_usage_and_fails() {
    let out = listdec().output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.to_lowercase().contains("usage"), "{stderr}");
}

#[test]
fn bounds_johnson_example() {
    let out = listdec()
        .args(["bounds", "--q", "2", "--johnson", "0.375"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let value: f64 = stdout.trim().parse().unwrap();
    assert!((value - 0.25).abs() < 1e-12, "{stdout}");
}

#[test]
fn bounds_rejects_out_of_domain() {
    let out = listdec()
        .args(["bounds", "--q", "2", "--johnson", "0.9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn moment_all_ones_example() {
    let out = listdec()
        .args(["moment", "--m", "2", "--s", "2", "--all-ones"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap().trim(), "8");
    assert_eq!(lines.next().unwrap().trim(), "bound 256");
}

#[test]
fn oracle_reads_generator_file() {
    let dir = std::env::temp_dir().join(format!("listdec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rep3.txt");
    std::fs::write(&path, "2 1 3\n1 1 1\n").unwrap();
    let out = listdec()
        .args(["oracle", "--gen", path.to_str().unwrap(), "--rho", "1/2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("max_list_size 1"), "{stdout}");
}

#[test]
fn chain_csv_is_deterministic_and_thread_independent() {
    let run = |threads: &str| {
        let out = listdec()
            .args([
                "chain", "--q", "2", "--ktilde", "2", "--n", "6", "--l", "3", "--trials", "6",
                "--seed", "11",
            ])
            .env("LISTDEC_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let a = run("1");
    let b = run("4");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("experiment,trial,derived_seed"));
}

#[test]
fn budget_violation_exits_2() {
    let out = listdec()
        .args([
            "chain", "--q", "2", "--ktilde", "12", "--n", "4", "--l", "3", "--trials", "1",
            "--seed", "0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rip_exact_small_matrix() {
    let out = listdec()
        .args([
            "rip", "--q", "2", "--ktilde", "2", "--t-size", "4", "--k", "2", "--seed", "3",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("delta "), "{stdout}");
}

#[test]
fn json_config_round_trip() {
    let dir = std::env::temp_dir().join(format!("listdec-cli-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("chain.json");
    let out_path = dir.join("records.csv");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"experiment":"reduction_chain","params":{{"q":2,"ktilde":2,"n":5,"l":3,"trials":3}},"seed":5,"output":"{}"}}"#,
            out_path.display()
        ),
    )
    .unwrap();
    let out = listdec()
        .args(["chain", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&out_path).unwrap();
    assert!(csv.lines().count() > 1);
}
