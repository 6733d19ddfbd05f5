use std::path::PathBuf;
use std::process::{Command, Output};

fn padfec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padfec"))
        .args(args)
        .output()
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("padfec-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn sweep_writes_csv_and_is_repeatable() {
    let dir = scratch("sweep");
    let config = dir.join("run.cfg");
    std::fs::write(
        &config,
        "system = proposed, baseline\npayload_bits = 120\nebn0_db_list = 4, 6\nmin_block_errors = 10\nmax_trials = 2000\n",
    )
    .unwrap();
    let run = |out: &str| {
        let out = dir.join(out);
        let result = padfec(&[
            "sweep",
            "--config",
            config.to_str().unwrap(),
            "--quiet",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(
            result.status.success(),
            "{}",
            String::from_utf8_lossy(&result.stderr)
        );
        std::fs::read_to_string(out).unwrap()
    };
    let first = run("a.csv");
    assert_eq!(first, run("b.csv"));
    let mut lines = first.lines();
    assert_eq!(
        lines.next(),
        Some("system,n,k,ebn0_db,trials,block_errors,bit_errors,ber,bler,avg_queries,abandoned,undetected,seed")
    );
    assert_eq!(lines.count(), 4);
    assert!(first.contains("proposed,128,120,4.000000,"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn cli_flags_override_the_config_file() {
    let dir = scratch("override");
    let config = dir.join("run.cfg");
    std::fs::write(
        &config,
        "system = separate\nebn0_db_list = 3\nmax_trials = 5000\n",
    )
    .unwrap();
    let out = dir.join("o.csv");
    let result = padfec(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--system",
        "baseline",
        "--k",
        "100",
        "--ebn0",
        "inf",
        "--min-block-errors",
        "1",
        "--max-trials",
        "50",
        "--quiet",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("baseline,128,100,inf,50,0,0,"), "{row}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn configuration_errors_exit_with_2() {
    assert_eq!(
        padfec(&["sweep", "--system", "quantum"]).status.code(),
        Some(2)
    );
    assert_eq!(padfec(&["sweep", "--k", "128"]).status.code(), Some(2));
    assert_eq!(padfec(&["repro", "fig9"]).status.code(), Some(2));
    assert_eq!(padfec(&["sweep", "--no-such-flag"]).status.code(), Some(2));
    let dir = scratch("badcfg");
    let config = dir.join("bad.cfg");
    std::fs::write(&config, "colour = blue\n").unwrap();
    assert_eq!(
        padfec(&["sweep", "--config", config.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn io_errors_exit_with_3() {
    let dir = scratch("io");
    assert_eq!(
        padfec(&[
            "sweep",
            "--config",
            dir.join("missing.cfg").to_str().unwrap()
        ])
        .status
        .code(),
        Some(3)
    );
    let blocker = dir.join("file");
    std::fs::write(&blocker, "").unwrap();
    let out = blocker.join("results.csv");
    let result = padfec(&[
        "sweep",
        "--ebn0",
        "inf",
        "--min-block-errors",
        "1",
        "--max-trials",
        "10",
        "--quiet",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(3));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn gnuplot_script_accompanies_csv() {
    let dir = scratch("gp");
    let out = dir.join("curve.csv");
    let result = padfec(&[
        "sweep",
        "--ebn0",
        "inf",
        "--min-block-errors",
        "1",
        "--max-trials",
        "10",
        "--quiet",
        "--gnuplot",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let script = std::fs::read_to_string(dir.join("curve.gp")).unwrap();
    assert!(script.contains("'curve.csv'"));
    std::fs::remove_dir_all(dir).unwrap();
}
