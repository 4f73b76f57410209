//! End-to-end checks of the installed binary: flag parsing, config-file
//! merging, exit codes, and CSV determinism.

use holonomy_cli::table::Table;
use std::io::Write;
use std::process::{Command, Output};

fn holonomy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holonomy")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn help_lists_subcommands_and_exits_zero() {
    let out = holonomy(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for sub in ["gate", "sweep", "map", "dynamics", "dfs", "traj", "preset"] {
        assert!(text.contains(sub), "help is missing {sub}");
    }

    let out = holonomy(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    let out = holonomy(&["preset", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("fig3a") && err.contains("order-scaling"));

    // no secondary grid
    let out = holonomy(&["map", "--scheme", "nhqc"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("secondary grid"));

    // both secondary grids
    let out = holonomy(&[
        "map",
        "--scheme",
        "nhqc",
        "--delta-min",
        "-0.1",
        "--delta-max",
        "0.1",
        "--delta-count",
        "3",
        "--gamma-min",
        "0",
        "--gamma-max",
        "1e-4",
        "--gamma-count",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("exactly one"));

    // partial grid names the missing keys
    let out = holonomy(&["map", "--scheme", "nhqc", "--delta-min", "-0.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--delta-count"));

    // preset and explicit angles conflict
    let out = holonomy(&["gate", "--gate", "s", "--theta", "0.5pi"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("mutually exclusive"));

    // unknown flag comes from the parser, still exit 1
    let out = holonomy(&["gate", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_output_is_deterministic() {
    let args = [
        "sweep",
        "--scheme",
        "nhqc,opnhqc",
        "--epsilon-min",
        "-0.1",
        "--epsilon-max",
        "0.1",
        "--epsilon-count",
        "5",
    ];
    let first = holonomy(&args);
    let second = holonomy(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert!(text.starts_with("scheme,epsilon,fidelity_exact,fidelity_numeric\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 5);
}

#[test]
fn config_file_and_flags_agree_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# quarter-turn rotation about x under drive error").unwrap();
    writeln!(f, "scheme = dcnhqc").unwrap();
    writeln!(f, "gamma_g = 0.5pi").unwrap();
    writeln!(f, "epsilon = 0.05").unwrap();
    drop(f);
    let cfg = path.to_str().unwrap();

    let from_file = holonomy(&["gate", "--config", cfg]);
    let from_flags =
        holonomy(&["gate", "--scheme", "dcnhqc", "--gamma-g", "0.5pi", "--epsilon", "0.05"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_flags.stdout);

    // A flag shadows the file value for the same key.
    let shadowed = holonomy(&["gate", "--config", cfg, "--epsilon", "0.1"]);
    assert!(stdout(&shadowed).contains(",1.00000000000e-1,"));

    let missing = holonomy(&["gate", "--config", dir.path().join("nope.cfg").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn out_file_round_trips_through_the_parser() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = holonomy(&[
        "sweep",
        "--scheme",
        "tlnhqc",
        "--epsilon-count",
        "9",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("wrote "));

    let text = std::fs::read_to_string(&path).unwrap();
    let table = Table::parse(&text).unwrap();
    assert_eq!(table.emit(), text);
    assert_eq!(table.len(), 9);
    let exact = table.col("fidelity_exact").unwrap();
    let numeric = table.col("fidelity_numeric").unwrap();
    for row in 0..table.len() {
        let gap = (table.num(row, exact).unwrap() - table.num(row, numeric).unwrap()).abs();
        assert!(gap < 1e-9);
    }
}

#[test]
fn trajectory_rows_match_the_sample_count() {
    let out = holonomy(&["traj", "--scheme", "nhqc", "--samples", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 7);
    assert!(text.starts_with("time,x,y,z\n"));
}

#[test]
fn dfs_run_reports_the_lindblad_model() {
    let out = holonomy(&["dfs", "--epsilon", "0.02"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("per-qubit decay + dephasing on 3 physical qubits"));
    let table = Table::parse(&text).unwrap();
    let fid = table.num(0, table.col("fidelity").unwrap()).unwrap();
    assert!(fid > 0.9 && fid < 1.0);
}
