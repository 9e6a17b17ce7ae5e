use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_uav-linkscape"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(args: &[&str]) -> Output {
    bin().arg("run").args(args).output().unwrap()
}

fn run_text(text: &str, extra: &[&str]) -> (Output, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scenario.cfg");
    fs::write(&cfg, text).unwrap();
    let out = run(&[&[cfg.to_str().unwrap()], extra].concat());
    (out, dir)
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn column(table: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = table[0].iter().position(|h| h == name).unwrap();
    table[1..].iter().map(|r| r[i].parse().unwrap()).collect()
}

const PAIR: &str = "\
[geometry]
tx = 180, 0, 0
rx = 0, 0, 75
interferer = 0, 100, 0
";

#[test]
fn every_shipped_config_runs() {
    let mut names = fs::read_dir(configs())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cfg"))
        .collect::<Vec<_>>();
    names.sort();
    let figures = names
        .iter()
        .filter_map(|p| p.file_stem()?.to_str()?.get(3..5)?.parse::<u32>().ok())
        .collect::<std::collections::BTreeSet<_>>();
    assert_eq!(figures.into_iter().collect::<Vec<_>>(), (5..=12).collect::<Vec<_>>());
    for path in names {
        let out = run(&[path.to_str().unwrap(), "--trials", "20000"]);
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(out.status.success(), "{}: {stderr}", path.display());
        let csv = String::from_utf8(out.stdout).unwrap();
        let table = rows(&csv);
        assert!(table.len() >= 2, "{}", path.display());
        assert_eq!(table[0].last().unwrap(), "status");
        assert!(
            table[1..].iter().all(|r| r.last().unwrap() == "ok"),
            "{}",
            path.display()
        );
    }
}

#[test]
fn reruns_are_byte_identical() {
    let cfg = configs().join("fig06.cfg");
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = run(&[
            cfg.to_str().unwrap(),
            "--trials",
            "30000",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let first = fs::read(&a).unwrap();
    assert_eq!(first, fs::read(&b).unwrap());
    assert!(!first.contains(&b'\r'));

    let stdout = run(&[cfg.to_str().unwrap(), "--trials", "30000"]).stdout;
    assert_eq!(stdout, first);
    let reseeded = run(&[cfg.to_str().unwrap(), "--trials", "30000", "--seed", "99"]).stdout;
    assert_ne!(reseeded, first);
}

#[test]
fn simulation_tracks_analysis() {
    for name in ["fig06.cfg", "fig06_sir.cfg"] {
        let out = run(&[configs().join(name).to_str().unwrap()]);
        assert!(out.status.success());
        let table = rows(&String::from_utf8(out.stdout).unwrap());
        let total = column(&table, "total");
        let mc = column(&table, "mc_estimate");
        let se = column(&table, "mc_std_error");
        for i in 0..total.len() {
            assert!(
                (total[i] - mc[i]).abs() <= 0.01,
                "{name} row {i}: {} vs {} ± {}",
                total[i],
                mc[i],
                se[i]
            );
        }
    }
}

#[test]
fn stronger_interferer_lowers_best_height() {
    let base = fs::read_to_string(configs().join("fig07_optimal.cfg")).unwrap();
    let best = |p_i: &str| {
        let (out, _dir) = run_text(&base.replace("p_i = 3e-9", &format!("p_i = {p_i}")), &[]);
        assert!(out.status.success());
        column(&rows(&String::from_utf8(out.stdout).unwrap()), "rx.z")[0]
    };
    let weak = best("3e-9");
    let strong = best("1e-8");
    assert!(strong < weak, "{strong} vs {weak}");
}

#[test]
fn single_step_gives_one_row() {
    let (out, _dir) = run_text(&format!("{PAIR}[sweep]\nvariable = gamma_t\nmin = 2\n"), &[]);
    assert!(out.status.success());
    let table = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(table.len(), 2);
    assert_eq!(table[1][0], "2");
}

#[test]
fn config_errors_exit_2_with_line() {
    let (out, _dir) = run_text(
        &format!("{PAIR}colour = red\n[sweep]\nvariable = gamma_t\nmin = 2\n"),
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 5") && stderr.contains("colour"), "{stderr}");
    assert!(out.stdout.is_empty());

    let (out, _dir) = run_text(
        &format!("{PAIR}[radio]\ngamma_t = 2\nrt_bps = 1e4\n[sweep]\nvariable = gamma_t\nmin = 2\n"),
        &[],
    );
    assert_eq!(out.status.code(), Some(2));

    let missing = run(&["/nonexistent/scenario.cfg"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn option_errors_exit_2() {
    let text = format!("{PAIR}[sweep]\nvariable = gamma_t\nmin = 2\n");
    let (out, _dir) = run_text(&text, &["--tolerance", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let (out, _dir) = run_text(&text, &["--trials", "many"]);
    assert_eq!(out.status.code(), Some(2));
    let none = bin().output().unwrap();
    assert_eq!(none.status.code(), Some(2));
}

#[test]
fn failed_rows_exit_3_after_writing() {
    let (out, dir) = run_text(
        &format!("{PAIR}[sweep]\nvariable = rx.z\nmin = -5\nmax = 75\nsteps = 2\n"),
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    let table = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(table.len(), 3);
    assert_eq!(table[1].last().unwrap(), "invalid-parameter");
    assert_eq!(table[1][1], "nan");
    assert_eq!(table[2].last().unwrap(), "ok");

    let file = dir.path().join("out.csv");
    let out = run(&[
        dir.path().join("scenario.cfg").to_str().unwrap(),
        "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(fs::read_to_string(file).unwrap().lines().count(), 3);
}
