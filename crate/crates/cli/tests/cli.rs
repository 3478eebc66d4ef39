use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn lookback(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lookback"))
        .args(args)
        .env_remove("GIBBS_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> (String, Vec<(f64, f64)>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    (header, rows)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

struct Data {
    _dir: TempDir,
    freqs: String,
    observed: String,
    raw: String,
}

fn data() -> Data {
    let dir = TempDir::new().unwrap();
    let freqs = write(dir.path(), "f.txt", "5 3 2\n1 1 1\n");
    let observed = write(dir.path(), "o.txt", "3 1\n");
    let raw = write(dir.path(), "raw.txt", "a\na\na\na\na\nb\nb\nb\nc\nc\nd\ne\nf\n");
    Data { _dir: dir, freqs, observed, raw }
}

#[test]
fn trivial_laws_at_zero() {
    let d = data();
    let out = stdout(&lookback(&["dist", "--kind", "old", "--info", "complete", "--freqs", &d.freqs, "--m", "0"]));
    assert_eq!(out, "x,probability\n0,1\n");
    assert_eq!(stdout(&lookback(&["dist", "--kind", "new", "--m", "0"])), "x,probability\n0,1\n");
    let out = stdout(&lookback(&["estimate", "--freqs", &d.freqs, "--m-grid", "0"]));
    assert_eq!(out, "m,estimate\n0,0\n");
}

#[test]
fn every_law_sums_to_one() {
    let d = data();
    let base = ["--sigma", "0.3", "--theta", "2.5", "--m", "7"];
    let variants: Vec<Vec<&str>> = vec![
        vec!["--freqs", &d.freqs],
        vec!["--freqs", &d.freqs, "--l", "1"],
        vec!["--freqs", &d.freqs, "--l", "0"],
        vec!["--n", "13", "--j", "6"],
        vec!["--n", "13", "--j", "6", "--l", "2"],
        vec!["--n", "13", "--j", "6", "--observed", &d.observed],
        vec!["--freqs", &d.freqs, "--info", "almost-complete", "--observed", &d.observed, "--l", "1"],
        vec!["--raw", &d.raw, "--precision", "float:128"],
        vec!["--n", "13", "--j", "6", "--kind", "new"],
        vec!["--n", "13", "--j", "6", "--kind", "new", "--precision", "53"],
    ];
    for v in variants {
        let mut args = vec!["dist"];
        args.extend(base);
        args.extend(v.iter().copied());
        let (header, rows) = rows(&stdout(&lookback(&args)));
        assert_eq!(header, "x,probability");
        let total: f64 = rows.iter().map(|r| r.1).sum();
        assert!((total - 1.0).abs() < 1e-9, "{args:?} sums to {total}");
        assert!(rows.windows(2).all(|w| w[1].0 > w[0].0), "{args:?} not increasing");
    }
}

#[test]
fn raw_labels_match_frequencies() {
    let d = data();
    let a = stdout(&lookback(&["dist", "--freqs", &d.freqs, "--m", "5"]));
    let b = stdout(&lookback(&["dist", "--raw", &d.raw, "--m", "5"]));
    assert_eq!(a, b);
}

#[test]
fn old_estimates_increase_and_stay_below_j() {
    let d = data();
    for info in [vec!["--freqs", &d.freqs[..]], vec!["--n", "13", "--j", "6"], vec!["--n", "13", "--j", "6", "--observed", &d.observed]] {
        let mut args = vec!["estimate", "--m-grid", "0:300:15", "--sigma", "0.6", "--theta", "4"];
        args.extend(info.iter().copied());
        let (header, rows) = rows(&stdout(&lookback(&args)));
        assert_eq!(header, "m,estimate");
        assert_eq!(rows.len(), 21);
        assert_eq!(rows[0], (0.0, 0.0));
        assert!(rows.windows(2).all(|w| w[1].1 >= w[0].1), "{args:?}");
        assert!(rows.iter().all(|r| r.1 <= 6.0), "{args:?}");
    }
}

#[test]
fn new_species_estimates_ignore_frequencies() {
    let d = data();
    let grid = ["estimate", "--kind", "new", "--m-grid", "0:100:10"];
    let mut a = grid.to_vec();
    a.extend(["--info", "complete", "--freqs", &d.freqs]);
    let mut b = grid.to_vec();
    b.extend(["--info", "incomplete", "--freqs", &d.freqs]);
    assert_eq!(stdout(&lookback(&a)), stdout(&lookback(&b)));
}

#[test]
fn json_mirrors_csv() {
    let d = data();
    let csv = stdout(&lookback(&["dist", "--freqs", &d.freqs, "--m", "3"]));
    let json = stdout(&lookback(&["dist", "--freqs", &d.freqs, "--m", "3", "--json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let arr = v.as_array().unwrap();
    let (_, rows) = rows(&csv);
    assert_eq!(arr.len(), rows.len());
    for (obj, (x, p)) in arr.iter().zip(rows) {
        assert_eq!(obj["x"].as_f64().unwrap(), x);
        assert_eq!(obj["probability"].as_f64().unwrap(), p);
    }
}

#[test]
fn exit_codes() {
    let d = data();
    let code = |args: &[&str]| lookback(args).status.code().unwrap();
    assert_eq!(code(&["dist", "--sigma", "1.5", "--n", "4", "--j", "2", "--m", "2"]), 2);
    assert_eq!(code(&["dist", "--n", "4", "--j", "5", "--m", "2"]), 2);
    assert_eq!(code(&["dist", "--m", "2"]), 2);
    assert_eq!(code(&["estimate", "--freqs", &d.freqs, "--m-grid", "5:1:1"]), 2);
    assert_eq!(code(&["dist", "--freqs", "/nonexistent/file", "--m", "1"]), 2);
    assert_eq!(code(&["dist", "--info", "almost-complete", "--n", "4", "--j", "2", "--m", "1"]), 2);
    assert_eq!(code(&["dist", "--precision", "banana", "--n", "4", "--j", "2", "--m", "1"]), 2);
    let heavy = ["dist", "--sigma", "0.3", "--n", "60", "--j", "30", "--m", "50"];
    let mut low = heavy.to_vec();
    low.extend(["--precision", "53"]);
    let out = lookback(&low);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cancellation"));
    assert_eq!(code(&heavy), 0);
}

#[test]
fn automatic_precision_widens_on_cancellation() {
    let out = lookback(&["dist", "--sigma", "0.3", "--n", "300", "--j", "150", "--m", "150"]);
    let text = stdout(&out);
    assert!(String::from_utf8_lossy(&out.stderr).contains("used float:512"));
    let total: f64 = rows(&text).1.iter().map(|r| r.1).sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn precision_environment_override() {
    let heavy = ["dist", "--sigma", "0.3", "--n", "60", "--j", "30", "--m", "50"];
    let run = |env: &str| {
        Command::new(env!("CARGO_BIN_EXE_lookback"))
            .args(heavy)
            .env("GIBBS_PRECISION", env)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("53"), Some(3));
    assert_eq!(run("float:512"), Some(0));
    assert_eq!(run("exact"), Some(0));
    let explicit = Command::new(env!("CARGO_BIN_EXE_lookback"))
        .args(heavy)
        .args(["--precision", "512"])
        .env("GIBBS_PRECISION", "53")
        .output()
        .unwrap();
    assert!(explicit.status.success());
}

/// Headers listed in `figure --help`, keyed by file stem.
fn documented_figure_headers() -> Vec<(String, String)> {
    let help = stdout(&lookback(&["figure", "--help"]));
    let mut out = Vec::new();
    let mut pending: Option<(Vec<String>, String)> = None;
    for line in help.lines() {
        let words: Vec<&str> = line.split_whitespace().collect();
        if let Some((names, mut cols)) = pending.take() {
            if words.len() == 1 && words[0].contains(',') && !words[0].contains(".csv") {
                cols.push_str(words[0]);
                if cols.ends_with(',') {
                    pending = Some((names, cols));
                } else {
                    out.extend(names.into_iter().map(|n| (n, cols.clone())));
                }
                continue;
            }
            out.extend(names.into_iter().map(|n| (n, cols.clone())));
        }
        let names: Vec<String> = words
            .iter()
            .filter(|w| w.ends_with(".csv") || w.ends_with(".csv,"))
            .map(|w| w.trim_end_matches(',').trim_end_matches(".csv").to_string())
            .collect();
        if names.is_empty() {
            continue;
        }
        let cols = words.last().unwrap().to_string();
        if cols.contains(".csv") {
            pending = Some((names, String::new()));
        } else if cols.ends_with(',') {
            pending = Some((names, cols));
        } else {
            out.extend(names.into_iter().map(|n| (n, cols.clone())));
        }
    }
    out
}

#[test]
fn figure_schemas_match_help_and_are_deterministic() {
    let documented = documented_figure_headers();
    assert_eq!(documented.len(), 9, "{documented:?}");
    for which in ["1", "2", "3"] {
        let a = TempDir::new().unwrap();
        let b = TempDir::new().unwrap();
        let args = |dir: &TempDir| {
            let d = dir.path().display().to_string();
            vec![
                "figure".to_string(), which.into(), "--n".into(), "80".into(), "--m-grid".into(), "0:60:20".into(),
                "--replicates".into(), "12".into(), "--draws".into(), "3".into(), "--m".into(), "40".into(),
                "--seed".into(), "7".into(), "--out".into(), d,
            ]
        };
        let run = |dir: &TempDir| {
            let v = args(dir);
            stdout(&lookback(&v.iter().map(String::as_str).collect::<Vec<_>>()));
        };
        run(&a);
        run(&b);
        let mut names: Vec<String> = fs::read_dir(a.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        assert!(!names.is_empty());
        for name in names {
            let x = fs::read(a.path().join(&name)).unwrap();
            assert_eq!(x, fs::read(b.path().join(&name)).unwrap(), "{name} differs between runs");
            let stem = name.trim_end_matches(".csv");
            let header = String::from_utf8(x).unwrap().lines().next().unwrap().to_string();
            let doc = documented.iter().find(|(n, _)| n == stem).unwrap_or_else(|| panic!("{stem} undocumented"));
            assert_eq!(header, doc.1, "{stem}");
        }
    }
}

#[test]
fn dist_and_estimate_schemas_in_help() {
    assert!(stdout(&lookback(&["dist", "--help"])).contains("x,probability"));
    assert!(stdout(&lookback(&["estimate", "--help"])).contains("m,estimate"));
    let top = stdout(&lookback(&["--help"]));
    assert!(top.contains("Exit codes"));
}

#[test]
fn validate_fast_passes() {
    let out = lookback(&["validate", "--level", "fast"]);
    let text = stdout(&out);
    assert!(text.contains("all checks passed"), "{text}");
    assert!(!text.contains("MISSING"));
    assert_eq!(lookback(&["validate", "--level", "medium"]).status.code(), Some(2));
}
