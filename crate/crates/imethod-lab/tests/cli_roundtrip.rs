//! End-to-end exercises of the compiled binary: artifact determinism across
//! repeated runs, exit-code contracts, and diagnostics for malformed inputs.

use std::path::{Path, PathBuf};
use std::process::Output;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_imethod-lab")
}

fn run(sub: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    std::process::Command::new(bin())
        .arg(sub)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .expect("binary launches")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).expect("config written");
    path
}

const BASE_CONFIG: &str = r#"{
  "dimension": 1,
  "grid_points": 64,
  "box_length": 6.283185307179586,
  "dt": 0.001,
  "t_final": 0.04,
  "snapshot_stride": 10,
  "s": 0.6,
  "N": 4.0,
  "N_list": [2.0, 4.0, 8.0, 64.0],
  "initial_data": { "rough": { "s": 0.6, "amplitude": 1.5, "seed": 9 } },
  "checks": [
    { "name": "frequency_tail", "budget": 5 },
    { "name": "almost_conservation", "budget": 0.5 }
  ]
}"#;

/// The single run directory created under `base`, which must contain
/// exactly one.
fn only_run_dir(base: &Path) -> PathBuf {
    let mut dirs: Vec<_> = std::fs::read_dir(base)
        .expect("artifact base exists")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.is_dir())
        .collect();
    assert_eq!(dirs.len(), 1, "expected one run directory in {}", base.display());
    dirs.pop().expect("one directory")
}

fn file_names(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .expect("run dir listable")
        .map(|e| e.expect("entry").file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

/// Bytes of a file with `#`-comment lines removed, so timestamped CSV
/// comments do not count as content.
fn content_bytes(path: &Path) -> Vec<u8> {
    let raw = std::fs::read(path).expect("artifact readable");
    if path.extension().map_or(false, |e| e == "csv") {
        let text = String::from_utf8(raw).expect("csv is utf-8");
        return text
            .lines()
            .filter(|line| !line.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
            .into_bytes();
    }
    raw
}

#[test]
fn repeated_runs_produce_identical_artifacts() {
    let work = tempfile::tempdir().expect("workspace");
    let config = write_config(work.path(), "run.json", BASE_CONFIG);
    let out_a = work.path().join("a");
    let out_b = work.path().join("b");

    for (sub, extra) in [("evolve", &[][..]), ("sweep", &[]), ("check", &[])] {
        for out in [&out_a, &out_b] {
            let result = run(sub, &config, out, extra);
            // Exit 1 only signals a non-passing verdict; determinism is
            // about the artifacts, so only exit 2 (an error) is fatal here.
            assert!(
                matches!(result.status.code(), Some(0) | Some(1)),
                "{sub} into {} errored: {}",
                out.display(),
                String::from_utf8_lossy(&result.stderr)
            );
        }
    }

    let dir_a = only_run_dir(&out_a);
    let dir_b = only_run_dir(&out_b);
    // Content addressing: the run directory name depends only on the
    // configuration, never on where the artifacts are parked.
    assert_eq!(dir_a.file_name(), dir_b.file_name());

    let names = file_names(&dir_a);
    assert_eq!(names, file_names(&dir_b));
    assert!(names.iter().any(|n| n == "config.json"));
    assert!(names.iter().any(|n| n == "norms.csv"));
    assert!(names.iter().any(|n| n == "sweep.csv"));
    assert!(names.iter().any(|n| n == "sweep.json"));
    assert!(names.iter().any(|n| n == "checks.json"));
    assert!(names.iter().any(|n| n.ends_with(".nlsf")));

    for name in &names {
        let a = content_bytes(&dir_a.join(name));
        let b = content_bytes(&dir_b.join(name));
        assert_eq!(a, b, "artifact {name} differs between identical runs");
    }
}

#[test]
fn seed_override_changes_rough_runs_and_their_address() {
    let work = tempfile::tempdir().expect("workspace");
    let config = write_config(work.path(), "run.json", BASE_CONFIG);
    let out = work.path().join("artifacts");

    let base = run("evolve", &config, &out, &[]);
    assert!(base.status.success());
    let reseeded = run("evolve", &config, &out, &["--seed", "1234"]);
    assert!(reseeded.status.success());

    let dirs: Vec<_> = std::fs::read_dir(&out)
        .expect("artifact base exists")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.is_dir())
        .collect();
    assert_eq!(dirs.len(), 2, "a new seed is a new experiment, so a new address");

    let states: Vec<Vec<u8>> = dirs
        .iter()
        .map(|d| std::fs::read(d.join("state_000000.nlsf")).expect("checkpoint"))
        .collect();
    assert_ne!(states[0], states[1], "different seeds give different initial data");
}

#[test]
fn failing_check_exits_one_and_says_fail() {
    let work = tempfile::tempdir().expect("workspace");
    let strict = BASE_CONFIG.replace(
        r#"{ "name": "almost_conservation", "budget": 0.5 }"#,
        r#"{ "name": "almost_conservation", "budget": 1e-12 }"#,
    );
    let config = write_config(work.path(), "strict.json", &strict);
    let result = run("check", &config, &work.path().join("artifacts"), &[]);
    assert_eq!(result.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("[FAIL] almost_conservation"), "stdout: {stdout}");
    assert!(stdout.contains("[PASS] frequency_tail"), "stdout: {stdout}");
}

#[test]
fn configuration_errors_exit_two_with_diagnostics() {
    let work = tempfile::tempdir().expect("workspace");
    let out = work.path().join("artifacts");

    // Missing file.
    let missing = run("evolve", &work.path().join("nope.json"), &out, &[]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("cannot read"));

    // Unknown key is rejected rather than silently ignored.
    let misspelled = BASE_CONFIG.replace("\"dt\"", "\"step_size\"");
    let config = write_config(work.path(), "misspelled.json", &misspelled);
    let bad_key = run("evolve", &config, &out, &[]);
    assert_eq!(bad_key.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_key.stderr).contains("bad run configuration"));

    // Unknown check name is a configuration error, not a silent skip.
    let unknown = BASE_CONFIG.replace("frequency_tail", "frequency_tale");
    let config = write_config(work.path(), "unknown.json", &unknown);
    let bad_check = run("check", &config, &out, &[]);
    assert_eq!(bad_check.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_check.stderr).contains("unknown check 'frequency_tale'"));

    // Sweep without a threshold list cannot run.
    let listless = BASE_CONFIG.replace("\"N_list\": [2.0, 4.0, 8.0, 64.0],", "");
    let config = write_config(work.path(), "listless.json", &listless);
    let no_list = run("sweep", &config, &out, &[]);
    assert_eq!(no_list.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&no_list.stderr).contains("N_list"));
}

#[test]
fn norms_reads_stored_checkpoints_and_rejects_corrupt_ones() {
    let work = tempfile::tempdir().expect("workspace");
    let config = write_config(work.path(), "run.json", BASE_CONFIG);
    let out = work.path().join("artifacts");

    assert!(run("evolve", &config, &out, &[]).status.success());
    let dir = only_run_dir(&out);
    let stored: Vec<_> = file_names(&dir).into_iter().filter(|n| n.ends_with(".nlsf")).collect();
    assert_eq!(stored.len(), 5, "0.04 / 0.001 steps at stride 10 plus t = 0");

    let tabulated = run("norms", &config, &out, &[]);
    assert!(tabulated.status.success());
    let table = std::fs::read_to_string(dir.join("norms.csv")).expect("norms table");
    let rows: Vec<&str> = table.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 1 + stored.len(), "header plus one row per checkpoint");
    assert!(rows[0].starts_with("t,mass,"));

    // Mass is conserved across the stored trajectory.
    let masses: Vec<f64> = rows[1..]
        .iter()
        .map(|r| r.split(',').nth(1).expect("mass column").parse().expect("parses"))
        .collect();
    for m in &masses {
        assert!((m - masses[0]).abs() <= 1e-10 * masses[0]);
    }

    // Truncate one checkpoint; norms must fail loudly, not tabulate garbage.
    let victim = dir.join(&stored[2]);
    let bytes = std::fs::read(&victim).expect("checkpoint readable");
    std::fs::write(&victim, &bytes[..bytes.len() - 7]).expect("truncate");
    let corrupt = run("norms", &config, &out, &[]);
    assert_eq!(corrupt.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&corrupt.stderr).contains("truncated payload"));
}

#[test]
fn worker_count_does_not_change_check_artifacts() {
    let work = tempfile::tempdir().expect("workspace");
    let config = write_config(work.path(), "run.json", BASE_CONFIG);
    let out_serial = work.path().join("serial");
    let out_pooled = work.path().join("pooled");

    let serial = std::process::Command::new(bin())
        .args(["check", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_serial)
        .env("IMETHOD_LAB_THREADS", "1")
        .output()
        .expect("binary launches");
    assert!(matches!(serial.status.code(), Some(0) | Some(1)));

    let pooled = std::process::Command::new(bin())
        .args(["check", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_pooled)
        .env("IMETHOD_LAB_THREADS", "3")
        .output()
        .expect("binary launches");
    assert_eq!(pooled.status.code(), serial.status.code());

    let a = std::fs::read(only_run_dir(&out_serial).join("checks.json")).expect("serial reports");
    let b = std::fs::read(only_run_dir(&out_pooled).join("checks.json")).expect("pooled reports");
    assert_eq!(a, b, "the worker pool must not reorder or alter reports");
    // Summary lines come out in request order either way; only the artifact
    // path line differs (the two runs intentionally use different --out).
    let verdicts = |bytes: &[u8]| -> Vec<String> {
        String::from_utf8_lossy(bytes)
            .lines()
            .filter(|l| l.starts_with('['))
            .map(str::to_owned)
            .collect()
    };
    assert_eq!(verdicts(&serial.stdout), verdicts(&pooled.stdout));
}
