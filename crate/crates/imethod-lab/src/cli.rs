//! Command-line front end: four subcommands over one JSON configuration.
//!
//! `evolve` integrates the flow and records checkpoints plus a norms table,
//! `sweep` integrates once and scans smoothed-energy diagnostics over the
//! configured threshold list, `check` runs named verification checks, and
//! `norms` tabulates norms from previously written checkpoints. Artifacts
//! land in a directory named by the hash of the effective configuration, so
//! identical inputs rerun into the same place and distinct runs never collide.

use crate::checkpoint::{read_checkpoint, write_checkpoint};
use crate::checks::{
    check_frequency_tail, check_interaction_morawetz, check_scaling, rescale_experiment,
    sweep_almost_conservation, sweep_almost_morawetz, CheckReport, Verdict,
};
use crate::config::{CheckRequest, InitialData, RunConfig};
use crate::dynamics::evolve;
use crate::error::{Error, Result};
use crate::report::{norms_row, unix_timestamp, write_norms_csv, write_reports_json, write_sweep_csv};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};

/// Worker-thread budget from `IMETHOD_LAB_THREADS`; unset, unparsable, or
/// zero all mean one worker. Only the `check` fan-out uses extra workers,
/// and the artifacts are identical either way.
pub fn workers() -> usize {
    std::env::var("IMETHOD_LAB_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w >= 1)
        .unwrap_or(1)
}

#[derive(Debug, Parser)]
#[command(
    name = "imethod-lab",
    version,
    about = "Split-step spectral lab for the mass-critical Schrodinger flow on a periodic box"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the configured flow, writing checkpoints and a norms table.
    Evolve(RunArgs),
    /// Integrate once and scan smoothed-energy diagnostics over N_list.
    Sweep(RunArgs),
    /// Run the checks named in the configuration; exit 0 only if all pass.
    Check(RunArgs),
    /// Tabulate conserved and Sobolev norms from stored checkpoints.
    Norms(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Path to a JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Base directory for artifacts (overrides the configuration's own).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Replacement seed for rough initial data.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl RunArgs {
    fn effective_config(&self) -> Result<RunConfig> {
        // load() already validates; the overrides cannot invalidate it.
        Ok(RunConfig::load(&self.config)?.with_overrides(self.out.as_deref(), self.seed))
    }
}

/// Dispatch a parsed invocation and reduce it to a process exit code:
/// 0 when the work finished (and, for `check`, every verdict was a pass),
/// 1 when checks ran but at least one did not pass, 2 on errors.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Evolve(args) => cmd_evolve(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Check(args) => cmd_check(&args),
        Command::Norms(args) => cmd_norms(&args),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Parse process arguments and run; the binary is a one-line wrapper.
pub fn main_from_args() -> i32 {
    run(Cli::parse())
}

fn prepare_run_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = cfg.run_dir();
    std::fs::create_dir_all(&dir)?;
    // Echo the effective configuration so the directory is self-describing.
    std::fs::write(dir.join("config.json"), cfg.canonical_json() + "\n")?;
    Ok(dir)
}

fn cmd_evolve(args: &RunArgs) -> Result<bool> {
    let cfg = args.effective_config()?;
    let dir = prepare_run_dir(&cfg)?;
    let u0 = cfg.initial_state(None)?;
    let step = cfg.step_config();
    let mut rows = Vec::new();
    let mut index = 0usize;
    crate::dynamics::evolve_with(&u0, &step, |t, state| {
        write_checkpoint(&dir.join(format!("state_{index:06}.nlsf")), state, t)?;
        rows.push(norms_row(state, t, cfg.threshold, cfg.s)?);
        index += 1;
        Ok(())
    })?;
    write_norms_csv(&dir.join("norms.csv"), &rows, Some(unix_timestamp()))?;
    println!(
        "evolve: {} snapshots, t in [0, {}] -> {}",
        rows.len(),
        step.t_final,
        dir.display()
    );
    Ok(true)
}

fn cmd_sweep(args: &RunArgs) -> Result<bool> {
    let cfg = args.effective_config()?;
    let thresholds = cfg
        .threshold_list
        .clone()
        .ok_or_else(|| Error::Config("sweep needs N_list in the configuration".into()))?;
    let dir = prepare_run_dir(&cfg)?;
    let u0 = cfg.initial_state(None)?;
    let step = cfg.step_config();
    let sweep = sweep_almost_conservation(&u0, &step, cfg.s, &thresholds)?;
    let seed = match cfg.initial_data {
        InitialData::Rough { seed, .. } => Some(seed),
        _ => None,
    };
    write_sweep_csv(
        &dir.join("sweep.csv"),
        &sweep,
        u0.grid(),
        &step,
        seed,
        Some(unix_timestamp()),
    )?;
    std::fs::write(
        dir.join("sweep.json"),
        serde_json::to_string_pretty(&sweep)? + "\n",
    )?;
    for (i, &n) in sweep.thresholds.iter().enumerate() {
        let role = if sweep.is_control[i] { " (control)" } else { "" };
        println!(
            "sweep: N={n}{role} sup|E(Iu)(t)-E(Iu)(0)| = {:e}",
            sweep.sup_increment[i]
        );
    }
    if let Some(slope) = sweep.decay_slope {
        println!("sweep: increment decay slope {slope:.4} -> {}", dir.display());
    } else {
        println!("sweep: too few live thresholds for a slope -> {}", dir.display());
    }
    Ok(true)
}

/// Run one named check against the shared configuration. The optional budget
/// is the check's single free knob: a ratio cap for the interaction bound, a
/// consistency tolerance for the conservation sweep, a defect constant for
/// the action sweep, a slope tolerance for the rescale fit, a norm tolerance
/// for the dilation commutation, and an ensemble size for the tail bound.
pub fn run_check(cfg: &RunConfig, request: &CheckRequest) -> Result<CheckReport> {
    let need_list = || {
        cfg.threshold_list
            .clone()
            .ok_or_else(|| Error::Config(format!("check '{}' needs N_list", request.name)))
    };
    match request.name.as_str() {
        "frequency_tail" => {
            let threshold = cfg
                .threshold
                .ok_or_else(|| Error::Config("check 'frequency_tail' needs N".into()))?;
            let fields = request.budget.map(|b| b as usize).unwrap_or(100);
            let base_seed = match cfg.initial_data {
                InitialData::Rough { seed, .. } => seed,
                _ => 0,
            };
            check_frequency_tail(cfg.grid()?, threshold, cfg.s, fields, base_seed)
        }
        "scaling" => {
            let lambda = cfg
                .lambda
                .ok_or_else(|| Error::Config("check 'scaling' needs lambda".into()))?;
            let u0 = cfg.initial_state(None)?;
            check_scaling(
                &u0,
                &cfg.step_config(),
                lambda,
                1e-12,
                request.budget.unwrap_or(1e-6),
            )
        }
        "interaction_morawetz" => {
            let u0 = cfg.initial_state(None)?;
            let traj = evolve(&u0, &cfg.step_config())?;
            check_interaction_morawetz(&traj, request.budget.unwrap_or(10.0))
        }
        "almost_conservation" => {
            let thresholds = need_list()?;
            let u0 = cfg.initial_state(None)?;
            let sweep = sweep_almost_conservation(&u0, &cfg.step_config(), cfg.s, &thresholds)?;
            Ok(sweep.to_check_report(
                "almost_conservation",
                request.budget.unwrap_or(0.05),
                None,
                1e-10,
            ))
        }
        "almost_morawetz" => {
            let thresholds = need_list()?;
            let u0 = cfg.initial_state(None)?;
            let sweep = sweep_almost_morawetz(&u0, &cfg.step_config(), cfg.s, &thresholds)?;
            Ok(sweep.to_check_report(request.budget.unwrap_or(1.0)))
        }
        "rescale" => {
            let thresholds = need_list()?;
            let u0 = cfg.initial_state(None)?;
            let report = rescale_experiment(&u0, cfg.s, &thresholds, 0.5, 1 << 12)?;
            Ok(report.to_check_report(request.budget.unwrap_or(0.3)))
        }
        other => Err(Error::Config(format!(
            "unknown check '{other}' (known: frequency_tail, scaling, interaction_morawetz, \
             almost_conservation, almost_morawetz, rescale)"
        ))),
    }
}

/// Run every requested check, with a bounded worker pool when
/// `IMETHOD_LAB_THREADS` asks for one. Reports come back in request order.
fn run_all_checks(cfg: &RunConfig, requests: &[CheckRequest]) -> Result<Vec<CheckReport>> {
    let pool = workers().min(requests.len().max(1));
    if pool <= 1 {
        return requests.iter().map(|r| run_check(cfg, r)).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<_> = requests.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..pool {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= requests.len() {
                    break;
                }
                let outcome = run_check(cfg, &requests[i]);
                *slots[i].lock().expect("result slot") = Some(outcome);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.into_inner().expect("result slot").expect("worker filled slot"))
        .collect()
}

fn cmd_check(args: &RunArgs) -> Result<bool> {
    let cfg = args.effective_config()?;
    if cfg.checks.is_empty() {
        return Err(Error::Config("no checks requested in the configuration".into()));
    }
    let dir = prepare_run_dir(&cfg)?;
    let reports = run_all_checks(&cfg, &cfg.checks)?;
    write_reports_json(&dir.join("checks.json"), &reports)?;
    let mut all_pass = true;
    for report in &reports {
        println!("{}", report.summary_line());
        all_pass &= report.verdict == Verdict::Pass;
    }
    println!("check: {} report(s) -> {}", reports.len(), dir.display());
    Ok(all_pass)
}

fn checkpoint_paths(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    if dir.is_dir() {
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().map_or(false, |e| e == "nlsf") {
                paths.push(path);
            }
        }
    }
    paths.sort();
    Ok(paths)
}

fn cmd_norms(args: &RunArgs) -> Result<bool> {
    let cfg = args.effective_config()?;
    let dir = prepare_run_dir(&cfg)?;
    let paths = checkpoint_paths(&dir)?;
    let mut rows = Vec::new();
    if paths.is_empty() {
        // Nothing stored yet: tabulate the configured initial state.
        rows.push(norms_row(&cfg.initial_state(None)?, 0.0, cfg.threshold, cfg.s)?);
    } else {
        for path in &paths {
            let (state, t) = read_checkpoint(path)?;
            rows.push(norms_row(&state, t, cfg.threshold, cfg.s)?);
        }
    }
    write_norms_csv(&dir.join("norms.csv"), &rows, Some(unix_timestamp()))?;
    let last = rows.last().expect("at least one row");
    println!(
        "norms: {} row(s), final mass {:.12e}, final energy {:.12e} -> {}",
        rows.len(),
        last.mass,
        last.energy,
        dir.display()
    );
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_parses_all_subcommands() {
        for sub in ["evolve", "sweep", "check", "norms"] {
            let cli = Cli::try_parse_from([
                "imethod-lab",
                sub,
                "--config",
                "cfg.json",
                "--out",
                "artifacts",
                "--seed",
                "7",
            ])
            .expect("well-formed invocation parses");
            let args = match cli.command {
                Command::Evolve(a) | Command::Sweep(a) | Command::Check(a) | Command::Norms(a) => a,
            };
            assert_eq!(args.config, PathBuf::from("cfg.json"));
            assert_eq!(args.out.as_deref(), Some(Path::new("artifacts")));
            assert_eq!(args.seed, Some(7));
        }
    }

    #[test]
    fn cli_requires_config_path() {
        assert!(Cli::try_parse_from(["imethod-lab", "evolve"]).is_err());
        assert!(Cli::try_parse_from(["imethod-lab", "orbit", "--config", "c"]).is_err());
    }

    #[test]
    fn unknown_check_name_is_a_config_error() {
        let cfg = RunConfig {
            dimension: 1,
            grid_points: 8,
            box_length: std::f64::consts::TAU,
            dt: 1e-2,
            t_final: 1e-2,
            snapshot_stride: 1,
            dealias: true,
            s: 0.6,
            threshold: None,
            threshold_list: None,
            lambda: None,
            initial_data: InitialData::Gaussian { amplitude: 1.0, width: 0.5, center: None },
            checks: Vec::new(),
            output_dir: None,
        };
        let req = CheckRequest { name: "spectral_gap".into(), budget: None };
        let err = run_check(&cfg, &req).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(err.to_string().contains("spectral_gap"));
    }

    #[test]
    fn missing_threshold_list_is_reported_per_check() {
        let cfg = RunConfig {
            dimension: 1,
            grid_points: 8,
            box_length: std::f64::consts::TAU,
            dt: 1e-2,
            t_final: 1e-2,
            snapshot_stride: 1,
            dealias: true,
            s: 0.6,
            threshold: None,
            threshold_list: None,
            lambda: None,
            initial_data: InitialData::Gaussian { amplitude: 1.0, width: 0.5, center: None },
            checks: Vec::new(),
            output_dir: None,
        };
        for name in ["almost_conservation", "almost_morawetz", "rescale"] {
            let req = CheckRequest { name: name.into(), budget: None };
            let err = run_check(&cfg, &req).unwrap_err();
            assert!(err.to_string().contains("N_list"), "{name}: {err}");
        }
    }

    #[test]
    fn worker_budget_defaults_to_one() {
        // The variable is process-global, so only exercise the parse rules
        // that do not require mutating the environment.
        assert_eq!(
            std::env::var("IMETHOD_LAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()),
            None
        );
        assert_eq!(workers(), 1);
    }
}
