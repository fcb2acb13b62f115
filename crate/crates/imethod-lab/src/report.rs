//! CSV and JSON artifacts.
//!
//! Floats are written with the shortest representation that parses back to
//! the same value, so identical runs produce identical files. The only
//! wall-clock item, the generation timestamp, lives on a single leading `#`
//! comment line in the CSV files and is skipped by comparers; JSON reports
//! carry no timestamp at all.

use crate::checks::{CheckReport, SweepReport};
use crate::dynamics::StepConfig;
use crate::error::Result;
use crate::field::Field;
use crate::functionals::{energy, lebesgue_norm, mass, modified_energy};
use crate::grid::Grid;
use crate::multiplier::sobolev_norm;
use std::path::Path;

/// Current wall clock, whole seconds since the epoch.
pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn fmt(x: f64) -> String {
    format!("{x:?}")
}

/// Per-snapshot observables.
#[derive(Debug, Clone, PartialEq)]
pub struct NormsRow {
    pub t: f64,
    pub mass: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub energy: f64,
    pub h1: f64,
    pub h_half: f64,
    pub l4: f64,
    pub modified_energy: Option<f64>,
}

pub fn norms_row(state: &Field, t: f64, threshold: Option<f64>, s: f64) -> Result<NormsRow> {
    let parts = energy(state);
    let modified = match threshold {
        Some(n) => Some(modified_energy(state, n, s)?.total()),
        None => None,
    };
    Ok(NormsRow {
        t,
        mass: mass(state),
        kinetic: parts.kinetic,
        potential: parts.potential,
        energy: parts.total(),
        h1: sobolev_norm(state, 1.0, false)?,
        h_half: sobolev_norm(state, 0.5, true)?,
        l4: lebesgue_norm(state, 4.0)?,
        modified_energy: modified,
    })
}

pub fn write_norms_csv(path: &Path, rows: &[NormsRow], timestamp: Option<u64>) -> Result<()> {
    let mut out = String::new();
    if let Some(ts) = timestamp {
        out.push_str(&format!("# generated {ts}\n"));
    }
    let with_modified = rows.first().map_or(false, |r| r.modified_energy.is_some());
    out.push_str("t,mass,kinetic,potential,energy,h1,h_half,l4");
    if with_modified {
        out.push_str(",modified_energy");
    }
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}",
            fmt(r.t),
            fmt(r.mass),
            fmt(r.kinetic),
            fmt(r.potential),
            fmt(r.energy),
            fmt(r.h1),
            fmt(r.h_half),
            fmt(r.l4)
        ));
        if with_modified {
            out.push(',');
            if let Some(m) = r.modified_energy {
                out.push_str(&fmt(m));
            }
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// One row per threshold; the fitted decay slope is shared by the sweep and
/// repeated on non-control rows, controls leave it blank.
pub fn write_sweep_csv(
    path: &Path,
    report: &SweepReport,
    grid: Grid,
    cfg: &StepConfig,
    seed: Option<u64>,
    timestamp: Option<u64>,
) -> Result<()> {
    let mut out = String::new();
    if let Some(ts) = timestamp {
        out.push_str(&format!("# generated {ts}\n"));
    }
    out.push_str("N,s,G,L,dt,t_final,sup_increment,slope,seed\n");
    for i in 0..report.thresholds.len() {
        let slope = if report.is_control[i] {
            String::new()
        } else {
            report.decay_slope.map(fmt).unwrap_or_default()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt(report.thresholds[i]),
            fmt(report.s),
            grid.points(),
            fmt(grid.length()),
            fmt(cfg.dt),
            fmt(cfg.t_final),
            fmt(report.sup_increment[i]),
            slope,
            seed.map(|v| v.to_string()).unwrap_or_default(),
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Deterministic pretty JSON for a batch of check reports.
pub fn write_reports_json(path: &Path, reports: &[CheckReport]) -> Result<()> {
    let text = serde_json::to_string_pretty(reports)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}
