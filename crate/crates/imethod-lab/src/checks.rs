//! Quantitative checks with explicit verdicts.
//!
//! Every check measures concrete numbers from fields or trajectories, echoes
//! the inputs that produced them, and renders a three-way verdict: Pass when
//! the stated bound holds, Fail when it does not, Inconclusive when the data
//! cannot decide (too few points for a slope, for instance). Reports are
//! plain serializable data so they can be written as JSON and diffed.

use crate::dynamics::{evolve, evolve_with, StepConfig, Trajectory};
use crate::error::{Error, Result};
use crate::field::{transform_forward, transform_inverse, Field, SpectralField};
use crate::fit::log_log_fit;
use crate::functionals::{
    admissible_pairs, lebesgue_norm, mass, modified_energy, increment_rate, spacetime_norm,
};
use crate::grid::Grid;
use crate::morawetz::morawetz_action;
use crate::multiplier::{apply_multiplier, sobolev_norm, Multiplier};
use crate::rough::{synthesize, RoughDataSpec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail => write!(f, "FAIL"),
            Verdict::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

/// Outcome of one check: echoed inputs, measured quantities, verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub inputs: BTreeMap<String, String>,
    pub measured: BTreeMap<String, f64>,
    pub bound_lhs: Option<f64>,
    pub bound_rhs: Option<f64>,
    pub ratio: Option<f64>,
    pub slope: Option<f64>,
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            inputs: BTreeMap::new(),
            measured: BTreeMap::new(),
            bound_lhs: None,
            bound_rhs: None,
            ratio: None,
            slope: None,
            tolerance: None,
            verdict: Verdict::Inconclusive,
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn measure(&mut self, key: &str, value: f64) -> &mut Self {
        self.measured.insert(key.to_string(), value);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn summary_line(&self) -> String {
        format!("[{}] {}", self.verdict, self.name)
    }
}

fn pass_fail(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Verify the two quantitative faces of the smoothing multiplier.
///
/// For a field supported on radii >= threshold, |grad I u|_{L^2} equals
/// N^(1-s) |u|_{dot H^s} identically, because the symbol satisfies
/// r m(r) = N^(1-s) r^s on that range; the measured ratio must be 1 to
/// within 1e-10. On full-spectrum rough fields the smoothed H^1 norm obeys
/// |I u|_{H^1} <= C N^(1-s) |u|_{H^s} with the dyadic-sum constant
/// C = 1 + sum_{k=-5..5} 2^(-k(1-s)) reported alongside the measured sup.
pub fn check_frequency_tail(
    grid: Grid,
    threshold: f64,
    s: f64,
    field_count: usize,
    base_seed: u64,
) -> Result<CheckReport> {
    let m = Multiplier::IOperator { threshold, s };
    m.validate()?;
    if threshold >= grid.max_radial_freq() {
        return Err(Error::Check(format!(
            "threshold {threshold} leaves no lattice modes beyond it (max radius {})",
            grid.max_radial_freq()
        )));
    }
    let mut report = CheckReport::new("frequency_tail");
    report
        .input("grid", format!("{}^{} L={}", grid.points(), grid.dim(), grid.length()))
        .input("threshold", threshold)
        .input("s", s)
        .input("fields", field_count)
        .input("base_seed", base_seed);

    // Exact identity on the outer branch.
    let seed_field = synthesize(grid, &RoughDataSpec::new(s, 1.0, base_seed))?;
    let mut hat = transform_forward(&seed_field);
    let table = grid.freq_sq_table();
    for (c, &r2) in hat.coeffs_mut().iter_mut().zip(&table) {
        if r2 < threshold * threshold {
            *c = num_complex::Complex64::default();
        }
    }
    let tail_field = transform_inverse(&hat);
    let lhs = sobolev_norm(&apply_multiplier(&tail_field, &m)?, 1.0, true)?;
    let rhs = threshold.powf(1.0 - s) * sobolev_norm(&tail_field, s, true)?;
    let tail_ratio = lhs / rhs;
    report.measure("tail_identity_ratio", tail_ratio);

    // Smoothing bound on rough fields with full spectra.
    let c_disc: f64 = 1.0
        + (-5..=5)
            .map(|k| 2f64.powf(-(k as f64) * (1.0 - s)))
            .sum::<f64>();
    let mut sup_ratio = 0.0f64;
    for i in 0..field_count {
        let f = synthesize(grid, &RoughDataSpec::new(s, 1.0, base_seed + 1 + i as u64))?;
        let num = sobolev_norm(&apply_multiplier(&f, &m)?, 1.0, false)?;
        let den = threshold.powf(1.0 - s) * sobolev_norm(&f, s, false)?;
        sup_ratio = sup_ratio.max(num / den);
    }
    report.measure("sup_bound_ratio", sup_ratio);
    report.measure("dyadic_constant", c_disc);
    report.tolerance = Some(1e-10);
    report.verdict = pass_fail((tail_ratio - 1.0).abs() <= 1e-10 && sup_ratio <= c_disc);
    Ok(report)
}

/// Mass-preserving dilation onto a grid refined by a power-of-two factor.
///
/// The image of u is u_lam(x) = lam^(-n/2) u(x/lam) on the box lam*L with
/// lam*G points per axis (same spacing). On the Fourier side this keeps each
/// mode index and multiplies coefficients by lam^(n/2), which preserves the
/// discrete mass identically and shrinks every physical frequency by lam.
pub fn scaling_map(f: &Field, lambda: usize) -> Result<Field> {
    if lambda == 0 || !lambda.is_power_of_two() {
        return Err(Error::Config(format!(
            "dilation factor must be a positive power of two, got {lambda}"
        )));
    }
    if lambda == 1 {
        return Ok(f.clone());
    }
    let g0 = f.grid();
    let fine = Grid::new(g0.dim(), g0.points() * lambda, g0.length() * lambda as f64)?;
    let src = transform_forward(f);
    let mut dst = SpectralField::zeros(fine);
    let amp = ((lambda as f64).powi(g0.dim() as i32)).sqrt();
    let gs = g0.points();
    let gd = fine.points();
    for flat in 0..g0.len() {
        let idx = g0.decode(flat);
        let mut target = 0usize;
        for a in 0..g0.dim() {
            let mode = if idx[a] < gs / 2 {
                idx[a] as i64
            } else {
                idx[a] as i64 - gs as i64
            };
            let slot = if mode >= 0 { mode as usize } else { (mode + gd as i64) as usize };
            target = target * gd + slot;
        }
        dst.coeffs_mut()[target] = src.coeffs()[flat] * amp;
    }
    Ok(transform_inverse(&dst))
}

/// Evolve a state and its dilation side by side and compare the invariants.
///
/// The dilated run uses dt' = lam^2 dt and T' = lam^2 T, so its steps match
/// the base run one for one. Mass must agree essentially exactly; spacetime
/// norms over scaling-compatible exponent pairs are invariant up to the
/// resolution error of the flow, and the final dilated state is compared
/// against the dilation of the final base state directly.
pub fn check_scaling(
    u0: &Field,
    cfg: &StepConfig,
    lambda: usize,
    mass_tol: f64,
    norm_tol: f64,
) -> Result<CheckReport> {
    let base = evolve(u0, cfg)?;
    let lam2 = (lambda * lambda) as f64;
    let fine_cfg = StepConfig {
        dt: cfg.dt * lam2,
        t_final: cfg.t_final * lam2,
        ..*cfg
    };
    let fine = evolve(&scaling_map(u0, lambda)?, &fine_cfg)?;

    let mut report = CheckReport::new("scaling");
    report
        .input("lambda", lambda)
        .input("dt", cfg.dt)
        .input("t_final", cfg.t_final)
        .input(
            "grid",
            format!("{}^{} L={}", u0.grid().points(), u0.grid().dim(), u0.grid().length()),
        );

    let m_base = mass(base.last());
    let m_fine = mass(fine.last());
    let mass_rel = (m_fine - m_base).abs() / m_base;
    report.measure("mass_rel", mass_rel);

    // Commutation of the discrete flow with the dilation at the final time.
    let mapped = scaling_map(base.last(), lambda)?;
    let mut diff2 = 0.0;
    let mut ref2 = 0.0;
    for (a, b) in fine.last().values().iter().zip(mapped.values()) {
        diff2 += (a - b).norm_sqr();
        ref2 += b.norm_sqr();
    }
    report.measure("flow_commutation_rel", (diff2 / ref2).sqrt());

    let mut worst = 0.0f64;
    for pair in admissible_pairs(u0.grid().dim())? {
        let nb = spacetime_norm(&base, pair.p_f64(), pair.q_f64(), (0.0, cfg.t_final))?;
        let nf = spacetime_norm(&fine, pair.p_f64(), pair.q_f64(), (0.0, fine_cfg.t_final))?;
        let rel = (nf.value - nb.value).abs() / nb.value;
        let label = if pair.p_f64().is_infinite() {
            format!("pair_rel(p=inf,q={})", pair.q_f64())
        } else {
            format!("pair_rel(p={},q={})", pair.p_f64(), pair.q_f64())
        };
        report.measure(&label, rel);
        worst = worst.max(rel);
    }
    report.measure("sup_pair_rel", worst);
    report.tolerance = Some(norm_tol);
    report.verdict = pass_fail(mass_rel <= mass_tol && worst <= norm_tol);
    Ok(report)
}

/// Almost-conservation data for one evolution examined at several smoothing
/// thresholds. The trajectory is evolved once; each snapshot is analyzed for
/// every threshold, so the cost of adding thresholds is diagnostic only.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub s: f64,
    pub thresholds: Vec<f64>,
    /// Thresholds at or above the axis Nyquist frequency; the smoothing is
    /// inert there apart from corner modes, so they act as controls and are
    /// excluded from decay fits.
    pub is_control: Vec<bool>,
    pub times: Vec<f64>,
    /// energies[i][j]: modified energy at thresholds[i], times[j].
    pub energies: Vec<Vec<f64>>,
    pub rates: Vec<Vec<f64>>,
    pub sup_increment: Vec<f64>,
    pub delta_energy: Vec<f64>,
    pub rate_integral: Vec<f64>,
    /// |integral of rate - delta E| / |delta E| for non-controls.
    pub consistency_rel: Vec<Option<f64>>,
    pub sup_rate: Vec<f64>,
    pub energy_scale: f64,
    /// Fitted exponent of sup_increment against threshold (non-controls).
    pub decay_slope: Option<f64>,
}

pub fn sweep_almost_conservation(
    u0: &Field,
    cfg: &StepConfig,
    s: f64,
    thresholds: &[f64],
) -> Result<SweepReport> {
    if thresholds.is_empty() {
        return Err(Error::Check("sweep needs at least one threshold".into()));
    }
    for &n in thresholds {
        Multiplier::IOperator { threshold: n, s }.validate()?;
    }
    let grid = u0.grid();
    let nyquist = grid.nyquist();
    let k = thresholds.len();

    let mut times: Vec<f64> = Vec::new();
    let mut energies: Vec<Vec<f64>> = vec![Vec::new(); k];
    let mut rates: Vec<Vec<f64>> = vec![Vec::new(); k];
    evolve_with(u0, cfg, |t, state| {
        times.push(t);
        for (i, &n) in thresholds.iter().enumerate() {
            energies[i].push(modified_energy(state, n, s)?.total());
            rates[i].push(increment_rate(state, n, s)?);
        }
        Ok(())
    })?;

    let is_control: Vec<bool> = thresholds.iter().map(|&n| n >= nyquist).collect();
    let mut sup_increment = Vec::with_capacity(k);
    let mut delta_energy = Vec::with_capacity(k);
    let mut rate_integral = Vec::with_capacity(k);
    let mut consistency_rel = Vec::with_capacity(k);
    let mut sup_rate = Vec::with_capacity(k);
    let mut energy_scale = 0.0f64;
    for i in 0..k {
        let e = &energies[i];
        let r = &rates[i];
        let e0 = e[0];
        let sup = e.iter().map(|v| (v - e0).abs()).fold(0.0f64, f64::max);
        let delta = e[e.len() - 1] - e0;
        let mut integral = 0.0;
        for j in 1..times.len() {
            integral += 0.5 * (r[j] + r[j - 1]) * (times[j] - times[j - 1]);
        }
        sup_increment.push(sup);
        delta_energy.push(delta);
        rate_integral.push(integral);
        consistency_rel.push(if is_control[i] || delta == 0.0 {
            None
        } else {
            Some((integral - delta).abs() / delta.abs())
        });
        sup_rate.push(r.iter().fold(0.0f64, |a, v| a.max(v.abs())));
        energy_scale = e.iter().fold(energy_scale, |a, v| a.max(v.abs()));
    }

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..k {
        if !is_control[i] && sup_increment[i] > 0.0 {
            xs.push(thresholds[i]);
            ys.push(sup_increment[i]);
        }
    }
    let decay_slope = log_log_fit(&xs, &ys).ok().map(|f| f.slope);

    Ok(SweepReport {
        s,
        thresholds: thresholds.to_vec(),
        is_control,
        times,
        energies,
        rates,
        sup_increment,
        delta_energy,
        rate_integral,
        consistency_rel,
        sup_rate,
        energy_scale,
        decay_slope,
    })
}

impl SweepReport {
    /// Render a verdict. Non-control thresholds must reconcile the rate
    /// integral with the measured energy change to within consistency_tol;
    /// control thresholds must keep the rate below control_rate_tol times the
    /// energy scale. When a slope ceiling is given, the sup increments must
    /// decrease strictly with the threshold and the fitted exponent must not
    /// exceed it; fewer than three usable points is inconclusive.
    pub fn to_check_report(
        &self,
        name: &str,
        consistency_tol: f64,
        slope_ceiling: Option<f64>,
        control_rate_tol: f64,
    ) -> CheckReport {
        let mut report = CheckReport::new(name);
        report.input("s", self.s);
        report.input("thresholds", format!("{:?}", self.thresholds));
        report.tolerance = Some(consistency_tol);

        let mut ok = true;
        for i in 0..self.thresholds.len() {
            let n = self.thresholds[i];
            report.measure(&format!("sup_increment(N={n})"), self.sup_increment[i]);
            report.measure(&format!("delta_energy(N={n})"), self.delta_energy[i]);
            report.measure(&format!("rate_integral(N={n})"), self.rate_integral[i]);
            if self.is_control[i] {
                report.measure(&format!("control_sup_rate(N={n})"), self.sup_rate[i]);
                if self.sup_rate[i] > control_rate_tol * self.energy_scale {
                    ok = false;
                    report.note(format!(
                        "control N={n} rate {} above {control_rate_tol} x scale {}",
                        self.sup_rate[i], self.energy_scale
                    ));
                }
            } else {
                match self.consistency_rel[i] {
                    Some(c) => {
                        report.measure(&format!("consistency_rel(N={n})"), c);
                        if c > consistency_tol {
                            ok = false;
                            report.note(format!("N={n} rate integral off by {c}"));
                        }
                    }
                    None => {
                        ok = false;
                        report.note(format!("N={n} energy change vanished; nothing to compare"));
                    }
                }
            }
        }

        report.slope = self.decay_slope;
        if let Some(ceiling) = slope_ceiling {
            let live: Vec<(f64, f64)> = self
                .thresholds
                .iter()
                .zip(&self.sup_increment)
                .zip(&self.is_control)
                .filter(|(_, &ctl)| !ctl)
                .map(|((&n, &d), _)| (n, d))
                .collect();
            if live.len() < 3 {
                report.note("fewer than three non-control thresholds; no decay fit");
                report.verdict = Verdict::Inconclusive;
                return report;
            }
            let mut sorted = live.clone();
            sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let decreasing = sorted.windows(2).all(|w| w[1].1 < w[0].1);
            if !decreasing {
                ok = false;
                report.note("sup increments do not decrease with the threshold");
            }
            match self.decay_slope {
                Some(slope) => {
                    if slope > ceiling {
                        ok = false;
                        report.note(format!("decay slope {slope} above ceiling {ceiling}"));
                    }
                }
                None => {
                    report.verdict = Verdict::Inconclusive;
                    report.note("decay fit unavailable");
                    return report;
                }
            }
        }
        report.verdict = pass_fail(ok);
        report
    }
}

/// Interaction-type spacetime bound over a finished trajectory.
///
/// The left side is the L^p_t L^q_x norm at p = 2(n-1), q = 2(n-1)/(n-2);
/// the right side is |u(0)|_{L^2}^(1/2) (sup_t |u|_{dot H^(1/2)})^((n-2)/(n-1)),
/// and the ratio must stay under the budget. A second variant trades time
/// integrability for a horizon factor: p' = 4(n-1)/n against
/// T^((n-2)/(4(n-1))) times the same right side. Both ratios are invariant
/// under the mass-preserving dilation.
pub fn check_interaction_morawetz(traj: &Trajectory, budget: f64) -> Result<CheckReport> {
    let n = traj.grid().dim();
    if !(n == 3 || n == 4) {
        return Err(Error::Check(format!(
            "interaction bound is instantiated for n in {{3, 4}}, got {n}"
        )));
    }
    let nf = n as f64;
    let t0 = traj.times()[0];
    let t1 = *traj.times().last().unwrap();
    if t1 <= t0 {
        return Err(Error::Check("trajectory spans no time".into()));
    }
    let p1 = 2.0 * (nf - 1.0);
    let q1 = 2.0 * (nf - 1.0) / (nf - 2.0);
    let lhs = spacetime_norm(traj, p1, q1, (t0, t1))?.value;
    let mut sup_half = 0.0f64;
    for state in traj.states() {
        sup_half = sup_half.max(sobolev_norm(state, 0.5, true)?);
    }
    let rhs = traj.initial().l2_norm().sqrt() * sup_half.powf((nf - 2.0) / (nf - 1.0));
    let ratio = lhs / rhs;

    let p2 = 4.0 * (nf - 1.0) / nf;
    let lhs2 = spacetime_norm(traj, p2, q1, (t0, t1))?.value;
    let rhs2 = (t1 - t0).powf((nf - 2.0) / (4.0 * (nf - 1.0))) * rhs;
    let ratio2 = lhs2 / rhs2;

    let mut report = CheckReport::new("interaction_morawetz");
    report
        .input("n", n)
        .input("horizon", t1 - t0)
        .input("budget", budget);
    report.measure("lhs", lhs);
    report.measure("rhs", rhs);
    report.measure("ratio", ratio);
    report.measure("lhs_time_traded", lhs2);
    report.measure("rhs_time_traded", rhs2);
    report.measure("ratio_time_traded", ratio2);
    report.bound_lhs = Some(lhs);
    report.bound_rhs = Some(rhs);
    report.ratio = Some(ratio);
    report.tolerance = Some(budget);
    report.verdict = pass_fail(ratio <= budget && ratio2 <= budget);
    Ok(report)
}

/// One threshold's worth of almost-Morawetz bookkeeping.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlmostMorawetzRow {
    pub threshold: f64,
    pub is_control: bool,
    /// A = int_0^T int |I u|^4 dx dt.
    pub interaction_integral: f64,
    pub action_start: f64,
    pub action_end: f64,
    /// B = |M(T) - M(0)|.
    pub action_swing: f64,
    /// D = A - B; the almost-interaction inequality asks D <= C0 / N.
    pub defect: f64,
    /// Whether |M| <= 2 sqrt(2) |I u|^3 |grad I u| held at both endpoints.
    pub cap_ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlmostMorawetzReport {
    pub s: f64,
    pub rows: Vec<AlmostMorawetzRow>,
}

/// Evolve once and compare the interaction integral of the smoothed field
/// against the swing of its Morawetz action, for each threshold.
pub fn sweep_almost_morawetz(
    u0: &Field,
    cfg: &StepConfig,
    s: f64,
    thresholds: &[f64],
) -> Result<AlmostMorawetzReport> {
    if u0.grid().dim() != 3 {
        return Err(Error::Check("the action sweep needs n = 3".into()));
    }
    if thresholds.is_empty() {
        return Err(Error::Check("sweep needs at least one threshold".into()));
    }
    for &n in thresholds {
        Multiplier::IOperator { threshold: n, s }.validate()?;
    }
    let nyquist = u0.grid().nyquist();
    let k = thresholds.len();

    let mut prev_t: Option<f64> = None;
    let mut prev_g: Vec<f64> = vec![0.0; k];
    let mut integrals = vec![0.0f64; k];
    let mut first: Option<Field> = None;
    let mut last: Option<Field> = None;
    evolve_with(u0, cfg, |t, state| {
        let mut g = vec![0.0; k];
        for (i, &n) in thresholds.iter().enumerate() {
            let w = apply_multiplier(state, &Multiplier::IOperator { threshold: n, s })?;
            g[i] = lebesgue_norm(&w, 4.0)?.powi(4);
        }
        if let Some(tp) = prev_t {
            for i in 0..k {
                integrals[i] += 0.5 * (g[i] + prev_g[i]) * (t - tp);
            }
        }
        prev_t = Some(t);
        prev_g = g;
        if first.is_none() {
            first = Some(state.clone());
        }
        last = Some(state.clone());
        Ok(())
    })?;
    let first = first.expect("trajectory has at least the initial snapshot");
    let last = last.expect("trajectory has at least the initial snapshot");

    let cap_factor = 2.0 * 2.0f64.sqrt();
    let mut rows = Vec::with_capacity(k);
    for (i, &n) in thresholds.iter().enumerate() {
        let action_start = morawetz_action(&first, n, s)?;
        let action_end = morawetz_action(&last, n, s)?;
        let mut cap_ok = true;
        for (action, state) in [(action_start, &first), (action_end, &last)] {
            let w = apply_multiplier(state, &Multiplier::IOperator { threshold: n, s })?;
            let cap = cap_factor * mass(&w).powf(1.5) * sobolev_norm(&w, 1.0, true)?;
            if action.abs() > cap * (1.0 + 1e-12) {
                cap_ok = false;
            }
        }
        let swing = (action_end - action_start).abs();
        rows.push(AlmostMorawetzRow {
            threshold: n,
            is_control: n >= nyquist,
            interaction_integral: integrals[i],
            action_start,
            action_end,
            action_swing: swing,
            defect: integrals[i] - swing,
            cap_ok,
        });
    }
    Ok(AlmostMorawetzReport { s, rows })
}

impl AlmostMorawetzReport {
    /// Verdict: the action cap must hold everywhere, the defect must not
    /// increase along non-control thresholds, and every row must satisfy
    /// A <= B + c0 / N.
    pub fn to_check_report(&self, c0: f64) -> CheckReport {
        let mut report = CheckReport::new("almost_morawetz");
        report.input("s", self.s).input("c0", c0);
        let mut ok = true;
        for row in &self.rows {
            let n = row.threshold;
            report.measure(&format!("A(N={n})"), row.interaction_integral);
            report.measure(&format!("B(N={n})"), row.action_swing);
            report.measure(&format!("defect(N={n})"), row.defect);
            if !row.cap_ok {
                ok = false;
                report.note(format!("action cap violated at N={n}"));
            }
            if row.interaction_integral > row.action_swing + c0 / n {
                ok = false;
                report.note(format!("A > B + c0/N at N={n}"));
            }
        }
        let mut live: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| !r.is_control)
            .map(|r| (r.threshold, r.defect))
            .collect();
        live.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in live.windows(2) {
            let slack = 1e-12 * w[0].1.abs().max(1e-300);
            if w[1].1 > w[0].1 + slack {
                ok = false;
                report.note(format!(
                    "defect grew from N={} ({}) to N={} ({})",
                    w[0].0, w[0].1, w[1].0, w[1].1
                ));
            }
        }
        report.verdict = pass_fail(ok);
        report
    }
}

/// Greedy split of a trajectory into maximal sub-intervals on which the
/// L^p_t L^q_x norm stays at or below epsilon, with boundaries restricted to
/// snapshot times.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionReport {
    pub p: f64,
    pub q: f64,
    pub epsilon: f64,
    pub intervals: Vec<(f64, f64)>,
    pub interval_norms: Vec<f64>,
    pub count: usize,
}

pub fn partition_by_norm(traj: &Trajectory, p: f64, q: f64, epsilon: f64) -> Result<PartitionReport> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::Check(format!(
            "partition needs a finite time exponent p >= 1, got {p}"
        )));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Check(format!("partition needs epsilon > 0, got {epsilon}")));
    }
    let times = traj.times();
    if times.len() < 2 {
        return Err(Error::Check("partition needs at least two snapshots".into()));
    }

    // Cumulative trapezoid of |u(t)|_{L^q}^p; interval norms are differences.
    let mut g = Vec::with_capacity(times.len());
    for state in traj.states() {
        g.push(lebesgue_norm(state, q)?.powf(p));
    }
    let mut cum = vec![0.0f64; times.len()];
    for j in 1..times.len() {
        cum[j] = cum[j - 1] + 0.5 * (g[j] + g[j - 1]) * (times[j] - times[j - 1]);
    }

    let budget = epsilon.powf(p);
    let mut intervals = Vec::new();
    let mut interval_norms = Vec::new();
    let mut i = 0usize;
    while i + 1 < times.len() {
        let mut j = i;
        while j + 1 < times.len() && cum[j + 1] - cum[i] <= budget {
            j += 1;
        }
        if j == i {
            // Even one snapshot gap exceeds the budget; no admissible split.
            return Err(Error::Partition(times[i]));
        }
        intervals.push((times[i], times[j]));
        interval_norms.push((cum[j] - cum[i]).powf(1.0 / p));
        i = j;
    }
    let count = intervals.len();
    Ok(PartitionReport {
        p,
        q,
        epsilon,
        intervals,
        interval_norms,
        count,
    })
}

/// For each threshold, the smallest power-of-two dilation bringing the
/// modified energy at or below the cap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RescaleRow {
    pub threshold: f64,
    pub lambda: Option<usize>,
    pub modified_energy: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RescaleReport {
    pub s: f64,
    pub energy_cap: f64,
    pub rows: Vec<RescaleRow>,
    /// Fitted exponent of lambda against the threshold.
    pub slope: Option<f64>,
    /// (1 - s)/s, the exponent the dilation cost is expected to track.
    pub expected_slope: f64,
}

impl RescaleReport {
    /// Verdict: the fitted dilation exponent must sit within slope_tol of
    /// (1 - s)/s. Missing dilations (cap reached) or too few points for a
    /// fit are inconclusive, not failures.
    pub fn to_check_report(&self, slope_tol: f64) -> CheckReport {
        let mut report = CheckReport::new("rescale");
        report
            .input("s", self.s)
            .input("energy_cap", self.energy_cap);
        for row in &self.rows {
            if let Some(l) = row.lambda {
                report.measure(&format!("lambda(N={})", row.threshold), l as f64);
            } else {
                report.note(format!("N={} hit the dilation cap", row.threshold));
            }
        }
        report.measure("expected_slope", self.expected_slope);
        report.slope = self.slope;
        report.tolerance = Some(slope_tol);
        match self.slope {
            Some(slope) if self.rows.iter().all(|r| r.lambda.is_some()) => {
                report.measure("slope", slope);
                report.verdict = pass_fail((slope - self.expected_slope).abs() <= slope_tol);
            }
            _ => {
                report.verdict = Verdict::Inconclusive;
                report.note("dilation exponent could not be fitted");
            }
        }
        report
    }
}

pub fn rescale_experiment(
    u0: &Field,
    s: f64,
    thresholds: &[f64],
    energy_cap: f64,
    lambda_cap: usize,
) -> Result<RescaleReport> {
    if thresholds.is_empty() {
        return Err(Error::Check("rescale needs at least one threshold".into()));
    }
    if !(energy_cap > 0.0 && energy_cap.is_finite()) {
        return Err(Error::Check(format!("rescale needs a positive cap, got {energy_cap}")));
    }
    if lambda_cap == 0 || !lambda_cap.is_power_of_two() {
        return Err(Error::Check(format!(
            "lambda cap must be a power of two, got {lambda_cap}"
        )));
    }
    let mut rows = Vec::with_capacity(thresholds.len());
    for &n in thresholds {
        Multiplier::IOperator { threshold: n, s }.validate()?;
        let mut found: Option<(usize, f64)> = None;
        let mut lambda = 1usize;
        while lambda <= lambda_cap {
            let dilated = scaling_map(u0, lambda)?;
            let e = modified_energy(&dilated, n, s)?.total();
            if e <= energy_cap {
                found = Some((lambda, e));
                break;
            }
            lambda *= 2;
        }
        rows.push(RescaleRow {
            threshold: n,
            lambda: found.map(|(l, _)| l),
            modified_energy: found.map(|(_, e)| e),
        });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for row in &rows {
        if let Some(l) = row.lambda {
            xs.push(row.threshold);
            ys.push(l as f64);
        }
    }
    let slope = log_log_fit(&xs, &ys).ok().map(|f| f.slope);
    Ok(RescaleReport {
        s,
        energy_cap,
        rows,
        slope,
        expected_slope: (1.0 - s) / s,
    })
}
