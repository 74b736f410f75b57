//! Pass/fail comparisons of simulated statistics against the asymptotic
//! predictions, parameterized by their tolerances.

use std::fmt::Write;

use crate::experiments::esd::EsdTrial;
use crate::experiments::{EsdReport, ScalingReport, SweepReport};
use crate::stats::{mean, median, spearman};

#[derive(Debug, Clone, PartialEq)]
pub struct GateResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl GateResult {
    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// Bulk KS distance per mode, averaged over the given trials, must stay below `max_ks`.
pub fn ks_gate(trials: &[EsdTrial], max_ks: f64) -> GateResult {
    let order = trials.first().map_or(0, |t| t.modes.len());
    let means: Vec<f64> =
        (0..order).map(|m| mean(&trials.iter().map(|t| t.modes[m].ks_bulk).collect::<Vec<_>>())).collect();
    GateResult {
        name: "semicircle bulk".into(),
        passed: !means.is_empty() && means.iter().all(|&d| d < max_ks),
        detail: format!("mean KS per mode {:.4?} over {} trials (limit {max_ks})", means, trials.len()),
    }
}

/// Fraction of `(direction, trial)` pairs with `ρ > rho_min` whose statistic lies
/// within `tol` of its prediction.
fn direction_fraction(
    trials: &[EsdTrial],
    rho_min: f64,
    tol: f64,
    pick: impl Fn(&crate::experiments::esd::Direction) -> Option<(f64, f64)>,
) -> (usize, usize) {
    let (mut hit, mut total) = (0, 0);
    for t in trials {
        for m in &t.modes {
            for d in m.directions.iter().filter(|d| d.prediction.rho > rho_min) {
                if let Some((emp, theo)) = pick(d) {
                    total += 1;
                    if (emp - theo).abs() <= tol {
                        hit += 1;
                    }
                }
            }
        }
    }
    (hit, total)
}

pub fn spike_position_gate(trials: &[EsdTrial], rho_min: f64, tol: f64, min_fraction: f64) -> GateResult {
    let (hit, total) = direction_fraction(trials, rho_min, tol, |d| d.prediction.xi.map(|xi| (d.position, xi)));
    fraction_gate("spike positions", hit, total, min_fraction, tol)
}

pub fn spike_alignment_gate(trials: &[EsdTrial], rho_min: f64, tol: f64, min_fraction: f64) -> GateResult {
    let (hit, total) = direction_fraction(trials, rho_min, tol, |d| Some((d.alignment, d.prediction.zeta_plus)));
    fraction_gate("spike alignments", hit, total, min_fraction, tol)
}

fn fraction_gate(name: &str, hit: usize, total: usize, min_fraction: f64, tol: f64) -> GateResult {
    let frac = if total == 0 { 0.0 } else { hit as f64 / total as f64 };
    GateResult {
        name: name.into(),
        passed: total > 0 && frac >= min_fraction,
        detail: format!("{hit}/{total} pairs within ±{tol} ({:.1}%, need {:.0}%)", 100.0 * frac, 100.0 * min_fraction),
    }
}

/// Number of outliers above `2 + ε` in `mode` equals `#{q: ρ_q > 1}` in at least `min_trials` trials.
pub fn outlier_gate(report: &EsdReport, mode: usize, min_trials: usize) -> GateResult {
    let mut detail = String::new();
    let mut hits = 0;
    for t in &report.trials {
        let m = &t.modes[mode];
        let ok = m.outliers == m.predicted_outliers;
        hits += usize::from(ok);
        let rhos: Vec<String> = m.directions.iter().map(|d| format!("{:.3}", d.prediction.rho)).collect();
        let _ = write!(
            detail,
            "[trial {}: {} outliers vs {} predicted, rho=({})] ",
            t.trial,
            m.outliers,
            m.predicted_outliers,
            rhos.join(",")
        );
    }
    GateResult {
        name: format!("outlier count mode {mode}"),
        passed: hits >= min_trials,
        detail: format!(
            "{hits}/{} trials match (need {min_trials}; eps {}) {}",
            report.trials.len(),
            report.epsilon,
            detail.trim_end()
        ),
    }
}

pub fn esd_gates(report: &EsdReport) -> Vec<GateResult> {
    let last = report.dims.len() - 1;
    let need = (report.trials.len() * 4).div_ceil(5);
    vec![
        ks_gate(&report.trials, 0.05),
        spike_position_gate(&report.trials, 1.2, 0.15, 0.9),
        spike_alignment_gate(&report.trials, 1.2, 0.07, 0.9),
        outlier_gate(report, last, need),
    ]
}

#[derive(Debug, Clone, Copy)]
pub struct SweepTolerances {
    /// Allowed `|mean MLSVD alignment − prediction|` well above the first transition.
    pub tol: f64,
    /// "Well above" means `ω ≥ above · ω₁`.
    pub above: f64,
    /// "Well below" means `ω ≤ below · ω₁`, where the alignment must stay under `floor`.
    pub below: f64,
    pub floor: f64,
}

impl Default for SweepTolerances {
    fn default() -> Self {
        SweepTolerances { tol: 0.08, above: 1.5, below: 0.5, floor: 0.1 }
    }
}

pub fn sweep_gate(report: &SweepReport, tol: &SweepTolerances) -> GateResult {
    let mut failures = Vec::new();
    let (mut above, mut below) = (0, 0);
    for p in &report.points {
        let w1 = report.first_transition(p.mode);
        let ml = mean(&p.mlsvd);
        let ho = mean(&p.hooi);
        if p.omega >= tol.above * w1 {
            above += 1;
            if (ml - p.predicted).abs() > tol.tol {
                failures
                    .push(format!("mode {} omega {}: mlsvd {ml:.4} vs predicted {:.4}", p.mode, p.omega, p.predicted));
            }
        }
        if p.omega < tol.below * w1 {
            below += 1;
            if ml >= tol.floor {
                failures.push(format!("mode {} omega {}: mlsvd {ml:.4} below transition", p.mode, p.omega));
            }
        }
        if ho < ml {
            failures.push(format!("mode {} omega {}: hooi {ho:.6} < mlsvd {ml:.6}", p.mode, p.omega));
        }
    }
    let transitions: Vec<String> =
        (0..report.dims.len()).map(|m| format!("{:.3}", report.first_transition(m))).collect();
    GateResult {
        name: "alignment sweep".into(),
        passed: failures.is_empty(),
        detail: format!(
            "{above} points above and {below} below the first transitions ({}); {} failures{}{}",
            transitions.join(", "),
            failures.len(),
            if failures.is_empty() { "" } else { ": " },
            failures.join("; ")
        ),
    }
}

/// Per mode, Spearman correlation between `N` and the mean rescaled gap.
pub fn gap_trend(report: &ScalingReport) -> Vec<f64> {
    let ns = report.n_values();
    let order = report.runs.first().map_or(0, |r| r.modes.len());
    (0..order)
        .map(|m| {
            let gaps: Vec<f64> = ns
                .iter()
                .map(|&n| mean(&report.runs_at(n).map(|r| r.modes[m].rescaled_gap).collect::<Vec<_>>()))
                .collect();
            let nf: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
            spearman(&nf, &gaps)
        })
        .collect()
}

pub fn median_iterations(report: &ScalingReport, n_param: u64) -> f64 {
    median(&report.runs_at(n_param).map(|r| r.iterations as f64).collect::<Vec<_>>())
}

pub fn scaling_gates(report: &ScalingReport, max_spearman: f64) -> Vec<GateResult> {
    let trend = gap_trend(report);
    let ns = report.n_values();
    let (lo, hi) = (ns[0], ns[ns.len() - 1]);
    let (it_lo, it_hi) = (median_iterations(report, lo), median_iterations(report, hi));
    vec![
        GateResult {
            name: "first-iteration gap trend".into(),
            passed: trend.iter().all(|&s| s <= max_spearman),
            detail: format!("Spearman(N, mean rescaled gap) per mode {trend:.3?} (limit {max_spearman})"),
        },
        GateResult {
            name: "iterations to convergence".into(),
            passed: it_hi <= it_lo,
            detail: format!("median iterations {it_lo} at N={lo}, {it_hi} at N={hi}"),
        },
    ]
}
