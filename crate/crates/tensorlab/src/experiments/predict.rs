//! Pure formula evaluation: scales per mode, per-value spike predictions, and
//! the noise contraction bound.

use tensorlab_core::theory::{noise_contraction_bound, scales, spike_prediction};

use crate::config::ExperimentConfig;
use crate::error::RunError;
use crate::record::{Cell, Record};

fn row(kind: &str, mode: Option<usize>, index: Option<usize>) -> Record {
    Record::new().with("kind", kind).with("mode", mode).with("index", index)
}

pub fn run(cfg: &ExperimentConfig) -> Result<Vec<Record>, RunError> {
    let n_param = cfg.n_param();
    let bound = noise_contraction_bound(&cfg.dims, &cfg.ranks, cfg.delta, cfg.c_universal)?;
    let mut out = Vec::new();
    let blank = |r: Record| {
        r.with("s2", Cell::Missing)
            .with("rho", Cell::Missing)
            .with("xi", Cell::Missing)
            .with("zeta_plus", Cell::Missing)
            .with("eigenvalue_location", Cell::Missing)
    };
    for mode in 0..cfg.dims.len() {
        let sc = scales(&cfg.dims, n_param, mode)?;
        out.push(blank(row("scale", Some(mode), None)).with("mu", sc.mu).with("sigma", sc.sigma));
        for (i, &s2) in cfg.s2.iter().enumerate() {
            let p = spike_prediction(s2, sc.sigma);
            out.push(
                row("spike", Some(mode), Some(i))
                    .with("s2", s2)
                    .with("rho", p.rho)
                    .with("xi", p.xi)
                    .with("zeta_plus", p.zeta_plus)
                    .with("eigenvalue_location", p.eigenvalue_location(&sc))
                    .with("mu", sc.mu)
                    .with("sigma", sc.sigma),
            );
        }
    }
    out.push(blank(row("bound", None, None)).with("mu", Cell::Missing).with("sigma", Cell::Missing));
    let extra = |r: Record, b: Option<f64>| {
        r.with("n", n_param as usize)
            .with("noise_bound", b)
            .with("delta", cfg.delta)
            .with("c_universal", cfg.c_universal)
    };
    let last = out.len() - 1;
    out = out.into_iter().enumerate().map(|(i, r)| extra(r, (i == last).then_some(bound))).collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Experiment;

    #[test]
    fn reference_scales_and_rows() {
        let mut cfg = ExperimentConfig::defaults(Experiment::Predict);
        let sigma = (300.0f64 * 500.0 * 700.0).sqrt() / 1500.0;
        cfg.s2 = vec![sigma, 2.0 * sigma];
        let rows = run(&cfg).unwrap();
        assert_eq!(rows.len(), 3 * 3 + 1);
        let first = &rows[0];
        assert!((first.get("sigma").unwrap().as_f64().unwrap() - 6.8313).abs() < 1e-4);
        let below = &rows[1];
        assert_eq!(below.get("xi"), Some(&Cell::Missing));
        let above = &rows[2];
        assert!((above.get("rho").unwrap().as_f64().unwrap() - 2.0).abs() < 1e-12);
        assert!((above.get("xi").unwrap().as_f64().unwrap() - 2.5).abs() < 1e-12);
        assert!((above.get("zeta_plus").unwrap().as_f64().unwrap() - 0.75).abs() < 1e-12);
        assert!(rows.last().unwrap().get("noise_bound").unwrap().as_f64().is_some());
    }
}
