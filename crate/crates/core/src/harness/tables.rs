use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::builtins::*;
use super::config::RunConfig;
use crate::error::{FloerError, Result};
use crate::floer_function::FloerFunction;
use crate::pullback::kappa_bound_check;
use crate::scale_operator::{fredholm_point, LevelOperator, KERNEL_THRESHOLD};
use crate::scale_space::{FourierLoop, Level};
use crate::sobolev_evidence::{holder_embedding_check, mult_norm_sweep_with, MultSignature};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub suite: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub s: Option<f64>,
    pub quantity: String,
    pub value: f64,
}

fn row(suite: &str, n: usize, s: Option<f64>, quantity: impl Into<String>, value: f64) -> SweepRow {
    SweepRow { suite: suite.into(), n, s, quantity: quantity.into(), value }
}

/// Truncation sweeps of the Fredholm diagnostics, multiplication norms,
/// Hölder ratios and `κ` bounds.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();

    for &n in &cfg.n {
        let iota = LevelOperator::identity(2, n, Level::ONE).with_levels(Level::ONE, Level::ZERO);
        let p = fredholm_point(&iota, Level::ONE, Level::ZERO, KERNEL_THRESHOLD);
        rows.push(row("scale_operator", n, None, "inclusion_sigma_min H1->H0", p.sigma_min));
    }

    let f = harmonic_action();
    let hessian_rows = cfg
        .n
        .par_iter()
        .map(|&n| -> Result<Vec<SweepRow>> {
            let a = f.hess(&FourierLoop::zeros(2, n))?;
            let mut out = Vec::new();
            for (label, dom, cod) in [("H1->H0", Level::ONE, Level::ZERO), ("H2->H1", Level::TWO, Level::ONE)] {
                let p = fredholm_point(&a.with_levels(dom, cod), dom, cod, KERNEL_THRESHOLD);
                out.push(row("floer_function", n, None, format!("hessian_gap {label}"), p.gap));
                out.push(row("floer_function", n, None, format!("ker_dim {label}"), p.ker_dim as f64));
                out.push(row("floer_function", n, None, format!("coker_dim {label}"), p.coker_dim as f64));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    rows.extend(hessian_rows.into_iter().flatten());

    let t = &cfg.tolerances;
    for (name, g, sigs) in [
        ("smooth", smooth_multiplier(), MultSignature::ALL.to_vec()),
        ("rough", rough_multiplier(), vec![MultSignature::SobolevAlgebra]),
    ] {
        for sig in sigs {
            let r = mult_norm_sweep_with(&g, sig, &cfg.n, t.stabilize_from, t.rel_tol)?;
            for p in r.sweep {
                rows.push(row("sobolev_evidence", p.n, None, format!("mult_norm {name} {}", sig.label()), p.norm));
            }
        }
    }
    let holder = cfg.holder_options();
    for &s in &cfg.s {
        for p in holder_embedding_check(s, &holder)?.sweep {
            rows.push(row("sobolev_evidence", p.n, Some(s), "holder_ratio", p.ratio));
        }
    }

    let samples = sample_loops(cfg.seed, "pullback", cfg.samples);
    for &s in &cfg.s {
        let phi = map_at(shear(), s)?;
        let points = cfg
            .n
            .par_iter()
            .map(|&n| -> Result<Vec<SweepRow>> {
                let reports =
                    samples.iter().map(|q| kappa_bound_check(&f, &phi, &q.resized(n))).collect::<Result<Vec<_>>>()?;
                let worst = reports
                    .iter()
                    .max_by(|a, b| a.ratio().total_cmp(&b.ratio()))
                    .ok_or_else(|| FloerError::Config("no samples".into()))?;
                Ok(vec![
                    row("pullback", n, Some(s), "kappa", worst.kappa),
                    row("pullback", n, Some(s), "K_norm", worst.k_norm),
                    row("pullback", n, Some(s), "kappa_ratio", worst.ratio()),
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        rows.extend(points.into_iter().flatten());
    }
    Ok(rows)
}

pub fn to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| FloerError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| FloerError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| FloerError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_empty_s() {
        let text = to_csv(&[row("a", 16, None, "q", 1.5), row("b", 32, Some(0.75), "r", -2.0)]).unwrap();
        assert_eq!(text, "suite,N,s,quantity,value\na,16,,q,1.5\nb,32,0.75,r,-2.0\n");
    }
}
