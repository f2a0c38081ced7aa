use std::fmt::Write;

use super::builtins::*;
use crate::error::{FloerError, Result};
use crate::floer_function::{FloerFunction, FunctionCheckOptions};
use crate::floer_map::AxiomOptions;
use crate::loop_atlas::{check_compatibility, cocycle_check, sphere_atlas_at};
use crate::pullback::certify_pullback;
use crate::scale_operator::FredholmReport;

pub const DEMOS: [&str; 2] = ["pullback", "atlas"];

const DEMO_SWEEP: [usize; 3] = [16, 32, 64];

pub fn run_demo(name: &str) -> Result<String> {
    match name {
        "pullback" => pullback_demo(),
        "atlas" => atlas_demo(),
        other => Err(FloerError::Config(format!("unknown demo `{other}` (available: {})", DEMOS.join(", ")))),
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn fredholm_table(out: &mut String, label: &str, reports: &[FredholmReport]) {
    for (i, r) in reports.iter().enumerate() {
        let _ = writeln!(out, "  {label} sample {i}: {:?}, gap variation {:.2e}", r.verdict, r.gap_variation);
        for p in &r.sweep {
            let _ = writeln!(out, "    N={:<4} ker={} coker={} gap={:.6}", p.n, p.ker_dim, p.coker_dim, p.gap);
        }
    }
}

fn pullback_demo() -> Result<String> {
    let s = 0.75;
    let f = harmonic_action();
    let phi = map_at(shear(), s)?;
    let samples = sample_loops(0, "demo", 1);
    let opts = FunctionCheckOptions { sweep: DEMO_SWEEP.to_vec(), ..FunctionCheckOptions::default() };
    let r = certify_pullback(&f, &phi, &samples, &opts)?;
    let (g, h, p) = (&r.report.gradient, &r.report.hessian, &r.pullback);
    let mut out = String::new();
    let _ = writeln!(out, "pull-back of {} along {}, s = {s}, N in {DEMO_SWEEP:?}", f.name(), shear().name());
    let _ = writeln!(out);
    let _ = writeln!(out, "Gradient");
    let d = &g.differentiability;
    let _ = writeln!(
        out,
        "  differentiability  {} pairings, max rel error {:.2e} (tol {:.0e})  {}",
        d.checks,
        d.max_rel_error,
        d.tol,
        verdict(d.passed)
    );
    let _ = writeln!(
        out,
        "  restriction        coefficient gap {:.2e}, trend {:?}  {}",
        g.restriction.max_coefficient_gap,
        g.restriction.trend,
        verdict(g.restriction.passed)
    );
    let _ = writeln!(out, "  C1                 max rel error {:.2e}  {}", g.c1.max_rel_error, verdict(g.c1.passed));
    let _ = writeln!(out);
    let _ = writeln!(out, "Hessian");
    let d = &h.h0_hessian;
    let _ = writeln!(
        out,
        "  H0-Hessian         {} pairings, max rel error {:.2e} (tol {:.0e})  {}",
        d.checks,
        d.max_rel_error,
        d.tol,
        verdict(d.passed)
    );
    let _ = writeln!(
        out,
        "  symmetry           rel residual {:.2e}  {}",
        h.symmetry.max_rel_residual,
        verdict(h.symmetry.passed)
    );
    let _ = writeln!(
        out,
        "  gradient-Hessian   max rel error {:.2e}  {}",
        h.gradient_hessian.max_rel_error,
        verdict(h.gradient_hessian.passed)
    );
    let _ = writeln!(
        out,
        "  restriction        coefficient gap {:.2e}  {}",
        h.restriction.max_coefficient_gap,
        verdict(h.restriction.passed)
    );
    let moduli: Vec<String> = h.continuity.moduli.iter().map(|m| format!("{m:.2e}")).collect();
    let _ = writeln!(out, "  continuity         moduli {}  {}", moduli.join(" "), verdict(h.continuity.holds));
    let _ = writeln!(out);
    let _ = writeln!(out, "κ");
    let _ = writeln!(out, "  {:<5} {:>12} {:>12} {:>8}", "N", "kappa", "K_norm", "ratio");
    for k in &p.kappa_sweep {
        let _ = writeln!(out, "  {:<5} {:>12.6} {:>12.6} {:>8.4}", k.n, k.kappa, k.k_norm, k.ratio());
    }
    let _ = writeln!(out, "  bound holds: {}", verdict(p.kappa_holds));
    let tail: Vec<String> = p.compact_tail.iter().map(|t| format!("{}:{:.2e}", t.mode, t.sigma)).collect();
    let _ = writeln!(out, "  K tail {}  slope {:.3}  {}", tail.join(" "), p.tail_slope, verdict(p.tail_decays));
    let _ = writeln!(out);
    let _ = writeln!(out, "Fredholm");
    fredholm_table(&mut out, "H1->H0", &h.fredholm.h1_h0);
    fredholm_table(&mut out, "H2->H1", &h.fredholm.h2_h1);
    fredholm_table(&mut out, "conjugated summand", &p.conjugated_summand);
    let _ = writeln!(out);
    let _ = writeln!(out, "overall: {}", verdict(r.passed()));
    Ok(out)
}

fn atlas_demo() -> Result<String> {
    let s = 0.75;
    let atlas = sphere_atlas_at(s);
    let mut out = String::new();
    let _ = writeln!(out, "atlas `{}` at s = {s}", atlas.name);
    for c in &atlas.charts {
        let _ = writeln!(out, "  chart {:<8} {:?}", c.id, c.chart);
    }
    let _ = writeln!(out, "  corpus: {}", atlas.corpus.iter().map(|l| l.label.as_str()).collect::<Vec<_>>().join(", "));
    let _ = writeln!(out);
    let opts = AxiomOptions { sweep: DEMO_SWEEP.to_vec(), ..AxiomOptions::default() };
    let r = check_compatibility(&atlas, &atlas, &atlas.corpus, 1, &opts)?;
    let _ = writeln!(out, "Transitions (largest reading at N = {})", DEMO_SWEEP[DEMO_SWEEP.len() - 1]);
    for pair in &r.pairs {
        let cells: Vec<String> = pair
            .axioms
            .iter()
            .map(|a| {
                let top = a.sweep.last().map_or(f64::NAN, |p| p.norm);
                format!("{} {:.4} {}", a.axiom.label(), top, verdict(a.verdict.passed()))
            })
            .collect();
        let _ = writeln!(out, "  {:>6} -> {:<6} {}", pair.from, pair.to, cells.join(" | "));
    }
    let _ = writeln!(out, "  compatible: {}", verdict(r.passed));
    let _ = writeln!(out);
    let tilted = atlas.rotated("tilted", [1.0, 0.0, 0.0], 0.3);
    let twisted = atlas.rotated("twisted", [0.0, 1.0, 0.0], -0.25);
    let _ = writeln!(out, "Cocycle residuals ({} -> {} -> {})", atlas.name, tilted.name, twisted.name);
    let _ = writeln!(out, "  {:<5} {:>8} {:>12} {:>12} {:>12}", "N", "triples", "apply", "dphi", "inverse");
    for n in DEMO_SWEEP {
        let c = cocycle_check(&atlas, &tilted, &twisted, &atlas.corpus, n)?;
        let _ = writeln!(
            out,
            "  {:<5} {:>8} {:>12.3e} {:>12.3e} {:>12.3e}  {}",
            c.n,
            c.triples,
            c.apply_residual,
            c.dphi_residual,
            c.inverse_residual,
            verdict(c.passed)
        );
    }
    Ok(out)
}
