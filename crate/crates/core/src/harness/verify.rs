use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::builtins::*;
use super::config::{workers_from_env, RunConfig, Suite};
use crate::error::{FloerError, Result};
use crate::floer_function::{check_floer_function, QuadraticSpectral, ScaledGradient, SpectralFamily};
use crate::floer_map::{leibniz_check, verify_axiom, verify_floer_axioms, Axiom, AxiomOptions, SuperpositionMap};
use crate::loop_atlas::{check_compatibility, check_transitivity, sphere_atlas_at};
use crate::pullback::certify_pullback;
use crate::sampling::{random_direction, stream};
use crate::scale_space::Level;
use crate::sobolev_evidence::{
    holder_embedding_check, mult_norm_sweep_with, Boundedness, HolderVerdict, MultSignature,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Pass,
    /// Negative control: the check must fail.
    ExpectedFail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    pub expect: Expect,
    /// Verdict of the check itself.
    pub passed: bool,
    /// Whether the verdict matches the expectation.
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

impl VerifyReport {
    /// `0` when every check meets its expectation, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

fn check<T: Serialize>(
    name: impl Into<String>,
    s: Option<f64>,
    expect: Expect,
    outcome: Result<(bool, T)>,
) -> CheckResult {
    let (passed, detail, error) = match outcome {
        Ok((p, d)) => (p, serde_json::to_value(d).unwrap_or(serde_json::Value::Null), None),
        Err(e) => (false, serde_json::Value::Null, Some(e.to_string())),
    };
    CheckResult {
        name: name.into(),
        s,
        expect,
        passed,
        ok: error.is_none() && passed == (expect == Expect::Pass),
        error,
        detail,
    }
}

/// Runs the selected suites on the worker pool and assembles the report in
/// suite-name order.
pub fn run_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let suites = cfg.suite_list();
    let run = || suites.par_iter().map(|&s| run_suite(s, cfg)).collect::<Vec<_>>();
    let reports = match workers_from_env()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| FloerError::Config(e.to_string()))?
            .install(run),
        None => run(),
    };
    Ok(VerifyReport { config: cfg.clone(), passed: reports.iter().all(|r| r.passed), suites: reports })
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> SuiteReport {
    let checks = match suite {
        Suite::FloerFunction => floer_function_suite(cfg),
        Suite::FloerMap => floer_map_suite(cfg),
        Suite::LoopAtlas => loop_atlas_suite(cfg),
        Suite::Pullback => pullback_suite(cfg),
        Suite::SobolevEvidence => sobolev_suite(cfg),
    };
    SuiteReport { suite, passed: checks.iter().all(|c| c.ok), checks }
}

fn floer_map_suite(cfg: &RunConfig) -> Vec<CheckResult> {
    let opts = cfg.axiom_options();
    let samples = sample_loops(cfg.seed, "floer_map", cfg.samples);
    let mut out = Vec::new();
    for &s in &cfg.s {
        for chart in [shear(), rotation()] {
            let name = format!("axioms/{}", chart.name());
            out.push(check(
                name,
                Some(s),
                Expect::Pass,
                (|| {
                    let reports = verify_floer_axioms(&map_at(chart, s)?, &samples, &opts)?;
                    Ok((reports.iter().all(|r| r.verdict.passed()), reports))
                })(),
            ));
        }
    }
    let s = cfg.s[0];
    let t = &cfg.tolerances;
    out.push(check(
        "leibniz/shear∘rotation",
        None,
        Expect::Pass,
        (|| {
            let mut rng = stream(cfg.seed, "leibniz");
            // band 4 at N = 64 keeps the products inside the truncation
            let q = samples[0].resized(64);
            let xi = random_direction(&mut rng, 2, 64, 4, Level::ONE);
            let eta = random_direction(&mut rng, 2, 64, 4, Level::ZERO);
            let r = leibniz_check(&map_at(shear(), s)?, &map_at(rotation(), s)?, &q, &xi, &eta, &[1e-2, 3e-3, 1e-3])?;
            Ok(((r.slope - t.leibniz_slope).abs() <= t.leibniz_slack, r))
        })(),
    ));
    if cfg.negative_controls {
        out.push(check(
            format!("control/{}", kinked().name()),
            Some(s),
            Expect::ExpectedFail,
            (|| {
                let phi = map_at(kinked(), s)?;
                let loops = [crossing_loop(SAMPLE_TRUNCATION)];
                let reports = [Axiom::II1, Axiom::II2]
                    .iter()
                    .map(|&ax| verify_axiom(&phi, ax, &loops, &opts))
                    .collect::<Result<Vec<_>>>()?;
                Ok((reports.iter().all(|r| r.verdict.passed()), reports))
            })(),
        ));
        out.push(check(
            format!("control/{}", rotation().name()),
            Some(0.5),
            Expect::ExpectedFail,
            (|| {
                let phi = SuperpositionMap::control(rotation(), 0.5);
                let r = verify_axiom(&phi, Axiom::II1, &samples, &opts)?;
                Ok((r.verdict.passed(), r))
            })(),
        ));
    }
    out
}

fn floer_function_suite(cfg: &RunConfig) -> Vec<CheckResult> {
    let opts = cfg.function_options();
    let samples = sample_loops(cfg.seed, "floer_function", cfg.samples);
    let mut out = vec![
        check(
            "action/harmonic",
            None,
            Expect::Pass,
            (|| {
                let r = check_floer_function(&harmonic_action(), &samples, &opts)?;
                Ok((r.passed, r))
            })(),
        ),
        check(
            "action/anharmonic",
            None,
            Expect::Pass,
            (|| {
                let r = check_floer_function(&anharmonic_action(), &samples, &opts)?;
                Ok((r.passed, r))
            })(),
        ),
    ];
    if cfg.negative_controls {
        out.push(check(
            "control/scaled_gradient",
            None,
            Expect::ExpectedFail,
            (|| {
                let f = ScaledGradient { inner: harmonic_action(), factor: 1.01 };
                let r = check_floer_function(&f, &samples, &opts)?;
                Ok((r.passed, r))
            })(),
        ));
        out.push(check(
            "control/inclusion",
            None,
            Expect::ExpectedFail,
            (|| {
                let f = QuadraticSpectral::family(SpectralFamily::Identity { dim: 2 })?;
                let r = check_floer_function(&f, &samples, &opts)?;
                Ok((r.passed, r))
            })(),
        ));
    }
    out
}

fn pullback_suite(cfg: &RunConfig) -> Vec<CheckResult> {
    let opts = cfg.function_options();
    let samples = sample_loops(cfg.seed, "pullback", cfg.samples);
    let f = harmonic_action();
    cfg.s
        .iter()
        .map(|&s| {
            check(
                "shear/harmonic",
                Some(s),
                Expect::Pass,
                (|| {
                    let r = certify_pullback(&f, &map_at(shear(), s)?, &samples, &opts)?;
                    Ok((r.passed(), r))
                })(),
            )
        })
        .collect()
}

fn sobolev_suite(cfg: &RunConfig) -> Vec<CheckResult> {
    let t = &cfg.tolerances;
    let mult = |g: &crate::sobolev_evidence::Multiplier, sig: MultSignature| {
        let r = mult_norm_sweep_with(g, sig, &cfg.n, t.stabilize_from, t.rel_tol)?;
        Ok((r.verdict == Boundedness::Bounded, r))
    };
    let mut out: Vec<CheckResult> = MultSignature::ALL
        .iter()
        .map(|&sig| {
            check(format!("multiplication/smooth {}", sig.label()), None, Expect::Pass, mult(&smooth_multiplier(), sig))
        })
        .collect();
    let holder = cfg.holder_options();
    let embedding = |s: f64| {
        let r = holder_embedding_check(s, &holder)?;
        Ok((r.verdict == HolderVerdict::Embeds, r))
    };
    for &s in &cfg.s {
        out.push(check("holder", Some(s), Expect::Pass, embedding(s)));
    }
    if cfg.negative_controls {
        let sig = MultSignature::SobolevAlgebra;
        out.push(check(
            format!("control/multiplication/rough {}", sig.label()),
            None,
            Expect::ExpectedFail,
            mult(&rough_multiplier(), sig),
        ));
        out.push(check("control/holder", Some(0.5), Expect::ExpectedFail, embedding(0.5)));
    }
    out
}

fn loop_atlas_suite(cfg: &RunConfig) -> Vec<CheckResult> {
    let opts = cfg.axiom_options();
    let mut out = Vec::new();
    for &s in &cfg.s {
        out.push(check(
            "sphere/self",
            Some(s),
            Expect::Pass,
            (|| {
                let atlas = sphere_atlas_at(s);
                let r = check_compatibility(&atlas, &atlas, &atlas.corpus, cfg.atlas_loops, &opts)?;
                Ok((r.passed, r))
            })(),
        ));
    }
    let s = cfg.s[0];
    let small = AxiomOptions {
        sweep: cfg.n.iter().copied().filter(|&n| n <= cfg.transitivity_max_n).collect(),
        ..opts.clone()
    };
    let tol = cfg.tolerances.cocycle;
    out.push(check(
        "sphere/transitivity",
        Some(s),
        Expect::Pass,
        (|| {
            if small.sweep.is_empty() {
                return Err(FloerError::Config("no truncation at or below transitivity_max_n".into()));
            }
            let atlas = sphere_atlas_at(s);
            let tilted = atlas.rotated("tilted", [1.0, 0.0, 0.0], 0.3);
            let twisted = atlas.rotated("twisted", [0.0, 1.0, 0.0], -0.25);
            let n = *cfg.n.last().expect("validated");
            let r = check_transitivity(&atlas, &tilted, &twisted, &atlas.corpus, n, &small)?;
            let c = &r.cocycle;
            let residuals = c.apply_residual.max(c.dphi_residual).max(c.inverse_residual);
            Ok((r.passed && residuals <= tol, r))
        })(),
    ));
    if cfg.negative_controls {
        out.push(check(
            "control/kinked",
            Some(s),
            Expect::ExpectedFail,
            (|| {
                let (plane, kinked) = kinked_atlases(s);
                let r = check_compatibility(&plane, &kinked, &plane.corpus, cfg.atlas_loops, &opts)?;
                Ok((r.passed, r))
            })(),
        ));
    }
    out
}
