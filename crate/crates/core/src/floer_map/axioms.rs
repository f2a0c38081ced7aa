use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::superposition::SuperpositionMap;
use crate::error::Result;
use crate::sampling::{random_direction, stream};
use crate::scale_operator::{extension_consistency, op_norm_exponents, ExtensionReport};
use crate::scale_space::{FourierLoop, Level};
use crate::sweep::{as_pairs, classify, SweepPoint, Trend};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    #[serde(rename = "(i)1")]
    I1,
    #[serde(rename = "(i)2")]
    I2,
    #[serde(rename = "(ii)1")]
    II1,
    #[serde(rename = "(ii)2")]
    II2,
}

impl Axiom {
    pub const ALL: [Axiom; 4] = [Axiom::I1, Axiom::I2, Axiom::II1, Axiom::II2];

    pub fn label(self) -> &'static str {
        match self {
            Axiom::I1 => "(i)1",
            Axiom::I2 => "(i)2",
            Axiom::II1 => "(ii)1",
            Axiom::II2 => "(ii)2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomOptions {
    pub sweep: Vec<usize>,
    pub stabilize_from: usize,
    pub rel_tol: f64,
    /// Perturbation sizes for the continuity moduli, decreasing.
    pub steps: Vec<f64>,
    /// Truncation at which continuity is probed.
    pub continuity_n: usize,
    /// Largest accepted relative error of the divided difference of `q ↦ Dφ|_q`.
    pub derivative_tol: f64,
    pub seed: u64,
}

impl Default for AxiomOptions {
    fn default() -> Self {
        Self {
            sweep: crate::sweep::DEFAULT_SWEEP.to_vec(),
            stabilize_from: 64,
            rel_tol: 0.05,
            steps: vec![1e-1, 1e-2, 1e-3],
            continuity_n: 32,
            derivative_tol: 1e-4,
            seed: 0,
        }
    }
}

/// Norm of one reading of an axiom (e.g. `Dφ ∈ 𝓛(H₀)`) along the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reading {
    pub label: String,
    pub sweep: Vec<SweepPoint>,
    pub trend: Trend,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Continuity {
    pub steps: Vec<f64>,
    /// `max_q ‖D_{q+hζ} − D_q‖` for each step `h`.
    pub moduli: Vec<f64>,
    /// Relative error of the central divided difference against the next
    /// derivative, for the `C¹` clauses.
    pub derivative_residual: Option<f64>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub s: f64,
    /// Largest reading at each `N`.
    pub sweep: Vec<SweepPoint>,
    pub readings: Vec<Reading>,
    /// Divided-difference modulus `max ω(h)/h` at the smallest step.
    pub continuity_modulus: f64,
    pub continuity: Continuity,
    pub verdict: Verdict,
}

struct ReadingSpec {
    label: &'static str,
    levels: (f64, f64, f64),
    bilinear: bool,
}

fn readings_for(axiom: Axiom, s: f64) -> Vec<ReadingSpec> {
    match axiom {
        Axiom::I1 => vec![
            ReadingSpec { label: "dφ ∈ 𝓛(H_1)", levels: (1.0, 1.0, 0.0), bilinear: false },
            ReadingSpec { label: "Dφ ∈ 𝓛(H_0)", levels: (0.0, 0.0, 0.0), bilinear: false },
        ],
        Axiom::I2 => vec![ReadingSpec { label: "Dφ ∈ 𝓛(H_-1)", levels: (-1.0, -1.0, 0.0), bilinear: false }],
        Axiom::II1 => vec![
            ReadingSpec { label: "d²φ ∈ 𝓛(H_1,H_1;H_1)", levels: (1.0, 1.0, 1.0), bilinear: true },
            ReadingSpec { label: "D²φ ∈ 𝓛(H_s,H_0;H_0)", levels: (s, 0.0, 0.0), bilinear: true },
        ],
        Axiom::II2 => {
            vec![ReadingSpec {
                label: "D²φ ∈ 𝓛(H_1+s,H_-1;H_-1)", levels: (1.0 + s, -1.0, -1.0), bilinear: true
            }]
        }
    }
}

fn reading_norm(phi: &SuperpositionMap, q: &FourierLoop, spec: &ReadingSpec) -> Result<f64> {
    let (a, b, c) = spec.levels;
    if spec.bilinear {
        Ok(phi.d2phi(q)?.norm(a, b, c).value)
    } else {
        Ok(op_norm_exponents(&phi.dphi(q)?, a, b))
    }
}

fn diff_norm(phi: &SuperpositionMap, q0: &FourierLoop, q1: &FourierLoop, spec: &ReadingSpec) -> Result<f64> {
    let (a, b, c) = spec.levels;
    if spec.bilinear {
        let d = phi.d2phi(q1)?.sub(&phi.d2phi(q0)?);
        Ok(d.norm(a, b, c).value)
    } else {
        Ok(op_norm_exponents(&phi.dphi(q1)?.sub(&phi.dphi(q0)?), a, b))
    }
}

/// Central divided difference of `q ↦ Dφ|_q` against `η ↦ D²φ|_q(ζ, η)`, in
/// the operator norm of the reading's level.
fn derivative_residual(phi: &SuperpositionMap, q: &FourierLoop, zeta: &FourierLoop, h: f64, level: f64) -> Result<f64> {
    let plus = phi.dphi(&q.axpy(h, zeta))?;
    let minus = phi.dphi(&q.axpy(-h, zeta))?;
    let fd = plus.sub(&minus).scale(0.5 / h);
    let exact = phi.d2phi(q)?.partial(zeta);
    let err = op_norm_exponents(&fd.sub(&exact), level, level);
    let scale = op_norm_exponents(&exact, level, level);
    Ok(if scale > 1e-12 { err / scale } else { err })
}

fn continuity(
    axiom: Axiom,
    phi: &SuperpositionMap,
    samples: &[FourierLoop],
    specs: &[ReadingSpec],
    opts: &AxiomOptions,
) -> Result<Continuity> {
    let n = opts.continuity_n;
    let mut rng = stream(opts.seed, &format!("continuity{}", axiom.label()));
    let probes: Vec<(FourierLoop, FourierLoop)> = samples
        .iter()
        .map(|q| {
            let q = q.resized(n);
            let band = n.min(8);
            (q, random_direction(&mut rng, phi.dim(), n, band, Level::ONE))
        })
        .collect();
    let mut moduli = vec![0.0_f64; opts.steps.len()];
    let mut residual: Option<f64> = None;
    for (q, zeta) in &probes {
        for (m, &h) in moduli.iter_mut().zip(&opts.steps) {
            for spec in specs {
                *m = m.max(diff_norm(phi, q, &q.axpy(h, zeta), spec)?);
            }
        }
        if matches!(axiom, Axiom::I1 | Axiom::I2) {
            let h = *opts.steps.last().unwrap_or(&1e-3);
            for spec in specs {
                let r = derivative_residual(phi, q, zeta, h, spec.levels.0)?;
                residual = Some(residual.map_or(r, |x: f64| x.max(r)));
            }
        }
    }
    let first = moduli.first().copied().unwrap_or(0.0);
    let last = moduli.last().copied().unwrap_or(0.0);
    let shrinks = last <= 0.1 * first + 1e-12;
    let differentiable = residual.is_none_or(|r| r <= opts.derivative_tol);
    Ok(Continuity {
        steps: opts.steps.clone(),
        moduli,
        derivative_residual: residual,
        holds: shrinks && differentiable,
    })
}

/// Boundedness, truncation stability and sampled continuity for each axiom.
pub fn verify_floer_axioms(
    phi: &SuperpositionMap,
    samples: &[FourierLoop],
    opts: &AxiomOptions,
) -> Result<Vec<AxiomReport>> {
    Axiom::ALL.iter().map(|&ax| verify_axiom(phi, ax, samples, opts)).collect()
}

pub fn verify_axiom(
    phi: &SuperpositionMap,
    axiom: Axiom,
    samples: &[FourierLoop],
    opts: &AxiomOptions,
) -> Result<AxiomReport> {
    let specs = readings_for(axiom, phi.s());
    let mut readings = Vec::with_capacity(specs.len());
    for spec in &specs {
        let sweep = opts
            .sweep
            .par_iter()
            .map(|&n| -> Result<SweepPoint> {
                let mut norm = 0.0_f64;
                for q in samples {
                    norm = norm.max(reading_norm(phi, &q.resized(n), spec)?);
                }
                Ok(SweepPoint { n, norm })
            })
            .collect::<Result<Vec<_>>>()?;
        let trend = classify(&as_pairs(&sweep), opts.stabilize_from, opts.rel_tol);
        readings.push(Reading { label: spec.label.to_string(), sweep, trend });
    }
    let sweep: Vec<SweepPoint> = opts
        .sweep
        .iter()
        .enumerate()
        .map(|(i, &n)| SweepPoint { n, norm: readings.iter().map(|r| r.sweep[i].norm).fold(0.0, f64::max) })
        .collect();
    let cont = continuity(axiom, phi, samples, &specs, opts)?;
    let h = opts.steps.last().copied().unwrap_or(1.0);
    let modulus = cont.moduli.last().copied().unwrap_or(0.0) / h;
    let bounded = readings.iter().all(|r| r.trend == Trend::Stable);
    Ok(AxiomReport {
        axiom,
        s: phi.s(),
        sweep,
        readings,
        continuity_modulus: modulus,
        verdict: Verdict::from_bool(bounded && cont.holds),
        continuity: cont,
    })
}

/// Norms of the single matrix `dφ|_u` read at levels `-1, 0, s, 1, 2` along the sweep.
pub fn extension_coherence(phi: &SuperpositionMap, u: &FourierLoop, sweep: &[usize]) -> Result<ExtensionReport> {
    for &n in sweep {
        phi.dphi(&u.resized(n))?;
    }
    let mut levels = vec![Level::MINUS_ONE, Level::ZERO];
    if let Ok(s) = Level::new(phi.s()) {
        levels.push(s);
    }
    levels.extend([Level::ONE, Level::TWO]);
    Ok(extension_consistency(|n| phi.dphi(&u.resized(n)).expect("domain checked above"), &levels, sweep))
}
