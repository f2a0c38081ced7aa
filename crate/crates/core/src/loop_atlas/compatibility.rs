use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{in_chart, transition_between, Atlas, AtlasChart, CorpusLoop};
use crate::error::{FloerError, Result};
use crate::floer_map::{verify_floer_axioms, AxiomOptions, AxiomReport};
use crate::scale_space::{FourierLoop, Level};

/// Axiom verdicts for one transition map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub from: String,
    pub to: String,
    /// Corpus loops in the overlap that were tested.
    pub loops: usize,
    pub axioms: Vec<AxiomReport>,
    /// Set when the transition could not be formed (e.g. a chart without inverse).
    pub error: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub a: String,
    pub b: String,
    pub s: f64,
    pub pairs: Vec<PairVerdict>,
    pub passed: bool,
}

fn pair_verdict(
    from: &AtlasChart,
    to: &AtlasChart,
    corpus: &[CorpusLoop],
    s: f64,
    max_loops: usize,
    opts: &AxiomOptions,
) -> Result<Option<PairVerdict>> {
    let failed = |e: FloerError| PairVerdict {
        from: from.id.clone(),
        to: to.id.clone(),
        loops: 0,
        axioms: Vec::new(),
        error: Some(e.to_string()),
        passed: false,
    };
    let (map, mut loops) = match transition_between(from, to, corpus, s) {
        Ok(t) => t,
        Err(FloerError::EmptyOverlap(..)) => return Ok(None),
        Err(e @ FloerError::MissingInverse(_)) => return Ok(Some(failed(e))),
        Err(e) => return Err(e),
    };
    loops.truncate(max_loops);
    let axioms = verify_floer_axioms(&map, &loops, opts)?;
    Ok(Some(PairVerdict {
        from: from.id.clone(),
        to: to.id.clone(),
        loops: loops.len(),
        passed: axioms.iter().all(|r| r.verdict.passed()),
        axioms,
        error: None,
    }))
}

/// Runs the Floer-map axioms on every transition between a chart of `a` and
/// a chart of `b`, both directions, on at most `max_loops` overlap loops.
/// Pairs without common corpus loops are skipped.
pub fn check_compatibility(
    a: &Atlas,
    b: &Atlas,
    corpus: &[CorpusLoop],
    max_loops: usize,
    opts: &AxiomOptions,
) -> Result<CompatibilityReport> {
    let s = a.s;
    if (a.s - b.s).abs() > 0.0 {
        return Err(FloerError::Parameter(format!("atlases at levels {} and {}", a.s, b.s)));
    }
    let mut jobs: Vec<(&AtlasChart, &AtlasChart)> = Vec::new();
    for x in &a.charts {
        for y in &b.charts {
            for job in [(x, y), (y, x)] {
                if !jobs.contains(&job) {
                    jobs.push(job);
                }
            }
        }
    }
    let pairs: Vec<PairVerdict> = jobs
        .par_iter()
        .map(|(x, y)| pair_verdict(x, y, corpus, s, max_loops, opts))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(CompatibilityReport { a: a.name.clone(), b: b.name.clone(), s, passed: pairs.iter().all(|p| p.passed), pairs })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleCheck {
    #[serde(rename = "N")]
    pub n: usize,
    pub triples: usize,
    /// `max ‖φ_{αγ}(u) − φ_{βγ}(φ_{αβ}(u))‖_∞` on coefficients.
    pub apply_residual: f64,
    /// Interior-band entry gap between `dφ_{αγ}` and `dφ_{βγ} dφ_{αβ}`.
    pub dphi_residual: f64,
    /// `max ‖φ_{βα}(φ_{αβ}(u)) − u‖_∞`.
    pub inverse_residual: f64,
    pub band: usize,
    pub apply_tol: f64,
    pub dphi_tol: f64,
    pub passed: bool,
}

/// Axioms of `φ_{αγ}` on its whole overlap against the same axioms on the
/// pieces cut out by the charts of the middle atlas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityCheck {
    pub from: String,
    pub to: String,
    pub loops: usize,
    pub pieces: Vec<(String, usize, bool)>,
    pub union_passed: bool,
    /// Every loop lies in some piece and the union verdict equals the
    /// conjunction of the piece verdicts.
    pub verdicts_agree: bool,
    /// Largest relative gap between a union reading and the maximum of the
    /// piece readings.
    pub reading_gap: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitivityReport {
    pub atlases: [String; 3],
    pub cocycle: CocycleCheck,
    pub locality: Vec<LocalityCheck>,
    pub passed: bool,
}

fn coords_in(l: &CorpusLoop, chart: &AtlasChart, s: f64, n: usize) -> Result<Option<FourierLoop>> {
    Ok(in_chart(l, &chart.chart, s)?.map(|u| u.resized(n)))
}

/// `φ_{αγ} = φ_{βγ}∘φ_{αβ}`, its derivative, and `φ_{βα}∘φ_{αβ} = id` on
/// every corpus loop in a triple overlap, at truncation `n`.
pub fn cocycle_check(a: &Atlas, b: &Atlas, c: &Atlas, corpus: &[CorpusLoop], n: usize) -> Result<CocycleCheck> {
    let s = a.s;
    let level = Level::new(s)?;
    let band = n / 4;
    let (mut triples, mut apply_residual, mut dphi_residual, mut inverse_residual) = (0, 0.0_f64, 0.0_f64, 0.0_f64);
    for x in &a.charts {
        for y in &b.charts {
            for z in &c.charts {
                let map = |from: &AtlasChart, to: &AtlasChart| {
                    crate::floer_map::SuperpositionMap::new(to.chart.coordinates_from(&from.chart)?, level)
                };
                let (xy, yz, xz, yx) = (map(x, y)?, map(y, z)?, map(x, z)?, map(y, x)?);
                for l in corpus {
                    let Some(u) = coords_in(l, x, s, n)? else { continue };
                    if coords_in(l, y, s, n)?.is_none() || coords_in(l, z, s, n)?.is_none() {
                        continue;
                    }
                    triples += 1;
                    let v = xy.apply(&u)?;
                    apply_residual = apply_residual.max(xz.apply(&u)?.max_abs_diff(&yz.apply(&v)?));
                    inverse_residual = inverse_residual.max(yx.apply(&v)?.max_abs_diff(&u));
                    let chained = yz.dphi(&v)?.compose(&xy.dphi(&u)?);
                    dphi_residual = dphi_residual.max(xz.dphi(&u)?.interior_max_diff(&chained, band));
                }
            }
        }
    }
    let (apply_tol, dphi_tol) = (1e-10, 1e-9);
    Ok(CocycleCheck {
        n,
        triples,
        apply_residual,
        dphi_residual,
        inverse_residual,
        band,
        apply_tol,
        dphi_tol,
        passed: apply_residual <= apply_tol && inverse_residual <= apply_tol && dphi_residual <= dphi_tol,
    })
}

fn locality(
    x: &AtlasChart,
    z: &AtlasChart,
    b: &Atlas,
    corpus: &[CorpusLoop],
    s: f64,
    opts: &AxiomOptions,
) -> Result<Option<LocalityCheck>> {
    let (map, loops) = match transition_between(x, z, corpus, s) {
        Ok(t) => t,
        Err(FloerError::EmptyOverlap(..)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let union = verify_floer_axioms(&map, &loops, opts)?;
    let union_passed = union.iter().all(|r| r.verdict.passed());
    let mut pieces = Vec::new();
    let mut piece_reports = Vec::new();
    let mut covered = vec![false; loops.len()];
    for y in &b.charts {
        let mut members = Vec::new();
        for (i, u) in loops.iter().enumerate() {
            let l = CorpusLoop { label: String::new(), frame: x.chart.clone(), coords: u.clone() };
            if in_chart(&l, &y.chart, s)?.is_some() {
                covered[i] = true;
                members.push(u.clone());
            }
        }
        if members.is_empty() {
            continue;
        }
        let reports = verify_floer_axioms(&map, &members, opts)?;
        pieces.push((y.id.clone(), members.len(), reports.iter().all(|r| r.verdict.passed())));
        piece_reports.push(reports);
    }
    let mut reading_gap = 0.0_f64;
    for (ai, report) in union.iter().enumerate() {
        for (ri, reading) in report.readings.iter().enumerate() {
            for (pi, point) in reading.sweep.iter().enumerate() {
                let local = piece_reports.iter().map(|p| p[ai].readings[ri].sweep[pi].norm).fold(0.0_f64, f64::max);
                reading_gap = reading_gap.max((point.norm - local).abs() / point.norm.abs().max(1e-300));
            }
        }
    }
    let verdicts_agree = covered.iter().all(|&c| c) && union_passed == pieces.iter().all(|p| p.2);
    Ok(Some(LocalityCheck {
        from: x.id.clone(),
        to: z.id.clone(),
        loops: loops.len(),
        pieces,
        union_passed,
        verdicts_agree,
        reading_gap,
        consistent: verdicts_agree && reading_gap <= 1e-12,
    }))
}

/// Cocycle identities on triple overlaps at truncation `n`, and agreement of
/// the `a → c` axiom reports with those computed on the pieces of the `b` cover.
pub fn check_transitivity(
    a: &Atlas,
    b: &Atlas,
    c: &Atlas,
    corpus: &[CorpusLoop],
    n: usize,
    opts: &AxiomOptions,
) -> Result<TransitivityReport> {
    let s = a.s;
    if [b.s, c.s].iter().any(|&t| (t - s).abs() > 0.0) {
        return Err(FloerError::Parameter("atlases at different levels".into()));
    }
    let cocycle = cocycle_check(a, b, c, corpus, n)?;
    let jobs: Vec<(&AtlasChart, &AtlasChart)> =
        a.charts.iter().flat_map(|x| c.charts.iter().map(move |z| (x, z))).collect();
    let locality: Vec<LocalityCheck> = jobs
        .par_iter()
        .map(|(x, z)| locality(x, z, b, corpus, s, opts))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(TransitivityReport {
        atlases: [a.name.clone(), b.name.clone(), c.name.clone()],
        passed: cocycle.passed && locality.iter().all(|l| l.consistent),
        cocycle,
        locality,
    })
}
