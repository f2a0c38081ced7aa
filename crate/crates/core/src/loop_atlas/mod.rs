//! Atlases of small loops induced by manifold charts, their transition maps,
//! and compatibility checks between atlases.

mod compatibility;

pub use compatibility::{
    check_compatibility, check_transitivity, cocycle_check, CocycleCheck, CompatibilityReport, LocalityCheck,
    PairVerdict, TransitivityReport,
};

use serde::{Deserialize, Serialize};

use crate::error::{FloerError, Result};
use crate::floer_map::{rotation_matrix, Chart, StereoFrame, SuperpositionMap};
use crate::sampling::{random_loop, stream};
use crate::scale_space::{FourierLoop, Level};

/// Margin of the small-loop condition in chart coordinates: stereographic
/// samples must satisfy `|x| ≤ 1/δ`.
pub const SMALL_LOOP_MARGIN: f64 = 0.05;

/// A chart of the underlying manifold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManifoldChart {
    /// Stereographic chart of the unit sphere; points are unit 3-vectors.
    Stereographic { frame: StereoFrame },
    /// A diffeomorphism `ρ` of flat `ℝⁿ`.
    Flat { rho: Chart },
}

impl ManifoldChart {
    pub fn dim(&self) -> usize {
        match self {
            ManifoldChart::Stereographic { .. } => 2,
            ManifoldChart::Flat { rho } => rho.dim(),
        }
    }

    /// The change of coordinates `ρ_self ∘ ρ_from⁻¹`.
    pub fn coordinates_from(&self, from: &ManifoldChart) -> Result<Chart> {
        if self == from {
            return Ok(Chart::Identity { dim: self.dim() });
        }
        match (from, self) {
            (ManifoldChart::Stereographic { frame: a }, ManifoldChart::Stereographic { frame: b }) => {
                Ok(Chart::Transition { from: *a, to: *b })
            }
            (ManifoldChart::Flat { rho: a }, ManifoldChart::Flat { rho: b }) => {
                let inv = a.inverse()?;
                Ok(match (b, &inv) {
                    (_, Chart::Identity { .. }) => b.clone(),
                    (Chart::Identity { .. }, _) => inv,
                    _ => Chart::compose(b.clone(), inv)?,
                })
            }
            _ => Err(FloerError::Parameter("charts of different manifolds".into())),
        }
    }
}

/// A chart of the Floer atlas: the loops whose samples stay in `rho`'s domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasChart {
    pub id: String,
    pub chart: ManifoldChart,
}

/// A loop of the manifold, given in the coordinates of `frame`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusLoop {
    pub label: String,
    pub frame: ManifoldChart,
    pub coords: FourierLoop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atlas {
    pub name: String,
    pub s: f64,
    pub charts: Vec<AtlasChart>,
    pub corpus: Vec<CorpusLoop>,
}

impl Atlas {
    pub fn chart(&self, id: &str) -> Result<&AtlasChart> {
        self.charts
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| FloerError::Parameter(format!("atlas `{}` has no chart `{id}`", self.name)))
    }

    /// The same atlas with every stereographic frame rotated.
    pub fn rotated(&self, name: &str, axis: [f64; 3], angle: f64) -> Atlas {
        let r = rotation_matrix(axis, angle);
        Atlas {
            name: name.to_string(),
            s: self.s,
            charts: self
                .charts
                .iter()
                .map(|c| AtlasChart {
                    id: format!("{}/{name}", c.id),
                    chart: match &c.chart {
                        ManifoldChart::Stereographic { frame } => {
                            ManifoldChart::Stereographic { frame: frame.rotated(&r) }
                        }
                        flat => flat.clone(),
                    },
                })
                .collect(),
            corpus: self.corpus.clone(),
        }
    }

    /// Corpus loops lying in no chart.
    pub fn uncovered(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for l in &self.corpus {
            let mut covered = false;
            for c in &self.charts {
                if in_chart(l, &c.chart, self.s)?.is_some() {
                    covered = true;
                    break;
                }
            }
            if !covered {
                out.push(l.label.clone());
            }
        }
        Ok(out)
    }
}

/// Coordinates of `l` in `chart` if every grid sample lands in the chart's
/// domain, `None` otherwise.
pub fn in_chart(l: &CorpusLoop, chart: &ManifoldChart, s: f64) -> Result<Option<FourierLoop>> {
    let change = chart.coordinates_from(&l.frame)?;
    let u = if matches!(change, Chart::Identity { .. }) {
        l.coords.clone()
    } else {
        match SuperpositionMap::control(change, s).apply(&l.coords) {
            Ok(u) => u,
            Err(FloerError::OutOfChart { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    };
    let grid = SuperpositionMap::control(Chart::Identity { dim: chart.dim() }, s).grid(u.truncation());
    let samples = crate::scale_space::points_of(&grid.sample(&u)?);
    let inside = match chart {
        ManifoldChart::Stereographic { frame } => samples.iter().all(|x| frame.contains(x)),
        ManifoldChart::Flat { rho } => samples.iter().all(|x| rho.in_domain(x)),
    };
    Ok(inside.then_some(u))
}

/// Corpus loops in both charts, in `from` coordinates.
pub fn overlap(from: &AtlasChart, to: &AtlasChart, corpus: &[CorpusLoop], s: f64) -> Result<Vec<FourierLoop>> {
    let mut out = Vec::new();
    for l in corpus {
        if let Some(u) = in_chart(l, &from.chart, s)? {
            let there = CorpusLoop { label: l.label.clone(), frame: from.chart.clone(), coords: u.clone() };
            if in_chart(&there, &to.chart, s)?.is_some() {
                out.push(u);
            }
        }
    }
    Ok(out)
}

fn transition_between(
    from: &AtlasChart,
    to: &AtlasChart,
    corpus: &[CorpusLoop],
    s: f64,
) -> Result<(SuperpositionMap, Vec<FourierLoop>)> {
    let loops = overlap(from, to, corpus, s)?;
    if loops.is_empty() {
        return Err(FloerError::EmptyOverlap(from.id.clone(), to.id.clone()));
    }
    let map = SuperpositionMap::new(to.chart.coordinates_from(&from.chart)?, Level::new(s)?)?;
    Ok((map, loops))
}

/// `φ_{αβ}`, the superposition map of `ρ_β ∘ ρ_α⁻¹` on loops in the overlap.
pub fn transition(atlas: &Atlas, alpha: &str, beta: &str) -> Result<SuperpositionMap> {
    let (a, b) = (atlas.chart(alpha)?, atlas.chart(beta)?);
    transition_between(a, b, &atlas.corpus, atlas.s).map(|(m, _)| m)
}

/// Default truncation of corpus loops.
pub const CORPUS_TRUNCATION: usize = 16;

/// Two stereographic charts of `S²`, radius `1/δ`, with a corpus of
/// band-limited loops near the equator.
pub fn sphere_small_loop_atlas() -> Atlas {
    sphere_atlas_at(0.75)
}

pub fn sphere_atlas_at(s: f64) -> Atlas {
    let radius = 1.0 / SMALL_LOOP_MARGIN;
    let north = ManifoldChart::Stereographic { frame: StereoFrame::north(radius) };
    let south = ManifoldChart::Stereographic { frame: StereoFrame::south(radius) };
    let n = CORPUS_TRUNCATION;
    let circle = |r: f64| FourierLoop::trig(2, n, 1, &[r, 0.0], &[0.0, r]);
    let mut corpus = vec![CorpusLoop { label: "equator".into(), frame: north.clone(), coords: circle(1.0) }];
    let mut rng = stream(0, "sphere-corpus");
    for (i, r) in [0.8, 1.0, 1.25].into_iter().enumerate() {
        let wobble = random_loop(&mut rng, 2, n, 3, 0.08, 1.0, false);
        corpus.push(CorpusLoop {
            label: format!("near-equator-{i}"),
            frame: north.clone(),
            coords: &circle(r) + &wobble,
        });
    }
    Atlas {
        name: "sphere".into(),
        s,
        charts: vec![AtlasChart { id: "north".into(), chart: north }, AtlasChart { id: "south".into(), chart: south }],
        corpus,
    }
}

/// Atlas of flat `ℝⁿ` given by diffeomorphisms `ρ`.
pub fn flat_atlas(name: &str, s: f64, charts: Vec<(String, Chart)>, corpus: Vec<CorpusLoop>) -> Atlas {
    Atlas {
        name: name.to_string(),
        s,
        charts: charts.into_iter().map(|(id, rho)| AtlasChart { id, chart: ManifoldChart::Flat { rho } }).collect(),
        corpus,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_chart_transition_is_identity() {
        let atlas = sphere_small_loop_atlas();
        let t = transition(&atlas, "north", "north").unwrap();
        assert_eq!(t.chart(), &Chart::Identity { dim: 2 });
    }

    #[test]
    fn north_south_is_inversion() {
        let atlas = sphere_small_loop_atlas();
        let t = transition(&atlas, "north", "south").unwrap();
        let x = [0.7, -0.9];
        let r2 = x[0] * x[0] + x[1] * x[1];
        let y = t.chart().eval(&x);
        assert!((y[0] - x[0] / r2).abs() < 1e-14 && (y[1] - x[1] / r2).abs() < 1e-14);
    }

    #[test]
    fn equator_lies_in_both_charts() {
        let atlas = sphere_small_loop_atlas();
        let eq = &atlas.corpus[0];
        for c in &atlas.charts {
            assert!(in_chart(eq, &c.chart, atlas.s).unwrap().is_some(), "{}", c.id);
        }
        assert!(atlas.uncovered().unwrap().is_empty());
    }

    #[test]
    fn loop_through_north_pole_leaves_north_chart() {
        let atlas = sphere_small_loop_atlas();
        // the north pole is the origin of the south chart
        let l = CorpusLoop {
            label: "polar".into(),
            frame: atlas.chart("south").unwrap().chart.clone(),
            coords: FourierLoop::trig(2, 8, 1, &[0.5, 0.0], &[0.0, 0.0]),
        };
        assert!(in_chart(&l, &atlas.chart("north").unwrap().chart, 0.75).unwrap().is_none());
        assert!(in_chart(&l, &atlas.chart("south").unwrap().chart, 0.75).unwrap().is_some());
    }

    #[test]
    fn disjoint_charts_have_empty_overlap() {
        let mut atlas = sphere_small_loop_atlas();
        atlas.corpus = vec![CorpusLoop {
            label: "polar".into(),
            frame: atlas.chart("south").unwrap().chart.clone(),
            coords: FourierLoop::trig(2, 8, 1, &[0.5, 0.0], &[0.0, 0.0]),
        }];
        assert!(matches!(
            transition(&atlas, "south", "north"),
            Err(FloerError::EmptyOverlap(a, b)) if a == "south" && b == "north"
        ));
    }

    #[test]
    fn flat_change_of_coordinates() {
        let a = ManifoldChart::Flat { rho: Chart::Shear { c: 1.0 } };
        let b = ManifoldChart::Flat { rho: Chart::AngleRotation { a: 0.5 } };
        let c = b.coordinates_from(&a).unwrap();
        let x = [0.3, 0.4];
        let back = Chart::Shear { c: -1.0 }.eval(&x);
        let expected = Chart::AngleRotation { a: 0.5 }.eval(&back);
        let got = c.eval(&x);
        assert!((got[0] - expected[0]).abs() < 1e-15 && (got[1] - expected[1]).abs() < 1e-15);
        let sphere = ManifoldChart::Stereographic { frame: StereoFrame::north(20.0) };
        assert!(sphere.coordinates_from(&a).is_err());
    }

    #[test]
    fn atlas_round_trips_through_json() {
        let atlas = sphere_small_loop_atlas().rotated("tilted", [1.0, 0.0, 0.0], 0.3);
        let json = serde_json::to_string(&atlas).unwrap();
        assert_eq!(serde_json::from_str::<Atlas>(&json).unwrap(), atlas);
    }
}
