//! Degree distributions and the PSVG estimate.
//!
//! `P(k) = n_k / n` is the fraction of nodes with degree `k`. Under a power
//! law `P(k) ~ k^-λ` the points `(log2(1/k), log2 P(k))` lie on a line of
//! slope `λ`; the PSVG is the ordinary least-squares slope through them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series_io::{to_positive_plane, TimeSeries, DEFAULT_SHIFT_EPSILON};
use crate::visibility::{Constructor, GraphError, VisibilityGraph};

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("{0} point(s) in fit range, need at least 3")]
    InsufficientPoints(usize),
    #[error("all points share the same abscissa")]
    DegenerateX,
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("series has {len} samples, analysis requires at least {min}")]
    SeriesTooShort { len: usize, min: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeCount {
    pub k: usize,
    pub count: usize,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeDistribution {
    /// Observed degrees only, ascending by `k`.
    pub entries: Vec<DegreeCount>,
    pub total_nodes: usize,
}

impl DegreeDistribution {
    pub fn from_degrees(degrees: &[usize]) -> Self {
        let mut sorted = degrees.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        let mut entries: Vec<DegreeCount> = Vec::new();
        for k in sorted {
            match entries.last_mut() {
                Some(e) if e.k == k => e.count += 1,
                _ => entries.push(DegreeCount {
                    k,
                    count: 1,
                    p: 0.0,
                }),
            }
        }
        for e in &mut entries {
            e.p = e.count as f64 / n as f64;
        }
        Self {
            entries,
            total_nodes: n,
        }
    }

    pub fn probability(&self, k: usize) -> f64 {
        self.entries
            .binary_search_by_key(&k, |e| e.k)
            .map_or(0.0, |i| self.entries[i].p)
    }
}

pub fn degree_distribution(graph: &VisibilityGraph) -> DegreeDistribution {
    DegreeDistribution::from_degrees(&crate::visibility::degree_sequence(graph))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLogPoint {
    pub k: usize,
    /// `log2(1/k)`
    pub x: f64,
    /// `log2 P(k)`
    pub y: f64,
}

impl LogLogPoint {
    pub fn new(k: usize, p: f64) -> Self {
        Self {
            k,
            x: 0.0 - (k as f64).log2(),
            y: p.log2(),
        }
    }
}

pub fn loglog_points(dist: &DegreeDistribution) -> Vec<LogLogPoint> {
    dist.entries
        .iter()
        .map(|e| LogLogPoint::new(e.k, e.p))
        .collect()
}

/// Inclusive degree filter applied before fitting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitRange {
    pub k_min: Option<usize>,
    pub k_max: Option<usize>,
}

impl FitRange {
    pub fn contains(&self, k: usize) -> bool {
        self.k_min.is_none_or(|lo| k >= lo) && self.k_max.is_none_or(|hi| k <= hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsvgFit {
    pub lambda_p: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
    pub k_min_used: usize,
    pub k_max_used: usize,
}

/// Least-squares line through the points whose degree falls in `range`.
pub fn fit_psvg(points: &[LogLogPoint], range: FitRange) -> Result<PsvgFit, FitError> {
    let used: Vec<&LogLogPoint> = points.iter().filter(|p| range.contains(p.k)).collect();
    let n = used.len();
    if n < 3 {
        return Err(FitError::InsufficientPoints(n));
    }
    let nf = n as f64;
    let mean_x = used.iter().map(|p| p.x).sum::<f64>() / nf;
    let mean_y = used.iter().map(|p| p.y).sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in &used {
        let dx = p.x - mean_x;
        let dy = p.y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(FitError::DegenerateX);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = used
        .iter()
        .map(|p| {
            let r = p.y - (intercept + slope * p.x);
            r * r
        })
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    };
    Ok(PsvgFit {
        lambda_p: slope,
        intercept,
        r_squared,
        points_used: n,
        k_min_used: used.iter().map(|p| p.k).min().unwrap_or(0),
        k_max_used: used.iter().map(|p| p.k).max().unwrap_or(0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub range: FitRange,
    pub constructor: Constructor,
    pub min_length: usize,
    pub shift_epsilon: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            range: FitRange::default(),
            constructor: Constructor::Fast,
            min_length: 16,
            shift_epsilon: DEFAULT_SHIFT_EPSILON,
        }
    }
}

/// Fit outcome. Too few distinct degrees is a normal result, not an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FitOutcome {
    Ok(PsvgFit),
    Unavailable { reason: String },
}

impl FitOutcome {
    pub fn fit(&self) -> Option<&PsvgFit> {
        match self {
            FitOutcome::Ok(f) => Some(f),
            FitOutcome::Unavailable { .. } => None,
        }
    }

    pub fn lambda_p(&self) -> Option<f64> {
        self.fit().map(|f| f.lambda_p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub window_name: String,
    pub sample_count: usize,
    pub first_label: String,
    pub last_label: String,
    pub edge_count: usize,
    pub distribution: DegreeDistribution,
    pub fit: FitOutcome,
}

impl WindowReport {
    pub fn points(&self) -> Vec<LogLogPoint> {
        loglog_points(&self.distribution)
    }
}

/// Positive-plane shift, graph construction, degree distribution and fit.
pub fn analyze_series(
    name: &str,
    series: &TimeSeries,
    config: &AnalysisConfig,
) -> Result<WindowReport, AnalysisError> {
    let min = config.min_length.max(2);
    if series.len() < min {
        return Err(AnalysisError::SeriesTooShort {
            len: series.len(),
            min,
        });
    }
    let shifted = to_positive_plane(series, config.shift_epsilon);
    let graph = config.constructor.build(&shifted)?;
    let distribution = degree_distribution(&graph);
    let fit = match fit_psvg(&loglog_points(&distribution), config.range) {
        Ok(f) => FitOutcome::Ok(f),
        Err(e) => FitOutcome::Unavailable {
            reason: e.to_string(),
        },
    };
    Ok(WindowReport {
        window_name: name.to_string(),
        sample_count: series.len(),
        first_label: series.labels()[0].clone(),
        last_label: series.labels()[series.len() - 1].clone(),
        edge_count: graph.edge_count(),
        distribution,
        fit,
    })
}
