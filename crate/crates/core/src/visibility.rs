//! Natural visibility graphs.
//!
//! Samples `m < n` see each other when every intermediate sample `t` lies
//! strictly below the straight segment joining `(m, x[m])` and `(n, x[n])`:
//!
//! ```text
//! x[t] < x[n] + (n - t) / (n - m) * (x[m] - x[n])    for all m < t < n
//! ```
//!
//! The inequality is strict, so collinear or equal-valued intermediate
//! samples block visibility. Constant and linear series therefore map to
//! path graphs.
//!
//! Both constructors decide every comparison with an exact orientation
//! predicate instead of evaluating the line in floating point. Rounding
//! cannot make a point "barely visible" in one constructor and not in the
//! other, so [`build_graph_fast`] and [`build_graph_naive`] agree exactly,
//! including on adversarial collinear input.

use std::fmt::Write as _;
use std::str::FromStr;

use robust::{orient2d, Coord};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series_io::TimeSeries;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("series has {0} samples, need at least 2")]
    SeriesTooShort(usize),
    #[error("index pair ({m}, {n}) invalid for series of length {len}")]
    BadIndex { m: usize, n: usize, len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constructor {
    Naive,
    #[default]
    Fast,
}

impl Constructor {
    pub fn build(self, series: &TimeSeries) -> Result<VisibilityGraph, GraphError> {
        match self {
            Constructor::Naive => build_graph_naive(series),
            Constructor::Fast => build_graph_fast(series),
        }
    }
}

impl FromStr for Constructor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Constructor::Naive),
            "fast" => Ok(Constructor::Fast),
            other => Err(format!(
                "unknown constructor {other:?} (expected naive|fast)"
            )),
        }
    }
}

/// Undirected simple graph over series positions, stored as sorted
/// neighbour lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisibilityGraph {
    adjacency: Vec<Vec<usize>>,
}

impl VisibilityGraph {
    fn from_edges(node_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); node_count];
        for (a, b) in edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self { adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency
            .get(a)
            .is_some_and(|l| l.binary_search(&b).is_ok())
    }

    /// Edges as `(m, n)` with `m < n`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(m, l)| l.iter().filter(move |&&n| n > m).map(move |&n| (m, n)))
    }

    /// Text dump, one `m n` pair per line in lexicographic order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edge_count() * 12);
        for (m, n) in self.edges() {
            let _ = writeln!(out, "{m} {n}");
        }
        out
    }
}

pub fn degree_sequence(graph: &VisibilityGraph) -> Vec<usize> {
    graph.adjacency.iter().map(Vec::len).collect()
}

#[inline]
fn point(values: &[f64], i: usize) -> Coord<f64> {
    Coord {
        x: i as f64,
        y: values[i],
    }
}

/// Exact sign of the turn `a -> b -> c`; positive when `c` lies left of the
/// directed line `a -> b`.
#[inline]
fn turn(values: &[f64], a: usize, b: usize, c: usize) -> f64 {
    orient2d(point(values, a), point(values, b), point(values, c))
}

/// True when `t` lies strictly below the segment from `m` to `n` (`m < n`).
#[inline]
fn below_segment(values: &[f64], m: usize, n: usize, t: usize) -> bool {
    // Left-to-right segment: strictly below means strictly right of it.
    turn(values, m, n, t) < 0.0
}

fn visible_unchecked(values: &[f64], m: usize, n: usize) -> bool {
    (m + 1..n).all(|t| below_segment(values, m, n, t))
}

/// Whether samples `m` and `n` (`m < n`) see each other.
pub fn visible(series: &TimeSeries, m: usize, n: usize) -> Result<bool, GraphError> {
    let len = series.len();
    if m >= n || n >= len {
        return Err(GraphError::BadIndex { m, n, len });
    }
    Ok(visible_unchecked(series.values(), m, n))
}

/// Reference constructor: tests every pair against every intermediate
/// sample.
pub fn build_graph_naive(series: &TimeSeries) -> Result<VisibilityGraph, GraphError> {
    let values = series.values();
    let n = values.len();
    if n < 2 {
        return Err(GraphError::SeriesTooShort(n));
    }
    let edges = (0..n).flat_map(|m| {
        (m + 1..n)
            .filter(move |&k| visible_unchecked(values, m, k))
            .map(move |k| (m, k))
    });
    Ok(VisibilityGraph::from_edges(n, edges))
}

/// Divide-and-conquer constructor.
///
/// Within a range, no edge can jump over the (leftmost) maximum unless it
/// ends on it. The maximum's neighbours on each side are found with one
/// sweep that tracks the steepest sample seen so far; the two sub-ranges
/// are then handled independently. Expected `O(n log n)` on noisy data,
/// `O(n^2)` on monotone data.
pub fn build_graph_fast(series: &TimeSeries) -> Result<VisibilityGraph, GraphError> {
    let values = series.values();
    let n = values.len();
    if n < 2 {
        return Err(GraphError::SeriesTooShort(n));
    }

    let mut edges = Vec::with_capacity(2 * n);
    // Explicit stack: monotone input would recurse n levels deep.
    let mut ranges = vec![(0usize, n - 1)];
    while let Some((lo, hi)) = ranges.pop() {
        if lo >= hi {
            continue;
        }
        let peak = leftmost_max(values, lo, hi);

        // Right sweep: t is visible iff the steepest earlier sample lies
        // strictly below segment peak -> t.
        if peak < hi {
            let mut steepest = peak + 1;
            edges.push((peak, steepest));
            for t in peak + 2..=hi {
                if below_segment(values, peak, t, steepest) {
                    edges.push((peak, t));
                    steepest = t;
                }
            }
        }
        if peak > lo {
            let mut steepest = peak - 1;
            edges.push((steepest, peak));
            for t in (lo..peak - 1).rev() {
                if below_segment(values, t, peak, steepest) {
                    edges.push((t, peak));
                    steepest = t;
                }
            }
        }

        if peak > lo {
            ranges.push((lo, peak - 1));
        }
        ranges.push((peak + 1, hi));
    }
    Ok(VisibilityGraph::from_edges(n, edges))
}

fn leftmost_max(values: &[f64], lo: usize, hi: usize) -> usize {
    let mut best = lo;
    for i in lo + 1..=hi {
        if values[i] > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(values: &[f64]) -> TimeSeries {
        TimeSeries::from_values(values.to_vec()).unwrap()
    }

    /// Eq. (1) evaluated literally in floating point. Only safe as an oracle
    /// on small integer inputs where every product is exact.
    fn literal_visible(x: &[f64], m: usize, n: usize) -> bool {
        (1..n - m).all(|j| {
            let t = m + j;
            x[t] < x[n] + ((n - t) as f64 / (n - m) as f64) * (x[m] - x[n])
        })
    }

    fn both(values: &[f64]) -> (VisibilityGraph, VisibilityGraph) {
        let s = series(values);
        (
            build_graph_naive(&s).unwrap(),
            build_graph_fast(&s).unwrap(),
        )
    }

    #[test]
    fn visible_examples() {
        let s = series(&[3.0, 1.0, 2.0]);
        assert!(visible(&s, 0, 2).unwrap());
        let s = series(&[1.0, 2.0, 3.0]);
        assert!(!visible(&s, 0, 2).unwrap());
        let s = series(&[9.0, -4.0, 100.0, 0.5]);
        for m in 0..3 {
            assert!(visible(&s, m, m + 1).unwrap());
        }
    }

    #[test]
    fn visible_rejects_bad_indices() {
        let s = series(&[1.0, 2.0, 3.0]);
        assert!(visible(&s, 2, 1).is_err());
        assert!(visible(&s, 1, 1).is_err());
        assert_eq!(
            visible(&s, 0, 3),
            Err(GraphError::BadIndex { m: 0, n: 3, len: 3 })
        );
    }

    #[test]
    fn linear_series_is_path() {
        let (a, b) = both(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(degree_sequence(&a), vec![1, 2, 2, 2, 1]);
        assert_eq!(a, b);
    }

    #[test]
    fn valley_is_triangle() {
        let (a, b) = both(&[3.0, 1.0, 2.0]);
        assert_eq!(degree_sequence(&a), vec![2, 2, 2]);
        assert_eq!(a, b);
    }

    #[test]
    fn two_samples_single_edge() {
        let (a, b) = both(&[7.0, -1.0]);
        assert_eq!(degree_sequence(&a), vec![1, 1]);
        assert_eq!(a.edge_count(), 1);
        assert_eq!(a, b);
    }

    #[test]
    fn constant_is_path() {
        let (a, b) = both(&[4.0, 4.0, 4.0, 4.0]);
        assert_eq!(degree_sequence(&b), vec![1, 2, 2, 1]);
        assert_eq!(a, b);
    }

    #[test]
    fn four_point_degrees() {
        // Brute force with the literal inequality (exact on small integers).
        let x = [3.0, 1.0, 2.0, 4.0];
        let mut expected = [0usize; 4];
        for m in 0..4 {
            for n in m + 1..4 {
                if literal_visible(&x, m, n) {
                    expected[m] += 1;
                    expected[n] += 1;
                }
            }
        }
        // Every pair is visible, including (1,3): 2 < 4 + (1/2)(1-4) = 2.5.
        assert_eq!(expected, [3, 3, 3, 3]);
        let (a, b) = both(&x);
        assert_eq!(degree_sequence(&a), expected.to_vec());
        assert_eq!(a, b);
    }

    #[test]
    fn too_short() {
        let s = series(&[1.0]);
        assert_eq!(build_graph_naive(&s), Err(GraphError::SeriesTooShort(1)));
        assert_eq!(build_graph_fast(&s), Err(GraphError::SeriesTooShort(1)));
    }

    #[test]
    fn decimal_collinear_points_block() {
        // 0.1, 0.2, 0.3 are collinear in intent but not in binary; the
        // orientation test decides on the stored doubles and both
        // constructors agree.
        let (a, b) = both(&[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]);
        assert_eq!(a, b);
    }

    #[test]
    fn edge_list_format() {
        let (g, _) = both(&[3.0, 1.0, 2.0, 4.0]);
        assert_eq!(g.to_edge_list(), "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    }

    proptest! {
        #[test]
        fn literal_predicate_matches_on_small_integers(x in prop::collection::vec(-20i32..20, 2..30)) {
            let x: Vec<f64> = x.into_iter().map(f64::from).collect();
            let g = build_graph_fast(&series(&x)).unwrap();
            for m in 0..x.len() {
                for n in m + 1..x.len() {
                    prop_assert_eq!(g.has_edge(m, n), literal_visible(&x, m, n));
                }
            }
        }

        #[test]
        fn graph_invariants(x in prop::collection::vec(-1e3f64..1e3, 2..120)) {
            let g = build_graph_fast(&series(&x)).unwrap();
            let n = x.len();
            for i in 0..n {
                prop_assert!(!g.has_edge(i, i));
                for &j in g.neighbors(i) {
                    prop_assert!(g.has_edge(j, i));
                }
                prop_assert!(g.neighbors(i).windows(2).all(|w| w[0] < w[1]));
            }
            for i in 0..n - 1 {
                prop_assert!(g.has_edge(i, i + 1));
            }
            prop_assert!(g.edge_count() >= n - 1);
            prop_assert!(g.edge_count() <= n * (n - 1) / 2);
            prop_assert_eq!(degree_sequence(&g).iter().sum::<usize>(), 2 * g.edge_count());
        }

        #[test]
        fn fast_equals_naive_on_quantized(x in prop::collection::vec(0u8..6, 2..80)) {
            // Few distinct levels force many ties and collinear triples.
            let x: Vec<f64> = x.into_iter().map(f64::from).collect();
            let (a, b) = both(&x);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn affine_invariance_exact_arithmetic(
            x in prop::collection::vec(-1000i32..1000, 2..60),
            a in 1i32..50,
            b in -10_000i32..10_000,
        ) {
            // Integer data keeps a*x + b exact, so even collinear triples survive.
            let base: Vec<f64> = x.iter().map(|&v| f64::from(v)).collect();
            let moved: Vec<f64> = x.iter().map(|&v| f64::from(a * v + b)).collect();
            prop_assert_eq!(both(&base).1, both(&moved).1);
        }
    }
}
