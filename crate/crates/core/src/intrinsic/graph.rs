//! Sampled-graph approximation of intrinsic distances. Interior nodes are
//! drawn with boundary-weighted density (the metrics blow up at the
//! boundary, which is where uniform sampling starves), each inserted node
//! links to its nearest predecessors, and edge weights are quadrature
//! lengths of the straight segments. Growing the graph only ever adds nodes
//! and edges, so shortest-path values are nonincreasing in the node count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{segment_inside, segment_length, Polyline, QuadratureSpec};
use crate::error::{Error, Result};
use crate::geometry::{Point, Vector};
use crate::metrics::MetricEvaluator;

/// Node sampling and edge construction parameters.
#[derive(Debug, Clone)]
pub struct GraphConfig {
    /// Sampled interior nodes (anchors come on top of these).
    pub node_count: usize,
    /// Edges from each inserted node to its nearest predecessors.
    pub degree: usize,
    /// Boundary weighting: sampling density is proportional to
    /// `(delta + floor)^(-exponent)`.
    pub boundary_exponent: f64,
    /// Floor of the boundary weighting, relative to the sampling region
    /// scale.
    pub boundary_floor: f64,
    pub quadrature: QuadratureSpec,
    pub seed: u64,
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self {
            node_count: 4000,
            degree: 16,
            boundary_exponent: 0.5,
            boundary_floor: 1e-3,
            quadrature: QuadratureSpec::default(),
            seed: 0,
        }
    }
}

/// Weighted directed graph on sampled interior points. The first nodes are
/// the caller's anchors, in order.
pub struct PathGraph {
    nodes: Vec<Point>,
    adjacency: Vec<Vec<(usize, f64)>>,
    symmetric: bool,
    anchor_count: usize,
    // sampling state, kept so the graph can be extended deterministically
    rng: ChaCha8Rng,
    lo: Vector,
    hi: Vector,
    scale: f64,
}

impl PathGraph {
    /// Build a graph containing `anchors` plus `cfg.node_count` sampled
    /// nodes.
    pub fn build(metric: &MetricEvaluator, anchors: &[Point], cfg: &GraphConfig) -> Result<Self> {
        if anchors.is_empty() {
            return Err(Error::InvalidParameter(
                "need at least one anchor point".into(),
            ));
        }
        let domain = metric.domain();
        for a in anchors {
            if !domain.contains(a)? {
                return Err(Error::OutsideDomain);
            }
        }
        let (lo, hi) = sampling_box(metric, anchors)?;
        let scale = (&hi - &lo).amax().max(1e-12);
        let mut graph = Self {
            nodes: Vec::new(),
            adjacency: Vec::new(),
            symmetric: metric.symmetric(),
            anchor_count: anchors.len(),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            lo,
            hi,
            scale,
        };
        for a in anchors {
            graph.insert_node(metric, a.clone(), cfg)?;
        }
        graph.extend(metric, cfg.node_count, cfg)?;
        Ok(graph)
    }

    /// Add `additional` sampled nodes, continuing the same random stream.
    /// Existing nodes and edges are untouched, so distances can only
    /// improve.
    pub fn extend(
        &mut self,
        metric: &MetricEvaluator,
        additional: usize,
        cfg: &GraphConfig,
    ) -> Result<()> {
        let domain = metric.domain();
        let d = self.lo.len();
        let floor = (cfg.boundary_floor * self.scale).max(1e-15);
        let mut accepted = 0usize;
        let mut attempts = 0usize;
        let budget = additional.saturating_mul(400).max(10_000);
        while accepted < additional && attempts < budget {
            attempts += 1;
            let candidate = Vector::from_fn(d, |i, _| self.rng.gen_range(self.lo[i]..=self.hi[i]));
            if !domain.contains(&candidate)? {
                continue;
            }
            let delta = domain.boundary_distance(&candidate)?;
            let weight = (floor / (delta + floor)).powf(cfg.boundary_exponent);
            if self.rng.gen::<f64>() >= weight {
                continue;
            }
            self.insert_node(metric, candidate, cfg)?;
            accepted += 1;
        }
        Ok(())
    }

    /// Link a new node to its nearest predecessors with interior segments.
    fn insert_node(
        &mut self,
        metric: &MetricEvaluator,
        p: Point,
        cfg: &GraphConfig,
    ) -> Result<()> {
        let domain = metric.domain();
        let new_idx = self.nodes.len();
        let mut order: Vec<(f64, usize)> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, q)| ((q - &p).norm(), i))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut chosen = Vec::with_capacity(cfg.degree);
        for &(dist, idx) in &order {
            if chosen.len() >= cfg.degree {
                break;
            }
            if dist == 0.0 {
                continue; // coincident anchor; leave unconnected duplicates alone
            }
            if segment_inside(domain, &p, &self.nodes[idx])? {
                chosen.push(idx);
            }
        }

        // weights are independent per edge; evaluate them in parallel
        let weights: Vec<Result<(f64, f64)>> = chosen
            .par_iter()
            .map(|&idx| {
                let fwd = segment_length(metric, &p, &self.nodes[idx], &cfg.quadrature)?;
                let back = if self.symmetric {
                    fwd
                } else {
                    segment_length(metric, &self.nodes[idx], &p, &cfg.quadrature)?
                };
                Ok((fwd, back))
            })
            .collect();

        self.nodes.push(p);
        self.adjacency.push(Vec::with_capacity(chosen.len()));
        for (&idx, w) in chosen.iter().zip(weights) {
            let (fwd, back) = w?;
            self.adjacency[new_idx].push((idx, fwd));
            self.adjacency[idx].push((new_idx, back));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn anchor_count(&self) -> usize {
        self.anchor_count
    }

    pub fn node(&self, i: usize) -> &Point {
        &self.nodes[i]
    }

    /// Dijkstra distances from one node to every node (`inf` when
    /// unreachable).
    pub fn distances_from(&self, from: usize) -> Vec<f64> {
        self.dijkstra(from).0
    }

    fn dijkstra(&self, from: usize) -> (Vec<f64>, Vec<usize>) {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;

        #[derive(PartialEq)]
        struct Key(f64);
        impl Eq for Key {}
        impl PartialOrd for Key {
            fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for Key {
            fn cmp(&self, other: &Self) -> std::cmp::Ordering {
                self.0.total_cmp(&other.0)
            }
        }

        let n = self.nodes.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut parent = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[from] = 0.0;
        heap.push(Reverse((Key(0.0), from)));
        while let Some(Reverse((Key(d), u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adjacency[u] {
                let cand = d + w;
                if cand < dist[v] {
                    dist[v] = cand;
                    parent[v] = u;
                    heap.push(Reverse((Key(cand), v)));
                }
            }
        }
        (dist, parent)
    }

    /// Value and minimizing polyline between two node indices.
    pub fn shortest_path(&self, from: usize, to: usize) -> Result<(f64, Polyline)> {
        let (dist, parent) = self.dijkstra(from);
        if !dist[to].is_finite() {
            return Err(Error::DisconnectedGraph(format!(
                "no path between nodes {from} and {to}; increase node_count"
            )));
        }
        let mut chain = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur];
            chain.push(cur);
        }
        chain.reverse();
        let pts: Vec<Point> = chain.into_iter().map(|i| self.nodes[i].clone()).collect();
        Ok((dist[to], Polyline::new(pts)?))
    }
}

/// Result of a graph distance query: an upper approximation of the
/// intrinsic distance and the realizing polyline (absent exactly when the
/// endpoints coincide).
#[derive(Debug, Clone)]
pub struct GraphDistance {
    pub value: f64,
    pub path: Option<Polyline>,
}

/// Shortest sampled-graph path between two interior points; the value is an
/// upper bound of the intrinsic distance up to quadrature error.
pub fn graph_distance(
    metric: &MetricEvaluator,
    x: &Point,
    y: &Point,
    cfg: &GraphConfig,
) -> Result<GraphDistance> {
    let domain = metric.domain();
    if !domain.contains(x)? || !domain.contains(y)? {
        return Err(Error::OutsideDomain);
    }
    if (x - y).norm() == 0.0 {
        return Ok(GraphDistance {
            value: 0.0,
            path: None,
        });
    }
    let graph = PathGraph::build(metric, &[x.clone(), y.clone()], cfg)?;
    let (value, path) = graph.shortest_path(0, 1)?;
    Ok(GraphDistance {
        value,
        path: Some(path),
    })
}

/// Axis-aligned sampling region: the domain's bounding box when it is
/// bounded, otherwise a box around the anchors sized by their spread and
/// boundary distances and clipped by ray casting.
fn sampling_box(metric: &MetricEvaluator, anchors: &[Point]) -> Result<(Vector, Vector)> {
    let domain = metric.domain();
    if let Some((lo, hi)) = domain.bounding_box() {
        return Ok((lo, hi));
    }
    let d = domain.dim();
    let mut center = Vector::zeros(d);
    for a in anchors {
        center += a;
    }
    center /= anchors.len() as f64;
    if !domain.contains(&center)? {
        center = anchors[0].clone();
    }
    let mut spread: f64 = 0.0;
    let mut max_delta: f64 = 0.0;
    for a in anchors {
        spread = spread.max((a - &center).norm());
        max_delta = max_delta.max(domain.boundary_distance(a)?);
    }
    let cap = 8.0 * (spread + max_delta).max(1e-3);
    let mut lo = Vector::zeros(d);
    let mut hi = Vector::zeros(d);
    for i in 0..d {
        let mut e = Vector::zeros(d);
        e[i] = 1.0;
        let up = domain.ray_boundary_distance(&center, &e)?.min(cap);
        let down = domain.ray_boundary_distance(&center, &(-&e))?.min(cap);
        hi[i] = center[i] + up;
        lo[i] = center[i] - down;
    }
    for a in anchors {
        for i in 0..d {
            lo[i] = lo[i].min(a[i] - 1e-9);
            hi[i] = hi[i].max(a[i] + 1e-9);
        }
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{point, Domain};
    use crate::metrics::{hilbert_distance_closed_form, MetricEvaluator, MetricKind};

    fn small_cfg(nodes: usize) -> GraphConfig {
        GraphConfig {
            node_count: nodes,
            quadrature: QuadratureSpec {
                rule: crate::intrinsic::QuadratureRule::Gauss5,
                subdivisions: 8,
            },
            ..GraphConfig::default()
        }
    }

    #[test]
    fn coincident_endpoints_give_zero() {
        let disk = Domain::unit_ball(2);
        let metric = MetricEvaluator::new(MetricKind::KobayashiHilbert, disk).unwrap();
        let x = point(&[0.2, 0.1]);
        let out = graph_distance(&metric, &x, &x, &small_cfg(0)).unwrap();
        assert_eq!(out.value, 0.0);
        assert!(out.path.is_none());
    }

    #[test]
    fn disk_distance_close_to_cross_ratio() {
        let disk = Domain::unit_ball(2);
        let metric = MetricEvaluator::new(MetricKind::KobayashiHilbert, disk.clone()).unwrap();
        let x = point(&[0.0, 0.0]);
        let y = point(&[0.5, 0.0]);
        let exact = hilbert_distance_closed_form(&disk, &x, &y).unwrap();
        let out = graph_distance(&metric, &x, &y, &small_cfg(500)).unwrap();
        assert!(out.value >= exact - 1e-9, "upper bound semantics");
        assert!(out.value <= exact * 1.02, "within 2%: {} vs {exact}", out.value);
        let path = out.path.unwrap();
        assert!(path.segments() >= 1);
    }

    #[test]
    fn extension_never_increases_distances() {
        let disk = Domain::unit_ball(2);
        let metric = MetricEvaluator::new(MetricKind::KobayashiHilbert, disk).unwrap();
        let anchors = [point(&[-0.4, 0.35]), point(&[0.62, -0.1])];
        let cfg = small_cfg(250);
        let mut graph = PathGraph::build(&metric, &anchors, &cfg).unwrap();
        let (before, _) = graph.shortest_path(0, 1).unwrap();
        graph.extend(&metric, 250, &cfg).unwrap();
        let (after, _) = graph.shortest_path(0, 1).unwrap();
        assert!(after <= before + 1e-12);
    }

    #[test]
    fn asymmetric_metric_builds_directed_edges() {
        let disk = Domain::unit_ball(2);
        let metric = MetricEvaluator::new(MetricKind::Funk, disk).unwrap();
        let x = point(&[0.0, 0.0]);
        let y = point(&[0.6, 0.0]);
        let cfg = small_cfg(150);
        let fwd = graph_distance(&metric, &x, &y, &cfg).unwrap().value;
        let back = graph_distance(&metric, &y, &x, &cfg).unwrap().value;
        // Funk distance toward the boundary exceeds the way back
        assert!(fwd > back);
    }
}
