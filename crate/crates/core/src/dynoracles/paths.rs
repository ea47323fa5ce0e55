//! BFS-per-query oracles: subgraph connectivity, distances and reachability,
//! triangles, color distances, d-failure connectivity and diameter.

use super::{Counted, DynGraph};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct SubConnState {
    pub graph: DynGraph,
    pub active: Vec<bool>,
}

/// Connectivity inside the subgraph induced by the active vertices.
pub type SubConnOracle = Counted<SubConnState>;

impl SubConnOracle {
    /// All vertices start active.
    pub fn from_graph(graph: DynGraph) -> Self {
        let active = vec![true; graph.vertex_count()];
        Counted::wrap(SubConnState { graph, active })
    }

    pub fn turn_on(&mut self, v: usize) -> Result<()> {
        self.update(|s| {
            s.graph.check_vertex(v)?;
            s.active[v] = true;
            Ok(())
        })
    }

    pub fn turn_off(&mut self, v: usize) -> Result<()> {
        self.update(|s| {
            s.graph.check_vertex(v)?;
            s.active[v] = false;
            Ok(())
        })
    }

    pub fn connected(&mut self, a: usize, b: usize) -> Result<bool> {
        self.query(|s| s.connected(a, b))
    }

    /// Same question phrased from a fixed source, as in the single-source
    /// variant.
    pub fn connected_from(&mut self, source: usize, v: usize) -> Result<bool> {
        self.connected(source, v)
    }
}

impl SubConnState {
    pub fn connected(&self, a: usize, b: usize) -> Result<bool> {
        self.graph.check_vertex(a)?;
        self.graph.check_vertex(b)?;
        if !self.active[a] || !self.active[b] {
            return Ok(false);
        }
        Ok(self.graph.bfs(a, Some(&self.active))[b].is_some())
    }
}

#[derive(Clone, Debug)]
pub struct DistanceState {
    pub graph: DynGraph,
}

/// Hop distances (undirected) or reachability (directed) by BFS per query.
pub type DistanceOracle = Counted<DistanceState>;

impl DistanceOracle {
    pub fn from_graph(graph: DynGraph) -> Self {
        Counted::wrap(DistanceState { graph })
    }

    pub fn insert_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.update(|s| s.graph.insert_edge(a, b, 1))
    }

    pub fn delete_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.update(|s| s.graph.delete_edge(a, b).map(|_| ()))
    }

    pub fn dist(&mut self, a: usize, b: usize) -> Result<Option<usize>> {
        self.query(|s| s.dist(a, b))
    }

    pub fn reach(&mut self, a: usize, b: usize) -> Result<bool> {
        self.query(|s| Ok(s.dist(a, b)?.is_some()))
    }
}

impl DistanceState {
    pub fn dist(&self, a: usize, b: usize) -> Result<Option<usize>> {
        self.graph.check_vertex(a)?;
        self.graph.check_vertex(b)?;
        Ok(self.graph.bfs(a, None)[b])
    }
}

#[derive(Clone, Debug)]
pub struct TriangleState {
    pub graph: DynGraph,
}

pub type TriangleOracle = Counted<TriangleState>;

impl TriangleOracle {
    pub fn from_graph(graph: DynGraph) -> Self {
        Counted::wrap(TriangleState { graph })
    }

    pub fn insert_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.update(|s| s.graph.insert_edge(a, b, 1))
    }

    pub fn delete_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.update(|s| s.graph.delete_edge(a, b).map(|_| ()))
    }

    pub fn triangle_at(&mut self, v: usize) -> Result<bool> {
        self.query(|s| s.triangle_at(v))
    }

    pub fn any_triangle(&mut self) -> Result<bool> {
        self.query(|s| Ok(s.any_triangle()))
    }
}

impl TriangleState {
    pub fn triangle_at(&self, v: usize) -> Result<bool> {
        self.graph.check_vertex(v)?;
        let nbrs: Vec<usize> = self.graph.neighbors(v).map(|(w, _)| w).collect();
        Ok(nbrs
            .iter()
            .enumerate()
            .any(|(k, &a)| nbrs[k + 1..].iter().any(|&b| self.graph.has_edge(a, b))))
    }

    pub fn any_triangle(&self) -> bool {
        (0..self.graph.vertex_count()).any(|v| self.triangle_at(v).unwrap_or(false))
    }
}

#[derive(Clone, Debug)]
pub struct ColorState {
    pub graph: DynGraph,
    pub colors: Vec<usize>,
}

/// Distance from a vertex to the nearest vertex of a given color.
pub type ColorDistanceOracle = Counted<ColorState>;

impl ColorDistanceOracle {
    pub fn new(graph: DynGraph, colors: Vec<usize>) -> Result<Self> {
        if colors.len() != graph.vertex_count() {
            return Err(Error::dim("color count", graph.vertex_count(), colors.len()));
        }
        Ok(Counted::wrap(ColorState { graph, colors }))
    }

    pub fn set_color(&mut self, v: usize, color: usize) -> Result<()> {
        self.update(|s| {
            s.graph.check_vertex(v)?;
            s.colors[v] = color;
            Ok(())
        })
    }

    pub fn color_distance(&mut self, v: usize, color: usize) -> Result<Option<usize>> {
        self.query(|s| s.color_distance(v, color))
    }
}

impl ColorState {
    pub fn color_distance(&self, v: usize, color: usize) -> Result<Option<usize>> {
        self.graph.check_vertex(v)?;
        Ok(self
            .graph
            .bfs(v, None)
            .iter()
            .zip(&self.colors)
            .filter(|&(_, &c)| c == color)
            .filter_map(|(d, _)| *d)
            .min())
    }
}

#[derive(Clone, Debug)]
pub struct DFailureState {
    pub graph: DynGraph,
    pub d: usize,
    pub active: Vec<bool>,
}

/// Fixed graph; each update restores it and then removes up to `d` vertices.
pub type DFailureOracle = Counted<DFailureState>;

impl DFailureOracle {
    pub fn new(graph: DynGraph, d: usize) -> Self {
        let active = vec![true; graph.vertex_count()];
        Counted::wrap(DFailureState { graph, d, active })
    }

    /// One batch: roll back to the original graph, then fail `vertices`.
    pub fn fail_batch(&mut self, vertices: &[usize]) -> Result<()> {
        self.update(|s| {
            if vertices.len() > s.d {
                return Err(Error::Rejected(format!(
                    "batch of {} failures exceeds d = {}",
                    vertices.len(),
                    s.d
                )));
            }
            for &v in vertices {
                s.graph.check_vertex(v)?;
            }
            s.active.fill(true);
            for &v in vertices {
                s.active[v] = false;
            }
            Ok(())
        })
    }

    pub fn connected(&mut self, a: usize, b: usize) -> Result<bool> {
        self.query(|s| {
            s.graph.check_vertex(a)?;
            s.graph.check_vertex(b)?;
            Ok(s.active[a] && s.active[b] && s.graph.bfs(a, Some(&s.active))[b].is_some())
        })
    }
}

#[derive(Clone, Debug)]
pub struct DiameterState {
    pub graph: DynGraph,
}

/// Diameter of an undirected graph with `{0,1}` weights.
pub type DiameterOracle = Counted<DiameterState>;

impl DiameterOracle {
    pub fn from_graph(graph: DynGraph) -> Self {
        Counted::wrap(DiameterState { graph })
    }

    pub fn insert_edge(&mut self, a: usize, b: usize, weight: u8) -> Result<()> {
        self.update(|s| s.graph.insert_edge(a, b, weight))
    }

    pub fn delete_edge(&mut self, a: usize, b: usize) -> Result<u8> {
        self.update(|s| s.graph.delete_edge(a, b))
    }

    /// `None` when the graph is disconnected.
    pub fn diameter(&mut self) -> Result<Option<usize>> {
        self.query(|s| Ok(s.diameter()))
    }
}

impl DiameterState {
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for v in 0..self.graph.vertex_count() {
            for d in self.graph.zero_one_bfs(v) {
                best = best.max(d?);
            }
        }
        Some(best)
    }
}
