use std::collections::VecDeque;

use super::{Counted, DynGraph};
use crate::{Error, Result};

/// Decremental BFS levels from a fixed source (Even–Shiloach tree).
///
/// `level[v] == n` stands for "unreachable". A deletion re-queues both
/// endpoints; a queued vertex without a neighbour one level closer to the
/// source drops one level and re-queues itself and its neighbours.
#[derive(Clone, Debug)]
pub struct EsState {
    pub graph: DynGraph,
    pub source: usize,
    level: Vec<usize>,
}

pub type EvenShiloachOracle = Counted<EsState>;

impl EvenShiloachOracle {
    pub fn new(graph: DynGraph, source: usize) -> Result<Self> {
        graph.check_vertex(source)?;
        if graph.is_directed() {
            return Err(Error::InvalidParameter("Even–Shiloach oracle expects an undirected graph".into()));
        }
        let n = graph.vertex_count();
        let level = graph.bfs(source, None).into_iter().map(|d| d.unwrap_or(n)).collect();
        Ok(Counted::wrap(EsState { graph, source, level }))
    }

    pub fn delete_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.update(|s| s.delete_edge(a, b))
    }

    /// Always rejected: the structure is decremental.
    pub fn insert_edge(&mut self, a: usize, b: usize) -> Result<()> {
        Err(Error::Rejected(format!(
            "insertion {a}-{b} into a decremental structure"
        )))
    }

    pub fn dist(&mut self, v: usize) -> Result<Option<usize>> {
        self.query(|s| s.dist(v))
    }
}

impl EsState {
    pub fn levels(&self) -> &[usize] {
        &self.level
    }

    pub fn dist(&self, v: usize) -> Result<Option<usize>> {
        self.graph.check_vertex(v)?;
        let n = self.graph.vertex_count();
        Ok((self.level[v] < n).then_some(self.level[v]))
    }

    fn delete_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.graph.delete_edge(a, b)?;
        let n = self.graph.vertex_count();
        let mut queue = VecDeque::from([a, b]);
        while let Some(v) = queue.pop_front() {
            if v == self.source || self.level[v] >= n {
                continue;
            }
            let want = self.level[v] - 1;
            if self.graph.neighbors(v).any(|(w, _)| self.level[w] == want) {
                continue;
            }
            self.level[v] += 1;
            if self.level[v] >= n {
                self.level[v] = n;
            }
            queue.push_back(v);
            queue.extend(self.graph.neighbors(v).map(|(w, _)| w));
        }
        Ok(())
    }
}
