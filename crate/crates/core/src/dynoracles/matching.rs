use std::collections::VecDeque;

use super::{Counted, DynGraph};
use crate::{Error, Result};

/// Maximum matching of a bipartite graph, kept maximum across edge updates
/// by dropping broken pairs and re-augmenting from the previous matching.
#[derive(Clone, Debug)]
pub struct MatchingState {
    pub graph: DynGraph,
    left: Vec<bool>,
    mate: Vec<Option<usize>>,
    size: usize,
}

pub type MatchingOracle = Counted<MatchingState>;

impl MatchingOracle {
    /// `left[v]` assigns each vertex to a side; every edge must cross.
    pub fn new(graph: DynGraph, left: Vec<bool>) -> Result<Self> {
        if left.len() != graph.vertex_count() {
            return Err(Error::dim("side assignment length", graph.vertex_count(), left.len()));
        }
        for (a, b, _) in graph.edges() {
            if left[a] == left[b] {
                return Err(Error::InvalidParameter(format!("edge {a}-{b} does not cross sides")));
            }
        }
        let n = graph.vertex_count();
        let mut state = MatchingState {
            graph,
            left,
            mate: vec![None; n],
            size: 0,
        };
        state.augment();
        Ok(Counted::wrap(state))
    }

    pub fn insert_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.update(|s| {
            s.graph.check_vertex(a)?;
            s.graph.check_vertex(b)?;
            if s.left[a] == s.left[b] {
                return Err(Error::Rejected(format!("edge {a}-{b} does not cross sides")));
            }
            s.graph.insert_edge(a, b, 1)?;
            s.augment();
            Ok(())
        })
    }

    pub fn delete_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.update(|s| {
            s.graph.delete_edge(a, b)?;
            if s.mate[a] == Some(b) {
                s.mate[a] = None;
                s.mate[b] = None;
                s.size -= 1;
            }
            s.augment();
            Ok(())
        })
    }

    pub fn matching_size(&mut self) -> Result<usize> {
        self.query(|s| Ok(s.size))
    }
}

impl MatchingState {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mate(&self, v: usize) -> Option<usize> {
        self.mate[v]
    }

    /// Hopcroft–Karp phases until no augmenting path remains.
    fn augment(&mut self) {
        let n = self.graph.vertex_count();
        let lefts: Vec<usize> = (0..n).filter(|&v| self.left[v]).collect();
        loop {
            let mut layer = vec![usize::MAX; n];
            let mut queue = VecDeque::new();
            for &l in &lefts {
                if self.mate[l].is_none() {
                    layer[l] = 0;
                    queue.push_back(l);
                }
            }
            let mut found = false;
            while let Some(l) = queue.pop_front() {
                for (r, _) in self.graph.neighbors(l) {
                    match self.mate[r] {
                        None => found = true,
                        Some(l2) if layer[l2] == usize::MAX => {
                            layer[l2] = layer[l] + 1;
                            queue.push_back(l2);
                        }
                        _ => {}
                    }
                }
            }
            if !found {
                return;
            }
            let mut grew = false;
            for &l in &lefts {
                if self.mate[l].is_none() && self.dfs(l, &mut layer) {
                    self.size += 1;
                    grew = true;
                }
            }
            if !grew {
                return;
            }
        }
    }

    fn dfs(&mut self, l: usize, layer: &mut [usize]) -> bool {
        let nbrs: Vec<usize> = self.graph.neighbors(l).map(|(r, _)| r).collect();
        for r in nbrs {
            let next = self.mate[r];
            let ok = match next {
                None => true,
                Some(l2) => layer[l2] == layer[l] + 1 && self.dfs(l2, layer),
            };
            if ok {
                self.mate[l] = Some(r);
                self.mate[r] = Some(l);
                return true;
            }
        }
        layer[l] = usize::MAX;
        false
    }
}

/// From-scratch maximum matching size by simple augmenting paths (Kuhn).
pub fn maximum_matching_size(graph: &DynGraph, left: &[bool]) -> usize {
    fn try_kuhn(g: &DynGraph, l: usize, seen: &mut [bool], mate: &mut [Option<usize>]) -> bool {
        for (r, _) in g.neighbors(l) {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            if mate[r].is_none_or(|l2| try_kuhn(g, l2, seen, mate)) {
                mate[r] = Some(l);
                return true;
            }
        }
        false
    }
    let n = graph.vertex_count();
    let mut mate = vec![None; n];
    (0..n)
        .filter(|&l| left[l])
        .filter(|&l| try_kuhn(graph, l, &mut vec![false; n], &mut mate))
        .count()
}
