use std::collections::VecDeque;

use super::{Counted, DynGraph};
use crate::{Error, Rational, Result};

/// `|E(S)| / |S|` for a nonempty vertex set.
pub fn density(graph: &DynGraph, set: &[usize]) -> Result<Rational> {
    if set.is_empty() {
        return Err(Error::InvalidParameter("density of an empty set".into()));
    }
    let mut inside = vec![false; graph.vertex_count()];
    for &v in set {
        graph.check_vertex(v)?;
        inside[v] = true;
    }
    let edges = graph
        .edges()
        .iter()
        .filter(|&&(a, b, _)| inside[a] && inside[b])
        .count();
    Ok(Rational::new(edges as i64, set.len() as i64))
}

struct Dinic {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add(&mut self, a: usize, b: usize, forward: i64, backward: i64) {
        self.head[a].push(self.to.len());
        self.to.push(b);
        self.cap.push(forward);
        self.head[b].push(self.to.len());
        self.to.push(a);
        self.cap.push(backward);
    }

    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.head.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.head[v] {
                let w = self.to[e];
                if self.cap[e] > 0 && level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        level
    }

    fn push(&mut self, v: usize, t: usize, limit: i64, level: &[usize], next: &mut [usize]) -> i64 {
        if v == t {
            return limit;
        }
        while next[v] < self.head[v].len() {
            let e = self.head[v][next[v]];
            let w = self.to[e];
            if self.cap[e] > 0 && level[w] == level[v] + 1 {
                let got = self.push(w, t, limit.min(self.cap[e]), level, next);
                if got > 0 {
                    self.cap[e] -= got;
                    self.cap[e ^ 1] += got;
                    return got;
                }
            }
            next[v] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            let level = self.levels(s);
            if level[t] == usize::MAX {
                return flow;
            }
            let mut next = vec![0; self.head.len()];
            loop {
                let got = self.push(s, t, i64::MAX, &level, &mut next);
                if got == 0 {
                    break;
                }
                flow += got;
            }
        }
    }
}

/// Some `S` with `ρ(S) > p / scale`, if one exists (Goldberg's cut network
/// with every capacity multiplied by `scale`).
fn denser_than(graph: &DynGraph, p: i64, scale: i64) -> Option<Vec<usize>> {
    let n = graph.vertex_count();
    let m = graph.edge_count() as i64;
    let (src, sink) = (n, n + 1);
    let mut net = Dinic::new(n + 2);
    for v in 0..n {
        net.add(src, v, m * scale, 0);
        net.add(v, sink, m * scale + 2 * p - graph.degree(v) as i64 * scale, 0);
    }
    for (a, b, _) in graph.edges() {
        net.add(a, b, scale, scale);
    }
    let flow = net.max_flow(src, sink);
    if flow >= n as i64 * m * scale {
        return None;
    }
    let level = net.levels(src);
    Some((0..n).filter(|&v| level[v] != usize::MAX).collect())
}

/// Exact maximum density and a vertex set achieving it.
///
/// Binary search over the grid `p / (2n(n-1))`. Two distinct densities differ
/// by at least `1/(n(n-1))`, so once the bracket is narrower than that the
/// lower end, always the density of a concrete witness, is the maximum.
pub fn densest_subgraph_exact(graph: &DynGraph) -> Result<(Rational, Vec<usize>)> {
    let n = graph.vertex_count();
    if n == 0 {
        return Err(Error::InvalidParameter("densest subgraph of an empty graph".into()));
    }
    let mut witness: Vec<usize> = (0..n).collect();
    let mut lo = density(graph, &witness)?;
    if n == 1 || graph.edge_count() == 0 {
        return Ok((lo, witness));
    }
    let pairs = (n * (n - 1)) as i64;
    let scale = 2 * pairs;
    let gap = Rational::new(1, pairs);
    let mut hi = Rational::from_integer(n as i64);
    while hi - lo >= gap {
        let mid = (lo + hi) / 2;
        let p = (mid * scale).floor().to_integer();
        match denser_than(graph, p, scale) {
            Some(set) => {
                lo = density(graph, &set)?;
                witness = set;
            }
            None => hi = Rational::new(p, scale),
        }
    }
    Ok((lo, witness))
}

#[derive(Clone, Debug)]
pub struct DensestState {
    pub graph: DynGraph,
}

pub type DensestOracle = Counted<DensestState>;

impl DensestOracle {
    pub fn from_graph(graph: DynGraph) -> Self {
        Counted::wrap(DensestState { graph })
    }

    pub fn insert_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.update(|s| s.graph.insert_edge(a, b, 1))
    }

    pub fn delete_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.update(|s| s.graph.delete_edge(a, b).map(|_| ()))
    }

    pub fn densest(&mut self) -> Result<(Rational, Vec<usize>)> {
        self.query(|s| densest_subgraph_exact(&s.graph))
    }
}
