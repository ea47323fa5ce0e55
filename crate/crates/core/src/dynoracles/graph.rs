use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::{Error, Result};

/// Simple graph with `{0,1}` edge weights. Undirected graphs store each edge
/// in both endpoint maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynGraph {
    directed: bool,
    adj: Vec<BTreeMap<usize, u8>>,
    edges: usize,
}

impl DynGraph {
    pub fn undirected(n: usize) -> Self {
        DynGraph {
            directed: false,
            adj: vec![BTreeMap::new(); n],
            edges: 0,
        }
    }

    pub fn directed(n: usize) -> Self {
        DynGraph {
            directed: true,
            ..Self::undirected(n)
        }
    }

    pub fn from_edges(n: usize, directed: bool, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = if directed { Self::directed(n) } else { Self::undirected(n) };
        for &(a, b) in edges {
            g.insert_edge(a, b, 1)?;
        }
        Ok(g)
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(BTreeMap::new());
        self.adj.len() - 1
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.adj.len() {
            return Err(Error::OutOfRange {
                context: "vertex",
                index: v,
                size: self.adj.len(),
            });
        }
        Ok(())
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj.get(a).is_some_and(|m| m.contains_key(&b))
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<u8> {
        self.adj.get(a).and_then(|m| m.get(&b).copied())
    }

    pub fn insert_edge(&mut self, a: usize, b: usize, weight: u8) -> Result<()> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Err(Error::Rejected(format!("self-loop at {a}")));
        }
        if weight > 1 {
            return Err(Error::InvalidParameter(format!("edge weight {weight} not in {{0,1}}")));
        }
        if self.has_edge(a, b) {
            return Err(Error::Rejected(format!("edge {a}-{b} already present")));
        }
        self.adj[a].insert(b, weight);
        if !self.directed {
            self.adj[b].insert(a, weight);
        }
        self.edges += 1;
        Ok(())
    }

    /// Removes the edge and returns its weight.
    pub fn delete_edge(&mut self, a: usize, b: usize) -> Result<u8> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        let w = self.adj[a]
            .remove(&b)
            .ok_or_else(|| Error::Rejected(format!("edge {a}-{b} not present")))?;
        if !self.directed {
            self.adj[b].remove(&a);
        }
        self.edges -= 1;
        Ok(w)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.adj[v].iter().map(|(&w, &c)| (w, c))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Every edge once; for undirected graphs with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize, u8)> {
        let mut out = Vec::with_capacity(self.edges);
        for (a, m) in self.adj.iter().enumerate() {
            for (&b, &w) in m {
                if self.directed || a < b {
                    out.push((a, b, w));
                }
            }
        }
        out
    }

    /// Hop distances from `src` through vertices with `active[v]` set (all
    /// vertices when `active` is `None`). Weights are ignored.
    pub fn bfs(&self, src: usize, active: Option<&[bool]>) -> Vec<Option<usize>> {
        let on = |v: usize| active.is_none_or(|a| a[v]);
        let mut dist = vec![None; self.adj.len()];
        if !on(src) {
            return dist;
        }
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for &w in self.adj[v].keys() {
                if dist[w].is_none() && on(w) {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Weighted distances from `src` with `{0,1}` edge weights.
    pub fn zero_one_bfs(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist: Vec<Option<usize>> = vec![None; self.adj.len()];
        dist[src] = Some(0);
        let mut deque = VecDeque::from([src]);
        while let Some(v) = deque.pop_front() {
            let d = dist[v].unwrap_or(0);
            for (&w, &c) in &self.adj[v] {
                let nd = d + c as usize;
                if dist[w].is_none_or(|old| nd < old) {
                    dist[w] = Some(nd);
                    if c == 0 {
                        deque.push_front(w);
                    } else {
                        deque.push_back(w);
                    }
                }
            }
        }
        dist
    }

    /// `"n m"` header, then `"a b [w]"` per edge, 0-based.
    pub fn parse(text: &str, directed: bool) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (k, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let nums = parse_numbers(k, header)?;
        let [n, m] = nums[..] else {
            return Err(Error::parse(k, "header must be `n m`"));
        };
        let mut g = if directed { Self::directed(n) } else { Self::undirected(n) };
        for (k, line) in lines {
            let nums = parse_numbers(k, line)?;
            let (a, b, w) = match nums[..] {
                [a, b] => (a, b, 1),
                [a, b, w] => (a, b, w),
                _ => return Err(Error::parse(k, "edge must be `a b [w]`")),
            };
            let w = u8::try_from(w).map_err(|_| Error::parse(k, "weight must be 0 or 1"))?;
            g.insert_edge(a, b, w).map_err(|e| Error::parse(k, e.to_string()))?;
        }
        if g.edge_count() != m {
            return Err(Error::parse(1, format!("header declares {m} edges, found {}", g.edge_count())));
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.vertex_count(), self.edge_count());
        for (a, b, w) in self.edges() {
            if w == 1 {
                let _ = writeln!(out, "{a} {b}");
            } else {
                let _ = writeln!(out, "{a} {b} {w}");
            }
        }
        out
    }
}

fn parse_numbers(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(line, format!("bad number `{t}`"))))
        .collect()
}
