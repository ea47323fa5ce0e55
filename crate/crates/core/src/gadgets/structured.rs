//! Diameter and densest subgraph: gadgets built from many small copies.

use super::fully::int;
use super::{rounds, Budget, GadgetConfig, Outcome, Trace, UndoMode};
use crate::bitcore::{BoolMatrix, BoolVector};
use crate::dynoracles::{DensestOracle, DiameterOracle, DynGraph};
use crate::{Rational, Result};

/// Vertex ids of one vector graph: `b_x = base + x`, `c_y = base + s + y`.
#[derive(Clone, Copy)]
struct VectorGraph {
    base: usize,
    s: usize,
}

impl VectorGraph {
    fn b(self, x: usize) -> usize {
        self.base + x
    }

    fn c(self, y: usize) -> usize {
        self.base + self.s + y
    }

    fn vertices(self) -> std::ops::Range<usize> {
        self.base..self.base + 2 * self.s
    }

    /// Two weight-1 cliques, cross edge `(b_x, c_y)` iff bit `x·s + y` is 0.
    fn build(self, g: &mut DynGraph, bits: &BoolVector) -> Result<()> {
        for x in 0..self.s {
            for y in x + 1..self.s {
                g.insert_edge(self.b(x), self.b(y), 1)?;
                g.insert_edge(self.c(x), self.c(y), 1)?;
            }
        }
        for x in 0..self.s {
            for y in 0..self.s {
                if !bits.get(x * self.s + y) {
                    g.insert_edge(self.b(x), self.c(y), 1)?;
                }
            }
        }
        Ok(())
    }
}

fn ceil_sqrt(n: usize) -> usize {
    let mut s = (n as f64).sqrt() as usize;
    while s * s < n {
        s += 1;
    }
    while s > 1 && (s - 1) * (s - 1) >= n {
        s -= 1;
    }
    s.max(1)
}

/// `n2` is padded to `s²`. Vertices: `a = 0`, `z = 1`, `H^v` at 2, `H^{M_i}`
/// at `2 + 2s(i + 1)`. `z` is tied to `a` and to every `H^{M_i}` with weight 0.
///
/// Exact: per round at most `n2` cross-edge toggles for `H^v`, then `6s`
/// updates per stage (doubled when undone) and one query per `u_i = 1`.
pub(crate) fn diameter(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let s = ceil_sqrt(n2);
    let padded = m.padded(n1, s * s);
    let (a, z) = (0, 1);
    let hv = VectorGraph { base: 2, s };
    let hm = |i: usize| VectorGraph { base: 2 + 2 * s * (i + 1), s };
    let mut g = DynGraph::undirected(2 + 2 * s * (n1 + 1));
    g.insert_edge(z, a, 0)?;
    hv.build(&mut g, &BoolVector::zeros(s * s))?;
    for x in hv.vertices() {
        g.insert_edge(a, x, 1)?;
    }
    for i in 0..n1 {
        hm(i).build(&mut g, padded.row(i))?;
        for x in hm(i).vertices() {
            g.insert_edge(z, x, 0)?;
        }
    }
    trace.derive("side", s);
    trace.derive("padded_n2", s * s);
    trace.derive("vertices", g.vertex_count());
    let mut o = DiameterOracle::from_graph(g);
    let mut current = BoolVector::zeros(s * s);
    for r in rounds(m, pairs)? {
        let before = o.counters();
        let target = r.v.resized(s * s);
        for k in 0..s * s {
            if target.get(k) != current.get(k) {
                let (b, c) = (hv.b(k / s), hv.c(k % s));
                if target.get(k) {
                    o.delete_edge(b, c)?;
                } else {
                    o.insert_edge(b, c, 1)?;
                }
            }
        }
        current = target;
        let mut any = false;
        for i in r.u.iter_ones() {
            let h = hm(i);
            if cfg.undo_mode == UndoMode::Snapshot {
                o.snapshot();
            }
            for x in h.vertices() {
                o.delete_edge(z, x)?;
                o.insert_edge(a, x, 1)?;
            }
            for x in 0..s {
                o.insert_edge(hv.b(x), h.b(x), 0)?;
                o.insert_edge(hv.c(x), h.c(x), 0)?;
            }
            let d = o.diameter()?;
            if !matches!(d, Some(1) | Some(2)) {
                return Err(trace.gap(format!("stage {i} diameter {d:?} outside {{1, 2}}")));
            }
            any |= trace.observe(Some(i), d.and_then(int), d == Some(2), r.mv.get(i));
            match cfg.undo_mode {
                UndoMode::Snapshot => o.rollback()?,
                UndoMode::Undo => {
                    for x in 0..s {
                        o.delete_edge(hv.b(x), h.b(x))?;
                        o.delete_edge(hv.c(x), h.c(x))?;
                    }
                    for x in h.vertices() {
                        o.delete_edge(a, x)?;
                        o.insert_edge(z, x, 0)?;
                    }
                }
            }
        }
        trace.end_round(any, before, o.counters());
    }
    let factor = if cfg.undo_mode == UndoMode::Undo { 2 } else { 1 };
    let budget = Budget {
        updates: n3 * (n2 + n1 * 6 * s * factor),
        queries: n3 * n1,
    };
    Ok((budget, o.counters()))
}

/// Threshold `(k + 7)/(k + 6)` of the densest gadget.
pub(crate) fn densest_threshold(k: usize) -> Rational {
    Rational::new(k as i64 + 7, k as i64 + 6)
}

/// `M` is padded to `n × n` and `k = 6n`. Bit graph `B_ij` occupies `k`
/// vertices (a path when `M_ij = 1`); row graph `R_i` and column graph `C_j`
/// have 3 vertices each, the first one special.
///
/// Exact: `3(|u| + |v|) ≤ 6n` insertions per round (doubled when undone) and
/// 1 query.
pub(crate) fn densest(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    let (n3, n) = (pairs.len(), m.n1().max(m.n2()));
    let k = 6 * n;
    let padded = m.padded(n, n);
    let bit_base = |i: usize, j: usize| (i * n + j) * k;
    let row_base = |i: usize| n * n * k + 3 * i;
    let col_base = |j: usize| n * n * k + 3 * n + 3 * j;
    let mut g = DynGraph::undirected(n * n * k + 6 * n);
    for i in 0..n {
        for j in 0..n {
            let b = bit_base(i, j);
            if padded.get(i, j) {
                for x in 0..k - 1 {
                    g.insert_edge(b + x, b + x + 1, 1)?;
                }
            }
            g.insert_edge(row_base(i), b, 1)?;
            g.insert_edge(col_base(j), b + k - 1, 1)?;
        }
    }
    trace.derive("n", n);
    trace.derive("k", k);
    trace.derive("vertices", g.vertex_count());
    let threshold = densest_threshold(k);
    let mut o = DensestOracle::from_graph(g);
    for r in rounds(m, pairs)? {
        let before = o.counters();
        if cfg.undo_mode == UndoMode::Snapshot {
            o.snapshot();
        }
        let bases: Vec<usize> = r
            .u
            .iter_ones()
            .map(row_base)
            .chain(r.v.iter_ones().map(col_base))
            .collect();
        let triangle = |b: usize| [(b, b + 1), (b + 1, b + 2), (b, b + 2)];
        for &b in &bases {
            for (x, y) in triangle(b) {
                o.insert_edge(x, y)?;
            }
        }
        let (rho, _) = o.densest()?;
        let b = trace.observe(None, Some(rho), rho >= threshold, r.product);
        match cfg.undo_mode {
            UndoMode::Snapshot => o.rollback()?,
            UndoMode::Undo => {
                for &b in &bases {
                    for (x, y) in triangle(b) {
                        o.delete_edge(x, y)?;
                    }
                }
            }
        }
        trace.end_round(b, before, o.counters());
    }
    let factor = if cfg.undo_mode == UndoMode::Undo { 2 } else { 1 };
    let budget = Budget {
        updates: n3 * 6 * n * factor,
        queries: n3,
    };
    Ok((budget, o.counters()))
}
