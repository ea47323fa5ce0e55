//! Fully dynamic gadgets: one round per pair, then back to the base instance.
//!
//! Vertex layout shared by all of them: `l_i = i`, `r_j = n1 + j`, extras
//! after `n1 + n2`.

use super::{rounds, Budget, GadgetConfig, Outcome, Trace, UndoMode};
use crate::bitcore::{BoolMatrix, BoolVector};
use crate::dynoracles::{
    ColorDistanceOracle, Counted, DFailureOracle, DistanceOracle, DynGraph, SubConnOracle, TriangleOracle,
};
use crate::{Rational, Result};

pub(crate) fn int(x: usize) -> Option<Rational> {
    Some(Rational::from_integer(x as i64))
}

pub(crate) fn bit(b: bool) -> Option<Rational> {
    int(b as usize)
}

pub(crate) fn dist(d: Option<usize>) -> Option<Rational> {
    d.and_then(int)
}

/// `G_M` on `L ∪ R` plus `extra` more vertices.
pub(crate) fn bipartite_graph(m: &BoolMatrix, extra: usize) -> DynGraph {
    let n1 = m.n1();
    let mut g = DynGraph::undirected(n1 + m.n2() + extra);
    for i in 0..n1 {
        for j in m.row(i).iter_ones() {
            g.insert_edge(i, n1 + j, 1).expect("fresh bipartite edge");
        }
    }
    g
}

fn zeros(x: &BoolVector) -> impl Iterator<Item = usize> + '_ {
    x.iter().enumerate().filter(|&(_, b)| !b).map(|(k, _)| k)
}

fn undo_factor(cfg: &GadgetConfig) -> usize {
    match cfg.undo_mode {
        UndoMode::Undo => 2,
        UndoMode::Snapshot => 1,
    }
}

/// Snapshot hook at the start of a round.
fn begin<S: Clone>(oracle: &mut Counted<S>, cfg: &GadgetConfig) {
    if cfg.undo_mode == UndoMode::Snapshot {
        oracle.snapshot();
    }
}

/// Returns to the base instance, either by rollback or by running `undo`.
fn restore<S: Clone>(
    oracle: &mut Counted<S>,
    cfg: &GadgetConfig,
    undo: impl FnOnce(&mut Counted<S>) -> Result<()>,
) -> Result<()> {
    match cfg.undo_mode {
        UndoMode::Snapshot => oracle.rollback(),
        UndoMode::Undo => undo(oracle),
    }
}

/// `G_M` plus `s`, `t`, edges `t–l_i` and `r_j–s`. Returns `(graph, s, t)`.
fn st_graph(m: &BoolMatrix) -> (DynGraph, usize, usize) {
    let (n1, n2) = (m.n1(), m.n2());
    let (s, t) = (n1 + n2, n1 + n2 + 1);
    let mut g = bipartite_graph(m, 2);
    for i in 0..n1 {
        g.insert_edge(t, i, 1).expect("fresh spoke");
    }
    for j in 0..n2 {
        g.insert_edge(n1 + j, s, 1).expect("fresh spoke");
    }
    (g, s, t)
}

/// Exact: at most `n1 + n2` toggles per round (doubled when undone), 1 query.
pub(crate) fn st_subconn(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let (g, s, t) = st_graph(m);
    trace.derive("vertices", g.vertex_count());
    let mut o = SubConnOracle::from_graph(g);
    for r in rounds(m, pairs)? {
        let before = o.counters();
        begin(&mut o, cfg);
        let off: Vec<usize> = zeros(r.u).chain(zeros(r.v).map(|j| n1 + j)).collect();
        for &x in &off {
            o.turn_off(x)?;
        }
        let hit = o.connected(s, t)?;
        let bit = trace.observe(None, bit(hit), hit, r.product);
        restore(&mut o, cfg, |o| off.iter().try_for_each(|&x| o.turn_on(x)))?;
        trace.end_round(bit, before, o.counters());
    }
    let budget = Budget {
        updates: n3 * (n1 + n2) * undo_factor(cfg),
        queries: n3,
    };
    Ok((budget, o.counters()))
}

/// Spoke edges of the `s,t` graph that a round removes.
fn st_cuts(r: &super::Round<'_>, n1: usize, s: usize, t: usize) -> Vec<(usize, usize)> {
    zeros(r.u)
        .map(|i| (t, i))
        .chain(zeros(r.v).map(|j| (n1 + j, s)))
        .collect()
}

/// Exact: at most `n1 + n2` deletions per round (doubled when undone), 1 query.
pub(crate) fn st_sp_3v5(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let (g, s, t) = st_graph(m);
    trace.derive("vertices", g.vertex_count());
    let mut o = DistanceOracle::from_graph(g);
    for r in rounds(m, pairs)? {
        let before = o.counters();
        begin(&mut o, cfg);
        let cuts = st_cuts(&r, n1, s, t);
        for &(a, b) in &cuts {
            o.delete_edge(a, b)?;
        }
        let d = o.dist(s, t)?;
        if matches!(d, Some(x) if x < 3 || x == 4) {
            return Err(trace.gap(format!("d(s,t) = {d:?} outside {{3}} ∪ [5,∞]")));
        }
        let bit = trace.observe(None, dist(d), d == Some(3), r.product);
        restore(&mut o, cfg, |o| cuts.iter().try_for_each(|&(a, b)| o.insert_edge(a, b)))?;
        trace.end_round(bit, before, o.counters());
    }
    let budget = Budget {
        updates: n3 * (n1 + n2) * undo_factor(cfg),
        queries: n3,
    };
    Ok((budget, o.counters()))
}

/// Hub `s` joined to all of `L ∪ R`. Exact: at most `n1 + n2` deletions per
/// round (doubled when undone), 1 query.
pub(crate) fn triangle(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let hub = n1 + n2;
    let mut g = bipartite_graph(m, 1);
    for x in 0..hub {
        g.insert_edge(hub, x, 1)?;
    }
    trace.derive("vertices", g.vertex_count());
    let mut o = TriangleOracle::from_graph(g);
    for r in rounds(m, pairs)? {
        let before = o.counters();
        begin(&mut o, cfg);
        let cuts: Vec<usize> = zeros(r.u).chain(zeros(r.v).map(|j| n1 + j)).collect();
        for &x in &cuts {
            o.delete_edge(hub, x)?;
        }
        let at_hub = o.triangle_at(hub)?;
        // G_M is bipartite, so any triangle must use the hub.
        if o.state().any_triangle() != at_hub {
            return Err(trace.gap("triangle away from the hub"));
        }
        let bit = trace.observe(None, bit(at_hub), at_hub, r.product);
        restore(&mut o, cfg, |o| cuts.iter().try_for_each(|&x| o.insert_edge(hub, x)))?;
        trace.end_round(bit, before, o.counters());
    }
    let budget = Budget {
        updates: n3 * (n1 + n2) * undo_factor(cfg),
        queries: n3,
    };
    Ok((budget, o.counters()))
}

/// Source `s` joined to every `r_j`. Exact: at most `n2` toggles per round
/// (doubled when undone) and one query per `i` with `u_i = 1`.
pub(crate) fn ss_subconn(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let s = n1 + n2;
    let mut g = bipartite_graph(m, 1);
    for j in 0..n2 {
        g.insert_edge(s, n1 + j, 1)?;
    }
    trace.derive("vertices", g.vertex_count());
    let mut o = SubConnOracle::from_graph(g);
    for r in rounds(m, pairs)? {
        let before = o.counters();
        begin(&mut o, cfg);
        let off: Vec<usize> = zeros(r.v).map(|j| n1 + j).collect();
        for &x in &off {
            o.turn_off(x)?;
        }
        let mut any = false;
        for i in r.u.iter_ones() {
            let hit = o.connected_from(s, i)?;
            any |= trace.observe(Some(i), bit(hit), hit, r.mv.get(i));
        }
        restore(&mut o, cfg, |o| off.iter().try_for_each(|&x| o.turn_on(x)))?;
        trace.end_round(any, before, o.counters());
    }
    let budget = Budget {
        updates: n3 * n2 * undo_factor(cfg),
        queries: n3 * n1,
    };
    Ok((budget, o.counters()))
}

/// Same topology as [`ss_subconn`] with spoke deletions; `d(s,l_i)` is 2 or
/// at least 4. Exact counts as there.
pub(crate) fn ss_sp_2v4(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let s = n1 + n2;
    let mut g = bipartite_graph(m, 1);
    for j in 0..n2 {
        g.insert_edge(s, n1 + j, 1)?;
    }
    trace.derive("vertices", g.vertex_count());
    let mut o = DistanceOracle::from_graph(g);
    for r in rounds(m, pairs)? {
        let before = o.counters();
        begin(&mut o, cfg);
        let cuts: Vec<usize> = zeros(r.v).map(|j| n1 + j).collect();
        for &x in &cuts {
            o.delete_edge(s, x)?;
        }
        let mut any = false;
        for i in r.u.iter_ones() {
            let d = o.dist(s, i)?;
            if matches!(d, Some(x) if x < 2 || x == 3) {
                return Err(trace.gap(format!("d(s,l_{i}) = {d:?} outside {{2}} ∪ [4,∞]")));
            }
            any |= trace.observe(Some(i), dist(d), d == Some(2), r.mv.get(i));
        }
        restore(&mut o, cfg, |o| cuts.iter().try_for_each(|&x| o.insert_edge(s, x)))?;
        trace.end_round(any, before, o.counters());
    }
    let budget = Budget {
        updates: n3 * n2 * undo_factor(cfg),
        queries: n3 * n1,
    };
    Ok((budget, o.counters()))
}

/// `L` starts with color 0 and `R` with color 1. Exact: at most `n1`
/// recolorings per round (doubled when undone), one query per `j` with
/// `v_j = 1`.
pub(crate) fn color_oracle(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    const C: usize = 0;
    const C_PRIME: usize = 1;
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let g = bipartite_graph(m, 0);
    trace.derive("vertices", g.vertex_count());
    let colors = (0..n1 + n2).map(|x| if x < n1 { C } else { C_PRIME }).collect();
    let mut o = ColorDistanceOracle::new(g, colors)?;
    for r in rounds(m, pairs)? {
        let before = o.counters();
        begin(&mut o, cfg);
        let recolored: Vec<usize> = zeros(r.u).collect();
        for &i in &recolored {
            o.set_color(i, C_PRIME)?;
        }
        let mut any = false;
        for j in r.v.iter_ones() {
            let d = o.color_distance(n1 + j, C)?;
            if matches!(d, Some(x) if x == 0 || x == 2) {
                return Err(trace.gap(format!("d(r_{j}, c) = {d:?} outside {{1}} ∪ [3,∞]")));
            }
            any |= trace.observe(Some(j), dist(d), d == Some(1), r.mtu.get(j));
        }
        restore(&mut o, cfg, |o| recolored.iter().try_for_each(|&i| o.set_color(i, C)))?;
        trace.end_round(any, before, o.counters());
    }
    let budget = Budget {
        updates: n3 * n1 * undo_factor(cfg),
        queries: n3 * n2,
    };
    Ok((budget, o.counters()))
}

/// Every `G_M` edge becomes a path of `L = ⌈4/ε⌉` edges. Exact: at most
/// `n1 + n2` deletions per round (doubled when undone), 1 query.
pub(crate) fn st_sp_3eps(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let len = cfg.subdivision_length()?;
    let (s, t) = (n1 + n2, n1 + n2 + 1);
    let mut g = DynGraph::undirected(n1 + n2 + 2);
    for i in 0..n1 {
        g.insert_edge(t, i, 1)?;
        for j in m.row(i).iter_ones() {
            let mut prev = i;
            for _ in 1..len {
                let w = g.add_vertex();
                g.insert_edge(prev, w, 1)?;
                prev = w;
            }
            g.insert_edge(prev, n1 + j, 1)?;
        }
    }
    for j in 0..n2 {
        g.insert_edge(n1 + j, s, 1)?;
    }
    trace.derive("subdivision", len);
    trace.derive("vertices", g.vertex_count());
    let (short, long) = (2 + len, 2 + 3 * len);
    let mut o = DistanceOracle::from_graph(g);
    for r in rounds(m, pairs)? {
        let before = o.counters();
        begin(&mut o, cfg);
        let cuts = st_cuts(&r, n1, s, t);
        for &(a, b) in &cuts {
            o.delete_edge(a, b)?;
        }
        let d = o.dist(s, t)?;
        if matches!(d, Some(x) if x < short || (x > short && x < long)) {
            return Err(trace.gap(format!("d(s,t) = {d:?} outside {{{short}}} ∪ [{long},∞]")));
        }
        let bit = trace.observe(None, dist(d), d == Some(short), r.product);
        restore(&mut o, cfg, |o| cuts.iter().try_for_each(|&(a, b)| o.insert_edge(a, b)))?;
        trace.end_round(bit, before, o.counters());
    }
    let budget = Budget {
        updates: n3 * (n1 + n2) * undo_factor(cfg),
        queries: n3,
    };
    Ok((budget, o.counters()))
}

/// Source `s` joined to every `r_j`, `d = n2`. Exact: one batch per round and
/// one query per `i` with `u_i = 1`. The next batch restores the graph, so
/// there is nothing to undo.
pub(crate) fn d_failure(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    _cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let s = n1 + n2;
    let mut g = bipartite_graph(m, 1);
    for j in 0..n2 {
        g.insert_edge(s, n1 + j, 1)?;
    }
    trace.derive("vertices", g.vertex_count());
    trace.derive("d", n2);
    let mut o = DFailureOracle::new(g, n2);
    for r in rounds(m, pairs)? {
        let before = o.counters();
        let failed: Vec<usize> = zeros(r.v).map(|j| n1 + j).collect();
        o.fail_batch(&failed)?;
        let mut any = false;
        for i in r.u.iter_ones() {
            let hit = o.connected(s, i)?;
            any |= trace.observe(Some(i), bit(hit), hit, r.mv.get(i));
        }
        trace.end_round(any, before, o.counters());
    }
    let budget = Budget {
        updates: n3,
        queries: n3 * n1,
    };
    Ok((budget, o.counters()))
}
