//! Partially dynamic gadgets. Each round has its own path or round vertex;
//! after the round its spokes are gone (decremental) or it is pushed further
//! from the source (incremental), so nothing is ever undone.
//!
//! Layout: `l_i = i`, `r_j = n1 + j`, round vertices after `n1 + n2`.
//! Rounds are counted from 1 in the comments below.

use super::fully::{bipartite_graph, bit, dist};
use super::{rounds, Budget, Direction, GadgetConfig, Outcome, Round, Trace};
use crate::bitcore::{BoolMatrix, BoolVector};
use crate::dynoracles::{DistanceOracle, DynGraph, EvenShiloachOracle, MatchingOracle};
use crate::{Error, Rational, Result};

fn zeros(x: &BoolVector) -> impl Iterator<Item = usize> + '_ {
    x.iter().enumerate().filter(|&(_, b)| !b).map(|(k, _)| k)
}

/// Inserts `G_M` through the oracle so that construction is counted.
fn insert_bipartite(o: &mut DistanceOracle, m: &BoolMatrix, directed_r_to_l: bool) -> Result<()> {
    let n1 = m.n1();
    for i in 0..n1 {
        for j in m.row(i).iter_ones() {
            if directed_r_to_l {
                o.insert_edge(n1 + j, i)?;
            } else {
                o.insert_edge(i, n1 + j)?;
            }
        }
    }
    Ok(())
}

/// Insertions only, from the empty graph. Paths `p_n3 … p_1` and
/// `q_n3 … q_1` end at `s = p_n3` and `s' = q_n3`; round `τ` attaches `p_τ` to
/// `l_i` for `u_i = 1` and `q_τ` to `r_j` for `v_j = 1`.
///
/// With `t = τ - 1` counted from 0, a product-1 round gives
/// `d(s,s') = 2(n3 - t) + 1` and otherwise at least one more.
/// Exact: `n1n2 + n1n3 + n2n3 + 2n3` insertions and `n3` queries.
pub(crate) fn incremental_st_sp(m: &BoolMatrix, pairs: &[(BoolVector, BoolVector)], trace: &mut Trace) -> Result<Outcome> {
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let p = |tau: usize| n1 + n2 + tau - 1;
    let q = |tau: usize| n1 + n2 + n3 + tau - 1;
    let mut o = DistanceOracle::from_graph(DynGraph::undirected(n1 + n2 + 2 * n3));
    insert_bipartite(&mut o, m, false)?;
    for tau in 1..n3 {
        o.insert_edge(p(tau), p(tau + 1))?;
        o.insert_edge(q(tau), q(tau + 1))?;
    }
    trace.derive("vertices", n1 + n2 + 2 * n3);
    for (t, r) in rounds(m, pairs)?.into_iter().enumerate() {
        let before = o.counters();
        let tau = t + 1;
        for i in r.u.iter_ones() {
            o.insert_edge(p(tau), i)?;
        }
        for j in r.v.iter_ones() {
            o.insert_edge(q(tau), n1 + j)?;
        }
        let short = 2 * (n3 - t) + 1;
        let d = o.dist(p(n3), q(n3))?;
        if matches!(d, Some(x) if x < short) {
            return Err(trace.gap(format!("d(s,s') = {d:?} below {short}")));
        }
        let b = trace.observe(None, dist(d), d == Some(short), r.product);
        trace.end_round(b, before, o.counters());
    }
    let budget = Budget {
        updates: n1 * n2 + n1 * n3 + n2 * n3 + 2 * n3,
        queries: n3,
    };
    Ok((budget, o.counters()))
}

/// Decremental: paths `p_1 … p_n3` and `q_1 … q_n3` from `s = p_1`,
/// `s' = q_1`, every `p_t` joined to all of `L` and every `q_t` to all of `R`.
/// Round `t` cuts the spokes of `p_t, q_t` that `u, v` reject, asks
/// `d(s,s')` (`2t + 1` or at least `2t + 2`) and then cuts the rest.
/// Exact: `n3(n1 + n2)` deletions and `n3` queries.
pub(crate) fn st_sp(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    if cfg.direction == Direction::Incremental {
        return incremental_st_sp(m, pairs, trace);
    }
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let p = |t: usize| n1 + n2 + t - 1;
    let q = |t: usize| n1 + n2 + n3 + t - 1;
    let mut g = bipartite_graph(m, 2 * n3);
    for t in 1..=n3 {
        if t < n3 {
            g.insert_edge(p(t), p(t + 1), 1)?;
            g.insert_edge(q(t), q(t + 1), 1)?;
        }
        for i in 0..n1 {
            g.insert_edge(p(t), i, 1)?;
        }
        for j in 0..n2 {
            g.insert_edge(q(t), n1 + j, 1)?;
        }
    }
    trace.derive("vertices", g.vertex_count());
    if n3 == 0 {
        return Ok((Budget { updates: 0, queries: 0 }, Default::default()));
    }
    let mut o = EvenShiloachOracle::new(g, p(1))?;
    for (t0, r) in rounds(m, pairs)?.into_iter().enumerate() {
        let before = o.counters();
        let t = t0 + 1;
        for i in zeros(r.u) {
            o.delete_edge(p(t), i)?;
        }
        for j in zeros(r.v) {
            o.delete_edge(q(t), n1 + j)?;
        }
        let d = o.dist(q(1))?;
        if matches!(d, Some(x) if x < 2 * t + 1) {
            return Err(trace.gap(format!("d(s,s') = {d:?} below 2t+1")));
        }
        let b = trace.observe(None, dist(d), d == Some(2 * t + 1), r.product);
        for i in r.u.iter_ones() {
            o.delete_edge(p(t), i)?;
        }
        for j in r.v.iter_ones() {
            o.delete_edge(q(t), n1 + j)?;
        }
        trace.end_round(b, before, o.counters());
    }
    let budget = Budget {
        updates: n3 * (n1 + n2),
        queries: n3,
    };
    Ok((budget, o.counters()))
}

/// Decremental: path `q_1 … q_n3` from `s = q_1`, every `q_t` joined to all
/// of `R`. Round `t` cuts `q_t–r_j` for `v_j = 0` and asks `d(s,l_i)` for each
/// `u_i = 1` (`t + 1` or at least `t + 2`), then cuts the rest of `q_t`.
/// Incremental mirror: path `q_n3 … q_1` ending at `s = q_n3`, round `t`
/// inserts `q_t–r_j` for `v_j = 1`; the short distance is `n3 - t + 2`.
/// Exact: `n3·n2` deletions (plus construction when incremental) and at most
/// `n1·n3` queries.
pub(crate) fn ss_sp(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let q = |t: usize| n1 + n2 + t - 1;
    trace.derive("vertices", n1 + n2 + n3);
    if n3 == 0 {
        return Ok((Budget { updates: 0, queries: 0 }, Default::default()));
    }
    let all = rounds(m, pairs)?;
    if cfg.direction == Direction::Incremental {
        let mut o = DistanceOracle::from_graph(DynGraph::undirected(n1 + n2 + n3));
        insert_bipartite(&mut o, m, false)?;
        for t in 1..n3 {
            o.insert_edge(q(t), q(t + 1))?;
        }
        for (t0, r) in all.into_iter().enumerate() {
            let before = o.counters();
            let t = t0 + 1;
            for j in r.v.iter_ones() {
                o.insert_edge(q(t), n1 + j)?;
            }
            let short = n3 - t + 2;
            let any = probe_l(trace, &r, short, |i| o.dist(q(n3), i))?;
            trace.end_round(any, before, o.counters());
        }
        let budget = Budget {
            updates: n1 * n2 + (n3 - 1) + n2 * n3,
            queries: n1 * n3,
        };
        return Ok((budget, o.counters()));
    }
    let mut g = bipartite_graph(m, n3);
    for t in 1..=n3 {
        if t < n3 {
            g.insert_edge(q(t), q(t + 1), 1)?;
        }
        for j in 0..n2 {
            g.insert_edge(q(t), n1 + j, 1)?;
        }
    }
    let mut o = EvenShiloachOracle::new(g, q(1))?;
    for (t0, r) in all.into_iter().enumerate() {
        let before = o.counters();
        let t = t0 + 1;
        for j in zeros(r.v) {
            o.delete_edge(q(t), n1 + j)?;
        }
        let any = probe_l(trace, &r, t + 1, |i| o.dist(i))?;
        for j in r.v.iter_ones() {
            o.delete_edge(q(t), n1 + j)?;
        }
        trace.end_round(any, before, o.counters());
    }
    let budget = Budget {
        updates: n3 * n2,
        queries: n1 * n3,
    };
    Ok((budget, o.counters()))
}

/// Asks one distance per `u_i = 1`; `short` means a witness, anything
/// smaller is a gap violation.
fn probe_l(
    trace: &mut Trace,
    r: &Round<'_>,
    short: usize,
    mut dist_to: impl FnMut(usize) -> Result<Option<usize>>,
) -> Result<bool> {
    let mut any = false;
    for i in r.u.iter_ones() {
        let d = dist_to(i)?;
        if matches!(d, Some(x) if x < short) {
            return Err(trace.gap(format!("distance to l_{i} = {d:?} below {short}")));
        }
        any |= trace.observe(Some(i), dist(d), d == Some(short), r.mv.get(i));
    }
    Ok(any)
}

/// Round vertices `q_t` form an independent set, each joined to all of `R`
/// (edges `q_t → r_j → l_i` when `directed`). Round `t` asks about
/// `q_t` and each `l_i` with `u_i = 1`: distance 2 versus at least 4, or
/// reachability. Exact: `n3·n2` deletions (plus construction when
/// incremental) and at most `n1·n3` queries.
fn fan(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
    directed: bool,
) -> Result<Outcome> {
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let q = |t: usize| n1 + n2 + t - 1;
    let n = n1 + n2 + n3;
    trace.derive("vertices", n);
    let incremental = cfg.direction == Direction::Incremental;
    let mut o = if incremental {
        let g = if directed { DynGraph::directed(n) } else { DynGraph::undirected(n) };
        let mut o = DistanceOracle::from_graph(g);
        insert_bipartite(&mut o, m, directed)?;
        o
    } else {
        let mut g = if directed { DynGraph::directed(n) } else { DynGraph::undirected(n) };
        for i in 0..n1 {
            for j in m.row(i).iter_ones() {
                g.insert_edge(n1 + j, i, 1)?;
            }
        }
        for t in 1..=n3 {
            for j in 0..n2 {
                g.insert_edge(q(t), n1 + j, 1)?;
            }
        }
        DistanceOracle::from_graph(g)
    };
    for (t0, r) in rounds(m, pairs)?.into_iter().enumerate() {
        let before = o.counters();
        let t = t0 + 1;
        if incremental {
            for j in r.v.iter_ones() {
                o.insert_edge(q(t), n1 + j)?;
            }
        } else {
            for j in zeros(r.v) {
                o.delete_edge(q(t), n1 + j)?;
            }
        }
        let any = if directed {
            let mut any = false;
            for i in r.u.iter_ones() {
                let hit = o.reach(q(t), i)?;
                any |= trace.observe(Some(i), bit(hit), hit, r.mv.get(i));
            }
            any
        } else {
            let mut any = false;
            for i in r.u.iter_ones() {
                let d = o.dist(q(t), i)?;
                if matches!(d, Some(x) if x < 2 || x == 3) {
                    return Err(trace.gap(format!("d(q_{t},l_{i}) = {d:?} outside {{2}} ∪ [4,∞]")));
                }
                any |= trace.observe(Some(i), dist(d), d == Some(2), r.mv.get(i));
            }
            any
        };
        if !incremental {
            for j in r.v.iter_ones() {
                o.delete_edge(q(t), n1 + j)?;
            }
        }
        trace.end_round(any, before, o.counters());
    }
    let construction = if incremental { m.count_ones() } else { 0 };
    let budget = Budget {
        updates: construction + n3 * n2,
        queries: n1 * n3,
    };
    Ok((budget, o.counters()))
}

pub(crate) fn ap_sp(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    fan(m, pairs, cfg, trace, false)
}

pub(crate) fn tc(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    fan(m, pairs, cfg, trace, true)
}

/// Vertex ids of the matching scaffold.
struct MatchingLayout {
    n1: usize,
    n2: usize,
}

impl MatchingLayout {
    fn l(&self, i: usize) -> usize {
        i
    }
    fn r(&self, j: usize) -> usize {
        self.n1 + j
    }
    fn l2(&self, i: usize) -> usize {
        self.n1 + self.n2 + i
    }
    fn r2(&self, j: usize) -> usize {
        2 * self.n1 + self.n2 + j
    }
    fn round_base(&self, t: usize) -> usize {
        2 * (self.n1 + self.n2) * (t + 1)
    }
    /// `x_{t,i}`, `x'_{t,i}`, `y_{t,j}`, `y'_{t,j}` for round `t` from 0.
    fn x(&self, t: usize, i: usize) -> usize {
        self.round_base(t) + i
    }
    fn x2(&self, t: usize, i: usize) -> usize {
        self.round_base(t) + self.n1 + i
    }
    fn y(&self, t: usize, j: usize) -> usize {
        self.round_base(t) + 2 * self.n1 + j
    }
    fn y2(&self, t: usize, j: usize) -> usize {
        self.round_base(t) + 2 * self.n1 + self.n2 + j
    }
}

/// Decremental bipartite matching. The scaffold `l–l'`, `r–r'`, `x–x'`,
/// `y–y'` is a perfect matching; spokes join `x_{t,i}` to `l'_i` and
/// `y_{t,j}` to `r'_j`. Round `t` deletes `x–x'` for `u_i = 1` and `y–y'` for
/// `v_j = 1` (`d_t` deletions); the size drops by exactly `d_t` unless an
/// augmenting path `x–l'–l–r–r'–y` exists. Then the round's spokes go.
/// Exact: `d_t + n1 + n2 ≤ 2(n1 + n2)` deletions and 1 query per round.
pub(crate) fn matching(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    if cfg.direction == Direction::Incremental {
        return Err(Error::InvalidParameter("partial-matching has no incremental variant".into()));
    }
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let at = MatchingLayout { n1, n2 };
    let n = 2 * (n1 + n2) * (n3 + 1);
    let mut g = DynGraph::undirected(n);
    let mut left = vec![false; n];
    for i in 0..n1 {
        for j in m.row(i).iter_ones() {
            g.insert_edge(at.l(i), at.r(j), 1)?;
        }
        g.insert_edge(at.l(i), at.l2(i), 1)?;
        left[at.l(i)] = true;
    }
    for j in 0..n2 {
        g.insert_edge(at.r(j), at.r2(j), 1)?;
        left[at.r2(j)] = true;
    }
    for t in 0..n3 {
        for i in 0..n1 {
            g.insert_edge(at.x(t, i), at.x2(t, i), 1)?;
            g.insert_edge(at.x(t, i), at.l2(i), 1)?;
            left[at.x(t, i)] = true;
        }
        for j in 0..n2 {
            g.insert_edge(at.y(t, j), at.y2(t, j), 1)?;
            g.insert_edge(at.y(t, j), at.r2(j), 1)?;
            left[at.y2(t, j)] = true;
        }
    }
    let perfect = n1 + n2 + n3 * (n1 + n2);
    trace.derive("vertices", n);
    trace.derive("initial_matching", perfect);
    let mut o = MatchingOracle::new(g, left)?;
    let mut baseline = perfect;
    for (t, r) in rounds(m, pairs)?.into_iter().enumerate() {
        let before = o.counters();
        let mut d_t = 0;
        for i in r.u.iter_ones() {
            o.delete_edge(at.x(t, i), at.x2(t, i))?;
            d_t += 1;
        }
        for j in r.v.iter_ones() {
            o.delete_edge(at.y(t, j), at.y2(t, j))?;
            d_t += 1;
        }
        let size = o.matching_size()?;
        let drop = baseline.checked_sub(size).ok_or_else(|| trace.gap("matching grew"))?;
        if drop > d_t {
            return Err(trace.gap(format!("drop {drop} exceeds d_t = {d_t}")));
        }
        let measured = Some(Rational::from_integer(size as i64));
        let b = trace.observe(None, measured, drop < d_t, r.product);
        for i in 0..n1 {
            o.delete_edge(at.x(t, i), at.l2(i))?;
        }
        for j in 0..n2 {
            o.delete_edge(at.y(t, j), at.r2(j))?;
        }
        baseline -= d_t;
        trace.end_round(b, before, o.counters());
    }
    let budget = Budget {
        updates: n3 * 2 * (n1 + n2),
        queries: n3,
    };
    Ok((budget, o.counters()))
}
