//! Gadgets whose target is not a graph problem.

use super::fully::{bit, int};
use super::{loose, rounds, Budget, GadgetConfig, Outcome, Trace, UndoMode};
use crate::bitcore::{BoolMatrix, BoolVector};
use crate::dynoracles::{EricksonOracle, PaghOracle, ZeroPrefixOracle};
use crate::{Rational, Result};

/// Complement rows are preloaded; each round intersects the rows selected by
/// `u` into a new set and probes it at every `j` with `v_j = 1`. The family
/// only grows. Exact: at most `n1` inserts and `n2` queries per round.
pub(crate) fn pagh(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    _cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let mut o = PaghOracle::new(n2, m.complement().rows().to_vec())?;
    for r in rounds(m, pairs)? {
        let before = o.counters();
        let mut rows = r.u.iter_ones();
        let mut any = false;
        // An empty intersection is the whole universe, so an empty `u` is 0.
        if let Some(first) = rows.next() {
            let mut cur = first;
            for i in rows {
                cur = o.insert_intersection(cur, i)?;
            }
            for j in r.v.iter_ones() {
                let missing = !o.member(cur, j)?;
                any |= trace.observe(Some(j), bit(missing), missing, r.mtu.get(j));
            }
        }
        trace.end_round(any, before, o.counters());
    }
    trace.derive("sets", o.state().sets.len());
    let budget = Budget {
        updates: n3 * n1,
        queries: n3 * n2,
    };
    Ok((budget, o.counters()))
}

/// Array index of row `i`, cell `c` (both 1-based as in the figure).
fn cell(n2: usize, i: usize, c: usize) -> usize {
    1 + (i - 1) * (2 * n2 + 2) + (c - 1)
}

/// The initial array: `R_0` followed by one block of `2n2 + 2` cells per row.
/// A 1 bit is encoded as `(1, 1)` and a 0 bit as `(2, 0)`.
pub fn langerman_array(m: &BoolMatrix, r0: i64) -> Vec<i64> {
    let (n1, n2) = (m.n1(), m.n2());
    let mut a = vec![0i64; 1 + n1 * (2 * n2 + 2)];
    a[0] = r0;
    for i in 1..=n1 {
        a[cell(n2, i, 1)] = 0;
        for j in 1..=n2 {
            let pair = if m.get(i - 1, j - 1) { (1, 1) } else { (2, 0) };
            a[cell(n2, i, 2 * j)] = pair.0;
            a[cell(n2, i, 2 * j + 1)] = pair.1;
        }
        a[cell(n2, i, 2 * n2 + 2)] = -(2 * n2 as i64);
    }
    a
}

/// For `u_i = 1` the row ends swap to `(-2n2, 0)`; for each `v_j = 1` the
/// guard becomes `2(n2 - j) + 1` and one query follows. Updates are `O(n1 + n2)`
/// per round, so the loose budget applies, doubled when undone. Queries are
/// exactly at most `n2` per round.
pub(crate) fn langerman(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let width = -(2 * n2 as i64);
    let array = langerman_array(m, 1);
    trace.derive("array_len", array.len());
    let mut o = ZeroPrefixOracle::new(array);
    for r in rounds(m, pairs)? {
        let before = o.counters();
        if cfg.undo_mode == UndoMode::Snapshot {
            o.snapshot();
        }
        let swapped: Vec<usize> = r.u.iter_ones().map(|i| i + 1).collect();
        for &i in &swapped {
            o.set(cell(n2, i, 1), width)?;
            o.set(cell(n2, i, 2 * n2 + 2), 0)?;
        }
        let mut any = false;
        for j in r.v.iter_ones() {
            o.set(0, 2 * (n2 - (j + 1)) as i64 + 1)?;
            let k = o.has_zero_prefix()?;
            any |= trace.observe(Some(j), k.and_then(int), k.is_some(), r.mtu.get(j));
        }
        match cfg.undo_mode {
            UndoMode::Snapshot => o.rollback()?,
            UndoMode::Undo => {
                for &i in &swapped {
                    o.set(cell(n2, i, 1), 0)?;
                    o.set(cell(n2, i, 2 * n2 + 2), width)?;
                }
            }
        }
        trace.end_round(any, before, o.counters());
    }
    let factor = if cfg.undo_mode == UndoMode::Undo { 2 } else { 1 };
    let budget = Budget {
        updates: n3 * loose(n1 + n2) * factor,
        queries: n3 * n2,
    };
    Ok((budget, o.counters()))
}

/// Rows with `u_i = 1` and columns with `v_j = 1` go up by one, then the
/// complements do, so after round `t` every entry has grown by `2t`.
/// Exact: `n1 + n2` increments and 1 query per round.
pub(crate) fn erickson(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    _cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    let (n1, n2, n3) = (m.n1(), m.n2(), pairs.len());
    let base = (0..n1)
        .map(|i| (0..n2).map(|j| m.get(i, j) as i64).collect())
        .collect();
    let mut o = EricksonOracle::new(base)?;
    for (t0, r) in rounds(m, pairs)?.into_iter().enumerate() {
        let before = o.counters();
        let t = t0 as i64 + 1;
        for i in r.u.iter_ones() {
            o.inc_row(i)?;
        }
        for j in r.v.iter_ones() {
            o.inc_col(j)?;
        }
        let max = o.max()?.unwrap_or(0);
        if max > 2 * t + 1 {
            return Err(trace.gap(format!("max {max} above 2t+1 = {}", 2 * t + 1)));
        }
        let measured = Some(Rational::from_integer(max));
        let b = trace.observe(None, measured, max == 2 * t + 1, r.product);
        for i in (0..n1).filter(|&i| !r.u.get(i)) {
            o.inc_row(i)?;
        }
        for j in (0..n2).filter(|&j| !r.v.get(j)) {
            o.inc_col(j)?;
        }
        trace.end_round(b, before, o.counters());
    }
    let budget = Budget {
        updates: n3 * (n1 + n2),
        queries: n3,
    };
    Ok((budget, o.counters()))
}
