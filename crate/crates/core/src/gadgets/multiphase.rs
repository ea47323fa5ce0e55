//! The multiphase protocol: preprocess `M`, absorb `v`, then answer single
//! bits `(Mv)_i` on demand.

use super::fully::bit;
use super::{rounds, Budget, GadgetConfig, Outcome, Trace};
use crate::bitcore::{BoolMatrix, BoolVector};
use crate::dynoracles::{Counters, DynGraph, SubConnOracle};
use crate::engines::{EngineSpec, OmvEngine};
use crate::{Error, Result};

pub trait Multiphase {
    fn phase1(&mut self, m: &BoolMatrix) -> Result<()>;
    fn phase2(&mut self, v: &BoolVector) -> Result<()>;
    fn phase3(&mut self, i: usize) -> Result<bool>;
}

/// Multiphase on top of an OMv engine: phase 2 computes `Mv` in full.
pub struct EngineMultiphase {
    engine: Box<dyn OmvEngine>,
    product: Option<BoolVector>,
}

impl EngineMultiphase {
    pub fn new(engine: Box<dyn OmvEngine>) -> Self {
        EngineMultiphase { engine, product: None }
    }

    pub fn from_spec(spec: &EngineSpec) -> Result<Self> {
        Ok(Self::new(spec.build()?))
    }
}

impl Multiphase for EngineMultiphase {
    fn phase1(&mut self, m: &BoolMatrix) -> Result<()> {
        self.product = None;
        self.engine.preprocess(m)
    }

    fn phase2(&mut self, v: &BoolVector) -> Result<()> {
        self.product = Some(self.engine.next(v)?);
        Ok(())
    }

    fn phase3(&mut self, i: usize) -> Result<bool> {
        let p = self
            .product
            .as_ref()
            .ok_or_else(|| Error::Rejected("phase 3 before phase 2".into()))?;
        if i >= p.len() {
            return Err(Error::OutOfRange {
                context: "phase 3 index",
                index: i,
                size: p.len(),
            });
        }
        Ok(p.get(i))
    }
}

/// A dynamic-oracle encoding of the multiphase problem: phase 2 may spend at
/// most `k2` updates and phase 3 at most `k3` queries.
pub trait MultiphaseSchedule {
    fn k2(&self) -> usize;
    fn k3(&self) -> usize;
    fn build(&mut self, m: &BoolMatrix) -> Result<()>;
    fn encode(&mut self, v: &BoolVector) -> Result<()>;
    fn probe(&mut self, i: usize) -> Result<bool>;
    fn counters(&self) -> Counters;
}

/// Turns a schedule into a [`Multiphase`] and enforces its `(k2, k3)` limits.
pub struct Scheduled<S> {
    inner: S,
}

impl<S: MultiphaseSchedule> Scheduled<S> {
    pub fn new(inner: S) -> Self {
        Scheduled { inner }
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }

    fn spent(&self, before: Counters) -> Counters {
        let now = self.inner.counters();
        Counters {
            updates: now.updates - before.updates,
            queries: now.queries - before.queries,
        }
    }
}

impl<S: MultiphaseSchedule> Multiphase for Scheduled<S> {
    fn phase1(&mut self, m: &BoolMatrix) -> Result<()> {
        self.inner.build(m)
    }

    fn phase2(&mut self, v: &BoolVector) -> Result<()> {
        let before = self.inner.counters();
        self.inner.encode(v)?;
        let spent = self.spent(before);
        if spent.updates > self.inner.k2() || spent.queries > 0 {
            return Err(Error::Rejected(format!(
                "phase 2 spent {} updates and {} queries, schedule allows {} updates",
                spent.updates,
                spent.queries,
                self.inner.k2()
            )));
        }
        Ok(())
    }

    fn phase3(&mut self, i: usize) -> Result<bool> {
        let before = self.inner.counters();
        let out = self.inner.probe(i)?;
        let spent = self.spent(before);
        if spent.queries > self.inner.k3() || spent.updates > 0 {
            return Err(Error::Rejected(format!(
                "phase 3 spent {} updates and {} queries, schedule allows {} queries",
                spent.updates,
                spent.queries,
                self.inner.k3()
            )));
        }
        Ok(out)
    }
}

/// Subgraph connectivity with `k2 = n2` and `k3 = 1`: a hub joined to all of
/// `R`, phase 2 switches `r_j` on iff `v_j = 1`, phase 3 asks whether `l_i`
/// reaches the hub.
#[derive(Default)]
pub struct SubConnSchedule {
    oracle: Option<SubConnOracle>,
    n1: usize,
    n2: usize,
}

impl SubConnSchedule {
    pub fn new() -> Self {
        Self::default()
    }

    fn oracle(&mut self) -> Result<&mut SubConnOracle> {
        self.oracle
            .as_mut()
            .ok_or_else(|| Error::Rejected("phase 1 has not run".into()))
    }
}

impl MultiphaseSchedule for SubConnSchedule {
    fn k2(&self) -> usize {
        self.n2
    }

    fn k3(&self) -> usize {
        1
    }

    fn build(&mut self, m: &BoolMatrix) -> Result<()> {
        let (n1, n2) = (m.n1(), m.n2());
        let hub = n1 + n2;
        let mut g = DynGraph::undirected(n1 + n2 + 1);
        for i in 0..n1 {
            for j in m.row(i).iter_ones() {
                g.insert_edge(i, n1 + j, 1)?;
            }
        }
        for j in 0..n2 {
            g.insert_edge(hub, n1 + j, 1)?;
        }
        self.oracle = Some(SubConnOracle::from_graph(g));
        self.n1 = n1;
        self.n2 = n2;
        Ok(())
    }

    fn encode(&mut self, v: &BoolVector) -> Result<()> {
        let (n1, n2) = (self.n1, self.n2);
        if v.len() != n2 {
            return Err(Error::dim("v length", n2, v.len()));
        }
        let o = self.oracle()?;
        for j in 0..n2 {
            if v.get(j) {
                o.turn_on(n1 + j)?;
            } else {
                o.turn_off(n1 + j)?;
            }
        }
        Ok(())
    }

    fn probe(&mut self, i: usize) -> Result<bool> {
        let (n1, hub) = (self.n1, self.n1 + self.n2);
        if i >= n1 {
            return Err(Error::OutOfRange {
                context: "phase 3 index",
                index: i,
                size: n1,
            });
        }
        self.oracle()?.connected(i, hub)
    }

    fn counters(&self) -> Counters {
        self.oracle.as_ref().map(|o| o.counters()).unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiphaseOmvRun {
    pub outputs: Vec<BoolVector>,
    pub phase2_runs: usize,
    pub phase3_probes: usize,
}

/// Full OMv from a multiphase solution: one phase 2 per vector and one
/// phase 3 per output bit.
pub fn multiphase_omv(mp: &mut dyn Multiphase, m: &BoolMatrix, vectors: &[BoolVector]) -> Result<MultiphaseOmvRun> {
    mp.phase1(m)?;
    let mut run = MultiphaseOmvRun {
        outputs: Vec::with_capacity(vectors.len()),
        phase2_runs: 0,
        phase3_probes: 0,
    };
    for v in vectors {
        mp.phase2(v)?;
        run.phase2_runs += 1;
        let mut out = BoolVector::zeros(m.n1());
        for i in 0..m.n1() {
            out.set(i, mp.phase3(i)?);
            run.phase3_probes += 1;
        }
        run.outputs.push(out);
    }
    Ok(run)
}

/// Shared round loop: every round runs phase 2 once and probes all `n1` rows;
/// the bit is 1 iff some probed row with `u_i = 1` answers 1.
fn drive(
    mp: &mut dyn Multiphase,
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    trace: &mut Trace,
) -> Result<Counters> {
    mp.phase1(m)?;
    let mut local = Counters::default();
    for r in rounds(m, pairs)? {
        let before = local;
        mp.phase2(r.v)?;
        local.updates += 1;
        let mut any = false;
        for i in 0..m.n1() {
            let hit = mp.phase3(i)?;
            local.queries += 1;
            let seen = trace.observe(Some(i), bit(hit), hit, r.mv.get(i));
            any |= seen && r.u.get(i);
        }
        trace.end_round(any, before, local);
    }
    Ok(local)
}

/// Engine-backed multiphase; phase-2 runs count as updates and phase-3 probes
/// as queries. Exact: `n3` and `n1·n3`.
pub(crate) fn engine_gadget(
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
    trace: &mut Trace,
) -> Result<Outcome> {
    let mut mp = EngineMultiphase::from_spec(&cfg.engine)?;
    let used = drive(&mut mp, m, pairs, trace)?;
    let budget = Budget {
        updates: pairs.len(),
        queries: m.n1() * pairs.len(),
    };
    Ok((budget, used))
}

/// Subgraph connectivity through [`Scheduled`]. Exact: `k2·n3` updates and
/// `k3·n1·n3` queries.
pub(crate) fn subconn_gadget(m: &BoolMatrix, pairs: &[(BoolVector, BoolVector)], trace: &mut Trace) -> Result<Outcome> {
    let mut sched = Scheduled::new(SubConnSchedule::new());
    sched.phase1(m)?;
    let (k2, k3) = (sched.inner().k2(), sched.inner().k3());
    trace.derive("k2", k2);
    trace.derive("k3", k3);
    let mut used = Counters::default();
    for r in rounds(m, pairs)? {
        let before = sched.inner().counters();
        sched.phase2(r.v)?;
        let mut any = false;
        for i in 0..m.n1() {
            let hit = sched.phase3(i)?;
            let seen = trace.observe(Some(i), bit(hit), hit, r.mv.get(i));
            any |= seen && r.u.get(i);
        }
        used = sched.inner().counters();
        trace.end_round(any, before, used);
    }
    let budget = Budget {
        updates: k2 * pairs.len(),
        queries: k3 * m.n1() * pairs.len(),
    };
    Ok((budget, used))
}
