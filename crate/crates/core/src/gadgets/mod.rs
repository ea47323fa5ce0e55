//! Executable reductions from OuMv to dynamic problems.
//!
//! Every gadget takes a matrix `M` and a stream of pairs `(u, v)`, builds the
//! target instance, drives an instrumented oracle from [`crate::dynoracles`]
//! and decodes one bit per round. The returned [`GadgetRun`] carries the
//! operation counts next to a budget computed from the construction.
//!
//! Budgets are exact counts of what the construction issues, except where a
//! construction only promises `O(f)`; those use `2f + 16` and say so.

mod fully;
mod multiphase;
mod nongraph;
mod partial;
mod structured;

use std::fmt;
use std::str::FromStr;

pub use multiphase::{
    multiphase_omv, EngineMultiphase, Multiphase, MultiphaseOmvRun, MultiphaseSchedule, Scheduled,
    SubConnSchedule,
};
pub use nongraph::langerman_array;

use crate::bitcore::{mat_vec, vec_mat_vec, BoolMatrix, BoolVector};
use crate::dynoracles::Counters;
use crate::engines::EngineSpec;
use crate::{Error, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetKind {
    StSubConn,
    StSp3v5,
    Triangle,
    SsSubConn,
    SsSp2v4,
    ColorOracle,
    StSp3Eps,
    DFailure,
    Pagh,
    Langerman,
    Erickson,
    Diameter,
    Densest,
    IncrStSp,
    PartialStSp,
    PartialSsSp,
    PartialApSp,
    PartialTc,
    PartialMatching,
    Multiphase,
    MultiphaseSubConn,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 21] = [
        GadgetKind::StSubConn,
        GadgetKind::StSp3v5,
        GadgetKind::Triangle,
        GadgetKind::SsSubConn,
        GadgetKind::SsSp2v4,
        GadgetKind::ColorOracle,
        GadgetKind::StSp3Eps,
        GadgetKind::DFailure,
        GadgetKind::Pagh,
        GadgetKind::Langerman,
        GadgetKind::Erickson,
        GadgetKind::Diameter,
        GadgetKind::Densest,
        GadgetKind::IncrStSp,
        GadgetKind::PartialStSp,
        GadgetKind::PartialSsSp,
        GadgetKind::PartialApSp,
        GadgetKind::PartialTc,
        GadgetKind::PartialMatching,
        GadgetKind::Multiphase,
        GadgetKind::MultiphaseSubConn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::StSubConn => "st-subconn",
            GadgetKind::StSp3v5 => "st-sp-3v5",
            GadgetKind::Triangle => "triangle",
            GadgetKind::SsSubConn => "ss-subconn",
            GadgetKind::SsSp2v4 => "ss-sp-2v4",
            GadgetKind::ColorOracle => "color-oracle",
            GadgetKind::StSp3Eps => "st-sp-3eps",
            GadgetKind::DFailure => "d-failure",
            GadgetKind::Pagh => "pagh",
            GadgetKind::Langerman => "langerman",
            GadgetKind::Erickson => "erickson",
            GadgetKind::Diameter => "diameter",
            GadgetKind::Densest => "densest",
            GadgetKind::IncrStSp => "incr-st-sp",
            GadgetKind::PartialStSp => "partial-st-sp",
            GadgetKind::PartialSsSp => "partial-ss-sp",
            GadgetKind::PartialApSp => "partial-ap-sp",
            GadgetKind::PartialTc => "partial-tc",
            GadgetKind::PartialMatching => "partial-matching",
            GadgetKind::Multiphase => "multiphase",
            GadgetKind::MultiphaseSubConn => "multiphase-subconn",
        }
    }

    /// Gadgets whose natural shape is `n1 = m^δ`, `n2 = m^(1-δ)`.
    pub fn is_tradeoff(self) -> bool {
        matches!(
            self,
            GadgetKind::SsSubConn | GadgetKind::SsSp2v4 | GadgetKind::ColorOracle | GadgetKind::DFailure
        )
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GadgetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GadgetKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown gadget `{s}`")))
    }
}

/// How a fully dynamic gadget returns to its base instance between rounds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum UndoMode {
    /// Issue inverse operations through the oracle; they are counted.
    #[default]
    Undo,
    /// Restore a snapshot; free.
    Snapshot,
}

impl fmt::Display for UndoMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UndoMode::Undo => "undo",
            UndoMode::Snapshot => "snapshot",
        })
    }
}

impl FromStr for UndoMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "undo" => Ok(UndoMode::Undo),
            "snapshot" => Ok(UndoMode::Snapshot),
            _ => Err(Error::InvalidParameter(format!("undo mode must be undo|snapshot, got `{s}`"))),
        }
    }
}

/// Which partially dynamic variant the `partial-*` gadgets build.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Direction {
    #[default]
    Decremental,
    Incremental,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GadgetConfig {
    pub epsilon: Rational,
    pub delta: Option<Rational>,
    pub undo_mode: UndoMode,
    pub direction: Direction,
    /// Engine behind the `multiphase` gadget.
    pub engine: EngineSpec,
    /// Global index of a query answer to flip before decoding.
    pub fault: Option<usize>,
}

impl Default for GadgetConfig {
    fn default() -> Self {
        GadgetConfig {
            epsilon: Rational::from_integer(1),
            delta: None,
            undo_mode: UndoMode::Undo,
            direction: Direction::Decremental,
            engine: EngineSpec::Naive,
            fault: None,
        }
    }
}

impl GadgetConfig {
    /// Path length `⌈4/ε⌉` used by the approximation gadget.
    pub fn subdivision_length(&self) -> Result<usize> {
        let eps = self.epsilon;
        if eps <= Rational::from_integer(0) {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {eps}")));
        }
        let l = (Rational::from_integer(4) / eps).ceil().to_integer();
        usize::try_from(l.max(1)).map_err(|_| Error::InvalidParameter(format!("epsilon {eps} too small")))
    }
}

/// Reshapes `n1 × n2` into the trade-off family with the same `m = n1·n2`:
/// `n1' = ⌊m^δ⌋`, `n2' = ⌊m / n1'⌋`.
pub fn tradeoff_shape(n1: usize, n2: usize, delta: Rational) -> Result<(usize, usize)> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if delta <= zero || delta >= one {
        return Err(Error::InvalidParameter(format!("delta must lie in (0,1), got {delta}")));
    }
    let m = (n1 * n2).max(1);
    let a = (crate::ratio::floor_pow(m as u64, delta)? as usize).max(1);
    Ok((a, (m / a).max(1)))
}

/// One observed query answer next to the bit predicted from `M, u, v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditRecord {
    pub round: usize,
    pub query: usize,
    pub target: Option<usize>,
    /// Raw answer: distance, size, density, or 0/1. `None` means unreachable.
    pub measured: Option<Rational>,
    pub observed: bool,
    pub expected: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GadgetRun {
    pub kind: GadgetKind,
    pub rounds: usize,
    pub recovered: Vec<bool>,
    pub updates_used: usize,
    pub queries_used: usize,
    pub budget_updates: usize,
    pub budget_queries: usize,
    pub undo_mode: UndoMode,
    pub per_round: Vec<Counters>,
    pub audit: Vec<AuditRecord>,
    pub derived: Vec<(&'static str, usize)>,
}

impl GadgetRun {
    pub fn within_budget(&self) -> bool {
        self.updates_used <= self.budget_updates && self.queries_used <= self.budget_queries
    }

    pub fn audit_mismatches(&self) -> impl Iterator<Item = &AuditRecord> {
        self.audit.iter().filter(|r| r.observed != r.expected)
    }

    pub fn derived(&self, key: &str) -> Option<usize> {
        self.derived.iter().find(|(k, _)| *k == key).map(|&(_, v)| v)
    }

    /// Line-oriented `key=value` record.
    pub fn to_record(&self) -> String {
        let bits: String = self.recovered.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let mut out = format!(
            "kind={}\nrounds={}\nundo_mode={}\nrecovered={}\nupdates_used={}\nqueries_used={}\nbudget_updates={}\nbudget_queries={}\n",
            self.kind,
            self.rounds,
            self.undo_mode,
            bits,
            self.updates_used,
            self.queries_used,
            self.budget_updates,
            self.budget_queries
        );
        for (k, v) in &self.derived {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }
}

/// Bookkeeping shared by every gadget while it runs.
pub(crate) struct Trace {
    kind: GadgetKind,
    fault: Option<usize>,
    next_query: usize,
    round: usize,
    audit: Vec<AuditRecord>,
    recovered: Vec<bool>,
    per_round: Vec<Counters>,
    derived: Vec<(&'static str, usize)>,
}

impl Trace {
    fn new(kind: GadgetKind, cfg: &GadgetConfig) -> Self {
        Trace {
            kind,
            fault: cfg.fault,
            next_query: 0,
            round: 0,
            audit: Vec::new(),
            recovered: Vec::new(),
            per_round: Vec::new(),
            derived: Vec::new(),
        }
    }

    pub(crate) fn derive(&mut self, key: &'static str, value: usize) {
        self.derived.push((key, value));
    }

    /// Records one answer and returns it, flipped if it is the faulted one.
    pub(crate) fn observe(
        &mut self,
        target: Option<usize>,
        measured: Option<Rational>,
        observed: bool,
        expected: bool,
    ) -> bool {
        let query = self.next_query;
        self.next_query += 1;
        let observed = observed ^ (self.fault == Some(query));
        self.audit.push(AuditRecord {
            round: self.round,
            query,
            target,
            measured,
            observed,
            expected,
        });
        observed
    }

    pub(crate) fn end_round(&mut self, bit: bool, before: Counters, after: Counters) {
        self.recovered.push(bit);
        self.per_round.push(Counters {
            updates: after.updates - before.updates,
            queries: after.queries - before.queries,
        });
        self.round += 1;
    }

    pub(crate) fn gap(&self, detail: impl Into<String>) -> Error {
        Error::Gap {
            gadget: self.kind.name(),
            round: self.round,
            detail: detail.into(),
        }
    }
}

pub(crate) struct Budget {
    pub updates: usize,
    pub queries: usize,
}

/// `O(f)` budget with our constants.
pub(crate) fn loose(f: usize) -> usize {
    2 * f + 16
}

/// Per-round facts every gadget needs for its audit column.
pub(crate) struct Round<'a> {
    pub u: &'a BoolVector,
    pub v: &'a BoolVector,
    pub product: bool,
    /// `Mv`.
    pub mv: BoolVector,
    /// `Mᵀu`.
    pub mtu: BoolVector,
}

pub(crate) fn rounds<'a>(m: &BoolMatrix, pairs: &'a [(BoolVector, BoolVector)]) -> Result<Vec<Round<'a>>> {
    let mt = m.transpose();
    pairs
        .iter()
        .map(|(u, v)| {
            Ok(Round {
                u,
                v,
                product: vec_mat_vec(u, m, v)?,
                mv: mat_vec(m, v)?,
                mtu: mat_vec(&mt, u)?,
            })
        })
        .collect()
}

fn check_shape(m: &BoolMatrix, pairs: &[(BoolVector, BoolVector)]) -> Result<()> {
    if m.n1() == 0 || m.n2() == 0 {
        return Err(Error::InvalidParameter(format!(
            "gadgets need a non-empty matrix, got {}x{}",
            m.n1(),
            m.n2()
        )));
    }
    for (u, v) in pairs {
        if u.len() != m.n1() {
            return Err(Error::dim("u length", m.n1(), u.len()));
        }
        if v.len() != m.n2() {
            return Err(Error::dim("v length", m.n2(), v.len()));
        }
    }
    Ok(())
}

/// Runs one gadget over the whole pair stream.
pub fn run_gadget(
    kind: GadgetKind,
    m: &BoolMatrix,
    pairs: &[(BoolVector, BoolVector)],
    cfg: &GadgetConfig,
) -> Result<GadgetRun> {
    check_shape(m, pairs)?;
    let mut trace = Trace::new(kind, cfg);
    let (budget, used) = match kind {
        GadgetKind::StSubConn => fully::st_subconn(m, pairs, cfg, &mut trace)?,
        GadgetKind::StSp3v5 => fully::st_sp_3v5(m, pairs, cfg, &mut trace)?,
        GadgetKind::Triangle => fully::triangle(m, pairs, cfg, &mut trace)?,
        GadgetKind::SsSubConn => fully::ss_subconn(m, pairs, cfg, &mut trace)?,
        GadgetKind::SsSp2v4 => fully::ss_sp_2v4(m, pairs, cfg, &mut trace)?,
        GadgetKind::ColorOracle => fully::color_oracle(m, pairs, cfg, &mut trace)?,
        GadgetKind::StSp3Eps => fully::st_sp_3eps(m, pairs, cfg, &mut trace)?,
        GadgetKind::DFailure => fully::d_failure(m, pairs, cfg, &mut trace)?,
        GadgetKind::Pagh => nongraph::pagh(m, pairs, cfg, &mut trace)?,
        GadgetKind::Langerman => nongraph::langerman(m, pairs, cfg, &mut trace)?,
        GadgetKind::Erickson => nongraph::erickson(m, pairs, cfg, &mut trace)?,
        GadgetKind::Diameter => structured::diameter(m, pairs, cfg, &mut trace)?,
        GadgetKind::Densest => structured::densest(m, pairs, cfg, &mut trace)?,
        GadgetKind::IncrStSp => partial::incremental_st_sp(m, pairs, &mut trace)?,
        GadgetKind::PartialStSp => partial::st_sp(m, pairs, cfg, &mut trace)?,
        GadgetKind::PartialSsSp => partial::ss_sp(m, pairs, cfg, &mut trace)?,
        GadgetKind::PartialApSp => partial::ap_sp(m, pairs, cfg, &mut trace)?,
        GadgetKind::PartialTc => partial::tc(m, pairs, cfg, &mut trace)?,
        GadgetKind::PartialMatching => partial::matching(m, pairs, cfg, &mut trace)?,
        GadgetKind::Multiphase => multiphase::engine_gadget(m, pairs, cfg, &mut trace)?,
        GadgetKind::MultiphaseSubConn => multiphase::subconn_gadget(m, pairs, &mut trace)?,
    };
    Ok(GadgetRun {
        kind,
        rounds: pairs.len(),
        recovered: trace.recovered,
        updates_used: used.updates,
        queries_used: used.queries,
        budget_updates: budget.updates,
        budget_queries: budget.queries,
        undo_mode: cfg.undo_mode,
        per_round: trace.per_round,
        audit: trace.audit,
        derived: trace.derived,
    })
}

pub(crate) type Outcome = (Budget, Counters);
