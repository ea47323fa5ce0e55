//! OuMv oracles, witness listing, OMv reconstructed from OuMv, and the
//! graph / 2-CNF query problems that are equivalent to OuMv.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::bitcore::{symmetrize, tile_starts, vec_mat_vec, BoolMatrix, BoolVector};
use crate::engines::{EngineSpec, OmvEngine};
use crate::{Error, Result};

/// An online `uᵀMv` oracle.
pub trait OuMvOracle {
    fn preprocess(&mut self, m: &BoolMatrix) -> Result<()>;

    fn query(&mut self, u: &BoolVector, v: &BoolVector) -> Result<bool>;

    fn queries_used(&self) -> usize;

    /// Restores the state right after `preprocess`. Query counts are kept.
    fn rollback(&mut self);

    /// True once the oracle has served as many rounds as it was built for and
    /// must be rolled back before the next query.
    fn exhausted(&self) -> bool {
        false
    }
}

/// OuMv through an OMv engine: one `next(v)` per query, then `u ∧ Mv`.
pub struct EngineOuMv {
    engine: Box<dyn OmvEngine>,
    n1: usize,
    n2: usize,
    queries: usize,
    since_rollback: usize,
    capacity: Option<usize>,
    rollbacks: usize,
}

impl EngineOuMv {
    pub fn new(engine: Box<dyn OmvEngine>) -> Self {
        EngineOuMv {
            engine,
            n1: 0,
            n2: 0,
            queries: 0,
            since_rollback: 0,
            capacity: None,
            rollbacks: 0,
        }
    }

    pub fn from_spec(spec: &EngineSpec) -> Result<Self> {
        Ok(Self::new(spec.build()?))
    }

    /// Limits the number of rounds between rollbacks.
    pub fn with_capacity(mut self, rounds: usize) -> Result<Self> {
        if rounds == 0 {
            return Err(Error::InvalidParameter("oracle capacity must be positive".into()));
        }
        self.capacity = Some(rounds);
        Ok(self)
    }

    pub fn rollbacks(&self) -> usize {
        self.rollbacks
    }
}

impl OuMvOracle for EngineOuMv {
    fn preprocess(&mut self, m: &BoolMatrix) -> Result<()> {
        self.n1 = m.n1();
        self.n2 = m.n2();
        self.since_rollback = 0;
        self.engine.preprocess(m)
    }

    fn query(&mut self, u: &BoolVector, v: &BoolVector) -> Result<bool> {
        if u.len() != self.n1 {
            return Err(Error::dim("oumv u length", self.n1, u.len()));
        }
        if self.exhausted() {
            return Err(Error::Rejected("oracle round capacity reached without rollback".into()));
        }
        let mv = self.engine.next(v)?;
        self.queries += 1;
        self.since_rollback += 1;
        Ok(u.intersects(&mv))
    }

    fn queries_used(&self) -> usize {
        self.queries
    }

    fn rollback(&mut self) {
        self.engine.reset_to_preprocessed();
        self.since_rollback = 0;
        self.rollbacks += 1;
    }

    fn exhausted(&self) -> bool {
        self.capacity.is_some_and(|c| self.since_rollback >= c)
    }
}

/// Reference oracle answering from the stored matrix.
#[derive(Default)]
pub struct DirectOuMv {
    matrix: Option<BoolMatrix>,
    queries: usize,
}

impl DirectOuMv {
    pub fn new() -> Self {
        Self::default()
    }
}

impl OuMvOracle for DirectOuMv {
    fn preprocess(&mut self, m: &BoolMatrix) -> Result<()> {
        self.matrix = Some(m.clone());
        Ok(())
    }

    fn query(&mut self, u: &BoolVector, v: &BoolVector) -> Result<bool> {
        let m = self
            .matrix
            .as_ref()
            .ok_or_else(|| Error::Rejected("oracle used before preprocess".into()))?;
        self.queries += 1;
        vec_mat_vec(u, m, v)
    }

    fn queries_used(&self) -> usize {
        self.queries
    }

    fn rollback(&mut self) {}
}

/// Indices `i` with `uᵢ ∧ (Mv)ᵢ = 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessSet {
    pub indices: BTreeSet<usize>,
}

impl WitnessSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Entrywise definition, used as the reference.
    pub fn brute_force(u: &BoolVector, m: &BoolMatrix, v: &BoolVector) -> Result<WitnessSet> {
        let mv = crate::mat_vec(m, v)?;
        let both = u.and(&mv)?;
        Ok(WitnessSet {
            indices: both.iter_ones().collect(),
        })
    }
}

/// `1 + w(2⌈log₂ n1⌉ + 1)`.
pub fn witness_query_budget(n1: usize, witnesses: usize) -> usize {
    let log = (usize::BITS - n1.saturating_sub(1).leading_zeros()) as usize;
    1 + witnesses * (2 * log + 1)
}

fn ask(oracle: &mut dyn OuMvOracle, u: &BoolVector, v: &BoolVector) -> Result<bool> {
    if oracle.exhausted() {
        oracle.rollback();
    }
    oracle.query(u, v)
}

/// Lists every witness of `(u, v)` one at a time by binary search over the
/// support of `u`.
pub fn list_witnesses(oracle: &mut dyn OuMvOracle, u: &BoolVector, v: &BoolVector) -> Result<WitnessSet> {
    let mut found = WitnessSet::default();
    let mut remaining = u.clone();
    if !ask(oracle, &remaining, v)? {
        return Ok(found);
    }
    loop {
        // `remaining` holds at least one witness here.
        let mut candidates: Vec<usize> = remaining.iter_ones().collect();
        while candidates.len() > 1 {
            let half = candidates.len() / 2;
            let lower = BoolVector::from_indices(u.len(), candidates[..half].iter().copied())?;
            if ask(oracle, &lower, v)? {
                candidates.truncate(half);
            } else {
                candidates.drain(..half);
            }
        }
        let i = candidates[0];
        found.indices.insert(i);
        remaining.set(i, false);
        if !remaining.any() || !ask(oracle, &remaining, v)? {
            return Ok(found);
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OmvViaOuMvRun {
    pub outputs: Vec<BoolVector>,
    /// `Σ_{x,y} |W_{x,y,t}|` for each round `t`.
    pub witnesses_per_round: Vec<usize>,
    pub queries: usize,
}

pub type OracleFactory<'a> = dyn Fn() -> Result<Box<dyn OuMvOracle>> + 'a;

/// OMv answered through one OuMv oracle per `k1 x k2` block.
///
/// Per block row the query vector starts as all ones; witnesses found in one
/// block are cleared before moving on to the next block in the row, and rows
/// already settled by an overlapping earlier block row are cleared up front.
pub fn omv_via_oumv(
    factory: &OracleFactory<'_>,
    m: &BoolMatrix,
    vectors: &[BoolVector],
    k1: usize,
    k2: usize,
) -> Result<OmvViaOuMvRun> {
    let rows = tile_starts(m.n1(), k1)?;
    let cols = tile_starts(m.n2(), k2)?;
    let mut oracles = Vec::with_capacity(rows.len());
    for &r in &rows {
        let mut line = Vec::with_capacity(cols.len());
        for &c in &cols {
            let mut o = factory()?;
            o.preprocess(&m.block(r..r + k1, c..c + k2)?)?;
            line.push(o);
        }
        oracles.push(line);
    }
    let mut run = OmvViaOuMvRun::default();
    for v in vectors {
        if v.len() != m.n2() {
            return Err(Error::dim("omv_via_oumv vector length", m.n2(), v.len()));
        }
        let pieces = cols
            .iter()
            .map(|&c| v.slice(c..c + k2))
            .collect::<Result<Vec<_>>>()?;
        let mut out = BoolVector::zeros(m.n1());
        let mut count = 0;
        for (x, &r) in rows.iter().enumerate() {
            let mut u = BoolVector::ones(k1);
            for i in 0..k1 {
                if out.get(r + i) {
                    u.set(i, false);
                }
            }
            for (y, piece) in pieces.iter().enumerate() {
                if !u.any() {
                    break;
                }
                let w = list_witnesses(oracles[x][y].as_mut(), &u, piece)?;
                count += w.len();
                for &i in &w.indices {
                    u.set(i, false);
                    out.set(r + i, true);
                }
            }
        }
        run.outputs.push(out);
        run.witnesses_per_round.push(count);
    }
    run.queries = oracles.iter().flatten().map(|o| o.queries_used()).sum();
    Ok(run)
}

/// Adjacency matrix of a simple undirected graph.
pub fn adjacency_matrix(n: usize, edges: &[(usize, usize)]) -> Result<BoolMatrix> {
    let mut m = BoolMatrix::zeros(n, n);
    for &(a, b) in edges {
        for x in [a, b] {
            if x >= n {
                return Err(Error::OutOfRange {
                    context: "graph vertex",
                    index: x,
                    size: n,
                });
            }
        }
        if a == b {
            return Err(Error::InvalidParameter(format!("self-loop at {a}")));
        }
        m.set(a, b, true);
        m.set(b, a, true);
    }
    Ok(m)
}

fn check_set(n: usize, s: &BoolVector) -> Result<()> {
    if s.len() != n {
        return Err(Error::dim("vertex set length", n, s.len()));
    }
    Ok(())
}

/// "Is `S` independent?" and "is `S` a vertex cover?" over a fixed graph.
pub struct IndependentSetAdapter {
    adjacency: BoolMatrix,
    oracle: Box<dyn OuMvOracle>,
}

impl IndependentSetAdapter {
    pub fn new(adjacency: BoolMatrix, mut oracle: Box<dyn OuMvOracle>) -> Result<Self> {
        if adjacency.n1() != adjacency.n2() {
            return Err(Error::dim("adjacency matrix columns", adjacency.n1(), adjacency.n2()));
        }
        oracle.preprocess(&adjacency)?;
        Ok(IndependentSetAdapter { adjacency, oracle })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)], spec: &EngineSpec) -> Result<Self> {
        Self::new(adjacency_matrix(n, edges)?, Box::new(EngineOuMv::from_spec(spec)?))
    }

    /// `SᵀAS = 0`.
    pub fn independent(&mut self, s: &BoolVector) -> Result<bool> {
        check_set(self.adjacency.n1(), s)?;
        Ok(!self.oracle.query(s, s)?)
    }

    /// `S` covers every edge iff `V∖S` is independent.
    pub fn vertex_cover(&mut self, s: &BoolVector) -> Result<bool> {
        check_set(self.adjacency.n1(), s)?;
        self.independent(&s.not())
    }

    pub fn independent_direct(&self, s: &BoolVector) -> Result<bool> {
        check_set(self.adjacency.n1(), s)?;
        let members: Vec<usize> = s.iter_ones().collect();
        Ok(!members
            .iter()
            .any(|&a| members.iter().any(|&b| self.adjacency.get(a, b))))
    }

    pub fn vertex_cover_direct(&self, s: &BoolVector) -> Result<bool> {
        check_set(self.adjacency.n1(), s)?;
        let n = self.adjacency.n1();
        Ok((0..n).all(|a| (0..n).all(|b| !self.adjacency.get(a, b) || s.get(a) || s.get(b))))
    }

    pub fn queries_used(&self) -> usize {
        self.oracle.queries_used()
    }
}

/// "Is there an edge between `S` and `T`?"
pub struct EdgeQueryAdapter {
    matrix: BoolMatrix,
    /// Some(n1) when built from a bipartite `n1 x n2` matrix through the
    /// symmetric lift.
    left: Option<usize>,
    oracle: Box<dyn OuMvOracle>,
}

impl EdgeQueryAdapter {
    pub fn new(adjacency: BoolMatrix, mut oracle: Box<dyn OuMvOracle>) -> Result<Self> {
        if adjacency.n1() != adjacency.n2() {
            return Err(Error::dim("adjacency matrix columns", adjacency.n1(), adjacency.n2()));
        }
        oracle.preprocess(&adjacency)?;
        Ok(EdgeQueryAdapter {
            matrix: adjacency,
            left: None,
            oracle,
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)], spec: &EngineSpec) -> Result<Self> {
        Self::new(adjacency_matrix(n, edges)?, Box::new(EngineOuMv::from_spec(spec)?))
    }

    /// Bipartite graph with `M_{ij} = 1` iff left `i` and right `j` are
    /// adjacent, served on the symmetric lift `[[0, M], [Mᵀ, 0]]`.
    pub fn bipartite(m: &BoolMatrix, mut oracle: Box<dyn OuMvOracle>) -> Result<Self> {
        let lifted = symmetrize(m);
        oracle.preprocess(&lifted)?;
        Ok(EdgeQueryAdapter {
            matrix: lifted,
            left: Some(m.n1()),
            oracle,
        })
    }

    /// Sides of the query: for a plain graph both are vertex sets of length
    /// `n`; for a bipartite adapter `s` indexes the left side and `t` the
    /// right side.
    fn lift(&self, s: &BoolVector, t: &BoolVector) -> Result<(BoolVector, BoolVector)> {
        match self.left {
            None => {
                check_set(self.matrix.n1(), s)?;
                check_set(self.matrix.n1(), t)?;
                Ok((s.clone(), t.clone()))
            }
            Some(n1) => {
                let n2 = self.matrix.n1() - n1;
                check_set(n1, s)?;
                check_set(n2, t)?;
                Ok((s.concat(&BoolVector::zeros(n2)), BoolVector::zeros(n1).concat(t)))
            }
        }
    }

    pub fn edge(&mut self, s: &BoolVector, t: &BoolVector) -> Result<bool> {
        let (x, y) = self.lift(s, t)?;
        self.oracle.query(&x, &y)
    }

    pub fn edge_direct(&self, s: &BoolVector, t: &BoolVector) -> Result<bool> {
        let (x, y) = self.lift(s, t)?;
        let hit = x
            .iter_ones()
            .any(|a| y.iter_ones().any(|b| self.matrix.get(a, b)));
        Ok(hit)
    }

    pub fn queries_used(&self) -> usize {
        self.oracle.queries_used()
    }
}

/// "Is `S` dominating?" via one OMv product: `AS ∨ S` must be all ones.
pub struct DominatingSetAdapter {
    adjacency: BoolMatrix,
    engine: Box<dyn OmvEngine>,
}

impl DominatingSetAdapter {
    pub fn new(adjacency: BoolMatrix, mut engine: Box<dyn OmvEngine>) -> Result<Self> {
        if adjacency.n1() != adjacency.n2() {
            return Err(Error::dim("adjacency matrix columns", adjacency.n1(), adjacency.n2()));
        }
        engine.preprocess(&adjacency)?;
        Ok(DominatingSetAdapter { adjacency, engine })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)], spec: &EngineSpec) -> Result<Self> {
        Self::new(adjacency_matrix(n, edges)?, spec.build()?)
    }

    pub fn dominating(&mut self, s: &BoolVector) -> Result<bool> {
        check_set(self.adjacency.n1(), s)?;
        Ok(self.engine.next(s)?.or(s)?.all())
    }

    pub fn dominating_direct(&self, s: &BoolVector) -> Result<bool> {
        check_set(self.adjacency.n1(), s)?;
        let n = self.adjacency.n1();
        Ok((0..n).all(|a| s.get(a) || (0..n).any(|b| s.get(b) && self.adjacency.get(a, b))))
    }
}

/// A 2-CNF formula. Literals are signed 1-based variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf2 {
    pub vars: usize,
    pub clauses: Vec<(i64, i64)>,
}

impl Cnf2 {
    pub fn new(vars: usize, clauses: Vec<(i64, i64)>) -> Result<Self> {
        for &(a, b) in &clauses {
            for lit in [a, b] {
                if lit == 0 || lit.unsigned_abs() as usize > vars {
                    return Err(Error::InvalidParameter(format!(
                        "literal {lit} outside 1..={vars}"
                    )));
                }
            }
        }
        Ok(Cnf2 { vars, clauses })
    }

    /// One clause per line; blank lines and lines starting with `c` are
    /// skipped. The variable count is the largest index seen unless given.
    pub fn parse(text: &str, vars: Option<usize>) -> Result<Self> {
        let mut clauses = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let lits = line
                .split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| Error::parse(k + 1, format!("bad literal `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            match lits[..] {
                [a, b] if a != 0 && b != 0 => clauses.push((a, b)),
                _ => return Err(Error::parse(k + 1, "expected two nonzero literals")),
            }
        }
        let seen = clauses
            .iter()
            .map(|&(a, b)| a.unsigned_abs().max(b.unsigned_abs()) as usize)
            .max()
            .unwrap_or(0);
        Cnf2::new(vars.unwrap_or(seen), clauses)
    }

    pub fn to_text(&self) -> String {
        self.clauses.iter().map(|(a, b)| format!("{a} {b}\n")).collect()
    }

    fn literal_true(lit: i64, x: &BoolVector) -> bool {
        let value = x.get(lit.unsigned_abs() as usize - 1);
        if lit > 0 { value } else { !value }
    }

    pub fn evaluate(&self, x: &BoolVector) -> Result<bool> {
        check_set(self.vars, x)?;
        Ok(self
            .clauses
            .iter()
            .all(|&(a, b)| Self::literal_true(a, x) || Self::literal_true(b, x)))
    }
}

impl FromStr for Cnf2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Cnf2::parse(s, None)
    }
}

impl fmt::Display for Cnf2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Literal vertex: variable `k` (0-based) positive is `2k`, negative `2k+1`.
pub fn literal_vertex(lit: i64) -> usize {
    let k = lit.unsigned_abs() as usize - 1;
    if lit > 0 { 2 * k } else { 2 * k + 1 }
}

/// 2-CNF evaluation through the conflict graph on `2n` literal vertices.
///
/// Each clause joins its two literal vertices. An assignment satisfies the
/// formula iff the set of literals it falsifies is independent, with clauses
/// repeating one literal checked directly.
pub struct Cnf2Adapter {
    formula: Cnf2,
    units: Vec<i64>,
    graph: IndependentSetAdapter,
}

impl Cnf2Adapter {
    pub fn new(formula: Cnf2, oracle: Box<dyn OuMvOracle>) -> Result<Self> {
        let mut edges = Vec::new();
        let mut units = Vec::new();
        for &(a, b) in &formula.clauses {
            if a == b {
                units.push(a);
            } else {
                edges.push((literal_vertex(a), literal_vertex(b)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let graph = IndependentSetAdapter::new(adjacency_matrix(2 * formula.vars, &edges)?, oracle)?;
        Ok(Cnf2Adapter { formula, units, graph })
    }

    pub fn with_engine(formula: Cnf2, spec: &EngineSpec) -> Result<Self> {
        Self::new(formula, Box::new(EngineOuMv::from_spec(spec)?))
    }

    pub fn falsified_literals(&self, x: &BoolVector) -> Result<BoolVector> {
        check_set(self.formula.vars, x)?;
        let mut s = BoolVector::zeros(2 * self.formula.vars);
        for k in 0..self.formula.vars {
            s.set(if x.get(k) { 2 * k + 1 } else { 2 * k }, true);
        }
        Ok(s)
    }

    pub fn satisfied(&mut self, x: &BoolVector) -> Result<bool> {
        let s = self.falsified_literals(x)?;
        if !self.units.iter().all(|&lit| Cnf2::literal_true(lit, x)) {
            return Ok(false);
        }
        self.graph.independent(&s)
    }

    pub fn satisfied_direct(&self, x: &BoolVector) -> Result<bool> {
        self.formula.evaluate(x)
    }
}
