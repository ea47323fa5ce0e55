//! Campaign driver behind the `omv` binary: instance generation, verification,
//! benchmarks, CSV reports and op-script replay.
//!
//! Every trial draws from `ChaCha8Rng::seed_from_u64(seed)` on its own stream,
//! so the instance for `(size, trial)` does not depend on which targets run or
//! in which order.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitcore::{mat_vec, vec_mat_vec, BoolMatrix, BoolVector};
use crate::dynoracles::script::{parse_script, Op};
use crate::dynoracles::{
    DensestOracle, DiameterOracle, DistanceOracle, DynGraph, EvenShiloachOracle, SubConnOracle, TriangleOracle,
};
use crate::engines::{run_stream, EngineSpec};
use crate::gadgets::{run_gadget, tradeoff_shape, GadgetConfig, GadgetKind, GadgetRun, UndoMode};
use crate::ratio::parse_rational;
use crate::{Error, Rational, Result};

/// A gadget or an engine, as named on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Gadget(GadgetKind),
    Engine(EngineSpec),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Gadget(k) => write!(f, "{k}"),
            Target::Engine(e) => write!(f, "{e}"),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(k) = s.parse() {
            return Ok(Target::Gadget(k));
        }
        s.parse()
            .map(Target::Engine)
            .map_err(|_| Error::InvalidParameter(format!("unknown target `{s}`")))
    }
}

/// Comma-separated targets; `gadgets` expands to every gadget. Engine specs
/// contain commas only inside `tiled:k1,k2:…`, which is re-joined here.
pub fn parse_targets(list: &str) -> Result<Vec<Target>> {
    let mut out = Vec::new();
    let mut pending = String::new();
    for piece in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if !pending.is_empty() {
            pending.push(',');
            pending.push_str(piece);
            if pending.matches(':').count() >= 2 {
                out.push(std::mem::take(&mut pending).parse()?);
            }
            continue;
        }
        if piece == "gadgets" {
            out.extend(GadgetKind::ALL.map(Target::Gadget));
        } else if piece.starts_with("tiled:") && !piece.contains(',') {
            pending = piece.to_string();
        } else {
            out.push(piece.parse()?);
        }
    }
    if !pending.is_empty() {
        return Err(Error::InvalidParameter(format!("incomplete target `{pending}`")));
    }
    Ok(out)
}

/// `n1xn2xn3[,…]`.
pub fn parse_sizes(list: &str) -> Result<Vec<(usize, usize, usize)>> {
    list.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let dims: Vec<usize> = p
                .split('x')
                .map(|d| d.parse().map_err(|_| Error::InvalidParameter(format!("bad size `{p}`"))))
                .collect::<Result<_>>()?;
            match dims[..] {
                [n1, n2, n3] => Ok((n1, n2, n3)),
                _ => Err(Error::InvalidParameter(format!("size `{p}` must be n1xn2xn3"))),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Campaign {
    pub seed: u64,
    pub trials: usize,
    pub sizes: Vec<(usize, usize, usize)>,
    pub density: Rational,
    pub targets: Vec<Target>,
    pub undo_mode: UndoMode,
    pub epsilon: Rational,
    pub delta: Option<Rational>,
    /// Flip one oracle answer per gadget trial and expect it to be caught.
    pub inject_faults: bool,
}

impl Default for Campaign {
    fn default() -> Self {
        Campaign {
            seed: 0,
            trials: 1,
            sizes: vec![(8, 8, 8)],
            density: Rational::new(1, 2),
            targets: GadgetKind::ALL.map(Target::Gadget).to_vec(),
            undo_mode: UndoMode::Undo,
            epsilon: Rational::from_integer(1),
            delta: None,
            inject_faults: false,
        }
    }
}

impl Campaign {
    fn config(&self) -> GadgetConfig {
        GadgetConfig {
            epsilon: self.epsilon,
            delta: self.delta,
            undo_mode: self.undo_mode,
            ..Default::default()
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Shape actually used for `kind` at grid point `(n1, n2)`.
    pub fn shape_for(&self, kind: GadgetKind, n1: usize, n2: usize) -> Result<(usize, usize)> {
        match self.delta {
            Some(d) if kind.is_tradeoff() => tradeoff_shape(n1, n2, d),
            _ => Ok((n1, n2)),
        }
    }
}

pub type Pairs = Vec<(BoolVector, BoolVector)>;

/// The instance of one trial: `M` and `n3` pairs drawn at `density`.
pub fn trial_instance(rng: &mut ChaCha8Rng, n1: usize, n2: usize, n3: usize, density: Rational) -> (BoolMatrix, Pairs) {
    let m = BoolMatrix::random(rng, n1, n2, density);
    let pairs = (0..n3)
        .map(|_| (BoolVector::random(rng, n1, density), BoolVector::random(rng, n2, density)))
        .collect();
    (m, pairs)
}

fn stream_id(size_index: usize, trial: usize) -> u64 {
    ((size_index as u64) << 32) | trial as u64
}

/// Largest side a gadget is run at; the exact densest-subgraph oracle is
/// cubic in a graph of `6n³` vertices.
pub fn max_side(kind: GadgetKind) -> Option<usize> {
    match kind {
        GadgetKind::Densest => Some(8),
        _ => None,
    }
}

/// Writes `M`, the `u` stream and the `v` stream of every trial into `dir`.
pub fn cmd_gen(c: &Campaign, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (si, &(n1, n2, n3)) in c.sizes.iter().enumerate() {
        for trial in 0..c.trials {
            let (m, pairs) = trial_instance(&mut c.rng(stream_id(si, trial)), n1, n2, n3, c.density);
            let stem = format!("{n1}x{n2}x{n3}-t{trial}");
            let lines = |pick: fn(&(BoolVector, BoolVector)) -> &BoolVector| {
                pairs.iter().map(|p| pick(p).to_line() + "\n").collect::<String>()
            };
            for (suffix, text) in [("m.txt", m.to_text()), ("u.txt", lines(|p| &p.0)), ("v.txt", lines(|p| &p.1))] {
                let path = dir.join(format!("{stem}.{suffix}"));
                fs::write(&path, text)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetSummary {
    pub target: String,
    pub trials: usize,
    pub rounds: usize,
    pub skipped: usize,
    pub failures: usize,
    pub worst_updates: Rational,
    pub worst_queries: Rational,
    pub faults_injected: usize,
    pub faults_detected: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub summaries: Vec<TargetSummary>,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.summaries {
            let _ = write!(
                out,
                "target={} trials={} rounds={} skipped={} failures={} worst_update_ratio={} worst_query_ratio={}",
                s.target, s.trials, s.rounds, s.skipped, s.failures, s.worst_updates, s.worst_queries
            );
            if s.faults_injected > 0 {
                let _ = write!(out, " faults_injected={} faults_detected={}", s.faults_injected, s.faults_detected);
            }
            out.push('\n');
        }
        for f in &self.failures {
            let _ = writeln!(out, "FAIL {f}");
        }
        let _ = writeln!(out, "status={}", if self.passed() { "pass" } else { "fail" });
        out
    }
}

fn ratio(used: usize, budget: usize) -> Rational {
    if budget == 0 {
        Rational::from_integer(if used == 0 { 0 } else { i64::MAX })
    } else {
        Rational::new(used as i64, budget as i64)
    }
}

/// Problems with one gadget run, empty when it is clean.
pub fn check_run(run: &GadgetRun, m: &BoolMatrix, pairs: &[(BoolVector, BoolVector)]) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    for (t, (u, v)) in pairs.iter().enumerate() {
        let want = vec_mat_vec(u, m, v)?;
        if run.recovered.get(t) != Some(&want) {
            problems.push(format!("round {t} decoded {:?}, product is {want}", run.recovered.get(t)));
        }
    }
    if !run.within_budget() {
        problems.push(format!(
            "budget exceeded: updates {}/{} queries {}/{}",
            run.updates_used, run.budget_updates, run.queries_used, run.budget_queries
        ));
    }
    if let Some(a) = run.audit_mismatches().next() {
        problems.push(format!(
            "audit mismatch at query {} (round {}): observed {} expected {}",
            a.query, a.round, a.observed, a.expected
        ));
    }
    Ok(problems)
}

struct Tally {
    summary: TargetSummary,
}

impl Tally {
    fn new(target: &Target) -> Self {
        let zero = Rational::from_integer(0);
        Tally {
            summary: TargetSummary {
                target: target.to_string(),
                trials: 0,
                rounds: 0,
                skipped: 0,
                failures: 0,
                worst_updates: zero,
                worst_queries: zero,
                faults_injected: 0,
                faults_detected: 0,
            },
        }
    }
}

/// Runs every target over the grid and checks decode, budget, gap and audit.
pub fn cmd_verify(c: &Campaign) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let cfg = c.config();
    for target in &c.targets {
        let mut tally = Tally::new(target);
        for (si, &(n1, n2, n3)) in c.sizes.iter().enumerate() {
            for trial in 0..c.trials {
                let mut rng = c.rng(stream_id(si, trial));
                let at = format!("target={target} size={n1}x{n2}x{n3} trial={trial}");
                let s = &mut tally.summary;
                match target {
                    Target::Engine(spec) => {
                        let (m, pairs) = trial_instance(&mut rng, n1, n2, n3, c.density);
                        let vs: Vec<BoolVector> = pairs.into_iter().map(|p| p.1).collect();
                        s.trials += 1;
                        s.rounds += n3;
                        let got = run_stream(spec.build()?.as_mut(), &m, &vs)?;
                        for (t, (v, out)) in vs.iter().zip(&got).enumerate() {
                            if *out != mat_vec(&m, v)? {
                                s.failures += 1;
                                report.failures.push(format!("{at} round {t}: output differs from naive product"));
                                break;
                            }
                        }
                    }
                    Target::Gadget(kind) => {
                        let (a, b) = c.shape_for(*kind, n1, n2)?;
                        if max_side(*kind).is_some_and(|cap| a.max(b) > cap) {
                            s.skipped += 1;
                            continue;
                        }
                        let (m, pairs) = trial_instance(&mut rng, a, b, n3, c.density);
                        s.trials += 1;
                        s.rounds += n3;
                        let run = match run_gadget(*kind, &m, &pairs, &cfg) {
                            Ok(run) => run,
                            Err(e) => {
                                s.failures += 1;
                                report.failures.push(format!("{at}: {e}"));
                                continue;
                            }
                        };
                        s.worst_updates = s.worst_updates.max(ratio(run.updates_used, run.budget_updates));
                        s.worst_queries = s.worst_queries.max(ratio(run.queries_used, run.budget_queries));
                        let problems = check_run(&run, &m, &pairs)?;
                        if !problems.is_empty() {
                            s.failures += 1;
                            report.failures.push(format!("{at}: {}", problems.join("; ")));
                            continue;
                        }
                        if c.inject_faults && !run.audit.is_empty() {
                            let k = rng.random_range(0..run.audit.len());
                            let faulty_cfg = GadgetConfig { fault: Some(k), ..cfg.clone() };
                            s.faults_injected += 1;
                            let caught = match run_gadget(*kind, &m, &pairs, &faulty_cfg) {
                                Ok(faulty) => !check_run(&faulty, &m, &pairs)?.is_empty(),
                                Err(_) => true,
                            };
                            if caught {
                                s.faults_detected += 1;
                                report.failures.push(format!("{at}: injected fault at query {k} detected"));
                            } else {
                                report.failures.push(format!("{at}: injected fault at query {k} NOT detected"));
                            }
                            s.failures += 1;
                        }
                    }
                }
            }
        }
        report.summaries.push(tally.summary);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub target: String,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub trials: usize,
    pub preprocess_ns: u128,
    pub total_ns: u128,
    pub updates: usize,
    pub queries: usize,
    pub table_bytes: usize,
}

fn median(mut xs: Vec<u128>) -> u128 {
    if xs.is_empty() {
        return 0;
    }
    xs.sort_unstable();
    xs[xs.len() / 2]
}

/// One row per target and size. Times are per-trial medians; `total_ns` is
/// the time spent answering vectors (engines) or the whole run (gadgets).
/// Engine rows count each vector as one query.
pub fn cmd_bench(c: &Campaign) -> Result<Vec<BenchRow>> {
    let cfg = c.config();
    let mut rows = Vec::new();
    for target in &c.targets {
        for (si, &(n1, n2, n3)) in c.sizes.iter().enumerate() {
            let (mut pre, mut total) = (Vec::new(), Vec::new());
            let mut row = BenchRow {
                target: target.to_string(),
                n1,
                n2,
                n3,
                trials: 0,
                preprocess_ns: 0,
                total_ns: 0,
                updates: 0,
                queries: 0,
                table_bytes: 0,
            };
            for trial in 0..c.trials {
                let mut rng = c.rng(stream_id(si, trial));
                match target {
                    Target::Engine(spec) => {
                        let (m, pairs) = trial_instance(&mut rng, n1, n2, n3, c.density);
                        let mut engine = spec.build()?;
                        let vs: Vec<BoolVector> = pairs.into_iter().map(|p| p.1).collect();
                        run_stream(engine.as_mut(), &m, &vs)?;
                        let stats = engine.stats();
                        pre.push(stats.preprocess_elapsed.as_nanos());
                        total.push(stats.total_query_elapsed().as_nanos());
                        row.queries += vs.len();
                        row.table_bytes = row.table_bytes.max(stats.table_bytes);
                    }
                    Target::Gadget(kind) => {
                        let (a, b) = c.shape_for(*kind, n1, n2)?;
                        if max_side(*kind).is_some_and(|cap| a.max(b) > cap) {
                            continue;
                        }
                        let (m, pairs) = trial_instance(&mut rng, a, b, n3, c.density);
                        let start = Instant::now();
                        let run = run_gadget(*kind, &m, &pairs, &cfg)?;
                        total.push(start.elapsed().as_nanos());
                        pre.push(0);
                        row.n1 = a;
                        row.n2 = b;
                        row.updates += run.updates_used;
                        row.queries += run.queries_used;
                    }
                }
                row.trials += 1;
            }
            row.preprocess_ns = median(pre);
            row.total_ns = median(total);
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    }
    if rows.is_empty() {
        w.write_record([
            "target",
            "n1",
            "n2",
            "n3",
            "trials",
            "preprocess_ns",
            "total_ns",
            "updates",
            "queries",
            "table_bytes",
        ])
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidParameter(e.to_string()))
}

pub fn parse_bench_csv(text: &str) -> Result<Vec<BenchRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in reader.deserialize::<BenchRow>() {
        let row = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        rows.push(row);
    }
    Ok(rows)
}

fn median_u128(xs: impl Iterator<Item = u128>) -> u128 {
    median(xs.collect())
}

/// Per-target medians, then one speedup line per `lookup*` row that has a
/// `naive` row of the same size.
pub fn cmd_report(csv_text: &str) -> Result<String> {
    if csv_text.trim().is_empty() {
        return Ok(String::new());
    }
    let rows = parse_bench_csv(csv_text)?;
    let mut by_target: BTreeMap<&str, Vec<&BenchRow>> = BTreeMap::new();
    for r in &rows {
        by_target.entry(&r.target).or_default().push(r);
    }
    let mut out = String::new();
    for (target, rs) in &by_target {
        let _ = writeln!(
            out,
            "target={target} rows={} median_preprocess_ns={} median_total_ns={}",
            rs.len(),
            median_u128(rs.iter().map(|r| r.preprocess_ns)),
            median_u128(rs.iter().map(|r| r.total_ns))
        );
    }
    for r in rows.iter().filter(|r| r.target.starts_with("lookup")) {
        let base = rows
            .iter()
            .find(|b| b.target == "naive" && (b.n1, b.n2, b.n3) == (r.n1, r.n2, r.n3));
        if let Some(b) = base {
            let speed = if b.total_ns == 0 { f64::NAN } else { r.total_ns as f64 / b.total_ns as f64 };
            let _ = writeln!(
                out,
                "ratio {}/naive {}x{}x{} total_ns={:.4}",
                r.target, r.n1, r.n2, r.n3, speed
            );
        }
    }
    Ok(out)
}

/// Long format for plotting: `target,n1,n2,n3,metric,value`.
pub fn long_csv(csv_text: &str) -> Result<String> {
    let mut out = String::from("target,n1,n2,n3,metric,value\n");
    if csv_text.trim().is_empty() {
        return Ok(out);
    }
    for r in parse_bench_csv(csv_text)? {
        let metrics = [
            ("trials", r.trials as u128),
            ("preprocess_ns", r.preprocess_ns),
            ("total_ns", r.total_ns),
            ("updates", r.updates as u128),
            ("queries", r.queries as u128),
            ("table_bytes", r.table_bytes as u128),
        ];
        for (name, value) in metrics {
            let _ = writeln!(out, "{},{},{},{},{name},{value}", r.target, r.n1, r.n2, r.n3);
        }
    }
    Ok(out)
}

fn fmt_dist(d: Option<usize>) -> String {
    d.map_or_else(|| "inf".to_string(), |x| x.to_string())
}

fn unknown(op: &Op, oracle: &str) -> Error {
    Error::parse(op.line, format!("`{}` is not an operation of the {oracle} oracle", op.name))
}

/// Replays an op script against a named oracle and prints one line per query
/// (`<op> -> <answer>`) followed by the counters.
///
/// | oracle     | updates                  | queries            |
/// |------------|--------------------------|--------------------|
/// | `subconn`  | `on v`, `off v`          | `q s t`            |
/// | `distance` | `ins a b`, `del a b`     | `q s t`            |
/// | `reach`    | `ins a b`, `del a b`     | `q s t`            |
/// | `triangle` | `ins a b`, `del a b`     | `tri v`, `any`     |
/// | `es`       | `del a b`                | `q v` (from `source`) |
/// | `diameter` | `ins a b [w]`, `del a b` | `diam`             |
/// | `densest`  | `ins a b`, `del a b`     | `dense`            |
pub fn replay(oracle: &str, graph_text: &str, script: &str, source: usize) -> Result<String> {
    let ops = parse_script(script)?;
    let directed = oracle == "reach";
    let graph = DynGraph::parse(graph_text, directed)?;
    let mut out = String::new();
    let mut answer = |op: &Op, value: String| {
        let _ = writeln!(out, "{op} -> {value}");
    };
    let counters = match oracle {
        "subconn" => {
            let mut o = SubConnOracle::from_graph(graph);
            for op in &ops {
                match op.name.as_str() {
                    "on" => o.turn_on(op.index(0)?)?,
                    "off" => o.turn_off(op.index(0)?)?,
                    "q" => answer(op, o.connected(op.index(0)?, op.index(1)?)?.to_string()),
                    _ => return Err(unknown(op, oracle)),
                }
            }
            o.counters()
        }
        "distance" | "reach" => {
            let mut o = DistanceOracle::from_graph(graph);
            for op in &ops {
                match op.name.as_str() {
                    "ins" => o.insert_edge(op.index(0)?, op.index(1)?)?,
                    "del" => o.delete_edge(op.index(0)?, op.index(1)?)?,
                    "q" if directed => answer(op, o.reach(op.index(0)?, op.index(1)?)?.to_string()),
                    "q" => answer(op, fmt_dist(o.dist(op.index(0)?, op.index(1)?)?)),
                    _ => return Err(unknown(op, oracle)),
                }
            }
            o.counters()
        }
        "triangle" => {
            let mut o = TriangleOracle::from_graph(graph);
            for op in &ops {
                match op.name.as_str() {
                    "ins" => o.insert_edge(op.index(0)?, op.index(1)?)?,
                    "del" => o.delete_edge(op.index(0)?, op.index(1)?)?,
                    "tri" => answer(op, o.triangle_at(op.index(0)?)?.to_string()),
                    "any" => answer(op, o.any_triangle()?.to_string()),
                    _ => return Err(unknown(op, oracle)),
                }
            }
            o.counters()
        }
        "es" => {
            let mut o = EvenShiloachOracle::new(graph, source)?;
            for op in &ops {
                match op.name.as_str() {
                    "del" => o.delete_edge(op.index(0)?, op.index(1)?)?,
                    "q" => answer(op, fmt_dist(o.dist(op.index(0)?)?)),
                    _ => return Err(unknown(op, oracle)),
                }
            }
            o.counters()
        }
        "diameter" => {
            let mut o = DiameterOracle::from_graph(graph);
            for op in &ops {
                match op.name.as_str() {
                    "ins" => {
                        let w = if op.args.len() > 2 { op.int(2)? } else { 1 };
                        let w = u8::try_from(w).map_err(|_| Error::parse(op.line, "weight must be 0 or 1"))?;
                        o.insert_edge(op.index(0)?, op.index(1)?, w)?;
                    }
                    "del" => {
                        o.delete_edge(op.index(0)?, op.index(1)?)?;
                    }
                    "diam" => answer(op, fmt_dist(o.diameter()?)),
                    _ => return Err(unknown(op, oracle)),
                }
            }
            o.counters()
        }
        "densest" => {
            let mut o = DensestOracle::from_graph(graph);
            for op in &ops {
                match op.name.as_str() {
                    "ins" => o.insert_edge(op.index(0)?, op.index(1)?)?,
                    "del" => o.delete_edge(op.index(0)?, op.index(1)?)?,
                    "dense" => {
                        let (rho, set) = o.densest()?;
                        let members: Vec<String> = set.iter().map(usize::to_string).collect();
                        answer(op, format!("{rho} [{}]", members.join(" ")));
                    }
                    _ => return Err(unknown(op, oracle)),
                }
            }
            o.counters()
        }
        _ => return Err(Error::InvalidParameter(format!("unknown oracle `{oracle}`"))),
    };
    let _ = writeln!(out, "updates={} queries={}", counters.updates, counters.queries);
    Ok(out)
}

/// `key=value` record of a gadget run followed by its per-round CSV.
pub fn run_record(run: &GadgetRun) -> String {
    let mut out = run.to_record();
    out.push_str("round,bit,updates,queries\n");
    for (t, (bit, c)) in run.recovered.iter().zip(&run.per_round).enumerate() {
        let _ = writeln!(out, "{t},{},{},{}", *bit as u8, c.updates, c.queries);
    }
    out
}

/// Parses a `p/q` flag value.
pub fn parse_fraction(text: &str) -> Result<Rational> {
    parse_rational(text)
}

/// Reads a stream of vectors, one per line.
pub fn parse_vectors(text: &str) -> Result<Vec<BoolVector>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| BoolVector::parse_line(l).map_err(|e| Error::parse(k + 1, e.to_string())))
        .collect()
}
