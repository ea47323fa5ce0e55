//! Acceptance run: one line per criterion, nonzero exit if a gating one fails.

mod common;

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use omv::engines::{run_stream, EngineSpec};
use omv::gadgets::{run_gadget, tradeoff_shape, GadgetConfig, GadgetKind, GadgetRun, UndoMode};
use omv::harness::{self, Campaign, Target};
use omv::oumv::{list_witnesses, omv_via_oumv, DirectOuMv, OuMvOracle};
use omv::{BoolMatrix, BoolVector, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Pairs = Vec<(BoolVector, BoolVector)>;

const GRID: [usize; 7] = [1, 2, 3, 4, 8, 16, 32];
const ROUNDS: [usize; 3] = [1, 4, 8];
const DENSEST_SIDE: usize = 8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_instance(r: &mut ChaCha8Rng, n1: usize, n2: usize, n3: usize) -> (BoolMatrix, Pairs) {
    let p = Rational::new(r.random_range(1..=3), 4);
    let m = BoolMatrix::random(r, n1, n2, p);
    let pairs = (0..n3)
        .map(|_| (BoolVector::random(r, n1, p), BoolVector::random(r, n2, p)))
        .collect();
    (m, pairs)
}

/// `uᵀMv` straight from the definition.
fn triple(u: &BoolVector, m: &BoolMatrix, v: &BoolVector) -> bool {
    (0..m.n1()).any(|i| u.get(i) && (0..m.n2()).any(|j| m.get(i, j) && v.get(j)))
}

fn entrywise(m: &BoolMatrix, v: &BoolVector) -> BoolVector {
    BoolVector::from_bits(&(0..m.n1()).map(|i| (0..m.n2()).any(|j| m.get(i, j) && v.get(j))).collect::<Vec<_>>())
}

fn ceil_log2(n: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

/// Criteria 1 and 5 share these runs.
struct DecodeRuns {
    per_kind: Vec<(GadgetKind, usize, usize)>,
    decode_failures: Vec<String>,
    budget_failures: Vec<String>,
}

fn decode_campaign() -> DecodeRuns {
    let mut out = DecodeRuns { per_kind: Vec::new(), decode_failures: Vec::new(), budget_failures: Vec::new() };
    for (ki, kind) in GadgetKind::ALL.into_iter().enumerate() {
        let mut points = Vec::new();
        for n1 in GRID {
            for n2 in GRID {
                for n3 in ROUNDS {
                    if kind != GadgetKind::Densest || n1.max(n2) <= DENSEST_SIDE {
                        points.push((n1, n2, n3));
                    }
                }
            }
        }
        let per_point = 500usize.div_ceil(points.len());
        let mut r = ChaCha8Rng::seed_from_u64(1000 + ki as u64);
        let (mut trials, mut rounds) = (0, 0);
        for &(n1, n2, n3) in &points {
            for t in 0..per_point {
                let (a, b) = if kind.is_tradeoff() && t % 2 == 1 {
                    tradeoff_shape(n1, n2, Rational::new(1, 2)).unwrap()
                } else {
                    (n1, n2)
                };
                let (m, pairs) = random_instance(&mut r, a, b, n3);
                let undo_mode = if t % 2 == 0 { UndoMode::Undo } else { UndoMode::Snapshot };
                let cfg = GadgetConfig { undo_mode, ..Default::default() };
                trials += 1;
                rounds += n3;
                let at = format!("{kind} {a}x{b}x{n3} trial {t}");
                let run = match run_gadget(kind, &m, &pairs, &cfg) {
                    Ok(run) => run,
                    Err(e) => {
                        out.decode_failures.push(format!("{at}: {e}"));
                        continue;
                    }
                };
                let want: Vec<bool> = pairs.iter().map(|(u, v)| triple(u, &m, v)).collect();
                if run.recovered != want {
                    out.decode_failures.push(format!("{at}: decoded {:?}, want {want:?}", run.recovered));
                }
                check_budget(&run, &at, &mut out.budget_failures);
            }
        }
        out.per_kind.push((kind, trials, rounds));
    }
    out
}

fn check_budget(run: &GadgetRun, at: &str, failures: &mut Vec<String>) {
    if run.updates_used > run.budget_updates || run.queries_used > run.budget_queries {
        failures.push(format!("{at}: {}", run.to_record().replace('\n', " ")));
    }
    let exact = match run.kind {
        GadgetKind::StSubConn => run.per_round.iter().all(|c| c.queries == 1),
        GadgetKind::DFailure => run.per_round.iter().all(|c| c.updates == 1),
        _ => true,
    };
    if !exact {
        failures.push(format!("{at}: per-round counters {:?}", run.per_round));
    }
}

fn criterion_1(d: &DecodeRuns) -> Outcome {
    let fewest = d.per_kind.iter().map(|&(_, t, _)| t).min().unwrap_or(0);
    let rounds: usize = d.per_kind.iter().map(|&(_, _, r)| r).sum();
    let pass = d.decode_failures.is_empty() && fewest >= 500;
    let mut detail = format!(
        "{} gadgets, at least {fewest} trials each, {rounds} rounds, {} mismatches (densest grid capped at side {DENSEST_SIDE})",
        d.per_kind.len(),
        d.decode_failures.len()
    );
    if let Some(f) = d.decode_failures.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    outcome(pass, detail)
}

fn criterion_2() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let mut failures = Vec::new();
    let instances = 200;
    let mut largest = (0, 0, 0);
    for k in 0..instances {
        let (n1, n2, n3) = if k < 8 {
            (256, 256, 32)
        } else {
            (r.random_range(1..=256), r.random_range(1..=256), r.random_range(1..=32))
        };
        largest = largest.max((n1, n2, n3));
        let (m, pairs) = random_instance(&mut r, n1, n2, n3);
        let vs: Vec<BoolVector> = pairs.into_iter().map(|p| p.1).collect();
        let want = run_stream(EngineSpec::Naive.build().unwrap().as_mut(), &m, &vs).unwrap();
        if let Some((t, _)) = vs.iter().zip(&want).enumerate().find(|(_, (v, o))| entrywise(&m, v) != **o) {
            failures.push(format!("naive differs from definition at {n1}x{n2} round {t}"));
        }
        let log = ceil_log2(n2).max(1);
        let specs = [
            "lookup:1".to_string(),
            "lookup:4".to_string(),
            "lookup:8".to_string(),
            format!("lookup:{log}"),
            format!("tiled:{},{}:naive", n1.min(16), n2.min(16)),
            format!("tiled:{},{}:naive", n1.min(7), n2.min(13)),
            format!("tiled:{},{}:lookup:4", n1.min(64), n2.min(40)),
            format!("tiled:{},{}:naive", n1, n2.min(3)),
            "majority:1:naive".to_string(),
            "majority:5:naive".to_string(),
        ];
        for spec in specs {
            let got = spec
                .parse::<EngineSpec>()
                .and_then(|s| run_stream(s.build()?.as_mut(), &m, &vs));
            match got {
                Ok(got) if got == want => {}
                Ok(_) => failures.push(format!("{spec} differs at {n1}x{n2}x{n3}")),
                Err(e) => failures.push(format!("{spec} at {n1}x{n2}x{n3}: {e}")),
            }
        }
    }
    let detail = format!(
        "{instances} instances up to {}x{}x{}, 11 engine configurations, {} mismatches{}",
        largest.0,
        largest.1,
        largest.2,
        failures.len(),
        failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
    );
    outcome(failures.is_empty(), detail)
}

fn criterion_3() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();
    let instances = 300;
    for k in 0..instances {
        let (n1, n2, n3) = (r.random_range(1..=64), r.random_range(1..=64), r.random_range(1..=6));
        let (m, pairs) = random_instance(&mut r, n1, n2, n3);
        let (u, v) = &pairs[0];
        let mut o = DirectOuMv::new();
        o.preprocess(&m).unwrap();
        let w = list_witnesses(&mut o, u, v).unwrap();
        let want: Vec<usize> = (0..n1).filter(|&i| u.get(i) && (0..n2).any(|j| m.get(i, j) && v.get(j))).collect();
        if w.indices.iter().copied().collect::<Vec<_>>() != want {
            failures.push(format!("instance {k}: witnesses {:?}, want {want:?}", w.indices));
        }
        let budget = 1 + want.len() * (2 * ceil_log2(n1) + 1);
        if o.queries_used() > budget {
            failures.push(format!("instance {k}: {} queries over budget {budget}", o.queries_used()));
        }
        let (k1, k2) = (r.random_range(1..=n1), r.random_range(1..=n2));
        let vs: Vec<BoolVector> = pairs.into_iter().map(|p| p.1).collect();
        let factory = || -> omv::Result<Box<dyn OuMvOracle>> { Ok(Box::new(DirectOuMv::new())) };
        let run = omv_via_oumv(&factory, &m, &vs, k1, k2).unwrap();
        for (t, (v, out)) in vs.iter().zip(&run.outputs).enumerate() {
            if *out != entrywise(&m, v) {
                failures.push(format!("instance {k}: omv_via_oumv round {t} differs (k1={k1}, k2={k2})"));
            }
        }
        let total: usize = run.witnesses_per_round.iter().sum();
        if total > n1 * n3 {
            failures.push(format!("instance {k}: {total} witnesses over n1*n3 = {}", n1 * n3));
        }
    }
    let detail = format!(
        "{instances} instances, {} failures{}",
        failures.len(),
        failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
    );
    outcome(failures.is_empty(), detail)
}

fn int(x: usize) -> Option<Rational> {
    Some(Rational::from_integer(x as i64))
}

fn criterion_4() -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    let mut checks = 0usize;
    let cfg = GadgetConfig::default();
    let mut r = ChaCha8Rng::seed_from_u64(4);
    for case in 0..60 {
        let (n1, n2, n3) = (r.random_range(1..=8), r.random_range(1..=8), r.random_range(1..=8));
        let (m, pairs) = random_instance(&mut r, n1, n2, n3);
        // (a) 3 versus 5
        for a in run_gadget(GadgetKind::StSp3v5, &m, &pairs, &cfg).unwrap().audit {
            checks += 1;
            if a.measured == int(4) || (a.expected && a.measured != int(3)) || (!a.expected && a.measured == int(3)) {
                failures.push(format!("(a) case {case} round {}: d = {:?}", a.round, a.measured));
            }
        }
        // (b) incremental showcase, t counted from 0
        for a in run_gadget(GadgetKind::IncrStSp, &m, &pairs, &cfg).unwrap().audit {
            checks += 1;
            let short = int(2 * (n3 - a.round) + 1);
            if a.expected != (a.measured == short) {
                failures.push(format!("(b) case {case} round {}: d = {:?}", a.round, a.measured));
            }
        }
        // (c) partial st-SP, t counted from 1
        for a in run_gadget(GadgetKind::PartialStSp, &m, &pairs, &cfg).unwrap().audit {
            checks += 1;
            let short = int(2 * (a.round + 1) + 1);
            if a.expected != (a.measured == short) {
                failures.push(format!("(c) case {case} round {}: d = {:?}", a.round, a.measured));
            }
        }
        // (d) diameter stages
        for a in run_gadget(GadgetKind::Diameter, &m, &pairs, &cfg).unwrap().audit {
            checks += 1;
            let ok = (a.measured == int(1) && !a.expected) || (a.measured == int(2) && a.expected);
            if !ok {
                failures.push(format!("(d) case {case} stage {:?}: diameter {:?}", a.target, a.measured));
            }
        }
    }
    // (e) single bit: k = 6, witness of k + 6 vertices and k + 7 edges
    let one = BoolMatrix::ones(1, 1);
    let pair = vec![(BoolVector::ones(1), BoolVector::ones(1))];
    let run = run_gadget(GadgetKind::Densest, &one, &pair, &cfg).unwrap();
    checks += 1;
    if run.derived("k") != Some(6) || run.audit[0].measured != Some(Rational::new(13, 12)) {
        failures.push(format!("(e) n=1 density {:?}", run.audit[0].measured));
    }
    let threshold = Rational::new(13, 12);
    for n in 1..=3usize {
        let all_pairs: Pairs = (0..1u32 << n)
            .flat_map(|a| (0..1u32 << n).map(move |b| (a, b)))
            .map(|(a, b)| {
                let bits = |x: u32| BoolVector::from_bits(&(0..n).map(|i| x >> i & 1 == 1).collect::<Vec<_>>());
                (bits(a), bits(b))
            })
            .collect();
        let matrices: Vec<BoolMatrix> = if n <= 2 {
            (0..1u32 << (n * n))
                .map(|x| {
                    let mut m = BoolMatrix::zeros(n, n);
                    for c in 0..n * n {
                        m.set(c / n, c % n, x >> c & 1 == 1);
                    }
                    m
                })
                .collect()
        } else {
            let mut v = vec![BoolMatrix::zeros(n, n), BoolMatrix::ones(n, n), BoolMatrix::identity(n)];
            v.extend((0..5).map(|_| random_instance(&mut r, n, n, 0).0));
            v
        };
        for m in &matrices {
            let run = run_gadget(GadgetKind::Densest, m, &all_pairs, &cfg).unwrap();
            let k = 6 * n as i64;
            if n == 1 && run.derived("k") != Some(6) {
                failures.push("(e) k != 6 at n = 1".into());
            }
            for a in &run.audit {
                checks += 1;
                let (u, v) = &all_pairs[a.round];
                let rho = a.measured.unwrap();
                let product = triple(u, m, v);
                let t = Rational::new(k + 7, k + 6);
                if (rho >= t) != product || (n == 1 && (rho >= threshold) != product) {
                    failures.push(format!("(e) n={n} round {}: density {rho}, product {product}", a.round));
                }
            }
        }
    }
    let detail = format!(
        "{checks} exact checks over (a)-(e), {} violations{}",
        failures.len(),
        failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
    );
    outcome(failures.is_empty(), detail)
}

fn criterion_5(d: &DecodeRuns) -> Outcome {
    let detail = format!(
        "used <= budget on every criterion-1 run, st-subconn 1 query per round, d-failure 1 batch per round: {} violations{}",
        d.budget_failures.len(),
        d.budget_failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
    );
    outcome(d.budget_failures.is_empty(), detail)
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let mut total = 0;
    for &(name, driver) in common::DRIVERS {
        let mut ops = 0;
        for seed in 0..2 {
            match driver(600 + seed, 2000) {
                Ok(done) => ops += done,
                Err(e) => failures.push(e),
            }
        }
        if ops < 2000 {
            failures.push(format!("{name}: {ops} operations"));
        }
        total += ops;
    }
    let graphs = match common::densest_exhaustive_sweep(200) {
        Ok(g) => g,
        Err(e) => {
            failures.push(e);
            0
        }
    };
    let detail = format!(
        "{} oracles, {total} scripted operations, ES level monotonicity, {graphs} exhaustive densest graphs; {} failures{}",
        common::DRIVERS.len(),
        failures.len(),
        failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
    );
    outcome(failures.is_empty(), detail)
}

fn criterion_7() -> Outcome {
    let c = Campaign {
        seed: 7,
        trials: 1,
        sizes: vec![(4096, 4096, 64)],
        targets: vec!["naive".parse().unwrap(), "lookup:8".parse().unwrap()],
        ..Default::default()
    };
    let rows = match harness::cmd_bench(&c) {
        Ok(rows) => rows,
        Err(e) => return outcome(false, format!("bench failed: {e}")),
    };
    let csv = harness::bench_csv(&rows).unwrap();
    let summary = harness::cmd_report(&csv).unwrap();
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let _ = fs::write(dir.join("perf-smoke.csv"), &csv);
    let _ = fs::write(dir.join("perf-smoke-summary.txt"), &summary);
    let ratio = rows[1].total_ns as f64 / rows[0].total_ns.max(1) as f64;
    outcome(
        ratio < 0.75,
        format!(
            "lookup:8 / naive total per-vector time = {ratio:.3} at 4096x4096x64 (naive {} ns, lookup {} ns, table {} bytes); report-only, CSV in {}",
            rows[0].total_ns,
            rows[1].total_ns,
            rows[1].table_bytes,
            dir.join("perf-smoke.csv").display()
        ),
    )
}

fn criterion_8() -> Outcome {
    let base = Campaign {
        seed: 8,
        trials: 2,
        sizes: vec![(3, 4, 2), (5, 2, 3)],
        targets: harness::parse_targets("gadgets,naive,lookup:3").unwrap(),
        ..Default::default()
    };
    let first = harness::cmd_verify(&base).unwrap().to_text();
    let second = harness::cmd_verify(&base).unwrap().to_text();
    let identical = first == second && first.ends_with("status=pass\n");

    let faulty = Campaign {
        seed: 80,
        trials: 2,
        sizes: vec![(3, 3, 2), (4, 2, 1)],
        targets: GadgetKind::ALL.map(Target::Gadget).to_vec(),
        inject_faults: true,
        ..Default::default()
    };
    let report = harness::cmd_verify(&faulty).unwrap();
    let injected: usize = report.summaries.iter().map(|s| s.faults_injected).sum();
    let detected: usize = report.summaries.iter().map(|s| s.faults_detected).sum();
    outcome(
        identical && injected >= 50 && detected == injected,
        format!(
            "verify reports identical: {identical} ({} bytes); faults detected {detected}/{injected}",
            first.len()
        ),
    )
}

fn main() -> ExitCode {
    let mut gating_failed = false;
    let mut report = |n: usize, name: &str, gating: bool, start: Instant, o: Outcome| {
        let verdict = if o.pass { "PASS" } else if gating { "FAIL" } else { "MISS" };
        println!(
            "criterion {n} {name}: {verdict} [{:.1}s] {}",
            start.elapsed().as_secs_f64(),
            o.detail
        );
        gating_failed |= gating && !o.pass;
    };
    let start = Instant::now();
    let decode = decode_campaign();
    report(1, "decode-equivalence", true, start, criterion_1(&decode));
    let start = Instant::now();
    report(2, "engine-equivalence", true, start, criterion_2());
    let start = Instant::now();
    report(3, "witness-machinery", true, start, criterion_3());
    let start = Instant::now();
    report(4, "exact-identities", true, start, criterion_4());
    report(5, "budget-compliance", true, Instant::now(), criterion_5(&decode));
    let start = Instant::now();
    report(6, "oracle-soundness", true, start, criterion_6());
    let start = Instant::now();
    report(7, "perf-smoke", false, start, criterion_7());
    let start = Instant::now();
    report(8, "determinism-and-faults", true, start, criterion_8());
    if gating_failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
