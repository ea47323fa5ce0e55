//! Recompute oracles written independently of the crate, plus the scripted
//! soundness drivers shared by the oracle and acceptance tests.
#![allow(dead_code)]

use omv::dynoracles::{
    ColorDistanceOracle, Counters, DFailureOracle, DensestOracle, DiameterOracle, DistanceOracle, DynGraph,
    EricksonOracle, EvenShiloachOracle, MatchingOracle, PaghOracle, SubConnOracle, TriangleOracle, ZeroPrefixOracle,
};
use omv::{BoolVector, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INF: usize = usize::MAX;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Adjacency matrix with optional 0/1 weights.
#[derive(Clone)]
pub struct Model {
    pub n: usize,
    pub directed: bool,
    pub w: Vec<Vec<Option<u8>>>,
}

impl Model {
    pub fn new(n: usize, directed: bool) -> Self {
        Model { n, directed, w: vec![vec![None; n]; n] }
    }

    pub fn set(&mut self, a: usize, b: usize, w: Option<u8>) {
        self.w[a][b] = w;
        if !self.directed {
            self.w[b][a] = w;
        }
    }

    pub fn has(&self, a: usize, b: usize) -> bool {
        self.w[a][b].is_some()
    }

    pub fn graph(&self) -> DynGraph {
        let mut g = if self.directed { DynGraph::directed(self.n) } else { DynGraph::undirected(self.n) };
        for a in 0..self.n {
            for b in 0..self.n {
                if let Some(w) = self.w[a][b] {
                    if self.directed || a < b {
                        g.insert_edge(a, b, w).unwrap();
                    }
                }
            }
        }
        g
    }

    /// Floyd–Warshall over the vertices with `alive[v]`, unit weights unless
    /// `weighted`.
    pub fn apsp(&self, alive: &[bool], weighted: bool) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut d = vec![vec![INF; n]; n];
        for a in 0..n {
            if !alive[a] {
                continue;
            }
            d[a][a] = 0;
            for b in 0..n {
                if let Some(w) = self.w[a][b] {
                    if alive[b] && a != b {
                        d[a][b] = d[a][b].min(if weighted { w as usize } else { 1 });
                    }
                }
            }
        }
        for k in 0..n {
            for a in 0..n {
                if d[a][k] == INF {
                    continue;
                }
                for b in 0..n {
                    if d[k][b] != INF && d[a][k] + d[k][b] < d[a][b] {
                        d[a][b] = d[a][k] + d[k][b];
                    }
                }
            }
        }
        d
    }

    pub fn all_alive(&self) -> Vec<bool> {
        vec![true; self.n]
    }

    pub fn edges_within(&self, mask: u32) -> usize {
        let mut e = 0;
        for a in 0..self.n {
            for b in a + 1..self.n {
                if mask >> a & 1 == 1 && mask >> b & 1 == 1 && self.has(a, b) {
                    e += 1;
                }
            }
        }
        e
    }

    /// Maximum density over all nonempty vertex subsets.
    pub fn densest_exhaustive(&self) -> Rational {
        (1u32..1 << self.n)
            .map(|mask| Rational::new(self.edges_within(mask) as i64, mask.count_ones() as i64))
            .max()
            .unwrap()
    }

    /// Kuhn's augmenting paths, left side = `left[v]`.
    pub fn matching(&self, left: &[bool]) -> usize {
        fn try_kuhn(m: &Model, v: usize, seen: &mut [bool], mate: &mut [Option<usize>]) -> bool {
            for w in 0..m.n {
                if m.has(v, w) && !seen[w] {
                    seen[w] = true;
                    if mate[w].is_none_or(|x| try_kuhn(m, x, seen, mate)) {
                        mate[w] = Some(v);
                        return true;
                    }
                }
            }
            false
        }
        let mut mate = vec![None; self.n];
        (0..self.n)
            .filter(|&v| left[v])
            .filter(|&v| try_kuhn(self, v, &mut vec![false; self.n], &mut mate))
            .count()
    }
}

fn opt(d: usize) -> Option<usize> {
    (d != INF).then_some(d)
}

fn pick_pair(r: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let a = r.random_range(0..n);
    let mut b = r.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

fn check_counters(name: &str, got: Counters, updates: usize, queries: usize) -> Result<(), String> {
    if got != (Counters { updates, queries }) {
        return Err(format!("{name}: counters {got:?}, expected updates={updates} queries={queries}"));
    }
    Ok(())
}

/// Each driver runs `ops` scripted operations and checks every answer.
/// Returns the number of operations executed.
pub type Driver = fn(u64, usize) -> Result<usize, String>;

pub const DRIVERS: &[(&str, Driver)] = &[
    ("subconn", subconn),
    ("distance", distance),
    ("reach", reach),
    ("triangle", triangle),
    ("color", color),
    ("d-failure", d_failure),
    ("diameter", diameter),
    ("even-shiloach", even_shiloach),
    ("matching", matching),
    ("densest", densest),
    ("pagh", pagh),
    ("zero-prefix", zero_prefix),
    ("erickson", erickson),
];

pub fn random_model(r: &mut ChaCha8Rng, n: usize, directed: bool, p: f64) -> Model {
    let mut m = Model::new(n, directed);
    for a in 0..n {
        for b in 0..n {
            if a != b && (directed || a < b) && r.random_bool(p.min(1.0)) {
                m.set(a, b, Some(1));
            }
        }
    }
    m
}

pub fn subconn(seed: u64, ops: usize) -> Result<usize, String> {
    let mut r = rng(seed);
    let n = r.random_range(2..=64);
    let model = random_model(&mut r, n, false, 3.0 / n as f64);
    let mut o = SubConnOracle::from_graph(model.graph());
    let mut alive = vec![true; n];
    let mut shadow: Vec<Vec<bool>> = Vec::new();
    let (mut up, mut q) = (0, 0);
    for step in 0..ops {
        match r.random_range(0..10) {
            0..=3 => {
                let v = r.random_range(0..n);
                alive[v] = !alive[v];
                if alive[v] { o.turn_on(v) } else { o.turn_off(v) }.map_err(|e| e.to_string())?;
                up += 1;
            }
            4 => {
                o.snapshot();
                shadow.push(alive.clone());
            }
            5 if !shadow.is_empty() => {
                o.rollback().map_err(|e| e.to_string())?;
                alive = shadow.pop().unwrap();
            }
            _ => {
                let (a, b) = (r.random_range(0..n), r.random_range(0..n));
                let want = model.apsp(&alive, false)[a][b] != INF;
                let got = o.connected(a, b).map_err(|e| e.to_string())?;
                q += 1;
                if got != want {
                    return Err(format!("subconn seed {seed} step {step}: connected({a},{b}) = {got}, want {want}"));
                }
            }
        }
    }
    check_counters("subconn", o.counters(), up, q)?;
    Ok(ops)
}

/// Toggles a random pair in `model`; returns `(a, b, inserted)`.
fn toggle(r: &mut ChaCha8Rng, model: &mut Model, weight: u8) -> (usize, usize, bool) {
    let (a, b) = pick_pair(r, model.n);
    let inserted = !model.has(a, b);
    model.set(a, b, inserted.then_some(weight));
    (a, b, inserted)
}

fn dist_driver(seed: u64, ops: usize, directed: bool) -> Result<usize, String> {
    let mut r = rng(seed);
    let n = r.random_range(2..=64);
    let mut model = random_model(&mut r, n, directed, 2.0 / n as f64);
    let mut o = DistanceOracle::from_graph(model.graph());
    let (mut up, mut q) = (0, 0);
    for step in 0..ops {
        if r.random_bool(0.6) {
            let (a, b, ins) = toggle(&mut r, &mut model, 1);
            if ins { o.insert_edge(a, b) } else { o.delete_edge(a, b) }.map_err(|e| e.to_string())?;
            up += 1;
        } else {
            let (a, b) = (r.random_range(0..n), r.random_range(0..n));
            let want = model.apsp(&model.all_alive(), false)[a][b];
            q += 1;
            if directed {
                let got = o.reach(a, b).map_err(|e| e.to_string())?;
                if got != (want != INF) {
                    return Err(format!("reach seed {seed} step {step}: ({a},{b}) = {got}"));
                }
            } else {
                let got = o.dist(a, b).map_err(|e| e.to_string())?;
                if got != opt(want) {
                    return Err(format!("distance seed {seed} step {step}: ({a},{b}) = {got:?}, want {:?}", opt(want)));
                }
            }
        }
    }
    check_counters("distance", o.counters(), up, q)?;
    Ok(ops)
}

pub fn distance(seed: u64, ops: usize) -> Result<usize, String> {
    dist_driver(seed, ops, false)
}

pub fn reach(seed: u64, ops: usize) -> Result<usize, String> {
    dist_driver(seed, ops, true)
}

pub fn triangle(seed: u64, ops: usize) -> Result<usize, String> {
    let mut r = rng(seed);
    let n = r.random_range(3..=64);
    let mut model = random_model(&mut r, n, false, 1.5 / n as f64);
    let mut o = TriangleOracle::from_graph(model.graph());
    let (mut up, mut q) = (0, 0);
    let tri_at = |m: &Model, v: usize| {
        (0..m.n).any(|a| (0..m.n).any(|b| a != b && m.has(v, a) && m.has(v, b) && m.has(a, b)))
    };
    for step in 0..ops {
        match r.random_range(0..5) {
            0..=2 => {
                let (a, b, ins) = toggle(&mut r, &mut model, 1);
                if ins { o.insert_edge(a, b) } else { o.delete_edge(a, b) }.map_err(|e| e.to_string())?;
                up += 1;
            }
            3 => {
                let v = r.random_range(0..n);
                let got = o.triangle_at(v).map_err(|e| e.to_string())?;
                q += 1;
                if got != tri_at(&model, v) {
                    return Err(format!("triangle seed {seed} step {step}: at {v} = {got}"));
                }
            }
            _ => {
                let got = o.any_triangle().map_err(|e| e.to_string())?;
                q += 1;
                if got != (0..n).any(|v| tri_at(&model, v)) {
                    return Err(format!("triangle seed {seed} step {step}: any = {got}"));
                }
            }
        }
    }
    check_counters("triangle", o.counters(), up, q)?;
    Ok(ops)
}

pub fn color(seed: u64, ops: usize) -> Result<usize, String> {
    let mut r = rng(seed);
    let n = r.random_range(2..=64);
    let model = random_model(&mut r, n, false, 2.5 / n as f64);
    let mut colors: Vec<usize> = (0..n).map(|_| r.random_range(0..4)).collect();
    let mut o = ColorDistanceOracle::new(model.graph(), colors.clone()).map_err(|e| e.to_string())?;
    let d = model.apsp(&model.all_alive(), false);
    let (mut up, mut q) = (0, 0);
    for step in 0..ops {
        if r.random_bool(0.5) {
            let (v, c) = (r.random_range(0..n), r.random_range(0..4));
            colors[v] = c;
            o.set_color(v, c).map_err(|e| e.to_string())?;
            up += 1;
        } else {
            let (v, c) = (r.random_range(0..n), r.random_range(0..4));
            let want = opt((0..n).filter(|&w| colors[w] == c).map(|w| d[v][w]).min().unwrap_or(INF));
            let got = o.color_distance(v, c).map_err(|e| e.to_string())?;
            q += 1;
            if got != want {
                return Err(format!("color seed {seed} step {step}: ({v},{c}) = {got:?}, want {want:?}"));
            }
        }
    }
    check_counters("color", o.counters(), up, q)?;
    Ok(ops)
}

pub fn d_failure(seed: u64, ops: usize) -> Result<usize, String> {
    let mut r = rng(seed);
    let n = r.random_range(2..=64);
    let model = random_model(&mut r, n, false, 3.0 / n as f64);
    let d = r.random_range(1..=n);
    let mut o = DFailureOracle::new(model.graph(), d);
    let mut alive = vec![true; n];
    let (mut up, mut q) = (0, 0);
    for step in 0..ops {
        if r.random_bool(0.3) {
            let k = r.random_range(0..=d + 1);
            let batch: Vec<usize> = (0..k).map(|_| r.random_range(0..n)).collect();
            let res = o.fail_batch(&batch);
            if k > d {
                if res.is_ok() {
                    return Err(format!("d-failure seed {seed} step {step}: oversized batch accepted"));
                }
                continue;
            }
            res.map_err(|e| e.to_string())?;
            alive = vec![true; n];
            for v in batch {
                alive[v] = false;
            }
            up += 1;
        } else {
            let (a, b) = (r.random_range(0..n), r.random_range(0..n));
            let want = model.apsp(&alive, false)[a][b] != INF;
            let got = o.connected(a, b).map_err(|e| e.to_string())?;
            q += 1;
            if got != want {
                return Err(format!("d-failure seed {seed} step {step}: ({a},{b}) = {got}"));
            }
        }
    }
    check_counters("d-failure", o.counters(), up, q)?;
    Ok(ops)
}

pub fn diameter(seed: u64, ops: usize) -> Result<usize, String> {
    let mut r = rng(seed);
    let n = r.random_range(2..=24);
    let mut model = Model::new(n, false);
    for v in 1..n {
        model.set(v - 1, v, Some(r.random_range(0..=1)));
    }
    let mut o = DiameterOracle::from_graph(model.graph());
    let (mut up, mut q) = (0, 0);
    for step in 0..ops {
        if r.random_bool(0.7) {
            let w = r.random_range(0..=1);
            let (a, b, ins) = toggle(&mut r, &mut model, w);
            if ins {
                o.insert_edge(a, b, w).map_err(|e| e.to_string())?;
            } else {
                o.delete_edge(a, b).map_err(|e| e.to_string())?;
            }
            up += 1;
        } else {
            let d = model.apsp(&model.all_alive(), true);
            let want = d.iter().flatten().try_fold(0, |acc, &x| opt(x).map(|x| acc.max(x)));
            let got = o.diameter().map_err(|e| e.to_string())?;
            q += 1;
            if got != want {
                return Err(format!("diameter seed {seed} step {step}: {got:?}, want {want:?}"));
            }
        }
    }
    check_counters("diameter", o.counters(), up, q)?;
    Ok(ops)
}

/// Deletions only; levels must match recomputed BFS and never decrease.
pub fn even_shiloach(seed: u64, ops: usize) -> Result<usize, String> {
    let mut r = rng(seed);
    let mut done = 0;
    let mut episode = 0;
    while done < ops {
        let n = r.random_range(2..=64);
        let mut model = random_model(&mut r, n, false, 4.0 / n as f64);
        let src = r.random_range(0..n);
        let mut o = EvenShiloachOracle::new(model.graph(), src).map_err(|e| e.to_string())?;
        if o.insert_edge(0, 1).is_ok() {
            return Err("even-shiloach accepted an insertion".into());
        }
        let mut prev = o.state().levels().to_vec();
        let mut edges: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| model.has(a, b)).collect();
        let (mut up, mut q) = (0, 0);
        while !edges.is_empty() && done < ops {
            let (a, b) = edges.swap_remove(r.random_range(0..edges.len()));
            model.set(a, b, None);
            o.delete_edge(a, b).map_err(|e| e.to_string())?;
            up += 1;
            done += 1;
            let levels = o.state().levels().to_vec();
            if let Some(v) = (0..n).find(|&v| levels[v] < prev[v]) {
                return Err(format!("even-shiloach seed {seed} episode {episode}: level of {v} decreased"));
            }
            prev = levels;
            let d = model.apsp(&model.all_alive(), false);
            for (v, &want) in d[src].iter().enumerate() {
                let got = o.dist(v).map_err(|e| e.to_string())?;
                q += 1;
                if got != opt(want) {
                    return Err(format!(
                        "even-shiloach seed {seed} episode {episode}: dist({v}) = {got:?}, want {:?}",
                        opt(want)
                    ));
                }
            }
        }
        check_counters("even-shiloach", o.counters(), up, q)?;
        episode += 1;
    }
    Ok(done)
}

pub fn matching(seed: u64, ops: usize) -> Result<usize, String> {
    let mut r = rng(seed);
    let n = r.random_range(2..=64);
    let left: Vec<bool> = (0..n).map(|v| v % 2 == 0).collect();
    let mut model = Model::new(n, false);
    let mut o = MatchingOracle::new(model.graph(), left.clone()).map_err(|e| e.to_string())?;
    let (mut up, mut q) = (0, 0);
    for step in 0..ops {
        if r.random_bool(0.6) {
            let a = 2 * r.random_range(0..n.div_ceil(2));
            let b = 2 * r.random_range(0..n / 2) + 1;
            let ins = !model.has(a, b);
            model.set(a, b, ins.then_some(1));
            if ins { o.insert_edge(a, b) } else { o.delete_edge(a, b) }.map_err(|e| e.to_string())?;
            up += 1;
        } else {
            let got = o.matching_size().map_err(|e| e.to_string())?;
            q += 1;
            if got != model.matching(&left) {
                return Err(format!("matching seed {seed} step {step}: {got}, want {}", model.matching(&left)));
            }
        }
    }
    if o.insert_edge(0, 2).is_ok() {
        return Err("matching accepted an edge inside one side".into());
    }
    check_counters("matching", o.counters(), up, q)?;
    Ok(ops)
}

pub fn densest(seed: u64, ops: usize) -> Result<usize, String> {
    let mut r = rng(seed);
    let n = r.random_range(2..=10);
    let mut model = random_model(&mut r, n, false, 0.3);
    let mut o = DensestOracle::from_graph(model.graph());
    let (mut up, mut q) = (0, 0);
    for step in 0..ops {
        if r.random_bool(0.6) {
            let (a, b, ins) = toggle(&mut r, &mut model, 1);
            if ins { o.insert_edge(a, b) } else { o.delete_edge(a, b) }.map_err(|e| e.to_string())?;
            up += 1;
        } else {
            let (rho, set) = o.densest().map_err(|e| e.to_string())?;
            q += 1;
            let mask = set.iter().fold(0u32, |m, &v| m | 1 << v);
            let witness = Rational::new(model.edges_within(mask) as i64, set.len() as i64);
            let want = model.densest_exhaustive();
            if rho != want || witness != want {
                return Err(format!("densest seed {seed} step {step}: {rho} (witness {witness}), want {want}"));
            }
        }
    }
    check_counters("densest", o.counters(), up, q)?;
    Ok(ops)
}

pub fn pagh(seed: u64, ops: usize) -> Result<usize, String> {
    let mut r = rng(seed);
    let universe = r.random_range(1..=64);
    let mut sets: Vec<Vec<bool>> = (0..r.random_range(2..8))
        .map(|_| (0..universe).map(|_| r.random_bool(0.7)).collect())
        .collect();
    let vecs = sets.iter().map(|s| BoolVector::from_bits(s)).collect();
    let mut o = PaghOracle::new(universe, vecs).map_err(|e| e.to_string())?;
    let (mut up, mut q) = (0, 0);
    for step in 0..ops {
        if r.random_bool(0.3) {
            let (i, j) = (r.random_range(0..sets.len()), r.random_range(0..sets.len()));
            let k = o.insert_intersection(i, j).map_err(|e| e.to_string())?;
            let both = (0..universe).map(|e| sets[i][e] && sets[j][e]).collect();
            sets.push(both);
            up += 1;
            if k != sets.len() - 1 {
                return Err(format!("pagh seed {seed} step {step}: new index {k}"));
            }
        } else {
            let (i, e) = (r.random_range(0..sets.len()), r.random_range(0..universe));
            let got = o.member(i, e).map_err(|e| e.to_string())?;
            q += 1;
            if got != sets[i][e] {
                return Err(format!("pagh seed {seed} step {step}: member({i},{e}) = {got}"));
            }
        }
    }
    check_counters("pagh", o.counters(), up, q)?;
    Ok(ops)
}

pub fn zero_prefix(seed: u64, ops: usize) -> Result<usize, String> {
    let mut r = rng(seed);
    let n = r.random_range(1..=64);
    let mut a: Vec<i64> = (0..n).map(|_| r.random_range(-3..=3)).collect();
    let mut o = ZeroPrefixOracle::new(a.clone());
    let (mut up, mut q) = (0, 0);
    for step in 0..ops {
        if r.random_bool(0.5) {
            let (i, x) = (r.random_range(0..n), r.random_range(-3..=3));
            a[i] = x;
            o.set(i, x).map_err(|e| e.to_string())?;
            up += 1;
        } else {
            let want = (1..=n).find(|&k| a[..k].iter().sum::<i64>() == 0);
            let got = o.has_zero_prefix().map_err(|e| e.to_string())?;
            q += 1;
            if got != want {
                return Err(format!("zero-prefix seed {seed} step {step}: {got:?}, want {want:?}"));
            }
        }
    }
    check_counters("zero-prefix", o.counters(), up, q)?;
    Ok(ops)
}

pub fn erickson(seed: u64, ops: usize) -> Result<usize, String> {
    let mut r = rng(seed);
    let (rows, cols) = (r.random_range(1..=8), r.random_range(1..=8));
    let mut a: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| r.random_range(-20..20)).collect()).collect();
    let mut o = EricksonOracle::new(a.clone()).map_err(|e| e.to_string())?;
    let (mut up, mut q) = (0, 0);
    for step in 0..ops {
        match r.random_range(0..3) {
            0 => {
                let i = r.random_range(0..rows);
                a[i].iter_mut().for_each(|x| *x += 1);
                o.inc_row(i).map_err(|e| e.to_string())?;
                up += 1;
            }
            1 => {
                let j = r.random_range(0..cols);
                a.iter_mut().for_each(|row| row[j] += 1);
                o.inc_col(j).map_err(|e| e.to_string())?;
                up += 1;
            }
            _ => {
                let want = a.iter().flatten().copied().max();
                let got = o.max().map_err(|e| e.to_string())?;
                q += 1;
                if got != want {
                    return Err(format!("erickson seed {seed} step {step}: {got:?}, want {want:?}"));
                }
            }
        }
    }
    check_counters("erickson", o.counters(), up, q)?;
    Ok(ops)
}

/// Every graph on at most 7 vertices drawn from `seeds` seeds: the exact
/// densest value equals exhaustive enumeration. Returns graphs checked.
pub fn densest_exhaustive_sweep(seeds: u64) -> Result<usize, String> {
    let mut checked = 0;
    for seed in 0..seeds {
        let mut r = rng(seed ^ 0xd5);
        for n in 1..=7 {
            let p = r.random_range(0.1..0.9);
            let model = random_model(&mut r, n, false, p);
            let (rho, set) = omv::dynoracles::densest_subgraph_exact(&model.graph()).map_err(|e| e.to_string())?;
            let want = model.densest_exhaustive();
            let mask = set.iter().fold(0u32, |m, &v| m | 1 << v);
            let witness = Rational::new(model.edges_within(mask) as i64, set.len() as i64);
            if rho != want || witness != want {
                return Err(format!("densest seed {seed} n {n}: {rho}, want {want}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}
