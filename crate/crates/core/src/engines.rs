//! Online matrix-vector engines: preprocess `M` once, then answer `Mv` for a
//! stream of vectors.
//!
//! Engines are selected by name in the harness:
//!
//! | spec string            | engine                                        |
//! |------------------------|-----------------------------------------------|
//! | `naive`                | row-wise word AND                             |
//! | `lookup` / `lookup:b`  | column groups of `b` bits with OR tables      |
//! | `tiled:k1,k2:inner`    | `k1 x k2` blocks, one inner engine per block  |
//! | `majority:r:inner`     | entrywise majority over `r` repetitions       |
//! | `noisy:p/q:seed:inner` | flips each output bit with probability `p/q`  |

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitcore::{mat_vec, or_accumulate, tile_starts, BoolMatrix, BoolVector};
use crate::ratio::{parse_rational, Rational};
use crate::{Error, Result};

/// Largest accepted lookup group width.
pub const MAX_GROUP_BITS: u32 = 24;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub preprocess_elapsed: Duration,
    pub per_vector_elapsed: Vec<Duration>,
    pub table_bytes: usize,
}

impl EngineStats {
    pub fn total_query_elapsed(&self) -> Duration {
        self.per_vector_elapsed.iter().sum()
    }
}

pub trait OmvEngine {
    fn preprocess(&mut self, m: &BoolMatrix) -> Result<()>;

    fn next(&mut self, v: &BoolVector) -> Result<BoolVector>;

    fn stats(&self) -> &EngineStats;

    /// Returns the engine to the state right after `preprocess`.
    fn reset_to_preprocessed(&mut self);

    fn name(&self) -> String;
}

fn not_preprocessed() -> Error {
    Error::Rejected("engine used before preprocess".into())
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, Duration)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed()))
}

#[derive(Default)]
pub struct NaiveEngine {
    matrix: Option<BoolMatrix>,
    stats: EngineStats,
}

impl NaiveEngine {
    pub fn new() -> Self {
        Self::default()
    }
}

impl OmvEngine for NaiveEngine {
    fn preprocess(&mut self, m: &BoolMatrix) -> Result<()> {
        let start = Instant::now();
        self.matrix = Some(m.clone());
        self.stats = EngineStats {
            preprocess_elapsed: start.elapsed(),
            ..Default::default()
        };
        Ok(())
    }

    fn next(&mut self, v: &BoolVector) -> Result<BoolVector> {
        let m = self.matrix.as_ref().ok_or_else(not_preprocessed)?;
        let (out, dt) = timed(|| mat_vec(m, v))?;
        self.stats.per_vector_elapsed.push(dt);
        Ok(out)
    }

    fn stats(&self) -> &EngineStats {
        &self.stats
    }

    fn reset_to_preprocessed(&mut self) {
        self.stats.per_vector_elapsed.clear();
    }

    fn name(&self) -> String {
        "naive".into()
    }
}

/// Group-of-columns lookup ("four Russians"): columns are cut into groups of
/// `b` consecutive indices, and for every group all `2^b` ORs of its columns
/// are tabulated as packed column vectors of length `n1`.
pub struct LookupEngine {
    group_bits: u32,
    n1: usize,
    n2: usize,
    words_per_entry: usize,
    /// `tables[g]` holds `2^b` entries of `words_per_entry` words each.
    tables: Vec<Vec<u64>>,
    ready: bool,
    stats: EngineStats,
}

impl LookupEngine {
    pub fn new(group_bits: u32) -> Result<Self> {
        if !(1..=MAX_GROUP_BITS).contains(&group_bits) {
            return Err(Error::InvalidParameter(format!(
                "lookup group bits {group_bits} outside 1..={MAX_GROUP_BITS}"
            )));
        }
        Ok(LookupEngine {
            group_bits,
            n1: 0,
            n2: 0,
            words_per_entry: 0,
            tables: Vec::new(),
            ready: false,
            stats: EngineStats::default(),
        })
    }

    /// `max(1, ceil(log2 n2))`, capped at 16.
    pub fn default_group_bits(n2: usize) -> u32 {
        let bits = usize::BITS - n2.saturating_sub(1).leading_zeros();
        bits.clamp(1, 16)
    }

    pub fn group_bits(&self) -> u32 {
        self.group_bits
    }

    fn group_count(&self) -> usize {
        self.n2.div_ceil(self.group_bits as usize)
    }
}

impl OmvEngine for LookupEngine {
    fn preprocess(&mut self, m: &BoolMatrix) -> Result<()> {
        let start = Instant::now();
        self.n1 = m.n1();
        self.n2 = m.n2();
        self.words_per_entry = m.n1().div_ceil(64);
        let b = self.group_bits as usize;
        let entries = 1usize << b;
        let per_table = entries
            .checked_mul(self.words_per_entry)
            .ok_or_else(|| Error::Resource("lookup table size overflows".into()))?;
        let columns: Vec<BoolVector> = (0..m.n2()).map(|j| m.column(j)).collect();
        let mut tables = Vec::new();
        tables
            .try_reserve_exact(self.group_count())
            .map_err(|e| Error::Resource(e.to_string()))?;
        for g in 0..self.group_count() {
            let mut table: Vec<u64> = Vec::new();
            table
                .try_reserve_exact(per_table)
                .map_err(|e| Error::Resource(format!("lookup table allocation: {e}")))?;
            table.resize(per_table, 0);
            let w = self.words_per_entry;
            for mask in 1..entries {
                let low = mask.trailing_zeros() as usize;
                let col = g * b + low;
                let prev = (mask & (mask - 1)) * w;
                let cur = mask * w;
                if col < columns.len() {
                    let cw = columns[col].words();
                    for k in 0..w {
                        table[cur + k] = table[prev + k] | cw[k];
                    }
                } else {
                    table.copy_within(prev..prev + w, cur);
                }
            }
            tables.push(table);
        }
        self.tables = tables;
        self.ready = true;
        self.stats = EngineStats {
            preprocess_elapsed: start.elapsed(),
            per_vector_elapsed: Vec::new(),
            table_bytes: self.tables.iter().map(|t| t.len() * 8).sum(),
        };
        Ok(())
    }

    fn next(&mut self, v: &BoolVector) -> Result<BoolVector> {
        if !self.ready {
            return Err(not_preprocessed());
        }
        if v.len() != self.n2 {
            return Err(Error::dim("lookup vector length", self.n2, v.len()));
        }
        let start = Instant::now();
        let b = self.group_bits as usize;
        let w = self.words_per_entry;
        let vw = v.words();
        let mut acc = vec![0u64; w];
        let tail = match self.n1 % 64 {
            0 => u64::MAX,
            r => (1u64 << r) - 1,
        };
        for (g, table) in self.tables.iter().enumerate() {
            let bit = g * b;
            let mask = extract_bits(vw, bit, b);
            if mask == 0 {
                continue;
            }
            let entry = &table[mask * w..(mask + 1) * w];
            for (a, e) in acc.iter_mut().zip(entry) {
                *a |= e;
            }
            // every row already has a witness column; OR cannot change it
            if let Some((last, rest)) = acc.split_last() {
                if *last == tail && rest.iter().all(|&a| a == u64::MAX) {
                    break;
                }
            }
        }
        let out = BoolVector::from_words(self.n1, acc)?;
        self.stats.per_vector_elapsed.push(start.elapsed());
        Ok(out)
    }

    fn stats(&self) -> &EngineStats {
        &self.stats
    }

    fn reset_to_preprocessed(&mut self) {
        self.stats.per_vector_elapsed.clear();
    }

    fn name(&self) -> String {
        format!("lookup:{}", self.group_bits)
    }
}

/// Bits `start..start+width` of a packed word slice as an integer. Bits past
/// the end read as zero.
fn extract_bits(words: &[u64], start: usize, width: usize) -> usize {
    let wi = start / 64;
    let off = start % 64;
    let mut value = words.get(wi).copied().unwrap_or(0) >> off;
    if off + width > 64 {
        value |= words.get(wi + 1).copied().unwrap_or(0) << (64 - off);
    }
    (value & ((1u64 << width) - 1)) as usize
}

pub type EngineFactory = Box<dyn Fn() -> Result<Box<dyn OmvEngine>>>;

/// Cuts `M` into `k1 x k2` blocks (boundary blocks overlap their neighbours),
/// serves every block with its own inner engine and ORs the block products
/// per row block.
pub struct TiledEngine {
    k1: usize,
    k2: usize,
    factory: EngineFactory,
    inner_name: String,
    row_starts: Vec<usize>,
    col_starts: Vec<usize>,
    /// `blocks[x][y]`
    blocks: Vec<Vec<Box<dyn OmvEngine>>>,
    n1: usize,
    n2: usize,
    stats: EngineStats,
}

impl TiledEngine {
    pub fn new(k1: usize, k2: usize, inner_name: impl Into<String>, factory: EngineFactory) -> Result<Self> {
        if k1 == 0 || k2 == 0 {
            return Err(Error::InvalidParameter("tile sizes must be positive".into()));
        }
        Ok(TiledEngine {
            k1,
            k2,
            factory,
            inner_name: inner_name.into(),
            row_starts: Vec::new(),
            col_starts: Vec::new(),
            blocks: Vec::new(),
            n1: 0,
            n2: 0,
            stats: EngineStats::default(),
        })
    }

    pub fn block_count(&self) -> usize {
        self.row_starts.len() * self.col_starts.len()
    }
}

impl OmvEngine for TiledEngine {
    fn preprocess(&mut self, m: &BoolMatrix) -> Result<()> {
        let start = Instant::now();
        self.row_starts = tile_starts(m.n1(), self.k1)?;
        self.col_starts = tile_starts(m.n2(), self.k2)?;
        self.n1 = m.n1();
        self.n2 = m.n2();
        let mut blocks = Vec::with_capacity(self.row_starts.len());
        let mut table_bytes = 0;
        for &r in &self.row_starts {
            let mut row = Vec::with_capacity(self.col_starts.len());
            for &c in &self.col_starts {
                let mut inner = (self.factory)()?;
                inner.preprocess(&m.block(r..r + self.k1, c..c + self.k2)?)?;
                table_bytes += inner.stats().table_bytes;
                row.push(inner);
            }
            blocks.push(row);
        }
        self.blocks = blocks;
        self.stats = EngineStats {
            preprocess_elapsed: start.elapsed(),
            per_vector_elapsed: Vec::new(),
            table_bytes,
        };
        Ok(())
    }

    fn next(&mut self, v: &BoolVector) -> Result<BoolVector> {
        if self.blocks.is_empty() {
            return Err(not_preprocessed());
        }
        if v.len() != self.n2 {
            return Err(Error::dim("tiled vector length", self.n2, v.len()));
        }
        let start = Instant::now();
        let pieces = self
            .col_starts
            .iter()
            .map(|&c| v.slice(c..c + self.k2))
            .collect::<Result<Vec<_>>>()?;
        let mut out = BoolVector::zeros(self.n1);
        for (x, &r) in self.row_starts.iter().enumerate() {
            let mut acc = BoolVector::zeros(self.k1);
            for (y, piece) in pieces.iter().enumerate() {
                or_accumulate(&mut acc, &self.blocks[x][y].next(piece)?)?;
            }
            for i in acc.iter_ones() {
                out.set(r + i, true);
            }
        }
        self.stats.per_vector_elapsed.push(start.elapsed());
        Ok(out)
    }

    fn stats(&self) -> &EngineStats {
        &self.stats
    }

    fn reset_to_preprocessed(&mut self) {
        for inner in self.blocks.iter_mut().flatten() {
            inner.reset_to_preprocessed();
        }
        self.stats.per_vector_elapsed.clear();
    }

    fn name(&self) -> String {
        format!("tiled:{},{}:{}", self.k1, self.k2, self.inner_name)
    }
}

/// Recomputes each product `r` times and keeps the entrywise majority.
pub struct MajorityEngine {
    repetitions: usize,
    inner: Box<dyn OmvEngine>,
    stats: EngineStats,
}

impl MajorityEngine {
    pub fn new(repetitions: usize, inner: Box<dyn OmvEngine>) -> Result<Self> {
        if repetitions == 0 || repetitions.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "majority repetitions must be odd and positive, got {repetitions}"
            )));
        }
        Ok(MajorityEngine {
            repetitions,
            inner,
            stats: EngineStats::default(),
        })
    }
}

impl OmvEngine for MajorityEngine {
    fn preprocess(&mut self, m: &BoolMatrix) -> Result<()> {
        let start = Instant::now();
        self.inner.preprocess(m)?;
        self.stats = EngineStats {
            preprocess_elapsed: start.elapsed(),
            per_vector_elapsed: Vec::new(),
            table_bytes: self.inner.stats().table_bytes,
        };
        Ok(())
    }

    fn next(&mut self, v: &BoolVector) -> Result<BoolVector> {
        let start = Instant::now();
        let mut votes: Vec<usize> = Vec::new();
        for _ in 0..self.repetitions {
            let out = self.inner.next(v)?;
            if votes.is_empty() {
                votes = vec![0; out.len()];
            }
            for i in out.iter_ones() {
                votes[i] += 1;
            }
        }
        let out = BoolVector::from_bits(
            &votes
                .iter()
                .map(|&c| 2 * c > self.repetitions)
                .collect::<Vec<_>>(),
        );
        self.stats.per_vector_elapsed.push(start.elapsed());
        Ok(out)
    }

    fn stats(&self) -> &EngineStats {
        &self.stats
    }

    fn reset_to_preprocessed(&mut self) {
        self.inner.reset_to_preprocessed();
        self.stats.per_vector_elapsed.clear();
    }

    fn name(&self) -> String {
        format!("majority:{}:{}", self.repetitions, self.inner.name())
    }
}

/// Fault-injecting wrapper: flips each output bit independently with a fixed
/// probability. Used to exercise [`MajorityEngine`].
pub struct NoisyEngine {
    flip: Rational,
    seed: u64,
    rng: ChaCha8Rng,
    inner: Box<dyn OmvEngine>,
}

impl NoisyEngine {
    pub fn new(flip: Rational, seed: u64, inner: Box<dyn OmvEngine>) -> Result<Self> {
        if flip < Rational::from_integer(0) || flip > Rational::from_integer(1) {
            return Err(Error::InvalidParameter(format!("flip probability {flip} not in [0,1]")));
        }
        Ok(NoisyEngine {
            flip,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            inner,
        })
    }
}

impl OmvEngine for NoisyEngine {
    fn preprocess(&mut self, m: &BoolMatrix) -> Result<()> {
        self.rng = ChaCha8Rng::seed_from_u64(self.seed);
        self.inner.preprocess(m)
    }

    fn next(&mut self, v: &BoolVector) -> Result<BoolVector> {
        let mut out = self.inner.next(v)?;
        let num = *self.flip.numer() as u32;
        let den = *self.flip.denom() as u32;
        for i in 0..out.len() {
            if num > 0 && self.rng.random_ratio(num, den) {
                let bit = out.get(i);
                out.set(i, !bit);
            }
        }
        Ok(out)
    }

    fn stats(&self) -> &EngineStats {
        self.inner.stats()
    }

    fn reset_to_preprocessed(&mut self) {
        self.rng = ChaCha8Rng::seed_from_u64(self.seed);
        self.inner.reset_to_preprocessed();
    }

    fn name(&self) -> String {
        format!("noisy:{}:{}:{}", self.flip, self.seed, self.inner.name())
    }
}

/// Parsed engine selection string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineSpec {
    Naive,
    /// `None` picks [`LookupEngine::default_group_bits`] at preprocessing time.
    Lookup(Option<u32>),
    Tiled {
        k1: usize,
        k2: usize,
        inner: Box<EngineSpec>,
    },
    Majority {
        repetitions: usize,
        inner: Box<EngineSpec>,
    },
    Noisy {
        flip: Rational,
        seed: u64,
        inner: Box<EngineSpec>,
    },
}

impl EngineSpec {
    pub fn build(&self) -> Result<Box<dyn OmvEngine>> {
        Ok(match self {
            EngineSpec::Naive => Box::new(NaiveEngine::new()),
            EngineSpec::Lookup(Some(b)) => Box::new(LookupEngine::new(*b)?),
            EngineSpec::Lookup(None) => Box::new(AutoLookup::default()),
            EngineSpec::Tiled { k1, k2, inner } => {
                let spec = (**inner).clone();
                Box::new(TiledEngine::new(
                    *k1,
                    *k2,
                    spec.to_string(),
                    Box::new(move || spec.build()),
                )?)
            }
            EngineSpec::Majority { repetitions, inner } => {
                Box::new(MajorityEngine::new(*repetitions, inner.build()?)?)
            }
            EngineSpec::Noisy { flip, seed, inner } => {
                Box::new(NoisyEngine::new(*flip, *seed, inner.build()?)?)
            }
        })
    }
}

impl FromStr for EngineSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown engine `{s}`"));
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        match head {
            "naive" if rest.is_empty() => Ok(EngineSpec::Naive),
            "lookup" if rest.is_empty() => Ok(EngineSpec::Lookup(None)),
            "lookup" => Ok(EngineSpec::Lookup(Some(rest.parse().map_err(|_| bad())?))),
            "tiled" => {
                let (shape, inner) = rest.split_once(':').ok_or_else(bad)?;
                let (k1, k2) = shape.split_once(',').ok_or_else(bad)?;
                Ok(EngineSpec::Tiled {
                    k1: k1.trim().parse().map_err(|_| bad())?,
                    k2: k2.trim().parse().map_err(|_| bad())?,
                    inner: Box::new(inner.parse()?),
                })
            }
            "majority" => {
                let (r, inner) = rest.split_once(':').ok_or_else(bad)?;
                Ok(EngineSpec::Majority {
                    repetitions: r.parse().map_err(|_| bad())?,
                    inner: Box::new(inner.parse()?),
                })
            }
            "noisy" => {
                let (p, rest) = rest.split_once(':').ok_or_else(bad)?;
                let (seed, inner) = rest.split_once(':').ok_or_else(bad)?;
                Ok(EngineSpec::Noisy {
                    flip: parse_rational(p)?,
                    seed: seed.parse().map_err(|_| bad())?,
                    inner: Box::new(inner.parse()?),
                })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for EngineSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineSpec::Naive => write!(f, "naive"),
            EngineSpec::Lookup(None) => write!(f, "lookup"),
            EngineSpec::Lookup(Some(b)) => write!(f, "lookup:{b}"),
            EngineSpec::Tiled { k1, k2, inner } => write!(f, "tiled:{k1},{k2}:{inner}"),
            EngineSpec::Majority { repetitions, inner } => write!(f, "majority:{repetitions}:{inner}"),
            EngineSpec::Noisy { flip, seed, inner } => write!(f, "noisy:{flip}:{seed}:{inner}"),
        }
    }
}

/// Lookup engine whose group width is chosen from `n2` at preprocessing time.
#[derive(Default)]
struct AutoLookup {
    inner: Option<LookupEngine>,
    empty: EngineStats,
}

impl OmvEngine for AutoLookup {
    fn preprocess(&mut self, m: &BoolMatrix) -> Result<()> {
        let mut engine = LookupEngine::new(LookupEngine::default_group_bits(m.n2()))?;
        engine.preprocess(m)?;
        self.inner = Some(engine);
        Ok(())
    }

    fn next(&mut self, v: &BoolVector) -> Result<BoolVector> {
        self.inner.as_mut().ok_or_else(not_preprocessed)?.next(v)
    }

    fn stats(&self) -> &EngineStats {
        self.inner.as_ref().map_or(&self.empty, |e| e.stats())
    }

    fn reset_to_preprocessed(&mut self) {
        if let Some(e) = self.inner.as_mut() {
            e.reset_to_preprocessed();
        }
    }

    fn name(&self) -> String {
        "lookup".into()
    }
}

/// Preprocesses `m` with `engine` and answers every vector of `stream`.
pub fn run_stream(engine: &mut dyn OmvEngine, m: &BoolMatrix, stream: &[BoolVector]) -> Result<Vec<BoolVector>> {
    engine.preprocess(m)?;
    stream.iter().map(|v| engine.next(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_instance(seed: u64, n1: usize, n2: usize, count: usize) -> (BoolMatrix, Vec<BoolVector>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let half = Rational::new(1, 2);
        let m = BoolMatrix::random(&mut rng, n1, n2, half);
        let vs = (0..count).map(|_| BoolVector::random(&mut rng, n2, half)).collect();
        (m, vs)
    }

    fn entrywise(m: &BoolMatrix, v: &BoolVector) -> BoolVector {
        BoolVector::from_bits(
            &(0..m.n1())
                .map(|i| (0..m.n2()).any(|j| m.get(i, j) && v.get(j)))
                .collect::<Vec<_>>(),
        )
    }

    fn outputs(spec: &str, m: &BoolMatrix, vs: &[BoolVector]) -> Vec<BoolVector> {
        let mut e = spec.parse::<EngineSpec>().unwrap().build().unwrap();
        run_stream(e.as_mut(), m, vs).unwrap()
    }

    #[test]
    fn naive_identity_stream() {
        let id = BoolMatrix::identity(4);
        let stream = vec![BoolVector::unit(4, 0), BoolVector::unit(4, 1)];
        assert_eq!(outputs("naive", &id, &stream), stream);
        let z = BoolMatrix::zeros(4, 4);
        assert!(outputs("naive", &z, &stream).iter().all(|o| !o.any()));
    }

    #[test]
    fn naive_matches_entrywise_oracle() {
        let (m, vs) = random_instance(2, 32, 32, 8);
        let out = outputs("naive", &m, &vs);
        for (v, o) in vs.iter().zip(&out) {
            assert_eq!(o, &entrywise(&m, v));
        }
    }

    #[test]
    fn lookup_group_widths() {
        let (m, vs) = random_instance(11, 16, 16, 6);
        let naive = outputs("naive", &m, &vs);
        assert_eq!(outputs("lookup:1", &m, &vs), naive);
        let id = BoolMatrix::identity(64);
        let stream: Vec<_> = (0..64).step_by(7).map(|i| BoolVector::unit(64, i)).collect();
        assert_eq!(outputs("lookup:8", &id, &stream), stream);
    }

    #[test]
    fn lookup_log_width_on_256() {
        let (m, vs) = random_instance(3, 256, 256, 64);
        let b = LookupEngine::default_group_bits(256);
        assert_eq!(b, 8);
        assert_eq!(outputs(&format!("lookup:{b}"), &m, &vs), outputs("naive", &m, &vs));
    }

    #[test]
    fn lookup_rejects_bad_width_and_bounds_table() {
        assert!(LookupEngine::new(0).is_err());
        assert!(LookupEngine::new(25).is_err());
        let (m, _) = random_instance(4, 70, 45, 0);
        let mut e = LookupEngine::new(6).unwrap();
        e.preprocess(&m).unwrap();
        let bound = 45usize.div_ceil(6) * (1 << 6) * 70usize.div_ceil(64) * 8;
        assert!(e.stats().table_bytes <= bound);
    }

    #[test]
    fn tiled_shapes() {
        let (m, vs) = random_instance(4, 10, 20, 10);
        let naive = outputs("naive", &m, &vs);
        assert_eq!(outputs("tiled:4,8:naive", &m, &vs), naive);
        assert_eq!(outputs("tiled:10,20:naive", &m, &vs), naive);
        let (m8, vs8) = random_instance(8, 8, 8, 5);
        assert_eq!(outputs("tiled:1,1:naive", &m8, &vs8), outputs("naive", &m8, &vs8));
        let mut e = "tiled:11,3:naive".parse::<EngineSpec>().unwrap().build().unwrap();
        assert!(e.preprocess(&m).is_err());
    }

    #[test]
    fn majority_wrapper() {
        assert!(MajorityEngine::new(2, Box::new(NaiveEngine::new())).is_err());
        assert!(MajorityEngine::new(0, Box::new(NaiveEngine::new())).is_err());
        let (m, vs) = random_instance(12, 16, 16, 8);
        let naive = outputs("naive", &m, &vs);
        assert_eq!(outputs("majority:1:naive", &m, &vs), naive);
        assert_eq!(outputs("majority:5:naive", &m, &vs), naive);
    }

    #[test]
    fn majority_suppresses_injected_faults() {
        // Per-bit failure with r = 9 and flip 1/5 is P[Bin(9, 1/5) >= 5] ~ 0.0196.
        let (m, _) = random_instance(21, 16, 16, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut e = "majority:9:noisy:1/5:7:naive".parse::<EngineSpec>().unwrap().build().unwrap();
        e.preprocess(&m).unwrap();
        let mut wrong = 0usize;
        let mut total = 0usize;
        for _ in 0..1000 {
            let v = BoolVector::random(&mut rng, 16, Rational::new(1, 2));
            let got = e.next(&v).unwrap();
            let want = mat_vec(&m, &v).unwrap();
            wrong += got.iter().zip(want.iter()).filter(|(a, b)| a != b).count();
            total += 16;
        }
        let rate = wrong as f64 / total as f64;
        assert!(rate < 0.05, "per-bit failure rate {rate}");
    }

    #[test]
    fn reset_replays_identically() {
        let (m, vs) = random_instance(5, 12, 12, 6);
        let mut e = "majority:3:noisy:1/4:3:naive".parse::<EngineSpec>().unwrap().build().unwrap();
        let first = run_stream(e.as_mut(), &m, &vs).unwrap();
        e.reset_to_preprocessed();
        let second: Vec<_> = vs.iter().map(|v| e.next(v).unwrap()).collect();
        assert_eq!(first, second);
        assert_eq!(e.stats().per_vector_elapsed.len(), vs.len());
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["naive", "lookup", "lookup:8", "tiled:4,8:lookup:3", "majority:5:tiled:2,2:naive"] {
            assert_eq!(s.parse::<EngineSpec>().unwrap().to_string(), s);
        }
        assert!("bogus".parse::<EngineSpec>().is_err());
        assert!("tiled:4:naive".parse::<EngineSpec>().is_err());
    }

    #[test]
    fn extract_bits_spans_words() {
        let words = [0xF000_0000_0000_0000u64, 0b1011];
        assert_eq!(extract_bits(&words, 60, 8), 0b1011_1111);
        assert_eq!(extract_bits(&words, 64, 3), 0b011);
        assert_eq!(extract_bits(&words, 126, 4), 0);
    }
}
