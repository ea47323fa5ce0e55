//! Bit-packed Boolean vectors and matrices over the (OR, AND) semiring.
//!
//! Bits are packed little-endian into `u64` words. Every constructor and mutator
//! keeps the padding bits past `len` at zero, so equality, hashing and popcount
//! can work word-wise.

use std::fmt;
use std::ops::Range;

use rand::Rng;

use crate::ratio::{floor_pow, Rational};
use crate::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BoolVector {
    len: usize,
    words: Vec<u64>,
}

impl BoolVector {
    pub fn zeros(len: usize) -> Self {
        BoolVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BoolVector {
            len,
            words: vec![!0; words_for(len)],
        };
        v.clear_padding();
        v
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.words[i / WORD] |= 1 << (i % WORD);
            }
        }
        v
    }

    /// Builds a vector of length `len` with ones at `indices`.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v = Self::zeros(len);
        for i in indices {
            if i >= len {
                return Err(Error::OutOfRange {
                    context: "vector",
                    index: i,
                    size: len,
                });
            }
            v.set(i, true);
        }
        Ok(v)
    }

    pub fn from_words(len: usize, mut words: Vec<u64>) -> Result<Self> {
        if words.len() != words_for(len) {
            return Err(Error::dim("packed words", words_for(len), words.len()));
        }
        if let Some(last) = words.last_mut() {
            *last &= last_mask(len);
        }
        Ok(BoolVector { len, words })
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, len: usize, density: Rational) -> Self {
        let mut v = Self::zeros(len);
        let (num, den) = density_parts(density);
        for i in 0..len {
            if num >= den || (num > 0 && rng.random_ratio(num, den)) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn any(&self) -> bool {
        self.words.iter().any(|&w| w != 0)
    }

    pub fn all(&self) -> bool {
        self.count_ones() == self.len
    }

    /// Indices of set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + bit)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    /// True iff the supports of `self` and `other` intersect.
    pub fn intersects(&self, other: &BoolVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .any(|(a, b)| a & b != 0)
    }

    pub fn and(&self, other: &BoolVector) -> Result<BoolVector> {
        self.check_same_len(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Ok(BoolVector {
            len: self.len,
            words,
        })
    }

    pub fn or(&self, other: &BoolVector) -> Result<BoolVector> {
        let mut out = self.clone();
        or_accumulate(&mut out, other)?;
        Ok(out)
    }

    pub fn not(&self) -> BoolVector {
        let mut out = BoolVector {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.clear_padding();
        out
    }

    /// Copy of bits `range`.
    pub fn slice(&self, range: Range<usize>) -> Result<BoolVector> {
        if range.start > range.end || range.end > self.len {
            return Err(Error::OutOfRange {
                context: "vector slice",
                index: range.end,
                size: self.len,
            });
        }
        let mut out = BoolVector::zeros(range.len());
        for (k, i) in range.enumerate() {
            if self.get(i) {
                out.set(k, true);
            }
        }
        Ok(out)
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BoolVector) -> BoolVector {
        let mut out = BoolVector::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Zero-extends (or truncates) to `len` bits.
    pub fn resized(&self, len: usize) -> BoolVector {
        let mut out = BoolVector::zeros(len);
        for i in self.iter_ones().take_while(|&i| i < len) {
            out.set(i, true);
        }
        out
    }

    /// Parses one line of `0`/`1` characters.
    pub fn parse_line(line: &str) -> Result<BoolVector> {
        let line = line.trim_end_matches(['\r', '\n']);
        let mut v = BoolVector::zeros(line.len());
        for (i, c) in line.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(Error::parse(1, format!("unexpected character {other:?}"))),
            }
        }
        Ok(v)
    }

    pub fn to_line(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    pub(crate) fn check_same_len(&self, other: &BoolVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::dim("vector length", self.len, other.len));
        }
        Ok(())
    }

    fn clear_padding(&mut self) {
        let len = self.len;
        if let Some(last) = self.words.last_mut() {
            *last &= last_mask(len);
        }
    }
}

fn last_mask(len: usize) -> u64 {
    match len % WORD {
        0 => !0,
        r => (1u64 << r) - 1,
    }
}

fn density_parts(density: Rational) -> (u32, u32) {
    let num = (*density.numer()).max(0) as u32;
    let den = (*density.denom()).max(1) as u32;
    (num.min(den), den)
}

impl fmt::Debug for BoolVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolVector({})", self.to_line())
    }
}

impl fmt::Display for BoolVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// `dst <- dst OR src`.
pub fn or_accumulate(dst: &mut BoolVector, src: &BoolVector) -> Result<()> {
    dst.check_same_len(src)?;
    for (d, s) in dst.words.iter_mut().zip(&src.words) {
        *d |= s;
    }
    Ok(())
}

/// Row-major Boolean matrix of `n1` rows and `n2` columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    n1: usize,
    n2: usize,
    rows: Vec<BoolVector>,
}

impl BoolMatrix {
    pub fn zeros(n1: usize, n2: usize) -> Self {
        BoolMatrix {
            n1,
            n2,
            rows: vec![BoolVector::zeros(n2); n1],
        }
    }

    pub fn ones(n1: usize, n2: usize) -> Self {
        BoolMatrix {
            n1,
            n2,
            rows: vec![BoolVector::ones(n2); n1],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BoolVector>) -> Result<Self> {
        let n2 = rows.first().map_or(0, BoolVector::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n2) {
            return Err(Error::dim("matrix row length", n2, bad.len()));
        }
        Ok(BoolMatrix {
            n1: rows.len(),
            n2,
            rows,
        })
    }

    /// Rows given as `0`/`1` bit slices; handy in tests.
    pub fn from_bits(rows: &[&[u8]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| BoolVector::from_bits(&r.iter().map(|&b| b != 0).collect::<Vec<_>>()))
                .collect(),
        )
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, n1: usize, n2: usize, density: Rational) -> Self {
        BoolMatrix {
            n1,
            n2,
            rows: (0..n1).map(|_| BoolVector::random(rng, n2, density)).collect(),
        }
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn row(&self, i: usize) -> &BoolVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BoolVector] {
        &self.rows
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(BoolVector::count_ones).sum()
    }

    pub fn column(&self, j: usize) -> BoolVector {
        let mut c = BoolVector::zeros(self.n1);
        for i in 0..self.n1 {
            if self.get(i, j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn transpose(&self) -> BoolMatrix {
        let mut t = BoolMatrix::zeros(self.n2, self.n1);
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.iter_ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Entrywise complement.
    pub fn complement(&self) -> BoolMatrix {
        BoolMatrix {
            n1: self.n1,
            n2: self.n2,
            rows: self.rows.iter().map(BoolVector::not).collect(),
        }
    }

    /// Zero-pads to at least `n1 x n2`.
    pub fn padded(&self, n1: usize, n2: usize) -> BoolMatrix {
        let n1 = n1.max(self.n1);
        let n2 = n2.max(self.n2);
        let mut rows: Vec<BoolVector> = self.rows.iter().map(|r| r.resized(n2)).collect();
        rows.resize(n1, BoolVector::zeros(n2));
        BoolMatrix { n1, n2, rows }
    }

    /// Copy of the sub-matrix `rows x cols`.
    pub fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Result<BoolMatrix> {
        if rows.start > rows.end || rows.end > self.n1 {
            return Err(Error::OutOfRange {
                context: "block rows",
                index: rows.end,
                size: self.n1,
            });
        }
        if cols.start > cols.end || cols.end > self.n2 {
            return Err(Error::OutOfRange {
                context: "block columns",
                index: cols.end,
                size: self.n2,
            });
        }
        let width = cols.len();
        let rows = self.rows[rows]
            .iter()
            .map(|r| r.slice(cols.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(BoolMatrix {
            n1: rows.len(),
            n2: width,
            rows,
        })
    }

    /// Parses the text format: a header `n1 n2` followed by `n1` lines of
    /// `n2` characters from `{0,1}`.
    pub fn parse(text: &str) -> Result<BoolMatrix> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(1, format!("bad dimension `{t}`"))))
            .collect::<Result<_>>()?;
        let [n1, n2] = dims[..] else {
            return Err(Error::parse(1, "header must be `n1 n2`"));
        };
        let mut rows = Vec::with_capacity(n1);
        for _ in 0..n1 {
            let (idx, line) = lines
                .next()
                .ok_or_else(|| Error::parse(rows.len() + 2, "missing row"))?;
            let row = BoolVector::parse_line(line).map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(idx + 1, message),
                other => other,
            })?;
            if row.len() != n2 {
                return Err(Error::parse(
                    idx + 1,
                    format!("row has {} columns, expected {n2}", row.len()),
                ));
            }
            rows.push(row);
        }
        if let Some((idx, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::parse(idx + 1, format!("trailing content `{extra}`")));
        }
        Ok(BoolMatrix { n1, n2, rows })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n1, self.n2);
        for row in &self.rows {
            out.push_str(&row.to_line());
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BoolMatrix {}x{} [", self.n1, self.n2)?;
        for row in &self.rows {
            writeln!(f, "  {}", row.to_line())?;
        }
        write!(f, "]")
    }
}

/// Boolean product `Mv`.
pub fn mat_vec(m: &BoolMatrix, v: &BoolVector) -> Result<BoolVector> {
    if v.len() != m.n2 {
        return Err(Error::dim("mat_vec vector length", m.n2, v.len()));
    }
    let mut out = BoolVector::zeros(m.n1);
    for (i, row) in m.rows.iter().enumerate() {
        if row.intersects(v) {
            out.set(i, true);
        }
    }
    Ok(out)
}

/// The bit `u^T M v`.
pub fn vec_mat_vec(u: &BoolVector, m: &BoolMatrix, v: &BoolVector) -> Result<bool> {
    if u.len() != m.n1 {
        return Err(Error::dim("vec_mat_vec u length", m.n1, u.len()));
    }
    if v.len() != m.n2 {
        return Err(Error::dim("vec_mat_vec v length", m.n2, v.len()));
    }
    Ok(u.iter_ones().any(|i| m.rows[i].intersects(v)))
}

/// `M' = [[0, M], [M^T, 0]]`, a symmetric matrix of order `n1 + n2`.
pub fn symmetrize(m: &BoolMatrix) -> BoolMatrix {
    let n = m.n1 + m.n2;
    let mut out = BoolMatrix::zeros(n, n);
    for (i, row) in m.rows.iter().enumerate() {
        for j in row.iter_ones() {
            out.set(i, m.n1 + j, true);
            out.set(m.n1 + j, i, true);
        }
    }
    out
}

/// Lifted vectors `(w, x, y) = (u‖v, u‖0, 0‖v)` matching [`symmetrize`].
pub fn lift_vectors(u: &BoolVector, v: &BoolVector) -> (BoolVector, BoolVector, BoolVector) {
    let w = u.concat(v);
    let x = u.concat(&BoolVector::zeros(v.len()));
    let y = BoolVector::zeros(u.len()).concat(v);
    (w, x, y)
}

/// Start offsets of length-`k` tiles covering `0..n`. When `k` does not divide
/// `n` the last tile is shifted left so it ends at `n`, overlapping its
/// predecessor.
pub fn tile_starts(n: usize, k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "tile size {k} must lie in 1..={n}"
        )));
    }
    let mut starts: Vec<usize> = (0..n / k).map(|x| x * k).collect();
    if !n.is_multiple_of(k) {
        starts.push(n - k);
    }
    Ok(starts)
}

/// A matrix with the parameters of one online instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmvInstance {
    pub matrix: BoolMatrix,
    pub n3: usize,
    pub gamma: Option<Rational>,
}

impl OmvInstance {
    pub fn new(matrix: BoolMatrix, n3: usize) -> Self {
        OmvInstance {
            matrix,
            n3,
            gamma: None,
        }
    }

    pub fn with_gamma(mut self, gamma: Rational) -> Self {
        self.gamma = Some(gamma);
        self
    }

    /// Checks `n1 = floor(n2^gamma)` when a promise is attached.
    pub fn check_promise(&self) -> Result<()> {
        let Some(gamma) = self.gamma else {
            return Ok(());
        };
        let expected = floor_pow(self.matrix.n2 as u64, gamma)? as usize;
        if expected != self.matrix.n1 {
            return Err(Error::dim("gamma promise n1", expected, self.matrix.n1));
        }
        Ok(())
    }
}
