//! Non-graph structures: Pagh's intersection family, zero prefix sums and
//! Erickson's row/column increments.

use super::Counted;
use crate::bitcore::BoolVector;
use crate::{Error, Result};

fn out_of_range(context: &'static str, index: usize, size: usize) -> Error {
    Error::OutOfRange { context, index, size }
}

#[derive(Clone, Debug)]
pub struct PaghState {
    pub universe: usize,
    pub sets: Vec<BoolVector>,
}

/// A growing family of subsets of `[universe]`.
pub type PaghOracle = Counted<PaghState>;

impl PaghOracle {
    pub fn new(universe: usize, sets: Vec<BoolVector>) -> Result<Self> {
        for s in &sets {
            if s.len() != universe {
                return Err(Error::dim("set universe", universe, s.len()));
            }
        }
        Ok(Counted::wrap(PaghState { universe, sets }))
    }

    /// Appends `X_i ∩ X_j` and returns its index.
    pub fn insert_intersection(&mut self, i: usize, j: usize) -> Result<usize> {
        self.update(|s| {
            let k = s.sets.len();
            let a = s.sets.get(i).ok_or_else(|| out_of_range("set index", i, k))?;
            let b = s.sets.get(j).ok_or_else(|| out_of_range("set index", j, k))?;
            let both = a.and(b)?;
            s.sets.push(both);
            Ok(k)
        })
    }

    pub fn member(&mut self, i: usize, element: usize) -> Result<bool> {
        self.query(|s| s.member(i, element))
    }
}

impl PaghState {
    pub fn member(&self, i: usize, element: usize) -> Result<bool> {
        let set = self.sets.get(i).ok_or_else(|| out_of_range("set index", i, self.sets.len()))?;
        if element >= self.universe {
            return Err(out_of_range("element", element, self.universe));
        }
        Ok(set.get(element))
    }
}

#[derive(Clone, Debug)]
pub struct ZeroPrefixState {
    pub values: Vec<i64>,
}

pub type ZeroPrefixOracle = Counted<ZeroPrefixState>;

impl ZeroPrefixOracle {
    pub fn new(values: Vec<i64>) -> Self {
        Counted::wrap(ZeroPrefixState { values })
    }

    pub fn set(&mut self, i: usize, x: i64) -> Result<()> {
        self.update(|s| {
            let n = s.values.len();
            *s.values.get_mut(i).ok_or_else(|| out_of_range("array index", i, n))? = x;
            Ok(())
        })
    }

    /// Smallest `k ≥ 1` with `A[1] + … + A[k] = 0`, if any.
    pub fn has_zero_prefix(&mut self) -> Result<Option<usize>> {
        self.query(|s| Ok(s.first_zero_prefix()))
    }
}

impl ZeroPrefixState {
    pub fn first_zero_prefix(&self) -> Option<usize> {
        let mut sum = 0i64;
        for (k, &x) in self.values.iter().enumerate() {
            sum += x;
            if sum == 0 {
                return Some(k + 1);
            }
        }
        None
    }
}

#[derive(Clone, Debug)]
pub struct EricksonState {
    base: Vec<Vec<i64>>,
    row_off: Vec<i64>,
    col_off: Vec<i64>,
}

/// Integer matrix with whole-row and whole-column increments.
pub type EricksonOracle = Counted<EricksonState>;

impl EricksonOracle {
    pub fn new(base: Vec<Vec<i64>>) -> Result<Self> {
        let cols = base.first().map_or(0, Vec::len);
        if let Some(bad) = base.iter().find(|r| r.len() != cols) {
            return Err(Error::dim("matrix row length", cols, bad.len()));
        }
        Ok(Counted::wrap(EricksonState {
            row_off: vec![0; base.len()],
            col_off: vec![0; cols],
            base,
        }))
    }

    pub fn inc_row(&mut self, i: usize) -> Result<()> {
        self.update(|s| {
            let n = s.row_off.len();
            *s.row_off.get_mut(i).ok_or_else(|| out_of_range("row", i, n))? += 1;
            Ok(())
        })
    }

    pub fn inc_col(&mut self, j: usize) -> Result<()> {
        self.update(|s| {
            let n = s.col_off.len();
            *s.col_off.get_mut(j).ok_or_else(|| out_of_range("column", j, n))? += 1;
            Ok(())
        })
    }

    pub fn max(&mut self) -> Result<Option<i64>> {
        self.query(|s| Ok(s.max()))
    }
}

impl EricksonState {
    pub fn value(&self, i: usize, j: usize) -> i64 {
        self.base[i][j] + self.row_off[i] + self.col_off[j]
    }

    pub fn max(&self) -> Option<i64> {
        (0..self.row_off.len())
            .flat_map(|i| (0..self.col_off.len()).map(move |j| (i, j)))
            .map(|(i, j)| self.value(i, j))
            .max()
    }
}
