//! Reference structures for the dynamic problems targeted by the gadgets.
//!
//! Every oracle is a [`Counted`] wrapper around a plain state type. Public
//! mutators bump `updates` by one and queries bump `queries` by one; rejected
//! operations change nothing. Snapshots are free and restore state only.

mod densest;
mod even_shiloach;
mod graph;
mod matching;
mod misc;
mod paths;
pub mod script;

pub use densest::{densest_subgraph_exact, density, DensestOracle, DensestState};
pub use even_shiloach::{EsState, EvenShiloachOracle};
pub use graph::DynGraph;
pub use matching::{maximum_matching_size, MatchingOracle, MatchingState};
pub use misc::{
    EricksonOracle, EricksonState, PaghOracle, PaghState, ZeroPrefixOracle, ZeroPrefixState,
};
pub use paths::{
    ColorDistanceOracle, ColorState, DFailureOracle, DFailureState, DiameterOracle, DiameterState,
    DistanceOracle, DistanceState, SubConnOracle, SubConnState, TriangleOracle, TriangleState,
};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub updates: usize,
    pub queries: usize,
}

/// A state wrapped with operation counters and a snapshot stack.
#[derive(Clone, Debug)]
pub struct Counted<S> {
    state: S,
    counters: Counters,
    snapshots: Vec<S>,
}

impl<S: Clone> Counted<S> {
    pub fn wrap(state: S) -> Self {
        Counted {
            state,
            counters: Counters::default(),
            snapshots: Vec::new(),
        }
    }

    pub fn state(&self) -> &S {
        &self.state
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn snapshot(&mut self) {
        self.snapshots.push(self.state.clone());
    }

    /// Restores the most recent snapshot. Counters are untouched.
    pub fn rollback(&mut self) -> Result<()> {
        self.state = self
            .snapshots
            .pop()
            .ok_or_else(|| Error::Rejected("rollback without snapshot".into()))?;
        Ok(())
    }

    pub(crate) fn update<R>(&mut self, f: impl FnOnce(&mut S) -> Result<R>) -> Result<R> {
        let out = f(&mut self.state)?;
        self.counters.updates += 1;
        Ok(out)
    }

    pub(crate) fn query<R>(&mut self, f: impl FnOnce(&mut S) -> Result<R>) -> Result<R> {
        let out = f(&mut self.state)?;
        self.counters.queries += 1;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counters_and_snapshots() {
        let mut o = SubConnOracle::from_graph(DynGraph::from_edges(3, false, &[(0, 1), (1, 2)]).unwrap());
        o.snapshot();
        o.turn_off(1).unwrap();
        assert!(!o.connected(0, 2).unwrap());
        assert!(o.turn_off(7).is_err());
        o.rollback().unwrap();
        assert!(o.connected(0, 2).unwrap());
        assert_eq!(o.counters(), Counters { updates: 1, queries: 2 });
        assert!(o.rollback().is_err());
    }
}
