//! Two-player quantum games over finite strategy sets.
//!
//! A game is an initial state, one list of mixed-unitary actions per player,
//! and one Hermitian payoff observable per player. Playing strategies `(i, j)`
//! applies both actions in the configured order and pays `tr(R·σ)`.

use crate::quantum::{
    apply_mixed, ComplexMatrix, DensityMatrix, MixedUnitaryAction, VALIDATION_TOL,
};

use super::{pure_nash, BimatrixGame, Cell, GameError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MoveOrder {
    #[default]
    AliceFirst,
    BobFirst,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGameSpec {
    initial_state: DensityMatrix,
    strategies_a: Vec<MixedUnitaryAction>,
    strategies_b: Vec<MixedUnitaryAction>,
    observable_a: ComplexMatrix,
    observable_b: ComplexMatrix,
    order: MoveOrder,
}

impl QuantumGameSpec {
    pub fn new(
        initial_state: DensityMatrix,
        strategies_a: Vec<MixedUnitaryAction>,
        strategies_b: Vec<MixedUnitaryAction>,
        observable_a: ComplexMatrix,
        observable_b: ComplexMatrix,
    ) -> Result<Self> {
        let d = initial_state.dim();
        for (name, set) in [
            ("strategies_a", &strategies_a),
            ("strategies_b", &strategies_b),
        ] {
            if set.is_empty() {
                return Err(GameError::InvalidGame(format!("{name} is empty")));
            }
            if let Some(bad) = set.iter().find(|s| s.dim() != d) {
                return Err(crate::quantum::QuantumError::DimensionMismatch {
                    expected: d,
                    found: bad.dim(),
                }
                .into());
            }
        }
        for (name, obs) in [
            ("observable_a", &observable_a),
            ("observable_b", &observable_b),
        ] {
            if obs.rows() != d || obs.cols() != d {
                return Err(crate::quantum::QuantumError::DimensionMismatch {
                    expected: d,
                    found: obs.rows().max(obs.cols()),
                }
                .into());
            }
            if !obs.is_hermitian(VALIDATION_TOL) {
                return Err(GameError::InvalidGame(format!("{name} is not Hermitian")));
            }
        }
        Ok(Self {
            initial_state,
            strategies_a,
            strategies_b,
            observable_a,
            observable_b,
            order: MoveOrder::default(),
        })
    }

    pub fn with_order(mut self, order: MoveOrder) -> Self {
        self.order = order;
        self
    }

    pub fn dimension(&self) -> usize {
        self.initial_state.dim()
    }

    pub fn order(&self) -> MoveOrder {
        self.order
    }

    pub fn strategy_counts(&self) -> (usize, usize) {
        (self.strategies_a.len(), self.strategies_b.len())
    }

    /// Final state `σ` after Alice plays `i` and Bob plays `j`.
    pub fn outcome(&self, i: usize, j: usize) -> Result<DensityMatrix> {
        let (sa, sb) = (&self.strategies_a[i], &self.strategies_b[j]);
        let (first, second) = match self.order {
            MoveOrder::AliceFirst => (sa, sb),
            MoveOrder::BobFirst => (sb, sa),
        };
        let mid = apply_mixed(first, &self.initial_state)?;
        Ok(apply_mixed(second, &mid)?)
    }

    /// `(P_A, P_B)` for strategies `(i, j)`.
    pub fn payoffs(&self, i: usize, j: usize) -> Result<(f64, f64)> {
        let sigma = self.outcome(i, j)?;
        Ok((
            expectation(&self.observable_a, &sigma),
            expectation(&self.observable_b, &sigma),
        ))
    }
}

/// `Re tr(R·σ)`
fn expectation(observable: &ComplexMatrix, sigma: &DensityMatrix) -> f64 {
    let s = sigma.matrix();
    let d = s.rows();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|k| observable[(i, k)] * s[(k, i)])
                .sum::<crate::quantum::C64>()
                .re
        })
        .sum()
}

/// Tabulates both players' payoffs over the finite strategy sets.
pub fn induced_bimatrix(spec: &QuantumGameSpec) -> Result<BimatrixGame> {
    let (m, n) = spec.strategy_counts();
    let mut a = vec![vec![0.0; n]; m];
    let mut b = vec![vec![0.0; n]; m];
    for i in 0..m {
        for j in 0..n {
            (a[i][j], b[i][j]) = spec.payoffs(i, j)?;
        }
    }
    BimatrixGame::new(&a, &b)
}

/// Strategy-index pairs from which neither player gains by a unilateral switch.
pub fn quantum_nash_finite(spec: &QuantumGameSpec) -> Result<Vec<Cell>> {
    Ok(pure_nash(&induced_bimatrix(spec)?))
}
