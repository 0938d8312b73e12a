//! Finite two-player games: dominance, pure and 2×2 mixed Nash equilibria,
//! Pareto optimality and the value of 2×n zero-sum games.
//!
//! All payoff comparisons use [`NASH_TOL`]; ties are kept, so a game with
//! several equilibria reports all of them.

mod quantum;

pub use quantum::{induced_bimatrix, quantum_nash_finite, MoveOrder, QuantumGameSpec};

use thiserror::Error;

use crate::quantum::QuantumError;

/// Tolerance for floating-point payoff comparisons.
pub const NASH_TOL: f64 = 1e-9;
/// Tolerance for the zero-sum precondition and probability sums.
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("game is not zero-sum: payoff_b[{row}][{col}] != -payoff_a[{row}][{col}]")]
    NotZeroSum { row: usize, col: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

pub type Result<T> = std::result::Result<T, GameError>;

/// A cell `(row, col)` of a payoff table, zero-indexed.
pub type Cell = (usize, usize);

/// Two `m × n` payoff tables, row player A and column player B.
#[derive(Debug, Clone, PartialEq)]
pub struct BimatrixGame {
    rows: usize,
    cols: usize,
    payoff_a: Vec<f64>,
    payoff_b: Vec<f64>,
}

fn flatten(name: &str, table: &[Vec<f64>]) -> Result<(usize, usize, Vec<f64>)> {
    let rows = table.len();
    let cols = table.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(GameError::InvalidGame(format!("{name} is empty")));
    }
    if let Some(i) = table.iter().position(|r| r.len() != cols) {
        return Err(GameError::InvalidGame(format!(
            "{name} row {i} has {} entries, expected {cols}",
            table[i].len()
        )));
    }
    let flat = table.concat();
    if let Some(pos) = flat.iter().position(|x| !x.is_finite()) {
        return Err(GameError::InvalidGame(format!(
            "{name}[{}][{}] is not finite",
            pos / cols,
            pos % cols
        )));
    }
    Ok((rows, cols, flat))
}

impl BimatrixGame {
    pub fn new(payoff_a: &[Vec<f64>], payoff_b: &[Vec<f64>]) -> Result<Self> {
        let (rows, cols, a) = flatten("payoff_a", payoff_a)?;
        let (rows_b, cols_b, b) = flatten("payoff_b", payoff_b)?;
        if (rows, cols) != (rows_b, cols_b) {
            return Err(GameError::InvalidGame(format!(
                "payoff_a is {rows}x{cols} but payoff_b is {rows_b}x{cols_b}"
            )));
        }
        Ok(Self {
            rows,
            cols,
            payoff_a: a,
            payoff_b: b,
        })
    }

    /// Zero-sum game from the row player's table.
    pub fn zero_sum(payoff_a: &[Vec<f64>]) -> Result<Self> {
        let negated: Vec<Vec<f64>> = payoff_a
            .iter()
            .map(|r| r.iter().map(|x| -x).collect())
            .collect();
        Self::new(payoff_a, &negated)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.payoff_a[i * self.cols + j]
    }

    pub fn b(&self, i: usize, j: usize) -> f64 {
        self.payoff_b[i * self.cols + j]
    }

    pub fn payoff_a_rows(&self) -> Vec<Vec<f64>> {
        self.payoff_a
            .chunks(self.cols)
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn payoff_b_rows(&self) -> Vec<Vec<f64>> {
        self.payoff_b
            .chunks(self.cols)
            .map(<[f64]>::to_vec)
            .collect()
    }

    fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.rows).flat_map(move |i| (0..self.cols).map(move |j| (i, j)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DominantStrategies {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Weakly dominant strategies: at least as good as every alternative against
/// every opponent choice.
pub fn dominant_strategies(g: &BimatrixGame) -> DominantStrategies {
    let rows = (0..g.rows)
        .filter(|&i| (0..g.rows).all(|k| (0..g.cols).all(|j| g.a(i, j) >= g.a(k, j) - NASH_TOL)))
        .collect();
    let cols = (0..g.cols)
        .filter(|&j| (0..g.cols).all(|l| (0..g.rows).all(|i| g.b(i, j) >= g.b(i, l) - NASH_TOL)))
        .collect();
    DominantStrategies { rows, cols }
}

fn is_pure_nash(g: &BimatrixGame, (i, j): Cell) -> bool {
    (0..g.rows).all(|k| g.a(i, j) >= g.a(k, j) - NASH_TOL)
        && (0..g.cols).all(|l| g.b(i, j) >= g.b(i, l) - NASH_TOL)
}

/// All pure Nash equilibria in row-major order.
pub fn pure_nash(g: &BimatrixGame) -> Vec<Cell> {
    g.cells().filter(|&c| is_pure_nash(g, c)).collect()
}

/// Cells not Pareto-dominated by any other cell.
pub fn pareto_outcomes(g: &BimatrixGame) -> Vec<Cell> {
    let dominates = |(k, l): Cell, (i, j): Cell| {
        let (da, db) = (g.a(k, l) - g.a(i, j), g.b(k, l) - g.b(i, j));
        da >= -NASH_TOL && db >= -NASH_TOL && (da > NASH_TOL || db > NASH_TOL)
    };
    g.cells()
        .filter(|&c| !g.cells().any(|other| dominates(other, c)))
        .collect()
}

/// A pair of mixed strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile {
    row: Vec<f64>,
    col: Vec<f64>,
}

fn check_distribution(name: &str, probs: &[f64]) -> Result<()> {
    if probs.is_empty() || probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(GameError::InvalidGame(format!(
            "{name} is not a probability vector"
        )));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > EXACT_TOL {
        return Err(GameError::InvalidGame(format!("{name} sums to {total}")));
    }
    Ok(())
}

impl MixedProfile {
    pub fn new(row: Vec<f64>, col: Vec<f64>) -> Result<Self> {
        check_distribution("row profile", &row)?;
        check_distribution("column profile", &col)?;
        Ok(Self { row, col })
    }

    pub fn pure(rows: usize, cols: usize, (i, j): Cell) -> Self {
        let mut row = vec![0.0; rows];
        let mut col = vec![0.0; cols];
        row[i] = 1.0;
        col[j] = 1.0;
        Self { row, col }
    }

    pub fn row(&self) -> &[f64] {
        &self.row
    }

    pub fn col(&self) -> &[f64] {
        &self.col
    }
}

/// Expected payoffs `(A, B)` under a mixed profile.
pub fn expected_payoffs(g: &BimatrixGame, profile: &MixedProfile) -> (f64, f64) {
    g.cells().fold((0.0, 0.0), |(ea, eb), (i, j)| {
        let w = profile.row[i] * profile.col[j];
        (ea + w * g.a(i, j), eb + w * g.b(i, j))
    })
}

/// No pure deviation improves either player's expected payoff by more than `tol`.
pub fn is_mixed_equilibrium(g: &BimatrixGame, profile: &MixedProfile, tol: f64) -> bool {
    if profile.row.len() != g.rows || profile.col.len() != g.cols {
        return false;
    }
    let (ea, eb) = expected_payoffs(g, profile);
    let row_ok = (0..g.rows).all(|k| {
        let dev: f64 = (0..g.cols).map(|j| profile.col[j] * g.a(k, j)).sum();
        dev <= ea + tol
    });
    let col_ok = (0..g.cols).all(|l| {
        let dev: f64 = (0..g.rows).map(|i| profile.row[i] * g.b(i, l)).sum();
        dev <= eb + tol
    });
    row_ok && col_ok
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedNash {
    pub equilibria: Vec<MixedProfile>,
    /// Set when an indifference system is singular; only pure equilibria are
    /// returned in that case.
    pub degenerate: bool,
}

/// All equilibria of a 2×2 game: the pure ones plus the fully mixed profile
/// solving both indifference equations, when it is interior.
pub fn mixed_nash_2x2(g: &BimatrixGame) -> Result<MixedNash> {
    if g.rows != 2 || g.cols != 2 {
        return Err(GameError::Unsupported(format!(
            "mixed equilibria need a 2x2 game, got {}x{}",
            g.rows, g.cols
        )));
    }
    let mut equilibria: Vec<MixedProfile> = pure_nash(g)
        .into_iter()
        .map(|c| MixedProfile::pure(2, 2, c))
        .collect();

    // x = P(row 0) makes the column player indifferent; y = P(col 0) the row player.
    let den_b = g.b(0, 0) - g.b(0, 1) - g.b(1, 0) + g.b(1, 1);
    let den_a = g.a(0, 0) - g.a(0, 1) - g.a(1, 0) + g.a(1, 1);
    let degenerate = den_a.abs() <= EXACT_TOL || den_b.abs() <= EXACT_TOL;
    if !degenerate {
        let x = (g.b(1, 1) - g.b(1, 0)) / den_b;
        let y = (g.a(1, 1) - g.a(0, 1)) / den_a;
        if x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0 {
            let profile = MixedProfile {
                row: vec![x, 1.0 - x],
                col: vec![y, 1.0 - y],
            };
            if is_mixed_equilibrium(g, &profile, NASH_TOL) {
                equilibria.push(profile);
            }
        }
    }
    Ok(MixedNash {
        equilibria,
        degenerate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSumSolution {
    pub value: f64,
    /// Row player's maximin strategy.
    pub row_strategy: Vec<f64>,
}

/// Maximin value of a 2×n zero-sum game for the row player.
///
/// With `x = P(row 0)`, each column contributes the line
/// `x·A[0][j] + (1 − x)·A[1][j]`; the lower envelope is concave and piecewise
/// linear, so its maximum sits on `x ∈ {0, 1}` or a pairwise line crossing.
/// When the maximum is attained on an interval, its midpoint is returned.
pub fn zero_sum_value(g: &BimatrixGame) -> Result<ZeroSumSolution> {
    if let Some((row, col)) = g
        .cells()
        .find(|&(i, j)| (g.b(i, j) + g.a(i, j)).abs() > EXACT_TOL)
    {
        return Err(GameError::NotZeroSum { row, col });
    }
    if g.rows != 2 {
        return Err(GameError::Unsupported(format!(
            "zero-sum value needs exactly 2 rows, got {}",
            g.rows
        )));
    }
    let line = |j: usize, x: f64| x * g.a(0, j) + (1.0 - x) * g.a(1, j);
    let envelope = |x: f64| {
        (0..g.cols)
            .map(|j| line(j, x))
            .fold(f64::INFINITY, f64::min)
    };

    let mut candidates = vec![0.0, 1.0];
    for j in 0..g.cols {
        for k in j + 1..g.cols {
            let slope_j = g.a(0, j) - g.a(1, j);
            let slope_k = g.a(0, k) - g.a(1, k);
            if slope_j != slope_k {
                let x = (g.a(1, k) - g.a(1, j)) / (slope_j - slope_k);
                if (0.0..=1.0).contains(&x) {
                    candidates.push(x);
                }
            }
        }
    }
    let best = candidates
        .iter()
        .map(|&x| envelope(x))
        .fold(f64::NEG_INFINITY, f64::max);
    let optimal = candidates
        .iter()
        .copied()
        .filter(|&x| envelope(x) >= best - EXACT_TOL);
    let (lo, hi) = optimal.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    });
    let x = 0.5 * (lo + hi);
    Ok(ZeroSumSolution {
        value: envelope(x),
        row_strategy: vec![x, 1.0 - x],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinflip::classical_payoff_table;

    fn prisoners_dilemma() -> BimatrixGame {
        BimatrixGame::new(
            &[vec![3.0, 0.0], vec![5.0, 1.0]],
            &[vec![3.0, 5.0], vec![0.0, 1.0]],
        )
        .unwrap()
    }

    fn matching_pennies() -> BimatrixGame {
        BimatrixGame::zero_sum(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap()
    }

    fn constant() -> BimatrixGame {
        BimatrixGame::new(&[vec![0.0; 2], vec![0.0; 2]], &[vec![0.0; 2], vec![0.0; 2]]).unwrap()
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(
            BimatrixGame::new(&[vec![1.0, 2.0], vec![3.0]], &[vec![0.0; 2], vec![0.0; 2]]).is_err()
        );
        assert!(BimatrixGame::new(&[vec![1.0]], &[vec![1.0, 2.0]]).is_err());
        assert!(BimatrixGame::new(&[], &[]).is_err());
        assert!(BimatrixGame::new(&[vec![f64::NAN]], &[vec![0.0]]).is_err());
    }

    #[test]
    fn dominance_examples() {
        let d = dominant_strategies(&prisoners_dilemma());
        assert_eq!((d.rows, d.cols), (vec![1], vec![1]));
        let d = dominant_strategies(&constant());
        assert_eq!((d.rows, d.cols), (vec![0, 1], vec![0, 1]));
        let d = dominant_strategies(&matching_pennies());
        assert!(d.rows.is_empty() && d.cols.is_empty());
    }

    #[test]
    fn pure_nash_examples() {
        let pd = prisoners_dilemma();
        assert_eq!(pure_nash(&pd), vec![(1, 1)]);
        assert_eq!((pd.a(1, 1), pd.b(1, 1)), (1.0, 1.0));
        assert!(pure_nash(&matching_pennies()).is_empty());
        assert_eq!(pure_nash(&constant()).len(), 4);
    }

    #[test]
    fn pareto_examples() {
        assert_eq!(
            pareto_outcomes(&prisoners_dilemma()),
            vec![(0, 0), (0, 1), (1, 0)]
        );
        assert_eq!(pareto_outcomes(&constant()).len(), 4);
        let single = BimatrixGame::new(
            &[vec![0.0, 0.0], vec![0.0, 5.0]],
            &[vec![0.0, 0.0], vec![0.0, 5.0]],
        )
        .unwrap();
        assert_eq!(pareto_outcomes(&single), vec![(1, 1)]);
    }

    #[test]
    fn mixed_examples() {
        let mp = mixed_nash_2x2(&matching_pennies()).unwrap();
        assert!(!mp.degenerate);
        assert_eq!(
            mp.equilibria,
            vec![MixedProfile::new(vec![0.5, 0.5], vec![0.5, 0.5]).unwrap()]
        );

        let pd = mixed_nash_2x2(&prisoners_dilemma()).unwrap();
        assert_eq!(pd.equilibria, vec![MixedProfile::pure(2, 2, (1, 1))]);

        let table = classical_payoff_table();
        let restricted: Vec<Vec<f64>> = table.iter().map(|r| vec![r[0], r[3]]).collect();
        let flipped = mixed_nash_2x2(&BimatrixGame::zero_sum(&restricted).unwrap()).unwrap();
        assert!(flipped.degenerate);

        let wide = BimatrixGame::zero_sum(&table).unwrap();
        assert!(matches!(
            mixed_nash_2x2(&wide),
            Err(GameError::Unsupported(_))
        ));
    }

    #[test]
    fn zero_sum_examples() {
        let spin = BimatrixGame::zero_sum(&classical_payoff_table()).unwrap();
        let sol = zero_sum_value(&spin).unwrap();
        assert!(sol.value.abs() <= 1e-9);
        assert!((sol.row_strategy[0] - 0.5).abs() <= 1e-9);

        let ones = BimatrixGame::zero_sum(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(zero_sum_value(&ones).unwrap().value, 1.0);

        let sol = zero_sum_value(&matching_pennies()).unwrap();
        assert_eq!(sol.value, 0.0);
        assert_eq!(sol.row_strategy, vec![0.5, 0.5]);

        assert!(matches!(
            zero_sum_value(&prisoners_dilemma()),
            Err(GameError::NotZeroSum { row: 0, col: 0 })
        ));
        let three = BimatrixGame::zero_sum(&[vec![1.0], vec![0.0], vec![2.0]]).unwrap();
        assert!(matches!(
            zero_sum_value(&three),
            Err(GameError::Unsupported(_))
        ));
    }
}
