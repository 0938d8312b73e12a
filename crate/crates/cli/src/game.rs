//! `game analyze`: solve a finite game read from a JSON document.
//!
//! A classical game gives `payoff_a` and optionally `payoff_b` (defaulting to
//! `-payoff_a`). A quantum game gives a `quantum` object with the initial
//! density matrix, both strategy lists, both observables and an optional
//! `order`. Complex entries are written as a number or as `[re, im]`.

use num_complex::Complex64;
use qgames_core::games::{
    dominant_strategies, expected_payoffs, induced_bimatrix, mixed_nash_2x2, pareto_outcomes,
    pure_nash, zero_sum_value, BimatrixGame, GameError, MoveOrder, QuantumGameSpec,
};
use qgames_core::quantum::{ComplexMatrix, DensityMatrix, MixedUnitaryAction, UnitaryStrategy};
use serde::Deserialize;

use crate::report::Report;
use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDoc {
    payoff_a: Option<Vec<Vec<f64>>>,
    payoff_b: Option<Vec<Vec<f64>>>,
    quantum: Option<QuantumDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuantumDoc {
    initial_state: MatrixDoc,
    strategies_a: Vec<StrategyDoc>,
    strategies_b: Vec<StrategyDoc>,
    observable_a: MatrixDoc,
    observable_b: MatrixDoc,
    #[serde(default)]
    order: OrderDoc,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ComplexDoc {
    Real(f64),
    Pair([f64; 2]),
}

type MatrixDoc = Vec<Vec<ComplexDoc>>;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum StrategyDoc {
    Unitary(MatrixDoc),
    Mixture { mixture: Vec<BranchDoc> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchDoc {
    weight: f64,
    unitary: MatrixDoc,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum OrderDoc {
    #[default]
    AliceFirst,
    BobFirst,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyzeOptions {
    pub mixed: bool,
    pub zero_sum: bool,
}

fn game_error(e: GameError) -> CliError {
    match e {
        GameError::NotZeroSum { .. } | GameError::Unsupported(_) => {
            CliError::Precondition(e.to_string())
        }
        GameError::InvalidGame(_) | GameError::Quantum(_) => CliError::Input(e.to_string()),
    }
}

fn input<E: std::fmt::Display>(context: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Input(format!("{context}: {e}"))
}

fn matrix(doc: &MatrixDoc, what: &str) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<Complex64>> = doc
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| match *c {
                    ComplexDoc::Real(re) => Complex64::new(re, 0.0),
                    ComplexDoc::Pair([re, im]) => Complex64::new(re, im),
                })
                .collect()
        })
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(input(what))
}

fn strategy(doc: &StrategyDoc, what: &str) -> Result<MixedUnitaryAction, CliError> {
    let unitary = |m: &MatrixDoc| UnitaryStrategy::new(matrix(m, what)?).map_err(input(what));
    match doc {
        StrategyDoc::Unitary(m) => Ok(MixedUnitaryAction::pure(unitary(m)?)),
        StrategyDoc::Mixture { mixture } => {
            let branches = mixture
                .iter()
                .map(|b| Ok((b.weight, unitary(&b.unitary)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            MixedUnitaryAction::new(branches).map_err(input(what))
        }
    }
}

fn quantum_spec(doc: &QuantumDoc) -> Result<QuantumGameSpec, CliError> {
    let rho = DensityMatrix::new(matrix(&doc.initial_state, "initial_state")?)
        .map_err(input("initial_state"))?;
    let list = |docs: &[StrategyDoc], name: &str| {
        docs.iter()
            .enumerate()
            .map(|(i, d)| strategy(d, &format!("{name}[{i}]")))
            .collect::<Result<Vec<_>, CliError>>()
    };
    let spec = QuantumGameSpec::new(
        rho,
        list(&doc.strategies_a, "strategies_a")?,
        list(&doc.strategies_b, "strategies_b")?,
        matrix(&doc.observable_a, "observable_a")?,
        matrix(&doc.observable_b, "observable_b")?,
    )
    .map_err(game_error)?;
    Ok(spec.with_order(match doc.order {
        OrderDoc::AliceFirst => MoveOrder::AliceFirst,
        OrderDoc::BobFirst => MoveOrder::BobFirst,
    }))
}

/// Parses a game document into a bimatrix game; the string names its kind.
pub fn load_game(bytes: &[u8]) -> Result<(BimatrixGame, &'static str), CliError> {
    let doc: GameDoc = serde_json::from_slice(bytes).map_err(input("malformed game document"))?;
    match (doc.payoff_a, doc.payoff_b, doc.quantum) {
        (Some(a), b, None) => {
            let game = match b {
                Some(b) => BimatrixGame::new(&a, &b),
                None => BimatrixGame::zero_sum(&a),
            };
            Ok((game.map_err(game_error)?, "bimatrix"))
        }
        (None, None, Some(q)) => {
            let spec = quantum_spec(&q)?;
            Ok((induced_bimatrix(&spec).map_err(game_error)?, "quantum"))
        }
        _ => Err(CliError::Input(
            "game document needs either payoff_a (and optionally payoff_b) or quantum".into(),
        )),
    }
}

pub fn analyze(bytes: &[u8], opts: AnalyzeOptions) -> Result<Report, CliError> {
    let (g, kind) = load_game(bytes)?;
    let dominant = dominant_strategies(&g);
    let mut report = Report::for_command("game analyze")
        .with("kind", kind)
        .with("rows", g.rows())
        .with("cols", g.cols())
        .with("payoff_a", g.payoff_a_rows())
        .with("payoff_b", g.payoff_b_rows())
        .with("dominant_rows", dominant.rows)
        .with("dominant_cols", dominant.cols)
        .with("pure_nash", pure_nash(&g))
        .with("pareto", pareto_outcomes(&g));

    if opts.mixed {
        let mixed = mixed_nash_2x2(&g).map_err(game_error)?;
        let equilibria: Vec<Report> = mixed
            .equilibria
            .iter()
            .map(|profile| {
                let (pa, pb) = expected_payoffs(&g, profile);
                Report::default()
                    .with("row", profile.row().to_vec())
                    .with("col", profile.col().to_vec())
                    .with("payoff_a", pa)
                    .with("payoff_b", pb)
            })
            .collect();
        report.push(
            "mixed",
            Report::default()
                .with("degenerate", mixed.degenerate)
                .with("equilibria", equilibria),
        );
    }
    if opts.zero_sum {
        let solution = zero_sum_value(&g).map_err(game_error)?;
        report.push(
            "zero_sum",
            Report::default()
                .with("value", solution.value)
                .with("row_strategy", solution.row_strategy),
        );
    }
    Ok(report)
}
