//! The spin-flip game: Q acts on an electron, Picard acts, Q acts again, and
//! Q wins if the spin is measured up.
//!
//! Payoffs are reported from Picard's side: `1 − 2·P(up)`, so `+1` is a
//! certain win for Picard and `−1` a certain win for Q. Q's payoff is the
//! negation.

use std::fmt;

use crate::quantum::{
    apply_mixed, build_u_ab, evolve_density, measurement_probabilities, DensityMatrix,
    MixedUnitaryAction, PureState, QuantumError, Result, UnitaryStrategy, C64, VALIDATION_TOL,
};

/// Threshold for detecting exact indifference in user-supplied parameters.
pub const INDIFFERENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    fn flipped(self, flip: bool) -> Self {
        match (self, flip) {
            (s, false) => s,
            (Spin::Up, true) => Spin::Down,
            (Spin::Down, true) => Spin::Up,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Up => "U",
            Spin::Down => "D",
        })
    }
}

/// Picard's pure moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PicardMove {
    N,
    F,
}

/// Q's pure two-turn moves, first letter is his first turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QMove {
    NN,
    NF,
    FN,
    FF,
}

impl PicardMove {
    pub const ALL: [PicardMove; 2] = [PicardMove::N, PicardMove::F];

    pub fn flips(self) -> bool {
        self == PicardMove::F
    }
}

impl QMove {
    pub const ALL: [QMove; 4] = [QMove::NN, QMove::NF, QMove::FN, QMove::FF];

    pub fn first_flips(self) -> bool {
        matches!(self, QMove::FN | QMove::FF)
    }

    pub fn second_flips(self) -> bool {
        matches!(self, QMove::NF | QMove::FF)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassicalMove {
    pub picard: PicardMove,
    pub q: QMove,
}

impl ClassicalMove {
    pub fn new(picard: PicardMove, q: QMove) -> Self {
        Self { picard, q }
    }

    /// The deterministic mixed/quantum strategies that reproduce this move:
    /// flip ↔ `U(0,1) = F` or `p = 1`, no flip ↔ `U(1,0)` or `p = 0`.
    ///
    /// `U(1,0)` differs from `N` by a phase on `|D⟩`, which does not change
    /// any outcome probability.
    pub fn as_strategies(self) -> (QStrategy, PicardStrategy) {
        let params = |flip: bool| {
            if flip {
                UnitaryParams::flip()
            } else {
                UnitaryParams::no_flip()
            }
        };
        let q = QStrategy::new(params(self.q.first_flips()), params(self.q.second_flips()));
        let p = if self.picard.flips() { 1.0 } else { 0.0 };
        (
            q,
            PicardStrategy::new(p).expect("0 and 1 are valid probabilities"),
        )
    }
}

// Picard's payoffs, rows N/F, columns NN/NF/FN/FF.
const PAYOFF_TABLE: [[i32; 4]; 2] = [[-1, 1, 1, -1], [1, -1, -1, 1]];

/// Picard's payoff for a pure move pair; Q receives the negation.
pub fn classical_payoff(mv: ClassicalMove) -> i32 {
    let row = PicardMove::ALL
        .iter()
        .position(|&m| m == mv.picard)
        .unwrap();
    let col = QMove::ALL.iter().position(|&m| m == mv.q).unwrap();
    PAYOFF_TABLE[row][col]
}

/// The classical table as reals, rows indexed by Picard's move.
pub fn classical_payoff_table() -> Vec<Vec<f64>> {
    PAYOFF_TABLE
        .iter()
        .map(|row| row.iter().map(|&v| f64::from(v)).collect())
        .collect()
}

/// Spin after each turn: initial, after Q, after Picard, after Q.
pub fn simulate_pure_sequence(mv: ClassicalMove) -> [Spin; 4] {
    let s0 = Spin::Up;
    let s1 = s0.flipped(mv.q.first_flips());
    let s2 = s1.flipped(mv.picard.flips());
    let s3 = s2.flipped(mv.q.second_flips());
    [s0, s1, s2, s3]
}

/// Flip probability for Picard's classical mixed strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardStrategy {
    p: f64,
}

impl PicardStrategy {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(QuantumError::InvalidArgument(format!(
                "flip probability {p} outside [0, 1]"
            )));
        }
        Ok(Self { p })
    }

    pub fn p(self) -> f64 {
        self.p
    }

    pub fn action(self) -> MixedUnitaryAction {
        MixedUnitaryAction::flip_mixture(self.p).expect("validated probability")
    }
}

/// Parameters `(a, b)` of `U(a, b)`, normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryParams {
    a: C64,
    b: C64,
}

impl UnitaryParams {
    pub fn new(a: C64, b: C64) -> Result<Self> {
        let norm_sqr = a.norm_sqr() + b.norm_sqr();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > VALIDATION_TOL {
            return Err(QuantumError::InvalidArgument(format!(
                "|a|^2 + |b|^2 = {norm_sqr}, expected 1"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn real(a: f64, b: f64) -> Result<Self> {
        Self::new(C64::new(a, 0.0), C64::new(b, 0.0))
    }

    /// `U(1, 0) = diag(1, −1)`.
    pub fn no_flip() -> Self {
        Self {
            a: C64::new(1.0, 0.0),
            b: C64::new(0.0, 0.0),
        }
    }

    /// `U(0, 1) = F`.
    pub fn flip() -> Self {
        Self {
            a: C64::new(0.0, 0.0),
            b: C64::new(1.0, 0.0),
        }
    }

    /// `U(1/√2, 1/√2)`, Q's winning move.
    pub fn hadamard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            a: C64::new(s, 0.0),
            b: C64::new(s, 0.0),
        }
    }

    pub fn a(self) -> C64 {
        self.a
    }

    pub fn b(self) -> C64 {
        self.b
    }

    /// `aā`
    pub fn up_weight(self) -> f64 {
        self.a.norm_sqr()
    }

    /// `bb̄`
    pub fn down_weight(self) -> f64 {
        self.b.norm_sqr()
    }

    pub fn unitary(self) -> UnitaryStrategy {
        build_u_ab(self.a, self.b).expect("validated parameters")
    }
}

/// Q's two moves `U₁ = U(a, b)` and `U₃ = U(a′, b′)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QStrategy {
    pub first: UnitaryParams,
    pub second: UnitaryParams,
}

impl QStrategy {
    pub fn new(first: UnitaryParams, second: UnitaryParams) -> Self {
        Self { first, second }
    }

    /// The same unitary on both turns.
    pub fn repeated(params: UnitaryParams) -> Self {
        Self::new(params, params)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlayTranscript {
    pub rho1: DensityMatrix,
    pub rho2: DensityMatrix,
    pub rho3: DensityMatrix,
    pub p_up: f64,
    pub picard_value: f64,
    pub q_value: f64,
}

/// State after Q's first move and Picard's mixed move.
pub fn two_move_state(q1: UnitaryParams, picard: PicardStrategy) -> DensityMatrix {
    let rho0 = PureState::up().to_density();
    let rho1 = evolve_density(&q1.unitary(), &rho0).expect("2x2");
    apply_mixed(&picard.action(), &rho1).expect("2x2")
}

pub fn play(q: QStrategy, picard: PicardStrategy) -> PlayTranscript {
    let rho0 = PureState::up().to_density();
    let rho1 = evolve_density(&q.first.unitary(), &rho0).expect("2x2");
    let rho2 = apply_mixed(&picard.action(), &rho1).expect("2x2");
    let rho3 = evolve_density(&q.second.unitary(), &rho2).expect("2x2");
    let p_up = measurement_probabilities(&rho3)[0];
    let picard_value = 1.0 - 2.0 * p_up;
    PlayTranscript {
        rho1,
        rho2,
        rho3,
        p_up,
        picard_value,
        q_value: -picard_value,
    }
}

/// Picard's expected payoff if the game stopped after his move.
pub fn two_move_value(q1: UnitaryParams, picard: PicardStrategy) -> f64 {
    let probs = measurement_probabilities(&two_move_state(q1, picard));
    -probs[0] + probs[1]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardResponse {
    pub p: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QResponse {
    pub params: UnitaryParams,
    pub value: f64,
}

/// Picard's best flip probability against Q's first move in the two-move game.
///
/// Picard's value is `(2p − 1)(aā − bb̄)`, so he flips surely when `aā > bb̄`,
/// never when `bb̄ > aā`, and mixes evenly at indifference.
pub fn picard_best_response(q1: UnitaryParams) -> PicardResponse {
    let (up, down) = (q1.up_weight(), q1.down_weight());
    let gap = up - down;
    if gap.abs() <= INDIFFERENCE_TOL {
        PicardResponse { p: 0.5, value: 0.0 }
    } else {
        PicardResponse {
            p: if gap > 0.0 { 1.0 } else { 0.0 },
            value: gap.abs(),
        }
    }
}

/// Q's best first move against Picard's `p` in the two-move game; value is Q's.
pub fn q_best_response(picard: PicardStrategy) -> QResponse {
    let p = picard.p();
    let value = (2.0 * p - 1.0).abs();
    if p - 0.5 > INDIFFERENCE_TOL {
        QResponse {
            params: UnitaryParams::flip(),
            value,
        }
    } else if (p - 0.5).abs() <= INDIFFERENCE_TOL {
        QResponse {
            params: UnitaryParams::no_flip(),
            value: 0.0,
        }
    } else {
        QResponse {
            params: UnitaryParams::no_flip(),
            value,
        }
    }
}

/// Equilibrium condition for the two-move game: `p = ½` and `aā = ½`.
pub fn is_two_move_equilibrium(picard: PicardStrategy, q1: UnitaryParams) -> bool {
    (picard.p() - 0.5).abs() <= INDIFFERENCE_TOL && (q1.up_weight() - 0.5).abs() <= INDIFFERENCE_TOL
}

/// True when both `F` and `N` leave `rho` unchanged.
pub fn is_fn_invariant(rho: &DensityMatrix) -> bool {
    [UnitaryStrategy::flip(), UnitaryStrategy::no_flip()]
        .iter()
        .all(|u| {
            evolve_density(u, rho)
                .map(|out| out.matrix().max_abs_diff(rho.matrix()) <= VALIDATION_TOL)
                .unwrap_or(false)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::IDENTITY_TOL;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn cm(picard: PicardMove, q: QMove) -> ClassicalMove {
        ClassicalMove::new(picard, q)
    }

    fn pic(p: f64) -> PicardStrategy {
        PicardStrategy::new(p).unwrap()
    }

    #[test]
    fn payoff_table_entries() {
        assert_eq!(classical_payoff(cm(PicardMove::N, QMove::FN)), 1);
        assert_eq!(classical_payoff(cm(PicardMove::N, QMove::NN)), -1);
        assert_eq!(classical_payoff(cm(PicardMove::F, QMove::FF)), 1);
    }

    #[test]
    fn pure_sequences() {
        use Spin::{Down as D, Up as U};
        assert_eq!(
            simulate_pure_sequence(cm(PicardMove::N, QMove::FN)),
            [U, D, D, D]
        );
        assert_eq!(
            simulate_pure_sequence(cm(PicardMove::N, QMove::NN)),
            [U, U, U, U]
        );
        assert_eq!(
            simulate_pure_sequence(cm(PicardMove::F, QMove::NF)),
            [U, U, D, U]
        );
    }

    #[test]
    fn final_down_iff_picard_wins() {
        for picard in PicardMove::ALL {
            for q in QMove::ALL {
                let mv = cm(picard, q);
                let final_down = simulate_pure_sequence(mv)[3] == Spin::Down;
                assert_eq!(final_down, classical_payoff(mv) == 1, "{mv:?}");
            }
        }
    }

    #[test]
    fn table_matches_quantum_play() {
        for picard in PicardMove::ALL {
            for q in QMove::ALL {
                let mv = cm(picard, q);
                let (qs, ps) = mv.as_strategies();
                let t = play(qs, ps);
                assert!(
                    (t.picard_value - f64::from(classical_payoff(mv))).abs() <= IDENTITY_TOL,
                    "{mv:?}"
                );
            }
        }
    }

    #[test]
    fn play_examples() {
        let winning = QStrategy::repeated(UnitaryParams::hadamard());
        for p in [0.0, 0.3, 0.5, 1.0] {
            let t = play(winning, pic(p));
            assert_abs_diff_eq!(t.p_up, 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(t.picard_value, -1.0, epsilon = 1e-9);
        }

        let t = play(QStrategy::repeated(UnitaryParams::no_flip()), pic(0.0));
        assert_abs_diff_eq!(t.p_up, 1.0, epsilon = 1e-15);

        let t = play(
            QStrategy::new(UnitaryParams::hadamard(), UnitaryParams::no_flip()),
            pic(0.5),
        );
        assert_abs_diff_eq!(t.p_up, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(t.picard_value, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn two_move_values() {
        let q = UnitaryParams::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        assert_abs_diff_eq!(two_move_value(q, pic(0.5)), 0.0, epsilon = 1e-15);
        assert_eq!(two_move_value(UnitaryParams::no_flip(), pic(0.0)), -1.0);
        assert_eq!(two_move_value(UnitaryParams::no_flip(), pic(1.0)), 1.0);
    }

    #[test]
    fn picard_responses() {
        assert_eq!(
            picard_best_response(UnitaryParams::no_flip()),
            PicardResponse { p: 1.0, value: 1.0 }
        );
        assert_eq!(
            picard_best_response(UnitaryParams::hadamard()),
            PicardResponse { p: 0.5, value: 0.0 }
        );
        // aā = 0.9 > bb̄ = 0.1: flipping surely earns 0.8, never flipping loses 0.8.
        let r = picard_best_response(UnitaryParams::real(0.9f64.sqrt(), 0.1f64.sqrt()).unwrap());
        assert_eq!(r.p, 1.0);
        assert_abs_diff_eq!(r.value, 0.8, epsilon = 1e-15);
        let r = picard_best_response(UnitaryParams::real(0.1f64.sqrt(), 0.9f64.sqrt()).unwrap());
        assert_eq!(r.p, 0.0);
        assert_abs_diff_eq!(r.value, 0.8, epsilon = 1e-15);
    }

    #[test]
    fn q_responses() {
        let r = q_best_response(pic(0.0));
        assert_eq!((r.params, r.value), (UnitaryParams::no_flip(), 1.0));
        let r = q_best_response(pic(0.5));
        assert_eq!((r.params, r.value), (UnitaryParams::no_flip(), 0.0));
        let r = q_best_response(pic(1.0));
        assert_eq!((r.params, r.value), (UnitaryParams::flip(), 1.0));
    }

    #[test]
    fn two_move_equilibrium_condition() {
        let s = FRAC_1_SQRT_2;
        assert!(is_two_move_equilibrium(
            pic(0.5),
            UnitaryParams::real(s, s).unwrap()
        ));
        let phased = UnitaryParams::new(C64::new(s, 0.0), C64::new(0.0, s)).unwrap();
        assert!(is_two_move_equilibrium(pic(0.5), phased));
        assert!(!is_two_move_equilibrium(
            pic(0.4),
            UnitaryParams::real(s, s).unwrap()
        ));
    }

    #[test]
    fn fn_invariance() {
        let plus = evolve_density(
            &UnitaryParams::hadamard().unitary(),
            &PureState::up().to_density(),
        )
        .unwrap();
        assert!(is_fn_invariant(&plus));
        assert!(!is_fn_invariant(&PureState::up().to_density()));
        assert!(is_fn_invariant(&DensityMatrix::maximally_mixed(2)));
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(PicardStrategy::new(1.1).is_err());
        assert!(PicardStrategy::new(f64::NAN).is_err());
        assert!(UnitaryParams::real(2.0, 0.0).is_err());
    }

    fn params() -> impl Strategy<Value = UnitaryParams> {
        (
            0.0..=1.0f64,
            0.0..std::f64::consts::TAU,
            0.0..std::f64::consts::TAU,
        )
            .prop_map(|(t, pa, pb)| {
                UnitaryParams::new(
                    C64::from_polar(t.sqrt(), pa),
                    C64::from_polar((1.0 - t).sqrt(), pb),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn zero_sum_exact(q1 in params(), q3 in params(), p in 0.0..=1.0f64) {
            let t = play(QStrategy::new(q1, q3), pic(p));
            prop_assert_eq!(t.picard_value + t.q_value, 0.0);
            prop_assert!((0.0..=1.0).contains(&t.p_up));
        }

        #[test]
        fn neutral_mix_gives_even_diagonal(q1 in params()) {
            let probs = measurement_probabilities(&two_move_state(q1, pic(0.5)));
            prop_assert!((probs[0] - 0.5).abs() <= 1e-12);
            prop_assert!((probs[1] - 0.5).abs() <= 1e-12);
        }

        #[test]
        fn picard_response_is_argmax(q1 in params()) {
            let best = picard_best_response(q1).value;
            for i in 0..=100 {
                let v = two_move_value(q1, pic(i as f64 / 100.0));
                prop_assert!(best >= v - 1e-12);
            }
        }
    }
}
