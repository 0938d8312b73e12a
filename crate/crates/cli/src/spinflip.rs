//! `spinflip`: play the three-move game or scan the two-move equilibria.

use num_complex::Complex64;
use qgames_core::quantum::{measurement_probabilities, DensityMatrix};
use qgames_core::spinflip::{
    is_fn_invariant, is_two_move_equilibrium, picard_best_response, play, q_best_response,
    two_move_value, PicardStrategy, QStrategy, UnitaryParams,
};

use crate::report::Report;
use crate::CliError;

/// Q's moves as `(a, b)` real/imaginary parts; the third move defaults to the first.
#[derive(Debug, Clone, Copy, Default)]
pub struct PlayArgs {
    pub a: (f64, f64),
    pub b: (f64, f64),
    pub a2: (Option<f64>, Option<f64>),
    pub b2: (Option<f64>, Option<f64>),
    pub p: f64,
}

fn params(a: (f64, f64), b: (f64, f64), which: &str) -> Result<UnitaryParams, CliError> {
    UnitaryParams::new(Complex64::new(a.0, a.1), Complex64::new(b.0, b.1))
        .map_err(|e| CliError::Input(format!("{which} move is not normalized: {e}")))
}

fn picard(p: f64) -> Result<PicardStrategy, CliError> {
    PicardStrategy::new(p).map_err(|e| CliError::Input(e.to_string()))
}

fn complex(z: Complex64) -> Vec<f64> {
    vec![z.re, z.im]
}

fn diagonal(rho: &DensityMatrix) -> Vec<f64> {
    measurement_probabilities(rho)
}

pub fn play_report(args: PlayArgs) -> Result<Report, CliError> {
    let first = params(args.a, args.b, "first")?;
    let second = if [args.a2.0, args.a2.1, args.b2.0, args.b2.1]
        .iter()
        .any(Option::is_some)
    {
        let or0 = |x: Option<f64>| x.unwrap_or(0.0);
        params(
            (or0(args.a2.0), or0(args.a2.1)),
            (or0(args.b2.0), or0(args.b2.1)),
            "third",
        )?
    } else {
        first
    };
    let picard = picard(args.p)?;
    let t = play(QStrategy::new(first, second), picard);
    let best_p = picard_best_response(first);
    let best_q = q_best_response(picard);
    Ok(Report::for_command("spinflip")
        .with("a", complex(first.a()))
        .with("b", complex(first.b()))
        .with("a2", complex(second.a()))
        .with("b2", complex(second.b()))
        .with("p", picard.p())
        .with("rho1_diag", diagonal(&t.rho1))
        .with("rho2_diag", diagonal(&t.rho2))
        .with("rho3_diag", diagonal(&t.rho3))
        .with("p_up", t.p_up)
        .with("picard_value", t.picard_value)
        .with("q_value", t.q_value)
        .with(
            "two_move",
            Report::default()
                .with("picard_value", two_move_value(first, picard))
                .with("fn_invariant", is_fn_invariant(&t.rho2))
                .with("equilibrium", is_two_move_equilibrium(picard, first))
                .with(
                    "picard_best_response",
                    Report::default()
                        .with("p", best_p.p)
                        .with("value", best_p.value),
                )
                .with(
                    "q_best_response",
                    Report::default()
                        .with("a", complex(best_q.params.a()))
                        .with("b", complex(best_q.params.b()))
                        .with("value", best_q.value),
                ),
        ))
}

/// Checks the two-move equilibrium condition on a `grid × grid` lattice of
/// Picard's `p` and Q's `|a|²`, both from 0 to 1.
pub fn equilibria_report(grid: usize) -> Result<Report, CliError> {
    if grid < 2 {
        return Err(CliError::Input(format!(
            "--grid must be at least 2, got {grid}"
        )));
    }
    let point = |i: usize| i as f64 / (grid - 1) as f64;
    let mut found = Vec::new();
    for i in 0..grid {
        let p = point(i);
        let picard = picard(p)?;
        for j in 0..grid {
            let w = point(j);
            let q1 = params((w.sqrt(), 0.0), ((1.0 - w).sqrt(), 0.0), "first")?;
            if is_two_move_equilibrium(picard, q1) {
                found.push(
                    Report::default()
                        .with("p", p)
                        .with("up_weight", w)
                        .with("picard_value", two_move_value(q1, picard)),
                );
            }
        }
    }
    Ok(Report::for_command("spinflip equilibria")
        .with("grid", grid)
        .with("points_checked", grid * grid)
        .with("equilibrium_count", found.len())
        .with("equilibria", found))
}
