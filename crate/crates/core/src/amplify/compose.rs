use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gint::ExactScalar;
use crate::statevec::{Decomposition, ExactState, Target, Term};

use super::step::{amplify, relative_error_h, AmplifyOptions, AmplifyReport};

#[derive(Clone, Debug, Serialize)]
pub struct ComposeReport {
    pub delta: f64,
    pub copies: usize,
    pub base_rank: usize,
    pub tensor_rank: usize,
    pub measured_error: f64,
    /// `(1+δ)^n − 1`.
    pub formula_error: f64,
    pub formula_ok: bool,
    pub rounds: usize,
    pub final_error: f64,
    pub final_rank: usize,
    pub steps: Vec<AmplifyReport>,
}

/// Rounds needed to bring `error` to at most `target` when each round halves it.
pub fn rounds_needed(error: f64, target: f64) -> usize {
    if error <= target {
        0
    } else {
        (error / target).log2().ceil() as usize
    }
}

/// Tensors `copies` copies of `base`, then amplifies until the error is at most
/// `target_error`.
pub fn compose(
    base: &Decomposition,
    copies: usize,
    target_error: f64,
    opts: &AmplifyOptions,
) -> Result<(Decomposition, ComposeReport)> {
    if copies == 0 {
        return Err(Error::InvalidInput("copies must be positive".into()));
    }
    if !(target_error > 0.0) {
        return Err(Error::InvalidInput(format!(
            "target error must be positive, got {target_error}"
        )));
    }
    let delta = relative_error_h(base)?;
    let base_rank = base.rank();
    let qubits = base.n() * copies;
    let formula_error = (1.0 + delta).powi(copies as i32) - 1.0;
    let rounds = rounds_needed(formula_error, target_error);
    let final_entries = (base_rank as f64).powi(copies as i32)
        * 2f64.powi(rounds as i32)
        * 2f64.powi(qubits as i32);
    if final_entries > opts.term_budget as f64 {
        return Err(Error::BudgetExceeded(format!(
            "composition would hold up to {final_entries:.3e} amplitude entries (budget {})",
            opts.term_budget
        )));
    }
    let mut power = base.clone();
    for _ in 1..copies {
        power = power.tensor(base)?;
    }
    let measured_error = relative_error_h(&power)?;
    let tensor_rank = power.rank();
    let (out, steps) = amplify(&power, rounds, opts)?;
    let report = ComposeReport {
        delta,
        copies,
        base_rank,
        tensor_rank,
        measured_error,
        formula_error,
        formula_ok: (measured_error - formula_error).abs() <= 1e-9,
        rounds,
        final_error: relative_error_h(&out)?,
        final_rank: out.rank(),
        steps,
    };
    Ok((out, report))
}

/// `{(1, |0⟩)}` as an approximation of `|H⟩`.
pub fn zero_base() -> Decomposition {
    Decomposition::new(
        1,
        vec![Term::exact(ExactScalar::one(), ExactState::basis(1, 0))],
        Target::HTensor,
    )
    .expect("one term")
}

/// `log₂(1/cos²(π/8))`.
pub fn theoretical_slope() -> f64 {
    -(PI / 8.0).cos().powi(2).log2()
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingPoint {
    pub n: usize,
    pub rounds: usize,
    pub rank: usize,
    pub final_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub target_error: f64,
    pub points: Vec<ScalingPoint>,
    /// Least-squares slope of `log₂(rank)` against `n`.
    pub slope: f64,
    pub intercept: f64,
    pub theoretical_slope: f64,
}

/// Composes `{(1, |0⟩)}` to each `n` and fits `log₂(rank)` against `n`.
pub fn rank_scaling_experiment(
    ns: &[usize],
    target_error: f64,
    opts: &AmplifyOptions,
) -> Result<ScalingReport> {
    if ns.len() < 2 {
        return Err(Error::InvalidInput(
            "the fit needs at least two values of n".into(),
        ));
    }
    let base = zero_base();
    let mut points = Vec::with_capacity(ns.len());
    for &n in ns {
        let (_, rep) = compose(&base, n, target_error, opts)?;
        points.push(ScalingPoint {
            n,
            rounds: rep.rounds,
            rank: rep.final_rank,
            final_error: rep.final_error,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.rank as f64).log2()).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    Ok(ScalingReport {
        target_error,
        points,
        slope,
        intercept,
        theoretical_slope: theoretical_slope(),
    })
}

pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theoretical_slope_value() {
        assert!((theoretical_slope() - 0.2284).abs() < 1e-4);
    }

    #[test]
    fn compose_eight() {
        let (_, rep) = compose(&zero_base(), 8, 0.17, &AmplifyOptions::default()).unwrap();
        let t2 = (PI / 8.0).tan().powi(2);
        assert!((rep.delta - t2).abs() < 1e-12);
        assert!(rep.formula_ok);
        let expect_rounds = ((1.171573f64.powi(8) - 1.0) / 0.17).log2().ceil() as usize;
        assert_eq!(rep.rounds, expect_rounds);
        assert!(rep.final_error <= 0.17);
        assert!(rep.final_rank <= 1 << expect_rounds);
    }

    #[test]
    fn compose_single_copy_is_amplify() {
        let (_, rep) = compose(&zero_base(), 1, 0.05, &AmplifyOptions::default()).unwrap();
        assert_eq!(rep.tensor_rank, 1);
        assert_eq!(rep.rounds, 2);
        assert!(rep.final_error <= 0.05);
    }

    #[test]
    fn compose_exact_base() {
        let (c, s) = ((PI / 8.0).cos(), (PI / 8.0).sin());
        let base = Decomposition::new(
            1,
            vec![
                Term::exact(ExactScalar::cos_pi_8(), ExactState::basis(1, 0)),
                Term::exact(ExactScalar::sin_pi_8(), ExactState::basis(1, 1)),
            ],
            Target::HTensor,
        )
        .unwrap();
        assert!(c > s);
        let (_, rep) = compose(&base, 3, 0.1, &AmplifyOptions::default()).unwrap();
        assert_eq!(rep.rounds, 0);
        assert!(rep.measured_error < 1e-12);
        assert_eq!(rep.tensor_rank, 8);
    }

    #[test]
    fn rounds_monotone_in_target() {
        assert!(rounds_needed(1.0, 0.01) > rounds_needed(1.0, 0.1));
        assert_eq!(rounds_needed(0.1, 0.2), 0);
    }

    #[test]
    fn fit() {
        let (m, b) = least_squares(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]);
        assert!((m - 2.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12);
    }
}
