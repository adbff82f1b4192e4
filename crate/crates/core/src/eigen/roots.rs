//! Simultaneous complex root finding by the Aberth-Ehrlich iteration.

use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use super::poly::{eval_scale, poly_derivative, poly_eval};
use crate::error::{Error, Result};

/// Find all complex roots of the polynomial with descending-power `coeffs`.
///
/// A root counts as converged once `|p(z)|` falls below `tol` times the
/// evaluation magnitude scale at `z`, which bottoms out gracefully at the
/// roundoff floor for multiple roots. Non-convergence returns the best
/// iterate inside the error.
pub fn roots_aberth(coeffs: &[C64], tol: f64, max_iter: usize) -> Result<Vec<C64>> {
    if coeffs.len() < 2 {
        return Err(Error::InvalidParameter("polynomial degree must be at least 1".into()));
    }
    if coeffs[0].norm() == 0.0 {
        return Err(Error::InvalidParameter("leading coefficient must be nonzero".into()));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let monic: Vec<C64> = coeffs.iter().map(|c| c / coeffs[0]).collect();
    let degree = monic.len() - 1;
    if degree == 1 {
        return Ok(vec![-monic[1]]);
    }
    let deriv = poly_derivative(&monic);

    // Initial guesses sit on the Cauchy coefficient-bound circle, equally
    // spaced, rotated by a fixed irrational offset so no guess starts on a
    // symmetry axis of the root set.
    let radius = 1.0 + monic.iter().skip(1).map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..degree)
        .map(|k| C64::from_polar(radius, TAU * k as f64 / degree as f64 + FRAC_1_SQRT_2))
        .collect();

    for _ in 0..max_iter {
        let mut all_converged = true;
        for k in 0..degree {
            let p = poly_eval(&monic, z[k]);
            if p.norm() <= tol * eval_scale(&monic, z[k]) {
                continue;
            }
            all_converged = false;
            let dp = poly_eval(&deriv, z[k]);
            let w = if dp.norm() == 0.0 {
                // stationary point: nudge off it instead of dividing by zero
                C64::from_polar(1e-6 * (1.0 + z[k].norm()), FRAC_1_SQRT_2)
            } else {
                p / dp
            };
            let repulsion: C64 = (0..degree)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 { C64::new(0.0, 0.0) } else { d.inv() }
                })
                .sum();
            let denom = C64::new(1.0, 0.0) - w * repulsion;
            let step = if denom.norm() == 0.0 { w } else { w / denom };
            z[k] -= step;
            if !z[k].is_finite() {
                return Err(Error::Convergence { iterations: max_iter, best: z });
            }
        }
        if all_converged {
            return Ok(z);
        }
    }
    let converged = z
        .iter()
        .all(|&zk| poly_eval(&monic, zk).norm() <= tol * eval_scale(&monic, zk));
    if converged {
        Ok(z)
    } else {
        Err(Error::Convergence { iterations: max_iter, best: z })
    }
}
