//! Characteristic polynomials of small dense matrices and polynomial
//! evaluation helpers. Coefficients are stored in descending powers.

use num_complex::Complex64 as C64;

use crate::matrix::ComplexMatrix;

/// Monic characteristic polynomial of `m` by the Faddeev-LeVerrier recursion:
/// `M_k = A (M_{k-1} + c_{k-1} I)`, `c_k = -tr(M_k) / k`.
///
/// Returns `n + 1` coefficients in descending powers, leading coefficient 1.
/// Restricted to the small dense regime.
pub fn char_poly(m: &ComplexMatrix) -> Vec<C64> {
    let n = m.n();
    assert!(n <= 16, "char_poly is limited to n <= 16, got {n}");
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    let mut work = m.clone();
    for k in 1..=n {
        if k > 1 {
            work = m.matmul(&work.plus_scaled_identity(coeffs[k - 1]));
        }
        coeffs.push(-work.trace() / k as f64);
    }
    coeffs
}

/// Horner evaluation of a descending-power coefficient list.
pub fn poly_eval(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Derivative, again in descending powers.
pub fn poly_derivative(coeffs: &[C64]) -> Vec<C64> {
    let degree = coeffs.len() - 1;
    coeffs[..degree]
        .iter()
        .enumerate()
        .map(|(i, c)| c * (degree - i) as f64)
        .collect()
}

/// Magnitude scale of the evaluation `sum |c_i| |z|^(deg-i)`; `|p(z)|` below
/// roughly machine epsilon times this is indistinguishable from zero.
pub fn eval_scale(coeffs: &[C64], z: C64) -> f64 {
    let r = z.norm();
    coeffs.iter().fold(0.0, |acc, c| acc * r + c.norm())
}
