//! Single-photon Hamiltonian of the trimmer chain.

use num_complex::Complex64 as C64;

use crate::matrix::ComplexMatrix;
use crate::params::SystemParams;

/// Build the 3x3 single-photon Hamiltonian: tridiagonal with off-diagonal
/// coupling `J` and diagonal `(omega - i gamma, omega, omega + i gamma)`.
/// Site order is passive, central, active. The trace is `3 omega` exactly.
pub fn build_hamiltonian(params: &SystemParams) -> ComplexMatrix {
    let (omega, gamma, j) = (params.omega(), params.gamma(), params.j());
    let zero = C64::new(0.0, 0.0);
    let jc = C64::new(j, 0.0);
    ComplexMatrix::new(
        3,
        vec![
            C64::new(omega, -gamma),
            jc,
            zero,
            jc,
            C64::new(omega, 0.0),
            jc,
            zero,
            jc,
            C64::new(omega, gamma),
        ],
    )
    .expect("trimmer entries are finite by construction")
}

/// Mirror-conjugate `P M P` where `P` exchanges the outer sites. Together
/// with elementwise conjugation this expresses the symmetry `P H(gamma) P =
/// H(-gamma) = conj(H(gamma))` checked in the tests.
pub fn mirror(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.n();
    ComplexMatrix::from_fn(n, |i, j| m.get(n - 1 - i, n - 1 - j))
}
