//! Trimmer spectrum in closed form plus a small dense complex eigensolver
//! built from the characteristic polynomial, Aberth root finding, and
//! inverse iteration. The two routes are independent so either one can
//! cross-check the other.

pub mod poly;
pub mod roots;

pub use poly::char_poly;
pub use roots::roots_aberth;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hamiltonian::build_hamiltonian;
use crate::matrix::{vec_norm, ComplexMatrix};
use crate::params::SystemParams;
use poly::{poly_derivative, poly_eval};

/// Default stopping tolerance on `|p(root)|` relative to the evaluation scale.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
/// Default residual tolerance for eigenvectors.
pub const DEFAULT_VECTOR_TOL: f64 = 1e-10;
/// Default iteration cap shared by the root finder and inverse iteration.
pub const DEFAULT_MAX_ITER: usize = 200;

/// A repeated eigenvalue with fewer independent eigenvectors than its
/// multiplicity. `shifted_rank` is the measured rank of `(H - E I)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Defect {
    pub eigenvalue: C64,
    pub algebraic: usize,
    pub geometric: usize,
    pub shifted_rank: usize,
}

/// Eigenvalues with matched unit-norm eigenvectors and measured residuals.
///
/// The phase of every eigenvector is fixed by making its last component of
/// appreciable size real and positive. For a defective eigenvalue the
/// available eigenvector fills all of its slots and the duplication is
/// declared in `defects` rather than left silent.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<C64>,
    pub eigenvectors: Vec<Vec<C64>>,
    pub residuals: Vec<f64>,
    pub defects: Vec<Defect>,
}

impl Spectrum {
    pub fn is_defective(&self) -> bool {
        !self.defects.is_empty()
    }
}

/// Unnormalized components of the paired trimmer eigenvectors together with
/// the discriminant they were evaluated at.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TrimmerSpectralData {
    pub a_plus: C64,
    pub a_minus: C64,
    pub b_plus: C64,
    pub b_minus: C64,
    /// The discriminant `2J^2 - gamma^2`.
    pub delta_sq: f64,
}

/// Normalize to unit Euclidean norm and rotate the global phase so the last
/// component of appreciable size is real and positive.
fn normalize_and_fix_phase(v: &mut [C64]) {
    let norm = vec_norm(v);
    for e in v.iter_mut() {
        *e /= norm;
    }
    let anchor = v.iter().rposition(|e| e.norm() > 1e-9);
    if let Some(idx) = anchor {
        let phase = v[idx] / v[idx].norm();
        for e in v.iter_mut() {
            *e /= phase;
        }
        // the anchor is now real up to roundoff; make that exact
        v[idx] = C64::new(v[idx].re, 0.0);
    }
}

fn residual_of(m: &ComplexMatrix, value: C64, vector: &[C64]) -> f64 {
    let mv = m.matvec(vector);
    let diff: Vec<C64> = mv.iter().zip(vector).map(|(a, b)| a - value * b).collect();
    vec_norm(&diff)
}

/// Closed-form spectrum of the trimmer: `E0 = omega` with eigenvector built
/// from `(-1, -i gamma/J, 1)`, and `E± = omega ± sqrt(2J^2 - gamma^2)` with
/// eigenvectors built from `(a±, b±, 1)`. The square root is the principal
/// complex root, so a negative discriminant yields `omega ± i sqrt(gamma^2 -
/// 2J^2)`. Eigenvalues are ordered `[E0, E+, E-]`.
///
/// Evaluable at the coalescence point, where the three eigenvectors collapse
/// onto one; requires `J > 0` because the component formulas divide by `J`.
pub fn trimmer_spectrum(params: &SystemParams) -> Result<(Spectrum, TrimmerSpectralData)> {
    let (omega, gamma, j) = (params.omega(), params.gamma(), params.j());
    if j <= 0.0 {
        return Err(Error::Degenerate(
            "trimmer_spectrum needs J > 0 (decoupled cavities: use eig instead)".into(),
        ));
    }
    let disc = params.discriminant();
    let root = if disc >= 0.0 {
        C64::new(disc.sqrt(), 0.0)
    } else {
        C64::new(0.0, (-disc).sqrt())
    };
    let j2 = j * j;
    let a_plus = (C64::new(j2 - gamma * gamma, 0.0) - C64::i() * gamma * root) / j2;
    let a_minus = (C64::new(j2 - gamma * gamma, 0.0) + C64::i() * gamma * root) / j2;
    let b_plus = (C64::new(0.0, -gamma) + root) / j;
    let b_minus = (C64::new(0.0, -gamma) - root) / j;

    let e0 = C64::new(omega, 0.0);
    let e_plus = omega + root;
    let e_minus = omega - root;

    let one = C64::new(1.0, 0.0);
    let mut v0 = vec![-one, C64::new(0.0, -gamma / j), one];
    let mut vp = vec![a_plus, b_plus, one];
    let mut vm = vec![a_minus, b_minus, one];
    normalize_and_fix_phase(&mut v0);
    normalize_and_fix_phase(&mut vp);
    normalize_and_fix_phase(&mut vm);

    let h = build_hamiltonian(params);
    let eigenvalues = vec![e0, e_plus, e_minus];
    let eigenvectors = vec![v0, vp, vm];
    let residuals = eigenvalues
        .iter()
        .zip(&eigenvectors)
        .map(|(value, vector)| residual_of(&h, *value, vector))
        .collect();

    Ok((
        Spectrum { eigenvalues, eigenvectors, residuals, defects: Vec::new() },
        TrimmerSpectralData { a_plus, a_minus, b_plus, b_minus, delta_sq: disc },
    ))
}

/// Refine an approximate eigenvalue into a unit-norm eigenvector by shifted
/// inverse iteration, using the regularized solve for the nearly singular
/// shifted matrix. The returned vector satisfies `|| m v - eigenvalue v || <=
/// tol` and carries the standard phase convention.
pub fn eigenvector_inverse_iteration(
    m: &ComplexMatrix,
    eigenvalue: C64,
    tol: f64,
) -> Result<Vec<C64>> {
    let n = m.n();
    let shifted = m.plus_scaled_identity(-eigenvalue);
    // graded start vector; avoids being orthogonal to eigenvectors with the
    // mirror antisymmetry of the trimmer
    let mut v: Vec<C64> = (0..n).map(|i| C64::new(1.0 + i as f64, 0.0)).collect();
    let norm = vec_norm(&v);
    for e in v.iter_mut() {
        *e /= norm;
    }
    for _ in 0..DEFAULT_MAX_ITER {
        let mut w = shifted.solve(&v)?;
        let norm = vec_norm(&w);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Convergence { iterations: DEFAULT_MAX_ITER, best: v });
        }
        for e in w.iter_mut() {
            *e /= norm;
        }
        let res = residual_of(m, eigenvalue, &w);
        v = w;
        if res <= tol {
            normalize_and_fix_phase(&mut v);
            return Ok(v);
        }
    }
    Err(Error::Convergence { iterations: DEFAULT_MAX_ITER, best: v })
}

/// Orthonormal basis of the numerical null space of `m`, via row echelon
/// with partial pivoting: columns without a pivot above `tol` are free, and
/// each free column seeds one basis vector by back substitution.
fn null_space(m: &ComplexMatrix, tol: f64) -> Vec<Vec<C64>> {
    let n = m.n();
    let mut a: Vec<C64> = (0..n * n).map(|k| m.get(k / n, k % n)).collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row >= n {
            break;
        }
        let pivot_row = (row..n)
            .max_by(|&r, &s| a[r * n + col].norm().partial_cmp(&a[s * n + col].norm()).unwrap())
            .unwrap();
        if a[pivot_row * n + col].norm() <= tol {
            continue;
        }
        if pivot_row != row {
            for j in 0..n {
                a.swap(row * n + j, pivot_row * n + j);
            }
        }
        let pivot = a[row * n + col];
        for r in 0..n {
            if r == row {
                continue;
            }
            let factor = a[r * n + col] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in 0..n {
                let v = a[row * n + j];
                a[r * n + j] -= factor * v;
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[free] = C64::new(1.0, 0.0);
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[r * n + free] / a[r * n + pc];
        }
        // Gram-Schmidt against the vectors already collected
        for b in &basis {
            let overlap: C64 = b.iter().zip(&v).map(|(bi, vi): (&C64, &C64)| bi.conj() * vi).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= overlap * bi;
            }
        }
        normalize_and_fix_phase(&mut v);
        basis.push(v);
    }
    basis
}

/// Group approximate roots whose mutual distance is within the clustering
/// radius; returns `(mean, multiplicity)` per group, ordered by `(re, im)`.
fn cluster_roots(roots: &[C64]) -> Vec<(C64, usize)> {
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    // a root of multiplicity m is only locatable to ~tol^(1/m); with the
    // default tol this floor is ~1e-4 for a triple root, so the radius sits
    // a safe factor above it while staying far below genuine level spacings
    let radius = 2e-3 * scale;
    let mut sorted = roots.to_vec();
    sorted.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let mut groups: Vec<(C64, usize)> = Vec::new();
    for r in sorted {
        match groups.iter_mut().find(|(mean, _)| (r - *mean).norm() <= radius) {
            Some((mean, count)) => {
                // running mean keeps the representative centered on the cluster
                *mean = (*mean * *count as f64 + r) / (*count as f64 + 1.0);
                *count += 1;
            }
            None => groups.push((r, 1)),
        }
    }
    groups
}

/// Full numerical eigendecomposition: characteristic polynomial, Aberth root
/// finding with one Newton polish per root, then inverse iteration per
/// distinct eigenvalue. Repeated eigenvalues are checked for defectiveness
/// via the rank of the shifted matrix and flagged instead of silently
/// duplicating eigenvectors. Restricted to `n <= 16`.
pub fn eig(m: &ComplexMatrix) -> Result<Spectrum> {
    let n = m.n();
    assert!(n <= 16, "eig is limited to n <= 16, got {n}");
    if n == 1 {
        let value = m.get(0, 0);
        return Ok(Spectrum {
            eigenvalues: vec![value],
            eigenvectors: vec![vec![C64::new(1.0, 0.0)]],
            residuals: vec![0.0],
            defects: Vec::new(),
        });
    }
    let coeffs = char_poly(m);
    let deriv = poly_derivative(&coeffs);
    let mut roots = roots_aberth(&coeffs, DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER)?;
    // one Newton step per root removes the dominant root-finder bias
    for z in roots.iter_mut() {
        let p = poly_eval(&coeffs, *z);
        let dp = poly_eval(&deriv, *z);
        if dp.norm() > 0.0 {
            let step = p / dp;
            if step.norm() < 1e-3 * (1.0 + z.norm()) {
                *z -= step;
            }
        }
    }

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    let mut defects = Vec::new();
    for (value, multiplicity) in cluster_roots(&roots) {
        if multiplicity == 1 {
            let vector = eigenvector_inverse_iteration(m, value, DEFAULT_VECTOR_TOL)?;
            residuals.push(residual_of(m, value, &vector));
            eigenvalues.push(value);
            eigenvectors.push(vector);
            continue;
        }
        // repeated eigenvalue: take the null space of the shifted matrix, and
        // if it is smaller than the multiplicity declare the defect instead of
        // inventing extra eigenvectors
        let rank_tol = 1e-8 * m.max_norm().max(1.0);
        let shifted = m.plus_scaled_identity(-value);
        let basis = null_space(&shifted, rank_tol);
        let shifted_rank = n - basis.len();
        let geometric = basis.len().max(1);
        if basis.is_empty() {
            // numerically nothing under the rank threshold: fall back to the
            // best-effort inverse iterate
            let vector = match eigenvector_inverse_iteration(m, value, DEFAULT_VECTOR_TOL) {
                Ok(v) => v,
                Err(Error::Convergence { best, .. }) => best,
                Err(other) => return Err(other),
            };
            defects.push(Defect {
                eigenvalue: value,
                algebraic: multiplicity,
                geometric: 1,
                shifted_rank,
            });
            for _ in 0..multiplicity {
                residuals.push(residual_of(m, value, &vector));
                eigenvalues.push(value);
                eigenvectors.push(vector.clone());
            }
            continue;
        }
        if geometric < multiplicity {
            defects.push(Defect { eigenvalue: value, algebraic: multiplicity, geometric, shifted_rank });
        }
        for slot in 0..multiplicity {
            let vector = basis[slot.min(basis.len() - 1)].clone();
            residuals.push(residual_of(m, value, &vector));
            eigenvalues.push(value);
            eigenvectors.push(vector);
        }
    }
    Ok(Spectrum { eigenvalues, eigenvectors, residuals, defects })
}

/// Largest distance between matched entries of two equal-length eigenvalue
/// sets, minimized over all assignments (exact bitmask dynamic program, so
/// meant for the small dense regime).
pub fn eigenvalue_match_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "eigenvalue sets must have equal length");
    let n = a.len();
    assert!(n <= 16, "matching is limited to n <= 16");
    // dp over subsets of b assigned to the first popcount(mask) entries of a
    let full = 1usize << n;
    let mut dp = vec![f64::INFINITY; full];
    dp[0] = 0.0;
    for mask in 0..full {
        if dp[mask].is_infinite() {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i >= n {
            continue;
        }
        for (jj, bj) in b.iter().enumerate() {
            if mask & (1 << jj) != 0 {
                continue;
            }
            let next = mask | (1 << jj);
            let cost = dp[mask].max((a[i] - bj).norm());
            if cost < dp[next] {
                dp[next] = cost;
            }
        }
    }
    dp[full - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{classify_phase_default, PhaseClass};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn symmetric_phase_example_eigenvalues() {
        // sqrt(2*25 - 1) = 7, so E = {5, 12, -2}
        let p = SystemParams::natural(5.0, 5.0).unwrap();
        let (spec, data) = trimmer_spectrum(&p).unwrap();
        assert!((spec.eigenvalues[0] - c(5.0, 0.0)).norm() < 1e-12);
        assert!((spec.eigenvalues[1] - c(12.0, 0.0)).norm() < 1e-12);
        assert!((spec.eigenvalues[2] - c(-2.0, 0.0)).norm() < 1e-12);
        assert_eq!(data.delta_sq, 49.0);
        // symmetric phase: |a±| = 1 and |b±| = sqrt(2)
        assert!((data.a_plus.norm() - 1.0).abs() < 1e-12);
        assert!((data.a_minus.norm() - 1.0).abs() < 1e-12);
        assert!((data.b_plus.norm() - 2.0_f64.sqrt()).abs() < 1e-12);
        assert!((data.b_minus.norm() - 2.0_f64.sqrt()).abs() < 1e-12);
        for r in &spec.residuals {
            assert!(*r < 1e-12);
        }
    }

    #[test]
    fn hermitian_limit_spectrum() {
        let p = SystemParams::new(5.0, 0.0, 5.0).unwrap();
        let (spec, _) = trimmer_spectrum(&p).unwrap();
        let s = 5.0 * 2.0_f64.sqrt();
        assert!((spec.eigenvalues[0] - c(5.0, 0.0)).norm() < 1e-12);
        assert!((spec.eigenvalues[1] - c(5.0 + s, 0.0)).norm() < 1e-12);
        assert!((spec.eigenvalues[2] - c(5.0 - s, 0.0)).norm() < 1e-12);
        // E0 eigenvector is proportional to (-1, 0, 1)
        let v0 = &spec.eigenvectors[0];
        assert!((v0[0] + FRAC_1_SQRT_2).norm() < 1e-12);
        assert!(v0[1].norm() < 1e-12);
        assert!((v0[2] - FRAC_1_SQRT_2).norm() < 1e-12);
    }

    #[test]
    fn broken_phase_example() {
        let p = SystemParams::natural(5.0, 0.5).unwrap();
        let (spec, data) = trimmer_spectrum(&p).unwrap();
        let d = 0.5_f64.sqrt();
        assert!((spec.eigenvalues[1] - c(5.0, d)).norm() < 1e-12);
        assert!((spec.eigenvalues[2] - c(5.0, -d)).norm() < 1e-12);
        // a± are real in the broken phase; frozen from the formula
        // (J^2 - gamma^2 + gamma*delta)/J^2 at gamma=1, J=0.5
        assert!(data.a_plus.im.abs() < 1e-15);
        assert!((data.a_plus.re - (-0.171_572_875_253_809_8)).abs() < 1e-12);
    }

    #[test]
    fn zero_coupling_is_degenerate() {
        let p = SystemParams::new(5.0, 1.0, 0.0).unwrap();
        assert!(matches!(trimmer_spectrum(&p), Err(Error::Degenerate(_))));
    }

    #[test]
    fn symmetric_pair_is_real_and_centered() {
        let p = SystemParams::natural(2.0, 3.0).unwrap();
        assert_eq!(classify_phase_default(&p), PhaseClass::Symmetric);
        let (spec, _) = trimmer_spectrum(&p).unwrap();
        assert!(spec.eigenvalues[1].im.abs() <= 1e-12);
        assert!(spec.eigenvalues[2].im.abs() <= 1e-12);
        let sum = spec.eigenvalues[1] + spec.eigenvalues[2];
        assert!((sum - c(4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn inverse_iteration_picks_the_right_axis() {
        let m =
            ComplexMatrix::new(2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)])
                .unwrap();
        let v = eigenvector_inverse_iteration(&m, c(2.0, 0.0), 1e-10).unwrap();
        assert!(v[0].norm() < 1e-10);
        assert!((v[1] - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn inverse_iteration_matches_analytic_central_eigenvector() {
        // eigenvalue omega=5 of the (gamma=1, J=5) trimmer has eigenvector
        // (-1, -i/5, 1)/sqrt(2 + 1/25)
        let p = SystemParams::natural(5.0, 5.0).unwrap();
        let h = build_hamiltonian(&p);
        let v = eigenvector_inverse_iteration(&h, c(5.0, 0.0), 1e-10).unwrap();
        let norm = (2.0_f64 + 1.0 / 25.0).sqrt();
        let expected = [c(-1.0 / norm, 0.0), c(0.0, -0.2 / norm), c(1.0 / norm, 0.0)];
        for (got, want) in v.iter().zip(expected) {
            assert!((got - want).norm() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn eig_matches_analytic_in_broken_phase() {
        let p = SystemParams::natural(5.0, 0.5).unwrap();
        let numeric = eig(&build_hamiltonian(&p)).unwrap();
        let (analytic, _) = trimmer_spectrum(&p).unwrap();
        let dist = eigenvalue_match_distance(&numeric.eigenvalues, &analytic.eigenvalues);
        assert!(dist < 1e-9, "distance {dist}");
    }

    #[test]
    fn eig_flags_triple_coalescence_at_the_critical_coupling() {
        let p = SystemParams::natural(5.0, FRAC_1_SQRT_2).unwrap();
        let spec = eig(&build_hamiltonian(&p)).unwrap();
        assert!(spec.is_defective());
        let defect = &spec.defects[0];
        // all three eigenvalues coalesce at omega and only one eigenvector
        // survives: rank(H - omega I) = 2
        assert_eq!(defect.algebraic, 3);
        assert_eq!(defect.geometric, 1);
        assert_eq!(defect.shifted_rank, 2);
        assert!((defect.eigenvalue - c(5.0, 0.0)).norm() < 1e-3);
    }

    #[test]
    fn eig_hermitian_trimmer_eigenvalues_are_real() {
        let p = SystemParams::new(5.0, 0.0, 2.0).unwrap();
        let spec = eig(&build_hamiltonian(&p)).unwrap();
        for e in &spec.eigenvalues {
            assert!(e.im.abs() <= 1e-10, "eigenvalue {e}");
        }
    }

    #[test]
    fn eig_on_random_tridiagonals_has_small_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let n = rng.gen_range(2..=8);
            let mut m = ComplexMatrix::zeros(n);
            for i in 0..n {
                m.set(i, i, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                if i + 1 < n {
                    m.set(i, i + 1, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                    m.set(i + 1, i, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                }
            }
            let spec = eig(&m).unwrap();
            for r in &spec.residuals {
                assert!(*r <= 1e-9, "residual {r}");
            }
            let sum: C64 = spec.eigenvalues.iter().sum();
            assert!((sum - m.trace()).norm() < 1e-10);
        }
    }

    #[test]
    fn oracle_equivalence_on_random_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 200 {
            let omega = rng.gen_range(-5.0..10.0);
            let j = 10f64.powf(rng.gen_range(-2.0..2.0));
            let p = SystemParams::natural(omega, j).unwrap();
            if classify_phase_default(&p) == PhaseClass::ExceptionalPoint {
                continue;
            }
            checked += 1;
            let numeric = eig(&build_hamiltonian(&p)).unwrap();
            let (analytic, _) = trimmer_spectrum(&p).unwrap();
            let dist = eigenvalue_match_distance(&numeric.eigenvalues, &analytic.eigenvalues);
            let scale = analytic.eigenvalues.iter().map(|e| e.norm()).fold(1.0, f64::max);
            assert!(dist <= 1e-9 * scale, "j={j} omega={omega}: distance {dist}");
        }
    }

    #[test]
    fn localization_weight_tends_to_zero_with_coupling() {
        // |a+| = 1 above the transition, strictly below 1 under it, and
        // falling off like J^2/(2 gamma^2) as J -> 0
        let above = trimmer_spectrum(&SystemParams::natural(0.0, 2.0).unwrap()).unwrap().1;
        assert!((above.a_plus.norm() - 1.0).abs() < 1e-12);
        let below = trimmer_spectrum(&SystemParams::natural(0.0, 0.5).unwrap()).unwrap().1;
        assert!(below.a_plus.norm() < 1.0);
        let tiny = trimmer_spectrum(&SystemParams::natural(0.0, 1e-3).unwrap()).unwrap().1;
        // leading term of the series is J^2/(2 gamma^2); the subtraction in
        // a+ leaves ~1e-10 of cancellation noise, so compare at 1%
        let predicted = 0.5e-6;
        assert!((tiny.a_plus.norm() - predicted).abs() < 1e-2 * predicted);
    }
}
