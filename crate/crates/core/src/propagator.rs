//! Independent numerical propagation of the single-photon equations of
//! motion: fixed-step fourth-order Runge-Kutta and a scaled-and-squared
//! truncated-Taylor matrix exponential. Two unrelated methods, so a bug in
//! either cannot silently validate the closed forms they are checked against.

use num_complex::Complex64 as C64;

use crate::dynamics::{AmplitudeState, Method, Trajectory};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::params::SystemParams;

/// Norm above which a propagated state counts as diverged.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum IntegratorMethod {
    Rk4,
    MatrixExp,
}

/// Step size and truncation controls for the numerical propagators.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct IntegratorConfig {
    /// Integration step; output grid intervals are subdivided to respect it.
    pub dt: f64,
    pub method: IntegratorMethod,
    /// Truncation tolerance of the Taylor series in the matrix exponential.
    pub taylor_tol: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { dt: 1e-4, method: IntegratorMethod::Rk4, taylor_tol: 1e-14 }
    }
}

impl IntegratorConfig {
    pub fn new(dt: f64, method: IntegratorMethod, taylor_tol: f64) -> Result<Self> {
        let config = Self { dt, method, taylor_tol };
        config.validate()?;
        Ok(config)
    }

    /// Default step `1e-4` in units of the inverse dominant rate: `1/gamma`,
    /// falling back to `1/J` in the Hermitian limit.
    pub fn for_params(params: &SystemParams) -> Self {
        let rate = if params.gamma() > 0.0 {
            params.gamma()
        } else if params.j() > 0.0 {
            params.j()
        } else {
            1.0
        };
        Self { dt: 1e-4 / rate, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !self.taylor_tol.is_finite() || self.taylor_tol <= 0.0 || self.taylor_tol >= 1e-6 {
            return Err(Error::InvalidParameter(format!(
                "taylor_tol must lie in (0, 1e-6), got {}",
                self.taylor_tol
            )));
        }
        Ok(())
    }
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::GridMismatch("time grid is empty".into()));
    }
    if t_grid[0] != 0.0 {
        return Err(Error::GridMismatch(format!(
            "time grid must start at 0, got {}",
            t_grid[0]
        )));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::GridMismatch("time grid must be strictly increasing".into()));
    }
    Ok(())
}

fn rhs(m: &ComplexMatrix, state: &[C64; 3]) -> [C64; 3] {
    // i d/dt psi = H psi  =>  d/dt psi = -i H psi
    let mi = C64::new(0.0, -1.0);
    let v = m.matvec(state);
    [mi * v[0], mi * v[1], mi * v[2]]
}

fn axpy(state: &[C64; 3], k: &[C64; 3], factor: f64) -> [C64; 3] {
    [state[0] + k[0] * factor, state[1] + k[1] * factor, state[2] + k[2] * factor]
}

/// Classical fourth-order Runge-Kutta integration of `d psi/dt = -i H psi`
/// over the given output grid, subdividing each interval so internal steps
/// never exceed `config.dt`. The state is *not* renormalized: norm growth in
/// the gain-dominated regime is physical.
pub fn propagate_rk4(
    m: &ComplexMatrix,
    initial: &AmplitudeState,
    t_grid: &[f64],
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    if m.n() != 3 {
        return Err(Error::Dimension(format!(
            "single-photon propagation needs a 3x3 matrix, got {}x{0}",
            m.n()
        )));
    }
    config.validate()?;
    check_grid(t_grid)?;
    let mut state = initial.as_array();
    let mut states = Vec::with_capacity(t_grid.len());
    states.push(AmplitudeState::from_array(state));
    for pair in t_grid.windows(2) {
        let h = pair[1] - pair[0];
        let substeps = ((h / config.dt - 1e-9).ceil() as usize).max(1);
        let dt = h / substeps as f64;
        for _ in 0..substeps {
            let k1 = rhs(m, &state);
            let k2 = rhs(m, &axpy(&state, &k1, dt / 2.0));
            let k3 = rhs(m, &axpy(&state, &k2, dt / 2.0));
            let k4 = rhs(m, &axpy(&state, &k3, dt));
            for i in 0..3 {
                state[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
            }
        }
        let snapshot = AmplitudeState::from_array(state);
        let norm = snapshot.norm();
        if !norm.is_finite() || norm > DIVERGENCE_LIMIT {
            return Err(Error::Divergence(norm));
        }
        states.push(snapshot);
    }
    Trajectory::new(t_grid.to_vec(), states, initial.basis_site(), Method::Rk4)
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series:
/// the scaling exponent brings the one-norm of the scaled matrix to 0.5 or
/// below, and the series stops once a term falls under `tol` relative to the
/// accumulated sum.
fn matrix_exp(a: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    let norm = a.one_norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a.scaled(C64::new(1.0 / 2f64.powi(squarings as i32), 0.0));
    let mut result = ComplexMatrix::identity(a.n());
    let mut term = ComplexMatrix::identity(a.n());
    // ||scaled|| <= 1/2 makes the series decay at least geometrically; 60
    // terms is far past any stopping point it can need
    for k in 1..=60 {
        term = term.matmul(&scaled).scaled(C64::new(1.0 / k as f64, 0.0));
        result = ComplexMatrix::from_fn(result.n(), |i, j| result.get(i, j) + term.get(i, j));
        if term.one_norm() <= tol * result.one_norm() {
            break;
        }
    }
    let mut exp = result;
    for _ in 0..squarings {
        exp = exp.matmul(&exp);
    }
    exp
}

/// Propagate by the exact matrix exponential `U(t) = exp(-i m t)`.
pub fn propagate_expm(
    m: &ComplexMatrix,
    initial: &AmplitudeState,
    t: f64,
    config: &IntegratorConfig,
) -> Result<AmplitudeState> {
    if m.n() != 3 {
        return Err(Error::Dimension(format!(
            "single-photon propagation needs a 3x3 matrix, got {}x{0}",
            m.n()
        )));
    }
    config.validate()?;
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter(format!("time must be finite and >= 0, got {t}")));
    }
    let generator = m.scaled(C64::new(0.0, -t));
    let u = matrix_exp(&generator, config.taylor_tol);
    let v = u.matvec(&initial.as_array());
    Ok(AmplitudeState::new(v[0], v[1], v[2]))
}

/// Propagate over a whole grid with the method named in the config.
pub fn propagate(
    m: &ComplexMatrix,
    initial: &AmplitudeState,
    t_grid: &[f64],
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    match config.method {
        IntegratorMethod::Rk4 => propagate_rk4(m, initial, t_grid, config),
        IntegratorMethod::MatrixExp => {
            config.validate()?;
            check_grid(t_grid)?;
            let states = t_grid
                .iter()
                .map(|&t| propagate_expm(m, initial, t, config))
                .collect::<Result<Vec<_>>>()?;
            Trajectory::new(t_grid.to_vec(), states, initial.basis_site(), Method::MatrixExp)
        }
    }
}

/// Largest componentwise amplitude deviation between two trajectories on the
/// same time grid.
pub fn compare_trajectories(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    if a.times() != b.times() {
        return Err(Error::GridMismatch(
            "trajectories must share an identical time grid".into(),
        ));
    }
    let mut max = 0.0f64;
    for (sa, sb) in a.states().iter().zip(b.states()) {
        for (ca, cb) in sa.as_array().iter().zip(sb.as_array()) {
            max = max.max((ca - cb).norm());
        }
    }
    Ok(max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{sample_trajectory, InitialSite};
    use crate::hamiltonian::build_hamiltonian;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn grid(t_max: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn decoupled_passive_cavity_decays_as_a_scalar() {
        // J = 0: alpha(t) = e^{-i omega t - gamma t}, beta = xi = 0
        let p = SystemParams::new(5.0, 1.0, 0.0).unwrap();
        let m = build_hamiltonian(&p);
        let traj = propagate_rk4(
            &m,
            &AmplitudeState::from_site(InitialSite::Passive),
            &grid(2.0, 21),
            &IntegratorConfig::default(),
        )
        .unwrap();
        for (t, state) in traj.times().iter().zip(traj.states()) {
            let expected = C64::from_polar((-t).exp(), -5.0 * t);
            assert!((state.alpha - expected).norm() < 1e-10, "t={t}");
            assert!(state.beta.norm() < 1e-14);
            assert!(state.xi.norm() < 1e-14);
        }
    }

    #[test]
    fn hermitian_evolution_conserves_occupation() {
        let p = SystemParams::new(5.0, 0.0, 1.0).unwrap();
        let m = build_hamiltonian(&p);
        let traj = propagate_rk4(
            &m,
            &AmplitudeState::from_site(InitialSite::Passive),
            &grid(20.0, 41),
            &IntegratorConfig::default(),
        )
        .unwrap();
        for state in traj.states() {
            let total: f64 = state.probabilities().iter().sum();
            assert!((total - 1.0).abs() <= 1e-10, "total {total}");
        }
    }

    #[test]
    fn rk4_matches_the_symmetric_closed_forms() {
        let p = SystemParams::natural(5.0, 5.0).unwrap();
        let numeric = sample_trajectory(&p, InitialSite::Passive, 5.0, 251, crate::dynamics::Method::Rk4).unwrap();
        let closed =
            sample_trajectory(&p, InitialSite::Passive, 5.0, 251, crate::dynamics::Method::ClosedForm)
                .unwrap();
        let dev = compare_trajectories(&numeric, &closed).unwrap();
        assert!(dev <= 1e-6, "max deviation {dev}");
    }

    #[test]
    fn expm_at_zero_is_the_identity() {
        let p = SystemParams::natural(5.0, 0.5).unwrap();
        let m = build_hamiltonian(&p);
        let initial = AmplitudeState::new(c(0.3, 0.1), c(-0.2, 0.4), c(0.5, -0.6));
        let out = propagate_expm(&m, &initial, 0.0, &IntegratorConfig::default()).unwrap();
        assert_eq!(out, initial);
    }

    #[test]
    fn expm_agrees_with_rk4_in_the_broken_phase() {
        let p = SystemParams::natural(5.0, 0.5).unwrap();
        let m = build_hamiltonian(&p);
        let config = IntegratorConfig::default();
        let initial = AmplitudeState::from_site(InitialSite::Passive);
        let traj = propagate_rk4(&m, &initial, &grid(10.0, 11), &config).unwrap();
        let direct = propagate_expm(&m, &initial, 10.0, &config).unwrap();
        let last = traj.states().last().unwrap();
        let dev = last
            .as_array()
            .iter()
            .zip(direct.as_array())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(dev <= 1e-8, "deviation {dev}");
    }

    #[test]
    fn exponential_of_hermitian_generator_is_unitary() {
        let p = SystemParams::new(5.0, 0.0, 2.0).unwrap();
        let m = build_hamiltonian(&p);
        let u = matrix_exp(&m.scaled(c(0.0, -3.7)), 1e-14);
        // U^dagger U = I
        let udag = ComplexMatrix::from_fn(3, |i, j| u.get(j, i).conj());
        let product = udag.matmul(&u);
        let identity = ComplexMatrix::identity(3);
        let max_dev = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| (product.get(i, j) - identity.get(i, j)).norm())
            .fold(0.0, f64::max);
        assert!(max_dev <= 1e-12, "deviation {max_dev}");
    }

    #[test]
    fn comparison_requires_identical_grids() {
        let p = SystemParams::natural(5.0, 5.0).unwrap();
        let a = sample_trajectory(&p, InitialSite::Passive, 5.0, 51, crate::dynamics::Method::ClosedForm).unwrap();
        let b = sample_trajectory(&p, InitialSite::Passive, 5.0, 52, crate::dynamics::Method::ClosedForm).unwrap();
        assert!(matches!(compare_trajectories(&a, &b), Err(Error::GridMismatch(_))));
        assert_eq!(compare_trajectories(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(IntegratorConfig::new(0.0, IntegratorMethod::Rk4, 1e-14).is_err());
        assert!(IntegratorConfig::new(1e-4, IntegratorMethod::Rk4, 1e-5).is_err());
        assert!(IntegratorConfig::new(1e-4, IntegratorMethod::Rk4, 0.0).is_err());
        assert!(IntegratorConfig::new(1e-3, IntegratorMethod::MatrixExp, 1e-12).is_ok());
    }

    #[test]
    fn unbounded_gain_growth_trips_the_divergence_guard() {
        // norm ~ e^{delta t} passes 1e12 near t = 40 at these parameters
        let p = SystemParams::natural(5.0, 0.5).unwrap();
        let m = build_hamiltonian(&p);
        let config = IntegratorConfig { dt: 1e-3, ..Default::default() };
        let initial = AmplitudeState::from_site(InitialSite::Active);
        let result = propagate_rk4(&m, &initial, &grid(80.0, 21), &config);
        assert!(matches!(result, Err(Error::Divergence(_))));
    }

    #[test]
    fn grid_must_start_at_zero_and_increase() {
        let p = SystemParams::natural(5.0, 5.0).unwrap();
        let m = build_hamiltonian(&p);
        let initial = AmplitudeState::from_site(InitialSite::Passive);
        let config = IntegratorConfig::default();
        assert!(propagate_rk4(&m, &initial, &[1.0, 2.0], &config).is_err());
        assert!(propagate_rk4(&m, &initial, &[0.0, 2.0, 2.0], &config).is_err());
    }
}
