//! Closed-form single-photon amplitude evolution in both symmetry phases,
//! scalar trajectory features, and trajectory sampling.
//!
//! The passive- and active-cavity amplitudes come from the closed forms; the
//! central-cavity amplitude is reconstructed from the passive-cavity equation
//! of motion `i d/dt alpha = (omega - i gamma) alpha + J beta`, which makes it
//! exact by construction. Alternative product/hyperbolic forms for the
//! central amplitude live in [`alt_forms`] and are only used to measure how
//! far they deviate from the reconstruction.

use num_complex::Complex64 as C64;
use std::f64::consts::TAU;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hamiltonian::build_hamiltonian;
use crate::matrix::vec_norm;
use crate::params::{classify_phase_default, PhaseClass, SystemParams};
use crate::propagator::{propagate, IntegratorConfig, IntegratorMethod};

/// Hyperbolic arguments above this cap would overflow `f64`; the broken-phase
/// closed forms refuse them instead of returning infinities.
pub const HYPERBOLIC_CAP: f64 = 700.0;

/// Which cavity holds the photon at `t = 0`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum InitialSite {
    Passive,
    Active,
}

impl std::fmt::Display for InitialSite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InitialSite::Passive => write!(f, "passive"),
            InitialSite::Active => write!(f, "active"),
        }
    }
}

impl FromStr for InitialSite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "passive" => Ok(InitialSite::Passive),
            "active" => Ok(InitialSite::Active),
            other => Err(Error::InvalidParameter(format!(
                "unknown initial site {other:?}; expected \"passive\" or \"active\""
            ))),
        }
    }
}

/// How a trajectory was produced.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Rk4,
    MatrixExp,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::ClosedForm => write!(f, "closed"),
            Method::Rk4 => write!(f, "rk4"),
            Method::MatrixExp => write!(f, "expm"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Method::ClosedForm),
            "rk4" => Ok(Method::Rk4),
            "expm" => Ok(Method::MatrixExp),
            other => Err(Error::InvalidParameter(format!(
                "unknown method {other:?}; expected \"closed\", \"rk4\", or \"expm\""
            ))),
        }
    }
}

/// The coefficient triple of the single-photon state: passive, central, and
/// active cavity amplitudes.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AmplitudeState {
    pub alpha: C64,
    pub beta: C64,
    pub xi: C64,
}

impl AmplitudeState {
    pub fn new(alpha: C64, beta: C64, xi: C64) -> Self {
        Self { alpha, beta, xi }
    }

    /// The basis state with the photon on one site.
    pub fn from_site(site: InitialSite) -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        match site {
            InitialSite::Passive => Self::new(one, zero, zero),
            InitialSite::Active => Self::new(zero, zero, one),
        }
    }

    pub fn as_array(&self) -> [C64; 3] {
        [self.alpha, self.beta, self.xi]
    }

    pub fn from_array(v: [C64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    /// Occupation probabilities `(|alpha|^2, |beta|^2, |xi|^2)`. These exceed
    /// one in gain-dominated regimes because the evolution is non-unitary.
    pub fn probabilities(&self) -> [f64; 3] {
        [self.alpha.norm_sqr(), self.beta.norm_sqr(), self.xi.norm_sqr()]
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.as_array())
    }

    /// `Some(site)` when this is exactly a single-site basis state.
    pub fn basis_site(&self) -> Option<InitialSite> {
        for site in [InitialSite::Passive, InitialSite::Active] {
            if *self == Self::from_site(site) {
                return Some(site);
            }
        }
        None
    }

    pub fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite() && self.xi.is_finite()
    }
}

/// Phase-specific derived quantities. Exactly one variant is constructible
/// for a given parameter set, which encodes the requirement that the
/// symmetric-phase rate is only defined above the transition and the
/// broken-phase rate only below it.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum DerivedParams {
    Symmetric {
        /// Oscillation rate `sqrt(2J^2 - gamma^2)`.
        big_delta: f64,
        /// `atan2(big_delta * gamma, J^2 - gamma^2)`.
        phi1: f64,
        /// `2 atan(big_delta / gamma)`.
        phi2: f64,
    },
    Broken {
        /// Growth rate `sqrt(gamma^2 - 2J^2)`.
        small_delta: f64,
    },
}

impl DerivedParams {
    pub fn new(params: &SystemParams) -> Result<Self> {
        let (gamma, j) = (params.gamma(), params.j());
        match classify_phase_default(params) {
            PhaseClass::Symmetric => {
                let big_delta = params.discriminant().sqrt();
                Ok(DerivedParams::Symmetric {
                    big_delta,
                    phi1: f64::atan2(big_delta * gamma, j * j - gamma * gamma),
                    phi2: 2.0 * (big_delta / gamma).atan(),
                })
            }
            PhaseClass::Broken => {
                Ok(DerivedParams::Broken { small_delta: (-params.discriminant()).sqrt() })
            }
            PhaseClass::ExceptionalPoint => {
                Err(Error::AtExceptionalPoint { band: params.ep_guard() })
            }
        }
    }
}

/// A sampled evolution: time grid, amplitude states, and occupation
/// probabilities, tagged with how it was produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<AmplitudeState>,
    probabilities: Vec<[f64; 3]>,
    initial_site: Option<InitialSite>,
    method: Method,
}

impl Trajectory {
    /// Assemble a trajectory, enforcing a strictly increasing grid and, when
    /// an initial site is declared, that `states[0]` is exactly that basis
    /// state.
    pub fn new(
        times: Vec<f64>,
        states: Vec<AmplitudeState>,
        initial_site: Option<InitialSite>,
        method: Method,
    ) -> Result<Self> {
        if times.len() != states.len() || times.is_empty() {
            return Err(Error::GridMismatch(format!(
                "times ({}) and states ({}) must be nonempty and equal in length",
                times.len(),
                states.len()
            )));
        }
        // partial_cmp so NaN entries fail the ordering check too
        if times.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::GridMismatch("times must be strictly increasing".into()));
        }
        if let Some(site) = initial_site {
            if states[0] != AmplitudeState::from_site(site) {
                return Err(Error::InvalidParameter(
                    "states[0] does not match the declared initial site".into(),
                ));
            }
        }
        let probabilities = states.iter().map(AmplitudeState::probabilities).collect();
        Ok(Self { times, states, probabilities, initial_site, method })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[AmplitudeState] {
        &self.states
    }

    pub fn probabilities(&self) -> &[[f64; 3]] {
        &self.probabilities
    }

    pub fn initial_site(&self) -> Option<InitialSite> {
        self.initial_site
    }

    pub fn method(&self) -> Method {
        self.method
    }
}

fn beta_from_alpha(omega: f64, gamma: f64, j: f64, alpha: C64, dalpha: C64) -> C64 {
    (C64::i() * dalpha - C64::new(omega, -gamma) * alpha) / j
}

/// Symmetric-phase closed forms with the gain rate allowed to be negative,
/// which the mirror/time-reversal diagnostics need. Requires `2j^2 > gamma^2`
/// and `j > 0`.
pub fn closed_symmetric_signed(
    omega: f64,
    gamma: f64,
    j: f64,
    site: InitialSite,
    t: f64,
) -> Result<AmplitudeState> {
    let disc = 2.0 * j * j - gamma * gamma;
    if disc <= 0.0 || j <= 0.0 {
        return Err(Error::PhaseMismatch(format!(
            "symmetric closed forms need 2J^2 > gamma^2 and J > 0 (J={j}, gamma={gamma})"
        )));
    }
    let delta = disc.sqrt();
    let pref = 2.0 * j * j / disc;
    let phi1 = f64::atan2(delta * gamma, j * j - gamma * gamma);
    let phase = C64::from_polar(1.0, -omega * t);
    let miw = C64::new(0.0, -omega);
    let (alpha, dalpha, xi) = match site {
        InitialSite::Passive => {
            let u = (delta * t + phi1) / 2.0;
            let cos2 = u.cos().powi(2);
            let alpha = pref * phase * cos2;
            let dalpha = pref * phase * (miw * cos2 - 0.5 * delta * (2.0 * u).sin());
            let xi = -pref * phase * (delta * t / 2.0).sin().powi(2);
            (alpha, dalpha, xi)
        }
        InitialSite::Active => {
            let sin2 = (delta * t / 2.0).sin().powi(2);
            let alpha = -pref * phase * sin2;
            let dalpha = -pref * phase * (miw * sin2 + 0.5 * delta * (delta * t).sin());
            let u = (delta * t - phi1) / 2.0;
            let xi = pref * phase * u.cos().powi(2);
            (alpha, dalpha, xi)
        }
    };
    Ok(AmplitudeState::new(alpha, beta_from_alpha(omega, gamma, j, alpha, dalpha), xi))
}

/// Broken-phase closed forms with the gain rate allowed to be negative.
/// Requires `gamma^2 > 2j^2` and `j > 0`; refuses hyperbolic arguments past
/// [`HYPERBOLIC_CAP`].
pub fn closed_broken_signed(
    omega: f64,
    gamma: f64,
    j: f64,
    site: InitialSite,
    t: f64,
) -> Result<AmplitudeState> {
    let neg_disc = gamma * gamma - 2.0 * j * j;
    if neg_disc <= 0.0 || j <= 0.0 {
        return Err(Error::PhaseMismatch(format!(
            "broken closed forms need gamma^2 > 2J^2 and J > 0 (J={j}, gamma={gamma})"
        )));
    }
    let delta = neg_disc.sqrt();
    if delta * t > HYPERBOLIC_CAP {
        return Err(Error::Overflow(delta * t));
    }
    let d2 = neg_disc;
    let j2 = j * j;
    let g2 = gamma * gamma;
    let ch = (delta * t).cosh();
    let sh = (delta * t).sinh();
    let sh_half_sq = (delta * t / 2.0).sinh().powi(2);
    let phase = C64::from_polar(1.0, -omega * t);
    let miw = C64::new(0.0, -omega);
    let (alpha, dalpha, xi) = match site {
        InitialSite::Passive => {
            let b = j2 + (j2 - g2) * ch + gamma * delta * sh;
            let db = delta * ((j2 - g2) * sh + gamma * delta * ch);
            let alpha = -phase * b / d2;
            let dalpha = -phase * (miw * b + db) / d2;
            let xi = -2.0 * j2 * phase * sh_half_sq / d2;
            (alpha, dalpha, xi)
        }
        InitialSite::Active => {
            let alpha = -2.0 * j2 * phase * sh_half_sq / d2;
            let dalpha =
                -(2.0 * j2 / d2) * phase * (miw * sh_half_sq + 0.5 * delta * sh);
            let xi = -phase * (j2 + (j2 - g2) * ch - gamma * delta * sh) / d2;
            (alpha, dalpha, xi)
        }
    };
    Ok(AmplitudeState::new(alpha, beta_from_alpha(omega, gamma, j, alpha, dalpha), xi))
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter(format!("time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

fn require_phase(params: &SystemParams, wanted: PhaseClass) -> Result<()> {
    match classify_phase_default(params) {
        PhaseClass::ExceptionalPoint => {
            Err(Error::AtExceptionalPoint { band: params.ep_guard() })
        }
        phase if phase == wanted => Ok(()),
        phase => Err(Error::PhaseMismatch(format!(
            "closed form for the {wanted:?} phase requested at {phase:?} parameters"
        ))),
    }
}

/// Closed-form state in the symmetric phase. The state at `t = 0` is pinned
/// to the exact basis state; the unit-modulus global factor `e^{-i omega t}`
/// is included exactly.
pub fn evolve_closed_symmetric(
    params: &SystemParams,
    initial_site: InitialSite,
    t: f64,
) -> Result<AmplitudeState> {
    check_time(t)?;
    require_phase(params, PhaseClass::Symmetric)?;
    if t == 0.0 {
        return Ok(AmplitudeState::from_site(initial_site));
    }
    closed_symmetric_signed(params.omega(), params.gamma(), params.j(), initial_site, t)
}

/// Closed-form state in the broken phase; occupations grow without bound at
/// large times because the gain dominates.
pub fn evolve_closed_broken(
    params: &SystemParams,
    initial_site: InitialSite,
    t: f64,
) -> Result<AmplitudeState> {
    check_time(t)?;
    require_phase(params, PhaseClass::Broken)?;
    if t == 0.0 {
        return Ok(AmplitudeState::from_site(initial_site));
    }
    closed_broken_signed(params.omega(), params.gamma(), params.j(), initial_site, t)
}

/// Dispatch on the current phase; refuses the exceptional-point guard band.
pub fn evolve_closed(
    params: &SystemParams,
    initial_site: InitialSite,
    t: f64,
) -> Result<AmplitudeState> {
    match classify_phase_default(params) {
        PhaseClass::Symmetric => evolve_closed_symmetric(params, initial_site, t),
        PhaseClass::Broken => evolve_closed_broken(params, initial_site, t),
        PhaseClass::ExceptionalPoint => {
            Err(Error::AtExceptionalPoint { band: params.ep_guard() })
        }
    }
}

/// Recover the central amplitude from the passive-cavity equation of motion:
/// `beta = [i alpha' - (omega - i gamma) alpha] / J`. Exact whenever `alpha`
/// and its derivative are, which the closed forms supply analytically.
pub fn reconstruct_beta(
    params: &SystemParams,
    alpha_value: C64,
    alpha_derivative: C64,
) -> Result<C64> {
    if params.j() == 0.0 {
        return Err(Error::Degenerate(
            "beta reconstruction divides by J; J = 0 has no central coupling".into(),
        ));
    }
    Ok(beta_from_alpha(params.omega(), params.gamma(), params.j(), alpha_value, alpha_derivative))
}

/// Largest active-cavity occupation reached from an active start in the
/// symmetric phase: `(2J^2 / (2J^2 - gamma^2))^2`, which exceeds 1 whenever
/// there is any gain.
pub fn peak_active_occupation(params: &SystemParams) -> Result<f64> {
    require_phase(params, PhaseClass::Symmetric)?;
    let ratio = 2.0 * params.j() * params.j() / params.discriminant();
    Ok(ratio * ratio)
}

/// Time at which the passive and central occupations reach their (joint)
/// smallest values in the broken phase.
///
/// Algebraically this is `arctanh[gamma delta / (gamma^2 - J^2)] / delta`,
/// evaluated here in the equivalent log form
/// `ln[(gamma^2 - J^2 + gamma delta) / J^2] / delta`, which stays accurate
/// where the arctanh argument rounds to 1. The argument is strictly below 1
/// for every `J > 0` in the broken phase, so the time is finite; below a
/// `J = 1e-6 gamma` guard the value is astronomically large and an infinite
/// sentinel is returned instead.
pub fn broken_minima_time(params: &SystemParams) -> Result<f64> {
    require_phase(params, PhaseClass::Broken)?;
    let (gamma, j) = (params.gamma(), params.j());
    if j < 1e-6 * gamma {
        return Ok(f64::INFINITY);
    }
    let delta = (-params.discriminant()).sqrt();
    let g2 = gamma * gamma;
    Ok(((g2 - j * j + gamma * delta) / (j * j)).ln() / delta)
}

/// Period `2 pi / sqrt(2J^2 - gamma^2)` of the occupation oscillations in the
/// symmetric phase; the amplitudes themselves only pick up the `e^{-i omega
/// t}` phase ramp on top.
pub fn oscillation_period(params: &SystemParams) -> Result<f64> {
    require_phase(params, PhaseClass::Symmetric)?;
    Ok(TAU / params.discriminant().sqrt())
}

/// Sample an evolution on a uniform grid over `[0, t_max]`.
///
/// `closed_form` requires parameters outside the exceptional-point guard
/// band; the numerical methods work everywhere.
pub fn sample_trajectory(
    params: &SystemParams,
    initial_site: InitialSite,
    t_max: f64,
    n_points: usize,
    method: Method,
) -> Result<Trajectory> {
    if n_points < 2 {
        return Err(Error::InvalidParameter(format!(
            "a trajectory needs at least 2 points, got {n_points}"
        )));
    }
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "t_max must be finite and positive, got {t_max}"
        )));
    }
    let times: Vec<f64> =
        (0..n_points).map(|i| t_max * i as f64 / (n_points - 1) as f64).collect();
    match method {
        Method::ClosedForm => {
            let states = times
                .iter()
                .map(|&t| evolve_closed(params, initial_site, t))
                .collect::<Result<Vec<_>>>()?;
            Trajectory::new(times, states, Some(initial_site), Method::ClosedForm)
        }
        Method::Rk4 => {
            let config = IntegratorConfig::for_params(params);
            propagate(
                &build_hamiltonian(params),
                &AmplitudeState::from_site(initial_site),
                &times,
                &config,
            )
        }
        Method::MatrixExp => {
            let config = IntegratorConfig {
                method: IntegratorMethod::MatrixExp,
                ..IntegratorConfig::for_params(params)
            };
            propagate(
                &build_hamiltonian(params),
                &AmplitudeState::from_site(initial_site),
                &times,
                &config,
            )
        }
    }
}

pub mod alt_forms {
    //! Alternative closed forms for the central-cavity amplitude, retained so
    //! the verification suite can report how far they sit from the
    //! ODE-consistent reconstruction instead of dropping them silently. In
    //! the Hermitian limit the product form loses probability (it gives
    //! `|beta|^2 = sin^2(Delta t)/4` where exact evolution gives
    //! `sin^2(Delta t)/2`), and the passive-start hyperbolic form has the
    //! opposite sign of the small-time requirement `beta ~ -iJt`.

    use super::InitialSite;
    use num_complex::Complex64 as C64;

    /// Trigonometric product form, symmetric phase:
    /// `(2iJ^2/Delta^2) e^{-i omega t} sin(Delta t / 2) sin((Delta t -+ phi2) / 2)`
    /// with the minus sign for a passive start and plus for an active start.
    pub fn beta_symmetric_product(
        omega: f64,
        gamma: f64,
        j: f64,
        site: InitialSite,
        t: f64,
    ) -> C64 {
        let disc = 2.0 * j * j - gamma * gamma;
        let delta = disc.sqrt();
        let phi2 = 2.0 * (delta / gamma).atan();
        let sign = match site {
            InitialSite::Passive => -1.0,
            InitialSite::Active => 1.0,
        };
        let pref = C64::new(0.0, 2.0 * j * j / disc);
        pref * C64::from_polar(1.0, -omega * t)
            * (delta * t / 2.0).sin()
            * ((delta * t + sign * phi2) / 2.0).sin()
    }

    /// Hyperbolic form, broken phase:
    /// `-(iJ/delta^2) e^{-i omega t} [gamma cosh(delta t) - gamma -+ delta sinh(delta t)]`
    /// with the minus sign for a passive start and plus for an active start.
    pub fn beta_broken_hyperbolic(
        omega: f64,
        gamma: f64,
        j: f64,
        site: InitialSite,
        t: f64,
    ) -> C64 {
        let d2 = gamma * gamma - 2.0 * j * j;
        let delta = d2.sqrt();
        let sign = match site {
            InitialSite::Passive => -1.0,
            InitialSite::Active => 1.0,
        };
        let bracket = gamma * (delta * t).cosh() - gamma + sign * delta * (delta * t).sinh();
        C64::new(0.0, -j / d2) * C64::from_polar(1.0, -omega * t) * bracket
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn fig3() -> SystemParams {
        SystemParams::natural(5.0, 5.0).unwrap()
    }

    fn fig4() -> SystemParams {
        SystemParams::natural(5.0, 0.5).unwrap()
    }

    #[test]
    fn initial_conditions_are_exact() {
        for site in [InitialSite::Passive, InitialSite::Active] {
            let s = evolve_closed_symmetric(&fig3(), site, 0.0).unwrap();
            assert_eq!(s, AmplitudeState::from_site(site));
            let b = evolve_closed_broken(&fig4(), site, 0.0).unwrap();
            assert_eq!(b, AmplitudeState::from_site(site));
        }
    }

    #[test]
    fn raw_forms_reproduce_initial_conditions_to_roundoff() {
        // the wrappers pin t=0 exactly; the raw formulas must agree on their own
        let s = closed_symmetric_signed(5.0, 1.0, 5.0, InitialSite::Passive, 0.0).unwrap();
        assert!((s.alpha - c(1.0, 0.0)).norm() < 1e-14);
        assert!(s.beta.norm() < 1e-14);
        assert!(s.xi.norm() < 1e-14);
        let b = closed_broken_signed(5.0, 1.0, 0.5, InitialSite::Passive, 0.0).unwrap();
        assert!((b.alpha - c(1.0, 0.0)).norm() < 1e-14);
        assert!(b.beta.norm() < 1e-14);
        assert!(b.xi.norm() < 1e-14);
    }

    #[test]
    fn probabilities_are_periodic_in_the_symmetric_phase() {
        let p = fig3();
        let period = oscillation_period(&p).unwrap();
        assert!((period - TAU / 7.0).abs() < 1e-14);
        for k in 0..20 {
            let t = 0.37 * k as f64;
            let now = evolve_closed_symmetric(&p, InitialSite::Passive, t).unwrap();
            let later = evolve_closed_symmetric(&p, InitialSite::Passive, t + period).unwrap();
            for (a, b) in now.probabilities().iter().zip(later.probabilities()) {
                assert!((a - b).abs() < 1e-9, "t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn revival_of_the_passive_occupation() {
        let traj =
            sample_trajectory(&fig3(), InitialSite::Passive, 10.0, 2001, Method::ClosedForm)
                .unwrap();
        let p_passive: Vec<f64> = traj.probabilities().iter().map(|p| p[0]).collect();
        let min = p_passive.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min < 1e-4, "decay should take |alpha|^2 to zero, min {min}");
        let second_half_max =
            p_passive[1000..].iter().cloned().fold(0.0, f64::max);
        assert!(second_half_max > 1.0, "revival overshoots 1, got {second_half_max}");
    }

    #[test]
    fn peak_active_occupation_examples() {
        assert!((peak_active_occupation(&fig3()).unwrap() - (50.0_f64 / 49.0).powi(2)).abs() < 1e-12);
        let hermitian = SystemParams::new(5.0, 0.0, 2.0).unwrap();
        assert_eq!(peak_active_occupation(&hermitian).unwrap(), 1.0);
        let strong_gain = SystemParams::natural(5.0, 1.0).unwrap();
        assert!((peak_active_occupation(&strong_gain).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn peak_value_is_reached_on_a_trajectory() {
        let traj =
            sample_trajectory(&fig3(), InitialSite::Active, 10.0, 2001, Method::ClosedForm)
                .unwrap();
        let max = traj.probabilities().iter().map(|p| p[2]).fold(0.0, f64::max);
        let predicted = peak_active_occupation(&fig3()).unwrap();
        assert!((max - predicted).abs() < 1e-4, "grid max {max} vs formula {predicted}");
    }

    #[test]
    fn broken_minima_time_examples() {
        let t_star = broken_minima_time(&fig4()).unwrap();
        assert!((t_star - 2.4929).abs() < 1e-3, "t* = {t_star}");
        // against the arctanh statement evaluated directly
        let delta = 0.5_f64.sqrt();
        let direct = (delta / 0.75).atanh() / delta;
        assert!((t_star - direct).abs() < 1e-12);
        // near-zero coupling: sentinel
        let tiny = SystemParams::natural(5.0, 1e-7).unwrap();
        assert_eq!(broken_minima_time(&tiny).unwrap(), f64::INFINITY);
    }

    #[test]
    fn broken_minima_is_a_joint_zero() {
        // both occupations vanish at t*: the passive envelope has a double
        // zero there and the central amplitude a simple one
        let p = fig4();
        let t_star = broken_minima_time(&p).unwrap();
        let state = evolve_closed_broken(&p, InitialSite::Passive, t_star).unwrap();
        assert!(state.alpha.norm_sqr() < 1e-20);
        assert!(state.beta.norm_sqr() < 1e-20);
    }

    #[test]
    fn reconstruction_matches_hermitian_exact_solution() {
        // gamma = 0, J = 1: beta(t) = -(i/sqrt(2)) e^{-i omega t} sin(sqrt(2) t)
        let p = SystemParams::new(5.0, 0.0, 1.0).unwrap();
        let delta = 2.0_f64.sqrt();
        for k in 1..=20 {
            let t = 0.21 * k as f64;
            let state = evolve_closed_symmetric(&p, InitialSite::Passive, t).unwrap();
            let expected =
                c(0.0, -FRAC_1_SQRT_2) * C64::from_polar(1.0, -5.0 * t) * (delta * t).sin();
            assert!((state.beta - expected).norm() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn reconstruct_beta_is_consistent_at_t_zero() {
        // with beta(0) = 0 the equation of motion forces
        // alpha'(0) = -i (omega - i gamma)
        let p = fig3();
        let dalpha = -C64::i() * c(5.0, -1.0);
        let beta = reconstruct_beta(&p, c(1.0, 0.0), dalpha).unwrap();
        assert!(beta.norm() < 1e-15);
        let decoupled = SystemParams::new(5.0, 1.0, 0.0).unwrap();
        assert!(reconstruct_beta(&decoupled, c(1.0, 0.0), dalpha).is_err());
    }

    #[test]
    fn gamma_flip_swaps_initial_sites() {
        // alpha(t, -gamma) = xi'(t, gamma), beta(t, -gamma) = beta'(t, gamma),
        // xi(t, -gamma) = alpha'(t, gamma), in both phases
        for (j, eval) in [
            (5.0, closed_symmetric_signed as fn(f64, f64, f64, InitialSite, f64) -> Result<AmplitudeState>),
            (0.5, closed_broken_signed as fn(f64, f64, f64, InitialSite, f64) -> Result<AmplitudeState>),
        ] {
            for k in 0..40 {
                let t = 0.25 * k as f64;
                let flipped = eval(5.0, -1.0, j, InitialSite::Passive, t).unwrap();
                let active = eval(5.0, 1.0, j, InitialSite::Active, t).unwrap();
                assert!((flipped.alpha - active.xi).norm() < 1e-10, "j={j} t={t}");
                assert!((flipped.beta - active.beta).norm() < 1e-10, "j={j} t={t}");
                assert!((flipped.xi - active.alpha).norm() < 1e-10, "j={j} t={t}");
            }
        }
    }

    #[test]
    fn broken_active_alpha_equals_passive_xi() {
        let p = fig4();
        for k in 0..30 {
            let t = 0.33 * k as f64;
            let passive = evolve_closed_broken(&p, InitialSite::Passive, t).unwrap();
            let active = evolve_closed_broken(&p, InitialSite::Active, t).unwrap();
            assert_eq!(passive.xi, active.alpha);
        }
    }

    #[test]
    fn wrong_phase_and_guard_band_are_refused() {
        assert!(matches!(
            evolve_closed_symmetric(&fig4(), InitialSite::Passive, 1.0),
            Err(Error::PhaseMismatch(_))
        ));
        assert!(matches!(
            evolve_closed_broken(&fig3(), InitialSite::Passive, 1.0),
            Err(Error::PhaseMismatch(_))
        ));
        let ep = SystemParams::natural(5.0, FRAC_1_SQRT_2).unwrap();
        assert!(matches!(
            evolve_closed(&ep, InitialSite::Passive, 1.0),
            Err(Error::AtExceptionalPoint { .. })
        ));
        assert!(matches!(
            peak_active_occupation(&fig4()),
            Err(Error::PhaseMismatch(_))
        ));
        assert!(matches!(broken_minima_time(&fig3()), Err(Error::PhaseMismatch(_))));
        assert!(matches!(oscillation_period(&fig4()), Err(Error::PhaseMismatch(_))));
    }

    #[test]
    fn hyperbolic_overflow_is_an_error() {
        let p = fig4();
        // delta = sqrt(0.5): delta * 1100 > 700
        assert!(matches!(
            evolve_closed_broken(&p, InitialSite::Passive, 1100.0),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn negative_time_is_rejected() {
        assert!(evolve_closed_symmetric(&fig3(), InitialSite::Passive, -0.5).is_err());
        assert!(evolve_closed_symmetric(&fig3(), InitialSite::Passive, f64::NAN).is_err());
    }

    #[test]
    fn derived_params_match_the_phase() {
        match DerivedParams::new(&fig3()).unwrap() {
            DerivedParams::Symmetric { big_delta, phi1, phi2 } => {
                assert!((big_delta - 7.0).abs() < 1e-14);
                assert!((phi1 - (7.0_f64 / 24.0).atan()).abs() < 1e-14);
                assert!((phi2 - 2.0 * 7.0_f64.atan()).abs() < 1e-14);
            }
            other => panic!("expected symmetric variant, got {other:?}"),
        }
        match DerivedParams::new(&fig4()).unwrap() {
            DerivedParams::Broken { small_delta } => {
                assert!((small_delta - 0.5_f64.sqrt()).abs() < 1e-14);
            }
            other => panic!("expected broken variant, got {other:?}"),
        }
        let ep = SystemParams::natural(5.0, FRAC_1_SQRT_2).unwrap();
        assert!(matches!(DerivedParams::new(&ep), Err(Error::AtExceptionalPoint { .. })));
    }

    #[test]
    fn quadrant_of_phi1_between_transition_and_gamma() {
        // for gamma/sqrt(2) < J < gamma, J^2 - gamma^2 < 0 and the two-argument
        // form must land in the second quadrant
        let p = SystemParams::natural(5.0, 0.8).unwrap();
        match DerivedParams::new(&p).unwrap() {
            DerivedParams::Symmetric { phi1, .. } => {
                assert!(phi1 > PI / 2.0 && phi1 < PI, "phi1 = {phi1}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn broken_trajectory_grows_monotonically_after_transient() {
        let traj =
            sample_trajectory(&fig4(), InitialSite::Active, 10.0, 2001, Method::ClosedForm)
                .unwrap();
        // past the transient every occupation increases with time
        let probs = traj.probabilities();
        for k in 1000..probs.len() - 1 {
            for comp in 0..3 {
                assert!(
                    probs[k + 1][comp] >= probs[k][comp],
                    "component {comp} decreased at index {k}"
                );
            }
        }
    }

    #[test]
    fn numerical_methods_work_at_the_exceptional_point() {
        let ep = SystemParams::natural(5.0, FRAC_1_SQRT_2).unwrap();
        assert!(matches!(
            sample_trajectory(&ep, InitialSite::Passive, 5.0, 101, Method::ClosedForm),
            Err(Error::AtExceptionalPoint { .. })
        ));
        let traj = sample_trajectory(&ep, InitialSite::Passive, 5.0, 101, Method::Rk4).unwrap();
        assert_eq!(traj.len(), 101);
        assert_eq!(traj.states()[0], AmplitudeState::from_site(InitialSite::Passive));
        let traj =
            sample_trajectory(&ep, InitialSite::Passive, 5.0, 101, Method::MatrixExp).unwrap();
        assert_eq!(traj.len(), 101);
    }

    #[test]
    fn alt_form_product_beta_loses_probability_in_the_hermitian_limit() {
        // |beta_product|^2 peaks at 1/4 where the exact solution reaches 1/2
        let delta = 2.0_f64.sqrt();
        let t = PI / (2.0 * delta); // sin(delta t) = 1
        let alt = alt_forms::beta_symmetric_product(5.0, 0.0, 1.0, InitialSite::Passive, t);
        assert!((alt.norm() - 0.5).abs() < 1e-12);
        let p = SystemParams::new(5.0, 0.0, 1.0).unwrap();
        let exact = evolve_closed_symmetric(&p, InitialSite::Passive, t).unwrap();
        assert!((exact.beta.norm() - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn alt_form_broken_beta_has_flipped_sign_at_small_times() {
        // the equation of motion forces beta ~ -iJt as t -> 0
        let t = 1e-3;
        let alt = alt_forms::beta_broken_hyperbolic(5.0, 1.0, 0.5, InitialSite::Passive, t);
        let p = fig4();
        let exact = evolve_closed_broken(&p, InitialSite::Passive, t).unwrap();
        let cosine = (alt.conj() * exact.beta).re / (alt.norm() * exact.beta.norm());
        assert!(cosine < -0.999, "forms should be antiparallel, cosine {cosine}");
        // while the active-start hyperbolic form matches the reconstruction
        let alt_active = alt_forms::beta_broken_hyperbolic(5.0, 1.0, 0.5, InitialSite::Active, t);
        let exact_active = evolve_closed_broken(&p, InitialSite::Active, t).unwrap();
        assert!((alt_active - exact_active.beta).norm() < 1e-12);
    }

    #[test]
    fn site_and_method_round_trip_their_names() {
        for site in [InitialSite::Passive, InitialSite::Active] {
            assert_eq!(site.to_string().parse::<InitialSite>().unwrap(), site);
        }
        for method in [Method::ClosedForm, Method::Rk4, Method::MatrixExp] {
            assert_eq!(method.to_string().parse::<Method>().unwrap(), method);
        }
        assert!("sideways".parse::<InitialSite>().is_err());
        assert!("euler".parse::<Method>().is_err());
    }
}
