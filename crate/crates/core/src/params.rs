//! Physical parameters of the balanced-gain/loss trimmer and the phase
//! classification of its spectrum.
//!
//! All rates and frequencies are dimensionless multiples of the gain/loss
//! rate, so `gamma = 1` is the natural choice everywhere.

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative width of the guard band around the coupling where the paired
/// eigenvalues coalesce, applied to the discriminant `2J^2 - gamma^2` (not to
/// `J` itself) so the band is exact in the quantity that controls degeneracy.
pub const EP_GUARD_FACTOR: f64 = 1e-9;

/// The full physical configuration: cavity resonance `omega`, balanced
/// gain/loss rate `gamma`, and inter-cavity coupling `j`.
///
/// Only the balanced configuration is representable: all three cavities share
/// `omega` and the loss rate of the passive cavity equals the gain rate of
/// the active one. `gamma = 0` is the Hermitian limit.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct SystemParams {
    omega: f64,
    gamma: f64,
    j: f64,
}

impl SystemParams {
    pub fn new(omega: f64, gamma: f64, j: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::InvalidParameter(format!("omega must be finite, got {omega}")));
        }
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma must be finite and nonnegative, got {gamma}"
            )));
        }
        if !j.is_finite() || j < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "coupling j must be finite and nonnegative, got {j}"
            )));
        }
        Ok(Self { omega, gamma, j })
    }

    /// Natural-units constructor: `gamma = 1`.
    pub fn natural(omega: f64, j: f64) -> Result<Self> {
        Self::new(omega, 1.0, j)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    /// The discriminant `2J^2 - gamma^2` whose sign selects the phase.
    pub fn discriminant(&self) -> f64 {
        2.0 * self.j * self.j - self.gamma * self.gamma
    }

    /// Default guard band on the discriminant.
    pub fn ep_guard(&self) -> f64 {
        EP_GUARD_FACTOR * self.gamma * self.gamma
    }
}

/// Which side of the coalescence point the spectrum sits on.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PhaseClass {
    /// `2J^2 - gamma^2 > 0`: all eigenvalues real, eigenstates symmetric.
    Symmetric,
    /// `2J^2 - gamma^2 < 0`: a complex-conjugate pair appears.
    Broken,
    /// Inside the guard band: eigenvalues and eigenvectors coalesce.
    ExceptionalPoint,
}

impl std::fmt::Display for PhaseClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PhaseClass::Symmetric => "Symmetric",
            PhaseClass::Broken => "Broken",
            PhaseClass::ExceptionalPoint => "ExceptionalPoint",
        };
        write!(f, "{s}")
    }
}

/// Classify the phase from the sign of `2J^2 - gamma^2` with a guard band
/// `eps_ep` on the discriminant.
pub fn classify_phase(params: &SystemParams, eps_ep: f64) -> Result<PhaseClass> {
    if !eps_ep.is_finite() || eps_ep < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "eps_ep must be finite and nonnegative, got {eps_ep}"
        )));
    }
    let d = params.discriminant();
    Ok(if d > eps_ep {
        PhaseClass::Symmetric
    } else if d < -eps_ep {
        PhaseClass::Broken
    } else {
        PhaseClass::ExceptionalPoint
    })
}

/// [`classify_phase`] with the default guard band [`SystemParams::ep_guard`].
pub fn classify_phase_default(params: &SystemParams) -> PhaseClass {
    classify_phase(params, params.ep_guard()).expect("default guard band is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_scalars() {
        assert!(SystemParams::new(f64::NAN, 1.0, 1.0).is_err());
        assert!(SystemParams::new(0.0, -1.0, 1.0).is_err());
        assert!(SystemParams::new(0.0, 1.0, -0.5).is_err());
        assert!(SystemParams::new(0.0, f64::INFINITY, 1.0).is_err());
        assert!(SystemParams::new(5.0, 0.0, 5.0).is_ok());
    }

    #[test]
    fn classifies_figure_parameters() {
        let p = SystemParams::natural(5.0, 5.0).unwrap();
        assert_eq!(classify_phase_default(&p), PhaseClass::Symmetric);

        let p = SystemParams::natural(5.0, 0.5).unwrap();
        assert_eq!(classify_phase_default(&p), PhaseClass::Broken);

        let p = SystemParams::natural(5.0, std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert_eq!(classify_phase_default(&p), PhaseClass::ExceptionalPoint);
    }

    #[test]
    fn guard_band_validation() {
        let p = SystemParams::natural(0.0, 1.0).unwrap();
        assert!(classify_phase(&p, -1.0).is_err());
        assert!(classify_phase(&p, f64::NAN).is_err());
        assert_eq!(classify_phase(&p, 0.0).unwrap(), PhaseClass::Symmetric);
    }

    #[test]
    fn hermitian_limit_is_symmetric_for_positive_coupling() {
        let p = SystemParams::new(5.0, 0.0, 1.0).unwrap();
        assert_eq!(classify_phase_default(&p), PhaseClass::Symmetric);
    }

    proptest::proptest! {
        // Classification only depends on the ratio J/gamma: rescaling both by
        // any s > 0 rescales the discriminant and the guard band by s^2.
        #[test]
        fn scale_invariant(gamma in 1e-3_f64..1e3, j in 1e-3_f64..1e3, s in 1e-2_f64..1e2) {
            let p = SystemParams::new(0.0, gamma, j).unwrap();
            let q = SystemParams::new(0.0, s * gamma, s * j).unwrap();
            proptest::prop_assert_eq!(classify_phase_default(&p), classify_phase_default(&q));
        }
    }
}
