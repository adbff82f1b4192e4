//! The parity-time operation on three-site states, the eigenstate symmetry
//! residual that detects spontaneous breaking, and localization metrics.

use num_complex::Complex64 as C64;

use crate::eigen::{trimmer_spectrum, TrimmerSpectralData};
use crate::error::{Error, Result};
use crate::matrix::vec_norm;
use crate::params::{classify_phase_default, PhaseClass, SystemParams};

/// Residual threshold below which a vector counts as symmetric. The observed
/// residuals cluster at <= 1e-10 (symmetric phase) and >= 0.1 (broken phase),
/// so the cut sits far from both.
pub const PT_THRESHOLD: f64 = 1e-8;

/// Outcome of testing a unit vector for invariance under the combined mirror
/// and conjugation operation, up to a global phase.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PtCheckResult {
    /// Best global phase, in `(-pi, pi]`.
    pub phase_angle: f64,
    /// `min over phi of || PT v - e^{i phi} v ||`; lies in `[0, 2]`.
    pub residual: f64,
    /// `residual <= PT_THRESHOLD`.
    pub symmetric: bool,
}

/// Apply the parity-time operation: reverse the site order and conjugate,
/// `(v1, v2, v3) -> (v3*, v2*, v1*)`.
pub fn apply_pt(v: &[C64]) -> Result<[C64; 3]> {
    if v.len() != 3 {
        return Err(Error::Dimension(format!("expected a 3-vector, got length {}", v.len())));
    }
    Ok([v[2].conj(), v[1].conj(), v[0].conj()])
}

/// Measure how far a vector is from being PT-invariant up to a global phase.
///
/// For unit vectors the residual-minimizing phase has the closed form
/// `arg <v | PT v>`, so no numeric scan is needed. The input is normalized
/// before measuring; a zero vector is a domain error.
pub fn pt_residual(v: &[C64]) -> Result<PtCheckResult> {
    let norm = vec_norm(v);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidParameter("pt_residual needs a nonzero finite vector".into()));
    }
    let unit: Vec<C64> = v.iter().map(|e| e / norm).collect();
    let transformed = apply_pt(&unit)?;
    let overlap: C64 = unit.iter().zip(&transformed).map(|(a, b)| a.conj() * b).sum();
    let phase_angle = overlap.arg();
    let rotation = C64::from_polar(1.0, phase_angle);
    let diff: Vec<C64> =
        transformed.iter().zip(&unit).map(|(t, u)| t - rotation * u).collect();
    let residual = vec_norm(&diff);
    Ok(PtCheckResult { phase_angle, residual, symmetric: residual <= PT_THRESHOLD })
}

/// Weight `|a+|` of the long-lifetime supermode on the passive cavity
/// relative to the active one: identically 1 in the symmetric phase and
/// falling to 0 with the coupling in the broken phase, where that supermode
/// localizes at the active cavity.
pub fn localization_weight(spec_data: &TrimmerSpectralData) -> f64 {
    spec_data.a_plus.norm()
}

/// One record of the phase-diagram sweep: classification, closed-form
/// eigenvalues, localization weight, and the PT residuals of all three
/// eigenvectors in the order `[E0, E+, E-]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseDiagramRow {
    pub j: f64,
    pub phase: PhaseClass,
    pub eigenvalues: [C64; 3],
    pub abs_a_plus: f64,
    pub pt_residuals: [f64; 3],
}

/// Bundle the classification, spectrum, localization weight, and symmetry
/// residuals for one parameter point.
pub fn phase_diagram_row(params: &SystemParams) -> Result<PhaseDiagramRow> {
    let phase = classify_phase_default(params);
    let (spectrum, data) = trimmer_spectrum(params)?;
    let mut pt_residuals = [0.0; 3];
    for (slot, vector) in pt_residuals.iter_mut().zip(&spectrum.eigenvectors) {
        *slot = pt_residual(vector)?.residual;
    }
    Ok(PhaseDiagramRow {
        j: params.j(),
        phase,
        eigenvalues: [spectrum.eigenvalues[0], spectrum.eigenvalues[1], spectrum.eigenvalues[2]],
        abs_a_plus: localization_weight(&data),
        pt_residuals,
    })
}
