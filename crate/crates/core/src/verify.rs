//! Machine-checkable invariant suite: closed forms against the numerical
//! propagators, mirror/time-reversal relations, symmetry-residual clusters,
//! and informational reports on the alternative central-amplitude forms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{
    alt_forms, closed_broken_signed, closed_symmetric_signed, evolve_closed, sample_trajectory,
    InitialSite, Method,
};
use crate::eigen::trimmer_spectrum;
use crate::error::Result;
use crate::params::SystemParams;
use crate::propagator::compare_trajectories;
use crate::pt::pt_residual;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Pass/fail against a threshold; failures make the suite fail.
    Invariant,
    /// Measured and reported, never failing.
    Informational,
}

/// One measured entry of the verification report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub kind: CheckKind,
    /// `None` for informational entries.
    pub passed: Option<bool>,
    pub measured: f64,
    pub threshold: Option<f64>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub omega: f64,
    pub gamma: f64,
    pub tol_scale: f64,
    pub checks: Vec<CheckResult>,
    pub ok: bool,
}

/// Suite parameters. `tol_scale` multiplies every upper-bound threshold;
/// setting it to zero is the fault-injection self-test of the harness.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub omega: f64,
    pub gamma: f64,
    pub tol_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { omega: 5.0, gamma: 1.0, tol_scale: 1.0 }
    }
}

fn upper_bound(name: &str, measured: f64, threshold: f64, note: &str) -> CheckResult {
    CheckResult {
        name: name.into(),
        kind: CheckKind::Invariant,
        passed: Some(measured <= threshold),
        measured,
        threshold: Some(threshold),
        note: note.into(),
    }
}

fn informational(name: &str, measured: f64, note: &str) -> CheckResult {
    CheckResult {
        name: name.into(),
        kind: CheckKind::Informational,
        passed: None,
        measured,
        threshold: None,
        note: note.into(),
    }
}

fn closed_vs_rk4_checks(opts: &VerifyOptions, checks: &mut Vec<CheckResult>) -> Result<()> {
    let gamma = opts.gamma;
    let cases = [
        ("closed_vs_rk4_symmetric_passive", 5.0 * gamma, InitialSite::Passive),
        ("closed_vs_rk4_symmetric_active", 5.0 * gamma, InitialSite::Active),
        ("closed_vs_rk4_broken_passive", 0.5 * gamma, InitialSite::Passive),
        ("closed_vs_rk4_broken_active", 0.5 * gamma, InitialSite::Active),
    ];
    for (name, j, site) in cases {
        let params = SystemParams::new(opts.omega, gamma, j)?;
        let t_max = 10.0 / gamma;
        let closed = sample_trajectory(&params, site, t_max, 201, Method::ClosedForm)?;
        let numeric = sample_trajectory(&params, site, t_max, 201, Method::Rk4)?;
        let deviation = compare_trajectories(&closed, &numeric)?;
        checks.push(upper_bound(
            name,
            deviation,
            1e-6 * opts.tol_scale,
            "max componentwise amplitude deviation, closed form vs rk4 at dt = 1e-4/gamma",
        ));
    }
    Ok(())
}

fn gamma_flip_checks(opts: &VerifyOptions, checks: &mut Vec<CheckResult>) -> Result<()> {
    let gamma = opts.gamma;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    type Raw = fn(f64, f64, f64, InitialSite, f64) -> Result<crate::dynamics::AmplitudeState>;
    let cases: [(&str, f64, Raw); 2] = [
        ("gamma_flip_symmetric", 5.0 * gamma, closed_symmetric_signed),
        ("gamma_flip_broken", 0.5 * gamma, closed_broken_signed),
    ];
    for (name, j, eval) in cases {
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let t = rng.gen_range(0.0..10.0 / gamma);
            let flipped = eval(opts.omega, -gamma, j, InitialSite::Passive, t)?;
            let active = eval(opts.omega, gamma, j, InitialSite::Active, t)?;
            worst = worst
                .max((flipped.alpha - active.xi).norm())
                .max((flipped.beta - active.beta).norm())
                .max((flipped.xi - active.alpha).norm());
        }
        checks.push(upper_bound(
            name,
            worst,
            1e-10 * opts.tol_scale,
            "negating the gain in the passive-start forms must reproduce the active-start forms",
        ));
    }
    Ok(())
}

fn pt_cluster_checks(opts: &VerifyOptions, checks: &mut Vec<CheckResult>) -> Result<()> {
    let gamma = opts.gamma;
    let symmetric_js = [1.0, 2.0, 5.0].map(|f| f * gamma);
    let broken_js = [0.1, 0.3, 0.5].map(|f| f * gamma);
    let mut sym_worst = 0.0f64;
    let mut broken_best = f64::INFINITY;
    let mut central_worst = 0.0f64;
    for j in symmetric_js {
        let (spec, _) = trimmer_spectrum(&SystemParams::new(opts.omega, gamma, j)?)?;
        central_worst = central_worst.max(pt_residual(&spec.eigenvectors[0])?.residual);
        for v in &spec.eigenvectors[1..] {
            sym_worst = sym_worst.max(pt_residual(v)?.residual);
        }
    }
    for j in broken_js {
        let (spec, _) = trimmer_spectrum(&SystemParams::new(opts.omega, gamma, j)?)?;
        central_worst = central_worst.max(pt_residual(&spec.eigenvectors[0])?.residual);
        for v in &spec.eigenvectors[1..] {
            broken_best = broken_best.min(pt_residual(v)?.residual);
        }
    }
    checks.push(upper_bound(
        "pt_residual_symmetric_pair",
        sym_worst,
        1e-10 * opts.tol_scale,
        "paired eigenvectors at J in {1, 2, 5} gamma are PT-invariant up to a phase",
    ));
    checks.push(CheckResult {
        name: "pt_residual_broken_pair".into(),
        kind: CheckKind::Invariant,
        passed: Some(broken_best >= 0.1),
        measured: broken_best,
        threshold: Some(0.1),
        note: "smallest paired-eigenvector residual at J in {0.1, 0.3, 0.5} gamma; \
               spontaneous breaking keeps it above the cluster gap 0.1"
            .into(),
    });
    checks.push(upper_bound(
        "pt_residual_central_branch",
        central_worst,
        1e-10 * opts.tol_scale,
        "the central eigenvector stays PT-invariant at all six couplings",
    ));
    Ok(())
}

fn alt_form_reports(opts: &VerifyOptions, checks: &mut Vec<CheckResult>) -> Result<()> {
    // Hermitian-limit deviation of the product form for the central
    // amplitude: analytic maximum |1/sqrt(2) - 1/2| ~= 0.2071.
    let j = 1.0;
    let hermitian = SystemParams::new(opts.omega, 0.0, j)?;
    let mut max_dev = 0.0f64;
    for k in 0..=2000 {
        let t = 10.0 * k as f64 / 2000.0 / j;
        let exact = evolve_closed(&hermitian, InitialSite::Passive, t)?;
        let alt = alt_forms::beta_symmetric_product(opts.omega, 0.0, j, InitialSite::Passive, t);
        max_dev = max_dev.max((alt - exact.beta).norm());
    }
    checks.push(informational(
        "product_beta_deviation_hermitian",
        max_dev,
        "max |beta_product - beta_reconstructed| at gamma = 0; the product form \
         underweights the central amplitude by a factor sqrt(2)",
    ));

    if opts.gamma > 0.0 {
        // sign of the hyperbolic form at small times, against beta ~ -iJt
        let gamma = opts.gamma;
        let params = SystemParams::new(opts.omega, gamma, 0.5 * gamma)?;
        let t = 1e-2 / gamma;
        let exact = evolve_closed(&params, InitialSite::Passive, t)?;
        let alt =
            alt_forms::beta_broken_hyperbolic(opts.omega, gamma, 0.5 * gamma, InitialSite::Passive, t);
        let cosine = (alt.conj() * exact.beta).re / (alt.norm() * exact.beta.norm());
        checks.push(informational(
            "broken_beta_sign_small_t",
            cosine,
            "alignment cosine between the hyperbolic form and the reconstructed \
             central amplitude at small t; -1 means the printed overall sign is \
             flipped relative to the equation of motion",
        ));
    }
    Ok(())
}

fn unitarity_check(opts: &VerifyOptions, checks: &mut Vec<CheckResult>) -> Result<()> {
    // only meaningful in the Hermitian limit
    let j = 1.0;
    let params = SystemParams::new(opts.omega, 0.0, j)?;
    let traj = sample_trajectory(&params, InitialSite::Passive, 20.0 / j, 401, Method::ClosedForm)?;
    let drift = traj
        .probabilities()
        .iter()
        .map(|p| (p.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    checks.push(upper_bound(
        "unitarity_hermitian_limit",
        drift,
        1e-10 * opts.tol_scale,
        "total occupation stays at 1 without gain or loss",
    ));
    Ok(())
}

/// Run the whole suite. With `gamma = 0` the broken-phase entries are
/// replaced by the Hermitian-limit unitarity check.
pub fn run_invariant_suite(opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    if opts.gamma > 0.0 {
        closed_vs_rk4_checks(opts, &mut checks)?;
        gamma_flip_checks(opts, &mut checks)?;
        pt_cluster_checks(opts, &mut checks)?;
    } else {
        unitarity_check(opts, &mut checks)?;
    }
    alt_form_reports(opts, &mut checks)?;
    let ok = checks.iter().all(|c| c.passed.unwrap_or(true));
    Ok(VerifyReport {
        omega: opts.omega,
        gamma: opts.gamma,
        tol_scale: opts.tol_scale,
        checks,
        ok,
    })
}
