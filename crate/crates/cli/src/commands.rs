//! The three subcommands. CSV files carry `#`-prefixed provenance lines with
//! the full resolved configuration, so a file alone reproduces its run.

use anyhow::Context;
use rayon::prelude::*;
use std::io::Write;

use pt_trimmer::dynamics::sample_trajectory;
use pt_trimmer::pt::{phase_diagram_row, PhaseDiagramRow};
use pt_trimmer::verify::{run_invariant_suite, VerifyOptions, VerifyReport};
use pt_trimmer::SystemParams;

use crate::config::{EvolveConfig, SpectrumConfig, SweepSpec, VerifyConfig};
use crate::output::fmt_float;

/// Coupling sweep: one CSV row per point with the phase, the three
/// eigenvalues, the localization weight, and the symmetry residual of the
/// long-lifetime supermode.
pub fn run_spectrum(config: &SpectrumConfig, writer: &mut dyn Write) -> anyhow::Result<()> {
    let rows: Vec<PhaseDiagramRow> = config
        .sweep
        .values()
        .into_par_iter()
        .map(|j| {
            let params = SystemParams::new(config.omega, config.gamma, j)?;
            phase_diagram_row(&params)
        })
        .collect::<pt_trimmer::Result<Vec<_>>>()
        .context("computing sweep rows")?;

    writeln!(writer, "# pt-trimmer spectrum")?;
    writeln!(writer, "# omega = {}", fmt_float(config.omega))?;
    writeln!(writer, "# gamma = {}", fmt_float(config.gamma))?;
    match config.sweep {
        SweepSpec::Single(j) => writeln!(writer, "# j = {}", fmt_float(j))?,
        SweepSpec::Range { j_min, j_max, steps } => {
            writeln!(writer, "# j_min = {}", fmt_float(j_min))?;
            writeln!(writer, "# j_max = {}", fmt_float(j_max))?;
            writeln!(writer, "# steps = {steps}")?;
        }
    }
    writeln!(
        writer,
        "j,phase,re_e0,im_e0,re_ep,im_ep,re_em,im_em,abs_a_plus,pt_residual_e_plus"
    )?;
    for row in rows {
        writeln!(
            writer,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_float(row.j),
            row.phase,
            fmt_float(row.eigenvalues[0].re),
            fmt_float(row.eigenvalues[0].im),
            fmt_float(row.eigenvalues[1].re),
            fmt_float(row.eigenvalues[1].im),
            fmt_float(row.eigenvalues[2].re),
            fmt_float(row.eigenvalues[2].im),
            fmt_float(row.abs_a_plus),
            fmt_float(row.pt_residuals[1]),
        )?;
    }
    writer.flush()?;
    Ok(())
}

/// Single-photon trajectory: occupations and amplitude components per time.
pub fn run_evolve(config: &EvolveConfig, writer: &mut dyn Write) -> anyhow::Result<()> {
    let params = SystemParams::new(config.omega, config.gamma, config.j)?;
    let trajectory = sample_trajectory(
        &params,
        config.initial,
        config.t_max,
        config.points,
        config.method,
    )
    .context("sampling trajectory")?;

    writeln!(writer, "# pt-trimmer evolve")?;
    writeln!(writer, "# omega = {}", fmt_float(config.omega))?;
    writeln!(writer, "# gamma = {}", fmt_float(config.gamma))?;
    writeln!(writer, "# j = {}", fmt_float(config.j))?;
    writeln!(writer, "# t_max = {}", fmt_float(config.t_max))?;
    writeln!(writer, "# points = {}", config.points)?;
    writeln!(writer, "# initial = {}", config.initial)?;
    writeln!(writer, "# method = {}", config.method)?;
    writeln!(
        writer,
        "t,p_passive,p_central,p_active,re_alpha,im_alpha,re_beta,im_beta,re_xi,im_xi"
    )?;
    for ((t, state), probs) in trajectory
        .times()
        .iter()
        .zip(trajectory.states())
        .zip(trajectory.probabilities())
    {
        writeln!(
            writer,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_float(*t),
            fmt_float(probs[0]),
            fmt_float(probs[1]),
            fmt_float(probs[2]),
            fmt_float(state.alpha.re),
            fmt_float(state.alpha.im),
            fmt_float(state.beta.re),
            fmt_float(state.beta.im),
            fmt_float(state.xi.re),
            fmt_float(state.xi.im),
        )?;
    }
    writer.flush()?;
    Ok(())
}

/// Invariant suite as JSON; returns whether every invariant passed.
pub fn run_verify(config: &VerifyConfig, writer: &mut dyn Write) -> anyhow::Result<bool> {
    let report = verify_report(config)?;
    serde_json::to_writer_pretty(&mut *writer, &report)?;
    writeln!(writer)?;
    writer.flush()?;
    Ok(report.ok)
}

pub fn verify_report(config: &VerifyConfig) -> anyhow::Result<VerifyReport> {
    let opts = VerifyOptions {
        omega: config.omega,
        gamma: config.gamma,
        tol_scale: config.tol_scale,
    };
    run_invariant_suite(&opts).context("running the invariant suite")
}
