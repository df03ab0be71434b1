use wqed_core::inversion::{Branch, InversionResult, RateEstimate};
use wqed_core::prelude::*;
use wqed_core::sensing::{dd_to_strain_temperature, min_detectable, peak_shift};
use wqed_core::spectral_features::{count_emitters_with, CountPolicy, CountWarning};

use crate::config::{BranchName, MethodName, RegimeName, Scenario};
use crate::error::CliError;
use crate::table::{Cell, ResultTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Spectrum,
    Features,
    Count,
    Invert,
    Sense,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub grid_points: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub table: ResultTable,
    /// Lines for stderr.
    pub diagnostics: Vec<String>,
}

pub fn run_command(command: Command, scenario: &Scenario, options: RunOptions) -> Result<CommandOutput, CliError> {
    match command {
        Command::Spectrum => spectrum(scenario, options),
        Command::Features => features(scenario, options),
        Command::Count => count(scenario, options),
        Command::Invert => invert(scenario, options),
        Command::Sense => sense(scenario),
    }
}

fn output(table: ResultTable) -> CommandOutput {
    CommandOutput { table, diagnostics: Vec::new() }
}

fn measure(scenario: &Scenario, emitters: EmitterArray, options: RunOptions) -> Result<FeatureSet, CliError> {
    let grid = scenario.grid_for(&emitters, options.grid_points)?;
    let model = ForwardModel::new(emitters, scenario.waveguide()?);
    let spectrum = model.spectrum(&grid)?;
    Ok(find_extrema(&spectrum, &model)?)
}

fn spectrum(scenario: &Scenario, options: RunOptions) -> Result<CommandOutput, CliError> {
    let emitters = scenario.probed_emitters()?;
    let grid = scenario.grid_for(&emitters, options.grid_points)?;
    let spectrum = compute_spectrum(&emitters, &grid, &scenario.waveguide()?)?;
    let mut table = ResultTable::new("spectrum", &["detuning", "re_r", "im_r", "R", "T"]);
    for i in 0..spectrum.len() {
        let r = spectrum.r()[i];
        table.push(vec![
            spectrum.grid()[i].into(),
            r.re.into(),
            r.im.into(),
            spectrum.reflectivity()[i].into(),
            spectrum.transmissivity()[i].into(),
        ]);
    }
    Ok(output(table))
}

fn features(scenario: &Scenario, options: RunOptions) -> Result<CommandOutput, CliError> {
    let set = measure(scenario, scenario.probed_emitters()?, options)?;
    let mut rows: Vec<(f64, Vec<Cell>)> = Vec::new();
    for p in &set.peaks {
        rows.push((p.center, vec![Cell::Text("peak".into()), p.center.into(), p.height.into(), p.fwhm.into()]));
    }
    for d in &set.dips {
        rows.push((d.center, vec![Cell::Text("dip".into()), d.center.into(), d.depth.into(), Cell::Missing]));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut table = ResultTable::new("features", &["kind", "center", "value", "fwhm"]);
    for (_, row) in rows {
        table.push(row);
    }
    Ok(output(table))
}

fn count(scenario: &Scenario, options: RunOptions) -> Result<CommandOutput, CliError> {
    let emitters = scenario.probed_emitters()?;
    let counting = scenario.config.counting.as_ref();
    let regime = match counting.and_then(|c| c.regime) {
        Some(RegimeName::Lossless) => Regime::Lossless,
        Some(RegimeName::Lossy) => Regime::Lossy,
        None if emitters.is_lossless() => Regime::Lossless,
        None => Regime::Lossy,
    };
    let mut policy = CountPolicy::default();
    if let Some(c) = counting {
        policy.min_relative_prominence = c.min_relative_prominence;
    }
    let set = measure(scenario, emitters, options)?;
    let result = count_emitters_with(&set, regime, &policy);
    let mut table = ResultTable::new("count", &["regime", "features", "emitters"]);
    let regime_name = match regime {
        Regime::Lossless => "lossless",
        Regime::Lossy => "lossy",
    };
    table.push(vec![
        Cell::Text(regime_name.into()),
        Cell::Integer(result.features as i64),
        Cell::Integer(result.emitters as i64),
    ]);
    let diagnostics = result
        .warnings
        .iter()
        .map(|w| match w {
            CountWarning::LossInLosslessSpectrum { max_loss } => {
                format!("warning: spectrum treated as lossless but 1 - R - T reaches {max_loss:.3e}")
            }
        })
        .collect();
    Ok(CommandOutput { table, diagnostics })
}

fn invert(scenario: &Scenario, options: RunOptions) -> Result<CommandOutput, CliError> {
    let Some(block) = &scenario.config.inversion else {
        return Err(CliError::validation("inversion", None, "the invert command needs an [inversion] block"));
    };
    let waveguide = scenario.waveguide()?;
    let mut diagnostics = Vec::new();
    let result = match block.method {
        MethodName::LosslessDip => {
            let emitters = scenario.emitters()?;
            let gamma_wg = emitters.emitters()[0].gamma_wg;
            let features = measure(scenario, emitters, options)?;
            let base = invert_lossless(&features, gamma_wg, block.branch, &waveguide)?;
            match (block.branch, &scenario.config.gradient) {
                (None, Some(gradient)) => {
                    let shifted = measure(scenario, scenario.probed_emitters()?, options)?;
                    let found = disambiguate_branch(
                        &shifted,
                        gradient.g,
                        base.separation,
                        &scenario.branch_search(gamma_wg),
                        &waveguide,
                    )?;
                    InversionResult { separation: found.separation, branch: Branch::Resolved(found.branch), ..base }
                }
                (None, None) => {
                    diagnostics.push("note: branch unresolved, separation reported modulo half a wavelength".into());
                    base
                }
                (Some(_), _) => base,
            }
        }
        MethodName::LossyFit => {
            let features = measure(scenario, scenario.probed_emitters()?, options)?;
            invert_lossy(&features, &scenario.separation_search(), &waveguide)?
        }
        MethodName::PerEmitter => {
            let Some(gradient) = &scenario.config.gradient else {
                return Err(CliError::validation("gradient", None, "per-emitter inversion needs a [gradient] block"));
            };
            let features = measure(scenario, scenario.probed_emitters()?, options)?;
            extract_per_emitter(&features, gradient.g)?
        }
    };
    for alt in &result.alternatives {
        diagnostics.push(format!(
            "warning: competing minimum at d = {:.8e} with residual {:.8e}",
            alt.separation, alt.residual
        ));
    }

    let mut table = ResultTable::new("invert", &["d", "n", "gamma_wg", "gamma_free", "residual"]);
    let n = match result.branch {
        Branch::Resolved(n) => Cell::Integer(n.into()),
        Branch::Unresolved => Cell::Missing,
    };
    let rates = match &result.rates {
        RateEstimate::Identical(r) => vec![*r],
        RateEstimate::PerEmitter(list) => list.clone(),
    };
    for r in rates {
        table.push(vec![
            result.separation.into(),
            n.clone(),
            r.gamma_wg.into(),
            r.gamma_free.into(),
            result.residual.into(),
        ]);
    }
    Ok(CommandOutput { table, diagnostics })
}

fn sense(scenario: &Scenario) -> Result<CommandOutput, CliError> {
    let Some(block) = &scenario.config.sensing else {
        return Err(CliError::validation("sensing", None, "the sense command needs a [sensing] block"));
    };
    let emitters = scenario.emitters()?;
    let [a, b] = emitters.emitters() else {
        return Err(CliError::validation(
            "emitters",
            None,
            format!("sensing needs exactly two emitters, got {}", emitters.len()),
        ));
    };
    if a.gamma_wg != b.gamma_wg || a.gamma_free != b.gamma_free {
        return Err(CliError::validation("emitters", None, "sensing needs two identical emitters"));
    }
    let branch = match block.branch {
        BranchName::Superradiant => ProbeBranch::Superradiant,
        BranchName::Subradiant => ProbeBranch::Subradiant,
    };
    let mut config = SensingConfig::new(b.position - a.position, a.gamma_wg, a.gamma_free, branch)?;
    config.wavelength_physical_pm = block.wavelength_pm;
    config.strain_pm_per_microstrain = block.strain_pm_per_microstrain;
    config.temperature_pm_per_kelvin = block.temperature_pm_per_kelvin;
    config.resolution_factor = block.resolution_factor;
    config.waveguide = scenario.waveguide()?;
    config.validate()?;

    let mut table = ResultTable::new("sense", &["shift", "dd", "microstrain", "kelvin", "resolvable"]);
    let mut diagnostics = Vec::new();
    let mut push = |r: SensingReading| {
        if r.below_thermal_floor {
            diagnostics.push(format!("note: shift {:.8e} is below the room-temperature vibration floor", r.shift));
        }
        table.push(vec![r.shift.into(), r.dd.into(), r.microstrain.into(), r.kelvin.into(), Cell::Flag(r.resolvable)]);
    };
    for &shift in &block.shifts {
        push(read_shift(shift, &config)?);
    }
    let threshold = config.resolution_factor * config.branch_fwhm()?;
    for &dd in &block.separation_changes {
        let shift = peak_shift(dd, &config)?;
        let (microstrain, kelvin) = dd_to_strain_temperature(dd, &config);
        push(SensingReading {
            shift,
            dd,
            microstrain,
            kelvin,
            resolvable: shift.abs() >= threshold,
            below_thermal_floor: kelvin.abs() < wqed_core::sensing::THERMAL_FLOOR_KELVIN,
        });
    }
    let limit = min_detectable(&config)?;
    diagnostics.push(format!(
        "detection limit: |shift| >= {:.8e}, |dd| >= {:.8e}",
        limit.shift, limit.dd
    ));
    Ok(CommandOutput { table, diagnostics })
}
