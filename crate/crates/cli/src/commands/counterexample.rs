use heat_series_core::counterexample::{run_audit, AuditGrid, FlatBump, FlatBumpParams};

use super::{to_value, CommandOutput};
use crate::args::Options;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{fmt_f64, Table};

pub fn run(opts: &Options, config: &mut RunConfig) -> Result<CommandOutput, CliError> {
    let params = FlatBumpParams::new(
        opts.beta.unwrap_or(4.0),
        opts.theta,
        opts.epsilon.unwrap_or(1.0),
        opts.t_shift.unwrap_or(1.0),
    )?;
    let bump = if opts.exact {
        if params.integer_beta().is_none() {
            return Err(CliError::usage(format!(
                "--exact needs an integer beta (2..=1024), got {}",
                params.beta
            )));
        }
        FlatBump::new(params)
    } else {
        FlatBump::floating(params)
    };

    let mut grid = AuditGrid::default();
    if let Some(x_max) = opts.xmax {
        grid.growth_x_max = x_max;
    }
    if let Some(kmax) = opts.kmax {
        grid.kmax = kmax;
    }
    if !opts.times.is_empty() {
        grid.residual_t = opts
            .times
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|t| *t > 0.0 && t.is_finite())
                    .ok_or_else(|| CliError::usage(format!("counterexample times must be positive, got {s:?}")))
            })
            .collect::<Result<_, _>>()?;
    }
    let report = run_audit(&bump, &grid)?;

    config.beta = Some(params.beta);
    config.theta = Some(params.theta);
    config.epsilon = Some(params.epsilon);
    config.t_shift = Some(params.t_shift);
    config.xmax = Some(grid.growth_x_max);
    config.kmax = Some(grid.kmax);
    config.t = grid.residual_t.iter().map(|t| t.to_string()).collect();

    let mut table = Table::new(vec!["x", "j", "m", "ln_abs"]);
    for row in &report.flatness_table {
        for (i, v) in row.ln_abs.iter().enumerate() {
            table.push(vec![row.x.to_string(), row.j.to_string(), (i + 1).to_string(), fmt_f64(*v)]);
        }
    }
    Ok(CommandOutput { result: to_value(&report)?, table, pass: report.pass, mode: bump.mode() })
}
