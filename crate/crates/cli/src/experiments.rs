//! Experiment runners. Sweep points are evaluated in parallel; rows always come
//! out in sweep order.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use spinboson::hamiltonians::{matched_bohr, reference_spectrum, scheme_levels, REFERENCE_N_FOCK};
use spinboson::numerics::DEFAULT_JACOBI_TOL;
use spinboson::model::{lorentzian_j_eff, DEFAULT_DISPLACEMENT_MAX_ITER, DEFAULT_DISPLACEMENT_TOL};
use spinboson::redfield::{dsr_secular_dynamics, FourLevelModel};
use spinboson::{bohr_deviations, sigma_z_series, InitialState, ModelParams, Scheme, SecularDynamics};

use crate::config::{ExperimentConfig, Mode, SweepVariable};
use crate::table::{ResultTable, CONFIG_PREFIX};
use crate::CliError;

/// RK4 step bound for the four-level Redfield integrations.
pub const FULL_REDFIELD_MAX_DT: f64 = 0.01;

/// Output of one experiment: the table plus, for dynamics, the rate record.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: ResultTable,
    pub sidecar: Option<RateRecord>,
}

/// `ω±` and `γ1..γ4` of the secular DSR dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateRecord {
    pub omega01: f64,
    pub omega02: f64,
    pub omega_plus: [f64; 2],
    pub omega_minus: [f64; 2],
    pub gamma1: [f64; 2],
    pub gamma2: [f64; 2],
    pub gamma3: [f64; 2],
    pub gamma4: [f64; 2],
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl From<&SecularDynamics> for RateRecord {
    fn from(d: &SecularDynamics) -> Self {
        Self {
            omega01: d.omega01,
            omega02: d.omega02,
            omega_plus: pair(d.omega_plus),
            omega_minus: pair(d.omega_minus),
            gamma1: pair(d.gamma1),
            gamma2: pair(d.gamma2),
            gamma3: pair(d.gamma3),
            gamma4: pair(d.gamma4),
        }
    }
}

pub fn run(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let mut outcome = match config.mode {
        Mode::Spectrum => Outcome {
            table: run_spectrum(config)?,
            sidecar: None,
        },
        Mode::Deviations => Outcome {
            table: run_deviations(config)?,
            sidecar: None,
        },
        Mode::Dynamics => run_dynamics(config)?,
        Mode::Rates => Outcome {
            table: run_rates(config)?,
            sidecar: None,
        },
        Mode::Jeff => Outcome {
            table: run_jeff(config)?,
            sidecar: None,
        },
    };
    attach_metadata(&mut outcome.table, config);
    if let Some(rec) = &outcome.sidecar {
        let t = &mut outcome.table;
        t.meta("sidecar.omega01", rec.omega01.to_string());
        t.meta("sidecar.omega02", rec.omega02.to_string());
        for (name, v) in [
            ("omega_plus", rec.omega_plus),
            ("omega_minus", rec.omega_minus),
            ("gamma1", rec.gamma1),
            ("gamma2", rec.gamma2),
            ("gamma3", rec.gamma3),
            ("gamma4", rec.gamma4),
        ] {
            t.meta(format!("sidecar.{name}"), format!("{} {}", v[0], v[1]));
        }
    }
    Ok(outcome)
}

fn attach_metadata(table: &mut ResultTable, config: &ExperimentConfig) {
    let mut meta = vec![(
        "generator".to_string(),
        format!("spinboson {}", env!("CARGO_PKG_VERSION")),
    )];
    for (k, v) in config.to_key_values().iter() {
        // The output location and format do not affect the numbers.
        if k == "out" || k == "format" {
            continue;
        }
        meta.push((format!("{CONFIG_PREFIX}{k}"), v.clone()));
    }
    meta.push(("tolerance.displacement".into(), DEFAULT_DISPLACEMENT_TOL.to_string()));
    meta.push((
        "tolerance.displacement_max_iter".into(),
        DEFAULT_DISPLACEMENT_MAX_ITER.to_string(),
    ));
    meta.push(("tolerance.jacobi_off_diagonal".into(), DEFAULT_JACOBI_TOL.to_string()));
    meta.push(("tolerance.redfield_max_dt".into(), FULL_REDFIELD_MAX_DT.to_string()));
    meta.push(("reference.n_fock".into(), REFERENCE_N_FOCK.to_string()));
    meta.append(&mut table.metadata);
    table.metadata = meta;
}

/// `(sweep value, parameters)` for every point, in sweep order. Without a
/// sweep there is one point labelled by `Δ`.
fn sweep_points(config: &ExperimentConfig) -> (String, Vec<(f64, ModelParams)>) {
    let base = config.params;
    match &config.sweep {
        None => ("delta".into(), vec![(base.delta, base)]),
        Some(s) => {
            let points = s
                .values()
                .into_iter()
                .map(|v| {
                    let p = match s.variable {
                        SweepVariable::Delta => base.with_delta(v),
                        SweepVariable::G => base.with_g(Complex64::new(v, base.g.im)),
                    };
                    (v, p)
                })
                .collect();
            (s.variable.name().into(), points)
        }
    }
}

fn collect_rows(
    columns: Vec<String>,
    rows: Vec<Result<Vec<f64>, CliError>>,
) -> Result<ResultTable, CliError> {
    let mut table = ResultTable::new(columns);
    for row in rows {
        table.push_row(row?);
    }
    Ok(table)
}

/// Four lowest levels per scheme, ground shifted to zero.
pub fn run_spectrum(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let (var, points) = sweep_points(config);
    let mut columns = vec![var];
    for s in &config.schemes {
        for i in 0..4 {
            columns.push(format!("{s}_e{i}"));
        }
    }
    let rows = points
        .par_iter()
        .map(|(v, p)| {
            let mut row = vec![*v];
            for s in &config.schemes {
                row.extend(scheme_levels(p, *s)?.shifted());
            }
            Ok(row)
        })
        .collect();
    collect_rows(columns, rows)
}

/// Bohr-frequency deviations of each scheme from the 18-dimensional reference.
pub fn run_deviations(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let (var, points) = sweep_points(config);
    let mut columns = vec![var];
    for s in &config.schemes {
        columns.push(format!("{s}_d01"));
        columns.push(format!("{s}_d02"));
    }
    let rows = points
        .par_iter()
        .map(|(v, p)| {
            let reference = reference_spectrum(p)?;
            let mut row = vec![*v];
            for s in &config.schemes {
                let (scheme, matched) = matched_bohr(&scheme_levels(p, *s)?, &reference);
                let (d1, d2) = bohr_deviations(scheme, matched, config.deviation_mode);
                row.push(d1);
                row.push(d2);
            }
            Ok(row)
        })
        .collect();
    collect_rows(columns, rows)
}

/// `σz(t)` per scheme: secular three-level dynamics for `dsr`, full Redfield on
/// the four lowest levels for the bare truncations.
pub fn run_dynamics(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let times = config.times.values();
    let secular = dsr_secular_dynamics(&config.params, &config.rates, InitialState::default())?;
    let traces = config
        .schemes
        .par_iter()
        .map(|s| match s {
            Scheme::Dsr => Ok(sigma_z_series(&secular, &times)),
            other => {
                let model = FourLevelModel::for_scheme(&config.params, *other, &config.rates)?;
                Ok(model.sigma_z_series(&times, FULL_REDFIELD_MAX_DT)?)
            }
        })
        .collect::<Result<Vec<Vec<f64>>, CliError>>()?;
    let mut columns = vec!["t".to_string()];
    columns.extend(config.schemes.iter().map(|s| format!("{s}_sigma_z")));
    let mut table = ResultTable::new(columns);
    for (i, t) in times.iter().enumerate() {
        let mut row = vec![*t];
        row.extend(traces.iter().map(|tr| tr[i]));
        table.push_row(row);
    }
    Ok(Outcome {
        table,
        sidecar: Some(RateRecord::from(&secular)),
    })
}

/// Secular rates and complex frequencies across the sweep.
pub fn run_rates(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let (var, points) = sweep_points(config);
    let mut columns = vec![var, "omega01".into(), "omega02".into()];
    for name in ["gamma1", "gamma2", "gamma3", "gamma4", "omega_plus", "omega_minus"] {
        columns.push(format!("{name}_re"));
        columns.push(format!("{name}_im"));
    }
    let rows = points
        .par_iter()
        .map(|(v, p)| {
            let d = dsr_secular_dynamics(p, &config.rates, InitialState::default())?;
            let mut row = vec![*v, d.omega01, d.omega02];
            for z in [d.gamma1, d.gamma2, d.gamma3, d.gamma4, d.omega_plus, d.omega_minus] {
                row.push(z.re);
                row.push(z.im);
            }
            Ok(row)
        })
        .collect();
    collect_rows(columns, rows)
}

/// The Lorentzian effective density on `[0, omega_max]`.
pub fn run_jeff(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let j = config
        .jeff
        .ok_or_else(|| CliError::Config("jeff mode needs 'jeff.alpha'".into()))?;
    let mut table = ResultTable::new(vec!["omega".into(), "j_eff".into()]);
    for i in 0..j.points {
        let w = j.omega_max * i as f64 / (j.points - 1) as f64;
        table.push_row(vec![w, lorentzian_j_eff(j.alpha, j.omega_peak, j.kappa, w)?]);
    }
    Ok(table)
}
