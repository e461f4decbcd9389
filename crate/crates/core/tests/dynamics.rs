use spinboson::redfield::{dsr_secular_dynamics, FourLevelModel};
use spinboson::{sigma_z_series, Complex64, InitialState, ModelParams, RateOptions, Scheme};

fn resonant() -> ModelParams {
    ModelParams::new(1.0, 1.0, Complex64::new(0.3, 0.0), 0.02, 10.0, 0.1).unwrap()
}

fn times() -> Vec<f64> {
    (0..=400).map(|i| 0.25 * i as f64).collect()
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn gap_to_reference(lamb_shift: bool) -> f64 {
    let p = resonant();
    let opts = RateOptions {
        lamb_shift,
        ..RateOptions::default()
    };
    let t = times();
    let secular = dsr_secular_dynamics(&p, &opts, InitialState::default()).unwrap();
    let reference = FourLevelModel::for_scheme(&p, Scheme::Exact18, &opts)
        .unwrap()
        .sigma_z_series(&t, 0.01)
        .unwrap();
    max_gap(&sigma_z_series(&secular, &t), &reference)
}

#[test]
fn secular_trace_tracks_truncated_reference_without_shifts() {
    assert!(gap_to_reference(false) <= 0.05);
}

#[test]
fn principal_value_shifts_move_the_trace_away_from_reference() {
    assert!(gap_to_reference(true) > gap_to_reference(false));
}

#[test]
fn secular_and_full_redfield_agree_in_the_same_basis() {
    let p = resonant();
    let opts = RateOptions {
        lamb_shift: false,
        ..RateOptions::default()
    };
    let t = times();
    let secular = dsr_secular_dynamics(&p, &opts, InitialState::default()).unwrap();
    let full = FourLevelModel::for_scheme(&p, Scheme::Dsr, &opts)
        .unwrap()
        .sigma_z_series(&t, 0.01)
        .unwrap();
    assert!(max_gap(&sigma_z_series(&secular, &t), &full) <= 0.02);
}

#[test]
fn trace_decays_towards_thermal_value() {
    let p = resonant();
    let secular = dsr_secular_dynamics(&p, &RateOptions::default(), InitialState::default()).unwrap();
    let late = secular.sigma_z(2000.0).abs();
    assert!(late < 1e-6, "{late}");
    assert!((secular.sigma_z(0.0) - 1.0).abs() < 1e-14);
}

#[test]
fn decoupled_bath_leaves_oscillation_undamped() {
    let p = ModelParams::new(1.0, 1.0, Complex64::new(0.3, 0.0), 0.0, 10.0, 0.1).unwrap();
    let secular = dsr_secular_dynamics(&p, &RateOptions::default(), InitialState::default()).unwrap();
    assert!(secular.omega_plus.im.abs() < 1e-15);
    assert!(secular.omega_minus.im.abs() < 1e-15);
}
